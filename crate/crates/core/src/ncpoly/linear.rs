use std::collections::{BTreeMap, BTreeSet};

use super::rules::reduce_linear;
use super::{NcPoly, RelationSet, Sym, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinearError {
    #[error("linear oracle needs {needed} words, above the limit of {limit}")]
    TooLarge { needed: usize, limit: usize },
}

fn words_up_to(n_gens: usize, len: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..n_gens as Sym {
                let mut v: Vec<Sym> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Reduction of `p` modulo the span of all `u * r * v` of length at most
/// `degree`, where `r` runs over the relations of `rel`. The result lies in
/// the span of the words that are not leading words of that span.
pub fn linear_normal_form(p: &NcPoly, rel: &RelationSet, degree: usize) -> Result<NcPoly, LinearError> {
    let n = rel.alphabet().len();
    let needed: usize = (0..=degree).map(|d| n.saturating_pow(d as u32)).sum();
    let limit = rel.budget().max_words;
    if needed > limit {
        return Err(LinearError::TooLarge { needed, limit });
    }
    let relations = rel.relations();
    let mut rows = Vec::new();
    for r in &relations {
        let Some(d) = r.degree() else { continue };
        if d > degree {
            continue;
        }
        let pads = words_up_to(n, degree - d);
        for u in &pads {
            for v in &pads {
                if u.len() + v.len() + d <= degree {
                    rows.push(r.sandwich(u, v));
                }
            }
        }
    }
    let mut pivots: BTreeMap<Word, NcPoly> = BTreeMap::new();
    for row in rows {
        let r = reduce_linear(row, &pivots);
        if let Some((w, _)) = r.leading() {
            let w = w.clone();
            pivots.insert(w, r.monic());
        }
    }
    Ok(reduce_linear(p.clone(), &pivots))
}

/// Words of length at most `degree` that lead no element of the relation span.
pub fn standard_words(rel: &RelationSet, degree: usize) -> BTreeSet<Word> {
    let n = rel.alphabet().len();
    words_up_to(n, degree)
        .into_iter()
        .map(|w| Word::from_slice(&w))
        .filter(|w| {
            !rel
                .rules()
                .iter()
                .any(|r| r.lhs.len() <= w.len() && w.windows(r.lhs.len()).any(|x| x == &r.lhs[..]))
        })
        .collect()
}
