use super::{NcPoly, NormalFormError, RelationSet, Word};
use crate::exec::Exec;

/// An overlap word whose two reduction orders disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub word: Word,
    /// Difference of the two normal forms.
    pub residue: NcPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub violations: Vec<Violation>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Diamond-lemma check on all overlaps of rule left sides of total length
/// at most `max_degree`.
pub fn check_confluence(
    rel: &RelationSet,
    max_degree: usize,
    exec: Exec,
) -> Result<ConfluenceReport, NormalFormError> {
    let rules = rel.rules();
    // (first rule, second rule, overlap length)
    let mut jobs = Vec::new();
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            let max_k = r1.lhs.len().min(r2.lhs.len());
            for k in 1..max_k {
                if r1.lhs.len() + r2.lhs.len() - k > max_degree {
                    continue;
                }
                if r1.lhs[r1.lhs.len() - k..] == r2.lhs[..k] {
                    jobs.push((i, j, k));
                }
            }
        }
    }
    let results = exec.map_with(
        &jobs,
        || rel.reducer(),
        |red, &(i, j, k)| -> Result<Option<Violation>, NormalFormError> {
            let (r1, r2) = (&rules[i], &rules[j]);
            let word = r1.lhs.concat(&r2.lhs[k..]);
            let left = r1.rhs.sandwich(&[], &r2.lhs[k..]);
            let right = r2.rhs.sandwich(&r1.lhs[..r1.lhs.len() - k], &[]);
            let residue = red.reduce(&(&left - &right))?;
            Ok((!residue.is_zero()).then_some(Violation { word, residue }))
        },
    );
    let mut violations = Vec::new();
    for r in results {
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok(ConfluenceReport {
        overlaps_checked: jobs.len(),
        violations,
    })
}

/// Adds the residues of failing overlaps as new relations until every
/// overlap of length at most `max_degree` resolves. For homogeneous
/// relations the result gives canonical normal forms up to that degree.
pub fn complete(rel: &RelationSet, max_degree: usize, exec: Exec) -> Result<RelationSet, NormalFormError> {
    let mut cur = rel.clone();
    loop {
        let report = check_confluence(&cur, max_degree, exec)?;
        if report.is_confluent() {
            return Ok(cur);
        }
        let mut relations = cur.relations();
        relations.extend(report.violations.into_iter().map(|v| v.residue));
        cur = RelationSet::with_budget(cur.alphabet().clone(), relations, cur.budget())?;
    }
}
