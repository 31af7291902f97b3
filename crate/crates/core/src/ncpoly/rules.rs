use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use super::{Alphabet, NcPoly, Sym, Word};
use crate::config::Budget;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("rewriting exceeded the budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("the relations imply 1 = 0")]
    Trivial,
}

/// `lhs -> rhs`, with every word of `rhs` smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NcPoly,
}

impl Rule {
    pub fn relation(&self) -> NcPoly {
        &NcPoly::word(self.lhs.clone()) - &self.rhs
    }
}

/// A presented algebra: ordered generators and an inter-reduced rewriting
/// system.
#[derive(Debug, Clone)]
pub struct RelationSet {
    alphabet: Arc<Alphabet>,
    rules: Vec<Rule>,
    index: HashMap<Word, usize>,
    by_first: Vec<Vec<usize>>,
    unresolved: Vec<NcPoly>,
    budget: Budget,
}

impl RelationSet {
    /// Orients and inter-reduces `relations` (each meaning `p = 0`).
    pub fn new(alphabet: Arc<Alphabet>, relations: Vec<NcPoly>) -> Result<Self, NormalFormError> {
        Self::with_budget(alphabet, relations, Budget::default())
    }

    pub fn with_budget(
        alphabet: Arc<Alphabet>,
        relations: Vec<NcPoly>,
        budget: Budget,
    ) -> Result<Self, NormalFormError> {
        let mut basis = echelon(relations);
        loop {
            if basis.iter().any(|p| p.as_constant().is_some()) {
                return Err(NormalFormError::Trivial);
            }
            let rs = Self::from_basis(&alphabet, &basis, budget);
            let clash = rs.rules.iter().position(|r| {
                rs.rules
                    .iter()
                    .any(|o| o.lhs != r.lhs && contains(&r.lhs, &o.lhs))
            });
            let Some(i) = clash else {
                let mut red = rs.reducer();
                let mut rules = Vec::with_capacity(rs.rules.len());
                for r in &rs.rules {
                    rules.push(Rule {
                        lhs: r.lhs.clone(),
                        rhs: red.reduce(&r.rhs)?,
                    });
                }
                return Ok(Self::from_rules_budget(alphabet, rules, budget));
            };
            let p = basis.remove(i);
            let others = Self::from_basis(&alphabet, &basis, budget);
            let r = others.normal_form(&p)?;
            basis.push(r);
            basis = echelon(basis);
        }
    }

    fn from_basis(alphabet: &Arc<Alphabet>, basis: &[NcPoly], budget: Budget) -> Self {
        let rules = basis
            .iter()
            .map(|p| {
                let (lhs, _) = p.leading().expect("nonzero");
                let lhs = lhs.clone();
                let mut rhs = -p;
                rhs.take_term(&lhs);
                Rule { lhs, rhs }
            })
            .collect();
        Self::from_rules_budget(alphabet.clone(), rules, budget)
    }

    /// Uses `rules` verbatim, without orientation or inter-reduction.
    pub fn from_rules(alphabet: Arc<Alphabet>, rules: Vec<Rule>) -> Self {
        Self::from_rules_budget(alphabet, rules, Budget::default())
    }

    fn from_rules_budget(alphabet: Arc<Alphabet>, mut rules: Vec<Rule>, budget: Budget) -> Self {
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let mut by_first = vec![Vec::new(); alphabet.len()];
        let mut index = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            index.insert(r.lhs.clone(), i);
            if let Some(&f) = r.lhs.first() {
                by_first[f as usize].push(i);
            }
        }
        for v in by_first.iter_mut() {
            v.sort_by_key(|&i| rules[i].lhs.len());
        }
        Self {
            alphabet,
            rules,
            index,
            by_first,
            unresolved: Vec::new(),
            budget,
        }
    }

    pub fn set_budget(&mut self, budget: Budget) {
        self.budget = budget;
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_for(&self, lhs: &Word) -> Option<&Rule> {
        self.index.get(lhs).map(|&i| &self.rules[i])
    }

    pub fn unresolved(&self) -> &[NcPoly] {
        &self.unresolved
    }

    /// The relations `lhs - rhs` of all rules.
    pub fn relations(&self) -> Vec<NcPoly> {
        self.rules.iter().map(Rule::relation).collect()
    }

    /// A fresh reducer; reuse one across many reductions to share its cache.
    pub fn reducer(&self) -> Reducer<'_> {
        Reducer {
            rel: self,
            cache: HashMap::new(),
            steps: 0,
        }
    }

    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly, NormalFormError> {
        self.reducer().reduce(p)
    }

    pub fn equals_mod(&self, p: &NcPoly, r: &NcPoly) -> Result<bool, NormalFormError> {
        Ok(self.normal_form(&(p - r))?.is_zero())
    }

    /// Rules whose left side starts with `s`, shortest first.
    fn starting_with(&self, s: Sym) -> impl Iterator<Item = &Rule> {
        self.by_first[s as usize].iter().map(|&i| &self.rules[i])
    }
}

fn contains(hay: &[Sym], needle: &[Sym]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Linear row reduction on exact words. Returns monic rows with distinct
/// leading words, each free of the other rows' leading words.
pub(crate) fn echelon(polys: Vec<NcPoly>) -> Vec<NcPoly> {
    let mut pivots: BTreeMap<Word, NcPoly> = BTreeMap::new();
    for p in polys {
        let r = reduce_linear(p, &pivots);
        if let Some((w, _)) = r.leading() {
            let w = w.clone();
            pivots.insert(w, r.monic());
        }
    }
    let keys: Vec<Word> = pivots.keys().cloned().collect();
    for k in keys {
        let row = pivots.remove(&k).unwrap();
        let row = reduce_linear_tail(row, &k, &pivots);
        pivots.insert(k, row);
    }
    pivots.into_values().collect()
}

/// Removes every pivot word from `p`, from the largest down.
pub(crate) fn reduce_linear(mut p: NcPoly, pivots: &BTreeMap<Word, NcPoly>) -> NcPoly {
    let mut bound: Option<Word> = None;
    loop {
        let next = match &bound {
            None => p.terms_map().keys().rev().find(|w| pivots.contains_key(*w)),
            Some(b) => p
                .terms_map()
                .range(..b.clone())
                .rev()
                .map(|(w, _)| w)
                .find(|w| pivots.contains_key(*w)),
        }
        .cloned();
        let Some(w) = next else { return p };
        let c = p.coeff(&w);
        p.add_scaled(&pivots[&w], &-c);
        bound = Some(w);
    }
}

fn reduce_linear_tail(row: NcPoly, lead: &Word, pivots: &BTreeMap<Word, NcPoly>) -> NcPoly {
    let mut tail = row.clone();
    let c = tail.take_term(lead).expect("leading term");
    let tail = reduce_linear(tail, pivots);
    &tail + &NcPoly::term(c, lead.clone())
}

/// Memoized rewriting to normal form. A normal word stays normal when
/// letters are removed from its front, so normalizing `x * v` for normal
/// `v` only needs rules matching a prefix.
pub struct Reducer<'a> {
    rel: &'a RelationSet,
    cache: HashMap<Word, NcPoly>,
    steps: u64,
}

impl Reducer<'_> {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn reduce(&mut self, p: &NcPoly) -> Result<NcPoly, NormalFormError> {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let n = self.word(w)?;
            out.add_scaled(&n, c);
        }
        Ok(out)
    }

    pub fn is_zero_mod(&mut self, p: &NcPoly) -> Result<bool, NormalFormError> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Normal form of a single word.
    pub fn word(&mut self, w: &[Sym]) -> Result<NcPoly, NormalFormError> {
        if w.is_empty() {
            return Ok(NcPoly::one());
        }
        if let Some(p) = self.cache.get(w) {
            return Ok(p.clone());
        }
        let tail = self.word(&w[1..])?;
        let r = self.insert(w[0], &tail)?;
        self.cache.insert(Word::from_slice(w), r.clone());
        Ok(r)
    }

    /// `x * p` for `p` in normal form.
    fn insert(&mut self, x: Sym, p: &NcPoly) -> Result<NcPoly, NormalFormError> {
        let rel = self.rel;
        let mut out = NcPoly::zero();
        for (v, c) in p.terms() {
            let mut xv = Word::letter(x);
            xv.0.extend_from_slice(v);
            let hit = rel
                .starting_with(x)
                .find(|r| r.lhs.len() <= xv.len() && xv[..r.lhs.len()] == r.lhs[..]);
            let Some(rule) = hit else {
                out.add_term(xv, c.clone());
                continue;
            };
            self.steps += 1;
            if self.steps > rel.budget.max_steps {
                return Err(NormalFormError::BudgetExceeded(rel.budget.max_steps));
            }
            let tail = &xv[rule.lhs.len()..];
            for (u, d) in rule.rhs.terms() {
                let n = self.word(&u.concat(tail))?;
                out.add_scaled(&n, &(c * d));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QCoeff;

    /// a, b with b*a = q^-1 a*b and the inverse pair for a.
    fn quantum_plane() -> RelationSet {
        let mut al = Alphabet::new();
        al.push("a", 0);
        al.push("b", 0);
        let al = Arc::new(al);
        let ba = al.parse("b*a - q^-1*a*b").unwrap();
        RelationSet::new(al, vec![ba]).unwrap()
    }

    #[test]
    fn orients_leading_word() {
        let rs = quantum_plane();
        assert_eq!(rs.rules().len(), 1);
        let al = rs.alphabet().clone();
        assert_eq!(rs.rules()[0].lhs, Word::from_slice(&[1, 0]));
        let nf = rs.normal_form(&al.parse("b*b*a").unwrap()).unwrap();
        assert_eq!(nf, al.parse("q^-2*a*b^2").unwrap());
    }

    #[test]
    fn dependent_relations_are_dropped() {
        let mut al = Alphabet::new();
        al.push("a", 0);
        al.push("b", 0);
        let al = Arc::new(al);
        let r1 = al.parse("b*a - q*a*b").unwrap();
        let r2 = r1.scale(&QCoeff::lambda());
        let rs = RelationSet::new(al, vec![r1, r2, NcPoly::zero()]).unwrap();
        assert_eq!(rs.rules().len(), 1);
    }

    #[test]
    fn budget_guard_fires() {
        let mut al = Alphabet::new();
        al.push("a", 0);
        al.push("b", 0);
        let al = Arc::new(al);
        // b*a -> a*b is fine; a long word needs many steps.
        let mut rs = RelationSet::new(al.clone(), vec![al.parse("b*a - a*b").unwrap()]).unwrap();
        rs.set_budget(Budget {
            max_steps: 3,
            ..Budget::default()
        });
        let w = al.parse("b*b*b*a*a*a").unwrap();
        assert_eq!(rs.normal_form(&w), Err(NormalFormError::BudgetExceeded(3)));
    }

    #[test]
    fn inhomogeneous_interreduction() {
        let mut al = Alphabet::new();
        let x = al.push("x", 0);
        al.push_inverse(x);
        let al = Arc::new(al);
        let rels = vec![
            al.parse("x*x^-1 - 1").unwrap(),
            al.parse("x^-1*x - 1").unwrap(),
            al.parse("x*x*x^-1 - x").unwrap(),
        ];
        let rs = RelationSet::new(al.clone(), rels).unwrap();
        assert_eq!(rs.rules().len(), 2);
        let nf = rs.normal_form(&al.parse("x^-1*x^-1*x*x*x").unwrap()).unwrap();
        assert_eq!(nf, al.parse("x").unwrap());
    }
}
