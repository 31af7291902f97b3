//! The algebra generated by the Gauss factors `T_L`, `T_D`, `T_U`.
//!
//! Generators are ordered `l` block (row-major), then `A[1], A[1]^-1, A[2],
//! ...`, then the `u` block, so normal words read `l* A* u*`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::One;

use crate::coeff::QCoeff;
use crate::config::Budget;
use crate::ncpoly::{Alphabet, NcPoly, RelationSet, Sym, Word};
use crate::qlinalg::{graded_tensor, QMatrix};
use crate::rmatrix::{CMetric, RMatrix};

use super::GaussError;

/// Custom generator names, keyed by zero-based indices. Missing entries
/// use `l[i,j]`, `A[i]`, `u[i,j]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GaussNames {
    pub l: BTreeMap<(usize, usize), String>,
    pub a: BTreeMap<usize, String>,
    pub u: BTreeMap<(usize, usize), String>,
}

/// One matrix identity `lhs = rhs` between factor matrices.
#[derive(Debug, Clone)]
pub struct MatrixIdentity {
    pub name: &'static str,
    pub lhs: QMatrix,
    pub rhs: QMatrix,
}

impl MatrixIdentity {
    fn new(name: &'static str, lhs: QMatrix, rhs: QMatrix) -> Self {
        Self { name, lhs, rhs }
    }

    pub fn difference(&self) -> QMatrix {
        &self.lhs - &self.rhs
    }
}

/// A generator removed by the supplementary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub symbol: Sym,
    pub value: NcPoly,
}

#[derive(Debug, Clone)]
pub struct GaussAlgebra {
    n: usize,
    parity: Vec<u8>,
    alphabet: Arc<Alphabet>,
    rel: RelationSet,
    l: BTreeMap<(usize, usize), Sym>,
    a: Vec<Sym>,
    a_inv: Vec<Sym>,
    u: BTreeMap<(usize, usize), Sym>,
    eliminated: Vec<Elimination>,
    subs: BTreeMap<Sym, NcPoly>,
}

/// Factor matrices over a given substitution.
#[derive(Debug, Clone)]
pub struct FactorMatrices {
    pub tl: QMatrix,
    pub td: QMatrix,
    pub td_inv: QMatrix,
    pub tu: QMatrix,
}

impl FactorMatrices {
    pub fn t_plus(&self) -> QMatrix {
        &self.td * &self.tu
    }

    pub fn t_minus(&self) -> QMatrix {
        &self.tl * &self.td
    }

    pub fn product(&self) -> QMatrix {
        &(&self.tl * &self.td) * &self.tu
    }
}

fn tensor1(x: &QMatrix, parity: &[u8]) -> QMatrix {
    graded_tensor(x, &QMatrix::identity(parity.len()), parity)
}

fn tensor2(x: &QMatrix, parity: &[u8]) -> QMatrix {
    graded_tensor(&QMatrix::identity(parity.len()), x, parity)
}

fn prod(ms: &[&QMatrix]) -> QMatrix {
    let mut it = ms.iter();
    let first = (*it.next().expect("nonempty")).clone();
    it.fold(first, |acc, m| &acc * m)
}

/// Relations between diagonal and triangular factors, and between the two
/// triangular factors. These seed the relation table.
pub fn seed_identities(r: &RMatrix, f: &FactorMatrices) -> Vec<MatrixIdentity> {
    let p = r.parity();
    let rd = r.diagonal_part().to_qmatrix();
    let (tl1, tl2) = (tensor1(&f.tl, p), tensor2(&f.tl, p));
    let (tu1, tu2) = (tensor1(&f.tu, p), tensor2(&f.tu, p));
    let (td1, td2) = (tensor1(&f.td, p), tensor2(&f.td, p));
    type I = MatrixIdentity;
    vec![
        I::new("RD TD1 TL2 = TL2 TD1 RD", prod(&[&rd, &td1, &tl2]), prod(&[&tl2, &td1, &rd])),
        I::new("RD TD2 TL1 = TL1 TD2 RD", prod(&[&rd, &td2, &tl1]), prod(&[&tl1, &td2, &rd])),
        I::new("RD TU1 TD2 = TD2 TU1 RD", prod(&[&rd, &tu1, &td2]), prod(&[&td2, &tu1, &rd])),
        I::new("RD TU2 TD1 = TD1 TU2 RD", prod(&[&rd, &tu2, &td1]), prod(&[&td1, &tu2, &rd])),
        I::new("TU1 TL2 = TL2 TU1", prod(&[&tu1, &tl2]), prod(&[&tl2, &tu1])),
    ]
}

/// `R X1 X2 = X2 X1 R`.
pub fn frt_identity(name: &'static str, r: &RMatrix, x: &QMatrix) -> MatrixIdentity {
    let p = r.parity();
    let rm = r.to_qmatrix();
    let (x1, x2) = (tensor1(x, p), tensor2(x, p));
    MatrixIdentity::new(name, prod(&[&rm, &x1, &x2]), prod(&[&x2, &x1, &rm]))
}

/// Every matrix identity checked on a decomposition. `reflection` adds the
/// reflection-equation forms, which need `[R, RD] = 0`.
pub fn factor_identities(r: &RMatrix, f: &FactorMatrices, reflection: bool) -> Vec<MatrixIdentity> {
    let p = r.parity();
    let rm = r.to_qmatrix();
    let rd = r.diagonal_part().to_qmatrix();
    let rdi = r.diagonal_part().inverse().expect("diagonal part is invertible").to_qmatrix();
    let (tl1, tl2) = (tensor1(&f.tl, p), tensor2(&f.tl, p));
    let (tu1, tu2) = (tensor1(&f.tu, p), tensor2(&f.tu, p));
    let (td1, td2) = (tensor1(&f.td, p), tensor2(&f.td, p));
    let tp = f.t_plus();
    let tm = f.t_minus();
    let tp1 = tensor1(&tp, p);
    let tm2 = tensor2(&tm, p);
    type I = MatrixIdentity;
    let mut out = vec![
        frt_identity("R T+1 T+2 = T+2 T+1 R", r, &tp),
        frt_identity("R T-1 T-2 = T-2 T-1 R", r, &tm),
        I::new("A1 A2 = A2 A1", prod(&[&td1, &td2]), prod(&[&td2, &td1])),
        I::new("RD A1 T-2 = T-2 A1 RD", prod(&[&rd, &td1, &tm2]), prod(&[&tm2, &td1, &rd])),
        I::new("RD T+1 A2 = A2 T+1 RD", prod(&[&rd, &tp1, &td2]), prod(&[&td2, &tp1, &rd])),
        I::new("RD T+1 T-2 = T-2 T+1 RD", prod(&[&rd, &tp1, &tm2]), prod(&[&tm2, &tp1, &rd])),
        I::new(
            "R RD^-1 TU1 RD TU2 = RD^-1 TU2 RD TU1 R",
            prod(&[&rm, &rdi, &tu1, &rd, &tu2]),
            prod(&[&rdi, &tu2, &rd, &tu1, &rm]),
        ),
        I::new(
            "R TL1 RD^-1 TL2 RD = TL2 RD^-1 TL1 RD R",
            prod(&[&rm, &tl1, &rdi, &tl2, &rd]),
            prod(&[&tl2, &rdi, &tl1, &rd, &rm]),
        ),
    ];
    out.extend(seed_identities(r, f));
    out.push(I::new("RD T+1 TL2 = TL2 RD T+1", prod(&[&rd, &tp1, &tl2]), prod(&[&tl2, &rd, &tp1])));
    out.push(I::new(
        "T-2 RD^-1 TU1 = TU1 T-2 RD^-1",
        prod(&[&tm2, &rdi, &tu1]),
        prod(&[&tu1, &tm2, &rdi]),
    ));
    if reflection {
        out.push(I::new(
            "R TU1 RD TU2 = TU2 RD TU1 R",
            prod(&[&rm, &tu1, &rd, &tu2]),
            prod(&[&tu2, &rd, &tu1, &rm]),
        ));
        out.push(I::new(
            "R TL1 RD^-1 TL2 = TL2 RD^-1 TL1 R",
            prod(&[&rm, &tl1, &rdi, &tl2]),
            prod(&[&tl2, &rdi, &tl1, &rm]),
        ));
    }
    out
}

/// `X C X^t C^-1 = 1` and `C X^t C^-1 X = 1`.
pub fn supplementary_identities(x: &QMatrix, c: &CMetric) -> Vec<MatrixIdentity> {
    let cm = c.to_qmatrix();
    let ci = c.inverse().expect("metric is invertible").to_qmatrix();
    let xt = x.transpose();
    let id = QMatrix::identity(x.rows());
    vec![
        MatrixIdentity::new("T C T^t C^-1 = 1", prod(&[x, &cm, &xt, &ci]), id.clone()),
        MatrixIdentity::new("C T^t C^-1 T = 1", prod(&[&cm, &xt, &ci, x]), id),
    ]
}

fn nonzero_entries(ids: &[MatrixIdentity]) -> Vec<NcPoly> {
    ids.iter()
        .flat_map(|i| i.difference().entries().to_vec())
        .filter(|p| !p.is_zero())
        .collect()
}

impl GaussAlgebra {
    fn skeleton(parity: &[u8], names: &GaussNames) -> Self {
        let n = parity.len();
        let parity = parity.to_vec();
        let mut al = Alphabet::new();
        let mut l = BTreeMap::new();
        let mut u = BTreeMap::new();
        let mut a = Vec::new();
        let mut a_inv = Vec::new();
        let push = |al: &mut Alphabet, custom: Option<&String>, default: String, par: u8| {
            let label = custom.cloned().unwrap_or_else(|| default.clone());
            let s = al.push(label.clone(), par);
            if label != default {
                al.add_alias(default, NcPoly::generator(s));
            }
            s
        };
        for i in 0..n {
            for j in 0..i {
                let s = push(&mut al, names.l.get(&(i, j)), format!("l[{},{}]", i + 1, j + 1), (parity[i] + parity[j]) % 2);
                l.insert((i, j), s);
            }
        }
        for i in 0..n {
            let s = push(&mut al, names.a.get(&i), format!("A[{}]", i + 1), 0);
            a.push(s);
            let t = al.push_inverse(s);
            if names.a.contains_key(&i) {
                al.add_alias(format!("A[{}]^-1", i + 1), NcPoly::generator(t));
            }
            a_inv.push(t);
        }
        for i in 0..n {
            for j in i + 1..n {
                let s = push(&mut al, names.u.get(&(i, j)), format!("u[{},{}]", i + 1, j + 1), (parity[i] + parity[j]) % 2);
                u.insert((i, j), s);
            }
        }
        Self {
            n,
            parity,
            alphabet: Arc::new(al.clone()),
            rel: RelationSet::new(Arc::new(al), Vec::new()).expect("empty set"),
            l,
            a,
            a_inv,
            u,
            eliminated: Vec::new(),
            subs: BTreeMap::new(),
        }
    }

    /// The relations that follow from the diagonal part of `r` alone: the
    /// torus commutes and acts on `l` and `u` by powers of `q`.
    pub fn torus_model(r: &RMatrix, names: &GaussNames, budget: Budget) -> Result<Self, GaussError> {
        let mut g = Self::skeleton(r.parity(), names);
        let free = g.factors_free();
        let mut rels = nonzero_entries(&seed_identities(r, &free)[..4]);
        rels.extend(g.torus_relations());
        let rel = RelationSet::with_budget(g.alphabet.clone(), rels, budget)?;
        g.rel = g.with_inverse_rules(rel, budget)?;
        Ok(g)
    }

    /// Builds the relation table from the R-matrix and, when `c` is given,
    /// removes the generators fixed by the supplementary conditions.
    pub fn derive(r: &RMatrix, c: Option<&CMetric>, names: &GaussNames, budget: Budget) -> Result<Self, GaussError> {
        let mut g = Self::torus_model(r, names, budget)?;
        if let Some(c) = c {
            g.eliminate_torus(c, budget)?;
        }
        let f = g.factors();
        let torus = g.torus_set();
        let mut rels = g.rel.relations();
        rels.extend(nonzero_entries(&seed_identities(r, &f)[4..]));
        let mut red = g.rel.reducer();
        for x in [f.t_plus(), f.t_minus()] {
            for p in nonzero_entries(&[frt_identity("", r, &x)]) {
                let p = red.reduce(&p)?;
                rels.extend(split_by_torus(&p, &torus).into_values().filter(|p| !p.is_zero()));
            }
        }
        drop(red);
        g.rel = RelationSet::with_budget(g.alphabet.clone(), rels, budget)?;
        if let Some(c) = c {
            g.eliminate_linear(c, budget)?;
        }
        g.eliminate_ordered(budget)?;
        Ok(g)
    }

    fn torus_set(&self) -> BTreeSet<Sym> {
        self.a.iter().chain(&self.a_inv).copied().collect()
    }

    fn torus_relations(&self) -> Vec<NcPoly> {
        let mut out = Vec::new();
        let one = NcPoly::one();
        for i in 0..self.n {
            let (x, xi) = (NcPoly::generator(self.a[i]), NcPoly::generator(self.a_inv[i]));
            out.push(&(&x * &xi) - &one);
            out.push(&(&xi * &x) - &one);
            for j in 0..i {
                for p in [self.a[i], self.a_inv[i]] {
                    for q in [self.a[j], self.a_inv[j]] {
                        let (p, q) = (NcPoly::generator(p), NcPoly::generator(q));
                        out.push(&(&p * &q) - &(&q * &p));
                    }
                }
            }
        }
        out
    }

    /// Adds `A^-1 x = c^-1 x A^-1` for every `A x = c x A` in `rel`.
    fn with_inverse_rules(&self, rel: RelationSet, budget: Budget) -> Result<RelationSet, GaussError> {
        let mut extra = Vec::new();
        let others: Vec<Sym> = self.l.values().chain(self.u.values()).copied().collect();
        for i in 0..self.n {
            let (ai, inv) = (self.a[i], self.a_inv[i]);
            for &x in &others {
                let c = quasi_scalar(&rel, ai, x)?.ok_or_else(|| GaussError::NotQuasiCommuting {
                    element: self.alphabet.label(ai).to_string(),
                    generator: self.alphabet.label(x).to_string(),
                })?;
                let c = c.inv().expect("nonzero scalar");
                let (xi, xg) = (NcPoly::generator(inv), NcPoly::generator(x));
                extra.push(&(&xi * &xg) - &(&xg * &xi).scale(&c));
            }
        }
        if extra.is_empty() {
            return Ok(rel);
        }
        let mut rels = rel.relations();
        rels.extend(extra);
        Ok(RelationSet::with_budget(self.alphabet.clone(), rels, budget)?)
    }

    fn image(&self, s: Sym) -> NcPoly {
        self.subs.get(&s).cloned().unwrap_or_else(|| NcPoly::generator(s))
    }

    fn factors_free(&self) -> FactorMatrices {
        let n = self.n;
        let gen = |s: Sym| NcPoly::generator(s);
        let tl = QMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => NcPoly::one(),
            std::cmp::Ordering::Greater => gen(self.l[&(i, j)]),
            _ => NcPoly::zero(),
        });
        let tu = QMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => NcPoly::one(),
            std::cmp::Ordering::Less => gen(self.u[&(i, j)]),
            _ => NcPoly::zero(),
        });
        let td = QMatrix::from_fn(n, n, |i, j| if i == j { gen(self.a[i]) } else { NcPoly::zero() });
        let td_inv = QMatrix::from_fn(n, n, |i, j| if i == j { gen(self.a_inv[i]) } else { NcPoly::zero() });
        let p = &self.parity;
        FactorMatrices {
            tl: tl.with_parity(p),
            td: td.with_parity(p),
            td_inv: td_inv.with_parity(p),
            tu: tu.with_parity(p),
        }
    }

    /// Factor matrices with eliminated generators replaced by their values.
    pub fn factors(&self) -> FactorMatrices {
        let f = self.factors_free();
        let sub = |m: &QMatrix| m.map(|x| self.substitute(x));
        FactorMatrices {
            tl: sub(&f.tl),
            td: sub(&f.td),
            td_inv: sub(&f.td_inv),
            tu: sub(&f.tu),
        }
    }

    pub fn substitute(&self, p: &NcPoly) -> NcPoly {
        if self.subs.is_empty() {
            return p.clone();
        }
        p.substitute(&|s| self.image(s))
    }

    fn apply(&mut self, s: Sym, value: NcPoly, budget: Budget) -> Result<(), GaussError> {
        let single = BTreeMap::from([(s, value.clone())]);
        let f = |x: &NcPoly| x.substitute(&|t| single.get(&t).cloned().unwrap_or_else(|| NcPoly::generator(t)));
        for v in self.subs.values_mut() {
            *v = f(v);
        }
        for e in self.eliminated.iter_mut() {
            e.value = f(&e.value);
        }
        self.subs.insert(s, value.clone());
        self.eliminated.push(Elimination { symbol: s, value });
        let rels: Vec<NcPoly> = self.rel.relations().iter().map(f).filter(|p| !p.is_zero()).collect();
        self.rel = RelationSet::with_budget(self.alphabet.clone(), rels, budget)?;
        Ok(())
    }

    /// Replaces `symbol` by `value` everywhere. A diagonal generator must be
    /// sent to a unit monomial; its inverse follows.
    pub fn impose(&mut self, symbol: Sym, value: NcPoly, budget: Budget) -> Result<(), GaussError> {
        let inverse = self.alphabet.inverse_of(symbol);
        let vi = match inverse {
            Some(_) => Some(
                monomial_inverse(&self.alphabet, &value)
                    .ok_or_else(|| GaussError::MissingInverse(value.display(&self.alphabet).to_string()))?,
            ),
            None => None,
        };
        self.apply(symbol, value, budget)?;
        if let (Some(inv), Some(vi)) = (inverse, vi) {
            self.apply(inv, vi, budget)?;
        }
        Ok(())
    }

    fn supplementary_equations(&self, c: &CMetric) -> Result<Vec<NcPoly>, GaussError> {
        let f = self.factors();
        let mut eqs = Vec::new();
        let mut red = self.rel.reducer();
        for x in [f.t_plus(), f.t_minus()] {
            for p in nonzero_entries(&supplementary_identities(&x, c)) {
                let p = red.reduce(&p)?;
                if !p.is_zero() {
                    eqs.push(p);
                }
            }
        }
        Ok(eqs)
    }

    fn eliminate_torus(&mut self, c: &CMetric, budget: Budget) -> Result<(), GaussError> {
        let torus = self.torus_set();
        loop {
            let eqs = self.supplementary_equations(c)?;
            let Some((s, v)) = eqs.iter().find_map(|e| self.solve_torus(e, &torus).transpose()).transpose()? else {
                return Ok(());
            };
            self.apply(s, v, budget)?;
            if let Some(inv) = self.alphabet.inverse_of(s) {
                let vi = monomial_inverse(&self.alphabet, &self.subs[&s]).expect("torus monomial");
                self.apply(inv, vi, budget)?;
            }
        }
    }

    fn eliminate_linear(&mut self, c: &CMetric, budget: Budget) -> Result<(), GaussError> {
        let torus = self.torus_set();
        loop {
            let eqs = self.supplementary_equations(c)?;
            if eqs.is_empty() {
                return Ok(());
            }
            let mut best: Option<(Sym, NcPoly)> = None;
            for e in &eqs {
                for part in split_by_torus(e, &torus).into_values() {
                    if let Some((s, v)) = linear_candidate(&part) {
                        if best.as_ref().map_or(true, |(b, _)| s > *b) {
                            best = Some((s, v));
                        }
                    }
                }
            }
            let Some((s, v)) = best else {
                return Err(GaussError::Stuck(
                    eqs.iter().map(|e| e.display(&self.alphabet).to_string()).collect(),
                ));
            };
            self.apply(s, v, budget)?;
        }
    }

    /// Rules rewriting an ordered word into an expression containing a lone
    /// generator are constraints: that generator is eliminated.
    fn eliminate_ordered(&mut self, budget: Budget) -> Result<(), GaussError> {
        let torus = self.torus_set();
        loop {
            let found = self.rel.rules().iter().find_map(|r| {
                if !r.lhs.windows(2).all(|w| w[0] <= w[1]) {
                    return None;
                }
                if r.lhs.len() == 1 {
                    let s = r.lhs[0];
                    return (!torus.contains(&s)).then(|| (s, r.rhs.clone()));
                }
                linear_candidate(&r.relation()).filter(|(s, _)| !torus.contains(s) && !r.lhs.contains(s))
            });
            let Some((s, v)) = found else {
                return Ok(());
            };
            self.apply(s, v, budget)?;
        }
    }

    /// Solves the generator-free part of a supplementary equation for one
    /// diagonal generator.
    fn solve_torus(&self, e: &NcPoly, torus: &BTreeSet<Sym>) -> Result<Option<(Sym, NcPoly)>, GaussError> {
        let part: Vec<(&Word, &QCoeff)> = e.terms().filter(|(w, _)| w.iter().all(|s| torus.contains(s))).collect();
        if part.is_empty() {
            return Ok(None);
        }
        let shown = || NcPoly::from_terms(part.iter().map(|(w, c)| ((*w).clone(), (*c).clone()))).display(&self.alphabet).to_string();
        if part.len() != 2 {
            return Err(GaussError::Inconsistent(shown()));
        }
        let exps = |w: &Word| {
            let mut v = vec![0i32; self.n];
            for &s in w.iter() {
                if let Some(i) = self.a.iter().position(|&x| x == s) {
                    v[i] += 1;
                } else if let Some(i) = self.a_inv.iter().position(|&x| x == s) {
                    v[i] -= 1;
                }
            }
            v
        };
        let (e1, e2) = (exps(part[0].0), exps(part[1].0));
        let diff: Vec<i32> = e1.iter().zip(&e2).map(|(x, y)| x - y).collect();
        let ratio = -(part[1].1.try_div(part[0].1).expect("nonzero"));
        let Some(k) = (0..self.n).rev().find(|&k| diff[k] != 0) else {
            return Err(GaussError::Inconsistent(shown()));
        };
        let d = diff[k];
        let value = if d.abs() == 1 {
            let mut v = NcPoly::constant(ratio.pow(d).map_err(|e| GaussError::Inconsistent(e.to_string()))?);
            for j in 0..self.n {
                let ex = -diff[j] * d;
                if j == k || ex == 0 {
                    continue;
                }
                let g = if ex > 0 { self.a[j] } else { self.a_inv[j] };
                v = &v * &NcPoly::generator(g).pow(ex.unsigned_abs());
            }
            v
        } else if d.abs() == 2 && diff.iter().filter(|&&x| x != 0).count() == 1 {
            let c = ratio.pow(d.signum()).map_err(|e| GaussError::Inconsistent(e.to_string()))?;
            match c.as_monomial() {
                Some((k2, r)) if r.is_one() && k2 % 2 == 0 => NcPoly::constant(QCoeff::s_pow(k2 / 2)),
                _ => return Err(GaussError::Inconsistent(shown())),
            }
        } else {
            return Err(GaussError::Inconsistent(shown()));
        };
        Ok(Some((self.a[k], value)))
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relations(&self) -> &RelationSet {
        &self.rel
    }

    pub fn set_budget(&mut self, budget: Budget) {
        self.rel.set_budget(budget);
    }

    pub fn eliminated(&self) -> &[Elimination] {
        &self.eliminated
    }

    pub fn l_symbol(&self, i: usize, j: usize) -> Option<Sym> {
        self.l.get(&(i, j)).copied()
    }

    pub fn u_symbol(&self, i: usize, j: usize) -> Option<Sym> {
        self.u.get(&(i, j)).copied()
    }

    pub fn a_symbol(&self, i: usize) -> Sym {
        self.a[i]
    }

    pub fn a_inverse_symbol(&self, i: usize) -> Sym {
        self.a_inv[i]
    }

    /// Generators that survive elimination, inverse symbols excluded.
    /// Whether `z` commutes with every remaining generator and every
    /// diagonal inverse.
    pub fn is_central(&self, z: &NcPoly) -> Result<bool, GaussError> {
        let mut red = self.rel.reducer();
        let z = self.substitute(z);
        let mut gens = self.independent();
        gens.extend(self.a_inv.iter().filter(|s| !self.subs.contains_key(s)));
        for g in gens {
            let g = NcPoly::generator(g);
            if !red.is_zero_mod(&(&(&z * &g) - &(&g * &z)))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn independent(&self) -> Vec<Sym> {
        self.l
            .values()
            .chain(&self.a)
            .chain(self.u.values())
            .copied()
            .filter(|s| !self.subs.contains_key(s))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// `c` with `A x = c x A` modulo `rel`, if both sides reduce to multiples of
/// one word.
pub(crate) fn quasi_scalar(rel: &RelationSet, a: Sym, x: Sym) -> Result<Option<QCoeff>, GaussError> {
    let mut red = rel.reducer();
    let lhs = red.word(&[a, x])?;
    let rhs = red.word(&[x, a])?;
    Ok(match (lhs.as_monomial(), rhs.as_monomial()) {
        (Some((c1, w1)), Some((c2, w2))) if w1 == w2 => c1.try_div(c2).ok(),
        _ => None,
    })
}

fn monomial_inverse(al: &Alphabet, p: &NcPoly) -> Option<NcPoly> {
    if let Some(c) = p.as_constant() {
        return Some(NcPoly::constant(c.inv().ok()?));
    }
    let (c, w) = p.as_monomial()?;
    let mut out = Word::new();
    for &s in w.iter().rev() {
        out.push(al.inverse_of(s)?);
    }
    Some(NcPoly::term(c.inv().ok()?, out))
}

/// Groups the terms of a normal form by their diagonal letters, dropping
/// those letters.
fn split_by_torus(e: &NcPoly, torus: &BTreeSet<Sym>) -> BTreeMap<Word, NcPoly> {
    let mut out: BTreeMap<Word, NcPoly> = BTreeMap::new();
    for (w, c) in e.terms() {
        let key: Word = Word(w.iter().copied().filter(|s| torus.contains(s)).collect());
        let rest: Word = Word(w.iter().copied().filter(|s| !torus.contains(s)).collect());
        out.entry(key).or_default().add_term(rest, c.clone());
    }
    out
}

/// The largest generator occurring in `p` only as a degree-one term,
/// solved for.
fn linear_candidate(p: &NcPoly) -> Option<(Sym, NcPoly)> {
    let mut in_long: BTreeSet<Sym> = BTreeSet::new();
    let mut single: BTreeMap<Sym, QCoeff> = BTreeMap::new();
    for (w, c) in p.terms() {
        if w.len() == 1 {
            single.insert(w[0], c.clone());
        } else {
            in_long.extend(w.iter().copied());
        }
    }
    let (&s, c) = single.iter().rev().find(|(s, _)| !in_long.contains(s))?;
    let mut rest = p.clone();
    rest.add_term(Word::letter(s), -c);
    let f = -(c.inv().expect("nonzero"));
    Some((s, rest.scale(&f)))
}
