use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::GaussError;
use crate::coeff::QCoeff;
use crate::ncpoly::{Alphabet, NcPoly, RelationSet, Sym, Word};
use crate::parse::EvalError;

/// Exponents are searched in steps of `s = q^(1/2)` up to `q^±4`.
pub const DEFAULT_SEARCH: i32 = 8;

/// An adjoined inverse `X^-1` and the quasi-commutation shifts it obeys:
/// `X^-1 * g = s^k * g * X^-1` for `shifts[g] = Some(k)`.
#[derive(Debug, Clone)]
pub struct Inverted {
    pub element: NcPoly,
    pub symbol: Sym,
    pub shifts: BTreeMap<Sym, Option<i32>>,
}

/// A relation set with formal inverses of quasi-commuting elements.
///
/// Inverse letters are moved to the right of every word, so an element is a
/// sum `P_k * X^-k`. Equality is decided after clearing denominators, which
/// is exact when the inverted elements are not zero divisors.
#[derive(Debug, Clone)]
pub struct Localization {
    base: RelationSet,
    alphabet: Arc<Alphabet>,
    inverted: Vec<Inverted>,
    /// `X_i * X_j = s^k * X_j * X_i`.
    twist: Vec<Vec<Option<i32>>>,
    search: i32,
}

impl Localization {
    pub fn new(base: RelationSet) -> Self {
        Self {
            alphabet: base.alphabet().clone(),
            base,
            inverted: Vec::new(),
            twist: Vec::new(),
            search: DEFAULT_SEARCH,
        }
    }

    pub fn with_search(mut self, search: i32) -> Self {
        self.search = search;
        self
    }

    pub fn base(&self) -> &RelationSet {
        &self.base
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn inverted(&self) -> &[Inverted] {
        &self.inverted
    }

    fn base_symbols(&self) -> Vec<Sym> {
        self.base.alphabet().symbols().collect()
    }

    /// The `k` with `x * y = s^k * y * x`, if one exists in range.
    fn quasi_exponent(&self, x: &NcPoly, y: &NcPoly) -> Result<Option<i32>, GaussError> {
        let mut red = self.base.reducer();
        let xy = red.reduce(&(x * y))?;
        let yx = red.reduce(&(y * x))?;
        if yx.is_zero() {
            return Ok(xy.is_zero().then_some(0));
        }
        let (w, c) = yx.leading().expect("nonzero");
        let ratio = &xy.coeff(w) / c;
        let Some((k, r)) = ratio.as_monomial() else {
            return Ok(None);
        };
        if !r.is_one() || k.abs() > self.search || xy != yx.scale(&ratio) {
            return Ok(None);
        }
        Ok(Some(k))
    }

    /// Adjoins `x^-1`. A single generator gets the inverse label `g^-1`;
    /// anything else is known to the parser as `name`. Every generator in
    /// `needed` must quasi-commute with `x`.
    pub fn adjoin_inverse(&self, x: &NcPoly, name: &str, needed: &[Sym]) -> Result<Self, GaussError> {
        let x = self.base.normal_form(x)?;
        if x.is_zero() {
            return Err(GaussError::MissingInverse("cannot invert 0".into()));
        }
        if x.terms().any(|(w, _)| self.alphabet.word_parity(w) == 1) {
            return Err(GaussError::MissingInverse(format!("{} is odd", x.display(&self.alphabet))));
        }
        let mut shifts = BTreeMap::new();
        for g in self.base_symbols() {
            let k = self.quasi_exponent(&x, &NcPoly::generator(g))?;
            shifts.insert(g, k.map(|k| -k));
        }
        if let Some(&g) = needed.iter().find(|g| shifts.get(g).map_or(true, Option::is_none)) {
            return Err(GaussError::NotQuasiCommuting {
                element: x.display(&self.alphabet).to_string(),
                generator: self.alphabet.label(g).to_string(),
            });
        }
        let mut row = Vec::new();
        for inv in &self.inverted {
            row.push(self.quasi_exponent(&x, &inv.element)?);
        }
        let mut al = (*self.alphabet).clone();
        let symbol = match x.as_monomial() {
            Some((c, w)) if c.is_one() && w.len() == 1 && al.inverse_of(w[0]).is_none() => al.push_inverse(w[0]),
            _ => al.push_poly_inverse(name, x.clone()),
        };
        let mut out = self.clone();
        out.alphabet = Arc::new(al);
        for (i, k) in row.iter().enumerate() {
            out.twist[i].push(k.map(|k| -k));
        }
        row.push(Some(0));
        out.twist.push(row);
        out.inverted.push(Inverted { element: x, symbol, shifts });
        Ok(out)
    }

    fn inverse_index(&self, s: Sym) -> Option<usize> {
        self.inverted.iter().position(|i| i.symbol == s)
    }

    fn shift(&self, i: usize, g: Sym) -> Result<i32, GaussError> {
        self.inverted[i].shifts.get(&g).copied().flatten().ok_or_else(|| GaussError::NotQuasiCommuting {
            element: self.inverted[i].element.display(&self.alphabet).to_string(),
            generator: self.alphabet.label(g).to_string(),
        })
    }

    fn twist(&self, i: usize, j: usize) -> Result<i32, GaussError> {
        self.twist[i][j].ok_or_else(|| GaussError::NotQuasiCommuting {
            element: self.inverted[i].element.display(&self.alphabet).to_string(),
            generator: self.inverted[j].element.display(&self.alphabet).to_string(),
        })
    }

    /// Moves every inverse letter to the right: `p = sum_k P_k * X^-k`.
    pub fn split(&self, p: &NcPoly) -> Result<BTreeMap<Vec<u32>, NcPoly>, GaussError> {
        let m = self.inverted.len();
        let mut out: BTreeMap<Vec<u32>, NcPoly> = BTreeMap::new();
        for (w, c) in p.terms() {
            let mut left = Word::new();
            let mut counts = vec![0u32; m];
            let mut exp = 0i32;
            for &s in w.iter() {
                match self.inverse_index(s) {
                    Some(j) => {
                        for (i, &k) in counts.iter().enumerate().skip(j + 1) {
                            if k > 0 {
                                exp += k as i32 * self.twist(i, j)?;
                            }
                        }
                        counts[j] += 1;
                    }
                    None => {
                        for (i, &k) in counts.iter().enumerate() {
                            if k > 0 {
                                exp += k as i32 * self.shift(i, s)?;
                            }
                        }
                        left.push(s);
                    }
                }
            }
            let coeff = c * &QCoeff::s_pow(exp);
            out.entry(counts).or_insert_with(NcPoly::zero).add_term(left, coeff);
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// `prod_i X_i^-k_i * prod_i X_i^K_i` as `s^e * prod_i X_i^(K_i - k_i)`.
    fn clear(&self, k: &[u32], big: &[u32]) -> Result<NcPoly, GaussError> {
        let mut exp = 0;
        for (j, &kj) in big.iter().enumerate() {
            for (i, &ki) in k.iter().enumerate().skip(j + 1) {
                if kj > 0 && ki > 0 {
                    exp -= (ki * kj) as i32 * self.twist(i, j)?;
                }
            }
        }
        let mut out = NcPoly::constant(QCoeff::s_pow(exp));
        for (i, inv) in self.inverted.iter().enumerate() {
            out = &out * &inv.element.pow(big[i] - k[i]);
        }
        Ok(out)
    }

    /// Numerator and denominator exponents of `p = N * prod_i X_i^-K_i`.
    pub fn fraction(&self, p: &NcPoly) -> Result<(NcPoly, Vec<u32>), GaussError> {
        let parts = self.split(p)?;
        let mut big = vec![0u32; self.inverted.len()];
        for k in parts.keys() {
            for (b, &x) in big.iter_mut().zip(k) {
                *b = (*b).max(x);
            }
        }
        let mut num = NcPoly::zero();
        for (k, q) in &parts {
            num = &num + &(q * &self.clear(k, &big)?);
        }
        Ok((self.base.normal_form(&num)?, big))
    }

    pub fn is_zero(&self, p: &NcPoly) -> Result<bool, GaussError> {
        Ok(self.fraction(p)?.0.is_zero())
    }

    pub fn equals(&self, a: &NcPoly, b: &NcPoly) -> Result<bool, GaussError> {
        self.is_zero(&(a - b))
    }

    /// Canonical text-ready form: `sum_k nf(P_k) * X^-k`, inverse-free
    /// terms first.
    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly, GaussError> {
        let mut out = NcPoly::zero();
        let mut red = self.base.reducer();
        for (k, q) in self.split(p)? {
            let mut tail = Word::new();
            for (i, &n) in k.iter().enumerate() {
                for _ in 0..n {
                    tail.push(self.inverted[i].symbol);
                }
            }
            let q = red.reduce(&q)?;
            out = &out + &q.sandwich(&[], &tail);
        }
        Ok(out)
    }

    pub fn parse(&self, text: &str) -> Result<NcPoly, EvalError> {
        self.alphabet.parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{symbol_matrix, RMatrix};

    fn glq2() -> (Localization, Sym, Sym, Sym, Sym) {
        let labels = ["a", "b", "c", "d"].map(String::from);
        let (al, t) = symbol_matrix(&[0, 0], Some(&labels));
        let rel = RelationSet::new(al.clone(), RMatrix::build_glq(2).frt_relations(&t)).unwrap();
        let s = |l: &str| al.lookup(l).unwrap();
        (Localization::new(rel), s("a"), s("b"), s("c"), s("d"))
    }

    #[test]
    fn inverse_of_a_moves_past_b() {
        let (loc, a, b, c, _) = glq2();
        let loc = loc.adjoin_inverse(&NcPoly::generator(a), "", &[b, c]).unwrap();
        let ai = loc.alphabet().lookup("a^-1").unwrap();
        assert_eq!(loc.inverted()[0].shifts[&b], Some(-2));
        let lhs = NcPoly::word(Word::from_slice(&[ai, b]));
        let rhs = loc.parse("q^-1*b*a^-1").unwrap();
        assert!(loc.equals(&lhs, &rhs).unwrap());
        assert!(loc.is_zero(&loc.parse("a*a^-1 - 1").unwrap()).unwrap());
    }

    #[test]
    fn determinant_is_central_and_a_plus_d_is_not_invertible() {
        let (loc, a, b, c, d) = glq2();
        let det = loc.parse("a*d - q*b*c").unwrap();
        let l2 = loc.adjoin_inverse(&det, "D", &[a, b, c, d]).unwrap();
        assert!(l2.inverted()[0].shifts.values().all(|k| *k == Some(0)));
        assert!(l2.is_zero(&l2.parse("D^-1*(a*d - q*b*c) - 1").unwrap()).unwrap());
        let err = loc.adjoin_inverse(&loc.parse("a + d").unwrap(), "X", &[a, b, c, d]).unwrap_err();
        assert!(matches!(err, GaussError::NotQuasiCommuting { .. }));
    }
}
