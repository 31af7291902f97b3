//! Quantum determinants, minors, inverses and superdeterminants.

mod matrix;

use itertools::Itertools;

use crate::coeff::QCoeff;
use crate::exec::Exec;
use crate::gauss::{GaussError, Localization};
use crate::ncpoly::{NcPoly, NormalFormError, RelationSet, Sym, Word};

pub use matrix::{graded_tensor, MatrixDisplay, QMatrix};

/// A permutation of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Self { image })
    }

    /// From a one-based image list such as `(1, 3, 2, 4)`.
    pub fn from_one_based(image: &[usize]) -> Option<Self> {
        if image.contains(&0) {
            return None;
        }
        Self::new(image.iter().map(|x| x - 1).collect())
    }

    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|image| Permutation { image })
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let v = &self.image;
        (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j])
            .count()
    }

    /// Number of inverted pairs whose values are primed partners
    /// (`a + b = N + 1`, one-based), where `cols` maps positions of the image
    /// to column indices of the full `N x N` matrix.
    pub fn transposition_index(&self, cols: &[usize], big_n: usize) -> usize {
        let v: Vec<usize> = self.image.iter().map(|&x| cols[x] + 1).collect();
        (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j] && v[i] + v[j] == big_n + 1)
            .count()
    }
}

fn neg_q_pow(k: usize) -> QCoeff {
    let c = QCoeff::q_pow(k as i32);
    if k % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `sum_sigma (-q)^{l(sigma)} q^{extra(sigma)} t_{r1 c_sigma(1)} ... t_{rk c_sigma(k)}`
/// as a free polynomial.
fn signed_sum(t: &QMatrix, rows: &[usize], cols: &[usize], extra: impl Fn(&Permutation) -> i32) -> NcPoly {
    assert_eq!(rows.len(), cols.len(), "minor needs equal index counts");
    let mut out = NcPoly::zero();
    for sigma in Permutation::all(rows.len()) {
        let c = &neg_q_pow(sigma.length()) * &QCoeff::q_pow(extra(&sigma));
        let mut term = NcPoly::constant(c);
        for (pos, &r) in rows.iter().enumerate() {
            term = &term * t.get(r, cols[sigma.image[pos]]);
            if term.is_zero() {
                break;
            }
        }
        out = &out + &term;
    }
    out
}

/// Quantum minor on zero-based index sets, without reduction.
pub fn qminor_free(t: &QMatrix, rows: &[usize], cols: &[usize]) -> NcPoly {
    signed_sum(t, rows, cols, |_| 0)
}

pub fn qdet_free(t: &QMatrix) -> NcPoly {
    let idx: Vec<usize> = (0..t.rows()).collect();
    qminor_free(t, &idx, &idx)
}

pub fn qdet(t: &QMatrix, rel: &RelationSet) -> Result<NcPoly, NormalFormError> {
    assert!(t.row_parity.iter().all(|&p| p == 0), "qdet needs an even matrix");
    rel.normal_form(&qdet_free(t))
}

pub fn qminor(t: &QMatrix, rows: &[usize], cols: &[usize], rel: &RelationSet) -> Result<NcPoly, NormalFormError> {
    rel.normal_form(&qminor_free(t, rows, cols))
}

/// Symplectic minor: the quantum minor with the extra factor `q^{l'(sigma)}`.
pub fn sp_qminor_free(t: &QMatrix, rows: &[usize], cols: &[usize]) -> NcPoly {
    let n = t.rows();
    signed_sum(t, rows, cols, |s| s.transposition_index(cols, n) as i32)
}

pub fn sp_qdet(t: &QMatrix, rows: &[usize], cols: &[usize], rel: &RelationSet) -> Result<NcPoly, NormalFormError> {
    rel.normal_form(&sp_qminor_free(t, rows, cols))
}

/// `t_ik t_jl - q^alpha t_il t_jk` for zero-based indices.
pub fn delta2(t: &QMatrix, (i, j): (usize, usize), (k, l): (usize, usize), alpha: &QCoeff) -> NcPoly {
    &(t.get(i, k) * t.get(j, l)) - &(t.get(i, l) * t.get(j, k)).scale(alpha)
}

/// `t11 D[23,23;q] - t12 D[23,13;q^2] + q t13 D[23,12;q]` on the leading
/// 3 x 3 block.
pub fn cofactor_det3(t: &QMatrix) -> NcPoly {
    let q = QCoeff::q_pow(1);
    let q2 = QCoeff::q_pow(2);
    let a = t.get(0, 0) * &delta2(t, (1, 2), (1, 2), &q);
    let b = t.get(0, 1) * &delta2(t, (1, 2), (0, 2), &q2);
    let c = (t.get(0, 2) * &delta2(t, (1, 2), (0, 1), &q)).scale(&q);
    &(&a - &b) + &c
}

/// Index placement in the cofactor inverse `X_ij = (-q)^(sign*(i-j)) D^-1 M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseConvention {
    /// Exponent sign of `-q`.
    pub sign: i32,
    /// `M_q(j,i)` instead of `M_q(i,j)`.
    pub transposed: bool,
    /// `D^-1` on the left of the minor.
    pub det_left: bool,
}

impl InverseConvention {
    pub fn all() -> impl Iterator<Item = Self> {
        itertools::iproduct!([1, -1], [true, false], [true, false]).map(|(sign, transposed, det_left)| Self {
            sign,
            transposed,
            det_left,
        })
    }
}

/// The convention that passes the two-sided inverse oracle.
pub const INVERSE_CONVENTION: InverseConvention = InverseConvention {
    sign: 1,
    transposed: true,
    det_left: true,
};

/// `M_q(i,j)`: the minor with row `i` and column `j` removed.
pub fn complementary_minor(t: &QMatrix, i: usize, j: usize) -> NcPoly {
    let rows: Vec<usize> = (0..t.rows()).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..t.cols()).filter(|&c| c != j).collect();
    if rows.is_empty() {
        return NcPoly::one();
    }
    qminor_free(t, &rows, &cols)
}

pub fn qinverse_with(t: &QMatrix, det_inverse: Sym, conv: InverseConvention) -> QMatrix {
    let n = t.rows();
    let dinv = NcPoly::generator(det_inverse);
    QMatrix::from_fn(n, n, |i, j| {
        let m = if conv.transposed {
            complementary_minor(t, j, i)
        } else {
            complementary_minor(t, i, j)
        };
        let c = QCoeff::q_pow(conv.sign * (i as i32 - j as i32));
        let c = if (i + j) % 2 == 1 { -c } else { c };
        let p = if conv.det_left { &dinv * &m } else { &m * &dinv };
        p.scale(&c)
    })
}

/// Whether `T X = X T = 1` holds entrywise in `loc`.
pub fn is_two_sided_inverse(t: &QMatrix, x: &QMatrix, loc: &Localization) -> Result<bool, GaussError> {
    let id = QMatrix::identity(t.rows());
    for prod in [t * x, x * t] {
        for (a, b) in prod.entries().iter().zip(id.entries()) {
            if !loc.equals(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Inverse of an even q-matrix whose determinant is inverted in `loc`.
pub fn qinverse(t: &QMatrix, loc: &Localization) -> Result<QMatrix, GaussError> {
    assert!(t.row_parity.iter().all(|&p| p == 0), "qinverse needs an even matrix");
    let det = loc.base().normal_form(&qdet_free(t))?;
    let missing = || GaussError::MissingInverse(det.display(loc.alphabet()).to_string());
    let (scale, dinv) = match det.as_monomial() {
        Some((c, w)) if w.len() == 1 => (c.clone(), loc.alphabet().inverse_of(w[0]).ok_or_else(missing)?),
        _ => loc.alphabet().poly_inverse(&det).ok_or_else(missing)?,
    };
    let x = qinverse_with(t, dinv, INVERSE_CONVENTION).scale(&scale.inv().expect("nonzero"));
    if !is_two_sided_inverse(t, &x, loc)? {
        return Err(GaussError::Verification("inverse convention fails T X = X T = 1".into()));
    }
    Ok(x)
}

/// `prod_even d_ii * (prod_odd d_ii)^-1` for a diagonal matrix of unit
/// monomials in invertible symbols, normal-formed.
pub fn sdet(td: &QMatrix, rel: &RelationSet) -> Result<NcPoly, GaussError> {
    let al = rel.alphabet();
    let mut even = NcPoly::one();
    let mut odd = NcPoly::one();
    for i in 0..td.rows() {
        let d = rel.normal_form(td.get(i, i))?;
        if td.row_parity[i] == 0 {
            even = &even * &d;
        } else {
            let inv = unit_inverse(al, &d).ok_or_else(|| GaussError::MissingInverse(d.display(al).to_string()))?;
            odd = &inv * &odd;
        }
    }
    Ok(rel.normal_form(&(&even * &odd))?)
}

/// Inverse of `c * w` when every letter of `w` has a declared inverse.
pub fn unit_inverse(al: &crate::ncpoly::Alphabet, p: &NcPoly) -> Option<NcPoly> {
    let (c, w) = p.as_monomial()?;
    let mut out = Word::new();
    for &s in w.iter().rev() {
        out.push(al.inverse_of(s)?);
    }
    Some(NcPoly::term(c.inv().ok()?, out))
}

/// Whether `z` commutes with every generator modulo `rel`.
pub fn centrality_check(z: &NcPoly, rel: &RelationSet, exec: Exec) -> Result<bool, NormalFormError> {
    let gens: Vec<_> = rel.alphabet().symbols().collect();
    let res = exec.map_with(
        &gens,
        || rel.reducer(),
        |red, &g| {
            let g = NcPoly::generator(g);
            red.is_zero_mod(&(&(z * &g) - &(&g * z)))
        },
    );
    for r in res {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_index_examples() {
        let p = Permutation::from_one_based(&[1, 2, 4, 3]).unwrap();
        assert_eq!(p.transposition_index(&[0, 1, 2, 3], 4), 0);
        let p = Permutation::from_one_based(&[1, 3, 2, 4]).unwrap();
        assert_eq!(p.transposition_index(&[0, 1, 2, 3], 4), 1);
        assert_eq!(p.length(), 1);
    }

    fn glq(n: usize) -> (QMatrix, Localization) {
        let r = crate::rmatrix::RMatrix::build_glq(n);
        let (al, t) = crate::rmatrix::symbol_matrix(&vec![0; n], None);
        let rel = RelationSet::new(al, r.frt_relations(&t)).unwrap();
        let loc = Localization::new(rel);
        let det = qdet_free(&t);
        let loc = loc.adjoin_inverse(&det, "D", &[]).unwrap();
        (t, loc)
    }

    #[test]
    fn inverse_convention_is_the_unique_oracle_pass() {
        let (t, loc) = glq(2);
        let dinv = loc.inverted()[0].symbol;
        let signs_ok: Vec<_> = InverseConvention::all()
            .filter(|&c| is_two_sided_inverse(&t, &qinverse_with(&t, dinv, c), &loc).unwrap())
            .collect();
        assert!(signs_ok.contains(&INVERSE_CONVENTION));
        assert!(signs_ok.iter().all(|c| c.sign == INVERSE_CONVENTION.sign && c.transposed));
    }

    #[test]
    fn qinverse_gl3() {
        let (t, loc) = glq(3);
        assert!(qinverse(&t, &loc).is_ok());
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(Permutation::all(3).count(), 6);
        assert!(Permutation::new(vec![0, 0]).is_none());
    }
}
