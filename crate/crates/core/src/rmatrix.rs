//! R-matrices, the Yang-Baxter check and FRT relation extraction.
//!
//! Index pairs `(i, j)` are flattened as `(i - 1) * N + j` (one-based) in
//! files and as `i * N + j` (zero-based) in the API.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::coeff::QCoeff;
use crate::ncpoly::{Alphabet, NcPoly};
use crate::parse::{parse_coeff, EvalError};
use crate::qlinalg::{graded_tensor, QMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RMatrixError {
    #[error("malformed R-matrix file: {0}")]
    Json(String),
    #[error("entry ({row},{col}): {source}")]
    Coeff {
        row: usize,
        col: usize,
        #[source]
        source: EvalError,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry ({row},{col}) joins index pairs of different parity")]
    Evenness { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    n: usize,
    parity: Vec<u8>,
    entries: Vec<QCoeff>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RFile {
    dimension: usize,
    #[serde(default)]
    parity: Option<Vec<u8>>,
    entries: Vec<(usize, usize, String)>,
}

impl RMatrix {
    pub fn zeros(parity: Vec<u8>) -> Self {
        let n = parity.len();
        Self {
            n,
            parity,
            entries: vec![QCoeff::zero(); n.pow(4)],
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn is_graded(&self) -> bool {
        self.parity.iter().any(|&p| p != 0)
    }

    /// Zero-based flattened access.
    pub fn get(&self, row: usize, col: usize) -> &QCoeff {
        &self.entries[row * self.n * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, c: QCoeff) {
        let nn = self.n * self.n;
        self.entries[row * nn + col] = c;
    }

    /// Entry `(ij; kl)`, zero-based indices.
    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> &QCoeff {
        self.get(i * self.n + j, k * self.n + l)
    }

    pub fn set_at(&mut self, i: usize, j: usize, k: usize, l: usize, c: QCoeff) {
        let n = self.n;
        self.set(i * n + j, k * n + l, c);
    }

    /// Nonzero entries as zero-based `(row, col, value)`.
    pub fn nonzero(&self) -> Vec<(usize, usize, &QCoeff)> {
        let nn = self.n * self.n;
        (0..nn)
            .flat_map(|r| (0..nn).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = self.get(r, c);
                (!v.is_zero()).then_some((r, c, v))
            })
            .collect()
    }

    /// `GL_q(n)`: `sum_{i!=j} E_ii⊗E_jj + q sum_i E_ii⊗E_ii + lambda sum_{i<j} E_ji⊗E_ij`.
    pub fn build_glq(n: usize) -> Self {
        Self::build_glq_super(n, 0)
    }

    /// `GL_q(n|m)`: as `GL_q(n+m)` with `q` replaced by `q^-1` on odd-odd
    /// diagonal entries.
    pub fn build_glq_super(n: usize, m: usize) -> Self {
        assert!(n + m >= 1);
        let parity: Vec<u8> = (0..n + m).map(|i| u8::from(i >= n)).collect();
        let mut r = Self::zeros(parity.clone());
        for i in 0..n + m {
            for j in 0..n + m {
                if i == j {
                    let e = if parity[i] == 1 { -1 } else { 1 };
                    r.set_at(i, i, i, i, QCoeff::q_pow(e));
                } else {
                    r.set_at(i, j, i, j, QCoeff::one());
                }
                if i < j {
                    r.set_at(j, i, i, j, QCoeff::lambda());
                }
            }
        }
        r
    }

    pub fn from_json_str(text: &str) -> Result<Self, RMatrixError> {
        let file: RFile = serde_json::from_str(text).map_err(|e| RMatrixError::Json(e.to_string()))?;
        let n = file.dimension;
        if n == 0 {
            return Err(RMatrixError::Dimension("dimension must be positive".into()));
        }
        let parity = file.parity.unwrap_or_else(|| vec![0; n]);
        if parity.len() != n || parity.iter().any(|&p| p > 1) {
            return Err(RMatrixError::Dimension(format!(
                "parity vector must have {} entries of 0 or 1",
                n
            )));
        }
        let mut r = Self::zeros(parity);
        let nn = n * n;
        for (row, col, text) in &file.entries {
            if *row == 0 || *col == 0 || *row > nn || *col > nn {
                return Err(RMatrixError::Dimension(format!(
                    "entry ({},{}) outside 1..{}",
                    row, col, nn
                )));
            }
            let c = parse_coeff(text).map_err(|source| RMatrixError::Coeff {
                row: *row,
                col: *col,
                source,
            })?;
            r.set(row - 1, col - 1, c);
        }
        r.check_evenness()?;
        Ok(r)
    }

    fn check_evenness(&self) -> Result<(), RMatrixError> {
        let n = self.n;
        let p = |x: usize| self.parity[x / n] + self.parity[x % n];
        for (row, col, _) in self.nonzero() {
            if p(row) % 2 != p(col) % 2 {
                return Err(RMatrixError::Evenness {
                    row: row + 1,
                    col: col + 1,
                });
            }
        }
        Ok(())
    }

    /// Canonical file text; loading it gives back an equal matrix and
    /// storing that again gives identical bytes.
    pub fn to_json_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{{").unwrap();
        writeln!(s, "  \"dimension\": {},", self.n).unwrap();
        let par: Vec<String> = self.parity.iter().map(|p| p.to_string()).collect();
        writeln!(s, "  \"parity\": [{}],", par.join(", ")).unwrap();
        writeln!(s, "  \"entries\": [").unwrap();
        let nz = self.nonzero();
        for (idx, (r, c, v)) in nz.iter().enumerate() {
            let text = serde_json::to_string(&v.to_string()).unwrap();
            let sep = if idx + 1 == nz.len() { "" } else { "," };
            writeln!(s, "    [{}, {}, {}]{}", r + 1, c + 1, text, sep).unwrap();
        }
        writeln!(s, "  ]").unwrap();
        writeln!(s, "}}").unwrap();
        s
    }

    fn sparse(&self) -> Sparse {
        Sparse::from_entries(self.nonzero().into_iter().map(|(r, c, v)| (r, c, v.clone())))
    }

    /// `R12 R13 R23 = R23 R13 R12` on `V⊗V⊗V` with the graded flip.
    pub fn check_yang_baxter(&self) -> bool {
        let n = self.n;
        let r = self.sparse();
        let idx3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        let mut r12 = Sparse::default();
        let mut r23 = Sparse::default();
        for (&(row, col), v) in &r.0 {
            let (a, b) = (row / n, row % n);
            let (d, e) = (col / n, col % n);
            for x in 0..n {
                r12.insert(idx3(a, b, x), idx3(d, e, x), v.clone());
                r23.insert(idx3(x, a, b), idx3(x, d, e), v.clone());
            }
        }
        let mut p23 = Sparse::default();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let sign = if self.parity[b] * self.parity[c] == 1 {
                        -QCoeff::one()
                    } else {
                        QCoeff::one()
                    };
                    p23.insert(idx3(a, c, b), idx3(a, b, c), sign);
                }
            }
        }
        let r13 = p23.mul(&r12).mul(&p23);
        let lhs = r12.mul(&r13).mul(&r23);
        let rhs = r23.mul(&r13).mul(&r12);
        lhs == rhs
    }

    /// Keeps only the entries `(ij; ij)`.
    pub fn diagonal_part(&self) -> Self {
        let mut d = Self::zeros(self.parity.clone());
        let nn = self.n * self.n;
        for x in 0..nn {
            d.set(x, x, self.get(x, x).clone());
        }
        d
    }

    /// Whether `[R, R_D] = 0`.
    pub fn commutes_with_full(&self) -> bool {
        let r = self.sparse();
        let d = self.diagonal_part().sparse();
        r.mul(&d) == d.mul(&r)
    }

    pub fn inverse(&self) -> Result<Self, RMatrixError> {
        let nn = self.n * self.n;
        let inv = invert_dense(nn, |r, c| self.get(r, c).clone()).ok_or(RMatrixError::Singular)?;
        let mut out = Self::zeros(self.parity.clone());
        for r in 0..nn {
            for c in 0..nn {
                out.set(r, c, inv[r * nn + c].clone());
            }
        }
        Ok(out)
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        let nn = self.n * self.n;
        QMatrix::from_coeffs(nn, nn, |r, c| self.get(r, c).clone())
    }

    /// Entries of `R T1 T2 - T2 T1 R`, with `T1 = T⊗I`, `T2 = I⊗T` graded.
    pub fn frt_relations(&self, t: &QMatrix) -> Vec<NcPoly> {
        let (l, r) = frt_sides(self, t, t);
        let diff = &l - &r;
        diff.entries().iter().filter(|p| !p.is_zero()).cloned().collect()
    }
}

/// Generator matrix `T` for an `N x N` R-matrix. Custom labels are given
/// row-major; `t[i,j]` always stays available as an alias.
pub fn symbol_matrix(parity: &[u8], labels: Option<&[String]>) -> (Arc<Alphabet>, QMatrix) {
    let n = parity.len();
    let mut al = Alphabet::new();
    let mut syms = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let default = format!("t[{},{}]", i + 1, j + 1);
            let label = labels.map(|l| l[i * n + j].clone()).unwrap_or_else(|| default.clone());
            let s = al.push(label.clone(), (parity[i] + parity[j]) % 2);
            if label != default {
                al.add_alias(default, NcPoly::generator(s));
            }
            syms.push(s);
        }
    }
    let t = QMatrix::of_symbols(n, &syms).with_parity(parity);
    (Arc::new(al), t)
}

/// Both sides of `R X1 Y2 = Y2 X1 R` as `N^2 x N^2` matrices.
pub fn frt_sides(r: &RMatrix, x: &QMatrix, y: &QMatrix) -> (QMatrix, QMatrix) {
    let n = r.dimension();
    let id = QMatrix::identity(n);
    let x1 = graded_tensor(x, &id, r.parity());
    let y2 = graded_tensor(&id, y, r.parity());
    let rm = r.to_qmatrix();
    (&(&rm * &x1) * &y2, &(&y2 * &x1) * &rm)
}

/// Numerical matrix of the supplementary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMetric {
    n: usize,
    entries: Vec<QCoeff>,
}

impl CMetric {
    pub fn new(n: usize, entries: Vec<QCoeff>) -> Result<Self, RMatrixError> {
        if entries.len() != n * n {
            return Err(RMatrixError::Dimension(format!("C needs {} entries", n * n)));
        }
        let c = Self { n, entries };
        c.inverse()?;
        Ok(c)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &QCoeff {
        &self.entries[i * self.n + j]
    }

    pub fn inverse(&self) -> Result<CMetric, RMatrixError> {
        let inv = invert_dense(self.n, |r, c| self.get(r, c).clone()).ok_or(RMatrixError::Singular)?;
        Ok(CMetric {
            n: self.n,
            entries: inv,
        })
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_coeffs(self.n, self.n, |r, c| self.get(r, c).clone())
    }

    /// Nonzero entries as one-based `(row, col, text)`.
    pub fn entry_texts(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i + 1, j + 1, v.to_string()));
                }
            }
        }
        out
    }
}

fn invert_dense(n: usize, get: impl Fn(usize, usize) -> QCoeff) -> Option<Vec<QCoeff>> {
    let w = 2 * n;
    let mut a: Vec<QCoeff> = vec![QCoeff::zero(); n * w];
    for r in 0..n {
        for c in 0..n {
            a[r * w + c] = get(r, c);
        }
        a[r * w + n + r] = QCoeff::one();
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r * w + col].is_zero())?;
        if piv != col {
            for c in 0..w {
                a.swap(piv * w + c, col * w + c);
            }
        }
        let inv = a[col * w + col].inv().ok()?;
        for c in 0..w {
            a[col * w + c] = &a[col * w + c] * &inv;
        }
        for r in 0..n {
            if r == col || a[r * w + col].is_zero() {
                continue;
            }
            let f = a[r * w + col].clone();
            for c in 0..w {
                let sub = &f * &a[col * w + c];
                a[r * w + c] = &a[r * w + c] - &sub;
            }
        }
    }
    Some(
        (0..n)
            .flat_map(|r| (n..w).map(move |c| (r, c)))
            .map(|(r, c)| a[r * w + c].clone())
            .collect(),
    )
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Sparse(BTreeMap<(usize, usize), QCoeff>);

impl Sparse {
    fn from_entries(it: impl IntoIterator<Item = (usize, usize, QCoeff)>) -> Self {
        let mut s = Self::default();
        for (r, c, v) in it {
            s.insert(r, c, v);
        }
        s
    }

    fn insert(&mut self, r: usize, c: usize, v: QCoeff) {
        if !v.is_zero() {
            self.0.insert((r, c), v);
        }
    }

    fn mul(&self, other: &Sparse) -> Sparse {
        let mut rows: BTreeMap<usize, Vec<(usize, &QCoeff)>> = BTreeMap::new();
        for (&(r, c), v) in &other.0 {
            rows.entry(r).or_default().push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), QCoeff> = BTreeMap::new();
        for (&(i, k), a) in &self.0 {
            if let Some(row) = rows.get(&k) {
                for &(j, b) in row {
                    let e = acc.entry((i, j)).or_default();
                    *e = &*e + &(a * b);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Sparse(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(r: &RMatrix, v: &QCoeff) -> usize {
        r.nonzero().iter().filter(|(_, _, x)| *x == v).count()
    }

    #[test]
    fn glq_shapes() {
        let r1 = RMatrix::build_glq(1);
        assert_eq!(r1.nonzero().len(), 1);
        assert_eq!(r1.get(0, 0), &QCoeff::q());
        let r2 = RMatrix::build_glq(2);
        assert_eq!(r2.at(1, 0, 0, 1), &QCoeff::lambda());
        assert_eq!(r2.at(0, 1, 0, 1), &QCoeff::one());
        assert_eq!(r2.nonzero().len(), 5);
        let r3 = RMatrix::build_glq(3);
        assert_eq!(count(&r3, &QCoeff::q()), 3);
        assert_eq!(count(&r3, &QCoeff::one()), 6);
        assert_eq!(count(&r3, &QCoeff::lambda()), 3);
    }

    #[test]
    fn super_shapes() {
        let r = RMatrix::build_glq_super(1, 1);
        assert_eq!(r.at(1, 1, 1, 1), &QCoeff::q_pow(-1));
        assert_eq!(r.at(1, 0, 0, 1), &QCoeff::lambda());
        assert_eq!(RMatrix::build_glq_super(2, 0), RMatrix::build_glq(2));
        let r21 = RMatrix::build_glq_super(2, 1);
        assert_eq!(r21.at(2, 2, 2, 2), &QCoeff::q_pow(-1));
        assert_eq!(r21.at(0, 0, 0, 0), &QCoeff::q());
    }

    #[test]
    fn yang_baxter() {
        assert!(RMatrix::build_glq(2).check_yang_baxter());
        assert!(RMatrix::build_glq(3).check_yang_baxter());
        assert!(RMatrix::build_glq_super(1, 1).check_yang_baxter());
        assert!(RMatrix::build_glq_super(2, 1).check_yang_baxter());
        let mut bad = RMatrix::build_glq(2);
        bad.set_at(1, 0, 0, 1, QCoeff::from_int(2) * QCoeff::lambda());
        assert!(!bad.check_yang_baxter());
        let mut bad = RMatrix::zeros(vec![0, 0]);
        for x in 0..4 {
            bad.set(x, x, QCoeff::one());
        }
        bad.set(1, 2, QCoeff::q());
        assert!(!bad.check_yang_baxter());
    }

    #[test]
    fn json_round_trip() {
        for r in [RMatrix::build_glq(2), RMatrix::build_glq_super(2, 1)] {
            let text = r.to_json_string();
            let back = RMatrix::from_json_str(&text).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.to_json_string(), text);
        }
        let bad = r#"{"dimension": 2, "entries": [[1, 1, "q+"]]}"#;
        assert!(matches!(RMatrix::from_json_str(bad), Err(RMatrixError::Coeff { .. })));
        let odd = r#"{"dimension": 2, "parity": [0, 1], "entries": [[1, 2, "1"]]}"#;
        assert!(matches!(RMatrix::from_json_str(odd), Err(RMatrixError::Evenness { .. })));
    }

    #[test]
    fn diagonal_part_and_commutator() {
        let r = RMatrix::build_glq(2);
        let d = r.diagonal_part();
        let diag: Vec<QCoeff> = (0..4).map(|x| d.get(x, x).clone()).collect();
        assert_eq!(diag, vec![QCoeff::q(), QCoeff::one(), QCoeff::one(), QCoeff::q()]);
        assert!(r.commutes_with_full());
        let s = RMatrix::build_glq_super(1, 1).diagonal_part();
        assert_eq!(s.get(3, 3), &QCoeff::q_pow(-1));
    }
}
