use std::fmt;

use crate::coeff::QCoeff;
use crate::ncpoly::{Alphabet, NcPoly, NormalFormError, Reducer, Sym};

/// Matrix with noncommuting entries and row/column parities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NcPoly>,
    pub row_parity: Vec<u8>,
    pub col_parity: Vec<u8>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![NcPoly::zero(); rows * cols],
            row_parity: vec![0; rows],
            col_parity: vec![0; cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, NcPoly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> NcPoly) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Square matrix of generators, `syms[i*n + j]` at `(i, j)`.
    pub fn of_symbols(n: usize, syms: &[Sym]) -> Self {
        Self::from_fn(n, n, |i, j| NcPoly::generator(syms[i * n + j]))
    }

    pub fn from_coeffs(rows: usize, cols: usize, f: impl Fn(usize, usize) -> QCoeff) -> Self {
        Self::from_fn(rows, cols, |i, j| NcPoly::constant(f(i, j)))
    }

    pub fn with_parity(mut self, parity: &[u8]) -> Self {
        assert_eq!(parity.len(), self.rows);
        assert_eq!(parity.len(), self.cols);
        self.row_parity = parity.to_vec();
        self.col_parity = parity.to_vec();
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NcPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[NcPoly] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&NcPoly) -> NcPoly) -> Self {
        Self {
            entries: self.entries.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn try_map<E>(&self, mut f: impl FnMut(&NcPoly) -> Result<NcPoly, E>) -> Result<Self, E> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(Self {
            entries,
            ..self.clone()
        })
    }

    pub fn reduce(&self, red: &mut Reducer<'_>) -> Result<Self, NormalFormError> {
        self.try_map(|p| red.reduce(p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NcPoly::is_zero)
    }

    /// Zero-based positions of nonzero entries.
    pub fn nonzero_positions(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m.row_parity = self.col_parity.clone();
        m.col_parity = self.row_parity.clone();
        m
    }

    /// Submatrix on zero-based index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone());
        m.row_parity = rows.iter().map(|&r| self.row_parity[r]).collect();
        m.col_parity = cols.iter().map(|&c| self.col_parity[c]).collect();
        m
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        let idx: Vec<usize> = (0..k).collect();
        self.select(&idx, &idx)
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> MatrixDisplay<'a> {
        MatrixDisplay { m: self, alphabet }
    }

    /// Entry texts row by row.
    pub fn texts(&self, alphabet: &Alphabet) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).display(alphabet).to_string())
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut m = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    m.entries[idx] = &m.entries[idx] + &(a * b);
                }
            }
        }
        m.row_parity = self.row_parity.clone();
        m.col_parity = rhs.col_parity.clone();
        m
    }
}

impl std::ops::Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl std::ops::Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

pub struct MatrixDisplay<'a> {
    m: &'a QMatrix,
    alphabet: &'a Alphabet,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.m.texts(self.alphabet) {
            writeln!(f, "[ {} ]", row.join(" | "))?;
        }
        Ok(())
    }
}

/// Graded tensor product:
/// `(F ⊗ G)_{ij;kl} = (-1)^{p(j)(p(i)+p(k))} F_ik G_jl`, with `(ij)` flattened
/// row-major.
pub fn graded_tensor(f: &QMatrix, g: &QMatrix, parity: &[u8]) -> QMatrix {
    let n = parity.len();
    assert!(f.rows == n && f.cols == n && g.rows == n && g.cols == n);
    let mut m = QMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = f.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for l in 0..n {
                    let b = g.get(j, l);
                    if b.is_zero() {
                        continue;
                    }
                    let odd = parity[j] * (parity[i] + parity[k]) % 2 == 1;
                    let p = a * b;
                    m.set(i * n + j, k * n + l, if odd { -p } else { p });
                }
            }
        }
    }
    m
}
