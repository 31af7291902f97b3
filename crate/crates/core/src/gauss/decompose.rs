use serde::{Deserialize, Serialize};

use super::{GaussAlgebra, GaussError};
use crate::ncpoly::{NcPoly, Reducer};
use crate::qlinalg::{cofactor_det3, qminor_free, sp_qminor_free, unit_inverse, QMatrix};

/// Determinant used for the leading minors on the diagonal of `T_plus`.
/// `Cofactor` is the quantum minor except at size 3, where it is the first
/// row expansion `t11 D[23,23;q] - t12 D[23,13;q^2] + q t13 D[23,12;q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorKind {
    Quantum,
    Symplectic,
    Cofactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// A failure accepted for the stated reason.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            detail: None,
            deviation: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: false,
            detail: Some(detail.into()),
            deviation: None,
        }
    }

    pub fn from_residues(name: impl Into<String>, residues: Vec<String>) -> Self {
        if residues.is_empty() {
            Self::pass(name)
        } else {
            Self::fail(name, residues.join("; "))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// True when every check passed or failed with an accepted deviation.
    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && c.deviation.is_none())
    }

    pub fn deviations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && c.deviation.is_some())
    }

    /// Marks failed checks named in `known` as accepted deviations.
    pub fn accept(&mut self, known: &std::collections::BTreeMap<String, String>) {
        for c in &mut self.checks {
            if !c.passed {
                c.deviation = known.get(&c.name).cloned();
            }
        }
    }
}

/// `T = T_L T_D T_U` computed by elimination inside the Gauss algebra,
/// with the row and column elimination operators.
#[derive(Debug, Clone)]
pub struct GaussFactors {
    pub t: QMatrix,
    pub w_l: QMatrix,
    pub w_u: QMatrix,
    pub t_plus: QMatrix,
    pub t_minus: QMatrix,
    pub tl: QMatrix,
    pub td: QMatrix,
    pub tu: QMatrix,
}

fn pivot_inverse(g: &GaussAlgebra, red: &mut Reducer<'_>, p: &NcPoly, j: usize) -> Result<NcPoly, GaussError> {
    let p = red.reduce(p)?;
    unit_inverse(g.alphabet(), &p)
        .ok_or_else(|| GaussError::MissingInverse(format!("pivot {}: {}", j + 1, p.display(g.alphabet()))))
}

/// `(1 + N)^-1 = sum_k (-N)^k` for strictly triangular `N`.
pub fn unipotent_inverse(m: &QMatrix, red: &mut Reducer<'_>) -> Result<QMatrix, GaussError> {
    let n = m.rows();
    let id = QMatrix::identity(n).with_parity(&m.row_parity);
    let neg = (&id - m).reduce(red)?;
    let mut term = id.clone();
    let mut sum = id;
    for _ in 1..n {
        term = (&term * &neg).reduce(red)?;
        sum = &sum + &term;
    }
    Ok(sum.reduce(red)?)
}

fn residues(m: &QMatrix, red: &mut Reducer<'_>, g: &GaussAlgebra) -> Result<Vec<String>, GaussError> {
    let mut out = Vec::new();
    for (i, row) in m.reduce(red)?.texts(g.alphabet()).into_iter().enumerate() {
        for (j, e) in row.into_iter().enumerate() {
            if e != "0" {
                out.push(format!("({},{}): {}", i + 1, j + 1, e));
            }
        }
    }
    Ok(out)
}

pub fn leading_minor(t: &QMatrix, k: usize, kind: MinorKind) -> NcPoly {
    let idx: Vec<usize> = (0..k).collect();
    match kind {
        MinorKind::Quantum => qminor_free(t, &idx, &idx),
        MinorKind::Symplectic => sp_qminor_free(t, &idx, &idx),
        MinorKind::Cofactor if k == 3 => cofactor_det3(t),
        MinorKind::Cofactor => qminor_free(t, &idx, &idx),
    }
}

/// Decomposes the image of `T` in `g` and verifies the result.
pub fn gauss_decompose(g: &GaussAlgebra, kind: MinorKind) -> Result<(GaussFactors, Report), GaussError> {
    let rel = g.relations();
    let mut red = rel.reducer();
    let gen = g.factors();
    let t = gen.product().reduce(&mut red)?;
    let n = t.rows();
    let parity = t.row_parity.clone();

    let mut m = t.clone();
    let mut w = QMatrix::identity(n).with_parity(&parity);
    for j in 0..n {
        let pinv = pivot_inverse(g, &mut red, m.get(j, j), j)?;
        for i in j + 1..n {
            let f = red.reduce(&(m.get(i, j) * &pinv))?;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let mv = red.reduce(&(m.get(i, k) - &(&f * m.get(j, k))))?;
                m.set(i, k, mv);
                let wv = red.reduce(&(w.get(i, k) - &(&f * w.get(j, k))))?;
                w.set(i, k, wv);
            }
        }
    }
    let t_plus = m;
    let w_l = w;

    let mut m = t.clone();
    let mut w = QMatrix::identity(n).with_parity(&parity);
    for j in 0..n {
        let pinv = pivot_inverse(g, &mut red, m.get(j, j), j)?;
        for i in j + 1..n {
            let f = red.reduce(&(&pinv * m.get(j, i)))?;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let mv = red.reduce(&(m.get(k, i) - &(m.get(k, j) * &f)))?;
                m.set(k, i, mv);
                let wv = red.reduce(&(w.get(k, i) - &(w.get(k, j) * &f)))?;
                w.set(k, i, wv);
            }
        }
    }
    let t_minus = m;
    let w_u = w;

    let tl = unipotent_inverse(&w_l, &mut red)?;
    let td = QMatrix::from_fn(n, n, |i, j| if i == j { t_plus.get(i, i).clone() } else { NcPoly::zero() }).with_parity(&parity);
    let mut td_inv = QMatrix::zeros(n, n).with_parity(&parity);
    for i in 0..n {
        td_inv.set(i, i, pivot_inverse(g, &mut red, td.get(i, i), i)?);
    }
    let tu = (&td_inv * &t_plus).reduce(&mut red)?;
    let f = GaussFactors {
        t,
        w_l,
        w_u,
        t_plus,
        t_minus,
        tl,
        td,
        tu,
    };

    let mut report = Report::default();
    let lower = |m: &QMatrix, upper: bool| {
        QMatrix::from_fn(n, n, |i, j| if (upper && i > j) || (!upper && i < j) { m.get(i, j).clone() } else { NcPoly::zero() })
    };
    let check = |name: &str, m: QMatrix, red: &mut Reducer<'_>| -> Result<Check, GaussError> {
        Ok(Check::from_residues(name, residues(&m, red, g)?))
    };
    report.push(check("W_L T = T_plus", &(&f.w_l * &f.t) - &f.t_plus, &mut red)?);
    report.push(check("T_plus is upper triangular", lower(&f.t_plus, true), &mut red)?);
    report.push(check("T W_U = T_minus", &(&f.t * &f.w_u) - &f.t_minus, &mut red)?);
    report.push(check("T_minus is lower triangular", lower(&f.t_minus, false), &mut red)?);
    report.push(check("T_L T_D T_U = T", &(&(&f.tl * &f.td) * &f.tu) - &f.t, &mut red)?);
    report.push(check("T_minus = T_L T_D", &f.t_minus - &(&f.tl * &f.td), &mut red)?);
    report.push(check("T_plus = T_D T_U", &f.t_plus - &(&f.td * &f.tu), &mut red)?);
    report.push(check("T_L matches the l generators", &f.tl - &gen.tl, &mut red)?);
    report.push(check("T_D matches the A generators", &f.td - &gen.td, &mut red)?);
    report.push(check("T_U matches the u generators", &f.tu - &gen.tu, &mut red)?);

    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (f.td.get(i, i), f.td.get(j, j));
            if !red.reduce(&(&(a * b) - &(b * a)))?.is_zero() {
                bad.push(format!("A[{}], A[{}]", i + 1, j + 1));
            }
        }
    }
    report.push(Check::from_residues("diagonal entries commute", bad));
    report.push(diagonal_ratio_check(g, &f, kind, &mut red)?);
    Ok((f, report))
}

/// `(T_plus)_kk = D_(k-1)^-1 D_k` over the leading even block, checked as
/// `D_k = (T_plus)_11 ... (T_plus)_kk`.
fn diagonal_ratio_check(g: &GaussAlgebra, f: &GaussFactors, kind: MinorKind, red: &mut Reducer<'_>) -> Result<Check, GaussError> {
    let even = f.t.row_parity.iter().take_while(|&&p| p == 0).count();
    let mut prod = NcPoly::one();
    let mut bad = Vec::new();
    for k in 1..=even {
        prod = red.reduce(&(&prod * f.t_plus.get(k - 1, k - 1)))?;
        let d = red.reduce(&leading_minor(&f.t, k, kind))?;
        let diff = red.reduce(&(&d - &prod))?;
        if !diff.is_zero() {
            bad.push(format!("D_{k}: {}", diff.display(g.alphabet())));
        }
    }
    Ok(Check::from_residues("diagonal entries are ratios of leading minors", bad))
}

/// Whether `det_q T` equals the product of the diagonal factors. For a
/// graded `T` the even block determinant over the odd diagonal factors is
/// compared with `prod_even A / prod_odd A`.
pub fn determinant_is_diagonal_product(g: &GaussAlgebra, f: &GaussFactors, kind: MinorKind) -> Result<bool, GaussError> {
    let mut red = g.relations().reducer();
    let n = f.t.rows();
    let even = f.t.row_parity.iter().take_while(|&&p| p == 0).count();
    let mut lhs = leading_minor(&f.t, even, kind);
    let mut prod = NcPoly::one();
    for i in 0..n {
        let d = f.td.get(i, i);
        if f.t.row_parity[i] == 0 {
            prod = &prod * d;
        } else {
            let inv = unit_inverse(g.alphabet(), &red.reduce(d)?)
                .ok_or_else(|| GaussError::MissingInverse(d.display(g.alphabet()).to_string()))?;
            lhs = &lhs * &inv;
            prod = &prod * &inv;
        }
    }
    Ok(red.reduce(&(&lhs - &prod))?.is_zero())
}
