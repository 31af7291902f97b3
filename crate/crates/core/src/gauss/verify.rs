use serde::{Deserialize, Serialize};

use super::{factor_identities, frt_identity, supplementary_identities, Check, GaussAlgebra, GaussError, MatrixIdentity, Report};
use crate::config::Budget;
use crate::exec::Exec;
use crate::ncpoly::{NcPoly, RelationSet};
use crate::qlinalg::QMatrix;
use crate::rmatrix::{CMetric, RMatrix};

fn identity_check(g: &GaussAlgebra, id: &MatrixIdentity, exec: Exec) -> Result<Check, GaussError> {
    let d = id.difference();
    let n = d.cols();
    let cells: Vec<(usize, &NcPoly)> = d.entries().iter().enumerate().filter(|(_, p)| !p.is_zero()).collect();
    let res = exec.map_with(&cells, || g.relations().reducer(), |red, (k, p)| red.reduce(p).map(|r| (*k, r)));
    let mut bad = Vec::new();
    for r in res {
        let (k, r) = r?;
        if !r.is_zero() {
            bad.push(format!("({},{}): {}", k / n + 1, k % n + 1, r.display(g.alphabet())));
        }
    }
    Ok(Check::from_residues(id.name, bad))
}

/// Expands every matrix identity between the Gauss factors entrywise and
/// reduces it. Reflection-equation forms are included only when
/// `[R, R_D] = 0`; the commutator itself is reported either way.
pub fn verify_matrix_relations(g: &GaussAlgebra, r: &RMatrix, c: Option<&CMetric>, exec: Exec) -> Result<Report, GaussError> {
    let f = g.factors();
    let reflection = r.commutes_with_full();
    let mut ids = vec![frt_identity("R T1 T2 = T2 T1 R", r, &f.product())];
    ids.extend(factor_identities(r, &f, reflection));
    if let Some(c) = c {
        ids.extend(supplementary_identities(&f.product(), c));
    }
    let mut report = Report::default();
    report.push(if reflection {
        Check::pass("[R, R_D] = 0")
    } else {
        Check {
            name: "[R, R_D] = 0".into(),
            passed: true,
            detail: Some("no: reflection-equation forms not applicable".into()),
            deviation: None,
        }
    });
    for id in &ids {
        report.push(identity_check(g, id, exec)?);
    }
    report.push(ul_commute(g)?);
    if let Some(c) = c {
        report.push(diagonal_pairs(g, c)?);
    }
    Ok(report)
}

/// Graded commutativity of every `u` generator with every `l` generator.
fn ul_commute(g: &GaussAlgebra) -> Result<Check, GaussError> {
    let n = g.dimension();
    let al = g.alphabet();
    let mut red = g.relations().reducer();
    let mut bad = Vec::new();
    for (li, lj) in (0..n).flat_map(|i| (0..i).map(move |j| (i, j))) {
        for (ui, uj) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
            let (Some(l), Some(u)) = (g.l_symbol(li, lj), g.u_symbol(ui, uj)) else {
                continue;
            };
            let (lp, up) = (g.substitute(&NcPoly::generator(l)), g.substitute(&NcPoly::generator(u)));
            let sign = if al.parity(l) * al.parity(u) == 1 { -1 } else { 1 };
            let comm = &(&up * &lp) - &(&lp * &up).scale(&crate::QCoeff::from_int(sign));
            let r = red.reduce(&comm)?;
            if !r.is_zero() {
                bad.push(format!("{} {}: {}", al.label(u), al.label(l), r.display(al)));
            }
        }
    }
    Ok(Check::from_residues("u and l generators commute", bad))
}

/// `(T_D)_ii (T_D)_i'i' = 1` with `i'` the partner index of the metric.
fn diagonal_pairs(g: &GaussAlgebra, c: &CMetric) -> Result<Check, GaussError> {
    let n = g.dimension();
    let f = g.factors();
    let mut red = g.relations().reducer();
    let mut bad = Vec::new();
    for i in 0..n {
        let Some(j) = (0..n).find(|&j| !c.get(i, j).is_zero()) else {
            continue;
        };
        let p = red.reduce(&(f.td.get(i, i) * f.td.get(j, j)))?;
        if !(&p - &NcPoly::one()).is_zero() {
            bad.push(format!("A[{}] A[{}]: {}", i + 1, j + 1, p.display(g.alphabet())));
        }
    }
    Ok(Check::from_residues("(T_D)_ii (T_D)_i'i' = 1", bad))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// Sends the entries of `t` below (upper side) or above (lower side) the
/// diagonal to zero and checks that every relation in `relations` maps into
/// the ideal of the FRT relations of the triangular matrix.
pub fn triangular_projection(
    r: &RMatrix,
    t: &QMatrix,
    rel: &RelationSet,
    relations: &[NcPoly],
    side: Side,
    budget: Budget,
) -> Result<Check, GaussError> {
    let n = t.rows();
    let drop = |i: usize, j: usize| match side {
        Side::Upper => i > j,
        Side::Lower => i < j,
    };
    let tri = QMatrix::from_fn(n, n, |i, j| if drop(i, j) { NcPoly::zero() } else { t.get(i, j).clone() }).with_parity(&t.row_parity);
    let mut zero = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if drop(i, j) {
                if let Some((_, w)) = t.get(i, j).as_monomial() {
                    zero.extend(w.iter().copied());
                }
            }
        }
    }
    let image = |p: &NcPoly| p.substitute(&|s| if zero.contains(&s) { NcPoly::zero() } else { NcPoly::generator(s) });
    let target = RelationSet::with_budget(rel.alphabet().clone(), r.frt_relations(&tri), budget)?;
    let mut red = target.reducer();
    let mut bad = Vec::new();
    for p in relations {
        let x = red.reduce(&image(p))?;
        if !x.is_zero() {
            bad.push(format!("{} -> {}", p.display(rel.alphabet()), x.display(rel.alphabet())));
        }
    }
    let name = match side {
        Side::Upper => "projection onto upper triangular T is a homomorphism",
        Side::Lower => "projection onto lower triangular T is a homomorphism",
    };
    Ok(Check::from_residues(name, bad))
}
