use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{GaussAlgebra, GaussFactors};
use crate::coeff::{QCoeff, Rational};
use crate::ncpoly::NcPoly;
use crate::parse::{self, Bracket, EvalContext, EvalError};
use crate::qlinalg::{delta2, qdet_free, qminor_free, sp_qminor_free, unit_inverse, QMatrix};

/// Expressions over the Gauss algebra. Besides the Gauss generators it
/// accepts the entries of `T` (as `t[i,j]` or their labels), sent to their
/// images `(T_L T_D T_U)_ij`, and
///
/// * `minor[rows=..; cols=..]`, `spminor[..]`, `det`, `spdet`
/// * `delta[rows=i,j; cols=k,l; alpha=a]` for `t_ik t_jl - q^a t_il t_jk`
/// * `WL[i,j]`, `WU[i,j]`, `TP[i,j]`, `TM[i,j]` from a decomposition.
///
/// `^-1` applies to anything whose normal form is a unit monomial.
pub struct GaussContext<'a> {
    g: &'a GaussAlgebra,
    t: QMatrix,
    labels: HashMap<String, (usize, usize)>,
    factors: Option<&'a GaussFactors>,
}

impl<'a> GaussContext<'a> {
    pub fn new(g: &'a GaussAlgebra, labels: Option<&[String]>) -> Self {
        let mut red = g.relations().reducer();
        let t = g.factors().product().try_map(|p| red.reduce(p)).expect("image of T reduces");
        let n = t.rows();
        let labels = labels
            .map(|ls| ls.iter().enumerate().map(|(k, l)| (l.clone(), (k / n, k % n))).collect())
            .unwrap_or_default();
        Self {
            g,
            t,
            labels,
            factors: None,
        }
    }

    pub fn with_factors(mut self, f: &'a GaussFactors) -> Self {
        self.factors = Some(f);
        self
    }

    pub fn image(&self) -> &QMatrix {
        &self.t
    }

    pub fn eval(&self, text: &str) -> Result<NcPoly, EvalError> {
        let e = parse::parse_expr(text)?;
        let v = parse::evaluate(&e, self)?;
        self.reduce(&v)
    }

    fn reduce(&self, p: &NcPoly) -> Result<NcPoly, EvalError> {
        self.g
            .relations()
            .normal_form(&self.g.substitute(p))
            .map_err(EvalError::from)
    }

    fn index_pair(&self, b: Option<&Bracket>, name: &str) -> Result<(usize, usize), EvalError> {
        let n = self.t.rows();
        match b.and_then(Bracket::indices).as_deref() {
            Some(&[i, j]) if (1..=n).contains(&i) && (1..=n).contains(&j) => Ok((i - 1, j - 1)),
            _ => Err(EvalError::Invalid(format!("{} needs [i,j] with 1 <= i,j <= {}", name, n))),
        }
    }

    fn index_sets(&self, b: Option<&Bracket>, name: &str) -> Result<(Vec<usize>, Vec<usize>, Option<Rational>), EvalError> {
        let bad = || EvalError::Invalid(format!("{} needs [rows=..; cols=..]", name));
        let b = b.ok_or_else(bad)?;
        let (rows, cols, alpha) = match (b.group("rows"), b.group("cols")) {
            (Some(r), Some(c)) => (&r.values, &c.values, b.group("alpha").map(|a| &a.values)),
            _ if b.groups.len() >= 2 && b.groups.iter().all(|g| g.key.is_none()) => {
                (&b.groups[0].values, &b.groups[1].values, b.groups.get(2).map(|g| &g.values))
            }
            _ => return Err(bad()),
        };
        let n = self.t.rows();
        let conv = |v: &Vec<Rational>| -> Result<Vec<usize>, EvalError> {
            v.iter()
                .map(|x| match x.to_integer().to_usize() {
                    Some(i) if x.is_integer() && (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(EvalError::Invalid(format!("index {} out of range", x))),
                })
                .collect()
        };
        let (rows, cols) = (conv(rows)?, conv(cols)?);
        if rows.len() != cols.len() || rows.is_empty() {
            return Err(EvalError::Invalid(format!("{} needs equal nonempty index lists", name)));
        }
        let alpha = match alpha {
            Some(v) if v.len() == 1 => Some(v[0].clone()),
            Some(_) => return Err(bad()),
            None => None,
        };
        Ok((rows, cols, alpha))
    }

    fn factor_matrix(&self, name: &str) -> Option<Result<&QMatrix, EvalError>> {
        let pick = |f: &'a GaussFactors| match name {
            "WL" => Some(&f.w_l),
            "WU" => Some(&f.w_u),
            "TP" => Some(&f.t_plus),
            "TM" => Some(&f.t_minus),
            _ => None,
        };
        if !matches!(name, "WL" | "WU" | "TP" | "TM") {
            return None;
        }
        Some(
            self.factors
                .and_then(pick)
                .ok_or_else(|| EvalError::Invalid(format!("{} needs a decomposition", name))),
        )
    }
}

impl EvalContext for GaussContext<'_> {
    type Value = NcPoly;

    fn scalar(&self, c: QCoeff) -> NcPoly {
        NcPoly::constant(c)
    }

    fn as_scalar(&self, v: &NcPoly) -> Option<QCoeff> {
        v.as_constant()
    }

    fn add(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        a + b
    }

    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly, EvalError> {
        self.reduce(&(a * b))
    }

    fn neg(&self, a: &NcPoly) -> NcPoly {
        -a
    }

    fn invert(&self, a: &NcPoly) -> Result<NcPoly, EvalError> {
        let a = self.reduce(a)?;
        if let Some(c) = a.as_constant() {
            return c.inv().map(NcPoly::constant).map_err(|e| EvalError::Invalid(e.to_string()));
        }
        unit_inverse(self.g.alphabet(), &a).ok_or_else(|| {
            EvalError::Invalid(format!("{} is not a unit of the Gauss algebra", a.display(self.g.alphabet())))
        })
    }

    fn symbol(&self, name: &str, bracket: Option<&Bracket>) -> Result<NcPoly, EvalError> {
        let t = &self.t;
        if let Some(m) = self.factor_matrix(name) {
            let (i, j) = self.index_pair(bracket, name)?;
            return Ok(m?.get(i, j).clone());
        }
        match (name, bracket) {
            ("t", b) => {
                let (i, j) = self.index_pair(b, "t")?;
                return Ok(t.get(i, j).clone());
            }
            ("minor" | "spminor", b) => {
                let (rows, cols, _) = self.index_sets(b, name)?;
                let p = if name == "minor" {
                    qminor_free(t, &rows, &cols)
                } else {
                    sp_qminor_free(t, &rows, &cols)
                };
                return self.reduce(&p);
            }
            ("delta", b) => {
                let (rows, cols, alpha) = self.index_sets(b, name)?;
                if rows.len() != 2 {
                    return Err(EvalError::Invalid("delta needs two rows and two columns".into()));
                }
                let k = alpha.map(|a| a * Rational::from_integer(2.into())).unwrap_or_else(|| Rational::from_integer(2.into()));
                let k = k
                    .to_integer()
                    .to_i32()
                    .filter(|_| k.is_integer())
                    .ok_or_else(|| EvalError::Invalid("alpha must be a multiple of 1/2".into()))?;
                return self.reduce(&delta2(t, (rows[0], rows[1]), (cols[0], cols[1]), &QCoeff::s_pow(k)));
            }
            ("det", None) => return self.reduce(&qdet_free(t)),
            ("spdet", None) => {
                let idx: Vec<usize> = (0..t.rows()).collect();
                return self.reduce(&sp_qminor_free(t, &idx, &idx));
            }
            (_, None) => {
                if let Some(&(i, j)) = self.labels.get(name) {
                    return Ok(t.get(i, j).clone());
                }
            }
            _ => {}
        }
        let label = match bracket {
            Some(b) => format!("{}{}", name, b),
            None => name.to_string(),
        };
        let al = self.g.alphabet();
        if let Some(s) = al.lookup(&label) {
            return Ok(self.g.substitute(&NcPoly::generator(s)));
        }
        if let Some(p) = al.alias(&label) {
            return Ok(self.g.substitute(p));
        }
        Err(EvalError::UnknownSymbol(label))
    }
}
