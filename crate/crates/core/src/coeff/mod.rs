//! Exact scalars: rational functions of `s = q^(1/2)` with rational
//! coefficients.
//!
//! Every [`QCoeff`] is kept in a canonical reduced form on construction, so
//! structural equality is mathematical equality.

mod upoly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at s = {0}")]
    Pole(Rational),
    #[error("cannot substitute s = 0 into a term with a negative power of s")]
    ZeroSubstitution,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Finite sum `sum_k c_k s^k` with integer `k` and nonzero rational `c_k`,
/// stored in ascending exponent order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Rational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(exp, c)] }
        }
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(it: I) -> Self {
        let mut terms: Vec<(i32, Rational)> = it.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    /// Splits into `s^shift * p(s)` with `p(0) != 0`; `p` is dense ascending.
    fn split(&self) -> (i32, Vec<Rational>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut dense = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            dense[(e - lo) as usize] = c.clone();
        }
        (lo, dense)
    }

    fn from_dense(shift: i32, dense: &[Rational]) -> Self {
        Self {
            terms: dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (shift + i as i32, c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, s0: &Rational) -> Result<Rational, CoeffError> {
        if s0.is_zero() {
            if self.terms.iter().any(|t| t.0 < 0) {
                return Err(CoeffError::ZeroSubstitution);
            }
            return Ok(self
                .terms
                .iter()
                .find(|t| t.0 == 0)
                .map(|t| t.1.clone())
                .unwrap_or_else(Rational::zero));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(s0, *e);
        }
        Ok(acc)
    }
}

fn pow_rat(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (a, b) = (&self.terms, &rhs.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].0 < b[j].0 {
                out.push(a[i].clone());
                i += 1;
            } else if a[i].0 > b[j].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = &a[i].1 + &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return LaurentPoly {
                terms: rhs.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        if rhs.terms.len() == 1 {
            return rhs * self;
        }
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .flat_map(|(e, c)| rhs.terms.iter().map(move |(f, d)| (e + f, c * d))),
        )
    }
}

/// Reduced fraction `num / den` of Laurent polynomials in `s`.
///
/// Canonical form: `den` has lowest exponent zero and leading coefficient
/// one, and shares no nonconstant factor with `num`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QCoeff {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for QCoeff {
    fn default() -> Self {
        Self::zero()
    }
}

impl QCoeff {
    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_laurent(LaurentPoly::constant(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `s^k`, i.e. `q^(k/2)`.
    pub fn s_pow(k: i32) -> Self {
        Self::from_laurent(LaurentPoly::monomial(k, Rational::one()))
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `lambda = q - q^-1`.
    pub fn lambda() -> Self {
        Self::from_laurent(LaurentPoly::from_terms([
            (2, Rational::one()),
            (-2, -Rational::one()),
        ]))
    }

    /// `omega = q^(1/2) - q^(-1/2)`.
    pub fn omega() -> Self {
        Self::from_laurent(LaurentPoly::from_terms([
            (1, Rational::one()),
            (-1, -Rational::one()),
        ]))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.terms.len() == 1 {
            let (e, c) = &den.terms[0];
            return Ok(Self::from_laurent(num.shift(-e).scale(&c.recip())));
        }
        let (dshift, mut dd) = den.split();
        let (nshift, mut nd) = num.split();
        let g = upoly::gcd(&nd, &dd);
        if g.len() > 1 {
            nd = upoly::divrem(&nd, &g).0;
            dd = upoly::divrem(&dd, &g).0;
        }
        let lead = dd.last().unwrap().clone();
        if !lead.is_one() {
            for c in nd.iter_mut() {
                *c /= &lead;
            }
            for c in dd.iter_mut() {
                *c /= &lead;
            }
        }
        Ok(Self {
            num: LaurentPoly::from_dense(nshift - dshift, &nd),
            den: LaurentPoly::from_dense(0, &dd),
        })
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// `Some((k, c))` when the value is `c * s^k`.
    pub fn as_monomial(&self) -> Option<(i32, &Rational)> {
        if self.den.is_one() && self.num.terms.len() == 1 {
            let (e, c) = &self.num.terms[0];
            Some((*e, c))
        } else {
            None
        }
    }

    /// Sign of the highest-exponent numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.leading_coeff().is_some_and(|c| c.is_negative())
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        if rhs.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, CoeffError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            num: self.num.scale(r),
            den: if r.is_zero() {
                LaurentPoly::one()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn eval_at(&self, s0: &Rational) -> Result<Rational, CoeffError> {
        let d = self.den.eval(s0)?;
        if d.is_zero() {
            return Err(CoeffError::Pole(s0.clone()));
        }
        Ok(self.num.eval(s0)? / d)
    }

    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }
}

impl From<i64> for QCoeff {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for QCoeff {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QCoeff::from_laurent(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return QCoeff::reduced(&self.num + &rhs.num, self.den.clone());
        }
        QCoeff::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        self + &(-rhs)
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() || rhs.is_zero() {
            return QCoeff::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QCoeff::from_laurent(&self.num * &rhs.num);
        }
        QCoeff::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`QCoeff::try_div`] for a checked form.
impl Div for &QCoeff {
    type Output = QCoeff;
    fn div(self, rhs: &QCoeff) -> QCoeff {
        self.try_div(rhs).expect("division by zero coefficient")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QCoeff {
            type Output = QCoeff;
            fn $m(self, rhs: QCoeff) -> QCoeff {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QCoeff> for QCoeff {
            type Output = QCoeff;
            fn $m(self, rhs: &QCoeff) -> QCoeff {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `q`-power text for `s^e`; empty for `e = 0`.
fn fmt_power(e: i32) -> String {
    match e {
        0 => String::new(),
        2 => "q".to_string(),
        e if e % 2 == 0 => format!("q^{}", e / 2),
        e => format!("q^({}/2)", e),
    }
}

fn fmt_abs_term(e: i32, c: &Rational) -> String {
    let p = fmt_power(e);
    let a = c.abs();
    if p.is_empty() {
        fmt_rational(&a)
    } else if a.is_one() {
        p
    } else {
        format!("{}*{}", fmt_rational(&a), p)
    }
}

fn fmt_laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&fmt_abs_term(*e, c));
    }
    out
}

impl QCoeff {
    /// Text for a coefficient known to have positive leading sign, in a form
    /// that can be followed by `*word`. `None` means the value is one.
    pub(crate) fn factor_text(&self) -> Option<String> {
        if self.is_one() {
            return None;
        }
        if let Some((e, c)) = self.as_monomial() {
            return Some(fmt_abs_term(e, c));
        }
        for (name, base) in [("lambda", QCoeff::lambda()), ("omega", QCoeff::omega())] {
            let ratio = self / &base;
            if let Some((e, c)) = ratio.as_monomial() {
                if c.is_negative() {
                    continue;
                }
                if e == 0 && c.is_one() {
                    return Some(name.to_string());
                }
                return Some(format!("{}*{}", fmt_abs_term(e, c), name));
            }
        }
        Some(format!("({})", self))
    }

    fn fmt_unsigned_parts(&self) -> String {
        if self.den.is_one() {
            return fmt_laurent(&self.num);
        }
        let n = fmt_laurent(&self.num);
        let d = fmt_laurent(&self.den);
        let n = if self.num.terms.len() > 1 {
            format!("({})", n)
        } else {
            n
        };
        format!("{}/({})", n, d)
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.as_monomial().is_some() {
            return write!(f, "{}", fmt_laurent(&self.num));
        }
        let (neg, mag) = if self.is_negative() {
            (true, -self)
        } else {
            (false, self.clone())
        };
        for (name, base) in [("lambda", QCoeff::lambda()), ("omega", QCoeff::omega())] {
            let ratio = &mag / &base;
            if let Some((e, c)) = ratio.as_monomial() {
                if !c.is_negative() {
                    let body = if e == 0 && c.is_one() {
                        name.to_string()
                    } else {
                        format!("{}*{}", fmt_abs_term(e, c), name)
                    };
                    return write!(f, "{}{}", if neg { "-" } else { "" }, body);
                }
            }
        }
        write!(f, "{}", self.fmt_unsigned_parts())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QCoeff {
        QCoeff::q()
    }
    fn one() -> QCoeff {
        QCoeff::one()
    }

    #[test]
    fn add_identity_and_lambda_cancellation() {
        let x = q() + QCoeff::q_pow(-1);
        assert_eq!(&x + &QCoeff::zero(), x);
        assert!((QCoeff::lambda() + (QCoeff::q_pow(-1) - q())).is_zero());
    }

    #[test]
    fn add_fractions() {
        let a = one() / (q() - one());
        let b = one() / (q() + one());
        let expect = (QCoeff::from_int(2) * q()) / (QCoeff::q_pow(2) - one());
        assert_eq!(a + b, expect);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            QCoeff::lambda() * (q() + QCoeff::q_pow(-1)),
            QCoeff::q_pow(2) - QCoeff::q_pow(-2)
        );
        assert_eq!(
            QCoeff::omega() * QCoeff::omega(),
            q() - QCoeff::from_int(2) + QCoeff::q_pow(-1)
        );
        let r = (QCoeff::q_pow(2) - one()) / (q() - one());
        assert_eq!(r * one(), q() + one());
    }

    #[test]
    fn div_examples() {
        assert_eq!(
            QCoeff::lambda() / QCoeff::omega(),
            QCoeff::s_pow(1) + QCoeff::s_pow(-1)
        );
        let x = (q() + QCoeff::from_int(3)) / (QCoeff::q_pow(2) - QCoeff::s_pow(1));
        assert!((&x / &x).is_one());
        assert_eq!(one().try_div(&QCoeff::zero()), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(QCoeff::lambda().eval_at(&rat(2, 1)), Ok(rat(15, 4)));
        assert_eq!(q().eval_at(&rat(1, 1)), Ok(rat(1, 1)));
        let pole = one() / (q() - one());
        assert!(matches!(pole.eval_at(&rat(1, 1)), Err(CoeffError::Pole(_))));
        assert_eq!(
            QCoeff::q_pow(-1).eval_at(&rat(0, 1)),
            Err(CoeffError::ZeroSubstitution)
        );
    }

    #[test]
    fn canonical_denominator() {
        let x = (QCoeff::from_int(2) * q()) / (QCoeff::from_int(4) * QCoeff::q_pow(2) - QCoeff::from_int(4));
        assert!(x.denominator().min_exp() == Some(0));
        assert!(x.denominator().leading_coeff().unwrap().is_one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(QCoeff::lambda().to_string(), "lambda");
        assert_eq!((-QCoeff::lambda()).to_string(), "-lambda");
        assert_eq!((q() * QCoeff::lambda()).to_string(), "q*lambda");
        assert_eq!(QCoeff::s_pow(-1).to_string(), "q^(-1/2)");
        assert_eq!((QCoeff::omega() * QCoeff::omega()).to_string(), "q - 2 + q^-1");
        assert_eq!((one() / (q() - one())).to_string(), "1/(q - 1)");
    }
}
