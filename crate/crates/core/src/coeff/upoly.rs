//! Dense univariate polynomials over the rationals, used only for gcd
//! reduction of rational-function coefficients.

use num_traits::{One, Zero};

use super::Rational;

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

#[cfg(test)]
pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Polynomial long division; `b` must be nonzero.
pub(crate) fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() / lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &factor * y;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn make_monic(p: &mut [Rational]) {
    if let Some(lead) = p.last().cloned() {
        if !lead.is_one() {
            for c in p.iter_mut() {
                *c /= &lead;
            }
        }
    }
}

/// Monic greatest common divisor.
pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&mut x);
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x+3)
        let a = mul(&r(&[-1, 1]), &r(&[2, 1]));
        let b = mul(&r(&[-1, 1]), &r(&[3, 1]));
        assert_eq!(gcd(&a, &b), r(&[-1, 1]));
    }

    #[test]
    fn divrem_exact() {
        let a = mul(&r(&[1, 1]), &r(&[-1, 0, 2]));
        let (q, rem) = divrem(&a, &r(&[1, 1]));
        assert!(rem.is_empty());
        assert_eq!(q, r(&[-1, 0, 2]));
    }
}
