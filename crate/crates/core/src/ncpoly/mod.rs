//! Free associative algebra over [`QCoeff`] with graded generators.

mod confluence;
mod linear;
mod rules;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::coeff::{QCoeff, Rational};
use crate::parse::{self, Bracket, EvalContext, EvalError};

pub use confluence::{check_confluence, complete, ConfluenceReport, Violation};
pub use linear::{linear_normal_form, standard_words, LinearError};
pub use rules::{NormalFormError, Reducer, RelationSet, Rule};

pub type Sym = u16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub parity: u8,
    /// For a formal inverse symbol, the symbol it inverts.
    pub inverse_of: Option<Sym>,
    /// For the inverse of a named polynomial, that name.
    pub inverts: Option<String>,
}

/// Ordered generator set. The position of a generator is its rank in the
/// monomial order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    by_label: HashMap<String, Sym>,
    inverse: HashMap<Sym, Sym>,
    aliases: HashMap<String, NcPoly>,
    poly_inverses: Vec<(NcPoly, Sym)>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, parity: u8) -> Sym {
        let label = label.into();
        assert!(!self.by_label.contains_key(&label), "duplicate generator {}", label);
        let id = self.gens.len() as Sym;
        self.by_label.insert(label.clone(), id);
        self.gens.push(Generator {
            label,
            parity,
            inverse_of: None,
            inverts: None,
        });
        id
    }

    /// Adds a formal inverse for `base`, printed as `base^-1`.
    pub fn push_inverse(&mut self, base: Sym) -> Sym {
        let label = format!("{}^-1", self.gens[base as usize].label);
        let parity = self.gens[base as usize].parity;
        let id = self.push(label, parity);
        self.gens[id as usize].inverse_of = Some(base);
        self.inverse.insert(base, id);
        self.inverse.insert(id, base);
        id
    }

    /// Adds a formal inverse of `value`, which the parser then knows by
    /// `name`. Printed as `name^-1`.
    pub fn push_poly_inverse(&mut self, name: &str, value: NcPoly) -> Sym {
        let id = self.push(format!("{}^-1", name), 0);
        self.gens[id as usize].inverts = Some(name.to_string());
        self.add_alias(name, value.clone());
        self.poly_inverses.push((value, id));
        id
    }

    /// The inverse symbol of a scalar multiple of an adjoined polynomial.
    pub fn poly_inverse(&self, p: &NcPoly) -> Option<(QCoeff, Sym)> {
        let (w, c) = p.leading()?;
        self.poly_inverses.iter().find_map(|(v, s)| {
            let (vw, vc) = v.leading()?;
            if vw != w {
                return None;
            }
            let ratio = c / vc;
            (&v.scale(&ratio) == p).then(|| (ratio, *s))
        })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn get(&self, s: Sym) -> &Generator {
        &self.gens[s as usize]
    }

    pub fn label(&self, s: Sym) -> &str {
        &self.gens[s as usize].label
    }

    pub fn parity(&self, s: Sym) -> u8 {
        self.gens[s as usize].parity
    }

    pub fn lookup(&self, label: &str) -> Option<Sym> {
        self.by_label.get(label).copied()
    }

    pub fn inverse_of(&self, s: Sym) -> Option<Sym> {
        self.inverse.get(&s).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.gens.len() as Sym
    }

    /// Extra name accepted by the parser, standing for a fixed polynomial.
    pub fn add_alias(&mut self, name: impl Into<String>, value: NcPoly) {
        self.aliases.insert(name.into(), value);
    }

    pub fn alias(&self, name: &str) -> Option<&NcPoly> {
        self.aliases.get(name)
    }

    pub fn word_parity(&self, w: &Word) -> u8 {
        w.iter().map(|&s| self.parity(s)).sum::<u8>() % 2
    }

    /// Parses an expression over this alphabet.
    pub fn parse(&self, text: &str) -> Result<NcPoly, EvalError> {
        let e = parse::parse_expr(text)?;
        parse::evaluate(&e, &PolyCtx { alphabet: self })
    }
}

struct PolyCtx<'a> {
    alphabet: &'a Alphabet,
}

impl EvalContext for PolyCtx<'_> {
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
        Ok(a * b)
    }

    fn neg(&self, a: &NcPoly) -> NcPoly {
        -a
    }

    fn invert(&self, a: &NcPoly) -> Result<NcPoly, EvalError> {
        if let Some(c) = a.as_constant() {
            return c
                .inv()
                .map(NcPoly::constant)
                .map_err(|e| EvalError::Invalid(e.to_string()));
        }
        if let Some((c, s)) = self.alphabet.poly_inverse(a) {
            let c = c.inv().map_err(|e| EvalError::Invalid(e.to_string()))?;
            return Ok(NcPoly::term(c, Word::letter(s)));
        }
        if let Some((c, w)) = a.as_monomial() {
            let mut out = Word::new();
            for &s in w.iter().rev() {
                match self.alphabet.inverse_of(s) {
                    Some(i) => out.push(i),
                    None => {
                        return Err(EvalError::Invalid(format!(
                            "'{}' has no declared inverse",
                            self.alphabet.label(s)
                        )))
                    }
                }
            }
            let c = c.inv().map_err(|e| EvalError::Invalid(e.to_string()))?;
            return Ok(NcPoly::term(c, out));
        }
        Err(EvalError::Invalid("only monomials in invertible symbols can be inverted".into()))
    }

    fn symbol(&self, name: &str, bracket: Option<&Bracket>) -> Result<NcPoly, EvalError> {
        let label = match bracket {
            Some(b) => format!("{}{}", name, b),
            None => name.to_string(),
        };
        if let Some(s) = self.alphabet.lookup(&label) {
            return Ok(NcPoly::generator(s));
        }
        if let Some(p) = self.alphabet.alias(&label) {
            return Ok(p.clone());
        }
        Err(EvalError::UnknownSymbol(label))
    }
}

/// A word in the generators. Ordered degree-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[Sym; 8]>);

impl Word {
    pub fn new() -> Self {
        Self(SmallVec::new())
    }

    pub fn from_slice(s: &[Sym]) -> Self {
        Self(SmallVec::from_slice(s))
    }

    pub fn letter(s: Sym) -> Self {
        Self::from_slice(&[s])
    }

    pub fn concat(&self, other: &[Sym]) -> Self {
        let mut w = self.0.clone();
        w.extend_from_slice(other);
        Self(w)
    }

    pub fn push(&mut self, s: Sym) {
        self.0.push(s)
    }
}

impl std::ops::Deref for Word {
    type Target = [Sym];
    fn deref(&self) -> &[Sym] {
        &self.0
    }
}

impl std::borrow::Borrow<[Sym]> for Word {
    fn borrow(&self) -> &[Sym] {
        &self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sum of coefficient-weighted words, sorted by word order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, QCoeff>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(QCoeff::one())
    }

    pub fn constant(c: QCoeff) -> Self {
        Self::term(c, Word::new())
    }

    pub fn generator(s: Sym) -> Self {
        Self::term(QCoeff::one(), Word::letter(s))
    }

    pub fn word(w: Word) -> Self {
        Self::term(QCoeff::one(), w)
    }

    pub fn term(c: QCoeff, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, QCoeff)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &QCoeff) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &QCoeff)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, QCoeff)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> QCoeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub(crate) fn terms_map(&self) -> &BTreeMap<Word, QCoeff> {
        &self.terms
    }

    pub(crate) fn take_term(&mut self, w: &Word) -> Option<QCoeff> {
        self.terms.remove(w)
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &QCoeff)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.len())
    }

    pub fn as_constant(&self) -> Option<QCoeff> {
        match self.terms.len() {
            0 => Some(QCoeff::zero()),
            1 => {
                let (w, c) = self.terms.iter().next().unwrap();
                w.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&QCoeff, &Word)> {
        if self.terms.len() == 1 {
            let (w, c) = self.terms.iter().next().unwrap();
            Some((c, w))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// `left * self * right` for words.
    pub fn sandwich(&self, left: &[Sym], right: &[Sym]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let mut v = Word::from_slice(left);
                    v.0.extend_from_slice(w);
                    v.0.extend_from_slice(right);
                    (v, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Homogeneous components, by degree.
    pub fn components(&self) -> BTreeMap<usize, NcPoly> {
        let mut out: BTreeMap<usize, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_default()
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// Sends every generator `g` to `image(g)` (an algebra map of the free
    /// algebra).
    pub fn substitute(&self, image: &dyn Fn(Sym) -> NcPoly) -> Self {
        let mut cache: HashMap<Sym, NcPoly> = HashMap::new();
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for &s in w.iter() {
                let img = cache.entry(s).or_insert_with(|| image(s));
                acc = &acc * &*img;
                if acc.is_zero() {
                    break;
                }
            }
            for (v, d) in acc.terms {
                out.add_term(v, d);
            }
        }
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.terms.keys().flat_map(|w| w.iter().copied())
    }

    /// Specializes every coefficient at `s = s0`, keeping the words.
    pub fn eval_coeffs(&self, s0: &Rational) -> Result<BTreeMap<Word, Rational>, crate::coeff::CoeffError> {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = c.eval_at(s0)?;
            if v != Rational::from_integer(0.into()) {
                out.insert(w.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alphabet }
    }
}

pub fn fmt_word(w: &[Sym], alphabet: &Alphabet) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let k = j - i;
        let g = alphabet.get(w[i]);
        let base = match (&g.inverse_of, &g.inverts) {
            (Some(b), _) => Some(alphabet.label(*b)),
            (None, Some(name)) => Some(name.as_str()),
            _ => None,
        };
        let text = match (base, k) {
            (Some(b), 1) => format!("{}^-1", b),
            (Some(b), k) => format!("{}^-{}", b, k),
            (None, 1) => g.label.clone(),
            (None, k) => format!("{}^{}", g.label, k),
        };
        parts.push(text);
        i = j;
    }
    parts.join("*")
}

pub struct PolyDisplay<'a> {
    poly: &'a NcPoly,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factor = mag.factor_text();
            if w.is_empty() {
                f.write_str(factor.as_deref().unwrap_or("1"))?;
            } else {
                if let Some(t) = factor {
                    write!(f, "{}*", t)?;
                }
                f.write_str(&fmt_word(w, self.alphabet))?;
            }
        }
        Ok(())
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (w, c) in &small.terms {
            big.add_term(w.clone(), c.clone());
        }
        big
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: &NcPoly) -> NcPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}

impl From<QCoeff> for NcPoly {
    fn from(c: QCoeff) -> Self {
        NcPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> (Alphabet, NcPoly, NcPoly, NcPoly) {
        let mut al = Alphabet::new();
        let a = NcPoly::generator(al.push("a", 0));
        let b = NcPoly::generator(al.push("b", 0));
        let c = NcPoly::generator(al.push("c", 0));
        (al, a, b, c)
    }

    #[test]
    fn multiply_examples() {
        let (al, a, b, c) = abc();
        assert_eq!((&a * &b).display(&al).to_string(), "a*b");
        assert_eq!(((&a + &b) * &c).display(&al).to_string(), "a*c + b*c");
        let x = a.scale(&QCoeff::lambda()) * b.scale(&QCoeff::q());
        assert_eq!(x.display(&al).to_string(), "q*lambda*a*b");
    }

    #[test]
    fn word_order_is_deglex() {
        let long = Word::from_slice(&[0, 0]);
        let short = Word::from_slice(&[2]);
        assert!(short < long);
        assert!(Word::from_slice(&[0, 1]) < Word::from_slice(&[1, 0]));
    }

    #[test]
    fn printing_compresses_powers() {
        let (mut al, a, b, _) = abc();
        let ainv = NcPoly::generator(al.push_inverse(0));
        let p = &(&a * &a) * &b - &ainv * &ainv + NcPoly::constant(QCoeff::q() + QCoeff::one());
        assert_eq!(p.display(&al).to_string(), "(q + 1) - a^-2 + a^2*b");
        assert_eq!(al.parse("a^-1").unwrap(), ainv);
    }

    #[test]
    fn parse_into_polynomials() {
        let (al, a, b, _) = abc();
        let p = al.parse("a*b - q^-1*b*a").unwrap();
        let expect = &a * &b - (&b * &a).scale(&QCoeff::q_pow(-1));
        assert_eq!(p, expect);
        assert!(al.parse("b^-1").is_err());
        assert!(matches!(al.parse("zz"), Err(EvalError::UnknownSymbol(_))));
        let text = p.display(&al).to_string();
        assert_eq!(al.parse(&text).unwrap(), p);
    }
}
