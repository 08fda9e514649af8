use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::generator::{Gen, Word};
use crate::exact::{self, Q};

/// A rational linear combination of words. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Q>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        NCPoly::term(Word::unit(), c)
    }

    pub fn gen(g: Gen) -> Self {
        NCPoly::term(Word(vec![g]), Q::one())
    }

    pub fn word(w: impl Into<Word>) -> Self {
        NCPoly::term(w.into(), Q::one())
    }

    pub fn term(w: Word, c: Q) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    /// Product of generators in order.
    pub fn product(gens: impl IntoIterator<Item = Gen>) -> Self {
        NCPoly::word(Word(gens.into_iter().collect()))
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Q) {
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Coefficient of the unit word.
    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::unit())
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// The formal adjoint: words reversed, generators starred, coefficients
    /// unchanged (they are real).
    pub fn adjoint(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.adjoint(), c.clone())).collect(),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.terms.keys().flat_map(|w| w.0.iter().copied())
    }

    /// `Σ (len(word) + 1)` over the support; strictly decreases under every
    /// rewrite the engine applies.
    pub fn cost(&self) -> usize {
        self.terms.keys().map(|w| w.len() + 1).sum()
    }

    pub fn max_abs_coeff(&self) -> Q {
        exact::max_abs(self.terms.values().cloned())
    }
}

impl From<Gen> for NCPoly {
    fn from(g: Gen) -> Self {
        NCPoly::gen(g)
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Q::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for NCPoly {
    fn sum<I: Iterator<Item = NCPoly>>(iter: I) -> NCPoly {
        let mut out = NCPoly::zero();
        for p in iter {
            out.add_scaled(&p, &Q::one());
        }
        out
    }
}

fn write_terms<'a, K: 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a K, &'a Q)>,
    show: impl Fn(&K) -> (String, bool),
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let (body, unit) = show(k);
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if unit {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            f.write_str(&body)?;
        } else {
            write!(f, "{mag} {body}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), |w| (w.to_string(), w.is_unit()))
    }
}

/// An element of the algebraic tensor square: rational combination of
/// `left ⊗ right` word pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    terms: BTreeMap<(Word, Word), Q>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly::default()
    }

    pub fn simple(a: &NCPoly, b: &NCPoly) -> Self {
        let mut out = TensorPoly::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_term(wa.clone(), wb.clone(), ca * cb);
            }
        }
        out
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let v = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Q) {
        for ((a, b), v) in &other.terms {
            self.add_term(a.clone(), b.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Q)> {
        self.terms.iter()
    }

    /// Leg-wise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                out.add_term(a.concat(c), b.concat(d), x * y);
            }
        }
        out
    }

    /// Groups terms by left word: `Σ_a a ⊗ p_a`.
    pub fn by_left(&self) -> BTreeMap<Word, NCPoly> {
        let mut out: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            out.entry(a.clone()).or_default().add_term(b.clone(), c.clone());
        }
        out
    }

    /// Groups terms by right word: `Σ_b p_b ⊗ b`.
    pub fn by_right(&self) -> BTreeMap<Word, NCPoly> {
        let mut out: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            out.entry(b.clone()).or_default().add_term(a.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), |(a, b)| (format!("{a} ⊗ {b}"), false))
    }
}
