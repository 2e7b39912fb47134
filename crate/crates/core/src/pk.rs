//! The fixed-mass inner operator algebra: noncommutative polynomials in
//! words over the letters {p, k}, adjacent letters joined by one factor b.
//!
//! The calculation rules at fixed mass are p² = k² = p and pk = kp = k,
//! so the letter set is the group ℤ₂ with p the identity and k the
//! involution. A word of n letters has b-degree n − 1; multiplying two
//! words concatenates them and contracts the junction pair, so b-degrees
//! add. Every polynomial carries a mandatory truncation order (the
//! maximum b-degree retained); operations never extend it.

use crate::coeff::{Coefficient, Rational};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum PkLetter {
    P,
    K,
}

impl PkLetter {
    /// The ℤ₂ contraction table: p·p = p, k·k = p, p·k = k·p = k.
    pub fn contract(self, other: PkLetter) -> PkLetter {
        if self == other {
            PkLetter::P
        } else {
            PkLetter::K
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PkLetter::P => 'p',
            PkLetter::K => 'k',
        }
    }
}

/// A non-empty word over {p, k}; adjacent letters are implicitly joined
/// by one factor b, so `b_degree = len − 1`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct PkWord {
    letters: Vec<PkLetter>,
}

impl PkWord {
    pub fn new(letters: Vec<PkLetter>) -> Self {
        assert!(!letters.is_empty(), "pk word must be non-empty");
        PkWord { letters }
    }

    pub fn single(letter: PkLetter) -> Self {
        PkWord {
            letters: vec![letter],
        }
    }

    /// The identity word p.
    pub fn identity() -> Self {
        PkWord::single(PkLetter::P)
    }

    /// The word k(bk)^{2β}, i.e. 2β+1 letters k.
    pub fn k_run(beta: u32) -> Self {
        PkWord::new(vec![PkLetter::K; 2 * beta as usize + 1])
    }

    pub fn letters(&self) -> &[PkLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn b_degree(&self) -> u32 {
        (self.letters.len() - 1) as u32
    }

    pub fn count_p(&self) -> usize {
        self.letters.iter().filter(|&&l| l == PkLetter::P).count()
    }

    pub fn count_k(&self) -> usize {
        self.letters.iter().filter(|&&l| l == PkLetter::K).count()
    }

    /// Concatenation with the junction pair contracted; b-degrees add.
    pub fn mul(&self, other: &PkWord) -> PkWord {
        let mut letters = Vec::with_capacity(self.len() + other.len() - 1);
        letters.extend_from_slice(&self.letters[..self.len() - 1]);
        letters.push(self.letters[self.len() - 1].contract(other.letters[0]));
        letters.extend_from_slice(&other.letters[1..]);
        PkWord { letters }
    }

    pub fn map_letters(&self, f: impl Fn(PkLetter) -> PkLetter) -> PkWord {
        PkWord::new(self.letters.iter().map(|&l| f(l)).collect())
    }
}

impl Ord for PkWord {
    fn cmp(&self, other: &Self) -> Ordering {
        // canonical order: ascending letter count, then lexicographic
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for PkWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PkWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "b")?;
            }
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("empty word")]
    Empty,
    #[error("invalid letter {0:?} (expected one of {1})")]
    BadLetter(String, &'static str),
}

impl FromStr for PkWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut letters = Vec::new();
        for part in s.split('b') {
            match part {
                "p" => letters.push(PkLetter::P),
                "k" => letters.push(PkLetter::K),
                other => return Err(WordParseError::BadLetter(other.to_string(), "p, k")),
            }
        }
        Ok(PkWord::new(letters))
    }
}

/// A truncated polynomial over pk-words with ℚ[π²] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PkPoly {
    terms: BTreeMap<PkWord, Coefficient>,
    order: u32,
}

impl PkPoly {
    pub fn zero(order: u32) -> Self {
        PkPoly {
            terms: BTreeMap::new(),
            order,
        }
    }

    /// The identity polynomial p (b-degree 0).
    pub fn identity(order: u32) -> Self {
        PkPoly::from_term(PkWord::identity(), Coefficient::one(), order)
    }

    pub fn from_term(word: PkWord, coeff: Coefficient, order: u32) -> Self {
        let mut p = PkPoly::zero(order);
        p.insert(word, coeff);
        p
    }

    pub fn truncation_order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PkWord, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: &PkWord) -> Coefficient {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn min_b_degree(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.b_degree()).min()
    }

    /// Adds `coeff`·`word`, dropping words above the truncation order and
    /// entries that cancel to zero.
    pub fn insert(&mut self, word: PkWord, coeff: Coefficient) {
        if coeff.is_zero() || word.b_degree() > self.order {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&coeff);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Re-truncate to a (typically lower) order.
    pub fn truncate(&self, order: u32) -> PkPoly {
        let mut out = PkPoly::zero(order);
        for (w, c) in self.terms() {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    /// Coefficient-wise sum; the result carries the minimum of the two
    /// truncation orders and is re-truncated to it.
    pub fn add(&self, other: &PkPoly) -> PkPoly {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (w, c) in other.terms() {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PkPoly {
        PkPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &PkPoly) -> PkPoly {
        self.add(&other.neg())
    }

    /// Bilinear extension of the word product, truncated to the minimum
    /// of the two orders.
    pub fn mul(&self, other: &PkPoly) -> PkPoly {
        let order = self.order.min(other.order);
        let mut out = PkPoly::zero(order);
        for (wa, ca) in self.terms() {
            if wa.b_degree() > order {
                continue;
            }
            for (wb, cb) in other.terms() {
                if wa.b_degree() + wb.b_degree() > order {
                    continue;
                }
                out.insert(wa.mul(wb), ca.mul(cb));
            }
        }
        out
    }

    /// n-fold product with a⁰ = p.
    pub fn pow(&self, n: u32) -> PkPoly {
        let mut acc = PkPoly::identity(self.order);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, coeff: &Coefficient) -> PkPoly {
        let mut out = PkPoly::zero(self.order);
        for (w, c) in self.terms() {
            out.insert(w.clone(), c.mul(coeff));
        }
        out
    }

    pub fn scale_rational(&self, value: &Rational) -> PkPoly {
        if value.is_zero() {
            return PkPoly::zero(self.order);
        }
        let mut out = PkPoly::zero(self.order);
        for (w, c) in self.terms() {
            out.insert(w.clone(), c.scale(value));
        }
        out
    }

    /// Applies a letter substitution to every word, merging collisions.
    pub fn map_letters(&self, f: impl Fn(PkLetter) -> PkLetter + Copy) -> PkPoly {
        let mut out = PkPoly::zero(self.order);
        for (w, c) in self.terms() {
            out.insert(w.map_letters(f), c.clone());
        }
        out
    }
}

impl fmt::Display for PkPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, coeff) in self.terms() {
            for (pi_exp, value) in coeff.iter() {
                fmt_term(f, &mut first, &word.to_string(), pi_exp, value)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    word: &str,
    pi_exp: u32,
    value: &Rational,
) -> fmt::Result {
    use num_traits::{One, Signed};
    if *first {
        if value.is_negative() {
            write!(f, "-")?;
        }
        *first = false;
    } else {
        write!(f, " {} ", if value.is_negative() { "-" } else { "+" })?;
    }
    let mag = value.abs();
    if !mag.is_one() {
        write!(f, "{mag} ")?;
    }
    if pi_exp > 0 {
        write!(f, "pi^{pi_exp} ")?;
    }
    write!(f, "{word}")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PowerSeriesError {
    #[error(
        "power-series argument contains the b-degree-0 word {0}; the series would not terminate"
    )]
    NonTerminating(String),
}

/// const_term·p + Σ_{n≥1} coeffs(n)·argⁿ, truncated at b-degree `order`.
///
/// The argument must have minimum b-degree ≥ 1 so the sum is finite: the
/// n-th power contributes nothing once n exceeds order/min_degree(arg).
pub fn apply_power_series(
    coeffs: impl Fn(u32) -> Rational,
    const_term: Rational,
    arg: &PkPoly,
    order: u32,
) -> Result<PkPoly, PowerSeriesError> {
    // the result cannot be more precise than the argument
    let order = order.min(arg.truncation_order());
    let arg = arg.truncate(order);
    if let Some(w) = arg.terms().map(|(w, _)| w).find(|w| w.b_degree() == 0) {
        return Err(PowerSeriesError::NonTerminating(w.to_string()));
    }
    let mut out = PkPoly::identity(order).scale_rational(&const_term);
    let Some(min_deg) = arg.min_b_degree() else {
        return Ok(out);
    };
    let mut power = PkPoly::identity(order);
    let mut n = 1;
    while n * min_deg <= order {
        power = power.mul(&arg);
        out = out.add(&power.scale_rational(&coeffs(n)));
        n += 1;
    }
    Ok(out)
}
