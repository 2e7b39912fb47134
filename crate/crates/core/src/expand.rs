//! Expansion of pk-cores into the fully resolved layer of 𝓑-separated
//! words over {p, k, s}.
//!
//! Each composite line b = Σ_j (−1)^j 𝓑(s𝓑)^j is replaced independently;
//! a wrapped core additionally receives the prefix b^< = Σ_i (−1)^i (s𝓑)^i
//! and the suffix b^> = Σ_i (−1)^i (𝓑s)^i. Every inserted s raises the
//! 𝓑-degree by one and contributes a factor −1, so a pk-word of b-degree
//! d expands into 𝓑-words of degree d + #s and the expansion is finite
//! per truncation order. Products are never computed in this layer; only
//! final series are expanded.

use crate::coeff::Coefficient;
use crate::pk::{PkLetter, PkPoly, WordParseError};
use crate::series::{Engine, SeriesId};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum BLetter {
    P,
    K,
    S,
}

impl BLetter {
    pub fn as_char(self) -> char {
        match self {
            BLetter::P => 'p',
            BLetter::K => 'k',
            BLetter::S => 's',
        }
    }
}

impl From<PkLetter> for BLetter {
    fn from(l: PkLetter) -> Self {
        match l {
            PkLetter::P => BLetter::P,
            PkLetter::K => BLetter::K,
        }
    }
}

/// A non-empty word over {p, k, s}; adjacent letters are joined by one
/// factor 𝓑, so `b_degree = len − 1`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct BWord {
    letters: Vec<BLetter>,
}

impl BWord {
    pub fn new(letters: Vec<BLetter>) -> Self {
        assert!(!letters.is_empty(), "B word must be non-empty");
        BWord { letters }
    }

    pub fn letters(&self) -> &[BLetter] {
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

    pub fn count(&self, letter: BLetter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// The pk-word obtained by deleting every s (None if nothing is left).
    pub fn strip_s(&self) -> Option<crate::pk::PkWord> {
        let kept: Vec<PkLetter> = self
            .letters
            .iter()
            .filter_map(|&l| match l {
                BLetter::P => Some(PkLetter::P),
                BLetter::K => Some(PkLetter::K),
                BLetter::S => None,
            })
            .collect();
        if kept.is_empty() {
            None
        } else {
            Some(crate::pk::PkWord::new(kept))
        }
    }

    pub fn map_letters(&self, f: impl Fn(BLetter) -> BLetter) -> BWord {
        BWord::new(self.letters.iter().map(|&l| f(l)).collect())
    }
}

impl Ord for BWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for BWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "B")?;
            }
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for BWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut letters = Vec::new();
        for part in s.split('B') {
            match part {
                "p" => letters.push(BLetter::P),
                "k" => letters.push(BLetter::K),
                "s" => letters.push(BLetter::S),
                other => return Err(WordParseError::BadLetter(other.to_string(), "p, k, s")),
            }
        }
        Ok(BWord::new(letters))
    }
}

/// A truncated polynomial over 𝓑-words with ℚ[π²] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BPoly {
    terms: BTreeMap<BWord, Coefficient>,
    order: u32,
}

impl BPoly {
    pub fn zero(order: u32) -> Self {
        BPoly {
            terms: BTreeMap::new(),
            order,
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&BWord, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: &BWord) -> Coefficient {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn min_b_degree(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.b_degree()).min()
    }

    pub fn insert(&mut self, word: BWord, coeff: Coefficient) {
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

    pub fn add(&self, other: &BPoly) -> BPoly {
        let order = self.order.min(other.order);
        let mut out = BPoly::zero(order);
        for (w, c) in self.terms().chain(other.terms()) {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> BPoly {
        BPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &BPoly) -> BPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, coeff: &Coefficient) -> BPoly {
        let mut out = BPoly::zero(self.order);
        for (w, c) in self.terms() {
            out.insert(w.clone(), c.mul(coeff));
        }
        out
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, coeff) in self.terms() {
            for (pi_exp, value) in coeff.iter() {
                crate::pk::fmt_term(f, &mut first, &word.to_string(), pi_exp, value)?;
            }
        }
        Ok(())
    }
}

/// Every p letter mapped to k; colliding words are merged by summing
/// their coefficients.
pub fn replace_p_by_k(poly: &BPoly) -> BPoly {
    let mut out = BPoly::zero(poly.truncation_order());
    for (w, c) in poly.terms() {
        let mapped = w.map_letters(|l| if l == BLetter::P { BLetter::K } else { l });
        out.insert(mapped, c.clone());
    }
    out
}

/// Distributes `total` s-insertions over `slots` slots, calling `emit`
/// with each composition.
fn compositions(total: u32, slots: usize, emit: &mut impl FnMut(&[u32])) {
    fn rec(remaining: u32, buf: &mut Vec<u32>, slots: usize, emit: &mut impl FnMut(&[u32])) {
        if buf.len() == slots - 1 {
            buf.push(remaining);
            emit(buf);
            buf.pop();
            return;
        }
        for take in 0..=remaining {
            buf.push(take);
            rec(remaining - take, buf, slots, emit);
            buf.pop();
        }
    }
    if slots == 0 {
        if total == 0 {
            emit(&[]);
        }
        return;
    }
    rec(total, &mut Vec::with_capacity(slots), slots, emit);
}

/// Expands a pk-core into the 𝓑-layer. With `wrap` set the plain wrapper
/// pair b^<, b^> contributes s-prefixes and s-suffixes; without it only
/// the internal b-lines are resolved (the convention for X and Y).
///
/// Every inserted s carries a sign −1, so a source term of b-degree d and
/// coefficient c produces, for each way of placing t ≤ order − d letters
/// s, the corresponding word with coefficient (−1)^t c.
pub fn expand_core(core: &PkPoly, order: u32, wrap: bool) -> BPoly {
    let mut out = BPoly::zero(order);
    for (word, coeff) in core.terms() {
        let d = word.b_degree();
        if d > order {
            continue;
        }
        let slots = word.len() - 1 + if wrap { 2 } else { 0 };
        for total in 0..=(order - d) {
            let signed = if total % 2 == 0 {
                coeff.clone()
            } else {
                coeff.neg()
            };
            compositions(total, slots, &mut |counts| {
                let mut letters = Vec::with_capacity(word.len() + total as usize);
                let (prefix, internal) = if wrap {
                    (counts[0], &counts[1..counts.len() - 1])
                } else {
                    (0, counts)
                };
                letters.extend(std::iter::repeat_n(BLetter::S, prefix as usize));
                for (i, &l) in word.letters().iter().enumerate() {
                    if i > 0 {
                        letters.extend(std::iter::repeat_n(BLetter::S, internal[i - 1] as usize));
                    }
                    letters.push(l.into());
                }
                if wrap {
                    letters.extend(std::iter::repeat_n(
                        BLetter::S,
                        counts[counts.len() - 1] as usize,
                    ));
                }
                out.insert(BWord::new(letters), signed.clone());
            });
        }
    }
    out
}

/// Builds the pk-core of a named series and expands it to the 𝓑-layer.
/// Wrapped operators expand with the plain wrapper pair; the inner series
/// A, X, U, Y expand bare. For k̃ and p̃^res the independently defined
/// direct forms are expanded as well and must agree with the core route.
pub fn expand_named(engine: &Engine, id: SeriesId, order: u32) -> BPoly {
    let result = expand_core(&engine.pk_core(id, order), order, !id.is_inner());
    match id {
        SeriesId::Ktilde => {
            let direct = expand_core(&engine.ktilde_plain_direct(order), order, true);
            assert_eq!(
                result, direct,
                "internal error: the two expansion routes for ktilde disagree"
            );
        }
        SeriesId::PtildeRes => {
            let direct = expand_core(&engine.pres_core_direct(order), order, true);
            assert_eq!(
                result, direct,
                "internal error: the two expansion routes for the residual projector disagree"
            );
        }
        _ => {}
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::pk::PkWord;

    fn bw(s: &str) -> BWord {
        s.parse().unwrap()
    }

    fn unit_core(word: &str, order: u32) -> PkPoly {
        PkPoly::from_term(word.parse::<PkWord>().unwrap(), Coefficient::one(), order)
    }

    fn bpoly(order: u32, terms: &[(&str, u32, i64, i64)]) -> BPoly {
        let mut p = BPoly::zero(order);
        for &(word, pi, num, den) in terms {
            p.insert(bw(word), Coefficient::term(pi, rat(num, den)));
        }
        p
    }

    #[test]
    fn wrapped_expansion_of_k() {
        let core = unit_core("k", 2);
        assert_eq!(
            expand_core(&core, 1, true),
            bpoly(1, &[("k", 0, 1, 1), ("sBk", 0, -1, 1), ("kBs", 0, -1, 1)])
        );
        assert_eq!(
            expand_core(&core, 2, true),
            bpoly(
                2,
                &[
                    ("k", 0, 1, 1),
                    ("sBk", 0, -1, 1),
                    ("kBs", 0, -1, 1),
                    ("kBsBs", 0, 1, 1),
                    ("sBkBs", 0, 1, 1),
                    ("sBsBk", 0, 1, 1),
                ]
            )
        );
    }

    #[test]
    fn bare_expansion_of_p_is_p() {
        assert_eq!(
            expand_core(&unit_core("p", 0), 0, false),
            bpoly(0, &[("p", 0, 1, 1)])
        );
    }

    #[test]
    fn expansion_is_linear() {
        let order = 3;
        let eng = Engine::new();
        let a = eng.x(order);
        let b = eng.kres_closed(order);
        let lhs = expand_core(&a.add(&b), order, true);
        let rhs = expand_core(&a, order, true).add(&expand_core(&b, order, true));
        assert_eq!(lhs, rhs);

        let c = Coefficient::term(2, rat(-3, 7));
        assert_eq!(
            expand_core(&a.scale(&c), order, true),
            expand_core(&a, order, true).scale(&c)
        );
    }

    #[test]
    fn expansion_preserves_pk_skeleton() {
        let eng = Engine::new();
        let core = eng.kres_closed(3);
        let expanded = expand_core(&core, 3, true);
        for (word, _) in expanded.terms() {
            let skeleton = word.strip_s().expect("expansion never deletes pk letters");
            assert!(
                !core.coeff_of(&skeleton).is_zero(),
                "{word} has no source in the core"
            );
            assert!(word.b_degree() >= skeleton.b_degree());
        }
    }

    #[test]
    fn ktilde_matches_reference_through_order_two() {
        let eng = Engine::new();
        assert_eq!(
            expand_named(&eng, SeriesId::Ktilde, 2),
            bpoly(
                2,
                &[
                    ("k", 0, 1, 1),
                    ("sBk", 0, -1, 1),
                    ("kBs", 0, -1, 1),
                    ("kBsBs", 0, 1, 1),
                    ("sBkBs", 0, 1, 1),
                    ("sBsBk", 0, 1, 1),
                    ("kBkBk", 2, -1, 1),
                ]
            )
        );
    }

    #[test]
    fn pres_matches_reference_through_order_two() {
        let eng = Engine::new();
        assert_eq!(
            expand_named(&eng, SeriesId::PtildeRes, 2),
            bpoly(
                2,
                &[
                    ("p", 0, 1, 1),
                    ("sBp", 0, -1, 1),
                    ("pBs", 0, -1, 1),
                    ("pBsBs", 0, 1, 1),
                    ("sBpBs", 0, 1, 1),
                    ("sBsBp", 0, 1, 1),
                    ("pBpBp", 2, -1, 1),
                ]
            )
        );
    }

    #[test]
    fn projector_at_order_zero() {
        let eng = Engine::new();
        assert_eq!(
            expand_named(&eng, SeriesId::P, 0),
            bpoly(0, &[("p", 0, 1, 2), ("k", 0, -1, 2)])
        );
    }

    #[test]
    fn direct_routes_agree_to_order_five() {
        let eng = Engine::new();
        // exercised inside expand_named for both series
        expand_named(&eng, SeriesId::Ktilde, 5);
        expand_named(&eng, SeriesId::PtildeRes, 5);
    }

    #[test]
    fn replace_p_by_k_examples() {
        let single = bpoly(1, &[("pBp", 0, 1, 1)]);
        assert_eq!(replace_p_by_k(&single), bpoly(1, &[("kBk", 0, 1, 1)]));

        let colliding = bpoly(2, &[("pBkBp", 2, 1, 2), ("kBkBk", 2, -1, 2)]);
        assert!(replace_p_by_k(&colliding).is_zero());
    }

    #[test]
    fn word_parse_round_trip() {
        for s in ["p", "s", "sBkBs", "kBsBsBk"] {
            assert_eq!(bw(s).to_string(), s);
        }
        assert!("pbk".parse::<BWord>().is_err());
        assert!("".parse::<BWord>().is_err());
    }
}
