//! The coefficient ring ℚ[π²] and the combinatorial coefficients of the
//! expansion machinery.
//!
//! Every prefactor produced by the calculus is a polynomial in π² with
//! rational coefficients: the (±iπ)^{2β} factors of the series are real,
//! equal to (−π²)^β, so odd powers of π never occur. [`Coefficient`]
//! stores such a polynomial as a sparse map from the (even) π-exponent to
//! an exact rational. Inserting an odd exponent is a hard internal error.
//!
//! The closed-form coefficient families live here as well:
//! - [`c_n`]: Taylor coefficients of √(1+x),
//! - [`e_n`]: Taylor coefficients of (1+x)^{−1/2},
//! - [`f_lr`] / [`f_lr_sum`]: the resummation coefficients in closed and
//!   summation form,
//! - [`gamma_ratio_half`] / [`c_r_rho`]: Γ-ratios at half-integers and the
//!   graded coefficients c(r, ρ) = π^{2r} Γ(r−ρ+½)/(Γ(−ρ+½) r!).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rational = BigRational;

/// Shorthand for building an exact rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Double factorial n!! with the empty-product conventions
/// (−1)!! = 0!! = 1. Panics for n < −1.
pub fn double_factorial(n: i64) -> BigInt {
    assert!(n >= -1, "double_factorial: argument {n} < -1");
    let mut acc = BigInt::one();
    let mut m = n;
    while m > 1 {
        acc *= m;
        m -= 2;
    }
    acc
}

/// n! as a big integer. Panics for n < 0.
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial: argument {n} < 0");
    (1..=n).map(BigInt::from).product()
}

/// Binomial coefficient C(n, k) with the convention C(n, k) = 0 for
/// k < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Taylor coefficient of √(1+x): c_n = (−1)^{n+1} (2n−3)!!/(n! 2^n),
/// n ≥ 1. The (−1)!! = 1 convention makes c_1 = 1/2.
pub fn c_n(n: u32) -> Rational {
    assert!(n >= 1, "c_n: index {n} < 1");
    let n = i64::from(n);
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let numer = double_factorial(2 * n - 3) * sign;
    let denom = factorial(n) * BigInt::from(2).pow(n as u32);
    Rational::new(numer, denom)
}

/// Taylor coefficient of (1+x)^{−1/2}: e_n = (−1)^n (2n−1)!!/(2^n n!),
/// with e_0 = 1.
pub fn e_n(n: u32) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let n = i64::from(n);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let numer = double_factorial(2 * n - 1) * sign;
    let denom = BigInt::from(2).pow(n as u32) * factorial(n);
    Rational::new(numer, denom)
}

/// Resummation coefficient in closed form:
/// f_{l,r} = (−1)^l/l! · (2r+1)!!/(2^r (2l+1) (r−l)!), 0 ≤ l ≤ r.
pub fn f_lr(l: u32, r: u32) -> Rational {
    assert!(l <= r, "f_lr: l = {l} exceeds r = {r}");
    let (l, r) = (i64::from(l), i64::from(r));
    let sign = if l % 2 == 0 { 1 } else { -1 };
    let numer = double_factorial(2 * r + 1) * sign;
    let denom = factorial(l) * BigInt::from(2).pow(r as u32) * (2 * l + 1) * factorial(r - l);
    Rational::new(numer, denom)
}

/// The same coefficient as [`f_lr`], but in summation form:
/// f_{l,r} = Σ_{n=l}^r e_n C(n, l) (−1)^{n−l}. The two forms must agree
/// exactly; the verifier asserts this.
pub fn f_lr_sum(l: u32, r: u32) -> Rational {
    assert!(l <= r, "f_lr_sum: l = {l} exceeds r = {r}");
    let mut acc = Rational::zero();
    for n in l..=r {
        let sign = if (n - l).is_multiple_of(2) { 1 } else { -1 };
        let term = e_n(n) * Rational::from(binomial(i64::from(n), i64::from(l)) * sign);
        acc += term;
    }
    acc
}

/// Exact value of Γ(r−ρ+½)/(Γ(−ρ+½) r!), evaluated purely by the
/// half-integer recurrence Γ(x+1) = x Γ(x): the Γ-ratio is the ascending
/// product Π_{j=0}^{r−1} (−ρ+½+j). The √π factors cancel.
pub fn gamma_ratio_half(r: u32, rho: u32) -> Rational {
    assert!(rho <= r, "gamma_ratio_half: rho = {rho} exceeds r = {r}");
    let mut acc = Rational::one();
    for j in 0..i64::from(r) {
        acc *= Rational::new(BigInt::from(2 * (j - i64::from(rho)) + 1), BigInt::from(2));
    }
    acc / Rational::from(factorial(i64::from(r)))
}

/// The graded coefficient c(r, ρ) = π^{2r} Γ(r−ρ+½)/(Γ(−ρ+½) r!).
pub fn c_r_rho(r: u32, rho: u32) -> Coefficient {
    Coefficient::term(2 * r, gamma_ratio_half(r, rho))
}

/// An element of ℚ[π²]: a finite map from the π-exponent (even, ≥ 0) to a
/// nonzero exact rational. The empty map is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Coefficient {
    terms: BTreeMap<u32, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Coefficient::from_rational(Rational::one())
    }

    /// A π-free coefficient.
    pub fn from_rational(value: Rational) -> Self {
        Coefficient::term(0, value)
    }

    /// The single term value·π^{pi_exp}. Odd exponents cannot occur in
    /// this calculus and are rejected as an internal error.
    pub fn term(pi_exp: u32, value: Rational) -> Self {
        let mut c = Coefficient::zero();
        c.insert(pi_exp, value);
        c
    }

    /// (−π²)^beta, the real value of (±iπ)^{2β}.
    pub fn neg_pi_sq_pow(beta: u32) -> Self {
        let sign = if beta.is_multiple_of(2) { 1 } else { -1 };
        Coefficient::term(2 * beta, rat(sign, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rational part at a given π-exponent (zero if absent).
    pub fn get(&self, pi_exp: u32) -> Rational {
        self.terms
            .get(&pi_exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(&e, q)| (e, q))
    }

    fn insert(&mut self, pi_exp: u32, value: Rational) {
        assert!(
            pi_exp.is_multiple_of(2),
            "internal error: odd pi exponent {pi_exp} produced"
        );
        if value.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(pi_exp) {
            Entry::Vacant(slot) => {
                slot.insert(value);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += value;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (e, q) in other.iter() {
            out.insert(e, q.clone());
        }
        out
    }

    pub fn neg(&self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(&e, q)| (e, -q.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Coefficient) -> Coefficient {
        self.add(&other.neg())
    }

    /// Product by convolution over π-exponents: exponents add.
    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (ea, qa) in self.iter() {
            for (eb, qb) in other.iter() {
                out.insert(ea + eb, qa * qb);
            }
        }
        out
    }

    pub fn scale(&self, value: &Rational) -> Coefficient {
        if value.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self.terms.iter().map(|(&e, q)| (e, q * value)).collect(),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, q) in self.iter() {
            if !first {
                write!(f, " {} ", if q.is_negative() { "-" } else { "+" })?;
            } else if q.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let mag = q.abs();
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "pi^{e}")?;
            } else {
                write!(f, "{mag} pi^{e}")?;
            }
        }
        Ok(())
    }
}
