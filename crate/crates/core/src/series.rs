//! Builders for every named series of the calculus, as pk-polynomial
//! cores to a requested truncation order.
//!
//! Two wrapper conventions coexist. Series defined inside the normalized
//! (b̌-wrapped) calculus — p̃, k̃, Y, p̃Y, t̃, P — have "natural" cores in
//! which wrapped operators multiply by plain polynomial multiplication.
//! Series stated over the plain wrappers b^<, b^> — p̃^res, k̃^res, the
//! direct form of k̃ — have "plain" cores; multiplying two plain-wrapped
//! operators inserts the junction factor b^>b^< = p + π²pbpbp between the
//! cores (see [`op_mul`]). A natural core C converts to the plain
//! convention as N·C·N with the normalizer N = (p + π²pbpbp)^{−1/2};
//! every cross-series comparison and every expansion happens in the plain
//! convention.
//!
//! [`Engine`] carries the coefficient providers. The default engine uses
//! the exact coefficients; [`Mutation`] deliberately flips one sign, which
//! the verifier uses to demonstrate that the identity suite is sensitive
//! to each individual coefficient family.

use crate::coeff::{self, rat, Coefficient, Rational};
use crate::pk::{apply_power_series, PkLetter, PkPoly, PkWord};
use itertools::Itertools;
use std::fmt;
use std::str::FromStr;

/// Catalog of the named series.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum SeriesId {
    A,
    X,
    UAux,
    Ktilde,
    Ptilde,
    PtildeY,
    Y,
    Ttilde,
    P,
    KtildeResFlow,
    KtildeResClosed,
    PtildeRes,
    Phe,
}

impl SeriesId {
    pub const ALL: [SeriesId; 13] = [
        SeriesId::A,
        SeriesId::X,
        SeriesId::UAux,
        SeriesId::Ktilde,
        SeriesId::Ptilde,
        SeriesId::PtildeY,
        SeriesId::Y,
        SeriesId::Ttilde,
        SeriesId::P,
        SeriesId::KtildeResFlow,
        SeriesId::KtildeResClosed,
        SeriesId::PtildeRes,
        SeriesId::Phe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesId::A => "A",
            SeriesId::X => "X",
            SeriesId::UAux => "UAux",
            SeriesId::Ktilde => "Ktilde",
            SeriesId::Ptilde => "Ptilde",
            SeriesId::PtildeY => "PtildeY",
            SeriesId::Y => "Y",
            SeriesId::Ttilde => "Ttilde",
            SeriesId::P => "P",
            SeriesId::KtildeResFlow => "KtildeResFlow",
            SeriesId::KtildeResClosed => "KtildeResClosed",
            SeriesId::PtildeRes => "PtildeRes",
            SeriesId::Phe => "Phe",
        }
    }

    /// True for the series that live inside the normalized calculus with
    /// no wrapper of their own (A, X, U, Y); they are expanded bare.
    pub fn is_inner(self) -> bool {
        matches!(
            self,
            SeriesId::A | SeriesId::X | SeriesId::UAux | SeriesId::Y
        )
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown series id {0:?}")]
pub struct UnknownSeries(pub String);

impl FromStr for SeriesId {
    type Err = UnknownSeries;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        SeriesId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().to_ascii_lowercase() == lower)
            .ok_or_else(|| UnknownSeries(s.to_string()))
    }
}

/// A subset Q of {1, …, 2r+1} selecting the positions that carry the
/// letter p in a G(r, ρ) word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsetQ {
    members: Vec<u32>,
}

impl SubsetQ {
    pub fn new(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        SubsetQ { members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SubsetError {
    #[error("subset member {member} outside 1..={max}")]
    OutOfRange { member: u32, max: u32 },
    #[error("subset has {got} members, expected {expected}")]
    WrongCardinality { got: usize, expected: usize },
}

/// σ(r, ρ, Q) = 1 + Σ_{x ∈ {1,…,2r+1}∖Q} x. Only its parity matters.
pub fn sigma(r: u32, rho: u32, q: &SubsetQ) -> Result<u64, SubsetError> {
    let max = 2 * r + 1;
    if let Some(&member) = q.members().iter().find(|&&m| m < 1 || m > max) {
        return Err(SubsetError::OutOfRange { member, max });
    }
    if q.len() != 2 * rho as usize {
        return Err(SubsetError::WrongCardinality {
            got: q.len(),
            expected: 2 * rho as usize,
        });
    }
    let total: u64 = (1..=u64::from(max)).sum();
    let in_q: u64 = q.members().iter().map(|&m| u64::from(m)).sum();
    Ok(1 + total - in_q)
}

/// A deliberate single-sign corruption of one coefficient family, used to
/// demonstrate the sensitivity of the verification suite.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutation {
    None,
    /// Flip the sign of the square-root coefficient c_1.
    FlipC1,
    /// Flip the sign of the inverse-square-root coefficient e_1.
    FlipE1,
    /// Flip the sign of the resummation coefficient f_{1,1}.
    FlipF11,
    /// Flip the sign of the graded coefficient c(1, 1).
    FlipC11,
    /// Invert the parity of every σ(r, ρ, Q) sign.
    FlipSigmaParity,
}

impl Mutation {
    pub const FLIPS: [Mutation; 5] = [
        Mutation::FlipC1,
        Mutation::FlipE1,
        Mutation::FlipF11,
        Mutation::FlipC11,
        Mutation::FlipSigmaParity,
    ];
}

/// Series construction engine: the coefficient providers plus every
/// builder. All builders are pure; an engine is cheap to copy.
#[derive(Clone, Copy, Debug)]
pub struct Engine {
    mutation: Mutation,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

/// The junction polynomial p + π²pbpbp: the value of b^>b^< that appears
/// between the cores whenever two plain-wrapped operators are multiplied.
pub fn junction(order: u32) -> PkPoly {
    let mut j = PkPoly::identity(order);
    j.insert("pbpbp".parse().unwrap(), Coefficient::term(2, rat(1, 1)));
    j
}

/// Operator product of two plain-wrapped series given by their cores:
/// (b^< a b^>)(b^< b b^>) = b^< a (p + π²pbpbp) b b^>.
pub fn op_mul(a: &PkPoly, b: &PkPoly) -> PkPoly {
    let order = a.truncation_order().min(b.truncation_order());
    a.mul(&junction(order)).mul(b)
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            mutation: Mutation::None,
        }
    }

    pub fn with_mutation(mutation: Mutation) -> Self {
        Engine { mutation }
    }

    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    // ---- coefficient providers (mutation-aware) ----

    pub fn c_n(&self, n: u32) -> Rational {
        let v = coeff::c_n(n);
        if n == 1 && self.mutation == Mutation::FlipC1 {
            -v
        } else {
            v
        }
    }

    pub fn e_n(&self, n: u32) -> Rational {
        let v = coeff::e_n(n);
        if n == 1 && self.mutation == Mutation::FlipE1 {
            -v
        } else {
            v
        }
    }

    pub fn f_lr(&self, l: u32, r: u32) -> Rational {
        let v = coeff::f_lr(l, r);
        if (l, r) == (1, 1) && self.mutation == Mutation::FlipF11 {
            -v
        } else {
            v
        }
    }

    pub fn c_r_rho(&self, r: u32, rho: u32) -> Coefficient {
        let v = coeff::c_r_rho(r, rho);
        if (r, rho) == (1, 1) && self.mutation == Mutation::FlipC11 {
            v.neg()
        } else {
            v
        }
    }

    /// The sign (−1)^σ, with the parity globally inverted under the
    /// σ-parity mutation.
    pub fn sigma_sign(&self, sigma: u64) -> i64 {
        let mut sign = if sigma.is_multiple_of(2) { 1 } else { -1 };
        if self.mutation == Mutation::FlipSigmaParity {
            sign = -sign;
        }
        sign
    }

    /// The sign a normalized word carries in the residual series:
    /// (−1)^{1 + Σ of the (1-based) positions holding a letter k}. This
    /// coincides with (−1)^{σ(r,ρ,Q)} for the word built from Q.
    pub fn word_sign(&self, word: &PkWord) -> i64 {
        let sum: u64 = word
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == PkLetter::K)
            .map(|(i, _)| i as u64 + 1)
            .sum();
        self.sigma_sign(1 + sum)
    }

    // ---- ingredient series (no wrapper of their own) ----

    /// π²pbpbp as a polynomial.
    fn pi2_pbpbp(order: u32) -> PkPoly {
        PkPoly::from_term(
            "pbpbp".parse().unwrap(),
            Coefficient::term(2, rat(1, 1)),
            order,
        )
    }

    /// A = (p + π²pbpbp)^{1/2} − p = Σ_{n≥1} c_n (π²pbpbp)^n.
    pub fn a(&self, order: u32) -> PkPoly {
        apply_power_series(|n| self.c_n(n), rat(0, 1), &Self::pi2_pbpbp(order), order)
            .expect("pbpbp has b-degree 2")
    }

    /// p + A.
    pub fn p_plus_a(&self, order: u32) -> PkPoly {
        PkPoly::identity(order).add(&self.a(order))
    }

    /// The normalizer N = (p + π²pbpbp)^{−1/2} = Σ_n e_n (π²pbpbp)^n.
    pub fn normalizer(&self, order: u32) -> PkPoly {
        apply_power_series(|n| self.e_n(n), rat(1, 1), &Self::pi2_pbpbp(order), order)
            .expect("pbpbp has b-degree 2")
    }

    /// Converts a natural (normalized-calculus) core to the plain-wrapper
    /// convention: N·core·N.
    pub fn to_plain(&self, core: &PkPoly) -> PkPoly {
        let n = self.normalizer(core.truncation_order());
        n.mul(core).mul(&n)
    }

    /// Σ_β (−π²)^β k(bk)^{2β}, the k-run block shared by several series;
    /// also the plain core of k̃ in its direct form.
    pub fn k_block(order: u32) -> PkPoly {
        let mut out = PkPoly::zero(order);
        let mut beta = 0;
        while 2 * beta <= order {
            out.insert(PkWord::k_run(beta), Coefficient::neg_pi_sq_pow(beta));
            beta += 1;
        }
        out
    }

    /// The sandwiched core of k̃: Σ_β (−π²)^β (p+A) k(bk)^{2β} (p+A).
    pub fn ktilde_core(&self, order: u32) -> PkPoly {
        let pa = self.p_plus_a(order);
        pa.mul(&Self::k_block(order)).mul(&pa)
    }

    /// The plain core of k̃ in its direct form, Σ_β (−π²)^β k(bk)^{2β}.
    pub fn ktilde_plain_direct(&self, order: u32) -> PkPoly {
        Self::k_block(order)
    }

    /// X = −p + Σ_{β₁β₂} (−π²)^{β₁+β₂} (p+A) k(bk)^{2β₁} (p+A)² k(bk)^{2β₂} (p+A).
    /// Has minimum b-degree 2; any surviving term of lower degree is a
    /// hard internal error.
    pub fn x(&self, order: u32) -> PkPoly {
        let pa = self.p_plus_a(order);
        let pa_sq = pa.mul(&pa);
        let kb = Self::k_block(order);
        let x = pa
            .mul(&kb)
            .mul(&pa_sq)
            .mul(&kb)
            .mul(&pa)
            .sub(&PkPoly::identity(order));
        if let Some(min) = x.min_b_degree() {
            assert!(
                min >= 2,
                "internal error: X contains a term of b-degree {min}"
            );
        }
        x
    }

    /// U = p + X.
    pub fn u_aux(&self, order: u32) -> PkPoly {
        PkPoly::identity(order).add(&self.x(order))
    }

    /// Natural core of p̃ = √(p + X) = p + Σ c_n Xⁿ.
    pub fn ptilde_core(&self, order: u32) -> PkPoly {
        apply_power_series(|n| self.c_n(n), rat(1, 1), &self.x(order), order)
            .expect("X has minimum b-degree 2")
    }

    /// The rescaling operator Y = p + Σ_{l≥1} (−X)^l (Neumann series for
    /// the inverse of p + X).
    pub fn y(&self, order: u32) -> PkPoly {
        apply_power_series(
            |n| if n % 2 == 0 { rat(1, 1) } else { rat(-1, 1) },
            rat(1, 1),
            &self.x(order),
            order,
        )
        .expect("X has minimum b-degree 2")
    }

    /// p̃Y = (p + X)^{−1/2} = Σ_n e_n Xⁿ.
    pub fn ptilde_y(&self, order: u32) -> PkPoly {
        apply_power_series(|n| self.e_n(n), rat(1, 1), &self.x(order), order)
            .expect("X has minimum b-degree 2")
    }

    /// Natural core of t̃ = ½(p̃ − k̃).
    pub fn t_core(&self, order: u32) -> PkPoly {
        self.ptilde_core(order)
            .sub(&self.ktilde_core(order))
            .scale_rational(&rat(1, 2))
    }

    /// Natural core of the fermionic projector, P = ½(p − p̃Y k̃).
    pub fn p_core(&self, order: u32) -> PkPoly {
        PkPoly::identity(order)
            .sub(&self.ptilde_y(order).mul(&self.ktilde_core(order)))
            .scale_rational(&rat(1, 2))
    }

    /// Natural core of P by the defining route t̃ Y t̃.
    pub fn p_core_tyt(&self, order: u32) -> PkPoly {
        let t = self.t_core(order);
        t.mul(&self.y(order)).mul(&t)
    }

    /// Plain core of p̃^res: the Neumann series (p + π²pbpbp)^{−1}
    /// = Σ_β (−π²)^β p(bp)^{2β}.
    pub fn pres_core(&self, order: u32) -> PkPoly {
        apply_power_series(
            |n| if n % 2 == 0 { rat(1, 1) } else { rat(-1, 1) },
            rat(1, 1),
            &Self::pi2_pbpbp(order),
            order,
        )
        .expect("pbpbp has b-degree 2")
    }

    /// Plain core of p̃^res built directly term by term,
    /// Σ_β (−π²)^β p(bp)^{2β}.
    pub fn pres_core_direct(&self, order: u32) -> PkPoly {
        let mut out = PkPoly::zero(order);
        let mut beta = 0;
        while 2 * beta <= order {
            out.insert(
                PkWord::new(vec![PkLetter::P; 2 * beta as usize + 1]),
                Coefficient::neg_pi_sq_pow(beta),
            );
            beta += 1;
        }
        out
    }

    /// G(r, ρ) = Σ_{Q ⊆ {1..2r+1}, #Q = 2ρ} (−1)^{σ(r,ρ,Q)} · word(Q),
    /// where position n carries p if n ∈ Q and k otherwise. Subsets are
    /// enumerated in lexicographic order; each word enters with a unit
    /// rational coefficient (the π^{2r} grading lives in c(r, ρ)).
    pub fn g_poly(&self, r: u32, rho: u32) -> PkPoly {
        assert!(rho <= r, "g_poly: rho = {rho} exceeds r = {r}");
        let order = 2 * r;
        let mut out = PkPoly::zero(order);
        for combo in (1..=2 * r + 1).combinations(2 * rho as usize) {
            let q = SubsetQ::new(combo);
            let sig = sigma(r, rho, &q).expect("subset constructed in range");
            let letters = (1..=2 * r + 1)
                .map(|n| {
                    if q.contains(n) {
                        PkLetter::P
                    } else {
                        PkLetter::K
                    }
                })
                .collect();
            out.insert(
                PkWord::new(letters),
                Coefficient::from_rational(rat(self.sigma_sign(sig), 1)),
            );
        }
        out
    }

    /// Plain core of k̃^res in closed form:
    /// Σ_{2r ≤ order} Σ_{ρ=0}^r c(r, ρ) G(r, ρ).
    pub fn kres_closed(&self, order: u32) -> PkPoly {
        let mut out = PkPoly::zero(order);
        let mut r = 0;
        while 2 * r <= order {
            for rho in 0..=r {
                out = out.add(
                    &self
                        .g_poly(r, rho)
                        .truncate(order)
                        .scale(&self.c_r_rho(r, rho)),
                );
            }
            r += 1;
        }
        out
    }

    /// 𝒮(l) = [Σ_β (−π²)^β k(bk)^{2β} (p + π²pbpbp)]^{2l} Σ_α (−π²)^α k(bk)^{2α}.
    pub fn s_l(&self, l: u32, order: u32) -> PkPoly {
        let kb = Self::k_block(order);
        let block = kb.mul(&junction(order));
        block.pow(2 * l).mul(&kb)
    }

    /// Plain core of k̃^res by the rescaling-flow route:
    /// Σ_n e_n Σ_{l=0}^n C(n, l) (−1)^{n−l} 𝒮(l). The n-sum stops at
    /// order/2 because the inner l-sum equals k̃Xⁿ, of order b^{2n}.
    pub fn kres_flow(&self, order: u32) -> PkPoly {
        let s_cache: Vec<PkPoly> = (0..=order / 2).map(|l| self.s_l(l, order)).collect();
        let mut out = PkPoly::zero(order);
        for n in 0..=order / 2 {
            let en = self.e_n(n);
            for l in 0..=n {
                let pick = coeff::binomial(i64::from(n), i64::from(l));
                let sign = if (n - l) % 2 == 0 { 1 } else { -1 };
                let weight = &en * Rational::from(pick * sign);
                out = out.add(&s_cache[l as usize].scale_rational(&weight));
            }
        }
        out
    }

    /// Both routes to the plain core of the high-energy contribution:
    /// ½(k̃ − k̃^res) directly, and P − P^res with P built through the
    /// rescaling route. The verifier asserts they agree exactly.
    pub fn phe_routes(&self, order: u32) -> (PkPoly, PkPoly) {
        let direct = self
            .ktilde_plain_direct(order)
            .sub(&self.kres_closed(order))
            .scale_rational(&rat(1, 2));

        let p_plain = self.to_plain(&self.p_core(order));
        let pres_minus_ktilde = self
            .pres_core(order)
            .sub(&self.to_plain(&self.ktilde_core(order)))
            .scale_rational(&rat(1, 2));
        let via_projectors = p_plain.sub(&pres_minus_ktilde);

        (direct, via_projectors)
    }

    /// Plain core of the high-energy contribution P^he = ½(k̃ − k̃^res).
    pub fn phe(&self, order: u32) -> PkPoly {
        self.phe_routes(order).0
    }

    /// The pk-layer core of a named series in the comparison convention:
    /// plain-wrapper cores for the wrapped operators, natural cores for
    /// the inner series (A, X, U, Y).
    pub fn pk_core(&self, id: SeriesId, order: u32) -> PkPoly {
        match id {
            SeriesId::A => self.a(order),
            SeriesId::X => self.x(order),
            SeriesId::UAux => self.u_aux(order),
            SeriesId::Y => self.y(order),
            SeriesId::Ktilde => self.to_plain(&self.ktilde_core(order)),
            SeriesId::Ptilde => self.to_plain(&self.ptilde_core(order)),
            SeriesId::PtildeY => self.to_plain(&self.ptilde_y(order)),
            SeriesId::Ttilde => self.to_plain(&self.t_core(order)),
            SeriesId::P => self
                .pres_core(order)
                .sub(&self.kres_closed(order))
                .scale_rational(&rat(1, 2)),
            SeriesId::KtildeResFlow => self.kres_flow(order),
            SeriesId::KtildeResClosed => self.kres_closed(order),
            SeriesId::PtildeRes => self.pres_core(order),
            SeriesId::Phe => self.phe(order),
        }
    }
}
