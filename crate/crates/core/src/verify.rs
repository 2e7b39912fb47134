//! The identity suite: every order-by-order claim of the calculus run as
//! an explicit check with structured pass/fail evidence.
//!
//! A check computes one or more residual polynomials and passes iff every
//! residual vanishes. Failing residuals are recorded as witnesses; checks
//! of a negative claim (t̃² ≠ t̃) invert the polarity and store the
//! demonstrating residual as context instead. Reports are deterministic
//! up to the recorded runtime.

use crate::coeff::{self, rat, Rational};
use crate::expand::{expand_core, replace_p_by_k, BPoly};
use crate::golden::GoldenTable;
use crate::pk::{PkLetter, PkPoly, PkWord};
use crate::series::{op_mul, Engine, SeriesId};
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self == Status::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// A residual demonstrating a failed (or, for context entries, an
/// expected) deviation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Residual {
    Pk(PkPoly),
    B(BPoly),
    Value(String),
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Pk(p) => write!(f, "{p}"),
            Residual::B(p) => write!(f, "{p}"),
            Residual::Value(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub label: String,
    pub residual: Residual,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub order: u32,
    pub status: Status,
    /// Failing residuals; empty iff the check passed.
    pub witnesses: Vec<Witness>,
    /// Informational entries (e.g. the nonzero residual demonstrating a
    /// negative claim); never affect the status.
    pub context: Vec<Witness>,
    pub runtime_ms: u64,
}

struct ReportBuilder {
    suite: String,
    order: u32,
    witnesses: Vec<Witness>,
    context: Vec<Witness>,
    started: Instant,
    inverted: bool,
    inverted_pass: bool,
}

impl ReportBuilder {
    fn new(suite: &str, order: u32) -> Self {
        ReportBuilder {
            suite: suite.to_string(),
            order,
            witnesses: Vec::new(),
            context: Vec::new(),
            started: Instant::now(),
            inverted: false,
            inverted_pass: true,
        }
    }

    fn require_zero_pk(&mut self, label: &str, residual: PkPoly) {
        if !residual.is_zero() {
            self.witnesses.push(Witness {
                label: label.to_string(),
                residual: Residual::Pk(residual),
            });
        }
    }

    fn require_zero_b(&mut self, label: &str, residual: BPoly) {
        if !residual.is_zero() {
            self.witnesses.push(Witness {
                label: label.to_string(),
                residual: Residual::B(residual),
            });
        }
    }

    fn require_equal_rational(&mut self, label: &str, got: &Rational, expected: &Rational) {
        if got != expected {
            self.witnesses.push(Witness {
                label: format!("{label}: expected {expected}, got {got}"),
                residual: Residual::Value((got - expected).to_string()),
            });
        }
    }

    fn require(&mut self, label: &str, ok: bool, detail: String) {
        if !ok {
            self.witnesses.push(Witness {
                label: label.to_string(),
                residual: Residual::Value(detail),
            });
        }
    }

    fn note(&mut self, label: &str, residual: Residual) {
        self.context.push(Witness {
            label: label.to_string(),
            residual,
        });
    }

    /// Marks the report as a negative claim: it passes iff `nonzero`.
    fn require_nonzero(&mut self, label: &str, residual: Residual, nonzero: bool) {
        self.inverted = true;
        if !nonzero {
            self.inverted_pass = false;
            self.witnesses.push(Witness {
                label: format!("{label}: residual vanished but must not"),
                residual,
            });
        } else {
            self.note(&format!("{label} (expected nonzero)"), residual);
        }
    }

    fn finish(self) -> VerifyReport {
        let status = if self.witnesses.is_empty() && (!self.inverted || self.inverted_pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        VerifyReport {
            suite: self.suite,
            order: self.order,
            status,
            witnesses: self.witnesses,
            context: self.context,
            runtime_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// P² − P = 0 in the pk layer at every order up to `max_order`.
pub fn check_idempotence(eng: &Engine, max_order: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("idempotence", max_order);
    for order in 0..=max_order {
        let p = eng.pk_core(SeriesId::P, order);
        rb.require_zero_pk(&format!("P*P - P at order {order}"), op_mul(&p, &p).sub(&p));
    }
    rb.finish()
}

/// The unrescaled operator is not idempotent: t̃² − t̃ ≠ 0 at order 2
/// (inverted polarity; the nonzero residual is the evidence).
pub fn check_t_not_idempotent(eng: &Engine) -> VerifyReport {
    let mut rb = ReportBuilder::new("t-nonidempotence", 2);
    let t0 = eng.pk_core(SeriesId::Ttilde, 0);
    rb.note(
        "t*t - t at order 0 (vacuum, vanishes)",
        Residual::Pk(op_mul(&t0, &t0).sub(&t0)),
    );
    let t2 = eng.pk_core(SeriesId::Ttilde, 2);
    let residual = op_mul(&t2, &t2).sub(&t2);
    let nonzero = !residual.is_zero();
    rb.require_nonzero("t*t - t at order 2", Residual::Pk(residual), nonzero);
    // the rescaled product differs from the bare square
    let t_nat = eng.t_core(2);
    let tyt = eng.p_core_tyt(2);
    rb.note(
        "tYt - t*t at order 2 (expected nonzero)",
        Residual::Pk(tyt.sub(&t_nat.mul(&t_nat))),
    );
    rb.finish()
}

/// Every derivation route yields the same series: the closed and flow
/// forms of the residual operator (pk layer), the three constructions of
/// the projector (pk layer), and the direct versus normalized-core
/// expansions of k̃ and p̃^res (𝓑 layer).
pub fn check_route_equivalence(eng: &Engine, order_pk: u32, order_b: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("routes", order_pk);

    rb.require_zero_pk(
        &format!("kres flow vs closed at order {order_pk}"),
        eng.kres_flow(order_pk).sub(&eng.kres_closed(order_pk)),
    );

    let p_rescaled = eng.to_plain(&eng.p_core(order_pk));
    let p_tyt = eng.to_plain(&eng.p_core_tyt(order_pk));
    let p_residual = eng
        .pres_core(order_pk)
        .sub(&eng.kres_closed(order_pk))
        .scale_rational(&rat(1, 2));
    rb.require_zero_pk(
        &format!("P rescaled-product vs tYt at order {order_pk}"),
        p_rescaled.sub(&p_tyt),
    );
    rb.require_zero_pk(
        &format!("P rescaled-product vs residual-pair at order {order_pk}"),
        p_rescaled.sub(&p_residual),
    );

    let kt_direct = expand_core(&eng.ktilde_plain_direct(order_b), order_b, true);
    let kt_core = expand_core(&eng.to_plain(&eng.ktilde_core(order_b)), order_b, true);
    rb.require_zero_b(
        &format!("ktilde direct vs normalized core at B-order {order_b}"),
        kt_direct.sub(&kt_core),
    );

    let pres_direct = expand_core(&eng.pres_core_direct(order_b), order_b, true);
    let n = eng.normalizer(order_b);
    let pres_core = expand_core(&n.mul(&PkPoly::identity(order_b)).mul(&n), order_b, true);
    rb.require_zero_b(
        &format!("pres direct vs normalized core at B-order {order_b}"),
        pres_direct.sub(&pres_core),
    );

    rb.finish()
}

/// The residual pair is a projector and its isometry:
/// p̃^res k̃^res = k̃^res = k̃^res p̃^res and p̃^res p̃^res = p̃^res = k̃^res k̃^res.
pub fn check_residual_identities(eng: &Engine, order: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("residual-identities", order);
    let pres = eng.pres_core(order);
    let kres = eng.kres_closed(order);
    rb.require_zero_pk("pres*kres - kres", op_mul(&pres, &kres).sub(&kres));
    rb.require_zero_pk("kres*pres - kres", op_mul(&kres, &pres).sub(&kres));
    rb.require_zero_pk("pres*pres - pres", op_mul(&pres, &pres).sub(&pres));
    rb.require_zero_pk("kres*kres - pres", op_mul(&kres, &kres).sub(&pres));
    rb.finish()
}

/// One occurrence of a word in the block series: the indices chosen for
/// each factor, the resulting normalized word, and the sign carried.
struct Occurrence {
    word: PkWord,
    sign: i64,
}

/// Enumerates, term by term and without any merging, the occurrences of
/// degree exactly 2r in 𝒮(l): every choice of β-index and (p | pbpbp)
/// branch for the 2l leading blocks and of α for the trailing block.
fn census(l: u32, r: u32) -> Vec<Occurrence> {
    let blocks = 2 * l as usize;
    let mut out = Vec::new();
    // distribute the total degree 2r over the 2l + 1 blocks in even parts
    fn rec(
        remaining: u32,
        block: usize,
        blocks: usize,
        word: Option<PkWord>,
        sign: i64,
        out: &mut Vec<Occurrence>,
    ) {
        if block == blocks {
            // trailing block: k(bk)^{2α} with 2α = remaining
            if !remaining.is_multiple_of(2) {
                return;
            }
            let alpha = remaining / 2;
            let tail = PkWord::k_run(alpha);
            let tail_sign = if alpha.is_multiple_of(2) { 1 } else { -1 };
            let word = match word {
                Some(w) => w.mul(&tail),
                None => tail,
            };
            out.push(Occurrence {
                word,
                sign: sign * tail_sign,
            });
            return;
        }
        let mut d = 0;
        while d <= remaining {
            // leading block of degree d: k(bk)^{2β}·p (β = d/2) or, for
            // d ≥ 2, k(bk)^{2β}·pbpbp (β = d/2 − 1); both end in p.
            for branch_pbpbp in [false, true] {
                let (beta, block_word) = if branch_pbpbp {
                    if d < 2 {
                        continue;
                    }
                    let beta = d / 2 - 1;
                    let w = PkWord::k_run(beta).mul(&"pbpbp".parse::<PkWord>().unwrap());
                    (beta, w)
                } else {
                    // k(bk)^{2β}·p leaves the word unchanged
                    (d / 2, PkWord::k_run(d / 2))
                };
                let block_sign = if beta % 2 == 0 { 1 } else { -1 };
                let next = match &word {
                    Some(w) => w.mul(&block_word),
                    None => block_word,
                };
                rec(
                    remaining - d,
                    block + 1,
                    blocks,
                    Some(next),
                    sign * block_sign,
                    out,
                );
            }
            d += 2;
        }
    }
    rec(2 * r, 0, blocks, None, 1, &mut out);
    out
}

/// Brute-force occurrence counting in the block series 𝒮(l): for every
/// word shape of degree 2r with 2ρ letters p, the raw (pre-merge) count
/// equals C(r+l−ρ, l−ρ), every occurrence carries the position-sum sign,
/// and no word with an odd number of p appears. The census is also
/// reconciled against the polynomial form of 𝒮(l).
pub fn check_counting(eng: &Engine, r_max: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("counting", 2 * r_max);
    for r in 0..=r_max {
        for l in 0..=r {
            let occurrences = census(l, r);
            // group raw occurrences by the normalized word
            let mut by_word: std::collections::BTreeMap<PkWord, Vec<i64>> =
                std::collections::BTreeMap::new();
            for occ in &occurrences {
                by_word.entry(occ.word.clone()).or_default().push(occ.sign);
            }

            // parity: no word with an odd number of p may occur
            for word in by_word.keys() {
                rb.require(
                    &format!("even-p parity in S({l}) at degree {}", 2 * r),
                    word.count_p() % 2 == 0,
                    format!("word {word} has {} letters p", word.count_p()),
                );
            }

            // every candidate word of length 2r+1: count and signs
            let len = (2 * r + 1) as usize;
            for bits in 0..(1u32 << len) {
                let letters: Vec<PkLetter> = (0..len)
                    .map(|i| {
                        if bits & (1 << i) != 0 {
                            PkLetter::P
                        } else {
                            PkLetter::K
                        }
                    })
                    .collect();
                let word = PkWord::new(letters);
                let p_count = word.count_p() as u32;
                let signs = by_word.get(&word).cloned().unwrap_or_default();
                let expected: num_bigint::BigInt = if !p_count.is_multiple_of(2) {
                    num_bigint::BigInt::zero()
                } else {
                    let rho = p_count / 2;
                    coeff::binomial(
                        i64::from(r) + i64::from(l) - i64::from(rho),
                        i64::from(l) - i64::from(rho),
                    )
                };
                rb.require(
                    &format!("occurrence count of {word} in S({l})"),
                    num_bigint::BigInt::from(signs.len()) == expected,
                    format!("counted {}, expected {}", signs.len(), expected),
                );
                let expected_sign = eng.word_sign(&word);
                for sign in &signs {
                    rb.require(
                        &format!("occurrence sign of {word} in S({l})"),
                        *sign == expected_sign,
                        format!("occurrence carries {sign}, rule gives {expected_sign}"),
                    );
                }
            }

            // reconcile the census with the polynomial form of S(l): the
            // merged signed count at degree 2r must be its coefficient.
            let s_poly = eng.s_l(l, 2 * r);
            for (word, signs) in &by_word {
                let net: i64 = signs.iter().sum();
                let got = s_poly.coeff_of(word).get(2 * r);
                rb.require_equal_rational(
                    &format!("net coefficient of {word} in S({l})"),
                    &got,
                    &rat(net, 1),
                );
            }
        }
    }
    rb.finish()
}

/// The exact coefficient identities: row sums Σ_l f_{l,r} = 1, agreement
/// of the closed and summation forms of f_{l,r}, and the l-sum collapsing
/// to the Γ-ratio.
pub fn check_coefficient_identities(eng: &Engine, r_max: u32, gamma_r_max: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("coefficients", r_max);
    for r in 0..=r_max {
        let row: Rational = (0..=r).map(|l| eng.f_lr(l, r)).sum();
        rb.require_equal_rational(&format!("row sum of f at r = {r}"), &row, &Rational::one());
        for l in 0..=r {
            let summed: Rational = (l..=r)
                .map(|n| {
                    let sign = if (n - l) % 2 == 0 { 1 } else { -1 };
                    eng.e_n(n) * Rational::from(coeff::binomial(i64::from(n), i64::from(l)) * sign)
                })
                .sum();
            rb.require_equal_rational(
                &format!("closed vs summation form of f at (l, r) = ({l}, {r})"),
                &eng.f_lr(l, r),
                &summed,
            );
        }
    }
    for r in 0..=gamma_r_max {
        for rho in 0..=r {
            let l_sum: Rational = (rho..=r)
                .map(|l| {
                    eng.f_lr(l, r)
                        * Rational::from(coeff::binomial(
                            i64::from(r + l - rho),
                            i64::from(l - rho),
                        ))
                })
                .sum();
            rb.require_equal_rational(
                &format!("l-sum vs gamma ratio at (r, rho) = ({r}, {rho})"),
                &l_sum,
                &coeff::gamma_ratio_half(r, rho),
            );
        }
    }
    rb.finish()
}

/// Replacing every p by k collapses the residual series to k̃: checked on
/// the 𝓑 layer against the full expansions, and on the pk layer as the
/// telescoping of the block series 𝒮(l).
pub fn check_replacement_rule(eng: &Engine, order_b: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("replacement", order_b);
    let mut orders = vec![0, order_b.min(3), order_b];
    orders.dedup();
    for order in orders {
        let kres = expand_core(&eng.pk_core(SeriesId::KtildeResClosed, order), order, true);
        let ktilde = expand_core(&eng.pk_core(SeriesId::Ktilde, order), order, true);
        rb.require_zero_b(
            &format!("p->k of kres vs ktilde at B-order {order}"),
            replace_p_by_k(&kres).sub(&ktilde),
        );
    }
    let order_pk = order_b.max(1);
    for l in 0..=order_pk / 2 {
        let telescoped = eng.s_l(l, order_pk).map_letters(|letter| match letter {
            PkLetter::P => PkLetter::K,
            PkLetter::K => PkLetter::K,
        });
        rb.require_zero_pk(
            &format!("telescoped S({l}) vs ktilde core at order {order_pk}"),
            telescoped.sub(&eng.ktilde_plain_direct(order_pk)),
        );
    }
    rb.finish()
}

/// The high-energy contribution: both routes agree on the 𝓑 layer and the
/// result vanishes below second order while being nonzero at it.
pub fn check_high_energy(eng: &Engine, order_b: u32) -> VerifyReport {
    let mut rb = ReportBuilder::new("high-energy", order_b);
    let (direct, via_projectors) = eng.phe_routes(order_b);
    rb.require_zero_pk(
        &format!("P - Pres vs (ktilde - kres)/2 at order {order_b}"),
        direct.sub(&via_projectors),
    );
    let expanded_direct = expand_core(&direct, order_b, true);
    let expanded_projectors = expand_core(&via_projectors, order_b, true);
    rb.require_zero_b(
        &format!("high-energy routes on the B layer at order {order_b}"),
        expanded_direct.sub(&expanded_projectors),
    );
    let min = expanded_direct.min_b_degree();
    rb.require(
        "high-energy contribution vanishes below second order",
        min.is_none_or(|m| m >= 2),
        format!("minimum B-degree {min:?}"),
    );
    if order_b >= 2 {
        let at_two = expand_core(&eng.phe(2), 2, true);
        rb.require(
            "high-energy contribution is nonzero at second order",
            !at_two.is_zero(),
            "expansion at order 2 is identically zero".to_string(),
        );
    }
    rb.finish()
}

/// Exact equality of the computed expansions against reference tables;
/// every mismatched (word, π-exponent) is reported with both values.
pub fn check_golden(eng: &Engine, tables: &[GoldenTable]) -> VerifyReport {
    let order = tables.iter().map(|t| t.order).max().unwrap_or(0);
    let mut rb = ReportBuilder::new("golden", order);
    for table in tables {
        let computed = expand_core(
            &eng.pk_core(table.series, table.order),
            table.order,
            !table.series.is_inner(),
        );
        let diff = computed.sub(&table.poly);
        if diff.is_zero() {
            continue;
        }
        for (word, coeffs) in diff.terms() {
            for (pi_exp, _) in coeffs.iter() {
                let expected = table.poly.coeff_of(word).get(pi_exp);
                let got = computed.coeff_of(word).get(pi_exp);
                rb.require(
                    &format!(
                        "{}: {word} at pi^{pi_exp}: table has {expected}, engine computed {got}",
                        table.series
                    ),
                    false,
                    (got - expected).to_string(),
                );
            }
        }
    }
    rb.finish()
}

/// The named suites of the verification catalog.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    All,
    Golden,
    Idempotence,
    TNonidempotence,
    Routes,
    ResidualIdentities,
    Counting,
    Coefficients,
    Replacement,
    HighEnergy,
}

impl Suite {
    pub const NAMED: [(Suite, &'static str); 10] = [
        (Suite::All, "all"),
        (Suite::Golden, "golden"),
        (Suite::Idempotence, "idempotence"),
        (Suite::TNonidempotence, "t-nonidempotence"),
        (Suite::Routes, "routes"),
        (Suite::ResidualIdentities, "residual-identities"),
        (Suite::Counting, "counting"),
        (Suite::Coefficients, "coefficients"),
        (Suite::Replacement, "replacement"),
        (Suite::HighEnergy, "high-energy"),
    ];

    pub fn as_str(self) -> &'static str {
        Suite::NAMED
            .iter()
            .find(|(s, _)| *s == self)
            .map(|(_, n)| *n)
            .expect("every suite is named")
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown suite {0:?} (expected one of all, golden, idempotence, t-nonidempotence, routes, residual-identities, counting, coefficients, replacement, high-energy)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::NAMED
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(suite, _)| *suite)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Depths at which the suites run. `order_pk` drives the pk-layer
/// identity checks; `order_b` drives the 𝓑-layer route, replacement and
/// high-energy checks (the golden check always runs at the depth of its
/// tables).
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub order_pk: u32,
    pub order_b: u32,
    pub tables: Vec<GoldenTable>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            order_pk: 6,
            order_b: 5,
            tables: crate::golden::embedded_tables(),
        }
    }
}

/// Runs one suite (or all of them) and returns the reports in catalog
/// order.
pub fn run_suite(eng: &Engine, suite: Suite, opts: &SuiteOptions) -> Vec<VerifyReport> {
    let one = |s: Suite| -> VerifyReport {
        match s {
            Suite::Golden => check_golden(eng, &opts.tables),
            Suite::Idempotence => check_idempotence(eng, opts.order_pk),
            Suite::TNonidempotence => check_t_not_idempotent(eng),
            Suite::Routes => check_route_equivalence(eng, opts.order_pk, opts.order_b),
            Suite::ResidualIdentities => check_residual_identities(eng, opts.order_pk),
            Suite::Counting => check_counting(eng, 3),
            Suite::Coefficients => check_coefficient_identities(eng, 10, 6),
            Suite::Replacement => check_replacement_rule(eng, opts.order_b),
            Suite::HighEnergy => check_high_energy(eng, opts.order_b),
            Suite::All => unreachable!(),
        }
    };
    match suite {
        Suite::All => Suite::NAMED
            .iter()
            .filter(|(s, _)| *s != Suite::All)
            .map(|(s, _)| one(*s))
            .collect(),
        other => vec![one(other)],
    }
}
