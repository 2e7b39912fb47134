//! Canonical rendering of polynomials and reports: plain text, JSON, and
//! LaTeX, plus the JSON parser used for round-trips.
//!
//! Term order is canonical per layer, so equal polynomials render
//! byte-identically: pk-layer terms sort by letter count, then word, then
//! π-exponent; 𝓑-layer terms sort by 𝓑-degree, then π-exponent, then
//! word. Rationals are serialized as separate numerator/denominator
//! fields in decimal text, never as floating point.

use crate::coeff::{Coefficient, Rational};
use crate::expand::{BPoly, BWord};
use crate::pk::{PkPoly, PkWord};
use crate::verify::{Residual, VerifyReport};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Layer {
    Pk,
    B,
}

impl Layer {
    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Pk => "pk",
            Layer::B => "b",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown layer {0:?} (expected pk or b)")]
pub struct UnknownLayer(pub String);

impl FromStr for Layer {
    type Err = UnknownLayer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pk" => Ok(Layer::Pk),
            "b" => Ok(Layer::B),
            other => Err(UnknownLayer(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown output format {0:?} (expected text, json or latex)")]
pub struct UnknownFormat(pub String);

impl FromStr for OutputFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "latex" => Ok(OutputFormat::Latex),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

/// One rendered term: a word, a π-exponent and an exact rational.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub word: String,
    pub pi_exponent: u32,
    pub num: String,
    pub den: String,
}

/// A rendered expansion document (the JSON schema of `expand`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExpandDoc {
    pub series: String,
    pub layer: String,
    pub order: u32,
    pub terms: Vec<TermRecord>,
}

fn record(word: String, pi_exponent: u32, value: &Rational) -> TermRecord {
    TermRecord {
        word,
        pi_exponent,
        num: value.numer().to_string(),
        den: value.denom().to_string(),
    }
}

/// Flattened (word, π-exponent) terms of a pk polynomial in canonical
/// order.
pub fn pk_terms(poly: &PkPoly) -> Vec<TermRecord> {
    let mut out = Vec::new();
    for (word, coeff) in poly.terms() {
        for (pi_exp, value) in coeff.iter() {
            out.push(record(word.to_string(), pi_exp, value));
        }
    }
    out
}

/// Flattened terms of a 𝓑 polynomial in canonical order: degree, then
/// π-exponent, then word.
pub fn b_terms(poly: &BPoly) -> Vec<TermRecord> {
    let mut flat: Vec<(&BWord, u32, &Rational)> = Vec::new();
    for (word, coeff) in poly.terms() {
        for (pi_exp, value) in coeff.iter() {
            flat.push((word, pi_exp, value));
        }
    }
    flat.sort_by(|a, b| {
        a.0.b_degree()
            .cmp(&b.0.b_degree())
            .then(a.1.cmp(&b.1))
            .then(a.0.cmp(b.0))
    });
    flat.into_iter()
        .map(|(w, e, v)| record(w.to_string(), e, v))
        .collect()
}

fn push_text_term(out: &mut String, first: &mut bool, term: &TermRecord) {
    let num: BigInt = term.num.parse().expect("serialized numerator");
    let den: BigInt = term.den.parse().expect("serialized denominator");
    let negative = num.is_negative();
    if *first {
        if negative {
            out.push('-');
        }
        *first = false;
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mag = num.abs();
    if !(mag.is_one() && den.is_one()) {
        if den.is_one() {
            let _ = write!(out, "{mag} ");
        } else {
            let _ = write!(out, "{mag}/{den} ");
        }
    }
    if term.pi_exponent > 0 {
        let _ = write!(out, "pi^{} ", term.pi_exponent);
    }
    out.push_str(&term.word);
}

/// Plain-text rendering of flattened terms, e.g. `k - sBk - kBs`.
pub fn terms_to_text(terms: &[TermRecord]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for term in terms {
        push_text_term(&mut out, &mut first, term);
    }
    out
}

fn latex_word(word: &str, layer: Layer) -> String {
    match layer {
        Layer::Pk => word.replace('b', " b\\, "),
        Layer::B => word.replace('B', " \\mathcal{B} "),
    }
}

/// LaTeX rendering of flattened terms: 𝓑 becomes `\mathcal{B}`, π-powers
/// are written explicitly, rationals as `\frac`.
pub fn terms_to_latex(terms: &[TermRecord], layer: Layer) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, term) in terms.iter().enumerate() {
        let num: BigInt = term.num.parse().expect("serialized numerator");
        let den: BigInt = term.den.parse().expect("serialized denominator");
        let negative = num.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mag = num.abs();
        if !den.is_one() {
            let _ = write!(out, "\\frac{{{mag}}}{{{den}}} ");
        } else if !mag.is_one() {
            let _ = write!(out, "{mag} ");
        }
        if term.pi_exponent > 0 {
            let _ = write!(out, "\\pi^{{{}}} ", term.pi_exponent);
        }
        out.push_str(&latex_word(&term.word, layer));
    }
    out
}

/// Assembles the expansion document for one rendered series.
pub fn expand_doc(series: &str, layer: Layer, order: u32, terms: Vec<TermRecord>) -> ExpandDoc {
    ExpandDoc {
        series: series.to_string(),
        layer: layer.as_str().to_string(),
        order,
        terms,
    }
}

pub fn doc_to_json(doc: &ExpandDoc) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

#[derive(Debug, Error)]
pub enum DocParseError {
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid layer: {0}")]
    Layer(#[from] UnknownLayer),
    #[error("term {index}: bad word {word:?}: {source}")]
    Word {
        index: usize,
        word: String,
        #[source]
        source: crate::pk::WordParseError,
    },
    #[error("term {index}: bad rational {num}/{den}")]
    Rational {
        index: usize,
        num: String,
        den: String,
    },
}

/// A polynomial recovered from a serialized document.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParsedPoly {
    Pk(PkPoly),
    B(BPoly),
}

/// Parses an expansion document back into the polynomial it renders;
/// the round-trip is exact.
pub fn parse_expand_doc(json: &str) -> Result<(ExpandDoc, ParsedPoly), DocParseError> {
    let doc: ExpandDoc = serde_json::from_str(json)?;
    let layer: Layer = doc.layer.parse()?;
    let parse_rational = |index: usize, term: &TermRecord| -> Result<Rational, DocParseError> {
        let num: BigInt = term.num.parse().map_err(|_| DocParseError::Rational {
            index,
            num: term.num.clone(),
            den: term.den.clone(),
        })?;
        let den: BigInt = term.den.parse().map_err(|_| DocParseError::Rational {
            index,
            num: term.num.clone(),
            den: term.den.clone(),
        })?;
        if den <= BigInt::from(0) {
            return Err(DocParseError::Rational {
                index,
                num: term.num.clone(),
                den: term.den.clone(),
            });
        }
        Ok(Rational::new(num, den))
    };
    let poly = match layer {
        Layer::Pk => {
            let mut poly = PkPoly::zero(doc.order);
            for (index, term) in doc.terms.iter().enumerate() {
                let word: PkWord = term.word.parse().map_err(|source| DocParseError::Word {
                    index,
                    word: term.word.clone(),
                    source,
                })?;
                poly.insert(
                    word,
                    Coefficient::term(term.pi_exponent, parse_rational(index, term)?),
                );
            }
            ParsedPoly::Pk(poly)
        }
        Layer::B => {
            let mut poly = BPoly::zero(doc.order);
            for (index, term) in doc.terms.iter().enumerate() {
                let word: BWord = term.word.parse().map_err(|source| DocParseError::Word {
                    index,
                    word: term.word.clone(),
                    source,
                })?;
                poly.insert(
                    word,
                    Coefficient::term(term.pi_exponent, parse_rational(index, term)?),
                );
            }
            ParsedPoly::B(poly)
        }
    };
    Ok((doc, poly))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
struct WitnessDoc {
    label: String,
    layer: &'static str,
    residual: serde_json::Value,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
struct ReportDoc {
    suite: String,
    order: u32,
    status: &'static str,
    witnesses: Vec<WitnessDoc>,
    context: Vec<WitnessDoc>,
    runtime_ms: u64,
}

fn witness_doc(w: &crate::verify::Witness) -> WitnessDoc {
    let (layer, residual) = match &w.residual {
        Residual::Pk(p) => (
            "pk",
            serde_json::to_value(pk_terms(p)).expect("term serialization"),
        ),
        Residual::B(p) => (
            "b",
            serde_json::to_value(b_terms(p)).expect("term serialization"),
        ),
        Residual::Value(v) => ("value", serde_json::Value::String(v.clone())),
    };
    WitnessDoc {
        label: w.label.clone(),
        layer,
        residual,
    }
}

/// JSON rendering of a batch of verification reports.
pub fn reports_to_json(reports: &[VerifyReport]) -> String {
    let docs: Vec<ReportDoc> = reports
        .iter()
        .map(|r| ReportDoc {
            suite: r.suite.clone(),
            order: r.order,
            status: r.status.as_str(),
            witnesses: r.witnesses.iter().map(witness_doc).collect(),
            context: r.context.iter().map(witness_doc).collect(),
            runtime_ms: r.runtime_ms,
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("report serialization cannot fail")
}

/// Human-readable rendering of a batch of verification reports.
pub fn reports_to_text(reports: &[VerifyReport]) -> String {
    let mut out = String::new();
    for report in reports {
        let tag = if report.status.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        let _ = writeln!(
            out,
            "[{tag}] {} (order {}, {} ms)",
            report.suite, report.order, report.runtime_ms
        );
        for w in &report.witnesses {
            let _ = writeln!(out, "    witness: {}", w.label);
            let _ = writeln!(out, "             residual = {}", w.residual);
        }
        for w in &report.context {
            let _ = writeln!(out, "    note: {} = {}", w.label, w.residual);
        }
    }
    out
}

/// Text table of the coefficient families up to a maximum index.
pub fn coeff_table_text(max: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c_n (square root):");
    for n in 1..=max.max(1) {
        let _ = writeln!(out, "  c_{n} = {}", coeff_str(&crate::coeff::c_n(n)));
    }
    let _ = writeln!(out, "e_n (inverse square root):");
    for n in 0..=max {
        let _ = writeln!(out, "  e_{n} = {}", coeff_str(&crate::coeff::e_n(n)));
    }
    let _ = writeln!(out, "f_(l,r) (resummation):");
    for r in 0..=max {
        for l in 0..=r {
            let _ = writeln!(
                out,
                "  f_({l},{r}) = {}",
                coeff_str(&crate::coeff::f_lr(l, r))
            );
        }
    }
    let _ = writeln!(out, "c(r,rho) = pi^2r * gamma ratio:");
    for r in 0..=max {
        for rho in 0..=r {
            let _ = writeln!(
                out,
                "  c({r},{rho}) = pi^{} * {}",
                2 * r,
                coeff_str(&crate::coeff::gamma_ratio_half(r, rho))
            );
        }
    }
    out
}

/// JSON document of the coefficient families up to a maximum index.
pub fn coeff_table_json(max: u32) -> String {
    #[derive(Serialize)]
    struct Entry {
        num: String,
        den: String,
    }
    fn entry(q: &Rational) -> Entry {
        Entry {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
    let c: Vec<_> = (1..=max.max(1))
        .map(|n| entry(&crate::coeff::c_n(n)))
        .collect();
    let e: Vec<_> = (0..=max).map(|n| entry(&crate::coeff::e_n(n))).collect();
    let mut f = serde_json::Map::new();
    let mut crho = serde_json::Map::new();
    for r in 0..=max {
        for l in 0..=r {
            f.insert(
                format!("{l},{r}"),
                serde_json::to_value(entry(&crate::coeff::f_lr(l, r))).unwrap(),
            );
        }
        for rho in 0..=r {
            crho.insert(
                format!("{r},{rho}"),
                serde_json::json!({
                    "pi_exponent": 2 * r,
                    "num": crate::coeff::gamma_ratio_half(r, rho).numer().to_string(),
                    "den": crate::coeff::gamma_ratio_half(r, rho).denom().to_string(),
                }),
            );
        }
    }
    serde_json::to_string_pretty(&serde_json::json!({
        "c": c, "e": e, "f": f, "c_r_rho": crho,
    }))
    .expect("coefficient serialization cannot fail")
}

fn coeff_str(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::series::{Engine, SeriesId};

    #[test]
    fn ktilde_first_order_text() {
        let eng = Engine::new();
        let poly = crate::expand::expand_named(&eng, SeriesId::Ktilde, 1);
        // canonical order: degree, then pi exponent, then word (p < k < s)
        assert_eq!(terms_to_text(&b_terms(&poly)), "k - kBs - sBk");
    }

    #[test]
    fn empty_terms_render_as_zero() {
        assert_eq!(terms_to_text(&[]), "0");
        assert_eq!(terms_to_latex(&[], Layer::B), "0");
    }

    #[test]
    fn coefficient_magnitudes_render() {
        let mut poly = BPoly::zero(2);
        poly.insert("kBpBp".parse().unwrap(), Coefficient::term(2, rat(-1, 2)));
        poly.insert("k".parse().unwrap(), Coefficient::term(0, rat(1, 1)));
        assert_eq!(terms_to_text(&b_terms(&poly)), "k - 1/2 pi^2 kBpBp");
        assert_eq!(
            terms_to_latex(&b_terms(&poly), Layer::B),
            "k - \\frac{1}{2} \\pi^{2} k \\mathcal{B} p \\mathcal{B} p"
        );
    }

    #[test]
    fn json_round_trip_is_exact() {
        let eng = Engine::new();
        for id in [SeriesId::Ktilde, SeriesId::P, SeriesId::X] {
            let poly = crate::expand::expand_named(&eng, id, 3);
            let doc = expand_doc(id.as_str(), Layer::B, 3, b_terms(&poly));
            let json = doc_to_json(&doc);
            let (parsed_doc, parsed) = parse_expand_doc(&json).unwrap();
            assert_eq!(parsed_doc, doc);
            assert_eq!(parsed, ParsedPoly::B(poly));
        }
        let core = eng.pk_core(SeriesId::KtildeResClosed, 4);
        let doc = expand_doc("KtildeResClosed", Layer::Pk, 4, pk_terms(&core));
        let (_, parsed) = parse_expand_doc(&doc_to_json(&doc)).unwrap();
        assert_eq!(parsed, ParsedPoly::Pk(core));
    }

    #[test]
    fn rendering_is_canonical() {
        // two polynomials built in different insertion orders render
        // byte-identically once equal
        let mut a = BPoly::zero(2);
        a.insert("sBk".parse().unwrap(), Coefficient::term(0, rat(-1, 1)));
        a.insert("k".parse().unwrap(), Coefficient::term(0, rat(1, 1)));
        let mut b = BPoly::zero(2);
        b.insert("k".parse().unwrap(), Coefficient::term(0, rat(1, 1)));
        b.insert("sBk".parse().unwrap(), Coefficient::term(0, rat(-1, 1)));
        assert_eq!(
            doc_to_json(&expand_doc("T", Layer::B, 2, b_terms(&a))),
            doc_to_json(&expand_doc("T", Layer::B, 2, b_terms(&b)))
        );
    }

    #[test]
    fn report_json_is_deterministic() {
        let eng = Engine::new();
        let normalize = |mut reports: Vec<crate::verify::VerifyReport>| {
            for r in &mut reports {
                r.runtime_ms = 0;
            }
            reports
        };
        let a = normalize(vec![crate::verify::check_residual_identities(&eng, 4)]);
        let b = normalize(vec![crate::verify::check_residual_identities(&eng, 4)]);
        assert_eq!(reports_to_json(&a), reports_to_json(&b));
    }
}
