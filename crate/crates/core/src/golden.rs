//! Reference tables for the third-order expansions and their file format.
//!
//! A golden file holds one record per line, tab-separated:
//! `series  word  pi_exponent  numerator  denominator`, with `#` comments
//! and blank lines ignored. Words are B-layer words (letters p/k/s joined
//! by `B`). Duplicate (series, word, pi_exponent) keys are a parse error.
//! The shipped file transcribes the eight leading-order expansions with
//! every block prefactor distributed into the per-term coefficients.

use crate::coeff::{Coefficient, Rational};
use crate::expand::{BPoly, BWord};
use crate::series::SeriesId;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// The shipped reference tables (embedded copy of the data file).
pub const EMBEDDED_TSV: &str = include_str!("../data/reference_expansions.tsv");

/// The eight series covered by the shipped tables.
pub const GOLDEN_SERIES: [SeriesId; 8] = [
    SeriesId::Ktilde,
    SeriesId::X,
    SeriesId::Ptilde,
    SeriesId::Y,
    SeriesId::PtildeRes,
    SeriesId::KtildeResClosed,
    SeriesId::Ttilde,
    SeriesId::P,
];

/// One reference expansion: a series id, the order it is stated to, and
/// its exact terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoldenTable {
    pub series: SeriesId,
    pub order: u32,
    pub poly: BPoly,
}

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: expected 5 tab-separated fields, found {found}")]
    FieldCount {
        file: String,
        line: usize,
        found: usize,
    },
    #[error("{file}:{line}: unknown series {name:?}")]
    UnknownSeries {
        file: String,
        line: usize,
        name: String,
    },
    #[error("{file}:{line}: bad word {word:?}: {source}")]
    BadWord {
        file: String,
        line: usize,
        word: String,
        #[source]
        source: crate::pk::WordParseError,
    },
    #[error("{file}:{line}: bad {field} {value:?}")]
    BadNumber {
        file: String,
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("{file}:{line}: pi exponent {value} is odd")]
    OddPiExponent {
        file: String,
        line: usize,
        value: u32,
    },
    #[error("{file}:{line}: denominator must be positive, found {value}")]
    BadDenominator {
        file: String,
        line: usize,
        value: String,
    },
    #[error("{file}:{line}: duplicate entry for ({series}, {word}, pi^{pi_exp})")]
    Duplicate {
        file: String,
        line: usize,
        series: SeriesId,
        word: String,
        pi_exp: u32,
    },
}

/// Parses golden-table text. Records may appear in any order; they are
/// grouped by series, and each table's order is the maximum 𝓑-degree of
/// its words.
type SeriesEntries = BTreeMap<(BWord, u32), Rational>;

pub fn parse_golden(text: &str, file: &str) -> Result<Vec<GoldenTable>, GoldenError> {
    let mut acc: BTreeMap<&'static str, (SeriesId, SeriesEntries)> = BTreeMap::new();
    let mut first_seen: Vec<SeriesId> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.trim_end_matches(['\r']).split('\t').collect();
        if fields.len() != 5 {
            return Err(GoldenError::FieldCount {
                file: file.into(),
                line: line_no,
                found: fields.len(),
            });
        }
        let series: SeriesId =
            fields[0]
                .trim()
                .parse()
                .map_err(|_| GoldenError::UnknownSeries {
                    file: file.into(),
                    line: line_no,
                    name: fields[0].trim().to_string(),
                })?;
        let word: BWord = fields[1]
            .trim()
            .parse()
            .map_err(|source| GoldenError::BadWord {
                file: file.into(),
                line: line_no,
                word: fields[1].trim().to_string(),
                source,
            })?;
        let pi_exp: u32 = fields[2]
            .trim()
            .parse()
            .map_err(|_| GoldenError::BadNumber {
                file: file.into(),
                line: line_no,
                field: "pi exponent",
                value: fields[2].trim().to_string(),
            })?;
        if !pi_exp.is_multiple_of(2) {
            return Err(GoldenError::OddPiExponent {
                file: file.into(),
                line: line_no,
                value: pi_exp,
            });
        }
        let numer: BigInt = fields[3]
            .trim()
            .parse()
            .map_err(|_| GoldenError::BadNumber {
                file: file.into(),
                line: line_no,
                field: "numerator",
                value: fields[3].trim().to_string(),
            })?;
        let denom: BigInt = fields[4]
            .trim()
            .parse()
            .map_err(|_| GoldenError::BadNumber {
                file: file.into(),
                line: line_no,
                field: "denominator",
                value: fields[4].trim().to_string(),
            })?;
        if denom <= BigInt::from(0) {
            return Err(GoldenError::BadDenominator {
                file: file.into(),
                line: line_no,
                value: fields[4].trim().to_string(),
            });
        }

        let slot = acc
            .entry(series.as_str())
            .or_insert_with(|| (series, BTreeMap::new()));
        if !first_seen.contains(&series) {
            first_seen.push(series);
        }
        if slot
            .1
            .insert((word.clone(), pi_exp), Rational::new(numer, denom))
            .is_some()
        {
            return Err(GoldenError::Duplicate {
                file: file.into(),
                line: line_no,
                series,
                word: word.to_string(),
                pi_exp,
            });
        }
    }

    let mut tables = Vec::new();
    for series in first_seen {
        let (_, entries) = acc.remove(series.as_str()).expect("recorded above");
        let order = entries.keys().map(|(w, _)| w.b_degree()).max().unwrap_or(0);
        let mut poly = BPoly::zero(order);
        for ((word, pi_exp), value) in entries {
            poly.insert(word, Coefficient::term(pi_exp, value));
        }
        tables.push(GoldenTable {
            series,
            order,
            poly,
        });
    }
    Ok(tables)
}

/// Loads and parses a golden file from disk.
pub fn load_golden(path: &Path) -> Result<Vec<GoldenTable>, GoldenError> {
    let text = std::fs::read_to_string(path).map_err(|source| GoldenError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_golden(&text, &path.display().to_string())
}

/// The embedded reference tables; the shipped data is validated by the
/// test suite, so parsing cannot fail.
pub fn embedded_tables() -> Vec<GoldenTable> {
    parse_golden(EMBEDDED_TSV, "<embedded>").expect("embedded tables are well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn embedded_tables_cover_the_eight_series() {
        let tables = embedded_tables();
        let ids: Vec<SeriesId> = tables.iter().map(|t| t.series).collect();
        assert_eq!(ids, GOLDEN_SERIES.to_vec());
        for t in &tables {
            assert_eq!(t.order, 3, "{}", t.series);
        }
    }

    #[test]
    fn parse_single_lines() {
        let tables = parse_golden("Ktilde\tkBkBk\t2\t-1\t1\n", "t").unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(
            tables[0].poly.coeff_of(&"kBkBk".parse().unwrap()),
            Coefficient::term(2, rat(-1, 1))
        );

        let tables = parse_golden("P\tp\t0\t1\t2\n", "t").unwrap();
        assert_eq!(
            tables[0].poly.coeff_of(&"p".parse().unwrap()),
            Coefficient::term(0, rat(1, 2))
        );
    }

    #[test]
    fn empty_input_gives_no_tables() {
        assert!(parse_golden("", "t").unwrap().is_empty());
        assert!(parse_golden("# only a comment\n\n", "t")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let text = "P\tp\t0\t1\t2\nP\tp\t0\t1\t2\n";
        match parse_golden(text, "t") {
            Err(GoldenError::Duplicate { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_report_position() {
        match parse_golden("P\tp\t0\t1\n", "t") {
            Err(GoldenError::FieldCount {
                line: 1, found: 4, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_golden("Nope\tp\t0\t1\t1\n", "t") {
            Err(GoldenError::UnknownSeries { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_golden("P\tpbk\t0\t1\t1\n", "t") {
            Err(GoldenError::BadWord { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_golden("P\tp\t1\t1\t1\n", "t") {
            Err(GoldenError::OddPiExponent {
                line: 1, value: 1, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_golden("P\tp\t0\t1\t0\n", "t") {
            Err(GoldenError::BadDenominator { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
