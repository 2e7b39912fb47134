//! Double-keyed transcription guard for the shipped reference tables.
//!
//! The shipped TSV lists fully distributed per-term coefficients in
//! canonical order. This test re-enters the same eight expansions a
//! second, structurally different way — sign lists grouped under block
//! prefactors, with the outer 1/2 of t̃ and P applied programmatically —
//! and requires exact agreement. A typo in either keying shows up as a
//! mismatch.

use diracsea::coeff::{rat, Coefficient, Rational};
use diracsea::golden::{embedded_tables, GOLDEN_SERIES};
use diracsea::{BPoly, SeriesId};

/// A display block: a common prefactor (rational, π-exponent) and a list
/// of signed words.
struct Block {
    num: i64,
    den: i64,
    pi_exp: u32,
    terms: &'static str,
}

fn block(num: i64, den: i64, pi_exp: u32, terms: &'static str) -> Block {
    Block {
        num,
        den,
        pi_exp,
        terms,
    }
}

/// Parses a signed word list like "+p -sBp -pBs" into a polynomial,
/// applying the block prefactor and an outer factor.
fn assemble(order: u32, outer: Rational, blocks: &[Block]) -> BPoly {
    let mut poly = BPoly::zero(order);
    for b in blocks {
        let prefactor = rat(b.num, b.den) * &outer;
        for token in b.terms.split_whitespace() {
            let (sign, word) = match token.split_at(1) {
                ("+", rest) => (rat(1, 1), rest),
                ("-", rest) => (rat(-1, 1), rest),
                _ => panic!("token {token:?} must start with a sign"),
            };
            poly.insert(
                word.parse().unwrap(),
                Coefficient::term(b.pi_exp, sign * &prefactor),
            );
        }
    }
    poly
}

fn display_transcription(id: SeriesId) -> BPoly {
    let whole = rat(1, 1);
    let half = rat(1, 2);
    match id {
        SeriesId::Ktilde => assemble(
            3,
            whole,
            &[
                block(1, 1, 0, "+k -sBk -kBs +kBsBs +sBkBs +sBsBk"),
                block(-1, 1, 2, "+kBkBk"),
                block(-1, 1, 0, "+kBsBsBs +sBkBsBs +sBsBkBs +sBsBsBk"),
                block(1, 1, 2, "+sBkBkBk +kBsBkBk +kBkBsBk +kBkBkBs"),
            ],
        ),
        SeriesId::X => assemble(
            3,
            whole,
            &[block(
                1,
                1,
                2,
                "+pBpBp -pBkBk -kBkBp +kBpBk \
                 +pBsBkBk -kBpBsBk -pBpBsBp +pBkBsBk \
                 +kBkBsBp -kBsBpBk +kBsBkBp -pBsBpBp",
            )],
        ),
        SeriesId::Ptilde => assemble(
            3,
            whole,
            &[
                block(1, 1, 0, "+p -sBp -pBs +pBsBs +sBpBs +sBsBp"),
                block(1, 2, 2, "+kBpBk -kBkBp -pBkBk -pBpBp"),
                block(-1, 1, 0, "+pBsBsBs +sBpBsBs +sBsBpBs +sBsBsBp"),
                block(
                    1,
                    2,
                    2,
                    "+sBpBpBp +pBsBpBp +pBpBsBp +pBpBpBs \
                     +kBsBkBp +kBkBsBp +pBkBsBk +pBsBkBk -kBsBpBk \
                     -kBpBkBs -kBpBsBk +pBkBkBs +sBpBkBk +sBkBkBp \
                     +kBkBpBs -sBkBpBk",
                ),
            ],
        ),
        SeriesId::Y => assemble(
            3,
            whole,
            &[
                block(1, 1, 0, "+p"),
                block(
                    -1,
                    1,
                    2,
                    "+pBpBp -pBkBk -kBkBp +kBpBk \
                     +pBsBkBk -kBpBsBk -pBpBsBp +pBkBsBk \
                     +kBkBsBp -kBsBpBk +kBsBkBp -pBsBpBp",
                ),
            ],
        ),
        SeriesId::PtildeRes => assemble(
            3,
            whole,
            &[
                block(1, 1, 0, "+p -sBp -pBs +pBsBs +sBpBs +sBsBp"),
                block(-1, 1, 2, "+pBpBp"),
                block(-1, 1, 0, "+pBsBsBs +sBpBsBs +sBsBpBs +sBsBsBp"),
                block(1, 1, 2, "+sBpBpBp +pBsBpBp +pBpBsBp +pBpBpBs"),
            ],
        ),
        SeriesId::KtildeResClosed => assemble(
            3,
            whole,
            &[
                block(1, 1, 0, "+k -sBk -kBs +kBsBs +sBkBs +sBsBk"),
                block(1, 2, 2, "-kBpBp +pBkBp -pBpBk -kBkBk"),
                block(-1, 1, 0, "+kBsBsBs +sBkBsBs +sBsBkBs +sBsBsBk"),
                block(
                    1,
                    2,
                    2,
                    "+sBkBkBk +kBsBkBk +kBkBsBk +kBkBkBs \
                     +kBsBpBp -sBpBkBp +sBpBpBk +pBsBpBk -pBkBpBs \
                     +kBpBsBp +kBpBpBs -pBkBsBp +pBpBkBs +sBkBpBp \
                     -pBsBkBp +pBpBsBk",
                ),
            ],
        ),
        SeriesId::Ttilde => assemble(
            3,
            half,
            &[
                block(
                    1,
                    1,
                    0,
                    "+p -k -sBp -pBs +sBk +kBs \
                     +pBsBs +sBpBs +sBsBp -kBsBs -sBkBs -sBsBk",
                ),
                block(1, 1, 2, "+kBkBk"),
                block(1, 2, 2, "+kBpBk -kBkBp -pBkBk -pBpBp"),
                block(
                    -1,
                    1,
                    0,
                    "+pBsBsBs +sBpBsBs +sBsBpBs +sBsBsBp \
                     -kBsBsBs -sBkBsBs -sBsBkBs -sBsBsBk",
                ),
                block(1, 2, 2, "+sBpBpBp +pBsBpBp +pBpBsBp +pBpBpBs"),
                block(-1, 1, 2, "+sBkBkBk +kBsBkBk +kBkBsBk +kBkBkBs"),
                block(
                    1,
                    2,
                    2,
                    "+kBsBkBp +kBkBsBp +pBkBsBk +pBsBkBk \
                     -kBsBpBk -kBpBkBs -kBpBsBk +pBkBkBs \
                     +sBpBkBk +sBkBkBp +kBkBpBs -sBkBpBk",
                ),
            ],
        ),
        SeriesId::P => assemble(
            3,
            half,
            &[
                block(
                    1,
                    1,
                    0,
                    "+p -k -sBp -pBs +sBk +kBs \
                     +pBsBs +sBpBs +sBsBp -kBsBs -sBkBs -sBsBk",
                ),
                block(-1, 1, 2, "+pBpBp"),
                block(1, 2, 2, "+kBkBk +pBpBk -pBkBp +kBpBp"),
                block(
                    -1,
                    1,
                    0,
                    "+pBsBsBs +sBpBsBs +sBsBpBs +sBsBsBp \
                     -kBsBsBs -sBkBsBs -sBsBkBs -sBsBsBk",
                ),
                block(1, 1, 2, "+sBpBpBp +pBsBpBp +pBpBsBp +pBpBpBs"),
                block(-1, 2, 2, "+sBkBkBk +kBsBkBk +kBkBsBk +kBkBkBs"),
                block(
                    1,
                    2,
                    2,
                    "+pBkBpBs -sBkBpBp +pBkBsBp -pBpBkBs \
                     -pBsBpBk +pBsBkBp -kBpBsBp -kBsBpBp \
                     -pBpBsBk +sBpBkBp -kBpBpBs -sBpBpBk",
                ),
            ],
        ),
        other => panic!("{other} has no display transcription"),
    }
}

#[test]
fn both_transcriptions_agree_term_by_term() {
    let shipped = embedded_tables();
    for id in GOLDEN_SERIES {
        let table = shipped
            .iter()
            .find(|t| t.series == id)
            .unwrap_or_else(|| panic!("{id} missing from the shipped tables"));
        let rekeyed = display_transcription(id);
        assert_eq!(
            table.poly,
            rekeyed,
            "transcriptions of {id} disagree: shipped {} terms, rekeyed {} terms",
            table.poly.num_terms(),
            rekeyed.num_terms()
        );
    }
}

#[test]
fn table_sizes_match_the_displays() {
    let sizes: Vec<(SeriesId, usize)> = embedded_tables()
        .iter()
        .map(|t| (t.series, t.poly.num_terms()))
        .collect();
    assert_eq!(
        sizes,
        vec![
            (SeriesId::Ktilde, 15),
            (SeriesId::X, 12),
            (SeriesId::Ptilde, 30),
            (SeriesId::Y, 13),
            (SeriesId::PtildeRes, 15),
            (SeriesId::KtildeResClosed, 30),
            (SeriesId::Ttilde, 45),
            (SeriesId::P, 45),
        ]
    );
}
