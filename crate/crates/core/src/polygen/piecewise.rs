use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{cegis_generate, CegisConfig, PolynomialSpec, TermStructure};
use crate::formats::FPFormat;
use crate::intervals::ReducedConstraint;
use crate::rational::{floor, mul_pow2, Rational};
use crate::rounding::{round, RoundingMode};

/// Maps a reduced argument to its piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexRule {
    /// `2^bits` equal slices of `[lo, hi)`.
    Uniform { lo: Rational, hi: Rational, bits: u32 },
    /// Equal slices of width `width` of the order key above `base`, where
    /// the key is the pattern of the argument truncated into `key_format`:
    /// uniform within a binade and logarithmic across binades.
    PatternSlices {
        key_format: FPFormat,
        base: i64,
        width: i64,
        bits: u32,
    },
}

/// How to construct an [`IndexRule`] for a given piece count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexScheme {
    Uniform { lo: Rational, hi: Rational },
    Pattern(FPFormat),
}

/// Monotone in `xr`; saturates beyond the key format's range.
fn order_key(key_format: FPFormat, xr: &Rational) -> i64 {
    let b = round(key_format, RoundingMode::Rz, xr);
    if b.is_zero() {
        0
    } else {
        b.ordered_key() as i64
    }
}

impl IndexRule {
    pub fn bits(&self) -> u32 {
        match self {
            IndexRule::Uniform { bits, .. } | IndexRule::PatternSlices { bits, .. } => *bits,
        }
    }

    pub fn pieces(&self) -> usize {
        1usize << self.bits()
    }

    pub fn index(&self, xr: &Rational) -> usize {
        let last = self.pieces() as i64 - 1;
        let i = match self {
            IndexRule::Uniform { lo, hi, bits } => {
                let t = mul_pow2(&((xr - lo) / (hi - lo)), *bits as i64);
                floor(&t).to_i64().unwrap_or(if xr < lo { 0 } else { last })
            }
            IndexRule::PatternSlices {
                key_format, base, width, ..
            } => {
                let d = order_key(*key_format, xr) as i128 - *base as i128;
                d.div_euclid(*width as i128).clamp(-1, last as i128) as i64
            }
        };
        i.clamp(0, last) as usize
    }

    /// Rule with `2^bits` pieces covering the sorted `constraints`.
    pub fn build(scheme: &IndexScheme, constraints: &[ReducedConstraint], bits: u32) -> Self {
        match scheme {
            IndexScheme::Uniform { lo, hi } => IndexRule::Uniform {
                lo: lo.clone(),
                hi: hi.clone(),
                bits,
            },
            IndexScheme::Pattern(key_format) => {
                let key_format = *key_format;
                let (base, top) = match (constraints.first(), constraints.last()) {
                    (Some(a), Some(b)) => (order_key(key_format, &a.xr), order_key(key_format, &b.xr)),
                    _ => (0, 0),
                };
                let keys = (top as i128 - base as i128).max(0) + 1;
                let slices = 1i128 << bits;
                let width = ((keys + slices - 1) / slices) as i64;
                IndexRule::PatternSlices {
                    key_format,
                    base,
                    width,
                    bits,
                }
            }
        }
    }
}

impl fmt::Display for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexRule::Uniform { lo, hi, bits } => write!(
                f,
                "uniform {} {} {bits}",
                crate::rational::format_rational(lo),
                crate::rational::format_rational(hi)
            ),
            IndexRule::PatternSlices {
                key_format,
                base,
                width,
                bits,
            } => write!(
                f,
                "pattern {} {} {base} {width} {bits}",
                key_format.total_bits(),
                key_format.exponent_bits()
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    pub rule: IndexRule,
    pub pieces: Vec<PolynomialSpec>,
}

impl PiecewisePolynomial {
    pub fn piece_for(&self, xr: &Rational) -> &PolynomialSpec {
        &self.pieces[self.rule.index(xr)]
    }

    pub fn max_degree(&self) -> u32 {
        self.pieces.iter().map(PolynomialSpec::degree).max().unwrap_or(0)
    }

    pub fn max_terms(&self) -> usize {
        self.pieces.iter().map(PolynomialSpec::terms).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct PiecewiseConfig {
    pub h: FPFormat,
    pub max_degree: u32,
    pub max_pieces: usize,
    pub terms: TermStructure,
    pub scheme: IndexScheme,
    pub cegis: CegisConfig,
}

/// Per-piece generation statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub index: usize,
    pub constraints: usize,
    pub degree: u32,
    pub terms: usize,
    pub iterations: usize,
}

/// The piece that could not be fitted at the largest piece count tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFailure {
    pub pieces: usize,
    pub piece: usize,
    pub constraints: usize,
    pub max_degree: u32,
}

impl fmt::Display for GenFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no polynomial of degree <= {} fits piece {} of {} ({} constraints)",
            self.max_degree, self.piece, self.pieces, self.constraints
        )
    }
}

fn fit_piece(cs: &[ReducedConstraint], cfg: &PiecewiseConfig) -> Option<(PolynomialSpec, PieceReport)> {
    if cs.is_empty() {
        let z = PolynomialSpec::zero();
        return Some((
            z,
            PieceReport {
                index: 0,
                constraints: 0,
                degree: 0,
                terms: 1,
                iterations: 0,
            },
        ));
    }
    (1..=cfg.max_degree).find_map(|d| {
        let powers = cfg.terms.powers(d);
        if powers.is_empty() {
            return None;
        }
        let out = cegis_generate(cs, &powers, cfg.h, cfg.cegis)?;
        let report = PieceReport {
            index: 0,
            constraints: cs.len(),
            degree: out.poly.degree(),
            terms: out.poly.terms(),
            iterations: out.iterations,
        };
        Some((out.poly, report))
    })
}

/// Doubles the piece count until every piece admits a polynomial of degree
/// at most `max_degree`; each piece takes its smallest feasible degree.
pub fn gen_piecewise(
    constraints: &[ReducedConstraint],
    cfg: &PiecewiseConfig,
) -> Result<(PiecewisePolynomial, Vec<PieceReport>), GenFailure> {
    let mut failure = None;
    let mut bits = 0u32;
    while (1usize << bits) <= cfg.max_pieces.max(1) {
        let rule = IndexRule::build(&cfg.scheme, constraints, bits);
        let mut parts: Vec<Vec<ReducedConstraint>> = vec![Vec::new(); rule.pieces()];
        for c in constraints {
            parts[rule.index(&c.xr)].push(c.clone());
        }
        let fitted: Result<Vec<_>, GenFailure> = parts
            .par_iter()
            .enumerate()
            .map(|(i, cs)| {
                fit_piece(cs, cfg)
                    .map(|(p, mut r)| {
                        r.index = i;
                        (p, r)
                    })
                    .ok_or(GenFailure {
                        pieces: rule.pieces(),
                        piece: i,
                        constraints: cs.len(),
                        max_degree: cfg.max_degree,
                    })
            })
            .collect();
        match fitted {
            Ok(v) => {
                let (pieces, reports) = v.into_iter().unzip();
                return Ok((PiecewisePolynomial { rule, pieces }, reports));
            }
            Err(e) => failure = Some(e),
        }
        bits += 1;
    }
    Err(failure.expect("at least one piece count is tried"))
}
