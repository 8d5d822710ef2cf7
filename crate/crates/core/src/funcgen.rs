//! Generated functions: the generation pipeline and the runtime that turns
//! one H evaluation into correctly rounded results for every narrower format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formats::{enumerate_finite, Class, FPBits, FPFormat, Value};
use crate::intervals::{calc_odd_intervals, check_eval_format, reduce_constraints};
use crate::oracle::{self, Func, Special};
use crate::polygen::{
    gen_piecewise, CegisConfig, IndexScheme, PieceReport, PiecewiseConfig, PiecewisePolynomial, TermStructure,
};
use crate::hfloat;
use crate::rational::Rational;
use crate::reduction::{Compensator, RangeReduction};
use crate::rounding::{round, round_bits, RoundingMode};

/// Input classes resolved by the special-case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialClass {
    Nan,
    PosInf,
    NegInf,
    PosZero,
    NegZero,
    /// Negative, finite and nonzero.
    Negative,
}

impl SpecialClass {
    pub const ALL: [SpecialClass; 6] = [
        SpecialClass::Nan,
        SpecialClass::PosInf,
        SpecialClass::NegInf,
        SpecialClass::PosZero,
        SpecialClass::NegZero,
        SpecialClass::Negative,
    ];

    pub fn of(x: FPBits) -> Self {
        let neg = x.is_negative();
        match x.classify() {
            Class::Nan => SpecialClass::Nan,
            Class::Infinity if neg => SpecialClass::NegInf,
            Class::Infinity => SpecialClass::PosInf,
            Class::Zero if neg => SpecialClass::NegZero,
            Class::Zero => SpecialClass::PosZero,
            _ if neg => SpecialClass::Negative,
            _ => unreachable!("positive finite inputs have no class"),
        }
    }

    /// Whether `x` belongs to a class at all.
    pub fn applies(x: FPBits) -> bool {
        !x.is_finite() || x.is_zero() || x.is_negative()
    }

    fn representative(self, tn: FPFormat) -> FPBits {
        match self {
            SpecialClass::Nan => tn.quiet_nan(),
            SpecialClass::PosInf => tn.infinity(false),
            SpecialClass::NegInf => tn.infinity(true),
            SpecialClass::PosZero => tn.zero(false),
            SpecialClass::NegZero => tn.zero(true),
            SpecialClass::Negative => FPBits::from_parts(tn, true, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialClass::Nan => "nan",
            SpecialClass::PosInf => "+inf",
            SpecialClass::NegInf => "-inf",
            SpecialClass::PosZero => "+0",
            SpecialClass::NegZero => "-0",
            SpecialClass::Negative => "negative",
        }
    }
}

impl FromStr for SpecialClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown input class `{s}`")))
    }
}

pub fn special_name(s: Special) -> &'static str {
    match s {
        Special::Nan => "nan",
        Special::Infinity { negative: false } => "+inf",
        Special::Infinity { negative: true } => "-inf",
        Special::Zero { negative: false } => "+0",
        Special::Zero { negative: true } => "-0",
    }
}

pub fn parse_special(s: &str) -> Result<Special> {
    Ok(match s {
        "nan" => Special::Nan,
        "+inf" => Special::Infinity { negative: false },
        "-inf" => Special::Infinity { negative: true },
        "+0" => Special::Zero { negative: false },
        "-0" => Special::Zero { negative: true },
        _ => return Err(Error::Parse(format!("unknown special result `{s}`"))),
    })
}

/// The special-case table of `func`, one entry per class that needs one.
/// Membership depends only on the class, never on the payload or magnitude.
pub fn special_table(func: Func, tn: FPFormat) -> BTreeMap<SpecialClass, Special> {
    SpecialClass::ALL
        .into_iter()
        .filter_map(|c| func.special_case(c.representative(tn)).map(|s| (c, s)))
        .collect()
}

/// A run of consecutive inputs at one end of the domain that all share the
/// same odd round-to-odd result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeRule {
    AtMost { x: FPBits, y: FPBits },
    AtLeast { x: FPBits, y: FPBits },
}

impl RangeRule {
    fn apply(&self, v: &Rational) -> Option<FPBits> {
        match self {
            RangeRule::AtMost { x, y } => (v <= &x.finite_value().unwrap()).then_some(*y),
            RangeRule::AtLeast { x, y } => (v >= &x.finite_value().unwrap()).then_some(*y),
        }
    }
}

/// Where a pipeline result came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Special(Special),
    /// A stored `T_{n+2}` result: exact singletons and range rules.
    Stored(FPBits),
    /// The compensated polynomial value in H.
    Computed(Value),
}

/// A generated function: formats, reduction, polynomial and lookup tables.
/// Immutable once built; evaluation is pure.
#[derive(Clone, Debug)]
pub struct GeneratedFunction {
    pub func: Func,
    pub tn: FPFormat,
    pub t2: FPFormat,
    pub h: FPFormat,
    pub comp: Compensator,
    pub poly: PiecewisePolynomial,
    pub specials: BTreeMap<SpecialClass, Special>,
    /// Keyed by the `T_n` pattern, `+0` standing for both zeros.
    pub singletons: BTreeMap<u64, FPBits>,
    pub rules: Vec<RangeRule>,
    verified: bool,
}

impl GeneratedFunction {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        func: Func,
        tn: FPFormat,
        h: FPFormat,
        comp: Compensator,
        poly: PiecewisePolynomial,
        specials: BTreeMap<SpecialClass, Special>,
        singletons: BTreeMap<u64, FPBits>,
        rules: Vec<RangeRule>,
    ) -> Result<Self> {
        let t2 = tn.widened(2)?;
        check_eval_format(h, t2)?;
        Ok(Self {
            func,
            tn,
            t2,
            h,
            comp,
            poly,
            specials,
            singletons,
            rules,
            verified: false,
        })
    }

    pub fn rr(&self) -> RangeReduction {
        self.comp.rr
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub(crate) fn set_verified(&mut self, v: bool) {
        self.verified = v;
    }

    /// Polynomial path in H for a finite input value.
    pub fn h_value(&self, v: &Rational) -> Value {
        let red = self.comp.rr.reduce(v);
        let xr = hfloat::rn_finite(self.h, &red.xr);
        let p = self.poly.piece_for(&xr).eval_h(self.h, &xr);
        self.comp.compensate(&p, red.m)
    }

    /// Runs the pipeline on a `T_n` pattern.
    pub fn evaluate_h(&self, x: FPBits) -> Evaluation {
        debug_assert_eq!(x.format(), self.tn);
        if SpecialClass::applies(x) {
            if let Some(s) = self.specials.get(&SpecialClass::of(x)) {
                return Evaluation::Special(*s);
            }
        }
        let key = if x.is_zero() { 0 } else { x.bits() };
        if let Some(y) = self.singletons.get(&key) {
            return Evaluation::Stored(*y);
        }
        let v = x.finite_value().expect("non-special inputs are finite");
        if let Some(y) = self.rules.iter().find_map(|r| r.apply(&v)) {
            return Evaluation::Stored(y);
        }
        Evaluation::Computed(self.h_value(&v))
    }

    /// Round-to-odd result in `T_{n+2}`.
    pub fn evaluate_rno(&self, x: FPBits) -> FPBits {
        finish_rno(&self.evaluate_h(x), self.t2)
    }

    /// Result in `x`'s format `T_k` under `mode`, rounded directly from the
    /// pipeline value.
    pub fn evaluate(&self, x: FPBits, mode: RoundingMode) -> Result<FPBits> {
        let tk = x.format();
        self.check_target(tk)?;
        if mode == RoundingMode::Ro {
            return Err(Error::Config("results are guaranteed only for the five standard modes".into()));
        }
        let xn = x.embed(self.tn)?;
        Ok(finish(&self.evaluate_h(xn), tk, mode))
    }

    /// `T_k` must share the exponent width and satisfy `|E| + 1 < k <= n`.
    pub fn check_target(&self, tk: FPFormat) -> Result<()> {
        let e = self.tn.exponent_bits();
        let k = tk.total_bits();
        if tk.exponent_bits() != e || k <= e + 1 || k > self.tn.total_bits() {
            return Err(Error::TargetFormat {
                k,
                n: self.tn.total_bits(),
                ebits: tk.exponent_bits(),
            });
        }
        Ok(())
    }

    /// Supported target widths `k`.
    pub fn target_range(&self) -> std::ops::RangeInclusive<u32> {
        self.tn.exponent_bits() + 2..=self.tn.total_bits()
    }
}

/// Rounds a pipeline value into `tk`.
pub fn finish(e: &Evaluation, tk: FPFormat, mode: RoundingMode) -> FPBits {
    match e {
        Evaluation::Special(s) => s.to_bits(tk),
        Evaluation::Stored(y) => round_bits(tk, mode, *y).expect("stored results are wider than every target"),
        Evaluation::Computed(v) => round_value(tk, mode, v),
    }
}

/// The `T_{n+2}` round-to-odd result of a pipeline value.
pub fn finish_rno(e: &Evaluation, t2: FPFormat) -> FPBits {
    match e {
        Evaluation::Special(s) => s.to_bits(t2),
        Evaluation::Stored(y) => *y,
        Evaluation::Computed(v) => round_value(t2, RoundingMode::Ro, v),
    }
}

fn round_value(t: FPFormat, mode: RoundingMode, v: &Value) -> FPBits {
    match v {
        Value::Finite(r) => round(t, mode, r),
        Value::Infinity { negative } => t.infinity(*negative),
        Value::Nan => t.quiet_nan(),
    }
}

/// Everything that parameterises a generation run.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub func: Func,
    pub tn: FPFormat,
    pub h: FPFormat,
    pub rr: RangeReduction,
    pub max_degree: u32,
    pub max_pieces: usize,
    pub terms: TermStructure,
    pub guard_ulps: u32,
    pub cegis: CegisConfig,
}

/// Evaluation format used when none is given.
pub fn default_h() -> FPFormat {
    FPFormat::new(64, 11).expect("valid format")
}

impl GenConfig {
    pub fn new(func: Func, tn: FPFormat) -> Self {
        Self {
            func,
            tn,
            h: default_h(),
            rr: RangeReduction::Identity,
            max_degree: 6,
            max_pieces: 64,
            terms: TermStructure::All,
            guard_ulps: 2,
            cegis: CegisConfig::default(),
        }
    }
}

/// Statistics of a generation run.
#[derive(Clone, Debug)]
pub struct GenerationLog {
    pub inputs: usize,
    pub singletons: usize,
    pub rule_inputs: usize,
    pub constraints: usize,
    pub reduced: usize,
    pub pieces: Vec<PieceReport>,
}

impl fmt::Display for GenerationLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degree = self.pieces.iter().map(|p| p.degree).max().unwrap_or(0);
        let terms = self.pieces.iter().map(|p| p.terms).max().unwrap_or(0);
        writeln!(f, "inputs       {}", self.inputs)?;
        writeln!(f, "singletons   {}", self.singletons)?;
        writeln!(f, "range rules  {} inputs", self.rule_inputs)?;
        writeln!(f, "constraints  {} ({} after reduction)", self.constraints, self.reduced)?;
        writeln!(f, "polynomials  {}", self.pieces.len())?;
        writeln!(f, "degree       {degree}")?;
        writeln!(f, "terms        {terms}")?;
        writeln!(f, "piece  constraints  degree  terms  iterations")?;
        for p in &self.pieces {
            writeln!(
                f,
                "{:>5}  {:>11}  {:>6}  {:>5}  {:>10}",
                p.index, p.constraints, p.degree, p.terms, p.iterations
            )?;
        }
        Ok(())
    }
}

/// Splits off the constant odd-result runs at both ends of the sorted inputs.
fn extract_rules(results: &mut Vec<(FPBits, FPBits)>) -> (Vec<RangeRule>, usize) {
    let run = |it: &mut dyn Iterator<Item = &(FPBits, FPBits)>| -> usize {
        let mut first = None;
        let mut len = 0;
        for (_, y) in it {
            match first {
                None if y.is_odd() => first = Some(*y),
                Some(f) if f == *y => {}
                _ => break,
            }
            len += 1;
        }
        len
    };
    let mut rules = Vec::new();
    let mut removed = 0;
    let head = run(&mut results.iter());
    if head >= 2 {
        let (x, y) = results[head - 1];
        rules.push(RangeRule::AtMost { x, y });
        results.drain(..head);
        removed += head;
    }
    let tail = run(&mut results.iter().rev());
    if tail >= 2 {
        let at = results.len() - tail;
        let (x, y) = results[at];
        rules.push(RangeRule::AtLeast { x, y });
        results.truncate(at);
        removed += tail;
    }
    (rules, removed)
}

/// Round-to-odd results for every non-special `T_n` input, ascending.
pub fn rno_results(func: Func, tn: FPFormat, t2: FPFormat) -> Result<Vec<(FPBits, FPBits)>> {
    let inputs = enumerate_finite(tn, |b| func.special_case(*b).is_none());
    inputs
        .par_iter()
        .map(|&x| Ok((x, oracle::rno_result(func, t2, x)?)))
        .collect()
}

/// Builds a generated function whose H evaluation lands in the odd interval
/// of every input's round-to-odd result.
/// Same precision as `tn` with enough exponent range that every subnormal
/// of `tn` is normal, so index slices are logarithmically spaced throughout.
fn index_key_format(tn: FPFormat) -> Result<FPFormat> {
    let m = tn.mantissa_bits() as i64;
    let mut e = tn.exponent_bits();
    while FPFormat::new(m as u32 + 1 + e, e)?.emin() > tn.emin() - m {
        e += 1;
    }
    FPFormat::new(m as u32 + 1 + e, e)
}

pub fn generate(cfg: &GenConfig) -> Result<(GeneratedFunction, GenerationLog)> {
    let t2 = cfg.tn.widened(2)?;
    check_eval_format(cfg.h, t2)?;
    let mut results = rno_results(cfg.func, cfg.tn, t2)?;
    let inputs = results.len();
    let (rules, rule_inputs) = extract_rules(&mut results);
    let (constraints, singles) = calc_odd_intervals(&results, t2, cfg.h)?;
    let comp = Compensator::new(cfg.rr, cfg.h)?;
    for c in &constraints {
        let xr = cfg.rr.reduce(&c.x.finite_value().unwrap()).xr;
        if FPBits::encode_exact(cfg.h, &xr).is_none() {
            return Err(Error::Config(format!(
                "reduced argument of {} is not exact in {}",
                c.x, cfg.h
            )));
        }
    }
    let reduced = reduce_constraints(&constraints, &comp, cfg.guard_ulps)?;
    let scheme = match cfg.rr.reduced_domain() {
        Some((lo, hi)) => IndexScheme::Uniform { lo, hi },
        None => IndexScheme::Pattern(index_key_format(cfg.tn)?),
    };
    let pcfg = PiecewiseConfig {
        h: cfg.h,
        max_degree: cfg.max_degree,
        max_pieces: cfg.max_pieces,
        terms: cfg.terms,
        scheme,
        cegis: cfg.cegis,
    };
    let (poly, pieces) = gen_piecewise(&reduced, &pcfg).map_err(Error::Infeasible)?;
    let log = GenerationLog {
        inputs,
        singletons: singles.len(),
        rule_inputs,
        constraints: constraints.len(),
        reduced: reduced.len(),
        pieces,
    };
    let singletons = singles.iter().map(|s| (s.x.bits(), s.y)).collect();
    let g = GeneratedFunction::new(
        cfg.func,
        cfg.tn,
        cfg.h,
        comp,
        poly,
        special_table(cfg.func, cfg.tn),
        singletons,
        rules,
    )?;
    Ok((g, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn f(n: u32, e: u32) -> FPFormat {
        FPFormat::new(n, e).unwrap()
    }

    fn ln_fp5() -> (GeneratedFunction, GenerationLog) {
        let mut cfg = GenConfig::new(Func::Ln, f(5, 2));
        cfg.max_degree = 4;
        cfg.max_pieces = 1;
        generate(&cfg).unwrap()
    }

    #[test]
    fn ln_special_table() {
        let t = special_table(Func::Ln, f(5, 2));
        assert_eq!(t[&SpecialClass::Nan], Special::Nan);
        assert_eq!(t[&SpecialClass::PosZero], Special::Infinity { negative: true });
        assert_eq!(t[&SpecialClass::Negative], Special::Nan);
        assert_eq!(t[&SpecialClass::PosInf], Special::Infinity { negative: false });
        let t = special_table(Func::Exp, f(5, 2));
        assert!(!t.contains_key(&SpecialClass::PosZero));
        assert!(!t.contains_key(&SpecialClass::Negative));
    }

    #[test]
    fn ln_worked_example() {
        let (g, log) = ln_fp5();
        assert_eq!(log.singletons, 1);
        assert_eq!(log.constraints, 10);
        assert_eq!(g.poly.pieces.len(), 1);
        assert!(g.poly.max_degree() <= 4);
        let x = FPBits::encode_exact(g.tn, &ratio(3, 2)).unwrap();
        assert_eq!(g.evaluate_rno(x).finite_value(), Some(ratio(7, 16)));
        assert!(g.evaluate_rno(g.tn.quiet_nan()).is_nan());
        assert_eq!(g.evaluate_rno(g.tn.zero(false)), g.t2.infinity(true));
        let one = FPBits::encode_exact(g.tn, &int(1)).unwrap();
        assert_eq!(g.evaluate_rno(one), g.t2.zero(false));
    }

    #[test]
    fn direct_examples() {
        let (g, _) = ln_fp5();
        let x = FPBits::encode_exact(f(5, 2), &ratio(3, 2)).unwrap();
        assert_eq!(g.evaluate(x, RoundingMode::Rn).unwrap().finite_value(), Some(ratio(1, 2)));
        let x = FPBits::encode_exact(f(4, 2), &int(3)).unwrap();
        assert_eq!(g.evaluate(x, RoundingMode::Rd).unwrap().finite_value(), Some(int(1)));
        assert!(g.evaluate(FPBits::new(f(6, 2), 1), RoundingMode::Rn).is_err());
        assert!(g.evaluate(FPBits::new(f(5, 3), 1), RoundingMode::Rn).is_err());
        assert!(g.evaluate(x, RoundingMode::Ro).is_err());
    }

    #[test]
    fn every_pattern_agrees_with_the_oracle_and_both_paths() {
        let (g, _) = ln_fp5();
        for x in g.tn.patterns() {
            let y = g.evaluate_rno(x);
            let want = oracle::rno_result(Func::Ln, g.t2, x).unwrap();
            if want.is_nan() {
                assert!(y.is_nan());
            } else {
                assert_eq!(y, want, "{x}");
            }
        }
        for k in g.target_range() {
            let tk = f(k, 2);
            for x in tk.patterns() {
                for mode in RoundingMode::STANDARD {
                    let direct = g.evaluate(x, mode).unwrap();
                    let via = round_bits(tk, mode, g.evaluate_rno(x.embed(g.tn).unwrap())).unwrap();
                    assert!(direct == via || (direct.is_nan() && via.is_nan()), "{x} {mode}");
                }
            }
        }
    }

    #[test]
    fn exp2_zero_is_exact() {
        let cfg = GenConfig::new(Func::Exp2, f(6, 3));
        let (g, _) = generate(&cfg).unwrap();
        for k in g.target_range() {
            for z in [f(k, 3).zero(false), f(k, 3).zero(true)] {
                let y = g.evaluate(z, RoundingMode::Rz).unwrap();
                assert_eq!(y.finite_value(), Some(int(1)));
            }
        }
    }

    #[test]
    fn saturating_runs_become_rules() {
        let cfg = GenConfig {
            rr: RangeReduction::Exp2Family,
            ..GenConfig::new(Func::Exp2, f(8, 3))
        };
        let (g, log) = generate(&cfg).unwrap();
        assert_eq!(g.rules.len(), 2);
        assert!(log.rule_inputs > 2);
        let big = g.tn.max_normal(false);
        assert_eq!(g.evaluate_rno(big), g.t2.max_normal(false));
        let tiny = g.tn.max_normal(true);
        assert_eq!(g.evaluate_rno(tiny).magnitude(), 1);
    }
}
