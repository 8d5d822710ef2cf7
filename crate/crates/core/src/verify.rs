//! Certification: exhaustive correctness matrices for generated functions,
//! the round-to-odd double rounding property over complete sets of
//! rounding-class representatives, the bit-level round-to-odd properties, and the
//! search for same-mode double rounding failures.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{FPBits, FPFormat};
use crate::funcgen::{finish, finish_rno, Evaluation, GeneratedFunction};
use crate::oracle::{self, Outcome};
use crate::rational::{format_rational, int, mul_pow2, pow2, ratio, Rational};
use crate::rounding::{
    components, extended_bits, round, round_bits, round_from_components, RoundingComponents, RoundingMode,
};

/// Widest target format checked pattern by pattern.
pub const EXHAUSTIVE_BITS: u32 = 16;

/// Patterns drawn per target beyond the exhaustive bound.
const SAMPLED_PATTERNS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub x: String,
    pub got: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub k: u32,
    pub mode: RoundingMode,
    pub pass: bool,
    pub inputs: u64,
    pub fail_count: u64,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub function: String,
    pub tn: String,
    pub t2: String,
    pub h: String,
    pub exhaustive: bool,
    pub cells: Vec<Cell>,
    /// Inputs whose `T_{n+2}` result differs from the reference.
    pub rno_mismatches: u64,
    /// `(x, k, mode)` triples where rounding the H value and rounding the
    /// `T_{n+2}` result disagree.
    pub path_mismatches: u64,
    pub properties: Vec<PropertyResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
            && self.rno_mismatches == 0
            && self.path_mismatches == 0
            && self.properties.iter().all(|l| l.violations == 0)
    }

    pub fn mismatches(&self) -> u64 {
        self.cells.iter().map(|c| c.fail_count).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}  T_n = {}  T_n+2 = {}  H = {}", self.function, self.tn, self.t2, self.h)?;
        let modes: Vec<RoundingMode> = self
            .cells
            .iter()
            .map(|c| c.mode)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ks: BTreeSet<u32> = self.cells.iter().map(|c| c.k).collect();
        write!(f, "{:>4}", "k")?;
        for m in &modes {
            write!(f, "  {:>2}", m.name())?;
        }
        writeln!(f)?;
        for k in ks {
            write!(f, "{k:>4}")?;
            for m in &modes {
                let mark = match self.cells.iter().find(|c| c.k == k && c.mode == *m) {
                    Some(c) if c.pass => "✓",
                    Some(_) => "✗",
                    None => " ",
                };
                write!(f, "  {mark:>2}")?;
            }
            writeln!(f)?;
        }
        for c in self.cells.iter().filter(|c| !c.pass) {
            let w = c.first_counterexample.as_ref().unwrap();
            writeln!(
                f,
                "k={} {}: {} of {} wrong; x = {} gives {} instead of {}",
                c.k, c.mode, c.fail_count, c.inputs, w.x, w.got, w.expected
            )?;
        }
        writeln!(f, "round-to-odd mismatches: {}", self.rno_mismatches)?;
        writeln!(f, "rounding path mismatches: {}", self.path_mismatches)?;
        for l in &self.properties {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn same_result(a: FPBits, b: FPBits) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

/// Patterns of `tk` to check: all of them up to [`EXHAUSTIVE_BITS`],
/// otherwise an even stride plus every stored and boundary input.
fn inputs_for(g: &GeneratedFunction, tk: FPFormat) -> Vec<FPBits> {
    if tk.total_bits() <= EXHAUSTIVE_BITS {
        return tk.patterns().collect();
    }
    let count = 1u64 << tk.total_bits();
    let stride = count / SAMPLED_PATTERNS;
    let mut set: BTreeSet<u64> = (0..SAMPLED_PATTERNS).map(|i| i * stride).collect();
    let shift = g.tn.total_bits() - tk.total_bits();
    let low = (1u64 << shift) - 1;
    let mut add = |b: FPBits| {
        if b.bits() & low == 0 {
            set.insert(b.bits() >> shift);
        }
    };
    for x in g.singletons.keys() {
        add(FPBits::new(g.tn, *x));
    }
    for r in &g.rules {
        let (crate::funcgen::RangeRule::AtMost { x, .. } | crate::funcgen::RangeRule::AtLeast { x, .. }) = r;
        add(*x);
        add(x.succ().unwrap_or(*x));
        add(x.pred().unwrap_or(*x));
    }
    for b in [tk.quiet_nan(), tk.infinity(false), tk.infinity(true), tk.zero(true)] {
        set.insert(b.bits());
    }
    set.into_iter().map(|b| FPBits::new(tk, b)).collect()
}

/// Compares every requested `(k, mode)` cell against the reference.
pub fn check(g: &GeneratedFunction, ks: &[u32], modes: &[RoundingMode]) -> Result<VerificationReport> {
    let e = g.tn.exponent_bits();
    let tks: Vec<FPFormat> = ks
        .iter()
        .map(|&k| {
            let tk = FPFormat::new(k, e)?;
            g.check_target(tk)?;
            Ok(tk)
        })
        .collect::<Result<_>>()?;
    if let Some(m) = modes.iter().find(|m| **m == RoundingMode::Ro) {
        return Err(Error::Config(format!("mode {m} is not a checked mode")));
    }
    let per_k: Vec<Vec<FPBits>> = tks.iter().map(|&tk| inputs_for(g, tk)).collect();
    let exhaustive = tks.iter().all(|t| t.total_bits() <= EXHAUSTIVE_BITS);
    // One pipeline run and one reference evaluation per T_n pattern.
    let needed: BTreeSet<u64> = per_k
        .iter()
        .flatten()
        .map(|x| x.embed(g.tn).map(|b| b.bits()))
        .collect::<Result<_>>()?;
    let mut targets = tks.clone();
    targets.push(g.t2);
    let computed: Vec<(u64, Evaluation, Outcome)> = needed
        .par_iter()
        .map(|&bits| {
            let x = FPBits::new(g.tn, bits);
            Ok((bits, g.evaluate_h(x), oracle::outcome(g.func, x, &targets)?))
        })
        .collect::<Result<_>>()?;
    let rno_mismatches = computed
        .par_iter()
        .filter(|(_, ev, out)| {
            !same_result(finish_rno(ev, g.t2), out.round(tks.len(), g.t2, RoundingMode::Ro))
        })
        .count() as u64;
    let table: HashMap<u64, (Evaluation, Outcome)> =
        computed.into_iter().map(|(b, ev, out)| (b, (ev, out))).collect();
    let mut cells = Vec::new();
    let mut path_mismatches = 0;
    for (i, (&tk, xs)) in tks.iter().zip(&per_k).enumerate() {
        for &mode in modes {
            let results: Vec<(FPBits, FPBits, FPBits, bool)> = xs
                .par_iter()
                .map(|&x| {
                    let (ev, out) = &table[&x.embed(g.tn).unwrap().bits()];
                    let got = finish(ev, tk, mode);
                    let via = round_bits(tk, mode, finish_rno(ev, g.t2)).expect("wider format");
                    (x, got, out.round(i, tk, mode), same_result(got, via))
                })
                .collect();
            path_mismatches += results.iter().filter(|r| !r.3).count() as u64;
            let fails: Vec<_> = results.iter().filter(|r| !same_result(r.1, r.2)).collect();
            cells.push(Cell {
                k: tk.total_bits(),
                mode,
                pass: fails.is_empty(),
                inputs: xs.len() as u64,
                fail_count: fails.len() as u64,
                first_counterexample: fails.first().map(|r| Counterexample {
                    x: r.0.to_hex(),
                    got: r.1.to_hex(),
                    expected: r.2.to_hex(),
                }),
            });
        }
    }
    Ok(VerificationReport {
        function: g.func.name().to_string(),
        tn: g.tn.to_string(),
        t2: g.t2.to_string(),
        h: g.h.to_string(),
        exhaustive,
        cells,
        rno_mismatches,
        path_mismatches,
        properties: Vec::new(),
    })
}

/// Every target width and every standard mode.
pub fn check_all(g: &GeneratedFunction) -> Result<VerificationReport> {
    let ks: Vec<u32> = g.target_range().collect();
    check(g, &ks, &RoundingMode::STANDARD)
}

/// Runs [`check_all`] and records the verdict on the function.
pub fn certify(g: &mut GeneratedFunction) -> Result<VerificationReport> {
    let report = check_all(g)?;
    g.set_verified(report.all_pass());
    Ok(report)
}

/// Re-checks a reported counterexample from scratch.
pub fn confirm_counterexample(g: &GeneratedFunction, k: u32, mode: RoundingMode, w: &Counterexample) -> Result<bool> {
    let tk = FPFormat::new(k, g.tn.exponent_bits())?;
    let x = FPBits::from_hex(tk, &w.x)?;
    let got = g.evaluate(x, mode)?;
    let want = oracle::outcome(g.func, x, &[tk])?.round(0, tk, mode);
    Ok(!same_result(got, want) && got.to_hex() == w.got && want.to_hex() == w.expected)
}

/// Spacing above the finite magnitude `m`; the top binade's spacing for the
/// largest finite magnitude.
fn gap_above(t: FPFormat, m: u64) -> Rational {
    if m < t.max_normal_magnitude() {
        t.magnitude_value(m + 1) - t.magnitude_value(m)
    } else {
        t.magnitude_value(m) - t.magnitude_value(m - 1)
    }
}

/// One value from every rounding class of `t`: for each finite `w`, the
/// points `w`, `w + g/4`, `w + g/2`, `w + 3g/4` (`g` the gap above `w`) with
/// both signs, plus values past the overflow threshold.
pub fn class_representatives(t: FPFormat) -> Vec<Rational> {
    let mut out = Vec::new();
    for m in 0..=t.max_normal_magnitude() {
        let w = t.magnitude_value(m);
        let q = gap_above(t, m) / int(4);
        for i in 0..4 {
            let v = &w + &q * int(i);
            if !v.is_zero() {
                out.push(-v.clone());
            }
            out.push(v);
        }
    }
    let top = pow2(t.emax() + 1);
    let q = gap_above(t, t.max_normal_magnitude()) / int(4);
    for v in [top.clone(), &top + &q, &top * int(3) / int(2), &top * int(4), &top * int(1 << 20)] {
        out.push(-v.clone());
        out.push(v);
    }
    out
}

/// Number of distinct `(sign, v⁻, rb, sticky)` classes real values realise:
/// four per finite magnitude and sign, less the exact negative zero.
pub fn realizable_classes(t: FPFormat) -> usize {
    8 * (t.max_normal_magnitude() as usize + 1) - 1
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundingWitness {
    pub v: String,
    pub k: u32,
    pub mode: RoundingMode,
    pub direct: String,
    pub via: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub t2: String,
    pub ks: Vec<u32>,
    pub representatives: usize,
    pub distinct_classes: usize,
    pub realizable_classes: usize,
    pub checks: u64,
    pub violations: u64,
    pub witnesses: Vec<RoundingWitness>,
}

impl CompositionReport {
    pub fn pass(&self) -> bool {
        self.violations == 0 && self.distinct_classes == self.realizable_classes
    }
}

fn check_family(t2: FPFormat, ks: &[u32]) -> Result<Vec<FPFormat>> {
    let e = t2.exponent_bits();
    let n = t2.total_bits().checked_sub(2).filter(|n| *n > e + 1).ok_or_else(|| {
        Error::Config(format!("{t2} leaves no room for narrower targets"))
    })?;
    ks.iter()
        .map(|&k| {
            if k <= e + 1 || k > n {
                return Err(Error::TargetFormat { k, n, ebits: e });
            }
            FPFormat::new(k, e)
        })
        .collect()
}

/// Rounding the round-to-odd result in `t2` to any `T_k` (`k <= n`) with any
/// standard mode equals rounding the real value directly, checked on every
/// rounding class of `t2`.
pub fn check_odd_composition(t2: FPFormat, ks: &[u32]) -> Result<CompositionReport> {
    let tks = check_family(t2, ks)?;
    let reps = class_representatives(t2);
    let classes: HashSet<RoundingComponents> = reps.par_iter().map(|v| components(t2, v)).collect();
    let witnesses: Vec<RoundingWitness> = reps
        .par_iter()
        .flat_map_iter(|v| {
            let ro = round(t2, RoundingMode::Ro, v);
            let mut bad = Vec::new();
            for &tk in &tks {
                let c = components(tk, v);
                for mode in RoundingMode::STANDARD {
                    let direct = round_from_components(tk, mode, &c);
                    let via = round_bits(tk, mode, ro).expect("wider format");
                    if direct != via {
                        bad.push(RoundingWitness {
                            v: format_rational(v),
                            k: tk.total_bits(),
                            mode,
                            direct: direct.to_hex(),
                            via: via.to_hex(),
                        });
                    }
                }
            }
            bad
        })
        .collect();
    Ok(CompositionReport {
        t2: t2.to_string(),
        ks: ks.to_vec(),
        representatives: reps.len(),
        distinct_classes: classes.len(),
        realizable_classes: realizable_classes(t2),
        checks: (reps.len() * tks.len() * RoundingMode::STANDARD.len()) as u64,
        violations: witnesses.len() as u64,
        witnesses: witnesses.into_iter().take(16).collect(),
    })
}

/// A real value `v` with `round(target, mode, round(mid, mid_mode, v))`
/// different from `round(target, mode, v)`. Every rounding class of `mid` is
/// tried; since `mid` holds every boundary of `target`, this is exhaustive.
pub fn find_double_rounding_bug(
    mid: FPFormat,
    mid_mode: RoundingMode,
    target: FPFormat,
    mode: RoundingMode,
) -> Result<Option<Rational>> {
    if mid.exponent_bits() != target.exponent_bits() || mid.total_bits() <= target.total_bits() {
        return Err(Error::Config(format!("{mid} is not a strictly wider sibling of {target}")));
    }
    Ok(class_representatives(mid).into_par_iter().find_first(|v| {
        let once = round(target, mode, v);
        let twice = round_bits(target, mode, round(mid, mid_mode, v)).expect("wider format");
        once != twice
    }))
}

/// Same-mode double rounding through `mid`.
pub fn find_naive_double_rounding_bug(
    mid: FPFormat,
    target: FPFormat,
    mode: RoundingMode,
) -> Result<Option<Rational>> {
    find_double_rounding_bug(mid, mode, target, mode)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub property: &'static str,
    pub formats: usize,
    pub samples: u64,
    pub violations: u64,
    pub witness: Option<String>,
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}): {} samples over {} formats, {} violations",
            self.name, self.property, self.samples, self.formats, self.violations
        )?;
        if let Some(w) = &self.witness {
            write!(f, "; first at {w}")?;
        }
        Ok(())
    }
}

/// Every valid format with at most `max_n` bits.
pub fn small_formats(max_n: u32) -> Vec<FPFormat> {
    (2..max_n)
        .flat_map(|e| (e + 2..=max_n).filter_map(move |n| FPFormat::new(n, e).ok()))
        .collect()
}

/// Random rational spanning the subnormal range through past overflow, with
/// dyadic and non-dyadic denominators.
pub fn random_rational(t: FPFormat, rng: &mut impl Rng) -> Rational {
    let num: i64 = rng.gen_range(1..1i64 << 48);
    let den: i64 = if rng.gen_bool(0.5) {
        1i64 << rng.gen_range(0..48)
    } else {
        rng.gen_range(1..1i64 << 32) | 1
    };
    let lo = t.emin() - t.mantissa_bits() as i64 - 6;
    let s = rng.gen_range(lo..=t.emax() + 4);
    let v = mul_pow2(&ratio(num, den), s - 48 + 32);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

fn pattern_bits(b: FPBits) -> Vec<bool> {
    let n = b.format().total_bits();
    (0..n).rev().map(|i| (b.bits() >> i) & 1 == 1).collect()
}

/// Sign, prefix and sticky-bit properties of the round-to-odd result of `v`.
fn bit_properties(t: FPFormat, v: &Rational) -> [bool; 3] {
    let r = round(t, RoundingMode::Ro, v);
    let l1 = v.is_zero() || (r.is_negative() == v.is_negative() && !r.is_zero());
    let len = t.total_bits() as usize - 1;
    let ext = extended_bits(t, v, len);
    let bits = pattern_bits(r);
    let l2 = bits[..len] == ext.prefix[..];
    let l3 = bits[len] == ext.tail_nonzero;
    [l1, l2, l3]
}

/// A uniformly placed value sharing `c`'s rounding class.
fn same_class_sample(t: FPFormat, c: &RoundingComponents, rng: &mut impl Rng) -> Rational {
    let lower = c.v_minus.finite_value().unwrap();
    let gap = gap_above(t, c.v_minus.magnitude());
    let half = &gap / int(2);
    let u = ratio(rng.gen_range(1..1i64 << 40), 1i64 << 40);
    let mag = match (c.rb, c.sticky) {
        (false, false) => lower,
        (true, false) => &lower + &half,
        (false, true) => &lower + &half * u,
        (true, true) => {
            let top = pow2(t.emax() + 1);
            if lower.clone() + &gap == top && rng.gen_bool(0.25) {
                // the top class continues past the overflow threshold
                &top * (int(1) + int(rng.gen_range(0..1 << 20)))
            } else {
                &lower + &half + &half * u
            }
        }
    };
    if c.negative {
        -mag
    } else {
        mag
    }
}

/// The first three properties on `random` values per format plus every class
/// representative, and class invariance on `pairs` same-class pairs per format.
pub fn check_rounding_properties(formats: &[FPFormat], random: usize, pairs: usize, seed: u64) -> Vec<PropertyResult> {
    struct Tally {
        samples: [u64; 4],
        violations: [u64; 4],
        witness: [Option<String>; 4],
    }
    let per_format: Vec<Tally> = formats
        .par_iter()
        .enumerate()
        .map(|(fi, &t)| {
            let mut tally = Tally {
                samples: [0; 4],
                violations: [0; 4],
                witness: Default::default(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((fi as u64) << 32));
            let mut values = class_representatives(t);
            values.extend((0..random).map(|_| random_rational(t, &mut rng)));
            let note = |tally: &mut Tally, i: usize, ok: bool, what: &dyn Fn() -> String| {
                tally.samples[i] += 1;
                if !ok {
                    tally.violations[i] += 1;
                    if tally.witness[i].is_none() {
                        tally.witness[i] = Some(format!("{t}: {}", what()));
                    }
                }
            };
            for v in &values {
                let r = bit_properties(t, v);
                for (i, ok) in r.into_iter().enumerate() {
                    note(&mut tally, i, ok, &|| format_rational(v));
                }
            }
            for _ in 0..pairs {
                let v = random_rational(t, &mut rng);
                let c = components(t, &v);
                let w = same_class_sample(t, &c, &mut rng);
                let ok = components(t, &w) == c
                    && RoundingMode::ALL.iter().all(|&m| round(t, m, &v) == round(t, m, &w));
                note(&mut tally, 3, ok, &|| format!("{} ~ {}", format_rational(&v), format_rational(&w)));
            }
            tally
        })
        .collect();
    let ids = ["sign", "prefix", "sticky", "class"];
    let names = [
        "round-to-odd keeps the sign",
        "leading bits match the exact value",
        "last bit is the OR of the remaining bits",
        "equal components round alike",
    ];
    (0..4)
        .map(|i| PropertyResult {
            name: ids[i],
            property: names[i],
            formats: formats.len(),
            samples: per_format.iter().map(|t| t.samples[i]).sum(),
            violations: per_format.iter().map(|t| t.violations[i]).sum(),
            witness: per_format.iter().find_map(|t| t.witness[i].clone()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgen::{generate, GenConfig};
    use crate::oracle::Func;

    fn f(n: u32, e: u32) -> FPFormat {
        FPFormat::new(n, e).unwrap()
    }

    #[test]
    fn representatives_cover_every_class() {
        for t in [f(5, 2), f(7, 2), f(8, 3)] {
            let reps = class_representatives(t);
            let classes: HashSet<_> = reps.iter().map(|v| components(t, v)).collect();
            assert_eq!(classes.len(), realizable_classes(t), "{t}");
        }
    }

    #[test]
    fn odd_composition_instance_holds() {
        let r = check_odd_composition(f(7, 2), &[4, 5]).unwrap();
        assert!(r.pass(), "{:?}", r.witnesses);
        assert!(check_odd_composition(f(7, 2), &[6]).is_err());
        assert!(check_odd_composition(f(7, 2), &[3]).is_err());
    }

    #[test]
    fn naive_double_rounding_fails_and_odd_does_not() {
        let v = find_naive_double_rounding_bug(f(9, 3), f(7, 3), RoundingMode::Rn).unwrap().unwrap();
        let once = round(f(7, 3), RoundingMode::Rn, &v);
        let twice = round_bits(f(7, 3), RoundingMode::Rn, round(f(9, 3), RoundingMode::Rn, &v)).unwrap();
        assert_ne!(once, twice);
        for mode in RoundingMode::STANDARD {
            assert_eq!(find_double_rounding_bug(f(9, 3), RoundingMode::Ro, f(7, 3), mode).unwrap(), None);
        }
        assert_eq!(find_naive_double_rounding_bug(f(9, 3), f(7, 3), RoundingMode::Rz).unwrap(), None);
        assert!(find_naive_double_rounding_bug(f(7, 3), f(7, 3), RoundingMode::Rn).is_err());
    }

    #[test]
    fn bit_property_examples() {
        let t = f(7, 2);
        let r = round(t, RoundingMode::Ro, &ratio(-3, 10));
        assert!(r.is_negative());
        for b in crate::formats::enumerate_finite(t, |_| true) {
            let v = b.finite_value().unwrap();
            let [l1, l2, l3] = bit_properties(t, &v);
            assert!(l1 && l2 && l3);
            assert_eq!(round(t, RoundingMode::Ro, &v).is_odd(), b.is_odd());
        }
        let res = check_rounding_properties(&[f(6, 2), f(8, 3)], 2000, 500, 7);
        assert!(res.iter().all(|l| l.violations == 0), "{res:?}");
    }

    #[test]
    fn worked_example_verifies_and_mutation_is_caught() {
        let mut cfg = GenConfig::new(Func::Ln, f(5, 2));
        cfg.max_degree = 4;
        cfg.max_pieces = 1;
        let (mut g, _) = generate(&cfg).unwrap();
        let report = certify(&mut g).unwrap();
        assert!(report.all_pass(), "{report}");
        assert!(g.is_verified());
        assert_eq!(report.cells.len(), 10);

        let subset = check(&g, &[5], &[RoundingMode::Rn, RoundingMode::Rz]).unwrap();
        assert_eq!(subset.cells.len(), 2);

        let base = g.poly.pieces[0].coeffs_h[0].clone();
        let mut found = false;
        for j in 0..64i64 {
            let mut m = g.clone();
            m.poly.pieces[0].coeffs_h[0] = crate::hfloat::rn_finite(g.h, &(&base + pow2(j - 60)));
            let r = check_all(&m).unwrap();
            if let Some(c) = r.cells.iter().find(|c| !c.pass) {
                let w = c.first_counterexample.as_ref().unwrap();
                assert!(confirm_counterexample(&m, c.k, c.mode, w).unwrap());
                found = true;
                break;
            }
        }
        assert!(found);
    }
}
