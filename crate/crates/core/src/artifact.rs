//! Versioned text artifact for a generated function.
//!
//! ```text
//! oddlibm-artifact v1
//! func ln
//! target 5 2
//! rno 7 2
//! eval 64 11
//! reduction identity
//! constant 1 0x3ff0000000000000
//! index pattern 5 2 0 11 0
//! pieces 1
//! piece 0 0 1 2 3 4
//! coeff <rational> <H hex>
//! ...
//! special nan nan
//! singleton <T_n hex> <T_{n+2} hex>
//! rule le <T_n hex> <T_{n+2} hex>
//! end
//! ```
//!
//! Coefficients and the reduction constant are stored both as exact
//! rationals and as H patterns; the H pattern is what evaluation uses.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::formats::{FPBits, FPFormat};
use crate::funcgen::{parse_special, special_name, GeneratedFunction, RangeRule, SpecialClass};
use crate::oracle::Func;
use crate::polygen::{IndexRule, PiecewisePolynomial, PolynomialSpec};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reduction::{Compensator, RangeReduction};

pub const HEADER: &str = "oddlibm-artifact v1";

fn h_hex(h: FPFormat, v: &Rational) -> String {
    FPBits::encode_exact(h, v).expect("H value").to_hex()
}

pub fn to_text(g: &GeneratedFunction) -> String {
    let h = g.h;
    let mut o = String::new();
    let fmt = |f: FPFormat| format!("{} {}", f.total_bits(), f.exponent_bits());
    writeln!(o, "{HEADER}").unwrap();
    writeln!(o, "func {}", g.func).unwrap();
    writeln!(o, "target {}", fmt(g.tn)).unwrap();
    writeln!(o, "rno {}", fmt(g.t2)).unwrap();
    writeln!(o, "eval {}", fmt(h)).unwrap();
    writeln!(o, "reduction {}", g.comp.rr).unwrap();
    writeln!(o, "constant {} {}", format_rational(&g.comp.k_h), h_hex(h, &g.comp.k_h)).unwrap();
    writeln!(o, "index {}", g.poly.rule).unwrap();
    writeln!(o, "pieces {}", g.poly.pieces.len()).unwrap();
    for (i, p) in g.poly.pieces.iter().enumerate() {
        let powers: Vec<String> = p.powers.iter().map(u32::to_string).collect();
        writeln!(o, "piece {i} {}", powers.join(" ")).unwrap();
        for (e, c) in p.coeffs_exact.iter().zip(&p.coeffs_h) {
            writeln!(o, "coeff {} {}", format_rational(e), h_hex(h, c)).unwrap();
        }
    }
    for (c, s) in &g.specials {
        writeln!(o, "special {} {}", c.name(), special_name(*s)).unwrap();
    }
    for (x, y) in &g.singletons {
        writeln!(o, "singleton {} {}", FPBits::new(g.tn, *x).to_hex(), y.to_hex()).unwrap();
    }
    for r in &g.rules {
        let (kind, x, y) = match r {
            RangeRule::AtMost { x, y } => ("le", x, y),
            RangeRule::AtLeast { x, y } => ("ge", x, y),
        };
        writeln!(o, "rule {kind} {} {}", x.to_hex(), y.to_hex()).unwrap();
    }
    writeln!(o, "end").unwrap();
    o
}

pub fn save(g: &GeneratedFunction, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(g))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<GeneratedFunction> {
    from_text(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn peek_key(&mut self) -> Option<&'a str> {
        while let Some((_, l)) = self.inner.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.inner.next();
                continue;
            }
            return t.split_whitespace().next();
        }
        None
    }

    /// Fields after the expected key.
    fn expect(&mut self, key: &str) -> Result<Vec<&'a str>> {
        self.peek_key();
        let (no, line) = self
            .inner
            .next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of artifact, expected `{key}`")))?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(Error::Parse(format!("line {}: expected `{key}`, found `{}`", no + 1, line.trim())));
        }
        Ok(parts.collect())
    }
}

fn arity<'a>(key: &str, v: Vec<&'a str>, n: usize) -> Result<Vec<&'a str>> {
    if v.len() == n {
        Ok(v)
    } else {
        Err(Error::Parse(format!("`{key}` takes {n} fields, found {}", v.len())))
    }
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("invalid number `{s}`")))
}

fn format_line(l: &mut Lines<'_>, key: &str) -> Result<FPFormat> {
    let v = arity(key, l.expect(key)?, 2)?;
    FPFormat::new(num(v[0])?, num(v[1])?)
}

fn h_value(h: FPFormat, hex: &str) -> Result<Rational> {
    FPBits::from_hex(h, hex)?
        .finite_value()
        .ok_or_else(|| Error::Parse(format!("`{hex}` is not a finite H value")))
}

fn parse_index(v: &[&str]) -> Result<IndexRule> {
    match v {
        ["uniform", lo, hi, bits] => Ok(IndexRule::Uniform {
            lo: parse_rational(lo)?,
            hi: parse_rational(hi)?,
            bits: num(bits)?,
        }),
        ["pattern", n, e, base, width, bits] => Ok(IndexRule::PatternSlices {
            key_format: FPFormat::new(num(n)?, num(e)?)?,
            base: num(base)?,
            width: num(width)?,
            bits: num(bits)?,
        }),
        _ => Err(Error::Parse(format!("invalid index rule `{}`", v.join(" ")))),
    }
}

pub fn from_text(text: &str) -> Result<GeneratedFunction> {
    let mut l = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    l.peek_key();
    match l.inner.next() {
        Some((_, line)) if line.trim() == HEADER => {}
        _ => return Err(Error::Parse(format!("missing `{HEADER}` header"))),
    }
    let func: Func = arity("func", l.expect("func")?, 1)?[0].parse()?;
    let tn = format_line(&mut l, "target")?;
    let t2 = format_line(&mut l, "rno")?;
    if tn.widened(2)? != t2 {
        return Err(Error::Parse(format!("{t2} is not two bits wider than {tn}")));
    }
    let h = format_line(&mut l, "eval")?;
    let rr: RangeReduction = arity("reduction", l.expect("reduction")?, 1)?[0].parse()?;
    let c = arity("constant", l.expect("constant")?, 2)?;
    parse_rational(c[0])?;
    let comp = Compensator {
        rr,
        h,
        k_h: h_value(h, c[1])?,
    };
    let rule = parse_index(&l.expect("index")?)?;
    let count: usize = num(arity("pieces", l.expect("pieces")?, 1)?[0])?;
    if count != rule.pieces() {
        return Err(Error::Parse(format!("{count} pieces listed for a {}-piece index", rule.pieces())));
    }
    let mut pieces = Vec::with_capacity(count);
    for i in 0..count {
        let v = l.expect("piece")?;
        if v.first().map(|s| num::<usize>(s)).transpose()? != Some(i) {
            return Err(Error::Parse(format!("piece {i} out of order")));
        }
        let powers = v[1..].iter().map(|s| num(s)).collect::<Result<Vec<u32>>>()?;
        let mut coeffs_exact = Vec::new();
        let mut coeffs_h = Vec::new();
        for _ in &powers {
            let c = arity("coeff", l.expect("coeff")?, 2)?;
            coeffs_exact.push(parse_rational(c[0])?);
            coeffs_h.push(h_value(h, c[1])?);
        }
        pieces.push(PolynomialSpec {
            powers,
            coeffs_exact,
            coeffs_h,
        });
    }
    let mut specials = BTreeMap::new();
    let mut singletons = BTreeMap::new();
    let mut rules = Vec::new();
    loop {
        match l.peek_key() {
            Some("special") => {
                let v = arity("special", l.expect("special")?, 2)?;
                specials.insert(v[0].parse::<SpecialClass>()?, parse_special(v[1])?);
            }
            Some("singleton") => {
                let v = arity("singleton", l.expect("singleton")?, 2)?;
                let x = FPBits::from_hex(tn, v[0])?;
                singletons.insert(x.bits(), FPBits::from_hex(t2, v[1])?);
            }
            Some("rule") => {
                let v = arity("rule", l.expect("rule")?, 3)?;
                let x = FPBits::from_hex(tn, v[1])?;
                let y = FPBits::from_hex(t2, v[2])?;
                if !x.is_finite() {
                    return Err(Error::Parse(format!("rule bound `{}` is not finite", v[1])));
                }
                rules.push(match v[0] {
                    "le" => RangeRule::AtMost { x, y },
                    "ge" => RangeRule::AtLeast { x, y },
                    k => return Err(Error::Parse(format!("unknown rule kind `{k}`"))),
                });
            }
            Some("end") => {
                l.expect("end")?;
                break;
            }
            Some(k) => return Err(Error::Parse(format!("unexpected `{k}`"))),
            None => return Err(Error::Parse("artifact has no `end` line".into())),
        }
    }
    if l.peek_key().is_some() {
        return Err(Error::Parse("content after `end`".into()));
    }
    GeneratedFunction::new(
        func,
        tn,
        h,
        comp,
        PiecewisePolynomial { rule, pieces },
        specials,
        singletons,
        rules,
    )
}
