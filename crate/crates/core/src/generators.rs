//! Deterministic set generators and the compact spec grammar.
//!
//! ```text
//! SPEC := "ap:"INT":"INT | "beatty:"INT"/"INT | "bernoulli:"INT"/"INT":"INT
//!       | "list:"INT(","INT)* | "union:"SPEC"|"SPEC | "inter:"SPEC"|"SPEC
//!       | "shift:"INT":"SPEC | "neg:"SPEC | "compl:"SPEC
//! ```
//!
//! Combinators are prefix operators, so `union:ap:5:0|union:ap:5:1|ap:5:2`
//! parses as `union(ap:5:0, union(ap:5:1, ap:5:2))`.

use crate::error::{Error, ParseError, Result};
use crate::rational::{ratio, Rational};
use crate::set::{Interval, WindowSet};
use std::fmt;

pub const MAX_DEPTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    /// `{x : x ≡ residue (mod modulus)}`.
    Ap { modulus: i64, residue: i64 },
    /// `{floor(k·p/q) : k ∈ Z}`.
    Beatty { p: i64, q: i64 },
    /// Hash-thresholded pseudorandom set with pointwise rate `num/den`.
    Bernoulli { num: u64, den: u64, seed: u64 },
    List(Vec<i64>),
    Union(Box<SetSpec>, Box<SetSpec>),
    Intersect(Box<SetSpec>, Box<SetSpec>),
    Shift(i64, Box<SetSpec>),
    Negate(Box<SetSpec>),
    /// Complement relative to the materialization support.
    Complement(Box<SetSpec>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NominalDensity {
    pub value: Rational,
    /// `false` when `value` is a pointwise rate rather than the Banach density.
    pub exact: bool,
}

/// SplitMix64 finalizer.
pub fn mix64(v: u64) -> u64 {
    let mut v = v.wrapping_add(0x9E37_79B9_7F4A_7C15);
    v = (v ^ (v >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    v = (v ^ (v >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    v ^ (v >> 31)
}

pub fn bernoulli_member(num: u64, den: u64, seed: u64, x: i64) -> bool {
    mix64(seed ^ x as u64) % den < num
}

/// `∃k ∈ Z: floor(k·p/q) = x`, i.e. some multiple of `p` lies in `[x·q, x·q + q)`.
pub fn beatty_member(p: i64, q: i64, x: i64) -> bool {
    let (p, q, x) = (p as i128, q as i128, x as i128);
    let lo = x * q;
    let k = lo.div_euclid(p) + (lo.rem_euclid(p) != 0) as i128;
    k * p < lo + q
}

impl SetSpec {
    pub fn depth(&self) -> usize {
        match self {
            SetSpec::Ap { .. } | SetSpec::Beatty { .. } | SetSpec::Bernoulli { .. } | SetSpec::List(_) => 1,
            SetSpec::Union(a, b) | SetSpec::Intersect(a, b) => 1 + a.depth().max(b.depth()),
            SetSpec::Shift(_, c) | SetSpec::Negate(c) | SetSpec::Complement(c) => 1 + c.depth(),
        }
    }

    /// Replaces the seed of every Bernoulli leaf.
    pub fn with_seed(&self, seed: u64) -> SetSpec {
        let re = |c: &SetSpec| Box::new(c.with_seed(seed));
        match self {
            SetSpec::Bernoulli { num, den, .. } => SetSpec::Bernoulli {
                num: *num,
                den: *den,
                seed,
            },
            SetSpec::Union(a, b) => SetSpec::Union(re(a), re(b)),
            SetSpec::Intersect(a, b) => SetSpec::Intersect(re(a), re(b)),
            SetSpec::Shift(z, c) => SetSpec::Shift(*z, re(c)),
            SetSpec::Negate(c) => SetSpec::Negate(re(c)),
            SetSpec::Complement(c) => SetSpec::Complement(re(c)),
            leaf => leaf.clone(),
        }
    }

    /// Pointwise membership. Complement is relative to `support`.
    pub fn contains(&self, x: i64, support: &Interval) -> bool {
        match self {
            SetSpec::Ap { modulus, residue } => x.rem_euclid(*modulus) == *residue,
            SetSpec::Beatty { p, q } => beatty_member(*p, *q, x),
            SetSpec::Bernoulli { num, den, seed } => bernoulli_member(*num, *den, *seed, x),
            SetSpec::List(xs) => xs.contains(&x),
            SetSpec::Union(a, b) => a.contains(x, support) || b.contains(x, support),
            SetSpec::Intersect(a, b) => a.contains(x, support) && b.contains(x, support),
            SetSpec::Shift(z, c) => match (x.checked_sub(*z), support.shift(-*z)) {
                (Some(y), Ok(s)) => c.contains(y, &s),
                _ => false,
            },
            SetSpec::Negate(c) => match (x.checked_neg(), support.negate()) {
                (Some(y), Ok(s)) => c.contains(y, &s),
                _ => false,
            },
            SetSpec::Complement(c) => support.contains(x) && !c.contains(x, support),
        }
    }

    /// Deterministic materialization on `support`, built through the set algebra.
    pub fn materialize(&self, support: Interval) -> Result<WindowSet> {
        if self.depth() > MAX_DEPTH {
            return Err(Error::DepthExceeded(MAX_DEPTH));
        }
        self.build(support)
    }

    fn build(&self, support: Interval) -> Result<WindowSet> {
        match self {
            SetSpec::Ap { modulus, residue } => {
                let first = support.lo() + (residue - support.lo()).rem_euclid(*modulus);
                let mut elems = Vec::new();
                let mut x = first;
                while x <= support.hi() {
                    elems.push(x);
                    match x.checked_add(*modulus) {
                        Some(n) => x = n,
                        None => break,
                    }
                }
                WindowSet::from_elements(elems, support)
            }
            SetSpec::Beatty { p, q } => {
                WindowSet::from_predicate(support, |x| beatty_member(*p, *q, x))
            }
            SetSpec::Bernoulli { num, den, seed } => {
                WindowSet::from_predicate(support, |x| bernoulli_member(*num, *den, *seed, x))
            }
            SetSpec::List(xs) => WindowSet::from_elements(xs.iter().copied(), support),
            SetSpec::Union(a, b) => {
                let u = a.build(support)?.union(&b.build(support)?)?;
                u.restrict(&support)
            }
            SetSpec::Intersect(a, b) => Ok(a.build(support)?.intersection(&b.build(support)?)),
            SetSpec::Shift(z, c) => c.build(support.shift(-*z)?)?.shift(*z),
            SetSpec::Negate(c) => c.build(support.negate()?)?.negate(),
            SetSpec::Complement(c) => Ok(c.build(support)?.complement()),
        }
    }

    /// Density known from the structure of the spec, when there is one.
    pub fn nominal_density(&self) -> Option<NominalDensity> {
        let exact = |value| Some(NominalDensity { value, exact: true });
        match self {
            SetSpec::Ap { modulus, .. } => exact(ratio(1, *modulus)),
            // slope below one hits every integer
            SetSpec::Beatty { p, q } if p >= q => exact(ratio(*q, *p)),
            SetSpec::Beatty { .. } => exact(ratio(1, 1)),
            SetSpec::Bernoulli { num, den, .. } => Some(NominalDensity {
                value: ratio(*num as i64, *den as i64),
                exact: false,
            }),
            SetSpec::Shift(_, c) | SetSpec::Negate(c) => c.nominal_density(),
            _ => None,
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Ap { modulus, residue } => write!(f, "ap:{modulus}:{residue}"),
            SetSpec::Beatty { p, q } => write!(f, "beatty:{p}/{q}"),
            SetSpec::Bernoulli { num, den, seed } => write!(f, "bernoulli:{num}/{den}:{seed}"),
            SetSpec::List(xs) => {
                write!(f, "list:")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            SetSpec::Union(a, b) => write!(f, "union:{a}|{b}"),
            SetSpec::Intersect(a, b) => write!(f, "inter:{a}|{b}"),
            SetSpec::Shift(z, c) => write!(f, "shift:{z}:{c}"),
            SetSpec::Negate(c) => write!(f, "neg:{c}"),
            SetSpec::Complement(c) => write!(f, "compl:{c}"),
        }
    }
}

impl std::str::FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

pub fn parse_spec(text: &str) -> Result<SetSpec> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let spec = p.spec(1)?;
    if p.pos != p.src.len() {
        return Err(p.err("trailing input").into());
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> std::result::Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(format!("expected {lit:?}")))
        }
    }

    fn digits(&mut self) -> std::result::Result<&str, ParseError> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn int(&mut self) -> std::result::Result<i64, ParseError> {
        let start = self.pos;
        let s = self.digits()?;
        s.parse().map_err(|_| ParseError {
            pos: start,
            message: format!("integer {s} out of 64-bit range"),
        })
    }

    fn uint(&mut self) -> std::result::Result<u64, ParseError> {
        let start = self.pos;
        let s = self.digits()?;
        s.parse().map_err(|_| ParseError {
            pos: start,
            message: format!("{s} is not an unsigned 64-bit integer"),
        })
    }

    fn spec(&mut self, depth: usize) -> Result<SetSpec> {
        if depth > MAX_DEPTH {
            return Err(self.err(format!("nesting deeper than {MAX_DEPTH}")).into());
        }
        let start = self.pos;
        let semantic = |message: String| ParseError { pos: start, message };
        let child = |p: &mut Self| p.spec(depth + 1).map(Box::new);
        if self.eat("ap:") {
            let modulus = self.int()?;
            self.expect(":")?;
            let residue = self.int()?;
            if modulus < 1 {
                return Err(semantic(format!("modulus {modulus} must be >= 1")).into());
            }
            if !(0..modulus).contains(&residue) {
                return Err(semantic(format!("residue {residue} must lie in [0, {modulus})")).into());
            }
            Ok(SetSpec::Ap { modulus, residue })
        } else if self.eat("beatty:") {
            let p = self.int()?;
            self.expect("/")?;
            let q = self.int()?;
            if p < 1 || q < 1 {
                return Err(semantic(format!("slope {p}/{q} needs p, q >= 1")).into());
            }
            Ok(SetSpec::Beatty { p, q })
        } else if self.eat("bernoulli:") {
            let num = self.uint()?;
            self.expect("/")?;
            let den = self.uint()?;
            self.expect(":")?;
            let seed = self.uint()?;
            if den < 1 || num > den {
                return Err(semantic(format!("density {num}/{den} needs 0 <= num <= den, den >= 1")).into());
            }
            Ok(SetSpec::Bernoulli { num, den, seed })
        } else if self.eat("list:") {
            let mut xs = vec![self.int()?];
            while self.eat(",") {
                xs.push(self.int()?);
            }
            Ok(SetSpec::List(xs))
        } else if self.eat("union:") {
            let a = child(self)?;
            self.expect("|")?;
            Ok(SetSpec::Union(a, child(self)?))
        } else if self.eat("inter:") {
            let a = child(self)?;
            self.expect("|")?;
            Ok(SetSpec::Intersect(a, child(self)?))
        } else if self.eat("shift:") {
            let z = self.int()?;
            self.expect(":")?;
            Ok(SetSpec::Shift(z, child(self)?))
        } else if self.eat("neg:") {
            Ok(SetSpec::Negate(child(self)?))
        } else if self.eat("compl:") {
            Ok(SetSpec::Complement(child(self)?))
        } else {
            Err(self.err("expected one of ap:, beatty:, bernoulli:, list:, union:, inter:, shift:, neg:, compl:").into())
        }
    }
}
