//! Exact rationals, the extended ray `[0, ∞]`, and finite unions of intervals
//! of that ray.
//!
//! A [`RatioSet`] is kept in canonical form: intervals sorted by left endpoint,
//! pairwise disjoint, and never mergeable. Any combination of open and closed
//! endpoints is representable so that complements stay inside the type;
//! [`RatioSet::is_admissible`] reports whether a set is a finite union of the
//! shapes `[0,x)`, `(x,y)` and `(y,∞]`, i.e. whether it is open in `[0, ∞]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rat = BigRational;

/// Builds `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`.
pub fn parse_rat(src: &str) -> Result<Rat> {
    let s = src.trim();
    if s.is_empty() {
        return Err(Error::parse(0, "expected a rational number"));
    }
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad numerator in `{s}`")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad denominator in `{s}`")))?;
            if d.is_zero() {
                return Err(Error::parse(0, format!("zero denominator in `{s}`")));
            }
            Rat::new(n, d)
        }
        None => Rat::from_integer(
            s.parse()
                .map_err(|_| Error::parse(0, format!("`{s}` is not a rational number")))?,
        ),
    };
    Ok(parsed)
}

/// A value of the extended positive ray: a nonnegative rational or `∞`.
///
/// The derived order puts every finite value below `Inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRat {
    Fin(Rat),
    Inf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Fin(Rat::zero())
    }

    /// Wraps a nonnegative rational.
    pub fn fin(q: Rat) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::validation(format!(
                "{q} is negative; the ray only holds nonnegative values"
            )));
        }
        Ok(ExtRat::Fin(q))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(q) if q.is_zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Fin(q) => Some(q),
            ExtRat::Inf => None,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(q: Rat) -> Self {
        ExtRat::Fin(q)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(q) => write!(f, "{q}"),
            ExtRat::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtRat::Inf),
            other => ExtRat::fin(parse_rat(other)?),
        }
    }
}

/// `x⁻¹y` for a nonzero pair of nonnegative rationals, with `0⁻¹y = ∞`.
/// Returns `None` for the pair `(0, 0)` or for negative input.
pub fn ratio(x: &Rat, y: &Rat) -> Option<ExtRat> {
    if x.is_negative() || y.is_negative() {
        return None;
    }
    if x.is_zero() {
        return if y.is_zero() { None } else { Some(ExtRat::Inf) };
    }
    Some(ExtRat::Fin(y / x))
}

/// One interval of `[0, ∞]` with explicit endpoint closedness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ExtRat,
    pub lo_closed: bool,
    pub hi: ExtRat,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: ExtRat, lo_closed: bool, hi: ExtRat, hi_closed: bool) -> Self {
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    /// `[0, x)`
    pub fn initial(x: ExtRat) -> Self {
        Interval::new(ExtRat::zero(), true, x, false)
    }

    /// `(x, y)`
    pub fn open(x: ExtRat, y: ExtRat) -> Self {
        Interval::new(x, false, y, false)
    }

    /// `(y, ∞]`
    pub fn final_from(y: ExtRat) -> Self {
        Interval::new(y, false, ExtRat::Inf, true)
    }

    /// `[0, ∞]`
    pub fn full() -> Self {
        Interval::new(ExtRat::zero(), true, ExtRat::Inf, true)
    }

    pub fn point(x: ExtRat) -> Self {
        Interval::new(x.clone(), true, x, true)
    }

    fn validate(&self) -> Result<()> {
        for e in [&self.lo, &self.hi] {
            if let ExtRat::Fin(q) = e {
                if q.is_negative() {
                    return Err(Error::validation(format!("negative endpoint {q} in {self}")));
                }
            }
        }
        if self.lo > self.hi {
            return Err(Error::validation(format!(
                "malformed interval {self}: left endpoint exceeds right endpoint"
            )));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn contains(&self, t: &ExtRat) -> bool {
        let above = match t.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match t.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub(crate) fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// Open in the topology of `[0, ∞]`: closed ends only at `0` and `∞`.
    fn is_open_in_ray(&self) -> bool {
        (!self.lo_closed || self.lo.is_zero()) && (!self.hi_closed || self.hi.is_inf())
    }

    /// A rational point strictly inside, or the point itself for singletons.
    pub fn sample(&self) -> ExtRat {
        match (&self.lo, &self.hi) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => {
                if self.lo_closed {
                    ExtRat::Fin(a.clone())
                } else if self.hi_closed {
                    ExtRat::Fin(b.clone())
                } else {
                    ExtRat::Fin((a + b) / int(2))
                }
            }
            (ExtRat::Fin(a), ExtRat::Inf) => {
                if self.lo_closed {
                    ExtRat::Fin(a.clone())
                } else {
                    ExtRat::Fin(a + Rat::one())
                }
            }
            (ExtRat::Inf, _) => ExtRat::Inf,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let lo_closed = match chars.next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(Error::parse(0, format!("interval `{s}` must start with [ or ("))),
        };
        let hi_closed = match s.chars().last() {
            Some(']') if s.len() > 1 => true,
            Some(')') if s.len() > 1 => false,
            _ => {
                return Err(Error::parse(
                    s.len(),
                    format!("interval `{s}` must end with ] or )"),
                ))
            }
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::parse(1, format!("interval `{s}` needs two endpoints")))?;
        let iv = Interval::new(a.parse()?, lo_closed, b.parse()?, hi_closed);
        iv.validate()?;
        Ok(iv)
    }
}

/// A finite union of intervals of `[0, ∞]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatioSet {
    intervals: Vec<Interval>,
}

impl RatioSet {
    pub fn empty() -> Self {
        RatioSet::default()
    }

    pub fn full() -> Self {
        RatioSet {
            intervals: vec![Interval::full()],
        }
    }

    /// `[0, x)`
    pub fn initial(x: Rat) -> Self {
        RatioSet::normalize(&[Interval::initial(ExtRat::Fin(x))]).expect("valid initial interval")
    }

    /// Canonicalizes an arbitrary list of intervals.
    pub fn normalize(raw: &[Interval]) -> Result<Self> {
        let mut items = Vec::with_capacity(raw.len());
        for iv in raw {
            iv.validate()?;
            if !iv.is_empty() {
                items.push(iv.clone());
            }
        }
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            if let Some(last) = out.last_mut() {
                let touches = match iv.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => last.hi_closed || iv.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match iv.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = iv.hi;
                            last.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        Ok(RatioSet { intervals: out })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: &ExtRat) -> bool {
        self.intervals.iter().any(|iv| iv.contains(t))
    }

    pub fn union(&self, other: &RatioSet) -> RatioSet {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        RatioSet::normalize(&all).expect("canonical inputs")
    }

    pub fn intersect(&self, other: &RatioSet) -> RatioSet {
        let mut all = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let c = a.intersect(b);
                if !c.is_empty() {
                    all.push(c);
                }
            }
        }
        RatioSet::normalize(&all).expect("canonical inputs")
    }

    /// Complement inside `[0, ∞]`.
    pub fn complement(&self) -> RatioSet {
        let mut gaps = Vec::new();
        let mut cursor = (ExtRat::zero(), true);
        for iv in &self.intervals {
            gaps.push(Interval::new(
                cursor.0.clone(),
                cursor.1,
                iv.lo.clone(),
                !iv.lo_closed,
            ));
            cursor = (iv.hi.clone(), !iv.hi_closed);
        }
        gaps.push(Interval::new(cursor.0, cursor.1, ExtRat::Inf, true));
        let gaps: Vec<_> = gaps
            .into_iter()
            .filter(|g| g.lo <= g.hi && !g.is_empty())
            .collect();
        RatioSet::normalize(&gaps).expect("gaps are well formed")
    }

    pub fn is_subset(&self, other: &RatioSet) -> bool {
        self.intersect(&other.complement()).is_empty()
    }

    /// Whether the set is a finite union of `[0,x)`, `(x,y)`, `(y,∞]`.
    pub fn is_admissible(&self) -> bool {
        self.intervals.iter().all(Interval::is_open_in_ray)
    }

    /// `Some(z)` exactly when the set is `[0, z)` with `0 < z < ∞`.
    pub fn is_initial(&self) -> Option<Rat> {
        match self.intervals.as_slice() {
            [iv] if iv.lo.is_zero() && iv.lo_closed && !iv.hi_closed => match &iv.hi {
                ExtRat::Fin(z) if z.is_positive() => Some(z.clone()),
                _ => None,
            },
            _ => None,
        }
    }

    /// True when every finite value lies in the set.
    pub fn contains_finite_ray(&self) -> bool {
        matches!(self.intervals.first(),
            Some(iv) if iv.lo.is_zero() && iv.lo_closed && iv.hi.is_inf())
    }

    /// True when the set is contained in some `[0, M]` with `M` finite.
    pub fn is_bounded(&self) -> bool {
        self.intervals.last().map_or(true, |iv| !iv.hi.is_inf())
    }

    /// Every endpoint that occurs, in increasing order without repeats.
    pub fn endpoints(&self) -> Vec<ExtRat> {
        let mut pts: Vec<ExtRat> = self
            .intervals
            .iter()
            .flat_map(|iv| [iv.lo.clone(), iv.hi.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for RatioSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{iv}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for RatioSet {
    type Err = Error;

    /// Accepts `{I, J, ...}` or a single bare interval.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let body = if let Some(inner) = t.strip_prefix('{') {
            inner
                .strip_suffix('}')
                .ok_or_else(|| Error::parse(t.len(), "unterminated `{`"))?
        } else {
            t
        };
        let mut raw = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices() {
            match ch {
                '[' | '(' if start.is_none() => start = Some(pos),
                ']' | ')' => {
                    let from = start
                        .take()
                        .ok_or_else(|| Error::parse(pos, "interval closed before it opened"))?;
                    raw.push(body[from..=pos].parse::<Interval>()?);
                }
                ',' | ' ' | '\t' | '\n' => {}
                _ if start.is_some() => {}
                other => return Err(Error::parse(pos, format!("unexpected `{other}`"))),
            }
        }
        if start.is_some() {
            return Err(Error::parse(body.len(), "unterminated interval"));
        }
        RatioSet::normalize(&raw)
    }
}
