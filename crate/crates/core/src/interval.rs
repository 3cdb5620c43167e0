//! Exact algebra of subsets of the real line.
//!
//! An [`IntervalSet`] is a finite union of pairwise disjoint, non-adjacent
//! intervals with rational endpoints, each endpoint either open or closed.
//! Sets are kept in a canonical form so that structural equality coincides
//! with equality of the underlying point sets.
//!
//! Internally a set is stored as a strictly increasing list of *cuts*. A cut
//! sits either just below or just above a rational number (or at ±∞), and a
//! set is the union of the half-open cut ranges `[c0, c1), [c2, c3), ...`.
//! A closed lower endpoint `a` is the cut just below `a`, an open one is the
//! cut just above it; upper endpoints mirror this. With this encoding every
//! Boolean operation is a single merge pass over two sorted lists.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Conversion into an exact endpoint value.
pub trait IntoRational {
    fn into_rational(self) -> Rational;
}

impl IntoRational for Rational {
    fn into_rational(self) -> Rational {
        self
    }
}

impl IntoRational for &Rational {
    fn into_rational(self) -> Rational {
        self.clone()
    }
}

macro_rules! int_into_rational {
    ($($t:ty),*) => {$(
        impl IntoRational for $t {
            fn into_rational(self) -> Rational {
                Rational::from_integer(BigInt::from(self))
            }
        }
    )*};
}

int_into_rational!(i32, i64, u32, u64, usize);

/// Parses a decimal rational: `7`, `-3`, `3.5`, `1/3`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num)?;
        let den = parse_decimal(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() || frac_part.contains('.') {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: BigInt = digits.parse().ok()?;
    let scale = num::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(mantissa, scale);
    Some(if neg { -value } else { value })
}

/// Formats a rational as an integer, a terminating decimal, or `p/q`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let mut den = value.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(num::pow(BigInt::from(10), places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.numer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// One end of an interval on the extended real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    PosInf,
    Finite { value: Rational, closed: bool },
}

impl Endpoint {
    pub fn closed(value: impl IntoRational) -> Self {
        Endpoint::Finite {
            value: value.into_rational(),
            closed: true,
        }
    }

    pub fn open(value: impl IntoRational) -> Self {
        Endpoint::Finite {
            value: value.into_rational(),
            closed: false,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Finite { closed: true, .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Finite { value, .. } => Some(value),
            _ => None,
        }
    }

    fn lower_cut(&self) -> Result<Cut> {
        match self {
            Endpoint::NegInf => Ok(Cut::NegInf),
            Endpoint::PosInf => Err(Error::InvalidInterval(
                "lower endpoint cannot be +inf".into(),
            )),
            Endpoint::Finite { value, closed } => Ok(Cut::At(
                value.clone(),
                if *closed { Side::Below } else { Side::Above },
            )),
        }
    }

    fn upper_cut(&self) -> Result<Cut> {
        match self {
            Endpoint::PosInf => Ok(Cut::PosInf),
            Endpoint::NegInf => Err(Error::InvalidInterval(
                "upper endpoint cannot be -inf".into(),
            )),
            Endpoint::Finite { value, closed } => Ok(Cut::At(
                value.clone(),
                if *closed { Side::Above } else { Side::Below },
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Side {
    Below,
    Above,
}

/// A position on the extended line strictly between real numbers, or at ±∞.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Cut {
    NegInf,
    At(Rational, Side),
    PosInf,
}

impl Cut {
    fn as_lower(&self) -> Endpoint {
        match self {
            Cut::NegInf => Endpoint::NegInf,
            Cut::At(v, side) => Endpoint::Finite {
                value: v.clone(),
                closed: *side == Side::Below,
            },
            Cut::PosInf => unreachable!("+inf cut cannot open a range"),
        }
    }

    fn as_upper(&self) -> Endpoint {
        match self {
            Cut::PosInf => Endpoint::PosInf,
            Cut::At(v, side) => Endpoint::Finite {
                value: v.clone(),
                closed: *side == Side::Above,
            },
            Cut::NegInf => unreachable!("-inf cut cannot close a range"),
        }
    }
}

/// A nonempty interval. Singletons `[a,a]` are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self> {
        let (l, h) = (lo.lower_cut()?, hi.upper_cut()?);
        if l >= h {
            return Err(Error::InvalidInterval(format!(
                "{} is empty",
                Interval { lo, hi }
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `[a,b]`
    pub fn closed(a: impl IntoRational, b: impl IntoRational) -> Result<Self> {
        Interval::new(Endpoint::closed(a), Endpoint::closed(b))
    }

    /// `(a,b)`
    pub fn open(a: impl IntoRational, b: impl IntoRational) -> Result<Self> {
        Interval::new(Endpoint::open(a), Endpoint::open(b))
    }

    /// `[a,b)`
    pub fn closed_open(a: impl IntoRational, b: impl IntoRational) -> Result<Self> {
        Interval::new(Endpoint::closed(a), Endpoint::open(b))
    }

    /// `(a,b]`
    pub fn open_closed(a: impl IntoRational, b: impl IntoRational) -> Result<Self> {
        Interval::new(Endpoint::open(a), Endpoint::closed(b))
    }

    pub fn singleton(a: impl IntoRational) -> Self {
        let a = a.into_rational();
        Interval {
            lo: Endpoint::closed(a.clone()),
            hi: Endpoint::closed(a),
        }
    }

    /// `(-inf, inf)`
    pub fn real_line() -> Self {
        Interval {
            lo: Endpoint::NegInf,
            hi: Endpoint::PosInf,
        }
    }

    /// `[a, inf)`
    pub fn at_least(a: impl IntoRational) -> Self {
        Interval {
            lo: Endpoint::closed(a),
            hi: Endpoint::PosInf,
        }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn contains(&self, p: &Rational) -> bool {
        IntervalSet::from(self.clone()).contains(p)
    }

    /// Length, or `None` when unbounded.
    pub fn length(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Endpoint::Finite { value: a, .. }, Endpoint::Finite { value: b, .. }) => {
                Some(b - a)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, lo) = match &self.lo {
            Endpoint::NegInf => ('(', "-inf".to_string()),
            Endpoint::Finite { value, closed } => {
                (if *closed { '[' } else { '(' }, format_rational(value))
            }
            Endpoint::PosInf => ('(', "inf".to_string()),
        };
        let (close, hi) = match &self.hi {
            Endpoint::PosInf => (')', "inf".to_string()),
            Endpoint::Finite { value, closed } => {
                (if *closed { ']' } else { ')' }, format_rational(value))
            }
            Endpoint::NegInf => (')', "-inf".to_string()),
        };
        write!(f, "{open}{lo},{hi}{close}")
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLiteral(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let open = chars.next().ok_or_else(bad)?;
        let close = chars.next_back().ok_or_else(bad)?;
        let (lo_text, hi_text) = chars.as_str().split_once(',').ok_or_else(bad)?;
        let lo_closed = match open {
            '[' => true,
            '(' => false,
            _ => return Err(bad()),
        };
        let hi_closed = match close {
            ']' => true,
            ')' => false,
            _ => return Err(bad()),
        };
        let endpoint = |text: &str, closed: bool| -> Result<Endpoint> {
            match text.trim() {
                "-inf" if !closed => Ok(Endpoint::NegInf),
                "inf" | "+inf" if !closed => Ok(Endpoint::PosInf),
                "-inf" | "inf" | "+inf" => Err(Error::InvalidInterval(format!(
                    "infinite endpoint must be open in `{s}`"
                ))),
                other => Ok(Endpoint::Finite {
                    value: parse_rational(other).ok_or_else(bad)?,
                    closed,
                }),
            }
        };
        Interval::new(endpoint(lo_text, lo_closed)?, endpoint(hi_text, hi_closed)?)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Canonical finite union of disjoint, non-adjacent intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    cuts: Vec<Cut>,
}

impl From<Interval> for IntervalSet {
    fn from(iv: Interval) -> Self {
        let cuts = vec![
            iv.lo.lower_cut().expect("validated interval"),
            iv.hi.upper_cut().expect("validated interval"),
        ];
        IntervalSet { cuts }
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { cuts: Vec::new() }
    }

    pub fn real_line() -> Self {
        Interval::real_line().into()
    }

    /// Canonical union of arbitrary (possibly overlapping or adjacent) intervals.
    pub fn normalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut ranges: Vec<(Cut, Cut)> = raw
            .into_iter()
            .map(|iv| {
                (
                    iv.lo.lower_cut().expect("validated interval"),
                    iv.hi.upper_cut().expect("validated interval"),
                )
            })
            .collect();
        ranges.sort();
        let mut cuts: Vec<Cut> = Vec::with_capacity(ranges.len() * 2);
        for (lo, hi) in ranges {
            match cuts.last_mut() {
                Some(end) if lo <= *end => {
                    if hi > *end {
                        *end = hi;
                    }
                }
                _ => {
                    cuts.push(lo);
                    cuts.push(hi);
                }
            }
        }
        IntervalSet { cuts }
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.cuts.chunks_exact(2).map(|pair| Interval {
            lo: pair[0].as_lower(),
            hi: pair[1].as_upper(),
        })
    }

    pub fn interval_count(&self) -> usize {
        self.cuts.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn contains(&self, p: &Rational) -> bool {
        let probe = Cut::At(p.clone(), Side::Below);
        self.cuts.partition_point(|c| *c <= probe) % 2 == 1
    }

    /// Merge the toggle lists of two sets, keeping points where `op` holds.
    /// `op(false, false)` must be false.
    fn combine(&self, other: &IntervalSet, op: impl Fn(bool, bool) -> bool) -> IntervalSet {
        debug_assert!(!op(false, false));
        let (a, b) = (&self.cuts, &other.cuts);
        let (mut i, mut j) = (0, 0);
        let (mut in_a, mut in_b, mut cur) = (false, false, false);
        let mut cuts = Vec::new();
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (None, None) => unreachable!(),
            }
            .clone();
            if a.get(i) == Some(&next) {
                in_a = !in_a;
                i += 1;
            }
            if b.get(j) == Some(&next) {
                in_b = !in_b;
                j += 1;
            }
            let now = op(in_a, in_b);
            if now != cur {
                cuts.push(next);
                cur = now;
            }
        }
        IntervalSet { cuts }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && b)
    }

    /// `self ∩ 𝒞(other)`; for `self` inside a universe this equals
    /// intersecting with the universe-relative complement.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && !b)
    }

    /// `(𝒞(self) ∩ other) ∪ (self ∩ 𝒞(other))`
    pub fn sym_diff(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Total length of `self ∩ window`; `None` if that is unbounded.
    pub fn measure(&self, window: &Interval) -> Option<Rational> {
        self.intersect(&window.clone().into())
            .intervals()
            .try_fold(Rational::zero(), |acc, iv| Some(acc + iv.length()?))
    }

    /// Every finite endpoint value, in increasing order (with repeats).
    pub fn finite_endpoints(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.cuts.iter().filter_map(|c| match c {
            Cut::At(v, _) => Some(v),
            _ => None,
        })
    }

    /// Smallest interval containing the set, or `None` for the empty set.
    pub fn hull(&self) -> Option<Interval> {
        let (first, last) = (self.cuts.first()?, self.cuts.last()?);
        Some(Interval {
            lo: first.as_lower(),
            hi: last.as_upper(),
        })
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        for (k, iv) in self.intervals().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    /// Literal syntax `[a,b] | (c,inf)` or `empty`. The universe literal `X`
    /// is only meaningful in the system DSL and is rejected here.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "empty" {
            return Ok(IntervalSet::empty());
        }
        let parts = t
            .split('|')
            .map(str::parse::<Interval>)
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet::normalize(parts))
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The unity of the set algebra: every set in a system lives inside it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe(IntervalSet);

impl Universe {
    pub fn new(carrier: IntervalSet) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        Ok(Universe(carrier))
    }

    pub fn real_line() -> Self {
        Universe(IntervalSet::real_line())
    }

    /// `[0, inf)`
    pub fn non_negative() -> Self {
        Universe(Interval::at_least(0).into())
    }

    pub fn carrier(&self) -> &IntervalSet {
        &self.0
    }

    pub fn contains_set(&self, set: &IntervalSet) -> bool {
        set.is_subset(&self.0)
    }

    /// Fails with a diagnostic when `set` escapes the universe.
    pub fn check(&self, set: &IntervalSet) -> Result<()> {
        if self.contains_set(set) {
            Ok(())
        } else {
            Err(Error::OutsideUniverse {
                set: set.to_string(),
                universe: self.0.to_string(),
            })
        }
    }

    pub fn complement(&self, set: &IntervalSet) -> IntervalSet {
        self.0.difference(set)
    }

    pub fn is_universe(&self, set: &IntervalSet) -> bool {
        *set == self.0
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
