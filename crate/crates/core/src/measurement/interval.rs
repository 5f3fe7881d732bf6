//! Finite unions of real intervals, the only Borel sets the library needs.

use std::fmt;

/// One interval with independently open or closed ends. Infinite ends are
/// always treated as open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Self {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    /// `(−∞, hi]`
    pub fn at_most(hi: f64) -> Self {
        Self::new(f64::NEG_INFINITY, hi, false, true)
    }

    /// `[lo, ∞)`
    pub fn at_least(lo: f64) -> Self {
        Self::new(lo, f64::INFINITY, true, false)
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan() || self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Image under an increasing map.
    fn map_increasing(&self, f: impl Fn(f64) -> f64) -> Interval {
        Interval::new(f(self.lo), f(self.hi), self.lo_closed, self.hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A finite union of disjoint intervals kept sorted by left end.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn real_line() -> Self {
        Self::from(Interval::real_line())
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(last) = merged.last_mut() {
                let touches = next.lo < last.hi || (next.lo == last.hi && (last.hi_closed || next.lo_closed));
                if touches {
                    if next.hi > last.hi {
                        last.hi = next.hi;
                        last.hi_closed = next.hi_closed;
                    } else if next.hi == last.hi {
                        last.hi_closed |= next.hi_closed;
                    }
                    continue;
                }
            }
            merged.push(next);
        }
        Self { parts: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                out.push(a.intersect(b));
            }
        }
        Self::from_intervals(out)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        let mut lo_closed = false;
        for part in &self.parts {
            out.push(Interval::new(lo, part.lo, lo_closed, !part.lo_closed));
            lo = part.hi;
            lo_closed = !part.hi_closed;
        }
        out.push(Interval::new(lo, f64::INFINITY, lo_closed, false));
        Self::from_intervals(out)
    }

    /// Image under a strictly increasing map defined on the whole set.
    pub fn map_increasing(&self, f: impl Fn(f64) -> f64) -> IntervalSet {
        Self::from_intervals(self.parts.iter().map(|i| i.map_increasing(&f)))
    }

    /// Probability mass under a continuous law given by its distribution
    /// function; endpoint closedness is irrelevant there.
    pub fn mass_under(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let total: f64 = self
            .parts
            .iter()
            .map(|i| {
                let hi = if i.hi == f64::INFINITY { 1.0 } else { cdf(i.hi) };
                let lo = if i.lo == f64::NEG_INFINITY { 0.0 } else { cdf(i.lo) };
                (hi - lo).max(0.0)
            })
            .sum();
        total.clamp(0.0, 1.0)
    }
}

impl From<Interval> for IntervalSet {
    fn from(i: Interval) -> Self {
        Self::from_intervals([i])
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (k, part) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}
