//! Real intervals with open or closed, finite or infinite endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-width used when an infinite interval has to be sampled.
pub const DEFAULT_SPAN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        // infinite endpoints are never included
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

    /// `(lo, hi]`
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, true)
    }

    /// `[lo, hi)`
    pub fn right_open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, false)
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Membership with an absolute slack `eps` around the endpoints.
    pub fn contains_approx(&self, x: f64, eps: f64) -> bool {
        self.contains(x) || (x >= self.lo - eps && x <= self.hi + eps)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Replaces infinite endpoints by finite ones `DEFAULT_SPAN` away from the
    /// other endpoint (or from the origin for the whole line). Closedness of
    /// replaced endpoints is kept open.
    pub fn finite_window(&self) -> Interval {
        let (lo, hi) = match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo.max(0.0) + DEFAULT_SPAN),
            (false, true) => (self.hi.min(0.0) - DEFAULT_SPAN, self.hi),
            (false, false) => (-DEFAULT_SPAN, DEFAULT_SPAN),
        };
        Interval::new(lo, hi, self.lo_closed, self.hi_closed)
    }

    /// `n` uniformly spaced points. Closed endpoints are included, open ones
    /// are stepped over by one grid spacing. The interval must be finite.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        assert!(self.is_finite(), "cannot sample the infinite interval {self}");
        match n {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => {
                let start = if self.lo_closed { 0 } else { 1 };
                let denom = (n - 1 + start + usize::from(!self.hi_closed)) as f64;
                let w = self.width();
                (0..n)
                    .map(|i| self.lo + (w * (i + start) as f64) / denom)
                    .collect()
            }
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
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
        let out = Interval::new(lo, hi, lo_closed, hi_closed);
        (lo < hi || (lo == hi && lo_closed && hi_closed)).then_some(out)
    }

    /// The union when it is itself an interval (overlapping or abutting with
    /// the shared endpoint covered).
    pub fn union(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = if self.lo <= other.lo { (self, other) } else { (other, self) };
        let joined = b.lo < a.hi || (b.lo == a.hi && (a.hi_closed || b.lo_closed));
        if !joined {
            return None;
        }
        let lo_closed = if a.lo == b.lo { a.lo_closed || b.lo_closed } else { a.lo_closed };
        let (hi, hi_closed) = if a.hi > b.hi {
            (a.hi, a.hi_closed)
        } else if b.hi > a.hi {
            (b.hi, b.hi_closed)
        } else {
            (a.hi, a.hi_closed || b.hi_closed)
        };
        Some(Interval::new(a.lo, hi, lo_closed, hi_closed))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        self.union(other).unwrap_or_else(|| {
            let (a, b) = if self.lo <= other.lo { (self, other) } else { (other, self) };
            let (hi, hi_closed) = if a.hi >= b.hi { (a.hi, a.hi_closed) } else { (b.hi, b.hi_closed) };
            Interval::new(a.lo, hi, a.lo_closed, hi_closed)
        })
    }

    /// Image under `x -> k x`, `k != 0`.
    pub fn scale(&self, k: f64) -> Interval {
        if k > 0.0 {
            Interval::new(self.lo * k, self.hi * k, self.lo_closed, self.hi_closed)
        } else {
            Interval::new(self.hi * k, self.lo * k, self.hi_closed, self.lo_closed)
        }
    }

    /// Image under `x -> x + d`.
    pub fn translate(&self, d: f64) -> Interval {
        Interval::new(self.lo + d, self.hi + d, self.lo_closed, self.hi_closed)
    }

    /// Image under `x -> -x`.
    pub fn negate(&self) -> Interval {
        self.scale(-1.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_respects_closedness() {
        let i = Interval::left_open(0.0, 1.0);
        assert!(!i.contains(0.0));
        assert!(i.contains(1.0));
        assert!(Interval::real_line().contains(1e300));
        assert!(!Interval::real_line().lo_closed);
    }

    #[test]
    fn sampling_hits_integers_exactly() {
        let xs = Interval::closed(-10.0, 10.0).sample(1001);
        assert_eq!(xs.len(), 1001);
        assert_eq!(xs[0], -10.0);
        assert_eq!(xs[50], -9.0);
        assert_eq!(xs[500], 0.0);
        assert_eq!(xs[1000], 10.0);
    }

    #[test]
    fn sampling_steps_over_open_ends() {
        let xs = Interval::open(0.0, 1.0).sample(3);
        assert_eq!(xs, vec![0.25, 0.5, 0.75]);
        let ys = Interval::left_open(0.0, 1.0).sample(2);
        assert_eq!(ys, vec![0.5, 1.0]);
    }

    #[test]
    fn unions() {
        let a = Interval::left_open(0.0, 2.0);
        let b = Interval::closed(2.0, 5.0);
        assert_eq!(a.union(&b), Some(Interval::left_open(0.0, 5.0)));
        let c = Interval::open(-3.0, 0.0);
        assert_eq!(a.union(&c), None);
        assert_eq!(a.hull(&c), Interval::new(-3.0, 2.0, false, true));
        // (0, 2) and (2, 3) miss the point 2
        assert_eq!(Interval::open(0.0, 2.0).union(&Interval::open(2.0, 3.0)), None);
    }

    #[test]
    fn images() {
        let i = Interval::left_open(1.0, 2.0);
        assert_eq!(i.scale(-2.0), Interval::right_open(-4.0, -2.0));
        assert_eq!(i.translate(1.0), Interval::left_open(2.0, 3.0));
        let half = Interval::new(0.0, f64::INFINITY, false, false);
        assert_eq!(half.negate().lo, f64::NEG_INFINITY);
        assert_eq!(half.finite_window(), Interval::open(0.0, 10.0));
    }

    #[test]
    fn intersection() {
        let a = Interval::closed(0.0, 2.0);
        let b = Interval::open(1.0, 3.0);
        assert_eq!(a.intersect(&b), Some(Interval::left_open(1.0, 2.0)));
        assert_eq!(a.intersect(&Interval::open(2.0, 3.0)), None);
    }
}
