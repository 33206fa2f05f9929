// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Conservative floating-point intervals.
//!
//! Every operation widens its result outward by one ulp on each side, so the
//! true real result of the corresponding exact operation is always contained.
//! This avoids touching the FPU rounding mode, which keeps the type safe to
//! use from any thread.

use std::cmp::Ordering;

/// Closed interval `[lo, hi]` guaranteed to contain the true value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// Exact singleton when `v` is representable, otherwise the tightest
    /// enclosing interval.
    #[inline]
    pub fn from_i64(v: i64) -> Interval {
        let f = v as f64;
        if f as i128 == v as i128 {
            Interval { lo: f, hi: f }
        } else {
            Interval { lo: down(f), hi: up(f) }
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    #[inline]
    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }

    #[inline]
    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }

    #[inline]
    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = c[0];
        let mut hi = c[0];
        for &v in &c[1..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo.is_nan() || hi.is_nan() {
            // inf * 0 and friends; give up rather than risk a wrong bound
            return Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
        }
        Interval { lo: down(lo), hi: up(hi) }
    }

    /// Division, defined only when the divisor interval excludes zero.
    #[inline]
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let mut lo = c[0];
        let mut hi = c[0];
        for &v in &c[1..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Some(Interval { lo: down(lo), hi: up(hi) })
    }

    /// Square root of the nonnegative part; `None` if entirely negative.
    #[inline]
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()) };
        Some(Interval { lo, hi: up(self.hi.sqrt()) })
    }

    /// Sign of every value in the interval, when that is a single sign.
    #[inline]
    pub fn certain_sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn contains_big(iv: Interval, v: &BigInt) -> bool {
        use num_traits::ToPrimitive;
        let f = v.to_f64().unwrap();
        // compare in f64 with a cushion of the interval bounds themselves
        iv.lo() <= f && f <= iv.hi() || iv.contains(f)
    }

    #[test]
    fn exact_small_integers() {
        let a = Interval::from_i64(1 << 53);
        assert_eq!(a.lo(), a.hi());
        let b = Interval::from_i64((1 << 53) + 1);
        assert!(b.lo() < b.hi());
    }

    proptest! {
        #[test]
        fn arithmetic_contains_exact(a in -(1i64<<53)..(1i64<<53), b in -(1i64<<53)..(1i64<<53)) {
            let ia = Interval::from_i64(a);
            let ib = Interval::from_i64(b);
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            prop_assert!(contains_big(ia.add(&ib), &(&ba + &bb)));
            prop_assert!(contains_big(ia.sub(&ib), &(&ba - &bb)));
            prop_assert!(contains_big(ia.mul(&ib), &(&ba * &bb)));
            prop_assert!(contains_big(ia.mul(&ia).mul(&ib), &(&ba * &ba * &bb)));
        }
    }
}
