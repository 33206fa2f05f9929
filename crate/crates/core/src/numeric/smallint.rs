// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Stack-allocated signed integers of up to 512 bits.
//!
//! Exact polynomial evaluation dominates the degenerate-input cost of the
//! kernel, and the shipped predicates (degree <= 8 on coordinates bounded by
//! 2^53 plus perturbation offsets) stay comfortably under 512 bits. `SmallInt`
//! keeps those evaluations off the heap. Any overflow poisons the value
//! instead of wrapping; callers detect poison and redo the computation with
//! heap big integers, so results are always exact.

use num_bigint::BigInt;

const LIMBS: usize = 8;

/// Sign-magnitude integer with at most eight 64-bit limbs.
#[derive(Clone, Copy, Debug)]
pub struct SmallInt {
    mag: [u64; LIMBS],
    len: u8,
    negative: bool,
    poisoned: bool,
}

impl SmallInt {
    pub const ZERO: SmallInt = SmallInt { mag: [0; LIMBS], len: 0, negative: false, poisoned: false };

    const POISON: SmallInt = SmallInt { mag: [0; LIMBS], len: 0, negative: false, poisoned: true };

    #[inline]
    pub fn from_i64(v: i64) -> SmallInt {
        let mut s = SmallInt::ZERO;
        let m = v.unsigned_abs();
        if m != 0 {
            s.mag[0] = m;
            s.len = 1;
            s.negative = v < 0;
        }
        s
    }

    #[inline]
    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.len == 0 && !self.poisoned
    }

    /// -1, 0 or 1. Meaningless on poisoned values.
    #[inline]
    pub fn signum(&self) -> i8 {
        if self.len == 0 {
            0
        } else if self.negative {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn neg(&self) -> SmallInt {
        let mut r = *self;
        if r.len != 0 {
            r.negative = !r.negative;
        }
        r
    }

    fn cmp_mag(&self, o: &SmallInt) -> std::cmp::Ordering {
        self.len.cmp(&o.len).then_with(|| {
            for i in (0..self.len as usize).rev() {
                match self.mag[i].cmp(&o.mag[i]) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    fn add_mag(a: &SmallInt, b: &SmallInt, negative: bool) -> SmallInt {
        let mut r = SmallInt::ZERO;
        let n = a.len.max(b.len) as usize;
        let mut carry = 0u64;
        for i in 0..n {
            let (s1, c1) = a.mag[i].overflowing_add(b.mag[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            r.mag[i] = s2;
            carry = (c1 as u64) + (c2 as u64);
        }
        if carry != 0 {
            if n >= LIMBS {
                return SmallInt::POISON;
            }
            r.mag[n] = carry;
            r.len = n as u8 + 1;
        } else {
            r.len = n as u8;
            while r.len > 0 && r.mag[r.len as usize - 1] == 0 {
                r.len -= 1;
            }
        }
        r.negative = negative && r.len != 0;
        r
    }

    fn sub_mag(a: &SmallInt, b: &SmallInt, negative: bool) -> SmallInt {
        // requires |a| >= |b|
        let mut r = SmallInt::ZERO;
        let mut borrow = 0u64;
        for i in 0..a.len as usize {
            let (d1, b1) = a.mag[i].overflowing_sub(b.mag[i]);
            let (d2, b2) = d1.overflowing_sub(borrow);
            r.mag[i] = d2;
            borrow = (b1 as u64) + (b2 as u64);
        }
        debug_assert_eq!(borrow, 0);
        r.len = a.len;
        while r.len > 0 && r.mag[r.len as usize - 1] == 0 {
            r.len -= 1;
        }
        r.negative = negative && r.len != 0;
        r
    }

    pub fn add(&self, o: &SmallInt) -> SmallInt {
        if self.poisoned || o.poisoned {
            return SmallInt::POISON;
        }
        if self.negative == o.negative {
            Self::add_mag(self, o, self.negative)
        } else {
            match self.cmp_mag(o) {
                std::cmp::Ordering::Equal => SmallInt::ZERO,
                std::cmp::Ordering::Greater => Self::sub_mag(self, o, self.negative),
                std::cmp::Ordering::Less => Self::sub_mag(o, self, o.negative),
            }
        }
    }

    #[inline]
    pub fn sub(&self, o: &SmallInt) -> SmallInt {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SmallInt) -> SmallInt {
        if self.poisoned || o.poisoned {
            return SmallInt::POISON;
        }
        if self.len == 0 || o.len == 0 {
            return SmallInt::ZERO;
        }
        let (la, lb) = (self.len as usize, o.len as usize);
        if la + lb > LIMBS + 1 {
            return SmallInt::POISON;
        }
        let mut acc = [0u64; LIMBS + 1];
        for i in 0..la {
            let ai = self.mag[i] as u128;
            let mut carry = 0u128;
            for j in 0..lb {
                let idx = i + j;
                let cur = acc[idx] as u128 + ai * o.mag[j] as u128 + carry;
                acc[idx] = cur as u64;
                carry = cur >> 64;
            }
            let mut idx = i + lb;
            while carry != 0 {
                if idx > LIMBS {
                    return SmallInt::POISON;
                }
                let cur = acc[idx] as u128 + carry;
                acc[idx] = cur as u64;
                carry = cur >> 64;
                idx += 1;
            }
        }
        if acc[LIMBS] != 0 {
            return SmallInt::POISON;
        }
        let mut r = SmallInt::ZERO;
        r.mag.copy_from_slice(&acc[..LIMBS]);
        r.len = LIMBS as u8;
        while r.len > 0 && r.mag[r.len as usize - 1] == 0 {
            r.len -= 1;
        }
        r.negative = self.negative != o.negative && r.len != 0;
        r
    }

    /// Exact division by a small positive integer; `None` when a nonzero
    /// remainder shows up (or the value is poisoned).
    pub fn div_exact(&self, d: u64) -> Option<SmallInt> {
        if self.poisoned {
            return None;
        }
        debug_assert!(d > 0);
        let mut r = *self;
        let mut rem = 0u128;
        for i in (0..self.len as usize).rev() {
            let cur = (rem << 64) | self.mag[i] as u128;
            r.mag[i] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        if rem != 0 {
            return None;
        }
        while r.len > 0 && r.mag[r.len as usize - 1] == 0 {
            r.len -= 1;
        }
        if r.len == 0 {
            r.negative = false;
        }
        Some(r)
    }

    pub fn to_bigint(&self) -> BigInt {
        debug_assert!(!self.poisoned);
        let mut v = BigInt::from(0u32);
        for i in (0..self.len as usize).rev() {
            v = (v << 64) + self.mag[i];
        }
        if self.negative {
            -v
        } else {
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small(v: &BigInt) -> Option<SmallInt> {
        // build via limbs for test purposes
        let (sign, mag) = v.clone().into_parts();
        let digits = mag.to_u64_digits();
        if digits.len() > LIMBS {
            return None;
        }
        let mut s = SmallInt::ZERO;
        s.mag[..digits.len()].copy_from_slice(&digits);
        s.len = digits.len() as u8;
        s.negative = sign == num_bigint::Sign::Minus;
        Some(s)
    }

    proptest! {
        #[test]
        fn matches_bigint(xs in proptest::collection::vec(any::<i64>(), 2..6)) {
            let mut sb = BigInt::from(xs[0]);
            let mut ss = SmallInt::from_i64(xs[0]);
            for (i, &x) in xs[1..].iter().enumerate() {
                let (nb, ns) = match i % 3 {
                    0 => (&sb * BigInt::from(x), ss.mul(&SmallInt::from_i64(x))),
                    1 => (&sb + BigInt::from(x), ss.add(&SmallInt::from_i64(x))),
                    _ => (&sb - BigInt::from(x), ss.sub(&SmallInt::from_i64(x))),
                };
                sb = nb;
                if ns.is_poisoned() {
                    // only legal if the true value really needs > 512 bits
                    prop_assert!(sb.bits() > 64 * (LIMBS as u64) - 1);
                    return Ok(());
                }
                ss = ns;
                prop_assert_eq!(ss.to_bigint(), sb.clone());
                prop_assert_eq!(ss.signum() as i32, match sb.sign() {
                    num_bigint::Sign::Minus => -1,
                    num_bigint::Sign::NoSign => 0,
                    num_bigint::Sign::Plus => 1,
                });
            }
        }

        #[test]
        fn division_is_exact(v in any::<i128>(), d in 1u64..1_000_000) {
            let b = BigInt::from(v) * BigInt::from(d);
            let s = small(&b).unwrap();
            let q = s.div_exact(d).unwrap();
            prop_assert_eq!(q.to_bigint(), BigInt::from(v));
            if v.unsigned_abs() % (d as u128) != 0 {
                prop_assert!(small(&BigInt::from(v)).unwrap().div_exact(d).is_none());
            }
        }
    }

    #[test]
    fn poison_propagates() {
        let big = small(&(BigInt::from(1) << 511)).unwrap();
        let p = big.mul(&SmallInt::from_i64(4));
        assert!(p.is_poisoned());
        assert!(p.add(&SmallInt::from_i64(1)).is_poisoned());
        assert!(p.mul(&SmallInt::from_i64(0)).is_poisoned());
        assert!(p.div_exact(2).is_none());
    }
}
