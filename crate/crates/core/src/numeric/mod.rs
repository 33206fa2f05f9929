// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Input quantization and the two fast tiers of the sign cascade.
//!
//! All geometry enters the kernel as integers in `[-2^53, 2^53]`, the largest
//! integer range doubles represent exactly. Predicates are black-box integer
//! polynomials over those coordinates, evaluated first with conservative
//! interval arithmetic and, if the filter cannot certify a sign, with exact
//! integer arithmetic. The perturbation engine in [`crate::perturb`] sits
//! behind both.

mod interval;
mod smallint;

pub use interval::Interval;
pub use smallint::SmallInt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

/// Extreme representable quantized coordinate.
pub const QUANT_RANGE: i64 = 1 << 53;

/// Ring operations shared by every evaluation backend (exact integers,
/// intervals, and test-side symbolic expansions). Predicates are written once,
/// generically over this trait.
pub trait Ring: Clone {
    fn from_i64(v: i64) -> Self;
    fn neg(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn square(&self) -> Self {
        self.mul(self)
    }
}

/// Exact integer backends additionally expose signs and exact small division,
/// which the interpolation pass relies on.
pub trait ExactInt: Ring {
    /// -1, 0, or 1.
    fn signum(&self) -> i8;
    /// True when an overflow poisoned this value (fixed-width backend only).
    fn poisoned(&self) -> bool {
        false
    }
    /// Exact division by a small positive divisor; `None` if not divisible.
    fn div_exact_small(&self, d: u64) -> Option<Self>;
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl ExactInt for BigInt {
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn div_exact_small(&self, d: u64) -> Option<Self> {
        let (q, r) = self.div_rem(&BigInt::from(d));
        if r == BigInt::from(0) {
            Some(q)
        } else {
            None
        }
    }
}

impl Ring for SmallInt {
    fn from_i64(v: i64) -> Self {
        SmallInt::from_i64(v)
    }
    fn neg(&self) -> Self {
        SmallInt::neg(self)
    }
    fn add(&self, o: &Self) -> Self {
        SmallInt::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        SmallInt::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        SmallInt::mul(self, o)
    }
}

impl ExactInt for SmallInt {
    fn signum(&self) -> i8 {
        SmallInt::signum(self)
    }
    fn poisoned(&self) -> bool {
        self.is_poisoned()
    }
    fn div_exact_small(&self, d: u64) -> Option<Self> {
        self.div_exact(d)
    }
}

impl Ring for Interval {
    fn from_i64(v: i64) -> Self {
        Interval::from_i64(v)
    }
    fn neg(&self) -> Self {
        Interval::neg(self)
    }
    fn add(&self, o: &Self) -> Self {
        Interval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Interval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Interval::mul(self, o)
    }
}

/// A geometric predicate as a black-box integer polynomial.
///
/// `eval` must compute one fixed polynomial with integer coefficients of total
/// degree at most `degree()` in `arity()` scalar inputs, whichever backend it
/// is instantiated with. The perturbation engine only ever looks at the
/// polynomial through this interface.
pub trait Predicate {
    fn arity(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval<R: Ring>(&self, args: &[R]) -> R;
}

/// Interval filter tier: `Some(1)` / `Some(-1)` only when the sign is certain.
/// An exact zero can never be certified, so it reports `None`.
pub fn interval_sign<P: Predicate + ?Sized>(f: &P, args: &[i64]) -> Option<i8> {
    debug_assert_eq!(args.len(), f.arity());
    let iv: Vec<Interval> = args.iter().map(|&v| Interval::from_i64(v)).collect();
    match f.eval(&iv).certain_sign() {
        Some(std::cmp::Ordering::Greater) => Some(1),
        Some(std::cmp::Ordering::Less) => Some(-1),
        _ => None,
    }
}

/// Exact tier: the true sign of `f(args)`.
///
/// Runs on stack integers and falls back to heap big integers on overflow, so
/// the answer is exact for any inputs.
pub fn exact_sign<P: Predicate + ?Sized>(f: &P, args: &[i64]) -> i8 {
    debug_assert_eq!(args.len(), f.arity());
    let small: Vec<SmallInt> = args.iter().map(|&v| SmallInt::from_i64(v)).collect();
    let r = f.eval(&small);
    if !r.is_poisoned() {
        return r.signum();
    }
    let big: Vec<BigInt> = args.iter().map(|&v| BigInt::from(v)).collect();
    ExactInt::signum(&f.eval(&big))
}

/// Exact value of `f(args)` as a big integer.
pub fn exact_value<P: Predicate + ?Sized>(f: &P, args: &[i64]) -> BigInt {
    let small: Vec<SmallInt> = args.iter().map(|&v| SmallInt::from_i64(v)).collect();
    let r = f.eval(&small);
    if !r.is_poisoned() {
        return r.to_bigint();
    }
    let big: Vec<BigInt> = args.iter().map(|&v| BigInt::from(v)).collect();
    f.eval(&big)
}

/// Integer point produced by [`quantize`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct QuantizedPoint {
    pub x: i64,
    pub y: i64,
}

impl QuantizedPoint {
    pub fn new(x: i64, y: i64) -> QuantizedPoint {
        debug_assert!(x.abs() <= QUANT_RANGE && y.abs() <= QUANT_RANGE);
        QuantizedPoint { x, y }
    }
}

/// The affine map used by [`quantize`], kept so constructions can be mapped
/// back to input space and so output files can record it.
#[derive(Clone, Copy, Debug)]
pub struct QuantizeMap {
    /// quantized units per input unit; zero for fully degenerate bounds
    pub scale: f64,
    /// input-space center of the quantized origin
    pub center: (f64, f64),
}

impl QuantizeMap {
    pub fn from_bounds(lo: (f64, f64), hi: (f64, f64)) -> QuantizeMap {
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1);
        let center = ((lo.0 + hi.0) * 0.5, (lo.1 + hi.1) * 0.5);
        let scale = if extent > 0.0 {
            2.0 * QUANT_RANGE as f64 / extent
        } else {
            0.0
        };
        QuantizeMap { scale, center }
    }

    /// Nearest quantized point, ties rounded toward positive infinity.
    pub fn apply(&self, p: (f64, f64)) -> QuantizedPoint {
        let q = |v: f64, c: f64| -> i64 {
            let scaled = (v - c) * self.scale;
            let r = (scaled + 0.5).floor();
            (r as i64).clamp(-QUANT_RANGE, QUANT_RANGE)
        };
        QuantizedPoint { x: q(p.0, self.center.0), y: q(p.1, self.center.1) }
    }

    /// Scalar length in quantized units (used for radii).
    pub fn apply_length(&self, len: f64) -> i64 {
        ((len * self.scale + 0.5).floor() as i64).clamp(0, QUANT_RANGE)
    }

    pub fn unapply(&self, q: QuantizedPoint) -> (f64, f64) {
        if self.scale == 0.0 {
            return self.center;
        }
        (q.x as f64 / self.scale + self.center.0, q.y as f64 / self.scale + self.center.1)
    }
}

/// Quantize `points` onto `[-2^53, 2^53]^2` using a uniform scale derived from
/// `bounds` (the larger extent wins, preserving aspect ratio). Degenerate
/// bounds map everything to the origin, which the kernel tolerates.
pub fn quantize(
    points: &[(f64, f64)],
    lo: (f64, f64),
    hi: (f64, f64),
) -> (Vec<QuantizedPoint>, QuantizeMap) {
    let map = QuantizeMap::from_bounds(lo, hi);
    (points.iter().map(|&p| map.apply(p)).collect(), map)
}
