// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Independent oracles and deterministic data generators for testing the
//! kernel. Everything here deliberately avoids the kernel's own evaluation
//! paths: the fixed-point intervals use plain big-integer arithmetic, and the
//! symbolic oracle expands the perturbation series directly instead of
//! interpolating.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use exactgeo::numeric::Ring;
use exactgeo::predicates::{Branch, Circle};
use exactgeo::prf::{rand_coefficient, PerturbationSeed};

// ---------------------------------------------------------------------------
// deterministic rng for test data

#[derive(Clone)]
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi] inclusive.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn f64_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

// ---------------------------------------------------------------------------
// fixed-point interval arithmetic at 256 fractional bits

pub const FIX_SHIFT: u32 = 256;

/// Interval `[lo, hi] / 2^FIX_SHIFT` guaranteed to contain the true value.
#[derive(Clone, Debug)]
pub struct Fix {
    pub lo: BigInt,
    pub hi: BigInt,
}

fn floor_shr(v: &BigInt, s: u32) -> BigInt {
    v >> s
}

fn ceil_shr(v: &BigInt, s: u32) -> BigInt {
    -floor_shr(&-v, s)
}

impl Fix {
    pub fn from_int(v: i64) -> Fix {
        let b = BigInt::from(v) << FIX_SHIFT;
        Fix { lo: b.clone(), hi: b }
    }

    pub fn from_big(v: &BigInt) -> Fix {
        let b = v << FIX_SHIFT;
        Fix { lo: b.clone(), hi: b }
    }

    pub fn add(&self, o: &Fix) -> Fix {
        Fix { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Fix) -> Fix {
        Fix { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Fix {
        Fix { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Fix) -> Fix {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        Fix { lo: floor_shr(lo, FIX_SHIFT), hi: ceil_shr(hi, FIX_SHIFT) }
    }

    /// Division by a sign-definite interval.
    pub fn div(&self, o: &Fix) -> Fix {
        assert!(o.lo.sign() == o.hi.sign() && !o.lo.is_zero(), "divisor straddles zero");
        let div_floor = |a: &BigInt, b: &BigInt| {
            let n = a << FIX_SHIFT;
            let (q, r) = (&n / b, &n % b);
            if r.is_zero() || (r.sign() == b.sign()) {
                q
            } else {
                q - 1
            }
        };
        let div_ceil = |a: &BigInt, b: &BigInt| -div_floor(&-a, b);
        let c = [
            div_floor(&self.lo, &o.lo),
            div_floor(&self.lo, &o.hi),
            div_floor(&self.hi, &o.lo),
            div_floor(&self.hi, &o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let c = [
            div_ceil(&self.lo, &o.lo),
            div_ceil(&self.lo, &o.hi),
            div_ceil(&self.hi, &o.lo),
            div_ceil(&self.hi, &o.hi),
        ];
        let hi = c.iter().max().unwrap().clone();
        Fix { lo, hi }
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self) -> Fix {
        assert!(!self.lo.is_negative(), "negative radicand in oracle sqrt");
        let lo = (&self.lo << FIX_SHIFT).sqrt();
        let hi = (&self.hi << FIX_SHIFT).sqrt() + 1;
        Fix { lo, hi }
    }

    /// Definite comparison; `None` when the intervals overlap.
    #[allow(clippy::should_implement_trait)]
    pub fn cmp(&self, o: &Fix) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) / 2;
        mid.to_f64().unwrap() / 2f64.powi(FIX_SHIFT as i32)
    }

    /// Distance from the interval to integer `n`, at most `bound` (in real
    /// units)?
    pub fn within_of_int(&self, n: i64, bound_num: i64, bound_den: i64) -> bool {
        // |x - n| <= bound for every x in the interval
        let nb = BigInt::from(n) << FIX_SHIFT;
        let b = (BigInt::from(bound_num) << FIX_SHIFT) / bound_den;
        &self.lo - &nb >= -&b && &self.hi - &nb <= b
    }
}

// ---------------------------------------------------------------------------
// high-precision circle intersection oracle

/// Exact alpha-hat, l, beta-hat^2 of an ordered circle pair.
pub fn pair_exact(c0: &Circle, c1: &Circle) -> (BigInt, BigInt, BigInt, BigInt, BigInt) {
    let dx = BigInt::from(c1.center.x - c0.center.x);
    let dy = BigInt::from(c1.center.y - c0.center.y);
    let l = &dx * &dx + &dy * &dy;
    let alpha = &l + BigInt::from(c0.radius) * c0.radius - BigInt::from(c1.radius) * c1.radius;
    let beta2 = BigInt::from(4) * BigInt::from(c0.radius) * c0.radius * &l - &alpha * &alpha;
    (dx, dy, l, alpha, beta2)
}

/// Intersection point of two circles as high-precision intervals. `None`
/// when they do not strictly intersect (`beta^2 <= 0`) or are concentric.
pub fn circle_intersection_oracle(c0: &Circle, c1: &Circle, branch: Branch) -> Option<(Fix, Fix)> {
    let (dx, dy, l, alpha, beta2) = pair_exact(c0, c1);
    if beta2 <= BigInt::from(0) || l.is_zero() {
        return None;
    }
    let sigma = BigInt::from(branch.sigma());
    let beta = Fix::from_big(&beta2).sqrt();
    let two_l = Fix::from_big(&(&l + &l));
    let sx = Fix::from_big(&(&alpha * &dx))
        .sub(&beta.mul(&Fix::from_big(&(&sigma * &dy))))
        .div(&two_l)
        .add(&Fix::from_int(c0.center.x));
    let sy = Fix::from_big(&(&alpha * &dy))
        .add(&beta.mul(&Fix::from_big(&(&sigma * &dx))))
        .div(&two_l)
        .add(&Fix::from_int(c0.center.y));
    Some((sx, sy))
}

// ---------------------------------------------------------------------------
// symbolic perturbation oracle: expand f(x + eps y1) as a polynomial in eps

/// Univariate polynomial in the first infinitesimal with exact integer
/// coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsPoly(pub Vec<BigInt>);

impl EpsPoly {
    fn trim(mut self) -> EpsPoly {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    /// Sign of the heaviest (lowest-power) nonzero term; 0 for the zero
    /// polynomial.
    pub fn leading_sign(&self) -> i8 {
        for c in &self.0 {
            if !c.is_zero() {
                return if c.is_positive() { 1 } else { -1 };
            }
        }
        0
    }
}

impl Ring for EpsPoly {
    fn from_i64(v: i64) -> Self {
        EpsPoly(vec![BigInt::from(v)])
    }
    fn neg(&self) -> Self {
        EpsPoly(self.0.iter().map(|c| -c).collect())
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut out = vec![BigInt::from(0); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            out[i] += c;
        }
        EpsPoly(out).trim()
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return EpsPoly(Vec::new());
        }
        let mut out = vec![BigInt::from(0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsPoly(out).trim()
    }
}

/// Sign of `f(x + eps_1 y_1)` by direct symbolic expansion with the same
/// frozen coefficient stream the engine uses. Returns 0 when the level-1
/// polynomial is identically zero (the engine would move to level 2).
pub fn symbolic_level1_sign<P: exactgeo::numeric::Predicate + ?Sized>(
    seed: PerturbationSeed,
    f: &P,
    values: &[i64],
    ids: &[u64],
) -> i8 {
    let args: Vec<EpsPoly> = values
        .iter()
        .zip(ids)
        .map(|(&v, &id)| {
            EpsPoly(vec![
                BigInt::from(v),
                BigInt::from(rand_coefficient(seed, 1, id)),
            ])
            .trim()
        })
        .collect();
    f.eval(&args).leading_sign()
}

// ---------------------------------------------------------------------------
// random geometry generators

/// Random circle with center inside `+-scale/2` and radius in
/// `[scale/20, scale/4]`.
pub fn random_circle(rng: &mut TestRng, scale: i64) -> Circle {
    Circle::new(
        exactgeo::QuantizedPoint::new(
            rng.range(-scale / 2, scale / 2),
            rng.range(-scale / 2, scale / 2),
        ),
        rng.range(scale / 20, scale / 4),
    )
}

/// Random pair of strictly intersecting circles.
pub fn random_intersecting_pair(rng: &mut TestRng, scale: i64) -> (Circle, Circle) {
    loop {
        let a = random_circle(rng, scale);
        let b = random_circle(rng, scale);
        let (_, _, _, _, beta2) = pair_exact(&a, &b);
        if beta2 > BigInt::from(0) {
            return (a, b);
        }
    }
}

// ---------------------------------------------------------------------------
// exact sampling oracles for boolean outputs

use exactgeo::numeric::QuantizedPoint;

/// Exact winding number of integer polygon loops at an integer point, by the
/// half-open horizontal ray rule. The caller guards against samples on the
/// boundary.
pub fn polygon_winding(px: i64, py: i64, loops: &[Vec<QuantizedPoint>]) -> i32 {
    let mut w = 0i32;
    for l in loops {
        for i in 0..l.len() {
            let (a, b) = (l[i], l[(i + 1) % l.len()]);
            let up = a.y <= py && py < b.y;
            let down = b.y <= py && py < a.y;
            if !up && !down {
                continue;
            }
            // strictly right of the sample: sign of cross(b - a, p - a)
            let cross = (b.x - a.x) as i128 * (py - a.y) as i128
                - (b.y - a.y) as i128 * (px - a.x) as i128;
            if up && cross > 0 {
                w += 1;
            } else if down && cross < 0 {
                w -= 1;
            }
        }
    }
    w
}

/// Conservatively true when the sample is at least `margin` from every edge.
pub fn far_from_polygon_edges(
    px: i64,
    py: i64,
    loops: &[Vec<QuantizedPoint>],
    margin: i64,
) -> bool {
    for l in loops {
        for i in 0..l.len() {
            let (a, b) = (l[i], l[(i + 1) % l.len()]);
            let out_of_box = px < a.x.min(b.x) - margin
                || px > a.x.max(b.x) + margin
                || py < a.y.min(b.y) - margin
                || py > a.y.max(b.y) + margin;
            if out_of_box {
                continue;
            }
            let cross = ((b.x - a.x) as i128 * (py - a.y) as i128
                - (b.y - a.y) as i128 * (px - a.x) as i128)
                .unsigned_abs();
            let reach = margin.unsigned_abs() as u128
                * ((b.x - a.x).unsigned_abs() + (b.y - a.y).unsigned_abs()) as u128;
            if cross < reach {
                return false;
            }
        }
    }
    true
}

/// One directed arc for the integer ray-winding oracle.
#[derive(Clone, Copy, Debug)]
pub struct IntArc {
    pub center: (i64, i64),
    pub radius: i64,
    pub ccw: bool,
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub full: bool,
}

fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Angular rank of a point on a circle, counted counterclockwise from the
/// right extreme. Returns (sector, signed x key ordered within the sector).
fn angular_key(center: (i64, i64), p: (i64, i64)) -> (u8, i64) {
    let dy = p.1 - center.1;
    if dy > 0 {
        (1, -(p.0 - center.0)) // upper half: x descending
    } else if dy < 0 {
        (3, p.0 - center.0) // lower half: x ascending
    } else if p.0 >= center.0 {
        (0, 0)
    } else {
        (2, 0)
    }
}

fn ccw_between(from: (u8, i64), mid: (u8, i64), to: (u8, i64)) -> bool {
    // strict cyclic order from -> mid -> to
    if from < to {
        from < mid && mid < to
    } else {
        mid > from || mid < to
    }
}

/// Signed crossings of the horizontal ray `x > px` with the arcs, or `None`
/// when a crossing comes too close to the sample, a vertex, or a comparison
/// margin. All decisions are exact integer arithmetic; `from`/`to` may be
/// rounded within 1/2 of the true endpoints, which the margins absorb.
pub fn arc_ray_winding(px: i64, py: i64, arcs: &[IntArc]) -> Option<i32> {
    const GUARD: i64 = 8;
    let mut w = 0i32;
    for a in arcs {
        if !a.full && ((a.from.1 - py).abs() < GUARD || (a.to.1 - py).abs() < GUARD) {
            return None;
        }
        let q = py - a.center.1;
        let rad2 = a.radius as i128 * a.radius as i128 - q as i128 * q as i128;
        if rad2 <= (GUARD as i128) * (GUARD as i128) * 4 {
            if rad2 > 0 {
                return None; // nearly tangent line: crossing order unreliable
            }
            continue;
        }
        let s = isqrt_u128(rad2 as u128) as i64;
        for (sel, x_c) in [(-1i64, a.center.0 - s), (1, a.center.0 + s)] {
            if (x_c - px).abs() < GUARD {
                return None;
            }
            if x_c <= px {
                continue;
            }
            let contained = if a.full {
                true
            } else {
                // compare the crossing against the endpoints by angular rank;
                // require clear x separation in shared sectors
                let ck = if q > 0 { (1u8, -(x_c - a.center.0)) } else { (3u8, x_c - a.center.0) };
                let fk = angular_key(a.center, a.from);
                let tk = angular_key(a.center, a.to);
                for ek in [fk, tk] {
                    if ek.0 == ck.0 && (ek.1 - ck.1).abs() < GUARD {
                        return None;
                    }
                }
                let (fk, tk, ck2) = if a.ccw { (fk, tk, ck) } else { (tk, fk, ck) };
                ccw_between(fk, ck2, tk)
            };
            if !contained {
                continue;
            }
            // counterclockwise travel moves upward through right-half
            // crossings and downward through left-half ones
            w += if (sel > 0) == a.ccw { 1 } else { -1 };
        }
    }
    Some(w)
}
