// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Deterministic input generators for the benchmark commands. The generator
//! seed is independent of the kernel's perturbation seed, so benchmarks never
//! disturb the perturbation stream.

use exactgeo::booleans::{ArcEdge, ArcLoop};
use exactgeo::numeric::{QuantizeMap, QuantizedPoint};
use exactgeo::predicates::{circles_intersect, Branch, Circle};
use exactgeo::Kernel;

/// Splitmix generator for input data.
#[derive(Clone)]
pub struct GenRng(pub u64);

impl GenRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = self.unit().max(1e-300);
        let v = self.unit();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }
}

/// `n` normally distributed points quantized from their own bounding box.
pub fn normal_points(n: usize, seed: u64) -> (Vec<QuantizedPoint>, QuantizeMap) {
    let mut rng = GenRng(seed);
    let raw: Vec<(f64, f64)> = (0..n).map(|_| (rng.normal(), rng.normal())).collect();
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    for &(x, y) in &raw {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    exactgeo::quantize(&raw, lo, hi)
}

/// `n` copies of the origin: the fully degenerate stress input.
pub fn origin_points(n: usize) -> (Vec<QuantizedPoint>, QuantizeMap) {
    let map = QuantizeMap::from_bounds((0.0, 0.0), (0.0, 0.0));
    (vec![QuantizedPoint { x: 0, y: 0 }; n], map)
}

/// Degeneracy class of the circular-arc benchmark inputs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcClass {
    /// independently random 4-gons
    Random,
    /// identical copies jittered by one quantum
    Near,
    /// exactly identical copies
    Exact,
}

struct RawGon {
    /// center x, center y, radius per side circle
    circles: [(f64, f64, f64); 4],
    ccw: [bool; 4],
    corners: [(f64, f64); 4],
}

/// One random arc 4-gon in the unit square: four corner points on a ring,
/// each side bulged into a circular arc.
fn raw_foursome(rng: &mut GenRng) -> RawGon {
    loop {
        let cx = 0.2 + 0.6 * rng.unit();
        let cy = 0.2 + 0.6 * rng.unit();
        let r = 0.04 + 0.10 * rng.unit();
        let mut angles: Vec<f64> = (0..4).map(|_| rng.unit() * std::f64::consts::TAU).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ok = true;
        for i in 0..4 {
            let gap = if i == 3 {
                angles[0] + std::f64::consts::TAU - angles[3]
            } else {
                angles[i + 1] - angles[i]
            };
            ok &= gap > 0.5;
        }
        if !ok {
            continue;
        }
        let corner = |i: usize| {
            let t = angles[i % 4];
            (cx + r * t.cos(), cy + r * t.sin())
        };
        let mut circles = [(0.0, 0.0, 0.0); 4];
        let mut ccw = [false; 4];
        let mut fine = true;
        for i in 0..4 {
            let (px, py) = corner(i);
            let (qx, qy) = corner(i + 1);
            let (dx, dy) = (qx - px, qy - py);
            let chord = (dx * dx + dy * dy).sqrt();
            // center on the perpendicular bisector; modest bulge keeps the
            // arcs short of semicircles
            let t = (0.3 + 0.9 * rng.unit()) * if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            let (mx, my) = ((px + qx) * 0.5, (py + qy) * 0.5);
            let (nx, ny) = (-dy / chord, dx / chord);
            let (ox, oy) = (mx + t * chord * nx, my + t * chord * ny);
            let rad = ((px - ox).powi(2) + (py - oy).powi(2)).sqrt();
            if rad > 0.8 {
                fine = false;
                break;
            }
            circles[i] = (ox, oy, rad);
            // travel from corner i to corner i+1 along the shorter arc
            let a0 = (py - oy).atan2(px - ox);
            let a1 = (qy - oy).atan2(qx - ox);
            let ccw_span = (a1 - a0).rem_euclid(std::f64::consts::TAU);
            ccw[i] = ccw_span < std::f64::consts::PI;
        }
        if fine {
            let corners = [corner(0), corner(1), corner(2), corner(3)];
            return RawGon { circles, ccw, corners };
        }
    }
}

/// Generate `count` arc 4-gons of the given class, quantized to the kernel
/// range, with the branch of every joint resolved against the intended
/// corner. Returns the circle table and one loop per 4-gon.
pub fn arc_foursomes(
    kernel: &Kernel,
    count: usize,
    class: ArcClass,
    seed: u64,
) -> (Vec<Circle>, Vec<ArcLoop>) {
    arc_foursomes_with_jitter(kernel, count, class, seed, NEAR_JITTER)
}

/// Default displacement of the near-degenerate class, in quanta. Large enough
/// that the interval filter resolves nearly every predicate (the class is
/// meant to cost interval arithmetic, not exact arithmetic), tiny relative to
/// the coordinate range (2^-29 of it).
pub const NEAR_JITTER: i64 = 1 << 24;

pub fn arc_foursomes_with_jitter(
    kernel: &Kernel,
    count: usize,
    class: ArcClass,
    seed: u64,
    jitter: i64,
) -> (Vec<Circle>, Vec<ArcLoop>) {
    let mut rng = GenRng(seed);
    let map = QuantizeMap::from_bounds((0.0, 0.0), (1.0, 1.0));
    'all: loop {
        let mut raws: Vec<RawGon> = Vec::with_capacity(count);
        match class {
            ArcClass::Random => {
                for _ in 0..count {
                    raws.push(raw_foursome(&mut rng));
                }
            }
            ArcClass::Near | ArcClass::Exact => {
                let base = raw_foursome(&mut rng);
                for _ in 0..count {
                    raws.push(RawGon { circles: base.circles, ccw: base.ccw, corners: base.corners });
                }
            }
        }
        let mut circles: Vec<Circle> = Vec::with_capacity(4 * count);
        let mut loops: Vec<ArcLoop> = Vec::with_capacity(count);
        for raw in &raws {
            let base = circles.len() as u32;
            for &(ox, oy, rad) in &raw.circles {
                let mut center = map.apply((ox, oy));
                let mut radius = map.apply_length(rad).max(1);
                if class == ArcClass::Near {
                    center.x += rng.range_i64(-jitter, jitter);
                    center.y += rng.range_i64(-jitter, jitter);
                    radius = (radius + rng.range_i64(-jitter, jitter)).max(1);
                }
                circles.push(Circle::new(center, radius));
            }
            // resolve joint branches against the intended corners
            let mut arcs = Vec::with_capacity(4);
            for i in 0..4 {
                let c_this = base + i as u32;
                let c_next = base + ((i + 1) % 4) as u32;
                if !circles_intersect(kernel, &circles, c_this, c_next) {
                    continue 'all; // quantization broke a joint; regenerate
                }
                let corner = intended_corner(raw, i);
                let branch = closer_branch(&circles, c_this, c_next, map, corner);
                arcs.push(ArcEdge { circle: c_this, ccw: raw.ccw[i], end_branch: branch });
            }
            loops.push(ArcLoop::Arcs(arcs));
        }
        return (circles, loops);
    }
}

/// Intended corner between side `i` and side `i + 1` in unit coordinates.
fn intended_corner(raw: &RawGon, i: usize) -> (f64, f64) {
    raw.corners[(i + 1) % 4]
}

/// Both intersection points of two circles in f64; first is the left branch
/// of the ordered pair.
fn circle_circle_f64(a: (f64, f64, f64), b: (f64, f64, f64)) -> ((f64, f64), (f64, f64)) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l = dx * dx + dy * dy;
    let alpha = (l + a.2 * a.2 - b.2 * b.2) / (2.0 * l);
    let beta2 = (a.2 * a.2 / l - alpha * alpha).max(0.0);
    let beta = beta2.sqrt();
    let (mx, my) = (a.0 + alpha * dx, a.1 + alpha * dy);
    // perp of (dx, dy) is (-dy, dx): left branch has positive beta
    ((mx - beta * dy, my + beta * dx), (mx + beta * dy, my - beta * dx))
}

/// Branch of the quantized intersection closest to the intended corner.
fn closer_branch(
    circles: &[Circle],
    c0: u32,
    c1: u32,
    map: QuantizeMap,
    corner: (f64, f64),
) -> Branch {
    let a = circles[c0 as usize];
    let b = circles[c1 as usize];
    let (la, lb) = (map.unapply(a.center), map.unapply(b.center));
    let ra = a.radius as f64 / map.scale;
    let rb = b.radius as f64 / map.scale;
    let (left, right) = circle_circle_f64((la.0, la.1, ra), (lb.0, lb.1, rb));
    let d2 = |p: (f64, f64)| (p.0 - corner.0).powi(2) + (p.1 - corner.1).powi(2);
    if d2(left) <= d2(right) {
        Branch::Left
    } else {
        Branch::Right
    }
}

/// Random triangles for the polygon benchmarks, quantized into the kernel
/// range from the unit square.
pub fn random_triangles(count: usize, seed: u64) -> Vec<Vec<QuantizedPoint>> {
    let mut rng = GenRng(seed);
    let map = QuantizeMap::from_bounds((0.0, 0.0), (1.0, 1.0));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<QuantizedPoint> = (0..3)
            .map(|_| map.apply((0.1 + 0.8 * rng.unit(), 0.1 + 0.8 * rng.unit())))
            .collect();
        // keep them counterclockwise and non-sliver
        let area2 = (p[1].x - p[0].x) as i128 * (p[2].y - p[0].y) as i128
            - (p[1].y - p[0].y) as i128 * (p[2].x - p[0].x) as i128;
        if area2 > (1i128) << 80 {
            out.push(p);
        } else if area2 < -((1i128) << 80) {
            out.push(vec![p[0], p[2], p[1]]);
        }
    }
    out
}
