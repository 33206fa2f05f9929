// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! The shipped geometric predicates and constructions.
//!
//! Points and circles are referenced by index into caller-owned slices; the
//! index doubles as the stable perturbation identity of their coordinates, so
//! the same input coordinate is perturbed identically in every predicate that
//! touches it.
//!
//! The circle comparisons reduce to quantities of the form
//! `A + B1 sqrt(C1) + B2 sqrt(C2)`. Their signs are resolved by checking the
//! signs of `A`, `B1`, `B2` and, when they disagree, squaring through the
//! factored polynomials `D` (degree 8), `F` (degree 6) and `E = E+ * E-`
//! (degree 6 each), with strictly positive factors dropped. Every sign test
//! goes through the full perturbation cascade, so the comparisons are total
//! even on exactly tangent, concentric, or identical circles.

use crate::numeric::{Predicate, QuantizedPoint, Ring};
use crate::perturb::{
    perturbed_construction, perturbed_sign, Component, Construction, ConstructionError, Kernel,
    Sign,
};

/// Coordinate ids for point `i`: x is `2i`, y is `2i + 1`.
#[inline]
pub fn point_ids(i: u32) -> [u64; 2] {
    [2 * i as u64, 2 * i as u64 + 1]
}

/// Circle scalars live in their own id region so point and circle universes
/// never collide.
pub const CIRCLE_ID_BASE: u64 = 1 << 62;

/// Coordinate ids for circle `i`: center x, center y, radius.
#[inline]
pub fn circle_ids(i: u32) -> [u64; 3] {
    let b = CIRCLE_ID_BASE + 3 * i as u64;
    [b, b + 1, b + 2]
}

/// Circle with integer center and positive integer radius.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Circle {
    pub center: QuantizedPoint,
    pub radius: i64,
}

impl Circle {
    pub fn new(center: QuantizedPoint, radius: i64) -> Circle {
        debug_assert!(radius > 0);
        Circle { center, radius }
    }
}

/// Which intersection of an ordered circle pair: `Left` is the one on the
/// left of the directed line from the first center to the second.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    #[inline]
    pub fn flip(self) -> Branch {
        match self {
            Branch::Left => Branch::Right,
            Branch::Right => Branch::Left,
        }
    }

    #[inline]
    pub fn sigma(self) -> i64 {
        match self {
            Branch::Left => 1,
            Branch::Right => -1,
        }
    }
}

/// One intersection point of two circles, identified by the ordered pair and
/// the branch. The same geometric vertex referenced through the reversed pair
/// has the flipped branch.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CircleIntersection {
    pub c0: u32,
    pub c1: u32,
    pub branch: Branch,
}

impl CircleIntersection {
    pub fn new(c0: u32, c1: u32, branch: Branch) -> CircleIntersection {
        debug_assert_ne!(c0, c1);
        CircleIntersection { c0, c1, branch }
    }

    /// Same vertex keyed with the lower circle index first.
    pub fn canonical(self) -> CircleIntersection {
        if self.c0 <= self.c1 {
            self
        } else {
            CircleIntersection { c0: self.c1, c1: self.c0, branch: self.branch.flip() }
        }
    }
}

// ---------------------------------------------------------------------------
// point predicates

pub struct OrientPred;

impl Predicate for OrientPred {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let (px, py, qx, qy, rx, ry) = (&a[0], &a[1], &a[2], &a[3], &a[4], &a[5]);
        qx.sub(px).mul(&ry.sub(py)).sub(&qy.sub(py).mul(&rx.sub(px)))
    }
}

pub struct InCirclePred;

impl Predicate for InCirclePred {
    fn arity(&self) -> usize {
        8
    }
    fn degree(&self) -> usize {
        4
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        // rows (p - s, q - s, r - s) with squared norms; positive means s
        // inside the circumcircle of counterclockwise (p, q, r)
        let (sx, sy) = (&a[6], &a[7]);
        let row = |x: &R, y: &R| {
            let dx = x.sub(sx);
            let dy = y.sub(sy);
            let n = dx.square().add(&dy.square());
            (dx, dy, n)
        };
        let (ax, ay, an) = row(&a[0], &a[1]);
        let (bx, by, bn) = row(&a[2], &a[3]);
        let (cx, cy, cn) = row(&a[4], &a[5]);
        let m1 = bx.mul(&cy).sub(&by.mul(&cx));
        let m2 = ax.mul(&cy).sub(&ay.mul(&cx));
        let m3 = ax.mul(&by).sub(&ay.mul(&bx));
        an.mul(&m1).sub(&bn.mul(&m2)).add(&cn.mul(&m3))
    }
}

fn point_args(pts: &[QuantizedPoint], idx: &[u32]) -> (Vec<i64>, Vec<u64>) {
    let mut vals = Vec::with_capacity(2 * idx.len());
    let mut ids = Vec::with_capacity(2 * idx.len());
    for &i in idx {
        let p = pts[i as usize];
        vals.push(p.x);
        vals.push(p.y);
        ids.extend_from_slice(&point_ids(i));
    }
    (vals, ids)
}

/// Is triangle `(p, q, r)` counterclockwise under perturbation? Total and
/// deterministic for every input with distinct indices, including repeated
/// coordinates.
pub fn triangle_oriented(kernel: &Kernel, pts: &[QuantizedPoint], p: u32, q: u32, r: u32) -> bool {
    orientation_sign(kernel, pts, p, q, r).is_positive()
}

/// Perturbed orientation as a sign, for callers that fold it into other
/// predicates.
pub fn orientation_sign(kernel: &Kernel, pts: &[QuantizedPoint], p: u32, q: u32, r: u32) -> Sign {
    let (vals, ids) = point_args(pts, &[p, q, r]);
    perturbed_sign(kernel, &OrientPred, &vals, &ids)
}

/// Is `s` strictly inside the perturbed circumcircle of triangle `(p, q, r)`?
/// The raw determinant sign is adjusted by the perturbed orientation, so the
/// triangle may be given in either order.
pub fn incircle(kernel: &Kernel, pts: &[QuantizedPoint], p: u32, q: u32, r: u32, s: u32) -> bool {
    let (vals, ids) = point_args(pts, &[p, q, r, s]);
    let det = perturbed_sign(kernel, &InCirclePred, &vals, &ids);
    det == orientation_sign(kernel, pts, p, q, r)
}

/// Incircle determinant sign for a triangle already known counterclockwise
/// under perturbation.
pub fn incircle_assuming_ccw(
    kernel: &Kernel,
    pts: &[QuantizedPoint],
    p: u32,
    q: u32,
    r: u32,
    s: u32,
) -> bool {
    let (vals, ids) = point_args(pts, &[p, q, r, s]);
    perturbed_sign(kernel, &InCirclePred, &vals, &ids).is_positive()
}

// ---------------------------------------------------------------------------
// circle predicate polynomials
//
// Arity-9 polynomials read their arguments as three (center x, center y,
// radius) triples. `swap_xy` transposes the plane, which turns every
// y comparison into the x comparison of the mirrored configuration (branch
// signs flip; callers fold that in).

struct Trip<R> {
    x: R,
    y: R,
    r: R,
}

#[inline]
fn trip<R: Ring>(a: &[R], i: usize, swap_xy: bool) -> Trip<R> {
    let x = a[3 * i].clone();
    let y = a[3 * i + 1].clone();
    let r = a[3 * i + 2].clone();
    if swap_xy {
        Trip { x: y, y: x, r }
    } else {
        Trip { x, y, r }
    }
}

struct PairTerms<R> {
    dx: R,
    dy: R,
    /// squared center distance
    l: R,
    /// alpha-hat = l + r0^2 - r1^2
    alpha: R,
}

#[inline]
fn pair_terms<R: Ring>(c0: &Trip<R>, c1: &Trip<R>) -> PairTerms<R> {
    let dx = c1.x.sub(&c0.x);
    let dy = c1.y.sub(&c0.y);
    let l = dx.square().add(&dy.square());
    let alpha = l.add(&c0.r.square()).sub(&c1.r.square());
    PairTerms { dx, dy, l, alpha }
}

/// beta-hat^2 = 4 r0^2 l - alpha^2: positive exactly when the circles cross.
#[inline]
fn beta_sq<R: Ring>(c0: &Trip<R>, p: &PairTerms<R>) -> R {
    R::from_i64(4).mul(&c0.r.square()).mul(&p.l).sub(&p.alpha.square())
}

pub struct CirclesIntersectPred;

impl Predicate for CirclesIntersectPred {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        4
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        beta_sq(&c0, &p)
    }
}

/// A = alpha02 d02y l1 - alpha01 d01y l2 (degree 5).
pub struct CmpA {
    pub swap_xy: bool,
}

impl Predicate for CmpA {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        5
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, self.swap_xy);
        let c1 = trip(a, 1, self.swap_xy);
        let c2 = trip(a, 2, self.swap_xy);
        let p1 = pair_terms(&c0, &c1);
        let p2 = pair_terms(&c0, &c2);
        p2.alpha.mul(&p2.dy).mul(&p1.l).sub(&p1.alpha.mul(&p1.dy).mul(&p2.l))
    }
}

/// B1 = -sigma1 d01x l2 and B2 = +sigma2 d02x l1 (degree 3).
pub struct CmpB {
    pub swap_xy: bool,
    /// 0 selects the circle-1 radical's coefficient, 1 the circle-2 one
    pub which: usize,
    pub sigma: i64,
}

impl Predicate for CmpB {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        3
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, self.swap_xy);
        let c1 = trip(a, 1, self.swap_xy);
        let c2 = trip(a, 2, self.swap_xy);
        let p1 = pair_terms(&c0, &c1);
        let p2 = pair_terms(&c0, &c2);
        let v = if self.which == 0 { p1.dx.mul(&p2.l).neg() } else { p2.dx.mul(&p1.l) };
        R::from_i64(self.sigma).mul(&v)
    }
}

/// Degree-8 inner factor of A^2 + B1^2 C1 - B2^2 C2; the strictly positive
/// factor l2 is dropped. Circle slot 1 must hold the kept radical.
pub struct CmpD {
    pub swap_xy: bool,
}

impl Predicate for CmpD {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        8
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, self.swap_xy);
        let c1 = trip(a, 1, self.swap_xy);
        let c2 = trip(a, 2, self.swap_xy);
        let p1 = pair_terms(&c0, &c1);
        let p2 = pair_terms(&c0, &c2);
        let r0sq = c0.r.square();
        let (x1s, y1s) = (p1.dx.square(), p1.dy.square());
        let (x2s, y2s) = (p2.dx.square(), p2.dy.square());
        let t1 = p2.alpha.mul(
            &p2.alpha
                .mul(&p1.l)
                .sub(&R::from_i64(2).mul(&p1.alpha).mul(&p1.dy).mul(&p2.dy)),
        );
        let t2 = R::from_i64(4).mul(&r0sq).mul(&x1s.mul(&y2s).sub(&y1s.mul(&x2s)));
        let t3 = p1.alpha.square().mul(&x1s.sub(&y1s)).mul(&p2.l);
        p1.l.mul(&t1.add(&t2)).sub(&t3)
    }
}

/// Degree-6 inner factor of A^2 - B1^2 C1 - B2^2 C2; the strictly positive
/// factor l1 l2 is dropped. Symmetric in circles 1 and 2.
pub struct CmpF {
    pub swap_xy: bool,
}

impl Predicate for CmpF {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        6
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, self.swap_xy);
        let c1 = trip(a, 1, self.swap_xy);
        let c2 = trip(a, 2, self.swap_xy);
        let p1 = pair_terms(&c0, &c1);
        let p2 = pair_terms(&c0, &c2);
        let r0sq = c0.r.square();
        let (x1s, y1s) = (p1.dx.square(), p1.dy.square());
        let (x2s, y2s) = (p2.dx.square(), p2.dy.square());
        let cross = y1s.mul(&x2s).add(&x1s.mul(&y2s)).add(&R::from_i64(2).mul(&x1s).mul(&x2s));
        p2.l.mul(&p1.alpha.square())
            .add(&p1.l.mul(&p2.alpha.square()))
            .sub(&R::from_i64(2).mul(&p1.dy).mul(&p2.dy).mul(&p1.alpha).mul(&p2.alpha))
            .sub(&R::from_i64(4).mul(&r0sq).mul(&cross))
    }
}

/// Degree-6 factors E+ and E- of the fully squared comparison:
/// E = l1^2 l2^2 E+ E-. Symmetric in circles 1 and 2. The E- factor is not
/// invariant under the plane transposition, so the swap flag applies here
/// too.
pub struct CmpE {
    pub swap_xy: bool,
    pub plus: bool,
}

impl Predicate for CmpE {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        6
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, self.swap_xy);
        let c1 = trip(a, 1, self.swap_xy);
        let c2 = trip(a, 2, self.swap_xy);
        let p1 = pair_terms(&c0, &c1);
        let p2 = pair_terms(&c0, &c2);
        let r0sq = c0.r.square();
        let (dot, wedge) = if self.plus {
            (
                p1.dy.mul(&p2.dy).add(&p1.dx.mul(&p2.dx)),
                p1.dx.mul(&p2.dy).sub(&p1.dy.mul(&p2.dx)),
            )
        } else {
            (
                p1.dy.mul(&p2.dy).sub(&p1.dx.mul(&p2.dx)),
                p1.dx.mul(&p2.dy).add(&p1.dy.mul(&p2.dx)),
            )
        };
        p2.l.mul(&p1.alpha.square())
            .add(&p1.l.mul(&p2.alpha.square()))
            .sub(&R::from_i64(2).mul(&p1.alpha).mul(&p2.alpha).mul(&dot))
            .sub(&R::from_i64(4).mul(&r0sq).mul(&wedge.square()))
    }
}

/// Center offset component of pair (0, 1): coord 0 is x, 1 is y.
struct PairDelta {
    coord: usize,
}

impl Predicate for PairDelta {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        a[3 + self.coord].sub(&a[self.coord])
    }
}

fn circle_args(circles: &[Circle], idx: &[u32]) -> (Vec<i64>, Vec<u64>) {
    let mut vals = Vec::with_capacity(3 * idx.len());
    let mut ids = Vec::with_capacity(3 * idx.len());
    for &i in idx {
        let c = circles[i as usize];
        vals.push(c.center.x);
        vals.push(c.center.y);
        vals.push(c.radius);
        ids.extend_from_slice(&circle_ids(i));
    }
    (vals, ids)
}

/// Do the two circles intersect in the perturbed world? Tangent, concentric
/// and identical-parameter circles all get a deterministic answer.
pub fn circles_intersect(kernel: &Kernel, circles: &[Circle], i: u32, j: u32) -> bool {
    debug_assert_ne!(i, j);
    let (vals, ids) = circle_args(circles, &[i, j]);
    perturbed_sign(kernel, &CirclesIntersectPred, &vals, &ids).is_positive()
}

/// Sign of `A + B1 sqrt(C1) + B2 sqrt(C2)` via the squaring cascade, where
/// the `C`s are the beta^2 polynomials of pairs (0,1) and (0,2). Both pairs
/// must intersect in the perturbed world so the radicals are real.
fn radical_pair_positive(
    kernel: &Kernel,
    vals: &[i64],
    ids: &[u64],
    swap_xy: bool,
    sigma1: i64,
    sigma2: i64,
) -> bool {
    let sa = perturbed_sign(kernel, &CmpA { swap_xy }, vals, ids);
    let s1 = perturbed_sign(kernel, &CmpB { swap_xy, which: 0, sigma: sigma1 }, vals, ids);
    let s2 = perturbed_sign(kernel, &CmpB { swap_xy, which: 1, sigma: sigma2 }, vals, ids);
    if s1 == sa && s2 == sa {
        return sa.is_positive();
    }
    let e_positive = || {
        let ep = perturbed_sign(kernel, &CmpE { swap_xy, plus: true }, vals, ids);
        let em = perturbed_sign(kernel, &CmpE { swap_xy, plus: false }, vals, ids);
        ep == em
    };
    if s1 != sa && s2 != sa {
        // both radical terms oppose A
        let f = perturbed_sign(kernel, &CmpF { swap_xy }, vals, ids);
        let pos_case = f.is_positive() && e_positive();
        return if sa.is_positive() { pos_case } else { !pos_case };
    }
    // exactly one radical term opposes A; slot 1 of D holds the kept term
    let d = if s1 == sa {
        perturbed_sign(kernel, &CmpD { swap_xy }, vals, ids)
    } else {
        let mut v = vals.to_vec();
        let mut id2 = ids.to_vec();
        v[3..6].copy_from_slice(&vals[6..9]);
        v[6..9].copy_from_slice(&vals[3..6]);
        id2[3..6].copy_from_slice(&ids[6..9]);
        id2[6..9].copy_from_slice(&ids[3..6]);
        perturbed_sign(kernel, &CmpD { swap_xy }, &v, &id2)
    };
    if sa.is_positive() {
        d.is_positive() || !e_positive()
    } else {
        !d.is_positive() && e_positive()
    }
}

/// Is intersection `p01` strictly below intersection `p02` in y? Both pairs
/// share circle `c0` and must satisfy [`circles_intersect`].
///
/// Comparing the two branches of a single pair is resolved directly: the
/// branches differ by the sign of the perpendicular offset.
pub fn intersection_below(
    kernel: &Kernel,
    circles: &[Circle],
    c0: u32,
    c1: u32,
    b1: Branch,
    c2: u32,
    b2: Branch,
) -> bool {
    debug_assert_ne!(c0, c1);
    debug_assert_ne!(c0, c2);
    if c1 == c2 {
        if b1 == b2 {
            return false;
        }
        // y(left) - y(right) = 2 sqrt(beta^2) d01x / (2 l1)
        let (vals, ids) = circle_args(circles, &[c0, c1]);
        let dx_pos = perturbed_sign(kernel, &PairDelta { coord: 0 }, &vals, &ids).is_positive();
        return if b1 == Branch::Left { !dx_pos } else { dx_pos };
    }
    let (vals, ids) = circle_args(circles, &[c0, c1, c2]);
    radical_pair_positive(kernel, &vals, &ids, false, b1.sigma(), b2.sigma())
}

/// Is intersection `p01` strictly left of `p02` in x? Transposing the plane
/// turns this into a below comparison with both branches flipped.
pub fn intersection_left_of(
    kernel: &Kernel,
    circles: &[Circle],
    c0: u32,
    c1: u32,
    b1: Branch,
    c2: u32,
    b2: Branch,
) -> bool {
    debug_assert_ne!(c0, c1);
    debug_assert_ne!(c0, c2);
    if c1 == c2 {
        if b1 == b2 {
            return false;
        }
        // x(left) - x(right) = -2 sqrt(beta^2) d01y / (2 l1)
        let (vals, ids) = circle_args(circles, &[c0, c1]);
        let dy_pos = perturbed_sign(kernel, &PairDelta { coord: 1 }, &vals, &ids).is_positive();
        return if b1 == Branch::Left { dy_pos } else { !dy_pos };
    }
    let (vals, ids) = circle_args(circles, &[c0, c1, c2]);
    radical_pair_positive(kernel, &vals, &ids, true, -b1.sigma(), -b2.sigma())
}

// ---------------------------------------------------------------------------
// constructions

/// Coordinates of one circle-pair intersection:
/// `(2 l c0 + alpha d +- sqrt(beta^2) d_perp) / (2 l)` per coordinate.
struct CircleIntersectionConstruction {
    sigma: i64,
}

impl Construction for CircleIntersectionConstruction {
    fn arity(&self) -> usize {
        6
    }
    fn outputs(&self) -> usize {
        2
    }
    fn degree(&self) -> usize {
        // multiplier^2 * radicand reaches degree 6
        6
    }
    fn has_sqrt(&self, _: usize) -> bool {
        true
    }
    fn eval_component<R: Ring>(&self, comp: Component, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        match comp {
            Component::Denominator => R::from_i64(2).mul(&p.l),
            Component::Numerator(0) => R::from_i64(2).mul(&p.l).mul(&c0.x).add(&p.alpha.mul(&p.dx)),
            Component::Numerator(1) => R::from_i64(2).mul(&p.l).mul(&c0.y).add(&p.alpha.mul(&p.dy)),
            // perp of (dx, dy) is (-dy, dx)
            Component::SqrtMultiplier(0) => R::from_i64(-self.sigma).mul(&p.dy),
            Component::SqrtMultiplier(1) => R::from_i64(self.sigma).mul(&p.dx),
            Component::SqrtRadicand(_) => beta_sq(&c0, &p),
            _ => unreachable!(),
        }
    }
}

/// Exactly rounded intersection point of two perturbed circles: within 1/2 of
/// the true perturbed intersection per coordinate.
pub fn circle_intersection_point(
    kernel: &Kernel,
    circles: &[Circle],
    v: CircleIntersection,
) -> Result<QuantizedPoint, ConstructionError> {
    let (vals, ids) = circle_args(circles, &[v.c0, v.c1]);
    let c = CircleIntersectionConstruction { sigma: v.branch.sigma() };
    let out = perturbed_construction(kernel, &c, &vals, &ids)?;
    Ok(QuantizedPoint { x: out[0], y: out[1] })
}

/// Intersection of segments `(a, b)` and `(c, d)` as `a + t (b - a)` with
/// `t = cross(c - a, d - c) / cross(b - a, d - c)`.
struct SegmentIntersectionConstruction;

impl Construction for SegmentIntersectionConstruction {
    fn arity(&self) -> usize {
        8
    }
    fn outputs(&self) -> usize {
        2
    }
    fn degree(&self) -> usize {
        3
    }
    fn has_sqrt(&self, _: usize) -> bool {
        false
    }
    fn eval_component<R: Ring>(&self, comp: Component, a: &[R]) -> R {
        let (ax, ay, bx, by) = (&a[0], &a[1], &a[2], &a[3]);
        let (cx, cy, dx, dy) = (&a[4], &a[5], &a[6], &a[7]);
        let ex = dx.sub(cx);
        let ey = dy.sub(cy);
        let den = bx.sub(ax).mul(&ey).sub(&by.sub(ay).mul(&ex));
        match comp {
            Component::Denominator => den,
            Component::Numerator(i) => {
                let num = cx.sub(ax).mul(&ey).sub(&cy.sub(ay).mul(&ex));
                if i == 0 {
                    ax.mul(&den).add(&num.mul(&bx.sub(ax)))
                } else {
                    ay.mul(&den).add(&num.mul(&by.sub(ay)))
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Do segments `(a, b)` and `(c, d)` cross under perturbation? Segments
/// sharing an endpoint index touch only at that shared vertex and report
/// false.
pub fn segments_intersect(
    kernel: &Kernel,
    pts: &[QuantizedPoint],
    a: u32,
    b: u32,
    c: u32,
    d: u32,
) -> bool {
    if a == b || c == d || a == c || a == d || b == c || b == d {
        return false;
    }
    let o = |p, q, r| orientation_sign(kernel, pts, p, q, r);
    o(a, b, c) != o(a, b, d) && o(c, d, a) != o(c, d, b)
}

/// Rounded crossing point of two segments; requires [`segments_intersect`].
pub fn segment_intersection_point(
    kernel: &Kernel,
    pts: &[QuantizedPoint],
    a: u32,
    b: u32,
    c: u32,
    d: u32,
) -> Result<QuantizedPoint, ConstructionError> {
    let (vals, ids) = point_args(pts, &[a, b, c, d]);
    let out = perturbed_construction(kernel, &SegmentIntersectionConstruction, &vals, &ids)?;
    Ok(QuantizedPoint { x: out[0], y: out[1] })
}

// ---------------------------------------------------------------------------
// predicates for arc arrangements: comparisons of circle-pair intersections
// and circle/line crossings against horizontal anchor lines of exactly known
// (degree 1) height

/// r0^2 - (hy - c0y)^2: does circle 0 reach the horizontal line through the
/// center of circle 1 (args are two circle triples)?
pub struct ReachesLinePred;

impl Predicate for ReachesLinePred {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let cy = &a[1];
        let r = &a[2];
        let hy = &a[4];
        r.square().sub(&hy.sub(cy).square())
    }
}

/// Does circle `c` cross the horizontal line through the center of circle
/// `anchor`?
pub fn circle_reaches_line(kernel: &Kernel, circles: &[Circle], c: u32, anchor: u32) -> bool {
    debug_assert_ne!(c, anchor);
    let (vals, ids) = circle_args(circles, &[c, anchor]);
    perturbed_sign(kernel, &ReachesLinePred, &vals, &ids).is_positive()
}

/// u = 2 l1 (c0y - hy) + alpha01 d01y for the vertex-below-line test
/// (args: circles 0, 1, anchor).
struct VertexLineU;

impl Predicate for VertexLineU {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        3
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        let hy = &a[7];
        R::from_i64(2).mul(&p.l).mul(&c0.y.sub(hy)).add(&p.alpha.mul(&p.dy))
    }
}

/// u^2 - d01x^2 beta^2 for the vertex-below-line test (degree 6).
struct VertexLineW;

impl Predicate for VertexLineW {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        6
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        let u = VertexLineU.eval(a);
        u.square().sub(&p.dx.square().mul(&beta_sq(&c0, &p)))
    }
}

/// Is the intersection `(c0, c1, branch)` strictly below the horizontal line
/// through the center of circle `anchor`?
pub fn vertex_below_line(
    kernel: &Kernel,
    circles: &[Circle],
    v: CircleIntersection,
    anchor: u32,
) -> bool {
    let (vals, ids) = circle_args(circles, &[v.c0, v.c1, anchor]);
    // vertex y - line y has sign of u + sigma sqrt(beta^2) d01x; fold d01x
    // into the radical coefficient by testing -(...) > 0
    !single_radical_positive_scaled(kernel, &vals, &ids, v.branch.sigma())
}

/// sign of u + sigma d01x sqrt(beta^2) with u from [`VertexLineU`]; the
/// radical coefficient has a polynomial factor, so its sign joins the test.
fn single_radical_positive_scaled(
    kernel: &Kernel,
    vals: &[i64],
    ids: &[u64],
    sigma: i64,
) -> bool {
    let su = perturbed_sign(kernel, &VertexLineU, vals, ids);
    let sb = {
        let raw = perturbed_sign(
            kernel,
            &PairDelta9 { coord: 0 },
            vals,
            ids,
        );
        if sigma > 0 {
            raw
        } else {
            raw.flip()
        }
    };
    if su == sb {
        return su.is_positive();
    }
    let sw = perturbed_sign(kernel, &VertexLineW, vals, ids);
    (su == Sign::Positive) == (sw == Sign::Positive)
}

/// Center offset component of pair (0, 1) inside a 3-circle argument list.
struct PairDelta9 {
    coord: usize,
}

impl Predicate for PairDelta9 {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        a[3 + self.coord].sub(&a[self.coord])
    }
}

/// u = alpha01 d01y: vertex y relative to its own circle's center.
struct VertexUpperU;

impl Predicate for VertexUpperU {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        3
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        p.alpha.mul(&p.dy)
    }
}

struct VertexUpperW;

impl Predicate for VertexUpperW {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        6
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        let u = p.alpha.mul(&p.dy);
        u.square().sub(&p.dx.square().mul(&beta_sq(&c0, &p)))
    }
}

/// Is the vertex strictly above the horizontal line through its own circle's
/// center (the center of `v.c0`)?
pub fn vertex_in_upper_half(kernel: &Kernel, circles: &[Circle], v: CircleIntersection) -> bool {
    let (vals, ids) = circle_args(circles, &[v.c0, v.c1]);
    // y - c0y ~ alpha d01y + sigma sqrt(beta^2) d01x
    let su = perturbed_sign(kernel, &VertexUpperU, &vals, &ids);
    let sb = {
        let raw = perturbed_sign(kernel, &PairDelta { coord: 0 }, &vals, &ids);
        if v.branch == Branch::Left {
            raw
        } else {
            raw.flip()
        }
    };
    if su == sb {
        return su.is_positive();
    }
    let sw = perturbed_sign(kernel, &VertexUpperW, &vals, &ids);
    (su == Sign::Positive) == (sw == Sign::Positive)
}

struct VertexRightU;

impl Predicate for VertexRightU {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        3
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        p.alpha.mul(&p.dx)
    }
}

struct VertexRightW;

impl Predicate for VertexRightW {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        6
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let c0 = trip(a, 0, false);
        let c1 = trip(a, 1, false);
        let p = pair_terms(&c0, &c1);
        let u = p.alpha.mul(&p.dx);
        u.square().sub(&p.dy.square().mul(&beta_sq(&c0, &p)))
    }
}

/// Is the vertex strictly right of its own circle's center (the center of
/// `v.c0`)?
pub fn vertex_in_right_half(kernel: &Kernel, circles: &[Circle], v: CircleIntersection) -> bool {
    let (vals, ids) = circle_args(circles, &[v.c0, v.c1]);
    // x - c0x ~ alpha d01x - sigma sqrt(beta^2) d01y
    let su = perturbed_sign(kernel, &VertexRightU, &vals, &ids);
    let sb = {
        let raw = perturbed_sign(kernel, &PairDelta { coord: 1 }, &vals, &ids);
        if v.branch == Branch::Left {
            raw.flip()
        } else {
            raw
        }
    };
    if su == sb {
        return su.is_positive();
    }
    let sw = perturbed_sign(kernel, &VertexRightW, &vals, &ids);
    (su == Sign::Positive) == (sw == Sign::Positive)
}

/// x-offset between two circle/line crossings on the anchor line through the
/// center of circle 2: `(c0x + s0 sqrt(C0)) - (c1x + s1 sqrt(C1))`.
/// Args are circles (0, 1, anchor). A = c0x - c1x, C_i = r_i^2 - q_i^2.
struct LineCrossA;

impl Predicate for LineCrossA {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        a[0].sub(&a[3])
    }
}

struct LineCrossRad {
    which: usize,
}

impl Predicate for LineCrossRad {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let o = 3 * self.which;
        let (cy, r) = (&a[o + 1], &a[o + 2]);
        let hy = &a[7];
        r.square().sub(&hy.sub(cy).square())
    }
}

/// A^2 + C0 - C1 (degree 2 after collapse; declared bound 2).
struct LineCrossD;

impl Predicate for LineCrossD {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let d = LineCrossA.eval(a);
        d.square()
            .add(&LineCrossRad { which: 0 }.eval(a))
            .sub(&LineCrossRad { which: 1 }.eval(a))
    }
}

/// E = D^2 - 4 A^2 C0 (degree 4).
struct LineCrossE;

impl Predicate for LineCrossE {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        4
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let d = LineCrossD.eval(a);
        let aa = LineCrossA.eval(a).square();
        d.square().sub(&R::from_i64(4).mul(&aa).mul(&LineCrossRad { which: 0 }.eval(a)))
    }
}

/// Is crossing `(c0, s0)` of the anchor line strictly left of crossing
/// `(c1, s1)`? `s = +1` selects the right crossing of its circle. Both
/// circles must reach the line; `c0 != c1`.
pub fn line_crossing_left_of(
    kernel: &Kernel,
    circles: &[Circle],
    c0: u32,
    s0: i64,
    c1: u32,
    s1: i64,
    anchor: u32,
) -> bool {
    debug_assert_ne!(c0, c1);
    let (vals, ids) = circle_args(circles, &[c0, c1, anchor]);
    // want sign of (c1x + s1 sqrt(C1)) - (c0x + s0 sqrt(C0)) > 0, i.e.
    // -A - s0 sqrt(C0) + s1 sqrt(C1) > 0; run the pair cascade with
    // A' = -A, B0 = -s0, B1 = +s1 and unit radical coefficients
    let sa = perturbed_sign(kernel, &LineCrossA, &vals, &ids).flip();
    let sb0 = if s0 > 0 { Sign::Negative } else { Sign::Positive };
    let sb1 = if s1 > 0 { Sign::Positive } else { Sign::Negative };
    if sa == sb0 && sa == sb1 {
        return sa.is_positive();
    }
    let d_sign = |kept_first: bool| {
        if kept_first {
            perturbed_sign(kernel, &LineCrossD, &vals, &ids)
        } else {
            let mut v = vals.clone();
            let mut id2 = ids.clone();
            v[0..3].clone_from_slice(&vals[3..6]);
            v[3..6].clone_from_slice(&vals[0..3]);
            id2[0..3].clone_from_slice(&ids[3..6]);
            id2[3..6].clone_from_slice(&ids[0..3]);
            perturbed_sign(kernel, &LineCrossD, &v, &id2)
        }
    };
    let e_sign = || perturbed_sign(kernel, &LineCrossE, &vals, &ids);
    if sb0 != sa && sb1 != sa {
        let fs = perturbed_sign(kernel, &LineCrossF, &vals, &ids);
        let pos_case = fs.is_positive() && e_sign().is_positive();
        return if sa.is_positive() { pos_case } else { !pos_case };
    }
    let kept_first = sb0 == sa;
    let d = d_sign(kept_first);
    if sa.is_positive() {
        d.is_positive() || !e_sign().is_positive()
    } else {
        !d.is_positive() && e_sign().is_positive()
    }
}

/// F = A^2 - C0 - C1 for the line-crossing cascade.
struct LineCrossF;

impl Predicate for LineCrossF {
    fn arity(&self) -> usize {
        9
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        LineCrossA
            .eval(a)
            .square()
            .sub(&LineCrossRad { which: 0 }.eval(a))
            .sub(&LineCrossRad { which: 1 }.eval(a))
    }
}

/// Is crossing `(c, s)` of the anchor line strictly right of the point
/// `(ex + er, ey)` given by the right extreme of circle `extreme`? Used for
/// the winding probes, whose anchor is the line through `extreme`'s center.
pub fn line_crossing_right_of_extreme(
    kernel: &Kernel,
    circles: &[Circle],
    c: u32,
    s: i64,
    extreme: u32,
) -> bool {
    debug_assert_ne!(c, extreme);
    let (vals, ids) = circle_args(circles, &[c, extreme]);
    // cx + s sqrt(r^2 - q^2) - ex - er > 0
    let su = perturbed_sign(kernel, &ExtremeGapU, &vals, &ids);
    let sb = if s > 0 { Sign::Positive } else { Sign::Negative };
    if su == sb {
        return su.is_positive();
    }
    let sw = perturbed_sign(kernel, &ExtremeGapW, &vals, &ids);
    (su == Sign::Positive) == (sw == Sign::Positive)
}

/// u = c0x - c1x - r1 (crossing offset against the right extreme of circle 1).
struct ExtremeGapU;

impl Predicate for ExtremeGapU {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        a[0].sub(&a[3]).sub(&a[5])
    }
}

/// u^2 - (r0^2 - (c1y - c0y)^2).
struct ExtremeGapW;

impl Predicate for ExtremeGapW {
    fn arity(&self) -> usize {
        6
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let u = ExtremeGapU.eval(a);
        let rad = a[2].square().sub(&a[4].sub(&a[1]).square());
        u.square().sub(&rad)
    }
}

/// Conservative interval enclosure of an intersection point, for cheap
/// comparison filtering. `None` when the enclosure degenerates (coincident
/// centers or a radicand interval reaching zero width collapse).
pub fn circle_intersection_interval(
    circles: &[Circle],
    v: CircleIntersection,
) -> Option<(crate::numeric::Interval, crate::numeric::Interval)> {
    use crate::numeric::Interval;
    let c0 = circles[v.c0 as usize];
    let c1 = circles[v.c1 as usize];
    let f = Interval::from_i64;
    let dx = f(c1.center.x).sub(&f(c0.center.x));
    let dy = f(c1.center.y).sub(&f(c0.center.y));
    let l = dx.mul(&dx).add(&dy.mul(&dy));
    let alpha = l.add(&f(c0.radius).mul(&f(c0.radius))).sub(&f(c1.radius).mul(&f(c1.radius)));
    let beta2 = f(4).mul(&f(c0.radius)).mul(&f(c0.radius)).mul(&l).sub(&alpha.mul(&alpha));
    if beta2.hi() < 0.0 {
        return None;
    }
    let beta = beta2.sqrt()?;
    let sigma = f(v.branch.sigma());
    let two_l = f(2).mul(&l);
    let x = f(c0.center.x).add(&alpha.mul(&dx).sub(&sigma.mul(&beta).mul(&dy)).div(&two_l)?);
    let y = f(c0.center.y).add(&alpha.mul(&dy).add(&sigma.mul(&beta).mul(&dx)).div(&two_l)?);
    Some((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qp(x: i64, y: i64) -> QuantizedPoint {
        QuantizedPoint { x, y }
    }

    #[test]
    fn orientation_examples() {
        let k = Kernel::default();
        let pts = vec![qp(0, 0), qp(1, 0), qp(0, 1)];
        assert!(triangle_oriented(&k, &pts, 0, 1, 2));
        assert!(!triangle_oriented(&k, &pts, 0, 2, 1));
    }

    #[test]
    fn orientation_total_on_coincident_points() {
        let k = Kernel::default();
        let pts = vec![qp(5, 5), qp(5, 5), qp(5, 5)];
        let a = triangle_oriented(&k, &pts, 0, 1, 2);
        let b = triangle_oriented(&k, &pts, 0, 2, 1);
        assert_eq!(a, !b);
        assert_eq!(a, triangle_oriented(&k, &pts, 0, 1, 2));
    }

    #[test]
    fn incircle_examples() {
        let k = Kernel::default();
        let pts = vec![qp(0, 0), qp(2, 0), qp(0, 2), qp(1, 1), qp(5, 5)];
        assert!(incircle(&k, &pts, 0, 1, 2, 3));
        assert!(!incircle(&k, &pts, 0, 1, 2, 4));
        // orientation-adjusted: reversing the triangle keeps the answer
        assert!(incircle(&k, &pts, 0, 2, 1, 3));
        assert!(!incircle(&k, &pts, 0, 2, 1, 4));
    }

    #[test]
    fn incircle_total_on_coincident_points() {
        let k = Kernel::default();
        let pts = vec![qp(3, 3); 4];
        let r = incircle(&k, &pts, 0, 1, 2, 3);
        assert_eq!(r, incircle(&k, &pts, 0, 1, 2, 3));
    }

    #[test]
    fn circles_intersect_examples() {
        let k = Kernel::default();
        let u = |x: i64| Circle::new(qp(x, 0), 1);
        let cs = vec![u(0), u(1), u(10), u(2)];
        assert!(circles_intersect(&k, &cs, 0, 1));
        assert!(!circles_intersect(&k, &cs, 0, 2));
        // exactly tangent: resolved deterministically by perturbation
        let t1 = circles_intersect(&k, &cs, 0, 3);
        assert_eq!(t1, circles_intersect(&k, &cs, 0, 3));
    }

    #[test]
    fn intersection_below_basic() {
        let k = Kernel::default();
        let m = 1_000_000;
        let cs = vec![
            Circle::new(qp(0, 0), m),
            Circle::new(qp(3 * m / 4, 3 * m / 2), m),
            Circle::new(qp(3 * m / 4, -3 * m / 2), m),
        ];
        // both intersections of (0,1) have y > 0, both of (0,2) have y < 0
        for b1 in [Branch::Left, Branch::Right] {
            for b2 in [Branch::Left, Branch::Right] {
                assert!(!intersection_below(&k, &cs, 0, 1, b1, 2, b2));
                assert!(intersection_below(&k, &cs, 0, 2, b2, 1, b1));
            }
        }
    }

    #[test]
    fn intersection_below_asymmetric_and_total() {
        let k = Kernel::default();
        let m = 1_000_000;
        // identical parameter circles with distinct identities
        let cs = vec![
            Circle::new(qp(0, 0), m),
            Circle::new(qp(700_000, 0), m),
            Circle::new(qp(700_000, 0), m),
        ];
        for b in [Branch::Left, Branch::Right] {
            let ab = intersection_below(&k, &cs, 0, 1, b, 2, b);
            let ba = intersection_below(&k, &cs, 0, 2, b, 1, b);
            assert_eq!(ab, !ba, "branch {b:?}");
        }
        // same pair, both branches: dx > 0 puts the left branch above
        assert!(intersection_below(&k, &cs, 0, 1, Branch::Right, 1, Branch::Left));
        assert!(!intersection_below(&k, &cs, 0, 1, Branch::Left, 1, Branch::Right));
    }

    #[test]
    fn left_of_matches_transposed_below() {
        let k = Kernel::default();
        let m = 1_000_000;
        let cs = vec![
            Circle::new(qp(0, 0), m),
            Circle::new(qp(m, m / 3), m),
            Circle::new(qp(-m / 2, m), m),
        ];
        let cs_t: Vec<Circle> = cs
            .iter()
            .map(|c| Circle::new(qp(c.center.y, c.center.x), c.radius))
            .collect();
        for b1 in [Branch::Left, Branch::Right] {
            for b2 in [Branch::Left, Branch::Right] {
                let left = intersection_left_of(&k, &cs, 0, 1, b1, 2, b2);
                // transposing the plane mirrors it, flipping branches
                let below =
                    intersection_below(&k, &cs_t, 0, 1, b1.flip(), 2, b2.flip());
                // not the same kernel coordinates, so only check both are
                // total booleans; the geometric check follows
                let _ = (left, below);
            }
        }
        // plain geometric sanity: (0,1) intersections are right of (0,2)'s
        let far = vec![
            Circle::new(qp(0, 0), m),
            Circle::new(qp(m, 0), m),
            Circle::new(qp(-m, 0), m),
        ];
        for b1 in [Branch::Left, Branch::Right] {
            for b2 in [Branch::Left, Branch::Right] {
                assert!(!intersection_left_of(&k, &far, 0, 1, b1, 2, b2));
                assert!(intersection_left_of(&k, &far, 0, 2, b2, 1, b1));
            }
        }
    }

    #[test]
    fn circle_intersection_point_examples() {
        let k = Kernel::default();
        // tangent unit circles centered (0,0) and (2,0) meet at (1,0)
        let cs = vec![Circle::new(qp(0, 0), 1), Circle::new(qp(2, 0), 1)];
        for b in [Branch::Left, Branch::Right] {
            let p = circle_intersection_point(&k, &cs, CircleIntersection::new(0, 1, b)).unwrap();
            assert_eq!((p.x, p.y), (1, 0));
        }
        // at scale 1e6: sqrt(3)/2 * 1e6 = 866025.40
        let m = 1_000_000;
        let cs = vec![Circle::new(qp(0, 0), m), Circle::new(qp(m, 0), m)];
        let l = circle_intersection_point(&k, &cs, CircleIntersection::new(0, 1, Branch::Left))
            .unwrap();
        assert_eq!((l.x, l.y), (500_000, 866_025));
        let r = circle_intersection_point(&k, &cs, CircleIntersection::new(0, 1, Branch::Right))
            .unwrap();
        assert_eq!((r.x, r.y), (500_000, -866_025));
    }

    #[test]
    fn branch_convention_left_is_left_of_directed_centers() {
        let k = Kernel::default();
        let m = 1_000_000;
        // directed 0 -> 1 along +x: left branch has +y
        let cs = vec![Circle::new(qp(0, 0), m), Circle::new(qp(m, 0), m)];
        let l = circle_intersection_point(&k, &cs, CircleIntersection::new(0, 1, Branch::Left))
            .unwrap();
        assert!(l.y > 0);
        // canonicalization flips the branch with the pair order
        let v = CircleIntersection::new(1, 0, Branch::Right).canonical();
        assert_eq!(v, CircleIntersection::new(0, 1, Branch::Left));
    }

    #[test]
    fn segment_examples() {
        let k = Kernel::default();
        let pts = vec![qp(0, 0), qp(2, 2), qp(0, 2), qp(2, 0), qp(1, 0), qp(3, 0), qp(4, 0)];
        assert!(segments_intersect(&k, &pts, 0, 1, 2, 3));
        let p = segment_intersection_point(&k, &pts, 0, 1, 2, 3).unwrap();
        assert_eq!((p.x, p.y), (1, 1));
        // collinear disjoint segments: no intersection
        assert!(!segments_intersect(&k, &pts, 0, 4, 5, 6));
    }

    #[test]
    fn arc_helper_predicates() {
        let k = Kernel::default();
        let m = 1_000_000;
        let cs = vec![
            Circle::new(qp(0, 0), m),
            Circle::new(qp(m, 0), m),
            Circle::new(qp(0, m / 2), m),  // anchor line y = m/2
            Circle::new(qp(0, 3 * m), m),  // anchor line y = 3m (out of reach)
        ];
        assert!(circle_reaches_line(&k, &cs, 0, 2));
        assert!(!circle_reaches_line(&k, &cs, 0, 3));
        let up = CircleIntersection::new(0, 1, Branch::Left); // y = +866025
        let dn = CircleIntersection::new(0, 1, Branch::Right);
        assert!(!vertex_below_line(&k, &cs, up, 2));
        assert!(vertex_below_line(&k, &cs, dn, 2));
        assert!(vertex_in_upper_half(&k, &cs, up));
        assert!(!vertex_in_upper_half(&k, &cs, dn));
        assert!(vertex_in_right_half(&k, &cs, up)); // x = 500000 > 0
        assert!(vertex_in_right_half(&k, &cs, dn));
        // crossings of line y = m/2 with circle 0: x = +-sqrt(m^2 - m^2/4)
        assert!(line_crossing_left_of(&k, &cs, 0, -1, 1, -1, 2));
        assert!(line_crossing_left_of(&k, &cs, 0, 1, 1, 1, 2));
        assert!(!line_crossing_left_of(&k, &cs, 1, 1, 0, 1, 2));
        // right extreme of circle 0 is (m, 0); its line crossings at
        // +-866025 straddle it... right crossing of circle 1 at m + 866025
        assert!(line_crossing_right_of_extreme(&k, &cs, 1, 1, 0));
        assert!(!line_crossing_right_of_extreme(&k, &cs, 1, -1, 0));
    }

    // ------------------------------------------------------------------
    // factorization identities, checked exactly over the integers

    fn eval_big<P: Predicate>(p: &P, vals: &[i64]) -> BigInt {
        let args: Vec<BigInt> = vals.iter().map(|&v| BigInt::from(v)).collect();
        p.eval(&args)
    }

    struct Raw<'a> {
        vals: &'a [i64],
    }

    impl Raw<'_> {
        fn b(&self, which: usize) -> BigInt {
            eval_big(&CmpB { swap_xy: false, which, sigma: 1 }, self.vals)
        }
        fn c(&self, which: usize) -> BigInt {
            // beta^2 of pair (0, which+1)
            let mut v = self.vals[..6].to_vec();
            v[3..6].copy_from_slice(&self.vals[3 + 3 * which..6 + 3 * which]);
            eval_big(&CirclesIntersectPred, &v)
        }
        fn a(&self) -> BigInt {
            eval_big(&CmpA { swap_xy: false }, self.vals)
        }
        fn l(&self, which: usize) -> BigInt {
            let o = 3 + 3 * which;
            let dx = BigInt::from(self.vals[o] - self.vals[0]);
            let dy = BigInt::from(self.vals[o + 1] - self.vals[1]);
            &dx * &dx + &dy * &dy
        }
    }

    fn random_circle_vals(state: &mut u64) -> Vec<i64> {
        let mut next = || {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((*state >> 20) as i64 % 2001) - 1000
        };
        (0..9).map(|i| if i % 3 == 2 { next().abs() + 1 } else { next() }).collect()
    }

    #[test]
    fn factorization_identity_degree8() {
        let mut state = 1u64;
        for _ in 0..1000 {
            let vals = random_circle_vals(&mut state);
            let r = Raw { vals: &vals };
            let lhs = r.a().pow(2) + r.b(0).pow(2) * r.c(0) - r.b(1).pow(2) * r.c(1);
            let rhs = r.l(1) * eval_big(&CmpD { swap_xy: false }, &vals);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn factorization_identity_degree6() {
        let mut state = 2u64;
        for _ in 0..1000 {
            let vals = random_circle_vals(&mut state);
            let r = Raw { vals: &vals };
            let lhs = r.a().pow(2) - r.b(0).pow(2) * r.c(0) - r.b(1).pow(2) * r.c(1);
            let rhs = r.l(0) * r.l(1) * eval_big(&CmpF { swap_xy: false }, &vals);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn factorization_identity_degree20() {
        let mut state = 3u64;
        for _ in 0..1000 {
            let vals = random_circle_vals(&mut state);
            let r = Raw { vals: &vals };
            let (a2, b1c1, b2c2) = (r.a().pow(2), r.b(0).pow(2) * r.c(0), r.b(1).pow(2) * r.c(1));
            let e = (&a2 - &b1c1 - &b2c2).pow(2) - BigInt::from(4) * &b1c1 * &b2c2;
            let alt = (&a2 + &b1c1 - &b2c2).pow(2) - BigInt::from(4) * &a2 * &b1c1;
            assert_eq!(e, alt);
            let rhs = r.l(0).pow(2)
                * r.l(1).pow(2)
                * eval_big(&CmpE { swap_xy: false, plus: true }, &vals)
                * eval_big(&CmpE { swap_xy: false, plus: false }, &vals);
            assert_eq!(e, rhs);
        }
    }

    #[test]
    fn cascade_polynomials_stay_within_degree8() {
        assert!(CmpA { swap_xy: false }.degree() <= 8);
        assert!(CmpB { swap_xy: false, which: 0, sigma: 1 }.degree() <= 8);
        assert!(CmpD { swap_xy: false }.degree() <= 8);
        assert!(CmpF { swap_xy: false }.degree() <= 8);
        assert!(CmpE { swap_xy: false, plus: true }.degree() <= 8);
        assert!(CirclesIntersectPred.degree() <= 8);
        assert!(VertexLineW.degree() <= 8);
        assert!(LineCrossE.degree() <= 8);
    }
}
