// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Boolean operations on straight-edge polygons.
//!
//! The arrangement of all input edges is built with perturbed predicates:
//! pairwise crossings via a bounding-box hierarchy, edge splitting by exact
//! parameter comparisons, and winding classification of every sub-edge via a
//! horizontal ray from its parametric midpoint (safe because perturbation
//! removes all horizontal degeneracies). Sub-edges on the boundary of the
//! requested region are stitched into closed loops whose vertices are exactly
//! rounded constructions.

use std::collections::HashMap;

use super::bbox::{Aabb, BboxHierarchy};
use super::{BoolOp, BooleanError, FillRule, Winding};
use crate::numeric::{Predicate, QuantizedPoint, Ring};
use crate::perturb::{perturbed_sign, Kernel, Sign};
use crate::predicates::{point_ids, segment_intersection_point, segments_intersect};

/// Closed loop of quantized vertices.
pub type Polygon = Vec<QuantizedPoint>;

#[derive(Clone, Copy)]
struct Edge {
    from: u32,
    to: u32,
    operand: usize,
}

/// Sub-edge endpoint: an input vertex or a pairwise crossing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Vtx {
    Point(u32),
    Cross(u32, u32),
}

#[derive(Clone, Copy, PartialEq)]
enum TKind {
    Zero,
    One,
    Cross,
}

/// Parametric positions along a host edge, as predicates over the host pair
/// plus the crossing edges involved. `t = cross(C - A, D - C) / cross(B - A,
/// D - C)` for a crossing with edge `(C, D)`; endpoints are 0 and 1.
fn t_parts<R: Ring>(a: &[R], off: &mut usize, kind: TKind) -> (R, R) {
    match kind {
        TKind::Zero => (R::zero(), R::from_i64(1)),
        TKind::One => (R::from_i64(1), R::from_i64(1)),
        TKind::Cross => {
            let (ax, ay, bx, by) = (&a[0], &a[1], &a[2], &a[3]);
            let (cx, cy, dx, dy) = (&a[*off], &a[*off + 1], &a[*off + 2], &a[*off + 3]);
            *off += 4;
            let ex = dx.sub(cx);
            let ey = dy.sub(cy);
            let n = cx.sub(ax).mul(&ey).sub(&cy.sub(ay).mul(&ex));
            let d = bx.sub(ax).mul(&ey).sub(&by.sub(ay).mul(&ex));
            (n, d)
        }
    }
}

/// Numerators and common denominator of the parametric midpoint
/// `M = A + (t_from + t_to)/2 (B - A)`.
fn midpoint_parts<R: Ring>(a: &[R], from: TKind, to: TKind) -> (R, R, R, usize) {
    let mut off = 4;
    let (nf, df) = t_parts(a, &mut off, from);
    let (nt, dt) = t_parts(a, &mut off, to);
    let dm = R::from_i64(2).mul(&df).mul(&dt);
    let s = nf.mul(&dt).add(&nt.mul(&df));
    let (ax, ay, bx, by) = (&a[0], &a[1], &a[2], &a[3]);
    let mx = ax.mul(&dm).add(&s.mul(&bx.sub(ax)));
    let my = ay.mul(&dm).add(&s.mul(&by.sub(ay)));
    (mx, my, dm, off)
}

fn dm_degree(from: TKind, to: TKind) -> usize {
    2 * usize::from(from == TKind::Cross) + 2 * usize::from(to == TKind::Cross)
}

/// `P_y * Dm - My_num` for endpoint `which` of the probed edge: which side of
/// the midpoint's horizontal line the endpoint lies on (modulo sign of Dm).
struct RayStraddle {
    from: TKind,
    to: TKind,
    which: usize,
}

impl Predicate for RayStraddle {
    fn arity(&self) -> usize {
        8 + dm_degree(self.from, self.to) * 2
    }
    fn degree(&self) -> usize {
        2 + dm_degree(self.from, self.to)
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let (_, my, dm, off) = midpoint_parts(a, self.from, self.to);
        let py = &a[off + 2 * self.which + 1];
        py.mul(&dm).sub(&my)
    }
}

/// Crossing abscissa of the probed edge with the midpoint's horizontal line,
/// relative to the midpoint (modulo signs of Dm and the edge rise).
struct RayCrossX {
    from: TKind,
    to: TKind,
}

impl Predicate for RayCrossX {
    fn arity(&self) -> usize {
        8 + dm_degree(self.from, self.to) * 2
    }
    fn degree(&self) -> usize {
        3 + dm_degree(self.from, self.to)
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let (mx, my, dm, off) = midpoint_parts(a, self.from, self.to);
        let (gx, gy, hx, hy) = (&a[off], &a[off + 1], &a[off + 2], &a[off + 3]);
        let rise = hy.sub(gy);
        gx.mul(&rise)
            .mul(&dm)
            .add(&my.sub(&gy.mul(&dm)).mul(&hx.sub(gx)))
            .sub(&mx.mul(&rise))
    }
}

/// `cross(B - A, D - C)`: the denominator of a crossing parameter.
struct CrossDiff;

impl Predicate for CrossDiff {
    fn arity(&self) -> usize {
        8
    }
    fn degree(&self) -> usize {
        2
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let ex = a[6].sub(&a[4]);
        let ey = a[7].sub(&a[5]);
        a[2].sub(&a[0]).mul(&ey).sub(&a[3].sub(&a[1]).mul(&ex))
    }
}

/// `D_y - C_y` over one point pair.
struct RiseOf;

impl Predicate for RiseOf {
    fn arity(&self) -> usize {
        4
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        a[3].sub(&a[1])
    }
}

/// `N_i D_j - N_j D_i` for two crossing parameters along a shared host edge.
struct ParamDiff;

impl Predicate for ParamDiff {
    fn arity(&self) -> usize {
        12
    }
    fn degree(&self) -> usize {
        4
    }
    fn eval<R: Ring>(&self, a: &[R]) -> R {
        let mut off = 4;
        let (ni, di) = t_parts(a, &mut off, TKind::Cross);
        let (nj, dj) = t_parts(a, &mut off, TKind::Cross);
        ni.mul(&dj).sub(&nj.mul(&di))
    }
}

struct Arrangement<'a> {
    kernel: &'a Kernel,
    pts: Vec<QuantizedPoint>,
    edges: Vec<Edge>,
}

impl Arrangement<'_> {
    fn edge_args(&self, e: u32) -> ([i64; 4], [u64; 4]) {
        let Edge { from, to, .. } = self.edges[e as usize];
        let (a, b) = (self.pts[from as usize], self.pts[to as usize]);
        (
            [a.x, a.y, b.x, b.y],
            [
                point_ids(from)[0],
                point_ids(from)[1],
                point_ids(to)[0],
                point_ids(to)[1],
            ],
        )
    }

    fn cat(
        &self,
        parts: &[u32],
    ) -> (Vec<i64>, Vec<u64>) {
        let mut vals = Vec::with_capacity(4 * parts.len());
        let mut ids = Vec::with_capacity(4 * parts.len());
        for &e in parts {
            let (v, i) = self.edge_args(e);
            vals.extend_from_slice(&v);
            ids.extend_from_slice(&i);
        }
        (vals, ids)
    }

    fn sign(&self, p: &impl Predicate, vals: &[i64], ids: &[u64]) -> Sign {
        perturbed_sign(self.kernel, p, vals, ids)
    }

    /// Perturbed comparison of two crossing parameters along host edge `h`.
    fn param_less(&self, h: u32, e1: u32, e2: u32) -> bool {
        let (vals, ids) = self.cat(&[h, e1, e2]);
        let diff = self.sign(&ParamDiff, &vals, &ids);
        let (v1, i1) = self.cat(&[h, e1]);
        let d1 = self.sign(&CrossDiff, &v1, &i1);
        let (v2, i2) = self.cat(&[h, e2]);
        let d2 = self.sign(&CrossDiff, &v2, &i2);
        // t1 - t2 has the sign of diff * d1 * d2
        (diff == d1) != (d2 == Sign::Positive)
    }
}

#[derive(Clone)]
struct SubEdge {
    host: u32,
    from: Vtx,
    to: Vtx,
    /// winding pair on the left side
    left: Winding,
    /// winding pair on the right side
    right: Winding,
}

/// Full polygon boolean: arrange, classify, stitch.
pub fn polygon_boolean(
    kernel: &Kernel,
    a: &[Polygon],
    b: &[Polygon],
    op: BoolOp,
    rule: FillRule,
) -> Result<Vec<Polygon>, BooleanError> {
    let mut arr = Arrangement { kernel, pts: Vec::new(), edges: Vec::new() };
    for (operand, polys) in [(0usize, a), (1, b)] {
        for poly in polys {
            if poly.len() < 2 {
                continue;
            }
            let base = arr.pts.len() as u32;
            arr.pts.extend_from_slice(poly);
            let n = poly.len() as u32;
            for i in 0..n {
                arr.edges.push(Edge { from: base + i, to: base + (i + 1) % n, operand });
            }
        }
    }
    let ne = arr.edges.len();
    if ne == 0 {
        return Ok(Vec::new());
    }

    // pairwise crossings through the box hierarchy
    let boxes: Vec<Aabb> = arr
        .edges
        .iter()
        .map(|e| Aabb::of_segment(arr.pts[e.from as usize], arr.pts[e.to as usize]))
        .collect();
    let hierarchy = BboxHierarchy::build(boxes);
    let mut crossings: Vec<Vec<u32>> = vec![Vec::new(); ne];
    for (i, j) in hierarchy.overlapping_pairs() {
        let (ei, ej) = (arr.edges[i as usize], arr.edges[j as usize]);
        if segments_intersect(kernel, &arr.pts, ei.from, ei.to, ej.from, ej.to) {
            crossings[i as usize].push(j);
            crossings[j as usize].push(i);
        }
    }

    // split edges at crossings, ordered by exact parameter comparison
    let mut subs: Vec<SubEdge> = Vec::new();
    for h in 0..ne as u32 {
        let mut cuts = crossings[h as usize].clone();
        cuts.sort_unstable_by(|&x, &y| {
            if arr.param_less(h, x, y) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let e = arr.edges[h as usize];
        let mut prev = Vtx::Point(e.from);
        for &c in &cuts {
            let v = Vtx::Cross(h.min(c), h.max(c));
            subs.push(SubEdge { host: h, from: prev, to: v, left: Winding::ZERO, right: Winding::ZERO });
            prev = v;
        }
        subs.push(SubEdge {
            host: h,
            from: prev,
            to: Vtx::Point(e.to),
            left: Winding::ZERO,
            right: Winding::ZERO,
        });
    }

    // classify each sub-edge by a horizontal ray from its parametric midpoint
    let approx: Vec<(f64, f64, f64, f64)> = arr
        .edges
        .iter()
        .map(|e| {
            let (p, q) = (arr.pts[e.from as usize], arr.pts[e.to as usize]);
            (
                p.x.min(q.x) as f64,
                p.y.min(q.y) as f64,
                p.x.max(q.x) as f64,
                p.y.max(q.y) as f64,
            )
        })
        .collect();
    for sub in &mut subs {
        let (w_left, w_right) = classify(&arr, sub, &approx)?;
        sub.left = w_left;
        sub.right = w_right;
    }

    // keep boundary sub-edges, oriented with the inside on their left
    let mut out_edges: Vec<(Vtx, Vtx, u32)> = Vec::new();
    for s in &subs {
        let inl = op.inside(rule, s.left);
        let inr = op.inside(rule, s.right);
        if inl == inr {
            continue;
        }
        if inl {
            out_edges.push((s.from, s.to, s.host));
        } else {
            out_edges.push((s.to, s.from, s.host));
        }
    }

    // resolve vertex coordinates once per key
    let mut coords: HashMap<Vtx, QuantizedPoint> = HashMap::new();
    for &(f, t, _) in &out_edges {
        for v in [f, t] {
            if let std::collections::hash_map::Entry::Vacant(entry) = coords.entry(v) {
                let p = match v {
                    Vtx::Point(i) => arr.pts[i as usize],
                    Vtx::Cross(i, j) => {
                        let (ei, ej) = (arr.edges[i as usize], arr.edges[j as usize]);
                        segment_intersection_point(
                            kernel, &arr.pts, ei.from, ei.to, ej.from, ej.to,
                        )
                        .map_err(|_| BooleanError::Internal("construction failed"))?
                    }
                };
                entry.insert(p);
            }
        }
    }

    // stitch loops: deterministic pairing of outgoing edges at each vertex
    let mut outgoing: HashMap<Vtx, Vec<usize>> = HashMap::new();
    for (i, &(f, _, _)) in out_edges.iter().enumerate() {
        outgoing.entry(f).or_default().push(i);
    }
    for list in outgoing.values_mut() {
        list.sort_unstable_by_key(|&i| (out_edges[i].2, out_edges[i].1 == out_edges[i].0));
        list.reverse();
    }
    let mut used = vec![false; out_edges.len()];
    let mut loops = Vec::new();
    for start in 0..out_edges.len() {
        if used[start] {
            continue;
        }
        let mut loop_pts = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            let (f, t, _) = out_edges[cur];
            loop_pts.push(coords[&f]);
            if t == out_edges[start].0 {
                break;
            }
            let next = outgoing
                .get_mut(&t)
                .and_then(|list| {
                    while let Some(i) = list.pop() {
                        if !used[i] {
                            return Some(i);
                        }
                    }
                    None
                })
                .ok_or(BooleanError::Internal("open loop while stitching"))?;
            cur = next;
        }
        loops.push(loop_pts);
    }
    Ok(loops)
}

/// Winding pair on both sides of a sub-edge.
fn classify(
    arr: &Arrangement,
    s: &SubEdge,
    approx: &[(f64, f64, f64, f64)],
) -> Result<(Winding, Winding), BooleanError> {
    let host = arr.edges[s.host as usize];

    let kind = |v: Vtx| match v {
        Vtx::Point(p) if p == host.from => TKind::Zero,
        Vtx::Point(_) => TKind::One,
        Vtx::Cross(..) => TKind::Cross,
    };
    let aux = |v: Vtx| -> Option<u32> {
        match v {
            Vtx::Cross(i, j) => Some(if i == s.host { j } else { i }),
            Vtx::Point(_) => None,
        }
    };
    let (from_kind, to_kind) = (kind(s.from), kind(s.to));
    let mut parts = vec![s.host];
    parts.extend(aux(s.from));
    parts.extend(aux(s.to));
    let (base_vals, base_ids) = arr.cat(&parts);

    // sign of the midpoint's common denominator
    let mut dm_sign = Sign::Positive;
    for v in [s.from, s.to] {
        if let Some(e) = aux(v) {
            let (vals, ids) = arr.cat(&[s.host, e]);
            if arr.sign(&CrossDiff, &vals, &ids) == Sign::Negative {
                dm_sign = dm_sign.flip();
            }
        }
    }

    // conservative f64 prune bounds for the midpoint
    let (mx_lo, my_lo, my_hi) = {
        let hb = approx[s.host as usize];
        (hb.0 - 1.0, hb.1 - 1.0, hb.3 + 1.0)
    };
    const SLACK: f64 = 1e6;

    let mut w = Winding::ZERO;
    for (gi, edge) in arr.edges.iter().enumerate() {
        let gi = gi as u32;
        if gi == s.host {
            continue;
        }
        let gb = approx[gi as usize];
        if gb.3 < my_lo - SLACK || gb.1 > my_hi + SLACK || gb.2 < mx_lo - SLACK {
            continue;
        }
        let (vals, ids) = {
            let (mut v, mut i) = (base_vals.clone(), base_ids.clone());
            let (ev, ei) = arr.edge_args(gi);
            v.extend_from_slice(&ev);
            i.extend_from_slice(&ei);
            (v, i)
        };
        let s_from =
            arr.sign(&RayStraddle { from: from_kind, to: to_kind, which: 0 }, &vals, &ids);
        let s_to = arr.sign(&RayStraddle { from: from_kind, to: to_kind, which: 1 }, &vals, &ids);
        // true side of the line: straddle sign times dm sign
        let above_from = s_from == dm_sign;
        let above_to = s_to == dm_sign;
        if above_from == above_to {
            continue;
        }
        // edge crosses the probe line; is the crossing strictly right of M?
        let x_rel = arr.sign(&RayCrossX { from: from_kind, to: to_kind }, &vals, &ids);
        let (gv, gids) = arr.edge_args(gi);
        let rise = arr.sign(&RiseOf, &gv, &gids);
        // sign(x_cross - Mx) = x_rel * dm_sign * rise
        let right = (x_rel == dm_sign) == (rise == Sign::Positive);
        if !right {
            continue;
        }
        let delta = if rise == Sign::Positive { 1 } else { -1 };
        w.add(edge.operand, delta);
    }

    // the ray starts in the face right of the host when the host points up
    let (hv, hids) = arr.edge_args(s.host);
    let host_up = arr.sign(&RiseOf, &hv, &hids) == Sign::Positive;
    let mut left = w;
    let mut right = w;
    if host_up {
        left.add(host.operand, 1);
    } else {
        right.add(host.operand, -1);
    }
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(x: i64, y: i64) -> QuantizedPoint {
        QuantizedPoint { x, y }
    }

    fn square(x0: i64, y0: i64, s: i64) -> Polygon {
        vec![qp(x0, y0), qp(x0 + s, y0), qp(x0 + s, y0 + s), qp(x0, y0 + s)]
    }

    fn signed_area2(p: &Polygon) -> i128 {
        let mut a = 0i128;
        for i in 0..p.len() {
            let (u, v) = (p[i], p[(i + 1) % p.len()]);
            a += u.x as i128 * v.y as i128 - v.x as i128 * u.y as i128;
        }
        a
    }

    fn total_area2(loops: &[Polygon]) -> i128 {
        loops.iter().map(signed_area2).sum()
    }

    #[test]
    fn disjoint_union_keeps_both() {
        let k = Kernel::default();
        let a = square(0, 0, 1000);
        let b = square(5000, 0, 1000);
        let out =
            polygon_boolean(&k, std::slice::from_ref(&a), std::slice::from_ref(&b), BoolOp::Union, FillRule::NonZero)
                .unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(total_area2(&out), signed_area2(&a) + signed_area2(&b));
    }

    #[test]
    fn overlapping_union_and_intersection() {
        let k = Kernel::default();
        let a = square(0, 0, 1000);
        let b = square(500, 500, 1000);
        let union =
            polygon_boolean(&k, std::slice::from_ref(&a), std::slice::from_ref(&b), BoolOp::Union, FillRule::NonZero)
                .unwrap();
        assert_eq!(total_area2(&union), 2 * (2 * 1_000_000 - 250_000));
        let inter =
            polygon_boolean(&k, std::slice::from_ref(&a), std::slice::from_ref(&b), BoolOp::Intersection, FillRule::NonZero)
                .unwrap();
        assert_eq!(total_area2(&inter), 2 * 250_000);
        let diff = polygon_boolean(&k, &[a], &[b], BoolOp::Difference, FillRule::NonZero).unwrap();
        assert_eq!(total_area2(&diff), 2 * 750_000);
    }

    #[test]
    fn self_union_of_square_stays_within_half() {
        let k = Kernel::default();
        let m = 1_000_000;
        let a = square(0, 0, m);
        let out = polygon_boolean(&k, std::slice::from_ref(&a), std::slice::from_ref(&a), BoolOp::Union, FillRule::NonZero)
            .unwrap();
        // every output vertex within 1/2 of the input boundary per coordinate:
        // on this axis-aligned square that means a coordinate within 1/2 of
        // {0, m} while the other is within [-1/2, m + 1/2]
        for poly in &out {
            for p in poly {
                let near_edge = |v: i64| v == 0 || v == m; // integer within 1/2 of {0, m}
                let inside_band = |v: i64| (0..=m).contains(&v);
                assert!(
                    (near_edge(p.x) && inside_band(p.y)) || (near_edge(p.y) && inside_band(p.x)),
                    "vertex {p:?} drifted from the square"
                );
            }
        }
        let area: i128 = total_area2(&out);
        let exact = 2 * (m as i128) * (m as i128);
        assert!((area - exact).abs() <= 4 * m as i128, "area {area} vs {exact}");
    }

    #[test]
    fn edge_sharing_squares_offset_apart() {
        let k = Kernel::default();
        // sharing one full edge: perturbation may merge or keep separate,
        // but deterministically
        let a = square(0, 0, 1000);
        let b = square(1000, 0, 1000);
        let out1 =
            polygon_boolean(&k, std::slice::from_ref(&a), std::slice::from_ref(&b), BoolOp::Union, FillRule::NonZero)
                .unwrap();
        let out2 =
            polygon_boolean(&k, &[a], &[b], BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out1, out2);
        assert_eq!(total_area2(&out1), 2 * 2 * 1_000_000);
        // offset apart by one quantum: definitely two separate squares
        let a = square(0, 0, 1000);
        let b = square(1001, 0, 1000);
        let out = polygon_boolean(&k, &[a], &[b], BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn intersection_of_disjoint_is_empty() {
        let k = Kernel::default();
        let out = polygon_boolean(
            &k,
            &[square(0, 0, 10)],
            &[square(100, 100, 10)],
            BoolOp::Intersection,
            FillRule::NonZero,
        )
        .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn even_odd_rule_differs_on_double_cover() {
        let k = Kernel::default();
        // one operand containing the same region twice: winding 2 in the
        // overlap is inside under nonzero, outside under even-odd
        let a = vec![square(0, 0, 1000), square(200, 200, 600)];
        let nz = polygon_boolean(&k, &a, &[], BoolOp::Union, FillRule::NonZero).unwrap();
        let eo = polygon_boolean(&k, &a, &[], BoolOp::Union, FillRule::EvenOdd).unwrap();
        assert_eq!(total_area2(&nz), 2 * 1_000_000);
        // even-odd removes the inner square's area
        assert_eq!(total_area2(&eo), 2 * (1_000_000 - 360_000));
    }

    #[test]
    fn crossing_squares_union_area() {
        let k = Kernel::default();
        // plus-sign configuration
        let a = vec![qp(-300, -100), qp(300, -100), qp(300, 100), qp(-300, 100)];
        let b = vec![qp(-100, -300), qp(100, -300), qp(100, 300), qp(-100, 300)];
        let out = polygon_boolean(&k, &[a], &[b], BoolOp::Union, FillRule::NonZero).unwrap();
        // area = 600*200 + 600*200 - 200*200
        assert_eq!(total_area2(&out), 2 * (120_000 + 120_000 - 40_000));
    }
}
