// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Boolean operations on circular-arc polygons.
//!
//! The arrangement is organized per circle: every circle's curve is split at
//! its intersections with other circles and at its own left/right extreme
//! points, giving x-monotone sub-arcs in a known angular (counterclockwise)
//! order. Winding numbers are seeded once per connected component by firing a
//! horizontal ray along the seed circle's center line (an exactly known,
//! degree-1 height, as required for the degree-8 predicate budget) and then
//! propagated combinatorially: crossing a vertex changes the winding by the
//! multiplicity of the germ crossed, with the crossing direction read off the
//! intersection branch. Since every component contains a circle, its own
//! center line always provides a ray, so nothing is ever discarded.
//!
//! Rounded vertex constructions are cached per intersection key and used to
//! filter angular comparisons: when two cached points differ by two or more
//! quanta on the deciding axis, the order is known without touching the
//! polynomial cascade.

use std::collections::HashMap;

use super::bbox::{Aabb, BboxHierarchy};
use super::{BoolOp, BooleanError, FillRule, Winding};
use crate::numeric::{Interval, QuantizedPoint};
use crate::perturb::Kernel;
use crate::predicates::{
    circle_intersection_interval, circle_intersection_point, circle_reaches_line,
    circles_intersect, intersection_left_of, line_crossing_right_of_extreme, vertex_below_line,
    vertex_in_right_half, vertex_in_upper_half, Branch, Circle, CircleIntersection,
};

/// One directed arc of an input loop: travels along `circle` (ccw or cw) and
/// ends at the intersection of `circle` with the next arc's circle, on
/// `end_branch` (branch taken with this circle first in the pair).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEdge {
    pub circle: u32,
    pub ccw: bool,
    pub end_branch: Branch,
}

/// Closed input loop: a cyclic arc sequence, or one full circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcLoop {
    Arcs(Vec<ArcEdge>),
    Full { circle: u32, ccw: bool },
}

/// Output arc with rounded endpoint coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutArc {
    pub circle: u32,
    pub ccw: bool,
    pub from: QuantizedPoint,
    pub to: QuantizedPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutArcLoop {
    pub arcs: Vec<OutArc>,
}

/// Vertex of the arrangement: a canonical circle-pair intersection or an
/// extreme (leftmost/rightmost) point of one circle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum VKey {
    Pair(CircleIntersection),
    Left(u32),
    Right(u32),
}

impl VKey {
    fn pair(v: CircleIntersection) -> VKey {
        VKey::Pair(v.canonical())
    }
}

/// Coverage interval on one circle: the ccw span `[start, end)` traveled by
/// an input arc, with its winding contribution.
#[derive(Clone, Debug)]
struct CovArc {
    circle: u32,
    /// `None` covers the whole circle
    span: Option<(VKey, VKey)>,
    /// +1 traveled ccw, -1 traveled cw
    dir: i32,
    operand: usize,
}

struct Cycle {
    verts: Vec<VKey>,
    rank: HashMap<VKey, usize>,
    /// gap index holding the top / bottom point of the circle
    gap_top: usize,
    gap_bottom: usize,
    mult: Vec<Winding>,
    w_left: Vec<Winding>,
    seeded: bool,
}

impl Cycle {
    fn len(&self) -> usize {
        self.verts.len()
    }

    /// Does ccw gap range `[start_rank, end_rank)` contain gap `g`?
    fn span_contains_gap(&self, start: usize, end: usize, g: usize) -> bool {
        let n = self.len();
        let width = (end + n - start) % n;
        (g + n - start) % n < width
    }
}

struct ArcArrangement<'a> {
    kernel: &'a Kernel,
    circles: &'a [Circle],
    coords: HashMap<VKey, QuantizedPoint>,
    enclosures: HashMap<VKey, Option<(Interval, Interval)>>,
}

impl ArcArrangement<'_> {
    fn viewed(&self, key: VKey, from: u32) -> CircleIntersection {
        match key {
            VKey::Pair(v) => {
                if v.c0 == from {
                    v
                } else {
                    debug_assert_eq!(v.c1, from);
                    CircleIntersection { c0: v.c1, c1: v.c0, branch: v.branch.flip() }
                }
            }
            _ => unreachable!("extreme keys have no pair view"),
        }
    }

    /// Cheap conservative enclosure of the vertex, cached per key.
    fn enclosure(&mut self, key: VKey) -> Option<(Interval, Interval)> {
        if let Some(e) = self.enclosures.get(&key) {
            return *e;
        }
        let e = match key {
            VKey::Pair(v) => circle_intersection_interval(self.circles, v),
            VKey::Left(c) => {
                let c = &self.circles[c as usize];
                Some((
                    Interval::from_i64(c.center.x - c.radius),
                    Interval::from_i64(c.center.y),
                ))
            }
            VKey::Right(c) => {
                let c = &self.circles[c as usize];
                Some((
                    Interval::from_i64(c.center.x + c.radius),
                    Interval::from_i64(c.center.y),
                ))
            }
        };
        self.enclosures.insert(key, e);
        e
    }

    /// Two-stage coordinate filter: conservative enclosures first, then the
    /// exactly rounded constructions (each within 1/2, so a difference of two
    /// or more decides). `axis` 0 compares x, 1 compares y; the right side
    /// may be an exact integer instead of a vertex.
    fn coord_filter(
        &mut self,
        a: VKey,
        b: Result<VKey, i64>,
        axis: usize,
    ) -> Result<Option<bool>, BooleanError> {
        let pick = |e: (Interval, Interval)| if axis == 0 { e.0 } else { e.1 };
        let bi = match b {
            Ok(k) => self.enclosure(k).map(&pick),
            Err(v) => Some(Interval::from_i64(v)),
        };
        if let (Some(ai), Some(bi)) = (self.enclosure(a).map(&pick), bi) {
            if ai.hi() < bi.lo() {
                return Ok(Some(true));
            }
            if bi.hi() < ai.lo() {
                return Ok(Some(false));
            }
        }
        let av = {
            let p = self.coord(a)?;
            if axis == 0 {
                p.x
            } else {
                p.y
            }
        };
        let bv = match b {
            Ok(k) => {
                let p = self.coord(k)?;
                if axis == 0 {
                    p.x
                } else {
                    p.y
                }
            }
            Err(v) => v,
        };
        if (av - bv).abs() >= 2 {
            return Ok(Some(av < bv));
        }
        Ok(None)
    }

    fn coord(&mut self, key: VKey) -> Result<QuantizedPoint, BooleanError> {
        if let Some(&p) = self.coords.get(&key) {
            return Ok(p);
        }
        let p = match key {
            VKey::Pair(v) => circle_intersection_point(self.kernel, self.circles, v)
                .map_err(|_| BooleanError::InvalidArcTopology)?,
            VKey::Left(c) => {
                let c = &self.circles[c as usize];
                QuantizedPoint { x: c.center.x - c.radius, y: c.center.y }
            }
            VKey::Right(c) => {
                let c = &self.circles[c as usize];
                QuantizedPoint { x: c.center.x + c.radius, y: c.center.y }
            }
        };
        self.coords.insert(key, p);
        Ok(p)
    }

    /// Angular class of a vertex on circle `c`, counted ccw from the right
    /// extreme: 0 right extreme, 1 upper half, 2 left extreme, 3 lower half.
    fn class_of(&mut self, key: VKey, c: u32) -> Result<u8, BooleanError> {
        Ok(match key {
            VKey::Right(_) => 0,
            VKey::Left(_) => 2,
            VKey::Pair(_) => {
                let center_y = self.circles[c as usize].center.y;
                let upper = match self.coord_filter(key, Err(center_y), 1)? {
                    Some(below) => !below,
                    None => vertex_in_upper_half(self.kernel, self.circles, self.viewed(key, c)),
                };
                if upper {
                    1
                } else {
                    3
                }
            }
        })
    }

    /// Is vertex `u` strictly left of vertex `v` in x (both on circle `c`)?
    fn x_less(&mut self, u: VKey, v: VKey, c: u32) -> Result<bool, BooleanError> {
        if let Some(ans) = self.coord_filter(u, Ok(v), 0)? {
            return Ok(ans);
        }
        let vu = self.viewed(u, c);
        let vv = self.viewed(v, c);
        Ok(intersection_left_of(
            self.kernel,
            self.circles,
            c,
            vu.c1,
            vu.branch,
            vv.c1,
            vv.branch,
        ))
    }

    fn right_half(&mut self, key: VKey, c: u32) -> Result<bool, BooleanError> {
        let center_x = self.circles[c as usize].center.x;
        match self.coord_filter(key, Err(center_x), 0)? {
            Some(less) => Ok(!less),
            None => Ok(vertex_in_right_half(self.kernel, self.circles, self.viewed(key, c))),
        }
    }

    /// Is vertex `key` strictly below the horizontal anchor line through the
    /// center of circle `anchor`?
    fn below_line(&mut self, key: VKey, anchor: u32) -> Result<bool, BooleanError> {
        let line_y = self.circles[anchor as usize].center.y;
        Ok(match key {
            VKey::Left(c) | VKey::Right(c) => {
                let cy = self.circles[c as usize].center.y;
                if (cy - line_y).abs() >= 1 {
                    cy < line_y
                } else {
                    // exactly equal quantized heights: perturbed comparison of
                    // the two center y coordinates
                    use crate::numeric::{Predicate, Ring};
                    struct DeltaY;
                    impl Predicate for DeltaY {
                        fn arity(&self) -> usize {
                            6
                        }
                        fn degree(&self) -> usize {
                            1
                        }
                        fn eval<R: Ring>(&self, a: &[R]) -> R {
                            a[1].sub(&a[4])
                        }
                    }
                    let ca = self.circles[c as usize];
                    let cb = self.circles[anchor as usize];
                    let vals = [ca.center.x, ca.center.y, ca.radius, cb.center.x, cb.center.y, cb.radius];
                    let ids: Vec<u64> = crate::predicates::circle_ids(c)
                        .into_iter()
                        .chain(crate::predicates::circle_ids(anchor))
                        .collect();
                    crate::perturb::perturbed_sign(self.kernel, &DeltaY, &vals, &ids)
                        == crate::perturb::Sign::Negative
                }
            }
            VKey::Pair(_) => match self.coord_filter(key, Err(line_y), 1)? {
                Some(less) => less,
                None => {
                    let c = match key {
                        VKey::Pair(v) => v.c0,
                        _ => unreachable!(),
                    };
                    vertex_below_line(self.kernel, self.circles, self.viewed(key, c), anchor)
                }
            },
        })
    }

    /// Sort the vertex keys of circle `c` counterclockwise from its right
    /// extreme, and locate the gaps holding the top and bottom points.
    fn build_cycle(&mut self, c: u32, mut keys: Vec<VKey>) -> Result<Cycle, BooleanError> {
        keys.push(VKey::Left(c));
        keys.push(VKey::Right(c));
        // precompute classes, then sort each half by x
        let mut classed: Vec<(u8, VKey)> = Vec::with_capacity(keys.len());
        for k in keys {
            classed.push((self.class_of(k, c)?, k));
        }
        classed.sort_by_key(|&(cl, _)| cl);
        let mut verts = Vec::with_capacity(classed.len());
        let mut upper: Vec<VKey> = Vec::new();
        let mut lower: Vec<VKey> = Vec::new();
        for (cl, k) in classed {
            match cl {
                1 => upper.push(k),
                3 => lower.push(k),
                _ => {}
            }
        }
        // upper half runs right-to-left, lower half left-to-right
        sort_by_x(self, &mut upper, c, false)?;
        sort_by_x(self, &mut lower, c, true)?;
        // top point: between the x > center and x < center upper vertices
        let mut top_in_upper = 0;
        for (i, &k) in upper.iter().enumerate() {
            if self.right_half(k, c)? {
                top_in_upper = i + 1;
            } else {
                break;
            }
        }
        let mut bottom_in_lower = 0;
        for (i, &k) in lower.iter().enumerate() {
            if !self.right_half(k, c)? {
                bottom_in_lower = i + 1;
            } else {
                break;
            }
        }
        verts.push(VKey::Right(c));
        let gap_top = verts.len() - 1 + top_in_upper;
        verts.extend(upper);
        let left_pos = verts.len();
        verts.push(VKey::Left(c));
        let gap_bottom = left_pos + bottom_in_lower;
        verts.extend(lower);
        let rank = verts.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let n = verts.len();
        Ok(Cycle {
            verts,
            rank,
            gap_top,
            gap_bottom,
            mult: vec![Winding::ZERO; n],
            w_left: vec![Winding::ZERO; n],
            seeded: false,
        })
    }
}

fn sort_by_x(
    arr: &mut ArcArrangement,
    keys: &mut [VKey],
    c: u32,
    ascending: bool,
) -> Result<(), BooleanError> {
    let mut err = None;
    keys.sort_by(|&a, &b| {
        if err.is_some() {
            return std::cmp::Ordering::Equal;
        }
        match arr.x_less(a, b, c) {
            Ok(less) => {
                if less == ascending {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
            Err(e) => {
                err = Some(e);
                std::cmp::Ordering::Equal
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Crossings of one covered span with the anchor line through `anchor`'s
/// center: signed count added into `w` (up-crossing +dir, down-crossing
/// -dir), restricted to crossings strictly right of `anchor`'s right extreme.
#[allow(clippy::too_many_arguments)]
fn ray_count(
    arr: &mut ArcArrangement,
    cycles: &HashMap<u32, Cycle>,
    cov: &CovArc,
    anchor: u32,
    w: &mut Winding,
) -> Result<(), BooleanError> {
    let d = cov.circle;
    if d == anchor {
        // own-circle crossings happen exactly at the extremes: the right one
        // is the probe itself, the left one is strictly left of it
        return Ok(());
    }
    if !circle_reaches_line(arr.kernel, arr.circles, d, anchor) {
        return Ok(());
    }
    // which of the two crossings lie on the covered span
    let (has_left, has_right) = match cov.span {
        None => (true, true),
        Some((s, e)) => {
            let below_s = arr.below_line(s, anchor)?;
            let below_e = arr.below_line(e, anchor)?;
            match (below_s, below_e) {
                (true, false) => (false, true),
                (false, true) => (true, false),
                same_side => {
                    let cy = &cycles[&d];
                    let (rs, re) = (cy.rank[&s], cy.rank[&e]);
                    let hump = if same_side.0 { cy.gap_top } else { cy.gap_bottom };
                    let both = cy.span_contains_gap(rs, re, hump);
                    (both, both)
                }
            }
        }
    };
    for (sel, sign) in [(-1i64, -1i32), (1, 1)] {
        let present = if sel < 0 { has_left } else { has_right };
        if !present {
            continue;
        }
        if line_crossing_right_of_extreme(arr.kernel, arr.circles, d, sel, anchor) {
            w.add(cov.operand, sign * cov.dir);
        }
    }
    Ok(())
}

/// Winding deltas when walking circle `c` counterclockwise through vertex
/// `v`: the germ of the other circle on the left of `c` is crossed.
fn cross_delta(
    arr: &ArcArrangement,
    cycles: &HashMap<u32, Cycle>,
    c: u32,
    v: VKey,
) -> Winding {
    let pair = match v {
        VKey::Pair(_) => arr.viewed(v, c),
        _ => return Winding::ZERO,
    };
    let other = &cycles[&pair.c1];
    let r = other.rank[&v];
    let n = other.len();
    let mut delta = Winding::ZERO;
    if pair.branch == Branch::Left {
        // the other circle crosses right-to-left; its outgoing germ is hit
        let m = other.mult[r];
        delta.a -= m.a;
        delta.b -= m.b;
    } else {
        let m = other.mult[(r + n - 1) % n];
        delta.a += m.a;
        delta.b += m.b;
    }
    delta
}

/// Propagate `w_left` around a cycle from the anchored gap.
fn propagate_cycle(
    arr: &ArcArrangement,
    cycles: &mut HashMap<u32, Cycle>,
    c: u32,
    anchor_gap: usize,
    w0: Winding,
) -> Result<(), BooleanError> {
    let n = cycles[&c].len();
    let mut w = w0;
    let mut ws = vec![Winding::ZERO; n];
    ws[anchor_gap] = w;
    for step in 1..=n {
        let g = (anchor_gap + step) % n;
        let v = cycles[&c].verts[g];
        let d = cross_delta(arr, cycles, c, v);
        w = Winding { a: w.a + d.a, b: w.b + d.b };
        if step < n {
            ws[g] = w;
        } else if w != w0 {
            return Err(BooleanError::Internal("winding does not close around a circle"));
        }
    }
    let cy = cycles.get_mut(&c).unwrap();
    cy.w_left = ws;
    cy.seeded = true;
    Ok(())
}

/// Full circular-arc boolean. Both operands reference circles in the shared
/// `circles` table; every loop must satisfy [`circles_intersect`] between
/// consecutive arcs' circles.
pub fn arc_boolean(
    kernel: &Kernel,
    circles: &[Circle],
    a: &[ArcLoop],
    b: &[ArcLoop],
    op: BoolOp,
    rule: FillRule,
) -> Result<Vec<OutArcLoop>, BooleanError> {
    let mut arr = ArcArrangement {
        kernel,
        circles,
        coords: HashMap::new(),
        enclosures: HashMap::new(),
    };

    // normalize input loops to ccw coverage spans
    let mut cov: Vec<CovArc> = Vec::new();
    let mut used: Vec<u32> = Vec::new();
    for (operand, loops) in [(0usize, a), (1, b)] {
        for l in loops {
            match l {
                ArcLoop::Full { circle, ccw } => {
                    used.push(*circle);
                    cov.push(CovArc {
                        circle: *circle,
                        span: None,
                        dir: if *ccw { 1 } else { -1 },
                        operand,
                    });
                }
                ArcLoop::Arcs(arcs) => {
                    if arcs.len() < 2 {
                        return Err(BooleanError::InvalidArcTopology);
                    }
                    let n = arcs.len();
                    for i in 0..n {
                        let cur = arcs[i];
                        let prev = arcs[(i + n - 1) % n];
                        let next = arcs[(i + 1) % n];
                        if cur.circle == next.circle {
                            return Err(BooleanError::InvalidArcTopology);
                        }
                        if !circles_intersect(kernel, circles, cur.circle, next.circle) {
                            return Err(BooleanError::InvalidArcTopology);
                        }
                        used.push(cur.circle);
                        // start vertex: end of the previous arc, viewed from
                        // the previous circle first
                        let start = VKey::pair(CircleIntersection::new(
                            prev.circle,
                            cur.circle,
                            prev.end_branch,
                        ));
                        let end = VKey::pair(CircleIntersection::new(
                            cur.circle,
                            next.circle,
                            cur.end_branch,
                        ));
                        let (s, e, dir) =
                            if cur.ccw { (start, end, 1) } else { (end, start, -1) };
                        cov.push(CovArc { circle: cur.circle, span: Some((s, e)), dir, operand });
                    }
                }
            }
        }
    }
    if cov.is_empty() {
        return Ok(Vec::new());
    }
    used.sort_unstable();
    used.dedup();

    // candidate intersections between referenced circles
    let boxes: Vec<Aabb> = used
        .iter()
        .map(|&c| Aabb::of_circle(&circles[c as usize]))
        .collect();
    let hierarchy = BboxHierarchy::build(boxes);
    let mut keys_per_circle: HashMap<u32, Vec<VKey>> = HashMap::new();
    for &c in &used {
        keys_per_circle.insert(c, Vec::new());
    }
    let mut components: HashMap<u32, u32> = used.iter().map(|&c| (c, c)).collect();
    fn find(components: &mut HashMap<u32, u32>, c: u32) -> u32 {
        let p = components[&c];
        if p == c {
            return c;
        }
        let r = find(components, p);
        components.insert(c, r);
        r
    }
    for (i, j) in hierarchy.overlapping_pairs() {
        let (ci, cj) = (used[i as usize], used[j as usize]);
        if circles_intersect(kernel, circles, ci, cj) {
            for branch in [Branch::Left, Branch::Right] {
                let key = VKey::pair(CircleIntersection::new(ci, cj, branch));
                keys_per_circle.get_mut(&ci).unwrap().push(key);
                keys_per_circle.get_mut(&cj).unwrap().push(key);
            }
            let (ri, rj) = (find(&mut components, ci), find(&mut components, cj));
            if ri != rj {
                components.insert(ri, rj);
            }
        }
    }
    // every input arc endpoint must be a known candidate
    for c in &cov {
        if let Some((s, e)) = c.span {
            for v in [s, e] {
                if !keys_per_circle[&c.circle].contains(&v) {
                    return Err(BooleanError::InvalidArcTopology);
                }
            }
        }
    }

    // angular cycles with coverage multiplicities
    let mut cycles: HashMap<u32, Cycle> = HashMap::new();
    for &c in &used {
        let mut keys = keys_per_circle.remove(&c).unwrap();
        keys.sort_unstable();
        keys.dedup();
        let cycle = arr.build_cycle(c, keys)?;
        cycles.insert(c, cycle);
    }
    for cv in &cov {
        let cy = cycles.get_mut(&cv.circle).unwrap();
        let n = cy.len();
        let gaps: Vec<usize> = match cv.span {
            None => (0..n).collect(),
            Some((s, e)) => {
                let (rs, re) = (cy.rank[&s], cy.rank[&e]);
                let width = (re + n - rs) % n;
                (0..width).map(|k| (rs + k) % n).collect()
            }
        };
        for g in gaps {
            cy.mult[g].add(cv.operand, cv.dir);
        }
    }

    // seed one circle per component by ray casting, then flood
    let mut comp_seeds: HashMap<u32, u32> = HashMap::new();
    for &c in &used {
        let root = find(&mut components, c);
        comp_seeds.entry(root).or_insert(c);
        let e = comp_seeds.get_mut(&root).unwrap();
        *e = (*e).min(c);
    }
    let mut queue: Vec<u32> = Vec::new();
    for &seed in comp_seeds.values() {
        let mut w = Winding::ZERO;
        for cv in &cov {
            ray_count(&mut arr, &cycles, cv, seed, &mut w)?;
        }
        // the probe sits right of the curve at the right extreme; gap 0
        // starts there going counterclockwise
        let m0 = cycles[&seed].mult[0];
        let w0 = Winding { a: w.a + m0.a, b: w.b + m0.b };
        propagate_cycle(&arr, &mut cycles, seed, 0, w0)?;
        queue.push(seed);
    }
    while let Some(c) = queue.pop() {
        let verts = cycles[&c].verts.clone();
        for (g, &v) in verts.iter().enumerate() {
            let pair = match v {
                VKey::Pair(_) => arr.viewed(v, c),
                _ => continue,
            };
            let d = pair.c1;
            if cycles[&d].seeded {
                continue;
            }
            let n_c = cycles[&c].len();
            let (anchor_gap, w0) = {
                let cy_c = &cycles[&c];
                let cy_d = &cycles[&d];
                let rd = cy_d.rank[&v];
                if pair.branch == Branch::Left {
                    // w_left of d's outgoing gap equals w_left of c's
                    // incoming gap
                    (rd, cy_c.w_left[(g + n_c - 1) % n_c])
                } else {
                    let wc = cy_c.w_left[g];
                    let mc = cy_c.mult[g];
                    (rd, Winding { a: wc.a - mc.a, b: wc.b - mc.b })
                }
            };
            propagate_cycle(&arr, &mut cycles, d, anchor_gap, w0)?;
            queue.push(d);
        }
    }

    // consistency tripwire across already-seeded circles
    for &c in &used {
        let verts = cycles[&c].verts.clone();
        let n_c = cycles[&c].len();
        for (g, &v) in verts.iter().enumerate() {
            let pair = match v {
                VKey::Pair(_) => arr.viewed(v, c),
                _ => continue,
            };
            let d = pair.c1;
            let rd = cycles[&d].rank[&v];
            let expect = if pair.branch == Branch::Left {
                cycles[&c].w_left[(g + n_c - 1) % n_c]
            } else {
                let wc = cycles[&c].w_left[g];
                let mc = cycles[&c].mult[g];
                Winding { a: wc.a - mc.a, b: wc.b - mc.b }
            };
            if cycles[&d].w_left[rd] != expect {
                return Err(BooleanError::Internal("winding propagation mismatch"));
            }
        }
    }

    // classify gaps and emit directed boundary sub-arcs
    let mut out_edges: Vec<(VKey, VKey, u32, bool)> = Vec::new();
    for &c in &used {
        let cy = &cycles[&c];
        let n = cy.len();
        for g in 0..n {
            let left = cy.w_left[g];
            let m = cy.mult[g];
            let right = Winding { a: left.a - m.a, b: left.b - m.b };
            let inl = op.inside(rule, left);
            let inr = op.inside(rule, right);
            if inl == inr {
                continue;
            }
            let (from, to) = (cy.verts[g], cy.verts[(g + 1) % n]);
            if inl {
                out_edges.push((from, to, c, true));
            } else {
                out_edges.push((to, from, c, false));
            }
        }
    }

    // stitch into loops
    let mut outgoing: HashMap<VKey, Vec<usize>> = HashMap::new();
    for (i, e) in out_edges.iter().enumerate() {
        outgoing.entry(e.0).or_default().push(i);
    }
    for list in outgoing.values_mut() {
        list.sort_unstable_by_key(|&i| (out_edges[i].2, out_edges[i].3));
        list.reverse();
    }
    let mut used_edge = vec![false; out_edges.len()];
    let mut loops = Vec::new();
    for start in 0..out_edges.len() {
        if used_edge[start] {
            continue;
        }
        let mut arcs = Vec::new();
        let mut cur = start;
        loop {
            used_edge[cur] = true;
            let (f, t, c, ccw) = out_edges[cur];
            arcs.push(OutArc { circle: c, ccw, from: arr.coord(f)?, to: arr.coord(t)? });
            if t == out_edges[start].0 {
                break;
            }
            let next = outgoing
                .get_mut(&t)
                .and_then(|list| {
                    while let Some(i) = list.pop() {
                        if !used_edge[i] {
                            return Some(i);
                        }
                    }
                    None
                })
                .ok_or(BooleanError::Internal("open loop while stitching arcs"))?;
            cur = next;
        }
        loops.push(OutArcLoop { arcs });
    }
    Ok(loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(x: i64, y: i64) -> QuantizedPoint {
        QuantizedPoint { x, y }
    }

    #[test]
    fn full_circle_self_union() {
        let k = Kernel::default();
        let circles = vec![Circle::new(qp(0, 0), 1_000_000)];
        let a = vec![ArcLoop::Full { circle: 0, ccw: true }];
        let out = arc_boolean(&k, &circles, &a, &a, BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out.len(), 1);
        // split at the extremes into two half arcs, all ccw on circle 0
        for arc in &out[0].arcs {
            assert_eq!(arc.circle, 0);
            assert!(arc.ccw);
        }
        let total: i64 = out[0].arcs.len() as i64;
        assert_eq!(total, 2);
    }

    #[test]
    fn two_full_circles_union_is_lens_outline() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(m, 0), m)];
        let a = vec![ArcLoop::Full { circle: 0, ccw: true }];
        let b = vec![ArcLoop::Full { circle: 1, ccw: true }];
        let out = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out.len(), 1);
        // intersection of the two disks
        let inter =
            arc_boolean(&k, &circles, &a, &b, BoolOp::Intersection, FillRule::NonZero).unwrap();
        assert_eq!(inter.len(), 1);
        // the lens boundary has one arc run on each circle
        let on0 = inter[0].arcs.iter().filter(|e| e.circle == 0).count();
        let on1 = inter[0].arcs.iter().filter(|e| e.circle == 1).count();
        assert!(on0 >= 1 && on1 >= 1);
    }

    #[test]
    fn disjoint_circles_union_keeps_both() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(10 * m, 0), m)];
        let a = vec![ArcLoop::Full { circle: 0, ccw: true }];
        let b = vec![ArcLoop::Full { circle: 1, ccw: true }];
        let out = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out.len(), 2);
        let inter =
            arc_boolean(&k, &circles, &a, &b, BoolOp::Intersection, FillRule::NonZero).unwrap();
        assert!(inter.is_empty());
    }

    #[test]
    fn lens_loop_from_two_arcs() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(m, 0), m)];
        // counterclockwise lens: right half of circle 0? the lens boundary:
        // arc of circle 0 from bottom vertex to top vertex (ccw, through
        // x > 0 side), then arc of circle 1 from top to bottom (ccw)
        let lens = vec![ArcLoop::Arcs(vec![
            ArcEdge { circle: 0, ccw: true, end_branch: Branch::Left },
            ArcEdge { circle: 1, ccw: true, end_branch: Branch::Left },
        ])];
        let out =
            arc_boolean(&k, &circles, &lens, &[], BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out.len(), 1);
        let out2 = arc_boolean(&k, &circles, &lens, &lens, BoolOp::Intersection, FillRule::NonZero)
            .unwrap();
        assert_eq!(out2.len(), 1);
    }

    #[test]
    fn tangent_disks_union_is_deterministic() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(2 * m, 0), m)];
        let a = vec![ArcLoop::Full { circle: 0, ccw: true }];
        let b = vec![ArcLoop::Full { circle: 1, ccw: true }];
        let o1 = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        let o2 = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(o1, o2);
        // either one merged loop or two disjoint ones, depending on the
        // perturbed tangency sign
        assert!(o1.len() == 1 || o1.len() == 2);
    }

    #[test]
    fn identical_circles_union() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(0, 0), m)];
        let a = vec![ArcLoop::Full { circle: 0, ccw: true }];
        let b = vec![ArcLoop::Full { circle: 1, ccw: true }];
        let out = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        assert!(!out.is_empty());
        let out2 = arc_boolean(&k, &circles, &a, &b, BoolOp::Union, FillRule::NonZero).unwrap();
        assert_eq!(out, out2);
    }

    #[test]
    fn invalid_topology_is_reported() {
        let k = Kernel::default();
        let m = 1_000_000;
        let circles = vec![Circle::new(qp(0, 0), m), Circle::new(qp(10 * m, 0), m)];
        let bad = vec![ArcLoop::Arcs(vec![
            ArcEdge { circle: 0, ccw: true, end_branch: Branch::Left },
            ArcEdge { circle: 1, ccw: true, end_branch: Branch::Left },
        ])];
        assert_eq!(
            arc_boolean(&k, &circles, &bad, &[], BoolOp::Union, FillRule::NonZero),
            Err(BooleanError::InvalidArcTopology)
        );
    }
}
