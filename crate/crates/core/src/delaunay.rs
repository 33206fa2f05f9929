// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Incremental Delaunay triangulation on perturbed predicates.
//!
//! Insertion uses the Bowyer-Watson cavity algorithm with a ghost vertex for
//! the hull, a biased randomized insertion order (random permutation grouped
//! into geometrically growing rounds, each sorted along a Hilbert curve), and
//! point location through the history of dead triangles. Every orientation
//! and in-circumcircle question is answered by the perturbation cascade, so
//! the construction never branches on a degenerate case: duplicate points,
//! collinear runs, and cocircular fans all take the generic code path, and
//! `n` copies of one point still produce a valid (random-looking)
//! triangulation.

use crate::numeric::QuantizedPoint;
use crate::perturb::Kernel;
use crate::predicates::{incircle_assuming_ccw, incircle, triangle_oriented};

/// Symbolic hull vertex.
pub const GHOST: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Tri {
    /// counterclockwise vertices; ghost triangles carry [`GHOST`] in slot 2
    v: [u32; 3],
    /// `nbr[i]` is across the edge opposite `v[i]`
    nbr: [u32; 3],
}

/// Vertex / triangle incidence structure with adjacency and the insertion
/// history used for point location.
pub struct Triangulation {
    pub points: Vec<QuantizedPoint>,
    tris: Vec<Tri>,
    /// replacement triangles of each dead triangle; empty while live
    children: Vec<Vec<u32>>,
    roots: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Triangulation {
    /// Live finite triangles as counterclockwise vertex triples.
    pub fn triangles(&self) -> Vec<[u32; 3]> {
        self.tris
            .iter()
            .enumerate()
            .filter(|(i, t)| self.children[*i].is_empty() && t.v[2] != GHOST)
            .map(|(_, t)| t.v)
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.tris
            .iter()
            .enumerate()
            .filter(|(i, t)| self.children[*i].is_empty() && t.v[2] != GHOST)
            .count()
    }

    pub fn hull_size(&self) -> usize {
        self.tris
            .iter()
            .enumerate()
            .filter(|(i, t)| self.children[*i].is_empty() && t.v[2] == GHOST)
            .count()
    }

    fn is_live(&self, t: u32) -> bool {
        self.children[t as usize].is_empty()
    }

    /// Does the (possibly ghost) triangle's region contain `p` under the
    /// perturbed predicates? Ghost regions are the open half planes beyond
    /// their hull edge.
    fn covers(&self, kernel: &Kernel, t: u32, p: u32) -> bool {
        let tri = &self.tris[t as usize];
        let [a, b, c] = tri.v;
        if c == GHOST {
            return triangle_oriented(kernel, &self.points, a, b, p);
        }
        triangle_oriented(kernel, &self.points, a, b, p)
            && triangle_oriented(kernel, &self.points, b, c, p)
            && triangle_oriented(kernel, &self.points, c, a, p)
    }

    /// Is `p` inside the perturbed circumdisk (finite triangle) or visible
    /// half plane (ghost)?
    fn in_circum(&self, kernel: &Kernel, t: u32, p: u32) -> bool {
        let tri = &self.tris[t as usize];
        let [a, b, c] = tri.v;
        if c == GHOST {
            triangle_oriented(kernel, &self.points, a, b, p)
        } else {
            incircle_assuming_ccw(kernel, &self.points, a, b, c, p)
        }
    }

    /// Descend the history from the roots to a live region containing `p`.
    fn locate(&self, kernel: &Kernel, p: u32) -> u32 {
        let mut cur = *self
            .roots
            .iter()
            .find(|&&r| self.covers(kernel, r, p))
            .expect("root regions cover the plane");
        'down: while !self.is_live(cur) {
            for &ch in &self.children[cur as usize] {
                if self.covers(kernel, ch, p) {
                    cur = ch;
                    continue 'down;
                }
            }
            unreachable!("children fail to cover a dead triangle's region");
        }
        cur
    }

    fn edge_of(&self, t: u32, from: u32, to: u32) -> usize {
        let v = self.tris[t as usize].v;
        for i in 0..3 {
            if v[(i + 1) % 3] == from && v[(i + 2) % 3] == to {
                return i;
            }
        }
        unreachable!("adjacent triangle lost its shared edge");
    }

    fn insert(&mut self, kernel: &Kernel, p: u32) {
        let seed = self.locate(kernel, p);
        debug_assert!(self.in_circum(kernel, seed, p));

        // grow the cavity of triangles whose perturbed circumdisk contains p
        self.epoch += 1;
        let epoch = self.epoch;
        self.stamp.resize(self.tris.len(), 0);
        let mut cavity = vec![seed];
        self.stamp[seed as usize] = epoch;
        let mut boundary: Vec<(u32, u32, u32)> = Vec::new(); // (u, w, outside)
        let mut i = 0;
        while i < cavity.len() {
            let t = cavity[i];
            i += 1;
            let tri = self.tris[t as usize];
            for e in 0..3 {
                let n = tri.nbr[e];
                if self.stamp[n as usize] == epoch {
                    continue;
                }
                if self.in_circum(kernel, n, p) {
                    self.stamp[n as usize] = epoch;
                    cavity.push(n);
                } else {
                    boundary.push((tri.v[(e + 1) % 3], tri.v[(e + 2) % 3], n));
                }
            }
        }

        // fan the cavity boundary from p; ghosts keep the symbolic vertex in
        // slot 2 by rotation
        let base = self.tris.len() as u32;
        let mut fresh: Vec<u32> = Vec::with_capacity(boundary.len());
        let mut by_edge: std::collections::HashMap<(u32, u32), (u32, usize)> =
            std::collections::HashMap::with_capacity(3 * boundary.len());
        for (j, &(u, w, outside)) in boundary.iter().enumerate() {
            let id = base + j as u32;
            fresh.push(id);
            let mut v = [u, w, p];
            while v[2] != GHOST && (v[0] == GHOST || v[1] == GHOST) {
                v.rotate_left(1);
            }
            self.tris.push(Tri { v, nbr: [u32::MAX; 3] });
            self.children.push(Vec::new());
            // outer link
            let e_new = self.edge_of(id, u, w);
            let e_out = self.edge_of(outside, w, u);
            self.tris[id as usize].nbr[e_new] = outside;
            self.tris[outside as usize].nbr[e_out] = id;
            for e in 0..3 {
                let a = v[(e + 1) % 3];
                let b = v[(e + 2) % 3];
                by_edge.insert((a, b), (id, e));
            }
        }
        // internal fan links
        for (&(a, b), &(t, e)) in &by_edge {
            if self.tris[t as usize].nbr[e] == u32::MAX {
                let (t2, _) = by_edge[&(b, a)];
                self.tris[t as usize].nbr[e] = t2;
            }
        }
        self.stamp.resize(self.tris.len(), 0);
        for t in cavity {
            self.children[t as usize] = fresh.clone();
        }
    }
}

fn hilbert_key(p: QuantizedPoint) -> u64 {
    const ORDER: u32 = 16;
    let grid = |v: i64| -> u32 {
        let shifted = (v + (1i64 << 53)) as u64;
        ((shifted >> (54 - ORDER)) as u32).min((1 << ORDER) - 1)
    };
    let (mut x, mut y) = (grid(p.x), grid(p.y));
    let mut d: u64 = 0;
    let mut s: u32 = 1 << (ORDER - 1);
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += (s as u64) * (s as u64) * ((3 * rx) ^ ry) as u64;
        // rotate quadrant
        if ry == 0 {
            if rx == 1 {
                x = s.wrapping_sub(1).wrapping_sub(x);
                y = s.wrapping_sub(1).wrapping_sub(y);
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Biased randomized insertion order: a fixed-seed shuffle split into
/// geometrically growing rounds, each sorted along a Hilbert curve. The
/// shuffle seed is a constant so the triangulation is a pure function of the
/// input sequence.
fn brio_order(points: &[QuantizedPoint]) -> Vec<u32> {
    let n = points.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut state: u64 = 0x853c49e6748fea9b;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for i in (1..n).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let mut cuts = vec![n];
    while *cuts.last().unwrap() > 32 {
        cuts.push(cuts.last().unwrap() / 2);
    }
    cuts.push(0);
    for w in cuts.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        order[lo..hi].sort_by_key(|&i| hilbert_key(points[i as usize]));
    }
    order
}

/// Delaunay triangulation of `points` under the perturbed predicates.
///
/// Duplicate points are kept (they become distinct perturbed vertices), and
/// any degeneracy is welcome. Inputs with fewer than three points yield a
/// triangulation with vertices but no triangles.
pub fn delaunay_triangulate(kernel: &Kernel, points: &[QuantizedPoint]) -> Triangulation {
    let mut t = Triangulation {
        points: points.to_vec(),
        tris: Vec::new(),
        children: Vec::new(),
        roots: Vec::new(),
        stamp: Vec::new(),
        epoch: 0,
    };
    if points.len() < 3 {
        return t;
    }
    let order = brio_order(points);
    let (a, b, c) = (order[0], order[1], order[2]);
    let (b, c) = if triangle_oriented(kernel, &t.points, a, b, c) { (b, c) } else { (c, b) };
    // seed triangle and its three ghosts; ghost [y, x, GHOST] sits beyond
    // hull edge x -> y
    t.tris.push(Tri { v: [a, b, c], nbr: [u32::MAX; 3] });
    for &(x, y) in &[(a, b), (b, c), (c, a)] {
        t.tris.push(Tri { v: [y, x, GHOST], nbr: [u32::MAX; 3] });
    }
    t.children = vec![Vec::new(); 4];
    // wire all adjacency through the directed edge map
    for g in 0..4u32 {
        let v = t.tris[g as usize].v;
        for e in 0..3 {
            if t.tris[g as usize].nbr[e] != u32::MAX {
                continue;
            }
            let (p, q) = (v[(e + 1) % 3], v[(e + 2) % 3]);
            for other in 0..4u32 {
                if other == g {
                    continue;
                }
                let ov = t.tris[other as usize].v;
                for oe in 0..3 {
                    if ov[(oe + 1) % 3] == q && ov[(oe + 2) % 3] == p {
                        t.tris[g as usize].nbr[e] = other;
                        t.tris[other as usize].nbr[oe] = g;
                    }
                }
            }
        }
    }
    t.roots = vec![0, 1, 2, 3];
    t.stamp = vec![0; 4];
    for &p in &order[3..] {
        t.insert(kernel, p);
    }
    t
}

impl Triangulation {
    /// Structural validity: live finite triangles are perturbed
    /// counterclockwise, adjacency is involutive and edge-consistent, and
    /// Euler's relation `V - E + T = 1` holds for the triangulated hull.
    pub fn verify_structure(&self, kernel: &Kernel) -> Result<(), String> {
        if self.points.len() < 3 {
            return Ok(());
        }
        let mut finite = 0usize;
        let mut ghosts = 0usize;
        for (i, tri) in self.tris.iter().enumerate() {
            if !self.children[i].is_empty() {
                continue;
            }
            if tri.v[2] == GHOST {
                ghosts += 1;
            } else {
                finite += 1;
                if !triangle_oriented(kernel, &self.points, tri.v[0], tri.v[1], tri.v[2]) {
                    return Err(format!("triangle {i} is not counterclockwise"));
                }
            }
            for e in 0..3 {
                let n = tri.nbr[e];
                if n == u32::MAX || !self.is_live(n) {
                    return Err(format!("triangle {i} has a dead or missing neighbor"));
                }
                let (a, b) = (tri.v[(e + 1) % 3], tri.v[(e + 2) % 3]);
                let back = self.edge_of(n, b, a);
                if self.tris[n as usize].nbr[back] != i as u32 {
                    return Err(format!("adjacency between {i} and {n} is not involutive"));
                }
            }
        }
        let edges = (3 * finite + ghosts) / 2;
        if !(3 * finite + ghosts).is_multiple_of(2) {
            return Err("odd incidence count".into());
        }
        let v = self.points.len();
        if v + finite != edges + 1 {
            return Err(format!("Euler check failed: V={v} E={edges} T={finite}"));
        }
        Ok(())
    }

    /// Brute-force empty-circumcircle check: no vertex lies strictly inside
    /// the perturbed circumcircle of any live finite triangle. Quadratic;
    /// for tests and `--verify`.
    pub fn verify_delaunay(&self, kernel: &Kernel) -> Result<(), String> {
        for (i, tri) in self.tris.iter().enumerate() {
            if !self.children[i].is_empty() || tri.v[2] == GHOST {
                continue;
            }
            let [a, b, c] = tri.v;
            for p in 0..self.points.len() as u32 {
                if p == a || p == b || p == c {
                    continue;
                }
                if incircle(kernel, &self.points, a, b, c, p) {
                    return Err(format!(
                        "vertex {p} is inside the circumcircle of triangle ({a},{b},{c})"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Indexed triangle list as text: a header line, vertex lines, triangle
    /// lines.
    pub fn export_text(&self) -> String {
        use std::fmt::Write;
        let tris = self.triangles();
        let mut out = String::new();
        let _ = writeln!(out, "mesh {} {}", self.points.len(), tris.len());
        for p in &self.points {
            let _ = writeln!(out, "{} {}", p.x, p.y);
        }
        for t in &tris {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        out
    }
}
