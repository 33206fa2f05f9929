// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Axis-aligned bounding boxes over integer geometry and a simple median-cut
//! hierarchy for intersection candidate search. All box arithmetic is exact.

use crate::numeric::QuantizedPoint;
use crate::predicates::Circle;

#[derive(Clone, Copy, Debug)]
pub struct Aabb {
    pub min: (i64, i64),
    pub max: (i64, i64),
}

impl Aabb {
    pub fn of_segment(a: QuantizedPoint, b: QuantizedPoint) -> Aabb {
        Aabb {
            min: (a.x.min(b.x), a.y.min(b.y)),
            max: (a.x.max(b.x), a.y.max(b.y)),
        }
    }

    pub fn of_circle(c: &Circle) -> Aabb {
        Aabb {
            min: (c.center.x - c.radius, c.center.y - c.radius),
            max: (c.center.x + c.radius, c.center.y + c.radius),
        }
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb {
            min: (self.min.0.min(o.min.0), self.min.1.min(o.min.1)),
            max: (self.max.0.max(o.max.0), self.max.1.max(o.max.1)),
        }
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        self.min.0 <= o.max.0 && o.min.0 <= self.max.0 && self.min.1 <= o.max.1 && o.min.1 <= self.max.1
    }

    fn center(&self, axis: usize) -> i64 {
        if axis == 0 {
            self.min.0 / 2 + self.max.0 / 2
        } else {
            self.min.1 / 2 + self.max.1 / 2
        }
    }
}

struct Node {
    bb: Aabb,
    /// leaf when `count > 0`: `items[start..start + count]`
    start: u32,
    count: u32,
    left: u32,
    right: u32,
}

/// Binary hierarchy of axis-aligned boxes; leaves hold item indices.
pub struct BboxHierarchy {
    nodes: Vec<Node>,
    items: Vec<u32>,
    boxes: Vec<Aabb>,
}

const LEAF_SIZE: usize = 8;

impl BboxHierarchy {
    pub fn build(boxes: Vec<Aabb>) -> BboxHierarchy {
        let mut h = BboxHierarchy {
            nodes: Vec::new(),
            items: (0..boxes.len() as u32).collect(),
            boxes,
        };
        if !h.items.is_empty() {
            let n = h.items.len();
            h.split(0, n, 0);
        }
        h
    }

    fn split(&mut self, start: usize, end: usize, axis: usize) -> u32 {
        let id = self.nodes.len() as u32;
        let mut bb = self.boxes[self.items[start] as usize];
        for &i in &self.items[start + 1..end] {
            bb = bb.union(&self.boxes[i as usize]);
        }
        self.nodes.push(Node { bb, start: start as u32, count: (end - start) as u32, left: 0, right: 0 });
        if end - start > LEAF_SIZE {
            let mid = (start + end) / 2;
            let boxes = &self.boxes;
            self.items[start..end]
                .select_nth_unstable_by_key(mid - start, |&i| boxes[i as usize].center(axis));
            let l = self.split(start, mid, axis ^ 1);
            let r = self.split(mid, end, axis ^ 1);
            self.nodes[id as usize].count = 0;
            self.nodes[id as usize].left = l;
            self.nodes[id as usize].right = r;
        }
        id
    }

    /// Indices of items whose box overlaps `q`.
    pub fn query(&self, q: &Aabb, out: &mut Vec<u32>) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if !node.bb.overlaps(q) {
                continue;
            }
            if node.count > 0 {
                for &i in &self.items[node.start as usize..(node.start + node.count) as usize] {
                    if self.boxes[i as usize].overlaps(q) {
                        out.push(i);
                    }
                }
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
        }
    }

    /// All unordered overlapping index pairs `(i, j)` with `i < j`.
    pub fn overlapping_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut hits = Vec::new();
        for i in 0..self.boxes.len() as u32 {
            hits.clear();
            self.query(&self.boxes[i as usize], &mut hits);
            for &j in &hits {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hierarchy_finds_all_pairs() {
        let mut state = 99u64;
        let mut next = move |r: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 17) as i64 % r
        };
        let boxes: Vec<Aabb> = (0..200)
            .map(|_| {
                let x = next(10_000);
                let y = next(10_000);
                Aabb { min: (x, y), max: (x + next(500).abs(), y + next(500).abs()) }
            })
            .collect();
        let mut brute = Vec::new();
        for i in 0..boxes.len() as u32 {
            for j in i + 1..boxes.len() as u32 {
                if boxes[i as usize].overlaps(&boxes[j as usize]) {
                    brute.push((i, j));
                }
            }
        }
        let h = BboxHierarchy::build(boxes);
        let mut got = h.overlapping_pairs();
        got.sort_unstable();
        brute.sort_unstable();
        assert_eq!(got, brute);
    }
}
