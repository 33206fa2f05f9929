// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Cross-checks of the predicate cascade against independent high-precision
//! and symbolic oracles on random inputs.

use std::cmp::Ordering;

use exactgeo_testkit::{
    circle_intersection_oracle, random_intersecting_pair, symbolic_level1_sign, Fix, TestRng,
};
use exactgeo::numeric::QuantizedPoint;
use exactgeo::perturb::{perturbed_sign, reset_stats, stats};
use exactgeo::predicates::{
    circle_intersection_point, circle_reaches_line, circles_intersect, intersection_below,
    intersection_left_of, line_crossing_left_of, line_crossing_right_of_extreme, point_ids,
    segment_intersection_point, segments_intersect, triangle_oriented, vertex_below_line,
    vertex_in_right_half, vertex_in_upper_half, Branch, Circle, CircleIntersection, OrientPred,
};
use exactgeo::Kernel;

const SCALE: i64 = 1 << 40;

fn shared_triple(rng: &mut TestRng) -> Option<(Vec<Circle>, Branch, Branch)> {
    let (c0, c1) = random_intersecting_pair(rng, SCALE);
    let c2 = exactgeo_testkit::random_circle(rng, SCALE);
    let (_, _, _, _, beta2) = exactgeo_testkit::pair_exact(&c0, &c2);
    if beta2 <= num_bigint::BigInt::from(0) {
        return None;
    }
    let b1 = if rng.next_u64() & 1 == 0 { Branch::Left } else { Branch::Right };
    let b2 = if rng.next_u64() & 1 == 0 { Branch::Left } else { Branch::Right };
    Some((vec![c0, c1, c2], b1, b2))
}

#[test]
fn intersection_below_matches_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(101);
    let mut checked = 0;
    while checked < 4000 {
        let Some((cs, b1, b2)) = shared_triple(&mut rng) else { continue };
        let p1 = circle_intersection_oracle(&cs[0], &cs[1], b1).unwrap();
        let p2 = circle_intersection_oracle(&cs[0], &cs[2], b2).unwrap();
        let (Some(below), Some(left)) = (p1.1.cmp(&p2.1), p1.0.cmp(&p2.0)) else { continue };
        assert_eq!(
            intersection_below(&k, &cs, 0, 1, b1, 2, b2),
            below == Ordering::Less,
            "below mismatch: {cs:?} {b1:?} {b2:?}"
        );
        assert_eq!(
            intersection_left_of(&k, &cs, 0, 1, b1, 2, b2),
            left == Ordering::Less,
            "left mismatch: {cs:?} {b1:?} {b2:?}"
        );
        checked += 1;
    }
}

#[test]
fn constructions_match_oracle_within_half() {
    let k = Kernel::default();
    let mut rng = TestRng(202);
    for _ in 0..4000 {
        let (c0, c1) = random_intersecting_pair(&mut rng, SCALE);
        let cs = vec![c0, c1];
        for b in [Branch::Left, Branch::Right] {
            let p = circle_intersection_point(&k, &cs, CircleIntersection::new(0, 1, b)).unwrap();
            let (ox, oy) = circle_intersection_oracle(&c0, &c1, b).unwrap();
            assert!(ox.within_of_int(p.x, 1, 2), "x {} vs {}", p.x, ox.to_f64());
            assert!(oy.within_of_int(p.y, 1, 2), "y {} vs {}", p.y, oy.to_f64());
        }
    }
}

#[test]
fn vertex_side_predicates_match_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(303);
    let mut checked = 0;
    while checked < 3000 {
        let (c0, c1) = random_intersecting_pair(&mut rng, SCALE);
        let anchor = exactgeo_testkit::random_circle(&mut rng, SCALE);
        let cs = vec![c0, c1, anchor];
        let b = if rng.next_u64() & 1 == 0 { Branch::Left } else { Branch::Right };
        let v = CircleIntersection::new(0, 1, b);
        let Some((ox, oy)) = circle_intersection_oracle(&c0, &c1, b) else { continue };
        let (cx, cy) = (Fix::from_int(c0.center.x), Fix::from_int(c0.center.y));
        let hy = Fix::from_int(anchor.center.y);
        let (Some(sup), Some(srt), Some(sln)) = (oy.cmp(&cy), ox.cmp(&cx), oy.cmp(&hy)) else {
            continue;
        };
        assert_eq!(vertex_in_upper_half(&k, &cs, v), sup == Ordering::Greater);
        assert_eq!(vertex_in_right_half(&k, &cs, v), srt == Ordering::Greater);
        assert_eq!(vertex_below_line(&k, &cs, v, 2), sln == Ordering::Less);
        checked += 1;
    }
}

#[test]
fn line_crossing_predicates_match_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(404);
    let mut checked = 0;
    while checked < 3000 {
        let anchor = exactgeo_testkit::random_circle(&mut rng, SCALE);
        let a = exactgeo_testkit::random_circle(&mut rng, SCALE);
        let b = exactgeo_testkit::random_circle(&mut rng, SCALE);
        let reach = |c: &Circle| {
            let q = (anchor.center.y - c.center.y) as i128;
            (c.radius as i128) * (c.radius as i128) - q * q > 0
        };
        if !reach(&a) || !reach(&b) {
            continue;
        }
        let cs = vec![a, b, anchor];
        assert!(circle_reaches_line(&k, &cs, 0, 2));
        let cross_x = |c: &Circle, s: i64| {
            let q = (anchor.center.y - c.center.y) as i128;
            let rad = Fix::from_big(&num_bigint::BigInt::from(
                (c.radius as i128) * (c.radius as i128) - q * q,
            ));
            let sq = rad.sqrt();
            let base = Fix::from_int(c.center.x);
            if s > 0 {
                base.add(&sq)
            } else {
                base.sub(&sq)
            }
        };
        let (sa, sb) = (
            if rng.next_u64() & 1 == 0 { 1 } else { -1 },
            if rng.next_u64() & 1 == 0 { 1 } else { -1 },
        );
        let (xa, xb) = (cross_x(&a, sa), cross_x(&b, sb));
        if let Some(ord) = xa.cmp(&xb) {
            assert_eq!(
                line_crossing_left_of(&k, &cs, 0, sa, 1, sb, 2),
                ord == Ordering::Less,
                "{cs:?} {sa} {sb}"
            );
            checked += 1;
        }
        // probe comparison against the right extreme of the anchor's circle:
        // reuse circle b as the extreme owner when a reaches b's center line
        let qb = (b.center.y - a.center.y) as i128;
        if (a.radius as i128) * (a.radius as i128) - qb * qb > 0 {
            let cs2 = vec![a, b];
            let q = num_bigint::BigInt::from(a.radius) * a.radius
                - num_bigint::BigInt::from(qb) * qb;
            let x = if sa > 0 {
                Fix::from_int(a.center.x).add(&Fix::from_big(&q).sqrt())
            } else {
                Fix::from_int(a.center.x).sub(&Fix::from_big(&q).sqrt())
            };
            let probe = Fix::from_int(b.center.x + b.radius);
            if let Some(ord) = x.cmp(&probe) {
                assert_eq!(
                    line_crossing_right_of_extreme(&k, &cs2, 0, sa, 1),
                    ord == Ordering::Greater
                );
            }
        }
    }
}

#[test]
fn segment_predicates_match_rational_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(505);
    let mut hits = 0;
    for _ in 0..10_000 {
        let pts: Vec<QuantizedPoint> = (0..4)
            .map(|_| QuantizedPoint::new(rng.range(-SCALE, SCALE), rng.range(-SCALE, SCALE)))
            .collect();
        // rational orientation tests (exact in i128 at this scale)
        let orient = |p: QuantizedPoint, q: QuantizedPoint, r: QuantizedPoint| -> i128 {
            (q.x - p.x) as i128 * (r.y - p.y) as i128 - (q.y - p.y) as i128 * (r.x - p.x) as i128
        };
        let o1 = orient(pts[0], pts[1], pts[2]);
        let o2 = orient(pts[0], pts[1], pts[3]);
        let o3 = orient(pts[2], pts[3], pts[0]);
        let o4 = orient(pts[2], pts[3], pts[1]);
        if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
            continue;
        }
        let expect = (o1 > 0) != (o2 > 0) && (o3 > 0) != (o4 > 0);
        assert_eq!(segments_intersect(&k, &pts, 0, 1, 2, 3), expect);
        if expect {
            hits += 1;
            let p = segment_intersection_point(&k, &pts, 0, 1, 2, 3).unwrap();
            // t = cross(c - a, d - c) / cross(b - a, d - c), exact rationals
            let num = orient(pts[0], pts[2], pts[3]);
            let den = o3 - o4;
            let den = if den == 0 { continue } else { den };
            let check = |out: i64, a: i64, b: i64| {
                // |a + t (b - a) - out| <= 1/2  <=>  |2 (a den + num (b-a)) - 2 out den| <= |den|
                let lhs = 2 * (a as i128 * den + num * (b - a) as i128) - 2 * out as i128 * den;
                lhs.abs() <= den.abs()
            };
            assert!(check(p.x, pts[0].x, pts[1].x));
            assert!(check(p.y, pts[0].y, pts[1].y));
        }
    }
    assert!(hits > 500, "too few intersecting samples: {hits}");
}

#[test]
fn degenerate_signs_match_symbolic_level1_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(606);
    // collinear triples, coincident pairs, fully coincident triples
    for trial in 0..3000 {
        let a = QuantizedPoint::new(rng.range(-1000, 1000), rng.range(-1000, 1000));
        let d = (rng.range(-50, 50), rng.range(-50, 50));
        let t = rng.range(-20, 20);
        let pts = match trial % 3 {
            0 => vec![
                a,
                QuantizedPoint::new(a.x + d.0, a.y + d.1),
                QuantizedPoint::new(a.x + t * d.0, a.y + t * d.1),
            ],
            1 => vec![a, a, QuantizedPoint::new(a.x + d.0, a.y + d.1)],
            _ => vec![a, a, a],
        };
        let vals = [pts[0].x, pts[0].y, pts[1].x, pts[1].y, pts[2].x, pts[2].y];
        let ids: Vec<u64> = (0..3).flat_map(point_ids).collect();
        let symbolic = symbolic_level1_sign(k.seed, &OrientPred, &vals, &ids);
        if symbolic == 0 {
            continue; // level-1 polynomial vanished; engine goes deeper
        }
        let got = perturbed_sign(&k, &OrientPred, &vals, &ids);
        assert_eq!(got.is_positive(), symbolic > 0, "pts {pts:?}");
        assert_eq!(triangle_oriented(&k, &pts, 0, 1, 2), symbolic > 0);
    }
}

#[test]
fn cascade_statistics_on_random_and_degenerate_input() {
    let k = Kernel::default();
    let mut rng = TestRng(707);
    reset_stats();
    for _ in 0..20_000 {
        let pts: Vec<QuantizedPoint> = (0..3)
            .map(|_| QuantizedPoint::new(rng.range(-SCALE, SCALE), rng.range(-SCALE, SCALE)))
            .collect();
        triangle_oriented(&k, &pts, 0, 1, 2);
    }
    let s = stats();
    assert!(
        s.interval_resolved as f64 >= 0.99 * s.total_calls() as f64,
        "interval filter resolved only {}/{}",
        s.interval_resolved,
        s.total_calls()
    );

    reset_stats();
    for _ in 0..20_000 {
        let p = QuantizedPoint::new(rng.range(-100, 100), rng.range(-100, 100));
        let pts = vec![p, p, p];
        triangle_oriented(&k, &pts, 0, 1, 2);
    }
    let s = stats();
    assert_eq!(s.interval_resolved + s.exact_resolved, 0);
    assert!(s.deep_calls() <= 5, "too many deep perturbations: {:?}", s.level_resolved);
}

#[test]
fn tangent_circles_resolve_by_symbolic_oracle() {
    let k = Kernel::default();
    let mut rng = TestRng(808);
    use exactgeo::predicates::{circle_ids, CirclesIntersectPred};
    for _ in 0..2000 {
        // exactly tangent integer circles: centers d apart, radii r and d - r
        let d = rng.range(10, 1 << 20);
        let r = rng.range(1, d - 1);
        let c0 = Circle::new(QuantizedPoint::new(0, 0), r);
        let c1 = Circle::new(QuantizedPoint::new(d, 0), d - r);
        let vals = [0, 0, r, d, 0, d - r];
        let ids: Vec<u64> = [circle_ids(0), circle_ids(1)].concat();
        let symbolic = symbolic_level1_sign(k.seed, &CirclesIntersectPred, &vals, &ids);
        if symbolic == 0 {
            continue;
        }
        assert_eq!(circles_intersect(&k, &[c0, c1], 0, 1), symbolic > 0);
    }
}

#[test]
fn intersection_below_is_a_total_order() {
    let k = Kernel::default();
    let mut rng = TestRng(909);
    let mut trials = 0;
    while trials < 300 {
        // one shared circle and three others, sometimes exact duplicates
        let (c0, c1) = random_intersecting_pair(&mut rng, SCALE);
        let c2 = if rng.next_u64() & 3 == 0 { c1 } else { common_circle(&mut rng, &c0) };
        let c3 = if rng.next_u64() & 3 == 0 { c2 } else { common_circle(&mut rng, &c0) };
        let cs = vec![c0, c1, c2, c3];
        if !(circles_intersect(&k, &cs, 0, 2) && circles_intersect(&k, &cs, 0, 3)) {
            continue;
        }
        trials += 1;
        let mut vertices = Vec::new();
        for c in 1..4u32 {
            for b in [Branch::Left, Branch::Right] {
                vertices.push((c, b));
            }
        }
        let below = |a: (u32, Branch), b: (u32, Branch)| {
            if a == b {
                return false;
            }
            intersection_below(&k, &cs, 0, a.0, a.1, b.0, b.1)
        };
        for &a in &vertices {
            assert!(!below(a, a), "must be irreflexive");
            for &b in &vertices {
                if a != b {
                    assert_ne!(below(a, b), below(b, a), "must be antisymmetric: {a:?} {b:?}");
                }
            }
        }
        for &a in &vertices {
            for &b in &vertices {
                for &c in &vertices {
                    if a != b && b != c && a != c && below(a, b) && below(b, c) {
                        assert!(below(a, c), "must be transitive: {a:?} {b:?} {c:?}");
                    }
                }
            }
        }
    }
}

fn common_circle(rng: &mut TestRng, c0: &Circle) -> Circle {
    loop {
        let c = exactgeo_testkit::random_circle(rng, SCALE);
        if exactgeo_testkit::pair_exact(c0, &c).4 > num_bigint::BigInt::from(0) {
            return c;
        }
    }
}
