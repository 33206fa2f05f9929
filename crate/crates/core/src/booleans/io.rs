// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Text formats for polygon and arc-polygon input and output.
//!
//! Polygons: one `loop` block per contour, one `x y` vertex per line, closed
//! implicitly, terminated by `end`.
//!
//! Arc shapes: `circle <id> <cx> <cy> <r>` lines declare circles, then
//! `loop` blocks hold `arc <circle> <ccw|cw> <left|right>` records (the
//! branch names the intersection with the next arc's circle, this circle
//! first) and `full <circle> <ccw|cw>` blocks stand alone. Lines starting
//! with `#` are comments.

use std::fmt::Write as _;

use super::arc::{ArcEdge, ArcLoop};
use super::polygon::Polygon;
use crate::numeric::QuantizedPoint;
use crate::predicates::{Branch, Circle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

pub fn format_polygons(loops: &[Polygon]) -> String {
    let mut out = String::new();
    for l in loops {
        let _ = writeln!(out, "loop");
        for p in l {
            let _ = writeln!(out, "{} {}", p.x, p.y);
        }
        let _ = writeln!(out, "end");
    }
    out
}

pub fn parse_polygons(text: &str) -> Result<Vec<Polygon>, ParseError> {
    let mut loops = Vec::new();
    let mut cur: Option<Polygon> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match (line, &mut cur) {
            ("loop", None) => cur = Some(Vec::new()),
            ("loop", Some(_)) => return err(n, "nested loop"),
            ("end", Some(_)) => loops.push(cur.take().unwrap()),
            ("end", None) => return err(n, "end without loop"),
            (_, Some(poly)) => {
                let mut it = line.split_whitespace();
                let x = it.next().and_then(|t| t.parse().ok());
                let y = it.next().and_then(|t| t.parse().ok());
                match (x, y, it.next()) {
                    (Some(x), Some(y), None) => poly.push(QuantizedPoint { x, y }),
                    _ => return err(n, "expected `x y`"),
                }
            }
            (_, None) => return err(n, "vertex outside loop"),
        }
    }
    if cur.is_some() {
        return err(text.lines().count(), "unterminated loop");
    }
    Ok(loops)
}

pub fn format_arc_shape(circles: &[Circle], loops: &[ArcLoop]) -> String {
    let mut out = String::new();
    for (i, c) in circles.iter().enumerate() {
        let _ = writeln!(out, "circle {} {} {} {}", i, c.center.x, c.center.y, c.radius);
    }
    for l in loops {
        match l {
            ArcLoop::Full { circle, ccw } => {
                let _ = writeln!(out, "full {} {}", circle, if *ccw { "ccw" } else { "cw" });
            }
            ArcLoop::Arcs(arcs) => {
                let _ = writeln!(out, "loop");
                for a in arcs {
                    let _ = writeln!(
                        out,
                        "arc {} {} {}",
                        a.circle,
                        if a.ccw { "ccw" } else { "cw" },
                        match a.end_branch {
                            Branch::Left => "left",
                            Branch::Right => "right",
                        }
                    );
                }
                let _ = writeln!(out, "end");
            }
        }
    }
    out
}

pub fn parse_arc_shape(text: &str) -> Result<(Vec<Circle>, Vec<ArcLoop>), ParseError> {
    let mut circles: Vec<Circle> = Vec::new();
    let mut loops = Vec::new();
    let mut cur: Option<Vec<ArcEdge>> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let word = it.next().unwrap();
        match (word, &mut cur) {
            ("circle", None) => {
                let vals: Option<Vec<i64>> = it.map(|t| t.parse().ok()).collect();
                match vals.as_deref() {
                    Some([id, cx, cy, r]) if *id == circles.len() as i64 && *r > 0 => {
                        circles.push(Circle::new(QuantizedPoint { x: *cx, y: *cy }, *r));
                    }
                    _ => return err(n, "expected `circle <index> <cx> <cy> <r>` in order"),
                }
            }
            ("full", None) => {
                let c: Option<u32> = it.next().and_then(|t| t.parse().ok());
                let d = it.next();
                match (c, d) {
                    (Some(c), Some(d @ ("ccw" | "cw"))) if (c as usize) < circles.len() => {
                        loops.push(ArcLoop::Full { circle: c, ccw: d == "ccw" });
                    }
                    _ => return err(n, "expected `full <circle> <ccw|cw>`"),
                }
            }
            ("loop", None) => cur = Some(Vec::new()),
            ("end", Some(_)) => loops.push(ArcLoop::Arcs(cur.take().unwrap())),
            ("arc", Some(arcs)) => {
                let c: Option<u32> = it.next().and_then(|t| t.parse().ok());
                let d = it.next();
                let b = it.next();
                match (c, d, b) {
                    (Some(c), Some(d @ ("ccw" | "cw")), Some(b @ ("left" | "right")))
                        if (c as usize) < circles.len() =>
                    {
                        arcs.push(ArcEdge {
                            circle: c,
                            ccw: d == "ccw",
                            end_branch: if b == "left" { Branch::Left } else { Branch::Right },
                        });
                    }
                    _ => return err(n, "expected `arc <circle> <ccw|cw> <left|right>`"),
                }
            }
            _ => return err(n, format!("unexpected `{word}` here")),
        }
    }
    if cur.is_some() {
        return err(text.lines().count(), "unterminated loop");
    }
    Ok((circles, loops))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_round_trip() {
        let loops = vec![
            vec![QuantizedPoint { x: 0, y: 0 }, QuantizedPoint { x: 5, y: 0 }, QuantizedPoint { x: 0, y: 7 }],
            vec![QuantizedPoint { x: -3, y: 2 }, QuantizedPoint { x: 9, y: -4 }, QuantizedPoint { x: 1, y: 1 }],
        ];
        let text = format_polygons(&loops);
        assert_eq!(parse_polygons(&text).unwrap(), loops);
        assert!(parse_polygons("loop\n1 2\n").is_err());
        assert!(parse_polygons("1 2\n").is_err());
    }

    #[test]
    fn arc_round_trip() {
        let circles = vec![
            Circle::new(QuantizedPoint { x: 0, y: 0 }, 10),
            Circle::new(QuantizedPoint { x: 5, y: 0 }, 10),
        ];
        let loops = vec![
            ArcLoop::Full { circle: 0, ccw: false },
            ArcLoop::Arcs(vec![
                ArcEdge { circle: 0, ccw: true, end_branch: Branch::Left },
                ArcEdge { circle: 1, ccw: false, end_branch: Branch::Right },
            ]),
        ];
        let text = format_arc_shape(&circles, &loops);
        let (c2, l2) = parse_arc_shape(&text).unwrap();
        assert_eq!(c2, circles);
        assert_eq!(l2, loops);
    }
}
