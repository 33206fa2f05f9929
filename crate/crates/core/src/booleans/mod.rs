// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Boolean operations on polygons and on circular-arc polygons, with
//! winding-number semantics over perturbed arrangements.

mod arc;
mod bbox;
mod io;
mod polygon;

pub use arc::{arc_boolean, ArcEdge, ArcLoop, OutArc, OutArcLoop};
pub use bbox::{Aabb, BboxHierarchy};
pub use io::{
    format_arc_shape, format_polygons, parse_arc_shape, parse_polygons, ParseError,
};
pub use polygon::{polygon_boolean, Polygon};

/// Which region the output bounds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

/// How winding numbers map to insideness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FillRule {
    NonZero,
    EvenOdd,
}

impl FillRule {
    #[inline]
    fn filled(self, w: i32) -> bool {
        match self {
            FillRule::NonZero => w != 0,
            FillRule::EvenOdd => w % 2 != 0,
        }
    }
}

/// Winding numbers of the two operands at a point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Winding {
    pub a: i32,
    pub b: i32,
}

impl Winding {
    pub const ZERO: Winding = Winding { a: 0, b: 0 };

    #[inline]
    fn add(&mut self, operand: usize, delta: i32) {
        if operand == 0 {
            self.a += delta;
        } else {
            self.b += delta;
        }
    }
}

impl BoolOp {
    /// Is a point with winding pair `w` inside the result region?
    pub fn inside(self, rule: FillRule, w: Winding) -> bool {
        let (ia, ib) = (rule.filled(w.a), rule.filled(w.b));
        match self {
            BoolOp::Union => ia || ib,
            BoolOp::Intersection => ia && ib,
            BoolOp::Difference => ia && !ib,
        }
    }
}

/// Failures of the boolean pipeline. `Internal` indicates a predicate or
/// stitching inconsistency and is a debug tripwire, not an input condition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BooleanError {
    Internal(&'static str),
    /// Referenced circles do not intersect where the input claims they do.
    InvalidArcTopology,
}

impl std::fmt::Display for BooleanError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BooleanError::Internal(m) => write!(f, "internal boolean failure: {m}"),
            BooleanError::InvalidArcTopology => write!(f, "arc loop references a non-intersecting circle pair"),
        }
    }
}

impl std::error::Error for BooleanError {}
