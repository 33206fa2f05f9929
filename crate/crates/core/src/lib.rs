// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! An exact 2D geometry kernel that never fails on degenerate input.
//!
//! Geometric predicates are integer polynomials evaluated through a cascade:
//! a conservative interval filter, exact big-integer arithmetic, and finally
//! deterministic pseudorandom symbolic perturbation, which replaces each
//! input coordinate `x[i]` by `x[i] + eps_1 y[1][i] + eps_2 y[2][i] + ...`
//! for a fixed hierarchy of formal infinitesimals and a frozen pseudorandom
//! coefficient stream. The perturbed sign of a nonzero polynomial is always
//! nonzero, so callers never see a degenerate case, and the answers are
//! deterministic and consistent across predicates.
//!
//! On top of the cascade sit exactly rounded perturbed constructions
//! (rational and square-root limits resolved by matching leading perturbation
//! terms) and three demonstration algorithms: Delaunay triangulation, polygon
//! booleans, and circular-arc booleans.

pub mod booleans;
pub mod delaunay;
pub mod interpolation;
pub mod numeric;
pub mod perturb;
pub mod predicates;
pub mod prf;

pub use numeric::{quantize, Interval, QuantizeMap, QuantizedPoint};
pub use perturb::Kernel;
pub use prf::{PerturbationSeed, DEFAULT_SEED};
