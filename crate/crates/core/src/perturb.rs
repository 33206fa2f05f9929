// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! The perturbation engine.
//!
//! A sign query runs through a three-tier cascade: interval filter, exact
//! integer evaluation, and symbolic perturbation. The perturbation tier
//! replaces input coordinate `x[i]` by `x[i] + eps_1 y[1][i] + ... +
//! eps_k y[k][i]`, evaluates the black-box polynomial on the integer lattice
//! of infinitesimal exponents, interpolates the coefficients of the level-`k`
//! polynomial, and returns the sign of its heaviest nonzero monomial. Level
//! `k` resolves unless the level-`k` polynomial is identically zero, which
//! happens with probability about `(d / 2^32)^k`, so in practice everything
//! ends at level 1 and the result is a total, deterministic sign.
//!
//! The same machinery evaluates exactly rounded constructions: a rational
//! (plus optional square-root) expression whose denominator vanishes is
//! resolved by matching the heaviest surviving perturbation terms of
//! numerator and denominator, which is l'Hopital's rule in the infinitesimal
//! variables, and the resulting limit is rounded to the nearest integer with
//! pure integer arithmetic.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::interpolation::{interpolate_multivariate_in, InterpolationError, Lattice};
use crate::numeric::{exact_sign, interval_sign, ExactInt, Interval, Predicate, Ring, SmallInt};
use crate::prf::{identity_check_coordinate, rand_coefficient, PerturbationSeed, DEFAULT_SEED};

/// Levels beyond this are unreachable for 32-bit coefficient space unless the
/// predicate was chosen adversarially with knowledge of the generator.
pub const MAX_LEVEL: usize = 16;

/// Sign of a perturbed quantity. Zero cannot occur.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    #[inline]
    fn from_i8(s: i8) -> Sign {
        debug_assert!(s != 0);
        if s > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// The one error a sign query can produce: the black box is the zero
/// polynomial, i.e. the caller asked something like "is the triangle
/// (p7, p7, p7) counterclockwise?".
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IdenticallyZeroError;

impl std::fmt::Display for IdenticallyZeroError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "identically zero predicate passed to perturbed sign")
    }
}

impl std::error::Error for IdenticallyZeroError {}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConstructionError {
    /// Denominator is the zero polynomial.
    ZeroDenominator,
    /// A numerator outweighs the denominator: the limit diverges.
    Infinite,
    /// The radicand is negative in the perturbed world: the constructed
    /// object does not exist.
    Imaginary,
}

impl std::fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionError::ZeroDenominator => write!(f, "identically zero denominator"),
            ConstructionError::Infinite => write!(f, "construction limit is infinite"),
            ConstructionError::Imaginary => write!(f, "construction limit is imaginary"),
        }
    }
}

impl std::error::Error for ConstructionError {}

/// Cascade resolution counters for the current thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct CascadeStats {
    pub interval_resolved: u64,
    pub exact_resolved: u64,
    /// `level_resolved[k]` counts queries resolved at perturbation level `k`
    /// (index 0 unused).
    pub level_resolved: [u64; MAX_LEVEL + 1],
    pub identity_checks: u64,
}

impl CascadeStats {
    pub fn total_calls(&self) -> u64 {
        self.interval_resolved + self.exact_resolved + self.level_resolved.iter().sum::<u64>()
    }

    pub fn perturbed_calls(&self) -> u64 {
        self.level_resolved.iter().sum()
    }

    pub fn deep_calls(&self) -> u64 {
        self.level_resolved[2..].iter().sum()
    }
}

thread_local! {
    static STATS: RefCell<CascadeStats> = RefCell::new(CascadeStats::default());
}

pub fn stats() -> CascadeStats {
    STATS.with(|s| *s.borrow())
}

pub fn reset_stats() {
    STATS.with(|s| *s.borrow_mut() = CascadeStats::default());
}

fn record(f: impl FnOnce(&mut CascadeStats)) {
    STATS.with(|s| f(&mut s.borrow_mut()));
}

/// One perturbation universe: the coefficient seed plus debug switches.
///
/// All predicate and construction queries take a kernel; two kernels with
/// equal seeds agree on everything.
#[derive(Clone, Copy, Debug)]
pub struct Kernel {
    pub seed: PerturbationSeed,
    /// Evaluate the exact path even when the interval filter succeeds and
    /// assert agreement.
    pub both_paths: bool,
    /// Skip the fast tiers and start the cascade at this level (test hook).
    pub force_level: Option<usize>,
}

impl Default for Kernel {
    fn default() -> Kernel {
        Kernel { seed: DEFAULT_SEED, both_paths: false, force_level: None }
    }
}

impl Kernel {
    pub fn new(seed: PerturbationSeed) -> Kernel {
        Kernel { seed, ..Kernel::default() }
    }

    /// Default kernel with `EXACTGEO_SEED` (hex, optional `0x` prefix) and
    /// `EXACTGEO_BOTH_PATHS=1` applied when present.
    pub fn from_env() -> Kernel {
        let mut k = Kernel::default();
        if let Ok(s) = std::env::var("EXACTGEO_SEED") {
            let t = s.trim().trim_start_matches("0x");
            if let Ok(v) = u128::from_str_radix(t, 16) {
                k.seed = PerturbationSeed(v);
            }
        }
        if std::env::var("EXACTGEO_BOTH_PATHS").map(|v| v == "1").unwrap_or(false) {
            k.both_paths = true;
        }
        k
    }
}

enum Attempt {
    Resolved(Sign, usize),
    Overflow,
    IdenticallyZero,
}

/// Perturbed lattice argument `x[i] + sum_j e_j y[j][i]`. Inputs are bounded
/// by 2^53 and offsets by d^2 * 2^32, so i64 cannot overflow.
#[inline]
fn perturbed_arg(x: i64, tuple: &[u16], y: &[Vec<u64>], i: usize) -> i64 {
    let mut v = x as i128;
    for (j, &e) in tuple.iter().enumerate() {
        if e != 0 {
            v += e as i128 * y[j][i] as i128;
        }
    }
    debug_assert!(v.unsigned_abs() < i64::MAX as u128);
    v as i64
}

fn attempt<R: ExactInt, P: Predicate + ?Sized>(
    kernel: &Kernel,
    f: &P,
    values: &[i64],
    ids: &[u64],
) -> Attempt {
    let n = f.arity();
    let d = f.degree().max(1);
    let start = kernel.force_level.unwrap_or(1);
    let mut prev: Vec<R> = Vec::new();
    if start == 1 {
        let args: Vec<R> = values.iter().map(|&v| R::from_i64(v)).collect();
        let v0 = f.eval(&args);
        if v0.poisoned() {
            return Attempt::Overflow;
        }
        let s = v0.signum();
        if s != 0 {
            return Attempt::Resolved(Sign::from_i8(s), 0);
        }
        prev.push(v0);
    }

    // y[j][i] = coefficient of eps_{j+1} for coordinate ids[i]
    let mut y: Vec<Vec<u64>> = Vec::new();
    let mut args = vec![R::zero(); n];
    for k in start..=MAX_LEVEL {
        while y.len() < k {
            let level = y.len() as u32 + 1;
            y.push(
                ids.iter()
                    .map(|&id| rand_coefficient(kernel.seed, level, id) as u64)
                    .collect(),
            );
        }
        // level 1 is the hot path of every degenerate query; it needs no
        // lattice bookkeeping since the tuples are just 0..=d
        if k == 1 {
            let mut lat = Vec::with_capacity(d + 1);
            lat.extend(prev.iter().cloned());
            let mut any_nonzero = false;
            for e in lat.len()..=d {
                for i in 0..n {
                    args[i] = R::from_i64(values[i] + e as i64 * y[0][i] as i64);
                }
                let v = f.eval(&args);
                if v.poisoned() {
                    return Attempt::Overflow;
                }
                any_nonzero |= v.signum() != 0;
                lat.push(v);
            }
            if any_nonzero {
                let interp = crate::interpolation::divided_differences_in(&mut lat)
                    .and_then(|()| crate::interpolation::newton_to_monomial_in(&mut lat));
                match interp {
                    Ok(()) => {}
                    Err(InterpolationError::Overflow) => return Attempt::Overflow,
                    Err(InterpolationError::NonExactDivision) => {
                        panic!("black box is not an integer polynomial of the declared degree")
                    }
                }
                for c in &lat {
                    let s = c.signum();
                    if s != 0 {
                        return Attempt::Resolved(Sign::from_i8(s), 1);
                    }
                }
                unreachable!("nonzero lattice values interpolated to all-zero coefficients");
            }
            prev = lat;
            continue;
        }
        let lattice = Lattice::new(k, d);
        let mut lat = Vec::with_capacity(lattice.len());
        lat.extend(prev.iter().cloned());
        let mut any_nonzero = false;
        for t in &lattice.tuples()[lat.len()..] {
            for i in 0..n {
                args[i] = R::from_i64(perturbed_arg(values[i], t, &y, i));
            }
            let v = f.eval(&args);
            if v.poisoned() {
                return Attempt::Overflow;
            }
            any_nonzero |= v.signum() != 0;
            lat.push(v);
        }
        if any_nonzero {
            match interpolate_multivariate_in(&lattice, &mut lat) {
                Ok(()) => {}
                Err(InterpolationError::Overflow) => return Attempt::Overflow,
                Err(InterpolationError::NonExactDivision) => {
                    panic!("black box is not an integer polynomial of the declared degree")
                }
            }
            for c in &lat {
                let s = c.signum();
                if s != 0 {
                    return Attempt::Resolved(Sign::from_i8(s), k);
                }
            }
            unreachable!("nonzero lattice values interpolated to all-zero coefficients");
        }
        if k == 2 && start == 1 {
            record(|s| s.identity_checks += 1);
            if check_nonzero_polynomial(kernel, f, ids) == IdentityCheck::ApparentlyZero {
                return Attempt::IdenticallyZero;
            }
        }
        prev = lat;
    }
    unreachable!("perturbation unresolved after {MAX_LEVEL} levels");
}

/// Total perturbed sign of `f` at the quantized coordinates `values`, whose
/// stable perturbation identities are `ids`.
///
/// Returns an error only for the identically zero polynomial, which is a bug
/// in the caller, never a property of the input data.
pub fn try_perturbed_sign<P: Predicate + ?Sized>(
    kernel: &Kernel,
    f: &P,
    values: &[i64],
    ids: &[u64],
) -> Result<Sign, IdenticallyZeroError> {
    debug_assert_eq!(values.len(), f.arity());
    debug_assert_eq!(ids.len(), f.arity());
    if kernel.force_level.is_none() {
        if let Some(s) = interval_sign(f, values) {
            if kernel.both_paths {
                assert_eq!(
                    s,
                    exact_sign(f, values),
                    "interval filter contradicts exact evaluation"
                );
            }
            record(|st| st.interval_resolved += 1);
            return Ok(Sign::from_i8(s));
        }
    }
    let outcome = match attempt::<SmallInt, P>(kernel, f, values, ids) {
        Attempt::Overflow => attempt::<BigInt, P>(kernel, f, values, ids),
        done => done,
    };
    match outcome {
        Attempt::Resolved(sign, level) => {
            record(|st| {
                if level == 0 {
                    st.exact_resolved += 1;
                } else {
                    st.level_resolved[level] += 1;
                }
            });
            Ok(sign)
        }
        Attempt::IdenticallyZero => Err(IdenticallyZeroError),
        Attempt::Overflow => unreachable!("BigInt attempt cannot overflow"),
    }
}

/// [`try_perturbed_sign`] for callers that guarantee a nonzero polynomial.
pub fn perturbed_sign<P: Predicate + ?Sized>(
    kernel: &Kernel,
    f: &P,
    values: &[i64],
    ids: &[u64],
) -> Sign {
    try_perturbed_sign(kernel, f, values, ids)
        .expect("identically zero predicate (caller bug)")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdentityCheck {
    NonzeroWitnessFound,
    ApparentlyZero,
}

/// Schwartz-Zippel identity test: evaluate `f` exactly at 20 pseudorandom
/// points from the full 32-bit range (counter rows disjoint from the
/// perturbation stream). Argument slots that share a coordinate id receive
/// the same value, so the polynomial tested is the one the perturbation
/// actually sees. A nonzero polynomial escapes detection with probability
/// under (d/2^32)^20; the zero polynomial is always reported.
pub fn check_nonzero_polynomial<P: Predicate + ?Sized>(
    kernel: &Kernel,
    f: &P,
    ids: &[u64],
) -> IdentityCheck {
    debug_assert_eq!(ids.len(), f.arity());
    for point in 0..20u32 {
        let args: Vec<i64> = ids
            .iter()
            .map(|&id| identity_check_coordinate(kernel.seed, point, id) as i64)
            .collect();
        if exact_sign(f, &args) != 0 {
            return IdentityCheck::NonzeroWitnessFound;
        }
    }
    IdentityCheck::ApparentlyZero
}

/// Component selector for [`Construction`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Component {
    Denominator,
    Numerator(usize),
    SqrtMultiplier(usize),
    SqrtRadicand(usize),
}

/// A family of rational (optionally square-root) expressions over one shared
/// argument list:
///
/// ```text
/// output_i = ( numerator_i + sqrt_multiplier_i * sqrt(sqrt_radicand_i) ) / denominator
/// ```
///
/// `degree()` must bound the total degree of every component polynomial and
/// of `sqrt_multiplier_i^2 * sqrt_radicand_i`.
pub trait Construction {
    fn arity(&self) -> usize;
    fn outputs(&self) -> usize;
    fn degree(&self) -> usize;
    fn has_sqrt(&self, output: usize) -> bool;
    fn eval_component<R: Ring>(&self, c: Component, args: &[R]) -> R;
}

/// Adapter exposing one construction component as a standalone predicate.
struct ComponentPredicate<'a, C: Construction> {
    c: &'a C,
    comp: Component,
}

impl<C: Construction> Predicate for ComponentPredicate<'_, C> {
    fn arity(&self) -> usize {
        self.c.arity()
    }
    fn degree(&self) -> usize {
        self.c.degree()
    }
    fn eval<R: Ring>(&self, args: &[R]) -> R {
        self.c.eval_component(self.comp, args)
    }
}

/// Exactly rounded perturbed construction: every output is within 1/2 of the
/// true perturbed limit, and ties round away from zero.
pub fn perturbed_construction<C: Construction>(
    kernel: &Kernel,
    c: &C,
    values: &[i64],
    ids: &[u64],
) -> Result<Vec<i64>, ConstructionError> {
    debug_assert_eq!(values.len(), c.arity());
    debug_assert_eq!(ids.len(), c.arity());
    if kernel.force_level.is_none() {
        if let Some(out) = construction_interval_path(c, values) {
            return Ok(out);
        }
    }
    construction_exact(kernel, c, values, ids)
}

/// Interval fast path: succeeds when the denominator has a certain sign and
/// every rounded output is pinned to a unique integer strictly inside its
/// half-open rounding cell.
fn construction_interval_path<C: Construction>(c: &C, values: &[i64]) -> Option<Vec<i64>> {
    let args: Vec<Interval> = values.iter().map(|&v| Interval::from_i64(v)).collect();
    let g = c.eval_component(Component::Denominator, &args);
    g.certain_sign()?;
    if g.contains(0.0) {
        return None;
    }
    let mut out = Vec::with_capacity(c.outputs());
    for i in 0..c.outputs() {
        let mut num = c.eval_component(Component::Numerator(i), &args);
        if c.has_sqrt(i) {
            let s = c.eval_component(Component::SqrtRadicand(i), &args);
            if s.lo() < 0.0 {
                return None;
            }
            let h = c.eval_component(Component::SqrtMultiplier(i), &args);
            num = num.add(&h.mul(&s.sqrt()?));
        }
        let r = num.div(&g)?;
        let n = (r.lo() + 0.5).floor();
        if n != (r.hi() + 0.5).floor() || !(r.lo() > n - 0.5 && r.hi() < n + 0.5) {
            return None;
        }
        if n.abs() > 9e15 {
            return None;
        }
        out.push(n as i64);
    }
    Some(out)
}

struct DenominatorLimit {
    level: usize,
    lattice: Lattice,
    /// index of the dominant tuple in the interpolated table
    dominant: usize,
    q: BigInt,
}

fn evaluate_component_lattice<C: Construction>(
    c: &C,
    comp: Component,
    lattice: &Lattice,
    values: &[i64],
    y: &[Vec<u64>],
) -> Vec<BigInt> {
    let n = c.arity();
    let mut args = vec![SmallInt::ZERO; n];
    let mut argbuf = vec![0i64; n];
    let mut out = Vec::with_capacity(lattice.len());
    for t in lattice.tuples() {
        for i in 0..n {
            argbuf[i] = perturbed_arg(values[i], t, y, i);
            args[i] = SmallInt::from_i64(argbuf[i]);
        }
        let v = match comp {
            Component::SqrtMultiplier(i) => {
                // evaluated as multiplier^2 * radicand in one go
                let h = c.eval_component(Component::SqrtMultiplier(i), &args);
                let s = c.eval_component(Component::SqrtRadicand(i), &args);
                h.mul(&h).mul(&s)
            }
            comp => c.eval_component(comp, &args),
        };
        if !v.is_poisoned() {
            out.push(v.to_bigint());
            continue;
        }
        let big: Vec<BigInt> = argbuf.iter().map(|&a| BigInt::from(a)).collect();
        out.push(match comp {
            Component::SqrtMultiplier(i) => {
                let h = c.eval_component(Component::SqrtMultiplier(i), &big);
                let s = c.eval_component(Component::SqrtRadicand(i), &big);
                (&h * &h) * &s
            }
            comp => c.eval_component(comp, &big),
        });
    }
    out
}

fn construction_exact<C: Construction>(
    kernel: &Kernel,
    c: &C,
    values: &[i64],
    ids: &[u64],
) -> Result<Vec<i64>, ConstructionError> {
    let d = c.degree().max(1);
    let mut y: Vec<Vec<u64>> = Vec::new();
    let grow_y = |y: &mut Vec<Vec<u64>>, k: usize| {
        while y.len() < k {
            let level = y.len() as u32 + 1;
            y.push(ids.iter().map(|&id| rand_coefficient(kernel.seed, level, id) as u64).collect());
        }
    };

    // Find the denominator's level and dominant term.
    let start = kernel.force_level.unwrap_or(0).min(1);
    let gcomp = ComponentPredicate { c, comp: Component::Denominator };
    let den = 'den: {
        if start == 0 {
            let g0 = crate::numeric::exact_value(&gcomp, values);
            if !g0.is_zero() {
                break 'den DenominatorLimit {
                    level: 0,
                    lattice: Lattice::new(0, d),
                    dominant: 0,
                    q: g0,
                };
            }
        }
        for k in 1..=MAX_LEVEL {
            grow_y(&mut y, k);
            let lattice = Lattice::new(k, d);
            let mut table =
                evaluate_component_lattice(c, Component::Denominator, &lattice, values, &y);
            if table.iter().any(|v| !v.is_zero()) {
                interpolate_multivariate_in(&lattice, &mut table)
                    .expect("BigInt interpolation of a valid black box");
                let dominant = table.iter().position(|v| !v.is_zero()).unwrap();
                let q = table.swap_remove(dominant);
                break 'den DenominatorLimit { level: k, lattice, dominant, q };
            }
            if k == 2 {
                record(|s| s.identity_checks += 1);
                if check_nonzero_polynomial(kernel, &gcomp, ids) == IdentityCheck::ApparentlyZero {
                    return Err(ConstructionError::ZeroDenominator);
                }
            }
        }
        unreachable!("denominator unresolved after {MAX_LEVEL} levels");
    };
    grow_y(&mut y, den.level);

    let m = den.lattice.tuples()[den.dominant].clone();
    let two_m: Vec<u16> = m.iter().map(|&e| e * 2).collect();
    let rank_2m = den.lattice.rank(&two_m);

    let mut out = Vec::with_capacity(c.outputs());
    for i in 0..c.outputs() {
        // Numerator coefficient matching the denominator's dominant term.
        let table = {
            let mut t =
                evaluate_component_lattice(c, Component::Numerator(i), &den.lattice, values, &y);
            if den.level > 0 {
                interpolate_multivariate_in(&den.lattice, &mut t)
                    .expect("BigInt interpolation of a valid black box");
            }
            t
        };
        if table[..den.dominant].iter().any(|v| !v.is_zero()) {
            return Err(ConstructionError::Infinite);
        }
        let p = table[den.dominant].clone();

        // Square-root part: sqrt(multiplier^2 * radicand) matched against the
        // squared denominator, whose dominant term is q^2 at tuple 2m.
        let (mut sigma, mut h_star) = (0i8, BigInt::from(0));
        if c.has_sqrt(i) {
            let mut ht = evaluate_component_lattice(
                c,
                Component::SqrtMultiplier(i),
                &den.lattice,
                values,
                &y,
            );
            if den.level > 0 {
                interpolate_multivariate_in(&den.lattice, &mut ht)
                    .expect("BigInt interpolation of a valid black box");
            }
            if let Some(first) = ht.iter().position(|v| !v.is_zero()) {
                if ht[first].is_negative() {
                    // the radicand is negative in the perturbed world
                    return Err(ConstructionError::Imaginary);
                }
                let first_tuple = &den.lattice.tuples()[first];
                match rank_2m {
                    Some(r2m) => {
                        if first < r2m {
                            return Err(ConstructionError::Infinite);
                        }
                        if first == r2m {
                            h_star = ht[r2m].clone();
                        }
                    }
                    None => {
                        // 2m lies beyond the table; anything in the table that
                        // dominates it diverges.
                        if Lattice::dominates(first_tuple, &two_m) {
                            return Err(ConstructionError::Infinite);
                        }
                    }
                }
                if !h_star.is_zero() {
                    let hp = ComponentPredicate { c, comp: Component::SqrtMultiplier(i) };
                    sigma = match try_perturbed_sign(kernel, &hp, values, ids)
                        .expect("nonzero multiplier implied by nonzero h^2 s")
                    {
                        Sign::Positive => 1,
                        Sign::Negative => -1,
                    };
                }
            }
        }
        out.push(round_radical_ratio(p, sigma, &h_star, &den.q));
    }
    Ok(out)
}

/// Compare `2p + 2 sigma sqrt(h)` against `w`, exactly.
fn cmp_radical(p: &BigInt, sigma: i8, h: &BigInt, w: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let u: BigInt = p + p - w;
    if sigma == 0 || h.is_zero() {
        return u.cmp(&BigInt::from(0));
    }
    if sigma > 0 {
        // u + 2 sqrt(h) vs 0
        if u.sign() != num_bigint::Sign::Minus {
            Greater
        } else {
            (h * 4u8).cmp(&(&u * &u))
        }
    } else {
        // u - 2 sqrt(h) vs 0
        if u.sign() != num_bigint::Sign::Plus {
            Less
        } else {
            (&u * &u).cmp(&(h * 4u8))
        }
    }
}

/// Nearest integer to `(p + sigma * sqrt(h)) / q` with ties away from zero.
/// Requires `h >= 0`, `q != 0`; all decisions are exact integer comparisons.
fn round_radical_ratio(p: BigInt, sigma: i8, h: &BigInt, q: &BigInt) -> i64 {
    debug_assert!(!h.is_negative() && !q.is_zero());
    let (mut p, mut sigma, mut q) = (p, sigma, q.clone());
    if q.is_negative() {
        p = -p;
        sigma = -sigma;
        q = -q;
    }
    // sign of the numerator
    let num_sign = match cmp_radical(&p, sigma, h, &BigInt::from(0)) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => return 0,
    };
    if num_sign < 0 {
        p = -p;
        sigma = -sigma;
    }
    // N = p + sigma sqrt(h) is now positive; bracket it with the integer sqrt
    let a = h.sqrt();
    let n_lo: BigInt = match sigma {
        1 => &p + &a,
        -1 => &p - &a - 1,
        _ => p.clone(),
    };
    let two_q: BigInt = &q + &q;
    let mut cand = (&n_lo + &n_lo + &q).div_floor(&two_q);
    if cand.is_negative() {
        cand = BigInt::from(0);
    }
    for _ in 0..10 {
        // n is the answer iff (2n - 1) q <= 2N < (2n + 1) q
        let lower = cmp_radical(&p, sigma, h, &((&cand + &cand - 1) * &q)) != std::cmp::Ordering::Less;
        let upper = cmp_radical(&p, sigma, h, &((&cand + &cand + 1) * &q)) == std::cmp::Ordering::Less;
        if lower && upper {
            let v = cand.to_i64().expect("rounded construction exceeds i64");
            return if num_sign < 0 { -v } else { v };
        }
        if !lower {
            cand -= 1;
        } else {
            cand += 1;
        }
    }
    unreachable!("rounding bracket failed to converge");
}

/// Nearest integer to `sqrt(p / q)`, ties away from zero, by exact integer
/// comparisons of the form `(2n - 1)^2 q <=> 4 p`.
pub fn rounded_sqrt_ratio(p: &BigInt, q: &BigInt) -> i64 {
    assert!(!q.is_zero(), "zero denominator");
    let (p, q) = if q.is_negative() { (-p, -q.clone()) } else { (p.clone(), q.clone()) };
    assert!(!p.is_negative(), "negative radicand p/q");
    if p.is_zero() {
        return 0;
    }
    let mut n: BigInt = p.div_floor(&q).sqrt();
    loop {
        // want (2n - 1)^2 q <= 4p < (2n + 1)^2 q
        let lo_ok = n.is_zero() || {
            let t: BigInt = &n + &n - 1;
            &t * &t * &q <= &p * 4u8
        };
        if !lo_ok {
            n -= 1;
            continue;
        }
        let t: BigInt = &n + &n + 1;
        if &p * 4u8 < &t * &t * &q {
            return n.to_i64().expect("rounded sqrt exceeds i64");
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Orient2;
    impl Predicate for Orient2 {
        fn arity(&self) -> usize {
            6
        }
        fn degree(&self) -> usize {
            2
        }
        fn eval<R: Ring>(&self, a: &[R]) -> R {
            a[2].sub(&a[0])
                .mul(&a[5].sub(&a[1]))
                .sub(&a[3].sub(&a[1]).mul(&a[4].sub(&a[0])))
        }
    }

    struct ZeroPoly;
    impl Predicate for ZeroPoly {
        fn arity(&self) -> usize {
            2
        }
        fn degree(&self) -> usize {
            2
        }
        fn eval<R: Ring>(&self, a: &[R]) -> R {
            // x0^2 - x0*x0: syntactically busy, identically zero
            a[0].mul(&a[0]).sub(&a[0].mul(&a[0]))
        }
    }

    fn ids(n: usize) -> Vec<u64> {
        (0..n as u64).collect()
    }

    #[test]
    fn nondegenerate_resolves_without_perturbation() {
        let k = Kernel::default();
        reset_stats();
        let s = perturbed_sign(&k, &Orient2, &[0, 0, 1, 0, 0, 1], &ids(6));
        assert_eq!(s, Sign::Positive);
        assert_eq!(stats().perturbed_calls(), 0);
    }

    #[test]
    fn collinear_resolves_at_level_one() {
        let k = Kernel::default();
        reset_stats();
        let s1 = perturbed_sign(&k, &Orient2, &[0, 0, 1, 1, 2, 2], &ids(6));
        let s2 = perturbed_sign(&k, &Orient2, &[0, 0, 1, 1, 2, 2], &ids(6));
        assert_eq!(s1, s2);
        assert_eq!(stats().level_resolved[1], 2);
        // swapping q and r flips the determinant
        let ids_sw = vec![0, 1, 4, 5, 2, 3];
        let s3 = perturbed_sign(&k, &Orient2, &[0, 0, 2, 2, 1, 1], &ids_sw);
        assert_eq!(s3, s1.flip());
    }

    #[test]
    fn all_coincident_is_total_and_antisymmetric() {
        let k = Kernel::default();
        for base in [0i64, 7, -123456789] {
            let v = [base, base, base, base, base, base];
            let s = perturbed_sign(&k, &Orient2, &v, &ids(6));
            let ids_sw = vec![0, 1, 4, 5, 2, 3];
            let t = perturbed_sign(&k, &Orient2, &v, &ids_sw);
            assert_eq!(t, s.flip());
        }
    }

    #[test]
    fn identically_zero_is_reported() {
        let k = Kernel::default();
        let r = try_perturbed_sign(&k, &ZeroPoly, &[5, 9], &[0, 1]);
        assert_eq!(r, Err(IdenticallyZeroError));
        assert_eq!(
            check_nonzero_polynomial(&k, &ZeroPoly, &[0, 1]),
            IdentityCheck::ApparentlyZero
        );
        assert_eq!(
            check_nonzero_polynomial(&k, &Orient2, &ids(6)),
            IdentityCheck::NonzeroWitnessFound
        );
        // a nonzero polynomial whose pullback under repeated ids vanishes:
        // orient(p, q, p) is identically zero as a function of p and q
        let r = try_perturbed_sign(&k, &Orient2, &[3, 4, 9, 2, 3, 4], &[0, 1, 2, 3, 0, 1]);
        assert_eq!(r, Err(IdenticallyZeroError));
    }

    #[test]
    fn force_level_still_agrees() {
        let mut k = Kernel::default();
        let plain = perturbed_sign(&k, &Orient2, &[0, 0, 3, 1, 1, 4], &ids(6));
        k.force_level = Some(1);
        assert_eq!(perturbed_sign(&k, &Orient2, &[0, 0, 3, 1, 1, 4], &ids(6)), plain);
        k.force_level = Some(2);
        assert_eq!(perturbed_sign(&k, &Orient2, &[0, 0, 3, 1, 1, 4], &ids(6)), plain);
    }

    struct ConstRatio {
        f: i64,
        g: i64,
    }
    impl Construction for ConstRatio {
        fn arity(&self) -> usize {
            1
        }
        fn outputs(&self) -> usize {
            1
        }
        fn degree(&self) -> usize {
            1
        }
        fn has_sqrt(&self, _: usize) -> bool {
            false
        }
        fn eval_component<R: Ring>(&self, c: Component, _a: &[R]) -> R {
            match c {
                Component::Denominator => R::from_i64(self.g),
                Component::Numerator(_) => R::from_i64(self.f),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn constant_ratio_rounds_half_away() {
        let k = Kernel::default();
        let r = perturbed_construction(&k, &ConstRatio { f: 6, g: 4 }, &[0], &[0]).unwrap();
        assert_eq!(r, vec![2]);
        let r = perturbed_construction(&k, &ConstRatio { f: -6, g: 4 }, &[0], &[0]).unwrap();
        assert_eq!(r, vec![-2]);
        let r = perturbed_construction(&k, &ConstRatio { f: 7, g: 3 }, &[0], &[0]).unwrap();
        assert_eq!(r, vec![2]);
    }

    #[test]
    fn rounded_sqrt_ratio_examples() {
        let b = BigInt::from;
        assert_eq!(rounded_sqrt_ratio(&b(4), &b(1)), 2);
        assert_eq!(rounded_sqrt_ratio(&b(2), &b(1)), 1);
        assert_eq!(rounded_sqrt_ratio(&b(0), &b(7)), 0);
        // exact tie 2.25 = 1.5^2 rounds away to 2
        assert_eq!(rounded_sqrt_ratio(&b(9), &b(4)), 2);
        assert_eq!(rounded_sqrt_ratio(&b(-9), &b(-4)), 2);
    }

    #[test]
    fn rounded_sqrt_ratio_brute_force() {
        let mut state = 0x5eedu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 16
        };
        for _ in 0..10_000 {
            let p = BigInt::from(next());
            let q = BigInt::from(next() | 1);
            let n = rounded_sqrt_ratio(&p, &q);
            let nb = BigInt::from(n);
            // (n - 1/2)^2 <= p/q <= (n + 1/2)^2 via cross multiplication
            if n > 0 {
                let t = 2 * &nb - 1;
                assert!(&t * &t * &q <= 4 * &p);
            }
            let t = 2 * &nb + 1;
            assert!(4 * &p <= &t * &t * &q);
        }
    }

    #[test]
    fn radical_rounding_brute_force() {
        let mut state = 0xabcdefu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 40) as i64 - (1 << 23)
        };
        for _ in 0..20_000 {
            let p = next();
            let h = next().unsigned_abs() as i64;
            let q = loop {
                let q = next();
                if q != 0 {
                    break q;
                }
            };
            let sigma = (next() % 3) as i8;
            let got = round_radical_ratio(
                BigInt::from(p),
                sigma.signum(),
                &BigInt::from(h),
                &BigInt::from(q),
            );
            let v = (p as f64 + sigma.signum() as f64 * (h as f64).sqrt()) / q as f64;
            let expect = if v >= 0.0 { (v + 0.5).floor() } else { (v - 0.5).ceil() };
            // f64 evaluation is good to ~1e-9 here, far from any tie
            if (v - v.round()).abs() > 1e-6 && (v + 0.5 - (v + 0.5).round()).abs() > 1e-6 {
                assert_eq!(got as f64, expect, "p={p} sigma={sigma} h={h} q={q} v={v}");
            }
        }
    }
}
