// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Exact integer polynomial interpolation on the simplex lattice.
//!
//! Level `k` of the perturbation series is a polynomial of total degree at
//! most `d` in `k` formal infinitesimals. Its coefficients are recovered from
//! values on the lattice of exponent tuples `(e_1, ..., e_k)` with
//! `sum(e) <= d` by running the classical divided-difference algorithm once
//! per variable and then expanding the resulting multivariate Newton form
//! back to monomials, one variable at a time. For integer polynomials every
//! intermediate quantity is an integer (the j-th forward difference of an
//! integer polynomial is divisible by j!), so each division is checked for
//! exactness and a remainder signals bad input rather than being rounded
//! away.

use std::cell::Cell;
use std::collections::HashMap;

use num_bigint::BigInt;

use crate::numeric::ExactInt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InterpolationError {
    /// A divided difference failed to divide exactly: the supplied values are
    /// not the values of an integer polynomial of the promised degree.
    NonExactDivision,
    /// Fixed-width arithmetic overflowed; retry with big integers.
    Overflow,
}

impl std::fmt::Display for InterpolationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InterpolationError::NonExactDivision => {
                write!(f, "divided difference is not an exact integer")
            }
            InterpolationError::Overflow => write!(f, "fixed-width overflow"),
        }
    }
}

impl std::error::Error for InterpolationError {}

thread_local! {
    static LINEAR_OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
fn count_op() {
    LINEAR_OPS.with(|c| c.set(c.get() + 1));
}

/// Running count of linear big-integer operations spent in interpolation on
/// this thread. Only used to sanity-check the cost model.
pub fn linear_op_count() -> u64 {
    LINEAR_OPS.with(|c| c.get())
}

/// Exponent tuples `(e_1, ..., e_k)` with `sum <= d`, enumerated most
/// dominant first.
///
/// The infinitesimals shrink so fast that any power of `eps_i` exceeds
/// `eps_{i+1}`, so one monomial outweighs another exactly when its exponent
/// tuple read from the last variable backwards is lexicographically smaller.
/// Enumerating in that order makes the level-`(k-1)` lattice a prefix of the
/// level-`k` lattice (the `e_k = 0` block), which is what lets the engine
/// reuse black-box evaluations across levels.
pub struct Lattice {
    k: usize,
    d: usize,
    tuples: Vec<Vec<u16>>,
    rank: HashMap<Vec<u16>, u32>,
}

fn enumerate(k: usize, d: usize) -> Vec<Vec<u16>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for ek in 0..=d {
        for mut rest in enumerate(k - 1, d - ek) {
            rest.push(ek as u16);
            out.push(rest);
        }
    }
    out
}

/// `C(k + d, k)`, the lattice size.
pub fn lattice_size(k: usize, d: usize) -> usize {
    let mut n = 1usize;
    for i in 1..=k {
        n = n * (d + i) / i;
    }
    n
}

impl Lattice {
    pub fn new(k: usize, d: usize) -> Lattice {
        let tuples = enumerate(k, d);
        debug_assert_eq!(tuples.len(), lattice_size(k, d));
        let rank = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Lattice { k, d, tuples, rank }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<u16>] {
        &self.tuples
    }

    /// Index of `t` in enumeration (= dominance) order.
    pub fn rank(&self, t: &[u16]) -> Option<usize> {
        self.rank.get(t).map(|&i| i as usize)
    }

    /// True when monomial `a` outweighs monomial `b`.
    pub fn dominates(a: &[u16], b: &[u16]) -> bool {
        debug_assert_eq!(a.len(), b.len());
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return a[i] < b[i];
            }
        }
        false
    }
}

/// Divided differences of `values = f(0), f(1), ..., f(n-1)` in place,
/// producing the coefficients of `f` in the Newton basis
/// `1, x, x(x-1), x(x-1)(x-2), ...`.
pub fn divided_differences_in<R: ExactInt>(values: &mut [R]) -> Result<(), InterpolationError> {
    let n = values.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let diff = values[i].sub(&values[i - 1]);
            count_op();
            if diff.poisoned() {
                return Err(InterpolationError::Overflow);
            }
            values[i] = diff
                .div_exact_small(j as u64)
                .ok_or(InterpolationError::NonExactDivision)?;
        }
    }
    Ok(())
}

/// Expand Newton-basis coefficients (nodes `0..n`) to monomial coefficients
/// in place. The transformation is integral, so no division occurs.
pub fn newton_to_monomial_in<R: ExactInt>(coeffs: &mut [R]) -> Result<(), InterpolationError> {
    let n = coeffs.len();
    if n < 2 {
        return Ok(());
    }
    for i in (1..n - 1).rev() {
        let xi = R::from_i64(i as i64);
        for j in i..n - 1 {
            let t = coeffs[j].sub(&xi.mul(&coeffs[j + 1]));
            count_op();
            if t.poisoned() {
                return Err(InterpolationError::Overflow);
            }
            coeffs[j] = t;
        }
    }
    Ok(())
}

/// Multivariate interpolation on `lattice`: `values[i]` is the polynomial
/// evaluated at integer point `lattice.tuples()[i]`; on success `values[i]`
/// is the monomial coefficient of that exponent tuple.
pub fn interpolate_multivariate_in<R: ExactInt>(
    lattice: &Lattice,
    values: &mut [R],
) -> Result<(), InterpolationError> {
    assert_eq!(values.len(), lattice.len());
    let k = lattice.k;
    let d = lattice.d;

    // Divided differences along each variable. Within a pass the update for a
    // tuple reads its neighbor one step down in variable `v`, so tuples are
    // processed in decreasing e_v order to keep pre-pass values intact.
    for v in 0..k {
        let mut by_ev: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d + 1];
        for (idx, t) in lattice.tuples.iter().enumerate() {
            let ev = t[v] as usize;
            if ev >= 1 {
                let mut prev = t.clone();
                prev[v] -= 1;
                let pidx = lattice.rank(&prev).expect("lattice closed under decrement");
                by_ev[ev].push((idx, pidx));
            }
        }
        for j in 1..=d {
            for ev in (j..=d).rev() {
                for &(idx, pidx) in &by_ev[ev] {
                    let diff = values[idx].sub(&values[pidx]);
                    count_op();
                    if diff.poisoned() {
                        return Err(InterpolationError::Overflow);
                    }
                    values[idx] = diff
                        .div_exact_small(j as u64)
                        .ok_or(InterpolationError::NonExactDivision)?;
                }
            }
        }
    }

    // Newton-to-monomial expansion factors into per-variable passes that
    // commute; each line in direction v is expanded independently.
    let mut line = Vec::with_capacity(d + 1);
    for v in 0..k {
        for (base_idx, t) in lattice.tuples.iter().enumerate() {
            if t[v] != 0 {
                continue;
            }
            let total: usize = t.iter().map(|&e| e as usize).sum();
            let max_ev = d - total;
            line.clear();
            line.push(base_idx);
            let mut cur = t.clone();
            for _ in 0..max_ev {
                cur[v] += 1;
                line.push(lattice.rank(&cur).expect("line stays in lattice"));
            }
            if line.len() < 2 {
                continue;
            }
            let mut buf: Vec<R> = line.iter().map(|&i| values[i].clone()).collect();
            newton_to_monomial_in(&mut buf)?;
            for (&i, c) in line.iter().zip(buf) {
                values[i] = c;
            }
        }
    }
    Ok(())
}

/// Newton coefficients of the polynomial with values `f(0), ..., f(d)`.
pub fn divided_differences(values: &[BigInt]) -> Result<Vec<BigInt>, InterpolationError> {
    let mut c = values.to_vec();
    divided_differences_in(&mut c)?;
    Ok(c)
}

/// Monomial coefficients of a polynomial given in the Newton basis on nodes
/// `0, 1, 2, ...`.
pub fn newton_to_monomial(newton: &[BigInt]) -> Vec<BigInt> {
    let mut c = newton.to_vec();
    newton_to_monomial_in(&mut c).expect("BigInt never overflows");
    c
}

/// Monomial coefficient table of a `k`-variable polynomial of total degree
/// `<= d` from its values on the level-`k` lattice, in dominance order.
pub fn interpolate_multivariate(
    values: &[BigInt],
    k: usize,
    d: usize,
) -> Result<Vec<BigInt>, InterpolationError> {
    let lattice = Lattice::new(k, d);
    let mut c = values.to_vec();
    interpolate_multivariate_in(&lattice, &mut c)?;
    Ok(c)
}
