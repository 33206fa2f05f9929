// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Deterministic, randomly accessible pseudorandom coefficients.
//!
//! Every perturbation coefficient `y[k][i]` used by the kernel comes out of a
//! counter-based generator keyed by a fixed 128-bit seed, so the same
//! `(seed, level, coordinate)` triple yields the same value in any call order,
//! on any platform, in any run. We use Threefry-2x64 with 20 rounds; the level
//! and coordinate index form the two counter words and the seed forms the key.
//!
//! The stream implemented here is frozen: the known-answer vectors in the
//! tests pin the exact output words, and golden determinism tests elsewhere in
//! the tree depend on them.

/// 128-bit key identifying one perturbation universe.
///
/// Two kernels with the same seed agree on every perturbed sign and every
/// rounded construction. The default is an arbitrary published constant; it
/// can be overridden through [`crate::perturb::Kernel`] (the CLI exposes
/// `--perturb-seed` and the `EXACTGEO_SEED` environment variable).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PerturbationSeed(pub u128);

/// Default seed. The value is arbitrary (golden-ratio bit pattern); what
/// matters is that it never changes.
pub const DEFAULT_SEED: PerturbationSeed = PerturbationSeed(0x9e3779b97f4a7c15_f39cc0605cedc834);

const SKEIN_PARITY: u64 = 0x1bd11bda_a9fc1a22;
const ROTATIONS: [u32; 8] = [16, 42, 12, 31, 16, 32, 24, 21];

/// Threefry-2x64, 20 rounds. Counter and key are two 64-bit words each;
/// returns both output words.
#[inline]
pub fn threefry2x64(key: [u64; 2], counter: [u64; 2]) -> [u64; 2] {
    let ks = [key[0], key[1], SKEIN_PARITY ^ key[0] ^ key[1]];
    let mut x0 = counter[0].wrapping_add(ks[0]);
    let mut x1 = counter[1].wrapping_add(ks[1]);
    let mut round = 0;
    for block in 1..=5u64 {
        for _ in 0..4 {
            x0 = x0.wrapping_add(x1);
            x1 = x1.rotate_left(ROTATIONS[round & 7]);
            x1 ^= x0;
            round += 1;
        }
        let s = block as usize;
        x0 = x0.wrapping_add(ks[s % 3]);
        x1 = x1.wrapping_add(ks[(s + 1) % 3]).wrapping_add(block);
    }
    [x0, x1]
}

#[inline]
fn key_words(seed: PerturbationSeed) -> [u64; 2] {
    [seed.0 as u64, (seed.0 >> 64) as u64]
}

/// Perturbation coefficient `y[level][coordinate]` in `[0, 2^32)`.
///
/// Pure function of its arguments; levels start at 1. Level 0 of the counter
/// space is reserved for [`identity_check_coordinate`].
#[inline]
pub fn rand_coefficient(seed: PerturbationSeed, level: u32, coordinate: u64) -> u32 {
    debug_assert!(level >= 1, "perturbation levels start at 1");
    threefry2x64(key_words(seed), [level as u64, coordinate])[0] as u32
}

/// Value of global coordinate `id` in random evaluation point `point` for the
/// polynomial identity check. The counter rows used here descend from
/// `u64::MAX` and never collide with the perturbation levels, and keying by
/// the coordinate id means repeated ids see one shared value, so the check
/// tests the polynomial actually being perturbed.
#[inline]
pub fn identity_check_coordinate(seed: PerturbationSeed, point: u32, id: u64) -> u32 {
    threefry2x64(key_words(seed), [u64::MAX - point as u64, id])[0] as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    // Straight transcription of the published Threefish round structure,
    // kept deliberately separate from the unrolled production routine above.
    fn reference_threefry(key: [u64; 2], counter: [u64; 2]) -> [u64; 2] {
        let mut ks = [key[0], key[1], SKEIN_PARITY];
        ks[2] ^= key[0] ^ key[1];
        let mut x = [counter[0].wrapping_add(ks[0]), counter[1].wrapping_add(ks[1])];
        for r in 0..20usize {
            x[0] = x[0].wrapping_add(x[1]);
            x[1] = x[1].rotate_left(ROTATIONS[r % 8]);
            x[1] ^= x[0];
            if r % 4 == 3 {
                let s = r / 4 + 1;
                x[0] = x[0].wrapping_add(ks[s % 3]);
                x[1] = x[1].wrapping_add(ks[(s + 1) % 3]).wrapping_add(s as u64);
            }
        }
        x
    }

    #[test]
    fn matches_reference_implementation() {
        // A few structured inputs plus a scan over mixed bit patterns.
        let mut cases = vec![
            ([0, 0], [0, 0]),
            ([u64::MAX, u64::MAX], [u64::MAX, u64::MAX]),
            ([0x243f6a8885a308d3, 0x13198a2e03707344], [0xa4093822299f31d0, 0x082efa98ec4e6c89]),
        ];
        let mut state = 0x12345u64;
        for _ in 0..2000 {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                state
            };
            cases.push(([next(), next()], [next(), next()]));
        }
        for (key, counter) in cases {
            assert_eq!(threefry2x64(key, counter), reference_threefry(key, counter));
        }
    }

    #[test]
    fn known_answer_vectors() {
        // Frozen outputs of the generator as shipped. Any change to these
        // breaks every golden determinism test downstream.
        let z = threefry2x64([0, 0], [0, 0]);
        let f = threefry2x64([u64::MAX, u64::MAX], [u64::MAX, u64::MAX]);
        let pi = threefry2x64(
            [0xa4093822299f31d0, 0x082efa98ec4e6c89],
            [0x243f6a8885a308d3, 0x13198a2e03707344],
        );
        assert_eq!(z, [0xc2b6e3a8c2c69865, 0x6f81ed42f350084d]);
        assert_eq!(f, [0xe02cb7c4d95d277a, 0xd06633d0893b8b68]);
        assert_eq!(pi, [0x263c7d30bb0f0af1, 0x56be8361d3311526]);

        // Frozen samples of the coefficient stream under the default seed.
        let s = DEFAULT_SEED;
        let got: Vec<u32> = (0..4).map(|i| rand_coefficient(s, 1, i)).collect();
        let expect: Vec<u32> = (0..4)
            .map(|i| reference_threefry(key_words(s), [1, i])[0] as u32)
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn pure_and_order_independent() {
        let s = DEFAULT_SEED;
        let forward: Vec<u32> = (0..100).map(|i| rand_coefficient(s, 1, i)).collect();
        let backward: Vec<u32> = (0..100).rev().map(|i| rand_coefficient(s, 1, i)).collect();
        assert_eq!(forward, backward.into_iter().rev().collect::<Vec<_>>());
        assert_eq!(rand_coefficient(s, 1, 0), rand_coefficient(s, 1, 0));
        assert_ne!(rand_coefficient(s, 1, 0), rand_coefficient(s, 2, 0));
        assert_ne!(
            rand_coefficient(PerturbationSeed(1), 1, 0),
            rand_coefficient(PerturbationSeed(2), 1, 0)
        );
    }

    #[test]
    fn mean_is_unbiased() {
        let s = DEFAULT_SEED;
        let n = 1024u64;
        let sum: u64 = (0..n).map(|i| rand_coefficient(s, 1, i) as u64).sum();
        let mean = sum as f64 / n as f64;
        // sigma of the mean for uniform u32 samples
        let sigma = (2f64.powi(32) / 12f64.sqrt()) / (n as f64).sqrt();
        assert!(
            (mean - 2f64.powi(31)).abs() < 3.0 * sigma,
            "mean {mean} too far from 2^31"
        );
    }

    #[test]
    fn collision_rate_is_birthday_bound() {
        let s = DEFAULT_SEED;
        let n = 1_000_000u64;
        let mut seen: Vec<u32> = (0..n)
            .map(|j| rand_coefficient(s, 1 + (j % 8) as u32, j / 8))
            .collect();
        seen.sort_unstable();
        let collisions = seen.windows(2).filter(|w| w[0] == w[1]).count();
        // Expected ~ n^2 / 2^33 = 116 for a uniform source.
        assert!(
            (30..=350).contains(&collisions),
            "collision count {collisions} inconsistent with uniform 32-bit sampling"
        );
    }
}
