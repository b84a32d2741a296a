//! Exact arithmetic over a prime field F_p.
//!
//! Elements are plain `u64` values in `[0, p)`; the [`PrimeField`] context
//! carries the modulus and provides the operations. All arithmetic is exact,
//! with intermediate products widened to `u128`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus: the Mersenne prime 2^31 - 1. Any prime works as long as
/// it exceeds the worker count; tiny primes (5, 7, 11) are used by the
/// exhaustive audits.
pub const DEFAULT_MODULUS: u64 = 2_147_483_647;

/// A prime field F_p. Cheap to copy; shared read-only by all encoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Builds a field context, rejecting composite moduli.
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduces an arbitrary integer into the field.
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.modulus
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::InverseOfZero);
        }
        // Invariants: r0 = t0*a (mod p), r1 = t1*a (mod p).
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus must be prime");
        let p = self.modulus as i128;
        Ok(((t0 % p + p) % p) as u64)
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.modulus;
        let mut acc: u64 = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Uniform element in `[0, p)`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.modulus)
    }

    /// Uniform nonzero element in `[1, p)`.
    pub fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.modulus)
    }
}

/// Evaluation points handed to the workers: pairwise distinct and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPointSet {
    points: Vec<u64>,
}

impl EvalPointSet {
    pub fn new(field: &PrimeField, points: Vec<u64>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(points.len());
        for &z in &points {
            if z == 0 || z >= field.modulus() {
                return Err(Error::InvalidParameter(format!(
                    "evaluation point {z} outside (0, {})",
                    field.modulus()
                )));
            }
            if !seen.insert(z) {
                return Err(Error::DuplicatePoint(z));
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point assigned to worker `p` (0-based).
    pub fn point(&self, p: usize) -> u64 {
        self.points[p]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.points
    }
}

/// Draws `count` pairwise-distinct nonzero points, reproducible from `seed`.
pub fn sample_distinct_points(field: &PrimeField, count: usize, seed: u64) -> Result<EvalPointSet> {
    if count as u64 >= field.modulus() {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {count} distinct nonzero points from F_{}",
            field.modulus()
        )));
    }
    let mut rng = seeded_rng(seed, 0);
    let mut seen = std::collections::HashSet::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let z = field.sample_nonzero(&mut rng);
        if seen.insert(z) {
            points.push(z);
        }
    }
    EvalPointSet::new(field, points)
}

/// Counter-based stream RNG so every experiment replays from `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic Miller-Rabin, exact for all `u64` inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    // This witness set is deterministic for every 64-bit integer.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
