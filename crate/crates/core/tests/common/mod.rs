//! Shared helpers for the integration suites: seeded random matrix
//! generators and a brute-force conjugacy oracle for small 2x2 instances.

use monoconj::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Elementary transvection I + c * E_{ij}, i != j.
pub fn transvection(n: usize, i: usize, j: usize, c: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m.set(i, j, BigInt::from(c));
    m
}

/// Random product of at most `words` elementary transvections with small
/// offsets; always determinant +1, entries kept under `entry_cap` by
/// rejection.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, words: usize, entry_cap: i64) -> IntMatrix {
    loop {
        let mut m = IntMatrix::identity(n);
        let count = rng.gen_range(1..=words);
        for _ in 0..count {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
            m = m.mul(&transvection(n, i, j, c)).unwrap();
        }
        let cap = BigInt::from(entry_cap);
        let ok = (0..n).all(|i| (0..n).all(|j| m.get(i, j).abs() <= cap));
        if ok && !m.is_identity() {
            return m;
        }
    }
}

/// Random word of length at most `len` in the standard SL(2,Z) shears and
/// their inverses.
pub fn random_sl2_word(rng: &mut ChaCha8Rng, len: usize) -> IntMatrix {
    let gens = [
        IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
        IntMatrix::from_rows(&[vec![1, -1], vec![0, 1]]).unwrap(),
        IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap(),
        IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1]]).unwrap(),
    ];
    let mut m = IntMatrix::identity(2);
    let count = rng.gen_range(1..=len);
    for _ in 0..count {
        m = m.mul(&gens[rng.gen_range(0..4)]).unwrap();
    }
    m
}

/// Random hyperbolic determinant-one 2x2 matrix: a positive shear word
/// (guaranteed trace > 2) optionally conjugated by a short SL(2,Z) word and
/// optionally negated.
pub fn random_hyperbolic(rng: &mut ChaCha8Rng, allow_negative_trace: bool) -> IntMatrix {
    let a = rng.gen_range(1..=4i64);
    let b = rng.gen_range(1..=4i64);
    let c = rng.gen_range(0..=3i64);
    let d = rng.gen_range(0..=3i64);
    let lower = |k: i64| IntMatrix::from_rows(&[vec![1, 0], vec![k, 1]]).unwrap();
    let upper = |k: i64| IntMatrix::from_rows(&[vec![1, k], vec![0, 1]]).unwrap();
    let mut m = lower(a).mul(&upper(b)).unwrap();
    if c > 0 {
        m = m.mul(&lower(c)).unwrap();
    }
    if d > 0 {
        m = m.mul(&upper(d)).unwrap();
    }
    let p = random_sl2_word(rng, 4);
    m = p
        .mul(&m)
        .unwrap()
        .mul(&p.inverse_unimodular().unwrap())
        .unwrap();
    if allow_negative_trace && rng.gen_bool(0.5) {
        m = m.neg();
    }
    m
}

/// Hyperbolic matrix with positive trace and all entries bounded by
/// `entry_cap`, by rejection sampling.
pub fn random_hyperbolic_bounded(rng: &mut ChaCha8Rng, entry_cap: i64) -> IntMatrix {
    loop {
        let m = random_hyperbolic(rng, false);
        let cap = BigInt::from(entry_cap);
        if (0..2).all(|i| (0..2).all(|j| m.get(i, j).abs() <= cap)) {
            return m;
        }
    }
}

/// Exhaustive search for a conjugator with entries bounded by `bound`;
/// the independent oracle for small conjugacy decisions.
pub fn brute_conjugator(m: &IntMatrix, n: &IntMatrix, bound: i64) -> Option<IntMatrix> {
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let det = a * d - b * c;
                    if det != 1 && det != -1 {
                        continue;
                    }
                    let p = IntMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap();
                    if p.mul(m).unwrap() == n.mul(&p).unwrap() {
                        return Some(p);
                    }
                }
            }
        }
    }
    None
}

/// Entry-bound check used to keep generated instances at desk scale.
pub fn entries_bounded(m: &IntMatrix, cap: i64) -> bool {
    let cap = BigInt::from(cap);
    (0..m.dim()).all(|i| (0..m.dim()).all(|j| m.get(i, j).abs() <= cap))
}

#[allow(dead_code)]
pub fn one() -> BigInt {
    BigInt::one()
}
