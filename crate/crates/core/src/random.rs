//! Seeded random instances with integer entries.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antisym::AntisymMatrix;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{rat, Rational};

pub const RETRY_CAP: usize = 100;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

pub fn random_rat<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    rat(random_int(rng, bound))
}

/// A nonzero vector.
pub fn random_vec<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| random_rat(rng, bound)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> RatMatrix {
    RatMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| random_rat(rng, bound)).collect()).collect())
}

pub fn random_antisym<R: Rng>(rng: &mut R, size: usize, bound: i64) -> AntisymMatrix {
    let v: Vec<Rational> = (0..size * size.saturating_sub(1) / 2).map(|_| random_rat(rng, bound)).collect();
    AntisymMatrix::from_upper_vec(size, &v)
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Result<RatMatrix> {
    for _ in 0..RETRY_CAP {
        let m = random_matrix(rng, n, n, bound);
        if !m.det().is_zero() {
            return Ok(m);
        }
    }
    Err(Error::RetryCap(RETRY_CAP))
}

/// An integer matrix of determinant 1, as a product of elementary matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = random_rat(rng, bound);
        let mut e = RatMatrix::identity(n);
        e[(i, j)] = s;
        m = m.mul(&e);
    }
    m
}

/// A random element of SL(2, Q).
pub fn random_sl2<R: Rng>(rng: &mut R, bound: i64) -> RatMatrix {
    let a = random_rat(rng, bound);
    let b = random_rat(rng, bound);
    let c = random_rat(rng, bound);
    let upper = RatMatrix::from_rows(vec![vec![rat(1), a], vec![rat(0), rat(1)]]);
    let lower = RatMatrix::from_rows(vec![vec![rat(1), rat(0)], vec![b, rat(1)]]);
    let upper2 = RatMatrix::from_rows(vec![vec![rat(1), c], vec![rat(0), rat(1)]]);
    upper.mul(&lower).mul(&upper2)
}

/// `k` distinct integers in [−bound, bound], ascending.
pub fn random_distinct<R: Rng>(rng: &mut R, k: usize, bound: i64) -> Vec<Rational> {
    assert!((2 * bound + 1) as usize >= k, "range too small");
    let mut v: Vec<i64> = Vec::with_capacity(k);
    while v.len() < k {
        let x = random_int(rng, bound);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v.sort_unstable();
    v.into_iter().map(rat).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let a = random_antisym(&mut seeded(5), 6, 20);
        let b = random_antisym(&mut seeded(5), 6, 20);
        assert_eq!(a, b);
    }

    #[test]
    fn unimodular_and_sl2() {
        let mut rng = seeded(6);
        for _ in 0..10 {
            assert_eq!(random_unimodular(&mut rng, 6, 3).det(), rat(1));
            assert_eq!(random_sl2(&mut rng, 5).det(), rat(1));
        }
    }

    #[test]
    fn entries_in_bound() {
        let mut rng = seeded(7);
        let m = random_matrix(&mut rng, 4, 4, 2);
        assert!(m.entries().iter().all(|x| x.numer().magnitude() <= &2u32.into() && x.is_integer()));
    }
}
