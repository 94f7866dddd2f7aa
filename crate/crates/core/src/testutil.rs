//! Helpers shared by unit tests.

use rand::Rng;

use crate::matrix::RatMatrix;
pub use crate::random::{random_antisym, random_matrix, random_vec};

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    crate::random::random_invertible(rng, n, bound).expect("invertible matrix")
}

/// Sign of a permutation given as a list of images.
pub fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
