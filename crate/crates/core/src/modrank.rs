//! Exact rank and kernels through modular elimination. Ranks found modulo a
//! prime are lower bounds over Q; kernels are lifted by Chinese remaindering
//! and rational reconstruction, then checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::{dot, RatMatrix};
use crate::rational::Rational;

pub const PRIMES: [u64; 3] = [2305843009213693951, 4294967291, 1000000007];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m < BigInt::zero() { m + BigInt::from(p) } else { m };
    m.to_u64().unwrap()
}

/// r modulo p, or None when p divides the denominator.
pub fn reduce(r: &Rational, p: u64) -> Option<u64> {
    let d = reduce_int(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulmod(reduce_int(r.numer(), p), invmod(d, p), p))
}

/// Indices of a maximal set of rows independent modulo `p`, processed in order.
pub fn independent_rows_mod(m: &RatMatrix, p: u64) -> Option<Vec<usize>> {
    let n = m.cols();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(reduce(&m[(i, j)], p)?);
        }
        for (pc, b) in &basis {
            let f = row[*pc];
            if f != 0 {
                for j in 0..n {
                    if b[j] != 0 {
                        row[j] = (row[j] + p - mulmod(f, b[j], p)) % p;
                    }
                }
            }
        }
        if let Some(pc) = row.iter().position(|&x| x != 0) {
            let inv = invmod(row[pc], p);
            for x in row.iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            for (_, b) in basis.iter_mut() {
                let f = b[pc];
                if f != 0 {
                    for j in 0..n {
                        if row[j] != 0 {
                            b[j] = (b[j] + p - mulmod(f, row[j], p)) % p;
                        }
                    }
                }
            }
            basis.push((pc, row));
            chosen.push(i);
            if chosen.len() == n {
                break;
            }
        }
    }
    Some(chosen)
}

pub fn rank_mod(m: &RatMatrix, p: u64) -> Option<usize> {
    independent_rows_mod(m, p).map(|r| r.len())
}

/// Exact rank over Q. Independence found modulo a prime is a certified lower
/// bound; the upper bound is certified by checking every remaining row
/// against the rational kernel of the independent rows.
pub fn exact_rank(m: &RatMatrix) -> usize {
    for &p in &PRIMES {
        let Some(rows) = independent_rows_mod(m, p) else { continue };
        let r = rows.len();
        if r == m.cols() || r == m.rows() {
            return r;
        }
        let sub = RatMatrix::from_rows(rows.iter().map(|&i| m.row(i)).collect());
        let kernel = sub.nullspace();
        let mut chosen = vec![false; m.rows()];
        for &i in &rows {
            chosen[i] = true;
        }
        let ok = (0..m.rows()).filter(|&i| !chosen[i]).all(|i| {
            let row = m.row(i);
            kernel.iter().all(|k| dot(&row, k).is_zero())
        });
        if ok {
            return r;
        }
    }
    m.rref().1
}

/// Primes below 2³¹ in decreasing order.
pub fn small_primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1u64 << 31).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reduced row echelon form modulo a prime below 2³¹: rank, pivot columns and
/// the pivot rows.
pub fn rref_mod(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = invmod(rows[r][c], p);
        for x in rows[r][c..].iter_mut() {
            *x = *x * inv % p;
        }
        let prow: Vec<(usize, u64)> = (c..cols).filter(|&j| rows[r][j] != 0).map(|j| (j, rows[r][j])).collect();
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let f = rows[i][c];
            if f == 0 {
                continue;
            }
            let row = &mut rows[i];
            for &(j, v) in &prow {
                row[j] = (row[j] + (p - f) * v) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (pivots, rows)
}

/// Canonical kernel basis from a reduced echelon form: one vector per free
/// column, with a 1 there.
fn kernel_mod(pivots: &[usize], rows: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// n/d ≡ a mod m with |n|, d ≤ √(m/2).
fn reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

const MAX_PRIMES: usize = 400;

/// Exact kernel of a rational linear system given through its reductions.
///
/// `reduce(p)` returns the system modulo p, or None when p divides a
/// denominator; `verify` decides exactly whether a rational vector lies in
/// the kernel. The returned basis is the canonical one of the rational
/// echelon form. Verified vectors give a lower bound for the kernel
/// dimension and the modular rank an upper bound, so the result is exact.
pub fn multimodular_kernel(
    cols: usize,
    reduce: impl Fn(u64) -> Option<Vec<Vec<u64>>>,
    verify: impl Fn(&[Rational]) -> bool,
) -> Option<Vec<Vec<Rational>>> {
    let mut best: Option<(Vec<usize>, BigInt, Vec<Vec<BigInt>>)> = None;
    let (mut used, mut next_try) = (0usize, 1usize);
    for p in small_primes().take(MAX_PRIMES) {
        let Some(rows) = reduce(p) else { continue };
        let (pivots, echelon) = rref_mod(rows, cols, p);
        let kernel = kernel_mod(&pivots, &echelon, cols, p);
        if kernel.is_empty() {
            return Some(Vec::new());
        }
        let pb = BigInt::from(p);
        let replace = match &best {
            None => true,
            // more pivots, or earlier pivots, means the previous primes were unlucky
            Some((bp, _, _)) => pivots.len() > bp.len() || (pivots.len() == bp.len() && pivots < *bp),
        };
        if replace {
            let res = kernel.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            best = Some((pivots, pb, res));
            (used, next_try) = (0, 1);
        } else if best.as_ref().is_some_and(|(bp, _, _)| *bp == pivots) {
            let (_, m, res) = best.as_mut().unwrap();
            let minv = BigInt::from(invmod((&*m % &pb).to_u64().unwrap(), p));
            for (rv, kv) in res.iter_mut().zip(&kernel) {
                for (a, &b) in rv.iter_mut().zip(kv) {
                    let diff = (BigInt::from(b) - &*a).mod_floor(&pb);
                    *a += &*m * ((diff * &minv) % &pb);
                }
            }
            *m *= &pb;
        } else {
            continue;
        }
        used += 1;
        if used < next_try {
            continue;
        }
        next_try = used + used.div_ceil(2);
        let (_, m, res) = best.as_ref().unwrap();
        let lifted: Option<Vec<Vec<Rational>>> = res.iter().map(|v| v.iter().map(|a| reconstruct(a, m)).collect()).collect();
        if let Some(basis) = lifted {
            if basis.iter().all(|v| verify(v)) {
                return Some(basis);
            }
        }
    }
    None
}

pub fn reduce_row(row: &[Rational], p: u64) -> Option<Vec<u64>> {
    row.iter().map(|x| reduce(x, p)).collect()
}

/// Canonical kernel basis of a rational matrix.
pub fn kernel(m: &RatMatrix) -> Option<Vec<Vec<Rational>>> {
    let rows: Vec<Vec<Rational>> = m.to_rows();
    multimodular_kernel(m.cols(), |p| rows.iter().map(|r| reduce_row(r, p)).collect(), |v| m.mul_vec(v).iter().all(Zero::is_zero))
}
