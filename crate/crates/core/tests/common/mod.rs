//! Independent oracles for the integration tests.
#![allow(dead_code)]

use linsec::antisym::AntisymMatrix;
use linsec::grassmann::ProjPoint;
use linsec::matrix::RatMatrix;
use linsec::poly::HomogPoly;
use linsec::rational::rat;
use linsec::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Fraction-free Gaussian elimination.
pub fn det_bareiss(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

pub fn random_antisym_i64(rng: &mut impl rand::Rng, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-bound..=bound);
            m[i][j] = v;
            m[j][i] = -v;
        }
    }
    m
}

pub fn bilinear(m: &RatMatrix, p: &[Rational], q: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for i in 0..p.len() {
        for j in 0..q.len() {
            s += &p[i] * &m[(i, j)] * &q[j];
        }
    }
    s
}

pub fn adjugate3(m: &RatMatrix) -> RatMatrix {
    RatMatrix::from_fn(3, 3, |i, j| {
        let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let minor = &m[(r[0], c[0])] * &m[(r[1], c[1])] - &m[(r[0], c[1])] * &m[(r[1], c[0])];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

/// Σ aⁱʲ b_ij with aⁱʲ the cofactors of a, proportional to the inverse.
pub fn apolar_oracle(a: &RatMatrix, b: &RatMatrix) -> bool {
    let adj = adjugate3(a);
    let mut s = Rational::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += &adj[(i, j)] * &b[(i, j)];
        }
    }
    s.is_zero()
}

pub fn on_conic(c: &RatMatrix, p: &ProjPoint) -> bool {
    bilinear(c, p.coords(), p.coords()).is_zero()
}

pub fn cross3(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

pub fn mat_vec(m: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows()).map(|i| (0..v.len()).fold(Rational::zero(), |acc, j| acc + &m[(i, j)] * &v[j])).collect()
}

/// b(p) = 0 and the gradient of b at p is zero or proportional to c·q.
pub fn twice_oracle(c: &RatMatrix, b: &RatMatrix, p: &ProjPoint, q: &ProjPoint) -> bool {
    if !on_conic(b, p) {
        return false;
    }
    let grad = mat_vec(b, p.coords());
    cross3(&grad, &mat_vec(c, q.coords())).iter().all(Zero::is_zero)
}

/// The matrix pair of the even pencil normal form, written out blockwise.
pub fn even_pair_oracle(n: usize) -> (AntisymMatrix, AntisymMatrix) {
    let size = 2 * n + 1;
    let mut a = vec![vec![0i64; size]; size];
    let mut b = vec![vec![0i64; size]; size];
    for i in 0..n {
        a[i][n + i] = -1;
        a[n + i][i] = 1;
        b[i][n + 1 + i] = -1;
        b[n + 1 + i][i] = 1;
    }
    (AntisymMatrix::from_i64(&a).unwrap(), AntisymMatrix::from_i64(&b).unwrap())
}

/// Σ_k x_k M_k applied to the vector of forms, expanded symbolically.
pub fn kernel_identity_oracle(mats: &[&AntisymMatrix], comps: &[HomogPoly]) -> bool {
    let nv = mats.len();
    let size = mats[0].size();
    (0..size).all(|i| {
        let mut acc = HomogPoly::zero(nv);
        for (k, m) in mats.iter().enumerate() {
            let x = HomogPoly::var(nv, k);
            for (j, c) in comps.iter().enumerate() {
                let e = m.get(i, j);
                if !e.is_zero() {
                    acc = acc.add(&x.mul(c).scale(e));
                }
            }
        }
        acc.is_zero()
    })
}

/// Rank of a list of rational vectors by elimination on clones.
pub fn rank_oracle(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &piv;
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// ᵗT⁻¹AT⁻¹ lies in span{A₁,…,A_l} for every member.
pub fn preserves_oracle(t: &RatMatrix, mats: &[AntisymMatrix]) -> bool {
    let Ok(ti) = t.inverse() else { return false };
    let span: Vec<Vec<Rational>> = mats.iter().map(AntisymMatrix::upper_vec).collect();
    mats.iter().all(|a| {
        let img = ti.transpose().mul(a.matrix()).mul(&ti);
        let size = a.size();
        let v: Vec<Rational> = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).map(|(i, j)| img[(i, j)].clone()).collect();
        let mut rows = span.clone();
        rows.push(v);
        rank_oracle(&rows) == mats.len()
    })
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}
