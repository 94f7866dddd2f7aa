//! Antisymmetric matrices, Pfaffians and kernel tests.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::LineRep;
use crate::matrix::RatMatrix;
use crate::poly::HomogPoly;
use crate::rational::{format_rat, parse_rat, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AntisymMatrix {
    m: RatMatrix,
}

impl std::fmt::Debug for AntisymMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Antisym{:?}", self.m)
    }
}

impl AntisymMatrix {
    pub fn zeros(size: usize) -> Self {
        AntisymMatrix { m: RatMatrix::zeros(size, size) }
    }

    pub fn from_matrix(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("antisymmetric matrix must be square".into()));
        }
        for i in 0..m.rows() {
            for j in 0..=i {
                if m[(i, j)] != -m[(j, i)].clone() {
                    return Err(Error::Invalid(format!("entry ({i},{j}) breaks antisymmetry")));
                }
            }
        }
        Ok(AntisymMatrix { m })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_matrix(RatMatrix::from_i64(rows))
    }

    /// From the entries strictly above the diagonal, row by row.
    pub fn from_upper(size: usize, upper: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut a = Self::zeros(size);
        for (i, j, v) in upper {
            if *i >= *j || *j >= size {
                return Err(Error::Invalid(format!("bad upper index ({i},{j}) for size {size}")));
            }
            a.set(*i, *j, v.clone());
        }
        Ok(a)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i != j || v.is_zero(), "diagonal must vanish");
        self.m[(j, i)] = -v.clone();
        self.m[(i, j)] = v;
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.m[(i, j)]
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    /// Upper-triangle coordinates, lexicographic in (i, j).
    pub fn upper_vec(&self) -> Vec<Rational> {
        let n = self.size();
        let mut v = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                v.push(self.m[(i, j)].clone());
            }
        }
        v
    }

    pub fn from_upper_vec(size: usize, v: &[Rational]) -> Self {
        let mut a = Self::zeros(size);
        let mut k = 0;
        for i in 0..size {
            for j in i + 1..size {
                a.set(i, j, v[k].clone());
                k += 1;
            }
        }
        a
    }

    pub fn add(&self, o: &Self) -> Self {
        AntisymMatrix { m: self.m.add(&o.m) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AntisymMatrix { m: self.m.sub(&o.m) }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        AntisymMatrix { m: self.m.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// ᵗT · A · T
    pub fn congruence(&self, t: &RatMatrix) -> Self {
        AntisymMatrix { m: t.transpose().mul(&self.m).mul(t) }
    }

    /// The induced action A ↦ ᵗT⁻¹ A T⁻¹.
    pub fn act(&self, t: &RatMatrix) -> Result<Self> {
        Ok(self.congruence(&t.inverse()?))
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        self.m.nullspace()
    }

    pub fn to_json(&self) -> AntisymJson {
        let n = self.size();
        let mut upper = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.m[(i, j)].is_zero() {
                    upper.push((i, j, format_rat(&self.m[(i, j)])));
                }
            }
        }
        AntisymJson { size: n, upper }
    }

    pub fn from_json(j: &AntisymJson) -> Result<Self> {
        let upper = j.upper.iter().map(|(i, k, v)| Ok((*i, *k, parse_rat(v)?))).collect::<Result<Vec<_>>>()?;
        Self::from_upper(j.size, &upper)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AntisymJson {
    pub size: usize,
    pub upper: Vec<(usize, usize, String)>,
}

impl Serialize for AntisymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AntisymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AntisymJson::deserialize(d)?;
        AntisymMatrix::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymPencil {
    pub a: AntisymMatrix,
    pub b: AntisymMatrix,
}

impl AntisymPencil {
    pub fn new(a: AntisymMatrix, b: AntisymMatrix) -> Result<Self> {
        if a.size() != b.size() {
            return Err(Error::Dimension("pencil members differ in size".into()));
        }
        Ok(AntisymPencil { a, b })
    }

    pub fn size(&self) -> usize {
        self.a.size()
    }

    /// λA − μB
    pub fn at(&self, lambda: &Rational, mu: &Rational) -> AntisymMatrix {
        self.a.scale(lambda).sub(&self.b.scale(mu))
    }

    /// Matrix of forms λA − μB.
    pub fn poly_matrix(&self) -> Vec<Vec<HomogPoly>> {
        let l = HomogPoly::var(2, 0);
        let m = HomogPoly::var(2, 1);
        linear_poly_matrix(&[l, m.neg()], &[&self.a, &self.b])
    }

    pub fn congruence(&self, t: &RatMatrix) -> Self {
        AntisymPencil { a: self.a.congruence(t), b: self.b.congruence(t) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymNet {
    pub a: AntisymMatrix,
    pub b: AntisymMatrix,
    pub c: AntisymMatrix,
}

impl AntisymNet {
    pub fn new(a: AntisymMatrix, b: AntisymMatrix, c: AntisymMatrix) -> Result<Self> {
        if a.size() != b.size() || a.size() != c.size() {
            return Err(Error::Dimension("net members differ in size".into()));
        }
        let rank = crate::matrix::vec_rank(&[a.upper_vec(), b.upper_vec(), c.upper_vec()]);
        if rank < 3 {
            return Err(Error::Dependent);
        }
        Ok(AntisymNet { a, b, c })
    }

    pub fn size(&self) -> usize {
        self.a.size()
    }

    /// λA + μB + νC
    pub fn at(&self, x: &[Rational; 3]) -> AntisymMatrix {
        self.a.scale(&x[0]).add(&self.b.scale(&x[1])).add(&self.c.scale(&x[2]))
    }

    pub fn poly_matrix(&self) -> Vec<Vec<HomogPoly>> {
        let v: Vec<HomogPoly> = (0..3).map(|i| HomogPoly::var(3, i)).collect();
        linear_poly_matrix(&v, &[&self.a, &self.b, &self.c])
    }

    pub fn congruence(&self, t: &RatMatrix) -> Self {
        AntisymNet { a: self.a.congruence(t), b: self.b.congruence(t), c: self.c.congruence(t) }
    }

    pub fn members(&self) -> [&AntisymMatrix; 3] {
        [&self.a, &self.b, &self.c]
    }
}

/// Σ forms[k] · mats[k] as a matrix of forms.
pub fn linear_poly_matrix(forms: &[HomogPoly], mats: &[&AntisymMatrix]) -> Vec<Vec<HomogPoly>> {
    let n = mats[0].size();
    let nv = forms[0].nvars();
    (0..n)
        .map(|i| (0..n).map(|j| forms.iter().zip(mats).fold(HomogPoly::zero(nv), |acc, (f, m)| acc.add(&f.scale(m.get(i, j))))).collect())
        .collect()
}

/// Scalars the Pfaffian expansion can run over.
pub trait PfRing: Clone {
    fn ring_zero(like: &Self) -> Self;
    fn ring_one(like: &Self) -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_sub(&self, o: &Self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
}

impl PfRing for Rational {
    fn ring_zero(_: &Self) -> Self {
        Rational::zero()
    }
    fn ring_one(_: &Self) -> Self {
        num_traits::One::one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl PfRing for HomogPoly {
    fn ring_zero(like: &Self) -> Self {
        HomogPoly::zero(like.nvars())
    }
    fn ring_one(like: &Self) -> Self {
        HomogPoly::constant(like.nvars(), num_traits::One::one())
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
}

/// Pfaffian of the principal submatrix on the index set `idx` (ascending),
/// expanded along its first row with memoization on index subsets.
pub fn pfaffian_generic<R: PfRing>(entry: &dyn Fn(usize, usize) -> R, idx: &[usize], like: &R) -> R {
    if idx.len() % 2 == 1 {
        return R::ring_zero(like);
    }
    let mut memo: HashMap<u64, R> = HashMap::new();
    let mask: u64 = idx.iter().fold(0, |m, &i| m | (1u64 << i));
    pf_rec(entry, mask, &mut memo, like)
}

fn pf_rec<R: PfRing>(entry: &dyn Fn(usize, usize) -> R, mask: u64, memo: &mut HashMap<u64, R>, like: &R) -> R {
    if mask == 0 {
        return R::ring_one(like);
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << first);
    let mut acc = R::ring_zero(like);
    let mut bits = rest;
    let mut pos = 0;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let a = entry(first, j);
        if !a.ring_is_zero() {
            let sub = pf_rec(entry, rest & !(1u64 << j), memo, like);
            if !sub.ring_is_zero() {
                let term = a.ring_mul(&sub);
                acc = if pos % 2 == 0 { acc.ring_add(&term) } else { acc.ring_sub(&term) };
            }
        }
        pos += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

pub fn pfaffian(a: &AntisymMatrix) -> Rational {
    let idx: Vec<usize> = (0..a.size()).collect();
    pfaffian_generic(&|i, j| a.get(i, j).clone(), &idx, &Rational::zero())
}

/// (−1)^i · Pf(a with row and column i deleted).
pub fn pfaffian_minor(a: &AntisymMatrix, i: usize) -> Result<Rational> {
    if i >= a.size() {
        return Err(Error::IndexOutOfRange { index: i, size: a.size() });
    }
    let idx: Vec<usize> = (0..a.size()).filter(|&k| k != i).collect();
    let pf = pfaffian_generic(&|r, c| a.get(r, c).clone(), &idx, &Rational::zero());
    Ok(if i.is_multiple_of(2) { pf } else { -pf })
}

pub fn pfaffian_poly(m: &[Vec<HomogPoly>]) -> HomogPoly {
    let idx: Vec<usize> = (0..m.len()).collect();
    let like = m[0][0].clone();
    pfaffian_generic(&|i, j| m[i][j].clone(), &idx, &like)
}

/// (−1)^i · Pf of the form matrix with row and column i deleted.
pub fn pfaffian_minor_poly(m: &[Vec<HomogPoly>], i: usize) -> HomogPoly {
    let idx: Vec<usize> = (0..m.len()).filter(|&k| k != i).collect();
    let like = m[0][0].clone();
    let pf = pfaffian_generic(&|r, c| m[r][c].clone(), &idx, &like);
    if i.is_multiple_of(2) {
        pf
    } else {
        pf.neg()
    }
}

pub fn corank(a: &AntisymMatrix) -> usize {
    a.size() - a.rank()
}

/// Membership in the dual Grassmannian: corank at least 2.
pub fn dual_grassmannian_member(a: &AntisymMatrix) -> Result<bool> {
    if a.size() < 4 {
        return Err(Error::TooSmall(a.size()));
    }
    Ok(corank(a) >= 2)
}

/// The tangent space of G(1,N) at the line lies in the hyperplane of `a`
/// iff the line lies in ker a.
pub fn tangency(a: &AntisymMatrix, line: &LineRep) -> Result<bool> {
    if line.ambient() != a.size() {
        return Err(Error::Dimension(format!("line in P_{} vs matrix of size {}", line.ambient() - 1, a.size())));
    }
    line.check()?;
    let zero = |v: &[Rational]| a.matrix().mul_vec(v).iter().all(Zero::is_zero);
    Ok(zero(line.p.coords()) && zero(line.q.coords()))
}

/// Coordinates of `target` in the span of `basis`, if it lies there.
pub fn span_coords(target: &AntisymMatrix, basis: &[AntisymMatrix]) -> Option<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.upper_vec()).collect();
    RatMatrix::from_cols(&cols).solve(&target.upper_vec())
}

/// J = [[0,−1],[1,0]]
pub fn j_block() -> RatMatrix {
    RatMatrix::from_i64(&[vec![0, -1], vec![1, 0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::ProjPoint;
    use crate::matrix::{ivec, RatMatrix};
    use crate::rational::rat;
    use crate::testutil::{perm_sign, random_antisym, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Sum over perfect matchings.
    fn pf_definition(a: &AntisymMatrix) -> Rational {
        let n = a.size();
        if n % 2 == 1 {
            return rat(0);
        }
        fn rec(a: &AntisymMatrix, left: Vec<usize>, pairs: &mut Vec<(usize, usize)>, acc: &mut Rational) {
            if left.is_empty() {
                let perm: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
                let mut t = Rational::from_integer(perm_sign(&perm).into());
                for &(i, j) in pairs.iter() {
                    t *= a.get(i, j);
                }
                *acc += t;
                return;
            }
            let i = left[0];
            for k in 1..left.len() {
                let j = left[k];
                let rest: Vec<usize> = left.iter().copied().filter(|&x| x != i && x != j).collect();
                pairs.push((i, j));
                rec(a, rest, pairs, acc);
                pairs.pop();
            }
        }
        let mut acc = rat(0);
        rec(a, (0..n).collect(), &mut Vec::new(), &mut acc);
        acc
    }

    #[test]
    fn two_by_two() {
        let a = AntisymMatrix::from_i64(&[vec![0, 5], vec![-5, 0]]).unwrap();
        assert_eq!(pfaffian(&a), rat(5));
    }

    #[test]
    fn block_j() {
        let a = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j_block(), j_block()])).unwrap();
        assert_eq!(pf_definition(&a), rat(1));
        assert_eq!(pfaffian(&a), rat(1));
    }

    #[test]
    fn expansion_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for size in [2, 4, 6] {
            for _ in 0..20 {
                let a = random_antisym(&mut rng, size, 20);
                assert_eq!(pfaffian(&a), pf_definition(&a));
            }
        }
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for size in 1..=10 {
            for _ in 0..10 {
                let a = random_antisym(&mut rng, size, 20);
                let pf = pfaffian(&a);
                assert_eq!(&pf * &pf, a.matrix().det(), "size {size}");
            }
        }
    }

    #[test]
    fn congruence_multiplies_by_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for size in [2, 4, 6, 8] {
            let a = random_antisym(&mut rng, size, 20);
            let t = random_matrix(&mut rng, size, size, 5);
            assert_eq!(pfaffian(&a.congruence(&t)), t.det() * pfaffian(&a));
        }
    }

    #[test]
    fn minor_examples() {
        let mut a = AntisymMatrix::zeros(3);
        a.set(1, 2, rat(1));
        assert_eq!(pfaffian_minor(&a, 0).unwrap(), rat(1));
        assert_eq!(pfaffian_minor(&a, 1).unwrap(), rat(0));
        assert!(pfaffian_minor(&a, 3).is_err());
    }

    #[test]
    fn minor_vector_spans_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for size in [3, 5, 7, 9] {
            let a = random_antisym(&mut rng, size, 20);
            assert_eq!(corank(&a), 1);
            let c: Vec<Rational> = (0..size).map(|i| pfaffian_minor(&a, i).unwrap()).collect();
            assert!(a.matrix().mul_vec(&c).iter().all(Zero::is_zero));
            assert!(c.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn corank_examples() {
        assert_eq!(corank(&AntisymMatrix::zeros(5)), 5);
        let sympl = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j_block(), j_block(), j_block()])).unwrap();
        assert_eq!(corank(&sympl), 0);
        let padded = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j_block(), j_block(), RatMatrix::zeros(1, 1)])).unwrap();
        assert_eq!(corank(&padded), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for size in 2..9 {
            let a = random_antisym(&mut rng, size, 3);
            assert_eq!(corank(&a) % 2, size % 2);
        }
    }

    #[test]
    fn dual_membership() {
        let sympl = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j_block(), j_block()])).unwrap();
        assert!(!dual_grassmannian_member(&sympl).unwrap());
        assert!(dual_grassmannian_member(&AntisymMatrix::zeros(5)).unwrap());
        assert_eq!(dual_grassmannian_member(&AntisymMatrix::zeros(3)), Err(Error::TooSmall(3)));
    }

    #[test]
    fn tangency_examples() {
        let a = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[RatMatrix::zeros(2, 2), j_block()])).unwrap();
        let kernel_line = LineRep::new(ProjPoint::new(ivec(&[1, 0, 0, 0])).unwrap(), ProjPoint::new(ivec(&[0, 1, 0, 0])).unwrap()).unwrap();
        assert!(tangency(&a, &kernel_line).unwrap());
        let full = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j_block(), j_block()])).unwrap();
        assert!(!tangency(&full, &kernel_line).unwrap());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = random_antisym(&mut rng, 5, 20).scale(&crate::rational::frac(1, 3));
        let s = serde_json::to_string(&a).unwrap();
        let b: AntisymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&b).unwrap(), s);
    }

    #[test]
    fn poly_pfaffian_specializes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = AntisymPencil::new(random_antisym(&mut rng, 6, 5), random_antisym(&mut rng, 6, 5)).unwrap();
        let f = pfaffian_poly(&p.poly_matrix());
        for (l, m) in [(2, 3), (-1, 4), (0, 1), (5, 0)] {
            assert_eq!(f.eval(&[rat(l), rat(m)]), pfaffian(&p.at(&rat(l), &rat(m))));
        }
    }
}
