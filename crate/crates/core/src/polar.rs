//! Conics, polarity, polar triangles and the apolarity condition.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grassmann::ProjPoint;
use crate::matrix::{dot, vec_rank, RatMatrix};
use crate::poly::HomogPoly;
use crate::random::{random_rat, random_vec, RETRY_CAP};
use crate::rational::{frac, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conic {
    m: RatMatrix,
}

impl Conic {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(Error::Dimension("conic matrix must be 3x3".into()));
        }
        if !m.is_symmetric() {
            return Err(Error::Invalid("conic matrix must be symmetric".into()));
        }
        Ok(Conic { m })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RatMatrix::from_i64(rows))
    }

    pub fn identity() -> Self {
        Conic { m: RatMatrix::identity(3) }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn is_smooth(&self) -> bool {
        !self.m.det().is_zero()
    }

    /// ᵗx M x
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.m.bilinear(x, x)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p.coords()).is_zero()
    }

    /// The quadric matrix of a ternary quadratic form.
    pub fn from_quadric(q: &HomogPoly) -> Result<Self> {
        if q.nvars() != 3 || (q.degree() != 2 && !q.is_zero()) {
            return Err(Error::Invalid("expected a ternary quadratic form".into()));
        }
        let half = frac(1, 2);
        let m = RatMatrix::from_fn(3, 3, |i, j| {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            if i == j {
                q.coeff(e)
            } else {
                q.coeff(e) * &half
            }
        });
        Ok(Conic { m })
    }

    pub fn to_quadric(&self) -> HomogPoly {
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                let mut e = [0u32; 3];
                e[i] += 1;
                e[j] += 1;
                let c = if i == j { self.m[(i, j)].clone() } else { &self.m[(i, j)] * rat(2) };
                terms.push((e, c));
            }
        }
        HomogPoly::from_terms(3, terms).expect("homogeneous")
    }

    fn inverse(&self) -> Result<RatMatrix> {
        self.m.inverse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub r: ProjPoint,
    pub degenerate: bool,
}

impl Triangle {
    pub fn new(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> Result<Self> {
        if [&p, &q, &r].iter().any(|x| x.dim() != 3) {
            return Err(Error::Dimension("triangle vertices must lie in P_2".into()));
        }
        let equal = [p == q, q == r, r == p].iter().filter(|&&b| b).count();
        if equal == 3 {
            return Err(Error::Invalid("at least two vertices must differ".into()));
        }
        Ok(Triangle { degenerate: equal == 1, p, q, r })
    }

    /// For a degenerate triangle: (doubled vertex, single vertex).
    pub fn doubled(&self) -> Option<(&ProjPoint, &ProjPoint)> {
        if !self.degenerate {
            None
        } else if self.p == self.q {
            Some((&self.p, &self.r))
        } else if self.q == self.r {
            Some((&self.q, &self.p))
        } else {
            Some((&self.r, &self.q))
        }
    }

    pub fn vertices(&self) -> [&ProjPoint; 3] {
        [&self.p, &self.q, &self.r]
    }
}

fn require_smooth(c: &Conic) -> Result<()> {
    if c.is_smooth() {
        Ok(())
    } else {
        Err(Error::Singular)
    }
}

/// The row vector ᵗp·M.
pub fn polar_line(c: &Conic, p: &ProjPoint) -> Result<Vec<Rational>> {
    require_smooth(c)?;
    Ok(c.m.vec_mul(p.coords()))
}

/// The pole of a line given as a row vector.
pub fn pole(c: &Conic, line: &[Rational]) -> Result<ProjPoint> {
    let inv = c.inverse().map_err(|_| Error::Singular)?;
    ProjPoint::new(inv.mul_vec(line))
}

pub fn is_polar_triangle(c: &Conic, t: &Triangle) -> Result<bool> {
    require_smooth(c)?;
    let b = |x: &ProjPoint, y: &ProjPoint| c.m.bilinear(x.coords(), y.coords()).is_zero();
    Ok(b(&t.p, &t.q) && b(&t.q, &t.r) && b(&t.r, &t.p))
}

/// Σ aⁱʲ b_ij = 0 with (aⁱʲ) the inverse of c's matrix.
pub fn apolar(c: &Conic, b: &Conic) -> Result<bool> {
    Ok(trace_pairing(&c.inverse().map_err(|_| Error::Singular)?, &b.m).is_zero())
}

pub fn trace_pairing(a: &RatMatrix, b: &RatMatrix) -> Rational {
    a.entries().iter().zip(b.entries()).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

/// Symmetric matrix from coordinates (b00, b01, b02, b11, b12, b22).
fn sym_from_coords(v: &[Rational]) -> RatMatrix {
    let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    RatMatrix::from_fn(3, 3, |i, j| v[idx[i][j]].clone())
}

/// Linear functional on symmetric coordinates B ↦ Σ m_ij b_ij.
fn pairing_row(m: &RatMatrix) -> Vec<Rational> {
    vec![m[(0, 0)].clone(), &m[(0, 1)] + &m[(1, 0)], &m[(0, 2)] + &m[(2, 0)], m[(1, 1)].clone(), &m[(1, 2)] + &m[(2, 1)], m[(2, 2)].clone()]
}

/// Row expressing ᵗx B x in symmetric coordinates.
fn point_row(x: &[Rational]) -> Vec<Rational> {
    let outer = RatMatrix::from_fn(3, 3, |i, j| &x[i] * &x[j]);
    pairing_row(&outer)
}

/// Basis of the apolar conics of c (linear dimension 5).
pub fn apolar_family_basis(c: &Conic) -> Result<Vec<Conic>> {
    let inv = c.inverse().map_err(|_| Error::Singular)?;
    let row = RatMatrix::from_rows(vec![pairing_row(&inv)]);
    Ok(row.nullspace().iter().map(|v| Conic { m: sym_from_coords(v) }).collect())
}

/// Apolar conics through the given points.
pub fn apolar_through(c: &Conic, pts: &[&ProjPoint]) -> Result<Vec<Conic>> {
    let inv = c.inverse().map_err(|_| Error::Singular)?;
    let mut rows = vec![pairing_row(&inv)];
    rows.extend(pts.iter().map(|p| point_row(p.coords())));
    Ok(RatMatrix::from_rows(rows).nullspace().iter().map(|v| Conic { m: sym_from_coords(v) }).collect())
}

/// b contains p twice with respect to the polar of q: b(p) = 0 and the
/// tangent of b at p is undefined or equals the polar of q.
pub fn contains_twice(c: &Conic, b: &Conic, p: &ProjPoint, q: &ProjPoint) -> bool {
    if !b.contains(p) {
        return false;
    }
    let grad = b.m.vec_mul(p.coords());
    if grad.iter().all(Zero::is_zero) {
        return true;
    }
    let polar_q = c.m.vec_mul(q.coords());
    vec_rank(&[grad, polar_q]) == 1
}

/// Instance of the forward statement: two vertices on b force the third.
pub fn third_point_closure(c: &Conic, t: &Triangle, b: &Conic) -> Result<bool> {
    if !apolar(c, b)? {
        return Err(Error::Invalid("conic is not apolar".into()));
    }
    if !is_polar_triangle(c, t)? {
        return Err(Error::Invalid("not a polar triangle".into()));
    }
    match t.doubled() {
        None => {
            let on = t.vertices().iter().filter(|v| b.contains(v)).count();
            Ok(on != 2)
        }
        Some((p, q)) => {
            let twice = contains_twice(c, b, p, q);
            let single = b.contains(p) && b.contains(q);
            Ok(twice == single)
        }
    }
}

/// An apolar conic containing exactly two of the vertices, following the
/// case analysis of the converse statement.
pub fn non_polar_witness(c: &Conic, t: &Triangle) -> Result<Conic> {
    if is_polar_triangle(c, t)? {
        return Err(Error::IsPolarTriangle);
    }
    match t.doubled() {
        None => distinct_witness(c, t),
        Some((p, q)) => doubled_witness(c, p, q),
    }
}

fn distinct_witness(c: &Conic, t: &Triangle) -> Result<Conic> {
    let s = RatMatrix::from_cols(&[t.p.coords().to_vec(), t.q.coords().to_vec(), t.r.coords().to_vec()]);
    if s.det().is_zero() {
        return Err(Error::CollinearVertices);
    }
    // In the basis (p, q, r): A' = ᵗS A S, and its cofactors aⁱʲ.
    let a = s.transpose().mul(&c.m).mul(&s);
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let cc: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let m = &a[(r[0], cc[0])] * &a[(r[1], cc[1])] - &a[(r[0], cc[1])] * &a[(r[1], cc[0])];
        if (i + j).is_multiple_of(2) {
            m
        } else {
            -m
        }
    };
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let aij = cof(i, j);
        if aij.is_zero() {
            continue;
        }
        let mut b = RatMatrix::zeros(3, 3);
        b[(k, k)] = &aij * rat(2);
        b[(i, j)] = -cof(k, k);
        b[(j, i)] = -cof(k, k);
        let si = s.inverse()?;
        let back = si.transpose().mul(&b).mul(&si);
        return Conic::new(back);
    }
    Err(Error::IsPolarTriangle)
}

fn doubled_witness(c: &Conic, p: &ProjPoint, q: &ProjPoint) -> Result<Conic> {
    let family = apolar_through(c, &[p, q])?;
    let mut candidates: Vec<RatMatrix> = family.iter().map(|b| b.m.clone()).collect();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            candidates.push(family[i].m.add(&family[j].m));
            candidates.push(family[i].m.sub(&family[j].m));
        }
    }
    for m in candidates {
        let b = Conic { m };
        if !contains_twice(c, &b, p, q) {
            return Ok(b);
        }
    }
    Err(Error::IsPolarTriangle)
}

/// A random non-degenerate polar triangle of a smooth conic.
pub fn random_polar_triangle<R: Rng>(rng: &mut R, c: &Conic, bound: i64) -> Result<Triangle> {
    require_smooth(c)?;
    for _ in 0..RETRY_CAP {
        let p = random_vec(rng, 3, bound);
        if c.eval(&p).is_zero() {
            continue;
        }
        let polar = RatMatrix::from_rows(vec![c.m.vec_mul(&p)]).nullspace();
        let (a, b) = (random_rat(rng, bound), random_rat(rng, bound));
        let q: Vec<Rational> = (0..3).map(|i| &polar[0][i] * &a + &polar[1][i] * &b).collect();
        if q.iter().all(Zero::is_zero) || c.eval(&q).is_zero() {
            continue;
        }
        let r = cross(&c.m.vec_mul(&p), &c.m.vec_mul(&q));
        return Triangle::new(ProjPoint::new(p)?, ProjPoint::new(q)?, ProjPoint::new(r)?);
    }
    Err(Error::RetryCap(RETRY_CAP))
}

/// A random triangle that is not polar, with non-collinear distinct vertices.
pub fn random_non_polar_triangle<R: Rng>(rng: &mut R, c: &Conic, bound: i64) -> Result<Triangle> {
    for _ in 0..RETRY_CAP {
        let pts: Vec<Vec<Rational>> = (0..3).map(|_| random_vec(rng, 3, bound)).collect();
        if vec_rank(&pts) < 3 {
            continue;
        }
        let t = Triangle::new(ProjPoint::new(pts[0].clone())?, ProjPoint::new(pts[1].clone())?, ProjPoint::new(pts[2].clone())?)?;
        if !is_polar_triangle(c, &t)? {
            return Ok(t);
        }
    }
    Err(Error::RetryCap(RETRY_CAP))
}

pub fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

/// ᵗx y for a point and a line.
pub fn incident(line: &[Rational], x: &ProjPoint) -> bool {
    dot(line, x.coords()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ivec;
    use crate::random::{random_matrix, seeded};

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::new(ivec(v)).unwrap()
    }

    fn random_smooth<R: Rng>(rng: &mut R) -> Conic {
        loop {
            let m = random_matrix(rng, 3, 3, 6);
            let s = m.add(&m.transpose());
            if !s.det().is_zero() {
                return Conic::new(s).unwrap();
            }
        }
    }

    #[test]
    fn polar_examples() {
        let c = Conic::identity();
        assert_eq!(polar_line(&c, &pt(&[1, 0, 0])).unwrap(), ivec(&[1, 0, 0]));
        let p = pt(&[1, 2, 3]);
        assert_eq!(pole(&c, &polar_line(&c, &p).unwrap()).unwrap(), p);
        let iso = Conic::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]).unwrap();
        let on = pt(&[1, 1, 0]);
        assert!(incident(&polar_line(&iso, &on).unwrap(), &on));
        let sing = Conic::from_i64(&[vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(polar_line(&sing, &on), Err(Error::Singular));
    }

    #[test]
    fn polar_triangle_examples() {
        let c = Conic::identity();
        let t = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])).unwrap();
        assert!(is_polar_triangle(&c, &t).unwrap());
        let iso = Conic::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]).unwrap();
        for l in [1, 2, -3] {
            let d = Triangle::new(pt(&[1, 1, 0]), pt(&[1, 1, 0]), pt(&[l, l, 1])).unwrap();
            assert!(d.degenerate);
            assert!(is_polar_triangle(&iso, &d).unwrap());
        }
        let bad = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 1])).unwrap();
        assert!(!is_polar_triangle(&c, &bad).unwrap());
        assert!(Triangle::new(pt(&[1, 0, 0]), pt(&[1, 0, 0]), pt(&[2, 0, 0])).is_err());
    }

    #[test]
    fn apolar_examples() {
        let c = Conic::identity();
        let traceless = Conic::from_i64(&[vec![1, 4, 0], vec![4, 2, 1], vec![0, 1, -3]]).unwrap();
        assert!(apolar(&c, &traceless).unwrap());
        assert!(!apolar(&c, &Conic::identity()).unwrap());
        let scaled = Conic::new(traceless.matrix().scale(&rat(-7))).unwrap();
        let c2 = Conic::new(RatMatrix::identity(3).scale(&frac(2, 3))).unwrap();
        assert!(apolar(&c2, &scaled).unwrap());
    }

    #[test]
    fn apolar_family() {
        let mut rng = seeded(31);
        for _ in 0..5 {
            let c = random_smooth(&mut rng);
            let basis = apolar_family_basis(&c).unwrap();
            assert_eq!(basis.len(), 5);
            assert!(basis.iter().all(|b| apolar(&c, b).unwrap()));
            let vs: Vec<Vec<Rational>> = basis.iter().map(|b| b.matrix().entries().to_vec()).collect();
            assert_eq!(vec_rank(&vs), 5);
        }
        let basis = apolar_family_basis(&Conic::identity()).unwrap();
        let off_diag = basis.iter().filter(|b| (0..3).all(|i| b.matrix()[(i, i)].is_zero())).count();
        assert_eq!(off_diag, 3);
    }

    #[test]
    fn quadric_round_trip() {
        let c = Conic::from_i64(&[vec![1, 4, 0], vec![4, 2, 1], vec![0, 1, -3]]).unwrap();
        let q = c.to_quadric();
        assert_eq!(Conic::from_quadric(&q).unwrap(), c);
        let x = ivec(&[2, -1, 5]);
        assert_eq!(q.eval(&x), c.eval(&x));
    }

    #[test]
    fn forward_closure_examples() {
        let c = Conic::identity();
        let t = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])).unwrap();
        let b = Conic::from_i64(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).unwrap();
        assert!(b.contains(&t.p) && b.contains(&t.q) && b.contains(&t.r));
        assert!(third_point_closure(&c, &t, &b).unwrap());
        let mut rng = seeded(32);
        for _ in 0..30 {
            let c = random_smooth(&mut rng);
            let t = random_polar_triangle(&mut rng, &c, 9).unwrap();
            let fam = apolar_through(&c, &[&t.p, &t.q]).unwrap();
            let m = fam.iter().fold(RatMatrix::zeros(3, 3), |acc, b| acc.add(&b.matrix().scale(&random_rat(&mut rng, 9))));
            let b = Conic::new(m).unwrap();
            assert!(b.contains(&t.r));
            assert!(third_point_closure(&c, &t, &b).unwrap());
        }
    }

    #[test]
    fn degenerate_closure() {
        let iso = Conic::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]).unwrap();
        let p = pt(&[1, 1, 0]);
        let q = pt(&[2, 2, 1]);
        let t = Triangle::new(p.clone(), p.clone(), q.clone()).unwrap();
        for b in apolar_through(&iso, &[&p, &q]).unwrap() {
            assert!(contains_twice(&iso, &b, &p, &q));
            assert!(third_point_closure(&iso, &t, &b).unwrap());
        }
        for b in apolar_family_basis(&iso).unwrap() {
            if b.contains(&p) {
                assert!(third_point_closure(&iso, &t, &b).unwrap());
            }
        }
    }

    #[test]
    fn witnesses() {
        let c = Conic::identity();
        let t = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 0, 1])).unwrap();
        let w = non_polar_witness(&c, &t).unwrap();
        assert!(apolar(&c, &w).unwrap());
        assert_eq!(t.vertices().iter().filter(|v| w.contains(v)).count(), 2);
        let polar = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])).unwrap();
        assert_eq!(non_polar_witness(&c, &polar), Err(Error::IsPolarTriangle));
        let line = Triangle::new(pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])).unwrap();
        assert_eq!(non_polar_witness(&c, &line), Err(Error::CollinearVertices));

        let iso = Conic::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]).unwrap();
        // p on the conic, q off its tangent; and p off the conic.
        for (p, q) in [(pt(&[1, 1, 0]), pt(&[1, 2, 3])), (pt(&[1, 2, 0]), pt(&[0, 1, 1]))] {
            let d = Triangle::new(p.clone(), p.clone(), q.clone()).unwrap();
            let w = non_polar_witness(&iso, &d).unwrap();
            assert!(apolar(&iso, &w).unwrap());
            assert!(w.contains(&p) && w.contains(&q));
            assert!(!contains_twice(&iso, &w, &p, &q));
        }
    }
}
