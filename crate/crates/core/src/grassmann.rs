//! Points, lines, Plücker coordinates and linear sections of G(1,N).

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::antisym::{pfaffian_minor_poly, pfaffian_poly, AntisymMatrix, AntisymPencil};
use crate::error::{Error, Result};
use crate::matrix::{dot, normalize_vec, vec_rank, RatMatrix};
use crate::poly::{binary_gcd, HomogPoly};
use crate::rational::{format_rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("zero vector is not a projective point".into()));
        }
        Ok(ProjPoint { coords: normalize_vec(&coords) })
    }

    pub fn unit(n: usize, i: usize) -> Self {
        ProjPoint { coords: crate::matrix::unit_vec(n, i) }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rat).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRep {
    pub p: ProjPoint,
    pub q: ProjPoint,
}

impl LineRep {
    pub fn new(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        let l = LineRep { p, q };
        l.check()?;
        Ok(l)
    }

    pub fn from_vecs(p: Vec<Rational>, q: Vec<Rational>) -> Result<Self> {
        Self::new(ProjPoint::new(p)?, ProjPoint::new(q)?)
    }

    pub fn check(&self) -> Result<()> {
        if self.p.dim() != self.q.dim() {
            return Err(Error::Dimension("spanning points of different length".into()));
        }
        if vec_rank(&[self.p.coords.clone(), self.q.coords.clone()]) < 2 {
            return Err(Error::DegenerateLine);
        }
        Ok(())
    }

    /// N + 1
    pub fn ambient(&self) -> usize {
        self.p.dim()
    }

    /// Point a·p + b·q.
    pub fn point(&self, a: &Rational, b: &Rational) -> Vec<Rational> {
        self.p.coords.iter().zip(&self.q.coords).map(|(x, y)| a * x + b * y).collect()
    }
}

/// Plücker coordinates p_i q_j − p_j q_i for i < j, lexicographic, scaled so
/// the first nonzero entry is 1.
pub fn pluecker(line: &LineRep) -> Result<Vec<Rational>> {
    line.check()?;
    let n = line.ambient();
    let (p, q) = (line.p.coords(), line.q.coords());
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            v.push(&p[i] * &q[j] - &p[j] * &q[i]);
        }
    }
    Ok(normalize_vec(&v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpec {
    n: usize,
    matrices: Vec<AntisymMatrix>,
}

impl SectionSpec {
    pub fn new(n: usize, matrices: Vec<AntisymMatrix>) -> Result<Self> {
        if n < 4 {
            return Err(Error::Invalid(format!("N = {n} but sections need N >= 4")));
        }
        if matrices.is_empty() {
            return Err(Error::Invalid("a section needs at least one matrix".into()));
        }
        if let Some(m) = matrices.iter().find(|m| m.size() != n + 1) {
            return Err(Error::Dimension(format!("matrix of size {} in P_{n}", m.size())));
        }
        let rows: Vec<Vec<Rational>> = matrices.iter().map(|m| m.upper_vec()).collect();
        if vec_rank(&rows) < matrices.len() {
            return Err(Error::Dependent);
        }
        Ok(SectionSpec { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[AntisymMatrix] {
        &self.matrices
    }

    pub fn section_dim(&self) -> isize {
        2 * (self.n as isize - 1) - self.l() as isize
    }

    /// Image under T: every Aᵢ ↦ ᵗT⁻¹ Aᵢ T⁻¹.
    pub fn act(&self, t: &RatMatrix) -> Result<Self> {
        let ti = t.inverse()?;
        Ok(SectionSpec { n: self.n, matrices: self.matrices.iter().map(|a| a.congruence(&ti)).collect() })
    }

    pub fn to_json(&self) -> SectionJson {
        SectionJson { n: self.n, matrices: self.matrices.iter().map(|m| m.to_json()).collect() }
    }

    pub fn from_json(j: &SectionJson) -> Result<Self> {
        let ms = j.matrices.iter().map(AntisymMatrix::from_json).collect::<Result<Vec<_>>>()?;
        Self::new(j.n, ms)
    }

    pub fn pencil(&self) -> Result<AntisymPencil> {
        if self.l() != 2 {
            return Err(Error::Invalid(format!("expected a pencil, got l = {}", self.l())));
        }
        AntisymPencil::new(self.matrices[0].clone(), self.matrices[1].clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SectionJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub matrices: Vec<crate::antisym::AntisymJson>,
}

pub fn line_in_section(line: &LineRep, s: &SectionSpec) -> Result<bool> {
    if line.ambient() != s.n + 1 {
        return Err(Error::Dimension(format!("line in P_{} vs section in P_{}", line.ambient() - 1, s.n)));
    }
    Ok(s.matrices.iter().all(|a| a.matrix().bilinear(line.p.coords(), line.q.coords()).is_zero()))
}

/// Projective dimension of the family of section lines through p; −1 if none.
pub fn lines_through_point_dim(p: &ProjPoint, s: &SectionSpec) -> Result<isize> {
    if p.dim() != s.n + 1 {
        return Err(Error::Dimension("point and section ambient differ".into()));
    }
    let rows: Vec<Vec<Rational>> = s.matrices.iter().map(|a| a.matrix().vec_mul(p.coords())).collect();
    Ok(s.n as isize - 1 - vec_rank(&rows) as isize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExceptionalLocus {
    Lines(Vec<LineRep>),
    CenterCurve(Vec<HomogPoly>),
}

/// Exceptional lines (even size) or the center curve (odd size) of a pencil.
pub fn exceptional_locus_pencil(pencil: &AntisymPencil) -> Result<ExceptionalLocus> {
    if pencil.size().is_multiple_of(2) {
        let roots = pencil_roots(pencil)?;
        let lines = roots
            .iter()
            .map(|(l, m)| {
                let k = pencil.at(l, m).kernel();
                if k.len() != 2 {
                    return Err(Error::HighCorank { corank: k.len(), lambda: format_rat(l), mu: format_rat(m) });
                }
                LineRep::from_vecs(k[0].clone(), k[1].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExceptionalLocus::Lines(lines))
    } else {
        Ok(ExceptionalLocus::CenterCurve(center_curve(pencil)?))
    }
}

/// Distinct rational roots (λᵢ:μᵢ) of Pf(λA − μB), requiring n simple roots.
pub fn pencil_roots(pencil: &AntisymPencil) -> Result<Vec<(Rational, Rational)>> {
    let f = pfaffian_poly(&pencil.poly_matrix());
    if f.is_zero() {
        return Err(Error::Generality("Pfaffian of the pencil vanishes identically".into()));
    }
    let (roots, irr) = f.binary_roots();
    if !irr.is_empty() {
        return Err(Error::IrrationalRoot(irr));
    }
    if roots.iter().any(|(_, m)| *m > 1) {
        return Err(Error::RepeatedRoot);
    }
    Ok(roots.into_iter().map(|(r, _)| r).collect())
}

/// Components cᵢ = pfaffian_minor(λA − μB, i); errors if some member has corank ≥ 2.
pub fn center_curve(pencil: &AntisymPencil) -> Result<Vec<HomogPoly>> {
    let m = pencil.poly_matrix();
    let c: Vec<HomogPoly> = (0..pencil.size()).map(|i| pfaffian_minor_poly(&m, i)).collect();
    let g = c.iter().fold(HomogPoly::zero(2), |g, ci| binary_gcd(&g, ci));
    if g.is_zero() || g.degree() > 0 {
        let (lambda, mu) = match g.binary_roots().0.first() {
            Some(((l, m), _)) => (format_rat(l), format_rat(m)),
            None if g.is_zero() => ("*".into(), "*".into()),
            None => ("irrational".into(), "irrational".into()),
        };
        let corank = if lambda == "irrational" || lambda == "*" {
            3
        } else {
            let (l, m) = &g.binary_roots().0[0].0;
            crate::antisym::corank(&pencil.at(l, m))
        };
        return Err(Error::HighCorank { corank, lambda, mu });
    }
    Ok(c)
}

pub fn eval_curve(c: &[HomogPoly], x: &[Rational]) -> Vec<Rational> {
    c.iter().map(|p| p.eval(x)).collect()
}

/// Row vector of the hyperplane swept by the section lines through c_(λ:μ).
pub fn center_hyperplane(pencil: &AntisymPencil, at: (&Rational, &Rational)) -> Result<Vec<Rational>> {
    if at.0.is_zero() && at.1.is_zero() {
        return Err(Error::Invalid("(0:0) is not a point of P_1".into()));
    }
    if pencil.size().is_multiple_of(2) {
        return Err(Error::Invalid("center hyperplanes need a pencil of odd size".into()));
    }
    let m = pencil.at(at.0, at.1);
    let k = m.kernel();
    if k.len() != 1 {
        return Err(Error::HighCorank { corank: k.len(), lambda: format_rat(at.0), mu: format_rat(at.1) });
    }
    let c = &k[0];
    let ra = pencil.a.matrix().vec_mul(c);
    let rb = pencil.b.matrix().vec_mul(c);
    let row = if ra.iter().any(|x| !x.is_zero()) { ra } else { rb };
    if row.iter().all(Zero::is_zero) {
        return Err(Error::Generality("center lies in the kernel of every member".into()));
    }
    Ok(normalize_vec(&row))
}

/// Pairing of a Plücker vector with an antisymmetric matrix.
pub fn pluecker_pairing(pl: &[Rational], a: &AntisymMatrix) -> Rational {
    dot(pl, &a.upper_vec())
}
