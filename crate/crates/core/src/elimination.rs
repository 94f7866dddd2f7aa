//! Common projective zeros of ternary forms of degree ≤ 2.
//!
//! The forms are brought to a common degree and replaced by random members
//! of their linear span. After a random unimodular change of coordinates the
//! last variable is eliminated from pairs of such members; the gcd of the
//! resultants is a binary form whose roots are the projections of the common
//! zeros, each counted with the intersection multiplicity of two general
//! members of the span.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grassmann::ProjPoint;
use crate::matrix::RatMatrix;
use crate::poly::{binary_gcd, resultant_last, HomogPoly};
use crate::random::{random_int, random_invertible, seeded};
use crate::rational::{rat, Rational};
use crate::univariate::UniPoly;

const ATTEMPTS: usize = 12;
const STABLE: usize = 3;
const PAIRS: usize = 3;
const COEFF_BOUND: i64 = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZeros {
    /// Number of common zeros counted with multiplicity.
    pub degree: usize,
    /// Number of distinct common zeros.
    pub distinct: usize,
    /// Rational common zeros with their multiplicities.
    pub points: Vec<(ProjPoint, usize)>,
}

impl CommonZeros {
    pub fn is_empty(&self) -> bool {
        self.degree == 0
    }
}

/// F(g·x) for each form F.
pub fn transform_forms(forms: &[HomogPoly], g: &RatMatrix) -> Vec<HomogPoly> {
    let lin: Vec<HomogPoly> =
        (0..3).map(|i| (0..3).fold(HomogPoly::zero(3), |acc, j| acc.add(&HomogPoly::var(3, j).scale(&g[(i, j)])))).collect();
    forms.iter().map(|f| f.compose_linear(&lin)).collect()
}

/// f(l, m, ν) as a polynomial in ν.
fn restrict(f: &HomogPoly, l: &Rational, m: &Rational) -> UniPoly {
    let pt = [l.clone(), m.clone(), Rational::zero()];
    UniPoly::new((0..=f.degree()).map(|k| f.coeff_in_last(k).eval(&pt)).collect())
}

/// (degree, degree of the squarefree part) of a nonzero binary form.
fn binary_degrees(f: &HomogPoly) -> (usize, usize) {
    let u = f.dehomogenize();
    let inf = f.degree() as isize - u.degree();
    let sq = u.squarefree().degree().max(0) as usize;
    (f.degree() as usize, sq + usize::from(inf > 0))
}

/// Multiplies lower degree forms by the coordinates until all share the top degree.
fn equalize(forms: &[HomogPoly]) -> Vec<HomogPoly> {
    let d = forms.iter().map(HomogPoly::degree).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut stack: Vec<HomogPoly> = forms.to_vec();
    while let Some(f) = stack.pop() {
        if f.degree() == d {
            out.push(f);
        } else {
            stack.extend((0..3).map(|i| f.mul(&HomogPoly::var(3, i))));
        }
    }
    out
}

fn member<R: Rng>(rng: &mut R, forms: &[HomogPoly]) -> HomogPoly {
    forms.iter().fold(HomogPoly::zero(3), |acc, f| acc.add(&f.scale(&rat(random_int(rng, COEFF_BOUND)))))
}

struct Attempt {
    degree: usize,
    distinct: usize,
    form: HomogPoly,
    forms: Vec<HomogPoly>,
    g: RatMatrix,
}

fn attempt<R: Rng>(rng: &mut R, forms: &[HomogPoly]) -> Result<Option<Attempt>> {
    let g = random_invertible(rng, 3, COEFF_BOUND)?;
    let fs = transform_forms(forms, &g);
    let e2 = [Rational::zero(), Rational::zero(), rat(1)];
    let mut acc = HomogPoly::zero(2);
    for _ in 0..PAIRS {
        let (a, b) = (member(rng, &fs).primitive(), member(rng, &fs).primitive());
        if a.eval(&e2).is_zero() || b.eval(&e2).is_zero() {
            return Ok(None);
        }
        acc = binary_gcd(&acc, &resultant_last(&a, &b).to_binary().primitive()).primitive();
    }
    if acc.is_zero() {
        return Err(Error::Generality("the forms share a common curve".into()));
    }
    let (degree, distinct) = binary_degrees(&acc);
    Ok(Some(Attempt { degree, distinct, form: acc, forms: fs, g }))
}

/// Common zeros of nonzero ternary forms of degree ≤ 2; the forms must
/// have finitely many common zeros and there must be at least two.
pub fn common_zeros(forms: &[HomogPoly]) -> Result<CommonZeros> {
    let forms: Vec<HomogPoly> = forms.iter().filter(|f| !f.is_zero()).map(HomogPoly::primitive).collect();
    if forms.len() < 2 {
        return Err(Error::Invalid("need at least two nonzero forms".into()));
    }
    if forms.iter().any(|f| f.nvars() != 3 || f.degree() > 2) {
        return Err(Error::Invalid("expected ternary forms of degree at most 2".into()));
    }
    let forms = equalize(&forms);
    let mut rng = seeded(0x5eed);
    let mut best: Option<Attempt> = None;
    let mut unchanged = 0;
    for _ in 0..ATTEMPTS {
        let Some(cur) = attempt(&mut rng, &forms)? else { continue };
        match &best {
            Some(b) if b.degree != cur.degree => {
                return Err(Error::Generality("elimination degree is unstable".into()));
            }
            Some(b) if b.distinct >= cur.distinct => unchanged += 1,
            _ => {
                unchanged = 0;
                best = Some(cur);
            }
        }
        let b = best.as_ref().unwrap();
        if b.distinct == b.degree || unchanged + 1 >= STABLE {
            return finish(best.unwrap());
        }
    }
    Err(Error::RetryCap(ATTEMPTS))
}

fn finish(a: Attempt) -> Result<CommonZeros> {
    let (roots, _) = if a.form.degree() == 0 { (Vec::new(), Vec::new()) } else { a.form.binary_roots() };
    let mut points = Vec::new();
    for ((l, m), mult) in roots {
        let g = a.forms.iter().fold(UniPoly::zero(), |g, f| g.gcd(&restrict(f, &l, &m)));
        for nu in g.rational_roots() {
            let x = a.g.mul_vec(&[l.clone(), m.clone(), nu]);
            points.push((ProjPoint::new(x)?, mult));
        }
    }
    Ok(CommonZeros { degree: a.degree, distinct: a.distinct, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[([u32; 3], i64)]) -> HomogPoly {
        HomogPoly::from_terms(3, terms.iter().map(|(e, c)| (*e, crate::rational::rat(*c)))).unwrap()
    }

    #[test]
    fn three_lines_meet_in_a_point() {
        let f = [q(&[([1, 0, 0], 1)]), q(&[([0, 1, 0], 1)]), q(&[([1, 1, 0], 1)])];
        let z = common_zeros(&f).unwrap();
        assert_eq!((z.degree, z.distinct), (1, 1));
        assert_eq!(z.points[0].0, ProjPoint::unit(3, 2));
    }

    #[test]
    fn conics_through_three_points() {
        // xy, yz, xz vanish exactly at the coordinate points.
        let f = [q(&[([1, 1, 0], 1)]), q(&[([0, 1, 1], 1)]), q(&[([1, 0, 1], 1)])];
        let z = common_zeros(&f).unwrap();
        assert_eq!((z.degree, z.distinct), (3, 3));
        let mut pts: Vec<ProjPoint> = z.points.iter().map(|p| p.0.clone()).collect();
        pts.sort_by_key(|p| p.to_strings());
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&ProjPoint::unit(3, 0)));
    }

    #[test]
    fn tangency_counts_twice() {
        // y·z − x² and y: y = 0 forces x = 0, doubly.
        let f = [q(&[([0, 1, 1], 1), ([2, 0, 0], -1)]), q(&[([0, 1, 0], 1)]).mul(&q(&[([0, 0, 1], 1)]))];
        let z = common_zeros(&f).unwrap();
        assert!(z.degree >= 2);
        let e2 = ProjPoint::unit(3, 2);
        assert!(z.points.iter().any(|(p, m)| *p == e2 && *m >= 2));
    }

    #[test]
    fn no_common_zero() {
        let f = [q(&[([2, 0, 0], 1), ([0, 2, 0], 1)]), q(&[([0, 0, 2], 1), ([1, 1, 0], 1)]), q(&[([0, 2, 0], 1), ([0, 0, 2], -1)])];
        let z = common_zeros(&f).unwrap();
        assert!(z.is_empty());
    }
}
