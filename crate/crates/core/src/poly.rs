//! Sparse homogeneous polynomials in two or three variables.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, rat, Rational};
use crate::univariate::UniPoly;

pub type Exps = [u32; 3];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exps, Rational>,
}

const NAMES: [&str; 3] = ["l", "m", "n"];

impl HomogPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars == 2 || nvars == 3, "2 or 3 variables");
        HomogPoly { nvars, degree: 0, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, e: Exps, c: Rational) -> Self {
        assert!(nvars == 3 || e[2] == 0, "exponent of absent variable");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.degree = e.iter().sum();
            p.terms.insert(e, c);
        }
        p
    }

    /// Builds a polynomial from terms of equal total degree.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, Rational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        let mut deg = None;
        for (e, c) in terms {
            if nvars == 2 && e[2] != 0 {
                return Err(Error::Invalid("third exponent in binary form".into()));
            }
            let d: u32 = e.iter().sum();
            if *deg.get_or_insert(d) != d {
                return Err(Error::Invalid("inhomogeneous terms".into()));
            }
            let entry = p.terms.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                p.terms.remove(&e);
            }
        }
        p.degree = if p.terms.is_empty() { 0 } else { deg.unwrap_or(0) };
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exps, Rational> {
        &self.terms
    }

    pub fn coeff(&self, e: Exps) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &HomogPoly) -> HomogPoly {
        assert_eq!(self.nvars, o.nvars);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut r = self.clone();
        for (e, c) in &o.terms {
            let entry = r.terms.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                r.terms.remove(e);
            }
        }
        if r.terms.is_empty() {
            r.degree = 0;
        }
        r
    }

    pub fn neg(&self) -> HomogPoly {
        self.scale(&rat(-1))
    }

    pub fn sub(&self, o: &HomogPoly) -> HomogPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rational) -> HomogPoly {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        HomogPoly { nvars: self.nvars, degree: self.degree, terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, o: &HomogPoly) -> HomogPoly {
        assert_eq!(self.nvars, o.nvars);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut terms: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                *terms.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let degree = if terms.is_empty() { 0 } else { self.degree + o.degree };
        HomogPoly { nvars: self.nvars, degree, terms }
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> HomogPoly {
        self.scale(&crate::rational::primitive_factor(self.terms.values()))
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        (0..k).fold(Self::constant(self.nvars, Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, xi) in x.iter().enumerate() {
                for _ in 0..e[i] {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    pub fn partial(&self, i: usize) -> HomogPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                terms.insert(f, c * rat(e[i] as i64));
            }
        }
        let degree = if terms.is_empty() { 0 } else { self.degree - 1 };
        HomogPoly { nvars: self.nvars, degree, terms }
    }

    /// Substitute linear forms for the variables.
    pub fn compose_linear(&self, forms: &[HomogPoly]) -> HomogPoly {
        assert_eq!(forms.len(), self.nvars);
        let nv = forms[0].nvars;
        let mut acc = Self::zero(nv);
        for (e, c) in &self.terms {
            let mut t = Self::constant(nv, c.clone());
            for (i, f) in forms.iter().enumerate() {
                t = t.mul(&f.pow(e[i]));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficient of the last variable's k-th power, as a form in the same ring.
    pub fn coeff_in_last(&self, k: u32) -> HomogPoly {
        let v = self.nvars - 1;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut f = *e;
                f[v] = 0;
                terms.insert(f, c.clone());
            }
        }
        let degree = if terms.is_empty() { 0 } else { self.degree - k };
        HomogPoly { nvars: self.nvars, degree, terms }
    }

    /// Drop to two variables; the third exponent must be zero everywhere.
    pub fn to_binary(&self) -> HomogPoly {
        assert!(self.terms.keys().all(|e| e[2] == 0), "form depends on the third variable");
        HomogPoly { nvars: 2, degree: self.degree, terms: self.terms.clone() }
    }

    /// Binary form f(λ, μ) ↦ f(t, 1).
    pub fn dehomogenize(&self) -> UniPoly {
        assert_eq!(self.nvars, 2);
        let mut c = vec![Rational::zero(); self.degree as usize + 1];
        for (e, v) in &self.terms {
            c[e[0] as usize] = v.clone();
        }
        UniPoly::new(c)
    }

    /// f(t) of degree ≤ d ↦ μ^d f(λ/μ).
    pub fn homogenize(u: &UniPoly, d: u32) -> HomogPoly {
        assert!(u.degree() <= d as isize);
        let terms = u.0.iter().enumerate().map(|(i, c)| ([i as u32, d - i as u32, 0], c.clone()));
        let mut p = Self::from_terms(2, terms).expect("homogeneous by construction");
        if !p.is_zero() {
            p.degree = d;
        }
        p
    }

    /// Power of μ dividing a binary form.
    pub fn mu_multiplicity(&self) -> u32 {
        self.terms.keys().map(|e| e[1]).min().unwrap_or(0)
    }

    /// Projective rational roots (λ:μ) of a binary form with multiplicities,
    /// finite ones ascending by λ/μ, then (1:0). Also returns the degrees of
    /// the irreducible factors that have no rational root.
    pub fn binary_roots(&self) -> (Vec<((Rational, Rational), usize)>, Vec<usize>) {
        assert_eq!(self.nvars, 2);
        let u = self.dehomogenize();
        let mut roots: Vec<((Rational, Rational), usize)> = u
            .rational_roots()
            .into_iter()
            .map(|r| {
                let m = u.multiplicity(&r);
                ((r, Rational::one()), m)
            })
            .collect();
        let inf = self.degree as isize - u.degree();
        if inf > 0 && !self.is_zero() {
            roots.push(((Rational::one(), Rational::zero()), inf as usize));
        }
        let irr: Vec<usize> = u.factor_degrees().into_iter().filter(|&d| d > 1).collect();
        (roots, irr)
    }

    /// Serializable form: list of (exponents, coefficient string).
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e[..self.nvars].to_vec(), format_rat(c))).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|(e, c)| {
                if e.len() != j.vars {
                    return Err(Error::Parse("exponent length".into()));
                }
                let mut x = [0; 3];
                x[..e.len()].copy_from_slice(e);
                Ok((x, parse_rat(c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(j.vars, terms)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rat(c))?;
            for i in 0..self.nvars {
                match e[i] {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[i])?,
                    k => write!(f, "*{}^{}", NAMES[i], k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly({self})")
    }
}

/// Vector of forms, e.g. a curve parametrization.
pub type HomogPolyVec = Vec<HomogPoly>;

/// Matrix of forms times vector of forms is identically zero.
pub fn poly_matrix_kernel_check(mat: &[Vec<HomogPoly>], v: &[HomogPoly]) -> Result<bool> {
    for row in mat {
        if row.len() != v.len() {
            return Err(Error::Dimension("matrix row length differs from vector length".into()));
        }
        let nv = v.first().map_or(2, |p| p.nvars());
        let mut acc = HomogPoly::zero(nv);
        for (a, b) in row.iter().zip(v) {
            acc = acc.add(&a.mul(b));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degree of f in its last variable.
pub fn degree_in_last(f: &HomogPoly) -> u32 {
    (0..=f.degree()).rev().find(|&k| !f.coeff_in_last(k).is_zero()).unwrap_or(0)
}

/// Sylvester resultant of two forms in the last variable, taken with respect
/// to their actual degrees in it, as a form in the remaining variables.
pub fn resultant_last(f: &HomogPoly, g: &HomogPoly) -> HomogPoly {
    let nv = f.nvars();
    let (m, n) = (degree_in_last(f) as usize, degree_in_last(g) as usize);
    let size = m + n;
    if size == 0 {
        return HomogPoly::constant(nv, Rational::one());
    }
    let fc: Vec<HomogPoly> = (0..=m).map(|k| f.coeff_in_last((m - k) as u32)).collect();
    let gc: Vec<HomogPoly> = (0..=n).map(|k| g.coeff_in_last((n - k) as u32)).collect();
    let mut rows = vec![vec![HomogPoly::zero(nv); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    poly_det(&rows)
}

fn poly_det(rows: &[Vec<HomogPoly>]) -> HomogPoly {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let nv = rows[0][0].nvars();
    let mut acc = HomogPoly::zero(nv);
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<HomogPoly>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = rows[0][j].mul(&poly_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// gcd of binary forms, normalized monic in the dehomogenized variable.
pub fn binary_gcd(f: &HomogPoly, g: &HomogPoly) -> HomogPoly {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let uf = f.dehomogenize();
    let ug = g.dehomogenize();
    let inf_f = f.degree() as isize - uf.degree();
    let inf_g = g.degree() as isize - ug.degree();
    let inf = inf_f.min(inf_g) as u32;
    let u = uf.gcd(&ug);
    let d = u.degree() as u32 + inf;
    HomogPoly::homogenize(&u, d)
}
