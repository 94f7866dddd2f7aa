//! Automorphism groups of linear sections: the Lie algebra of matrices X
//! with ᵗX·Aᵢ + Aᵢ·X ∈ span{A₁,…,A_l}, explicit group elements, stabilizers
//! of lines and orbit dimensions.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::antisym::{corank, span_coords, AntisymMatrix, AntisymNet};
use crate::error::{Error, Result};
use crate::grassmann::{center_curve, line_in_section, LineRep, SectionSpec};
use crate::matrix::{vec_rank, RatMatrix};
use crate::modrank::{multimodular_kernel, reduce, reduce_row, rref_mod};
use crate::nets::{cubic_smooth, dual_cubic, g15_identity_param, surface_intersection, veronese_center_map, NetNormalFormG15};
use crate::normal_forms::{even_pencil_normal, hyperplane_even_normal, net_g15_normal, odd_pencil_normal, symplectic_form};
use crate::pencils::pfaffian_binary;
use crate::poly::binary_gcd;
use crate::random::{random_antisym, random_int, random_invertible, random_matrix, random_rat, random_vec, seeded, RETRY_CAP};
use crate::rational::{common_denom, format_rat, rat, Rational};

/// N ≥ 4 and 1 ≤ l ≤ 2N − 5.
pub fn check_range(n: usize, l: usize) -> Result<()> {
    if n < 4 || l == 0 || l + 5 > 2 * n {
        return Err(Error::OutOfRange { n, l });
    }
    Ok(())
}

/// Homogeneous system in the entries of X (row major) followed by the
/// coefficients μᵢⱼ: ᵗX·Aᵢ + Aᵢ·X − Σⱼ μᵢⱼ Aⱼ = 0, upper entries only.
fn aut_system(s: &SectionSpec) -> RatMatrix {
    let size = s.n() + 1;
    let l = s.l();
    let nx = size * size;
    let cols = nx + l * l;
    let mut rows = Vec::new();
    for (i, a) in s.matrices().iter().enumerate() {
        for r in 0..size {
            for c in r + 1..size {
                let mut row = vec![Rational::zero(); cols];
                for k in 0..size {
                    // (ᵗX A)[r][c] = Σ X[k][r] A[k][c], (A X)[r][c] = Σ A[r][k] X[k][c]
                    let akc = a.get(k, c);
                    if !akc.is_zero() {
                        row[k * size + r] += akc;
                    }
                    let ark = a.get(r, k);
                    if !ark.is_zero() {
                        row[k * size + c] += ark;
                    }
                }
                for (j, b) in s.matrices().iter().enumerate() {
                    row[nx + i * l + j] = -b.get(r, c).clone();
                }
                rows.push(row);
            }
        }
    }
    RatMatrix::from_rows(rows)
}

/// X-coefficient rows of the upper entries of ᵗX·A + A·X.
fn image_rows(a: &AntisymMatrix) -> Vec<Vec<(usize, Rational)>> {
    let size = a.size();
    let mut out = Vec::with_capacity(size * (size - 1) / 2);
    for r in 0..size {
        for c in r + 1..size {
            let mut row: Vec<(usize, Rational)> = Vec::new();
            for k in 0..size {
                if !a.get(k, c).is_zero() {
                    row.push((k * size + r, a.get(k, c).clone()));
                }
                if !a.get(r, k).is_zero() {
                    row.push((k * size + c, a.get(r, k).clone()));
                }
            }
            out.push(row);
        }
    }
    out
}

/// The system of `aut_system` modulo p with the μ columns eliminated first:
/// with pivot coordinates K of the span, vᵢ[e] − Σₖ R[k][e]·vᵢ[Kₖ] = 0 for
/// every coordinate e outside K, followed by `extra` rows.
fn projected_mod(s: &SectionSpec, images: &[Vec<Vec<(usize, Rational)>>], extra: &[Vec<Rational>], p: u64) -> Option<Vec<Vec<u64>>> {
    let size = s.n() + 1;
    let nx = size * size;
    let l = s.l();
    let span: Vec<Vec<u64>> = s.matrices().iter().map(|a| reduce_row(&a.upper_vec(), p)).collect::<Option<_>>()?;
    let ne = span[0].len();
    let (pivots, r) = rref_mod(span, ne, p);
    if pivots.len() < l {
        return None;
    }
    let mut rows = Vec::new();
    for img in images {
        let dense: Vec<Vec<u64>> = img
            .iter()
            .map(|row| {
                let mut v = vec![0u64; nx];
                for (j, c) in row {
                    v[*j] = (v[*j] + reduce(c, p)?) % p;
                }
                Some(v)
            })
            .collect::<Option<_>>()?;
        for e in (0..ne).filter(|e| !pivots.contains(e)) {
            let mut v = dense[e].clone();
            for (k, &pk) in pivots.iter().enumerate() {
                let f = r[k][e];
                if f != 0 {
                    for (x, y) in v.iter_mut().zip(&dense[pk]) {
                        *x = (*x + (p - f) * y) % p;
                    }
                }
            }
            rows.push(v);
        }
    }
    for row in extra {
        rows.push(reduce_row(row, p)?);
    }
    Some(rows)
}

fn to_matrix(v: &[Rational], size: usize) -> RatMatrix {
    RatMatrix::from_fn(size, size, |i, j| v[i * size + j].clone())
}

/// Integer data for exact membership checks: the matrices scaled to integers
/// and the reduced echelon basis of their span, also scaled to integers.
struct SpanCheck {
    mats: Vec<Vec<Vec<BigInt>>>,
    pivots: Vec<usize>,
    /// (D, D·R) with R the reduced echelon basis of the span.
    denom: BigInt,
    echelon: Vec<Vec<BigInt>>,
}

impl SpanCheck {
    fn new(s: &SectionSpec) -> Self {
        let mats = s
            .matrices()
            .iter()
            .map(|a| {
                let d = common_denom(a.matrix().entries());
                a.matrix()
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect())
                    .collect()
            })
            .collect();
        let span = RatMatrix::from_rows(s.matrices().iter().map(|a| a.upper_vec()).collect());
        let (r, rank, pivots) = span.rref();
        let rows: Vec<Vec<Rational>> = (0..rank).map(|i| r.row(i)).collect();
        let denom = common_denom(rows.iter().flatten());
        let dr = Rational::from_integer(denom.clone());
        let echelon = rows.iter().map(|row| row.iter().map(|x| (x * &dr).to_integer()).collect()).collect();
        SpanCheck { mats, pivots, denom, echelon }
    }

    /// ᵗX·A + A·X ∈ span{A₁,…,A_l} for every Aᵢ, X given by integer entries.
    fn preserves(&self, x: &[BigInt], size: usize) -> bool {
        self.mats.iter().all(|a| {
            let mut img = Vec::with_capacity(size * (size - 1) / 2);
            for r in 0..size {
                for c in r + 1..size {
                    let mut acc = BigInt::zero();
                    for k in 0..size {
                        if !a[k][c].is_zero() {
                            acc += &x[k * size + r] * &a[k][c];
                        }
                        if !a[r][k].is_zero() {
                            acc += &a[r][k] * &x[k * size + c];
                        }
                    }
                    img.push(acc);
                }
            }
            (0..img.len()).all(|e| {
                let fit = self.pivots.iter().zip(&self.echelon).fold(BigInt::zero(), |acc, (&pk, row)| acc + &row[e] * &img[pk]);
                fit == &img[e] * &self.denom
            })
        })
    }
}

fn integer_vec(v: &[Rational]) -> Vec<BigInt> {
    let d = Rational::from_integer(common_denom(v.iter()));
    v.iter().map(|x| (x * &d).to_integer()).collect()
}

/// Basis of the automorphism algebra cut down by extra linear conditions on
/// the entries of X (row major).
fn constrained_algebra(s: &SectionSpec, extra: &[Vec<Rational>]) -> Result<Vec<RatMatrix>> {
    let size = s.n() + 1;
    let images: Vec<_> = s.matrices().iter().map(image_rows).collect();
    let check = SpanCheck::new(s);
    let extra_int: Vec<Vec<BigInt>> = extra.iter().map(|r| integer_vec(r)).collect();
    let basis = multimodular_kernel(
        size * size,
        |p| projected_mod(s, &images, extra, p),
        |v| {
            let x = integer_vec(v);
            extra_int.iter().all(|r| r.iter().zip(&x).fold(BigInt::zero(), |acc, (a, b)| acc + a * b).is_zero())
                && check.preserves(&x, size)
        },
    );
    match basis {
        Some(b) => Ok(b.iter().map(|v| to_matrix(v, size)).collect()),
        None => {
            // the full system, solved over Q
            let mut m = aut_system(s).to_rows();
            let width = m[0].len();
            m.extend(extra.iter().map(|r| {
                let mut row = r.clone();
                row.resize(width, Rational::zero());
                row
            }));
            let k = RatMatrix::from_rows(m).nullspace();
            let kept: Vec<Vec<Rational>> = k.iter().map(|v| v[..size * size].to_vec()).collect();
            Ok(kept.iter().map(|v| to_matrix(v, size)).collect())
        }
    }
}

/// A basis of the infinitesimal automorphism algebra; always contains a
/// multiple of the identity in its span.
pub fn lie_algebra(s: &SectionSpec) -> Result<Vec<RatMatrix>> {
    check_range(s.n(), s.l())?;
    constrained_algebra(s, &[])
}

/// dim Aut(G(1,N) ∩ H^l).
pub fn infinitesimal_aut_dim(s: &SectionSpec) -> Result<usize> {
    Ok(lie_algebra(s)?.len() - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(rename = "T")]
    pub t: RatMatrix,
    /// Row i holds the coordinates of ᵗT⁻¹AᵢT⁻¹ in A₁,…,A_l.
    pub induced_span_action: RatMatrix,
}

/// Residual of the best fit of target in the span, solved on independent coordinates.
fn span_residual(target: &AntisymMatrix, basis: &[AntisymMatrix]) -> AntisymMatrix {
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.upper_vec()).collect();
    let m = RatMatrix::from_cols(&cols);
    let (_, _, pivots) = m.transpose().rref();
    let sub = RatMatrix::from_rows(pivots.iter().map(|&i| m.row(i)).collect());
    let tv = target.upper_vec();
    let rhs: Vec<Rational> = pivots.iter().map(|&i| tv[i].clone()).collect();
    let coeffs = sub.solve(&rhs).unwrap_or_else(|| vec![Rational::zero(); basis.len()]);
    basis.iter().zip(&coeffs).fold(target.clone(), |acc, (b, c)| acc.sub(&b.scale(c)))
}

fn describe_residual(r: &AntisymMatrix) -> String {
    let size = r.size();
    let nonzero: Vec<(usize, usize)> =
        (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).filter(|&(i, j)| !r.get(i, j).is_zero()).collect();
    match nonzero.first() {
        Some(&(i, j)) => format!("{} nonzero entries, first ({i},{j}) = {}", nonzero.len(), format_rat(r.get(i, j))),
        None => "zero".into(),
    }
}

/// Checks ᵗT⁻¹AᵢT⁻¹ ∈ span{A₁,…,A_l} for every i.
pub fn verify_element(t: &RatMatrix, s: &SectionSpec) -> Result<GroupElement> {
    if t.rows() != s.n() + 1 || !t.is_square() {
        return Err(Error::Dimension(format!("T is {}x{} for a section in P_{}", t.rows(), t.cols(), s.n())));
    }
    let ti = t.inverse()?;
    let mut rows = Vec::with_capacity(s.l());
    for (i, a) in s.matrices().iter().enumerate() {
        let image = a.congruence(&ti);
        match span_coords(&image, s.matrices()) {
            Some(c) => rows.push(c),
            None => {
                let r = span_residual(&image, s.matrices());
                return Err(Error::NotAutomorphism { index: i, residual: describe_residual(&r) });
            }
        }
    }
    Ok(GroupElement { t: t.clone(), induced_span_action: RatMatrix::from_rows(rows) })
}

/// Rows w·X·v = 0 for w annihilating span{p, q} and v ∈ {p, q}.
fn line_constraints(line: &LineRep) -> Vec<Vec<Rational>> {
    let (p, q) = (line.p.coords(), line.q.coords());
    let size = p.len();
    let annihilator = RatMatrix::from_rows(vec![p.to_vec(), q.to_vec()]).nullspace();
    let mut rows = Vec::new();
    for w in &annihilator {
        for v in [p, q] {
            rows.push((0..size * size).map(|k| &w[k / size] * &v[k % size]).collect());
        }
    }
    rows
}

fn stabilizer_dim_unchecked(s: &SectionSpec, line: &LineRep) -> Result<usize> {
    Ok(constrained_algebra(s, &line_constraints(line))?.len() - 1)
}

/// dim of {X in the automorphism algebra : X·p, X·q ∈ span{p, q}} minus the scalars.
pub fn stabilizer_dim(s: &SectionSpec, line: &LineRep) -> Result<usize> {
    check_range(s.n(), s.l())?;
    if !line_in_section(line, s)? {
        return Err(Error::LineNotInSection);
    }
    stabilizer_dim_unchecked(s, line)
}

/// A line of the section through a random point.
pub fn sample_section_line<R: Rng>(rng: &mut R, s: &SectionSpec, bound: i64) -> Result<LineRep> {
    let size = s.n() + 1;
    for _ in 0..RETRY_CAP {
        let p = random_vec(rng, size, bound);
        let rows: Vec<Vec<Rational>> = s.matrices().iter().map(|a| a.matrix().vec_mul(&p)).collect();
        let space = RatMatrix::from_rows(rows).nullspace();
        let q = space.iter().fold(vec![Rational::zero(); size], |acc, v| {
            let c = random_rat(rng, bound);
            acc.iter().zip(v).map(|(x, y)| x + &c * y).collect()
        });
        if vec_rank(&[p.clone(), q.clone()]) == 2 {
            return LineRep::from_vecs(p, q);
        }
    }
    Err(Error::RetryCap(RETRY_CAP))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Quasihomogeneous,
    NotQuasihomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub l: usize,
    pub aut_dim: usize,
    pub section_dim: usize,
    pub sample_line_stab_dim: usize,
    pub orbit_dim: usize,
    pub verdict: Verdict,
    pub seed: u64,
    pub samples: usize,
}

const LINE_BOUND: i64 = 5;

/// Orbit dimension of a general line, taken as the smallest stabilizer over
/// `samples` seeded lines of the section.
pub fn quasihomogeneity_report(s: &SectionSpec, seed: u64, samples: usize) -> Result<AutReport> {
    check_range(s.n(), s.l())?;
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample line".into()));
    }
    let aut_dim = infinitesimal_aut_dim(s)?;
    let mut rng = seeded(seed);
    let mut stab = if aut_dim == 0 { 0 } else { usize::MAX };
    for _ in 0..if aut_dim == 0 { 0 } else { samples } {
        let line = sample_section_line(&mut rng, s, LINE_BOUND)?;
        stab = stab.min(stabilizer_dim_unchecked(s, &line)?);
    }
    let section_dim = s.section_dim() as usize;
    let orbit_dim = aut_dim - stab;
    if orbit_dim > section_dim {
        return Err(Error::Generality(format!("orbit of dimension {orbit_dim} in a family of dimension {section_dim}")));
    }
    let verdict = if orbit_dim == section_dim { Verdict::Quasihomogeneous } else { Verdict::NotQuasihomogeneous };
    Ok(AutReport { n: s.n(), l: s.l(), aut_dim, section_dim, sample_line_stab_dim: stab, orbit_dim, verdict, seed, samples })
}

fn convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The matrix t_size with t_size·(μⁿ, μⁿ⁻¹λ, …, λⁿ) = ((dμ+cλ)ⁿ, (dμ+cλ)ⁿ⁻¹(bμ+aλ), …, (bμ+aλ)ⁿ).
pub fn symmetric_power_rep(t: &RatMatrix, size: usize) -> Result<RatMatrix> {
    if t.rows() != 2 || t.cols() != 2 {
        return Err(Error::Dimension("expected a 2x2 matrix".into()));
    }
    if size == 0 {
        return Err(Error::Invalid("size must be positive".into()));
    }
    if t.det().is_zero() {
        return Err(Error::Singular);
    }
    let (a, b, c, d) = (&t[(0, 0)], &t[(0, 1)], &t[(1, 0)], &t[(1, 1)]);
    // coefficient lists indexed by the power of λ
    let u = [d.clone(), c.clone()];
    let w = [b.clone(), a.clone()];
    let n = size - 1;
    let rows = (0..=n)
        .map(|k| {
            let mut p = vec![Rational::one()];
            for _ in 0..n - k {
                p = convolve(&p, &u);
            }
            for _ in 0..k {
                p = convolve(&p, &w);
            }
            p
        })
        .collect();
    Ok(RatMatrix::from_rows(rows))
}

/// The normal forms for which explicit generators are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalKind {
    /// N = 2n − 1, l = 1.
    OddHyperplane { n: usize },
    /// N = 2n, l = 1.
    EvenHyperplane { n: usize },
    /// N = 2n − 1, l = 2, A = diag(J,…,J), B = diag(λ₁J,…,λₙJ).
    OddPencil { lambdas: Vec<Rational> },
    /// N = 2n, l = 2.
    EvenPencil { n: usize },
    /// N = 5, l = 3.
    NetG15 { alpha: Rational, beta: Rational, gamma: Rational, delta: Rational },
}

pub fn recognize(s: &SectionSpec) -> Result<NormalKind> {
    let size = s.n() + 1;
    let ms = s.matrices();
    match (s.l(), size % 2) {
        (1, 0) if ms[0] == symplectic_form(size / 2) => Ok(NormalKind::OddHyperplane { n: size / 2 }),
        (1, 1) if ms[0] == hyperplane_even_normal(size / 2) => Ok(NormalKind::EvenHyperplane { n: size / 2 }),
        (2, 0) => {
            let lambdas: Vec<Rational> = (0..size / 2).map(|k| -ms[1].get(2 * k, 2 * k + 1).clone()).collect();
            let normal = odd_pencil_normal(&lambdas);
            let distinct = (0..lambdas.len()).all(|i| (0..i).all(|j| lambdas[i] != lambdas[j]));
            if distinct && ms[0] == normal.a && ms[1] == normal.b {
                Ok(NormalKind::OddPencil { lambdas })
            } else {
                Err(Error::Unrecognized)
            }
        }
        (2, 1) => {
            let normal = even_pencil_normal(size / 2);
            if ms[0] == normal.a && ms[1] == normal.b {
                Ok(NormalKind::EvenPencil { n: size / 2 })
            } else {
                Err(Error::Unrecognized)
            }
        }
        (3, 0) if size == 6 => {
            let c = &ms[2];
            let (alpha, beta, gamma, delta) = (-c.get(0, 2).clone(), -c.get(2, 4).clone(), -c.get(0, 4).clone(), -c.get(1, 4).clone());
            let normal = net_g15_normal(&alpha, &beta, &gamma, &delta)?;
            if ms[0] == normal.a && ms[1] == normal.b && ms[2] == normal.c {
                Ok(NormalKind::NetG15 { alpha, beta, gamma, delta })
            } else {
                Err(Error::Unrecognized)
            }
        }
        _ => Err(Error::Unrecognized),
    }
}

fn random_symmetric<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    let m = random_matrix(rng, n, n, bound);
    m.add(&m.transpose())
}

/// A random element of Sp(2n, Q) for the form [[0, −E], [E, 0]].
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Result<RatMatrix> {
    let e = RatMatrix::identity(n);
    let z = RatMatrix::zeros(n, n);
    let block = |tl: &RatMatrix, tr: &RatMatrix, bl: &RatMatrix, br: &RatMatrix| {
        let mut m = RatMatrix::zeros(2 * n, 2 * n);
        m.set_block(0, 0, tl);
        m.set_block(0, n, tr);
        m.set_block(n, 0, bl);
        m.set_block(n, n, br);
        m
    };
    let g = random_invertible(rng, n, bound)?;
    let upper = block(&e, &random_symmetric(rng, n, bound), &z, &e);
    let lower = block(&e, &z, &random_symmetric(rng, n, bound), &e);
    let levi = block(&g, &z, &z, &g.transpose().inverse()?);
    Ok(upper.mul(&levi).mul(&lower))
}

/// The Möbius map (a, b, c, e), z ↦ (az + b)/(cz + e), with λₖ ↦ λ_σ(k) for all k.
pub fn mobius_for(lambdas: &[Rational], sigma: &[usize]) -> Option<[Rational; 4]> {
    let rows: Vec<Vec<Rational>> = lambdas
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let img = &lambdas[sigma[k]];
            vec![l.clone(), rat(1), -(img * l), -img.clone()]
        })
        .collect();
    let space = RatMatrix::from_rows(rows).nullspace();
    if space.len() != 1 {
        return None;
    }
    let v = &space[0];
    let (a, b, c, e) = (&v[0], &v[1], &v[2], &v[3]);
    if (a * e - b * c).is_zero() || lambdas.iter().any(|l| (c * l + e).is_zero()) {
        return None;
    }
    Some([a.clone(), b.clone(), c.clone(), e.clone()])
}

/// P_σ·diag(g₁,…,gₙ) with det gₖ = cλₖ + e, realizing σ on the odd pencil normal form.
pub fn permutation_element(lambdas: &[Rational], sigma: &[usize]) -> Result<RatMatrix> {
    let n = lambdas.len();
    if sigma.len() != n || (0..n).any(|k| !sigma.contains(&k)) {
        return Err(Error::Invalid("sigma is not a permutation of the blocks".into()));
    }
    let [_, _, c, e] = mobius_for(lambdas, sigma)
        .ok_or_else(|| Error::Invalid("no projective transformation of the pencil line realizes this permutation".into()))?;
    let mut p = RatMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        p[(2 * sigma[k], 2 * k)] = rat(1);
        p[(2 * sigma[k] + 1, 2 * k + 1)] = rat(1);
    }
    let blocks: Vec<RatMatrix> =
        lambdas.iter().map(|l| RatMatrix::from_rows(vec![vec![&c * l + &e, rat(0)], vec![rat(0), rat(1)]])).collect();
    Ok(p.mul(&RatMatrix::diag_blocks(&blocks)))
}

/// Block permutations listed as admissible for n general points: all of
/// S(3), the Klein four-group for n = 4, the identity otherwise.
pub fn admissible_permutations(n: usize) -> Vec<Vec<usize>> {
    match n {
        3 => vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1]],
        4 => vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        _ => vec![(0..n).collect()],
    }
}

/// [[αEₙ, 0], [S, Eₙ₊₁]] with sᵢⱼ = h[i + j].
pub fn hankel_element(alpha: &Rational, h: &[Rational], n: usize) -> Result<RatMatrix> {
    if h.len() != 2 * n {
        return Err(Error::Dimension(format!("need {} antidiagonal values, got {}", 2 * n, h.len())));
    }
    if alpha.is_zero() {
        return Err(Error::Singular);
    }
    let mut t = RatMatrix::identity(2 * n + 1);
    for i in 0..n {
        t[(i, i)] = alpha.clone();
    }
    for i in 0..=n {
        for j in 0..n {
            t[(n + i, j)] = h[i + j].clone();
        }
    }
    Ok(t)
}

/// diag(ᵗtₙ⁻¹, tₙ₊₁) for the even pencil normal form of size 2n + 1.
pub fn even_pencil_torus(t: &RatMatrix, n: usize) -> Result<RatMatrix> {
    let tn = symmetric_power_rep(t, n)?;
    let tn1 = symmetric_power_rep(t, n + 1)?;
    Ok(RatMatrix::diag_blocks(&[tn.transpose().inverse()?, tn1]))
}

fn random_sl2_blocks<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    let blocks: Vec<RatMatrix> = (0..n).map(|_| crate::random::random_sl2(rng, bound)).collect();
    RatMatrix::diag_blocks(&blocks)
}

const GEN_BOUND: i64 = 4;

/// Explicit automorphisms of a section in one of the recognized normal forms,
/// each checked by `verify_element`.
pub fn build_generators<R: Rng>(s: &SectionSpec, rng: &mut R) -> Result<Vec<GroupElement>> {
    let mut ts = Vec::new();
    match recognize(s)? {
        NormalKind::OddHyperplane { n } => {
            for _ in 0..3 {
                ts.push(random_symplectic(rng, n, GEN_BOUND)?);
            }
        }
        NormalKind::EvenHyperplane { n } => {
            let mut sym = RatMatrix::identity(2 * n + 1);
            sym.set_block(0, 0, &random_symplectic(rng, n, GEN_BOUND)?);
            let mut translation = RatMatrix::identity(2 * n + 1);
            for j in 0..2 * n {
                translation[(2 * n, j)] = random_rat(rng, GEN_BOUND);
            }
            let mut scaling = RatMatrix::identity(2 * n + 1);
            scaling[(2 * n, 2 * n)] = nonzero(rng);
            let product = sym.mul(&translation).mul(&scaling);
            ts.extend([sym, translation, scaling, product]);
        }
        NormalKind::OddPencil { lambdas } => {
            let n = lambdas.len();
            ts.push(random_sl2_blocks(rng, n, GEN_BOUND));
            for sigma in admissible_permutations(n).into_iter().skip(1) {
                if let Ok(p) = permutation_element(&lambdas, &sigma) {
                    ts.push(p.mul(&random_sl2_blocks(rng, n, GEN_BOUND)));
                }
            }
        }
        NormalKind::EvenPencil { n } => {
            let h: Vec<Rational> = (0..2 * n).map(|_| random_rat(rng, GEN_BOUND)).collect();
            let hankel = hankel_element(&nonzero(rng), &h, n)?;
            let torus = even_pencil_torus(&random_invertible(rng, 2, GEN_BOUND)?, n)?;
            let product = hankel.mul(&torus);
            ts.extend([hankel, torus, product]);
        }
        NormalKind::NetG15 { alpha, beta, gamma, delta } => {
            let normal = NetNormalFormG15 { alpha, beta, gamma, delta, t: RatMatrix::identity(6), recombination: RatMatrix::identity(3) };
            for _ in 0..3 {
                let k = nonzero(rng);
                if let Ok(t) = g15_identity_param(&normal, &k) {
                    ts.push(RatMatrix::diag_blocks(&[t.clone(), t.transpose().inverse()?, t]));
                }
            }
        }
    }
    ts.iter().map(|t| verify_element(t, s)).collect()
}

fn nonzero<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let v = random_int(rng, GEN_BOUND);
        if v != 0 {
            return rat(v);
        }
    }
}

/// Orbit label of a line of a G(1,4) section with l ≤ 3.
pub fn orbit_label(s: &SectionSpec, line: &LineRep) -> Result<&'static str> {
    if s.n() != 4 {
        return Err(Error::Unrecognized);
    }
    if !line_in_section(line, s)? {
        return Err(Error::LineNotInSection);
    }
    let (p, q) = (line.p.coords().to_vec(), line.q.coords().to_vec());
    match s.l() {
        1 => {
            let k = s.matrices()[0].kernel();
            if k.len() != 1 {
                return Err(Error::Generality("the hyperplane has no unique center".into()));
            }
            Ok(if vec_rank(&[p, q, k[0].clone()]) == 2 { "through-center" } else { "off-center" })
        }
        2 => {
            let c = center_curve(&s.pencil()?)?;
            let v: Vec<Vec<Rational>> = (0..3u32).map(|k| c.iter().map(|ci| ci.coeff([k, 2 - k, 0])).collect()).collect();
            match vec_rank(&[v[0].clone(), v[1].clone(), v[2].clone(), p.clone(), q.clone()]) {
                3 => {
                    let basis = RatMatrix::from_cols(&v);
                    let yp = basis.solve(&p).ok_or(Error::Generality("point off the conic plane".into()))?;
                    let yq = basis.solve(&q).ok_or(Error::Generality("point off the conic plane".into()))?;
                    // conic y₁² = y₀y₂ in the plane
                    let form = |y: &[Rational], z: &[Rational]| &y[1] * &z[1] - (&y[0] * &z[2] + &y[2] * &z[0]) / rat(2);
                    let disc = form(&yp, &yq) * form(&yp, &yq) - form(&yp, &yp) * form(&yq, &yq);
                    Ok(if disc.is_zero() { "tangent" } else { "secant" })
                }
                4 => Ok("through-conic"),
                _ => Ok("disjoint"),
            }
        }
        3 => {
            let ms = s.matrices();
            let net = AntisymNet::new(ms[0].clone(), ms[1].clone(), ms[2].clone())?;
            Ok(surface_intersection(line, &veronese_center_map(&net)?)?.kind())
        }
        _ => Err(Error::Unrecognized),
    }
}

/// Certifies the open conditions that make a section general for its (N, l).
pub fn is_general(s: &SectionSpec) -> Result<bool> {
    let size = s.n() + 1;
    let ms = s.matrices();
    match s.l() {
        1 => Ok(corank(&ms[0]) == size % 2),
        2 => {
            let pencil = s.pencil()?;
            if size % 2 == 1 {
                return Ok(center_curve(&pencil).is_ok());
            }
            let f = pfaffian_binary(&pencil);
            Ok(!f.is_zero() && binary_gcd(&f.partial(0), &f.partial(1)).degree() == 0)
        }
        3 if size <= 6 => {
            let net = AntisymNet::new(ms[0].clone(), ms[1].clone(), ms[2].clone())?;
            if size == 5 {
                Ok(veronese_center_map(&net).is_ok())
            } else {
                match cubic_smooth(&dual_cubic(&net)) {
                    Ok(b) => Ok(b),
                    Err(Error::Generality(_)) | Err(Error::RetryCap(_)) => Ok(false),
                    Err(e) => Err(e),
                }
            }
        }
        l => {
            let mut rng = seeded(0x9e11);
            Ok((0..GRID_MEMBERS).all(|_| {
                let x: Vec<Rational> = random_vec(&mut rng, l, 3);
                let m = ms.iter().zip(&x).fold(AntisymMatrix::zeros(size), |acc, (a, c)| acc.add(&a.scale(c)));
                corank(&m) == size % 2
            }))
        }
    }
}

const GRID_MEMBERS: usize = 12;

/// A seeded section with integer entries in [−bound, bound] that passes `is_general`.
pub fn general_section<R: Rng>(rng: &mut R, n: usize, l: usize, bound: i64) -> Result<SectionSpec> {
    check_range(n, l)?;
    for _ in 0..RETRY_CAP {
        let ms: Vec<AntisymMatrix> = (0..l).map(|_| random_antisym(rng, n + 1, bound)).collect();
        let Ok(s) = SectionSpec::new(n, ms) else { continue };
        if is_general(&s)? {
            return Ok(s);
        }
    }
    Err(Error::RetryCap(RETRY_CAP))
}
