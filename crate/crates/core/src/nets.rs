//! Nets of antisymmetric matrices: the G(1,5) normal form and its dual
//! cubic, and the projected Veronese surface of centers of a G(1,4) net.

use num_traits::{One, Zero};

use crate::antisym::{pfaffian_minor_poly, pfaffian_poly, AntisymMatrix, AntisymNet, AntisymPencil};
use crate::elimination::common_zeros;
use crate::error::{Error, Result};
use crate::grassmann::{line_in_section, pencil_roots, LineRep, ProjPoint, SectionSpec};
use crate::matrix::{primitive_vec, vec_rank, RatMatrix};
use crate::normal_forms::net_g15_normal;
use crate::polar::{is_polar_triangle, Conic, Triangle};
use crate::poly::HomogPoly;
use crate::rational::{format_rat, rat, sqrt_exact, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetNormalFormG15 {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    /// act(T) takes the recombined input net to the normal form.
    pub t: RatMatrix,
    /// Row k holds the coefficients of the k-th normal-form member in the input A, B, C.
    pub recombination: RatMatrix,
}

impl NetNormalFormG15 {
    pub fn normal_net(&self) -> Result<AntisymNet> {
        net_g15_normal(&self.alpha, &self.beta, &self.gamma, &self.delta)
    }
}

fn block_coeff(m: &AntisymMatrix, k: usize) -> Rational {
    -m.get(2 * k, 2 * k + 1).clone()
}

fn target_ab() -> (AntisymMatrix, AntisymMatrix) {
    let mut a = AntisymMatrix::zeros(6);
    let mut b = AntisymMatrix::zeros(6);
    a.set(0, 1, rat(-1));
    a.set(2, 3, rat(-1));
    b.set(2, 3, rat(-1));
    b.set(4, 5, rat(-1));
    (a, b)
}

fn combine(net: &AntisymNet, row: &[Rational]) -> AntisymMatrix {
    net.at(&[row[0].clone(), row[1].clone(), row[2].clone()])
}

fn sqrt_or_err(r: &Rational) -> Result<Rational> {
    sqrt_exact(r).ok_or_else(|| Error::IrrationalSqrt(format_rat(r)))
}

/// A rational x with ᵗx C̄ x = γ among multiples of e₁, e₂, e₁ + e₂.
fn represent(cbar: &RatMatrix, gamma: &Rational) -> Option<Vec<Rational>> {
    unit_candidates().into_iter().find_map(|u| {
        let q = cbar.bilinear(&u, &u);
        if q.is_zero() {
            return None;
        }
        sqrt_exact(&(gamma / q)).map(|s| u.iter().map(|x| x * &s).collect())
    })
}

fn unit_candidates() -> [Vec<Rational>; 3] {
    [vec![rat(1), rat(0)], vec![rat(0), rat(1)], vec![rat(1), rat(1)]]
}

/// Outcome of one pass: the normal form, or the factor by which to rescale
/// the first member so that the final square root becomes rational.
enum Pass {
    Done(NetNormalFormG15),
    Rescale(Rational),
}

/// Brings a general net of size 6 to the three-parameter normal form.
/// The roots of Pf(λA − μB) must be rational; the roots are tried in every
/// assignment to the three blocks until the square roots involved are rational.
pub fn net_normal_form_g15(net: &AntisymNet) -> Result<NetNormalFormG15> {
    if net.size() != 6 {
        return Err(Error::Dimension(format!("G(1,5) nets have size 6, got {}", net.size())));
    }
    let pencil = AntisymPencil { a: net.a.clone(), b: net.b.clone() };
    let roots = pencil_roots(&pencil)?;
    if roots.len() != 3 {
        return Err(Error::Generality(format!("expected 3 roots of the sub-pencil, found {}", roots.len())));
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut first_err = None;
    for p in PERMS {
        let r = [roots[p[0]].clone(), roots[p[1]].clone(), roots[p[2]].clone()];
        let mut kappa = Rational::one();
        for _ in 0..2 {
            match normal_form_for(net, &pencil, &r, &kappa) {
                Ok(Pass::Done(nf)) => return Ok(nf),
                Ok(Pass::Rescale(f)) => kappa *= f,
                Err(e) => {
                    first_err.get_or_insert(e);
                    break;
                }
            }
        }
    }
    Err(first_err.unwrap_or_else(|| Error::Generality("no rational normal form found".into())))
}

fn normal_form_for(net: &AntisymNet, pencil: &AntisymPencil, r: &[(Rational, Rational); 3], kappa_a: &Rational) -> Result<Pass> {
    let members: Vec<AntisymMatrix> = r.iter().map(|(l, m)| pencil.at(l, m)).collect();
    let mut cols = Vec::with_capacity(6);
    for (k, m) in members.iter().enumerate() {
        let ker = m.kernel();
        if ker.len() != 2 {
            return Err(Error::HighCorank { corank: ker.len(), lambda: format_rat(&r[k].0), mu: format_rat(&r[k].1) });
        }
        cols.extend(ker);
    }
    let p1 = RatMatrix::from_cols(&cols);
    if p1.det().is_zero() {
        return Err(Error::Generality("kernels of the degenerate members are not independent".into()));
    }

    // Scale the blocks so that the first and last members become A and B.
    let m3 = members[2].congruence(&p1);
    let m1 = members[0].congruence(&p1);
    let (a1, a2, b2, b3) = (block_coeff(&m3, 0), block_coeff(&m3, 1), block_coeff(&m1, 1), block_coeff(&m1, 2));
    if [&a1, &a2, &b2, &b3].iter().any(|x| x.is_zero()) {
        return Err(Error::Generality("pencil does not split into three blocks".into()));
    }
    let kappa_b = kappa_a * &a2 / &b2;
    let s = [(kappa_a * &a1).recip(), (kappa_a * &a2).recip(), (&kappa_b * &b3).recip()];
    let mut d2 = RatMatrix::identity(6);
    for (k, sk) in s.iter().enumerate() {
        d2[(2 * k + 1, 2 * k + 1)] = sk.clone();
    }
    let mut p = p1.mul(&d2);
    let row_a = vec![kappa_a * &r[2].0, -(kappa_a * &r[2].1), Rational::zero()];
    let row_b = vec![&kappa_b * &r[0].0, -(&kappa_b * &r[0].1), Rational::zero()];
    let a_nf = combine(net, &row_a).congruence(&p);
    let b_nf = combine(net, &row_b).congruence(&p);
    let (ta, tb) = target_ab();
    if a_nf != ta || b_nf != tb {
        return Err(Error::Generality("pencil does not split into three blocks".into()));
    }

    // Recenter C so that its diagonal blocks are 0, J, 0.
    let c1 = net.c.congruence(&p);
    let (k1, k2, k3) = (block_coeff(&c1, 0), block_coeff(&c1, 1), block_coeff(&c1, 2));
    let d = &k2 - &k1 - &k3;
    if d.is_zero() {
        return Err(Error::Generality("c2 - c1 - c3 = 0".into()));
    }
    let row_c: Vec<Rational> = (0..3)
        .map(|i| {
            let e = if i == 2 { Rational::one() } else { Rational::zero() };
            (e - &k1 * &row_a[i] - &k3 * &row_b[i]) / &d
        })
        .collect();
    let c2 = combine(net, &row_c).congruence(&p);

    // Normalize the off-diagonal blocks C₂₁ and C₃₂.
    let cm = c2.matrix();
    let (c21, c32) = (cm.block(2, 0, 2, 2), cm.block(4, 2, 2, 2));
    let (det21, det32) = (c21.det(), c32.det());
    if det21.is_zero() || det32.is_zero() {
        return Err(Error::Generality("C21 or C32 is singular".into()));
    }
    let alpha = sqrt_or_err(&det21)?;
    let beta = sqrt_or_err(&det32)?;
    let q1 = RatMatrix::diag_blocks(&[c21.inverse()?.scale(&alpha), RatMatrix::identity(2), c32.inverse()?.transpose().scale(&beta)]);
    p = p.mul(&q1);
    let c3 = combine(net, &row_c).congruence(&p);

    // Reduce C̄ to [[γ, δ], [0, γ]] by t ∈ SL(2).
    let cbar = c3.matrix().block(4, 0, 2, 2);
    let detc = cbar.det();
    if detc.is_zero() {
        return Err(Error::Generality("the block C-bar is singular".into()));
    }
    let g0 = sqrt_or_err(&detc)?;
    let Some((gamma, x)) = [g0.clone(), -g0.clone()].into_iter().find_map(|g| represent(&cbar, &g).map(|x| (g, x))) else {
        // Rescaling the first member by f turns q = ᵗxC̄x into q(x₀, f x₁)/f up to SL(2).
        let u = unit_candidates().into_iter().find(|u| !cbar.bilinear(u, u).is_zero());
        return match u {
            Some(u) => Ok(Pass::Rescale(&cbar.bilinear(&u, &u) / &g0)),
            None => Err(Error::Generality("the block C-bar is antisymmetric".into())),
        };
    };
    let cx = cbar.mul_vec(&x);
    let sys = RatMatrix::from_rows(vec![cx, vec![-x[1].clone(), x[0].clone()]]);
    let y = sys.solve(&[Rational::zero(), Rational::one()]).ok_or(Error::Singular)?;
    let t = RatMatrix::from_cols(&[x, y]);
    p = p.mul(&RatMatrix::diag_blocks(&[t.clone(), t.transpose().inverse()?, t]));
    let c_nf = combine(net, &row_c).congruence(&p);
    let delta = c_nf.matrix()[(4, 1)].clone();

    let target = net_g15_normal(&alpha, &beta, &gamma, &delta)?;
    let recombination = RatMatrix::from_rows(vec![row_a, row_b, row_c]);
    let got: Vec<AntisymMatrix> = (0..3).map(|i| combine(net, &recombination.row(i)).congruence(&p)).collect();
    if got[0] != target.a || got[1] != target.b || got[2] != target.c {
        return Err(Error::Generality("normal form verification failed".into()));
    }
    Ok(Pass::Done(NetNormalFormG15 { alpha, beta, gamma, delta, t: p.inverse()?, recombination }))
}

/// Pf(λA + μB + νC).
pub fn dual_cubic(net: &AntisymNet) -> HomogPoly {
    pfaffian_poly(&net.poly_matrix())
}

/// True iff the partial derivatives of a ternary cubic have no common zero.
pub fn cubic_smooth(cubic: &HomogPoly) -> Result<bool> {
    Ok(cubic_singular_points(cubic)?.is_none())
}

/// None for a smooth cubic; otherwise the rational singular points found
/// (possibly none, when every singular point is irrational).
pub fn cubic_singular_points(cubic: &HomogPoly) -> Result<Option<Vec<ProjPoint>>> {
    if cubic.is_zero() {
        return Err(Error::Invalid("zero polynomial".into()));
    }
    if cubic.nvars() != 3 || cubic.degree() != 3 {
        return Err(Error::Invalid("expected a ternary cubic".into()));
    }
    if let Some(i) = (0..3).find(|&i| cubic.partial(i).is_zero()) {
        // A cone; its vertex is singular.
        return Ok(Some(vec![ProjPoint::unit(3, i)]));
    }
    let partials: Vec<HomogPoly> = (0..3).map(|i| cubic.partial(i)).collect();
    match common_zeros(&partials) {
        Ok(z) if z.is_empty() => Ok(None),
        Ok(z) => Ok(Some(z.points.into_iter().map(|(p, _)| p).collect())),
        // Two partials share a component, which meets the third conic.
        Err(Error::Generality(_)) => Ok(Some(Vec::new())),
        Err(e) => Err(e),
    }
}

/// t = [[a, g(a−d)], [g(d−a), d]] with g = γ/δ.
pub fn g15_identity_t(normal: &NetNormalFormG15, a: &Rational, d: &Rational) -> Result<RatMatrix> {
    if normal.delta.is_zero() {
        return Err(Error::Invalid("delta must be nonzero".into()));
    }
    let g = &normal.gamma / &normal.delta;
    Ok(RatMatrix::from_rows(vec![vec![a.clone(), &g * (a - d)], vec![&g * (d - a), d.clone()]]))
}

/// The rational point of det t = 1 on the line through the identity with
/// slope k: a = 1 + p, d = 1 + kp.
pub fn g15_identity_param(normal: &NetNormalFormG15, k: &Rational) -> Result<RatMatrix> {
    if normal.delta.is_zero() {
        return Err(Error::Invalid("delta must be nonzero".into()));
    }
    let g = &normal.gamma / &normal.delta;
    let one = Rational::one();
    let denom = k + &g * &g * (&one - k) * (&one - k);
    if denom.is_zero() {
        return Err(Error::Invalid("slope gives no second intersection".into()));
    }
    let p = -(&one + k) / denom;
    g15_identity_t(normal, &(&one + &p), &(&one + k * &p))
}

/// Whether T = diag(t, ᵗt⁻¹, t) maps the span of the normal form to itself.
pub fn g15_identity_component_check(normal: &NetNormalFormG15, t: &RatMatrix) -> Result<bool> {
    if normal.delta.is_zero() {
        return Err(Error::Invalid("delta must be nonzero".into()));
    }
    if t.rows() != 2 || t.cols() != 2 || !t.det().is_one() {
        return Err(Error::Invalid("t must be a 2x2 matrix of determinant 1".into()));
    }
    let big = RatMatrix::diag_blocks(&[t.clone(), t.transpose().inverse()?, t.clone()]);
    let net = normal.normal_net()?;
    let basis = [net.a.clone(), net.b.clone(), net.c.clone()];
    for m in &basis {
        if crate::antisym::span_coords(&m.act(&big)?, &basis).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseCenterMap {
    pub components: Vec<HomogPoly>,
}

const QUAD_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

fn quad_coeffs(q: &HomogPoly) -> Vec<Rational> {
    QUAD_MONOMIALS.iter().map(|e| q.coeff(*e)).collect()
}

impl VeroneseCenterMap {
    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// 5×6 coefficient matrix in the monomials λ², λμ, λν, μ², μν, ν².
    pub fn coefficient_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.components.iter().map(quad_coeffs).collect())
    }

    /// (λA + μB + νC)·c ≡ 0.
    pub fn kernel_identity(&self, net: &AntisymNet) -> Result<bool> {
        crate::poly::poly_matrix_kernel_check(&net.poly_matrix(), &self.components)
    }
}

fn check_net5(net: &AntisymNet) -> Result<()> {
    if net.size() != 5 {
        return Err(Error::Dimension(format!("G(1,4) nets have size 5, got {}", net.size())));
    }
    if vec_rank(&[net.a.upper_vec(), net.b.upper_vec(), net.c.upper_vec()]) < 3 {
        return Err(Error::Dependent);
    }
    Ok(())
}

/// Kernel map (λ:μ:ν) ↦ ker(λA + μB + νC) of a general net of size 5.
pub fn veronese_center_map(net: &AntisymNet) -> Result<VeroneseCenterMap> {
    check_net5(net)?;
    let m = net.poly_matrix();
    let components: Vec<HomogPoly> = (0..5).map(|i| pfaffian_minor_poly(&m, i)).collect();
    let map = VeroneseCenterMap { components };
    let degenerate = |lambda: String, mu: String| Error::HighCorank { corank: 3, lambda, mu };
    if map.components.iter().filter(|c| !c.is_zero()).count() < 2 {
        return Err(degenerate("*".into(), "*".into()));
    }
    match common_zeros(&map.components) {
        Ok(z) if z.is_empty() => {}
        Ok(z) => {
            return Err(match z.points.first() {
                Some((p, _)) => {
                    let c = p.coords();
                    let x = [c[0].clone(), c[1].clone(), c[2].clone()];
                    Error::HighCorank {
                        corank: crate::antisym::corank(&net.at(&x)),
                        lambda: format_rat(&c[0]),
                        mu: format!("{}:{}", format_rat(&c[1]), format_rat(&c[2])),
                    }
                }
                None => degenerate("irrational".into(), "irrational".into()),
            })
        }
        Err(Error::Generality(_)) => return Err(degenerate("*".into(), "*".into())),
        Err(e) => return Err(e),
    }
    if map.coefficient_matrix().rank() < 5 {
        return Err(Error::Generality("center map components are linearly dependent".into()));
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApolarityData {
    /// The projection center, a conic in the dual plane.
    pub p_matrix: RatMatrix,
    /// Its inverse, the dual conic in the plane of the net.
    pub c_p_matrix: RatMatrix,
}

impl ApolarityData {
    pub fn conic(&self) -> Conic {
        Conic::new(self.c_p_matrix.clone()).expect("symmetric")
    }
}

/// Row r with Σ p_ij h_ij = r · (p00, p01, p02, p11, p12, p22).
fn trace_row(h: &RatMatrix) -> Vec<Rational> {
    let two = rat(2);
    vec![h[(0, 0)].clone(), &h[(0, 1)] * &two, &h[(0, 2)] * &two, h[(1, 1)].clone(), &h[(1, 2)] * &two, h[(2, 2)].clone()]
}

fn sym_from_coords(v: &[Rational]) -> RatMatrix {
    let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    RatMatrix::from_fn(3, 3, |i, j| v[idx[i][j]].clone())
}

fn quadric_matrix(q: &HomogPoly) -> Result<RatMatrix> {
    Ok(Conic::from_quadric(q)?.matrix().clone())
}

/// The symmetric P annihilating every component under the trace pairing.
pub fn apolarity_data(map: &VeroneseCenterMap) -> Result<ApolarityData> {
    let rows = map.components.iter().map(|c| quadric_matrix(c).map(|h| trace_row(&h))).collect::<Result<Vec<_>>>()?;
    let ann = RatMatrix::from_rows(rows).nullspace();
    if ann.len() != 1 {
        return Err(Error::Generality(format!("annihilator has dimension {}", ann.len())));
    }
    let p = sym_from_coords(&ann[0]).normalized();
    if p.det().is_zero() {
        return Err(Error::Generality("projection center lies on the secant variety".into()));
    }
    let c_p = p.inverse()?;
    Ok(ApolarityData { p_matrix: p, c_p_matrix: c_p })
}

/// A net of size 5 whose center map parametrizes the projection of the
/// Veronese surface from the nonsingular symmetric P.
pub fn net_from_projection(p: &RatMatrix) -> Result<AntisymNet> {
    if p.rows() != 3 || p.cols() != 3 || !p.is_symmetric() {
        return Err(Error::Invalid("P must be a symmetric 3x3 matrix".into()));
    }
    if p.det().is_zero() {
        return Err(Error::Singular);
    }
    let quads: Vec<HomogPoly> = RatMatrix::from_rows(vec![trace_row(p)])
        .nullspace()
        .iter()
        .map(|v| {
            let h = sym_from_coords(v);
            Conic::new(h).expect("symmetric").to_quadric()
        })
        .collect();
    net_from_quadrics(&quads)
}

/// Solves (λA + μB + νC)·c ≡ 0 for the net, given five quadrics c.
pub fn net_from_quadrics(quads: &[HomogPoly]) -> Result<AntisymNet> {
    if quads.len() != 5 {
        return Err(Error::Dimension("need five quadrics".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let unknown = |k: usize, i: usize, j: usize| -> (usize, Rational) {
        let (a, b, s) = if i < j { (i, j, rat(1)) } else { (j, i, rat(-1)) };
        (k * 10 + pairs.iter().position(|&x| x == (a, b)).expect("pair"), s)
    };
    let cubics: Vec<[u32; 3]> = (0..=3u32).flat_map(|a| (0..=3 - a).map(move |b| [a, b, 3 - a - b])).collect();
    let mut rows = Vec::new();
    for r in 0..5 {
        for e in &cubics {
            let mut row = vec![Rational::zero(); 30];
            for k in 0..3 {
                if e[k] == 0 {
                    continue;
                }
                let mut f = *e;
                f[k] -= 1;
                for (j, q) in quads.iter().enumerate() {
                    if j == r {
                        continue;
                    }
                    let c = q.coeff(f);
                    if c.is_zero() {
                        continue;
                    }
                    let (idx, s) = unknown(k, r, j);
                    row[idx] += s * c;
                }
            }
            rows.push(row);
        }
    }
    let ns = RatMatrix::from_rows(rows).nullspace();
    if ns.len() != 1 {
        return Err(Error::Generality(format!("expected a unique net, solution space has dimension {}", ns.len())));
    }
    let v = &ns[0];
    let mats: Vec<AntisymMatrix> = (0..3).map(|k| AntisymMatrix::from_upper_vec(5, &v[10 * k..10 * k + 10])).collect();
    AntisymNet::new(mats[0].clone(), mats[1].clone(), mats[2].clone())
}

/// How a line meets the projected Veronese surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceIntersection {
    /// Parameters in the plane of the net, counted with multiplicity.
    pub degree: usize,
    pub distinct: usize,
    /// Rational parameters with multiplicities.
    pub points: Vec<(ProjPoint, usize)>,
}

impl SurfaceIntersection {
    pub fn kind(&self) -> &'static str {
        match (self.degree, self.distinct) {
            (3, 3) => "three-points",
            (3, 2) => "tangent-point",
            (3, 1) => "triple",
            (0, _) => "none",
            _ => "partial",
        }
    }

    /// The parameters as a triangle, when all of them are rational.
    pub fn triangle(&self) -> Option<Result<Triangle>> {
        if self.degree != 3 || self.points.iter().map(|p| p.1).sum::<usize>() != 3 {
            return None;
        }
        let mut v: Vec<ProjPoint> = Vec::new();
        for (p, m) in &self.points {
            v.extend(std::iter::repeat_n(p.clone(), *m));
        }
        if self.distinct == 1 {
            return None;
        }
        // Doubled vertex first.
        if self.distinct == 2 && v[0] != v[1] {
            v.rotate_left(1);
        }
        Some(Triangle::new(v[0].clone(), v[1].clone(), v[2].clone()))
    }
}

/// Points of P₂ whose centers lie on the line.
pub fn surface_intersection(line: &LineRep, map: &VeroneseCenterMap) -> Result<SurfaceIntersection> {
    if line.ambient() != 5 {
        return Err(Error::Dimension("line must lie in P_4".into()));
    }
    let hyper = RatMatrix::from_rows(vec![primitive_vec(line.p.coords()), primitive_vec(line.q.coords())]).nullspace();
    let conics: Vec<HomogPoly> = hyper
        .iter()
        .map(|h| {
            let h = primitive_vec(h);
            map.components.iter().zip(&h).fold(HomogPoly::zero(3), |acc, (c, hi)| acc.add(&c.scale(hi))).primitive()
        })
        .collect();
    let z = common_zeros(&conics)?;
    Ok(SurfaceIntersection { degree: z.degree, distinct: z.distinct, points: z.points })
}

/// The image line of two distinct parameter points.
pub fn image_line(map: &VeroneseCenterMap, x: &ProjPoint, y: &ProjPoint) -> Result<LineRep> {
    LineRep::from_vecs(primitive_vec(&map.eval(x.coords())), primitive_vec(&map.eval(y.coords())))
}

pub fn net_section(net: &AntisymNet) -> Result<SectionSpec> {
    SectionSpec::new(net.size() - 1, vec![net.a.clone(), net.b.clone(), net.c.clone()])
}

/// Membership of a line in the section G(1,4) ∩ L, cross-checked against
/// its intersection with the surface of centers: every line meeting the
/// surface three times lies in the section, and rational intersection
/// parameters form a polar triangle of C_P.
pub fn trisecant_test(line: &LineRep, net: &AntisymNet) -> Result<bool> {
    let inside = line_in_section(line, &net_section(net)?)?;
    let map = veronese_center_map(net)?;
    let apol = apolarity_data(&map)?;
    let meet = surface_intersection(line, &map)?;
    if meet.degree >= 3 && !inside {
        return Err(Error::Invalid("a trisecant outside the section".into()));
    }
    if inside && meet.degree != 3 {
        return Err(Error::Invalid(format!("section line meets the surface {} times", meet.degree)));
    }
    if inside {
        let conic = apol.conic();
        let consistent = match meet.triangle() {
            Some(t) => is_polar_triangle(&conic, &t?)?,
            None if meet.distinct == 1 && meet.points.len() == 1 => conic.contains(&meet.points[0].0),
            None => true,
        };
        if !consistent {
            return Err(Error::Invalid("intersection parameters are not a polar triangle".into()));
        }
    }
    Ok(inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisym::corank;
    use crate::normal_forms::normal_net_cubic;
    use crate::polar::random_polar_triangle;
    use crate::random::{random_unimodular, seeded};
    use crate::testutil::{random_antisym, random_vec};
    use rand::Rng;

    fn nf(a: i64, b: i64, g: i64, d: i64) -> AntisymNet {
        net_g15_normal(&rat(a), &rat(b), &rat(g), &rat(d)).unwrap()
    }

    fn conjugate(net: &AntisymNet, t0: &RatMatrix, r: &RatMatrix) -> AntisymNet {
        let rows: Vec<AntisymMatrix> = (0..3).map(|i| combine(net, &r.row(i)).act(t0).unwrap()).collect();
        AntisymNet::new(rows[0].clone(), rows[1].clone(), rows[2].clone()).unwrap()
    }

    /// Linear forms Σ_j m_ji y_j, i.e. the substitution x = ᵗM y.
    fn transposed_forms(m: &RatMatrix) -> Vec<HomogPoly> {
        (0..3).map(|i| (0..3).fold(HomogPoly::zero(3), |acc, j| acc.add(&HomogPoly::var(3, j).scale(&m[(j, i)])))).collect()
    }

    fn proportional(f: &HomogPoly, g: &HomogPoly) -> bool {
        let Some((e, c)) = g.terms().iter().next() else { return f.is_zero() };
        let s = f.coeff(*e) / c;
        !s.is_zero() && f == &g.scale(&s)
    }

    #[test]
    fn dual_cubic_is_minus_normal_net_cubic() {
        let mut rng = seeded(41);
        for _ in 0..25 {
            let v: Vec<Rational> = (0..4).map(|_| rat(rng.gen_range(-9..=9))).collect();
            let Ok(net) = net_g15_normal(&v[0], &v[1], &v[2], &v[3]) else { continue };
            assert_eq!(dual_cubic(&net), normal_net_cubic(&v[0], &v[1], &v[2], &v[3]).neg());
        }
    }

    #[test]
    fn normal_input_is_fixed() {
        let net = nf(1, 1, 2, 3);
        let r = net_normal_form_g15(&net).unwrap();
        assert_eq!((r.alpha.clone(), r.beta.clone(), r.gamma.clone(), r.delta.clone()), (rat(1), rat(1), rat(2), rat(3)));
        assert_eq!(r.t, RatMatrix::identity(6));
        assert_eq!(r.recombination, RatMatrix::identity(3));
    }

    #[test]
    fn round_trip_through_conjugation() {
        let mut rng = seeded(42);
        let net = nf(1, 1, 2, 3);
        for _ in 0..5 {
            let t0 = random_unimodular(&mut rng, 6, 2);
            let r0 = RatMatrix::from_i64(&[
                vec![rng.gen_range(1..4), rng.gen_range(-3..4), 0],
                vec![rng.gen_range(-3..4), rng.gen_range(1..4), 0],
                vec![rng.gen_range(-3..4), rng.gen_range(-3..4), 1],
            ]);
            if r0.det().is_zero() {
                continue;
            }
            let input = conjugate(&net, &t0, &r0);
            let got = net_normal_form_g15(&input).unwrap();
            let back = conjugate(&input, &got.t, &got.recombination);
            assert_eq!(back, got.normal_net().unwrap());
            let pulled = dual_cubic(&input).compose_linear(&transposed_forms(&got.recombination));
            assert!(proportional(&pulled, &normal_net_cubic(&got.alpha, &got.beta, &got.gamma, &got.delta)));
        }
    }

    #[test]
    fn singular_block_is_rejected() {
        let net = nf(0, 1, 2, 3);
        assert!(matches!(net_normal_form_g15(&net), Err(Error::Generality(_))));
    }

    #[test]
    fn smoothness() {
        let x = |i| HomogPoly::var(3, i);
        let fermat = x(0).pow(3).add(&x(1).pow(3)).add(&x(2).pow(3));
        assert!(cubic_smooth(&fermat).unwrap());
        assert!(!cubic_smooth(&x(0).pow(2).mul(&x(1))).unwrap());
        assert!(cubic_smooth(&normal_net_cubic(&rat(1), &rat(1), &rat(2), &rat(3))).unwrap());
        assert!(!cubic_smooth(&normal_net_cubic(&rat(0), &rat(0), &rat(0), &rat(0))).unwrap());
        // Nodal cubic y²z = x³ + x²z, node at (0:0:1).
        let nodal = x(1).pow(2).mul(&x(2)).sub(&x(0).pow(3)).sub(&x(0).pow(2).mul(&x(2)));
        let pts = cubic_singular_points(&nodal).unwrap().unwrap();
        assert_eq!(pts, vec![ProjPoint::unit(3, 2)]);
        assert!(cubic_smooth(&HomogPoly::zero(3)).is_err());
    }

    #[test]
    fn identity_component() {
        let normal = net_normal_form_g15(&nf(1, 1, 2, 3)).unwrap();
        assert!(g15_identity_component_check(&normal, &RatMatrix::identity(2)).unwrap());
        for k in [-3, 2, 5, 7] {
            let t = g15_identity_param(&normal, &rat(k)).unwrap();
            assert_eq!(t.det(), rat(1));
            assert!(g15_identity_component_check(&normal, &t).unwrap());
        }
        let shear = RatMatrix::from_i64(&[vec![1, 1], vec![0, 1]]);
        assert!(!g15_identity_component_check(&normal, &shear).unwrap());
        assert!(g15_identity_component_check(&normal, &RatMatrix::from_i64(&[vec![2, 0], vec![0, 1]])).is_err());
    }

    fn random_net5(seed: u64) -> AntisymNet {
        let mut rng = seeded(seed);
        AntisymNet::new(random_antisym(&mut rng, 5, 5), random_antisym(&mut rng, 5, 5), random_antisym(&mut rng, 5, 5)).unwrap()
    }

    #[test]
    fn veronese_kernel_identity() {
        for s in 0..3 {
            let net = random_net5(100 + s);
            let map = veronese_center_map(&net).unwrap();
            assert!(map.kernel_identity(&net).unwrap());
            assert_eq!(map.coefficient_matrix().rank(), 5);
            let apol = apolarity_data(&map).unwrap();
            for c in &map.components {
                let h = quadric_matrix(c).unwrap();
                assert!(crate::polar::trace_pairing(&apol.p_matrix, &h).is_zero());
            }
        }
    }

    #[test]
    fn degenerate_net_rejected() {
        let net = random_net5(7);
        let bad = AntisymNet { a: net.a.clone(), b: net.a.clone(), c: net.c.clone() };
        assert!(veronese_center_map(&bad).is_err());
    }

    #[test]
    fn projection_from_identity() {
        let net = net_from_projection(&RatMatrix::identity(3)).unwrap();
        let map = veronese_center_map(&net).unwrap();
        let apol = apolarity_data(&map).unwrap();
        assert_eq!(apol.p_matrix, RatMatrix::identity(3));
        assert_eq!(apol.c_p_matrix, RatMatrix::identity(3));
    }

    #[test]
    fn singular_center_rejected() {
        let p = RatMatrix::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]);
        let quads: Vec<HomogPoly> = RatMatrix::from_rows(vec![trace_row(&p)])
            .nullspace()
            .iter()
            .map(|v| Conic::new(sym_from_coords(v)).unwrap().to_quadric())
            .collect();
        let map = VeroneseCenterMap { components: quads };
        assert!(matches!(apolarity_data(&map), Err(Error::Generality(_))));
        assert!(net_from_projection(&p).is_err());
    }

    #[test]
    fn polar_triangles_give_trisecants() {
        let net = random_net5(11);
        let map = veronese_center_map(&net).unwrap();
        let conic = apolarity_data(&map).unwrap().conic();
        let mut rng = seeded(12);
        for _ in 0..5 {
            let t = random_polar_triangle(&mut rng, &conic, 6).unwrap();
            let pts: Vec<Vec<Rational>> = t.vertices().iter().map(|v| map.eval(v.coords())).collect();
            assert_eq!(vec_rank(&pts), 2);
            let line = image_line(&map, &t.p, &t.q).unwrap();
            assert!(trisecant_test(&line, &net).unwrap());
            let meet = surface_intersection(&line, &map).unwrap();
            assert_eq!(meet.kind(), "three-points");
            assert_eq!(meet.points.len(), 3);
        }
    }

    #[test]
    fn generic_lines_are_not_trisecants() {
        let net = random_net5(13);
        let map = veronese_center_map(&net).unwrap();
        let mut rng = seeded(14);
        for _ in 0..3 {
            let line = LineRep::from_vecs(random_vec(&mut rng, 5, 9), random_vec(&mut rng, 5, 9)).unwrap();
            assert!(!trisecant_test(&line, &net).unwrap());
            assert!(surface_intersection(&line, &map).unwrap().degree < 3);
        }
        // One center and a generic point.
        let x = ProjPoint::new(vec![rat(1), rat(2), rat(-1)]).unwrap();
        let line = LineRep::from_vecs(map.eval(x.coords()), random_vec(&mut rng, 5, 9)).unwrap();
        assert_eq!(trisecant_test(&line, &net).unwrap(), line_in_section(&line, &net_section(&net).unwrap()).unwrap());
        assert_eq!(surface_intersection(&line, &map).unwrap().degree, 1);
        assert_eq!(corank(&net.at(&[rat(1), rat(2), rat(-1)])), 1);
    }
}
