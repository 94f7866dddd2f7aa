//! Normal forms of pencils of antisymmetric matrices.

use num_traits::{One, Zero};

use crate::antisym::{pfaffian_poly, AntisymPencil};
use crate::error::{Error, Result};
use crate::grassmann::center_curve;
use crate::matrix::{vec_rank, RatMatrix};
use crate::normal_forms::{even_pencil_normal, odd_pencil_normal};
use crate::poly::HomogPoly;
use crate::rational::{format_rat, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilNormalFormOdd {
    /// Roots λᵢ of Pf(λA' − B), ascending, where A' = A − shift·B.
    pub lambdas: Vec<Rational>,
    pub t: RatMatrix,
    /// Zero unless A itself was degenerate.
    pub shift: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilNormalFormEven {
    pub t: RatMatrix,
}

/// Pf(λA − μB).
pub fn pfaffian_binary(pencil: &AntisymPencil) -> HomogPoly {
    pfaffian_poly(&pencil.poly_matrix())
}

/// Basis change bringing a general pencil of size 2n to
/// A = diag(J,…,J), B = diag(λ₁J,…,λₙJ).
pub fn donagi_normal_form(pencil: &AntisymPencil) -> Result<PencilNormalFormOdd> {
    let size = pencil.size();
    if size % 2 == 1 || size == 0 {
        return Err(Error::Dimension(format!("odd normal form needs even size, got {size}")));
    }
    let f = pfaffian_binary(pencil);
    if f.is_zero() {
        return Err(Error::Generality("every member of the pencil is degenerate".into()));
    }
    let (roots, irr) = f.binary_roots();
    for ((l, m), _) in &roots {
        let k = pencil.at(l, m).kernel().len();
        if k > 2 {
            return Err(Error::HighCorank { corank: k, lambda: format_rat(l), mu: format_rat(m) });
        }
    }
    if roots.iter().any(|(_, mult)| *mult > 1) {
        return Err(Error::RepeatedRoot);
    }
    if !irr.is_empty() {
        return Err(Error::IrrationalRoot(irr));
    }
    let at_infinity = roots.iter().any(|((_, m), _)| m.is_zero());
    let mut shift = Rational::zero();
    if at_infinity {
        let mut s = 1i64;
        while roots.iter().any(|((l, m), _)| *m == l * rat(s)) {
            s += 1;
        }
        shift = rat(s);
    }
    let a = pencil.a.sub(&pencil.b.scale(&shift));
    let b = &pencil.b;
    // (λ:μ) ↦ (λ : μ − sλ), then λᵢ = λ/μ.
    let mut lambdas: Vec<Rational> = roots.iter().map(|((l, m), _)| l / (m - &shift * l)).collect();
    lambdas.sort();
    let mut cols = Vec::with_capacity(size);
    for li in &lambdas {
        let k = a.scale(li).sub(b).kernel();
        if k.len() != 2 {
            return Err(Error::HighCorank { corank: k.len(), lambda: format_rat(li), mu: "1".into() });
        }
        let pairing = a.matrix().bilinear(&k[0], &k[1]);
        if pairing.is_zero() {
            return Err(Error::Generality("first member is degenerate on a kernel block".into()));
        }
        let s = -Rational::one() / pairing;
        cols.push(k[0].clone());
        cols.push(k[1].iter().map(|x| x * &s).collect());
    }
    let p = RatMatrix::from_cols(&cols);
    let t = p.inverse()?;
    let target = odd_pencil_normal(&lambdas);
    if a.congruence(&p) != target.a || b.congruence(&p) != target.b {
        return Err(Error::Generality("kernel blocks do not split the pencil".into()));
    }
    Ok(PencilNormalFormOdd { lambdas, t, shift })
}

/// Symmetric t of size n+1 with first row and last column zero and
/// t_{i+1,j} − t_{i,j+1} = b̃_ij, built by the downward recursion on j.
pub fn step3_symmetric(btilde: &RatMatrix) -> RatMatrix {
    let n = btilde.rows();
    let mut t = RatMatrix::zeros(n + 1, n + 1);
    for j in (1..n).rev() {
        for i in 0..j {
            let v = &t[(i, j + 1)] + &btilde[(i, j)];
            t[(i + 1, j)] = v.clone();
            t[(j, i + 1)] = v;
        }
    }
    t
}

/// Basis change bringing a pencil of size 2n+1 with corank-1 members
/// to the pair with symplectic A and shifted B.
pub fn even_pencil_normal_form(pencil: &AntisymPencil) -> Result<PencilNormalFormEven> {
    let size = pencil.size();
    if size.is_multiple_of(2) || size < 3 {
        return Err(Error::Dimension(format!("even normal form needs odd size ≥ 3, got {size}")));
    }
    let n = (size - 1) / 2;
    let a = pencil.a.matrix();
    let b = pencil.b.matrix();

    // Step 1: coefficient vectors of the center curve, e_{n+k} ↔ λᵏμⁿ⁻ᵏ.
    let curve = center_curve(pencil)?;
    let mut e: Vec<Vec<Rational>> = vec![Vec::new(); size];
    for k in 0..=n {
        e[n + k] = curve.iter().map(|c| c.coeff([k as u32, (n - k) as u32, 0])).collect();
    }
    if vec_rank(&e[n..]) != n + 1 {
        return Err(Error::Generality("center curve is degenerate".into()));
    }

    // Step 2: ᵗe_{n+i} A e_k = δ_ik and ᵗe_j A e_k = 0 for j < k.
    let curve_rows: Vec<Vec<Rational>> = (0..n).map(|i| a.vec_mul(&e[n + i])).collect();
    for k in 0..n {
        let mut rows = curve_rows.clone();
        let mut rhs: Vec<Rational> = (0..n).map(|i| if i == k { rat(1) } else { rat(0) }).collect();
        for j in 0..k {
            rows.push(a.vec_mul(&e[j]));
            rhs.push(rat(0));
        }
        e[k] = RatMatrix::from_rows(rows).solve(&rhs).ok_or_else(|| Error::Generality("basis cannot be extended".into()))?;
    }

    // Step 3: remove the upper-left block of B.
    let btilde = RatMatrix::from_fn(n, n, |i, j| b.bilinear(&e[i], &e[j]));
    let t = step3_symmetric(&btilde);
    for j in 0..n {
        let mut v = e[j].clone();
        for m in 0..=n {
            if !t[(m, j)].is_zero() {
                for (x, y) in v.iter_mut().zip(&e[n + m]) {
                    *x += &t[(m, j)] * y;
                }
            }
        }
        e[j] = v;
    }

    let p = RatMatrix::from_cols(&e);
    let tm = p.inverse().map_err(|_| Error::Generality("constructed vectors are dependent".into()))?;
    let target = even_pencil_normal(n);
    if pencil.a.congruence(&p) != target.a || pencil.b.congruence(&p) != target.b {
        return Err(Error::Generality("normal form verification failed".into()));
    }
    Ok(PencilNormalFormEven { t: tm })
}

/// Applies the coordinate change: (ᵗT⁻¹AT⁻¹, ᵗT⁻¹BT⁻¹).
pub fn transform_pencil(pencil: &AntisymPencil, t: &RatMatrix) -> Result<AntisymPencil> {
    AntisymPencil::new(pencil.a.act(t)?, pencil.b.act(t)?)
}

/// The shifted first member A − sB.
pub fn shifted(pencil: &AntisymPencil, s: &Rational) -> AntisymPencil {
    AntisymPencil { a: pencil.a.sub(&pencil.b.scale(s)), b: pencil.b.clone() }
}

/// Cross-ratio (a,b;c,d) = ((c−a)(d−b))/((c−b)(d−a)).
pub fn cross_ratio(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Option<Rational> {
    let den = (c - b) * (d - a);
    if den.is_zero() {
        return None;
    }
    Some((c - a) * (d - b) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisym::AntisymMatrix;
    use crate::random::{random_antisym, random_invertible, random_vec, seeded};
    use crate::rational::frac;

    fn lin(a: i64, b: i64) -> HomogPoly {
        HomogPoly::var(2, 0).scale(&rat(a)).sub(&HomogPoly::var(2, 1).scale(&rat(b)))
    }

    #[test]
    fn pfaffian_of_normal_form() {
        let p = odd_pencil_normal(&[rat(2), rat(3), rat(5)]);
        let want = lin(1, 2).mul(&lin(1, 3)).mul(&lin(1, 5)).neg();
        assert_eq!(pfaffian_binary(&p), want);
        let same = AntisymPencil::new(p.a.clone(), p.a.clone()).unwrap();
        assert_eq!(pfaffian_binary(&same), lin(1, 1).pow(3).neg());
    }

    #[test]
    fn pfaffian_scales_by_det() {
        let mut rng = seeded(21);
        let p = AntisymPencil::new(random_antisym(&mut rng, 6, 9), random_antisym(&mut rng, 6, 9)).unwrap();
        let t = random_invertible(&mut rng, 6, 4).unwrap();
        assert_eq!(pfaffian_binary(&p.congruence(&t)), pfaffian_binary(&p).scale(&t.det()));
    }

    #[test]
    fn fixed_point_of_odd_form() {
        let p = odd_pencil_normal(&[rat(2), rat(3), rat(5)]);
        let nf = donagi_normal_form(&p).unwrap();
        assert_eq!(nf.lambdas, vec![rat(2), rat(3), rat(5)]);
        assert_eq!(nf.t, RatMatrix::identity(6));
    }

    #[test]
    fn odd_round_trip() {
        let mut rng = seeded(22);
        for lambdas in [vec![rat(2), rat(3), rat(5)], vec![frac(-1, 2), rat(0), rat(4), rat(7)]] {
            let p = odd_pencil_normal(&lambdas);
            let t0 = random_invertible(&mut rng, p.size(), 5).unwrap();
            let q = transform_pencil(&p, &t0).unwrap();
            let nf = donagi_normal_form(&q).unwrap();
            assert_eq!(nf.lambdas, lambdas);
            let back = transform_pencil(&q, &nf.t).unwrap();
            assert_eq!(back, odd_pencil_normal(&lambdas));
        }
    }

    #[test]
    fn cross_ratio_under_moebius() {
        let roots = [rat(0), rat(1), rat(2), rat(7)];
        let p = odd_pencil_normal(&roots);
        // Replace (A, B) by (2A + B, A − 3B): a Möbius change of L*.
        let q = AntisymPencil::new(p.a.scale(&rat(2)).add(&p.b), p.a.sub(&p.b.scale(&rat(3)))).unwrap();
        let mut rng = seeded(23);
        let t0 = random_invertible(&mut rng, 8, 5).unwrap();
        let nf = donagi_normal_form(&transform_pencil(&q, &t0).unwrap()).unwrap();
        let cr_in = cross_ratio(&roots[0], &roots[1], &roots[2], &roots[3]).unwrap();
        let l = &nf.lambdas;
        let found: Vec<Rational> = permutations4().iter().filter_map(|p| cross_ratio(&l[p[0]], &l[p[1]], &l[p[2]], &l[p[3]])).collect();
        assert!(found.contains(&cr_in));
    }

    fn permutations4() -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = [a, b, c, d];
                        if (0..4).all(|x| v.contains(&x)) {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn odd_errors() {
        let p = odd_pencil_normal(&[rat(2), rat(2), rat(5)]);
        assert_eq!(donagi_normal_form(&p), Err(Error::HighCorank { corank: 4, lambda: "2".into(), mu: "1".into() }));
        // Pf(λA − μB) = λ² + 2μ² has no rational root.
        let a = odd_pencil_normal(&[rat(0), rat(0)]).a;
        let mut b = AntisymMatrix::zeros(4);
        b.set(0, 3, rat(1));
        b.set(1, 2, rat(2));
        let a = AntisymPencil::new(a, b).unwrap();
        match donagi_normal_form(&a) {
            Err(Error::IrrationalRoot(d)) => assert_eq!(d, vec![2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn root_at_infinity_uses_shift() {
        let p = odd_pencil_normal(&[rat(0), rat(1), rat(3)]);
        // Swap the roles of A and B: roots become ∞, 1, 1/3.
        let q = AntisymPencil::new(p.b.clone(), p.a.clone()).unwrap();
        let nf = donagi_normal_form(&q).unwrap();
        assert_eq!(nf.shift, rat(2));
        let back = transform_pencil(&shifted(&q, &nf.shift), &nf.t).unwrap();
        assert_eq!(back, odd_pencil_normal(&nf.lambdas));
    }

    #[test]
    fn step3_recursion() {
        let mut rng = seeded(24);
        for n in 1..=6 {
            let bt = random_antisym(&mut rng, n, 9);
            let t = step3_symmetric(bt.matrix());
            assert!(t.is_symmetric());
            let tbar = RatMatrix::from_fn(n, n, |i, j| t[(i + 1, j)].clone());
            let tbar_left = RatMatrix::from_fn(n, n, |i, j| t[(i, j + 1)].clone());
            assert_eq!(tbar.sub(&tbar_left), bt.matrix().clone());
        }
    }

    #[test]
    fn even_round_trip() {
        let mut rng = seeded(25);
        for n in 1..=4 {
            let p = even_pencil_normal(n);
            let nf = even_pencil_normal_form(&p).unwrap();
            assert!(nf.t.sub(&RatMatrix::scalar(2 * n + 1, &nf.t[(0, 0)])).is_zero());
            let t0 = random_invertible(&mut rng, 2 * n + 1, 5).unwrap();
            let q = transform_pencil(&p, &t0).unwrap();
            let nf = even_pencil_normal_form(&q).unwrap();
            assert_eq!(transform_pencil(&q, &nf.t).unwrap(), p);
        }
    }

    #[test]
    fn even_rejects_high_corank() {
        let mut p = even_pencil_normal(2);
        p.b = AntisymMatrix::zeros(5);
        p.b.set(0, 1, rat(1));
        assert!(matches!(even_pencil_normal_form(&p), Err(Error::HighCorank { .. })));
    }

    #[test]
    fn normal_form_preserves_membership() {
        let mut rng = seeded(26);
        let p = even_pencil_normal(2);
        let t0 = random_invertible(&mut rng, 5, 5).unwrap();
        let q = transform_pencil(&p, &t0).unwrap();
        let nf = even_pencil_normal_form(&q).unwrap();
        let s_q = crate::grassmann::SectionSpec::new(4, vec![q.a.clone(), q.b.clone()]).unwrap();
        let s_p = crate::grassmann::SectionSpec::new(4, vec![p.a.clone(), p.b.clone()]).unwrap();
        for _ in 0..10 {
            let x = random_vec(&mut rng, 5, 5);
            // Complete x to a section line through the solution space of ᵗxAᵢy = 0.
            let rows = RatMatrix::from_rows(vec![q.a.matrix().vec_mul(&x), q.b.matrix().vec_mul(&x)]);
            let y = rows.nullspace().into_iter().find(|y| vec_rank(&[x.clone(), y.clone()]) == 2).unwrap();
            let line = crate::grassmann::LineRep::from_vecs(x.clone(), y.clone()).unwrap();
            assert!(crate::grassmann::line_in_section(&line, &s_q).unwrap());
            let image = crate::grassmann::LineRep::from_vecs(nf.t.mul_vec(&x), nf.t.mul_vec(&y)).unwrap();
            assert!(crate::grassmann::line_in_section(&image, &s_p).unwrap());
        }
    }
}
