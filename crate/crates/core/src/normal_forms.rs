//! The explicit normal-form matrices used as generators and as targets.

use crate::antisym::{j_block, AntisymMatrix, AntisymNet, AntisymPencil};
use crate::error::Result;
use crate::matrix::RatMatrix;
use crate::poly::HomogPoly;
use crate::rational::{rat, Rational};

/// A = diag(J,…,J), B = diag(λ₁J,…,λₙJ).
pub fn odd_pencil_normal(lambdas: &[Rational]) -> AntisymPencil {
    let a: Vec<RatMatrix> = lambdas.iter().map(|_| j_block()).collect();
    let b: Vec<RatMatrix> = lambdas.iter().map(|l| j_block().scale(l)).collect();
    AntisymPencil {
        a: AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&a)).expect("antisymmetric"),
        b: AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&b)).expect("antisymmetric"),
    }
}

/// [[0, −E],[E, 0]] of size 2n.
pub fn symplectic_form(n: usize) -> AntisymMatrix {
    let mut a = AntisymMatrix::zeros(2 * n);
    for i in 0..n {
        a.set(i, n + i, rat(-1));
    }
    a
}

/// The symplectic form padded by a zero row and column; center e_{2n}.
pub fn hyperplane_even_normal(n: usize) -> AntisymMatrix {
    let mut a = AntisymMatrix::zeros(2 * n + 1);
    for i in 0..n {
        a.set(i, n + i, rat(-1));
    }
    a
}

/// The pair of size 2n+1 whose center curve is (0,…,0,μⁿ,μⁿ⁻¹λ,…,λⁿ).
pub fn even_pencil_normal(n: usize) -> AntisymPencil {
    let size = 2 * n + 1;
    let a = hyperplane_even_normal(n);
    let mut b = AntisymMatrix::zeros(size);
    for i in 0..n {
        b.set(i, n + 1 + i, rat(-1));
    }
    AntisymPencil { a, b }
}

/// The three matrices of the G(1,5) net normal form.
pub fn net_g15_normal(alpha: &Rational, beta: &Rational, gamma: &Rational, delta: &Rational) -> Result<AntisymNet> {
    let j = j_block();
    let z = RatMatrix::zeros(2, 2);
    let a = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[j.clone(), j.clone(), z.clone()]))?;
    let b = AntisymMatrix::from_matrix(RatMatrix::diag_blocks(&[z, j.clone(), j]))?;
    let mut c = AntisymMatrix::zeros(6);
    c.set(0, 2, -alpha.clone());
    c.set(1, 3, -alpha.clone());
    c.set(0, 4, -gamma.clone());
    c.set(1, 4, -delta.clone());
    c.set(1, 5, -gamma.clone());
    c.set(2, 3, rat(-1));
    c.set(2, 4, -beta.clone());
    c.set(3, 5, -beta.clone());
    AntisymNet::new(a, b, c)
}

/// λ²μ + μ²λ + λμν − (γ²+β²)λν² − (α²+γ²)μν² + (αβδ − γ²)ν³
pub fn normal_net_cubic(alpha: &Rational, beta: &Rational, gamma: &Rational, delta: &Rational) -> HomogPoly {
    let g2 = gamma * gamma;
    let terms = vec![
        ([2, 1, 0], rat(1)),
        ([1, 2, 0], rat(1)),
        ([1, 1, 1], rat(1)),
        ([1, 0, 2], -(&g2 + beta * beta)),
        ([0, 1, 2], -(alpha * alpha + &g2)),
        ([0, 0, 3], alpha * beta * delta - &g2),
    ];
    HomogPoly::from_terms(3, terms).expect("homogeneous")
}
