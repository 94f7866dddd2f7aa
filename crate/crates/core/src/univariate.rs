//! Dense univariate polynomials over Q: division, gcd, rational roots and
//! factor degrees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denom, rat, Rational};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rational>);

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    /// The linear polynomial a·x − b.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![-b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rational) -> UniPoly {
        Self::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.primitive_rat();
        }
        a.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = common_denom(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(d.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    fn primitive_rat(&self) -> UniPoly {
        Self::new(self.primitive_int().into_iter().map(Rational::from_integer).collect())
    }

    pub fn squarefree(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.primitive_rat()
    }

    /// Sturm sequence with primitive integer members, scaled by positive factors.
    fn sturm_chain(&self) -> Vec<Vec<BigInt>> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].divrem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&rat(-1)).positive_primitive());
        }
        chain.iter().map(|p| p.positive_primitive().0.iter().map(|c| c.to_integer()).collect()).collect()
    }

    fn positive_primitive(&self) -> UniPoly {
        self.scale(&crate::rational::primitive_factor(self.0.iter()))
    }

    /// Distinct rational roots, ascending.
    ///
    /// Real roots are isolated by Sturm sequences at dyadic points; a root
    /// p/q has q dividing the leading coefficient, so an isolating interval
    /// of width below 1/(2·lead) holds at most two candidates.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() < 1 {
            return Vec::new();
        }
        let g = self.squarefree().positive_primitive();
        let chain = g.sturm_chain();
        let ints: Vec<BigInt> = g.0.iter().map(|c| c.to_integer()).collect();
        let lead = ints.last().unwrap().abs();
        let maxc = ints.iter().map(|c| c.abs()).max().unwrap();
        // Cauchy bound 1 + max|cᵢ|/|lead| < 2^e.
        let e = (&maxc / &lead + BigInt::one()).bits() + 1;
        let count = |m: &BigInt, k: u64| dyadic_variations(&chain, m, k);
        let one = BigInt::one();
        let mut stack = vec![(-(&one << e), &one << e, 0u64)];
        let mut roots = Vec::new();
        while let Some((lo, hi, k)) = stack.pop() {
            let v = count(&lo, k) - count(&hi, k);
            if v == 0 {
                continue;
            }
            // width·lead < 1/2  ⟺  2·(hi − lo)·lead < 2^k
            if v == 1 && ((&hi - &lo) * &lead * 2u32) < (&one << k) {
                let den = BigInt::one() << k;
                let lo_r = Rational::new(lo.clone(), den.clone());
                let hi_r = Rational::new(hi.clone(), den);
                let lead_r = Rational::from_integer(lead.clone());
                let mut c = (&lo_r * &lead_r).floor().to_integer();
                let last = (&hi_r * &lead_r).ceil().to_integer();
                while c <= last {
                    let x = Rational::new(c.clone(), lead.clone());
                    if x > lo_r && x <= hi_r && g.eval(&x).is_zero() {
                        roots.push(x);
                        break;
                    }
                    c += 1;
                }
                continue;
            }
            let mid = &lo + &hi;
            stack.push((&lo << 1, mid.clone(), k + 1));
            stack.push((mid, &hi << 1, k + 1));
        }
        roots.sort();
        roots
    }

    /// Multiplicity of x as a root.
    pub fn multiplicity(&self, x: &Rational) -> usize {
        let lin = UniPoly::linear(Rational::one(), x.clone());
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(x).is_zero() {
            p = p.divrem(&lin).0;
            m += 1;
        }
        m
    }

    /// Degrees of the irreducible factors over Q, with multiplicity, ascending.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let mut p = self.clone();
        for r in self.rational_roots() {
            let lin = UniPoly::linear(Rational::one(), r.clone());
            while p.eval(&r).is_zero() {
                p = p.divrem(&lin).0;
                out.push(1);
            }
        }
        let mut rest = Vec::new();
        split_no_linear(&p.primitive_rat(), &mut rest);
        out.extend(rest);
        out.sort();
        out
    }
}

/// Sign changes of the chain at m / 2^k.
fn dyadic_variations(chain: &[Vec<BigInt>], m: &BigInt, k: u64) -> isize {
    let mut last: Option<bool> = None;
    let mut v = 0;
    for p in chain {
        // 2^{k·d} p(m/2^k) by homogeneous Horner.
        let d = p.len() - 1;
        let mut acc = p[d].clone();
        for i in (0..d).rev() {
            acc = acc * m + (&p[i] << (k * (d - i) as u64));
        }
        if acc.is_zero() {
            continue;
        }
        let s = acc.is_positive();
        if last.is_some_and(|l| l != s) {
            v += 1;
        }
        last = Some(s);
    }
    v
}

const KRONECKER_CAP: usize = 200_000;

/// Factor a polynomial without rational roots by Kronecker's method.
/// Falls back to reporting the whole degree when the search is too large.
fn split_no_linear(p: &UniPoly, out: &mut Vec<usize>) {
    let d = p.degree();
    if d < 1 {
        return;
    }
    if d <= 3 {
        out.push(d as usize);
        return;
    }
    for k in 2..=(d as usize / 2) {
        match kronecker_factor(p, k) {
            Some(Some(f)) => {
                let q = p.divrem(&f).0;
                split_no_linear(&f.primitive_rat(), out);
                split_no_linear(&q.primitive_rat(), out);
                return;
            }
            Some(None) => {}
            None => {
                out.push(d as usize);
                return;
            }
        }
    }
    out.push(d as usize);
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut ds = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            ds.push(i.clone());
            let j = &n / &i;
            if j != i {
                ds.push(j);
            }
        }
        i += 1;
        if ds.len() > 4096 || i > BigInt::from(10_000_000u64) {
            return None;
        }
    }
    Some(ds)
}

/// Some(Some(f)): factor of degree k; Some(None): none exists; None: cap hit.
fn kronecker_factor(p: &UniPoly, k: usize) -> Option<Option<UniPoly>> {
    let ints: Vec<Rational> = p.primitive_int().into_iter().map(Rational::from_integer).collect();
    let p = UniPoly::new(ints);
    let mut pts: Vec<(Rational, Vec<BigInt>)> = Vec::new();
    let mut x = 0i64;
    while pts.len() < k + 1 {
        let xr = rat(x);
        let v = p.eval(&xr).to_integer();
        let ds = divisors(&v)?;
        let mut signed = Vec::with_capacity(2 * ds.len());
        for d in ds {
            signed.push(-d.clone());
            signed.push(d);
        }
        pts.push((xr, signed));
        x = if x <= 0 { -x + 1 } else { -x };
    }
    let total: usize = pts.iter().map(|(_, d)| d.len()).try_fold(1usize, |a, b| a.checked_mul(b))?;
    if total > KRONECKER_CAP {
        return None;
    }
    let mut idx = vec![0usize; k + 1];
    loop {
        let vals: Vec<Rational> = idx.iter().zip(&pts).map(|(&i, (_, d))| Rational::from_integer(d[i].clone())).collect();
        if let Some(f) = interpolate(&pts.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>(), &vals) {
            if f.degree() == k as isize && f.0.iter().all(|c| c.is_integer()) {
                let (_, r) = p.divrem(&f);
                if r.is_zero() {
                    return Some(Some(f));
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Some(None);
            }
            idx[pos] += 1;
            if idx[pos] < pts[pos].1.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lagrange interpolation through the given nodes.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Option<UniPoly> {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = UniPoly::constant(Rational::one());
        let mut denom = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::linear(Rational::one(), xj.clone()));
                denom *= xi - xj;
            }
        }
        if denom.is_zero() {
            return None;
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    Some(acc)
}
