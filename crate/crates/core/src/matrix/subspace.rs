use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Default rank/comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest ambient matrix size accepted.
pub const MAX_AMBIENT: usize = 16;

/// A subspace of the `n×n` complex matrices with an orthonormal basis for
/// the Frobenius inner product `<a, b> = tr(a* b)`.
#[derive(Clone, Debug)]
pub struct MatrixSubspace {
    n: usize,
    basis: Vec<CMatrix>,
    tol: f64,
}

pub(crate) fn inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.dotc(b)
}

/// Unit matrix `E_ij` (0-based) in `M_n`.
pub fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

impl MatrixSubspace {
    pub fn zero(n: usize, tol: f64) -> Self {
        MatrixSubspace { n, basis: Vec::new(), tol }
    }

    /// All of `M_n`.
    pub fn full(n: usize, tol: f64) -> Self {
        let mats: Vec<CMatrix> = (0..n).flat_map(|i| (0..n).map(move |j| unit(n, i, j))).collect();
        MatrixSubspace { n, basis: mats, tol }
    }

    /// Span of `mats`, orthonormalized by Gram–Schmidt with one
    /// re-orthogonalization pass. A residual is kept only if its norm
    /// exceeds `tol·(1 + max input norm)`.
    pub fn from_matrices(n: usize, mats: &[CMatrix], tol: f64) -> Result<Self> {
        if n == 0 || n > MAX_AMBIENT {
            return Err(Error::DimensionMismatch(format!("ambient size {n} outside 1..={MAX_AMBIENT}")));
        }
        if let Some(m) = mats.iter().find(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix in M_{n}", m.nrows(), m.ncols())));
        }
        Ok(Self::span_unchecked(n, mats.iter(), tol))
    }

    fn span_unchecked<'a>(n: usize, mats: impl Iterator<Item = &'a CMatrix> + Clone, tol: f64) -> Self {
        let scale = mats.clone().map(|m| m.norm()).fold(0.0, f64::max);
        let cut = tol * (1.0 + scale);
        let mut basis: Vec<CMatrix> = Vec::new();
        for m in mats {
            if basis.len() == n * n {
                break;
            }
            let mut v = m.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &v);
                    v -= b * c;
                }
            }
            let norm = v.norm();
            if norm > cut {
                basis.push(v.unscale(norm));
            }
        }
        MatrixSubspace { n, basis, tol }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Orthogonal projection of `m` onto the subspace.
    pub fn project(&self, m: &CMatrix) -> CMatrix {
        let mut p = CMatrix::zeros(self.n, self.n);
        for b in &self.basis {
            p += b * inner(b, m);
        }
        p
    }

    /// `‖m − P m‖`.
    pub fn distance(&self, m: &CMatrix) -> f64 {
        (m - self.project(m)).norm()
    }

    pub fn contains(&self, m: &CMatrix) -> bool {
        self.distance(m) <= self.tol * (1.0 + m.norm())
    }

    fn check_same(&self, other: &MatrixSubspace) {
        assert_eq!(self.n, other.n, "subspaces live in different matrix sizes");
    }

    /// `span{uv : u ∈ self, v ∈ other}`.
    pub fn product(&self, other: &MatrixSubspace) -> MatrixSubspace {
        self.check_same(other);
        let prods: Vec<CMatrix> = self.basis.iter().flat_map(|u| other.basis.iter().map(move |v| u * v)).collect();
        Self::span_unchecked(self.n, prods.iter(), self.tol)
    }

    pub fn adjoint(&self) -> MatrixSubspace {
        let adj: Vec<CMatrix> = self.basis.iter().map(|b| b.adjoint()).collect();
        Self::span_unchecked(self.n, adj.iter(), self.tol)
    }

    pub fn sum(&self, other: &MatrixSubspace) -> MatrixSubspace {
        self.check_same(other);
        Self::span_unchecked(self.n, self.basis.iter().chain(&other.basis), self.tol)
    }

    /// Largest distance from a basis element to `other`.
    pub fn excess_over(&self, other: &MatrixSubspace) -> f64 {
        self.check_same(other);
        self.basis.iter().map(|b| other.distance(b)).fold(0.0, f64::max)
    }

    /// Inclusion, within tolerance.
    pub fn leq(&self, other: &MatrixSubspace) -> bool {
        self.excess_over(other) <= self.tol
    }

    /// Two-sided deviation: 0 for equal subspaces, up to 1 otherwise.
    pub fn deviation(&self, other: &MatrixSubspace) -> f64 {
        self.excess_over(other).max(other.excess_over(self))
    }

    pub fn equals(&self, other: &MatrixSubspace) -> bool {
        self.dim() == other.dim() && self.leq(other) && other.leq(self)
    }

    /// `U ∩ V`, from the null space of the residual map
    /// `c ↦ Σ c_i (I − P_V) u_i`.
    pub fn intersection(&self, other: &MatrixSubspace) -> MatrixSubspace {
        self.check_same(other);
        let k = self.dim();
        if k == 0 || other.is_zero() {
            return Self::zero(self.n, self.tol);
        }
        let resid: Vec<CMatrix> = self.basis.iter().map(|u| u - other.project(u)).collect();
        let rows = (self.n * self.n).max(k);
        let r = CMatrix::from_fn(rows, k, |i, j| {
            resid[j].as_slice().get(i).copied().unwrap_or_default()
        });
        let svd = r.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut vecs = Vec::new();
        for (idx, sigma) in svd.singular_values.iter().enumerate() {
            if *sigma <= self.tol {
                let mut m = CMatrix::zeros(self.n, self.n);
                for (j, u) in self.basis.iter().enumerate() {
                    m += u * v_t[(idx, j)].conj();
                }
                vecs.push(m);
            }
        }
        Self::span_unchecked(self.n, vecs.iter(), self.tol)
    }
}

/// Smallest `*`-closed, product-closed subspace containing all inputs.
pub fn generated_star_algebra(n: usize, subspaces: &[MatrixSubspace], tol: f64) -> MatrixSubspace {
    let mut acc = MatrixSubspace::zero(n, tol);
    for s in subspaces {
        acc = acc.sum(s);
    }
    loop {
        let next = acc.sum(&acc.adjoint()).sum(&acc.product(&acc));
        if next.dim() == acc.dim() {
            return acc;
        }
        acc = next;
    }
}

/// Whether `D` is closed under adjoints and products.
pub fn is_star_algebra(d: &MatrixSubspace) -> bool {
    d.adjoint().leq(d) && d.product(d).leq(d)
}

/// The unit of a finite-dimensional `*`-algebra `D`: the `p ∈ D` with
/// `pd = d = dp` for every `d ∈ D`, solved for by least squares. The zero
/// subspace has unit 0.
pub fn ideal_unit(d: &MatrixSubspace) -> Result<CMatrix> {
    let n = d.n();
    let k = d.dim();
    if k == 0 {
        return Ok(CMatrix::zeros(n, n));
    }
    if !is_star_algebra(d) {
        return Err(Error::NotAnAlgebra);
    }
    let nn = n * n;
    let rows = 2 * k * nn;
    let b = d.basis();
    // column i holds vec(b_i b_j) and vec(b_j b_i) for every j
    let a = CMatrix::from_fn(rows, k, |row, i| {
        let (block, pos) = (row / nn, row % nn);
        let (j, side) = (block / 2, block % 2);
        let prod = if side == 0 { &b[i] * &b[j] } else { &b[j] * &b[i] };
        prod.as_slice()[pos]
    });
    let rhs = CMatrix::from_fn(rows, 1, |row, _| {
        let (block, pos) = (row / nn, row % nn);
        b[block / 2].as_slice()[pos]
    });
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&rhs, d.tol() * 1e-3)
        .map_err(|_| Error::NoUnit(f64::INFINITY))?;
    let residual = (&a * &x - &rhs).norm();
    let mut p = CMatrix::zeros(n, n);
    for (i, bi) in b.iter().enumerate() {
        p += bi * x[(i, 0)];
    }
    let proj_err = (&p * &p - &p).norm().max((p.adjoint() - &p).norm());
    let worst = residual.max(proj_err);
    if worst > d.tol() * (1.0 + p.norm()) * 10.0 {
        return Err(Error::NoUnit(worst));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn span(mats: &[CMatrix]) -> MatrixSubspace {
        MatrixSubspace::from_matrices(2, mats, DEFAULT_TOL).unwrap()
    }

    fn diag() -> MatrixSubspace {
        span(&[unit(2, 0, 0), unit(2, 1, 1)])
    }

    #[test]
    fn rank_decisions() {
        let e11 = unit(2, 0, 0);
        assert_eq!(span(&[e11.clone(), &e11 * c(2.0)]).dim(), 1);
        assert_eq!(span(&[unit(2, 0, 1)]).dim(), 1);
        let nearly = &e11 + unit(2, 1, 1) * c(1e-15);
        assert_eq!(span(&[e11, nearly]).dim(), 1);
        assert!(MatrixSubspace::from_matrices(2, &[CMatrix::zeros(3, 3)], DEFAULT_TOL).is_err());
    }

    #[test]
    fn basis_is_orthonormal() {
        let m1 = CMatrix::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let m2 = CMatrix::from_fn(3, 3, |i, j| Complex64::new(((i + j) % 2) as f64, 0.5));
        let m3 = &m1 * c(3.0) - &m2;
        let s = MatrixSubspace::from_matrices(3, &[m1, m2, m3], DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 2);
        for (i, a) in s.basis().iter().enumerate() {
            for (j, b) in s.basis().iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - c(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn products() {
        let e12 = span(&[unit(2, 0, 1)]);
        let e21 = span(&[unit(2, 1, 0)]);
        assert!(e12.product(&e21).equals(&span(&[unit(2, 0, 0)])));
        assert!(e12.product(&MatrixSubspace::zero(2, DEFAULT_TOL)).is_zero());
        assert!(e12.product(&e12).is_zero());
    }

    #[test]
    fn adjoint_and_inclusion() {
        let e12 = span(&[unit(2, 0, 1)]);
        assert!(e12.adjoint().equals(&span(&[unit(2, 1, 0)])));
        assert!(span(&[unit(2, 0, 0)]).leq(&diag()));
        assert!(!e12.leq(&diag()));
        assert!((diag().distance(&unit(2, 0, 1)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intersections() {
        let upper = span(&[unit(2, 0, 0), unit(2, 0, 1)]);
        let i = upper.intersection(&diag());
        assert!(i.equals(&span(&[unit(2, 0, 0)])));
        let skew = span(&[unit(2, 0, 0) + unit(2, 1, 1)]);
        assert!(skew.intersection(&diag()).equals(&skew));
        assert!(span(&[unit(2, 0, 1)]).intersection(&diag()).is_zero());
        // dimension of the intersection of two 3-dim subspaces of M_2
        let a = span(&[unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0)]);
        let b = span(&[unit(2, 0, 1), unit(2, 1, 0), unit(2, 1, 1)]);
        assert_eq!(a.intersection(&b).dim(), 2);
    }

    #[test]
    fn star_algebras() {
        let full = generated_star_algebra(2, &[span(&[unit(2, 0, 1)])], DEFAULT_TOL);
        assert_eq!(full.dim(), 4);
        assert!(generated_star_algebra(2, &[diag()], DEFAULT_TOL).equals(&diag()));
        let idem = [span(&[]), span(&[unit(2, 0, 0)]), span(&[unit(2, 1, 1)])];
        assert!(generated_star_algebra(2, &idem, DEFAULT_TOL).equals(&diag()));
    }

    #[test]
    fn units() {
        let p = ideal_unit(&span(&[unit(2, 0, 0)])).unwrap();
        assert!((p - unit(2, 0, 0)).norm() < 1e-9);
        let p = ideal_unit(&diag()).unwrap();
        assert!((p - CMatrix::identity(2, 2)).norm() < 1e-9);
        let z = ideal_unit(&MatrixSubspace::zero(2, DEFAULT_TOL)).unwrap();
        assert_eq!(z, CMatrix::zeros(2, 2));
        assert!(matches!(ideal_unit(&span(&[unit(2, 0, 1)])), Err(Error::NotAnAlgebra)));
        // a non-diagonal projection
        let q = CMatrix::from_element(2, 2, c(0.5));
        let p = ideal_unit(&span(std::slice::from_ref(&q))).unwrap();
        assert!((p - q).norm() < 1e-9);
    }
}
