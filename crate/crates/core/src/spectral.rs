//! Coboundaries, Hodge Laplacians and the simplicial Fourier transform.
//!
//! The eigendecomposition here is a dense diagnostic. Training only ever
//! touches the Laplacian through sparse matrix-vector products.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// Default size guard for the dense eigensolver.
pub const DEFAULT_EIGEN_LIMIT: usize = 5000;

/// Default relative tolerance for counting zero eigenvalues.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-8;

/// Matrix of the coboundary δ^p, shape |K_{p+1}| × |K_p|.
///
/// Entry (τ, σ) is (-1)^i when σ is τ with its i-th (sorted) vertex removed.
/// Above the top dimension the result is an empty operator of the right shape.
pub fn coboundary_matrix(complex: &SimplicialComplex, p: usize) -> SparseOperator {
    let rows = complex.count(p + 1);
    let cols = complex.count(p);
    let mut triplets = Vec::with_capacity(rows * (p + 2));
    for t in 0..rows {
        for (i, &f) in complex.face_positions(p + 1, t).iter().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            triplets.push((t, f, sign));
        }
    }
    SparseOperator::from_triplets(rows, cols, triplets).expect("face positions are in range")
}

/// L_p = B_pᵀB_p + B_{p-1}B_{p-1}ᵀ with its up and down parts.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeLaplacian {
    dimension: usize,
    matrix: SparseOperator,
    up: SparseOperator,
    down: SparseOperator,
}

impl HodgeLaplacian {
    pub fn new(complex: &SimplicialComplex, p: usize) -> Result<Self> {
        let n = complex.count(p);
        if n == 0 {
            return Err(Error::EmptyDimension(p));
        }
        let b = coboundary_matrix(complex, p);
        let up = b.transpose().matmul(&b)?;
        let down = if p == 0 {
            SparseOperator::zeros(n, n)
        } else {
            let bd = coboundary_matrix(complex, p - 1);
            bd.matmul(&bd.transpose())?
        };
        let matrix = up.add(&down)?;
        Ok(HodgeLaplacian {
            dimension: p,
            matrix,
            up,
            down,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &SparseOperator {
        &self.matrix
    }

    pub fn up(&self) -> &SparseOperator {
        &self.up
    }

    pub fn down(&self) -> &SparseOperator {
        &self.down
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.matrix.apply(x)
    }

    /// Extension: the Laplacian divided by `factor` (e.g. its largest eigenvalue).
    /// Up and down parts are scaled alike.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rescale factor must be positive and finite, got {factor}"
            )));
        }
        let s = 1.0 / factor;
        Ok(HodgeLaplacian {
            dimension: self.dimension,
            matrix: self.matrix.scale(s),
            up: self.up.scale(s),
            down: self.down.scale(s),
        })
    }

    /// Largest eigenvalue estimated by power iteration, without a dense solve.
    ///
    /// The result is an upper estimate refined until the Rayleigh quotient moves
    /// by less than `1e-10` relative, or `max_iter` steps. Deterministic.
    pub fn largest_eigenvalue(&self, max_iter: usize) -> f64 {
        let n = self.size();
        // Gershgorin bound; also the fallback when the iteration stalls.
        let bound = (0..n)
            .map(|r| self.matrix.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        if bound == 0.0 {
            return 0.0;
        }
        // Fixed, non-symmetric start vector so no eigenspace is missed by symmetry.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + (i as f64 * 0.618_033_988_75).fract())
            .collect();
        normalize(&mut x);
        let mut y = vec![0.0; n];
        let mut lambda = 0.0;
        for _ in 0..max_iter {
            self.matrix.apply_unchecked(&x, &mut y);
            let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / norm;
            }
            let done = (rq - lambda).abs() <= 1e-10 * rq.abs().max(1.0);
            lambda = rq;
            if done {
                break;
            }
        }
        lambda.min(bound)
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Convenience wrapper for [`HodgeLaplacian::new`].
pub fn hodge_laplacian(complex: &SimplicialComplex, p: usize) -> Result<HodgeLaplacian> {
    HodgeLaplacian::new(complex, p)
}

/// Orthonormal eigenbasis with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl EigenBasis {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column j is the eigencochain of the j-th smallest eigenvalue.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size() {
            return Err(Error::ShapeMismatch {
                expected: format!("vector of length {}", self.size()),
                actual: format!("{len}"),
            });
        }
        Ok(())
    }

    /// Fourier coefficients Uᵀc.
    pub fn fourier_transform(&self, cochain: &[f64]) -> Result<Vec<f64>> {
        self.check_len(cochain.len())?;
        let c = DVector::from_column_slice(cochain);
        Ok((self.eigenvectors.transpose() * c).as_slice().to_vec())
    }

    /// Synthesis U·v.
    pub fn inverse_fourier_transform(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        self.check_len(coefficients.len())?;
        let v = DVector::from_column_slice(coefficients);
        Ok((&self.eigenvectors * v).as_slice().to_vec())
    }

    /// U (Uᵀc ⊙ Uᵀc').
    ///
    /// Depends on the chosen basis inside repeated eigenspaces; only the
    /// polynomial filters are basis independent.
    pub fn spectral_convolve(&self, c: &[f64], c_prime: &[f64]) -> Result<Vec<f64>> {
        let a = self.fourier_transform(c)?;
        let b = self.fourier_transform(c_prime)?;
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        self.inverse_fourier_transform(&prod)
    }

    /// Spectral route for a polynomial filter: U diag(Σ w_i Λ^i) Uᵀ c.
    pub fn spectral_polynomial_filter(&self, weights: &[f64], c: &[f64]) -> Result<Vec<f64>> {
        let response: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| weights.iter().rev().fold(0.0, |acc, &w| acc * l + w))
            .collect();
        let kernel = self.inverse_fourier_transform(&response)?;
        self.spectral_convolve(c, &kernel)
    }

    /// max |L − U diag(Λ) Uᵀ|.
    pub fn reconstruction_residual(&self, laplacian: &HodgeLaplacian) -> f64 {
        let l = laplacian.matrix().to_nalgebra();
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        let rec = &self.eigenvectors * d * self.eigenvectors.transpose();
        (l - rec).amax()
    }
}

/// Dense symmetric eigendecomposition, guarded by `limit` on the matrix size.
pub fn eigendecompose_with_limit(laplacian: &HodgeLaplacian, limit: usize) -> Result<EigenBasis> {
    let n = laplacian.size();
    if n > limit {
        return Err(Error::TooLargeForEigensolver { size: n, limit });
    }
    let eig = SymmetricEigen::new(laplacian.matrix().to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (j, &k) in order.iter().enumerate() {
        eigenvectors.set_column(j, &eig.eigenvectors.column(k));
    }
    Ok(EigenBasis {
        eigenvalues,
        eigenvectors,
    })
}

pub fn eigendecompose(laplacian: &HodgeLaplacian) -> Result<EigenBasis> {
    eigendecompose_with_limit(laplacian, DEFAULT_EIGEN_LIMIT)
}

/// Number of eigenvalues of L_k with |λ| ≤ tolerance·max(1, λ_max).
///
/// `tolerance` defaults to [`DEFAULT_ZERO_TOLERANCE`].
pub fn betti_number(
    complex: &SimplicialComplex,
    k: usize,
    tolerance: Option<f64>,
) -> Result<usize> {
    let lap = HodgeLaplacian::new(complex, k)?;
    let basis = eigendecompose(&lap)?;
    let lmax = basis.eigenvalues().last().copied().unwrap_or(0.0);
    let tol = tolerance.unwrap_or(DEFAULT_ZERO_TOLERANCE) * lmax.max(1.0);
    Ok(basis
        .eigenvalues()
        .iter()
        .filter(|l| l.abs() <= tol)
        .count())
}

/// Spatial route for a polynomial filter: Σ w_i L^i c via repeated sparse matvecs (Horner form).
pub fn polynomial_filter(
    laplacian: &HodgeLaplacian,
    weights: &[f64],
    c: &[f64],
) -> Result<Vec<f64>> {
    let n = laplacian.size();
    if c.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("cochain of length {n}"),
            actual: format!("{}", c.len()),
        });
    }
    let mut acc = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for &w in weights.iter().rev() {
        laplacian.matrix().apply_unchecked(&acc, &mut tmp);
        for ((a, t), x) in acc.iter_mut().zip(&tmp).zip(c) {
            *a = t + w * x;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;

    fn toy_complex() -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(vec![
            vec![0, 1, 2],
            vec![0, 1],
            vec![0, 3],
            vec![2, 3],
        ])
        .unwrap()
    }

    fn dense_matvec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        m.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn coboundary_rows_on_toy_complex() {
        let k = toy_complex();
        let b1 = coboundary_matrix(&k, 1);
        assert_eq!((b1.rows(), b1.cols()), (1, 5));
        assert_eq!(b1.to_dense()[0], vec![1.0, -1.0, 0.0, 1.0, 0.0]);
        let b0 = coboundary_matrix(&k, 0);
        assert_eq!(b0.to_dense()[0], vec![-1.0, 1.0, 0.0, 0.0]);
        let b2 = coboundary_matrix(&k, 2);
        assert_eq!((b2.rows(), b2.cols()), (0, 1));
        let b7 = coboundary_matrix(&k, 7);
        assert_eq!((b7.rows(), b7.cols()), (0, 0));
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let k = toy_complex();
        let dd = coboundary_matrix(&k, 1)
            .matmul(&coboundary_matrix(&k, 0))
            .unwrap();
        assert_eq!(dd.nnz(), 0);
    }

    #[test]
    fn vertex_laplacian_of_toy_complex() {
        let l0 = hodge_laplacian(&toy_complex(), 0).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| l0.matrix().get(i, i)).collect();
        assert_eq!(diag, vec![3.0, 2.0, 3.0, 2.0]);
    }

    #[test]
    fn single_triangle_top_laplacian() {
        let k = SimplicialComplex::from_vertex_lists(vec![vec![0, 1, 2]]).unwrap();
        let l2 = hodge_laplacian(&k, 2).unwrap();
        assert_eq!(l2.matrix().to_dense(), vec![vec![3.0]]);
        assert_eq!(l2.up().nnz(), 0);
    }

    #[test]
    fn empty_dimension_is_an_error() {
        assert!(matches!(
            hodge_laplacian(&toy_complex(), 3),
            Err(Error::EmptyDimension(3))
        ));
    }

    #[test]
    fn apply_on_toy_complex() {
        let k = toy_complex();
        let l1 = hodge_laplacian(&k, 1).unwrap();
        let c = [150.0, 100.0, 10.0, 100.0, 4.0];
        let dense = dense_matvec(&l1.matrix().to_dense(), &c);
        assert_eq!(dense, vec![460.0, 306.0, 274.0, 296.0, -182.0]);
        assert_eq!(l1.apply(&c).unwrap(), dense);
        let b0 = coboundary_matrix(&k, 0);
        assert_eq!(
            b0.apply(&[160.0, 150.0, 104.0, 14.0]).unwrap(),
            vec![-10.0, -56.0, -146.0, -46.0, -90.0]
        );
    }

    #[test]
    fn eigen_small_cases() {
        let iso = SimplicialComplex::from_simplices(vec![Simplex::vertex(0), Simplex::vertex(1)]);
        let b = eigendecompose(&hodge_laplacian(&iso, 0).unwrap()).unwrap();
        assert_eq!(b.eigenvalues(), &[0.0, 0.0]);
        let edge = SimplicialComplex::from_vertex_lists(vec![vec![0, 1]]).unwrap();
        let lap = hodge_laplacian(&edge, 0).unwrap();
        let b = eigendecompose(&lap).unwrap();
        assert!((b.eigenvalues()[0]).abs() < 1e-12);
        assert!((b.eigenvalues()[1] - 2.0).abs() < 1e-12);
        assert!(b.reconstruction_residual(&lap) < 1e-12);
    }

    #[test]
    fn eigen_size_guard() {
        let lap = hodge_laplacian(&toy_complex(), 1).unwrap();
        assert!(matches!(
            eigendecompose_with_limit(&lap, 4),
            Err(Error::TooLargeForEigensolver { size: 5, limit: 4 })
        ));
    }

    #[test]
    fn fourier_of_unit_vector() {
        let lap = hodge_laplacian(&toy_complex(), 1).unwrap();
        let b = eigendecompose(&lap).unwrap();
        for i in 0..5 {
            let mut e = vec![0.0; 5];
            e[i] = 1.0;
            let back = b
                .inverse_fourier_transform(&b.fourier_transform(&e).unwrap())
                .unwrap();
            for (x, y) in back.iter().zip(&e) {
                assert!((x - y).abs() < 1e-12);
            }
            // transform of the i-th eigencochain is the i-th unit vector
            let col: Vec<f64> = b.eigenvectors().column(i).iter().copied().collect();
            let f = b.fourier_transform(&col).unwrap();
            for (j, v) in f.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
        assert!(b.fourier_transform(&[1.0]).is_err());
    }

    #[test]
    fn constant_vertex_signal_is_low_frequency() {
        let lap = hodge_laplacian(&toy_complex(), 0).unwrap();
        let b = eigendecompose(&lap).unwrap();
        let f = b.fourier_transform(&[3.0; 4]).unwrap();
        assert!((f[0].abs() - 6.0).abs() < 1e-10);
        assert!(f[1..].iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn convolution_with_identity_kernel() {
        let iso = SimplicialComplex::from_simplices((0..3).map(Simplex::vertex));
        let b = eigendecompose(&hodge_laplacian(&iso, 0).unwrap()).unwrap();
        let out = b
            .spectral_convolve(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0])
            .unwrap();
        let want = [4.0, 10.0, 18.0];
        for (x, y) in out.iter().zip(&want) {
            assert!((x - y).abs() < 1e-12);
        }
        let lap = hodge_laplacian(&toy_complex(), 1).unwrap();
        let b = eigendecompose(&lap).unwrap();
        let one = b.inverse_fourier_transform(&[1.0; 5]).unwrap();
        let c = [150.0, 100.0, 10.0, 100.0, 4.0];
        for (x, y) in b.spectral_convolve(&c, &one).unwrap().iter().zip(&c) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn betti_numbers() {
        let hollow =
            SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let filled = SimplicialComplex::from_vertex_lists(vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(betti_number(&hollow, 1, None).unwrap(), 1);
        assert_eq!(betti_number(&filled, 1, None).unwrap(), 0);
        let k = toy_complex();
        assert_eq!(betti_number(&k, 0, None).unwrap(), 1);
        assert_eq!(betti_number(&k, 1, None).unwrap(), 1);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let lap = hodge_laplacian(&toy_complex(), 1).unwrap();
        let dense = *eigendecompose(&lap).unwrap().eigenvalues().last().unwrap();
        let est = lap.largest_eigenvalue(10_000);
        assert!((est - dense).abs() < 1e-6 * dense, "{est} vs {dense}");
        let r = lap.rescaled(est).unwrap();
        assert!((r.largest_eigenvalue(10_000) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn horner_matches_explicit_powers() {
        let lap = hodge_laplacian(&toy_complex(), 1).unwrap();
        let c = [1.0, -2.0, 0.5, 3.0, 1.0];
        let w = [0.5, -1.0, 0.25];
        let l = lap.matrix().to_dense();
        let lc = dense_matvec(&l, &c);
        let llc = dense_matvec(&l, &lc);
        let want: Vec<f64> = (0..5).map(|i| 0.5 * c[i] - lc[i] + 0.25 * llc[i]).collect();
        assert_eq!(polynomial_filter(&lap, &w, &c).unwrap(), want);
    }
}
