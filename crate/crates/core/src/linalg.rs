//! Fixed-size complex linear algebra for two-qubit work.
//!
//! Matrices are dense and row-major. For the 4×4 case the basis order is
//! `|x_a x_b⟩, |x_a y_b⟩, |y_a x_b⟩, |y_a y_b⟩`, so index `2*a + b` addresses
//! the A-side axis `a` and the B-side axis `b`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for every matrix entry and amplitude.
pub type ComplexScalar = Complex64;

/// Tolerance on `|M - M^H|_F` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to `-PSD_TOL` are treated as round-off and clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this
/// (relative to the matrix norm for matrices larger than unit scale).
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> ComplexScalar {
    Complex64::new(x, 0.0)
}

/// Dense `N×N` complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix<const N: usize> {
    entries: [[ComplexScalar; N]; N],
}

/// Universal carrier for two-qubit states and operators.
pub type ComplexMatrix4 = CMatrix<4>;

/// Single-qubit (reduced) matrices.
pub type ComplexMatrix2 = CMatrix<2>;

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        Self {
            entries: [[Complex64::new(0.0, 0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = re(1.0);
        }
        m
    }

    pub fn from_rows(entries: [[ComplexScalar; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| re(rows[i][j]))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(values: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { re(values[i]) } else { re(0.0) })
    }

    pub fn rows(&self) -> &[[ComplexScalar; N]; N] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].conj())
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, k: ComplexScalar) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(re(k))
    }

    /// Frobenius distance `|self - other|_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Frobenius norm of the anti-Hermitian part, `|M - M^H|_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    /// Returns the first non-finite entry, if any.
    pub fn check_finite(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// `U^H · self · U`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.adjoint() * *self * *u
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[ComplexScalar; N]) -> [ComplexScalar; N] {
        let mut out = [re(0.0); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.entries[i][j] * v[j]).sum();
        }
        out
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[ComplexScalar; N], w: &[ComplexScalar; N]) -> Self {
        Self::from_fn(|i, j| v[i] * w[j].conj())
    }
}

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = ComplexScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<const N: usize> Neg for CMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j])
    }
}

impl<const N: usize> fmt::Debug for CMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix<{N}> [")?;
        for row in &self.entries {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix product; kept as a free function alongside `*`.
pub fn mat_mul<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> CMatrix<N> {
    *a * *b
}

/// Unit-norm two-qubit pure state, same basis order as [`ComplexMatrix4`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector4 {
    amplitudes: [ComplexScalar; 4],
}

impl StateVector4 {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: [ComplexScalar; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: [ComplexScalar; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(Self {
            amplitudes: amplitudes.map(|a| a / norm),
        })
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::new(amplitudes.map(re))
    }

    pub fn amplitudes(&self) -> &[ComplexScalar; 4] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> ComplexScalar {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix4 {
        ComplexMatrix4::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order and `vectors` holds the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMatrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `V · diag(f(λ)) · V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        let v = &self.vectors;
        CMatrix::from_fn(|i, j| {
            (0..N)
                .map(|k| v[(i, k)] * f(self.values[k]) * v[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix<N> {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each pivot `(p, q)` is first made real by a diagonal phase and then
/// annihilated by a real plane rotation; the combined unitary is accumulated
/// into the eigenvector matrix.
pub fn hermitian_eigen<const N: usize>(m: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    m.check_finite()?;
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            residual,
            tolerance: HERMITIAN_TOL,
        });
    }
    // Work on the exactly Hermitian part.
    let mut a = (*m + m.adjoint()).scale_real(0.5);
    for i in 0..N {
        a[(i, i)].im = 0.0;
    }
    let mut v = CMatrix::<N>::identity();
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // U restricted to (p, q) = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let phase_c = phase.conj();
                let upp = re(cs);
                let upq = re(sn);
                let uqp = phase_c * (-sn);
                let uqq = phase_c * cs;

                // A <- A U
                for k in 0..N {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                // A <- U^H A
                for k in 0..N {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = re(0.0);
                a[(q, p)] = re(0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V <- V U
                for k in 0..N {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.map(|k| a[(k, k)].re);
    let vectors = CMatrix::from_fn(|i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<const N: usize>(a: &CMatrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Real eigenvalues of a Hermitian 4×4 matrix, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    Ok(hermitian_eigen(m)?.values)
}

/// Principal (Hermitian PSD) square root.
pub fn hermitian_sqrt(m: &ComplexMatrix4) -> Result<ComplexMatrix4> {
    let eig = hermitian_eigen(m)?;
    let min = eig.values[3];
    if min < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Singular values of a 4×4 complex matrix, descending.
///
/// Computed as the non-negative eigenvalues of the Hermitian dilation
/// `[[0, X], [X^H, 0]]`, which keeps small singular values accurate to
/// round-off in absolute terms rather than to its square root.
pub fn singular_values(x: &ComplexMatrix4) -> Result<[f64; 4]> {
    x.check_finite()?;
    let xh = x.adjoint();
    let dilation = CMatrix::<8>::from_fn(|i, j| match (i < 4, j < 4) {
        (true, false) => x[(i, j - 4)],
        (false, true) => xh[(i - 4, j)],
        _ => re(0.0),
    });
    let eig = hermitian_eigen(&dilation)?;
    Ok(std::array::from_fn(|k| eig.values[k].max(0.0)))
}

pub fn frobenius_norm<const N: usize>(m: &CMatrix<N>) -> f64 {
    m.frobenius_norm()
}

pub fn adjoint<const N: usize>(m: &CMatrix<N>) -> CMatrix<N> {
    m.adjoint()
}

pub fn trace<const N: usize>(m: &CMatrix<N>) -> ComplexScalar {
    m.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(vals: &[f64]) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|i, j| c(vals[2 * (4 * i + j)], vals[2 * (4 * i + j) + 1]))
    }

    fn bell_phi_plus() -> ComplexMatrix4 {
        ComplexMatrix4::from_real([
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ])
    }

    #[test]
    fn identity_and_zero_products() {
        let m = random_matrix(&(0..32).map(|k| (k as f64 * 0.37).sin()).collect::<Vec<_>>());
        assert_eq!(mat_mul(&ComplexMatrix4::identity(), &m), m);
        assert_eq!(
            mat_mul(&m, &ComplexMatrix4::zeros()),
            ComplexMatrix4::zeros()
        );
    }

    #[test]
    fn trace_and_norm_basics() {
        assert_eq!(ComplexMatrix4::identity().trace(), re(4.0));
        assert_eq!(bell_phi_plus().trace(), re(1.0));
        assert_eq!(ComplexMatrix4::zeros().frobenius_norm(), 0.0);
        assert_eq!(ComplexMatrix4::identity().frobenius_norm(), 2.0);
        assert!((bell_phi_plus().frobenius_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_of_hermitian_is_itself() {
        let rho = bell_phi_plus();
        assert_eq!(rho.adjoint(), rho);
        let m = random_matrix(&(0..32).map(|k| (k as f64).cos()).collect::<Vec<_>>());
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn eigenvalues_of_simple_states() {
        let ev = hermitian_eigenvalues(&bell_phi_plus()).unwrap();
        for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14, "{ev:?}");
        }
        let ev = hermitian_eigenvalues(&ComplexMatrix4::identity().scale_real(0.25)).unwrap();
        assert!(ev.iter().all(|x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let mut m = ComplexMatrix4::identity();
        m[(0, 1)] = re(1.0);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_handles_complex_pivot() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0.
        let m = CMatrix::<2>::from_rows([[re(1.0), c(0.0, 1.0)], [c(0.0, -1.0), re(1.0)]]);
        let eig = hermitian_eigen(&m).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-15);
        assert!(eig.values[1].abs() < 1e-15);
        assert!(eig.reconstruct().distance(&m) < 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        assert!(
            hermitian_sqrt(&ComplexMatrix4::identity())
                .unwrap()
                .distance(&ComplexMatrix4::identity())
                < 1e-15
        );
        let s = hermitian_sqrt(&ComplexMatrix4::diag([4.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(s.distance(&ComplexMatrix4::diag([2.0, 1.0, 0.0, 0.0])) < 1e-14);
        let p = bell_phi_plus();
        assert!(hermitian_sqrt(&p).unwrap().distance(&p) < 1e-12);
    }

    #[test]
    fn sqrt_rejects_negative_eigenvalue() {
        let m = ComplexMatrix4::diag([1.0, 0.5, 0.0, -1e-3]);
        assert!(matches!(hermitian_sqrt(&m), Err(Error::NotPsd { .. })));
        // Round-off sized negatives are clamped.
        let m = ComplexMatrix4::diag([1.0, 0.5, 0.0, -1e-12]);
        assert!(hermitian_sqrt(&m).is_ok());
    }

    #[test]
    fn singular_values_of_diagonal_and_unitary() {
        let sv = singular_values(&ComplexMatrix4::diag([-3.0, 0.5, 2.0, 0.0])).unwrap();
        for (got, want) in sv.iter().zip([3.0, 2.0, 0.5, 0.0]) {
            assert!((got - want).abs() < 1e-14, "{sv:?}");
        }
        let u = ComplexMatrix4::from_fn(|i, j| if i + j == 3 { c(0.0, 1.0) } else { re(0.0) });
        assert!(singular_values(&u)
            .unwrap()
            .iter()
            .all(|s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn state_vector_normalization() {
        assert!(StateVector4::from_real([1.0, 1.0, 0.0, 0.0]).is_err());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = StateVector4::from_real([h, 0.0, 0.0, h]).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!(v.projector().distance(&bell_phi_plus()) < 1e-15);
    }

    fn hermitian_from(vals: &[f64]) -> ComplexMatrix4 {
        let a = random_matrix(vals);
        (a + a.adjoint()).scale_real(0.5)
    }

    proptest! {
        #[test]
        fn eigen_reconstruction(vals in prop::collection::vec(-1.0f64..1.0, 32)) {
            let m = hermitian_from(&vals);
            let eig = hermitian_eigen(&m).unwrap();
            prop_assert!(eig.reconstruct().distance(&m) < 1e-10);
            prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
            // Eigenvectors are orthonormal.
            let vhv = eig.vectors.adjoint() * eig.vectors;
            prop_assert!(vhv.distance(&ComplexMatrix4::identity()) < 1e-12);
            let tr: f64 = eig.values.iter().sum();
            prop_assert!((tr - m.trace().re).abs() < 1e-12);
        }

        #[test]
        fn sqrt_squares_back(vals in prop::collection::vec(-1.0f64..1.0, 32)) {
            let a = random_matrix(&vals);
            let psd = a.adjoint() * a;
            let s = hermitian_sqrt(&psd).unwrap();
            prop_assert!((s * s).distance(&psd) < 1e-9);
            prop_assert!(s.hermiticity_residual() < 1e-12);
        }

        #[test]
        fn singular_values_match_gram_eigenvalues(vals in prop::collection::vec(-1.0f64..1.0, 32)) {
            let x = random_matrix(&vals);
            let sv = singular_values(&x).unwrap();
            let ev = hermitian_eigenvalues(&(x.adjoint() * x)).unwrap();
            for (s, e) in sv.iter().zip(ev.iter()) {
                prop_assert!((s * s - e).abs() < 1e-10);
            }
        }
    }
}
