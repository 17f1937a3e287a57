//! Dense complex linear algebra on a qutrit (3) and on a qutrit pair (9).
//!
//! Only what the witness, channel and SeeSaw code needs: products, adjoints,
//! traces, the Kronecker product with its partial trace, and a Jacobi
//! eigensolver for 3×3 Hermitian matrices.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[inline]
fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    c(T::zero(), T::zero())
}

#[inline]
fn cone<T: Real>() -> Complex<T> {
    c(T::one(), T::zero())
}

// ---------------------------------------------------------------------------
// Vector3

/// A ket in C³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector3<T>(pub [Complex<T>; 3]);

impl<T: Real> Vector3<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, d: Complex<T>) -> Self {
        Self([a, b, d])
    }

    pub fn real(a: T, b: T, d: T) -> Self {
        Self([c(a, T::zero()), c(b, T::zero()), c(d, T::zero())])
    }

    /// Computational basis ket |i⟩.
    pub fn basis(i: usize) -> Self {
        let mut v = [czero(); 3];
        v[i] = cone();
        Self(v)
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(c(n.recip(), T::zero()))
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(czero(), |acc, z| acc + z)
    }

    /// The unit vector orthogonal to both `self` and `other`, i.e. the
    /// normalized conjugate cross product, with canonical global phase.
    pub fn orthogonal_complement(&self, other: &Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = other.0;
        let cross = Self([
            (a1 * b2 - a2 * b1).conj(),
            (a2 * b0 - a0 * b2).conj(),
            (a0 * b1 - a1 * b0).conj(),
        ]);
        cross.normalized().canonical_phase()
    }

    /// Multiplies by a global phase so the first non-negligible amplitude is real positive.
    pub fn canonical_phase(&self) -> Self {
        let eps = T::epsilon().sqrt();
        match self.0.iter().find(|z| z.norm() > eps) {
            Some(z) => {
                let phase = z.conj() / c(z.norm(), T::zero());
                self.scale(phase)
            }
            None => *self,
        }
    }

    /// The rank-one projector |v⟩⟨v|.
    pub fn projector(&self) -> Matrix3<T> {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i] * self.0[j].conj();
            }
        }
        m
    }
}

impl<T> Index<usize> for Vector3<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.0[i]
    }
}

// ---------------------------------------------------------------------------
// Matrix3

/// A 3×3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3<T>(pub [[Complex<T>; 3]; 3]);

impl<T: Real> Matrix3<T> {
    pub fn zeros() -> Self {
        Self([[czero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([T::one(); 3])
    }

    pub fn diag(d: [T; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = c(v, T::zero());
        }
        m
    }

    /// Builds a matrix with the given real parts and zero imaginary parts.
    pub fn from_real(rows: [[T; 3]; 3]) -> Self {
        Self(rows.map(|r| r.map(|v| c(v, T::zero()))))
    }

    /// |i⟩⟨i| in the computational basis.
    pub fn basis_projector(i: usize) -> Self {
        let mut d = [T::zero(); 3];
        d[i] = T::one();
        Self::diag(d)
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|r| r.map(|z| z * s)))
    }

    pub fn trace(&self) -> Complex<T> {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Re tr(self · other), computed without forming the product.
    pub fn trace_product(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for k in 0..3 {
                acc = acc + (self.0[i][k] * other.0[k][i]).re;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Largest entry of |self - self†|.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// (self + self†) / 2.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(T::lit(0.5))
    }

    /// Keeps the diagonal and zeroes every off-diagonal entry (complete
    /// dephasing in the computational basis).
    pub fn dephased(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.0[i][i] = self.0[i][i];
        }
        m
    }

    /// ⟨v|self|v⟩ (real part).
    pub fn expectation(&self, v: &Vector3<T>) -> T {
        let mut acc = czero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + v.0[i].conj() * self.0[i][j] * v.0[j];
            }
        }
        acc.re
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// Checks Hermiticity, positivity and unit trace.
    pub fn validate_density(&self, tol: &Tolerances) -> Result<()> {
        let eig = eig_hermitian(self, tol)?;
        if eig.values[2] < -Tolerances::get::<T>(tol.psd) {
            return Err(invalid(format!(
                "density operator has negative eigenvalue {}",
                eig.values[2]
            )));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > Tolerances::get(tol.trace)
            || tr.im.abs() > Tolerances::get(tol.trace)
        {
            return Err(invalid(format!("density operator has trace {tr}")));
        }
        Ok(())
    }

    /// Checks that `self` is a valid binary-POVM element, 0 ≤ M ≤ I.
    pub fn validate_effect(&self, tol: &Tolerances) -> Result<()> {
        let eig = eig_hermitian(self, tol)?;
        let slack = Tolerances::get::<T>(tol.psd);
        if eig.values[2] < -slack || eig.values[0] > T::one() + slack {
            return Err(invalid(format!(
                "POVM element has eigenvalues outside [0, 1]: {:?}",
                eig.values
            )));
        }
        Ok(())
    }
}

impl<T: Real> Default for Matrix3<T> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<T> Index<(usize, usize)> for Matrix3<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real> Add for Matrix3<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for Matrix3<T> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
    }
}

impl<T: Real> Sub for Matrix3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Matrix3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|r| r.map(|z| -z)))
    }
}

impl<T: Real> Mul for Matrix3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = czero();
                for k in 0..3 {
                    acc = acc + self.0[i][k] * rhs.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

impl<T: Real> Mul<Vector3<T>> for Matrix3<T> {
    type Output = Vector3<T>;
    fn mul(self, v: Vector3<T>) -> Vector3<T> {
        let mut out = [czero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).fold(czero(), |acc, k| acc + self.0[i][k] * v.0[k]);
        }
        Vector3(out)
    }
}

impl<T: Real + Serialize> Serialize for Matrix3<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let re: Vec<Vec<T>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect();
        let im: Vec<Vec<T>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|z| z.im).collect())
            .collect();
        let mut st = s.serialize_struct("Matrix3", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

// ---------------------------------------------------------------------------
// Matrix9

/// A 9×9 complex matrix acting on Bob ⊗ Eve, with index `3 * bob + eve`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix9<T>(pub Box<[[Complex<T>; 9]; 9]>);

impl<T: Real> Matrix9<T> {
    pub fn zeros() -> Self {
        Self(Box::new([[czero(); 9]; 9]))
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..9 {
            m.0[i][i] = cone();
        }
        m
    }

    /// Eve's cloning gate, U|i⟩|j⟩ = |i⟩|i + j mod 3⟩. On the ancilla state
    /// |0⟩ this is U|i⟩|0⟩ = |i⟩|i⟩.
    pub fn cloning_unitary() -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[3 * i + (i + j) % 3][3 * i + j] = cone();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..9 {
            for j in 0..9 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..9).fold(czero(), |acc, i| acc + self.0[i][i])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..9 {
            for j in 0..9 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// U A U†.
    pub fn conjugate(&self, a: &Self) -> Self {
        &(self * a) * &self.adjoint()
    }
}

impl<T: Real> Mul for &Matrix9<T> {
    type Output = Matrix9<T>;
    fn mul(self, rhs: Self) -> Matrix9<T> {
        let mut m = Matrix9::zeros();
        for i in 0..9 {
            for k in 0..9 {
                let a = self.0[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..9 {
                    m.0[i][j] = m.0[i][j] + a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<T: Real> Add for &Matrix9<T> {
    type Output = Matrix9<T>;
    fn add(self, rhs: Self) -> Matrix9<T> {
        let mut m = self.clone();
        for i in 0..9 {
            for j in 0..9 {
                m.0[i][j] = m.0[i][j] + rhs.0[i][j];
            }
        }
        m
    }
}

/// A ⊗ B with row index `3 i + k` and column index `3 j + l`.
pub fn kron<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> Matrix9<T> {
    let mut m = Matrix9::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    m.0[3 * i + k][3 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Traces out the second (Eve) factor.
pub fn partial_trace_second<T: Real>(w: &Matrix9<T>) -> Matrix3<T> {
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = (0..3).fold(czero(), |acc, k| acc + w.0[3 * i + k][3 * j + k]);
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Eigen

/// Spectral decomposition of a 3×3 Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen<T> {
    pub values: [T; 3],
    pub vectors: [Vector3<T>; 3],
}

impl<T: Real> HermitianEigen<T> {
    pub fn reconstruct(&self) -> Matrix3<T> {
        let mut m = Matrix3::zeros();
        for (v, &l) in self.vectors.iter().zip(self.values.iter()) {
            m += v.projector().scale(l);
        }
        m
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs within `tol.hermitian` of Hermitian are symmetrized first; anything
/// further off is rejected. Eigenvectors are orthonormal; inside a degenerate
/// eigenspace only their span is meaningful.
pub fn eig_hermitian<T: Real>(h: &Matrix3<T>, tol: &Tolerances) -> Result<HermitianEigen<T>> {
    let defect = h.hermiticity_defect();
    if !(defect <= Tolerances::get(tol.hermitian)) {
        return Err(invalid(format!(
            "matrix is not Hermitian (max |H - H†| = {defect})"
        )));
    }
    Ok(jacobi(&h.hermitian_part()))
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot, then applies a real Givens rotation that annihilates it.
fn jacobi<T: Real>(h: &Matrix3<T>) -> HermitianEigen<T> {
    let mut a = *h;
    let mut v = Matrix3::<T>::identity();
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * scale;

    for _sweep in 0..64 {
        let off = (a.0[0][1].norm_sqr() + a.0[0][2].norm_sqr() + a.0[1][2].norm_sqr()).sqrt();
        if off <= threshold || scale == T::zero() {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a.0[p][q];
            let r = apq.norm();
            if r <= T::min_positive_value() || r <= T::epsilon() * threshold {
                continue;
            }
            let phase = apq / c(r, T::zero());
            let app = a.0[p][p].re;
            let aqq = a.0[q][q].re;
            let tau = (aqq - app) / (r + r);
            let t = if tau >= T::zero() {
                T::one() / (tau + (T::one() + tau * tau).sqrt())
            } else {
                -T::one() / (-tau + (T::one() + tau * tau).sqrt())
            };
            let cs = T::one() / (T::one() + t * t).sqrt();
            let sn = t * cs;

            let mut g = Matrix3::<T>::identity();
            let ph = phase.conj();
            g.0[p][p] = c(cs, T::zero());
            g.0[p][q] = c(sn, T::zero());
            g.0[q][p] = ph * c(-sn, T::zero());
            g.0[q][q] = ph * c(cs, T::zero());

            a = g.adjoint() * a * g;
            a.0[p][q] = czero();
            a.0[q][p] = czero();
            v = v * g;
        }
    }

    let mut idx = [0usize, 1, 2];
    let diag = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re];
    idx.sort_by(|&i, &j| {
        diag[j]
            .partial_cmp(&diag[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let column = |k: usize| Vector3([v.0[0][k], v.0[1][k], v.0[2][k]]).canonical_phase();
    HermitianEigen {
        values: idx.map(|k| diag[k]),
        vectors: idx.map(column),
    }
}

/// Eigendecomposition without the Hermiticity check; callers guarantee the
/// input is Hermitian up to rounding.
pub(crate) fn eig_unchecked<T: Real>(h: &Matrix3<T>) -> HermitianEigen<T> {
    jacobi(&h.hermitian_part())
}

/// Projector onto the strictly positive eigenspace of `h`.
///
/// This maximizes tr(H M) over 0 ≤ M ≤ I. Eigenvalues with |λ| ≤ `tol.eig_zero`
/// are treated as zero and left out, so the result has minimal rank.
pub fn positive_eigenspace_projector<T: Real>(h: &Matrix3<T>, tol: &Tolerances) -> Matrix3<T> {
    let eig = eig_unchecked(h);
    let cutoff = Tolerances::get::<T>(tol.eig_zero);
    let mut p = Matrix3::zeros();
    for (v, &l) in eig.vectors.iter().zip(eig.values.iter()) {
        if l > cutoff {
            p += v.projector();
        }
    }
    p
}

/// Unit eigenvector of the largest eigenvalue.
pub fn top_eigenvector<T: Real>(h: &Matrix3<T>) -> Vector3<T> {
    eig_unchecked(h).vectors[0]
}

// ---------------------------------------------------------------------------
// Random operators

/// Haar-distributed pure state (normalized complex Gaussian vector).
pub fn random_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Vector3<T> {
    let mut g = || -> T { T::lit(rng.sample::<f64, _>(StandardNormal)) };
    let v = Vector3([c(g(), g()), c(g(), g()), c(g(), g())]);
    v.normalized()
}

/// Hermitian matrix with independent standard-normal entries (GUE-like).
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Matrix3<T> {
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = c(
                T::lit(rng.sample::<f64, _>(StandardNormal)),
                T::lit(rng.sample::<f64, _>(StandardNormal)),
            );
        }
    }
    m.hermitian_part()
}

/// Random full-rank density operator G G† / tr(G G†).
pub fn random_density<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Matrix3<T> {
    let mut g = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            g.0[i][j] = c(
                T::lit(rng.sample::<f64, _>(StandardNormal)),
                T::lit(rng.sample::<f64, _>(StandardNormal)),
            );
        }
    }
    let p = g * g.adjoint();
    p.scale(p.trace().re.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_orthonormal(e: &HermitianEigen<f64>, bound: f64) {
        for i in 0..3 {
            for j in 0..3 {
                let ip = e.vectors[i].inner(&e.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip.re - want).abs() < bound && ip.im.abs() < bound,
                    "{i},{j}: {ip}"
                );
            }
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_hermitian(&Matrix3::<f64>::identity(), &tol()).unwrap();
        for l in e.values {
            assert!((l - 1.0).abs() < 1e-12);
        }
        assert_orthonormal(&e, 1e-12);
    }

    #[test]
    fn diagonal_eigen_pairs() {
        let e = eig_hermitian(&Matrix3::<f64>::diag([1.0, 3.0, 2.0]), &tol()).unwrap();
        assert_eq!(e.values, [3.0, 2.0, 1.0]);
        assert_eq!(e.vectors[0], Vector3::basis(1));
        assert_eq!(e.vectors[1], Vector3::basis(2));
        assert_eq!(e.vectors[2], Vector3::basis(0));
    }

    #[test]
    fn transcribed_measurement_is_rank_one_projector() {
        let m = Matrix3::<f64>::from_real([
            [0.9932, -0.0822, 0.0],
            [-0.0822, 0.0068, 0.0],
            [0.0, 0.0, 0.0],
        ]);
        let e = eig_hermitian(&m, &tol()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-3);
        assert!(e.values[1].abs() < 1e-3);
        assert!(e.values[2].abs() < 1e-3);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix3::<f64>::identity();
        m[(0, 1)] = c(0.5, 0.0);
        assert!(eig_hermitian(&m, &tol()).is_err());

        // a rounding-level defect is symmetrized instead
        m[(1, 0)] = c(0.5 + 1e-12, 0.0);
        assert!(eig_hermitian(&m, &tol()).is_ok());
    }

    #[test]
    fn complex_off_diagonal_reconstructs() {
        let mut m = Matrix3::<f64>::diag([0.2, -0.7, 1.1]);
        m[(0, 2)] = c(0.3, -0.4);
        m[(2, 0)] = c(0.3, 0.4);
        m[(1, 2)] = c(0.0, 0.9);
        m[(2, 1)] = c(0.0, -0.9);
        let e = eig_hermitian(&m, &tol()).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-12);
        assert_orthonormal(&e, 1e-12);
        assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
    }

    #[test]
    fn single_precision_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let h: Matrix3<f32> = random_hermitian(&mut rng);
            let e = eig_hermitian(&h, &Tolerances::single_precision()).unwrap();
            assert!((e.reconstruct() - h).frobenius_norm() < 1e-5);
        }
    }

    #[test]
    fn kron_basics() {
        let i9 = kron(&Matrix3::<f64>::identity(), &Matrix3::identity());
        assert_eq!(i9, Matrix9::identity());

        let p = Matrix3::<f64>::basis_projector(0);
        let k = kron(&p, &p);
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(k.0[i][j], c(want, 0.0));
            }
        }
    }

    #[test]
    fn kron_trace_factorizes() {
        // tr(A⊗B) expanded directly: Σ_i Σ_k A_ii B_kk
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Matrix3<f64> = random_hermitian(&mut rng);
            let b: Matrix3<f64> = random_hermitian(&mut rng);
            let mut oracle = c(0.0, 0.0);
            for i in 0..3 {
                for k in 0..3 {
                    oracle += a.0[i][i] * b.0[k][k];
                }
            }
            assert!((kron(&a, &b).trace() - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho: Matrix3<f64> = random_density(&mut rng);
        let sigma: Matrix3<f64> = random_density(&mut rng).scale(2.5);
        let reduced = partial_trace_second(&kron(&rho, &sigma));
        assert!(reduced.max_abs_diff(&rho.scale(2.5)) < 1e-12);

        let three = partial_trace_second(&Matrix9::<f64>::identity());
        assert!(three.max_abs_diff(&Matrix3::identity().scale(3.0)) < 1e-15);
    }

    #[test]
    fn cloning_unitary_dephases_plus_state() {
        let h = 0.5f64.sqrt();
        let psi = Vector3::real(h, h, 0.0);
        let u = Matrix9::cloning_unitary();
        let ancilla = Matrix3::basis_projector(0);
        let out = partial_trace_second(&u.conjugate(&kron(&psi.projector(), &ancilla)));
        assert!(out.max_abs_diff(&Matrix3::diag([0.5, 0.5, 0.0])) < 1e-15);

        let unitarity = &u.adjoint() * &u;
        assert!(unitarity.max_abs_diff(&Matrix9::identity()) < 1e-15);
    }

    #[test]
    fn positive_projector_cases() {
        let p = positive_eigenspace_projector(&Matrix3::<f64>::diag([1.0, -1.0, 0.0]), &tol());
        assert!(p.max_abs_diff(&Matrix3::diag([1.0, 0.0, 0.0])) < 1e-12);

        let z = positive_eigenspace_projector(&-Matrix3::<f64>::identity(), &tol());
        assert!(z.max_abs_diff(&Matrix3::zeros()) < 1e-15);
    }

    #[test]
    fn orthogonal_complement_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a: Vector3<f64> = random_state(&mut rng);
        let b: Vector3<f64> = random_state(&mut rng);
        let w = a.orthogonal_complement(&b);
        assert!(a.inner(&w).norm() < 1e-12);
        assert!(b.inner(&w).norm() < 1e-12);
        assert!((w.norm() - 1.0).abs() < 1e-12);
        assert!(w.0[0].im.abs() < 1e-15 && w.0[0].re > 0.0);
    }
}
