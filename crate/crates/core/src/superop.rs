//! Vectorized density-matrix algebra for a two-level system.
//!
//! Density matrices are flattened into length-4 complex vectors in the fixed
//! order (ρ₁₁, ρ₁₀, ρ₀₁, ρ₀₀), with index 1 the excited state. Every matrix
//! in this crate uses the same ordering. Superoperators act on these vectors
//! as plain 4×4 complex matrices; the Drazin inverse of a generator is
//! computed spectrally by inverting on the complement of the kernel and
//! annihilating the kernel itself.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for the imaginary residue of a trace pairing.
const IM_RESIDUE_TOL: f64 = 1e-10;

/// Kernel-eigenvalue modulus threshold for the Drazin inverse, scaled by the
/// spectral radius.
const KERNEL_TOL: f64 = 1e-12;

/// Minimum modulus allowed for eigenvalues outside the kernel.
const GAP_TOL: f64 = 1e-9;

#[inline]
fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A vectorized 2×2 density matrix (or difference of density matrices) in
/// the order (ρ₁₁, ρ₁₀, ρ₀₁, ρ₀₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec(pub Vector4<Complex64>);

impl StateVec {
    pub fn new(e11: Complex64, e10: Complex64, e01: Complex64, e00: Complex64) -> Self {
        Self(Vector4::new(e11, e10, e01, e00))
    }

    /// Diagonal state with excited population `p1` and ground population `p0`.
    pub fn from_populations(p1: f64, p0: f64) -> Self {
        Self::new(re(p1), re(0.0), re(0.0), re(p0))
    }

    pub fn zero() -> Self {
        Self(Vector4::zeros())
    }

    /// Excited-state population ρ₁₁.
    pub fn excited(&self) -> Complex64 {
        self.0[0]
    }

    /// Ground-state population ρ₀₀.
    pub fn ground(&self) -> Complex64 {
        self.0[3]
    }

    /// ρ₁₀ coherence.
    pub fn coherence(&self) -> Complex64 {
        self.0[1]
    }

    /// Tr ρ = ρ₁₁ + ρ₀₀.
    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    /// |ρ₀₁ − conj(ρ₁₀)|.
    pub fn hermiticity_residual(&self) -> f64 {
        (self.0[2] - self.0[1].conj()).norm()
    }

    /// Entrywise 1-norm, used for trajectory and expansion error measures.
    pub fn one_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    /// Whether this is a physical state: unit trace, hermitian, populations
    /// real and in [0, 1], all within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let p1 = self.0[0];
        let p0 = self.0[3];
        (self.trace() - re(1.0)).norm() <= tol
            && self.hermiticity_residual() <= tol
            && p1.im.abs() <= tol
            && p0.im.abs() <= tol
            && (-tol..=1.0 + tol).contains(&p1.re)
            && (-tol..=1.0 + tol).contains(&p0.re)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0 * re(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0 - other.0)
    }
}

/// A Hermitian observable in the same vectorization as [`StateVec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableVec(pub Vector4<Complex64>);

impl ObservableVec {
    pub fn new(e11: Complex64, e10: Complex64, e01: Complex64, e00: Complex64) -> Self {
        Self(Vector4::new(e11, e10, e01, e00))
    }

    /// The Hamiltonian ħω σ_z/2 as an observable vector (ħω/2)·(1, 0, 0, −1).
    pub fn sigma_z_hamiltonian(hbar: f64, omega: f64) -> Self {
        let half = hbar * omega / 2.0;
        Self::new(re(half), re(0.0), re(0.0), re(-half))
    }

    /// Whether the entries follow the Hermitian pattern: real diagonal,
    /// conjugate off-diagonal pair.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.0[0].im.abs() <= tol
            && self.0[3].im.abs() <= tol
            && (self.0[2] - self.0[1].conj()).norm() <= tol
    }

    /// Tr[A ρ] = A₁₁x₁₁ + A₁₀x₀₁ + A₀₁x₁₀ + A₀₀x₀₀.
    ///
    /// The imaginary part must vanish to within 1e-10 of the result scale;
    /// a larger residue reports broken hermiticity upstream.
    pub fn pair(&self, x: &StateVec) -> Result<f64> {
        let a = &self.0;
        let v = a[0] * x.0[0] + a[1] * x.0[2] + a[2] * x.0[1] + a[3] * x.0[3];
        let scale = 1.0f64.max(v.re.abs());
        if v.im.abs() > IM_RESIDUE_TOL * scale {
            return Err(Error::ImaginaryResidue { residue: v.im });
        }
        Ok(v.re)
    }
}

/// Tr[A ρ] under the fixed vectorization; see [`ObservableVec::pair`].
pub fn trace_pair(obs: &ObservableVec, x: &StateVec) -> Result<f64> {
    obs.pair(x)
}

/// A 4×4 complex matrix acting on [`StateVec`]s: a generator (units of
/// inverse time) or its Drazin inverse (units of time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superop(pub Matrix4<Complex64>);

impl Superop {
    pub fn from_matrix(m: Matrix4<Complex64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Matrix–vector product.
    pub fn apply(&self, x: &StateVec) -> StateVec {
        StateVec(self.0 * x.0)
    }

    /// Residual of trace preservation: the largest column sum over the two
    /// population rows. Zero for a generator.
    pub fn trace_preservation_residual(&self) -> f64 {
        (0..4)
            .map(|j| (self.0[(0, j)] + self.0[(3, j)]).norm())
            .fold(0.0, f64::max)
    }

    /// Drazin inverse via spectral decomposition.
    ///
    /// The kernel is identified as the eigenvalue of smallest modulus, which
    /// must vanish (relative to the spectral radius) while every other
    /// eigenvalue stays clear of zero. The inverse acts as a true inverse on
    /// the complement of the kernel and annihilates the kernel itself, so
    /// L·L^D·L = L, L^D·L·L^D = L^D and L·L^D = L^D·L.
    pub fn drazin(&self) -> Result<Superop> {
        let schur = nalgebra::linalg::Schur::try_new(self.0, f64::EPSILON, 10_000).ok_or(
            Error::DegenerateSpectrum {
                detail: "Schur iteration did not converge".into(),
            },
        )?;
        let eig = schur.eigenvalues().ok_or(Error::DegenerateSpectrum {
            detail: "eigenvalues unavailable".into(),
        })?;

        let mut moduli: Vec<f64> = eig.iter().map(|z| z.norm()).collect();
        moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let radius = 1.0f64.max(moduli[3]);
        if moduli[0] > KERNEL_TOL * radius {
            return Err(Error::DegenerateSpectrum {
                detail: format!(
                    "smallest eigenvalue modulus {:e} is not a kernel",
                    moduli[0]
                ),
            });
        }
        if moduli[1] < GAP_TOL.max(KERNEL_TOL * radius) {
            return Err(Error::DegenerateSpectrum {
                detail: format!(
                    "kernel not one-dimensional: next eigenvalue modulus {:e}",
                    moduli[1]
                ),
            });
        }

        // Kernel projector P = v w†/(w† v) from the singular pair of the
        // smallest singular value; then L^D = (L + P)⁻¹ (I − P).
        let svd = self.0.svd(true, true);
        let u = svd.u.as_ref().ok_or(Error::SingularMatrix {
            context: "SVD of generator",
        })?;
        let v_t = svd.v_t.as_ref().ok_or(Error::SingularMatrix {
            context: "SVD of generator",
        })?;
        let right = v_t.row(3).adjoint(); // L v ≈ 0
        let left = u.column(3).clone_owned(); // w† L ≈ 0
        let overlap = (left.adjoint() * right)[(0, 0)];
        if overlap.norm() < 1e-8 {
            return Err(Error::DegenerateSpectrum {
                detail: "kernel has index greater than one".into(),
            });
        }
        let projector = right * left.adjoint() / overlap;
        let inv = (self.0 + projector)
            .try_inverse()
            .ok_or(Error::SingularMatrix {
                context: "shifted generator",
            })?;
        Ok(Superop(inv * (Matrix4::identity() - projector)))
    }

    /// Entrywise distance scaled by max(1, largest entry of either matrix).
    pub fn relative_distance(&self, other: &Superop) -> f64 {
        let scale = self
            .0
            .iter()
            .chain(other.0.iter())
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn compose(&self, other: &Superop) -> Superop {
        Superop(self.0 * other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tls;

    fn caption_liouvillian() -> Superop {
        tls::liouvillian(1.0, 1.0, 1.0)
    }

    #[test]
    fn pairing_sigma_z_with_diagonal_difference() {
        let obs = ObservableVec::sigma_z_hamiltonian(2.0, 1.0); // ħω/2 = 1
        let x = StateVec::from_populations(1.0, -1.0);
        assert_eq!(obs.pair(&x).unwrap(), 2.0);
    }

    #[test]
    fn pairing_is_linear_in_the_state() {
        let obs = ObservableVec::new(
            Complex64::new(0.3, 0.0),
            Complex64::new(0.1, 0.2),
            Complex64::new(0.1, -0.2),
            Complex64::new(-0.7, 0.0),
        );
        assert_eq!(obs.pair(&StateVec::zero()).unwrap(), 0.0);
    }

    #[test]
    fn pairing_with_gibbs_state() {
        // ω = 2, ħ = 1, n = 1 ⇒ ρ = (1/3, 0, 0, 2/3) and Tr[Hρ] = −1/3.
        let obs = ObservableVec::sigma_z_hamiltonian(1.0, 2.0);
        let x = StateVec::from_populations(1.0 / 3.0, 2.0 / 3.0);
        let got = obs.pair(&x).unwrap();
        assert!((got - (-1.0 / 3.0)).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn pairing_rejects_imaginary_residue() {
        let obs = ObservableVec::new(
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let x = StateVec::from_populations(1.0, 0.0);
        assert!(matches!(obs.pair(&x), Err(Error::ImaginaryResidue { .. })));
    }

    #[test]
    fn generator_annihilates_its_stationary_state() {
        let l = caption_liouvillian();
        let rho = tls::gibbs_from_occupation(1.0);
        assert!(l.apply(&rho).one_norm() < 1e-12);
    }

    #[test]
    fn identity_superoperator_acts_trivially() {
        let x = StateVec::new(
            Complex64::new(0.2, 0.0),
            Complex64::new(0.1, -0.4),
            Complex64::new(0.1, 0.4),
            Complex64::new(0.8, 0.0),
        );
        assert_eq!(Superop::identity().apply(&x), x);
    }

    #[test]
    fn generator_applied_to_excited_projector() {
        // First entry of L·(1,0,0,0) is −γ(n+1) = −2 for γ = n = 1.
        let l = caption_liouvillian();
        let out = l.apply(&StateVec::from_populations(1.0, 0.0));
        assert!((out.excited() - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn drazin_annihilates_the_stationary_state() {
        let ld = caption_liouvillian().drazin().unwrap();
        let rho = tls::gibbs_from_occupation(1.0);
        assert!(ld.apply(&rho).one_norm() < 1e-13);
    }

    #[test]
    fn drazin_matches_closed_form_at_unit_parameters() {
        let ld = caption_liouvillian().drazin().unwrap();
        let closed = tls::drazin_tls(1.0, 1.0, 1.0);
        assert!(ld.relative_distance(&closed) < 1e-10);
    }

    #[test]
    fn drazin_coherence_block_is_a_plain_reciprocal() {
        // The ρ₁₀ block decouples, so its Drazin entry is 1/(−γ(n+½) − iω)
        // = 1/(−1.5 − i) at unit parameters.
        let ld = caption_liouvillian().drazin().unwrap();
        let expect = Complex64::new(1.0, 0.0) / Complex64::new(-1.5, -1.0);
        assert!((ld.0[(1, 1)] - expect).norm() < 1e-12);
    }

    #[test]
    fn drazin_rejects_a_degenerate_kernel() {
        // The zero matrix has a four-dimensional kernel.
        let z = Superop::from_matrix(Matrix4::zeros());
        assert!(matches!(z.drazin(), Err(Error::DegenerateSpectrum { .. })));
    }

    #[test]
    fn drazin_rejects_an_invertible_matrix() {
        assert!(matches!(
            Superop::identity().drazin(),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn drazin_maps_traceless_diagonal_vectors_by_the_population_gap() {
        // L^D (a, 0, 0, −a) = (−a, 0, 0, a)/(γ(2n+1)).
        let (omega, gamma, n, a) = (2.7, 1.3, 0.6, 0.37);
        let ld = tls::liouvillian(omega, gamma, n).drazin().unwrap();
        let out = ld.apply(&StateVec::from_populations(a, -a));
        let k = gamma * (2.0 * n + 1.0);
        assert!((out.excited().re - (-a / k)).abs() < 1e-12);
        assert!((out.ground().re - (a / k)).abs() < 1e-12);
        assert!(out.coherence().norm() < 1e-14);
    }

    #[test]
    fn apply_preserves_tracelessness_of_the_generator_image() {
        let l = caption_liouvillian();
        let x = StateVec::new(
            Complex64::new(0.9, 0.0),
            Complex64::new(0.2, 0.1),
            Complex64::new(0.2, -0.1),
            Complex64::new(0.4, 0.0),
        );
        assert!(l.apply(&x).trace().norm() < 1e-14);
        assert!(l.trace_preservation_residual() < 1e-14);
    }
}
