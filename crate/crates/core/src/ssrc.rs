//! Two-mode states at fixed total photon number and their universal gates.
//!
//! A pure bosonic state that respects the particle-number superselection rule
//! splits `N` photons between a primary mode `A` and a quantized phase
//! reference `R`:
//!
//! ```text
//! |Ψ⟩ = Σ_n c_n |n⟩_A |N-n⟩_R
//! ```
//!
//! The `N+1` coefficients are the whole state; this module stores them
//! directly. The Jordan-Schwinger map turns the two modes into an angular
//! momentum of size `j = N/2`,
//!
//! ```text
//! Jx = (a†_A a_R + a†_R a_A)/2,   Jy = (a†_A a_R - a†_R a_A)/(2i),
//! Jz = (a†_A a_A - a†_R a_R)/2,
//! ```
//!
//! whose linear generators are passive linear optics (beam splitters and
//! phase shifts) and whose squares are Kerr-type nonlinearities. Rotations
//! only move the state between collective modes; the Kerr gate
//! `exp(4iη Jz²)` leaves the mode picture and entangles the pair, which is
//! what completes the universal set.
//!
//! Rotations about x and y are evaluated by exact eigendecomposition of the
//! Hermitian generator, so the gates are unitary to machine precision at any
//! photon number. The module also carries the classical-limit bookkeeping:
//! spin-coherent states (Fock states in a rotated mode) and the exact finite
//! `N` amplitudes that converge to the Glauber coefficients of a coherent
//! state as the reference grows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock_space::FockState;
use crate::mode_algebra::{check_orthonormal, ModeVector};
use crate::wire::ComplexWire;

/// Normalization tolerance on state coefficients.
pub const NORM_TOL: f64 = 1e-9;

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// A fixed-`N` two-mode state: the coefficients `c_n` of `|n⟩_A |N-n⟩_R`,
/// `n` ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SSRCState {
    c: Vec<C64>,
}

impl SSRCState {
    /// Wraps a normalized coefficient vector of length `N+1`.
    pub fn new(c: Vec<C64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { c })
    }

    /// Normalizes and wraps an arbitrary nonzero coefficient vector.
    pub fn from_unnormalized(c: Vec<C64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { c: c.into_iter().map(|z| z / norm).collect() })
    }

    /// The basis ket with `photons_in_a` photons in the primary mode.
    pub fn number_ket(n: u32, photons_in_a: u32) -> Self {
        assert!(photons_in_a <= n, "cannot put {photons_in_a} of {n} photons in mode A");
        let mut c = vec![C64::new(0.0, 0.0); n as usize + 1];
        c[photons_in_a as usize] = C64::new(1.0, 0.0);
        Self { c }
    }

    /// Total photon number `N`.
    pub fn photon_number(&self) -> u32 {
        (self.c.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.c
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.c[n]
    }

    pub fn norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a rotation or Kerr gate.
    pub fn apply_gate(&self, gate: &GateSpec) -> Result<Self> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        if !gate.parameter.is_finite() {
            return Err(Error::NotUnitary { residual: f64::NAN });
        }
        let n = self.photon_number();
        // Jz is diagonal here, so z gates reduce to per-coefficient phases.
        if gate.axis == Axis::Z {
            let half_n = n as f64 / 2.0;
            let c = self
                .c
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    let m = k as f64 - half_n;
                    let phase = match gate.kind {
                        GateKind::Rotation => gate.parameter * m,
                        GateKind::Kerr => 4.0 * gate.parameter * m * m,
                    };
                    z * C64::new(0.0, phase).exp()
                })
                .collect();
            return Ok(Self { c });
        }
        let unitary = jordan_schwinger(n).gate_unitary(gate);
        let rotated = unitary * DVector::from_column_slice(&self.c);
        Ok(Self { c: rotated.iter().copied().collect() })
    }

    /// Expands the state over concrete collective modes:
    /// `Σ_n c_n (a†_q)^n (a†_w)^{N-n} / sqrt(n!(N-n)!) |vac⟩`.
    ///
    /// `q` and `w` must be orthonormal; the result is normalized.
    pub fn to_fock(&self, q: &ModeVector, w: &ModeVector) -> Result<FockState> {
        check_orthonormal(&[q.clone(), w.clone()])?;
        let n = self.photon_number();
        // Ladder of reference-mode states (a†_w)^m |vac⟩, shared across n.
        let mut w_ladder = Vec::with_capacity(n as usize + 1);
        w_ladder.push(FockState::vacuum(q.dim()));
        for m in 0..n {
            w_ladder.push(w_ladder[m as usize].create(w)?);
        }
        let mut parts = Vec::with_capacity(n as usize + 1);
        for (k, &coeff) in self.c.iter().enumerate() {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let mut term = w_ladder[n as usize - k].clone();
            for _ in 0..k {
                term = term.create(q)?;
            }
            let norm_factor =
                (-0.5 * (ln_factorial(k as u32) + ln_factorial(n - k as u32))).exp();
            parts.push(term.scaled(coeff * norm_factor));
        }
        let refs: Vec<(C64, &FockState)> =
            parts.iter().map(|s| (C64::new(1.0, 0.0), s)).collect();
        FockState::linear_combination(&refs)?.normalized()
    }

    /// Reads the coefficients as Fock amplitudes of a single conventional
    /// mode, the externalized-reference picture. Pure relabeling.
    pub fn to_cv(&self) -> Vec<C64> {
        self.c.clone()
    }

    /// Inverse of [`to_cv`](Self::to_cv).
    pub fn from_cv(amps: Vec<C64>) -> Result<Self> {
        Self::new(amps)
    }
}

/// Rotation axis of the angular-momentum generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Gate family: linear rotation `exp(iθ J)` or quadratic Kerr `exp(4iη J²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Rotation,
    Kerr,
}

/// A single gate from the universal set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub axis: Axis,
    /// Angle θ for rotations, Kerr strength η for the quadratic gate.
    pub parameter: f64,
}

impl GateSpec {
    pub fn rotation(axis: Axis, theta: f64) -> Self {
        Self { kind: GateKind::Rotation, axis, parameter: theta }
    }

    pub fn kerr(axis: Axis, eta: f64) -> Self {
        Self { kind: GateKind::Kerr, axis, parameter: eta }
    }

    /// The gate's action on single-photon states, as the 2x2 unitary on the
    /// coefficient pair `(c_R, c_A)` of a collective mode.
    ///
    /// Rotations act on a Fock state `|N⟩_m` purely as this mode
    /// transformation, `m ↦ M m`; the Kerr gate reduces to a global phase
    /// here because `Jz²` is scalar at `N = 1`.
    pub fn mode_pair_action(&self) -> [[C64; 2]; 2] {
        let single = SSRCState::number_ket(1, 0).apply_gate(self).expect("unit ket");
        let col0 = single.coeffs().to_vec();
        let single = SSRCState::number_ket(1, 1).apply_gate(self).expect("unit ket");
        let col1 = single.coeffs().to_vec();
        [[col0[0], col1[0]], [col0[1], col1[1]]]
    }
}

/// Dense matrices of `Jx`, `Jy`, `Jz` on the fixed-`N` sector, in the
/// `|n⟩_A |N-n⟩_R` basis with `n` ascending.
#[derive(Clone, Debug)]
pub struct AngularMomentumOps {
    n: u32,
    jx: DMatrix<C64>,
    jy: DMatrix<C64>,
    jz: DMatrix<C64>,
}

impl AngularMomentumOps {
    pub fn photon_number(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    pub fn jx(&self) -> &DMatrix<C64> {
        &self.jx
    }

    pub fn jy(&self) -> &DMatrix<C64> {
        &self.jy
    }

    pub fn jz(&self) -> &DMatrix<C64> {
        &self.jz
    }

    /// `Jx² + Jy² + Jz²`; equals `(N/2)(N/2 + 1)` times the identity.
    pub fn casimir(&self) -> DMatrix<C64> {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    fn generator(&self, axis: Axis) -> &DMatrix<C64> {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// The full unitary matrix of a gate on this sector.
    pub fn gate_unitary(&self, gate: &GateSpec) -> DMatrix<C64> {
        let generator = self.generator(gate.axis);
        match gate.kind {
            GateKind::Rotation => hermitian_function(generator, |lambda| {
                C64::new(0.0, gate.parameter * lambda).exp()
            }),
            GateKind::Kerr => hermitian_function(generator, |lambda| {
                C64::new(0.0, 4.0 * gate.parameter * lambda * lambda).exp()
            }),
        }
    }
}

/// Builds the Jordan-Schwinger angular momentum matrices for `N` photons.
///
/// `Jz` is diagonal with entries `(2n - N)/2`; the ladder operator
/// `J₊ = a†_A a_R` has matrix elements `sqrt(n(N-n+1))` one step below the
/// diagonal, and `Jx = (J₊ + J₋)/2`, `Jy = (J₊ - J₋)/(2i)`.
pub fn jordan_schwinger(n: u32) -> AngularMomentumOps {
    let dim = n as usize + 1;
    let mut jz = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        jz[(k, k)] = C64::new(k as f64 - n as f64 / 2.0, 0.0);
    }
    let mut raise = DMatrix::zeros(dim, dim);
    for k in 0..n as usize {
        // ⟨n=k+1| a†_A a_R |n=k⟩ = sqrt((k+1)(N-k))
        raise[(k + 1, k)] = C64::new(((k + 1) as f64 * (n as usize - k) as f64).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower) * C64::new(0.5, 0.0);
    let jy = (&raise - &lower) * C64::new(0.0, -0.5);
    AngularMomentumOps { n, jx, jy, jz }
}

/// `f(H)` for Hermitian `H`, by exact eigendecomposition.
fn hermitian_function(h: &DMatrix<C64>, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

/// The spin-coherent state of polar angles `(θ, φ)`: the extremal number ket
/// rotated by `Jy` then `Jz`.
///
/// Equals, up to a global phase, the Fock state `|N⟩_B` in the tilted mode
/// `a†_B = sin(θ/2) a†_A - e^{iφ} cos(θ/2) a†_R`, so these are the
/// classical-like states of the fixed-`N` sector.
pub fn spin_coherent(n: u32, theta: f64, phi: f64) -> SSRCState {
    SSRCState::number_ket(n, 0)
        .apply_gate(&GateSpec::rotation(Axis::Y, -theta))
        .and_then(|s| s.apply_gate(&GateSpec::rotation(Axis::Z, -phi)))
        .expect("rotations preserve normalization")
}

/// Exact amplitude of `k` photons ending up in the signal mode when a
/// reference of `N` photons plays the role of a coherent drive of amplitude
/// `alpha`:
///
/// ```text
/// sqrt(C(N,k)) (alpha/sqrt(N))^k (1 - |alpha|²/N)^{(N-k)/2}
/// ```
///
/// Evaluated in log space so that `N` in the tens of thousands stays finite.
/// Converges to [`poisson_amplitude`] as `N → ∞` at fixed `alpha`.
pub fn coherent_limit_exact(n: u32, alpha: C64, k: u32) -> Result<C64> {
    let alpha_sq = alpha.norm_sqr();
    if alpha_sq >= n as f64 {
        return Err(Error::AlphaTooLarge { alpha_sq, photons: n });
    }
    if k > n {
        return Err(Error::PhotonNumberMismatch { expected: n, found: k });
    }
    let n_f = n as f64;
    let mut ln_mag = 0.5 * (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k));
    ln_mag += 0.5 * (n - k) as f64 * (1.0 - alpha_sq / n_f).ln();
    if k > 0 {
        if alpha.norm_sqr() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        ln_mag += k as f64 * (alpha.norm().ln() - 0.5 * n_f.ln());
    }
    let phase = k as f64 * alpha.arg();
    Ok(C64::from_polar(ln_mag.exp(), phase))
}

/// Glauber coefficient `e^{-|alpha|²/2} alpha^k / sqrt(k!)` of a coherent
/// state.
pub fn poisson_amplitude(alpha: C64, k: u32) -> C64 {
    if alpha.norm_sqr() == 0.0 {
        return if k == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let ln_mag =
        -0.5 * alpha.norm_sqr() + k as f64 * alpha.norm().ln() - 0.5 * ln_factorial(k);
    C64::from_polar(ln_mag.exp(), k as f64 * alpha.arg())
}

#[derive(Serialize, Deserialize)]
struct SSRCStateWire {
    #[serde(rename = "N")]
    n: u32,
    c: Vec<ComplexWire>,
}

impl Serialize for SSRCState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SSRCStateWire {
            n: self.photon_number(),
            c: self.c.iter().map(|&z| z.into()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SSRCState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SSRCStateWire::deserialize(deserializer)?;
        if wire.c.len() != wire.n as usize + 1 {
            return Err(D::Error::custom(format!(
                "N = {} demands {} coefficients, found {}",
                wire.n,
                wire.n + 1,
                wire.c.len()
            )));
        }
        SSRCState::new(wire.c.into_iter().map(C64::from).collect())
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}
