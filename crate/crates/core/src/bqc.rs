//! Dense statevector of the extracted dual-rail quantum computer.
//!
//! After projection onto the one-photon-per-site subspace, `N` photons in
//! `2N` modes behave as an `N`-qubit register: site `i` is a qubit, the
//! occupied internal mode is its value. Basis index `x` reads the site values
//! as a binary string with site 1 the most significant bit.
//!
//! Besides the usual local gates, the register supports collective rotations
//! (first-quantized angular momentum sums, which reduce to independent
//! single-qubit rotations on the one-photon-per-site subspace), entanglement
//! entropy across arbitrary bipartitions, product-state detection, and the
//! extraction of the local-unitary-invariant controlled phase of a two-qubit
//! family from its amplitudes in the per-site `(+,-)` basis.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extraction::SiteLayout;
use crate::mode_algebra::ModeVector;
use crate::ssrc::Axis;
use crate::wire::ComplexWire;

/// Unitarity tolerance for 2x2 gate matrices.
pub const GATE_TOL: f64 = 1e-10;
/// Schmidt coefficients below this contribute nothing to the entropy.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// A dense `N`-qubit state, or the flagged zero vector left by a failed
/// projection.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    n_sites: usize,
    amps: Vec<C64>,
}

impl QubitState {
    /// Wraps `2^N` amplitudes; the vector must be normalized.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let state = Self::from_amplitudes(amps)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    pub(crate) fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::BadAmplitudeCount { len: amps.len() });
        }
        let n_sites = amps.len().trailing_zeros() as usize;
        Ok(Self { n_sites, amps })
    }

    /// The computational basis ket `|x⟩`.
    pub fn basis_state(n_sites: usize, x: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_sites];
        amps[x] = C64::new(1.0, 0.0);
        Self { n_sites, amps }
    }

    /// The flagged all-zero vector of a projection with no survivors.
    pub fn null_state(n_sites: usize) -> Self {
        Self { n_sites, amps: vec![C64::new(0.0, 0.0); 1 << n_sites] }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, x: usize) -> C64 {
        self.amps[x]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.norm() < 1e-12
    }

    /// Bit value of 1-based `site` in basis index `x` (site 1 = MSB).
    pub fn site_bit(&self, x: usize, site: usize) -> u8 {
        ((x >> (self.n_sites - site)) & 1) as u8
    }

    /// Applies a single-qubit gate.
    pub fn apply_local(&self, gate: &LocalGate) -> Result<Self> {
        if gate.site == 0 || gate.site > self.n_sites {
            return Err(Error::SiteOutOfRange { site: gate.site, n_sites: self.n_sites });
        }
        // Guards gates assembled literally rather than through LocalGate::new.
        let residual = unitarity_residual(&gate.matrix);
        if residual > GATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
        let bit = 1usize << (self.n_sites - gate.site);
        let mut amps = self.amps.clone();
        for x in 0..amps.len() {
            if x & bit == 0 {
                let a = amps[x];
                let b = amps[x | bit];
                amps[x] = gate.matrix[0][0] * a + gate.matrix[0][1] * b;
                amps[x | bit] = gate.matrix[1][0] * a + gate.matrix[1][1] * b;
            }
        }
        Ok(Self { n_sites: self.n_sites, amps })
    }

    /// Applies `exp(i angle σ_axis)` to every listed site.
    ///
    /// This is the collective angular-momentum rotation of the underlying
    /// photons restricted to the one-photon-per-site subspace, where it
    /// factorizes over the targeted qubits.
    pub fn collective_rotation(&self, axis: Axis, angle: f64, sites: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_sites + 1];
        for &site in sites {
            if site == 0 || site > self.n_sites {
                return Err(Error::SiteOutOfRange { site, n_sites: self.n_sites });
            }
            if seen[site] {
                return Err(Error::DuplicateSite { site });
            }
            seen[site] = true;
        }
        let matrix = pauli_exponential(axis, angle);
        let mut state = self.clone();
        for &site in sites {
            state = state.apply_local(&LocalGate { site, matrix })?;
        }
        Ok(state)
    }

    /// Von Neumann entropy in bits across the bipartition `(subset, rest)`.
    pub fn entanglement_entropy(&self, subset: &[usize]) -> Result<f64> {
        let mut in_subset = vec![false; self.n_sites + 1];
        for &site in subset {
            if site == 0 || site > self.n_sites {
                return Err(Error::SiteOutOfRange { site, n_sites: self.n_sites });
            }
            if in_subset[site] {
                return Err(Error::DuplicateSite { site });
            }
            in_subset[site] = true;
        }
        if subset.is_empty() || subset.len() == self.n_sites {
            return Err(Error::InvalidBipartition);
        }
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { norm });
        }

        let a_sites: Vec<usize> = (1..=self.n_sites).filter(|&s| in_subset[s]).collect();
        let b_sites: Vec<usize> = (1..=self.n_sites).filter(|&s| !in_subset[s]).collect();
        let rows = 1usize << a_sites.len();
        let cols = 1usize << b_sites.len();
        let mut matrix = DMatrix::<C64>::zeros(rows, cols);
        for (x, &amp) in self.amps.iter().enumerate() {
            let mut row = 0;
            for &site in &a_sites {
                row = (row << 1) | self.site_bit(x, site) as usize;
            }
            let mut col = 0;
            for &site in &b_sites {
                col = (col << 1) | self.site_bit(x, site) as usize;
            }
            matrix[(row, col)] = amp;
        }
        let singular = matrix.svd(false, false).singular_values;
        let mut entropy = 0.0;
        for sigma in singular.iter() {
            if *sigma < ENTROPY_FLOOR {
                continue;
            }
            let p = sigma * sigma;
            entropy -= p * p.log2();
        }
        Ok(entropy)
    }

    /// The single-qubit factors of a product state, or `None` if any site is
    /// entangled with the rest beyond `tol` (in reduced-state purity).
    pub fn product_factors(&self, tol: f64) -> Option<Vec<[C64; 2]>> {
        let mut factors = Vec::with_capacity(self.n_sites);
        for site in 1..=self.n_sites {
            let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
            for (x, &amp) in self.amps.iter().enumerate() {
                let a = self.site_bit(x, site) as usize;
                let partner = x ^ (1usize << (self.n_sites - site));
                rho[a][a] += amp * amp.conj();
                rho[a][1 - a] += amp * self.amps[partner].conj();
            }
            let purity = rho[0][0].norm_sqr()
                + rho[1][1].norm_sqr()
                + 2.0 * rho[0][1].norm_sqr();
            if purity < 1.0 - tol {
                return None;
            }
            factors.push(dominant_eigenvector(&rho));
        }
        Some(factors)
    }

    pub fn is_product(&self, tol: f64) -> bool {
        self.product_factors(tol).is_some()
    }
}

fn dominant_eigenvector(rho: &[[C64; 2]; 2]) -> [C64; 2] {
    let half_trace = 0.5 * (rho[0][0].re + rho[1][1].re);
    let det = rho[0][0].re * rho[1][1].re - rho[0][1].norm_sqr();
    let top = half_trace + (half_trace * half_trace - det).max(0.0).sqrt();
    let candidate = if rho[0][1].norm() > 1e-14 {
        [rho[0][1], C64::new(top, 0.0) - rho[0][0]]
    } else if rho[0][0].re >= rho[1][1].re {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    } else {
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
    };
    let norm = (candidate[0].norm_sqr() + candidate[1].norm_sqr()).sqrt();
    let phase = if candidate[0].norm() > 1e-10 {
        candidate[0] / candidate[0].norm()
    } else {
        candidate[1] / candidate[1].norm()
    };
    [
        candidate[0] / norm * phase.conj(),
        candidate[1] / norm * phase.conj(),
    ]
}

fn pauli_exponential(axis: Axis, angle: f64) -> [[C64; 2]; 2] {
    let (cos, sin) = (angle.cos(), angle.sin());
    let i = C64::new(0.0, 1.0);
    match axis {
        // exp(iθσ) = cos θ I + i sin θ σ
        Axis::X => [
            [C64::new(cos, 0.0), i * sin],
            [i * sin, C64::new(cos, 0.0)],
        ],
        Axis::Y => [
            [C64::new(cos, 0.0), C64::new(sin, 0.0)],
            [C64::new(-sin, 0.0), C64::new(cos, 0.0)],
        ],
        Axis::Z => [
            [C64::new(cos, sin), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(cos, -sin)],
        ],
    }
}

/// A 2x2 unitary acting on one site of the register.
#[derive(Clone, Copy, Debug)]
pub struct LocalGate {
    pub site: usize,
    pub matrix: [[C64; 2]; 2],
}

fn unitarity_residual(matrix: &[[C64; 2]; 2]) -> f64 {
    let mut residual: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let target = if r == c { 1.0 } else { 0.0 };
            let entry: C64 = (0..2).map(|k| matrix[r][k] * matrix[c][k].conj()).sum();
            residual = residual.max((entry - target).norm());
        }
    }
    residual
}

impl LocalGate {
    /// Validates unitarity of the matrix within [`GATE_TOL`].
    pub fn new(site: usize, matrix: [[C64; 2]; 2]) -> Result<Self> {
        let residual = unitarity_residual(&matrix);
        if residual > GATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { site, matrix })
    }

    pub fn identity(site: usize) -> Self {
        Self {
            site,
            matrix: [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
        }
    }

    /// `exp(i angle σ_axis)` on the given site.
    pub fn rotation(site: usize, axis: Axis, angle: f64) -> Self {
        Self { site, matrix: pauli_exponential(axis, angle) }
    }
}

/// The local-phase-invariant controlled phase of a two-qubit state:
/// `φ = arg A₊₊ - arg A₊₋ - arg A₋₊ + arg A₋₋ (mod 2π)` over the amplitudes
/// in the per-site `(+,-)` basis, `|±⟩ ∝ |0⟩ ± |1⟩`.
///
/// Zero for product states; `π` marks a controlled-Z up to local unitaries.
/// All four `(±,±)` amplitudes must be nonvanishing for the phase to be
/// defined.
pub fn controlled_phase_extract(state: &QubitState) -> Result<f64> {
    if state.n_sites() != 2 {
        return Err(Error::WrongQubitCount { expected: 2, found: state.n_sites() });
    }
    // Hadamard on both sites maps computational amplitudes to (+,-) ones.
    let mut plus_minus = [C64::new(0.0, 0.0); 4];
    for (y, pm) in plus_minus.iter_mut().enumerate() {
        for (x, &amp) in state.amps().iter().enumerate() {
            let sign = if (x & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *pm += amp * 0.5 * sign;
        }
    }
    if plus_minus.iter().any(|a| a.norm() < 1e-12) {
        return Err(Error::VanishingAmplitude);
    }
    let phi = plus_minus[0b00].arg() - plus_minus[0b01].arg() - plus_minus[0b10].arg()
        + plus_minus[0b11].arg();
    // + 0.0 canonicalizes an IEEE negative zero.
    Ok(phi.rem_euclid(2.0 * std::f64::consts::PI) + 0.0)
}

/// Projects every site except `a` and `b` onto `|+⟩` and renormalizes,
/// leaving the two-qubit family carried by the chosen pair.
pub fn project_spectators_plus(state: &QubitState, a: usize, b: usize) -> Result<QubitState> {
    let n = state.n_sites();
    if a == 0 || a > n || b == 0 || b > n {
        return Err(Error::SiteOutOfRange { site: a.max(b), n_sites: n });
    }
    if a == b {
        return Err(Error::DuplicateSite { site: a });
    }
    let weight = (0.5f64).powi((n as i32 - 2).max(0)).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 4];
    for (x, &amp) in state.amps().iter().enumerate() {
        let pair = ((state.site_bit(x, a) as usize) << 1) | state.site_bit(x, b) as usize;
        amps[pair] += amp * weight;
    }
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::ZeroNorm);
    }
    QubitState::from_amplitudes(amps.into_iter().map(|z| z / norm).collect())
}

/// The collective mode whose projection equals the given local gates applied
/// after projecting `|N⟩_q1`: each gate acts directly on its site's dual-rail
/// coefficient pair of `q1`. Gates sharing a site compose in list order.
pub fn local_gate_to_mode(
    gates: &[LocalGate],
    q1: &ModeVector,
    layout: &SiteLayout,
) -> Result<ModeVector> {
    if q1.dim() != layout.n_modes() {
        return Err(Error::DimensionMismatch { expected: layout.n_modes(), found: q1.dim() });
    }
    let mut coeffs = q1.coeffs().to_vec();
    for gate in gates {
        if gate.site == 0 || gate.site > layout.n_sites() {
            return Err(Error::SiteOutOfRange { site: gate.site, n_sites: layout.n_sites() });
        }
        let zero = layout.mode_index(gate.site, 0);
        let one = layout.mode_index(gate.site, 1);
        let pair = (coeffs[zero], coeffs[one]);
        coeffs[zero] = gate.matrix[0][0] * pair.0 + gate.matrix[0][1] * pair.1;
        coeffs[one] = gate.matrix[1][0] * pair.0 + gate.matrix[1][1] * pair.1;
    }
    ModeVector::new(coeffs)
}

/// Maximum amplitude deviation between two registers after aligning global
/// phase on the largest amplitude of `a`.
pub fn phase_aligned_distance(a: &QubitState, b: &QubitState) -> Result<f64> {
    if a.n_sites() != b.n_sites() {
        return Err(Error::WrongQubitCount { expected: a.n_sites(), found: b.n_sites() });
    }
    let anchor = (0..a.amps().len())
        .max_by(|&i, &j| a.amps()[i].norm().total_cmp(&a.amps()[j].norm()))
        .unwrap_or(0);
    let phase = {
        let (ai, bi) = (a.amplitude(anchor), b.amplitude(anchor));
        if ai.norm() < 1e-300 || bi.norm() < 1e-300 {
            C64::new(1.0, 0.0)
        } else {
            let ratio = bi / ai;
            ratio / ratio.norm()
        }
    };
    Ok(a.amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max))
}

#[derive(Serialize, Deserialize)]
struct QubitStateWire {
    #[serde(rename = "N")]
    n: usize,
    amps: Vec<ComplexWire>,
}

impl Serialize for QubitState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QubitStateWire {
            n: self.n_sites,
            amps: self.amps.iter().map(|&z| z.into()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QubitState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = QubitStateWire::deserialize(deserializer)?;
        if wire.amps.len() != 1usize << wire.n {
            return Err(D::Error::custom(format!(
                "{} qubits demand {} amplitudes, found {}",
                wire.n,
                1usize << wire.n,
                wire.amps.len()
            )));
        }
        let state = Self::from_amplitudes(wire.amps.into_iter().map(C64::from).collect())
            .map_err(|e| D::Error::custom(e.to_string()))?;
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 && norm > 1e-9 {
            return Err(D::Error::custom(format!(
                "register must be normalized or the flagged zero state, norm {norm}"
            )));
        }
        Ok(state)
    }
}
