//! The conversion protocol from multimode photon states to dual-rail qubits.
//!
//! `N` photons spread over `2N` site modes become an `N`-qubit register by
//! projecting onto the subspace with exactly one photon per site: each
//! surviving occupation pattern is a computational basis ket, with the
//! occupied internal mode as the bit value. The projector keeps an `N`-photon
//! Fock state of a single collective mode separable,
//!
//! ```text
//! P (a†_q)^N |vac⟩  ∝  Π_k (q_k(0) b†_k(0) + q_k(1) b†_k(1)) |vac⟩
//!                    ∝  Π_k (cos θ_k |0⟩ + e^{iφ_k} sin θ_k |1⟩),
//! ```
//!
//! turning particle separability into modal separability, while a Kerr gate
//! applied upstream entangles the register. [`kerr_then_project`] runs that
//! pipeline end to end over the balanced site decomposition, where the
//! surviving amplitudes carry pure phases `e^{iη(2n_+ - N)²}` indexed by the
//! number of sites in the per-site `+` state; any two sites then host a
//! controlled phase of exactly `8η`, independent of `N`.
//!
//! Projection success probabilities are tracked exactly; for a single-mode
//! Fock state the probability is `N! Π_k r_k²` with `r_k` the weight of the
//! site-`k` coefficient pair, `N!/N^N` in the balanced case. Zero survivors
//! is a legitimate outcome, reported as probability 0 with a flagged zero
//! register.

use num_complex::Complex64 as C64;

use crate::bqc::QubitState;
use crate::error::{Error, Result};
use crate::fock_space::{fock_in_mode_with_cap, FockState, DEFAULT_PHOTON_CAP};
use crate::mode_algebra::{balanced_decomposition, ModeVector};
use crate::ssrc::{ln_factorial, Axis, GateSpec, SSRCState};

/// Fixed assignment of `2N` ambient modes to `N` dual-rail sites:
/// mode `m = 2(site-1) + internal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteLayout {
    n_sites: usize,
}

impl SiteLayout {
    pub fn new(n_sites: usize) -> Self {
        assert!(n_sites >= 1, "a register needs at least one site");
        Self { n_sites }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_sites
    }

    /// Ambient mode index of `(site, internal)`, `site` 1-based.
    pub fn mode_index(&self, site: usize, internal: u8) -> usize {
        debug_assert!(site >= 1 && site <= self.n_sites);
        debug_assert!(internal <= 1);
        2 * (site - 1) + internal as usize
    }

    /// Inverse of [`mode_index`](Self::mode_index).
    pub fn site_of(&self, mode: usize) -> (usize, u8) {
        (mode / 2 + 1, (mode % 2) as u8)
    }
}

/// Per-site dual-rail parameters of a collective mode: the coefficient pair
/// `(q_k(0), q_k(1))` written as `r_k (cos θ_k, e^{iφ_k} sin θ_k)` up to a
/// site-local phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiteParams {
    pub theta: f64,
    pub phi: f64,
    /// Site weight `r_k = sqrt(|q_k(0)|² + |q_k(1)|²)`; a vanishing weight
    /// flags an empty site and a projection probability of zero.
    pub weight: f64,
}

/// Outcome of a projection onto the one-photon-per-site subspace.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    pub qubits: QubitState,
    /// Squared norm of the surviving component, in `[0, 1]`.
    pub probability: f64,
    /// Dual-rail angles of the input mode, when the input was a single-mode
    /// Fock state.
    pub site_params: Option<Vec<SiteParams>>,
}

/// Projects an `N`-photon state over `2N` modes onto the register subspace.
///
/// A term survives when every site holds exactly one photon; the surviving
/// occupation maps to the basis index with site 1 as the most significant
/// bit. No survivors yields probability 0 and the flagged zero register.
pub fn project_bqc(state: &FockState, layout: &SiteLayout) -> Result<ExtractionResult> {
    let n = layout.n_sites();
    if state.n_modes() != layout.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: layout.n_modes(),
            found: state.n_modes(),
        });
    }
    match state.number_definite() {
        None => return Err(Error::IndefinitePhotonNumber),
        Some(photons) if photons != n as u32 => {
            return Err(Error::PhotonNumberMismatch { expected: n as u32, found: photons })
        }
        Some(_) => {}
    }

    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    let mut probability = 0.0;
    'terms: for (occ, &amp) in state.terms() {
        let mut index = 0usize;
        for site in 1..=n {
            let zero = occ.occ(layout.mode_index(site, 0));
            let one = occ.occ(layout.mode_index(site, 1));
            if zero + one != 1 {
                continue 'terms;
            }
            index = (index << 1) | one as usize;
        }
        amps[index] = amp;
        probability += amp.norm_sqr();
    }

    let qubits = if probability > 0.0 {
        let scale = C64::new(1.0 / probability.sqrt(), 0.0);
        QubitState::new(amps.into_iter().map(|z| z * scale).collect())?
    } else {
        QubitState::null_state(n)
    };
    Ok(ExtractionResult { qubits, probability, site_params: None })
}

/// Splits a collective mode over `2N` modes into per-site dual-rail angles.
pub fn extraction_params(q: &ModeVector, layout: &SiteLayout) -> Result<Vec<SiteParams>> {
    if q.dim() != layout.n_modes() {
        return Err(Error::DimensionMismatch { expected: layout.n_modes(), found: q.dim() });
    }
    Ok((1..=layout.n_sites())
        .map(|site| {
            let zero = q.coeff(layout.mode_index(site, 0));
            let one = q.coeff(layout.mode_index(site, 1));
            SiteParams {
                theta: one.norm().atan2(zero.norm()),
                phi: one.arg() - zero.arg(),
                weight: (zero.norm_sqr() + one.norm_sqr()).sqrt(),
            }
        })
        .collect())
}

/// The normalized product register `Π_k (cos θ_k |0⟩ + e^{iφ_k} sin θ_k |1⟩)`
/// described by per-site parameters.
pub fn params_product_state(params: &[SiteParams]) -> Result<QubitState> {
    let n = params.len();
    if n == 0 {
        return Err(Error::WrongQubitCount { expected: 1, found: 0 });
    }
    let mut amps = vec![C64::new(1.0, 0.0); 1 << n];
    for (x, amp) in amps.iter_mut().enumerate() {
        for (k, p) in params.iter().enumerate() {
            let bit = (x >> (n - 1 - k)) & 1;
            *amp *= if bit == 0 {
                C64::new(p.theta.cos(), 0.0)
            } else {
                C64::from_polar(p.theta.sin(), p.phi)
            };
        }
    }
    QubitState::new(amps)
}

/// Projection probability of `|N⟩_q`: `N! Π_k r_k²`.
pub fn params_probability(params: &[SiteParams]) -> f64 {
    let n = params.len() as u32;
    let ln_weights: f64 = params.iter().map(|p| 2.0 * p.weight.ln()).sum();
    if params.iter().any(|p| p.weight == 0.0) {
        return 0.0;
    }
    (ln_factorial(n) + ln_weights).exp()
}

/// Projects the single-mode Fock state `|N⟩_q` with `N = layout.n_sites()`,
/// carrying the dual-rail angles of `q` along in the result.
pub fn project_single_mode(q: &ModeVector, layout: &SiteLayout) -> Result<ExtractionResult> {
    project_single_mode_with_cap(q, layout, DEFAULT_PHOTON_CAP)
}

pub fn project_single_mode_with_cap(
    q: &ModeVector,
    layout: &SiteLayout,
    cap: u32,
) -> Result<ExtractionResult> {
    let fock = fock_in_mode_with_cap(q, layout.n_sites() as u32, cap)?;
    let mut result = project_bqc(&fock, layout)?;
    result.site_params = Some(extraction_params(q, layout)?);
    Ok(result)
}

/// Runs the Kerr pipeline end to end: prepare `|N⟩_q` in the balanced mode
/// `q = (q1 + w)/√2`, apply `exp(4iη Jz²)` in the `(q1, w)` sector, expand
/// over the balanced site modes and project.
///
/// The success probability is `N!/N^N` independent of `η`; the register
/// amplitudes in the per-site `(+,-)` basis are the pure phases
/// `e^{iη(2n_+ - N)²}`.
pub fn kerr_then_project(n: u32, eta: f64) -> Result<ExtractionResult> {
    kerr_then_project_with_cap(n, eta, DEFAULT_PHOTON_CAP)
}

pub fn kerr_then_project_with_cap(n: u32, eta: f64, cap: u32) -> Result<ExtractionResult> {
    if n < 2 {
        return Err(Error::TooFewPhotons { min: 2, found: n });
    }
    if n > cap {
        return Err(Error::ResourceCap { photons: n, cap });
    }
    let layout = SiteLayout::new(n as usize);
    let primary = ModeVector::canonical(2, 0);
    let reference = ModeVector::canonical(2, 1);
    let balanced = balanced_decomposition(&primary, &reference, n as usize)?;
    let q1 = balanced.expansion_of(&primary)?;
    let w = balanced.expansion_of(&reference)?;

    // |N⟩ in (q1 + w)/√2 has the binomial profile sqrt(C(N,n)/2^N).
    let coeffs: Vec<C64> = (0..=n)
        .map(|k| {
            let ln_c = 0.5 * (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
                - 0.5 * n as f64 * std::f64::consts::LN_2;
            C64::new(ln_c.exp(), 0.0)
        })
        .collect();
    let prepared = SSRCState::new(coeffs)?;
    let kicked = prepared.apply_gate(&GateSpec::kerr(Axis::Z, eta))?;
    let fock = kicked.to_fock(&q1, &w)?;
    project_bqc(&fock, &layout)
}
