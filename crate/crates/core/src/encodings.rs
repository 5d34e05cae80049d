//! Cat-code states seen from the fixed-photon-number side.
//!
//! Encoding a qubit in coherent states of opposite phase, `|0⟩ ≡ |α⟩` and
//! `|1⟩ ≡ |-α⟩`, translates at finite reference size into the same `N`-photon
//! Fock state sitting in two different collective modes `b₊`, `b₋` of the
//! drive/reference pair. Their overlap is exactly `1 - 2|α|²/N`, so the Fock
//! states overlap as
//!
//! ```text
//! ⟨N|N⟩₋ = (1 - 2|α|²/N)^N  ≈  e^{-2|α|²}   for |α|² ≪ N,
//! ```
//!
//! the familiar coherent-state value only in the large-`N` limit. Unlike
//! coherent states, the modes become exactly orthogonal at `|α|² = N/2`;
//! beyond that point `b₊` and `b₋` trade places (the overlap changes sign for
//! odd `N`). At the orthogonal point the logical `|±⟩` cat states are NOON
//! states across `(b₊, b₋)`, and running them through the extraction protocol
//! turns a logical qubit into an `N`-qubit GHZ register.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::extraction::{project_bqc, ExtractionResult, SiteLayout};
use crate::fock_space::{fock_in_mode_with_cap, FockState, DEFAULT_PHOTON_CAP};
use crate::mode_algebra::ModeVector;

/// Logical sign of a cat state `|±⟩ ∝ |α⟩ ± |-α⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A cat-code configuration: `N` reference photons, drive amplitude `alpha`
/// (bounded by `|alpha|² ≤ N`), and the logical sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatSpec {
    pub photons: u32,
    pub alpha: C64,
    pub sign: Sign,
}

impl CatSpec {
    pub fn new(photons: u32, alpha: C64, sign: Sign) -> Result<Self> {
        check_drive_budget(photons, alpha)?;
        Ok(Self { photons, alpha, sign })
    }
}

// |alpha|^2 <= N, with room for roundoff at the boundary.
fn check_drive_budget(photons: u32, alpha: C64) -> Result<()> {
    let alpha_sq = alpha.norm_sqr();
    if alpha_sq > photons as f64 * (1.0 + 1e-12) {
        return Err(Error::AlphaTooLarge { alpha_sq, photons });
    }
    Ok(())
}

/// The collective modes hosting `|α⟩` and `|-α⟩` at reference size `N`, as
/// coefficient vectors over the `(a, b)` drive/reference pair:
///
/// ```text
/// b†₊ = (α/√N) a† + sqrt(1 - |α|²/N) b†
/// b†₋ = (-α/√N) a† + sqrt(1 - |α|²/N) b†
/// ```
///
/// Their overlap is `1 - 2|α|²/N`: zero exactly at `|α|² = N/2`.
pub fn plus_minus_modes(n: u32, alpha: C64) -> Result<(ModeVector, ModeVector)> {
    check_drive_budget(n, alpha)?;
    let shared = C64::new((1.0 - alpha.norm_sqr() / n as f64).max(0.0).sqrt(), 0.0);
    let tilt = alpha / (n as f64).sqrt();
    Ok((
        ModeVector::new(vec![tilt, shared])?,
        ModeVector::new(vec![-tilt, shared])?,
    ))
}

/// Closed-form overlap of the two cat-mode Fock states,
/// `⟨N|N⟩₋ = (1 - 2|α|²/N)^N`.
pub fn fock_overlap(n: u32, alpha: C64) -> Result<C64> {
    fock_overlap_sq(n, alpha.norm_sqr()).map(|x| C64::new(x, 0.0))
}

/// [`fock_overlap`] parametrized by `|α|²` directly; at `alpha_sq = N/2` the
/// result is exactly zero.
pub fn fock_overlap_sq(n: u32, alpha_sq: f64) -> Result<f64> {
    if alpha_sq > n as f64 * (1.0 + 1e-12) {
        return Err(Error::AlphaTooLarge { alpha_sq, photons: n });
    }
    Ok((1.0 - 2.0 * alpha_sq / n as f64).powi(n as i32))
}

/// Normalization constants of the logical `|±⟩` cat states,
/// `N± = 2 (1 ± Re ⟨N|N⟩₋)`.
pub fn cat_normalizations(n: u32, alpha: C64) -> Result<(f64, f64)> {
    let overlap = fock_overlap(n, alpha)?.re;
    Ok((2.0 * (1.0 + overlap), 2.0 * (1.0 - overlap)))
}

/// Extracts the logical cat state `|±⟩` at the orthogonal point
/// `|α|² = N/2` into the register.
///
/// With `b₊` spread over the zero rails and `b₋` over the one rails, the
/// logical state is the NOON state `(|N⟩₊|0⟩₋ ± |0⟩₊|N⟩₋)/√2` and projects
/// onto the GHZ register `(|0…0⟩ ± |1…1⟩)/√2`.
pub fn cat_to_bqc(n: u32, sign: Sign, layout: &SiteLayout) -> Result<ExtractionResult> {
    cat_to_bqc_with_cap(n, sign, layout, DEFAULT_PHOTON_CAP)
}

pub fn cat_to_bqc_with_cap(
    n: u32,
    sign: Sign,
    layout: &SiteLayout,
    cap: u32,
) -> Result<ExtractionResult> {
    if n < 2 {
        return Err(Error::TooFewPhotons { min: 2, found: n });
    }
    if layout.n_sites() != n as usize {
        return Err(Error::DimensionMismatch {
            expected: n as usize,
            found: layout.n_sites(),
        });
    }
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut plus_coeffs = vec![C64::new(0.0, 0.0); layout.n_modes()];
    let mut minus_coeffs = vec![C64::new(0.0, 0.0); layout.n_modes()];
    for site in 1..=layout.n_sites() {
        plus_coeffs[layout.mode_index(site, 0)] = amp;
        minus_coeffs[layout.mode_index(site, 1)] = amp;
    }
    let noon_plus = fock_in_mode_with_cap(&ModeVector::new(plus_coeffs)?, n, cap)?;
    let noon_minus = fock_in_mode_with_cap(&ModeVector::new(minus_coeffs)?, n, cap)?;
    let weight = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let logical = FockState::linear_combination(&[
        (weight, &noon_plus),
        (weight * sign.value(), &noon_minus),
    ])?;
    project_bqc(&logical, layout)
}
