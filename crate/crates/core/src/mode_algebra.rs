//! Vector algebra on collective bosonic modes.
//!
//! A collective mode is a normalized complex coefficient vector over a finite
//! orthonormal basis of field modes; the annihilation operator of the
//! collective mode is the corresponding linear combination of the basis-mode
//! annihilation operators. This module provides the overlap form
//! `⟨q|w⟩ = Σ_k q_k* w_k` (which equals the commutator `[a_q, a†_w]`),
//! deterministic completion of a partial orthonormal set to a full basis, and
//! the balanced site-mode decomposition that expands a pair of orthogonal
//! collective modes as uniform sums and differences over `2N` site modes:
//!
//! ```text
//! a_q = Σ_i (b_i(0) + b_i(1)) / sqrt(2N)
//! a_w = Σ_i (b_i(0) - b_i(1)) / sqrt(2N)
//! ```
//!
//! Site mode `m = 2(i-1) + p` hosts internal state `p ∈ {0,1}` of site `i`,
//! so a mode vector over `2N` basis modes reads directly as `N` dual-rail
//! coefficient pairs.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::wire::ComplexWire;

/// Tolerance for orthonormality preconditions.
pub const ORTHO_TOL: f64 = 1e-9;
/// Gram-Schmidt candidates with residual norm below this are skipped.
pub const GS_THRESHOLD: f64 = 1e-10;

/// A collective bosonic mode: a complex coefficient vector over an ordered
/// orthonormal mode basis.
///
/// The creation operator of the mode is `a†_q = Σ_k q_k b†_k`, so the stored
/// coefficients are exactly the expansion coefficients of `a†_q` over the
/// basis creation operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeVector {
    coeffs: Vec<C64>,
}

impl ModeVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(Self { coeffs })
    }

    /// The canonical basis mode `e_index`.
    pub fn canonical(dim: usize, index: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); dim.max(1)];
        coeffs[index] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// The uniform real mode `(1, …, 1) / sqrt(dim)`.
    pub fn uniform(dim: usize) -> Self {
        let amp = C64::new(1.0 / (dim.max(1) as f64).sqrt(), 0.0);
        Self { coeffs: vec![amp; dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescales to unit Euclidean norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { coeffs: self.coeffs.iter().map(|z| z / n).collect() })
    }

    /// Fixes the global phase so the first coefficient of magnitude above
    /// `1e-10` is real and positive. Modes are physical only up to phase, so
    /// comparisons go through this form.
    pub fn canonical_phase(&self) -> Self {
        for z in &self.coeffs {
            if z.norm() > 1e-10 {
                let phase = z / z.norm();
                return Self {
                    coeffs: self.coeffs.iter().map(|c| c * phase.conj()).collect(),
                };
            }
        }
        self.clone()
    }

    /// Zero-pads to `dim` coefficients.
    pub fn embedded(&self, dim: usize) -> Result<Self> {
        if self.dim() > dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim, C64::new(0.0, 0.0));
        Ok(Self { coeffs })
    }
}

/// `Σ_k q_k* w_k`, the overlap of two modes of equal dimension.
///
/// Equals the bosonic commutator `[a_q, a†_w]`, and is conjugate-symmetric:
/// `overlap(q, w) = overlap(w, q)*`.
pub fn mode_overlap(q: &ModeVector, w: &ModeVector) -> Result<C64> {
    if q.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: w.dim() });
    }
    Ok(q.coeffs
        .iter()
        .zip(&w.coeffs)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

pub(crate) fn check_orthonormal(vectors: &[ModeVector]) -> Result<()> {
    let mut residual: f64 = 0.0;
    for (i, v) in vectors.iter().enumerate() {
        for (j, w) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let overlap = mode_overlap(v, w)?;
            residual = residual.max((overlap - target).norm());
        }
    }
    if residual > ORTHO_TOL {
        return Err(Error::NotOrthonormal { residual });
    }
    Ok(())
}

/// Completes a mutually orthonormal set to a full orthonormal basis of the
/// given dimension, keeping the inputs as the leading vectors.
///
/// Deterministic: candidates are the canonical basis vectors in index order,
/// Gram-Schmidt reduced against everything accepted so far; candidates whose
/// residual norm falls below [`GS_THRESHOLD`] are skipped.
pub fn orthonormal_complete(partial: &[ModeVector], dim: usize) -> Result<Vec<ModeVector>> {
    if partial.len() > dim {
        return Err(Error::TooManyVectors { count: partial.len(), dim });
    }
    for v in partial {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
        }
    }
    check_orthonormal(partial)?;

    let mut basis: Vec<ModeVector> = partial.to_vec();
    for index in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut candidate = ModeVector::canonical(dim, index);
        // Two reduction passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in &basis {
                let overlap = mode_overlap(b, &candidate)?;
                for (c, bc) in candidate.coeffs.iter_mut().zip(&b.coeffs) {
                    *c -= overlap * bc;
                }
            }
        }
        if candidate.norm() < GS_THRESHOLD {
            continue;
        }
        basis.push(candidate.normalized()?);
    }
    if basis.len() != dim {
        return Err(Error::NotOrthonormal { residual: f64::NAN });
    }
    Ok(basis)
}

/// A balanced expansion of an orthonormal mode pair `(q, w)` over `2N`
/// orthonormal site modes, one dual-rail pair per site.
///
/// Built from the sum and difference modes `p = (q+w)/√2`, `k = (q-w)/√2`:
/// the `b_i(0)` live in an `N`-dimensional subspace summing uniformly to `p`,
/// the `b_i(1)` in an orthogonal one summing uniformly to `k`, which yields
/// the identities `a_q = Σ_i (b_i(0)+b_i(1))/√(2N)` and
/// `a_w = Σ_i (b_i(0)-b_i(1))/√(2N)` exactly.
#[derive(Clone, Debug)]
pub struct BalancedDecomposition {
    n_sites: usize,
    site_modes: Vec<ModeVector>,
}

impl BalancedDecomposition {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.n_sites
    }

    /// The ambient vector of site mode `b_site(internal)`, `site` 1-based.
    pub fn site_mode(&self, site: usize, internal: u8) -> &ModeVector {
        &self.site_modes[2 * (site - 1) + internal as usize]
    }

    /// All `2N` site modes in `m = 2(i-1)+p` order.
    pub fn site_modes(&self) -> &[ModeVector] {
        &self.site_modes
    }

    /// Basis-change matrix with row `m` holding site mode `m` in ambient
    /// coordinates; unitary by construction.
    pub fn basis_matrix(&self) -> DMatrix<C64> {
        let d = self.ambient_dim();
        DMatrix::from_fn(d, d, |m, k| self.site_modes[m].coeff(k))
    }

    /// Coordinates of an ambient-space mode in the site-mode basis, i.e. the
    /// coefficients `γ_m` with `a†_v = Σ_m γ_m b†_m`. Vectors of smaller
    /// dimension are zero-padded into the ambient space first.
    pub fn expansion_of(&self, v: &ModeVector) -> Result<ModeVector> {
        let embedded = v.embedded(self.ambient_dim())?;
        let coeffs = self
            .site_modes
            .iter()
            .map(|s| mode_overlap(s, &embedded))
            .collect::<Result<Vec<_>>>()?;
        ModeVector::new(coeffs)
    }
}

/// Expands the orthonormal pair `(q, w)` over `2 * n_sites` site modes such
/// that `a_q` is the uniform sum and `a_w` the uniform difference of the
/// dual-rail pairs. The inputs may live in any dimension up to `2 * n_sites`;
/// they are zero-padded into the ambient space.
pub fn balanced_decomposition(
    q: &ModeVector,
    w: &ModeVector,
    n_sites: usize,
) -> Result<BalancedDecomposition> {
    if q.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: w.dim() });
    }
    if n_sites == 0 {
        return Err(Error::TooFewPhotons { min: 1, found: 0 });
    }
    let ambient = 2 * n_sites;
    let q = q.embedded(ambient)?;
    let w = w.embedded(ambient)?;
    check_orthonormal(&[q.clone(), w.clone()])?;

    let sqrt_half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let sum = ModeVector::new(
        q.coeffs().iter().zip(w.coeffs()).map(|(a, b)| (a + b) * sqrt_half).collect(),
    )?;
    let diff = ModeVector::new(
        q.coeffs().iter().zip(w.coeffs()).map(|(a, b)| (a - b) * sqrt_half).collect(),
    )?;

    let full = orthonormal_complete(&[sum.clone(), diff.clone()], ambient)?;
    // Subspace hosting the b_i(0): sum mode plus n_sites-1 fresh directions;
    // likewise for the b_i(1) around the difference mode.
    let zero_rail: Vec<&ModeVector> =
        std::iter::once(&sum).chain(full[2..n_sites + 1].iter()).collect();
    let one_rail: Vec<&ModeVector> =
        std::iter::once(&diff).chain(full[n_sites + 1..].iter()).collect();

    // Unitary with uniform first column: rotates each rail basis so its
    // members sum uniformly to the rail's first vector.
    let spread = orthonormal_complete(&[ModeVector::uniform(n_sites)], n_sites)?;

    let mut site_modes = Vec::with_capacity(ambient);
    for i in 0..n_sites {
        for rail in [&zero_rail, &one_rail] {
            let mut coeffs = vec![C64::new(0.0, 0.0); ambient];
            for (j, f) in rail.iter().enumerate() {
                let u_ij = spread[j].coeff(i);
                for (c, fc) in coeffs.iter_mut().zip(f.coeffs()) {
                    *c += u_ij * fc;
                }
            }
            site_modes.push(ModeVector::new(coeffs)?);
        }
    }
    Ok(BalancedDecomposition { n_sites, site_modes })
}

#[derive(Serialize, Deserialize)]
struct ModeVectorWire {
    dim: usize,
    coeffs: Vec<ComplexWire>,
}

impl Serialize for ModeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModeVectorWire {
            dim: self.dim(),
            coeffs: self.coeffs.iter().map(|&z| z.into()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ModeVectorWire::deserialize(deserializer)?;
        if wire.dim != wire.coeffs.len() || wire.dim == 0 {
            return Err(D::Error::custom(format!(
                "dim {} does not match {} coefficients",
                wire.dim,
                wire.coeffs.len()
            )));
        }
        Ok(Self { coeffs: wire.coeffs.into_iter().map(C64::from).collect() })
    }
}
