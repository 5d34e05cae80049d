//! Sparse multimode Fock-state algebra.
//!
//! States are superpositions over occupation-number basis kets, stored as a
//! sorted sparse map from occupation vector to complex amplitude. Creation
//! and annihilation act in arbitrary collective modes,
//!
//! ```text
//! a†_q |..n_k..⟩ = Σ_k q_k sqrt(n_k + 1) |..n_k+1..⟩
//! a_q  |..n_k..⟩ = Σ_k q_k* sqrt(n_k)    |..n_k-1..⟩
//! ```
//!
//! so that `[a_q, a†_w] = Σ_k q_k* w_k` is the mode overlap. Every state
//! tracks an optional definite total photon number; operators shift it by one
//! and keep all bookkeeping within a single number sector.
//!
//! Amplitudes below [`PRUNE_THRESHOLD`] are dropped after each operator
//! application, which bounds term growth under repeated mode rotations. The
//! zero state (empty term map, norm 0) is a legitimate value: annihilating
//! the vacuum or projecting onto an empty subspace produces it.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mode_algebra::ModeVector;


/// Stored amplitudes never fall below this magnitude.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Default cap on the photon number of dense multimode expansions.
pub const DEFAULT_PHOTON_CAP: u32 = 8;

/// Occupation numbers of the basis modes, one entry per mode.
///
/// Ordered lexicographically, which fixes a deterministic iteration order for
/// every sparse state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(occ: Vec<u32>) -> Self {
        Self(occ)
    }

    pub fn zeros(n_modes: usize) -> Self {
        Self(vec![0; n_modes])
    }

    /// Total photon count.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn occ(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(occ: Vec<u32>) -> Self {
        Self(occ)
    }
}

/// A sparse superposition of multimode occupation-number kets.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    n_modes: usize,
    terms: BTreeMap<OccupationVector, C64>,
    number_definite: Option<u32>,
}

impl FockState {
    /// The vacuum: a single all-zeros term with unit amplitude.
    pub fn vacuum(n_modes: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(OccupationVector::zeros(n_modes), C64::new(1.0, 0.0));
        Self { n_modes, terms, number_definite: Some(0) }
    }

    /// The zero state: no terms, norm 0, no definite photon number.
    pub fn zero(n_modes: usize) -> Self {
        Self { n_modes, terms: BTreeMap::new(), number_definite: None }
    }

    /// Builds a state from explicit terms; amplitudes below the pruning
    /// threshold are dropped and the number sector is detected by scan.
    pub fn from_terms<I>(n_modes: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, C64)>,
    {
        let mut terms = BTreeMap::new();
        for (occ, amp) in entries {
            if occ.len() != n_modes {
                return Err(Error::DimensionMismatch { expected: n_modes, found: occ.len() });
            }
            *terms.entry(occ).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        terms.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        let number_definite = detect_number_sector(&terms);
        Ok(Self { n_modes, terms, number_definite })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The common total photon number of every term, if one exists.
    pub fn number_definite(&self) -> Option<u32> {
        self.number_definite
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic occupation order.
    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &C64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> C64 {
        self.terms.get(occ).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, amp| {
            *amp *= factor;
            amp.norm() >= PRUNE_THRESHOLD
        });
        out
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// Applies the creation operator `a†_mode`, raising the photon number by
    /// one.
    pub fn create(&self, mode: &ModeVector) -> Result<Self> {
        if mode.dim() != self.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, found: mode.dim() });
        }
        let mut terms: BTreeMap<OccupationVector, C64> = BTreeMap::new();
        for (occ, amp) in &self.terms {
            for (k, coeff) in mode.coeffs().iter().enumerate() {
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                let mut raised = occ.0.clone();
                raised[k] += 1;
                let factor = (raised[k] as f64).sqrt();
                *terms.entry(OccupationVector(raised)).or_insert(C64::new(0.0, 0.0)) +=
                    amp * coeff * factor;
            }
        }
        terms.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        Ok(Self {
            n_modes: self.n_modes,
            terms,
            number_definite: self.number_definite.map(|n| n + 1),
        })
    }

    /// Applies the annihilation operator `a_mode`, the adjoint of
    /// [`create`](Self::create); the vacuum maps to the zero state.
    pub fn annihilate(&self, mode: &ModeVector) -> Result<Self> {
        if mode.dim() != self.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, found: mode.dim() });
        }
        let mut terms: BTreeMap<OccupationVector, C64> = BTreeMap::new();
        for (occ, amp) in &self.terms {
            for (k, coeff) in mode.coeffs().iter().enumerate() {
                if coeff.norm_sqr() == 0.0 || occ.0[k] == 0 {
                    continue;
                }
                let factor = (occ.0[k] as f64).sqrt();
                let mut lowered = occ.0.clone();
                lowered[k] -= 1;
                *terms.entry(OccupationVector(lowered)).or_insert(C64::new(0.0, 0.0)) +=
                    amp * coeff.conj() * factor;
            }
        }
        terms.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        Ok(Self {
            n_modes: self.n_modes,
            terms,
            number_definite: self.number_definite.and_then(|n| n.checked_sub(1)),
        })
    }

    /// `⟨self|other⟩` by sparse key intersection.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, found: other.n_modes });
        }
        // Intersect over the smaller map; ⟨a|b⟩ = ⟨b|a⟩* restores the order.
        let swapped = other.terms.len() < self.terms.len();
        let (small, large) = if swapped { (other, self) } else { (self, other) };
        let mut acc = C64::new(0.0, 0.0);
        for (occ, amp) in &small.terms {
            if let Some(other_amp) = large.terms.get(occ) {
                acc += amp.conj() * other_amp;
            }
        }
        Ok(if swapped { acc.conj() } else { acc })
    }

    /// `Σ_j factor_j |state_j⟩` over states of equal mode count.
    pub fn linear_combination(parts: &[(C64, &FockState)]) -> Result<Self> {
        let n_modes = parts
            .first()
            .map(|(_, s)| s.n_modes)
            .ok_or(Error::ZeroNorm)?;
        let mut terms: BTreeMap<OccupationVector, C64> = BTreeMap::new();
        for (factor, state) in parts {
            if state.n_modes != n_modes {
                return Err(Error::DimensionMismatch { expected: n_modes, found: state.n_modes });
            }
            for (occ, amp) in &state.terms {
                *terms.entry(occ.clone()).or_insert(C64::new(0.0, 0.0)) += factor * amp;
            }
        }
        terms.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        let number_definite = detect_number_sector(&terms);
        Ok(Self { n_modes, terms, number_definite })
    }

    /// Maximum amplitude difference after aligning the global phase on the
    /// largest amplitude of `self`.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<f64> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, found: other.n_modes });
        }
        let anchor = self
            .terms
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
        let phase = match anchor {
            Some((occ, amp)) => {
                let counterpart = other.amplitude(occ);
                if counterpart.norm() < 1e-300 {
                    C64::new(1.0, 0.0)
                } else {
                    let ratio = counterpart / amp;
                    ratio / ratio.norm()
                }
            }
            None => C64::new(1.0, 0.0),
        };
        let mut dist: f64 = 0.0;
        for (occ, amp) in &self.terms {
            dist = dist.max((amp * phase - other.amplitude(occ)).norm());
        }
        for (occ, amp) in &other.terms {
            dist = dist.max((self.amplitude(occ) * phase - amp).norm());
        }
        Ok(dist)
    }
}

fn detect_number_sector(terms: &BTreeMap<OccupationVector, C64>) -> Option<u32> {
    let mut iter = terms.keys();
    let first = iter.next()?.total();
    iter.all(|occ| occ.total() == first).then_some(first)
}

/// `|n⟩_mode = (a†_mode)^n / sqrt(n!) |vac⟩`, the `n`-photon Fock state of a
/// collective mode, under the default photon cap.
pub fn fock_in_mode(mode: &ModeVector, n: u32) -> Result<FockState> {
    fock_in_mode_with_cap(mode, n, DEFAULT_PHOTON_CAP)
}

/// Same as [`fock_in_mode`] with an explicit resource cap. The cap applies
/// only to modes spread over more than two basis modes, where the expansion
/// has combinatorial size.
pub fn fock_in_mode_with_cap(mode: &ModeVector, n: u32, cap: u32) -> Result<FockState> {
    let spread = mode.coeffs().iter().filter(|z| z.norm_sqr() > 0.0).count();
    if spread > 2 && n > cap {
        return Err(Error::ResourceCap { photons: n, cap });
    }
    let mut state = FockState::vacuum(mode.dim());
    let mut inv_sqrt_factorial = 1.0;
    for k in 1..=n {
        state = state.create(mode)?;
        inv_sqrt_factorial /= (k as f64).sqrt();
    }
    Ok(state.scaled(C64::new(inv_sqrt_factorial, 0.0)))
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    occ: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FockStateWire {
    n_modes: usize,
    number_definite: Option<u32>,
    terms: Vec<TermWire>,
}

impl Serialize for FockState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FockStateWire {
            n_modes: self.n_modes,
            number_definite: self.number_definite,
            terms: self
                .terms
                .iter()
                .map(|(occ, amp)| TermWire { occ: occ.0.clone(), re: amp.re, im: amp.im })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = FockStateWire::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for term in wire.terms {
            if term.occ.len() != wire.n_modes {
                return Err(D::Error::custom("occupation length does not match n_modes"));
            }
            let amp = C64::new(term.re, term.im);
            if terms.insert(OccupationVector(term.occ), amp).is_some() {
                return Err(D::Error::custom("duplicate occupation vector"));
            }
        }
        // An empty map is the zero state and may carry any sector tag; for
        // nonzero states the tag must match the terms, and a missing tag is
        // recomputed by scan.
        let number_definite = if terms.is_empty() {
            wire.number_definite
        } else {
            let detected = detect_number_sector(&terms);
            match wire.number_definite {
                Some(claimed) if detected != Some(claimed) => {
                    return Err(D::Error::custom(
                        "terms do not lie in the declared number sector",
                    ));
                }
                Some(claimed) => Some(claimed),
                None => detected,
            }
        };
        Ok(Self { n_modes: wire.n_modes, terms, number_definite })
    }
}
