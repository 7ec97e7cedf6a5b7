//! Truncated multi-mode Fock states and classical mixtures of them.

use num_complex::Complex64;

use super::FockError;

/// Tolerance on `Σ|ψ|² = 1` and on ensemble probability sums.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Default per-mode truncation (0 to 4 excitations).
pub const DEFAULT_CUTOFF: usize = 4;

/// Largest basis we are willing to allocate.
const MAX_DIMENSION: usize = 1 << 24;

/// A pure state on `num_modes` bosonic modes, each truncated at `cutoff`
/// excitations.
///
/// Amplitudes are stored row-major over the multi-index `(n_0, …, n_{k-1})`
/// with mode 0 the most significant digit in base `cutoff + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    num_modes: usize,
    cutoff: usize,
    amplitudes: Vec<Complex64>,
}

fn dimension(num_modes: usize, cutoff: usize) -> Result<usize, FockError> {
    if num_modes == 0 {
        return Err(FockError::NoModes);
    }
    if cutoff == 0 {
        return Err(FockError::InvalidCutoff);
    }
    let base = cutoff + 1;
    u32::try_from(num_modes)
        .ok()
        .and_then(|k| base.checked_pow(k))
        .filter(|&d| d <= MAX_DIMENSION)
        .ok_or(FockError::DimensionTooLarge { num_modes, cutoff })
}

impl FockState {
    /// All modes empty.
    pub fn vacuum(num_modes: usize, cutoff: usize) -> Result<Self, FockError> {
        Self::basis(cutoff, &vec![0; num_modes])
    }

    /// The number state `|n_0, n_1, …⟩`.
    pub fn basis(cutoff: usize, occupations: &[usize]) -> Result<Self, FockError> {
        let dim = dimension(occupations.len(), cutoff)?;
        let mut state = FockState {
            num_modes: occupations.len(),
            cutoff,
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
        };
        let idx = state.index_of(occupations)?;
        state.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps a raw amplitude vector. The vector is not renormalized; operations
    /// that require a normalized input check it themselves.
    pub fn from_amplitudes(
        num_modes: usize,
        cutoff: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, FockError> {
        let expected = dimension(num_modes, cutoff)?;
        if amplitudes.len() != expected {
            return Err(FockError::DimensionMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        Ok(FockState {
            num_modes,
            cutoff,
            amplitudes,
        })
    }

    /// Single-mode coherent state `|α⟩`, truncated at `cutoff` and renormalized.
    pub fn coherent(alpha: Complex64, cutoff: usize) -> Result<Self, FockError> {
        let dim = dimension(1, cutoff)?;
        let mut amps = Vec::with_capacity(dim);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..dim {
            if n > 0 {
                term *= alpha / (n as f64).sqrt();
            }
            amps.push(term);
        }
        let mut state = FockState::from_amplitudes(1, cutoff, amps)?;
        state.renormalize()?;
        Ok(state)
    }

    /// Two-mode state `Σ_n √p_n |n, n⟩` with pair-number probabilities `p_n`,
    /// truncated at `cutoff` and renormalized.
    ///
    /// With thermal `p_n` this is the two-mode squeezed vacuum up to phases;
    /// with Poisson `p_n` it is the idealized pulsed-source picture.
    pub fn from_pair_distribution(probabilities: &[f64], cutoff: usize) -> Result<Self, FockError> {
        let mut state = FockState::vacuum(2, cutoff)?;
        state.amplitudes[0] = Complex64::new(0.0, 0.0);
        for (n, &p) in probabilities.iter().enumerate().take(cutoff + 1) {
            if !(0.0..=1.0).contains(&p) {
                return Err(FockError::InvalidProbability {
                    name: "pair probability",
                    value: p,
                });
            }
            let idx = state.index_of(&[n, n])?;
            state.amplitudes[idx] = Complex64::new(p.sqrt(), 0.0);
        }
        state.renormalize()?;
        Ok(state)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Basis size, `(cutoff + 1)^num_modes`.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Result<Complex64, FockError> {
        Ok(self.amplitudes[self.index_of(occupations)?])
    }

    pub fn probability(&self, occupations: &[usize]) -> Result<f64, FockError> {
        Ok(self.amplitude(occupations)?.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<(), FockError> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() <= NORM_TOLERANCE {
            Ok(())
        } else {
            Err(FockError::Unnormalized(n))
        }
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn renormalize(&mut self) -> Result<(), FockError> {
        let n = self.norm_sqr();
        if n <= 0.0 || !n.is_finite() {
            return Err(FockError::Unnormalized(n));
        }
        let scale = 1.0 / n.sqrt();
        self.amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(())
    }

    pub(crate) fn base(&self) -> usize {
        self.cutoff + 1
    }

    /// Distance in the flat index between `n_mode` and `n_mode + 1`.
    pub(crate) fn stride(&self, mode: usize) -> usize {
        self.base().pow((self.num_modes - 1 - mode) as u32)
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode < self.num_modes {
            Ok(())
        } else {
            Err(FockError::ModeOutOfRange {
                mode,
                num_modes: self.num_modes,
            })
        }
    }

    pub fn index_of(&self, occupations: &[usize]) -> Result<usize, FockError> {
        if occupations.len() != self.num_modes {
            return Err(FockError::DimensionMismatch {
                expected: self.num_modes,
                got: occupations.len(),
            });
        }
        let mut idx = 0;
        for (mode, &n) in occupations.iter().enumerate() {
            if n > self.cutoff {
                return Err(FockError::OccupationAboveCutoff {
                    mode,
                    occupation: n,
                    cutoff: self.cutoff,
                });
            }
            idx = idx * self.base() + n;
        }
        Ok(idx)
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.num_modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % self.base();
            index /= self.base();
        }
        occ
    }

    #[inline]
    pub(crate) fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.base()
    }

    /// Flat indices whose occupation is zero in every mode of `modes`.
    pub(crate) fn rest_offsets(&self, modes: &[usize]) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| modes.iter().all(|&m| self.occupation(i, m) == 0))
            .collect()
    }

    /// Photon-number distribution `P(n)` of one mode, `n = 0..=cutoff`.
    pub fn photon_number_distribution(&self, mode: usize) -> Result<Vec<f64>, FockError> {
        self.check_mode(mode)?;
        let mut dist = vec![0.0; self.base()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            dist[self.occupation(i, mode)] += a.norm_sqr();
        }
        Ok(dist)
    }

    pub fn mean_photon_number(&self, mode: usize) -> Result<f64, FockError> {
        Ok(mean_of(&self.photon_number_distribution(mode)?))
    }

    pub(crate) fn zeros_like(&self) -> FockState {
        FockState {
            num_modes: self.num_modes,
            cutoff: self.cutoff,
            amplitudes: vec![Complex64::new(0.0, 0.0); self.dim()],
        }
    }
}

pub(crate) fn mean_of(dist: &[f64]) -> f64 {
    dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

/// A classical mixture of pure truncated states. Produced by loss and by
/// heralding; each component is itself normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStateEnsemble {
    components: Vec<(f64, FockState)>,
}

impl MixedStateEnsemble {
    pub fn new(components: Vec<(f64, FockState)>) -> Result<Self, FockError> {
        let first = components.first().ok_or(FockError::EmptyEnsemble)?;
        let (modes, cutoff) = (first.1.num_modes(), first.1.cutoff());
        let mut total = 0.0;
        for (p, s) in &components {
            if !(0.0..=1.0 + NORM_TOLERANCE).contains(p) {
                return Err(FockError::InvalidProbability {
                    name: "ensemble weight",
                    value: *p,
                });
            }
            if s.num_modes() != modes || s.cutoff() != cutoff {
                return Err(FockError::EnsembleShapeMismatch);
            }
            s.require_normalized()?;
            total += p;
        }
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(FockError::EnsembleNotNormalized(total));
        }
        Ok(MixedStateEnsemble { components })
    }

    /// Builds an ensemble from unnormalized weights, dividing by their sum.
    pub(crate) fn from_weights(components: Vec<(f64, FockState)>) -> Result<Self, FockError> {
        let total: f64 = components.iter().map(|(p, _)| p).sum();
        if total <= 0.0 {
            return Err(FockError::ZeroProbabilityOutcome);
        }
        Self::new(
            components
                .into_iter()
                .map(|(p, s)| (p / total, s))
                .collect(),
        )
    }

    pub fn components(&self) -> &[(f64, FockState)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_probability(&self) -> f64 {
        self.components.iter().map(|(p, _)| p).sum()
    }
}

impl From<FockState> for MixedStateEnsemble {
    fn from(state: FockState) -> Self {
        MixedStateEnsemble {
            components: vec![(1.0, state)],
        }
    }
}

/// Anything that can be read as a weighted list of pure truncated states.
pub trait QuantumState {
    fn num_modes(&self) -> usize;
    fn cutoff(&self) -> usize;
    fn weighted_states(&self) -> Vec<(f64, &FockState)>;

    fn photon_number_distribution(&self, mode: usize) -> Result<Vec<f64>, FockError> {
        let mut dist = vec![0.0; self.cutoff() + 1];
        for (p, s) in self.weighted_states() {
            for (acc, q) in dist.iter_mut().zip(s.photon_number_distribution(mode)?) {
                *acc += p * q;
            }
        }
        Ok(dist)
    }

    fn mean_photon_number(&self, mode: usize) -> Result<f64, FockError> {
        Ok(mean_of(&QuantumState::photon_number_distribution(
            self, mode,
        )?))
    }
}

impl QuantumState for FockState {
    fn num_modes(&self) -> usize {
        self.num_modes
    }
    fn cutoff(&self) -> usize {
        self.cutoff
    }
    fn weighted_states(&self) -> Vec<(f64, &FockState)> {
        vec![(1.0, self)]
    }
}

impl QuantumState for MixedStateEnsemble {
    fn num_modes(&self) -> usize {
        self.components[0].1.num_modes()
    }
    fn cutoff(&self) -> usize {
        self.components[0].1.cutoff()
    }
    fn weighted_states(&self) -> Vec<(f64, &FockState)> {
        self.components.iter().map(|(p, s)| (*p, s)).collect()
    }
}
