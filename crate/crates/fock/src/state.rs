use nalgebra::DMatrix;

use crate::space::FockSpace;
use crate::{C64, FockError, Result};

/// Pure multimode state: amplitudes over the product Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: FockSpace,
    amps: Vec<C64>,
}

impl PureState {
    /// All modes in the vacuum.
    pub fn vacuum(space: FockSpace) -> Self {
        let mut amps = vec![C64::ZERO; space.dim()];
        amps[0] = C64::ONE;
        Self { space, amps }
    }

    /// Basis state |n₀, n₁, …⟩.
    pub fn basis(space: FockSpace, occupation: &[usize]) -> Result<Self> {
        let idx = space.index_of(occupation)?;
        let mut amps = vec![C64::ZERO; space.dim()];
        amps[idx] = C64::ONE;
        Ok(Self { space, amps })
    }

    /// Build from explicit basis amplitudes (normalised on construction).
    pub fn from_amplitudes(space: FockSpace, pairs: &[(&[usize], C64)]) -> Result<Self> {
        let mut amps = vec![C64::ZERO; space.dim()];
        for (occ, a) in pairs {
            let idx = space.index_of(occ)?;
            amps[idx] += a;
        }
        let mut st = Self { space, amps };
        st.normalize()?;
        Ok(st)
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub(crate) fn from_raw(space: FockSpace, amps: Vec<C64>) -> Self {
        debug_assert_eq!(space.dim(), amps.len());
        Self { space, amps }
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Result<C64> {
        Ok(self.amps[self.space.index_of(occupation)?])
    }

    /// Squared norm (1 for normalised states, the branch probability for
    /// unnormalised herald outputs).
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_sqr();
        if n2 < 1e-300 {
            return Err(FockError::InvalidState("zero-norm state".into()));
        }
        let inv = 1.0 / n2.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Result<C64> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch(
                "overlap requires identical spaces".into(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// Re-embed into a space with enlarged per-mode cutoffs (identical
    /// occupations, higher headroom). Used to size circuits so every
    /// beamsplitter stays exactly unitary.
    pub fn embed(&self, target: FockSpace) -> Result<PureState> {
        if target.mode_count() != self.space.mode_count() {
            return Err(FockError::SpaceMismatch(
                "embed requires the same mode count".into(),
            ));
        }
        for (m, (&dt, &ds)) in target.dims().iter().zip(self.space.dims()).enumerate() {
            if dt < ds {
                return Err(FockError::SpaceMismatch(format!(
                    "embed cannot shrink mode {m} from {ds} to {dt}"
                )));
            }
        }
        let mut amps = vec![C64::ZERO; target.dim()];
        let modes = self.space.mode_count();
        let mut occ = vec![0usize; modes];
        for (idx, &a) in self.amps.iter().enumerate() {
            if a == C64::ZERO {
                continue;
            }
            for (m, o) in occ.iter_mut().enumerate() {
                *o = self.space.occupation(idx, m);
            }
            amps[target.index_of(&occ)?] = a;
        }
        Ok(PureState {
            space: target,
            amps,
        })
    }

    /// Tensor product (modes of `other` appended after `self`).
    pub fn tensor(&self, other: &PureState) -> PureState {
        let space = self.space.tensor(&other.space);
        let mut amps = Vec::with_capacity(space.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { space, amps }
    }

    /// Largest populated total photon number over the listed modes
    /// (amplitudes below `tol` in magnitude squared are ignored).
    pub fn max_populated_total(&self, modes: &[usize], tol: f64) -> usize {
        let mut max_s = 0;
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > tol {
                let s: usize = modes.iter().map(|&m| self.space.occupation(idx, m)).sum();
                max_s = max_s.max(s);
            }
        }
        max_s
    }
}

/// Single-rail two-mode entangled resource √ξ|0,1⟩ + √(1-ξ)|1,0⟩.
pub fn dv_bell(xi: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(FockError::OutOfRange {
            name: "xi",
            value: xi,
            range: "[0, 1]",
        });
    }
    let space = FockSpace::new(vec![2, 2])?;
    let mut amps = vec![C64::ZERO; 4];
    amps[space.index_of(&[0, 1])?] = C64::new(xi.sqrt(), 0.0);
    amps[space.index_of(&[1, 0])?] = C64::new((1.0 - xi).sqrt(), 0.0);
    Ok(PureState { space, amps })
}

/// Two-mode squeezed vacuum truncated at `cutoff` photons per mode and
/// renormalised: ∝ Σ_{n<=cutoff} χⁿ |n,n⟩.
pub fn tmsv_truncated(chi: f64, cutoff: usize) -> Result<PureState> {
    if !(0.0..1.0).contains(&chi) {
        return Err(FockError::OutOfRange {
            name: "chi",
            value: chi,
            range: "[0, 1)",
        });
    }
    let space = FockSpace::uniform(2, cutoff)?;
    let mut amps = vec![C64::ZERO; space.dim()];
    for n in 0..=cutoff {
        amps[space.index_of(&[n, n])?] = C64::new(chi.powi(n as i32), 0.0);
    }
    let mut st = PureState { space, amps };
    st.normalize()?;
    Ok(st)
}

/// Scissor ancilla √τ|1,0⟩ + √(1-τ)|0,1⟩; mode 0 is the kept (output) arm,
/// mode 1 the arm mixed with the signal. Gain g = √(τ/(1-τ)), so τ = 1 is
/// rejected as infinite gain.
pub fn scissor_ancilla(tau: f64) -> Result<PureState> {
    if !(0.0..1.0).contains(&tau) {
        return Err(FockError::OutOfRange {
            name: "tau",
            value: tau,
            range: "[0, 1) (τ = 1 is infinite gain)",
        });
    }
    let space = FockSpace::new(vec![2, 2])?;
    let mut amps = vec![C64::ZERO; 4];
    amps[space.index_of(&[1, 0])?] = C64::new(tau.sqrt(), 0.0);
    amps[space.index_of(&[0, 1])?] = C64::new((1.0 - tau).sqrt(), 0.0);
    Ok(PureState { space, amps })
}

/// Gain of a scissor with beamsplitter transmissivity τ.
pub fn tau_to_gain(tau: f64) -> f64 {
    (tau / (1.0 - tau)).sqrt()
}

/// Beamsplitter transmissivity realising gain g: τ = g²/(1+g²).
pub fn gain_to_tau(g: f64) -> f64 {
    g * g / (1.0 + g * g)
}

/// Density operator on a Fock space (Hermitian matrix over the flat basis).
#[derive(Debug, Clone)]
pub struct DensityOp {
    space: FockSpace,
    mat: DMatrix<C64>,
}

impl DensityOp {
    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityOp {
            space: state.space.clone(),
            mat: &v * v.adjoint(),
        }
    }

    pub(crate) fn from_raw(space: FockSpace, mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(space.dim(), mat.nrows());
        Self { space, mat }
    }

    /// Wrap an explicit matrix (square, matching the space dimension).
    pub fn from_matrix(space: FockSpace, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(FockError::SpaceMismatch(format!(
                "matrix is {}x{} for a space of dimension {}",
                mat.nrows(),
                mat.ncols(),
                space.dim()
            )));
        }
        Ok(Self { space, mat })
    }

    pub fn zero(space: FockSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            mat: DMatrix::zeros(d, d),
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Add `other` (same space) scaled by `w`.
    pub fn accumulate(&mut self, other: &DensityOp, w: f64) -> Result<()> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch("accumulate".into()));
        }
        self.mat += &other.mat * C64::new(w, 0.0);
        Ok(())
    }

    /// Rescale to unit trace.
    pub fn normalized(&self) -> Result<DensityOp> {
        let t = self.trace();
        if t < 1e-300 {
            return Err(FockError::ImprobableBranch);
        }
        Ok(DensityOp {
            space: self.space.clone(),
            mat: &self.mat * C64::new(1.0 / t, 0.0),
        })
    }

    /// Hermiticity defect max |ρ - ρ†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.mat.nrows() {
            for j in i..self.mat.ncols() {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}
