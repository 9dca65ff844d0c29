use crate::{FockError, Result};

/// Product Fock space with a per-mode photon cutoff.
///
/// `dims[m]` is the local dimension of mode m (cutoff + 1). Basis states
/// are flattened row-major with mode 0 most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl FockSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(FockError::EmptyModeSet("space"));
        }
        for &d in &dims {
            if d < 1 {
                return Err(FockError::OutOfRange {
                    name: "mode dimension",
                    value: d as f64,
                    range: "[1, ..)",
                });
            }
        }
        let mut strides = vec![1usize; dims.len()];
        for m in (0..dims.len().saturating_sub(1)).rev() {
            strides[m] = strides[m + 1] * dims[m + 1];
        }
        Ok(Self { dims, strides })
    }

    /// All modes share the same cutoff (dimension cutoff + 1).
    pub fn uniform(modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff + 1; modes])
    }

    #[inline]
    pub fn mode_count(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    /// Total Hilbert-space dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Flat index of a basis occupation.
    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.dims.len() {
            return Err(FockError::SpaceMismatch(format!(
                "occupation has {} entries for {} modes",
                occupation.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0;
        for (m, (&n, &d)) in occupation.iter().zip(&self.dims).enumerate() {
            if n >= d {
                return Err(FockError::OutOfRange {
                    name: "occupation",
                    value: n as f64,
                    range: "below the mode cutoff",
                });
            }
            idx += n * self.strides[m];
        }
        Ok(idx)
    }

    /// Occupation number of `mode` within flat index `idx`.
    #[inline]
    pub fn occupation(&self, idx: usize, mode: usize) -> usize {
        (idx / self.strides[mode]) % self.dims[mode]
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.dims.len() {
            return Err(FockError::ModeOutOfRange {
                index: mode,
                modes: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Tensor product of two spaces (modes of `other` appended).
    pub fn tensor(&self, other: &FockSpace) -> FockSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        FockSpace::new(dims).expect("nonempty")
    }

    /// Subspace of the listed modes, in the given order.
    pub fn subspace(&self, modes: &[usize]) -> Result<FockSpace> {
        if modes.is_empty() {
            return Err(FockError::EmptyModeSet("subspace"));
        }
        for &m in modes {
            self.check_mode(m)?;
        }
        FockSpace::new(modes.iter().map(|&m| self.dims[m]).collect())
    }

    /// Enumerate base offsets over all configurations of the modes NOT in
    /// `fixed`, with the fixed modes at occupation zero.
    pub(crate) fn base_offsets(&self, fixed: &[usize]) -> Vec<usize> {
        let rest: Vec<usize> = (0..self.dims.len()).filter(|m| !fixed.contains(m)).collect();
        let count: usize = rest.iter().map(|&m| self.dims[m]).product();
        let mut offsets = Vec::with_capacity(count);
        let mut odometer = vec![0usize; rest.len()];
        loop {
            let off: usize = rest
                .iter()
                .zip(&odometer)
                .map(|(&m, &n)| n * self.strides[m])
                .sum();
            offsets.push(off);
            // increment odometer (last rest mode fastest)
            let mut k = rest.len();
            loop {
                if k == 0 {
                    return offsets;
                }
                k -= 1;
                odometer[k] += 1;
                if odometer[k] < self.dims[rest[k]] {
                    break;
                }
                odometer[k] = 0;
            }
        }
    }
}
