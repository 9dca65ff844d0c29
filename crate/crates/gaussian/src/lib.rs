//! Covariance-matrix formalism for zero-mean Gaussian bosonic states.
//!
//! States live in the quadrature ordering (q₁, p₁, q₂, p₂, …) with vacuum
//! normalised to the identity, so a two-mode squeezed vacuum of quadrature
//! variance ν = cosh 2r has diagonal blocks ν·I and off-diagonal blocks
//! √(ν²-1)·σ_z. Entropies are reported in nats.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaussianError {
    #[error("quadrature variance must satisfy ν >= 1, got {0}")]
    SubVacuumVariance(f64),
    #[error("transmissivity must lie in [0, 1], got {0}")]
    BadTransmissivity(f64),
    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },
    #[error("covariance violates the uncertainty bound: symplectic eigenvalue {0} < 1")]
    UncertaintyViolation(f64),
    #[error("covariance is not positive definite (Cholesky failed)")]
    NotPositiveDefinite,
}

pub type Result<T> = std::result::Result<T, GaussianError>;

/// Real symmetric 2m x 2m covariance matrix in (q, p) mode-major ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    mat: DMatrix<f64>,
    modes: usize,
}

impl CovMatrix {
    /// Vacuum state of `modes` modes (identity covariance).
    pub fn vacuum(modes: usize) -> Self {
        Self {
            mat: DMatrix::identity(2 * modes, 2 * modes),
            modes,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Reduced covariance of a subset of modes.
    pub fn reduce(&self, keep: &[usize]) -> Result<CovMatrix> {
        for &m in keep {
            if m >= self.modes {
                return Err(GaussianError::ModeOutOfRange {
                    index: m,
                    modes: self.modes,
                });
            }
        }
        let n = keep.len();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        for (i, &mi) in keep.iter().enumerate() {
            for (j, &mj) in keep.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        out[(2 * i + a, 2 * j + b)] = self.mat[(2 * mi + a, 2 * mj + b)];
                    }
                }
            }
        }
        Ok(CovMatrix {
            mat: out,
            modes: n,
        })
    }
}

/// Two-mode squeezed vacuum covariance for quadrature variance ν >= 1:
///
/// V = [[ν I, √(ν²-1) σ_z], [√(ν²-1) σ_z, ν I]].
pub fn tmsv_cov(nu: f64) -> Result<CovMatrix> {
    if nu < 1.0 {
        return Err(GaussianError::SubVacuumVariance(nu));
    }
    let c = (nu * nu - 1.0).sqrt();
    let mut m = DMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = nu;
    }
    m[(0, 2)] = c;
    m[(2, 0)] = c;
    m[(1, 3)] = -c;
    m[(3, 1)] = -c;
    Ok(CovMatrix { mat: m, modes: 2 })
}

/// Quadrature variance ν = cosh 2r = (1+χ²)/(1-χ²) from the squeezing
/// parameter r (χ = tanh r).
pub fn nu_from_squeezing(r: f64) -> f64 {
    (2.0 * r).cosh()
}

/// ν from a squeezing level quoted in dB: r = dB · ln10 / 20.
pub fn nu_from_db(db: f64) -> f64 {
    nu_from_squeezing(db * std::f64::consts::LN_10 / 20.0)
}

/// Pure-loss channel on one mode: V → X V Xᵀ + Y with X = √η on the mode
/// and Y = (1-η) I, the reduction of a beamsplitter with vacuum.
pub fn apply_loss(cov: &CovMatrix, mode: usize, eta: f64) -> Result<CovMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(GaussianError::BadTransmissivity(eta));
    }
    if mode >= cov.modes {
        return Err(GaussianError::ModeOutOfRange {
            index: mode,
            modes: cov.modes,
        });
    }
    let s = eta.sqrt();
    let n = 2 * cov.modes;
    let mut x = DMatrix::identity(n, n);
    x[(2 * mode, 2 * mode)] = s;
    x[(2 * mode + 1, 2 * mode + 1)] = s;
    let mut out = &x * &cov.mat * x.transpose();
    out[(2 * mode, 2 * mode)] += 1.0 - eta;
    out[(2 * mode + 1, 2 * mode + 1)] += 1.0 - eta;
    Ok(CovMatrix {
        mat: out,
        modes: cov.modes,
    })
}

/// Standard symplectic form Ω = ⊕ [[0, 1], [-1, 0]].
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

/// Williamson spectrum: the m symplectic eigenvalues of a covariance.
///
/// Computed stably as the singular values of LᵀΩL with V = LLᵀ (each value
/// appears twice; the deduplicated list is returned sorted descending).
/// Errors if any eigenvalue falls below 1 - 1e-10.
pub fn symplectic_eigenvalues(cov: &CovMatrix) -> Result<Vec<f64>> {
    let chol = nalgebra::Cholesky::new(cov.mat.clone())
        .ok_or(GaussianError::NotPositiveDefinite)?;
    let l = chol.l();
    let omega = symplectic_form(cov.modes);
    let k = l.transpose() * omega * &l;
    let mut sv: Vec<f64> = k.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // pairs (ν, ν); keep every other entry
    let eigs: Vec<f64> = sv.iter().step_by(2).copied().collect();
    for &nu in &eigs {
        if nu < 1.0 - 1e-10 {
            return Err(GaussianError::UncertaintyViolation(nu));
        }
    }
    Ok(eigs)
}

/// Entropy contribution of one symplectic eigenvalue, in nats:
/// g(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2), with g(1) = 0.
pub fn entropy_g(x: f64) -> f64 {
    debug_assert!(x >= 1.0 - 1e-9);
    let a = 0.5 * (x + 1.0);
    let b = 0.5 * (x - 1.0);
    if b <= 0.0 {
        return 0.0;
    }
    a * a.ln() - b * b.ln()
}

/// Von Neumann entropy of a Gaussian state from its Williamson spectrum.
pub fn gaussian_entropy(eigs: &[f64]) -> f64 {
    eigs.iter().map(|&nu| entropy_g(nu.max(1.0))).sum()
}

/// Entropy of a Gaussian state directly from its covariance.
pub fn state_entropy(cov: &CovMatrix) -> Result<f64> {
    Ok(gaussian_entropy(&symplectic_eigenvalues(cov)?))
}

/// Forward and reverse coherent information of a bipartite Gaussian state,
/// (S(B) - S(AB), S(A) - S(AB)) in nats.
pub fn coherent_info(cov: &CovMatrix, modes_a: &[usize], modes_b: &[usize]) -> Result<(f64, f64)> {
    let s_ab = state_entropy(cov)?;
    let s_a = state_entropy(&cov.reduce(modes_a)?)?;
    let s_b = state_entropy(&cov.reduce(modes_b)?)?;
    Ok((s_b - s_ab, s_a - s_ab))
}

/// Reverse coherent information of a TMSV with one arm through net
/// transmissivity η² (two passes of η), clamped at zero:
///
/// I← = g(ν) - g(ν + η²(1-ν)).
///
/// The surviving arm keeps variance ν so S(A) = g(ν); purity of the global
/// state pins S(AB) to the environment entropy g(ν + η²(1-ν)).
pub fn cv_relay_rate(nu: f64, eta: f64) -> Result<f64> {
    if nu < 1.0 {
        return Err(GaussianError::SubVacuumVariance(nu));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(GaussianError::BadTransmissivity(eta));
    }
    let nu_env = nu + eta * eta * (1.0 - nu);
    Ok((entropy_g(nu) - entropy_g(nu_env)).max(0.0))
}
