use nalgebra::SymmetricEigen;

use crate::ops::partial_trace_density;
use crate::state::DensityOp;
use crate::{C64, FockError, Result};

/// Von Neumann entropy -Σ λ ln λ in nats.
///
/// The matrix is symmetrised against floating-point noise before the
/// eigensolve; an eigenvalue below -1e-8 marks an invalid state.
pub fn entropy(rho: &DensityOp) -> Result<f64> {
    let defect = rho.hermiticity_defect();
    if defect > 1e-10 {
        return Err(FockError::InvalidState(format!(
            "hermiticity defect {defect:.2e}"
        )));
    }
    let m = rho.matrix();
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut s = 0.0;
    for &lam in eig.eigenvalues.iter() {
        if lam < -1e-8 {
            return Err(FockError::InvalidState(format!(
                "negative eigenvalue {lam:.3e}"
            )));
        }
        let l = lam.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// Forward and reverse coherent information of a bipartite state:
/// (S(ρ_B) - S(ρ_AB), S(ρ_A) - S(ρ_AB)) in nats.
///
/// The input is normalised internally, so unnormalised heralded outputs
/// can be passed straight through.
pub fn coherent_info(
    rho_ab: &DensityOp,
    modes_a: &[usize],
    modes_b: &[usize],
) -> Result<(f64, f64)> {
    let rho = rho_ab.normalized()?;
    let s_ab = entropy(&rho)?;
    let s_a = entropy(&partial_trace_density(&rho, modes_a)?)?;
    let s_b = entropy(&partial_trace_density(&rho, modes_b)?)?;
    Ok((s_b - s_ab, s_a - s_ab))
}
