use entsat_fock::{
    apply_beamsplitter, coherent_info, dv_bell, partial_trace_pure, FockSpace, PureState,
};
use entsat_gaussian as gaussian;

use crate::types::{check_etas, RateResult};
use crate::Result;

/// Relay of a DV resource without amplification: one arm of
/// √ξ|0,1⟩ + √(1-ξ)|1,0⟩ crosses both channels in sequence; p = 1.
pub fn relay_unamp_dv(xi: f64, eta_a: f64, eta_b: f64) -> Result<RateResult> {
    check_etas(eta_a, eta_b)?;
    let resource = dv_bell(xi)?;
    let env = PureState::vacuum(FockSpace::new(vec![2, 2])?);
    let st = resource.tensor(&env); // A1, transmitted, EA, EB
    let st = apply_beamsplitter(&st, 1, 2, eta_a)?;
    let st = apply_beamsplitter(&st, 1, 3, eta_b)?;
    let rho = partial_trace_pure(&st, &[0, 1])?;
    let (i_fwd, i_rev) = coherent_info(&rho, &[0], &[1])?;
    Ok(RateResult::new(1.0, i_fwd, i_rev, xi))
}

/// Central distribution of a DV resource without amplification: one arm
/// through each channel; p = 1. Zero rate whenever both channels sit at
/// or below half transmissivity.
pub fn dist_unamp_dv(xi: f64, eta_a: f64, eta_b: f64) -> Result<RateResult> {
    check_etas(eta_a, eta_b)?;
    let resource = dv_bell(xi)?;
    let env = PureState::vacuum(FockSpace::new(vec![2, 2])?);
    let st = resource.tensor(&env); // A, B, EA, EB
    let st = apply_beamsplitter(&st, 0, 2, eta_a)?;
    let st = apply_beamsplitter(&st, 1, 3, eta_b)?;
    let rho = partial_trace_pure(&st, &[0, 1])?;
    let (i_fwd, i_rev) = coherent_info(&rho, &[0], &[1])?;
    Ok(RateResult::new(1.0, i_fwd, i_rev, xi))
}

/// Relay of a TMSV without amplification, in the covariance formalism.
/// `nu` is the quadrature variance cosh 2r; p = 1.
pub fn relay_unamp_cv(nu: f64, eta_a: f64, eta_b: f64) -> Result<RateResult> {
    check_etas(eta_a, eta_b)?;
    let v = gaussian::tmsv_cov(nu)?;
    let v = gaussian::apply_loss(&v, 1, eta_a)?;
    let v = gaussian::apply_loss(&v, 1, eta_b)?;
    let (i_fwd, i_rev) = gaussian::coherent_info(&v, &[0], &[1])?;
    Ok(RateResult::new(1.0, i_fwd, i_rev, nu))
}

/// Central distribution of a TMSV without amplification; p = 1.
pub fn dist_unamp_cv(nu: f64, eta_a: f64, eta_b: f64) -> Result<RateResult> {
    check_etas(eta_a, eta_b)?;
    let v = gaussian::tmsv_cov(nu)?;
    let v = gaussian::apply_loss(&v, 0, eta_a)?;
    let v = gaussian::apply_loss(&v, 1, eta_b)?;
    let (i_fwd, i_rev) = gaussian::coherent_info(&v, &[0], &[1])?;
    Ok(RateResult::new(1.0, i_fwd, i_rev, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C64;

    /// Symbolic 4x4 oracle for the relay output with net transmissivity t:
    /// diag(ξ(1-t), tξ, 1-ξ, 0) plus √t √(ξ(1-ξ)) coherence.
    fn relay_oracle(xi: f64, t: f64) -> (f64, f64) {
        let mut rho = DMatrix::<C64>::zeros(4, 4);
        rho[(0, 0)] = C64::new(xi * (1.0 - t), 0.0);
        rho[(1, 1)] = C64::new(t * xi, 0.0);
        rho[(2, 2)] = C64::new(1.0 - xi, 0.0);
        let c = t.sqrt() * (xi * (1.0 - xi)).sqrt();
        rho[(1, 2)] = C64::new(c, 0.0);
        rho[(2, 1)] = C64::new(c, 0.0);
        let ent = |m: &DMatrix<C64>| -> f64 {
            let eig = nalgebra::SymmetricEigen::new(m.clone());
            eig.eigenvalues
                .iter()
                .filter(|&&l| l > 1e-15)
                .map(|&l| -l * l.ln())
                .sum()
        };
        let s_ab = ent(&rho);
        // A = first qubit (rows/cols 0,1 = A0; 2,3 = A1)
        let mut ra = DMatrix::<C64>::zeros(2, 2);
        let mut rb = DMatrix::<C64>::zeros(2, 2);
        for a in 0..2 {
            for ap in 0..2 {
                for b in 0..2 {
                    ra[(a, ap)] += rho[(2 * a + b, 2 * ap + b)];
                    rb[(a, ap)] += rho[(2 * b + a, 2 * b + ap)];
                }
            }
        }
        (ent(&rb) - s_ab, ent(&ra) - s_ab)
    }

    #[test]
    fn relay_matches_symbolic_oracle() {
        let r = relay_unamp_dv(0.3, 0.5, 0.5).unwrap();
        let (fwd, rev) = relay_oracle(0.3, 0.25);
        assert_relative_eq!(r.i_fwd, fwd, epsilon = 1e-10);
        assert_relative_eq!(r.i_rev, rev, epsilon = 1e-10);
        assert_eq!(r.success_probability, 1.0);
    }

    #[test]
    fn relay_asymptote() {
        // R/(η_A η_B) → 2ξ atanh(1-2ξ) at ξ = 0.217 gives ≈ 0.278
        let eta = 0.01;
        let r = relay_unamp_dv(0.217, eta, eta).unwrap();
        let ratio = r.rate / (eta * eta);
        assert_relative_eq!(ratio, 0.278, max_relative = 1e-2);
        // asymmetric channels enter through the product
        let r2 = relay_unamp_dv(0.217, 0.02, 0.005).unwrap();
        assert_relative_eq!(r2.rate / 1e-4, ratio, max_relative = 1e-3);
    }

    #[test]
    fn zero_resource_zero_rate() {
        assert_abs_diff_eq!(relay_unamp_dv(0.0, 0.3, 0.3).unwrap().rate, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist_unamp_dv(0.0, 0.8, 0.8).unwrap().rate, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(relay_unamp_cv(1.0, 0.3, 0.3).unwrap().rate, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn dist_dv_zero_below_half() {
        for &xi in &[0.1, 0.5, 0.9] {
            for &eta in &[0.1, 0.3, 0.5] {
                let r = dist_unamp_dv(xi, eta, eta).unwrap();
                assert_abs_diff_eq!(r.rate, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn dist_dv_positive_above_half_matches_oracle() {
        // (1-η)|00⟩⟨00| + η|ψ⟩⟨ψ| oracle
        let (xi, eta) = (0.9, 0.75);
        let r = dist_unamp_dv(xi, eta, eta).unwrap();
        assert!(r.rate > 0.0);
        // eigenvalues of the mixture: {1-η, η}; S(A) from diag(1-η+ηξ, η(1-ξ))
        let h = |p: f64| -> f64 {
            if p <= 0.0 || p >= 1.0 {
                0.0
            } else {
                -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
            }
        };
        let s_ab = h(eta);
        // resource √ξ|0,1⟩ + √(1-ξ)|1,0⟩: arm A carries a photon with
        // weight 1-ξ, arm B with weight ξ
        let s_a = h(eta * (1.0 - xi));
        let s_b = h(eta * xi);
        assert_relative_eq!(r.i_rev, s_a - s_ab, epsilon = 1e-10);
        assert_relative_eq!(r.i_fwd, s_b - s_ab, epsilon = 1e-10);
        // the state is A↔B symmetric only for the balanced resource
        let sym = dist_unamp_dv(0.5, eta, eta).unwrap();
        assert_abs_diff_eq!(sym.i_fwd, sym.i_rev, epsilon = 1e-10);
    }

    #[test]
    fn cv_relay_delegates_to_covariance_form() {
        let nu = entsat_gaussian::nu_from_db(8.0);
        for &eta in &[0.1, 0.5, 0.9] {
            let r = relay_unamp_cv(nu, eta, eta).unwrap();
            let closed = entsat_gaussian::cv_relay_rate(nu, eta).unwrap();
            assert_relative_eq!(r.rate, closed, epsilon = 1e-9, max_relative = 1e-7);
        }
        // lossless limit: full entanglement entropy of the TMSV
        let r = relay_unamp_cv(nu, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            r.rate,
            entsat_gaussian::entropy_g(nu),
            max_relative = 1e-9
        );
    }

    #[test]
    fn cv_dist_zero_at_and_below_half() {
        let nu = entsat_gaussian::nu_from_db(8.0);
        for &eta in &[0.1, 0.3, 0.4, 0.5] {
            let r = dist_unamp_cv(nu, eta, eta).unwrap();
            assert_abs_diff_eq!(r.rate, 0.0, epsilon = 1e-10);
        }
        assert!(dist_unamp_cv(nu, 0.75, 0.75).unwrap().rate > 0.0);
    }

    #[test]
    fn fock_and_gaussian_relay_agree() {
        // cross-formalism check: truncated Fock pipeline against the
        // covariance result at modest squeezing
        use entsat_fock::{pure_loss, pure_loss_density, tmsv_truncated};
        for &chi in &[0.2f64, 0.35] {
            let nu = (1.0 + chi * chi) / (1.0 - chi * chi);
            for &eta in &[0.3, 0.7] {
                let st = tmsv_truncated(chi, 10).unwrap();
                let rho = pure_loss(&st, 1, eta).unwrap();
                let rho = pure_loss_density(&rho, 1, eta).unwrap();
                let (_, i_rev) = entsat_fock::coherent_info(&rho, &[0], &[1]).unwrap();
                let cv = relay_unamp_cv(nu, eta, eta).unwrap();
                assert_abs_diff_eq!(i_rev, cv.i_rev, epsilon = 1e-3);
            }
        }
    }
}
