use nalgebra::DMatrix;

use crate::space::FockSpace;
use crate::state::{DensityOp, PureState};
use crate::{C64, FockError, Result};

/// Amplitudes-squared below this are treated as unpopulated when sizing
/// photon-number blocks.
const POPULATION_TOL: f64 = 1e-24;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Dense two-mode beamsplitter kernel in the pair basis |n_a, n_b⟩,
/// flattened as n_a * d_b + n_b. Photon-number conserving, real entries.
///
/// Creation operators transform as
///   a† → √τ a† - √(1-τ) b†,  b† → √(1-τ) a† + √τ b†.
pub(crate) fn bs_kernel(da: usize, db: usize, tau: f64) -> Vec<f64> {
    let t = tau.sqrt();
    let r = (1.0 - tau).sqrt();
    let dim = da * db;
    let mut m = vec![0.0; dim * dim];
    for n1 in 0..da {
        for n2 in 0..db {
            let col = n1 * db + n2;
            let norm_in = (factorial(n1) * factorial(n2)).sqrt();
            // expand (t a† - r b†)^{n1} (r a† + t b†)^{n2}
            for k in 0..=n1 {
                for l in 0..=n2 {
                    let m1 = k + l;
                    let m2 = (n1 - k) + (n2 - l);
                    if m1 >= da || m2 >= db {
                        continue;
                    }
                    let c = binomial(n1, k)
                        * binomial(n2, l)
                        * t.powi(k as i32)
                        * (-r).powi((n1 - k) as i32)
                        * r.powi(l as i32)
                        * t.powi((n2 - l) as i32);
                    let norm_out = (factorial(m1) * factorial(m2)).sqrt();
                    m[(m1 * db + m2) * dim + col] += c * norm_out / norm_in;
                }
            }
        }
    }
    m
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn check_bs_args(space: &FockSpace, a: usize, b: usize, tau: f64) -> Result<()> {
    space.check_mode(a)?;
    space.check_mode(b)?;
    if a == b {
        return Err(FockError::SpaceMismatch(
            "beamsplitter needs two distinct modes".into(),
        ));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(FockError::OutOfRange {
            name: "tau",
            value: tau,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// Two-mode beamsplitter of transmissivity τ on modes (a, b).
///
/// Exactly unitary on every populated total-photon-number block; errors if
/// the populated blocks do not fit both cutoffs (the caller must size the
/// space, truncation is never silent).
pub fn apply_beamsplitter(state: &PureState, a: usize, b: usize, tau: f64) -> Result<PureState> {
    let space = state.space().clone();
    check_bs_args(&space, a, b, tau)?;
    let (da, db) = (space.dims()[a], space.dims()[b]);
    let s_max = state.max_populated_total(&[a, b], POPULATION_TOL);
    if s_max + 1 > da.min(db) {
        return Err(FockError::TruncationRefused {
            a,
            b,
            total: s_max,
            da,
            db,
        });
    }
    let kernel = bs_kernel(da, db, tau);
    let dim = da * db;
    let (sa, sb) = (space.stride(a), space.stride(b));
    let mut out = state.clone();
    let mut block = vec![C64::ZERO; dim];
    let mut fresh = vec![C64::ZERO; dim];
    let src = state.amplitudes();
    let dst = out.amplitudes_mut();
    for base in space.base_offsets(&[a, b]) {
        let mut any = false;
        for na in 0..da {
            for nb in 0..db {
                let v = src[base + na * sa + nb * sb];
                block[na * db + nb] = v;
                any |= v.norm_sqr() > 0.0;
            }
        }
        if !any {
            continue;
        }
        for (row, f) in fresh.iter_mut().enumerate() {
            let mut acc = C64::ZERO;
            let krow = &kernel[row * dim..(row + 1) * dim];
            for (col, &x) in block.iter().enumerate() {
                if x != C64::ZERO {
                    acc += x * krow[col];
                }
            }
            *f = acc;
        }
        for na in 0..da {
            for nb in 0..db {
                dst[base + na * sa + nb * sb] = fresh[na * db + nb];
            }
        }
    }
    Ok(out)
}

/// Beamsplitter conjugation ρ → U ρ U† on a density operator.
pub fn apply_beamsplitter_density(
    rho: &DensityOp,
    a: usize,
    b: usize,
    tau: f64,
) -> Result<DensityOp> {
    let space = rho.space().clone();
    check_bs_args(&space, a, b, tau)?;
    let (da, db) = (space.dims()[a], space.dims()[b]);
    // populated blocks read off the diagonal (positive semidefinite support)
    let mut s_max = 0;
    for i in 0..space.dim() {
        if rho.matrix()[(i, i)].re > POPULATION_TOL {
            s_max = s_max.max(space.occupation(i, a) + space.occupation(i, b));
        }
    }
    if s_max + 1 > da.min(db) {
        return Err(FockError::TruncationRefused {
            a,
            b,
            total: s_max,
            da,
            db,
        });
    }
    let kernel = bs_kernel(da, db, tau);
    let dim = da * db;
    let (sa, sb) = (space.stride(a), space.stride(b));
    let bases = space.base_offsets(&[a, b]);
    let d = space.dim();
    let mut mid = DMatrix::<C64>::zeros(d, d);
    // left action: column by column
    for col in 0..d {
        for &base in &bases {
            for row_p in 0..dim {
                let mut acc = C64::ZERO;
                let krow = &kernel[row_p * dim..(row_p + 1) * dim];
                for na in 0..da {
                    for nb in 0..db {
                        acc += rho.matrix()[(base + na * sa + nb * sb, col)]
                            * krow[na * db + nb];
                    }
                }
                mid[(base + (row_p / db) * sa + (row_p % db) * sb, col)] = acc;
            }
        }
    }
    let mut out = DMatrix::<C64>::zeros(d, d);
    // right action: row by row (kernel is real so no conjugation needed)
    for row in 0..d {
        for &base in &bases {
            for col_p in 0..dim {
                let mut acc = C64::ZERO;
                let krow = &kernel[col_p * dim..(col_p + 1) * dim];
                for na in 0..da {
                    for nb in 0..db {
                        acc += mid[(row, base + na * sa + nb * sb)] * krow[na * db + nb];
                    }
                }
                out[(row, base + (col_p / db) * sa + (col_p % db) * sb)] = acc;
            }
        }
    }
    Ok(DensityOp::from_raw(space, out))
}

/// Single-mode phase rotation e^{i n φ}.
pub fn apply_mode_phase(state: &PureState, mode: usize, phi: f64) -> Result<PureState> {
    state.space().check_mode(mode)?;
    let mut out = state.clone();
    let space = state.space().clone();
    for (idx, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let n = space.occupation(idx, mode) as f64;
        *a *= C64::from_polar(1.0, n * phi);
    }
    Ok(out)
}

/// Photon-number parity e^{iπn} on one mode (sign flip on odd occupations).
pub fn apply_parity(state: &PureState, mode: usize) -> Result<PureState> {
    state.space().check_mode(mode)?;
    let mut out = state.clone();
    let space = state.space().clone();
    for (idx, a) in out.amplitudes_mut().iter_mut().enumerate() {
        if space.occupation(idx, mode) % 2 == 1 {
            *a = -*a;
        }
    }
    Ok(out)
}

/// Reduced density operator of `keep` (in the given order) from a pure
/// state: ρ = Tr_rest |ψ⟩⟨ψ|.
pub fn partial_trace_pure(state: &PureState, keep: &[usize]) -> Result<DensityOp> {
    let space = state.space();
    if keep.is_empty() {
        return Err(FockError::EmptyModeSet("partial trace"));
    }
    let sub = space.subspace(keep)?;
    let rest: Vec<usize> = (0..space.mode_count())
        .filter(|m| !keep.contains(m))
        .collect();
    let kd = sub.dim();
    if rest.is_empty() {
        return Ok(DensityOp::from_pure(&PureState::from_raw(
            sub,
            state.amplitudes().to_vec(),
        )));
    }
    let ed: usize = rest.iter().map(|&m| space.dims()[m]).product();
    // K x E rectangular factor, then the Gram matrix
    let mut m = DMatrix::<C64>::zeros(kd, ed);
    for (idx, &a) in state.amplitudes().iter().enumerate() {
        if a == C64::ZERO {
            continue;
        }
        let mut k = 0usize;
        for (pos, &mode) in keep.iter().enumerate() {
            k += space.occupation(idx, mode) * sub.stride(pos);
        }
        let mut e = 0usize;
        let mut stride = 1usize;
        for &mode in rest.iter().rev() {
            e += space.occupation(idx, mode) * stride;
            stride *= space.dims()[mode];
        }
        m[(k, e)] = a;
    }
    let rho = &m * m.adjoint();
    Ok(DensityOp::from_raw(sub, rho))
}

/// Partial trace of a density operator onto `keep` (in the given order).
pub fn partial_trace_density(rho: &DensityOp, keep: &[usize]) -> Result<DensityOp> {
    let space = rho.space();
    if keep.is_empty() {
        return Err(FockError::EmptyModeSet("partial trace"));
    }
    let sub = space.subspace(keep)?;
    let rest: Vec<usize> = (0..space.mode_count())
        .filter(|m| !keep.contains(m))
        .collect();
    let d = space.dim();
    // precompute the (keep index, rest index) split of every flat index
    let mut ks = vec![0usize; d];
    let mut es = vec![0usize; d];
    for idx in 0..d {
        let mut k = 0usize;
        for (pos, &mode) in keep.iter().enumerate() {
            k += space.occupation(idx, mode) * sub.stride(pos);
        }
        let mut e = 0usize;
        let mut stride = 1usize;
        for &mode in rest.iter().rev() {
            e += space.occupation(idx, mode) * stride;
            stride *= space.dims()[mode];
        }
        ks[idx] = k;
        es[idx] = e;
    }
    let mut out = DMatrix::<C64>::zeros(sub.dim(), sub.dim());
    for i in 0..d {
        for j in 0..d {
            if es[i] == es[j] {
                out[(ks[i], ks[j])] += rho.matrix()[(i, j)];
            }
        }
    }
    Ok(DensityOp::from_raw(sub, out))
}

/// Pure-loss channel of transmissivity η on one mode of a pure state:
/// beamsplit with a vacuum ancilla and trace the ancilla out.
pub fn pure_loss(state: &PureState, mode: usize, eta: f64) -> Result<DensityOp> {
    state.space().check_mode(mode)?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(FockError::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    // ancilla sized to hold everything the mode can shed
    let anc_dim = state.space().dims()[mode];
    let anc = PureState::vacuum(FockSpace::new(vec![anc_dim])?);
    let joint = state.tensor(&anc);
    let anc_mode = state.space().mode_count();
    let mixed = apply_beamsplitter(&joint, mode, anc_mode, eta)?;
    let keep: Vec<usize> = (0..anc_mode).collect();
    partial_trace_pure(&mixed, &keep)
}

/// Pure-loss channel on one mode of a density operator.
pub fn pure_loss_density(rho: &DensityOp, mode: usize, eta: f64) -> Result<DensityOp> {
    rho.space().check_mode(mode)?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(FockError::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let anc_dim = rho.space().dims()[mode];
    let anc_space = FockSpace::new(vec![anc_dim])?;
    let joint_space = rho.space().tensor(&anc_space);
    let d0 = rho.space().dim();
    let dj = joint_space.dim();
    let mut joint = DMatrix::<C64>::zeros(dj, dj);
    // ρ ⊗ |0⟩⟨0|: ancilla is the last (fastest) axis
    for i in 0..d0 {
        for j in 0..d0 {
            joint[(i * anc_dim, j * anc_dim)] = rho.matrix()[(i, j)];
        }
    }
    let joint = DensityOp::from_raw(joint_space, joint);
    let anc_mode = rho.space().mode_count();
    let mixed = apply_beamsplitter_density(&joint, mode, anc_mode, eta)?;
    let keep: Vec<usize> = (0..anc_mode).collect();
    partial_trace_density(&mixed, &keep)
}
