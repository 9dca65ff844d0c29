use crate::ops::partial_trace_pure;
use crate::space::FockSpace;
use crate::state::{DensityOp, PureState};
use crate::{C64, FockError, Result};

/// One heralded branch of a photon-counting measurement: a projector onto
/// a photon pattern over the measured modes, optionally followed by a
/// photon-parity correction e^{iπn̂} on one surviving mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeraldBranch {
    /// Measured modes (indices into the full space).
    pub modes: Vec<usize>,
    /// Detected photon counts, one per measured mode.
    pub pattern: Vec<usize>,
    /// Surviving mode receiving the correctable e^{iπn̂} phase, if any.
    pub parity_mode: Option<usize>,
}

impl HeraldBranch {
    pub fn new(modes: Vec<usize>, pattern: Vec<usize>) -> Self {
        Self {
            modes,
            pattern,
            parity_mode: None,
        }
    }

    pub fn with_parity(mut self, mode: usize) -> Self {
        self.parity_mode = Some(mode);
        self
    }
}

/// Project a pure state onto one heralded branch.
///
/// Returns the unnormalised conditional state on the remaining modes (in
/// original order) and the branch probability.
pub fn herald(state: &PureState, branch: &HeraldBranch) -> Result<(PureState, f64)> {
    let space = state.space();
    if branch.modes.is_empty() {
        return Err(FockError::EmptyModeSet("herald"));
    }
    if branch.modes.len() != branch.pattern.len() {
        return Err(FockError::SpaceMismatch(
            "herald pattern length differs from measured mode count".into(),
        ));
    }
    for (&m, &n) in branch.modes.iter().zip(&branch.pattern) {
        space.check_mode(m)?;
        if n >= space.dims()[m] {
            return Err(FockError::OutOfRange {
                name: "pattern",
                value: n as f64,
                range: "below the mode cutoff",
            });
        }
    }
    let remaining: Vec<usize> = (0..space.mode_count())
        .filter(|m| !branch.modes.contains(m))
        .collect();
    if remaining.is_empty() {
        return Err(FockError::EmptyModeSet("herald survivors"));
    }
    let sub = space.subspace(&remaining)?;
    // position of the parity mode within the remaining ordering
    let parity_pos = match branch.parity_mode {
        Some(pm) => {
            space.check_mode(pm)?;
            match remaining.iter().position(|&m| m == pm) {
                Some(p) => Some(p),
                None => {
                    return Err(FockError::SpaceMismatch(
                        "parity correction must act on a surviving mode".into(),
                    ))
                }
            }
        }
        None => None,
    };
    let fixed_offset: usize = branch
        .modes
        .iter()
        .zip(&branch.pattern)
        .map(|(&m, &n)| n * space.stride(m))
        .sum();
    let mut amps = vec![C64::ZERO; sub.dim()];
    for (out_idx, amp) in amps.iter_mut().enumerate() {
        let mut full = fixed_offset;
        for (pos, &mode) in remaining.iter().enumerate() {
            full += sub.occupation(out_idx, pos) * space.stride(mode);
        }
        let mut v = state.amplitudes()[full];
        if let Some(p) = parity_pos {
            if sub.occupation(out_idx, p) % 2 == 1 {
                v = -v;
            }
        }
        *amp = v;
    }
    let out = PureState::from_raw(sub, amps);
    let p = out.norm_sqr();
    Ok((out, p))
}

/// Heralded-measurement instrument on a pure state: sums the (corrected)
/// branch outputs, traces out `trace_out` (environment) modes, and returns
/// the unnormalised conditional density operator with its total success
/// probability.
///
/// All branches must measure the same mode set. The output lives on the
/// modes that are neither measured nor traced out, in original order.
pub fn povm_project(
    state: &PureState,
    branches: &[HeraldBranch],
    trace_out: &[usize],
) -> Result<(DensityOp, f64)> {
    if branches.is_empty() {
        return Err(FockError::EmptyModeSet("povm branches"));
    }
    for b in branches {
        if b.modes != branches[0].modes {
            return Err(FockError::SpaceMismatch(
                "all branches must measure the same modes".into(),
            ));
        }
    }
    let space = state.space();
    let measured = &branches[0].modes;
    let remaining: Vec<usize> = (0..space.mode_count())
        .filter(|m| !measured.contains(m))
        .collect();
    // survivors = remaining minus environment, indices within `remaining`
    let keep_positions: Vec<usize> = remaining
        .iter()
        .enumerate()
        .filter(|(_, &m)| !trace_out.contains(&m))
        .map(|(pos, _)| pos)
        .collect();
    if keep_positions.is_empty() {
        return Err(FockError::EmptyModeSet("povm survivors"));
    }
    let mut total: Option<DensityOp> = None;
    for branch in branches {
        let (phi, _) = herald(state, branch)?;
        let rho = partial_trace_pure(&phi, &keep_positions)?;
        match &mut total {
            None => total = Some(rho),
            Some(t) => t.accumulate(&rho, 1.0)?,
        }
    }
    let rho = total.expect("nonempty branches");
    let p = rho.trace();
    Ok((rho, p))
}

/// Heralded-measurement instrument applied to a density operator; the
/// output keeps every unmeasured mode (trace further with
/// `partial_trace_density` if needed).
pub fn povm_project_density(
    rho: &DensityOp,
    branches: &[HeraldBranch],
) -> Result<(DensityOp, f64)> {
    if branches.is_empty() {
        return Err(FockError::EmptyModeSet("povm branches"));
    }
    for b in branches {
        if b.modes != branches[0].modes {
            return Err(FockError::SpaceMismatch(
                "all branches must measure the same modes".into(),
            ));
        }
    }
    let space = rho.space();
    let measured = &branches[0].modes;
    let remaining: Vec<usize> = (0..space.mode_count())
        .filter(|m| !measured.contains(m))
        .collect();
    if remaining.is_empty() {
        return Err(FockError::EmptyModeSet("povm survivors"));
    }
    let sub = space.subspace(&remaining)?;
    let mut out = DensityOp::zero(sub.clone());
    for branch in branches {
        if branch.modes.len() != branch.pattern.len() {
            return Err(FockError::SpaceMismatch(
                "herald pattern length differs from measured mode count".into(),
            ));
        }
        let parity_pos = match branch.parity_mode {
            Some(pm) => Some(remaining.iter().position(|&m| m == pm).ok_or_else(|| {
                FockError::SpaceMismatch("parity correction must act on a surviving mode".into())
            })?),
            None => None,
        };
        let fixed: usize = branch
            .modes
            .iter()
            .zip(&branch.pattern)
            .map(|(&m, &n)| n * space.stride(m))
            .sum();
        let full_index = |sub_idx: usize| -> usize {
            let mut f = fixed;
            for (pos, &mode) in remaining.iter().enumerate() {
                f += sub.occupation(sub_idx, pos) * space.stride(mode);
            }
            f
        };
        let sign = |sub_idx: usize| -> f64 {
            match parity_pos {
                Some(p) if sub.occupation(sub_idx, p) % 2 == 1 => -1.0,
                _ => 1.0,
            }
        };
        for i in 0..sub.dim() {
            let fi = full_index(i);
            let si = sign(i);
            for j in 0..sub.dim() {
                let fj = full_index(j);
                out.matrix_mut()[(i, j)] += rho.matrix()[(fi, fj)] * (si * sign(j));
            }
        }
    }
    let p = out.trace();
    Ok((out, p))
}

/// Every photon pattern of the listed modes: the complete projective set,
/// for completeness checks.
pub fn all_patterns(space: &FockSpace, modes: &[usize]) -> Vec<Vec<usize>> {
    let mut patterns = vec![vec![]];
    for &m in modes {
        let d = space.dims()[m];
        let mut next = Vec::with_capacity(patterns.len() * d);
        for p in &patterns {
            for n in 0..d {
                let mut q = p.clone();
                q.push(n);
                next.push(q);
            }
        }
        patterns = next;
    }
    patterns
}
