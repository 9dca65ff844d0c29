//! Bounded derivative-free maximisation over a box.
//!
//! The landscapes here are smooth and low-dimensional (at most three free
//! parameters), so a coarse grid scan followed by Nelder-Mead simplex
//! refinement from the best grid point is robust and reproducible. The
//! returned value never falls below the best grid sample, and reruns are
//! bit-identical: evaluation order is fixed and no randomness enters.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError<E> {
    #[error("search space has no dimensions")]
    EmptySpace,
    #[error("bound {index} is not a finite ordered interval: [{lo}, {hi}]")]
    BadBound { index: usize, lo: f64, hi: f64 },
    #[error("evaluator failed at {point:?}: {source}")]
    Evaluator { point: Vec<f64>, source: E },
}

/// Search box plus resolution and refinement controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpec {
    /// Inclusive (lo, hi) bounds per dimension.
    pub bounds: Vec<(f64, f64)>,
    /// Grid points per dimension for the coarse scan.
    pub grid_points: usize,
    /// Relative tolerance on the objective for simplex convergence.
    pub tolerance: f64,
    /// Simplex iteration cap.
    pub max_iterations: usize,
}

impl SearchSpec {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        Self {
            bounds,
            grid_points: 21,
            tolerance: 1e-4,
            max_iterations: 400,
        }
    }

    pub fn with_grid(mut self, points: usize) -> Self {
        self.grid_points = points.max(2);
        self
    }
}

/// Argmax report: best parameters, objective value, evaluation count.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximise `f` over the box. The `seed` parameter is accepted for API
/// stability; the search itself is deterministic.
pub fn maximize<E, F>(
    mut f: F,
    spec: &SearchSpec,
    _seed: u64,
) -> Result<MaxResult, OptimizeError<E>>
where
    F: FnMut(&[f64]) -> Result<f64, E>,
{
    let dim = spec.bounds.len();
    if dim == 0 {
        return Err(OptimizeError::EmptySpace);
    }
    for (i, &(lo, hi)) in spec.bounds.iter().enumerate() {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(OptimizeError::BadBound { index: i, lo, hi });
        }
    }
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> Result<f64, OptimizeError<E>> {
        *evals += 1;
        f(x).map_err(|source| OptimizeError::Evaluator {
            point: x.to_vec(),
            source,
        })
    };

    // coarse grid scan, fixed row-major order
    let n = spec.grid_points.max(2);
    let mut best_x = vec![0.0; dim];
    let mut best_v = f64::NEG_INFINITY;
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    loop {
        for d in 0..dim {
            let (lo, hi) = spec.bounds[d];
            x[d] = lo + (hi - lo) * idx[d] as f64 / (n - 1) as f64;
        }
        let v = eval(&x, &mut evals)?;
        if v > best_v {
            best_v = v;
            best_x.copy_from_slice(&x);
        }
        let mut k = dim;
        loop {
            if k == 0 {
                // grid exhausted
                let refined = nelder_mead(&mut eval, spec, &best_x, best_v, &mut evals)?;
                return Ok(MaxResult {
                    argmax: refined.0,
                    value: refined.1,
                    evaluations: evals,
                });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn clamp_to(bounds: &[(f64, f64)], x: &mut [f64]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Nelder-Mead with candidate points clamped to the box; tracks and
/// returns the best point ever evaluated so refinement can only improve
/// on the grid result.
fn nelder_mead<E, G>(
    eval: &mut G,
    spec: &SearchSpec,
    start: &[f64],
    start_v: f64,
    evals: &mut usize,
) -> Result<(Vec<f64>, f64), OptimizeError<E>>
where
    G: FnMut(&[f64], &mut usize) -> Result<f64, OptimizeError<E>>,
{
    let dim = spec.bounds.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    // initial simplex: start plus steps of half a grid cell per dimension
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), start_v));
    for d in 0..dim {
        let (lo, hi) = spec.bounds[d];
        let step = 0.5 * (hi - lo) / (spec.grid_points.max(2) - 1) as f64;
        let mut p = start.to_vec();
        // step inward if the outward step leaves the box
        p[d] = if p[d] + step <= hi { p[d] + step } else { p[d] - step };
        clamp_to(&spec.bounds, &mut p);
        let v = eval(&p, evals)?;
        simplex.push((p, v));
    }
    let mut best = simplex[0].clone();
    for s in &simplex {
        if s.1 > best.1 {
            best = s.clone();
        }
    }

    for _ in 0..spec.max_iterations {
        // maximisation: sort descending by value
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        if simplex[0].1 > best.1 {
            best = simplex[0].clone();
        }
        let spread = (simplex[0].1 - simplex[dim].1).abs();
        let scale = simplex[0].1.abs().max(1e-12);
        if spread <= spec.tolerance * scale {
            break;
        }
        // centroid of all but the worst
        let mut centroid = vec![0.0; dim];
        for s in &simplex[..dim] {
            for (c, &v) in centroid.iter_mut().zip(&s.0) {
                *c += v / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let mut reflect = vec![0.0; dim];
        for d in 0..dim {
            reflect[d] = centroid[d] + alpha * (centroid[d] - worst.0[d]);
        }
        clamp_to(&spec.bounds, &mut reflect);
        let v_r = eval(&reflect, evals)?;
        if v_r > simplex[0].1 {
            // try expansion
            let mut expand = vec![0.0; dim];
            for d in 0..dim {
                expand[d] = centroid[d] + gamma * (reflect[d] - centroid[d]);
            }
            clamp_to(&spec.bounds, &mut expand);
            let v_e = eval(&expand, evals)?;
            simplex[dim] = if v_e > v_r {
                (expand, v_e)
            } else {
                (reflect, v_r)
            };
        } else if v_r > simplex[dim - 1].1 {
            simplex[dim] = (reflect, v_r);
        } else {
            // contraction toward the centroid
            let mut contract = vec![0.0; dim];
            for d in 0..dim {
                contract[d] = centroid[d] + rho * (worst.0[d] - centroid[d]);
            }
            clamp_to(&spec.bounds, &mut contract);
            let v_c = eval(&contract, evals)?;
            if v_c > worst.1 {
                simplex[dim] = (contract, v_c);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    for d in 0..dim {
                        s.0[d] = anchor[d] + sigma * (s.0[d] - anchor[d]);
                    }
                    clamp_to(&spec.bounds, &mut s.0);
                    s.1 = eval(&s.0, evals)?;
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    if simplex[0].1 > best.1 {
        best = simplex[0].clone();
    }
    Ok(best)
}
