//! Retracted gradient descent for the constrained problems, plus the exact
//! angle-lift solution of the 1D problem used as an independent oracle.
//!
//! The iterate update is u⁺ = retract(u - t g_tan) with g_tan the tangential
//! gradient and t chosen by Armijo backtracking; the nodal retraction keeps
//! every iterate exactly admissible. Since g_tan ⟂ u nodally, |u - t g_tan|
//! ≥ 1 at every node and the retraction never degenerates.

use std::time::Instant;

use serde_json::json;

use crate::domain::{check_admissible, from_angle, project_nodal, ProblemSpec, VectorField};
use crate::energy::{energy, riemannian_gradient, EnergyGradient};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::verify::el_residual;

/// Outcome of one solve. Numeric fields are widened to `f64` for reporting.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub problem: String,
    pub p: f64,
    pub m: usize,
    pub iterations: usize,
    pub converged: bool,
    pub final_energy: f64,
    pub el_residual: f64,
    /// One entry per accepted step, preceded by the initial energy.
    pub energy_history: Vec<f64>,
    pub wall_time_ms: u64,
}

/// JSON reports cap the history at this many entries (uniform stride,
/// first and last always kept).
const MAX_HISTORY_ENTRIES: usize = 1000;

pub(crate) fn decimate(history: &[f64], cap: usize) -> Vec<f64> {
    if history.len() <= cap {
        return history.to_vec();
    }
    let stride = (history.len() - 1).div_ceil(cap - 1);
    let mut out: Vec<f64> = history.iter().copied().step_by(stride).collect();
    if *out.last().unwrap() != history[history.len() - 1] {
        out.push(history[history.len() - 1]);
    }
    out
}

impl SolveReport {
    pub fn to_json(&self, field_path: Option<&str>) -> serde_json::Value {
        json!({
            "problem": self.problem,
            "p": self.p,
            "m": self.m,
            "iterations": self.iterations,
            "converged": self.converged,
            "final_energy": self.final_energy,
            "el_residual": self.el_residual,
            "energy_history": decimate(&self.energy_history, MAX_HISTORY_ENTRIES),
            "wall_time_ms": self.wall_time_ms,
            "field_path": field_path,
        })
    }
}

/// One accepted Armijo step.
#[derive(Debug, Clone)]
pub struct ArmijoStep<S> {
    pub t: S,
    pub field: VectorField<S>,
    pub energy: S,
    pub backtracks: usize,
}

const MAX_BACKTRACKS: usize = 60;
const STEP_UNDERFLOW: f64 = 1e-16;

fn armijo_general<S: Real>(
    u: &VectorField<S>,
    g_tan: &EnergyGradient<S>,
    obj: &dyn Fn(&VectorField<S>) -> Result<S>,
    obj_u: S,
    ls_beta: S,
    ls_c: S,
) -> Result<Option<ArmijoStep<S>>> {
    let gmax = g_tan.max_abs();
    if gmax == S::zero() {
        return Err(Error::InvalidSpec(
            "armijo step requires a nonzero gradient".into(),
        ));
    }
    let gsq = g_tan.norm_sq();
    let mut t = S::one() / (S::one() + gmax);
    for k in 0..=MAX_BACKTRACKS {
        if t < real(STEP_UNDERFLOW) {
            break;
        }
        let vals = u
            .values()
            .iter()
            .zip(g_tan.values())
            .map(|(a, g)| [a[0] - t * g[0], a[1] - t * g[1]])
            .collect();
        let candidate = project_nodal(&VectorField::new(*u.grid(), vals)?)?;
        let val = obj(&candidate)?;
        if val <= obj_u - ls_c * t * gsq {
            return Ok(Some(ArmijoStep {
                t,
                field: candidate,
                energy: val,
                backtracks: k,
            }));
        }
        t *= ls_beta;
    }
    Ok(None)
}

/// Backtracking line search on the p-energy along -g_tan, starting from the
/// scale-free trial step 1/(1 + |g_tan|_inf).
pub fn armijo_step<S: Real>(
    u: &VectorField<S>,
    g_tan: &EnergyGradient<S>,
    p: S,
    ls_beta: S,
    ls_c: S,
) -> Result<Option<ArmijoStep<S>>> {
    let e0 = energy(u, p)?;
    armijo_general(u, g_tan, &|w| energy(w, p), e0, ls_beta, ls_c)
}

/// Raw descent outcome before reporting.
#[derive(Debug, Clone)]
pub struct DescentOutcome<S> {
    pub field: VectorField<S>,
    /// Objective after every accepted step, preceded by the initial value.
    pub history: Vec<S>,
    pub iterations: usize,
    pub converged: bool,
    /// Line search underflowed before reaching stationarity.
    pub stagnated: bool,
}

fn run_descent<S: Real>(
    spec: &ProblemSpec<S>,
    init: &VectorField<S>,
    root_transform: bool,
) -> Result<DescentOutcome<S>> {
    let rep = check_admissible(init, spec)?;
    if !rep.admissible {
        return Err(Error::InadmissibleInit {
            unit: rep.unit_norm_defect.to_f64().unwrap_or(f64::NAN),
            boundary: rep.boundary_defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let p = spec.p;
    let inv_p = S::one() / p;
    let obj = move |w: &VectorField<S>| -> Result<S> {
        let e = energy(w, p)?;
        Ok(if root_transform { e.powf(inv_p) } else { e })
    };
    let mut u = init.clone();
    let mut value = obj(&u)?;
    let mut history = vec![value];
    let mut iterations = 0usize;
    let mut converged = false;
    let mut stagnated = false;

    while iterations < spec.max_iters {
        let mut gt = riemannian_gradient(&u, p)?;
        if root_transform {
            // chain rule through E -> E^(1/p); undefined slope at E = 0
            if value == S::zero() {
                converged = true;
                break;
            }
            let factor = inv_p * value / energy(&u, p)?;
            for g in gt.values_mut_internal() {
                g[0] *= factor;
                g[1] *= factor;
            }
        }
        if gt.max_abs() <= spec.tol {
            converged = true;
            break;
        }
        match armijo_general(&u, &gt, &obj, value, spec.ls_beta, spec.ls_c)? {
            Some(step) => {
                u = step.field;
                value = step.energy;
                history.push(value);
                iterations += 1;
            }
            None => {
                stagnated = true;
                break;
            }
        }
    }
    Ok(DescentOutcome {
        field: u,
        history,
        iterations,
        converged,
        stagnated,
    })
}

/// Projected (retracted) gradient descent from an admissible start.
pub fn projected_gradient_descent<S: Real>(
    spec: &ProblemSpec<S>,
    u0: &VectorField<S>,
) -> Result<DescentOutcome<S>> {
    run_descent(spec, u0, false)
}

/// Same loop on the monotone transform E ↦ E^(1/p); minimizers coincide.
pub fn root_transformed_descent<S: Real>(
    spec: &ProblemSpec<S>,
    u0: &VectorField<S>,
) -> Result<DescentOutcome<S>> {
    run_descent(spec, u0, true)
}

/// Full solve: descent to stationarity plus the certification residual.
pub fn solve<S: Real>(
    spec: &ProblemSpec<S>,
    init: &VectorField<S>,
) -> Result<(SolveReport, VectorField<S>)> {
    let started = Instant::now();
    let outcome = projected_gradient_descent(spec, init)?;
    let residual = el_residual(&outcome.field, spec.p)?;
    let report = SolveReport {
        problem: spec.problem.name().to_string(),
        p: spec.p.to_f64().unwrap_or(f64::NAN),
        m: spec.grid.m(),
        iterations: outcome.iterations,
        converged: outcome.converged,
        final_energy: outcome.history.last().unwrap().to_f64().unwrap_or(f64::NAN),
        el_residual: residual.to_f64().unwrap_or(f64::NAN),
        energy_history: outcome
            .history
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN))
            .collect(),
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    Ok((report, outcome.field))
}

/// Result of the 1D angle-lift oracle.
#[derive(Debug, Clone)]
pub struct OracleSolution<S> {
    pub field: VectorField<S>,
    /// Σ h |Δθ/h|^p at the returned angles.
    pub lifted_energy: S,
    /// Energy decrease achieved by the convex polish; ~0 at the exact optimum.
    pub polish_gain: S,
}

fn lifted_energy<S: Real>(theta: &[S], h: S, p: S) -> S {
    let mut acc = S::zero();
    for i in 0..theta.len() - 1 {
        let slope = (theta[i + 1] - theta[i]) / h;
        acc += h * slope.abs().powf(p);
    }
    acc
}

fn lifted_gradient<S: Real>(theta: &[S], h: S, p: S) -> Vec<S> {
    let n = theta.len();
    let mut grad = vec![S::zero(); n];
    let flux = |i: usize| {
        let s = (theta[i + 1] - theta[i]) / h;
        p * s.abs().powf(p - S::one()) * s.signum()
    };
    for i in 1..n - 1 {
        grad[i] = flux(i - 1) - flux(i);
    }
    grad
}

const POLISH_STOP: f64 = 1e-12;

/// Independent 1D oracle: minimize Σ h|Δθ/h|^p over nodal angles with
/// θ(0) = 0, θ(1) = π/2. Strict convexity makes the linear interpolant the
/// unique optimum; a short descent polish double-checks that numerically.
pub fn angle_lift_solve_1d<S: Real>(spec: &ProblemSpec<S>) -> Result<OracleSolution<S>> {
    if spec.problem != crate::domain::Problem::A1 {
        return Err(Error::WrongProblem {
            expected: "a1",
            got: spec.problem.name(),
        });
    }
    let grid = spec.grid;
    let h = grid.h::<S>();
    let half_pi = real::<S>(std::f64::consts::FRAC_PI_2);
    let mut theta: Vec<S> = (0..grid.node_count())
        .map(|n| {
            let (x, _) = grid.coords::<S>(n);
            half_pi * x
        })
        .collect();
    theta[0] = S::zero();
    *theta.last_mut().unwrap() = half_pi;

    let mut best = lifted_energy(&theta, h, spec.p);
    let mut gain = S::zero();
    for _ in 0..200 {
        let grad = lifted_gradient(&theta, h, spec.p);
        let gmax = grad.iter().fold(S::zero(), |a, g| a.max(g.abs()));
        if gmax == S::zero() {
            break;
        }
        let gsq: S = grad.iter().map(|g| *g * *g).sum();
        let mut t = S::one() / (S::one() + gmax);
        let mut accepted = false;
        for _ in 0..=MAX_BACKTRACKS {
            let candidate: Vec<S> = theta.iter().zip(&grad).map(|(a, g)| *a - t * *g).collect();
            let val = lifted_energy(&candidate, h, spec.p);
            if best - val > real(POLISH_STOP) && val <= best - spec.ls_c * t * gsq {
                gain += best - val;
                best = val;
                theta = candidate;
                accepted = true;
                break;
            }
            t *= spec.ls_beta;
        }
        if !accepted {
            break;
        }
    }

    Ok(OracleSolution {
        field: from_angle(&grid, &theta)?,
        lifted_energy: best,
        polish_gain: gain,
    })
}
