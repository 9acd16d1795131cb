//! Numerical certification of the structural claims behind the minimization:
//! first-variation (Euler-Lagrange) residual, the (Du)ᵀu = 0 identity,
//! strict-convexity midpoint gaps, the p-norm comparison with its sharp
//! constant, and ordering invariance under t ↦ t^(1/p).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::domain::{make_random_admissible, ProblemSpec, VectorField};
use crate::energy::{cell_gradient, cell_weight, energy, energy_gradient};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};

const UNIT_TOL: f64 = 1e-8;

fn require_unit<S: Real>(u: &VectorField<S>) -> Result<()> {
    let defect = u.unit_norm_defect();
    if defect > real(UNIT_TOL) {
        return Err(Error::ConstraintViolation {
            what: "unit-norm",
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Max-norm of the constrained first variation over the nodal hat basis.
///
/// For each interior node and component the test field is the hat function
/// projected through v - (u·v)u. The gradient term uses the cell quadrature
/// of the energy; the zero-order term |Du|²(u·v) is integrated exactly
/// against the piecewise-(bi)linear interpolant of u, which makes the
/// residual of a smooth stationary map an O(h²) consistency measure instead
/// of collapsing to roundoff. The result is normalized by h^dim.
pub fn el_residual<S: Real>(u: &VectorField<S>, p: S) -> Result<S> {
    require_unit(u)?;
    let grid = u.grid();
    let h = grid.h::<S>();
    let measure = grid.cell_measure::<S>();
    let v = u.values();
    let mut r = vec![[S::zero(); 2]; grid.node_count()];

    if grid.dim() == 1 {
        let third = S::one() / real(3.0);
        let sixth = S::one() / real(6.0);
        for cell in 0..grid.cell_count() {
            let (a, b) = (cell, cell + 1);
            let d0 = (v[b][0] - v[a][0]) / h;
            let d1 = (v[b][1] - v[a][1]) / h;
            let q = d0 * d0 + d1 * d1;
            let w = cell_weight(q, p);
            let z = w * q * h; // zero-order strength of this cell
            for k in 0..2 {
                let g = w * (v[b][k] - v[a][k]) / h;
                r[a][k] -= g;
                r[b][k] += g;
                r[a][k] -= z * (third * v[a][k] + sixth * v[b][k]);
                r[b][k] -= z * (sixth * v[a][k] + third * v[b][k]);
            }
        }
    } else {
        // mass coefficients of bilinear hats on one square cell
        let c_same = S::one() / real(9.0);
        let c_edge = S::one() / real(18.0);
        let c_diag = S::one() / real(36.0);
        let m = grid.m();
        let c = m - 1;
        for cell in 0..grid.cell_count() {
            let (row, col) = (cell / c, cell % c);
            let a = row * m + col;
            let nx = a + 1;
            let ny = a + m;
            let nxy = ny + 1;
            let d1x = (v[nx][0] - v[a][0]) / h;
            let d2x = (v[nx][1] - v[a][1]) / h;
            let d1y = (v[ny][0] - v[a][0]) / h;
            let d2y = (v[ny][1] - v[a][1]) / h;
            let q = d1x * d1x + d2x * d2x + d1y * d1y + d2y * d2y;
            let w = cell_weight(q, p);
            let z = w * q * measure;
            let corners = [a, nx, ny, nxy];
            // coefficient of corner j in the row of corner i
            let coeff = |i: usize, j: usize| {
                if i == j {
                    c_same
                } else if i + j == 3 {
                    c_diag // (a,nxy) and (nx,ny) are the two diagonals
                } else {
                    c_edge
                }
            };
            for k in 0..2 {
                let gx = w * (v[nx][k] - v[a][k]);
                r[a][k] -= gx;
                r[nx][k] += gx;
                let gy = w * (v[ny][k] - v[a][k]);
                r[a][k] -= gy;
                r[ny][k] += gy;
                for (i, &ci) in corners.iter().enumerate() {
                    let mut mass = S::zero();
                    for (j, &cj) in corners.iter().enumerate() {
                        mass += coeff(i, j) * v[cj][k];
                    }
                    r[ci][k] -= z * mass;
                }
            }
        }
    }

    let mut worst = S::zero();
    for (n, val) in r.iter().enumerate() {
        if grid.is_boundary(n) {
            continue;
        }
        for &c in val {
            let d = (c / measure).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}

/// Max over cells of |(Du)ᵀ ū|₂ with ū the anchor-node value; O(h) for
/// samples of smooth unit-norm maps.
pub fn orthogonality_defect<S: Real>(u: &VectorField<S>) -> Result<S> {
    require_unit(u)?;
    let grid = u.grid();
    let m = grid.m();
    let mut worst = S::zero();
    for cell in 0..grid.cell_count() {
        let s = cell_gradient(u, cell);
        let anchor = if grid.dim() == 1 {
            cell
        } else {
            let c = m - 1;
            (cell / c) * m + (cell % c)
        };
        let ub = u.values()[anchor];
        let tx = s.du[0] * ub[0] + s.du[2] * ub[1];
        let ty = s.du[1] * ub[0] + s.du[3] * ub[1];
        let d = (tx * tx + ty * ty).sqrt();
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// ½E(u)^(1/p) + ½E(v)^(1/p) - E((u+v)/2)^(1/p); nonnegative by convexity,
/// strictly positive unless the cell gradients of u and v are all parallel.
pub fn midpoint_convexity_gap<S: Real>(u: &VectorField<S>, v: &VectorField<S>, p: S) -> Result<S> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let half = real::<S>(0.5);
    let mid_vals = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(a, b)| [half * (a[0] + b[0]), half * (a[1] + b[1])])
        .collect();
    let mid = VectorField::new(*u.grid(), mid_vals)?;
    let inv_p = S::one() / p;
    let eu = energy(u, p)?.powf(inv_p);
    let ev = energy(v, p)?.powf(inv_p);
    let em = energy(&mid, p)?.powf(inv_p);
    Ok(half * eu + half * ev - em)
}

/// Detects the strict-convexity hypothesis: some cell where the gradients of
/// u and v span a parallelogram of area above 1e-10.
pub fn gradients_not_parallel<S: Real>(u: &VectorField<S>, v: &VectorField<S>) -> Result<bool> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let thresh = real::<S>(1e-10);
    for cell in 0..u.grid().cell_count() {
        let a = cell_gradient(u, cell).du;
        let b = cell_gradient(v, cell).du;
        // largest 2x2 minor of the 2x4 matrix [a; b]
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (a[i] * b[j] - a[j] * b[i]).abs() > thresh {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// True iff sorting the samples and sorting their p-th roots give the same
/// order, ties included.
pub fn root_monotonicity_check<S: Real>(samples: &[S], p: S) -> Result<bool> {
    if !(p > S::zero()) {
        return Err(Error::InvalidSpec(
            "root_monotonicity_check requires p > 0".into(),
        ));
    }
    for &s in samples {
        if s < S::zero() {
            return Err(Error::NegativeSample(s.to_f64().unwrap_or(f64::NAN)));
        }
    }
    let inv_p = S::one() / p;
    let roots: Vec<S> = samples.iter().map(|s| s.powf(inv_p)).collect();
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let a = samples[i].partial_cmp(&samples[j]);
            let b = roots[i].partial_cmp(&roots[j]);
            if a != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// |x|₂ vs the sharp bound n^(1/2-1/p) |x|ₚ for p ≥ 2; margin = rhs - lhs.
pub fn pnorm_comparison_check<S: Real>(x: &[S], p: S) -> Result<(S, S, S)> {
    if p < real(2.0) {
        return Err(Error::UnsupportedExponent(p.to_f64().unwrap_or(f64::NAN)));
    }
    let lhs = x.iter().map(|&v| v * v).sum::<S>().sqrt();
    let pnorm = x
        .iter()
        .map(|&v| v.abs().powf(p))
        .sum::<S>()
        .powf(S::one() / p);
    let n = real::<S>(x.len() as f64);
    let constant = n.powf(real::<S>(0.5) - S::one() / p);
    let rhs = constant * pnorm;
    Ok((lhs, rhs, rhs - lhs))
}

/// Worst relative error of the analytic energy gradient against central
/// differences of the energy at 20 seeded interior degrees of freedom.
pub fn fd_gradient_check<S: Real>(u: &VectorField<S>, p: S, step: S) -> Result<S> {
    if !(step > S::zero()) {
        return Err(Error::InvalidSpec("fd step must be > 0".into()));
    }
    let grid = u.grid();
    let interior: Vec<usize> = (0..grid.node_count())
        .filter(|&n| !grid.is_boundary(n))
        .collect();
    if interior.is_empty() {
        return Ok(S::zero());
    }
    let grad = energy_gradient(u, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xFD);
    let floor = real::<S>(1e-12);
    let mut worst = S::zero();
    for _ in 0..20 {
        let node = interior[rng.gen_range(0..interior.len())];
        let comp = rng.gen_range(0..2usize);
        let mut up = u.clone();
        up.values_mut()[node][comp] += step;
        let mut dn = u.clone();
        dn.values_mut()[node][comp] -= step;
        let fd = (energy(&up, p)? - energy(&dn, p)?) / (step + step);
        let an = grad.values()[node][comp];
        let denom = fd.abs().max(an.abs());
        let err = if denom <= floor {
            S::zero()
        } else {
            (fd - an).abs() / denom
        };
        if err > worst {
            worst = err;
        }
    }
    Ok(worst)
}

/// Aggregated certification of one field against its problem spec.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub el_residual: f64,
    pub orthogonality_defect: f64,
    pub convexity_gap: f64,
    pub lemma2_margin: f64,
    pub fd_gradient_error: f64,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "el_residual": self.el_residual,
            "orthogonality_defect": self.orthogonality_defect,
            "convexity_gap": self.convexity_gap,
            "lemma2_margin": self.lemma2_margin,
            "fd_gradient_error": self.fd_gradient_error,
            "all_pass": self.all_pass,
        })
    }
}

const GAP_FLOOR: f64 = -1e-12;
const MARGIN_FLOOR: f64 = -1e-12;
const FD_TOL: f64 = 1e-5;

/// Runs the whole verification suite on `u`.
///
/// The EL and orthogonality thresholds allow the O(h²) resp. O(h)
/// consistency error of a smooth stationary field on this grid; rough
/// non-stationary fields fail them by orders of magnitude.
pub fn run_verify<S: Real>(u: &VectorField<S>, spec: &ProblemSpec<S>) -> Result<VerifyReport> {
    if *u.grid() != spec.grid {
        return Err(Error::GridMismatch);
    }
    let p = spec.p;
    let h = spec.grid.h::<S>();
    let e = energy(u, p)?;

    let el = el_residual(u, p)?;
    let ortho = orthogonality_defect(u)?;
    let partner = make_random_admissible(spec)?;
    let gap = midpoint_convexity_gap(u, &partner, p)?;
    let mut margin = S::infinity();
    for v in u.values() {
        let (_, _, m) = pnorm_comparison_check(v, p)?;
        if m < margin {
            margin = m;
        }
    }
    let fd = fd_gradient_check(u, p, real(1e-6))?;

    let el_tol = spec.tol + real::<S>(10.0) * p * (S::one() + e) * h * h;
    let ortho_tol = real::<S>(1e-12) + real::<S>(2.0) * (S::one() + e) * h;
    let all_pass = el <= el_tol
        && ortho <= ortho_tol
        && gap >= real(GAP_FLOOR)
        && margin >= real(MARGIN_FLOOR)
        && fd <= real(FD_TOL);

    Ok(VerifyReport {
        el_residual: el.to_f64().unwrap_or(f64::NAN),
        orthogonality_defect: ortho.to_f64().unwrap_or(f64::NAN),
        convexity_gap: gap.to_f64().unwrap_or(f64::NAN),
        lemma2_margin: margin.to_f64().unwrap_or(f64::NAN),
        fd_gradient_error: fd.to_f64().unwrap_or(f64::NAN),
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{
        build_grid, from_angle, make_constant_2d, make_geodesic_1d, make_random_admissible,
        BoundaryData, Problem,
    };

    fn quadratic_angle_field(m: usize) -> VectorField<f64> {
        let g = build_grid(1, m).unwrap();
        let theta: Vec<f64> = (0..m)
            .map(|n| {
                let (x, _) = g.coords::<f64>(n);
                std::f64::consts::FRAC_PI_2 * x * x
            })
            .collect();
        from_angle(&g, &theta).unwrap()
    }

    #[test]
    fn el_residual_zero_on_constant_field() {
        let g = build_grid(2, 9).unwrap();
        let u = make_constant_2d::<f64>(&g).unwrap();
        for p in [2.0, 3.0] {
            assert_eq!(el_residual(&u, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn el_residual_consistency_order_of_geodesic() {
        let mut residuals = Vec::new();
        for m in [51usize, 101, 201] {
            let g = build_grid(1, m).unwrap();
            let u = make_geodesic_1d::<f64>(&g).unwrap();
            residuals.push(el_residual(&u, 2.0).unwrap());
        }
        for w in residuals.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (3.0..5.0).contains(&ratio),
                "ratio {ratio}, residuals {residuals:?}"
            );
        }
        // magnitude matches (π/2)² (πh/2)² / 3 = π⁴h²/48
        let h = 1.0 / 50.0;
        let predicted = std::f64::consts::PI.powi(4) * h * h / 48.0;
        assert!((residuals[0] - predicted).abs() < 0.2 * predicted);
    }

    #[test]
    fn el_residual_rejects_non_unit_field() {
        let g = build_grid(1, 5).unwrap();
        let mut u = make_geodesic_1d::<f64>(&g).unwrap();
        u.values_mut()[2] = [2.0, 0.0];
        assert!(el_residual(&u, 2.0).is_err());
    }

    #[test]
    fn orthogonality_defect_halves_with_h() {
        let g1 = build_grid(1, 101).unwrap();
        let g2 = build_grid(1, 201).unwrap();
        let d1 = orthogonality_defect(&make_geodesic_1d::<f64>(&g1).unwrap()).unwrap();
        let d2 = orthogonality_defect(&make_geodesic_1d::<f64>(&g2).unwrap()).unwrap();
        let ratio = d1 / d2;
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn orthogonality_defect_constant_and_scaled() {
        let g = build_grid(2, 7).unwrap();
        let u = make_constant_2d::<f64>(&g).unwrap();
        assert_eq!(orthogonality_defect(&u).unwrap(), 0.0);
        let mut bad = u.clone();
        bad.values_mut()[10] = [0.0, 2.0];
        assert!(matches!(
            orthogonality_defect(&bad),
            Err(Error::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn convexity_gap_cases() {
        let g = build_grid(1, 101).unwrap();
        let u = make_geodesic_1d::<f64>(&g).unwrap();
        // v = u: degenerate case, zero gap
        let gap = midpoint_convexity_gap(&u, &u, 2.0).unwrap();
        assert!(gap.abs() <= 1e-12);
        assert!(!gradients_not_parallel(&u, &u).unwrap());

        // geodesic vs quadratic-angle path: strictly positive gap
        let v = quadratic_angle_field(101);
        assert!(gradients_not_parallel(&u, &v).unwrap());
        let gap = midpoint_convexity_gap(&u, &v, 2.0).unwrap();
        assert!(gap > 0.01, "gap {gap}");

        // negated field: midpoint is zero, gap is E(u)^(1/p)
        let neg_vals = u.values().iter().map(|v| [-v[0], -v[1]]).collect();
        let neg = VectorField::new(g, neg_vals).unwrap();
        let gap = midpoint_convexity_gap(&u, &neg, 2.0).unwrap();
        let expect = energy(&u, 2.0).unwrap().sqrt();
        assert!((gap - expect).abs() < 1e-12);
    }

    #[test]
    fn quadratic_angle_lifted_energy_matches_quadrature() {
        // ∫₀¹ (πx)² dx = π²/3 in the lifted metric, up to O(h²) quadrature error
        let m = 201;
        let g = build_grid(1, m).unwrap();
        let v = quadratic_angle_field(m);
        let theta = crate::domain::angle_lift_1d(&v).unwrap();
        let h = g.h::<f64>();
        let mut lifted = 0.0;
        for i in 0..m - 1 {
            let s = (theta[i + 1] - theta[i]) / h;
            lifted += h * s * s;
        }
        let target = std::f64::consts::PI.powi(2) / 3.0;
        assert!(
            (lifted - target).abs() < 1e-3 * target,
            "{lifted} vs {target}"
        );
    }

    #[test]
    fn root_monotonicity_examples() {
        assert!(root_monotonicity_check(&[16.0, 25.0], 2.0).unwrap());
        assert!(root_monotonicity_check(&[0.0, 1.0, 2.4674], 3.0).unwrap());
        assert!(root_monotonicity_check(&[2.0, 2.0, 5.0, 2.0], 4.0).unwrap());
        assert!(matches!(
            root_monotonicity_check(&[-1.0, 2.0], 2.0),
            Err(Error::NegativeSample(_))
        ));
        assert!(root_monotonicity_check::<f64>(&[1.0], 0.0).is_err());
    }

    #[test]
    fn pnorm_sharp_constant_equality_case() {
        let (lhs, rhs, margin) = pnorm_comparison_check(&[1.0f64, 1.0], 4.0).unwrap();
        assert!((lhs - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((rhs - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(margin.abs() <= 1e-12);

        let (lhs, _, margin) = pnorm_comparison_check(&[1.0f64, 0.0], 3.0).unwrap();
        assert_eq!(lhs, 1.0);
        assert!(margin >= 0.0);

        assert!(pnorm_comparison_check(&[1.0f64], 1.5).is_err());
    }

    #[test]
    fn pnorm_margin_never_negative() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..1000 {
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            for p in [2.0, 3.0, 4.0] {
                let (_, _, margin) = pnorm_comparison_check(&x, p).unwrap();
                assert!(margin >= -1e-12, "x={x:?} p={p} margin={margin}");
            }
        }
    }

    #[test]
    fn fd_gradient_check_bounds() {
        let spec = ProblemSpec::new(
            Problem::A2,
            4.0,
            build_grid(2, 9).unwrap(),
            BoundaryData::A2Constant,
            1e-6,
            10,
            0.5,
            1e-4,
            21,
        )
        .unwrap();
        let u = make_random_admissible(&spec).unwrap();
        for p in [2.0, 4.0] {
            let err = fd_gradient_check(&u, p, 1e-6).unwrap();
            assert!(err <= 1e-5, "p={p}: {err}");
        }
        let c = make_constant_2d::<f64>(&spec.grid).unwrap();
        assert_eq!(fd_gradient_check(&c, 2.0, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn run_verify_accepts_constant_minimizer() {
        let spec = ProblemSpec::new(
            Problem::A2,
            2.0,
            build_grid(2, 11).unwrap(),
            BoundaryData::A2Constant,
            1e-6,
            10,
            0.5,
            1e-4,
            3,
        )
        .unwrap();
        let u = make_constant_2d::<f64>(&spec.grid).unwrap();
        let rep = run_verify(&u, &spec).unwrap();
        assert_eq!(rep.el_residual, 0.0);
        assert!(rep.all_pass, "{rep:?}");
    }

    #[test]
    fn run_verify_rejects_rough_field() {
        let spec = ProblemSpec::new(
            Problem::A2,
            2.0,
            build_grid(2, 11).unwrap(),
            BoundaryData::A2Constant,
            1e-6,
            10,
            0.5,
            1e-4,
            3,
        )
        .unwrap();
        let u = make_random_admissible(&spec).unwrap();
        let rep = run_verify(&u, &spec).unwrap();
        assert!(!rep.all_pass, "random field must not certify: {rep:?}");
    }
}
