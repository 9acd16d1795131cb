//! Grids on ]0,1[ and ]0,1[², circle-valued nodal fields, boundary data and
//! the admissible-set machinery (membership tests, explicit admissible fields,
//! nodal retraction onto the circle, angle lifts).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Which of the two constrained problems is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Maps ]0,1[ → S¹ with u(0) = (0,1), u(1) = (1,0).
    A1,
    /// Maps ]0,1[² → S¹ with prescribed boundary values.
    A2,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::A1 => "a1",
            Problem::A2 => "a2",
        }
    }
}

/// Uniform grid on ]0,1[ (dim 1) or ]0,1[² (dim 2) with `m` nodes per axis.
///
/// 2D nodes are indexed row-major: node `(row, col)` has index `row*m + col`
/// and coordinates `(x, y) = (col*h, row*h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    m: usize,
}

impl Grid {
    pub fn new(dim: usize, m: usize) -> Result<Grid> {
        if dim != 1 && dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: dim,
            });
        }
        if m < 3 {
            return Err(Error::InvalidGrid(m));
        }
        Ok(Grid { dim, m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nodes per axis.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Mesh spacing h = 1/(m-1).
    pub fn h<S: Real>(&self) -> S {
        S::one() / real((self.m - 1) as f64)
    }

    /// h^dim, the quadrature weight of one cell.
    pub fn cell_measure<S: Real>(&self) -> S {
        let h = self.h::<S>();
        if self.dim == 1 {
            h
        } else {
            h * h
        }
    }

    pub fn node_count(&self) -> usize {
        if self.dim == 1 {
            self.m
        } else {
            self.m * self.m
        }
    }

    pub fn cell_count(&self) -> usize {
        let c = self.m - 1;
        if self.dim == 1 {
            c
        } else {
            c * c
        }
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        if self.dim == 1 {
            node == 0 || node == self.m - 1
        } else {
            let (row, col) = (node / self.m, node % self.m);
            row == 0 || col == 0 || row == self.m - 1 || col == self.m - 1
        }
    }

    /// Node coordinates; the second entry is 0 for 1D grids.
    pub fn coords<S: Real>(&self, node: usize) -> (S, S) {
        let h = self.h::<S>();
        if self.dim == 1 {
            (real::<S>(node as f64) * h, S::zero())
        } else {
            let (row, col) = (node / self.m, node % self.m);
            (real::<S>(col as f64) * h, real::<S>(row as f64) * h)
        }
    }

    /// Boundary node indices in ascending order.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&n| self.is_boundary(n))
            .collect()
    }
}

/// Nodal samples of a map u = (u₁, u₂).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<S> {
    grid: Grid,
    values: Vec<[S; 2]>,
}

impl<S: Real> VectorField<S> {
    pub fn new(grid: Grid, values: Vec<[S; 2]>) -> Result<VectorField<S>> {
        if values.len() != grid.node_count() {
            return Err(Error::MalformedField(format!(
                "expected {} nodal values, got {}",
                grid.node_count(),
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| !v[0].is_finite() || !v[1].is_finite())
        {
            return Err(Error::MalformedField("non-finite nodal value".into()));
        }
        Ok(VectorField { grid, values })
    }

    pub fn constant(grid: Grid, value: [S; 2]) -> VectorField<S> {
        VectorField {
            grid,
            values: vec![value; grid.node_count()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[[S; 2]] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [[S; 2]] {
        &mut self.values
    }

    /// Worst nodal deviation of |u| from 1.
    pub fn unit_norm_defect(&self) -> S {
        let mut worst = S::zero();
        for v in &self.values {
            let d = ((v[0] * v[0] + v[1] * v[1]).sqrt() - S::one()).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Largest nodal Euclidean distance to another field on the same grid.
    pub fn max_node_distance(&self, other: &VectorField<S>) -> Result<S> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut worst = S::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            let dx = a[0] - b[0];
            let dy = a[1] - b[1];
            let d = (dx * dx + dy * dy).sqrt();
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }
}

/// Prescribed boundary values of the constraint set.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData<S> {
    /// Endpoint pins u(0) = (0,1) and u(1) = (1,0).
    A1Endpoints,
    /// u ≡ (0,1) on the whole boundary of the square.
    A2Constant,
    /// Boundary angle g sampled on the boundary nodes in ascending node
    /// order; the induced value (sin g, cos g) is exactly unit-norm.
    A2Angles(Vec<S>),
}

impl<S: Real> BoundaryData<S> {
    /// `(node, value)` pairs for every boundary node, ascending by node.
    pub fn values(&self, grid: &Grid) -> Result<Vec<(usize, [S; 2])>> {
        match self {
            BoundaryData::A1Endpoints => {
                if grid.dim() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: grid.dim(),
                    });
                }
                Ok(vec![
                    (0, [S::zero(), S::one()]),
                    (grid.m() - 1, [S::one(), S::zero()]),
                ])
            }
            BoundaryData::A2Constant => {
                if grid.dim() != 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: grid.dim(),
                    });
                }
                Ok(grid
                    .boundary_nodes()
                    .into_iter()
                    .map(|n| (n, [S::zero(), S::one()]))
                    .collect())
            }
            BoundaryData::A2Angles(g) => {
                if grid.dim() != 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: grid.dim(),
                    });
                }
                let nodes = grid.boundary_nodes();
                if g.len() != nodes.len() {
                    return Err(Error::MalformedField(format!(
                        "boundary angle count {} != boundary node count {}",
                        g.len(),
                        nodes.len()
                    )));
                }
                if g.iter().any(|a| !a.is_finite()) {
                    return Err(Error::MalformedField("non-finite boundary angle".into()));
                }
                Ok(nodes
                    .into_iter()
                    .zip(g)
                    .map(|(n, &a)| (n, [a.sin(), a.cos()]))
                    .collect())
            }
        }
    }
}

/// Everything needed to pose and solve one minimization problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec<S> {
    pub problem: Problem,
    pub p: S,
    pub grid: Grid,
    pub boundary: BoundaryData<S>,
    pub tol: S,
    pub max_iters: usize,
    pub ls_beta: S,
    pub ls_c: S,
    pub seed: u64,
}

impl<S: Real> ProblemSpec<S> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        problem: Problem,
        p: S,
        grid: Grid,
        boundary: BoundaryData<S>,
        tol: S,
        max_iters: usize,
        ls_beta: S,
        ls_c: S,
        seed: u64,
    ) -> Result<ProblemSpec<S>> {
        if p < real(2.0) {
            return Err(Error::UnsupportedExponent(p.to_f64().unwrap_or(f64::NAN)));
        }
        let want_dim = match problem {
            Problem::A1 => 1,
            Problem::A2 => 2,
        };
        if grid.dim() != want_dim {
            return Err(Error::DimensionMismatch {
                expected: want_dim,
                got: grid.dim(),
            });
        }
        if !(tol > S::zero()) {
            return Err(Error::InvalidSpec("tol must be > 0".into()));
        }
        if !(ls_beta > S::zero() && ls_beta < S::one()) {
            return Err(Error::InvalidSpec("ls_beta must lie in (0,1)".into()));
        }
        if !(ls_c > S::zero() && ls_c < S::one()) {
            return Err(Error::InvalidSpec("ls_c must lie in (0,1)".into()));
        }
        // consistency of boundary data with the problem id
        match (problem, &boundary) {
            (Problem::A1, BoundaryData::A1Endpoints) => {}
            (Problem::A2, BoundaryData::A2Constant) | (Problem::A2, BoundaryData::A2Angles(_)) => {}
            _ => {
                return Err(Error::InvalidSpec(
                    "boundary data does not match problem".into(),
                ))
            }
        }
        boundary.values(&grid)?;
        Ok(ProblemSpec {
            problem,
            p,
            grid,
            boundary,
            tol,
            max_iters,
            ls_beta,
            ls_c,
            seed,
        })
    }
}

/// Nodal constraints are exact; anything above this is a violation.
pub const ADMISSIBLE_TOL: f64 = 1e-12;

/// Per-constraint worst-case defects of a candidate field.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintReport<S> {
    pub unit_norm_defect: S,
    pub boundary_defect: S,
    pub admissible: bool,
}

/// Uniform grid on the unit interval or square.
pub fn build_grid(dim: usize, m: usize) -> Result<Grid> {
    Grid::new(dim, m)
}

/// Quarter-circle geodesic u(x) = (sin(πx/2), cos(πx/2)); admissible for A₁.
pub fn make_geodesic_1d<S: Real>(grid: &Grid) -> Result<VectorField<S>> {
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: grid.dim(),
        });
    }
    let half_pi = real::<S>(std::f64::consts::FRAC_PI_2);
    let values = (0..grid.node_count())
        .map(|n| {
            let (x, _) = grid.coords::<S>(n);
            let theta = half_pi * x;
            [theta.sin(), theta.cos()]
        })
        .collect();
    VectorField::new(*grid, values)
}

/// The constant map u ≡ (0,1); admissible for A₂ with zero energy.
pub fn make_constant_2d<S: Real>(grid: &Grid) -> Result<VectorField<S>> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    Ok(VectorField::constant(*grid, [S::zero(), S::one()]))
}

/// Seeded random admissible field: exact boundary data, interior angles
/// uniform in [-π, π). Identical seed gives a bitwise-identical field.
pub fn make_random_admissible<S: Real>(spec: &ProblemSpec<S>) -> Result<VectorField<S>> {
    let grid = spec.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut values = vec![[S::zero(); 2]; grid.node_count()];
    for (n, v) in values.iter_mut().enumerate() {
        if grid.is_boundary(n) {
            continue;
        }
        let theta: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let theta = real::<S>(theta);
        *v = [theta.sin(), theta.cos()];
    }
    for (n, bv) in spec.boundary.values(&grid)? {
        values[n] = bv;
    }
    VectorField::new(grid, values)
}

/// Worst nodal unit-norm and boundary defects of `u` against `spec`.
pub fn check_admissible<S: Real>(
    u: &VectorField<S>,
    spec: &ProblemSpec<S>,
) -> Result<ConstraintReport<S>> {
    if *u.grid() != spec.grid {
        return Err(Error::GridMismatch);
    }
    let unit = u.unit_norm_defect();
    let mut boundary = S::zero();
    for (n, bv) in spec.boundary.values(&spec.grid)? {
        let v = u.values()[n];
        let dx = v[0] - bv[0];
        let dy = v[1] - bv[1];
        let d = (dx * dx + dy * dy).sqrt();
        if d > boundary {
            boundary = d;
        }
    }
    let tol = real::<S>(ADMISSIBLE_TOL);
    Ok(ConstraintReport {
        unit_norm_defect: unit,
        boundary_defect: boundary,
        admissible: unit <= tol && boundary <= tol,
    })
}

/// Nodal retraction: each value divided by its Euclidean norm.
///
/// Fails on nodes with norm ≤ 1e-15, mirroring the `|u+τv| ≠ 0` requirement
/// of the normalized variation.
pub fn project_nodal<S: Real>(u: &VectorField<S>) -> Result<VectorField<S>> {
    let floor = real::<S>(1e-15);
    let mut values = Vec::with_capacity(u.values().len());
    for (n, v) in u.values().iter().enumerate() {
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if norm <= floor {
            return Err(Error::DegenerateNode { index: n });
        }
        values.push([v[0] / norm, v[1] / norm]);
    }
    VectorField::new(*u.grid(), values)
}

const LIFT_UNIT_TOL: f64 = 1e-8;

/// Angles θᵢ with (sin θᵢ, cos θᵢ) = u(xᵢ), unwrapped so consecutive
/// increments lie in (-π, π] (an exact jump of π picks +π).
pub fn angle_lift_1d<S: Real>(u: &VectorField<S>) -> Result<Vec<S>> {
    if u.grid().dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.grid().dim(),
        });
    }
    let defect = u.unit_norm_defect();
    if defect > real(LIFT_UNIT_TOL) {
        return Err(Error::ConstraintViolation {
            what: "unit-norm",
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let pi = real::<S>(std::f64::consts::PI);
    let two_pi = pi + pi;
    let mut out = Vec::with_capacity(u.values().len());
    let mut prev = S::zero();
    for (i, v) in u.values().iter().enumerate() {
        // u = (sin θ, cos θ), hence θ = atan2(u1, u2)
        let raw = v[0].atan2(v[1]);
        if i == 0 {
            out.push(raw);
            prev = raw;
            continue;
        }
        let mut inc = raw - prev;
        while inc > pi {
            inc -= two_pi;
        }
        while inc <= -pi {
            inc += two_pi;
        }
        let theta = prev + inc;
        out.push(theta);
        prev = theta;
    }
    Ok(out)
}

/// Inverse of the angle lift: u(xᵢ) = (sin θᵢ, cos θᵢ).
pub fn from_angle<S: Real>(grid: &Grid, angles: &[S]) -> Result<VectorField<S>> {
    if angles.len() != grid.node_count() {
        return Err(Error::MalformedField(format!(
            "expected {} angles, got {}",
            grid.node_count(),
            angles.len()
        )));
    }
    let values = angles.iter().map(|&t| [t.sin(), t.cos()]).collect();
    VectorField::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a1_spec(m: usize) -> ProblemSpec<f64> {
        ProblemSpec::new(
            Problem::A1,
            2.0,
            build_grid(1, m).unwrap(),
            BoundaryData::A1Endpoints,
            1e-6,
            1000,
            0.5,
            1e-4,
            0,
        )
        .unwrap()
    }

    fn a2_spec(m: usize, seed: u64) -> ProblemSpec<f64> {
        ProblemSpec::new(
            Problem::A2,
            2.0,
            build_grid(2, m).unwrap(),
            BoundaryData::A2Constant,
            1e-6,
            1000,
            0.5,
            1e-4,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn smallest_grids() {
        let g = build_grid(1, 3).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.cell_count(), 2);
        assert_eq!(g.h::<f64>(), 0.5);
        let (x0, _) = g.coords::<f64>(0);
        let (x1, _) = g.coords::<f64>(1);
        let (x2, _) = g.coords::<f64>(2);
        assert_eq!((x0, x1, x2), (0.0, 0.5, 1.0));

        let g2 = build_grid(2, 3).unwrap();
        assert_eq!(g2.node_count(), 9);
        assert_eq!(g2.cell_count(), 4);
        assert_eq!(g2.h::<f64>(), 0.5);

        let g3 = build_grid(1, 101).unwrap();
        assert_eq!(g3.h::<f64>(), 0.01);
        assert_eq!(g3.cell_count(), 100);
    }

    #[test]
    fn grid_too_small() {
        assert!(matches!(build_grid(1, 2), Err(Error::InvalidGrid(2))));
    }

    #[test]
    fn spacing_spans_unit_interval() {
        for m in [3usize, 7, 101, 400] {
            let g = build_grid(1, m).unwrap();
            let span = g.h::<f64>() * (m - 1) as f64;
            assert!((span - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let g = build_grid(1, 3).unwrap();
        let u = make_geodesic_1d::<f64>(&g).unwrap();
        assert_eq!(u.values()[0], [0.0, 1.0]);
        let end = u.values()[2];
        assert!((end[0] - 1.0).abs() < 1e-15 && end[1].abs() < 1e-15);
        let mid = u.values()[1];
        let s = std::f64::consts::SQRT_2 / 2.0;
        assert!((mid[0] - s).abs() < 1e-15);
        assert!((mid[1] - s).abs() < 1e-15);
    }

    #[test]
    fn geodesic_rejects_2d_grid() {
        let g = build_grid(2, 5).unwrap();
        assert!(make_geodesic_1d::<f64>(&g).is_err());
    }

    #[test]
    fn constant_2d_is_admissible() {
        let spec = a2_spec(5, 0);
        let u = make_constant_2d::<f64>(&spec.grid).unwrap();
        let rep = check_admissible(&u, &spec).unwrap();
        assert_eq!(rep.unit_norm_defect, 0.0);
        assert_eq!(rep.boundary_defect, 0.0);
        assert!(rep.admissible);
    }

    #[test]
    fn random_admissible_is_deterministic_and_admissible() {
        let spec = a2_spec(9, 42);
        let u1 = make_random_admissible(&spec).unwrap();
        let u2 = make_random_admissible(&spec).unwrap();
        assert_eq!(u1, u2);
        let rep = check_admissible(&u1, &spec).unwrap();
        assert!(rep.admissible, "unit defect {:e}", rep.unit_norm_defect);
        // pinned boundary
        for n in spec.grid.boundary_nodes() {
            assert_eq!(u1.values()[n], [0.0, 1.0]);
        }
    }

    #[test]
    fn constant_field_violates_a1_endpoint() {
        let spec = a1_spec(5);
        let u = VectorField::constant(spec.grid, [0.0, 1.0]);
        let rep = check_admissible(&u, &spec).unwrap();
        assert!(!rep.admissible);
        assert!((rep.boundary_defect - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn scaled_field_has_unit_defect_one() {
        let spec = a1_spec(5);
        let mut u = make_geodesic_1d::<f64>(&spec.grid).unwrap();
        for v in u.values_mut() {
            v[0] *= 2.0;
            v[1] *= 2.0;
        }
        let rep = check_admissible(&u, &spec).unwrap();
        assert!((rep.unit_norm_defect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn project_345_and_degenerate() {
        let g = build_grid(1, 3).unwrap();
        let u = VectorField::new(g, vec![[3.0, 4.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        let p = project_nodal(&u).unwrap();
        assert_eq!(p.values()[0], [0.6, 0.8]);
        assert_eq!(p.values()[1], [0.0, 1.0]);

        let z = VectorField::new(g, vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            project_nodal(&z),
            Err(Error::DegenerateNode { index: 0 })
        ));
    }

    #[test]
    fn angle_lift_of_geodesic_is_linear() {
        let g = build_grid(1, 41).unwrap();
        let u = make_geodesic_1d::<f64>(&g).unwrap();
        let theta = angle_lift_1d(&u).unwrap();
        for (n, t) in theta.iter().enumerate() {
            let (x, _) = g.coords::<f64>(n);
            assert!((t - std::f64::consts::FRAC_PI_2 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn angle_lift_rejects_non_unit_field() {
        let g = build_grid(1, 3).unwrap();
        let u = VectorField::new(g, vec![[0.0, 2.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(angle_lift_1d(&u).is_err());
    }

    #[test]
    fn a2_general_angles_are_unit_norm_on_boundary() {
        let g = build_grid(2, 5).unwrap();
        let nb = g.boundary_nodes().len();
        let angles: Vec<f64> = (0..nb).map(|i| 0.3 * i as f64).collect();
        let b = BoundaryData::A2Angles(angles);
        for (_, v) in b.values(&g).unwrap() {
            assert!(((v[0] * v[0] + v[1] * v[1]).sqrt() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn witnesses_admissible_across_grid_sizes() {
        for m in [3usize, 17, 101, 401] {
            let s1 = a1_spec(m);
            let u = make_geodesic_1d::<f64>(&s1.grid).unwrap();
            assert!(check_admissible(&u, &s1).unwrap().admissible, "A1 m={m}");
        }
        for m in [3usize, 17, 41] {
            let s2 = a2_spec(m, 0);
            let u = make_constant_2d::<f64>(&s2.grid).unwrap();
            assert!(check_admissible(&u, &s2).unwrap().admissible, "A2 m={m}");
        }
    }

    #[test]
    fn spec_rejects_small_p_and_dim_mismatch() {
        let g = build_grid(1, 5).unwrap();
        assert!(matches!(
            ProblemSpec::new(
                Problem::A1,
                1.5,
                g,
                BoundaryData::A1Endpoints,
                1e-6,
                10,
                0.5,
                1e-4,
                0
            ),
            Err(Error::UnsupportedExponent(_))
        ));
        let g2 = build_grid(2, 5).unwrap();
        assert!(ProblemSpec::new(
            Problem::A1,
            2.0,
            g2,
            BoundaryData::A1Endpoints,
            1e-6,
            10,
            0.5,
            1e-4,
            0
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn project_is_idempotent(vals in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 9..=9)) {
            let g = build_grid(2, 3).unwrap();
            let vals: Vec<[f64;2]> = vals.into_iter().map(|(a, b)| {
                // keep away from the degenerate origin
                if a.hypot(b) < 1e-3 { [1.0, 0.0] } else { [a, b] }
            }).collect();
            let u = VectorField::new(g, vals).unwrap();
            let once = project_nodal(&u).unwrap();
            let twice = project_nodal(&once).unwrap();
            for (a, b) in once.values().iter().zip(twice.values()) {
                prop_assert!((a[0] - b[0]).abs() <= 1e-15);
                prop_assert!((a[1] - b[1]).abs() <= 1e-15);
            }
            prop_assert!(once.unit_norm_defect() <= 1e-15);
        }

        #[test]
        fn angle_round_trip(incs in proptest::collection::vec(-3.1f64..3.1, 8..=8), theta0 in -3.0f64..3.0) {
            let g = build_grid(1, 9).unwrap();
            let mut theta = vec![theta0];
            for inc in incs {
                let last = *theta.last().unwrap();
                theta.push(last + inc);
            }
            let u = from_angle(&g, &theta).unwrap();
            let lifted = angle_lift_1d(&u).unwrap();
            // unwrapping recovers increments; the base point may shift by 2πk
            let shift = lifted[0] - theta[0];
            for (a, b) in lifted.iter().zip(&theta) {
                prop_assert!((a - b - shift).abs() < 1e-9);
            }
            let back = from_angle(&g, &lifted).unwrap();
            prop_assert!(back.max_node_distance(&u).unwrap() < 1e-12);
        }

        #[test]
        fn random_admissible_passes_own_spec(seed in 0u64..1000) {
            let spec = a2_spec(7, seed);
            let u = make_random_admissible(&spec).unwrap();
            prop_assert!(check_admissible(&u, &spec).unwrap().admissible);
        }
    }
}
