//! Stationary solutions of `-Δu + α u μ = f μ` for concentric-sphere
//! measures, via the resolvent formula `u = (1 + αG^μ)^{-1} G^μ f`.
//!
//! For radial data on concentric spheres the solution is an explicit
//! superposition of shell potentials: solving the per-sphere linear system
//! `(I + αM) v = f` with `M_ij = m_j / (4π max(R_i, R_j))` and setting
//!
//! ```text
//! u(x) = Σ_i m_i v_i / (4π max(R_i, |x|))
//! ```
//!
//! realizes the resolvent everywhere in space, exactly. The field is
//! continuous, radial, harmonic off the spheres, constant inside the
//! innermost one, and decays like a point mass at infinity.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::linalg;
use crate::measures::{Measure, MeasureSequence, SphereFamilyMeasure};
use crate::potentials::{operator_matrix, potential_one_sup, EvaluationGrid};
use std::f64::consts::PI;

/// A solved stationary field.
#[derive(Debug, Clone)]
pub struct StationarySolutionField {
    measure: SphereFamilyMeasure,
    alpha: f64,
    /// `v = (I + αM)^{-1} f`: pre-potential coefficients per sphere.
    coefficients: Vec<f64>,
}

impl StationarySolutionField {
    pub fn measure(&self) -> &SphereFamilyMeasure {
        &self.measure
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The solved coefficient vector `(1 + αK)^{-1} f` on the spheres.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Field value at radius `r ≥ 0`.
    pub fn evaluate_radial(&self, r: f64) -> f64 {
        self.measure
            .radii()
            .iter()
            .zip(self.measure.masses())
            .zip(&self.coefficients)
            .map(|((&rad, &mass), &v)| mass * v / (4.0 * PI * rad.max(r)))
            .sum()
    }

    /// Field value at a point of `ℝ³`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: x.len(),
            });
        }
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        Ok(self.evaluate_radial(r))
    }

    /// Solution values on the spheres themselves: `u(R_i) = (M v)_i`.
    pub fn sphere_values(&self) -> Vec<f64> {
        self.measure
            .radii()
            .iter()
            .map(|&r| self.evaluate_radial(r))
            .collect()
    }
}

/// Solve `(I + αM) v = f` for radial data `f` (one value per sphere) and
/// wrap the coefficients into an everywhere-evaluable field.
pub fn stationary_solve(
    measure: &SphereFamilyMeasure,
    alpha: f64,
    data: &[f64],
) -> Result<StationarySolutionField> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stationary problems need alpha >= 0, got {alpha}"
        )));
    }
    let n = measure.len();
    if data.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: data.len(),
        });
    }
    // M is diagonally similar to the symmetric realization S, so the solve
    // reduces to an SPD system: (I + αS) (D^{1/2} v) = D^{1/2} f.
    let m = Measure::Spheres(measure.clone());
    let op = operator_matrix(&Kernel::Newtonian { d: 3 }, &m)?;
    let mut a = op.entries().to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] *= alpha;
        }
        a[i * n + i] += 1.0;
    }
    let sqrt_m: Vec<f64> = measure.masses().iter().map(|w| w.sqrt()).collect();
    let rhs: Vec<f64> = data.iter().zip(&sqrt_m).map(|(f, s)| f * s).collect();
    let tilde = linalg::solve_spd(&a, n, &rhs)?;
    let coefficients: Vec<f64> = tilde.iter().zip(&sqrt_m).map(|(t, s)| t / s).collect();
    Ok(StationarySolutionField {
        measure: measure.clone(),
        alpha,
        coefficients,
    })
}

/// Worst defect of the defining identity `u + α G^μ u = G^μ f` over the
/// given points (relative to the local field scale this is the whole
/// content of being a stationary solution).
pub fn resolvent_identity_residual(
    field: &StationarySolutionField,
    data: &[f64],
    points: &[Vec<f64>],
) -> Result<f64> {
    let n = field.measure.len();
    if data.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: data.len(),
        });
    }
    let u_on_spheres = field.sphere_values();
    let mut worst = 0.0_f64;
    for x in points {
        if x.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: x.len(),
            });
        }
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let u_x = field.evaluate_radial(r);
        let pot = |values: &[f64]| -> f64 {
            field
                .measure
                .radii()
                .iter()
                .zip(field.measure.masses())
                .zip(values)
                .map(|((&rad, &mass), &v)| mass * v / (4.0 * PI * rad.max(r)))
                .sum()
        };
        let defect = u_x + field.alpha * pot(&u_on_spheres) - pot(data);
        worst = worst.max(defect.abs());
    }
    Ok(worst)
}

/// Max relative 7-point finite-difference Laplacian over the test points,
/// each of which must keep a radial distance of more than `2h` from every
/// sphere (the field is harmonic there, so only discretization error
/// remains).
pub fn harmonicity_residual(
    field: &StationarySolutionField,
    test_points: &[Vec<f64>],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("step h must be positive".into()));
    }
    let mut worst = 0.0_f64;
    for x in test_points {
        if x.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: x.len(),
            });
        }
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        for &rad in field.measure.radii() {
            let dist = (r - rad).abs();
            if dist <= 2.0 * h {
                return Err(Error::PointTooCloseToSupport {
                    dist,
                    limit: 2.0 * h,
                });
            }
        }
        let center = field.evaluate(x)?;
        let mut lap = -6.0 * center;
        for axis in 0..3 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[axis] += h;
            xm[axis] -= h;
            lap += field.evaluate(&xp)? + field.evaluate(&xm)?;
        }
        lap /= h * h;
        let scale = center.abs();
        let residual = if scale > 0.0 {
            lap.abs() / scale
        } else {
            lap.abs()
        };
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// One row of the stationary-convergence comparison.
#[derive(Debug, Clone)]
pub struct StationaryCompareRow {
    pub label: usize,
    /// `sup |u_n - u_∞|` over the test radii.
    pub sup_diff: f64,
    /// `‖f‖_∞ · ‖G^{ν_n}1‖_∞`.
    pub bound: f64,
    pub pass: bool,
    /// Defining-identity residual of the term's solution.
    pub identity_residual: f64,
}

/// Solve the stationary problem along a monotone sphere-family sequence and
/// certify the sup-norm convergence bound at every term. `data` supplies
/// the radial datum `f(r)`, read on each measure's spheres.
pub fn stationary_compare(
    seq: &MeasureSequence,
    alpha: f64,
    data: impl Fn(f64) -> f64,
    test_radii: &[f64],
) -> Result<Vec<StationaryCompareRow>> {
    let limit = match seq.limit() {
        Measure::Spheres(s) => s,
        _ => {
            return Err(Error::InvalidParameter(
                "stationary comparison needs a sphere-family sequence".into(),
            ))
        }
    };
    if test_radii.is_empty() {
        return Err(Error::InvalidParameter("no test radii supplied".into()));
    }
    let kernel = Kernel::Newtonian { d: 3 };

    let data_inf: Vec<f64> = limit.radii().iter().map(|&r| data(r)).collect();
    let field_inf = stationary_solve(limit, alpha, &data_inf)?;

    // All radii that matter: test points plus every sphere of every term.
    let mut radii: Vec<f64> = test_radii.to_vec();
    for term in seq.terms() {
        if let Measure::Spheres(s) = term {
            radii.extend_from_slice(s.radii());
        }
    }
    radii.extend_from_slice(limit.radii());
    let grid_points: Vec<Vec<f64>> = radii.iter().map(|&r| vec![r, 0.0, 0.0]).collect();
    let grid = EvaluationGrid::from_points(grid_points.clone())?;

    let mut rows = Vec::with_capacity(seq.len());
    for (i, term) in seq.terms().iter().enumerate() {
        let spheres = match term {
            Measure::Spheres(s) => s,
            _ => unreachable!("sequence kind is uniform"),
        };
        let data_n: Vec<f64> = spheres.radii().iter().map(|&r| data(r)).collect();
        let field_n = stationary_solve(spheres, alpha, &data_n)?;
        let sup_diff = radii
            .iter()
            .map(|&r| (field_n.evaluate_radial(r) - field_inf.evaluate_radial(r)).abs())
            .fold(0.0, f64::max);
        let nu = seq.difference(i)?;
        let data_sup = data_n
            .iter()
            .chain(&data_inf)
            .fold(0.0_f64, |m, &v| m.max(v.abs()));
        let bound = data_sup * potential_one_sup(&kernel, &nu, &grid)?;
        let identity_residual = resolvent_identity_residual(&field_n, &data_n, &grid_points)?;
        rows.push(StationaryCompareRow {
            label: seq.labels()[i],
            sup_diff,
            bound,
            pass: sup_diff <= bound + 1e-12,
            identity_residual,
        });
    }
    Ok(rows)
}
