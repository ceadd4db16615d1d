//! Potential operators, their exact matrix realization, sup-norm bounds,
//! resolvents, and Hardy-constant estimates.
//!
//! For an admissible pair (kernel, measure) the operator
//! `K u = ∫ G(·,y) u(y) dμ(y)` restricted to the support of `μ` is the
//! finite matrix `(G(x_j, x_k) w_k)`. Its symmetrization
//! `S = D^{1/2} G D^{1/2}` (with `D = diag(w)`) has the same spectrum and is
//! the object everything downstream works with. No quadrature is involved:
//! for atoms the integral *is* the sum, and for concentric spheres the
//! mean-value property collapses the surface integrals to
//! `m_i / (4π max(R_i, R_j))`.

use crate::error::{Error, Result};
use crate::kernels::{dist, Kernel};
use crate::linalg;
use crate::measures::{match_support, Measure, MeasureSequence};
use crate::rng::SplitMix64;
use rayon::prelude::*;
use std::collections::HashSet;
use std::f64::consts::PI;

/// Finite stand-in for `sup_{x ∈ X}`: a list of evaluation points that must
/// contain every support point of the measures under study (where potential
/// sums peak) plus whatever off-support points the caller wants sampled.
#[derive(Debug, Clone)]
pub struct EvaluationGrid {
    points: Vec<Vec<f64>>,
    step_hint: f64,
}

impl EvaluationGrid {
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("evaluation grid is empty".into()));
        }
        let dim = points[0].len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Ok(Self {
            points,
            step_hint: f64::NAN,
        })
    }

    /// Uniform 1-D grid on `[lo, hi]` with the given step.
    pub fn line(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "grid requires hi > lo and step > 0, got [{lo}, {hi}] step {step}"
            )));
        }
        let count = ((hi - lo) / step).floor() as usize + 1;
        let mut points: Vec<Vec<f64>> = (0..count).map(|i| vec![lo + i as f64 * step]).collect();
        if points.last().map(|p| p[0] < hi) == Some(true) {
            points.push(vec![hi]);
        }
        Ok(Self {
            points,
            step_hint: step,
        })
    }

    /// Radial grid in `ℝ³`: points `(r, 0, 0)` for `r` on `[lo, hi]`. By
    /// radial symmetry this samples every rotation-invariant potential.
    pub fn radial(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if lo < 0.0 {
            return Err(Error::InvalidParameter("radial grid needs lo >= 0".into()));
        }
        let line = Self::line(lo, hi, step)?;
        Ok(Self {
            points: line
                .points
                .into_iter()
                .map(|p| vec![p[0], 0.0, 0.0])
                .collect(),
            step_hint: step,
        })
    }

    /// Append extra points (deduplicated, order preserved).
    pub fn with_extra(mut self, extra: &[Vec<f64>]) -> Result<Self> {
        let dim = self.points[0].len();
        let mut seen: HashSet<Vec<u64>> = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| x.to_bits()).collect())
            .collect();
        for p in extra {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            let key: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
            if seen.insert(key) {
                self.points.push(p.clone());
            }
        }
        Ok(self)
    }

    /// Append the support points of `measure` that the grid is missing.
    pub fn with_support(self, measure: &Measure) -> Result<Self> {
        let support = measure.support_points();
        self.with_extra(&support)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The construction step when built from a uniform range, NaN otherwise.
    /// Reported with sup-norm results as the grid-resolution disclosure.
    pub fn step_hint(&self) -> f64 {
        self.step_hint
    }
}

/// Kernel weight of support element `j` seen from `x`, mass excluded:
/// `G(x, x_j)` for atoms, `1 / (4π max(R_j, |x|))` for spheres.
fn kernel_factor(kernel: &Kernel, measure: &Measure, x: &[f64], j: usize) -> Result<f64> {
    match measure {
        Measure::Atomic(m) => kernel.eval(x, &m.points()[j]),
        Measure::Spheres(m) => {
            match kernel {
                Kernel::Newtonian { d: 3 } => {}
                _ => return Err(Error::SphereKernelUnsupported),
            }
            if x.len() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    got: x.len(),
                });
            }
            let r = dist(x, &[0.0, 0.0, 0.0]);
            Ok(1.0 / (4.0 * PI * m.radii()[j].max(r)))
        }
    }
}

/// `G^μ u(x) = ∫ G(x,y) u(y) dμ(y)`, evaluated exactly.
pub fn potential_apply(kernel: &Kernel, measure: &Measure, u: &[f64], x: &[f64]) -> Result<f64> {
    let n = measure.support_len();
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    let mut acc = 0.0;
    for (j, &u_j) in u.iter().enumerate() {
        acc += kernel_factor(kernel, measure, x, j)? * measure.weight(j) * u_j;
    }
    Ok(acc)
}

/// `G^μ 1(x)`.
pub fn potential_one(kernel: &Kernel, measure: &Measure, x: &[f64]) -> Result<f64> {
    let n = measure.support_len();
    let mut acc = 0.0;
    for j in 0..n {
        acc += kernel_factor(kernel, measure, x, j)? * measure.weight(j);
    }
    Ok(acc)
}

/// `max_grid G^μ 1` — the Hardy upper bound and the error currency
/// `‖G^{ν_n}1‖_∞` of every convergence estimate. Exact max over the grid
/// (f64 max is order-independent), parallel over points.
pub fn potential_one_sup(kernel: &Kernel, measure: &Measure, grid: &EvaluationGrid) -> Result<f64> {
    let values: Result<Vec<f64>> = grid
        .points()
        .par_iter()
        .map(|x| potential_one(kernel, measure, x))
        .collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

/// The symmetric matrix `S = D^{1/2} G D^{1/2}` realizing the potential
/// operator on the support of its measure. Symmetric by construction,
/// positive semidefinite because the operator factors as `J J*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    size: usize,
    entries: Vec<f64>,
    kernel: Kernel,
    support: Measure,
}

impl SymmetricOperator {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    /// Row-major dense entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn support(&self) -> &Measure {
        &self.support
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Swap in synthetic entries (tests only).
    #[cfg(test)]
    pub(crate) fn set_entries_for_tests(&mut self, entries: Vec<f64>) {
        assert_eq!(entries.len(), self.size * self.size);
        self.entries = entries;
    }
}

/// Assemble `S` for an admissible pair. Atomic measures demand a bounded
/// kernel (`β = 0`): atoms are polar for singular kernels and the measure
/// would charge a zero-capacity set. Sphere families demand the 3-D
/// Newtonian kernel, where the interaction is exact.
pub fn operator_matrix(kernel: &Kernel, measure: &Measure) -> Result<SymmetricOperator> {
    match measure {
        Measure::Atomic(m) => {
            if kernel.singularity().beta > 0.0 {
                return Err(Error::PolarAtomicSupport);
            }
            if !m.is_empty() && m.dim() != kernel.dim() {
                return Err(Error::DimensionMismatch {
                    expected: kernel.dim(),
                    got: m.dim(),
                });
            }
            let n = m.len();
            let sqrt_w: Vec<f64> = m.weights().iter().map(|w| w.sqrt()).collect();
            let mut entries = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let g = kernel.eval(&m.points()[i], &m.points()[j])?;
                    let s = sqrt_w[i] * g * sqrt_w[j];
                    entries[i * n + j] = s;
                    entries[j * n + i] = s;
                }
            }
            Ok(SymmetricOperator {
                size: n,
                entries,
                kernel: *kernel,
                support: measure.clone(),
            })
        }
        Measure::Spheres(m) => {
            match kernel {
                Kernel::Newtonian { d: 3 } => {}
                _ => return Err(Error::SphereKernelUnsupported),
            }
            let n = m.len();
            let sqrt_m: Vec<f64> = m.masses().iter().map(|w| w.sqrt()).collect();
            let mut entries = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let s = sqrt_m[i] * sqrt_m[j] / (4.0 * PI * m.radii()[i].max(m.radii()[j]));
                    entries[i * n + j] = s;
                    entries[j * n + i] = s;
                }
            }
            Ok(SymmetricOperator {
                size: n,
                entries,
                kernel: *kernel,
                support: measure.clone(),
            })
        }
    }
}

/// `(I + αS)^{-1} S ψ`, the weighted-coordinate realization of the resolvent
/// `R_α = (1 + αK)^{-1} K`. Direct Cholesky solve, residual-checked.
pub fn resolvent_apply(op: &SymmetricOperator, alpha: f64, psi: &[f64]) -> Result<Vec<f64>> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolvent parameter must satisfy alpha >= 0, got {alpha}"
        )));
    }
    let n = op.size();
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.len(),
        });
    }
    let rhs = op.apply(psi);
    let mut a = op.entries().to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] *= alpha;
        }
        a[i * n + i] += 1.0;
    }
    linalg::solve_spd(&a, n, &rhs)
}

/// Dense matrix of the resolvent `R_α = (I + αS)^{-1} S`, row-major.
pub fn resolvent_matrix(op: &SymmetricOperator, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolvent parameter must satisfy alpha >= 0, got {alpha}"
        )));
    }
    let n = op.size();
    let mut a = op.entries().to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] *= alpha;
        }
        a[i * n + i] += 1.0;
    }
    let l = linalg::cholesky(&a, n)?;
    let mut out = vec![0.0; n * n];
    for col in 0..n {
        let rhs: Vec<f64> = (0..n).map(|i| op.entry(i, col)).collect();
        let x = linalg::solve_with_factor(&a, &l, n, &rhs)?;
        for i in 0..n {
            out[i * n + col] = x[i];
        }
    }
    Ok(out)
}

/// Two-sided bracket for the best Hardy constant: the exact value
/// `‖K^μ‖ = λ_max(S)` below, the potential bound `‖G^μ 1‖_∞` above.
pub fn hardy_constant_bounds(
    kernel: &Kernel,
    measure: &Measure,
    grid: &EvaluationGrid,
) -> Result<(f64, f64)> {
    if measure.is_zero() {
        return Ok((0.0, 0.0));
    }
    let op = operator_matrix(kernel, measure)?;
    let eig = linalg::sym_eigen(op.entries(), op.size())?;
    let lower = eig.values[0];
    let grid = grid.clone().with_support(measure)?;
    let upper = potential_one_sup(kernel, measure, &grid)?;
    Ok((lower, upper))
}

/// Matrix of the resolvent `(1 + αG^μ)^{-1} G^μ` acting on functions known
/// at `points` (which must contain the support of `measure`). Columns for
/// points outside the support are zero: the operator only reads `u` there.
pub fn resolvent_bb_matrix(
    kernel: &Kernel,
    measure: &Measure,
    alpha: f64,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolvent parameter must satisfy alpha >= 0, got {alpha}"
        )));
    }
    let op = operator_matrix(kernel, measure)?;
    let n = op.size();
    let grid_n = points.len();
    let support_pos = {
        let probe = EvaluationGrid::from_points(points.to_vec())?;
        let mut index = std::collections::HashMap::new();
        for (i, p) in probe.points().iter().enumerate() {
            index.insert(p.iter().map(|x| x.to_bits()).collect::<Vec<u64>>(), i);
        }
        let mut pos = Vec::with_capacity(n);
        for p in measure.support_points() {
            let key: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
            pos.push(*index.get(&key).ok_or_else(|| {
                Error::InvalidParameter("evaluation points must contain the measure support".into())
            })?);
        }
        pos
    };

    // (I + αS)^{-1} in weighted coordinates, then unweighted via the
    // diagonal similarity P = D^{-1/2} Y D^{1/2}.
    let mut a = op.entries().to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] *= alpha;
        }
        a[i * n + i] += 1.0;
    }
    let l = linalg::cholesky(&a, n)?;
    let mut y = vec![0.0; n * n];
    for col in 0..n {
        let mut rhs = vec![0.0; n];
        rhs[col] = 1.0;
        let x = linalg::solve_with_factor(&a, &l, n, &rhs)?;
        for i in 0..n {
            y[i * n + col] = x[i];
        }
    }
    let sqrt_w: Vec<f64> = (0..n).map(|j| measure.weight(j).sqrt()).collect();

    let mut out = vec![0.0; grid_n * grid_n];
    for (r, x) in points.iter().enumerate() {
        // Row of kernel factors times weights.
        let mut k_row = Vec::with_capacity(n);
        for j in 0..n {
            k_row.push(kernel_factor(kernel, measure, x, j)? * measure.weight(j));
        }
        for (l_idx, &c) in support_pos.iter().enumerate() {
            let mut acc = 0.0;
            for j in 0..n {
                // P[j, l] = Y[j, l] * sqrt(w_l) / sqrt(w_j)
                acc += k_row[j] * y[j * n + l_idx] * sqrt_w[l_idx] / sqrt_w[j];
            }
            out[r * grid_n + c] = acc;
        }
    }
    Ok(out)
}

/// One row of the operator-difference certification.
#[derive(Debug, Clone)]
pub struct OperatorDiffRow {
    pub label: usize,
    /// `‖G^{ν_n}1‖_∞` over the grid.
    pub bound: f64,
    /// Worst observed `max_grid |G^{μ_∞}u - G^{μ_n}u|` over the trials.
    pub worst_gap: f64,
    pub pass: bool,
}

/// Certify `‖G^{μ_∞}u - G^{μ_n}u‖_grid ≤ ‖G^{ν_n}1‖_∞` on random test
/// functions with `‖u‖_∞ ≤ 1`, for every term of the sequence. Both
/// potentials are evaluated independently; the bound is computed from the
/// difference measure.
pub fn operator_difference_check(
    kernel: &Kernel,
    seq: &MeasureSequence,
    grid: &EvaluationGrid,
    trials: usize,
    seed: u64,
) -> Result<Vec<OperatorDiffRow>> {
    let limit = seq.limit();
    let grid = grid.clone().with_support(limit)?;
    let m_inf = limit.support_len();

    // Kernel factors against the limit support, shared by every term.
    let k_inf: Result<Vec<Vec<f64>>> = grid
        .points()
        .par_iter()
        .map(|x| {
            (0..m_inf)
                .map(|j| kernel_factor(kernel, limit, x, j))
                .collect()
        })
        .collect();
    let k_inf = k_inf?;
    let w_inf: Vec<f64> = (0..m_inf).map(|j| limit.weight(j)).collect();

    let mut rng = SplitMix64::new(seed);
    let mut rows = Vec::with_capacity(seq.len());
    for (idx, term) in seq.terms().iter().enumerate() {
        let nu = seq.difference(idx)?;
        let bound = potential_one_sup(kernel, &nu, &grid)?;
        let positions = match_support(term, limit)?;
        let w_term: Vec<f64> = (0..term.support_len()).map(|j| term.weight(j)).collect();

        let us: Vec<Vec<f64>> = (0..trials)
            .map(|_| (0..m_inf).map(|_| rng.next_symmetric()).collect())
            .collect();
        let worst = us
            .par_iter()
            .map(|u| {
                let mut worst_u = 0.0_f64;
                for row in &k_inf {
                    let mut p_inf = 0.0;
                    for j in 0..m_inf {
                        p_inf += row[j] * w_inf[j] * u[j];
                    }
                    let mut p_term = 0.0;
                    for (t_j, &pos) in positions.iter().enumerate() {
                        p_term += row[pos] * w_term[t_j] * u[pos];
                    }
                    worst_u = worst_u.max((p_inf - p_term).abs());
                }
                worst_u
            })
            .reduce(|| 0.0, f64::max);
        rows.push(OperatorDiffRow {
            label: seq.labels()[idx],
            bound,
            worst_gap: worst,
            pass: worst <= bound + 1e-12,
        });
    }
    Ok(rows)
}
