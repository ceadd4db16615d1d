//! Admissible measures and monotone measure sequences.
//!
//! Two measure classes make the potential operator an exact finite matrix:
//! finite atomic measures (for bounded kernels) and families of concentric
//! spheres in `ℝ³` (for the Newtonian kernel, via the mean-value property).
//! Monotone sequences `μ_n ↑ μ_∞` or `μ_n ↓ μ_∞` are realized by
//! support-wise weight domination, and the difference measures
//! `ν_n = |μ_∞ - μ_n|` are first-class values: their potential sup-norm
//! `‖G^{ν_n}1‖_∞` is the error currency of every convergence bound.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Finite atomic measure `Σ w_k δ_{x_k}` with strictly positive weights and
/// pairwise distinct atoms. The empty measure (zero measure) is allowed as a
/// value and arises from differences; the public constructor rejects it.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: weights.len(),
            });
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
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonpositiveWeight { index: i, value: w });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(Self {
            dim,
            points,
            weights,
        })
    }

    /// Atoms on the real line.
    pub fn line(positions: &[f64], weights: &[f64]) -> Result<Self> {
        Self::new(
            positions.iter().map(|&x| vec![x]).collect(),
            weights.to_vec(),
        )
    }

    /// The zero measure in ambient dimension `dim`.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Uniform mass distributions on spheres concentric at the origin of `ℝ³`,
/// radii strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereFamilyMeasure {
    radii: Vec<f64>,
    masses: Vec<f64>,
}

impl SphereFamilyMeasure {
    pub fn new(radii: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if radii.len() != masses.len() {
            return Err(Error::DimensionMismatch {
                expected: radii.len(),
                got: masses.len(),
            });
        }
        for &r in &radii {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::NonpositiveRadius(r));
            }
        }
        for (i, &m) in masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::NonpositiveWeight { index: i, value: m });
            }
        }
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&i, &j| radii[i].partial_cmp(&radii[j]).unwrap());
        let radii: Vec<f64> = order.iter().map(|&i| radii[i]).collect();
        let masses: Vec<f64> = order.iter().map(|&i| masses[i]).collect();
        for i in 1..radii.len() {
            if radii[i] == radii[i - 1] {
                return Err(Error::DuplicatePoint(i - 1, i));
            }
        }
        Ok(Self { radii, masses })
    }

    pub fn zero() -> Self {
        Self {
            radii: Vec::new(),
            masses: Vec::new(),
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// An admissible measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Atomic(AtomicMeasure),
    Spheres(SphereFamilyMeasure),
}

impl Measure {
    pub fn total_mass(&self) -> f64 {
        match self {
            Measure::Atomic(m) => m.weights.iter().sum(),
            Measure::Spheres(m) => m.masses.iter().sum(),
        }
    }

    /// Number of atoms / spheres.
    pub fn support_len(&self) -> usize {
        match self {
            Measure::Atomic(m) => m.len(),
            Measure::Spheres(m) => m.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support_len() == 0
    }

    /// Ambient dimension of the carrier space.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Measure::Atomic(m) => m.dim(),
            Measure::Spheres(_) => 3,
        }
    }

    /// Weight of support element `i`.
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            Measure::Atomic(m) => m.weights[i],
            Measure::Spheres(m) => m.masses[i],
        }
    }

    /// One representative coordinate per support element. For a sphere the
    /// point `(R, 0, 0)` stands in for the whole shell; by radial symmetry
    /// this is enough for potential evaluation and sup-norm grids.
    pub fn support_points(&self) -> Vec<Vec<f64>> {
        match self {
            Measure::Atomic(m) => m.points.clone(),
            Measure::Spheres(m) => m.radii.iter().map(|&r| vec![r, 0.0, 0.0]).collect(),
        }
    }

    /// Mass carried by the closed ball of radius `r` around `x`.
    pub fn ball_mass(&self, x: &[f64], r: f64) -> f64 {
        match self {
            Measure::Atomic(m) => m
                .points
                .iter()
                .zip(&m.weights)
                .filter(|(p, _)| crate::kernels::dist(x, p) <= r)
                .map(|(_, w)| w)
                .sum(),
            Measure::Spheres(m) => {
                let rho = crate::kernels::dist(x, &[0.0, 0.0, 0.0]);
                m.radii
                    .iter()
                    .zip(&m.masses)
                    .map(|(&sr, &mass)| {
                        if rho == 0.0 {
                            if sr <= r {
                                mass
                            } else {
                                0.0
                            }
                        } else {
                            // Fraction of the sphere inside the ball: cap cut
                            // at polar angle with cos θ* = (ρ²+R²-r²)/(2ρR).
                            let cos_star = (rho * rho + sr * sr - r * r) / (2.0 * rho * sr);
                            let frac = ((1.0 - cos_star) / 2.0).clamp(0.0, 1.0);
                            mass * frac
                        }
                    })
                    .sum()
            }
        }
    }
}

fn point_key(p: &[f64]) -> Vec<u64> {
    p.iter().map(|x| x.to_bits()).collect()
}

/// Which side dominates in a support-wise comparison.
fn signed_residuals(a: &Measure, b: &Measure) -> Result<Vec<(usize, f64)>> {
    // Returns residuals w_a - w_b over the union support indexed in `a`-then-
    // `b`-exclusive order; support matching is by exact coordinates.
    match (a, b) {
        (Measure::Atomic(ma), Measure::Atomic(mb)) => {
            let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
            for (i, p) in ma.points.iter().enumerate() {
                index.insert(point_key(p), i);
            }
            let mut residuals: Vec<(usize, f64)> = ma.weights.iter().cloned().enumerate().collect();
            let mut extra = Vec::new();
            for (j, p) in mb.points.iter().enumerate() {
                match index.get(&point_key(p)) {
                    Some(&i) => residuals[i].1 -= mb.weights[j],
                    None => extra.push((ma.len() + extra.len(), -mb.weights[j])),
                }
            }
            residuals.extend(extra);
            Ok(residuals)
        }
        (Measure::Spheres(ma), Measure::Spheres(mb)) => {
            let mut index: HashMap<u64, usize> = HashMap::new();
            for (i, r) in ma.radii.iter().enumerate() {
                index.insert(r.to_bits(), i);
            }
            let mut residuals: Vec<(usize, f64)> = ma.masses.iter().cloned().enumerate().collect();
            let mut extra = Vec::new();
            for (j, r) in mb.radii.iter().enumerate() {
                match index.get(&r.to_bits()) {
                    Some(&i) => residuals[i].1 -= mb.masses[j],
                    None => extra.push((ma.len() + extra.len(), -mb.masses[j])),
                }
            }
            residuals.extend(extra);
            Ok(residuals)
        }
        _ => Err(Error::InvalidParameter(
            "measures of different kinds cannot be compared".into(),
        )),
    }
}

/// The difference measure `|a - b|` for support-wise comparable measures.
/// Fails with `NotDominated` when neither measure dominates the other.
pub fn measure_difference(a: &Measure, b: &Measure) -> Result<Measure> {
    let residuals = signed_residuals(a, b)?;
    let mut has_pos = false;
    let mut has_neg = false;
    for &(idx, r) in &residuals {
        if r > 0.0 {
            has_pos = true;
        }
        if r < 0.0 {
            has_neg = true;
        }
        if has_pos && has_neg {
            return Err(Error::NotDominated {
                index: idx,
                small: r.min(0.0).abs(),
                large: r.max(0.0),
            });
        }
    }
    // Collect |residual| > 0 back into a measure of the same kind.
    match (a, b) {
        (Measure::Atomic(ma), Measure::Atomic(mb)) => {
            let source = if has_neg { mb } else { ma };
            let other = if has_neg { ma } else { mb };
            let mut index: HashMap<Vec<u64>, f64> = HashMap::new();
            for (p, w) in other.points.iter().zip(&other.weights) {
                index.insert(point_key(p), *w);
            }
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for (p, w) in source.points.iter().zip(&source.weights) {
                let rem = w - index.get(&point_key(p)).copied().unwrap_or(0.0);
                if rem > 0.0 {
                    points.push(p.clone());
                    weights.push(rem);
                }
            }
            if points.is_empty() {
                Ok(Measure::Atomic(AtomicMeasure::zero(ma.dim())))
            } else {
                Ok(Measure::Atomic(AtomicMeasure::new(points, weights)?))
            }
        }
        (Measure::Spheres(ma), Measure::Spheres(mb)) => {
            let source = if has_neg { mb } else { ma };
            let other = if has_neg { ma } else { mb };
            let mut index: HashMap<u64, f64> = HashMap::new();
            for (r, m) in other.radii.iter().zip(&other.masses) {
                index.insert(r.to_bits(), *m);
            }
            let mut radii = Vec::new();
            let mut masses = Vec::new();
            for (r, m) in source.radii.iter().zip(&source.masses) {
                let rem = m - index.get(&r.to_bits()).copied().unwrap_or(0.0);
                if rem > 0.0 {
                    radii.push(*r);
                    masses.push(rem);
                }
            }
            if radii.is_empty() {
                Ok(Measure::Spheres(SphereFamilyMeasure::zero()))
            } else {
                Ok(Measure::Spheres(SphereFamilyMeasure::new(radii, masses)?))
            }
        }
        _ => unreachable!("kind mismatch is caught above"),
    }
}

/// Checks `small ≤ large` support-wise.
fn check_dominated(small: &Measure, large: &Measure) -> Result<()> {
    let residuals = signed_residuals(large, small)?;
    for &(idx, r) in &residuals {
        if r < 0.0 {
            return Err(Error::NotDominated {
                index: idx,
                small: -r,
                large: 0.0,
            });
        }
    }
    Ok(())
}

/// Locate each support element of `sub` inside `sup` (exact coordinates).
pub fn match_support(sub: &Measure, sup: &Measure) -> Result<Vec<usize>> {
    let sup_points = sup.support_points();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, p) in sup_points.iter().enumerate() {
        index.insert(point_key(p), i);
    }
    sub.support_points()
        .iter()
        .map(|p| {
            index.get(&point_key(p)).copied().ok_or_else(|| {
                Error::InvalidParameter("support point missing from the enclosing measure".into())
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A monotone family `μ_1, …, μ_N` with limit `μ_∞`, ordered support-wise.
#[derive(Debug, Clone)]
pub struct MeasureSequence {
    terms: Vec<Measure>,
    limit: Measure,
    direction: Direction,
    labels: Vec<usize>,
}

impl MeasureSequence {
    pub fn new(terms: Vec<Measure>, limit: Measure, direction: Direction) -> Result<Self> {
        let labels = (0..terms.len()).collect();
        Self::with_labels(terms, limit, direction, labels)
    }

    pub fn with_labels(
        terms: Vec<Measure>,
        limit: Measure,
        direction: Direction,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if labels.len() != terms.len() {
            return Err(Error::DimensionMismatch {
                expected: terms.len(),
                got: labels.len(),
            });
        }
        for i in 0..terms.len() {
            let next = if i + 1 < terms.len() {
                &terms[i + 1]
            } else {
                &limit
            };
            match direction {
                Direction::Increasing => check_dominated(&terms[i], next)?,
                Direction::Decreasing => check_dominated(next, &terms[i])?,
            }
        }
        Ok(Self {
            terms,
            limit,
            direction,
            labels,
        })
    }

    /// Truncations `μ_n = Σ_{|k| ≤ n} a_k δ_k` of a weight family on the
    /// integer lattice. `limit_weights` has odd length `2 n_max + 1`, entry
    /// `i` holding the weight of the atom at `k = i - n_max`; the proxy limit
    /// is the full truncation at `n_max`.
    pub fn truncated(limit_weights: &[f64], schedule: &[usize]) -> Result<Self> {
        if limit_weights.is_empty() || limit_weights.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "limit weights must have odd length 2*n_max + 1".into(),
            ));
        }
        let n_max = (limit_weights.len() - 1) / 2;
        if schedule.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for &n in schedule {
            if n > n_max {
                return Err(Error::CutoffExceedsLimit { cutoff: n, n_max });
            }
        }
        let build = |n: usize| -> Result<Measure> {
            let lo = n_max - n;
            let hi = n_max + n;
            let positions: Vec<f64> = (lo..=hi).map(|i| i as f64 - n_max as f64).collect();
            let weights: Vec<f64> = limit_weights[lo..=hi].to_vec();
            Ok(Measure::Atomic(AtomicMeasure::line(&positions, &weights)?))
        };
        let terms: Vec<Measure> = schedule.iter().map(|&n| build(n)).collect::<Result<_>>()?;
        let limit = build(n_max)?;
        Self::with_labels(terms, limit, Direction::Increasing, schedule.to_vec())
    }

    /// Concentric-sphere proxy for boundary-layer thinning: the term for `n`
    /// is the unit-sphere surface measure plus a sliced quadrature of the
    /// volume measure of the shell `1 - 1/n < |x| < 1`; the limit is the
    /// unit sphere alone. Slice boundaries are shared across terms, so the
    /// family decreases support-wise.
    pub fn thinning_shell(schedule: &[usize], slices_per_band: usize) -> Result<Self> {
        if schedule.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if slices_per_band == 0 {
            return Err(Error::InvalidParameter(
                "slices_per_band must be positive".into(),
            ));
        }
        for w in schedule.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter(
                    "shell schedule must be strictly increasing".into(),
                ));
            }
        }
        if schedule[0] < 2 {
            return Err(Error::InvalidParameter(
                "shell schedule entries must be at least 2".into(),
            ));
        }
        let deepest = *schedule.last().unwrap();
        // Band j spans (1 - 1/j, 1 - 1/(j+1)), the final band reaches 1.
        let band_range = |j: usize| -> (f64, f64) {
            let a = 1.0 - 1.0 / j as f64;
            let b = if j == deepest {
                1.0
            } else {
                1.0 - 1.0 / (j + 1) as f64
            };
            (a, b)
        };
        let band_slices = |j: usize| -> (Vec<f64>, Vec<f64>) {
            let (a, b) = band_range(j);
            let mut radii = Vec::with_capacity(slices_per_band);
            let mut masses = Vec::with_capacity(slices_per_band);
            let dr = (b - a) / slices_per_band as f64;
            for s in 0..slices_per_band {
                let lo = a + s as f64 * dr;
                let hi = lo + dr;
                radii.push(0.5 * (lo + hi));
                masses.push(4.0 * PI / 3.0 * (hi.powi(3) - lo.powi(3)));
            }
            (radii, masses)
        };
        let unit_mass = 4.0 * PI;
        let term = |n: usize| -> Result<Measure> {
            let mut radii = Vec::new();
            let mut masses = Vec::new();
            for j in n..=deepest {
                let (r, m) = band_slices(j);
                radii.extend(r);
                masses.extend(m);
            }
            radii.push(1.0);
            masses.push(unit_mass);
            Ok(Measure::Spheres(SphereFamilyMeasure::new(radii, masses)?))
        };
        let terms: Vec<Measure> = schedule.iter().map(|&n| term(n)).collect::<Result<_>>()?;
        let limit = Measure::Spheres(SphereFamilyMeasure::new(vec![1.0], vec![unit_mass])?);
        Self::with_labels(terms, limit, Direction::Decreasing, schedule.to_vec())
    }

    pub fn terms(&self) -> &[Measure] {
        &self.terms
    }

    pub fn limit(&self) -> &Measure {
        &self.limit
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The difference measure `ν_n = |μ_∞ - μ_n|` for term `idx`.
    pub fn difference(&self, idx: usize) -> Result<Measure> {
        measure_difference(&self.limit, &self.terms[idx])
    }
}

/// Weights `a_k = rate^{|k|}` for `|k| ≤ n_max`, indexed as required by
/// [`MeasureSequence::truncated`].
pub fn geometric_weights(rate: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "geometric rate must be positive, got {rate}"
        )));
    }
    Ok((0..=2 * n_max)
        .map(|i| {
            let k = i as i64 - n_max as i64;
            rate.powi(k.unsigned_abs() as i32)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_construction_and_mass() {
        let m = AtomicMeasure::line(&[0.0], &[1.0]).unwrap();
        assert_eq!(Measure::Atomic(m).total_mass(), 1.0);
        let m = AtomicMeasure::line(&[0.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(Measure::Atomic(m).total_mass(), 2.0);
    }

    #[test]
    fn atomic_validation() {
        assert_eq!(
            AtomicMeasure::line(&[0.0], &[-1.0]).unwrap_err(),
            Error::NonpositiveWeight {
                index: 0,
                value: -1.0
            }
        );
        assert_eq!(
            AtomicMeasure::line(&[1.0, 1.0], &[1.0, 1.0]).unwrap_err(),
            Error::DuplicatePoint(0, 1)
        );
        assert_eq!(
            AtomicMeasure::new(vec![], vec![]).unwrap_err(),
            Error::EmptyMeasure
        );
    }

    #[test]
    fn truncated_geometric_masses() {
        // a_k = 2^{-|k|}: μ_0 has mass 1, μ_1 mass 2, μ_2 = μ_∞ mass 2.5.
        let w = geometric_weights(0.5, 2).unwrap();
        let seq = MeasureSequence::truncated(&w, &[0, 1, 2]).unwrap();
        let masses: Vec<f64> = seq.terms().iter().map(|m| m.total_mass()).collect();
        assert!((masses[0] - 1.0).abs() < 1e-15);
        assert!((masses[1] - 2.0).abs() < 1e-15);
        assert!((masses[2] - 2.5).abs() < 1e-15);
        assert!((seq.limit().total_mass() - 2.5).abs() < 1e-15);
        // Geometric check of total_mass on the limit: 1 + 2(1/2 + 1/4).
        assert!((seq.limit().total_mass() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn truncated_single_term_is_its_own_limit() {
        let w = geometric_weights(0.5, 0).unwrap();
        let seq = MeasureSequence::truncated(&w, &[0]).unwrap();
        assert_eq!(seq.terms()[0], *seq.limit());
        let nu = seq.difference(0).unwrap();
        assert!(nu.is_zero());
        assert_eq!(nu.total_mass(), 0.0);
    }

    #[test]
    fn truncated_flat_weights_accepted() {
        let w = vec![1.0; 7];
        assert!(MeasureSequence::truncated(&w, &[0, 3]).is_ok());
    }

    #[test]
    fn truncated_cutoff_guard() {
        let w = geometric_weights(0.5, 2).unwrap();
        assert_eq!(
            MeasureSequence::truncated(&w, &[3]).unwrap_err(),
            Error::CutoffExceedsLimit {
                cutoff: 3,
                n_max: 2
            }
        );
    }

    #[test]
    fn difference_atomwise() {
        let limit = Measure::Atomic(AtomicMeasure::line(&[0.0, 1.0], &[1.0, 1.0]).unwrap());
        let term = Measure::Atomic(AtomicMeasure::line(&[0.0], &[1.0]).unwrap());
        let nu = measure_difference(&limit, &term).unwrap();
        match &nu {
            Measure::Atomic(m) => {
                assert_eq!(m.points(), &[vec![1.0]]);
                assert_eq!(m.weights(), &[1.0]);
            }
            _ => panic!("expected atomic"),
        }
    }

    #[test]
    fn difference_of_equal_measures_is_zero() {
        let m = Measure::Atomic(AtomicMeasure::line(&[0.0, 2.0], &[0.5, 0.25]).unwrap());
        let nu = measure_difference(&m, &m).unwrap();
        assert!(nu.is_zero());
    }

    #[test]
    fn crossing_weights_not_dominated() {
        let a = Measure::Atomic(AtomicMeasure::line(&[0.0, 1.0], &[1.0, 1.0]).unwrap());
        let b = Measure::Atomic(AtomicMeasure::line(&[0.0], &[2.0]).unwrap());
        assert!(matches!(
            measure_difference(&a, &b),
            Err(Error::NotDominated { .. })
        ));
    }

    #[test]
    fn sequence_mass_monotone_and_difference_shrinks() {
        let w = geometric_weights(0.5, 10).unwrap();
        let schedule: Vec<usize> = (0..=10).collect();
        let seq = MeasureSequence::truncated(&w, &schedule).unwrap();
        let mut prev_mass = f64::NEG_INFINITY;
        let mut prev_nu = f64::INFINITY;
        for i in 0..seq.len() {
            let mass = seq.terms()[i].total_mass();
            assert!(mass >= prev_mass);
            prev_mass = mass;
            let nu_mass = seq.difference(i).unwrap().total_mass();
            assert!(nu_mass <= prev_nu);
            prev_nu = nu_mass;
        }
        assert_eq!(seq.difference(seq.len() - 1).unwrap().total_mass(), 0.0);
    }

    #[test]
    fn sphere_family_sorted_and_validated() {
        let m = SphereFamilyMeasure::new(vec![2.0, 1.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(m.radii(), &[1.0, 2.0]);
        assert_eq!(m.masses(), &[4.0, 3.0]);
        assert!(SphereFamilyMeasure::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(SphereFamilyMeasure::new(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn thinning_shell_is_decreasing_with_exact_shell_volume() {
        let seq = MeasureSequence::thinning_shell(&[2, 3, 4], 3).unwrap();
        assert_eq!(seq.direction(), Direction::Decreasing);
        let unit = 4.0 * PI;
        for (i, &n) in seq.labels().iter().enumerate() {
            let shell_vol = 4.0 * PI / 3.0 * (1.0 - (1.0 - 1.0 / n as f64).powi(3));
            let mass = seq.terms()[i].total_mass();
            assert!(
                (mass - unit - shell_vol).abs() < 1e-12,
                "term mass should be sphere + shell volume"
            );
            let nu = seq.difference(i).unwrap();
            assert!((nu.total_mass() - shell_vol).abs() < 1e-12);
        }
        assert!((seq.limit().total_mass() - unit).abs() < 1e-12);
    }

    #[test]
    fn ball_mass_sphere_cap() {
        // Unit sphere of mass 1: a ball of chord radius r centered on the
        // sphere cuts a cap of area fraction r²/4 (exact for R = 1).
        let m = Measure::Spheres(SphereFamilyMeasure::new(vec![1.0], vec![1.0]).unwrap());
        let x = [1.0, 0.0, 0.0];
        for r in [0.1, 0.3, 0.5] {
            let frac = m.ball_mass(&x, r);
            assert!((frac - r * r / 4.0).abs() < 1e-12);
        }
        // Ball containing everything.
        assert!((m.ball_mass(&[0.0, 0.0, 0.0], 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(m.ball_mass(&[0.0, 0.0, 0.0], 0.5), 0.0);
    }

    #[test]
    fn match_support_indices() {
        let w = geometric_weights(0.5, 3).unwrap();
        let seq = MeasureSequence::truncated(&w, &[1, 3]).unwrap();
        let idx = match_support(&seq.terms()[0], seq.limit()).unwrap();
        assert_eq!(idx, vec![2, 3, 4]);
    }
}
