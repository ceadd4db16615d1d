//! JSON experiment configuration: schemas, validation, and conversion into
//! the domain types.

use crate::error::{Error, Result};
use crate::kato::KatoMeasure;
use crate::kernels::Kernel;
use crate::measures::{
    geometric_weights, AtomicMeasure, Direction, Measure, MeasureSequence, SphereFamilyMeasure,
};
use crate::potentials::EvaluationGrid;
use serde::{Deserialize, Serialize};

/// Kernel selection: `{"type": "exponential1d" | "newtonian" | "riesz", ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelConfig {
    Exponential1d,
    Newtonian { d: u32 },
    Riesz { d: u32, alpha: f64 },
}

impl KernelConfig {
    pub fn build(&self) -> Result<Kernel> {
        match self {
            KernelConfig::Exponential1d => Ok(Kernel::Exponential1D),
            KernelConfig::Newtonian { d } => Kernel::newtonian(*d),
            KernelConfig::Riesz { d, alpha } => Kernel::riesz(*d, *alpha),
        }
    }
}

/// A point is either a scalar (1-D) or a coordinate array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Scalar(f64),
    Coords(Vec<f64>),
}

impl PointSpec {
    fn coords(&self) -> Vec<f64> {
        match self {
            PointSpec::Scalar(x) => vec![*x],
            PointSpec::Coords(v) => v.clone(),
        }
    }
}

/// Measure schema: atomic `{"type":"atomic","points":[...],"weights":[...]}`
/// or spheres `{"type":"spheres","radii":[...],"masses":[...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureConfig {
    Atomic {
        points: Vec<PointSpec>,
        weights: Vec<f64>,
    },
    Spheres {
        radii: Vec<f64>,
        masses: Vec<f64>,
    },
}

impl MeasureConfig {
    pub fn build(&self) -> Result<Measure> {
        match self {
            MeasureConfig::Atomic { points, weights } => {
                let pts: Vec<Vec<f64>> = points.iter().map(|p| p.coords()).collect();
                Ok(Measure::Atomic(AtomicMeasure::new(pts, weights.clone())?))
            }
            MeasureConfig::Spheres { radii, masses } => Ok(Measure::Spheres(
                SphereFamilyMeasure::new(radii.clone(), masses.clone())?,
            )),
        }
    }
}

/// Measure schema for admissibility checks: the admissible kinds plus the
/// synthetic `{"type":"lebesgue","a":0,"b":1}` interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KatoMeasureConfig {
    Atomic {
        points: Vec<PointSpec>,
        weights: Vec<f64>,
    },
    Spheres {
        radii: Vec<f64>,
        masses: Vec<f64>,
    },
    Lebesgue {
        a: f64,
        b: f64,
    },
}

impl KatoMeasureConfig {
    pub fn build(&self) -> Result<KatoMeasure> {
        match self {
            KatoMeasureConfig::Atomic { points, weights } => Ok(KatoMeasure::Admissible(
                MeasureConfig::Atomic {
                    points: points.clone(),
                    weights: weights.clone(),
                }
                .build()?,
            )),
            KatoMeasureConfig::Spheres { radii, masses } => Ok(KatoMeasure::Admissible(
                MeasureConfig::Spheres {
                    radii: radii.clone(),
                    masses: masses.clone(),
                }
                .build()?,
            )),
            KatoMeasureConfig::Lebesgue { a, b } => KatoMeasure::lebesgue(*a, *b),
        }
    }
}

fn default_slices_per_band() -> usize {
    4
}

/// Monotone sequence schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SequenceConfig {
    /// `μ_n = Σ_{|k| ≤ n} rate^{|k|} δ_k` with proxy limit at `n_max`.
    TruncatedExponential {
        rate: f64,
        n_max: usize,
        schedule: Vec<usize>,
    },
    /// Decreasing boundary-layer family on the unit ball.
    ThinningShell {
        schedule: Vec<usize>,
        #[serde(default = "default_slices_per_band")]
        slices_per_band: usize,
    },
    /// Explicit terms and limit.
    Explicit {
        terms: Vec<MeasureConfig>,
        limit: MeasureConfig,
        direction: DirectionConfig,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionConfig {
    Increasing,
    Decreasing,
}

impl SequenceConfig {
    pub fn build(&self) -> Result<MeasureSequence> {
        match self {
            SequenceConfig::TruncatedExponential {
                rate,
                n_max,
                schedule,
            } => {
                let weights = geometric_weights(*rate, *n_max)?;
                MeasureSequence::truncated(&weights, schedule)
            }
            SequenceConfig::ThinningShell {
                schedule,
                slices_per_band,
            } => MeasureSequence::thinning_shell(schedule, *slices_per_band),
            SequenceConfig::Explicit {
                terms,
                limit,
                direction,
            } => {
                let terms: Vec<Measure> = terms.iter().map(|t| t.build()).collect::<Result<_>>()?;
                let limit = limit.build()?;
                let dir = match direction {
                    DirectionConfig::Increasing => Direction::Increasing,
                    DirectionConfig::Decreasing => Direction::Decreasing,
                };
                MeasureSequence::new(terms, limit, dir)
            }
        }
    }
}

fn default_grid_lo() -> f64 {
    -45.0
}
fn default_grid_hi() -> f64 {
    45.0
}
fn default_grid_step() -> f64 {
    0.01
}

/// Evaluation grid schema; `extra_points` are appended verbatim.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid_lo")]
    pub lo: f64,
    #[serde(default = "default_grid_hi")]
    pub hi: f64,
    #[serde(default = "default_grid_step")]
    pub step: f64,
    #[serde(default)]
    pub extra_points: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lo: default_grid_lo(),
            hi: default_grid_hi(),
            step: default_grid_step(),
            extra_points: Vec::new(),
        }
    }
}

impl GridConfig {
    /// Build a line grid (1-D kernels) or a radial grid (3-D kernels).
    pub fn build(&self, ambient_dim: usize) -> Result<EvaluationGrid> {
        let grid = match ambient_dim {
            1 => EvaluationGrid::line(self.lo, self.hi, self.step)?,
            3 => EvaluationGrid::radial(self.lo.max(0.0), self.hi, self.step)?,
            d => {
                return Err(Error::InvalidParameter(format!(
                    "no default grid layout for ambient dimension {d}"
                )))
            }
        };
        let extra: Vec<Vec<f64>> = self
            .extra_points
            .iter()
            .map(|&x| {
                if ambient_dim == 1 {
                    vec![x]
                } else {
                    vec![x, 0.0, 0.0]
                }
            })
            .collect();
        grid.with_extra(&extra)
    }
}

fn default_k_max() -> usize {
    3
}
fn default_alpha() -> f64 {
    1.0
}
fn default_multiplicity_tol() -> f64 {
    1e-8
}
fn default_data() -> f64 {
    1.0
}

/// Top-level experiment configuration. Commands read the sections they
/// need and reject configs that miss them.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kernel: KernelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_multiplicity_tol")]
    pub multiplicity_tol: f64,
    /// Constant radial datum for stationary problems.
    #[serde(default = "default_data")]
    pub data: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn require_measure(&self) -> Result<&MeasureConfig> {
        self.measure
            .as_ref()
            .ok_or_else(|| Error::ConfigParse("config needs a \"measure\" section".into()))
    }

    pub fn require_sequence(&self) -> Result<&SequenceConfig> {
        self.sequence
            .as_ref()
            .ok_or_else(|| Error::ConfigParse("config needs a \"sequence\" section".into()))
    }
}
