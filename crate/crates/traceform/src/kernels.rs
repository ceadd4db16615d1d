//! Closed-form Green kernels with singularity metadata.
//!
//! Three transient kernels are supported:
//!
//! * `Exponential1D`: `G(x,y) = e^{-|x-y|}/2` on the line, the Green kernel
//!   of `-d²/dx² + 1`. Bounded, singularity exponent `β = 0`.
//! * `Newtonian(d)`, `d ≥ 3`: `G(x,y) = c_d |x-y|^{2-d}` with
//!   `c_d = Γ(d/2 - 1) / (4 π^{d/2})`, normalized so that `-ΔG = δ`.
//!   `β = d - 2`.
//! * `Riesz(d, α)`, `0 < α < min(2, d)`: `G(x,y) = κ_{d,α} |x-y|^{α-d}`,
//!   the fractional-Laplacian kernel. `β = d - α`. The exponent `α - d`
//!   (integrable singularity) is the one consistent with the Kato criterion
//!   for this kernel.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Singularity metadata: `G(x,y) ≤ c_bound · |x-y|^{-beta}` for
/// `|x-y| < r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub beta: f64,
    pub c_bound: f64,
    pub r0: f64,
}

/// A Green kernel in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Exponential1D,
    Newtonian { d: u32 },
    Riesz { d: u32, alpha: f64 },
}

impl Kernel {
    pub fn newtonian(d: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParameter(format!(
                "Newtonian kernel is transient only for d >= 3, got d = {d}"
            )));
        }
        Ok(Kernel::Newtonian { d })
    }

    pub fn riesz(d: u32, alpha: f64) -> Result<Self> {
        let cap = 2.0_f64.min(d as f64);
        if d == 0 || !(alpha > 0.0 && alpha < cap) {
            return Err(Error::InvalidParameter(format!(
                "Riesz order must satisfy 0 < alpha < min(2, d), got d = {d}, alpha = {alpha}"
            )));
        }
        Ok(Kernel::Riesz { d, alpha })
    }

    /// Ambient space dimension.
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Exponential1D => 1,
            Kernel::Newtonian { d } => *d as usize,
            Kernel::Riesz { d, .. } => *d as usize,
        }
    }

    /// Kernel normalization constant: the prefactor of the closed form.
    pub fn normalization(&self) -> f64 {
        match self {
            Kernel::Exponential1D => 0.5,
            Kernel::Newtonian { d } => newtonian_constant(*d),
            Kernel::Riesz { d, alpha } => riesz_constant(*d, *alpha),
        }
    }

    /// The `(β, c, r₀)` triple with `G(x,y) ≤ c |x-y|^{-β}` for `|x-y| < r₀`.
    pub fn singularity(&self) -> Singularity {
        match self {
            Kernel::Exponential1D => Singularity {
                beta: 0.0,
                c_bound: 0.5,
                r0: f64::INFINITY,
            },
            Kernel::Newtonian { d } => Singularity {
                beta: (*d as f64) - 2.0,
                c_bound: newtonian_constant(*d),
                r0: f64::INFINITY,
            },
            Kernel::Riesz { d, alpha } => Singularity {
                beta: (*d as f64) - alpha,
                c_bound: riesz_constant(*d, *alpha),
                r0: f64::INFINITY,
            },
        }
    }

    /// Evaluate `G(x, y)`. Symmetric and strictly positive; fails with
    /// `CoincidentPoints` when `x = y` and the kernel is unbounded there.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        if y.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: y.len(),
            });
        }
        let r = dist(x, y);
        match self {
            Kernel::Exponential1D => Ok(0.5 * (-r).exp()),
            Kernel::Newtonian { d } => {
                if r == 0.0 {
                    return Err(Error::CoincidentPoints);
                }
                Ok(newtonian_constant(*d) * r.powf(2.0 - *d as f64))
            }
            Kernel::Riesz { d, alpha } => {
                if r == 0.0 {
                    return Err(Error::CoincidentPoints);
                }
                Ok(riesz_constant(*d, *alpha) * r.powf(alpha - *d as f64))
            }
        }
    }
}

/// Euclidean distance.
pub fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// `c_d = Γ(d/2 - 1) / (4 π^{d/2})`, the constant making the Newtonian
/// kernel the fundamental solution of `-Δ`.
pub fn newtonian_constant(d: u32) -> f64 {
    let half_d = d as f64 / 2.0;
    gamma(half_d - 1.0) / (4.0 * PI.powf(half_d))
}

/// `κ_{d,α} = Γ((d-α)/2) / (2^α π^{d/2} Γ(α/2))`, the Riesz-kernel
/// normalization.
pub fn riesz_constant(d: u32, alpha: f64) -> f64 {
    let df = d as f64;
    gamma((df - alpha) / 2.0) / (2.0_f64.powf(alpha) * PI.powf(df / 2.0) * gamma(alpha / 2.0))
}

/// Mutual Newtonian energy of two uniform spherical shells concentric at the
/// origin: `m_i m_j / (4π max(R_i, R_j))`, exact by the mean-value property.
pub fn mutual_potential_sphere(sphere_i: (f64, f64), sphere_j: (f64, f64)) -> Result<f64> {
    let (r_i, m_i) = sphere_i;
    let (r_j, m_j) = sphere_j;
    if !(r_i > 0.0) {
        return Err(Error::NonpositiveRadius(r_i));
    }
    if !(r_j > 0.0) {
        return Err(Error::NonpositiveRadius(r_j));
    }
    Ok(m_i * m_j / (4.0 * PI * r_i.max(r_j)))
}

/// Lanczos approximation of the gamma function (g = 7, 9 coefficients),
/// accurate to ~1e-13 on the positive axis.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = COEF[0];
        let t = x + G + 0.5;
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-12);
        assert!((gamma(1.0) - 1.0).abs() < 1e-13);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((gamma(4.0) - 6.0).abs() < 1e-11);
        assert!((gamma(2.5) - 3.0 * PI.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_closed_form() {
        let k = Kernel::Exponential1D;
        assert_eq!(k.eval(&[0.0], &[0.0]).unwrap(), 0.5);
        let v = k.eval(&[0.0], &[1.0]).unwrap();
        assert!((v - 0.1839397206).abs() < 5e-11);
        assert!((v - 0.5 * (-1.0_f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn newtonian_3d_value() {
        // Frozen from the fundamental-solution check below: c_3 = 1/(4π).
        let k = Kernel::newtonian(3).unwrap();
        let v = k.eval(&[0.0, 0.0, 0.0], &[2.0, 0.0, 0.0]).unwrap();
        assert!((v - 1.0 / (8.0 * PI)).abs() < 1e-15);
        assert!((v - 0.0397887358).abs() < 5e-11);
    }

    /// Oracle for the Newtonian normalization: c_3 |x|^{-1} must satisfy
    /// ∫ G(x0, y) (-Δφ)(y) dy = φ(x0) for smooth compactly supported φ
    /// (a mollified delta). Midpoint quadrature over a box.
    #[test]
    fn newtonian_normalization_is_fundamental_solution() {
        let c3 = newtonian_constant(3);
        assert!((c3 - 1.0 / (4.0 * PI)).abs() < 1e-14);

        // Bump φ(y) = exp(-1/(1 - |y - c|²/ρ²)) inside the ball |y - c| < ρ.
        let center = [0.35, -0.2, 0.15];
        let rho = 0.8;
        let phi = |y: &[f64; 3]| -> f64 {
            let s: f64 = y
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / (rho * rho);
            if s >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - s)).exp()
            }
        };
        let h = 1e-4;
        let neg_laplacian = |y: &[f64; 3]| -> f64 {
            let mut acc = -6.0 * phi(y);
            for axis in 0..3 {
                let mut yp = *y;
                let mut ym = *y;
                yp[axis] += h;
                ym[axis] -= h;
                acc += phi(&yp) + phi(&ym);
            }
            -acc / (h * h)
        };
        // The box must contain the bump support |y - c| < 0.8 entirely.
        let x0 = [0.0, 0.0, 0.0];
        let n = 64;
        let lo = -1.3_f64;
        let hi = 1.3_f64;
        let dx = (hi - lo) / n as f64;
        let mut integral = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let y = [
                        lo + (i as f64 + 0.5) * dx,
                        lo + (j as f64 + 0.5) * dx,
                        lo + (k as f64 + 0.5) * dx,
                    ];
                    let r = dist(&x0, &y);
                    if r == 0.0 {
                        continue;
                    }
                    integral += c3 / r * neg_laplacian(&y) * dx * dx * dx;
                }
            }
        }
        // The quadrature only needs to pin the constant to a few percent:
        // a wrong normalization would be off by an integer factor.
        let expected = phi(&x0);
        assert!(
            (integral - expected).abs() < 5e-3 * expected.abs().max(1.0),
            "fundamental-solution residual: got {integral}, want {expected}"
        );
    }

    #[test]
    fn riesz_constant_oracle() {
        // For d = 1, α = 1/2 the two gamma factors coincide, so
        // κ = 1 / (√2 · √π) = 1/√(2π).
        let kappa = riesz_constant(1, 0.5);
        assert!((kappa - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-13);
        let s = Kernel::riesz(1, 0.5).unwrap().singularity();
        assert!((s.beta - 0.5).abs() < 1e-15);
        assert_eq!(s.r0, f64::INFINITY);
    }

    #[test]
    fn singularity_triples() {
        let e = Kernel::Exponential1D.singularity();
        assert_eq!((e.beta, e.c_bound, e.r0), (0.0, 0.5, f64::INFINITY));
        let n = Kernel::newtonian(3).unwrap().singularity();
        assert!((n.beta - 1.0).abs() < 1e-15);
        assert!((n.c_bound - 1.0 / (4.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_rejected_for_singular_kernels() {
        let k = Kernel::newtonian(3).unwrap();
        let p = [0.1, 0.2, 0.3];
        assert_eq!(k.eval(&p, &p), Err(Error::CoincidentPoints));
        let k = Kernel::riesz(2, 1.0).unwrap();
        assert_eq!(
            k.eval(&[1.0, 1.0], &[1.0, 1.0]),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn dimension_checked() {
        let k = Kernel::newtonian(3).unwrap();
        assert_eq!(
            k.eval(&[0.0, 0.0], &[1.0, 0.0, 0.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Kernel::newtonian(2).is_err());
        assert!(Kernel::riesz(1, 1.5).is_err()); // alpha >= min(2, d) = 1
        assert!(Kernel::riesz(3, 0.0).is_err());
        assert!(Kernel::riesz(3, 2.0).is_err());
    }

    #[test]
    fn symmetry_and_singularity_bound_sampled() {
        let kernels = [
            Kernel::Exponential1D,
            Kernel::newtonian(3).unwrap(),
            Kernel::newtonian(5).unwrap(),
            Kernel::riesz(1, 0.5).unwrap(),
            Kernel::riesz(3, 1.2).unwrap(),
        ];
        let mut r = SplitMix64::new(2024);
        for k in kernels {
            let s = k.singularity();
            for _ in 0..1000 {
                let dim = k.dim();
                let x: Vec<f64> = (0..dim).map(|_| r.next_in(-3.0, 3.0)).collect();
                let y: Vec<f64> = (0..dim).map(|_| r.next_in(-3.0, 3.0)).collect();
                if dist(&x, &y) == 0.0 {
                    continue;
                }
                let gxy = k.eval(&x, &y).unwrap();
                let gyx = k.eval(&y, &x).unwrap();
                assert_eq!(gxy, gyx, "kernel symmetry must be exact");
                assert!(gxy > 0.0);
                let rho = dist(&x, &y);
                if rho < s.r0 {
                    let bound = if s.beta == 0.0 {
                        s.c_bound
                    } else {
                        s.c_bound * rho.powf(-s.beta)
                    };
                    assert!(gxy <= bound * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn sphere_interaction_closed_form() {
        // Frozen against the Monte Carlo double-integral oracle below.
        let v = mutual_potential_sphere((1.0, 1.0), (1.0, 1.0)).unwrap();
        assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((v - 0.0795774715).abs() < 5e-11);
        let v = mutual_potential_sphere((1.0, 1.0), (2.0, 1.0)).unwrap();
        assert!((v - 1.0 / (8.0 * PI)).abs() < 1e-15);
        let v = mutual_potential_sphere((1.0, 0.0), (2.0, 5.0)).unwrap();
        assert_eq!(v, 0.0);
        assert!(mutual_potential_sphere((0.0, 1.0), (1.0, 1.0)).is_err());
        assert!(mutual_potential_sphere((1.0, 1.0), (-2.0, 1.0)).is_err());
    }

    /// Monte Carlo oracle for the sphere-sphere energy:
    /// (1/(4π)) E[ 1/|X - Y| ] with X, Y uniform on the spheres.
    #[test]
    fn sphere_interaction_monte_carlo_oracle() {
        let mut r = SplitMix64::new(7777);
        let mut sample_sphere = |radius: f64| -> [f64; 3] {
            // Marsaglia: uniform direction from two uniforms.
            loop {
                let u = r.next_symmetric();
                let v = r.next_symmetric();
                let s = u * u + v * v;
                if s < 1.0 {
                    let f = 2.0 * (1.0 - s).sqrt();
                    return [radius * u * f, radius * v * f, radius * (1.0 - 2.0 * s)];
                }
            }
        };
        for (ra, rb) in [(1.0, 1.0), (1.0, 2.0)] {
            let trials = 1_000_000;
            let mut acc = 0.0;
            for _ in 0..trials {
                let x = sample_sphere(ra);
                let y = sample_sphere(rb);
                acc += 1.0 / dist(&x, &y);
            }
            let estimate = acc / trials as f64 / (4.0 * PI);
            let exact = mutual_potential_sphere((ra, 1.0), (rb, 1.0)).unwrap();
            assert!(
                (estimate - exact).abs() / exact < 5e-3,
                "MC estimate {estimate} vs exact {exact}"
            );
        }
    }

    #[test]
    fn sphere_interaction_symmetric_and_homogeneous() {
        let mut r = SplitMix64::new(31);
        for _ in 0..200 {
            let a = (r.next_in(0.1, 5.0), r.next_in(0.0, 3.0));
            let b = (r.next_in(0.1, 5.0), r.next_in(0.0, 3.0));
            let ab = mutual_potential_sphere(a, b).unwrap();
            let ba = mutual_potential_sphere(b, a).unwrap();
            assert_eq!(ab, ba);
            let c = r.next_in(0.0, 4.0);
            let scaled = mutual_potential_sphere((a.0, c * a.1), b).unwrap();
            assert!((scaled - c * ab).abs() <= 1e-12 * ab.abs().max(1.0));
        }
    }
}
