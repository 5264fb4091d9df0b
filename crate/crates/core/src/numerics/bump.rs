use std::f64::consts::PI;

/// Radial bump `φ(z) = C·exp(−1/(1 − |z − c|²/ε²))` on ℝⁿ, zero outside the
/// ball of radius `ε`. `C` is chosen so that `∫φ = mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpFunction {
    center: Vec<f64>,
    radius: f64,
    mass: f64,
    norm: f64,
}

/// Composite Simpson panels for the radial normalization integral.
const RADIAL_PANELS: usize = 1 << 14;

impl BumpFunction {
    /// Unit-mass bump.
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0, "bump radius must be positive");
        assert!(!center.is_empty(), "bump needs a nonempty center");
        let raw = unnormalized_integral(center.len(), radius);
        Self {
            center,
            radius,
            mass: 1.0,
            norm: 1.0 / raw,
        }
    }

    /// Same shape, total mass multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            mass: self.mass * k,
            norm: self.norm * k,
            ..self.clone()
        }
    }

    /// Same bump moved so that its center is `center + shift`.
    pub fn translated(&self, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.center.len());
        Self {
            center: self.center.iter().zip(shift).map(|(c, s)| c + s).collect(),
            ..self.clone()
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `∫φ` over ℝⁿ.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let r2: f64 = z
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        self.eval_sq_dist(r2)
    }

    /// `φ` at squared distance `r2` from the center.
    pub fn eval_sq_dist(&self, r2: f64) -> f64 {
        let t = r2 / (self.radius * self.radius);
        if t >= 1.0 {
            0.0
        } else {
            self.norm * (-1.0 / (1.0 - t)).exp()
        }
    }
}

/// Surface area of the unit sphere `S^{n−1}`.
fn sphere_area(n: usize) -> f64 {
    // 2π^{n/2} / Γ(n/2), with Γ(n/2) by the half-integer recurrence
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while k < n as f64 / 2.0 - 1e-9 {
        gamma *= k;
        k += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

/// `∫_{ℝⁿ} exp(−1/(1 − |z|²/ε²)) dz = |S^{n−1}| εⁿ ∫₀¹ exp(−1/(1−s²)) s^{n−1} ds`.
pub(crate) fn unnormalized_integral(n: usize, radius: f64) -> f64 {
    let h = 1.0 / RADIAL_PANELS as f64;
    let f = |i: usize| {
        let s = i as f64 * h;
        if i == RADIAL_PANELS {
            0.0
        } else {
            (-1.0 / (1.0 - s * s)).exp() * s.powi(n as i32 - 1)
        }
    };
    let radial: f64 = (0..=RADIAL_PANELS)
        .map(|i| {
            let w = if i == 0 || i == RADIAL_PANELS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(i)
        })
        .sum::<f64>()
        * h
        / 3.0;
    sphere_area(n) * radius.powi(n as i32) * radial
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn unit_mass_by_tensor_quadrature() {
        // independent check in ℝ²: brute-force midpoint grid over the square
        let phi = BumpFunction::new(vec![0.1, -0.2], 0.5);
        let n = 400;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = 0.1 - 0.5 + (i as f64 + 0.5) * h;
                let y = -0.2 - 0.5 + (j as f64 + 0.5) * h;
                sum += phi.eval(&[x, y]);
            }
        }
        assert!((sum * h * h - 1.0).abs() < 1e-8);
    }

    #[test]
    fn unit_mass_in_four_dimensions() {
        let phi = BumpFunction::new(vec![0.0; 4], 0.4);
        let n = 40;
        let h = 0.8 / n as f64;
        let node = |i: usize| -0.4 + (i as f64 + 0.5) * h;
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        sum += phi.eval(&[node(a), node(b), node(c), node(d)]);
                    }
                }
            }
        }
        assert!((sum * h.powi(4) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn support_and_scaling() {
        let phi = BumpFunction::new(vec![0.0, 0.0], 1.0);
        assert_eq!(phi.eval(&[1.0, 0.0]), 0.0);
        assert!(phi.eval(&[0.0, 0.0]) > 0.0);
        let big = phi.scaled(5.0);
        assert!((big.eval(&[0.3, 0.1]) - 5.0 * phi.eval(&[0.3, 0.1])).abs() < 1e-12);
        assert_eq!(big.mass(), 5.0);
        assert_eq!(phi.translated(&[1.0, 2.0]).center(), &[1.0, 2.0]);
    }
}
