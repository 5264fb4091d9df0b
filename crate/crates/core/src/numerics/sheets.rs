//! Zero sheets of `w(z) = ⟨z,λ⟩ + i⟨z,μ⟩` over the Gaussian lattice.
//!
//! Points of ℂ^m are handled as real vectors `(x₁..x_m, y₁..y_m)`. With
//! `z = x + iy`,
//!
//! ```text
//! Re w = ⟨x,λ⟩ − ⟨y,μ⟩,    Im w = ⟨y,λ⟩ + ⟨x,μ⟩,
//! ```
//!
//! so the real Jacobian of `w` has rows `(λ, −μ)` and `(μ, λ)`. These are
//! orthogonal with common squared norm `|λ|² + |μ|²`, which is therefore the
//! normal Jacobian of `w` and the co-area factor for pulling back the
//! lattice delta measure.

use super::NumericError;

/// The affine sheet `{ w(z) = p + iq }`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSheet {
    pub lattice: (i64, i64),
    /// Minimum-norm point of the sheet.
    pub base: Vec<f64>,
    /// Orthonormal basis of the tangent space (2m − 2 vectors).
    pub tangents: Vec<Vec<f64>>,
}

/// Axis-aligned cube `center + [−h, h]^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeRegion {
    pub center: Vec<f64>,
    pub half_width: f64,
}

impl CubeRegion {
    pub fn centered(dim: usize, half_width: f64) -> Self {
        Self {
            center: vec![0.0; dim],
            half_width,
        }
    }

    pub fn contains_ball(&self, center: &[f64], radius: f64) -> bool {
        center
            .iter()
            .zip(&self.center)
            .all(|(c, o)| (c - o).abs() + radius <= self.half_width)
    }
}

/// The two gradient rows `(λ, −μ)` and `(μ, λ)`.
pub fn gradient_rows(lambda: &[f64], mu: &[f64]) -> [Vec<f64>; 2] {
    let re: Vec<f64> = lambda
        .iter()
        .copied()
        .chain(mu.iter().map(|v| -v))
        .collect();
    let im: Vec<f64> = mu.iter().chain(lambda).copied().collect();
    [re, im]
}

/// `|λ|² + |μ|²`.
pub fn normal_jacobian(lambda: &[f64], mu: &[f64]) -> f64 {
    lambda.iter().chain(mu).map(|v| v * v).sum()
}

/// `(Re w(z), Im w(z))`.
pub fn w_of(lambda: &[f64], mu: &[f64], z: &[f64]) -> (f64, f64) {
    let m = lambda.len();
    let (x, y) = z.split_at(m);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    (dot(x, lambda) - dot(y, mu), dot(y, lambda) + dot(x, mu))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Orthonormal basis of the null space of the gradient rows, by
/// Gram–Schmidt on the standard basis after projecting out the row space.
fn tangent_basis(rows: &[Vec<f64>; 2], jac: f64) -> Vec<Vec<f64>> {
    let n = rows[0].len();
    let unit_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v / jac.sqrt()).collect())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 2);
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        // two passes of modified Gram–Schmidt for stability
        for _ in 0..2 {
            for u in unit_rows.iter().chain(basis.iter()) {
                let c = dot(&v, u);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
            if basis.len() == n - 2 {
                break;
            }
        }
    }
    basis
}

impl ZeroSheet {
    pub fn new(lambda: &[f64], mu: &[f64], lattice: (i64, i64)) -> Result<Self, NumericError> {
        let jac = normal_jacobian(lambda, mu);
        if jac == 0.0 {
            return Err(NumericError::DegeneratePair);
        }
        let rows = gradient_rows(lambda, mu);
        let (p, q) = (lattice.0 as f64, lattice.1 as f64);
        let base = rows[0]
            .iter()
            .zip(&rows[1])
            .map(|(a, b)| (p * a + q * b) / jac)
            .collect();
        Ok(Self {
            lattice,
            base,
            tangents: tangent_basis(&rows, jac),
        })
    }

    /// Orthogonal projection of `point` onto the sheet.
    pub fn project(&self, point: &[f64]) -> Vec<f64> {
        let mut out = self.base.clone();
        let diff: Vec<f64> = point.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        for t in &self.tangents {
            let c = dot(&diff, t);
            out.iter_mut().zip(t).for_each(|(o, v)| *o += c * v);
        }
        out
    }
}

/// Sheets meeting `region` whose lattice index has `|p + iq| ≤ radius`.
///
/// The image of a cube under the linear map `w` is a zonotope in ℝ², and a
/// sheet meets the cube iff its lattice point lies in that zonotope.
pub fn zero_sheets(
    lambda: &[f64],
    mu: &[f64],
    region: &CubeRegion,
    radius: f64,
) -> Result<Vec<ZeroSheet>, NumericError> {
    lattice_points(lambda, mu, region, radius)?
        .inside
        .into_iter()
        .map(|pq| ZeroSheet::new(lambda, mu, pq))
        .collect()
}

pub(crate) struct LatticeHits {
    pub inside: Vec<(i64, i64)>,
    /// A lattice point in the zonotope but beyond the truncation radius.
    pub truncated: Option<(i64, i64)>,
}

pub(crate) fn lattice_points(
    lambda: &[f64],
    mu: &[f64],
    region: &CubeRegion,
    radius: f64,
) -> Result<LatticeHits, NumericError> {
    if lambda.len() != mu.len() || region.center.len() != 2 * lambda.len() {
        return Err(NumericError::DimensionMismatch);
    }
    if normal_jacobian(lambda, mu) == 0.0 {
        return Err(NumericError::DegeneratePair);
    }
    let rows = gradient_rows(lambda, mu);
    // zonotope generators: columns of the 2×2m Jacobian
    let gens: Vec<(f64, f64)> = rows[0]
        .iter()
        .copied()
        .zip(rows[1].iter().copied())
        .collect();
    let h = region.half_width;
    let (cx, cy) = w_of(lambda, mu, &region.center);
    let ext_x: f64 = h * gens.iter().map(|g| g.0.abs()).sum::<f64>();
    let ext_y: f64 = h * gens.iter().map(|g| g.1.abs()).sum::<f64>();
    let inside = |x: f64, y: f64| {
        let (dx, dy) = (x - cx, y - cy);
        if dx.abs() > ext_x + 1e-12 || dy.abs() > ext_y + 1e-12 {
            return false;
        }
        gens.iter().all(|g| {
            let (nx, ny) = (-g.1, g.0);
            if nx == 0.0 && ny == 0.0 {
                return true;
            }
            let support: f64 = h * gens
                .iter()
                .map(|k| (nx * k.0 + ny * k.1).abs())
                .sum::<f64>();
            (nx * dx + ny * dy).abs() <= support * (1.0 + 1e-12) + 1e-12
        })
    };
    let mut out = Vec::new();
    let mut truncated = None;
    let p_range = ((cx - ext_x).floor() as i64)..=((cx + ext_x).ceil() as i64);
    for p in p_range {
        for q in ((cy - ext_y).floor() as i64)..=((cy + ext_y).ceil() as i64) {
            if !inside(p as f64, q as f64) {
                continue;
            }
            if ((p * p + q * q) as f64).sqrt() > radius {
                truncated.get_or_insert((p, q));
            } else {
                out.push((p, q));
            }
        }
    }
    Ok(LatticeHits {
        inside: out,
        truncated,
    })
}
