use num_complex::Complex64;

use super::bump::BumpFunction;
use super::sheets::{lattice_points, normal_jacobian, CubeRegion, ZeroSheet};
use super::{NumericError, NumericReport, QuadratureParams};

/// `∫_sheet φ dS` by the tensor midpoint rule on sheet-local coordinates
/// over the chord ball `sheet ∩ supp φ`.
pub fn sheet_integral(sheet: &ZeroSheet, phi: &BumpFunction, nodes: usize) -> f64 {
    let foot = sheet.project(phi.center());
    let h2: f64 = foot
        .iter()
        .zip(phi.center())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let eps2 = phi.radius() * phi.radius();
    if h2 >= eps2 {
        return 0.0;
    }
    let dims = sheet.tangents.len();
    if dims == 0 {
        return phi.eval_sq_dist(h2);
    }
    let chord = (eps2 - h2).sqrt();
    let step = 2.0 * chord / nodes as f64;
    let offsets: Vec<f64> = (0..nodes)
        .map(|i| {
            let s = -chord + (i as f64 + 0.5) * step;
            s * s
        })
        .collect();
    // the foot point is the closest point to the center, so the squared
    // distance at local coordinates s is h² + |s|²
    let mut idx = vec![0usize; dims];
    let mut sum = 0.0;
    loop {
        let r2 = h2 + idx.iter().map(|&i| offsets[i]).sum::<f64>();
        sum += phi.eval_sq_dist(r2);
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < nodes {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dims {
                return sum * step.powi(dims as i32);
            }
        }
    }
}

fn check_dims(lambda: &[f64], mu: &[f64], phi: &BumpFunction) -> Result<(), NumericError> {
    if lambda.len() != mu.len() || phi.dim() != 2 * lambda.len() || lambda.is_empty() {
        return Err(NumericError::DimensionMismatch);
    }
    if normal_jacobian(lambda, mu) == 0.0 {
        return Err(NumericError::DegeneratePair);
    }
    Ok(())
}

/// `Σ_sheets ∫_sheet φ dS` over the sheets meeting the support of `φ`.
fn sheets_mass(
    lambda: &[f64],
    mu: &[f64],
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<f64, NumericError> {
    let region = CubeRegion {
        center: phi.center().to_vec(),
        half_width: phi.radius(),
    };
    let hits = lattice_points(lambda, mu, &region, params.lattice_radius)?;
    // conservative: any sheet beyond R that meets the bounding cube of the
    // support is treated as needed
    if let Some(needed) = hits.truncated {
        return Err(NumericError::LatticeRadiusTooSmall {
            needed,
            radius: params.lattice_radius,
        });
    }
    let mut total = 0.0;
    for pq in hits.inside {
        let sheet = ZeroSheet::new(lambda, mu, pq)?;
        total += sheet_integral(&sheet, phi, params.nodes);
    }
    Ok(total)
}

fn prefactor(j: usize, k: usize, lambda: &[f64], mu: &[f64]) -> Result<Complex64, NumericError> {
    if j >= lambda.len() || k >= lambda.len() {
        return Err(NumericError::IndexOutOfRange);
    }
    let cj = Complex64::new(lambda[j], mu[j]);
    let ck = Complex64::new(lambda[k], mu[k]);
    Ok(cj * ck.conj() / normal_jacobian(lambda, mu))
}

/// `⟨(2/π) ∂²log|f|/∂z_j∂z̄_k, φ⟩` for `f = g(⟨z,λ⟩ + i⟨z,μ⟩)`, indices
/// 0-based. The support of `φ` must lie in the parameter box.
pub fn pair_current(
    j: usize,
    k: usize,
    lambda: &[f64],
    mu: &[f64],
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<Complex64, NumericError> {
    params.validate()?;
    check_dims(lambda, mu, phi)?;
    let c = prefactor(j, k, lambda, mu)?;
    let region = CubeRegion::centered(phi.dim(), params.half_width);
    if !region.contains_ball(phi.center(), phi.radius()) {
        return Err(NumericError::SupportExceedsBox(params.half_width));
    }
    if c == Complex64::new(0.0, 0.0) {
        return Ok(c);
    }
    Ok(c * sheets_mass(lambda, mu, phi, params)?)
}

fn shift_real(phi: &BumpFunction, t: &[f64]) -> BumpFunction {
    let mut shift = t.to_vec();
    shift.resize(phi.dim(), 0.0);
    phi.translated(&shift)
}

fn float_periods(lambda: &[f64], mu: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (ll, mm, lm) = (dot(lambda, lambda), dot(mu, mu), dot(lambda, mu));
    let denom = ll * mm - lm * lm;
    if denom <= 1e-12 * ll * mm {
        return None;
    }
    let p1 = lambda
        .iter()
        .zip(mu)
        .map(|(l, m)| (mm * l - lm * m) / denom)
        .collect();
    let p2 = lambda
        .iter()
        .zip(mu)
        .map(|(l, m)| (ll * m - lm * l) / denom)
        .collect();
    Some((p1, p2))
}

/// Mean over real translations `t` of `Σ_sheets ∫ φ(· − t) dS`.
///
/// For ℝ-independent `(λ, μ)` the divisor is periodic with periods
/// `P₁, P₂` and the mean is the exact average over the cell
/// `{ sP₁ + rP₂ : s, r ∈ [0, 1) }`. Otherwise `(2N)^{−m}∫_{[−N,N]^m}` is
/// used.
pub fn mean_sheet_mass(
    lambda: &[f64],
    mu: &[f64],
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<f64, NumericError> {
    params.validate()?;
    check_dims(lambda, mu, phi)?;
    let region = CubeRegion::centered(phi.dim(), params.half_width);
    if !region.contains_ball(phi.center(), phi.radius()) {
        return Err(NumericError::SupportExceedsBox(params.half_width));
    }
    let n = params.mean_nodes;
    let node = |i: usize| (i as f64 + 0.5) / n as f64;
    if let Some((p1, p2)) = float_periods(lambda, mu) {
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                let (s, r) = (node(a), node(b));
                let t: Vec<f64> = p1.iter().zip(&p2).map(|(x, y)| s * x + r * y).collect();
                sum += sheets_mass(lambda, mu, &shift_real(phi, &t), params)?;
            }
        }
        return Ok(sum / (n * n) as f64);
    }
    let m = lambda.len();
    let big_n = params.half_width;
    let mut idx = vec![0usize; m];
    let mut sum = 0.0;
    let mut count = 0usize;
    loop {
        let t: Vec<f64> = idx.iter().map(|&i| big_n * (2.0 * node(i) - 1.0)).collect();
        sum += sheets_mass(lambda, mu, &shift_real(phi, &t), params)?;
        count += 1;
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == m {
                return Ok(sum / count as f64);
            }
        }
    }
}

/// Mean value of `t ↦ ⟨(2/π) ∂²log|f|/∂z_j∂z̄_k, φ(· − t)⟩`.
pub fn mean_value_pairing(
    j: usize,
    k: usize,
    lambda: &[f64],
    mu: &[f64],
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<Complex64, NumericError> {
    check_dims(lambda, mu, phi)?;
    let c = prefactor(j, k, lambda, mu)?;
    Ok(c * mean_sheet_mass(lambda, mu, phi, params)?)
}

/// `Im(mean_value_pairing(j, k)) / ∫φ` for all `j, k`, using the default
/// bump of `params`.
pub fn a_matrix_numeric(
    lambda: &[f64],
    mu: &[f64],
    params: &QuadratureParams,
) -> Result<Vec<Vec<f64>>, NumericError> {
    a_matrix_numeric_with(lambda, mu, &params.default_bump(lambda.len()), params)
}

pub fn a_matrix_numeric_with(
    lambda: &[f64],
    mu: &[f64],
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<Vec<Vec<f64>>, NumericError> {
    let m = lambda.len();
    if m < 2 {
        return Err(NumericError::DimensionMismatch);
    }
    // the sheet mass is shared by every entry; only the prefactor varies
    let mass = mean_sheet_mass(lambda, mu, phi, params)?;
    (0..m)
        .map(|j| {
            (0..m)
                .map(|k| Ok((prefactor(j, k, lambda, mu)? * mass).im / phi.mass()))
                .collect()
        })
        .collect()
}

fn dis_value(phi: &BumpFunction, params: &QuadratureParams) -> Result<f64, NumericError> {
    let (lambda, mu) = ([1.0, 0.0], [0.0, 1.0]);
    // L_z = (2/π) Im ∂²/∂z̄₁∂z₂ is the imaginary part of the (2, 1) coefficient
    let c = prefactor(1, 0, &lambda, &mu)?;
    let n = params.mean_nodes;
    let mut sum = 0.0;
    for a in 0..n {
        for b in 0..n {
            let t = [-(a as f64 + 0.5) / n as f64, -(b as f64 + 0.5) / n as f64];
            sum += sheets_mass(&lambda, &mu, &shift_real(phi, &t), params)?;
        }
    }
    Ok((c * (sum / (n * n) as f64)).im)
}

/// Average over `t ∈ [0,1]²` of `⟨L_z log|g(z₁ + iz₂)|, φ(z + t)⟩`, compared
/// with `∫φ` over ℝ⁴.
pub fn lemma_dis_check(
    phi: &BumpFunction,
    params: &QuadratureParams,
) -> Result<NumericReport, NumericError> {
    params.validate()?;
    if phi.dim() != 4 {
        return Err(NumericError::DimensionMismatch);
    }
    let region = CubeRegion::centered(4, params.half_width);
    if !region.contains_ball(phi.center(), phi.radius()) {
        return Err(NumericError::SupportExceedsBox(params.half_width));
    }
    let value = dis_value(phi, params)?;
    let coarse = dis_value(phi, &params.coarsened())?;
    Ok(NumericReport::new(
        value,
        phi.mass(),
        (value - coarse).abs(),
        params.clone(),
    ))
}
