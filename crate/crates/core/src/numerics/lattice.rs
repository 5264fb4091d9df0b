use num_complex::Complex64;

/// Truncated Weierstrass product for the Gaussian lattice ℤ + iℤ:
/// `w · Π_{0<|ρ|≤R} E₂(w/ρ)` with `E₂(u) = (1 − u)·exp(u + u²/2)`.
///
/// Has simple zeros at every lattice point of modulus below `R − |w|`.
pub fn eval_g(w: Complex64, lattice_radius: f64) -> Complex64 {
    assert!(lattice_radius >= 5.0, "lattice radius must be at least 5");
    let r = lattice_radius.floor() as i64;
    let r2 = lattice_radius * lattice_radius;
    let mut acc = w;
    // shells are visited in a fixed order so the product is reproducible
    for p in -r..=r {
        for q in -r..=r {
            if (p == 0 && q == 0) || ((p * p + q * q) as f64) > r2 {
                continue;
            }
            let u = w / Complex64::new(p as f64, q as f64);
            acc *= (Complex64::new(1.0, 0.0) - u) * (u + u * u * 0.5).exp();
        }
    }
    acc
}
