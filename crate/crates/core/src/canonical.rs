//! Closed-form optical-region RCS of canonical shapes, coherent facet
//! summation, and the sine integral used by the cone decomposition factor.
//!
//! Expressions are implemented as tabulated for monostatic backscatter. The
//! ellipsoid entry in particular carries a `1/λ²` factor that the classical
//! frequency-independent result does not have; it is kept as tabulated.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this magnitude `sin(x)/x` is replaced by its limit 1.
const SINC_LIMIT: f64 = 1e-8;

fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_LIMIT {
        1.0
    } else {
        x.sin() / x
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Perfectly conducting sphere, `σ = πa²`.
pub fn sphere_rcs(radius_m: f64) -> Result<f64> {
    positive("sphere radius", radius_m)?;
    Ok(PI * radius_m * radius_m)
}

/// Rectangular flat plate:
/// `σ = 4π(ab/λ)² cos²θ · [sin(βb sinθ)/(βb sinθ)]²`, `β = 2π/λ`.
///
/// `theta_i` in `[0, π/2]`; exactly grazing incidence returns 0.
pub fn plate_rcs(a_m: f64, b_m: f64, lambda_m: f64, theta_i: f64) -> Result<f64> {
    positive("plate side a", a_m)?;
    positive("plate side b", b_m)?;
    positive("wavelength", lambda_m)?;
    if !(0.0..=FRAC_PI_2).contains(&theta_i) {
        return Err(Error::domain(format!(
            "plate incidence angle must lie in [0, π/2], got {theta_i}"
        )));
    }
    if FRAC_PI_2 - theta_i < 1e-12 {
        return Ok(0.0);
    }
    let beta = 2.0 * PI / lambda_m;
    let s = sinc(beta * b_m * theta_i.sin());
    Ok(4.0 * PI * (a_m * b_m / lambda_m).powi(2) * theta_i.cos().powi(2) * s * s)
}

/// Ellipsoid: `σ = (πa²b²/λ²) · (cos²θ + (a²/b²) sin²θ)^-2`.
pub fn ellipsoid_rcs(a_m: f64, b_m: f64, lambda_m: f64, theta: f64) -> Result<f64> {
    positive("ellipsoid semi-axis a", a_m)?;
    positive("ellipsoid semi-axis b", b_m)?;
    positive("wavelength", lambda_m)?;
    let ratio = (a_m / b_m).powi(2);
    let denom = theta.cos().powi(2) + ratio * theta.sin().powi(2);
    Ok(PI * a_m.powi(2) * b_m.powi(2) / lambda_m.powi(2) / denom.powi(2))
}

/// Cone: `σ = (πa²/λ²) · sin²(θ-α)/(θ-α)²`, limit `πa²/λ²` at `θ = α`.
pub fn cone_rcs(a_m: f64, lambda_m: f64, theta: f64, alpha: f64) -> Result<f64> {
    positive("cone base radius", a_m)?;
    positive("wavelength", lambda_m)?;
    let s = sinc(theta - alpha);
    Ok(PI * a_m.powi(2) / lambda_m.powi(2) * s * s)
}

/// Triangular trihedral reflector: `σ = (4π/λ²) · a⁴/(h+b)² · cos²θ`.
pub fn trihedral_rcs(a_m: f64, h_m: f64, b_m: f64, lambda_m: f64, theta: f64) -> Result<f64> {
    positive("trihedral edge a", a_m)?;
    positive("trihedral dimension h", h_m)?;
    positive("trihedral dimension b", b_m)?;
    positive("wavelength", lambda_m)?;
    Ok(4.0 * PI / lambda_m.powi(2) * a_m.powi(4) / (h_m + b_m).powi(2) * theta.cos().powi(2))
}

/// Optical-region indicator `ka = 2πa/λ`; the closed forms assume `ka ≫ 1`.
pub fn optical_ratio(size_m: f64, lambda_m: f64) -> f64 {
    2.0 * PI * size_m / lambda_m
}

/// One scattering facet: its own RCS, position and relative phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub rcs_m2: f64,
    pub position_m: [f64; 3],
    pub phase_rad: f64,
}

impl Facet {
    pub fn new(rcs_m2: f64, position_m: [f64; 3], phase_rad: f64) -> Result<Self> {
        if !(rcs_m2 >= 0.0) || !rcs_m2.is_finite() {
            return Err(Error::domain(format!("facet RCS must be >= 0, got {rcs_m2}")));
        }
        if position_m.iter().any(|c| !c.is_finite()) || !phase_rad.is_finite() {
            return Err(Error::domain("facet position and phase must be finite"));
        }
        Ok(Facet {
            rcs_m2,
            position_m,
            phase_rad,
        })
    }
}

/// Unit vector from target toward the radar plus the wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookDirection {
    pub unit: [f64; 3],
    pub wavenumber: f64,
}

impl LookDirection {
    pub fn new(unit: [f64; 3], wavenumber: f64) -> Result<Self> {
        let norm = unit.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "look direction must be a unit vector, |r| = {norm}"
            )));
        }
        positive("wavenumber", wavenumber)?;
        Ok(LookDirection { unit, wavenumber })
    }

    pub fn from_wavelength(unit: [f64; 3], lambda_m: f64) -> Result<Self> {
        positive("wavelength", lambda_m)?;
        Self::new(unit, 2.0 * PI / lambda_m)
    }
}

/// Coherent sum `σ = |Σ √σ_i e^{j2k r·c_i} e^{jφ_i}|²`.
pub fn facet_sum(facets: &[Facet], look: &LookDirection) -> Result<f64> {
    if facets.is_empty() {
        return Err(Error::domain("facet_sum needs at least one facet"));
    }
    let field: Complex64 = facets
        .iter()
        .map(|f| {
            let proj: f64 = f.position_m.iter().zip(look.unit).map(|(c, r)| c * r).sum();
            let phase = 2.0 * look.wavenumber * proj + f.phase_rad;
            Complex64::from_polar(f.rcs_m2.sqrt(), phase)
        })
        .sum();
    Ok(field.norm_sqr())
}

/// Sine integral `Si(x) = ∫₀ˣ sin t / t dt`.
///
/// Power series for |x| ≤ 2, otherwise the continued fraction for the
/// complex exponential integral `E1(ix)` evaluated with Lentz's method.
pub fn sine_integral(x: f64) -> f64 {
    let t = x.abs();
    let si = if t == 0.0 {
        0.0
    } else if t <= 2.0 {
        si_series(t)
    } else {
        si_continued_fraction(t)
    };
    si.copysign(x)
}

fn si_series(t: f64) -> f64 {
    // Σ (-1)^k t^(2k+1) / ((2k+1)(2k+1)!)
    let mut sum = 0.0;
    let mut term = t; // t^(2k+1)/(2k+1)!
    let mut k = 0u32;
    loop {
        let contrib = term / (2 * k + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1;
        let n = (2 * k) as f64;
        term *= -t * t / (n * (n + 1.0));
    }
    sum
}

fn si_continued_fraction(t: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(t.cos(), -t.sin());
    // Ci + i·Si = -conj(h) + iπ/2
    h.im + FRAC_PI_2
}

/// Cone decomposition factor
/// `P(α) = Si(4π-2α) + Si(2α) + sin²α · (1/(2π-α) - 1/α)` for `0 < α < 2π`.
pub fn cone_decomposition_factor(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::domain(format!("cone factor needs 0 < α < 2π, got {alpha}")));
    }
    Ok(sine_integral(4.0 * PI - 2.0 * alpha)
        + sine_integral(2.0 * alpha)
        + alpha.sin().powi(2) * (1.0 / (2.0 * PI - alpha) - 1.0 / alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{linear_to_db, wavelength_m};

    /// Composite Gauss–Legendre (5-point) quadrature of sin t / t, used as an
    /// independent oracle for the sine integral.
    fn si_quadrature(x: f64) -> f64 {
        const NODES: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let panels = 4000;
        let h = x / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (n, w) in NODES.iter().zip(WEIGHTS) {
                let t = mid + 0.5 * h * n;
                sum += w * 0.5 * h * (t.sin() / t);
            }
        }
        sum
    }

    #[test]
    fn sphere_examples() {
        let s = sphere_rcs(0.25).unwrap();
        assert!((s - 0.19635).abs() < 1e-5);
        assert!((linear_to_db(s).unwrap() - -7.07).abs() < 0.01);
        assert!((sphere_rcs(1.0 / PI.sqrt()).unwrap() - 1.0).abs() < 1e-15);
        assert!((sphere_rcs(0.5).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(sphere_rcs(0.0).is_err());
        assert!(sphere_rcs(-1.0).is_err());
    }

    #[test]
    fn plate_examples() {
        let lambda = wavelength_m(28.0);
        let s = plate_rcs(0.1, 0.1, lambda, 0.0).unwrap();
        let expected = 4.0 * PI * (0.01 / lambda).powi(2);
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 10.96).abs() < 0.01);
        assert_eq!(plate_rcs(0.1, 0.1, lambda, FRAC_PI_2).unwrap(), 0.0);
        assert!(plate_rcs(0.1, 0.1, lambda, FRAC_PI_2 - 1e-6).unwrap() < 1e-9);
        let half = plate_rcs(0.1, 0.1, lambda / 2.0, 0.0).unwrap();
        assert!((half / s - 4.0).abs() < 1e-12);
        assert!(plate_rcs(0.0, 0.1, lambda, 0.0).is_err());
        assert!(plate_rcs(0.1, 0.1, -1.0, 0.0).is_err());
    }

    #[test]
    fn ellipsoid_examples() {
        let l = 0.01;
        let a = 0.3;
        for &th in &[0.0, 0.4, 1.2, 3.0] {
            let s = ellipsoid_rcs(a, a, l, th).unwrap();
            assert!((s - PI * a.powi(4) / (l * l)).abs() / s < 1e-12);
        }
        let base = PI * 0.04f64 * 0.01 / (l * l);
        assert!((ellipsoid_rcs(0.2, 0.1, l, 0.0).unwrap() - base).abs() / base < 1e-12);
        let side = ellipsoid_rcs(0.2, 0.1, l, FRAC_PI_2).unwrap();
        assert!((side - base / 16.0).abs() / side < 1e-12);
        assert!(ellipsoid_rcs(0.2, 0.0, l, 0.0).is_err());
    }

    #[test]
    fn cone_examples() {
        let l = 0.02;
        let a = 0.1;
        let peak = PI * a * a / (l * l);
        assert!((cone_rcs(a, l, 0.7, 0.7).unwrap() - peak).abs() < 1e-12 * peak);
        assert!(cone_rcs(a, l, 0.3 + PI, 0.3).unwrap() < 1e-25 * peak);
        let s = cone_rcs(1.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert!((s - 4.0 / PI).abs() < 1e-12);
        assert!(cone_rcs(0.0, l, 0.0, 0.0).is_err());
    }

    #[test]
    fn trihedral_examples() {
        assert!(trihedral_rcs(1.0, 1.0, 1.0, 1.0, FRAC_PI_2).unwrap() < 1e-30);
        assert!((trihedral_rcs(1.0, 1.0, 1.0, 1.0, 0.0).unwrap() - PI).abs() < 1e-12);
        let s1 = trihedral_rcs(0.2, 0.3, 0.1, 0.01, 0.3).unwrap();
        let s2 = trihedral_rcs(0.4, 0.3, 0.1, 0.01, 0.3).unwrap();
        assert!((s2 / s1 - 16.0).abs() < 1e-12);
        assert!(trihedral_rcs(0.2, 0.0, 0.1, 0.01, 0.3).is_err());
    }

    #[test]
    fn inverse_square_wavelength_scaling() {
        let r = |f: &dyn Fn(f64) -> f64| f(0.01) / f(0.02);
        assert!((r(&|l| plate_rcs(0.1, 0.2, l, 0.0).unwrap()) - 4.0).abs() < 1e-12);
        assert!((r(&|l| ellipsoid_rcs(0.1, 0.2, l, 0.0).unwrap()) - 4.0).abs() < 1e-12);
        assert!((r(&|l| cone_rcs(0.1, l, 0.5, 0.5).unwrap()) - 4.0).abs() < 1e-12);
        assert!((r(&|l| trihedral_rcs(0.1, 0.1, 0.1, l, 0.0).unwrap()) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn facet_examples() {
        let look = LookDirection::from_wavelength([1.0, 0.0, 0.0], 0.01).unwrap();
        let f1 = Facet::new(2.5, [0.0; 3], 1.234).unwrap();
        assert!((facet_sum(&[f1], &look).unwrap() - 2.5).abs() < 1e-12);
        let a = Facet::new(1.0, [0.0; 3], 0.0).unwrap();
        assert!((facet_sum(&[a, a], &look).unwrap() - 4.0).abs() < 1e-12);
        let b = Facet::new(1.0, [0.0; 3], PI).unwrap();
        assert!(facet_sum(&[a, b], &look).unwrap() < 1e-24);
        // λ/4 along the look direction → round-trip phase 2k·λ/4 = π
        let c = Facet::new(1.0, [0.0025, 0.0, 0.0], 0.0).unwrap();
        assert!(facet_sum(&[a, c], &look).unwrap() < 1e-24);
        assert!(facet_sum(&[], &look).is_err());
        assert!(LookDirection::new([1.0, 1.0, 0.0], 1.0).is_err());
        assert!(LookDirection::new([1.0, 0.0, 0.0], 0.0).is_err());
        assert!(Facet::new(-1.0, [0.0; 3], 0.0).is_err());
    }

    #[test]
    fn sine_integral_against_quadrature() {
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(PI) - 1.851_937_052).abs() < 1e-9);
        for &x in &[0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 5.0, 7.5, 12.0, 25.0, 60.0] {
            let q = si_quadrature(x);
            assert!(
                (sine_integral(x) - q).abs() < 1e-9,
                "Si({x}) = {} vs {q}",
                sine_integral(x)
            );
            assert_eq!(sine_integral(-x), -sine_integral(x));
        }
        // large-argument limit π/2
        assert!((sine_integral(1e6) - FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn cone_factor_examples() {
        let p = cone_decomposition_factor(PI).unwrap();
        assert!((p - 2.0 * sine_integral(2.0 * PI)).abs() < 1e-12);
        let p = cone_decomposition_factor(FRAC_PI_2).unwrap();
        let oracle = si_quadrature(3.0 * PI) + si_quadrature(PI) + (1.0 / (1.5 * PI) - 2.0 / PI);
        assert!((p - oracle).abs() < 1e-9);
        for &a in &[0.3, 1.1, 2.0] {
            let pair = |x: f64| sine_integral(4.0 * PI - 2.0 * x) + sine_integral(2.0 * x);
            assert!((pair(a) - pair(2.0 * PI - a)).abs() < 1e-12);
        }
        assert!(cone_decomposition_factor(0.0).is_err());
        assert!(cone_decomposition_factor(2.0 * PI).is_err());
    }

    #[test]
    fn optical_ratio_for_calibration_sphere() {
        // 0.25 m sphere at 28 GHz sits deep in the optical region
        assert!(optical_ratio(0.25, wavelength_m(28.0)) > 100.0);
    }
}
