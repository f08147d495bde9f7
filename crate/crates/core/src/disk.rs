//! Finite-disk edge effects: forces on a point mass on the axis of a disk of
//! radius R_d and thickness D₁, and the near/far ratios ξ that measure how
//! differently the closest (z = a) and farthest (z = a + 2R) points of a
//! sphere of radius R feel the disk.
//!
//! All square-root and power differences are rewritten so that no two large
//! nearly-equal numbers are subtracted: `√(R²+z²) − √(R²+(z+D)²)` becomes
//! `−D(2z+D)/(√… + √…)` and `(b+δ)^p − b^p` becomes `b^p expm1(p ln1p(δ/b))`.

use std::f64::consts::PI;

use crate::error::{require, Error, Result};
use crate::model::{Disk, PhysicalConstants, PowerLawParams, YukawaParams};

/// Exponents closer than this to 1 or 3 (but not equal) are rejected.
pub const POLE_EPSILON: f64 = 1e-6;

pub use crate::model::AxisProbe;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiInputs {
    /// Closest gap between sphere and disk.
    pub a: f64,
    pub sphere_radius: f64,
    pub disk: Disk,
}

impl XiInputs {
    pub fn new(a: f64, sphere_radius: f64, disk: Disk) -> Result<Self> {
        require(a.is_finite() && a > 0.0, || format!("gap must be positive, got {a}"))?;
        require(sphere_radius.is_finite() && sphere_radius > 0.0, || {
            format!("sphere radius must be positive, got {sphere_radius}")
        })?;
        Ok(Self { a, sphere_radius, disk })
    }

    /// β = D₁/R.
    pub fn beta(&self) -> f64 {
        self.disk.thickness / self.sphere_radius
    }

    /// γ = a/R.
    pub fn gamma(&self) -> f64 {
        self.a / self.sphere_radius
    }

    /// κ = R_d/R.
    pub fn kappa(&self) -> f64 {
        self.disk.radius / self.sphere_radius
    }

    fn near(&self) -> AxisProbe {
        AxisProbe { z: self.a, mass: 1.0 }
    }

    fn far(&self) -> AxisProbe {
        AxisProbe { z: self.a + 2.0 * self.sphere_radius, mass: 1.0 }
    }
}

/// Natural log of a positive ratio too large (or small) to hold directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatio {
    pub ln_value: f64,
}

impl LogRatio {
    /// The ratio itself; `inf` when it overflows.
    pub fn ratio(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// `D + √(R²+z²) − √(R²+(z+D)²)` without cancellation; `D` for an infinite disk.
fn gauss_bracket(z: f64, d: f64, rd: f64) -> f64 {
    if rd.is_infinite() {
        return d;
    }
    let s1 = rd.hypot(z);
    let s2 = rd.hypot(z + d);
    d - d * (2.0 * z + d) / (s1 + s2)
}

/// Newtonian force on an on-axis point mass:
/// `−2πGρ₁m₂{D₁ + √(R_d²+z²) − √(R_d²+(z+D₁)²)}`.
pub fn disk_gravity_force(probe: &AxisProbe, disk: &Disk, c: &PhysicalConstants) -> f64 {
    -2.0 * PI * c.g * disk.density * probe.mass * gauss_bracket(probe.z, disk.thickness, disk.radius)
}

/// ξ_g = F_g(a) / F_g(a + 2R) in terms of β, γ, κ.
pub fn xi_gravity(x: &XiInputs) -> f64 {
    let (b, g, k) = (x.beta(), x.gamma(), x.kappa());
    gauss_bracket(g, b, k) / gauss_bracket(2.0 + g, b, k)
}

/// `(b + δ)^p − b^p` for `b > 0`, `δ ≥ 0`.
fn pow_diff(b: f64, delta: f64, p: f64) -> f64 {
    b.powf(p) * (p * (delta / b).ln_1p()).exp_m1()
}

/// Force from a `−K ρ₁ m₂ / r^N` law on an on-axis point mass.
///
/// N = 1 and N = 3 use their logarithmic closed forms; exponents within
/// [`POLE_EPSILON`] of either are rejected.
pub fn disk_power_force(probe: &AxisProbe, disk: &Disk, pl: &PowerLawParams) -> Result<f64> {
    let n = pl.n;
    let (z, d, rd) = (probe.z, disk.thickness, disk.radius);
    let pref = PI * pl.k * disk.density * probe.mass;
    if n == 3.0 {
        // −(πKρm/2) ln[(z²+R_d²)(z+D)² / (z²((z+D)²+R_d²))]
        let edge = if rd.is_infinite() { 0.0 } else { (d * (2.0 * z + d) / (z * z + rd * rd)).ln_1p() };
        return Ok(-0.5 * pref * (2.0 * (d / z).ln_1p() - edge));
    }
    if n == 1.0 {
        if rd.is_infinite() {
            return Err(Error::InvalidInput("the N = 1 force of an infinite plane diverges".into()));
        }
        // (πKρm/2){(z²+R²)ln(z²+R²) − ((z+D)²+R²)ln((z+D)²+R²) + (z+D)²ln(z+D)² − z²ln z²},
        // regrouped with A(h) = R² ln(R²+h²) + h² ln(1 + R²/h²)
        let zd = z + d;
        let r2 = rd * rd;
        let diff = r2 * (d * (2.0 * z + d) / (r2 + z * z)).ln_1p() + zd * zd * (r2 / (zd * zd)).ln_1p()
            - z * z * (r2 / (z * z)).ln_1p();
        return Ok(-0.5 * pref * diff);
    }
    for pole in [1.0, 3.0] {
        if (n - pole).abs() <= POLE_EPSILON {
            return Err(Error::NearPole { n, pole, eps: POLE_EPSILON });
        }
    }
    let q = 3.0 - n;
    let plane = pow_diff(z, d, q);
    let edge = if rd.is_infinite() {
        if n < 1.0 {
            return Err(Error::InvalidInput(format!("the N = {n} force of an infinite plane diverges")));
        }
        0.0
    } else {
        -pow_diff(rd * rd + z * z, d * (2.0 * z + d), 0.5 * q)
    };
    Ok(2.0 * pref / ((n - 1.0) * (n - 3.0)) * (plane + edge))
}

/// ξ_N = F_N(a) / F_N(a + 2R).
pub fn xi_power(x: &XiInputs, n: f64) -> Result<f64> {
    let pl = PowerLawParams::new(1.0, n)?;
    let disk = Disk { density: 1.0, ..x.disk };
    Ok(disk_power_force(&x.near(), &disk, &pl)? / disk_power_force(&x.far(), &disk, &pl)?)
}

/// `ln(1 − e^{−(S−h)/λ})` with `S = √(h² + R_d²)`, the finite-radius factor of a
/// thin sheet at distance `h`; zero for an infinite disk.
fn ln_sheet_edge(h: f64, rd: f64, l: f64) -> f64 {
    if rd.is_infinite() {
        return 0.0;
    }
    let s_minus_h = rd * rd / (rd.hypot(h) + h);
    (-(-s_minus_h / l).exp_m1()).ln()
}

// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
const GL16: [(f64, f64); 8] = [
    (0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (0.617_876_244_402_643_7, 0.149_595_988_816_576_7),
    (0.755_404_408_355_003, 0.124_628_971_255_533_9),
    (0.865_631_202_387_831_8, 0.095_158_511_682_492_78),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_09),
];

/// `∫_z^{z+D} g(h) dh / e^{−z/λ}`, by panels of width at most λ (and R_d) so
/// that every panel sees a smooth integrand; the tail beyond 45λ is dropped.
fn sheet_integral(z: f64, d: f64, rd: f64, l: f64) -> f64 {
    if rd.is_infinite() {
        return l * -(-d / l).exp_m1();
    }
    let span = d.min(45.0 * l);
    let width = l.min(rd).min(span);
    let panels = (span / width).ceil().max(1.0) as usize;
    let w = span / panels as f64;
    let f = |t: f64| (-t / l + ln_sheet_edge(z + t, rd, l)).exp();
    let mut acc = crate::numeric::CompensatedSum::new();
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * w;
        let half = 0.5 * w;
        for &(x, wt) in &GL16 {
            acc.add(wt * half * (f(mid - half * x) + f(mid + half * x)));
        }
    }
    acc.value()
}

/// Yukawa potential energy of an on-axis point mass,
/// `U = −2παGρ₁m₂λ ∫_z^{z+D₁} [e^{−h/λ} − e^{−√(h²+R_d²)/λ}] dh`.
///
/// For an infinite disk this is `−2παGρ₁m₂λ² e^{−z/λ}(1 − e^{−D₁/λ})`. For a
/// finite disk the edge integral has no elementary form and is summed by
/// Gauss-Legendre panels.
pub fn disk_yukawa_potential(probe: &AxisProbe, disk: &Disk, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    let l = p.lambda;
    let (z, d) = (probe.z, disk.thickness);
    if d == 0.0 {
        return 0.0;
    }
    -2.0 * PI * p.alpha * c.g * disk.density * probe.mass * l * (-z / l).exp() * sheet_integral(z, d, disk.radius, l)
}

/// `ln[g(z) − g(z + D)] + z/λ`, the force bracket with the `e^{−z/λ}` factor removed.
fn ln_force_bracket_reduced(z: f64, disk: &Disk, l: f64) -> f64 {
    let near = ln_sheet_edge(z, disk.radius, l);
    let far = -disk.thickness / l + ln_sheet_edge(z + disk.thickness, disk.radius, l);
    near + (-(far - near).exp_m1()).ln()
}

/// `F = −∂U/∂z = −2παGρ₁m₂λ[g(z) − g(z+D₁)]` with
/// `g(h) = e^{−h/λ} − e^{−√(h²+R_d²)/λ}`.
pub fn disk_yukawa_force(probe: &AxisProbe, disk: &Disk, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    let l = p.lambda;
    let z = probe.z;
    let ln_b = ln_force_bracket_reduced(z, disk, l) - z / l;
    -2.0 * PI * p.alpha * c.g * disk.density * probe.mass * l * ln_b.exp()
}

/// ln ξ_Yu = ln[F_Yu(a) / F_Yu(a + 2R)], computed entirely in log space.
pub fn xi_yukawa(x: &XiInputs, p: &YukawaParams) -> LogRatio {
    let l = p.lambda;
    let near = ln_force_bracket_reduced(x.a, &x.disk, l);
    let far = ln_force_bracket_reduced(x.far().z, &x.disk, l);
    LogRatio { ln_value: 2.0 * x.sphere_radius / l + (near - far) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn probe(z: f64) -> AxisProbe {
        AxisProbe::new(z, 1.0).unwrap()
    }

    #[test]
    fn gravity_infinite_plane_limit() {
        let c = PhysicalConstants::default();
        let inf = Disk::new(f64::INFINITY, 3.5e-6, 2330.0).unwrap();
        let huge = Disk::new(1e6, 3.5e-6, 2330.0).unwrap();
        let expect = -2.0 * PI * c.g * 2330.0 * 3.5e-6;
        for &z in &[1e-7, 1e-5, 1e-3] {
            assert_eq!(disk_gravity_force(&probe(z), &inf, &c), expect);
            assert!(rel(disk_gravity_force(&probe(z), &huge, &c), expect) < 1e-8);
        }
        let thin = Disk::new(300e-6, 1e-30, 2330.0).unwrap();
        assert!(disk_gravity_force(&probe(1e-7), &thin, &c).abs() < 1e-35);
    }

    #[test]
    fn xi_gravity_limits() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(f64::INFINITY, 3.5e-6, 1.0).unwrap()).unwrap();
        assert_eq!(xi_gravity(&x), 1.0);
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(300e-6, 3.5e-6, 1.0).unwrap()).unwrap();
        let xi = xi_gravity(&x);
        assert!(xi > 3.0 && xi < 4.5, "xi_g = {xi}");
    }

    #[test]
    fn xi_gravity_thin_disk_limit_is_the_sheet_ratio() {
        // As β → 0 both forces vanish linearly in β; their ratio tends to the
        // ratio of thin-sheet forces 1 − h/√(h² + R_d²).
        let (g, k): (f64, f64) = (100e-9 / 150e-6, 2.0);
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(300e-6, 1e-9 * 150e-6, 1.0).unwrap()).unwrap();
        let sheet = (1.0 - g / g.hypot(k)) / (1.0 - (2.0 + g) / (2.0 + g).hypot(k));
        assert!(rel(xi_gravity(&x), sheet) < 1e-8);
    }

    #[test]
    fn power_law_n2_is_newtonian() {
        let c = PhysicalConstants::default();
        let pl = PowerLawParams::new(c.g, 2.0).unwrap();
        for &rd in &[150e-6, 300e-6, 1.0, f64::INFINITY] {
            let disk = Disk::new(rd, 3.5e-6, 2330.0).unwrap();
            for &z in &[1e-7, 3e-4] {
                let f = disk_power_force(&probe(z), &disk, &pl).unwrap();
                assert!(rel(f, disk_gravity_force(&probe(z), &disk, &c)) < 1e-13);
            }
        }
    }

    #[test]
    fn power_law_n3_infinite_plane() {
        let pl = PowerLawParams::new(1.0, 3.0).unwrap();
        let disk = Disk::new(f64::INFINITY, 3.5e-6, 1.0).unwrap();
        let z = 1e-7;
        let f = disk_power_force(&probe(z), &disk, &pl).unwrap();
        let expect = -PI * (3.5e-6f64 / z).ln_1p();
        assert!(rel(f, expect) < 1e-14);
    }

    #[test]
    fn power_law_pole_rejection() {
        let disk = Disk::new(300e-6, 3.5e-6, 1.0).unwrap();
        for &n in &[1.0 + 1e-7, 3.0 - 5e-7, 1.0 - 9e-7] {
            let pl = PowerLawParams::new(1.0, n).unwrap();
            assert!(matches!(disk_power_force(&probe(1e-7), &disk, &pl), Err(Error::NearPole { .. })));
        }
        let pl = PowerLawParams::new(1.0, 1.0 + 1e-5).unwrap();
        assert!(disk_power_force(&probe(1e-7), &disk, &pl).is_ok());
        assert!(PowerLawParams::new(1.0, -2.0).is_err());
    }

    #[test]
    fn power_law_continuous_around_special_cases() {
        let disk = Disk::new(300e-6, 3.5e-6, 1.0).unwrap();
        for &pole in &[1.0, 3.0] {
            let at = disk_power_force(&probe(1e-7), &disk, &PowerLawParams::new(1.0, pole).unwrap()).unwrap();
            for &off in &[-1e-4, 1e-4] {
                let near = disk_power_force(&probe(1e-7), &disk, &PowerLawParams::new(1.0, pole + off).unwrap()).unwrap();
                assert!(rel(near, at) < 1e-2, "pole {pole} off {off}: {near} vs {at}");
            }
        }
    }

    #[test]
    fn xi_power_gauss_law() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(1e6 * 150e-6, 3.5e-6, 1.0).unwrap()).unwrap();
        assert!((xi_power(&x, 2.0).unwrap() - 1.0).abs() <= 1e-5);
        let inf = XiInputs::new(100e-9, 150e-6, Disk::new(f64::INFINITY, 3.5e-6, 1.0).unwrap()).unwrap();
        assert_eq!(xi_power(&inf, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn xi_power_n2_matches_xi_gravity() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(300e-6, 3.5e-6, 1.0).unwrap()).unwrap();
        assert!(rel(xi_power(&x, 2.0).unwrap(), xi_gravity(&x)) < 1e-12);
    }

    #[test]
    fn xi_power_exponent_ordering_on_large_disk() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(100.0 * 150e-6, 3.5e-6, 1.0).unwrap()).unwrap();
        assert!(xi_power(&x, 1.5).unwrap() < 1.0);
        assert!(xi_power(&x, 3.0).unwrap() > 1.0);
        assert!(xi_power(&x, 4.0).unwrap() > xi_power(&x, 3.0).unwrap());
    }

    #[test]
    fn yukawa_infinite_plane_limits() {
        let c = PhysicalConstants::default();
        let p = YukawaParams::new(1.0, 1e-6).unwrap();
        let inf = Disk::new(f64::INFINITY, 3.5e-6, 2330.0).unwrap();
        let z = 1e-7;
        let u = disk_yukawa_potential(&probe(z), &inf, &p, &c);
        let slab = -2.0 * PI * c.g * 2330.0 * 1e-12 * (-0.1f64).exp() * (1.0 - (-3.5f64).exp());
        assert!(rel(u, slab) < 1e-14);
        let f = disk_yukawa_force(&probe(z), &inf, &p, &c);
        assert!(rel(f, slab / 1e-6) < 1e-14);
        let big = Disk::new(1e-3, 3.5e-6, 2330.0).unwrap();
        assert!(rel(disk_yukawa_force(&probe(z), &big, &p, &c), f) < 1e-12);
    }

    #[test]
    fn yukawa_force_is_minus_potential_gradient() {
        let c = PhysicalConstants::default();
        let p = YukawaParams::new(1.0, 100e-6).unwrap();
        let disk = Disk::new(300e-6, 3.5e-6, 2330.0).unwrap();
        let z = 100e-9;
        let h = z * 1e-3;
        let du = disk_yukawa_potential(&probe(z + h), &disk, &p, &c) - disk_yukawa_potential(&probe(z - h), &disk, &p, &c);
        let fd = -du / (2.0 * h);
        assert!(rel(disk_yukawa_force(&probe(z), &disk, &p, &c), fd) < 1e-8);
    }

    #[test]
    fn yukawa_edge_corrections_vanish_for_wide_disks() {
        // at R_d = 50λ the edge correction relative to the plane term is below e^{-45}
        let l: f64 = 1e-6;
        let rd: f64 = 50.0 * l;
        let z: f64 = 1e-7;
        let d: f64 = 3.5e-6;
        let ln_corr = -(rd.hypot(z) - z) / l;
        assert!(ln_corr < -45.0);
        let disk = Disk::new(rd, d, 1.0).unwrap();
        let plane = Disk::new(f64::INFINITY, d, 1.0).unwrap();
        assert!((ln_force_bracket_reduced(z, &disk, l) - ln_force_bracket_reduced(z, &plane, l)).abs() < (-45.0f64).exp());
    }

    #[test]
    fn yukawa_potential_tends_to_newtonian_at_long_range() {
        let c = PhysicalConstants::default();
        let p = YukawaParams::new(1.0, 1e6).unwrap();
        let disk = Disk::new(300e-6, 3.5e-6, 2330.0).unwrap();
        let f = disk_yukawa_force(&probe(100e-9), &disk, &p, &c);
        assert!(rel(f, disk_gravity_force(&probe(100e-9), &disk, &c)) < 1e-6);
    }

    #[test]
    fn yukawa_potential_zero_thickness() {
        let c = PhysicalConstants::default();
        let p = YukawaParams::new(1.0, 1e-6).unwrap();
        let disk = Disk { radius: 300e-6, thickness: 0.0, density: 2330.0 };
        assert_eq!(disk_yukawa_potential(&probe(1e-7), &disk, &p, &c), 0.0);
    }

    #[test]
    fn xi_yukawa_infinite_plane() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(f64::INFINITY, 3.5e-6, 1.0).unwrap()).unwrap();
        let p = YukawaParams::new(1.0, 0.1e-6).unwrap();
        assert!(rel(xi_yukawa(&x, &p).ln_value, 3000.0) < 1e-12);
        // long range: ln ξ = 2R/λ → 0
        let p = YukawaParams::new(1.0, 1e3).unwrap();
        let v = xi_yukawa(&x, &p).ln_value;
        assert!(rel(v, 2.0 * 150e-6 / 1e3) < 1e-9, "{v}");
    }

    #[test]
    fn xi_yukawa_tends_to_xi_gravity_at_long_range() {
        let x = XiInputs::new(100e-9, 150e-6, Disk::new(300e-6, 3.5e-6, 1.0).unwrap()).unwrap();
        let p = YukawaParams::new(1.0, 1e4).unwrap();
        let (y, g) = (xi_yukawa(&x, &p).ln_value, xi_gravity(&x).ln());
        assert!((y - g).abs() < 1e-6, "{y} {g}");
    }

    #[test]
    fn xi_yukawa_insensitive_to_disk_size_at_short_range() {
        let l = 1e-6;
        let p = YukawaParams::new(1.0, l).unwrap();
        let r = 150e-6;
        let x2 = XiInputs::new(100e-9, r, Disk::new(2.0 * r, 3.5e-6, 1.0).unwrap()).unwrap();
        let x100 = XiInputs::new(100e-9, r, Disk::new(100.0 * r, 3.5e-6, 1.0).unwrap()).unwrap();
        let d = (xi_yukawa(&x2, &p).ln_value - xi_yukawa(&x100, &p).ln_value).abs();
        assert!(d / (2.0 * r / l) <= 1e-6);
    }
}
