//! Homogeneous-body Yukawa forces: point pair, slab-slab pressure, the exact
//! sphere-slab force, its proximity-force (PFA) counterpart and their ratio η.
//!
//! The exact sphere-slab force coincides with the surface-element (EPFA) sum
//! because the slab potential is translationally invariant in the plane.

use std::f64::consts::PI;

use crate::error::{require, Result};
use crate::model::{ForceValue, PhysicalConstants, ResonatorParams, Thickness, YukawaParams};
use crate::numeric::{one_minus_exp_neg, shape_factor, Regime};

pub use crate::model::SphereSlabConfig;

/// EPFA/PFA force ratio and the branch that evaluated the sphere factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaResult {
    pub eta: f64,
    pub regime: Regime,
}

/// `U = -α G m₁ m₂ e^{-r/λ} / r`.
pub fn yukawa_pair_energy(m1: f64, m2: f64, r: f64, p: &YukawaParams, c: &PhysicalConstants) -> Result<f64> {
    require(r.is_finite() && r > 0.0, || format!("distance must be positive, got {r}"))?;
    Ok(-p.alpha * c.g * m1 * m2 * (-r / p.lambda).exp() / r)
}

fn check_gap(a: f64) -> Result<()> {
    require(a.is_finite() && a > 0.0, || format!("separation must be positive, got {a}"))
}

fn thickness_factor(d: Thickness, lambda: f64) -> f64 {
    match d {
        Thickness::Infinite => 1.0,
        Thickness::Finite(d) => one_minus_exp_neg(d / lambda),
    }
}

/// Pressure between two parallel slabs a distance `a` apart.
///
/// `P = -2π α G ρ₁ ρ₂ λ² e^{-a/λ} (1 - e^{-D₁/λ})(1 - e^{-D₂/λ})`.
pub fn slab_slab_pressure(
    a: f64,
    d1: Thickness,
    rho1: f64,
    d2: Thickness,
    rho2: f64,
    p: &YukawaParams,
    c: &PhysicalConstants,
) -> Result<f64> {
    check_gap(a)?;
    Ok(slab_slab_pressure_scaled(a, d1, rho1, d2, rho2, p, c).value())
}

pub fn slab_slab_pressure_scaled(
    a: f64,
    d1: Thickness,
    rho1: f64,
    d2: Thickness,
    rho2: f64,
    p: &YukawaParams,
    c: &PhysicalConstants,
) -> ForceValue {
    let l = p.lambda;
    let m = -2.0 * PI * p.alpha * c.g * rho1 * rho2 * l * l * thickness_factor(d1, l) * thickness_factor(d2, l);
    ForceValue::new(m, -a / l)
}

/// Energy per unit area between two parallel slabs; `-∂E/∂a` is [`slab_slab_pressure`].
pub fn slab_slab_energy_per_area(
    a: f64,
    d1: Thickness,
    rho1: f64,
    d2: Thickness,
    rho2: f64,
    p: &YukawaParams,
    c: &PhysicalConstants,
) -> Result<f64> {
    check_gap(a)?;
    Ok(slab_slab_pressure_scaled(a, d1, rho1, d2, rho2, p, c).value() * p.lambda)
}

/// Exact (equivalently EPFA) force between a homogeneous sphere and a homogeneous slab.
pub fn sphere_slab_force_exact(cfg: &SphereSlabConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    sphere_slab_force_exact_scaled(cfg, p, c).value()
}

/// `-4π² α G ρ₁ ρ₂ λ³ R e^{-a/λ} (1 - e^{-D₁/λ}) Φ(2R/λ)`, with `e^{-a/λ}` kept as `ln_scale`.
pub fn sphere_slab_force_exact_scaled(cfg: &SphereSlabConfig, p: &YukawaParams, c: &PhysicalConstants) -> ForceValue {
    let l = p.lambda;
    let (phi, _) = shape_factor(2.0 * cfg.sphere_radius / l);
    ForceValue::new(
        common_prefactor(cfg, p, c) * phi,
        -cfg.separation / l,
    )
}

fn common_prefactor(cfg: &SphereSlabConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    let l = p.lambda;
    -4.0 * PI * PI
        * p.alpha
        * c.g
        * cfg.slab_density
        * cfg.sphere_density
        * l.powi(3)
        * cfg.sphere_radius
        * one_minus_exp_neg(cfg.slab_thickness / l)
}

/// Proximity-force approximation `2πR P(a)` with a fictitious upper slab of thickness `d2`.
pub fn sphere_slab_force_pfa(cfg: &SphereSlabConfig, d2: Thickness, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    sphere_slab_force_pfa_scaled(cfg, d2, p, c).value()
}

pub fn sphere_slab_force_pfa_scaled(
    cfg: &SphereSlabConfig,
    d2: Thickness,
    p: &YukawaParams,
    c: &PhysicalConstants,
) -> ForceValue {
    ForceValue::new(
        common_prefactor(cfg, p, c) * thickness_factor(d2, p.lambda),
        -cfg.separation / p.lambda,
    )
}

/// η = F_EPFA / F_PFA = Φ(2R/λ) / (1 - e^{-D₂/λ}); independent of the gap.
pub fn eta(radius: f64, d2: Thickness, lambda: f64) -> Result<EtaResult> {
    require(radius.is_finite() && radius > 0.0, || format!("radius must be positive, got {radius}"))?;
    require(lambda.is_finite() && lambda > 0.0, || format!("lambda must be positive, got {lambda}"))?;
    let (phi, regime) = shape_factor(2.0 * radius / lambda);
    Ok(EtaResult { eta: phi / thickness_factor(d2, lambda), regime })
}

/// Sphere-plane force from the parallel-plate energy per unit area: `2π R̄ E_pp`.
pub fn pfa_force_from_energy(e_pp: f64, r_bar: f64) -> Result<f64> {
    require(r_bar.is_finite() && r_bar > 0.0, || format!("effective radius must be positive, got {r_bar}"))?;
    Ok(2.0 * PI * r_bar * e_pp)
}

/// Plane-plane pressure inferred from a resonator frequency shift,
/// inverting `Δν² = R̄ P_pp / (2π m)`.
pub fn pressure_from_frequency_shift(delta_nu_sq: f64, res: &ResonatorParams) -> f64 {
    let r_bar = crate::model::effective_radius(&res.curvature);
    2.0 * PI * res.mass * delta_nu_sq / r_bar
}

pub fn frequency_shift_from_pressure(pressure: f64, res: &ResonatorParams) -> f64 {
    let r_bar = crate::model::effective_radius(&res.curvature);
    r_bar * pressure / (2.0 * PI * res.mass)
}
