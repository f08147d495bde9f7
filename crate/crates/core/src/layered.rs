//! Multilayer sphere-slab Yukawa model: a coated sphere (core plus two
//! coatings) above a coated, laterally infinite slab.
//!
//! The EPFA energy is obtained by integrating the layered-slab potential over
//! spherical shells. Each shell contributes
//! `∫ 4π r λ sinh(r/λ) e^{-(c - …)/λ} dr ∝ ψ(r_out/λ) − ψ(r_in/λ)` with
//! `ψ(x) = x cosh x − sinh x`; the exponentials are handled in log space so
//! that thin coatings at λ ≪ Δ neither overflow nor underflow.

use std::f64::consts::PI;

use crate::error::{require, Result};
use crate::model::{ForceValue, Layer, LayeredSlab, LayeredSphere, PhysicalConstants, Thickness, YukawaParams};
use crate::numeric::{ln_nonneg, ln_one_minus_exp_neg, one_minus_exp_neg, shape_factor, LogSum};
use crate::yukawa;

pub use crate::model::LayeredConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaDeltaResult {
    pub eta_delta: f64,
    /// Homogeneous η for a sphere of radius R + Δ′₂ + Δ″₂.
    pub eta_homogeneous: f64,
    /// `eta_delta / eta_homogeneous`.
    pub ratio: f64,
}

/// `ln` of the slab's effective density
/// `ρ″₁(1−e^{−Δ″₁/λ}) + ρ′₁e^{−Δ″₁/λ}(1−e^{−Δ′₁/λ}) + ρ₁e^{−(Δ″₁+Δ′₁)/λ}(1−e^{−D₁/λ})`.
fn ln_slab_weight(slab: &LayeredSlab, lambda: f64) -> f64 {
    let mut sum = LogSum::new();
    let mut depth = 0.0;
    for layer in slab.layers_from_top() {
        if !layer.is_absent() {
            sum.push_ln_product(&[
                ln_nonneg(layer.density),
                -depth / lambda,
                ln_one_minus_exp_neg(layer.thickness / lambda),
            ]);
            depth += layer.thickness;
        }
    }
    sum.ln_value().1
}

/// Yukawa potential per unit test mass at height `z` above the slab's top surface.
pub fn layered_slab_potential(z: f64, slab: &LayeredSlab, p: &YukawaParams, c: &PhysicalConstants) -> Result<f64> {
    require(z.is_finite() && z > 0.0, || format!("height above slab must be positive, got {z}"))?;
    let l = p.lambda;
    Ok(-2.0 * PI * p.alpha * c.g * l * l * (ln_slab_weight(slab, l) - z / l).exp())
}

/// `ln[e^{-R_out/λ} ψ(r/λ)]` for the radius `r` lying `depth` below the outer
/// surface, evaluated as `-depth/λ + ln(x Φ(2x) / 2)` with `x = r/λ`, since
/// `e^{-x} ψ(x) = x Φ(2x) / 2`. Depths are passed separately so that thin
/// coatings do not lose digits to `R_out - r`.
fn ln_shell_weight(r: f64, depth: f64, lambda: f64) -> f64 {
    if r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let x = r / lambda;
    let (phi, _) = shape_factor(2.0 * x);
    -depth / lambda + (0.5 * x * phi).ln()
}

/// `ln Σ_k ρ_k e^{-R_out/λ}[ψ(r_k,out/λ) − ψ(r_k,in/λ)]` over the three shells.
fn ln_sphere_weight(sphere: &LayeredSphere, lambda: f64) -> f64 {
    let r_out = sphere.outer_radius();
    let t_out = sphere.outer_coat.thickness;
    let t_in = sphere.inner_coat.thickness;
    // (depth of outer face, depth of inner face, density); the core's inner face is the centre
    let shells = [
        (0.0, t_out, sphere.outer_coat.density),
        (t_out, t_out + t_in, sphere.inner_coat.density),
        (t_out + t_in, r_out, sphere.core_density),
    ];
    let mut sum = LogSum::new();
    for (i, &(d_hi, d_lo, rho)) in shells.iter().enumerate() {
        if d_hi == d_lo || rho == 0.0 {
            continue;
        }
        let r_hi = if i == 2 { sphere.core_radius } else { r_out - d_hi };
        let hi = ln_shell_weight(r_hi, d_hi, lambda);
        let ln_bracket = if i == 2 {
            hi
        } else {
            let lo = ln_shell_weight(r_out - d_lo, d_lo, lambda);
            hi + (-(lo - hi).exp_m1()).ln()
        };
        sum.push_ln_product(&[rho.ln(), ln_bracket]);
    }
    sum.ln_value().1
}

/// EPFA (exact) interaction energy between the layered sphere and layered slab.
pub fn layered_epfa_energy(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    layered_epfa_energy_scaled(cfg, p, c).value()
}

/// Energy as `mantissa · e^{-a/λ}`.
pub fn layered_epfa_energy_scaled(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> ForceValue {
    let l = p.lambda;
    let ln_weights = ln_slab_weight(&cfg.slab, l) + ln_sphere_weight(&cfg.sphere, l);
    let mantissa = -8.0 * PI * PI * p.alpha * c.g * l.powi(5) * ln_weights.exp();
    ForceValue::new(mantissa, -cfg.separation / l)
}

/// `F = -∂U/∂a = U/λ`.
pub fn layered_epfa_force(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    layered_epfa_force_scaled(cfg, p, c).value()
}

pub fn layered_epfa_force_scaled(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> ForceValue {
    let u = layered_epfa_energy_scaled(cfg, p, c);
    u.scaled(1.0 / p.lambda)
}

/// The metaphysical upper slab: the sphere's coatings laid flat on a core slab
/// of thickness D₂, ordered from the gap upwards as (offset, thickness, density).
pub(crate) fn metaphysical_layers(cfg: &LayeredConfig) -> [(f64, Thickness, f64); 3] {
    let s = &cfg.sphere;
    let outer = s.outer_coat.thickness;
    let inner = s.inner_coat.thickness;
    [
        (0.0, Thickness::Finite(outer), s.outer_coat.density),
        (outer, Thickness::Finite(inner), s.inner_coat.density),
        (outer + inner, cfg.d2, s.core_density),
    ]
}

/// Slab layers from the top as (offset below the surface, thickness, density).
pub(crate) fn slab_layers(slab: &LayeredSlab) -> [(f64, Thickness, f64); 3] {
    let [top, middle, base]: [Layer; 3] = slab.layers_from_top();
    [
        (0.0, Thickness::Finite(top.thickness), top.density),
        (top.thickness, Thickness::Finite(middle.thickness), middle.density),
        (top.thickness + middle.thickness, Thickness::Finite(base.thickness), base.density),
    ]
}

fn factor(t: Thickness, lambda: f64) -> f64 {
    match t {
        Thickness::Infinite => 1.0,
        Thickness::Finite(d) => one_minus_exp_neg(d / lambda),
    }
}

fn ln_factor(t: Thickness, lambda: f64) -> f64 {
    match t {
        Thickness::Infinite => 0.0,
        Thickness::Finite(0.0) => f64::NEG_INFINITY,
        Thickness::Finite(d) => ln_one_minus_exp_neg(d / lambda),
    }
}

/// The nine layer-pair pressures `P[i][j]`, `i` over slab layers (top, middle,
/// base) and `j` over metaphysical layers (outer coat, inner coat, core).
pub fn layered_pfa_terms(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> [[f64; 3]; 3] {
    let l = p.lambda;
    let mut out = [[0.0; 3]; 3];
    for (i, &(off1, t1, rho1)) in slab_layers(&cfg.slab).iter().enumerate() {
        for (j, &(off2, t2, rho2)) in metaphysical_layers(cfg).iter().enumerate() {
            let absent = matches!(t1, Thickness::Finite(d) if d == 0.0) || matches!(t2, Thickness::Finite(d) if d == 0.0);
            if absent {
                continue;
            }
            let gap = cfg.separation + off1 + off2;
            out[i][j] = -2.0 * PI * p.alpha * c.g * rho1 * rho2 * l * l * (-gap / l).exp() * factor(t1, l) * factor(t2, l);
        }
    }
    out
}

/// PFA force `2πR P_Δ(a)` between the layered bodies.
pub fn layered_pfa_force(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    layered_pfa_force_scaled(cfg, p, c).value()
}

pub fn layered_pfa_force_scaled(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> ForceValue {
    let l = p.lambda;
    let mut sum = LogSum::new();
    for &(off1, t1, rho1) in &slab_layers(&cfg.slab) {
        for &(off2, t2, rho2) in &metaphysical_layers(cfg) {
            sum.push_ln_product(&[
                ln_nonneg(rho1),
                ln_nonneg(rho2),
                -(off1 + off2) / l,
                ln_factor(t1, l),
                ln_factor(t2, l),
            ]);
        }
    }
    let mantissa = -4.0 * PI * PI * p.alpha * c.g * l.powi(3) * cfg.sphere.core_radius * sum.value();
    ForceValue::new(mantissa, -cfg.separation / l)
}

/// η_Δ = F_EPFA / F_PFA for the layered bodies, with the homogeneous comparator
/// evaluated at the merged radius R + Δ′₂ + Δ″₂.
pub fn eta_delta(cfg: &LayeredConfig, p: &YukawaParams, c: &PhysicalConstants) -> Result<EtaDeltaResult> {
    let epfa = layered_epfa_force_scaled(cfg, p, c);
    let pfa = layered_pfa_force_scaled(cfg, p, c);
    if epfa.is_zero() || pfa.is_zero() {
        return Err(crate::Error::Degenerate("layered force vanishes; η_Δ undefined".into()));
    }
    let eta_delta = epfa.ratio(&pfa);
    let eta_homogeneous = yukawa::eta(cfg.sphere.outer_radius(), cfg.d2, p.lambda)?.eta;
    Ok(EtaDeltaResult { eta_delta, eta_homogeneous, ratio: eta_delta / eta_homogeneous })
}
