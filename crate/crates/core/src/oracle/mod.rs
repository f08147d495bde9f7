//! Brute-force quadrature of the point-pair kernels over the bodies used by
//! the closed forms. Nothing here calls into the force modules; the only
//! shared code is the value types in [`crate::model`].

pub mod quad;

use std::f64::consts::PI;

use crate::error::{invalid, require, Result};
use crate::model::{AxisProbe, Disk, LayeredConfig, LayeredSlab, PhysicalConstants, PowerLawParams, SphereSlabConfig, Thickness, YukawaParams};

pub use quad::{OracleReport, QuadratureSpec};
use quad::{geometric_points, geometric_points_rev, integrate, integrate_nested, integrate_to_infinity};

/// Sheet-to-sheet Yukawa pressure per unit areal densities at distance `h`:
/// `∂/∂h ∫ 2πr dr (-αG e^{-s/λ}/s)`, i.e. `-2παG e^{-h/λ}`.
fn sheet_pressure(h: f64, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    -2.0 * PI * p.alpha * c.g * (-h / p.lambda).exp()
}

/// Integrates over a depth `[0, t)` that may be infinite, clustering points
/// near zero on the scale `h`.
fn integrate_depth<F: FnMut(f64) -> f64>(f: F, t: Thickness, h: f64, spec: &QuadratureSpec) -> OracleReport {
    match t {
        Thickness::Finite(d) => integrate(f, &geometric_points(0.0, d, h), spec),
        Thickness::Infinite => integrate_to_infinity(f, 0.0, h, &[0.5, 0.75, 0.9, 0.99], spec),
    }
}

/// Pressure between two laterally infinite slabs a distance `a` apart,
/// integrated sheet by sheet over both thicknesses.
#[allow(clippy::too_many_arguments)]
pub fn oracle_slab_slab_pressure(
    a: f64,
    d1: Thickness,
    rho1: f64,
    d2: Thickness,
    rho2: f64,
    p: &YukawaParams,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> Result<OracleReport> {
    require(a.is_finite() && a > 0.0, || format!("separation must be positive, got {a}"))?;
    if rho1 == 0.0 || rho2 == 0.0 {
        return Ok(OracleReport::zero());
    }
    let l = p.lambda;
    let outer = |x: f64, s: &QuadratureSpec| integrate_depth(|y| sheet_pressure(a + x + y, p, c), d2, l, s);
    let r = match d1 {
        Thickness::Finite(d) => integrate_nested(outer, &geometric_points(0.0, d, l), q),
        Thickness::Infinite => {
            let inner_spec = q.with_rel_tol(q.rel_tol / 4.0);
            let mut worst: f64 = 0.0;
            let mut ok = true;
            let r = integrate_to_infinity(
                |x| {
                    let r = outer(x, &inner_spec);
                    ok &= r.converged;
                    if r.value != 0.0 {
                        worst = worst.max(r.error_estimate / r.value.abs());
                    }
                    r.value
                },
                0.0,
                l,
                &[0.5, 0.75, 0.9, 0.99],
                &q.with_rel_tol(q.rel_tol / 2.0),
            );
            let err = r.error_estimate + worst * r.value.abs();
            OracleReport { error_estimate: err, converged: r.converged && ok && err <= q.rel_tol * r.value.abs(), ..r }
        }
    };
    Ok(r.scaled(rho1 * rho2))
}

/// Yukawa potential per unit mass at height `z` above a layered slab, from a
/// two-dimensional integral of `-αG e^{-s/λ}/s` over depth and radius.
pub fn oracle_layered_slab_potential(
    z: f64,
    slab: &LayeredSlab,
    p: &YukawaParams,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> Result<OracleReport> {
    require(z.is_finite() && z > 0.0, || format!("height must be positive, got {z}"))?;
    let l = p.lambda;
    let layers = slab.layers_from_top();
    let mut total = OracleReport::zero();
    let mut depth = 0.0;
    for layer in layers {
        if layer.thickness == 0.0 {
            continue;
        }
        let top = depth;
        depth += layer.thickness;
        if layer.density == 0.0 {
            continue;
        }
        let sheet = |x: f64, s: &QuadratureSpec| {
            let h = z + top + x;
            let scale = (l * (h + l)).sqrt();
            integrate_to_infinity(
                |r| {
                    let s = h.hypot(r);
                    2.0 * PI * r * (-s / l).exp() / s
                },
                0.0,
                scale,
                &[0.25, 0.5, 0.75, 0.9],
                s,
            )
        };
        let r = integrate_nested(sheet, &geometric_points(0.0, layer.thickness, l), q);
        total = total.plus(&r.scaled(-p.alpha * c.g * layer.density));
    }
    Ok(total)
}

/// Energy and force of a sphere above an infinite slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSlabOracle {
    pub energy: OracleReport,
    pub force: OracleReport,
}

/// `-2παGρ₁λ²(1 - e^{-D₁/λ})`, the slab potential per unit mass at zero height.
fn slab_potential_prefactor(cfg: &SphereSlabConfig, p: &YukawaParams, c: &PhysicalConstants) -> f64 {
    let l = p.lambda;
    -2.0 * PI * p.alpha * c.g * cfg.slab_density * l * l * -(-cfg.slab_thickness / l).exp_m1()
}

/// Sphere-slab Yukawa energy from horizontal slices of the sphere, each slice
/// of area `π x (2R - x)` at height `a + x` sitting in the slab potential.
/// The force is `U/λ` since `U ∝ e^{-a/λ}`.
pub fn oracle_sphere_slab_yukawa(
    cfg: &SphereSlabConfig,
    p: &YukawaParams,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> SphereSlabOracle {
    let energy = horizontal_slices(cfg, p, c, q);
    SphereSlabOracle { energy, force: energy.scaled(1.0 / p.lambda) }
}

fn horizontal_slices(cfg: &SphereSlabConfig, p: &YukawaParams, c: &PhysicalConstants, q: &QuadratureSpec) -> OracleReport {
    if cfg.sphere_density == 0.0 || cfg.slab_density == 0.0 {
        return OracleReport::zero();
    }
    let l = p.lambda;
    let r = cfg.sphere_radius;
    let v0 = slab_potential_prefactor(cfg, p, c);
    let body = integrate(|x| (-x / l).exp() * PI * x * (2.0 * r - x), &geometric_points(0.0, 2.0 * r, l), q);
    body.scaled(cfg.sphere_density * v0 * (-cfg.separation / l).exp())
}

/// The same energy computed two ways: horizontal slices, and vertical
/// columns over the sphere's shadow, each column's energy being the slab
/// potential integrated along it.
pub fn oracle_slicing_equivalence(
    cfg: &SphereSlabConfig,
    p: &YukawaParams,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> (OracleReport, OracleReport) {
    let horizontal = horizontal_slices(cfg, p, c, q);
    if cfg.sphere_density == 0.0 || cfg.slab_density == 0.0 {
        return (horizontal, OracleReport::zero());
    }
    let l = p.lambda;
    let r = cfg.sphere_radius;
    let v0 = slab_potential_prefactor(cfg, p, c);
    // column at lateral distance ρ spans heights a + w .. a + 2R - w with
    // w = R - √(R² - ρ²); ρ dρ = (R - w) dw
    let column = |w: f64| l * (-w / l).exp() * -(-(2.0 * r - 2.0 * w) / l).exp_m1();
    let cols = integrate(|w| 2.0 * PI * (r - w) * column(w), &geometric_points(0.0, r, l), q);
    (horizontal, cols.scaled(cfg.sphere_density * v0 * (-cfg.separation / l).exp()))
}

/// EPFA-sense energy of a layered sphere above a layered slab: the layered
/// slab potential integrated over the sphere, shell by shell.
///
/// A shell of radius `r` whose lowest point sits at height `h₀` contributes
/// `2πr ∫₀^{2r} V(h₀ + v) dv` per unit thickness and density.
pub fn oracle_layered_sphere_energy(
    cfg: &LayeredConfig,
    p: &YukawaParams,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> OracleReport {
    let l = p.lambda;
    let s = &cfg.sphere;
    let r_out = s.core_radius + s.inner_coat.thickness + s.outer_coat.thickness;
    // slab potential per unit mass at height z
    let mut slab_terms = Vec::new();
    let mut depth = 0.0;
    for layer in cfg.slab.layers_from_top() {
        if layer.thickness > 0.0 {
            slab_terms.push((depth, layer.thickness, layer.density));
            depth += layer.thickness;
        }
    }
    let v = |z: f64| -> f64 {
        slab_terms
            .iter()
            .map(|&(d, t, rho)| rho * (-(z + d) / l).exp() * -(-t / l).exp_m1())
            .sum::<f64>()
            * (-2.0 * PI * p.alpha * c.g * l * l)
    };
    let shells = [
        (0.0, s.core_radius, s.core_density),
        (s.core_radius, s.core_radius + s.inner_coat.thickness, s.inner_coat.density),
        (s.core_radius + s.inner_coat.thickness, r_out, s.outer_coat.density),
    ];
    let mut total = OracleReport::zero();
    for (r_in, r_hi, rho) in shells {
        if r_hi <= r_in || rho == 0.0 {
            continue;
        }
        let shell = |r: f64, sp: &QuadratureSpec| {
            let h0 = cfg.separation + r_out - r;
            integrate(|v_| v(h0 + v_), &geometric_points(0.0, 2.0 * r, l), sp).scaled(2.0 * PI * r)
        };
        let rep = integrate_nested(shell, &geometric_points_rev(r_in, r_hi, l), q);
        total = total.plus(&rep.scaled(rho));
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interaction {
    Newton,
    Yukawa(YukawaParams),
}

/// Exact and EPFA forces between two homogeneous spheres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSphereOracle {
    pub exact: OracleReport,
    pub epfa: OracleReport,
}

/// Two spheres of radii `r1`, `r2` with centres `center_distance` apart.
///
/// Exact: for Newton the point-mass result `-G M₁ M₂ / d²`; for Yukawa each
/// sphere is integrated over concentric shells, whose external field is that
/// of a point of weight `4πr² sinh(r/λ)/(r/λ)`. EPFA: the slab-slab pressure
/// of the two facing columns, summed over the shadow of the smaller sphere.
#[allow(clippy::too_many_arguments)]
pub fn oracle_two_spheres(
    r1: f64,
    r2: f64,
    center_distance: f64,
    rho1: f64,
    rho2: f64,
    interaction: Interaction,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> Result<TwoSphereOracle> {
    require(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite(), || "radii must be positive".to_string())?;
    require(center_distance.is_finite() && center_distance > r1 + r2, || {
        format!("spheres overlap: d = {center_distance} <= {}", r1 + r2)
    })?;
    let d = center_distance;
    let exact = match interaction {
        Interaction::Newton => {
            let m1 = 4.0 / 3.0 * PI * r1.powi(3) * rho1;
            let m2 = 4.0 / 3.0 * PI * r2.powi(3) * rho2;
            OracleReport { value: -c.g * m1 * m2 / (d * d), ..OracleReport::zero() }
        }
        Interaction::Yukawa(p) => {
            let l = p.lambda;
            // ∫ 4πr² sinh(r/λ)/(r/λ) e^{-R/λ} dr
            let weight = |big_r: f64| {
                integrate(
                    |r| {
                        let x = r / l;
                        let sh = 0.5 * ((x - big_r / l).exp() - (-x - big_r / l).exp());
                        if x == 0.0 {
                            4.0 * PI * r * r * (-big_r / l).exp()
                        } else {
                            4.0 * PI * r * r * sh / x
                        }
                    },
                    &geometric_points_rev(0.0, big_r, l),
                    &q.with_rel_tol(q.rel_tol / 4.0),
                )
            };
            let j1 = weight(r1);
            let j2 = weight(r2);
            let gap = d - r1 - r2;
            let k = -p.alpha * c.g * rho1 * rho2 * (-gap / l).exp() / d * (1.0 / l + 1.0 / d);
            OracleReport {
                value: k * j1.value * j2.value,
                error_estimate: (k * j1.value * j2.value).abs()
                    * (j1.error_estimate / j1.value.abs() + j2.error_estimate / j2.value.abs()),
                subdivisions_used: j1.subdivisions_used + j2.subdivisions_used,
                converged: j1.converged && j2.converged,
            }
        }
    };
    let rs = r1.min(r2);
    let pressure = |gap: f64, t1: f64, t2: f64| -> f64 {
        match interaction {
            Interaction::Newton => -2.0 * PI * c.g * rho1 * rho2 * t1 * t2,
            Interaction::Yukawa(p) => {
                let l = p.lambda;
                -2.0 * PI * p.alpha * c.g * rho1 * rho2 * l * l
                    * (-gap / l).exp()
                    * -(-t1 / l).exp_m1()
                    * -(-t2 / l).exp_m1()
            }
        }
    };
    // ρ = R_s sin θ
    let column = |theta: f64| {
        let rho = rs * theta.sin();
        let h1 = (r1 * r1 - rho * rho).max(0.0).sqrt();
        let h2 = (r2 * r2 - rho * rho).max(0.0).sqrt();
        2.0 * PI * rho * rs * theta.cos() * pressure(d - h1 - h2, 2.0 * h1, 2.0 * h2)
    };
    let scale = match interaction {
        Interaction::Newton => 0.5,
        Interaction::Yukawa(p) => (p.lambda * rs).sqrt() / rs,
    };
    let epfa = integrate(column, &geometric_points(0.0, 0.5 * PI, scale.min(0.5)), q);
    Ok(TwoSphereOracle { exact, epfa })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskKernel {
    /// Axial Newtonian force.
    Newton,
    /// Axial force of a `K/r^N` law.
    Power(PowerLawParams),
    /// Yukawa potential energy.
    Yukawa(YukawaParams),
    /// Axial Yukawa force.
    YukawaForce(YukawaParams),
}

/// Two-dimensional quadrature in depth and radius of the chosen kernel over
/// a disk, for a point mass on its axis.
pub fn oracle_disk_point(
    probe: &AxisProbe,
    disk: &Disk,
    kernel: DiskKernel,
    c: &PhysicalConstants,
    q: &QuadratureSpec,
) -> Result<OracleReport> {
    let z = probe.z;
    require(z.is_finite() && z > 0.0, || format!("probe height must be positive, got {z}"))?;
    if let DiskKernel::Power(pl) = kernel {
        if disk.radius.is_infinite() && pl.n <= 1.0 {
            return invalid(format!("the N = {} force of an infinite plane diverges", pl.n));
        }
    }
    let (coupling, lambda) = match kernel {
        DiskKernel::Newton => (c.g, None),
        DiskKernel::Power(pl) => (pl.k, None),
        DiskKernel::Yukawa(p) | DiskKernel::YukawaForce(p) => (p.alpha * c.g, Some(p.lambda)),
    };
    // integrand per unit (coupling ρ m) at axial distance h and radius r
    let k = move |h: f64, r: f64| -> f64 {
        let s = h.hypot(r);
        let v = match kernel {
            DiskKernel::Newton => h / (s * s * s),
            DiskKernel::Power(pl) => h / s.powf(pl.n + 1.0),
            DiskKernel::Yukawa(p) => (-s / p.lambda).exp() / s,
            DiskKernel::YukawaForce(p) => h * (1.0 / p.lambda + 1.0 / s) * (-s / p.lambda).exp() / (s * s),
        };
        2.0 * PI * r * v
    };
    let sheet = |x: f64, sp: &QuadratureSpec| {
        let h = z + x;
        let scale = match lambda {
            Some(l) => (l * (h + l)).sqrt().min(h),
            None => h,
        };
        if disk.radius.is_infinite() {
            integrate_to_infinity(|r| k(h, r), 0.0, scale, &[0.25, 0.5, 0.75, 0.9, 0.99], sp)
        } else {
            integrate(|r| k(h, r), &geometric_points(0.0, disk.radius, scale), sp)
        }
    };
    let depth_scale = match lambda {
        Some(l) => l.min(z),
        None => z,
    };
    let r = integrate_nested(sheet, &geometric_points(0.0, disk.thickness, depth_scale), q);
    Ok(r.scaled(-coupling * disk.density * probe.mass))
}
