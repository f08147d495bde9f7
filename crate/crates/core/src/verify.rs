//! Closed forms versus the quadrature oracle on a fixed grid of gaps, ranges
//! and geometry scales.

use std::f64::consts::PI;

use crate::disk::{self, XiInputs};
use crate::error::{require, Result};
use crate::layered::{self, LayeredConfig};
use crate::model::{AxisProbe, Disk, Layer, LayeredSlab, LayeredSphere, PhysicalConstants, PowerLawParams, Thickness, YukawaParams};
use crate::oracle::{self, DiskKernel, Interaction, QuadratureSpec};
use crate::yukawa::{self, SphereSlabConfig};

pub const GAPS: [f64; 3] = [50e-9, 200e-9, 1e-6];
pub const LAMBDAS: [f64; 3] = [20e-9, 200e-9, 2e-6];
pub const SCALES: [f64; 3] = [0.5, 1.0, 2.0];
pub const POWERS: [f64; 4] = [1.0, 1.5, 3.0, 4.0];

/// Tolerance of the checks without a tighter per-operation requirement.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Tolerance of the checks whose operations state 1e-8.
pub const STRICT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub quadrature: QuadratureSpec,
    /// Replaces every per-check tolerance when set.
    pub tolerance_override: Option<f64>,
    /// Multiplies G on the closed-form side only; 1 except in failure-path tests.
    pub closed_form_g_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { quadrature: QuadratureSpec::default(), tolerance_override: None, closed_form_g_scale: 1.0 }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance_override {
            require(t.is_finite() && t > 0.0, || format!("tolerance must be positive, got {t}"))?;
            require(t >= self.quadrature.rel_tol, || {
                format!(
                    "tolerance {t:e} is tighter than the oracle's rel_tol {:e} and cannot be verified",
                    self.quadrature.rel_tol
                )
            })?;
        }
        require(self.closed_form_g_scale.is_finite() && self.closed_form_g_scale > 0.0, || {
            format!("closed_form_g_scale must be positive, got {}", self.closed_form_g_scale)
        })
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance_override.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub passed: bool,
}

impl CheckResult {
    fn compare(name: String, closed_form: f64, oracle: f64, converged: bool, tolerance: f64) -> Self {
        let rel_error = if oracle == 0.0 {
            if closed_form == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            ((closed_form - oracle) / oracle).abs()
        };
        let passed = converged && rel_error <= tolerance;
        Self { name, closed_form, oracle, rel_error, tolerance, converged, passed }
    }
}

/// Bodies at geometry scale `s`: every length of the reference setup times `s`.
struct Bodies {
    sphere_slab: SphereSlabConfig,
    layered: LayeredConfig,
    disk: Disk,
    sphere_radius: f64,
}

fn bodies(a: f64, s: f64) -> Result<Bodies> {
    let r = 150e-6 * s;
    let sphere = LayeredSphere::new(r, 4100.0, Layer::new(10e-9 * s, 7140.0)?, Layer::new(180e-9 * s, 19280.0)?)?;
    let slab = LayeredSlab::new(
        Layer::new(3.5e-6 * s, 2330.0)?,
        Layer::new(10e-9 * s, 7140.0)?,
        Layer::new(210e-9 * s, 19280.0)?,
    )?;
    Ok(Bodies {
        sphere_slab: SphereSlabConfig::new(a, r, 19280.0, 3.5e-6 * s, 2330.0)?,
        layered: LayeredConfig::new(a, sphere, slab, Thickness::Finite(1e-3 * s))?,
        disk: Disk::new(2.0 * r, 3.5e-6 * s, 2330.0)?,
        sphere_radius: r,
    })
}

fn tag(a: f64, lambda: Option<f64>, s: f64) -> String {
    match lambda {
        Some(l) => format!("a={a:e};lambda={l:e};scale={s}"),
        None => format!("a={a:e};scale={s}"),
    }
}

/// The full suite: every closed form on the grid, slicing equivalence at five
/// configurations, and the two-sphere counterexample.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    opts.validate()?;
    let mut out = Vec::new();
    for &a in &GAPS {
        for &s in &SCALES {
            out.extend(static_checks(a, s, opts)?);
            for &l in &LAMBDAS {
                out.extend(yukawa_checks(a, l, s, opts)?);
            }
        }
    }
    out.extend(slicing_checks(opts)?);
    out.push(two_sphere_counterexample(0.1, opts)?);
    Ok(out)
}

/// Newtonian and power-law disk checks (no λ dependence).
pub fn static_checks(a: f64, s: f64, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let c = PhysicalConstants::default();
    let cf = PhysicalConstants::new(c.g * opts.closed_form_g_scale)?;
    let q = &opts.quadrature;
    let b = bodies(a, s)?;
    let t = tag(a, None, s);
    let mut out = Vec::new();
    let near = AxisProbe::new(a, 1.0)?;
    let far = AxisProbe::new(a + 2.0 * b.sphere_radius, 1.0)?;

    let o_near = oracle::oracle_disk_point(&near, &b.disk, DiskKernel::Newton, &c, q)?;
    out.push(CheckResult::compare(
        format!("disk_gravity[{t}]"),
        disk::disk_gravity_force(&near, &b.disk, &cf),
        o_near.value,
        o_near.converged,
        opts.tol(STRICT_TOLERANCE),
    ));
    let o_far = oracle::oracle_disk_point(&far, &b.disk, DiskKernel::Newton, &c, q)?;
    let xi = disk::xi_gravity(&XiInputs::new(a, b.sphere_radius, b.disk)?);
    out.push(CheckResult::compare(
        format!("xi_gravity[{t}]"),
        xi,
        o_near.value / o_far.value,
        o_near.converged && o_far.converged,
        opts.tol(DEFAULT_TOLERANCE),
    ));
    for &n in &POWERS {
        let pl = PowerLawParams::new(c.g, n)?;
        let pl_cf = PowerLawParams::new(cf.g, n)?;
        let o = oracle::oracle_disk_point(&near, &b.disk, DiskKernel::Power(pl), &c, q)?;
        out.push(CheckResult::compare(
            format!("disk_power_n{n}[{t}]"),
            disk::disk_power_force(&near, &b.disk, &pl_cf)?,
            o.value,
            o.converged,
            opts.tol(STRICT_TOLERANCE),
        ));
    }
    Ok(out)
}

/// Yukawa checks at one grid point.
pub fn yukawa_checks(a: f64, lambda: f64, s: f64, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let c = PhysicalConstants::default();
    let cf = PhysicalConstants::new(c.g * opts.closed_form_g_scale)?;
    let q = &opts.quadrature;
    let p = YukawaParams::unit(lambda)?;
    let b = bodies(a, s)?;
    let t = tag(a, Some(lambda), s);
    let mut out = Vec::new();

    let o = oracle::oracle_sphere_slab_yukawa(&b.sphere_slab, &p, &c, q);
    out.push(CheckResult::compare(
        format!("sphere_slab_exact[{t}]"),
        yukawa::sphere_slab_force_exact(&b.sphere_slab, &p, &cf),
        o.force.value,
        o.force.converged,
        opts.tol(STRICT_TOLERANCE),
    ));

    let o = oracle::oracle_layered_slab_potential(a, &b.layered.slab, &p, &c, q)?;
    out.push(CheckResult::compare(
        format!("layered_slab_potential[{t}]"),
        layered::layered_slab_potential(a, &b.layered.slab, &p, &cf)?,
        o.value,
        o.converged,
        opts.tol(DEFAULT_TOLERANCE),
    ));

    let o = oracle::oracle_layered_sphere_energy(&b.layered, &p, &c, q);
    out.push(CheckResult::compare(
        format!("layered_epfa_energy[{t}]"),
        layered::layered_epfa_energy(&b.layered, &p, &cf),
        o.value,
        o.converged,
        opts.tol(DEFAULT_TOLERANCE),
    ));

    // PFA assembly: the nine layer-pair pressures and the force built from them
    let terms = layered::layered_pfa_terms(&b.layered, &p, &cf);
    let slab = layered::slab_layers(&b.layered.slab);
    let meta = layered::metaphysical_layers(&b.layered);
    let mut worst = CheckResult::compare(format!("layered_pfa_terms[{t}]"), 0.0, 0.0, true, opts.tol(DEFAULT_TOLERANCE));
    let mut oracle_sum = 0.0;
    let mut all_converged = true;
    for (i, &(o1, t1, r1)) in slab.iter().enumerate() {
        for (j, &(o2, t2, r2)) in meta.iter().enumerate() {
            if r1 == 0.0 || r2 == 0.0 || t1 == Thickness::Finite(0.0) || t2 == Thickness::Finite(0.0) {
                continue;
            }
            let o = oracle::oracle_slab_slab_pressure(a + o1 + o2, t1, r1, t2, r2, &p, &c, q)?;
            oracle_sum += o.value;
            all_converged &= o.converged;
            let r = CheckResult::compare(
                format!("layered_pfa_terms[{t},pair={i}{j}]"),
                terms[i][j],
                o.value,
                o.converged,
                opts.tol(DEFAULT_TOLERANCE),
            );
            if !r.passed || r.rel_error > worst.rel_error {
                worst = r;
            }
        }
    }
    out.push(worst);
    out.push(CheckResult::compare(
        format!("layered_pfa_force[{t}]"),
        layered::layered_pfa_force(&b.layered, &p, &cf),
        2.0 * PI * b.layered.sphere.core_radius * lambda * oracle_sum,
        all_converged,
        opts.tol(DEFAULT_TOLERANCE),
    ));

    let near = AxisProbe::new(a, 1.0)?;
    let o = oracle::oracle_disk_point(&near, &b.disk, DiskKernel::Yukawa(p), &c, q)?;
    out.push(CheckResult::compare(
        format!("disk_yukawa_potential[{t}]"),
        disk::disk_yukawa_potential(&near, &b.disk, &p, &cf),
        o.value,
        o.converged,
        opts.tol(STRICT_TOLERANCE),
    ));
    let o = oracle::oracle_disk_point(&near, &b.disk, DiskKernel::YukawaForce(p), &c, q)?;
    out.push(CheckResult::compare(
        format!("disk_yukawa_force[{t}]"),
        disk::disk_yukawa_force(&near, &b.disk, &p, &cf),
        o.value,
        o.converged,
        opts.tol(STRICT_TOLERANCE),
    ));
    Ok(out)
}

/// The five sphere-slab configurations of the slicing comparison.
pub fn slicing_configs() -> Result<Vec<(SphereSlabConfig, YukawaParams)>> {
    Ok(vec![
        (SphereSlabConfig::new(100e-9, 150e-6, 19280.0, 3.5e-6, 2330.0)?, YukawaParams::unit(100e-9)?),
        (SphereSlabConfig::new(50e-9, 50e-6, 8000.0, 1e-6, 2330.0)?, YukawaParams::unit(10e-9)?),
        (SphereSlabConfig::new(1e-6, 150e-6, 19280.0, 3.5e-6, 2330.0)?, YukawaParams::unit(1e-6)?),
        (SphereSlabConfig::new(200e-9, 100e-6, 2330.0, 100e-6, 19280.0)?, YukawaParams::unit(150e-6)?),
        (SphereSlabConfig::new(10e-9, 1e-6, 1000.0, 1e-3, 1000.0)?, YukawaParams::unit(1e-3)?),
    ])
}

/// Horizontal slices against vertical columns, and both against the closed form.
pub fn slicing_checks(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let c = PhysicalConstants::default();
    let cf = PhysicalConstants::new(c.g * opts.closed_form_g_scale)?;
    let mut out = Vec::new();
    for (k, (cfg, p)) in slicing_configs()?.into_iter().enumerate() {
        let (h, v) = oracle::oracle_slicing_equivalence(&cfg, &p, &c, &opts.quadrature);
        out.push(CheckResult::compare(
            format!("slicing_equivalence[config={}]", k + 1),
            v.value,
            h.value,
            h.converged && v.converged,
            opts.tol(STRICT_TOLERANCE),
        ));
        out.push(CheckResult::compare(
            format!("slicing_vs_closed_form[config={}]", k + 1),
            yukawa::sphere_slab_force_exact(&cfg, &p, &cf) * p.lambda,
            h.value,
            h.converged,
            opts.tol(STRICT_TOLERANCE),
        ));
    }
    Ok(out)
}

/// Two equal spheres at gap `gap_over_r · R` under Newtonian gravity. The
/// check passes when the EPFA force misses the exact one by more than 1%;
/// `closed_form` holds the EPFA value and `rel_error` the deviation.
pub fn two_sphere_counterexample(gap_over_r: f64, opts: &VerifyOptions) -> Result<CheckResult> {
    let c = PhysicalConstants::default();
    let r = 100e-6;
    let rho = 19280.0;
    let o = oracle::oracle_two_spheres(r, r, (2.0 + gap_over_r) * r, rho, rho, Interaction::Newton, &c, &opts.quadrature)?;
    let deviation = ((o.epfa.value - o.exact.value) / o.exact.value).abs();
    Ok(CheckResult {
        name: format!("two_sphere_epfa_deviation[gap={gap_over_r}R]"),
        closed_form: o.epfa.value,
        oracle: o.exact.value,
        rel_error: deviation,
        tolerance: 0.01,
        converged: o.epfa.converged && o.exact.converged,
        passed: o.epfa.converged && o.exact.converged && deviation > 0.01,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_tighter_than_oracle_is_rejected() {
        let o = VerifyOptions { tolerance_override: Some(1e-12), ..Default::default() };
        assert!(o.validate().is_err());
        assert!(run_suite(&o).is_err());
    }

    #[test]
    fn corrupted_constant_fails_named_check() {
        let o = VerifyOptions { closed_form_g_scale: 1.001, ..Default::default() };
        let r = static_checks(200e-9, 1.0, &o).unwrap();
        let g = r.iter().find(|c| c.name.starts_with("disk_gravity")).unwrap();
        assert!(!g.passed);
        assert!((g.rel_error - 1e-3).abs() < 1e-6);
    }

    #[test]
    fn counterexample_deviates() {
        let r = two_sphere_counterexample(0.1, &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
