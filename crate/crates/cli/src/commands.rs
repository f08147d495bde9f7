//! The subcommands. Each reads what it needs from the configuration, evaluates
//! its grid on the worker pool and returns the table in grid order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde_json::{json, Value};

use ypfa_core::disk::{xi_power, xi_yukawa, XiInputs};
use ypfa_core::grid::{Spacing, SweepGrid};
use ypfa_core::layered::{eta_delta, LayeredConfig};
use ypfa_core::limits::{alpha_limit, limit_shift, LimitGeometry, Method, ResidualBound, PFA_RELIABLE_BELOW};
use ypfa_core::model::{Disk, Layer, LayeredSlab, LayeredSphere, Thickness, YukawaParams};
use ypfa_core::oracle::QuadratureSpec;
use ypfa_core::verify::{run_suite, VerifyOptions};
use ypfa_core::yukawa::{eta, SphereSlabConfig};
use ypfa_core::Error as CoreError;

use crate::config::{thickness_json, Resolver};
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EtaSweep,
    EtaLayeredSweep,
    XiPowerSweep,
    XiYukawaSweep,
    OracleVerify,
    Limits,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EtaSweep => "eta-sweep",
            Command::EtaLayeredSweep => "eta-layered-sweep",
            Command::XiPowerSweep => "xi-power-sweep",
            Command::XiYukawaSweep => "xi-yukawa-sweep",
            Command::OracleVerify => "oracle-verify",
            Command::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub grid: Value,
    pub regime_counts: BTreeMap<String, usize>,
    pub notes: BTreeMap<String, Value>,
    /// Set when the run completed but must exit with status 2.
    pub failure: Option<String>,
}

impl Outcome {
    fn new(table: Table, grid: Value) -> Self {
        Self { table, grid, regime_counts: BTreeMap::new(), notes: BTreeMap::new(), failure: None }
    }

    fn count(&mut self, regime: &str) {
        *self.regime_counts.entry(regime.to_string()).or_default() += 1;
    }
}

pub fn run(cmd: Command, r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    match cmd {
        Command::EtaSweep => eta_sweep(r, pool),
        Command::EtaLayeredSweep => eta_layered_sweep(r, pool),
        Command::XiPowerSweep => xi_power_sweep(r, pool),
        Command::XiYukawaSweep => xi_yukawa_sweep(r, pool),
        Command::OracleVerify => oracle_verify(r),
        Command::Limits => limits(r, pool),
    }
}

fn par_eval<T: Sync, R: Send>(pool: &ThreadPool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    pool.install(|| items.par_iter().map(f).collect())
}

fn grid(r: &mut Resolver, prefix: &str, spacing: Spacing, length: bool) -> Result<(SweepGrid, Value)> {
    let read = |r: &mut Resolver, k: &str| if length { r.length(k) } else { r.number(k) };
    let min = read(r, &format!("{prefix}.min"))?;
    let max = read(r, &format!("{prefix}.max"))?;
    let points = r.count(&format!("{prefix}.points"))?;
    let g = SweepGrid::new(min, max, points, spacing)?;
    let spacing = match spacing {
        Spacing::Log => "log",
        Spacing::Linear => "linear",
    };
    Ok((g, json!({ "variable": prefix, "min": min, "max": max, "points": points, "spacing": spacing })))
}

fn lambda_grid(r: &mut Resolver) -> Result<(SweepGrid, Value)> {
    let spacing = match r.choice("lambda.spacing", &["log", "linear"])?.as_str() {
        "log" => Spacing::Log,
        _ => Spacing::Linear,
    };
    grid(r, "lambda", spacing, true)
}

fn positive(key: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(CliError::input(format!("`{key}` entries must be positive, got {v}"))),
        None => Ok(()),
    }
}

fn d2_cell(d2: Thickness) -> Cell {
    Cell::Num(d2.meters())
}

pub fn eta_sweep(r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    let radii = r.lengths("sphere.radius")?;
    positive("sphere.radius", &radii)?;
    let d2s = r.thicknesses("pfa.d2")?;
    let (g, grid_json) = lambda_grid(r)?;
    let lambdas = g.values();
    let mut items = Vec::new();
    for &radius in &radii {
        for &d2 in &d2s {
            items.extend(lambdas.iter().map(|&l| (radius, d2, l)));
        }
    }
    let results = par_eval(pool, &items, |&(radius, d2, l)| eta(radius, d2, l));
    let mut out = Outcome::new(Table::new(vec!["lambda_m", "R_m", "D2_m", "eta", "regime"]), grid_json);
    for (&(radius, d2, l), res) in items.iter().zip(results) {
        let e = res?;
        out.count(e.regime.as_str());
        out.table.rows.push(vec![l.into(), radius.into(), d2_cell(d2), e.eta.into(), e.regime.as_str().into()]);
    }
    Ok(out)
}

fn coat(r: &mut Resolver, name: &str) -> Result<Layer> {
    let t = r.length(&format!("{name}.thickness"))?;
    let d = r.density(&format!("{name}.density"))?;
    Ok(Layer::new(t, d)?)
}

fn layered_slab(r: &mut Resolver) -> Result<LayeredSlab> {
    let base = coat(r, "slab.base")?;
    let middle = coat(r, "slab.middle")?;
    let top = coat(r, "slab.top")?;
    Ok(LayeredSlab::new(base, middle, top)?)
}

/// Each configured radius with its layered sphere; radii are core radii unless
/// `sphere.radius_kind = outer`.
fn layered_spheres(r: &mut Resolver) -> Result<Vec<(f64, LayeredSphere)>> {
    // sphere.core_radius, when set, takes precedence over sphere.radius
    let (radii, core) = if r.has("sphere.core_radius") {
        (r.lengths("sphere.core_radius")?, true)
    } else {
        let radii = r.lengths("sphere.radius")?;
        (radii, r.choice("sphere.radius_kind", &["core", "outer"])? == "core")
    };
    positive("sphere radius", &radii)?;
    let density = r.density("sphere.density")?;
    let inner = coat(r, "sphere.inner_coat")?;
    let outer = coat(r, "sphere.outer_coat")?;
    radii
        .into_iter()
        .map(|radius| {
            let core_radius = if core { radius } else { radius - inner.thickness - outer.thickness };
            if core_radius <= 0.0 {
                return Err(CliError::input(format!("outer radius {radius} m is thinner than the coatings")));
            }
            Ok((radius, LayeredSphere::new(core_radius, density, inner, outer)?))
        })
        .collect()
}

pub fn eta_layered_sweep(r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    let c = r.constants()?;
    let a = r.length("separation")?;
    let spheres = layered_spheres(r)?;
    let slab = layered_slab(r)?;
    let d2s = r.thicknesses("pfa.d2")?;
    let (g, grid_json) = lambda_grid(r)?;
    let lambdas = g.values();
    let mut items = Vec::new();
    for &(radius, sphere) in &spheres {
        for &d2 in &d2s {
            let cfg = LayeredConfig::new(a, sphere, slab, d2)?;
            items.extend(lambdas.iter().map(|&l| (radius, cfg, l)));
        }
    }
    let results = par_eval(pool, &items, |(_, cfg, l)| -> ypfa_core::Result<_> {
        let p = YukawaParams::unit(*l)?;
        let e = eta_delta(cfg, &p, &c)?;
        let regime = eta(cfg.sphere.outer_radius(), cfg.d2, *l)?.regime;
        Ok((e, regime))
    });
    let header = vec!["lambda_m", "R_m", "D2_m", "eta_delta", "eta", "ratio"];
    let mut out = Outcome::new(Table::new(header), grid_json);
    for ((radius, cfg, l), res) in items.iter().zip(results) {
        let (e, regime) = res?;
        out.count(regime.as_str());
        out.table.rows.push(vec![
            (*l).into(),
            (*radius).into(),
            d2_cell(cfg.d2),
            e.eta_delta.into(),
            e.eta_homogeneous.into(),
            e.ratio.into(),
        ]);
    }
    Ok(out)
}

fn single(r: &mut Resolver, key: &str) -> Result<f64> {
    let v = r.lengths(key)?;
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(CliError::input(format!("`{key}` must hold a single value for this command, got {}", v.len()))),
    }
}

fn power_regime(n: f64, res: &ypfa_core::Result<f64>) -> &'static str {
    match res {
        Err(CoreError::NearPole { .. }) => "near_pole",
        _ if n == 1.0 => "special_n1",
        _ if n == 3.0 => "special_n3",
        _ => "general",
    }
}

pub fn xi_power_sweep(r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    let radius = single(r, "sphere.radius")?;
    let a = r.length("separation")?;
    let thickness = r.length("disk.thickness")?;
    let density = r.density("disk.density")?;
    let by_rd = r.choice("xi.mode", &["rd", "n"])? == "rd";
    let (items, header, grid_json) = if by_rd {
        let ns = r.numbers("power.n")?;
        let (g, grid_json) = grid(r, "disk.kappa", Spacing::Log, false)?;
        let kappas = g.values();
        let items: Vec<(f64, f64)> = ns.iter().flat_map(|&n| kappas.iter().map(move |&k| (k, n))).collect();
        (items, vec!["Rd_m", "N", "xi", "flag"], grid_json)
    } else {
        let kappas = r.numbers("disk.kappa")?;
        positive("disk.kappa", &kappas)?;
        let (g, grid_json) = grid(r, "power.n", Spacing::Linear, false)?;
        let ns = g.values();
        let items: Vec<(f64, f64)> = kappas.iter().flat_map(|&k| ns.iter().map(move |&n| (k, n))).collect();
        (items, vec!["N", "Rd_m", "xi", "flag"], grid_json)
    };
    let results = par_eval(pool, &items, |&(k, n)| -> ypfa_core::Result<ypfa_core::Result<f64>> {
        let x = XiInputs::new(a, radius, Disk::new(k * radius, thickness, density)?)?;
        Ok(xi_power(&x, n))
    });
    let mut out = Outcome::new(Table::new(header), grid_json);
    for (&(k, n), res) in items.iter().zip(results) {
        let res = res?;
        let regime = power_regime(n, &res);
        out.count(regime);
        let (xi, flag) = match res {
            Ok(v) => (v, ""),
            Err(CoreError::NearPole { .. }) => (f64::NAN, "near_pole"),
            Err(e) => return Err(e.into()),
        };
        let rd = k * radius;
        let row = if by_rd { vec![rd.into(), n.into()] } else { vec![n.into(), rd.into()] };
        out.table.rows.push([row, vec![xi.into(), flag.into()]].concat());
    }
    Ok(out)
}

pub fn xi_yukawa_sweep(r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    let radius = single(r, "sphere.radius")?;
    let a = r.length("separation")?;
    let thickness = r.length("disk.thickness")?;
    let density = r.density("disk.density")?;
    let lambdas = r.lengths("yukawa.lambda")?;
    positive("yukawa.lambda", &lambdas)?;
    let (g, grid_json) = grid(r, "disk.kappa", Spacing::Log, false)?;
    let kappas = g.values();
    let items: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| kappas.iter().map(move |&k| (k, l))).collect();
    let results = par_eval(pool, &items, |&(k, l)| -> ypfa_core::Result<f64> {
        let x = XiInputs::new(a, radius, Disk::new(k * radius, thickness, density)?)?;
        Ok(xi_yukawa(&x, &YukawaParams::unit(l)?).ln_value)
    });
    let mut out = Outcome::new(Table::new(vec!["Rd_m", "lambda_m", "ln_xi"]), grid_json);
    for (&(k, l), res) in items.iter().zip(results) {
        out.table.rows.push(vec![(k * radius).into(), l.into(), res?.into()]);
    }
    Ok(out)
}

pub fn verify_options(r: &mut Resolver) -> Result<VerifyOptions> {
    let rel_tol = r.number("verify.rel_tol")?;
    let opts = VerifyOptions {
        quadrature: {
            let d = QuadratureSpec::default();
            QuadratureSpec::new(rel_tol, d.abs_tol, d.max_subdivisions)?
        },
        tolerance_override: r.optional_number("verify.tolerance")?,
        closed_form_g_scale: r.number("verify.closed_form_g_scale")?,
    };
    opts.validate()?;
    Ok(opts)
}

pub fn oracle_verify(r: &mut Resolver) -> Result<Outcome> {
    let opts = verify_options(r)?;
    let checks = run_suite(&opts)?;
    let header = vec!["check", "closed_form", "oracle", "rel_error", "tolerance", "converged", "passed"];
    let mut out = Outcome::new(Table::new(header), json!({ "variable": "fixed verification grid" }));
    let mut failed = Vec::new();
    for c in &checks {
        out.count(if c.passed { "passed" } else { "failed" });
        if !c.passed {
            failed.push(c.name.clone());
        }
        out.table.rows.push(vec![
            c.name.clone().into(),
            c.closed_form.into(),
            c.oracle.into(),
            c.rel_error.into(),
            c.tolerance.into(),
            c.converged.into(),
            c.passed.into(),
        ]);
    }
    if !failed.is_empty() {
        out.failure = Some(format!("{} of {} checks failed: {}", failed.len(), checks.len(), failed.join("; ")));
    }
    Ok(out)
}

fn limit_geometry(r: &mut Resolver) -> Result<LimitGeometry> {
    let a = r.length("separation")?;
    let d2s = r.thicknesses("pfa.d2")?;
    let d2 = match d2s.as_slice() {
        [d] => *d,
        _ => return Err(CliError::input("`pfa.d2` must hold a single value for limits")),
    };
    match r.choice("limits.geometry", &["homogeneous", "layered"])?.as_str() {
        "homogeneous" => {
            let radius = single(r, "sphere.radius")?;
            let density = r.density("sphere.density")?;
            let slab = coat(r, "slab.base")?;
            Ok(LimitGeometry::Homogeneous {
                cfg: SphereSlabConfig::new(a, radius, density, slab.thickness, slab.density)?,
                d2,
            })
        }
        _ => {
            let spheres = layered_spheres(r)?;
            let [(_, sphere)] = spheres.as_slice() else {
                return Err(CliError::input("the layered geometry takes a single sphere radius"));
            };
            Ok(LimitGeometry::Layered(LayeredConfig::new(a, *sphere, layered_slab(r)?, d2)?))
        }
    }
}

pub fn limits(r: &mut Resolver, pool: &ThreadPool) -> Result<Outcome> {
    let c = r.constants()?;
    let path = r.text("limits.residuals")?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let bounds = ResidualBound::from_csv(&text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let method: Method = r.text("limits.method")?.parse()?;
    let geometry = limit_geometry(r)?;
    let (g, grid_json) = lambda_grid(r)?;
    let lambdas = g.values();
    let results = par_eval(pool, &lambdas, |&l| -> ypfa_core::Result<_> {
        let point = alpha_limit(l, &bounds, &geometry, method, &c)?;
        let shift = match method {
            Method::Epfa => {
                let pfa = alpha_limit(l, &bounds, &geometry, Method::Pfa, &c)?;
                let ratio = if point.alpha_bound.is_finite() && pfa.alpha_bound.is_finite() && pfa.alpha_bound > 0.0 {
                    point.alpha_bound / pfa.alpha_bound
                } else {
                    (point.ln_alpha_bound - pfa.ln_alpha_bound).exp()
                };
                Some(ratio)
            }
            Method::Pfa => None,
        };
        Ok((point, shift, limit_shift(l, &geometry, &c)?.unreliable_pfa))
    });
    let mut header = vec!["lambda_m", "alpha_bound", "best_separation_m", "method"];
    if method == Method::Epfa {
        header.push("shift_vs_pfa");
    }
    let mut out = Outcome::new(Table::new(header), grid_json);
    out.notes.insert("residuals".into(), json!(path));
    out.notes.insert("residual_points".into(), json!(bounds.entries().len()));
    out.notes.insert("pfa_unreliable_from_lambda_m".into(), json!(PFA_RELIABLE_BELOW));
    out.notes.insert(
        "d2_m".into(),
        match geometry {
            LimitGeometry::Homogeneous { d2, .. } => thickness_json(&d2),
            LimitGeometry::Layered(cfg) => thickness_json(&cfg.d2),
        },
    );
    for res in results {
        let (p, shift, unreliable) = res?;
        out.count(if unreliable { "pfa_unreliable" } else { "pfa_reliable" });
        let mut row = vec![p.lambda.into(), p.alpha_bound.into(), p.best_separation.into(), p.method.as_str().into()];
        if let Some(s) = shift {
            row.push(s.into());
        }
        out.table.rows.push(row);
    }
    Ok(out)
}
