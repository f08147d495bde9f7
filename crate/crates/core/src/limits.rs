//! α–λ exclusion limits from per-separation force residuals, and the shift
//! between limits derived with the PFA and with the exact (EPFA) force.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, require, Error, Result};
use crate::layered::{self, LayeredConfig};
use crate::model::{ForceValue, PhysicalConstants, Thickness, YukawaParams};
use crate::yukawa::{self, SphereSlabConfig};

/// Below this range the PFA is considered reliable.
pub const PFA_RELIABLE_BELOW: f64 = 100e-9;

/// Largest residual force compatible with the data at each tabulated separation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBound {
    entries: Vec<(f64, f64)>,
}

impl ResidualBound {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        require(!entries.is_empty(), || "residual bound needs at least one entry".to_string())?;
        for (i, &(a, r)) in entries.iter().enumerate() {
            require(a.is_finite() && a > 0.0, || format!("entry {}: separation must be positive, got {a}", i + 1))?;
            require(r.is_finite() && r >= 0.0, || format!("entry {}: residual must be >= 0, got {r}", i + 1))?;
            if i > 0 {
                require(a > entries[i - 1].0, || format!("entry {}: separations must be strictly increasing", i + 1))?;
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// Every residual multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|&(a, r)| (a, r * factor)).collect())
    }

    /// Parses CSV with header `separation_m,residual_N`. Blank lines and lines
    /// starting with `#` are skipped; errors name the offending line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut header_seen = false;
        let mut entries: Vec<(f64, f64)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["separation_m", "residual_N"] {
                    return invalid(format!("line {line_no}: expected header `separation_m,residual_N`, got `{line}`"));
                }
                header_seen = true;
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return invalid(format!("line {line_no}: expected 2 columns, got {}", cols.len()));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| Error::InvalidInput(format!("line {line_no}: bad {what} `{s}`")))
            };
            let a = parse(cols[0], "separation")?;
            let r = parse(cols[1], "residual")?;
            if !(a.is_finite() && a > 0.0) {
                return invalid(format!("line {line_no}: separation must be positive, got {a}"));
            }
            if !(r.is_finite() && r >= 0.0) {
                return invalid(format!("line {line_no}: residual must be >= 0, got {r}"));
            }
            if let Some(&(prev, _)) = entries.last() {
                if a <= prev {
                    return invalid(format!("line {line_no}: separations must be strictly increasing"));
                }
            }
            entries.push((a, r));
        }
        if !header_seen {
            return invalid("residual file is empty");
        }
        if entries.is_empty() {
            return invalid("residual file has a header but no data rows");
        }
        Self::new(entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Pfa,
    Epfa,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Pfa => "pfa",
            Method::Epfa => "epfa",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pfa" => Ok(Method::Pfa),
            "epfa" | "exact" => Ok(Method::Epfa),
            other => invalid(format!("unknown method `{other}` (expected pfa or epfa)")),
        }
    }
}

/// Sphere-slab configuration used to turn residuals into α bounds. The
/// separation stored in the configuration is ignored; the tabulated ones are used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitGeometry {
    Homogeneous { cfg: SphereSlabConfig, d2: Thickness },
    Layered(LayeredConfig),
}

impl LimitGeometry {
    /// Unit-α Yukawa force at separation `a`.
    pub fn unit_force(&self, a: f64, lambda: f64, method: Method, c: &PhysicalConstants) -> Result<ForceValue> {
        let p = YukawaParams::unit(lambda)?;
        Ok(match (self, method) {
            (LimitGeometry::Homogeneous { cfg, .. }, Method::Epfa) => {
                yukawa::sphere_slab_force_exact_scaled(&cfg.with_separation(a)?, &p, c)
            }
            (LimitGeometry::Homogeneous { cfg, d2 }, Method::Pfa) => {
                yukawa::sphere_slab_force_pfa_scaled(&cfg.with_separation(a)?, *d2, &p, c)
            }
            (LimitGeometry::Layered(cfg), Method::Epfa) => layered::layered_epfa_force_scaled(&cfg.with_separation(a)?, &p, c),
            (LimitGeometry::Layered(cfg), Method::Pfa) => layered::layered_pfa_force_scaled(&cfg.with_separation(a)?, &p, c),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionPoint {
    pub lambda: f64,
    /// `inf` when the bound exceeds the double range; see `ln_alpha_bound`.
    pub alpha_bound: f64,
    pub ln_alpha_bound: f64,
    pub best_separation: f64,
    pub method: Method,
}

/// Smallest `residual(a) / |F(a; α = 1, λ)|` over the tabulated separations.
pub fn alpha_limit(
    lambda: f64,
    bounds: &ResidualBound,
    geometry: &LimitGeometry,
    method: Method,
    c: &PhysicalConstants,
) -> Result<ExclusionPoint> {
    require(lambda.is_finite() && lambda > 0.0, || format!("lambda must be positive, got {lambda}"))?;
    let mut best: Option<(f64, f64, f64)> = None; // (ln α, α, a)
    for &(a, residual) in bounds.entries() {
        let f = geometry.unit_force(a, lambda, method, c)?;
        if f.is_zero() {
            continue;
        }
        let ln_alpha = if residual == 0.0 { f64::NEG_INFINITY } else { residual.ln() - f.ln_abs() };
        // the e^{-a/λ} factor is applied last so that the PFA and EPFA bounds
        // at the same separation share it bit for bit
        let alpha = residual / f.mantissa.abs() * (-f.ln_scale).exp();
        if best.is_none_or(|(l, _, _)| ln_alpha < l) {
            best = Some((ln_alpha, alpha, a));
        }
    }
    let (ln_alpha_bound, alpha_bound, best_separation) =
        best.ok_or_else(|| Error::Degenerate("every unit-α force vanishes; no bound can be set".into()))?;
    Ok(ExclusionPoint { lambda, alpha_bound, ln_alpha_bound, best_separation, method })
}

/// [`alpha_limit`] at every λ, in order.
pub fn exclusion_curve(
    lambdas: &[f64],
    bounds: &ResidualBound,
    geometry: &LimitGeometry,
    method: Method,
    c: &PhysicalConstants,
) -> Result<Vec<ExclusionPoint>> {
    require(!lambdas.is_empty(), || "λ grid is empty".to_string())?;
    lambdas.iter().map(|&l| alpha_limit(l, bounds, geometry, method, c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitShift {
    /// `α_EPFA / α_PFA = F_PFA / F_EPFA`.
    pub shift: f64,
    /// λ lies where the PFA is unreliable (λ ≳ 100 nm).
    pub unreliable_pfa: bool,
}

/// How much weaker the exact-force limit is than the PFA one: `1/η` for a
/// homogeneous sphere, `1/η_Δ` for a layered one.
pub fn limit_shift(lambda: f64, geometry: &LimitGeometry, c: &PhysicalConstants) -> Result<LimitShift> {
    let eta = match geometry {
        LimitGeometry::Homogeneous { cfg, d2 } => yukawa::eta(cfg.sphere_radius, *d2, lambda)?.eta,
        LimitGeometry::Layered(cfg) => layered::eta_delta(cfg, &YukawaParams::unit(lambda)?, c)?.eta_delta,
    };
    Ok(LimitShift { shift: 1.0 / eta, unreliable_pfa: lambda >= PFA_RELIABLE_BELOW })
}
