//! Physical constants, units and the geometry/material value types shared by
//! every force model.
//!
//! Everything is stored in SI units: lengths in meters, densities in kg/m³,
//! forces in newtons. Attractive forces are negative.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, require, Error, Result};

/// Newton's constant, CODATA 2018, in m³ kg⁻¹ s⁻².
pub const G_CODATA_2018: f64 = 6.67430e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub g: f64,
}

impl PhysicalConstants {
    pub fn new(g: f64) -> Result<Self> {
        require(g.is_finite() && g > 0.0, || format!("G must be positive, got {g}"))?;
        Ok(Self { g })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { g: G_CODATA_2018 }
    }
}

/// Strength and range of a Yukawa correction relative to Newtonian gravity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YukawaParams {
    pub alpha: f64,
    pub lambda: f64,
}

impl YukawaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        require(alpha.is_finite(), || format!("alpha must be finite, got {alpha}"))?;
        require(lambda.is_finite() && lambda > 0.0, || {
            format!("lambda must be positive, got {lambda}")
        })?;
        Ok(Self { alpha, lambda })
    }

    /// Unit coupling at range `lambda`.
    pub fn unit(lambda: f64) -> Result<Self> {
        Self::new(1.0, lambda)
    }
}

/// One homogeneous layer. A zero thickness means the layer is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub thickness: f64,
    pub density: f64,
}

impl Layer {
    pub const ABSENT: Layer = Layer { thickness: 0.0, density: 0.0 };

    pub fn new(thickness: f64, density: f64) -> Result<Self> {
        require(thickness.is_finite() && thickness >= 0.0, || {
            format!("layer thickness must be >= 0, got {thickness}")
        })?;
        check_density(density)?;
        Ok(Self { thickness, density })
    }

    pub fn is_absent(&self) -> bool {
        self.thickness == 0.0
    }
}

fn check_density(density: f64) -> Result<()> {
    require(density.is_finite() && density >= 0.0, || {
        format!("density must be >= 0, got {density}")
    })
}

fn check_positive_length(name: &str, v: f64) -> Result<()> {
    require(v.is_finite() && v > 0.0, || format!("{name} must be positive, got {v}"))
}

/// Laterally infinite slab: a base of thickness D₁ under a middle and a top coating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredSlab {
    pub base: Layer,
    pub middle: Layer,
    pub top: Layer,
}

impl LayeredSlab {
    pub fn new(base: Layer, middle: Layer, top: Layer) -> Result<Self> {
        check_positive_length("slab base thickness", base.thickness)?;
        Ok(Self { base, middle, top })
    }

    pub fn homogeneous(thickness: f64, density: f64) -> Result<Self> {
        Self::new(Layer::new(thickness, density)?, Layer::ABSENT, Layer::ABSENT)
    }

    pub fn total_thickness(&self) -> f64 {
        self.base.thickness + self.middle.thickness + self.top.thickness
    }

    /// Layers ordered from the exposed top surface downwards.
    pub fn layers_from_top(&self) -> [Layer; 3] {
        [self.top, self.middle, self.base]
    }
}

/// Sphere of radius R with two concentric coatings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredSphere {
    pub core_radius: f64,
    pub core_density: f64,
    pub inner_coat: Layer,
    pub outer_coat: Layer,
}

impl LayeredSphere {
    pub fn new(core_radius: f64, core_density: f64, inner_coat: Layer, outer_coat: Layer) -> Result<Self> {
        check_positive_length("sphere core radius", core_radius)?;
        check_density(core_density)?;
        Ok(Self { core_radius, core_density, inner_coat, outer_coat })
    }

    pub fn homogeneous(radius: f64, density: f64) -> Result<Self> {
        Self::new(radius, density, Layer::ABSENT, Layer::ABSENT)
    }

    pub fn coating_thickness(&self) -> f64 {
        self.inner_coat.thickness + self.outer_coat.thickness
    }

    pub fn outer_radius(&self) -> f64 {
        self.core_radius + self.coating_thickness()
    }

    /// (inner radius, outer radius, density) for core, inner coat and outer coat.
    pub fn shells(&self) -> [(f64, f64, f64); 3] {
        let r0 = self.core_radius;
        let r1 = r0 + self.inner_coat.thickness;
        let r2 = r1 + self.outer_coat.thickness;
        [
            (0.0, r0, self.core_density),
            (r0, r1, self.inner_coat.density),
            (r1, r2, self.outer_coat.density),
        ]
    }
}

/// Principal radii of curvature at the point of closest approach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureRadii {
    pub r_x: f64,
    pub r_y: f64,
}

impl CurvatureRadii {
    pub fn new(r_x: f64, r_y: f64) -> Result<Self> {
        check_positive_length("curvature radius r_x", r_x)?;
        check_positive_length("curvature radius r_y", r_y)?;
        Ok(Self { r_x, r_y })
    }

    pub fn spherical(r: f64) -> Result<Self> {
        Self::new(r, r)
    }
}

/// Geometric mean of the two principal radii.
pub fn effective_radius(c: &CurvatureRadii) -> f64 {
    (c.r_x * c.r_y).sqrt()
}

/// Thickness of a slab that may be taken as infinitely deep.
///
/// `Infinite` makes the factor `1 - exp(-D/λ)` exactly one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thickness {
    Finite(f64),
    Infinite,
}

impl Thickness {
    pub fn finite(d: f64) -> Result<Self> {
        check_positive_length("thickness", d)?;
        Ok(Thickness::Finite(d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Thickness::Infinite)
    }

    /// Length in meters, `f64::INFINITY` for the infinite variant.
    pub fn meters(&self) -> f64 {
        match *self {
            Thickness::Finite(d) => d,
            Thickness::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Thickness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Thickness::Finite(d) => write!(f, "{d:e}"),
            Thickness::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Thickness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinite") {
            return Ok(Thickness::Infinite);
        }
        Thickness::finite(parse_length(t)?)
    }
}

/// Disk of radius R_d, thickness D₁ and density ρ₁. The radius may be
/// `f64::INFINITY` to describe the infinite-plane limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub radius: f64,
    pub thickness: f64,
    pub density: f64,
}

impl Disk {
    pub fn new(radius: f64, thickness: f64, density: f64) -> Result<Self> {
        require(radius > 0.0 && !radius.is_nan(), || format!("disk radius must be positive, got {radius}"))?;
        check_positive_length("disk thickness", thickness)?;
        check_density(density)?;
        Ok(Self { radius, thickness, density })
    }
}

/// Homogeneous sphere of radius R above a laterally infinite slab of thickness D₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSlabConfig {
    /// Closest gap a between sphere and slab surface.
    pub separation: f64,
    pub sphere_radius: f64,
    pub sphere_density: f64,
    pub slab_thickness: f64,
    pub slab_density: f64,
}

impl SphereSlabConfig {
    pub fn new(
        separation: f64,
        sphere_radius: f64,
        sphere_density: f64,
        slab_thickness: f64,
        slab_density: f64,
    ) -> Result<Self> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        let dens = |v: f64| v.is_finite() && v >= 0.0;
        require(pos(separation), || format!("separation must be positive, got {separation}"))?;
        require(pos(sphere_radius), || format!("sphere radius must be positive, got {sphere_radius}"))?;
        require(pos(slab_thickness), || format!("slab thickness must be positive, got {slab_thickness}"))?;
        require(dens(sphere_density) && dens(slab_density), || {
            format!("densities must be >= 0, got {sphere_density}, {slab_density}")
        })?;
        Ok(Self { separation, sphere_radius, sphere_density, slab_thickness, slab_density })
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(separation, self.sphere_radius, self.sphere_density, self.slab_thickness, self.slab_density)
    }

    pub fn sphere_mass(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.sphere_radius.powi(3) * self.sphere_density
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredConfig {
    /// Gap between the sphere's outer coating and the slab's top layer.
    pub separation: f64,
    pub sphere: LayeredSphere,
    pub slab: LayeredSlab,
    /// Thickness of the fictitious upper slab used only by the PFA.
    pub d2: Thickness,
}

impl LayeredConfig {
    pub fn new(separation: f64, sphere: LayeredSphere, slab: LayeredSlab, d2: Thickness) -> Result<Self> {
        require(separation.is_finite() && separation > 0.0, || {
            format!("separation must be positive, got {separation}")
        })?;
        Ok(Self { separation, sphere, slab, d2 })
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(separation, self.sphere, self.slab, self.d2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisProbe {
    /// Height above the disk's top face.
    pub z: f64,
    pub mass: f64,
}

impl AxisProbe {
    pub fn new(z: f64, mass: f64) -> Result<Self> {
        require(z.is_finite() && z > 0.0, || format!("probe height must be positive, got {z}"))?;
        require(mass.is_finite(), || format!("probe mass must be finite, got {mass}"))?;
        Ok(Self { z, mass })
    }
}

/// Generic power law F = -K ρ₁ m₂ / r^N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    pub k: f64,
    pub n: f64,
}

impl PowerLawParams {
    pub fn new(k: f64, n: f64) -> Result<Self> {
        require(k.is_finite(), || format!("coupling K must be finite, got {k}"))?;
        require(n.is_finite() && n > 0.0, || format!("exponent N must be positive, got {n}"))?;
        Ok(Self { k, n })
    }
}

/// Mechanical resonator used in the frequency-shift readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorParams {
    pub mass: f64,
    pub curvature: CurvatureRadii,
}

impl ResonatorParams {
    pub fn new(mass: f64, curvature: CurvatureRadii) -> Result<Self> {
        require(mass.is_finite() && mass > 0.0, || format!("resonator mass must be positive, got {mass}"))?;
        Ok(Self { mass, curvature })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityUnit {
    GramPerCm3,
    KgPerM3,
}

pub fn to_si_density(value: f64, unit: DensityUnit) -> Result<f64> {
    check_density(value)?;
    Ok(match unit {
        DensityUnit::GramPerCm3 => value * 1000.0,
        DensityUnit::KgPerM3 => value,
    })
}

// meters = value / divisor; dividing by an exact power of ten rounds correctly
const LENGTH_UNITS: &[(&str, f64)] = &[
    ("nm", 1e9),
    ("um", 1e6),
    ("µm", 1e6),
    ("mm", 1e3),
    ("cm", 1e2),
    ("m", 1.0),
];

fn split_number(s: &str) -> Result<(f64, &str)> {
    let s = s.trim();
    let end = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && s[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(end);
    let v: f64 = num
        .parse()
        .map_err(|_| Error::InvalidInput(format!("cannot parse number in '{s}'")))?;
    Ok((v, unit.trim()))
}

/// Parses a length such as `150 um`, `3.5e-6 m` or `100nm`. A bare number is meters.
pub fn parse_length(s: &str) -> Result<f64> {
    let (v, unit) = split_number(s)?;
    if unit.is_empty() {
        return Ok(v);
    }
    match LENGTH_UNITS.iter().find(|(u, _)| *u == unit) {
        Some((_, divisor)) => Ok(v / divisor),
        None => invalid(format!("unknown length unit '{unit}' in '{s}'")),
    }
}

/// Parses a density such as `19.28 g/cm3` or `2330 kg/m3`. A bare number is kg/m³.
pub fn parse_density(s: &str) -> Result<f64> {
    let (v, unit) = split_number(s)?;
    let unit = match unit {
        "" | "kg/m3" | "kg/m^3" => DensityUnit::KgPerM3,
        "g/cm3" | "g/cm^3" => DensityUnit::GramPerCm3,
        other => return invalid(format!("unknown density unit '{other}' in '{s}'")),
    };
    to_si_density(v, unit)
}

/// Signed force (or energy) stored as `mantissa * exp(ln_scale)`.
///
/// Sphere-slab Yukawa results carry a common `e^{-a/λ}` that underflows for
/// λ ≪ a; keeping it as `ln_scale = -a/λ` lets ratios and bounds be formed
/// without losing the value. Attractive values are negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceValue {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl ForceValue {
    pub fn new(mantissa: f64, ln_scale: f64) -> Self {
        Self { mantissa, ln_scale }
    }

    pub fn value(&self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }

    /// Natural log of the magnitude; `-inf` for an exactly zero value.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.ln_scale
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// `self / other` without forming either value.
    pub fn ratio(&self, other: &ForceValue) -> f64 {
        let scale = if self.ln_scale == other.ln_scale {
            1.0
        } else {
            (self.ln_scale - other.ln_scale).exp()
        };
        self.mantissa / other.mantissa * scale
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { mantissa: self.mantissa * factor, ln_scale: self.ln_scale }
    }
}
