//! Line-oriented `key = value` configuration with `#` comments.
//!
//! Layers are merged in order (built-in defaults, preset, config file,
//! command-line flags); later layers win. Every value keeps the place it came
//! from so errors can point at it.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use ypfa_core::model::{parse_density, parse_length, PhysicalConstants, Thickness};

use crate::error::{CliError, Result};

/// Defaults for every key: a 4.1 g/cm³ sphere with Cr and Au coats, 100 nm
/// above a Si slab carrying the same two coats.
pub const DEFAULTS: &str = "\
constants.g = 6.67430e-11
yukawa.alpha = 1
yukawa.lambda = 100 um, 500 um, 1000 um

lambda.min = 1 nm
lambda.max = 1 mm
lambda.points = 200
lambda.spacing = log

separation = 100 nm

sphere.radius = 150 um
sphere.radius_kind = core
sphere.density = 4.1 g/cm3
sphere.inner_coat.thickness = 10 nm
sphere.inner_coat.density = 7.14 g/cm3
sphere.outer_coat.thickness = 180 nm
sphere.outer_coat.density = 19.28 g/cm3

slab.base.thickness = 3.5 um
slab.base.density = 2.33 g/cm3
slab.middle.thickness = 10 nm
slab.middle.density = 7.14 g/cm3
slab.top.thickness = 210 nm
slab.top.density = 19.28 g/cm3

pfa.d2 = inf

xi.mode = rd
disk.thickness = 3.5 um
disk.density = 2.33 g/cm3
disk.kappa = 2
disk.kappa.min = 1
disk.kappa.max = 100
disk.kappa.points = 100
power.n = 2
power.n.min = 0.5
power.n.max = 4.5
power.n.points = 81

limits.residuals =
limits.method = pfa
limits.geometry = homogeneous

verify.tolerance =
verify.rel_tol = 1e-10
verify.closed_form_g_scale = 1
";

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    /// `file:line`, `preset name` or `flag`.
    pub origin: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

/// Keys a configuration may set; anything else is rejected as a likely typo.
pub fn known_keys() -> Vec<&'static str> {
    let mut keys: Vec<&str> = DEFAULTS
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, _)| k.trim()))
        .collect();
    keys.push("sphere.core_radius");
    keys
}

impl Config {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let known = known_keys();
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let origin = format!("{source}:{}", i + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("{origin}: expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if !known.contains(&key) {
                return Err(CliError::input(format!("{origin}: unknown key `{key}`")));
            }
            if let Some(prev) = cfg.entries.get(key) {
                return Err(CliError::input(format!("{origin}: `{key}` already set at {}", prev.origin)));
            }
            cfg.entries.insert(key.to_string(), Entry { value: value.trim().to_string(), origin });
        }
        Ok(cfg)
    }

    pub fn defaults() -> Self {
        Self::parse(DEFAULTS, "defaults").expect("built-in defaults parse")
    }

    /// Overlays `other`; its entries replace ours.
    pub fn merge(&mut self, other: Config) {
        self.entries.extend(other.entries);
    }

    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<()> {
        if !known_keys().contains(&key) {
            return Err(CliError::input(format!("{origin}: unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), Entry { value: value.trim().to_string(), origin: origin.to_string() });
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }
}

/// Typed access that records every value read, in SI, for the run manifest.
pub struct Resolver<'a> {
    cfg: &'a Config,
    used: BTreeMap<String, Value>,
}

fn list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

impl<'a> Resolver<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Self { cfg, used: BTreeMap::new() }
    }

    pub fn has(&self, key: &str) -> bool {
        self.cfg.get(key).is_some_and(|e| !e.value.is_empty())
    }

    fn entry(&self, key: &str) -> Result<&'a Entry> {
        match self.cfg.get(key) {
            Some(e) if !e.value.is_empty() => Ok(e),
            Some(e) => Err(CliError::input(format!("{}: `{key}` has no value", e.origin))),
            None => Err(CliError::input(format!("`{key}` is not set"))),
        }
    }

    fn parsed<T>(&mut self, key: &str, f: impl Fn(&str) -> ypfa_core::Result<T>, record: impl Fn(&T) -> Value) -> Result<T> {
        let e = self.entry(key)?;
        let v = f(&e.value).map_err(|err| CliError::input(format!("{}: `{key}`: {err}", e.origin)))?;
        self.used.insert(key.to_string(), record(&v));
        Ok(v)
    }

    fn parsed_list<T>(&mut self, key: &str, f: impl Fn(&str) -> ypfa_core::Result<T>, record: impl Fn(&T) -> Value) -> Result<Vec<T>> {
        let e = self.entry(key)?;
        let items = list(&e.value);
        if items.is_empty() {
            return Err(CliError::input(format!("{}: `{key}` is an empty list", e.origin)));
        }
        let vs = items
            .into_iter()
            .map(|s| f(s).map_err(|err| CliError::input(format!("{}: `{key}`: {err}", e.origin))))
            .collect::<Result<Vec<T>>>()?;
        self.used.insert(key.to_string(), Value::Array(vs.iter().map(&record).collect()));
        Ok(vs)
    }

    pub fn number(&mut self, key: &str) -> Result<f64> {
        self.parsed(key, parse_number, |v| json!(v))
    }

    pub fn numbers(&mut self, key: &str) -> Result<Vec<f64>> {
        self.parsed_list(key, parse_number, |v| json!(v))
    }

    pub fn optional_number(&mut self, key: &str) -> Result<Option<f64>> {
        if !self.has(key) {
            self.used.insert(key.to_string(), Value::Null);
            return Ok(None);
        }
        self.number(key).map(Some)
    }

    pub fn count(&mut self, key: &str) -> Result<usize> {
        self.parsed(
            key,
            |s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| ypfa_core::Error::InvalidInput(format!("expected a whole number, got `{s}`")))
            },
            |v| json!(v),
        )
    }

    pub fn length(&mut self, key: &str) -> Result<f64> {
        self.parsed(key, parse_length, |v| json!(v))
    }

    pub fn lengths(&mut self, key: &str) -> Result<Vec<f64>> {
        self.parsed_list(key, parse_length, |v| json!(v))
    }

    pub fn density(&mut self, key: &str) -> Result<f64> {
        self.parsed(key, parse_density, |v| json!(v))
    }

    pub fn thicknesses(&mut self, key: &str) -> Result<Vec<Thickness>> {
        self.parsed_list(key, |s| s.parse::<Thickness>(), thickness_json)
    }

    pub fn text(&mut self, key: &str) -> Result<String> {
        self.parsed(key, |s| Ok(s.to_string()), |v| json!(v))
    }

    /// One of `choices`, case-insensitive.
    pub fn choice(&mut self, key: &str, choices: &[&str]) -> Result<String> {
        let v = self.text(key)?.to_ascii_lowercase();
        if choices.contains(&v.as_str()) {
            Ok(v)
        } else {
            let e = self.entry(key)?;
            Err(CliError::input(format!("{}: `{key}` must be one of {}, got `{v}`", e.origin, choices.join("|"))))
        }
    }

    pub fn constants(&mut self) -> Result<PhysicalConstants> {
        let g = self.number("constants.g")?;
        Ok(PhysicalConstants::new(g)?)
    }

    pub fn into_resolved(self) -> BTreeMap<String, Value> {
        self.used
    }
}

pub fn thickness_json(t: &Thickness) -> Value {
    match t {
        Thickness::Finite(d) => json!(d),
        Thickness::Infinite => json!("inf"),
    }
}

fn parse_number(s: &str) -> ypfa_core::Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ypfa_core::Error::InvalidInput(format!("expected a number, got `{s}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ypfa_core::Error::InvalidInput(format!("expected a finite number, got `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_units_comments_and_lists() {
        let cfg = Config::parse(
            "# stack\nsphere.radius = 50 um, 100um ,150 um  # three\nslab.top.density = 19.28 g/cm3\npfa.d2 = inf, 1 mm\n\n",
            "t.cfg",
        )
        .unwrap();
        let mut r = Resolver::new(&cfg);
        assert_eq!(r.lengths("sphere.radius").unwrap(), vec![50e-6, 100e-6, 150e-6]);
        assert!((r.density("slab.top.density").unwrap() - 19280.0).abs() < 1e-9);
        assert_eq!(r.thicknesses("pfa.d2").unwrap(), vec![Thickness::Infinite, Thickness::Finite(1e-3)]);
        let used = r.into_resolved();
        assert_eq!(used["pfa.d2"], json!(["inf", 1e-3]));
    }

    #[test]
    fn errors_name_the_line() {
        let e = Config::parse("separation = 1 nm\nsphere.radiuss = 3 um\n", "x.cfg").unwrap_err();
        assert!(e.to_string().contains("x.cfg:2"), "{e}");
        let e = Config::parse("separation 1 nm\n", "x.cfg").unwrap_err();
        assert!(e.to_string().contains("x.cfg:1"), "{e}");
        let e = Config::parse("separation = 1 nm\nseparation = 2 nm\n", "x.cfg").unwrap_err();
        assert!(e.to_string().contains("x.cfg:1"), "{e}");
        let cfg = Config::parse("separation = 1 parsec\n", "y.cfg").unwrap();
        let e = Resolver::new(&cfg).length("separation").unwrap_err();
        assert!(e.to_string().contains("y.cfg:1"), "{e}");
    }

    #[test]
    fn later_layers_win() {
        let mut cfg = Config::defaults();
        cfg.merge(Config::parse("separation = 250 nm", "f").unwrap());
        cfg.set("lambda.points", "7", "flag").unwrap();
        let mut r = Resolver::new(&cfg);
        assert!((r.length("separation").unwrap() - 250e-9).abs() < 1e-24);
        assert_eq!(r.count("lambda.points").unwrap(), 7);
        assert!(cfg.set("nope", "1", "flag").is_err());
    }

    #[test]
    fn empty_list_is_rejected() {
        let cfg = Config::parse("sphere.radius = ,", "f").unwrap();
        assert!(Resolver::new(&cfg).lengths("sphere.radius").is_err());
    }

    #[test]
    fn round_trip_keeps_fifteen_digits() {
        let x = 1.23456789012345e-7;
        let cfg = Config::parse(&format!("separation = {x:.14e} m"), "f").unwrap();
        let v = Resolver::new(&cfg).length("separation").unwrap();
        assert!(((v - x) / x).abs() < 1e-15);
        let cfg = Config::parse("separation = 123.456789012345 nm", "f").unwrap();
        let v = Resolver::new(&cfg).length("separation").unwrap();
        assert!(((v - 123.456789012345e-9) / v).abs() < 1e-15);
    }
}
