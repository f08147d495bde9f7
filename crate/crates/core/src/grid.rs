//! One-dimensional sweep grids.

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepGrid {
    pub fn new(min: f64, max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        require(min.is_finite() && max.is_finite(), || format!("grid bounds must be finite, got [{min}, {max}]"))?;
        require(points >= 1, || "grid needs at least one point".to_string())?;
        require(min <= max, || format!("grid minimum {min} exceeds maximum {max}"))?;
        require(points > 1 || min == max, || "a one-point grid needs min == max".to_string())?;
        if spacing == Spacing::Log {
            require(min > 0.0, || format!("log grid needs a positive minimum, got {min}"))?;
        }
        Ok(Self { min, max, points, spacing })
    }

    pub fn log(min: f64, max: f64, points: usize) -> Result<Self> {
        Self::new(min, max, points, Spacing::Log)
    }

    pub fn linear(min: f64, max: f64, points: usize) -> Result<Self> {
        Self::new(min, max, points, Spacing::Linear)
    }

    /// Grid values; the first and last are exactly `min` and `max`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = self.points - 1;
        let steps = last as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == last {
                    return self.max;
                }
                let t = i as f64 / steps;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}
