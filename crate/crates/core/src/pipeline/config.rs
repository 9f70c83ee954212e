use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::Format;
use crate::solver::optimize::OptimizerParams;
use crate::solver::{RadiusMode, Reduction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn unit(dim: usize) -> Self {
        DomainBox { lo: vec![0.0; dim], hi: vec![1.0; dim] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Largest accepted departure from a right angle, radians.
    pub perp: f64,
    /// Largest accepted per-simplex residual for the exact mode.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { perp: 1e-6, residual: 1e-8 }
    }
}

/// Everything one pipeline run needs. Read from TOML; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub seed: u64,
    /// Box the points are drawn from and cells are clipped to. Unit box when
    /// absent; around the loaded points when `points` is set.
    pub domain: Option<DomainBox>,
    /// Points document to load instead of generating.
    pub points: Option<PathBuf>,
    pub mode: RadiusMode,
    /// Same radius for every point, whatever `mode` says.
    pub equal_radii: bool,
    pub reduction: Reduction,
    pub optimizer: OptimizerParams,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub render: bool,
    /// Comma-separated SVG layers.
    pub layers: String,
    pub allow_invalid: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            n: 20,
            seed: 1,
            domain: None,
            points: None,
            mode: RadiusMode::ExactIntersection,
            equal_radii: false,
            reduction: Reduction::Sequential,
            optimizer: OptimizerParams::default(),
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            formats: vec![Format::Json],
            render: false,
            layers: "all".into(),
            allow_invalid: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn effective_mode(&self) -> RadiusMode {
        if self.equal_radii {
            RadiusMode::EqualRadii
        } else {
            self.mode
        }
    }

    pub fn domain_box(&self) -> DomainBox {
        self.domain.clone().unwrap_or_else(|| DomainBox::unit(self.dim))
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!("dim must be 2 or 3, got {}", self.dim)));
        }
        if self.points.is_none() && self.n < self.dim + 1 {
            return Err(Error::TooFewPoints { needed: self.dim + 1, got: self.n });
        }
        if let Some(b) = &self.domain {
            if b.lo.len() != self.dim || b.hi.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: b.lo.len().max(b.hi.len()) });
            }
            if b.lo.iter().zip(&b.hi).any(|(a, c)| !(a < c)) || b.lo.iter().chain(&b.hi).any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig("domain needs lo < hi in every coordinate".into()));
            }
        }
        let t = &self.tolerances;
        if !(t.perp > 0.0 && t.residual > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        self.layers.parse::<crate::io::Layers>()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let c = RunConfig {
            dim: 3,
            n: 9,
            domain: Some(DomainBox::unit(3)),
            formats: vec![Format::Json, Format::Vtk],
            ..RunConfig::default()
        };
        let back = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c = RunConfig::from_toml("n = 50\nmode = \"radical\"\n[tolerances]\nperp = 1e-9\n").unwrap();
        assert_eq!(c.n, 50);
        assert_eq!(c.mode, RadiusMode::RadicalCenter);
        assert_eq!(c.tolerances.perp, 1e-9);
        assert_eq!(c.tolerances.residual, 1e-8);
        assert_eq!(c.dim, 2);
    }

    #[test]
    fn invalid_configs() {
        let c = RunConfig { n: 2, ..Default::default() };
        assert_eq!(c.validate(), Err(Error::TooFewPoints { needed: 3, got: 2 }));
        let c = RunConfig { dim: 4, ..Default::default() };
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let mut c = RunConfig::default();
        c.tolerances.perp = 0.0;
        assert!(c.validate().is_err());
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }
}
