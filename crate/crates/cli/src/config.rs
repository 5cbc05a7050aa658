//! The `anglekit-config/1` JSON format for point configurations.

use anglekit::angle::PiRational;
use anglekit::census::{CensusError, ConfigPoints, Configuration};
use anglekit::cyclic::CyclicConfig;
use anglekit::exact::Point;
use anglekit::numeric::{Expr, NumericPoint};
use anglekit::Scalar;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const CONFIG_SCHEMA: &str = "anglekit-config/1";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`, expected `{CONFIG_SCHEMA}`")]
    Schema(String),
    #[error("{domain} config is missing `{field}`")]
    Missing { domain: &'static str, field: &'static str },
    #[error("cannot parse coordinate `{0}`")]
    Coordinate(String),
    #[error("cannot parse declared angle `{0}`")]
    Declared(String),
    #[error(transparent)]
    Census(#[from] CensusError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    Quadratic,
    Concyclic,
    Numeric,
}

/// On-disk form of a [`Configuration`].
///
/// Quadratic points are `(a + b*sqrt d)` strings or plain rationals,
/// numeric points are closed-form expressions (`0.25`, `cos(pi/5)`,
/// `(3 - sqrt(5))/2 * sin(3/5 pi)`), and concyclic configs list vertex
/// indices of the regular `n`-gon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: DomainTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[String; 2]>>,
    /// Expected nonzero angles, as `p/q pi` strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared: Option<Vec<String>>,
    /// Whether the zero angle occurs, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_zero: Option<bool>,
}

impl ConfigFile {
    pub fn from_configuration(cfg: &Configuration) -> ConfigFile {
        let mut file = ConfigFile {
            schema: CONFIG_SCHEMA.to_string(),
            name: cfg.name().map(str::to_string),
            domain: DomainTag::Quadratic,
            d: None,
            n: None,
            vertices: None,
            center: None,
            points: None,
            declared: cfg.declared().map(|d| d.iter().map(PiRational::to_ascii).collect()),
            declared_zero: cfg.declared_zero(),
        };
        match cfg.points() {
            ConfigPoints::Quadratic { d, points } => {
                file.d = Some(*d);
                file.points = Some(points.iter().map(|p| [p.x.to_string(), p.y.to_string()]).collect());
            }
            ConfigPoints::Cyclic(c) => {
                file.domain = DomainTag::Concyclic;
                file.n = Some(c.n());
                file.vertices = Some(c.vertices().to_vec());
                file.center = Some(c.include_center());
            }
            ConfigPoints::Numeric(p) => {
                file.domain = DomainTag::Numeric;
                file.points = Some(p.iter().map(|q| [q.x.to_string(), q.y.to_string()]).collect());
            }
        }
        file
    }

    pub fn to_configuration(&self) -> Result<Configuration, ConfigError> {
        if self.schema != CONFIG_SCHEMA {
            return Err(ConfigError::Schema(self.schema.clone()));
        }
        let points = match self.domain {
            DomainTag::Quadratic => {
                let raw = self.points.as_ref().ok_or(ConfigError::Missing { domain: "quadratic", field: "points" })?;
                let points = raw
                    .iter()
                    .map(|[x, y]| Ok(Point::new(scalar(x)?, scalar(y)?)))
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                let d = match self.d {
                    Some(d) => d,
                    None => points.iter().flat_map(|p| [p.x.d(), p.y.d()]).find(|&d| d != 0).unwrap_or(0),
                };
                ConfigPoints::Quadratic { d, points }
            }
            DomainTag::Concyclic => {
                let n = self.n.ok_or(ConfigError::Missing { domain: "concyclic", field: "n" })?;
                let vertices = self.vertices.clone().unwrap_or_else(|| (0..n).collect());
                let c = CyclicConfig::new(n, vertices, self.center.unwrap_or(false)).map_err(CensusError::from)?;
                ConfigPoints::Cyclic(c)
            }
            DomainTag::Numeric => {
                let raw = self.points.as_ref().ok_or(ConfigError::Missing { domain: "numeric", field: "points" })?;
                let points = raw
                    .iter()
                    .map(|[x, y]| Ok(NumericPoint::new(expr(x)?, expr(y)?)))
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                ConfigPoints::Numeric(points)
            }
        };
        let mut cfg = Configuration::new(points)?;
        if let Some(name) = &self.name {
            cfg = cfg.with_name(name.clone());
        }
        if let Some(declared) = &self.declared {
            let values = declared
                .iter()
                .map(|s| s.parse::<PiRational>().map_err(|_| ConfigError::Declared(s.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            cfg = cfg.with_declared(values);
        }
        if let Some(zero) = self.declared_zero {
            cfg = cfg.with_declared_zero(zero);
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config files always serialize")
    }
}

fn scalar(s: &str) -> Result<Scalar, ConfigError> {
    s.parse().map_err(|_| ConfigError::Coordinate(s.to_string()))
}

fn expr(s: &str) -> Result<Expr, ConfigError> {
    s.parse().map_err(|_| ConfigError::Coordinate(s.to_string()))
}

pub fn parse_config(text: &str) -> Result<Configuration, ConfigError> {
    let file: ConfigFile = serde_json::from_str(text)?;
    file.to_configuration()
}

pub fn load_config(path: &Path) -> Result<Configuration, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}
