//! Run configuration: JSON file plus command-line overrides.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wdl_core::certify::CertificationConfig;
use wdl_core::{CatParams, Ensemble, Grid1D, PacketParams, Space, StateKind, StateSpec};

use crate::error::CliError;

/// `min:max:count`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn to_grid(self) -> Result<Grid1D, CliError> {
        Grid1D::new(self.min, self.max, self.count).map_err(|e| CliError::Config(format!("grid: {e}")))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("expected min:max:count, got '{s}'"));
        };
        let num = |name: &str, v: &str| -> Result<f64, String> {
            let x: f64 = v.trim().parse().map_err(|_| format!("{name} '{v}' is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("{name} must be finite"))
            }
        };
        let spec = GridSpec {
            min: num("min", min)?,
            max: num("max", max)?,
            count: count
                .trim()
                .parse()
                .map_err(|_| format!("count '{count}' is not a non-negative integer"))?,
        };
        Grid1D::new(spec.min, spec.max, spec.count).map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "kT")]
    Kt,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "sigma")]
    Sigma,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Kt => "kT",
            SweepParam::D => "d",
            SweepParam::Sigma => "sigma",
        }
    }
}

/// `param=v1,v2,...` with `param` one of `kT`, `d`, `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, list) = s.split_once('=').ok_or_else(|| format!("expected param=v1,v2,..., got '{s}'"))?;
        let param = match name.trim() {
            "kT" => SweepParam::Kt,
            "d" => SweepParam::D,
            "sigma" => SweepParam::Sigma,
            other => return Err(format!("cannot sweep '{other}', expected kT, d or sigma")),
        };
        let values = list
            .split(',')
            .filter(|v| !v.trim().is_empty())
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| format!("sweep value '{v}' is not a finite number"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let spec = SweepSpec { param, values };
        spec.check()?;
        Ok(spec)
    }
}

impl SweepSpec {
    pub fn check(&self) -> Result<(), String> {
        if self.values.is_empty() {
            return Err(format!("sweep over {} has no values", self.param.as_str()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err("sweep values must be finite".into());
        }
        Ok(())
    }
}

/// Everything that determines the numbers a command produces. Output
/// destinations are not part of it, so the same computation echoes the same
/// header wherever it is written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma: f64,
    pub hbar: f64,
    pub mass: f64,
    #[serde(rename = "kT")]
    pub kt: f64,
    pub x0: f64,
    pub v0: f64,
    /// Cat separation; ignored for single packets.
    pub d: f64,
    pub state: StateKind,
    pub ensemble: Ensemble,
    pub space: Space,
    /// Empty means the command's default times.
    pub times: Vec<f64>,
    pub grid: Option<GridSpec>,
    pub pgrid: Option<GridSpec>,
    pub sweep: Option<SweepSpec>,
    /// Overrides for `verify`; the standard certification set when absent.
    pub certification: Option<CertificationConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PacketParams::default();
        Self {
            sigma: p.sigma,
            hbar: p.hbar,
            mass: p.mass,
            kt: p.kt,
            x0: p.x0,
            v0: p.v0,
            d: 0.0,
            state: StateKind::Single,
            ensemble: Ensemble::Pure,
            space: Space::Position,
            times: Vec::new(),
            grid: None,
            pgrid: None,
            sweep: None,
            certification: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn packet(&self) -> PacketParams {
        PacketParams {
            hbar: self.hbar,
            mass: self.mass,
            kt: self.kt,
            sigma: self.sigma,
            x0: self.x0,
            v0: self.v0,
        }
    }

    pub fn state_spec(&self) -> Result<StateSpec, CliError> {
        let p = self.packet();
        let spec = match self.state {
            StateKind::Single => StateSpec::single(p, self.ensemble),
            StateKind::Cat => StateSpec::cat(CatParams::new(p, self.d), self.ensemble),
        };
        spec.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn check_times(&self) -> Result<(), CliError> {
        match self.times.iter().find(|t| !t.is_finite()) {
            Some(t) => Err(CliError::Config(format!("time {t} is not finite"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses() {
        let g: GridSpec = "-5:5:11".parse().unwrap();
        assert_eq!(g, GridSpec { min: -5.0, max: 5.0, count: 11 });
        assert_eq!(g.to_string().parse::<GridSpec>().unwrap(), g);
        for bad in ["", "1:2", "1:2:3:4", "a:1:3", "0:1:x", "1:0:5", "0:1:1", "0:inf:5", "0:1:-3"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_spec_parses() {
        let s: SweepSpec = "d=5,10, 20".parse().unwrap();
        assert_eq!(s.param, SweepParam::D);
        assert_eq!(s.values, vec![5.0, 10.0, 20.0]);
        assert!("d=".parse::<SweepSpec>().unwrap_err().contains("no values"));
        assert!("mass=1".parse::<SweepSpec>().is_err());
        assert!("kT=1,nan".parse::<SweepSpec>().is_err());
        assert!("kT".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn config_round_trips_through_canonical_json() {
        let c = RunConfig {
            kt: 100.0,
            d: 10.0,
            state: StateKind::Cat,
            times: vec![0.1, 1.0 / 3.0],
            grid: Some(GridSpec { min: -1.0, max: 2.5, count: 7 }),
            sweep: Some("kT=1,4".parse().unwrap()),
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_json(&c.canonical_json()).unwrap(), c);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfig::from_json(r#"{"sigma": 2, "colour": "red"}"#).is_err());
        let c = RunConfig::from_json(r#"{"kT": 3, "state": "cat"}"#).unwrap();
        assert_eq!((c.kt, c.state, c.sigma), (3.0, StateKind::Cat, 1.0));
    }
}
