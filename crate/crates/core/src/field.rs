//! Sampled densities and Wigner fields with their metadata.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{Grid1D, Grid2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Position,
    Momentum,
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    Pure,
    Thermal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Single,
    Cat,
}

macro_rules! str_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    other => Err(format!(
                        concat!("unknown ", stringify!($ty), " '{}', expected one of: {}"),
                        other,
                        [$($name),+].join(", ")
                    )),
                }
            }
        }
    };
}

str_enum!(Space { Position => "position", Momentum => "momentum", Phase => "phase" });
str_enum!(Ensemble { Pure => "pure", Thermal => "thermal" });
str_enum!(StateKind { Single => "single", Cat => "cat" });

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axes {
    Line(Grid1D),
    Plane(Grid2D),
}

/// Values sampled on a grid. Plane fields are row-major with `x` rows and
/// `p` columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionField {
    pub axes: Axes,
    pub values: Vec<f64>,
    pub space: Space,
    pub ensemble: Ensemble,
    pub state: StateKind,
    pub time: f64,
}

impl DistributionField {
    pub fn line(&self) -> Option<&Grid1D> {
        match &self.axes {
            Axes::Line(g) => Some(g),
            Axes::Plane(_) => None,
        }
    }

    pub fn plane(&self) -> Option<&Grid2D> {
        match &self.axes {
            Axes::Plane(g) => Some(g),
            Axes::Line(_) => None,
        }
    }

    /// Row `i` of a plane field (all `p` samples at `x_i`).
    pub fn row(&self, i: usize) -> &[f64] {
        let g = self.plane().expect("row() on a 1-D field");
        &self.values[i * g.p.count..(i + 1) * g.p.count]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest pointwise absolute difference to another field on the same axes.
    pub fn max_abs_diff(&self, other: &DistributionField) -> f64 {
        assert_eq!(self.axes, other.axes, "fields sampled on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
