//! Physical parameters, derived length/velocity scales and sampling grids.
//!
//! Everything is an immutable value type. Temperature is carried as the
//! energy `kT`; there is no hidden unit system, the natural-units default
//! (`ħ = m = σ = 1`, `kT = 0`) just fills in ones.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result, Violations};

/// A minimum-uncertainty packet of width `sigma`, centred at `x0` and
/// moving with velocity `v0`, plus the bath energy `kT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub hbar: f64,
    pub mass: f64,
    #[serde(rename = "kT")]
    pub kt: f64,
    pub sigma: f64,
    pub x0: f64,
    pub v0: f64,
}

impl Default for PacketParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            kt: 0.0,
            sigma: 1.0,
            x0: 0.0,
            v0: 0.0,
        }
    }
}

impl PacketParams {
    /// Natural units with the given width and bath energy.
    pub fn natural(sigma: f64, kt: f64) -> Self {
        Self {
            sigma,
            kt,
            ..Self::default()
        }
    }

    pub fn with_kt(self, kt: f64) -> Self {
        Self { kt, ..self }
    }

    pub fn with_velocity(self, v0: f64) -> Self {
        Self { v0, ..self }
    }

    pub fn with_center(self, x0: f64) -> Self {
        Self { x0, ..self }
    }

    /// Reports every violated invariant, never just the first.
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Violations::default();
        self.collect_violations(&mut out);
        out.into_result()
    }

    fn collect_violations(&self, out: &mut Violations) {
        positive(out, "hbar", self.hbar);
        positive(out, "mass", self.mass);
        if !(self.kt.is_finite() && self.kt >= 0.0) {
            out.push("kT", "kT must be non-negative");
        }
        positive(out, "sigma", self.sigma);
        if !self.x0.is_finite() {
            out.push("x0", "x0 must be finite");
        }
        if !self.v0.is_finite() {
            out.push("v0", "v0 must be finite");
        }
    }

    /// Quantum spreading velocity `ħ/(2mσ)`.
    pub fn v_q(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.sigma)
    }

    /// Mean thermal velocity `sqrt(kT/m)`.
    pub fn v_bar(&self) -> f64 {
        (self.kt / self.mass).sqrt()
    }
}

fn positive(out: &mut Violations, field: &'static str, value: f64) {
    if !(value.is_finite() && value > 0.0) {
        out.push(field, format!("{field} must be positive"));
    }
}

/// Two identical packets centred at `±d/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    pub base: PacketParams,
    pub d: f64,
}

impl CatParams {
    pub fn new(base: PacketParams, d: f64) -> Self {
        Self { base, d }
    }

    /// `d = 0` is accepted and reduces to the single packet. The pair is
    /// always centred on the origin, so `x0` must be zero.
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Violations::default();
        self.base.collect_violations(&mut out);
        if !(self.d.is_finite() && self.d >= 0.0) {
            out.push("d", "d must be non-negative");
        }
        if self.base.x0 != 0.0 {
            out.push("x0", "x0 must be 0 for a cat state");
        }
        out.into_result()
    }

    /// Normalization `N = [2(1 + exp(-d²/8σ²))]^{-1/2}` of the superposition.
    pub fn normalization(&self) -> f64 {
        cat_normalization(self)
    }
}

pub fn cat_normalization(params: &CatParams) -> f64 {
    let overlap = (-params.d * params.d / (8.0 * params.base.sigma * params.base.sigma)).exp();
    (2.0 * (1.0 + overlap)).sqrt().recip()
}

/// Every time-dependent width and velocity scale at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    pub t: f64,
    pub v_q: f64,
    pub v_bar: f64,
    /// `σ²(t) = σ² + (v_q t)²`
    pub sigma_t_sq: f64,
    pub sigma_t: f64,
    /// Complex width `Σ(t) = σ + i v_q t`.
    pub big_sigma: Complex64,
    /// `w²(t) = σ²(t) + (v̄ t)²`
    pub w_t_sq: f64,
    pub w_t: f64,
}

pub fn derive_scales(params: &PacketParams, t: f64) -> Result<DerivedScales> {
    params.validate()?;
    ensure_finite("t", t)?;
    Ok(scales_unchecked(params, t))
}

pub(crate) fn scales_unchecked(params: &PacketParams, t: f64) -> DerivedScales {
    let v_q = params.v_q();
    let v_bar = params.v_bar();
    let sigma_t_sq = params.sigma * params.sigma + (v_q * t) * (v_q * t);
    let w_t_sq = sigma_t_sq + (v_bar * t) * (v_bar * t);
    DerivedScales {
        t,
        v_q,
        v_bar,
        sigma_t_sq,
        sigma_t: sigma_t_sq.sqrt(),
        big_sigma: Complex64::new(params.sigma, v_q * t),
        w_t_sq,
        w_t: w_t_sq.sqrt(),
    }
}

/// Uniform 1-D grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let grid = Self { min, max, count };
        grid.check()?;
        Ok(grid)
    }

    /// Symmetric window `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, count: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, count)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if self.count < 2 {
            return Err(Error::InvalidGrid(format!(
                "count must be at least 2, got {}",
                self.count
            )));
        }
        if self.max <= self.min {
            return Err(Error::InvalidGrid(format!(
                "max ({}) must exceed min ({})",
                self.max, self.min
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * (i as f64) / ((self.count - 1) as f64)
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Phase-space grid; values are stored with `x` as rows and `p` as columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub p: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, p: Grid1D) -> Result<Self> {
        x.check()?;
        p.check()?;
        Ok(Self { x, p })
    }

    pub fn len(&self) -> usize {
        self.x.count * self.p.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
