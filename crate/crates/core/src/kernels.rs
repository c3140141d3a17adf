//! Closed-form wavefunctions, densities and Wigner functions for single
//! Gaussian packets and two-packet cat states, pure and thermally averaged.
//!
//! Every cat-state distribution has the same three-term shape
//!
//! ```text
//!     packet(+d/2) + packet(-d/2) + envelope * cos(phase)
//! ```
//!
//! and is evaluated through [`cat_terms`], which the decoherence analyzer
//! reuses. Branches:
//!
//! | state  | ensemble | position           | momentum                 | phase                 |
//! |--------|----------|--------------------|--------------------------|-----------------------|
//! | single | pure     | Gaussian, σ(t)     | Gaussian, ħ/2σ           | sheared Gaussian      |
//! | single | thermal  | Gaussian, w(t)     | Gaussian, m·√(v_q²+v̄²)   | thermal sheared       |
//! | cat    | pure     | 3-term, chirped    | 2N²P(1+cos(Pd/ħ))        | 3-term, cos(Pd/ħ)     |
//! | cat    | thermal  | 3-term, damped     | 3-term, damped           | 3-term, damped        |
//!
//! Thermal branches average over a Maxwell distribution of the full
//! velocity, so they require `v0 = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result, Violations};
use crate::field::{Axes, DistributionField, Ensemble, Space, StateKind};
use crate::model::{cat_normalization, scales_unchecked, CatParams, DerivedScales, Grid1D, Grid2D, PacketParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum State {
    Single(PacketParams),
    Cat(CatParams),
}

/// A validated state together with its ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    state: State,
    ensemble: Ensemble,
}

impl StateSpec {
    pub fn new(state: State, ensemble: Ensemble) -> Result<Self> {
        let mut violations = match &state {
            State::Single(p) => p.validate().err().unwrap_or_default(),
            State::Cat(c) => c.validate().err().unwrap_or_default(),
        };
        let base = match &state {
            State::Single(p) => p,
            State::Cat(c) => &c.base,
        };
        if ensemble == Ensemble::Thermal && base.v0 != 0.0 {
            violations.push("v0", "v0 must be 0 for a thermal ensemble");
        }
        if violations.is_empty() {
            Ok(Self { state, ensemble })
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    pub fn single(params: PacketParams, ensemble: Ensemble) -> Result<Self> {
        Self::new(State::Single(params), ensemble)
    }

    pub fn cat(params: CatParams, ensemble: Ensemble) -> Result<Self> {
        Self::new(State::Cat(params), ensemble)
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn kind(&self) -> StateKind {
        match self.state {
            State::Single(_) => StateKind::Single,
            State::Cat(_) => StateKind::Cat,
        }
    }

    pub fn params(&self) -> &PacketParams {
        match &self.state {
            State::Single(p) => p,
            State::Cat(c) => &c.base,
        }
    }

    pub fn cat_params(&self) -> Option<&CatParams> {
        match &self.state {
            State::Single(_) => None,
            State::Cat(c) => Some(c),
        }
    }

    /// Packet separation, zero for a single packet.
    pub fn separation(&self) -> f64 {
        self.cat_params().map_or(0.0, |c| c.d)
    }

    pub fn with_ensemble(&self, ensemble: Ensemble) -> Result<Self> {
        Self::new(self.state, ensemble)
    }

    pub fn scales(&self, t: f64) -> DerivedScales {
        scales_unchecked(self.params(), t)
    }
}

/// Where a cat distribution is probed; the variant fixes the space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    Position(f64),
    Momentum(f64),
    Phase { x: f64, p: f64 },
}

impl Probe {
    pub fn space(&self) -> Space {
        match self {
            Probe::Position(_) => Space::Position,
            Probe::Momentum(_) => Space::Momentum,
            Probe::Phase { .. } => Space::Phase,
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Probe::Position(x) => ensure_finite("x", x),
            Probe::Momentum(p) => ensure_finite("p", p),
            Probe::Phase { x, p } => {
                ensure_finite("x", x)?;
                ensure_finite("p", p)
            }
        }
    }
}

/// The three terms of a cat distribution at one probe point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatTerms {
    pub packet_plus: f64,
    pub packet_minus: f64,
    /// Full factor multiplying the cosine.
    pub envelope: f64,
    pub phase: f64,
}

impl CatTerms {
    pub fn total(&self) -> f64 {
        self.packet_plus + self.packet_minus + self.envelope * self.phase.cos()
    }
}

// ---------------------------------------------------------------------------
// single packet, closed forms

fn gaussian(z: f64, var: f64) -> f64 {
    (-z * z / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn single_position_pure(p: &PacketParams, s: &DerivedScales, x: f64) -> f64 {
    gaussian(x - p.x0 - p.v0 * s.t, s.sigma_t_sq)
}

fn single_position_thermal(p: &PacketParams, s: &DerivedScales, x: f64) -> f64 {
    gaussian(x - p.x0, s.w_t_sq)
}

fn single_momentum_pure(p: &PacketParams, mom: f64) -> f64 {
    let big_p = mom - p.mass * p.v0;
    let ratio = p.sigma / p.hbar;
    (2.0 * ratio * ratio / PI).sqrt() * (-2.0 * ratio * ratio * big_p * big_p).exp()
}

fn thermal_momentum_variance(p: &PacketParams, s: &DerivedScales) -> f64 {
    p.mass * p.mass * (s.v_q * s.v_q + s.v_bar * s.v_bar)
}

fn single_momentum_thermal(p: &PacketParams, s: &DerivedScales, mom: f64) -> f64 {
    gaussian(mom, thermal_momentum_variance(p, s))
}

/// Pure Wigner function; `x_rel` is measured from the packet centre `x0`.
fn single_wigner_pure(p: &PacketParams, s: &DerivedScales, x_rel: f64, mom: f64) -> f64 {
    let big_x = x_rel - mom * s.t / p.mass;
    let big_p = mom - p.mass * p.v0;
    let ratio = p.sigma / p.hbar;
    (-big_x * big_x / (2.0 * p.sigma * p.sigma) - 2.0 * ratio * ratio * big_p * big_p).exp()
        / (PI * p.hbar)
}

/// Maxwell-averaged Wigner function; `x_rel` is measured from `x0`.
fn single_wigner_thermal(p: &PacketParams, s: &DerivedScales, x_rel: f64, mom: f64) -> f64 {
    let vq2 = s.v_q * s.v_q;
    let spread = vq2 + s.v_bar * s.v_bar;
    let sheared = x_rel - mom * s.t / p.mass;
    let amplitude = (vq2 / spread).sqrt() / (PI * p.hbar);
    amplitude
        * (-sheared * sheared / (2.0 * p.sigma * p.sigma)
            - mom * mom / (2.0 * p.mass * p.mass * spread))
            .exp()
}

// ---------------------------------------------------------------------------
// cat state, three-term closed forms

/// Decomposes a cat distribution into its packet and interference terms.
///
/// Position/pure is the free-evolution density with the `ħ t d x₁` chirp,
/// position/thermal its Maxwell average with width `w(t)`. Momentum/pure is
/// the `x`-marginal of the pure Wigner function, with cosine argument
/// `(p − mv) d/ħ`. Momentum/thermal is its Maxwell average. Phase/thermal
/// shifts the thermal Wigner function in its `x` slot only and carries the
/// same factor 2 on the interference term as the pure form.
pub fn cat_terms(spec: &StateSpec, probe: Probe, t: f64) -> Result<CatTerms> {
    let cat = spec.cat_params().ok_or(Error::NotCat)?;
    probe.check()?;
    ensure_finite("t", t)?;
    Ok(cat_terms_unchecked(cat, spec.ensemble, probe, &spec.scales(t)))
}

fn cat_terms_unchecked(cat: &CatParams, ensemble: Ensemble, probe: Probe, s: &DerivedScales) -> CatTerms {
    let p = &cat.base;
    let n = cat_normalization(cat);
    let n2 = n * n;
    let d = cat.d;
    let half = 0.5 * d;
    let sigma2 = p.sigma * p.sigma;
    let vq2 = s.v_q * s.v_q;
    let vbar2 = s.v_bar * s.v_bar;
    match (probe, ensemble) {
        (Probe::Position(x), Ensemble::Pure) => {
            let x1 = x - p.v0 * s.t;
            let norm = n2 / (2.0 * PI * s.sigma_t_sq).sqrt();
            let gauss = |z: f64| (-z * z / (2.0 * s.sigma_t_sq)).exp();
            CatTerms {
                packet_plus: norm * gauss(x1 - half),
                packet_minus: norm * gauss(x1 + half),
                envelope: 2.0 * norm * (-(x1 * x1 + half * half) / (2.0 * s.sigma_t_sq)).exp(),
                phase: p.hbar * s.t * d * x1 / (4.0 * p.mass * sigma2 * s.sigma_t_sq),
            }
        }
        (Probe::Position(x), Ensemble::Thermal) => {
            let w2 = s.w_t_sq;
            let norm = n2 / (2.0 * PI * w2).sqrt();
            let gauss = |z: f64| (-z * z / (2.0 * w2)).exp();
            let vbar_t = s.v_bar * s.t;
            let vq_t = s.v_q * s.t;
            let damping = (sigma2 * w2 + vbar_t * vbar_t * vq_t * vq_t) / (sigma2 * s.sigma_t_sq * w2)
                * (d * d / 8.0);
            CatTerms {
                packet_plus: norm * gauss(x - half),
                packet_minus: norm * gauss(x + half),
                envelope: 2.0 * norm * (-x * x / (2.0 * w2) - damping).exp(),
                phase: p.hbar * s.t * d * x / (4.0 * p.mass * sigma2 * w2),
            }
        }
        (Probe::Momentum(mom), Ensemble::Pure) => {
            let base = n2 * single_momentum_pure(p, mom);
            CatTerms {
                packet_plus: base,
                packet_minus: base,
                envelope: 2.0 * base,
                phase: (mom - p.mass * p.v0) * d / p.hbar,
            }
        }
        (Probe::Momentum(mom), Ensemble::Thermal) => {
            let base = n2 * single_momentum_thermal(p, s, mom);
            let spread = vbar2 + vq2;
            let damping = p.mass * p.mass * d * d * vbar2 * vq2 / (2.0 * p.hbar * p.hbar * spread);
            CatTerms {
                packet_plus: base,
                packet_minus: base,
                envelope: 2.0 * base * (-damping).exp(),
                phase: mom * d / p.hbar * (vq2 / spread),
            }
        }
        (Probe::Phase { x, p: mom }, Ensemble::Pure) => CatTerms {
            packet_plus: n2 * single_wigner_pure(p, s, x - half, mom),
            packet_minus: n2 * single_wigner_pure(p, s, x + half, mom),
            envelope: 2.0 * n2 * single_wigner_pure(p, s, x, mom),
            phase: (mom - p.mass * p.v0) * d / p.hbar,
        },
        (Probe::Phase { x, p: mom }, Ensemble::Thermal) => {
            let spread = vbar2 + vq2;
            let damping = d * d / (8.0 * sigma2) * (vbar2 / spread);
            CatTerms {
                packet_plus: n2 * single_wigner_thermal(p, s, x - half, mom),
                packet_minus: n2 * single_wigner_thermal(p, s, x + half, mom),
                envelope: 2.0 * n2 * single_wigner_thermal(p, s, x, mom) * (-damping).exp(),
                phase: mom * d / p.hbar * (vq2 / spread),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// public evaluation surface

/// Position and momentum amplitudes of a pure state at a fixed time, with
/// the time-dependent prefactor computed once.
///
/// The position amplitude uses the compact complex-width form
/// `(2πΣ²)^{-1/4} exp{-(x−x₀−vt)²/(4σΣ) + i(mvx/ħ − mv²t/2ħ)}`, with the
/// quartic root taken as `exp(-¼·ln(2πΣ²))` on the principal branch. The
/// momentum amplitude is its exact Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    params: PacketParams,
    t: f64,
    /// Packet centres and the superposition weight.
    centers: [f64; 2],
    packets: usize,
    weight: f64,
    position_prefactor: Complex64,
    inv_width: Complex64,
    momentum_prefactor: f64,
}

impl Amplitude {
    /// Amplitudes of the pure counterpart of `spec` (same state, `v0` kept).
    pub fn new(spec: &StateSpec, t: f64) -> Result<Self> {
        ensure_finite("t", t)?;
        let params = *spec.params();
        let s = scales_unchecked(&params, t);
        let big_sigma = s.big_sigma;
        let (centers, packets, weight) = match spec.state {
            State::Single(p) => ([p.x0, p.x0], 1, 1.0),
            State::Cat(c) => ([0.5 * c.d, -0.5 * c.d], 2, cat_normalization(&c)),
        };
        let ratio = params.sigma / params.hbar;
        Ok(Self {
            params,
            t,
            centers,
            packets,
            weight,
            position_prefactor: (-0.25 * (2.0 * PI * big_sigma * big_sigma).ln()).exp(),
            inv_width: (4.0 * params.sigma * big_sigma).inv(),
            momentum_prefactor: (2.0 * ratio * ratio / PI).sqrt().sqrt(),
        })
    }

    /// The same state moving with velocity `v`.
    pub fn boosted(&self, v: f64) -> Self {
        Self {
            params: self.params.with_velocity(v),
            ..*self
        }
    }

    pub fn position(&self, x: f64) -> Complex64 {
        let p = &self.params;
        let phase = p.mass * p.v0 * x / p.hbar - p.mass * p.v0 * p.v0 * self.t / (2.0 * p.hbar);
        let mut sum = Complex64::new(0.0, 0.0);
        for &x0 in &self.centers[..self.packets] {
            let x1 = x - x0 - p.v0 * self.t;
            sum += (-x1 * x1 * self.inv_width).exp();
        }
        self.weight * self.position_prefactor * sum * Complex64::from_polar(1.0, phase)
    }

    pub fn momentum(&self, mom: f64) -> Complex64 {
        let p = &self.params;
        let ratio = p.sigma / p.hbar;
        let big_p = mom - p.mass * p.v0;
        let amplitude = self.weight * self.momentum_prefactor * (-ratio * ratio * big_p * big_p).exp();
        let free = mom * mom * self.t / (2.0 * p.mass * p.hbar);
        let mut sum = Complex64::new(0.0, 0.0);
        for &x0 in &self.centers[..self.packets] {
            sum += Complex64::from_polar(1.0, -(big_p * x0 / p.hbar + free));
        }
        amplitude * sum
    }
}

/// Complex amplitude of a pure state in position or momentum representation.
///
/// The momentum amplitude is the exact Fourier transform
/// `(2πħ)^{-1/2} ∫ ψ(x,t) e^{-ipx/ħ} dx` of the position amplitude, including
/// its global phase.
pub fn eval_wavefunction(spec: &StateSpec, space: Space, point: f64, t: f64) -> Result<Complex64> {
    if spec.ensemble == Ensemble::Thermal {
        return Err(Error::MixedStateWavefunction);
    }
    if space == Space::Phase {
        return Err(Error::Unsupported("position or momentum space"));
    }
    ensure_finite("point", point)?;
    let amp = Amplitude::new(spec, t)?;
    Ok(match space {
        Space::Momentum => amp.momentum(point),
        _ => amp.position(point),
    })
}

pub(crate) fn density_unchecked(spec: &StateSpec, space: Space, point: f64, s: &DerivedScales) -> f64 {
    match (spec.state, space) {
        (State::Single(p), Space::Position) => match spec.ensemble {
            Ensemble::Pure => single_position_pure(&p, s, point),
            Ensemble::Thermal => single_position_thermal(&p, s, point),
        },
        (State::Single(p), _) => match spec.ensemble {
            Ensemble::Pure => single_momentum_pure(&p, point),
            Ensemble::Thermal => single_momentum_thermal(&p, s, point),
        },
        (State::Cat(c), Space::Position) => {
            cat_terms_unchecked(&c, spec.ensemble, Probe::Position(point), s).total()
        }
        (State::Cat(c), _) => cat_terms_unchecked(&c, spec.ensemble, Probe::Momentum(point), s).total(),
    }
}

/// Probability density in position or momentum space.
pub fn eval_density(spec: &StateSpec, space: Space, point: f64, t: f64) -> Result<f64> {
    if space == Space::Phase {
        return Err(Error::Unsupported("position or momentum space; use eval_wigner"));
    }
    ensure_finite("point", point)?;
    ensure_finite("t", t)?;
    Ok(density_unchecked(spec, space, point, &spec.scales(t)))
}

pub(crate) fn wigner_unchecked(spec: &StateSpec, x: f64, mom: f64, s: &DerivedScales) -> f64 {
    match spec.state {
        State::Single(p) => match spec.ensemble {
            Ensemble::Pure => single_wigner_pure(&p, s, x - p.x0, mom),
            Ensemble::Thermal => single_wigner_thermal(&p, s, x - p.x0, mom),
        },
        State::Cat(c) => cat_terms_unchecked(&c, spec.ensemble, Probe::Phase { x, p: mom }, s).total(),
    }
}

/// Wigner quasiprobability at `(x, p)`, in units of 1/action.
pub fn eval_wigner(spec: &StateSpec, x: f64, p: f64, t: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("p", p)?;
    ensure_finite("t", t)?;
    Ok(wigner_unchecked(spec, x, p, &spec.scales(t)))
}

/// Samples a density (1-D axes) or Wigner function (plane axes).
///
/// Points are evaluated independently in parallel and collected in grid
/// order, so the output does not depend on the thread count. A grid that is
/// too coarse to resolve the state is not detected here.
pub fn sample_field(spec: &StateSpec, space: Space, axes: Axes, t: f64) -> Result<DistributionField> {
    ensure_finite("t", t)?;
    let s = spec.scales(t);
    let values = match (&axes, space) {
        (Axes::Line(g), Space::Position | Space::Momentum) => {
            g.check()?;
            (0..g.count)
                .into_par_iter()
                .map(|i| density_unchecked(spec, space, g.point(i), &s))
                .collect()
        }
        (Axes::Plane(g), Space::Phase) => {
            g.x.check()?;
            g.p.check()?;
            let ps = g.p.points();
            (0..g.x.count)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let x = g.x.point(i);
                    ps.iter().map(move |&mom| wigner_unchecked(spec, x, mom, &s)).collect::<Vec<_>>()
                })
                .collect()
        }
        (Axes::Line(_), Space::Phase) => return Err(Error::FieldShape("phase space needs a 2-D grid")),
        (Axes::Plane(_), _) => return Err(Error::FieldShape("densities need a 1-D grid")),
    };
    Ok(DistributionField {
        axes,
        values,
        space,
        ensemble: spec.ensemble,
        state: spec.kind(),
        time: t,
    })
}

// ---------------------------------------------------------------------------
// evaluation windows

/// Centre and half-width of the default window (±`widths` natural widths).
pub fn default_window(spec: &StateSpec, space: Space, t: f64, widths: f64) -> (f64, f64) {
    let p = spec.params();
    let s = spec.scales(t);
    match space {
        Space::Position | Space::Phase => {
            let (center, width) = match spec.ensemble {
                Ensemble::Pure => (p.x0 + p.v0 * t, s.sigma_t),
                Ensemble::Thermal => (p.x0, s.w_t),
            };
            (center, 0.5 * spec.separation() + widths * width)
        }
        Space::Momentum => {
            let (center, vbar) = match spec.ensemble {
                Ensemble::Pure => (p.mass * p.v0, 0.0),
                Ensemble::Thermal => (0.0, s.v_bar),
            };
            (center, widths * p.mass * (s.v_q * s.v_q + vbar * vbar).sqrt())
        }
    }
}

/// Default 1-D grid: ±10 natural widths (plus `d/2` in position space).
pub fn default_grid(spec: &StateSpec, space: Space, t: f64, count: usize) -> Result<Grid1D> {
    let (center, half) = default_window(spec, space, t, 10.0);
    Grid1D::centered(center, half, count)
}

pub fn default_phase_grid(spec: &StateSpec, t: f64, nx: usize, np: usize) -> Result<Grid2D> {
    Grid2D::new(
        default_grid(spec, Space::Position, t, nx)?,
        default_grid(spec, Space::Momentum, t, np)?,
    )
}

/// Convenience for callers that hold loose parameters.
pub fn validate_state(state: &State) -> Result<(), Violations> {
    match state {
        State::Single(p) => p.validate(),
        State::Cat(c) => c.validate(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn single(kt: f64, ensemble: Ensemble) -> StateSpec {
        StateSpec::single(PacketParams::natural(1.0, kt), ensemble).unwrap()
    }

    fn cat(d: f64, kt: f64, ensemble: Ensemble) -> StateSpec {
        StateSpec::cat(CatParams::new(PacketParams::natural(1.0, kt), d), ensemble).unwrap()
    }

    #[test]
    fn wavefunction_peaks() {
        let spec = single(0.0, Ensemble::Pure);
        let psi = eval_wavefunction(&spec, Space::Position, 0.0, 0.0).unwrap();
        assert_relative_eq!(psi.re, (2.0 * PI).powf(-0.25), max_relative = 1e-15);
        assert_eq!(psi.im, 0.0);
        let phi = eval_wavefunction(&spec, Space::Momentum, 0.0, 0.0).unwrap();
        assert_relative_eq!(phi.norm(), (2.0 / PI).powf(0.25), max_relative = 1e-15);
    }

    #[test]
    fn thermal_wavefunction_rejected() {
        let spec = single(1.0, Ensemble::Thermal);
        assert!(matches!(
            eval_wavefunction(&spec, Space::Position, 0.0, 0.0),
            Err(Error::MixedStateWavefunction)
        ));
    }

    #[test]
    fn thermal_requires_zero_drift() {
        let p = PacketParams::natural(1.0, 1.0).with_velocity(0.3);
        assert!(StateSpec::single(p, Ensemble::Pure).is_ok());
        let err = StateSpec::single(p, Ensemble::Thermal).unwrap_err();
        assert!(err.to_string().contains("v0 must be 0"), "{err}");
    }

    #[test]
    fn density_examples() {
        let d = eval_density(&single(0.0, Ensemble::Pure), Space::Position, 0.0, 0.0).unwrap();
        assert_relative_eq!(d, 1.0 / (2.0 * PI).sqrt(), max_relative = 1e-15);

        let d = eval_density(&single(1.0, Ensemble::Thermal), Space::Position, 0.0, 2.0).unwrap();
        assert_relative_eq!(d, (12.0 * PI).powf(-0.5), max_relative = 1e-15);
        assert!((d - 0.16287).abs() < 1e-5);

        // Pd/ħ = π is a node of the corrected momentum fringe.
        let spec = cat(10.0, 0.0, Ensemble::Pure);
        let d = eval_density(&spec, Space::Momentum, PI / 10.0, 0.0).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }

    #[test]
    fn wigner_examples() {
        let p = PacketParams::natural(1.0, 0.0).with_velocity(0.7).with_center(-0.4);
        let spec = StateSpec::single(p, Ensemble::Pure).unwrap();
        for t in [0.0, 1.3, 7.0] {
            let mom = p.mass * p.v0;
            let x = p.x0 + mom * t / p.mass;
            assert_relative_eq!(eval_wigner(&spec, x, mom, t).unwrap(), 1.0 / PI, max_relative = 1e-15);
        }

        let spec = cat(10.0, 0.0, Ensemble::Pure);
        let w = eval_wigner(&spec, 0.0, PI / 10.0, 0.0).unwrap() * PI;
        let n2 = 1.0 / (2.0 * (1.0 + (-12.5f64).exp()));
        let termwise = -2.0 * n2 * (-2.0 * PI * PI / 100.0).exp() * (1.0 - (-12.5f64).exp());
        assert_relative_eq!(w, termwise, max_relative = 1e-13);
        assert!((w + 0.821).abs() < 0.01, "{w}");
    }

    #[test]
    fn thermal_wigner_matches_expanded_form() {
        // exp{-x²/2σ² - w²p²/(2m²σ²(v_q²+v̄²)) + xpt/(mσ²)} with its prefactor
        let spec = single(2.5, Ensemble::Thermal);
        let (hbar, m, sigma) = (1.0, 1.0, 1.0);
        for &(x, p, t) in &[(0.3, -0.2, 0.0), (1.5, 0.8, 1.7), (-4.0, 2.0, 3.0)] {
            let s = spec.scales(t);
            let spread = s.v_q * s.v_q + s.v_bar * s.v_bar;
            let expected = (s.v_q * s.v_q / spread).sqrt() / (PI * hbar)
                * (-x * x / (2.0 * sigma * sigma) - s.w_t_sq * p * p / (2.0 * m * m * sigma * sigma * spread)
                    + x * p * t / (m * sigma * sigma))
                    .exp();
            assert_relative_eq!(eval_wigner(&spec, x, p, t).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_separation_is_single_packet() {
        for ensemble in [Ensemble::Pure, Ensemble::Thermal] {
            let c = cat(0.0, 0.8, ensemble);
            let s = single(0.8, ensemble);
            for t in [0.0, 0.9, 4.0] {
                for &z in &[-3.0, -0.4, 0.0, 1.1, 5.0] {
                    for space in [Space::Position, Space::Momentum] {
                        let a = eval_density(&c, space, z, t).unwrap();
                        let b = eval_density(&s, space, z, t).unwrap();
                        assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{space} {a} {b}");
                    }
                    let a = eval_wigner(&c, z, 0.3 * z - 0.2, t).unwrap();
                    let b = eval_wigner(&s, z, 0.3 * z - 0.2, t).unwrap();
                    assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} {b}");
                }
            }
        }
        let c = cat(0.0, 0.0, Ensemble::Pure);
        let s = single(0.0, Ensemble::Pure);
        for space in [Space::Position, Space::Momentum] {
            let a = eval_wavefunction(&c, space, 0.7, 1.2).unwrap();
            let b = eval_wavefunction(&s, space, 0.7, 1.2).unwrap();
            assert!((a - b).norm() <= 1e-15, "{a} {b}");
        }
    }

    #[test]
    fn non_cat_terms_rejected() {
        assert!(matches!(
            cat_terms(&single(0.0, Ensemble::Pure), Probe::Position(0.0), 0.0),
            Err(Error::NotCat)
        ));
    }

    #[test]
    fn sample_field_shapes() {
        let spec = single(0.0, Ensemble::Pure);
        let g = Grid1D::new(-1.0, 1.0, 3).unwrap();
        let f = sample_field(&spec, Space::Position, Axes::Line(g), 0.0).unwrap();
        for (i, x) in g.points().into_iter().enumerate() {
            assert_eq!(f.values[i], eval_density(&spec, Space::Position, x, 0.0).unwrap());
        }
        assert!(sample_field(&spec, Space::Phase, Axes::Line(g), 0.0).is_err());
        let plane = Grid2D::new(g, g).unwrap();
        assert!(sample_field(&spec, Space::Position, Axes::Plane(plane), 0.0).is_err());
        let f = sample_field(&spec, Space::Phase, Axes::Plane(plane), 0.0).unwrap();
        assert_eq!(f.values.len(), 9);
        assert_eq!(f.values[4], 1.0 / PI);
        assert_eq!(f.row(2)[0], eval_wigner(&spec, 1.0, -1.0, 0.0).unwrap());
    }
}
