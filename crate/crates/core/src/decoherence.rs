//! Attenuation of the interference term and decoherence times.
//!
//! The attenuation coefficient is the factor multiplying the cosine divided
//! by twice the geometric mean of the two packet terms, applied the same
//! way in position, momentum and phase space. In phase space it exceeds 1:
//! the interference term of a cat Wigner function is centred between the
//! packets, where the packet terms are small, so its envelope is larger than
//! their geometric mean. That is the correct value, not an overflow.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::field::{Ensemble, Space};
use crate::kernels::{cat_terms, CatTerms, Probe, StateSpec};
use crate::model::{scales_unchecked, CatParams, PacketParams};

/// Packet and interference terms of a cat distribution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermDecomposition {
    pub packet_plus: f64,
    pub packet_minus: f64,
    /// Factor multiplying the cosine, so that
    /// `total = plus + minus + envelope·cos(phase)`.
    pub interference_envelope: f64,
    pub interference_phase: f64,
    pub probe: Probe,
    pub t: f64,
}

impl TermDecomposition {
    pub fn reconstruct(&self) -> f64 {
        self.packet_plus + self.packet_minus + self.interference_envelope * self.interference_phase.cos()
    }

    pub fn geometric_mean(&self) -> f64 {
        (self.packet_plus * self.packet_minus).sqrt()
    }

    /// Envelope over twice the geometric mean of the packet terms.
    pub fn attenuation(&self) -> f64 {
        self.interference_envelope / (2.0 * self.geometric_mean())
    }
}

pub fn decompose(spec: &StateSpec, probe: Probe, t: f64) -> Result<TermDecomposition> {
    let CatTerms {
        packet_plus,
        packet_minus,
        envelope,
        phase,
    } = cat_terms(spec, probe, t)?;
    Ok(TermDecomposition {
        packet_plus,
        packet_minus,
        interference_envelope: envelope,
        interference_phase: phase,
        probe,
        t,
    })
}

/// `ln a(t)` in closed form.
///
/// Position/pure is identically zero: the cross-term Gaussian of the
/// free-evolution density coincides with the geometric mean of the packets.
pub fn log_attenuation(spec: &StateSpec, space: Space, t: f64) -> Result<f64> {
    let cat = spec.cat_params().ok_or(Error::NotCat)?;
    ensure_finite("t", t)?;
    let p = &cat.base;
    let s = scales_unchecked(p, t);
    let d2 = cat.d * cat.d;
    let sigma2 = p.sigma * p.sigma;
    let vq2 = s.v_q * s.v_q;
    let vbar2 = s.v_bar * s.v_bar;
    Ok(match (space, spec.ensemble()) {
        (Space::Position, Ensemble::Pure) => 0.0,
        (Space::Position, Ensemble::Thermal) => -d2 * vbar2 * t * t / (8.0 * sigma2 * s.w_t_sq),
        (Space::Momentum, Ensemble::Pure) => 0.0,
        (Space::Momentum, Ensemble::Thermal) => {
            -p.mass * p.mass * d2 * vbar2 * vq2 / (2.0 * p.hbar * p.hbar * (vbar2 + vq2))
        }
        (Space::Phase, Ensemble::Pure) => d2 / (8.0 * sigma2),
        (Space::Phase, Ensemble::Thermal) => d2 / (8.0 * sigma2) * vq2 / (vbar2 + vq2),
    })
}

pub fn attenuation(spec: &StateSpec, space: Space, t: f64) -> Result<f64> {
    log_attenuation(spec, space, t).map(f64::exp)
}

/// Coordinate-space attenuation written out in `kT`, `ħ`, `m`:
/// `exp{-(kT/m) t² d² / (8σ⁴ + 8σ²(kT/m)t² + 2ħ²t²/m²)}`.
pub fn position_attenuation_expanded(params: &PacketParams, d: f64, t: f64) -> f64 {
    let kt_m = params.kt / params.mass;
    let s2 = params.sigma * params.sigma;
    let denom = 8.0 * s2 * s2 + 8.0 * s2 * kt_m * t * t
        + 2.0 * params.hbar * params.hbar * t * t / (params.mass * params.mass);
    (-(kt_m * t * t * d * d) / denom).exp()
}

/// Short-time decoherence time `√8 σ² / (v̄ d)`.
pub fn predicted_decoherence_time(cat: &CatParams) -> Result<f64> {
    cat.validate()?;
    let v_bar = cat.base.v_bar();
    if v_bar <= 0.0 || cat.d <= 0.0 {
        return Err(Error::Unsupported("kT > 0 and d > 0 for a decoherence time"));
    }
    Ok(8f64.sqrt() * cat.base.sigma * cat.base.sigma / (v_bar * cat.d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttenuationSeries {
    pub space: Space,
    pub ensemble: Ensemble,
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub tau_fit: Option<f64>,
    pub fit_residual: f64,
}

impl AttenuationSeries {
    pub fn sample(spec: &StateSpec, space: Space, times: &[f64]) -> Result<Self> {
        let a_values = times
            .iter()
            .map(|&t| attenuation(spec, space, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space,
            ensemble: spec.ensemble(),
            times: times.to_vec(),
            a_values,
            tau_fit: None,
            fit_residual: 0.0,
        })
    }

    /// Largest relative spread `(max − min)/max` of the samples.
    pub fn relative_spread(&self) -> f64 {
        let max = self.a_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.a_values.iter().copied().fold(f64::INFINITY, f64::min);
        if max > 0.0 {
            (max - min) / max
        } else {
            0.0
        }
    }
}

pub const FIT_SAMPLES: usize = 32;

/// `FIT_SAMPLES` equispaced times on `[0, τ_d/2]`, endpoints included.
pub fn fit_window(cat: &CatParams) -> Result<Vec<f64>> {
    let tau = predicted_decoherence_time(cat)?;
    let end = 0.5 * tau;
    Ok((0..FIT_SAMPLES)
        .map(|i| end * i as f64 / (FIT_SAMPLES - 1) as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceFit {
    pub tau: f64,
    pub slope: f64,
    /// RMS residual of `ln a` about the fitted line.
    pub residual: f64,
}

/// Least-squares fit of `ln a = −t²/τ²` (through the origin, since
/// `a(0) = 1`) to a coordinate-space thermal series.
pub fn fit_decoherence_time(series: &AttenuationSeries) -> Result<DecoherenceFit> {
    if series.space != Space::Position || series.ensemble != Ensemble::Thermal {
        return Err(Error::Unsupported("a thermal coordinate-space series"));
    }
    if series.times.len() != series.a_values.len() {
        return Err(Error::IllConditionedFit("times and values differ in length"));
    }
    if series.a_values.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::IllConditionedFit("attenuation values must be positive"));
    }
    if series.a_values.iter().all(|&a| (a - 1.0).abs() <= 1e-12) {
        return Err(Error::IllConditionedFit(
            "no measurable decay; the window is short compared with the decoherence time",
        ));
    }
    let (mut suy, mut suu) = (0.0, 0.0);
    for (&t, &a) in series.times.iter().zip(&series.a_values) {
        let u = t * t;
        suy += u * a.ln();
        suu += u * u;
    }
    let slope = suy / suu;
    if slope.is_nan() || slope >= 0.0 {
        return Err(Error::IllConditionedFit("ln a does not decrease with t²"));
    }
    let sq: f64 = series
        .times
        .iter()
        .zip(&series.a_values)
        .map(|(&t, &a)| (a.ln() - slope * t * t).powi(2))
        .sum();
    Ok(DecoherenceFit {
        tau: (-slope).sqrt().recip(),
        slope,
        residual: (sq / series.times.len() as f64).sqrt(),
    })
}

/// Samples the fit window and fits it.
pub fn decoherence_series(spec: &StateSpec) -> Result<AttenuationSeries> {
    let cat = spec.cat_params().ok_or(Error::NotCat)?;
    let times = fit_window(cat)?;
    let mut series = AttenuationSeries::sample(spec, Space::Position, &times)?;
    let fit = fit_decoherence_time(&series)?;
    series.tau_fit = Some(fit.tau);
    series.fit_residual = fit.residual;
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Decays,
    TimeIndependent,
}

/// Spread above which a series counts as decaying.
pub const CONSTANCY_LIMIT: f64 = 1e-10;

/// `[0, 10σ/v_q]` in 101 samples.
pub fn standard_times(params: &PacketParams) -> Vec<f64> {
    let end = 10.0 * params.sigma / params.v_q();
    (0..=100).map(|i| end * i as f64 / 100.0).collect()
}

pub fn classify(spec: &StateSpec, space: Space) -> Result<Classification> {
    let series = AttenuationSeries::sample(spec, space, &standard_times(spec.params()))?;
    Ok(if series.relative_spread() > CONSTANCY_LIMIT {
        Classification::Decays
    } else {
        Classification::TimeIndependent
    })
}
