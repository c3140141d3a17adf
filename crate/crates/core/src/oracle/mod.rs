//! Brute-force quadrature versions of every transform and average.
//!
//! Nothing in here evaluates a closed-form density. The transforms take a
//! wavefunction callable, the Maxwell average takes any velocity-indexed
//! callable, and the field reductions work on sampled values only. Every
//! integral is repeated with doubled nodes and the difference is returned
//! with the value.

mod rules;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use rules::{gauss_hermite_rule, trapezoid_rule, QuadratureKind, QuadratureSpec};

use crate::error::{ensure_finite, Error, Result};
use crate::field::{Axes, DistributionField, Space};
use crate::kernels::StateSpec;

/// Region outside which an amplitude is negligible:
/// `center ± (spread + k·width)` for a budget of `k` widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub center: f64,
    pub spread: f64,
    pub width: f64,
}

impl Extent {
    /// Position-space extent of a pure state at time `t`.
    pub fn of(spec: &StateSpec, t: f64) -> Self {
        let p = spec.params();
        Self {
            center: p.x0 + p.v0 * t,
            spread: 0.5 * spec.separation(),
            width: p.sigma.max(spec.scales(t).sigma_t),
        }
    }

    /// Momentum-space extent of a pure state (time independent).
    pub fn momentum_of(spec: &StateSpec) -> Self {
        let p = spec.params();
        Self {
            center: p.mass * p.v0,
            spread: 0.0,
            width: p.hbar / (2.0 * p.sigma),
        }
    }

    fn radius(&self, q: &QuadratureSpec) -> f64 {
        self.spread + q.half_width * self.width
    }
}

/// A real oracle result with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// Change in the result when the node count doubles.
    pub refinement_delta: f64,
    /// Magnitude of the discarded imaginary part (zero where not applicable).
    pub imag_residue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexOracleValue {
    pub value: Complex64,
    pub refinement_delta: f64,
}

fn converged(q: &QuadratureSpec, delta: f64) -> Result<f64> {
    if delta > q.tolerance || !delta.is_finite() {
        Err(Error::NonConvergence {
            delta,
            limit: q.tolerance,
        })
    } else {
        Ok(delta)
    }
}

fn require_trapezoid(q: &QuadratureSpec) -> Result<()> {
    q.check()?;
    if q.kind != QuadratureKind::Trapezoid {
        return Err(Error::Unsupported("a trapezoid rule for oscillatory transforms"));
    }
    Ok(())
}

/// Trapezoid nodes at the refined level (`2n − 1` nodes) carrying the
/// weights of both levels; odd nodes have zero coarse weight.
fn nested_trapezoid(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64, f64)> {
    let fine = trapezoid_rule(lo, hi, 2 * n - 1);
    let h = (hi - lo) / (n - 1) as f64;
    let last = fine.len() - 1;
    fine.into_iter()
        .enumerate()
        .map(|(i, (x, w))| {
            let wc = if i % 2 == 1 {
                0.0
            } else if i == 0 || i == last {
                0.5 * h
            } else {
                h
            };
            (x, w, wc)
        })
        .collect()
}

/// Sampled integrand `g(s)` on nested nodes, ready for transforms
/// `∫ e^{iks} g(s) ds` at many `k`.
#[derive(Debug, Clone)]
struct Samples {
    nodes: Vec<(f64, f64, f64)>,
    values: Vec<Complex64>,
}

impl Samples {
    fn new(lo: f64, hi: f64, n: usize, g: impl Fn(f64) -> Complex64) -> Self {
        let nodes = nested_trapezoid(lo, hi, n);
        let values = nodes.iter().map(|&(s, _, _)| g(s)).collect();
        Self { nodes, values }
    }

    /// (fine, coarse) sums of `e^{i·phase(s)}·g(s)`.
    fn transform(&self, phase: impl Fn(f64) -> f64) -> (Complex64, Complex64) {
        let mut fine = Complex64::new(0.0, 0.0);
        let mut coarse = Complex64::new(0.0, 0.0);
        for (&(s, wf, wc), &g) in self.nodes.iter().zip(&self.values) {
            let term = Complex64::from_polar(1.0, phase(s)) * g;
            fine += wf * term;
            if wc != 0.0 {
                coarse += wc * term;
            }
        }
        (fine, coarse)
    }
}

/// Wigner transform along one `x` row.
///
/// `ψ*(x+y/2)ψ(x−y/2)` is sampled once over `|y| ≤ 2R` (`R` the extent
/// radius) and reused for every `p`.
#[derive(Debug, Clone)]
pub struct WignerSlice {
    samples: Samples,
    hbar: f64,
    q: QuadratureSpec,
}

impl WignerSlice {
    pub fn new<F>(psi: F, x: f64, t: f64, hbar: f64, extent: Extent, q: &QuadratureSpec) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        require_trapezoid(q)?;
        ensure_finite("x", x)?;
        let half = 2.0 * extent.radius(q);
        let samples = Samples::new(-half, half, q.nodes, |y| psi(x + 0.5 * y, t).conj() * psi(x - 0.5 * y, t));
        Ok(Self {
            samples,
            hbar,
            q: *q,
        })
    }

    pub fn at(&self, p: f64) -> Result<OracleValue> {
        ensure_finite("p", p)?;
        let hbar = self.hbar;
        let (fine, coarse) = self.samples.transform(|y| p * y / hbar);
        let scale = (2.0 * PI * hbar).recip();
        let refinement_delta = converged(&self.q, scale * (fine.re - coarse.re).abs())?;
        Ok(OracleValue {
            value: scale * fine.re,
            refinement_delta,
            imag_residue: scale * fine.im.abs(),
        })
    }
}

/// `W(x,p) = (2πħ)^{-1} ∫ e^{ipy/ħ} ψ*(x+y/2) ψ(x−y/2) dy`.
pub fn wigner_transform<F>(
    psi: F,
    x: f64,
    p: f64,
    t: f64,
    hbar: f64,
    extent: Extent,
    q: &QuadratureSpec,
) -> Result<OracleValue>
where
    F: Fn(f64, f64) -> Complex64,
{
    WignerSlice::new(psi, x, t, hbar, extent, q)?.at(p)
}

/// Momentum amplitude by direct quadrature of a sampled position amplitude.
#[derive(Debug, Clone)]
pub struct FourierSlice {
    samples: Samples,
    hbar: f64,
    q: QuadratureSpec,
}

impl FourierSlice {
    pub fn new<F>(psi: F, t: f64, hbar: f64, extent: Extent, q: &QuadratureSpec) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        require_trapezoid(q)?;
        let r = extent.radius(q);
        let samples = Samples::new(extent.center - r, extent.center + r, q.nodes, |x| psi(x, t));
        Ok(Self {
            samples,
            hbar,
            q: *q,
        })
    }

    pub fn at(&self, p: f64) -> Result<ComplexOracleValue> {
        ensure_finite("p", p)?;
        let hbar = self.hbar;
        let (fine, coarse) = self.samples.transform(|x| -p * x / hbar);
        let scale = (2.0 * PI * hbar).sqrt().recip();
        let refinement_delta = converged(&self.q, scale * (fine - coarse).norm())?;
        Ok(ComplexOracleValue {
            value: scale * fine,
            refinement_delta,
        })
    }
}

/// `ψ̃(p) = (2πħ)^{-1/2} ∫ ψ(x) e^{-ipx/ħ} dx`.
pub fn fourier_transform<F>(
    psi: F,
    p: f64,
    t: f64,
    hbar: f64,
    extent: Extent,
    q: &QuadratureSpec,
) -> Result<ComplexOracleValue>
where
    F: Fn(f64, f64) -> Complex64,
{
    FourierSlice::new(psi, t, hbar, extent, q)?.at(p)
}

/// Free-particle evolution of an initial momentum amplitude:
/// `ψ(x,t) = (2πħ)^{-1/2} ∫ ψ̃(p,0) e^{i(px − p²t/2m)/ħ} dp`.
///
/// Independent of any closed-form time dependence in position space.
#[derive(Debug, Clone)]
pub struct FreeEvolution {
    samples: Samples,
    mass: f64,
    hbar: f64,
    q: QuadratureSpec,
}

impl FreeEvolution {
    pub fn new<F>(psi_tilde0: F, mass: f64, hbar: f64, extent: Extent, q: &QuadratureSpec) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        require_trapezoid(q)?;
        let r = extent.radius(q);
        let samples = Samples::new(extent.center - r, extent.center + r, q.nodes, psi_tilde0);
        Ok(Self {
            samples,
            mass,
            hbar,
            q: *q,
        })
    }

    pub fn at(&self, x: f64, t: f64) -> Result<ComplexOracleValue> {
        ensure_finite("x", x)?;
        ensure_finite("t", t)?;
        let (m, hbar) = (self.mass, self.hbar);
        let (fine, coarse) = self.samples.transform(|p| (p * x - p * p * t / (2.0 * m)) / hbar);
        let scale = (2.0 * PI * hbar).sqrt().recip();
        let refinement_delta = converged(&self.q, scale * (fine - coarse).norm())?;
        Ok(ComplexOracleValue {
            value: scale * fine,
            refinement_delta,
        })
    }
}

/// Maxwell velocity average `√(m/2πkT) ∫ e^{-mv²/2kT} f(v) dv` with the
/// rule built once and reused for many integrands.
///
/// `kT = 0` collapses to `f(0)`, the limit of a delta-function weight.
#[derive(Debug, Clone)]
pub struct MaxwellAverage {
    /// (velocity, refined weight, coarse weight)
    nodes: Vec<(f64, f64, f64)>,
    q: QuadratureSpec,
}

impl MaxwellAverage {
    pub fn new(kt: f64, mass: f64, q: &QuadratureSpec) -> Result<Self> {
        q.check()?;
        if !(kt.is_finite() && kt >= 0.0) || !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Unsupported("non-negative kT and positive mass"));
        }
        if kt == 0.0 {
            return Ok(Self {
                nodes: vec![(0.0, 1.0, 1.0)],
                q: *q,
            });
        }
        let v_bar = (kt / mass).sqrt();
        let nodes = match q.kind {
            QuadratureKind::Trapezoid => {
                let half = q.half_width * v_bar;
                let norm = (2.0 * PI * v_bar * v_bar).sqrt().recip();
                nested_trapezoid(-half, half, q.nodes)
                    .into_iter()
                    .map(|(v, wf, wc)| {
                        let weight = norm * (-v * v / (2.0 * v_bar * v_bar)).exp();
                        (v, wf * weight, wc * weight)
                    })
                    .collect()
            }
            QuadratureKind::GaussHermite => {
                let coarse = rules::maxwell_rule(v_bar, q);
                let fine = rules::maxwell_rule(v_bar, &q.doubled());
                coarse
                    .into_iter()
                    .map(|(v, w)| (v, 0.0, w))
                    .chain(fine.into_iter().map(|(v, w)| (v, w, 0.0)))
                    .collect()
            }
        };
        Ok(Self { nodes, q: *q })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn average(&self, f: impl Fn(f64) -> f64) -> Result<OracleValue> {
        let (mut fine, mut coarse) = (0.0, 0.0);
        for &(v, wf, wc) in &self.nodes {
            let y = f(v);
            fine += wf * y;
            coarse += wc * y;
        }
        let refinement_delta = converged(&self.q, (fine - coarse).abs())?;
        Ok(OracleValue {
            value: fine,
            refinement_delta,
            imag_residue: 0.0,
        })
    }
}

/// One-shot Maxwell average; see [`MaxwellAverage`].
pub fn thermal_average<F>(f: F, kt: f64, mass: f64, q: &QuadratureSpec) -> Result<OracleValue>
where
    F: Fn(f64) -> f64,
{
    MaxwellAverage::new(kt, mass, q)?.average(f)
}

/// Integration variable of a phase-space marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    P,
}

fn trapezoid_sum(values: impl ExactSizeIterator<Item = f64>, h: f64) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (i, v) in values.enumerate() {
        acc += if i == 0 || i + 1 == n { 0.5 * v } else { v };
    }
    acc * h
}

/// Trapezoidal marginal of a phase-space field. Integrating over `p`
/// yields a position density on the `x` grid and vice versa.
pub fn marginal(field: &DistributionField, axis: Axis) -> Result<DistributionField> {
    let g = field.plane().ok_or(Error::FieldShape("marginal needs a phase-space field"))?;
    let (grid, space, values): (_, _, Vec<f64>) = match axis {
        Axis::P => (
            g.x,
            Space::Position,
            (0..g.x.count)
                .map(|i| trapezoid_sum(field.row(i).iter().copied(), g.p.spacing()))
                .collect(),
        ),
        Axis::X => (
            g.p,
            Space::Momentum,
            (0..g.p.count)
                .map(|j| trapezoid_sum((0..g.x.count).map(|i| field.values[i * g.p.count + j]), g.x.spacing()))
                .collect(),
        ),
    };
    Ok(DistributionField {
        axes: Axes::Line(grid),
        values,
        space,
        ensemble: field.ensemble,
        state: field.state,
        time: field.time,
    })
}

/// Trapezoidal integral of a sampled field with a truncation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Largest boundary magnitude relative to the peak magnitude.
    pub tail_ratio: f64,
}

impl Integral {
    pub const TAIL_LIMIT: f64 = 1e-12;

    pub fn is_truncated(&self) -> bool {
        self.tail_ratio > Self::TAIL_LIMIT
    }
}

pub fn integrate(field: &DistributionField) -> Integral {
    let peak = field.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (value, edge) = match &field.axes {
        Axes::Line(g) => {
            let n = field.values.len();
            let edge = field.values[0].abs().max(field.values[n - 1].abs());
            (trapezoid_sum(field.values.iter().copied(), g.spacing()), edge)
        }
        Axes::Plane(g) => {
            let rows: Vec<f64> = (0..g.x.count)
                .map(|i| trapezoid_sum(field.row(i).iter().copied(), g.p.spacing()))
                .collect();
            let mut edge = 0.0f64;
            for i in 0..g.x.count {
                let row = field.row(i);
                if i == 0 || i + 1 == g.x.count {
                    edge = row.iter().fold(edge, |m, v| m.max(v.abs()));
                } else {
                    edge = edge.max(row[0].abs()).max(row[row.len() - 1].abs());
                }
            }
            (trapezoid_sum(rows.into_iter(), g.x.spacing()), edge)
        }
    };
    let tail_ratio = if peak > 0.0 { edge / peak } else { 0.0 };
    let out = Integral { value, tail_ratio };
    if out.is_truncated() {
        log::warn!(
            "{} field at t={} has boundary values {:.3e} of its peak; window may be too narrow",
            field.space,
            field.time,
            tail_ratio
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Ensemble, StateKind};
    use crate::kernels::Amplitude;
    use crate::model::{Grid1D, Grid2D, PacketParams};
    use approx::assert_abs_diff_eq;

    fn line_field(values: Vec<f64>, grid: Grid1D) -> DistributionField {
        DistributionField {
            axes: Axes::Line(grid),
            values,
            space: Space::Position,
            ensemble: Ensemble::Pure,
            state: StateKind::Single,
            time: 0.0,
        }
    }

    #[test]
    fn wigner_peak_of_single_gaussian() {
        let spec = StateSpec::single(PacketParams::default(), Ensemble::Pure).unwrap();
        let amp = Amplitude::new(&spec, 0.0).unwrap();
        let psi = |x: f64, _t: f64| amp.position(x);
        let q = QuadratureSpec::trapezoid(512, 10.0);
        let w = wigner_transform(psi, 0.0, 0.0, 0.0, 1.0, Extent::of(&spec, 0.0), &q).unwrap();
        assert_abs_diff_eq!(w.value, 1.0 / PI, epsilon = 1e-8);
        assert!(w.imag_residue < 1e-10);
    }

    #[test]
    fn under_resolved_transform_is_flagged() {
        let spec = StateSpec::single(PacketParams::default(), Ensemble::Pure).unwrap();
        let amp = Amplitude::new(&spec, 0.0).unwrap();
        let psi = |x: f64, _t: f64| amp.position(x);
        let q = QuadratureSpec::trapezoid(16, 10.0);
        let err = wigner_transform(psi, 0.0, 3.0, 0.0, 1.0, Extent::of(&spec, 0.0), &q).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }), "{err}");
    }

    #[test]
    fn gauss_hermite_rejected_for_transforms() {
        let q = QuadratureSpec::gauss_hermite(64);
        let ext = Extent {
            center: 0.0,
            spread: 0.0,
            width: 1.0,
        };
        assert!(fourier_transform(|_, _| Complex64::new(1.0, 0.0), 0.0, 0.0, 1.0, ext, &q).is_err());
    }

    #[test]
    fn cold_limit_returns_input() {
        let q = QuadratureSpec::trapezoid(1024, 10.0);
        let f = |v: f64| (1.0 + v).powi(2);
        assert_eq!(thermal_average(f, 0.0, 1.0, &q).unwrap().value, 1.0);
        let kt = 1e-12; // v̄ = 1e-6
        let avg = thermal_average(f, kt, 1.0, &q).unwrap().value;
        assert!((avg - 1.0).abs() < 1e-5);
        assert_abs_diff_eq!(avg, 1.0 + 1e-12, epsilon = 1e-14);
    }

    #[test]
    fn maxwell_moments() {
        for q in [QuadratureSpec::gauss_hermite(64), QuadratureSpec::trapezoid(256, 10.0)] {
            let avg = thermal_average(|v| v * v, 4.0, 2.0, &q).unwrap();
            assert_abs_diff_eq!(avg.value, 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_field_marginal() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        let field = DistributionField {
            axes: Axes::Plane(Grid2D::new(g, g).unwrap()),
            values: vec![0.0; 25],
            space: Space::Phase,
            ensemble: Ensemble::Pure,
            state: StateKind::Single,
            time: 0.0,
        };
        for axis in [Axis::X, Axis::P] {
            let m = marginal(&field, axis).unwrap();
            assert!(m.values.iter().all(|&v| v == 0.0));
            assert_eq!(m.values.len(), 5);
        }
        let line = line_field(vec![0.0; 5], g);
        assert!(marginal(&line, Axis::X).is_err());
    }

    #[test]
    fn odd_integrand_vanishes() {
        let g = Grid1D::new(-3.0, 3.0, 601).unwrap();
        let values = g.points().iter().map(|x| x * (-x * x).exp() * 7.0).collect();
        let i = integrate(&line_field(values, g));
        assert!(i.value.abs() < 1e-12, "{}", i.value);
    }

    #[test]
    fn truncated_window_flagged() {
        let g = Grid1D::new(0.0, 8.0, 801).unwrap();
        let values: Vec<f64> = g.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
        assert!(integrate(&line_field(values, g)).is_truncated());
        let g = Grid1D::new(-10.0, 10.0, 801).unwrap();
        let values: Vec<f64> = g.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
        let i = integrate(&line_field(values, g));
        assert!(!i.is_truncated());
        assert_abs_diff_eq!(i.value, (2.0 * PI).sqrt(), epsilon = 1e-12);
    }
}
