use wdl_core::oracle::{thermal_average, wigner_transform, Extent, MaxwellAverage, QuadratureSpec};
use wdl_core::{eval_density, eval_wigner, Amplitude, CatParams, Ensemble, PacketParams, Space, StateSpec};

fn thermal_cat(d: f64, kt: f64) -> StateSpec {
    StateSpec::cat(CatParams::new(PacketParams::natural(1.0, kt), d), Ensemble::Thermal).unwrap()
}

// Maxwell average of Wigner transforms of boosted amplitudes, no closed-form
// Wigner function anywhere. Slow, so only a handful of points.
#[test]
fn thermal_cat_wigner_from_first_principles() {
    let spec = thermal_cat(2.0, 1.0);
    let pure = spec.with_ensemble(Ensemble::Pure).unwrap();
    let t = 1.0;
    let amp = Amplitude::new(&pure, t).unwrap();
    let transform = QuadratureSpec::trapezoid(256, 10.0);
    let thermal = QuadratureSpec::trapezoid(256, 8.0);
    let avg = MaxwellAverage::new(1.0, 1.0, &thermal).unwrap();
    for (x, p) in [(0.0, 0.0), (0.0, 1.3), (1.0, -0.4), (-2.5, 0.7)] {
        let oracle = avg
            .average(|v| {
                let boosted = amp.boosted(v);
                let extent = Extent {
                    center: v * t,
                    ..Extent::of(&pure, t)
                };
                wigner_transform(|y, _| boosted.position(y), x, p, t, 1.0, extent, &transform)
                    .unwrap()
                    .value
            })
            .unwrap();
        let closed = eval_wigner(&spec, x, p, t).unwrap();
        assert!((oracle.value - closed).abs() < 1e-8, "({x},{p}): oracle {} closed {closed}", oracle.value);
    }
}

// At kT=100, t=4 the velocity integrand is ~0.2 wide while Gauss-Hermite 64
// nodes sit ~1.7 apart near the origin; the trapezoid budget resolves it.
#[test]
fn gauss_hermite_64_under_resolves_hot_late_packets() {
    let spec = thermal_cat(10.0, 100.0);
    let pure = spec.with_ensemble(Ensemble::Pure).unwrap();
    let t = 4.0;
    let amp = Amplitude::new(&pure, t).unwrap();
    let x = 3.0;
    let f = |v: f64| amp.boosted(v).position(x).norm_sqr();
    let exact = eval_density(&spec, Space::Position, x, t).unwrap();

    let gh = QuadratureSpec::gauss_hermite(64).with_tolerance(f64::INFINITY);
    let gh_value = thermal_average(f, 100.0, 1.0, &gh).unwrap();
    let trap = thermal_average(f, 100.0, 1.0, &QuadratureSpec::trapezoid(1024, 8.0)).unwrap();

    assert!((trap.value - exact).abs() < 1e-12);
    assert!((gh_value.value - exact).abs() > 1e-6, "GH-64 happened to resolve it: {}", gh_value.value);
    // and its own refinement check notices
    assert!(gh_value.refinement_delta > 1e-8);
    assert!(thermal_average(f, 100.0, 1.0, &QuadratureSpec::gauss_hermite(64)).is_err());
}

#[test]
fn gauss_hermite_is_fine_for_cold_packets() {
    let spec = thermal_cat(2.0, 1.0);
    let pure = spec.with_ensemble(Ensemble::Pure).unwrap();
    let amp = Amplitude::new(&pure, 1.0).unwrap();
    for x in [-1.5, 0.0, 0.7] {
        let got = thermal_average(|v| amp.boosted(v).position(x).norm_sqr(), 1.0, 1.0, &QuadratureSpec::gauss_hermite(64))
            .unwrap();
        let exact = eval_density(&spec, Space::Position, x, 1.0).unwrap();
        assert!((got.value - exact).abs() < 1e-8);
    }
}

#[test]
fn cold_limit_returns_the_integrand() {
    let f = |v: f64| (1.0 + v).powi(2);
    let v = thermal_average(f, 1e-12, 1.0, &QuadratureSpec::trapezoid(64, 8.0)).unwrap();
    assert!((v.value - 1.0).abs() < 1e-5);
}
