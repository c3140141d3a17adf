use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wdl_core::certify::{certify, CertificationReport};
use wdl_core::decoherence::{
    classify, decoherence_series, predicted_decoherence_time, standard_times, AttenuationSeries, Classification,
};
use wdl_core::kernels::default_grid;
use wdl_core::{sample_field, Axes, CatParams, Ensemble, Grid2D, Space, StateKind, StateSpec};

use crate::config::{RunConfig, SweepParam};
use crate::error::CliError;
use crate::output::{gnuplot_script, indexed_path, num, pgm, scan_csv, wigner_csv};

/// Default sample counts when no grid is given.
pub const SCAN_POINTS: usize = 201;
pub const WIGNER_POINTS: usize = 101;

/// Where results go. Not part of [`RunConfig`].
#[derive(Debug, Clone, Default)]
pub struct Destination {
    pub out: Option<PathBuf>,
    pub pgm: bool,
    pub gnuplot: bool,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn write_stdout(bytes: &[u8]) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn emit(dest: &Destination, index: usize, total: usize, bytes: &[u8]) -> Result<Option<PathBuf>, CliError> {
    match &dest.out {
        Some(path) => {
            let path = indexed_path(path, index, total);
            write_file(&path, bytes)?;
            Ok(Some(path))
        }
        None => {
            write_stdout(bytes)?;
            Ok(None)
        }
    }
}

fn times_or_zero(config: &RunConfig) -> Vec<f64> {
    if config.times.is_empty() {
        vec![0.0]
    } else {
        config.times.clone()
    }
}

pub fn scan(config: &RunConfig, dest: &Destination) -> Result<(), CliError> {
    if config.space == Space::Phase {
        return Err(CliError::Config("scan samples position or momentum space; use `wigner` for phase space".into()));
    }
    let spec = config.state_spec()?;
    let times = times_or_zero(config);
    for (i, &t) in times.iter().enumerate() {
        let grid = match config.grid {
            Some(g) => g.to_grid()?,
            None => default_grid(&spec, config.space, t, SCAN_POINTS)?,
        };
        let field = sample_field(&spec, config.space, Axes::Line(grid), t)?;
        emit(dest, i, times.len(), scan_csv(config, &field).as_bytes())?;
    }
    Ok(())
}

pub fn wigner(config: &RunConfig, dest: &Destination) -> Result<(), CliError> {
    if (dest.pgm || dest.gnuplot) && dest.out.is_none() {
        return Err(CliError::Config("--pgm and --gnuplot need --out".into()));
    }
    let spec = config.state_spec()?;
    let times = times_or_zero(config);
    for (i, &t) in times.iter().enumerate() {
        let x = match config.grid {
            Some(g) => g.to_grid()?,
            None => default_grid(&spec, Space::Position, t, WIGNER_POINTS)?,
        };
        let p = match config.pgrid {
            Some(g) => g.to_grid()?,
            None => default_grid(&spec, Space::Momentum, t, WIGNER_POINTS)?,
        };
        let grid = Grid2D::new(x, p)?;
        let field = sample_field(&spec, Space::Phase, Axes::Plane(grid), t)?;
        let written = emit(dest, i, times.len(), wigner_csv(config, &field).as_bytes())?;
        if let Some(csv) = written {
            if dest.pgm {
                write_file(&csv.with_extension("pgm"), &pgm(&field))?;
            }
            if dest.gnuplot {
                let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                write_file(&csv.with_extension("gp"), gnuplot_script(&name, &grid).as_bytes())?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Classifications {
    pub position: Classification,
    pub momentum: Classification,
    pub phase: Classification,
}

#[derive(Debug, Serialize)]
pub struct AttenuationReport {
    pub config: RunConfig,
    pub space: Space,
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    /// Classification of the requested space.
    pub classification: Classification,
    pub classifications: Classifications,
    /// Only for a thermal cat with kT > 0 and d > 0.
    pub tau_predicted: Option<f64>,
    pub tau_fit: Option<f64>,
    pub fit_residual: Option<f64>,
    pub relative_difference: Option<f64>,
}

pub fn attenuation_report(config: &RunConfig) -> Result<AttenuationReport, CliError> {
    if config.state != StateKind::Cat {
        return Err(CliError::Config("attenuation needs --state cat".into()));
    }
    let spec = config.state_spec()?;
    let times = if config.times.is_empty() {
        standard_times(spec.params())
    } else {
        config.times.clone()
    };
    let series = AttenuationSeries::sample(&spec, config.space, &times)?;
    let class = |space| classify(&spec, space);
    let classifications = Classifications {
        position: class(Space::Position)?,
        momentum: class(Space::Momentum)?,
        phase: class(Space::Phase)?,
    };
    let cat = spec.cat_params().expect("cat spec");
    let (mut tau_predicted, mut tau_fit, mut fit_residual, mut relative_difference) = (None, None, None, None);
    if spec.ensemble() == Ensemble::Thermal && cat.base.kt > 0.0 && cat.d > 0.0 {
        let predicted = predicted_decoherence_time(cat)?;
        let fitted = decoherence_series(&spec)?;
        let tau = fitted.tau_fit.expect("series is fitted");
        tau_predicted = Some(predicted);
        tau_fit = Some(tau);
        fit_residual = Some(fitted.fit_residual);
        relative_difference = Some(tau / predicted - 1.0);
    }
    Ok(AttenuationReport {
        config: config.clone(),
        space: config.space,
        times,
        a_values: series.a_values,
        classification: match config.space {
            Space::Position => classifications.position,
            Space::Momentum => classifications.momentum,
            Space::Phase => classifications.phase,
        },
        classifications,
        tau_predicted,
        tau_fit,
        fit_residual,
        relative_difference,
    })
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text.into_bytes()
}

pub fn attenuation(config: &RunConfig, dest: &Destination) -> Result<(), CliError> {
    let report = attenuation_report(config)?;
    emit(dest, 0, 1, &json(&report))?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub config: RunConfig,
    pub report: CertificationReport,
}

pub fn verify(config: &RunConfig, dest: &Destination) -> Result<(), CliError> {
    let cert = config.certification.clone().unwrap_or_default();
    let report = certify(&cert)?;
    let failing: Vec<String> = report
        .branches
        .iter()
        .filter(|b| !b.passed)
        .map(|b| b.name())
        .chain(report.errata.iter().filter(|c| !c.passed).map(|c| c.name.clone()))
        .collect();
    let passed = report.passed;
    emit(
        dest,
        0,
        1,
        &json(&VerifyOutput {
            config: config.clone(),
            report,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Certification(failing.join(", ")))
    }
}

/// One sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub tau_predicted: f64,
    pub tau_fit: f64,
    pub relative_difference: f64,
    pub fit_residual: f64,
    pub a_values: Vec<f64>,
}

/// Always the thermal cat in coordinate space, the only setting with a
/// decoherence time.
pub fn sweep_rows(config: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs --sweep param=v1,v2,...".into()))?;
    sweep.check().map_err(CliError::Config)?;
    sweep
        .values
        .iter()
        .map(|&value| {
            let mut c = config.clone();
            match sweep.param {
                SweepParam::Kt => c.kt = value,
                SweepParam::D => c.d = value,
                SweepParam::Sigma => c.sigma = value,
            }
            let cat = CatParams::new(c.packet(), c.d);
            let spec = StateSpec::cat(cat, Ensemble::Thermal)?;
            let tau_predicted = predicted_decoherence_time(&cat)?;
            let fitted = decoherence_series(&spec)?;
            let tau_fit = fitted.tau_fit.expect("series is fitted");
            let a_values = AttenuationSeries::sample(&spec, Space::Position, &c.times)?.a_values;
            Ok(SweepRow {
                value,
                tau_predicted,
                tau_fit,
                relative_difference: tau_fit / tau_predicted - 1.0,
                fit_residual: fitted.fit_residual,
                a_values,
            })
        })
        .collect()
}

pub fn sweep(config: &RunConfig, dest: &Destination) -> Result<(), CliError> {
    let mut config = config.clone();
    config.state = StateKind::Cat;
    config.ensemble = Ensemble::Thermal;
    config.space = Space::Position;
    let rows = sweep_rows(&config)?;
    let param = config.sweep.as_ref().expect("checked").param.as_str();
    let mut out = format!("# config: {}\n", config.canonical_json());
    out.push_str(&format!("{param},tau_predicted,tau_fit,relative_difference,fit_residual"));
    for i in 0..config.times.len() {
        out.push_str(&format!(",a_t{i}"));
    }
    out.push('\n');
    for row in rows {
        let mut cells = vec![
            num(row.value),
            num(row.tau_predicted),
            num(row.tau_fit),
            num(row.relative_difference),
            num(row.fit_residual),
        ];
        cells.extend(row.a_values.iter().map(|a| num(*a)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    emit(&Destination { pgm: false, gnuplot: false, ..dest.clone() }, 0, 1, out.as_bytes())?;
    Ok(())
}
