//! JSON-configured runs that write spectra and flux sweeps as CSV.
//!
//! A config is a single JSON object. Only `eta` is required:
//!
//! ```json
//! {
//!   "eta": 0.1,
//!   "gamma": 0.5e-6,
//!   "gamma_cav": 7e-4,
//!   "n_max": 8,
//!   "mu": "omega_G",
//!   "grid": { "min": 0.5, "max": 1.5, "points": 4001 },
//!   "sweep": { "variable": "eta", "values": [0.02, 0.05, 0.1] },
//!   "outputs": { "spectrum": "spectrum.csv", "sweep": "sweep.csv" },
//!   "methods": { "spectrum": true, "ratemodel": false, "analytic": true }
//! }
//! ```
//!
//! `mu` is a number or one of `omega_G`, `omega_G_plus_omega_minus`,
//! `omega_G_plus_omega_plus`, `omega_plus`. In a `mu` sweep the values are
//! absolute chemical potentials and `mu` itself is ignored.
//!
//! Output files start with `#` lines describing the run, then a header row,
//! then one row per point. Numbers are written in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hilbert::SystemParams;
use crate::model::{Model, MuChoice};
use crate::ratemodel::{analytic_el, analytic_gse, Fluxes};
use crate::spectrum::{linear_grid, DEFAULT_GRID_MAX, DEFAULT_GRID_MIN, DEFAULT_GRID_POINTS};

pub const DEFAULT_GAMMA: f64 = 0.5e-6;
pub const DEFAULT_GAMMA_CAV: f64 = 7e-4;
pub const DEFAULT_N_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Spectrum,
    Sweep,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(Mode::Spectrum),
            "sweep" => Ok(Mode::Sweep),
            other => Err(Error::config("--mode", format!("expected spectrum or sweep, got `{other}`"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMu {
    Value(f64),
    Symbol(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    min: f64,
    max: f64,
    points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Eta,
    Mu,
}

impl SweepVariable {
    fn name(self) -> &'static str {
        match self {
            SweepVariable::Eta => "eta",
            SweepVariable::Mu => "mu",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: SweepVariable,
    values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub spectrum: String,
    pub sweep: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            spectrum: "spectrum.csv".into(),
            sweep: "sweep.csv".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Methods {
    pub spectrum: bool,
    pub ratemodel: bool,
    pub analytic: bool,
}

impl Default for Methods {
    fn default() -> Self {
        Self {
            spectrum: true,
            ratemodel: false,
            analytic: true,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    eta: f64,
    omega_c: Option<f64>,
    omega_e: Option<f64>,
    omega_s: Option<f64>,
    gamma: Option<f64>,
    gamma_in: Option<f64>,
    gamma_out: Option<f64>,
    gamma_cav: Option<f64>,
    n_max: Option<usize>,
    mu: Option<RawMu>,
    grid: Option<RawGrid>,
    sweep: Option<RawSweep>,
    #[serde(default)]
    outputs: Outputs,
    #[serde(default)]
    methods: Methods,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn frequencies(&self) -> Vec<f64> {
        linear_grid(self.min, self.max, self.points)
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            min: DEFAULT_GRID_MIN,
            max: DEFAULT_GRID_MAX,
            points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// A validated, fully defaulted run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Physical constants; `mu` here is a placeholder until resolved.
    pub params: SystemParams,
    pub n_max: usize,
    pub mu: MuChoice,
    pub grid: Grid,
    pub sweep: Option<Sweep>,
    pub outputs: Outputs,
    pub methods: Methods,
}

impl RunConfig {
    /// Default run at coupling `eta`.
    pub fn new(eta: f64) -> Self {
        Self {
            params: SystemParams::resonant(eta, DEFAULT_GAMMA, DEFAULT_GAMMA_CAV),
            n_max: DEFAULT_N_MAX,
            mu: MuChoice::OmegaG,
            grid: Grid::default(),
            sweep: None,
            outputs: Outputs::default(),
            methods: Methods::default(),
        }
    }

    pub fn eta(&self) -> f64 {
        self.params.eta()
    }

    fn with_eta(&self, eta: f64) -> SystemParams {
        SystemParams {
            rabi: eta * self.params.omega_c,
            ..self.params
        }
    }
}

fn finite(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(path, format!("must be finite, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<f64> {
    if finite(path, v)? < 0.0 {
        return Err(Error::config(path, format!("must be >= 0, got {v}")));
    }
    Ok(v)
}

/// Parses and validates a JSON config. Unknown keys are rejected; errors
/// name the offending key path.
pub fn validate_config(raw: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(raw);
    let cfg: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(path, e.into_inner().to_string())
    })?;

    let eta = non_negative("eta", cfg.eta)?;
    let omega_c = non_negative("omega_c", cfg.omega_c.unwrap_or(1.0))?;
    if omega_c == 0.0 {
        return Err(Error::config("omega_c", "must be > 0"));
    }
    let gamma = non_negative("gamma", cfg.gamma.unwrap_or(DEFAULT_GAMMA))?;
    let params = SystemParams {
        omega_c,
        omega_e: cfg.omega_e.unwrap_or(omega_c),
        omega_s: cfg.omega_s.unwrap_or(0.0),
        rabi: eta * omega_c,
        gamma_in: cfg.gamma_in.unwrap_or(gamma),
        gamma_out: cfg.gamma_out.unwrap_or(gamma),
        gamma_cav: cfg.gamma_cav.unwrap_or(DEFAULT_GAMMA_CAV),
        mu: 0.0,
    };
    params.validate()?;

    let n_max = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
    if n_max == 0 {
        return Err(Error::config("n_max", "must be at least 1"));
    }

    let mu = match cfg.mu {
        None => MuChoice::OmegaG,
        Some(RawMu::Value(v)) => MuChoice::Absolute(finite("mu", v)?),
        Some(RawMu::Symbol(s)) => s.parse()?,
    };

    let grid = match cfg.grid {
        None => Grid::default(),
        Some(g) => {
            finite("grid.min", g.min)?;
            finite("grid.max", g.max)?;
            if g.points < 2 {
                return Err(Error::config("grid.points", format!("must be at least 2, got {}", g.points)));
            }
            if g.max <= g.min {
                return Err(Error::config("grid.max", "must exceed grid.min"));
            }
            Grid {
                min: g.min,
                max: g.max,
                points: g.points,
            }
        }
    };

    let sweep = match cfg.sweep {
        None => None,
        Some(s) => {
            if s.values.is_empty() {
                return Err(Error::config("sweep.values", "must not be empty"));
            }
            for (k, v) in s.values.iter().enumerate() {
                let path = format!("sweep.values[{k}]");
                match s.variable {
                    SweepVariable::Eta => non_negative(&path, *v)?,
                    SweepVariable::Mu => finite(&path, *v)?,
                };
            }
            Some(Sweep {
                variable: s.variable,
                values: s.values,
            })
        }
    };

    for (path, name) in [("outputs.spectrum", &cfg.outputs.spectrum), ("outputs.sweep", &cfg.outputs.sweep)] {
        if name.is_empty() {
            return Err(Error::config(path, "must not be empty"));
        }
    }

    Ok(RunConfig {
        params,
        n_max,
        mu,
        grid,
        sweep,
        outputs: cfg.outputs,
        methods: cfg.methods,
    })
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read config: {e}")))?;
    validate_config(&raw)
}

fn header(out: &mut String, mode: Mode, cfg: &RunConfig, resolved_mu: Option<f64>) {
    let p = &cfg.params;
    let _ = writeln!(out, "# gse-sim {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# mode = {}", if mode == Mode::Spectrum { "spectrum" } else { "sweep" });
    let _ = writeln!(out, "# units: hbar = 1, energies and rates in units of omega_c");
    match &cfg.sweep {
        Some(s) if mode == Mode::Sweep && s.variable == SweepVariable::Eta => {
            let _ = writeln!(out, "# eta = swept");
        }
        _ => {
            let _ = writeln!(out, "# eta = {:e}", p.eta());
        }
    }
    for (k, v) in [
        ("omega_c", p.omega_c),
        ("omega_e", p.omega_e),
        ("omega_s", p.omega_s),
        ("gamma_in", p.gamma_in),
        ("gamma_out", p.gamma_out),
        ("gamma_cav", p.gamma_cav),
    ] {
        let _ = writeln!(out, "# {k} = {v:e}");
    }
    match (resolved_mu, &cfg.sweep) {
        (Some(mu), _) => {
            let _ = writeln!(out, "# mu = {mu:e} ({})", cfg.mu);
        }
        (None, Some(s)) if s.variable == SweepVariable::Mu => {
            let _ = writeln!(out, "# mu = swept, absolute values");
        }
        (None, _) => {
            let _ = writeln!(out, "# mu = {}", cfg.mu);
        }
    }
    if let (Mode::Sweep, Some(s)) = (mode, &cfg.sweep) {
        let _ = writeln!(out, "# sweep = {} over {} values", s.variable.name(), s.values.len());
    }
    let _ = writeln!(out, "# n_max = {}", cfg.n_max);
    let _ = writeln!(out, "# grid = {:e},{:e},{}", cfg.grid.min, cfg.grid.max, cfg.grid.points);
}

fn write_output(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, body)?;
    Ok(path)
}

/// Writes `omega,S` for the configured grid into `out_dir`.
pub fn run_spectrum(cfg: &RunConfig, out_dir: &Path) -> Result<PathBuf> {
    let model = Model::build(cfg.params, cfg.n_max, cfg.mu)?;
    let grid = cfg.grid.frequencies();
    let spec = model.spectrum(&grid)?;
    if !spec.failures.is_empty() {
        return Err(Error::ResolventFailed {
            count: spec.failures.len(),
        });
    }
    let mut out = String::new();
    header(&mut out, Mode::Spectrum, cfg, Some(model.params.mu));
    for w in &spec.windows {
        let _ = writeln!(
            out,
            "# line {} at {:e}, window [{:e}, {:e}), flux {:e}",
            w.peak.name(),
            w.center,
            w.lo,
            w.hi,
            spec.peak_flux(w.peak).unwrap_or(f64::NAN)
        );
    }
    out.push_str("omega,S\n");
    for (w, s) in spec.omegas.iter().zip(&spec.values) {
        let _ = writeln!(out, "{w:e},{s:e}");
    }
    write_output(out_dir, &cfg.outputs.spectrum, &out)
}

/// Closed-form fluxes for the injection regime selected by `model.params.mu`:
/// ground-state formula from `ω_G` up to the lower polariton threshold,
/// standard formula once both polaritons are open. NaN elsewhere, and when
/// the injection and extraction rates differ.
pub fn analytic_fluxes(model: &Model) -> Fluxes {
    let p = &model.params;
    let nan = Fluxes {
        central: f64::NAN,
        plus: f64::NAN,
        minus: f64::NAN,
    };
    if (p.gamma_in - p.gamma_out).abs() > 1e-12 * p.gamma_in.max(p.gamma_out) {
        return nan;
    }
    let b = &model.basis;
    let lower = b.omega_g() + b.omega_minus();
    let upper = b.omega_g() + b.omega_plus();
    let tol = crate::dissipators::GATE_TOLERANCE;
    if p.mu < b.omega_g() - tol {
        nan
    } else if p.mu < lower - tol {
        analytic_gse(p.eta(), p.gamma_in, p.gamma_cav)
    } else if p.mu >= upper - tol {
        analytic_el(p.eta(), p.gamma_in, p.gamma_cav)
    } else {
        nan
    }
}

/// One row of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub mu: f64,
    pub spectral: Option<Fluxes>,
    pub rate: Option<Fluxes>,
    pub analytic: Option<Fluxes>,
}

/// Evaluates every sweep point; rows come back in sweep order.
pub fn sweep_rows(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "required in sweep mode"))?;
    let grid = cfg.grid.frequencies();
    sweep
        .values
        .par_iter()
        .map(|&value| {
            let (params, mu) = match sweep.variable {
                SweepVariable::Eta => (cfg.with_eta(value), cfg.mu),
                SweepVariable::Mu => (cfg.params, MuChoice::Absolute(value)),
            };
            let model = Model::build(params, cfg.n_max, mu)?;
            let spectral = if cfg.methods.spectrum {
                let spec = model.spectrum(&grid)?;
                if !spec.failures.is_empty() {
                    return Err(Error::ResolventFailed {
                        count: spec.failures.len(),
                    });
                }
                Some(Model::spectral_fluxes(&spec))
            } else {
                None
            };
            let rate = if cfg.methods.ratemodel {
                Some(model.rate_fluxes()?)
            } else {
                None
            };
            let analytic = cfg.methods.analytic.then(|| analytic_fluxes(&model));
            Ok(SweepRow {
                value,
                mu: model.params.mu,
                spectral,
                rate,
                analytic,
            })
        })
        .collect()
}

/// Writes the sweep table into `out_dir`.
pub fn run_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<PathBuf> {
    let rows = sweep_rows(cfg)?;
    let variable = cfg.sweep.as_ref().map(|s| s.variable).unwrap_or(SweepVariable::Eta);
    let mut out = String::new();
    header(&mut out, Mode::Sweep, cfg, None);
    let mut columns = vec![variable.name().to_owned()];
    if variable == SweepVariable::Eta {
        columns.push("mu".into());
    }
    let groups = [
        (cfg.methods.spectrum, ""),
        (cfg.methods.analytic, "_analytic"),
        (cfg.methods.ratemodel, "_rate"),
    ];
    for (on, suffix) in groups {
        if on {
            for name in ["f_C", "f_plus", "f_minus"] {
                columns.push(format!("{name}{suffix}"));
            }
        }
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in &rows {
        let mut cells = vec![format!("{:e}", row.value)];
        if variable == SweepVariable::Eta {
            cells.push(format!("{:e}", row.mu));
        }
        for f in [row.spectral, row.analytic, row.rate].into_iter().flatten() {
            cells.extend([f.central, f.plus, f.minus].map(|v| format!("{v:e}")));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_output(out_dir, &cfg.outputs.sweep, &out)
}

/// Runs `mode` with the config at `config`, writing into `out_dir`.
pub fn run(config: &Path, out_dir: &Path, mode: Mode) -> Result<PathBuf> {
    let cfg = load_config(config)?;
    match mode {
        Mode::Spectrum => run_spectrum(&cfg, out_dir),
        Mode::Sweep => run_sweep(&cfg, out_dir),
    }
}

/// Parsed CSV body: the `#` lines, the header and the numeric rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Reads a file written by [`run_spectrum`] or [`run_sweep`].
pub fn read_table(text: &str) -> Result<Table> {
    let mut metadata = Vec::new();
    let mut lines = text.lines();
    let columns = loop {
        match lines.next() {
            Some(l) if l.starts_with('#') => metadata.push(l.trim_start_matches('#').trim().to_owned()),
            Some(l) => break l.split(',').map(str::to_owned).collect::<Vec<_>>(),
            None => return Err(Error::config("table", "missing header row")),
        }
    };
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| Error::config("table", format!("`{c}`: {e}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        metadata,
        columns,
        rows,
    })
}
