//! Plain key=value run configuration with strict validation.
//!
//! Lines hold one `key=value` pair each; `#` starts a comment; every numeric
//! domain is enforced while parsing and unknown or duplicate keys are
//! rejected, each error carrying its line number.

use std::collections::HashMap;
use std::fmt;

/// What the harness should do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// One discrete cycle at a fixed measurement strength.
    Discrete,
    /// Cycle table over a strength or arrow grid.
    Sweep,
    /// Continuous-measurement trajectory ensemble.
    Simulate,
    /// Analytic density curves only.
    Pdf,
    /// Ensemble plus curves, histograms, and KS statistics.
    Compare,
}

impl Mode {
    fn from_str(s: &str) -> Option<Self> {
        match s {
            "discrete" => Some(Mode::Discrete),
            "sweep" => Some(Mode::Sweep),
            "simulate" => Some(Mode::Simulate),
            "pdf" => Some(Mode::Pdf),
            "compare" => Some(Mode::Compare),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Discrete => "discrete",
            Mode::Sweep => "sweep",
            Mode::Simulate => "simulate",
            Mode::Pdf => "pdf",
            Mode::Compare => "compare",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive linear grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub omega0: f64,
    /// Demon temperatures; more than one entry only in sweep mode.
    pub t_demon: Vec<f64>,
    /// Initial Bloch-z overrides; absent means the thermal value.
    pub z0: Option<Vec<f64>>,
    pub kappa: Option<f64>,
    pub kappa_grid: Option<GridSpec>,
    pub q_grid: Option<GridSpec>,
    pub dt_over_tau: Option<f64>,
    pub n_steps: Option<usize>,
    pub n_traj: Option<usize>,
    pub master_seed: u64,
    pub bins: usize,
    pub curve_points: usize,
    pub out: Option<String>,
}

#[derive(Debug)]
pub enum ConfigError {
    UnknownKey {
        line: usize,
        key: String,
    },
    DuplicateKey {
        line: usize,
        key: String,
    },
    Malformed {
        line: usize,
        text: String,
    },
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    MissingMode,
    MissingKey {
        mode: &'static str,
        key: &'static str,
    },
    Invalid {
        message: String,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownKey { line, key } => {
                write!(f, "line {line}: unknown key `{key}`")
            }
            ConfigError::DuplicateKey { line, key } => {
                write!(f, "line {line}: duplicate key `{key}`")
            }
            ConfigError::Malformed { line, text } => {
                write!(f, "line {line}: expected key=value, got `{text}`")
            }
            ConfigError::BadValue { line, key, message } => {
                write!(f, "line {line}: {key} {message}")
            }
            ConfigError::MissingMode => write!(f, "missing required key `mode`"),
            ConfigError::MissingKey { mode, key } => {
                write!(f, "mode {mode} requires key `{key}`")
            }
            ConfigError::Invalid { message } => f.write_str(message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "omega0",
    "t_demon",
    "z0",
    "kappa",
    "kappa_grid",
    "q_grid",
    "dt_over_tau",
    "n_steps",
    "n_traj",
    "master_seed",
    "bins",
    "curve_points",
    "out",
];

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::BadValue {
            line,
            key: key.to_string(),
            message: format!("expects a finite number, got `{value}`"),
        })
}

fn parse_f64_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|part| parse_f64(line, key, part.trim()))
        .collect()
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        message: format!("expects a non-negative integer, got `{value}`"),
    })
}

fn parse_grid(line: usize, key: &str, value: &str) -> Result<GridSpec, ConfigError> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            message: format!("expects start:stop:count, got `{value}`"),
        });
    }
    let start = parse_f64(line, key, parts[0].trim())?;
    let stop = parse_f64(line, key, parts[1].trim())?;
    let count = parse_usize(line, key, parts[2].trim())?;
    if count == 0 {
        return Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            message: "needs at least one grid point".into(),
        });
    }
    if stop < start {
        return Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            message: format!("grid stop {stop} is below start {start}"),
        });
    }
    Ok(GridSpec { start, stop, count })
}

/// Parse and validate a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut seen: HashMap<String, (usize, String)> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line: line_no, key });
        }
        if seen.contains_key(&key) {
            return Err(ConfigError::DuplicateKey { line: line_no, key });
        }
        seen.insert(key.clone(), (line_no, value));
        order.push(key);
    }

    let get = |key: &str| seen.get(key).cloned();

    let mode = match get("mode") {
        Some((line, value)) => Mode::from_str(&value).ok_or(ConfigError::BadValue {
            line,
            key: "mode".into(),
            message: format!(
                "must be one of discrete, sweep, simulate, pdf, compare; got `{value}`"
            ),
        })?,
        None => return Err(ConfigError::MissingMode),
    };

    let omega0 = match get("omega0") {
        Some((line, v)) => {
            let x = parse_f64(line, "omega0", &v)?;
            if x <= 0.0 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "omega0".into(),
                    message: format!("must be > 0, got {x}"),
                });
            }
            x
        }
        None => 0.1,
    };

    let t_demon = match get("t_demon") {
        Some((line, v)) => {
            let list = parse_f64_list(line, "t_demon", &v)?;
            for &x in &list {
                if x < 0.0 {
                    return Err(ConfigError::BadValue {
                        line,
                        key: "t_demon".into(),
                        message: format!("must be >= 0, got {x}"),
                    });
                }
            }
            list
        }
        None => vec![0.001],
    };

    let z0 = match get("z0") {
        Some((line, v)) => {
            let list = parse_f64_list(line, "z0", &v)?;
            for &x in &list {
                if !(x > -1.0 && x <= 0.0) {
                    return Err(ConfigError::BadValue {
                        line,
                        key: "z0".into(),
                        message: format!("must lie in (-1, 0], got {x}"),
                    });
                }
            }
            Some(list)
        }
        None => None,
    };

    let kappa = match get("kappa") {
        Some((line, v)) => {
            let x = parse_f64(line, "kappa", &v)?;
            if !(x > 0.0 && x < 1.0) {
                return Err(ConfigError::BadValue {
                    line,
                    key: "kappa".into(),
                    message: format!("must lie in the open interval (0, 1), got {x}"),
                });
            }
            Some(x)
        }
        None => None,
    };

    let kappa_grid = match get("kappa_grid") {
        Some((line, v)) => {
            let g = parse_grid(line, "kappa_grid", &v)?;
            if !(g.start > 0.0 && g.stop < 1.0) {
                return Err(ConfigError::BadValue {
                    line,
                    key: "kappa_grid".into(),
                    message: format!("grid must stay inside the open interval (0, 1), got {g}"),
                });
            }
            Some(g)
        }
        None => None,
    };

    let q_grid = match get("q_grid") {
        Some((line, v)) => {
            let g = parse_grid(line, "q_grid", &v)?;
            if g.start < 0.0 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "q_grid".into(),
                    message: format!("arrow values must be >= 0, got start {}", g.start),
                });
            }
            Some(g)
        }
        None => None,
    };

    let dt_over_tau = match get("dt_over_tau") {
        Some((line, v)) => {
            let x = parse_f64(line, "dt_over_tau", &v)?;
            if x <= 0.0 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "dt_over_tau".into(),
                    message: format!("must be > 0, got {x}"),
                });
            }
            Some(x)
        }
        None => None,
    };

    let n_steps = match get("n_steps") {
        Some((line, v)) => Some(parse_usize(line, "n_steps", &v)?),
        None => None,
    };

    let n_traj = match get("n_traj") {
        Some((line, v)) => {
            let n = parse_usize(line, "n_traj", &v)?;
            if n == 0 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "n_traj".into(),
                    message: "needs at least one trajectory".into(),
                });
            }
            Some(n)
        }
        None => None,
    };

    let master_seed = match get("master_seed") {
        Some((line, v)) => v.parse::<u64>().map_err(|_| ConfigError::BadValue {
            line,
            key: "master_seed".into(),
            message: format!("expects a 64-bit unsigned integer, got `{v}`"),
        })?,
        None => 42,
    };

    let bins = match get("bins") {
        Some((line, v)) => {
            let n = parse_usize(line, "bins", &v)?;
            if n == 0 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "bins".into(),
                    message: "needs at least one bin".into(),
                });
            }
            n
        }
        None => 100,
    };

    let curve_points = match get("curve_points") {
        Some((line, v)) => {
            let n = parse_usize(line, "curve_points", &v)?;
            if n < 2 {
                return Err(ConfigError::BadValue {
                    line,
                    key: "curve_points".into(),
                    message: "needs at least two grid points".into(),
                });
            }
            n
        }
        None => 512,
    };

    let out = get("out").map(|(_, v)| v);

    let config = RunConfig {
        mode,
        omega0,
        t_demon,
        z0,
        kappa,
        kappa_grid,
        q_grid,
        dt_over_tau,
        n_steps,
        n_traj,
        master_seed,
        bins,
        curve_points,
        out,
    };
    validate_mode(&config)?;
    Ok(config)
}

fn validate_mode(config: &RunConfig) -> Result<(), ConfigError> {
    let mode = config.mode;
    let invalid = |message: String| Err(ConfigError::Invalid { message });

    if config.kappa.is_some() && (config.kappa_grid.is_some() || config.q_grid.is_some()) {
        return invalid("`kappa` conflicts with grid keys".into());
    }
    if config.kappa_grid.is_some() && config.q_grid.is_some() {
        return invalid("`kappa_grid` conflicts with `q_grid`".into());
    }

    let single_engine = |what: &str| -> Result<(), ConfigError> {
        if config.t_demon.len() > 1 {
            return invalid(format!("mode {what} takes a single t_demon value"));
        }
        if config.z0.as_ref().is_some_and(|l| l.len() > 1) {
            return invalid(format!("mode {what} takes a single z0 value"));
        }
        Ok(())
    };

    match mode {
        Mode::Discrete => {
            single_engine("discrete")?;
            if config.kappa.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: "discrete",
                    key: "kappa",
                });
            }
        }
        Mode::Sweep => {
            if config.kappa_grid.is_none() && config.q_grid.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: "sweep",
                    key: "kappa_grid (or q_grid)",
                });
            }
        }
        Mode::Simulate | Mode::Compare => {
            single_engine(mode.as_str())?;
            if config.dt_over_tau.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: mode.as_str(),
                    key: "dt_over_tau",
                });
            }
            if config.n_steps.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: mode.as_str(),
                    key: "n_steps",
                });
            }
            if config.n_traj.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: mode.as_str(),
                    key: "n_traj",
                });
            }
            if mode == Mode::Compare {
                require_densities_defined(config)?;
            }
        }
        Mode::Pdf => {
            single_engine("pdf")?;
            if config.dt_over_tau.is_none() {
                return Err(ConfigError::MissingKey {
                    mode: "pdf",
                    key: "dt_over_tau",
                });
            }
            match config.n_steps {
                None => {
                    return Err(ConfigError::MissingKey {
                        mode: "pdf",
                        key: "n_steps",
                    })
                }
                Some(0) => {
                    return invalid("mode pdf needs n_steps >= 1 for a positive duration".into())
                }
                Some(_) => {}
            }
            require_densities_defined(config)?;
        }
    }
    Ok(())
}

fn require_densities_defined(config: &RunConfig) -> Result<(), ConfigError> {
    if config.z0.as_ref().is_some_and(|l| l.contains(&0.0)) {
        return Err(ConfigError::Invalid {
            message: "z0 = 0 leaves the work/heat/entropy densities undefined".into(),
        });
    }
    if config.n_steps == Some(0) {
        return Err(ConfigError::Invalid {
            message: "n_steps = 0 gives zero duration; densities are undefined".into(),
        });
    }
    Ok(())
}

fn join(list: &[f64]) -> String {
    list.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical key=value text; parsing it reproduces the config exactly.
pub fn echo(config: &RunConfig) -> String {
    let mut lines = vec![format!("mode={}", config.mode)];
    lines.push(format!("omega0={}", config.omega0));
    lines.push(format!("t_demon={}", join(&config.t_demon)));
    if let Some(z0) = &config.z0 {
        lines.push(format!("z0={}", join(z0)));
    }
    if let Some(kappa) = config.kappa {
        lines.push(format!("kappa={kappa}"));
    }
    if let Some(g) = config.kappa_grid {
        lines.push(format!("kappa_grid={g}"));
    }
    if let Some(g) = config.q_grid {
        lines.push(format!("q_grid={g}"));
    }
    if let Some(dt) = config.dt_over_tau {
        lines.push(format!("dt_over_tau={dt}"));
    }
    if let Some(n) = config.n_steps {
        lines.push(format!("n_steps={n}"));
    }
    if let Some(n) = config.n_traj {
        lines.push(format!("n_traj={n}"));
    }
    lines.push(format!("master_seed={}", config.master_seed));
    lines.push(format!("bins={}", config.bins));
    lines.push(format!("curve_points={}", config.curve_points));
    if let Some(out) = &config.out {
        lines.push(format!("out={out}"));
    }
    lines.join("\n") + "\n"
}

impl RunConfig {
    /// Advisory notes surfaced on stderr by the CLI.
    pub fn warnings(&self) -> Vec<String> {
        let mut notes = Vec::new();
        for &td in &self.t_demon {
            if td >= 1.0 {
                notes.push(format!(
                    "t_demon = {td} is not small compared to the reservoir temperature"
                ));
            }
        }
        if let Some(dt) = self.dt_over_tau {
            if dt > 0.1 {
                notes.push(format!(
                    "dt_over_tau = {dt} is outside the continuum-limit regime (<= 0.1 recommended)"
                ));
            }
        }
        notes
    }
}
