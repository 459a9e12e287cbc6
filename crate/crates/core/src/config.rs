//! Run configuration and its on-disk `key = value` format.
//!
//! All rates and frequencies are in units of the field frequency `omega`,
//! times in units of `1/omega`, so a config reads like a figure caption:
//!
//! ```toml
//! omega0 = 1.01
//! g = 0.35
//! kappa = 20
//! t_max = 500
//! ```
//!
//! Files are parsed as TOML. Unknown keys are rejected. A `[manifest]` table,
//! as written next to every CSV by the CLI, is ignored on load so a manifest
//! can be fed straight back in as a config.

use std::fmt::Write as _;

use toml::{Table, Value};

use crate::error::{Error, Result};

/// Initial density matrix of the atoms+cavity system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialState {
    /// `|g_A, g_B, 0⟩⟨g_A, g_B, 0|`
    #[default]
    Vacuum,
}

impl InitialState {
    pub fn name(self) -> &'static str {
        match self {
            InitialState::Vacuum => "vacuum",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "vacuum" => Some(InitialState::Vacuum),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Field frequency; sets the unit of time.
    pub omega: f64,
    /// Atomic transition frequency.
    pub omega0: f64,
    /// Atom-field coupling.
    pub g: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Drop the counter-rotating terms.
    pub rwa: bool,
    /// Highest retained Fock number.
    pub n_max: usize,
    /// Final dimensionless time `omega * t`.
    pub t_max: f64,
    /// Dimensionless time between output records.
    pub sample_interval: f64,
    pub integrator_rel_tol: f64,
    pub integrator_abs_tol: f64,
    pub initial_state: InitialState,
    /// Trailing window for steady-state detection.
    pub steady_window: f64,
    /// Max elementwise change of rho over the window to call it steady.
    pub steady_tol: f64,
    /// End the run as soon as the steady state is detected.
    pub stop_at_steady: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            omega0: 1.01,
            g: 0.35,
            kappa: 0.2,
            rwa: false,
            n_max: 50,
            t_max: 500.0,
            sample_interval: 1.0,
            integrator_rel_tol: 1e-9,
            integrator_abs_tol: 1e-12,
            initial_state: InitialState::Vacuum,
            steady_window: 200.0,
            steady_tol: 1e-8,
            stop_at_steady: false,
        }
    }
}

/// Names of every config key, in file order.
pub const CONFIG_KEYS: &[&str] = &[
    "omega",
    "omega0",
    "g",
    "kappa",
    "rwa",
    "n_max",
    "t_max",
    "sample_interval",
    "integrator_rel_tol",
    "integrator_abs_tol",
    "initial_state",
    "steady_window",
    "steady_tol",
    "stop_at_steady",
];

fn check(cond: bool, field: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, reason))
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| check(v.is_finite(), field, "must be finite");
        finite("omega", self.omega)?;
        check(self.omega > 0.0, "omega", "must be > 0")?;
        finite("omega0", self.omega0)?;
        finite("g", self.g)?;
        check(self.g >= 0.0, "g", "must be >= 0")?;
        finite("kappa", self.kappa)?;
        check(self.kappa >= 0.0, "kappa", "must be >= 0")?;
        finite("t_max", self.t_max)?;
        check(self.t_max > 0.0, "t_max", "must be > 0")?;
        finite("sample_interval", self.sample_interval)?;
        check(self.sample_interval > 0.0, "sample_interval", "must be > 0")?;
        check(
            self.sample_interval <= self.t_max,
            "sample_interval",
            "must not exceed t_max",
        )?;
        for (field, v) in [
            ("integrator_rel_tol", self.integrator_rel_tol),
            ("integrator_abs_tol", self.integrator_abs_tol),
            ("steady_window", self.steady_window),
            ("steady_tol", self.steady_tol),
        ] {
            finite(field, v)?;
            check(v > 0.0, field, "must be > 0")?;
        }
        Ok(())
    }

    /// Dimension of the truncated atoms+cavity space.
    pub fn dim(&self) -> usize {
        4 * (self.n_max + 1)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ConfigSyntax(e.to_string()))?;
        table.remove("manifest");
        Self::from_table(&table)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_toml_str(&text)
    }

    /// Builds a validated config from a parsed table; missing keys take defaults.
    pub fn from_table(table: &Table) -> Result<Self> {
        let mut c = SimConfig::default();
        for (key, value) in table {
            match key.as_str() {
                "omega" => c.omega = as_f64(key, value)?,
                "omega0" => c.omega0 = as_f64(key, value)?,
                "g" => c.g = as_f64(key, value)?,
                "kappa" => c.kappa = as_f64(key, value)?,
                "rwa" => c.rwa = as_bool(key, value)?,
                "n_max" => c.n_max = as_usize(key, value)?,
                "t_max" => c.t_max = as_f64(key, value)?,
                "sample_interval" => c.sample_interval = as_f64(key, value)?,
                "integrator_rel_tol" => c.integrator_rel_tol = as_f64(key, value)?,
                "integrator_abs_tol" => c.integrator_abs_tol = as_f64(key, value)?,
                "initial_state" => {
                    let s = value
                        .as_str()
                        .ok_or_else(|| Error::invalid(key, "expected a string"))?;
                    c.initial_state = InitialState::parse(s).ok_or_else(|| {
                        Error::invalid(key, format!("unknown initial state {s:?}"))
                    })?;
                }
                "steady_window" => c.steady_window = as_f64(key, value)?,
                "steady_tol" => c.steady_tol = as_f64(key, value)?,
                "stop_at_steady" => c.stop_at_steady = as_bool(key, value)?,
                other => return Err(Error::invalid(other, "unknown config key")),
            }
        }
        c.validate()?;
        Ok(c)
    }

    /// Serializes every field; floats use the shortest round-trip form so
    /// parsing the output reproduces the config exactly.
    pub fn to_toml_string(&self) -> String {
        let mut s = String::new();
        let mut f = |k: &str, v: f64| writeln!(s, "{k} = {}", fmt_float(v)).unwrap();
        f("omega", self.omega);
        f("omega0", self.omega0);
        f("g", self.g);
        f("kappa", self.kappa);
        writeln!(s, "rwa = {}", self.rwa).unwrap();
        writeln!(s, "n_max = {}", self.n_max).unwrap();
        let mut f = |k: &str, v: f64| writeln!(s, "{k} = {}", fmt_float(v)).unwrap();
        f("t_max", self.t_max);
        f("sample_interval", self.sample_interval);
        f("integrator_rel_tol", self.integrator_rel_tol);
        f("integrator_abs_tol", self.integrator_abs_tol);
        writeln!(s, "initial_state = \"{}\"", self.initial_state.name()).unwrap();
        let mut f = |k: &str, v: f64| writeln!(s, "{k} = {}", fmt_float(v)).unwrap();
        f("steady_window", self.steady_window);
        f("steady_tol", self.steady_tol);
        writeln!(s, "stop_at_steady = {}", self.stop_at_steady).unwrap();
        s
    }
}

/// Shortest round-trip float literal that TOML accepts.
pub(crate) fn fmt_float(v: f64) -> String {
    // Debug always includes a '.' or an exponent, which TOML requires.
    format!("{v:?}")
}

pub(crate) fn as_f64(key: &str, value: &Value) -> Result<f64> {
    match value {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::invalid(key, "expected a number")),
    }
}

fn as_bool(key: &str, value: &Value) -> Result<bool> {
    value
        .as_bool()
        .ok_or_else(|| Error::invalid(key, "expected true or false"))
}

fn as_usize(key: &str, value: &Value) -> Result<usize> {
    match value {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        Value::Integer(_) => Err(Error::invalid(key, "must be >= 0")),
        _ => Err(Error::invalid(key, "expected a non-negative integer")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(err: Error) -> String {
        match err {
            Error::InvalidConfig { field, .. } => field,
            other => panic!("expected InvalidConfig, got {other:?}"),
        }
    }

    #[test]
    fn defaults_are_valid() {
        let c = SimConfig::default();
        c.validate().unwrap();
        assert_eq!(c.dim(), 204);
        assert!((c.omega0 - c.omega - 0.01).abs() < 1e-12);
    }

    #[test]
    fn parses_caption_style_config() {
        let c = SimConfig::from_toml_str(
            "omega0 = 1.01\ng = 0.35\nkappa = 20\nrwa = true\nn_max = 8\n",
        )
        .unwrap();
        assert_eq!(c.kappa, 20.0);
        assert_eq!(c.n_max, 8);
        assert!(c.rwa);
    }

    #[test]
    fn roundtrip_is_exact() {
        let c = SimConfig {
            g: 7.5e-5,
            kappa: 0.08,
            t_max: 2e6,
            integrator_rel_tol: 1.0 / 3.0,
            ..Default::default()
        };
        let back = SimConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn manifest_table_is_ignored() {
        let text = format!(
            "{}\n[manifest]\nversion = \"x\"\n",
            SimConfig::default().to_toml_string()
        );
        assert_eq!(
            SimConfig::from_toml_str(&text).unwrap(),
            SimConfig::default()
        );
    }

    #[test]
    fn every_out_of_range_field_is_named() {
        let cases = [
            ("omega = 0", "omega"),
            ("omega = -1", "omega"),
            ("omega0 = nan", "omega0"),
            ("g = -0.1", "g"),
            ("kappa = -1", "kappa"),
            ("n_max = -3", "n_max"),
            ("n_max = 2.5", "n_max"),
            ("t_max = 0", "t_max"),
            ("sample_interval = 0", "sample_interval"),
            ("sample_interval = 1000", "sample_interval"),
            ("integrator_rel_tol = 0", "integrator_rel_tol"),
            ("integrator_abs_tol = -1e-12", "integrator_abs_tol"),
            ("initial_state = \"thermal\"", "initial_state"),
            ("steady_window = 0", "steady_window"),
            ("steady_tol = 0", "steady_tol"),
            ("rwa = 1", "rwa"),
            ("stop_at_steady = \"yes\"", "stop_at_steady"),
            ("bogus = 1", "bogus"),
        ];
        for (text, field) in cases {
            let err = SimConfig::from_toml_str(text).unwrap_err();
            assert!(err.to_string().contains(field), "{text}: {err}");
            assert_eq!(field_of(err), field, "{text}");
        }
    }

    #[test]
    fn syntax_errors_are_reported() {
        assert!(matches!(
            SimConfig::from_toml_str("g = = 1"),
            Err(Error::ConfigSyntax(_))
        ));
    }
}
