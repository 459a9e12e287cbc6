use std::fmt;

use rayon::prelude::*;
use toml::{Table, Value};

use crate::config::{as_f64, SimConfig};
use crate::dynamics::Stepping;
use crate::error::{Error, Result};

use super::{run_detailed, RunOutput};

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    G,
    Kappa,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::G => "g",
            SweepAxis::Kappa => "kappa",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "g" => Some(SweepAxis::G),
            "kappa" => Some(SweepAxis::Kappa),
            _ => None,
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &SimConfig, value: f64) -> SimConfig {
        let mut c = base.clone();
        match self {
            SweepAxis::G => c.g = value,
            SweepAxis::Kappa => c.kappa = value,
        }
        c
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family of runs differing in one parameter.
///
/// On disk:
///
/// ```toml
/// label = "kappa_scan"
/// axis = "kappa"
/// values = [0.08, 0.2, 2, 20]
/// # optional: Fock cutoff per value, overriding base.n_max
/// n_max_per_value = [30, 25, 12, 8]
///
/// [base]
/// g = 0.35
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub n_max_per_value: Option<Vec<usize>>,
    pub base: SimConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("values", "must not be empty"));
        }
        if self.label.is_empty() {
            return Err(Error::invalid("label", "must not be empty"));
        }
        if self.label.contains(['/', '\\']) {
            return Err(Error::invalid("label", "must not contain path separators"));
        }
        if let Some(ns) = &self.n_max_per_value {
            if ns.len() != self.values.len() {
                return Err(Error::invalid(
                    "n_max_per_value",
                    format!("has {} entries, values has {}", ns.len(), self.values.len()),
                ));
            }
        }
        self.base.validate().map_err(|e| e.context("base"))?;
        for (k, &v) in self.values.iter().enumerate() {
            self.config(k)
                .validate()
                .map_err(|e| e.context(format!("values entry {v}")))?;
        }
        Ok(())
    }

    /// Config of sweep point `k`.
    pub fn config(&self, k: usize) -> SimConfig {
        let mut c = self.axis.apply(&self.base, self.values[k]);
        if let Some(ns) = &self.n_max_per_value {
            c.n_max = ns[k];
        }
        c
    }

    /// Config of every sweep point, in `values` order.
    pub fn configs(&self) -> Vec<SimConfig> {
        (0..self.values.len()).map(|k| self.config(k)).collect()
    }

    /// Output file name of one sweep point: `<label>_<axis>=<value>.csv`.
    pub fn file_name(&self, value: f64) -> String {
        format!("{}_{}={}.csv", self.label, self.axis, value)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ConfigSyntax(e.to_string()))?;
        let mut label = None;
        let mut axis = None;
        let mut values = None;
        let mut n_max_per_value = None;
        let mut base = SimConfig::default();
        for (key, value) in &table {
            match key.as_str() {
                "label" => {
                    let s = value
                        .as_str()
                        .ok_or_else(|| Error::invalid("label", "expected a string"))?;
                    label = Some(s.to_string());
                }
                "axis" => {
                    let s = value
                        .as_str()
                        .ok_or_else(|| Error::invalid("axis", "expected a string"))?;
                    axis = Some(SweepAxis::parse(s).ok_or_else(|| {
                        Error::invalid("axis", format!("expected \"g\" or \"kappa\", got {s:?}"))
                    })?);
                }
                "values" => {
                    let arr = value
                        .as_array()
                        .ok_or_else(|| Error::invalid("values", "expected an array of numbers"))?;
                    values = Some(
                        arr.iter()
                            .map(|v| as_f64("values", v))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                "n_max_per_value" => {
                    let arr = value
                        .as_array()
                        .ok_or_else(|| Error::invalid(key, "expected an array of integers"))?;
                    let ns = arr
                        .iter()
                        .map(|v| match v.as_integer() {
                            Some(i) if i >= 0 => Ok(i as usize),
                            _ => Err(Error::invalid(key, "expected non-negative integers")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    n_max_per_value = Some(ns);
                }
                "base" => match value {
                    Value::Table(t) => {
                        base = SimConfig::from_table(t).map_err(|e| e.context("base"))?
                    }
                    _ => return Err(Error::invalid("base", "expected a table")),
                },
                other => return Err(Error::invalid(other, "unknown sweep key")),
            }
        }
        let spec = SweepSpec {
            label: label.ok_or_else(|| Error::invalid("label", "missing"))?,
            axis: axis.ok_or_else(|| Error::invalid("axis", "missing"))?,
            values: values.ok_or_else(|| Error::invalid("values", "missing"))?,
            n_max_per_value,
            base,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

/// One finished sweep point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub output: RunOutput,
}

/// Runs every point of `spec`, concurrently on the current rayon pool.
/// Results come back in `values` order; the first failure aborts the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    spec.validate()?;
    spec.configs()
        .into_par_iter()
        .zip(spec.values.par_iter())
        .map(|(config, &value)| {
            run_detailed(&config, Stepping::Adaptive)
                .map(|output| SweepPoint { value, output })
                .map_err(|e| {
                    e.context(format!(
                        "sweep {} point {}={}",
                        spec.label, spec.axis, value
                    ))
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"
label = "probe"
axis = "kappa"
values = [0.2, 2]

[base]
g = 0.35
n_max = 3
t_max = 4
"#;

    #[test]
    fn parses_spec() {
        let s = SweepSpec::from_toml_str(SPEC).unwrap();
        assert_eq!(s.axis, SweepAxis::Kappa);
        assert_eq!(s.values, vec![0.2, 2.0]);
        assert_eq!(s.base.n_max, 3);
        assert_eq!(s.configs()[1].kappa, 2.0);
        assert_eq!(s.file_name(0.2), "probe_kappa=0.2.csv");
        assert_eq!(s.file_name(20.0), "probe_kappa=20.csv");

        let o =
            SweepSpec::from_toml_str(&SPEC.replace("[base]", "n_max_per_value = [5, 2]\n[base]"))
                .unwrap();
        assert_eq!(
            o.configs().iter().map(|c| c.n_max).collect::<Vec<_>>(),
            vec![5, 2]
        );
        assert_eq!(o.config(1).kappa, 2.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let field = |text: &str| match SweepSpec::from_toml_str(text).unwrap_err().root() {
            Error::InvalidConfig { field, .. } => field.clone(),
            e => panic!("unexpected {e}"),
        };
        assert_eq!(field(&SPEC.replace("[0.2, 2]", "[]")), "values");
        assert_eq!(field(&SPEC.replace("[0.2, 2]", "[0.2, -1]")), "kappa");
        assert_eq!(field(&SPEC.replace("\"kappa\"", "\"omega\"")), "axis");
        assert_eq!(field(&SPEC.replace("n_max = 3", "n_max = -3")), "n_max");
        assert_eq!(field(&SPEC.replace("[base]", "extra = 1\n[base]")), "extra");
        assert_eq!(
            field(&SPEC.replace("[base]", "n_max_per_value = [2]\n[base]")),
            "n_max_per_value"
        );
        assert_eq!(field("axis = \"g\"\nvalues = [1]"), "label");
    }

    #[test]
    fn sweep_matches_individual_runs() {
        let s = SweepSpec::from_toml_str(SPEC).unwrap();
        let points = run_sweep(&s).unwrap();
        assert_eq!(points.iter().map(|p| p.value).collect::<Vec<_>>(), s.values);
        for (p, cfg) in points.iter().zip(s.configs()) {
            let single = super::super::run_single(&cfg).unwrap();
            assert_eq!(p.output.records, single);
        }
    }
}
