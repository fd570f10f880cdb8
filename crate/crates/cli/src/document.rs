//! Config documents: TOML tables whose `section.key` paths mirror
//! [`ScenarioConfig`]. Angles are radians; an angle key with a `_deg`
//! suffix is accepted and converted on parse. Serialization always writes
//! every key, in a fixed order, so `parse ∘ serialize` is a fixed point.

use std::fmt;

use cvfb_core::{ScenarioConfig, SweepSpec, ThreePortSample};
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax {
        line: usize,
        message: String,
    },
    /// Every offending key, not just the first.
    Invalid(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, message } => {
                write!(f, "config syntax error at line {line}: {message}")
            }
            ConfigError::Invalid(errs) => {
                write!(f, "invalid config:")?;
                for e in errs {
                    write!(f, "\n  - {e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Float,
    Angle,
    Bool,
    Count,
}

const KEYS: &[(&str, Kind)] = &[
    ("nopa.kappa_total", Kind::Float),
    ("nopa.escape_efficiency", Kind::Float),
    ("nopa.pump_parameter", Kind::Float),
    ("nopa.pump_phase", Kind::Angle),
    ("nopa.excess_phase_noise", Kind::Float),
    ("nopa.target_sum_db", Kind::Float),
    ("nopa.target_diff_db", Kind::Float),
    ("sample.t", Kind::Float),
    ("sample.r", Kind::Float),
    ("sample.l", Kind::Float),
    ("feedback.enabled", Kind::Bool),
    ("feedback.detuning", Kind::Angle),
    ("feedback.path_length", Kind::Float),
    ("detection.efficiency", Kind::Float),
    ("detection.detected_db", Kind::Float),
    ("detection.reference_db", Kind::Float),
    ("analysis.frequency_hz", Kind::Float),
    ("classical.m3_reflectivity", Kind::Float),
    ("classical.scan_amplitude", Kind::Float),
    ("classical.scan_period", Kind::Float),
    ("classical.volts_to_radians", Kind::Float),
    ("classical.samples", Kind::Count),
    ("classical.periods", Kind::Float),
];

const SECTIONS: &[&str] = &[
    "nopa",
    "sample",
    "feedback",
    "detection",
    "analysis",
    "classical",
    "sweep",
];

fn float_slot<'a>(cfg: &'a mut ScenarioConfig, key: &str) -> Option<&'a mut f64> {
    Some(match key {
        "nopa.kappa_total" => &mut cfg.nopa.kappa_total,
        "nopa.escape_efficiency" => &mut cfg.nopa.escape_efficiency,
        "nopa.pump_parameter" => &mut cfg.nopa.pump_parameter,
        "nopa.pump_phase" => &mut cfg.nopa.pump_phase,
        "nopa.excess_phase_noise" => &mut cfg.nopa.excess_phase_noise,
        "nopa.target_sum_db" => &mut cfg.targets.sum_db,
        "nopa.target_diff_db" => &mut cfg.targets.diff_db,
        "sample.t" => &mut cfg.sample.t,
        "sample.r" => &mut cfg.sample.r,
        "sample.l" => &mut cfg.sample.l,
        "feedback.detuning" => &mut cfg.feedback.detuning,
        "feedback.path_length" => &mut cfg.feedback.path_length,
        "detection.efficiency" => &mut cfg.detection.params.efficiency,
        "detection.detected_db" => &mut cfg.detection.detected_db,
        "detection.reference_db" => &mut cfg.detection.reference_db,
        "analysis.frequency_hz" => &mut cfg.analysis.frequency_hz,
        "classical.m3_reflectivity" => &mut cfg.classical.m3_reflectivity,
        "classical.scan_amplitude" => &mut cfg.classical.scan_amplitude,
        "classical.scan_period" => &mut cfg.classical.scan_period,
        "classical.volts_to_radians" => &mut cfg.classical.volts_to_radians,
        "classical.periods" => &mut cfg.classical.periods,
        _ => return None,
    })
}

/// Resolve a possibly `_deg`-suffixed path to its canonical key, its kind,
/// and the factor converting the given unit to the stored unit.
fn resolve(path: &str) -> Option<(&'static str, Kind, f64)> {
    if let Some((key, kind)) = KEYS.iter().find(|(k, _)| *k == path) {
        return Some((key, *kind, 1.0));
    }
    let base = path.strip_suffix("_deg")?;
    KEYS.iter()
        .find(|(k, kind)| *k == base && *kind == Kind::Angle)
        .map(|(k, kind)| (*k, *kind, 1f64.to_radians()))
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn set_value(cfg: &mut ScenarioConfig, path: &str, v: &Value) -> Result<(), String> {
    let (key, kind, scale) = resolve(path).ok_or_else(|| format!("unknown key `{path}`"))?;
    match kind {
        Kind::Float | Kind::Angle => {
            let x = as_f64(v).ok_or_else(|| format!("`{path}` expects a number, got {v}"))?;
            *float_slot(cfg, key).expect("numeric key has a slot") = x * scale;
        }
        Kind::Bool => {
            let b = v
                .as_bool()
                .ok_or_else(|| format!("`{path}` expects true or false, got {v}"))?;
            cfg.feedback.enabled = b;
        }
        Kind::Count => {
            let n = v
                .as_integer()
                .filter(|n| *n >= 0)
                .ok_or_else(|| format!("`{path}` expects a non-negative integer, got {v}"))?;
            cfg.classical.samples = n as usize;
        }
    }
    Ok(())
}

fn get_value(cfg: &ScenarioConfig, key: &str) -> Value {
    let mut c = cfg.clone();
    match key {
        "feedback.enabled" => Value::Boolean(cfg.feedback.enabled),
        "classical.samples" => Value::Integer(cfg.classical.samples as i64),
        _ => Value::Float(*float_slot(&mut c, key).expect("numeric key has a slot")),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn parse_sweep_table(t: &Table, errs: &mut Vec<String>) -> Option<SweepSpec> {
    for k in t.keys() {
        if !["parameter", "from", "to", "steps"].contains(&k.as_str()) {
            errs.push(format!("unknown key `sweep.{k}`"));
        }
    }
    let parameter = match t.get("parameter").map(|v| v.as_str()) {
        Some(Some(p)) => p.to_string(),
        Some(None) => {
            errs.push("`sweep.parameter` expects a string".into());
            return None;
        }
        None => {
            errs.push("`sweep.parameter` is required when a sweep section is present".into());
            return None;
        }
    };
    let mut num = |k: &str| match t.get(k).map(as_f64) {
        Some(Some(x)) => Some(x),
        Some(None) => {
            errs.push(format!("`sweep.{k}` expects a number"));
            None
        }
        None => {
            errs.push(format!(
                "`sweep.{k}` is required when a sweep section is present"
            ));
            None
        }
    };
    let (from, to) = (num("from"), num("to"));
    let steps = match t.get("steps").map(|v| v.as_integer()) {
        Some(Some(n)) if n >= 0 => Some(n as usize),
        Some(_) => {
            errs.push("`sweep.steps` expects a non-negative integer".into());
            None
        }
        None => {
            errs.push("`sweep.steps` is required when a sweep section is present".into());
            None
        }
    };
    match sweep_spec(&parameter, from?, to?, steps?) {
        Ok(s) => Some(s),
        Err(e) => {
            errs.push(e);
            None
        }
    }
}

/// Build a sweep over a numeric key, converting `_deg` end points.
fn sweep_spec(parameter: &str, from: f64, to: f64, steps: usize) -> Result<SweepSpec, String> {
    let (key, kind, scale) =
        resolve(parameter).ok_or_else(|| format!("unknown sweep parameter `{parameter}`"))?;
    if !matches!(kind, Kind::Float | Kind::Angle) {
        return Err(format!(
            "sweep parameter `{parameter}` is not a continuous quantity"
        ));
    }
    SweepSpec::new(key, from * scale, to * scale, steps).map_err(|e| e.to_string())
}

/// Parse a config document. An empty document yields the defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax {
            line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
    let mut cfg = ScenarioConfig::default();
    let mut errs = Vec::new();
    for (section, body) in &doc {
        let Some(table) = body.as_table() else {
            errs.push(format!("top-level key `{section}` must be a [section]"));
            continue;
        };
        if !SECTIONS.contains(&section.as_str()) {
            errs.push(format!("unknown section `[{section}]`"));
            continue;
        }
        if section == "sweep" {
            cfg.sweep = parse_sweep_table(table, &mut errs);
            continue;
        }
        for (key, v) in table {
            if let Err(e) = set_value(&mut cfg, &format!("{section}.{key}"), v) {
                errs.push(e);
            }
        }
    }
    finish(cfg, errs)
}

fn finish(cfg: ScenarioConfig, mut errs: Vec<String>) -> Result<ScenarioConfig, ConfigError> {
    if let Err(v) = cfg.validate() {
        errs.extend(v.into_iter().map(|e| e.to_string()));
    }
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(errs))
    }
}

/// Apply `--set key=value` overrides, then re-validate.
pub fn apply_overrides<S: AsRef<str>>(
    mut cfg: ScenarioConfig,
    sets: &[S],
) -> Result<ScenarioConfig, ConfigError> {
    let mut errs = Vec::new();
    for s in sets {
        let s = s.as_ref();
        let Some((key, raw)) = s.split_once('=') else {
            errs.push(format!("override `{s}` is not of the form key=value"));
            continue;
        };
        let key = key.trim();
        let value = match format!("v = {}", raw.trim()).parse::<Table>() {
            Ok(mut t) => t.remove("v").expect("single key"),
            Err(_) => {
                errs.push(format!(
                    "override `{s}`: cannot parse value `{}`",
                    raw.trim()
                ));
                continue;
            }
        };
        if let Some(rest) = key.strip_prefix("sweep.") {
            errs.push(format!(
                "use --sweep to set the sweep section (got `sweep.{rest}`)"
            ));
            continue;
        }
        if let Err(e) = set_value(&mut cfg, key, &value) {
            errs.push(e);
        }
    }
    finish(cfg, errs)
}

/// Parse `--sweep key=from:to:steps`.
pub fn parse_sweep_arg(s: &str) -> Result<SweepSpec, ConfigError> {
    let bad = |why: &str| ConfigError::Invalid(vec![format!("sweep `{s}`: {why}")]);
    let (key, range) = s
        .split_once('=')
        .ok_or_else(|| bad("expected key=from:to:steps"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [from, to, steps] = parts[..] else {
        return Err(bad("expected key=from:to:steps"));
    };
    let from: f64 = from
        .trim()
        .parse()
        .map_err(|_| bad("`from` is not a number"))?;
    let to: f64 = to.trim().parse().map_err(|_| bad("`to` is not a number"))?;
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| bad("`steps` is not a non-negative integer"))?;
    sweep_spec(key.trim(), from, to, steps).map_err(|e| ConfigError::Invalid(vec![e]))
}

/// Set one swept value. Sample keys keep the power budget closed: sweeping
/// `sample.r` or `sample.t` holds `l` fixed and lets the other absorb the
/// change; sweeping `sample.l` holds `t` fixed.
pub fn apply_sweep_point(
    cfg: &ScenarioConfig,
    key: &str,
    value: f64,
) -> cvfb_core::Result<ScenarioConfig> {
    let mut c = cfg.clone();
    let s = cfg.sample;
    match key {
        "sample.r" => c.sample = ThreePortSample::with_fixed_loss(value, s.l)?,
        "sample.t" => c.sample = ThreePortSample::new(value, 1.0 - s.l - value, s.l)?,
        "sample.l" => c.sample = ThreePortSample::new(s.t, 1.0 - s.t - value, value)?,
        _ => {
            let slot = float_slot(&mut c, key).ok_or_else(|| {
                cvfb_core::Error::Contract(format!("`{key}` is not a sweepable key"))
            })?;
            *slot = value;
        }
    }
    Ok(c)
}

fn fmt_value(v: &Value) -> String {
    match v {
        // Debug formatting of f64 is the shortest exact round-trip form.
        Value::Float(f) => {
            let s = format!("{f:?}");
            if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN") {
                s
            } else {
                format!("{s}.0")
            }
        }
        other => other.to_string(),
    }
}

/// Canonical text form with every key present.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let mut current = "";
    for (path, _) in KEYS {
        let (section, key) = path.split_once('.').expect("dotted key");
        if section != current {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("[{section}]\n"));
            current = section;
        }
        out.push_str(&format!("{key} = {}\n", fmt_value(&get_value(cfg, path))));
    }
    if let Some(s) = &cfg.sweep {
        out.push_str(&format!(
            "\n[sweep]\nparameter = {}\nfrom = {}\nto = {}\nsteps = {}\n",
            Value::String(s.parameter.clone()),
            fmt_value(&Value::Float(s.from)),
            fmt_value(&Value::Float(s.to)),
            s.steps
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_has_a_slot() {
        let mut cfg = ScenarioConfig::default();
        for (k, kind) in KEYS {
            if matches!(kind, Kind::Float | Kind::Angle) {
                assert!(float_slot(&mut cfg, k).is_some(), "{k}");
            }
        }
    }

    #[test]
    fn deg_suffix_only_for_angles() {
        assert!(resolve("feedback.detuning_deg").is_some());
        assert!(resolve("sample.t_deg").is_none());
    }

    #[test]
    fn integral_floats_keep_a_point() {
        assert_eq!(fmt_value(&Value::Float(2e6)), "2000000.0");
        assert_eq!(fmt_value(&Value::Float(1e300)), "1e300");
    }
}
