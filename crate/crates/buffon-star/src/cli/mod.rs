//! Library-side implementation of the command line: argument types,
//! run manifests, table building and CSV/JSON serialization. The binary
//! in `main.rs` is a thin clap wrapper over `commands` and `verify`.

mod commands;
mod table;
pub mod verify;

pub use commands::{
    cmd_exact, cmd_limit, cmd_simulate, cmd_sweep, CommandOutput, ExactArgs, LimitArgs,
    SimulateArgs, SweepArgs,
};
pub use table::{Cell, Table};

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// An angle argument: keeps the literal the user typed next to the
/// resolved radian value. Accepts raw radians ("0.314") or exact
/// pi-literals ("pi", "pi/10", "3pi/10", "2*pi/5", "0.5pi").
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    pub raw: String,
    pub radians: f64,
}

impl Angle {
    pub fn from_radians(radians: f64) -> Self {
        Self {
            raw: format!("{radians}"),
            radians,
        }
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let radians = parse_angle(s)?;
        Ok(Self {
            raw: s.to_string(),
            radians,
        })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// Parses an angle literal; pi-multiples evaluate as `coef * pi / div`
/// with no intermediate decimal rounding of pi itself.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if t.is_empty() {
        return Err("empty angle".into());
    }
    match t.find("pi") {
        None => t
            .parse::<f64>()
            .map_err(|e| format!("invalid angle '{s}': {e}")),
        Some(idx) => {
            let coef_part = t[..idx].trim().trim_end_matches('*').trim();
            let coef = if coef_part.is_empty() {
                1.0
            } else {
                coef_part
                    .parse::<f64>()
                    .map_err(|e| format!("invalid angle '{s}': bad coefficient: {e}"))?
            };
            let rest = t[idx + 2..].trim();
            let div = if rest.is_empty() {
                1.0
            } else if let Some(d) = rest.strip_prefix('/') {
                let d: f64 = d
                    .trim()
                    .parse()
                    .map_err(|e| format!("invalid angle '{s}': bad divisor: {e}"))?;
                if d == 0.0 {
                    return Err(format!("invalid angle '{s}': divisor is zero"));
                }
                d
            } else {
                return Err(format!("invalid angle '{s}': unexpected trailing '{rest}'"));
            };
            Ok(coef * PI / div)
        }
    }
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Everything needed to reproduce a run: command name, the full resolved
/// parameter set, seed, tool version and a timestamp. The timestamp is
/// the only wall-clock datum; setting `SOURCE_DATE_EPOCH` pins it for
/// byte-identical reruns.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            seed,
            parameters: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

fn timestamp() -> String {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(secs) = epoch.trim().parse::<i64>() {
            if let Some(dt) = chrono::DateTime::from_timestamp(secs, 0) {
                return dt.to_rfc3339();
            }
        }
    }
    chrono::Utc::now().to_rfc3339()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parses_pi_literals_exactly() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/10").unwrap(), PI / 10.0);
        assert_eq!(parse_angle("3pi/10").unwrap(), 3.0 * PI / 10.0);
        assert_eq!(parse_angle("2*pi/5").unwrap(), 2.0 * PI / 5.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle(" PI/2 ").unwrap(), PI / 2.0);
        assert_abs_diff_eq!(parse_angle("0.31415").unwrap(), 0.31415, epsilon = 0.0);
    }

    #[test]
    fn rejects_malformed_angles() {
        assert!(parse_angle("").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("two pi").is_err());
    }

    #[test]
    fn manifest_honors_source_date_epoch() {
        std::env::set_var("SOURCE_DATE_EPOCH", "0");
        let m = RunManifest::new("exact", None);
        assert_eq!(m.timestamp, "1970-01-01T00:00:00+00:00");
        std::env::remove_var("SOURCE_DATE_EPOCH");
    }
}
