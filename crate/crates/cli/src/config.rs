//! Run settings shared by command-line flags and the JSON config document.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

/// A list of reals written as `a..b` (unit step), `a..b:step` or `a,b,c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NumList(pub Vec<f64>);

impl FromStr for NumList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_list(s).map(NumList)
    }
}

impl fmt::Display for NumList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl<'de> Deserialize<'de> for NumList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            One(f64),
            Many(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::One(v) => Ok(NumList(vec![v])),
            Raw::Many(v) => Ok(NumList(v)),
        }
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("`{}` is not finite", s.trim()));
    }
    Ok(v)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty list".into());
    }
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (hi, number(step)?),
            None => (rest, 1.0),
        };
        let (lo, hi) = (number(lo)?, number(hi)?);
        if step <= 0.0 {
            return Err(format!("range step must be positive, got {step}"));
        }
        if hi < lo {
            return Err(format!("empty range {lo}..{hi}"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        if count > 100_000 {
            return Err(format!("range {s} has too many points"));
        }
        return Ok((0..=count).map(|i| lo + step * i as f64).collect());
    }
    s.split(',').map(number).collect()
}

/// Every optional setting. Flags override the config document field by field.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    /// Group family: so, su or sp
    #[arg(long)]
    pub group: Option<String>,
    /// Size n of G = SO₀(n,1), SU(n,1), Sp(n,1)
    #[arg(long)]
    pub n: Option<usize>,
    /// Distances t along a(t)·0
    #[arg(long)]
    pub t: Option<NumList>,
    /// Witness heights k
    #[arg(long)]
    pub k: Option<NumList>,
    /// Exponents s in 𝒩^(s−r)
    #[arg(long)]
    pub s: Option<NumList>,
    /// Grid half widths, one value (isotropic) or one per coordinate
    #[arg(long = "grid-L")]
    #[serde(rename = "grid_L")]
    pub grid_l: Option<NumList>,
    /// Grid points per axis
    #[arg(long)]
    pub grid_m: Option<usize>,
    /// growth: visual or busemann
    #[arg(long)]
    pub experiment: Option<String>,
    /// growth busemann: spectral or chart
    #[arg(long)]
    pub backend: Option<String>,
    /// Annulus or ball cutoffs ε, decreasing
    #[arg(long)]
    pub cutoffs: Option<NumList>,
    /// Random instances, test functions, bumps or sphere data, per experiment
    #[arg(long)]
    pub samples: Option<usize>,
    /// uniform-bounded: random k a(t) k′ per t
    #[arg(long)]
    pub k_samples: Option<usize>,
    /// lp-isometry: real λ in (−r, r)
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// witness: log of the cutoff dilation
    #[arg(long)]
    pub log_radius: Option<f64>,
    /// cowling-scan: kernel exponents ξ
    #[arg(long)]
    pub xi: Option<NumList>,
    /// cowling-scan: grid sizes
    #[arg(long)]
    pub m_list: Option<NumList>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for CSV and JSON reports
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for cached eigendecompositions (overrides CACHE_DIR)
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: &Settings) -> Settings {
        overlay!(
            self, top, group, n, t, k, s, grid_l, grid_m, experiment, backend, cutoffs, samples,
            k_samples, lambda, log_radius, xi, m_list, seed, out, cache
        );
        self
    }

    pub fn from_json(text: &str, origin: &str) -> anyhow::Result<Settings> {
        serde_json::from_str(text).with_context(|| format!("invalid config {origin}"))
    }

    pub fn load(path: &std::path::Path) -> anyhow::Result<Settings> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Settings::from_json(&text, &path.display().to_string())
    }
}

/// `m_list` entries as grid sizes.
pub fn sizes(list: &NumList) -> anyhow::Result<Vec<usize>> {
    list.0
        .iter()
        .map(|v| {
            if v.fract() != 0.0 || *v < 3.0 {
                bail!("grid sizes must be integers ≥ 3, got {v}");
            }
            Ok(*v as usize)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_list("1..4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_list("0..1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_list("0.5, 2,3").unwrap(), vec![0.5, 2.0, 3.0]);
        assert_eq!(parse_list("0..0.3:0.1").unwrap().len(), 4);
        assert!(parse_list("3..1").is_err());
        assert!(parse_list("1..2:0").is_err());
        assert!(parse_list("a,b").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file =
            Settings::from_json(r#"{"group": "su", "n": 2, "t": "1..3", "seed": 4}"#, "test")
                .unwrap();
        let flags = Settings {
            t: Some(NumList(vec![5.0])),
            ..Default::default()
        };
        let merged = file.overlay(&flags);
        assert_eq!(merged.group.as_deref(), Some("su"));
        assert_eq!(merged.t, Some(NumList(vec![5.0])));
        assert_eq!(merged.seed, Some(4));
    }

    #[test]
    fn list_forms_in_json() {
        let a = Settings::from_json(r#"{"t": [1, 2.5]}"#, "test").unwrap();
        assert_eq!(a.t, Some(NumList(vec![1.0, 2.5])));
        let b = Settings::from_json(r#"{"t": 3}"#, "test").unwrap();
        assert_eq!(b.t, Some(NumList(vec![3.0])));
    }

    #[test]
    fn unknown_field_is_named() {
        let err = Settings::from_json("{\n  \"grp\": \"so\"\n}", "test").unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("grp") && msg.contains("line 2"), "{msg}");
    }
}
