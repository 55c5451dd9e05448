//! Structured experiment output: one CSV row per parameter point plus a JSON
//! summary of criteria, fits and timings.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::groups::GroupParams;

/// A pass/fail check with the measured value and the threshold it was held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Criterion {
    pub fn new(
        name: &str,
        passed: bool,
        value: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Criterion {
            name: name.into(),
            passed,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Criterion::new(name, value <= threshold, value, threshold, detail)
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Criterion::new(name, value >= threshold, value, threshold, detail)
    }
}

/// Least-squares fit of a measured column against a candidate growth law.
/// Informational only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendFit {
    pub law: String,
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
    pub note: String,
}

impl TrendFit {
    /// Fit `y ≈ slope·law(x) + intercept` with Pearson correlation.
    pub fn fit(law: &str, xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len().min(ys.len()) as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let correlation = if sxx > 0.0 && syy > 0.0 {
            sxy / (sxx * syy).sqrt()
        } else {
            0.0
        };
        TrendFit {
            law: law.into(),
            slope,
            intercept: my - slope * mx,
            correlation,
            note: "derived expectation, not a pass/fail criterion".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    pub experiment: String,
    pub group: String,
    #[serde(skip)]
    pub params: GroupParams,
    pub n: usize,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub criteria: Vec<Criterion>,
    pub fits: Vec<TrendFit>,
    pub notes: Vec<String>,
    pub runtime_seconds: f64,
}

impl CocycleReport {
    pub fn new(experiment: &str, params: &GroupParams, columns: &[&str]) -> Self {
        CocycleReport {
            experiment: experiment.into(),
            group: params.label(),
            params: *params,
            n: params.n,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            criteria: Vec::new(),
            fits: Vec::new(),
            notes: Vec::new(),
            runtime_seconds: 0.0,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn check(&mut self, c: Criterion) {
        self.criteria.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// All criteria hold.
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// CSV text: header row, then every value as `{:.16e}`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv()?.as_bytes())?;
        Ok(())
    }

    /// JSON summary, merged with an optional echo of the run configuration.
    pub fn to_json(&self, config: Option<&serde_json::Value>) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        v["passed"] = serde_json::Value::Bool(self.passed());
        if let Some(c) = config {
            v["config"] = c.clone();
        }
        Ok(v)
    }

    pub fn write_json(&self, path: &Path, config: Option<&serde_json::Value>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json(config)?)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// One line per criterion.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} on {}: {}\n",
            self.experiment,
            self.group,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for c in &self.criteria {
            s += &format!(
                "  [{}] {}: value {:.6e}, threshold {:.6e}  {}\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold,
                c.detail
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut r = CocycleReport::new("demo", &GroupParams::so(2), &["t", "value"]);
        r.push_row(vec![0.1, 1.0 / 3.0]);
        let text = r.to_csv().unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,value");
        assert!(text.contains("3.3333333333333331e-1"));
        let back: f64 = text
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn fit_recovers_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = TrendFit::fit("t", &xs, &ys);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.correlation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn passed_needs_every_criterion() {
        let mut r = CocycleReport::new("demo", &GroupParams::so(2), &["t"]);
        r.check(Criterion::at_most("a", 1.0, 2.0, ""));
        assert!(r.passed());
        r.check(Criterion::at_least("b", 1.0, 2.0, ""));
        assert!(!r.passed());
        assert!(r.to_json(None).unwrap()["passed"] == serde_json::Value::Bool(false));
    }
}
