//! JSON run configuration: field parameters plus command parameters.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::forms::MetricForm;
use crate::tolerances::MODEL_TOL;

/// Output format for sample and trajectory commands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Config(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

/// The file as written. Every key except the field parameters is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub n: usize,
    pub gram: Vec<Vec<f64>>,
    pub w: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    pub c: f64,
    pub u: Vec<f64>,
    /// Zero to classify; defaults to the box center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xdot: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Optional initial `v`, `∇_ẋ v`, `phi`, `phi'`; checked against the field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nabla_v0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phidot0: Option<f64>,
}

/// Flag overrides; flags win over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub radius: Option<f64>,
    pub format: Option<OutputFormat>,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub params: ConformalFieldParams,
    pub z: DVector<f64>,
    pub center: DVector<f64>,
    pub radius: f64,
    pub seeds: usize,
    pub seed: u64,
    pub tol: f64,
    pub probes: usize,
    pub format: OutputFormat,
}

pub const DEFAULT_SEEDS: usize = 600;
pub const DEFAULT_PROBES: usize = 1000;

fn vector(what: &'static str, v: &[f64], n: usize) -> Result<DVector<f64>> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            what,
            expected: n,
            got: v.len(),
        });
    }
    Ok(DVector::from_column_slice(v))
}

fn matrix(what: &'static str, rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            what,
            expected: n,
            got: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            what,
            expected: n,
            got: r.len(),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn positive(what: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{what} must be positive and finite, got {x}")))
    }
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Field parameters only.
    pub fn params(&self) -> Result<ConformalFieldParams> {
        let n = self.n;
        let metric = MetricForm::new(matrix("gram", &self.gram, n)?)?;
        ConformalFieldParams::new(
            metric,
            vector("w", &self.w, n)?,
            matrix("S", &self.s, n)?,
            self.c,
            vector("u", &self.u, n)?,
        )
    }

    /// Config echo for a field given in code.
    pub fn from_params(p: &ConformalFieldParams) -> Self {
        let n = p.dim();
        let rows = |m: &DMatrix<f64>| (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
        Self {
            n,
            gram: rows(p.metric().gram()),
            w: p.w().iter().copied().collect(),
            s: rows(p.skew_generator()),
            c: p.c(),
            u: p.u().iter().copied().collect(),
            z: None,
            center: None,
            radius: None,
            seeds: None,
            seed: None,
            tol: None,
            probes: None,
            format: None,
            x0: None,
            xdot: None,
            t0: None,
            t1: None,
            steps: None,
            v0: None,
            nabla_v0: None,
            phi0: None,
            phidot0: None,
        }
    }

    pub fn validate(mut self, overrides: &Overrides) -> Result<RunConfig> {
        if let Some(s) = overrides.seed {
            self.seed = Some(s);
        }
        if let Some(t) = overrides.tol {
            self.tol = Some(t);
        }
        if let Some(r) = overrides.radius {
            self.radius = Some(r);
        }
        if let Some(f) = overrides.format {
            self.format = Some(f);
        }
        let params = self.params()?;
        let n = self.n;
        let center = match &self.center {
            Some(c) => vector("center", c, n)?,
            None => match &self.z {
                Some(z) => vector("z", z, n)?,
                None => DVector::zeros(n),
            },
        };
        let z = match &self.z {
            Some(z) => vector("z", z, n)?,
            None => center.clone(),
        };
        for (what, v) in [("x0", &self.x0), ("xdot", &self.xdot), ("v0", &self.v0), ("nabla_v0", &self.nabla_v0)] {
            if let Some(v) = v {
                vector(what, v, n)?;
            }
        }
        let radius = positive("radius", self.radius.unwrap_or(1.0))?;
        let tol = positive("tol", self.tol.unwrap_or(MODEL_TOL))?;
        let seeds = self.seeds.unwrap_or(DEFAULT_SEEDS);
        let probes = self.probes.unwrap_or(DEFAULT_PROBES);
        if seeds == 0 || probes == 0 {
            return Err(Error::Config("seeds and probes must be at least 1".into()));
        }
        if let Some(steps) = self.steps {
            if steps == 0 {
                return Err(Error::Config("steps must be at least 1".into()));
            }
        }
        Ok(RunConfig {
            params,
            z,
            center,
            radius,
            seeds,
            seed: self.seed.unwrap_or(0),
            tol,
            probes,
            format: self.format.unwrap_or_default(),
            raw: self,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DILATION: &str = r#"{"n":3,"gram":[[-1,0,0],[0,1,0],[0,0,1]],"w":[0,0,0],
        "S":[[0,0,0],[0,0,0],[0,0,0]],"c":1,"u":[0,0,0]}"#;

    #[test]
    fn parses_and_applies_defaults() {
        let cfg = RawConfig::from_json(DILATION).unwrap().validate(&Overrides::default()).unwrap();
        assert_eq!(cfg.params.c(), 1.0);
        assert_eq!(cfg.radius, 1.0);
        assert_eq!(cfg.tol, MODEL_TOL);
        assert_eq!(cfg.z, DVector::zeros(3));
    }

    #[test]
    fn flags_win_over_file() {
        let text = DILATION.replace("\"c\":1", "\"c\":1,\"seed\":5,\"radius\":2");
        let o = Overrides {
            seed: Some(9),
            radius: Some(0.5),
            ..Default::default()
        };
        let cfg = RawConfig::from_json(&text).unwrap().validate(&o).unwrap();
        assert_eq!((cfg.seed, cfg.radius), (9, 0.5));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let unknown = DILATION.replace("\"c\":1", "\"c\":1,\"bogus\":0");
        assert!(matches!(RawConfig::from_json(&unknown), Err(Error::Config(_))));
        let asym = DILATION.replace("[[-1,0,0],[0,1,0]", "[[-1,1,0],[0,1,0]");
        assert!(matches!(
            RawConfig::from_json(&asym).unwrap().validate(&Overrides::default()),
            Err(Error::AsymmetricGram { .. })
        ));
        let short = DILATION.replace("\"w\":[0,0,0]", "\"w\":[0,0]");
        assert!(RawConfig::from_json(&short).unwrap().validate(&Overrides::default()).is_err());
        let neg = DILATION.replace("\"c\":1", "\"c\":1,\"tol\":-1");
        assert!(RawConfig::from_json(&neg).unwrap().validate(&Overrides::default()).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let raw = RawConfig::from_json(DILATION).unwrap();
        let p = raw.params().unwrap();
        assert_eq!(RawConfig::from_params(&p), raw);
    }
}
