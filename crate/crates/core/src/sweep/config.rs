//! Sweep configuration, read from a single JSON document.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfi_engine::GeneratorTag;
use crate::spin_algebra::Spin;

const RANGE_SLACK: f64 = 1e-12;

/// Parse an angle such as `0.3`, `pi`, `-pi/2`, `3pi/4` or `2*pi/3`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || Error::Parse(format!("cannot read angle '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t.as_str(), None),
    };
    let numerator = match num.find("pi") {
        Some(pos) => {
            if pos + 2 != num.len() {
                return Err(bad());
            }
            let coef = num[..pos].trim_end_matches('*');
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = match den {
        Some(d) => {
            let d = d.parse::<f64>().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            numerator / d
        }
        None => numerator,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// An angle in radians, written in JSON as a number or an expression string.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "f64")]
pub struct Angle(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<AngleRepr> for Angle {
    type Error = Error;
    fn try_from(r: AngleRepr) -> Result<Self> {
        match r {
            AngleRepr::Number(v) => Ok(Angle(v)),
            AngleRepr::Text(s) => Ok(Angle(parse_angle(&s)?)),
        }
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_angle(s).map(Angle)
    }
}

/// `lo:hi:steps`, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AngleRange {
    pub fn values(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + span * i as f64 / (self.steps - 1) as f64 })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!("{name}: steps must be at least 2")));
        }
        for v in [self.lo, self.hi] {
            if !(-RANGE_SLACK..=PI + RANGE_SLACK).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name}: {v} is outside [0, pi]")));
            }
        }
        if self.lo > self.hi {
            return Err(Error::InvalidConfig(format!("{name}: lo > hi")));
        }
        Ok(())
    }
}

/// Second polar angle: a grid axis, a fixed value, or tied to the first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ThetaSpec {
    Range(AngleRange),
    Fixed(f64),
    Diagonal,
}

impl FromStr for ThetaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("diag") || t.eq_ignore_ascii_case("diagonal") {
            return Ok(ThetaSpec::Diagonal);
        }
        if let Some(v) = t.strip_prefix("fixed:") {
            return Ok(ThetaSpec::Fixed(parse_angle(v)?));
        }
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected lo:hi:steps, fixed:v or diag, got '{s}'")));
        }
        let steps = parts[2].trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad step count in '{s}'")))?;
        Ok(ThetaSpec::Range(AngleRange { lo: parse_angle(parts[0])?, hi: parse_angle(parts[1])?, steps }))
    }
}

impl TryFrom<String> for ThetaSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Range(r) => write!(f, "{}:{}:{}", r.lo, r.hi, r.steps),
            ThetaSpec::Fixed(v) => write!(f, "fixed:{v}"),
            ThetaSpec::Diagonal => f.write_str("diag"),
        }
    }
}

impl From<ThetaSpec> for String {
    fn from(t: ThetaSpec) -> String {
        t.to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Numeric,
    Analytic,
    Both,
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "numeric" => Ok(Engine::Numeric),
            "analytic" => Ok(Engine::Analytic),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Parse(format!("unknown engine '{s}' (expected numeric, analytic or both)"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Numeric => "numeric",
            Engine::Analytic => "analytic",
            Engine::Both => "both",
        })
    }
}

fn default_cap() -> f64 {
    1.0
}

fn default_n() -> u64 {
    1
}

fn zero() -> Angle {
    Angle(0.0)
}

fn default_theta() -> ThetaSpec {
    ThetaSpec::Range(AngleRange { lo: 0.0, hi: PI, steps: 101 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Spins as `2s`.
    pub spins: Vec<u32>,
    pub generator: GeneratorTag,
    #[serde(default = "zero")]
    pub phi1: Angle,
    #[serde(default = "zero")]
    pub phi2: Angle,
    #[serde(default = "default_theta")]
    pub theta1: ThetaSpec,
    #[serde(default = "default_theta")]
    pub theta2: ThetaSpec,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default = "default_n")]
    pub n: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub heatmap: Option<PathBuf>,
    #[serde(default = "default_cap")]
    pub cap: f64,
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn new(spins: Vec<u32>, generator: GeneratorTag) -> Self {
        Self {
            spins,
            generator,
            phi1: zero(),
            phi2: zero(),
            theta1: default_theta(),
            theta2: default_theta(),
            engine: Engine::Numeric,
            n: 1,
            out: None,
            heatmap: None,
            cap: default_cap(),
            jobs: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn spin_list(&self) -> Result<Vec<Spin>> {
        if self.spins.is_empty() {
            return Err(Error::InvalidConfig("at least one spin is required".into()));
        }
        self.spins.iter().map(|&t| Spin::new(t)).collect()
    }

    pub fn theta1_range(&self) -> Result<AngleRange> {
        match self.theta1 {
            ThetaSpec::Range(r) => Ok(r),
            _ => Err(Error::InvalidConfig("theta1 must be a lo:hi:steps range".into())),
        }
    }

    fn validate_common(&self) -> Result<()> {
        self.spin_list()?;
        self.theta1_range()?.validate("theta1")?;
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if !(self.cap.is_finite() && self.cap > 0.0) {
            return Err(Error::InvalidConfig(format!("cap must be positive, got {}", self.cap)));
        }
        if !self.phi1.0.is_finite() || !self.phi2.0.is_finite() {
            return Err(Error::InvalidConfig("phi1/phi2 must be finite".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidConfig("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Checks for a two-dimensional sweep.
    pub fn validate_2d(&self) -> Result<AngleRange> {
        self.validate_common()?;
        match self.theta2 {
            ThetaSpec::Range(r) => {
                r.validate("theta2")?;
                Ok(r)
            }
            _ => Err(Error::InvalidConfig("a 2-D sweep needs theta2 as a lo:hi:steps range".into())),
        }
    }

    /// Checks for a one-dimensional sweep.
    pub fn validate_1d(&self) -> Result<()> {
        self.validate_common()?;
        match self.theta2 {
            ThetaSpec::Fixed(v) if (-RANGE_SLACK..=PI + RANGE_SLACK).contains(&v) => Ok(()),
            ThetaSpec::Fixed(v) => Err(Error::InvalidConfig(format!("theta2: {v} is outside [0, pi]"))),
            ThetaSpec::Diagonal => Ok(()),
            ThetaSpec::Range(_) => {
                Err(Error::InvalidConfig("a 1-D sweep needs theta2 as fixed:v or diag".into()))
            }
        }
    }
}
