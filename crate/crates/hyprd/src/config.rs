//! Run configuration, the `f`-spec mini-language and diff-stable report encoding.

use std::fmt;
use std::io;
use std::str::FromStr;

use serde::Serialize;

use crate::boundary::PSMeasure;
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::reps::FiniteFn;

/// Parameters shared by every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub k: usize,
    pub epsilon: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: f64,
    pub seed: u64,
    pub tol: f64,
    pub n_max: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub s_grid: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            k: 2,
            epsilon: 1.0,
            big_r: 1.0,
            r: 0.5,
            seed: 42,
            tol: 1e-9,
            n_max: 5,
            big_n: 7,
            s_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(2..=crate::group::MAX_RANK).contains(&self.k) {
            return bad(format!("k = {} outside 2..={}", self.k, crate::group::MAX_RANK));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!("epsilon = {} must be positive", self.epsilon));
        }
        if !(self.big_r.is_finite() && self.big_r > 0.0) {
            return bad(format!("R = {} must be positive", self.big_r));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return bad(format!("r = {} outside (0, 1)", self.r));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad(format!("tol = {} must be positive", self.tol));
        }
        if self.s_grid.is_empty() || self.s_grid.iter().any(|s| !s.is_finite()) {
            return bad("s grid must be a nonempty list of finite values".into());
        }
        Ok(())
    }

    pub fn model(&self) -> Result<GroupModel> {
        GroupModel::new(self.k)
    }

    pub fn measure(&self) -> Result<PSMeasure> {
        PSMeasure::new(self.model()?, self.epsilon)
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// Parse `a:b:step`, a comma-separated list, or a single value.
pub fn parse_s_grid(text: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(t.to_string()))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && a.is_finite() && b.is_finite() && a <= b) {
                return Err(Error::Parse(text.to_string()));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| a + i as f64 * step).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(Error::Parse(text.to_string())),
    }
}

/// `delta:<word>` | `sphere:<n>` | `uniform-sphere:<n>` | `phi:<s>:<n>`.
#[derive(Debug, Clone, PartialEq)]
pub enum FSpec {
    Delta(String),
    Sphere(usize),
    UniformSphere(usize),
    Phi(f64, usize),
}

impl FromStr for FSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = || Error::Parse(text.to_string());
        let int = |t: &str| t.parse::<usize>().map_err(|_| err());
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            ["delta", w] => Ok(FSpec::Delta(w.to_string())),
            ["sphere", n] => Ok(FSpec::Sphere(int(n)?)),
            ["uniform-sphere", n] => Ok(FSpec::UniformSphere(int(n)?)),
            ["phi", s, n] => {
                let s = s.parse::<f64>().map_err(|_| err())?;
                if !s.is_finite() {
                    return Err(err());
                }
                Ok(FSpec::Phi(s, int(n)?))
            }
            _ => Err(err()),
        }
    }
}

impl fmt::Display for FSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSpec::Delta(w) => write!(f, "delta:{w}"),
            FSpec::Sphere(n) => write!(f, "sphere:{n}"),
            FSpec::UniformSphere(n) => write!(f, "uniform-sphere:{n}"),
            FSpec::Phi(s, n) => write!(f, "phi:{s}:{n}"),
        }
    }
}

impl FSpec {
    pub fn build(&self, model: &GroupModel) -> Result<FiniteFn> {
        Ok(match self {
            FSpec::Delta(w) => FiniteFn::delta(model.parse(w)?),
            FSpec::Sphere(n) => FiniteFn::sphere(model, *n),
            FSpec::UniformSphere(n) => FiniteFn::uniform_sphere(model, *n),
            FSpec::Phi(s, n) => FiniteFn::spherical(model, *s, *n),
        })
    }
}

/// Writes every float with 17 significant digits.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with sorted object keys and fixed float formatting. Non-finite floats become `null`.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report types serialize");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser).expect("writing to a Vec");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// A CSV report with a header row and a trailing `# config:` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, config: &Config) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let fields: Vec<String> = line.iter().map(|f| quote(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out.push_str("# config: ");
        out.push_str(&config.to_json());
        out.push('\n');
        out
    }
}

/// Shortest round-trip decimal, `nan`/`inf` spelled out.
pub fn num(x: f64) -> String {
    format!("{x}")
}
