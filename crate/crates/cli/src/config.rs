//! Run configuration: a flat `key = value` file with `#` comments, plus
//! command-line overrides.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use dwief::poly::parse_code_list;
use dwief::{DrinfeldModule, Error, FqField, Poly, Result};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?} (expected jsonl or csv)"))),
        }
    }
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u32,
    pub e: u32,
    /// Ascending F_p coefficients of the field modulus; the default modulus
    /// is used when absent.
    pub field_modulus: Option<Vec<u32>>,
    /// Code lists of a_1, ..., a_r.
    pub phi: Vec<Vec<u32>>,
    pub base: Vec<u32>,
    pub deg_min: u32,
    pub deg_max: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    /// The Carlitz module over F_3 in base 1, degrees 1 to 3.
    fn default() -> Self {
        RunConfig {
            p: 3,
            e: 1,
            field_modulus: None,
            phi: vec![vec![1]],
            base: vec![1],
            deg_min: 1,
            deg_max: 3,
            seed: 0,
            out: None,
            format: Format::Jsonl,
        }
    }
}

/// Splits `[[..],[..]]` into its inner code lists.
fn parse_list_of_lists(text: &str) -> Result<Vec<Vec<u32>>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [[...],...], got {t:?}")))?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(Error::Parse(format!("expected '[' at {rest:?}")));
        }
        let close = rest.find(']').ok_or_else(|| Error::Parse("unclosed '['".into()))?;
        out.push(parse_code_list(&rest[..=close])?);
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::Parse("trailing ','".into()));
            }
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("expected ',' at {rest:?}")));
        }
    }
    Ok(out)
}

fn field_error(line: usize, key: &str, err: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: field `{key}`: {err}"))
}

impl RunConfig {
    /// Parses a config file body. Unset keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {line}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key.to_string()) {
                return Err(field_error(line, key, "duplicate key"));
            }
            seen.push(key.to_string());
            let int = |v: &str| v.parse::<u64>().map_err(|e| field_error(line, key, e));
            match key {
                "p" => cfg.p = int(value)? as u32,
                "e" => cfg.e = int(value)? as u32,
                "field_modulus" => {
                    cfg.field_modulus = Some(parse_code_list(value).map_err(|e| field_error(line, key, e))?)
                }
                "phi" => cfg.phi = parse_list_of_lists(value).map_err(|e| field_error(line, key, e))?,
                "base" => cfg.base = parse_code_list(value).map_err(|e| field_error(line, key, e))?,
                "deg_min" => cfg.deg_min = int(value)? as u32,
                "deg_max" => cfg.deg_max = int(value)? as u32,
                "seed" => cfg.seed = int(value)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = value.parse().map_err(|e| field_error(line, key, e))?,
                _ => return Err(Error::Parse(format!("line {line}: unknown key `{key}`"))),
            }
        }
        cfg.field()?;
        cfg.module()?;
        cfg.base_poly()?;
        Ok(cfg)
    }

    pub fn field(&self) -> Result<FqField> {
        match &self.field_modulus {
            Some(m) => FqField::with_modulus(self.p, m.clone()),
            None => FqField::new(self.p, self.e),
        }
        .and_then(|f| {
            if f.e() != self.e {
                Err(Error::UnsupportedField(format!(
                    "field_modulus has degree {} but e = {}",
                    f.e(),
                    self.e
                )))
            } else {
                Ok(f)
            }
        })
    }

    pub fn module(&self) -> Result<DrinfeldModule> {
        let fq = self.field()?;
        let coeffs = self.phi.iter().map(|c| Poly::from_codes(c, &fq)).collect::<Result<Vec<_>>>()?;
        DrinfeldModule::new(fq, coeffs)
    }

    pub fn base_poly(&self) -> Result<Poly> {
        Poly::from_codes(&self.base, &self.field()?)
    }

    /// Every setting that influences record contents, in a fixed layout.
    pub fn canonical(&self) -> String {
        let fq = self.field().expect("validated");
        let mut s = String::new();
        let _ = writeln!(s, "p={}", self.p);
        let _ = writeln!(s, "e={}", self.e);
        let _ = writeln!(s, "field_modulus={:?}", fq.modulus());
        let _ = writeln!(s, "phi={:?}", self.phi);
        let _ = writeln!(s, "base={:?}", self.base);
        let _ = writeln!(s, "deg_min={}", self.deg_min);
        let _ = writeln!(s, "deg_max={}", self.deg_max);
        let _ = writeln!(s, "seed={}", self.seed);
        s
    }

    /// First 16 hex digits of SHA-256 over [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::parse(
            "# rank two over F_9\np = 3\ne = 2\nfield_modulus = [1,0,1]\nphi = [[0,1], [1]]\nbase = [1,1]\n\
             deg_min = 2\ndeg_max = 3 # inline comment\nseed = 42\nout = x.csv\nformat = csv\n",
        )
        .unwrap();
        assert_eq!(cfg.field().unwrap().q(), 9);
        assert_eq!(cfg.phi, vec![vec![0, 1], vec![1]]);
        assert_eq!(cfg.module().unwrap().rank(), 2);
        assert_eq!((cfg.deg_min, cfg.deg_max, cfg.seed), (2, 3, 42));
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn defaults_are_carlitz_over_f3() {
        let cfg = RunConfig::parse("").unwrap();
        assert!(cfg.module().unwrap().is_carlitz());
        assert_eq!(cfg.field().unwrap().q(), 3);
    }

    #[test]
    fn errors_name_line_and_field() {
        let err = RunConfig::parse("p = 3\nphi = [[1],\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("phi"), "{err}");
        let err = RunConfig::parse("p = x").unwrap_err().to_string();
        assert!(err.contains("line 1") && err.contains("`p`"), "{err}");
        let err = RunConfig::parse("colour = 3").unwrap_err().to_string();
        assert!(err.contains("unknown key"), "{err}");
        assert!(RunConfig::parse("phi = [[1],[0]]").is_err());
        assert!(RunConfig::parse("p = 4").is_err());
        assert!(RunConfig::parse("p = 3\np = 5").is_err());
    }

    #[test]
    fn hash_tracks_content_only() {
        let a = RunConfig::parse("seed = 1\nout = a.jsonl").unwrap();
        let b = RunConfig::parse("seed = 1\nout = b.jsonl").unwrap();
        let c = RunConfig::parse("seed = 2").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
