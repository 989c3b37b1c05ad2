//! File formats and output helpers.
//!
//! Instance files are flat `key = value` text. Arrays are whitespace- or
//! comma-separated and `v` accepts the literal `inf`:
//!
//! ```text
//! k = 3
//! t = 10000
//! mu_on = 1 0 0
//! mu_off = 0.9 0.1 0.1
//! t_s = 1000 1000 1000
//! v = 0.1 0.1 inf
//! ```
//!
//! Optional keys: `noise = gaussian | bernoulli` and, for `bernoulli`,
//! `scale = …` with one positive scale per arm.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ArmPair, BiasBound, MabInstance, Noise};

/// An instance together with the bias bound handed to the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: MabInstance,
    pub bias: BiasBound,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn split_values(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
}

/// Parse a real, accepting `inf` / `+inf` / `-inf`.
pub fn parse_real(tok: &str) -> Option<f64> {
    match tok {
        "inf" | "+inf" | "Inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-Inf" => Some(f64::NEG_INFINITY),
        _ => tok.parse::<f64>().ok().filter(|x| !x.is_nan()),
    }
}

impl InstanceFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_err(path, no + 1, "expected `key = value`"));
            };
            let key = key.trim().to_ascii_lowercase();
            if fields.insert(key.clone(), (no + 1, value.trim().to_string())).is_some() {
                return Err(parse_err(path, no + 1, format!("duplicate key `{key}`")));
            }
        }
        let get = |key: &str| -> Result<&(usize, String)> {
            fields
                .get(key)
                .ok_or_else(|| parse_err(path, 0, format!("missing key `{key}`")))
        };
        let scalar = |key: &str| -> Result<u64> {
            let (line, v) = get(key)?;
            let x: f64 = v
                .parse()
                .map_err(|_| parse_err(path, *line, format!("`{key}` must be a positive integer")))?;
            if x < 1.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
                return Err(parse_err(path, *line, format!("`{key}` must be a positive integer")));
            }
            Ok(x as u64)
        };
        let reals = |key: &str| -> Result<Vec<f64>> {
            let (line, v) = get(key)?;
            split_values(v)
                .map(|tok| {
                    parse_real(tok)
                        .ok_or_else(|| parse_err(path, *line, format!("bad number `{tok}` in `{key}`")))
                })
                .collect()
        };
        let counts = |key: &str| -> Result<Vec<u64>> {
            let (line, v) = get(key)?;
            split_values(v)
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| parse_err(path, *line, format!("bad count `{tok}` in `{key}`")))
                })
                .collect()
        };

        let k = scalar("k")? as usize;
        let t = scalar("t")?;
        let mu_on = reals("mu_on")?;
        let mu_off = reals("mu_off")?;
        let t_s = counts("t_s")?;
        let v = reals("v")?;
        for (key, len) in [
            ("mu_on", mu_on.len()),
            ("mu_off", mu_off.len()),
            ("t_s", t_s.len()),
            ("v", v.len()),
        ] {
            if len != k {
                let line = fields[key].0;
                return Err(parse_err(path, line, format!("`{key}` has {len} entries, k = {k}")));
            }
        }
        let noise = match fields.get("noise").map(|(l, s)| (*l, s.as_str())) {
            None | Some((_, "gaussian")) => Noise::Gaussian,
            Some((_, "bernoulli")) => Noise::ScaledBernoulli {
                scales: reals("scale")?,
            },
            Some((line, other)) => {
                return Err(parse_err(path, line, format!("unknown noise `{other}`")))
            }
        };
        let arms = mu_on
            .iter()
            .zip(&mu_off)
            .map(|(&on, &off)| ArmPair::new(on, off))
            .collect();
        let wrap = |e: Error| parse_err(path, 0, e.to_string());
        let instance = MabInstance::with_noise(arms, t_s, t, noise).map_err(wrap)?;
        let bias = BiasBound::new(v).map_err(wrap)?;
        Ok(InstanceFile { instance, bias })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Render in the key-value format; values round-trip exactly.
    pub fn render(&self) -> String {
        let inst = &self.instance;
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");
        let real = |x: f64| {
            if x == f64::INFINITY {
                "inf".to_string()
            } else {
                format!("{x:?}")
            }
        };
        let mut s = String::new();
        let _ = writeln!(s, "k = {}", inst.k());
        let _ = writeln!(s, "t = {}", inst.horizon());
        let _ = writeln!(s, "mu_on = {}", join(&mut inst.arms().iter().map(|p| real(p.mu_on))));
        let _ = writeln!(s, "mu_off = {}", join(&mut inst.arms().iter().map(|p| real(p.mu_off))));
        let _ = writeln!(s, "t_s = {}", join(&mut inst.offline_counts().iter().map(|c| c.to_string())));
        let _ = writeln!(s, "v = {}", join(&mut self.bias.values().iter().map(|&x| real(x))));
        if let Noise::ScaledBernoulli { scales } = inst.noise() {
            let _ = writeln!(s, "noise = bernoulli");
            let _ = writeln!(s, "scale = {}", join(&mut scales.iter().map(|&x| real(x))));
        }
        s
    }
}

/// Format like C's `%.9g`: nine significant digits, trailing zeros removed.
pub fn fmt_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{:.*}", (8 - exp) as usize, x))
    }
}

/// Format an optional value, `undef` when absent.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undef".to_string(), fmt_sig9)
}

/// Write `bytes` to `path` via a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# three arms\nk = 3\nt = 100\nmu_on = 1, 0, 0\nmu_off = 0.9 0.1 0.1\nt_s = 10 10 0\nv = 0.1 0.1 inf\n";

    #[test]
    fn parse_and_render_round_trip() {
        let f = InstanceFile::parse(SAMPLE, Path::new("x")).unwrap();
        assert_eq!(f.instance.k(), 3);
        assert_eq!(f.instance.offline_counts(), &[10, 10, 0]);
        assert_eq!(f.bias.get(2), f64::INFINITY);
        let again = InstanceFile::parse(&f.render(), Path::new("y")).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn malformed_files() {
        let p = Path::new("bad");
        assert!(InstanceFile::parse("k = 2\n", p).is_err());
        assert!(InstanceFile::parse(&SAMPLE.replace("t_s = 10 10 0", "t_s = 10 10"), p).is_err());
        assert!(InstanceFile::parse(&SAMPLE.replace("v = 0.1 0.1 inf", "v = 0.1 -1 inf"), p).is_err());
        assert!(InstanceFile::parse(&SAMPLE.replace("k = 3", "k = three"), p).is_err());
        assert!(InstanceFile::parse(&format!("{SAMPLE}k = 3\n"), p).is_err());
    }

    #[test]
    fn bernoulli_noise() {
        let text = "k = 2\nt = 5\nmu_on = 0.16 0.25\nmu_off = 0.16 0.25\nt_s = 0 0\nv = 0 0\nnoise = bernoulli\nscale = 0.2 0.5\n";
        let f = InstanceFile::parse(text, Path::new("p")).unwrap();
        assert!(matches!(f.instance.noise(), Noise::ScaledBernoulli { .. }));
        assert_eq!(InstanceFile::parse(&f.render(), Path::new("p")).unwrap(), f);
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(2000.0), "2000");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123456789.4), "123456789");
        assert_eq!(fmt_sig9(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_sig9(1e-7), "1e-07");
        assert_eq!(fmt_sig9(-0.5), "-0.5");
        assert_eq!(fmt_sig9(f64::INFINITY), "inf");
        assert_eq!(fmt_sig9(999999999.6), "1e+09");
    }
}
