//! Spectrum and Hamiltonian files, builtin spectrum strings and the preset catalog.

use std::fs;
use std::path::Path;

use optham::gibbs::ArithmeticTail;
use optham::{Hamiltonian, Spectrum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A spectrum as written in a JSON file, tagged by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpectrumFile {
    Uniform {
        n: usize,
    },
    Linear {
        n: usize,
    },
    /// Thermal state with mean occupation `E0`, or an explicit ratio `q`.
    Geometric {
        #[serde(rename = "E0", default)]
        e0: Option<f64>,
        #[serde(default)]
        q: Option<f64>,
    },
    Explicit {
        p: Vec<f64>,
    },
    Truncated {
        p: Vec<f64>,
        tail_tol: f64,
    },
}

impl SpectrumFile {
    pub fn build(self) -> Result<Spectrum> {
        let spec = match self {
            SpectrumFile::Uniform { n } => Spectrum::uniform(n)?,
            SpectrumFile::Linear { n } => Spectrum::linear(n)?,
            SpectrumFile::Geometric {
                e0: Some(mean),
                q: None,
            } => Spectrum::thermal(mean)?,
            SpectrumFile::Geometric {
                e0: None,
                q: Some(q),
            } => Spectrum::geometric(q)?,
            SpectrumFile::Geometric { .. } => {
                return Err(CliError::BadConfig(
                    "a geometric spectrum needs exactly one of E0 and q".into(),
                ))
            }
            SpectrumFile::Explicit { p } => Spectrum::explicit(p)?,
            SpectrumFile::Truncated { p, tail_tol } => Spectrum::truncated(p, tail_tol)?,
        };
        Ok(spec)
    }
}

/// Parses `uniform:N`, `linear:N`, `geometric:E0`. Anything else is read as a file.
pub fn parse_builtin(source: &str) -> Option<Result<SpectrumFile>> {
    let (kind, arg) = source.split_once(':')?;
    let bad = || CliError::BadConfig(format!("cannot parse builtin spectrum `{source}`"));
    let parsed = match kind {
        "uniform" => arg
            .parse()
            .map(|n| SpectrumFile::Uniform { n })
            .map_err(|_| bad()),
        "linear" => arg
            .parse()
            .map(|n| SpectrumFile::Linear { n })
            .map_err(|_| bad()),
        "geometric" => arg
            .parse()
            .map(|e0| SpectrumFile::Geometric {
                e0: Some(e0),
                q: None,
            })
            .map_err(|_| bad()),
        _ => return None,
    };
    Some(parsed)
}

pub fn load_spectrum(source: &str) -> Result<Spectrum> {
    match parse_builtin(source) {
        Some(file) => file?.build(),
        None => read_json::<SpectrumFile>(Path::new(source))?.build(),
    }
}

/// Hamiltonian levels. With `finite_domain: false` the list is continued
/// arithmetically with its last gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub levels: Vec<f64>,
    #[serde(default = "yes")]
    pub finite_domain: bool,
}

fn yes() -> bool {
    true
}

impl HamiltonianFile {
    pub fn build(self) -> Result<Hamiltonian> {
        if self.finite_domain {
            return Ok(Hamiltonian::finite(self.levels)?);
        }
        let n = self.levels.len();
        if n < 2 {
            return Err(CliError::BadConfig(
                "an infinite domain needs at least two levels to fix the gap".into(),
            ));
        }
        let gap = self.levels[n - 1] - self.levels[n - 2];
        Ok(Hamiltonian::from_generator(ArithmeticTail::new(
            self.levels,
            gap,
        )?)?)
    }
}

pub fn load_hamiltonian(path: &Path) -> Result<Hamiltonian> {
    read_json::<HamiltonianFile>(path)?.build()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetEntry {
    pub slug: String,
    pub name: String,
    pub parties: usize,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub metric: String,
}

const CATALOG: &str = include_str!("../data/presets.json");

pub fn catalog() -> Vec<PresetEntry> {
    serde_json::from_str(CATALOG).expect("shipped preset catalog parses")
}

pub fn find_preset(key: &str) -> Result<PresetEntry> {
    catalog()
        .into_iter()
        .find(|p| p.slug == key || p.name.eq_ignore_ascii_case(key))
        .ok_or_else(|| {
            let known: Vec<String> = catalog().into_iter().map(|p| p.slug).collect();
            CliError::BadConfig(format!(
                "unknown characteristic `{key}` (known: {})",
                known.join(", ")
            ))
        })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use optham::bounds::PRESETS;

    #[test]
    fn catalog_matches_core_presets() {
        let cat = catalog();
        assert_eq!(cat.len(), PRESETS.len());
        for (entry, core) in cat.iter().zip(PRESETS) {
            assert_eq!(entry.slug, core.slug);
            assert_eq!(entry.name, core.name);
            assert_eq!(entry.parties, core.parties);
            assert_eq!(entry.c, core.c);
            assert_eq!(entry.d, core.d);
            assert_eq!(entry.metric, core.metric);
        }
    }

    #[test]
    fn builtins() {
        assert_eq!(
            parse_builtin("uniform:10").unwrap().unwrap(),
            SpectrumFile::Uniform { n: 10 }
        );
        assert!(parse_builtin("uniform:x").unwrap().is_err());
        assert!(parse_builtin("spectrum.json").is_none());
        let geo = load_spectrum("geometric:1").unwrap();
        assert!((geo.geometric_ratio().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spectrum_json_forms() {
        let cases = [
            r#"{"type":"uniform","n":4}"#,
            r#"{"type":"linear","n":4}"#,
            r#"{"type":"geometric","E0":2}"#,
            r#"{"type":"geometric","q":0.25}"#,
            r#"{"type":"explicit","p":[0.5,0.3,0.2]}"#,
            r#"{"type":"truncated","p":[0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125,0.0009765625,0.00048828125,0.000244140625,0.0001220703125,0.00006103515625,0.000030517578125,0.0000152587890625,0.00000762939453125,0.000003814697265625,0.0000019073486328125,0.00000095367431640625],"tail_tol":1e-4}"#,
        ];
        for text in cases {
            let file: SpectrumFile = serde_json::from_str(text).unwrap();
            file.build().unwrap();
        }
        let both: SpectrumFile =
            serde_json::from_str(r#"{"type":"geometric","E0":2,"q":0.5}"#).unwrap();
        assert!(matches!(both.build(), Err(CliError::BadConfig(_))));
    }

    #[test]
    fn infinite_hamiltonian_continues_last_gap() {
        let h = HamiltonianFile {
            levels: vec![0.0, 0.5, 1.5],
            finite_domain: false,
        }
        .build()
        .unwrap();
        assert_eq!(h.domain_dim(), None);
        assert!((h.level(5) - 3.5).abs() < 1e-12);
        let f: HamiltonianFile = serde_json::from_str(r#"{"levels":[0,1,1]}"#).unwrap();
        assert_eq!(f.build().unwrap().domain_dim(), Some(3));
    }
}
