use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::economy::{Economy, StateSpec};
use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::market::{UtilityMatrix, WorkerId};
use crate::Rational;

pub const FORMAT_VERSION: u32 = 1;

/// A rational that serializes as an integer when integral, else `"p/q"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Number(pub Rational);

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(self.0.to_integer())
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

/// Parses `"p/q"` or an integer.
pub fn rational_from_str(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(Error::InvalidArgument)
}

fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| format!("`{text}` is not an exact rational"))?;
    let den: i64 = den.parse().map_err(|_| format!("`{text}` is not an exact rational"))?;
    if den == 0 {
        return Err(format!("`{text}` has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

struct NumberVisitor;

impl Visitor<'_> for NumberVisitor {
    type Value = Number;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Number, E> {
        Ok(Number(Rational::from_integer(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Number, E> {
        i64::try_from(v)
            .map(|v| Number(Rational::from_integer(v)))
            .map_err(|_| E::custom(format!("{v} is out of range")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Number, E> {
        Err(E::custom(format!("{v} is a decimal; write exact values as \"p/q\"")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Number, E> {
        parse_rational(v).map(Number).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(NumberVisitor)
    }
}

/// A rational always written as a `"p/q"` string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probability(pub Rational);

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(Probability).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub id: String,
    pub probability: Probability,
    pub firm_utilities: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyFile {
    pub format_version: u32,
    pub firms: Vec<String>,
    pub workers: Vec<String>,
    pub states: Vec<StateFile>,
    pub worker_utilities: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntry {
    pub worker: String,
    pub report: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub format_version: u32,
    pub reports: Vec<ProfileEntry>,
}

fn matrix_out(u: &UtilityMatrix) -> Vec<Vec<Number>> {
    u.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Number).collect())
        .collect()
}

fn matrix_in(field: &str, rows: &[Vec<Number>]) -> Result<UtilityMatrix> {
    UtilityMatrix::from_rows(rows.iter().map(|r| r.iter().map(|n| n.0).collect()).collect()).map_err(|e| {
        Error::Field {
            field: field.into(),
            message: e.to_string(),
        }
    })
}

fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Field {
            field: "format_version".into(),
            message: format!("unsupported version {version}, expected {FORMAT_VERSION}"),
        });
    }
    Ok(())
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            path,
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        path: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("file structs serialize");
    text.push('\n');
    text
}

impl EconomyFile {
    pub fn from_economy(economy: &Economy) -> Self {
        EconomyFile {
            format_version: FORMAT_VERSION,
            firms: economy.firm_names().to_vec(),
            workers: economy.worker_names().to_vec(),
            states: economy
                .states()
                .iter()
                .map(|s| StateFile {
                    id: s.id().to_string(),
                    probability: Probability(s.probability()),
                    firm_utilities: matrix_out(s.market().firm_utils()),
                })
                .collect(),
            worker_utilities: matrix_out(economy.worker_utils()),
        }
    }

    pub fn to_economy(&self) -> Result<Economy> {
        check_version(self.format_version)?;
        let worker_utils = matrix_in("worker_utilities", &self.worker_utilities)?;
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(k, s)| {
                Ok(StateSpec {
                    id: s.id.clone(),
                    probability: s.probability.0,
                    firm_utils: matrix_in(&format!("states[{k}].firm_utilities"), &s.firm_utilities)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Economy::new(self.firms.clone(), self.workers.clone(), worker_utils, states)
    }
}

impl ProfileFile {
    pub fn from_profile(economy: &Economy, profile: &StrategyProfile) -> Self {
        ProfileFile {
            format_version: FORMAT_VERSION,
            reports: profile
                .reports()
                .iter()
                .enumerate()
                .map(|(j, r)| ProfileEntry {
                    worker: economy.worker_name(WorkerId(j)).to_string(),
                    report: r.iter().map(|&f| economy.firm_name(f).to_string()).collect(),
                })
                .collect(),
        }
    }

    /// Every worker must appear exactly once; entries may be in any order.
    pub fn to_profile(&self, economy: &Economy) -> Result<StrategyProfile> {
        check_version(self.format_version)?;
        let mut reports = vec![None; economy.num_workers()];
        for (k, entry) in self.reports.iter().enumerate() {
            let w = economy.worker_by_name(&entry.worker)?;
            if reports[w.0].is_some() {
                return Err(Error::Field {
                    field: format!("reports[{k}].worker"),
                    message: format!("worker `{}` appears twice", entry.worker),
                });
            }
            let report = entry
                .report
                .iter()
                .map(|name| economy.firm_by_name(name))
                .collect::<Result<Vec<_>>>()?;
            reports[w.0] = Some(report);
        }
        let reports = reports
            .into_iter()
            .enumerate()
            .map(|(j, r)| {
                r.ok_or_else(|| Error::Field {
                    field: "reports".into(),
                    message: format!("no report for worker `{}`", economy.worker_name(WorkerId(j))),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StrategyProfile::for_economy(economy, reports)
    }
}

pub fn economy_from_json(text: &str) -> Result<Economy> {
    parse::<EconomyFile>(text)?.to_economy()
}

pub fn economy_to_json(economy: &Economy) -> String {
    to_text(&EconomyFile::from_economy(economy))
}

pub fn profile_from_json(economy: &Economy, text: &str) -> Result<StrategyProfile> {
    parse::<ProfileFile>(text)?.to_profile(economy)
}

pub fn profile_to_json(economy: &Economy, profile: &StrategyProfile) -> String {
    to_text(&ProfileFile::from_profile(economy, profile))
}

pub fn load_economy(path: &Path) -> Result<Economy> {
    economy_from_json(&fs::read_to_string(path)?)
}

pub fn save_economy(path: &Path, economy: &Economy) -> Result<()> {
    Ok(fs::write(path, economy_to_json(economy))?)
}

pub fn load_profile(path: &Path, economy: &Economy) -> Result<StrategyProfile> {
    profile_from_json(economy, &fs::read_to_string(path)?)
}

pub fn save_profile(path: &Path, economy: &Economy, profile: &StrategyProfile) -> Result<()> {
    Ok(fs::write(path, profile_to_json(economy, profile))?)
}

pub(crate) fn pretty<T: Serialize>(value: &T) -> String {
    to_text(value)
}
