//! `--params` lists like `n=1,d=2..3,p=2,3,5,B=3`. Items are comma
//! separated; an item without `=` extends the previous key's value
//! list, and `a..b` is an inclusive range.

use std::collections::BTreeMap;

use minres_core::{Error, Result};

#[derive(Debug, Default)]
pub struct Params {
    map: BTreeMap<String, Vec<String>>,
}

pub fn parse(text: Option<&str>) -> Result<Params> {
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let Some(text) = text else {
        return Ok(Params { map });
    };
    let mut last: Option<String> = None;
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::Construction("empty item in parameter list".into()));
        }
        match item.split_once('=') {
            Some((key, value)) => {
                let key = key.trim().to_string();
                map.entry(key.clone()).or_default().push(value.trim().to_string());
                last = Some(key);
            }
            None => match &last {
                Some(key) => map.get_mut(key).expect("seen key").push(item.to_string()),
                None => {
                    return Err(Error::Construction(
                        "parameter list must start with key=value".into(),
                    ))
                }
            },
        }
    }
    Ok(Params { map })
}

impl Params {
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Construction(format!(
                    "unknown parameter {key:?}, expected one of {allowed:?}"
                )));
            }
        }
        Ok(())
    }

    fn single(&self, key: &str) -> Result<Option<&str>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(values) if values.len() == 1 => Ok(Some(&values[0])),
            Some(_) => Err(Error::Construction(format!(
                "parameter {key} takes a single value"
            ))),
        }
    }

    pub fn u64_single(&self, key: &str, default: u64) -> Result<u64> {
        match self.single(key)? {
            None => Ok(default),
            Some(v) => parse_u64(key, v),
        }
    }

    pub fn u32_single(&self, key: &str, default: u32) -> Result<u32> {
        Ok(self.u64_single(key, u64::from(default))? as u32)
    }

    pub fn usize_single(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64_single(key, default as u64)? as usize)
    }

    /// A list of values, each either a number or an inclusive `a..b`.
    pub fn u64_list(&self, key: &str, default: &[u64]) -> Result<Vec<u64>> {
        let Some(values) = self.map.get(key) else {
            return Ok(default.to_vec());
        };
        let mut out = Vec::new();
        for value in values {
            match value.split_once("..") {
                Some((lo, hi)) => {
                    let lo = parse_u64(key, lo)?;
                    let hi = parse_u64(key, hi)?;
                    if lo > hi {
                        return Err(Error::Construction(format!(
                            "empty range {value} for parameter {key}"
                        )));
                    }
                    out.extend(lo..=hi);
                }
                None => out.push(parse_u64(key, value)?),
            }
        }
        Ok(out)
    }

    pub fn u32_list(&self, key: &str, default: &[u32]) -> Result<Vec<u32>> {
        let default: Vec<u64> = default.iter().map(|&v| u64::from(v)).collect();
        Ok(self
            .u64_list(key, &default)?
            .into_iter()
            .map(|v| v as u32)
            .collect())
    }
}

fn parse_u64(key: &str, value: &str) -> Result<u64> {
    value.trim().parse::<u64>().map_err(|_| {
        Error::Construction(format!(
            "parameter {key} expects a nonnegative integer, got {value:?}"
        ))
    })
}
