//! Run configuration: a JSON file carrying any input a flag could carry.
//!
//! Flags always win over the file. Validation happens after the merge, so
//! a config error and the matching flag error read the same. Messages name
//! the offending field by its config path (`ns.gram`, `ample`, …) so a
//! failing run can be fixed without reverse-engineering the schema.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mukai: Option<MukaiConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<SegmentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<MukaiConfig>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub ns: NsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsConfig {
    pub gram: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MukaiConfig {
    pub r: i64,
    pub c: Vec<i64>,
    pub s: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub h1: Vec<i64>,
    pub h2: Vec<i64>,
}

pub fn parse(text: &str) -> Result<RunConfig, String> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
    validate(&cfg)?;
    Ok(cfg)
}

/// Structural checks that don't need any lattice theory: the Gram matrix
/// is square and symmetric, and every coordinate vector matches its rank.
pub fn validate(cfg: &RunConfig) -> Result<(), String> {
    let Some(surface) = &cfg.surface else {
        return Ok(());
    };
    let n = surface.ns.gram.len();
    if n == 0 {
        return Err("ns.gram: the Gram matrix must have at least one row".to_owned());
    }
    for (i, row) in surface.ns.gram.iter().enumerate() {
        if row.len() != n {
            return Err(format!(
                "ns.gram: row {i} has {} entries, expected {n} (the matrix must be square)",
                row.len()
            ));
        }
    }
    for i in 0..n {
        for j in 0..i {
            if surface.ns.gram[i][j] != surface.ns.gram[j][i] {
                return Err(format!(
                    "ns.gram: entries ({i},{j}) and ({j},{i}) differ; the matrix must be symmetric"
                ));
            }
        }
    }
    if let Some(ample) = &surface.ample {
        check_len("ample", ample.len(), n)?;
    }
    if let Some(mukai) = &cfg.mukai {
        check_len("mukai.c", mukai.c.len(), n)?;
    }
    if let Some(seg) = &cfg.segment {
        check_len("segment.h1", seg.h1.len(), n)?;
        check_len("segment.h2", seg.h2.len(), n)?;
    }
    if let Some(h) = &cfg.h {
        check_len("h", h.len(), n)?;
    }
    if let Some(candidates) = &cfg.candidates {
        for (i, u) in candidates.iter().enumerate() {
            check_len(&format!("candidates[{i}].c"), u.c.len(), n)?;
        }
    }
    Ok(())
}

fn check_len(path: &str, got: usize, expected: usize) -> Result<(), String> {
    if got == expected {
        Ok(())
    } else {
        Err(format!(
            "{path}: has {got} coordinates, expected {expected} to match ns.gram"
        ))
    }
}
