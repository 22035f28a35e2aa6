use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::Window;

/// The on-disk dataset document. Field order is the canonical key order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub atoms: IndexMap<String, [i32; 3]>,
    #[serde(default)]
    pub relations: Vec<RelationSetRow>,
    #[serde(default)]
    pub pages: IndexMap<String, PageRows>,
    #[serde(default)]
    pub hidden_tau: Vec<HiddenRow>,
    #[serde(default)]
    pub torsion_legend: IndexMap<String, String>,
    #[serde(default)]
    pub einf_classes: Vec<EinfRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSetRow {
    pub page: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub relations: Vec<RelationRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationRow {
    pub expr: String,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageRows {
    pub generators: Vec<GeneratorRow>,
    #[serde(default)]
    pub differentials: Vec<DifferentialRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRow {
    pub s: i32,
    pub f: i32,
    pub w: i32,
    pub expr: String,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialRow {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub source_ref: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiddenRow {
    pub s: i32,
    pub f: i32,
    pub w: i32,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub source_ref: String,
}

/// Known τ-torsion of an E∞ class: `"free"` or the order k of M₂/τᵏ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EinfRow {
    pub s: i32,
    pub f: i32,
    pub w: i32,
    pub expr: String,
    pub torsion: String,
    #[serde(default)]
    pub source: String,
}

/// Keys reserved for extension kinds the engine does not support.
pub const RESERVED_KEYS: [&str; 3] = ["hidden_2", "hidden_eta", "hidden_nu"];

impl DatasetFile {
    /// Pretty JSON with two-space indent and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }
}
