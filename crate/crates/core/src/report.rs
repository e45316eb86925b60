//! Machine-readable report documents with a stable schema. All rationals
//! are "p/q" strings, matrices are integer arrays, and every report embeds
//! the run manifest.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohom::CohomologyVector;
use crate::genscript::GenReport;
use crate::search::SearchHit;
use crate::skewgroup::InducedCandidate;
use crate::tilting::{DpReport, EulerReport, HereditaryReport, PartialVerdict};
use crate::wps::{Classification, SanityWarning};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub caps: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: "glsurf".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: Vec::new(),
            seed: None,
            caps: BTreeMap::new(),
        }
    }

    pub fn with_input(mut self, path: &str) -> Self {
        self.inputs.push(path.to_string());
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_cap(mut self, key: &str, value: impl ToString) -> Self {
        self.caps.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyDoc {
    pub manifest: RunManifest,
    pub classification: Classification,
    pub kodaira_negative: Option<bool>,
    pub warnings: Vec<SanityWarning>,
    pub nine_point: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomDoc {
    pub manifest: RunManifest,
    pub class: Vec<i64>,
    pub engine: CohomologyVector,
    pub oracle: Option<CohomologyVector>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub manifest: RunManifest,
    pub partial_tilting: PartialVerdict,
    pub hereditary: Option<HereditaryReport>,
    pub euler: Option<EulerReport>,
    pub quasi_canonical: Option<DpReport>,
    pub generation: Option<GenReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchDoc {
    pub manifest: RunManifest,
    pub expected_rank: u64,
    pub classes_enumerated: usize,
    pub hits: Vec<SearchHit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NinePointDoc {
    pub manifest: RunManifest,
    pub class: String,
    pub torsion: bool,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkewDoc {
    pub manifest: RunManifest,
    pub star_condition: bool,
    pub star_witnesses: Vec<String>,
    pub upstairs_partial: PartialVerdict,
    pub upstairs_hereditary: HereditaryReport,
    pub induced: InducedCandidate,
    pub expected_rank: Option<u64>,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("report serialization")
}
