//! Machine-readable documents. Integers are written as decimal strings and
//! fields appear in declaration order.

use serde::Serialize;

use cqstar::engine::CountStats;

pub fn int(n: impl ToString) -> String {
    n.to_string()
}

#[derive(Serialize)]
pub struct DecompositionInfo {
    pub kind: String,
    pub width: String,
    pub source: &'static str,
}

#[derive(Serialize)]
pub struct Stats {
    pub components: String,
    pub cover_sizes: Vec<String>,
    pub combinations: String,
    pub bag_sizes: Vec<String>,
    pub peak_intermediate: String,
}

impl From<&CountStats> for Stats {
    fn from(s: &CountStats) -> Self {
        Stats {
            components: int(s.components),
            cover_sizes: s.cover_sizes.iter().map(int).collect(),
            combinations: int(s.combinations),
            bag_sizes: s.bag_sizes.iter().map(int).collect(),
            peak_intermediate: int(s.peak_intermediate),
        }
    }
}

#[derive(Serialize)]
pub struct CountDoc {
    pub count: String,
    pub method: String,
    pub decomposition: Option<DecompositionInfo>,
    pub stats: Stats,
}

#[derive(Serialize)]
pub struct ComponentDoc {
    pub index: String,
    pub size: String,
    pub star: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct StarsizeDoc {
    pub size: String,
    pub method: String,
    pub components: Vec<ComponentDoc>,
}

#[derive(Serialize)]
pub struct ViolationDoc {
    pub tag: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyDoc {
    pub valid: bool,
    pub kind: String,
    pub width: Option<String>,
    pub violations: Vec<ViolationDoc>,
}

#[derive(Serialize)]
pub struct OracleEntry {
    pub method: String,
    pub value: Option<String>,
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct OracleDoc {
    pub starsize: Vec<OracleEntry>,
    pub count: Vec<OracleEntry>,
    pub agree: bool,
}

pub fn print_json<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string_pretty(doc).expect("documents serialize"));
}
