//! Decision procedures for the congruence conditions: spectrum functions
//! J, J⌣, J^r, D, T via free-algebra instantiation, term-chain search, and
//! the generic inclusion checker.

pub mod pixley;
pub mod scheme;
pub mod spectrum;
pub mod terms;

pub use pixley::{check_identity_generic, build_context, ElemSet, GenericCheck, PwContext};
pub use scheme::{InclusionScheme, RelAst};
pub use spectrum::{
    check_dist, check_smile_c, day_function, day_level, has_maltsev_term, jonsson_level,
    relational_level, tschantz_function, extract_chain_terms, DistVariant, RelBudget,
    SmileCounterexample, SmileOutcome, Witness,
};
pub use terms::{find_terms, TermChain, TermScheme};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumVariant {
    #[serde(rename = "J")]
    J,
    #[serde(rename = "Jconv")]
    JConv,
    #[serde(rename = "Jr")]
    Jr,
    #[serde(rename = "Jrconv")]
    JrConv,
    #[serde(rename = "D")]
    Day,
    #[serde(rename = "DayLevel")]
    DayLevel,
    #[serde(rename = "T")]
    Tschantz,
}

/// Computed level, or `exceeded(k_max)` when no k within the bound works.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumValue {
    Level(usize),
    Exceeded { k_max: usize },
}

impl SpectrumValue {
    pub fn level(&self) -> Option<usize> {
        match self {
            SpectrumValue::Level(k) => Some(*k),
            SpectrumValue::Exceeded { .. } => None,
        }
    }

    pub fn is_exceeded(&self) -> bool {
        matches!(self, SpectrumValue::Exceeded { .. })
    }
}

impl Serialize for SpectrumValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectrumValue::Level(k) => s.serialize_u64(*k as u64),
            SpectrumValue::Exceeded { k_max } => s.serialize_str(&format!("exceeded({k_max})")),
        }
    }
}

impl std::fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumValue::Level(k) => write!(f, "{k}"),
            SpectrumValue::Exceeded { k_max } => write!(f, "exceeded({k_max})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CapsEcho {
    pub max_elements: usize,
    pub max_width: usize,
    pub k_max: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSummary {
    pub free_elements: usize,
    pub chain: Vec<usize>,
    pub labels: Vec<String>,
}

/// Result of a spectrum computation, serializable for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub variant: SpectrumVariant,
    pub algebras: Vec<String>,
    pub m: usize,
    pub value: SpectrumValue,
    pub caps: CapsEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub timing_ms: u64,
}
