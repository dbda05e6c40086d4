//! Validity checks for the four domination variants.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Label, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has no level metadata")]
    MissingLevels,
    #[error("unknown variant `{0}` (expected dom, td, ld or ltd)")]
    UnknownVariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "dom")]
    Dominating,
    #[serde(rename = "td")]
    TotalDominating,
    #[serde(rename = "ld")]
    LocatingDominating,
    #[serde(rename = "ltd")]
    LocatingTotalDominating,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Dominating,
        Variant::TotalDominating,
        Variant::LocatingDominating,
        Variant::LocatingTotalDominating,
    ];

    /// Every vertex, members included, needs a neighbor in the set.
    pub fn is_total(self) -> bool {
        matches!(
            self,
            Variant::TotalDominating | Variant::LocatingTotalDominating
        )
    }

    /// Non-members need pairwise distinct signatures.
    pub fn is_locating(self) -> bool {
        matches!(
            self,
            Variant::LocatingDominating | Variant::LocatingTotalDominating
        )
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Dominating => "dom",
            Variant::TotalDominating => "td",
            Variant::LocatingDominating => "ld",
            Variant::LocatingTotalDominating => "ltd",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Variant::Dominating => "γ",
            Variant::TotalDominating => "γ_t",
            Variant::LocatingDominating => "γ^L",
            Variant::LocatingTotalDominating => "γ^L_t",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dom" | "d" | "dominating" => Ok(Variant::Dominating),
            "td" | "tdom" | "total" | "total-dominating" => Ok(Variant::TotalDominating),
            "ld" | "lds" | "locating" | "locating-dominating" => Ok(Variant::LocatingDominating),
            "ltd" | "ltds" | "locating-total" | "locating-total-dominating" => {
                Ok(Variant::LocatingTotalDominating)
            }
            _ => Err(CheckError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A vertex that needs a neighbor in the set and has none, and is itself
    /// outside the set.
    Undominated { vertex: Label },
    /// A member of the set with no neighbor in the set (total variants).
    IsolatedInSet { vertex: Label },
    /// Two non-members with the same nonempty signature.
    SignatureClash { first: Label, second: Label },
}

impl Violation {
    fn sort_key(&self) -> (Label, Label, u8) {
        match *self {
            Violation::Undominated { vertex } => (vertex, 0, 0),
            Violation::IsolatedInSet { vertex } => (vertex, 0, 1),
            Violation::SignatureClash { first, second } => (first, second, 2),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Undominated { vertex } => write!(f, "vertex {vertex} is not dominated"),
            Violation::IsolatedInSet { vertex } => {
                write!(f, "member {vertex} has no neighbor in the set")
            }
            Violation::SignatureClash { first, second } => {
                write!(f, "vertices {first} and {second} have the same signature")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub variant: Variant,
    pub set: VertexSet,
    pub valid: bool,
    pub witnesses: Vec<Violation>,
}

/// Checks `s` against `variant` on `g`, listing every violation.
///
/// Vertices with an empty signature are reported as undominated (or isolated)
/// only; signature clashes are listed among dominated non-members.
pub fn check(g: &Graph, s: &VertexSet, variant: Variant) -> Result<Certificate, CheckError> {
    s.validate(g)?;
    let n = g.vertex_count();
    let member: Vec<bool> = g.labels().iter().map(|&v| s.contains(v)).collect();
    let mut witnesses = Vec::new();
    let mut signed: Vec<(Vec<u32>, Label)> = Vec::new();

    for i in 0..n {
        let sig: Vec<u32> = g
            .neighbor_indices(i)
            .iter()
            .copied()
            .filter(|&j| member[j as usize])
            .collect();
        let v = g.label_at(i);
        if sig.is_empty() {
            if !member[i] {
                witnesses.push(Violation::Undominated { vertex: v });
            } else if variant.is_total() {
                witnesses.push(Violation::IsolatedInSet { vertex: v });
            }
            continue;
        }
        if variant.is_locating() && !member[i] {
            signed.push((sig, v));
        }
    }

    if variant.is_locating() {
        signed.sort_unstable();
        let mut start = 0;
        while start < signed.len() {
            let mut end = start + 1;
            while end < signed.len() && signed[end].0 == signed[start].0 {
                end += 1;
            }
            for a in start..end {
                for b in (a + 1)..end {
                    witnesses.push(Violation::SignatureClash {
                        first: signed[a].1,
                        second: signed[b].1,
                    });
                }
            }
            start = end;
        }
    }

    witnesses.sort_by_key(Violation::sort_key);
    Ok(Certificate {
        variant,
        set: s.clone(),
        valid: witnesses.is_empty(),
        witnesses,
    })
}

/// Shorthand for `check(..).valid`.
pub fn is_valid(g: &Graph, s: &VertexSet, variant: Variant) -> bool {
    check(g, s, variant).map(|c| c.valid).unwrap_or(false)
}

/// Number of members of `s` lying in any of `levels`.
pub fn count_in_levels(
    g: &Graph,
    s: &VertexSet,
    levels: &BTreeSet<u32>,
) -> Result<usize, CheckError> {
    if !g.has_levels() {
        return Err(CheckError::MissingLevels);
    }
    s.validate(g)?;
    Ok(s.iter()
        .filter(|&v| g.level_of(v).map(|l| levels.contains(&l)).unwrap_or(false))
        .count())
}
