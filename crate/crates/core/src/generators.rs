//! Graph families built on the complete binary tree, and the bottom-level
//! decompositions used to assemble sets level block by level block.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Label};

/// Largest supported level count; `2^(MAX_LEVELS + 1) - 1` vertices.
pub const MAX_LEVELS: u32 = 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("unsupported level count {n} for {family}")]
    UnsupportedLevels { family: Family, n: u32 },
    #[error("unknown family `{0}` (expected cbt, ht, ht-star or st)")]
    UnknownFamily(String),
    #[error("graph carries no family metadata")]
    NoFamily,
    #[error("{kind:?} copies are not defined for {spec}")]
    IncompatibleKind { kind: CopyKind, spec: FamilySpec },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "cbt")]
    CompleteBinaryTree,
    #[serde(rename = "ht")]
    Hypertree,
    #[serde(rename = "ht-star")]
    RootFaultHypertree,
    #[serde(rename = "st")]
    SiblingTree,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::CompleteBinaryTree,
        Family::Hypertree,
        Family::RootFaultHypertree,
        Family::SiblingTree,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Family::CompleteBinaryTree => "cbt",
            Family::Hypertree => "ht",
            Family::RootFaultHypertree => "ht-star",
            Family::SiblingTree => "st",
        }
    }

    pub fn min_levels(self) -> u32 {
        match self {
            Family::RootFaultHypertree => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cbt" | "tree" | "complete-binary-tree" => Ok(Family::CompleteBinaryTree),
            "ht" | "hypertree" => Ok(Family::Hypertree),
            "ht-star" | "htstar" | "ht*" | "root-fault-hypertree" => Ok(Family::RootFaultHypertree),
            "st" | "sibling" | "sibling-tree" => Ok(Family::SiblingTree),
            _ => Err(GeneratorError::UnknownFamily(s.to_string())),
        }
    }
}

/// One member of a family: `(family, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
}

impl FamilySpec {
    pub fn new(family: Family, n: u32) -> Result<Self, GeneratorError> {
        if n < family.min_levels() || n > MAX_LEVELS {
            return Err(GeneratorError::UnsupportedLevels { family, n });
        }
        Ok(FamilySpec { family, n })
    }

    /// Vertex count without building the graph.
    pub fn vertex_count(&self) -> usize {
        let full = (1usize << (self.n + 1)) - 1;
        match self.family {
            Family::RootFaultHypertree => full - 1,
            _ => full,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::CompleteBinaryTree => write!(f, "T({})", self.n),
            Family::Hypertree => write!(f, "HT({})", self.n),
            Family::RootFaultHypertree => write!(f, "HT*({})", self.n),
            Family::SiblingTree => write!(f, "ST({})", self.n),
        }
    }
}

/// Level of a label in the binary-tree numbering (root 1 is level 0).
pub fn level_of_label(x: Label) -> u32 {
    debug_assert!(x > 0);
    31 - x.leading_zeros()
}

/// Builds the family member named by `spec`.
pub fn generate(spec: FamilySpec) -> Result<Graph, GeneratorError> {
    let spec = FamilySpec::new(spec.family, spec.n)?;
    let n = spec.n;
    let last: Label = (1 << (n + 1)) - 1;
    let first: Label = if spec.family == Family::RootFaultHypertree {
        2
    } else {
        1
    };

    let mut edges: Vec<(Label, Label)> = Vec::with_capacity(3 << n);
    for x in first..(1 << n) {
        edges.push((x, 2 * x));
        edges.push((x, 2 * x + 1));
    }
    match spec.family {
        Family::Hypertree | Family::RootFaultHypertree => {
            for i in 1..=n {
                let gap = 1 << (i - 1);
                for x in (1 << i)..((1 << i) + gap) {
                    edges.push((x, x + gap));
                }
            }
        }
        Family::SiblingTree => {
            for x in 1..(1 << n) {
                edges.push((2 * x, 2 * x + 1));
            }
        }
        Family::CompleteBinaryTree => {}
    }

    let labels: Vec<Label> = (first..=last).collect();
    let levels = labels.iter().map(|&x| level_of_label(x)).collect();
    let g = Graph::build(labels, edges, Some(levels), Some(spec))
        .expect("generated edges reference generated vertices");
    Ok(g)
}

/// Kinds of vertex-disjoint blocks occupying the lowest levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CopyKind {
    /// Levels n-1..n of a hypertree: a level-(n-1) horizontal pair with its children.
    HtStar2,
    /// Levels n-2..n of a hypertree: a level-(n-2) horizontal pair with descendants.
    HtStar3,
    /// Levels n-1..n of a sibling tree: a level-(n-1) vertex and its two children.
    TerminalTriangle,
    /// Levels n-2..n of a sibling tree: a level-(n-2) vertex and its descendants.
    SiblingBlock,
}

impl CopyKind {
    /// Number of levels the copies span.
    pub fn depth(self) -> u32 {
        match self {
            CopyKind::HtStar2 | CopyKind::TerminalTriangle => 2,
            CopyKind::HtStar3 | CopyKind::SiblingBlock => 3,
        }
    }

    /// The graph each copy is isomorphic to.
    pub fn reference_spec(self) -> FamilySpec {
        match self {
            CopyKind::HtStar2 => FamilySpec {
                family: Family::RootFaultHypertree,
                n: 2,
            },
            CopyKind::HtStar3 => FamilySpec {
                family: Family::RootFaultHypertree,
                n: 3,
            },
            CopyKind::TerminalTriangle => FamilySpec {
                family: Family::SiblingTree,
                n: 1,
            },
            CopyKind::SiblingBlock => FamilySpec {
                family: Family::SiblingTree,
                n: 2,
            },
        }
    }

    pub fn reference_graph(self) -> Graph {
        generate(self.reference_spec()).expect("reference specs are in range")
    }

    fn accepts(self, spec: FamilySpec) -> bool {
        let hypertree = matches!(spec.family, Family::Hypertree | Family::RootFaultHypertree);
        match self {
            CopyKind::HtStar2 => hypertree && spec.n >= 2,
            CopyKind::HtStar3 => hypertree && spec.n >= 3,
            CopyKind::TerminalTriangle => spec.family == Family::SiblingTree && spec.n >= 1,
            CopyKind::SiblingBlock => spec.family == Family::SiblingTree && spec.n >= 2,
        }
    }
}

/// One block of a bottom decomposition.
///
/// `vertices[i]` corresponds to `kind.reference_graph().labels()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottomCopy {
    pub kind: CopyKind,
    /// The degree-3 pair for hypertree copies; apex and children for a
    /// triangle; the root for a sibling block.
    pub top: Vec<Label>,
    pub vertices: Vec<Label>,
}

impl BottomCopy {
    /// Copy label for a reference label.
    pub fn image_of(&self, reference_label: Label) -> Option<Label> {
        let r = self.kind.reference_graph();
        r.index_of(reference_label).map(|i| self.vertices[i])
    }

    /// Checks that the canonical correspondence is an isomorphism onto the
    /// subgraph of `g` induced by the copy.
    pub fn is_canonically_isomorphic(&self, g: &Graph) -> bool {
        let reference = self.kind.reference_graph();
        if reference.vertex_count() != self.vertices.len()
            || self.vertices.iter().any(|&v| !g.contains(v))
        {
            return false;
        }
        let rl = reference.labels();
        for i in 0..rl.len() {
            for j in (i + 1)..rl.len() {
                if reference.is_adjacent(rl[i], rl[j])
                    != g.is_adjacent(self.vertices[i], self.vertices[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Maps reference labels below roots at level 1 (labels 2 and 3) onto the
/// subtrees of `left` and `right`.
fn two_root_image(reference: &[Label], left: Label, right: Label) -> Vec<Label> {
    reference
        .iter()
        .map(|&r| {
            let j = level_of_label(r);
            let half = 1 << (j - 1);
            let t = r - (1 << j);
            if t < half {
                left * half + t
            } else {
                right * half + (t - half)
            }
        })
        .collect()
}

/// Maps reference labels of a tree rooted at 1 onto the subtree of `root`.
fn single_root_image(reference: &[Label], root: Label) -> Vec<Label> {
    reference
        .iter()
        .map(|&r| {
            let j = level_of_label(r);
            root * (1 << j) + (r - (1 << j))
        })
        .collect()
}

/// Splits the lowest levels of a generated graph into disjoint copies.
pub fn decompose_bottom(g: &Graph, kind: CopyKind) -> Result<Vec<BottomCopy>, GeneratorError> {
    let spec = g.origin().ok_or(GeneratorError::NoFamily)?;
    if !kind.accepts(spec) {
        return Err(GeneratorError::IncompatibleKind { kind, spec });
    }
    let n = spec.n;
    let reference = kind.reference_graph();
    let rl = reference.labels();
    let top_level = n + 1 - kind.depth();
    let start: Label = 1 << top_level;

    let copies = match kind {
        CopyKind::HtStar2 | CopyKind::HtStar3 => {
            let gap = 1 << (top_level - 1);
            (start..start + gap)
                .map(|x| BottomCopy {
                    kind,
                    top: vec![x, x + gap],
                    vertices: two_root_image(rl, x, x + gap),
                })
                .collect()
        }
        CopyKind::TerminalTriangle => (start..2 * start)
            .map(|p| BottomCopy {
                kind,
                top: vec![p, 2 * p, 2 * p + 1],
                vertices: single_root_image(rl, p),
            })
            .collect(),
        CopyKind::SiblingBlock => (start..2 * start)
            .map(|p| BottomCopy {
                kind,
                top: vec![p],
                vertices: single_root_image(rl, p),
            })
            .collect(),
    };
    Ok(copies)
}
