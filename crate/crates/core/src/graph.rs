//! Immutable labeled undirected graphs.
//!
//! Vertices carry the decimal labels used for binary-tree based networks
//! (root = 1, children of `x` are `2x` and `2x + 1`). Internally every
//! vertex also has a dense index; indices follow ascending label order, so
//! anything listed by index is also listed by label.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::FamilySpec;

/// A vertex label.
pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex not in graph: {0}")]
    UnknownVertex(Label),
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(Label),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Label),
    #[error("level metadata missing for vertex {0}")]
    MissingLevel(Label),
}

#[derive(Clone, Debug)]
enum LabelIndex {
    /// Labels form the range `first..first + len`.
    Contiguous {
        first: Label,
    },
    Map(HashMap<Label, u32>),
}

/// An immutable undirected graph with sorted adjacency rows.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<Label>,
    index: LabelIndex,
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
    levels: Option<Vec<u32>>,
    origin: Option<FamilySpec>,
}

impl Graph {
    /// Builds a graph from vertex labels and edges. Duplicate edges are merged.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        Self::build(vertices.into_iter().collect(), edges, None, None)
    }

    /// Same as [`Graph::from_edges`] but with a level index per vertex.
    pub fn with_levels<E>(levels: &BTreeMap<Label, u32>, edges: E) -> Result<Graph, GraphError>
    where
        E: IntoIterator<Item = (Label, Label)>,
    {
        let labels: Vec<Label> = levels.keys().copied().collect();
        let lv = levels.values().copied().collect();
        Self::build(labels, edges, Some(lv), None)
    }

    /// `levels`, when present, is indexed like `labels` before sorting.
    pub(crate) fn build<E>(
        labels: Vec<Label>,
        edges: E,
        levels: Option<Vec<u32>>,
        origin: Option<FamilySpec>,
    ) -> Result<Graph, GraphError>
    where
        E: IntoIterator<Item = (Label, Label)>,
    {
        let mut pairs: Vec<(Label, u32)> = match &levels {
            Some(lv) => labels.iter().copied().zip(lv.iter().copied()).collect(),
            None => labels.iter().map(|&l| (l, 0)).collect(),
        };
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateVertex(w[0].0));
            }
        }
        let labels: Vec<Label> = pairs.iter().map(|p| p.0).collect();
        let levels = levels.map(|_| pairs.iter().map(|p| p.1).collect::<Vec<u32>>());

        let contiguous = labels
            .first()
            .map(|&f| labels.last().copied() == Some(f + labels.len() as Label - 1))
            .unwrap_or(true);
        let index = if contiguous {
            LabelIndex::Contiguous {
                first: labels.first().copied().unwrap_or(1),
            }
        } else {
            LabelIndex::Map(
                labels
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| (l, i as u32))
                    .collect(),
            )
        };

        let mut graph = Graph {
            labels,
            index,
            offsets: Vec::new(),
            adjacency: Vec::new(),
            levels,
            origin,
        };

        let mut arcs: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let ia = graph.index_of(a).ok_or(GraphError::UnknownVertex(a))? as u32;
            let ib = graph.index_of(b).ok_or(GraphError::UnknownVertex(b))? as u32;
            arcs.push((ia, ib));
            arcs.push((ib, ia));
        }
        arcs.sort_unstable();
        arcs.dedup();

        let n = graph.labels.len();
        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &arcs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        graph.offsets = offsets;
        graph.adjacency = arcs.into_iter().map(|(_, b)| b).collect();
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertex labels in ascending order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, v: Label) -> bool {
        self.index_of(v).is_some()
    }

    /// Dense index of a label.
    pub fn index_of(&self, v: Label) -> Option<usize> {
        match &self.index {
            LabelIndex::Contiguous { first } => {
                let i = v.checked_sub(*first)? as usize;
                (i < self.labels.len()).then_some(i)
            }
            LabelIndex::Map(m) => m.get(&v).map(|&i| i as usize),
        }
    }

    pub fn label_at(&self, index: usize) -> Label {
        self.labels[index]
    }

    /// Neighbor indices of the vertex at `index`, ascending.
    pub fn neighbor_indices(&self, index: usize) -> &[u32] {
        &self.adjacency[self.offsets[index]..self.offsets[index + 1]]
    }

    /// Open neighborhood N(v), ascending by label.
    pub fn neighbors(&self, v: Label) -> Result<Vec<Label>, GraphError> {
        let i = self.require(v)?;
        Ok(self
            .neighbor_indices(i)
            .iter()
            .map(|&j| self.labels[j as usize])
            .collect())
    }

    pub fn degree(&self, v: Label) -> Result<usize, GraphError> {
        Ok(self.neighbor_indices(self.require(v)?).len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|i| self.neighbor_indices(i).len())
            .max()
            .unwrap_or(0)
    }

    pub fn is_adjacent(&self, u: Label, v: Label) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.neighbor_indices(i).binary_search(&(j as u32)).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(min label, max label)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        (0..self.vertex_count()).flat_map(move |i| {
            self.neighbor_indices(i)
                .iter()
                .filter(move |&&j| j as usize > i)
                .map(move |&j| (self.labels[i], self.labels[j as usize]))
        })
    }

    pub fn has_levels(&self) -> bool {
        self.levels.is_some()
    }

    pub fn level_of(&self, v: Label) -> Option<u32> {
        let i = self.index_of(v)?;
        self.levels.as_ref().map(|lv| lv[i])
    }

    /// Labels at a given level, ascending. Empty when no level metadata.
    pub fn level_members(&self, level: u32) -> Vec<Label> {
        match &self.levels {
            Some(lv) => self
                .labels
                .iter()
                .zip(lv)
                .filter(|(_, &l)| l == level)
                .map(|(&v, _)| v)
                .collect(),
            None => Vec::new(),
        }
    }

    /// The family instance this graph was generated from, if any.
    pub fn origin(&self) -> Option<FamilySpec> {
        self.origin
    }

    /// N(v) ∩ S, ascending.
    pub fn signature(&self, s: &VertexSet, v: Label) -> Result<Signature, GraphError> {
        let i = self.require(v)?;
        let in_set_neighbors = self
            .neighbor_indices(i)
            .iter()
            .map(|&j| self.labels[j as usize])
            .filter(|l| s.contains(*l))
            .collect();
        Ok(Signature {
            vertex: v,
            in_set_neighbors,
        })
    }

    /// Subgraph induced by `vs`; level metadata is restricted, family origin dropped.
    pub fn induced_subgraph(&self, vs: &BTreeSet<Label>) -> Result<Graph, GraphError> {
        let mut idx = Vec::with_capacity(vs.len());
        for &v in vs {
            idx.push(self.require(v)?);
        }
        let mut edges = Vec::new();
        for &i in &idx {
            for &j in self.neighbor_indices(i) {
                let lj = self.labels[j as usize];
                if j as usize > i && vs.contains(&lj) {
                    edges.push((self.labels[i], lj));
                }
            }
        }
        let levels = self
            .levels
            .as_ref()
            .map(|lv| idx.iter().map(|&i| lv[i]).collect());
        Graph::build(vs.iter().copied().collect(), edges, levels, None)
    }

    fn require(&self, v: Label) -> Result<usize, GraphError> {
        self.index_of(v).ok_or(GraphError::UnknownVertex(v))
    }
}

/// Graphs compare by vertex labels, edges and level metadata.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.offsets == other.offsets
            && self.adjacency == other.adjacency
            && self.levels == other.levels
    }
}

impl Eq for Graph {}

/// A set of vertex labels. Orders lexicographically by sorted members.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<Label>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Label) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Label) -> bool {
        self.0.insert(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<Label> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<Label> {
        self.0.iter().copied().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    /// Checks that every member is a vertex of `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        match self.iter().find(|&v| !g.contains(v)) {
            Some(v) => Err(GraphError::UnknownVertex(v)),
            None => Ok(()),
        }
    }
}

impl FromIterator<Label> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Label; N]> for VertexSet {
    fn from(arr: [Label; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl Extend<Label> for VertexSet {
    fn extend<I: IntoIterator<Item = Label>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The set N(v) ∩ S for one vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub vertex: Label,
    pub in_set_neighbors: Vec<Label>,
}
