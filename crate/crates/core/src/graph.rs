//! Label sequences and the multigraph view derived from them.
//!
//! A graph is stored as the sequence of vertex labels in edge-end order: ends
//! `2i-1, 2i` form edge `i`. Labels are 1-based and appear in order, so the first
//! label is 1 and no label exceeds the running maximum by more than one.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Label = u32;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Label>", into = "Vec<Label>")]
pub struct LabelSequence(Vec<Label>);

impl LabelSequence {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        check_order_of_appearance(&labels)?;
        Ok(LabelSequence(labels))
    }

    /// Callers guarantee the order-of-appearance rule.
    pub(crate) fn from_vec_unchecked(labels: Vec<Label>) -> Self {
        debug_assert!(check_order_of_appearance(&labels).is_ok());
        LabelSequence(labels)
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Label> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    /// Complete edges; a trailing odd end is left out.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.0.chunks_exact(2).map(|e| (e[0], e[1]))
    }

    /// The unpaired last end when the length is odd.
    pub fn dangling_end(&self) -> Option<Label> {
        if self.0.len() % 2 == 1 {
            self.0.last().copied()
        } else {
            None
        }
    }

    pub fn prefix(&self, n: usize) -> LabelSequence {
        LabelSequence(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl TryFrom<Vec<Label>> for LabelSequence {
    type Error = Error;
    fn try_from(v: Vec<Label>) -> Result<Self> {
        LabelSequence::new(v)
    }
}

impl From<LabelSequence> for Vec<Label> {
    fn from(l: LabelSequence) -> Self {
        l.0
    }
}

pub(crate) fn check_order_of_appearance(labels: &[Label]) -> Result<()> {
    let mut max = 0;
    for (index, &l) in labels.iter().enumerate() {
        if l == 0 {
            return Err(Error::MalformedSequence { index, reason: "labels are 1-based".into() });
        }
        if l > max + 1 {
            let reason = format!("label {l} appears before label {}", max + 1);
            return Err(Error::MalformedSequence { index, reason });
        }
        max = max.max(l);
    }
    Ok(())
}

/// Degrees, vertex count and arrival times of a label sequence. No adjacency is kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultigraphView {
    labels: LabelSequence,
    degrees: Vec<u64>,
    arrival_times: Vec<u64>,
}

impl MultigraphView {
    pub fn new(labels: LabelSequence) -> Self {
        let mut degrees: Vec<u64> = Vec::new();
        let mut arrival_times = Vec::new();
        for (i, &l) in labels.as_slice().iter().enumerate() {
            let v = l as usize;
            if v > degrees.len() {
                degrees.push(0);
                arrival_times.push(i as u64 + 1);
            }
            degrees[v - 1] += 1;
        }
        MultigraphView { labels, degrees, arrival_times }
    }

    pub fn labels(&self) -> &LabelSequence {
        &self.labels
    }

    pub fn into_labels(self) -> LabelSequence {
        self.labels
    }

    /// `degrees()[k-1]` is the degree of vertex `k`.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_edge_ends(&self) -> usize {
        self.labels.len()
    }

    /// `arrival_times()[k-1]` is the 1-based index of the first occurrence of label `k`.
    pub fn arrival_times(&self) -> &[u64] {
        &self.arrival_times
    }

    /// Number of complete edges after which the graph is first disconnected, or
    /// `None` if every prefix made of complete edges is connected.
    pub fn first_disconnected_prefix(&self) -> Option<usize> {
        first_disconnected_prefix(self.labels.as_slice())
    }

    pub fn is_prefix_connected(&self) -> bool {
        self.first_disconnected_prefix().is_none()
    }
}

pub fn multigraph_from_labels(labels: &[Label]) -> Result<MultigraphView> {
    Ok(MultigraphView::new(LabelSequence::new(labels.to_vec())?))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn push(&mut self) {
        let n = self.parent.len();
        self.parent.push(n);
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn first_disconnected_prefix(labels: &[Label]) -> Option<usize> {
    let mut uf = UnionFind { parent: Vec::new() };
    let mut components = 0usize;
    for (i, e) in labels.chunks_exact(2).enumerate() {
        for &l in e {
            while uf.parent.len() < l as usize {
                uf.push();
                components += 1;
            }
        }
        if uf.union(e[0] as usize - 1, e[1] as usize - 1) {
            components -= 1;
        }
        if components > 1 {
            return Some(i + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_end() {
        let g = multigraph_from_labels(&[1]).unwrap();
        assert_eq!(g.degrees(), &[1]);
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.arrival_times(), &[1]);
    }

    #[test]
    fn hand_counted_degrees() {
        let g = multigraph_from_labels(&[1, 1, 2, 1]).unwrap();
        assert_eq!(g.degrees(), &[3, 1]);
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.arrival_times(), &[1, 3]);
        assert_eq!(g.num_edge_ends(), 4);
    }

    #[test]
    fn skipped_label_is_malformed() {
        match multigraph_from_labels(&[1, 3]) {
            Err(Error::MalformedSequence { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        match multigraph_from_labels(&[2]) {
            Err(Error::MalformedSequence { index, .. }) => assert_eq!(index, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edges_and_dangling_end() {
        let l = LabelSequence::new(vec![1, 1, 2]).unwrap();
        assert_eq!(l.edges().collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(l.dangling_end(), Some(2));
    }

    #[test]
    fn connectivity() {
        // (1,1) then (2,2): second edge is a separate component.
        let g = multigraph_from_labels(&[1, 1, 2, 2]).unwrap();
        assert_eq!(g.first_disconnected_prefix(), Some(2));
        let g = multigraph_from_labels(&[1, 2, 2, 3, 1, 1]).unwrap();
        assert!(g.is_prefix_connected());
        // Disconnected for a while, reconnected later: still reported.
        let g = multigraph_from_labels(&[1, 1, 2, 2, 1, 2]).unwrap();
        assert_eq!(g.first_disconnected_prefix(), Some(2));
    }

    #[test]
    fn serde_rejects_malformed() {
        assert!(serde_json::from_str::<LabelSequence>("[1,3]").is_err());
        let l: LabelSequence = serde_json::from_str("[1,2,1]").unwrap();
        assert_eq!(serde_json::to_string(&l).unwrap(), "[1,2,1]");
    }
}
