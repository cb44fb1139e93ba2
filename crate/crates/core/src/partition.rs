//! Partitions of `{1..n}` as label sequences: element `i` sits in block `l_i`, blocks
//! numbered by their least element. The map to graphs is the identity on labels.

use crate::error::{bad_params, Error, Result};
use crate::graph::{check_order_of_appearance, Label, LabelSequence, MultigraphView};
use crate::likelihood::{crp_marginal_log_prob, log_prob_labels};
use crate::params::ModelParams;
use crate::report::TestReport;
use crate::samplers::sample_db;
use crate::schedule::ArrivalSchedule;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    block_labels: LabelSequence,
}

impl Partition {
    pub fn from_labels(labels: Vec<Label>) -> Result<Self> {
        Ok(Partition { block_labels: LabelSequence::new(labels)? })
    }

    /// Blocks as sets of 1-based elements, in any order; must cover `1..n` exactly once.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(bad_params("empty block"));
            }
            for &e in block {
                if e == 0 || e > n || owner[e - 1] != usize::MAX {
                    return Err(bad_params(format!("element {e} missing, repeated or out of range")));
                }
                owner[e - 1] = b;
            }
        }
        // Relabel blocks by order of first appearance.
        let mut relabel = vec![0 as Label; blocks.len()];
        let mut next = 0;
        let labels = owner
            .iter()
            .map(|&b| {
                if relabel[b] == 0 {
                    next += 1;
                    relabel[b] = next;
                }
                relabel[b]
            })
            .collect();
        Ok(Partition { block_labels: LabelSequence::from_vec_unchecked(labels) })
    }

    pub fn labels(&self) -> &LabelSequence {
        &self.block_labels
    }

    pub fn len(&self) -> usize {
        self.block_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_labels.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_labels.num_vertices()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.block_labels.as_slice().iter().enumerate() {
            blocks[l as usize - 1].push(i + 1);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<u64> {
        MultigraphView::new(self.block_labels.clone()).degrees().to_vec()
    }

    /// Adds element `n+1` to block `j` (`j = num_blocks + 1` opens a new block).
    pub fn append(&self, j: Label) -> Result<Partition> {
        let mut v = self.block_labels.as_slice().to_vec();
        v.push(j);
        check_order_of_appearance(&v)?;
        Ok(Partition { block_labels: LabelSequence::from_vec_unchecked(v) })
    }
}

/// The graph whose label sequence is the block-label sequence of the partition.
pub fn phi(partition: &Partition) -> LabelSequence {
    partition.block_labels.clone()
}

pub fn phi_inverse(labels: &LabelSequence) -> Partition {
    Partition { block_labels: labels.clone() }
}

/// Least element of each block; equal to the arrival times of `phi(partition)`.
pub fn record_indices(partition: &Partition) -> Vec<u64> {
    MultigraphView::new(partition.block_labels.clone()).arrival_times().to_vec()
}

/// Every partition of `{1..n}` (restricted growth strings), in lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<Label> = Vec::with_capacity(n);
    fn rec(n: usize, max: Label, cur: &mut Vec<Label>, out: &mut Vec<Partition>) {
        if cur.len() == n {
            out.push(Partition { block_labels: LabelSequence::from_vec_unchecked(cur.clone()) });
            return;
        }
        for l in 1..=max + 1 {
            cur.push(l);
            rec(n, max.max(l), cur, out);
            cur.pop();
        }
    }
    if n > 0 {
        cur.push(1);
        rec(n, 1, &mut cur, &mut out);
    } else {
        out.push(Partition { block_labels: LabelSequence::default() });
    }
    out
}

/// A probability law on finite partitions.
pub trait PartitionLaw {
    /// `ln P(Π_n = π)`, `-∞` for impossible partitions.
    fn log_prob(&self, partition: &Partition) -> Result<f64>;

    /// Whether `partition` may be extended at all; laws conditioned on arrival
    /// times only define coherent probabilities along consistent prefixes.
    fn admits(&self, _partition: &Partition) -> bool {
        true
    }
}

/// The urn with arrival times drawn from CRP(α,θ), marginalized exactly.
#[derive(Clone, Copy, Debug)]
pub struct CrpMarginalLaw {
    pub alpha: f64,
    pub theta: f64,
}

impl PartitionLaw for CrpMarginalLaw {
    fn log_prob(&self, partition: &Partition) -> Result<f64> {
        crp_marginal_log_prob(self.alpha, self.theta, partition.labels())
    }
}

/// The urn conditioned on a fixed arrival schedule.
#[derive(Clone, Debug)]
pub struct ConditionalLaw {
    pub params: ModelParams,
    pub schedule: ArrivalSchedule,
}

impl PartitionLaw for ConditionalLaw {
    fn log_prob(&self, partition: &Partition) -> Result<f64> {
        Ok(log_prob_labels(&self.params, &self.schedule, partition.labels())?.value)
    }

    fn admits(&self, partition: &Partition) -> bool {
        self.log_prob(partition).map(|v| v > f64::NEG_INFINITY).unwrap_or(false)
    }
}

/// Checks `P(Π_{n−1} = π) = Σ_j P(Π_n = π ∪ {n → j})` over every partition `π` of
/// `{1..n−1}` the law admits; reports the largest absolute violation.
pub fn check_coherence<L: PartitionLaw>(law: &L, n: usize, cap: usize, threshold: f64) -> Result<TestReport> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n < 2 {
        return Err(bad_params("coherence needs n >= 2"));
    }
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for p in enumerate_partitions(n - 1) {
        if !law.admits(&p) {
            continue;
        }
        let lhs = law.log_prob(&p)?.exp();
        let mut rhs = 0.0;
        for j in 1..=(p.num_blocks() + 1) as Label {
            rhs += law.log_prob(&p.append(j)?)?.exp();
        }
        worst = worst.max((lhs - rhs).abs());
        checked += 1;
    }
    Ok(TestReport::exact(format!("coherence(n={n})"), worst, threshold, checked as u64))
}

/// The (α,t)-urn: a ball of a new colour at each arrival time, otherwise colour `j`
/// with weight `|B_j| − α`. Runs the degree-biased sampler and reads it as a partition.
pub fn sample_urn<R: Rng + ?Sized>(params: &ModelParams, schedule: &ArrivalSchedule, n: u64, rng: &mut R) -> Result<Partition> {
    Ok(phi_inverse(&sample_db(params, schedule, n, rng)?.labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_example() {
        let p = Partition::from_blocks(&[vec![1, 2], vec![3]]).unwrap();
        let l = phi(&p);
        assert_eq!(l.as_slice(), &[1, 1, 2]);
        assert_eq!(l.edges().collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(l.dangling_end(), Some(2));
        assert_eq!(phi_inverse(&l), p);
    }

    #[test]
    fn record_index_examples() {
        let p = Partition::from_labels(vec![1, 1, 2, 1]).unwrap();
        assert_eq!(record_indices(&p), vec![1, 3]);
        assert_eq!(record_indices(&Partition::from_labels(vec![1, 1, 1]).unwrap()), vec![1]);
        let p = Partition::from_blocks(&[vec![4, 2], vec![3, 1]]).unwrap();
        assert_eq!(p.labels().as_slice(), &[1, 2, 1, 2]);
        assert_eq!(p.blocks(), vec![vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(enumerate_partitions(n).len(), b);
        }
    }

    #[test]
    fn bad_blocks() {
        assert!(Partition::from_blocks(&[vec![1], vec![1]]).is_err());
        assert!(Partition::from_blocks(&[vec![1], vec![]]).is_err());
        assert!(Partition::from_blocks(&[vec![1, 3]]).is_err());
        assert!(Partition::from_labels(vec![1, 1]).unwrap().append(3).is_err());
    }
}
