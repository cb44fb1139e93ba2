use crate::arrivals::ArrivalProcess;
use crate::graph::{LabelSequence, MultigraphView};
use crate::samplers::{DegreeBiasedState, HeadTracker};
use rand::Rng;
use serde::Serialize;

/// State at one checkpoint `n` (ends placed).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    pub num_vertices: usize,
    /// Degrees of vertices `1..=r` (fewer if not yet arrived).
    pub head_degrees: Vec<u64>,
    /// `histogram[d-1]` = number of vertices of degree `d ≤ d_max`.
    pub histogram: Vec<u64>,
    /// Vertices of degree above `d_max`.
    pub tail_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub r: usize,
    pub d_max: usize,
    pub checkpoints: Vec<Checkpoint>,
    /// γ of the linear regime, when known.
    pub gamma: Option<f64>,
    /// Fitted vertex-growth exponent, when the checkpoints span two decades.
    pub sigma: Option<f64>,
}

/// `1, 2, 5, 10, 20, 50, … ≤ n_max`, plus `n_max` itself.
pub fn log_checkpoints(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for m in [1u64, 2, 5] {
            match scale.checked_mul(m) {
                Some(v) if v <= n_max => out.push(v),
                _ => break 'outer,
            }
        }
        scale = match scale.checked_mul(10) {
            Some(s) => s,
            None => break,
        };
    }
    if out.last() != Some(&n_max) && n_max > 0 {
        out.push(n_max);
    }
    out
}

/// Degree histogram maintained in O(1) per end.
struct Histogram {
    d_max: usize,
    counts: Vec<u64>,
    tail: u64,
}

impl Histogram {
    fn new(d_max: usize) -> Self {
        Histogram { d_max, counts: vec![0; d_max], tail: 0 }
    }

    fn bump(&mut self, from: u64, to: u64) {
        for (d, delta) in [(from, -1i64), (to, 1)] {
            if d == 0 {
                continue;
            }
            let slot = if d as usize <= self.d_max { &mut self.counts[d as usize - 1] } else { &mut self.tail };
            *slot = (*slot as i64 + delta) as u64;
        }
    }
}

impl TrajectoryStats {
    pub fn final_checkpoint(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    fn fill_sigma(mut self) -> Self {
        self.sigma = super::density_exponent(&self).ok().map(|d| d.sigma);
        self
    }
}

/// Simulates `n_ends` ends and records checkpoints. With `d_max = 0` only the first
/// `r` degrees are tracked, which is much cheaper.
pub fn simulate_trajectory<P: ArrivalProcess, R: Rng + ?Sized>(
    alpha: f64,
    arrivals: &mut P,
    n_ends: u64,
    r: usize,
    d_max: usize,
    checkpoints: &[u64],
    rng: &mut R,
) -> TrajectoryStats {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().filter(|&c| c >= 1 && c <= n_ends).peekable();
    if d_max == 0 {
        let mut head = HeadTracker::new(alpha, r);
        while let Some(c) = next.next() {
            head.advance_to(c, arrivals, rng);
            out.push(Checkpoint {
                n: c,
                num_vertices: head.num_vertices(),
                head_degrees: head.head_degrees().to_vec(),
                histogram: vec![],
                tail_count: head.num_vertices() as u64,
            });
        }
    } else {
        let mut state = DegreeBiasedState::new(alpha);
        let mut hist = Histogram::new(d_max);
        for n in 1..=n_ends {
            if next.peek().is_none() {
                break;
            }
            if state.num_vertices() == 0 || arrivals.is_arrival(n, state.num_vertices(), rng) {
                state.add_vertex();
                hist.bump(0, 1);
            } else {
                let l = state.draw(rng);
                let d = state.degrees()[l as usize - 1];
                state.add_end(l);
                hist.bump(d, d + 1);
            }
            if next.peek() == Some(&n) {
                next.next();
                out.push(Checkpoint {
                    n,
                    num_vertices: state.num_vertices(),
                    head_degrees: state.degrees()[..r.min(state.num_vertices())].to_vec(),
                    histogram: hist.counts.clone(),
                    tail_count: hist.tail,
                });
            }
        }
    }
    TrajectoryStats { r, d_max, checkpoints: out, gamma: None, sigma: None }.fill_sigma()
}

/// Checkpoint statistics of an existing label sequence.
pub fn trajectory_from_labels(labels: &LabelSequence, r: usize, d_max: usize, checkpoints: &[u64]) -> TrajectoryStats {
    let mut degrees: Vec<u64> = Vec::new();
    let mut hist = Histogram::new(d_max);
    let mut out = Vec::new();
    let mut next = checkpoints.iter().copied().filter(|&c| c >= 1 && c as usize <= labels.len()).peekable();
    for (i, &l) in labels.as_slice().iter().enumerate() {
        let n = i as u64 + 1;
        let v = l as usize;
        if v > degrees.len() {
            degrees.push(0);
        }
        let d = degrees[v - 1];
        degrees[v - 1] += 1;
        if d_max > 0 {
            hist.bump(d, d + 1);
        }
        if next.peek() == Some(&n) {
            next.next();
            out.push(Checkpoint {
                n,
                num_vertices: degrees.len(),
                head_degrees: degrees[..r.min(degrees.len())].to_vec(),
                histogram: hist.counts.clone(),
                tail_count: if d_max > 0 { hist.tail } else { degrees.len() as u64 },
            });
        }
    }
    TrajectoryStats { r, d_max, checkpoints: out, gamma: None, sigma: None }.fill_sigma()
}

/// Empirical degree pmf `p_d = m_d/|V|` for `d ≤ d_max`, tail mass separate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalPmf {
    /// `pmf[d-1] = p_d`.
    pub pmf: Vec<f64>,
    pub tail_mass: f64,
    pub num_vertices: usize,
}

pub fn degree_histogram(view: &MultigraphView, d_max: usize) -> EmpiricalPmf {
    let (counts, tail) = crate::stats::degree_counts(view.degrees(), d_max);
    let k = view.num_vertices().max(1) as f64;
    EmpiricalPmf {
        pmf: counts.iter().map(|&c| c as f64 / k).collect(),
        tail_mass: tail as f64 / k,
        num_vertices: view.num_vertices(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledRow {
    pub n: u64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledDegrees {
    pub exponent: f64,
    pub rows: Vec<ScaledRow>,
    /// `max_j |x_j(n_L)/x_j(n_ref) − 1|`, `n_L` the last checkpoint and `n_ref` the
    /// last checkpoint at or below `n_L/10`.
    pub drift: Option<f64>,
}

/// `n^{−1/γ} (deg_1(n), …, deg_r(n))` at every checkpoint; use `γ = 1` in the
/// sub-linear regime.
pub fn scaled_degrees(trajectory: &TrajectoryStats, r: usize, gamma: f64) -> ScaledDegrees {
    let exponent = 1.0 / gamma;
    let rows: Vec<ScaledRow> = trajectory
        .checkpoints
        .iter()
        .map(|c| ScaledRow {
            n: c.n,
            values: c.head_degrees.iter().take(r).map(|&d| d as f64 * (c.n as f64).powf(-exponent)).collect(),
        })
        .collect();
    let drift = rows.last().and_then(|last| {
        let reference = rows.iter().rev().find(|row| row.n * 10 <= last.n)?;
        let m = last.values.len().min(reference.values.len());
        if m == 0 {
            return None;
        }
        Some((0..m).map(|j| (last.values[j] / reference.values[j] - 1.0).abs()).fold(0.0, f64::max))
    });
    ScaledDegrees { exponent, rows, drift }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::multigraph_from_labels;

    #[test]
    fn checkpoints_are_one_two_five() {
        assert_eq!(log_checkpoints(60), vec![1, 2, 5, 10, 20, 50, 60]);
        assert_eq!(log_checkpoints(100), vec![1, 2, 5, 10, 20, 50, 100]);
        assert_eq!(log_checkpoints(1), vec![1]);
    }

    #[test]
    fn histogram_examples() {
        let h = degree_histogram(&multigraph_from_labels(&[1, 1]).unwrap(), 5);
        assert_eq!(h.pmf[1], 1.0);
        let h = degree_histogram(&multigraph_from_labels(&[1, 1, 2, 1]).unwrap(), 5);
        assert_eq!(h.pmf[0], 0.5);
        assert_eq!(h.pmf[2], 0.5);
        assert_eq!(h.pmf.iter().sum::<f64>() + h.tail_mass, 1.0);
        let h = degree_histogram(&multigraph_from_labels(&[1, 1, 2, 1]).unwrap(), 2);
        assert_eq!(h.tail_mass, 0.5);
    }

    #[test]
    fn trajectory_from_labels_histograms_sum_to_vertices() {
        let l = LabelSequence::new(vec![1, 1, 2, 1, 3, 2, 2, 4, 1, 1]).unwrap();
        let t = trajectory_from_labels(&l, 2, 3, &log_checkpoints(10));
        for c in &t.checkpoints {
            assert_eq!(c.histogram.iter().sum::<u64>() + c.tail_count, c.num_vertices as u64);
        }
        let last = t.final_checkpoint().unwrap();
        assert_eq!(last.head_degrees, vec![5, 3]);
        assert_eq!(last.histogram, vec![2, 0, 1]);
        assert_eq!(last.tail_count, 1);
    }
}
