use super::fenwick::Fenwick;
use super::SamplerOutput;
use crate::arrivals::{ArrivalProcess, FixedArrivals};
use crate::error::{bad_params, Result};
use crate::graph::{Label, LabelSequence};
use crate::params::ModelParams;
use crate::scalar::Field;
use crate::schedule::ArrivalSchedule;
use rand::Rng;

pub const DEFAULT_FENWICK_THRESHOLD: usize = 1024;

/// Degrees of a growing graph and the α-degree-biased draw `P_α`.
///
/// With `k` vertices and `m` ends, vertex `j` is drawn with probability
/// `(c_j − α)/(m − αk)`. Both paths locate the smallest `j` with
/// `C_j − αj > u`, where `C_j` is the integer prefix count, so a cumulative scan and
/// the Fenwick descent pick the same vertex for the same `u`.
#[derive(Clone, Debug)]
pub struct DegreeBiasedState {
    alpha: f64,
    counts: Vec<u64>,
    ends: u64,
    index: Option<Fenwick>,
    threshold: usize,
}

impl DegreeBiasedState {
    pub fn new(alpha: f64) -> Self {
        Self::with_threshold(alpha, DEFAULT_FENWICK_THRESHOLD)
    }

    /// Uses a linear scan while there are at most `threshold` vertices.
    pub fn with_threshold(alpha: f64, threshold: usize) -> Self {
        DegreeBiasedState { alpha, counts: Vec::new(), ends: 0, index: None, threshold }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ends(&self) -> u64 {
        self.ends
    }

    pub fn num_vertices(&self) -> usize {
        self.counts.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.counts
    }

    /// Adds a vertex holding one end.
    pub fn add_vertex(&mut self) -> Label {
        self.counts.push(1);
        self.ends += 1;
        if let Some(f) = &mut self.index {
            f.push(1);
        } else if self.counts.len() > self.threshold {
            self.index = Some(Fenwick::from_counts(&self.counts));
        }
        self.counts.len() as Label
    }

    /// Adds an end at an existing vertex.
    pub fn add_end(&mut self, label: Label) {
        let j = label as usize;
        self.counts[j - 1] += 1;
        self.ends += 1;
        if let Some(f) = &mut self.index {
            f.add(j, 1);
        }
    }

    /// Total weight `m − αk`.
    pub fn total_weight(&self) -> f64 {
        self.ends as f64 - self.alpha * self.counts.len() as f64
    }

    /// The vertex selected by a uniform `u01 ∈ [0,1)`.
    pub fn select(&self, u01: f64) -> Label {
        let u = u01 * self.total_weight();
        let j = match &self.index {
            Some(f) => f.search(self.alpha, u),
            None => {
                let mut acc = 0u64;
                let mut pick = self.counts.len();
                for (i, &c) in self.counts.iter().enumerate() {
                    acc += c;
                    if acc as f64 - self.alpha * (i + 1) as f64 > u {
                        pick = i + 1;
                        break;
                    }
                }
                pick
            }
        };
        j as Label
    }

    /// A draw from `P_α`; needs at least one vertex.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Label {
        self.select(rng.random())
    }
}

/// `P_α(j)` for every vertex, in any field (exact with rationals).
pub fn attachment_probabilities<F: Field>(degrees: &[u64], alpha: &F) -> Vec<F> {
    let k = F::from_usize(degrees.len()).expect("count representable");
    let m = F::from_u64(degrees.iter().sum()).expect("count representable");
    let total = m - alpha.clone() * k;
    degrees
        .iter()
        .map(|&c| (F::from_u64(c).expect("count representable") - alpha.clone()) / total.clone())
        .collect()
}

/// Runs the degree-biased scheme for `n_ends` ends under an online arrival rule.
pub fn run_degree_biased<P: ArrivalProcess, R: Rng + ?Sized>(
    state: &mut DegreeBiasedState,
    arrivals: &mut P,
    n_ends: u64,
    rng: &mut R,
) -> Vec<Label> {
    let mut labels = Vec::with_capacity(n_ends as usize);
    for n in 1..=n_ends {
        let l = if state.num_vertices() == 0 || arrivals.is_arrival(n, state.num_vertices(), rng) {
            state.add_vertex()
        } else {
            let l = state.draw(rng);
            state.add_end(l);
            l
        };
        labels.push(l);
    }
    labels
}

/// Samples `n_ends` ends of an (α, t)-graph: a new vertex at each arrival time,
/// otherwise a draw from `P_α` given everything so far.
pub fn sample_db<R: Rng + ?Sized>(
    params: &ModelParams,
    schedule: &ArrivalSchedule,
    n_ends: u64,
    rng: &mut R,
) -> Result<SamplerOutput> {
    if n_ends == 0 {
        return Err(bad_params("n_ends must be >= 1"));
    }
    let mut state = DegreeBiasedState::new(params.alpha());
    let labels = run_degree_biased(&mut state, &mut FixedArrivals::new(schedule), n_ends, rng);
    Ok(SamplerOutput { labels: LabelSequence::from_vec_unchecked(labels), psi: None, schedule: schedule.clone() })
}
