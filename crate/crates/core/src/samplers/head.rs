use crate::arrivals::ArrivalProcess;
use rand::Rng;

/// Degrees of the first `r` vertices of a degree-biased run. The remaining vertices
/// are pooled, so a step costs O(r) regardless of the graph size.
#[derive(Clone, Debug)]
pub struct HeadTracker {
    alpha: f64,
    r: usize,
    head: Vec<u64>,
    ends: u64,
    k: usize,
}

impl HeadTracker {
    pub fn new(alpha: f64, r: usize) -> Self {
        HeadTracker { alpha, r, head: Vec::with_capacity(r), ends: 0, k: 0 }
    }

    pub fn head_degrees(&self) -> &[u64] {
        &self.head
    }

    pub fn num_vertices(&self) -> usize {
        self.k
    }

    pub fn ends(&self) -> u64 {
        self.ends
    }

    /// Places the next end.
    pub fn step<P: ArrivalProcess, R: Rng + ?Sized>(&mut self, arrivals: &mut P, rng: &mut R) {
        let n = self.ends + 1;
        if self.k == 0 || arrivals.is_arrival(n, self.k, rng) {
            self.k += 1;
            if self.head.len() < self.r {
                self.head.push(1);
            }
        } else {
            let u = rng.random::<f64>() * (self.ends as f64 - self.alpha * self.k as f64);
            let mut acc = 0.0;
            for d in self.head.iter_mut() {
                acc += *d as f64 - self.alpha;
                if u < acc {
                    *d += 1;
                    break;
                }
            }
        }
        self.ends = n;
    }

    /// Steps until `n` ends are placed.
    pub fn advance_to<P: ArrivalProcess, R: Rng + ?Sized>(&mut self, n: u64, arrivals: &mut P, rng: &mut R) {
        while self.ends < n {
            self.step(arrivals, rng);
        }
    }
}
