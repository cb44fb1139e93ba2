//! Arrival schedules: strictly increasing times starting at 1, possibly ending in ∞.

use crate::arrivals::InterarrivalSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// An arrival time; `Infinite` is a sentinel, never a large integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArrivalTime {
    Finite(u64),
    Infinite,
}

impl fmt::Display for ArrivalTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrivalTime::Finite(t) => write!(f, "{t}"),
            ArrivalTime::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for ArrivalTime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ArrivalTime::Infinite);
        }
        s.parse::<u64>()
            .map(ArrivalTime::Finite)
            .map_err(|e| Error::Parse(format!("arrival time {s:?}: {e}")))
    }
}

/// How a schedule was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Fixed,
    Constant { d: u64 },
    Iid(InterarrivalSpec),
    Crp { alpha: f64, theta: f64 },
    Doubled(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Fixed => write!(f, "fixed"),
            Provenance::Constant { d } => write!(f, "constant({d})"),
            Provenance::Iid(spec) => write!(f, "iid({spec})"),
            Provenance::Crp { alpha, theta } => write!(f, "crp({alpha},{theta})"),
            Provenance::Doubled(base) => write!(f, "doubled({base})"),
        }
    }
}

/// Finite arrival times `t_1 = 1 < t_2 < … < t_K`, with `t_k = ∞` for `k > K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrivalSchedule {
    times: Vec<u64>,
    provenance: Provenance,
}

impl ArrivalSchedule {
    pub fn from_finite(times: Vec<u64>, provenance: Provenance) -> Result<Self> {
        match times.first() {
            Some(1) => {}
            Some(t) => return Err(Error::BadSchedule(format!("t_1 must be 1, got {t}"))),
            None => return Err(Error::BadSchedule("empty schedule".into())),
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::BadSchedule(format!(
                "not strictly increasing: t_{} = {} then t_{} = {}",
                i + 1,
                times[i],
                i + 2,
                times[i + 1]
            )));
        }
        Ok(ArrivalSchedule { times, provenance })
    }

    /// `(1, ∞, …)`: a single vertex collecting every end.
    pub fn single_vertex() -> Self {
        ArrivalSchedule { times: vec![1], provenance: Provenance::Fixed }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// The finite prefix; `finite_times()[k-1] = t_k`.
    pub fn finite_times(&self) -> &[u64] {
        &self.times
    }

    pub fn num_finite(&self) -> usize {
        self.times.len()
    }

    /// `t_k` for 1-based `k`.
    pub fn time(&self, k: usize) -> ArrivalTime {
        assert!(k >= 1, "arrival indices are 1-based");
        match self.times.get(k - 1) {
            Some(&t) => ArrivalTime::Finite(t),
            None => ArrivalTime::Infinite,
        }
    }

    /// All `t_k` even for `k > 1`; exactly the schedules whose graphs stay connected.
    pub fn in_t2(&self) -> bool {
        self.times[1..].iter().all(|t| t % 2 == 0)
    }

    /// Interarrival times `Δ_2, …, Δ_K`.
    pub fn interarrivals(&self) -> Vec<u64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Number of vertices present after `n` ends.
    pub fn vertices_by(&self, n: u64) -> usize {
        self.times.partition_point(|&t| t <= n)
    }

    /// The first `k` arrival times, followed by ∞.
    pub fn truncated(&self, k: usize) -> ArrivalSchedule {
        ArrivalSchedule { times: self.times[..k.min(self.times.len())].to_vec(), provenance: self.provenance.clone() }
    }

    pub fn to_raw(&self) -> Vec<ArrivalTime> {
        self.times.iter().map(|&t| ArrivalTime::Finite(t)).chain(std::iter::once(ArrivalTime::Infinite)).collect()
    }
}

/// Validates a raw sequence over ℕ ∪ {∞}.
pub fn validate_schedule(raw: &[ArrivalTime]) -> Result<ArrivalSchedule> {
    let mut finite = Vec::new();
    let mut seen_inf = false;
    for (i, t) in raw.iter().enumerate() {
        match *t {
            ArrivalTime::Infinite => seen_inf = true,
            ArrivalTime::Finite(t) if seen_inf => {
                return Err(Error::BadSchedule(format!("finite time {t} at position {} after ∞", i + 1)))
            }
            ArrivalTime::Finite(t) => finite.push(t),
        }
    }
    ArrivalSchedule::from_finite(finite, Provenance::Fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArrivalTime::*;

    #[test]
    fn examples() {
        let s = validate_schedule(&[Finite(1), Finite(2), Finite(4), Infinite, Infinite]).unwrap();
        assert!(s.in_t2());
        assert_eq!(s.time(3), Finite(4));
        assert_eq!(s.time(4), Infinite);
        let s = validate_schedule(&[Finite(1), Finite(3), Finite(5)]).unwrap();
        assert!(!s.in_t2());
        assert!(matches!(validate_schedule(&[Finite(2), Finite(3)]), Err(Error::BadSchedule(_))));
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(validate_schedule(&[Finite(1), Finite(1)]).is_err());
        assert!(validate_schedule(&[Finite(1), Infinite, Finite(5)]).is_err());
        assert!(validate_schedule(&[]).is_err());
        assert!(validate_schedule(&[Infinite]).is_err());
    }

    #[test]
    fn lookups() {
        let s = ArrivalSchedule::from_finite(vec![1, 3, 5], Provenance::Fixed).unwrap();
        assert_eq!(s.vertices_by(1), 1);
        assert_eq!(s.vertices_by(4), 2);
        assert_eq!(s.vertices_by(100), 3);
        assert_eq!(s.interarrivals(), vec![2, 2]);
        assert!(ArrivalSchedule::single_vertex().in_t2());
        assert_eq!("inf".parse::<ArrivalTime>().unwrap(), Infinite);
        assert_eq!(Finite(3).to_string(), "3");
    }
}
