//! Monte Carlo checks of distributional identities for limits of scaled degrees.
//!
//! Each identity is a list of comparisons `lhs ≐ rhs`. Both sides are sampled
//! independently and compared by two-sample KS; vector identities are compared per
//! coordinate and through the product of coordinates.

use crate::arrivals::{constant_schedule, first_event, FixedArrivals};
use crate::dists::{beta, gamma, gen_ml_exact, stable};
use crate::error::{bad_params, Error, Result};
use crate::report::TestReport;
use crate::rng::{stream_at, Component, Stream};
use crate::samplers::{DegreeBiasedState, HeadTracker};
use crate::stats::{ks_two_sample, rank_correlation};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Pass threshold for comparisons whose sides are both drawn from exact laws.
pub const EXACT_THRESHOLD: f64 = 0.05;
/// Pass threshold when one side comes from a finite-`n` graph simulation.
pub const SIMULATION_THRESHOLD: f64 = 0.01;
/// Bound on `|ρ|` for the independence half of the beta-gamma algebra.
pub const CORRELATION_THRESHOLD: f64 = 0.01;
pub const MIN_SAMPLES: usize = 10_000;
pub const DEFAULT_SIMULATION_N: u64 = 1_000_000;

/// Where the limit variables `ξ` come from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum Route {
    /// Their product form.
    #[default]
    Exact,
    /// Scaled degrees of a graph simulated to `n` ends.
    Simulation { n: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrpForm {
    /// `𝒢_{T_r+θ}·ξ ≐ 𝒢_{T_r−rα}·(Ψ_j Π_{i>j}(1−Ψ_i))_j`.
    Joint,
    /// `ξ_j ≐ ℬ_{1−α, T_j−1+θ+α}`.
    Marginal,
    /// `ξ_j ℬ_{T_j+θ, Δ_{j+1}} ≐ ξ_{j+1}`.
    Conditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum YsForm {
    /// `𝒢_{T_r}^{1−β}·ξ ≐ 𝒢_{T_r}·(Ψ_j Π_{i>j}(1−Ψ_i))_j`.
    Joint,
    /// The four product forms of the marginal law of `ξ_j`.
    Marginal,
    /// `ξ_j 𝒢_{T_j}^{1−β} ≐ 𝒢_1`.
    GammaMarginal,
    /// `ξ_j ℬ^{1−β}_{T_j, Δ_{j+1}} ≐ ξ_{j+1}`.
    Conditional,
    /// `ξ_j ℬ_{T_j/(1−β), Δ_{j+1}/(1−β)} Π_{i=1}^{Δ_{j+1}} ℬ_{(T_j−1+i−β)/(1−β), β/(1−β)} ≐ ξ_{j+1}`.
    /// Its Mellin transform differs from that of `Conditional`, so this form fails.
    ConditionalProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityName {
    BetaGammaAlgebra,
    BetaProductSplit,
    PaLimits,
    CrpLimits,
    YsLimits,
    UrnImmigration,
}

impl IdentityName {
    pub const ALL: [IdentityName; 6] = [
        IdentityName::BetaGammaAlgebra,
        IdentityName::BetaProductSplit,
        IdentityName::PaLimits,
        IdentityName::CrpLimits,
        IdentityName::YsLimits,
        IdentityName::UrnImmigration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::BetaGammaAlgebra => "BETA_GAMMA_ALGEBRA",
            IdentityName::BetaProductSplit => "BETA_PRODUCT_SPLIT",
            IdentityName::PaLimits => "PA_LIMITS",
            IdentityName::CrpLimits => "CRP_LIMITS",
            IdentityName::YsLimits => "YS_LIMITS",
            IdentityName::UrnImmigration => "URN_IMMIGRATION",
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum IdentitySpec {
    BetaGammaAlgebra { a: f64, b: f64 },
    BetaProductSplit { a: f64, b: f64, c: f64 },
    /// Constant interarrivals `2d`; `which` selects one of the four identities.
    PaLimits { d: u64, alpha: f64, r: usize, which: u8, route: Route },
    /// Conditioned on the first `times.len()` arrival times.
    CrpLimits { alpha: f64, theta: f64, times: Vec<u64>, form: CrpForm },
    /// `α = 0` with i.i.d. `Geom(β)` interarrivals, conditioned on `times`.
    YsLimits { beta: f64, times: Vec<u64>, form: YsForm, route: Route },
    /// `which = 0` is the limit law itself (simulation route only); 1–3 its identities.
    UrnImmigration { w: u64, b: u64, beta: f64, which: u8, route: Route },
}

impl IdentitySpec {
    pub fn name(&self) -> IdentityName {
        match self {
            IdentitySpec::BetaGammaAlgebra { .. } => IdentityName::BetaGammaAlgebra,
            IdentitySpec::BetaProductSplit { .. } => IdentityName::BetaProductSplit,
            IdentitySpec::PaLimits { .. } => IdentityName::PaLimits,
            IdentitySpec::CrpLimits { .. } => IdentityName::CrpLimits,
            IdentitySpec::YsLimits { .. } => IdentityName::YsLimits,
            IdentitySpec::UrnImmigration { .. } => IdentityName::UrnImmigration,
        }
    }

    pub fn route(&self) -> Route {
        match self {
            IdentitySpec::PaLimits { route, .. }
            | IdentitySpec::YsLimits { route, .. }
            | IdentitySpec::UrnImmigration { route, .. } => *route,
            _ => Route::Exact,
        }
    }

    pub fn threshold(&self) -> f64 {
        match self.route() {
            Route::Exact => EXACT_THRESHOLD,
            Route::Simulation { .. } => SIMULATION_THRESHOLD,
        }
    }

    pub fn label(&self) -> String {
        let route = match self.route() {
            Route::Exact => String::new(),
            Route::Simulation { n } => format!(", simulated n={n}"),
        };
        match self {
            IdentitySpec::BetaGammaAlgebra { a, b } => format!("BETA_GAMMA_ALGEBRA(a={a}, b={b})"),
            IdentitySpec::BetaProductSplit { a, b, c } => format!("BETA_PRODUCT_SPLIT(a={a}, b={b}, c={c})"),
            IdentitySpec::PaLimits { d, alpha, r, which, .. } => {
                format!("PA_LIMITS[{which}](d={d}, alpha={alpha}, r={r}{route})")
            }
            IdentitySpec::CrpLimits { alpha, theta, times, form } => {
                format!("CRP_LIMITS {form:?}(alpha={alpha}, theta={theta}, T={times:?})")
            }
            IdentitySpec::YsLimits { beta, times, form, .. } => format!("YS_LIMITS {form:?}(beta={beta}, T={times:?}{route})"),
            IdentitySpec::UrnImmigration { w, b, beta, which, .. } => {
                format!("URN_IMMIGRATION[{which}](w={w}, b={b}, beta={beta}{route})")
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() { Ok(()) } else { Err(bad_params(format!("{name} must be positive, got {x}"))) }
        };
        if let Route::Simulation { n } = self.route() {
            if n < 100 {
                return Err(bad_params("simulation size must be >= 100"));
            }
        }
        match self {
            IdentitySpec::BetaGammaAlgebra { a, b } => pos("a", *a).and(pos("b", *b)),
            IdentitySpec::BetaProductSplit { a, b, c } => pos("a", *a).and(pos("b", *b)).and(pos("c", *c)),
            IdentitySpec::PaLimits { d, alpha, r, which, route } => {
                if *d == 0 || *r == 0 {
                    return Err(bad_params("PA_LIMITS needs d >= 1 and r >= 1"));
                }
                if !(*alpha < 1.0) || !alpha.is_finite() {
                    return Err(bad_params(format!("alpha must be < 1, got {alpha}")));
                }
                if !(1..=4).contains(which) {
                    return Err(bad_params("PA_LIMITS has identities 1 to 4"));
                }
                if *route == Route::Exact && *d != 1 {
                    return Err(bad_params("the product form of the PA limit is a Mittag-Leffler law only for d = 1; use the simulation route"));
                }
                Ok(())
            }
            IdentitySpec::CrpLimits { alpha, theta, times, .. } => {
                if !(0.0..1.0).contains(alpha) || !(*theta > -alpha) {
                    return Err(bad_params(format!("CRP needs alpha in [0,1), theta > -alpha, got ({alpha}, {theta})")));
                }
                check_times(times)
            }
            IdentitySpec::YsLimits { beta, times, .. } => {
                if !(*beta > 0.0 && *beta < 1.0) {
                    return Err(bad_params(format!("beta must lie in (0,1), got {beta}")));
                }
                check_times(times)
            }
            IdentitySpec::UrnImmigration { w, b, beta, which, route } => {
                if *w == 0 || *b == 0 {
                    return Err(bad_params("urn needs w, b >= 1"));
                }
                if !(*beta > 0.0 && *beta < 1.0) {
                    return Err(bad_params(format!("beta must lie in (0,1), got {beta}")));
                }
                match (which, route) {
                    (0, Route::Exact) => Err(bad_params("URN_IMMIGRATION[0] compares the limit with its own product form; use the simulation route")),
                    (0..=3, _) => Ok(()),
                    _ => Err(bad_params("URN_IMMIGRATION has identities 0 to 3")),
                }
            }
        }
    }
}

fn check_times(times: &[u64]) -> Result<()> {
    if times.first() != Some(&1) {
        return Err(bad_params("arrival times must start at 1"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad_params("arrival times must be strictly increasing"));
    }
    Ok(())
}

/// One `lhs ≐ rhs` comparison.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub name: String,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

/// Samples for every comparison of an identity, plus any extra checks.
#[derive(Clone, Debug, Default)]
pub struct IdentityDraws {
    pub comparisons: Vec<Comparison>,
    pub extra: Vec<TestReport>,
}

/// `(Ψ_j Π_{i=j+1}^{r} (1−Ψ_i))_{j≤r}` for `Ψ_1 = 1`, `Ψ_j ~ Beta(a, b_j)`.
fn stick_vector<R: Rng + ?Sized>(a: f64, b: impl Fn(usize) -> f64, r: usize, rng: &mut R) -> Vec<f64> {
    let psi: Vec<f64> = (1..=r).map(|j| if j == 1 { 1.0 } else { beta(a, b(j), rng) }).collect();
    let mut out = vec![0.0; r];
    let mut tail = 1.0;
    for j in (0..r).rev() {
        out[j] = psi[j] * tail;
        tail *= 1.0 - psi[j];
    }
    out
}

/// Draws `m` vectors from each side; expands to per-coordinate and product comparisons.
fn vector_comparisons<L, R>(name: &str, m: usize, mut lhs: L, mut rhs: R, streams: &mut StreamPair) -> Vec<Comparison>
where
    L: FnMut(&mut Stream) -> Vec<f64>,
    R: FnMut(&mut Stream) -> Vec<f64>,
{
    let left: Vec<Vec<f64>> = (0..m).map(|_| lhs(&mut streams.lhs)).collect();
    let right: Vec<Vec<f64>> = (0..m).map(|_| rhs(&mut streams.rhs)).collect();
    let dim = left[0].len();
    debug_assert_eq!(dim, right[0].len());
    let mut out: Vec<Comparison> = (0..dim)
        .map(|j| Comparison {
            name: if dim == 1 { name.to_string() } else { format!("{name} coordinate {}", j + 1) },
            lhs: left.iter().map(|v| v[j]).collect(),
            rhs: right.iter().map(|v| v[j]).collect(),
        })
        .collect();
    if dim > 1 {
        out.push(Comparison {
            name: format!("{name} product"),
            lhs: left.iter().map(|v| v.iter().product()).collect(),
            rhs: right.iter().map(|v| v.iter().product()).collect(),
        });
    }
    out
}

fn scalar_comparison<L, R>(name: String, m: usize, mut lhs: L, mut rhs: R, streams: &mut StreamPair) -> Comparison
where
    L: FnMut(&mut Stream) -> f64,
    R: FnMut(&mut Stream) -> f64,
{
    Comparison { name, lhs: (0..m).map(|_| lhs(&mut streams.lhs)).collect(), rhs: (0..m).map(|_| rhs(&mut streams.rhs)).collect() }
}

struct StreamPair {
    lhs: Stream,
    rhs: Stream,
}

impl StreamPair {
    fn new(seed: u64) -> Self {
        StreamPair { lhs: stream_at(seed, Component::Identity, 0), rhs: stream_at(seed, Component::Identity, 1) }
    }
}

/// `ξ` for the PA limit with `d = 1`: `M_{1/ᾱ, r−1/ᾱ}·(Ψ_j Π(1−Ψ_i))_j`.
fn pa_xi_exact<R: Rng + ?Sized>(alpha: f64, r: usize, rng: &mut R) -> Vec<f64> {
    let ab = 2.0 - alpha;
    let s = gen_ml_exact(1.0 / ab, r as f64 - 1.0 / ab, rng);
    let mut v = stick_vector(1.0 - alpha, |j| (j - 1) as f64 * ab, r, rng);
    v.iter_mut().for_each(|x| *x *= s);
    v
}

/// Degree-biased chain restricted to a head set of vertices: at step `x` an end hits
/// the head with probability `κ (D_h − rα)/(x + s)` and then picks head vertex `j`
/// with probability `∝ D_j − α`. Steps `clock..=last` are simulated by drawing the
/// gaps between head hits directly.
struct HeadChain {
    kappa: f64,
    shift: f64,
    alpha: f64,
}

impl HeadChain {
    fn run<R: Rng + ?Sized>(&self, degrees: &mut [u64], mut clock: u64, last: u64, rng: &mut R) {
        let r = degrees.len() as f64;
        let mut d_h: u64 = degrees.iter().sum();
        while clock <= last {
            let w = d_h as f64 - r * self.alpha;
            let c = self.kappa * w;
            let a = (clock as f64 + self.shift - c).max(0.0);
            let ln_u = rng.random::<f64>().ln();
            let Some(m) = first_event(a, c, ln_u, last - clock + 1) else { break };
            let mut u = rng.random::<f64>() * w;
            let mut pick = degrees.len() - 1;
            for (j, &dj) in degrees.iter().enumerate() {
                u -= dj as f64 - self.alpha;
                if u < 0.0 {
                    pick = j;
                    break;
                }
            }
            degrees[pick] += 1;
            d_h += 1;
            clock += m;
        }
    }
}

/// Degrees of the first `r` vertices of the `(α, t)`-graph with `t_j = 2d(j−1)+1`,
/// scaled by `(n/2d)^{−(2d−1)/(2d−α)}`.
pub fn simulate_pa_head<R: Rng + ?Sized>(d: u64, alpha: f64, r: usize, n: u64, rng: &mut R) -> Result<Vec<f64>> {
    let t_r = 2 * d * (r as u64 - 1) + 1;
    if n < t_r || r == 0 {
        return Err(bad_params(format!("n = {n} must reach t_r = {t_r}")));
    }
    let mut degrees = if d == 1 {
        // Exact start up to t_r, then gaps between head hits. Attachment steps are the
        // even ends 2m, preceded by 2m−1 ends on m vertices: the head is hit with
        // probability (D_h − rα)/(m(2−α) − 1).
        let mut state = DegreeBiasedState::new(alpha);
        state.add_vertex();
        for _ in 1..r {
            let j = state.draw(rng);
            state.add_end(j);
            state.add_vertex();
        }
        let mut deg = state.degrees().to_vec();
        let ab = 2.0 - alpha;
        HeadChain { kappa: 1.0 / ab, shift: -1.0 / ab, alpha }.run(&mut deg, r as u64, n / 2, rng);
        deg
    } else {
        let schedule = constant_schedule(d, (n / (2 * d)) as usize + 2)?;
        let mut head = HeadTracker::new(alpha, r);
        head.advance_to(n, &mut FixedArrivals::new(&schedule), rng);
        head.head_degrees().to_vec()
    };
    let scale = (n as f64 / (2 * d) as f64).powf(-((2 * d - 1) as f64) / ((2 * d) as f64 - alpha));
    degrees.truncate(r);
    Ok(degrees.into_iter().map(|x| x as f64 * scale).collect())
}

/// `n^{−(1−β)}(D_1(n), …, D_r(n))` for `α = 0`, forced arrivals at `times` and i.i.d.
/// `Geom(β)` interarrivals afterwards.
pub fn simulate_ys_head<R: Rng + ?Sized>(beta_: f64, times: &[u64], n: u64, rng: &mut R) -> Result<Vec<f64>> {
    check_times(times)?;
    let t_r = *times.last().unwrap();
    if n < t_r {
        return Err(bad_params(format!("n = {n} must reach T_r = {t_r}")));
    }
    let mut state = DegreeBiasedState::new(0.0);
    let mut next = 0;
    for e in 1..=t_r {
        if next < times.len() && times[next] == e {
            state.add_vertex();
            next += 1;
        } else {
            let j = state.draw(rng);
            state.add_end(j);
        }
    }
    let mut deg = state.degrees().to_vec();
    HeadChain { kappa: 1.0 - beta_, shift: 0.0, alpha: 0.0 }.run(&mut deg, t_r, n - 1, rng);
    let scale = (n as f64).powf(-(1.0 - beta_));
    Ok(deg.into_iter().map(|x| x as f64 * scale).collect())
}

/// White-ball count `D_w(n)` of the two-colour urn with `Geom(β)` immigration of
/// black balls, run as an `α = 0` graph: a seed of `w` ends on a white vertex and `b`
/// on a black one, then one end per step, a new (black) vertex with probability `β`.
pub fn simulate_immigration_urn<R: Rng + ?Sized>(w: u64, b: u64, beta_: f64, n: u64, rng: &mut R) -> Result<u64> {
    check_urn(w, b, beta_, n)?;
    let mut state = DegreeBiasedState::new(0.0);
    state.add_vertex();
    for _ in 1..w {
        state.add_end(1);
    }
    state.add_vertex();
    for _ in 1..b {
        state.add_end(2);
    }
    for _ in (w + b)..n {
        if rng.random::<f64>() < beta_ {
            state.add_vertex();
        } else {
            let j = state.draw(rng);
            state.add_end(j);
        }
    }
    Ok(state.degrees()[0])
}

/// Same law as [`simulate_immigration_urn`], drawing the gaps between white draws
/// directly: with `N` balls and `D` white, the next ball is white with probability
/// `(1−β)D/N`.
pub fn simulate_immigration_urn_jump<R: Rng + ?Sized>(w: u64, b: u64, beta_: f64, n: u64, rng: &mut R) -> Result<u64> {
    check_urn(w, b, beta_, n)?;
    let mut deg = [w];
    if n > w + b {
        HeadChain { kappa: 1.0 - beta_, shift: 0.0, alpha: 0.0 }.run(&mut deg, w + b, n - 1, rng);
    }
    Ok(deg[0])
}

fn check_urn(w: u64, b: u64, beta_: f64, n: u64) -> Result<()> {
    if w == 0 || b == 0 {
        return Err(bad_params("urn needs w, b >= 1"));
    }
    if !(beta_ > 0.0 && beta_ < 1.0) {
        return Err(bad_params(format!("beta must lie in (0,1), got {beta_}")));
    }
    if n < w + b {
        return Err(bad_params(format!("n = {n} is below the seed size {}", w + b)));
    }
    Ok(())
}

fn beta_or_one<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    if b == 0.0 { 1.0 } else { beta(a, b, rng) }
}

/// `ξ` for the Yule–Simon limit given `T_1..T_r`:
/// `M_{1−β,T_r−1} ℬ_{T_r,(T_r−1)β/(1−β)}·(Ψ_j Π(1−Ψ_i))_j`, `Ψ_j ~ Beta(1, T_j−1)`.
fn ys_xi_exact<R: Rng + ?Sized>(beta_: f64, times: &[u64], rng: &mut R) -> Vec<f64> {
    let t_r = *times.last().unwrap() as f64;
    let s = gen_ml_exact(1.0 - beta_, t_r - 1.0, rng) * beta_or_one(t_r, (t_r - 1.0) * beta_ / (1.0 - beta_), rng);
    let mut v = stick_vector(1.0, |j| times[j - 1] as f64 - 1.0, times.len(), rng);
    v.iter_mut().for_each(|x| *x *= s);
    v
}

fn crp_xi<R: Rng + ?Sized>(alpha: f64, theta: f64, times: &[u64], rng: &mut R) -> Vec<f64> {
    let r = times.len() as f64;
    let t_r = *times.last().unwrap() as f64;
    let s = beta(t_r - r * alpha, theta + r * alpha, rng);
    let mut v = stick_vector(1.0 - alpha, |j| times[j - 1] as f64 - 1.0 - (j - 1) as f64 * alpha, times.len(), rng);
    v.iter_mut().for_each(|x| *x *= s);
    v
}

fn urn_xi<R: Rng + ?Sized>(w: f64, b: f64, beta_: f64, route: Route, rng: &mut R) -> f64 {
    match route {
        Route::Exact => {
            beta(w, b, rng) * beta(w + b, (w + b - 1.0) * beta_ / (1.0 - beta_), rng) * gen_ml_exact(1.0 - beta_, w + b - 1.0, rng)
        }
        Route::Simulation { n } => {
            let d = simulate_immigration_urn_jump(w as u64, b as u64, beta_, n, rng).expect("validated");
            d as f64 * (n as f64).powf(-(1.0 - beta_))
        }
    }
}

/// Samples every comparison of `spec`, `m` draws per side.
pub fn identity_draws(spec: &IdentitySpec, m: usize, seed: u64) -> Result<IdentityDraws> {
    spec.validate()?;
    if m < 2 {
        return Err(bad_params("need at least 2 samples"));
    }
    let mut streams = StreamPair::new(seed);
    let s = &mut streams;
    let mut out = IdentityDraws::default();
    match spec {
        &IdentitySpec::BetaGammaAlgebra { a, b } => {
            let pairs: Vec<(f64, f64)> = (0..m)
                .map(|_| {
                    let (x, y) = (gamma(a, &mut s.lhs), gamma(b, &mut s.lhs));
                    (x + y, x / (x + y))
                })
                .collect();
            let (sum, ratio): (Vec<f64>, Vec<f64>) = pairs.iter().cloned().unzip();
            let rho = rank_correlation(&sum, &ratio)?;
            out.extra.push(TestReport::exact("BETA_GAMMA_ALGEBRA independence |rho|", rho.abs(), CORRELATION_THRESHOLD, m as u64));
            let mut it = pairs.into_iter();
            out.comparisons = vector_comparisons(
                "(G_a+G_b, G_a/(G_a+G_b)) vs (G_{a+b}, B_{a,b})",
                m,
                |_| {
                    let (x, y) = it.next().unwrap();
                    vec![x, y]
                },
                |rng| vec![gamma(a + b, rng), beta(a, b, rng)],
                s,
            );
        }
        &IdentitySpec::BetaProductSplit { a, b, c } => {
            out.comparisons.push(scalar_comparison(
                "B_{a,b+c} vs B_{a,b} B_{a+b,c}".into(),
                m,
                |rng| beta(a, b + c, rng),
                |rng| beta(a, b, rng) * beta(a + b, c, rng),
                s,
            ));
        }
        &IdentitySpec::PaLimits { d, alpha, r, which, route } => {
            let ab = (2 * d) as f64 - alpha;
            let mb = (2 * d - 1) as usize;
            let xi = |rng: &mut Stream| match route {
                Route::Exact => pa_xi_exact(alpha, r, rng),
                Route::Simulation { n } => simulate_pa_head(d, alpha, r, n, rng).expect("validated"),
            };
            let psi = |rng: &mut Stream| stick_vector(1.0 - alpha, |j| (j - 1) as f64 * ab, r, rng);
            let z = |rng: &mut Stream| (1..=mb).map(|i| gamma(r as f64 + 1.0 - i as f64 / ab, rng).powf(1.0 / ab)).product::<f64>();
            let z1 = |rng: &mut Stream| (1..=mb).map(|i| gamma(1.0 - i as f64 / ab, rng).powf(1.0 / ab)).product::<f64>();
            let bprod = |k_max: usize, rng: &mut Stream| {
                (1..=k_max).map(|k| beta(k as f64 * ab - mb as f64, mb as f64, rng)).product::<f64>()
            };
            let name = format!("PA_LIMITS[{which}]");
            let lhs_factor = |rng: &mut Stream| match which {
                1 => z(rng),
                2 | 3 => z1(rng),
                _ => z1(rng) * (1..r).map(|k| beta(k as f64 * ab, 1.0 - alpha, rng)).product::<f64>(),
            };
            let rhs_factor = |rng: &mut Stream| match which {
                1 => gamma(r as f64 * ab, rng),
                2 => gamma(r as f64 * ab, rng) * bprod(r, rng),
                3 => gamma(r as f64 * ab - mb as f64, rng) * bprod(r - 1, rng),
                _ => gamma(1.0 - alpha, rng),
            };
            out.comparisons = vector_comparisons(
                &name,
                m,
                |rng| {
                    let f = lhs_factor(rng);
                    xi(rng).into_iter().map(|x| f * x).collect()
                },
                |rng| {
                    let f = rhs_factor(rng);
                    psi(rng).into_iter().map(|x| f * x).collect()
                },
                s,
            );
        }
        IdentitySpec::CrpLimits { alpha, theta, times, form } => {
            let (alpha, theta) = (*alpha, *theta);
            let r = times.len();
            match form {
                CrpForm::Joint => {
                    let t_r = times[r - 1] as f64;
                    out.comparisons = vector_comparisons(
                        "G_{T_r+theta} xi vs G_{T_r-r alpha} (Psi_j prod(1-Psi_i))",
                        m,
                        |rng| {
                            let g = gamma(t_r + theta, rng);
                            crp_xi(alpha, theta, times, rng).into_iter().map(|x| g * x).collect()
                        },
                        |rng| {
                            let g = gamma(t_r - r as f64 * alpha, rng);
                            stick_vector(1.0 - alpha, |j| times[j - 1] as f64 - 1.0 - (j - 1) as f64 * alpha, r, rng)
                                .into_iter()
                                .map(|x| g * x)
                                .collect()
                        },
                        s,
                    );
                }
                CrpForm::Marginal => {
                    for j in 2..=r {
                        let t_j = times[j - 1] as f64;
                        out.comparisons.push(scalar_comparison(
                            format!("xi_{j} vs B_(1-alpha, T_{j}-1+theta+alpha)"),
                            m,
                            |rng| crp_xi(alpha, theta, &times[..j], rng)[j - 1],
                            |rng| beta(1.0 - alpha, t_j - 1.0 + theta + alpha, rng),
                            s,
                        ));
                    }
                }
                CrpForm::Conditional => {
                    for j in 1..r {
                        let t_j = times[j - 1] as f64;
                        let delta = (times[j] - times[j - 1]) as f64;
                        out.comparisons.push(scalar_comparison(
                            format!("xi_{j} B_(T_{j}+theta, Delta_{}) vs xi_{}", j + 1, j + 1),
                            m,
                            |rng| crp_xi(alpha, theta, &times[..j], rng)[j - 1] * beta(t_j + theta, delta, rng),
                            |rng| crp_xi(alpha, theta, &times[..=j], rng)[j],
                            s,
                        ));
                    }
                }
            }
        }
        IdentitySpec::YsLimits { beta: b, times, form, route } => {
            let (b, route) = (*b, *route);
            let sigma = 1.0 - b;
            let r = times.len();
            let xi = |ts: &[u64], rng: &mut Stream| match route {
                Route::Exact => ys_xi_exact(b, ts, rng),
                Route::Simulation { n } => simulate_ys_head(b, ts, n, rng).expect("validated"),
            };
            match form {
                YsForm::Joint => {
                    let t_r = times[r - 1] as f64;
                    out.comparisons = vector_comparisons(
                        "G_{T_r}^{1-beta} xi vs G_{T_r} (Psi_j prod(1-Psi_i))",
                        m,
                        |rng| {
                            let g = gamma(t_r, rng).powf(sigma);
                            xi(times, rng).into_iter().map(|x| g * x).collect()
                        },
                        |rng| {
                            let g = gamma(t_r, rng);
                            stick_vector(1.0, |j| times[j - 1] as f64 - 1.0, r, rng).into_iter().map(|x| g * x).collect()
                        },
                        s,
                    );
                }
                YsForm::Marginal => {
                    for j in 2..=r {
                        let t = times[j - 1] as f64;
                        let forms: [(&str, Box<dyn Fn(&mut Stream) -> f64>); 4] = [
                            ("M_{1-beta} B_{1,T_j-1}^{1-beta}", Box::new(move |rng: &mut Stream| stable(sigma, rng).powf(-sigma) * beta(1.0, t - 1.0, rng).powf(sigma))),
                            ("M_{1-beta,T_j-1} B_{T_j,(T_j-1)beta/(1-beta)} Psi_j", Box::new(move |rng: &mut Stream| {
                                gen_ml_exact(sigma, t - 1.0, rng) * beta(t, (t - 1.0) * b / sigma, rng) * beta(1.0, t - 1.0, rng)
                            })),
                            ("M_{1-beta,T_j-1} B_{1,(T_j-1)/(1-beta)}", Box::new(move |rng: &mut Stream| gen_ml_exact(sigma, t - 1.0, rng) * beta(1.0, (t - 1.0) / sigma, rng))),
                            ("M_{1-beta,T_j} B_{1,(T_j-1+beta)/(1-beta)}", Box::new(move |rng: &mut Stream| gen_ml_exact(sigma, t, rng) * beta(1.0, (t - 1.0 + b) / sigma, rng))),
                        ];
                        for (label, rhs) in forms.iter() {
                            out.comparisons.push(scalar_comparison(format!("xi_{j} vs {label}"), m, |rng| xi(&times[..j], rng)[j - 1], rhs, s));
                        }
                    }
                }
                YsForm::GammaMarginal => {
                    for j in 1..=r {
                        let t = times[j - 1] as f64;
                        out.comparisons.push(scalar_comparison(
                            format!("xi_{j} G_(T_{j})^(1-beta) vs G_1"),
                            m,
                            |rng| xi(&times[..j], rng)[j - 1] * gamma(t, rng).powf(sigma),
                            |rng| gamma(1.0, rng),
                            s,
                        ));
                    }
                }
                YsForm::Conditional => {
                    for j in 1..r {
                        let t = times[j - 1] as f64;
                        let delta = (times[j] - times[j - 1]) as f64;
                        out.comparisons.push(scalar_comparison(
                            format!("xi_{j} B_(T_{j},Delta_{})^(1-beta) vs xi_{}", j + 1, j + 1),
                            m,
                            |rng| xi(&times[..j], rng)[j - 1] * beta(t, delta, rng).powf(sigma),
                            |rng| xi(&times[..=j], rng)[j],
                            s,
                        ));
                    }
                }
                YsForm::ConditionalProduct => {
                    for j in 1..r {
                        let t = times[j - 1] as f64;
                        let delta = times[j] - times[j - 1];
                        out.comparisons.push(scalar_comparison(
                            format!("xi_{j} B_(T_{j}/(1-beta),Delta_{}/(1-beta)) prod B vs xi_{}", j + 1, j + 1),
                            m,
                            |rng| {
                                let mut x = xi(&times[..j], rng)[j - 1] * beta(t / sigma, delta as f64 / sigma, rng);
                                for i in 1..=delta {
                                    x *= beta((t - 1.0 + i as f64 - b) / sigma, b / sigma, rng);
                                }
                                x
                            },
                            |rng| xi(&times[..=j], rng)[j],
                            s,
                        ));
                    }
                }
            }
        }
        &IdentitySpec::UrnImmigration { w, b, beta: bt, which, route } => {
            let (wf, bf) = (w as f64, b as f64);
            let sigma = 1.0 - bt;
            let lhs = |rng: &mut Stream| urn_xi(wf, bf, bt, route, rng);
            let c = match which {
                0 => scalar_comparison(
                    "n^{-(1-beta)} D_w(n) vs B_{w,b} B_{w+b,(w+b-1)beta/(1-beta)} M_{1-beta,w+b-1}".into(),
                    m,
                    lhs,
                    |rng| urn_xi(wf, bf, bt, Route::Exact, rng),
                    s,
                ),
                1 => scalar_comparison(
                    "xi vs B_{w,((w-1)beta+b)/(1-beta)} M_{1-beta,w+b-1}".into(),
                    m,
                    lhs,
                    |rng| beta(wf, ((wf - 1.0) * bt + bf) / sigma, rng) * gen_ml_exact(sigma, wf + bf - 1.0, rng),
                    s,
                ),
                2 => scalar_comparison(
                    "xi vs B_{w,(w beta+b)/(1-beta)} M_{1-beta,w+b}".into(),
                    m,
                    lhs,
                    |rng| beta(wf, (wf * bt + bf) / sigma, rng) * gen_ml_exact(sigma, wf + bf, rng),
                    s,
                ),
                _ => scalar_comparison(
                    "xi G_{w+b}^{1-beta} vs G_w".into(),
                    m,
                    |rng| lhs(rng) * gamma(wf + bf, rng).powf(sigma),
                    |rng| gamma(wf, rng),
                    s,
                ),
            };
            out.comparisons.push(c);
        }
    }
    Ok(out)
}

/// KS for every comparison at `threshold`, plus any extra checks.
pub fn compare_draws(label: &str, draws: IdentityDraws, threshold: f64, seed: u64) -> Result<TestReport> {
    let mut components = Vec::with_capacity(draws.comparisons.len() + draws.extra.len());
    for c in draws.comparisons {
        let ks = ks_two_sample(&c.lhs, &c.rhs)?;
        components.push(TestReport::statistical(c.name, ks.statistic, ks.p_value, threshold, ks.n_lhs.min(ks.n_rhs) as u64));
    }
    components.extend(draws.extra);
    Ok(TestReport::composite(label, components).with_seed(seed))
}

/// Samples both sides of `spec` and tests them. Needs `m ≥ 10⁴`. The comparisons of
/// one identity form a family: the identity passes at its threshold after a
/// Bonferroni correction over its KS tests.
pub fn run_identity(spec: &IdentitySpec, m: usize, seed: u64) -> Result<TestReport> {
    if m < MIN_SAMPLES {
        return Err(bad_params(format!("identity tests need at least {MIN_SAMPLES} samples, got {m}")));
    }
    let draws = identity_draws(spec, m, seed)?;
    Ok(compare_draws(&spec.label(), draws, spec.threshold(), seed)?.bonferroni(spec.threshold()))
}

/// Several forms of one identity tested as a single family at `threshold`. Form `i`
/// draws from seed `seed + i`.
pub fn run_identity_family(label: &str, specs: &[IdentitySpec], m: usize, threshold: f64, seed: u64) -> Result<TestReport> {
    if m < MIN_SAMPLES {
        return Err(bad_params(format!("identity tests need at least {MIN_SAMPLES} samples, got {m}")));
    }
    let mut parts = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        parts.push(compare_draws(&spec.label(), identity_draws(spec, m, s)?, threshold, s)?);
    }
    Ok(TestReport::composite(label, parts).with_seed(seed).bonferroni(threshold))
}
