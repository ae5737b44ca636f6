//! The reversible coagulation-fragmentation chain on partitions of `n`.
//!
//! States are occupancy vectors `(k_1, ..., k_n)` with `sum i k_i = n`. Two
//! groups of sizes `i`, `j` merge at rate `psi(i,j)`, one group of size
//! `i+j` splits into `(i,j)` at rate `phi(i,j)`; with mass-action totals
//! (exponent 1) and `psi/phi = a_{i+j}/(a_i a_j)` the chain is reversible
//! with invariant measure `mu(eta) = C prod a_i^{k_i}/k_i!` — the same
//! weights the coefficient tables normalise. Only the ratio is pinned by
//! reversibility; this module fixes the convention `psi(i,j) = a_{i+j}`,
//! `phi(i,j) = a_i a_j`, the simplest positive pair with that ratio (the
//! invariant measure does not depend on the choice, transients do).
//!
//! Simulation is a continuous-time Gillespie loop: exponential holding time
//! at the total rate, then one flip chosen proportionally. Empirical
//! distributions use holding-time weighting, the unbiased estimator for a
//! continuous-time chain.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logspace::logsumexp;
use crate::sequences::ParameterFunction;
use crate::special::ln_factorial;
use crate::{Error, Result};

/// Enumeration cap: p(60) is just under a million states.
pub const ENUMERATION_MAX_N: usize = 60;

/// Cap for the exhaustive detailed-balance scan.
pub const BALANCE_CHECK_MAX_N: usize = 20;

/// Occupancy vector `(k_1, ..., k_n)` of a partition of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionState {
    counts: Vec<u32>, // index by size, [0] unused
    n: usize,
}

impl PartitionState {
    /// All mass in singletons: `k_1 = n`.
    pub fn singletons(n: usize) -> Self {
        let mut counts = vec![0u32; n + 1];
        if n >= 1 {
            counts[1] = n as u32;
        }
        PartitionState { counts, n }
    }

    /// One group holding everything: `k_n = 1`.
    pub fn monolith(n: usize) -> Self {
        let mut counts = vec![0u32; n + 1];
        if n >= 1 {
            counts[n] = 1;
        }
        PartitionState { counts, n }
    }

    /// Build from an explicit list of part sizes; must sum to `n`.
    pub fn from_parts(n: usize, parts: &[usize]) -> Result<Self> {
        let mut counts = vec![0u32; n + 1];
        let mut mass = 0usize;
        for &p in parts {
            if p < 1 || p > n {
                return Err(Error::Domain(format!("part size {p} outside 1..={n}")));
            }
            counts[p] += 1;
            mass += p;
        }
        if mass != n {
            return Err(Error::Domain(format!("parts sum to {mass}, expected {n}")));
        }
        Ok(PartitionState { counts, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `k_size`.
    pub fn count(&self, size: usize) -> u32 {
        self.counts.get(size).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `sum i k_i`, recomputed.
    pub fn total_mass(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(size, &k)| size * k as usize)
            .sum()
    }

    /// Size of the largest group (0 only for `n = 0`).
    pub fn largest(&self) -> usize {
        (1..=self.n).rev().find(|&s| self.counts[s] > 0).unwrap_or(0)
    }

    /// Size of the smallest group (0 only for `n = 0`).
    pub fn smallest(&self) -> usize {
        (1..=self.n).find(|&s| self.counts[s] > 0).unwrap_or(0)
    }

    /// Apply one flip; errors on transitions the occupancies cannot support.
    pub fn apply(&mut self, t: Transition) -> Result<()> {
        match t {
            Transition::Coagulate { i, j } => {
                let s = i + j;
                if s > self.n {
                    return Err(Error::Domain(format!("merge target {s} exceeds n")));
                }
                if i == j {
                    if self.counts[i] < 2 {
                        return Err(Error::Domain(format!("need two groups of size {i}")));
                    }
                    self.counts[i] -= 2;
                } else {
                    if self.counts[i] < 1 || self.counts[j] < 1 {
                        return Err(Error::Domain(format!("need groups of sizes {i} and {j}")));
                    }
                    self.counts[i] -= 1;
                    self.counts[j] -= 1;
                }
                self.counts[s] += 1;
            }
            Transition::Fragment { i, j } => {
                let s = i + j;
                if s > self.n || self.counts[s] < 1 {
                    return Err(Error::Domain(format!("no group of size {s} to split")));
                }
                self.counts[s] -= 1;
                self.counts[i] += 1;
                self.counts[j] += 1;
            }
        }
        debug_assert_eq!(self.total_mass(), self.n);
        Ok(())
    }
}

/// One flip of the chain; `i <= j` always.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// `(i, j) -> (i + j)`.
    Coagulate { i: usize, j: usize },
    /// `(i + j) -> (i, j)`.
    Fragment { i: usize, j: usize },
}

/// All partitions of `n` as occupancy states. Capped at
/// [`ENUMERATION_MAX_N`]; the count equals the partition number p(n).
pub fn enumerate_states(n: usize) -> Result<Vec<PartitionState>> {
    if n > ENUMERATION_MAX_N {
        return Err(Error::TooLarge(format!(
            "state enumeration capped at n = {ENUMERATION_MAX_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut counts = vec![0u32; n + 1];
    fn recurse(
        remaining: usize,
        max_part: usize,
        counts: &mut Vec<u32>,
        n: usize,
        out: &mut Vec<PartitionState>,
    ) {
        if remaining == 0 {
            out.push(PartitionState { counts: counts.clone(), n });
            return;
        }
        if max_part == 0 {
            return;
        }
        let s = max_part.min(remaining);
        for k in (0..=remaining / s).rev() {
            counts[s] = k as u32;
            recurse(remaining - k * s, s - 1, counts, n, out);
            counts[s] = 0;
        }
    }
    if n == 0 {
        out.push(PartitionState { counts, n });
    } else {
        recurse(n, n, &mut counts, n, &mut out);
    }
    Ok(out)
}

/// The chain: weight sequence values on `1..=n` plus the merge/split rate
/// convention, with optional per-pair perturbation hooks for negative
/// controls.
#[derive(Clone, Debug)]
pub struct CfpModel {
    n: usize,
    a: Vec<f64>, // a[size], [0] unused
    psi_scale: HashMap<(usize, usize), f64>,
    phi_scale: HashMap<(usize, usize), f64>,
}

impl CfpModel {
    /// Reversible model with `psi(i,j) = a_{i+j}`, `phi(i,j) = a_i a_j` and
    /// mass-action total intensities.
    pub fn reversible(pf: &ParameterFunction, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("need n >= 1".into()));
        }
        let mut a = vec![f64::NAN; n + 1];
        for (size, slot) in a.iter_mut().enumerate().skip(1) {
            let v = pf.eval_a(size)?;
            if !v.is_finite() {
                return Err(Error::InvalidParameterFunction(format!(
                    "a_{size} overflows the linear scale needed for simulation"
                )));
            }
            *slot = v;
        }
        Ok(CfpModel { n, a, psi_scale: HashMap::new(), phi_scale: HashMap::new() })
    }

    /// Total-intensity exponent other than 1 is outside the reversible
    /// steady-state theory implemented here and is rejected.
    pub fn reversible_with_exponent(pf: &ParameterFunction, n: usize, gamma: f64) -> Result<Self> {
        if gamma != 1.0 {
            return Err(Error::NotImplemented(format!(
                "total-intensity exponent gamma = {gamma}; only mass-action (gamma = 1) is supported"
            )));
        }
        Self::reversible(pf, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self, size: usize) -> f64 {
        self.a[size]
    }

    fn key(i: usize, j: usize) -> (usize, usize) {
        if i <= j {
            (i, j)
        } else {
            (j, i)
        }
    }

    /// Merge rate for a pair of groups of sizes `i`, `j` (symmetric).
    pub fn psi(&self, i: usize, j: usize) -> f64 {
        let base = self.a[i + j];
        base * self.psi_scale.get(&Self::key(i, j)).copied().unwrap_or(1.0)
    }

    /// Split rate of a group of size `i + j` into `(i, j)` (symmetric).
    pub fn phi(&self, i: usize, j: usize) -> f64 {
        let base = self.a[i] * self.a[j];
        base * self.phi_scale.get(&Self::key(i, j)).copied().unwrap_or(1.0)
    }

    /// Scale one merge rate; breaks reversibility on purpose (negative
    /// controls for the balance check).
    pub fn perturb_psi(&mut self, i: usize, j: usize, factor: f64) {
        *self.psi_scale.entry(Self::key(i, j)).or_insert(1.0) *= factor;
    }

    /// Scale one split rate.
    pub fn perturb_phi(&mut self, i: usize, j: usize, factor: f64) {
        *self.phi_scale.entry(Self::key(i, j)).or_insert(1.0) *= factor;
    }

    /// Max relative deviation of `psi/phi` from `a_{i+j}/(a_i a_j)` over all
    /// pairs with `i + j <= n`.
    pub fn reversibility_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..=self.n / 2 {
            for j in i..=(self.n - i) {
                let ratio = self.psi(i, j) / self.phi(i, j);
                let expect = self.a[i + j] / (self.a[i] * self.a[j]);
                worst = worst.max((ratio / expect - 1.0).abs());
            }
        }
        worst
    }

    /// Total intensities out of `state`: every merge `(i,j) -> i+j` with
    /// rate `psi(i,j) k_i k_j` (or `k_i (k_i - 1)` for `i = j`) and every
    /// split `(i+j) -> (i,j)` with rate `phi(i,j) k_{i+j}`.
    pub fn total_rates(&self, state: &PartitionState) -> Vec<(Transition, f64)> {
        let mut out = Vec::new();
        let n = self.n;
        let present: Vec<usize> = (1..=n).filter(|&s| state.count(s) > 0).collect();
        for (idx, &i) in present.iter().enumerate() {
            for &j in &present[idx..] {
                if i + j > n {
                    break;
                }
                let ki = state.count(i) as f64;
                let rate = if i == j {
                    self.psi(i, i) * ki * (ki - 1.0)
                } else {
                    self.psi(i, j) * ki * state.count(j) as f64
                };
                if rate > 0.0 {
                    out.push((Transition::Coagulate { i, j }, rate));
                }
            }
        }
        for s in 2..=n {
            let ks = state.count(s) as f64;
            if ks == 0.0 {
                continue;
            }
            for i in 1..=s / 2 {
                let rate = self.phi(i, s - i) * ks;
                if rate > 0.0 {
                    out.push((Transition::Fragment { i, j: s - i }, rate));
                }
            }
        }
        out
    }
}

/// The exact invariant measure on all partitions of `n`.
pub struct ExactMeasure {
    states: Vec<PartitionState>,
    probs: Vec<f64>,
    index: HashMap<Vec<u32>, usize>,
    log_normalizer: f64,
}

impl ExactMeasure {
    pub fn states(&self) -> &[PartitionState] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Probability of one state, if it is a valid partition of `n`.
    pub fn prob(&self, state: &PartitionState) -> Option<f64> {
        self.index.get(state.counts()).map(|&i| self.probs[i])
    }

    /// `ln` of the weight-sum normaliser (equals `ln c_n`).
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    fn position(&self, counts: &[u32]) -> Option<usize> {
        self.index.get(counts).copied()
    }
}

/// Normalised weights `prod a_i^{k_i} / k_i!` over all partitions of `n`.
pub fn exact_measure(pf: &ParameterFunction, n: usize) -> Result<ExactMeasure> {
    let states = enumerate_states(n)?;
    pf.validate_window(1, n.max(1))?;
    let log_weights: Vec<f64> = states
        .iter()
        .map(|st| {
            (1..=n)
                .map(|size| {
                    let k = st.count(size);
                    if k == 0 {
                        0.0
                    } else {
                        k as f64 * pf.log_a(size) - ln_factorial(k as usize)
                    }
                })
                .sum()
        })
        .collect();
    let log_norm = logsumexp(&log_weights);
    let probs: Vec<f64> = log_weights.iter().map(|lw| (lw - log_norm).exp()).collect();
    let index = states
        .iter()
        .enumerate()
        .map(|(i, st)| (st.counts().to_vec(), i))
        .collect();
    Ok(ExactMeasure { states, probs, index, log_normalizer: log_norm })
}

/// Max relative detailed-balance violation
/// `|mu(eta) Psi(i,j;eta) - mu(eta') Phi(i,j;eta')| / (mu(eta) Psi)` over
/// every merge transition from every state. At most 1e-10 for an unperturbed
/// reversible model; a perturbed rate shows up at the size of the
/// perturbation.
pub fn detailed_balance_residual(model: &CfpModel, measure: &ExactMeasure) -> Result<f64> {
    let n = model.n();
    if n > BALANCE_CHECK_MAX_N {
        return Err(Error::TooLarge(format!(
            "exhaustive balance scan capped at n = {BALANCE_CHECK_MAX_N}, got {n}"
        )));
    }
    let mut worst: f64 = 0.0;
    for (idx, state) in measure.states().iter().enumerate() {
        let mu = measure.probs()[idx];
        for (t, rate) in model.total_rates(state) {
            let (i, j) = match t {
                Transition::Coagulate { i, j } => (i, j),
                Transition::Fragment { .. } => continue,
            };
            let mut merged = state.clone();
            merged.apply(t)?;
            let mu_merged = measure
                .prob(&merged)
                .ok_or_else(|| Error::Domain("merged state missing from measure".into()))?;
            let forward = mu * rate;
            let backward = mu_merged * model.phi(i, j) * merged.count(i + j) as f64;
            worst = worst.max((forward - backward).abs() / forward);
        }
    }
    Ok(worst)
}

/// One Gillespie event.
#[derive(Clone, Copy, Debug)]
pub struct Event {
    /// Holding time spent in the pre-flip state.
    pub holding: f64,
    /// Absolute time after the flip.
    pub time: f64,
    pub transition: Transition,
}

/// Stepwise Gillespie simulator; deterministic for a given seed.
pub struct Simulator {
    model: CfpModel,
    state: PartitionState,
    time: f64,
    rng: ChaCha8Rng,
    rates: Vec<(Transition, f64)>,
}

impl Simulator {
    pub fn new(model: CfpModel, initial: PartitionState, seed: u64) -> Result<Self> {
        if initial.n() != model.n() || initial.total_mass() != model.n() {
            return Err(Error::Domain("initial state does not carry mass n".into()));
        }
        Ok(Simulator {
            model,
            state: initial,
            time: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            rates: Vec::new(),
        })
    }

    pub fn state(&self) -> &PartitionState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn model(&self) -> &CfpModel {
        &self.model
    }

    /// Draw the holding time, flip one transition, return the event.
    pub fn step(&mut self) -> Result<Event> {
        self.rates.clear();
        self.rates.extend(self.model.total_rates(&self.state));
        let total: f64 = self.rates.iter().map(|(_, r)| r).sum();
        if !(total > 0.0) {
            return Err(Error::Domain(format!(
                "no transitions available (total rate {total}); n = 1 has a frozen chain"
            )));
        }
        let u: f64 = self.rng.gen();
        let holding = -(1.0 - u).ln() / total;
        let mut pick = self.rng.gen::<f64>() * total;
        let mut chosen = self.rates[self.rates.len() - 1].0;
        for &(t, r) in &self.rates {
            if pick < r {
                chosen = t;
                break;
            }
            pick -= r;
        }
        self.state.apply(chosen)?;
        self.time += holding;
        Ok(Event { holding, time: self.time, transition: chosen })
    }
}

/// A stored trajectory (initial state plus events).
#[derive(Clone, Debug)]
pub struct Trace {
    pub initial: PartitionState,
    pub seed: u64,
    pub events: Vec<TraceEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEvent {
    pub index: u64,
    pub time: f64,
    pub transition: Transition,
    pub largest: usize,
}

/// Run `steps` flips and keep the whole event list.
pub fn simulate(
    model: &CfpModel,
    initial: PartitionState,
    steps: u64,
    seed: u64,
) -> Result<Trace> {
    let mut sim = Simulator::new(model.clone(), initial.clone(), seed)?;
    let mut events = Vec::with_capacity(steps.min(1 << 22) as usize);
    for index in 0..steps {
        let ev = sim.step()?;
        events.push(TraceEvent {
            index,
            time: ev.time,
            transition: ev.transition,
            largest: sim.state().largest(),
        });
    }
    Ok(Trace { initial, seed, events })
}

/// What [`run_statistics`] should accumulate.
#[derive(Clone, Debug)]
pub struct StatsConfig {
    /// Fraction of steps discarded before accumulation starts.
    pub burn_in: f64,
    /// Component sizes whose count distributions are tracked.
    pub track_sizes: Vec<usize>,
    /// Keep the full time-weighted state occupancy (for TV distances);
    /// feasible when the visited state set is small.
    pub track_occupancy: bool,
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig { burn_in: 0.1, track_sizes: vec![1, 2], track_occupancy: false }
    }
}

/// Time-weighted summary of a trajectory.
#[derive(Clone, Debug)]
pub struct TraceStatistics {
    pub steps: u64,
    /// Time accumulated after burn-in.
    pub observed_time: f64,
    /// `P(largest = s)`, indexed by `s`.
    pub largest_hist: Vec<f64>,
    /// Per tracked size: time-weighted `P(K_p = k)`, indexed by `k`.
    pub kp_dist: HashMap<usize, Vec<f64>>,
    /// Per tracked size: time-weighted mean count.
    pub kp_mean: HashMap<usize, f64>,
    /// Per tracked pair (ordered): time-weighted covariance of the counts.
    pub kp_cov: HashMap<(usize, usize), f64>,
    /// Normalised state occupancy, when tracked.
    pub occupancy: Option<HashMap<Vec<u32>, f64>>,
}

/// Holding-time-weighted accumulation shared by the streaming and replay
/// statistics paths.
struct StatsAccumulator<'a> {
    cfg: &'a StatsConfig,
    steps: u64,
    total_time: f64,
    largest_hist: Vec<f64>,
    kp_dist: HashMap<usize, Vec<f64>>,
    kp_mean: HashMap<usize, f64>,
    cross: HashMap<(usize, usize), f64>,
    occupancy: HashMap<Vec<u32>, f64>,
}

impl<'a> StatsAccumulator<'a> {
    fn new(n: usize, steps: u64, cfg: &'a StatsConfig) -> Self {
        let mut cross = HashMap::new();
        for (ai, &p) in cfg.track_sizes.iter().enumerate() {
            for &q in &cfg.track_sizes[ai + 1..] {
                cross.insert((p.min(q), p.max(q)), 0.0);
            }
        }
        StatsAccumulator {
            cfg,
            steps,
            total_time: 0.0,
            largest_hist: vec![0.0; n + 1],
            kp_dist: cfg
                .track_sizes
                .iter()
                .map(|&p| (p, vec![0.0; n / p.max(1) + 2]))
                .collect(),
            kp_mean: cfg.track_sizes.iter().map(|&p| (p, 0.0)).collect(),
            cross,
            occupancy: HashMap::new(),
        }
    }

    /// Weight `state` by the holding time spent in it.
    fn add(&mut self, state: &PartitionState, w: f64) {
        self.total_time += w;
        self.largest_hist[state.largest()] += w;
        let counts: Vec<u32> = self.cfg.track_sizes.iter().map(|&p| state.count(p)).collect();
        for (&p, &k) in self.cfg.track_sizes.iter().zip(&counts) {
            let dist = self.kp_dist.get_mut(&p).expect("tracked");
            let k = k as usize;
            if k < dist.len() {
                dist[k] += w;
            }
            *self.kp_mean.get_mut(&p).expect("tracked") += w * k as f64;
        }
        for (ai, &p) in self.cfg.track_sizes.iter().enumerate() {
            for (bj, &q) in self.cfg.track_sizes.iter().enumerate().skip(ai + 1) {
                let key = (p.min(q), p.max(q));
                *self.cross.get_mut(&key).expect("pair") +=
                    w * counts[ai] as f64 * counts[bj] as f64;
            }
        }
        if self.cfg.track_occupancy {
            *self.occupancy.entry(state.counts().to_vec()).or_insert(0.0) += w;
        }
    }

    fn finish(self) -> Result<TraceStatistics> {
        let total_time = self.total_time;
        if total_time <= 0.0 {
            return Err(Error::Domain("no observed time after burn-in".into()));
        }
        let mut largest_hist = self.largest_hist;
        for v in &mut largest_hist {
            *v /= total_time;
        }
        let mut kp_dist = self.kp_dist;
        for dist in kp_dist.values_mut() {
            for v in dist.iter_mut() {
                *v /= total_time;
            }
        }
        let mut kp_mean = self.kp_mean;
        for v in kp_mean.values_mut() {
            *v /= total_time;
        }
        let mut kp_cov = HashMap::new();
        for (&(p, q), &e_pq) in &self.cross {
            kp_cov.insert((p, q), e_pq / total_time - kp_mean[&p] * kp_mean[&q]);
        }
        let occupancy = if self.cfg.track_occupancy {
            let mut occ = self.occupancy;
            for v in occ.values_mut() {
                *v /= total_time;
            }
            Some(occ)
        } else {
            None
        };
        Ok(TraceStatistics {
            steps: self.steps,
            observed_time: total_time,
            largest_hist,
            kp_dist,
            kp_mean,
            kp_cov,
            occupancy,
        })
    }
}

/// Simulate `steps` flips and accumulate holding-time-weighted statistics
/// (the first `burn_in` fraction of flips is discarded).
pub fn run_statistics(
    model: &CfpModel,
    initial: PartitionState,
    steps: u64,
    seed: u64,
    cfg: &StatsConfig,
) -> Result<TraceStatistics> {
    if !(0.0..1.0).contains(&cfg.burn_in) {
        return Err(Error::Domain(format!("burn-in fraction {} outside [0, 1)", cfg.burn_in)));
    }
    let mut sim = Simulator::new(model.clone(), initial, seed)?;
    let burn = (steps as f64 * cfg.burn_in).floor() as u64;
    for _ in 0..burn {
        sim.step()?;
    }
    let mut acc = StatsAccumulator::new(model.n(), steps, cfg);
    let mut pre = sim.state().clone();
    for _ in burn..steps {
        // weight the state we are in by the holding time drawn on exit
        let ev = sim.step()?;
        acc.add(&pre, ev.holding);
        pre.clone_from(sim.state());
    }
    acc.finish()
}

/// Statistics from a stored trace, by replaying it from the initial state.
/// Holding times come from the event timestamps; the first `burn_in`
/// fraction of events is discarded.
pub fn trace_statistics(trace: &Trace, cfg: &StatsConfig) -> Result<TraceStatistics> {
    if !(0.0..1.0).contains(&cfg.burn_in) {
        return Err(Error::Domain(format!("burn-in fraction {} outside [0, 1)", cfg.burn_in)));
    }
    if trace.events.is_empty() {
        return Err(Error::Domain("empty trace".into()));
    }
    let n = trace.initial.n();
    let steps = trace.events.len() as u64;
    let burn = (steps as f64 * cfg.burn_in).floor() as u64;
    let mut acc = StatsAccumulator::new(n, steps, cfg);
    let mut state = trace.initial.clone();
    let mut prev_time = 0.0;
    for ev in &trace.events {
        let holding = ev.time - prev_time;
        if ev.index >= burn {
            acc.add(&state, holding);
        }
        state.apply(ev.transition)?;
        prev_time = ev.time;
    }
    acc.finish()
}

/// Total-variation distance between a tracked occupancy and the exact
/// measure: `(1/2) sum |emp - exact|` over the union of states.
pub fn tv_distance(occupancy: &HashMap<Vec<u32>, f64>, measure: &ExactMeasure) -> f64 {
    let mut tv = 0.0;
    for (state, &p) in measure
        .states()
        .iter()
        .map(|s| s.counts())
        .zip(measure.probs())
    {
        let emp = occupancy.get(state).copied().unwrap_or(0.0);
        tv += (emp - p).abs();
    }
    // states visited by the chain but absent from the measure (none, if the
    // measure really is over all partitions of n)
    for (state, &emp) in occupancy {
        if measure.position(state).is_none() {
            tv += emp;
        }
    }
    0.5 * tv
}

/// Convenience: simulate and report the TV distance to the exact measure.
pub fn stationary_tv(
    pf: &ParameterFunction,
    n: usize,
    steps: u64,
    seed: u64,
    burn_in: f64,
) -> Result<f64> {
    let model = CfpModel::reversible(pf, n)?;
    let measure = exact_measure(pf, n)?;
    let cfg = StatsConfig { burn_in, track_sizes: vec![], track_occupancy: true };
    let stats = run_statistics(&model, PartitionState::singletons(n), steps, seed, &cfg)?;
    Ok(tv_distance(stats.occupancy.as_ref().expect("tracked"), &measure))
}
