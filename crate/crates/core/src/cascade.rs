//! Gated two-photon cascade source and coincidence counting.
//!
//! Every detected first-cascade photon ν₁ opens a gate of length ω. During a
//! gate the beam splitter may receive the ν₂ photon of the triggering atom
//! and accidental ν₂ photons of other atoms. Each ν₂ is routed whole to one
//! arm and then detected with the arm efficiency, so a single photon can
//! never fire both counters.
//!
//! Two arrival models are available:
//!
//! - [`ArrivalMode::Analytic`] draws the trigger photon as a Bernoulli trial
//!   with probability `f(ω)` and accidentals as a Poisson process of rate N
//!   across the gate.
//! - [`ArrivalMode::Physical`] follows individual atoms: decays form a
//!   Poisson stream, each ν₂ lags its ν₁ by an exponential delay of mean τ,
//!   and only photons landing inside an open gate are counted.
//!
//! Work is split into workers with disjoint ChaCha8 streams; records merge
//! by summation, so the totals depend only on the seed and the worker count.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use thiserror::Error;

use crate::fock::BeamSplitter;

/// Name of the generator recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Calcium cascade intermediate-level lifetime, seconds.
pub const DEFAULT_LIFETIME: f64 = 4.7e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CascadeError {
    #[error("invalid cascade configuration: {0}")]
    Config(&'static str),
    #[error("a singles count is zero (nt={nt}, nr={nr}); alpha is undefined")]
    InsufficientCounts { nt: u64, nr: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ArrivalMode {
    #[default]
    Analytic,
    Physical,
}

/// Stopping rule for a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RunLength {
    /// Stop after this many gates.
    Gates(u64),
    /// Stop once this much simulated time (seconds) has elapsed.
    Time(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    /// Decay rate N in the source volume, per second. Zero selects isolated
    /// decays: each gate sees only its own trigger photon.
    pub decay_rate: f64,
    /// Intermediate-level lifetime τ, seconds.
    pub lifetime: f64,
    /// Gate length ω, seconds.
    pub gate: f64,
    /// Angular correlation factor `a ≥ 1`.
    pub correlation_factor: f64,
    pub epsilon_1: f64,
    pub epsilon_t: f64,
    pub epsilon_r: f64,
    pub beam_splitter: BeamSplitter,
    pub run: RunLength,
    pub seed: u64,
    pub mode: ArrivalMode,
    /// Probability that an accidental ν₂ reaches the beam splitter.
    pub accidental_collection: f64,
    pub workers: usize,
}

impl Default for CascadeConfig {
    /// Gate of two lifetimes, `f(ω) = 0.9`, `Nω = 0.9`, 10⁶ gates.
    fn default() -> Self {
        let gate = 2.0 * DEFAULT_LIFETIME;
        Self {
            decay_rate: 0.9 / gate,
            lifetime: DEFAULT_LIFETIME,
            gate,
            correlation_factor: correlation_for_f(0.9, gate, DEFAULT_LIFETIME),
            epsilon_1: 1.0,
            epsilon_t: 0.2,
            epsilon_r: 0.2,
            beam_splitter: BeamSplitter::balanced(),
            run: RunLength::Gates(1_000_000),
            seed: 0,
            mode: ArrivalMode::Analytic,
            accidental_collection: 1.0,
            workers: 8,
        }
    }
}

/// Correlation factor `a` that yields the requested `f(ω)`.
pub fn correlation_for_f(f: f64, gate: f64, lifetime: f64) -> f64 {
    f / (1.0 - (-gate / lifetime).exp())
}

impl CascadeConfig {
    pub fn validate(&self) -> Result<(), CascadeError> {
        let err = |m| Err(CascadeError::Config(m));
        if !(self.decay_rate.is_finite() && self.decay_rate >= 0.0) {
            return err("decay rate must be finite and non-negative");
        }
        if !(self.lifetime.is_finite() && self.lifetime > 0.0) {
            return err("lifetime must be positive");
        }
        if !(self.gate.is_finite() && self.gate > 0.0) {
            return err("gate length must be positive");
        }
        if !(self.correlation_factor.is_finite() && self.correlation_factor >= 1.0) {
            return err("correlation factor must be at least 1");
        }
        if f_omega(self) > 1.0 + 1e-12 {
            return err("a(1 - exp(-omega/tau)) exceeds 1");
        }
        for e in [
            self.epsilon_1,
            self.epsilon_t,
            self.epsilon_r,
            self.accidental_collection,
        ] {
            if !(0.0..=1.0).contains(&e) {
                return err("efficiencies and collection probability must lie in [0, 1]");
            }
        }
        if self.workers == 0 {
            return err("worker count must be at least 1");
        }
        match self.run {
            RunLength::Gates(0) => return err("gate count must be at least 1"),
            RunLength::Gates(_) => {}
            RunLength::Time(t) if t.is_finite() && t > 0.0 => {}
            RunLength::Time(_) => return err("run time must be finite and positive"),
        }
        if self.epsilon_1 == 0.0 {
            return err("epsilon_1 = 0 never opens a gate");
        }
        Ok(())
    }

    /// `Nω`, the mean number of decays per gate.
    pub fn n_omega(&self) -> f64 {
        self.decay_rate * self.gate
    }

    /// Composite arm efficiencies `(t² ε_t, r² ε_r)`.
    pub fn effective_efficiencies(&self) -> (f64, f64) {
        (
            self.beam_splitter.transmittance() * self.epsilon_t,
            self.beam_splitter.reflectance() * self.epsilon_r,
        )
    }

    /// Share of the run assigned to `worker`.
    pub fn worker_share(&self, worker: usize) -> RunLength {
        let w = self.workers as u64;
        match self.run {
            RunLength::Gates(g) => {
                let extra = u64::from((worker as u64) < g % w);
                RunLength::Gates(g / w + extra)
            }
            RunLength::Time(t) => RunLength::Time(t / w as f64),
        }
    }
}

/// `f(ω) = a[1 − exp(−ω/τ)]`, the probability that the triggering atom's ν₂
/// enters the beam splitter during its own gate.
pub fn f_omega(cfg: &CascadeConfig) -> f64 {
    cfg.correlation_factor * (1.0 - (-cfg.gate / cfg.lifetime).exp())
}

/// `g⁽²⁾(Nω) = (2Nω f + N²ω²) / (f + Nω)²`.
pub fn g2_analytic(n_omega: f64, f: f64) -> f64 {
    let den = f + n_omega;
    (2.0 * n_omega * f + n_omega * n_omega) / (den * den)
}

/// Counters accumulated over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountRecord {
    /// Gate-opening ν₁ detections.
    pub n1: u64,
    /// Gates with at least one transmitted-arm detection.
    pub nt: u64,
    /// Gates with at least one reflected-arm detection.
    pub nr: u64,
    /// Gates with detections in both arms.
    pub nc: u64,
    pub total_gates: u64,
    /// Simulated time, seconds.
    pub elapsed: f64,
    /// Trigger ν₂ photons arriving inside their own gate before any
    /// correlation enhancement.
    pub trigger_arrivals: u64,
    /// Accidental ν₂ photons that reached the beam splitter inside a gate.
    pub accidental_photons: u64,
}

impl CountRecord {
    pub fn merge(&self, other: &CountRecord) -> CountRecord {
        CountRecord {
            n1: self.n1 + other.n1,
            nt: self.nt + other.nt,
            nr: self.nr + other.nr,
            nc: self.nc + other.nc,
            total_gates: self.total_gates + other.total_gates,
            elapsed: self.elapsed + other.elapsed,
            trigger_arrivals: self.trigger_arrivals + other.trigger_arrivals,
            accidental_photons: self.accidental_photons + other.accidental_photons,
        }
    }

    /// Fraction of gates whose own ν₂ arrived inside the gate.
    pub fn trigger_arrival_fraction(&self) -> f64 {
        self.trigger_arrivals as f64 / self.total_gates as f64
    }
}

/// `α = N₁ N_c / (N_t N_r)`; the run-time factors of the rates cancel.
pub fn measured_alpha(rec: &CountRecord) -> Result<f64, CascadeError> {
    if rec.nt == 0 || rec.nr == 0 {
        return Err(CascadeError::InsufficientCounts {
            nt: rec.nt,
            nr: rec.nr,
        });
    }
    Ok(rec.n1 as f64 * rec.nc as f64 / (rec.nt as f64 * rec.nr as f64))
}

/// Delta-method standard error of [`measured_alpha`], treating the per-gate
/// indicators of a t-hit, an r-hit and a coincidence as correlated Bernoulli
/// variables. With no coincidences the scale of a single count,
/// `N₁/(N_t N_r)`, is returned.
pub fn alpha_stderr(rec: &CountRecord) -> Result<f64, CascadeError> {
    let alpha = measured_alpha(rec)?;
    let g = rec.n1 as f64;
    if rec.nc == 0 {
        return Ok(g / (rec.nt as f64 * rec.nr as f64));
    }
    let pc = rec.nc as f64 / g;
    let pt = rec.nt as f64 / g;
    let pr = rec.nr as f64 / g;
    let var_log = ((1.0 - pc) / pc - (1.0 - pt) / pt - (1.0 - pr) / pr + 2.0 * alpha - 2.0) / g;
    Ok(alpha * var_log.max(0.0).sqrt())
}

/// Full run: every worker share in sequence, merged.
pub fn simulate(cfg: &CascadeConfig) -> Result<CountRecord, CascadeError> {
    cfg.validate()?;
    let mut total = CountRecord::default();
    for w in 0..cfg.workers {
        total = total.merge(&simulate_worker_unchecked(cfg, w));
    }
    Ok(total)
}

/// One worker's share on its own RNG stream. Merging all shares in any order
/// reproduces [`simulate`].
pub fn simulate_worker(cfg: &CascadeConfig, worker: usize) -> Result<CountRecord, CascadeError> {
    cfg.validate()?;
    if worker >= cfg.workers {
        return Err(CascadeError::Config("worker index out of range"));
    }
    Ok(simulate_worker_unchecked(cfg, worker))
}

fn simulate_worker_unchecked(cfg: &CascadeConfig, worker: usize) -> CountRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(worker as u64);
    let mut sim = Worker::new(cfg, rng);
    match cfg.mode {
        ArrivalMode::Analytic => sim.run_analytic(cfg.worker_share(worker)),
        ArrivalMode::Physical => sim.run_physical(cfg.worker_share(worker)),
    }
    sim.rec
}

#[derive(Debug, Default, Clone, Copy)]
struct GateHits {
    t: bool,
    r: bool,
}

struct Worker {
    rng: ChaCha8Rng,
    rec: CountRecord,
    n: f64,
    tau: f64,
    omega: f64,
    eps1: f64,
    f: f64,
    acc: f64,
    t2: f64,
    t_cut: f64,
    r_cut: f64,
    rescue: f64,
}

impl Worker {
    fn new(cfg: &CascadeConfig, rng: ChaCha8Rng) -> Self {
        let t2 = cfg.beam_splitter.transmittance();
        let (et, er) = cfg.effective_efficiencies();
        let e = (-cfg.gate / cfg.lifetime).exp();
        let rescue = if e > 0.0 {
            ((cfg.correlation_factor - 1.0) * (1.0 - e) / e).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Self {
            rng,
            rec: CountRecord::default(),
            n: cfg.decay_rate,
            tau: cfg.lifetime,
            omega: cfg.gate,
            eps1: cfg.epsilon_1,
            f: f_omega(cfg).min(1.0),
            acc: cfg.accidental_collection,
            t2,
            t_cut: et,
            r_cut: t2 + er,
            rescue,
        }
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    fn exponential(&mut self, rate: f64) -> f64 {
        let e: f64 = self.rng.sample(Exp1);
        e / rate
    }

    /// Sends one photon through the splitter and the arm detectors.
    fn route(&mut self, hits: &mut GateHits) {
        let u = self.uniform();
        if u < self.t_cut {
            hits.t = true;
        } else if u >= self.t2 && u < self.r_cut {
            hits.r = true;
        }
    }

    fn close_gate(&mut self, hits: GateHits) {
        self.rec.n1 += 1;
        self.rec.total_gates += 1;
        self.rec.nt += u64::from(hits.t);
        self.rec.nr += u64::from(hits.r);
        self.rec.nc += u64::from(hits.t && hits.r);
    }

    fn done(&self, run: RunLength, now: f64) -> bool {
        match run {
            RunLength::Gates(g) => self.rec.total_gates >= g,
            RunLength::Time(t) => now >= t,
        }
    }

    fn run_analytic(&mut self, run: RunLength) {
        let mut now = 0.0;
        while !self.done(run, now) {
            if self.n > 0.0 {
                now += self.exponential(self.n);
                if let RunLength::Time(t) = run {
                    if now >= t {
                        now = t;
                        break;
                    }
                }
            }
            if !self.bernoulli(self.eps1) {
                continue;
            }
            let mut hits = GateHits::default();
            if self.bernoulli(self.f) {
                self.rec.trigger_arrivals += 1;
                self.route(&mut hits);
            }
            if self.n > 0.0 {
                let mut s = self.exponential(self.n);
                while s < self.omega {
                    if self.bernoulli(self.acc) {
                        self.rec.accidental_photons += 1;
                        self.route(&mut hits);
                    }
                    s += self.exponential(self.n);
                }
            }
            now += self.omega;
            self.close_gate(hits);
        }
        self.rec.elapsed = now;
    }

    fn run_physical(&mut self, run: RunLength) {
        // ν₂ arrival times of photons headed for the splitter, earliest first.
        // Times are non-negative, so their bit patterns sort like the values.
        let mut pending: BinaryHeap<Reverse<u64>> = BinaryHeap::new();
        let mut now = 0.0f64;
        let mut gate: Option<(f64, GateHits)> = None;

        loop {
            let next = if self.n > 0.0 {
                now + self.exponential(self.n)
            } else {
                gate.map_or(now, |(end, _)| end)
            };

            if let Some((end, mut hits)) = gate {
                if next >= end {
                    while let Some(&Reverse(bits)) = pending.peek() {
                        if f64::from_bits(bits) >= end {
                            break;
                        }
                        pending.pop();
                        self.rec.accidental_photons += 1;
                        self.route(&mut hits);
                    }
                    self.close_gate(hits);
                    gate = None;
                    if self.n == 0.0 {
                        pending.clear();
                    }
                    now = now.max(end);
                    if self.done(run, now) {
                        break;
                    }
                } else {
                    gate = Some((end, hits));
                }
            }
            if let RunLength::Time(t) = run {
                if next >= t && gate.is_none() {
                    now = now.max(t);
                    break;
                }
            }

            // Arrivals before the next decay: inside the open gate they count,
            // otherwise nothing is listening.
            while let Some(&Reverse(bits)) = pending.peek() {
                if f64::from_bits(bits) >= next {
                    break;
                }
                pending.pop();
                if let Some((_, hits)) = gate.as_mut() {
                    let mut h = *hits;
                    self.rec.accidental_photons += 1;
                    self.route(&mut h);
                    *hits = h;
                }
            }

            now = next;
            let delay = self.exponential(1.0 / self.tau);
            let arrival = now + delay;
            if gate.is_some() || !self.bernoulli(self.eps1) {
                if self.bernoulli(self.acc) {
                    pending.push(Reverse(arrival.to_bits()));
                }
                continue;
            }

            let mut hits = GateHits::default();
            if delay < self.omega {
                self.rec.trigger_arrivals += 1;
                self.route(&mut hits);
            } else if self.bernoulli(self.rescue) {
                self.route(&mut hits);
            }
            gate = Some((now + self.omega, hits));
        }
        self.rec.elapsed = now;
    }
}

/// One row of a g⁽²⁾(Nω) sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub n_omega: f64,
    pub alpha_mc: f64,
    pub alpha_analytic: f64,
    pub stderr: f64,
    pub gates: u64,
}

/// Point `index` of a sweep: the template at decay rate `Nω/ω` and a
/// seed offset by the point index.
pub fn sweep_point_config(template: &CascadeConfig, n_omega: f64, index: usize) -> CascadeConfig {
    let mut cfg = template.clone();
    cfg.decay_rate = n_omega / template.gate;
    cfg.seed = template.seed.wrapping_add(index as u64);
    cfg
}

/// Runs [`simulate`] at each `Nω` and tabulates Monte Carlo against theory.
pub fn sweep_curve(
    template: &CascadeConfig,
    n_omega_values: &[f64],
) -> Result<Vec<SweepRow>, CascadeError> {
    sweep_curve_with(template, n_omega_values, simulate)
}

/// [`sweep_curve`] with a caller-supplied runner, e.g. a parallel one.
pub fn sweep_curve_with<F>(
    template: &CascadeConfig,
    n_omega_values: &[f64],
    mut runner: F,
) -> Result<Vec<SweepRow>, CascadeError>
where
    F: FnMut(&CascadeConfig) -> Result<CountRecord, CascadeError>,
{
    if n_omega_values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(CascadeError::Config("Nω values must be finite and non-negative"));
    }
    let f = f_omega(template);
    n_omega_values
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cfg = sweep_point_config(template, x, i);
            let rec = runner(&cfg)?;
            Ok(SweepRow {
                n_omega: x,
                alpha_mc: measured_alpha(&rec)?,
                alpha_analytic: g2_analytic(x, f),
                stderr: alpha_stderr(&rec)?,
                gates: rec.total_gates,
            })
        })
        .collect()
}
