//! Randomized multi-start minor embedding in the style of Cai, Macready and Roy.
//!
//! Variables are placed one at a time. A new chain is grown from the qubit that
//! minimises the summed weighted distance to every embedded neighbour chain,
//! where qubit weight grows exponentially with the number of chains already
//! using it. Refinement passes re-place every variable until no qubit is
//! shared, the step budget runs out, or progress stalls and the search restarts.
//! Qubits that stay shared across passes accumulate a congestion history that
//! multiplies their weight, which dissolves deadlocks where every single
//! re-placement is locally optimal.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chimera::{HardwareGraph, QubitId};
use crate::embedding::Embedding;
use crate::problem::ProblemGraph;
use crate::validate::validate;

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicParams {
    pub seed: u64,
    /// Restarts allowed after the first attempt stalls.
    pub tries: usize,
    /// Refinement passes without progress before a restart.
    pub max_no_improvement: usize,
    /// Chain placements allowed across all tries.
    pub max_steps: u64,
    /// Wall-clock cutoff; `None` keeps runs deterministic.
    pub max_time: Option<Duration>,
    /// Qubit weight is `(1 + history) · base^usage`, with `base = weight_base · penalty_growth^pass`.
    pub weight_base: f64,
    pub penalty_growth: f64,
    /// Cap on the usage base.
    pub max_base: f64,
    /// Added to a qubit's history each pass it stays shared.
    pub history_step: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        Self {
            seed: 0,
            tries: 10,
            max_no_improvement: 10,
            max_steps: 100_000,
            max_time: None,
            weight_base: 2.0,
            penalty_growth: 1.5,
            max_base: 16.0,
            history_step: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicOutcome {
    pub embedding: Option<Embedding>,
    pub steps: u64,
    pub tries_used: usize,
}

impl HeuristicOutcome {
    pub fn success(&self) -> bool {
        self.embedding.is_some()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NONE: u32 = u32::MAX;

struct Search<'a> {
    problem: &'a ProblemGraph,
    hw: &'a HardwareGraph,
    live: Vec<u32>,
    chains: Vec<Vec<u32>>,
    usage: Vec<u32>,
    /// Congestion history: passes in which the qubit ended up shared.
    history: Vec<f64>,
    weight_base: f64,
    // scratch reused across placements
    weights: Vec<f64>,
    dist: Vec<f64>,
    parent: Vec<u32>,
    member: Vec<bool>,
    heap: BinaryHeap<Entry>,
}

impl Search<'_> {
    fn refresh_weights(&mut self) {
        for (q, w) in self.weights.iter_mut().enumerate() {
            *w = (1.0 + self.history[q]) * self.weight_base.powi(self.usage[q] as i32);
        }
    }

    /// Node-weighted distances from chain `u` into block `k`; sources cost nothing.
    fn dijkstra(&mut self, u: usize, k: usize) {
        let n = self.usage.len();
        let dist = &mut self.dist[k * n..(k + 1) * n];
        let parent = &mut self.parent[k * n..(k + 1) * n];
        dist.fill(f64::INFINITY);
        parent.fill(NONE);
        let heap = &mut self.heap;
        heap.clear();
        for &s in &self.chains[u] {
            dist[s as usize] = 0.0;
            heap.push(Entry(0.0, s));
        }
        while let Some(Entry(d, q)) = heap.pop() {
            if d > dist[q as usize] {
                continue;
            }
            for p in self.hw.adjacent(QubitId(q)) {
                let p = p.index();
                let nd = d + self.weights[p];
                if nd < dist[p] {
                    dist[p] = nd;
                    parent[p] = q;
                    heap.push(Entry(nd, p as u32));
                }
            }
        }
    }

    fn remove(&mut self, v: usize) {
        for &q in &self.chains[v] {
            self.usage[q as usize] -= 1;
        }
        self.chains[v].clear();
    }

    /// Re-place variable `v` against the current chains of its neighbours.
    fn place(&mut self, v: usize, rng: &mut ChaCha8Rng) {
        self.remove(v);
        let nbrs: Vec<usize> = self
            .problem
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty())
            .collect();
        let n = self.usage.len();
        if nbrs.is_empty() {
            let best = self
                .live
                .iter()
                .map(|&q| self.usage[q as usize])
                .min()
                .unwrap_or(0);
            let pool: Vec<u32> = self
                .live
                .iter()
                .copied()
                .filter(|&q| self.usage[q as usize] == best)
                .collect();
            let q = *pool.choose(rng).expect("chip has live qubits");
            self.chains[v] = vec![q];
            self.usage[q as usize] += 1;
            return;
        }
        self.refresh_weights();
        let need = nbrs.len() * n;
        if self.dist.len() < need {
            self.dist.resize(need, 0.0);
            self.parent.resize(need, NONE);
            self.member.resize(need, false);
        }
        for (k, &u) in nbrs.iter().enumerate() {
            for &q in &self.chains[u] {
                self.member[k * n + q as usize] = true;
            }
            self.dijkstra(u, k);
        }
        let mut best = f64::INFINITY;
        let mut ties: Vec<u32> = Vec::new();
        for &q in &self.live {
            let w = self.weights[q as usize];
            let mut cost = 0.0;
            for k in 0..nbrs.len() {
                let i = k * n + q as usize;
                cost += if self.member[i] { w } else { self.dist[i] };
            }
            match cost.partial_cmp(&best) {
                Some(Ordering::Less) => {
                    best = cost;
                    ties.clear();
                    ties.push(q);
                }
                Some(Ordering::Equal) => ties.push(q),
                _ => {}
            }
        }
        let mut chain = Vec::new();
        match ties.choose(rng) {
            Some(&root) => {
                chain.push(root);
                for k in 0..nbrs.len() {
                    let mut q = root;
                    while !self.member[k * n + q as usize] {
                        let p = self.parent[k * n + q as usize];
                        if p == NONE || self.member[k * n + p as usize] {
                            break;
                        }
                        chain.push(p);
                        q = p;
                    }
                }
            }
            // neighbours unreachable: fall back to an isolated placement
            None => chain.push(self.live[rng.gen_range(0..self.live.len())]),
        }
        for (k, &u) in nbrs.iter().enumerate() {
            for &q in &self.chains[u] {
                self.member[k * n + q as usize] = false;
            }
        }
        chain.sort_unstable();
        chain.dedup();
        for &q in &chain {
            self.usage[q as usize] += 1;
        }
        self.chains[v] = chain;
    }

    /// (largest usage, qubits used more than once, total chain size)
    fn score(&self) -> (u32, usize, usize) {
        let max = self.usage.iter().copied().max().unwrap_or(0);
        let over = self.usage.iter().filter(|&&u| u > 1).count();
        (max, over, self.chains.iter().map(Vec::len).sum())
    }
}

/// Embed `problem` into `hw` with a deterministic stream seeded from `params.seed`.
pub fn heuristic_embed(
    problem: &ProblemGraph,
    hw: &HardwareGraph,
    params: &HeuristicParams,
) -> HeuristicOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    run(problem, hw, params, &mut rng)
}

fn run(
    problem: &ProblemGraph,
    hw: &HardwareGraph,
    params: &HeuristicParams,
    rng: &mut ChaCha8Rng,
) -> HeuristicOutcome {
    let spec = hw.spec();
    let live: Vec<u32> = (0..spec.num_qubits() as u32)
        .filter(|&q| hw.is_operable(QubitId(q)))
        .collect();
    let nv = problem.num_vertices();
    let fail = |steps, tries_used| HeuristicOutcome {
        embedding: None,
        steps,
        tries_used,
    };
    if live.is_empty() || nv > live.len() {
        return fail(0, 0);
    }
    let start = Instant::now();
    let out_of_time = || params.max_time.is_some_and(|t| start.elapsed() >= t);
    let mut steps = 0u64;
    let mut search = Search {
        problem,
        hw,
        live,
        chains: vec![Vec::new(); nv],
        usage: vec![0; spec.num_qubits()],
        history: vec![0.0; spec.num_qubits()],
        weight_base: params.weight_base,
        weights: vec![1.0; spec.num_qubits()],
        dist: Vec::new(),
        parent: Vec::new(),
        member: Vec::new(),
        heap: BinaryHeap::new(),
    };
    let mut order: Vec<usize> = (0..nv).collect();
    for attempt in 0..params.tries.max(1) {
        search.chains.iter_mut().for_each(Vec::clear);
        search.usage.fill(0);
        search.history.fill(0.0);
        search.weight_base = params.weight_base;
        let mut best = (u32::MAX, usize::MAX, usize::MAX);
        let mut stall = 0;
        for pass in 0u32.. {
            order.shuffle(rng);
            for &v in &order {
                if steps >= params.max_steps || out_of_time() {
                    return fail(steps, attempt + 1);
                }
                search.place(v, rng);
                steps += 1;
            }
            let now = search.score();
            if now.0 <= 1 {
                let mut emb = Embedding::new(spec);
                for (v, chain) in search.chains.iter().enumerate() {
                    emb.insert(problem.label(v), chain.iter().map(|&q| QubitId(q)))
                        .expect("chains are non-empty");
                }
                if validate(problem, hw, &emb).is_valid() {
                    return HeuristicOutcome {
                        embedding: Some(emb),
                        steps,
                        tries_used: attempt + 1,
                    };
                }
            }
            if now < best {
                best = now;
                stall = 0;
            } else {
                stall += 1;
                if stall >= params.max_no_improvement {
                    break;
                }
            }
            for (h, &u) in search.history.iter_mut().zip(&search.usage) {
                if u > 1 {
                    *h += params.history_step;
                }
            }
            // overlap grows more expensive every pass
            search.weight_base = (params.weight_base * params.penalty_growth.powi(pass as i32 + 1))
                .min(params.max_base);
        }
    }
    fail(steps, params.tries.max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: u64,
    pub success: bool,
    pub steps: u64,
    pub qubits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessRate {
    pub rate: f64,
    pub trials: Vec<TrialResult>,
}

/// Run independent trials in parallel; trial `t` draws from stream `t` of the base seed.
pub fn success_rate(
    problem: &ProblemGraph,
    hw: &HardwareGraph,
    params: &HeuristicParams,
    trials: u64,
) -> SuccessRate {
    let trials: Vec<TrialResult> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(t);
            let out = run(problem, hw, params, &mut rng);
            TrialResult {
                trial: t,
                success: out.success(),
                steps: out.steps,
                qubits: out.embedding.as_ref().map_or(0, Embedding::qubit_total),
            }
        })
        .collect();
    let ok = trials.iter().filter(|t| t.success).count();
    SuccessRate {
        rate: ok as f64 / trials.len() as f64,
        trials,
    }
}
