//! The graph model of random groups: S-labellings of a finite graph,
//! relators from fundamental cycles, push-forward walks and their
//! weighted-sum decomposition, Bernoulli tail bounds, the transplanted
//! spectral-gap inequality, and the fixed-point pipeline constants.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::cat0::{CatPoint, CatSpace};
use crate::energy::{
    concat_reduced, free_walk_distribution, inverse, push_reduced, vertex_energy_only, Word,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Orientation-consistent assignment of signed generators to the directed
/// edges of a graph: each undirected edge carries the label of its
/// low-to-high orientation, the reverse direction gets the inverse.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SLabelling {
    pub rank: usize,
    labels: Vec<i8>,
}

impl SLabelling {
    pub fn from_labels(rank: usize, labels: Vec<i8>) -> Result<SLabelling> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank k must be >= 1".into()));
        }
        for &l in &labels {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::InvalidParameter(format!("label {l} out of range")));
            }
        }
        Ok(SLabelling { rank, labels })
    }

    /// Label of the directed edge leaving `from` along edge `eid`.
    pub fn label(&self, graph: &Graph, eid: usize, from: usize) -> i8 {
        let (a, _) = graph.edge(eid);
        if from == a {
            self.labels[eid]
        } else {
            -self.labels[eid]
        }
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }
}

fn check_random_group_graph(graph: &Graph) -> Result<()> {
    for u in 0..graph.vertex_count() {
        if graph.degree(u) < 2 {
            return Err(Error::Precondition(format!(
                "vertex {u} has degree {} < 2",
                graph.degree(u)
            )));
        }
    }
    Ok(())
}

/// Uniform random labelling: one of `2k` signed generators per edge,
/// independently, deterministic under the seed.
pub fn sample_labelling(graph: &Graph, k: usize, seed: u64) -> Result<SLabelling> {
    if k == 0 {
        return Err(Error::InvalidParameter("rank k must be >= 1".into()));
    }
    check_random_group_graph(graph)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..graph.edge_count())
        .map(|_| {
            let x = rng.gen_range(0..2 * k);
            if x < k {
                (x + 1) as i8
            } else {
                -((x - k + 1) as i8)
            }
        })
        .collect();
    Ok(SLabelling { rank: k, labels })
}

/// Reduced words of the fundamental cycles of a spanning tree at
/// `basepoint`; they normally generate the same quotient as all cycle
/// words. A tree graph yields no relators.
pub fn relators(graph: &Graph, labelling: &SLabelling, basepoint: usize) -> Result<Vec<Word>> {
    if basepoint >= graph.vertex_count() {
        return Err(Error::VertexOutOfRange {
            index: basepoint,
            vertex_count: graph.vertex_count(),
        });
    }
    let n = graph.vertex_count();
    let mut word_to: Vec<Option<Word>> = vec![None; n];
    let mut tree_edge = vec![false; graph.edge_count()];
    word_to[basepoint] = Some(Word::new());
    let mut queue = std::collections::VecDeque::from([basepoint]);
    while let Some(u) = queue.pop_front() {
        let wu = word_to[u].clone().expect("visited");
        for &(v, eid) in graph.neighbors(u) {
            if word_to[v].is_none() {
                let mut wv = wu.clone();
                push_reduced(&mut wv, labelling.label(graph, eid, u));
                word_to[v] = Some(wv);
                tree_edge[eid] = true;
                queue.push_back(v);
            }
        }
    }
    let mut out = Vec::new();
    for (eid, &(u, v)) in graph.edges().iter().enumerate() {
        if tree_edge[eid] {
            continue;
        }
        let wu = word_to[u].as_ref().expect("connected");
        let wv = word_to[v].as_ref().expect("connected");
        let mut word = wu.clone();
        push_reduced(&mut word, labelling.label(graph, eid, u));
        let word = concat_reduced(&word, &inverse(wv));
        out.push(word);
    }
    Ok(out)
}

/// One row of the push-forward walk: total mass of the n-step walks of
/// the graph, grouped by the reduced word their labels spell. Serialized
/// with words rendered as text keys (`"1 -2"`, identity `"e"`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PushforwardDto", into = "PushforwardDto")]
pub struct PushforwardKernel {
    pub steps: usize,
    pub table: BTreeMap<Word, f64>,
}

#[derive(Serialize, Deserialize)]
struct PushforwardDto {
    steps: usize,
    table: BTreeMap<String, f64>,
}

impl From<PushforwardKernel> for PushforwardDto {
    fn from(k: PushforwardKernel) -> Self {
        PushforwardDto {
            steps: k.steps,
            table: k
                .table
                .iter()
                .map(|(w, &p)| (crate::energy::word_to_string(w), p))
                .collect(),
        }
    }
}

impl TryFrom<PushforwardDto> for PushforwardKernel {
    type Error = Error;
    fn try_from(dto: PushforwardDto) -> Result<PushforwardKernel> {
        let mut table = BTreeMap::new();
        for (s, p) in dto.table {
            table.insert(crate::energy::word_from_string(&s)?, p);
        }
        Ok(PushforwardKernel {
            steps: dto.steps,
            table,
        })
    }
}

impl PushforwardKernel {
    pub fn mass(&self, w: &Word) -> f64 {
        self.table.get(w).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.table.values().sum()
    }
}

const WALK_BUDGET: u64 = 20_000_000;

/// Exact enumeration of all n-step walks, weighted `ν(p₀)·μ(p⃗)`.
pub fn pushforward_walk(
    graph: &Graph,
    labelling: &SLabelling,
    n: usize,
) -> Result<PushforwardKernel> {
    if n == 0 || n > 8 {
        return Err(Error::SizeLimit(
            "push-forward walks support 1 <= n <= 8".into(),
        ));
    }
    let max_degree = (0..graph.vertex_count())
        .map(|u| graph.degree(u))
        .max()
        .unwrap_or(0) as u64;
    let budget = (graph.vertex_count() as u64).saturating_mul(max_degree.saturating_pow(n as u32));
    if budget > WALK_BUDGET {
        return Err(Error::SizeLimit(format!(
            "≈{budget} walks exceed the enumeration budget"
        )));
    }
    let (_, nu) = graph.standard_walk();
    let mut table = BTreeMap::new();
    let mut word = Word::new();
    for start in 0..graph.vertex_count() {
        walk_rec(
            graph,
            labelling,
            start,
            n,
            nu.weight(start),
            &mut word,
            &mut table,
        );
    }
    Ok(PushforwardKernel { steps: n, table })
}

fn walk_rec(
    graph: &Graph,
    labelling: &SLabelling,
    at: usize,
    remaining: usize,
    mass: f64,
    word: &mut Word,
    table: &mut BTreeMap<Word, f64>,
) {
    if remaining == 0 {
        *table.entry(word.clone()).or_insert(0.0) += mass;
        return;
    }
    let step = mass / graph.degree(at) as f64;
    for &(v, eid) in graph.neighbors(at) {
        let s = labelling.label(graph, eid, at);
        if word.last() == Some(&-s) {
            let cancelled = word.pop().expect("nonempty");
            walk_rec(graph, labelling, v, remaining - 1, step, word, table);
            word.push(cancelled);
        } else {
            word.push(s);
            walk_rec(graph, labelling, v, remaining - 1, step, word, table);
            word.pop();
        }
    }
}

/// The distance-profile decomposition of the expected push-forward walk:
/// `P^n(l) = Σ_u ν(u) P^n_u(l)` where `P^n_u(l)` is the probability that
/// an n-step walk from `u` ends at hop distance `l`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedSumDecomposition {
    pub steps: usize,
    /// `P^n(l)` for `l = 0..=n`.
    pub weights: Vec<f64>,
    /// `P^n_u(l)` per start vertex.
    pub per_start: Vec<Vec<f64>>,
    /// `Q^n = Σ_{l ≤ √n} P^n(l)`.
    pub tail: f64,
}

pub fn p_profile(graph: &Graph, n: usize) -> Result<WeightedSumDecomposition> {
    if n == 0 {
        return Err(Error::InvalidParameter("profile needs n >= 1".into()));
    }
    let (kernel, nu) = graph.standard_walk();
    let kn = kernel.power(n)?;
    let mut weights = vec![0.0; n + 1];
    let mut per_start = Vec::with_capacity(graph.vertex_count());
    for u in 0..graph.vertex_count() {
        let dist = graph.bfs_distances(u);
        let mut row = vec![0.0; n + 1];
        for &(v, p) in kn.row(u) {
            let l = dist[v].expect("connected");
            row[l] += p;
        }
        for (l, &p) in row.iter().enumerate() {
            weights[l] += nu.weight(u) * p;
        }
        per_start.push(row);
    }
    let tail = weights
        .iter()
        .enumerate()
        .filter(|&(l, _)| l * l <= n)
        .map(|(_, &p)| p)
        .sum();
    Ok(WeightedSumDecomposition {
        steps: n,
        weights,
        per_start,
        tail,
    })
}

fn check_weighted_sum_preconditions(graph: &Graph, n: usize) -> Result<()> {
    check_random_group_graph(graph)?;
    let girth = graph
        .girth()
        .ok_or_else(|| Error::Precondition("acyclic graphs are excluded".into()))?;
    if 2 * n >= girth {
        return Err(Error::Precondition(format!(
            "n = {n} must satisfy n < girth/2 = {}",
            girth as f64 / 2.0
        )));
    }
    Ok(())
}

/// Exact expectation `Σ_l P^n(l) μ_Γ^l(e, ·)` of the push-forward walk
/// over all labellings, valid when `n < girth/2` (balls of radius n are
/// trees, so word length equals graph displacement).
pub fn expected_pushforward(graph: &Graph, k: usize, n: usize) -> Result<BTreeMap<Word, f64>> {
    check_weighted_sum_preconditions(graph, n)?;
    let profile = p_profile(graph, n)?;
    let mut out: BTreeMap<Word, f64> = BTreeMap::new();
    if profile.weights[0] > 0.0 {
        out.insert(Word::new(), profile.weights[0]);
    }
    for l in 1..=n {
        if profile.weights[l] == 0.0 {
            continue;
        }
        let dist = free_walk_distribution(k, l)?;
        for (w, p) in dist.iter() {
            *out.entry(w.clone()).or_insert(0.0) += profile.weights[l] * p;
        }
    }
    Ok(out)
}

/// Brute-force expectation by enumerating every labelling (small graphs).
pub fn exhaustive_expected_pushforward(
    graph: &Graph,
    k: usize,
    n: usize,
) -> Result<BTreeMap<Word, f64>> {
    check_random_group_graph(graph)?;
    let e = graph.edge_count();
    let count = (2u64 * k as u64)
        .checked_pow(e as u32)
        .ok_or(Error::Overflow("labelling count"))?;
    if count > 1_000_000 {
        return Err(Error::SizeLimit(format!(
            "{count} labellings exceed the enumeration cap"
        )));
    }
    let mut acc: BTreeMap<Word, f64> = BTreeMap::new();
    let mut labels = vec![1i8; e];
    let to_label = |x: u64| -> i8 {
        if x < k as u64 {
            (x + 1) as i8
        } else {
            -((x - k as u64 + 1) as i8)
        }
    };
    for idx in 0..count {
        let mut rest = idx;
        for slot in labels.iter_mut() {
            *slot = to_label(rest % (2 * k as u64));
            rest /= 2 * k as u64;
        }
        let labelling = SLabelling {
            rank: k,
            labels: labels.clone(),
        };
        let push = pushforward_walk(graph, &labelling, n)?;
        for (w, p) in push.table {
            *acc.entry(w).or_insert(0.0) += p / count as f64;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedSumReport {
    pub trials: usize,
    pub steps: usize,
    /// max over words of |MC mean - exact|.
    pub max_deviation: f64,
    /// max over words of (deviation - 3σ budget); pass ⟺ ≤ 0.
    pub worst_excess: f64,
    pub identity_mass_exact: f64,
    pub identity_mass_mc: f64,
    pub identity_budget: f64,
    pub pass: bool,
}

/// Monte Carlo check of the weighted-sum decomposition: the mean of the
/// push-forward walk over sampled labellings against `Σ_l P(l) μ_Γ^l`,
/// word by word, with 3σ binomial budgets.
pub fn weighted_sum_check(
    graph: &Graph,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<WeightedSumReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let exact = expected_pushforward(graph, k, n)?;
    let mut mc: BTreeMap<Word, f64> = BTreeMap::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let labelling = sample_labelling(graph, k, rng.gen())?;
        let push = pushforward_walk(graph, &labelling, n)?;
        for (w, p) in push.table {
            *mc.entry(w).or_insert(0.0) += p / trials as f64;
        }
    }
    let mut max_deviation: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut words: std::collections::BTreeSet<Word> = exact.keys().cloned().collect();
    words.extend(mc.keys().cloned());
    for w in &words {
        let e = exact.get(w).copied().unwrap_or(0.0);
        let m = mc.get(w).copied().unwrap_or(0.0);
        let dev = (e - m).abs();
        // each trial's mass lies in [0, 1] with mean e, so Var ≤ e(1-e)
        let sigma = (e * (1.0 - e) / trials as f64).sqrt();
        let budget = (3.0 * sigma).max(1e-9);
        max_deviation = max_deviation.max(dev);
        worst_excess = worst_excess.max(dev - budget);
    }
    let identity_mass_exact = exact.get(&Word::new()).copied().unwrap_or(0.0);
    let identity_mass_mc = mc.get(&Word::new()).copied().unwrap_or(0.0);
    let identity_sigma = (identity_mass_exact * (1.0 - identity_mass_exact) / trials as f64).sqrt();
    Ok(WeightedSumReport {
        trials,
        steps: n,
        max_deviation,
        worst_excess,
        identity_mass_exact,
        identity_mass_mc,
        identity_budget: (3.0 * identity_sigma).max(1e-9),
        pass: worst_excess <= 0.0,
    })
}

/// `b^n(r) = P(|S_n| ≤ r)` for the standard ±1 Bernoulli walk, summed
/// over the binomial window with a log-space recurrence.
pub fn bernoulli_b(n: u64, r: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut ln_p = -(n as f64) * std::f64::consts::LN_2; // ln P(j=0)
    let mut total = 0.0;
    for j in 0..=n {
        if j > 0 {
            ln_p += (((n - j + 1) as f64) / j as f64).ln();
        }
        let displacement = (2 * j as i64 - n as i64).unsigned_abs() as f64;
        if displacement <= r {
            total += ln_p.exp();
        }
    }
    total.min(1.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BernoulliBound {
    pub n: u64,
    /// `b^n(√n)`.
    pub value: f64,
    /// `max_{2 ≤ m ≤ n} b^m(√m)`: the observed absolute constant `C < 1`.
    pub c_observed: f64,
    pub c_argmax: u64,
}

pub fn bernoulli_bound(n: u64) -> Result<BernoulliBound> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "Bernoulli bound needs n >= 2".into(),
        ));
    }
    let value = bernoulli_b(n, (n as f64).sqrt());
    let mut c_observed = 0.0;
    let mut c_argmax = 2;
    for m in 2..=n.min(10_000) {
        let b = bernoulli_b(m, (m as f64).sqrt());
        if b > c_observed {
            c_observed = b;
            c_argmax = m;
        }
    }
    Ok(BernoulliBound {
        n,
        value,
        c_observed,
        c_argmax,
    })
}

/// Certified lower bounds for `λ₁(G, T)` used by the transplanted
/// spectral-gap inequality.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum LambdaCertificate {
    /// Euclidean target: `λ₁(G, ℝ)` itself.
    Real,
    /// `λ₁(G, T) ≥ λ₁(G, ℝ)/D²` for a target of distortion `D`.
    Distortion(f64),
    /// `λ₁(G, T) ≥ (1-δ₀)·λ₁(G, ℝ)`.
    Delta(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransplantReport {
    pub lambda_lower: f64,
    /// Rows `(n, E_{μⁿ}(φ), slack)` with
    /// `slack = (2/λ)E_μ(φ) + 1e-8 - E_{μⁿ}(φ)` (pass ⟺ all ≥ 0).
    pub rows: Vec<(usize, f64, f64)>,
    pub pass: bool,
}

/// Check `E_{μ_G^n}(φ) ≤ (2/λ_lower)·E_{μ_G}(φ) + 1e-8` for
/// `1 ≤ n ≤ n_max`. The bound uses a certified lower bound for
/// `λ₁(G, T)`, never the Wang upper-bound search: a smaller λ only makes
/// the asserted inequality weaker, hence still valid.
pub fn spectral_transplant_check(
    graph: &Graph,
    target: &CatSpace,
    phi: &[CatPoint],
    n_max: usize,
    certificate: LambdaCertificate,
) -> Result<TransplantReport> {
    let lambda_real = graph.spectral_gap_real()?;
    let lambda_lower = match certificate {
        LambdaCertificate::Real => {
            if !matches!(target, CatSpace::Euclidean { .. }) {
                return Err(Error::Precondition(
                    "the Real certificate applies to Euclidean targets only".into(),
                ));
            }
            lambda_real
        }
        LambdaCertificate::Distortion(d) => {
            if d < 1.0 {
                return Err(Error::InvalidParameter("distortion below 1".into()));
            }
            lambda_real / (d * d)
        }
        LambdaCertificate::Delta(delta0) => {
            if !(0.0..1.0).contains(&delta0) {
                return Err(Error::InvalidParameter("δ₀ must lie in [0, 1)".into()));
            }
            (1.0 - delta0) * lambda_real
        }
    };
    let e1 = vertex_energy_only(graph, target, phi, 1)?;
    let bound = 2.0 / lambda_lower * e1 + 1e-8;
    let mut rows = Vec::with_capacity(n_max);
    let mut pass = true;
    for n in 1..=n_max {
        let en = vertex_energy_only(graph, target, phi, n)?;
        let slack = bound - en;
        pass &= slack >= 0.0;
        rows.push((n, en, slack));
    }
    Ok(TransplantReport {
        lambda_lower,
        rows,
        pass,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineResult {
    pub lambda0: f64,
    pub c_abs: f64,
    /// Minimal n ≥ 2 with `C/λ₀ < √n`.
    pub n: usize,
    /// `√n - C/λ₀ > 0`.
    pub epsilon: f64,
    /// Girth requirement `g₀ = 2n`.
    pub g0: usize,
    /// Descent constant `2ε²/(n²(n-1)²)`.
    pub c_grad: f64,
    /// When a graph is supplied: whether `girth(G) ≥ g₀`.
    pub girth_ok: Option<bool>,
}

/// Default for the absolute constant: `8/(1 - C_observed)` with
/// `C_observed = max_m b^m(√m) = 0.875`, i.e. 64. The constant stays an
/// explicit input everywhere; this default only makes the dependence
/// visible.
pub fn default_c_abs() -> f64 {
    8.0 / (1.0 - 0.875)
}

/// Evaluate the fixed-point pipeline constants from a spectral threshold
/// `λ₀` and the absolute constant `C`.
pub fn fixed_point_pipeline(
    lambda0: f64,
    c_abs: f64,
    graph: Option<&Graph>,
) -> Result<PipelineResult> {
    if lambda0 <= 0.0 || lambda0.is_nan() {
        return Err(Error::InvalidParameter("λ₀ must be positive".into()));
    }
    if c_abs <= 0.0 || c_abs.is_nan() {
        return Err(Error::InvalidParameter("C must be positive".into()));
    }
    let ratio = c_abs / lambda0;
    // minimal n with √n > ratio, clamped to n ≥ 2 so that the descent
    // constant 2ε²/(n²(n-1)²) is defined
    let mut n = (ratio * ratio).floor() as usize + 1;
    while ((n as f64).sqrt() <= ratio) || n < 2 {
        n += 1;
    }
    let epsilon = (n as f64).sqrt() - ratio;
    let nf = n as f64;
    let c_grad = 2.0 * epsilon * epsilon / (nf * nf * (nf - 1.0) * (nf - 1.0));
    let girth_ok = graph.map(|g| g.girth().is_some_and(|girth| girth >= 2 * n));
    Ok(PipelineResult {
        lambda0,
        c_abs,
        n,
        epsilon,
        g0: 2 * n,
        c_grad,
        girth_ok,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub trials: usize,
    /// Frequency of `μ̄ⁿ_α ≥ ½ μ̄ⁿ_G` on the support of the right side.
    pub freq_half_lower: f64,
    /// Frequency of `μ̄¹_α ≤ μ_Γ` everywhere.
    pub freq_step_upper: f64,
}

/// Empirical frequencies of the two concentration events over sampled
/// labellings. Frequencies only: the inequality's constants are not
/// pinned down, so nothing is asserted.
pub fn concentration_experiment(
    graph: &Graph,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if trials == 0 {
        return Ok(ConcentrationReport {
            trials: 0,
            freq_half_lower: 0.0,
            freq_step_upper: 0.0,
        });
    }
    let expected = expected_pushforward(graph, k, n)?;
    let step_bound = 1.0 / (2 * k) as f64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut half_hits = 0usize;
    let mut step_hits = 0usize;
    for _ in 0..trials {
        let labelling = sample_labelling(graph, k, rng.gen())?;
        let push = pushforward_walk(graph, &labelling, n)?;
        if expected
            .iter()
            .all(|(w, &e)| push.mass(w) >= 0.5 * e - 1e-12)
        {
            half_hits += 1;
        }
        let one = pushforward_walk(graph, &labelling, 1)?;
        if one.table.values().all(|&p| p <= step_bound + 1e-12) {
            step_hits += 1;
        }
    }
    Ok(ConcentrationReport {
        trials,
        freq_half_lower: half_hits as f64 / trials as f64,
        freq_step_upper: step_hits as f64 / trials as f64,
    })
}
