//! Exhaustive and randomized search for graphs without a satisfactory vertex.
//!
//! Exhaustive mode walks every labeled digon-free digraph on `n` vertices.
//! Each unordered pair `(i, j)`, `i < j`, takes one of three states (absent,
//! `i -> j`, `j -> i`), pairs are ordered `(0,1), (0,2), ..., (n-2,n-1)`, and
//! graph `index` is the base-3 number whose most significant digit is the
//! state of pair `(0,1)`. Index 0 is the empty graph.
//!
//! Random mode draws `count` graphs from a model; sample `i` is generated
//! from its own ChaCha8 stream `(seed, i)`, so results never depend on how
//! samples are spread over workers.
//!
//! Work is cut into fixed chunks independent of the worker count and merged
//! in chunk order, which keeps reports byte-identical for any `workers`.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::digraph::Digraph;
use crate::error::GraphError;
use crate::filter::{run_filter, FilterReport, CONDITION_COUNT};
use crate::io::write_digraph;
use crate::structure::has_transitive_triangle;

/// Default bound on `n` for exhaustive mode.
pub const DEFAULT_CEILING: usize = 6;

/// Largest `n` whose graph count `3^(n(n-1)/2)` fits the `u64` index space.
pub const MAX_ENUMERABLE_N: usize = 9;

const EXHAUSTIVE_CHUNK: u64 = 59_049;
const RANDOM_CHUNK: u64 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("n = {n} exceeds the exhaustive ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("no transitive-triangle-free sample after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `3^(n(n-1)/2)`; `None` when it overflows `u64`.
pub fn graph_count(n: usize) -> Option<u64> {
    3u64.checked_pow(pair_count(n) as u32)
}

fn check_enumerable(n: usize, ceiling: usize) -> Result<u64, SearchError> {
    if n == 0 {
        return Err(GraphError::EmptyVertexSet.into());
    }
    let ceiling = ceiling.min(MAX_ENUMERABLE_N);
    if n > ceiling {
        return Err(SearchError::CeilingExceeded { n, ceiling });
    }
    Ok(graph_count(n).expect("n within MAX_ENUMERABLE_N"))
}

/// Position in the exhaustive stream, kept as base-3 digits plus word-sized
/// adjacency rows so stepping to the next graph touches only changed pairs.
#[derive(Clone, Debug)]
pub struct PairStateCursor {
    n: usize,
    pairs: Vec<(u8, u8)>,
    digits: Vec<u8>,
    rows: [u16; MAX_ENUMERABLE_N],
}

impl PairStateCursor {
    /// Cursor on graph `index`; `index` must be below `graph_count(n)`.
    pub fn at(n: usize, index: u64) -> Self {
        assert!((1..=MAX_ENUMERABLE_N).contains(&n));
        let mut pairs = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i as u8, j as u8));
            }
        }
        let mut digits = vec![0u8; pairs.len()];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = (rest % 3) as u8;
            rest /= 3;
        }
        assert_eq!(rest, 0, "index beyond the enumeration");
        let mut cursor = PairStateCursor {
            n,
            pairs,
            digits,
            rows: [0; MAX_ENUMERABLE_N],
        };
        for k in 0..cursor.digits.len() {
            cursor.apply(k, cursor.digits[k]);
        }
        cursor
    }

    #[inline]
    fn apply(&mut self, pair: usize, state: u8) {
        let (i, j) = self.pairs[pair];
        let (i, j) = (i as usize, j as usize);
        self.rows[i] &= !(1 << j);
        self.rows[j] &= !(1 << i);
        match state {
            1 => self.rows[i] |= 1 << j,
            2 => self.rows[j] |= 1 << i,
            _ => {}
        }
    }

    /// Steps to the next index. Returns `false` after wrapping past the end.
    #[inline]
    pub fn advance(&mut self) -> bool {
        for k in (0..self.digits.len()).rev() {
            let next = (self.digits[k] + 1) % 3;
            self.digits[k] = next;
            self.apply(k, next);
            if next != 0 {
                return true;
            }
        }
        false
    }

    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.n]
    }

    pub fn to_digraph(&self) -> Digraph {
        let out = self
            .rows()
            .iter()
            .map(|&row| {
                let mut bits = FixedBitSet::with_capacity(self.n);
                let mut rest = row;
                while rest != 0 {
                    bits.insert(rest.trailing_zeros() as usize);
                    rest &= rest - 1;
                }
                bits
            })
            .collect();
        Digraph::from_out_rows(self.n, out)
    }

    #[inline]
    pub fn has_satisfactory_vertex(&self) -> bool {
        small_has_satisfactory_vertex(self.rows())
    }
}

/// Condition-0 kernel on word-sized adjacency rows (`rows[u]` bit `v` set iff
/// `u -> v`).
#[inline]
pub fn small_has_satisfactory_vertex(rows: &[u16]) -> bool {
    for (u, &first) in rows.iter().enumerate() {
        if first == 0 {
            return true;
        }
        let mut reach = 0u16;
        let mut rest = first;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            reach |= rows[w];
            rest &= rest - 1;
        }
        let second = reach & !first & !(1 << u);
        if second.count_ones() >= first.count_ones() {
            return true;
        }
    }
    false
}

/// Graph number `index` of the exhaustive stream on `n` vertices.
pub fn graph_at_index(n: usize, index: u64) -> Result<Digraph, SearchError> {
    let total = check_enumerable(n, MAX_ENUMERABLE_N)?;
    if index >= total {
        return Err(SearchError::InvalidSpec(format!(
            "index {index} out of range for n = {n} ({total} graphs)"
        )));
    }
    Ok(PairStateCursor::at(n, index).to_digraph())
}

/// Ordered stream over an index range of the exhaustive enumeration.
pub struct DigonFreeGraphs {
    cursor: PairStateCursor,
    next: u64,
    end: u64,
}

impl DigonFreeGraphs {
    pub fn range(n: usize, start: u64, end: u64) -> Result<Self, SearchError> {
        let total = check_enumerable(n, MAX_ENUMERABLE_N)?;
        let end = end.min(total);
        let start = start.min(end);
        let cursor = PairStateCursor::at(n, if start < total { start } else { 0 });
        Ok(DigonFreeGraphs {
            cursor,
            next: start,
            end,
        })
    }
}

impl Iterator for DigonFreeGraphs {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.next >= self.end {
            return None;
        }
        let g = self.cursor.to_digraph();
        self.next += 1;
        if self.next < self.end {
            self.cursor.advance();
        }
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

/// All `3^(n(n-1)/2)` labeled digon-free digraphs on `n <= ceiling` vertices.
pub fn enumerate_digon_free(n: usize, ceiling: usize) -> Result<DigonFreeGraphs, SearchError> {
    let total = check_enumerable(n, ceiling)?;
    DigonFreeGraphs::range(n, 0, total)
}

/// The RNG for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_probability(p: f64) -> Result<(), SearchError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SearchError::InvalidProbability(p))
    }
}

fn check_order(n: usize) -> Result<(), SearchError> {
    if n == 0 {
        Err(GraphError::EmptyVertexSet.into())
    } else {
        Ok(())
    }
}

fn from_pairs(n: usize, mut orient: impl FnMut(usize, usize) -> Option<bool>) -> Digraph {
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            match orient(i, j) {
                Some(true) => out[i].insert(j),
                Some(false) => out[j].insert(i),
                None => {}
            }
        }
    }
    Digraph::from_out_rows(n, out)
}

pub fn random_tournament_with<R: Rng>(n: usize, rng: &mut R) -> Result<Digraph, SearchError> {
    check_order(n)?;
    Ok(from_pairs(n, |_, _| Some(rng.random_bool(0.5))))
}

pub fn random_digon_free_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Digraph, SearchError> {
    check_order(n)?;
    check_probability(p)?;
    Ok(from_pairs(n, |_, _| {
        if rng.random_bool(p) {
            Some(rng.random_bool(0.5))
        } else {
            None
        }
    }))
}

pub fn random_acyclic_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Digraph, SearchError> {
    check_order(n)?;
    check_probability(p)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                out[order[i]].insert(order[j]);
            }
        }
    }
    Ok(Digraph::from_out_rows(n, out))
}

pub fn random_triangle_free_with<R: Rng>(
    n: usize,
    p: f64,
    max_retries: u32,
    rng: &mut R,
) -> Result<Digraph, SearchError> {
    if max_retries == 0 {
        return Err(SearchError::InvalidSpec("max_retries must be at least 1".into()));
    }
    for _ in 0..max_retries {
        let g = random_digon_free_with(n, p, rng)?;
        if !has_transitive_triangle(&g) {
            return Ok(g);
        }
    }
    Err(SearchError::RetriesExhausted {
        attempts: max_retries,
    })
}

pub fn random_tournament(n: usize, seed: u64) -> Result<Digraph, SearchError> {
    random_tournament_with(n, &mut sample_rng(seed, 0))
}

pub fn random_digon_free(n: usize, p: f64, seed: u64) -> Result<Digraph, SearchError> {
    random_digon_free_with(n, p, &mut sample_rng(seed, 0))
}

pub fn random_acyclic(n: usize, p: f64, seed: u64) -> Result<Digraph, SearchError> {
    random_acyclic_with(n, p, &mut sample_rng(seed, 0))
}

pub fn random_triangle_free(n: usize, p: f64, seed: u64, max_retries: u32) -> Result<Digraph, SearchError> {
    random_triangle_free_with(n, p, max_retries, &mut sample_rng(seed, 0))
}

/// Random-graph model for random-mode searches and `generate`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Tournament,
    DigonFree { p: f64 },
    Acyclic { p: f64 },
    TriangleFree { p: f64, max_retries: u32 },
}

impl Model {
    pub fn generate<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Digraph, SearchError> {
        match *self {
            Model::Tournament => random_tournament_with(n, rng),
            Model::DigonFree { p } => random_digon_free_with(n, p, rng),
            Model::Acyclic { p } => random_acyclic_with(n, p, rng),
            Model::TriangleFree { p, max_retries } => random_triangle_free_with(n, p, max_retries, rng),
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        match *self {
            Model::Tournament => Ok(()),
            Model::DigonFree { p } | Model::Acyclic { p } => check_probability(p),
            Model::TriangleFree { p, max_retries } => {
                check_probability(p)?;
                if max_retries == 0 {
                    return Err(SearchError::InvalidSpec("max_retries must be at least 1".into()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Random { model: Model, count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchSpec {
    pub mode: SearchMode,
    pub n: usize,
    /// Execution parameter only; never affects the report and is not echoed.
    #[serde(skip)]
    pub workers: usize,
    pub filter_enabled: bool,
    pub ceiling: usize,
}

impl SearchSpec {
    pub fn exhaustive(n: usize) -> Self {
        SearchSpec {
            mode: SearchMode::Exhaustive,
            n,
            workers: 1,
            filter_enabled: true,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn random(model: Model, n: usize, count: u64, seed: u64) -> Self {
        SearchSpec {
            mode: SearchMode::Random { model, count, seed },
            n,
            workers: 1,
            filter_enabled: true,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_filter(mut self, enabled: bool) -> Self {
        self.filter_enabled = enabled;
        self
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.workers == 0 {
            return Err(SearchError::InvalidSpec("workers must be at least 1".into()));
        }
        check_order(self.n)?;
        match self.mode {
            SearchMode::Exhaustive => check_enumerable(self.n, self.ceiling).map(|_| ()),
            SearchMode::Random { model, count, .. } => {
                if count == 0 {
                    return Err(SearchError::InvalidSpec("count must be at least 1".into()));
                }
                model.validate()
            }
        }
    }
}

/// A generated graph, identified by its enumeration index or sample index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundGraph {
    pub index: u64,
    pub graph: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Survivor {
    pub index: u64,
    pub graph: String,
    pub report: FilterReport,
}

/// Outcome of [`run_search`]. Everything except `elapsed_ms` is a pure
/// function of the spec.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub tool_version: String,
    pub spec: SearchSpec,
    pub graphs_examined: u64,
    /// Graphs with no satisfactory vertex.
    pub counterexamples_found: u64,
    pub counterexamples: Vec<FoundGraph>,
    /// Candidates that passed every filter condition.
    pub filter_survivors: Vec<Survivor>,
    /// Count of graphs whose first failing condition was `k`, indexed by `k`.
    pub per_condition_rejections: [u64; CONDITION_COUNT as usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl SearchReport {
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }

    pub fn found_anything(&self) -> bool {
        self.counterexamples_found > 0 || !self.filter_survivors.is_empty()
    }
}

#[derive(Default)]
struct ChunkTally {
    examined: u64,
    counterexamples: Vec<FoundGraph>,
    survivors: Vec<Survivor>,
    rejections: [u64; CONDITION_COUNT as usize],
}

impl ChunkTally {
    /// Records a graph already known to have no satisfactory vertex.
    fn record_counterexample(&mut self, index: u64, g: &Digraph, filter: bool) {
        let text = write_digraph(g);
        self.counterexamples.push(FoundGraph {
            index,
            graph: text.clone(),
        });
        if filter {
            self.record_filtered(index, text, run_filter(g, true));
        }
    }

    fn record_filtered(&mut self, index: u64, text: String, report: FilterReport) {
        match report.first_failure() {
            Some(v) => self.rejections[v.condition as usize] += 1,
            None => self.survivors.push(Survivor {
                index,
                graph: text,
                report,
            }),
        }
    }

    fn merge(mut self, other: ChunkTally) -> ChunkTally {
        self.examined += other.examined;
        self.counterexamples.extend(other.counterexamples);
        self.survivors.extend(other.survivors);
        for (a, b) in self.rejections.iter_mut().zip(other.rejections) {
            *a += b;
        }
        self
    }
}

fn exhaustive_chunk(n: usize, start: u64, end: u64, filter: bool) -> ChunkTally {
    let mut tally = ChunkTally::default();
    let mut cursor = PairStateCursor::at(n, start);
    for index in start..end {
        tally.examined += 1;
        if cursor.has_satisfactory_vertex() {
            if filter {
                tally.rejections[0] += 1;
            }
        } else {
            tally.record_counterexample(index, &cursor.to_digraph(), filter);
        }
        if index + 1 < end {
            cursor.advance();
        }
    }
    tally
}

fn random_chunk(
    spec: &SearchSpec,
    model: Model,
    seed: u64,
    start: u64,
    end: u64,
) -> Result<ChunkTally, SearchError> {
    let mut tally = ChunkTally::default();
    for index in start..end {
        let g = model.generate(spec.n, &mut sample_rng(seed, index))?;
        tally.examined += 1;
        if spec.filter_enabled {
            let report = run_filter(&g, true);
            let text = write_digraph(&g);
            if report.verdicts[0].passed() {
                tally.counterexamples.push(FoundGraph {
                    index,
                    graph: text.clone(),
                });
            }
            tally.record_filtered(index, text, report);
        } else if g.first_satisfactory_vertex().is_none() {
            tally.record_counterexample(index, &g, false);
        }
    }
    Ok(tally)
}

fn chunks(total: u64, size: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(size))
        .map(|c| (c * size, ((c + 1) * size).min(total)))
        .collect()
}

/// Runs a search. Chunks are fixed by the spec and merged in order, so the
/// report (minus `elapsed_ms`) is identical for every `workers` value.
pub fn run_search(spec: &SearchSpec) -> Result<SearchReport, SearchError> {
    spec.validate()?;
    let started = Instant::now();

    let work = |range: &(u64, u64)| -> Result<ChunkTally, SearchError> {
        let (start, end) = *range;
        match spec.mode {
            SearchMode::Exhaustive => Ok(exhaustive_chunk(spec.n, start, end, spec.filter_enabled)),
            SearchMode::Random { model, seed, .. } => random_chunk(spec, model, seed, start, end),
        }
    };
    let ranges = match spec.mode {
        SearchMode::Exhaustive => chunks(graph_count(spec.n).expect("validated"), EXHAUSTIVE_CHUNK),
        SearchMode::Random { count, .. } => chunks(count, RANDOM_CHUNK),
    };

    let tallies: Vec<ChunkTally> = if spec.workers == 1 {
        ranges.iter().map(work).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| SearchError::InvalidSpec(format!("cannot start worker pool: {e}")))?;
        pool.install(|| ranges.par_iter().map(work).collect::<Result<_, _>>())?
    };
    let total = tallies
        .into_iter()
        .fold(ChunkTally::default(), ChunkTally::merge);

    Ok(SearchReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: *spec,
        graphs_examined: total.examined,
        counterexamples_found: total.counterexamples.len() as u64,
        counterexamples: total.counterexamples,
        filter_survivors: total.survivors,
        per_condition_rejections: total.rejections,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}
