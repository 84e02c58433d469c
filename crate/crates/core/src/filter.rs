//! Necessary conditions for a minimal counterexample, evaluated on arbitrary
//! digraphs.
//!
//! Condition 0 is the prerequisite that no vertex is satisfactory; conditions
//! 1 through 7 are the structural properties every minimal counterexample
//! must have. Each failure carries a [`Witness`] that can be replayed against
//! the graph with [`ConditionVerdict::recheck`].
//!
//! A graph that survives every check is only a *candidate*: passing the
//! filter never proves membership in the set of minimal counterexamples.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, Direction, Edge, NeighborhoodProfile, VertexId, VertexSet};
use crate::error::GraphError;
use crate::structure::{diamond_apexes, has_directed_cycle};

/// Number of conditions, prerequisite included.
pub const CONDITION_COUNT: u8 = 8;

/// Cheapest per-vertex checks first, per-edge path checks last.
pub const EVALUATION_ORDER: [u8; 8] = [0, 2, 1, 6, 7, 4, 3, 5];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("condition index {0} out of range 0..=7")]
    ConditionOutOfRange(u8),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// Concrete datum explaining why a condition failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Condition 0: this vertex is satisfactory.
    SatisfactoryVertex { vertex: VertexId, anti_satisfaction: i64 },
    /// Condition 1: no directed path from `from` to `to`.
    Unreachable { from: VertexId, to: VertexId },
    /// Condition 2: anti-satisfaction outside `{1, 2}`.
    AntiSatisfactionOutOfRange { vertex: VertexId, anti_satisfaction: i64 },
    /// Condition 3: more than one target of `{v} ∪ N1(v)` is missed.
    UncoveredTargets { edge: Edge, missing: Vec<VertexId> },
    /// Condition 4: base of neither a transitive triangle nor a diamond.
    UnbasedEdge { edge: Edge },
    /// Condition 5: too few triangles or diamonds on an applicable edge.
    InsufficientBases {
        edge: Edge,
        required: usize,
        triangles: usize,
        diamonds: usize,
    },
    /// Condition 6: no in-neighbor of `vertex` has anti-satisfaction 1.
    NoUnitInNeighbor { vertex: VertexId },
    /// Condition 7: the anti-satisfaction-1 vertices induce an acyclic graph.
    AcyclicUnitSet { vertices: Vec<VertexId> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: u8,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl ConditionVerdict {
    fn pass(condition: u8) -> Self {
        ConditionVerdict {
            condition,
            status: Status::Pass,
            witness: None,
        }
    }

    fn fail(condition: u8, witness: Witness) -> Self {
        ConditionVerdict {
            condition,
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Replays the witness against `g`. Verdicts without a failure are
    /// trivially consistent.
    pub fn recheck(&self, g: &Digraph) -> bool {
        match (&self.status, &self.witness) {
            (Status::Fail, Some(w)) => witness_holds(g, self.condition, w),
            (Status::Fail, None) => false,
            (_, _) => true,
        }
    }
}

fn witness_holds(g: &Digraph, condition: u8, witness: &Witness) -> bool {
    let anti = |v: VertexId| g.anti_satisfaction(v).ok();
    match (condition, witness) {
        (0, Witness::SatisfactoryVertex { vertex, anti_satisfaction }) => {
            anti(*vertex) == Some(*anti_satisfaction) && *anti_satisfaction <= 0
        }
        (1, Witness::Unreachable { from, to }) => g
            .walkable_neighborhood(*from)
            .is_ok_and(|w| to.index() < g.vertex_count() && !w.contains(*to)),
        (2, Witness::AntiSatisfactionOutOfRange { vertex, anti_satisfaction }) => {
            anti(*vertex) == Some(*anti_satisfaction) && !(1..=2).contains(anti_satisfaction)
        }
        (3, Witness::UncoveredTargets { edge, missing }) => avoiding_reach(g, *edge)
            .is_ok_and(|reach| missing.len() > 1 && reach.missing.to_vec() == *missing),
        (4, Witness::UnbasedEdge { edge }) => {
            g.has_edge(edge.tail, edge.head)
                && common_out(g, *edge) == 0
                && diamond_apexes(g, *edge).is_clear()
        }
        (5, Witness::InsufficientBases { edge, required, triangles, diamonds }) => {
            if !g.has_edge(edge.tail, edge.head) {
                return false;
            }
            let (du, dv) = (g.out_degree(edge.tail), g.out_degree(edge.head));
            du <= dv
                && *required == dv - du + 1
                && *triangles == common_out(g, *edge)
                && *diamonds == diamond_apexes(g, *edge).count_ones(..)
                && (triangles < required || diamonds < required)
        }
        (6, Witness::NoUnitInNeighbor { vertex }) => g
            .in_neighbors(*vertex)
            .is_ok_and(|inn| inn.iter().all(|w| anti(w) != Some(1))),
        (7, Witness::AcyclicUnitSet { vertices }) => {
            let unit: Vec<VertexId> = g.vertices().filter(|&v| anti(v) == Some(1)).collect();
            if unit != *vertices {
                return false;
            }
            unit.is_empty()
                || !has_directed_cycle(
                    &g.induced_subgraph(&VertexSet::from_ids(g.vertex_count(), unit))
                        .expect("nonempty subset")
                        .0,
                )
        }
        _ => false,
    }
}

fn common_out(g: &Digraph, e: Edge) -> usize {
    g.out_row(e.tail.index())
        .intersection_count(g.out_row(e.head.index()))
}

/// Partition of `{v} ∪ N1(v)` for `e = (u, v)` by reachability from `u`
/// along a walk of length 1 or 2 that never traverses `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingReach {
    pub covered: VertexSet,
    pub missing: VertexSet,
}

pub fn avoiding_reach(g: &Digraph, e: Edge) -> Result<AvoidingReach, GraphError> {
    g.check_edge(e)?;
    let (u, v) = (e.tail.index(), e.head.index());
    let mut targets = g.out_row(v).clone();
    targets.insert(v);

    // A walk u -> x -> y can only use e as its first step, since x != u.
    let mut first = g.out_row(u).clone();
    first.set(v, false);
    let mut reach = first.clone();
    for x in first.ones() {
        reach.union_with(g.out_row(x));
    }

    let mut covered = targets.clone();
    covered.intersect_with(&reach);
    let mut missing = targets;
    missing.difference_with(&reach);
    Ok(AvoidingReach {
        covered: VertexSet::from_bits(covered),
        missing: VertexSet::from_bits(missing),
    })
}

/// Caches vertex profiles across the conditions of one graph.
struct Evaluator<'a> {
    g: &'a Digraph,
    profiles: Vec<NeighborhoodProfile>,
}

impl<'a> Evaluator<'a> {
    fn new(g: &'a Digraph) -> Self {
        Evaluator {
            g,
            profiles: g.profiles(),
        }
    }

    fn check(&self, k: u8) -> ConditionVerdict {
        match k {
            0 => self.no_satisfactory_vertex(),
            1 => self.strongly_connected(),
            2 => self.anti_satisfaction_range(),
            3 => self.avoiding_paths(),
            4 => self.every_edge_based(),
            5 => self.base_counts(),
            6 => self.unit_in_neighbors(),
            7 => self.unit_cycle(),
            _ => unreachable!("condition index validated by caller"),
        }
    }

    fn no_satisfactory_vertex(&self) -> ConditionVerdict {
        match self.profiles.iter().find(|p| p.satisfactory) {
            Some(p) => ConditionVerdict::fail(
                0,
                Witness::SatisfactoryVertex {
                    vertex: p.vertex,
                    anti_satisfaction: p.anti_satisfaction,
                },
            ),
            None => ConditionVerdict::pass(0),
        }
    }

    fn strongly_connected(&self) -> ConditionVerdict {
        let n = self.g.vertex_count();
        let root = VertexId::new(0);
        let forward = self.g.reach(0, Direction::Out);
        if let Some(to) = (0..n).find(|&x| !forward.contains(x)) {
            return ConditionVerdict::fail(1, Witness::Unreachable { from: root, to: VertexId::new(to) });
        }
        let backward = self.g.reach(0, Direction::In);
        if let Some(from) = (0..n).find(|&x| !backward.contains(x)) {
            return ConditionVerdict::fail(1, Witness::Unreachable { from: VertexId::new(from), to: root });
        }
        ConditionVerdict::pass(1)
    }

    fn anti_satisfaction_range(&self) -> ConditionVerdict {
        match self
            .profiles
            .iter()
            .find(|p| !(1..=2).contains(&p.anti_satisfaction))
        {
            Some(p) => ConditionVerdict::fail(
                2,
                Witness::AntiSatisfactionOutOfRange {
                    vertex: p.vertex,
                    anti_satisfaction: p.anti_satisfaction,
                },
            ),
            None => ConditionVerdict::pass(2),
        }
    }

    fn avoiding_paths(&self) -> ConditionVerdict {
        for e in self.g.edges() {
            let reach = avoiding_reach(self.g, e).expect("edge from the graph itself");
            if reach.missing.len() > 1 {
                return ConditionVerdict::fail(
                    3,
                    Witness::UncoveredTargets {
                        edge: e,
                        missing: reach.missing.to_vec(),
                    },
                );
            }
        }
        ConditionVerdict::pass(3)
    }

    fn every_edge_based(&self) -> ConditionVerdict {
        for e in self.g.edges() {
            if common_out(self.g, e) == 0 && diamond_apexes(self.g, e).is_clear() {
                return ConditionVerdict::fail(4, Witness::UnbasedEdge { edge: e });
            }
        }
        ConditionVerdict::pass(4)
    }

    fn base_counts(&self) -> ConditionVerdict {
        let mut applicable = false;
        for e in self.g.edges() {
            let du = self.profiles[e.tail.index()].n1;
            let dv = self.profiles[e.head.index()].n1;
            if du > dv {
                continue;
            }
            applicable = true;
            let required = dv - du + 1;
            let triangles = common_out(self.g, e);
            let diamonds = diamond_apexes(self.g, e).count_ones(..);
            if triangles < required || diamonds < required {
                return ConditionVerdict::fail(
                    5,
                    Witness::InsufficientBases {
                        edge: e,
                        required,
                        triangles,
                        diamonds,
                    },
                );
            }
        }
        if applicable {
            ConditionVerdict::pass(5)
        } else {
            ConditionVerdict {
                condition: 5,
                status: Status::NotApplicable,
                witness: None,
            }
        }
    }

    fn unit_in_neighbors(&self) -> ConditionVerdict {
        for u in 0..self.g.vertex_count() {
            let has_unit = self
                .g
                .in_row(u)
                .ones()
                .any(|w| self.profiles[w].anti_satisfaction == 1);
            if !has_unit {
                return ConditionVerdict::fail(6, Witness::NoUnitInNeighbor { vertex: VertexId::new(u) });
            }
        }
        ConditionVerdict::pass(6)
    }

    fn unit_cycle(&self) -> ConditionVerdict {
        let n = self.g.vertex_count();
        let mut unit = FixedBitSet::with_capacity(n);
        for p in self.profiles.iter().filter(|p| p.anti_satisfaction == 1) {
            unit.insert(p.vertex.index());
        }
        let unit = VertexSet::from_bits(unit);
        let cyclic = !unit.is_empty()
            && has_directed_cycle(&self.g.induced_subgraph(&unit).expect("nonempty subset").0);
        if cyclic {
            ConditionVerdict::pass(7)
        } else {
            ConditionVerdict::fail(7, Witness::AcyclicUnitSet { vertices: unit.to_vec() })
        }
    }
}

pub fn check_condition(g: &Digraph, k: u8) -> Result<ConditionVerdict, FilterError> {
    if k >= CONDITION_COUNT {
        return Err(FilterError::ConditionOutOfRange(k));
    }
    Ok(Evaluator::new(g).check(k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub verdicts: Vec<ConditionVerdict>,
    pub survived: bool,
    pub evaluation_order: Vec<u8>,
}

impl FilterReport {
    pub fn first_failure(&self) -> Option<&ConditionVerdict> {
        self.verdicts.iter().find(|v| !v.passed())
    }
}

/// Runs all conditions in [`EVALUATION_ORDER`], optionally stopping at the
/// first failure.
pub fn run_filter(g: &Digraph, short_circuit: bool) -> FilterReport {
    let eval = Evaluator::new(g);
    let mut verdicts = Vec::with_capacity(EVALUATION_ORDER.len());
    let mut evaluation_order = Vec::with_capacity(EVALUATION_ORDER.len());
    let mut survived = true;
    for &k in &EVALUATION_ORDER {
        let verdict = eval.check(k);
        evaluation_order.push(k);
        let failed = !verdict.passed();
        verdicts.push(verdict);
        if failed {
            survived = false;
            if short_circuit {
                break;
            }
        }
    }
    FilterReport {
        verdicts,
        survived,
        evaluation_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn g(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::from_edges(n, edges).unwrap()
    }

    fn c3() -> Digraph {
        Digraph::cycle(3).unwrap()
    }

    fn tt() -> Digraph {
        g(3, &[(0, 1), (0, 2), (1, 2)])
    }

    #[test]
    fn avoiding_reach_examples() {
        let r = avoiding_reach(&tt(), Edge::new(0, 1)).unwrap();
        assert_eq!(r.covered.to_vec(), vec![v(2)]);
        assert_eq!(r.missing.to_vec(), vec![v(1)]);

        let r = avoiding_reach(&c3(), Edge::new(0, 1)).unwrap();
        assert!(r.covered.is_empty());
        assert_eq!(r.missing.to_vec(), vec![v(1), v(2)]);

        // t=0, u=1, v=2, w=3
        let d = g(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let r = avoiding_reach(&d, Edge::new(0, 1)).unwrap();
        assert_eq!(r.covered.to_vec(), vec![v(3)]);
        assert_eq!(r.missing.to_vec(), vec![v(1)]);

        assert_eq!(avoiding_reach(&c3(), Edge::new(1, 0)), Err(GraphError::NoSuchEdge(1, 0)));
    }

    #[test]
    fn single_conditions() {
        assert_eq!(check_condition(&c3(), 1).unwrap().status, Status::Pass);
        let c0 = check_condition(&c3(), 0).unwrap();
        assert_eq!(
            c0.witness,
            Some(Witness::SatisfactoryVertex { vertex: v(0), anti_satisfaction: 0 })
        );
        let c5 = check_condition(&c3(), 5).unwrap();
        assert_eq!(
            c5.witness,
            Some(Witness::InsufficientBases { edge: Edge::new(0, 1), required: 1, triangles: 0, diamonds: 0 })
        );
        let c2 = check_condition(&tt(), 2).unwrap();
        assert_eq!(
            c2.witness,
            Some(Witness::AntiSatisfactionOutOfRange { vertex: v(2), anti_satisfaction: 0 })
        );
        assert_eq!(check_condition(&c3(), 8), Err(FilterError::ConditionOutOfRange(8)));
    }

    #[test]
    fn condition_witnesses_recheck() {
        let graphs = [c3(), tt(), g(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]), Digraph::single_vertex()];
        for h in &graphs {
            for k in 0..CONDITION_COUNT {
                let verdict = check_condition(h, k).unwrap();
                assert!(verdict.recheck(h), "condition {k} on {h:?}: {verdict:?}");
            }
        }
    }

    #[test]
    fn not_applicable_and_isolated_cases() {
        // No edges: condition 5 has nothing to check.
        let lone = Digraph::single_vertex();
        assert_eq!(check_condition(&lone, 5).unwrap().status, Status::NotApplicable);
        // In-degree-0 vertex fails condition 6 with itself as witness.
        let c6 = check_condition(&tt(), 6).unwrap();
        assert_eq!(c6.witness, Some(Witness::NoUnitInNeighbor { vertex: v(0) }));
        // Nothing has anti-satisfaction 1 in C3.
        let c7 = check_condition(&c3(), 7).unwrap();
        assert_eq!(c7.witness, Some(Witness::AcyclicUnitSet { vertices: vec![] }));
    }

    #[test]
    fn filter_runs() {
        let report = run_filter(&c3(), true);
        assert!(!report.survived);
        assert_eq!(report.evaluation_order, vec![0]);
        assert_eq!(report.first_failure().unwrap().condition, 0);

        let report = run_filter(&tt(), true);
        assert_eq!(
            report.verdicts[0].witness,
            Some(Witness::SatisfactoryVertex { vertex: v(2), anti_satisfaction: 0 })
        );

        let full = run_filter(&c3(), false);
        assert_eq!(full.evaluation_order, EVALUATION_ORDER.to_vec());
        assert_eq!(full.verdicts.len(), 8);
        assert!(!full.survived);
    }

    #[test]
    fn verdict_serializes_with_kebab_case() {
        let verdict = check_condition(&c3(), 0).unwrap();
        let json = serde_json::to_string(&verdict).unwrap();
        assert_eq!(
            json,
            r#"{"condition":0,"status":"fail","witness":{"kind":"satisfactory-vertex","vertex":0,"anti_satisfaction":0}}"#
        );
    }
}
