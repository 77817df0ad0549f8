//! Intersection of a machine with the single-path machine of an input tuple,
//! followed by classical shortest-distance search.
//!
//! Written independently of the trellis search: its own label matcher, its
//! own graph, stack-driven construction with every matched transition kept.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::machine::{Label, Machine, StateId, StringTuple, TransitionId};
use crate::semiring::{improves, Semiring};

use super::OracleError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Source,
    Sink,
    /// Machine state reached after reading the given prefix lengths.
    Node { state: StateId, read: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arc<W> {
    pub from: usize,
    pub to: usize,
    pub weight: W,
    /// `None` for the virtual source and sink arcs.
    pub transition: Option<TransitionId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionGraph<W> {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc<W>>,
    pub source: usize,
    pub sink: usize,
}

impl<W: Copy> IntersectionGraph<W> {
    /// Vertices other than the virtual source and sink.
    pub fn node_count(&self) -> usize {
        self.vertices.len() - 2
    }

    /// Arcs other than the virtual source and sink arcs.
    pub fn inner_arc_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.transition.is_some()).count()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            adj[a.from].push(i);
        }
        adj
    }

    /// Vertices in topological order, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.vertices.len()];
        for a in &self.arcs {
            indegree[a.to] += 1;
        }
        let adj = self.adjacency();
        let mut ready: Vec<usize> = (0..self.vertices.len()).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop() {
            order.push(v);
            for &ai in &adj[v] {
                let to = self.arcs[ai].to;
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    ready.push(to);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }
}

/// Result of matching one label: new read positions and wildcard bindings.
pub(crate) struct Step {
    pub read: Vec<usize>,
    pub bound: HashMap<u32, char>,
}

pub(crate) fn step(labels: &[Label], input: &StringTuple, read: &[usize], input_tapes: &[usize]) -> Option<Step> {
    let mut bound: HashMap<u32, char> = HashMap::new();
    let mut next = read.to_vec();
    for (k, &tape) in input_tapes.iter().enumerate() {
        let rest = &input.tape(k)[read[k]..];
        match &labels[tape] {
            Label::Literal(lit) => {
                if !rest.starts_with(lit) {
                    return None;
                }
                next[k] += lit.len();
            }
            Label::Var(c) => {
                let sym = *rest.first()?;
                if *bound.entry(*c).or_insert(sym) != sym {
                    return None;
                }
                next[k] += 1;
            }
        }
    }
    Some(Step { read: next, bound })
}

/// Builds the intersection graph; source→sink paths correspond one-to-one,
/// with equal weights, to the machine's accepting paths on `input`.
pub fn intersect_with_tuple<S: Semiring>(
    machine: &Machine<S>,
    input: &StringTuple,
    input_tapes: &[usize],
) -> Result<IntersectionGraph<S::Weight>, OracleError> {
    machine.validate(input_tapes, true)?;
    if input.len() != input_tapes.len() {
        return Err(OracleError::InputArity {
            expected: input_tapes.len(),
            found: input.len(),
        });
    }
    let mut vertices = vec![Vertex::Source, Vertex::Sink];
    let mut ids: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
    let mut arcs = Vec::new();
    let mut stack = Vec::new();

    let mut vertex = |state: StateId, read: Vec<usize>, stack: &mut Vec<usize>, vertices: &mut Vec<Vertex>| {
        *ids.entry((state, read.clone())).or_insert_with(|| {
            vertices.push(Vertex::Node { state, read });
            stack.push(vertices.len() - 1);
            vertices.len() - 1
        })
    };

    let origin = vec![0; input.len()];
    for q in 0..machine.num_states() {
        let w = machine.initial_weight(q);
        if !S::is_zero(w) {
            let v = vertex(q, origin.clone(), &mut stack, &mut vertices);
            arcs.push(Arc {
                from: 0,
                to: v,
                weight: w,
                transition: None,
            });
        }
    }

    while let Some(v) = stack.pop() {
        let Vertex::Node { state, read } = vertices[v].clone() else {
            unreachable!("only machine vertices are stacked")
        };
        for (tid, t) in machine.transitions().iter().enumerate() {
            if t.source != state {
                continue;
            }
            if let Some(st) = step(&t.labels, input, &read, input_tapes) {
                let to = vertex(t.target, st.read, &mut stack, &mut vertices);
                arcs.push(Arc {
                    from: v,
                    to,
                    weight: t.weight,
                    transition: Some(tid),
                });
            }
        }
    }

    let end = input.lengths();
    for (v, vertex) in vertices.iter().enumerate().skip(2) {
        if let Vertex::Node { state, read } = vertex {
            let w = machine.final_weight(*state);
            if *read == end && !S::is_zero(w) {
                arcs.push(Arc {
                    from: v,
                    to: 1,
                    weight: w,
                    transition: None,
                });
            }
        }
    }

    let graph = IntersectionGraph {
        vertices,
        arcs,
        source: 0,
        sink: 1,
    };
    if graph.topological_order().is_none() {
        return Err(OracleError::EpsilonCycle);
    }
    Ok(graph)
}

/// Shortest source→sink distance and the arcs of one shortest path.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPath<W> {
    pub distance: W,
    pub arcs: Vec<usize>,
}

impl<W> ShortestPath<W> {
    /// Machine transitions along the path (virtual arcs dropped).
    pub fn transitions<V: Copy>(&self, g: &IntersectionGraph<V>) -> Vec<TransitionId> {
        self.arcs.iter().filter_map(|&a| g.arcs[a].transition).collect()
    }
}

struct Entry<S: Semiring> {
    weight: S::Weight,
    vertex: usize,
}

impl<S: Semiring> PartialEq for Entry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Semiring> Eq for Entry<S> {}

impl<S: Semiring> PartialOrd for Entry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Semiring> Ord for Entry<S> {
    // max-heap: the better weight is the greater entry
    fn cmp(&self, other: &Self) -> Ordering {
        if S::better(self.weight, other.weight) {
            Ordering::Greater
        } else if S::better(other.weight, self.weight) {
            Ordering::Less
        } else {
            other.vertex.cmp(&self.vertex)
        }
    }
}

fn check_monotone<S: Semiring>(g: &IntersectionGraph<S::Weight>) -> Result<(), OracleError> {
    match g.arcs.iter().position(|a| S::better(a.weight, S::one())) {
        Some(arc) => Err(OracleError::NegativeWeight { arc }),
        None => Ok(()),
    }
}

/// Dijkstra's algorithm. Every arc must be no better than the semiring one
/// (non-negative for tropical-min). `Ok(None)` if the sink is unreachable.
pub fn dijkstra<S: Semiring>(g: &IntersectionGraph<S::Weight>) -> Result<Option<ShortestPath<S::Weight>>, OracleError> {
    check_monotone::<S>(g)?;
    let adj = g.adjacency();
    let mut dist: Vec<Option<S::Weight>> = vec![None; g.vertices.len()];
    let mut via: Vec<Option<usize>> = vec![None; g.vertices.len()];
    let mut done = vec![false; g.vertices.len()];
    let mut heap = BinaryHeap::new();
    dist[g.source] = Some(S::one());
    heap.push(Entry::<S> {
        weight: S::one(),
        vertex: g.source,
    });
    while let Some(Entry { weight, vertex }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        done[vertex] = true;
        for &ai in &adj[vertex] {
            let a = &g.arcs[ai];
            let cand = S::times(weight, a.weight);
            if !done[a.to] && improves::<S>(cand, dist[a.to]) {
                dist[a.to] = Some(cand);
                via[a.to] = Some(ai);
                heap.push(Entry::<S> {
                    weight: cand,
                    vertex: a.to,
                });
            }
        }
    }
    let Some(distance) = dist[g.sink].filter(|&d| !S::is_zero(d)) else {
        return Ok(None);
    };
    let mut arcs = Vec::new();
    let mut v = g.sink;
    while let Some(ai) = via[v] {
        arcs.push(ai);
        v = g.arcs[ai].from;
    }
    arcs.reverse();
    Ok(Some(ShortestPath { distance, arcs }))
}

/// Bellman-Ford shortest distance. `Ok(None)` if the sink is unreachable.
pub fn bellman_ford<S: Semiring>(g: &IntersectionGraph<S::Weight>) -> Result<Option<S::Weight>, OracleError> {
    let n = g.vertices.len();
    let mut dist: Vec<Option<S::Weight>> = vec![None; n];
    dist[g.source] = Some(S::one());
    for round in 0..n {
        let mut changed = false;
        for a in &g.arcs {
            if let Some(d) = dist[a.from] {
                let cand = S::times(d, a.weight);
                if improves::<S>(cand, dist[a.to]) {
                    dist[a.to] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        if round == n - 1 {
            return Err(OracleError::NegativeCycle);
        }
    }
    Ok(dist[g.sink].filter(|&d| !S::is_zero(d)))
}

/// Intersection followed by Dijkstra: the best accepting weight, if any.
pub fn best_weight_by_intersection<S: Semiring>(
    machine: &Machine<S>,
    input: &StringTuple,
    input_tapes: &[usize],
) -> Result<Option<S::Weight>, OracleError> {
    let g = intersect_with_tuple(machine, input, input_tapes)?;
    Ok(dijkstra::<S>(&g)?.map(|p| p.distance))
}

/// One accepting path found by exhaustive enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedPath<W> {
    pub start: StateId,
    pub transitions: Vec<TransitionId>,
    pub weight: W,
    pub tapes: Vec<String>,
}

/// Every accepting path of `machine` on `input`, by depth-first enumeration.
/// The machine must have no cycle of transitions reading nothing.
pub fn enumerate_accepting_paths<S: Semiring>(
    machine: &Machine<S>,
    input: &StringTuple,
    input_tapes: &[usize],
) -> Vec<EnumeratedPath<S::Weight>> {
    struct Frame<W> {
        state: StateId,
        read: Vec<usize>,
        weight: W,
        path: Vec<TransitionId>,
        tapes: Vec<String>,
    }
    let end = input.lengths();
    let depth_limit = (end.iter().sum::<usize>() + 1) * (machine.num_states() + 1);
    let mut out = Vec::new();
    for q in 0..machine.num_states() {
        let w0 = machine.initial_weight(q);
        if S::is_zero(w0) {
            continue;
        }
        let mut stack = vec![Frame {
            state: q,
            read: vec![0; input.len()],
            weight: w0,
            path: Vec::new(),
            tapes: vec![String::new(); machine.arity()],
        }];
        while let Some(f) = stack.pop() {
            if f.read == end {
                let total = S::times(f.weight, machine.final_weight(f.state));
                if !S::is_zero(total) {
                    out.push(EnumeratedPath {
                        start: q,
                        transitions: f.path.clone(),
                        weight: total,
                        tapes: f.tapes.clone(),
                    });
                }
            }
            if f.path.len() >= depth_limit {
                continue;
            }
            for (tid, t) in machine.transitions().iter().enumerate() {
                if t.source != f.state {
                    continue;
                }
                let Some(st) = step(&t.labels, input, &f.read, input_tapes) else {
                    continue;
                };
                let mut tapes = f.tapes.clone();
                for (tape, label) in tapes.iter_mut().zip(&t.labels) {
                    match label {
                        Label::Literal(s) => tape.extend(s.iter()),
                        Label::Var(c) => tape.extend(st.bound.get(c)),
                    }
                }
                let mut path = f.path.clone();
                path.push(tid);
                stack.push(Frame {
                    state: t.target,
                    read: st.read,
                    weight: S::times(f.weight, t.weight),
                    path,
                    tapes,
                });
            }
        }
    }
    out
}
