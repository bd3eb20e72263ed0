//! SWAP insertion for devices with limited connectivity.
//!
//! Routing is greedy: for each two-qubit gate whose operands are not
//! adjacent on the device, the operand sitting on the lower-numbered
//! physical qubit walks along the lexicographically smallest shortest path
//! toward the other until they are neighbours. The resulting qubit
//! permutation is reported rather than undone.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::state::StateVector;

use super::{Circuit, GateApplication};

/// Undirected device connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![BTreeSet::new(); num_qubits];
        for (a, b) in edges {
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
                }
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on qubit {a}")));
            }
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        Ok(Self { adjacency })
    }

    pub fn all_to_all(num_qubits: usize) -> Self {
        let edges = (0..num_qubits).flat_map(|a| (a + 1..num_qubits).map(move |b| (a, b)));
        Self::new(num_qubits, edges).expect("valid edges")
    }

    /// `0 - 1 - 2 - ... - (n-1)`.
    pub fn line(num_qubits: usize) -> Self {
        Self::new(num_qubits, (1..num_qubits).map(|b| (b - 1, b))).expect("valid edges")
    }

    /// Parses an edge list: one `a b` (or `a-b`, `a,b`) pair per line. The
    /// qubit count is one more than the largest index seen. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == '-' || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if parts.len() != 2 {
                return Err(Error::parse(n + 1, 1, "expected two qubit indices"));
            }
            let mut pair = [0usize; 2];
            for (slot, p) in pair.iter_mut().zip(&parts) {
                *slot = p.parse().map_err(|_| {
                    let col = raw.find(p).map_or(1, |i| i + 1);
                    Error::parse(n + 1, col, format!("bad qubit index `{p}`"))
                })?;
            }
            max = max.max(Some(pair[0].max(pair[1])));
            edges.push((pair[0], pair[1]));
        }
        let num_qubits = max.map_or(0, |m| m + 1);
        Self::new(num_qubits, edges)
    }

    pub fn num_qubits(&self) -> usize {
        self.adjacency.len()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_qubits()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("visited");
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.num_qubits() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Lexicographically smallest shortest path from `from` to `to`,
    /// endpoints included.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let dist = self.distances_from(to);
        let mut d = dist[from]?;
        let mut path = vec![from];
        let mut v = from;
        while d > 0 {
            v = *self.adjacency[v]
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("BFS predecessor exists");
            path.push(v);
            d -= 1;
        }
        Some(path)
    }
}

/// Output of [`route`].
#[derive(Clone, Debug, PartialEq)]
pub struct RoutedCircuit {
    /// Circuit on physical qubits.
    pub circuit: Circuit,
    /// `final_layout[logical] = physical` after the last gate. Routing
    /// starts from the identity layout.
    pub final_layout: Vec<usize>,
    pub swaps_inserted: usize,
}

struct Layout {
    to_physical: Vec<usize>,
    to_logical: Vec<usize>,
}

impl Layout {
    fn identity(n: usize) -> Self {
        Self {
            to_physical: (0..n).collect(),
            to_logical: (0..n).collect(),
        }
    }

    fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.to_logical[a], self.to_logical[b]);
        self.to_logical.swap(a, b);
        self.to_physical[la] = b;
        self.to_physical[lb] = a;
    }
}

fn remap(g: &GateApplication, layout: &Layout) -> GateApplication {
    GateApplication {
        kind: g.kind,
        targets: g.targets.iter().map(|&q| layout.to_physical[q]).collect(),
        controls: g.controls.iter().map(|&q| layout.to_physical[q]).collect(),
    }
}

/// Inserts SWAPs so every two-qubit gate acts on an edge of `graph`.
/// Gates touching more than two qubits must be decomposed first.
pub fn route(c: &Circuit, graph: &CouplingGraph) -> Result<RoutedCircuit> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = graph.num_qubits();
    if n < c.num_qubits() {
        return Err(Error::Dimension(format!(
            "{}-qubit circuit does not fit a {n}-qubit device",
            c.num_qubits()
        )));
    }
    let mut layout = Layout::identity(n);
    let mut out = Circuit::new(n);
    let mut swaps = 0;
    for g in c.steps() {
        let qubits: Vec<usize> = g.qubits().collect();
        match qubits.as_slice() {
            [_] => {}
            [a, b] => {
                let (pa, pb) = (layout.to_physical[*a], layout.to_physical[*b]);
                if !graph.are_adjacent(pa, pb) {
                    let (mover, fixed) = if pa < pb { (pa, pb) } else { (pb, pa) };
                    let path = graph.shortest_path(mover, fixed).ok_or(Error::Disconnected)?;
                    // stop one short: the mover ends next to `fixed`
                    for w in path[..path.len() - 1].windows(2) {
                        out.push(GateApplication::swap(w[0], w[1]))?;
                        layout.swap_physical(w[0], w[1]);
                        swaps += 1;
                    }
                }
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "`{}` touches {} qubits; decompose before routing",
                    g.kind.name(),
                    qubits.len()
                )))
            }
        }
        out.push(remap(g, &layout))?;
    }
    Ok(RoutedCircuit {
        circuit: out,
        final_layout: layout.to_physical[..c.num_qubits()].to_vec(),
        swaps_inserted: swaps,
    })
}

impl RoutedCircuit {
    /// Appends SWAPs along edges of `graph` that return every logical qubit
    /// to its starting physical position.
    pub fn restore_layout(&mut self, graph: &CouplingGraph) -> Result<()> {
        let n = graph.num_qubits();
        let mut layout = Layout::identity(n);
        for (logical, &physical) in self.final_layout.iter().enumerate() {
            layout.to_physical[logical] = physical;
        }
        // fill in untouched logical slots with the free physical qubits
        let used: BTreeSet<usize> = self.final_layout.iter().copied().collect();
        let mut free = (0..n).filter(|p| !used.contains(p));
        for logical in self.final_layout.len()..n {
            layout.to_physical[logical] = free.next().expect("permutation");
        }
        for (l, &p) in layout.to_physical.iter().enumerate() {
            layout.to_logical[p] = l;
        }

        // spanning tree by BFS; settle vertices deepest first so each one is
        // a leaf of the part of the tree still in play
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &graph.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut settled = vec![false; n];
        for &v in order.iter().rev() {
            let path = tree_path(&parent, layout.to_physical[v], v);
            debug_assert!(path.iter().all(|&p| !settled[p]));
            for w in path.windows(2) {
                self.circuit.push(GateApplication::swap(w[0], w[1]))?;
                layout.swap_physical(w[0], w[1]);
                self.swaps_inserted += 1;
            }
            settled[v] = true;
        }
        self.final_layout = (0..self.final_layout.len()).collect();
        Ok(())
    }
}

fn tree_path(parent: &[usize], from: usize, to: usize) -> Vec<usize> {
    let ancestors = |mut v: usize| {
        let mut chain = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            chain.push(v);
        }
        chain
    };
    let up = ancestors(from);
    let down = ancestors(to);
    let common = up
        .iter()
        .find(|v| down.contains(v))
        .copied()
        .expect("tree is connected");
    let mut path: Vec<usize> = up.iter().copied().take_while(|&v| v != common).collect();
    path.push(common);
    let tail: Vec<usize> = down.iter().copied().take_while(|&v| v != common).collect();
    path.extend(tail.into_iter().rev());
    path
}

/// Moves every logical qubit `l` of `state` to position `layout[l]`.
pub fn permute_qubits(state: &StateVector, layout: &[usize]) -> Result<StateVector> {
    let q = state.num_qubits();
    if layout.len() != q {
        return Err(Error::Dimension(format!(
            "layout of length {} for a {q}-qubit state",
            layout.len()
        )));
    }
    let mut out = vec![crate::linalg::ZERO; state.dim()];
    for (j, &z) in state.amplitudes().iter().enumerate() {
        let mut k = 0usize;
        for (l, &p) in layout.iter().enumerate() {
            k |= ((j >> l) & 1) << p;
        }
        out[k] = z;
    }
    StateVector::from_raw(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run;
    use crate::gates::GateKind;
    use crate::linalg::C64;

    fn random_state(q: usize, seed: u64) -> StateVector {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        StateVector::normalized((0..1 << q).map(|_| C64::new(next(), next())).collect()).unwrap()
    }

    fn assert_equivalent(c: &Circuit, routed: &RoutedCircuit, seed: u64) {
        let q = c.num_qubits();
        let psi = random_state(q, seed);
        let phys = run(&routed.circuit, psi.duplicate_for_analysis()).unwrap();
        let logical = run(c, psi).unwrap();
        let expected = permute_qubits(&logical, &routed.final_layout).unwrap();
        assert!(phys.to_vector().max_abs_diff(&expected.to_vector()) < 1e-12);
    }

    #[test]
    fn all_to_all_leaves_circuit_unchanged() {
        let mut c = Circuit::new(4);
        c.h(0).cx(0, 3).cx(2, 1).cx(3, 1);
        let r = route(&c, &CouplingGraph::all_to_all(4)).unwrap();
        assert_eq!(r.circuit, c);
        assert_eq!(r.final_layout, vec![0, 1, 2, 3]);
        assert_eq!(r.swaps_inserted, 0);
    }

    #[test]
    fn line_inserts_one_swap() {
        let mut c = Circuit::new(3);
        c.h(0).cx(0, 2);
        let g = CouplingGraph::line(3);
        let r = route(&c, &g).unwrap();
        assert_eq!(r.swaps_inserted, 1);
        for step in r.circuit.steps() {
            let qs: Vec<usize> = step.qubits().collect();
            if qs.len() == 2 {
                assert!(g.are_adjacent(qs[0], qs[1]));
            }
        }
        assert_eq!(r.final_layout, vec![1, 0, 2]);
        assert_equivalent(&c, &r, 3);
    }

    #[test]
    fn empty_circuit_routes_to_empty() {
        let r = route(&Circuit::new(3), &CouplingGraph::line(3)).unwrap();
        assert!(r.circuit.is_empty());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = CouplingGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(route(&Circuit::new(4), &g), Err(Error::Disconnected)));
    }

    #[test]
    fn wide_gates_rejected() {
        let mut c = Circuit::new(3);
        c.ccx(0, 1, 2);
        assert!(route(&c, &CouplingGraph::line(3)).is_err());
    }

    #[test]
    fn ring_routing_with_restore() {
        let g = CouplingGraph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let mut c = Circuit::new(6);
        c.h(0).h(3).cx(0, 3).cx(1, 4).cx(5, 2);
        c.push(GateApplication::with_controls(GateKind::SqrtX, 2, &[4])).unwrap();
        c.cx(0, 2);
        let mut r = route(&c, &g).unwrap();
        assert_equivalent(&c, &r, 11);
        r.restore_layout(&g).unwrap();
        assert_eq!(r.final_layout, (0..6).collect::<Vec<_>>());
        assert_equivalent(&c, &r, 12);
    }

    #[test]
    fn parse_edge_list() {
        let g = CouplingGraph::parse("# heavy line\n0 1\n1-2\n2,3\n").unwrap();
        assert_eq!(g.num_qubits(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(matches!(
            CouplingGraph::parse("0 1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn shortest_path_prefers_small_indices() {
        let g = CouplingGraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.shortest_path(0, 3).unwrap(), vec![0, 1, 3]);
    }
}
