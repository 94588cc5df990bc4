use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::decompose::lower_op;
use super::CircuitFragment;
use crate::error::{config, Error, Result};
use crate::qsim::GateOp;

/// Qubit adjacency of a device. Two-qubit gates are only native on edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for CouplingGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        CouplingGraph::new(raw.num_qubits, raw.edges)
    }
}

impl From<CouplingGraph> for RawGraph {
    fn from(g: CouplingGraph) -> Self {
        RawGraph {
            num_qubits: g.num_qubits,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl CouplingGraph {
    /// Builds a graph from undirected edges. Direction in the input is ignored.
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = [usize; 2]>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for [a, b] in edges {
            if a >= num_qubits || b >= num_qubits {
                return Err(config(format!(
                    "edge ({a}, {b}) references a qubit outside 0..{num_qubits}"
                )));
            }
            if a == b {
                return Err(config(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for n in &mut adjacency {
            n.sort_unstable();
        }
        Ok(Self { num_qubits, edges: set, adjacency })
    }

    /// Every pair connected.
    pub fn complete(num_qubits: usize) -> Self {
        let edges = (0..num_qubits)
            .flat_map(|a| (a + 1..num_qubits).map(move |b| [a, b]))
            .collect::<Vec<_>>();
        Self::new(num_qubits, edges).expect("complete graph is valid")
    }

    /// 0 - 1 - 2 - … - (n-1)
    pub fn line(num_qubits: usize) -> Self {
        Self::new(num_qubits, (1..num_qubits).map(|b| [b - 1, b])).expect("line graph is valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    /// Breadth-first shortest path from `from` to `to`, inclusive of both.
    /// Neighbors are explored in ascending index order, so ties resolve to the
    /// lowest-index route.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from >= self.num_qubits || to >= self.num_qubits {
            return None;
        }
        let mut prev = vec![usize::MAX; self.num_qubits];
        let mut seen = vec![false; self.num_qubits];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            if q == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &n in &self.adjacency[q] {
                if !seen[n] {
                    seen[n] = true;
                    prev[n] = q;
                    queue.push_back(n);
                }
            }
        }
        None
    }

    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        self.shortest_path(from, to).map(|p| p.len() - 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_qubits == 0
            || (0..self.num_qubits).all(|q| self.shortest_path(0, q).is_some())
    }
}

/// Output of [`route`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedFragment {
    pub fragment: CircuitFragment,
    pub swap_count: usize,
    /// `initial_layout[logical] = physical` before the first op.
    pub initial_layout: Vec<usize>,
    /// `final_layout[logical] = physical` after the last op.
    pub final_layout: Vec<usize>,
}

/// Maps a logical fragment onto `graph`, inserting SWAPs so that every
/// two-qubit op acts on an edge.
///
/// Gates on three or more qubits are first lowered to CX and phases. When two
/// operands are not adjacent, the first operand is swapped along the BFS
/// shortest path until it neighbors the second.
pub fn route(
    frag: &CircuitFragment,
    graph: &CouplingGraph,
    placement: &[usize],
) -> Result<RoutedFragment> {
    frag.validate()?;
    if placement.len() != frag.register_size {
        return Err(config(format!(
            "placement has {} entries, fragment has {} qubits",
            placement.len(),
            frag.register_size
        )));
    }
    let mut phys_to_log: Vec<Option<usize>> = vec![None; graph.num_qubits()];
    for (logical, &p) in placement.iter().enumerate() {
        if p >= graph.num_qubits() {
            return Err(config(format!(
                "placement maps logical {logical} to physical {p}, graph has {} qubits",
                graph.num_qubits()
            )));
        }
        if phys_to_log[p].is_some() {
            return Err(config(format!("placement is not injective at physical {p}")));
        }
        phys_to_log[p] = Some(logical);
    }
    let mut log_to_phys = placement.to_vec();

    let mut out = CircuitFragment::new(format!("{}:routed", frag.label), graph.num_qubits());
    let mut swap_count = 0;

    let lowered = frag.ops.iter().flat_map(|op| {
        if op.qubits.len() > 2 {
            lower_op(op)
        } else {
            vec![op.clone()]
        }
    });

    for op in lowered {
        if op.qubits.len() == 2 {
            let (a, b) = (op.qubits[0], op.qubits[1]);
            let (pa, pb) = (log_to_phys[a], log_to_phys[b]);
            if !graph.has_edge(pa, pb) {
                let path = graph
                    .shortest_path(pa, pb)
                    .ok_or(Error::Routing { a, b, pa, pb })?;
                for w in path[..path.len() - 1].windows(2) {
                    let (p, q) = (w[0], w[1]);
                    out.push(GateOp::swap(p, q));
                    swap_count += 1;
                    let (lp, lq) = (phys_to_log[p], phys_to_log[q]);
                    phys_to_log[p] = lq;
                    phys_to_log[q] = lp;
                    if let Some(l) = lp {
                        log_to_phys[l] = q;
                    }
                    if let Some(l) = lq {
                        log_to_phys[l] = p;
                    }
                }
            }
        }
        out.push(op.remap(|q| log_to_phys[q]));
    }

    Ok(RoutedFragment {
        fragment: out,
        swap_count,
        initial_layout: placement.to_vec(),
        final_layout: log_to_phys,
    })
}
