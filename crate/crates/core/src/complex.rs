//! The transition subcomplex `S` and the induced edge dynamics.
//!
//! `S` is a bipartite multigraph: one node where each letter's tile ends
//! (its exit) and one where it begins (its entry), and one transition edge
//! `e_ab` from `exit(a)` to `entry(b)` per allowed two-letter word `ab`.
//! Gluing the letter edges `entry(a) → exit(a)` onto `S` gives the full
//! complex, which is only needed for rendering.

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Exit(Letter),
    Entry(Letter),
}

/// Index of a transition edge inside [`TransitionComplex::edges`].
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionComplex {
    alphabet_size: usize,
    /// Sorted by `(a, b)`.
    edges: Vec<(Letter, Letter)>,
}

impl TransitionComplex {
    /// Builds `S` from the allowed two-letter words.
    pub fn build(
        alphabet_size: usize,
        pairs: impl IntoIterator<Item = (Letter, Letter)>,
    ) -> Result<Self> {
        let edges: Vec<(Letter, Letter)> = pairs
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= alphabet_size || b >= alphabet_size)
        {
            return Err(Error::Invariant(format!(
                "pair ({a}, {b}) outside an alphabet of size {alphabet_size}"
            )));
        }
        for letter in 0..alphabet_size {
            let leaves = edges.iter().any(|&(a, _)| a == letter);
            let enters = edges.iter().any(|&(_, b)| b == letter);
            if !leaves || !enters {
                return Err(Error::Invariant(format!(
                    "letter index {letter} has no allowed {} neighbour",
                    if leaves { "left" } else { "right" }
                )));
            }
        }
        Ok(TransitionComplex {
            alphabet_size,
            edges,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn edges(&self) -> &[(Letter, Letter)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (Letter, Letter) {
        self.edges[id]
    }

    pub fn edge_id(&self, a: Letter, b: Letter) -> Option<EdgeId> {
        self.edges.binary_search(&(a, b)).ok()
    }

    pub fn endpoints(&self, id: EdgeId) -> (Node, Node) {
        let (a, b) = self.edges[id];
        (Node::Exit(a), Node::Entry(b))
    }

    /// Exit nodes first, then entry nodes, each in letter order.
    pub fn nodes(&self) -> Vec<Node> {
        (0..self.alphabet_size)
            .map(Node::Exit)
            .chain((0..self.alphabet_size).map(Node::Entry))
            .collect()
    }

    pub fn node_index(&self, node: Node) -> usize {
        match node {
            Node::Exit(a) => a,
            Node::Entry(b) => self.alphabet_size + b,
        }
    }

    /// Letter edges `entry(a) → exit(a)`; these never enter computations on `S`.
    pub fn letter_edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        (0..self.alphabet_size).map(|a| (Node::Entry(a), Node::Exit(a)))
    }

    /// Connected components of the undirected graph spanned by `edges` and
    /// their endpoints. Components are ordered by their smallest edge.
    pub fn components_of(&self, edges: &[EdgeId]) -> Components {
        let edge_set: BTreeSet<EdgeId> = edges.iter().copied().collect();
        let mut uf = UnionFind::<usize>::new(2 * self.alphabet_size);
        let mut nodes = BTreeSet::new();
        for &e in &edge_set {
            let (x, y) = self.endpoints(e);
            nodes.insert(x);
            nodes.insert(y);
            uf.union(self.node_index(x), self.node_index(y));
        }
        // edges are visited in increasing order, so the first edge seen in a
        // class is its smallest
        let mut components: Vec<Component> = Vec::new();
        let mut slot_of_root = vec![usize::MAX; 2 * self.alphabet_size];
        for &e in &edge_set {
            let root = uf.find(self.node_index(self.endpoints(e).0));
            if slot_of_root[root] == usize::MAX {
                slot_of_root[root] = components.len();
                components.push(Component::default());
            }
            components[slot_of_root[root]].edges.push(e);
        }
        for &node in &nodes {
            let root = uf.find(self.node_index(node));
            components[slot_of_root[root]].nodes.push(node);
        }
        let betti = edge_set.len() + components.len() - nodes.len();
        Components {
            components,
            edge_count: edge_set.len(),
            node_count: nodes.len(),
            betti,
        }
    }

    /// Components of all of `S`.
    pub fn components(&self) -> Components {
        let all: Vec<EdgeId> = (0..self.edges.len()).collect();
        self.components_of(&all)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Component {
    /// Increasing edge ids.
    pub edges: Vec<EdgeId>,
    pub nodes: Vec<Node>,
}

impl Component {
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub components: Vec<Component>,
    pub edge_count: usize,
    pub node_count: usize,
    /// First Betti number `E − V + C`.
    pub betti: usize,
}

impl Components {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    /// Index of the component holding `node`, if any.
    pub fn component_of(&self, node: Node) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.nodes.binary_search(&node).is_ok())
    }
}

/// Components of `S` and of the eventual range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub s: Components,
    pub er: Components,
}

impl ComponentDecomposition {
    pub fn new(complex: &TransitionComplex, eventual_range: &[EdgeId]) -> Self {
        ComponentDecomposition {
            s: complex.components(),
            er: complex.components_of(eventual_range),
        }
    }

    /// Number of components of `S`.
    pub fn p(&self) -> usize {
        self.s.count()
    }

    /// Number of components of the eventual range.
    pub fn k(&self) -> usize {
        self.er.count()
    }

    /// Asymptotic cycle rank: first Betti number of the eventual range.
    pub fn l(&self) -> usize {
        self.er.betti
    }

    pub fn b1_s(&self) -> usize {
        self.s.betti
    }
}

/// The map `g` on transition edges: `e_ab ↦ e_cd` with `c` the last letter
/// of `φ(a)` and `d` the first letter of `φ(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    images: Vec<EdgeId>,
}

impl EdgeMap {
    pub fn new(s: &Substitution, complex: &TransitionComplex) -> Result<Self> {
        let images = complex
            .edges()
            .iter()
            .map(|&(a, b)| {
                let c = *s.image(a).last().expect("nonempty image");
                let d = s.image(b)[0];
                complex.edge_id(c, d).ok_or_else(|| {
                    Error::Invariant(format!(
                        "g sends e_{}{} to the disallowed e_{}{}",
                        s.symbol(a),
                        s.symbol(b),
                        s.symbol(c),
                        s.symbol(d)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(EdgeMap { images })
    }

    pub fn from_images(images: Vec<EdgeId>) -> Self {
        assert!(images.iter().all(|&e| e < images.len()));
        EdgeMap { images }
    }

    pub fn apply(&self, e: EdgeId) -> EdgeId {
        self.images[e]
    }

    pub fn images(&self) -> &[EdgeId] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Stable image `∩ gⁿ(S)` by iterating image sets.
    pub fn eventual_image_by_iteration(&self) -> Vec<EdgeId> {
        let mut current: BTreeSet<EdgeId> = (0..self.len()).collect();
        loop {
            let next: BTreeSet<EdgeId> = current.iter().map(|&e| self.images[e]).collect();
            if next == current {
                return current.into_iter().collect();
            }
            current = next;
        }
    }

    /// Edges lying on a cycle of the functional graph.
    pub fn periodic_edges(&self) -> Vec<EdgeId> {
        let n = self.len();
        (0..n)
            .filter(|&e| {
                let mut x = self.images[e];
                for _ in 0..n {
                    if x == e {
                        return true;
                    }
                    x = self.images[x];
                }
                false
            })
            .collect()
    }

    /// Eventual range computed both ways; disagreement is an internal error.
    pub fn eventual_range(&self) -> Result<EventualRange> {
        let by_iteration = self.eventual_image_by_iteration();
        let periodic = self.periodic_edges();
        if by_iteration != periodic {
            return Err(Error::Invariant(format!(
                "eventual range by iteration {by_iteration:?} differs from periodic edges {periodic:?}"
            )));
        }
        let mut on_cycle = vec![false; self.len()];
        let mut cycles = Vec::new();
        for &start in &periodic {
            if on_cycle[start] {
                continue;
            }
            let mut cycle = vec![start];
            on_cycle[start] = true;
            let mut x = self.images[start];
            while x != start {
                on_cycle[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        Ok(EventualRange {
            edges: periodic,
            cycles,
        })
    }

    /// Whether `g` permutes `edges`.
    pub fn is_bijection_on(&self, edges: &[EdgeId]) -> bool {
        let set: BTreeSet<EdgeId> = edges.iter().copied().collect();
        let image: BTreeSet<EdgeId> = edges.iter().map(|&e| self.images[e]).collect();
        image == set
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventualRange {
    /// Increasing edge ids.
    pub edges: Vec<EdgeId>,
    /// `g`-cycles, each starting at its smallest edge and listed in orbit order.
    pub cycles: Vec<Vec<EdgeId>>,
}

impl EventualRange {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BranchSide {
    /// Two eventual-range edges leave `exit(a)`.
    Exit,
    /// Two eventual-range edges arrive at `entry(a)`.
    Entry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticCycles {
    pub cycles: Vec<Vec<EdgeId>>,
    /// Letters carrying pairs of asymptotic composants.
    pub branch_letters: Vec<(Letter, BranchSide)>,
}

pub fn asymptotic_cycles(complex: &TransitionComplex, er: &EventualRange) -> AsymptoticCycles {
    let d = complex.alphabet_size();
    let mut out_degree = vec![0usize; d];
    let mut in_degree = vec![0usize; d];
    for &e in &er.edges {
        let (a, b) = complex.edge(e);
        out_degree[a] += 1;
        in_degree[b] += 1;
    }
    let mut branch_letters = Vec::new();
    for a in 0..d {
        if out_degree[a] >= 2 {
            branch_letters.push((a, BranchSide::Exit));
        }
        if in_degree[a] >= 2 {
            branch_letters.push((a, BranchSide::Entry));
        }
    }
    AsymptoticCycles {
        cycles: er.cycles.clone(),
        branch_letters,
    }
}

/// `g` together with its eventual range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDynamics {
    pub map: EdgeMap,
    pub range: EventualRange,
}

impl EdgeDynamics {
    pub fn compute(s: &Substitution, complex: &TransitionComplex) -> Result<Self> {
        let map = EdgeMap::new(s, complex)?;
        let range = map.eventual_range()?;
        Ok(EdgeDynamics { map, range })
    }
}
