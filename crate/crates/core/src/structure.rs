//! Structural analysis: complex graph, linkage classes, weak
//! reversibility, deficiency, conservation laws and face dimensions.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::exactla::{sign_constrained_nullvector, Rational};
use crate::netmodel::{stoichiometric_matrix, Complex, Network};

/// Reaction graph on distinct complexes.
#[derive(Debug, Clone)]
pub struct ComplexGraph {
    /// Distinct complexes in first-appearance order.
    pub nodes: Vec<Complex>,
    /// `(reactant node, product node)` for each reaction, in reaction order.
    pub edges: Vec<(usize, usize)>,
    /// Node indices of each weakly connected component.
    pub linkage_classes: Vec<Vec<usize>>,
    class_of_node: Vec<usize>,
}

impl ComplexGraph {
    pub fn num_complexes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_linkage_classes(&self) -> usize {
        self.linkage_classes.len()
    }

    /// Linkage class containing reaction `i`.
    pub fn class_of_reaction(&self, i: usize) -> usize {
        self.class_of_node[self.edges[i].0]
    }
}

pub fn complex_graph(net: &Network) -> ComplexGraph {
    let mut nodes: Vec<Complex> = Vec::new();
    let mut index: HashMap<Complex, usize> = HashMap::new();
    let mut node_of = |c: &Complex, nodes: &mut Vec<Complex>| {
        *index.entry(c.clone()).or_insert_with(|| {
            nodes.push(c.clone());
            nodes.len() - 1
        })
    };
    let edges: Vec<(usize, usize)> = net
        .reactions()
        .iter()
        .map(|r| {
            let a = node_of(&r.reactant, &mut nodes);
            let b = node_of(&r.product, &mut nodes);
            (a, b)
        })
        .collect();

    let mut uf = UnionFind::new(nodes.len());
    for &(a, b) in &edges {
        uf.union(a, b);
    }
    let mut class_id: HashMap<usize, usize> = HashMap::new();
    let mut linkage_classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of_node = vec![0; nodes.len()];
    for (n, slot) in class_of_node.iter_mut().enumerate() {
        let root = uf.find(n);
        let id = *class_id.entry(root).or_insert_with(|| {
            linkage_classes.push(Vec::new());
            linkage_classes.len() - 1
        });
        linkage_classes[id].push(n);
        *slot = id;
    }
    ComplexGraph {
        nodes,
        edges,
        linkage_classes,
        class_of_node,
    }
}

/// Every linkage class strongly connected, i.e. every edge lies on a cycle.
pub fn is_weakly_reversible(g: &ComplexGraph) -> bool {
    let mut dg: DiGraph<(), ()> = DiGraph::new();
    let idx: Vec<_> = (0..g.nodes.len()).map(|_| dg.add_node(())).collect();
    for &(a, b) in &g.edges {
        dg.add_edge(idx[a], idx[b], ());
    }
    let mut scc_of = vec![0; g.nodes.len()];
    for (k, comp) in tarjan_scc(&dg).into_iter().enumerate() {
        for n in comp {
            scc_of[n.index()] = k;
        }
    }
    g.edges.iter().all(|&(a, b)| scc_of[a] == scc_of[b])
}

/// `n − ℓ − s`.
pub fn deficiency(net: &Network) -> i64 {
    let g = complex_graph(net);
    let s = stoichiometric_matrix(net).to_rational().rank();
    g.num_complexes() as i64 - g.num_linkage_classes() as i64 - s as i64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conservation {
    pub conservative: bool,
    /// `c ≥ 1` componentwise with `cᵀΓ = 0`, when one exists.
    pub vector: Option<Vec<Rational>>,
}

pub fn conservation_analysis(net: &Network) -> Conservation {
    let gamma = stoichiometric_matrix(net).to_rational();
    let all: Vec<usize> = (0..net.num_species()).collect();
    let vector = sign_constrained_nullvector(&gamma, &all, &[]);
    Conservation {
        conservative: vector.is_some(),
        vector,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureSummary {
    pub species: usize,
    pub reactions: usize,
    /// `n`
    pub complexes: usize,
    /// `ℓ`
    pub linkage_classes: usize,
    /// `s = rank Γ`
    pub rank: usize,
    pub deficiency: i64,
    pub weakly_reversible: bool,
    pub conservative: bool,
    #[serde(serialize_with = "crate::ser::opt_rationals")]
    pub conservation_vector: Option<Vec<Rational>>,
    /// Weak reversibility together with zero deficiency.
    pub complex_balanced_for_all_k: bool,
}

pub fn summarize(net: &Network) -> StructureSummary {
    let g = complex_graph(net);
    let rank = stoichiometric_matrix(net).to_rational().rank();
    let deficiency = g.num_complexes() as i64 - g.num_linkage_classes() as i64 - rank as i64;
    assert!(deficiency >= 0, "negative deficiency {deficiency}");
    let weakly_reversible = is_weakly_reversible(&g);
    let conservation = conservation_analysis(net);
    StructureSummary {
        species: net.num_species(),
        reactions: net.num_reactions(),
        complexes: g.num_complexes(),
        linkage_classes: g.num_linkage_classes(),
        rank,
        deficiency,
        weakly_reversible,
        conservative: conservation.conservative,
        conservation_vector: conservation.vector,
        complex_balanced_for_all_k: weakly_reversible && deficiency == 0,
    }
}

/// Dimension data for the face where the species of a siphon vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceGeometry {
    #[serde(serialize_with = "crate::ser::one_based")]
    pub siphon: Vec<usize>,
    /// `s − rank Γ_I`
    pub face_dim: usize,
    pub is_facet: bool,
    pub is_vertex: bool,
}

/// Face dimension from ranks: `{w ∈ range Γ : w_I = 0}` has dimension
/// `rank Γ − rank Γ_I`, independent of the compatibility class.
pub fn face_geometry(net: &Network, siphon: &[usize]) -> FaceGeometry {
    let gamma = stoichiometric_matrix(net).to_rational();
    let s = gamma.rank();
    let s_i = gamma.select_rows(siphon).rank();
    let face_dim = s - s_i;
    FaceGeometry {
        siphon: siphon.to_vec(),
        face_dim,
        is_facet: s >= 1 && face_dim == s - 1,
        is_vertex: face_dim == 0,
    }
}
