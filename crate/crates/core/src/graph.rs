//! Directed labeled graphs read off NIM-rep matrices, plus the contracted
//! form where invertible orbits become single nodes.

use crate::group::Subgroup;
use crate::nimrep::{decompose_orbits, InvertibleAction, NimRep, NimRepError, OrbitDecomposition};

/// One labeled edge of a NIM-graph: `b ▷ m_source` contains `m_target` with
/// this multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub ring_label: usize,
    pub source: usize,
    pub target: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NimGraph {
    pub node_labels: Vec<String>,
    /// Sorted by (ring label, source, target).
    pub edges: Vec<GraphEdge>,
    pub ring_labels: Vec<String>,
}

impl NimGraph {
    pub fn from_rep(rep: &NimRep) -> NimGraph {
        let d = rep.dim();
        let mut edges = Vec::new();
        for i in 0..rep.ring().basis_len() {
            let m = rep.matrix(i);
            for c in 0..d {
                for r in 0..d {
                    let v = m.get(r, c);
                    if v != 0 {
                        edges.push(GraphEdge {
                            ring_label: i,
                            source: c,
                            target: r,
                            multiplicity: v,
                        });
                    }
                }
            }
        }
        edges.sort();
        NimGraph {
            node_labels: rep.labels().to_vec(),
            edges,
            ring_labels: rep.ring().labels().to_vec(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph nim {\n  rankdir=LR;\n");
        for (i, l) in self.node_labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{l}\"];\n"));
        }
        for e in &self.edges {
            let text = edge_label(&self.ring_labels[e.ring_label], e.multiplicity);
            out.push_str(&format!("  n{} -> n{} [label=\"{text}\"];\n", e.source, e.target));
        }
        out.push_str("}\n");
        out
    }
}

fn edge_label(label: &str, multiplicity: u64) -> String {
    if multiplicity > 1 {
        format!("{label} (\u{00d7}{multiplicity})")
    } else {
        label.to_string()
    }
}

/// One edge of the contracted graph. Multiple underlying edges collapse to a
/// single edge per (source orbit, target orbit, label); the largest
/// underlying multiplicity and the count of collapsed edges are kept as
/// metadata.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitEdge {
    pub ring_label: usize,
    pub source: usize,
    pub target: usize,
    pub max_multiplicity: u64,
    pub collapsed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NimOrbitGraph {
    /// Module indices per node, in discovery order (least member first).
    pub orbits: Vec<Vec<usize>>,
    pub node_labels: Vec<String>,
    /// Sorted by (ring label, source, target); one edge per triple.
    pub edges: Vec<OrbitEdge>,
    pub ring_labels: Vec<String>,
}

/// Contracts all edges labeled by the chosen subgroup of invertibles. Edges
/// survive for every other ring basis element, at most one per orbit pair.
pub fn nim_orbit_graph(
    rep: &NimRep,
    action: &InvertibleAction,
    sub: &Subgroup,
) -> Result<NimOrbitGraph, NimRepError> {
    let dec: OrbitDecomposition = decompose_orbits(rep, action, sub)?;
    let d = rep.dim();
    let mut orbit_of = vec![0usize; d];
    for (idx, orbit) in dec.orbits.iter().enumerate() {
        for &m in orbit {
            orbit_of[m] = idx;
        }
    }
    let contracted: Vec<usize> = sub.members().iter().map(|&g| action.basis_index[g]).collect();
    let mut edges: std::collections::BTreeMap<(usize, usize, usize), (u64, usize)> =
        std::collections::BTreeMap::new();
    for i in 0..rep.ring().basis_len() {
        if contracted.contains(&i) {
            continue;
        }
        let m = rep.matrix(i);
        for c in 0..d {
            for r in 0..d {
                let v = m.get(r, c);
                if v == 0 {
                    continue;
                }
                let key = (i, orbit_of[c], orbit_of[r]);
                let entry = edges.entry(key).or_insert((0, 0));
                entry.0 = entry.0.max(v);
                entry.1 += 1;
            }
        }
    }
    let node_labels = dec
        .orbits
        .iter()
        .enumerate()
        .map(|(idx, orbit)| {
            let members: Vec<&str> =
                orbit.iter().map(|&m| rep.labels()[m].as_str()).collect();
            format!("O{idx} = {{{}}}", members.join(", "))
        })
        .collect();
    Ok(NimOrbitGraph {
        orbits: dec.orbits,
        node_labels,
        edges: edges
            .into_iter()
            .map(|((ring_label, source, target), (max_multiplicity, collapsed))| OrbitEdge {
                ring_label,
                source,
                target,
                max_multiplicity,
                collapsed,
            })
            .collect(),
        ring_labels: rep.ring().labels().to_vec(),
    })
}

impl NimOrbitGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph nim_orbits {\n  rankdir=LR;\n");
        for (i, l) in self.node_labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{l}\"];\n"));
        }
        for e in &self.edges {
            let text = edge_label(&self.ring_labels[e.ring_label], e.max_multiplicity);
            out.push_str(&format!("  n{} -> n{} [label=\"{text}\"];\n", e.source, e.target));
        }
        out.push_str("}\n");
        out
    }

    /// The edge set with metadata stripped, as (label name, source, target).
    /// Label names rather than indices so graphs over different rings with
    /// matching X labels can be compared.
    pub fn labeled_edge_set(&self) -> std::collections::BTreeSet<(String, usize, usize)> {
        self.edges
            .iter()
            .map(|e| (self.ring_labels[e.ring_label].clone(), e.source, e.target))
            .collect()
    }

    /// Which labels appear on self-loops.
    pub fn self_loop_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .edges
            .iter()
            .filter(|e| e.source == e.target)
            .map(|e| self.ring_labels[e.ring_label].clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Isomorphism of contracted graphs as labeled directed graphs: edge labels
/// stay fixed, nodes permute. Multiplicity metadata is ignored, matching the
/// convention that collapsed duplicates are display-only. Node counts here
/// are tiny, so all permutations are tried.
pub fn orbit_graphs_isomorphic(a: &NimOrbitGraph, b: &NimOrbitGraph) -> bool {
    let n = a.orbits.len();
    if n != b.orbits.len() {
        return false;
    }
    let ea = a.labeled_edge_set();
    let eb = b.labeled_edge_set();
    if ea.len() != eb.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mapped: std::collections::BTreeSet<(String, usize, usize)> = ea
            .iter()
            .map(|(l, s, t)| (l.clone(), perm[*s], perm[*t]))
            .collect();
        if mapped == eb {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Plain labeled-graph description for spelling out expected diagrams in
/// tests: node count plus (label, source, target) triples.
pub fn orbit_graph_matches(
    graph: &NimOrbitGraph,
    node_count: usize,
    edges: &[(&str, usize, usize)],
) -> bool {
    if graph.orbits.len() != node_count {
        return false;
    }
    let want: std::collections::BTreeSet<(String, usize, usize)> =
        edges.iter().map(|(l, s, t)| (l.to_string(), *s, *t)).collect();
    if want.len() != graph.edges.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..node_count).collect();
    let have = graph.labeled_edge_set();
    loop {
        let mapped: std::collections::BTreeSet<(String, usize, usize)> =
            have.iter().map(|(l, s, t)| (l.clone(), perm[*s], perm[*t])).collect();
        if mapped == want {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Lexicographic next permutation; false once the sequence is descending.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::nimrep::NimRep;
    use crate::ring::jl_ring;
    use std::sync::Arc;

    fn ising_regular() -> NimRep {
        let ring = Arc::new(jl_ring(&FiniteGroup::abelian(&[2]).unwrap(), 2).unwrap());
        NimRep::regular(ring)
    }

    #[test]
    fn nim_graph_edges_match_matrix_entries() {
        let rep = ising_regular();
        let g = NimGraph::from_rep(&rep);
        let total: u64 = rep
            .matrices()
            .iter()
            .flat_map(|m| (0..3).flat_map(move |r| (0..3).map(move |c| m.get(r, c))))
            .filter(|&v| v != 0)
            .count() as u64;
        assert_eq!(g.edges.len() as u64, total);
        // unit loop on every node
        assert!(g.edges.iter().filter(|e| e.ring_label == 0).all(|e| e.source == e.target));
    }

    #[test]
    fn dot_output_is_stable() {
        let rep = ising_regular();
        let g = NimGraph::from_rep(&rep);
        assert_eq!(g.to_dot(), g.to_dot());
        assert!(g.to_dot().starts_with("digraph nim {"));
        let action = rep.invertible_action().unwrap();
        let og =
            nim_orbit_graph(&rep, &action, &Subgroup::full(&action.group)).unwrap();
        let dot = og.to_dot();
        assert!(dot.contains("label=\"X1\""));
        assert_eq!(dot, og.to_dot());
    }

    #[test]
    fn orbit_graph_of_the_regular_ising_rep() {
        let rep = ising_regular();
        let action = rep.invertible_action().unwrap();
        let og = nim_orbit_graph(&rep, &action, &Subgroup::full(&action.group)).unwrap();
        // two orbits: the group part and X; X-edges both ways plus none fixed
        assert_eq!(og.orbits, vec![vec![0, 1], vec![2]]);
        assert!(orbit_graph_matches(&og, 2, &[("X1", 0, 1), ("X1", 1, 0)]));
        assert_eq!(og.self_loop_labels(), Vec::<String>::new());
    }

    #[test]
    fn trivial_subgroup_contraction_keeps_all_nonunit_edges() {
        let rep = ising_regular();
        let action = rep.invertible_action().unwrap();
        let og = nim_orbit_graph(&rep, &action, &Subgroup::trivial()).unwrap();
        assert_eq!(og.orbits.len(), rep.dim());
        let full = NimGraph::from_rep(&rep);
        let non_unit: std::collections::BTreeSet<(String, usize, usize)> = full
            .edges
            .iter()
            .filter(|e| e.ring_label != 0)
            .map(|e| (full.ring_labels[e.ring_label].clone(), e.source, e.target))
            .collect();
        assert_eq!(og.labeled_edge_set(), non_unit);
    }

    #[test]
    fn labeled_isomorphism_respects_labels() {
        let rep = ising_regular();
        let action = rep.invertible_action().unwrap();
        let og = nim_orbit_graph(&rep, &action, &Subgroup::full(&action.group)).unwrap();
        assert!(orbit_graphs_isomorphic(&og, &og));
        assert!(!orbit_graph_matches(&og, 2, &[("X1", 0, 0), ("X1", 1, 1)]));
    }

    #[test]
    fn permutation_stepper_is_exhaustive() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(p, vec![2, 1, 0]);
    }
}
