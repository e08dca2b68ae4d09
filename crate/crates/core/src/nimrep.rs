//! NIM-reps: one non-negative integer matrix per ring basis element,
//! multiplying like the ring and transposing along the involution.
//!
//! Matrix convention: `matrix(b)[r][c]` is the coefficient of module element
//! `m_r` in `b ▷ m_c`, so matrices act on column vectors and invertibles act
//! as the permutation `c -> p(c)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{coset_space, FiniteGroup, GroupError, Subgroup};
use crate::matrix::IntMatrix;
use crate::perm::Perm;
use crate::ring::{FusionRing, RingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NimRepError {
    #[error("matrix list is empty, ragged, or has the wrong count (at index {index})")]
    ShapeMismatch { index: usize },
    #[error("unit matrix differs from the identity at ({row}, {col})")]
    UnitNotIdentity { row: usize, col: usize },
    #[error("product rule fails for pair ({i}, {j}) at ({row}, {col}): got {got}, want {want}")]
    NotHomomorphism { i: usize, j: usize, row: usize, col: usize, got: u64, want: u64 },
    #[error("matrix of the dual of {i} is not the transpose at ({row}, {col})")]
    NotRigid { i: usize, row: usize, col: usize },
    #[error("invertible basis element {g} does not act by a permutation")]
    InvertibleNotPermutation { g: usize },
    #[error("module index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("label count {got} does not match dimension {want}")]
    LabelMismatch { got: usize, want: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("malformed data: {0}")]
    Malformed(String),
}

/// A validated NIM-rep. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NimRep {
    ring: Arc<FusionRing>,
    dim: usize,
    labels: Vec<String>,
    matrices: Vec<IntMatrix>,
}

/// The invertible part of the ring acting on the module: the group itself,
/// the basis index of each group element, and the induced permutations.
#[derive(Clone, Debug)]
pub struct InvertibleAction {
    pub group: FiniteGroup,
    /// Group element index -> ring basis index.
    pub basis_index: Vec<usize>,
    /// Group element index -> permutation of module indices.
    pub perms: Vec<Perm>,
}

/// Orbits of the module under a subgroup of the invertibles. Orbits are
/// sorted internally and ordered by least member; stabilizers are taken at
/// each orbit's least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Vec<usize>>,
    pub stabilizers: Vec<Subgroup>,
}

/// Multiset over the ring basis read off a module point's self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraObject {
    pub multiplicities: Vec<u64>,
}

impl AlgebraObject {
    /// Human-readable sum like `e + (0,1) + X1`.
    pub fn describe(&self, ring: &FusionRing) -> String {
        let mut parts = Vec::new();
        for (i, &m) in self.multiplicities.iter().enumerate() {
            if m == 1 {
                parts.push(ring.label(i).to_string());
            } else if m > 1 {
                parts.push(format!("{m}*{}", ring.label(i)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Validates and wraps a matrix tuple. Checks, in order: shape, unit,
/// homomorphism, rigidity, invertibles acting by permutations.
pub fn nimrep_from_matrices(
    ring: Arc<FusionRing>,
    matrices: Vec<IntMatrix>,
) -> Result<NimRep, NimRepError> {
    let dim = matrices.first().map(IntMatrix::dim).unwrap_or(0);
    let labels = (0..dim).map(|i| format!("m{i}")).collect();
    nimrep_with_labels(ring, matrices, labels)
}

pub fn nimrep_with_labels(
    ring: Arc<FusionRing>,
    matrices: Vec<IntMatrix>,
    labels: Vec<String>,
) -> Result<NimRep, NimRepError> {
    let b = ring.basis_len();
    if matrices.len() != b || matrices.is_empty() {
        return Err(NimRepError::ShapeMismatch { index: matrices.len() });
    }
    let dim = matrices[0].dim();
    if dim == 0 {
        return Err(NimRepError::ShapeMismatch { index: 0 });
    }
    if let Some(bad) = matrices.iter().position(|m| m.dim() != dim) {
        return Err(NimRepError::ShapeMismatch { index: bad });
    }
    if labels.len() != dim {
        return Err(NimRepError::LabelMismatch { got: labels.len(), want: dim });
    }
    check_matrices(&ring, &matrices)?;
    Ok(NimRep { ring, dim, labels, matrices })
}

/// The axiom part of validation, reusable on raw candidate tuples.
pub fn check_matrices(ring: &FusionRing, matrices: &[IntMatrix]) -> Result<(), NimRepError> {
    let b = ring.basis_len();
    let dim = matrices[0].dim();
    let unit = ring.unit();
    for r in 0..dim {
        for c in 0..dim {
            if matrices[unit].get(r, c) != u64::from(r == c) {
                return Err(NimRepError::UnitNotIdentity { row: r, col: c });
            }
        }
    }
    for i in 0..b {
        let dual = ring.dual(i);
        for r in 0..dim {
            for c in 0..dim {
                if matrices[dual].get(r, c) != matrices[i].get(c, r) {
                    return Err(NimRepError::NotRigid { i, row: r, col: c });
                }
            }
        }
    }
    for &g in ring.invertibles() {
        if !matrices[g].is_permutation() {
            return Err(NimRepError::InvertibleNotPermutation { g });
        }
    }
    for i in 0..b {
        for j in 0..b {
            let prod = matrices[i].mul(&matrices[j]);
            let mut want = IntMatrix::zero(dim);
            for (k, &c) in ring.product_row(i, j).iter().enumerate() {
                if c != 0 {
                    want.add_scaled(&matrices[k], c);
                }
            }
            if prod != want {
                for r in 0..dim {
                    for c in 0..dim {
                        if prod.get(r, c) != want.get(r, c) {
                            return Err(NimRepError::NotHomomorphism {
                                i,
                                j,
                                row: r,
                                col: c,
                                got: prod.get(r, c),
                                want: want.get(r, c),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

impl NimRep {
    pub fn ring(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    /// Connectivity of the underlying undirected graph on module indices.
    pub fn is_irreducible(&self) -> bool {
        let mut seen = vec![false; self.dim];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for m in &self.matrices {
                for w in 0..self.dim {
                    if !seen[w] && (m.get(v, w) != 0 || m.get(w, v) != 0) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Some module point from which every point is reachable by a single
    /// basis-element action; returns the least such witness.
    pub fn is_admissible(&self) -> (bool, Option<usize>) {
        'outer: for m0 in 0..self.dim {
            for r in 0..self.dim {
                let hit = self.matrices.iter().any(|m| m.get(r, m0) != 0);
                if !hit {
                    continue 'outer;
                }
            }
            return (true, Some(m0));
        }
        (false, None)
    }

    /// The invertibles as a group together with their module permutations.
    pub fn invertible_action(&self) -> Result<InvertibleAction, NimRepError> {
        let (group, basis_index) = self.ring.invertible_group()?;
        let perms = basis_index
            .iter()
            .map(|&b| {
                self.matrices[b]
                    .as_perm()
                    .ok_or(NimRepError::InvertibleNotPermutation { g: b })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InvertibleAction { group, basis_index, perms })
    }

    /// Self-loop multiplicities at one module point.
    pub fn algebra_object_at(&self, index: usize) -> Result<AlgebraObject, NimRepError> {
        if index >= self.dim {
            return Err(NimRepError::IndexOutOfRange { index, dim: self.dim });
        }
        let multiplicities = self.matrices.iter().map(|m| m.get(index, index)).collect();
        Ok(AlgebraObject { multiplicities })
    }

    /// Same matrices under a renaming of module indices: entry (r, c) moves
    /// to (p(r), p(c)).
    pub fn relabel(&self, p: &Perm) -> NimRep {
        assert_eq!(p.len(), self.dim);
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let mut out = IntMatrix::zero(self.dim);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        let v = m.get(r, c);
                        if v != 0 {
                            out.set(p.apply(r), p.apply(c), v);
                        }
                    }
                }
                out
            })
            .collect();
        let mut labels = vec![String::new(); self.dim];
        for (i, l) in self.labels.iter().enumerate() {
            labels[p.apply(i)] = l.clone();
        }
        NimRep { ring: self.ring.clone(), dim: self.dim, labels, matrices }
    }

    pub fn direct_sum(&self, other: &NimRep) -> Result<NimRep, NimRepError> {
        if self.ring != other.ring {
            return Err(NimRepError::Malformed("direct sum across different rings".into()));
        }
        let matrices: Vec<IntMatrix> = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        Ok(NimRep { ring: self.ring.clone(), dim: self.dim + other.dim, labels, matrices })
    }

    /// The ring acting on itself; valid for every fusion ring.
    pub fn regular(ring: Arc<FusionRing>) -> NimRep {
        let b = ring.basis_len();
        let matrices: Vec<IntMatrix> = (0..b)
            .map(|i| {
                let mut m = IntMatrix::zero(b);
                for l in 0..b {
                    for (t, &c) in ring.product_row(i, l).iter().enumerate() {
                        if c != 0 {
                            m.set(t, l, c);
                        }
                    }
                }
                m
            })
            .collect();
        let labels = ring.labels().to_vec();
        nimrep_with_labels(ring, matrices, labels)
            .expect("the ring acting on itself always validates")
    }

    pub fn to_json(&self) -> String {
        let mut matrices = serde_json::Map::new();
        for (i, m) in self.matrices.iter().enumerate() {
            matrices.insert(
                self.ring.label(i).to_string(),
                serde_json::to_value(m.rows()).expect("rows serialize"),
            );
        }
        let wire = NimRepWire {
            ring: self.ring.name().to_string(),
            dim: self.dim,
            labels: self.labels.clone(),
            matrices,
        };
        serde_json::to_string_pretty(&wire).expect("wire form serializes")
    }

    /// Loads and re-validates a rep against the given ring; matrix keys must
    /// exactly cover the ring's basis labels.
    pub fn from_json(text: &str, ring: Arc<FusionRing>) -> Result<NimRep, NimRepError> {
        let wire: NimRepWire =
            serde_json::from_str(text).map_err(|e| NimRepError::Malformed(e.to_string()))?;
        let b = ring.basis_len();
        if wire.matrices.len() != b {
            return Err(NimRepError::Malformed(format!(
                "expected {b} matrices, found {}",
                wire.matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(b);
        for i in 0..b {
            let label = ring.label(i);
            let value = wire
                .matrices
                .get(label)
                .ok_or_else(|| NimRepError::Malformed(format!("missing matrix for {label}")))?;
            let rows: Vec<Vec<u64>> = serde_json::from_value(value.clone())
                .map_err(|e| NimRepError::Malformed(format!("matrix for {label}: {e}")))?;
            let m = IntMatrix::from_rows(rows).map_err(NimRepError::Malformed)?;
            matrices.push(m);
        }
        nimrep_with_labels(ring, matrices, wire.labels)
    }
}

#[derive(Serialize, Deserialize)]
struct NimRepWire {
    ring: String,
    dim: usize,
    labels: Vec<String>,
    matrices: serde_json::Map<String, serde_json::Value>,
}

/// Orbits of the module under `sub`, a subgroup of `action.group`.
pub fn decompose_orbits(
    rep: &NimRep,
    action: &InvertibleAction,
    sub: &Subgroup,
) -> Result<OrbitDecomposition, NimRepError> {
    let sub = Subgroup::new(&action.group, sub.members().to_vec())?;
    let dim = rep.dim();
    let mut orbit_of = vec![usize::MAX; dim];
    let mut orbits = Vec::new();
    let mut stabilizers = Vec::new();
    for start in 0..dim {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members: Vec<usize> =
            sub.members().iter().map(|&g| action.perms[g].apply(start)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_of[m] = id;
        }
        let stab: Vec<usize> = sub
            .members()
            .iter()
            .copied()
            .filter(|&g| action.perms[g].apply(start) == start)
            .collect();
        orbits.push(members);
        stabilizers.push(Subgroup::new(&action.group, stab)?);
    }
    Ok(OrbitDecomposition { orbits, stabilizers })
}

/// Matrix-level isomorphism: a bijection of module indices carrying every
/// matrix of `a` to the matching matrix of `b`. Returns the bijection as a
/// permutation (a-index -> b-index). This is the ground truth that
/// family-level classifications are checked against.
pub fn are_isomorphic(a: &NimRep, b: &NimRep) -> Option<Perm> {
    if a.ring() != b.ring() || a.dim() != b.dim() {
        return None;
    }
    let d = a.dim();
    let nb = a.ring().basis_len();
    // per-node fingerprint: for each label, (diagonal, sorted column, sorted row)
    let signature = |rep: &NimRep, v: usize| -> Vec<(u64, Vec<u64>, Vec<u64>)> {
        (0..nb)
            .map(|i| {
                let m = rep.matrix(i);
                let mut col: Vec<u64> = (0..d).map(|r| m.get(r, v)).collect();
                let mut row: Vec<u64> = (0..d).map(|c| m.get(v, c)).collect();
                col.sort_unstable();
                row.sort_unstable();
                (m.get(v, v), col, row)
            })
            .collect()
    };
    let sig_a: Vec<_> = (0..d).map(|v| signature(a, v)).collect();
    let sig_b: Vec<_> = (0..d).map(|v| signature(b, v)).collect();
    let candidates: Vec<Vec<usize>> = (0..d)
        .map(|v| (0..d).filter(|&w| sig_a[v] == sig_b[w]).collect())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    // assign most-constrained nodes first
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&v| candidates[v].len());

    let mut map = vec![usize::MAX; d];
    let mut used = vec![false; d];

    fn consistent(a: &NimRep, b: &NimRep, map: &[usize], v: usize, w: usize, nb: usize) -> bool {
        for i in 0..nb {
            let ma = a.matrix(i);
            let mb = b.matrix(i);
            if ma.get(v, v) != mb.get(w, w) {
                return false;
            }
            for (q, &mq) in map.iter().enumerate() {
                if mq == usize::MAX || q == v {
                    continue;
                }
                if ma.get(v, q) != mb.get(w, mq) || ma.get(q, v) != mb.get(mq, w) {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        a: &NimRep,
        b: &NimRep,
        order: &[usize],
        candidates: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        depth: usize,
        nb: usize,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for &w in &candidates[v] {
            if used[w] || !consistent(a, b, map, v, w, nb) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if search(a, b, order, candidates, map, used, depth + 1, nb) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    if !search(a, b, &order, &candidates, &mut map, &mut used, 0, nb) {
        return None;
    }
    let p = Perm::from_map(map).expect("search produces a bijection");
    // full re-check; the incremental test already covered every pair, this
    // guards the search logic itself
    for i in 0..nb {
        let ma = a.matrix(i);
        let mb = b.matrix(i);
        for r in 0..d {
            for c in 0..d {
                if ma.get(r, c) != mb.get(p.apply(r), p.apply(c)) {
                    return None;
                }
            }
        }
    }
    Some(p)
}

/// Left multiplication on coset spaces assembled into permutation matrices;
/// shared by both family classifiers.
pub fn coset_permutation_matrices(
    group: &FiniteGroup,
    sub: &Subgroup,
) -> Result<(Vec<IntMatrix>, Vec<String>), GroupError> {
    let cs = coset_space(group, sub)?;
    let mats = cs.action.iter().map(IntMatrix::from_perm).collect();
    let labels = cs
        .cosets
        .iter()
        .map(|c| format!("{}H", group.element_label(c[0])))
        .collect();
    Ok((mats, labels))
}
