//! NIM-rep construction and classification over the rings built by
//! `jl_ring`.
//!
//! A rep with m orbits is given by a tuple of subgroups (H_1..H_m): the
//! module is the disjoint union of the coset spaces G/H_i, invertibles act
//! by left multiplication, and X_k carries orbit i to orbit i+k (mod m) by
//! an all-ones block scaled with sqrt(|H_i||H_{i+k}|/|G|).
//!
//! Two classification relations are tracked. The coarse one identifies
//! tuples up to an arbitrary permutation with componentwise conjugacy; the
//! fine one only allows rotations (with conjugacy), which is what survives
//! at the matrix level because module isomorphisms must commute with the
//! fixed X_1 cycle. Catalogs are keyed by the fine relation after an
//! explicit matrix-level isomorphism pass; the coarse ids are recorded
//! alongside, and classes where the two disagree are reported.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{
    conjugacy_classes_of_subgroups, coset_space, enumerate_subgroups, exact_sqrt, FiniteGroup,
    GroupError, Subgroup,
};
use crate::matrix::IntMatrix;
use crate::nimrep::{
    are_isomorphic, nimrep_with_labels, AlgebraObject, NimRep, NimRepError,
};
use crate::ring::{jl_ring, FusionRing, RingError, RingKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JlError {
    #[error("orbit count {m} does not divide p = {p}")]
    BadOrbitCount { m: usize, p: usize },
    #[error("square condition fails at orbit {i}, letter {k}: |H_i| * |H_target| / |G| = {product}/{order} is not a square integer")]
    ConditionViolated { i: usize, k: usize, product: usize, order: usize },
    #[error("ring was built from different data than these parameters")]
    RingMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    NimRep(#[from] NimRepError),
}

/// One orbit tuple over a fixed group and p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JlParams {
    pub group: FiniteGroup,
    pub p: usize,
    pub subgroups: Vec<Subgroup>,
}

impl JlParams {
    pub fn orbit_count(&self) -> usize {
        self.subgroups.len()
    }

    /// Module dimension: the sum of the coset space sizes.
    pub fn dim(&self) -> usize {
        self.subgroups.iter().map(|h| self.group.order() / h.len()).sum()
    }
}

/// Checks m | p and every square condition, naming the first offender.
pub fn jl_validate(params: &JlParams) -> Result<(), JlError> {
    let m = params.orbit_count();
    let p = params.p;
    if m == 0 || p % m != 0 {
        return Err(JlError::BadOrbitCount { m, p });
    }
    for h in &params.subgroups {
        Subgroup::new(&params.group, h.members().to_vec())?;
    }
    for i in 0..m {
        for k in 1..p {
            coefficient(params, i, k)?;
        }
    }
    Ok(())
}

/// sqrt(|H_i||H_{i+k mod m}|/|G|), the block entry of X_k out of orbit i.
fn coefficient(params: &JlParams, i: usize, k: usize) -> Result<u64, JlError> {
    let m = params.orbit_count();
    let order = params.group.order();
    let target = (i + k) % m;
    let product = params.subgroups[i].len() * params.subgroups[target].len();
    if product % order != 0 {
        return Err(JlError::ConditionViolated { i, k, product, order });
    }
    exact_sqrt((product / order) as u64)
        .map_err(|_| JlError::ConditionViolated { i, k, product, order })
}

/// The m-by-m block-coefficient matrix of each X_k: entry (i, j) is the
/// coefficient carrying orbit i to orbit j, nonzero only at j = i+k (mod m).
pub fn jl_coefficient_matrices(params: &JlParams) -> Result<Vec<IntMatrix>, JlError> {
    jl_validate(params)?;
    let m = params.orbit_count();
    let mut out = Vec::with_capacity(params.p - 1);
    for k in 1..params.p {
        let mut c = IntMatrix::zero(m);
        for i in 0..m {
            c.set(i, (i + k) % m, coefficient(params, i, k)?);
        }
        out.push(c);
    }
    Ok(out)
}

/// Builds and validates the rep for a tuple, sharing a prebuilt ring.
pub fn jl_build_with_ring(params: &JlParams, ring: Arc<FusionRing>) -> Result<NimRep, JlError> {
    match ring.ring_kind() {
        RingKind::Jl { group, p, .. } if group == &params.group && *p == params.p => {}
        _ => return Err(JlError::RingMismatch),
    }
    jl_validate(params)?;
    let g = &params.group;
    let order = g.order();
    let m = params.orbit_count();
    let spaces: Vec<_> = params
        .subgroups
        .iter()
        .map(|h| coset_space(g, h))
        .collect::<Result<Vec<_>, _>>()?;
    let mut offsets = vec![0usize];
    for cs in &spaces {
        offsets.push(offsets.last().unwrap() + cs.cosets.len());
    }
    let dim = *offsets.last().unwrap();
    let mut labels = Vec::with_capacity(dim);
    for (i, cs) in spaces.iter().enumerate() {
        for coset in &cs.cosets {
            labels.push(format!("o{i}:{}H", g.element_label(coset[0])));
        }
    }
    let mut matrices = Vec::with_capacity(ring.basis_len());
    for a in 0..order {
        let mut mat = IntMatrix::zero(dim);
        for (i, cs) in spaces.iter().enumerate() {
            let perm = &cs.action[a];
            for c in 0..perm.len() {
                mat.set(offsets[i] + perm.apply(c), offsets[i] + c, 1);
            }
        }
        matrices.push(mat);
    }
    for k in 1..params.p {
        let mut mat = IntMatrix::zero(dim);
        for i in 0..m {
            let t = (i + k) % m;
            let c = coefficient(params, i, k)?;
            for col in offsets[i]..offsets[i + 1] {
                for row in offsets[t]..offsets[t + 1] {
                    mat.set(row, col, c);
                }
            }
        }
        matrices.push(mat);
    }
    Ok(nimrep_with_labels(ring, matrices, labels)?)
}

pub fn jl_build(params: &JlParams) -> Result<NimRep, JlError> {
    let ring = Arc::new(jl_ring(&params.group, params.p)?);
    jl_build_with_ring(params, ring)
}

/// The coarse classification relation: equal orbit counts and equal
/// multisets of subgroup conjugacy classes (any permutation allowed).
pub fn jl_same_class(a: &JlParams, b: &JlParams) -> bool {
    if a.group != b.group || a.p != b.p || a.orbit_count() != b.orbit_count() {
        return false;
    }
    let subs = enumerate_subgroups(&a.group);
    let canon = conjugacy_canonical_map(&a.group, &subs);
    let key = |params: &JlParams| -> Option<Vec<usize>> {
        let mut ids = params
            .subgroups
            .iter()
            .map(|h| subs.iter().position(|s| s == h).map(|i| canon[i]))
            .collect::<Option<Vec<usize>>>()?;
        ids.sort_unstable();
        Some(ids)
    };
    match (key(a), key(b)) {
        (Some(ka), Some(kb)) => ka == kb,
        _ => false,
    }
}

/// For each subgroup index, the least index in its conjugacy class.
fn conjugacy_canonical_map(group: &FiniteGroup, subs: &[Subgroup]) -> Vec<usize> {
    let classes = conjugacy_classes_of_subgroups(group, subs);
    let mut canon = vec![0usize; subs.len()];
    for class in &classes {
        let least = class[0];
        for &i in class {
            canon[i] = least;
        }
    }
    canon
}

/// Closed-form algebra objects, one per orbit: the subgroup's elements plus,
/// when p = m*l with l > 1, sqrt(|H_i|^2/|G|) copies of each X_{jm}.
pub fn jl_algebra_objects(params: &JlParams) -> Result<Vec<AlgebraObject>, JlError> {
    jl_validate(params)?;
    let order = params.group.order();
    let m = params.orbit_count();
    let l = params.p / m;
    let basis_len = order + params.p - 1;
    let mut out = Vec::with_capacity(m);
    for h in &params.subgroups {
        let mut mult = vec![0u64; basis_len];
        for &member in h.members() {
            mult[member] = 1;
        }
        if l > 1 {
            let sq = h.len() * h.len();
            if sq % order != 0 {
                return Err(JlError::ConditionViolated { i: 0, k: m, product: sq, order });
            }
            let c = exact_sqrt((sq / order) as u64)
                .map_err(|_| JlError::ConditionViolated { i: 0, k: m, product: sq, order })?;
            for j in 1..l {
                mult[order + j * m - 1] = c;
            }
        }
        out.push(AlgebraObject { multiplicities: mult });
    }
    Ok(out)
}

/// One catalog entry: the representative tuple, its built rep, and ids under
/// both relations.
#[derive(Clone, Debug)]
pub struct JlEntry {
    pub params: JlParams,
    pub rep: NimRep,
    /// Matrix-level class id, contiguous from 0 in catalog order.
    pub class_id: usize,
    /// Coarse (permutation) class id.
    pub theorem_class_id: usize,
}

#[derive(Clone, Debug)]
pub struct JlEnumeration {
    pub ring: Arc<FusionRing>,
    pub entries: Vec<JlEntry>,
    /// Coarse classes containing more than one matrix-level class, as
    /// (theorem_class_id, class_ids). Nonempty exactly when the two
    /// relations disagree.
    pub split_theorem_classes: Vec<(usize, Vec<usize>)>,
    /// Rotation classes that turned out matrix-isomorphic and were merged,
    /// as human-readable notes. Expected empty; kept honest by the explicit
    /// isomorphism pass.
    pub merge_notes: Vec<String>,
}

/// Enumerates one representative per matrix-level class, for every divisor
/// m of p. Deterministic: tuples are scanned in lexicographic subgroup-index
/// order and representatives keyed by their least rotation.
pub fn jl_enumerate(group: &FiniteGroup, p: usize) -> Result<JlEnumeration, JlError> {
    let ring = Arc::new(jl_ring(group, p)?);
    let order = group.order();
    let subs = enumerate_subgroups(group);
    let canon = conjugacy_canonical_map(group, &subs);
    let square_ok = |a: usize, b: usize| -> bool {
        let product = subs[a].len() * subs[b].len();
        product % order == 0 && exact_sqrt((product / order) as u64).is_ok()
    };
    let compat: Vec<Vec<bool>> = (0..subs.len())
        .map(|a| (0..subs.len()).map(|b| square_ok(a, b)).collect())
        .collect();

    // representatives keyed by (m, least rotation of conjugacy-canonical ids)
    let mut reps: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for m in 1..=p {
        if p % m != 0 {
            continue;
        }
        let need_self = m < p;
        let mut tuple = Vec::with_capacity(m);
        scan_tuples(&compat, need_self, subs.len(), m, &mut tuple, &mut |t| {
            let ids: Vec<usize> = t.iter().map(|&s| canon[s]).collect();
            let key = least_rotation(&ids);
            reps.entry((m, key)).or_insert_with(|| t.to_vec());
        });
    }

    let built: Vec<(Vec<usize>, JlParams, NimRep)> = reps
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|((_, key), tuple)| {
            let params = JlParams {
                group: group.clone(),
                p,
                subgroups: tuple.iter().map(|&s| subs[s].clone()).collect(),
            };
            let rep = jl_build_with_ring(&params, ring.clone())?;
            Ok((key.clone(), params, rep))
        })
        .collect::<Result<Vec<_>, JlError>>()?;

    // ground-truth pass: merge any rotation classes the matrices identify
    let mut entries: Vec<JlEntry> = Vec::new();
    let mut kept_keys: Vec<Vec<usize>> = Vec::new();
    let mut merge_notes = Vec::new();
    for (key, params, rep) in built {
        let mut merged = false;
        for (idx, kept) in entries.iter().enumerate() {
            if kept.rep.dim() == rep.dim() && are_isomorphic(&kept.rep, &rep).is_some() {
                merge_notes.push(format!(
                    "rotation classes {:?} and {:?} are matrix-isomorphic; kept the first",
                    kept_keys[idx], key
                ));
                merged = true;
                break;
            }
        }
        if !merged {
            kept_keys.push(key);
            entries.push(JlEntry { params, rep, class_id: entries.len(), theorem_class_id: 0 });
        }
    }

    // coarse ids by multiset of conjugacy-canonical subgroup ids
    let mut theorem_ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for entry in entries.iter_mut() {
        let mut ids: Vec<usize> = entry
            .params
            .subgroups
            .iter()
            .map(|h| canon[subs.iter().position(|s| s == h).expect("tuple uses listed subgroups")])
            .collect();
        ids.sort_unstable();
        let next = theorem_ids.len();
        let id = *theorem_ids.entry((entry.params.orbit_count(), ids)).or_insert(next);
        entry.theorem_class_id = id;
    }
    let mut by_theorem: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &entries {
        by_theorem.entry(e.theorem_class_id).or_default().push(e.class_id);
    }
    let split_theorem_classes: Vec<(usize, Vec<usize>)> =
        by_theorem.into_iter().filter(|(_, v)| v.len() > 1).collect();

    Ok(JlEnumeration { ring, entries, split_theorem_classes, merge_notes })
}

/// Depth-first scan over subgroup-index tuples with pairwise pruning.
fn scan_tuples(
    compat: &[Vec<bool>],
    need_self: bool,
    n: usize,
    m: usize,
    tuple: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if tuple.len() == m {
        emit(tuple);
        return;
    }
    for s in 0..n {
        if need_self && !compat[s][s] {
            continue;
        }
        if tuple.iter().any(|&t| !compat[t][s]) {
            continue;
        }
        tuple.push(s);
        scan_tuples(compat, need_self, n, m, tuple, emit);
        tuple.pop();
    }
}

fn least_rotation(ids: &[usize]) -> Vec<usize> {
    let m = ids.len();
    (0..m)
        .map(|r| {
            let mut rotated = Vec::with_capacity(m);
            rotated.extend_from_slice(&ids[r..]);
            rotated.extend_from_slice(&ids[..r]);
            rotated
        })
        .min()
        .expect("tuples are nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples::s3;
    use crate::nimrep::decompose_orbits;

    fn z2xz2() -> FiniteGroup {
        FiniteGroup::abelian(&[2, 2]).unwrap()
    }

    fn params(group: &FiniteGroup, p: usize, sizes: &[&[usize]]) -> JlParams {
        JlParams {
            group: group.clone(),
            p,
            subgroups: sizes
                .iter()
                .map(|members| Subgroup::new(group, members.to_vec()).unwrap())
                .collect(),
        }
    }

    #[test]
    fn one_orbit_classes_over_z2xz2_p3() {
        let enumeration = jl_enumerate(&z2xz2(), 3).unwrap();
        let one_orbit: Vec<&JlEntry> =
            enumeration.entries.iter().filter(|e| e.params.orbit_count() == 1).collect();
        assert_eq!(one_orbit.len(), 4);
        let mut dims: Vec<usize> = one_orbit.iter().map(|e| e.rep.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 2]);
        // the 1-dimensional rep takes every X to the single entry 2
        let tiny = one_orbit.iter().find(|e| e.rep.dim() == 1).unwrap();
        assert_eq!(tiny.params.subgroups[0].len(), 4);
        assert_eq!(tiny.rep.matrix(4).get(0, 0), 2);
        assert_eq!(tiny.rep.matrix(5).get(0, 0), 2);
        // the 2-dimensional reps have coefficient 1
        for e in one_orbit.iter().filter(|e| e.rep.dim() == 2) {
            assert_eq!(e.rep.matrix(4).get(0, 0), 1);
        }
    }

    #[test]
    fn coefficient_matrices_for_the_mixed_triple() {
        let g = z2xz2();
        let p = params(&g, 3, &[&[0], &[0, 1, 2, 3], &[0, 1, 2, 3]]);
        let c = jl_coefficient_matrices(&p).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].rows(), vec![vec![0, 1, 0], vec![0, 0, 2], vec![1, 0, 0]]);
        assert_eq!(c[1].rows(), vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 2, 0]]);
    }

    #[test]
    fn three_orbit_size_patterns_over_z2xz2_p3() {
        let enumeration = jl_enumerate(&z2xz2(), 3).unwrap();
        let mut patterns: Vec<Vec<usize>> = enumeration
            .entries
            .iter()
            .filter(|e| e.params.orbit_count() == 3)
            .map(|e| {
                let mut sizes: Vec<usize> =
                    e.params.subgroups.iter().map(Subgroup::len).collect();
                sizes.sort_unstable();
                sizes
            })
            .collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns, vec![vec![1, 4, 4], vec![2, 2, 2], vec![4, 4, 4]]);
    }

    #[test]
    fn three_orbit_class_counts_and_split_report() {
        let enumeration = jl_enumerate(&z2xz2(), 3).unwrap();
        assert!(enumeration.merge_notes.is_empty());
        let three: Vec<&JlEntry> =
            enumeration.entries.iter().filter(|e| e.params.orbit_count() == 3).collect();
        // one mixed class, one all-G class, eleven all-order-2 rotation classes
        assert_eq!(three.len(), 13);
        let all_order2 = three
            .iter()
            .filter(|e| e.params.subgroups.iter().all(|h| h.len() == 2))
            .count();
        assert_eq!(all_order2, 11);
        // exactly one coarse class splits: the three-distinct-subgroups
        // multiset, whose two cyclic orders are not matrix-isomorphic
        assert_eq!(enumeration.split_theorem_classes.len(), 1);
        let (_, ref ids) = enumeration.split_theorem_classes[0];
        assert_eq!(ids.len(), 2);
        for &id in ids {
            let e = &enumeration.entries[id];
            let mut sizes: Vec<usize> = e.params.subgroups.iter().map(Subgroup::len).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![2, 2, 2]);
            let mut distinct = e.params.subgroups.clone();
            distinct.sort();
            distinct.dedup();
            assert_eq!(distinct.len(), 3);
        }
    }

    #[test]
    fn same_class_follows_permutations_not_sizes() {
        let g = z2xz2();
        let f1: &[usize] = &[0, 1];
        let f2: &[usize] = &[0, 2];
        let f3: &[usize] = &[0, 3];
        let a = params(&g, 3, &[f1, f2, f3]);
        let b = params(&g, 3, &[f2, f3, f1]);
        let c = params(&g, 3, &[f2, f1, f3]);
        assert!(jl_same_class(&a, &a));
        assert!(jl_same_class(&a, &b));
        assert!(jl_same_class(&a, &c));
        let full: &[usize] = &[0, 1, 2, 3];
        let e: &[usize] = &[0];
        assert!(!jl_same_class(&params(&g, 3, &[e, full, full]), &params(&g, 3, &[full; 3])));
    }

    #[test]
    fn rotation_but_not_permutation_identifies_matrices() {
        let g = z2xz2();
        let f1: &[usize] = &[0, 1];
        let f2: &[usize] = &[0, 2];
        let f3: &[usize] = &[0, 3];
        let abc = jl_build(&params(&g, 3, &[f1, f2, f3])).unwrap();
        let bca = jl_build(&params(&g, 3, &[f2, f3, f1])).unwrap();
        let acb = jl_build(&params(&g, 3, &[f1, f3, f2])).unwrap();
        assert!(are_isomorphic(&abc, &bca).is_some());
        assert!(are_isomorphic(&abc, &acb).is_none());
    }

    #[test]
    fn built_reps_are_valid_irreducible_with_m_orbits() {
        let g = z2xz2();
        for p in [2usize, 3, 4] {
            let enumeration = jl_enumerate(&g, p).unwrap();
            for e in &enumeration.entries {
                assert!(e.rep.is_irreducible());
                let action = e.rep.invertible_action().unwrap();
                let dec =
                    decompose_orbits(&e.rep, &action, &Subgroup::full(&action.group)).unwrap();
                assert_eq!(dec.orbits.len(), e.params.orbit_count());
                // X_1 cycles the orbits in a single m-cycle
                let m = e.params.orbit_count();
                let x1 = e.rep.matrix(g.order());
                let mut orbit_of = vec![0usize; e.rep.dim()];
                for (i, o) in dec.orbits.iter().enumerate() {
                    for &pt in o {
                        orbit_of[pt] = i;
                    }
                }
                for (i, o) in dec.orbits.iter().enumerate() {
                    let pt = o[0];
                    let image = (0..e.rep.dim()).find(|&r| x1.get(r, pt) != 0).unwrap();
                    assert_eq!(orbit_of[image], (i + 1) % m);
                }
            }
        }
    }

    #[test]
    fn x_k_fixes_orbits_only_at_multiples_of_m() {
        let g = z2xz2();
        let f: &[usize] = &[0, 1];
        let p = params(&g, 4, &[f, f]);
        let rep = jl_build(&p).unwrap();
        let action = rep.invertible_action().unwrap();
        let dec = decompose_orbits(&rep, &action, &Subgroup::full(&action.group)).unwrap();
        assert_eq!(dec.orbits.len(), 2);
        let fixes = |k: usize| -> bool {
            let m = rep.matrix(g.order() + k - 1);
            dec.orbits.iter().any(|o| m.get(o[0], o[0]) != 0)
        };
        assert!(!fixes(1));
        assert!(fixes(2));
        assert!(!fixes(3));
    }

    #[test]
    fn algebra_objects_match_self_loops_on_abelian_groups() {
        let g = z2xz2();
        let enumeration = jl_enumerate(&g, 3).unwrap();
        for e in &enumeration.entries {
            let closed = jl_algebra_objects(&e.params).unwrap();
            let action = e.rep.invertible_action().unwrap();
            let dec = decompose_orbits(&e.rep, &action, &Subgroup::full(&action.group)).unwrap();
            for (i, orbit) in dec.orbits.iter().enumerate() {
                for &pt in orbit {
                    assert_eq!(e.rep.algebra_object_at(pt).unwrap(), closed[i]);
                }
            }
        }
    }

    #[test]
    fn m1_algebra_over_order2_subgroup_lists_both_x() {
        let g = z2xz2();
        let p = params(&g, 3, &[&[0, 1]]);
        let a = jl_algebra_objects(&p).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].multiplicities, vec![1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn invalid_tuples_are_rejected_with_the_offending_pair() {
        let g = z2xz2();
        let bad = params(&g, 3, &[&[0], &[0, 1]]);
        assert!(matches!(jl_validate(&bad), Err(JlError::BadOrbitCount { m: 2, p: 3 })));
        let bad = params(&g, 3, &[&[0]]);
        match jl_validate(&bad) {
            Err(JlError::ConditionViolated { i: 0, k, product: 1, order: 4 }) => {
                assert!(k >= 1);
            }
            other => panic!("expected a square-condition failure, got {other:?}"),
        }
    }

    #[test]
    fn ty_over_s3_has_two_classes() {
        let g = s3();
        let enumeration = jl_enumerate(&g, 2).unwrap();
        let mut shapes: Vec<(usize, Vec<usize>)> = enumeration
            .entries
            .iter()
            .map(|e| {
                let mut sizes: Vec<usize> =
                    e.params.subgroups.iter().map(Subgroup::len).collect();
                sizes.sort_unstable();
                (e.rep.dim(), sizes)
            })
            .collect();
        shapes.sort();
        assert_eq!(shapes, vec![(5, vec![2, 3]), (7, vec![1, 6])]);
        // conjugate order-2 subgroups collapse to a single class
        assert_eq!(enumeration.entries.len(), 2);
    }

    #[test]
    fn trivial_group_classes_count_divisors_of_p() {
        let g = FiniteGroup::trivial();
        for (p, want) in [(2usize, 2usize), (3, 2), (4, 3), (6, 4)] {
            let enumeration = jl_enumerate(&g, p).unwrap();
            assert_eq!(enumeration.entries.len(), want, "p = {p}");
            for e in &enumeration.entries {
                assert_eq!(e.rep.dim(), e.params.orbit_count());
            }
        }
    }
}
