//! NIM-rep construction and classification over the rings built by
//! `glm_ring`.
//!
//! A rep is a disjoint union of at most two coset spaces of the grading
//! group. The doubled subgroup cuts each coset space into blocks, the
//! group acts on the block index set through permutations sigma_g that
//! factor through the grading quotient, and a single extra permutation
//! tau0 (squaring to sigma_delta, commuting with every sigma_g, and
//! swapping the two coset spaces when there are two) determines how the
//! non-invertible basis elements act: X_g moves blocks by tau0*sigma_g and
//! fills each moved block with one fixed coefficient.
//!
//! Classification comes in two strengths, selected by `Relabeling`. The
//! block labels carry an arbitrary base-point choice per coset space;
//! `OrbitSwapOnly` compares tau0 literally after at most exchanging the
//! two coset spaces, while `AllEquivariant` also conjugates by the block
//! permutations induced by independent per-space translations. The second
//! reading coincides with matrix-level isomorphism; the first is strictly
//! finer on some two-space families. Catalogs keep one entry per
//! `OrbitSwapOnly` class and tag each with its matrix-level class id.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{
    coset_space, enumerate_subgroups, exact_sqrt, quotient, CosetSpace, FiniteGroup, GroupError,
    Subgroup,
};
use crate::matrix::IntMatrix;
use crate::nimrep::{are_isomorphic, nimrep_with_labels, AlgebraObject, NimRep, NimRepError};
use crate::perm::Perm;
use crate::ring::{glm_ring, glm_ring_with_options, FusionRing, RingError, RingKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlmError {
    #[error("parameter check failed: {clause}")]
    ConditionViolated { clause: String },
    #[error("ring was built from different data than these parameters")]
    RingMismatch,
    #[error("element {element} is out of range for a group of order {order}")]
    BadElement { element: usize, order: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    NimRep(#[from] NimRepError),
}

fn violated(clause: impl Into<String>) -> GlmError {
    GlmError::ConditionViolated { clause: clause.into() }
}

/// Which block relabelings `glm_same_class` may use when comparing tau0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabeling {
    /// Only the exchange of the two coset spaces (when their subgroups
    /// are equal). Reproduces the counts of the classification theorems.
    OrbitSwapOnly,
    /// Any block permutation induced by a module self-equivalence:
    /// independent translations per coset space, optionally composed with
    /// the exchange. Matches matrix-level isomorphism.
    AllEquivariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlmParams {
    pub gamma: FiniteGroup,
    pub delta: usize,
    /// One or two subgroups, in module orbit order.
    pub subgroups: Vec<Subgroup>,
    /// Permutation of the global block index set.
    pub tau0: Perm,
}

impl GlmParams {
    pub fn orbit_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn dim(&self) -> usize {
        self.subgroups.iter().map(|h| self.gamma.order() / h.len()).sum()
    }
}

/// The block decomposition of the module and the induced permutations.
#[derive(Clone, Debug)]
pub struct SigmaAction {
    /// Global block index -> sorted module point indices.
    pub blocks: Vec<Vec<usize>>,
    /// Global block index -> coset-space index (0 or 1).
    pub gamma_orbit_of: Vec<usize>,
    /// Module point -> global block index.
    pub point_block: Vec<usize>,
    /// Per coset space, the half-open range of its global block indices.
    pub orbit_block_range: Vec<(usize, usize)>,
    /// Per coset space, the first module point index; one extra final
    /// entry holding the total dimension.
    pub point_offset: Vec<usize>,
    /// One permutation of the global block set per quotient element.
    pub sigma: Vec<Perm>,
    pub sigma_delta: Perm,
    pub delta_bar: usize,
    pub quotient: FiniteGroup,
    pub projection: Vec<usize>,
    pub two_gamma: Subgroup,
    pub spaces: Vec<CosetSpace>,
}

/// Refuses odd-order groups; the degenerate doubling is reachable through
/// `glm_enumerate_with_options` for experiments.
pub fn sigma_action(
    gamma: &FiniteGroup,
    delta: usize,
    subgroups: &[Subgroup],
) -> Result<SigmaAction, GlmError> {
    if gamma.order() % 2 != 0 {
        return Err(GlmError::Ring(RingError::OddOrder { order: gamma.order() }));
    }
    sigma_action_any(gamma, delta, subgroups)
}

fn sigma_action_any(
    gamma: &FiniteGroup,
    delta: usize,
    subgroups: &[Subgroup],
) -> Result<SigmaAction, GlmError> {
    if !gamma.is_abelian() {
        return Err(GlmError::Group(GroupError::NotAbelian));
    }
    if delta >= gamma.order() {
        return Err(GlmError::BadElement { element: delta, order: gamma.order() });
    }
    if subgroups.is_empty() || subgroups.len() > 2 {
        return Err(violated(format!(
            "orbit_count: got {} coset spaces, need 1 or 2",
            subgroups.len()
        )));
    }
    let two_gamma = gamma.doubled_subgroup()?;
    let (quot, projection) = quotient(gamma, &two_gamma)?;
    let spaces: Vec<CosetSpace> = subgroups
        .iter()
        .map(|h| coset_space(gamma, h))
        .collect::<Result<Vec<_>, _>>()?;

    let mut point_offset = vec![0usize];
    for cs in &spaces {
        point_offset.push(point_offset.last().unwrap() + cs.cosets.len());
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut gamma_orbit_of: Vec<usize> = Vec::new();
    let mut orbit_block_range: Vec<(usize, usize)> = Vec::new();
    let total = *point_offset.last().unwrap();
    let mut point_block = vec![usize::MAX; total];
    for (i, cs) in spaces.iter().enumerate() {
        let start = blocks.len();
        let n = cs.cosets.len();
        let mut seen = vec![false; n];
        // local cosets are numbered by least representative, so scanning in
        // order yields blocks sorted by least member
        for c in 0..n {
            if seen[c] {
                continue;
            }
            let mut members = vec![c];
            seen[c] = true;
            let mut frontier = vec![c];
            while let Some(x) = frontier.pop() {
                for &s in two_gamma.members() {
                    let y = cs.action[s].apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
            members.sort_unstable();
            let global: Vec<usize> = members.iter().map(|&m| point_offset[i] + m).collect();
            let idx = blocks.len();
            for &pt in &global {
                point_block[pt] = idx;
            }
            blocks.push(global);
            gamma_orbit_of.push(i);
        }
        orbit_block_range.push((start, blocks.len()));
    }

    let mut reps = vec![usize::MAX; quot.order()];
    for g in 0..gamma.order() {
        let q = projection[g];
        if reps[q] == usize::MAX {
            reps[q] = g;
        }
    }
    let sigma: Vec<Perm> = (0..quot.order())
        .map(|q| {
            let g = reps[q];
            let map: Vec<usize> = (0..blocks.len())
                .map(|b| {
                    let pt = blocks[b][0];
                    let i = gamma_orbit_of[b];
                    let local = pt - point_offset[i];
                    point_block[point_offset[i] + spaces[i].action[g].apply(local)]
                })
                .collect();
            Perm::from_map(map).expect("translations permute blocks")
        })
        .collect();
    let delta_bar = projection[delta];
    let sigma_delta = sigma[delta_bar].clone();
    Ok(SigmaAction {
        blocks,
        gamma_orbit_of,
        point_block,
        orbit_block_range,
        point_offset,
        sigma,
        sigma_delta,
        delta_bar,
        quotient: quot,
        projection,
        two_gamma,
        spaces,
    })
}

/// All permutations tau of the block set with tau^2 = sigma_delta that
/// commute with every sigma, optionally required to exchange the two given
/// index sets. Deterministic lexicographic order.
pub fn enumerate_tau0(
    sigma: &SigmaAction,
    split: Option<(&[usize], &[usize])>,
) -> Vec<Perm> {
    let n = sigma.blocks.len();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    tau_search(sigma, split, &mut assign, &mut used, &mut found);
    found
        .into_iter()
        .map(|map| Perm::from_map(map).expect("search produces permutations"))
        .collect()
}

fn tau_candidate_ok(split: Option<(&[usize], &[usize])>, x: usize, y: usize) -> bool {
    match split {
        None => true,
        Some((i, j)) => {
            if i.contains(&x) {
                j.contains(&y)
            } else {
                i.contains(&y)
            }
        }
    }
}

fn tau_search(
    sigma: &SigmaAction,
    split: Option<(&[usize], &[usize])>,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let n = assign.len();
    let next = match (0..n).find(|&x| assign[x].is_none()) {
        Some(x) => x,
        None => {
            let map: Vec<usize> = assign.iter().map(|a| a.unwrap()).collect();
            if let Some(tau) = Perm::from_map(map.clone()) {
                if tau_valid(sigma, split, &tau) {
                    found.insert(map);
                }
            }
            return;
        }
    };
    for y in 0..n {
        if used[y] || !tau_candidate_ok(split, next, y) {
            continue;
        }
        let mut a2 = assign.clone();
        let mut u2 = used.clone();
        if tau_propagate(sigma, split, next, y, &mut a2, &mut u2) {
            tau_search(sigma, split, &mut a2, &mut u2, found);
        }
    }
}

/// Forces the consequences of tau(x) = y: commutation transports the
/// assignment along every sigma, and the square condition pins tau(y).
fn tau_propagate(
    sigma: &SigmaAction,
    split: Option<(&[usize], &[usize])>,
    x: usize,
    y: usize,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((a, b)) = queue.pop() {
        if let Some(v) = assign[a] {
            if v != b {
                return false;
            }
            continue;
        }
        if used[b] || !tau_candidate_ok(split, a, b) {
            return false;
        }
        assign[a] = Some(b);
        used[b] = true;
        for s in &sigma.sigma {
            queue.push((s.apply(a), s.apply(b)));
        }
        queue.push((b, sigma.sigma_delta.apply(a)));
    }
    true
}

fn tau_valid(sigma: &SigmaAction, split: Option<(&[usize], &[usize])>, tau: &Perm) -> bool {
    if tau.compose(tau) != sigma.sigma_delta {
        return false;
    }
    if sigma.sigma.iter().any(|s| !tau.commutes_with(s)) {
        return false;
    }
    if let Some((i, j)) = split {
        if i.iter().any(|&x| !j.contains(&tau.apply(x))) {
            return false;
        }
    }
    true
}

fn one_orbit_coefficient(two_len: usize, meet: usize) -> Result<u64, GlmError> {
    let sq = (meet * meet) as u64;
    if sq % two_len as u64 != 0 {
        return Err(violated(format!(
            "one_orbit_divisibility: |H meet 2G| = {meet} with |2G| = {two_len}"
        )));
    }
    exact_sqrt(sq / two_len as u64).map_err(|_| {
        violated(format!("one_orbit_divisibility: |H meet 2G| = {meet} with |2G| = {two_len}"))
    })
}

fn pair_coefficient(two_len: usize, meet1: usize, meet2: usize) -> Result<u64, GlmError> {
    let prod = (meet1 * meet2) as u64;
    if prod % two_len as u64 != 0 {
        return Err(violated(format!(
            "pair_square: |H1 meet 2G| * |H2 meet 2G| = {prod} with |2G| = {two_len}"
        )));
    }
    exact_sqrt(prod / two_len as u64).map_err(|_| {
        violated(format!(
            "pair_square: |H1 meet 2G| * |H2 meet 2G| = {prod} with |2G| = {two_len}"
        ))
    })
}

/// Does delta lie in the image of H in the grading quotient?
fn delta_in_bar(gamma: &FiniteGroup, two: &Subgroup, delta: usize, h: &Subgroup) -> bool {
    h.members().iter().any(|&m| two.contains(gamma.mul(delta, gamma.inv(m))))
}

fn quotient_two_torsion(gamma: &FiniteGroup, h: &Subgroup) -> Result<usize, GlmError> {
    let (q, _) = quotient(gamma, h)?;
    Ok(q.two_torsion_count()?)
}

fn pair_conditions(
    gamma: &FiniteGroup,
    two: &Subgroup,
    delta: usize,
    h1: &Subgroup,
    h2: &Subgroup,
) -> Result<u64, GlmError> {
    let in1 = delta_in_bar(gamma, two, delta, h1);
    let in2 = delta_in_bar(gamma, two, delta, h2);
    if in1 != in2 {
        return Err(violated(format!(
            "delta_membership: delta lies in the image of exactly one subgroup ({in1}, {in2})"
        )));
    }
    let t1 = quotient_two_torsion(gamma, h1)?;
    let t2 = quotient_two_torsion(gamma, h2)?;
    if t1 != t2 {
        return Err(violated(format!(
            "quotient_two_torsion: sizes {t1} and {t2} differ"
        )));
    }
    pair_coefficient(two.len(), h1.intersect(two).len(), h2.intersect(two).len())
}

/// Full parameter check; returns the block machinery for reuse.
pub fn glm_validate(params: &GlmParams) -> Result<SigmaAction, GlmError> {
    let sig = sigma_action_any(&params.gamma, params.delta, &params.subgroups)?;
    let two_len = sig.two_gamma.len();
    match params.subgroups.len() {
        1 => {
            let meet = params.subgroups[0].intersect(&sig.two_gamma).len();
            one_orbit_coefficient(two_len, meet)?;
        }
        2 => {
            pair_conditions(
                &params.gamma,
                &sig.two_gamma,
                params.delta,
                &params.subgroups[0],
                &params.subgroups[1],
            )?;
        }
        _ => unreachable!("sigma_action_any checks the orbit count"),
    }
    if params.tau0.len() != sig.blocks.len() {
        return Err(violated(format!(
            "tau0_domain: permutation of {} points over {} blocks",
            params.tau0.len(),
            sig.blocks.len()
        )));
    }
    if params.tau0.compose(&params.tau0) != sig.sigma_delta {
        return Err(violated("tau0_square: tau0^2 differs from sigma_delta".to_string()));
    }
    if sig.sigma.iter().any(|s| !params.tau0.commutes_with(s)) {
        return Err(violated("tau0_commutes: tau0 does not commute with every sigma".to_string()));
    }
    if params.subgroups.len() == 2 {
        let (start, end) = sig.orbit_block_range[0];
        for b in start..end {
            if sig.gamma_orbit_of[params.tau0.apply(b)] != 1 {
                return Err(violated(
                    "tau0_orbit_swap: tau0 must exchange the two coset spaces".to_string(),
                ));
            }
        }
    }
    Ok(sig)
}

/// The block entry of X out of coset space `from` into coset space `to`.
fn coefficient(params: &GlmParams, sig: &SigmaAction, from: usize, to: usize) -> Result<u64, GlmError> {
    let two_len = sig.two_gamma.len();
    let meet = |i: usize| params.subgroups[i].intersect(&sig.two_gamma).len();
    if params.subgroups.len() == 1 {
        one_orbit_coefficient(two_len, meet(0))
    } else {
        debug_assert_ne!(from, to, "X never stays inside one of two coset spaces");
        pair_coefficient(two_len, meet(from), meet(to))
    }
}

pub fn glm_build_with_ring(params: &GlmParams, ring: Arc<FusionRing>) -> Result<NimRep, GlmError> {
    let sig = glm_validate(params)?;
    match ring.ring_kind() {
        RingKind::Glm(data)
            if data.gamma == params.gamma && data.delta_bar == sig.delta_bar => {}
        _ => return Err(GlmError::RingMismatch),
    }
    let gamma = &params.gamma;
    let dim = *sig.point_offset.last().unwrap();
    let mut labels = Vec::with_capacity(dim);
    for (i, cs) in sig.spaces.iter().enumerate() {
        for coset in &cs.cosets {
            labels.push(format!("o{i}:{}H", gamma.element_label(coset[0])));
        }
    }
    let mut matrices = Vec::with_capacity(ring.basis_len());
    for g in 0..gamma.order() {
        let mut mat = IntMatrix::zero(dim);
        for (i, cs) in sig.spaces.iter().enumerate() {
            let perm = &cs.action[g];
            for c in 0..perm.len() {
                mat.set(sig.point_offset[i] + perm.apply(c), sig.point_offset[i] + c, 1);
            }
        }
        matrices.push(mat);
    }
    for q in 0..sig.quotient.order() {
        let mut mat = IntMatrix::zero(dim);
        for b in 0..sig.blocks.len() {
            let t = params.tau0.apply(sig.sigma[q].apply(b));
            let c = coefficient(params, &sig, sig.gamma_orbit_of[b], sig.gamma_orbit_of[t])?;
            for &col in &sig.blocks[b] {
                for &row in &sig.blocks[t] {
                    mat.set(row, col, c);
                }
            }
        }
        matrices.push(mat);
    }
    Ok(nimrep_with_labels(ring, matrices, labels)?)
}

pub fn glm_build(params: &GlmParams) -> Result<NimRep, GlmError> {
    let ring = Arc::new(glm_ring(&params.gamma, params.delta)?);
    glm_build_with_ring(params, ring)
}

/// Numeric identities tying the block coefficients to the subgroup sizes:
/// c^2 * |2G : H_target meet 2G| = |H_source meet 2G| on every block edge,
/// and the block permutation of X's dual inverts the block permutation of
/// X, so back-and-forth paths return home.
pub fn glm_coefficient_identities(params: &GlmParams) -> Result<(), GlmError> {
    let sig = glm_validate(params)?;
    let two_len = sig.two_gamma.len();
    let meet = |i: usize| params.subgroups[i].intersect(&sig.two_gamma).len();
    for q in 0..sig.quotient.order() {
        let move_q = params.tau0.compose(&sig.sigma[q]);
        for b in 0..sig.blocks.len() {
            let t = move_q.apply(b);
            let c = coefficient(params, &sig, sig.gamma_orbit_of[b], sig.gamma_orbit_of[t])?;
            let lhs = c * c * (two_len / meet(sig.gamma_orbit_of[t])) as u64;
            if lhs != meet(sig.gamma_orbit_of[b]) as u64 {
                return Err(violated(format!(
                    "coefficient_identity: c^2 * index = {lhs} but |H meet 2G| = {}",
                    meet(sig.gamma_orbit_of[b])
                )));
            }
        }
        let qdual = sig.quotient.inv(sig.quotient.mul(sig.delta_bar, q));
        let move_dual = params.tau0.compose(&sig.sigma[qdual]);
        if !move_dual.compose(&move_q).is_identity() {
            return Err(violated(
                "dual_path: the dual's block move does not invert the block move".to_string(),
            ));
        }
    }
    Ok(())
}

/// Closed-form algebra objects, one per coset space: the subgroup's
/// elements plus, with one coset space only, the coefficient on every X_g
/// whose block move has a fixed block.
pub fn glm_algebra_objects(params: &GlmParams) -> Result<Vec<AlgebraObject>, GlmError> {
    let sig = glm_validate(params)?;
    let basis_len = params.gamma.order() + sig.quotient.order();
    let mut out = Vec::with_capacity(params.subgroups.len());
    for (i, h) in params.subgroups.iter().enumerate() {
        let mut mult = vec![0u64; basis_len];
        for &member in h.members() {
            mult[member] = 1;
        }
        if params.subgroups.len() == 1 {
            let c = coefficient(params, &sig, 0, 0)?;
            for q in 0..sig.quotient.order() {
                let move_q = params.tau0.compose(&sig.sigma[q]);
                let (start, end) = sig.orbit_block_range[i];
                let fixed = (start..end).filter(|&b| move_q.apply(b) == b).count();
                // a block move fixing one block of a coset space fixes all
                debug_assert!(fixed == 0 || fixed == end - start);
                if fixed > 0 {
                    mult[params.gamma.order() + q] = c;
                }
            }
        }
        out.push(AlgebraObject { multiplicities: mult });
    }
    Ok(out)
}

/// The global block permutation that exchanges the two coset spaces by
/// matching their canonical block numbering; only meaningful when both
/// spaces come from the same subgroup.
fn swap_perm(sig: &SigmaAction) -> Option<Perm> {
    if sig.orbit_block_range.len() != 2 {
        return None;
    }
    let (s0, e0) = sig.orbit_block_range[0];
    let (s1, e1) = sig.orbit_block_range[1];
    if e0 - s0 != e1 - s1 {
        return None;
    }
    let n = e0 - s0;
    let map: Vec<usize> = (0..sig.blocks.len())
        .map(|b| if b < e0 { s1 + (b - s0) } else { s0 + (b - s1) })
        .collect();
    debug_assert_eq!(sig.blocks.len(), 2 * n);
    Perm::from_map(map)
}

/// Block relabelings admitted by the reading, as permutations of the
/// global block set of `sig`.
fn relabelings(sig: &SigmaAction, subgroups: &[Subgroup], reading: Relabeling) -> Vec<Perm> {
    let n = sig.blocks.len();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let swap = if subgroups.len() == 2 && subgroups[0] == subgroups[1] {
        swap_perm(sig)
    } else {
        None
    };
    let push_with_swap = |p: Perm, out: &mut BTreeSet<Vec<usize>>| {
        if let Some(s) = &swap {
            out.insert(s.compose(&p).as_slice().to_vec());
        }
        out.insert(p.as_slice().to_vec());
    };
    match reading {
        Relabeling::OrbitSwapOnly => {
            push_with_swap(Perm::identity(n), &mut out);
        }
        Relabeling::AllEquivariant => {
            let ranges = &sig.orbit_block_range;
            let q_count = sig.quotient.order();
            if ranges.len() == 1 {
                for q in 0..q_count {
                    push_with_swap(sig.sigma[q].clone(), &mut out);
                }
            } else {
                for q in 0..q_count {
                    for r in 0..q_count {
                        let map: Vec<usize> = (0..n)
                            .map(|b| {
                                if sig.gamma_orbit_of[b] == 0 {
                                    sig.sigma[q].apply(b)
                                } else {
                                    sig.sigma[r].apply(b)
                                }
                            })
                            .collect();
                        push_with_swap(
                            Perm::from_map(map).expect("sigmas preserve coset spaces"),
                            &mut out,
                        );
                    }
                }
            }
        }
    }
    out.into_iter().map(|m| Perm::from_map(m).unwrap()).collect()
}

pub fn glm_same_class(a: &GlmParams, b: &GlmParams) -> bool {
    glm_same_class_with(a, b, Relabeling::OrbitSwapOnly)
}

pub fn glm_same_class_with(a: &GlmParams, b: &GlmParams, reading: Relabeling) -> bool {
    if a.gamma != b.gamma || a.subgroups.len() != b.subgroups.len() {
        return false;
    }
    let two = match a.gamma.doubled_subgroup() {
        Ok(t) => t,
        Err(_) => return false,
    };
    if !two.contains(a.gamma.mul(a.delta, a.gamma.inv(b.delta))) {
        return false;
    }
    let sig_a = match sigma_action_any(&a.gamma, a.delta, &a.subgroups) {
        Ok(s) => s,
        Err(_) => return false,
    };
    if a.tau0.len() != sig_a.blocks.len() || b.tau0.len() != sig_a.blocks.len() {
        return false;
    }
    let mut pairings: Vec<Vec<usize>> = Vec::new();
    match a.subgroups.len() {
        1 => {
            if a.subgroups[0] == b.subgroups[0] {
                pairings.push(vec![0]);
            }
        }
        2 => {
            if a.subgroups[0] == b.subgroups[0] && a.subgroups[1] == b.subgroups[1] {
                pairings.push(vec![0, 1]);
            }
            if a.subgroups[0] == b.subgroups[1] && a.subgroups[1] == b.subgroups[0] {
                pairings.push(vec![1, 0]);
            }
        }
        _ => {}
    }
    let phis = relabelings(&sig_a, &a.subgroups, reading);
    for pairing in pairings {
        // express b's tau0 in a's labeling: reordering the coset spaces
        // permutes the global block indices en bloc
        let tau_b = if pairing == [1, 0] {
            match swap_perm(&sig_a) {
                Some(s) => s.compose(&b.tau0).compose(&s.inverse()),
                None => continue,
            }
        } else {
            b.tau0.clone()
        };
        for phi in &phis {
            if phi.compose(&a.tau0).compose(&phi.inverse()) == tau_b {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct GlmEntry {
    pub params: GlmParams,
    pub rep: NimRep,
    /// Classification-theorem class id, contiguous from 0 in catalog order.
    pub class_id: usize,
    /// Matrix-level class id, shared between entries the matrices identify.
    pub iso_class_id: usize,
}

#[derive(Clone, Debug)]
pub struct GlmEnumeration {
    pub ring: Arc<FusionRing>,
    pub entries: Vec<GlmEntry>,
    pub iso_class_count: usize,
    /// Matrix-level classes containing more than one entry, as
    /// (iso_class_id, class_ids).
    pub collapsed_iso_classes: Vec<(usize, Vec<usize>)>,
}

pub fn glm_enumerate(gamma: &FiniteGroup, delta: usize) -> Result<GlmEnumeration, GlmError> {
    glm_enumerate_with_options(gamma, delta, false)
}

pub fn glm_enumerate_with_options(
    gamma: &FiniteGroup,
    delta: usize,
    allow_odd: bool,
) -> Result<GlmEnumeration, GlmError> {
    let ring = Arc::new(glm_ring_with_options(gamma, delta, allow_odd)?);
    let two = gamma.doubled_subgroup()?;
    let subs = enumerate_subgroups(gamma);
    let mut candidates: Vec<GlmParams> = Vec::new();

    for h in &subs {
        if one_orbit_coefficient(two.len(), h.intersect(&two).len()).is_err() {
            continue;
        }
        let sig = sigma_action_any(gamma, delta, std::slice::from_ref(h))?;
        for tau0 in enumerate_tau0(&sig, None) {
            candidates.push(GlmParams {
                gamma: gamma.clone(),
                delta,
                subgroups: vec![h.clone()],
                tau0,
            });
        }
    }

    for i in 0..subs.len() {
        for j in i..subs.len() {
            if pair_conditions(gamma, &two, delta, &subs[i], &subs[j]).is_err() {
                continue;
            }
            let pair = vec![subs[i].clone(), subs[j].clone()];
            let sig = sigma_action_any(gamma, delta, &pair)?;
            let (s0, e0) = sig.orbit_block_range[0];
            let (s1, e1) = sig.orbit_block_range[1];
            let iset: Vec<usize> = (s0..e0).collect();
            let jset: Vec<usize> = (s1..e1).collect();
            let mut taus = enumerate_tau0(&sig, Some((&iset, &jset)));
            if subs[i] == subs[j] {
                // exchanging the two identical coset spaces identifies
                // tau with its swap conjugate; keep the lexicographic least
                if let Some(s) = swap_perm(&sig) {
                    taus.retain(|t| {
                        let conj = s.compose(t).compose(&s.inverse());
                        t.as_slice() <= conj.as_slice()
                    });
                }
            }
            for tau0 in taus {
                candidates.push(GlmParams {
                    gamma: gamma.clone(),
                    delta,
                    subgroups: pair.clone(),
                    tau0,
                });
            }
        }
    }

    let built: Vec<NimRep> = candidates
        .par_iter()
        .map(|p| glm_build_with_ring(p, ring.clone()))
        .collect::<Result<Vec<_>, GlmError>>()?;

    let mut entries: Vec<GlmEntry> = candidates
        .into_iter()
        .zip(built)
        .enumerate()
        .map(|(class_id, (params, rep))| GlmEntry { params, rep, class_id, iso_class_id: 0 })
        .collect();

    // matrix-level grouping, by direct isomorphism search
    let n = entries.len();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        let mut c = x;
        while root[c] != c {
            let next = root[c];
            root[c] = r;
            c = next;
        }
        r
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if entries[a].rep.dim() != entries[b].rep.dim() {
                continue;
            }
            if find(&mut root, a) == find(&mut root, b) {
                continue;
            }
            if are_isomorphic(&entries[a].rep, &entries[b].rep).is_some() {
                let (ra, rb) = (find(&mut root, a), find(&mut root, b));
                root[rb.max(ra)] = rb.min(ra);
            }
        }
    }
    let mut iso_ids: Vec<Option<usize>> = vec![None; n];
    let mut iso_class_count = 0;
    for e in 0..n {
        let r = find(&mut root, e);
        let id = *iso_ids[r].get_or_insert_with(|| {
            let id = iso_class_count;
            iso_class_count += 1;
            id
        });
        entries[e].iso_class_id = id;
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); iso_class_count];
    for e in &entries {
        members[e.iso_class_id].push(e.class_id);
    }
    let collapsed_iso_classes: Vec<(usize, Vec<usize>)> = members
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.len() > 1)
        .collect();

    Ok(GlmEnumeration { ring, entries, iso_class_count, collapsed_iso_classes })
}
