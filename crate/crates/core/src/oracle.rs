//! Brute-force enumeration of every NIM-rep of a fusion ring up to a
//! dimension bound, independent of the closed-form classifiers.
//!
//! Strategy: actions of the invertible group on d points are exactly
//! multisets of coset spaces, i.e. multisets of subgroups up to conjugacy
//! with index sum d. For each action the non-invertible matrices are
//! unknown non-negative integers; transposition (rigidity) and one-sided
//! invertible absorption merge the unknowns into equivalence classes, and
//! a depth-first search assigns each class a value, pruning with the exact
//! row identity sum_c M_Y[r][c]^2 = (Y Y*)-diagonal and checking every
//! product equation as soon as its operands are complete. Survivors are
//! validated, optionally filtered to irreducibles, sorted, and
//! deduplicated by matrix-level isomorphism.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{
    conjugacy_classes_of_subgroups, coset_space, enumerate_subgroups, FiniteGroup, GroupError,
};
use crate::matrix::IntMatrix;
use crate::nimrep::{are_isomorphic, nimrep_from_matrices, NimRep, NimRepError};
use crate::perm::Perm;
use crate::ring::{FusionRing, RingError, RingKind};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("entry bound {got} is below the derived requirement {needed}")]
    EntryBoundTooSmall { needed: u64, got: u64 },
    #[error("invertible element at basis index {index} does not permute the basis")]
    NotAPermutation { index: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    NimRep(#[from] NimRepError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOrder {
    Forward,
    Reverse,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_dim: usize,
    /// Cap on matrix entries; derived from the ring when absent. Supplying
    /// a cap below the derived requirement is an error, not a silent
    /// incomplete search.
    pub entry_bound: Option<u64>,
    pub require_irreducible: bool,
    pub time_budget: Option<Duration>,
    /// Use structural shortcuts for recognized ring families (each X
    /// column supported on a single block). Off = fully independent.
    pub use_hints: bool,
    pub order: SearchOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_dim: 4,
            entry_bound: None,
            require_irreducible: true,
            time_budget: None,
            use_hints: false,
            order: SearchOrder::Forward,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub reps: Vec<NimRep>,
    /// False when the time budget cut the search short; the list is then a
    /// lower bound, not a classification.
    pub complete: bool,
    pub note: Option<String>,
}

/// Largest integer b with b^2 <= inv + noninv * b.
fn quadratic_bound(inv_mass: u64, noninv_mass: u64) -> u64 {
    let mut b = 0u64;
    while (b + 1) * (b + 1) <= inv_mass + noninv_mass * (b + 1) {
        b += 1;
    }
    b
}

struct RingTables {
    group: FiniteGroup,
    /// Group element per basis index (usize::MAX on non-invertibles).
    element_of: Vec<usize>,
    noninv: Vec<usize>,
    /// Position in `noninv` per basis index.
    pos_of: Vec<usize>,
    /// left[g][ypos] = position of the product g*y.
    left: Vec<Vec<usize>>,
    /// right[g][ypos] = position of the product y*g.
    right: Vec<Vec<usize>>,
    /// Dual position per position.
    dual_pos: Vec<usize>,
    entry_bound: u64,
}

fn ring_tables(ring: &FusionRing, cfg: &SearchConfig) -> Result<RingTables, OracleError> {
    let (group, basis_of) = ring.invertible_group()?;
    let b = ring.basis_len();
    let mut element_of = vec![usize::MAX; b];
    for (g, &idx) in basis_of.iter().enumerate() {
        element_of[idx] = g;
    }
    let noninv: Vec<usize> = ring.noninvertibles();
    let mut pos_of = vec![usize::MAX; b];
    for (p, &y) in noninv.iter().enumerate() {
        pos_of[y] = p;
    }
    let single_target = |row: &[u64], from: usize| -> Result<usize, OracleError> {
        let mut hit = None;
        for (k, &v) in row.iter().enumerate() {
            if v == 1 && hit.is_none() {
                hit = Some(k);
            } else if v != 0 {
                return Err(OracleError::NotAPermutation { index: from });
            }
        }
        hit.ok_or(OracleError::NotAPermutation { index: from })
    };
    let mut left = vec![vec![0usize; noninv.len()]; group.order()];
    let mut right = vec![vec![0usize; noninv.len()]; group.order()];
    for g in 0..group.order() {
        let gb = basis_of[g];
        for (p, &y) in noninv.iter().enumerate() {
            let gy = single_target(ring.product_row(gb, y), gb)?;
            let yg = single_target(ring.product_row(y, gb), gb)?;
            if ring.is_invertible(gy) || ring.is_invertible(yg) {
                return Err(OracleError::NotAPermutation { index: gb });
            }
            left[g][p] = pos_of[gy];
            right[g][p] = pos_of[yg];
        }
    }
    let dual_pos: Vec<usize> = noninv.iter().map(|&y| pos_of[ring.dual(y)]).collect();

    let mut needed = 0u64;
    for &y in &noninv {
        let row = ring.product_row(y, ring.dual(y));
        let mut inv_mass = 0u64;
        let mut noninv_mass = 0u64;
        for (k, &v) in row.iter().enumerate() {
            if ring.is_invertible(k) {
                inv_mass += v;
            } else {
                noninv_mass += v;
            }
        }
        needed = needed.max(quadratic_bound(inv_mass, noninv_mass));
    }
    let entry_bound = match cfg.entry_bound {
        Some(b) if b < needed => {
            return Err(OracleError::EntryBoundTooSmall { needed, got: b })
        }
        _ => needed,
    };
    Ok(RingTables { group, element_of, noninv, pos_of, left, right, dual_pos, entry_bound })
}

/// Multisets of subgroup-class representatives with index sum <= max_dim,
/// as (dim, nondecreasing class-representative list).
fn action_shapes(group: &FiniteGroup, max_dim: usize) -> Vec<(usize, Vec<usize>)> {
    let subs = enumerate_subgroups(group);
    let classes = conjugacy_classes_of_subgroups(group, &subs);
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let indices: Vec<usize> =
        reps.iter().map(|&r| group.order() / subs[r].members().len()).collect();
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn recurse(
        reps: &[usize],
        indices: &[usize],
        start: usize,
        budget: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<(usize, Vec<usize>)>,
    ) {
        for c in start..reps.len() {
            if indices[c] > budget {
                continue;
            }
            current.push(c);
            let dim: usize = current.iter().map(|&k| indices[k]).sum();
            out.push((dim, current.iter().map(|&k| reps[k]).collect()));
            recurse(reps, indices, c, budget - indices[c], current, out);
            current.pop();
        }
    }
    recurse(&reps, &indices, 0, max_dim, &mut current, &mut out);
    out.sort();
    out
}

/// One fixed invertible action: permutation matrices plus lookup tables.
struct ActionData {
    dim: usize,
    /// Module permutation per group element.
    perms: Vec<Perm>,
    inv_perms: Vec<Perm>,
    /// Block id per module point for column-support hints, if enabled.
    cell_of: Option<Vec<usize>>,
}

fn build_action(
    tables: &RingTables,
    subgroup_ids: &[usize],
    subs: &[crate::group::Subgroup],
    hint_members: Option<&[usize]>,
) -> Result<ActionData, OracleError> {
    let group = &tables.group;
    let spaces: Vec<_> = subgroup_ids
        .iter()
        .map(|&s| coset_space(group, &subs[s]))
        .collect::<Result<Vec<_>, _>>()?;
    let mut offsets = vec![0usize];
    for cs in &spaces {
        offsets.push(offsets.last().unwrap() + cs.cosets.len());
    }
    let dim = *offsets.last().unwrap();
    let perms: Vec<Perm> = (0..group.order())
        .map(|g| {
            let mut m = vec![0usize; dim];
            for (i, cs) in spaces.iter().enumerate() {
                for c in 0..cs.cosets.len() {
                    m[offsets[i] + c] = offsets[i] + cs.action[g].apply(c);
                }
            }
            Perm::from_map(m).expect("group actions permute module points")
        })
        .collect();
    let inv_perms: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    let cell_of = hint_members.map(|members| {
        let mut cell = vec![usize::MAX; dim];
        let mut next = 0usize;
        for start in 0..dim {
            if cell[start] != usize::MAX {
                continue;
            }
            let mut frontier = vec![start];
            cell[start] = next;
            while let Some(x) = frontier.pop() {
                for &s in members {
                    let y = perms[s].apply(x);
                    if cell[y] == usize::MAX {
                        cell[y] = next;
                        frontier.push(y);
                    }
                }
            }
            next += 1;
        }
        cell
    });
    Ok(ActionData { dim, perms, inv_perms, cell_of })
}

/// Union-find with path halving.
struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Solver<'a> {
    tables: &'a RingTables,
    action: &'a ActionData,
    /// Slot -> class id; slots are (position, row, col) flattened.
    class_of: Vec<usize>,
    /// Per class: member slots, and (y, r) -> multiplicity row coverage.
    class_slots: Vec<Vec<usize>>,
    class_rows: Vec<Vec<(usize, u32)>>,
    class_cols: Vec<Vec<(usize, u32)>>,
    /// Known (invertible) part of the row identity per (pos, r).
    row_rhs_known: Vec<u64>,
    /// Unknown contributions to the row identity: (slot, coefficient).
    row_rhs_unknown: Vec<Vec<(usize, u64)>>,
    /// Product equation cells: (pos_i, pos_j, r, c, known rhs, unknown rhs terms).
    cells: Vec<EquationCell>,
    value: Vec<Option<u64>>,
    row_sq: Vec<u64>,
    row_open: Vec<u32>,
    col_open: Vec<u32>,
    cell_done: Vec<usize>,
    /// Column-support hint state: committed cell per (pos, col).
    col_cell: Vec<usize>,
    order: SearchOrder,
    use_hints: bool,
    solutions: Vec<Vec<IntMatrix>>,
    nodes: u64,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
    hit_budget: bool,
}

struct EquationCell {
    pi: usize,
    pj: usize,
    r: usize,
    c: usize,
    rhs_known: u64,
    rhs_unknown: Vec<(usize, u64)>,
}

const UNCOMMITTED: usize = usize::MAX;

impl<'a> Solver<'a> {
    fn slot(&self, pos: usize, r: usize, c: usize) -> usize {
        (pos * self.action.dim + r) * self.action.dim + c
    }

    fn new(
        ring: &'a FusionRing,
        tables: &'a RingTables,
        action: &'a ActionData,
        cfg: &SearchConfig,
        stop: &'a AtomicBool,
        deadline: Option<Instant>,
    ) -> Self {
        let d = action.dim;
        let ny = tables.noninv.len();
        let slot_count = ny * d * d;
        let mut dsu = Dsu::new(slot_count);
        let idx = |pos: usize, r: usize, c: usize| (pos * d + r) * d + c;
        for pos in 0..ny {
            let dp = tables.dual_pos[pos];
            for r in 0..d {
                for c in 0..d {
                    dsu.union(idx(pos, r, c), idx(dp, c, r));
                }
            }
        }
        for g in 0..tables.group.order() {
            for pos in 0..ny {
                let lp = tables.left[g][pos];
                let rp = tables.right[g][pos];
                for r in 0..d {
                    for c in 0..d {
                        // (g y)[r][c] = y[g^-1 r][c]; (y g)[r][c] = y[r][g c]
                        dsu.union(idx(lp, r, c), idx(pos, action.inv_perms[g].apply(r), c));
                        dsu.union(idx(rp, r, c), idx(pos, r, action.perms[g].apply(c)));
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; slot_count];
        let mut class_slots: Vec<Vec<usize>> = Vec::new();
        for s in 0..slot_count {
            let root = dsu.find(s);
            if class_of[root] == usize::MAX {
                class_of[root] = class_slots.len();
                class_slots.push(Vec::new());
            }
            class_of[s] = class_of[root];
            class_slots[class_of[root]].push(s);
        }
        let n_classes = class_slots.len();
        let mut class_rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n_classes];
        let mut class_cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n_classes];
        let mut row_open = vec![0u32; ny * d];
        let mut col_open = vec![0u32; ny * d];
        for (cid, slots) in class_slots.iter().enumerate() {
            for &s in slots {
                let pos = s / (d * d);
                let r = (s / d) % d;
                let c = s % d;
                let rk = pos * d + r;
                let ck = pos * d + c;
                row_open[rk] += 1;
                col_open[ck] += 1;
                match class_rows[cid].iter_mut().find(|(k, _)| *k == rk) {
                    Some((_, m)) => *m += 1,
                    None => class_rows[cid].push((rk, 1)),
                }
                match class_cols[cid].iter_mut().find(|(k, _)| *k == ck) {
                    Some((_, m)) => *m += 1,
                    None => class_cols[cid].push((ck, 1)),
                }
            }
        }

        let mut row_rhs_known = vec![0u64; ny * d];
        let mut row_rhs_unknown: Vec<Vec<(usize, u64)>> = vec![Vec::new(); ny * d];
        for pos in 0..ny {
            let y = tables.noninv[pos];
            let row = ring.product_row(y, ring.dual(y));
            for r in 0..d {
                let rk = pos * d + r;
                for (k, &v) in row.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    if ring.is_invertible(k) {
                        let g = tables.element_of[k];
                        if action.perms[g].apply(r) == r {
                            row_rhs_known[rk] += v;
                        }
                    } else {
                        row_rhs_unknown[rk].push((idx(tables.pos_of[k], r, r), v));
                    }
                }
            }
        }

        let mut cells = Vec::new();
        for pi in 0..ny {
            for pj in 0..ny {
                let yi = tables.noninv[pi];
                let yj = tables.noninv[pj];
                let row = ring.product_row(yi, yj);
                for r in 0..d {
                    for c in 0..d {
                        let mut rhs_known = 0u64;
                        let mut rhs_unknown = Vec::new();
                        for (k, &v) in row.iter().enumerate() {
                            if v == 0 {
                                continue;
                            }
                            if ring.is_invertible(k) {
                                let g = tables.element_of[k];
                                if action.perms[g].apply(c) == r {
                                    rhs_known += v;
                                }
                            } else {
                                rhs_unknown.push((idx(tables.pos_of[k], r, c), v));
                            }
                        }
                        cells.push(EquationCell { pi, pj, r, c, rhs_known, rhs_unknown });
                    }
                }
            }
        }

        Solver {
            tables,
            action,
            class_of,
            class_slots,
            class_rows,
            class_cols,
            row_rhs_known,
            row_rhs_unknown,
            cells,
            value: vec![None; n_classes],
            row_sq: vec![0; ny * d],
            row_open,
            col_open,
            cell_done: Vec::new(),
            col_cell: vec![UNCOMMITTED; ny * d],
            order: cfg.order,
            use_hints: cfg.use_hints && action.cell_of.is_some(),
            solutions: Vec::new(),
            nodes: 0,
            deadline,
            stop,
            hit_budget: false,
        }
    }

    fn slot_value(&self, s: usize) -> Option<u64> {
        self.value[self.class_of[s]]
    }

    /// Upper estimate of the row identity's right side: unassigned
    /// non-invertible diagonal terms count at the global entry bound.
    fn row_rhs_upper(&self, rk: usize) -> u64 {
        let mut total = self.row_rhs_known[rk];
        for &(s, coeff) in &self.row_rhs_unknown[rk] {
            total += coeff * self.slot_value(s).unwrap_or(self.tables.entry_bound);
        }
        total
    }

    fn row_rhs_exact(&self, rk: usize) -> Option<u64> {
        let mut total = self.row_rhs_known[rk];
        for &(s, coeff) in &self.row_rhs_unknown[rk] {
            total += coeff * self.slot_value(s)?;
        }
        Some(total)
    }

    fn cell_ready(&self, cell: &EquationCell) -> bool {
        let d = self.action.dim;
        if self.row_open[cell.pi * d + cell.r] != 0 || self.col_open[cell.pj * d + cell.c] != 0 {
            return false;
        }
        cell.rhs_unknown.iter().all(|&(s, _)| self.slot_value(s).is_some())
    }

    fn cell_holds(&self, cell: &EquationCell) -> bool {
        let d = self.action.dim;
        let mut lhs = 0u64;
        for k in 0..d {
            let a = self.slot_value(self.slot(cell.pi, cell.r, k)).unwrap();
            if a == 0 {
                continue;
            }
            let b = self.slot_value(self.slot(cell.pj, k, cell.c)).unwrap();
            lhs += a * b;
        }
        let mut rhs = cell.rhs_known;
        for &(s, coeff) in &cell.rhs_unknown {
            rhs += coeff * self.slot_value(s).unwrap();
        }
        lhs == rhs
    }

    fn search(&mut self, next_class: usize) {
        if self.stop.load(Ordering::Relaxed) {
            self.hit_budget = true;
            return;
        }
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.stop.store(true, Ordering::Relaxed);
                    self.hit_budget = true;
                    return;
                }
            }
        }
        if next_class == self.value.len() {
            self.emit();
            return;
        }
        let bound = self.tables.entry_bound;
        let candidates: Vec<u64> = match self.order {
            SearchOrder::Forward => (0..=bound).collect(),
            SearchOrder::Reverse => (0..=bound).rev().collect(),
        };
        'cand: for v in candidates {
            // row budget pruning, exact when a row closes
            for &(rk, mult) in &self.class_rows[next_class] {
                let add = u64::from(mult) * v * v;
                if self.row_sq[rk] + add > self.row_rhs_upper(rk) {
                    continue 'cand;
                }
            }
            // column-support hint: nonzero entries of a column stay in one block
            let mut hint_log: Vec<usize> = Vec::new();
            if self.use_hints && v > 0 {
                let cell_of = self.action.cell_of.as_ref().unwrap();
                let d = self.action.dim;
                let mut ok = true;
                for &s in &self.class_slots[next_class] {
                    let pos = s / (d * d);
                    let r = (s / d) % d;
                    let c = s % d;
                    let ck = pos * d + c;
                    let block = cell_of[r];
                    if self.col_cell[ck] == UNCOMMITTED {
                        self.col_cell[ck] = block;
                        hint_log.push(ck);
                    } else if self.col_cell[ck] != block {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    for ck in hint_log {
                        self.col_cell[ck] = UNCOMMITTED;
                    }
                    continue 'cand;
                }
            }
            self.value[next_class] = Some(v);
            for &(rk, mult) in &self.class_rows[next_class] {
                self.row_sq[rk] += u64::from(mult) * v * v;
                self.row_open[rk] -= mult;
            }
            for &(ck, mult) in &self.class_cols[next_class] {
                self.col_open[ck] -= mult;
            }
            let mut consistent = true;
            for &(rk, _) in &self.class_rows[next_class] {
                if self.row_open[rk] == 0 {
                    if let Some(exact) = self.row_rhs_exact(rk) {
                        if self.row_sq[rk] != exact {
                            consistent = false;
                        }
                    } else if self.row_sq[rk] > self.row_rhs_upper(rk) {
                        consistent = false;
                    }
                }
            }
            let done_before = self.cell_done.len();
            if consistent {
                for ci in 0..self.cells.len() {
                    if self.cell_done.contains(&ci) {
                        continue;
                    }
                    if self.cell_ready(&self.cells[ci]) {
                        if self.cell_holds(&self.cells[ci]) {
                            self.cell_done.push(ci);
                        } else {
                            consistent = false;
                            break;
                        }
                    }
                }
            }
            if consistent {
                self.search(next_class + 1);
            }
            self.cell_done.truncate(done_before);
            for &(rk, mult) in &self.class_rows[next_class] {
                self.row_sq[rk] -= u64::from(mult) * v * v;
                self.row_open[rk] += mult;
            }
            for &(ck, mult) in &self.class_cols[next_class] {
                self.col_open[ck] += mult;
            }
            self.value[next_class] = None;
            for ck in hint_log {
                self.col_cell[ck] = UNCOMMITTED;
            }
            if self.stop.load(Ordering::Relaxed) {
                self.hit_budget = true;
                return;
            }
        }
    }

    fn emit(&mut self) {
        let d = self.action.dim;
        let mut out = Vec::with_capacity(self.tables.noninv.len());
        for pos in 0..self.tables.noninv.len() {
            let mut m = IntMatrix::zero(d);
            for r in 0..d {
                for c in 0..d {
                    m.set(r, c, self.slot_value(self.slot(pos, r, c)).unwrap());
                }
            }
            out.push(m);
        }
        self.solutions.push(out);
    }
}

fn solve_action(
    ring: &Arc<FusionRing>,
    tables: &RingTables,
    subgroup_ids: &[usize],
    subs: &[crate::group::Subgroup],
    cfg: &SearchConfig,
    stop: &AtomicBool,
    deadline: Option<Instant>,
) -> Result<(Vec<NimRep>, bool), OracleError> {
    let hint_members: Option<Vec<usize>> = if cfg.use_hints {
        match ring.ring_kind() {
            RingKind::Jl { .. } => Some((0..tables.group.order()).collect()),
            RingKind::Glm(data) => Some(data.two_gamma.members().to_vec()),
            RingKind::Generic => None,
        }
    } else {
        None
    };
    let action = build_action(tables, subgroup_ids, subs, hint_members.as_deref())?;
    let mut solver = Solver::new(ring, tables, &action, cfg, stop, deadline);
    solver.search(0);
    let hit = solver.hit_budget;
    let mut reps = Vec::new();
    for noninv_mats in solver.solutions {
        let mut all = Vec::with_capacity(ring.basis_len());
        let mut next = 0usize;
        for b in 0..ring.basis_len() {
            if ring.is_invertible(b) {
                let g = tables.element_of[b];
                all.push(IntMatrix::from_perm(&action.perms[g]));
            } else {
                all.push(noninv_mats[next].clone());
                next += 1;
            }
        }
        let rep = nimrep_from_matrices(ring.clone(), all)?;
        if !cfg.require_irreducible || rep.is_irreducible() {
            reps.push(rep);
        }
    }
    Ok((reps, hit))
}

fn matrix_key(rep: &NimRep) -> Vec<u64> {
    let d = rep.dim();
    let mut key = Vec::with_capacity(rep.matrices().len() * d * d);
    for m in rep.matrices() {
        for r in 0..d {
            for c in 0..d {
                key.push(m.get(r, c));
            }
        }
    }
    key
}

pub fn enumerate_all(
    ring: &Arc<FusionRing>,
    cfg: &SearchConfig,
) -> Result<OracleOutcome, OracleError> {
    let tables = ring_tables(ring, cfg)?;
    let subs = enumerate_subgroups(&tables.group);
    let shapes = action_shapes(&tables.group, cfg.max_dim);
    let stop = AtomicBool::new(false);
    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    if let Some(dl) = deadline {
        if Instant::now() >= dl {
            stop.store(true, Ordering::Relaxed);
        }
    }
    let results: Vec<(Vec<NimRep>, bool)> = shapes
        .par_iter()
        .map(|(_, ids)| {
            if stop.load(Ordering::Relaxed) {
                return Ok((Vec::new(), true));
            }
            solve_action(ring, &tables, ids, &subs, cfg, &stop, deadline)
        })
        .collect::<Result<Vec<_>, OracleError>>()?;
    let mut complete = true;
    let mut candidates: Vec<NimRep> = Vec::new();
    for (reps, hit) in results {
        complete &= !hit;
        candidates.extend(reps);
    }
    candidates.sort_by(|a, b| (a.dim(), matrix_key(a)).cmp(&(b.dim(), matrix_key(b))));
    let mut kept: Vec<NimRep> = Vec::new();
    for cand in candidates {
        if kept
            .iter()
            .all(|k| k.dim() != cand.dim() || are_isomorphic(k, &cand).is_none())
        {
            kept.push(cand);
        }
    }
    let note = if complete {
        None
    } else {
        Some("time budget exhausted; results are partial".to_string())
    };
    Ok(OracleOutcome { reps: kept, complete, note })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceCount {
    pub label: String,
    pub count: usize,
    pub matches_oracle: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub classifier_count: usize,
    pub oracle_count: usize,
    /// (classifier index, oracle index) pairs identified by isomorphism.
    pub matched: Vec<(usize, usize)>,
    /// Classifier entries the oracle never found (would falsify the
    /// construction or the oracle's completeness).
    pub only_classifier: Vec<usize>,
    /// Oracle reps absent from the classifier (would falsify the
    /// parametrization's completeness).
    pub only_oracle: Vec<usize>,
    pub oracle_complete: bool,
    pub agreement: bool,
    pub reference_counts: Vec<ReferenceCount>,
}

/// Attempts an isomorphism bijection between a classifier catalog and an
/// oracle run, and compares the oracle's class count against externally
/// stated counts.
pub fn cross_check(
    classifier: &[NimRep],
    oracle: &OracleOutcome,
    references: &[(String, usize)],
) -> CrossCheckReport {
    let mut taken = vec![false; oracle.reps.len()];
    let mut matched = Vec::new();
    let mut only_classifier = Vec::new();
    for (ci, crep) in classifier.iter().enumerate() {
        let hit = oracle.reps.iter().enumerate().find(|(oi, orep)| {
            !taken[*oi] && orep.dim() == crep.dim() && are_isomorphic(crep, orep).is_some()
        });
        match hit {
            Some((oi, _)) => {
                taken[oi] = true;
                matched.push((ci, oi));
            }
            None => only_classifier.push(ci),
        }
    }
    let only_oracle: Vec<usize> =
        (0..oracle.reps.len()).filter(|&oi| !taken[oi]).collect();
    let agreement = only_classifier.is_empty() && only_oracle.is_empty() && oracle.complete;
    let reference_counts = references
        .iter()
        .map(|(label, count)| ReferenceCount {
            label: label.clone(),
            count: *count,
            matches_oracle: *count == oracle.reps.len(),
        })
        .collect();
    CrossCheckReport {
        classifier_count: classifier.len(),
        oracle_count: oracle.reps.len(),
        matched,
        only_classifier,
        only_oracle,
        oracle_complete: oracle.complete,
        agreement,
        reference_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glm::glm_enumerate;
    use crate::group::Subgroup;
    use crate::jl::jl_enumerate;
    use crate::nimrep::decompose_orbits;
    use crate::ring::{glm_ring, jl_ring};

    fn cfg(max_dim: usize) -> SearchConfig {
        SearchConfig { max_dim, ..SearchConfig::default() }
    }

    #[test]
    fn ising_oracle_agrees_with_the_classifier() {
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 2).unwrap());
        let out = enumerate_all(&ring, &cfg(3)).unwrap();
        assert!(out.complete);
        assert_eq!(out.reps.len(), 1);
        assert_eq!(out.reps[0].dim(), 3);
        let classes = jl_enumerate(&g, 2).unwrap();
        let reps: Vec<NimRep> = classes.entries.iter().map(|e| e.rep.clone()).collect();
        let report = cross_check(&reps, &out, &[("classifier".into(), 1)]);
        assert!(report.agreement);
        assert_eq!(report.matched.len(), 1);
        assert!(report.reference_counts[0].matches_oracle);
    }

    #[test]
    fn z4_oracle_finds_the_four_small_classes() {
        let g = FiniteGroup::abelian(&[4]).unwrap();
        let ring = Arc::new(jl_ring(&g, 2).unwrap());
        let out = enumerate_all(&ring, &cfg(4)).unwrap();
        assert!(out.complete);
        let dims: Vec<usize> = out.reps.iter().map(NimRep::dim).collect();
        assert_eq!(dims, vec![1, 2, 2, 4]);
        let classes = jl_enumerate(&g, 2).unwrap();
        let reps: Vec<NimRep> = classes
            .entries
            .iter()
            .filter(|e| e.rep.dim() <= 4)
            .map(|e| e.rep.clone())
            .collect();
        let report = cross_check(&reps, &out, &[]);
        assert!(report.agreement, "{report:?}");
    }

    #[test]
    fn glm_oracle_matches_small_dimensions() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(glm_ring(&g, 0).unwrap());
        let out = enumerate_all(&ring, &cfg(2)).unwrap();
        assert!(out.complete);
        assert_eq!(out.reps.len(), 8);
        let classes = glm_enumerate(&g, 0).unwrap();
        // one rep per matrix-level class within the bound
        let mut reps: Vec<NimRep> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for e in &classes.entries {
            if e.rep.dim() <= 2 && seen.insert(e.iso_class_id) {
                reps.push(e.rep.clone());
            }
        }
        assert_eq!(reps.len(), 8);
        let report = cross_check(&reps, &out, &[]);
        assert!(report.agreement, "{report:?}");

        let wider = enumerate_all(&ring, &cfg(4)).unwrap();
        assert!(wider.complete);
        let mut seen = std::collections::BTreeSet::new();
        let mut reps = Vec::new();
        for e in &classes.entries {
            if e.rep.dim() <= 4 && seen.insert(e.iso_class_id) {
                reps.push(e.rep.clone());
            }
        }
        assert_eq!(reps.len(), 15);
        assert!(cross_check(&reps, &wider, &[]).agreement);
    }

    #[test]
    fn reducible_reps_appear_without_the_filter() {
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let ring = Arc::new(glm_ring(&g, 0).unwrap());
        let mut c = cfg(2);
        let filtered = enumerate_all(&ring, &c).unwrap();
        assert_eq!(filtered.reps.len(), 4);
        c.require_irreducible = false;
        let all = enumerate_all(&ring, &c).unwrap();
        assert_eq!(all.reps.len(), 5);
        assert_eq!(all.reps.iter().filter(|r| !r.is_irreducible()).count(), 1);
    }

    #[test]
    fn search_order_does_not_change_the_class_set() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 3).unwrap());
        let forward = enumerate_all(&ring, &cfg(3)).unwrap();
        let mut c = cfg(3);
        c.order = SearchOrder::Reverse;
        let reverse = enumerate_all(&ring, &c).unwrap();
        assert_eq!(forward.reps.len(), reverse.reps.len());
        for (a, b) in forward.reps.iter().zip(&reverse.reps) {
            assert_eq!(a.dim(), b.dim());
            assert!(are_isomorphic(a, b).is_some());
        }
    }

    #[test]
    fn hints_do_not_change_small_results() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 3).unwrap());
        let plain = enumerate_all(&ring, &cfg(4)).unwrap();
        let mut c = cfg(4);
        c.use_hints = true;
        let hinted = enumerate_all(&ring, &c).unwrap();
        assert_eq!(plain.reps.len(), hinted.reps.len());
        for (a, b) in plain.reps.iter().zip(&hinted.reps) {
            assert!(are_isomorphic(a, b).is_some());
        }
    }

    #[test]
    fn zero_dimension_bound_yields_nothing() {
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 2).unwrap());
        let out = enumerate_all(&ring, &cfg(0)).unwrap();
        assert!(out.reps.is_empty());
        assert!(out.complete);
    }

    #[test]
    fn too_small_entry_bound_is_refused() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 3).unwrap());
        let mut c = cfg(3);
        c.entry_bound = Some(1);
        match enumerate_all(&ring, &c) {
            Err(OracleError::EntryBoundTooSmall { needed: 2, got: 1 }) => {}
            other => panic!("expected a bound refusal, got {other:?}"),
        }
    }

    #[test]
    fn exhausted_budget_reports_incomplete() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 3).unwrap());
        let mut c = cfg(6);
        c.time_budget = Some(Duration::ZERO);
        let out = enumerate_all(&ring, &c).unwrap();
        assert!(!out.complete);
        assert!(out.note.is_some());
    }

    #[test]
    fn fault_injection_shows_up_in_the_report() {
        let g = FiniteGroup::abelian(&[4]).unwrap();
        let ring = Arc::new(jl_ring(&g, 2).unwrap());
        let out = enumerate_all(&ring, &cfg(4)).unwrap();
        let classes = jl_enumerate(&g, 2).unwrap();
        let mut reps: Vec<NimRep> = classes
            .entries
            .iter()
            .filter(|e| e.rep.dim() <= 4)
            .map(|e| e.rep.clone())
            .collect();
        reps.remove(0);
        let report = cross_check(&reps, &out, &[]);
        assert!(!report.agreement);
        assert_eq!(report.only_oracle.len(), 1);
        assert!(report.only_classifier.is_empty());
    }

    #[test]
    fn oracle_output_has_no_isomorphic_duplicates() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(glm_ring(&g, 0).unwrap());
        let out = enumerate_all(&ring, &cfg(2)).unwrap();
        for (i, a) in out.reps.iter().enumerate() {
            for b in &out.reps[i + 1..] {
                assert!(are_isomorphic(a, b).is_none());
            }
        }
    }

    #[test]
    fn adjudication_counts_the_three_orbit_family() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let ring = Arc::new(jl_ring(&g, 3).unwrap());
        let out = enumerate_all(&ring, &cfg(6)).unwrap();
        assert!(out.complete);
        let classes = jl_enumerate(&g, 3).unwrap();
        let reps: Vec<NimRep> = classes
            .entries
            .iter()
            .filter(|e| e.rep.dim() <= 6)
            .map(|e| e.rep.clone())
            .collect();
        let report = cross_check(&reps, &out, &[]);
        assert!(report.agreement, "{report:?}");
        assert_eq!(out.reps.len(), 17);
        // the contested family: three free-of-fixed-points orbits of size 2
        let all_order_two = out
            .reps
            .iter()
            .filter(|r| {
                r.dim() == 6 && {
                    let action = r.invertible_action().unwrap();
                    let full = Subgroup::full(&action.group);
                    let orbits = decompose_orbits(r, &action, &full).unwrap();
                    orbits.orbits.len() == 3 && orbits.orbits.iter().all(|o| o.len() == 2)
                }
            })
            .count();
        assert_eq!(all_order_two, 11);
    }
}
