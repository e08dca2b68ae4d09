//! Fusion rings as dense structure-constant tables.
//!
//! A ring is a finite basis, a unit, an involution `*` on basis indices, and
//! non-negative integer constants `n[i][j][k]` giving the coefficient of
//! `b_k` in `b_i * b_j`. Two families are constructed from group data
//! (`jl_ring`, `glm_ring`); arbitrary tables round-trip through JSON and can
//! be fed to the oracle directly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{exact_sqrt, quotient, FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("p must be at least 2 (got {p})")]
    BadP { p: usize },
    #[error("group order {order} must be a perfect square when p > 2")]
    OrderNotSquare { order: usize },
    #[error("the grading group must be abelian")]
    NotAbelian,
    #[error("the grading group must have even order (got {order})")]
    OddOrder { order: usize },
    #[error("coefficient vector has length {got}, ring basis has {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed ring data: {0}")]
    Malformed(String),
}

/// What a basis index stands for. The payload is family-specific: for
/// invertibles the underlying group element; for JL non-invertibles the
/// subscript `i` of `X_i` (1..p-1); for GLM the quotient element of `X_q`;
/// for generic rings the position within its kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Inv(usize),
    NonInv(usize),
}

/// Construction recipe retained on rings we built ourselves; loaded rings
/// are `Generic` even if a family note is present in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Jl { group: FiniteGroup, p: usize, sqrt_order: Option<u64> },
    Glm(GlmData),
    Generic,
}

/// The derived data a GLM ring is built from: the doubling subgroup, the
/// grading quotient and its projection, and the reduced twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlmData {
    pub gamma: FiniteGroup,
    /// The twist as supplied, an element of gamma.
    pub delta: usize,
    /// Its class in the quotient.
    pub delta_bar: usize,
    pub two_gamma: Subgroup,
    pub quotient: FiniteGroup,
    /// Element of gamma -> quotient element.
    pub projection: Vec<usize>,
    /// Least coset representative per quotient element.
    pub reps: Vec<usize>,
    pub odd_order: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    kinds: Vec<BasisKind>,
    unit: usize,
    dual: Vec<usize>,
    /// n[i][j] is the coefficient vector of b_i * b_j over the basis.
    n: Vec<Vec<Vec<u64>>>,
    invertibles: Vec<usize>,
    kind: RingKind,
    name: String,
    /// Informational construction note carried through serialization.
    family_note: Option<String>,
}

/// Element of the free module over the basis; all arithmetic stays in
/// non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

impl RingElement {
    pub fn zero(len: usize) -> Self {
        RingElement { coeffs: vec![0; len] }
    }

    pub fn basis(i: usize, len: usize) -> Self {
        let mut coeffs = vec![0; len];
        coeffs[i] = 1;
        RingElement { coeffs }
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> u64 {
        self.coeffs.iter().sum()
    }
}

/// The based-ring axioms checked by `verify_axioms`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    Unit,
    Associativity,
    Duality,
    InvertibleClosure,
    FrobeniusDuality,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Indices pinning down the failure; unused slots are 0.
    pub witness: (usize, usize, usize, usize),
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    /// True when more failures exist than were recorded.
    pub truncated: bool,
}

/// Witnesses recorded per axiom before the scan moves on.
const MAX_WITNESSES_PER_AXIOM: usize = 8;

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        for v in &self.violations {
            writeln!(
                f,
                "{:?} violated at ({}, {}, {}, {}): {}",
                v.axiom, v.witness.0, v.witness.1, v.witness.2, v.witness.3, v.detail
            )?;
        }
        if self.truncated {
            writeln!(f, "(additional failures omitted)")?;
        }
        Ok(())
    }
}

/// On-disk form. `family` is informational only; loading always produces a
/// generic ring.
#[derive(Serialize, Deserialize)]
struct RingWire {
    basis: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    #[serde(rename = "N")]
    n: Vec<(usize, usize, usize, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
}

/// The ring with basis `G ∪ {X_1..X_{p-1}}`: group elements multiply in G
/// and absorb into every X, `X_i * X_j` is `sqrt(|G|) X_{i+j mod p}` unless
/// `i+j` vanishes mod p, in which case it is the sum of all group elements.
pub fn jl_ring(group: &FiniteGroup, p: usize) -> Result<FusionRing, RingError> {
    if p < 2 {
        return Err(RingError::BadP { p });
    }
    let g = group.order();
    let sqrt_order = exact_sqrt(g as u64).ok();
    let root = match (p > 2, sqrt_order) {
        (true, None) => return Err(RingError::OrderNotSquare { order: g }),
        (_, r) => r.unwrap_or(0),
    };
    let b = g + (p - 1);
    let mut labels: Vec<String> = (0..g).map(|e| group.element_label(e)).collect();
    let mut kinds: Vec<BasisKind> = (0..g).map(BasisKind::Inv).collect();
    for i in 1..p {
        labels.push(format!("X{i}"));
        kinds.push(BasisKind::NonInv(i));
    }
    // basis index of X_i
    let x = |i: usize| g + i - 1;
    let mut dual: Vec<usize> = (0..g).map(|e| group.inv(e)).collect();
    for i in 1..p {
        dual.push(x(p - i));
    }
    let mut n = vec![vec![vec![0u64; b]; b]; b];
    for a in 0..g {
        for c in 0..g {
            n[a][c][group.mul(a, c)] = 1;
        }
        for i in 1..p {
            n[a][x(i)][x(i)] = 1;
            n[x(i)][a][x(i)] = 1;
        }
    }
    for i in 1..p {
        for j in 1..p {
            let s = (i + j) % p;
            if s == 0 {
                for t in 0..g {
                    n[x(i)][x(j)][t] = 1;
                }
            } else {
                n[x(i)][x(j)][x(s)] = root;
            }
        }
    }
    let gname = group.name().map(str::to_string).unwrap_or_else(|| format!("order{g}"));
    Ok(FusionRing {
        labels,
        kinds,
        unit: 0,
        dual,
        n,
        invertibles: (0..g).collect(),
        kind: RingKind::Jl { group: group.clone(), p, sqrt_order },
        name: format!("jl({gname}, p={p})"),
        family_note: Some(format!("jl({gname}, p={p})")),
    })
}

/// The ring with basis `Γ ∪ {X_q : q ∈ Γ/2Γ}`: group elements translate the
/// X's through the quotient, and `X_q * X_r` is the sum of the coset of
/// doubles sitting over `δ̄ + q + r`.
pub fn glm_ring(gamma: &FiniteGroup, delta: usize) -> Result<FusionRing, RingError> {
    glm_ring_with_options(gamma, delta, false)
}

/// `allow_odd` skips the even-order requirement; doubling is then onto, the
/// quotient is trivial, and the ring degenerates to the single-X shape.
pub fn glm_ring_with_options(
    gamma: &FiniteGroup,
    delta: usize,
    allow_odd: bool,
) -> Result<FusionRing, RingError> {
    if !gamma.is_abelian() {
        return Err(RingError::NotAbelian);
    }
    let g = gamma.order();
    if g % 2 != 0 && !allow_odd {
        return Err(RingError::OddOrder { order: g });
    }
    if delta >= g {
        return Err(RingError::Group(GroupError::ElementOutOfRange { index: delta, order: g }));
    }
    let two_gamma = gamma.doubled_subgroup()?;
    let (quot, projection) = quotient(gamma, &two_gamma)?;
    let q = quot.order();
    let mut reps = vec![usize::MAX; q];
    for e in 0..g {
        let c = projection[e];
        if reps[c] == usize::MAX {
            reps[c] = e;
        }
    }
    let delta_bar = projection[delta];
    let b = g + q;
    let mut labels: Vec<String> = (0..g).map(|e| gamma.element_label(e)).collect();
    let mut kinds: Vec<BasisKind> = (0..g).map(BasisKind::Inv).collect();
    for c in 0..q {
        labels.push(format!("X{}", gamma.element_label_raw(reps[c])));
        kinds.push(BasisKind::NonInv(c));
    }
    let x = |c: usize| g + c;
    let mut dual: Vec<usize> = (0..g).map(|e| gamma.inv(e)).collect();
    for c in 0..q {
        dual.push(x(quot.inv(quot.mul(c, delta_bar))));
    }
    let mut n = vec![vec![vec![0u64; b]; b]; b];
    for a in 0..g {
        for c in 0..g {
            n[a][c][gamma.mul(a, c)] = 1;
        }
        for r in 0..q {
            let t = quot.mul(projection[a], r);
            n[a][x(r)][x(t)] = 1;
            n[x(r)][a][x(t)] = 1;
        }
    }
    for r in 0..q {
        for s in 0..q {
            let target = quot.mul(delta_bar, quot.mul(r, s));
            for t in 0..g {
                if projection[t] == target {
                    n[x(r)][x(s)][t] = 1;
                }
            }
        }
    }
    let gname = gamma.name().map(str::to_string).unwrap_or_else(|| format!("order{g}"));
    let dlabel = gamma.element_label_raw(reps[delta_bar]);
    Ok(FusionRing {
        labels,
        kinds,
        unit: 0,
        dual,
        n,
        invertibles: (0..g).collect(),
        kind: RingKind::Glm(GlmData {
            gamma: gamma.clone(),
            delta,
            delta_bar,
            two_gamma,
            quotient: quot,
            projection,
            reps,
            odd_order: g % 2 != 0,
        }),
        name: format!("glm({gname}, delta={dlabel})"),
        family_note: Some(format!("glm({gname}, delta={dlabel})")),
    })
}

impl FusionRing {
    pub fn basis_len(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_kind(&self, i: usize) -> BasisKind {
        self.kinds[i]
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u64 {
        self.n[i][j][k]
    }

    /// Coefficient vector of `b_i * b_j`.
    pub fn product_row(&self, i: usize, j: usize) -> &[u64] {
        &self.n[i][j]
    }

    pub fn invertibles(&self) -> &[usize] {
        &self.invertibles
    }

    pub fn noninvertibles(&self) -> Vec<usize> {
        (0..self.basis_len()).filter(|i| !self.is_invertible(*i)).collect()
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        matches!(self.kinds[i], BasisKind::Inv(_))
    }

    pub fn ring_kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        let b = self.basis_len();
        for v in [x, y] {
            if v.coeffs.len() != b {
                return Err(RingError::DimensionMismatch { got: v.coeffs.len(), want: b });
            }
        }
        let mut out = vec![0u64; b];
        for i in 0..b {
            if x.coeffs[i] == 0 {
                continue;
            }
            for j in 0..b {
                let w = x.coeffs[i] * y.coeffs[j];
                if w == 0 {
                    continue;
                }
                for (k, &c) in self.n[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] += w * c;
                    }
                }
            }
        }
        Ok(RingElement { coeffs: out })
    }

    /// Full scan of the based-ring axioms. Failures are report entries with
    /// witnessing index tuples, capped per axiom.
    pub fn verify_axioms(&self) -> AxiomReport {
        let b = self.basis_len();
        let mut report = AxiomReport::default();
        let mut counts = [0usize; 5];
        let push = |report: &mut AxiomReport,
                        counts: &mut [usize; 5],
                        axiom: Axiom,
                        witness: (usize, usize, usize, usize),
                        detail: String| {
            let slot = axiom as usize;
            if counts[slot] < MAX_WITNESSES_PER_AXIOM {
                report.violations.push(AxiomViolation { axiom, witness, detail });
            } else {
                report.truncated = true;
            }
            counts[slot] += 1;
        };

        for j in 0..b {
            for k in 0..b {
                let want = u64::from(j == k);
                if self.n[self.unit][j][k] != want {
                    push(
                        &mut report,
                        &mut counts,
                        Axiom::Unit,
                        (self.unit, j, k, 0),
                        format!("unit*b{j} has coefficient {} at b{k}", self.n[self.unit][j][k]),
                    );
                }
                if self.n[j][self.unit][k] != want {
                    push(
                        &mut report,
                        &mut counts,
                        Axiom::Unit,
                        (j, self.unit, k, 0),
                        format!("b{j}*unit has coefficient {} at b{k}", self.n[j][self.unit][k]),
                    );
                }
            }
        }

        'assoc: for i in 0..b {
            for j in 0..b {
                for l in 0..b {
                    // (i*j)*l vs i*(j*l), compared coordinate-wise
                    let mut lhs = vec![0u64; b];
                    for k in 0..b {
                        let c = self.n[i][j][k];
                        if c == 0 {
                            continue;
                        }
                        for m in 0..b {
                            lhs[m] += c * self.n[k][l][m];
                        }
                    }
                    let mut rhs = vec![0u64; b];
                    for k in 0..b {
                        let c = self.n[j][l][k];
                        if c == 0 {
                            continue;
                        }
                        for m in 0..b {
                            rhs[m] += c * self.n[i][k][m];
                        }
                    }
                    if lhs != rhs {
                        let m = (0..b).find(|&m| lhs[m] != rhs[m]).unwrap();
                        push(
                            &mut report,
                            &mut counts,
                            Axiom::Associativity,
                            (i, j, l, m),
                            format!("(b{i}*b{j})*b{l} and b{i}*(b{j}*b{l}) differ at b{m}"),
                        );
                        if counts[Axiom::Associativity as usize] > MAX_WITNESSES_PER_AXIOM {
                            break 'assoc;
                        }
                    }
                }
            }
        }

        for i in 0..b {
            for j in 0..b {
                let want = u64::from(j == self.dual[i]);
                if self.n[i][j][self.unit] != want {
                    push(
                        &mut report,
                        &mut counts,
                        Axiom::Duality,
                        (i, j, self.unit, 0),
                        format!(
                            "b{i}*b{j} has unit coefficient {}, dual map says {want}",
                            self.n[i][j][self.unit]
                        ),
                    );
                }
            }
        }

        for &g in &self.invertibles {
            if !self.invertibles.contains(&self.dual[g]) {
                push(
                    &mut report,
                    &mut counts,
                    Axiom::InvertibleClosure,
                    (g, self.dual[g], 0, 0),
                    format!("dual of invertible b{g} is not invertible"),
                );
            }
            for &h in &self.invertibles {
                let row = &self.n[g][h];
                let mass: u64 = row.iter().sum();
                let single = (0..b).find(|&k| row[k] == 1);
                let ok = mass == 1
                    && single.map(|k| self.invertibles.contains(&k)).unwrap_or(false);
                if !ok {
                    push(
                        &mut report,
                        &mut counts,
                        Axiom::InvertibleClosure,
                        (g, h, 0, 0),
                        format!("product of invertibles b{g}*b{h} is not a single invertible"),
                    );
                }
            }
        }

        'frob: for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    if self.n[i][j][k] != self.n[self.dual[i]][k][j] {
                        push(
                            &mut report,
                            &mut counts,
                            Axiom::FrobeniusDuality,
                            (i, j, k, self.dual[i]),
                            format!(
                                "n[{i}][{j}][{k}] = {} but n[{}][{k}][{j}] = {}",
                                self.n[i][j][k],
                                self.dual[i],
                                self.n[self.dual[i]][k][j]
                            ),
                        );
                        if counts[Axiom::FrobeniusDuality as usize] > MAX_WITNESSES_PER_AXIOM {
                            break 'frob;
                        }
                    }
                }
            }
        }

        report
    }

    /// The invertible basis elements as a group, unit first, plus the map
    /// from group element index to basis index.
    pub fn invertible_group(&self) -> Result<(FiniteGroup, Vec<usize>), RingError> {
        let mut order: Vec<usize> = self.invertibles.clone();
        order.sort_unstable();
        if let Some(pos) = order.iter().position(|&i| i == self.unit) {
            order.remove(pos);
            order.insert(0, self.unit);
        } else {
            return Err(RingError::Malformed("unit is not among the invertibles".into()));
        }
        let pos_of: std::collections::BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let k = order.len();
        let mut table = vec![vec![0usize; k]; k];
        for a in 0..k {
            for c in 0..k {
                let row = &self.n[order[a]][order[c]];
                let mass: u64 = row.iter().sum();
                let target = if mass == 1 { row.iter().position(|&v| v == 1) } else { None };
                let target = target.ok_or_else(|| {
                    RingError::Malformed(format!(
                        "product of invertibles {} and {} is not a single element",
                        order[a], order[c]
                    ))
                })?;
                table[a][c] = *pos_of.get(&target).ok_or_else(|| {
                    RingError::Malformed(format!(
                        "product of invertibles {} and {} leaves the invertible set",
                        order[a], order[c]
                    ))
                })?;
            }
        }
        let group = FiniteGroup::from_table(table)
            .map_err(|e| RingError::Malformed(format!("invertibles do not form a group: {e}")))?;
        Ok((group, order))
    }

    /// Swap one structure constant; only for fault-injection tests of the
    /// verifier and validators.
    pub fn corrupt_constant(&mut self, i: usize, j: usize, k: usize, value: u64) {
        self.n[i][j][k] = value;
    }

    pub fn to_json(&self) -> String {
        let b = self.basis_len();
        let mut triples = Vec::new();
        for i in 0..b {
            for j in 0..b {
                for (k, &v) in self.n[i][j].iter().enumerate() {
                    if v != 0 {
                        triples.push((i, j, k, v));
                    }
                }
            }
        }
        let wire = RingWire {
            basis: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            n: triples,
            family: self.family_note.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("ring wire form always serializes")
    }

    /// Parses the wire form and re-derives the invertible set from the
    /// constants. The family note, if any, is kept only in the display name.
    pub fn from_json(text: &str) -> Result<FusionRing, RingError> {
        let wire: RingWire =
            serde_json::from_str(text).map_err(|e| RingError::Malformed(e.to_string()))?;
        let b = wire.basis.len();
        if b == 0 {
            return Err(RingError::Malformed("empty basis".into()));
        }
        if wire.unit >= b {
            return Err(RingError::Malformed("unit index out of range".into()));
        }
        if wire.dual.len() != b {
            return Err(RingError::Malformed("dual map length differs from basis".into()));
        }
        for (i, &d) in wire.dual.iter().enumerate() {
            if d >= b || wire.dual[d] != i {
                return Err(RingError::Malformed(format!("dual map is not an involution at {i}")));
            }
        }
        let mut n = vec![vec![vec![0u64; b]; b]; b];
        for &(i, j, k, v) in &wire.n {
            if i >= b || j >= b || k >= b {
                return Err(RingError::Malformed(format!(
                    "structure constant index ({i},{j},{k}) out of range"
                )));
            }
            n[i][j][k] = v;
        }
        // invertible iff multiplying by the dual gives exactly the unit
        let invertibles: Vec<usize> = (0..b)
            .filter(|&i| {
                let row = &n[i][wire.dual[i]];
                row.iter().sum::<u64>() == 1 && row[wire.unit] == 1
            })
            .collect();
        let mut inv_seen = 0usize;
        let mut non_seen = 0usize;
        let kinds: Vec<BasisKind> = (0..b)
            .map(|i| {
                if invertibles.contains(&i) {
                    inv_seen += 1;
                    BasisKind::Inv(inv_seen - 1)
                } else {
                    non_seen += 1;
                    BasisKind::NonInv(non_seen - 1)
                }
            })
            .collect();
        let name = wire
            .family
            .clone()
            .unwrap_or_else(|| format!("ring({b} basis elements)"));
        Ok(FusionRing {
            labels: wire.basis,
            kinds,
            unit: wire.unit,
            dual: wire.dual,
            n,
            invertibles,
            kind: RingKind::Generic,
            name,
            family_note: wire.family,
        })
    }
}
