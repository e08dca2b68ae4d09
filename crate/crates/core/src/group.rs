//! Finite groups as explicit multiplication tables.
//!
//! Elements are the indices `0..order` with `0` the identity. Everything
//! downstream (fusion rings, coset modules, the search oracle) works through
//! this one representation, so the constructor checks the axioms up front and
//! names a witness when they fail.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm;

/// Hard ceiling on group order. Tables are dense, subgroup enumeration is
/// exhaustive, and every consumer walks the full table, so this keeps worst
/// cases interactive.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square or has an out-of-range entry (row {row})")]
    MalformedTable { row: usize },
    #[error("element 0 is not a two-sided identity (fails at {witness})")]
    NoIdentity { witness: usize },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("invariant factor {factor} is smaller than 2")]
    FactorTooSmall { factor: u32 },
    #[error("group of order {order} exceeds the supported maximum {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("member set is not a subgroup (fails at {witness})")]
    NotASubgroup { witness: usize },
    #[error("{n} is not a perfect square")]
    NotASquare { n: u64 },
    #[error("element index {index} out of range for order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("cannot parse group shorthand {text:?} (expected a form like Z2xZ4)")]
    BadShorthand { text: String },
}

/// Parses abelian shorthand like "Z2xZ4" into factor lists; "Z1" factors
/// vanish, so the trivial group reads back as the empty list.
pub fn decode_shorthand(text: &str) -> Result<Vec<u32>, GroupError> {
    let bad = || GroupError::BadShorthand { text: text.to_string() };
    let mut factors = Vec::new();
    for part in text.split(['x', 'X']) {
        let digits = part.strip_prefix(['Z', 'z']).ok_or_else(bad)?;
        let n: u32 = digits.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        if n > 1 {
            factors.push(n);
        }
    }
    Ok(factors)
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    /// `table[a][b]` is the product `a * b`.
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    is_abelian: bool,
    /// Set when the group was built from invariant factors; element `i` then
    /// decodes to a tuple of digits in mixed radix over these factors.
    invariant_factors: Option<Vec<u32>>,
    name: Option<String>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.name {
            Some(n) => write!(f, "FiniteGroup({n}, order {})", self.order),
            None => write!(f, "FiniteGroup(order {})", self.order),
        }
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: squareness, entry range, `0` a
    /// two-sided identity, inverses, associativity (full scan).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        Self::from_table_with_limit(table, MAX_ORDER)
    }

    pub fn from_table_with_limit(table: Vec<Vec<usize>>, limit: usize) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable { row: 0 });
        }
        if n > limit {
            return Err(GroupError::OrderTooLarge { order: n, limit });
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(GroupError::MalformedTable { row: r });
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(GroupError::NoIdentity { witness: a });
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(GroupError::NoInverse { element: a }),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let is_abelian = (0..n).all(|a| (a..n).all(|b| table[a][b] == table[b][a]));
        Ok(FiniteGroup { order: n, table, inverse, is_abelian, invariant_factors: None, name: None })
    }

    /// Direct product of cyclic groups `Z_{f1} x Z_{f2} x ...`. Element `i`
    /// encodes the digit tuple in mixed radix, last factor fastest; the empty
    /// list gives the trivial group.
    pub fn abelian(invariant_factors: &[u32]) -> Result<Self, GroupError> {
        for &f in invariant_factors {
            if f < 2 {
                return Err(GroupError::FactorTooSmall { factor: f });
            }
        }
        let order: usize = invariant_factors.iter().map(|&f| f as usize).product();
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order, limit: MAX_ORDER });
        }
        let k = invariant_factors.len();
        let decode = |mut i: usize| -> Vec<usize> {
            let mut digits = vec![0; k];
            for d in (0..k).rev() {
                let f = invariant_factors[d] as usize;
                digits[d] = i % f;
                i /= f;
            }
            digits
        };
        let encode = |digits: &[usize]| -> usize {
            digits
                .iter()
                .zip(invariant_factors)
                .fold(0, |acc, (&d, &f)| acc * f as usize + d)
        };
        let mut table = vec![vec![0; order]; order];
        for a in 0..order {
            let da = decode(a);
            for b in 0..order {
                let db = decode(b);
                let sum: Vec<usize> = da
                    .iter()
                    .zip(&db)
                    .zip(invariant_factors)
                    .map(|((&x, &y), &f)| (x + y) % f as usize)
                    .collect();
                table[a][b] = encode(&sum);
            }
        }
        let mut g = FiniteGroup::from_table(table)?;
        g.invariant_factors = Some(invariant_factors.to_vec());
        g.name = Some(if k == 0 {
            "Z1".to_string()
        } else {
            invariant_factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x")
        });
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup::abelian(&[]).expect("trivial group always valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.is_abelian
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn invariant_factors(&self) -> Option<&[u32]> {
        self.invariant_factors.as_deref()
    }

    /// Digit tuple of an element when the group came from invariant factors.
    pub fn digits(&self, element: usize) -> Option<Vec<usize>> {
        let factors = self.invariant_factors.as_ref()?;
        let mut i = element;
        let mut digits = vec![0; factors.len()];
        for d in (0..factors.len()).rev() {
            let f = factors[d] as usize;
            digits[d] = i % f;
            i /= f;
        }
        Some(digits)
    }

    /// Element index of a digit tuple; inverse of `digits`.
    pub fn element_from_digits(&self, digits: &[usize]) -> Result<usize, GroupError> {
        let factors = self
            .invariant_factors
            .as_ref()
            .ok_or(GroupError::NotAbelian)?;
        if digits.len() != factors.len() {
            return Err(GroupError::ElementOutOfRange { index: usize::MAX, order: self.order });
        }
        let mut idx = 0usize;
        for (&d, &f) in digits.iter().zip(factors) {
            if d >= f as usize {
                return Err(GroupError::ElementOutOfRange { index: d, order: self.order });
            }
            idx = idx * f as usize + d;
        }
        Ok(idx)
    }

    /// Display label for an element: digit tuple when available, else `g<i>`;
    /// the identity is always `e`.
    pub fn element_label(&self, element: usize) -> String {
        if element == 0 {
            return "e".to_string();
        }
        self.element_label_raw(element)
    }

    /// Like `element_label` but without the `e` shorthand, so that coset
    /// representatives keep an explicit coordinate form.
    pub fn element_label_raw(&self, element: usize) -> String {
        match self.digits(element) {
            Some(d) if d.len() == 1 => d[0].to_string(),
            Some(d) => {
                let inner: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            }
            None => format!("g{element}"),
        }
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut cur = a;
        let mut k = 1;
        while cur != 0 {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    /// `{ x*x : x in G }`; a subgroup whenever the group is abelian.
    pub fn doubled_subgroup(&self) -> Result<Subgroup, GroupError> {
        if !self.is_abelian {
            return Err(GroupError::NotAbelian);
        }
        let mut members: Vec<usize> = (0..self.order).map(|x| self.mul(x, x)).collect();
        members.sort_unstable();
        members.dedup();
        Ok(Subgroup { members })
    }

    /// Number of elements `x` with `x*x = e`; always a power of 2 for abelian
    /// groups.
    pub fn two_torsion_count(&self) -> Result<usize, GroupError> {
        if !self.is_abelian {
            return Err(GroupError::NotAbelian);
        }
        Ok((0..self.order).filter(|&x| self.mul(x, x) == 0).count())
    }

    pub fn to_json(&self) -> String {
        let wire = match &self.invariant_factors {
            Some(f) => GroupWire::Abelian { abelian: f.clone(), name: self.name.clone() },
            None => GroupWire::Table {
                order: self.order,
                table: self.table.clone(),
                name: self.name.clone(),
            },
        };
        serde_json::to_string_pretty(&wire).expect("group wire form always serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let wire: GroupWire = serde_json::from_str(text)
            .map_err(|_| GroupError::MalformedTable { row: 0 })?;
        match wire {
            GroupWire::Abelian { abelian, name } => {
                let mut g = FiniteGroup::abelian(&abelian)?;
                if let Some(n) = name {
                    g.set_name(n);
                }
                Ok(g)
            }
            GroupWire::Table { order, table, name } => {
                if order != table.len() {
                    return Err(GroupError::MalformedTable { row: 0 });
                }
                let mut g = FiniteGroup::from_table(table)?;
                if let Some(n) = name {
                    g.set_name(n);
                }
                Ok(g)
            }
        }
    }
}

/// On-disk forms: the abelian shorthand or a full table.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupWire {
    Abelian {
        abelian: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

/// A subgroup, stored as its sorted member list. Operations take the parent
/// group explicitly; the member list alone identifies the subgroup within it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl Subgroup {
    /// Checks closure, identity and inverses inside `parent`.
    pub fn new(parent: &FiniteGroup, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotASubgroup { witness: 0 });
        }
        for &a in &members {
            if a >= parent.order() {
                return Err(GroupError::ElementOutOfRange { index: a, order: parent.order() });
            }
            if members.binary_search(&parent.inv(a)).is_err() {
                return Err(GroupError::NotASubgroup { witness: a });
            }
            for &b in &members {
                if members.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup { witness: parent.mul(a, b) });
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn full(parent: &FiniteGroup) -> Self {
        Subgroup { members: (0..parent.order()).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    pub fn index_in(&self, parent: &FiniteGroup) -> usize {
        parent.order() / self.len()
    }

    /// Members of the intersection with another subgroup.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> =
            self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        Subgroup { members }
    }

    /// Conjugate subgroup `g S g^-1`.
    pub fn conjugate(&self, parent: &FiniteGroup, g: usize) -> Subgroup {
        let gi = parent.inv(g);
        let mut members: Vec<usize> =
            self.members.iter().map(|&s| parent.mul(parent.mul(g, s), gi)).collect();
        members.sort_unstable();
        Subgroup { members }
    }
}

/// Closure of a set of generators (always contains the identity).
pub fn generated_subgroup(parent: &FiniteGroup, generators: &[usize]) -> Subgroup {
    let mut in_set = vec![false; parent.order()];
    in_set[0] = true;
    let mut frontier = vec![0];
    for &g in generators {
        if !in_set[g] {
            in_set[g] = true;
            frontier.push(g);
        }
    }
    while let Some(x) = frontier.pop() {
        for &g in generators {
            for y in [parent.mul(x, g), parent.mul(g, x)] {
                if !in_set[y] {
                    in_set[y] = true;
                    frontier.push(y);
                }
            }
        }
    }
    let members: Vec<usize> = (0..parent.order()).filter(|&i| in_set[i]).collect();
    Subgroup { members }
}

/// All subgroups, sorted by (order, lexicographic member list). This order is
/// the canonical subgroup numbering used everywhere downstream.
pub fn enumerate_subgroups(parent: &FiniteGroup) -> Vec<Subgroup> {
    let mut found = std::collections::BTreeSet::new();
    let trivial = Subgroup::trivial();
    found.insert(trivial.members.clone());
    let mut frontier = vec![trivial];
    while let Some(s) = frontier.pop() {
        for x in 1..parent.order() {
            if s.contains(x) {
                continue;
            }
            let mut gens = s.members.clone();
            gens.push(x);
            let bigger = generated_subgroup(parent, &gens);
            if found.insert(bigger.members.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().map(|members| Subgroup { members }).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// Partition of `subgroups` into conjugacy classes. Classes are returned as
/// index lists into the input, each sorted, ordered by their least index.
pub fn conjugacy_classes_of_subgroups(
    parent: &FiniteGroup,
    subgroups: &[Subgroup],
) -> Vec<Vec<usize>> {
    let pos: std::collections::BTreeMap<&[usize], usize> =
        subgroups.iter().enumerate().map(|(i, s)| (s.members(), i)).collect();
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = vec![i];
        class_of[i] = id;
        for g in 0..parent.order() {
            let conj = subgroups[i].conjugate(parent, g);
            let j = *pos.get(conj.members()).expect("conjugate of a subgroup is a subgroup");
            if class_of[j] == usize::MAX {
                class_of[j] = id;
                class.push(j);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Left cosets `aH` of a subgroup together with the action of the parent
/// group on coset indices. Coset 0 is the subgroup itself, and cosets are
/// numbered by their least representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    pub subgroup: Subgroup,
    /// Sorted member lists, one per coset.
    pub cosets: Vec<Vec<usize>>,
    /// `coset_of[x]` is the index of the coset containing `x`.
    pub coset_of: Vec<usize>,
    /// `action[g]` sends the index of `aH` to the index of `(ga)H`.
    pub action: Vec<Perm>,
}

pub fn coset_space(parent: &FiniteGroup, subgroup: &Subgroup) -> Result<CosetSpace, GroupError> {
    let subgroup = Subgroup::new(parent, subgroup.members().to_vec())?;
    let n = parent.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = subgroup.members().iter().map(|&h| parent.mul(a, h)).collect();
        members.sort_unstable();
        let idx = cosets.len();
        for &m in &members {
            coset_of[m] = idx;
        }
        cosets.push(members);
    }
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let action: Vec<Perm> = (0..n)
        .map(|g| {
            Perm::from_map(reps.iter().map(|&r| coset_of[parent.mul(g, r)]).collect())
                .expect("group action permutes cosets")
        })
        .collect();
    Ok(CosetSpace { subgroup, cosets, coset_of, action })
}

/// Quotient of an abelian group by a subgroup, with the projection map.
/// The quotient's element 0 is the coset of the identity.
pub fn quotient(
    parent: &FiniteGroup,
    subgroup: &Subgroup,
) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    if !parent.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let cs = coset_space(parent, subgroup)?;
    let k = cs.cosets.len();
    let reps: Vec<usize> = cs.cosets.iter().map(|c| c[0]).collect();
    let mut table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            table[i][j] = cs.coset_of[parent.mul(reps[i], reps[j])];
        }
    }
    let mut q = FiniteGroup::from_table(table)?;
    if let Some(pname) = parent.name() {
        q.set_name(format!("{pname}/H{}", subgroup.len()));
    }
    Ok((q, cs.coset_of))
}

pub fn is_perfect_square(n: u64) -> bool {
    exact_sqrt(n).is_ok()
}

/// Integer square root when exact; `NotASquare` otherwise.
pub fn exact_sqrt(n: u64) -> Result<u64, GroupError> {
    let r = (n as f64).sqrt() as u64;
    for cand in r.saturating_sub(2)..=r + 2 {
        if cand * cand == n {
            return Ok(cand);
        }
    }
    Err(GroupError::NotASquare { n })
}

/// Ready-made sample groups used by examples and test suites.
pub mod samples {
    use super::FiniteGroup;
    use crate::perm::Perm;

    /// Symmetric group on three letters, built from its permutation action.
    pub fn s3() -> FiniteGroup {
        let perms: Vec<Perm> = vec![
            Perm::identity(3),
            Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
            Perm::from_cycles(3, &[&[0, 2, 1]]).unwrap(),
            Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
            Perm::from_cycles(3, &[&[1, 2]]).unwrap(),
            Perm::from_cycles(3, &[&[0, 2]]).unwrap(),
        ];
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab = a.compose(b);
                        perms.iter().position(|p| *p == ab).unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_table(table).unwrap();
        g.set_name("S3");
        g
    }
}
