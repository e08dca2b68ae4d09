//! Persistent classification catalogs: JSON files listing every class with
//! its parameters, matrices, algebra objects, and admissibility witness.
//! Files are byte-stable: saving a loaded catalog reproduces it exactly.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glm::{glm_algebra_objects, glm_enumerate_with_options, GlmError};
use crate::group::{FiniteGroup, GroupError};
use crate::jl::{jl_algebra_objects, jl_enumerate, JlError};
use crate::matrix::IntMatrix;
use crate::nimrep::{nimrep_with_labels, NimRep, NimRepError};
use crate::oracle::CrossCheckReport;
use crate::ring::{glm_ring_with_options, jl_ring, FusionRing, RingError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog has no entry {index}")]
    UnknownEntry { index: usize },
    #[error("bad group description: {0}")]
    BadGroup(String),
    #[error("malformed catalog: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    NimRep(#[from] NimRepError),
    #[error(transparent)]
    Jl(#[from] JlError),
    #[error(transparent)]
    Glm(#[from] GlmError),
}

/// Rebuildable group description: invariant factors for abelian groups,
/// an explicit multiplication table otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant_factors: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    pub fn abelian(factors: &[u32]) -> GroupSpec {
        let name = if factors.is_empty() {
            "Z1".to_string()
        } else {
            factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x")
        };
        GroupSpec { name, invariant_factors: Some(factors.to_vec()), table: None }
    }

    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> GroupSpec {
        GroupSpec { name: name.into(), invariant_factors: None, table: Some(table) }
    }

    pub fn build(&self) -> Result<FiniteGroup, CatalogError> {
        let mut g = match (&self.invariant_factors, &self.table) {
            (Some(factors), _) => FiniteGroup::abelian(factors)?,
            (None, Some(table)) => FiniteGroup::from_table(table.clone())?,
            (None, None) => {
                return Err(CatalogError::BadGroup(
                    "need invariant factors or a multiplication table".into(),
                ))
            }
        };
        g.set_name(self.name.clone());
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RingDescriptor {
    Jl { group: GroupSpec, p: usize },
    Glm { gamma: GroupSpec, delta: usize, allow_odd: bool },
}

impl RingDescriptor {
    pub fn build_ring(&self) -> Result<Arc<FusionRing>, CatalogError> {
        let ring = match self {
            RingDescriptor::Jl { group, p } => jl_ring(&group.build()?, *p)?,
            RingDescriptor::Glm { gamma, delta, allow_odd } => {
                glm_ring_with_options(&gamma.build()?, *delta, *allow_odd)?
            }
        };
        Ok(Arc::new(ring))
    }
}

/// Classification parameters of one entry, as plain lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EntryParams {
    Jl {
        p: usize,
        m: usize,
        subgroups: Vec<Vec<usize>>,
    },
    Glm {
        delta: usize,
        /// Subgroup member lists, one per module orbit.
        orbit_pairs: Vec<Vec<usize>>,
        /// Cycle notation of the coupling permutation on global blocks.
        tau0: String,
        tau0_map: Vec<usize>,
    },
}

/// Closed-form algebra object for one module orbit next to the self-loop
/// reading taken at the orbit's base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub orbit: usize,
    pub base_point: usize,
    pub closed_form: Vec<u64>,
    pub self_loops: Vec<u64>,
    pub agree: bool,
    /// Module points of this orbit whose self-loop reading differs from
    /// the closed form, if any.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub deviating_points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub class_id: usize,
    /// Coarse parameter-level class for orbit-tuple rings.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theorem_class_id: Option<usize>,
    /// Matrix-level class for twisted-doubling rings.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iso_class_id: Option<usize>,
    pub params: EntryParams,
    pub dim: usize,
    pub orbit_count: usize,
    pub labels: Vec<String>,
    pub matrices: Vec<Vec<Vec<u64>>>,
    pub algebras: Vec<AlgebraReport>,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub admissible_witness: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub ring: RingDescriptor,
    /// Unix seconds; zero under --reproducible.
    pub generated_at: u64,
    pub tool_version: String,
    pub entries: Vec<CatalogEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_check: Option<CrossCheckReport>,
}

fn timestamp(reproducible: bool) -> u64 {
    if reproducible {
        0
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    }
}

fn matrices_of(rep: &NimRep) -> Vec<Vec<Vec<u64>>> {
    rep.matrices().iter().map(IntMatrix::rows).collect()
}

/// Orbit base offsets for a module built from coset spaces in order.
fn orbit_offsets(group_order: usize, subgroup_sizes: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(subgroup_sizes.len());
    let mut at = 0usize;
    for &s in subgroup_sizes {
        offsets.push(at);
        at += group_order / s;
    }
    offsets
}

fn algebra_reports(
    rep: &NimRep,
    closed: &[crate::nimrep::AlgebraObject],
    offsets: &[usize],
    dim: usize,
) -> Result<Vec<AlgebraReport>, CatalogError> {
    let mut out = Vec::with_capacity(closed.len());
    for (i, form) in closed.iter().enumerate() {
        let start = offsets[i];
        let end = offsets.get(i + 1).copied().unwrap_or(dim);
        let base = rep.algebra_object_at(start)?;
        let mut deviating = Vec::new();
        for point in start..end {
            if rep.algebra_object_at(point)?.multiplicities != form.multiplicities {
                deviating.push(point);
            }
        }
        out.push(AlgebraReport {
            orbit: i,
            base_point: start,
            closed_form: form.multiplicities.clone(),
            self_loops: base.multiplicities.clone(),
            agree: deviating.is_empty(),
            deviating_points: deviating,
        });
    }
    Ok(out)
}

/// Contiguous renumbering of secondary ids in first-appearance order.
fn renumber(ids: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(ids.len());
    for &id in ids {
        let new = match map.iter().find(|(old, _)| *old == id) {
            Some(&(_, new)) => new,
            None => {
                let new = map.len();
                map.push((id, new));
                new
            }
        };
        out.push(new);
    }
    out
}

pub fn jl_catalog(
    spec: &GroupSpec,
    p: usize,
    orbit_filter: Option<usize>,
    reproducible: bool,
) -> Result<Catalog, CatalogError> {
    let group = spec.build()?;
    let enumeration = jl_enumerate(&group, p)?;
    let keep: Vec<usize> = enumeration
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| orbit_filter.is_none_or(|m| e.params.orbit_count() == m))
        .map(|(i, _)| i)
        .collect();
    let coarse = renumber(
        &keep.iter().map(|&i| enumeration.entries[i].theorem_class_id).collect::<Vec<_>>(),
    );
    let mut entries = Vec::with_capacity(keep.len());
    for (new_id, &i) in keep.iter().enumerate() {
        let e = &enumeration.entries[i];
        let closed = jl_algebra_objects(&e.params)?;
        let sizes: Vec<usize> = e.params.subgroups.iter().map(|h| h.len()).collect();
        let offsets = orbit_offsets(group.order(), &sizes);
        let (admissible, witness) = e.rep.is_admissible();
        entries.push(CatalogEntry {
            class_id: new_id,
            theorem_class_id: Some(coarse[new_id]),
            iso_class_id: None,
            params: EntryParams::Jl {
                p,
                m: e.params.orbit_count(),
                subgroups: e.params.subgroups.iter().map(|h| h.members().to_vec()).collect(),
            },
            dim: e.rep.dim(),
            orbit_count: e.params.orbit_count(),
            labels: e.rep.labels().to_vec(),
            matrices: matrices_of(&e.rep),
            algebras: algebra_reports(&e.rep, &closed, &offsets, e.rep.dim())?,
            admissible,
            admissible_witness: witness,
        });
    }
    let mut notes: Vec<String> = Vec::new();
    for (tid, cids) in &enumeration.split_theorem_classes {
        let retained: Vec<usize> = cids
            .iter()
            .filter_map(|cid| keep.iter().position(|&i| enumeration.entries[i].class_id == *cid))
            .collect();
        if retained.len() > 1 {
            let listed =
                retained.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
            let coarse_new = coarse[retained[0]];
            notes.push(format!(
                "subgroup-multiset class {coarse_new} splits into matrix classes {listed} (parameter tag {tid})"
            ));
        }
    }
    notes.extend(enumeration.merge_notes.iter().cloned());
    Ok(Catalog {
        ring: RingDescriptor::Jl { group: spec.clone(), p },
        generated_at: timestamp(reproducible),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        entries,
        notes,
        cross_check: None,
    })
}

pub fn glm_catalog(
    spec: &GroupSpec,
    delta: usize,
    allow_odd: bool,
    orbit_filter: Option<usize>,
    reproducible: bool,
) -> Result<Catalog, CatalogError> {
    let gamma = spec.build()?;
    let enumeration = glm_enumerate_with_options(&gamma, delta, allow_odd)?;
    let keep: Vec<usize> = enumeration
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| orbit_filter.is_none_or(|m| e.params.orbit_count() == m))
        .map(|(i, _)| i)
        .collect();
    let iso = renumber(
        &keep.iter().map(|&i| enumeration.entries[i].iso_class_id).collect::<Vec<_>>(),
    );
    let mut entries = Vec::with_capacity(keep.len());
    for (new_id, &i) in keep.iter().enumerate() {
        let e = &enumeration.entries[i];
        let closed = glm_algebra_objects(&e.params)?;
        let sizes: Vec<usize> = e.params.subgroups.iter().map(|h| h.len()).collect();
        let offsets = orbit_offsets(gamma.order(), &sizes);
        let (admissible, witness) = e.rep.is_admissible();
        entries.push(CatalogEntry {
            class_id: new_id,
            theorem_class_id: None,
            iso_class_id: Some(iso[new_id]),
            params: EntryParams::Glm {
                delta,
                orbit_pairs: e.params.subgroups.iter().map(|h| h.members().to_vec()).collect(),
                tau0: e.params.tau0.cycle_string(),
                tau0_map: e.params.tau0.as_slice().to_vec(),
            },
            dim: e.rep.dim(),
            orbit_count: e.params.orbit_count(),
            labels: e.rep.labels().to_vec(),
            matrices: matrices_of(&e.rep),
            algebras: algebra_reports(&e.rep, &closed, &offsets, e.rep.dim())?,
            admissible,
            admissible_witness: witness,
        });
    }
    let mut notes: Vec<String> = Vec::new();
    for (iid, cids) in &enumeration.collapsed_iso_classes {
        let retained: Vec<usize> = cids
            .iter()
            .filter_map(|cid| keep.iter().position(|&i| enumeration.entries[i].class_id == *cid))
            .collect();
        if retained.len() > 1 {
            let listed =
                retained.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
            let iso_new = iso[retained[0]];
            notes.push(format!(
                "matrix class {iso_new} identifies parameter classes {listed} (parameter tag {iid})"
            ));
        }
    }
    Ok(Catalog {
        ring: RingDescriptor::Glm { gamma: spec.clone(), delta, allow_odd },
        generated_at: timestamp(reproducible),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        entries,
        notes,
        cross_check: None,
    })
}

impl Catalog {
    pub fn build_ring(&self) -> Result<Arc<FusionRing>, CatalogError> {
        self.ring.build_ring()
    }

    /// Reconstructs and revalidates one entry's NIM-rep.
    pub fn entry_rep(
        &self,
        ring: &Arc<FusionRing>,
        index: usize,
    ) -> Result<NimRep, CatalogError> {
        let entry =
            self.entries.get(index).ok_or(CatalogError::UnknownEntry { index })?;
        let matrices = entry
            .matrices
            .iter()
            .map(|rows| IntMatrix::from_rows(rows.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CatalogError::Malformed)?;
        Ok(nimrep_with_labels(ring.clone(), matrices, entry.labels.clone())?)
    }

    /// Class counts keyed by (orbit count, dimension).
    pub fn summary(&self) -> Vec<(usize, usize, usize)> {
        let mut counts: Vec<(usize, usize, usize)> = Vec::new();
        for e in &self.entries {
            match counts
                .iter_mut()
                .find(|(m, d, _)| *m == e.orbit_count && *d == e.dim)
            {
                Some((_, _, n)) => *n += 1,
                None => counts.push((e.orbit_count, e.dim, 1)),
            }
        }
        counts.sort();
        counts
    }
}

pub fn save_catalog(catalog: &Catalog) -> Result<String, CatalogError> {
    let mut text = serde_json::to_string_pretty(catalog)?;
    text.push('\n');
    Ok(text)
}

pub fn load_catalog(text: &str) -> Result<Catalog, CatalogError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jl_catalog_lists_the_known_one_orbit_classes() {
        let spec = GroupSpec::abelian(&[2, 2]);
        let cat = jl_catalog(&spec, 3, Some(1), true).unwrap();
        assert_eq!(cat.entries.len(), 4);
        assert_eq!(cat.generated_at, 0);
        let mut dims: Vec<usize> = cat.entries.iter().map(|e| e.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 2]);
        for (i, e) in cat.entries.iter().enumerate() {
            assert_eq!(e.class_id, i);
            assert_eq!(e.orbit_count, 1);
            assert!(e.admissible);
            assert!(e.admissible_witness.is_some());
            assert!(e.algebras.iter().all(|a| a.agree));
        }
        assert_eq!(cat.summary(), vec![(1, 1, 1), (1, 2, 3)]);
    }

    #[test]
    fn filtered_ids_stay_contiguous() {
        let spec = GroupSpec::abelian(&[2, 2]);
        let cat = jl_catalog(&spec, 3, Some(3), true).unwrap();
        assert_eq!(cat.entries.len(), 13);
        for (i, e) in cat.entries.iter().enumerate() {
            assert_eq!(e.class_id, i);
        }
        let coarse: Vec<usize> =
            cat.entries.iter().map(|e| e.theorem_class_id.unwrap()).collect();
        let mut sorted = coarse.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, (0..12).collect::<Vec<_>>());
        assert_eq!(cat.notes.len(), 1, "{:?}", cat.notes);
        assert!(cat.notes[0].contains("splits into matrix classes"));
    }

    #[test]
    fn glm_catalog_round_trips_byte_for_byte() {
        let spec = GroupSpec::abelian(&[2, 2]);
        let cat = glm_catalog(&spec, 0, false, None, true).unwrap();
        assert_eq!(cat.entries.len(), 22);
        let text = save_catalog(&cat).unwrap();
        let loaded = load_catalog(&text).unwrap();
        let again = save_catalog(&loaded).unwrap();
        assert_eq!(text, again);
        assert_eq!(loaded.entries.len(), 22);
        assert_eq!(
            loaded.entries.iter().map(|e| e.iso_class_id.unwrap()).max(),
            Some(15)
        );
        assert_eq!(loaded.notes.len(), 4);
    }

    #[test]
    fn entry_reps_rebuild_and_validate() {
        let spec = GroupSpec::abelian(&[2, 2]);
        let cat = glm_catalog(&spec, 0, false, Some(2), true).unwrap();
        assert_eq!(cat.entries.len(), 11);
        let ring = cat.build_ring().unwrap();
        for i in 0..cat.entries.len() {
            let rep = cat.entry_rep(&ring, i).unwrap();
            assert_eq!(rep.dim(), cat.entries[i].dim);
        }
        assert!(matches!(
            cat.entry_rep(&ring, 99),
            Err(CatalogError::UnknownEntry { index: 99 })
        ));
    }

    #[test]
    fn glm_summary_counts_match_the_example_table() {
        let spec = GroupSpec::abelian(&[2, 2]);
        let one = glm_catalog(&spec, 0, false, Some(1), true).unwrap();
        assert_eq!(one.summary(), vec![(1, 1, 1), (1, 2, 6), (1, 4, 4)]);
        let two = glm_catalog(&spec, 0, false, Some(2), true).unwrap();
        assert_eq!(two.summary(), vec![(2, 2, 1), (2, 4, 6), (2, 8, 4)]);
    }

    #[test]
    fn timestamps_respect_the_reproducible_flag() {
        let spec = GroupSpec::abelian(&[2]);
        let stamped = jl_catalog(&spec, 2, None, false).unwrap();
        assert!(stamped.generated_at > 0);
        let plain = jl_catalog(&spec, 2, None, true).unwrap();
        assert_eq!(plain.generated_at, 0);
    }

    #[test]
    fn group_spec_rejects_an_empty_description() {
        let spec = GroupSpec { name: "mystery".into(), invariant_factors: None, table: None };
        assert!(matches!(spec.build(), Err(CatalogError::BadGroup(_))));
    }

    #[test]
    fn table_specs_rebuild_nonabelian_groups() {
        let s3 = crate::group::samples::s3();
        let spec = GroupSpec::from_table("S3", s3.table().clone());
        let cat = jl_catalog(&spec, 2, None, true).unwrap();
        assert_eq!(cat.entries.len(), 2);
        let mut dims: Vec<usize> = cat.entries.iter().map(|e| e.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![5, 7]);
    }
}
