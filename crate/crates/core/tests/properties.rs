//! Exhaustive sweeps over every abelian group of order <= 8 (all p <= 6,
//! all twists), re-checking classifier output against the validator and
//! the closed-form identities, plus randomized invariance properties.

use proptest::prelude::*;

use nimforge_core::glm::{
    glm_algebra_objects, glm_coefficient_identities, glm_enumerate, glm_validate, GlmEntry,
};
use nimforge_core::group::exact_sqrt;
use nimforge_core::jl::{jl_algebra_objects, jl_enumerate, JlEntry};
use nimforge_core::nimrep::check_matrices;
use nimforge_core::ring::{glm_ring, jl_ring};
use nimforge_core::{are_isomorphic, FiniteGroup, NimRep, Perm};

fn abelian_groups_up_to_8() -> Vec<FiniteGroup> {
    let factor_lists: [&[u32]; 11] = [
        &[],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
    ];
    factor_lists
        .iter()
        .map(|f| {
            if f.is_empty() {
                FiniteGroup::trivial()
            } else {
                FiniteGroup::abelian(f).unwrap()
            }
        })
        .collect()
}

fn even_groups() -> Vec<FiniteGroup> {
    abelian_groups_up_to_8().into_iter().filter(|g| g.order() % 2 == 0).collect()
}

/// Every (group, p) pair the orbit-tuple ring accepts in the sweep range.
fn jl_cases() -> Vec<(FiniteGroup, usize)> {
    let mut cases = Vec::new();
    for g in abelian_groups_up_to_8() {
        for p in 2..=6usize {
            if p == 2 || exact_sqrt(g.order() as u64).is_ok() {
                cases.push((g.clone(), p));
            }
        }
    }
    cases
}

fn glm_cases() -> Vec<(FiniteGroup, usize)> {
    let mut cases = Vec::new();
    for g in even_groups() {
        for delta in 0..g.order() {
            cases.push((g.clone(), delta));
        }
    }
    cases
}

fn assert_validator_invariants(rep: &NimRep) {
    let ring = rep.ring();
    check_matrices(ring, rep.matrices()).unwrap();
    for b in 0..ring.basis_len() {
        if ring.is_invertible(b) {
            assert!(rep.matrix(b).is_permutation());
        }
        assert_eq!(rep.matrix(ring.dual(b)), &rep.matrix(b).transpose());
    }
}

#[test]
fn orbit_tuple_sweep_passes_the_validator() {
    for (g, p) in jl_cases() {
        let enumeration = jl_enumerate(&g, p).unwrap();
        assert!(!enumeration.entries.is_empty());
        for e in &enumeration.entries {
            assert_eq!(p % e.params.orbit_count(), 0);
            assert_validator_invariants(&e.rep);
            assert!(e.rep.is_irreducible());
            let (ok, witness) = e.rep.is_admissible();
            assert!(ok && witness.is_some());
        }
    }
}

#[test]
fn orbit_tuple_rings_without_square_order_are_refused() {
    for g in abelian_groups_up_to_8() {
        if exact_sqrt(g.order() as u64).is_err() {
            assert!(jl_ring(&g, 3).is_err());
        }
    }
}

#[test]
fn orbit_tuple_algebras_match_self_loops_on_abelian_groups() {
    for (g, p) in jl_cases() {
        for e in &jl_enumerate(&g, p).unwrap().entries {
            let closed = jl_algebra_objects(&e.params).unwrap();
            let mut point = 0usize;
            for (i, form) in closed.iter().enumerate() {
                let orbit_size = g.order() / e.params.subgroups[i].len();
                for offset in 0..orbit_size {
                    let reading = e.rep.algebra_object_at(point + offset).unwrap();
                    assert_eq!(reading.multiplicities, form.multiplicities);
                }
                point += orbit_size;
            }
        }
    }
}

#[test]
fn twisted_doubling_sweep_passes_the_validator() {
    for (g, delta) in glm_cases() {
        let enumeration = glm_enumerate(&g, delta).unwrap();
        assert!(!enumeration.entries.is_empty());
        for e in &enumeration.entries {
            assert!(e.params.orbit_count() <= 2);
            assert_validator_invariants(&e.rep);
            assert!(e.rep.is_irreducible());
            let (ok, witness) = e.rep.is_admissible();
            assert!(ok && witness.is_some());
        }
    }
}

#[test]
fn twisted_doubling_coupling_structure_holds_everywhere() {
    for (g, delta) in glm_cases() {
        for e in &glm_enumerate(&g, delta).unwrap().entries {
            let sig = glm_validate(&e.params).unwrap();
            let tau = &e.params.tau0;
            assert_eq!(&tau.compose(tau), &sig.sigma_delta);
            for s in &sig.sigma {
                assert!(tau.commutes_with(s));
            }
            if e.params.orbit_count() == 2 {
                let (s0, e0) = sig.orbit_block_range[0];
                let (s1, e1) = sig.orbit_block_range[1];
                assert_eq!(e0 - s0, e1 - s1, "coupled spaces need equal block counts");
                for b in s0..e0 {
                    assert!((s1..e1).contains(&tau.apply(b)));
                }
            } else {
                let (s0, e0) = sig.orbit_block_range[0];
                for b in s0..e0 {
                    assert!((s0..e0).contains(&tau.apply(b)));
                }
            }
        }
    }
}

#[test]
fn twisted_doubling_coefficient_identities_hold_everywhere() {
    for (g, delta) in glm_cases() {
        for e in &glm_enumerate(&g, delta).unwrap().entries {
            glm_coefficient_identities(&e.params).unwrap();
        }
    }
}

#[test]
fn twisted_doubling_algebras_match_self_loops_at_every_point() {
    for (g, delta) in glm_cases() {
        for e in &glm_enumerate(&g, delta).unwrap().entries {
            let closed = glm_algebra_objects(&e.params).unwrap();
            let mut point = 0usize;
            for (i, form) in closed.iter().enumerate() {
                let orbit_size = g.order() / e.params.subgroups[i].len();
                for offset in 0..orbit_size {
                    let reading = e.rep.algebra_object_at(point + offset).unwrap();
                    assert_eq!(reading.multiplicities, form.multiplicities);
                }
                point += orbit_size;
            }
        }
    }
}

#[test]
fn class_ids_are_contiguous_across_the_sweep() {
    for (g, p) in jl_cases() {
        let entries = jl_enumerate(&g, p).unwrap().entries;
        for (i, e) in entries.iter().enumerate() {
            assert_eq!(e.class_id, i);
        }
        let coarse: Vec<usize> = entries.iter().map(|e| e.theorem_class_id).collect();
        assert_contiguous(&coarse);
    }
    for (g, delta) in glm_cases() {
        let entries = glm_enumerate(&g, delta).unwrap().entries;
        for (i, e) in entries.iter().enumerate() {
            assert_eq!(e.class_id, i);
        }
        let iso: Vec<usize> = entries.iter().map(|e| e.iso_class_id).collect();
        assert_contiguous(&iso);
    }
}

fn assert_contiguous(ids: &[usize]) {
    let mut seen: Vec<usize> = ids.to_vec();
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen, (0..seen.len()).collect::<Vec<_>>());
    // first appearances come in increasing order
    let mut next = 0usize;
    for &id in ids {
        if id == next {
            next += 1;
        } else {
            assert!(id < next);
        }
    }
}

#[test]
fn verify_axioms_passes_for_every_sweep_ring() {
    for (g, p) in jl_cases() {
        assert!(jl_ring(&g, p).unwrap().verify_axioms().passed());
    }
    for (g, delta) in glm_cases() {
        assert!(glm_ring(&g, delta).unwrap().verify_axioms().passed());
    }
}

fn sample_jl_entries() -> Vec<JlEntry> {
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    jl_enumerate(&g, 3).unwrap().entries
}

fn sample_glm_entries() -> Vec<GlmEntry> {
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    glm_enumerate(&g, 0).unwrap().entries
}

fn perm_from_seed(n: usize, seed: u64) -> Perm {
    // Fisher-Yates driven by a splitmix step
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut map: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        state ^= state >> 30;
        state = state.wrapping_mul(0xbf58476d1ce4e5b9);
        state ^= state >> 27;
        let j = (state % (i as u64 + 1)) as usize;
        map.swap(i, j);
    }
    Perm::from_map(map).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_never_leaves_the_isomorphism_class(entry in 0usize..17, seed in any::<u64>()) {
        let entries = sample_jl_entries();
        let rep = &entries[entry % entries.len()].rep;
        let p = perm_from_seed(rep.dim(), seed);
        let moved = rep.relabel(&p);
        prop_assert!(are_isomorphic(rep, &moved).is_some());
    }

    #[test]
    fn isomorphism_checks_are_symmetric(a in 0usize..22, b in 0usize..22) {
        let entries = sample_glm_entries();
        let x = &entries[a % entries.len()].rep;
        let y = &entries[b % entries.len()].rep;
        prop_assert!(are_isomorphic(x, x).is_some());
        prop_assert_eq!(
            are_isomorphic(x, y).is_some(),
            are_isomorphic(y, x).is_some()
        );
    }

    #[test]
    fn distinct_matrix_classes_stay_distinct_after_relabeling(
        a in 0usize..22,
        b in 0usize..22,
        seed in any::<u64>(),
    ) {
        let entries = sample_glm_entries();
        let x = &entries[a % entries.len()];
        let y = &entries[b % entries.len()];
        let p = perm_from_seed(y.rep.dim(), seed);
        let moved = y.rep.relabel(&p);
        prop_assert_eq!(
            are_isomorphic(&x.rep, &moved).is_some(),
            x.iso_class_id == y.iso_class_id
        );
    }
}
