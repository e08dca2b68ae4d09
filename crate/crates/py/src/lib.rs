//! Python bindings. Groups are passed as shorthand strings like "Z2xZ2";
//! catalogs and rings come back as JSON text, search runs as plain tuples.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use std::sync::Arc;
use std::time::Duration;

use nimforge_core::catalog::{self, save_catalog, GroupSpec};
use nimforge_core::group::decode_shorthand;
use nimforge_core::oracle::{enumerate_all, SearchConfig, SearchOrder};
use nimforge_core::ring::{glm_ring_with_options, jl_ring};
use nimforge_core::FiniteGroup;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec_of(group: &str) -> PyResult<GroupSpec> {
    Ok(GroupSpec::abelian(&decode_shorthand(group).map_err(value_err)?))
}

fn group_of(group: &str) -> PyResult<FiniteGroup> {
    spec_of(group)?.build().map_err(value_err)
}

fn search_config(
    max_dim: usize,
    use_hints: bool,
    time_budget_ms: Option<u64>,
) -> SearchConfig {
    SearchConfig {
        max_dim,
        entry_bound: None,
        require_irreducible: true,
        time_budget: time_budget_ms.map(Duration::from_millis),
        use_hints,
        order: SearchOrder::Forward,
    }
}

/// Catalog of orbit-tuple classes as JSON, optionally filtered by orbit count.
#[pyfunction]
#[pyo3(signature = (group, p, orbits=None, reproducible=true))]
fn jl_catalog_json(
    group: &str,
    p: usize,
    orbits: Option<usize>,
    reproducible: bool,
) -> PyResult<String> {
    let spec = spec_of(group)?;
    let cat = catalog::jl_catalog(&spec, p, orbits, reproducible).map_err(value_err)?;
    save_catalog(&cat).map_err(value_err)
}

/// Catalog of twisted-doubling classes as JSON.
#[pyfunction]
#[pyo3(signature = (group, delta, orbits=None, allow_odd=false, reproducible=true))]
fn glm_catalog_json(
    group: &str,
    delta: usize,
    orbits: Option<usize>,
    allow_odd: bool,
    reproducible: bool,
) -> PyResult<String> {
    let spec = spec_of(group)?;
    let cat =
        catalog::glm_catalog(&spec, delta, allow_odd, orbits, reproducible).map_err(value_err)?;
    save_catalog(&cat).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (group, p, orbits=None))]
fn jl_class_count(group: &str, p: usize, orbits: Option<usize>) -> PyResult<usize> {
    let spec = spec_of(group)?;
    Ok(catalog::jl_catalog(&spec, p, orbits, true).map_err(value_err)?.entries.len())
}

#[pyfunction]
#[pyo3(signature = (group, delta, orbits=None, allow_odd=false))]
fn glm_class_count(
    group: &str,
    delta: usize,
    orbits: Option<usize>,
    allow_odd: bool,
) -> PyResult<usize> {
    let spec = spec_of(group)?;
    Ok(catalog::glm_catalog(&spec, delta, allow_odd, orbits, true)
        .map_err(value_err)?
        .entries
        .len())
}

#[pyfunction]
fn jl_ring_json(group: &str, p: usize) -> PyResult<String> {
    Ok(jl_ring(&group_of(group)?, p).map_err(value_err)?.to_json())
}

#[pyfunction]
#[pyo3(signature = (group, delta, allow_odd=false))]
fn glm_ring_json(group: &str, delta: usize, allow_odd: bool) -> PyResult<String> {
    Ok(glm_ring_with_options(&group_of(group)?, delta, allow_odd)
        .map_err(value_err)?
        .to_json())
}

/// Brute-force class search over the orbit-tuple ring up to max_dim.
/// Returns (class count, completed), where completed is false only when a
/// time budget ran out.
#[pyfunction]
#[pyo3(signature = (group, p, max_dim, use_hints=true, time_budget_ms=None))]
fn search_jl(
    group: &str,
    p: usize,
    max_dim: usize,
    use_hints: bool,
    time_budget_ms: Option<u64>,
) -> PyResult<(usize, bool)> {
    let ring = Arc::new(jl_ring(&group_of(group)?, p).map_err(value_err)?);
    let out = enumerate_all(&ring, &search_config(max_dim, use_hints, time_budget_ms))
        .map_err(value_err)?;
    Ok((out.reps.len(), out.complete))
}

/// Brute-force class search over the twisted-doubling ring up to max_dim.
#[pyfunction]
#[pyo3(signature = (group, delta, max_dim, allow_odd=false, use_hints=true, time_budget_ms=None))]
fn search_glm(
    group: &str,
    delta: usize,
    max_dim: usize,
    allow_odd: bool,
    use_hints: bool,
    time_budget_ms: Option<u64>,
) -> PyResult<(usize, bool)> {
    let ring = Arc::new(
        glm_ring_with_options(&group_of(group)?, delta, allow_odd).map_err(value_err)?,
    );
    let out = enumerate_all(&ring, &search_config(max_dim, use_hints, time_budget_ms))
        .map_err(value_err)?;
    Ok((out.reps.len(), out.complete))
}

#[pymodule]
fn nimforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(jl_catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(glm_catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(jl_class_count, m)?)?;
    m.add_function(wrap_pyfunction!(glm_class_count, m)?)?;
    m.add_function(wrap_pyfunction!(jl_ring_json, m)?)?;
    m.add_function(wrap_pyfunction!(glm_ring_json, m)?)?;
    m.add_function(wrap_pyfunction!(search_jl, m)?)?;
    m.add_function(wrap_pyfunction!(search_glm, m)?)?;
    Ok(())
}
