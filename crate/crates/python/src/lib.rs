//! Python bindings: the main types and operations behind a thin JSON and
//! string-rational boundary, so Python sees exact values.
//!
//! Rationals cross as strings ("3/4"), structures as wrapper classes with
//! JSON round-trips, witnesses as index lists.

use std::collections::BTreeSet;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cms_core::bilipschitz::{self, Distortion};
use cms_core::embeddings;
use cms_core::error::Error;
use cms_core::gen;
use cms_core::groups;
use cms_core::heaps;
use cms_core::isometry;
use cms_core::json;
use cms_core::rational::{format_rat, parse_rat};
use cms_core::stone;
use cms_core::structure::{MetricStructure, Radius};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite metric structure with named relations.
#[pyclass]
struct Structure {
    inner: MetricStructure,
}

#[pymethods]
impl Structure {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Structure {
            inner: json::structure_from_json(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn discrete(n: usize) -> PyResult<Self> {
        Ok(Structure {
            inner: MetricStructure::discrete(n).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        json::structure_to_json(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<String> {
        self.inner.points().to_vec()
    }

    fn dist(&self, i: usize, j: usize) -> PyResult<String> {
        if i >= self.inner.len() || j >= self.inner.len() {
            return Err(PyValueError::new_err("point index out of range"));
        }
        Ok(format_rat(self.inner.dist(i, j)))
    }

    fn diameter(&self) -> String {
        format_rat(&self.inner.diameter())
    }

    fn with_relation(&self, name: &str, arity: usize, tuples: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Structure {
            inner: self.inner.with_relation(name, arity, tuples).map_err(err)?,
        })
    }

    fn scale(&self, factor: &str) -> PyResult<Self> {
        let factor = parse_rat(factor).map_err(err)?;
        Ok(Structure {
            inner: self.inner.scale_metric(&factor).map_err(err)?,
        })
    }

    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        Ok(Structure {
            inner: self.inner.relabel(&perm).map_err(err)?,
        })
    }

    fn product_metric(&self, a: Vec<usize>, b: Vec<usize>) -> PyResult<String> {
        Ok(format_rat(&self.inner.product_metric(&a, &b).map_err(err)?))
    }

    fn covering_radius(&self, subset: Vec<usize>) -> PyResult<String> {
        Ok(format_rat(
            &self.inner.covering_radius(&subset).map_err(err)?,
        ))
    }

    /// None means no finite radius (empty marked set, nonempty relation).
    fn relation_covering_radius(
        &self,
        name: &str,
        marked: Vec<Vec<usize>>,
    ) -> PyResult<Option<String>> {
        let marked: BTreeSet<Vec<usize>> = marked.into_iter().collect();
        match self
            .inner
            .relation_covering_radius(name, &marked)
            .map_err(err)?
        {
            Radius::Finite(r) => Ok(Some(format_rat(&r))),
            Radius::Infinite => Ok(None),
        }
    }
}

/// A finite group as a Cayley table.
#[pyclass]
struct Group {
    inner: groups::FiniteGroup,
}

#[pymethods]
impl Group {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Group {
            inner: json::group_from_json(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        Ok(Group {
            inner: groups::FiniteGroup::cyclic(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn dihedral(m: usize) -> PyResult<Self> {
        Ok(Group {
            inner: groups::FiniteGroup::dihedral(m).map_err(err)?,
        })
    }

    #[staticmethod]
    fn quaternion8() -> PyResult<Self> {
        Ok(Group {
            inner: groups::FiniteGroup::quaternion8().map_err(err)?,
        })
    }

    #[staticmethod]
    fn direct_product(a: &Group, b: &Group) -> PyResult<Self> {
        Ok(Group {
            inner: groups::FiniteGroup::direct_product(&a.inner, &b.inner).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        json::group_to_json(&self.inner)
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn identity(&self) -> usize {
        self.inner.identity()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        if a >= self.inner.order() || b >= self.inner.order() {
            return Err(PyValueError::new_err("element index out of range"));
        }
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        if a >= self.inner.order() {
            return Err(PyValueError::new_err("element index out of range"));
        }
        Ok(self.inner.inv(a))
    }

    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        Ok(Group {
            inner: self.inner.relabel(&perm).map_err(err)?,
        })
    }

    fn mult_graph(&self) -> Vec<Vec<usize>> {
        groups::mult_graph(&self.inner).into_iter().collect()
    }

    /// Word-metric length function for the given symmetric weighted
    /// generators (inverses are filled in automatically).
    fn word_metric(&self, gens: Vec<usize>, weights: Vec<String>) -> PyResult<Vec<String>> {
        let generators =
            json::weighted_generators_from_lists(&self.inner, &gens, &weights).map_err(err)?;
        let rho = groups::weighted_word_metric(&self.inner, &generators).map_err(err)?;
        Ok(rho.lengths().iter().map(format_rat).collect())
    }

    fn roelcke_structure(&self, gens: Vec<usize>, weights: Vec<String>) -> PyResult<Structure> {
        let generators =
            json::weighted_generators_from_lists(&self.inner, &gens, &weights).map_err(err)?;
        let rho = groups::weighted_word_metric(&self.inner, &generators).map_err(err)?;
        Ok(Structure {
            inner: groups::roelcke_structure(&self.inner, &rho).map_err(err)?,
        })
    }

    fn translation_structure(&self, a: usize, b: usize, subset: Vec<usize>) -> PyResult<Structure> {
        let subset: BTreeSet<usize> = subset.into_iter().collect();
        Ok(Structure {
            inner: groups::translation_structure(&self.inner, a, b, &subset).map_err(err)?,
        })
    }

    fn translation_equiv(
        &self,
        a: usize,
        b: usize,
        set_a: Vec<usize>,
        set_b: Vec<usize>,
    ) -> PyResult<Option<usize>> {
        let set_a: BTreeSet<usize> = set_a.into_iter().collect();
        let set_b: BTreeSet<usize> = set_b.into_iter().collect();
        groups::decide_translation_equiv(&self.inner, a, b, &set_a, &set_b).map_err(err)
    }

    fn isomorphic_to(&self, other: &Group) -> Option<Vec<usize>> {
        groups::group_isomorphism(&self.inner, &other.inner)
    }
}

/// A finite heap as its ternary operation table.
#[pyclass]
struct Heap {
    inner: heaps::HeapTable,
}

#[pymethods]
impl Heap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Heap {
            inner: json::heap_from_json(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_group(g: &Group) -> Self {
        Heap {
            inner: heaps::heap_from_group(&g.inner),
        }
    }

    fn to_json(&self) -> String {
        json::heap_to_json(&self.inner)
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn op(&self, x: usize, y: usize, z: usize) -> PyResult<usize> {
        let n = self.inner.order();
        if x >= n || y >= n || z >= n {
            return Err(PyValueError::new_err("heap index out of range"));
        }
        Ok(self.inner.op(x, y, z))
    }

    fn to_group(&self, e: usize) -> PyResult<Group> {
        Ok(Group {
            inner: heaps::group_from_heap(&self.inner, e).map_err(err)?,
        })
    }

    fn base_change(&self, e: usize, a: usize) -> PyResult<Vec<usize>> {
        heaps::base_change_iso(&self.inner, e, a).map_err(err)
    }

    fn graph(&self) -> Vec<Vec<usize>> {
        heaps::heap_graph(&self.inner).into_iter().collect()
    }

    fn structure(&self) -> PyResult<Structure> {
        Ok(Structure {
            inner: heaps::heap_structure(&self.inner).map_err(err)?,
        })
    }

    fn subheaps(&self) -> PyResult<Vec<Vec<usize>>> {
        heaps::subheaps(&self.inner).map_err(err)
    }

    /// Splits a heap isomorphism as (a, beta) with alpha = lambda_a . beta.
    fn decompose_iso(
        &self,
        other: &Heap,
        alpha: Vec<usize>,
        e: usize,
        e2: usize,
    ) -> PyResult<(usize, Vec<usize>)> {
        let d = heaps::decompose_heap_iso(&self.inner, &other.inner, &alpha, e, e2).map_err(err)?;
        Ok((d.a, d.beta))
    }
}

#[pyfunction]
fn decide_isometric_iso(x: &Structure, y: &Structure) -> PyResult<Option<Vec<usize>>> {
    isometry::decide_isometric_iso(&x.inner, &y.inner).map_err(err)
}

#[pyfunction]
fn brute_force_isometric_iso(x: &Structure, y: &Structure) -> PyResult<Option<Vec<usize>>> {
    isometry::brute_force_isometric_iso(&x.inner, &y.inner).map_err(err)
}

#[pyfunction]
fn signature_json(x: &Structure) -> String {
    json::signature_to_json(&isometry::full_signature(&x.inner))
}

/// Distance matrices of `C_zeta` as nested lists of rational strings,
/// given the pattern as JSON: `{"n": 2, "constraints": {"R": [[1]]}}`.
#[pyfunction]
fn compute_c_zeta(x: &Structure, zeta_json: &str) -> PyResult<Vec<Vec<Vec<String>>>> {
    let zeta = json::zeta_from_json(zeta_json).map_err(err)?;
    let set = isometry::compute_c_zeta(&x.inner, &zeta).map_err(err)?;
    Ok(set
        .matrices()
        .iter()
        .map(|m| {
            m.entries()
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect()
        })
        .collect())
}

/// Optimal bi-Lipschitz distortion as a rational string, or None when no
/// relation-preserving bijection exists.
#[pyfunction]
fn optimal_distortion(x: &Structure, y: &Structure) -> PyResult<Option<String>> {
    match bilipschitz::optimal_distortion(&x.inner, &y.inner).map_err(err)? {
        Distortion::Finite(c) => Ok(Some(format_rat(&c))),
        Distortion::None => Ok(None),
    }
}

/// Dominance at constant `c`; patterns come as JSON, or None for the
/// canonical pattern of `x`.
#[pyfunction]
#[pyo3(signature = (x, y, c, patterns_json=None))]
fn dominates(x: &Structure, y: &Structure, c: &str, patterns_json: Option<&str>) -> PyResult<bool> {
    let c = parse_rat(c).map_err(err)?;
    let patterns = match patterns_json {
        Some(text) => json::patterns_from_json(text).map_err(err)?,
        None => vec![bilipschitz::canonical_pattern(&x.inner)],
    };
    bilipschitz::dominates(&x.inner, &y.inner, &c, &patterns).map_err(err)
}

#[pyfunction]
fn canonical_pattern_json(x: &Structure) -> String {
    json::patterns_to_json(&[bilipschitz::canonical_pattern(&x.inner)])
}

#[pyfunction]
fn stone_encode(x: &Structure) -> PyResult<String> {
    Ok(json::boolean_to_json(
        &stone::clopen_algebra(&x.inner).map_err(err)?,
    ))
}

#[pyfunction]
fn stone_decode(algebra_json: &str) -> PyResult<Structure> {
    let a = json::boolean_from_json(algebra_json).map_err(err)?;
    Ok(Structure {
        inner: stone::stone_decode(&a).map_err(err)?,
    })
}

#[pyfunction]
fn boolean_iso(a_json: &str, b_json: &str) -> PyResult<Option<Vec<usize>>> {
    let a = json::boolean_from_json(a_json).map_err(err)?;
    let b = json::boolean_from_json(b_json).map_err(err)?;
    Ok(stone::boolean_iso_bruteforce(&a, &b))
}

/// Kuratowski embedding as a list of coordinate lists (rational strings).
#[pyfunction]
fn kuratowski_embed(x: &Structure, dims: usize) -> PyResult<Vec<Vec<String>>> {
    let image = embeddings::kuratowski_embed(&x.inner, dims).map_err(err)?;
    Ok(image
        .iter()
        .map(|p| p.coords().iter().map(format_rat).collect())
        .collect())
}

fn cube_point(coords: Vec<String>) -> PyResult<embeddings::CubePoint> {
    let coords = coords
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    embeddings::CubePoint::new(coords).map_err(err)
}

#[pyfunction]
fn cube_metric(a: Vec<String>, b: Vec<String>) -> PyResult<String> {
    let d = embeddings::cube_metric(&cube_point(a)?, &cube_point(b)?).map_err(err)?;
    Ok(format_rat(&d))
}

#[pyfunction]
fn iota(coords: Vec<String>) -> PyResult<Vec<String>> {
    let squeezed = embeddings::iota(&cube_point(coords)?);
    Ok(squeezed.coords().iter().map(format_rat).collect())
}

/// Seeded random structure as JSON; signature is a list of (name, arity).
#[pyfunction]
fn random_structure_json(
    seed: u64,
    max_points: usize,
    signature: Vec<(String, usize)>,
    tuple_probability: f64,
) -> String {
    let mut rng = gen::rng_from_seed(seed);
    let s = gen::random_structure(&mut rng, max_points, &signature, tuple_probability);
    json::structure_to_json(&s)
}

#[pymodule]
fn cmspy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Structure>()?;
    m.add_class::<Group>()?;
    m.add_class::<Heap>()?;
    m.add_function(wrap_pyfunction!(decide_isometric_iso, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_isometric_iso, m)?)?;
    m.add_function(wrap_pyfunction!(signature_json, m)?)?;
    m.add_function(wrap_pyfunction!(compute_c_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_distortion, m)?)?;
    m.add_function(wrap_pyfunction!(dominates, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_pattern_json, m)?)?;
    m.add_function(wrap_pyfunction!(stone_encode, m)?)?;
    m.add_function(wrap_pyfunction!(stone_decode, m)?)?;
    m.add_function(wrap_pyfunction!(boolean_iso, m)?)?;
    m.add_function(wrap_pyfunction!(kuratowski_embed, m)?)?;
    m.add_function(wrap_pyfunction!(cube_metric, m)?)?;
    m.add_function(wrap_pyfunction!(iota, m)?)?;
    m.add_function(wrap_pyfunction!(random_structure_json, m)?)?;
    Ok(())
}
