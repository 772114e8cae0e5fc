//! Clopen-algebra encoding of finite discrete structures.
//!
//! A finite discrete space has every subset clopen, so its algebra is the
//! full power set. A relation `R` is coded by its complement: the algebra
//! relation holds on a tuple of clopens exactly when their product misses
//! `R`. Decoding recovers the points as the atoms of the algebra and
//! inverts the complement coding, and the encoding is a complete
//! invariant: two discrete structures are isomorphic exactly when their
//! algebras are.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::MetricStructure;
use crate::validate::{Checker, ValidationReport, Violation};

/// Relation of a Boolean structure: tuples of algebra elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolRelation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<u32>>,
}

/// A finite Boolean algebra with relations, given as explicit operation
/// graphs over integer element labels. When produced by
/// [`clopen_algebra`] the labels are subset bitmasks, but decoding and
/// validation trust only the graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanStructure {
    pub elements: Vec<u32>,
    pub zero: u32,
    pub one: u32,
    pub not: BTreeMap<u32, u32>,
    pub and: BTreeMap<(u32, u32), u32>,
    pub or: BTreeMap<(u32, u32), u32>,
    pub relations: BTreeMap<String, BoolRelation>,
}

/// Largest point count accepted by [`clopen_algebra`]; the algebra has
/// `2^n` elements and `4^n` operation-graph entries.
pub const MAX_ENCODE_POINTS: usize = 12;

/// Cap on the total number of relation tuples scanned while encoding,
/// which otherwise grows as `2^(n * arity)`.
const MAX_RELATION_TUPLES: u64 = 1 << 24;

/// Encodes a structure as its full power-set algebra with set operations
/// and complement-coded relations. The metric is forgotten: every subset
/// of a finite discrete space is clopen.
pub fn clopen_algebra(m: &MetricStructure) -> Result<BooleanStructure> {
    let n = m.len();
    if n > MAX_ENCODE_POINTS {
        return Err(Error::GuardExceeded(format!(
            "clopen algebra has 2^{n} elements; structures are capped at {MAX_ENCODE_POINTS} points"
        )));
    }
    let count: u32 = 1 << n;
    let scan: u64 = m
        .relations()
        .values()
        .map(|rel| (count as u64).saturating_pow(rel.arity as u32))
        .sum();
    if scan > MAX_RELATION_TUPLES {
        return Err(Error::GuardExceeded(format!(
            "encoding would scan {scan} element tuples (cap {MAX_RELATION_TUPLES})"
        )));
    }
    let full = count - 1;
    let elements: Vec<u32> = (0..count).collect();
    let mut not = BTreeMap::new();
    let mut and = BTreeMap::new();
    let mut or = BTreeMap::new();
    for &x in &elements {
        not.insert(x, full ^ x);
        for &y in &elements {
            and.insert((x, y), x & y);
            or.insert((x, y), x | y);
        }
    }
    let mut relations = BTreeMap::new();
    for (name, rel) in m.relations() {
        let tuples: BTreeSet<Vec<u32>> = (0..rel.arity)
            .map(|_| 0..count)
            .multi_cartesian_product()
            .filter(|masks| {
                rel.tuples
                    .iter()
                    .all(|t| !t.iter().zip(masks).all(|(&p, &mask)| mask & (1 << p) != 0))
            })
            .collect();
        relations.insert(
            name.clone(),
            BoolRelation {
                arity: rel.arity,
                tuples,
            },
        );
    }
    Ok(BooleanStructure {
        elements,
        zero: 0,
        one: full,
        not,
        and,
        or,
        relations,
    })
}

/// Checks the carrier and graphs, then verifies Booleanness through the
/// atom representation: the element -> atom-set map must be a bijection
/// onto the power set of the atoms transporting all three operations. For
/// finite algebras this characterizes Boolean algebras exactly. Returns
/// the atoms (ascending) on success.
fn analyze(a: &BooleanStructure) -> (ValidationReport, Option<Vec<u32>>) {
    let mut c = Checker::new();
    let elems: BTreeSet<u32> = a.elements.iter().copied().collect();
    if elems.len() != a.elements.len() {
        c.fail("elements", vec![], "duplicate element labels");
    }
    if elems.is_empty() {
        c.fail("elements", vec![], "empty algebra");
        return (c.finish(), None);
    }
    for (what, value) in [("zero", a.zero), ("one", a.one)] {
        if !elems.contains(&value) {
            c.fail("constants", vec![], format!("{what} is not an element"));
        }
    }
    for &x in &elems {
        match a.not.get(&x) {
            Some(y) if elems.contains(y) => {}
            Some(y) => c.fail(
                "not_graph",
                vec![],
                format!("not({x}) = {y} off the carrier"),
            ),
            None => c.fail("not_graph", vec![], format!("negation undefined at {x}")),
        }
        for &y in &elems {
            for (op_name, graph) in [("and", &a.and), ("or", &a.or)] {
                match graph.get(&(x, y)) {
                    Some(z) if elems.contains(z) => {}
                    Some(z) => c.fail(
                        "op_graph",
                        vec![],
                        format!("{op_name}({x}, {y}) = {z} off the carrier"),
                    ),
                    None => c.fail(
                        "op_graph",
                        vec![],
                        format!("{op_name} undefined at ({x}, {y})"),
                    ),
                }
            }
        }
    }
    for (name, rel) in &a.relations {
        for t in &rel.tuples {
            if t.len() != rel.arity {
                c.fail(
                    "relation_tuple",
                    vec![],
                    format!(
                        "relation {name:?}: tuple length {} != arity {}",
                        t.len(),
                        rel.arity
                    ),
                );
            } else if t.iter().any(|e| !elems.contains(e)) {
                c.fail(
                    "relation_tuple",
                    vec![],
                    format!("relation {name:?}: tuple {t:?} references a non-element"),
                );
            }
        }
    }
    let report = c.finish();
    if !report.ok() {
        return (report, None);
    }

    let mut c = Checker::new();
    let leq = |x: u32, y: u32| a.and[&(x, y)] == x;
    let atoms: Vec<u32> = a
        .elements
        .iter()
        .copied()
        .filter(|&x| {
            x != a.zero
                && !a
                    .elements
                    .iter()
                    .any(|&y| y != a.zero && y != x && leq(y, x))
        })
        .collect();
    if atoms.len() > 20 || a.elements.len() != 1usize << atoms.len().min(31) {
        c.fail(
            "boolean",
            vec![],
            format!("{} elements but {} atoms", a.elements.len(), atoms.len()),
        );
        return (c.finish(), None);
    }
    let full = (1u32 << atoms.len()) - 1;
    let atom_set = |x: u32| -> u32 {
        atoms
            .iter()
            .enumerate()
            .filter(|&(_, &atom)| leq(atom, x))
            .fold(0u32, |mask, (i, _)| mask | (1 << i))
    };
    let sets: BTreeMap<u32, u32> = a.elements.iter().map(|&x| (x, atom_set(x))).collect();
    let images: BTreeSet<u32> = sets.values().copied().collect();
    if images.len() != a.elements.len() {
        c.fail("boolean", vec![], "atom-set map is not injective");
        return (c.finish(), None);
    }
    if sets[&a.zero] != 0 {
        c.fail("constants", vec![], "zero is not the bottom element");
    }
    if sets[&a.one] != full {
        c.fail("constants", vec![], "one is not the top element");
    }
    for &x in &a.elements {
        if sets[&a.not[&x]] != full ^ sets[&x] {
            c.fail(
                "complement",
                vec![],
                format!("negation at {x} is not complement"),
            );
        }
        for &y in &a.elements {
            if sets[&a.and[&(x, y)]] != sets[&x] & sets[&y] {
                c.fail("meet", vec![], format!("and({x}, {y}) is not intersection"));
            }
            if sets[&a.or[&(x, y)]] != sets[&x] | sets[&y] {
                c.fail("join", vec![], format!("or({x}, {y}) is not union"));
            }
        }
    }
    let report = c.finish();
    if report.ok() {
        (report, Some(atoms))
    } else {
        (report, None)
    }
}

/// Validates a candidate algebra, reporting every failed axiom.
pub fn validate_boolean(a: &BooleanStructure) -> ValidationReport {
    analyze(a).0
}

/// Decodes an algebra back to a discrete structure: points are the atoms
/// (ascending by label), and a relation holds on a point tuple exactly
/// when the corresponding atom tuple is absent from the algebra relation.
pub fn stone_decode(a: &BooleanStructure) -> Result<MetricStructure> {
    let (report, atoms) = analyze(a);
    let Some(atoms) = atoms else {
        return Err(Error::Invalid(report));
    };
    let m = atoms.len();
    if m == 0 {
        return Err(Error::Invalid(ValidationReport::new(vec![Violation::new(
            "atoms",
            vec![],
            "algebra has no atoms",
        )])));
    }
    let mut s = MetricStructure::discrete(m)?;
    for (name, rel) in &a.relations {
        let tuples: Vec<Vec<usize>> = (0..rel.arity)
            .map(|_| 0..m)
            .multi_cartesian_product()
            .filter(|idx| {
                let atom_tuple: Vec<u32> = idx.iter().map(|&i| atoms[i]).collect();
                !rel.tuples.contains(&atom_tuple)
            })
            .collect();
        s = s.with_relation(name.clone(), rel.arity, tuples)?;
    }
    Ok(s)
}

/// Backtracking search over element bijections preserving the constants,
/// the three operation graphs and every relation; returns the first (in
/// element-index order) isomorphism found, as an index map. Independent
/// of the encode/decode pair, so it serves as the oracle for both.
pub fn boolean_iso_bruteforce(a: &BooleanStructure, b: &BooleanStructure) -> Option<Vec<usize>> {
    if a.elements.len() != b.elements.len() {
        return None;
    }
    let sig_a: BTreeMap<&String, usize> = a.relations.iter().map(|(k, r)| (k, r.arity)).collect();
    let sig_b: BTreeMap<&String, usize> = b.relations.iter().map(|(k, r)| (k, r.arity)).collect();
    if sig_a != sig_b {
        return None;
    }
    let n = a.elements.len();
    let index_of = |g: &BooleanStructure| -> BTreeMap<u32, usize> {
        g.elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect()
    };
    let index_a = index_of(a);
    let index_b = index_of(b);
    let unary = |g: &BooleanStructure, index: &BTreeMap<u32, usize>| -> Vec<usize> {
        g.elements.iter().map(|&x| index[&g.not[&x]]).collect()
    };
    let binary =
        |g: &BooleanStructure, index: &BTreeMap<u32, usize>, graph: &BTreeMap<(u32, u32), u32>| {
            g.elements
                .iter()
                .map(|&x| g.elements.iter().map(|&y| index[&graph[&(x, y)]]).collect())
                .collect::<Vec<Vec<usize>>>()
        };
    let not_a = unary(a, &index_a);
    let not_b = unary(b, &index_b);
    let and_a = binary(a, &index_a, &a.and);
    let and_b = binary(b, &index_b, &b.and);
    let or_a = binary(a, &index_a, &a.or);
    let or_b = binary(b, &index_b, &b.or);
    let rels: Vec<(usize, BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>)> = a
        .relations
        .iter()
        .map(|(name, ra)| {
            let rb = &b.relations[name];
            let to_idx = |tuples: &BTreeSet<Vec<u32>>, index: &BTreeMap<u32, usize>| {
                tuples
                    .iter()
                    .map(|t| t.iter().map(|e| index[e]).collect::<Vec<usize>>())
                    .collect::<BTreeSet<_>>()
            };
            (
                ra.arity,
                to_idx(&ra.tuples, &index_a),
                to_idx(&rb.tuples, &index_b),
            )
        })
        .collect();
    struct Search {
        not_a: Vec<usize>,
        not_b: Vec<usize>,
        and_a: Vec<Vec<usize>>,
        and_b: Vec<Vec<usize>>,
        or_a: Vec<Vec<usize>>,
        or_b: Vec<Vec<usize>>,
        rels: Vec<(usize, BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>)>,
        constants: [(usize, usize); 2],
        assigned: Vec<usize>,
        used: Vec<bool>,
    }

    impl Search {
        fn extend(&mut self) -> Option<Vec<usize>> {
            let n = self.not_a.len();
            if self.assigned.len() == n {
                return Some(self.assigned.clone());
            }
            'candidates: for candidate in 0..n {
                if self.used[candidate] {
                    continue;
                }
                let k = self.assigned.len();
                for &(ca, cb) in &self.constants {
                    if (k == ca) != (candidate == cb) {
                        continue 'candidates;
                    }
                }
                self.used[candidate] = true;
                self.assigned.push(candidate);
                if self.graphs_consistent() && self.relations_consistent() {
                    if let Some(found) = self.extend() {
                        return Some(found);
                    }
                }
                self.assigned.pop();
                self.used[candidate] = false;
            }
            None
        }

        fn graphs_consistent(&self) -> bool {
            let assigned = &self.assigned;
            let k = assigned.len() - 1;
            for i in 0..=k {
                if self.not_a[i] <= k && self.not_b[assigned[i]] != assigned[self.not_a[i]] {
                    return false;
                }
                for j in 0..=k {
                    let m = self.and_a[i][j];
                    if m <= k && self.and_b[assigned[i]][assigned[j]] != assigned[m] {
                        return false;
                    }
                    let m = self.or_a[i][j];
                    if m <= k && self.or_b[assigned[i]][assigned[j]] != assigned[m] {
                        return false;
                    }
                }
            }
            true
        }

        fn relations_consistent(&self) -> bool {
            let assigned = &self.assigned;
            let k = assigned.len() - 1;
            for (arity, ra, rb) in &self.rels {
                for q in (0..*arity).map(|_| 0..=k).multi_cartesian_product() {
                    if !q.contains(&k) {
                        continue;
                    }
                    let mapped: Vec<usize> = q.iter().map(|&i| assigned[i]).collect();
                    if ra.contains(&q) != rb.contains(&mapped) {
                        return false;
                    }
                }
            }
            true
        }
    }

    let mut search = Search {
        constants: [
            (index_a[&a.zero], index_b[&b.zero]),
            (index_a[&a.one], index_b[&b.one]),
        ],
        not_a,
        not_b,
        and_a,
        and_b,
        or_a,
        or_b,
        rels,
        assigned: Vec::with_capacity(n),
        used: vec![false; n],
    };
    search.extend()
}

/// Counts the encoded relation by inclusion–exclusion over subsets of the
/// point relation — an independent route to `|R^A|`.
pub fn relation_count_by_inclusion_exclusion(m: &MetricStructure, name: &str) -> Result<i64> {
    let rel = m.relation(name)?;
    let tuples: Vec<&Vec<usize>> = rel.tuples.iter().collect();
    if tuples.len() > 20 {
        return Err(Error::GuardExceeded(
            "inclusion-exclusion over more than 2^20 subsets".into(),
        ));
    }
    let n = m.len();
    let mut total: i64 = 0;
    for mask in 0u32..(1 << tuples.len()) {
        let mut projections = vec![BTreeSet::new(); rel.arity];
        let mut picked = 0u32;
        for (i, t) in tuples.iter().enumerate() {
            if mask & (1 << i) != 0 {
                picked += 1;
                for (pos, &p) in t.iter().enumerate() {
                    projections[pos].insert(p);
                }
            }
        }
        let mut term: i64 = 1;
        for proj in &projections {
            term *= 1i64 << (n - proj.len());
        }
        total += if picked % 2 == 0 { term } else { -term };
    }
    Ok(total)
}
