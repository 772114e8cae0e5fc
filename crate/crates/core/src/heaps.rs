//! Heaps: ternary coset algebra and its correspondence with groups.
//!
//! A heap is a set with a ternary operation satisfying para-associativity
//! `[[a,b,c],d,e] = [a,b,[c,d,e]]` and the identity law
//! `[a,a,b] = [b,a,a] = b`. Groups and pointed heaps translate back and
//! forth via `[x,y,z] = x y^{-1} z` and `x*y = [x,e,y]`, and the two
//! constructions invert each other exactly.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::structure::MetricStructure;
use crate::validate::{Checker, ValidationReport};

/// Relation name used for heap graphs in encoded structures.
pub const HEAP_RELATION: &str = "op";

/// A finite heap as its full ternary operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeapTable {
    order: usize,
    op: Vec<usize>,
}

/// Exhaustively checks both heap axioms (`n^5` and `n^2` instances),
/// reporting witnesses for each failure.
pub fn validate_heap(order: usize, op: &[usize]) -> ValidationReport {
    let mut c = Checker::new();
    let n = order;
    if n == 0 {
        c.fail("nonempty", vec![], "empty carrier");
        return c.finish();
    }
    if op.len() != n * n * n {
        c.fail(
            "shape",
            vec![],
            format!("table has {} entries, expected {}", op.len(), n * n * n),
        );
        return c.finish();
    }
    if let Some(pos) = op.iter().position(|&v| v >= n) {
        c.fail(
            "closure",
            vec![pos],
            format!("entry {} out of range", op[pos]),
        );
        return c.finish();
    }
    let at = |x: usize, y: usize, z: usize| op[(x * n + y) * n + z];
    for a in 0..n {
        for b in 0..n {
            if at(a, a, b) != b {
                c.fail("identity_law", vec![a, b], "[a,a,b] != b");
            }
            if at(b, a, a) != b {
                c.fail("identity_law", vec![a, b], "[b,a,a] != b");
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                for e in 0..n {
                    for f in 0..n {
                        if at(at(a, b, d), e, f) != at(a, b, at(d, e, f)) {
                            c.fail(
                                "para_associativity",
                                vec![a, b, d, e, f],
                                "[[a,b,c],d,e] != [a,b,[c,d,e]]",
                            );
                        }
                    }
                }
            }
        }
    }
    c.finish()
}

impl HeapTable {
    /// Validating constructor from a flat `n^3` table in `[x][y][z]` order.
    pub fn from_op(order: usize, op: Vec<usize>) -> Result<Self> {
        let report = validate_heap(order, &op);
        if !report.ok() {
            return Err(Error::Invalid(report));
        }
        Ok(HeapTable { order, op })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn op(&self, x: usize, y: usize, z: usize) -> usize {
        self.op[(x * self.order + y) * self.order + z]
    }

    pub fn raw(&self) -> &[usize] {
        &self.op
    }
}

/// The heap `[x,y,z] = x y^{-1} z` of a group.
pub fn heap_from_group(g: &FiniteGroup) -> HeapTable {
    let n = g.order();
    let mut op = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                op.push(g.mul(g.mul(x, g.inv(y)), z));
            }
        }
    }
    HeapTable::from_op(n, op).expect("group heap satisfies the heap axioms")
}

/// The group `x*y = [x,e,y]` with chosen identity `e` and inverse
/// `x^{-1} = [e,x,e]`.
pub fn group_from_heap(h: &HeapTable, e: usize) -> Result<FiniteGroup> {
    if e >= h.order() {
        return Err(Error::IndexOutOfBounds {
            what: "identity choice",
            index: e,
            size: h.order(),
        });
    }
    let n = h.order();
    let table = (0..n)
        .map(|x| (0..n).map(|y| h.op(x, e, y)).collect())
        .collect();
    FiniteGroup::from_table(table)
}

/// The base-change translation `x -> [a,e,x]`, verified to be a group
/// isomorphism from the group at `e` to the group at `a`, together with
/// the identity `x *_a y = x *_e a^{-1} *_e y` on all pairs. A failure
/// here signals a bug, not a valid outcome.
pub fn base_change_iso(h: &HeapTable, e: usize, a: usize) -> Result<Vec<usize>> {
    let n = h.order();
    for &x in &[e, a] {
        if x >= n {
            return Err(Error::IndexOutOfBounds {
                what: "heap element",
                index: x,
                size: n,
            });
        }
    }
    let lambda: Vec<usize> = (0..n).map(|x| h.op(a, e, x)).collect();
    let mut seen = vec![false; n];
    for &y in &lambda {
        if seen[y] {
            return Err(Error::Internal("base-change map is not a bijection".into()));
        }
        seen[y] = true;
    }
    let mul_e = |x: usize, y: usize| h.op(x, e, y);
    let mul_a = |x: usize, y: usize| h.op(x, a, y);
    let a_inv = h.op(e, a, e);
    for x in 0..n {
        for y in 0..n {
            if lambda[mul_e(x, y)] != mul_a(lambda[x], lambda[y]) {
                return Err(Error::Internal(format!(
                    "base-change map fails to be a homomorphism at ({x}, {y})"
                )));
            }
            if mul_a(x, y) != mul_e(mul_e(x, a_inv), y) {
                return Err(Error::Internal(format!(
                    "x *_a y != x a^-1 y at ({x}, {y})"
                )));
            }
        }
    }
    Ok(lambda)
}

/// Graph of the heap operation: all `n^3` quadruples `(x,y,z,[x,y,z])`.
pub fn heap_graph(h: &HeapTable) -> BTreeSet<Vec<usize>> {
    let n = h.order();
    let mut quads = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                quads.insert(vec![x, y, z, h.op(x, y, z)]);
            }
        }
    }
    quads
}

/// The heap as a discrete metric structure with its 4-ary graph, so the
/// generic structure decider decides heap isomorphism.
pub fn heap_structure(h: &HeapTable) -> Result<MetricStructure> {
    MetricStructure::discrete(h.order())?.with_relation(HEAP_RELATION, 4, heap_graph(h))
}

/// All nonempty subsets closed under the heap operation, each sorted,
/// listed in lexicographic order. These are exactly the cosets of
/// subgroups of any induced group.
pub fn subheaps(h: &HeapTable) -> Result<Vec<Vec<usize>>> {
    let n = h.order();
    if n > 16 {
        return Err(Error::GuardExceeded(format!(
            "subheap enumeration scans 2^n subsets; order {n} > 16"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let closed = members.iter().all(|&x| {
            members
                .iter()
                .all(|&y| members.iter().all(|&z| mask & (1 << h.op(x, y, z)) != 0))
        });
        if closed {
            out.push(members);
        }
    }
    out.sort();
    Ok(out)
}

/// A heap isomorphism split through a chosen pair of identities:
/// `alpha = lambda_a . beta` with `a = alpha(e)` and `beta` a group
/// isomorphism between the induced groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeapIsoDecomposition {
    /// Target element translating the group isomorphism: `alpha(e)`.
    pub a: usize,
    /// Group isomorphism `(H, *_e) -> (H', *_{e'})`.
    pub beta: Vec<usize>,
}

/// Splits a verified heap isomorphism `alpha: h -> h2` as a left
/// translation composed with a group isomorphism between the groups
/// induced at `e` and `e2`, and re-verifies the factorization exactly.
pub fn decompose_heap_iso(
    h: &HeapTable,
    h2: &HeapTable,
    alpha: &[usize],
    e: usize,
    e2: usize,
) -> Result<HeapIsoDecomposition> {
    let n = h.order();
    if h2.order() != n || alpha.len() != n {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: n,
        });
    }
    if e >= n || e2 >= n {
        return Err(Error::IndexOutOfBounds {
            what: "identity choice",
            index: e.max(e2),
            size: n,
        });
    }
    let mut seen = vec![false; n];
    for &y in alpha {
        if y >= n || seen[y] {
            return Err(Error::InvalidParameter("alpha is not a bijection".into()));
        }
        seen[y] = true;
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if alpha[h.op(x, y, z)] != h2.op(alpha[x], alpha[y], alpha[z]) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha is not a heap isomorphism at ({x}, {y}, {z})"
                    )));
                }
            }
        }
    }
    let mul2 = |x: usize, y: usize| h2.op(x, e2, y);
    let a = alpha[e];
    let a_inv = h2.op(e2, a, e2);
    let beta: Vec<usize> = (0..n).map(|x| mul2(a_inv, alpha[x])).collect();
    if beta[e] != e2 {
        return Err(Error::Internal("beta does not fix the identity".into()));
    }
    let mul1 = |x: usize, y: usize| h.op(x, e, y);
    for x in 0..n {
        for y in 0..n {
            if beta[mul1(x, y)] != mul2(beta[x], beta[y]) {
                return Err(Error::Internal(format!(
                    "beta fails to be a homomorphism at ({x}, {y})"
                )));
            }
        }
        if alpha[x] != mul2(a, beta[x]) {
            return Err(Error::Internal(format!("alpha != lambda_a . beta at {x}")));
        }
    }
    Ok(HeapIsoDecomposition { a, beta })
}
