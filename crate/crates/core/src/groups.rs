//! Finite groups and their encodings as metric structures.
//!
//! A group enters as a Cayley table and leaves as a structure in one of
//! three ways: the Roelcke metric with the multiplication graph, a
//! one-point compactification of a pointed space via reciprocal lengths,
//! or a translation graph over the discrete metric. Left-invariant metrics
//! are built as weighted word metrics, which guarantees their axioms.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::isometry::decide_isometric_iso;
use crate::rational::{rat_int, Rat};
use crate::structure::{DistanceMatrix, MetricStructure, Relation};
use crate::validate::{Checker, ValidationReport};

/// Relation name used for multiplication graphs in encoded structures.
pub const MULT_RELATION: &str = "mult";
/// Relation name marking the added point of a compactification.
pub const STAR_RELATION: &str = "star";

/// A finite group given by its Cayley table, with identity and inverses
/// precomputed. Constructors reject anything that is not a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Exhaustively checks the group axioms on a raw table, reporting every
/// violation with witnesses.
pub fn validate_group(table: &[Vec<usize>]) -> ValidationReport {
    let mut c = Checker::new();
    let n = table.len();
    if n == 0 {
        c.fail("nonempty", vec![], "empty table");
        return c.finish();
    }
    let mut shaped = true;
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            c.fail("shape", vec![i], format!("row has length {}", row.len()));
            shaped = false;
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                c.fail("closure", vec![i, j], format!("entry {v} out of range"));
                shaped = false;
            }
        }
    }
    if !shaped {
        return c.finish();
    }
    let identity = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x));
    match identity {
        None => c.fail("identity", vec![], "no two-sided identity element"),
        Some(e) => {
            for g in 0..n {
                if !(0..n).any(|h| table[g][h] == e && table[h][g] == e) {
                    c.fail("inverse", vec![g], "no two-sided inverse");
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                if table[table[a][b]][d] != table[a][table[b][d]] {
                    c.fail("associativity", vec![a, b, d], "(ab)c != a(bc)");
                }
            }
        }
    }
    c.finish()
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_group(&table);
        if !report.ok() {
            return Err(Error::Invalid(report));
        }
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .expect("validated identity");
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .expect("validated inverse")
            })
            .collect();
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Cyclic group of order `n` on `{0..n-1}` with addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group of order 0".into()));
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_table(table)
    }

    /// Dihedral group of order `2m`: element `j*m + i` is `r^i s^j`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "dihedral group needs m >= 1".into(),
            ));
        }
        let n = 2 * m;
        let idx = |i: usize, j: usize| j * m + (i % m);
        let mut table = vec![vec![0usize; n]; n];
        for i1 in 0..m {
            for j1 in 0..2 {
                for i2 in 0..m {
                    for j2 in 0..2 {
                        // (r^i1 s^j1)(r^i2 s^j2) = r^(i1 + (-1)^j1 i2) s^(j1+j2)
                        let i = if j1 == 0 { i1 + i2 } else { i1 + m - (i2 % m) };
                        table[idx(i1, j1)][idx(i2, j2)] = idx(i % m, (j1 + j2) % 2);
                    }
                }
            }
        }
        FiniteGroup::from_table(table)
    }

    /// The quaternion group of order 8; elements in the order
    /// `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion8() -> Result<Self> {
        // Encode q = s * b where b in {1, i, j, k} (index 0..4) and s a sign.
        let to_idx = |b: usize, neg: bool| 2 * b + usize::from(neg);
        let mut table = vec![vec![0usize; 8]; 8];
        // Multiplication on {1,i,j,k} with resulting sign.
        let base_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) => (x, false),
                (x, 0) => (x, false),
                (1, 1) => (0, true),
                (1, 2) => (3, false),
                (1, 3) => (2, true),
                (2, 1) => (3, true),
                (2, 2) => (0, true),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (3, 2) => (1, true),
                (3, 3) => (0, true),
                _ => unreachable!(),
            }
        };
        for a in 0..4 {
            for sa in [false, true] {
                for b in 0..4 {
                    for sb in [false, true] {
                        let (c, sc) = base_mul(a, b);
                        table[to_idx(a, sa)][to_idx(b, sb)] = to_idx(c, sa ^ sb ^ sc);
                    }
                }
            }
        }
        FiniteGroup::from_table(table)
    }

    /// Direct product, with element `a * |h| + b` for `(a, b)`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let n = g.order * h.order;
        let idx = |a: usize, b: usize| a * h.order + b;
        let mut table = vec![vec![0usize; n]; n];
        for a1 in 0..g.order {
            for b1 in 0..h.order {
                for a2 in 0..g.order {
                    for b2 in 0..h.order {
                        table[idx(a1, b1)][idx(a2, b2)] = idx(g.mul(a1, a2), h.mul(b1, b2));
                    }
                }
            }
        }
        FiniteGroup::from_table(table)
    }

    /// Group with elements renumbered by `perm` (`perm[new] = old`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: n,
            });
        }
        let mut position = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || position[old] != usize::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            position[old] = new;
        }
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| position[self.mul(perm[x], perm[y])])
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table)
    }

    /// All isomorphism types of order at most 8, keyed by a short name.
    pub fn catalog_up_to_8() -> Vec<(String, FiniteGroup)> {
        let c = |n: usize| FiniteGroup::cyclic(n).expect("cyclic");
        let prod =
            |a: &FiniteGroup, b: &FiniteGroup| FiniteGroup::direct_product(a, b).expect("product");
        let c2 = c(2);
        let c4 = c(4);
        vec![
            ("Z1".into(), c(1)),
            ("Z2".into(), c(2)),
            ("Z3".into(), c(3)),
            ("Z4".into(), c(4)),
            ("Z2xZ2".into(), prod(&c2, &c2)),
            ("Z5".into(), c(5)),
            ("Z6".into(), c(6)),
            ("S3".into(), FiniteGroup::dihedral(3).expect("dihedral")),
            ("Z7".into(), c(7)),
            ("Z8".into(), c(8)),
            ("Z4xZ2".into(), prod(&c4, &c2)),
            ("Z2xZ2xZ2".into(), prod(&prod(&c2, &c2), &c2)),
            ("D4".into(), FiniteGroup::dihedral(4).expect("dihedral")),
            ("Q8".into(), FiniteGroup::quaternion8().expect("quaternion")),
        ]
    }

    /// The five isomorphism types of order 8.
    pub fn catalog_order_8() -> Vec<(String, FiniteGroup)> {
        FiniteGroup::catalog_up_to_8()
            .into_iter()
            .filter(|(_, g)| g.order() == 8)
            .collect()
    }
}

/// Brute-force group isomorphism: scans bijections in lexicographic order
/// for one with `f(ab) = f(a)f(b)` everywhere.
pub fn group_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order != h.order {
        return None;
    }
    let n = g.order;
    'outer: for f in (0..n).permutations(n) {
        for a in 0..n {
            for b in 0..n {
                if f[g.mul(a, b)] != h.mul(f[a], f[b]) {
                    continue 'outer;
                }
            }
        }
        return Some(f);
    }
    None
}

/// Left-invariant metric represented by its length function:
/// `d(g, h) = rho(g^{-1} h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftInvariantMetric {
    length: Vec<Rat>,
}

impl LeftInvariantMetric {
    /// Checks all length-function axioms against `g` and rejects on any
    /// violation.
    pub fn new(g: &FiniteGroup, length: Vec<Rat>) -> Result<Self> {
        let report = Self::validate(g, &length);
        if !report.ok() {
            return Err(Error::Invalid(report));
        }
        Ok(LeftInvariantMetric { length })
    }

    pub fn validate(g: &FiniteGroup, length: &[Rat]) -> ValidationReport {
        let mut c = Checker::new();
        let n = g.order();
        if length.len() != n {
            c.fail(
                "shape",
                vec![],
                format!("{} lengths for order {n}", length.len()),
            );
            return c.finish();
        }
        let zero = rat_int(0);
        if length[g.identity()] != zero {
            c.fail("identity_length", vec![g.identity()], "rho(e) != 0");
        }
        for x in 0..n {
            if x != g.identity() && length[x] <= zero {
                c.fail("positivity", vec![x], "rho(g) <= 0 for g != e");
            }
            if length[x] != length[g.inv(x)] {
                c.fail("inverse_symmetry", vec![x], "rho(g) != rho(g^-1)");
            }
        }
        for x in 0..n {
            for y in 0..n {
                if length[g.mul(x, y)] > &length[x] + &length[y] {
                    c.fail("subadditivity", vec![x, y], "rho(gh) > rho(g) + rho(h)");
                }
            }
        }
        c.finish()
    }

    pub fn length(&self, x: usize) -> &Rat {
        &self.length[x]
    }

    pub fn lengths(&self) -> &[Rat] {
        &self.length
    }

    pub fn distance(&self, g: &FiniteGroup, x: usize, y: usize) -> Rat {
        self.length[g.mul(g.inv(x), y)].clone()
    }
}

/// Generating set closed under inverses with symmetric positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGenerators {
    weights: BTreeMap<usize, Rat>,
}

impl WeightedGenerators {
    pub fn new(g: &FiniteGroup, weights: BTreeMap<usize, Rat>) -> Result<Self> {
        let zero = rat_int(0);
        for (&s, w) in &weights {
            if s >= g.order() {
                return Err(Error::IndexOutOfBounds {
                    what: "generator",
                    index: s,
                    size: g.order(),
                });
            }
            if *w <= zero {
                return Err(Error::InvalidParameter(format!(
                    "generator {s} has non-positive weight {w}"
                )));
            }
            match weights.get(&g.inv(s)) {
                Some(w_inv) if w_inv == w => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "generator set not inverse-symmetric at {s}"
                    )))
                }
            }
        }
        Ok(WeightedGenerators { weights })
    }

    pub fn weights(&self) -> &BTreeMap<usize, Rat> {
        &self.weights
    }
}

/// Least total weight of a factorization into generators, as a length
/// function: Dijkstra over the weighted Cayley graph from the identity.
/// Errors if some element is unreachable.
pub fn weighted_word_metric(
    g: &FiniteGroup,
    gens: &WeightedGenerators,
) -> Result<LeftInvariantMetric> {
    let n = g.order();
    let mut dist: Vec<Option<Rat>> = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(Rat, usize)>> = BinaryHeap::new();
    dist[g.identity()] = Some(rat_int(0));
    heap.push(Reverse((rat_int(0), g.identity())));
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x].as_ref() != Some(&d) {
            continue;
        }
        for (&s, w) in gens.weights() {
            let y = g.mul(x, s);
            let candidate = &d + w;
            if dist[y].as_ref().is_none_or(|known| candidate < *known) {
                dist[y] = Some(candidate.clone());
                heap.push(Reverse((candidate, y)));
            }
        }
    }
    let length = dist
        .into_iter()
        .enumerate()
        .map(|(x, d)| d.ok_or(Error::DoesNotGenerate(x)))
        .collect::<Result<Vec<_>>>()?;
    LeftInvariantMetric::new(g, length)
}

/// Multiplication graph `{(g, f, gf)}` — exactly `n^2` triples.
pub fn mult_graph(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut triples = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            triples.insert(vec![a, b, g.mul(a, b)]);
        }
    }
    triples
}

/// The Roelcke metric `d_w(g,h) = min_f max{d(f,g), d(f^-1,h^-1)}` for a
/// left-invariant `d`. Matrix-level axioms are checked on the result.
pub fn roelcke_metric(g: &FiniteGroup, d: &LeftInvariantMetric) -> Result<DistanceMatrix> {
    let n = g.order();
    let entries: Vec<Vec<Rat>> = (0..n)
        .map(|gi| {
            (0..n)
                .map(|hi| {
                    (0..n)
                        .map(|f| {
                            let left = d.distance(g, f, gi);
                            let right = d.distance(g, g.inv(f), g.inv(hi));
                            left.max(right)
                        })
                        .min()
                        .expect("group is nonempty")
                })
                .collect()
        })
        .collect();
    DistanceMatrix::new(entries)
}

/// Encodes a group with a left-invariant metric as a metric structure:
/// points are the elements, the metric is the Roelcke metric, and one
/// ternary relation holds the multiplication graph. All metric axioms are
/// verified on the result and reported on failure.
pub fn roelcke_structure(g: &FiniteGroup, d: &LeftInvariantMetric) -> Result<MetricStructure> {
    let matrix = roelcke_metric(g, d)?;
    let points = (0..g.order()).map(|i| format!("g{i}")).collect();
    let mut relations = BTreeMap::new();
    relations.insert(MULT_RELATION.to_string(), Relation::new(3, mult_graph(g)));
    MetricStructure::new(points, matrix.entries().to_vec(), relations)
}

/// One-point compactification of a pointed finite metric space. Distances
/// follow the reciprocal-length construction: `l(x) = 1/(1 + d(x, base))`,
/// `d*(x,y) = min{d(x,y), l(x) + l(y)}`, and `d*(star, x) = l(x)`. The
/// star point carries a fresh unary relation; all other relations are kept
/// verbatim. The resulting metric is validated and failures reported.
pub fn alexandrov_structure(p: &MetricStructure, base: usize) -> Result<MetricStructure> {
    if base >= p.len() {
        return Err(Error::IndexOutOfBounds {
            what: "base point",
            index: base,
            size: p.len(),
        });
    }
    if p.relations().contains_key(STAR_RELATION) {
        return Err(Error::InvalidParameter(format!(
            "input already has a relation named {STAR_RELATION:?}"
        )));
    }
    let n = p.len();
    let one = rat_int(1);
    let ell: Vec<Rat> = (0..n).map(|x| &one / (&one + p.dist(x, base))).collect();
    let mut entries = vec![vec![rat_int(0); n + 1]; n + 1];
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let through_infinity = &ell[x] + &ell[y];
                entries[x][y] = p.dist(x, y).clone().min(through_infinity);
            }
        }
        entries[x][n] = ell[x].clone();
        entries[n][x] = ell[x].clone();
    }
    let mut points: Vec<String> = p.points().to_vec();
    points.push("*".to_string());
    let mut relations = p.relations().clone();
    relations.insert(STAR_RELATION.to_string(), Relation::new(1, [vec![n]]));
    MetricStructure::new(points, entries, relations)
}

/// Closure of `{identity}` under right multiplication by the listed
/// elements; in a finite group this is the generated subgroup.
fn generated_subgroup(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn check_two_generated(g: &FiniteGroup, a: usize, b: usize) -> Result<()> {
    for &x in &[a, b] {
        if x >= g.order() {
            return Err(Error::IndexOutOfBounds {
                what: "generator",
                index: x,
                size: g.order(),
            });
        }
    }
    let sub = generated_subgroup(g, &[a, b]);
    if sub.len() != g.order() {
        let missing = (0..g.order()).find(|x| !sub.contains(x)).unwrap_or(0);
        return Err(Error::DoesNotGenerate(missing));
    }
    Ok(())
}

/// Translation-graph structure: the group with the discrete metric, the
/// graphs of right multiplication by `a` and by `b`, and a unary relation
/// marking `subset`. Requires `{a, b}` to generate.
pub fn translation_structure(
    g: &FiniteGroup,
    a: usize,
    b: usize,
    subset: &BTreeSet<usize>,
) -> Result<MetricStructure> {
    check_two_generated(g, a, b)?;
    let n = g.order();
    for &x in subset {
        if x >= n {
            return Err(Error::IndexOutOfBounds {
                what: "subset element",
                index: x,
                size: n,
            });
        }
    }
    let base = MetricStructure::discrete(n)?;
    let ra: Vec<Vec<usize>> = (0..n).map(|x| vec![x, g.mul(x, a)]).collect();
    let rb: Vec<Vec<usize>> = (0..n).map(|x| vec![x, g.mul(x, b)]).collect();
    let marked: Vec<Vec<usize>> = subset.iter().map(|&x| vec![x]).collect();
    base.with_relation("Ra", 2, ra)?
        .with_relation("Rb", 2, rb)?
        .with_relation("A", 1, marked)
}

/// Decides whether some left translation maps `a_set` onto `b_set`, by
/// deciding isomorphism of the two translation-graph structures; on a
/// positive answer returns the least such group element.
pub fn decide_translation_equiv(
    g: &FiniteGroup,
    a: usize,
    b: usize,
    a_set: &BTreeSet<usize>,
    b_set: &BTreeSet<usize>,
) -> Result<Option<usize>> {
    let sa = translation_structure(g, a, b, a_set)?;
    let sb = translation_structure(g, a, b, b_set)?;
    if decide_isometric_iso(&sa, &sb)?.is_none() {
        return Ok(None);
    }
    for t in 0..g.order() {
        let image: BTreeSet<usize> = a_set.iter().map(|&x| g.mul(t, x)).collect();
        if image == *b_set {
            return Ok(Some(t));
        }
    }
    Err(Error::Internal(
        "structure isomorphism found but no translation maps A to B".into(),
    ))
}
