//! Distance-matrix invariants and the isometric-isomorphism decider.
//!
//! `C_zeta` collects the distance matrices of all n-tuples whose designated
//! sub-tuples land in designated relations; the full family of these sets
//! is a complete invariant for isometric isomorphism. The decider works
//! with the finer [`Signature`] — the exact relation pattern per point
//! ordering — searching for an ordering of one structure whose signature
//! entry equals the other's identity entry. An independent brute-force
//! oracle double-checks it.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::rational::rat_int;
use crate::structure::{DistanceMatrix, MetricStructure, Relation};

/// Constraint pattern for `C_zeta`: a tuple length `n` and, per relation,
/// a set of 1-based position tuples that must land in that relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZetaPattern {
    n: usize,
    constraints: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl ZetaPattern {
    /// Positions are 1-based and must lie in `1..=n`. Arities are checked
    /// against a concrete structure when the pattern is evaluated.
    pub fn new(n: usize, constraints: BTreeMap<String, BTreeSet<Vec<usize>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("pattern has n = 0".into()));
        }
        for (name, tuples) in &constraints {
            for t in tuples {
                if t.iter().any(|&i| i == 0 || i > n) {
                    return Err(Error::InvalidParameter(format!(
                        "pattern constraint {t:?} for {name:?} has positions outside 1..={n}"
                    )));
                }
            }
        }
        Ok(ZetaPattern { n, constraints })
    }

    pub fn unconstrained(n: usize) -> Self {
        ZetaPattern {
            n,
            constraints: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &BTreeMap<String, BTreeSet<Vec<usize>>> {
        &self.constraints
    }

    fn check_against(&self, s: &MetricStructure) -> Result<()> {
        for (name, tuples) in &self.constraints {
            let rel = s.relation(name)?;
            for t in tuples {
                if t.len() != rel.arity {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        expected: rel.arity,
                        got: t.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A set of same-dimension distance matrices, with set semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSet {
    n: usize,
    matrices: BTreeSet<DistanceMatrix>,
}

impl MatrixSet {
    pub fn new(n: usize) -> Self {
        MatrixSet {
            n,
            matrices: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, m: DistanceMatrix) -> Result<()> {
        if m.size() != self.n {
            return Err(Error::LengthMismatch {
                left: m.size(),
                right: self.n,
            });
        }
        self.matrices.insert(m);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &BTreeSet<DistanceMatrix> {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn contains(&self, m: &DistanceMatrix) -> bool {
        self.matrices.contains(m)
    }
}

/// Distance matrix of a point tuple (repeats allowed).
pub fn distance_matrix(s: &MetricStructure, tuple: &[usize]) -> Result<DistanceMatrix> {
    for &i in tuple {
        if i >= s.len() {
            return Err(Error::IndexOutOfBounds {
                what: "point",
                index: i,
                size: s.len(),
            });
        }
    }
    let entries = tuple
        .iter()
        .map(|&i| tuple.iter().map(|&j| s.dist(i, j).clone()).collect())
        .collect();
    DistanceMatrix::new(entries)
}

fn for_each_tuple(n_points: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; len];
    loop {
        f(&tuple);
        // Increment as a base-n_points counter, most significant first so
        // tuples come out in lexicographic order.
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n_points {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// The invariant set `C_zeta(S)`: distance matrices of all n-tuples whose
/// constrained sub-tuples lie in the named relations.
pub fn compute_c_zeta(s: &MetricStructure, zeta: &ZetaPattern) -> Result<MatrixSet> {
    zeta.check_against(s)?;
    let mut out = MatrixSet::new(zeta.n);
    let mut admissible = Vec::new();
    for_each_tuple(s.len(), zeta.n, |tuple| {
        let ok = zeta.constraints.iter().all(|(name, position_tuples)| {
            let rel = &s.relations()[name];
            position_tuples.iter().all(|q| {
                let mapped: Vec<usize> = q.iter().map(|&pos| tuple[pos - 1]).collect();
                rel.tuples.contains(&mapped)
            })
        });
        if ok {
            admissible.push(tuple.to_vec());
        }
    });
    for tuple in admissible {
        out.insert(distance_matrix(s, &tuple)?)?;
    }
    Ok(out)
}

/// One point ordering's view of a structure: its distance matrix plus the
/// exact set of relation tuples, rewritten as 0-based position tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignatureEntry {
    pub matrix: DistanceMatrix,
    pub patterns: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

/// The orbit record of a structure under reordering: the set of signature
/// entries over all `n!` orderings. Equal for two structures exactly when
/// they are isometrically isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub n: usize,
    pub entries: BTreeSet<SignatureEntry>,
}

fn entry_under(s: &MetricStructure, ordering: &[usize]) -> SignatureEntry {
    let n = s.len();
    let mut position_of = vec![0usize; n];
    for (pos, &p) in ordering.iter().enumerate() {
        position_of[p] = pos;
    }
    let entries = ordering
        .iter()
        .map(|&i| ordering.iter().map(|&j| s.dist(i, j).clone()).collect())
        .collect::<Vec<Vec<_>>>();
    let matrix = DistanceMatrix::new(entries).expect("reordered metric stays well-formed");
    let patterns = s
        .relations()
        .iter()
        .map(|(name, rel)| {
            let tuples = rel
                .tuples
                .iter()
                .map(|t| t.iter().map(|&p| position_of[p]).collect::<Vec<_>>())
                .collect::<BTreeSet<_>>();
            (name.clone(), tuples)
        })
        .collect();
    SignatureEntry { matrix, patterns }
}

/// Signature entry of the identity ordering.
pub fn identity_entry(s: &MetricStructure) -> SignatureEntry {
    let ordering: Vec<usize> = (0..s.len()).collect();
    entry_under(s, &ordering)
}

/// The full ordering-quantified signature (n! orderings, deduplicated).
pub fn full_signature(s: &MetricStructure) -> Signature {
    let n = s.len();
    let mut entries = BTreeSet::new();
    for ordering in (0..n).permutations(n) {
        entries.insert(entry_under(s, &ordering));
    }
    Signature { n, entries }
}

/// True when `f` (as `i -> f[i]`) is a distance-preserving bijection that
/// maps every relation of `s` onto the corresponding relation of `t`.
pub fn verify_isometric_iso(s: &MetricStructure, t: &MetricStructure, f: &[usize]) -> bool {
    let n = s.len();
    if t.len() != n || f.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in f {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if s.dist(i, j) != t.dist(f[i], f[j]) {
                return false;
            }
        }
    }
    for (name, rel) in s.relations() {
        let Some(rel_t) = t.relations().get(name) else {
            return false;
        };
        if rel.arity != rel_t.arity || rel.tuples.len() != rel_t.tuples.len() {
            return false;
        }
        for tuple in &rel.tuples {
            let image: Vec<usize> = tuple.iter().map(|&i| f[i]).collect();
            if !rel_t.tuples.contains(&image) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive oracle: scans all `n!` bijections in lexicographic order and
/// returns the first one that preserves distances and maps each relation
/// onto its counterpart.
pub fn brute_force_isometric_iso(
    s: &MetricStructure,
    t: &MetricStructure,
) -> Result<Option<Vec<usize>>> {
    s.check_same_signature(t)?;
    let n = s.len();
    if t.len() != n {
        return Ok(None);
    }
    for f in (0..n).permutations(n) {
        if verify_isometric_iso(s, t, &f) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

struct WitnessSearch<'a> {
    target: &'a MetricStructure,
    reference: &'a SignatureEntry,
    /// Per relation: arity, the reference position-tuple pattern, and the
    /// target's tuple set.
    relations: Vec<(usize, &'a BTreeSet<Vec<usize>>, &'a Relation)>,
    chosen: Vec<usize>,
    used: Vec<bool>,
}

impl WitnessSearch<'_> {
    /// Distances from the newly placed point must reproduce the reference
    /// matrix row.
    fn distances_consistent(&self) -> bool {
        let k = self.chosen.len() - 1;
        let new = self.chosen[k];
        (0..k).all(|i| self.target.dist(self.chosen[i], new) == self.reference.matrix.get(i, k))
    }

    /// Position tuples involving the newly placed point must be in the
    /// target relation exactly when the reference pattern contains them.
    fn patterns_consistent(&self) -> bool {
        let k = self.chosen.len() - 1;
        self.relations
            .iter()
            .all(|(arity, pattern, rel_t)| self.relation_consistent(k, *arity, pattern, rel_t))
    }

    fn relation_consistent(
        &self,
        k: usize,
        arity: usize,
        pattern: &BTreeSet<Vec<usize>>,
        rel_t: &Relation,
    ) -> bool {
        // Enumerate position tuples over 0..=k that mention k.
        let mut q = vec![0usize; arity];
        loop {
            if q.contains(&k) {
                let mapped: Vec<usize> = q.iter().map(|&pos| self.chosen[pos]).collect();
                if pattern.contains(&q) != rel_t.tuples.contains(&mapped) {
                    return false;
                }
            }
            let mut pos = arity;
            loop {
                if pos == 0 {
                    return true;
                }
                pos -= 1;
                q[pos] += 1;
                if q[pos] <= k {
                    break;
                }
                q[pos] = 0;
            }
        }
    }

    fn search(&mut self) -> Option<Vec<usize>> {
        let n = self.target.len();
        if self.chosen.len() == n {
            return Some(self.chosen.clone());
        }
        for candidate in 0..n {
            if self.used[candidate] {
                continue;
            }
            self.used[candidate] = true;
            self.chosen.push(candidate);
            if self.distances_consistent() && self.patterns_consistent() {
                if let Some(found) = self.search() {
                    return Some(found);
                }
            }
            self.chosen.pop();
            self.used[candidate] = false;
        }
        None
    }
}

/// Decides isometric isomorphism via the signature: searches, in
/// lexicographic order, for an ordering of `t` whose signature entry
/// equals the identity entry of `s`. Returns the least witness bijection.
///
/// Structures with different relation names or arities are a signature
/// mismatch error, not a "no".
pub fn decide_isometric_iso(
    s: &MetricStructure,
    t: &MetricStructure,
) -> Result<Option<Vec<usize>>> {
    s.check_same_signature(t)?;
    let n = s.len();
    if t.len() != n {
        return Ok(None);
    }
    // Orderings of t are exactly the candidate bijections i -> sigma(i);
    // entry equality pins both the matrix and the exact relation patterns.
    let reference = identity_entry(s);
    let relations: Vec<(usize, &BTreeSet<Vec<usize>>, &Relation)> = s
        .relations()
        .iter()
        .map(|(name, rel)| (rel.arity, &reference.patterns[name], &t.relations()[name]))
        .collect();
    let mut search = WitnessSearch {
        target: t,
        reference: &reference,
        relations,
        chosen: Vec::with_capacity(n),
        used: vec![false; n],
    };
    Ok(search.search())
}

/// Matrix of the single-point tuple, used by tests and small callers.
pub fn singleton_matrix() -> DistanceMatrix {
    DistanceMatrix::new(vec![vec![rat_int(0)]]).expect("1x1 zero matrix")
}
