//! Perturbation invariants and the bi-Lipschitz dominance test.
//!
//! `D_zeta` collects the n-tuples meeting prefix-density, relation
//! membership and marked-tuple density constraints; the family of
//! alpha-perturbations of their distance matrices characterizes
//! bi-Lipschitz isomorphism. Containment is checked in the per-box witness
//! form — for each base matrix of one side there is a base matrix of the
//! other that is a c-perturbation of it — which is what the containment of
//! the perturbation boxes reduces to. [`optimal_distortion`] is the exact
//! oracle for the relation these invariants characterize.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::isometry::{distance_matrix, MatrixSet};
use crate::rational::{rat_int, Rat};
use crate::structure::{DistanceMatrix, MetricStructure};

/// Density-augmented pattern: constraints as in `C_zeta`, plus prefix
/// density radii `r_1..r_n` and per-(relation, k) marked-tuple density
/// bounds. The `t` map is partial; absent entries impose nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipZetaPattern {
    n: usize,
    constraints: BTreeMap<String, BTreeSet<Vec<usize>>>,
    r: Vec<Rat>,
    t: BTreeMap<String, BTreeMap<usize, Rat>>,
}

impl LipZetaPattern {
    pub fn new(
        n: usize,
        constraints: BTreeMap<String, BTreeSet<Vec<usize>>>,
        r: Vec<Rat>,
        t: BTreeMap<String, BTreeMap<usize, Rat>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("pattern has n = 0".into()));
        }
        if r.len() != n {
            return Err(Error::LengthMismatch {
                left: r.len(),
                right: n,
            });
        }
        let zero = rat_int(0);
        if r.iter().any(|x| *x < zero) {
            return Err(Error::InvalidParameter("negative density radius".into()));
        }
        for (name, tuples) in &constraints {
            for tup in tuples {
                if tup.iter().any(|&i| i == 0 || i > n) {
                    return Err(Error::InvalidParameter(format!(
                        "pattern constraint {tup:?} for {name:?} has positions outside 1..={n}"
                    )));
                }
            }
        }
        for (name, by_k) in &t {
            for (&k, bound) in by_k {
                if k == 0 || k > n {
                    return Err(Error::InvalidParameter(format!(
                        "density index {k} for {name:?} outside 1..={n}"
                    )));
                }
                if *bound < zero {
                    return Err(Error::InvalidParameter("negative density bound".into()));
                }
            }
        }
        Ok(LipZetaPattern {
            n,
            constraints,
            r,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &BTreeMap<String, BTreeSet<Vec<usize>>> {
        &self.constraints
    }

    pub fn r(&self) -> &[Rat] {
        &self.r
    }

    pub fn t(&self) -> &BTreeMap<String, BTreeMap<usize, Rat>> {
        &self.t
    }

    /// `c * zeta`: same constraints, radii and bounds multiplied by `c`.
    pub fn scaled(&self, c: &Rat) -> LipZetaPattern {
        LipZetaPattern {
            n: self.n,
            constraints: self.constraints.clone(),
            r: self.r.iter().map(|x| x * c).collect(),
            t: self
                .t
                .iter()
                .map(|(name, by_k)| {
                    (
                        name.clone(),
                        by_k.iter().map(|(&k, v)| (k, v * c)).collect(),
                    )
                })
                .collect(),
        }
    }

    fn check_against(&self, s: &MetricStructure) -> Result<()> {
        for (name, tuples) in &self.constraints {
            let rel = s.relation(name)?;
            for tup in tuples {
                if tup.len() != rel.arity {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        expected: rel.arity,
                        got: tup.len(),
                    });
                }
            }
        }
        for name in self.t.keys() {
            s.relation(name)?;
        }
        Ok(())
    }
}

/// Minimum bi-Lipschitz constant over relation-preserving bijections, or
/// `None` when no such bijection exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distortion {
    Finite(Rat),
    None,
}

impl Distortion {
    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Distortion::Finite(c) => Some(c),
            Distortion::None => None,
        }
    }
}

impl std::fmt::Display for Distortion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distortion::Finite(c) => write!(f, "{}", crate::rational::format_rat(c)),
            Distortion::None => write!(f, "none"),
        }
    }
}

/// Entrywise `(1/alpha) a_ij <= b_ij <= alpha a_ij`, for `alpha >= 1`.
/// Diagonal zeros pass automatically.
pub fn is_alpha_perturbation(a: &DistanceMatrix, b: &DistanceMatrix, alpha: &Rat) -> Result<bool> {
    if a.size() != b.size() {
        return Err(Error::LengthMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    if *alpha < rat_int(1) {
        return Err(Error::InvalidParameter(format!(
            "perturbation parameter must be >= 1, got {alpha}"
        )));
    }
    Ok(perturbation_entrywise(a, b, alpha))
}

/// The entrywise check with parameters already validated. Division-free:
/// `(1/alpha) a <= b` is `a <= alpha * b`.
fn perturbation_entrywise(a: &DistanceMatrix, b: &DistanceMatrix, alpha: &Rat) -> bool {
    let n = a.size();
    for i in 0..n {
        for j in (i + 1)..n {
            let aij = a.get(i, j);
            let bij = b.get(i, j);
            if *aij > alpha * bij || *bij > alpha * aij {
                return false;
            }
        }
    }
    true
}

/// The set `D_zeta(S)` of n-tuples meeting all three conditions: prefix
/// density, constraint membership, and marked-tuple density per relation.
pub fn compute_d_zeta(s: &MetricStructure, zeta: &LipZetaPattern) -> Result<BTreeSet<Vec<usize>>> {
    zeta.check_against(s)?;
    let n = zeta.n;
    let size = s.len();
    let mut out = BTreeSet::new();
    let mut tuple = vec![0usize; n];
    'tuples: loop {
        if tuple_in_d_zeta(s, zeta, &tuple)? {
            out.insert(tuple.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'tuples;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < size {
                break;
            }
            tuple[pos] = 0;
        }
    }
    Ok(out)
}

fn tuple_in_d_zeta(s: &MetricStructure, zeta: &LipZetaPattern, tuple: &[usize]) -> Result<bool> {
    // (1) prefix density: {x_1..x_k} is r_k-dense for every k.
    for k in 1..=zeta.n {
        if s.covering_radius(&tuple[..k])? > zeta.r[k - 1] {
            return Ok(false);
        }
    }
    // (2) constrained sub-tuples lie in their relations.
    for (name, position_tuples) in &zeta.constraints {
        let rel = &s.relations()[name];
        for q in position_tuples {
            let mapped: Vec<usize> = q.iter().map(|&pos| tuple[pos - 1]).collect();
            if !rel.tuples.contains(&mapped) {
                return Ok(false);
            }
        }
    }
    // (3) marked tuples with positions <= k are t_{R,k}-dense in R.
    for (name, by_k) in &zeta.t {
        let positions = zeta.constraints.get(name);
        for (&k, bound) in by_k {
            let marked: BTreeSet<Vec<usize>> = positions
                .map(|qs| {
                    qs.iter()
                        .filter(|q| q.iter().all(|&pos| pos <= k))
                        .map(|q| q.iter().map(|&pos| tuple[pos - 1]).collect())
                        .collect()
                })
                .unwrap_or_default();
            if !s.relation_covering_radius(name, &marked)?.within(bound) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Distance matrices of the tuples in `D_zeta(S)`; the perturbation boxes
/// around them are implicit.
pub fn base_matrices(s: &MetricStructure, zeta: &LipZetaPattern) -> Result<MatrixSet> {
    let tuples = compute_d_zeta(s, zeta)?;
    let mut out = MatrixSet::new(zeta.n);
    for tuple in tuples {
        out.insert(distance_matrix(s, &tuple)?)?;
    }
    Ok(out)
}

/// Witness-form containment `E_{zeta,alpha}(S) <= E_{c zeta, c alpha}(T)`
/// for every pattern in `patterns`: each base matrix of `D_zeta(S)` must
/// have a base matrix of `D_{c zeta}(T)` that is a c-perturbation of it.
pub fn dominates(
    s: &MetricStructure,
    t: &MetricStructure,
    c: &Rat,
    patterns: &[LipZetaPattern],
) -> Result<bool> {
    if *c < rat_int(1) {
        return Err(Error::InvalidParameter(format!(
            "dominance constant must be >= 1, got {c}"
        )));
    }
    s.check_same_signature(t)?;
    for zeta in patterns {
        let base_s = base_matrices(s, zeta)?;
        let base_t = base_matrices(t, &zeta.scaled(c))?;
        for a in base_s.matrices() {
            if !base_t
                .matrices()
                .iter()
                .any(|b| perturbation_entrywise(a, b, c))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The pattern read off a full enumeration of `S` in point order: exact
/// relation patterns, prefix covering radii (so `r_n = 0`), and marked
/// densities wherever finite (always including 0 at `k = n`).
pub fn canonical_pattern(s: &MetricStructure) -> LipZetaPattern {
    let n = s.len();
    let constraints: BTreeMap<String, BTreeSet<Vec<usize>>> = s
        .relations()
        .iter()
        .map(|(name, rel)| {
            let tuples = rel
                .tuples
                .iter()
                .map(|tup| tup.iter().map(|&p| p + 1).collect::<Vec<_>>())
                .collect::<BTreeSet<_>>();
            (name.clone(), tuples)
        })
        .collect();
    let prefix: Vec<usize> = (0..n).collect();
    let r: Vec<Rat> = (1..=n)
        .map(|k| s.covering_radius(&prefix[..k]).expect("nonempty prefix"))
        .collect();
    let mut t = BTreeMap::new();
    for (name, rel) in s.relations() {
        let mut by_k = BTreeMap::new();
        for k in 1..=n {
            let marked: BTreeSet<Vec<usize>> = rel
                .tuples
                .iter()
                .filter(|tup| tup.iter().all(|&p| p < k))
                .cloned()
                .collect();
            if let crate::structure::Radius::Finite(radius) = s
                .relation_covering_radius(name, &marked)
                .expect("marked tuples come from the relation")
            {
                by_k.insert(k, radius);
            }
        }
        t.insert(name.clone(), by_k);
    }
    LipZetaPattern::new(n, constraints, r, t).expect("canonical pattern is well-formed")
}

/// Exact oracle: the minimum over relation-onto bijections of the largest
/// two-sided distance ratio; `None` when sizes differ or no bijection maps
/// every relation onto its counterpart.
pub fn optimal_distortion(s: &MetricStructure, t: &MetricStructure) -> Result<Distortion> {
    s.check_same_signature(t)?;
    let n = s.len();
    if t.len() != n {
        return Ok(Distortion::None);
    }
    let mut best: Option<Rat> = None;
    for f in (0..n).permutations(n) {
        if !relations_onto(s, t, &f) {
            continue;
        }
        let mut worst = rat_int(1);
        for i in 0..n {
            for j in (i + 1)..n {
                let ds = s.dist(i, j);
                let dt = t.dist(f[i], f[j]);
                let ratio = if dt > ds { dt / ds } else { ds / dt };
                if ratio > worst {
                    worst = ratio;
                }
            }
        }
        if best.as_ref().is_none_or(|b| worst < *b) {
            best = Some(worst);
        }
    }
    Ok(match best {
        Some(c) => Distortion::Finite(c),
        None => Distortion::None,
    })
}

fn relations_onto(s: &MetricStructure, t: &MetricStructure, f: &[usize]) -> bool {
    s.relations().iter().all(|(name, rel)| {
        let rel_t = &t.relations()[name];
        rel.tuples.len() == rel_t.tuples.len()
            && rel.tuples.iter().all(|tup| {
                let image: Vec<usize> = tup.iter().map(|&i| f[i]).collect();
                rel_t.tuples.contains(&image)
            })
    })
}
