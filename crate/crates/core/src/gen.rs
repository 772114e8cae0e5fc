//! Seeded random corpora for tests and the CLI.
//!
//! Everything here is deterministic given the seed. Random metrics are
//! drawn as symmetric positive rational grids and then closed under
//! shortest paths, which enforces the triangle inequality without leaving
//! the rationals; random left-invariant metrics come from random symmetric
//! generator weights via the word metric, which guarantees their axioms.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bilipschitz::LipZetaPattern;
use crate::groups::{FiniteGroup, WeightedGenerators};
use crate::rational::{rat, rat_int, Rat};
use crate::structure::{MetricStructure, Relation};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shortest-path closure: replaces each entry by the cheapest path value.
/// Preserves symmetry, positivity and exactness; output satisfies the
/// triangle inequality.
pub fn metric_completion(rows: &mut [Vec<Rat>]) {
    let n = rows.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &rows[i][k] + &rows[k][j];
                if via < rows[i][j] {
                    rows[i][j] = via;
                }
            }
        }
    }
}

fn random_distance(rng: &mut impl Rng) -> Rat {
    let numerator = rng.random_range(1..=6i64);
    let denominator = rng.random_range(1..=3i64);
    rat(numerator, denominator)
}

/// Random structure with `n` in `1..=max_points`, rational distances made
/// triangle-valid by shortest-path closure, and each possible tuple of
/// each signature relation included with probability `tuple_probability`.
pub fn random_structure(
    rng: &mut impl Rng,
    max_points: usize,
    signature: &[(String, usize)],
    tuple_probability: f64,
) -> MetricStructure {
    let n = rng.random_range(1..=max_points.max(1));
    random_structure_exact(rng, n, signature, tuple_probability)
}

/// Same as [`random_structure`] with the point count fixed.
pub fn random_structure_exact(
    rng: &mut impl Rng,
    n: usize,
    signature: &[(String, usize)],
    tuple_probability: f64,
) -> MetricStructure {
    let mut rows = vec![vec![rat_int(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = random_distance(rng);
            rows[i][j] = d.clone();
            rows[j][i] = d;
        }
    }
    metric_completion(&mut rows);
    let points = (0..n).map(|i| format!("p{i}")).collect();
    let mut relations = BTreeMap::new();
    for (name, arity) in signature {
        let mut tuples = BTreeSet::new();
        let mut tuple = vec![0usize; *arity];
        loop {
            if rng.random_bool(tuple_probability) {
                tuples.insert(tuple.clone());
            }
            let mut pos = *arity;
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
            if done {
                break;
            }
        }
        relations.insert(
            name.clone(),
            Relation {
                arity: *arity,
                tuples,
            },
        );
    }
    MetricStructure::new(points, rows, relations).expect("generated structure is valid")
}

/// Copy of `s` with each distance stretched by an independent factor
/// `1 + k/8`, `k <= eighths`, then re-closed under shortest paths. The
/// identity map is a relation-preserving bijection of distortion at most
/// `1 + eighths/8`.
pub fn random_perturbed_copy(
    rng: &mut impl Rng,
    s: &MetricStructure,
    eighths: u32,
) -> MetricStructure {
    let n = s.len();
    let mut rows = vec![vec![rat_int(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let factor = rat_int(1) + rat(rng.random_range(0..=eighths) as i64, 8);
            let d = s.dist(i, j) * &factor;
            rows[i][j] = d.clone();
            rows[j][i] = d;
        }
    }
    metric_completion(&mut rows);
    MetricStructure::new(s.points().to_vec(), rows, s.relations().clone())
        .expect("perturbed copy stays valid")
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

fn random_radius(rng: &mut impl Rng, diameter: &Rat) -> Rat {
    // Anywhere from 0 to a bit beyond the diameter, in eighths.
    let cap = diameter.max(&rat_int(1)).clone() * rat(3, 2);
    cap * rat(rng.random_range(0..=8i64), 8)
}

/// Random density pattern against the signature of `s`: arbitrary
/// constraint sets, radii and bounds — nothing here needs to be satisfied
/// by `s` itself.
pub fn random_lip_pattern(rng: &mut impl Rng, s: &MetricStructure, max_n: usize) -> LipZetaPattern {
    let n = rng.random_range(1..=max_n.max(1));
    let diameter = s.diameter();
    let mut constraints = BTreeMap::new();
    for (name, rel) in s.relations() {
        if rng.random_bool(0.5) {
            continue;
        }
        let mut tuples = BTreeSet::new();
        let count = rng.random_range(0..=2usize);
        for _ in 0..count {
            let tuple: Vec<usize> = (0..rel.arity).map(|_| rng.random_range(1..=n)).collect();
            tuples.insert(tuple);
        }
        if !tuples.is_empty() {
            constraints.insert(name.clone(), tuples);
        }
    }
    let r: Vec<Rat> = (0..n).map(|_| random_radius(rng, &diameter)).collect();
    let mut t = BTreeMap::new();
    for name in s.relations().keys() {
        if rng.random_bool(0.5) {
            continue;
        }
        let mut by_k = BTreeMap::new();
        let k = rng.random_range(1..=n);
        by_k.insert(k, random_radius(rng, &diameter));
        t.insert(name.clone(), by_k);
    }
    LipZetaPattern::new(n, constraints, r, t).expect("generated pattern is well-formed")
}

/// Random inverse-closed generating set with symmetric weights from a
/// small rational pool. Grows the set until it generates, so the word
/// metric always exists.
pub fn random_weighted_generators(rng: &mut impl Rng, g: &FiniteGroup) -> WeightedGenerators {
    let n = g.order();
    let pool = [
        rat(1, 2),
        rat_int(1),
        rat(3, 2),
        rat_int(2),
        rat(5, 2),
        rat_int(3),
    ];
    let mut weights: BTreeMap<usize, Rat> = BTreeMap::new();
    let mut order: Vec<usize> = (0..n).filter(|&x| x != g.identity()).collect();
    order.shuffle(rng);
    let mut generated = BTreeSet::from([g.identity()]);
    for &s in &order {
        if generated.len() == n && !weights.is_empty() {
            break;
        }
        if weights.contains_key(&s) {
            continue;
        }
        let w = pool[rng.random_range(0..pool.len())].clone();
        weights.insert(s, w.clone());
        weights.insert(g.inv(s), w);
        // Recompute the closure with the enlarged set.
        generated = BTreeSet::from([g.identity()]);
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for &gen in weights.keys() {
                let y = g.mul(x, gen);
                if generated.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    WeightedGenerators::new(g, weights).expect("random weights are symmetric and positive")
}

/// Random subset of `0..n`, each element independently with probability `p`.
pub fn random_subset(rng: &mut impl Rng, n: usize, p: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.random_bool(p)).collect()
}
