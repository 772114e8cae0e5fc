//! Finite metric structures over exact rationals.
//!
//! A [`MetricStructure`] is a finite point set with a rational distance
//! matrix satisfying all metric axioms, plus named finitary relations given
//! as sets of index tuples. Everything downstream (invariants, group
//! encodings, heap graphs, Stone algebras, embeddings) consumes these.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};
use crate::validate::{Checker, ValidationReport};

/// Square symmetric matrix of exact rationals with zero diagonal.
///
/// Off-diagonal zeros are allowed here: distance matrices of tuples with
/// repeated points have them. Strict positivity is an axiom of
/// [`MetricStructure`], not of the matrix type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceMatrix {
    entries: Vec<Vec<Rat>>,
}

impl DistanceMatrix {
    /// Builds a matrix, checking shape, zero diagonal, symmetry and
    /// non-negativity.
    pub fn new(entries: Vec<Vec<Rat>>) -> Result<Self> {
        let report = Self::validate(&entries);
        if report.ok() {
            Ok(DistanceMatrix { entries })
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// Checks the matrix-level axioms of a candidate entry grid.
    pub fn validate(entries: &[Vec<Rat>]) -> ValidationReport {
        let mut c = Checker::new();
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                c.fail(
                    "shape",
                    vec![i],
                    format!("row {i} has length {}, expected {n}", row.len()),
                );
            }
        }
        let shaped = c.finish();
        if !shaped.ok() {
            // Shape errors make the remaining checks ill-posed.
            return shaped;
        }
        let mut c = Checker::new();
        let zero = rat_int(0);
        for i in 0..n {
            if entries[i][i] != zero {
                c.fail("identity", vec![i], "nonzero diagonal entry");
            }
            for j in 0..n {
                if entries[i][j] < zero {
                    c.fail("nonnegativity", vec![i, j], "negative entry");
                }
                if j > i && entries[i][j] != entries[j][i] {
                    c.fail("symmetry", vec![i, j], "asymmetric entries");
                }
            }
        }
        c.finish()
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Rat>] {
        &self.entries
    }

    /// Largest entry (zero for a 0- or 1-point matrix).
    pub fn max_entry(&self) -> Rat {
        self.entries
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(|| rat_int(0))
    }

    pub fn scale(&self, factor: &Rat) -> DistanceMatrix {
        DistanceMatrix {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e * factor).collect())
                .collect(),
        }
    }
}

/// A named relation: arity plus the set of index tuples that satisfy it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Relation {
            arity,
            tuples: tuples.into_iter().collect(),
        }
    }
}

/// Least radius covering a set, where an empty covering set of a nonempty
/// target has no finite radius.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Radius {
    Finite(Rat),
    Infinite,
}

impl Radius {
    pub fn is_finite(&self) -> bool {
        matches!(self, Radius::Finite(_))
    }

    /// `self <= bound` with `Infinite` exceeding every rational.
    pub fn within(&self, bound: &Rat) -> bool {
        match self {
            Radius::Finite(r) => r <= bound,
            Radius::Infinite => false,
        }
    }
}

/// A finite metric space with named relations — the objects every module
/// of this crate manipulates. Instances are immutable and always satisfy
/// the full axiom set; constructors validate and reject anything else.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MetricStructure {
    points: Vec<String>,
    metric: DistanceMatrix,
    relations: BTreeMap<String, Relation>,
}

/// Checks every structure axiom on raw parts: matrix well-formedness,
/// strict positivity off the diagonal, the triangle inequality, and
/// well-formed relation tuples. All failures are reported in-band.
pub fn validate_structure(
    points: &[String],
    metric: &[Vec<Rat>],
    relations: &BTreeMap<String, Relation>,
) -> ValidationReport {
    let mut c = Checker::new();
    let n = points.len();
    if n == 0 {
        c.fail("nonempty", vec![], "structure has no points");
    }
    {
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p) {
                c.fail(
                    "point_names",
                    vec![i],
                    format!("duplicate point name {p:?}"),
                );
            }
        }
    }
    let matrix_report = DistanceMatrix::validate(metric);
    let shape_ok = !matrix_report
        .violations()
        .iter()
        .any(|v| v.axiom == "shape");
    for v in matrix_report.into_violations() {
        c.fail(v.axiom, v.witness, v.detail);
    }
    if metric.len() != n {
        c.fail(
            "shape",
            vec![],
            format!(
                "metric has {} rows but there are {} points",
                metric.len(),
                n
            ),
        );
    } else if shape_ok {
        let zero = rat_int(0);
        for i in 0..n {
            for j in (i + 1)..n {
                if metric[i][j] == zero {
                    c.fail("positivity", vec![i, j], "distinct points at distance 0");
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if metric[i][k] > &metric[i][j] + &metric[j][k] {
                        c.fail("triangle", vec![i, j, k], "d(i,k) > d(i,j) + d(j,k)");
                    }
                }
            }
        }
    }
    for (name, rel) in relations {
        if rel.arity == 0 {
            c.fail("arity", vec![], format!("relation {name:?} has arity 0"));
            continue;
        }
        for t in &rel.tuples {
            if t.len() != rel.arity {
                c.fail(
                    "relation_tuple",
                    t.clone(),
                    format!(
                        "relation {name:?}: tuple length {} != arity {}",
                        t.len(),
                        rel.arity
                    ),
                );
            } else if t.iter().any(|&i| i >= n) {
                c.fail(
                    "relation_tuple",
                    t.clone(),
                    format!("relation {name:?}: index out of range"),
                );
            }
        }
    }
    c.finish()
}

impl MetricStructure {
    /// Validating constructor; returns the full report on failure.
    pub fn new(
        points: Vec<String>,
        metric: Vec<Vec<Rat>>,
        relations: BTreeMap<String, Relation>,
    ) -> Result<Self> {
        let report = validate_structure(&points, &metric, &relations);
        if !report.ok() {
            return Err(Error::Invalid(report));
        }
        Ok(MetricStructure {
            points,
            metric: DistanceMatrix { entries: metric },
            relations,
        })
    }

    /// Structure with points `p0..p{n-1}` and all distances 1.
    pub fn discrete(n: usize) -> Result<Self> {
        let points = (0..n).map(|i| format!("p{i}")).collect();
        let metric = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rat_int(0) } else { rat_int(1) })
                    .collect()
            })
            .collect();
        MetricStructure::new(points, metric, BTreeMap::new())
    }

    /// Returns a copy with one extra relation.
    pub fn with_relation(
        &self,
        name: impl Into<String>,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut relations = self.relations.clone();
        relations.insert(name.into(), Relation::new(arity, tuples));
        MetricStructure::new(self.points.clone(), self.metric.entries.clone(), relations)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn metric(&self) -> &DistanceMatrix {
        &self.metric
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rat {
        self.metric.get(i, j)
    }

    pub fn diameter(&self) -> Rat {
        self.metric.max_entry()
    }

    /// Relation names with arities; isomorphism is only defined between
    /// structures sharing this.
    pub fn signature(&self) -> BTreeMap<&str, usize> {
        self.relations
            .iter()
            .map(|(name, rel)| (name.as_str(), rel.arity))
            .collect()
    }

    /// Errors unless `self` and `other` share relation names and arities.
    pub fn check_same_signature(&self, other: &MetricStructure) -> Result<()> {
        if self.signature() != other.signature() {
            return Err(Error::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.signature(),
                other.signature()
            )));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfBounds {
                what: "point",
                index: i,
                size: self.len(),
            });
        }
        Ok(())
    }

    /// Sup-metric `d_inf` on index tuples: the largest coordinatewise
    /// distance. Tuples must have equal length.
    pub fn product_metric(&self, a: &[usize], b: &[usize]) -> Result<Rat> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let mut best = rat_int(0);
        for (&x, &y) in a.iter().zip(b) {
            self.check_index(x)?;
            self.check_index(y)?;
            let d = self.dist(x, y);
            if *d > best {
                best = d.clone();
            }
        }
        Ok(best)
    }

    /// Least `r` such that every point lies within `r` of the subset.
    pub fn covering_radius(&self, subset: &[usize]) -> Result<Rat> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &i in subset {
            self.check_index(i)?;
        }
        let mut radius = rat_int(0);
        for p in 0..self.len() {
            let near = subset
                .iter()
                .map(|&s| self.dist(p, s))
                .min()
                .expect("nonempty subset")
                .clone();
            if near > radius {
                radius = near;
            }
        }
        Ok(radius)
    }

    /// Least `t` such that every tuple of relation `name` is within `t`
    /// (in `d_inf`) of a marked tuple. An empty marked set covers an empty
    /// relation at radius 0 and a nonempty one at no finite radius.
    pub fn relation_covering_radius(
        &self,
        name: &str,
        marked: &BTreeSet<Vec<usize>>,
    ) -> Result<Radius> {
        let rel = self.relation(name)?;
        for m in marked {
            if !rel.tuples.contains(m) {
                return Err(Error::InvalidParameter(format!(
                    "marked tuple {m:?} is not in relation {name:?}"
                )));
            }
        }
        if rel.tuples.is_empty() {
            return Ok(Radius::Finite(rat_int(0)));
        }
        if marked.is_empty() {
            return Ok(Radius::Infinite);
        }
        let mut radius = rat_int(0);
        for t in &rel.tuples {
            let near = marked
                .iter()
                .map(|m| self.product_metric(t, m))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .expect("nonempty marked set");
            if near > radius {
                radius = near;
            }
        }
        Ok(Radius::Finite(radius))
    }

    /// Same points and relations with all distances multiplied by
    /// `factor > 0`.
    pub fn scale_metric(&self, factor: &Rat) -> Result<MetricStructure> {
        if *factor <= rat_int(0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        MetricStructure::new(
            self.points.clone(),
            self.metric.scale(factor).entries,
            self.relations.clone(),
        )
    }

    /// Copy with points renamed and reindexed by `perm`: new position `i`
    /// holds old point `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MetricStructure> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: n,
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            self.check_index(p)?;
            if seen[p] {
                return Err(Error::InvalidParameter(format!(
                    "relabel permutation repeats index {p}"
                )));
            }
            seen[p] = true;
        }
        // inverse[old] = new position of old point
        let mut inverse = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let points = perm.iter().map(|&p| self.points[p].clone()).collect();
        let metric = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.dist(perm[i], perm[j]).clone())
                    .collect()
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|(name, rel)| {
                let tuples = rel
                    .tuples
                    .iter()
                    .map(|t| t.iter().map(|&i| inverse[i]).collect::<Vec<_>>())
                    .collect::<BTreeSet<_>>();
                (
                    name.clone(),
                    Relation {
                        arity: rel.arity,
                        tuples,
                    },
                )
            })
            .collect();
        MetricStructure::new(points, metric, relations)
    }
}
