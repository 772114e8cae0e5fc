//! Hilbert-cube machinery at finite truncation.
//!
//! `kuratowski_embed` sends each point to its distance profile against the
//! point enumeration; on the first `|S|` coordinates this is a sup-metric
//! isometry. `cube_metric` is the summable product metric
//! `sum |a_n - b_n| / 2^n`, and `iota` is the affine squeeze
//! `x -> x/2 + 1/4` into the open cube, an exact 1/2-contraction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, rat, rat_int, Rat};
use crate::structure::{MetricStructure, Relation};

/// A point of a truncated Hilbert cube: finitely many coordinates, each in
/// the closed unit interval.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CubePoint {
    coords: Vec<Rat>,
}

impl CubePoint {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if let Some(bad) = coords.iter().position(|c| !in_unit_interval(c)) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {bad} is outside [0, 1]"
            )));
        }
        Ok(CubePoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

/// Distance-profile embedding `x -> (d(x, x_1), ..., d(x, x_k))`, with the
/// enumeration repeating cyclically past `|S|`. Requires diameter at most
/// 1 (rescale first) and `k >= |S|`; distinct points get distinct images.
pub fn kuratowski_embed(s: &MetricStructure, k: usize) -> Result<Vec<CubePoint>> {
    if s.diameter() > rat_int(1) {
        return Err(Error::InvalidParameter(
            "diameter exceeds 1; rescale the structure first".into(),
        ));
    }
    let n = s.len();
    if k < n {
        return Err(Error::InvalidParameter(format!(
            "truncation {k} is shorter than the point count {n}"
        )));
    }
    (0..n)
        .map(|i| CubePoint::new((0..k).map(|j| s.dist(i, j % n).clone()).collect()))
        .collect()
}

/// The summable cube metric `sum_n |a_n - b_n| / 2^n` (first coordinate
/// weighted 1/2), exact.
pub fn cube_metric(a: &CubePoint, b: &CubePoint) -> Result<Rat> {
    if a.dim() != b.dim() {
        return Err(Error::LengthMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut total = rat_int(0);
    let mut weight = rat(1, 2);
    for (x, y) in a.coords.iter().zip(&b.coords) {
        let gap = if x >= y { x - y } else { y - x };
        total += gap * &weight;
        weight /= rat_int(2);
    }
    Ok(total)
}

/// Coordinatewise squeeze `x -> x/2 + 1/4`; the image lies in [1/4, 3/4].
pub fn iota(p: &CubePoint) -> CubePoint {
    let quarter = rat(1, 4);
    let coords = p.coords.iter().map(|x| x / rat_int(2) + &quarter).collect();
    CubePoint::new(coords).expect("squeeze stays inside the cube")
}

/// A structure already living in the cube: points as coordinates, with
/// relations as index tuples. Relations are tracked by point identity, so
/// pointwise maps preserve them verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedStructure {
    points: Vec<CubePoint>,
    relations: BTreeMap<String, Relation>,
}

impl EmbeddedStructure {
    pub fn new(points: Vec<CubePoint>, relations: BTreeMap<String, Relation>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.dim();
            if points.iter().any(|p| p.dim() != dim) {
                return Err(Error::InvalidParameter(
                    "embedded points have mixed dimensions".into(),
                ));
            }
        }
        let n = points.len();
        for (name, rel) in &relations {
            for t in &rel.tuples {
                if t.len() != rel.arity || t.iter().any(|&i| i >= n) {
                    return Err(Error::InvalidParameter(format!(
                        "relation {name:?} has a malformed tuple {t:?}"
                    )));
                }
            }
        }
        Ok(EmbeddedStructure { points, relations })
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.points
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }
}

/// Applies `iota` to every point; relation tuples are untouched because
/// they index points, mirroring the product lift over all relation powers.
pub fn iota_structure(e: &EmbeddedStructure) -> EmbeddedStructure {
    EmbeddedStructure {
        points: e.points.iter().map(iota).collect(),
        relations: e.relations.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::structure_from_upper;

    fn cube(coords: &[Rat]) -> CubePoint {
        CubePoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn kuratowski_examples() {
        let s = structure_from_upper(2, &[(0, 1, rat_int(1))]);
        let image = kuratowski_embed(&s, 2).unwrap();
        assert_eq!(image[0], cube(&[rat_int(0), rat_int(1)]));
        assert_eq!(image[1], cube(&[rat_int(1), rat_int(0)]));

        let single = structure_from_upper(1, &[]);
        assert_eq!(
            kuratowski_embed(&single, 1).unwrap()[0],
            cube(&[rat_int(0)])
        );

        let triangle = structure_from_upper(
            3,
            &[(0, 1, rat(1, 2)), (0, 2, rat(1, 2)), (1, 2, rat(1, 2))],
        );
        let image = kuratowski_embed(&triangle, 5).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_ne!(image[i], image[j]);
            }
        }
    }

    #[test]
    fn kuratowski_preconditions() {
        let wide = structure_from_upper(2, &[(0, 1, rat_int(2))]);
        assert!(kuratowski_embed(&wide, 2).is_err());
        let ok = structure_from_upper(2, &[(0, 1, rat_int(1))]);
        assert!(kuratowski_embed(&ok, 1).is_err());
    }

    #[test]
    fn kuratowski_sup_identity() {
        // max_n |phi(x)_n - phi(y)_n| = d(x, y), exactly.
        let s = structure_from_upper(
            4,
            &[
                (0, 1, rat(1, 3)),
                (0, 2, rat(1, 2)),
                (0, 3, rat(2, 3)),
                (1, 2, rat(1, 2)),
                (1, 3, rat(1, 2)),
                (2, 3, rat(1, 4)),
            ],
        );
        let image = kuratowski_embed(&s, 7).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let sup = image[x]
                    .coords()
                    .iter()
                    .zip(image[y].coords())
                    .map(|(a, b)| if a >= b { a - b } else { b - a })
                    .max()
                    .unwrap();
                assert_eq!(&sup, s.dist(x, y));
            }
        }
    }

    #[test]
    fn cube_metric_examples() {
        let a = cube(&[rat_int(0), rat_int(1)]);
        assert_eq!(cube_metric(&a, &a).unwrap(), rat_int(0));
        let b = cube(&[rat_int(1), rat_int(0)]);
        assert_eq!(cube_metric(&a, &b).unwrap(), rat(3, 4));

        // Differing by 1 in coordinate n only contributes 2^-n.
        for n in 1..=4usize {
            let mut x = vec![rat_int(0); 4];
            x[n - 1] = rat_int(1);
            let p = cube(&x);
            let origin = cube(&vec![rat_int(0); 4]);
            assert_eq!(cube_metric(&p, &origin).unwrap(), rat(1, 1 << n));
        }

        assert!(cube_metric(&a, &cube(&[rat_int(0)])).is_err());
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(&cube(&[rat_int(0)])), cube(&[rat(1, 4)]));
        assert_eq!(iota(&cube(&[rat_int(1)])), cube(&[rat(3, 4)]));
        assert_eq!(iota(&cube(&[rat(1, 2)])), cube(&[rat(1, 2)]));

        // Double application composes the affine maps: x/4 + 3/8.
        let twice = iota(&iota(&cube(&[rat_int(0), rat_int(1), rat(1, 2)])));
        assert_eq!(twice, cube(&[rat(3, 8), rat(5, 8), rat(1, 2)]));
    }

    #[test]
    fn iota_bounds_and_contraction() {
        let points = [
            cube(&[rat_int(0), rat_int(1), rat(1, 3)]),
            cube(&[rat(2, 3), rat(1, 5), rat_int(1)]),
            cube(&[rat(1, 2), rat(1, 2), rat(1, 7)]),
        ];
        for p in &points {
            let q = iota(p);
            for c in q.coords() {
                assert!(*c >= rat(1, 4) && *c <= rat(3, 4));
            }
            for other in &points {
                let before = cube_metric(p, other).unwrap();
                let after = cube_metric(&iota(p), &iota(other)).unwrap();
                assert_eq!(after * rat_int(2), before);
            }
        }
    }

    #[test]
    fn iota_structure_preserves_relations() {
        let points = vec![cube(&[rat_int(0)]), cube(&[rat_int(1)])];
        let relations = BTreeMap::from([("R".to_string(), Relation::new(2, [vec![0, 1]]))]);
        let e = EmbeddedStructure::new(points, relations).unwrap();
        let squeezed = iota_structure(&e);
        assert_eq!(squeezed.relations(), e.relations());
        assert_eq!(squeezed.points()[0], cube(&[rat(1, 4)]));
        assert_eq!(squeezed.points()[1], cube(&[rat(3, 4)]));
        // Injectivity: distinct points stay distinct.
        assert_ne!(squeezed.points()[0], squeezed.points()[1]);

        let again = iota_structure(&squeezed);
        assert_eq!(again.relations(), e.relations());
    }
}
