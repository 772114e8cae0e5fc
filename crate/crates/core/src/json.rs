//! Interchange formats.
//!
//! Rationals travel as `"num/den"` strings (or a bare integer string) and
//! are always emitted reduced. Map keys are sorted and relation tuples
//! lexicographic, so serialization is canonical: equal values produce
//! byte-identical output.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bilipschitz::LipZetaPattern;
use crate::embeddings::CubePoint;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, LeftInvariantMetric, WeightedGenerators};
use crate::heaps::HeapTable;
use crate::isometry::{Signature, ZetaPattern};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::stone::{BoolRelation, BooleanStructure};
use crate::structure::{MetricStructure, Relation};

#[derive(Serialize, Deserialize)]
struct RelationDto {
    arity: usize,
    tuples: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct StructureDto {
    points: Vec<String>,
    metric: Vec<Vec<String>>,
    #[serde(default)]
    relations: BTreeMap<String, RelationDto>,
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Rat>>> {
    rows.iter()
        .map(|row| row.iter().map(|s| parse_rat(s)).collect())
        .collect()
}

fn format_matrix(rows: &[Vec<Rat>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|row| row.iter().map(format_rat).collect())
        .collect()
}

pub fn structure_from_json(text: &str) -> Result<MetricStructure> {
    let dto: StructureDto = serde_json::from_str(text)?;
    let metric = parse_matrix(&dto.metric)?;
    let relations = dto
        .relations
        .into_iter()
        .map(|(name, rel)| (name, Relation::new(rel.arity, rel.tuples)))
        .collect();
    MetricStructure::new(dto.points, metric, relations)
}

pub fn structure_to_json(s: &MetricStructure) -> String {
    let dto = StructureDto {
        points: s.points().to_vec(),
        metric: format_matrix(s.metric().entries()),
        relations: s
            .relations()
            .iter()
            .map(|(name, rel)| {
                (
                    name.clone(),
                    RelationDto {
                        arity: rel.arity,
                        tuples: rel.tuples.iter().cloned().collect(),
                    },
                )
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("structure serializes")
}

#[derive(Serialize, Deserialize)]
struct GroupDto {
    order: usize,
    table: Vec<Vec<usize>>,
}

pub fn group_from_json(text: &str) -> Result<FiniteGroup> {
    let dto: GroupDto = serde_json::from_str(text)?;
    if dto.table.len() != dto.order {
        return Err(Error::InvalidParameter(format!(
            "declared order {} but table has {} rows",
            dto.order,
            dto.table.len()
        )));
    }
    FiniteGroup::from_table(dto.table)
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    let dto = GroupDto {
        order: g.order(),
        table: g.table().to_vec(),
    };
    serde_json::to_string(&dto).expect("group serializes")
}

#[derive(Serialize, Deserialize)]
struct HeapDto {
    order: usize,
    op: Vec<Vec<Vec<usize>>>,
}

pub fn heap_from_json(text: &str) -> Result<HeapTable> {
    let dto: HeapDto = serde_json::from_str(text)?;
    let n = dto.order;
    if dto.op.len() != n
        || dto
            .op
            .iter()
            .any(|p| p.len() != n || p.iter().any(|r| r.len() != n))
    {
        return Err(Error::InvalidParameter(
            "heap table is not an n x n x n grid".into(),
        ));
    }
    let flat = dto.op.into_iter().flatten().flatten().collect();
    HeapTable::from_op(n, flat)
}

pub fn heap_to_json(h: &HeapTable) -> String {
    let n = h.order();
    let op: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| (0..n).map(|z| h.op(x, y, z)).collect())
                .collect()
        })
        .collect();
    serde_json::to_string(&HeapDto { order: n, op }).expect("heap serializes")
}

#[derive(Serialize, Deserialize)]
struct BoolRelationDto {
    arity: usize,
    tuples: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct BooleanDto {
    elements: Vec<u32>,
    zero: u32,
    one: u32,
    not: Vec<(u32, u32)>,
    and: Vec<(u32, u32, u32)>,
    or: Vec<(u32, u32, u32)>,
    #[serde(default)]
    relations: BTreeMap<String, BoolRelationDto>,
}

pub fn boolean_from_json(text: &str) -> Result<BooleanStructure> {
    let dto: BooleanDto = serde_json::from_str(text)?;
    Ok(BooleanStructure {
        elements: dto.elements,
        zero: dto.zero,
        one: dto.one,
        not: dto.not.into_iter().collect(),
        and: dto.and.into_iter().map(|(x, y, z)| ((x, y), z)).collect(),
        or: dto.or.into_iter().map(|(x, y, z)| ((x, y), z)).collect(),
        relations: dto
            .relations
            .into_iter()
            .map(|(name, rel)| {
                (
                    name,
                    BoolRelation {
                        arity: rel.arity,
                        tuples: rel.tuples.into_iter().collect(),
                    },
                )
            })
            .collect(),
    })
}

pub fn boolean_to_json(a: &BooleanStructure) -> String {
    let dto = BooleanDto {
        elements: a.elements.clone(),
        zero: a.zero,
        one: a.one,
        not: a.not.iter().map(|(&x, &y)| (x, y)).collect(),
        and: a.and.iter().map(|(&(x, y), &z)| (x, y, z)).collect(),
        or: a.or.iter().map(|(&(x, y), &z)| (x, y, z)).collect(),
        relations: a
            .relations
            .iter()
            .map(|(name, rel)| {
                (
                    name.clone(),
                    BoolRelationDto {
                        arity: rel.arity,
                        tuples: rel.tuples.iter().cloned().collect(),
                    },
                )
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("algebra serializes")
}

#[derive(Serialize, Deserialize)]
struct ZetaDto {
    n: usize,
    #[serde(default)]
    constraints: BTreeMap<String, Vec<Vec<usize>>>,
}

pub fn zeta_from_json(text: &str) -> Result<ZetaPattern> {
    let dto: ZetaDto = serde_json::from_str(text)?;
    ZetaPattern::new(
        dto.n,
        dto.constraints
            .into_iter()
            .map(|(name, tuples)| (name, tuples.into_iter().collect()))
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct LipZetaDto {
    n: usize,
    #[serde(default)]
    constraints: BTreeMap<String, Vec<Vec<usize>>>,
    r: Vec<String>,
    #[serde(default)]
    t: BTreeMap<String, BTreeMap<String, String>>,
}

fn lip_zeta_from_dto(dto: LipZetaDto) -> Result<LipZetaPattern> {
    let constraints: BTreeMap<String, BTreeSet<Vec<usize>>> = dto
        .constraints
        .into_iter()
        .map(|(name, tuples)| (name, tuples.into_iter().collect()))
        .collect();
    let r = dto
        .r
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>>>()?;
    let mut t = BTreeMap::new();
    for (name, by_k) in dto.t {
        let mut parsed = BTreeMap::new();
        for (k, v) in by_k {
            let k: usize = k
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad density index {k:?}")))?;
            parsed.insert(k, parse_rat(&v)?);
        }
        t.insert(name, parsed);
    }
    LipZetaPattern::new(dto.n, constraints, r, t)
}

fn lip_zeta_to_dto(zeta: &LipZetaPattern) -> LipZetaDto {
    LipZetaDto {
        n: zeta.n(),
        constraints: zeta
            .constraints()
            .iter()
            .map(|(name, tuples)| (name.clone(), tuples.iter().cloned().collect()))
            .collect(),
        r: zeta.r().iter().map(format_rat).collect(),
        t: zeta
            .t()
            .iter()
            .map(|(name, by_k)| {
                (
                    name.clone(),
                    by_k.iter()
                        .map(|(k, v)| (k.to_string(), format_rat(v)))
                        .collect(),
                )
            })
            .collect(),
    }
}

/// Parses a pattern list: either a JSON array of patterns or one pattern.
pub fn patterns_from_json(text: &str) -> Result<Vec<LipZetaPattern>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let dtos: Vec<LipZetaDto> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    dtos.into_iter().map(lip_zeta_from_dto).collect()
}

pub fn patterns_to_json(patterns: &[LipZetaPattern]) -> String {
    let dtos: Vec<LipZetaDto> = patterns.iter().map(lip_zeta_to_dto).collect();
    serde_json::to_string(&dtos).expect("patterns serialize")
}

#[derive(Serialize)]
struct SignatureEntryDto {
    matrix: Vec<Vec<String>>,
    patterns: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct SignatureDto {
    n: usize,
    entries: Vec<SignatureEntryDto>,
}

pub fn signature_to_json(sig: &Signature) -> String {
    let dto = SignatureDto {
        n: sig.n,
        entries: sig
            .entries
            .iter()
            .map(|e| SignatureEntryDto {
                matrix: format_matrix(e.matrix.entries()),
                patterns: e
                    .patterns
                    .iter()
                    .map(|(name, tuples)| (name.clone(), tuples.iter().cloned().collect()))
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("signature serializes")
}

pub fn cube_points_to_json(points: &[CubePoint]) -> String {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| p.coords().iter().map(format_rat).collect())
        .collect();
    serde_json::to_string(&rows).expect("cube points serialize")
}

#[derive(Serialize, Deserialize)]
struct WordMetricDto {
    length: Vec<String>,
}

pub fn word_metric_to_json(d: &LeftInvariantMetric) -> String {
    let dto = WordMetricDto {
        length: d.lengths().iter().map(format_rat).collect(),
    };
    serde_json::to_string(&dto).expect("length function serializes")
}

pub fn left_invariant_metric_from_json(g: &FiniteGroup, text: &str) -> Result<LeftInvariantMetric> {
    let dto: WordMetricDto = serde_json::from_str(text)?;
    let length = dto
        .length
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>>>()?;
    LeftInvariantMetric::new(g, length)
}

/// Builds weighted generators from parallel generator/weight lists,
/// closing the set under inverses with matching weights.
pub fn weighted_generators_from_lists(
    g: &FiniteGroup,
    gens: &[usize],
    weights: &[String],
) -> Result<WeightedGenerators> {
    if gens.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: gens.len(),
            right: weights.len(),
        });
    }
    let mut map: BTreeMap<usize, Rat> = BTreeMap::new();
    for (&s, w) in gens.iter().zip(weights) {
        if s >= g.order() {
            return Err(Error::IndexOutOfBounds {
                what: "generator",
                index: s,
                size: g.order(),
            });
        }
        let w = parse_rat(w)?;
        if let Some(prev) = map.get(&s) {
            if *prev != w {
                return Err(Error::InvalidParameter(format!(
                    "generator {s} listed twice with different weights"
                )));
            }
        }
        map.insert(s, w.clone());
        let inv = g.inv(s);
        if let Some(prev) = map.get(&inv) {
            if *prev != w {
                return Err(Error::InvalidParameter(format!(
                    "inverse pair ({s}, {inv}) has conflicting weights"
                )));
            }
        }
        map.insert(inv, w);
    }
    WeightedGenerators::new(g, map)
}
