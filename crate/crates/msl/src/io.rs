//! JSON interchange (schema `msl-fan/1`): target curves, degree data, job
//! configuration, local fans, complexes and balancing reports. All
//! numbers are exact: integers as JSON numbers, rationals as strings
//! ("p" or "p/q").

use crate::complex::{BalanceReport, ModuliComplex};
use crate::linalg::{Int, Rat};
use crate::localfan::{Resolution, VertexStar, WeightedRay};
use crate::stablemap::{build_type, DegreeSpec, StableMapType};
use crate::target::{Cell, CurveEdge, CurveRay, TargetCurve};
use crate::trees::{leafset_from, leafset_members, LeafSet};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: &str = "msl-fan/1";

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_string(s: &str) -> Result<Rat, String> {
    let parse_int = |t: &str| -> Result<Int, String> {
        t.trim()
            .parse::<Int>()
            .map_err(|e| format!("bad number {:?}: {}", t, e))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rat::new(parse_int(p)?, denom))
        }
    }
}

fn int_to_i64(x: &Int) -> Result<i64, String> {
    x.to_i64()
        .ok_or_else(|| format!("integer {} out of range", x))
}

fn ivec_to_i64(v: &[Int]) -> Result<Vec<i64>, String> {
    v.iter().map(int_to_i64).collect()
}

fn ivec_from_i64(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn rvec_to_string(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

fn rvec_from_string(v: &[String]) -> Result<Vec<Rat>, String> {
    v.iter().map(|s| rat_from_string(s)).collect()
}

// ---------------------------------------------------------------- target

#[derive(Serialize, Deserialize, Clone)]
pub struct EdgeDto {
    pub tail: usize,
    pub head: usize,
    pub direction: Vec<i64>,
    pub length: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct RayDto {
    pub base: usize,
    pub direction: Vec<i64>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TargetDto {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub edges: Vec<EdgeDto>,
    pub rays: Vec<RayDto>,
}

impl TargetDto {
    pub fn from_curve(l: &TargetCurve) -> Result<TargetDto, String> {
        Ok(TargetDto {
            dim: l.dim,
            vertices: l.vertices.iter().map(|v| rvec_to_string(v)).collect(),
            edges: l
                .edges
                .iter()
                .map(|e| {
                    Ok(EdgeDto {
                        tail: e.tail,
                        head: e.head,
                        direction: ivec_to_i64(&e.direction)?,
                        length: rat_to_string(&e.length),
                    })
                })
                .collect::<Result<_, String>>()?,
            rays: l
                .rays
                .iter()
                .map(|r| {
                    Ok(RayDto {
                        base: r.base,
                        direction: ivec_to_i64(&r.direction)?,
                    })
                })
                .collect::<Result<_, String>>()?,
        })
    }

    pub fn to_curve(&self) -> Result<TargetCurve, String> {
        Ok(TargetCurve {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| rvec_from_string(v))
                .collect::<Result<_, _>>()?,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    Ok(CurveEdge {
                        tail: e.tail,
                        head: e.head,
                        direction: ivec_from_i64(&e.direction),
                        length: rat_from_string(&e.length)?,
                    })
                })
                .collect::<Result<_, String>>()?,
            rays: self
                .rays
                .iter()
                .map(|r| CurveRay {
                    base: r.base,
                    direction: ivec_from_i64(&r.direction),
                })
                .collect(),
        })
    }
}

// ---------------------------------------------------------------- degree

#[derive(Serialize, Deserialize, Clone)]
pub struct DegreeDto {
    /// number of contracted marked ends (the first labels)
    #[serde(default)]
    pub contracted: usize,
    /// integer direction vectors of all ends, contracted ones included as
    /// zero vectors
    pub directions: Vec<Vec<i64>>,
}

impl DegreeDto {
    pub fn from_spec(d: &DegreeSpec) -> Result<DegreeDto, String> {
        Ok(DegreeDto {
            contracted: d.num_contracted,
            directions: d
                .directions
                .iter()
                .map(|v| ivec_to_i64(v))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn to_spec(&self) -> DegreeSpec {
        DegreeSpec {
            num_contracted: self.contracted,
            directions: self.directions.iter().map(|v| ivec_from_i64(v)).collect(),
        }
    }
}

// ------------------------------------------------------------ job config

#[derive(Serialize, Deserialize, Clone)]
pub struct ConfigDto {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_file: Option<String>,
    pub degree: DegreeDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cells: Option<usize>,
}

// ------------------------------------------------------------- local fan

#[derive(Serialize, Deserialize, Clone)]
pub struct StarEndDto {
    pub ray: usize,
    pub weight: u64,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct StarDto {
    pub q: usize,
    pub ends: Vec<StarEndDto>,
    #[serde(default)]
    pub contracted: bool,
}

impl StarDto {
    pub fn to_star(&self) -> VertexStar {
        VertexStar {
            q: self.q,
            ends: self
                .ends
                .iter()
                .map(|e| crate::localfan::StarEnd {
                    ray: e.ray,
                    weight: e.weight,
                })
                .collect(),
            contracted: self.contracted,
        }
    }
}

fn resolution_label(r: &Resolution) -> String {
    match r {
        Resolution::PairMerge { i, j } => format!("merge:{},{}", i, j),
        Resolution::EndSplit {
            i,
            d1,
            d2,
            side1,
            side2,
        } => format!("split:{}={}+{}:{:?}|{:?}", i, d1, d2, side1, side2),
        Resolution::ContractedSlide { i } => format!("slide:1->{}", i),
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct LocalRayDto {
    pub resolution: String,
    pub primitive: Vec<i64>,
    pub lattice_length: i64,
    pub weight: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct LocalFanDto {
    pub schema: String,
    pub num_markings: usize,
    pub rays: Vec<LocalRayDto>,
    pub balanced: bool,
}

pub fn local_fan_dto(
    star: &VertexStar,
    fan: &[WeightedRay],
    balanced: bool,
) -> Result<LocalFanDto, String> {
    Ok(LocalFanDto {
        schema: SCHEMA.to_string(),
        num_markings: star.num_markings(),
        rays: fan
            .iter()
            .map(|r| {
                Ok(LocalRayDto {
                    resolution: resolution_label(&r.resolution),
                    primitive: ivec_to_i64(&r.primitive)?,
                    lattice_length: int_to_i64(&r.lattice_length)?,
                    weight: rat_to_string(&r.weight),
                })
            })
            .collect::<Result<_, String>>()?,
        balanced,
    })
}

// --------------------------------------------------------------- complex

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CellDto {
    Vertex { index: usize },
    Edge { index: usize },
    Ray { index: usize },
}

impl CellDto {
    pub fn from_cell(c: Cell) -> CellDto {
        match c {
            Cell::Vertex(i) => CellDto::Vertex { index: i },
            Cell::Edge(i) => CellDto::Edge { index: i },
            Cell::Ray(i) => CellDto::Ray { index: i },
        }
    }

    pub fn to_cell(&self) -> Cell {
        match *self {
            CellDto::Vertex { index } => Cell::Vertex(index),
            CellDto::Edge { index } => Cell::Edge(index),
            CellDto::Ray { index } => Cell::Ray(index),
        }
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TypeDto {
    /// splits as sorted label lists (the side not containing label 1)
    pub splits: Vec<Vec<usize>>,
    /// cells of the target: entry v is the image cell of vertex v (vertex
    /// 0 is the side of label 1 in every split)
    pub cells: Vec<CellDto>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct SummaryDto {
    pub num_cells: usize,
    pub num_maximal: usize,
    pub cells_by_dimension: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ComplexDto {
    pub schema: String,
    pub target: TargetDto,
    pub degree: DegreeDto,
    pub expected_dimension: i64,
    pub max_dimension: usize,
    pub summary: SummaryDto,
    pub cells: Vec<TypeDto>,
}

pub fn complex_dto(
    l: &TargetCurve,
    deg: &DegreeSpec,
    m: &ModuliComplex,
) -> Result<ComplexDto, String> {
    let n = m.num_markings;
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cells = Vec::with_capacity(m.types.len());
    for (t, w) in m.types.iter().zip(&m.weights) {
        *by_dim.entry(t.dimension).or_insert(0) += 1;
        cells.push(TypeDto {
            splits: t
                .splits
                .iter()
                .map(|&s: &LeafSet| leafset_members(s, n))
                .collect(),
            cells: t
                .vertex_cell
                .iter()
                .map(|&c| CellDto::from_cell(c))
                .collect(),
            dimension: t.dimension,
            weight: w.as_ref().map(rat_to_string),
        });
    }
    Ok(ComplexDto {
        schema: SCHEMA.to_string(),
        target: TargetDto::from_curve(l)?,
        degree: DegreeDto::from_spec(deg)?,
        expected_dimension: m.expected_dim,
        max_dimension: m.max_dim,
        summary: SummaryDto {
            num_cells: m.types.len(),
            num_maximal: m.weights.iter().filter(|w| w.is_some()).count(),
            cells_by_dimension: by_dim,
        },
        cells,
    })
}

/// Rebuild a complex from its serialized form (used by the balance
/// checker so that hand-edited weights can be verified). Every cell is
/// re-validated through the type constructor.
pub fn complex_from_dto(
    dto: &ComplexDto,
) -> Result<(TargetCurve, DegreeSpec, ModuliComplex), String> {
    if dto.schema != SCHEMA {
        return Err(format!(
            "unsupported schema {:?} (expected {:?})",
            dto.schema, SCHEMA
        ));
    }
    let l = dto.target.to_curve()?;
    let deg = dto.degree.to_spec();
    let mut types: Vec<StableMapType> = Vec::with_capacity(dto.cells.len());
    let mut weights: Vec<Option<Rat>> = Vec::with_capacity(dto.cells.len());
    for (i, c) in dto.cells.iter().enumerate() {
        let splits: Vec<LeafSet> = c.splits.iter().map(|s| leafset_from(s)).collect();
        let cells: Vec<Cell> = c.cells.iter().map(|d| d.to_cell()).collect();
        let t = build_type(&l, &deg, &splits, &cells)
            .ok_or_else(|| format!("cell {} in the file is not realizable", i))?;
        if t.dimension != c.dimension {
            return Err(format!(
                "cell {}: stored dimension {} does not match computed {}",
                i, c.dimension, t.dimension
            ));
        }
        weights.push(match &c.weight {
            Some(s) => {
                let w = rat_from_string(s)?;
                if w.is_negative() {
                    return Err(format!("cell {}: negative weight", i));
                }
                Some(w)
            }
            None => None,
        });
        types.push(t);
    }
    let max_dim = types.iter().map(|t| t.dimension).max().unwrap_or(0);
    Ok((
        l,
        deg.clone(),
        ModuliComplex {
            num_markings: deg.total_markings(),
            types,
            weights,
            expected_dim: dto.expected_dimension,
            max_dim,
        },
    ))
}

// ------------------------------------------------------------- balancing

#[derive(Serialize, Deserialize, Clone)]
pub struct FacetDto {
    pub cell: usize,
    pub adjacent: Vec<usize>,
    pub residual: Vec<String>,
    pub balanced: bool,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct BalanceDto {
    pub schema: String,
    pub balanced: bool,
    pub facets: Vec<FacetDto>,
}

pub fn balance_dto(report: &BalanceReport) -> BalanceDto {
    BalanceDto {
        schema: SCHEMA.to_string(),
        balanced: report.balanced,
        facets: report
            .facets
            .iter()
            .map(|f| FacetDto {
                cell: f.tau_index,
                adjacent: f.adjacent.clone(),
                residual: rvec_to_string(&f.residual),
                balanced: f.balanced,
            })
            .collect(),
    }
}
