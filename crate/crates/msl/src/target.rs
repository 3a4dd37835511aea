//! The target: a smooth rational tropical curve L embedded in R^r.
//!
//! L is a tree-shaped one-dimensional polyhedral complex, all of whose
//! edges carry weight one, such that the star of every vertex is, up to a
//! unimodular transformation, the star of a standard line: q+1 primitive
//! directions summing to zero, every q of which form a basis of the
//! saturation of their span. The complex structure is fixed once and for
//! all; interior points of edges are never vertices.

use crate::linalg::{self, Int, Rat};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveEdge {
    pub tail: usize,
    pub head: usize,
    /// primitive integer direction from tail to head
    pub direction: Vec<Int>,
    /// lattice length: head = tail + length * direction
    pub length: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRay {
    pub base: usize,
    /// primitive integer direction pointing to infinity
    pub direction: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetCurve {
    /// ambient dimension r
    pub dim: usize,
    /// vertex positions in Q^r
    pub vertices: Vec<Vec<Rat>>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
}

/// A one- or zero-dimensional cell of L, referenced combinatorially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Ray(usize),
}

/// One item in the star of a vertex: an incident edge or ray together
/// with its outgoing primitive direction.
#[derive(Debug, Clone, PartialEq)]
pub struct StarItem {
    pub cell: Cell,
    pub outgoing: Vec<Int>,
}

impl TargetCurve {
    /// The standard line with q+1 rays in R^q: -e_1, ..., -e_q and
    /// e_0 = e_1 + ... + e_q, all based at the origin. q = 1 gives the
    /// ordinary line through the origin as a degenerate (2-valent but
    /// single-vertex) smooth curve.
    pub fn standard_line(q: usize) -> TargetCurve {
        assert!(q >= 1);
        let mut rays = Vec::new();
        for i in 0..q {
            let mut d = vec![Int::zero(); q];
            d[i] = -Int::one();
            rays.push(CurveRay {
                base: 0,
                direction: d,
            });
        }
        rays.push(CurveRay {
            base: 0,
            direction: vec![Int::one(); q],
        });
        TargetCurve {
            dim: q,
            vertices: vec![vec![Rat::zero(); q]],
            edges: Vec::new(),
            rays,
        }
    }

    /// Incident edges and rays of a vertex with their outgoing primitive
    /// directions, edges first (by index), then rays (by index).
    pub fn star(&self, v: usize) -> Vec<StarItem> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail == v {
                out.push(StarItem {
                    cell: Cell::Edge(i),
                    outgoing: e.direction.clone(),
                });
            } else if e.head == v {
                out.push(StarItem {
                    cell: Cell::Edge(i),
                    outgoing: e.direction.iter().map(|x| -x).collect(),
                });
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.base == v {
                out.push(StarItem {
                    cell: Cell::Ray(i),
                    outgoing: r.direction.clone(),
                });
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.star(v).len()
    }

    /// Direction of a one-dimensional cell (for an edge: tail to head).
    pub fn cell_direction(&self, c: Cell) -> &[Int] {
        match c {
            Cell::Edge(i) => &self.edges[i].direction,
            Cell::Ray(i) => &self.rays[i].direction,
            Cell::Vertex(_) => panic!("vertex has no direction"),
        }
    }

    /// Among the star of vertex v, the item whose outgoing direction u
    /// satisfies w = m * u with integer m >= 1, if any. Directions of
    /// distinct star items of a smooth vertex are never parallel, so the
    /// answer is unique.
    pub fn ray_of_direction(&self, v: usize, w: &[Int]) -> Option<(StarItem, Int)> {
        let (p, m) = linalg::primitive_and_length(w);
        if m.is_zero() {
            return None;
        }
        self.star(v)
            .into_iter()
            .find(|item| item.outgoing == p)
            .map(|item| (item, m))
    }

    /// Validate smoothness; returns the list of violations (empty = smooth).
    pub fn validate_smooth(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let nv = self.vertices.len();
        if nv == 0 {
            return vec!["curve has no vertices".into()];
        }
        for (i, p) in self.vertices.iter().enumerate() {
            if p.len() != self.dim {
                bad.push(format!("vertex {} has wrong ambient dimension", i));
            }
        }
        // tree shape: connected with |E| = |V| - 1
        if self.edges.len() + 1 != nv {
            bad.push(format!(
                "not a tree: {} vertices but {} bounded edges",
                nv,
                self.edges.len()
            ));
        }
        let mut reach = vec![false; nv];
        reach[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !reach[b] {
                        reach[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if !reach.iter().all(|&x| x) {
            bad.push("not connected".into());
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (p, len) = linalg::primitive_and_length(&e.direction);
            if len != Int::one() || p != e.direction {
                bad.push(format!("edge {} direction is not primitive", i));
            }
            if e.length <= Rat::zero() {
                bad.push(format!("edge {} has non-positive length", i));
            }
            // geometry: head = tail + length * direction
            for k in 0..self.dim {
                let expect = &self.vertices[e.tail][k]
                    + &e.length * Rat::from_integer(e.direction[k].clone());
                if self.vertices[e.head][k] != expect {
                    bad.push(format!(
                        "edge {} endpoints do not match its direction/length",
                        i
                    ));
                    break;
                }
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            let (p, len) = linalg::primitive_and_length(&r.direction);
            if len != Int::one() || p != r.direction {
                bad.push(format!("ray {} direction is not primitive", i));
            }
        }
        for v in 0..nv {
            let star = self.star(v);
            let q1 = star.len();
            if q1 < 2 {
                bad.push(format!("vertex {} has valence {} < 2", v, q1));
                continue;
            }
            if q1 == 2 && nv > 1 {
                // A 2-valent vertex subdivides a segment; the complex
                // structure must not contain it (except for the single
                // vertex presenting a plain line).
                bad.push(format!("vertex {} is 2-valent", v));
                continue;
            }
            // directions sum to zero
            let mut sum = vec![Int::zero(); self.dim];
            for item in &star {
                for k in 0..self.dim {
                    sum[k] += &item.outgoing[k];
                }
            }
            if !sum.iter().all(|x| x.is_zero()) {
                bad.push(format!(
                    "vertex {}: outgoing directions do not sum to zero",
                    v
                ));
            }
            // every q-subset spans a saturated rank-q lattice
            for skip in 0..q1 {
                let rows: Vec<Vec<Int>> = star
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, item)| item.outgoing.clone())
                    .collect();
                if linalg::gcd_maximal_minors(&rows) != Int::one() {
                    bad.push(format!(
                        "vertex {}: directions omitting star item {} are not a saturated basis",
                        v, skip
                    ));
                }
            }
        }
        bad
    }

    /// Position of a point of L given by a cell and a lattice-length
    /// coordinate along it (0 for a vertex).
    pub fn point_position(&self, cell: Cell, t: &Rat) -> Vec<Rat> {
        match cell {
            Cell::Vertex(v) => self.vertices[v].clone(),
            Cell::Edge(i) => {
                let e = &self.edges[i];
                (0..self.dim)
                    .map(|k| {
                        &self.vertices[e.tail][k] + t * Rat::from_integer(e.direction[k].clone())
                    })
                    .collect()
            }
            Cell::Ray(i) => {
                let r = &self.rays[i];
                (0..self.dim)
                    .map(|k| {
                        &self.vertices[r.base][k] + t * Rat::from_integer(r.direction[k].clone())
                    })
                    .collect()
            }
        }
    }

    /// Sum of (valence - 2) over all vertices; the global count entering
    /// the expected dimension of the moduli complex.
    pub fn total_excess_valence(&self) -> i64 {
        (0..self.vertices.len())
            .map(|v| self.valence(v) as i64 - 2)
            .sum()
    }
}

/// Ready-made target curves for tests and documentation.
pub mod examples {
    use super::*;
    use crate::linalg::{int, rat};

    /// A smooth curve with one bounded edge: rays -e1, -e2 at the origin,
    /// an edge of direction (1,1) to the vertex (1,1), and rays e1, e2
    /// there.
    pub fn two_vertex_example() -> TargetCurve {
        TargetCurve {
            dim: 2,
            vertices: vec![vec![rat(0), rat(0)], vec![rat(1), rat(1)]],
            edges: vec![CurveEdge {
                tail: 0,
                head: 1,
                direction: vec![int(1), int(1)],
                length: rat(1),
            }],
            rays: vec![
                CurveRay {
                    base: 0,
                    direction: vec![int(-1), int(0)],
                },
                CurveRay {
                    base: 0,
                    direction: vec![int(0), int(-1)],
                },
                CurveRay {
                    base: 1,
                    direction: vec![int(1), int(0)],
                },
                CurveRay {
                    base: 1,
                    direction: vec![int(0), int(1)],
                },
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn standard_lines_are_smooth() {
        for q in 1..=6 {
            let l = TargetCurve::standard_line(q);
            assert!(
                l.validate_smooth().is_empty(),
                "standard_line({}) not smooth",
                q
            );
        }
    }

    #[test]
    fn subdivided_ray_is_flagged() {
        // The line presented with a spurious midpoint vertex.
        let l = TargetCurve {
            dim: 1,
            vertices: vec![vec![rat(0)], vec![rat(1)]],
            edges: vec![CurveEdge {
                tail: 0,
                head: 1,
                direction: vec![int(1)],
                length: rat(1),
            }],
            rays: vec![
                CurveRay {
                    base: 0,
                    direction: vec![int(-1)],
                },
                CurveRay {
                    base: 1,
                    direction: vec![int(1)],
                },
            ],
        };
        let bad = l.validate_smooth();
        assert!(bad.iter().any(|s| s.contains("2-valent")), "{:?}", bad);
    }

    #[test]
    fn non_unimodular_star_is_flagged() {
        // (1,1), (1,-1), (-2,0): balanced but pairs have index 2.
        let l = TargetCurve {
            dim: 2,
            vertices: vec![vec![rat(0), rat(0)]],
            edges: vec![],
            rays: vec![
                CurveRay {
                    base: 0,
                    direction: vec![int(1), int(1)],
                },
                CurveRay {
                    base: 0,
                    direction: vec![int(1), int(-1)],
                },
                CurveRay {
                    base: 0,
                    direction: vec![int(-2), int(0)],
                },
            ],
        };
        let bad = l.validate_smooth();
        assert!(bad
            .iter()
            .any(|s| s.contains("not primitive") || s.contains("saturated")));
    }

    #[test]
    fn two_vertex_curve_is_smooth() {
        let l = crate::target::examples::two_vertex_example();
        assert!(l.validate_smooth().is_empty());
    }

    #[test]
    fn ray_lookup() {
        let l = TargetCurve::standard_line(2);
        let (item, m) = l.ray_of_direction(0, &[int(2), int(2)]).unwrap();
        assert_eq!(m, int(2));
        assert_eq!(item.cell, Cell::Ray(2));
        assert!(l.ray_of_direction(0, &[int(1), int(2)]).is_none());
        assert!(l.ray_of_direction(0, &[int(0), int(0)]).is_none());
    }
}
