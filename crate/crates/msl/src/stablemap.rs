//! Combinatorial types of rational stable maps to the target curve.
//!
//! A type records the leaf-labeled tree (as a laminar family of splits),
//! the cell of L carrying each vertex, and the forced integer direction of
//! every bounded edge. Directions are not free data: balancing propagates
//! the fixed end directions through the tree, so the direction of the edge
//! for a split S is the sum of the end directions on the S side. A type is
//! admissible when every local Riemann-Hurwitz number is non-negative, and
//! it contributes a cell exactly when its placement constraints admit a
//! strictly positive solution, which is certified by an exact LP.

use crate::linalg::{self, Int, Rat};
use crate::lp::{self, LpResult};
use crate::target::{Cell, TargetCurve};
use crate::trees::LeafSet;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// The degree: one integer direction vector per marking. The first
/// `num_contracted` entries are zero (contracted marked ends); the rest
/// are the non-zero directions of the fixed unbounded ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSpec {
    pub num_contracted: usize,
    pub directions: Vec<Vec<Int>>,
}

impl DegreeSpec {
    pub fn total_markings(&self) -> usize {
        self.directions.len()
    }

    pub fn validate(&self, l: &TargetCurve) -> Result<(), String> {
        if self.num_contracted > self.directions.len() {
            return Err("more contracted ends than markings".into());
        }
        for (i, w) in self.directions.iter().enumerate() {
            if w.len() != l.dim {
                return Err(format!("direction {} has wrong ambient dimension", i));
            }
            let zero = w.iter().all(|x| x.is_zero());
            if i < self.num_contracted && !zero {
                return Err(format!(
                    "marking {} should be contracted (zero direction)",
                    i + 1
                ));
            }
            if i >= self.num_contracted && zero {
                return Err(format!("marking {} must have a non-zero direction", i + 1));
            }
        }
        Ok(())
    }

    /// The covering degree d: every ray direction class of L must receive
    /// the same total weight d per ray.
    pub fn covering_degree(&self, l: &TargetCurve) -> Result<Int, String> {
        self.validate(l)?;
        // total end weight per primitive direction
        let mut per_dir: BTreeMap<Vec<Int>, Int> = BTreeMap::new();
        for w in self.directions.iter().skip(self.num_contracted) {
            let (p, m) = linalg::primitive_and_length(w);
            *per_dir.entry(p).or_insert_with(Int::zero) += m;
        }
        let mut rays_per_dir: BTreeMap<Vec<Int>, Int> = BTreeMap::new();
        for r in &l.rays {
            *rays_per_dir
                .entry(r.direction.clone())
                .or_insert_with(Int::zero) += Int::one();
        }
        for dir in per_dir.keys() {
            if !rays_per_dir.contains_key(dir) {
                return Err(format!(
                    "end direction {:?} matches no ray of the target",
                    dir
                ));
            }
        }
        let mut d: Option<Int> = None;
        for (dir, count) in &rays_per_dir {
            let total = per_dir.get(dir).cloned().unwrap_or_else(Int::zero);
            let (q, r) = num_integer::Integer::div_rem(&total, count);
            if !r.is_zero() {
                return Err(format!("unbalanced degree over ray direction {:?}", dir));
            }
            match &d {
                None => d = Some(q),
                Some(prev) if *prev != q => {
                    return Err("unbalanced degree: rays are covered unequally".into())
                }
                _ => {}
            }
        }
        let d = d.ok_or_else(|| "target has no rays".to_string())?;
        if d <= Int::zero() {
            return Err("covering degree must be positive".into());
        }
        Ok(d)
    }

    /// Expected dimension of the moduli complex:
    /// N - d * sum over target vertices of (valence - 2) - 2.
    pub fn expected_dimension(&self, l: &TargetCurve) -> Result<i64, String> {
        let d = self.covering_degree(l)?;
        let d: i64 = i64::try_from(&d).map_err(|_| "degree too large")?;
        Ok(self.total_markings() as i64 - d * l.total_excess_valence() - 2)
    }
}

/// Where a star item comes from: an unbounded marked end or a bounded edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarSource {
    /// 1-based marking label
    End(usize),
    /// index into StableMapType::edges
    Edge(usize),
}

/// The local picture at one vertex of the abstract tree.
#[derive(Debug, Clone)]
pub struct LocalStar {
    /// adjacent ends and edges with their outgoing directions at this vertex
    pub items: Vec<(StarSource, Vec<Int>)>,
    /// local covering degree
    pub degree: Int,
    /// number of adjacent contracted ends and contracted edges
    pub contracted_count: usize,
    /// valence of the target point (q+1 over a vertex of L, 2 inside an edge)
    pub target_valence: usize,
}

impl LocalStar {
    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    /// Local Riemann-Hurwitz number; types with a negative value at some
    /// vertex parametrize no maps and are discarded.
    pub fn riemann_hurwitz(&self) -> i64 {
        let d: i64 = i64::try_from(&self.degree).expect("degree fits i64");
        self.num_items() as i64
            - self.contracted_count as i64
            - d * (self.target_valence as i64 - 2)
            - 2
    }

    /// Dimension of the local deformation space: RH + (number of
    /// contracted items) over a target vertex, items - 3 inside an edge.
    pub fn rdim(&self) -> i64 {
        let d: i64 = i64::try_from(&self.degree).expect("degree fits i64");
        let r = if self.target_valence > 2 { 1 } else { 0 };
        self.num_items() as i64 - d * (self.target_valence as i64 - 2) + r - 3
    }
}

/// A bounded edge of the abstract tree. `direction` is the tangent at the
/// parent endpoint (towards the child), equal to the sum of the end
/// directions on the child side. `image` is the 1-dimensional cell of L
/// containing the edge's image together with the sign relating the edge
/// direction to the cell direction; contracted edges have none.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeEdge {
    pub parent: usize,
    pub child: usize,
    /// leaves on the child side (never containing label 1)
    pub split: LeafSet,
    pub direction: Vec<Int>,
    /// lattice length of `direction` (0 for contracted edges)
    pub weight: Int,
    /// (cell, sign): direction = sign * weight * cell_direction
    pub image: Option<(Cell, i8)>,
}

/// A strictly interior point of the cell of a type: positions of vertices
/// inside 1-dimensional target cells (lattice-length coordinate) and the
/// lengths of all bounded edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub positions: BTreeMap<usize, Rat>,
    pub lengths: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct StableMapType {
    pub num_markings: usize,
    pub num_contracted: usize,
    /// laminar family defining the tree, sorted ascending by bitmask;
    /// vertex 0 is the root (the side of label 1), vertex i >= 1 is the
    /// node of splits[i-1]
    pub splits: Vec<LeafSet>,
    pub vertex_cell: Vec<Cell>,
    /// vertex of each marking label (1-based labels, entry k-1)
    pub leaf_vertex: Vec<usize>,
    pub edges: Vec<TypeEdge>,
    pub stars: Vec<LocalStar>,
    /// dimension of the cell: vertices inside 1-dim cells plus bounded
    /// edges contracted to target vertices
    pub dimension: usize,
    pub witness: Witness,
}

impl StableMapType {
    /// Canonical identity of a combinatorial type.
    pub fn key(&self) -> (Vec<LeafSet>, Vec<Cell>) {
        (self.splits.clone(), self.vertex_cell.clone())
    }

    pub fn num_vertices(&self) -> usize {
        self.splits.len() + 1
    }

    /// Maximal types: every vertex over a vertex of L is locally rigid
    /// (RH = 0 with no contracted item, so the local deformation space is
    /// a point), vertices inside edges are 3-valent, and no edge is
    /// contracted to a vertex of L.
    pub fn is_maximal(&self) -> bool {
        for (v, star) in self.stars.iter().enumerate() {
            match self.vertex_cell[v] {
                Cell::Vertex(_) => {
                    if star.riemann_hurwitz() != 0 || star.contracted_count != 0 {
                        return false;
                    }
                }
                _ => {
                    if star.num_items() != 3 {
                        return false;
                    }
                }
            }
        }
        for e in &self.edges {
            if e.weight.is_zero() && matches!(self.vertex_cell[e.parent], Cell::Vertex(_)) {
                return false;
            }
        }
        true
    }

    /// Position of a vertex given coordinates for the movable ones.
    pub fn vertex_position(&self, l: &TargetCurve, v: usize, coords: &Witness) -> Vec<Rat> {
        match self.vertex_cell[v] {
            Cell::Vertex(w) => l.vertices[w].clone(),
            cell => l.point_position(cell, &coords.positions[&v]),
        }
    }
}

fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn neg(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| -x).collect()
}

/// The 1-dimensional target cell carrying a straight segment of primitive
/// direction p from (the cell of) u to (the cell of) v, with the sign
/// relating p to the cell's own direction; `None` if no such cell exists.
fn edge_image(l: &TargetCurve, cu: Cell, cv: Cell, p: &[Int]) -> Option<(Cell, i8)> {
    let pn = neg(p);
    match (cu, cv) {
        (Cell::Vertex(a), Cell::Vertex(b)) => {
            for (i, e) in l.edges.iter().enumerate() {
                if e.tail == a && e.head == b && e.direction == p {
                    return Some((Cell::Edge(i), 1));
                }
                if e.tail == b && e.head == a && e.direction == pn {
                    return Some((Cell::Edge(i), -1));
                }
            }
            None
        }
        (Cell::Vertex(a), Cell::Edge(i)) => {
            let e = &l.edges[i];
            if e.tail == a && e.direction == p {
                Some((Cell::Edge(i), 1))
            } else if e.head == a && e.direction == pn {
                Some((Cell::Edge(i), -1))
            } else {
                None
            }
        }
        (Cell::Edge(i), Cell::Vertex(b)) => {
            let e = &l.edges[i];
            if e.head == b && e.direction == p {
                Some((Cell::Edge(i), 1))
            } else if e.tail == b && e.direction == pn {
                Some((Cell::Edge(i), -1))
            } else {
                None
            }
        }
        (Cell::Edge(i), Cell::Edge(j)) if i == j => {
            let e = &l.edges[i];
            if e.direction == p {
                Some((Cell::Edge(i), 1))
            } else if e.direction == pn {
                Some((Cell::Edge(i), -1))
            } else {
                None
            }
        }
        (Cell::Vertex(a), Cell::Ray(i)) => {
            let r = &l.rays[i];
            if r.base == a && r.direction == p {
                Some((Cell::Ray(i), 1))
            } else {
                None
            }
        }
        (Cell::Ray(i), Cell::Vertex(b)) => {
            let r = &l.rays[i];
            if r.base == b && r.direction == pn {
                Some((Cell::Ray(i), -1))
            } else {
                None
            }
        }
        (Cell::Ray(i), Cell::Ray(j)) if i == j => {
            let r = &l.rays[i];
            if r.direction == p {
                Some((Cell::Ray(i), 1))
            } else if r.direction == pn {
                Some((Cell::Ray(i), -1))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Assemble and validate a combinatorial type from a laminar family and a
/// cell assignment. Returns `None` when the data is inconsistent (end or
/// edge cannot map where requested, negative RH, or empty cell).
pub fn build_type(
    l: &TargetCurve,
    deg: &DegreeSpec,
    splits: &[LeafSet],
    cells: &[Cell],
) -> Option<StableMapType> {
    let n_total = deg.total_markings();
    let num_vertices = splits.len() + 1;
    assert_eq!(cells.len(), num_vertices);
    debug_assert!(
        splits.windows(2).all(|w| w[0] < w[1]),
        "splits must be sorted"
    );

    // Tree structure from the laminar family. The parent of a split is
    // its minimal proper superset (or the root); leaves attach to the
    // minimal split containing them.
    let parent_of = |s: LeafSet| -> usize {
        let mut best: Option<usize> = None;
        for (j, &t) in splits.iter().enumerate() {
            if t != s && (t & s) == s {
                if best.map_or(true, |b| splits[b].count_ones() > t.count_ones()) {
                    best = Some(j);
                }
            }
        }
        best.map_or(0, |j| j + 1)
    };
    let mut leaf_vertex = vec![0usize; n_total];
    for label in 1..=n_total {
        let bit: LeafSet = 1 << (label - 1);
        let mut best: Option<usize> = None;
        for (j, &t) in splits.iter().enumerate() {
            if t & bit != 0 && best.map_or(true, |b: usize| splits[b].count_ones() > t.count_ones())
            {
                best = Some(j);
            }
        }
        leaf_vertex[label - 1] = best.map_or(0, |j| j + 1);
    }

    // Edge directions from balancing: tangent at the parent endpoint is
    // the sum of end directions on the child side.
    let mut edges = Vec::with_capacity(splits.len());
    for (j, &s) in splits.iter().enumerate() {
        let child = j + 1;
        let parent = parent_of(s);
        let mut w = vec![Int::zero(); l.dim];
        for label in 1..=n_total {
            if s & (1 << (label - 1)) != 0 {
                for k in 0..l.dim {
                    w[k] += &deg.directions[label - 1][k];
                }
            }
        }
        let (p, m) = linalg::primitive_and_length(&w);
        let image = if m.is_zero() {
            if cells[parent] != cells[child] {
                return None;
            }
            None
        } else {
            Some(edge_image(l, cells[parent], cells[child], &p)?)
        };
        edges.push(TypeEdge {
            parent,
            child,
            split: s,
            direction: w,
            weight: m,
            image,
        });
    }

    // Per-vertex stars, with end placement checks.
    let mut items_at: Vec<Vec<(StarSource, Vec<Int>)>> = vec![Vec::new(); num_vertices];
    for label in 1..=n_total {
        let v = leaf_vertex[label - 1];
        let w = deg.directions[label - 1].clone();
        if !is_zero_vec(&w) {
            let (p, _) = linalg::primitive_and_length(&w);
            match cells[v] {
                Cell::Vertex(a) => {
                    // must leave along an unbounded ray of L
                    if !l.rays.iter().any(|r| r.base == a && r.direction == p) {
                        return None;
                    }
                }
                Cell::Ray(i) => {
                    if l.rays[i].direction != p {
                        return None;
                    }
                }
                Cell::Edge(_) => return None,
            }
        }
        items_at[v].push((StarSource::End(label), w));
    }
    for (ei, e) in edges.iter().enumerate() {
        items_at[e.parent].push((StarSource::Edge(ei), e.direction.clone()));
        items_at[e.child].push((StarSource::Edge(ei), neg(&e.direction)));
    }

    // No 2-valent vertices in the abstract tree.
    if items_at.iter().any(|it| it.len() < 3) {
        return None;
    }

    let mut stars = Vec::with_capacity(num_vertices);
    for v in 0..num_vertices {
        let items = items_at[v].clone();
        let contracted_count = items.iter().filter(|(_, w)| is_zero_vec(w)).count();
        let (degree, target_valence) = match cells[v] {
            Cell::Vertex(a) => {
                let star = l.star(a);
                let mut coverage = vec![Int::zero(); star.len()];
                for (_, w) in &items {
                    if is_zero_vec(w) {
                        continue;
                    }
                    let (p, m) = linalg::primitive_and_length(w);
                    let Some(k) = star.iter().position(|it| it.outgoing == p) else {
                        return None;
                    };
                    coverage[k] += m;
                }
                let d = coverage[0].clone();
                if coverage.iter().any(|c| *c != d) {
                    // cannot happen for balanced stars; defensive
                    return None;
                }
                (d, star.len())
            }
            cell => {
                let u = l.cell_direction(cell).to_vec();
                let mut pos = Int::zero();
                let mut neg_side = Int::zero();
                for (_, w) in &items {
                    if is_zero_vec(w) {
                        continue;
                    }
                    let (p, m) = linalg::primitive_and_length(w);
                    if p == u {
                        pos += m;
                    } else if p == neg(&u) {
                        neg_side += m;
                    } else {
                        return None;
                    }
                }
                if pos != neg_side {
                    return None;
                }
                (pos, 2)
            }
        };
        let star = LocalStar {
            items,
            degree,
            contracted_count,
            target_valence,
        };
        // A star of local degree 0 is a component contracted to a point;
        // it is always realizable (by a constant map), so the local
        // realizability condition only applies at positive degree.
        if !star.degree.is_zero() && star.riemann_hurwitz() < 0 {
            return None;
        }
        stars.push(star);
    }

    // Strict feasibility of the placement constraints via exact LP.
    let witness = interior_point(l, cells, &edges)?;

    let dimension = cells
        .iter()
        .filter(|c| !matches!(c, Cell::Vertex(_)))
        .count()
        + edges
            .iter()
            .filter(|e| e.weight.is_zero() && matches!(cells[e.parent], Cell::Vertex(_)))
            .count();

    Some(StableMapType {
        num_markings: n_total,
        num_contracted: deg.num_contracted,
        splits: splits.to_vec(),
        vertex_cell: cells.to_vec(),
        leaf_vertex,
        edges,
        stars,
        dimension,
        witness,
    })
}

/// Strictly interior point of the placement polyhedron, or None if empty.
/// Variables: one coordinate per vertex inside a 1-dim cell, one length
/// per bounded edge, plus a slack maximized subject to all strict
/// inequalities exceeding it.
fn interior_point(l: &TargetCurve, cells: &[Cell], edges: &[TypeEdge]) -> Option<Witness> {
    let mut var_of_vertex: BTreeMap<usize, usize> = BTreeMap::new();
    for (v, c) in cells.iter().enumerate() {
        if !matches!(c, Cell::Vertex(_)) {
            let idx = var_of_vertex.len();
            var_of_vertex.insert(v, idx);
        }
    }
    let nt = var_of_vertex.len();
    let ne = edges.len();
    let s_var = nt + ne;
    let mut num_vars = s_var + 1;

    // position of vertex v as (constant vector, coefficient of its variable)
    let pos_parts = |v: usize| -> (Vec<Rat>, Option<(usize, Vec<Rat>)>) {
        match cells[v] {
            Cell::Vertex(w) => (l.vertices[w].clone(), None),
            cell => {
                let base = match cell {
                    Cell::Edge(i) => l.vertices[l.edges[i].tail].clone(),
                    Cell::Ray(i) => l.vertices[l.rays[i].base].clone(),
                    Cell::Vertex(_) => unreachable!(),
                };
                let dir = linalg::rat_of(l.cell_direction(cell));
                (base, Some((var_of_vertex[&v], dir)))
            }
        }
    };

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let new_row = |num_vars: usize| vec![Rat::zero(); num_vars];

    // pos(child) - pos(parent) = length * direction, coordinate-wise
    for (ei, e) in edges.iter().enumerate() {
        let (cu, tu) = pos_parts(e.parent);
        let (cv, tv) = pos_parts(e.child);
        for k in 0..l.dim {
            let mut row = new_row(num_vars);
            if let Some((var, dir)) = &tv {
                row[*var] = dir[k].clone();
            }
            if let Some((var, dir)) = &tu {
                row[*var] = &row[*var] - &dir[k];
            }
            row[nt + ei] = -Rat::from_integer(e.direction[k].clone());
            rows.push(row);
            rhs.push(&cu[k] - &cv[k]);
        }
    }

    // strict inequalities: each quantity >= s via a fresh slack variable
    let strict_ge = |expr: Vec<(usize, Rat)>,
                     constant: Rat,
                     rows: &mut Vec<Vec<Rat>>,
                     rhs: &mut Vec<Rat>,
                     num_vars: &mut usize| {
        // expr + constant - s - slack = 0
        for r in rows.iter_mut() {
            r.push(Rat::zero());
        }
        let mut row = vec![Rat::zero(); *num_vars + 1];
        for (var, coef) in expr {
            row[var] = &row[var] + &coef;
        }
        row[s_var] = -Rat::one();
        row[*num_vars] = -Rat::one();
        *num_vars += 1;
        rows.push(row);
        rhs.push(-constant);
    };

    for (&v, &var) in &var_of_vertex {
        strict_ge(
            vec![(var, Rat::one())],
            Rat::zero(),
            &mut rows,
            &mut rhs,
            &mut num_vars,
        );
        if let Cell::Edge(i) = cells[v] {
            // coordinate stays below the lattice length of the edge
            strict_ge(
                vec![(var, -Rat::one())],
                l.edges[i].length.clone(),
                &mut rows,
                &mut rhs,
                &mut num_vars,
            );
        }
    }
    for ei in 0..ne {
        strict_ge(
            vec![(nt + ei, Rat::one())],
            Rat::zero(),
            &mut rows,
            &mut rhs,
            &mut num_vars,
        );
    }
    // s <= 1 keeps the objective bounded
    strict_ge(
        vec![(s_var, -Rat::one())],
        Rat::one(),
        &mut rows,
        &mut rhs,
        &mut num_vars,
    );

    let mut c = vec![Rat::zero(); num_vars];
    c[s_var] = Rat::one();
    match lp::maximize(&rows, &rhs, &c) {
        LpResult::Optimal(value, x) if value > Rat::zero() => {
            let positions = var_of_vertex
                .iter()
                .map(|(&v, &var)| (v, x[var].clone()))
                .collect();
            let lengths = (0..ne).map(|ei| x[nt + ei].clone()).collect();
            Some(Witness { positions, lengths })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub max_cells: Option<usize>,
    pub dimension_filter: Option<i64>,
}

/// All admissible non-empty combinatorial types for (L, degree), in a
/// deterministic order.
pub fn enumerate_types(
    l: &TargetCurve,
    deg: &DegreeSpec,
    opts: &EnumerateOptions,
) -> Result<Vec<StableMapType>, String> {
    deg.validate(l)?;
    let d = deg.covering_degree(l)?;
    let n_total = deg.total_markings();
    if n_total > 10 {
        return Err(format!(
            "bound exceeded: too many markings ({} > 10)",
            n_total
        ));
    }
    if d > Int::from(6) {
        return Err(format!("bound exceeded: covering degree {} > 6", d));
    }

    // Admissible splits: edge direction zero or parallel to a cell of L.
    let mut cell_dirs: Vec<Vec<Int>> = Vec::new();
    for e in &l.edges {
        cell_dirs.push(e.direction.clone());
        cell_dirs.push(neg(&e.direction));
    }
    for r in &l.rays {
        cell_dirs.push(r.direction.clone());
        cell_dirs.push(neg(&r.direction));
    }
    let admissible: Vec<LeafSet> = crate::trees::all_splits(n_total)
        .into_iter()
        .filter(|&s| {
            let mut w = vec![Int::zero(); l.dim];
            for label in 1..=n_total {
                if s & (1 << (label - 1)) != 0 {
                    for k in 0..l.dim {
                        w[k] += &deg.directions[label - 1][k];
                    }
                }
            }
            let (p, m) = linalg::primitive_and_length(&w);
            m.is_zero() || cell_dirs.contains(&p)
        })
        .collect();

    let compatible = |a: LeafSet, b: LeafSet| -> bool { a & b == 0 || a & b == a || a & b == b };

    let mut all_cells: Vec<Cell> = (0..l.vertices.len()).map(Cell::Vertex).collect();
    all_cells.extend((0..l.edges.len()).map(Cell::Edge));
    all_cells.extend((0..l.rays.len()).map(Cell::Ray));

    let mut out: Vec<StableMapType> = Vec::new();
    let mut family: Vec<LeafSet> = Vec::new();

    fn families(
        admissible: &[LeafSet],
        start: usize,
        family: &mut Vec<LeafSet>,
        compatible: &dyn Fn(LeafSet, LeafSet) -> bool,
        visit: &mut dyn FnMut(&[LeafSet]),
    ) {
        visit(family);
        for i in start..admissible.len() {
            let s = admissible[i];
            if family.iter().all(|&t| compatible(s, t)) {
                family.push(s);
                families(admissible, i + 1, family, compatible, visit);
                family.pop();
            }
        }
    }

    let mut truncated = false;
    {
        let mut visit = |fam: &[LeafSet]| {
            if truncated {
                return;
            }
            // assignments over vertices 0..=len(fam)
            let nv = fam.len() + 1;
            let mut cells = vec![Cell::Vertex(0); nv];
            // plain product enumeration with validation at the leaf
            fn rec(
                l: &TargetCurve,
                deg: &DegreeSpec,
                fam: &[LeafSet],
                all_cells: &[Cell],
                cells: &mut Vec<Cell>,
                v: usize,
                out: &mut Vec<StableMapType>,
                opts: &EnumerateOptions,
                truncated: &mut bool,
            ) {
                if *truncated {
                    return;
                }
                if v == cells.len() {
                    if let Some(t) = build_type(l, deg, fam, cells) {
                        if opts
                            .dimension_filter
                            .map_or(true, |dim| t.dimension as i64 == dim)
                        {
                            out.push(t);
                            if opts.max_cells.map_or(false, |m| out.len() >= m) {
                                *truncated = true;
                            }
                        }
                    }
                    return;
                }
                for &c in all_cells {
                    cells[v] = c;
                    rec(l, deg, fam, all_cells, cells, v + 1, out, opts, truncated);
                }
            }
            rec(
                l,
                deg,
                fam,
                &all_cells,
                &mut cells,
                0,
                &mut out,
                opts,
                &mut truncated,
            );
        };
        families(&admissible, 0, &mut family, &compatible, &mut visit);
    }
    if truncated {
        return Err(format!(
            "bound exceeded: more than {} cells",
            opts.max_cells.unwrap_or(0)
        ));
    }
    Ok(out)
}

/// Small worked examples reused across tests and the documentation.
pub mod examples {
    use super::*;
    use crate::linalg::int;

    /// The plane tropical line: rays -e1, -e2 and e1+e2 from the origin.
    pub fn intro_line() -> TargetCurve {
        TargetCurve::standard_line(2)
    }

    /// Degree ((-1,0), (-1,0), (0,-1), (0,-1), (2,2)) with no contracted
    /// ends: two weight-1 ends on each coordinate ray and one weight-2
    /// end on the diagonal.
    pub fn intro_degree() -> DegreeSpec {
        DegreeSpec {
            num_contracted: 0,
            directions: vec![
                vec![int(-1), int(0)],
                vec![int(-1), int(0)],
                vec![int(0), int(-1)],
                vec![int(0), int(-1)],
                vec![int(2), int(2)],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::examples::{intro_degree, intro_line};
    use super::*;
    use crate::linalg::int;

    #[test]
    fn intro_degree_and_dimension() {
        let l = intro_line();
        let deg = intro_degree();
        assert_eq!(deg.covering_degree(&l).unwrap(), int(2));
        assert_eq!(deg.expected_dimension(&l).unwrap(), 1);
    }

    #[test]
    fn intro_enumeration() {
        let l = intro_line();
        let deg = intro_degree();
        let types = enumerate_types(&l, &deg, &EnumerateOptions::default()).unwrap();
        // one vertex type (the origin of the fan) and four rays
        assert_eq!(
            types.len(),
            5,
            "{:?}",
            types.iter().map(|t| t.key()).collect::<Vec<_>>()
        );
        let maximal: Vec<&StableMapType> = types.iter().filter(|t| t.is_maximal()).collect();
        assert_eq!(maximal.len(), 4);
        for t in &types {
            assert!(t.dimension <= 1);
            if t.is_maximal() {
                assert_eq!(t.dimension, 1);
            } else {
                assert_eq!(t.dimension, 0);
            }
        }
    }

    #[test]
    fn intro_excluded_type_has_negative_rh() {
        // Both weight-1 pairs merged onto their rays simultaneously: the
        // central vertex keeps only the diagonal end, RH = -1, so the
        // enumeration must not contain it (and build_type rejects it).
        let l = intro_line();
        let deg = intro_degree();
        // The pair {1,2} is encoded from the other side as {3,4,5}, which
        // contains {3,4}, so the double merge is the laminar family below.
        let fam = vec![
            crate::trees::leafset_from(&[3, 4]),
            crate::trees::leafset_from(&[3, 4, 5]),
        ];
        // Try all assignments; none is admissible: the middle vertex would
        // keep only the diagonal end and its two bounded edges, which
        // forces a negative local realizability index.
        let mut found = false;
        for ca in [Cell::Vertex(0), Cell::Ray(0), Cell::Ray(1), Cell::Ray(2)] {
            for cb in [Cell::Vertex(0), Cell::Ray(0), Cell::Ray(1), Cell::Ray(2)] {
                for cc in [Cell::Vertex(0), Cell::Ray(0), Cell::Ray(1), Cell::Ray(2)] {
                    if build_type(&l, &deg, &fam, &[ca, cb, cc]).is_some() {
                        found = true;
                    }
                }
            }
        }
        assert!(!found);
    }

    #[test]
    fn star_type_rh_is_one() {
        let l = intro_line();
        let deg = intro_degree();
        let t = build_type(&l, &deg, &[], &[Cell::Vertex(0)]).unwrap();
        assert_eq!(t.stars[0].riemann_hurwitz(), 1);
        assert_eq!(t.stars[0].rdim(), 1);
        assert_eq!(t.dimension, 0);
        assert!(!t.is_maximal());
    }
}
