//! Assembly of the full moduli complex: weights of maximal cells via the
//! edge-cutting evaluation matrix, embedding into distance-plus-anchor
//! coordinates, facet adjacency by elementary degenerations, and the
//! global balancing check at every codimension-one cell.

use crate::hurwitz::{self, HurwitzProblem};
use crate::linalg::{self, Int, Rat};
use crate::stablemap::{enumerate_types, DegreeSpec, EnumerateOptions, StableMapType};
use crate::target::{Cell, TargetCurve};
use crate::trees::{self, LeafSet, QuotientLattice};
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Column layout of the local coordinates of a cell: one position scalar
/// per vertex inside a 1-dimensional target cell (in vertex order), then
/// one length per bounded edge.
pub struct Layout {
    pub var_of_vertex: BTreeMap<usize, usize>,
    pub num_vertex_vars: usize,
    pub num_edges: usize,
}

impl Layout {
    pub fn of(alpha: &StableMapType) -> Layout {
        let mut var_of_vertex = BTreeMap::new();
        for (v, c) in alpha.vertex_cell.iter().enumerate() {
            if !matches!(c, Cell::Vertex(_)) {
                let idx = var_of_vertex.len();
                var_of_vertex.insert(v, idx);
            }
        }
        Layout {
            num_vertex_vars: var_of_vertex.len(),
            var_of_vertex,
            num_edges: alpha.edges.len(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vertex_vars + self.num_edges
    }

    pub fn edge_col(&self, ei: usize) -> usize {
        self.num_vertex_vars + ei
    }
}

/// Homogeneous placement constraints of a cell in its local coordinates:
/// for every bounded edge, delta pos(child) - delta pos(parent) -
/// delta length * direction = 0, one row per ambient coordinate. The
/// tangent space of the cell is the kernel.
pub fn placement_rows(l: &TargetCurve, alpha: &StableMapType, lay: &Layout) -> Vec<Vec<Rat>> {
    let mut rows = Vec::new();
    for (ei, e) in alpha.edges.iter().enumerate() {
        let dirs = |v: usize| -> Option<(usize, Vec<Rat>)> {
            lay.var_of_vertex
                .get(&v)
                .map(|&var| (var, linalg::rat_of(l.cell_direction(alpha.vertex_cell[v]))))
        };
        let tu = dirs(e.parent);
        let tv = dirs(e.child);
        for k in 0..l.dim {
            let mut row = vec![Rat::zero(); lay.num_vars()];
            if let Some((var, dir)) = &tv {
                row[*var] = &row[*var] + &dir[k];
            }
            if let Some((var, dir)) = &tu {
                row[*var] = &row[*var] - &dir[k];
            }
            row[lay.edge_col(ei)] = -Rat::from_integer(e.direction[k].clone());
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// The evaluation-difference matrix obtained by cutting every bounded
/// edge: one row per edge, columns ordered as [vertex positions | cut
/// half-length at the parent side per edge | cut half-length at the child
/// side per edge]. Entries are in the lattice-length coordinate of the
/// 1-dimensional target cell carrying the edge.
pub fn gluing_matrix(_l: &TargetCurve, alpha: &StableMapType) -> Result<Vec<Vec<Int>>, String> {
    if !alpha.is_maximal() {
        return Err("evaluation matrix is only defined for maximal types".into());
    }
    let lay = Layout::of(alpha);
    let ne = lay.num_edges;
    let cols = lay.num_vertex_vars + 2 * ne;
    let mut rows = Vec::with_capacity(ne);
    for (ei, e) in alpha.edges.iter().enumerate() {
        let sw: Int = match &e.image {
            Some((_, s)) => Int::from(*s) * &e.weight,
            None => {
                // contracted edge: its image point must sit inside a
                // 1-dimensional cell so that it can be cut there
                if matches!(alpha.vertex_cell[e.parent], Cell::Vertex(_)) {
                    return Err(
                        "cut point at a vertex of the target — no 1-dimensional cell".into(),
                    );
                }
                Int::zero()
            }
        };
        let mut row = vec![Int::zero(); cols];
        if let Some(&var) = lay.var_of_vertex.get(&e.parent) {
            row[var] += 1;
        }
        if let Some(&var) = lay.var_of_vertex.get(&e.child) {
            row[var] -= 1;
        }
        row[lay.num_vertex_vars + ei] = sw.clone();
        row[lay.num_vertex_vars + ne + ei] = sw;
        rows.push(row);
    }
    Ok(rows)
}

/// Local cover-counting problem of a vertex mapping to a target vertex:
/// ramification profiles grouped by the cells of the target star.
fn vertex_hurwitz(l: &TargetCurve, alpha: &StableMapType, v: usize) -> Result<Rat, String> {
    let Cell::Vertex(w) = alpha.vertex_cell[v] else {
        return Err("vertex does not map to a vertex of the target".into());
    };
    let star = l.star(w);
    let mut profiles: Vec<Vec<u64>> = vec![Vec::new(); star.len()];
    for (_, dir) in &alpha.stars[v].items {
        if dir.iter().all(|x| x.is_zero()) {
            return Err("contracted end at a target vertex in a maximal type".into());
        }
        let (p, m) = linalg::primitive_and_length(dir);
        let k = star
            .iter()
            .position(|it| it.outgoing == p)
            .ok_or("edge direction not in the target star")?;
        profiles[k].push(m.to_u64().ok_or("weight too large")?);
    }
    let d = alpha.stars[v]
        .degree
        .to_usize()
        .ok_or("local degree too large")?;
    Ok(hurwitz::hurwitz_number(&HurwitzProblem { d, profiles }))
}

/// Weight of a maximal cell: gcd of the maximal minors of the
/// evaluation-difference matrix times the product of local cover counts
/// at all vertices mapping to vertices of the target.
pub fn cell_weight(l: &TargetCurve, alpha: &StableMapType) -> Result<Rat, String> {
    let g = gluing_matrix(l, alpha)?;
    let mut w = Rat::from_integer(linalg::gcd_maximal_minors(&g));
    for v in 0..alpha.num_vertices() {
        if matches!(alpha.vertex_cell[v], Cell::Vertex(_)) {
            w *= vertex_hurwitz(l, alpha, v)?;
        }
    }
    Ok(w)
}

/// Dimension of the quotient of distance coordinates for N markings.
pub fn quotient_dim(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        trees::num_pairs(n) - n
    }
}

fn split_qcoords(n: usize, s: LeafSet) -> Vec<Rat> {
    if n < 4 {
        return Vec::new();
    }
    let lat = QuotientLattice::shared(n);
    let rep = trees::canonical_rep_mod_un(n, &linalg::rat_of(&trees::split_vector(n, s)));
    lat.coords(&rep)
        .expect("split vector lies in the quotient lattice")
}

/// Total weight of the non-contracted ends (denominator of the anchor
/// average used when no end is contracted).
fn total_end_weight(deg: &DegreeSpec) -> Int {
    let mut m = Int::zero();
    for dir in &deg.directions {
        let (_, len) = linalg::primitive_and_length(dir);
        m += len;
    }
    m
}

/// Differential of the embedding on a cell: maps a local-coordinate
/// velocity to (quotient-lattice distance coordinates) ++ (anchor
/// velocity in R^r). The anchor is the image of the vertex carrying the
/// first marking when some end is contracted, and otherwise the average
/// of the end vertices' images weighted by end weights.
pub fn embed_differential(
    l: &TargetCurve,
    deg: &DegreeSpec,
    alpha: &StableMapType,
    lay: &Layout,
    delta: &[Rat],
) -> Vec<Rat> {
    let n = alpha.num_markings;
    let mut out = vec![Rat::zero(); quotient_dim(n) + l.dim];
    for (ei, e) in alpha.edges.iter().enumerate() {
        let dl = &delta[lay.edge_col(ei)];
        if dl.is_zero() {
            continue;
        }
        for (k, c) in split_qcoords(n, e.split).iter().enumerate() {
            out[k] = &out[k] + dl * c;
        }
    }
    let qd = quotient_dim(n);
    let vertex_velocity = |v: usize| -> Option<(usize, Vec<Rat>)> {
        lay.var_of_vertex
            .get(&v)
            .map(|&var| (var, linalg::rat_of(l.cell_direction(alpha.vertex_cell[v]))))
    };
    let add_anchor = |v: usize, scale: &Rat, out: &mut Vec<Rat>| {
        if let Some((var, dir)) = vertex_velocity(v) {
            for k in 0..l.dim {
                out[qd + k] = &out[qd + k] + scale * &delta[var] * &dir[k];
            }
        }
    };
    if alpha.num_contracted >= 1 {
        add_anchor(
            alpha.leaf_vertex[0],
            &Rat::from_integer(Int::from(1)),
            &mut out,
        );
    } else {
        let total = Rat::from_integer(total_end_weight(deg));
        for (label, dir) in deg.directions.iter().enumerate() {
            let (_, m) = linalg::primitive_and_length(dir);
            if m.is_zero() {
                continue;
            }
            let scale = Rat::from_integer(m) / &total;
            add_anchor(alpha.leaf_vertex[label], &scale, &mut out);
        }
    }
    out
}

/// Embedding of an actual point of the cell (used for serialization and
/// the linearity self-checks): distance class of the metric tree in
/// quotient coordinates plus the absolute anchor position.
pub fn embed_point(
    l: &TargetCurve,
    deg: &DegreeSpec,
    alpha: &StableMapType,
    witness: &crate::stablemap::Witness,
) -> Vec<Rat> {
    let n = alpha.num_markings;
    let qd = quotient_dim(n);
    let mut out = vec![Rat::zero(); qd + l.dim];
    for (ei, e) in alpha.edges.iter().enumerate() {
        let len = &witness.lengths[ei];
        for (k, c) in split_qcoords(n, e.split).iter().enumerate() {
            out[k] = &out[k] + len * c;
        }
    }
    let add = |v: usize, scale: &Rat, out: &mut Vec<Rat>| {
        let pos = alpha.vertex_position(l, v, witness);
        for k in 0..l.dim {
            out[qd + k] = &out[qd + k] + scale * &pos[k];
        }
    };
    if alpha.num_contracted >= 1 {
        add(
            alpha.leaf_vertex[0],
            &Rat::from_integer(Int::from(1)),
            &mut out,
        );
    } else {
        let total = Rat::from_integer(total_end_weight(deg));
        for (label, dir) in deg.directions.iter().enumerate() {
            let (_, m) = linalg::primitive_and_length(dir);
            if m.is_zero() {
                continue;
            }
            let scale = Rat::from_integer(m) / &total;
            add(alpha.leaf_vertex[label], &scale, &mut out);
        }
    }
    out
}

/// A facet of the polyhedral cell of a type. `col` is a local coordinate
/// that sits at its bound exactly on this facet, `inward_sign` the sign of
/// a tangent vector in that coordinate pointing from the facet back into
/// the cell, and `key` identifies the combinatorial type of the facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneration {
    pub col: usize,
    pub inward_sign: i8,
    pub key: (Vec<LeafSet>, Vec<Cell>),
}

/// One bound of a local coordinate together with the combinatorial move
/// it triggers when it becomes tight.
struct Bound {
    col: usize,
    value: Rat,
    lower: bool,
    mv: Move,
}

#[derive(Clone, Copy)]
enum Move {
    Contract(usize),
    Slide(usize, usize), // vertex of the type, vertex of the target
}

/// All facets of the cell of a type, as candidate face keys. A candidate
/// is an actual face of the complex exactly when its key occurs among the
/// enumerated types.
///
/// A facet is cut out by one coordinate bound becoming tight, but that can
/// force further bounds tight with it (the placement constraints can tie
/// several coordinates together, e.g. edges mapping onto the same segment
/// of the target), so a single facet may contract several edges and slide
/// several vertices at once. A bound is forced exactly when its coordinate
/// is proportional, on the tangent space of the cell, to the cutting one
/// and takes its bound value on the sliced affine subspace; the candidate
/// is a genuine facet when the slice still has a relatively interior point
/// (certified by an exact feasibility program).
pub fn degenerations(l: &TargetCurve, alpha: &StableMapType) -> Vec<Degeneration> {
    let lay = Layout::of(alpha);
    if lay.num_vars() == 0 {
        return Vec::new();
    }
    let rows = placement_rows(l, alpha, &lay);
    let kbasis = linalg::nullspace(&rows);
    if kbasis.is_empty() {
        return Vec::new();
    }
    // witness value of every local coordinate
    let mut xstar = vec![Rat::zero(); lay.num_vars()];
    for (&v, &var) in &lay.var_of_vertex {
        xstar[var] = alpha.witness.positions[&v].clone();
    }
    for ei in 0..lay.num_edges {
        xstar[lay.edge_col(ei)] = alpha.witness.lengths[ei].clone();
    }
    // every coordinate bound of the cell
    let mut bounds: Vec<Bound> = Vec::new();
    for (&v, &var) in &lay.var_of_vertex {
        match alpha.vertex_cell[v] {
            Cell::Edge(i) => {
                bounds.push(Bound {
                    col: var,
                    value: Rat::zero(),
                    lower: true,
                    mv: Move::Slide(v, l.edges[i].tail),
                });
                bounds.push(Bound {
                    col: var,
                    value: l.edges[i].length.clone(),
                    lower: false,
                    mv: Move::Slide(v, l.edges[i].head),
                });
            }
            Cell::Ray(i) => {
                bounds.push(Bound {
                    col: var,
                    value: Rat::zero(),
                    lower: true,
                    mv: Move::Slide(v, l.rays[i].base),
                });
            }
            Cell::Vertex(_) => unreachable!(),
        }
    }
    for ei in 0..lay.num_edges {
        bounds.push(Bound {
            col: lay.edge_col(ei),
            value: Rat::zero(),
            lower: true,
            mv: Move::Contract(ei),
        });
    }
    // coordinate functional restricted to the tangent space, in the basis
    let functional = |col: usize| -> Vec<Rat> { kbasis.iter().map(|k| k[col].clone()).collect() };
    let mut out: Vec<Degeneration> = Vec::new();
    'cands: for c in &bounds {
        let ac = functional(c.col);
        if ac.iter().all(|x| x.is_zero()) {
            continue; // coordinate constant on the cell: bound never reached
        }
        // displacement of the cutting coordinate down to its bound
        let shift = &c.value - &xstar[c.col];
        let mut forced: Vec<&Bound> = vec![c];
        let mut free: Vec<&Bound> = Vec::new();
        for b in &bounds {
            if std::ptr::eq(b, c) {
                continue;
            }
            let ab = functional(b.col);
            if ab.iter().all(|x| x.is_zero()) {
                continue; // constant and strictly inside by the witness
            }
            // proportional to the cutting functional?
            let pivot = ac.iter().position(|x| !x.is_zero()).unwrap();
            let lam = &ab[pivot] / &ac[pivot];
            if ab.iter().zip(&ac).all(|(x, y)| *x == &lam * y) {
                let val = &xstar[b.col] + &lam * &shift;
                if val == b.value {
                    forced.push(b);
                } else if (b.lower && val < b.value) || (!b.lower && val > b.value) {
                    continue 'cands; // the slice leaves the cell: no face here
                }
            } else {
                free.push(b);
            }
        }
        if !facet_slice_is_nonempty(&kbasis, &xstar, &ac, &shift, &free) {
            continue;
        }
        let Some(key) = degenerate_key(alpha, &forced) else {
            continue;
        };
        if out.iter().any(|d| d.key == key) {
            continue; // several bounds can cut the same facet
        }
        out.push(Degeneration {
            col: c.col,
            inward_sign: if c.lower { 1 } else { -1 },
            key,
        });
    }
    out
}

/// Exact feasibility of the sliced cell: a point of the tangent-space
/// slice where every bound not forced by the slice is strict. Variables
/// are the coefficients in the tangent basis, split into positive and
/// negative parts for the equality-form program.
fn facet_slice_is_nonempty(
    kbasis: &[Vec<Rat>],
    xstar: &[Rat],
    ac: &[Rat],
    shift: &Rat,
    free: &[&Bound],
) -> bool {
    if free.is_empty() {
        return true; // the witness projects onto the slice
    }
    let d = kbasis.len();
    // columns: t+ (d), t- (d), s, then one slack per inequality
    let s_var = 2 * d;
    let num_ineq = free.len() + 1; // free bounds strict, plus s <= 1
    let num_vars = s_var + 1 + num_ineq;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let coef = |row: &mut Vec<Rat>, i: usize, x: Rat| {
        row[i] = &row[i] + &x;
        row[d + i] = &row[d + i] - &x;
    };
    // slice equation: ac . t = shift
    {
        let mut row = vec![Rat::zero(); num_vars];
        for i in 0..d {
            coef(&mut row, i, ac[i].clone());
        }
        rows.push(row);
        rhs.push(shift.clone());
    }
    // each free bound strict by margin s: sign*(x*(col) + a . t - value) - s - slack = 0
    let mut slack = s_var + 1;
    for b in free {
        let sgn = if b.lower {
            Rat::from_integer(Int::from(1))
        } else {
            -Rat::from_integer(Int::from(1))
        };
        let mut row = vec![Rat::zero(); num_vars];
        for i in 0..d {
            coef(&mut row, i, &sgn * &kbasis[i][b.col]);
        }
        row[s_var] = -Rat::from_integer(Int::from(1));
        row[slack] = -Rat::from_integer(Int::from(1));
        slack += 1;
        rows.push(row);
        rhs.push(&sgn * (&b.value - &xstar[b.col]));
    }
    // s <= 1 keeps the program bounded
    {
        let mut row = vec![Rat::zero(); num_vars];
        row[s_var] = Rat::from_integer(Int::from(1));
        row[slack] = Rat::from_integer(Int::from(1));
        rows.push(row);
        rhs.push(Rat::from_integer(Int::from(1)));
    }
    let mut c = vec![Rat::zero(); num_vars];
    c[s_var] = Rat::from_integer(Int::from(1));
    matches!(crate::lp::maximize(&rows, &rhs, &c), crate::lp::LpResult::Optimal(v, _) if v > Rat::zero())
}

/// Combinatorial type obtained by applying a set of moves at once:
/// slide the listed vertices onto target vertices, then contract the
/// listed edges, merging their endpoint classes. Returns None when the
/// merged classes do not agree on a target cell (the candidate is then
/// not a face).
fn degenerate_key(alpha: &StableMapType, forced: &[&Bound]) -> Option<(Vec<LeafSet>, Vec<Cell>)> {
    let mut cells = alpha.vertex_cell.clone();
    let mut contracted = vec![false; alpha.edges.len()];
    for b in forced {
        match b.mv {
            Move::Slide(v, w) => cells[v] = Cell::Vertex(w),
            Move::Contract(ei) => contracted[ei] = true,
        }
    }
    // union-find over the contracted edges
    let nv = alpha.num_vertices();
    let mut rep: Vec<usize> = (0..nv).collect();
    fn find(rep: &mut Vec<usize>, v: usize) -> usize {
        let mut v = v;
        while rep[v] != v {
            rep[v] = rep[rep[v]];
            v = rep[v];
        }
        v
    }
    for (ei, e) in alpha.edges.iter().enumerate() {
        if contracted[ei] {
            let a = find(&mut rep, e.parent);
            let b = find(&mut rep, e.child);
            rep[a.max(b)] = a.min(b);
        }
    }
    // each merged class must sit in a single cell of the target
    let mut class_cell: BTreeMap<usize, Cell> = BTreeMap::new();
    for v in 0..nv {
        let r = find(&mut rep, v);
        match class_cell.get(&r) {
            None => {
                class_cell.insert(r, cells[v]);
            }
            Some(&c) if c == cells[v] => {}
            Some(_) => return None,
        }
    }
    let mut new_splits = Vec::new();
    let mut new_cells = vec![class_cell[&find(&mut rep, 0)]];
    for (ei, e) in alpha.edges.iter().enumerate() {
        if !contracted[ei] {
            new_splits.push(alpha.splits[ei]);
            new_cells.push(class_cell[&find(&mut rep, e.child)]);
        }
    }
    Some((new_splits, new_cells))
}

/// The moduli complex: all types, weights on the maximal ones, and the
/// expected dimension.
pub struct ModuliComplex {
    pub num_markings: usize,
    pub types: Vec<StableMapType>,
    /// weight per type; `Some` exactly on maximal types
    pub weights: Vec<Option<Rat>>,
    pub expected_dim: i64,
    pub max_dim: usize,
}

impl ModuliComplex {
    pub fn index_by_key(&self) -> HashMap<(Vec<LeafSet>, Vec<Cell>), usize> {
        self.types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.key(), i))
            .collect()
    }
}

pub fn build_complex(
    l: &TargetCurve,
    deg: &DegreeSpec,
    opts: &EnumerateOptions,
) -> Result<ModuliComplex, String> {
    let types = enumerate_types(l, deg, opts)?;
    let expected_dim = deg.expected_dimension(l)?;
    let max_dim = types.iter().map(|t| t.dimension).max().unwrap_or(0);
    if !types.is_empty() && (max_dim as i64) != expected_dim {
        return Err(format!(
            "maximal cell dimension {} does not match the expected dimension {}",
            max_dim, expected_dim
        ));
    }
    let mut weights = Vec::with_capacity(types.len());
    for t in &types {
        if t.is_maximal() {
            if t.dimension != max_dim {
                return Err("a locally rigid type is not of top dimension".into());
            }
            weights.push(Some(cell_weight(l, t)?));
        } else {
            weights.push(None);
        }
    }
    Ok(ModuliComplex {
        num_markings: deg.total_markings(),
        types,
        weights,
        expected_dim,
        max_dim,
    })
}

/// Purity: every type must lie in the closure of a top-dimensional type,
/// reachable by repeated elementary degenerations. Returns the indices of
/// stranded types (empty when pure).
pub fn purity_defects(l: &TargetCurve, m: &ModuliComplex) -> Vec<usize> {
    let by_key = m.index_by_key();
    let mut reached = vec![false; m.types.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (i, t) in m.types.iter().enumerate() {
        if t.dimension == m.max_dim {
            reached[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for d in degenerations(l, &m.types[i]) {
            if let Some(&j) = by_key.get(&d.key) {
                if !reached[j] {
                    reached[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    (0..m.types.len()).filter(|&i| !reached[i]).collect()
}

/// Report for one codimension-one cell.
pub struct FacetBalance {
    pub tau_index: usize,
    pub adjacent: Vec<usize>,
    pub residual: Vec<Rat>,
    pub balanced: bool,
}

pub struct BalanceReport {
    pub facets: Vec<FacetBalance>,
    pub balanced: bool,
}

/// Primitive-normal contribution of a maximal cell at one of its facets:
/// the embedded image of an integral tangent vector transverse to the
/// facet, divided by its index in the cell lattice relative to the facet
/// lattice (so the result is the image of a primitive normal vector).
fn facet_normal(
    l: &TargetCurve,
    deg: &DegreeSpec,
    sigma: &StableMapType,
    degen: &Degeneration,
) -> Option<Vec<Rat>> {
    let lay = Layout::of(sigma);
    let rows = placement_rows(l, sigma, &lay);
    let kernel = linalg::integer_kernel(&rows, lay.num_vars());
    // integral tangent vector with a nonzero transverse coordinate
    let w0 = kernel.iter().find(|w| !w[degen.col].is_zero())?;
    let mut w0 = w0.clone();
    let want_positive = degen.inward_sign > 0;
    if w0[degen.col].is_positive() != want_positive {
        for x in w0.iter_mut() {
            *x = -x.clone();
        }
    }
    // face lattice: tangent vectors with vanishing transverse coordinate
    let mut face_rows = rows.clone();
    let mut extra = vec![Rat::zero(); lay.num_vars()];
    extra[degen.col] = Rat::from_integer(Int::from(1));
    face_rows.push(extra);
    let face_lattice = linalg::integer_kernel(&face_rows, lay.num_vars());
    let denom = linalg::gcd_maximal_minors(&face_lattice);
    let mut stacked = face_lattice;
    stacked.push(w0.clone());
    let k = linalg::gcd_maximal_minors(&stacked) / denom;
    let delta = linalg::rat_of(&w0);
    let img = embed_differential(l, deg, sigma, &lay, &delta);
    let kr = Rat::from_integer(k);
    Some(img.iter().map(|x| x / &kr).collect())
}

/// Exact balancing at every codimension-one cell: the weighted primitive
/// normals of the adjacent maximal cells must sum to a vector in the span
/// of the cell's own embedded tangent directions. `weights` allows the
/// caller to perturb the stored weights (for mutation testing).
pub fn check_global_balancing(
    l: &TargetCurve,
    deg: &DegreeSpec,
    m: &ModuliComplex,
    weights: &[Option<Rat>],
) -> BalanceReport {
    assert_eq!(weights.len(), m.types.len());
    let by_key = m.index_by_key();
    // facet adjacency: tau index -> (sigma index, degeneration)
    let mut incident: BTreeMap<usize, Vec<(usize, Degeneration)>> = BTreeMap::new();
    if m.max_dim >= 1 {
        for (si, sigma) in m.types.iter().enumerate() {
            if sigma.dimension != m.max_dim {
                continue;
            }
            for d in degenerations(l, sigma) {
                if let Some(&ti) = by_key.get(&d.key) {
                    if m.types[ti].dimension + 1 == m.max_dim {
                        incident.entry(ti).or_default().push((si, d));
                    }
                }
            }
        }
    }
    let mut facets = Vec::new();
    let mut all_ok = true;
    for (ti, inc) in incident {
        let tau = &m.types[ti];
        let tau_lay = Layout::of(tau);
        let tau_rows = placement_rows(l, tau, &tau_lay);
        // With no placement constraints every local coordinate is free;
        // nullspace() cannot infer the variable count from zero rows.
        let tau_null: Vec<Vec<Rat>> = if tau_rows.is_empty() {
            (0..tau_lay.num_vars())
                .map(|j| {
                    let mut v = vec![Rat::zero(); tau_lay.num_vars()];
                    v[j] = Rat::from_integer(Int::from(1));
                    v
                })
                .collect()
        } else {
            linalg::nullspace(&tau_rows)
        };
        let tau_tangent: Vec<Vec<Rat>> = tau_null
            .iter()
            .map(|v| embed_differential(l, deg, tau, &tau_lay, v))
            .collect();
        let dim_out = quotient_dim(m.num_markings) + l.dim;
        let mut residual = vec![Rat::zero(); dim_out];
        let mut adjacent = Vec::new();
        for (si, degen) in &inc {
            adjacent.push(*si);
            let w = weights[*si].clone().expect("maximal cells carry weights");
            if w.is_zero() {
                continue;
            }
            let u = facet_normal(l, deg, &m.types[*si], degen)
                .expect("transverse coordinate varies on a maximal cell");
            for k in 0..dim_out {
                residual[k] = &residual[k] + &w * &u[k];
            }
        }
        let balanced = linalg::in_rational_span(&tau_tangent, &residual);
        all_ok &= balanced;
        facets.push(FacetBalance {
            tau_index: ti,
            adjacent,
            residual,
            balanced,
        });
    }
    BalanceReport {
        facets,
        balanced: all_ok,
    }
}
