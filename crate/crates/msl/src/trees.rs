//! Distance coordinates for moduli of abstract rational marked trees.
//!
//! A tree with N labeled leaves and positive bounded edge lengths is
//! encoded by the vector of pairwise leaf distances in R^(N choose 2).
//! Two distance vectors describe the same tree exactly when they differ
//! by an element of the subspace U_N = { x : x_{ij} = mu_i + mu_j }, so
//! all comparisons happen modulo U_N. Rays of the resulting fan are
//! spanned by split vectors v_I, and the lattice fixed on the quotient is
//! the one generated by all of them.

use crate::linalg::{self, Int, Rat};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Number of leaf pairs, i.e. the ambient dimension of distance vectors.
pub fn num_pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Index of the unordered pair {i, j} (1-based labels, i != j) in the
/// lexicographic ordering {1,2}, {1,3}, ..., {1,n}, {2,3}, ...
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    assert!(1 <= i && j <= n && i != j);
    (i - 1) * n - i * (i - 1) / 2 + (j - i) - 1
}

/// Leaf subsets are bitmasks: bit k-1 set means label k is in the set.
pub type LeafSet = u32;

pub fn leafset_from(labels: &[usize]) -> LeafSet {
    labels.iter().fold(0, |m, &l| m | (1 << (l - 1)))
}

pub fn leafset_members(mask: LeafSet, n: usize) -> Vec<usize> {
    (1..=n).filter(|&l| mask & (1 << (l - 1)) != 0).collect()
}

/// The split vector v_I: entry {i,j} is 1 when the split I | I^c
/// separates i from j, and 0 otherwise. Requires 2 <= |I| <= N-2.
pub fn split_vector(n: usize, i_set: LeafSet) -> Vec<Int> {
    let size = i_set.count_ones() as usize;
    assert!(
        (2..=n - 2).contains(&size),
        "split must have 2 <= |I| <= N-2 (got |I| = {} for N = {})",
        size,
        n
    );
    let mut v = vec![Int::zero(); num_pairs(n)];
    for i in 1..=n {
        for j in i + 1..=n {
            let a = i_set & (1 << (i - 1)) != 0;
            let b = i_set & (1 << (j - 1)) != 0;
            if a != b {
                v[pair_index(n, i, j)] = Int::one();
            }
        }
    }
    v
}

/// All splits, each normalized to the side not containing label 1, in
/// increasing bitmask order.
pub fn all_splits(n: usize) -> Vec<LeafSet> {
    let full: LeafSet = (1 << n) - 1;
    (0..=full)
        .filter(|&m| {
            m & 1 == 0 && {
                let s = m.count_ones() as usize;
                (2..=n - 2).contains(&s)
            }
        })
        .collect()
}

/// Membership in U_N: is there mu with x_{ij} = mu_i + mu_j for all pairs?
/// Only defined for N >= 4 (for N = 3 every vector is of this form).
pub fn is_zero_mod_un(n: usize, x: &[Rat]) -> Result<bool, String> {
    if n < 4 {
        return Err(format!(
            "U_N membership is only meaningful for N >= 4 (got N = {})",
            n
        ));
    }
    assert_eq!(x.len(), num_pairs(n));
    Ok(canonical_rep_mod_un(n, x).iter().all(|v| v.is_zero()))
}

/// The canonical representative of x modulo U_N: the unique x' = x - (mu_i
/// + mu_j) vanishing on the pairs {1,2}, {1,3}, {2,3} and {1,k} for k >= 4.
/// This is a linear projection with kernel exactly U_N, so x lies in U_N
/// iff its representative is zero, and the map is idempotent.
pub fn canonical_rep_mod_un(n: usize, x: &[Rat]) -> Vec<Rat> {
    assert!(n >= 4);
    assert_eq!(x.len(), num_pairs(n));
    let get = |i: usize, j: usize| x[pair_index(n, i, j)].clone();
    let two = Rat::from_integer(Int::from(2));
    let mu1 = (get(1, 2) + get(1, 3) - get(2, 3)) / &two;
    let mut mu = vec![Rat::zero(); n + 1];
    mu[1] = mu1.clone();
    mu[2] = get(1, 2) - &mu1;
    mu[3] = get(1, 3) - &mu1;
    for k in 4..=n {
        mu[k] = get(1, k) - &mu1;
    }
    let mut out = vec![Rat::zero(); num_pairs(n)];
    for i in 1..=n {
        for j in i + 1..=n {
            out[pair_index(n, i, j)] = get(i, j) - &mu[i] - &mu[j];
        }
    }
    out
}

/// Restrict a distance vector to a 4-element label subset (sorted), with
/// pairs of the image indexed lexicographically in the induced order.
pub fn forgetful_project(n: usize, x: &[Rat], subset: &[usize; 4]) -> Vec<Rat> {
    assert_eq!(x.len(), num_pairs(n));
    let mut s = *subset;
    s.sort_unstable();
    assert!(s.windows(2).all(|w| w[0] < w[1]) && s[3] <= n && s[0] >= 1);
    let mut out = Vec::with_capacity(6);
    for a in 0..4 {
        for b in a + 1..4 {
            out.push(x[pair_index(n, s[a], s[b])].clone());
        }
    }
    out
}

/// An abstract tree with N labeled leaves and rational bounded edge
/// lengths, stored as an adjacency structure over all vertices.
#[derive(Debug, Clone)]
pub struct MarkedTree {
    pub num_leaves: usize,
    /// adjacency per vertex: (neighbor, length of the connecting edge)
    pub adj: Vec<Vec<(usize, Rat)>>,
    /// leaf label k (1-based) sits at vertex leaf_vertex[k-1]
    pub leaf_vertex: Vec<usize>,
}

impl MarkedTree {
    /// Pairwise leaf distances by path sums, in pair_index order.
    pub fn distance_vector(&self) -> Vec<Rat> {
        let n = self.num_leaves;
        let mut out = vec![Rat::zero(); num_pairs(n)];
        for i in 1..=n {
            // DFS from leaf i's vertex accumulating distances.
            let mut dist: Vec<Option<Rat>> = vec![None; self.adj.len()];
            let start = self.leaf_vertex[i - 1];
            dist[start] = Some(Rat::zero());
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let dv = dist[v].clone().unwrap();
                for (w, len) in &self.adj[v] {
                    if dist[*w].is_none() {
                        dist[*w] = Some(&dv + len);
                        stack.push(*w);
                    }
                }
            }
            for j in i + 1..=n {
                out[pair_index(n, i, j)] = dist[self.leaf_vertex[j - 1]]
                    .clone()
                    .expect("tree not connected");
            }
        }
        out
    }
}

/// The lattice fixed on R^(N choose 2)/U_N: the subgroup generated by the
/// images of all split vectors, presented in canonical-representative
/// coordinates. Lattice membership and divisibility questions (primitive
/// vectors, indices of sublattices) are answered in this basis.
pub struct QuotientLattice {
    pub n: usize,
    /// Z-basis rows, in canonical-representative coordinates.
    pub basis: Vec<Vec<Rat>>,
}

static LATTICE_CACHE: Mutex<Option<HashMap<usize, &'static QuotientLattice>>> = Mutex::new(None);

impl QuotientLattice {
    pub fn new(n: usize) -> QuotientLattice {
        let gens: Vec<Vec<Rat>> = all_splits(n)
            .iter()
            .map(|&s| canonical_rep_mod_un(n, &linalg::rat_of(&split_vector(n, s))))
            .collect();
        let basis = linalg::lattice_basis(&gens);
        assert_eq!(basis.len(), num_pairs(n) - n, "quotient lattice rank");
        QuotientLattice { n, basis }
    }

    /// Shared, lazily built instance per N (the basis computation is not
    /// free and every cell of a complex needs it).
    pub fn shared(n: usize) -> &'static QuotientLattice {
        let mut guard = LATTICE_CACHE.lock().unwrap();
        let map = guard.get_or_insert_with(HashMap::new);
        if let Some(l) = map.get(&n) {
            return l;
        }
        let l: &'static QuotientLattice = Box::leak(Box::new(QuotientLattice::new(n)));
        map.insert(n, l);
        l
    }

    /// Coordinates of a representative vector in the lattice basis (exact;
    /// integer coordinates mean the class is a lattice point).
    pub fn coords(&self, rep: &[Rat]) -> Option<Vec<Rat>> {
        linalg::coords_in_basis(&self.basis, rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_of};

    fn vsplit(n: usize, labels: &[usize]) -> Vec<Rat> {
        rat_of(&split_vector(n, leafset_from(labels)))
    }

    fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn pair_index_roundtrip() {
        let n = 6;
        let mut seen = vec![false; num_pairs(n)];
        for i in 1..=n {
            for j in i + 1..=n {
                let k = pair_index(n, i, j);
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn four_point_relation() {
        // v_{12} + v_{13} + v_{14} lies in U_4.
        let s = add(
            &add(&vsplit(4, &[1, 2]), &vsplit(4, &[1, 3])),
            &vsplit(4, &[1, 4]),
        );
        assert!(is_zero_mod_un(4, &s).unwrap());
        // but no single one does
        assert!(!is_zero_mod_un(4, &vsplit(4, &[1, 2])).unwrap());
    }

    #[test]
    fn star_relation() {
        // sum over i >= 2 of v_{1i} lies in U_N.
        for n in 4..=7 {
            let mut s = vec![Rat::zero(); num_pairs(n)];
            for i in 2..=n {
                s = add(&s, &vsplit(n, &[1, i]));
            }
            assert!(is_zero_mod_un(n, &s).unwrap());
        }
    }

    #[test]
    fn canonical_rep_is_idempotent_projection() {
        let n = 5;
        let x: Vec<Rat> = (0..num_pairs(n))
            .map(|k| rat((k * k % 7) as i64 - 3))
            .collect();
        let r = canonical_rep_mod_un(n, &x);
        assert_eq!(canonical_rep_mod_un(n, &r), r);
        // x - r lies in U_N
        let diff: Vec<Rat> = x.iter().zip(&r).map(|(a, b)| a - b).collect();
        assert!(is_zero_mod_un(n, &diff).unwrap());
    }

    #[test]
    fn n3_is_an_error() {
        assert!(is_zero_mod_un(3, &[rat(0), rat(0), rat(0)]).is_err());
    }

    #[test]
    fn distance_vector_matches_split_decomposition() {
        // Caterpillar on 5 leaves: leaves 1,2 at vertex a; 3 at b; 4,5 at c;
        // edges a-b (length 2), b-c (length 3).
        let mut adj = vec![Vec::new(); 8];
        let connect = |u: usize, v: usize, l: i64, adj: &mut Vec<Vec<(usize, Rat)>>| {
            adj[u].push((v, rat(l)));
            adj[v].push((u, rat(l)));
        };
        // vertices: 0=a, 1=b, 2=c, 3..7 leaf vertices
        connect(0, 1, 2, &mut adj);
        connect(1, 2, 3, &mut adj);
        connect(3, 0, 0, &mut adj);
        connect(4, 0, 0, &mut adj);
        connect(5, 1, 0, &mut adj);
        connect(6, 2, 0, &mut adj);
        connect(7, 2, 0, &mut adj);
        let t = MarkedTree {
            num_leaves: 5,
            adj,
            leaf_vertex: vec![3, 4, 5, 6, 7],
        };
        let d = t.distance_vector();
        // Same tree as 2*v_{12} + 3*v_{45}: split {1,2} has length 2 etc.
        let expect = add(
            &vsplit(5, &[1, 2])
                .iter()
                .map(|x| x * rat(2))
                .collect::<Vec<_>>(),
            &vsplit(5, &[4, 5])
                .iter()
                .map(|x| x * rat(3))
                .collect::<Vec<_>>(),
        );
        // distances agree exactly here (leaf edges have length zero)
        assert_eq!(d, expect);
    }

    #[test]
    fn forgetful_of_un_lands_in_u4() {
        // A vector in U_6 projects into U_4 on every 4-subset.
        let n = 6;
        let mu: Vec<Rat> = (0..=n).map(|i| rat(i as i64 * 2 - 3)).collect();
        let mut x = vec![Rat::zero(); num_pairs(n)];
        for i in 1..=n {
            for j in i + 1..=n {
                x[pair_index(n, i, j)] = &mu[i] + &mu[j];
            }
        }
        for s in [[1, 2, 3, 4], [1, 3, 5, 6], [2, 4, 5, 6]] {
            assert!(is_zero_mod_un(4, &forgetful_project(n, &x, &s)).unwrap());
        }
    }

    #[test]
    fn quotient_lattice_contains_splits_integrally() {
        for n in 4..=6 {
            let lat = QuotientLattice::shared(n);
            for s in all_splits(n) {
                let rep = canonical_rep_mod_un(n, &rat_of(&split_vector(n, s)));
                let c = lat.coords(&rep).expect("split in lattice span");
                assert!(c.iter().all(|x| x.is_integer()), "split has integer coords");
            }
        }
    }
}
