//! Exact integer/rational linear algebra on small dense matrices.
//!
//! Everything here works over arbitrary-precision integers (`BigInt`) or
//! rationals (`BigRational`); no floating point is used anywhere in the
//! crate. Matrices are stored row-major as `Vec<Vec<_>>` — the instances
//! that show up (gluing matrices, tangent bases, local stars) have at most
//! a few dozen rows and columns, so dense textbook algorithms are fine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn rat(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

pub fn rat_of(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Exact division at every step keeps entries small.
pub fn det_bareiss(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut denom = Int::one();
    let mut sign = Int::one();
    for k in 0..n - 1 {
        // Pivot: find a nonzero entry in column k at or below row k.
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &denom; // exact by Bareiss' identity
            }
            a[i][k] = Int::zero();
        }
        denom = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Gcd of all maximal (k×k) minors of a k×n integer matrix with k ≤ n.
///
/// For a full-rank matrix this equals the index of the row lattice inside
/// the saturation of its row span; it is 0 when the rows are dependent,
/// and 1 exactly when the rows form a basis of a saturated lattice.
/// The empty matrix has gcd 1 by convention (the trivial lattice is its
/// own saturation). Enumeration short-circuits once the gcd reaches 1.
pub fn gcd_maximal_minors(rows: &[Vec<Int>]) -> Int {
    let k = rows.len();
    if k == 0 {
        return Int::one();
    }
    let n = rows[0].len();
    assert!(
        rows.iter().all(|r| r.len() == n),
        "ragged matrix passed to gcd_maximal_minors"
    );
    assert!(k <= n, "gcd_maximal_minors needs k <= n (got {}x{})", k, n);
    let mut g = Int::zero();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let minor: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        g = g.gcd(&det_bareiss(&minor));
        if g.is_one() {
            return g;
        }
        // Next k-combination of {0..n-1} in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if cols[i] != i + n - k {
                break;
            }
            if i == 0 {
                return g;
            }
        }
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

/// Content (gcd of entries, non-negative) and primitive part of an integer
/// vector. The zero vector reports length 0 and is returned unchanged.
pub fn primitive_and_length(v: &[Int]) -> (Vec<Int>, Int) {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return (v.to_vec(), Int::zero());
    }
    (v.iter().map(|x| x / &g).collect(), g)
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// One exact solution of A·x = b (free variables set to 0), if consistent.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent iff some pivot lands in the augmented column.
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

/// Does `v` lie in the rational span of the given generators?
pub fn in_rational_span(gens: &[Vec<Rat>], v: &[Rat]) -> bool {
    if gens.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let n = gens[0].len();
    assert_eq!(v.len(), n);
    // Transpose: columns are the generators.
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|j| gens.iter().map(|g| g[j].clone()).collect())
        .collect();
    solve_rational(&a, v).is_some()
}

/// Basis of the solution space of A·x = 0.
pub fn nullspace(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut w: Vec<Vec<Rat>> = a.to_vec();
    let pivots = rref(&mut w);
    let mut basis = Vec::new();
    let mut piv_of_col = vec![None; n];
    for (i, &c) in pivots.iter().enumerate() {
        piv_of_col[c] = Some(i);
    }
    for free in 0..n {
        if piv_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (c, p) in piv_of_col.iter().enumerate() {
            if let Some(i) = p {
                v[c] = -w[*i][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let mut w = a.to_vec();
    rref(&mut w).len()
}

/// Hermite-style reduction: a Z-basis (as rational row vectors) of the
/// subgroup of Q^n generated by the given rational rows. Rows are scaled
/// to a common denominator, reduced by integer row operations, and scaled
/// back; the returned rows are independent and generate the same group.
pub fn lattice_basis(gens: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let n = gens[0].len();
    let mut denom = Int::one();
    for g in gens {
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let mut m: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.numer() * (&denom / x.denom())).collect())
        .collect();
    // Integer row echelon by Euclidean elimination (HNF up to row ops).
    let mut row = 0;
    for col in 0..n {
        if row == m.len() {
            break;
        }
        loop {
            // Find the nonzero entry of least absolute value in this column.
            let mut best: Option<usize> = None;
            for i in row..m.len() {
                if !m[i][col].is_zero() && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(row, b);
            let mut done = true;
            for i in row + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[row][col]);
                    for j in 0..n {
                        let t = &m[row][j] * &q;
                        m[i][j] = &m[i][j] - &t;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !m[row][col].is_zero() {
            row += 1;
        }
    }
    m.truncate(row);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    let dr = Rat::from_integer(denom);
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| Rat::from_integer(x.clone()) / &dr)
                .collect()
        })
        .collect()
}

/// Express `v` in the given (independent) basis rows; `None` if outside
/// their span.
pub fn coords_in_basis(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return if v.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let n = basis[0].len();
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|j| basis.iter().map(|b| b[j].clone()).collect())
        .collect();
    solve_rational(&a, v)
}

/// Basis of the lattice { x in Z^n : A·x = 0 } for a rational matrix A.
/// This lattice is saturated by construction (it is the intersection of a
/// rational subspace with Z^n).
pub fn integer_kernel(a: &[Vec<Rat>], n: usize) -> Vec<Vec<Int>> {
    // clear denominators row by row
    let rows: Vec<Vec<Int>> = a
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n);
            let mut denom = Int::one();
            for x in r {
                denom = denom.lcm(x.denom());
            }
            r.iter().map(|x| x.numer() * (&denom / x.denom())).collect()
        })
        .collect();
    let mut m = rows;
    // unimodular column operations, tracked in u
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let col_addmul =
        |m: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, dst: usize, src: usize, q: &Int| {
            for r in m.iter_mut() {
                let t = &r[src] * q;
                r[dst] = &r[dst] - &t;
            }
            for r in u.iter_mut() {
                let t = &r[src] * q;
                r[dst] = &r[dst] - &t;
            }
        };
    for i in 0..m.len() {
        loop {
            let mut best: Option<usize> = None;
            for (k, &c) in active.iter().enumerate() {
                if !m[i][c].is_zero()
                    && best.map_or(true, |b: usize| m[i][active[b]].abs() > m[i][c].abs())
                {
                    best = Some(k);
                }
            }
            let Some(bk) = best else { break };
            let pivot = active[bk];
            let mut reduced_all = true;
            let others: Vec<usize> = active.iter().copied().filter(|&c| c != pivot).collect();
            for c in others {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[i][pivot]);
                    col_addmul(&mut m, &mut u, c, pivot, &q);
                    if !m[i][c].is_zero() {
                        reduced_all = false;
                    }
                }
            }
            if reduced_all {
                // pivot column leaves the kernel candidates
                active.retain(|&c| c != pivot);
                break;
            }
        }
    }
    active
        .iter()
        .map(|&c| (0..n).map(|r| u[r][c].clone()).collect())
        .collect()
}

/// Clear denominators and divide by the content: the primitive integer
/// vector spanning the same ray as the rational input.
pub fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    let mut denom = Int::one();
    for x in v {
        denom = denom.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
    let (p, _) = primitive_and_length(&ints);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    fn rm(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det_bareiss(&im(&[&[2]])), int(2));
        assert_eq!(det_bareiss(&im(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(
            det_bareiss(&im(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            int(-2)
        );
        assert_eq!(det_bareiss(&im(&[&[1, 2], &[2, 4]])), int(0));
    }

    // Oracle: brute-force gcd over all k-subsets with cofactor expansion.
    fn det_cofactor(m: &[Vec<Int>]) -> Int {
        let n = m.len();
        if n == 0 {
            return Int::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Int::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let sub: Vec<Vec<Int>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let t = &m[0][j] * det_cofactor(&sub);
            if j % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }

    fn gcd_minors_oracle(rows: &[Vec<Int>]) -> Int {
        use itertools::Itertools;
        let k = rows.len();
        let n = rows[0].len();
        let mut g = Int::zero();
        for cols in (0..n).combinations(k) {
            let minor: Vec<Vec<Int>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            g = g.gcd(&det_cofactor(&minor));
        }
        g
    }

    #[test]
    fn gcd_minors_examples() {
        assert_eq!(gcd_maximal_minors(&im(&[&[1, -2, -2]])), int(1));
        assert_eq!(
            gcd_maximal_minors(&im(&[&[1, -2, 0, -2, 0], &[1, 0, -4, 0, -4]])),
            int(2)
        );
        assert_eq!(
            gcd_maximal_minors(&im(&[&[1, -6, 0, -6, 0], &[1, 0, -9, 0, -9]])),
            int(3)
        );
        assert_eq!(gcd_maximal_minors(&im(&[&[2, 4], &[1, 2]])), int(0));
        assert_eq!(gcd_maximal_minors(&[]), int(1));
    }

    #[test]
    fn gcd_minors_matches_oracle() {
        // Deterministic pseudo-random integer matrices.
        let mut seed: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 13) as i64 - 6
        };
        for k in 1..=3usize {
            for n in k..=5usize {
                for _ in 0..20 {
                    let rows: Vec<Vec<Int>> = (0..k)
                        .map(|_| (0..n).map(|_| int(next())).collect())
                        .collect();
                    assert_eq!(gcd_maximal_minors(&rows), gcd_minors_oracle(&rows));
                }
            }
        }
    }

    #[test]
    fn primitive_examples() {
        let (p, l) = primitive_and_length(&[int(0), int(-4), int(6)]);
        assert_eq!(l, int(2));
        assert_eq!(p, vec![int(0), int(-2), int(3)]);
        let (_, l0) = primitive_and_length(&[int(0), int(0)]);
        assert_eq!(l0, int(0));
    }

    #[test]
    fn solve_and_span() {
        let a = rm(&[&[1, 1], &[1, -1]]);
        let x = solve_rational(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        assert!(solve_rational(&rm(&[&[1, 1], &[2, 2]]), &[rat(1), rat(3)]).is_none());
        assert!(in_rational_span(
            &rm(&[&[1, 0, 1], &[0, 1, 1]]),
            &[rat(2), rat(3), rat(5)]
        ));
        assert!(!in_rational_span(
            &rm(&[&[1, 0, 1]]),
            &[rat(1), rat(1), rat(1)]
        ));
    }

    #[test]
    fn nullspace_dim() {
        let a = rm(&[&[1, 1, 1]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: Rat = v.iter().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn lattice_basis_and_coords() {
        // Generators 2e1, 3e1 produce the lattice Z·e1.
        let b = lattice_basis(&rm(&[&[2, 0], &[3, 0]]));
        assert_eq!(b.len(), 1);
        let c = coords_in_basis(&b, &[rat(5), rat(0)]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].is_integer());
        // Rational generators: (1/2, 0) and (0, 1) with coords exact.
        let g = vec![vec![Rat::new(int(1), int(2)), rat(0)], vec![rat(0), rat(1)]];
        let b2 = lattice_basis(&g);
        assert_eq!(b2.len(), 2);
        let c2 = coords_in_basis(&b2, &[Rat::new(int(3), int(2)), rat(2)]).unwrap();
        assert!(c2.iter().all(|x| x.is_integer()));
    }

    #[test]
    fn primitive_integer_of_rational() {
        let v = vec![Rat::new(int(1), int(2)), Rat::new(int(-3), int(4))];
        assert_eq!(primitive_integer(&v), vec![int(2), int(-3)]);
    }

    #[test]
    fn integer_kernel_saturated() {
        // x + 2y = 0 over Z^2: kernel generated by (2, -1) (sign-free)
        let k = integer_kernel(&rm(&[&[1, 2]]), 2);
        assert_eq!(k.len(), 1);
        let g = &k[0];
        assert!(g == &vec![int(2), int(-1)] || g == &vec![int(-2), int(1)]);
        // rational rows: x/2 - y/3 = 0 -> 3x = 2y -> generator (2, 3)
        let row = vec![vec![Rat::new(int(1), int(2)), Rat::new(int(-1), int(3))]];
        let k2 = integer_kernel(&row, 2);
        assert_eq!(k2.len(), 1);
        let g2 = &k2[0];
        assert!(g2 == &vec![int(2), int(3)] || g2 == &vec![int(-2), int(-3)]);
        // full kernel when there are no rows
        let k3 = integer_kernel(&[], 3);
        assert_eq!(k3.len(), 3);
        // saturation: 2x + 2y = 0 has primitive generator (1, -1)
        let k4 = integer_kernel(&rm(&[&[2, 2]]), 2);
        assert_eq!(k4.len(), 1);
        assert!(k4[0] == vec![int(1), int(-1)] || k4[0] == vec![int(-1), int(1)]);
    }
}
