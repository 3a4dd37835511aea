//! A small exact simplex solver over the rationals.
//!
//! Used to certify that a combinatorial type actually has points: the
//! placement constraints of a type form a linear system whose strict
//! inequalities (positive edge lengths, vertex positions inside their
//! target segment) are tested by maximizing a common slack variable. The
//! problems are tiny (tens of variables), so a dense two-phase simplex
//! with Bland's rule is entirely adequate and guarantees termination.

use crate::linalg::Rat;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    /// Optimal value and an optimal point.
    Optimal(Rat, Vec<Rat>),
    Infeasible,
    Unbounded,
}

/// Maximize c·x subject to A·x = b, x >= 0.
pub fn maximize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpResult {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));

    // Tableau with artificial variables n..n+m appended; rows are scaled so
    // the right-hand side is non-negative.
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < Rat::zero();
        let mut row: Vec<Rat> = a[i]
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        row.extend((0..m).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let total = n + m;
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials (maximize its negation).
    // The reduced-cost row is c - Σ λ_i·row_i with c = -1 on artificials;
    // since every artificial is basic with coefficient 1, this leaves 0 on
    // the artificial columns and +Σ_i t[i][j] elsewhere, while the last
    // entry carries the negated objective value Σ_i |b_i|.
    let mut obj = vec![Rat::zero(); total + 1];
    for i in 0..m {
        for j in (0..n).chain([total]) {
            let v = t[i][j].clone();
            obj[j] = &obj[j] + &v;
        }
    }
    simplex_loop(&mut t, &mut obj, &mut basis, total);
    if !obj[total].is_zero() {
        return LpResult::Infeasible;
    }
    // Drive any artificial still in the basis out (or drop its row).
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut obj, &mut basis, i, j, total);
            }
        }
    }

    // Phase 2: original objective, artificial columns frozen at zero.
    let mut obj2 = vec![Rat::zero(); total + 1];
    obj2[..n].clone_from_slice(c);
    // Express the objective in terms of non-basic variables.
    for i in 0..m {
        if basis[i] < n && !obj2[basis[i]].is_zero() {
            let f = obj2[basis[i]].clone();
            for j in 0..=total {
                let v = &t[i][j] * &f;
                obj2[j] = &obj2[j] - &v;
            }
        }
    }
    // Forbid re-entering artificials.
    for j in n..total {
        obj2[j] = -Rat::one();
    }
    if !simplex_loop(&mut t, &mut obj2, &mut basis, n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][total].clone();
        }
    }
    let value = c
        .iter()
        .zip(&x)
        .fold(Rat::zero(), |acc, (ci, xi)| acc + ci * xi);
    LpResult::Optimal(value, x)
}

/// Bland's rule iterations; entering columns restricted to 0..limit.
/// Returns false when the objective is unbounded.
fn simplex_loop(t: &mut [Vec<Rat>], obj: &mut [Rat], basis: &mut [usize], limit: usize) -> bool {
    let m = t.len();
    let total = obj.len() - 1;
    loop {
        let Some(enter) = (0..limit).find(|&j| obj[j] > Rat::zero()) else {
            return true;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter] > Rat::zero() {
                let ratio = &t[i][total] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return false;
        };
        pivot(t, obj, basis, r, enter, total);
    }
}

fn pivot(
    t: &mut [Vec<Rat>],
    obj: &mut [Rat],
    basis: &mut [usize],
    row: usize,
    col: usize,
    total: usize,
) {
    let p = t[row][col].clone();
    for j in 0..=total {
        t[row][j] = &t[row][j] / &p;
    }
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let f = t[i][col].clone();
            for j in 0..=total {
                let v = &t[row][j] * &f;
                t[i][j] = &t[i][j] - &v;
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for j in 0..=total {
            let v = &t[row][j] * &f;
            obj[j] = &obj[j] - &v;
        }
    }
    basis[row] = col;
}
