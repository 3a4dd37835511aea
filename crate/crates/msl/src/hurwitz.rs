//! Counting degree-d covers of a star by symmetric-group factorizations.
//!
//! A local vertex star with q+1 rays and a ramification profile (a
//! partition of d) over each ray is counted by tuples of permutations
//! (s_0, ..., s_q) in S_d with the prescribed cycle types, product equal
//! to the identity, and transitive joint action. The count is normalized
//! by the order of the automorphisms that permute equal parts within each
//! profile and by d!, so the result is in general a non-negative rational.

use crate::linalg::{Int, Rat};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

pub type Perm = Vec<u8>;

/// A counting problem: degree and one ramification profile per ray.
/// Each profile is a partition of d (parts in any order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzProblem {
    pub d: usize,
    pub profiles: Vec<Vec<u64>>,
}

impl HurwitzProblem {
    pub fn validate(&self) -> Result<(), String> {
        if self.d == 0 {
            return Err("degree must be positive".into());
        }
        if self.profiles.len() < 2 {
            return Err("need at least two ramification profiles".into());
        }
        for (i, p) in self.profiles.iter().enumerate() {
            if p.iter().any(|&x| x == 0) || p.iter().sum::<u64>() != self.d as u64 {
                return Err(format!("profile {} is not a partition of {}", i, self.d));
            }
        }
        Ok(())
    }

    /// Dimension of the corresponding space of genus-zero covers:
    /// 2d - 2 + (total number of parts) - d * (number of rays).
    pub fn genus_zero_dimension(&self) -> i64 {
        let parts: i64 = self.profiles.iter().map(|p| p.len() as i64).sum();
        2 * self.d as i64 - 2 + parts - (self.d * self.profiles.len()) as i64
    }
}

fn cycle_type(p: &Perm) -> Vec<u64> {
    let d = p.len();
    let mut seen = vec![false; d];
    let mut t = Vec::new();
    for i in 0..d {
        if !seen[i] {
            let mut len = 0u64;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j] as usize;
                len += 1;
            }
            t.push(len);
        }
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = vec![vec![]];
    for k in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k as u8);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// All permutations in S_d of a given cycle type (cached).
fn class_members(d: usize, profile: &[u64]) -> Vec<Perm> {
    static CACHE: Mutex<Option<HashMap<(usize, Vec<u64>), Vec<Perm>>>> = Mutex::new(None);
    let mut sorted = profile.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = (d, sorted.clone());
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    if let Some(v) = map.get(&key) {
        return v.clone();
    }
    let v: Vec<Perm> = all_perms(d)
        .into_iter()
        .filter(|p| cycle_type(p) == sorted)
        .collect();
    map.insert(key, v.clone());
    v
}

fn is_transitive(perms: &[&Perm], d: usize) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for p in perms {
        for i in 0..d {
            let (a, b) = (find(&mut parent, i), find(&mut parent, p[i] as usize));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let r = find(&mut parent, 0);
    (0..d).all(|i| find(&mut parent, i) == r)
}

/// Number of tuples (s_0, ..., s_q) with the prescribed cycle types,
/// trivial product and transitive action. The first factor is pinned to
/// one class representative and the count scaled by the class size, which
/// is valid because simultaneous conjugation acts freely on nothing but
/// preserves all three defining conditions.
pub fn raw_transitive_count(p: &HurwitzProblem) -> Int {
    p.validate().expect("invalid Hurwitz problem");
    let d = p.d;
    let first_class = class_members(d, &p.profiles[0]);
    if first_class.is_empty() {
        return Int::zero();
    }
    let rep = first_class[0].clone();
    let class_size = Int::from(first_class.len());
    let mut count = Int::zero();
    // Enumerate s_1..s_{q-1}; the last factor is forced by the product.
    let middle: Vec<Vec<Perm>> = p.profiles[1..p.profiles.len() - 1]
        .iter()
        .map(|prof| class_members(d, prof))
        .collect();
    let mut last_sorted = p.profiles[p.profiles.len() - 1].clone();
    last_sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut chosen: Vec<Perm> = Vec::new();
    fn rec(
        rep: &Perm,
        middle: &[Vec<Perm>],
        chosen: &mut Vec<Perm>,
        last_sorted: &[u64],
        d: usize,
        count: &mut Int,
    ) {
        if chosen.len() == middle.len() {
            // product so far: rep * chosen[0] * ... * chosen[k-1]
            let mut prod = rep.clone();
            for c in chosen.iter() {
                prod = compose(&prod, c);
            }
            let last = inverse(&prod);
            if cycle_type(&last) != last_sorted {
                return;
            }
            let mut all: Vec<&Perm> = vec![rep];
            all.extend(chosen.iter());
            all.push(&last);
            if is_transitive(&all, d) {
                *count += Int::one();
            }
            return;
        }
        for cand in &middle[chosen.len()] {
            chosen.push(cand.clone());
            rec(rep, middle, chosen, last_sorted, d, count);
            chosen.pop();
        }
    }
    rec(&rep, &middle, &mut chosen, &last_sorted, d, &mut count);
    class_size * count
}

fn factorial(k: u64) -> Int {
    let mut f = Int::one();
    for i in 2..=k {
        f *= Int::from(i);
    }
    f
}

/// Automorphisms of the marking: product over profiles of the factorials
/// of the multiplicities of equal parts.
fn marking_automorphisms(p: &HurwitzProblem) -> Int {
    let mut a = Int::one();
    for prof in &p.profiles {
        let mut mult: HashMap<u64, u64> = HashMap::new();
        for &part in prof {
            *mult.entry(part).or_insert(0) += 1;
        }
        for (_, m) in mult {
            a *= factorial(m);
        }
    }
    a
}

/// The normalized count: raw count times marking automorphisms over d!.
/// Results are cached by degree and profile multiset.
pub fn hurwitz_number(p: &HurwitzProblem) -> Rat {
    static CACHE: Mutex<Option<HashMap<(usize, Vec<Vec<u64>>), Rat>>> = Mutex::new(None);
    let mut key_profiles: Vec<Vec<u64>> = p
        .profiles
        .iter()
        .map(|prof| {
            let mut s = prof.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            s
        })
        .collect();
    key_profiles.sort();
    let key = (p.d, key_profiles);
    {
        let mut guard = CACHE.lock().unwrap();
        if let Some(v) = guard.get_or_insert_with(HashMap::new).get(&key) {
            return v.clone();
        }
    }
    let raw = raw_transitive_count(p);
    let value = Rat::new(raw * marking_automorphisms(p), factorial(p.d as u64));
    let mut guard = CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(key, value.clone());
    value
}
