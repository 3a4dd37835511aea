//! The one-dimensional local fan at a vertex star of deformation
//! dimension one.
//!
//! A vertex star describes the local situation at a point of the moduli
//! complex where one vertex V of the abstract tree sits over a vertex of
//! the target with q+1 rays: every adjacent end or edge of V is recorded
//! as an "end" with a ray index and a positive weight, plus optionally a
//! single contracted end. When the local deformation dimension is one,
//! the nearby maximal cells are classified by elementary resolutions and
//! span a one-dimensional fan in distance coordinates whose rays carry
//! cover-counting weights; the fan is balanced.

use crate::hurwitz::{self, HurwitzProblem};
use crate::linalg::{self, Int, Rat};
use crate::trees::{self, LeafSet};
use num_traits::{One, Signed, Zero};

/// One non-contracted local end: the ray of the target star it covers and
/// its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarEnd {
    pub ray: usize,
    pub weight: u64,
}

/// A local vertex star over a target vertex with rays 0..=q. Labels: if a
/// contracted end is present it is label 1 and the non-contracted ends
/// are labels 2, 3, ...; otherwise labels start at 1, in the order of
/// `ends`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStar {
    pub q: usize,
    pub ends: Vec<StarEnd>,
    pub contracted: bool,
}

impl VertexStar {
    pub fn num_markings(&self) -> usize {
        self.ends.len() + usize::from(self.contracted)
    }

    /// Label (1-based) of the k-th non-contracted end.
    pub fn label_of_end(&self, k: usize) -> usize {
        k + 1 + usize::from(self.contracted)
    }

    /// Local covering degree; errors when the rays are covered unequally.
    pub fn degree(&self) -> Result<u64, String> {
        let mut cov = vec![0u64; self.q + 1];
        for e in &self.ends {
            if e.ray > self.q {
                return Err(format!("ray index {} out of range", e.ray));
            }
            if e.weight == 0 {
                return Err("non-contracted end with weight 0".into());
            }
            cov[e.ray] += e.weight;
        }
        if cov.iter().any(|&c| c != cov[0]) || cov[0] == 0 {
            return Err(format!("rays covered unequally: {:?}", cov));
        }
        Ok(cov[0])
    }

    pub fn rdim(&self) -> i64 {
        let d = self.degree().expect("balanced star") as i64;
        self.num_markings() as i64 - d * (self.q as i64 - 1) - 2
    }

    pub fn riemann_hurwitz(&self) -> i64 {
        self.rdim() - i64::from(self.contracted)
    }
}

/// An elementary resolution of a deformation-dimension-one star.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Two ends of the same ray move out together onto the ray, joined to
    /// the rest by one bounded edge of weight m_i + m_j. Fields are labels.
    PairMerge { i: usize, j: usize },
    /// End `i` moves out onto its ray and is joined back by two bounded
    /// edges of weights d1 and d2 = m_i - d1 ending at two new vertices
    /// carrying the label sets side1 and side2 (side1 holds the smallest
    /// label other than i).
    EndSplit {
        i: usize,
        d1: u64,
        d2: u64,
        side1: Vec<usize>,
        side2: Vec<usize>,
    },
    /// The contracted end (label 1) moves out along the ray of end `i`.
    ContractedSlide { i: usize },
}

/// A ray of the local fan: primitive direction in distance coordinates
/// (ambient R^(N_V choose 2)) and its weight, with the resolution it
/// belongs to.
#[derive(Debug, Clone)]
pub struct WeightedRay {
    pub primitive: Vec<Int>,
    pub lattice_length: Int,
    pub weight: Rat,
    pub resolution: Resolution,
}

fn ray_profiles(star: &VertexStar, labels: &[usize], extra: Option<(usize, u64)>) -> Vec<Vec<u64>> {
    let mut profiles: Vec<Vec<u64>> = vec![Vec::new(); star.q + 1];
    for &lab in labels {
        let k = lab - 1 - usize::from(star.contracted);
        let e = star.ends[k];
        profiles[e.ray].push(e.weight);
    }
    if let Some((ray, w)) = extra {
        profiles[ray].push(w);
    }
    profiles
}

fn coverage(profiles: &[Vec<u64>]) -> Vec<u64> {
    profiles.iter().map(|p| p.iter().sum()).collect()
}

/// All elementary resolutions of a star with rdim = 1 and at most one
/// contracted end.
pub fn enumerate_resolutions(star: &VertexStar) -> Result<Vec<Resolution>, String> {
    let d = star.degree()?;
    if star.rdim() != 1 {
        return Err(format!("star has rdim {} (need 1)", star.rdim()));
    }
    let _ = d;
    let mut out = Vec::new();
    if star.contracted {
        for k in 0..star.ends.len() {
            out.push(Resolution::ContractedSlide {
                i: star.label_of_end(k),
            });
        }
        return Ok(out);
    }
    let ne = star.ends.len();
    // pairs of ends on the same ray
    for a in 0..ne {
        for b in a + 1..ne {
            if star.ends[a].ray == star.ends[b].ray {
                out.push(Resolution::PairMerge {
                    i: star.label_of_end(a),
                    j: star.label_of_end(b),
                });
            }
        }
    }
    // splitting one end of weight >= 2
    for k in 0..ne {
        let mi = star.ends[k].weight;
        let ri = star.ends[k].ray;
        if mi < 2 {
            continue;
        }
        let others: Vec<usize> = (0..ne).filter(|&t| t != k).collect();
        if others.is_empty() {
            continue;
        }
        let anchor = others[0]; // smallest other index: pin it to side1
        let rest = &others[1..];
        for bits in 0u32..(1 << rest.len()) {
            let mut side1 = vec![anchor];
            let mut side2 = Vec::new();
            for (t, &o) in rest.iter().enumerate() {
                if bits & (1 << t) != 0 {
                    side1.push(o);
                } else {
                    side2.push(o);
                }
            }
            if side2.is_empty() {
                continue;
            }
            for d1 in 1..mi {
                let d2 = mi - d1;
                // balance of each side: all rays except ri covered by some
                // constant, and ri covered by that constant minus the new
                // edge weight.
                let admissible = |side: &[usize], dk: u64| -> Option<u64> {
                    let mut cov = vec![0u64; star.q + 1];
                    for &t in side {
                        cov[star.ends[t].ray] += star.ends[t].weight;
                    }
                    cov[ri] += dk;
                    let dd = cov[0];
                    if cov.iter().all(|&c| c == dd) && dd > 0 {
                        Some(dd)
                    } else {
                        None
                    }
                };
                let (Some(dd1), Some(dd2)) = (admissible(&side1, d1), admissible(&side2, d2))
                else {
                    continue;
                };
                // both sides must be rigid (local RH = 0)
                let rh = |side: &[usize], dd: u64| -> i64 {
                    (side.len() as i64 + 1) - dd as i64 * (star.q as i64 - 1) - 2
                };
                if rh(&side1, dd1) != 0 || rh(&side2, dd2) != 0 {
                    continue;
                }
                out.push(Resolution::EndSplit {
                    i: star.label_of_end(k),
                    d1,
                    d2,
                    side1: side1.iter().map(|&t| star.label_of_end(t)).collect(),
                    side2: side2.iter().map(|&t| star.label_of_end(t)).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// The (integral, not necessarily primitive) direction vector of a
/// resolution in distance coordinates on R^(N_V choose 2).
pub fn ray_vector(star: &VertexStar, res: &Resolution) -> Vec<Int> {
    let n = star.num_markings();
    match res {
        Resolution::PairMerge { i, j } => trees::split_vector(n, trees::leafset_from(&[*i, *j])),
        Resolution::ContractedSlide { i } => trees::split_vector(n, trees::leafset_from(&[1, *i])),
        Resolution::EndSplit {
            d1,
            d2,
            side1,
            side2,
            ..
        } => {
            let v1 = trees::split_vector(n, trees::leafset_from(side1));
            let v2 = trees::split_vector(n, trees::leafset_from(side2));
            let (d1, d2) = (Int::from(*d1), Int::from(*d2));
            v1.iter().zip(&v2).map(|(a, b)| &d2 * a + &d1 * b).collect()
        }
    }
}

/// The cover-counting weight of a resolution (before folding in the
/// lattice length of its direction vector).
pub fn resolution_weight(star: &VertexStar, res: &Resolution) -> Rat {
    match res {
        Resolution::PairMerge { i, j } => {
            let ka = i - 1 - usize::from(star.contracted);
            let kb = j - 1 - usize::from(star.contracted);
            let ray = star.ends[ka].ray;
            assert_eq!(ray, star.ends[kb].ray, "merged ends must share a ray");
            let labels: Vec<usize> = (0..star.ends.len())
                .filter(|&t| t != ka && t != kb)
                .map(|t| star.label_of_end(t))
                .collect();
            let profiles = ray_profiles(
                star,
                &labels,
                Some((ray, star.ends[ka].weight + star.ends[kb].weight)),
            );
            let d = coverage(&profiles)[0] as usize;
            hurwitz::hurwitz_number(&HurwitzProblem { d, profiles })
        }
        Resolution::ContractedSlide { .. } => {
            let labels: Vec<usize> = (0..star.ends.len()).map(|t| star.label_of_end(t)).collect();
            let profiles = ray_profiles(star, &labels, None);
            let d = coverage(&profiles)[0] as usize;
            hurwitz::hurwitz_number(&HurwitzProblem { d, profiles })
        }
        Resolution::EndSplit {
            i,
            d1,
            d2,
            side1,
            side2,
        } => {
            let k = i - 1 - usize::from(star.contracted);
            let ri = star.ends[k].ray;
            let g = num_integer::Integer::gcd(d1, d2);
            let mut w = Rat::from_integer(Int::from(g));
            for (side, dk) in [(side1, d1), (side2, d2)] {
                let profiles = ray_profiles(star, side, Some((ri, *dk)));
                let d = coverage(&profiles)[0] as usize;
                w *= hurwitz::hurwitz_number(&HurwitzProblem { d, profiles });
            }
            w
        }
    }
}

/// The weighted rays of the local fan (resolutions of weight zero are
/// omitted; they bound no actual cells). Directions are normalized to
/// primitive vectors of the quotient lattice spanned by the split
/// vectors — the relevant lattice length of a splitting ray
/// d2·v_1 + d1·v_2 is gcd(d1, d2), which the cover-counting weight
/// already accounts for.
pub fn build_local_fan(star: &VertexStar) -> Result<Vec<WeightedRay>, String> {
    let n = star.num_markings();
    let lat = trees::QuotientLattice::shared(n);
    let mut out = Vec::new();
    for res in enumerate_resolutions(star)? {
        let h = resolution_weight(star, &res);
        if h.is_zero() {
            continue;
        }
        let v = ray_vector(star, &res);
        let rep = trees::canonical_rep_mod_un(n, &linalg::rat_of(&v));
        let coords = lat
            .coords(&rep)
            .ok_or("ray direction outside the moduli lattice")?;
        let mut g = Int::zero();
        for c in &coords {
            if !c.is_integer() {
                return Err("ray direction has fractional lattice coordinates".into());
            }
            g = num_integer::Integer::gcd(&g, &c.to_integer());
        }
        if g.is_zero() {
            return Err("resolution ray is trivial modulo the lineality space".into());
        }
        let primitive: Vec<Int> = v.iter().map(|x| x / &g).collect();
        if primitive.iter().zip(&v).any(|(p, x)| &(p * &g) != x) {
            return Err("lattice length does not divide the ray vector".into());
        }
        out.push(WeightedRay {
            primitive,
            lattice_length: g,
            weight: h,
            resolution: res,
        });
    }
    Ok(out)
}

/// Exact balancing check: the weighted sum of primitive ray directions
/// must vanish modulo U_N.
pub fn check_balanced_local(star: &VertexStar) -> Result<bool, String> {
    let fan = build_local_fan(star)?;
    let n = star.num_markings();
    let mut sum = vec![Rat::zero(); trees::num_pairs(n)];
    for ray in &fan {
        for (k, x) in ray.primitive.iter().enumerate() {
            sum[k] = &sum[k] + &ray.weight * Rat::from_integer(x.clone());
        }
    }
    trees::is_zero_mod_un(n, &sum)
}

/// Multiplicity of a resolution under the projection to the 4-marked
/// moduli space of a subset I: the image of the ray vector is a
/// non-negative integer multiple c of one of the three split vectors of
/// I (modulo U_4). Returns that split (as a leaf set of the four sorted
/// labels, the side of the smallest) and c, or None when the image lies
/// in U_4.
pub fn ft_multiplicity(
    star: &VertexStar,
    res: &Resolution,
    subset: &[usize; 4],
) -> Result<Option<(LeafSet, Int)>, String> {
    let n = star.num_markings();
    let v = linalg::rat_of(&ray_vector(star, res));
    let w = trees::forgetful_project(n, &v, subset);
    if trees::is_zero_mod_un(4, &w)? {
        return Ok(None);
    }
    let mut answer: Option<(LeafSet, Int)> = None;
    for other in 2..=4usize {
        let split = trees::leafset_from(&[1, other]);
        let vs = linalg::rat_of(&trees::split_vector(4, split));
        // solve w - c*vs in U_4: unknowns mu_1..mu_4 and c
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 1..=4usize {
            for j in i + 1..=4 {
                let idx = trees::pair_index(4, i, j);
                let mut row = vec![Rat::zero(); 5];
                row[i - 1] = Rat::one();
                row[j - 1] = Rat::one();
                row[4] = vs[idx].clone();
                rows.push(row);
                rhs.push(w[idx].clone());
            }
        }
        if let Some(sol) = linalg::solve_rational(&rows, &rhs) {
            let c = sol[4].clone();
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() || c.is_negative() {
                return Err(format!(
                    "projection multiple {} is not a non-negative integer",
                    c
                ));
            }
            if answer.is_some() {
                return Err("projection matches more than one split".into());
            }
            answer = Some((split, c.to_integer()));
        }
    }
    answer
        .map(Some)
        .ok_or_else(|| "projection matches no split".into())
}

/// All balanced stars with rdim = 1 for the given parameters; used by the
/// exhaustive balancing checks. Ends are listed ray by ray with weights
/// non-increasing, which is a canonical form (labels follow positions).
pub fn enumerate_stars(q: usize, d_max: u64, max_markings: usize) -> Vec<VertexStar> {
    fn partitions(d: u64) -> Vec<Vec<u64>> {
        fn rec(d: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if d == 0 {
                out.push(cur.clone());
                return;
            }
            let mut k = max.min(d);
            while k >= 1 {
                cur.push(k);
                rec(d - k, k, cur, out);
                cur.pop();
                k -= 1;
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        for contracted in [false, true] {
            // rdim = parts + contracted - d(q-1) - 2 = 1
            let needed_parts = d as i64 * (q as i64 - 1) + 3 - i64::from(contracted);
            if needed_parts < (q + 1) as i64 {
                continue;
            }
            let needed_parts = needed_parts as usize;
            if needed_parts + usize::from(contracted) > max_markings {
                continue;
            }
            let per_ray = partitions(d);
            // choose one partition per ray with the right total part count
            fn assemble(
                per_ray: &[Vec<u64>],
                q1: usize,
                ray: usize,
                left: i64,
                chosen: &mut Vec<Vec<u64>>,
                out: &mut Vec<Vec<Vec<u64>>>,
            ) {
                if ray == q1 {
                    if left == 0 {
                        out.push(chosen.clone());
                    }
                    return;
                }
                for p in per_ray {
                    if (p.len() as i64) <= left {
                        chosen.push(p.clone());
                        assemble(per_ray, q1, ray + 1, left - p.len() as i64, chosen, out);
                        chosen.pop();
                    }
                }
            }
            let mut combos = Vec::new();
            assemble(
                &per_ray,
                q + 1,
                0,
                needed_parts as i64,
                &mut Vec::new(),
                &mut combos,
            );
            for combo in combos {
                let mut ends = Vec::new();
                for (ray, parts) in combo.iter().enumerate() {
                    for &w in parts {
                        ends.push(StarEnd { ray, weight: w });
                    }
                }
                let star = VertexStar {
                    q,
                    ends,
                    contracted,
                };
                debug_assert_eq!(star.rdim(), 1);
                out.push(star);
            }
        }
    }
    out
}
