//! End-to-end acceptance suite. Each test prints one PASS line on
//! success; a failure shows up as the usual failing test with context.

use msl::complex::{build_complex, check_global_balancing, gluing_matrix, purity_defects};
use msl::hurwitz::{hurwitz_number, HurwitzProblem};
use msl::linalg::{self, gcd_maximal_minors, int, rat, Int, Rat};
use msl::localfan::{
    build_local_fan, check_balanced_local, enumerate_resolutions, enumerate_stars, ft_multiplicity,
    resolution_weight, Resolution, VertexStar,
};
use msl::stablemap::{build_type, DegreeSpec, EnumerateOptions, StableMapType};
use msl::target::{Cell, TargetCurve};
use msl::trees::{self, LeafSet};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn dirs(v: &[[i64; 2]]) -> Vec<Vec<Int>> {
    v.iter().map(|w| vec![int(w[0]), int(w[1])]).collect()
}

// ---------------------------------------------------------------------
// 1. The plane-line example: a pure 1-dimensional balanced fan with four
//    rays of weight 1.
#[test]
fn intro_fan_reproduction() {
    let l = msl::stablemap::examples::intro_line();
    let deg = msl::stablemap::examples::intro_degree();
    assert_eq!(deg.expected_dimension(&l).unwrap(), 1);
    let m = build_complex(&l, &deg, &EnumerateOptions::default()).unwrap();
    assert_eq!(m.max_dim, 1, "fan dimension");
    let maximal: Vec<usize> = (0..m.types.len())
        .filter(|&i| m.types[i].dimension == m.max_dim)
        .collect();
    assert_eq!(maximal.len(), 4, "number of rays");
    for &i in &maximal {
        assert_eq!(m.weights[i].clone().unwrap(), rat(1), "ray weight");
    }
    assert!(purity_defects(&l, &m).is_empty(), "purity");
    let report = check_global_balancing(&l, &deg, &m, &m.weights);
    assert!(report.balanced, "balancing");
    println!("PASS intro_fan_reproduction: 1-dimensional, 4 rays, all weights 1, pure, balanced");
}

// ---------------------------------------------------------------------
// 2. Golden evaluation matrices for the two cut-and-glue configurations.

/// One vertex on the first ray of the plane line carrying a contracted
/// end and an outward end of weight d1, joined by a single bounded edge
/// of weight d1 to a vertex at the origin with d1 weight-1 ends on the
/// second ray and one weight-d1 end on the diagonal.
fn one_edge_configuration(d1: i64) -> (TargetCurve, DegreeSpec, StableMapType) {
    let l = TargetCurve::standard_line(2);
    let mut directions = vec![vec![int(0), int(0)], vec![int(-d1), int(0)]];
    for _ in 0..d1 {
        directions.push(vec![int(0), int(-1)]);
    }
    directions.push(vec![int(d1), int(d1)]);
    let deg = DegreeSpec {
        num_contracted: 1,
        directions,
    };
    let n = deg.total_markings();
    let split: Vec<usize> = (3..=n).collect();
    let splits = vec![trees::leafset_from(&split)];
    let cells = vec![Cell::Ray(0), Cell::Vertex(0)];
    let t = build_type(&l, &deg, &splits, &cells).expect("configuration is realizable");
    (l, deg, t)
}

/// One 3-valent vertex on the first ray with an outward end of weight
/// d1+d2 and two bounded edges of weights d1 and d2 to two vertices at
/// the origin, the k-th carrying d_k weight-1 ends on the second ray and
/// one weight-d_k end on the diagonal.
fn two_edge_configuration(d1: i64, d2: i64) -> (TargetCurve, DegreeSpec, StableMapType) {
    let l = TargetCurve::standard_line(2);
    let mut directions = vec![vec![int(-(d1 + d2)), int(0)]];
    for dk in [d1, d2] {
        for _ in 0..dk {
            directions.push(vec![int(0), int(-1)]);
        }
        directions.push(vec![int(dk), int(dk)]);
    }
    let deg = DegreeSpec {
        num_contracted: 0,
        directions,
    };
    let s1: Vec<usize> = (2..=(d1 + 2) as usize).collect();
    let s2: Vec<usize> = ((d1 + 3) as usize..=(d1 + d2 + 3) as usize).collect();
    let splits = vec![trees::leafset_from(&s1), trees::leafset_from(&s2)];
    let cells = vec![Cell::Ray(0), Cell::Vertex(0), Cell::Vertex(0)];
    let t = build_type(&l, &deg, &splits, &cells).expect("configuration is realizable");
    (l, deg, t)
}

#[test]
fn evaluation_matrix_golden() {
    for (d1, d2) in [(1i64, 1i64), (2, 3), (2, 4), (6, 9)] {
        let (l, _, t) = one_edge_configuration(d1);
        let g = gluing_matrix(&l, &t).unwrap();
        assert_eq!(
            g,
            vec![vec![int(1), int(-d1), int(-d1)]],
            "one-edge matrix, d1={}",
            d1
        );
        assert_eq!(gcd_maximal_minors(&g), int(1), "one-edge gcd, d1={}", d1);

        let (l, _, t) = two_edge_configuration(d1, d2);
        let g = gluing_matrix(&l, &t).unwrap();
        assert_eq!(
            g,
            vec![
                vec![int(1), int(-d1), int(0), int(-d1), int(0)],
                vec![int(1), int(0), int(-d2), int(0), int(-d2)],
            ],
            "two-edge matrix, (d1,d2)=({},{})",
            d1,
            d2
        );
        assert_eq!(
            gcd_maximal_minors(&g),
            int(num_integer::Integer::gcd(&d1, &d2)),
            "two-edge gcd, (d1,d2)=({},{})",
            d1,
            d2
        );
    }
    println!(
        "PASS evaluation_matrix_golden: both cut matrices verbatim for (1,1),(2,3),(2,4),(6,9)"
    );
}

// ---------------------------------------------------------------------
// 3. Cover-counting suite: fixed values plus symmetry self-checks over
//    every 0-dimensional problem with d <= 4.

fn h(d: usize, profiles: &[&[u64]]) -> Rat {
    hurwitz_number(&HurwitzProblem {
        d,
        profiles: profiles.iter().map(|p| p.to_vec()).collect(),
    })
}

/// All multisets of non-trivial ramification profiles of degree d whose
/// defects sum to 2d-2 (so the count is 0-dimensional).
fn zero_dimensional_problems(d: usize) -> Vec<Vec<Vec<u64>>> {
    fn partitions(d: u64) -> Vec<Vec<u64>> {
        fn rec(d: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if d == 0 {
                out.push(cur.clone());
                return;
            }
            for k in (1..=max.min(d)).rev() {
                cur.push(k);
                rec(d - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }
    let parts: Vec<Vec<u64>> = partitions(d as u64)
        .into_iter()
        .filter(|p| p.len() < d) // non-trivial: at least one genuine branch point
        .collect();
    let target = 2 * d as i64 - 2;
    let mut out = Vec::new();
    fn rec(
        parts: &[Vec<u64>],
        from: usize,
        left: i64,
        d: usize,
        cur: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for i in from..parts.len() {
            let defect = d as i64 - parts[i].len() as i64;
            if defect <= left {
                cur.push(parts[i].clone());
                rec(parts, i, left - defect, d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&parts, 0, target, d, &mut Vec::new(), &mut out);
    out
}

#[test]
fn hurwitz_suite() {
    assert_eq!(h(2, &[&[2], &[1, 1], &[2]]), rat(1));
    for k in 2..=5 {
        let ones: Vec<&[u64]> = (0..k).map(|_| &[1u64] as &[u64]).collect();
        assert_eq!(h(1, &ones), rat(1), "trivial degree-1 count, k={}", k);
    }
    assert_eq!(h(3, &[&[3], &[3], &[1, 1, 1]]), rat(2));
    assert_eq!(h(2, &[&[2], &[2]]), rat(1) / rat(2));

    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0usize;
    for d in 2..=4usize {
        for profiles in zero_dimensional_problems(d) {
            let base = hurwitz_number(&HurwitzProblem {
                d,
                profiles: profiles.clone(),
            });
            // invariance under permuting the branch points
            let mut shuffled = profiles.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(
                hurwitz_number(&HurwitzProblem {
                    d,
                    profiles: shuffled
                }),
                base,
                "profile permutation changed the count for d={} {:?}",
                d,
                profiles
            );
            // invariance under reordering the parts within each profile
            let mut scrambled = profiles.clone();
            for p in scrambled.iter_mut() {
                p.shuffle(&mut rng);
            }
            assert_eq!(
                hurwitz_number(&HurwitzProblem {
                    d,
                    profiles: scrambled
                }),
                base,
                "part reordering changed the count for d={} {:?}",
                d,
                profiles
            );
            checked += 1;
        }
    }
    assert!(
        checked >= 10,
        "expected a non-trivial sweep, got {}",
        checked
    );
    println!(
        "PASS hurwitz_suite: fixed values plus symmetry checks on {} problems",
        checked
    );
}

// ---------------------------------------------------------------------
// 4. Every one-dimensional local fan at a vertex star is balanced.
#[test]
fn local_fans_balanced() {
    let mut total = 0usize;
    for q in [2usize, 3] {
        for star in enumerate_stars(q, 5, 8) {
            assert!(
                check_balanced_local(&star).unwrap(),
                "unbalanced local fan for {:?}",
                star
            );
            total += 1;
        }
    }
    assert!(
        total >= 150,
        "expected a large exhaustive sweep, got {}",
        total
    );
    println!(
        "PASS local_fans_balanced: {} vertex stars, all local fans balanced",
        total
    );
}

// ---------------------------------------------------------------------
// 5. Projection multiplicities onto 4-marked moduli: case table and the
//    equality of the three per-split weighted totals.

/// Expected projection of a resolution ray to the 4-subset `s` (sorted
/// labels): the split of the subset, as positions 1..4 on the side of
/// position 1, and the multiple of its split vector.
fn expected_projection(
    star: &VertexStar,
    res: &Resolution,
    s: &[usize; 4],
) -> Option<(LeafSet, Int)> {
    let pos = |lab: usize| s.iter().position(|&x| x == lab).map(|p| p + 1);
    let side_of = |labels: &[usize]| -> Option<Vec<usize>> {
        let inside: Vec<usize> = labels.iter().filter_map(|&l| pos(l)).collect();
        (inside.len() == 2).then_some(inside)
    };
    let normalize = |side: Vec<usize>| -> LeafSet {
        if side.contains(&1) {
            trees::leafset_from(&side)
        } else {
            let rest: Vec<usize> = (1..=4).filter(|p| !side.contains(p)).collect();
            trees::leafset_from(&rest)
        }
    };
    match res {
        Resolution::PairMerge { i, j } => {
            side_of(&[*i, *j]).map(|side| (normalize(side), Int::one()))
        }
        Resolution::ContractedSlide { i } => {
            side_of(&[1, *i]).map(|side| (normalize(side), Int::one()))
        }
        Resolution::EndSplit {
            d1,
            d2,
            side1,
            side2,
            ..
        } => {
            let _ = star;
            match (side_of(side1), side_of(side2)) {
                (Some(a), Some(b)) => {
                    let (ka, kb) = (normalize(a), normalize(b));
                    assert_eq!(ka, kb, "complementary restrictions give the same split");
                    Some((ka, Int::from(*d1) + Int::from(*d2)))
                }
                (Some(a), None) => Some((normalize(a), Int::from(*d2))),
                (None, Some(b)) => Some((normalize(b), Int::from(*d1))),
                (None, None) => None,
            }
        }
    }
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[test]
fn projection_multiplicities() {
    let mut stars: Vec<VertexStar> = Vec::new();
    for q in [2usize, 3] {
        stars.extend(
            enumerate_stars(q, 4, 7)
                .into_iter()
                .filter(|s| s.num_markings() >= 4),
        );
    }
    let mut pairs: Vec<(usize, Resolution)> = Vec::new();
    for (si, star) in stars.iter().enumerate() {
        for res in enumerate_resolutions(star).unwrap() {
            pairs.push((si, res));
        }
    }
    let mut rng = StdRng::seed_from_u64(11);
    pairs.shuffle(&mut rng);
    pairs.truncate(50);
    assert_eq!(pairs.len(), 50);
    for (si, res) in &pairs {
        let star = &stars[*si];
        for s in four_subsets(star.num_markings()) {
            let got = ft_multiplicity(star, res, &s).unwrap();
            let want = expected_projection(star, res, &s);
            assert_eq!(
                got, want,
                "star {:?} resolution {:?} subset {:?}",
                star, res, s
            );
        }
    }
    // the three per-split weighted totals agree on each projection
    let mut fans_checked = 0usize;
    for star in stars.iter().filter(|s| s.num_markings() >= 4).take(12) {
        for s in four_subsets(star.num_markings()) {
            let mut totals: std::collections::BTreeMap<LeafSet, Rat> = Default::default();
            for res in enumerate_resolutions(star).unwrap() {
                let w = resolution_weight(star, &res);
                if w.is_zero() {
                    continue;
                }
                if let Some((split, c)) = ft_multiplicity(star, &res, &s).unwrap() {
                    let t = totals.entry(split).or_insert_with(Rat::zero);
                    *t = &*t + &w * Rat::from_integer(c);
                }
            }
            let values: Vec<&Rat> = totals.values().collect();
            assert!(
                values.windows(2).all(|w| w[0] == w[1]),
                "unequal split totals {:?} for star {:?} subset {:?}",
                totals,
                star,
                s
            );
        }
        fans_checked += 1;
    }
    println!(
        "PASS projection_multiplicities: case table on 50 resolutions, split totals equal on {} stars",
        fans_checked
    );
}

// ---------------------------------------------------------------------
// 6. Membership in the lineality space equals vanishing of all 4-subset
//    projections.
#[test]
fn lineality_membership_equivalence() {
    let mut rng = StdRng::seed_from_u64(23);
    let mut count = 0usize;
    for n in 4..=7usize {
        let splits = trees::all_splits(n);
        for k in 0..50 {
            let inside = k % 2 == 0;
            // a generic element of the lineality space
            let mu: Vec<Rat> = (0..n)
                .map(|_| rat(rng.gen_range(-9i64..=9)) / rat(rng.gen_range(1i64..=4)))
                .collect();
            let mut x = vec![Rat::zero(); trees::num_pairs(n)];
            for i in 1..=n {
                for j in i + 1..=n {
                    x[trees::pair_index(n, i, j)] = &mu[i - 1] + &mu[j - 1];
                }
            }
            if !inside {
                // leave the lineality space along a single split direction
                let s = splits[rng.gen_range(0..splits.len())];
                let c = rat(rng.gen_range(1i64..=5));
                for (idx, v) in trees::split_vector(n, s).iter().enumerate() {
                    x[idx] = &x[idx] + &c * Rat::from_integer(v.clone());
                }
            }
            let member = trees::is_zero_mod_un(n, &x).unwrap();
            assert_eq!(member, inside, "constructed membership for n={}", n);
            let all_projections_vanish = four_subsets(n).iter().all(|s| {
                let p = trees::forgetful_project(n, &x, s);
                trees::is_zero_mod_un(4, &p).unwrap()
            });
            assert_eq!(
                member, all_projections_vanish,
                "projection test disagrees for n={} x={:?}",
                n, x
            );
            count += 1;
        }
    }
    assert_eq!(count, 200);
    println!(
        "PASS lineality_membership_equivalence: {} vectors, both tests agree",
        count
    );
}

// ---------------------------------------------------------------------
// Shared corpus for 7 and 8: distinct (target, degree) pairs over one-
// and two-vertex targets, covering degree <= 3, at most 7 markings.

fn corpus() -> Vec<(&'static str, TargetCurve, DegreeSpec)> {
    let l2 = || TargetCurve::standard_line(2);
    let l3 = || TargetCurve::standard_line(3);
    let tv = msl::target::examples::two_vertex_example;
    let spec = |n: usize, d: Vec<Vec<Int>>| DegreeSpec {
        num_contracted: n,
        directions: d,
    };
    let mut c: Vec<(&'static str, TargetCurve, DegreeSpec)> = Vec::new();
    let line_d1 = [[-1, 0], [0, -1], [1, 1]];
    c.push(("plane line, degree 1", l2(), spec(0, dirs(&line_d1))));
    c.push((
        "plane line, degree 1, one contracted end",
        l2(),
        spec(1, dirs(&[[0, 0], [-1, 0], [0, -1], [1, 1]])),
    ));
    c.push((
        "plane line, degree 1, two contracted ends",
        l2(),
        spec(2, dirs(&[[0, 0], [0, 0], [-1, 0], [0, -1], [1, 1]])),
    ));
    c.push((
        "plane line, degree 2, split diagonal",
        l2(),
        spec(0, dirs(&[[-1, 0], [-1, 0], [0, -1], [0, -1], [2, 2]])),
    ));
    c.push((
        "plane line, degree 2, contracted end",
        l2(),
        spec(
            1,
            dirs(&[[0, 0], [-1, 0], [-1, 0], [0, -1], [0, -1], [2, 2]]),
        ),
    ));
    c.push((
        "plane line, degree 2, heavy first ray",
        l2(),
        spec(0, dirs(&[[-2, 0], [0, -1], [0, -1], [1, 1], [1, 1]])),
    ));
    c.push((
        "plane line, degree 2, heavy second ray",
        l2(),
        spec(0, dirs(&[[-1, 0], [-1, 0], [0, -2], [1, 1], [1, 1]])),
    ));
    c.push((
        "plane line, degree 3, mixed weights",
        l2(),
        spec(0, dirs(&[[-1, 0], [-2, 0], [0, -1], [0, -2], [3, 3]])),
    ));
    c.push((
        "space line, degree 1",
        l3(),
        spec(
            0,
            vec![
                vec![int(-1), int(0), int(0)],
                vec![int(0), int(-1), int(0)],
                vec![int(0), int(0), int(-1)],
                vec![int(1), int(1), int(1)],
            ],
        ),
    ));
    c.push((
        "space line, degree 1, one contracted end",
        l3(),
        spec(
            1,
            vec![
                vec![int(0), int(0), int(0)],
                vec![int(-1), int(0), int(0)],
                vec![int(0), int(-1), int(0)],
                vec![int(0), int(0), int(-1)],
                vec![int(1), int(1), int(1)],
            ],
        ),
    ));
    c.push((
        "two-vertex curve, degree 1",
        tv(),
        spec(0, dirs(&[[-1, 0], [0, -1], [1, 0], [0, 1]])),
    ));
    c.push((
        "two-vertex curve, degree 1, one contracted end",
        tv(),
        spec(1, dirs(&[[0, 0], [-1, 0], [0, -1], [1, 0], [0, 1]])),
    ));
    c.push((
        "two-vertex curve, degree 1, two contracted ends",
        tv(),
        spec(2, dirs(&[[0, 0], [0, 0], [-1, 0], [0, -1], [1, 0], [0, 1]])),
    ));
    c.push((
        "two-vertex curve, degree 2, weighted ends",
        tv(),
        spec(
            0,
            dirs(&[[-2, 0], [0, -1], [0, -1], [2, 0], [0, 1], [0, 1]]),
        ),
    ));
    c
}

// ---------------------------------------------------------------------
// 7. Dimension formula and purity on the corpus.
#[test]
fn dimension_and_purity() {
    let items = corpus();
    assert!(items.len() >= 10);
    let mut nonempty = 0usize;
    for (name, l, deg) in &items {
        let m = build_complex(l, deg, &EnumerateOptions::default()).unwrap();
        if m.types.is_empty() {
            continue;
        }
        nonempty += 1;
        let excess: i64 = (0..l.vertices.len()).map(|v| l.valence(v) as i64 - 2).sum();
        let d = i64::try_from(&deg.covering_degree(l).unwrap()).unwrap();
        let formula = deg.total_markings() as i64 - d * excess - 2;
        assert_eq!(m.max_dim as i64, formula, "dimension formula for {}", name);
        assert!(
            purity_defects(l, &m).is_empty(),
            "purity defects in {}",
            name
        );
    }
    assert!(
        nonempty >= 10,
        "only {} non-empty corpus complexes",
        nonempty
    );
    println!(
        "PASS dimension_and_purity: {} complexes, dimension formula and purity hold",
        nonempty
    );
}

// ---------------------------------------------------------------------
// 8. Global balancing on the corpus, and failure under a weight mutation.
#[test]
fn global_balancing_and_mutation() {
    let mut balanced = 0usize;
    let mut mutated = 0usize;
    for (name, l, deg) in corpus() {
        let m = build_complex(&l, &deg, &EnumerateOptions::default()).unwrap();
        if m.types.is_empty() {
            continue;
        }
        let report = check_global_balancing(&l, &deg, &m, &m.weights);
        assert!(report.balanced, "unbalanced complex: {}", name);
        balanced += 1;
        // perturb the weight of a cell adjacent to some facet
        if let Some(f) = report.facets.first() {
            let i = f.adjacent[0];
            let mut weights = m.weights.clone();
            weights[i] = Some(weights[i].clone().unwrap() + rat(1));
            let bad = check_global_balancing(&l, &deg, &m, &weights);
            assert!(!bad.balanced, "mutation stayed balanced: {}", name);
            mutated += 1;
        }
    }
    assert!(balanced >= 10 && mutated >= 1);
    println!(
        "PASS global_balancing_and_mutation: {} complexes balanced, {} mutations detected",
        balanced, mutated
    );
}

// ---------------------------------------------------------------------
// 9. Byte-identical JSON output across thread counts.
#[test]
fn deterministic_output() {
    use std::process::Command;
    let dir = std::env::temp_dir().join(format!("msl-determinism-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = serde_json::json!({
        "schema": msl::io::SCHEMA,
        "target": {
            "dim": 2,
            "vertices": [["0", "0"]],
            "edges": [],
            "rays": [
                {"base": 0, "direction": [-1, 0]},
                {"base": 0, "direction": [0, -1]},
                {"base": 0, "direction": [1, 1]}
            ]
        },
        "degree": {
            "contracted": 0,
            "directions": [[-1, 0], [-1, 0], [0, -1], [0, -1], [2, 2]]
        }
    });
    let cfg_path = dir.join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "8"] {
        let out = Command::new(env!("CARGO_BIN_EXE_msl"))
            .args(["build", "--config"])
            .arg(&cfg_path)
            .env("MSL_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "build failed with MSL_THREADS={}: {}",
            threads,
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(out.stdout);
    }
    assert!(
        outputs.windows(2).all(|w| w[0] == w[1]),
        "outputs differ across thread counts"
    );
    assert!(!outputs[0].is_empty());
    let _ = std::fs::remove_dir_all(&dir);
    println!("PASS deterministic_output: byte-identical JSON for MSL_THREADS in {{1, 2, 8}}");
}

// ---------------------------------------------------------------------
// sanity check used by several criteria: the local fan construction on
// the example star stays consistent with the full-complex path
#[test]
fn local_fan_ray_weights_match_complex_weights() {
    // the star of the plane-line example at the origin has four rays in
    // the local fan, matching the four maximal cells of weight 1
    let star = VertexStar {
        q: 2,
        ends: vec![
            msl::localfan::StarEnd { ray: 0, weight: 1 },
            msl::localfan::StarEnd { ray: 0, weight: 1 },
            msl::localfan::StarEnd { ray: 1, weight: 1 },
            msl::localfan::StarEnd { ray: 1, weight: 1 },
            msl::localfan::StarEnd { ray: 2, weight: 2 },
        ],
        contracted: false,
    };
    let fan = build_local_fan(&star).unwrap();
    assert_eq!(fan.len(), 4);
    for ray in &fan {
        assert_eq!(ray.weight, rat(1));
    }
    let _ = linalg::rat_of(&fan[0].primitive);
}
