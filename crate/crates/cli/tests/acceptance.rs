//! Acceptance suite: one test per numbered criterion, each printing a
//! pass/fail line. Expected values are the printed data of the two worked
//! examples and independently computed oracles inside the tests.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use tropfan::bergman::{coarse_bergman, fine_bergman, TropMembership, TropicalFan};
use tropfan::divisor::{
    minkowski_decompose, push_pull_basis, sort_classes, ClassMap, DivisorClass,
};
use tropfan::equations::parse_linear_forms;
use tropfan::fan::{projective_space_fan, Fan};
use tropfan::gfan::{tokens_ignoring_comments, GfanDocument};
use tropfan::linalg::{IntegerVector, RationalMatrix};
use tropfan::matroid::{matroid_from_equations, Matroid};
use tropfan::polytope::Polytope;
use tropfan::rational::{rat, rat_vec, Rational};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture readable")
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropfan"))
}

fn example1_matroid() -> Matroid {
    let (forms, ambient) = parse_linear_forms(&read_fixture("example1_equations.txt")).unwrap();
    matroid_from_equations(&forms, ambient).unwrap()
}

fn example1_coarse() -> TropicalFan {
    coarse_bergman(&example1_matroid()).unwrap()
}

/// The ambient blow-up fan of the first example: projective 5-space
/// stellarly subdivided at the four exceptional Gale rows, in the printed
/// order.
fn example1_ambient_fan() -> Fan {
    let mut fan = projective_space_fan(5);
    for v in [
        [1, 1, 1, 0, 0],
        [1, 0, 0, 1, 1],
        [-1, 0, -1, 0, -1],
        [-1, -1, 0, -1, 0],
    ] {
        fan = fan.stellar_subdivision(&IntegerVector::from_i64(&v)).unwrap();
    }
    fan
}

#[test]
fn criterion_1_gale_fixtures() {
    for (input, expected) in [
        ("example1_degree_matrix.txt", "example1_gale.txt"),
        ("example2_degree_matrix.txt", "example2_gale.txt"),
    ] {
        let start = Instant::now();
        let output = binary()
            .arg("gale")
            .arg(fixture(input))
            .output()
            .expect("binary runs");
        let elapsed = start.elapsed();
        assert!(output.status.success(), "gale failed on {input}");
        let got = RationalMatrix::parse_text(&String::from_utf8(output.stdout).unwrap()).unwrap();
        let want = RationalMatrix::parse_text(&read_fixture(expected)).unwrap();
        assert_eq!(got, want, "gale output differs from the printed matrix for {input}");
        assert!(
            elapsed < Duration::from_millis(100),
            "gale on {input} took {elapsed:?}"
        );
    }
    println!("criterion 1 (gale fixtures): PASS");
}

#[test]
fn criterion_2_example1_tropicalization() {
    let start = Instant::now();
    let trop = example1_coarse();
    let listing = GfanDocument::parse(&read_fixture("example1_trop.gfan")).unwrap();
    let listing_fan = listing.fan().unwrap();

    // ray set equality (as primitive vectors) via an explicit matching
    let mapping = trop
        .fan
        .match_rays(&listing_fan)
        .expect("computed rays equal the printed rays as a set");
    assert_eq!(trop.fan.rays().len(), 10);

    // the printed two-cones, translated through the matching
    let mine: BTreeSet<Vec<usize>> = trop
        .fan
        .cones()
        .iter()
        .filter(|c| c.len() == 2)
        .map(|c| {
            let mut t: Vec<usize> = c.iter().map(|&i| mapping[i]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    let printed: BTreeSet<Vec<usize>> = listing_fan
        .cones()
        .iter()
        .filter(|c| c.len() == 2)
        .cloned()
        .collect();
    assert_eq!(mine, printed, "two-cones differ from the listing");
    assert_eq!(mine.len(), 15);

    let report = trop.fan.validate();
    assert_eq!(report.fvector, vec![1, 10, 15]);
    assert!(report.simplicial);
    assert!(report.pure);
    assert_eq!(report.dim, 2);
    assert_eq!(report.lineality_dim, 0);
    assert!(report.issues.is_empty(), "{:?}", report.issues);

    // the emitter reorders to the reference and matches it token for token
    let doc = GfanDocument::from_fan(&trop.fan)
        .reordered_like(&listing)
        .unwrap();
    assert_eq!(
        tokens_ignoring_comments(&doc.emit(false)),
        tokens_ignoring_comments(&read_fixture("example1_trop.gfan"))
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 2 (example 1 tropicalization): PASS");
}

#[test]
fn criterion_3_example2_tropicalization() {
    let start = Instant::now();
    let mut fans = Vec::new();
    for file in ["example2_equations_a.txt", "example2_equations_b.txt"] {
        let (forms, ambient) = parse_linear_forms(&read_fixture(file)).unwrap();
        let matroid = matroid_from_equations(&forms, ambient).unwrap();
        assert_eq!(ambient, 10);
        fans.push(coarse_bergman(&matroid).unwrap());
    }
    // both printed equation systems give the identical fan
    assert_eq!(fans[0], fans[1]);
    let trop = fans.pop().unwrap();

    let listing = GfanDocument::parse(&read_fixture("example2_trop.gfan")).unwrap();
    let listing_fan = listing.fan().unwrap();
    let mapping = trop
        .fan
        .match_rays(&listing_fan)
        .expect("computed rays equal the 25 printed rays as a set");
    assert_eq!(trop.fan.rays().len(), 25);

    let report = trop.fan.validate();
    assert_eq!(report.fvector, vec![1, 25, 105, 105]);
    assert_eq!(report.dim, 3);
    assert!(report.pure);
    assert!(report.simplicial);
    assert_eq!(report.lineality_dim, 0);

    // full cone-set agreement with the listing (stronger than the f-vector)
    let mine: BTreeSet<Vec<usize>> = trop
        .fan
        .cones()
        .iter()
        .map(|c| {
            let mut t: Vec<usize> = c.iter().map(|&i| mapping[i]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    let printed: BTreeSet<Vec<usize>> = listing_fan.cones().iter().cloned().collect();
    assert_eq!(mine, printed);

    // the starred rays are the Gale rows modulo a sign change, bijectively
    let gale = RationalMatrix::parse_text(&read_fixture("example2_gale.txt")).unwrap();
    let gale_rows: BTreeSet<Vec<Rational>> = (0..gale.rows()).map(|r| gale.row(r).to_vec()).collect();
    let starred: BTreeSet<usize> = listing.annotations.iter()
        .filter(|(_, text)| text.contains("(*)"))
        .map(|(&i, _)| i)
        .collect();
    assert_eq!(starred.len(), 15);
    let negated_starred: BTreeSet<Vec<Rational>> = starred
        .iter()
        .map(|&i| listing_fan.rays()[i].neg().to_rational())
        .collect();
    assert_eq!(negated_starred, gale_rows);

    // ray #2 of the listing is the sum of rays #5, #8 and #11
    let rays = listing_fan.rays();
    assert_eq!(rays[2], rays[5].add(&rays[8]).add(&rays[11]));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 3 (example 2 tropicalization): PASS");
}

/// Exact shoelace area of a polygon given in counterclockwise order; the
/// independent oracle for the volume assertion.
fn shoelace_twice(ordered: &[(i64, i64)]) -> i64 {
    let n = ordered.len();
    let mut acc = 0i64;
    for i in 0..n {
        let (x1, y1) = ordered[i];
        let (x2, y2) = ordered[(i + 1) % n];
        acc += x1 * y2 - x2 * y1;
    }
    acc.abs()
}

#[test]
fn criterion_4_newton_okounkov_figure() {
    let start = Instant::now();
    let triangle = Polytope::hull(&[rat_vec(&[0, 0]), rat_vec(&[0, 1]), rat_vec(&[1, 0])]).unwrap();
    let segment = Polytope::hull(&[rat_vec(&[0, 0]), rat_vec(&[1, 1])]).unwrap();
    let pentagon = triangle.minkowski_sum(&segment).unwrap();

    let expected: Vec<Vec<Rational>> = vec![
        rat_vec(&[0, 0]),
        rat_vec(&[0, 1]),
        rat_vec(&[1, 0]),
        rat_vec(&[1, 2]),
        rat_vec(&[2, 1]),
    ];
    assert_eq!(pentagon.vertices(), &expected[..]);

    assert!(pentagon.contains(&rat_vec(&[1, 1])));
    assert!(!pentagon.is_vertex(&rat_vec(&[1, 1])));
    assert!(pentagon
        .lattice_points()
        .contains(&IntegerVector::from_i64(&[1, 1])));

    // volume 5 = the degree of the quintic del Pezzo; shoelace oracle on the
    // counterclockwise boundary
    let oracle = shoelace_twice(&[(0, 0), (1, 0), (2, 1), (1, 2), (0, 1)]);
    assert_eq!(oracle, 5);
    assert_eq!(pentagon.normalized_volume().unwrap(), rat(5));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_millis(100), "took {elapsed:?}");
    println!("criterion 4 (Newton-Okounkov figure): PASS");
}

#[test]
fn criterion_5_minkowski_basis_fixture() {
    let maps: serde_json::Value =
        serde_json::from_str(&read_fixture("dp5_class_maps.json")).unwrap();
    let matrix_from = |value: &serde_json::Value| -> RationalMatrix {
        let rows: Vec<Vec<String>> = serde_json::from_value(value.clone()).unwrap();
        RationalMatrix::from_string_rows(&rows).unwrap()
    };
    let restrict = ClassMap(matrix_from(&maps["restrict"]));
    let push = ClassMap(matrix_from(&maps["push"]));
    let ambient_basis: Vec<DivisorClass> = maps["ambient_nef_basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let coords: Vec<i64> = serde_json::from_value(e["class"].clone()).unwrap();
            DivisorClass::from_i64(&coords)
        })
        .collect();
    assert_eq!(ambient_basis.len(), 12);

    let basis = push_pull_basis(&ambient_basis, &restrict, &push).unwrap();

    // expected: H, H-Ei, H-Ei-Ej, 2H-E1-E2-E3-E4 in (H,E1..E4) coordinates
    let mut expected = vec![DivisorClass::from_i64(&[1, 0, 0, 0, 0])];
    for i in 1..5 {
        let mut v = [1i64, 0, 0, 0, 0];
        v[i] = -1;
        expected.push(DivisorClass::from_i64(&v));
    }
    for i in 1..5 {
        for j in i + 1..5 {
            let mut v = [1i64, 0, 0, 0, 0];
            v[i] = -1;
            v[j] = -1;
            expected.push(DivisorClass::from_i64(&v));
        }
    }
    expected.push(DivisorClass::from_i64(&[2, -1, -1, -1, -1]));
    sort_classes(&mut expected);
    assert_eq!(basis, expected, "push-pull basis differs from the 12 classes");

    // the anticanonical class decomposes as H + (2H - E1 - E2 - E3 - E4)
    let target = DivisorClass::from_i64(&[3, -1, -1, -1, -1]);
    let d = minkowski_decompose(&target, &basis).unwrap();
    for (class, coeff) in basis.iter().zip(&d.coefficients) {
        let expected_coeff = if *class == DivisorClass::from_i64(&[1, 0, 0, 0, 0])
            || *class == DivisorClass::from_i64(&[2, -1, -1, -1, -1])
        {
            rat(1)
        } else {
            rat(0)
        };
        assert_eq!(*coeff, expected_coeff, "coefficient of {class:?}");
    }
    println!("criterion 5 (Minkowski basis fixture): PASS");
}

#[test]
fn criterion_6_flag_enumeration() {
    let fan = example1_ambient_fan();
    let matroid = example1_matroid();
    let oracle = TropMembership::new(&matroid).unwrap();
    // the ambient fan is in toric coordinates: membership of -w
    let sub = fan
        .subfan_meeting(|w| {
            let neg: Vec<Rational> = w.iter().map(|x| -x).collect();
            oracle.contains(&neg)
        })
        .unwrap();
    assert_eq!(sub.validate().fvector, vec![1, 10, 15]);

    // ambient maximal cone {E13, E24, E14, E23, E3}: the divisors of
    // x2, x5, x3, x4 and the exceptional ray over the third plane
    let ray = |v: &[i64]| fan.ray_index(&IntegerVector::from_i64(v)).unwrap();
    let e13 = ray(&[0, 1, 0, 0, 0]);
    let e24 = ray(&[0, 0, 0, 0, 1]);
    let e14 = ray(&[0, 0, 1, 0, 0]);
    let e23 = ray(&[0, 0, 0, 1, 0]);
    let e3 = ray(&[-1, 0, -1, 0, -1]);
    let mut ambient_cone = vec![e13, e24, e14, e23, e3];
    ambient_cone.sort_unstable();
    assert!(
        fan.cones().iter().any(|c| *c == ambient_cone),
        "the chosen ambient cone is a cone of the fan"
    );

    let chains = sub.flag_chains(&ambient_cone, 2);
    assert_eq!(chains.len(), 8, "each of the four pairs extends by its two rays");
    let tops: BTreeSet<Vec<usize>> = chains.iter().map(|c| c.cones[1].clone()).collect();
    let expected: BTreeSet<Vec<usize>> = [
        vec![e13, e24],
        vec![e14, e23],
        vec![e13, e3],
        vec![e23, e3],
    ]
    .into_iter()
    .map(|mut c| {
        c.sort_unstable();
        c
    })
    .collect();
    assert_eq!(tops, expected, "depth-2 chains differ from the printed four");

    // the same four chains on the tropical side, identified by flats
    let trop = example1_coarse();
    let flat = |elements: &[usize]| trop.ray_of_flat(elements).unwrap();
    let mut trop_cone = vec![flat(&[2]), flat(&[5]), flat(&[3]), flat(&[4]), flat(&[0, 2, 4])];
    trop_cone.sort_unstable();
    let trop_chains = trop.fan.flag_chains(&trop_cone, 2);
    let trop_tops: BTreeSet<Vec<usize>> =
        trop_chains.iter().map(|c| c.cones[1].clone()).collect();
    let trop_expected: BTreeSet<Vec<usize>> = [
        vec![flat(&[2]), flat(&[5])],
        vec![flat(&[3]), flat(&[4])],
        vec![flat(&[2]), flat(&[0, 2, 4])],
        vec![flat(&[4]), flat(&[0, 2, 4])],
    ]
    .into_iter()
    .map(|mut c| {
        c.sort_unstable();
        c
    })
    .collect();
    assert_eq!(trop_tops, trop_expected);
    println!("criterion 6 (flag enumeration): PASS");
}

// ---------------------------------------------------------------------------
// criterion 7: property suites
// ---------------------------------------------------------------------------

mod prop {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use tropfan::rational::Int;

    /// Random connected loopless matroids of rank <= 4 on <= 8 elements.
    pub fn random_matroids(count: usize, seed: u64) -> Vec<Matroid> {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let rank = rng.gen_range(2..=4usize);
            let n = rng.gen_range(rank.max(3)..=8usize);
            let rows: Vec<Vec<i64>> = (0..rank)
                .map(|_| (0..n).map(|_| rng.gen_range(-2..=2i64)).collect())
                .collect();
            let m = Matroid::from_columns(RationalMatrix::from_int_rows(&rows));
            if !m.loops().is_empty() || m.full_rank() < 2 {
                continue;
            }
            let ground: Vec<usize> = (0..n).collect();
            if !m.is_connected(&ground).unwrap() {
                continue;
            }
            if m.proper_flats().unwrap().len() > 64 {
                continue;
            }
            out.push(m);
        }
        out
    }

    /// 1000 exact random points of the cone of `rays` (nonnegative integer
    /// combinations), fed to the membership oracle.
    pub fn sample_cone_against_oracle(
        rays: &[&IntegerVector],
        oracle: &TropMembership,
        rng: &mut StdRng,
        samples: usize,
    ) {
        let dim = rays[0].len();
        for _ in 0..samples {
            let mut point = vec![Rational::from_integer(Int::from(0)); dim];
            for r in rays {
                let c = rng.gen_range(0..=50i64);
                for (p, x) in point.iter_mut().zip(&r.0) {
                    *p += Rational::from_integer(x * Int::from(c));
                }
            }
            assert!(
                oracle.contains(&point),
                "cone sample escaped the tropical support"
            );
        }
    }

    /// Codimension-one balancing: at every wall of the fan the extra rays of
    /// the incident maximal cones sum into the wall's span.
    pub fn check_balancing(fan: &Fan) {
        let maximal = fan.maximal_cones();
        let dim = fan.dim();
        if dim == 0 {
            return;
        }
        for tau in fan.cones().iter().filter(|c| fan.cone_dim(c) == dim - 1) {
            let incident: Vec<&&Vec<usize>> = maximal
                .iter()
                .filter(|m| tau.iter().all(|i| m.contains(i)))
                .collect();
            if incident.is_empty() {
                continue;
            }
            let mut sum = vec![Rational::from_integer(Int::from(0)); fan.ambient_dim()];
            for m in &incident {
                for &i in m.iter().filter(|i| !tau.contains(i)) {
                    for (s, x) in sum.iter_mut().zip(&fan.rays()[i].0) {
                        *s += Rational::from_integer(x.clone());
                    }
                }
            }
            // sum must lie in the span of tau's rays
            let mut rows: Vec<Vec<Rational>> =
                tau.iter().map(|&i| fan.rays()[i].to_rational()).collect();
            let span_rank = RationalMatrix::from_rows(rows.clone()).unwrap().rank();
            rows.push(sum);
            let with_sum = RationalMatrix::from_rows(rows).unwrap().rank();
            assert_eq!(span_rank, with_sum, "balancing fails at wall {tau:?}");
        }
    }

    /// Random complete simplicial fan: the orthant (cross-polytope) fan with
    /// a few random stellar subdivisions.
    pub fn random_complete_fan(dim: usize, rng: &mut StdRng) -> Fan {
        let mut rays = Vec::new();
        for i in 0..dim {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            rays.push(IntegerVector::from_i64(&v));
            v[i] = -1;
            rays.push(IntegerVector::from_i64(&v));
        }
        let mut maximal = Vec::new();
        for mask in 0..(1u32 << dim) {
            let cone: Vec<usize> = (0..dim)
                .map(|i| 2 * i + ((mask >> i & 1) as usize))
                .collect();
            maximal.push(cone);
        }
        let mut fan = Fan::from_maximal(dim, rays, &maximal).unwrap();
        for _ in 0..rng.gen_range(1..=3usize) {
            let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3i64)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            fan = fan
                .stellar_subdivision(&IntegerVector::from_i64(&v))
                .unwrap();
        }
        fan
    }
}

#[test]
fn criterion_7_property_suites() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20180529);

    // (a) fine/coarse support equality on 20 random matroids
    let matroids = prop::random_matroids(20, 7);
    let mut bergman_fans: Vec<Fan> = Vec::new();
    for m in &matroids {
        let oracle = TropMembership::new(m).unwrap();
        let fine = fine_bergman(m).unwrap();
        let coarse = coarse_bergman(m).unwrap();
        // every maximal cone of the fine fan: 1000 interior samples pass
        for cone in fine.fan.maximal_cones() {
            let rays: Vec<&IntegerVector> = cone.iter().map(|&i| &fine.fan.rays()[i]).collect();
            prop::sample_cone_against_oracle(&rays, &oracle, &mut rng, 1000);
        }
        // coarse cones as well (support equality from the coarse side)
        for cone in coarse.fan.maximal_cones() {
            let rays: Vec<&IntegerVector> = cone.iter().map(|&i| &coarse.fan.rays()[i]).collect();
            prop::sample_cone_against_oracle(&rays, &oracle, &mut rng, 1000);
        }
        // a spot sample of each coarse maximal cone lies inside the fine fan
        for cone in coarse.fan.maximal_cones() {
            let mut barycenter = vec![rat(0); coarse.fan.ambient_dim()];
            for &i in cone {
                for (b, x) in barycenter.iter_mut().zip(&coarse.fan.rays()[i].0) {
                    *b += Rational::from_integer(x.clone());
                }
            }
            assert!(fine.fan.contains_point(&barycenter));
        }
        // random ambient points: oracle, fine fan and coarse fan agree
        let dim = m.ground_size() - 1;
        for _ in 0..100 {
            let w: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-9..=9i64))).collect();
            let in_supp = oracle.contains(&w);
            assert_eq!(fine.fan.contains_point(&w), in_supp);
            assert_eq!(coarse.fan.contains_point(&w), in_supp);
        }
        // structural invariants: pure of dimension rank-1, simplicial, and
        // the coarse rays are a subset of the fine rays
        let rank = m.full_rank();
        for trop in [&fine, &coarse] {
            let report = trop.fan.validate();
            assert!(report.simplicial);
            assert!(report.pure);
            assert_eq!(report.dim, rank - 1);
        }
        for r in coarse.fan.rays() {
            assert!(fine.fan.rays().contains(r));
        }
        bergman_fans.push(fine.fan);
        bergman_fans.push(coarse.fan);
    }
    let t_a = start.elapsed();

    // (b) balancing at every codimension-one cone of every generated fan
    for fan in &bergman_fans {
        prop::check_balancing(fan);
    }
    prop::check_balancing(&example1_coarse().fan);
    let t_b = start.elapsed();

    // (c) gfan round-trip token identity on both paper listings
    for file in ["example1_trop.gfan", "example2_trop.gfan"] {
        let text = read_fixture(file);
        let doc = GfanDocument::parse(&text).unwrap();
        assert_eq!(
            tokens_ignoring_comments(&doc.emit(false)),
            tokens_ignoring_comments(&text),
            "round trip differs for {file}"
        );
    }
    let t_c = start.elapsed();

    // (d) brute-force flat and circuit oracles agree with the enumerations
    let (forms2, ambient2) = parse_linear_forms(&read_fixture("example2_equations_b.txt")).unwrap();
    let example2 = matroid_from_equations(&forms2, ambient2).unwrap();
    let mut oracle_matroids: Vec<&Matroid> = vec![&example2];
    let ex1 = example1_matroid();
    oracle_matroids.push(&ex1);
    let small: Vec<Matroid> = prop::random_matroids(3, 99)
        .into_iter()
        .filter(|m| m.ground_size() <= 7)
        .collect();
    oracle_matroids.extend(small.iter());
    for m in oracle_matroids {
        let n = m.ground_size();
        assert!(n <= 10);
        // flats by exhaustive closure over all subsets
        let mut flats: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let cl = m.closure(&subset).unwrap();
            if cl.rank > 0 && cl.rank < m.full_rank() {
                flats.insert(cl.elements);
            }
        }
        let enumerated: BTreeSet<Vec<usize>> = m
            .proper_flats()
            .unwrap()
            .into_iter()
            .map(|f| f.elements)
            .collect();
        assert_eq!(flats, enumerated);
        // circuits by scan: minimal dependent subsets
        let mut circuits: Vec<Vec<usize>> = Vec::new();
        for size in 1..=n {
            for mask in 0u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if subset.len() != size
                    || m.rank(&subset).unwrap() == subset.len()
                    || circuits.iter().any(|c| c.iter().all(|x| subset.contains(x)))
                {
                    continue;
                }
                circuits.push(subset);
            }
        }
        circuits.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        assert_eq!(circuits, m.circuits().unwrap());
    }
    let t_d = start.elapsed();

    // (e) stellar subdivision preserves support and validity on 50 random
    // complete simplicial fans of dimension <= 4
    for k in 0..50u64 {
        let mut local = StdRng::seed_from_u64(1000 + k);
        let dim = local.gen_range(2..=4usize);
        let fan = prop::random_complete_fan(dim, &mut local);
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..dim).map(|_| local.gen_range(-4..=4i64)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let subdivided = fan.stellar_subdivision(&IntegerVector::from_i64(&v)).unwrap();
        let report = subdivided.validate();
        assert!(report.issues.is_empty(), "{:?}", report.issues);
        assert!(report.simplicial && report.pure);
        assert!(subdivided.is_complete());
        assert_eq!(report.fvector, subdivided.fvector());
        // support check: both fans are complete, so containment everywhere
        for _ in 0..20 {
            let w: Vec<Rational> = (0..dim).map(|_| rat(local.gen_range(-9..=9i64))).collect();
            assert!(fan.contains_point(&w));
            assert!(subdivided.contains_point(&w));
        }
    }
    let total = start.elapsed();
    assert!(
        total < Duration::from_secs(60),
        "property suites took {total:?} (a {t_a:?}, b {t_b:?}, c {t_c:?}, d {t_d:?})"
    );
    println!(
        "criterion 7 (property suites, a {:?} b {:?} c {:?} d {:?} e {:?} total {:?}): PASS",
        t_a,
        t_b - t_a,
        t_c - t_b,
        t_d - t_c,
        total - t_d,
        total
    );
}
