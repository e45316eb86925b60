//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its runtime budget. Shipped data files under data/ are the
//! inputs for the bundle and script criteria.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use glsurf::anticanon::{
    almost_general_9, collinear_det, is_torsion, nine_point_class, nodal_cubic_point,
    CubicGroupModel, NineVerdict,
};
use glsurf::cohom::{cohomology, cohomology_cached};
use glsurf::config::{BundleConfig, ScriptConfig, SurfaceConfig};
use glsurf::cox::builtin_cox;
use glsurf::exec::{map_items, Workers};
use glsurf::genscript::check_generation_script;
use glsurf::memo::CohomCache;
use glsurf::oracle::cohomology_oracle;
use glsurf::picard::{build_surface, DivClass, PointConfiguration, SurfaceKind, SurfaceModel};
use glsurf::presented::{
    builtin_omega, builtin_xi, ext_line_presented, ext_presented_line, syzygy_liftability,
};
use glsurf::quiver::{quiver, ArrowNames, StatedRelation};
use glsurf::rat::{q, qi, Q};
use glsurf::skewcovers::{
    polygon_cover, polygon_downstairs, polygon_upstairs_bundle, swap_blown_downstairs,
    swap_cover, swap_cover_blown, swap_downstairs,
};
use glsurf::tilting::{
    expected_rank, Checker, HereditaryVerdict, PartialVerdict, Summand, TiltingCandidate,
};
use glsurf::wps::{LClass, WeightedSurface};
use num::Zero;
use rand::{Rng, SeedableRng};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

fn load_surface(rel: &str) -> WeightedSurface {
    let text = std::fs::read_to_string(data(rel)).unwrap();
    SurfaceConfig::parse(&text).unwrap().build().unwrap()
}

fn blowup(config: PointConfiguration) -> SurfaceModel {
    build_surface(SurfaceKind::BlowupP2(config)).unwrap()
}

#[test]
fn acceptance_01_oracle_equivalence() {
    let start = Instant::now();
    let configs = [
        PointConfiguration::general(6),
        PointConfiguration::with_collinear(3, &[&[1, 2, 3]]),
    ];
    for (ci, config) in configs.iter().enumerate() {
        let s = blowup(config.clone());
        let mut rng = rand::rngs::StdRng::seed_from_u64(1000 + ci as u64);
        let classes: Vec<DivClass> = (0..200)
            .map(|_| {
                let mut v = vec![rng.gen_range(-6..=6i64)];
                v.extend((0..config.count).map(|_| rng.gen_range(-3..=3i64)));
                DivClass(v)
            })
            .collect();
        let seed = 4242 + ci as u64;
        let results = map_items(Workers::Par(0), classes, |d| {
            let engine = cohomology(&s, &d).unwrap();
            let oracle = cohomology_oracle(&s, &d, seed).unwrap();
            (d, engine, oracle)
        });
        for (d, engine, oracle) in results {
            assert_eq!(engine, oracle, "disagreement at {d:?} on config {ci}");
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "oracle agreement took {elapsed:?}"
    );
    println!("acceptance 1 (oracle equivalence, 200 classes x 2 configs, {elapsed:?}): PASS");
}

#[test]
fn acceptance_02_cohomology_lemmas() {
    let start = Instant::now();
    let s = blowup(PointConfiguration::general(6));
    let r = 6usize;
    let mut cases: Vec<DivClass> = Vec::new();
    // E_{1..s} - E_{s+1}
    for t in 1..r {
        let mut v = vec![0i64; 1 + r];
        for i in 1..=t {
            v[i] = 1;
        }
        v[t + 1] = -1;
        cases.push(DivClass(v));
    }
    // H - E_{1..s}, s <= 3 and 2H - E_{1..s}, s <= 6
    for (h, smax) in [(1i64, 3usize), (2, 6)] {
        for t in 0..=smax {
            let mut v = vec![h];
            v.extend((1..=r).map(|i| if i <= t { -1 } else { 0 }));
            cases.push(DivClass(v));
        }
    }
    // E_{1..s} - tH, t <= 2
    for t in -2..=2i64 {
        for sct in 0..=r {
            let mut v = vec![-t];
            v.extend((1..=r).map(|i| if i <= sct { 1 } else { 0 }));
            cases.push(DivClass(v));
        }
    }
    for d in &cases {
        let v = cohomology(&s, d).unwrap();
        assert_eq!((v.h1, v.h2), (0, 0), "plane-blowup lemma fails at {d:?}");
    }
    // the one-point blowup closed cases: aH + bE
    let f1 = blowup(PointConfiguration::general(1));
    let mut checked = 0;
    for a in -6..=6i64 {
        for b in -6..=6i64 {
            let covered =
                (a + b > -1 && b <= 1) || (a + b == -1) || (a == -2 && b == 0);
            if !covered {
                continue;
            }
            let v = cohomology(&f1, &DivClass(vec![a, b])).unwrap();
            assert_eq!((v.h1, v.h2), (0, 0), "one-point lemma fails at ({a},{b})");
            checked += 1;
        }
    }
    assert!(checked > 40);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "lemma suite took {elapsed:?}");
    println!(
        "acceptance 2 (cohomology lemmas, {} + {} cases, {elapsed:?}): PASS",
        cases.len(),
        checked
    );
}

#[test]
fn acceptance_03_paper_bundles_pass() {
    let start = Instant::now();
    let jobs: Vec<(&str, &str, &str)> = vec![
        ("surfaces/p1xp1.toml", "bundles/p1xp1-a.toml", "scripts/p1xp1-a.toml"),
        ("surfaces/p1xp1.toml", "bundles/p1xp1-b.toml", "scripts/p1xp1-b.toml"),
        ("surfaces/f2.toml", "bundles/f2-ruled.toml", "scripts/f2-ruled.toml"),
        ("surfaces/blowup-1.toml", "bundles/tdp-r1.toml", "scripts/tdp-r1.toml"),
        ("surfaces/blowup-2.toml", "bundles/tdp-r2.toml", "scripts/tdp-r2.toml"),
        ("surfaces/blowup-3.toml", "bundles/tdp-r3.toml", "scripts/tdp-r3.toml"),
        ("surfaces/blowup-4.toml", "bundles/tdp-r4.toml", "scripts/tdp-r4.toml"),
        ("surfaces/blowup-5.toml", "bundles/tdp-r5.toml", "scripts/tdp-r5.toml"),
        ("surfaces/blowup-6.toml", "bundles/tdp-r6.toml", "scripts/tdp-r6.toml"),
        (
            "surfaces/collinear3.toml",
            "bundles/collinear3.toml",
            "scripts/collinear3.toml",
        ),
        (
            "surfaces/p1xp1-diagonal-p2.toml",
            "bundles/p1xp1-diagonal-p2.toml",
            "scripts/p1xp1-diagonal-p2.toml",
        ),
        (
            "surfaces/p1xp1-diagonal-p3.toml",
            "bundles/p1xp1-diagonal-p3.toml",
            "scripts/p1xp1-diagonal-p3.toml",
        ),
        (
            "surfaces/f1-line-p2.toml",
            "bundles/f1-line-p2.toml",
            "scripts/f1-line-p2.toml",
        ),
        (
            "surfaces/f1-line-p3.toml",
            "bundles/f1-line-p3.toml",
            "scripts/f1-line-p3.toml",
        ),
    ];
    for (sf, bf, scf) in &jobs {
        let w = load_surface(sf);
        let bundle = BundleConfig::parse(&std::fs::read_to_string(data(bf)).unwrap())
            .unwrap()
            .resolve(&w)
            .unwrap();
        let script = ScriptConfig::parse(&std::fs::read_to_string(data(scf)).unwrap())
            .unwrap()
            .build(&w)
            .unwrap();
        let cache = CohomCache::new();
        let checker = Checker {
            surface: &w,
            ring: bundle.ring.as_ref(),
            presented: bundle.presented.clone(),
            cache: Some(&cache),
        };
        assert_eq!(
            checker.partial_tilting(&bundle.candidate).unwrap(),
            PartialVerdict::Pass,
            "{bf}: partial tilting"
        );
        let rep = checker.two_hereditary(&bundle.candidate).unwrap();
        match rep.verdict {
            HereditaryVerdict::Pass { r0, .. } => {
                assert!(r0 <= 10, "{bf}: certificate threshold r0 = {r0}")
            }
            other => panic!("{bf}: hereditary verdict {other:?}"),
        }
        let euler = checker.euler_matrix(&bundle.candidate).unwrap();
        assert!(euler.unimodular, "{bf}: |det| = {}", euler.determinant);
        assert_eq!(
            euler.expected_rank,
            Some(euler.size as u64),
            "{bf}: size vs expected rank"
        );
        let gen = check_generation_script(&w, &bundle.candidate, &bundle.presented, &script)
            .unwrap();
        assert!(gen.verified, "{bf}: generation script: {:?}", gen.missing);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "bundle suite took {elapsed:?}");
    println!(
        "acceptance 3 (paper bundles, {} candidates, {elapsed:?}): PASS",
        jobs.len()
    );
}

#[test]
fn acceptance_04_negative_controls() {
    let w = load_surface("surfaces/p2-four-lines.toml");
    let bundle = BundleConfig::parse(
        &std::fs::read_to_string(data("bundles/himo-canonical.toml")).unwrap(),
    )
    .unwrap()
    .resolve(&w)
    .unwrap();
    let cache = CohomCache::new();
    let checker = Checker {
        surface: &w,
        ring: bundle.ring.as_ref(),
        presented: BTreeMap::new(),
        cache: Some(&cache),
    };
    assert_eq!(
        checker.partial_tilting(&bundle.candidate).unwrap(),
        PartialVerdict::Pass
    );
    let rep = checker.two_hereditary(&bundle.candidate).unwrap();
    let HereditaryVerdict::Fail(wit) = rep.verdict else {
        panic!("canonical bundle must fail the hereditary check");
    };
    let src = match &bundle.candidate.summands[wit.source] {
        Summand::Line(l) => l,
        _ => unreachable!(),
    };
    let tgt = match &bundle.candidate.summands[wit.target] {
        Summand::Line(l) => l,
        _ => unreachable!(),
    };
    assert_eq!(src.pic, DivClass(vec![2]));
    assert!(src.frac.iter().all(|&l| l == 0));
    assert_eq!(tgt.pic, DivClass(vec![0]));
    assert!(tgt.frac.iter().all(|&l| l == 0));
    assert_eq!((wit.r, wit.degree, wit.dim), (1, 2, 1));

    // the Beilinson gap bundle fails partial tilting with Ext^2 = 1
    let p2 = WeightedSurface::unweighted(build_surface(SurfaceKind::ProjectivePlane).unwrap());
    let c2 = Checker::lines_only(&p2);
    let t = TiltingCandidate::lines(
        [0, 1, 3]
            .into_iter()
            .map(|d| LClass::integral(DivClass(vec![d]), 0))
            .collect(),
    );
    match c2.partial_tilting(&t).unwrap() {
        PartialVerdict::Fail(w) => assert_eq!((w.degree, w.dim), (2, 1)),
        other => panic!("expected partial failure, got {other:?}"),
    }
    println!("acceptance 4 (negative controls with exact witnesses): PASS");
}

#[test]
fn acceptance_05_t2222() {
    let start = Instant::now();
    let w = load_surface("surfaces/p2-four-lines.toml");
    let ring = builtin_cox(&w).unwrap();
    let omega = builtin_omega(&ring);
    let xi = builtin_xi(&ring);
    let ka = w.k_a();
    let two_h = LClass::integral(DivClass(vec![2]), 4);
    let zero = w.zero();

    // the 17 interval classes
    let mut interval = vec![zero.clone()];
    for i in 0..4 {
        let mut f = vec![0i64; 4];
        f[i] = 1;
        interval.push(w.normalize(DivClass(vec![0]), f.clone()));
        interval.push(w.normalize(DivClass(vec![1]), f));
    }
    interval.push(LClass::integral(DivClass(vec![1]), 4));
    for i in 0..4 {
        for j in i + 1..4 {
            let mut f = vec![0i64; 4];
            f[i] = 1;
            f[j] = 1;
            interval.push(w.normalize(DivClass(vec![0]), f));
        }
    }
    interval.push(two_h.clone());
    assert_eq!(interval.len(), 17);

    // line-line table: Ext^1 = 0 always, Ext^2 = k only at (r,D,D') = (1,2H,0)
    for d in &interval {
        for d2 in &interval {
            for r in 0..=4i64 {
                let target = w.add(d2, &w.scale(&ka, -r));
                let v = w.ext_dims(d, &target).unwrap();
                assert_eq!(v.h1, 0, "Ext1(O({d:?}), O({d2:?} - {r}K))");
                let expect2 = u64::from(r == 1 && *d == two_h && *d2 == zero);
                assert_eq!(v.h2, expect2, "Ext2(O({d:?}), O({d2:?} - {r}K))");
            }
        }
    }
    // tables against Omega and Xi, including the named unit entries
    for d in &interval {
        for r in 0..=4i64 {
            let tw = w.scale(&ka, -r);
            let om = omega.twist(&ring, &tw);
            let v = ext_line_presented(&ring, d, &om).unwrap();
            assert_eq!(v.h2, 0);
            assert_eq!(v.h1, u64::from(r == 0 && *d == two_h), "Ext1(D, Omega(-rK))");
            let v = ext_presented_line(&ring, &omega, &w.add(d, &tw)).unwrap();
            assert_eq!(v.h2, 0);
            assert_eq!(v.h1, u64::from(r == 1 && *d == zero), "Ext1(Omega, D-rK)");
            let xi_t = xi.twist(&ring, &tw);
            let v = ext_line_presented(&ring, d, &xi_t).unwrap();
            assert_eq!(v.h2, 0);
            assert_eq!(v.h1, u64::from(r == 1 && *d == two_h), "Ext1(D, Xi(-rK))");
            let v = ext_presented_line(&ring, &xi, &w.add(d, &tw)).unwrap();
            assert_eq!(v.h2, 0);
            assert_eq!(v.h1, u64::from(r == 0 && *d == zero), "Ext1(Xi, D-rK)");
        }
    }

    // the full candidate from the shipped files
    let bundle = BundleConfig::parse(&std::fs::read_to_string(data("bundles/t2222.toml")).unwrap())
        .unwrap()
        .resolve(&w)
        .unwrap();
    assert_eq!(bundle.candidate.summands.len(), 17);
    assert_eq!(expected_rank(&w), Some(17));
    let cache = CohomCache::new();
    let checker = Checker {
        surface: &w,
        ring: bundle.ring.as_ref(),
        presented: bundle.presented.clone(),
        cache: Some(&cache),
    };
    assert_eq!(
        checker.partial_tilting(&bundle.candidate).unwrap(),
        PartialVerdict::Pass
    );
    let rep = checker.two_hereditary(&bundle.candidate).unwrap();
    let window = match rep.verdict {
        HereditaryVerdict::Pass { window, .. } => window,
        other => panic!("t2222 hereditary verdict {other:?}"),
    };
    // syzygy liftability across the certified window
    for r in 0..window {
        let om_t = omega.twist(&ring, &w.scale(&ka, -r));
        let syz = syzygy_liftability(&ring, &xi, &om_t);
        assert_eq!(syz.coker, 0, "lifting fails at twist {r}");
    }
    assert!(rep.syzygy.iter().all(|(_, s)| s.coker == 0));
    let euler = checker.euler_matrix(&bundle.candidate).unwrap();
    assert_eq!(euler.size, 17);
    assert!(euler.unimodular);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "t2222 took {elapsed:?}");
    println!("acceptance 5 (rank-17 weighted-plane candidate, {elapsed:?}): PASS");
}

#[test]
fn acceptance_06_quivers() {
    // diagonal-weighted P1 x P1, p = 2
    let w = load_surface("surfaces/p1xp1-diagonal-p2.toml");
    let ring = builtin_cox(&w).unwrap();
    let cls = |pic: Vec<i64>, l: i64| w.normalize(DivClass(pic), vec![l]);
    let t = TiltingCandidate::lines(vec![
        cls(vec![0, 0], 0),
        cls(vec![0, 0], 1),
        cls(vec![1, 1], 0),
        cls(vec![0, 1], 0),
        cls(vec![0, 1], 1),
        cls(vec![1, 2], 0),
    ]);
    let qv = quiver(&ring, &t, None, &ArrowNames::new()).unwrap();
    assert_eq!(qv.vertices.len(), 6);
    let mut adjacency: Vec<(usize, usize, String)> = qv
        .arrows
        .iter()
        .map(|a| (a.from, a.to, a.name.clone()))
        .collect();
    adjacency.sort();
    let mut expected: Vec<(usize, usize, String)> = [
        (0, 1, "t"),
        (1, 2, "t"),
        (3, 4, "t"),
        (4, 5, "t"),
        (0, 3, "x"),
        (0, 3, "y"),
        (1, 4, "x"),
        (1, 4, "y"),
        (2, 5, "x"),
        (2, 5, "y"),
        (3, 2, "u"),
        (3, 2, "v"),
    ]
    .into_iter()
    .map(|(f, t, n)| (f, t, n.to_string()))
    .collect();
    expected.sort();
    assert_eq!(adjacency, expected, "labeled adjacency");
    let find = |f: usize, t2: usize, n: &str| {
        qv.arrows
            .iter()
            .position(|a| a.from == f && a.to == t2 && a.name == n)
            .unwrap()
    };
    let stated = [
        // xt = tx, yt = ty
        StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 3, "x"), find(3, 4, "t")]),
                (qi(-1), vec![find(0, 1, "t"), find(1, 4, "x")]),
            ],
        },
        StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 3, "y"), find(3, 4, "t")]),
                (qi(-1), vec![find(0, 1, "t"), find(1, 4, "y")]),
            ],
        },
        // t^2 = F(u,v,x,y) = uy - vx
        StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 1, "t"), find(1, 2, "t")]),
                (qi(-1), vec![find(0, 3, "y"), find(3, 2, "u")]),
                (qi(1), vec![find(0, 3, "x"), find(3, 2, "v")]),
            ],
        },
        // xuy = yux
        StatedRelation {
            terms: vec![
                (
                    qi(1),
                    vec![find(0, 3, "x"), find(3, 2, "u"), find(2, 5, "y")],
                ),
                (
                    qi(-1),
                    vec![find(0, 3, "y"), find(3, 2, "u"), find(2, 5, "x")],
                ),
            ],
        },
        // xvy = yvx
        StatedRelation {
            terms: vec![
                (
                    qi(1),
                    vec![find(0, 3, "x"), find(3, 2, "v"), find(2, 5, "y")],
                ),
                (
                    qi(-1),
                    vec![find(0, 3, "y"), find(3, 2, "v"), find(2, 5, "x")],
                ),
            ],
        },
    ];
    for (k, rel) in stated.iter().enumerate() {
        assert!(
            glsurf::quiver::reduces_to_zero(&ring, &qv, rel).unwrap(),
            "stated relation {k} does not reduce to zero"
        );
    }
    assert!(qv
        .relations
        .iter()
        .any(|r| r.text.starts_with("t^2 =")));

    // one-point blowup weighted on a line, p = 2, with paper arrow names
    let w = load_surface("surfaces/f1-line-p2.toml");
    let ring = builtin_cox(&w).unwrap();
    let bundle = BundleConfig::parse(
        &std::fs::read_to_string(data("bundles/f1-line-p2-quiver.toml")).unwrap(),
    )
    .unwrap()
    .resolve(&w)
    .unwrap();
    let qv = quiver(&ring, &bundle.candidate, None, &bundle.arrow_names).unwrap();
    assert_eq!(qv.vertices.len(), 6);
    assert_eq!(qv.arrows.len(), 11);
    let find = |f: usize, t2: usize, n: &str| {
        qv.arrows
            .iter()
            .position(|a| a.from == f && a.to == t2 && a.name == n)
            .unwrap_or_else(|| panic!("missing arrow {f}->{t2} {n}"))
    };
    // vertices: 0 = E, 1 = O, 2 = H/2, 3 = H, 4 = 3H/2, 5 = 2H (file order)
    let rel = StatedRelation {
        terms: vec![
            (qi(1), vec![find(1, 0, "u"), find(0, 3, "y'"), find(3, 4, "x")]),
            (qi(-1), vec![find(1, 2, "x"), find(2, 4, "y")]),
        ],
    };
    assert!(glsurf::quiver::reduces_to_zero(&ring, &qv, &rel).unwrap());
    let rel = StatedRelation {
        terms: vec![
            (qi(1), vec![find(0, 3, "y'"), find(3, 5, "z")]),
            (qi(-1), vec![find(0, 3, "z'"), find(3, 5, "y")]),
        ],
    };
    assert!(glsurf::quiver::reduces_to_zero(&ring, &qv, &rel).unwrap());
    assert!(
        qv.relations
            .iter()
            .any(|r| r.text.contains("uy'x = xy") || r.text.contains("xy = uy'x")),
        "{:?}",
        qv.relations.iter().map(|r| &r.text).collect::<Vec<_>>()
    );
    println!("acceptance 6 (quivers with labeled adjacency and relations): PASS");
}

#[test]
fn acceptance_07_skew_group() {
    // ruling swap: 5 basic summands, ranks (1,1,2,1,1), unimodular 5x5
    let cover = swap_cover().unwrap();
    let (star, _) = cover.star_condition().unwrap();
    assert!(star);
    let upstairs = TiltingCandidate::lines(
        [[0, 0], [1, 0], [0, 1], [1, 1]]
            .into_iter()
            .map(|v| LClass::integral(DivClass(v.to_vec()), 0))
            .collect(),
    );
    let ind = cover.induced_tilting(&upstairs).unwrap();
    assert_eq!(ind.summands.len(), 5);
    let mut ranks: Vec<u64> = ind.summands.iter().map(|s| s.rank).collect();
    ranks.sort();
    assert_eq!(ranks, vec![1, 1, 1, 1, 2]);
    assert!(ind.unimodular);
    assert_eq!(expected_rank(&swap_downstairs().unwrap()), Some(5));

    // blown-up swap: 6 basic summands
    let cover = swap_cover_blown().unwrap();
    let upstairs = TiltingCandidate::lines(
        [
            vec![0, 0, 0, 0],
            vec![1, -1, 0, 0],
            vec![1, 0, -1, 0],
            vec![0, 0, 0, 1],
            vec![1, -1, -1, 0],
            vec![2, -1, -1, 0],
        ]
        .into_iter()
        .map(|v| LClass::integral(DivClass(v), 0))
        .collect(),
    );
    let ind = cover.induced_tilting(&upstairs).unwrap();
    assert_eq!(ind.summands.len(), 6);
    assert!(ind.unimodular);
    assert_eq!(expected_rank(&swap_blown_downstairs().unwrap()), Some(6));

    // polygon covers: p^2 (i+3) line bundles
    for p in [2u32, 3] {
        for i in 0..=3usize {
            let cover = polygon_cover(p, i).unwrap();
            let (star, w) = cover.star_condition().unwrap();
            assert!(star, "p={p} i={i}: {w:?}");
            let ind = cover.induced_tilting(&polygon_upstairs_bundle(i)).unwrap();
            assert_eq!(ind.summands.len(), (p * p) as usize * (i + 3));
            assert!(ind.summands.iter().all(|s| s.rank == 1));
            assert_eq!(
                expected_rank(&polygon_downstairs(p, i).unwrap()),
                Some((p as u64).pow(2) * (i as u64 + 3))
            );
        }
    }

    // isotypic split of the bidegree-(1,1) sections under the swap
    let cover = swap_cover().unwrap();
    let dims = cover.isotypic_dims(&DivClass(vec![1, 1]));
    assert_eq!(dims.get(&vec![0u32]).copied(), Some(3));
    assert_eq!(dims.get(&vec![1u32]).copied(), Some(1));
    println!("acceptance 7 (skew-group induction and isotypic splits): PASS");
}

#[test]
fn acceptance_08_nine_points() {
    let config = PointConfiguration::general(9);
    let params: Vec<Q> = (1..=8).map(|i| q(1, i)).chain([qi(2)]).collect();
    assert_eq!(
        almost_general_9(CubicGroupModel::Gm, &params, &config).unwrap(),
        NineVerdict::AlmostGeneral
    );
    let neg: Vec<Q> = vec![
        qi(2),
        q(1, 2),
        qi(3),
        q(1, 3),
        qi(4),
        q(1, 4),
        qi(5),
        q(1, 5),
        qi(-1),
    ];
    let class = nine_point_class(CubicGroupModel::Gm, &neg).unwrap();
    assert!(is_torsion(CubicGroupModel::Gm, &class));
    assert_eq!(
        almost_general_9(CubicGroupModel::Gm, &neg, &config).unwrap(),
        NineVerdict::NotAlmostGeneral
    );
    let ga: Vec<Q> = (-4..=4).map(qi).collect();
    assert_eq!(
        almost_general_9(CubicGroupModel::Ga, &ga, &config).unwrap(),
        NineVerdict::NotAlmostGeneral
    );

    // collinearity determinant property on 200 seeded triples
    let mut rng = rand::rngs::StdRng::seed_from_u64(888);
    let mut tested = 0;
    while tested < 200 {
        let a = q(rng.gen_range(2..80), rng.gen_range(1..40));
        let b = q(rng.gen_range(2..80), rng.gen_range(1..40));
        let c = Q::new(1.into(), 1.into()) / (&a * &b);
        if a == b || b == c || a == c || [&a, &b, &c].iter().any(|x| one_or_zero(x)) {
            continue;
        }
        let pa = nodal_cubic_point(&a).unwrap();
        let pb = nodal_cubic_point(&b).unwrap();
        let pc = nodal_cubic_point(&c).unwrap();
        assert!(collinear_det(&pa, &pb, &pc).is_zero(), "triple ({a},{b},{c})");
        let off = &c * qi(3);
        if off != a && off != b && !one_or_zero(&off) {
            let poff = nodal_cubic_point(&off).unwrap();
            assert!(!collinear_det(&pa, &pb, &poff).is_zero());
        }
        tested += 1;
    }
    println!("acceptance 8 (nine-point verdicts and 200 collinearity checks): PASS");
}

fn one_or_zero(x: &Q) -> bool {
    use num::One;
    x.is_zero() || x.is_one() || (-x.clone()).is_one()
}

#[test]
fn acceptance_09_property_suites() {
    let four_lines = load_surface("surfaces/p2-four-lines.toml");
    let diag2 = load_surface("surfaces/p1xp1-diagonal-p2.toml");
    let diag3 = load_surface("surfaces/p1xp1-diagonal-p3.toml");
    let f1w = load_surface("surfaces/f1-line-p2.toml");
    let conic = load_surface("surfaces/p2-conic.toml");
    let f2 = load_surface("surfaces/f2.toml");
    let dp6 = load_surface("surfaces/blowup-6.toml");
    let models = [&four_lines, &diag2, &diag3, &f1w, &conic, &f2, &dp6];
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for w in models {
        let ka = w.k_a();
        let cache = CohomCache::new();
        for _ in 0..200 {
            let rnd = |rng: &mut rand::rngs::StdRng| {
                let pic = DivClass(
                    (0..w.base.rank())
                        .map(|_| rng.gen_range(-3..=3))
                        .collect(),
                );
                let frac = (0..w.r()).map(|_| rng.gen_range(-4..=4)).collect();
                w.normalize(pic, frac)
            };
            let a = rnd(&mut rng);
            let b = rnd(&mut rng);
            let g = rnd(&mut rng);
            // normalize idempotence
            let again = w.normalize(a.pic.clone(), a.frac.iter().map(|&x| x as i64).collect());
            assert_eq!(a, again);
            // chi consistency and duality through the engine
            let v = w.ext_dims_cached(&a, &b, Some(&cache)).unwrap();
            assert_eq!(v.chi, v.h0 as i64 - v.h1 as i64 + v.h2 as i64);
            let dual = w
                .ext_dims_cached(&b, &w.add(&a, &ka), Some(&cache))
                .unwrap();
            assert_eq!((v.h0, v.h1, v.h2), (dual.h2, dual.h1, dual.h0), "Serre duality");
            // twist invariance
            let tw = w
                .ext_dims_cached(&w.add(&a, &g), &w.add(&b, &g), Some(&cache))
                .unwrap();
            assert_eq!(v, tw, "twist invariance");
            // the oracle agrees with Riemann-Roch on chi
            let hs = w.hom_sheaf(&a, &b);
            assert_eq!(v.chi, glsurf::cohom::euler_char(&w.base, &hs));
        }
        // cache transparency spot check
        let a = LClass::integral(DivClass(vec![0; w.base.rank()]), w.r());
        let plain = w.ext_dims(&a, &a).unwrap();
        let cached = w.ext_dims_cached(&a, &a, Some(&cache)).unwrap();
        assert_eq!(plain, cached);
        let _ = cohomology_cached(&w.base, &w.base.canonical, Some(&cache)).unwrap();
    }
    println!("acceptance 9 (property suites, 200 cases x 7 models): PASS");
}
