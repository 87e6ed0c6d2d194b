//! Acceptance suite: one test per criterion, each printing a pass line
//! (the harness prints the fail line). Run with `--nocapture` to see the
//! pass lines and timings:
//!
//!     cargo test --test acceptance -- --nocapture

use std::time::{Duration, Instant};

use wordmaps::aut;
use wordmaps::extraspecial;
use wordmaps::group::{build_group, ElementSet, Group, GroupSpec};
use wordmaps::preset;
use wordmaps::report::strip_timing;
use wordmaps::words::{self, CanonicalWord, DEFAULT_EVAL_BUDGET, DEFAULT_SEED};

const BUDGET: u64 = DEFAULT_EVAL_BUDGET;
const NODES: u64 = aut::DEFAULT_NODE_BUDGET;

fn pass(criterion: &str, elapsed: Duration) {
    println!("acceptance {criterion}: PASS in {elapsed:.2?}");
}

/// Rank of the central element with the given s-digits.
fn central_rank(group: &Group, s: &[u32]) -> u64 {
    let zeros = vec![0u32; group.spec().dim_v()];
    group.rank(&group.element(&zeros, s).expect("central element digits"))
}

/// The five headline canonical words of a special group: 1, x, x^p,
/// [x,y], x^p[x,y]; m = e encodes the trivial power part.
fn headline_words(group: &Group) -> [CanonicalWord; 5] {
    let e = group.exponents().e;
    let p = group.spec().p() as u64;
    [
        CanonicalWord { m: e, n: 0 },
        CanonicalWord { m: 1, n: 0 },
        CanonicalWord { m: p, n: 0 },
        CanonicalWord { m: e, n: 1 },
        CanonicalWord { m: p, n: 1 },
    ]
}

fn images_of(group: &Group, words_list: &[CanonicalWord]) -> Vec<ElementSet> {
    words_list
        .iter()
        .map(|w| words::image(&w.to_word(), group, BUDGET).expect("image in budget"))
        .collect()
}

fn assert_pairwise_distinct(images: &[ElementSet], context: &str) {
    for (i, a) in images.iter().enumerate() {
        for (j, b) in images.iter().enumerate() {
            if i < j {
                assert_ne!(a, b, "{context}: images {i} and {j} coincide");
            }
        }
    }
}

fn full_set(group: &Group) -> ElementSet {
    let mut s = ElementSet::empty(group.order());
    for r in 0..group.order() {
        s.insert(r);
    }
    s
}

#[test]
fn c01_example_3_8_reproduction() {
    let t0 = Instant::now();
    let g = preset::resolve("example-3-8").unwrap();
    assert_eq!(g.order(), 64);

    let five = headline_words(&g);
    let images = images_of(&g, &five);
    assert_pairwise_distinct(&images, "example-3-8");

    // The square word misses (0,0,1); adding the commutator reaches it but
    // loses (1,1,1); the commutator word fills the center exactly.
    let x2 = &images[2];
    let x2c = &images[4];
    let comm = &images[3];
    assert!(!x2.contains(central_rank(&g, &[0, 0, 1])));
    assert!(x2c.contains(central_rank(&g, &[0, 0, 1])));
    assert!(!x2c.contains(central_rank(&g, &[1, 1, 1])));
    assert_eq!(comm, g.center());
    assert_eq!(comm.len(), 8);

    let catalog = words::word_images_catalog(&g, BUDGET).unwrap();
    assert_eq!(words::distinct_images(&catalog), 5);

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass("c01 (example-3-8 reproduction)", elapsed);
}

fn rank8_checks(g: &Group) {
    let five = headline_words(g);
    let images = images_of(g, &five);
    assert_pairwise_distinct(&images, "rank-8 group");

    let comm = &images[3];
    let xp = &images[2];
    let xpc = &images[4];
    assert!(!comm.contains(central_rank(g, &[0, 0, 1, 1])));
    assert!(comm.contains(central_rank(g, &[0, 0, 1, 0])));
    assert!(!xp.contains(central_rank(g, &[0, 0, 1, 0])));
    // The power-commutator word is surjective onto the center.
    assert_eq!(xpc, g.center());
}

#[test]
fn c02_rank8_groups_both_primes() {
    let t0 = Instant::now();
    let g2 = preset::resolve("example-3-9-p2").unwrap();
    assert_eq!(g2.order(), 256);
    rank8_checks(&g2);
    let catalog = words::word_images_catalog(&g2, BUDGET).unwrap();
    assert_eq!(words::distinct_images(&catalog), 5);
    let p2_elapsed = t0.elapsed();
    assert!(p2_elapsed < Duration::from_secs(1), "p = 2 took {p2_elapsed:?}");

    let t1 = Instant::now();
    let g3 = preset::resolve("example-3-9-p3").unwrap();
    assert_eq!(g3.order(), 6561);
    rank8_checks(&g3);
    let p3_elapsed = t1.elapsed();
    assert!(p3_elapsed < Duration::from_secs(300), "p = 3 took {p3_elapsed:?}");

    pass("c02 (rank-8 groups, p = 2 and p = 3)", t0.elapsed());
}

#[test]
fn c03_extraspecial_catalogs_have_three_images() {
    let t0 = Instant::now();
    for name in preset::fleet_members("extraspecial-small").unwrap() {
        let g = preset::resolve(name).unwrap();
        let catalog = words::word_images_catalog(&g, BUDGET).unwrap();
        let got: std::collections::BTreeSet<String> =
            catalog.iter().map(|e| e.image.to_hex()).collect();
        let mut one = ElementSet::empty(g.order());
        one.insert(g.rank(&g.identity()));
        let expected: std::collections::BTreeSet<String> =
            [one.to_hex(), g.center().to_hex(), full_set(&g).to_hex()]
                .into_iter()
                .collect();
        assert_eq!(got, expected, "{name}");
    }
    pass("c03 (three word images on extraspecial presets)", t0.elapsed());
}

#[test]
fn c04_impostor_census_values() {
    let t0 = Instant::now();
    let expected = [
        ("q2", 1u64),
        ("d8", 5),
        ("es32-d", 5),
        ("es32-q", 5),
        ("es27-expp", 1),
        ("es27-expp2", 13),
        ("es243-expp", 1),
        ("es243-expp2", 29),
    ];
    for (name, impostors) in expected {
        let kind = preset::extraspecial_kind(name).unwrap();
        let census = extraspecial::census(kind);
        assert_eq!(census.impostors, impostors, "{name}");
        // Cross-check against materialized candidates.
        let g = kind.build().unwrap();
        let candidates = extraspecial::enumerate_candidates(kind, &g).unwrap();
        assert_eq!(candidates.len() as u64, census.candidates, "{name}");
        let realized = candidates.iter().filter(|c| c.realized.is_some()).count();
        assert_eq!(realized, 3, "{name}");
        assert_eq!(
            candidates.len() - realized,
            impostors as usize,
            "{name}"
        );
    }
    pass("c04 (impostor census values)", t0.elapsed());
}

#[test]
fn c05_oracle_matches_classification() {
    let t0 = Instant::now();
    let expected = [
        ("q2", 3usize),
        ("d8", 4),
        ("es32-d", 4),
        ("es32-q", 4),
        ("es27-expp", 3),
        ("es27-expp2", 5),
    ];
    for (name, count) in expected {
        let kind = preset::extraspecial_kind(name).unwrap();
        let g = kind.build().unwrap();
        let oracle = aut::automorphism_orbits(&g, NODES).unwrap();
        assert_eq!(oracle.block_count(), count, "{name}");
        // Block-level equality against the classification.
        let classified = extraspecial::classify_orbits(kind, &g).unwrap();
        let class_sets: std::collections::BTreeSet<String> =
            classified.iter().map(|o| o.set.to_hex()).collect();
        let oracle_sets: std::collections::BTreeSet<String> =
            oracle.blocks().iter().map(|b| b.to_hex()).collect();
        assert_eq!(class_sets, oracle_sets, "{name}");
    }

    // Order 243 stays above the oracle cap; its classification-path
    // checks (orbit structure, sizes, partition) are mandatory.
    for (name, count) in [("es243-expp", 3u64), ("es243-expp2", 6)] {
        let kind = preset::extraspecial_kind(name).unwrap();
        let g = kind.build().unwrap();
        assert!(matches!(
            aut::automorphism_orbits(&g, NODES),
            Err(wordmaps::Error::BudgetExceeded { .. })
        ));
        let classified = extraspecial::classify_orbits(kind, &g).unwrap();
        assert_eq!(classified.len() as u64, count, "{name}");
    }

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    pass("c05 (oracle orbit cross-check)", elapsed);
}

#[test]
fn c06_impostor_existence_decisions() {
    let t0 = Instant::now();
    for name in [
        "z2", "z3", "z5", "z2x2", "z2x2x2", "z3x3", "z3x3x3", "z5x5", "z5x5x5",
    ] {
        let g = preset::resolve(name).unwrap();
        assert!(
            !aut::has_impostor(&g, NODES, BUDGET).unwrap(),
            "{name} should have no impostor"
        );
    }
    for name in ["z4", "z8", "z2x4", "z9"] {
        let g = preset::resolve(name).unwrap();
        assert!(
            aut::has_impostor(&g, NODES, BUDGET).unwrap(),
            "{name} should have an impostor"
        );
    }
    for name in preset::fleet_members("oracle-small").unwrap() {
        let g = preset::resolve(name).unwrap();
        assert!(
            aut::has_impostor(&g, NODES, BUDGET).unwrap(),
            "{name} should have an impostor"
        );
    }
    pass("c06 (impostor existence decisions)", t0.elapsed());
}

#[test]
fn c07_normalization_soundness_and_identities() {
    let t0 = Instant::now();
    for name in preset::fleet_members("class2-small").unwrap() {
        let g = preset::resolve(name).unwrap();
        for word in words::random_words(DEFAULT_SEED, 50, 20) {
            let canon = words::canonicalize(&word, &g, BUDGET).unwrap();
            let im_w = words::image(&word, &g, BUDGET).unwrap();
            let im_c = words::image(&canon.to_word(), &g, BUDGET).unwrap();
            assert_eq!(im_w, im_c, "{name}: {}", word.print());
        }
    }

    // The class-2 identity suites, through the CLI runner.
    let cli = clap::Parser::try_parse_from([
        "wordmaps",
        "verify",
        "identities",
        "--fleet",
        "class2-small",
    ])
    .expect("args parse");
    let (report, exit) = wordmaps::cli::execute(&cli).unwrap();
    assert_eq!(exit, 0, "identity suites failed: {}", report.to_json());
    assert_eq!(report.results["failed"], 0);

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    pass("c07 (normalization soundness + identities)", elapsed);
}

#[test]
fn c08_commutator_width_certificates() {
    let t0 = Instant::now();
    for name in preset::fleet_members("class2-small").unwrap() {
        let g = preset::resolve(name).unwrap();
        // commutator_width certifies internally that the final layer is
        // exactly the derived subgroup.
        let width = words::commutator_width(&g).unwrap();
        assert!(width >= 1, "{name}");
        if preset::extraspecial_kind(name).is_ok() {
            assert_eq!(width, 1, "{name}");
        }
    }
    for name in ["z4", "z2x4", "z3x3"] {
        let g = preset::resolve(name).unwrap();
        assert_eq!(words::commutator_width(&g).unwrap(), 0, "{name}");
    }
    pass("c08 (commutator width certificates)", t0.elapsed());
}

#[test]
fn c09_three_image_detector() {
    let t0 = Instant::now();
    for name in preset::fleet_members("class2-small").unwrap() {
        let g = preset::resolve(name).unwrap();
        let catalog = words::word_images_catalog(&g, BUDGET).unwrap();
        let detected = words::detect_special_from_images(&g, BUDGET).unwrap();
        if words::distinct_images(&catalog) == 3 {
            assert!(detected, "{name}");
            assert!(g.is_special_p_group(), "{name}");
        }
        if *name == "example-3-8" {
            assert_eq!(words::distinct_images(&catalog), 5);
            assert!(!detected, "{name}");
        }
    }

    // A special-but-not-extraspecial direct-sum presentation also passes
    // the forward check: two symplectic planes mapping onto separate
    // center coordinates.
    let p = 3u32;
    let neg = (p - 1) as u64;
    let mut mats = vec![vec![vec![0u64; 4]; 4]; 2];
    mats[0][0][1] = 1;
    mats[0][1][0] = neg;
    mats[1][2][3] = 1;
    mats[1][3][2] = neg;
    let spec = GroupSpec::odd_special(
        p,
        wordmaps::fp::BilinearForm::new(mats, 4, p).unwrap(),
        wordmaps::fp::LinearMap::zero(4, 2, p).unwrap(),
    )
    .unwrap();
    let g = build_group(spec).unwrap();
    assert_eq!(g.order(), 729);
    assert_eq!(g.center().len(), 9);
    assert!(words::detect_special_from_images(&g, BUDGET).unwrap());
    assert!(g.is_special_p_group());

    pass("c09 (three-image detector)", t0.elapsed());
}

// ---------------------------------------------------------------------------
// Determinism across runs and worker counts, through the real binary.
// ---------------------------------------------------------------------------

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_wordmaps"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8 report"),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn c10_reports_are_deterministic() {
    let t0 = Instant::now();
    let commands: &[&[&str]] = &[
        &["group", "info", "--preset", "example-3-8"],
        &["words", "catalog", "--preset", "example-3-8"],
        &["words", "catalog", "--preset", "example-3-9-p2"],
        &["words", "image", "--word", "[x,y]", "--preset", "es27-expp2"],
        &["words", "canon", "--word", "x^6[x,y]", "--preset", "es32-d"],
        &["verify", "thm-4-10"],
        &["verify", "thm-4-11"],
        &["verify", "thm-5-2"],
        &["verify", "thm-3-2", "--fleet", "abelian-small"],
        &["verify", "identities", "--fleet", "class2-small", "--seed", "12345"],
        &["verify", "exhaustive", "--fleet", "class2-small", "--seed", "12345"],
    ];
    for args in commands {
        let mut outputs = Vec::new();
        for extra in [&["--jobs", "1"][..], &["--jobs", "1"], &["--jobs", "8"]] {
            let mut full: Vec<&str> = args.to_vec();
            full.extend_from_slice(extra);
            let (stdout, code) = run_cli(&full);
            assert_eq!(code, 0, "{args:?} exited {code}: {stdout}");
            outputs.push(strip_timing(&stdout).expect("valid report json"));
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}: rerun differs");
        assert_eq!(outputs[0], outputs[2], "{args:?}: worker count changes output");
    }
    pass("c10 (byte-identical reports)", t0.elapsed());
}
