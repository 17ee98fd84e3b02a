//! The acceptance suite: one test per criterion, each printing a
//! pass/fail line. Criteria run against the library API and, where the
//! contract is about the executable, against the binary itself.

use perpcalc::duality::{
    all_pair_families, check_galois_laws, check_sum_intersect_laws, dual_module,
    enumerate_dual_submodules, evaluation_map, zero_double_perp,
};
use perpcalc::gallery::{run_example, ExampleId, GalleryParams};
use perpcalc::module::{enumerate_submodules, parse_module_spec, Module, Side, Submodule};
use perpcalc::oracle;
use perpcalc::pf::{find_witness, has_perp_equivalence, is_pf, verify_rank_reduction, verify_theorem};
use perpcalc::ring::{build_ring, parse_ring_spec, FiniteRing, RingElement};
use perpcalc::Limits;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

const PF_POSITIVE: &[&str] = &[
    "zmod 2",
    "zmod 4",
    "zmod 6",
    "zmod 8",
    "zmod 9",
    "gf 2 2 x^2+x+1",
    "quot gf 2 1 [x]/(x^2)",
];

const PF_NEGATIVE: &[&str] = &["quot gf2 [x,y]/(x^2,xy,y^2)", "tri 2 over gf 2 1"];

const LOCAL_NON_PF: &str = "quot gf2 [x,y]/(x^2,xy,y^2)";

fn lim() -> Limits {
    Limits::default()
}

fn ring(spec: &str) -> Arc<FiniteRing> {
    build_ring(&parse_ring_spec(spec).unwrap(), &lim()).unwrap()
}

fn corpus() -> Vec<&'static str> {
    PF_POSITIVE.iter().chain(PF_NEGATIVE).copied().collect()
}

fn pass_line(n: u32, name: &str, elapsed: Duration) {
    println!(
        "acceptance criterion {n} ({name}): PASS in {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_1_pf_positives() {
    let started = Instant::now();
    for spec in PF_POSITIVE {
        let ring_started = Instant::now();
        let r = ring(spec);
        let report = is_pf(&r, &lim()).unwrap();
        assert!(report.is_pf, "{spec} must be PF");
        let theorem = verify_theorem(&r, &lim()).unwrap();
        assert!(theorem.consistent, "{spec}: inconsistent theorem verdicts");
        assert!(theorem.all_true(), "{spec}: expected consistent-true");
        for side in [Side::Right, Side::Left] {
            let f2 = Module::free(&r, 2, side, &lim()).unwrap();
            let pe = has_perp_equivalence(&f2, &lim()).unwrap();
            assert!(pe.holds(), "{spec}: rank-2 free on {side} lacks equivalence");
        }
        let elapsed = ring_started.elapsed();
        assert!(
            elapsed < Duration::from_secs(60),
            "{spec} took {elapsed:?}, over the 60 s budget"
        );
    }
    pass_line(1, "PF positives", started.elapsed());
}

fn ann_left(r: &FiniteRing, set: &[RingElement]) -> Vec<RingElement> {
    r.elements()
        .filter(|&a| set.iter().all(|&s| r.mul(a, s) == r.zero()))
        .collect()
}

fn ann_right(r: &FiniteRing, set: &[RingElement]) -> Vec<RingElement> {
    r.elements()
        .filter(|&a| set.iter().all(|&s| r.mul(s, a) == r.zero()))
        .collect()
}

#[test]
fn criterion_2_pf_negatives() {
    let started = Instant::now();
    for spec in PF_NEGATIVE {
        let r = ring(spec);
        let report = is_pf(&r, &lim()).unwrap();
        assert!(!report.is_pf, "{spec} must not be PF");
        assert!(
            !report.failures.is_empty(),
            "{spec}: a concrete Baer or Kasch witness is required"
        );
        let theorem = verify_theorem(&r, &lim()).unwrap();
        assert!(theorem.consistent, "{spec}: inconsistent theorem verdicts");
        assert!(
            theorem.statements.iter().all(|s| !s.verdict),
            "{spec}: expected consistent-false"
        );
        assert!(
            find_witness(&r, &lim()).unwrap().is_some(),
            "{spec}: a double-perp witness must exist"
        );
    }

    // the local ring's first witness is X = (x) with double perp (x,y),
    // matched exactly against the direct annihilator brute force
    let r = ring(LOCAL_NON_PF);
    let w = find_witness(&r, &lim()).unwrap().unwrap();
    assert_eq!(w.kind, "submodule");
    assert_eq!(w.subject_gens, vec!["x"]);
    assert_eq!(w.subject_elems, vec!["0", "x"]);
    assert_eq!(w.double_perp_elems, vec!["0", "x", "y", "x+y"]);
    let x_set: Vec<RingElement> = w
        .subject_elems
        .iter()
        .map(|s| r.parse_element(s).unwrap())
        .collect();
    let brute = ann_right(&r, &ann_left(&r, &x_set));
    let brute_labels: Vec<String> = brute.iter().map(|&e| r.label(e).to_string()).collect();
    assert_eq!(brute_labels, w.double_perp_elems);
    pass_line(2, "PF negatives", started.elapsed());
}

#[test]
fn criterion_3_unconditional_galois_laws() {
    let started = Instant::now();
    for spec in corpus() {
        let r = ring(spec);
        for (rank, side) in [
            (1, Side::Right),
            (1, Side::Left),
            (2, Side::Right),
            (2, Side::Left),
        ] {
            let m = Module::free(&r, rank, side, &lim()).unwrap();
            let laws = check_galois_laws(&m, &lim()).unwrap();
            assert!(
                laws.passed(),
                "{spec} rank {rank} {side}: {:#?}",
                laws.checks
            );
            assert!(laws.total_instances() > 0);
        }
        // unconditional halves of the sum/intersection laws over all
        // pairs, on the ring itself (both sides) and the rank-2 right
        // free module
        for (rank, side) in [(1, Side::Right), (1, Side::Left), (2, Side::Right)] {
            let m = Module::free(&r, rank, side, &lim()).unwrap();
            let xf = all_pair_families(&enumerate_submodules(&m, &lim()).unwrap());
            let dual = dual_module(&m, &lim()).unwrap();
            let yf = all_pair_families(&enumerate_dual_submodules(&dual, &lim()).unwrap());
            let laws = check_sum_intersect_laws(&m, &xf, &yf, false, false, &lim()).unwrap();
            assert!(
                laws.passed(),
                "{spec} rank {rank} {side}: {:#?}",
                laws.checks
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(600),
        "full exhaustion took {elapsed:?}, over the 10 min budget"
    );
    pass_line(3, "unconditional Galois laws", elapsed);
}

#[test]
fn criterion_4_conditional_laws() {
    let started = Instant::now();
    for spec in PF_POSITIVE {
        let r = ring(spec);
        let report = is_pf(&r, &lim()).unwrap();
        assert!(report.right_self_injective && report.left_self_injective);
        for (rank, side) in [(1, Side::Right), (1, Side::Left), (2, Side::Right)] {
            let m = Module::free(&r, rank, side, &lim()).unwrap();
            let xf = all_pair_families(&enumerate_submodules(&m, &lim()).unwrap());
            let dual = dual_module(&m, &lim()).unwrap();
            let yf = all_pair_families(&enumerate_dual_submodules(&dual, &lim()).unwrap());
            let laws = check_sum_intersect_laws(&m, &xf, &yf, true, true, &lim()).unwrap();
            assert!(
                laws.passed(),
                "{spec} rank {rank} {side}: {:#?}",
                laws.checks
            );
        }
        // the double-perp equalities on both sides of the ring itself
        for side in [Side::Right, Side::Left] {
            let m = Module::free(&r, 1, side, &lim()).unwrap();
            assert!(has_perp_equivalence(&m, &lim()).unwrap().holds(), "{spec}");
        }
    }

    // strict inclusions on the non-PF local ring: once through the
    // intersection law, once through the double perp
    let r = ring(LOCAL_NON_PF);
    let m = Module::free(&r, 1, Side::Right, &lim()).unwrap();
    let x = Submodule::generated(&m, &[m.parse_element("x").unwrap()], &lim()).unwrap();
    let y = Submodule::generated(&m, &[m.parse_element("y").unwrap()], &lim()).unwrap();
    let laws =
        check_sum_intersect_laws(&m, &[vec![x.clone(), y]], &[], false, false, &lim()).unwrap();
    assert!(laws.passed());
    let strict_notes: usize = laws.checks.iter().map(|c| c.notes.len()).sum();
    assert!(
        strict_notes >= 1,
        "expected a recorded strict inclusion on the local ring"
    );
    let dual = dual_module(&m, &lim()).unwrap();
    let dp = dual
        .perp_of_dual_submodule(&dual.perp_of_submodule(&x).unwrap())
        .unwrap();
    assert!(x.subset_of(&dp) && dp.cardinality() > x.cardinality());
    pass_line(4, "conditional laws", started.elapsed());
}

#[test]
fn criterion_5_evaluation_map_identities() {
    let started = Instant::now();
    for spec in corpus() {
        let r = ring(spec);
        let pf_ring = is_pf(&r, &lim()).unwrap().is_pf;
        for side in [Side::Right, Side::Left] {
            let f2 = Module::free(&r, 2, side, &lim()).unwrap();
            for sub in enumerate_submodules(&f2, &lim()).unwrap() {
                let q = Module::quotient(&f2, &sub, &lim()).unwrap();
                let ev = evaluation_map(&q, &lim()).unwrap();
                let zdp = zero_double_perp(&ev.dual).unwrap();
                assert_eq!(
                    ev.kernel, zdp,
                    "{spec} {side}: evaluation kernel differs from the double perp of zero"
                );
                if pf_ring {
                    assert!(
                        ev.bijective(),
                        "{spec} {side}: evaluation map must be bijective over a PF ring on {}",
                        q.describe()
                    );
                }
            }
        }
    }

    // the designated non-PF module: kernel of order exactly 2, and the
    // three per-module verdicts coincide as false
    let r = ring(LOCAL_NON_PF);
    let m = parse_module_spec(&r, Side::Right, "free 1 / [x]", &lim()).unwrap();
    let ev = evaluation_map(&m, &lim()).unwrap();
    assert_eq!(ev.kernel.cardinality(), 2);
    let zdp_trivial = zero_double_perp(&ev.dual).unwrap().is_zero();
    let cogenerated = zdp_trivial;
    assert!(!zdp_trivial && !ev.injective && !cogenerated);
    pass_line(5, "evaluation-map identities", started.elapsed());
}

#[test]
fn criterion_6_rank_reduction_biconditional() {
    let started = Instant::now();
    for spec in corpus() {
        let r = ring(spec);
        let rep = verify_rank_reduction(&r, 2, Side::Right, &lim()).unwrap();
        assert!(
            rep.agree,
            "{spec}: free verdict {} vs quotients verdict {}",
            rep.free_has_equivalence, rep.all_quotients_have_equivalence
        );
        assert!(rep.quotients_checked > 0);
    }
    pass_line(6, "rank-reduction biconditional", started.elapsed());
}

#[test]
fn criterion_7_oracle_equivalence() {
    let started = Instant::now();
    for spec in corpus() {
        let r = ring(spec);
        let mut modules: Vec<Arc<Module>> = Vec::new();
        for side in [Side::Right, Side::Left] {
            modules.push(Module::free(&r, 1, side, &lim()).unwrap());
            modules.push(Module::free(&r, 2, side, &lim()).unwrap());
        }
        let f2 = Module::free(&r, 2, Side::Right, &lim()).unwrap();
        for sub in enumerate_submodules(&f2, &lim()).unwrap() {
            modules.push(Module::quotient(&f2, &sub, &lim()).unwrap());
        }
        for m in modules {
            if m.order() > oracle::ORACLE_BOUND {
                continue;
            }
            let report = oracle::cross_check(&m, &lim()).unwrap();
            assert!(
                report.pass,
                "{spec} / {}: {:#?}",
                m.describe(),
                report.mismatches
            );
        }
    }
    pass_line(7, "oracle equivalence", started.elapsed());
}

#[test]
fn criterion_8_gallery() {
    let started = Instant::now();
    let params = GalleryParams::default();
    assert_eq!(params.truncations, vec![8, 16, 32]);
    let mut verdicts_gf2 = Vec::new();
    for which in [ExampleId::I, ExampleId::II, ExampleId::III] {
        let t = Instant::now();
        let rep = run_example(which, &params).unwrap();
        let elapsed = t.elapsed();
        assert!(
            elapsed < Duration::from_secs(5),
            "example {} took {elapsed:?}",
            rep.example
        );
        assert!(rep.pass, "example {}: {:#?}", rep.example, rep.items);
        match rep.example.as_str() {
            "ii" => {
                for m in [8, 16, 32] {
                    for name in [
                        format!("h_perp_zero_at_{m}"),
                        format!("l_perp_zero_at_{m}"),
                        format!("intersection_perp_is_span_e0_at_{m}"),
                    ] {
                        let it = rep
                            .items
                            .iter()
                            .find(|i| i.name == name)
                            .unwrap_or_else(|| panic!("missing item {name}"));
                        assert!(it.verdict);
                    }
                }
            }
            "i" => {
                assert!(rep
                    .items
                    .iter()
                    .any(|i| i.name == "strict_inclusion_confirmed" && i.verdict));
                assert!(rep
                    .items
                    .iter()
                    .any(|i| i.name == "all_ones_outside_every_stage_perp" && i.verdict));
            }
            "iii" => {
                for w in 0..=8 {
                    let name = format!("window_family_width_{w}_perp_zero");
                    assert!(rep.items.iter().any(|i| i.name == name && i.verdict));
                }
                for slug in ["e0", "e0_plus_e1"] {
                    assert!(rep
                        .items
                        .iter()
                        .any(|i| i.name.starts_with(&format!("probe_{slug}_escapes")) && i.verdict));
                }
            }
            other => panic!("unexpected example {other}"),
        }
        verdicts_gf2.push(
            rep.items
                .iter()
                .map(|i| (i.name.clone(), i.verdict))
                .collect::<Vec<_>>(),
        );
    }
    // identical results over GF(3)
    let params3 = GalleryParams {
        field_p: 3,
        ..GalleryParams::default()
    };
    for (i, which) in [ExampleId::I, ExampleId::II, ExampleId::III].iter().enumerate() {
        let rep = run_example(*which, &params3).unwrap();
        assert!(rep.pass);
        let verdicts: Vec<(String, bool)> = rep
            .items
            .iter()
            .map(|i| (i.name.clone(), i.verdict))
            .collect();
        assert_eq!(verdicts, verdicts_gf2[i], "GF(3) diverged on example {}", rep.example);
    }
    pass_line(8, "gallery", started.elapsed());
}

fn run_cli(args: &[&str], cache: Option<&std::path::Path>) -> (Vec<u8>, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_perpcalc"));
    cmd.args(args);
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

#[test]
fn criterion_9_cli_determinism() {
    let started = Instant::now();
    let commands: Vec<Vec<&str>> = vec![
        vec!["ring-info", "tri 2 over gf 2 1"],
        vec!["ring-audit", "zmod 9"],
        vec!["pf-check", "zmod 6", "--json"],
        vec!["perp", "zmod 4", "--module", "free 2", "--gens", "2,0; 0,2"],
        vec!["theorem-verify", "zmod 8", "--json"],
        vec!["witness-find", "quot gf2 [x,y]/(x^2,xy,y^2)", "--json"],
        vec!["gallery", "--json"],
        vec!["oracle-crosscheck", "tri 2 over gf 2 1", "--module", "free 1"],
    ];
    for cmd in &commands {
        let (a, code_a) = run_cli(cmd, None);
        let (b, code_b) = run_cli(cmd, None);
        assert_eq!(a, b, "uncached runs differ for {cmd:?}");
        assert_eq!(code_a, code_b);
        let dir = tempfile::tempdir().unwrap();
        let (c, code_c) = run_cli(cmd, Some(dir.path()));
        let (d, code_d) = run_cli(cmd, Some(dir.path()));
        assert_eq!(c, d, "cached runs differ for {cmd:?}");
        assert_eq!(code_c, code_d);
        assert_eq!(a, c, "cache mode changes bytes for {cmd:?}");
        assert_eq!(code_a, code_c);
    }
    pass_line(9, "CLI determinism", started.elapsed());
}
