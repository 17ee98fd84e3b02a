//! perpcalc: exhaustive perp calculus over finite rings, from the shell.
//!
//! Exit codes: 0 success; 2 a check failed or an internal consistency
//! alarm fired; 3 usage or spec error; 4 size guard exceeded or timeout
//! (with a partial-progress report on stdout).

mod cache;
mod report;

use cache::Cache;
use clap::{Parser, Subcommand, ValueEnum};
use perpcalc::duality::{check_galois_laws, dual_module};
use perpcalc::gallery::{run_example, ExampleId, GalleryParams};
use perpcalc::module::{parse_module_spec, Module, Side, Submodule};
use perpcalc::oracle;
use perpcalc::pf;
use perpcalc::ring::{build_ring, parse_ring_spec, FiniteRing};
use perpcalc::{Error, Limits};
use report::{CheckResult, Guards, ModuleMeta, Report, RingMeta, SCHEMA_VERSION};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(
    name = "perpcalc",
    version,
    about = "orthogonal-complement calculus on duals of modules over finite rings"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Emit the machine-readable JSON report instead of line-oriented text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for the advisory report cache (disabled when absent).
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Maximum ring order the builders accept.
    #[arg(long, global = true, default_value_t = 256)]
    max_ring_order: u64,
    /// Maximum module order the enumerations accept.
    #[arg(long, global = true, default_value_t = 4096)]
    max_module_order: u64,
    /// Cooperative deadline; long enumerations abort with exit code 4.
    #[arg(long, global = true, value_name = "SECS")]
    timeout_secs: Option<u64>,
    /// Include wall-clock timings in the report. Off by default so that
    /// reports stay byte-identical across runs.
    #[arg(long, global = true)]
    with_timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Build a ring from its spec and describe it.
    RingInfo { spec: String },
    /// Exhaustively audit the ring axioms over the full universe.
    RingAudit { spec: String },
    /// Decide pseudo-Frobenius-ness: self-injectivity (Baer criterion)
    /// and the Kasch condition, on both sides.
    PfCheck { spec: String },
    /// Compute the perp and double perp of a generated submodule (and
    /// optionally of a dual submodule), plus the Galois-law audit.
    Perp {
        spec: String,
        /// Module mini-language: "free N" or "free N / [v1; v2; ...]".
        #[arg(long, default_value = "free 1")]
        module: String,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Semicolon-separated generator vectors of the submodule.
        #[arg(long)]
        gens: Option<String>,
        /// Semicolon-separated coordinate vectors generating a dual
        /// submodule.
        #[arg(long)]
        dual_gens: Option<String>,
    },
    /// Verify the equivalence chain between PF-ness and orthogonal
    /// equivalence on the complete 2-generated scope.
    TheoremVerify { spec: String },
    /// Search for a double-perp witness in the fixed scope order.
    WitnessFind { spec: String },
    /// Reproduce the infinite-dimensional counterexamples by exact
    /// truncated linear algebra.
    Gallery {
        /// "i", "ii", "iii" or "all".
        #[arg(long, default_value = "all")]
        example: String,
        /// Prime field characteristic.
        #[arg(long, default_value_t = 2)]
        field: u64,
        /// Support bounds / truncations (repeatable); default 8, 16, 32.
        #[arg(long = "truncation", value_name = "N")]
        truncations: Vec<usize>,
        /// Largest window width for the third example.
        #[arg(long, default_value_t = 8)]
        p_max: usize,
    },
    /// Cross-check the main path against the brute-force oracle on one
    /// module.
    OracleCrosscheck {
        spec: String,
        #[arg(long, default_value = "free 1")]
        module: String,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2; the report contract reserves 3 for usage
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let guards = Guards {
        max_ring_order: cli.max_ring_order,
        max_module_order: cli.max_module_order,
    };
    let mut limits = Limits {
        max_ring_order: cli.max_ring_order,
        max_module_order: cli.max_module_order,
        deadline: None,
    };
    if let Some(secs) = cli.timeout_secs {
        limits.deadline = Some(Instant::now() + Duration::from_secs(secs));
    }
    match execute(&cli, &limits, &guards) {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(report.exit_code as u8)
        }
        Err(e @ (Error::Timeout { .. } | Error::GuardExceeded { .. })) => {
            let report = abort_report(&cli, &guards, &e);
            print!("{}", report.render(cli.json));
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Inconsistency(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

/// The partial-progress report emitted when a guard or the deadline
/// aborts a run: it records the stage that was reached.
fn abort_report(cli: &Cli, guards: &Guards, e: &Error) -> Report {
    let (command, args) = echo_args(cli);
    Report {
        schema_version: SCHEMA_VERSION,
        command,
        args,
        guards: guards.clone(),
        ring: None,
        module: None,
        results: vec![CheckResult::new(
            "aborted",
            "fail",
            json!({ "reason": e.to_string() }),
        )],
        timings_ms: None,
        exit_code: 4,
    }
}

fn echo_args(cli: &Cli) -> (String, BTreeMap<String, String>) {
    let mut args = BTreeMap::new();
    let command = match &cli.verb {
        Verb::RingInfo { spec } => {
            args.insert("spec".into(), spec.clone());
            "ring-info"
        }
        Verb::RingAudit { spec } => {
            args.insert("spec".into(), spec.clone());
            "ring-audit"
        }
        Verb::PfCheck { spec } => {
            args.insert("spec".into(), spec.clone());
            "pf-check"
        }
        Verb::Perp {
            spec,
            module,
            side,
            gens,
            dual_gens,
        } => {
            args.insert("spec".into(), spec.clone());
            args.insert("module".into(), module.clone());
            args.insert("side".into(), format!("{:?}", side).to_lowercase());
            if let Some(g) = gens {
                args.insert("gens".into(), g.clone());
            }
            if let Some(g) = dual_gens {
                args.insert("dual-gens".into(), g.clone());
            }
            "perp"
        }
        Verb::TheoremVerify { spec } => {
            args.insert("spec".into(), spec.clone());
            "theorem-verify"
        }
        Verb::WitnessFind { spec } => {
            args.insert("spec".into(), spec.clone());
            "witness-find"
        }
        Verb::Gallery {
            example,
            field,
            truncations,
            p_max,
        } => {
            args.insert("example".into(), example.clone());
            args.insert("field".into(), field.to_string());
            let ts = effective_truncations(truncations);
            args.insert(
                "truncations".into(),
                ts.iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            args.insert("p-max".into(), p_max.to_string());
            "gallery"
        }
        Verb::OracleCrosscheck { spec, module, side } => {
            args.insert("spec".into(), spec.clone());
            args.insert("module".into(), module.clone());
            args.insert("side".into(), format!("{:?}", side).to_lowercase());
            "oracle-crosscheck"
        }
    };
    (command.to_string(), args)
}

fn effective_truncations(ts: &[usize]) -> Vec<usize> {
    if ts.is_empty() {
        vec![8, 16, 32]
    } else {
        ts.to_vec()
    }
}

fn build(spec: &str, limits: &Limits) -> Result<Arc<FiniteRing>, Error> {
    build_ring(&parse_ring_spec(spec)?, limits)
}

fn ring_meta(ring: &FiniteRing) -> RingMeta {
    RingMeta {
        spec: ring.spec_text().to_string(),
        hash: ring.hash().to_string(),
        order: ring.order(),
        commutative: ring.is_commutative(),
    }
}

fn module_meta(spec: &str, m: &Module) -> ModuleMeta {
    ModuleMeta {
        spec: spec.trim().to_string(),
        side: m.side().to_string(),
        order: m.order(),
        hash: m.hash().to_string(),
    }
}

fn execute(cli: &Cli, limits: &Limits, guards: &Guards) -> Result<Report, Error> {
    let started = Instant::now();
    let (command, args) = echo_args(cli);
    let tag = cache::tag_for(&command, &args, guards);
    let cache = cli.cache_dir.as_deref().and_then(Cache::new);

    // the cache key's target half: the ring hash, or a fixed label for
    // ring-free verbs
    let ring = match &cli.verb {
        Verb::Gallery { .. } => None,
        Verb::RingInfo { spec }
        | Verb::RingAudit { spec }
        | Verb::PfCheck { spec }
        | Verb::TheoremVerify { spec }
        | Verb::WitnessFind { spec }
        | Verb::Perp { spec, .. }
        | Verb::OracleCrosscheck { spec, .. } => Some(build(spec, limits)?),
    };
    let target_hash = ring
        .as_ref()
        .map(|r| r.hash().to_string())
        .unwrap_or_else(|| "gallery".to_string());

    if let Some(cache) = &cache {
        if let Some(mut hit) = cache.get(&target_hash, &tag) {
            // timings are run-local, never replayed
            hit.timings_ms = None;
            if cli.with_timings {
                let mut t = BTreeMap::new();
                t.insert("total_ms".to_string(), started.elapsed().as_millis());
                t.insert("cache_hit".to_string(), 1);
                hit.timings_ms = Some(t);
            }
            return Ok(hit);
        }
    }

    let mut timings: BTreeMap<String, u128> = BTreeMap::new();
    let (module_info, results, exit_code) = dispatch(cli, ring.as_ref(), limits, &mut timings)?;

    timings.insert("total_ms".to_string(), started.elapsed().as_millis());
    let mut rep = Report {
        schema_version: SCHEMA_VERSION,
        command,
        args,
        guards: guards.clone(),
        ring: ring.as_deref().map(ring_meta),
        module: module_info,
        results,
        timings_ms: None,
        exit_code,
    };
    if let Some(cache) = &cache {
        cache.put(&target_hash, &tag, &rep);
    }
    if cli.with_timings {
        rep.timings_ms = Some(timings);
    }
    Ok(rep)
}

type VerbOutput = (Option<ModuleMeta>, Vec<CheckResult>, i32);

fn dispatch(
    cli: &Cli,
    ring: Option<&Arc<FiniteRing>>,
    limits: &Limits,
    timings: &mut BTreeMap<String, u128>,
) -> Result<VerbOutput, Error> {
    match &cli.verb {
        Verb::RingInfo { .. } => run_ring_info(ring.unwrap(), limits),
        Verb::RingAudit { .. } => run_ring_audit(ring.unwrap(), limits),
        Verb::PfCheck { .. } => run_pf_check(ring.unwrap(), limits, timings),
        Verb::Perp {
            module,
            side,
            gens,
            dual_gens,
            ..
        } => run_perp(
            ring.unwrap(),
            module,
            (*side).into(),
            gens.as_deref(),
            dual_gens.as_deref(),
            limits,
        ),
        Verb::TheoremVerify { .. } => run_theorem(ring.unwrap(), limits),
        Verb::WitnessFind { .. } => run_witness(ring.unwrap(), limits),
        Verb::Gallery {
            example,
            field,
            truncations,
            p_max,
        } => run_gallery(example, *field, &effective_truncations(truncations), *p_max),
        Verb::OracleCrosscheck { module, side, .. } => {
            run_crosscheck(ring.unwrap(), module, (*side).into(), limits)
        }
    }
}

fn run_ring_info(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<VerbOutput, Error> {
    let mut results = vec![
        CheckResult::info("order", json!(ring.order())),
        CheckResult::info("commutative", json!(ring.is_commutative())),
        CheckResult::info("zero", json!(ring.label(ring.zero()))),
        CheckResult::info("one", json!(ring.label(ring.one()))),
        CheckResult::info("field", json!(ring.is_field())),
    ];
    let shown: Vec<&str> = ring
        .elements()
        .take(64)
        .map(|e| {
            let label: &str = ring.label(e);
            label
        })
        .collect();
    results.push(CheckResult::info(
        "elements",
        json!({ "count": ring.order(), "listed": shown }),
    ));
    let mut exit = 0;
    if ring.order() <= 256 {
        let audit = ring.audit(limits)?;
        results.push(CheckResult::passfail(
            "axiom_audit",
            audit.passed(),
            json!({ "violations": audit.total_violations }),
        ));
        if !audit.passed() {
            exit = 2;
        }
    } else {
        results.push(CheckResult::info(
            "axiom_audit",
            json!("skipped at this order; run ring-audit explicitly"),
        ));
    }
    Ok((None, results, exit))
}

fn run_ring_audit(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<VerbOutput, Error> {
    let audit = ring.audit(limits)?;
    let mut results = vec![CheckResult::info(
        "checked_universe",
        json!({ "order": audit.order }),
    )];
    for v in audit.violations.iter().take(32) {
        results.push(CheckResult::new(
            "axiom_violation",
            "fail",
            json!({ "axiom": v.axiom, "elements": v.elements }),
        ));
    }
    results.push(CheckResult::passfail(
        "axiom_audit",
        audit.passed(),
        json!({ "violations": audit.total_violations }),
    ));
    Ok((None, results, if audit.passed() { 0 } else { 2 }))
}

fn run_pf_check(
    ring: &Arc<FiniteRing>,
    limits: &Limits,
    timings: &mut BTreeMap<String, u128>,
) -> Result<VerbOutput, Error> {
    let rep = pf::is_pf(ring, limits)?;
    for (k, v) in &rep.timings_ms {
        timings.insert(format!("pf_{k}"), *v);
    }
    let results = vec![
        CheckResult::passfail("right_self_injective", rep.right_self_injective, Value::Null),
        CheckResult::passfail("left_self_injective", rep.left_self_injective, Value::Null),
        CheckResult::passfail("right_kasch", rep.right_kasch, Value::Null),
        CheckResult::passfail("left_kasch", rep.left_kasch, Value::Null),
        CheckResult::info(
            "failure_witnesses",
            serde_json::to_value(&rep.failures).expect("witnesses serialize"),
        ),
        CheckResult::passfail("is_pf", rep.is_pf, Value::Null),
    ];
    Ok((None, results, if rep.is_pf { 0 } else { 2 }))
}

fn parse_gen_list(m: &Arc<Module>, text: &str) -> Result<Vec<perpcalc::module::ModuleElement>, Error> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if !part.is_empty() {
            out.push(m.parse_element(part)?);
        }
    }
    Ok(out)
}

fn run_perp(
    ring: &Arc<FiniteRing>,
    module_spec: &str,
    side: Side,
    gens: Option<&str>,
    dual_gens: Option<&str>,
    limits: &Limits,
) -> Result<VerbOutput, Error> {
    let m = parse_module_spec(ring, side, module_spec, limits)?;
    let meta = module_meta(module_spec, &m);
    let dual = dual_module(&m, limits)?;
    let mut results = vec![CheckResult::info(
        "dual_order",
        json!(dual.order()),
    )];

    let x = match gens {
        Some(text) => Submodule::generated(&m, &parse_gen_list(&m, text)?, limits)?,
        None => Submodule::zero(&m),
    };
    let xp = dual.perp_of_submodule(&x)?;
    let xpp = dual.perp_of_dual_submodule(&xp)?;
    results.push(CheckResult::info("x_elements", json!(x.element_labels())));
    results.push(CheckResult::info("x_perp", json!(xp.element_labels())));
    results.push(CheckResult::info(
        "x_double_perp",
        json!(xpp.element_labels()),
    ));
    results.push(CheckResult::new(
        "x_double_perp_equals_x",
        if xpp == x { "true" } else { "false" },
        Value::Null,
    ));

    if let Some(text) = dual_gens {
        let free = dual.free_module().clone();
        let ygens = parse_gen_list(&free, text)?;
        let y = Submodule::generated(&free, &ygens, limits)?;
        let yp = dual.perp_of_dual_submodule(&y)?;
        let ypp = dual.perp_of_submodule(&yp)?;
        let closure = dual.closure(&y)?;
        results.push(CheckResult::info("y_elements", json!(y.element_labels())));
        results.push(CheckResult::info("y_perp", json!(yp.element_labels())));
        results.push(CheckResult::info(
            "y_double_perp",
            json!(ypp.element_labels()),
        ));
        results.push(CheckResult::new(
            "y_double_perp_equals_y",
            if ypp == y { "true" } else { "false" },
            Value::Null,
        ));
        results.push(CheckResult::passfail(
            "closure_equals_y",
            closure == y,
            Value::Null,
        ));
    }

    let laws = check_galois_laws(&m, limits)?;
    let violations: Vec<Value> = laws
        .checks
        .iter()
        .filter(|c| !c.violations.is_empty())
        .map(|c| json!({ "law": c.name, "violations": c.violations }))
        .collect();
    results.push(CheckResult::passfail(
        "galois_laws",
        laws.passed(),
        json!({ "instances": laws.total_instances(), "violations": violations }),
    ));
    let exit = if laws.passed() { 0 } else { 2 };
    Ok((Some(meta), results, exit))
}

fn run_theorem(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<VerbOutput, Error> {
    let rep = pf::verify_theorem(ring, limits)?;
    let mut results = Vec::new();
    for s in &rep.statements {
        let mut detail = serde_json::Map::new();
        detail.insert("statement".into(), json!(s.statement));
        if let Some(note) = &s.scope_note {
            detail.insert("scope".into(), json!(note));
        }
        if let Some(w) = &s.witness {
            detail.insert(
                "witness".into(),
                serde_json::to_value(w).expect("witness serializes"),
            );
        }
        results.push(CheckResult::new(
            &s.key,
            if s.verdict { "true" } else { "false" },
            Value::Object(detail),
        ));
    }
    results.push(CheckResult::info(
        "pf_flags",
        json!({
            "right_self_injective": rep.pf.right_self_injective,
            "left_self_injective": rep.pf.left_self_injective,
            "right_kasch": rep.pf.right_kasch,
            "left_kasch": rep.pf.left_kasch,
        }),
    ));
    results.push(CheckResult::passfail("consistent", rep.consistent, Value::Null));
    Ok((None, results, if rep.consistent { 0 } else { 2 }))
}

fn run_witness(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<VerbOutput, Error> {
    let witness = pf::find_witness(ring, limits)?;
    let pf_rep = pf::is_pf(ring, limits)?;
    let mut results = Vec::new();
    match &witness {
        Some(w) => results.push(CheckResult::info(
            "witness",
            serde_json::to_value(w).expect("witness serializes"),
        )),
        None => results.push(CheckResult::info("witness", json!("none"))),
    }
    results.push(CheckResult::info("is_pf", json!(pf_rep.is_pf)));
    let coincide = witness.is_none() == pf_rep.is_pf;
    results.push(CheckResult::passfail(
        "witness_absence_matches_pf",
        coincide,
        Value::Null,
    ));
    Ok((None, results, if coincide { 0 } else { 2 }))
}

fn run_gallery(
    example: &str,
    field: u64,
    truncations: &[usize],
    p_max: usize,
) -> Result<VerbOutput, Error> {
    let ids: Vec<ExampleId> = if example == "all" {
        vec![ExampleId::I, ExampleId::II, ExampleId::III]
    } else {
        vec![ExampleId::parse(example)?]
    };
    let params = GalleryParams {
        field_p: field,
        truncations: truncations.to_vec(),
        p_max,
    };
    let mut results = Vec::new();
    let mut all_pass = true;
    for id in ids {
        let rep = run_example(id, &params)?;
        results.push(CheckResult::info(
            &format!("example_{}", rep.example),
            json!({ "title": rep.title, "field": rep.field_p, "truncations": rep.truncations }),
        ));
        for it in &rep.items {
            results.push(CheckResult::passfail(
                &format!("{}.{}", rep.example, it.name),
                it.verdict,
                json!(it.detail),
            ));
        }
        for note in &rep.notes {
            results.push(CheckResult::info(
                &format!("{}.note", rep.example),
                json!(note),
            ));
        }
        all_pass &= rep.pass;
    }
    Ok((None, results, if all_pass { 0 } else { 2 }))
}

fn run_crosscheck(
    ring: &Arc<FiniteRing>,
    module_spec: &str,
    side: Side,
    limits: &Limits,
) -> Result<VerbOutput, Error> {
    let m = parse_module_spec(ring, side, module_spec, limits)?;
    let meta = module_meta(module_spec, &m);
    let rep = oracle::cross_check(&m, limits)?;
    let mut results = vec![CheckResult::info("checks_run", json!(rep.checks_run))];
    for mm in &rep.mismatches {
        results.push(CheckResult::new(
            "mismatch",
            "fail",
            json!({ "check": mm.check, "main": mm.main, "oracle": mm.oracle }),
        ));
    }
    results.push(CheckResult::passfail("cross_check", rep.pass, Value::Null));
    Ok((Some(meta), results, if rep.pass { 0 } else { 2 }))
}
