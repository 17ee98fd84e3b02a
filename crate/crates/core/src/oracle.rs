//! Structurally independent brute-force cross-checks.
//!
//! Nothing here shares closure or canonicalization code with the main
//! path: coset representatives are recomputed as literal minima over the
//! relation set, submodule closure is repeated-pass saturation instead of
//! the worklist, hom sets are enumerated by assigning generator images
//! and saturating the graph, and perps are evaluated from the definition
//! against full morphism tables with no coordinate-encoding shortcut.
//! Bounds are deliberately stricter than the main guards and are not
//! configurable.

use crate::duality::{dual_module, enumerate_dual_submodules};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::module::{enumerate_submodules, Module, Submodule};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Hard oracle bound on module order.
pub const ORACLE_BOUND: usize = 64;
/// Hard bound on image-tuple candidates in hom enumeration.
const HOM_CANDIDATE_BOUND: u64 = 1 << 20;

fn check_bound(m: &Module) -> Result<()> {
    if m.order() > ORACLE_BOUND {
        return Err(Error::GuardExceeded {
            what: "oracle module order".into(),
            actual: m.order() as u64,
            limit: ORACLE_BOUND as u64,
        });
    }
    Ok(())
}

/// Canonicalization from the definition: the minimum of the coset,
/// scanned over the whole relation set.
fn o_canon(m: &Module, raw: u64) -> u64 {
    let order = m.ring().order() as u64;
    let rank = m.rank();
    m.rel_elems()
        .iter()
        .map(|&x| {
            let mut out = 0u64;
            let mut w = 1u64;
            let (mut aa, mut bb) = (raw, x);
            for _ in 0..rank {
                let s = m.ring().add_idx((aa % order) as u32, (bb % order) as u32);
                out += s as u64 * w;
                w *= order;
                aa /= order;
                bb /= order;
            }
            out
        })
        .min()
        .expect("relation sets contain zero")
}

fn o_add(m: &Module, a: u64, b: u64) -> u64 {
    let order = m.ring().order() as u64;
    let mut out = 0u64;
    let mut w = 1u64;
    let (mut aa, mut bb) = (a, b);
    for _ in 0..m.rank() {
        let s = m.ring().add_idx((aa % order) as u32, (bb % order) as u32);
        out += s as u64 * w;
        w *= order;
        aa /= order;
        bb /= order;
    }
    o_canon(m, out)
}

fn o_act(m: &Module, a: u64, r: u32) -> u64 {
    let order = m.ring().order() as u64;
    let act = m.action_ring();
    let mut out = 0u64;
    let mut w = 1u64;
    let mut aa = a;
    for _ in 0..m.rank() {
        let p = act.mul_idx((aa % order) as u32, r);
        out += p as u64 * w;
        w *= order;
        aa /= order;
    }
    o_canon(m, out)
}

/// Repeated-pass saturation under addition and the scalar action.
fn saturate(m: &Module, seed: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = seed.into_iter().collect();
    set.insert(0);
    loop {
        let mut fresh: Vec<u64> = Vec::new();
        for &a in &set {
            for &b in &set {
                let s = o_add(m, a, b);
                if !set.contains(&s) {
                    fresh.push(s);
                }
            }
            for r in 0..m.ring().order() as u32 {
                let s = o_act(m, a, r);
                if !set.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        if fresh.is_empty() {
            return set;
        }
        set.extend(fresh);
    }
}

/// The direct closure predicate: contains zero, closed under addition
/// and the scalar action.
fn is_closed(m: &Module, set: &BTreeSet<u64>) -> bool {
    set.contains(&0)
        && set.iter().all(|&a| {
            set.iter().all(|&b| set.contains(&o_add(m, a, b)))
                && (0..m.ring().order() as u32).all(|r| set.contains(&o_act(m, a, r)))
        })
}

/// All submodules of `m`, as raw element sets, via join-saturation of the
/// cyclic submodules.
pub fn submodules(m: &Arc<Module>, limits: &Limits) -> Result<Vec<BTreeSet<u64>>> {
    check_bound(m)?;
    let mut cyclics: Vec<BTreeSet<u64>> = Vec::new();
    for &e in m.elems() {
        let c = saturate(m, [e]);
        if !cyclics.contains(&c) {
            cyclics.push(c);
        }
    }
    let mut all: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    all.insert(saturate(m, []));
    loop {
        limits.check_deadline("oracle submodule saturation")?;
        let snapshot: Vec<BTreeSet<u64>> = all.iter().cloned().collect();
        let before = all.len();
        for s in &snapshot {
            for c in &cyclics {
                if c.is_subset(s) {
                    continue;
                }
                let join = saturate(m, s.iter().chain(c.iter()).copied());
                all.insert(join);
            }
        }
        if all.len() == before {
            break;
        }
    }
    for s in &all {
        if !is_closed(m, s) {
            return Err(Error::Inconsistency(
                "oracle produced a set failing the closure predicate".into(),
            ));
        }
    }
    // independent ordering: descending cardinality, then element sets
    let mut out: Vec<BTreeSet<u64>> = all.into_iter().collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Greedy generator pick using only oracle machinery.
fn oracle_generators(m: &Module, set: &BTreeSet<u64>) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut span = saturate(m, []);
    for &e in set {
        if span.contains(&e) {
            continue;
        }
        gens.push(e);
        span = saturate(m, gens.iter().copied());
        if span.len() == set.len() {
            break;
        }
    }
    gens
}

/// Every module morphism from the submodule `dom` into `cod`, as a full
/// table. Enumerates image assignments for a generator tuple and keeps
/// the ones whose graph saturates into a well-defined map.
pub fn hom_set(
    dom: &Submodule,
    cod: &Arc<Module>,
    limits: &Limits,
) -> Result<Vec<BTreeMap<u64, u64>>> {
    let dm = dom.module();
    check_bound(dm)?;
    check_bound(cod)?;
    if dm.side() != cod.side() || dm.ring().hash() != cod.ring().hash() {
        return Err(Error::SideMismatch(
            "hom set requires modules over the same ring and side".into(),
        ));
    }
    let dom_set: BTreeSet<u64> = dom.elem_codes().iter().copied().collect();
    let gens = oracle_generators(dm, &dom_set);
    let candidates = (cod.order() as u64)
        .checked_pow(gens.len() as u32)
        .filter(|&c| c <= HOM_CANDIDATE_BOUND)
        .ok_or_else(|| Error::GuardExceeded {
            what: "oracle hom candidates".into(),
            actual: u64::MAX,
            limit: HOM_CANDIDATE_BOUND,
        })?;
    let mut out = Vec::new();
    let cod_elems = cod.elems();
    for cand in 0..candidates {
        if cand % 256 == 0 {
            limits.check_deadline("oracle hom enumeration")?;
        }
        let mut images = Vec::with_capacity(gens.len());
        let mut rest = cand;
        for _ in 0..gens.len() {
            images.push(cod_elems[(rest % cod.order() as u64) as usize]);
            rest /= cod.order() as u64;
        }
        if let Some(table) = try_hom(dm, &dom_set, cod, &gens, &images) {
            out.push(table);
        }
    }
    Ok(out)
}

/// Saturates the graph generated by (g_i, im_i); a conflict means the
/// assignment does not define a map, coverage of the domain means it
/// does, and the construction makes it linear.
fn try_hom(
    dm: &Module,
    dom_set: &BTreeSet<u64>,
    cod: &Module,
    gens: &[u64],
    images: &[u64],
) -> Option<BTreeMap<u64, u64>> {
    let mut map: BTreeMap<u64, u64> = BTreeMap::new();
    let mut work: Vec<(u64, u64)> = gens.iter().copied().zip(images.iter().copied()).collect();
    work.push((0, 0));
    while let Some((a, fa)) = work.pop() {
        match map.get(&a) {
            Some(&old) if old == fa => continue,
            Some(_) => return None,
            None => {}
        }
        map.insert(a, fa);
        let snapshot: Vec<(u64, u64)> = map.iter().map(|(&x, &y)| (x, y)).collect();
        for (b, fb) in snapshot {
            work.push((o_add(dm, a, b), o_add(cod, fa, fb)));
        }
        for r in 0..dm.ring().order() as u32 {
            work.push((o_act(dm, a, r), o_act(cod, fa, r)));
        }
    }
    (map.len() == dom_set.len()).then_some(map)
}

/// Perp of a submodule against full morphism tables: keep the tables
/// vanishing on every element, no generator shortcut.
pub fn perp_of_submodule_tables(
    x_elems: &[u64],
    homs: &[BTreeMap<u64, u64>],
) -> Vec<BTreeMap<u64, u64>> {
    homs.iter()
        .filter(|t| x_elems.iter().all(|e| t[e] == 0))
        .cloned()
        .collect()
}

/// Perp of a set of morphism tables: the elements every table kills.
pub fn perp_of_tables(tables: &[&BTreeMap<u64, u64>], m: &Module) -> BTreeSet<u64> {
    m.elems()
        .iter()
        .copied()
        .filter(|e| tables.iter().all(|t| t[e] == 0))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub main: Vec<String>,
    pub oracle: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub module: String,
    pub checks_run: usize,
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

fn set_labels(m: &Module, codes: impl IntoIterator<Item = u64>) -> Vec<String> {
    codes.into_iter().map(|c| m.label_code(c)).collect()
}

fn table_label(t: &BTreeMap<u64, u64>, m: &Module, cod: &Module) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|(&a, &fa)| format!("{}->{}", m.label_code(a), cod.label_code(fa)))
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Compares the main path against the oracle on one module: the
/// submodule lattice, the dual carrier as a hom set, and both perp
/// directions over every submodule.
pub fn cross_check(m: &Arc<Module>, limits: &Limits) -> Result<CrossCheckReport> {
    check_bound(m)?;
    let mut report = CrossCheckReport {
        module: m.describe(),
        checks_run: 0,
        mismatches: Vec::new(),
        pass: true,
    };

    // 1. submodule lattices agree
    let main_subs = enumerate_submodules(m, limits)?;
    let oracle_subs = submodules(m, limits)?;
    report.checks_run += 1;
    let main_sets: BTreeSet<Vec<u64>> = main_subs
        .iter()
        .map(|s| s.elem_codes().to_vec())
        .collect();
    let oracle_sets: BTreeSet<Vec<u64>> = oracle_subs
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    if main_sets != oracle_sets {
        report.mismatches.push(Mismatch {
            check: "submodule lattice".into(),
            main: main_sets
                .difference(&oracle_sets)
                .map(|s| format!("{{{}}}", set_labels(m, s.iter().copied()).join(", ")))
                .collect(),
            oracle: oracle_sets
                .difference(&main_sets)
                .map(|s| format!("{{{}}}", set_labels(m, s.iter().copied()).join(", ")))
                .collect(),
        });
    }

    // 2. the dual carrier matches the exhaustive hom set Hom(M, R)
    let dual = dual_module(m, limits)?;
    let cod = Module::free(m.ring(), 1, m.side(), limits)?;
    let homs = hom_set(&Submodule::full(m), &cod, limits)?;
    report.checks_run += 1;
    let carrier_table_of = |f: u64| -> BTreeMap<u64, u64> {
        m.elems()
            .iter()
            .map(|&v| (v, dual.eval_raw(f, v) as u64))
            .collect()
    };
    let main_tables: BTreeSet<BTreeMap<u64, u64>> = dual
        .carrier()
        .elem_codes()
        .iter()
        .map(|&f| carrier_table_of(f))
        .collect();
    let oracle_tables: BTreeSet<BTreeMap<u64, u64>> = homs.iter().cloned().collect();
    if main_tables != oracle_tables {
        report.mismatches.push(Mismatch {
            check: "dual carrier vs hom set".into(),
            main: main_tables
                .difference(&oracle_tables)
                .map(|t| table_label(t, m, &cod))
                .collect(),
            oracle: oracle_tables
                .difference(&main_tables)
                .map(|t| table_label(t, m, &cod))
                .collect(),
        });
    }

    // 3. perp of every submodule agrees with the definition
    for x in &main_subs {
        limits.check_deadline("oracle perp cross-check")?;
        report.checks_run += 1;
        let main_perp: BTreeSet<BTreeMap<u64, u64>> = dual
            .perp_of_submodule(x)?
            .elem_codes()
            .iter()
            .map(|&f| carrier_table_of(f))
            .collect();
        let oracle_perp: BTreeSet<BTreeMap<u64, u64>> =
            perp_of_submodule_tables(x.elem_codes(), &homs)
                .into_iter()
                .collect();
        if main_perp != oracle_perp {
            report.mismatches.push(Mismatch {
                check: format!("perp of X = {{{}}}", x.element_labels().join(", ")),
                main: main_perp.iter().map(|t| table_label(t, m, &cod)).collect(),
                oracle: oracle_perp
                    .iter()
                    .map(|t| table_label(t, m, &cod))
                    .collect(),
            });
        }
    }

    // 4. perp of every dual submodule agrees with the definition
    for y in enumerate_dual_submodules(&dual, limits)? {
        limits.check_deadline("oracle perp cross-check")?;
        report.checks_run += 1;
        let main_perp: BTreeSet<u64> = dual
            .perp_of_dual_submodule(&y)?
            .elem_codes()
            .iter()
            .copied()
            .collect();
        let tables: Vec<BTreeMap<u64, u64>> = y
            .elem_codes()
            .iter()
            .map(|&f| carrier_table_of(f))
            .collect();
        let table_refs: Vec<&BTreeMap<u64, u64>> = tables.iter().collect();
        let oracle_perp = perp_of_tables(&table_refs, m);
        if main_perp != oracle_perp {
            report.mismatches.push(Mismatch {
                check: format!("perp of Y = {{{}}}", y.element_labels().join(", ")),
                main: set_labels(m, main_perp),
                oracle: set_labels(m, oracle_perp),
            });
        }
    }

    report.pass = report.mismatches.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{parse_module_spec, Side};
    use crate::ring::{build_ring, parse_ring_spec, FiniteRing};

    fn ring(text: &str) -> Arc<FiniteRing> {
        build_ring(&parse_ring_spec(text).unwrap(), &Limits::default()).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn oracle_counts_small_lattices() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        assert_eq!(submodules(&m, &lim()).unwrap().len(), 3);

        let f2 = ring("gf 2 1");
        let plane = Module::free(&f2, 2, Side::Right, &lim()).unwrap();
        assert_eq!(submodules(&plane, &lim()).unwrap().len(), 5);

        let z = Module::quotient(&m, &Submodule::full(&m), &lim()).unwrap();
        assert_eq!(submodules(&z, &lim()).unwrap().len(), 1);
    }

    #[test]
    fn hom_set_examples() {
        let z4 = ring("zmod 4");
        let r_mod = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        // the image of the generator of Z4/(2) must be killed by 2
        let q = parse_module_spec(&z4, Side::Right, "free 1 / [2]", &lim()).unwrap();
        let homs = hom_set(&Submodule::full(&q), &r_mod, &lim()).unwrap();
        assert_eq!(homs.len(), 2);
        // a zero codomain admits exactly one morphism
        let zero = Module::quotient(&r_mod, &Submodule::full(&r_mod), &lim()).unwrap();
        let homs = hom_set(&Submodule::full(&r_mod), &zero, &lim()).unwrap();
        assert_eq!(homs.len(), 1);
        // Hom(F2, F2) has two
        let f2 = ring("gf 2 1");
        let line = Module::free(&f2, 1, Side::Right, &lim()).unwrap();
        let homs = hom_set(&Submodule::full(&line), &line, &lim()).unwrap();
        assert_eq!(homs.len(), 2);
    }

    #[test]
    fn oracle_perp_matches_hand_computation() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        let homs = hom_set(&Submodule::full(&m), &m, &lim()).unwrap();
        assert_eq!(homs.len(), 4);
        let x = Submodule::generated(&m, &[m.parse_element("2").unwrap()], &lim()).unwrap();
        let perp = perp_of_submodule_tables(x.elem_codes(), &homs);
        assert_eq!(perp.len(), 2);
        let refs: Vec<&BTreeMap<u64, u64>> = homs.iter().collect();
        let killed = perp_of_tables(&refs, &m);
        assert_eq!(killed.len(), 1);
    }

    #[test]
    fn cross_check_passes_on_corpus_samples() {
        for (spec, modspec) in [
            ("zmod 4", "free 2"),
            ("tri 2 over gf 2 1", "free 1"),
            ("quot gf2 [x,y]/(x^2,xy,y^2)", "free 1"),
        ] {
            let r = ring(spec);
            let m = parse_module_spec(&r, Side::Right, modspec, &lim()).unwrap();
            let report = cross_check(&m, &lim()).unwrap();
            assert!(report.pass, "mismatches on {spec}: {:#?}", report.mismatches);
            assert!(report.checks_run > 2);
        }
    }

    #[test]
    fn cross_check_passes_on_left_modules() {
        let t = ring("tri 2 over gf 2 1");
        let m = Module::free(&t, 1, Side::Left, &lim()).unwrap();
        let report = cross_check(&m, &lim()).unwrap();
        assert!(report.pass, "{:#?}", report.mismatches);
    }

    #[test]
    fn oracle_bound_is_hard() {
        let z9 = ring("zmod 9");
        let m = Module::free(&z9, 2, Side::Right, &lim()).unwrap();
        assert!(matches!(
            cross_check(&m, &lim()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn hom_count_matches_dual_order_on_corpus_modules() {
        for spec in ["zmod 6", "zmod 8", "tri 2 over gf 2 1"] {
            let r = ring(spec);
            let m = Module::free(&r, 1, Side::Right, &lim()).unwrap();
            let cod = Module::free(&r, 1, Side::Right, &lim()).unwrap();
            let homs = hom_set(&Submodule::full(&m), &cod, &lim()).unwrap();
            let dual = dual_module(&m, &lim()).unwrap();
            assert_eq!(homs.len(), dual.order());
        }
    }
}
