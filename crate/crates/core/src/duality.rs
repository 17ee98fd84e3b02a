//! Dual modules and the perp calculus.
//!
//! The dual of a right module M = R^n/X is carried by the coordinate
//! vectors x in the free module R^n on the opposite side that kill every
//! relation generator; such an x acts on a right element (r_1..r_n) as
//! the morphism r -> sum x_i r_i, and on a left element symmetrically
//! with the coordinates on the right. Storing morphisms as coordinate
//! vectors keeps the dual inside the ordinary submodule machinery, so
//! perps in both directions, closure, and the evaluation map into the
//! bidual are all computed by exhaustion over explicit element sets.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::module::{
    enumerate_submodules, enumerate_submodules_within, Module, ModuleElement, Side, Submodule,
};
use crate::ring::RingElement;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub struct DualModule {
    base: Arc<Module>,
    free: Arc<Module>,
    carrier: Submodule,
}

impl DualModule {
    pub fn base(&self) -> &Arc<Module> {
        &self.base
    }

    /// The ambient free module R^n on the side opposite to the base.
    pub fn free_module(&self) -> &Arc<Module> {
        &self.free
    }

    /// All valid coordinate vectors; the dual module's element set.
    pub fn carrier(&self) -> &Submodule {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.cardinality()
    }

    #[inline]
    pub(crate) fn eval_raw(&self, f: u64, m: u64) -> u32 {
        let ring = self.base.ring();
        let order = ring.order() as u64;
        let mut acc = 0u32;
        let (mut ff, mut mm) = (f, m);
        for _ in 0..self.base.rank() {
            let xc = (ff % order) as u32;
            let vc = (mm % order) as u32;
            let prod = match self.base.side() {
                Side::Right => ring.mul_idx(xc, vc),
                Side::Left => ring.mul_idx(vc, xc),
            };
            acc = ring.add_idx(acc, prod);
            ff /= order;
            mm /= order;
        }
        acc
    }

    /// Applies the morphism encoded by `f` to `m`. Representative choice
    /// does not matter because carrier vectors kill the relations.
    pub fn eval(&self, f: ModuleElement, m: ModuleElement) -> Result<RingElement> {
        if !self.carrier.contains_code(f.0) {
            return Err(Error::ModuleMismatch(
                "functional is not an element of this dual".into(),
            ));
        }
        if self.base.canon_code(m.0) != m.0 {
            return Err(Error::ModuleMismatch(
                "argument is not a canonical element of the base module".into(),
            ));
        }
        Ok(RingElement(self.eval_raw(f.0, m.0)))
    }

    /// All functionals vanishing on X; vanishing on the generators alone
    /// suffices, since a functional vanishing on a set vanishes on its
    /// span.
    pub fn perp_of_submodule(&self, x: &Submodule) -> Result<Submodule> {
        if !x.module().same_space(&self.base) {
            return Err(Error::ModuleMismatch(
                "perp of a submodule of a different module".into(),
            ));
        }
        let gens: &[u64] = if x.gen_codes().is_empty() {
            x.elem_codes()
        } else {
            x.gen_codes()
        };
        let elems: Vec<u64> = self
            .carrier
            .elem_codes()
            .iter()
            .copied()
            .filter(|&f| gens.iter().all(|&g| self.eval_raw(f, g) == 0))
            .collect();
        Ok(Submodule::from_closed_set(&self.free, elems.clone(), elems))
    }

    /// All base elements killed by every functional in Y.
    pub fn perp_of_dual_submodule(&self, y: &Submodule) -> Result<Submodule> {
        self.check_dual_submodule(y)?;
        let gens: &[u64] = if y.gen_codes().is_empty() {
            y.elem_codes()
        } else {
            y.gen_codes()
        };
        let elems: Vec<u64> = self
            .base
            .elems()
            .iter()
            .copied()
            .filter(|&m| gens.iter().all(|&f| self.eval_raw(f, m) == 0))
            .collect();
        Ok(Submodule::from_closed_set(&self.base, elems.clone(), elems))
    }

    fn check_dual_submodule(&self, y: &Submodule) -> Result<()> {
        if !y.module().same_space(&self.free) {
            return Err(Error::ModuleMismatch(
                "expected a submodule of the dual's ambient free module".into(),
            ));
        }
        if !y.subset_of(&self.carrier) {
            return Err(Error::ModuleMismatch(
                "submodule is not contained in the dual carrier".into(),
            ));
        }
        Ok(())
    }

    /// Finite-topology closure of Y, computed from the definition with
    /// the finite set S taken to be all of M: every functional that
    /// agrees with some member of Y everywhere. Over a finite base this
    /// is Y itself, which is exactly the claim that every submodule of
    /// the dual of a finitely generated module is closed; computing it
    /// literally keeps that contract checkable rather than assumed.
    pub fn closure(&self, y: &Submodule) -> Result<Submodule> {
        self.check_dual_submodule(y)?;
        let elems: Vec<u64> = self
            .carrier
            .elem_codes()
            .iter()
            .copied()
            .filter(|&f| {
                y.elem_codes().iter().any(|&g| {
                    self.base
                        .elems()
                        .iter()
                        .all(|&m| self.eval_raw(f, m) == self.eval_raw(g, m))
                })
            })
            .collect();
        Ok(Submodule::from_closed_set(&self.free, elems.clone(), elems))
    }

    /// Density of Y in the dual: perp(Y) = 0. Only meaningful under the
    /// hypothesis that the ring is PF (or the base is a vector space);
    /// over a finite base this must coincide with Y being the whole
    /// dual, and the coincidence is verified.
    pub fn is_dense(&self, y: &Submodule, ring_pf_confirmed: bool) -> Result<bool> {
        if !ring_pf_confirmed && !self.base.ring().is_field() {
            return Err(Error::Precondition(
                "density requires the ring to be PF (confirmed) or a field".into(),
            ));
        }
        let dense = self.perp_of_dual_submodule(y)?.is_zero();
        let coincides = y.cardinality() == self.carrier.cardinality();
        if dense != coincides {
            return Err(Error::Inconsistency(
                "density by zero perp disagrees with Y being the whole dual of a finite module"
                    .into(),
            ));
        }
        Ok(dense)
    }
}

/// Builds the dual of `base`. In debug builds every carrier vector is
/// exhaustively certified to act as a genuine R-linear map.
pub fn dual_module(base: &Arc<Module>, limits: &Limits) -> Result<Arc<DualModule>> {
    let free = Module::free_internal(base.ring(), base.rank(), base.side().opposite(), limits)?;
    let rel_gens: Vec<u64> = if base.rel_gens().is_empty() && base.rel_elems().len() > 1 {
        base.rel_elems().to_vec()
    } else {
        base.rel_gens().to_vec()
    };
    let dual_probe = DualModule {
        base: base.clone(),
        free: free.clone(),
        carrier: Submodule::zero(&free),
    };
    let mut elems = Vec::new();
    for (i, &f) in free.elems().iter().enumerate() {
        if i % 1024 == 0 {
            limits.check_deadline("computing a dual carrier")?;
        }
        if rel_gens.iter().all(|&g| dual_probe.eval_raw(f, g) == 0) {
            elems.push(f);
        }
    }
    let carrier = Submodule::from_closed_set(&free, elems.clone(), elems);
    let dual = DualModule {
        base: base.clone(),
        free,
        carrier,
    };
    #[cfg(debug_assertions)]
    if dual.carrier.cardinality() * base.order() * base.order() <= 1 << 16 {
        for &f in dual.carrier.elem_codes() {
            for &a in base.elems() {
                for &b in base.elems() {
                    let lhs = dual.eval_raw(f, base.add_codes(a, b));
                    let rhs = base
                        .ring()
                        .add_idx(dual.eval_raw(f, a), dual.eval_raw(f, b));
                    debug_assert_eq!(lhs, rhs, "carrier vector is not additive");
                }
                for r in base.ring().elements() {
                    let lhs = dual.eval_raw(f, base.act_code(a, r.0));
                    let fa = dual.eval_raw(f, a);
                    let rhs = match base.side() {
                        Side::Right => base.ring().mul_idx(fa, r.0),
                        Side::Left => base.ring().mul_idx(r.0, fa),
                    };
                    debug_assert_eq!(lhs, rhs, "carrier vector is not R-linear");
                }
            }
        }
    }
    Ok(Arc::new(dual))
}

/// All submodules of the dual, as submodules of the ambient free module
/// contained in the carrier.
pub fn enumerate_dual_submodules(dual: &DualModule, limits: &Limits) -> Result<Vec<Submodule>> {
    enumerate_submodules_within(dual.carrier(), limits)
}

/// ker Phi as a set: base elements killed by the whole dual. By
/// construction this equals the double perp of the zero submodule.
pub fn zero_double_perp(dual: &DualModule) -> Result<Submodule> {
    dual.perp_of_dual_submodule(dual.carrier())
}

/// The dual re-presented as a quotient of a free module, together with
/// the isomorphism onto the carrier. This is what lets `dual_module` be
/// applied twice.
pub struct DualPresentation {
    pub module: Arc<Module>,
    /// Carrier codes of the images of the presentation's basis vectors.
    pub carrier_gens: Vec<u64>,
    pub to_carrier: BTreeMap<u64, u64>,
    pub from_carrier: BTreeMap<u64, u64>,
}

pub fn present_dual(dual: &DualModule, limits: &Limits) -> Result<DualPresentation> {
    let mut gens = dual.carrier().minimal_generators(limits)?;
    if gens.is_empty() {
        gens.push(0);
    }
    let k = gens.len();
    let ring = dual.base().ring();
    let side = dual.free_module().side();
    let free_k = Module::free_internal(ring, k, side, limits)?;
    let image_of = |tuple: u64| -> u64 {
        let coords = free_k.decode(tuple);
        let mut acc = 0u64;
        for (&g, &r) in gens.iter().zip(&coords) {
            acc = dual
                .free_module()
                .add_codes(acc, dual.free_module().act_code(g, r));
        }
        acc
    };
    let mut kernel = Vec::new();
    for (i, &tuple) in free_k.elems().iter().enumerate() {
        if i % 1024 == 0 {
            limits.check_deadline("scanning a dual presentation kernel")?;
        }
        if image_of(tuple) == 0 {
            kernel.push(tuple);
        }
    }
    let module = Module::from_rel_data(ring, side, k, kernel.clone(), kernel, limits)?;
    let mut to_carrier = BTreeMap::new();
    let mut from_carrier = BTreeMap::new();
    for &rep in module.elems() {
        let img = image_of(rep);
        to_carrier.insert(rep, img);
        from_carrier.insert(img, rep);
    }
    if to_carrier.len() != dual.order() || from_carrier.len() != dual.order() {
        return Err(Error::Inconsistency(
            "dual presentation is not in bijection with the carrier".into(),
        ));
    }
    Ok(DualPresentation {
        module,
        carrier_gens: gens,
        to_carrier,
        from_carrier,
    })
}

/// The evaluation map m -> (f -> f(m)) from a module into the dual of its
/// dual, materialized as a table. Linearity is verified exhaustively at
/// construction; a violation is an implementation bug, not data.
pub struct EvaluationMap {
    pub base: Arc<Module>,
    pub dual: Arc<DualModule>,
    pub presentation: DualPresentation,
    pub bidual: Arc<DualModule>,
    /// base element -> bidual carrier code, aligned with `base.elements()`.
    pub table: Vec<(u64, u64)>,
    pub kernel: Submodule,
    pub injective: bool,
    pub surjective: bool,
}

impl EvaluationMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    pub fn image_of(&self, m: ModuleElement) -> Option<ModuleElement> {
        self.table
            .binary_search_by_key(&m.0, |&(b, _)| b)
            .ok()
            .map(|i| ModuleElement(self.table[i].1))
    }
}

pub fn evaluation_map(base: &Arc<Module>, limits: &Limits) -> Result<EvaluationMap> {
    let dual = dual_module(base, limits)?;
    let presentation = present_dual(&dual, limits)?;
    let bidual = dual_module(&presentation.module, limits)?;
    let free_k = bidual.free_module().clone();
    let mut table = Vec::with_capacity(base.order());
    for &m in base.elems() {
        let coords: Vec<u32> = presentation
            .carrier_gens
            .iter()
            .map(|&g| dual.eval_raw(g, m))
            .collect();
        let y = free_k.encode(&coords);
        if !bidual.carrier().contains_code(y) {
            return Err(Error::Inconsistency(
                "evaluation image escapes the bidual carrier".into(),
            ));
        }
        table.push((m, y));
    }
    let lookup = |m: u64| -> u64 {
        let i = table
            .binary_search_by_key(&m, |&(b, _)| b)
            .expect("table covers the base");
        table[i].1
    };
    for &(a, ya) in &table {
        limits.check_deadline("verifying evaluation-map linearity")?;
        for &(b, yb) in &table {
            if lookup(base.add_codes(a, b)) != free_k.add_codes(ya, yb) {
                return Err(Error::Inconsistency("evaluation map is not additive".into()));
            }
        }
        for r in base.ring().elements() {
            if lookup(base.act_code(a, r.0)) != free_k.act_code(ya, r.0) {
                return Err(Error::Inconsistency("evaluation map is not R-linear".into()));
            }
        }
    }
    let kernel_elems: Vec<u64> = table
        .iter()
        .filter_map(|&(m, y)| (y == 0).then_some(m))
        .collect();
    let kernel = Submodule::from_closed_set(base, kernel_elems.clone(), kernel_elems);
    let injective = kernel.is_zero();
    let surjective = base.order() / kernel.cardinality() == bidual.order();
    Ok(EvaluationMap {
        base: base.clone(),
        dual,
        presentation,
        bidual,
        table,
        kernel,
        injective,
        surjective,
    })
}

// --- law checking ---

#[derive(Debug, Clone, Serialize)]
pub struct LawCheck {
    pub name: String,
    pub instances: usize,
    pub violations: Vec<String>,
    /// Observations that are not violations (e.g. strict inclusions where
    /// no equality was claimed).
    pub notes: Vec<String>,
}

impl LawCheck {
    fn new(name: &str) -> LawCheck {
        LawCheck {
            name: name.to_string(),
            instances: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub module: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations.is_empty())
    }

    pub fn total_instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }
}

const VIOLATION_CAP: usize = 32;

fn record(check: &mut LawCheck, violated: bool, describe: impl FnOnce() -> String) {
    check.instances += 1;
    if violated && check.violations.len() < VIOLATION_CAP {
        check.violations.push(describe());
    }
}

fn sub_label(s: &Submodule) -> String {
    let labels = s.element_labels();
    if labels.len() <= 8 {
        format!("{{{}}}", labels.join(", "))
    } else {
        format!("{{{}, ... {} total}}", labels[..8].join(", "), labels.len())
    }
}

/// Unconditional Galois-connection laws for one module: antitonicity of
/// both perp maps, extensivity of the double perp, the triple-perp
/// collapse, the adjunction itself, and closedness of every dual
/// submodule. Violations are data, and they always indicate bugs: none
/// of these laws has hypotheses.
pub fn check_galois_laws(base: &Arc<Module>, limits: &Limits) -> Result<LawReport> {
    let dual = dual_module(base, limits)?;
    let xs = enumerate_submodules(base, limits)?;
    let ys = enumerate_dual_submodules(&dual, limits)?;
    let x_perp: Vec<Submodule> = xs
        .iter()
        .map(|x| dual.perp_of_submodule(x))
        .collect::<Result<_>>()?;
    let y_perp: Vec<Submodule> = ys
        .iter()
        .map(|y| dual.perp_of_dual_submodule(y))
        .collect::<Result<_>>()?;

    let mut antitone_x = LawCheck::new("perp_reverses_inclusions_of_submodules");
    let mut antitone_y = LawCheck::new("perp_reverses_inclusions_of_dual_submodules");
    let mut extensive_x = LawCheck::new("double_perp_contains_the_submodule");
    let mut extensive_y = LawCheck::new("double_perp_contains_the_dual_submodule");
    let mut triple_x = LawCheck::new("triple_perp_collapses_for_submodules");
    let mut triple_y = LawCheck::new("triple_perp_collapses_for_dual_submodules");
    let mut adjunction = LawCheck::new("adjunction_y_kills_x_iff_x_killed_by_y");
    let mut closed = LawCheck::new("every_dual_submodule_is_closed");

    for (i, xi) in xs.iter().enumerate() {
        limits.check_deadline("checking Galois laws")?;
        for (j, xj) in xs.iter().enumerate() {
            if i != j && xi.subset_of(xj) {
                record(&mut antitone_x, !x_perp[j].subset_of(&x_perp[i]), || {
                    format!("X1 = {}, X2 = {}", sub_label(xi), sub_label(xj))
                });
            }
        }
        let dp = dual.perp_of_dual_submodule(&x_perp[i])?;
        record(&mut extensive_x, !xi.subset_of(&dp), || {
            format!("X = {}", sub_label(xi))
        });
        let tp = dual.perp_of_submodule(&dp)?;
        record(&mut triple_x, tp != x_perp[i], || {
            format!("X = {}", sub_label(xi))
        });
    }
    for (i, yi) in ys.iter().enumerate() {
        limits.check_deadline("checking Galois laws")?;
        for (j, yj) in ys.iter().enumerate() {
            if i != j && yi.subset_of(yj) {
                record(&mut antitone_y, !y_perp[j].subset_of(&y_perp[i]), || {
                    format!("Y1 = {}, Y2 = {}", sub_label(yi), sub_label(yj))
                });
            }
        }
        let dp = dual.perp_of_submodule(&y_perp[i])?;
        record(&mut extensive_y, !yi.subset_of(&dp), || {
            format!("Y = {}", sub_label(yi))
        });
        let tp = dual.perp_of_dual_submodule(&dp)?;
        record(&mut triple_y, tp != y_perp[i], || {
            format!("Y = {}", sub_label(yi))
        });
        let cl = dual.closure(yi)?;
        record(&mut closed, cl != *yi, || format!("Y = {}", sub_label(yi)));
    }
    for (i, xi) in xs.iter().enumerate() {
        for (j, yj) in ys.iter().enumerate() {
            let lhs = yj.subset_of(&x_perp[i]);
            let rhs = xi.subset_of(&y_perp[j]);
            record(&mut adjunction, lhs != rhs, || {
                format!("X = {}, Y = {}", sub_label(xi), sub_label(yj))
            });
        }
    }

    Ok(LawReport {
        module: base.describe(),
        checks: vec![
            antitone_x,
            antitone_y,
            extensive_x,
            extensive_y,
            triple_x,
            triple_y,
            adjunction,
            closed,
        ],
    })
}

/// All unordered pairs, the canonical finite families for the
/// sum/intersection laws.
pub fn all_pair_families(subs: &[Submodule]) -> Vec<Vec<Submodule>> {
    let mut out = Vec::new();
    for i in 0..subs.len() {
        for j in i..subs.len() {
            out.push(vec![subs[i].clone(), subs[j].clone()]);
        }
    }
    out
}

/// Sum/intersection laws. The sum-perp identity and the containment half
/// of the intersection-perp law are unconditional; the equality half of
/// the intersection-perp law is asserted only under the stated
/// hypothesis (self-injectivity on the module's side for families of
/// submodules, PF on both sides for families of closed dual submodules).
/// When the hypothesis is absent, strict inclusions are recorded as
/// notes, not violations.
pub fn check_sum_intersect_laws(
    base: &Arc<Module>,
    x_families: &[Vec<Submodule>],
    y_families: &[Vec<Submodule>],
    assume_self_injective: bool,
    assume_pf_both: bool,
    limits: &Limits,
) -> Result<LawReport> {
    let dual = dual_module(base, limits)?;
    let mut sum_perp = LawCheck::new("perp_of_sum_is_intersection_of_perps");
    let mut inter_contains = LawCheck::new("perp_of_intersection_contains_sum_of_perps");
    let mut inter_eq =
        LawCheck::new("perp_of_intersection_equals_sum_of_perps_when_self_injective");
    let mut dual_sum_perp = LawCheck::new("perp_of_dual_sum_is_intersection_of_perps");
    let mut dual_inter_contains =
        LawCheck::new("perp_of_dual_intersection_contains_sum_of_perps");
    let mut dual_inter_eq =
        LawCheck::new("perp_of_closed_dual_intersection_equals_sum_of_perps_when_pf");

    for family in x_families {
        limits.check_deadline("checking sum/intersection laws")?;
        let refs: Vec<&Submodule> = family.iter().collect();
        let perps: Vec<Submodule> = family
            .iter()
            .map(|x| dual.perp_of_submodule(x))
            .collect::<Result<_>>()?;
        let perp_refs: Vec<&Submodule> = perps.iter().collect();

        let lhs = dual.perp_of_submodule(&Submodule::sum(&refs, limits)?)?;
        let rhs = Submodule::intersect(&perp_refs)?;
        record(&mut sum_perp, lhs != rhs, || {
            format!("family of {} submodules", family.len())
        });

        let lhs = dual.perp_of_submodule(&Submodule::intersect(&refs)?)?;
        let rhs = Submodule::sum(&perp_refs, limits)?;
        record(&mut inter_contains, !rhs.subset_of(&lhs), || {
            format!("family of {} submodules", family.len())
        });
        if assume_self_injective {
            record(&mut inter_eq, lhs != rhs, || {
                let labels: Vec<String> = family.iter().map(sub_label).collect();
                format!("family [{}]", labels.join("; "))
            });
        } else if lhs != rhs && inter_eq.notes.len() < VIOLATION_CAP {
            let labels: Vec<String> = family.iter().map(sub_label).collect();
            inter_eq.notes.push(format!(
                "strict inclusion without the self-injectivity hypothesis: family [{}]",
                labels.join("; ")
            ));
        }
    }

    for family in y_families {
        limits.check_deadline("checking sum/intersection laws")?;
        let refs: Vec<&Submodule> = family.iter().collect();
        let perps: Vec<Submodule> = family
            .iter()
            .map(|y| dual.perp_of_dual_submodule(y))
            .collect::<Result<_>>()?;
        let perp_refs: Vec<&Submodule> = perps.iter().collect();

        let lhs = dual.perp_of_dual_submodule(&Submodule::sum(&refs, limits)?)?;
        let rhs = Submodule::intersect(&perp_refs)?;
        record(&mut dual_sum_perp, lhs != rhs, || {
            format!("family of {} dual submodules", family.len())
        });

        let closed = family
            .iter()
            .map(|y| Ok(dual.closure(y)? == *y))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        let lhs = dual.perp_of_dual_submodule(&Submodule::intersect(&refs)?)?;
        let rhs = Submodule::sum(&perp_refs, limits)?;
        record(&mut dual_inter_contains, !rhs.subset_of(&lhs), || {
            format!("family of {} dual submodules", family.len())
        });
        if assume_pf_both && closed {
            record(&mut dual_inter_eq, lhs != rhs, || {
                let labels: Vec<String> = family.iter().map(sub_label).collect();
                format!("family [{}]", labels.join("; "))
            });
        } else if lhs != rhs && dual_inter_eq.notes.len() < VIOLATION_CAP {
            let labels: Vec<String> = family.iter().map(sub_label).collect();
            dual_inter_eq.notes.push(format!(
                "strict inclusion without the PF hypothesis: family [{}]",
                labels.join("; ")
            ));
        }
    }

    Ok(LawReport {
        module: base.describe(),
        checks: vec![
            sum_perp,
            inter_contains,
            inter_eq,
            dual_sum_perp,
            dual_inter_contains,
            dual_inter_eq,
        ],
    })
}
