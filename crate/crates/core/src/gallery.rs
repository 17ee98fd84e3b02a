//! Exact truncated reproduction of three infinite-dimensional
//! counterexamples over a vector space with countable basis (e_n).
//!
//! Vectors have finite support; the dual slice in play is the class of
//! eventually-constant functionals (finite prefix plus a constant tail),
//! the smallest class containing every coordinate functional e_n* and
//! the all-ones functional. Each catalog family knows, for any
//! truncation, the exact finite generator list whose restriction governs
//! vectors supported below the truncation, so perps are exact finite
//! linear algebra, not approximations; the per-family horizon rules are
//! spelled out at the point of use and certified against blind dense row
//! reduction. The catalog is closed: no sound general horizon exists for
//! arbitrary user-defined infinite families.

use crate::error::{Error, Result};
use crate::ring::spec::{is_prime, mod_inverse};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if !is_prime(p) {
            return Err(Error::Semantic(format!(
                "gallery field characteristic must be prime, got {p}"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        mod_inverse(a % self.p, self.p).expect("nonzero element of a prime field")
    }
}

/// A vector with finite support: only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinSuppVector {
    coeffs: BTreeMap<usize, u64>,
}

impl FinSuppVector {
    pub fn zero() -> FinSuppVector {
        FinSuppVector::default()
    }

    pub fn basis(i: usize) -> FinSuppVector {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, 1);
        FinSuppVector { coeffs }
    }

    pub fn from_dense(row: &[u64]) -> FinSuppVector {
        let coeffs = row
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| (c != 0).then_some((i, c)))
            .collect();
        FinSuppVector { coeffs }
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&i, &c)| {
                if c == 1 {
                    format!("e{i}")
                } else {
                    format!("{c}e{i}")
                }
            })
            .collect();
        parts.join("+")
    }
}

/// An eventually-constant functional: explicit coefficients on a finite
/// prefix, one constant value everywhere after. Canonical form carries
/// no trailing prefix entries equal to the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvTailFunctional {
    prefix: Vec<u64>,
    tail: u64,
}

impl EvTailFunctional {
    pub fn new(mut prefix: Vec<u64>, tail: u64, field: &PrimeField) -> EvTailFunctional {
        for c in prefix.iter_mut() {
            *c %= field.p;
        }
        let tail = tail % field.p;
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        EvTailFunctional { prefix, tail }
    }

    /// e_k*: one at index k, zero elsewhere.
    pub fn dual_basis(k: usize, field: &PrimeField) -> EvTailFunctional {
        let mut prefix = vec![0; k + 1];
        prefix[k] = 1;
        EvTailFunctional::new(prefix, 0, field)
    }

    /// The functional equal to one on every basis vector.
    pub fn all_ones(field: &PrimeField) -> EvTailFunctional {
        EvTailFunctional::new(Vec::new(), 1, field)
    }

    /// e_n* + e_{n+1}* + ... + e_{n+width}*.
    pub fn window(n: usize, width: usize, field: &PrimeField) -> EvTailFunctional {
        let mut prefix = vec![0; n + width + 1];
        for slot in prefix.iter_mut().skip(n) {
            *slot = 1;
        }
        EvTailFunctional::new(prefix, 0, field)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    pub fn tail(&self) -> u64 {
        self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail == 0
    }

    pub fn has_finite_support(&self) -> bool {
        self.tail == 0
    }

    /// The pairing: a finite sum over the vector's support.
    pub fn eval(&self, v: &FinSuppVector, field: &PrimeField) -> u64 {
        let mut acc = 0;
        for (&i, &c) in &v.coeffs {
            acc = field.add(acc, field.mul(self.coeff(i), c));
        }
        acc
    }

    pub fn restrict(&self, horizon: usize) -> Vec<u64> {
        (0..horizon).map(|i| self.coeff(i)).collect()
    }

    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.tail == 0 {
            let parts: Vec<String> = self
                .prefix
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| {
                    if c == 1 {
                        format!("e{i}*")
                    } else {
                        format!("{c}e{i}*")
                    }
                })
                .collect();
            parts.join("+")
        } else {
            let prefix: Vec<String> = self.prefix.iter().map(|c| c.to_string()).collect();
            format!("({} | tail {})", prefix.join(","), self.tail)
        }
    }
}

/// The closed catalog of infinite generator families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalFamily {
    /// {e_k* : k < n} — the perp of the span of the basis vectors from
    /// index n on; one stage of the descending chain.
    PerpChainStage { n: usize },
    /// The union of all the stages: {e_k* : k in N} viewed as the sum of
    /// the chain of stage perps. Membership means lying in some finite
    /// stage.
    PerpChainSum,
    /// {e_k* : k >= start}. start = 0 is the full dual-basis family;
    /// start = 1 is its intersection with the all-ones-augmented family.
    DualBasisFrom { start: usize },
    /// {all-ones} together with {e_k* : k >= 1}.
    AllOnesAugmented,
    /// {e_n* + ... + e_{n+width}* : n in N}, sliding window sums.
    WindowSums { width: usize },
}

impl FunctionalFamily {
    pub fn name(&self) -> String {
        match self {
            FunctionalFamily::PerpChainStage { n } => format!("stage_duals_below_{n}"),
            FunctionalFamily::PerpChainSum => "union_of_stage_perps".to_string(),
            FunctionalFamily::DualBasisFrom { start } => format!("duals_from_{start}"),
            FunctionalFamily::AllOnesAugmented => "all_ones_augmented".to_string(),
            FunctionalFamily::WindowSums { width } => format!("window_sums_width_{width}"),
        }
    }

    /// The generators whose restriction to [0, horizon) can be nonzero
    /// on a vector supported there, restricted to that window. For
    /// vectors of support below the horizon these rows carry the entire
    /// constraint system, which is what makes the truncated perp exact.
    pub fn truncated_rows(&self, horizon: usize, field: &PrimeField) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        match self {
            FunctionalFamily::PerpChainStage { n } => {
                for k in 0..(*n).min(horizon) {
                    rows.push(EvTailFunctional::dual_basis(k, field).restrict(horizon));
                }
            }
            FunctionalFamily::PerpChainSum => {
                for k in 0..horizon {
                    rows.push(EvTailFunctional::dual_basis(k, field).restrict(horizon));
                }
            }
            FunctionalFamily::DualBasisFrom { start } => {
                for k in *start..horizon {
                    rows.push(EvTailFunctional::dual_basis(k, field).restrict(horizon));
                }
            }
            FunctionalFamily::AllOnesAugmented => {
                rows.push(EvTailFunctional::all_ones(field).restrict(horizon));
                for k in 1..horizon {
                    rows.push(EvTailFunctional::dual_basis(k, field).restrict(horizon));
                }
            }
            FunctionalFamily::WindowSums { width } => {
                // every window starting below the horizon meets [0, horizon),
                // including the partially visible ones
                for n in 0..horizon {
                    let mut row = vec![0; horizon];
                    for slot in row.iter_mut().skip(n).take(width + 1) {
                        *slot = 1;
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Exact basis of the perp among vectors supported below `bound`.
    ///
    /// Solved in closed form per kind; generators not touching the
    /// window vanish on such vectors automatically, so the computed
    /// space is the true perp intersected with the support window, not a
    /// truncation artifact. The closed forms are certified against dense
    /// row reduction by [`dense_truncation_perp`].
    pub fn perp_basis(&self, bound: usize, _field: &PrimeField) -> Vec<FinSuppVector> {
        match self {
            // constraints kill coordinates 0..n; the rest are free
            FunctionalFamily::PerpChainStage { n } => ((*n).min(bound)..bound)
                .map(FinSuppVector::basis)
                .collect(),
            // every coordinate functional is present: only zero remains
            FunctionalFamily::PerpChainSum => Vec::new(),
            // coordinates below `start` are unconstrained
            FunctionalFamily::DualBasisFrom { start } => {
                (0..(*start).min(bound)).map(FinSuppVector::basis).collect()
            }
            // e_k* for k >= 1 force v_k = 0, then the all-ones row forces
            // v_0 = 0
            FunctionalFamily::AllOnesAugmented => Vec::new(),
            // the window starting at bound-1 forces v_{bound-1} = 0, and
            // descending windows force each earlier coordinate in turn
            FunctionalFamily::WindowSums { .. } => Vec::new(),
        }
    }

    /// Generator restrictions usable for membership questions at a
    /// horizon: only generators fully determined below the horizon (for
    /// window sums, windows ending inside it). A finite combination
    /// equal to a functional supported below the horizon can only use
    /// such generators — the right end of its top window would otherwise
    /// survive into the support — so membership of finite-support
    /// functionals is decided exactly by these rows.
    fn membership_rows(&self, horizon: usize, field: &PrimeField) -> Vec<Vec<u64>> {
        match self {
            FunctionalFamily::WindowSums { width } => (0..horizon.saturating_sub(*width))
                .map(|n| {
                    let mut row = vec![0; horizon];
                    for slot in row.iter_mut().skip(n).take(width + 1) {
                        *slot = 1;
                    }
                    row
                })
                .collect(),
            _ => self.truncated_rows(horizon, field),
        }
    }

    /// Exact membership of an eventually-constant functional in the span
    /// of the family, by the kind-specific finite criterion, certified
    /// against truncated row reduction at horizons up to three times the
    /// prefix length.
    pub fn contains(&self, f: &EvTailFunctional, field: &PrimeField) -> Result<Membership> {
        let l = f.prefix_len();
        let (member, criterion) = if f.is_zero() {
            (true, "the zero functional lies in every span".to_string())
        } else {
            match self {
                FunctionalFamily::PerpChainStage { n } => {
                    let ok = f.has_finite_support() && (*n..l).all(|k| f.coeff(k) == 0);
                    (
                        ok,
                        format!("finite support contained in the first {n} coordinates"),
                    )
                }
                FunctionalFamily::PerpChainSum => {
                    let ok = f.has_finite_support();
                    let why = if ok {
                        format!("lies in the stage of size {l} (its prefix length)")
                    } else {
                        "a nonzero tail meets every stage's forbidden coordinates".to_string()
                    };
                    (ok, why)
                }
                FunctionalFamily::DualBasisFrom { start } => {
                    let ok = f.has_finite_support() && (0..*start).all(|k| f.coeff(k) == 0);
                    (
                        ok,
                        format!("finite support avoiding the first {start} coordinates"),
                    )
                }
                FunctionalFamily::AllOnesAugmented => {
                    let ok = f.coeff(0) == f.tail();
                    (
                        ok,
                        "after subtracting tail times the all-ones generator, the coefficient at index 0 must vanish"
                            .to_string(),
                    )
                }
                FunctionalFamily::WindowSums { width } => {
                    // a finite combination of windows keeps its last
                    // window's right end visible, so support below l only
                    // admits windows ending below l
                    let ok = if !f.has_finite_support() {
                        false
                    } else if l == 0 {
                        true
                    } else {
                        let rows: Vec<Vec<u64>> = (0..l.saturating_sub(*width))
                            .map(|n| {
                                let mut row = vec![0; l];
                                for slot in row.iter_mut().skip(n).take(width + 1) {
                                    *slot = 1;
                                }
                                row
                            })
                            .collect();
                        in_rowspan(&rows, &f.restrict(l), field)
                    };
                    (
                        ok,
                        format!(
                            "row reduction over the windows ending below the prefix length {l}"
                        ),
                    )
                }
            }
        };

        let mut horizons = vec![(2 * l).max(8), (3 * l).max(12)];
        horizons.dedup();
        let mut truncation_refutes = false;
        for &h in &horizons {
            let rows = self.membership_rows(h, field);
            let truncated = in_rowspan(&rows, &f.restrict(h), field);
            if member && !truncated {
                return Err(Error::Inconsistency(format!(
                    "membership criterion for {} accepted a functional its truncation rejects",
                    self.name()
                )));
            }
            if !member && !truncated {
                truncation_refutes = true;
            }
        }
        Ok(Membership {
            member,
            criterion,
            truncation_refutes,
            truncation_blind: !member && !truncation_refutes,
            certified_horizons: horizons,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    pub criterion: String,
    /// The finite systems already rule the functional out.
    pub truncation_refutes: bool,
    /// Every truncated system admits the restriction even though exact
    /// membership fails; only the tail criterion sees the difference.
    pub truncation_blind: bool,
    pub certified_horizons: Vec<usize>,
}

// --- small exact linear algebra over GF(p) ---

/// Row reduction to reduced echelon form; returns pivot columns. Zero
/// rows are dropped.
pub(crate) fn rref(rows: &mut Vec<Vec<u64>>, field: &PrimeField) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = field.inv(rows[rank][col]);
        for c in col..width {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..width {
                    let sub = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Basis of {v : Rv = 0} with one basis vector per free column.
pub(crate) fn nullspace(rows: &[Vec<u64>], width: usize, field: &PrimeField) -> Vec<Vec<u64>> {
    let mut reduced: Vec<Vec<u64>> = rows.to_vec();
    let pivots = rref(&mut reduced, field);
    let mut basis = Vec::new();
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0; width];
        v[free] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(reduced[r][free]);
        }
        basis.push(v);
    }
    basis
}

pub(crate) fn in_rowspan(rows: &[Vec<u64>], target: &[u64], field: &PrimeField) -> bool {
    if target.iter().all(|&c| c == 0) {
        return true;
    }
    let mut reduced: Vec<Vec<u64>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    if reduced.is_empty() {
        return false;
    }
    let before = {
        let mut m = reduced.clone();
        rref(&mut m, field).len()
    };
    reduced.push(target.to_vec());
    let after = rref(&mut reduced, field).len();
    before == after
}

fn span_equal(a: &[Vec<u64>], b: &[Vec<u64>], width: usize, field: &PrimeField) -> bool {
    let mut ra: Vec<Vec<u64>> = a.iter().filter(|r| r.len() == width).cloned().collect();
    let mut rb: Vec<Vec<u64>> = b.iter().filter(|r| r.len() == width).cloned().collect();
    rref(&mut ra, field);
    rref(&mut rb, field);
    ra == rb
}

/// The independent route: blind dense row reduction of every truncated
/// generator, nullspace as the perp.
pub fn dense_truncation_perp(
    fam: &FunctionalFamily,
    horizon: usize,
    field: &PrimeField,
) -> Vec<Vec<u64>> {
    let rows = fam.truncated_rows(horizon, field);
    nullspace(&rows, horizon, field)
}

/// The closure-style density probe: for each small finite set S of basis
/// indices and each probe functional, some finite combination of the
/// family's generators agrees with the probe on S. Families with zero
/// perp are dense, so this must succeed for them.
pub fn density_probe(
    fam: &FunctionalFamily,
    probes: &[EvTailFunctional],
    index_bound: usize,
    max_set: usize,
    field: &PrimeField,
) -> bool {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for len in 1..=max_set {
        for start in 0..index_bound.saturating_sub(len - 1) {
            sets.push((start..start + len).collect());
        }
        for stride in 2..=3 {
            let s: Vec<usize> = (0..len).map(|i| i * stride).collect();
            if s.last().copied().unwrap_or(0) < index_bound {
                sets.push(s);
            }
        }
    }
    sets.sort();
    sets.dedup();
    for s in &sets {
        let horizon = s.iter().max().unwrap() + 1;
        let rows_full = fam.truncated_rows(horizon, field);
        let rows: Vec<Vec<u64>> = rows_full
            .iter()
            .map(|r| s.iter().map(|&i| r[i]).collect())
            .collect();
        for f in probes {
            let target: Vec<u64> = s.iter().map(|&i| f.coeff(i)).collect();
            if !in_rowspan(&rows, &target, field) {
                return false;
            }
        }
    }
    true
}

// --- the three worked examples ---

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExampleId {
    I,
    II,
    III,
}

impl ExampleId {
    pub fn parse(text: &str) -> Result<ExampleId> {
        match text {
            "i" | "I" | "1" => Ok(ExampleId::I),
            "ii" | "II" | "2" => Ok(ExampleId::II),
            "iii" | "III" | "3" => Ok(ExampleId::III),
            other => Err(Error::Precondition(format!(
                "unknown gallery example {other:?} (expected i, ii or iii)"
            ))),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            ExampleId::I => "i",
            ExampleId::II => "ii",
            ExampleId::III => "iii",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GalleryParams {
    pub field_p: u64,
    pub truncations: Vec<usize>,
    pub p_max: usize,
}

impl Default for GalleryParams {
    fn default() -> Self {
        GalleryParams {
            field_p: 2,
            truncations: vec![8, 16, 32],
            p_max: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryItem {
    pub name: String,
    pub verdict: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryReport {
    pub example: String,
    pub title: String,
    pub field_p: u64,
    pub truncations: Vec<usize>,
    pub p_max: Option<usize>,
    pub items: Vec<GalleryItem>,
    pub notes: Vec<String>,
    pub pass: bool,
}

fn item(items: &mut Vec<GalleryItem>, name: String, verdict: bool, detail: String) {
    items.push(GalleryItem {
        name,
        verdict,
        detail,
    });
}

pub fn run_example(which: ExampleId, params: &GalleryParams) -> Result<GalleryReport> {
    let field = PrimeField::new(params.field_p)?;
    if params.truncations.is_empty() || params.truncations.iter().any(|&m| !(4..=4096).contains(&m))
    {
        return Err(Error::Precondition(
            "gallery truncations must lie in 4..=4096".into(),
        ));
    }
    match which {
        ExampleId::I => run_example_i(&field, params),
        ExampleId::II => run_example_ii(&field, params),
        ExampleId::III => run_example_iii(&field, params),
    }
}

fn run_example_i(field: &PrimeField, params: &GalleryParams) -> Result<GalleryReport> {
    let mut items = Vec::new();
    let max_bound = *params.truncations.iter().max().unwrap();

    for &m in &params.truncations {
        // descending tail subspaces: intersect the stages visible below m
        let mut surviving: Vec<usize> = (0..m).collect();
        for n in 0..=m {
            surviving.retain(|&k| k >= n);
        }
        item(
            &mut items,
            format!("chain_intersection_trivial_within_{m}"),
            surviving.is_empty(),
            format!(
                "intersecting the tail subspaces down to stage {m} leaves no vector of support below {m}, so the perp of the intersection is the whole dual"
            ),
        );
    }

    let all_ones = EvTailFunctional::all_ones(field);
    let membership = FunctionalFamily::PerpChainSum.contains(&all_ones, field)?;
    let refutations: Vec<String> = (0..max_bound.min(8))
        .map(|n| {
            let v = FinSuppVector::basis(n);
            format!("f(e{n}) = {}", all_ones.eval(&v, field))
        })
        .collect();
    item(
        &mut items,
        "all_ones_outside_every_stage_perp".to_string(),
        !membership.member,
        format!(
            "membership in the union means lying in one stage, but the all-ones functional evaluates to 1 on every basis vector: {}",
            refutations.join(", ")
        ),
    );
    item(
        &mut items,
        "naive_truncation_cannot_refute_the_witness".to_string(),
        membership.truncation_blind,
        format!(
            "restricted to any horizon ({:?} certified) the all-ones row lies in the span of the truncated generators; only the tail criterion separates them",
            membership.certified_horizons
        ),
    );
    item(
        &mut items,
        "strict_inclusion_confirmed".to_string(),
        !membership.member,
        "the sum of the stage perps omits the all-ones functional while the perp of the trivial intersection is everything".to_string(),
    );

    let pass = items.iter().all(|i| i.verdict);
    Ok(GalleryReport {
        example: ExampleId::I.tag().to_string(),
        title: "perp of an infinite intersection strictly exceeds the sum of perps".to_string(),
        field_p: field.p,
        truncations: params.truncations.clone(),
        p_max: None,
        items,
        notes: Vec::new(),
        pass,
    })
}

fn run_example_ii(field: &PrimeField, params: &GalleryParams) -> Result<GalleryReport> {
    let mut items = Vec::new();
    let h = FunctionalFamily::DualBasisFrom { start: 0 };
    let l = FunctionalFamily::AllOnesAugmented;
    let hl = FunctionalFamily::DualBasisFrom { start: 1 };

    // identify the intersection of the two families
    let f_star = EvTailFunctional::all_ones(field);
    let e0 = EvTailFunctional::dual_basis(0, field);
    let mut ident = !h.contains(&f_star, field)?.member
        && l.contains(&f_star, field)?.member
        && h.contains(&e0, field)?.member
        && !l.contains(&e0, field)?.member;
    for k in 1..8 {
        let ek = EvTailFunctional::dual_basis(k, field);
        ident &= h.contains(&ek, field)?.member && l.contains(&ek, field)?.member;
    }
    item(
        &mut items,
        "intersection_of_the_families_is_duals_from_1".to_string(),
        ident,
        "the all-ones generator escapes the dual-basis family, e0* escapes the augmented family, and every e_k* with k >= 1 lies in both".to_string(),
    );

    for &m in &params.truncations {
        let h_perp = h.perp_basis(m, field);
        item(
            &mut items,
            format!("h_perp_zero_at_{m}"),
            h_perp.is_empty(),
            "every coordinate functional is a generator, so only the zero vector survives"
                .to_string(),
        );
        let l_perp = l.perp_basis(m, field);
        item(
            &mut items,
            format!("l_perp_zero_at_{m}"),
            l_perp.is_empty(),
            "coordinates from index 1 are forced to zero and the all-ones row then kills index 0"
                .to_string(),
        );
        let hl_perp = hl.perp_basis(m, field);
        let expected = vec![FinSuppVector::basis(0)];
        item(
            &mut items,
            format!("intersection_perp_is_span_e0_at_{m}"),
            hl_perp == expected,
            format!(
                "perp basis {{{}}}",
                hl_perp
                    .iter()
                    .map(|v| v.label())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        for (fam, label) in [(&h, "h"), (&l, "l"), (&hl, "intersection")] {
            let analytic: Vec<Vec<u64>> = fam
                .perp_basis(m, field)
                .iter()
                .map(|v| (0..m).map(|i| v.coeff(i)).collect())
                .collect();
            let oracle = dense_truncation_perp(fam, m, field);
            item(
                &mut items,
                format!("{label}_perp_matches_dense_row_reduction_at_{m}"),
                span_equal(&analytic, &oracle, m, field),
                format!(
                    "closed-form solution agrees with the nullspace of all {} truncated generator rows",
                    fam.truncated_rows(m, field).len()
                ),
            );
        }
        item(
            &mut items,
            format!("sum_of_perps_differs_from_perp_of_intersection_at_{m}"),
            h_perp.is_empty() && l_perp.is_empty() && hl_perp == expected,
            "the sum of the two zero perps cannot reach the span of e0".to_string(),
        );
    }

    let pass = items.iter().all(|i| i.verdict);
    Ok(GalleryReport {
        example: ExampleId::II.tag().to_string(),
        title: "perp of an intersection of non-closed subspaces exceeds the sum of perps"
            .to_string(),
        field_p: field.p,
        truncations: params.truncations.clone(),
        p_max: None,
        items,
        notes: Vec::new(),
        pass,
    })
}

fn run_example_iii(field: &PrimeField, params: &GalleryParams) -> Result<GalleryReport> {
    let mut items = Vec::new();
    let bound = *params.truncations.iter().max().unwrap();

    for w in 0..=params.p_max {
        let fam = FunctionalFamily::WindowSums { width: w };
        let perp = fam.perp_basis(bound, field);
        item(
            &mut items,
            format!("window_family_width_{w}_perp_zero"),
            perp.is_empty(),
            format!(
                "the window ending at {b} forces the top coordinate and back-substitution clears the rest (support bound {b})",
                b = bound
            ),
        );
        let analytic: Vec<Vec<u64>> = Vec::new();
        let oracle = dense_truncation_perp(&fam, bound, field);
        item(
            &mut items,
            format!("window_family_width_{w}_matches_dense_row_reduction"),
            span_equal(&analytic, &oracle, bound, field),
            format!("nullspace of {bound} truncated window rows is trivial"),
        );
    }

    // density probes: families with zero perp agree with any functional
    // on small finite sets
    let probe_fns = [
        EvTailFunctional::dual_basis(0, field),
        EvTailFunctional::all_ones(field),
        EvTailFunctional::new(vec![1, 0, 1], 0, field),
    ];
    for w in 0..=params.p_max.min(3) {
        let fam = FunctionalFamily::WindowSums { width: w };
        item(
            &mut items,
            format!("window_family_width_{w}_passes_density_probe"),
            density_probe(&fam, &probe_fns, 8, 6, field),
            "finite combinations of windows match every probe functional on every sampled finite set".to_string(),
        );
    }

    // nonzero finite-support functionals escape wide-enough window
    // families, so the intersection of all of them is zero
    let e01 = EvTailFunctional::new(vec![1, 1], 0, field);
    let probes = [
        ("e0", EvTailFunctional::dual_basis(0, field)),
        ("e0_plus_e1", e01),
    ];
    for (slug, probe) in &probes {
        let mut refuting = None;
        let mut in_first = false;
        for w in 0..=params.p_max {
            let fam = FunctionalFamily::WindowSums { width: w };
            let mem = fam.contains(probe, field)?;
            if w == 0 {
                in_first = mem.member;
            }
            if !mem.member {
                refuting = Some((w, mem));
                break;
            }
        }
        let (w, mem) = refuting.ok_or_else(|| {
            Error::Inconsistency(format!(
                "probe {slug} was not refuted by any window family up to width {}",
                params.p_max
            ))
        })?;
        item(
            &mut items,
            format!("probe_{slug}_escapes_the_window_family_of_width_{w}"),
            in_first && mem.truncation_refutes,
            format!(
                "{} lies in the width-0 family but no window ends inside its prefix at width {w}: membership in the intersection of all window families is refuted",
                probe.label()
            ),
        );
    }

    let notes = vec![
        "a zero perp certifies density: the closure of each window family in the finite topology is the whole dual space".to_string(),
        "a proper dense subspace is never closed, and the escaping probes above show each window family of positive width is proper".to_string(),
    ];
    let pass = items.iter().all(|i| i.verdict);
    Ok(GalleryReport {
        example: ExampleId::III.tag().to_string(),
        title: "a family of dense subspaces of the dual with zero intersection".to_string(),
        field_p: field.p,
        truncations: params.truncations.clone(),
        p_max: Some(params.p_max),
        items,
        notes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = gf2();
        let all_ones = EvTailFunctional::all_ones(&f);
        assert_eq!(all_ones.eval(&FinSuppVector::basis(3), &f), 1);
        let e2 = EvTailFunctional::dual_basis(2, &f);
        assert_eq!(e2.eval(&FinSuppVector::basis(3), &f), 0);
        // (e0* + e1*)(e0 + e1) = 0 over GF(2)
        let f01 = EvTailFunctional::new(vec![1, 1], 0, &f);
        let v01 = FinSuppVector::from_dense(&[1, 1]);
        assert_eq!(f01.eval(&v01, &f), 0);
    }

    #[test]
    fn functional_canonical_form() {
        let f = gf2();
        let g = EvTailFunctional::new(vec![1, 1, 1], 1, &f);
        assert_eq!(g.prefix_len(), 0);
        assert_eq!(g.tail(), 1);
        assert_eq!(g, EvTailFunctional::all_ones(&f));
        let w = EvTailFunctional::window(2, 1, &f);
        assert_eq!(w.restrict(5), vec![0, 0, 1, 1, 0]);
    }

    #[test]
    fn eval_is_bilinear() {
        let f = PrimeField::new(3).unwrap();
        let g1 = EvTailFunctional::new(vec![1, 2, 0, 1], 2, &f);
        let g2 = EvTailFunctional::new(vec![0, 1], 1, &f);
        let v1 = FinSuppVector::from_dense(&[2, 1, 0, 0, 1]);
        let v2 = FinSuppVector::from_dense(&[0, 2, 2]);
        // additive in the vector argument
        let sum = FinSuppVector::from_dense(
            &(0..5)
                .map(|i| f.add(v1.coeff(i), v2.coeff(i)))
                .collect::<Vec<_>>(),
        );
        assert_eq!(g1.eval(&sum, &f), f.add(g1.eval(&v1, &f), g1.eval(&v2, &f)));
        // additive in the functional argument
        let both: Vec<u64> = (0..4).map(|i| f.add(g1.coeff(i), g2.coeff(i))).collect();
        let g12 = EvTailFunctional::new(both, f.add(g1.tail(), g2.tail()), &f);
        assert_eq!(g12.eval(&v1, &f), f.add(g1.eval(&v1, &f), g2.eval(&v1, &f)));
    }

    #[test]
    fn family_perps_match_the_dense_oracle_and_are_stable() {
        for p in [2u64, 3] {
            let f = PrimeField::new(p).unwrap();
            let families = [
                FunctionalFamily::PerpChainStage { n: 3 },
                FunctionalFamily::PerpChainSum,
                FunctionalFamily::DualBasisFrom { start: 0 },
                FunctionalFamily::DualBasisFrom { start: 1 },
                FunctionalFamily::AllOnesAugmented,
                FunctionalFamily::WindowSums { width: 2 },
            ];
            for fam in &families {
                for m in [8usize, 16, 32] {
                    let analytic: Vec<Vec<u64>> = fam
                        .perp_basis(m, &f)
                        .iter()
                        .map(|v| (0..m).map(|i| v.coeff(i)).collect())
                        .collect();
                    let oracle = dense_truncation_perp(fam, m, &f);
                    assert!(
                        span_equal(&analytic, &oracle, m, &f),
                        "{} at {m} over GF({p})",
                        fam.name()
                    );
                    // stability: restricting the bound-m basis to the
                    // smaller window reproduces the bound-m/2 basis
                    let small = fam.perp_basis(m / 2, &f);
                    let big = fam.perp_basis(m, &f);
                    let restricted = big
                        .iter()
                        .filter(|v| v.support().all(|i| i < m / 2))
                        .count();
                    assert_eq!(restricted, small.len(), "{}", fam.name());
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let f = gf2();
        let all_ones = EvTailFunctional::all_ones(&f);
        let m = FunctionalFamily::PerpChainSum
            .contains(&all_ones, &f)
            .unwrap();
        assert!(!m.member);
        assert!(m.truncation_blind);

        let e5 = EvTailFunctional::dual_basis(5, &f);
        assert!(FunctionalFamily::DualBasisFrom { start: 0 }
            .contains(&e5, &f)
            .unwrap()
            .member);

        let e0 = EvTailFunctional::dual_basis(0, &f);
        let m = FunctionalFamily::DualBasisFrom { start: 1 }
            .contains(&e0, &f)
            .unwrap();
        assert!(!m.member);
        assert!(m.truncation_refutes);

        // all-ones lies in the augmented family by construction
        assert!(FunctionalFamily::AllOnesAugmented
            .contains(&all_ones, &f)
            .unwrap()
            .member);
        // windows: e0*+e1* lies in the width-1 family, escapes width 2
        let e01 = EvTailFunctional::new(vec![1, 1], 0, &f);
        assert!(FunctionalFamily::WindowSums { width: 1 }
            .contains(&e01, &f)
            .unwrap()
            .member);
        assert!(!FunctionalFamily::WindowSums { width: 2 }
            .contains(&e01, &f)
            .unwrap()
            .member);
    }

    #[test]
    fn example_reports_pass_and_are_field_independent() {
        let params2 = GalleryParams::default();
        let params3 = GalleryParams {
            field_p: 3,
            ..GalleryParams::default()
        };
        for which in [ExampleId::I, ExampleId::II, ExampleId::III] {
            let r2 = run_example(which, &params2).unwrap();
            assert!(r2.pass, "example {} over GF(2): {:#?}", r2.example, r2.items);
            let r3 = run_example(which, &params3).unwrap();
            assert!(r3.pass, "example {} over GF(3)", r3.example);
            let v2: Vec<(String, bool)> = r2
                .items
                .iter()
                .map(|i| (i.name.clone(), i.verdict))
                .collect();
            let v3: Vec<(String, bool)> = r3
                .items
                .iter()
                .map(|i| (i.name.clone(), i.verdict))
                .collect();
            assert_eq!(v2, v3);
        }
    }

    #[test]
    fn density_probe_accepts_dense_families() {
        let f = gf2();
        for fam in [
            FunctionalFamily::DualBasisFrom { start: 0 },
            FunctionalFamily::AllOnesAugmented,
            FunctionalFamily::WindowSums { width: 1 },
            FunctionalFamily::WindowSums { width: 3 },
        ] {
            let probes = [
                EvTailFunctional::dual_basis(1, &f),
                EvTailFunctional::all_ones(&f),
            ];
            assert!(density_probe(&fam, &probes, 8, 6, &f), "{}", fam.name());
        }
    }

    #[test]
    fn rref_and_nullspace_basics() {
        let f = PrimeField::new(3).unwrap();
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1]];
        let ns = nullspace(&rows, 3, &f);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            let dot: u64 = row
                .iter()
                .zip(&ns[0])
                .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, 0);
        }
        // 1*[1,2,0] + 2*[0,1,1] = [1,4,2] = [1,1,2] mod 3
        assert!(in_rowspan(&rows, &[1, 1, 2], &f));
        assert!(!in_rowspan(&rows, &[0, 0, 1], &f));
    }
}
