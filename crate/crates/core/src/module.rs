//! Finitely generated one-sided modules, presented as a free cover R^n
//! modulo a relation submodule.
//!
//! Elements are stored as canonical coset representatives: the
//! lexicographic minimum of the coset under the ring's fixed element
//! order. Coordinate vectors are packed into big-endian mixed-radix
//! codes, so the lexicographic minimum is simply the numeric minimum and
//! submodule equality is a plain sorted-set comparison.
//!
//! Left modules delegate to right modules over the opposite ring: the
//! scalar-action table is the only thing the side tag flips, so a single
//! right-action code path serves both sides.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ring::{FiniteRing, RingElement};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Hard cap on the free-cover size, independent of the module-order
/// guard: the canonical map is materialized as one slot per cover vector.
const COVER_CAP: u64 = 1 << 22;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Right => write!(f, "right"),
            Side::Left => write!(f, "left"),
        }
    }
}

/// An element of a [`Module`], always the canonical coset representative.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ModuleElement(pub(crate) u64);

impl ModuleElement {
    pub fn code(self) -> u64 {
        self.0
    }
}

pub struct Module {
    ring: Arc<FiniteRing>,
    /// Scalar-action tables: `ring` for right modules, its opposite for
    /// left modules. The action is always "multiply the coordinate on
    /// the right in `act`".
    act: Arc<FiniteRing>,
    side: Side,
    rank: usize,
    rel_gens: Vec<u64>,
    rel_elems: Vec<u64>,
    canon: Vec<u64>,
    elems: Vec<u64>,
    hash: OnceLock<String>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module({})", self.describe())
    }
}

impl Module {
    pub fn free(ring: &Arc<FiniteRing>, rank: usize, side: Side, limits: &Limits) -> Result<Arc<Module>> {
        if rank == 0 {
            return Err(Error::Precondition("module rank must be at least 1".into()));
        }
        let cover = (ring.order() as u64)
            .checked_pow(rank as u32)
            .filter(|&c| c <= COVER_CAP)
            .ok_or_else(|| Error::GuardExceeded {
                what: "free cover size".into(),
                actual: u64::MAX,
                limit: COVER_CAP,
            })?;
        limits.check_module_order("free module order", cover)?;
        Module::from_rel_data(ring, side, rank, Vec::new(), vec![0], limits)
    }

    /// Internal constructor for presentation scaffolding: enforces only
    /// the cover cap, not the user-facing module-order guard, so duals
    /// with several generators can still be re-presented.
    pub(crate) fn free_internal(
        ring: &Arc<FiniteRing>,
        rank: usize,
        side: Side,
        limits: &Limits,
    ) -> Result<Arc<Module>> {
        if rank == 0 {
            return Err(Error::Precondition("module rank must be at least 1".into()));
        }
        (ring.order() as u64)
            .checked_pow(rank as u32)
            .filter(|&c| c <= COVER_CAP)
            .ok_or_else(|| Error::GuardExceeded {
                what: "internal free cover size".into(),
                actual: u64::MAX,
                limit: COVER_CAP,
            })?;
        Module::from_rel_data(ring, side, rank, Vec::new(), vec![0], limits)
    }

    /// The quotient of `parent` by a submodule: the relation set becomes
    /// the full preimage in the free cover. The projection map is
    /// [`Module::project`].
    pub fn quotient(parent: &Arc<Module>, sub: &Submodule, limits: &Limits) -> Result<Arc<Module>> {
        if !sub.module.same_space(parent) {
            return Err(Error::ModuleMismatch(
                "quotient by a submodule of a different module".into(),
            ));
        }
        let mut rel_elems = Vec::new();
        for code in 0..parent.canon.len() as u64 {
            if sub.contains_code(parent.canon[code as usize]) {
                rel_elems.push(code);
            }
        }
        let mut rel_gens = sub.gens.clone();
        rel_gens.extend_from_slice(&parent.rel_gens);
        rel_gens.sort_unstable();
        rel_gens.dedup();
        Module::from_rel_data(&parent.ring, parent.side, parent.rank, rel_gens, rel_elems, limits)
    }

    /// `rel_elems` must be the complete, addition/action-closed relation
    /// set inside the free cover, containing 0; `rel_gens` a generating
    /// subset (possibly the whole set).
    pub(crate) fn from_rel_data(
        ring: &Arc<FiniteRing>,
        side: Side,
        rank: usize,
        rel_gens: Vec<u64>,
        mut rel_elems: Vec<u64>,
        limits: &Limits,
    ) -> Result<Arc<Module>> {
        let order = ring.order() as u64;
        let cover = order.pow(rank as u32);
        rel_elems.sort_unstable();
        rel_elems.dedup();
        let act = match side {
            Side::Right => ring.clone(),
            Side::Left => ring.opposite(),
        };
        let mut canon = vec![u64::MAX; cover as usize];
        let mut elems = Vec::new();
        for code in 0..cover {
            if canon[code as usize] != u64::MAX {
                continue;
            }
            if code % 1024 == 0 {
                limits.check_deadline("canonicalizing module cosets")?;
            }
            elems.push(code);
            for &x in &rel_elems {
                let s = raw_add(ring, order, rank, code, x);
                canon[s as usize] = code;
            }
        }
        let module_order = elems.len() as u64;
        limits.check_module_order("module order", module_order)?;
        Ok(Arc::new(Module {
            ring: ring.clone(),
            act,
            side,
            rank,
            rel_gens,
            rel_elems,
            canon,
            elems,
            hash: OnceLock::new(),
        }))
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    /// The tables actually driving the scalar action (`ring` on the
    /// right, its opposite on the left).
    pub(crate) fn action_ring(&self) -> &Arc<FiniteRing> {
        &self.act
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn is_zero_module(&self) -> bool {
        self.elems.len() == 1
    }

    pub(crate) fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub(crate) fn rel_gens(&self) -> &[u64] {
        &self.rel_gens
    }

    pub(crate) fn rel_elems(&self) -> &[u64] {
        &self.rel_elems
    }

    /// Every element exactly once, canonical representatives, ascending.
    pub fn elements(&self) -> impl Iterator<Item = ModuleElement> + '_ {
        self.elems.iter().map(|&c| ModuleElement(c))
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement(0)
    }

    /// Structural identity of the ambient space (ring tables, side, rank,
    /// relation set).
    pub fn same_space(&self, other: &Module) -> bool {
        std::ptr::eq(self, other)
            || (self.side == other.side
                && self.rank == other.rank
                && self.rel_elems == other.rel_elems
                && self.ring.hash() == other.ring.hash())
    }

    #[inline]
    pub(crate) fn canon_code(&self, raw: u64) -> u64 {
        self.canon[raw as usize]
    }

    #[inline]
    pub(crate) fn add_codes(&self, a: u64, b: u64) -> u64 {
        let order = self.ring.order() as u64;
        let mut out = 0u64;
        let mut w = 1u64;
        let (mut aa, mut bb) = (a, b);
        for _ in 0..self.rank {
            let s = self.ring.add_idx((aa % order) as u32, (bb % order) as u32);
            out += s as u64 * w;
            w *= order;
            aa /= order;
            bb /= order;
        }
        self.canon[out as usize]
    }

    /// The side-appropriate scalar action, by delegation to the action
    /// ring's right multiplication.
    #[inline]
    pub(crate) fn act_code(&self, a: u64, r: u32) -> u64 {
        let order = self.ring.order() as u64;
        let mut out = 0u64;
        let mut w = 1u64;
        let mut aa = a;
        for _ in 0..self.rank {
            let p = self.act.mul_idx((aa % order) as u32, r);
            out += p as u64 * w;
            w *= order;
            aa /= order;
        }
        self.canon[out as usize]
    }

    pub fn negate(&self, a: ModuleElement) -> ModuleElement {
        let order = self.ring.order() as u64;
        let mut out = 0u64;
        let mut w = 1u64;
        let mut aa = a.0;
        for _ in 0..self.rank {
            out += self.ring.neg_idx((aa % order) as u32) as u64 * w;
            w *= order;
            aa /= order;
        }
        ModuleElement(self.canon[out as usize])
    }

    pub(crate) fn decode(&self, code: u64) -> Vec<u32> {
        let order = self.ring.order() as u64;
        let mut v = vec![0u32; self.rank];
        let mut rest = code;
        for slot in v.iter_mut().rev() {
            *slot = (rest % order) as u32;
            rest /= order;
        }
        v
    }

    pub(crate) fn encode(&self, coords: &[u32]) -> u64 {
        let order = self.ring.order() as u64;
        let mut code = 0u64;
        for &c in coords {
            code = code * order + c as u64;
        }
        code
    }

    pub fn add_elements(&self, a: ModuleElement, b: ModuleElement) -> ModuleElement {
        ModuleElement(self.add_codes(a.0, b.0))
    }

    pub fn scale(&self, a: ModuleElement, r: RingElement) -> ModuleElement {
        ModuleElement(self.act_code(a.0, r.0))
    }

    pub fn element_from_coords(&self, coords: &[RingElement]) -> Result<ModuleElement> {
        if coords.len() != self.rank {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                self.rank,
                coords.len()
            )));
        }
        let raw: Vec<u32> = coords.iter().map(|e| e.0).collect();
        Ok(ModuleElement(self.canon_code(self.encode(&raw))))
    }

    pub fn coords(&self, e: ModuleElement) -> Vec<RingElement> {
        self.decode(e.0).into_iter().map(RingElement).collect()
    }

    /// Parses a comma-separated vector of ring-element literals into the
    /// canonical representative of its coset.
    pub fn parse_element(&self, text: &str) -> Result<ModuleElement> {
        let parts = crate::ring::split_top_level(text.trim(), ',');
        if parts.len() != self.rank {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {} in {text:?}",
                self.rank,
                parts.len()
            )));
        }
        let mut coords = Vec::with_capacity(self.rank);
        for p in parts {
            coords.push(self.ring.parse_element(p)?);
        }
        self.element_from_coords(&coords)
    }

    pub(crate) fn label_code(&self, code: u64) -> String {
        let coords = self.decode(code);
        if self.rank == 1 {
            return self.ring.label(RingElement(coords[0])).to_string();
        }
        let parts: Vec<&str> = coords
            .iter()
            .map(|&c| self.ring.label(RingElement(c)))
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn label(&self, e: ModuleElement) -> String {
        self.label_code(e.0)
    }

    /// Comma-joined coordinate literals, re-parseable by
    /// [`Module::parse_element`]. Used in witnesses meant for replay.
    pub(crate) fn literal_code(&self, code: u64) -> String {
        let coords = self.decode(code);
        let parts: Vec<&str> = coords
            .iter()
            .map(|&c| self.ring.label(RingElement(c)))
            .collect();
        parts.join(",")
    }

    pub fn element_literal(&self, e: ModuleElement) -> String {
        self.literal_code(e.0)
    }

    /// Projection onto a quotient sharing this module's free cover:
    /// re-canonicalization of the representative.
    pub fn project(&self, parent: &Module, e: ModuleElement) -> Result<ModuleElement> {
        if parent.rank != self.rank
            || parent.side != self.side
            || parent.ring.hash() != self.ring.hash()
        {
            return Err(Error::ModuleMismatch(
                "projection requires a shared free cover".into(),
            ));
        }
        Ok(ModuleElement(self.canon_code(e.0)))
    }

    pub fn describe(&self) -> String {
        let side = self.side;
        let ring = self.ring.spec_text();
        if self.rel_elems.len() == 1 {
            format!("{side} free module of rank {} over {ring}", self.rank)
        } else if self.elems.len() == 1 {
            format!("{side} zero quotient of rank {} over {ring}", self.rank)
        } else {
            let mut gens: Vec<String> = self
                .rel_gens
                .iter()
                .take(4)
                .map(|&g| self.label_code(g))
                .collect();
            if self.rel_gens.len() > 4 {
                gens.push(format!("... {} more", self.rel_gens.len() - 4));
            }
            format!(
                "{side} quotient of rank-{} free by <{}> over {ring}",
                self.rank,
                gens.join(", ")
            )
        }
    }

    /// Stable identity over (ring, side, rank, relation set).
    pub fn hash(&self) -> &str {
        self.hash.get_or_init(|| {
            let mut h = Sha256::new();
            h.update(self.ring.hash().as_bytes());
            h.update([matches!(self.side, Side::Left) as u8]);
            h.update((self.rank as u64).to_le_bytes());
            for &e in &self.rel_elems {
                h.update(e.to_le_bytes());
            }
            let digest = h.finalize();
            digest[..16].iter().map(|b| format!("{b:02x}")).collect()
        })
    }
}

fn raw_add(ring: &FiniteRing, order: u64, rank: usize, a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    let mut w = 1u64;
    let (mut aa, mut bb) = (a, b);
    for _ in 0..rank {
        let s = ring.add_idx((aa % order) as u32, (bb % order) as u32);
        out += s as u64 * w;
        w *= order;
        aa /= order;
        bb /= order;
    }
    out
}

/// Worklist closure of a seed set under addition and the scalar action.
pub(crate) fn close_span(module: &Module, seeds: &[u64], limits: &Limits) -> Result<Vec<u64>> {
    let ring_order = module.ring.order() as u32;
    let mut set = std::collections::BTreeSet::new();
    set.insert(0u64);
    let mut work: Vec<u64> = seeds.to_vec();
    let mut polls = 0u32;
    while let Some(x) = work.pop() {
        if !set.insert(x) {
            continue;
        }
        polls += 1;
        if polls % 512 == 0 {
            limits.check_deadline("closing a generating set")?;
        }
        let members: Vec<u64> = set.iter().copied().collect();
        for s in members {
            work.push(module.add_codes(x, s));
        }
        for r in 0..ring_order {
            work.push(module.act_code(x, r));
        }
    }
    Ok(set.into_iter().collect())
}

/// A submodule: generator list plus the full canonical element set,
/// sorted. Equality and hashing go through the element set, so identical
/// submodules compare equal regardless of how they were produced.
#[derive(Clone)]
pub struct Submodule {
    module: Arc<Module>,
    gens: Vec<u64>,
    elems: Arc<Vec<u64>>,
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Submodule[{}] of {}",
            self.describe_elems(8),
            self.module.describe()
        )
    }
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.module.same_space(&other.module) && self.elems == other.elems
    }
}

impl Eq for Submodule {}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elems
            .len()
            .cmp(&other.elems.len())
            .then_with(|| self.elems.cmp(&other.elems))
    }
}

impl Submodule {
    pub fn zero(module: &Arc<Module>) -> Submodule {
        Submodule {
            module: module.clone(),
            gens: Vec::new(),
            elems: Arc::new(vec![0]),
        }
    }

    pub fn full(module: &Arc<Module>) -> Submodule {
        Submodule {
            module: module.clone(),
            gens: module.elems.clone(),
            elems: Arc::new(module.elems.clone()),
        }
    }

    pub(crate) fn from_closed_set(module: &Arc<Module>, gens: Vec<u64>, elems: Vec<u64>) -> Submodule {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.first() == Some(&0));
        Submodule {
            module: module.clone(),
            gens,
            elems: Arc::new(elems),
        }
    }

    /// The smallest submodule containing `gens`: closure under addition
    /// and the side-appropriate scalar action until fixpoint.
    pub fn generated(module: &Arc<Module>, gens: &[ModuleElement], limits: &Limits) -> Result<Submodule> {
        let codes: Vec<u64> = gens.iter().map(|e| e.0).collect();
        Submodule::generated_from_codes(module, codes, limits)
    }

    pub(crate) fn generated_from_codes(
        module: &Arc<Module>,
        gens: Vec<u64>,
        limits: &Limits,
    ) -> Result<Submodule> {
        let elems = close_span(module, &gens, limits)?;
        Ok(Submodule {
            module: module.clone(),
            gens,
            elems: Arc::new(elems),
        })
    }

    pub fn module(&self) -> &Arc<Module> {
        &self.module
    }

    pub fn cardinality(&self) -> usize {
        self.elems.len()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.elems.len() == self.module.order()
    }

    pub(crate) fn elem_codes(&self) -> &[u64] {
        &self.elems
    }

    pub(crate) fn gen_codes(&self) -> &[u64] {
        &self.gens
    }

    pub fn elements(&self) -> impl Iterator<Item = ModuleElement> + '_ {
        self.elems.iter().map(|&c| ModuleElement(c))
    }

    pub fn generators(&self) -> impl Iterator<Item = ModuleElement> + '_ {
        self.gens.iter().map(|&c| ModuleElement(c))
    }

    pub(crate) fn contains_code(&self, code: u64) -> bool {
        self.elems.binary_search(&code).is_ok()
    }

    pub fn contains(&self, e: ModuleElement) -> bool {
        self.contains_code(e.0)
    }

    pub fn subset_of(&self, other: &Submodule) -> bool {
        self.elems.iter().all(|&e| other.contains_code(e))
    }

    pub fn element_labels(&self) -> Vec<String> {
        self.elems.iter().map(|&e| self.module.label_code(e)).collect()
    }

    pub fn generator_labels(&self) -> Vec<String> {
        self.gens.iter().map(|&e| self.module.label_code(e)).collect()
    }

    /// Re-parseable coordinate literals for every element.
    pub fn element_literals(&self) -> Vec<String> {
        self.elems.iter().map(|&e| self.module.literal_code(e)).collect()
    }

    pub fn generator_literals(&self) -> Vec<String> {
        self.gens.iter().map(|&e| self.module.literal_code(e)).collect()
    }

    fn describe_elems(&self, cap: usize) -> String {
        let mut parts: Vec<String> = self
            .elems
            .iter()
            .take(cap)
            .map(|&e| self.module.label_code(e))
            .collect();
        if self.elems.len() > cap {
            parts.push(format!("... {} total", self.elems.len()));
        }
        parts.join(", ")
    }

    /// Submodule generated by the union of the parts' generators.
    pub fn sum(parts: &[&Submodule], limits: &Limits) -> Result<Submodule> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("sum of an empty family".into()))?;
        let module = first.module.clone();
        let mut gens: Vec<u64> = Vec::new();
        for p in parts {
            if !p.module.same_space(&module) {
                return Err(Error::ModuleMismatch(
                    "sum of submodules of different modules".into(),
                ));
            }
            gens.extend(p.gens.iter().copied());
            if p.gens.is_empty() {
                gens.extend(p.elems.iter().copied());
            }
        }
        gens.sort_unstable();
        gens.dedup();
        Submodule::generated_from_codes(&module, gens, limits)
    }

    /// Set intersection of the canonical element sets; closed because an
    /// intersection of submodules is a submodule.
    pub fn intersect(parts: &[&Submodule]) -> Result<Submodule> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("intersection of an empty family".into()))?;
        let module = first.module.clone();
        let mut elems: Vec<u64> = first.elems.as_ref().clone();
        for p in &parts[1..] {
            if !p.module.same_space(&module) {
                return Err(Error::ModuleMismatch(
                    "intersection of submodules of different modules".into(),
                ));
            }
            elems.retain(|&e| p.contains_code(e));
        }
        let gens = elems.clone();
        Ok(Submodule {
            module,
            gens,
            elems: Arc::new(elems),
        })
    }

    /// A short generating set: greedy sweep in element order, then a
    /// pruning pass dropping redundant picks.
    pub(crate) fn minimal_generators(&self, limits: &Limits) -> Result<Vec<u64>> {
        let mut picked: Vec<u64> = Vec::new();
        let mut span: Vec<u64> = vec![0];
        for &e in self.elems.iter() {
            if span.binary_search(&e).is_ok() {
                continue;
            }
            picked.push(e);
            let mut seeds = picked.clone();
            seeds.extend_from_slice(&span);
            span = close_span(&self.module, &seeds, limits)?;
            if span.len() == self.elems.len() {
                break;
            }
        }
        // prune: a generator implied by the others goes away
        let mut i = 0;
        while i < picked.len() && picked.len() > 1 {
            let mut rest = picked.clone();
            rest.remove(i);
            let span = close_span(&self.module, &rest, limits)?;
            if span.len() == self.elems.len() {
                picked = rest;
            } else {
                i += 1;
            }
        }
        Ok(picked)
    }
}

/// All submodules of `m`: the join-closure of the cyclic submodules,
/// sorted by (cardinality, canonical element set).
pub fn enumerate_submodules(m: &Arc<Module>, limits: &Limits) -> Result<Vec<Submodule>> {
    limits.check_module_order("submodule enumeration", m.order() as u64)?;
    enumerate_submodules_within(&Submodule::full(m), limits)
}

/// All submodules of the ambient module contained in `ambient`.
pub fn enumerate_submodules_within(ambient: &Submodule, limits: &Limits) -> Result<Vec<Submodule>> {
    let module = ambient.module().clone();
    let mut cyclics: Vec<Submodule> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &e in ambient.elem_codes() {
        if e == 0 {
            continue;
        }
        let c = Submodule::generated_from_codes(&module, vec![e], limits)?;
        if seen.insert(c.elems.as_ref().clone()) {
            cyclics.push(c);
        }
    }
    cyclics.sort();

    let zero = Submodule::zero(&module);
    let mut lattice = std::collections::BTreeMap::new();
    lattice.insert(vec![0u64], zero.clone());
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        limits.check_deadline("enumerating the submodule lattice")?;
        for c in &cyclics {
            if c.subset_of(&s) {
                continue;
            }
            let mut gens = s.gens.clone();
            gens.extend(c.gens.iter().copied());
            gens.sort_unstable();
            gens.dedup();
            let mut seeds = gens.clone();
            seeds.extend(s.elems.iter().copied());
            seeds.extend(c.elems.iter().copied());
            let elems = close_span(&module, &seeds, limits)?;
            if !lattice.contains_key(&elems) {
                let join = Submodule {
                    module: module.clone(),
                    gens,
                    elems: Arc::new(elems.clone()),
                };
                lattice.insert(elems, join.clone());
                frontier.push(join);
            }
        }
    }
    let mut out: Vec<Submodule> = lattice.into_values().collect();
    out.sort();
    Ok(out)
}

/// Maximal proper submodules of `m`.
pub fn maximal_submodules(m: &Arc<Module>, limits: &Limits) -> Result<Vec<Submodule>> {
    let all = enumerate_submodules(m, limits)?;
    let proper: Vec<&Submodule> = all.iter().filter(|s| !s.is_full()).collect();
    let mut out = Vec::new();
    for s in &proper {
        let covered = proper
            .iter()
            .any(|t| t.cardinality() > s.cardinality() && s.subset_of(t));
        if !covered {
            out.push((*s).clone());
        }
    }
    Ok(out)
}

/// Parses the module mini-language: `free N` or `free N / [v1; v2; ...]`
/// where each `vi` is a comma-separated vector of ring-element literals.
pub fn parse_module_spec(
    ring: &Arc<FiniteRing>,
    side: Side,
    text: &str,
    limits: &Limits,
) -> Result<Arc<Module>> {
    let text = text.trim();
    let rest = text.strip_prefix("free").ok_or_else(|| Error::Syntax {
        pos: 0,
        msg: "module spec must start with 'free'".into(),
    })?;
    let (rank_part, gens_part) = match rest.find('/') {
        Some(i) => (&rest[..i], Some(rest[i + 1..].trim())),
        None => (rest, None),
    };
    let rank: usize = rank_part.trim().parse().map_err(|_| Error::Syntax {
        pos: 4,
        msg: format!("expected a rank integer, got {:?}", rank_part.trim()),
    })?;
    let free = Module::free(ring, rank, side, limits)?;
    let Some(gens_text) = gens_part else {
        return Ok(free);
    };
    let inner = gens_text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: "relation list must be bracketed: [v1; v2; ...]".into(),
        })?;
    let mut gens = Vec::new();
    for part in crate::ring::split_top_level(inner, ';') {
        if part.is_empty() {
            continue;
        }
        gens.push(free.parse_element(part)?);
    }
    let sub = Submodule::generated(&free, &gens, limits)?;
    Module::quotient(&free, &sub, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_ring, parse_ring_spec};

    fn ring(text: &str) -> Arc<FiniteRing> {
        build_ring(&parse_ring_spec(text).unwrap(), &Limits::default()).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn free_module_orders() {
        let z4 = ring("zmod 4");
        assert_eq!(Module::free(&z4, 1, Side::Right, &lim()).unwrap().order(), 4);
        assert_eq!(Module::free(&z4, 2, Side::Right, &lim()).unwrap().order(), 16);
        let t = ring("tri 2 over gf 2 1");
        assert_eq!(Module::free(&t, 2, Side::Right, &lim()).unwrap().order(), 64);
    }

    #[test]
    fn cyclic_submodule_of_z4() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        let two = m.parse_element("2").unwrap();
        let s = Submodule::generated(&m, &[two], &lim()).unwrap();
        assert_eq!(s.elem_codes(), &[0, 2]);
        let empty = Submodule::generated(&m, &[], &lim()).unwrap();
        assert!(empty.is_zero());
    }

    #[test]
    fn span_of_a_basis_vector_in_rank_2() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 2, Side::Right, &lim()).unwrap();
        let e1 = m.parse_element("1,0").unwrap();
        let s = Submodule::generated(&m, &[e1], &lim()).unwrap();
        let labels = s.element_labels();
        assert_eq!(labels, vec!["(0,0)", "(1,0)", "(2,0)", "(3,0)"]);
    }

    #[test]
    fn quotient_coset_counts() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        let two = m.parse_element("2").unwrap();
        let s = Submodule::generated(&m, &[two], &lim()).unwrap();
        let q = Module::quotient(&m, &s, &lim()).unwrap();
        assert_eq!(q.order(), 2);
        // canonical representatives are the minimal coset members
        assert_eq!(q.elems(), &[0, 1]);

        let qz = Module::quotient(&m, &Submodule::zero(&m), &lim()).unwrap();
        assert_eq!(qz.elems(), m.elems());
        let qf = Module::quotient(&m, &Submodule::full(&m), &lim()).unwrap();
        assert_eq!(qf.order(), 1);
    }

    #[test]
    fn submodule_lattices_of_small_modules() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 1, Side::Right, &lim()).unwrap();
        let subs = enumerate_submodules(&m, &lim()).unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(
            subs.iter().map(|s| s.cardinality()).collect::<Vec<_>>(),
            vec![1, 2, 4]
        );

        let f2 = ring("gf 2 1");
        let plane = Module::free(&f2, 2, Side::Right, &lim()).unwrap();
        let subs = enumerate_submodules(&plane, &lim()).unwrap();
        assert_eq!(subs.len(), 5);

        let z = Module::quotient(&m, &Submodule::full(&m), &lim()).unwrap();
        let subs = enumerate_submodules(&z, &lim()).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_zero());
    }

    #[test]
    fn sum_and_intersection_examples() {
        let z2 = ring("zmod 2");
        let m = Module::free(&z2, 2, Side::Right, &lim()).unwrap();
        let e1 = m.parse_element("1,0").unwrap();
        let e2 = m.parse_element("0,1").unwrap();
        let d = m.parse_element("1,1").unwrap();
        let a = Submodule::generated(&m, &[e1], &lim()).unwrap();
        let b = Submodule::generated(&m, &[e2], &lim()).unwrap();
        let c = Submodule::generated(&m, &[d], &lim()).unwrap();
        let s = Submodule::sum(&[&a, &b], &lim()).unwrap();
        assert!(s.is_full());
        assert_eq!(s.cardinality(), 4);
        let i = Submodule::intersect(&[&c, &a]).unwrap();
        assert!(i.is_zero());
        // idempotence and identity
        assert_eq!(Submodule::sum(&[&a, &a], &lim()).unwrap(), a);
        assert_eq!(Submodule::sum(&[&Submodule::zero(&m), &a], &lim()).unwrap(), a);
        assert_eq!(Submodule::intersect(&[&a, &a]).unwrap(), a);
    }

    #[test]
    fn left_modules_act_through_the_opposite_ring() {
        let t = ring("tri 2 over gf 2 1");
        let mr = Module::free(&t, 1, Side::Right, &lim()).unwrap();
        let ml = Module::free(&t, 1, Side::Left, &lim()).unwrap();
        // right ideals and left ideals of the triangular ring differ
        let right = enumerate_submodules(&mr, &lim()).unwrap();
        let left = enumerate_submodules(&ml, &lim()).unwrap();
        let right_sets: Vec<_> = right.iter().map(|s| s.elem_codes().to_vec()).collect();
        let left_sets: Vec<_> = left.iter().map(|s| s.elem_codes().to_vec()).collect();
        assert_ne!(right_sets, left_sets);
        // the scalar action matches the definition on each side
        for a in t.elements() {
            for b in t.elements() {
                let er = mr.element_from_coords(&[a]).unwrap();
                let el = ml.element_from_coords(&[a]).unwrap();
                assert_eq!(mr.scale(er, b), mr.element_from_coords(&[t.mul(a, b)]).unwrap());
                assert_eq!(ml.scale(el, b), ml.element_from_coords(&[t.mul(b, a)]).unwrap());
            }
        }
    }

    #[test]
    fn lagrange_on_the_lattice() {
        for spec in ["zmod 6", "zmod 8", "tri 2 over gf 2 1"] {
            let r = ring(spec);
            let m = Module::free(&r, 1, Side::Right, &lim()).unwrap();
            for s in enumerate_submodules(&m, &lim()).unwrap() {
                assert_eq!(m.order() % s.cardinality(), 0);
            }
        }
    }

    #[test]
    fn generated_is_a_closure_operator() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 2, Side::Right, &lim()).unwrap();
        let subs = enumerate_submodules(&m, &lim()).unwrap();
        for s in &subs {
            // extensive + idempotent
            let again = Submodule::generated_from_codes(&m, s.elem_codes().to_vec(), &lim()).unwrap();
            assert_eq!(&again, s);
        }
        // monotone on nested pairs
        for a in &subs {
            for b in &subs {
                if a.subset_of(b) {
                    let ga = Submodule::generated_from_codes(&m, a.gen_codes().to_vec(), &lim()).unwrap();
                    assert!(ga.subset_of(b));
                }
            }
        }
    }

    #[test]
    fn minimal_generators_shrink() {
        let z4 = ring("zmod 4");
        let m = Module::free(&z4, 2, Side::Right, &lim()).unwrap();
        let full = Submodule::full(&m);
        let gens = full.minimal_generators(&lim()).unwrap();
        assert_eq!(gens.len(), 2);
        let span = close_span(&m, &gens, &lim()).unwrap();
        assert_eq!(span.len(), 16);
    }

    #[test]
    fn module_spec_mini_language() {
        let z4 = ring("zmod 4");
        let m = parse_module_spec(&z4, Side::Right, "free 2", &lim()).unwrap();
        assert_eq!(m.order(), 16);
        let q = parse_module_spec(&z4, Side::Right, "free 2 / [2,0; 0,2]", &lim()).unwrap();
        assert_eq!(q.order(), 4);
        let q1 = parse_module_spec(&z4, Side::Right, "free 1 / [2]", &lim()).unwrap();
        assert_eq!(q1.order(), 2);
    }

    #[test]
    fn guards_are_enforced() {
        let z4 = ring("zmod 4");
        let mut limits = Limits::default();
        limits.max_module_order = 10;
        assert!(matches!(
            Module::free(&z4, 2, Side::Right, &limits),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
