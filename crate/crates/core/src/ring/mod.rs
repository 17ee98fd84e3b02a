//! Finite rings as explicit operation tables.
//!
//! A ring is an enumerated universe indexed `0..order` with index 0 the
//! zero element, a designated index for one, and full addition and
//! multiplication tables. Construction always goes through a
//! [`RingSpec`], and every constructed ring of order <= 256 passes an
//! exhaustive axiom audit before it is handed out. The fixed element
//! order is load-bearing: all canonical forms downstream (coset
//! representatives, sorted submodule element sets) refer to it.

mod build;
pub mod poly;
pub mod spec;

pub use build::build_ring;
pub use spec::{parse_ring_spec, RingSpec};

use crate::error::{Error, Result};
use crate::limits::Limits;
use poly::{normal_form, MPoly, Mono};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// An element of a [`FiniteRing`], by index into its universe.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RingElement(pub(crate) u32);

impl RingElement {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Per-kind data for parsing and printing elements.
#[derive(Clone)]
pub(crate) enum Codec {
    Zmod {
        n: u64,
    },
    Gf {
        p: u64,
        k: u32,
        modulus: Vec<u64>,
    },
    Quot {
        base: Arc<FiniteRing>,
        vars: Vec<char>,
        basis: Vec<Mono>,
        gb: Vec<MPoly>,
    },
    Matrix {
        base: Arc<FiniteRing>,
        /// Row-major stored entry positions (the upper triangle for tri).
        positions: Vec<(usize, usize)>,
    },
    Prod {
        factors: Vec<Arc<FiniteRing>>,
    },
    Opaque,
}

pub struct FiniteRing {
    order: usize,
    one: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    commutative: bool,
    labels: Vec<String>,
    codec: Codec,
    spec_text: String,
    hash: OnceLock<String>,
    opp: OnceLock<Arc<FiniteRing>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, order {})", self.spec_text, self.order)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    pub(crate) fn from_parts(
        order: usize,
        one: u32,
        add: Vec<u32>,
        mul: Vec<u32>,
        labels: Vec<String>,
        codec: Codec,
        spec_text: String,
    ) -> Result<FiniteRing> {
        if order == 0 || add.len() != order * order || mul.len() != order * order {
            return Err(Error::Semantic("malformed ring tables".into()));
        }
        if (one as usize) >= order || labels.len() != order {
            return Err(Error::Semantic("malformed ring metadata".into()));
        }
        if add.iter().chain(mul.iter()).any(|&e| e as usize >= order) {
            return Err(Error::Semantic("ring table entry out of range".into()));
        }
        let mut neg = vec![0u32; order];
        for a in 0..order {
            let mut found = None;
            for b in 0..order {
                if add[a * order + b] == 0 {
                    found = Some(b as u32);
                    break;
                }
            }
            neg[a] = found.ok_or_else(|| {
                Error::Semantic(format!("element {a} has no additive inverse"))
            })?;
        }
        let mut commutative = true;
        'scan: for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] != mul[b * order + a] {
                    commutative = false;
                    break 'scan;
                }
            }
        }
        Ok(FiniteRing {
            order,
            one,
            add,
            mul,
            neg,
            commutative,
            labels,
            codec,
            spec_text,
            hash: OnceLock::new(),
            opp: OnceLock::new(),
        })
    }

    /// Builds a ring directly from tables. Only structural sanity is
    /// checked here; run [`FiniteRing::audit`] to test the axioms.
    pub fn from_tables(
        order: usize,
        one: u32,
        add: Vec<u32>,
        mul: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<FiniteRing>> {
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| i.to_string()).collect());
        Ok(Arc::new(FiniteRing::from_parts(
            order,
            one,
            add,
            mul,
            labels,
            Codec::Opaque,
            format!("raw order {order}"),
        )?))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> RingElement {
        RingElement(0)
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.one)
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn spec_text(&self) -> &str {
        &self.spec_text
    }

    pub fn element(&self, index: usize) -> Option<RingElement> {
        (index < self.order).then(|| RingElement(index as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> {
        (0..self.order as u32).map(RingElement)
    }

    #[inline]
    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub(crate) fn neg_idx(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn one_idx(&self) -> u32 {
        self.one
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.add_idx(a.0, b.0))
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.mul_idx(a.0, b.0))
    }

    pub fn neg(&self, a: RingElement) -> RingElement {
        RingElement(self.neg_idx(a.0))
    }

    /// Two-sided multiplicative inverse, found by scanning.
    pub(crate) fn inv_idx(&self, a: u32) -> Option<u32> {
        (0..self.order as u32)
            .find(|&b| self.mul_idx(a, b) == self.one && self.mul_idx(b, a) == self.one)
    }

    pub fn inverse(&self, a: RingElement) -> Option<RingElement> {
        self.inv_idx(a.0).map(RingElement)
    }

    pub fn is_field(&self) -> bool {
        self.order >= 2
            && self.commutative
            && (1..self.order as u32).all(|a| self.inv_idx(a).is_some())
    }

    /// The canonical image of an integer, `c * 1`.
    pub(crate) fn embed_int(&self, c: i64) -> u32 {
        // additive order of one
        let mut t: u64 = 1;
        let mut acc = self.one;
        while acc != 0 {
            acc = self.add_idx(acc, self.one);
            t += 1;
        }
        let r = c.rem_euclid(t as i64) as u64;
        let mut out = 0u32;
        for _ in 0..r {
            out = self.add_idx(out, self.one);
        }
        out
    }

    pub fn label(&self, a: RingElement) -> &str {
        &self.labels[a.index()]
    }

    /// Stable identity: a truncated SHA-256 over the operation tables.
    pub fn hash(&self) -> &str {
        self.hash.get_or_init(|| {
            let mut h = Sha256::new();
            h.update((self.order as u64).to_le_bytes());
            h.update(self.one.to_le_bytes());
            for &v in self.add.iter().chain(self.mul.iter()) {
                h.update(v.to_le_bytes());
            }
            let digest = h.finalize();
            digest[..16].iter().map(|b| format!("{b:02x}")).collect()
        })
    }

    /// Same universe and addition, multiplication reversed. An involution
    /// on tables; commutative rings are fixed points.
    pub fn opposite(self: &Arc<Self>) -> Arc<FiniteRing> {
        self.opp
            .get_or_init(|| {
                let order = self.order;
                let mut mul = vec![0u32; order * order];
                for a in 0..order {
                    for b in 0..order {
                        mul[a * order + b] = self.mul[b * order + a];
                    }
                }
                let spec_text = match self.spec_text.strip_prefix("op(") {
                    Some(rest) if self.spec_text.ends_with(')') => {
                        rest[..rest.len() - 1].to_string()
                    }
                    _ => format!("op({})", self.spec_text),
                };
                Arc::new(
                    FiniteRing::from_parts(
                        order,
                        self.one,
                        self.add.clone(),
                        mul,
                        self.labels.clone(),
                        self.codec.clone(),
                        spec_text,
                    )
                    .expect("opposite of a valid ring is valid"),
                )
            })
            .clone()
    }

    /// Exhaustive axiom audit over the full universe. Violations are
    /// returned as data; the stored instance list is capped at 1000 but
    /// `total_violations` keeps counting.
    pub fn audit(&self, limits: &Limits) -> Result<AuditReport> {
        let n = self.order;
        let mut report = AuditReport {
            ring_spec: self.spec_text.clone(),
            order: n,
            total_violations: 0,
            violations: Vec::new(),
        };
        let push = |report: &mut AuditReport, axiom: &'static str, elems: &[usize]| {
            report.total_violations += 1;
            if report.violations.len() < 1000 {
                report.violations.push(AxiomViolation {
                    axiom,
                    elements: elems.iter().map(|&i| self.labels[i].clone()).collect(),
                });
            }
        };
        for a in 0..n {
            if self.add[a * n] != a as u32 || self.add[a] != a as u32 {
                push(&mut report, "additive identity", &[a]);
            }
            if self.add[a * n + self.neg[a] as usize] != 0 {
                push(&mut report, "additive inverse", &[a]);
            }
            if self.mul[a * n + self.one as usize] != a as u32
                || self.mul[self.one as usize * n + a] != a as u32
            {
                push(&mut report, "multiplicative identity", &[a]);
            }
        }
        for a in 0..n {
            limits.check_deadline("ring axiom audit")?;
            for b in 0..n {
                if self.add[a * n + b] != self.add[b * n + a] {
                    push(&mut report, "addition commutativity", &[a, b]);
                }
                for c in 0..n {
                    let ab_c = self.add[self.add[a * n + b] as usize * n + c];
                    let a_bc = self.add[a * n + self.add[b * n + c] as usize];
                    if ab_c != a_bc {
                        push(&mut report, "addition associativity", &[a, b, c]);
                    }
                    let mab_c = self.mul[self.mul[a * n + b] as usize * n + c];
                    let ma_bc = self.mul[a * n + self.mul[b * n + c] as usize];
                    if mab_c != ma_bc {
                        push(&mut report, "multiplication associativity", &[a, b, c]);
                    }
                    let left = self.mul[a * n + self.add[b * n + c] as usize];
                    let left2 =
                        self.add[self.mul[a * n + b] as usize * n + self.mul[a * n + c] as usize];
                    if left != left2 {
                        push(&mut report, "left distributivity", &[a, b, c]);
                    }
                    let right = self.mul[self.add[a * n + b] as usize * n + c];
                    let right2 =
                        self.add[self.mul[a * n + c] as usize * n + self.mul[b * n + c] as usize];
                    if right != right2 {
                        push(&mut report, "right distributivity", &[a, b, c]);
                    }
                }
            }
        }
        Ok(report)
    }

    /// Parses an element literal in the constructor's syntax: integers
    /// for zmod/gf(p), polynomials for gf extensions and quot, brace
    /// tuples `{..}` for tri/mat entries (row-major) and prod components.
    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        let text = text.trim();
        match &self.codec {
            Codec::Zmod { n } => {
                let v = parse_int(text)?;
                Ok(RingElement(v.rem_euclid(*n as i64) as u32))
            }
            Codec::Gf { p, k, modulus } => {
                let poly = spec::parse_poly_literal(text, &['x'])?;
                let mut coeffs = vec![0u64; *k as usize + 1];
                for (c, exps) in &poly.terms {
                    let d = exps[0] as usize;
                    if d >= coeffs.len() {
                        coeffs.resize(d + 1, 0);
                    }
                    coeffs[d] = (coeffs[d] + c.rem_euclid(*p as i64) as u64) % p;
                }
                let r = poly::univar::rem(&coeffs, modulus, *p);
                let mut idx: u64 = 0;
                let mut w = 1u64;
                for &c in &r {
                    idx += c * w;
                    w *= p;
                }
                Ok(RingElement(idx as u32))
            }
            Codec::Quot {
                base,
                vars,
                basis,
                gb,
            } => {
                let poly = spec::parse_poly_literal(text, vars)?;
                let mut mp = MPoly::zero();
                for (c, exps) in &poly.terms {
                    let coeff = base.embed_int(*c);
                    mp.add_term(Mono(exps.iter().map(|&e| e as u16).collect()), coeff, base);
                }
                let nf = normal_form(&mp, gb, base);
                let q = base.order as u64;
                let mut idx: u64 = 0;
                for mono in basis.iter().rev() {
                    let c = nf.terms.get(mono).copied().unwrap_or(0);
                    idx = idx * q + c as u64;
                }
                Ok(RingElement(idx as u32))
            }
            Codec::Matrix { base, positions } => {
                let parts = brace_parts(text, positions.len())?;
                let mut idx: u64 = 0;
                for part in parts {
                    let e = base.parse_element(part)?;
                    idx = idx * base.order as u64 + e.0 as u64;
                }
                Ok(RingElement(idx as u32))
            }
            Codec::Prod { factors } => {
                let parts = brace_parts(text, factors.len())?;
                let mut idx: u64 = 0;
                for (f, part) in factors.iter().zip(parts) {
                    let e = f.parse_element(part)?;
                    idx = idx * f.order as u64 + e.0 as u64;
                }
                Ok(RingElement(idx as u32))
            }
            Codec::Opaque => {
                let v = parse_int(text)?;
                if v < 0 || v as usize >= self.order {
                    return Err(Error::Semantic(format!(
                        "element index {v} out of range for order {}",
                        self.order
                    )));
                }
                Ok(RingElement(v as u32))
            }
        }
    }
}

fn parse_int(text: &str) -> Result<i64> {
    text.parse::<i64>().map_err(|_| Error::Syntax {
        pos: 0,
        msg: format!("expected an integer literal, got {text:?}"),
    })
}

/// Splits `{a,b,c}` into its top-level parts, respecting nested braces.
fn brace_parts(text: &str, expected: usize) -> Result<Vec<&str>> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: format!("expected a brace tuple {{..}}, got {text:?}"),
        })?;
    let parts = split_top_level(inner, ',');
    if parts.len() != expected {
        return Err(Error::Semantic(format!(
            "expected {expected} components, got {}",
            parts.len()
        )));
    }
    Ok(parts)
}

/// Splits on `sep` at nesting depth zero (braces, parens, brackets).
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '{' | '(' | '[' => depth += 1,
            '}' | ')' | ']' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub ring_spec: String,
    pub order: usize,
    pub total_violations: usize,
    /// First violations encountered, capped at 1000 instances.
    pub violations: Vec<AxiomViolation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }
}
