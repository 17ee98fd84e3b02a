//! Polynomial arithmetic backing the `gf` and `quot` ring constructors.
//!
//! Univariate polynomials over Z/p are plain little-endian coefficient
//! vectors. Multivariate polynomials over a finite field are sorted term
//! maps under a graded monomial order; quotient rings get their normal
//! forms from a reduced Groebner basis computed by Buchberger's
//! algorithm, which is cheap at the sizes the ring guard admits.

use crate::ring::FiniteRing;
use std::cmp::Ordering;
use std::collections::BTreeMap;

// --- univariate over Z/p ---

pub(crate) mod univar {
    /// Drops trailing zero coefficients.
    pub fn norm(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ca * cb) % p;
            }
        }
        norm(out)
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        assert!(m.len() >= 2 && *m.last().unwrap() == 1, "modulus must be monic");
        let mut r = norm(a.to_vec());
        let md = m.len() - 1;
        while r.len() > md {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - md;
            if lead != 0 {
                for (i, &mc) in m.iter().enumerate() {
                    let idx = i + shift;
                    r[idx] = (r[idx] + p - mc * lead % p) % p;
                }
            }
            r = norm(r);
            if r.len() <= md {
                break;
            }
        }
        r
    }

    /// Exhaustive factor search: `m` (monic, degree >= 1) has a monic
    /// divisor of degree 1..=deg/2 iff it is reducible.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let deg = m.len() - 1;
        if deg == 1 {
            return true;
        }
        for d in 1..=deg / 2 {
            // all monic polynomials of degree d
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    div.push(c % p);
                    c /= p;
                }
                div.push(1);
                if rem(m, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

// --- multivariate over a finite field ---

/// Exponent vector under a graded order; ties broken lexicographically on
/// the reversed vector so that earlier-declared variables sort smaller.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Mono(pub Vec<u16>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial; coefficient values are element indices of the
/// base field, never zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct MPoly {
    pub terms: BTreeMap<Mono, u32>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&Mono, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn add_term(&mut self, mono: Mono, coeff: u32, base: &FiniteRing) {
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                let s = base.add_idx(*c, coeff);
                if s == 0 {
                    self.terms.remove(&mono);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    /// self - coeff * mono * other
    pub fn sub_scaled(&self, other: &MPoly, mono: &Mono, coeff: u32, base: &FiniteRing) -> MPoly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let prod = base.mul_idx(coeff, c);
            out.add_term(m.mul(mono), base.neg_idx(prod), base);
        }
        out
    }

    pub fn make_monic(&mut self, base: &FiniteRing) {
        if let Some((_, lc)) = self.lead() {
            if lc != base.one_idx() {
                let inv = base
                    .inv_idx(lc)
                    .expect("leading coefficient of a field polynomial is invertible");
                let terms = std::mem::take(&mut self.terms);
                self.terms = terms
                    .into_iter()
                    .map(|(m, c)| (m, base.mul_idx(inv, c)))
                    .collect();
            }
        }
    }
}

/// Full normal form of `f` modulo `gb`: repeatedly cancels the largest
/// reducible term. With `gb` a Groebner basis this is the canonical
/// representative.
pub(crate) fn normal_form(f: &MPoly, gb: &[MPoly], base: &FiniteRing) -> MPoly {
    let mut r = f.clone();
    'outer: loop {
        for (mono, &coeff) in r.terms.iter().rev() {
            for g in gb {
                let (glead, glc) = g.lead().expect("basis members are nonzero");
                if glead.divides(mono) {
                    debug_assert_eq!(glc, base.one_idx());
                    let q = mono.div(glead);
                    r = r.sub_scaled(g, &q, coeff, base);
                    continue 'outer;
                }
            }
        }
        return r;
    }
}

fn s_poly(f: &MPoly, g: &MPoly, base: &FiniteRing) -> MPoly {
    let (fl, fc) = f.lead().unwrap();
    let (gl, gc) = g.lead().unwrap();
    let l = fl.lcm(gl);
    // both inputs are monic in practice, but handle general leads anyway
    let finv = base.inv_idx(fc).unwrap();
    let ginv = base.inv_idx(gc).unwrap();
    let mut a = MPoly::zero();
    for (m, &c) in &f.terms {
        a.add_term(m.mul(&l.div(fl)), base.mul_idx(finv, c), base);
    }
    for (m, &c) in &g.terms {
        a.add_term(m.mul(&l.div(gl)), base.neg_idx(base.mul_idx(ginv, c)), base);
    }
    a
}

/// Buchberger with the coprime-lead skip, followed by inter-reduction to
/// the reduced (monic) Groebner basis.
pub(crate) fn groebner(gens: Vec<MPoly>, base: &FiniteRing) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = Vec::new();
    for mut g in gens {
        if !g.is_zero() {
            g.make_monic(base);
            basis.push(g);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (li, _) = basis[i].lead().unwrap();
        let (lj, _) = basis[j].lead().unwrap();
        if li.lcm(lj) == li.mul(lj) {
            continue; // coprime leads: s-polynomial reduces to zero
        }
        let s = s_poly(&basis[i], &basis[j], base);
        let mut r = normal_form(&s, &basis, base);
        if !r.is_zero() {
            r.make_monic(base);
            let k = basis.len();
            for t in 0..k {
                pairs.push((t, k));
            }
            basis.push(r);
        }
    }
    // minimalize: drop members whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let (li, _) = basis[i].lead().unwrap();
                let (lj, _) = basis[j].lead().unwrap();
                if lj.divides(li) && (i > j || li != lj) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<MPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // fully reduce each member against the others
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let mut r = normal_form(&minimal[i], &others, base);
        if !r.is_zero() {
            r.make_monic(base);
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    reduced
}

/// The monomials under the staircase of `gb`, sorted ascending, or `None`
/// when the quotient is infinite-dimensional (some variable has no pure
/// power among the leading monomials).
pub(crate) fn staircase(gb: &[MPoly], nvars: usize) -> Option<Vec<Mono>> {
    let leads: Vec<&Mono> = gb.iter().map(|g| g.lead().unwrap().0).collect();
    let mut caps = vec![0u16; nvars];
    for v in 0..nvars {
        let mut cap = None;
        for l in &leads {
            if l.0.iter().enumerate().all(|(i, &e)| i == v || e == 0) && l.0[v] > 0 {
                let c = l.0[v];
                cap = Some(cap.map_or(c, |old: u16| old.min(c)));
            }
        }
        caps[v] = cap?;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    loop {
        let mono = Mono(cur.clone());
        if !leads.iter().any(|l| l.divides(&mono)) {
            out.push(mono);
        }
        // odometer over the box below the caps
        let mut v = 0;
        loop {
            if v == nvars {
                out.sort();
                return Some(out);
            }
            cur[v] += 1;
            if cur[v] < caps[v] {
                break;
            }
            cur[v] = 0;
            v += 1;
        }
    }
}
