//! Constructors turning a [`RingSpec`] into operation tables.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ring::poly::{groebner, normal_form, staircase, univar, MPoly, Mono};
use crate::ring::spec::{fmt_univar, RingSpec, SpecPoly};
use crate::ring::{Codec, FiniteRing};
use std::sync::Arc;

/// Builds the ring described by `spec`, enforcing the ring-order guard,
/// deriving additive inverses and the commutativity flag, and (for orders
/// within the exhaustively-checkable bound of 256) running the full axiom
/// audit before returning.
pub fn build_ring(spec: &RingSpec, limits: &Limits) -> Result<Arc<FiniteRing>> {
    let ring = match spec {
        RingSpec::Zmod { n } => build_zmod(*n, limits)?,
        RingSpec::Gf { p, k, modulus } => build_gf(*p, *k, modulus, limits)?,
        RingSpec::Quot {
            base,
            vars,
            relations,
        } => build_quot(base, vars, relations, limits)?,
        RingSpec::Tri { m, base } => build_matrix(*m as usize, base, true, limits)?,
        RingSpec::Mat { m, base } => build_matrix(*m as usize, base, false, limits)?,
        RingSpec::Prod { factors } => build_prod(factors, limits)?,
    };
    if ring.order() <= 256 {
        let audit = ring.audit(limits)?;
        if !audit.passed() {
            return Err(Error::Inconsistency(format!(
                "constructed ring {} failed its axiom audit with {} violations",
                ring.spec_text(),
                audit.total_violations
            )));
        }
    }
    Ok(ring)
}

fn checked_order(what: &str, order: Option<u64>, limits: &Limits) -> Result<usize> {
    let order = order.ok_or_else(|| Error::GuardExceeded {
        what: what.into(),
        actual: u64::MAX,
        limit: limits.max_ring_order,
    })?;
    limits.check_ring_order(order)?;
    Ok(order as usize)
}

fn build_zmod(n: u64, limits: &Limits) -> Result<Arc<FiniteRing>> {
    let order = checked_order("zmod order", Some(n), limits)?;
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            add[a * order + b] = ((a + b) % order) as u32;
            mul[a * order + b] = ((a * b) % order) as u32;
        }
    }
    let labels = (0..order).map(|i| i.to_string()).collect();
    Ok(Arc::new(FiniteRing::from_parts(
        order,
        1,
        add,
        mul,
        labels,
        Codec::Zmod { n },
        format!("zmod {n}"),
    )?))
}

fn build_gf(p: u64, k: u32, modulus: &[u64], limits: &Limits) -> Result<Arc<FiniteRing>> {
    let order = checked_order("gf order", p.checked_pow(k), limits)?;
    if k >= 2 && !univar::is_irreducible(modulus, p) {
        return Err(Error::Semantic(format!(
            "gf modulus {} is reducible over Z/{p}",
            fmt_univar(modulus)
        )));
    }
    let decode = |idx: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(k as usize);
        let mut rest = idx as u64;
        for _ in 0..k {
            v.push(rest % p);
            rest /= p;
        }
        v
    };
    let encode = |coeffs: &[u64]| -> u32 {
        let mut idx = 0u64;
        let mut w = 1u64;
        for d in 0..k as usize {
            idx += coeffs.get(d).copied().unwrap_or(0) * w;
            w *= p;
        }
        idx as u32
    };
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        let va = decode(a);
        for b in 0..order {
            let vb = decode(b);
            let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
            add[a * order + b] = encode(&sum);
            let prod = if k == 1 {
                vec![va[0] * vb[0] % p]
            } else {
                univar::rem(&univar::mul(&va, &vb, p), modulus, p)
            };
            mul[a * order + b] = encode(&prod);
        }
    }
    let labels = (0..order).map(|i| fmt_univar(&decode(i))).collect();
    let spec = RingSpec::Gf {
        p,
        k,
        modulus: modulus.to_vec(),
    };
    Ok(Arc::new(FiniteRing::from_parts(
        order,
        1,
        add,
        mul,
        labels,
        Codec::Gf {
            p,
            k,
            modulus: modulus.to_vec(),
        },
        spec.to_string(),
    )?))
}

fn build_quot(
    base_spec: &RingSpec,
    vars: &[char],
    relations: &[SpecPoly],
    limits: &Limits,
) -> Result<Arc<FiniteRing>> {
    let base = build_ring(base_spec, limits)?;
    if !base.is_field() {
        return Err(Error::Semantic(format!(
            "quot base must be a field, but {} is not",
            base.spec_text()
        )));
    }
    let nvars = vars.len();
    let mut gens: Vec<MPoly> = Vec::new();
    for rel in relations {
        let mut mp = MPoly::zero();
        for (c, exps) in &rel.terms {
            let coeff = base.embed_int(*c);
            mp.add_term(Mono(exps.iter().map(|&e| e as u16).collect()), coeff, &base);
        }
        if !mp.is_zero() {
            gens.push(mp);
        }
    }
    if gens.is_empty() {
        return Err(Error::Semantic(
            "quotient relations vanish; the quotient ring is infinite".into(),
        ));
    }
    let gb = groebner(gens, &base);
    if gb.iter().any(|g| g.lead().unwrap().0 == &Mono::one(nvars)) {
        return Err(Error::Semantic(
            "quotient ideal contains 1; the quotient ring is trivial".into(),
        ));
    }
    let basis = staircase(&gb, nvars).ok_or_else(|| {
        Error::Semantic(
            "quotient ring is infinite: some variable has no pure power among the leading terms"
                .into(),
        )
    })?;
    let q = base.order() as u64;
    let order = checked_order("quot order", q.checked_pow(basis.len() as u32), limits)?;

    // positions of basis monomials, for re-encoding normal forms
    let pos_of = |mono: &Mono| -> usize {
        basis
            .binary_search_by(|b| b.cmp(mono))
            .expect("normal forms live under the staircase")
    };
    let decode = |idx: usize| -> Vec<u32> {
        let mut v = Vec::with_capacity(basis.len());
        let mut rest = idx as u64;
        for _ in 0..basis.len() {
            v.push((rest % q) as u32);
            rest /= q;
        }
        v
    };
    let encode = |coeffs: &[u32]| -> u32 {
        let mut idx = 0u64;
        let mut w = 1u64;
        for &c in coeffs {
            idx += c as u64 * w;
            w *= q;
        }
        idx as u32
    };

    // normal forms of pairwise basis-monomial products
    let mut prod_nf: Vec<Vec<Vec<(usize, u32)>>> = vec![vec![Vec::new(); basis.len()]; basis.len()];
    for (i, mi) in basis.iter().enumerate() {
        for (j, mj) in basis.iter().enumerate() {
            let mut p = MPoly::zero();
            p.add_term(mi.mul(mj), base.one_idx(), &base);
            let nf = normal_form(&p, &gb, &base);
            prod_nf[i][j] = nf
                .terms
                .iter()
                .map(|(m, &c)| (pos_of(m), c))
                .collect();
        }
    }

    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        limits.check_deadline("building quotient ring tables")?;
        let va = decode(a);
        for b in 0..order {
            let vb = decode(b);
            let sum: Vec<u32> = va
                .iter()
                .zip(&vb)
                .map(|(&x, &y)| base.add_idx(x, y))
                .collect();
            add[a * order + b] = encode(&sum);
            let mut acc = vec![0u32; basis.len()];
            for (i, &ca) in va.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (j, &cb) in vb.iter().enumerate() {
                    if cb == 0 {
                        continue;
                    }
                    let c = base.mul_idx(ca, cb);
                    for &(pos, bc) in &prod_nf[i][j] {
                        acc[pos] = base.add_idx(acc[pos], base.mul_idx(c, bc));
                    }
                }
            }
            mul[a * order + b] = encode(&acc);
        }
    }

    let labels = (0..order)
        .map(|i| quot_label(&decode(i), &basis, &base, vars))
        .collect();
    let spec = RingSpec::Quot {
        base: Box::new(base_spec.clone()),
        vars: vars.to_vec(),
        relations: relations.to_vec(),
    };
    Ok(Arc::new(FiniteRing::from_parts(
        order,
        base.one_idx(),
        add,
        mul,
        labels,
        Codec::Quot {
            base,
            vars: vars.to_vec(),
            basis,
            gb,
        },
        spec.to_string(),
    )?))
}

fn quot_label(coeffs: &[u32], basis: &[Mono], base: &FiniteRing, vars: &[char]) -> String {
    let mut terms: Vec<(&Mono, u32)> = basis
        .iter()
        .zip(coeffs)
        .filter_map(|(m, &c)| (c != 0).then_some((m, c)))
        .collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    // display order: descending degree, then declared variable order
    terms.sort_by(|a, b| {
        b.0.total_degree()
            .cmp(&a.0.total_degree())
            .then_with(|| b.0 .0.cmp(&a.0 .0))
    });
    let mut out = String::new();
    for (i, (mono, c)) in terms.iter().enumerate() {
        if i > 0 {
            out.push('+');
        }
        let is_const = mono.total_degree() == 0;
        if *c != base.one_idx() || is_const {
            let lbl = base.label(crate::ring::RingElement(*c));
            if lbl.contains('+') {
                out.push('(');
                out.push_str(lbl);
                out.push(')');
            } else {
                out.push_str(lbl);
            }
        }
        for (v, &e) in vars.iter().zip(&mono.0) {
            if e == 1 {
                out.push(*v);
            } else if e > 1 {
                out.push(*v);
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
    out
}

fn build_matrix(
    m: usize,
    base_spec: &RingSpec,
    upper_only: bool,
    limits: &Limits,
) -> Result<Arc<FiniteRing>> {
    let base = build_ring(base_spec, limits)?;
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for r in 0..m {
        for c in 0..m {
            if !upper_only || c >= r {
                positions.push((r, c));
            }
        }
    }
    let q = base.order() as u64;
    let tag = if upper_only { "tri" } else { "mat" };
    let order = checked_order(
        &format!("{tag} order"),
        q.checked_pow(positions.len() as u32),
        limits,
    )?;
    let decode = |idx: usize| -> Vec<u32> {
        // big-endian: the first position is the most significant digit
        let mut v = vec![0u32; positions.len()];
        let mut rest = idx as u64;
        for slot in v.iter_mut().rev() {
            *slot = (rest % q) as u32;
            rest /= q;
        }
        v
    };
    let encode = |entries: &[u32]| -> u32 {
        let mut idx = 0u64;
        for &e in entries {
            idx = idx * q + e as u64;
        }
        idx as u32
    };
    let grid_of = |entries: &[u32]| -> Vec<u32> {
        let mut g = vec![0u32; m * m];
        for (&(r, c), &e) in positions.iter().zip(entries) {
            g[r * m + c] = e;
        }
        g
    };
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        limits.check_deadline("building matrix ring tables")?;
        let va = decode(a);
        let ga = grid_of(&va);
        for b in 0..order {
            let vb = decode(b);
            let sum: Vec<u32> = va
                .iter()
                .zip(&vb)
                .map(|(&x, &y)| base.add_idx(x, y))
                .collect();
            add[a * order + b] = encode(&sum);
            let gb = grid_of(&vb);
            let mut entries = Vec::with_capacity(positions.len());
            for &(r, c) in &positions {
                let mut acc = 0u32;
                for t in 0..m {
                    acc = base.add_idx(acc, base.mul_idx(ga[r * m + t], gb[t * m + c]));
                }
                entries.push(acc);
            }
            mul[a * order + b] = encode(&entries);
        }
    }
    let one_entries: Vec<u32> = positions
        .iter()
        .map(|&(r, c)| if r == c { base.one_idx() } else { 0 })
        .collect();
    let one = encode(&one_entries);
    let labels = (0..order)
        .map(|i| {
            let entries = decode(i);
            let parts: Vec<&str> = entries
                .iter()
                .map(|&e| base.label(crate::ring::RingElement(e)))
                .collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let spec = if upper_only {
        RingSpec::Tri {
            m: m as u32,
            base: Box::new(base_spec.clone()),
        }
    } else {
        RingSpec::Mat {
            m: m as u32,
            base: Box::new(base_spec.clone()),
        }
    };
    Ok(Arc::new(FiniteRing::from_parts(
        order,
        one,
        add,
        mul,
        labels,
        Codec::Matrix { base, positions },
        spec.to_string(),
    )?))
}

fn build_prod(factor_specs: &[RingSpec], limits: &Limits) -> Result<Arc<FiniteRing>> {
    let mut factors = Vec::with_capacity(factor_specs.len());
    for f in factor_specs {
        factors.push(build_ring(f, limits)?);
    }
    let mut order_u64: u64 = 1;
    for f in &factors {
        order_u64 = order_u64
            .checked_mul(f.order() as u64)
            .ok_or_else(|| Error::GuardExceeded {
                what: "prod order".into(),
                actual: u64::MAX,
                limit: limits.max_ring_order,
            })?;
    }
    let order = checked_order("prod order", Some(order_u64), limits)?;
    let decode = |idx: usize| -> Vec<u32> {
        // big-endian lexicographic tuples
        let mut v = vec![0u32; factors.len()];
        let mut rest = idx as u64;
        for (slot, f) in v.iter_mut().zip(&factors).rev() {
            let q = f.order() as u64;
            *slot = (rest % q) as u32;
            rest /= q;
        }
        v
    };
    let encode = |comps: &[u32]| -> u32 {
        let mut idx = 0u64;
        for (&c, f) in comps.iter().zip(&factors) {
            idx = idx * f.order() as u64 + c as u64;
        }
        idx as u32
    };
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        limits.check_deadline("building product ring tables")?;
        let va = decode(a);
        for b in 0..order {
            let vb = decode(b);
            let sum: Vec<u32> = va
                .iter()
                .zip(&vb)
                .zip(&factors)
                .map(|((&x, &y), f)| f.add_idx(x, y))
                .collect();
            let prod: Vec<u32> = va
                .iter()
                .zip(&vb)
                .zip(&factors)
                .map(|((&x, &y), f)| f.mul_idx(x, y))
                .collect();
            add[a * order + b] = encode(&sum);
            mul[a * order + b] = encode(&prod);
        }
    }
    let ones: Vec<u32> = factors.iter().map(|f| f.one_idx()).collect();
    let one = encode(&ones);
    let labels = (0..order)
        .map(|i| {
            let comps = decode(i);
            let parts: Vec<&str> = comps
                .iter()
                .zip(&factors)
                .map(|(&c, f)| f.label(crate::ring::RingElement(c)))
                .collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let spec = RingSpec::Prod {
        factors: factor_specs.to_vec(),
    };
    Ok(Arc::new(FiniteRing::from_parts(
        order,
        one,
        add,
        mul,
        labels,
        Codec::Prod { factors },
        spec.to_string(),
    )?))
}
