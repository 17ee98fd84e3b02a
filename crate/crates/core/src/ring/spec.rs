//! The textual ring-spec language.
//!
//! Grammar (ASCII):
//!
//! ```text
//! spec  := "zmod" INT
//!        | "gf" PRIME [INT [POLY]]          modulus POLY required for k >= 2
//!        | "quot" spec "[" VAR,* "]" "/" "(" POLY,* ")"
//!        | "tri" INT "over" spec
//!        | "mat" INT "over" spec
//!        | "prod" "(" spec ("," spec)+ ")"
//! ```
//!
//! Polynomials use caret powers, `+`/`-` separators and juxtaposed
//! variables (`x^2+xy+2`). The lexer splits alphabetic and numeric runs,
//! so `gf2` reads as `gf 2`.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    Zmod {
        n: u64,
    },
    Gf {
        p: u64,
        k: u32,
        /// Monic modulus, little-endian coefficients reduced mod p.
        /// Only meaningful for k >= 2; `[0, 1]` (the polynomial x) for k = 1.
        modulus: Vec<u64>,
    },
    Quot {
        base: Box<RingSpec>,
        vars: Vec<char>,
        relations: Vec<SpecPoly>,
    },
    Tri {
        m: u32,
        base: Box<RingSpec>,
    },
    Mat {
        m: u32,
        base: Box<RingSpec>,
    },
    Prod {
        factors: Vec<RingSpec>,
    },
}

/// A multivariate polynomial literal with integer coefficients, as parsed.
/// Exponent vectors are indexed by the enclosing `quot`'s variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecPoly {
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl SpecPoly {
    /// Structurally zero (no term with a nonzero integer coefficient).
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == 0)
    }
}

fn fmt_monomial(exps: &[u32], vars: &[char], out: &mut String) {
    for (v, &e) in vars.iter().zip(exps) {
        if e == 1 {
            out.push(*v);
        } else if e > 1 {
            out.push(*v);
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Canonical rendering used in reports and hashes: terms sorted by
/// descending total degree, then by the declared variable order.
pub fn fmt_spec_poly(p: &SpecPoly, vars: &[char]) -> String {
    let mut terms: Vec<(i64, Vec<u32>)> =
        p.terms.iter().filter(|(c, _)| *c != 0).cloned().collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.1.iter().sum();
        let db: u32 = b.1.iter().sum();
        db.cmp(&da).then_with(|| b.1.cmp(&a.1))
    });
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, exps)) in terms.iter().enumerate() {
        if i > 0 {
            out.push('+');
        }
        let is_const = exps.iter().all(|&e| e == 0);
        if *c != 1 || is_const {
            out.push_str(&c.to_string());
        }
        fmt_monomial(exps, vars, &mut out);
    }
    out
}

pub(crate) fn fmt_univar(coeffs: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mut s = String::new();
        if c != 1 || deg == 0 {
            s.push_str(&c.to_string());
        }
        if deg == 1 {
            s.push('x');
        } else if deg > 1 {
            s.push_str(&format!("x^{deg}"));
        }
        parts.push(s);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod { n } => write!(f, "zmod {n}"),
            RingSpec::Gf { p, k, modulus } => {
                if *k == 1 {
                    write!(f, "gf {p} 1")
                } else {
                    write!(f, "gf {p} {k} {}", fmt_univar(modulus))
                }
            }
            RingSpec::Quot {
                base,
                vars,
                relations,
            } => {
                let vs: Vec<String> = vars.iter().map(|c| c.to_string()).collect();
                let rs: Vec<String> = relations.iter().map(|p| fmt_spec_poly(p, vars)).collect();
                write!(f, "quot {base} [{}]/({})", vs.join(","), rs.join(","))
            }
            RingSpec::Tri { m, base } => write!(f, "tri {m} over {base}"),
            RingSpec::Mat { m, base } => write!(f, "mat {m} over {base}"),
            RingSpec::Prod { factors } => {
                let fs: Vec<String> = factors.iter().map(|s| s.to_string()).collect();
                write!(f, "prod ({})", fs.join(", "))
            }
        }
    }
}

// --- lexer ---

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                i += 1;
            }
            toks.push(Tok {
                kind: TokKind::Ident(text[start..i].to_string()),
                pos: start,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v: u64 = text[start..i].parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "integer literal too large".into(),
            })?;
            toks.push(Tok {
                kind: TokKind::Int(v),
                pos: start,
            });
        } else if "()[]/,^+-*".contains(c) {
            toks.push(Tok {
                kind: TokKind::Sym(c),
                pos: i,
            });
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(toks)
}

// --- parser ---

struct Parser {
    toks: Vec<Tok>,
    i: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.i).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.len, |t| t.pos)
    }

    fn bump(&mut self) -> Option<TokKind> {
        let t = self.toks.get(self.i).map(|t| t.kind.clone());
        self.i += 1;
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect_int(&mut self, what: &str) -> Result<u64> {
        match self.peek() {
            Some(TokKind::Int(v)) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => self.syntax(format!("expected {what} (an integer)")),
        }
    }

    fn expect_sym(&mut self, s: char) -> Result<()> {
        match self.peek() {
            Some(TokKind::Sym(c)) if *c == s => {
                self.bump();
                Ok(())
            }
            _ => self.syntax(format!("expected {s:?}")),
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<()> {
        match self.peek() {
            Some(TokKind::Ident(id)) if id == s => {
                self.bump();
                Ok(())
            }
            _ => self.syntax(format!("expected {s:?}")),
        }
    }

    fn parse_spec(&mut self) -> Result<RingSpec> {
        let kw = match self.peek() {
            Some(TokKind::Ident(id)) => id.clone(),
            _ => return self.syntax("expected a ring kind (zmod/gf/quot/tri/mat/prod)"),
        };
        self.bump();
        match kw.as_str() {
            "zmod" => {
                let n = self.expect_int("the modulus")?;
                if n < 2 {
                    return Err(Error::Semantic(format!("zmod modulus must be >= 2, got {n}")));
                }
                Ok(RingSpec::Zmod { n })
            }
            "gf" => {
                let p = self.expect_int("the characteristic")?;
                if !is_prime(p) {
                    return Err(Error::Semantic(format!(
                        "gf characteristic must be prime, got {p}"
                    )));
                }
                let k = match self.peek() {
                    Some(TokKind::Int(v)) => {
                        let v = *v;
                        self.bump();
                        v
                    }
                    _ => 1,
                };
                if k == 0 || k > 16 {
                    return Err(Error::Semantic(format!(
                        "gf extension degree must be in 1..=16, got {k}"
                    )));
                }
                let modulus = if k >= 2 {
                    let poly = self.parse_poly(&['x'])?;
                    univar_from_spec_poly(&poly, p, k as u32, self.pos())?
                } else {
                    vec![0, 1]
                };
                Ok(RingSpec::Gf {
                    p,
                    k: k as u32,
                    modulus,
                })
            }
            "quot" => {
                let base = self.parse_spec()?;
                self.expect_sym('[')?;
                let mut vars: Vec<char> = Vec::new();
                loop {
                    match self.bump() {
                        Some(TokKind::Ident(id)) if id.len() == 1 => {
                            let v = id.chars().next().unwrap();
                            if vars.contains(&v) {
                                return Err(Error::Semantic(format!(
                                    "duplicate quotient variable {v:?}"
                                )));
                            }
                            vars.push(v);
                        }
                        _ => return self.syntax("expected a single-letter variable"),
                    }
                    match self.bump() {
                        Some(TokKind::Sym(',')) => continue,
                        Some(TokKind::Sym(']')) => break,
                        _ => return self.syntax("expected ',' or ']'"),
                    }
                }
                self.expect_sym('/')?;
                self.expect_sym('(')?;
                let mut relations = Vec::new();
                loop {
                    relations.push(self.parse_poly(&vars)?);
                    match self.bump() {
                        Some(TokKind::Sym(',')) => continue,
                        Some(TokKind::Sym(')')) => break,
                        _ => return self.syntax("expected ',' or ')'"),
                    }
                }
                if relations.iter().all(|r| r.is_zero()) {
                    return Err(Error::Semantic(
                        "quotient relations are all zero; the quotient ring is infinite".into(),
                    ));
                }
                Ok(RingSpec::Quot {
                    base: Box::new(base),
                    vars,
                    relations,
                })
            }
            "tri" | "mat" => {
                let m = self.expect_int("the matrix size")?;
                if m == 0 || m > 8 {
                    return Err(Error::Semantic(format!(
                        "matrix size must be in 1..=8, got {m}"
                    )));
                }
                self.expect_ident("over")?;
                let base = Box::new(self.parse_spec()?);
                Ok(if kw == "tri" {
                    RingSpec::Tri { m: m as u32, base }
                } else {
                    RingSpec::Mat { m: m as u32, base }
                })
            }
            "prod" => {
                self.expect_sym('(')?;
                let mut factors = vec![self.parse_spec()?];
                loop {
                    match self.bump() {
                        Some(TokKind::Sym(',')) => factors.push(self.parse_spec()?),
                        Some(TokKind::Sym(')')) => break,
                        _ => return self.syntax("expected ',' or ')'"),
                    }
                }
                if factors.len() < 2 {
                    return Err(Error::Semantic("prod needs at least two factors".into()));
                }
                Ok(RingSpec::Prod { factors })
            }
            other => self.syntax(format!("unknown ring kind {other:?}")),
        }
    }

    /// Parses a polynomial in the given variables. Consumes tokens while
    /// they can continue the polynomial; stops at any structural symbol.
    fn parse_poly(&mut self, vars: &[char]) -> Result<SpecPoly> {
        let mut terms: Vec<(i64, Vec<u32>)> = Vec::new();
        let mut sign: i64 = 1;
        if let Some(TokKind::Sym('-')) = self.peek() {
            self.bump();
            sign = -1;
        }
        loop {
            terms.push(self.parse_term(vars, sign)?);
            match self.peek() {
                Some(TokKind::Sym('+')) => {
                    self.bump();
                    sign = 1;
                }
                Some(TokKind::Sym('-')) => {
                    self.bump();
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(SpecPoly { terms })
    }

    fn parse_term(&mut self, vars: &[char], sign: i64) -> Result<(i64, Vec<u32>)> {
        let mut coeff: i64 = 1;
        let mut exps = vec![0u32; vars.len()];
        let mut saw_anything = false;
        if let Some(TokKind::Int(v)) = self.peek() {
            coeff = *v as i64;
            self.bump();
            saw_anything = true;
            if let Some(TokKind::Sym('*')) = self.peek() {
                self.bump();
            }
        }
        loop {
            match self.peek() {
                Some(TokKind::Ident(id)) => {
                    let id = id.clone();
                    // juxtaposed run of variables, e.g. "xy"
                    let mut run: Vec<usize> = Vec::with_capacity(id.len());
                    for ch in id.chars() {
                        match vars.iter().position(|v| *v == ch) {
                            Some(ix) => run.push(ix),
                            None => {
                                return Err(Error::Semantic(format!(
                                    "undeclared variable {ch:?} in polynomial"
                                )))
                            }
                        }
                    }
                    self.bump();
                    saw_anything = true;
                    // a caret binds to the last variable of the run
                    let mut power: u32 = 1;
                    if let Some(TokKind::Sym('^')) = self.peek() {
                        self.bump();
                        let e = self.expect_int("an exponent")?;
                        if e > 64 {
                            return Err(Error::Semantic(format!("exponent {e} too large")));
                        }
                        power = e as u32;
                    }
                    let last = *run.last().unwrap();
                    for &ix in &run[..run.len() - 1] {
                        exps[ix] += 1;
                    }
                    exps[last] += power;
                    if let Some(TokKind::Sym('*')) = self.peek() {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        if !saw_anything {
            return self.syntax("expected a polynomial term");
        }
        Ok((sign * coeff, exps))
    }
}

fn univar_from_spec_poly(poly: &SpecPoly, p: u64, k: u32, pos: usize) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; k as usize + 1];
    for (c, exps) in &poly.terms {
        let deg = exps[0] as usize;
        if deg >= coeffs.len() {
            return Err(Error::Semantic(format!(
                "gf modulus degree {} exceeds the extension degree {}",
                deg, k
            )));
        }
        let r = c.rem_euclid(p as i64) as u64;
        coeffs[deg] = (coeffs[deg] + r) % p;
    }
    if coeffs[k as usize] == 0 {
        return Err(Error::Syntax {
            pos,
            msg: format!("gf modulus must have degree exactly {k}"),
        });
    }
    // normalize to monic
    let lead = coeffs[k as usize];
    if lead != 1 {
        let inv = mod_inverse(lead, p).ok_or_else(|| {
            Error::Semantic(format!("leading coefficient {lead} not invertible mod {p}"))
        })?;
        for c in coeffs.iter_mut() {
            *c = *c * inv % p;
        }
    }
    Ok(coeffs)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    // extended euclid on (a, p)
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Parses a standalone polynomial literal over the given variables.
pub(crate) fn parse_poly_literal(text: &str, vars: &[char]) -> Result<SpecPoly> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        len: text.len(),
    };
    let poly = p.parse_poly(vars)?;
    if p.i != p.toks.len() {
        return p.syntax("trailing input after polynomial");
    }
    Ok(poly)
}

/// Parses the textual ring-spec language. Total and deterministic: the
/// same input always yields the same [`RingSpec`] or the same error.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        len: text.len(),
    };
    let spec = p.parse_spec()?;
    if p.i != p.toks.len() {
        return p.syntax("trailing input after ring spec");
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_zmod() {
        assert_eq!(parse_ring_spec("zmod 4").unwrap(), RingSpec::Zmod { n: 4 });
        assert!(matches!(
            parse_ring_spec("zmod 1"),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn parses_gf_with_modulus() {
        let s = parse_ring_spec("gf 2 2 x^2+x+1").unwrap();
        assert_eq!(
            s,
            RingSpec::Gf {
                p: 2,
                k: 2,
                modulus: vec![1, 1, 1]
            }
        );
        assert_eq!(s.to_string(), "gf 2 2 x^2+x+1");
    }

    #[test]
    fn gf_defaults_to_prime_field() {
        assert_eq!(
            parse_ring_spec("gf 2 1").unwrap(),
            RingSpec::Gf {
                p: 2,
                k: 1,
                modulus: vec![0, 1]
            }
        );
        assert!(matches!(
            parse_ring_spec("gf 4"),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn parses_nested_tri() {
        let s = parse_ring_spec("tri 2 over gf 2 1").unwrap();
        assert_eq!(
            s,
            RingSpec::Tri {
                m: 2,
                base: Box::new(RingSpec::Gf {
                    p: 2,
                    k: 1,
                    modulus: vec![0, 1]
                })
            }
        );
    }

    #[test]
    fn parses_quot_with_fused_gf_token() {
        // "gf2" lexes as "gf 2"; the bracket stops the k lookahead.
        let s = parse_ring_spec("quot gf2 [x,y]/(x^2,xy,y^2)").unwrap();
        match &s {
            RingSpec::Quot {
                base,
                vars,
                relations,
            } => {
                assert_eq!(**base, parse_ring_spec("gf 2 1").unwrap());
                assert_eq!(vars, &vec!['x', 'y']);
                assert_eq!(relations.len(), 3);
                assert_eq!(relations[1].terms, vec![(1, vec![1, 1])]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(s.to_string(), "quot gf 2 1 [x,y]/(x^2,xy,y^2)");
    }

    #[test]
    fn parses_prod() {
        let s = parse_ring_spec("prod (zmod 2, zmod 3)").unwrap();
        assert_eq!(s.to_string(), "prod (zmod 2, zmod 3)");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_ring_spec("zmod") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_ring_spec("zmod 4 junk") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
    }
}
