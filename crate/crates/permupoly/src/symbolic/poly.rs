//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Terms are kept in descending graded-lexicographic order (total degree
//! first, then the variable order of the owning [`VarSet`]), with no zero
//! coefficients stored. Exponent vectors are packed into a `u128`: the top
//! field holds the total degree so the packed value orders terms directly.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Width of one packed exponent field.
const FIELD_BITS: u32 = 11;
/// Maximum value storable in one field.
const FIELD_MAX: u64 = (1 << FIELD_BITS) - 1;
/// Maximum number of variables (10 variable fields + 1 degree field = 121 bits).
pub const MAX_VARS: usize = 10;

/// Ordered set of variable names; fixed for the lifetime of any polynomial
/// built over it.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<VarSet>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables);
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::Precondition(format!("duplicate variable {n:?}")));
            }
        }
        Ok(Arc::new(VarSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Packed exponent vector. Bit layout, from the most significant end:
/// `[total degree | e_0 | e_1 | ... ]`, each field `FIELD_BITS` wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(i: usize) -> u32 {
        (MAX_VARS as u32 - 1 - i as u32) * FIELD_BITS
    }

    const DEG_SHIFT: u32 = MAX_VARS as u32 * FIELD_BITS;

    pub fn from_exponents(exps: &[u32]) -> Result<Mono> {
        let mut packed: u128 = 0;
        let mut deg: u64 = 0;
        for (i, &e) in exps.iter().enumerate() {
            if e as u64 > FIELD_MAX {
                return Err(Error::Precondition(format!("exponent {e} too large")));
            }
            deg += e as u64;
            packed |= (e as u128) << Mono::shift(i);
        }
        if deg > FIELD_MAX {
            return Err(Error::Precondition(format!("total degree {deg} too large")));
        }
        packed |= (deg as u128) << Mono::DEG_SHIFT;
        Ok(Mono(packed))
    }

    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> Mono::shift(i)) as u64 & FIELD_MAX) as u32
    }

    pub fn total_degree(self) -> u32 {
        ((self.0 >> Mono::DEG_SHIFT) as u64 & FIELD_MAX) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn mul(self, other: Mono) -> Mono {
        let sum = self.0 + other.0;
        debug_assert!(
            (sum >> Mono::DEG_SHIFT) as u64 <= FIELD_MAX,
            "monomial degree overflow"
        );
        Mono(sum)
    }

    pub fn divides(self, other: Mono) -> bool {
        if self.total_degree() > other.total_degree() {
            return false;
        }
        for i in 0..MAX_VARS {
            let shift = Mono::shift(i);
            if (self.0 >> shift) as u64 & FIELD_MAX > (other.0 >> shift) as u64 & FIELD_MAX {
                return false;
            }
        }
        true
    }

    /// other / self; caller must ensure `self.divides(other)`.
    pub fn div_into(self, other: Mono) -> Mono {
        debug_assert!(self.divides(other));
        Mono(other.0 - self.0)
    }

    pub fn gcd(self, other: Mono) -> Mono {
        let mut exps = [0u32; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exponent(i).min(other.exponent(i));
        }
        Mono::from_exponents(&exps).expect("gcd of valid monomials is valid")
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }
}

/// Multiply-fold hasher for packed monomials; the default SipHash dominates
/// the multiplication inner loop otherwise.
#[derive(Default)]
pub struct MonoHasher(u64);

impl Hasher for MonoHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.0 = (self.0 ^ u64::from_le_bytes(buf)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
    }
    fn write_u128(&mut self, v: u128) {
        self.0 = (self.0 ^ (v as u64)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.0 = (self.0 ^ ((v >> 64) as u64)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

type MonoMap = HashMap<Mono, BigInt, BuildHasherDefault<MonoHasher>>;

/// Sparse multivariate polynomial over the integers.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    /// descending graded-lex, nonzero coefficients only
    terms: Vec<(Mono, BigInt)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> MultiPoly {
        MultiPoly { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> MultiPoly {
        let c = c.into();
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.push((Mono::ONE, c));
        }
        p
    }

    pub fn variable(vars: &Arc<VarSet>, name: &str) -> Result<MultiPoly> {
        let idx = vars.index_of(name)?;
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        Ok(MultiPoly {
            vars: vars.clone(),
            terms: vec![(Mono::from_exponents(&exps)?, BigInt::one())],
        })
    }

    /// Build from (exponent vector, coefficient) pairs; merges duplicates.
    pub fn from_terms(
        vars: &Arc<VarSet>,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<MultiPoly> {
        let mut map: MonoMap = MonoMap::default();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Precondition("exponent vector length mismatch".into()));
            }
            let m = Mono::from_exponents(&exps)?;
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Ok(MultiPoly::from_map(vars, map))
    }

    fn from_map(vars: &Arc<VarSet>, map: MonoMap) -> MultiPoly {
        let mut terms: Vec<(Mono, BigInt)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Mono, BigInt)> {
        self.terms.first()
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarSetMismatch)
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (m, c) in &other.terms[j..] {
            out.push((*m, if negate { -c } else { c.clone() }));
        }
        MultiPoly { vars: self.vars.clone(), terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(&self.vars));
        }
        // accumulate into a map; the sort at the end restores canonical order
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut map = MonoMap::with_capacity_and_hasher(
            large.terms.len() * 2,
            BuildHasherDefault::<MonoHasher>::default(),
        );
        for (ms, cs) in &small.terms {
            for (ml, cl) in &large.terms {
                let m = ms.mul(*ml);
                let prod = cs * cl;
                match map.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Ok(MultiPoly::from_map(&self.vars, map))
    }

    pub fn mul_term(&self, m: Mono, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect(),
        }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> MultiPoly {
        self.mul_term(Mono::ONE, c)
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut r = MultiPoly::constant(&self.vars, 1);
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Exact multivariate division: returns h with self = g·h, or an error
    /// carrying the size of the nonzero remainder.
    pub fn exact_div(&self, g: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(g)?;
        let (q, r) = self.div_rem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision { remainder_terms: r.num_terms() })
        }
    }

    /// Single-divisor multivariate division with remainder (graded-lex
    /// leading-term reduction; non-divisible leading terms move to the
    /// remainder).
    pub fn div_rem(&self, g: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_vars(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (gm, gc) = (g.terms[0].0, g.terms[0].1.clone());
        let mut dividend = self.clone();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        let mut rem: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((lm, lc)) = dividend.terms.first().cloned() {
            if gm.divides(lm) {
                let (q, r) = lc.div_rem(&gc);
                if !r.is_zero() {
                    // coefficient not divisible: inexact over ZZ
                    rem.extend(dividend.terms.iter().cloned());
                    break;
                }
                let qm = gm.div_into(lm);
                quot.push((qm, q.clone()));
                let sub = g.mul_term(qm, &q);
                dividend = dividend.merge(&sub, true);
            } else {
                rem.push((lm, lc));
                dividend.terms.remove(0);
            }
        }
        quot.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        rem.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Ok((
            MultiPoly { vars: self.vars.clone(), terms: quot },
            MultiPoly { vars: self.vars.clone(), terms: rem },
        ))
    }

    // ---------- views of one variable ----------

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.total_degree()).unwrap_or(0)
    }

    /// Coefficients of self as a polynomial in variable `v`: entry d is the
    /// coefficient of v^d (a polynomial with v-exponent zero).
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out: Vec<Vec<(Mono, BigInt)>> = vec![Vec::new(); deg + 1];
        let mut vexp = vec![0u32; self.vars.len()];
        for (m, c) in &self.terms {
            let d = m.exponent(v) as usize;
            vexp[v] = d as u32;
            let stripped = Mono::from_exponents(&vexp).unwrap().div_into(*m);
            out[d].push((stripped, c.clone()));
        }
        out.into_iter()
            .map(|mut terms| {
                terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { vars: self.vars.clone(), terms }
            })
            .collect()
    }

    /// Rebuild from coefficients in variable `v` (inverse of `coeffs_in`).
    pub fn from_coeffs_in(
        vars: &Arc<VarSet>,
        v: usize,
        coeffs: &[MultiPoly],
    ) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(vars);
        let mut vexp = vec![0u32; vars.len()];
        for (d, c) in coeffs.iter().enumerate() {
            vexp[v] = d as u32;
            let m = Mono::from_exponents(&vexp)?;
            acc = acc.add(&c.mul_term(m, &BigInt::one()))?;
        }
        Ok(acc)
    }

    /// Integer content (gcd of coefficients, positive) and primitive part.
    pub fn content_and_primitive(&self) -> Result<(BigInt, MultiPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroContent);
        }
        let mut content = BigInt::zero();
        for (_, c) in &self.terms {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        let prim = MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c / &content)).collect(),
        };
        Ok((content, prim))
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let mut g = match it.next() {
            Some((m, _)) => *m,
            None => return Mono::ONE,
        };
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(*m);
        }
        g
    }

    /// Divide out a monomial (must divide every term).
    pub fn div_monomial(&self, m: Mono) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(tm, c)| (m.div_into(*tm), c.clone())).collect(),
        }
    }

    /// Whether the graded-lex leading coefficient is negative.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.first().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (vi, name) in self.vars.names().iter().enumerate() {
                let e = m.exponent(vi);
                if e > 0 {
                    if wrote {
                        write!(f, "*")?;
                    }
                    write!(f, "{name}")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

// ---------- a small expression parser for tests and pipeline data ----------

/// Parse an integer-coefficient polynomial expression over `vars`.
/// Supports `+ - * ^ ( )`, implicit multiplication is NOT supported:
/// write `2*A*x^2`, `(C-1)^2*x + a`.
pub fn parse_poly(vars: &Arc<VarSet>, input: &str) -> Result<MultiPoly> {
    let mut p = Parser { vars, s: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(Error::Precondition(format!(
            "trailing input at {} in {input:?}",
            p.pos
        )));
    }
    Ok(e)
}

struct Parser<'a> {
    vars: &'a Arc<VarSet>,
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'-' {
                self.pos += 1;
                negate = true;
            } else if c == b'+' {
                self.pos += 1;
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.power()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Precondition("bad exponent".into()))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Precondition("expected )".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(MultiPoly::constant(self.vars, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                MultiPoly::variable(self.vars, name)
            }
            other => Err(Error::Precondition(format!("unexpected token {other:?}"))),
        }
    }
}

// ---------- JSON serialization (term-list schema) ----------

/// Serialize as the term-list schema: `[{"e":[...],"c":"<decimal>"}, ...]`
/// in canonical (descending graded-lex) order.
pub fn poly_to_json(p: &MultiPoly) -> serde_json::Value {
    let n = p.vars().len();
    serde_json::Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "e": m.exponents(n),
                    "c": c.to_string(),
                })
            })
            .collect(),
    )
}

pub fn poly_from_json(vars: &Arc<VarSet>, v: &serde_json::Value) -> Result<MultiPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Precondition("expected term array".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let e: Vec<u32> = t["e"]
            .as_array()
            .ok_or_else(|| Error::Precondition("missing e".into()))?
            .iter()
            .map(|x| x.as_u64().unwrap_or(0) as u32)
            .collect();
        let c: BigInt = t["c"]
            .as_str()
            .ok_or_else(|| Error::Precondition("missing c".into()))?
            .parse()
            .map_err(|_| Error::Precondition("bad coefficient".into()))?;
        terms.push((e, c));
    }
    MultiPoly::from_terms(vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> Arc<VarSet> {
        VarSet::new(["x", "A", "B", "C"]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let v = vs();
        let p = parse_poly(&v, "x^2 - 1").unwrap();
        assert_eq!(p.to_string(), "x^2 - 1");
        let q = parse_poly(&v, "(C - 1)^2*x + 3*A*B").unwrap();
        assert_eq!(q.to_string(), "x*C^2 - 2*x*C + 3*A*B + x");
    }

    #[test]
    fn arithmetic_basics() {
        let v = vs();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        // (x+1)(x-1) = x^2 - 1
        assert_eq!(p("x + 1").mul(&p("x - 1")).unwrap(), p("x^2 - 1"));
        // f + 0 = f
        let f = p("A^2*x - 3*B");
        assert_eq!(f.add(&MultiPoly::zero(&v)).unwrap(), f);
        // (A+B)^2 = A^2 + 2AB + B^2
        assert_eq!(p("(A + B)^2"), p("A^2 + 2*A*B + B^2"));
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let v1 = vs();
        let v2 = VarSet::new(["x", "y"]).unwrap();
        let a = parse_poly(&v1, "x").unwrap();
        let b = parse_poly(&v2, "x").unwrap();
        assert!(matches!(a.add(&b), Err(Error::VarSetMismatch)));
    }

    #[test]
    fn exact_division() {
        let v = vs();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        assert_eq!(p("x^2 - 1").exact_div(&p("x - 1")).unwrap(), p("x + 1"));
        // monomial division
        assert_eq!(
            p("A^2*x^4 + A^2*x^5").exact_div(&p("A^2")).unwrap(),
            p("x^4 + x^5")
        );
        // inexact: remainder 2
        match p("x^2 + 1").exact_div(&p("x - 1")) {
            Err(Error::InexactDivision { remainder_terms }) => assert_eq!(remainder_terms, 1),
            other => panic!("expected inexact division, got {other:?}"),
        }
    }

    #[test]
    fn content_and_primitive() {
        let v = vs();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        let (c, prim) = p("2*x + 4").content_and_primitive().unwrap();
        assert_eq!(c, BigInt::from(2));
        assert_eq!(prim, p("x + 2"));
        // sign stays on the primitive part
        let (c, prim) = p("-3*x").content_and_primitive().unwrap();
        assert_eq!(c, BigInt::from(3));
        assert_eq!(prim, p("-x"));
        let (c, prim) = p("x + 1").content_and_primitive().unwrap();
        assert_eq!(c, BigInt::from(1));
        assert_eq!(prim, p("x + 1"));
        assert!(MultiPoly::zero(&v).content_and_primitive().is_err());
    }

    #[test]
    fn coeffs_in_round_trip() {
        let v = vs();
        let p = parse_poly(&v, "A*x^3 + (B - 1)*x + C^2").unwrap();
        let xi = v.index_of("x").unwrap();
        let cs = p.coeffs_in(xi);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[3], parse_poly(&v, "A").unwrap());
        let back = MultiPoly::from_coeffs_in(&v, xi, &cs).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_round_trip() {
        let v = vs();
        let p = parse_poly(&v, "7*A^2*B - x^5 + 12").unwrap();
        let j = poly_to_json(&p);
        let q = poly_from_json(&v, &j).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn monomial_content_extraction() {
        let v = vs();
        let p = parse_poly(&v, "A^2*B*x^4 + A^3*x^7").unwrap();
        let mc = p.monomial_content();
        let stripped = p.div_monomial(mc);
        assert_eq!(stripped, parse_poly(&v, "B + A*x^3").unwrap());
    }
}
