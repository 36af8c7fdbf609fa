//! Arithmetic for the tower F_p ⊂ F_q = F_{p^k} ⊂ F_{q^3}.
//!
//! F_q is represented as F_p[t]/(g) and F_{q^3} as F_q[s]/(h), with g and h
//! monic irreducibles. When not supplied they are auto-selected as the
//! lexicographically first irreducibles (coefficient lists read low-to-high
//! degree), so towers are reproducible across runs.
//!
//! The q-power map x ↦ x^q is F_q-linear on F_{q^3}; a [`Tower`] precomputes
//! it as a 3k×3k matrix over F_p so the permutation sweeps can apply it in
//! O((3k)^2) instead of a full exponentiation.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Default cap on the number of elements [`Tower::enumerate`] will stream.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// Parameters defining the tower; `g`/`h` are optional user-supplied moduli.
///
/// `h` coefficients are constants of F_p embedded into F_q, matching the
/// `p^k:g0,..,gk:h0,h1,h2,h3` field-spec string format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn new(p: u64, k: usize) -> Self {
        FieldSpec { p, k, g: None, h: None }
    }

    /// Parse `"p^k"` or `"p^k:g0,g1,...,gk:h0,h1,h2,h3"` (coefficients
    /// low-to-high, integers mod p).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::BadFieldSpec(s.to_string());
        let mut sections = s.split(':');
        let head = sections.next().ok_or_else(bad)?;
        let (p_str, k_str) = match head.split_once('^') {
            Some((a, b)) => (a, b),
            None => (head, "1"),
        };
        let p: u64 = p_str.trim().parse().map_err(|_| bad())?;
        let k: usize = k_str.trim().parse().map_err(|_| bad())?;
        let parse_list = |part: &str| -> Result<Vec<u64>> {
            part.split(',')
                .map(|v| v.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        let g = match sections.next() {
            Some(part) => Some(parse_list(part)?),
            None => None,
        };
        let h = match sections.next() {
            Some(part) => Some(parse_list(part)?),
            None => None,
        };
        if sections.next().is_some() {
            return Err(bad());
        }
        Ok(FieldSpec { p, k, g, h })
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.p, self.k)?;
        if let Some(g) = &self.g {
            write!(f, ":{}", join(g))?;
            if let Some(h) = &self.h {
                write!(f, ":{}", join(h))?;
            }
        }
        Ok(())
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Element of F_q as a length-k coefficient vector over F_p (low-to-high).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseElem(pub(crate) Vec<u64>);

impl BaseElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

/// Element of F_{q^3} as three F_q coordinates, stored flat as 3k digits
/// mod p: chunk i holds the coefficient of s^i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerElem(pub(crate) Vec<u64>);

impl TowerElem {
    /// The three F_q coordinates.
    pub fn coords(&self, t: &Tower) -> [BaseElem; 3] {
        let k = t.k;
        [
            BaseElem(self.0[0..k].to_vec()),
            BaseElem(self.0[k..2 * k].to_vec()),
            BaseElem(self.0[2 * k..3 * k].to_vec()),
        ]
    }
}

/// The tower F_p ⊂ F_q ⊂ F_{q^3} with all precomputed action data.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct Tower {
    pub p: u64,
    pub k: usize,
    /// q = p^k
    pub q: u64,
    /// q^3
    pub q3: u64,
    /// q^3 - 1
    pub order3: u64,
    /// monic degree-k modulus of F_q over F_p, low-to-high, length k+1
    pub g: Vec<u64>,
    /// monic degree-3 modulus of F_{q^3} over F_q; h[i] is an F_q coordinate
    /// vector, i = 0..3, h[3] = 1
    pub h: Vec<Vec<u64>>,
    /// x ↦ x^q as a 3k×3k matrix over F_p; frob[j] is the image of basis j
    frob: Vec<Vec<u64>>,
    /// distinct prime factors of q^3 - 1 (trial division)
    pub order3_primes: Vec<u64>,
    /// enumeration budget (elements)
    pub enum_budget: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense univariate arithmetic mod p (used for modulus validation) ----

fn up_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn up_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let idx = d - dm + i;
                r[idx] = (r[idx] + p - c * m[i] % p) % p;
            }
        }
        r.pop();
        up_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    if r.is_empty() {
        r.push(0);
    }
    up_trim(&mut r);
    r
}

fn up_mulrem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    up_rem(&prod, m, p)
}

fn up_powrem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut acc = up_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = up_mulrem(&result, &acc, m, p);
        }
        acc = up_mulrem(&acc, &acc, m, p);
        e >>= 1;
    }
    result
}

fn up_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    up_trim(&mut x);
    up_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = up_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Degree-k polynomial over F_p is irreducible iff x^{p^k} = x mod g and
/// gcd(x^{p^{k/r}} - x, g) = 1 for every prime r | k.
fn poly_irreducible(g: &[u64], p: u64) -> bool {
    let k = g.len() - 1;
    if k == 0 {
        return false;
    }
    let x = vec![0, 1];
    let pk = p.pow(k as u32);
    let sub_x_mod_g = |mut v: Vec<u64>| -> Vec<u64> {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        up_trim(&mut v);
        up_rem(&v, g, p)
    };
    // x^{p^k} - x must be 0 mod g
    let diff = sub_x_mod_g(up_powrem(&x, pk, g, p));
    if !(diff.len() == 1 && diff[0] == 0) {
        return false;
    }
    for r in prime_factors(k as u64) {
        let e = p.pow((k as u64 / r) as u32);
        let d = sub_x_mod_g(up_powrem(&x, e, g, p));
        let gc = up_gcd(g, &d, p);
        if gc.len() > 1 {
            return false;
        }
    }
    true
}

/// Construct a tower with the default enumeration budget.
pub fn make_tower(spec: &FieldSpec) -> Result<Tower> {
    make_tower_with_budget(spec, DEFAULT_ENUM_BUDGET)
}

/// Construct a tower with an explicit enumeration budget.
pub fn make_tower_with_budget(spec: &FieldSpec, enum_budget: u64) -> Result<Tower> {
    let p = spec.p;
    if p % 2 == 0 {
        return Err(Error::EvenModulus(p));
    }
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    let k = spec.k;
    if k == 0 {
        return Err(Error::ZeroExtensionDegree);
    }
    // q^3 must fit comfortably in u64
    let bits = (64 - p.leading_zeros() as u64) * 3 * k as u64;
    if bits > 62 {
        return Err(Error::FieldTooLarge);
    }
    let q = p.pow(k as u32);
    let q3 = q * q * q;

    let g = match &spec.g {
        Some(g) => {
            let mut g = g.clone();
            g.iter_mut().for_each(|c| *c %= p);
            if g.len() != k + 1 || g[k] != 1 {
                return Err(Error::BadModulusShape { role: "g", degree: k });
            }
            if !poly_irreducible(&g, p) {
                return Err(Error::ReducibleModulus("g"));
            }
            g
        }
        None => first_irreducible_g(p, k),
    };

    let mut tower = Tower {
        p,
        k,
        q,
        q3,
        order3: q3 - 1,
        g,
        h: Vec::new(),
        frob: Vec::new(),
        order3_primes: prime_factors(q3 - 1),
        enum_budget,
    };

    tower.h = match &spec.h {
        Some(h) => {
            if h.len() != 4 || h[3] % p != 1 {
                return Err(Error::BadModulusShape { role: "h", degree: 3 });
            }
            let h: Vec<Vec<u64>> = h
                .iter()
                .map(|&c| {
                    let mut v = vec![0u64; k];
                    v[0] = c % p;
                    v
                })
                .collect();
            if tower.cubic_has_root(&h) {
                return Err(Error::ReducibleModulus("h"));
            }
            h
        }
        None => tower.first_irreducible_h(),
    };

    tower.frob = tower.build_frobenius();
    Ok(tower)
}

fn first_irreducible_g(p: u64, k: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; k];
    loop {
        let mut g = coeffs.clone();
        g.push(1);
        if poly_irreducible(&g, p) {
            return g;
        }
        // low-to-high list compared lexicographically: coeffs[0] is most
        // significant, so advance from the back
        let mut i = k;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no irreducible of degree {k} over F_{p}");
        }
    }
}

impl Tower {
    // ---------- F_q arithmetic on length-k slices ----------

    fn bq_add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.k {
            out[i] = (a[i] + b[i]) % self.p;
        }
    }

    fn bq_sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.k {
            out[i] = (a[i] + self.p - b[i]) % self.p;
        }
    }

    fn bq_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.k;
        let p = self.p;
        if k == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        // reduce by monic g
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for j in 0..k {
                    prod[d - k + j] = (prod[d - k + j] + p - c * self.g[j] % p) % p;
                }
            }
        }
        prod.truncate(k);
        prod
    }

    fn bq_is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn bq_pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = vec![0u64; self.k];
        r[0] = 1;
        let mut acc = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.bq_mul(&r, &acc);
            }
            acc = self.bq_mul(&acc, &acc);
            e >>= 1;
        }
        r
    }

    fn bq_inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if self.bq_is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.bq_pow(a, self.q - 2))
    }

    fn cubic_has_root(&self, h: &[Vec<u64>]) -> bool {
        // iterate all q elements of F_q
        let k = self.k;
        let mut digits = vec![0u64; k];
        loop {
            // evaluate h at digits
            let mut acc = h[3].clone();
            for i in (0..3).rev() {
                acc = self.bq_mul(&acc, &digits);
                let mut s = vec![0u64; k];
                self.bq_add(&acc, &h[i], &mut s);
                acc = s;
            }
            if self.bq_is_zero(&acc) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return false;
                }
                digits[i] += 1;
                if digits[i] < self.p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    fn first_irreducible_h(&self) -> Vec<Vec<u64>> {
        let k = self.k;
        // h_i coordinate lists concatenated, compared lexicographically with
        // the earliest entry most significant; advance from the back.
        let mut flat = vec![0u64; 3 * k];
        loop {
            let h: Vec<Vec<u64>> = (0..3)
                .map(|i| flat[i * k..(i + 1) * k].to_vec())
                .chain(std::iter::once({
                    let mut one = vec![0u64; k];
                    one[0] = 1;
                    one
                }))
                .collect();
            if !self.bq_is_zero(&h[0]) && !self.cubic_has_root(&h) {
                return h;
            }
            let mut i = 3 * k;
            loop {
                i -= 1;
                flat[i] += 1;
                if flat[i] < self.p {
                    break;
                }
                flat[i] = 0;
                assert!(i > 0, "no irreducible cubic over F_q");
            }
        }
    }

    fn build_frobenius(&self) -> Vec<Vec<u64>> {
        let n = 3 * self.k;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut basis = TowerElem(vec![0u64; n]);
            basis.0[j] = 1;
            let img = self.pow(&basis, self.q);
            cols.push(img.0);
        }
        // sanity: phi^3 = identity on the basis
        for j in 0..n {
            let mut e = TowerElem(vec![0u64; n]);
            e.0[j] = 1;
            let mut y = e.clone();
            for _ in 0..3 {
                y = TowerElem(self.frob_apply_cols(&cols, &y.0));
            }
            debug_assert_eq!(y, e, "frobenius cube is not the identity");
        }
        cols
    }

    fn frob_apply_cols(&self, cols: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let n = 3 * self.k;
        let mut out = vec![0u64; n];
        for (j, &d) in x.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for i in 0..n {
                out[i] = (out[i] + d * cols[j][i]) % self.p;
            }
        }
        out
    }

    // ---------- element constructors ----------

    pub fn zero(&self) -> TowerElem {
        TowerElem(vec![0u64; 3 * self.k])
    }

    pub fn one(&self) -> TowerElem {
        let mut e = self.zero();
        e.0[0] = 1;
        e
    }

    /// Embed an integer (mod p) into the tower.
    pub fn embed_int(&self, c: i64) -> TowerElem {
        let mut e = self.zero();
        e.0[0] = c.rem_euclid(self.p as i64) as u64;
        e
    }

    /// Embed an F_q element into the tower.
    pub fn embed_base(&self, b: &BaseElem) -> TowerElem {
        let mut e = self.zero();
        e.0[..self.k].copy_from_slice(&b.0);
        e
    }

    pub fn base_zero(&self) -> BaseElem {
        BaseElem(vec![0u64; self.k])
    }

    pub fn base_from_int(&self, c: i64) -> BaseElem {
        let mut b = self.base_zero();
        b.0[0] = c.rem_euclid(self.p as i64) as u64;
        b
    }

    pub fn base_from_coords(&self, coords: &[u64]) -> Result<BaseElem> {
        if coords.len() != self.k {
            return Err(Error::Precondition(format!(
                "base element needs {} coordinates, got {}",
                self.k,
                coords.len()
            )));
        }
        Ok(BaseElem(coords.iter().map(|&c| c % self.p).collect()))
    }

    pub fn elem_from_coords(&self, coords: &[Vec<u64>]) -> Result<TowerElem> {
        if coords.len() != 3 {
            return Err(Error::Precondition("tower element needs 3 coordinates".into()));
        }
        let mut flat = Vec::with_capacity(3 * self.k);
        for c in coords {
            flat.extend(self.base_from_coords(c)?.0);
        }
        Ok(TowerElem(flat))
    }

    pub fn is_zero(&self, x: &TowerElem) -> bool {
        x.0.iter().all(|&d| d == 0)
    }

    /// The element lies in the embedded base field iff its s^1 and s^2
    /// coordinates vanish.
    pub fn in_base(&self, x: &TowerElem) -> bool {
        x.0[self.k..].iter().all(|&d| d == 0)
    }

    pub fn to_base(&self, x: &TowerElem) -> Option<BaseElem> {
        self.in_base(x).then(|| BaseElem(x.0[..self.k].to_vec()))
    }

    // ---------- field arithmetic ----------

    pub fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let k = self.k;
        // schoolbook over F_q into 5 chunks, then reduce by monic h
        let mut chunks: Vec<Vec<u64>> = vec![vec![0u64; k]; 5];
        for i in 0..3 {
            let ai = &a.0[i * k..(i + 1) * k];
            if ai.iter().all(|&d| d == 0) {
                continue;
            }
            for j in 0..3 {
                let bj = &b.0[j * k..(j + 1) * k];
                let prod = self.bq_mul(ai, bj);
                let c = &mut chunks[i + j];
                for (t, v) in c.iter_mut().zip(prod) {
                    *t = (*t + v) % self.p;
                }
            }
        }
        for d in (3..5).rev() {
            let c = chunks[d].clone();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            chunks[d] = vec![0u64; k];
            for j in 0..3 {
                let sub = self.bq_mul(&c, &self.h[j]);
                let tgt = &mut chunks[d - 3 + j];
                for (t, v) in tgt.iter_mut().zip(sub) {
                    *t = (*t + self.p - v % self.p) % self.p;
                }
            }
        }
        let mut flat = Vec::with_capacity(3 * k);
        for chunk in &chunks[..3] {
            flat.extend_from_slice(chunk);
        }
        TowerElem(flat)
    }

    /// Multiply by a base-field scalar (cheaper than a full tower multiply).
    pub fn scale_base(&self, c: &BaseElem, x: &TowerElem) -> TowerElem {
        let k = self.k;
        let mut flat = Vec::with_capacity(3 * k);
        for i in 0..3 {
            flat.extend(self.bq_mul(&c.0, &x.0[i * k..(i + 1) * k]));
        }
        TowerElem(flat)
    }

    pub fn inv(&self, a: &TowerElem) -> Result<TowerElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order3 - 1))
    }

    pub fn div(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Square-and-multiply; 0^0 = 1 by convention.
    pub fn pow(&self, x: &TowerElem, mut e: u64) -> TowerElem {
        let mut r = self.one();
        let mut acc = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &acc);
            }
            acc = self.mul(&acc, &acc);
            e >>= 1;
        }
        r
    }

    /// x ↦ x^q via the precomputed linear action.
    pub fn frobenius(&self, x: &TowerElem) -> TowerElem {
        TowerElem(self.frob_apply_cols(&self.frob, &x.0))
    }

    /// The norm x ↦ x^{q^2+q+1} onto F_q, computed as x·φ(x)·φ^2(x).
    pub fn norm(&self, x: &TowerElem) -> BaseElem {
        let fx = self.frobenius(x);
        let ffx = self.frobenius(&fx);
        let n = self.mul(&self.mul(x, &fx), &ffx);
        self.to_base(&n)
            .expect("norm must land in the base field")
    }

    /// Membership in μ_d = {x : x^d = 1}; well-defined for any d >= 1.
    pub fn in_mu(&self, x: &TowerElem, d: u64) -> bool {
        self.pow(x, d) == self.one()
    }

    /// Deterministic primitive element: the first element in enumeration
    /// order whose order is exactly q^3 - 1, checked against the prime
    /// factorization of q^3 - 1.
    pub fn primitive_element(&self) -> TowerElem {
        for idx in 1..self.q3 {
            let cand = self.element_at(idx);
            if self
                .order3_primes
                .iter()
                .all(|&r| self.pow(&cand, self.order3 / r) != self.one())
            {
                return cand;
            }
        }
        unreachable!("F_{{q^3}}^* is cyclic, a generator exists")
    }

    /// μ_{q^2+q+1} as the θ^{(q-1)j} ladder, j = 0..q^2+q.
    pub fn mu_q2q1(&self) -> Vec<TowerElem> {
        let theta = self.primitive_element();
        let step = self.pow(&theta, self.q - 1);
        let count = self.q * self.q + self.q + 1;
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = self.one();
        for _ in 0..count {
            out.push(cur.clone());
            cur = self.mul(&cur, &step);
        }
        out
    }

    // ---------- enumeration ----------

    /// Mixed-radix index of an element: digit (i*k + j) of the flat
    /// coordinate vector scales p^(i*k+j). Index 0 is the zero element.
    pub fn index_of(&self, x: &TowerElem) -> u64 {
        let mut idx = 0u64;
        for &d in x.0.iter().rev() {
            idx = idx * self.p + d;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> TowerElem {
        let n = 3 * self.k;
        let mut flat = vec![0u64; n];
        for digit in flat.iter_mut() {
            *digit = idx % self.p;
            idx /= self.p;
        }
        TowerElem(flat)
    }

    /// Stream all q^3 elements in index order, starting at zero.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = TowerElem> + '_> {
        self.enumerate_range(0, self.q3)
    }

    /// Stream the elements with indices in `[lo, hi)`; ranges partition the
    /// field for parallel consumers.
    pub fn enumerate_range(
        &self,
        lo: u64,
        hi: u64,
    ) -> Result<impl Iterator<Item = TowerElem> + '_> {
        if self.q3 > self.enum_budget {
            return Err(Error::BudgetExceeded {
                need: self.q3,
                budget: self.enum_budget,
            });
        }
        let hi = hi.min(self.q3);
        Ok((lo..hi).map(move |i| self.element_at(i)))
    }
}

/// Serialize a base element per the report schema: a plain integer when
/// k = 1, otherwise the coordinate list.
pub fn base_to_json(t: &Tower, b: &BaseElem) -> serde_json::Value {
    if t.k == 1 {
        serde_json::json!(b.0[0])
    } else {
        serde_json::json!(b.0)
    }
}

/// Serialize a tower element as its three base coordinates.
pub fn elem_to_json(t: &Tower, x: &TowerElem) -> serde_json::Value {
    let c = x.coords(t);
    serde_json::Value::Array(c.iter().map(|b| base_to_json(t, b)).collect())
}

/// Parse a base element from a report-schema JSON value.
pub fn base_from_json(t: &Tower, v: &serde_json::Value) -> Result<BaseElem> {
    match v {
        serde_json::Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Precondition(format!("bad coefficient {v}")))?;
            Ok(t.base_from_int(i))
        }
        serde_json::Value::Array(a) => {
            let coords: Result<Vec<u64>> = a
                .iter()
                .map(|x| {
                    x.as_i64()
                        .map(|i| i.rem_euclid(t.p as i64) as u64)
                        .ok_or_else(|| Error::Precondition(format!("bad coordinate {x}")))
                })
                .collect();
            t.base_from_coords(&coords?)
        }
        _ => Err(Error::Precondition(format!("bad base element {v}"))),
    }
}

/// Parse a tower element: a scalar/list embeds from F_q, a length-3 list of
/// base elements is taken coordinate-wise.
pub fn elem_from_json(t: &Tower, v: &serde_json::Value) -> Result<TowerElem> {
    if let serde_json::Value::Array(a) = v {
        if a.len() == 3 && a.iter().any(|x| x.is_array()) || (a.len() == 3 && t.k == 1) {
            let coords: Result<Vec<Vec<u64>>> =
                a.iter().map(|x| base_from_json(t, x).map(|b| b.0)).collect();
            return t.elem_from_coords(&coords?);
        }
    }
    Ok(t.embed_base(&base_from_json(t, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f343() -> Tower {
        make_tower(&FieldSpec::new(7, 1)).unwrap()
    }

    #[test]
    fn tower_basics() {
        let t = f343();
        assert_eq!(t.q, 7);
        assert_eq!(t.order3, 342);
        let t5 = make_tower(&FieldSpec::new(5, 1)).unwrap();
        assert_eq!(t5.order3, 124);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(
            make_tower(&FieldSpec::new(4, 1)),
            Err(Error::EvenModulus(4))
        ));
        assert!(matches!(
            make_tower(&FieldSpec::new(9, 1)),
            Err(Error::NonPrimeModulus(9))
        ));
        assert!(matches!(
            make_tower(&FieldSpec::new(2, 1)),
            Err(Error::EvenModulus(2))
        ));
        // reducible h: s^3 + 1 has root -1
        let spec = FieldSpec {
            p: 7,
            k: 1,
            g: Some(vec![0, 1]),
            h: Some(vec![1, 0, 0, 1]),
        };
        assert!(matches!(
            make_tower(&spec),
            Err(Error::ReducibleModulus("h"))
        ));
    }

    #[test]
    fn base_field_arithmetic_embeds() {
        let t = f343();
        let a = t.embed_int(3);
        let b = t.embed_int(5);
        assert_eq!(t.mul(&a, &b), t.embed_int(1)); // 15 mod 7
    }

    #[test]
    fn inverse_and_negation_laws() {
        let t = f343();
        for idx in 1..t.q3 {
            let x = t.element_at(idx);
            assert_eq!(t.mul(&t.inv(&x).unwrap(), &x), t.one());
            assert!(t.is_zero(&t.add(&x, &t.neg(&x))));
        }
        assert!(t.inv(&t.zero()).is_err());
    }

    #[test]
    fn pow_laws() {
        let t = f343();
        let x = t.element_at(42);
        assert_eq!(t.pow(&x, t.order3), t.one());
        assert_eq!(t.pow(&t.zero(), 5), t.zero());
        assert_eq!(t.pow(&t.zero(), 0), t.one()); // 0^0 = 1
        // exponent reduction mod q^3-1 for nonzero x
        assert_eq!(t.pow(&x, t.order3 + 17), t.pow(&x, 17));
    }

    #[test]
    fn frobenius_is_qth_power_and_order_three() {
        let t = f343();
        for idx in [0, 1, 5, 19, 100, 342, 340] {
            let x = t.element_at(idx);
            assert_eq!(t.frobenius(&x), t.pow(&x, t.q));
            let f3 = t.frobenius(&t.frobenius(&t.frobenius(&x)));
            assert_eq!(f3, x);
        }
        for c in 0..7 {
            let e = t.embed_int(c);
            assert_eq!(t.frobenius(&e), e);
        }
    }

    #[test]
    fn frobenius_fixed_set_is_base_field() {
        let t = f343();
        let mut fixed = 0u64;
        for x in t.enumerate().unwrap() {
            if t.frobenius(&x) == x {
                assert!(t.in_base(&x));
                fixed += 1;
            }
        }
        assert_eq!(fixed, t.q);
    }

    #[test]
    fn norm_properties() {
        let t = f343();
        assert_eq!(t.norm(&t.one()), t.base_from_int(1));
        for c in 0..7i64 {
            // (c)^{q^2+q+1} = c^3 for base-field c
            let n = t.norm(&t.embed_int(c));
            assert_eq!(n, t.base_from_int(c.pow(3)));
        }
        let x = t.element_at(123);
        let y = t.element_at(250);
        let nxy = t.norm(&t.mul(&x, &y));
        let prod = t.bq_mul(&t.norm(&x).0, &t.norm(&y).0);
        assert_eq!(nxy.0, prod);
    }

    #[test]
    fn mu_membership_and_count() {
        let t = f343();
        assert!(t.in_mu(&t.one(), 19));
        assert!(!t.in_mu(&t.zero(), 19));
        let d = t.q * t.q + t.q + 1; // 57, divides 342
        let count = t
            .enumerate()
            .unwrap()
            .filter(|x| t.in_mu(x, d))
            .count() as u64;
        assert_eq!(count, d);
        let mu = t.mu_q2q1();
        assert_eq!(mu.len() as u64, d);
        let distinct: std::collections::HashSet<_> = mu.iter().map(|x| t.index_of(x)).collect();
        assert_eq!(distinct.len() as u64, d);
    }

    #[test]
    fn primitive_element_has_full_order() {
        let t = f343();
        let theta = t.primitive_element();
        assert_eq!(theta, t.primitive_element()); // deterministic
        for &r in &t.order3_primes {
            assert_ne!(t.pow(&theta, t.order3 / r), t.one());
        }
        // order found by enumeration equals q^3 - 1, and theta^{(q^3-1)/2} = -1
        let mut cur = theta.clone();
        let mut ord = 1u64;
        while cur != t.one() {
            cur = t.mul(&cur, &theta);
            ord += 1;
        }
        assert_eq!(ord, t.order3);
        assert_eq!(t.pow(&theta, t.order3 / 2), t.neg(&t.one()));
    }

    #[test]
    fn enumeration_order_and_partition() {
        let t = make_tower(&FieldSpec::new(5, 1)).unwrap();
        let all: Vec<_> = t.enumerate().unwrap().collect();
        assert_eq!(all.len(), 125);
        assert_eq!(all[0], t.zero());
        for (i, x) in all.iter().enumerate() {
            assert_eq!(t.index_of(x), i as u64);
        }
        // partition into 4 ranges -> disjoint union is the full set
        let mut seen = std::collections::HashSet::new();
        for w in 0..4u64 {
            let lo = w * 32;
            let hi = (w + 1) * 32;
            for x in t.enumerate_range(lo, hi).unwrap() {
                assert!(seen.insert(t.index_of(&x)));
            }
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = FieldSpec::new(5, 1);
        let t = make_tower_with_budget(&spec, 100).unwrap();
        assert!(matches!(
            t.enumerate().map(|_| ()),
            Err(Error::BudgetExceeded { need: 125, budget: 100 })
        ));
    }

    #[test]
    fn field_spec_string_round_trip() {
        let s = FieldSpec::parse("7^1").unwrap();
        assert_eq!(s, FieldSpec::new(7, 1));
        let s = FieldSpec::parse("3^2:1,2,1:1,0,2,1").unwrap();
        assert_eq!(s.p, 3);
        assert_eq!(s.k, 2);
        assert_eq!(s.g.as_deref(), Some(&[1, 2, 1][..]));
        assert_eq!(s.h.as_deref(), Some(&[1, 0, 2, 1][..]));
        assert!(FieldSpec::parse("x^y").is_err());
        assert_eq!(FieldSpec::parse("13").unwrap(), FieldSpec::new(13, 1));
    }

    #[test]
    fn extension_degree_two_tower() {
        // q = 9: exercises genuine k > 1 arithmetic
        let t = make_tower(&FieldSpec::new(3, 2)).unwrap();
        assert_eq!(t.q, 9);
        assert_eq!(t.q3, 729);
        for idx in [1, 2, 17, 100, 511, 728] {
            let x = t.element_at(idx);
            assert_eq!(t.mul(&t.inv(&x).unwrap(), &x), t.one());
            assert_eq!(t.frobenius(&x), t.pow(&x, 9));
            assert!(t.in_base(&t.embed_base(&t.norm(&x))));
        }
        let mut fixed = 0;
        for x in t.enumerate().unwrap() {
            if t.frobenius(&x) == x {
                assert!(t.in_base(&x));
                fixed += 1;
            }
        }
        assert_eq!(fixed, 9);
        let d = t.q * t.q + t.q + 1; // 91 | 728
        assert_eq!(t.mu_q2q1().len() as u64, d);
    }

    #[test]
    fn distributivity_on_random_triples() {
        let t = f343();
        let mut state = 1234567u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) % t.q3
        };
        for _ in 0..200 {
            let (a, b, c) = (
                t.element_at(next()),
                t.element_at(next()),
                t.element_at(next()),
            );
            let lhs = t.mul(&a, &t.add(&b, &c));
            let rhs = t.add(&t.mul(&a, &b), &t.mul(&a, &c));
            assert_eq!(lhs, rhs);
            assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
            assert_eq!(
                t.mul(&t.mul(&a, &b), &c),
                t.mul(&a, &t.mul(&b, &c))
            );
        }
    }
}
