//! The fixpoint monomial rewrite and modular evaluation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::poly::{Mono, MultiPoly};
use crate::error::Error;
use crate::ff::{Tower, TowerElem};
use crate::Result;

/// Cap on whole-polynomial rewrite passes; every legitimate use strictly
/// reduces a degree, so hitting the cap signals a replacement that
/// re-introduces its own monomial.
pub const REWRITE_PASS_CAP: usize = 10_000;

/// Replace every term divisible by the monomial `m` with `(term/m)·rep`,
/// repeating whole-polynomial passes until none rewrites.
pub fn substitute_rewrite(pol: &MultiPoly, m: &MultiPoly, rep: &MultiPoly) -> Result<MultiPoly> {
    if m.num_terms() != 1 || !m.terms()[0].1.is_one() {
        return Err(Error::Precondition(
            "rewrite pattern must be a single monomial with coefficient 1".into(),
        ));
    }
    let pat: Mono = m.terms()[0].0;
    let mut cur = pol.clone();
    for _ in 0..REWRITE_PASS_CAP {
        let mut rewritten = false;
        let mut keep = MultiPoly::zero(cur.vars());
        let mut replaced = MultiPoly::zero(cur.vars());
        let mut keep_terms = Vec::new();
        for (tm, tc) in cur.terms() {
            if pat.divides(*tm) {
                let q = pat.div_into(*tm);
                replaced = replaced.add(&rep.mul_term(q, tc))?;
                rewritten = true;
            } else {
                keep_terms.push((tm.exponents(cur.vars().len()), tc.clone()));
            }
        }
        if !rewritten {
            return Ok(cur);
        }
        keep = keep.add(&MultiPoly::from_terms(cur.vars(), keep_terms)?)?;
        cur = keep.add(&replaced)?;
    }
    Err(Error::RewriteDiverged(REWRITE_PASS_CAP))
}

/// Reduce the integer coefficients mod p and evaluate in the tower.
/// Every variable of `pol` must be assigned.
pub fn eval_mod_p(
    pol: &MultiPoly,
    assignment: &HashMap<String, TowerElem>,
    t: &Tower,
) -> Result<TowerElem> {
    let names = pol.vars().names();
    let mut values = Vec::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if pol.degree_in(i) > 0 {
            match assignment.get(name) {
                Some(v) => values.push(Some(v.clone())),
                None => return Err(Error::UnassignedVariable(name.clone())),
            }
        } else {
            values.push(assignment.get(name).cloned());
        }
    }
    let p = BigInt::from(t.p);
    let mut acc = t.zero();
    // power cache per variable
    let mut pow_cache: Vec<HashMap<u32, TowerElem>> = vec![HashMap::new(); names.len()];
    for (m, c) in pol.terms() {
        let cred = c.mod_floor(&p).to_u64().expect("residue fits in u64");
        let mut term = t.embed_int(cred as i64);
        for (i, val) in values.iter().enumerate() {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let base = val.as_ref().expect("checked assigned");
            let pw = pow_cache[i]
                .entry(e)
                .or_insert_with(|| t.pow(base, e as u64))
                .clone();
            term = t.mul(&term, &pw);
        }
        acc = t.add(&acc, &term);
    }
    Ok(acc)
}

/// Evaluate with exponent maps reused across calls is unnecessary at desk
/// scale; the per-call cache above keeps sweeps linear in term count.
pub fn eval_is_zero(
    pol: &MultiPoly,
    assignment: &HashMap<String, TowerElem>,
    t: &Tower,
) -> Result<bool> {
    Ok(t.is_zero(&eval_mod_p(pol, assignment, t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{make_tower, FieldSpec};
    use crate::symbolic::poly::{parse_poly, VarSet};

    #[test]
    fn rewrite_examples() {
        let v = VarSet::new(["x", "A", "B", "C"]).unwrap();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        // single replacement
        let r = substitute_rewrite(&p("C^2"), &p("C^2"), &p("C - 1")).unwrap();
        assert_eq!(r, p("C - 1"));
        // iterated: C^3 -> C^2 - C -> (C-1) - C = -1, so C^3 + x -> x - 1
        let r = substitute_rewrite(&p("C^3 + x"), &p("C^2"), &p("C - 1")).unwrap();
        assert_eq!(r, p("x - 1"));
        // untouched when no term is divisible
        let f = p("A*x + B");
        let r = substitute_rewrite(&f, &p("C^2"), &p("C - 1")).unwrap();
        assert_eq!(r, f);
    }

    #[test]
    fn rewrite_result_is_a_fixpoint() {
        let v = VarSet::new(["x", "A", "B", "C"]).unwrap();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        let f = p("A^9 + A^5*B*x + A^2 - 7");
        let m = p("A^3");
        let rep = p("A*B - C + 2");
        let once = substitute_rewrite(&f, &m, &rep).unwrap();
        let twice = substitute_rewrite(&once, &m, &rep).unwrap();
        assert_eq!(once, twice);
        // no term of the fixpoint is divisible by the pattern
        let pat = m.terms()[0].0;
        assert!(once.terms().iter().all(|(tm, _)| !pat.divides(*tm)));
    }

    #[test]
    fn rewrite_divergence_guard() {
        let v = VarSet::new(["x", "A", "B", "C"]).unwrap();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        // rep re-introduces the pattern: never terminates
        let r = substitute_rewrite(&p("A^3"), &p("A^3"), &p("A^3 + 1"));
        assert!(matches!(r, Err(Error::RewriteDiverged(_))));
    }

    #[test]
    fn eval_examples() {
        let v = VarSet::new(["A", "B", "C"]).unwrap();
        let p = |s: &str| parse_poly(&v, s).unwrap();
        // A^3 + A*B + 1 at (2, 3) over q = 5: 8 + 6 + 1 = 15 = 0
        let t5 = make_tower(&FieldSpec::new(5, 1)).unwrap();
        let mut asn = HashMap::new();
        asn.insert("A".to_string(), t5.embed_int(2));
        asn.insert("B".to_string(), t5.embed_int(3));
        let val = eval_mod_p(&p("A^3 + A*B + 1"), &asn, &t5).unwrap();
        assert!(t5.is_zero(&val));
        // C^2 - C + 1 at C=4 over q=13: 13 = 0
        let t13 = make_tower(&FieldSpec::new(13, 1)).unwrap();
        let mut asn = HashMap::new();
        asn.insert("C".to_string(), t13.embed_int(4));
        assert!(eval_is_zero(&p("C^2 - C + 1"), &asn, &t13).unwrap());
        // zero polynomial evaluates to zero under any assignment
        let z = crate::symbolic::poly::MultiPoly::zero(&v);
        assert!(eval_is_zero(&z, &HashMap::new(), &t13).unwrap());
        // unassigned variable is an error
        assert!(matches!(
            eval_mod_p(&p("A + B"), &HashMap::new(), &t13),
            Err(Error::UnassignedVariable(_))
        ));
        // negative coefficients reduce into [0, p)
        let mut asn = HashMap::new();
        asn.insert("A".to_string(), t13.embed_int(1));
        let val = eval_mod_p(&p("A - 27"), &asn, &t13).unwrap();
        assert_eq!(val, t13.embed_int(-26));
    }
}
