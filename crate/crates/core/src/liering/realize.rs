//! Realizing presentations as quotients of free nilpotent Lie rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FiniteLieRing, LieRingError, LieRingPresentation};
use crate::bogomolov::{relator_ideal_mod, HopfContext};
use crate::exactlin::{snf, QuotientMap};
use crate::freelie::{Comb, CoefficientRing, FreeNilpotentLieRing, RewriteMode};

/// Largest nilpotency class accepted for a realized ring. The ambient free
/// ring has class one more, which must stay within the free Lie cap.
pub const DEFAULT_CLASS_CAP: usize = 7;

#[derive(Clone, Debug)]
pub struct Realization {
    pub ring: FiniteLieRing,
    pub context: HopfContext,
    /// Advice that does not affect the result, e.g. redundant generators.
    pub diagnostics: Vec<String>,
}

fn p_part(mut x: BigInt, p: &BigInt) -> BigInt {
    let mut out = BigInt::one();
    while (&x % p).is_zero() {
        x /= p;
        out *= p;
    }
    out
}

/// Integer row proportional to `comb` (denominators cleared by their lcm).
fn clear_denominators(comb: &Comb<BigRational>, width: usize, p: u64) -> Result<Vec<BigInt>, LieRingError> {
    let pb = BigInt::from(p);
    let mut l = BigInt::one();
    for c in comb.values() {
        if (c.denom() % &pb).is_zero() {
            return Err(LieRingError::DenominatorNotInvertible { denominator: c.denom().to_string(), p });
        }
        l = l.lcm(c.denom());
    }
    let mut row = vec![BigInt::zero(); width];
    for (k, c) in comb {
        if *k < width {
            row[*k] = (c * BigRational::from_integer(l.clone())).to_integer();
        }
    }
    Ok(row)
}

/// Reduces a rational combination modulo `d` (a power of `p`).
pub(crate) fn comb_mod(comb: &Comb<BigRational>, width: usize, d: i64, p: u64) -> Result<Vec<i64>, LieRingError> {
    let db = BigInt::from(d);
    let pb = BigInt::from(p);
    let mut v = vec![0i64; width];
    for (k, c) in comb {
        let den = c.denom();
        if (den % &pb).is_zero() {
            return Err(LieRingError::DenominatorNotInvertible { denominator: den.to_string(), p });
        }
        let inv = modinv(&den.mod_floor(&db), &db).expect("unit modulo a power of p");
        let x = (c.numer() * inv).mod_floor(&db);
        v[*k] = x.to_i64().expect("reduced below modulus");
    }
    Ok(v)
}

pub(crate) fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.abs().is_one() {
        return None;
    }
    Some((e.x * e.gcd.signum()).mod_floor(m))
}

pub fn realize(pres: &LieRingPresentation) -> Result<Realization, LieRingError> {
    realize_with_cap(pres, DEFAULT_CLASS_CAP)
}

/// Realizes the largest nilpotent quotient of class at most `cap`.
///
/// The abelianization fixes `e1`, the exponent of `L/L²`. A p-Lie ring of
/// class `k` generated modulo `L²` by elements of order dividing `e1` has
/// exponent dividing `e1^k`, so the quotient of `F(n, k)` by the relators
/// plus `e1^k F` is `L / (γ_{k+1} L + e1^k L)`. Its order stops growing
/// exactly at `k = class(L) + 1`.
///
/// Coefficients live in the p-local integers: denominators prime to `p` are
/// units, and so are integer factors prime to `p`. Torsion prime to `p` in
/// the abelianization is dropped with a diagnostic.
pub fn realize_with_cap(pres: &LieRingPresentation, cap: usize) -> Result<Realization, LieRingError> {
    let p = pres.p;
    let n = pres.generators.len();
    if n == 0 {
        return Err(LieRingError::Mismatch("presentation without generators".into()));
    }
    let cap = cap.min(crate::freelie::MAX_CLASS - 1);

    let f1 = FreeNilpotentLieRing::new(n, 1, CoefficientRing::Integers)?;
    let mut rows = Vec::with_capacity(pres.relators.len());
    for r in &pres.relators {
        let comb = f1.rewrite(r, RewriteMode::Truncate)?;
        rows.push(clear_denominators(&comb, n, p)?);
    }
    let ab = snf(n, &rows);
    if ab.free_rank() > 0 {
        return Err(LieRingError::InfiniteQuotient(ab.free_rank()));
    }
    let pb = BigInt::from(p);
    let e1 = ab.torsion().last().map(|d| p_part(d.clone(), &pb)).unwrap_or_else(BigInt::one);
    let local: Vec<BigInt> = ab.torsion().iter().map(|d| p_part(d.clone(), &pb)).filter(|d| !d.is_one()).collect();
    let mut diagnostics = Vec::new();
    if local.len() != ab.torsion().len() || local.iter().zip(ab.torsion()).any(|(a, b)| a != b) {
        diagnostics.push(format!("abelianization {ab} over the integers; its part prime to {p} is dropped"));
    }
    let e1 = e1.to_i64().ok_or_else(|| LieRingError::TooLarge(e1.to_string()))?;

    let mut prev = BigInt::one();
    for k in 1..=cap + 1 {
        let d = (e1 as i128).checked_pow(k as u32).filter(|&d| d < (1i128 << 62));
        let Some(d) = d else {
            return Err(LieRingError::TooLarge(format!("{e1}^{k}")));
        };
        let d = d as i64;
        let f = FreeNilpotentLieRing::new(n, k, CoefficientRing::Integers)?;
        let mut rel = Vec::with_capacity(pres.relators.len());
        for r in &pres.relators {
            let comb = f.rewrite(r, RewriteMode::Truncate)?;
            rel.push(comb_mod(&comb, f.len(), d, p)?);
        }
        let lattice = relator_ideal_mod(&f, &rel, d)?;
        let order = lattice.index();
        if order == prev {
            return build(pres, f, lattice, d, k - 1, local.len(), diagnostics);
        }
        prev = order;
    }
    Err(LieRingError::NotNilpotent(cap))
}

fn build(
    pres: &LieRingPresentation,
    f: FreeNilpotentLieRing,
    mut lattice: crate::exactlin::ModularLattice,
    d: i64,
    class: usize,
    min_gens: usize,
    mut diagnostics: Vec<String>,
) -> Result<Realization, LieRingError> {
    lattice.canonicalize();
    let qm = QuotientMap::new(&lattice);
    let ring = FiniteLieRing::from_quotient(pres.p, &qm, |a, b| f.bracket_mod(a, b, d))?;
    let n = f.generators();
    let images = (0..n)
        .map(|i| {
            let mut e = vec![0i64; f.len()];
            e[i] = 1;
            (pres.generators[i].clone(), qm.project(&e))
        })
        .collect();
    let ring = ring.with_generator_images(images);
    if min_gens < n {
        diagnostics.push(format!(
            "{n} generators given but {min_gens} suffice; the free ring grows quickly with the generator count"
        ));
    }
    let context = HopfContext::new(f, lattice, d, class, qm, ring.exponent());
    Ok(Realization { ring, context, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::LieExpr;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn heisenberg_pres() -> LieRingPresentation {
        let mut pres = LieRingPresentation::new(5, vec!["x".into(), "y".into(), "z".into()]);
        for i in 0..3 {
            pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(i)));
        }
        pres.add_relator(LieExpr::sub(LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(1)), LieExpr::gen(2)));
        pres.add_relator(LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(2)));
        pres.add_relator(LieExpr::bracket(LieExpr::gen(1), LieExpr::gen(2)));
        pres
    }

    #[test]
    fn abelian_realization() {
        let mut pres = LieRingPresentation::new(5, vec!["v1".into(), "v2".into()]);
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(0)));
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(1)));
        pres.add_relator(LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(1)));
        let r = realize(&pres).unwrap();
        assert_eq!(r.ring.size(), Some(25));
        assert_eq!(r.ring.nilpotency_class(), 1);
        assert_eq!(r.context.class(), 1);
    }

    #[test]
    fn heisenberg_realization() {
        let r = realize(&heisenberg_pres()).unwrap();
        r.ring.validate().unwrap();
        assert_eq!(r.ring.size(), Some(125));
        assert_eq!(r.ring.nilpotency_class(), 2);
        let imgs = r.ring.generator_images().unwrap();
        let (x, y, z) = (&imgs[0].1, &imgs[1].1, &imgs[2].1);
        assert_eq!(&r.ring.bracket(x, y), z);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn infinite_and_bad_denominator() {
        let mut pres = LieRingPresentation::new(5, vec!["x".into(), "y".into()]);
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(0)));
        assert!(matches!(realize(&pres), Err(LieRingError::InfiniteQuotient(1))));
        let mut pres = LieRingPresentation::new(2, vec!["x".into(), "y".into()]);
        pres.add_relator(LieExpr::scale(q(2), LieExpr::gen(0)));
        pres.add_relator(LieExpr::scale(q(2), LieExpr::gen(1)));
        pres.add_relator(LieExpr::sub(
            LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(1)),
            LieExpr::scale(BigRational::new(1.into(), 2.into()), LieExpr::gen(0)),
        ));
        assert!(matches!(realize(&pres), Err(LieRingError::DenominatorNotInvertible { .. })));
    }

    #[test]
    fn two_generator_heisenberg_needs_no_central_generator() {
        let mut pres = LieRingPresentation::new(5, vec!["x".into(), "y".into()]);
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(0)));
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(1)));
        let xy = || LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(1));
        pres.add_relator(LieExpr::bracket(xy(), LieExpr::gen(0)));
        pres.add_relator(LieExpr::bracket(xy(), LieExpr::gen(1)));
        let r = realize(&pres).unwrap();
        assert_eq!(r.ring.size(), Some(125));
        assert_eq!(r.ring.nilpotency_class(), 2);
        assert!(r.diagnostics.is_empty());
    }

    #[test]
    fn free_nilpotent_is_not_finite_without_orders_but_with_them_stalls_at_cap() {
        // two generators of order 5 and no other relation: the free nilpotent
        // quotients keep growing, so the cap is hit
        let mut pres = LieRingPresentation::new(5, vec!["x".into(), "y".into()]);
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(0)));
        pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(1)));
        assert!(matches!(realize_with_cap(&pres, 3), Err(LieRingError::NotNilpotent(3))));
    }
}
