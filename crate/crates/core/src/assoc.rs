//! Truncated free associative algebra over `Q`.
//!
//! Serves two purposes: it is the independent model that Lie computations
//! are checked against (brackets become commutators), and it is where the
//! BCH series is generated as `log(exp(x) exp(y))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::freelie::{Comb, FreeNilpotentLieRing, LieExpr, RewriteMode};

/// Noncommutative polynomial: word over generator indices to coefficient.
pub type Poly = BTreeMap<Vec<u8>, BigRational>;

#[derive(Clone, Debug)]
pub struct AssocAlgebra {
    n: usize,
    c: usize,
}

fn add_term(p: &mut Poly, w: Vec<u8>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match p.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get().clone() + c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

impl AssocAlgebra {
    /// Words over `n` letters of length at most `c`.
    pub fn new(n: usize, c: usize) -> Self {
        AssocAlgebra { n, c }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.c
    }

    pub fn one(&self) -> Poly {
        Poly::from([(Vec::new(), BigRational::one())])
    }

    pub fn gen(&self, i: usize) -> Poly {
        assert!(i < self.n);
        Poly::from([(vec![i as u8], BigRational::one())])
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (w, c) in b {
            add_term(&mut out, w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, a: &Poly, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::new();
        }
        a.iter().map(|(w, c)| (w.clone(), c * s)).collect()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (u, x) in a {
            for (v, y) in b {
                if u.len() + v.len() > self.c {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                add_term(&mut out, w, x * y);
            }
        }
        out
    }

    pub fn commutator(&self, a: &Poly, b: &Poly) -> Poly {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.add(&ab, &self.scale(&ba, &-BigRational::one()))
    }

    /// `exp(x)` for `x` without constant term.
    pub fn exp(&self, x: &Poly) -> Poly {
        assert!(!x.contains_key(&Vec::new()), "exp needs a nilpotent argument");
        let mut out = self.one();
        let mut term = self.one();
        for k in 1..=self.c {
            term = self.scale(&self.mul(&term, x), &BigRational::new(BigInt::one(), BigInt::from(k)));
            out = self.add(&out, &term);
        }
        out
    }

    /// `log(a)` for `a` with constant term 1.
    pub fn log(&self, a: &Poly) -> Poly {
        let z = self.add(a, &self.scale(&self.one(), &-BigRational::one()));
        assert!(!z.contains_key(&Vec::new()), "log needs constant term 1");
        let mut out = Poly::new();
        let mut pow = self.one();
        for k in 1..=self.c {
            pow = self.mul(&pow, &z);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = self.add(&out, &self.scale(&pow, &BigRational::new(BigInt::from(sign), BigInt::from(k))));
        }
        out
    }

    pub fn homogeneous(&self, a: &Poly, d: usize) -> Poly {
        a.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    /// Image of a Lie expression with brackets read as commutators.
    pub fn eval_lie_expr(&self, e: &LieExpr) -> Poly {
        match e {
            LieExpr::Gen(i) => self.gen(*i),
            LieExpr::Bracket(a, b) => self.commutator(&self.eval_lie_expr(a), &self.eval_lie_expr(b)),
            LieExpr::Scale(s, a) => self.scale(&self.eval_lie_expr(a), s),
            LieExpr::Sum(v) => v.iter().fold(Poly::new(), |acc, t| self.add(&acc, &self.eval_lie_expr(t))),
        }
    }

    /// Image of a Hall monomial.
    pub fn hall_monomial(&self, f: &FreeNilpotentLieRing, i: usize) -> Poly {
        match f.basis().factors(i) {
            None => self.gen(f.basis().word(i)[0] as usize),
            Some((u, v)) => self.commutator(&self.hall_monomial(f, u), &self.hall_monomial(f, v)),
        }
    }

    pub fn from_hall(&self, f: &FreeNilpotentLieRing, x: &Comb<BigRational>) -> Poly {
        let mut out = Poly::new();
        for (i, c) in x {
            out = self.add(&out, &self.scale(&self.hall_monomial(f, *i), c));
        }
        out
    }

    /// Hall coordinates of a Lie polynomial, using the Dynkin–Specht–Wever
    /// projection `w1...wd ↦ (1/d) [..[w1,w2],..,wd]` on each homogeneous part.
    pub fn lie_to_hall(&self, f: &FreeNilpotentLieRing, p: &Poly) -> Comb<BigRational> {
        let mut out = Comb::new();
        let mut cache: BTreeMap<Vec<u8>, Comb<BigRational>> = BTreeMap::new();
        for (w, c) in p {
            if w.is_empty() {
                continue;
            }
            let l = left_normed(f, w, &mut cache);
            let s = c / BigRational::from_integer(BigInt::from(w.len()));
            crate::freelie::comb_add_scaled(&mut out, &l, &s);
        }
        out
    }
}

fn left_normed(
    f: &FreeNilpotentLieRing,
    w: &[u8],
    cache: &mut BTreeMap<Vec<u8>, Comb<BigRational>>,
) -> Comb<BigRational> {
    if let Some(v) = cache.get(w) {
        return v.clone();
    }
    let v = if w.len() == 1 {
        Comb::from([(w[0] as usize, BigRational::one())])
    } else {
        let head = left_normed(f, &w[..w.len() - 1], cache);
        let last = Comb::from([(w[w.len() - 1] as usize, BigRational::one())]);
        f.bracket(&head, &last, RewriteMode::Truncate).expect("truncating bracket")
    };
    cache.insert(w.to_vec(), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::CoefficientRing;

    #[test]
    fn exp_log_roundtrip() {
        let alg = AssocAlgebra::new(2, 4);
        let x = alg.add(&alg.gen(0), &alg.scale(&alg.gen(1), &BigRational::new(3.into(), 2.into())));
        assert_eq!(alg.log(&alg.exp(&x)), x);
    }

    #[test]
    fn dynkin_projection_recovers_hall_elements() {
        let f = FreeNilpotentLieRing::new(2, 4, CoefficientRing::Rationals).unwrap();
        let alg = AssocAlgebra::new(2, 4);
        for i in 0..f.len() {
            let p = alg.hall_monomial(&f, i);
            let back = alg.lie_to_hall(&f, &p);
            assert_eq!(back, Comb::from([(i, BigRational::one())]));
        }
    }
}
