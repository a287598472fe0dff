//! The Baker–Campbell–Hausdorff series, the group law it induces on a finite
//! p-Lie ring, and inverse words expressing Lie addition and bracket through
//! group operations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::assoc::{AssocAlgebra, Poly};
use crate::freelie::{comb_add_scaled, CoefficientRing, Comb, FreeNilpotentLieRing};
use crate::liering::{Element, FiniteLieRing};

pub const MAX_BCH_CLASS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BchError {
    #[error("class {0} exceeds the supported bound {MAX_BCH_CLASS}")]
    ClassTooLarge(usize),
    #[error("denominator {denominator} not invertible modulo powers of {p}")]
    DenominatorNotInvertible { denominator: String, p: u64 },
    #[error("word uses variable {0} but only {1} arguments were given")]
    MissingArgument(usize, usize),
}

fn check_class(c: usize) -> Result<(), BchError> {
    if c == 0 || c > MAX_BCH_CLASS {
        return Err(BchError::ClassTooLarge(c));
    }
    Ok(())
}

/// `a/b` reduced modulo `m` (a power of `p`).
fn rational_mod(q: &BigRational, m: u64, p: u64) -> Result<i64, BchError> {
    let (num, den) = (q.numer(), q.denom());
    if (den % BigInt::from(p)).is_zero() {
        return Err(BchError::DenominatorNotInvertible { denominator: den.to_string(), p });
    }
    let mb = BigInt::from(m);
    let e = den.mod_floor(&mb).extended_gcd(&mb);
    let inv = if m == 1 { BigInt::zero() } else { e.x * e.gcd.signum() };
    Ok((num * inv).mod_floor(&mb).to_i64().expect("below modulus"))
}

/// `log(exp x exp y)` in Hall coordinates of the free nilpotent ring on `x, y`.
#[derive(Clone, Debug)]
pub struct BchSeries {
    free: FreeNilpotentLieRing,
    terms: Comb<BigRational>,
}

pub fn bch_series(c: usize) -> Result<BchSeries, BchError> {
    check_class(c)?;
    let free = FreeNilpotentLieRing::new(2, c, CoefficientRing::Rationals).expect("two generators within caps");
    let alg = AssocAlgebra::new(2, c);
    let z = alg.log(&alg.mul(&alg.exp(&alg.gen(0)), &alg.exp(&alg.gen(1))));
    let terms = alg.lie_to_hall(&free, &z);
    Ok(BchSeries { free, terms })
}

impl BchSeries {
    pub fn class(&self) -> usize {
        self.free.class()
    }

    pub fn free(&self) -> &FreeNilpotentLieRing {
        &self.free
    }

    pub fn terms(&self) -> &Comb<BigRational> {
        &self.terms
    }

    pub fn degree_part(&self, d: usize) -> Comb<BigRational> {
        let range = self.free.basis().degree_range(d);
        self.terms.range(range).map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Largest prime dividing any denominator (1 if all are integers).
    pub fn largest_denominator_prime(&self) -> u64 {
        let mut best = 1;
        for c in self.terms.values() {
            let mut d = c.denom().to_u64().expect("small denominators");
            let mut f = 2;
            while d > 1 {
                while d % f == 0 {
                    d /= f;
                    best = best.max(f);
                }
                f += 1;
            }
        }
        best
    }
}

fn format_comb(f: &FreeNilpotentLieRing, comb: &Comb<BigRational>, names: &[String]) -> String {
    let mut out = String::new();
    for (k, c) in comb {
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            if a.is_integer() {
                out.push_str(&a.to_string());
            } else {
                out.push_str(&format!("({a})"));
            }
        }
        out.push_str(&f.basis().format(*k, names));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BchSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_comb(&self.free, &self.terms, &["x".into(), "y".into()]))
    }
}

/// Two-generator Hall monomials as a straight-line program.
#[derive(Clone, Debug)]
enum Monomial {
    Letter(usize),
    Bracket(usize, usize),
}

/// The group law `x * y = log(exp x exp y)` on the underlying set of a
/// finite p-Lie ring.
#[derive(Clone, Debug)]
pub struct BchGroup<'a> {
    ring: &'a FiniteLieRing,
    class: usize,
    monomials: Vec<Monomial>,
    coefficients: Vec<(usize, i64)>,
}

impl<'a> BchGroup<'a> {
    pub fn new(ring: &'a FiniteLieRing) -> Result<Self, BchError> {
        let class = ring.nilpotency_class().max(1);
        let series = bch_series(class)?;
        let basis = series.free.basis();
        let monomials = (0..basis.len())
            .map(|i| match basis.factors(i) {
                None => Monomial::Letter(basis.word(i)[0] as usize),
                Some((u, v)) => Monomial::Bracket(u, v),
            })
            .collect();
        let e = ring.exponent() as u64;
        let mut coefficients = Vec::new();
        for (k, c) in &series.terms {
            let r = rational_mod(c, e, ring.p())?;
            if r != 0 {
                coefficients.push((*k, r));
            }
        }
        Ok(BchGroup { ring, class, monomials, coefficients })
    }

    pub fn ring(&self) -> &FiniteLieRing {
        self.ring
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Element {
        let mut vals: Vec<Element> = Vec::with_capacity(self.monomials.len());
        for m in &self.monomials {
            let v = match m {
                Monomial::Letter(0) => x.to_vec(),
                Monomial::Letter(_) => y.to_vec(),
                Monomial::Bracket(u, v) => self.ring.bracket(&vals[*u], &vals[*v]),
            };
            vals.push(v);
        }
        let mut acc = self.ring.zero();
        for &(k, c) in &self.coefficients {
            acc = self.ring.add(&acc, &self.ring.scale(c, &vals[k]));
        }
        acc
    }
}

/// `x * y` under the BCH group law of `ring`.
pub fn eval_mul(ring: &FiniteLieRing, x: &[i64], y: &[i64]) -> Result<Element, BchError> {
    Ok(BchGroup::new(ring)?.mul(x, y))
}

/// A finite p-group accessed only through its operations.
pub trait GroupOracle {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn p(&self) -> u64;
    /// A power of `p` annihilating every element.
    fn exponent(&self) -> u64;

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let mut base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }
}

impl GroupOracle for BchGroup<'_> {
    type Elem = Element;

    fn identity(&self) -> Element {
        self.ring.zero()
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        BchGroup::mul(self, a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        self.ring.neg(a)
    }

    fn p(&self) -> u64 {
        self.ring.p()
    }

    fn exponent(&self) -> u64 {
        self.ring.exponent() as u64
    }

    fn pow(&self, a: &Element, n: i64) -> Element {
        self.ring.scale(n, a)
    }
}

/// A group subterm: a variable or a nested group commutator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subterm {
    Var(usize),
    Comm(Box<Subterm>, Box<Subterm>),
}

impl Subterm {
    pub fn comm(a: Subterm, b: Subterm) -> Self {
        Subterm::Comm(Box::new(a), Box::new(b))
    }

    fn write(&self, names: &[&str], out: &mut String) {
        match self {
            Subterm::Var(i) => out.push_str(names.get(*i).copied().unwrap_or("?")),
            Subterm::Comm(a, b) => {
                out.push('[');
                a.write(names, out);
                out.push(',');
                b.write(names, out);
                out.push(']');
            }
        }
    }
}

/// A product of subterms raised to rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentWord {
    pub factors: Vec<(Subterm, BigRational)>,
}

impl ExponentWord {
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn format_with(&self, names: &[&str]) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (s, q) in &self.factors {
            let mut t = String::new();
            s.write(names, &mut t);
            if !q.is_one() {
                if q.is_integer() && q.is_positive() {
                    t.push_str(&format!("^{q}"));
                } else {
                    t.push_str(&format!("^({q})"));
                }
            }
            parts.push(t);
        }
        parts.join(" ")
    }

    /// Resolves exponents modulo `exponent` and shares repeated subterms.
    pub fn compile(&self, exponent: u64, p: u64) -> Result<CompiledWord, BchError> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut seen: HashMap<Subterm, usize> = HashMap::new();
        fn intern(s: &Subterm, nodes: &mut Vec<Node>, seen: &mut HashMap<Subterm, usize>) -> usize {
            if let Some(&i) = seen.get(s) {
                return i;
            }
            let node = match s {
                Subterm::Var(i) => Node::Var(*i),
                Subterm::Comm(a, b) => {
                    let a = intern(a, nodes, seen);
                    let b = intern(b, nodes, seen);
                    Node::Comm(a, b)
                }
            };
            nodes.push(node);
            seen.insert(s.clone(), nodes.len() - 1);
            nodes.len() - 1
        }
        let mut factors = Vec::new();
        for (s, q) in &self.factors {
            let n = rational_mod(q, exponent, p)?;
            if n != 0 {
                factors.push((intern(s, &mut nodes, &mut seen), n));
            }
        }
        Ok(CompiledWord { nodes, factors })
    }
}

impl fmt::Display for ExponentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&["x", "y"]))
    }
}

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    Comm(usize, usize),
}

/// An exponent word with integer exponents, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledWord {
    nodes: Vec<Node>,
    factors: Vec<(usize, i64)>,
}

impl CompiledWord {
    pub fn eval<G: GroupOracle>(&self, g: &G, args: &[G::Elem]) -> Result<G::Elem, BchError> {
        let mut vals: Vec<G::Elem> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match n {
                Node::Var(i) => args.get(*i).cloned().ok_or(BchError::MissingArgument(*i, args.len()))?,
                Node::Comm(a, b) => g.comm(&vals[*a], &vals[*b]),
            };
            vals.push(v);
        }
        let mut acc = g.identity();
        for &(k, n) in &self.factors {
            acc = g.mul(&acc, &g.pow(&vals[k], n));
        }
        Ok(acc)
    }
}

pub fn eval_word<G: GroupOracle>(g: &G, word: &ExponentWord, args: &[G::Elem]) -> Result<G::Elem, BchError> {
    word.compile(g.exponent(), g.p())?.eval(g, args)
}

/// Words realizing `x + y` and `[x, y]` in any group of class at most `class`.
#[derive(Clone, Debug)]
pub struct InverseWords {
    pub class: usize,
    pub add: ExponentWord,
    pub bracket: ExponentWord,
}

/// Symbolic model of the free nilpotent group on `x, y`: elements are
/// group-like series in the truncated free associative algebra.
struct Symbolic {
    alg: AssocAlgebra,
    free: FreeNilpotentLieRing,
    cache: HashMap<Subterm, Poly>,
}

impl Symbolic {
    fn new(c: usize) -> Self {
        Symbolic {
            alg: AssocAlgebra::new(2, c),
            free: FreeNilpotentLieRing::new(2, c, CoefficientRing::Rationals).expect("small free ring"),
            cache: HashMap::new(),
        }
    }

    fn inverse(&self, a: &Poly) -> Poly {
        let l = self.alg.log(a);
        self.alg.exp(&self.alg.scale(&l, &-BigRational::one()))
    }

    fn subterm(&mut self, s: &Subterm) -> Poly {
        if let Some(v) = self.cache.get(s) {
            return v.clone();
        }
        let v = match s {
            Subterm::Var(i) => self.alg.exp(&self.alg.gen(*i)),
            Subterm::Comm(a, b) => {
                let (a, b) = (self.subterm(a), self.subterm(b));
                let ab = self.alg.mul(&a, &b);
                let ba = self.alg.mul(&b, &a);
                self.alg.mul(&self.inverse(&ba), &ab)
            }
        };
        self.cache.insert(s.clone(), v.clone());
        v
    }

    fn factor(&mut self, s: &Subterm, q: &BigRational) -> Poly {
        let v = self.subterm(s);
        if q.is_one() {
            return v;
        }
        self.alg.exp(&self.alg.scale(&self.alg.log(&v), q))
    }

    fn eval(&mut self, w: &ExponentWord) -> Poly {
        let mut acc = self.alg.one();
        for (s, q) in &w.factors {
            let f = self.factor(s, q);
            acc = self.alg.mul(&acc, &f);
        }
        acc
    }

    fn log_hall(&self, a: &Poly) -> Comb<BigRational> {
        self.alg.lie_to_hall(&self.free, &self.alg.log(a))
    }

    fn hall_subterm(&self, i: usize) -> Subterm {
        match self.free.basis().factors(i) {
            None => Subterm::Var(self.free.basis().word(i)[0] as usize),
            Some((u, v)) => Subterm::comm(self.hall_subterm(u), self.hall_subterm(v)),
        }
    }

    /// Appends Hall commutators degree by degree until `log(word) = target`.
    fn synthesize(&mut self, mut word: ExponentWord, target: &Comb<BigRational>) -> ExponentWord {
        let mut value = self.eval(&word);
        for d in 1..=self.free.class() {
            let mut err = target.clone();
            comb_add_scaled(&mut err, &self.log_hall(&value), &-BigRational::one());
            for (h, q) in err.range(self.free.basis().degree_range(d)) {
                let s = self.hall_subterm(*h);
                let f = self.factor(&s, q);
                value = self.alg.mul(&value, &f);
                word.factors.push((s, q.clone()));
            }
        }
        word
    }
}

pub fn inverse_words(c: usize) -> Result<InverseWords, BchError> {
    check_class(c)?;
    let mut sym = Symbolic::new(c);
    let one = BigRational::one();
    let (x, y) = (Subterm::Var(0), Subterm::Var(1));
    let sum: Comb<BigRational> = Comb::from([(0, one.clone()), (1, one.clone())]);
    let add = sym.synthesize(ExponentWord { factors: vec![(x.clone(), one.clone()), (y.clone(), one.clone())] }, &sum);
    let bracket = if c >= 2 {
        let xy = sym.free.basis().index_of(&[0, 1]).expect("[x,y] is a Hall monomial");
        let target = Comb::from([(xy, one.clone())]);
        sym.synthesize(ExponentWord { factors: vec![(Subterm::comm(x, y), one)] }, &target)
    } else {
        ExponentWord::default()
    };
    Ok(InverseWords { class: c, add, bracket })
}

/// `log` of a word evaluated in the free nilpotent group of class `c`, in
/// Hall coordinates of the free nilpotent rational Lie ring on `x, y`.
pub fn symbolic_log(word: &ExponentWord, c: usize) -> Result<Comb<BigRational>, BchError> {
    check_class(c)?;
    let mut sym = Symbolic::new(c);
    let v = sym.eval(word);
    Ok(sym.log_hall(&v))
}

/// Checks `log(add) = x + y` and `log(bracket) = [x, y]` exactly.
pub fn verify_inverse_words(w: &InverseWords) -> Result<bool, BchError> {
    let c = w.class;
    let one = BigRational::one();
    let free = FreeNilpotentLieRing::new(2, c, CoefficientRing::Rationals).expect("small free ring");
    let sum: Comb<BigRational> = Comb::from([(0, one.clone()), (1, one.clone())]);
    let br: Comb<BigRational> = match free.basis().index_of(&[0, 1]) {
        Some(i) if c >= 2 => Comb::from([(i, one)]),
        _ => Comb::new(),
    };
    Ok(symbolic_log(&w.add, c)? == sum && symbolic_log(&w.bracket, c)? == br)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::tests::heisenberg;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn low_degree_series() {
        let s1 = bch_series(1).unwrap();
        assert_eq!(s1.to_string(), "x + y");
        let s2 = bch_series(2).unwrap();
        assert_eq!(s2.to_string(), "x + y + (1/2)[x,y]");
        let s3 = bch_series(3).unwrap();
        let d3 = s3.degree_part(3);
        let b = s3.free().basis();
        assert_eq!(d3[&b.index_of(&[0, 0, 1]).unwrap()], q(1, 12));
        // [[x,y],y] = -[y,[x,y]]
        assert_eq!(d3[&b.index_of(&[0, 1, 1]).unwrap()], q(1, 12));
        for c in 1..=6 {
            assert!(bch_series(c).unwrap().largest_denominator_prime() <= c as u64);
        }
        assert!(bch_series(7).is_err());
    }

    #[test]
    fn heisenberg_product() {
        let h = heisenberg(5);
        let (x, y, z) = (h.basis_element(0), h.basis_element(1), h.basis_element(2));
        let xy = eval_mul(&h, &x, &y).unwrap();
        assert_eq!(xy, h.add(&h.add(&x, &y), &h.scale(3, &z)));
        assert!(eval_mul(&heisenberg(2), &x, &y).is_err());
    }

    #[test]
    fn class_two_words() {
        let w = inverse_words(2).unwrap();
        assert_eq!(w.add.to_string(), "x y [x,y]^(-1/2)");
        assert_eq!(w.bracket.to_string(), "[x,y]");
        let w1 = inverse_words(1).unwrap();
        assert_eq!(w1.add.to_string(), "x y");
        assert!(w1.bracket.is_empty());
    }

    #[test]
    fn inverse_words_are_exact() {
        for c in 1..=4 {
            let w = inverse_words(c).unwrap();
            assert!(verify_inverse_words(&w).unwrap(), "class {c}");
        }
    }

    #[test]
    fn add_word_in_heisenberg_group() {
        let h = heisenberg(5);
        let g = BchGroup::new(&h).unwrap();
        let w = inverse_words(2).unwrap();
        let add = w.add.compile(g.exponent(), 5).unwrap();
        let br = w.bracket.compile(g.exponent(), 5).unwrap();
        for a in h.elements().unwrap() {
            for b in [h.basis_element(0), h.basis_element(1), h.add(&h.basis_element(0), &h.basis_element(2))] {
                assert_eq!(add.eval(&g, &[a.clone(), b.clone()]).unwrap(), h.add(&a, &b));
                assert_eq!(br.eval(&g, &[a.clone(), b.clone()]).unwrap(), h.bracket(&a, &b));
            }
        }
    }
}
