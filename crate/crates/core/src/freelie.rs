//! Free Lie rings on the Lyndon basis, truncated at a nilpotency class.
//!
//! Basis monomials are Lyndon words over the generators `0..n`, sorted by
//! degree and then lexicographically, each bracketed by its standard
//! factorisation `w = uv` (`v` the longest proper Lyndon suffix). So the
//! generators come first, then `[x1,x2]`, `[x1,x3]`, ... and `[x2,x1]`
//! rewrites to `-[x1,x2]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const MAX_CLASS: usize = 8;

/// Refuse free rings whose structure table would not fit comfortably.
pub const MAX_BASIS: usize = 6000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeLieError {
    #[error("class bound {0} exceeds the cap {MAX_CLASS}")]
    ClassTooLarge(usize),
    #[error("class bound must be at least 1")]
    ClassTooSmall,
    #[error("a free Lie ring needs at least one generator")]
    NoGenerators,
    #[error("bracket of degree {degree} exceeds class {class}")]
    DegreeOverflow { degree: usize, class: usize },
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error("free nilpotent ring has {0} basis monomials, above the supported {MAX_BASIS}")]
    TooLarge(usize),
}

/// Coefficient rings used for combinations of basis monomials.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_i64(x: i64) -> Self;
}

impl Scalar for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }
}

impl Scalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
}

impl Scalar for BigRational {
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Sparse combination of basis monomials.
pub type Comb<T> = BTreeMap<usize, T>;

pub fn comb_add_scaled<T: Scalar>(acc: &mut Comb<T>, x: &Comb<T>, c: &T) {
    for (k, v) in x {
        let e = acc.entry(*k).or_insert_with(T::zero);
        *e = e.clone() + c.clone() * v.clone();
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

pub fn comb_scale<T: Scalar>(x: &Comb<T>, c: &T) -> Comb<T> {
    let mut out = Comb::new();
    comb_add_scaled(&mut out, x, c);
    out
}

/// Number of Lyndon words of length `d` over `n` letters.
pub fn witt_rank(n: u64, d: u64) -> u64 {
    assert!(d >= 1);
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += mobius(d / e) as i128 * (n as i128).pow(e as u32);
        }
    }
    (total / d as i128) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            result = -result;
        }
        q += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// All Lyndon words of length at most `maxlen` over `0..n`, in lex order.
fn lyndon_words(n: usize, maxlen: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w: Vec<i32> = vec![-1];
    loop {
        *w.last_mut().unwrap() += 1;
        out.push(w.iter().map(|&x| x as u8).collect());
        let m = w.len();
        while w.len() < maxlen {
            let x = w[w.len() - m];
            w.push(x);
        }
        while w.last() == Some(&(n as i32 - 1)) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct HallBasis {
    n: usize,
    c: usize,
    words: Vec<Vec<u8>>,
    factors: Vec<Option<(usize, usize)>>,
    index: HashMap<Vec<u8>, usize>,
    /// `offsets[d]` is the index of the first monomial of degree `d`.
    offsets: Vec<usize>,
}

impl HallBasis {
    pub fn new(n: usize, c: usize) -> Result<Self, FreeLieError> {
        if n == 0 {
            return Err(FreeLieError::NoGenerators);
        }
        if c == 0 {
            return Err(FreeLieError::ClassTooSmall);
        }
        if c > MAX_CLASS {
            return Err(FreeLieError::ClassTooLarge(c));
        }
        if n > 255 {
            return Err(FreeLieError::TooLarge(n));
        }
        let size: u64 = (1..=c as u64).map(|d| witt_rank(n as u64, d)).sum();
        if size > MAX_BASIS as u64 {
            return Err(FreeLieError::TooLarge(size as usize));
        }
        let mut words = lyndon_words(n, c);
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let factors = words
            .iter()
            .map(|w| {
                (1..w.len())
                    .find(|&s| index.contains_key(&w[s..]))
                    .map(|s| (index[&w[..s]], index[&w[s..]]))
            })
            .collect();
        let mut offsets = vec![0; c + 2];
        for d in 1..=c + 1 {
            offsets[d] = words.iter().filter(|w| w.len() < d).count();
        }
        Ok(HallBasis { n, c, words, factors, index, offsets })
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn class(&self) -> usize {
        self.c
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.words[i].len()
    }

    /// Standard factorisation `(u, v)` of a monomial of degree at least 2.
    pub fn factors(&self, i: usize) -> Option<(usize, usize)> {
        self.factors[i]
    }

    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Indices of the degree-`d` monomials.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        assert!(d >= 1 && d <= self.c);
        self.offsets[d]..self.offsets[d + 1]
    }

    /// Number of monomials of degree at most `d`.
    pub fn count_up_to(&self, d: usize) -> usize {
        self.offsets[d.min(self.c) + 1]
    }

    /// Bracketed form of a monomial, e.g. `[x1,[x1,x2]]`.
    pub fn format(&self, i: usize, names: &[String]) -> String {
        match self.factors[i] {
            None => names
                .get(self.words[i][0] as usize)
                .cloned()
                .unwrap_or_else(|| format!("x{}", self.words[i][0] + 1)),
            Some((u, v)) => format!("[{},{}]", self.format(u, names), self.format(v, names)),
        }
    }
}

/// Whether the rational combinations live over `Z` or `Q`. The structure
/// constants are integral either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientRing {
    Integers,
    Rationals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteMode {
    /// Brackets above the class bound are dropped.
    Truncate,
    /// Brackets above the class bound are an error.
    Strict,
}

/// Lie expressions over generator indices with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum LieExpr {
    Gen(usize),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Scale(BigRational, Box<LieExpr>),
    Sum(Vec<LieExpr>),
}

impl LieExpr {
    pub fn gen(i: usize) -> Self {
        LieExpr::Gen(i)
    }

    pub fn bracket(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// Left-normed `[[..[a1,a2],..],ak]`.
    pub fn left_normed(items: Vec<LieExpr>) -> Self {
        let mut it = items.into_iter();
        let first = it.next().expect("empty bracket");
        it.fold(first, LieExpr::bracket)
    }

    pub fn scale(c: BigRational, a: LieExpr) -> Self {
        LieExpr::Scale(c, Box::new(a))
    }

    pub fn zero() -> Self {
        LieExpr::Sum(Vec::new())
    }

    pub fn sub(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Sum(vec![a, LieExpr::scale(-BigRational::one(), b)])
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        match self {
            LieExpr::Gen(i) => Some(*i),
            LieExpr::Bracket(a, b) => a.max_generator().max(b.max_generator()),
            LieExpr::Scale(_, a) => a.max_generator(),
            LieExpr::Sum(v) => v.iter().filter_map(|e| e.max_generator()).max(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FreeNilpotentLieRing {
    basis: HallBasis,
    ring: CoefficientRing,
    /// `table[i * len + j]` holds `[h_i, h_j]`, empty above the class.
    table: Vec<Vec<(usize, i64)>>,
}

struct TableBuilder<'a> {
    basis: &'a HallBasis,
    memo: Vec<Option<Vec<(usize, i64)>>>,
}

fn merge_into(acc: &mut BTreeMap<usize, i64>, x: &[(usize, i64)], c: i64) {
    for &(k, v) in x {
        let e = acc.entry(k).or_insert(0);
        *e += c * v;
        if *e == 0 {
            acc.remove(&k);
        }
    }
}

impl TableBuilder<'_> {
    fn bracket(&mut self, i: usize, j: usize) -> Vec<(usize, i64)> {
        let b = self.basis;
        let n = b.len();
        if i == j || b.degree(i) + b.degree(j) > b.class() {
            return Vec::new();
        }
        if let Some(v) = &self.memo[i * n + j] {
            return v.clone();
        }
        let res = if b.word(i) > b.word(j) {
            self.bracket(j, i).into_iter().map(|(k, v)| (k, -v)).collect()
        } else {
            match b.factors(i) {
                Some((u, v)) if b.word(v) < b.word(j) => {
                    // [[u,v],w] = [u,[v,w]] + [[u,w],v]
                    let mut acc = BTreeMap::new();
                    for (k, c) in self.bracket(v, j) {
                        let t = self.bracket(u, k);
                        merge_into(&mut acc, &t, c);
                    }
                    for (k, c) in self.bracket(u, j) {
                        let t = self.bracket(k, v);
                        merge_into(&mut acc, &t, c);
                    }
                    acc.into_iter().collect()
                }
                _ => {
                    let mut w = b.word(i).to_vec();
                    w.extend_from_slice(b.word(j));
                    vec![(b.index_of(&w).expect("standard bracket of Lyndon words"), 1)]
                }
            }
        };
        self.memo[i * n + j] = Some(res.clone());
        res
    }
}

impl FreeNilpotentLieRing {
    pub fn new(n: usize, c: usize, ring: CoefficientRing) -> Result<Self, FreeLieError> {
        let basis = HallBasis::new(n, c)?;
        let len = basis.len();
        let mut builder = TableBuilder { basis: &basis, memo: vec![None; len * len] };
        let mut table = vec![Vec::new(); len * len];
        for i in 0..len {
            for j in 0..len {
                if basis.degree(i) + basis.degree(j) <= c {
                    table[i * len + j] = builder.bracket(i, j);
                }
            }
        }
        Ok(FreeNilpotentLieRing { basis, ring, table })
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn coefficient_ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn generators(&self) -> usize {
        self.basis.generators()
    }

    pub fn class(&self) -> usize {
        self.basis.class()
    }

    /// `[h_i, h_j]`; empty when the degree exceeds the class.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i * self.len() + j]
    }

    pub fn bracket<T: Scalar>(&self, x: &Comb<T>, y: &Comb<T>, mode: RewriteMode) -> Result<Comb<T>, FreeLieError> {
        let mut out = Comb::new();
        for (i, a) in x {
            for (j, b) in y {
                let deg = self.basis.degree(*i) + self.basis.degree(*j);
                if deg > self.class() {
                    if mode == RewriteMode::Strict && i != j {
                        return Err(FreeLieError::DegreeOverflow { degree: deg, class: self.class() });
                    }
                    continue;
                }
                let ab = a.clone() * b.clone();
                for &(k, v) in self.bracket_basis(*i, *j) {
                    let e = out.entry(k).or_insert_with(T::zero);
                    *e = e.clone() + ab.clone() * T::from_i64(v);
                    if e.is_zero() {
                        out.remove(&k);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bracket of dense vectors with coefficients reduced modulo `d`.
    pub fn bracket_mod(&self, x: &[i64], y: &[i64], d: i64) -> Vec<i64> {
        let mut out = vec![0i64; self.len()];
        self.bracket_mod_into(x, y, d, &mut out);
        out
    }

    pub fn bracket_mod_into(&self, x: &[i64], y: &[i64], d: i64, out: &mut [i64]) {
        let c = self.class();
        let ynz: Vec<usize> = (0..y.len()).filter(|&j| y[j] != 0).collect();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let di = self.basis.degree(i);
            for &j in &ynz {
                if di + self.basis.degree(j) > c {
                    continue;
                }
                let ab = (a as i128 * y[j] as i128).rem_euclid(d as i128);
                for &(k, v) in self.bracket_basis(i, j) {
                    out[k] = ((out[k] as i128 + ab * v as i128).rem_euclid(d as i128)) as i64;
                }
            }
        }
    }

    pub fn generator<T: Scalar>(&self, k: usize) -> Result<Comb<T>, FreeLieError> {
        if k >= self.generators() {
            return Err(FreeLieError::BadGenerator(k));
        }
        Ok(Comb::from([(k, T::one())]))
    }

    /// Normal form of an expression.
    pub fn rewrite(&self, e: &LieExpr, mode: RewriteMode) -> Result<Comb<BigRational>, FreeLieError> {
        match e {
            LieExpr::Gen(k) => self.generator(*k),
            LieExpr::Bracket(a, b) => {
                let x = self.rewrite(a, mode)?;
                let y = self.rewrite(b, mode)?;
                self.bracket(&x, &y, mode)
            }
            LieExpr::Scale(c, a) => Ok(comb_scale(&self.rewrite(a, mode)?, c)),
            LieExpr::Sum(v) => {
                let mut acc = Comb::new();
                for t in v {
                    comb_add_scaled(&mut acc, &self.rewrite(t, mode)?, &BigRational::one());
                }
                Ok(acc)
            }
        }
    }

    /// Exhaustive Jacobi check over all basis triples.
    pub fn check_jacobi(&self) -> bool {
        let n = self.len();
        let unit = |i: usize| Comb::from([(i, 1i64)]);
        for i in 0..n {
            for j in 0..n {
                let ij = self.bracket(&unit(i), &unit(j), RewriteMode::Truncate).unwrap();
                for k in 0..n {
                    let jk = self.bracket(&unit(j), &unit(k), RewriteMode::Truncate).unwrap();
                    let ki = self.bracket(&unit(k), &unit(i), RewriteMode::Truncate).unwrap();
                    let mut acc = self.bracket(&ij, &unit(k), RewriteMode::Truncate).unwrap();
                    comb_add_scaled(&mut acc, &self.bracket(&jk, &unit(i), RewriteMode::Truncate).unwrap(), &1);
                    comb_add_scaled(&mut acc, &self.bracket(&ki, &unit(j), RewriteMode::Truncate).unwrap(), &1);
                    if !acc.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        let parts: Vec<String> = (0..self.len()).map(|i| self.format(i, &names)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::AssocAlgebra;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_rank(2, 1), 2);
        assert_eq!(witt_rank(2, 2), 1);
        assert_eq!(witt_rank(3, 3), 8);
        assert_eq!(witt_rank(2, 4), 3);
    }

    #[test]
    fn basis_counts() {
        let b = HallBasis::new(2, 1).unwrap();
        assert_eq!(b.to_string(), "x1, x2");
        let b = HallBasis::new(2, 3).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.to_string(), "x1, x2, [x1,x2], [x1,[x1,x2]], [[x1,x2],x2]");
        let b = HallBasis::new(3, 2).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.degree_range(2).len(), 3);
        for n in 1..=3 {
            for c in 1..=5 {
                let b = HallBasis::new(n, c).unwrap();
                for d in 1..=c {
                    assert_eq!(b.degree_range(d).len() as u64, witt_rank(n as u64, d as u64));
                }
            }
        }
        assert!(matches!(HallBasis::new(2, 9), Err(FreeLieError::ClassTooLarge(9))));
    }

    #[test]
    fn antisymmetry_and_truncation() {
        let f = FreeNilpotentLieRing::new(2, 2, CoefficientRing::Integers).unwrap();
        assert_eq!(f.bracket_basis(1, 0), &[(2, -1)]);
        assert_eq!(f.bracket_basis(0, 1), &[(2, 1)]);
        let f = FreeNilpotentLieRing::new(2, 3, CoefficientRing::Integers).unwrap();
        for i in 0..f.len() {
            for j in 0..f.len() {
                if f.basis().degree(i) + f.basis().degree(j) == 4 {
                    assert!(f.bracket_basis(i, j).is_empty());
                }
            }
        }
        let f = FreeNilpotentLieRing::new(2, 4, CoefficientRing::Rationals).unwrap();
        assert_eq!(f.len(), 8);
    }

    #[test]
    fn strict_mode_errors() {
        let f = FreeNilpotentLieRing::new(2, 2, CoefficientRing::Integers).unwrap();
        let e = LieExpr::left_normed(vec![LieExpr::gen(0), LieExpr::gen(1), LieExpr::gen(1)]);
        assert!(f.rewrite(&e, RewriteMode::Truncate).unwrap().is_empty());
        assert!(matches!(f.rewrite(&e, RewriteMode::Strict), Err(FreeLieError::DegreeOverflow { .. })));
    }

    #[test]
    fn jacobi_exhaustive() {
        for n in 1..=3 {
            for c in 1..=4 {
                let f = FreeNilpotentLieRing::new(n, c, CoefficientRing::Integers).unwrap();
                assert!(f.check_jacobi(), "n={n} c={c}");
            }
        }
    }

    #[test]
    fn non_hall_bracketing_matches_associative_oracle() {
        // [[x1,x2],x3] is not a Lyndon bracketing: 123 factors as 1|23
        let f = FreeNilpotentLieRing::new(3, 3, CoefficientRing::Rationals).unwrap();
        let e = LieExpr::left_normed(vec![LieExpr::gen(0), LieExpr::gen(1), LieExpr::gen(2)]);
        let comb = f.rewrite(&e, RewriteMode::Strict).unwrap();
        let alg = AssocAlgebra::new(3, 3);
        let expected = alg.eval_lie_expr(&e);
        let got = alg.from_hall(&f, &comb);
        assert_eq!(expected, got);
        // and it really is a combination of two monomials
        assert_eq!(comb.len(), 2);
        assert!(comb.values().all(|c| c == &q(1) || c == &q(-1)));
    }
}
