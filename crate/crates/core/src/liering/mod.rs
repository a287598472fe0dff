//! Finite nilpotent Lie rings given by structure constants.
//!
//! A ring is a finite abelian p-group `⊕ Z/q_i` on an abstract basis
//! `b_1..b_m` together with the table of brackets `[b_i, b_j]`. Elements are
//! plain coordinate vectors reduced modulo the `q_i`.

mod realize;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use crate::exactlin::{AbelianInvariants, FiniteSubgroup, LatticeError, QuotientMap};
use crate::freelie::{FreeLieError, LieExpr};

pub use realize::{realize, realize_with_cap, Realization, DEFAULT_CLASS_CAP};

pub type Element = Vec<i64>;

/// Exhaustive element scans are refused above this order.
pub const EXHAUSTIVE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieRingError {
    #[error("infinite quotient: abelianization has free rank {0}")]
    InfiniteQuotient(usize),
    #[error("denominator {denominator} not invertible modulo p = {p}")]
    DenominatorNotInvertible { denominator: String, p: u64 },
    #[error("not nilpotent of class <= {0}")]
    NotNilpotent(usize),
    #[error("additive order {0} is not a power of p")]
    BadOrder(i64),
    #[error("ring mismatch: {0}")]
    Mismatch(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
    #[error("order {0} exceeds the size cap for this operation")]
    TooLarge(String),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Generators and relators of a Lie ring. Every relator is read as `= 0`;
/// order statements are relators `q*g`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieRingPresentation {
    pub p: u64,
    pub generators: Vec<String>,
    pub relators: Vec<LieExpr>,
}

impl LieRingPresentation {
    pub fn new(p: u64, generators: Vec<String>) -> Self {
        LieRingPresentation { p, generators, relators: Vec::new() }
    }

    pub fn add_relator(&mut self, r: LieExpr) {
        self.relators.push(r);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLieRing {
    p: u64,
    names: Vec<String>,
    orders: Vec<i64>,
    /// `table[i * m + j]` is `[b_i, b_j]`.
    table: Vec<Vec<i64>>,
    generator_images: Option<Vec<(String, Element)>>,
}

fn is_power_of(mut q: i64, p: u64) -> bool {
    if q < 1 {
        return false;
    }
    while q % p as i64 == 0 {
        q /= p as i64;
    }
    q == 1
}

impl FiniteLieRing {
    /// Builds a ring from orders and a full bracket table. The table is
    /// reduced but not checked; call [`FiniteLieRing::validate`] for that.
    pub fn new(p: u64, names: Vec<String>, orders: Vec<i64>, table: Vec<Vec<i64>>) -> Result<Self, LieRingError> {
        let m = orders.len();
        if names.len() != m {
            return Err(LieRingError::Mismatch(format!("{} names for {} basis elements", names.len(), m)));
        }
        if table.len() != m * m || table.iter().any(|r| r.len() != m) {
            return Err(LieRingError::Mismatch("bracket table shape".into()));
        }
        if let Some(&q) = orders.iter().find(|&&q| !is_power_of(q, p)) {
            return Err(LieRingError::BadOrder(q));
        }
        let mut ring = FiniteLieRing { p, names, orders, table, generator_images: None };
        for k in 0..m * m {
            ring.table[k] = ring.reduce(&ring.table[k]);
        }
        Ok(ring)
    }

    /// Builds the quotient `Z^N / Λ` described by `qm`, with the bracket of
    /// lifted basis vectors supplied by the caller.
    pub fn from_quotient<F>(p: u64, qm: &QuotientMap, bracket: F) -> Result<Self, LieRingError>
    where
        F: Fn(&[i64], &[i64]) -> Vec<i64>,
    {
        let m = qm.rank();
        let mut table = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    table.push(vec![0; m]);
                } else {
                    table.push(qm.project(&bracket(qm.lift(i), qm.lift(j))));
                }
            }
        }
        let names = (1..=m).map(|i| format!("b{i}")).collect();
        Self::new(p, names, qm.orders().to_vec(), table)
    }

    pub fn with_generator_images(mut self, images: Vec<(String, Element)>) -> Self {
        self.generator_images = Some(images);
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn generator_images(&self) -> Option<&[(String, Element)]> {
        self.generator_images.as_deref()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&q| BigInt::from(q)).product()
    }

    /// Order as `u64`, when it fits.
    pub fn size(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &q| acc.checked_mul(q as u64))
    }

    fn size_capped(&self, cap: u64) -> Result<u64, LieRingError> {
        match self.size() {
            Some(s) if s <= cap => Ok(s),
            _ => Err(LieRingError::TooLarge(self.order().to_string())),
        }
    }

    /// Largest additive order.
    pub fn exponent(&self) -> i64 {
        self.orders.iter().copied().max().unwrap_or(1)
    }

    /// Additive order of `x`.
    pub fn additive_order(&self, x: &[i64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &q)| (q / num_integer::gcd(a.rem_euclid(q), q)) as u64)
            .max()
            .unwrap_or(1)
    }

    /// `log_p |L|`.
    pub fn log_order(&self) -> u32 {
        self.orders.iter().map(|&q| q.ilog(self.p as i64)).sum()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1 % self.orders[i];
        e
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, q)| a.rem_euclid(*q)).collect()
    }

    fn check(&self, x: &[i64]) {
        assert_eq!(x.len(), self.dim(), "element from a different ring");
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        self.check(x);
        self.check(y);
        x.iter().zip(y).zip(&self.orders).map(|((a, b), q)| (a + b).rem_euclid(*q)).collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Element {
        self.check(x);
        self.check(y);
        x.iter().zip(y).zip(&self.orders).map(|((a, b), q)| (a - b).rem_euclid(*q)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        self.check(x);
        x.iter().zip(&self.orders).map(|(a, q)| (-a).rem_euclid(*q)).collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Element {
        self.check(x);
        x.iter()
            .zip(&self.orders)
            .map(|(a, q)| ((k as i128 * *a as i128).rem_euclid(*q as i128)) as i64)
            .collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[i64] {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &[i64], y: &[i64]) -> Element {
        self.check(x);
        self.check(y);
        let m = self.dim();
        let mut out = vec![0i128; m];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                if y[j] == 0 || i == j {
                    continue;
                }
                let c = x[i] as i128 * y[j] as i128;
                for (o, &t) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                    if t != 0 {
                        *o += c * t as i128;
                    }
                }
            }
        }
        out.iter().zip(&self.orders).map(|(a, q)| a.rem_euclid(*q as i128) as i64).collect()
    }

    /// Mixed-radix index of an element in `0..|L|`.
    pub fn index_of(&self, x: &[i64]) -> u64 {
        let mut idx = 0u64;
        for (a, q) in x.iter().zip(&self.orders).rev() {
            idx = idx * *q as u64 + a.rem_euclid(*q) as u64;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> Element {
        self.orders
            .iter()
            .map(|&q| {
                let a = (idx % q as u64) as i64;
                idx /= q as u64;
                a
            })
            .collect()
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_, LieRingError> {
        let n = self.size_capped(EXHAUSTIVE_CAP)?;
        Ok((0..n).map(move |i| self.element_at(i)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.orders.iter().map(|&q| rng.gen_range(0..q)).collect()
    }

    /// Checks antisymmetry, Jacobi and order compatibility on basis triples.
    pub fn validate(&self) -> Result<(), LieRingError> {
        let m = self.dim();
        for i in 0..m {
            if self.bracket_basis(i, i).iter().any(|&v| v != 0) {
                return Err(LieRingError::Axiom(format!("[b{0},b{0}] != 0", i + 1)));
            }
            for j in 0..m {
                let s = self.add(self.bracket_basis(i, j), self.bracket_basis(j, i));
                if s.iter().any(|&v| v != 0) {
                    return Err(LieRingError::Axiom(format!("[b{},b{}] not antisymmetric", i + 1, j + 1)));
                }
                let t = self.scale(self.orders[i], self.bracket_basis(i, j));
                if t.iter().any(|&v| v != 0) {
                    return Err(LieRingError::Axiom(format!(
                        "bracket [b{},b{}] incompatible with order {}",
                        i + 1,
                        j + 1,
                        self.orders[i]
                    )));
                }
            }
        }
        for i in 0..m {
            let bi = self.basis_element(i);
            for j in 0..m {
                let bj = self.basis_element(j);
                let ij = self.bracket(&bi, &bj);
                for k in 0..m {
                    let bk = self.basis_element(k);
                    let a = self.bracket(&ij, &bk);
                    let b = self.bracket(&self.bracket(&bj, &bk), &bi);
                    let c = self.bracket(&self.bracket(&bk, &bi), &bj);
                    if self.add(&self.add(&a, &b), &c).iter().any(|&v| v != 0) {
                        return Err(LieRingError::Axiom(format!("Jacobi fails on b{},b{},b{}", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn subgroup(&self, gens: &[Element]) -> FiniteSubgroup {
        FiniteSubgroup::generated(&self.orders, gens).expect("orders fit the lattice kernel")
    }

    pub fn whole(&self) -> FiniteSubgroup {
        FiniteSubgroup::whole(&self.orders).expect("orders fit the lattice kernel")
    }

    /// Rows `[b_i, x]`, the matrix of `y ↦ [y, x]`.
    pub fn ad_rows(&self, x: &[i64]) -> Vec<Vec<i64>> {
        (0..self.dim()).map(|i| self.bracket(&self.basis_element(i), x)).collect()
    }

    pub fn centralizer(&self, x: &[i64]) -> FiniteSubgroup {
        FiniteSubgroup::kernel(&self.ad_rows(x), &self.orders, &self.orders).expect("orders fit the lattice kernel")
    }

    /// Image of `ad_x`, i.e. `{[y, x] : y ∈ L}`.
    pub fn ad_image(&self, x: &[i64]) -> FiniteSubgroup {
        self.subgroup(&self.ad_rows(x))
    }

    pub fn center(&self) -> FiniteSubgroup {
        let m = self.dim();
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).flat_map(|j| self.bracket_basis(i, j).to_vec()).collect())
            .collect();
        let target: Vec<i64> = (0..m).flat_map(|_| self.orders.iter().copied()).collect();
        FiniteSubgroup::kernel(&rows, &self.orders, &target).expect("orders fit the lattice kernel")
    }

    /// `[A, L]` for an additive subgroup `A`.
    pub fn bracket_with_ring(&self, a: &FiniteSubgroup) -> FiniteSubgroup {
        let mut gens = Vec::new();
        for g in a.generators() {
            for j in 0..self.dim() {
                gens.push(self.bracket(&g, &self.basis_element(j)));
            }
        }
        self.subgroup(&gens)
    }

    pub fn derived_subring(&self) -> FiniteSubgroup {
        self.bracket_with_ring(&self.whole())
    }

    /// `L = γ_1 ⊇ γ_2 ⊇ ... ⊇ γ_{c+1} = 0`.
    pub fn lower_central_series(&self) -> Vec<FiniteSubgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            if last.order() == 1 {
                break;
            }
            let next = self.bracket_with_ring(last);
            if next.order() == last.order() {
                // not nilpotent; cannot happen for rings built by realize
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().len() - 1
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        self.whole().quotient_invariants(&self.derived_subring()).expect("same ambient")
    }

    /// Subring generated by `xs`.
    pub fn subring_generated(&self, xs: &[Element]) -> FiniteSubgroup {
        let mut s = self.subgroup(xs);
        loop {
            let gens = s.generators();
            let mut grew = false;
            for a in &gens {
                for b in &gens {
                    grew |= s.add_generator(&self.bracket(a, b));
                }
            }
            if !grew {
                return s;
            }
        }
    }

    pub fn is_ideal(&self, s: &FiniteSubgroup) -> bool {
        s.generators()
            .iter()
            .all(|g| (0..self.dim()).all(|j| s.contains(&self.bracket(g, &self.basis_element(j)))))
    }

    /// `L / I` for an ideal `I`.
    pub fn quotient(&self, ideal: &FiniteSubgroup) -> Result<FiniteLieRing, LieRingError> {
        if !self.is_ideal(ideal) {
            return Err(LieRingError::Mismatch("quotient by a non-ideal".into()));
        }
        let qm = QuotientMap::new(ideal.lattice());
        let orders = self.orders.clone();
        FiniteLieRing::from_quotient(self.p, &qm, |a, b| {
            let x: Vec<i64> = a.iter().zip(&orders).map(|(v, q)| v.rem_euclid(*q)).collect();
            let y: Vec<i64> = b.iter().zip(&orders).map(|(v, q)| v.rem_euclid(*q)).collect();
            self.bracket(&x, &y)
        })
    }

    /// `K(L)` as the union of the images of `ad_x`, one per coset of the
    /// center (the image only depends on `x` modulo `Z(L)`).
    pub fn commutator_set(&self) -> Result<CommutatorSet, LieRingError> {
        self.size_capped(EXHAUSTIVE_CAP)?;
        let z = self.center();
        let mut seen = HashSet::new();
        let mut images = Vec::new();
        for x in z.coset_representatives() {
            let im = self.ad_image(&x);
            if seen.insert(im.generators()) {
                images.push(im);
            }
        }
        Ok(CommutatorSet { images })
    }

    /// Exhaustive `K(L)` by scanning all pairs; a test oracle.
    pub fn commutator_set_exhaustive(&self) -> Result<HashSet<Element>, LieRingError> {
        self.size_capped(1_000_000)?;
        let all: Vec<Element> = self.elements()?.collect();
        let mut out = HashSet::new();
        for x in &all {
            for y in &all {
                out.insert(self.bracket(x, y));
            }
        }
        Ok(out)
    }

    /// Summary invariants used to compare rings without an isomorphism test.
    pub fn invariant_summary(&self) -> RingSummary {
        RingSummary {
            order: self.order(),
            class: self.nilpotency_class(),
            center_order: self.center().order(),
            derived_order: self.derived_subring().order(),
            abelianization: self.abelianization(),
        }
    }

    /// Presentation on the basis elements with every bracket and order
    /// written out; realizing it gives back this ring.
    pub fn to_presentation(&self) -> LieRingPresentation {
        use num_rational::BigRational;
        let m = self.dim();
        let mut pres = LieRingPresentation::new(self.p, self.names.clone());
        let comb = |v: &[i64]| {
            LieExpr::Sum(
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(k, c)| LieExpr::scale(BigRational::from_integer(BigInt::from(*c)), LieExpr::gen(k)))
                    .collect(),
            )
        };
        for i in 0..m {
            pres.add_relator(LieExpr::scale(BigRational::from_integer(BigInt::from(self.orders[i])), LieExpr::gen(i)));
        }
        for i in 0..m {
            for j in i + 1..m {
                let lhs = LieExpr::bracket(LieExpr::gen(i), LieExpr::gen(j));
                pres.add_relator(LieExpr::sub(lhs, comb(self.bracket_basis(i, j))));
            }
        }
        pres
    }

    /// Value of `e` with generator `i` sent to the `i`-th generator image.
    /// Rational coefficients are taken modulo the exponent.
    pub fn evaluate(&self, e: &LieExpr) -> Result<Element, LieRingError> {
        use num_integer::Integer;
        use num_traits::{ToPrimitive, Zero};
        let images = self
            .generator_images()
            .ok_or_else(|| LieRingError::Mismatch("ring has no generator images".into()))?;
        match e {
            LieExpr::Gen(i) => images
                .get(*i)
                .map(|(_, x)| x.clone())
                .ok_or_else(|| LieRingError::Mismatch(format!("no generator {i}"))),
            LieExpr::Bracket(a, b) => Ok(self.bracket(&self.evaluate(a)?, &self.evaluate(b)?)),
            LieExpr::Sum(v) => v.iter().try_fold(self.zero(), |acc, t| Ok(self.add(&acc, &self.evaluate(t)?))),
            LieExpr::Scale(c, a) => {
                let den = c.denom();
                if (den % BigInt::from(self.p)).is_zero() {
                    return Err(LieRingError::DenominatorNotInvertible { denominator: den.to_string(), p: self.p });
                }
                let m = BigInt::from(self.exponent());
                let inv = realize::modinv(&den.mod_floor(&m), &m).expect("unit modulo a power of p");
                let k = (c.numer() * inv).mod_floor(&m).to_i64().expect("below the exponent");
                Ok(self.scale(k, &self.evaluate(a)?))
            }
        }
    }

    pub fn format_element(&self, x: &[i64]) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| if *c == 1 { self.names[k].clone() } else { format!("{}*{}", c, self.names[k]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for FiniteLieRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.dim();
        let orders: Vec<String> = (0..m).map(|i| format!("{}:{}", self.names[i], self.orders[i])).collect();
        writeln!(f, "orders {}", orders.join(" "))?;
        for i in 0..m {
            for j in i + 1..m {
                let b = self.bracket_basis(i, j);
                if b.iter().any(|&v| v != 0) {
                    writeln!(f, "[{},{}] = {}", self.names[i], self.names[j], self.format_element(b))?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSummary {
    pub order: BigInt,
    pub class: usize,
    pub center_order: u64,
    pub derived_order: u64,
    pub abelianization: AbelianInvariants,
}

/// Membership structure for `K(L) = {[x, y]}`.
#[derive(Clone, Debug)]
pub struct CommutatorSet {
    images: Vec<FiniteSubgroup>,
}

impl CommutatorSet {
    pub fn contains(&self, z: &[i64]) -> bool {
        self.images.iter().any(|im| im.contains(z))
    }

    pub fn images(&self) -> &[FiniteSubgroup] {
        &self.images
    }

    /// `K(L) = {0}`.
    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|im| im.order() == 1)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Heisenberg ring over Z/p on x, y, z with [x,y] = z.
    pub fn heisenberg(p: i64) -> FiniteLieRing {
        let m = 3;
        let mut table = vec![vec![0; m]; m * m];
        table[1] = vec![0, 0, 1];
        table[3] = vec![0, 0, p - 1];
        FiniteLieRing::new(p as u64, vec!["x".into(), "y".into(), "z".into()], vec![p; 3], table).unwrap()
    }

    #[test]
    fn heisenberg_queries_match_exhaustive_scan() {
        let h = heisenberg(5);
        h.validate().unwrap();
        assert_eq!(h.bracket(&h.basis_element(0), &h.basis_element(1)), vec![0, 0, 1]);
        let all: Vec<Element> = h.elements().unwrap().collect();
        let center: Vec<&Element> =
            all.iter().filter(|x| all.iter().all(|y| h.bracket(x, y).iter().all(|&v| v == 0))).collect();
        assert_eq!(center.len() as u64, h.center().order());
        assert!(center.iter().all(|x| h.center().contains(x)));
        assert_eq!(h.center().order(), 5);
        assert_eq!(h.derived_subring().order(), 5);
        assert_eq!(h.nilpotency_class(), 2);
        let ks = h.commutator_set().unwrap();
        let brute = h.commutator_set_exhaustive().unwrap();
        for x in &all {
            assert_eq!(ks.contains(x), brute.contains(x));
        }
        assert_eq!(brute.len(), 5);
    }

    #[test]
    fn abelian_queries() {
        let a = FiniteLieRing::new(5, vec!["a".into(), "b".into()], vec![5, 25], vec![vec![0, 0]; 4]).unwrap();
        assert_eq!(a.center().order(), 125);
        assert_eq!(a.derived_subring().order(), 1);
        assert_eq!(a.nilpotency_class(), 1);
        assert!(a.commutator_set().unwrap().is_trivial());
    }

    #[test]
    fn quotient_by_center() {
        let h = heisenberg(5);
        let q = h.quotient(&h.center()).unwrap();
        assert_eq!(q.size(), Some(25));
        assert_eq!(q.nilpotency_class(), 1);
    }

    #[test]
    fn index_roundtrip() {
        let h = heisenberg(5);
        for i in 0..125 {
            assert_eq!(h.index_of(&h.element_at(i)), i);
        }
    }
}
