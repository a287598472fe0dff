//! Finite p-groups given by power-commutator presentations.
//!
//! Generators `g_1..g_m` have relative orders `q_i = p^{e_i}`, power
//! relations `g_i^{q_i} = w_i` and commutator relations `[g_j, g_i] = w_ji`
//! for `j > i`, with every right-hand side a word in `g_{i+1}..g_m`.
//! Elements are exponent vectors `(a_1..a_m)`, `0 <= a_i < q_i`, standing for
//! `g_1^{a_1} ... g_m^{a_m}`. Multiplication is collection from the left.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use rand::Rng;

pub type GroupElement = Vec<i64>;

/// A word as `(generator, exponent)` pairs.
pub type Word = Vec<(usize, i64)>;

/// Exhaustive scans are refused above this order.
pub const GROUP_SCAN_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcError {
    #[error("relative order {0} is not a power of p")]
    BadRelativeOrder(i64),
    #[error("relation for {lhs} uses {bad}, which is not later than {lower}")]
    BadRelation { lhs: String, bad: String, lower: String },
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("group order {0} exceeds the scan cap")]
    TooLarge(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub p: u64,
    pub names: Vec<String>,
    pub relative_orders: Vec<i64>,
    pub powers: Vec<Word>,
    /// `(j, i)` with `j > i` maps to the word for `[g_j, g_i]`.
    pub commutators: BTreeMap<(usize, usize), Word>,
}

impl PcPresentation {
    /// Generators of relative order `p` with trivial relations.
    pub fn new(p: u64, names: Vec<String>) -> Self {
        let m = names.len();
        PcPresentation {
            p,
            names,
            relative_orders: vec![p as i64; m],
            powers: vec![Vec::new(); m],
            commutators: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn set_power(&mut self, i: usize, w: Word) {
        self.powers[i] = w;
    }

    /// Sets `[g_j, g_i]` for `j > i`.
    pub fn set_commutator(&mut self, j: usize, i: usize, w: Word) {
        assert!(j > i, "commutator relations are stored as [g_j, g_i] with j > i");
        if w.iter().all(|&(_, e)| e == 0) {
            self.commutators.remove(&(j, i));
        } else {
            self.commutators.insert((j, i), w);
        }
    }

    pub fn commutator(&self, j: usize, i: usize) -> &[(usize, i64)] {
        self.commutators.get(&(j, i)).map(|w| w.as_slice()).unwrap_or(&[])
    }

    /// Checks orders and that right-hand sides only use later generators.
    pub fn validate(&self) -> Result<(), PcError> {
        let m = self.len();
        for &q in &self.relative_orders {
            let mut x = q;
            if x < 2 {
                return Err(PcError::BadRelativeOrder(q));
            }
            while x % self.p as i64 == 0 {
                x /= self.p as i64;
            }
            if x != 1 {
                return Err(PcError::BadRelativeOrder(q));
            }
        }
        let check = |lhs: String, lower: usize, w: &Word| -> Result<(), PcError> {
            for &(g, _) in w {
                if g >= m {
                    return Err(PcError::BadGenerator(g));
                }
                if g <= lower {
                    return Err(PcError::BadRelation { lhs, bad: self.names[g].clone(), lower: self.names[lower].clone() });
                }
            }
            Ok(())
        };
        for i in 0..m {
            check(format!("{}^{}", self.names[i], self.relative_orders[i]), i, &self.powers[i])?;
        }
        for (&(j, i), w) in &self.commutators {
            if j >= m || i >= j {
                return Err(PcError::BadGenerator(j));
            }
            check(format!("[{},{}]", self.names[j], self.names[i]), i, w)?;
        }
        Ok(())
    }
}

fn format_word(names: &[String], w: &[(usize, i64)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{}", names[g], e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            writeln!(f, "{}^{} = {}", self.names[i], self.relative_orders[i], format_word(&self.names, &self.powers[i]))?;
        }
        for (&(j, i), w) in &self.commutators {
            writeln!(f, "[{},{}] = {}", self.names[j], self.names[i], format_word(&self.names, w))?;
        }
        Ok(())
    }
}

/// A consistent pc presentation prepared for collection.
#[derive(Clone, Debug)]
pub struct PcGroup {
    pres: PcPresentation,
    q: Vec<i64>,
    /// Normal form of `w_i`, the power word of `g_i`, as blocks `(k, e)`.
    power_blocks: Vec<Vec<(usize, i64)>>,
    /// `conj[j * m + i]`: blocks of `g_j^{g_i} = g_j [g_j, g_i]` for `j > i`.
    conj: Vec<Vec<(usize, i64)>>,
    /// `commutes[j * m + i]`: `[g_j, g_i] = 1`.
    commutes: Vec<bool>,
    exponent: OnceLock<u64>,
}

fn blocks_of(y: &[i64]) -> Vec<(usize, i64)> {
    y.iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)).collect()
}

impl PcGroup {
    /// Prepares a presentation without checking consistency.
    ///
    /// Right-hand sides are brought to normal form from the last generator
    /// upwards; relations of `g_i` only need the tables of later generators.
    pub fn new_unchecked(pres: PcPresentation) -> Result<Self, PcError> {
        pres.validate()?;
        let m = pres.len();
        let mut g = PcGroup {
            q: pres.relative_orders.clone(),
            power_blocks: vec![Vec::new(); m],
            conj: vec![Vec::new(); m * m],
            commutes: vec![true; m * m],
            exponent: OnceLock::new(),
            pres,
        };
        for i in (0..m).rev() {
            let w = g.collect(&g.pres.powers[i]);
            g.power_blocks[i] = blocks_of(&w);
            for j in i + 1..m {
                let w = g.collect(g.pres.commutator(j, i));
                g.commutes[j * m + i] = g.is_identity(&w);
                let mut blocks = vec![(j, 1)];
                blocks.extend(blocks_of(&w));
                g.conj[j * m + i] = blocks;
            }
        }
        Ok(g)
    }

    /// Prepares a presentation and runs the overlap consistency checks.
    pub fn new(pres: PcPresentation) -> Result<Self, PcError> {
        let g = Self::new_unchecked(pres)?;
        g.consistency_check()?;
        Ok(g)
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn p(&self) -> u64 {
        self.pres.p
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn relative_orders(&self) -> &[i64] {
        &self.q
    }

    pub fn names(&self) -> &[String] {
        &self.pres.names
    }

    pub fn order(&self) -> num_bigint::BigInt {
        self.q.iter().map(|&x| num_bigint::BigInt::from(x)).product()
    }

    pub fn size(&self) -> Option<u64> {
        self.q.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x as u64))
    }

    fn scan_size(&self) -> Result<u64, PcError> {
        self.size().filter(|&s| s <= GROUP_SCAN_CAP).ok_or_else(|| PcError::TooLarge(self.order().to_string()))
    }

    pub fn identity(&self) -> GroupElement {
        vec![0; self.len()]
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    /// Multiplies the normal form `a` on the right by the blocks `g_k^e`
    /// (`e > 0`), which are consumed first to last.
    fn collect_blocks(&self, a: &mut [i64], blocks: &[(usize, i64)]) {
        let m = self.len();
        let mut stack: Vec<(usize, i64)> = blocks.iter().rev().copied().collect();
        while let Some((k, e)) = stack.pop() {
            let tail_commutes = a[k + 1..].iter().enumerate().all(|(t, &v)| v == 0 || self.commutes[(k + 1 + t) * m + k]);
            if tail_commutes {
                // g_k^e moves past the tail in one step
                let t = a[k] + e;
                a[k] = t % self.q[k];
                let carries = t / self.q[k];
                if carries > 0 {
                    for j in (k + 1..m).rev() {
                        if a[j] != 0 {
                            stack.push((j, a[j]));
                            a[j] = 0;
                        }
                    }
                    for _ in 0..carries {
                        stack.extend(self.power_blocks[k].iter().rev());
                    }
                }
                continue;
            }
            if e > 1 {
                stack.push((k, e - 1));
            }
            a[k] += 1;
            let carry = a[k] == self.q[k];
            if carry {
                a[k] = 0;
            }
            // a = prefix * g_k^{a_k} * u with u the tail, and u * g_k = g_k * u^{g_k};
            // the pending word is the power word (on carry) followed by u^{g_k}
            for j in (k + 1..m).rev() {
                let e = a[j];
                if e == 0 {
                    continue;
                }
                a[j] = 0;
                let c = &self.conj[j * m + k];
                for _ in 0..e {
                    stack.extend(c.iter().rev());
                }
            }
            if carry {
                stack.extend(self.power_blocks[k].iter().rev());
            }
        }
    }

    /// Normal form of a word with arbitrary integer exponents.
    pub fn collect(&self, word: &[(usize, i64)]) -> GroupElement {
        let mut a = self.identity();
        for &(g, e) in word {
            if e >= 0 {
                if e > 0 {
                    self.collect_blocks(&mut a, &[(g, e)]);
                }
            } else {
                let inv = self.inv(&self.collect(&[(g, -e)]));
                a = self.mul(&a, &inv);
            }
        }
        a
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> GroupElement {
        let mut a = x.to_vec();
        self.collect_blocks(&mut a, &blocks_of(y));
        a
    }

    /// Inverse by killing one exponent at a time from the left.
    pub fn inv(&self, x: &[i64]) -> GroupElement {
        let mut cur = x.to_vec();
        let mut y = self.identity();
        for k in 0..self.len() {
            let t = (self.q[k] - cur[k]).rem_euclid(self.q[k]);
            if t != 0 {
                self.collect_blocks(&mut cur, &[(k, t)]);
            }
            y[k] = t;
        }
        debug_assert!(cur.iter().all(|&v| v == 0));
        y
    }

    pub fn pow(&self, x: &[i64], n: i64) -> GroupElement {
        let mut base = if n < 0 { self.inv(x) } else { x.to_vec() };
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

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn comm(&self, x: &[i64], y: &[i64]) -> GroupElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    pub fn commuting(&self, x: &[i64], y: &[i64]) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_identity(&self, x: &[i64]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    pub fn element_order(&self, x: &[i64]) -> u64 {
        let mut y = x.to_vec();
        let mut n = 1u64;
        while !self.is_identity(&y) {
            y = self.pow(&y, self.p() as i64);
            n *= self.p();
        }
        n
    }

    pub fn index_of(&self, x: &[i64]) -> u64 {
        let mut idx = 0u64;
        for (a, q) in x.iter().zip(&self.q).rev() {
            idx = idx * *q as u64 + *a as u64;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> GroupElement {
        self.q
            .iter()
            .map(|&q| {
                let a = (idx % q as u64) as i64;
                idx /= q as u64;
                a
            })
            .collect()
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = GroupElement> + '_, PcError> {
        let n = self.scan_size()?;
        Ok((0..n).map(move |i| self.element_at(i)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        self.q.iter().map(|&q| rng.gen_range(0..q)).collect()
    }

    /// Largest element order. Found by a scan below the cap; above it the
    /// group order is returned, which every element order divides.
    pub fn exponent(&self) -> u64 {
        *self.exponent.get_or_init(|| match self.scan_size() {
            Ok(n) => (0..n).into_par_iter().map(|i| self.element_order(&self.element_at(i))).max().unwrap_or(1),
            Err(_) => self.size().expect("group order fits in u64"),
        })
    }

    /// Label of the conjugacy class of every element (indexed as in
    /// `element_at`) and the size of each class.
    pub fn conjugacy_classes(&self) -> Result<(Vec<u32>, Vec<u64>), PcError> {
        let n = self.scan_size()? as usize;
        let conj: Vec<(GroupElement, GroupElement)> =
            (0..self.len()).map(|i| (self.generator(i), self.inv(&self.generator(i)))).collect();
        let mut label = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            label[start] = id;
            let mut orbit = vec![self.element_at(start as u64)];
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head].clone();
                head += 1;
                for (g, gi) in &conj {
                    let z = self.mul(&self.mul(gi, &y), g);
                    let k = self.index_of(&z) as usize;
                    if label[k] == u32::MAX {
                        label[k] = id;
                        orbit.push(z);
                    }
                }
            }
            sizes.push(orbit.len() as u64);
        }
        Ok((label, sizes))
    }

    /// The standard overlap checks, comparing two collections of each.
    pub fn consistency_check(&self) -> Result<(), PcError> {
        let m = self.len();
        let names = &self.pres.names;
        let g = |i: usize| self.generator(i);
        let fail = |what: String| Err(PcError::Inconsistent(what));
        for k in 0..m {
            for j in 0..k {
                for i in 0..j {
                    let left = self.mul(&self.mul(&g(k), &g(j)), &g(i));
                    let right = self.mul(&g(k), &self.mul(&g(j), &g(i)));
                    if left != right {
                        return fail(format!("({} {}) {} differs from {} ({} {})", names[k], names[j], names[i], names[k], names[j], names[i]));
                    }
                }
            }
        }
        for j in 0..m {
            let pw = self.pow(&g(j), self.q[j] - 1);
            let full = self.mul(&pw, &g(j));
            let expected = self.collect(&self.pres.powers[j]);
            if full != expected {
                return fail(format!("{}^{} does not collect to its power word", names[j], self.q[j]));
            }
            for i in 0..j {
                let left = self.mul(&full, &g(i));
                let right = self.mul(&pw, &self.mul(&g(j), &g(i)));
                if left != right {
                    return fail(format!("({}^{}) {} overlap", names[j], self.q[j], names[i]));
                }
            }
            for k in j + 1..m {
                let pj = self.pow(&g(j), self.q[j] - 1);
                let left = self.mul(&self.mul(&g(k), &g(j)), &pj);
                let right = self.mul(&g(k), &self.collect(&self.pres.powers[j]));
                if left != right {
                    return fail(format!("{} ({}^{}) overlap", names[k], names[j], self.q[j]));
                }
            }
            let a = self.mul(&g(j), &full);
            let b = self.mul(&full, &g(j));
            if a != b {
                return fail(format!("{}^{} does not commute with {}", names[j], self.q[j], names[j]));
            }
        }
        Ok(())
    }

    /// Subgroup generated by `gens`, as a membership table.
    pub fn subgroup(&self, gens: &[GroupElement]) -> Result<Subgroup, PcError> {
        let n = self.scan_size()? as usize;
        let mut member = vec![false; n];
        let mut elements = vec![self.identity()];
        member[0] = true;
        let gens: Vec<GroupElement> = gens.iter().filter(|g| !self.is_identity(g)).cloned().collect();
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for s in &gens {
                let y = self.mul(&x, s);
                let idx = self.index_of(&y) as usize;
                if !member[idx] {
                    member[idx] = true;
                    elements.push(y);
                }
            }
        }
        Ok(Subgroup { member, elements, gens })
    }

    pub fn whole(&self) -> Result<Subgroup, PcError> {
        let gens: Vec<GroupElement> = (0..self.len()).map(|i| self.generator(i)).collect();
        self.subgroup(&gens)
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[GroupElement]) -> Result<Subgroup, PcError> {
        let mut gens = gens.to_vec();
        loop {
            let s = self.subgroup(&gens)?;
            let mut grew = false;
            let current = s.gens.clone();
            for x in &current {
                for i in 0..self.len() {
                    let gi = self.generator(i);
                    let c = self.mul(&self.mul(&self.inv(&gi), x), &gi);
                    if !s.contains(self, &c) {
                        gens.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(s);
            }
        }
    }

    /// `[H, G]` for a normal subgroup `H`.
    pub fn commutator_with_group(&self, h: &Subgroup) -> Result<Subgroup, PcError> {
        let mut gens = Vec::new();
        for x in &h.gens {
            for i in 0..self.len() {
                gens.push(self.comm(x, &self.generator(i)));
            }
        }
        self.normal_closure(&gens)
    }

    pub fn derived_subgroup(&self) -> Result<Subgroup, PcError> {
        let w = self.whole()?;
        self.commutator_with_group(&w)
    }

    pub fn lower_central_series(&self) -> Result<Vec<Subgroup>, PcError> {
        let mut series = vec![self.whole()?];
        loop {
            let last = series.last().unwrap();
            if last.order() == 1 {
                return Ok(series);
            }
            let next = self.commutator_with_group(last)?;
            if next.order() == last.order() {
                return Ok(series);
            }
            series.push(next);
        }
    }

    pub fn nilpotency_class(&self) -> Result<usize, PcError> {
        Ok(self.lower_central_series()?.len() - 1)
    }

    pub fn center(&self) -> Result<Subgroup, PcError> {
        let gens: Vec<GroupElement> = (0..self.len()).map(|i| self.generator(i)).collect();
        let central: Vec<GroupElement> =
            self.elements()?.filter(|x| gens.iter().all(|g| self.commuting(x, g))).collect();
        self.subgroup(&central)
    }

    pub fn centralizer(&self, x: &[i64]) -> Result<Subgroup, PcError> {
        let c: Vec<GroupElement> = self.elements()?.filter(|y| self.commuting(x, y)).collect();
        self.subgroup(&c)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.gens.iter().all(|x| {
            (0..self.len()).all(|i| {
                let gi = self.generator(i);
                h.contains(self, &self.mul(&self.mul(&self.inv(&gi), x), &gi))
            })
        })
    }
}

impl crate::bch::GroupOracle for PcGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        PcGroup::identity(self)
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        PcGroup::mul(self, a, b)
    }

    fn inv(&self, a: &GroupElement) -> GroupElement {
        PcGroup::inv(self, a)
    }

    fn p(&self) -> u64 {
        self.pres.p
    }

    fn exponent(&self) -> u64 {
        PcGroup::exponent(self)
    }

    fn pow(&self, a: &GroupElement, n: i64) -> GroupElement {
        PcGroup::pow(self, a, n)
    }

    fn comm(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        PcGroup::comm(self, a, b)
    }
}

/// A subgroup stored as an element list plus membership table.
#[derive(Clone, Debug)]
pub struct Subgroup {
    member: Vec<bool>,
    elements: Vec<GroupElement>,
    gens: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, g: &PcGroup, x: &[i64]) -> bool {
        self.member[g.index_of(x) as usize]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;

    /// g, g1, g2, g3 with relative orders p^2, p, p, p.
    pub fn g1p(p: u64) -> PcPresentation {
        let mut pres = PcPresentation::new(p, ["g", "g1", "g2", "g3"].iter().map(|s| s.to_string()).collect());
        pres.relative_orders[0] = (p * p) as i64;
        pres.set_power(0, vec![(3, 1)]);
        pres.set_commutator(1, 0, vec![(2, 1)]);
        pres.set_commutator(2, 0, vec![(3, 1)]);
        pres
    }

    #[test]
    fn g1p_basics() {
        let g = PcGroup::new(g1p(5)).unwrap();
        assert_eq!(g.size(), Some(3125));
        // g1 * g = g * g1 * [g1, g] = g * g1 * g2
        assert_eq!(g.collect(&[(1, 1), (0, 1)]), vec![1, 1, 1, 0]);
        assert_eq!(g.collect(&[(0, 25)]), vec![0, 0, 0, 1]);
        assert_eq!(g.collect(&[]), g.identity());
        assert_eq!(g.nilpotency_class().unwrap(), 3);
        let lcs = g.lower_central_series().unwrap();
        assert_eq!(lcs.len(), 4);
        assert_eq!(g.exponent(), 125);
        let (label, sizes) = g.conjugacy_classes().unwrap();
        assert_eq!(sizes.iter().sum::<u64>(), 3125);
        assert_eq!(sizes[label[0] as usize], 1);
    }

    #[test]
    fn associativity_and_inverses() {
        let g = PcGroup::new(g1p(5)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (x, y, z) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
            assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        }
    }

    #[test]
    fn broken_relation_is_inconsistent() {
        let mut pres = g1p(5);
        pres.set_commutator(2, 0, vec![(1, 1)]);
        assert!(matches!(PcGroup::new(pres), Err(PcError::Inconsistent(_))));
    }

    #[test]
    fn abelian_is_consistent() {
        let pres = PcPresentation::new(5, vec!["a".into(), "b".into()]);
        let g = PcGroup::new(pres).unwrap();
        assert_eq!(g.nilpotency_class().unwrap(), 1);
        assert_eq!(g.center().unwrap().order(), 25);
    }
}
