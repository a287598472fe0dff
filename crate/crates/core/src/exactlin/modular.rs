//! Word-size lattices between `D * Z^m` and `Z^m`.
//!
//! A full-rank lattice that contains `diag(moduli)` has an HNF whose entries
//! are all below the lcm `D` of the moduli, so with `D < 2^62` every row
//! operation fits in `i64` with `i128` intermediate products. The lattice and
//! subgroup computations of the multiplier pipeline all live here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{lattice_intersect, quotient_invariants, smith_form, AbelianInvariants, IntegerLattice, LatticeError};

const MAX_MODULUS: i64 = 1 << 62;

#[inline]
fn mulmod(a: i64, b: i64, d: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(d as i128)) as i64
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

/// A full-rank lattice `Λ` with `diag(moduli) ⊆ Λ ⊆ Z^m`, kept in echelon form
/// with one row per column. Row `j` has its pivot at column `j` and entries
/// in `[0, D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularLattice {
    moduli: Vec<i64>,
    modulus: i64,
    rows: Vec<Vec<i64>>,
    canonical: bool,
}

impl ModularLattice {
    /// The lattice `diag(moduli) * Z^m`.
    pub fn new(moduli: Vec<i64>) -> Result<Self, LatticeError> {
        if moduli.iter().any(|&q| q <= 0) {
            return Err(LatticeError::NonPositiveModulus);
        }
        let mut d: i64 = 1;
        for &q in &moduli {
            let l = (d as i128 / d.gcd(&q) as i128) * q as i128;
            if l >= MAX_MODULUS as i128 {
                return Err(LatticeError::ModulusTooLarge(l.to_string()));
            }
            d = l as i64;
        }
        let m = moduli.len();
        let rows = (0..m)
            .map(|j| {
                let mut r = vec![0; m];
                r[j] = moduli[j];
                r
            })
            .collect();
        Ok(ModularLattice { moduli, modulus: d, rows, canonical: true })
    }

    pub fn with_modulus(dim: usize, d: i64) -> Result<Self, LatticeError> {
        Self::new(vec![d; dim])
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// Adds `v` to the lattice. Returns whether the lattice grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim(), "vector length mismatch");
        let d = self.modulus;
        let m = self.dim();
        let mut v: Vec<i64> = v.iter().map(|&x| x.rem_euclid(d)).collect();
        let mut changed = false;
        let mut j = 0;
        loop {
            while j < m && v[j] == 0 {
                j += 1;
            }
            if j == m {
                break;
            }
            let r = &mut self.rows[j];
            let (a, b) = (r[j], v[j]);
            if b % a == 0 {
                let q = b / a;
                for k in j..m {
                    v[k] = (v[k] - mulmod(q, r[k], d)).rem_euclid(d);
                }
            } else {
                changed = true;
                let (g, s, t) = egcd(a, b);
                let (ag, bg) = (a / g, b / g);
                for k in j..m {
                    let (rk, vk) = (r[k], v[k]);
                    r[k] = (mulmod(s, rk, d) + mulmod(t, vk, d)).rem_euclid(d);
                    v[k] = (mulmod(ag, vk, d) - mulmod(bg, rk, d)).rem_euclid(d);
                }
                // pivot is g, which divides D, so it never wraps to 0
                r[j] = g;
                debug_assert_eq!(v[j], 0);
            }
            j += 1;
        }
        if changed {
            self.canonical = false;
        }
        changed
    }

    pub fn insert_all<'a, I: IntoIterator<Item = &'a Vec<i64>>>(&mut self, vs: I) -> bool {
        let mut changed = false;
        for v in vs {
            changed |= self.insert(v);
        }
        changed
    }

    /// Reduces entries above pivots, giving the canonical HNF.
    pub fn canonicalize(&mut self) {
        if self.canonical {
            return;
        }
        let d = self.modulus;
        let m = self.dim();
        for j in 0..m {
            let (done, rest) = self.rows.split_at_mut(j);
            let pr = &rest[0];
            let h = pr[j];
            for r in done.iter_mut() {
                let q = r[j].div_euclid(h);
                if q != 0 {
                    for k in j..m {
                        r[k] = (r[k] - mulmod(q, pr[k], d)).rem_euclid(d);
                    }
                }
                debug_assert!(r[j] < h);
            }
        }
        self.canonical = true;
    }

    /// Canonical HNF rows; entries are reduced into `[0, pivot)` above pivots.
    pub fn basis(&mut self) -> &[Vec<i64>] {
        self.canonicalize();
        &self.rows
    }

    pub fn pivots(&self) -> Vec<i64> {
        (0..self.dim()).map(|j| self.rows[j][j]).collect()
    }

    /// Canonical coset representative: the unique `w ≡ v` with
    /// `0 <= w_j < pivot_j` for all `j`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let d = self.modulus;
        let m = self.dim();
        let mut v: Vec<i64> = v.iter().map(|&x| x.rem_euclid(d)).collect();
        for j in 0..m {
            let r = &self.rows[j];
            let q = v[j].div_euclid(r[j]);
            if q != 0 {
                for k in j..m {
                    v[k] = (v[k] - mulmod(q, r[k], d)).rem_euclid(d);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_lattice(&self, other: &ModularLattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// `[Z^m : Λ]`.
    pub fn index(&self) -> BigInt {
        self.pivots().into_iter().map(BigInt::from).product()
    }

    pub fn is_whole(&self) -> bool {
        self.pivots().iter().all(|&g| g == 1)
    }

    pub fn to_integer_lattice(&self) -> IntegerLattice {
        let mut c = self.clone();
        c.canonicalize();
        let rows: Vec<Vec<BigInt>> =
            c.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        super::hnf(self.dim(), &rows)
    }
}

/// A subgroup of `⊕ Z/q_i`, stored as the lattice of its preimages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubgroup {
    lattice: ModularLattice,
}

impl FiniteSubgroup {
    pub fn trivial(moduli: &[i64]) -> Result<Self, LatticeError> {
        Ok(FiniteSubgroup { lattice: ModularLattice::new(moduli.to_vec())? })
    }

    pub fn whole(moduli: &[i64]) -> Result<Self, LatticeError> {
        let mut lattice = ModularLattice::new(moduli.to_vec())?;
        for j in 0..moduli.len() {
            let mut e = vec![0; moduli.len()];
            e[j] = 1;
            lattice.insert(&e);
        }
        Ok(FiniteSubgroup { lattice })
    }

    pub fn generated(moduli: &[i64], gens: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let mut s = Self::trivial(moduli)?;
        for g in gens {
            s.add_generator(g);
        }
        Ok(s)
    }

    /// Kernel of `x ↦ x * map` from `⊕ Z/source` to `⊕ Z/target`. Row `i` of
    /// `map` is the image of the `i`-th source basis vector.
    pub fn kernel(map: &[Vec<i64>], source: &[i64], target: &[i64]) -> Result<Self, LatticeError> {
        let (a, b) = (source.len(), target.len());
        assert_eq!(map.len(), a, "one map row per source coordinate");
        let moduli: Vec<i64> = target.iter().chain(source).copied().collect();
        let mut lat = ModularLattice::new(moduli)?;
        for (i, r) in map.iter().enumerate() {
            assert_eq!(r.len(), b);
            let mut row = r.clone();
            row.extend((0..a).map(|k| i64::from(k == i)));
            lat.insert(&row);
        }
        let mut sub = Self::trivial(source)?;
        for j in b..a + b {
            let r = &lat.rows[j];
            sub.add_generator(&r[b..]);
        }
        Ok(sub)
    }

    pub fn moduli(&self) -> &[i64] {
        self.lattice.moduli()
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn add_generator(&mut self, x: &[i64]) -> bool {
        self.lattice.insert(x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.lattice.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.lattice.moduli == other.lattice.moduli && other.lattice.contains_lattice(&self.lattice)
    }

    /// Canonical representative of the coset `x + self`.
    pub fn canonical_rep(&self, x: &[i64]) -> Vec<i64> {
        let mut r = self.lattice.reduce(x);
        for (v, q) in r.iter_mut().zip(self.moduli()) {
            *v = v.rem_euclid(*q);
        }
        r
    }

    /// Subgroup order (`u64`; the ambient group is assumed to fit).
    pub fn order(&self) -> u64 {
        self.moduli()
            .iter()
            .zip(self.lattice.pivots())
            .map(|(&q, g)| (q / g) as u64)
            .product()
    }

    /// Index in the ambient group.
    pub fn index(&self) -> u64 {
        self.lattice.pivots().iter().map(|&g| g as u64).product()
    }

    /// Generators in echelon form, reduced modulo the ambient moduli.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let mut lat = self.lattice.clone();
        lat.canonicalize();
        let q = self.moduli().to_vec();
        lat.rows
            .iter()
            .enumerate()
            .filter(|(j, r)| r[*j] < q[*j])
            .map(|(_, r)| r.iter().zip(&q).map(|(x, m)| x.rem_euclid(*m)).collect())
            .collect()
    }

    /// All elements, enumerated in a fixed order. Only sensible for small
    /// subgroups.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let q = self.moduli().to_vec();
        let m = q.len();
        let rows = &self.lattice.rows;
        let counts: Vec<i64> = (0..m).map(|j| q[j] / rows[j][j]).collect();
        let mut out = vec![vec![0i64; m]];
        for j in 0..m {
            if counts[j] == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * counts[j] as usize);
            for base in &out {
                for c in 0..counts[j] {
                    let v: Vec<i64> = (0..m)
                        .map(|k| (base[k] + c * rows[j][k]).rem_euclid(q[k]))
                        .collect();
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// One representative of each coset of `self` in the ambient group.
    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        let piv = self.lattice.pivots();
        let m = piv.len();
        let mut out = vec![vec![0i64; m]];
        for j in 0..m {
            if piv[j] == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * piv[j] as usize);
            for base in &out {
                for c in 0..piv[j] {
                    let mut v = base.clone();
                    v[j] = c;
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn sum(&self, other: &FiniteSubgroup) -> FiniteSubgroup {
        let mut s = self.clone();
        for r in &other.lattice.rows {
            s.lattice.insert(r);
        }
        s
    }

    pub fn lattice(&self) -> &ModularLattice {
        &self.lattice
    }

    fn preimage_lattice(&self) -> IntegerLattice {
        self.lattice.to_integer_lattice()
    }

    /// Invariants of the subgroup as an abstract abelian group.
    pub fn invariants(&self) -> AbelianInvariants {
        let diag = FiniteSubgroup::trivial(self.moduli()).expect("moduli already validated");
        self.quotient_invariants(&diag).expect("trivial subgroup is contained")
    }

    /// Invariants of `self / sub`.
    pub fn quotient_invariants(&self, sub: &FiniteSubgroup) -> Result<AbelianInvariants, LatticeError> {
        if self.moduli() != sub.moduli() {
            return Err(LatticeError::AmbientMismatch(self.dim(), sub.dim()));
        }
        quotient_invariants(&self.preimage_lattice(), &sub.preimage_lattice())
    }

    /// Intersection with another subgroup of the same ambient group.
    pub fn intersect(&self, other: &FiniteSubgroup) -> Result<FiniteSubgroup, LatticeError> {
        if self.moduli() != other.moduli() {
            return Err(LatticeError::AmbientMismatch(self.dim(), other.dim()));
        }
        let l = lattice_intersect(&self.preimage_lattice(), &other.preimage_lattice())?;
        let gens: Vec<Vec<i64>> = l
            .basis()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("entries below modulus")).collect())
            .collect();
        FiniteSubgroup::generated(self.moduli(), &gens)
    }
}

/// Coordinates on the finite quotient `Z^m / Λ`.
///
/// Columns whose pivot is 1 are eliminated first; the quotient is then
/// isomorphic to `Z^S / Λ_S` on the remaining support `S`, which is
/// diagonalised once by Smith normal form.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    dim: usize,
    modulus: i64,
    support: Vec<usize>,
    /// For each eliminated column with a nonzero tail: (column, tail on S).
    reducers: Vec<(usize, Vec<i64>)>,
    /// `s x t` transform into the nontrivial Smith coordinates.
    transform: Vec<Vec<i64>>,
    orders: Vec<i64>,
    lifts: Vec<Vec<i64>>,
}

impl QuotientMap {
    pub fn new(lattice: &ModularLattice) -> Self {
        let mut lat = lattice.clone();
        lat.canonicalize();
        let m = lat.dim();
        let d = lat.modulus();
        let support: Vec<usize> = (0..m).filter(|&j| lat.rows[j][j] != 1).collect();
        let s = support.len();
        let reducers: Vec<(usize, Vec<i64>)> = (0..m)
            .filter(|&j| lat.rows[j][j] == 1)
            .filter_map(|j| {
                let tail: Vec<i64> = support.iter().map(|&k| lat.rows[j][k]).collect();
                tail.iter().any(|&x| x != 0).then_some((j, tail))
            })
            .collect();
        let restricted: Vec<Vec<BigInt>> = support
            .iter()
            .map(|&j| support.iter().map(|&k| BigInt::from(lat.rows[j][k])).collect())
            .collect();
        let sf = smith_form(s, &restricted);
        assert_eq!(sf.diagonal.len(), s, "restricted lattice must be full rank");
        let dbig = BigInt::from(d);
        let red = |x: &BigInt| x.mod_floor(&dbig).to_i64().expect("reduced below modulus");
        let nontrivial: Vec<usize> = (0..s).filter(|&k| !sf.diagonal[k].is_one()).collect();
        let orders = nontrivial.iter().map(|&k| sf.diagonal[k].to_i64().expect("divides modulus")).collect();
        let transform = (0..s)
            .map(|i| nontrivial.iter().map(|&k| red(&sf.right[i][k])).collect())
            .collect();
        let lifts = nontrivial
            .iter()
            .map(|&k| {
                let mut v = vec![0i64; m];
                for (pos, &col) in support.iter().enumerate() {
                    v[col] = red(&sf.right_inverse[k][pos]);
                }
                v
            })
            .collect();
        QuotientMap { dim: m, modulus: d, support, reducers, transform, orders, lifts }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Orders of the cyclic factors, a divisibility chain.
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&x| BigInt::from(x)).product()
    }

    /// Restriction to the support after eliminating unit-pivot columns.
    pub fn restrict(&self, v: &[i64]) -> Vec<i64> {
        let d = self.modulus;
        let mut out: Vec<i64> = self.support.iter().map(|&k| v[k].rem_euclid(d)).collect();
        for (j, tail) in &self.reducers {
            let c = v[*j].rem_euclid(d);
            if c != 0 {
                for (o, t) in out.iter_mut().zip(tail) {
                    *o = (*o - mulmod(c, *t, d)).rem_euclid(d);
                }
            }
        }
        out
    }

    /// Smith coordinates of the class of `v`.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        let r = self.restrict(v);
        self.project_restricted(&r)
    }

    pub fn project_restricted(&self, r: &[i64]) -> Vec<i64> {
        let d = self.modulus;
        let mut out = vec![0i64; self.orders.len()];
        for (i, &x) in r.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = (*o + mulmod(x, self.transform[i][k], d)).rem_euclid(d);
            }
        }
        for (o, &q) in out.iter_mut().zip(&self.orders) {
            *o = o.rem_euclid(q);
        }
        out
    }

    /// A vector of `Z^m` mapping to the `k`-th cyclic generator.
    pub fn lift(&self, k: usize) -> &[i64] {
        &self.lifts[k]
    }

    /// Lifts Smith coordinates back to `Z^m`.
    pub fn lift_coords(&self, coords: &[i64]) -> Vec<i64> {
        let d = self.modulus;
        let mut v = vec![0i64; self.dim];
        for (k, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, l) in v.iter_mut().zip(&self.lifts[k]) {
                *x = (*x + mulmod(c, *l, d)).rem_euclid(d);
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::hnf;

    #[test]
    fn modular_matches_bigint_hnf() {
        let mut lat = ModularLattice::with_modulus(3, 25).unwrap();
        let gens = vec![vec![5, 10, 3], vec![0, 5, 20], vec![15, 7, 1]];
        for g in &gens {
            lat.insert(g);
        }
        let mut all: Vec<Vec<i64>> = gens.clone();
        for j in 0..3 {
            let mut r = vec![0; 3];
            r[j] = 25;
            all.push(r);
        }
        let expected = hnf(3, &crate::exactlin::to_big_rows(&all));
        assert_eq!(lat.to_integer_lattice(), expected);
        let basis: Vec<Vec<i64>> = lat.basis().to_vec();
        let eb: Vec<Vec<i64>> =
            expected.basis().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        assert_eq!(basis, eb);
    }

    #[test]
    fn heisenberg_bracket_kernel() {
        // Heisenberg over Z/5 on x, y, z = [x, y]: ad_x sends y to z and kills x, z.
        let map = vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]];
        let q = [5, 5, 5];
        let k = FiniteSubgroup::kernel(&map, &q, &q).unwrap();
        assert_eq!(k.order(), 25);
        let mut brute = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if b % 5 == 0 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        let mut el = k.elements();
        el.sort();
        brute.sort();
        assert_eq!(el, brute);
    }

    #[test]
    fn quotient_map_coordinates() {
        // Z^3 / <(1,2,0), (0,5,0), (0,0,25)> is Z/5 x Z/25
        let mut lat = ModularLattice::with_modulus(3, 25).unwrap();
        lat.insert(&[1, 2, 0]);
        lat.insert(&[0, 5, 0]);
        let qm = QuotientMap::new(&lat);
        assert_eq!(qm.orders(), &[5, 25]);
        assert!(qm.project(&[1, 2, 0]).iter().all(|&x| x == 0));
        for k in 0..qm.rank() {
            let mut e = vec![0; qm.rank()];
            e[k] = 1;
            assert_eq!(qm.project(qm.lift(k)), e);
        }
        let v = [3, 4, 7];
        let back = qm.lift_coords(&qm.project(&v));
        let diff: Vec<i64> = v.iter().zip(&back).map(|(a, b)| a - b).collect();
        assert!(lat.contains(&diff));
    }

    #[test]
    fn coset_reps_partition() {
        let s = FiniteSubgroup::generated(&[5, 25], &[vec![1, 5]]).unwrap();
        assert_eq!(s.order(), 5);
        let reps = s.coset_representatives();
        assert_eq!(reps.len() as u64 * s.order(), 125);
    }
}
