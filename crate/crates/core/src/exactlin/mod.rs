//! Exact integer matrix and lattice algebra.
//!
//! Lattices are stored by rows in row Hermite normal form: every row has a
//! positive pivot, pivots move strictly right, and entries above a pivot are
//! reduced into `[0, pivot)`. That form is unique, so two lattices are equal
//! exactly when their bases are equal.
//!
//! The [`IntegerLattice`] family works over arbitrary-precision integers and
//! handles lattices of any rank. [`ModularLattice`] is the word-size kernel
//! used on the hot paths: it only represents full-rank lattices that contain
//! `D * Z^m` for a known modulus `D`, which lets every entry stay below `D`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

mod modular;
mod smith;

pub use modular::{FiniteSubgroup, ModularLattice, QuotientMap};
pub use smith::{smith_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("ambient rank mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("not a sublattice")]
    NotSublattice,
    #[error("row has length {got}, expected {expected}")]
    RowLength { expected: usize, got: usize },
    #[error("modulus {0} does not fit word-size lattice arithmetic")]
    ModulusTooLarge(String),
    #[error("moduli must be positive")]
    NonPositiveModulus,
}

/// Extended gcd normalised so that the gcd is non-negative.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn to_big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// A sublattice of `Z^r` in canonical row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn zero(ambient_rank: usize) -> Self {
        IntegerLattice { ambient_rank, basis: Vec::new() }
    }

    /// The whole of `Z^r`.
    pub fn standard(ambient_rank: usize) -> Self {
        let basis = (0..ambient_rank)
            .map(|i| {
                (0..ambient_rank)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntegerLattice { ambient_rank, basis }
    }

    pub fn from_generators(ambient_rank: usize, rows: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        for r in rows {
            if r.len() != ambient_rank {
                return Err(LatticeError::RowLength { expected: ambient_rank, got: r.len() });
            }
        }
        Ok(hnf(ambient_rank, rows))
    }

    pub fn from_i64(ambient_rank: usize, rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_generators(ambient_rank, &to_big_rows(rows))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.ambient_rank
    }

    /// Column index of the pivot of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in basis"))
            .collect()
    }

    /// Index `[Z^r : self]` for a full-rank lattice.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.basis.iter().enumerate().map(|(i, r)| r[i].clone()).product())
    }

    /// Reduces `v` against the basis; the result is zero exactly when `v`
    /// lies in the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (row, piv) in self.basis.iter().zip(self.pivots()) {
            let h = &row[piv];
            let q = v[piv].div_floor(h);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row).skip(piv) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_rank && self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        self.ambient_rank == other.ambient_rank && other.basis.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in terms of the basis rows. `v` must lie in the
    /// lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (row, piv) in self.basis.iter().zip(self.pivots()) {
            let (q, r) = v[piv].div_rem(&row[piv]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in v.iter_mut().zip(row).skip(piv) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        if v.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }
}

impl fmt::Display for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        write!(f, "]")
    }
}

/// Inserts `v` into an echelon basis indexed by pivot column.
fn echelon_insert(rows: &mut [Option<Vec<BigInt>>], mut v: Vec<BigInt>) {
    let n = v.len();
    let mut j = 0;
    loop {
        while j < n && v[j].is_zero() {
            j += 1;
        }
        if j == n {
            return;
        }
        match rows[j].take() {
            None => {
                if v[j].is_negative() {
                    for x in v.iter_mut() {
                        *x = -&*x;
                    }
                }
                rows[j] = Some(v);
                return;
            }
            Some(r) => {
                let (g, a, b) = ext_gcd(&r[j], &v[j]);
                let rj = &r[j] / &g;
                let vj = &v[j] / &g;
                let mut nr = Vec::with_capacity(n);
                let mut nv = Vec::with_capacity(n);
                for k in 0..n {
                    if k < j {
                        nr.push(BigInt::zero());
                        nv.push(BigInt::zero());
                    } else {
                        nr.push(&a * &r[k] + &b * &v[k]);
                        nv.push(&rj * &v[k] - &vj * &r[k]);
                    }
                }
                rows[j] = Some(nr);
                v = nv;
                j += 1;
            }
        }
    }
}

/// Canonical row Hermite normal form of the row span of `rows`.
pub fn hnf(ncols: usize, rows: &[Vec<BigInt>]) -> IntegerLattice {
    let mut slots: Vec<Option<Vec<BigInt>>> = vec![None; ncols];
    for r in rows {
        assert_eq!(r.len(), ncols, "row length mismatch");
        echelon_insert(&mut slots, r.clone());
    }
    let mut basis: Vec<(usize, Vec<BigInt>)> = slots
        .into_iter()
        .enumerate()
        .filter_map(|(j, r)| r.map(|r| (j, r)))
        .collect();
    // reduce entries above each pivot, left to right
    for t in 0..basis.len() {
        let (pj, prow) = (basis[t].0, basis[t].1.clone());
        let h = &prow[pj];
        for (_, row) in basis.iter_mut().take(t) {
            let q = row[pj].div_floor(h);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&prow).skip(pj) {
                    *x -= &q * y;
                }
            }
        }
    }
    IntegerLattice { ambient_rank: ncols, basis: basis.into_iter().map(|(_, r)| r).collect() }
}

/// Invariants of a finite(ly generated) abelian group: torsion coefficients
/// `d_1 | d_2 | ...` (all `> 1`) plus a free rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds invariants from any list of cyclic orders, normalising them into
    /// an invariant factor chain. Orders `0` count towards the free rank.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I, free_rank: usize) -> Self {
        let orders: Vec<BigInt> = orders.into_iter().collect();
        let n = orders.len();
        let rows: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = d.clone();
                r
            })
            .collect();
        let mut inv = snf(n, &rows);
        inv.free_rank += free_rank;
        inv
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_product())
    }

    pub fn torsion_product(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// True when the torsion list is an invariant factor chain.
    pub fn is_divisibility_chain(&self) -> bool {
        self.torsion.iter().all(|d| d > &BigInt::one())
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|d| match d.to_u64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("AbelianInvariants", 2)?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.end()
    }
}

/// Invariant factors of the cokernel `Z^ncols / rowspan(rows)`.
pub fn snf(ncols: usize, rows: &[Vec<BigInt>]) -> AbelianInvariants {
    let sf = smith::smith_diagonal(ncols, rows);
    let rank = sf.len();
    let torsion = sf.into_iter().filter(|d| !d.is_one()).collect();
    AbelianInvariants { torsion, free_rank: ncols - rank }
}

pub fn lattice_sum(a: &IntegerLattice, b: &IntegerLattice) -> Result<IntegerLattice, LatticeError> {
    if a.ambient_rank != b.ambient_rank {
        return Err(LatticeError::AmbientMismatch(a.ambient_rank, b.ambient_rank));
    }
    let rows: Vec<Vec<BigInt>> = a.basis.iter().chain(&b.basis).cloned().collect();
    Ok(hnf(a.ambient_rank, &rows))
}

/// Intersection via the kernel of the stacked basis: a row combination
/// `u*A - w*B = 0` gives the common vector `u*A`.
pub fn lattice_intersect(a: &IntegerLattice, b: &IntegerLattice) -> Result<IntegerLattice, LatticeError> {
    if a.ambient_rank != b.ambient_rank {
        return Err(LatticeError::AmbientMismatch(a.ambient_rank, b.ambient_rank));
    }
    let m = a.ambient_rank;
    let (ra, rb) = (a.rank(), b.rank());
    let width = m + ra + rb;
    let mut rows = Vec::with_capacity(ra + rb);
    for (i, r) in a.basis.iter().chain(&b.basis).enumerate() {
        let mut row = vec![BigInt::zero(); width];
        row[..m].clone_from_slice(r);
        row[m + i] = BigInt::one();
        rows.push(row);
    }
    let h = hnf(width, &rows);
    let mut gens = Vec::new();
    for (row, piv) in h.basis.iter().zip(h.pivots()) {
        if piv < m {
            continue;
        }
        let mut v = vec![BigInt::zero(); m];
        for (k, coeff) in row[m..m + ra].iter().enumerate() {
            if !coeff.is_zero() {
                for (x, y) in v.iter_mut().zip(&a.basis[k]) {
                    *x += coeff * y;
                }
            }
        }
        gens.push(v);
    }
    Ok(hnf(m, &gens))
}

/// Invariants of `a / b` for `b ⊆ a`.
pub fn quotient_invariants(a: &IntegerLattice, b: &IntegerLattice) -> Result<AbelianInvariants, LatticeError> {
    if a.ambient_rank != b.ambient_rank {
        return Err(LatticeError::AmbientMismatch(a.ambient_rank, b.ambient_rank));
    }
    let mut coords = Vec::with_capacity(b.rank());
    for r in &b.basis {
        coords.push(a.coordinates(r).ok_or(LatticeError::NotSublattice)?);
    }
    Ok(snf(a.rank(), &coords))
}

/// Generators of `{x : x*map ≡ 0 (mod target_moduli)}` inside
/// `⊕ Z/source_moduli`. Rows of `map` are images of the source basis.
pub fn solve_hom(map: &[Vec<BigInt>], source_moduli: &[BigInt], target_moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let a = source_moduli.len();
    let b = target_moduli.len();
    assert_eq!(map.len(), a, "one map row per source coordinate");
    let width = b + a;
    let mut rows = Vec::with_capacity(a + b);
    for (i, r) in map.iter().enumerate() {
        assert_eq!(r.len(), b);
        let mut row = vec![BigInt::zero(); width];
        row[..b].clone_from_slice(r);
        row[b + i] = BigInt::one();
        rows.push(row);
    }
    for (j, t) in target_moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); width];
        row[j] = t.clone();
        rows.push(row);
    }
    let h = hnf(width, &rows);
    let mut gens = Vec::new();
    for (row, piv) in h.basis.iter().zip(h.pivots()) {
        if piv < b {
            continue;
        }
        let v: Vec<BigInt> = row[b..]
            .iter()
            .zip(source_moduli)
            .map(|(x, q)| x.mod_floor(q))
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            gens.push(v);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn inv(t: &[i64], free: usize) -> AbelianInvariants {
        AbelianInvariants { torsion: t.iter().map(|&x| BigInt::from(x)).collect(), free_rank: free }
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(2, &big(&[&[1, 0], &[0, 1]])).basis(), big(&[&[1, 0], &[0, 1]]).as_slice());
        // hand reduction: (2,4),(6,8) -> (2,4),(0,-4) -> (2,0),(0,4)
        assert_eq!(hnf(2, &big(&[&[2, 4], &[6, 8]])).basis(), big(&[&[2, 0], &[0, 4]]).as_slice());
        let z = hnf(2, &big(&[&[0, 0]]));
        assert!(z.is_zero());
        assert_eq!(z.ambient_rank(), 2);
    }

    #[test]
    fn hnf_idempotent_and_permutation_invariant() {
        let rows = big(&[&[3, 5, 7], &[2, -4, 6], &[0, 9, 12], &[6, 6, 6]]);
        let h = hnf(3, &rows);
        assert_eq!(hnf(3, h.basis()), h);
        let mut rev = rows.clone();
        rev.reverse();
        assert_eq!(hnf(3, &rev), h);
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(3, &big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), AbelianInvariants::trivial());
        assert_eq!(snf(2, &big(&[&[2, 0], &[0, 4]])), inv(&[2, 4], 0));
        assert_eq!(snf(2, &[]), inv(&[], 2));
        // Z/2 x Z/3 normalises to Z/6
        assert_eq!(snf(2, &big(&[&[2, 0], &[0, 3]])), inv(&[6], 0));
    }

    #[test]
    fn sum_and_intersection() {
        let a = IntegerLattice::from_i64(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let b = IntegerLattice::from_i64(2, &[vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(lattice_sum(&a, &b).unwrap(), IntegerLattice::standard(2));
        assert_eq!(
            lattice_intersect(&a, &b).unwrap(),
            IntegerLattice::from_i64(2, &[vec![6, 0], vec![0, 6]]).unwrap()
        );
        let c = IntegerLattice::from_i64(2, &[vec![4, 2]]).unwrap();
        assert_eq!(lattice_intersect(&c, &a).unwrap(), c);
        assert_eq!(lattice_sum(&c, &a).unwrap(), a);
        let z = IntegerLattice::zero(2);
        assert_eq!(lattice_sum(&z, &b).unwrap(), b);
        assert!(lattice_intersect(&z, &b).unwrap().is_zero());
        assert!(matches!(
            lattice_sum(&z, &IntegerLattice::zero(3)),
            Err(LatticeError::AmbientMismatch(2, 3))
        ));
    }

    #[test]
    fn quotient_examples() {
        let z2 = IntegerLattice::standard(2);
        let two = IntegerLattice::from_i64(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let d = IntegerLattice::from_i64(2, &[vec![2, 0], vec![0, 4]]).unwrap();
        assert_eq!(quotient_invariants(&z2, &two).unwrap(), inv(&[2, 2], 0));
        assert_eq!(quotient_invariants(&z2, &d).unwrap(), inv(&[2, 4], 0));
        assert_eq!(quotient_invariants(&d, &d).unwrap(), AbelianInvariants::trivial());
        let three = IntegerLattice::from_i64(2, &[vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(quotient_invariants(&two, &three), Err(LatticeError::NotSublattice));
        // partial rank: Z^2 / <(1,0)> is Z
        let line = IntegerLattice::from_i64(2, &[vec![1, 0]]).unwrap();
        assert_eq!(quotient_invariants(&z2, &line).unwrap(), inv(&[], 1));
    }

    #[test]
    fn solve_hom_examples() {
        let five = vec![BigInt::from(5); 2];
        let zero = big(&[&[0, 0], &[0, 0]]);
        assert_eq!(solve_hom(&zero, &five, &five).len(), 2);
        let id = big(&[&[1, 0], &[0, 1]]);
        assert!(solve_hom(&id, &five, &five).is_empty());
    }

    #[test]
    fn display_invariants() {
        assert_eq!(inv(&[5, 25], 0).to_string(), "Z/5 x Z/25");
        assert_eq!(AbelianInvariants::trivial().to_string(), "0");
        assert_eq!(serde_json::to_string(&inv(&[5], 0)).unwrap(), r#"{"torsion":[5],"free_rank":0}"#);
    }
}
