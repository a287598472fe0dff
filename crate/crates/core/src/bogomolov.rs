//! Schur and Bogomolov multipliers of finite nilpotent Lie rings through the
//! Hopf formula, and CP covers.
//!
//! For `L = F/R` with `F` free nilpotent of class `c+1`:
//!
//! * `M(L) = (R ∩ F²) / [R, F]`,
//! * `M₀(L) = ⟨K(F) ∩ R⟩ / [R, F]`, generated by the wedges `[x̃, ỹ]` of
//!   commuting pairs of `L`,
//! * `B̃0(L) = M(L) / M₀(L)`.
//!
//! Everything above `[R, F]` is computed inside the finite group
//! `F² / [R, F]`, which `[R, F] ⊇ e·F²` (`e` the exponent of `L`) makes
//! small. Truncating the free ring at class `c+1` is harmless: `R` contains
//! `γ_{c+1}`, so `[R, F]` already contains `γ_{c+2}`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{
    AbelianInvariants, FiniteSubgroup, IntegerLattice, LatticeError, ModularLattice, QuotientMap,
};
use crate::freelie::FreeNilpotentLieRing;
use crate::liering::{realize, Element, FiniteLieRing, LieRingError, LieRingPresentation, EXHAUSTIVE_CAP};

/// Commuting-pair scans are refused above this ring order.
pub const SCAN_CAP: u64 = 1_000_000;

/// Coset representatives are processed in blocks of this size; the early-exit
/// test runs between blocks so results do not depend on the thread count.
const SCAN_BLOCK: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiplierError {
    #[error(transparent)]
    Ring(#[from] LieRingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("ring of order {0} exceeds the scan cap")]
    TooLarge(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanStrategy {
    Naive,
    Centralizer,
}

impl std::str::FromStr for ScanStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "naive" => Ok(ScanStrategy::Naive),
            "centralizer" => Ok(ScanStrategy::Centralizer),
            other => Err(format!("unknown strategy '{other}'")),
        }
    }
}

impl std::fmt::Display for ScanStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            ScanStrategy::Naive => "naive",
            ScanStrategy::Centralizer => "centralizer",
        })
    }
}

/// Closure of `relators` under bracketing with `F`, plus `d·F`.
pub fn relator_ideal_mod(
    f: &FreeNilpotentLieRing,
    relators: &[Vec<i64>],
    d: i64,
) -> Result<ModularLattice, LatticeError> {
    let n = f.generators();
    let mut lat = ModularLattice::with_modulus(f.len(), d)?;
    let mut work: Vec<Vec<i64>> = relators.to_vec();
    while let Some(v) = work.pop() {
        if lat.insert(&v) {
            for i in 0..n {
                let mut g = vec![0i64; f.len()];
                g[i] = 1;
                work.push(f.bracket_mod(&v, &g, d));
            }
        }
    }
    lat.canonicalize();
    Ok(lat)
}

/// Exact ideal closure over the integers, without any modulus. Only usable
/// when the closure is small; it exists as an independent check of the
/// modular version.
pub fn relator_ideal(f: &FreeNilpotentLieRing, relators: &[Vec<BigInt>]) -> IntegerLattice {
    use crate::exactlin::hnf;
    use crate::freelie::{Comb, RewriteMode};
    let n = f.len();
    let mut lat = hnf(n, relators);
    loop {
        let mut rows: Vec<Vec<BigInt>> = lat.basis().to_vec();
        for r in lat.basis() {
            let x: Comb<BigInt> = r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.clone())).collect();
            for i in 0..f.generators() {
                let g: Comb<BigInt> = Comb::from([(i, BigInt::from(1))]);
                let b = f.bracket(&x, &g, RewriteMode::Truncate).expect("truncating");
                let mut row = vec![BigInt::from(0); n];
                for (k, v) in b {
                    row[k] = v;
                }
                rows.push(row);
            }
        }
        let next = hnf(n, &rows);
        if next == lat {
            return lat;
        }
        lat = next;
    }
}

/// The free nilpotent ambient ring with the relator lattice of `L`.
#[derive(Clone, Debug)]
pub struct HopfContext {
    free: FreeNilpotentLieRing,
    relators: ModularLattice,
    modulus: i64,
    class: usize,
    quotient: QuotientMap,
    exponent: i64,
    schur: OnceLock<SchurData>,
}

/// `[R,F]`, `R ∩ F²` and the wedge table, all in coordinates on `F²`.
#[derive(Clone, Debug)]
struct SchurData {
    offset: usize,
    modulus: i64,
    commutator: ModularLattice,
    intersection: Vec<Vec<i64>>,
    qm: QuotientMap,
    multiplier: FiniteSubgroup,
    wedge: Vec<Vec<i64>>,
}

impl HopfContext {
    pub(crate) fn new(
        free: FreeNilpotentLieRing,
        relators: ModularLattice,
        modulus: i64,
        class: usize,
        quotient: QuotientMap,
        exponent: i64,
    ) -> Self {
        HopfContext { free, relators, modulus, class, quotient, exponent, schur: OnceLock::new() }
    }

    pub fn free(&self) -> &FreeNilpotentLieRing {
        &self.free
    }

    /// Nilpotency class of `L`; the free ring has class one more.
    pub fn class(&self) -> usize {
        self.class
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn relator_lattice(&self) -> IntegerLattice {
        self.relators.to_integer_lattice()
    }

    /// Lift of the `k`-th basis element of `L` to `F`.
    pub fn section(&self, k: usize) -> &[i64] {
        self.quotient.lift(k)
    }

    /// Image in `L` of a vector of `F`.
    pub fn project(&self, v: &[i64]) -> Element {
        self.quotient.project(v)
    }

    fn rows(&self) -> Vec<Vec<i64>> {
        let mut r = self.relators.clone();
        r.basis().to_vec()
    }

    fn data(&self) -> &SchurData {
        self.schur.get_or_init(|| self.compute_schur())
    }

    fn compute_schur(&self) -> SchurData {
        let f = &self.free;
        let n = f.generators();
        let width = f.len() - n;
        let e = self.exponent;
        let rows = self.rows();
        let mut commutator = ModularLattice::with_modulus(width, e).expect("exponent below modulus");
        for r in &rows {
            for i in 0..n {
                let mut g = vec![0i64; f.len()];
                g[i] = 1;
                let b = f.bracket_mod(r, &g, e);
                commutator.insert(&b[n..]);
            }
        }
        commutator.canonicalize();
        let intersection: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j >= n)
            .map(|(_, r)| r[n..].iter().map(|x| x.rem_euclid(e)).collect())
            .collect();
        let qm = QuotientMap::new(&commutator);
        let images: Vec<Vec<i64>> = intersection.iter().map(|r| qm.project(r)).collect();
        let multiplier = FiniteSubgroup::generated(qm.orders(), &images).expect("orders below modulus");
        let m = self.quotient.rank();
        let mut wedge = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let b = f.bracket_mod(self.section(i), self.section(j), e);
                wedge.push(qm.project(&b[n..]));
            }
        }
        SchurData { offset: n, modulus: e, commutator, intersection, qm, multiplier, wedge }
    }

    /// `M(L)` as an abstract group.
    pub fn schur_multiplier(&self) -> AbelianInvariants {
        self.data().multiplier.invariants()
    }

    pub fn schur_order(&self) -> u64 {
        self.data().multiplier.order()
    }

    /// Coordinates of `x ∧ y` in `F² / [R, F]`.
    pub fn wedge(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let d = self.data();
        let m = self.quotient.rank();
        let orders = d.qm.orders();
        let mut out = vec![0i128; orders.len()];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                if y[j] == 0 || i == j {
                    continue;
                }
                let c = x[i] as i128 * y[j] as i128;
                for (o, &w) in out.iter_mut().zip(&d.wedge[i * m + j]) {
                    *o += c * w as i128;
                }
            }
        }
        out.iter().zip(orders).map(|(a, q)| a.rem_euclid(*q as i128) as i64).collect()
    }

    /// Matrix of `x ↦ x ∧ y`.
    fn wedge_rows(&self, y: &[i64]) -> Vec<Vec<i64>> {
        let m = self.quotient.rank();
        (0..m)
            .map(|i| {
                let mut e = vec![0i64; m];
                e[i] = 1;
                self.wedge(&e, y)
            })
            .collect()
    }

    fn combine(&self, rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        let orders = self.data().qm.orders();
        let mut out = vec![0i128; orders.len()];
        for (c, r) in x.iter().zip(rows) {
            if *c != 0 {
                for (o, w) in out.iter_mut().zip(r) {
                    *o += *c as i128 * *w as i128;
                }
            }
        }
        out.iter().zip(orders).map(|(a, q)| a.rem_euclid(*q as i128) as i64).collect()
    }

    /// Whether a wedge lies in `M(L) = (R∩F²)/[R,F]`.
    pub fn in_multiplier(&self, w: &[i64]) -> bool {
        self.data().multiplier.contains(w)
    }

    /// `M₀(L)` inside `F²/[R,F]` by the requested strategy.
    pub fn m0(&self, ring: &FiniteLieRing, strategy: ScanStrategy) -> Result<M0Scan, MultiplierError> {
        let size = ring.size().filter(|&s| s <= SCAN_CAP).ok_or_else(|| MultiplierError::TooLarge(ring.order().to_string()))?;
        match strategy {
            ScanStrategy::Centralizer => Ok(self.m0_centralizer(ring)),
            ScanStrategy::Naive => {
                if size > 5u64.pow(5) {
                    return Err(MultiplierError::TooLarge(ring.order().to_string()));
                }
                Ok(self.m0_naive(ring))
            }
        }
    }

    fn m0_centralizer(&self, ring: &FiniteLieRing) -> M0Scan {
        let d = self.data();
        let target = d.multiplier.order();
        let mut sub = FiniteSubgroup::trivial(d.qm.orders()).expect("orders below modulus");
        let mut used = 0usize;
        let center = ring.center();
        // central elements commute with everything
        for z in center.generators() {
            let rows = self.wedge_rows(&z);
            for r in &rows {
                used += 1;
                sub.add_generator(r);
            }
        }
        if sub.order() == target {
            return M0Scan { subgroup: sub, wedges_used: used, early_exit: true, strategy: ScanStrategy::Centralizer };
        }
        let reps = center.coset_representatives();
        let mut early_exit = false;
        for block in reps.chunks(SCAN_BLOCK) {
            let found: Vec<Vec<Vec<i64>>> = block
                .par_iter()
                .filter(|y| y.iter().any(|&v| v != 0))
                .map(|y| {
                    let rows = self.wedge_rows(y);
                    ring.centralizer(y).generators().iter().map(|b| self.combine(&rows, b)).collect()
                })
                .collect();
            for ws in found {
                for w in ws {
                    used += 1;
                    sub.add_generator(&w);
                }
            }
            if sub.order() == target {
                early_exit = true;
                break;
            }
        }
        M0Scan { subgroup: sub, wedges_used: used, early_exit, strategy: ScanStrategy::Centralizer }
    }

    fn m0_naive(&self, ring: &FiniteLieRing) -> M0Scan {
        let d = self.data();
        let all: Vec<Element> = ring.elements().expect("size checked").collect();
        let found: Vec<Vec<Vec<i64>>> = all
            .par_iter()
            .map(|x| {
                all.iter()
                    .filter(|y| ring.bracket(x, y).iter().all(|&v| v == 0))
                    .map(|y| self.wedge(x, y))
                    .collect()
            })
            .collect();
        let mut sub = FiniteSubgroup::trivial(d.qm.orders()).expect("orders below modulus");
        let mut used = 0;
        for ws in found {
            for w in ws {
                used += 1;
                sub.add_generator(&w);
            }
        }
        M0Scan { subgroup: sub, wedges_used: used, early_exit: false, strategy: ScanStrategy::Naive }
    }

    /// Lattice in `F` coordinates of the vectors whose class in `F²/[R,F]`
    /// lies in `sub`; contains `[R,F]`.
    fn preimage_rows(&self, sub: &FiniteSubgroup) -> Vec<Vec<i64>> {
        let d = self.data();
        let n = d.offset;
        let width = self.free.len();
        let mut out = Vec::new();
        let embed = |v: &[i64]| {
            let mut r = vec![0i64; width];
            r[n..].copy_from_slice(v);
            r
        };
        let mut c = d.commutator.clone();
        for r in c.basis() {
            out.push(embed(r));
        }
        for j in n..width {
            let mut r = vec![0i64; width];
            r[j] = d.modulus;
            out.push(r);
        }
        for g in sub.generators() {
            out.push(embed(&d.qm.lift_coords(&g)));
        }
        out
    }

    fn lattice_in_f(&self, rows: &[Vec<i64>]) -> IntegerLattice {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        crate::exactlin::hnf(self.free.len(), &big)
    }

    /// `[R, F]` as a sublattice of `F`.
    pub fn commutator_lattice(&self) -> IntegerLattice {
        let d = self.data();
        let trivial = FiniteSubgroup::trivial(d.qm.orders()).expect("orders below modulus");
        self.lattice_in_f(&self.preimage_rows(&trivial))
    }

    /// `R ∩ F²` as a sublattice of `F`.
    pub fn intersection_lattice(&self) -> IntegerLattice {
        let d = self.data();
        let mut rows = self.preimage_rows(&FiniteSubgroup::trivial(d.qm.orders()).unwrap());
        for r in &d.intersection {
            let mut v = vec![0i64; self.free.len()];
            v[d.offset..].copy_from_slice(r);
            rows.push(v);
        }
        self.lattice_in_f(&rows)
    }

    /// The lattice `N` with `N / [R,F] = M₀(L)`.
    pub fn m0_lattice(&self, scan: &M0Scan) -> IntegerLattice {
        self.lattice_in_f(&self.preimage_rows(&scan.subgroup))
    }

    /// Bogomolov multiplier from a finished scan.
    pub fn bogomolov(&self, scan: &M0Scan) -> AbelianInvariants {
        self.data().multiplier.quotient_invariants(&scan.subgroup).expect("M₀ lies in M")
    }
}

/// Result of a commuting-pair scan: `M₀(L)` as a subgroup of `F²/[R,F]`.
#[derive(Clone, Debug)]
pub struct M0Scan {
    pub subgroup: FiniteSubgroup,
    pub wedges_used: usize,
    pub early_exit: bool,
    pub strategy: ScanStrategy,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierReport {
    pub ring_order: String,
    pub ring_class: usize,
    pub schur: AbelianInvariants,
    pub m0_index: u64,
    pub bogomolov: AbelianInvariants,
    pub wedge_generators_used: usize,
    pub scan_strategy: ScanStrategy,
    pub early_exit: bool,
}

/// Multiplier report for an already realized ring.
pub fn multiplier_report(
    ring: &FiniteLieRing,
    ctx: &HopfContext,
    strategy: ScanStrategy,
) -> Result<MultiplierReport, MultiplierError> {
    let scan = ctx.m0(ring, strategy)?;
    Ok(MultiplierReport {
        ring_order: ring.order().to_string(),
        ring_class: ctx.class(),
        schur: ctx.schur_multiplier(),
        m0_index: scan.subgroup.order(),
        bogomolov: ctx.bogomolov(&scan),
        wedge_generators_used: scan.wedges_used,
        scan_strategy: strategy,
        early_exit: scan.early_exit,
    })
}

pub fn bogomolov_multiplier(pres: &LieRingPresentation, strategy: ScanStrategy) -> Result<MultiplierReport, MultiplierError> {
    let r = realize(pres)?;
    multiplier_report(&r.ring, &r.context, strategy)
}

/// A CP cover `C` of `L` with kernel `K` and the projection `C → L`.
#[derive(Clone, Debug)]
pub struct CpCover {
    pub cover: FiniteLieRing,
    pub kernel: Vec<Element>,
    pub kernel_order: u64,
    /// Image in `L` of each basis element of `C`.
    pub projection: Vec<Element>,
    pub report: CpPairReport,
}

/// CP cover `F / Ê`, where `Ê` is `N` plus the relator rows whose pivots lie
/// in degree one. Those rows span a complement to `R ∩ F²` in `R`, so
/// `R / Ê ≅ (R ∩ F²) / N = B̃0(L)`.
pub fn cp_cover_of(ring: &FiniteLieRing, ctx: &HopfContext, strategy: ScanStrategy) -> Result<CpCover, MultiplierError> {
    let scan = ctx.m0(ring, strategy)?;
    let f = ctx.free();
    let n = f.generators();
    let e = ring.exponent();
    let big = e.checked_mul(e).ok_or_else(|| MultiplierError::TooLarge(format!("{e}^2")))?;
    let mut ehat = ModularLattice::with_modulus(f.len(), big)?;
    let rows = ctx.rows();
    for (j, r) in rows.iter().enumerate() {
        if j < n {
            ehat.insert(r);
        }
    }
    for r in ctx.preimage_rows(&scan.subgroup) {
        ehat.insert(&r);
    }
    ehat.canonicalize();
    let qm = QuotientMap::new(&ehat);
    let cover = FiniteLieRing::from_quotient(ring.p(), &qm, |a, b| f.bracket_mod(a, b, big))?;
    let kernel_sub = cover.subgroup(&rows.iter().map(|r| qm.project(r)).collect::<Vec<_>>());
    let kernel = kernel_sub.generators();
    let projection: Vec<Element> = (0..cover.dim()).map(|k| ctx.project(qm.lift(k))).collect();
    let report = verify_cp_pair(&cover, &kernel, ring, Some(&projection))?;
    if !report.is_valid() {
        return Err(MultiplierError::VerificationFailed(report.details.join("; ")));
    }
    let expected = ring.order() * ctx.bogomolov(&scan).torsion_product();
    if cover.order() != expected {
        return Err(MultiplierError::VerificationFailed(format!(
            "|C| = {} but |L|·|B̃0| = {}",
            cover.order(),
            expected
        )));
    }
    Ok(CpCover { cover, kernel_order: kernel_sub.order(), kernel, projection, report })
}

pub fn cp_cover(pres: &LieRingPresentation, strategy: ScanStrategy) -> Result<CpCover, MultiplierError> {
    let r = realize(pres)?;
    cp_cover_of(&r.ring, &r.context, strategy)
}

/// The three conditions of a CP defining pair, checked independently.
#[derive(Clone, Debug, Serialize)]
pub struct CpPairReport {
    /// `C / K ≅ L`.
    pub quotient_matches: bool,
    /// `K ⊆ Z(C) ∩ C²`.
    pub kernel_central_derived: bool,
    /// `K ∩ K(C) = 0`.
    pub kernel_avoids_commutators: bool,
    pub details: Vec<String>,
}

impl CpPairReport {
    pub fn is_valid(&self) -> bool {
        self.quotient_matches && self.kernel_central_derived && self.kernel_avoids_commutators
    }
}

pub fn verify_cp_pair(
    c: &FiniteLieRing,
    kernel: &[Element],
    l: &FiniteLieRing,
    projection: Option<&[Element]>,
) -> Result<CpPairReport, MultiplierError> {
    c.size().filter(|&s| s <= EXHAUSTIVE_CAP).ok_or_else(|| MultiplierError::TooLarge(c.order().to_string()))?;
    let k = c.subgroup(kernel);
    let mut details = Vec::new();

    let quotient_matches = match projection {
        Some(proj) => check_projection(c, &k, l, proj, &mut details),
        None => {
            if !c.is_ideal(&k) {
                details.push("kernel is not an ideal".into());
                false
            } else {
                let q = c.quotient(&k)?;
                let (a, b) = (q.invariant_summary(), l.invariant_summary());
                if a != b {
                    details.push(format!("C/K invariants {a:?} differ from L invariants {b:?}"));
                }
                a == b
            }
        }
    };

    let center = c.center();
    let derived = c.derived_subring();
    let kernel_central_derived = k.is_subgroup_of(&center) && k.is_subgroup_of(&derived);
    if !k.is_subgroup_of(&center) {
        details.push("K is not central".into());
    }
    if !k.is_subgroup_of(&derived) {
        details.push("K is not inside C²".into());
    }

    // ad_x only depends on x modulo Z(C)
    let korder = k.order();
    let mut kernel_avoids_commutators = true;
    for x in center.coset_representatives() {
        let im = c.ad_image(&x);
        if im.sum(&k).order() != im.order() * korder {
            details.push(format!("K meets the image of ad_({})", c.format_element(&x)));
            kernel_avoids_commutators = false;
            break;
        }
    }
    Ok(CpPairReport { quotient_matches, kernel_central_derived, kernel_avoids_commutators, details })
}

fn check_projection(
    c: &FiniteLieRing,
    k: &FiniteSubgroup,
    l: &FiniteLieRing,
    proj: &[Element],
    details: &mut Vec<String>,
) -> bool {
    if proj.len() != c.dim() || proj.iter().any(|v| v.len() != l.dim()) {
        details.push("projection has the wrong shape".into());
        return false;
    }
    let apply = |x: &[i64]| {
        let mut out = l.zero();
        for (a, img) in x.iter().zip(proj) {
            if *a != 0 {
                out = l.add(&out, &l.scale(*a, img));
            }
        }
        out
    };
    for i in 0..c.dim() {
        if l.scale(c.orders()[i], &proj[i]).iter().any(|&v| v != 0) {
            details.push(format!("projection ignores the order of b{}", i + 1));
            return false;
        }
        for j in 0..c.dim() {
            if apply(c.bracket_basis(i, j)) != l.bracket(&proj[i], &proj[j]) {
                details.push(format!("projection is not a homomorphism on b{}, b{}", i + 1, j + 1));
                return false;
            }
        }
    }
    if l.subgroup(proj).order() != l.size().unwrap_or(0) {
        details.push("projection is not onto".into());
        return false;
    }
    let ker = FiniteSubgroup::kernel(proj, c.orders(), l.orders()).expect("orders below modulus");
    if ker != *k && !(k.is_subgroup_of(&ker) && ker.is_subgroup_of(k)) {
        details.push(format!("kernel of the projection has order {}, K has order {}", ker.order(), k.order()));
        return false;
    }
    true
}

/// Multiplier by a direct Hopf computation over the integers, with no
/// modular shortcuts and no reuse of the pipeline's lattices. Only suitable
/// for tiny rings; used to cross-check.
pub fn schur_multiplier_bruteforce(pres: &LieRingPresentation) -> Result<AbelianInvariants, MultiplierError> {
    use crate::exactlin::{lattice_intersect, quotient_invariants, to_big_rows};
    use crate::freelie::{CoefficientRing, RewriteMode};
    let r = realize(pres)?;
    let c = r.context.class();
    let f = FreeNilpotentLieRing::new(pres.generators.len(), c + 1, CoefficientRing::Integers)
        .map_err(LieRingError::from)?;
    let n = f.len();
    let mut rels = Vec::new();
    for rel in &pres.relators {
        let comb = f.rewrite(rel, RewriteMode::Truncate).map_err(LieRingError::from)?;
        let mut row = vec![BigInt::from(0); n];
        for (k, v) in comb {
            assert!(v.is_integer(), "brute-force oracle takes integral relators");
            row[k] = v.to_integer();
        }
        rels.push(row);
    }
    let rl = relator_ideal(&f, &rels);
    let g = f.generators();
    let f2 = IntegerLattice::from_generators(
        n,
        &to_big_rows(&(g..n).map(|j| (0..n).map(|k| i64::from(k == j)).collect()).collect::<Vec<_>>()),
    )?;
    let inter = lattice_intersect(&rl, &f2)?;
    let mut rf_rows = Vec::new();
    for rrow in rl.basis() {
        for j in 0..n {
            let x: crate::freelie::Comb<BigInt> =
                rrow.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.clone())).collect();
            let y = crate::freelie::Comb::from([(j, BigInt::from(1))]);
            let b = f.bracket(&x, &y, RewriteMode::Truncate).expect("truncating");
            let mut row = vec![BigInt::from(0); n];
            for (k, v) in b {
                row[k] = v;
            }
            rf_rows.push(row);
        }
    }
    let rf = crate::exactlin::hnf(n, &rf_rows);
    Ok(quotient_invariants(&inter, &rf)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::LieExpr;
    use num_rational::BigRational;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn abelian(p: i64, k: usize) -> LieRingPresentation {
        let names = (1..=k).map(|i| format!("v{i}")).collect();
        let mut pres = LieRingPresentation::new(p as u64, names);
        for i in 0..k {
            pres.add_relator(LieExpr::scale(q(p), LieExpr::gen(i)));
            for j in i + 1..k {
                pres.add_relator(LieExpr::bracket(LieExpr::gen(i), LieExpr::gen(j)));
            }
        }
        pres
    }

    fn heisenberg() -> LieRingPresentation {
        let mut pres = LieRingPresentation::new(5, vec!["x".into(), "y".into(), "z".into()]);
        for i in 0..3 {
            pres.add_relator(LieExpr::scale(q(5), LieExpr::gen(i)));
        }
        pres.add_relator(LieExpr::sub(LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(1)), LieExpr::gen(2)));
        pres.add_relator(LieExpr::bracket(LieExpr::gen(0), LieExpr::gen(2)));
        pres.add_relator(LieExpr::bracket(LieExpr::gen(1), LieExpr::gen(2)));
        pres
    }

    fn torsion(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn schur_examples() {
        let r = realize(&abelian(5, 2)).unwrap();
        assert_eq!(r.context.schur_multiplier().torsion(), torsion(&[5]).as_slice());
        let r = realize(&heisenberg()).unwrap();
        assert_eq!(r.context.schur_multiplier().torsion(), torsion(&[5, 5]).as_slice());
        let r = realize(&abelian(5, 1)).unwrap();
        assert!(r.context.schur_multiplier().is_trivial());
    }

    #[test]
    fn schur_matches_bruteforce() {
        for pres in [abelian(5, 2), heisenberg(), abelian(5, 3)] {
            let r = realize(&pres).unwrap();
            assert_eq!(r.context.schur_multiplier(), schur_multiplier_bruteforce(&pres).unwrap());
        }
    }

    #[test]
    fn lattice_chain() {
        let r = realize(&heisenberg()).unwrap();
        let ctx = &r.context;
        let scan = ctx.m0(&r.ring, ScanStrategy::Centralizer).unwrap();
        let rf = ctx.commutator_lattice();
        let n = ctx.m0_lattice(&scan);
        let inter = ctx.intersection_lattice();
        let rl = ctx.relator_lattice();
        assert!(n.contains_lattice(&rf));
        assert!(inter.contains_lattice(&n));
        assert!(rl.contains_lattice(&inter));
        assert_eq!(
            crate::exactlin::quotient_invariants(&inter, &rf).unwrap(),
            ctx.schur_multiplier()
        );
    }

    #[test]
    fn strategies_agree_and_wedge_is_alternating() {
        for pres in [abelian(5, 2), heisenberg()] {
            let r = realize(&pres).unwrap();
            let a = r.context.m0(&r.ring, ScanStrategy::Centralizer).unwrap();
            let b = r.context.m0(&r.ring, ScanStrategy::Naive).unwrap();
            assert!(a.subgroup.is_subgroup_of(&b.subgroup) && b.subgroup.is_subgroup_of(&a.subgroup));
            assert!(r.context.bogomolov(&a).is_trivial());
            for x in r.ring.elements().unwrap().take(40) {
                assert!(r.context.wedge(&x, &x).iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn heisenberg_wedge_xz_is_in_multiplier() {
        let r = realize(&heisenberg()).unwrap();
        let imgs = r.ring.generator_images().unwrap();
        let w = r.context.wedge(&imgs[0].1, &imgs[2].1);
        assert!(w.iter().any(|&v| v != 0));
        assert!(r.context.in_multiplier(&w));
    }

    #[test]
    fn covers_of_small_rings() {
        for pres in [abelian(5, 2), heisenberg()] {
            let r = realize(&pres).unwrap();
            let cov = cp_cover_of(&r.ring, &r.context, ScanStrategy::Centralizer).unwrap();
            assert_eq!(cov.cover.order(), r.ring.order());
            assert_eq!(cov.kernel_order, 1);
        }
    }

    #[test]
    fn heisenberg_over_abelian_is_not_cp() {
        let h = realize(&heisenberg()).unwrap().ring;
        let a = realize(&abelian(5, 2)).unwrap().ring;
        let z = h.center().generators();
        let rep = verify_cp_pair(&h, &z, &a, None).unwrap();
        assert!(rep.quotient_matches);
        assert!(rep.kernel_central_derived);
        assert!(!rep.kernel_avoids_commutators);
    }
}
