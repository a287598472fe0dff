//! The Lazard correspondence between finite p-groups and p-Lie rings of
//! class below `p`, plus the checks that the two structures agree.
//!
//! Both directions produce a [`Correspondence`]: a pc-presented group, a Lie
//! ring, and the bijection between their underlying sets.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bch::{inverse_words, BchError, BchGroup, CompiledWord, GroupOracle};
use crate::bogomolov::{bogomolov_multiplier, MultiplierError, MultiplierReport, ScanStrategy};
use crate::exactlin::{AbelianInvariants, FiniteSubgroup, ModularLattice, QuotientMap};
use crate::liering::{Element, FiniteLieRing, LieRingError};
use crate::pcgroup::{GroupElement, PcError, PcGroup, PcPresentation, Word, GROUP_SCAN_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LazardError {
    #[error("class {class} is not below p = {p}")]
    ClassTooLarge { class: usize, p: u64 },
    #[error(transparent)]
    Bch(#[from] BchError),
    #[error(transparent)]
    Ring(#[from] LieRingError),
    #[error(transparent)]
    Group(#[from] PcError),
    #[error(transparent)]
    Multiplier(#[from] MultiplierError),
    #[error("order {0} exceeds the scan cap")]
    TooLarge(String),
    #[error("underlying sets do not match: {0}")]
    Mismatch(String),
    #[error("correspondence check failed: {0}")]
    CorrespondenceFailed(String),
}

/// Relations of a Lie ring in terms of the images `v_i` of pc generators.
/// Coefficient vectors are over the `v_i`, reduced into `[0, q_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRelations {
    pub names: Vec<String>,
    pub relative_orders: Vec<i64>,
    /// `q_i v_i` in terms of later generators.
    pub powers: Vec<Vec<i64>>,
    /// `[v_j, v_i]` for `j > i`.
    pub brackets: BTreeMap<(usize, usize), Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Correspondence {
    pub group: PcGroup,
    pub ring: FiniteLieRing,
    group_to_ring: Vec<u64>,
    ring_to_group: Vec<u64>,
    /// Present when the ring was built from a normal pc series.
    pub relations: Option<GeneratorRelations>,
}

impl Correspondence {
    /// Pairs a group and a ring through `group_to_ring[g] = ring index`.
    pub fn new(group: PcGroup, ring: FiniteLieRing, group_to_ring: Vec<u64>) -> Result<Self, LazardError> {
        let n = group.size().filter(|&n| n <= GROUP_SCAN_CAP).ok_or_else(|| LazardError::TooLarge(group.order().to_string()))?;
        if ring.size() != Some(n) || group_to_ring.len() as u64 != n {
            return Err(LazardError::Mismatch(format!("group order {} and ring order {}", group.order(), ring.order())));
        }
        let mut ring_to_group = vec![u64::MAX; n as usize];
        for (g, &r) in group_to_ring.iter().enumerate() {
            let slot = ring_to_group
                .get_mut(r as usize)
                .ok_or_else(|| LazardError::Mismatch("ring index out of range".into()))?;
            if *slot != u64::MAX {
                return Err(LazardError::Mismatch("map is not injective".into()));
            }
            *slot = g as u64;
        }
        Ok(Correspondence { group, ring, group_to_ring, ring_to_group, relations: None })
    }

    pub fn ring_element(&self, g: &[i64]) -> Element {
        self.ring.element_at(self.group_to_ring[self.group.index_of(g) as usize])
    }

    pub fn group_element(&self, x: &[i64]) -> GroupElement {
        self.group.element_at(self.ring_to_group[self.ring.index_of(x) as usize])
    }

    /// Ring image of the `i`-th pc generator.
    pub fn generator_image(&self, i: usize) -> Element {
        self.ring_element(&self.group.generator(i))
    }

    pub fn group_to_ring_table(&self) -> &[u64] {
        &self.group_to_ring
    }

    fn ring_set_as_group(&self, s: &FiniteSubgroup) -> BTreeSet<u64> {
        s.elements().iter().map(|x| self.ring_to_group[self.ring.index_of(x) as usize]).collect()
    }
}

fn check_class(class: usize, p: u64) -> Result<(), LazardError> {
    if class as u64 >= p {
        return Err(LazardError::ClassTooLarge { class, p });
    }
    Ok(())
}

/// Pc generators `e_1..e_m` of a ring such that `I_k = span(e_k..e_m)` is an
/// ideal with `[L, I_k] ⊆ I_{k+1}` and `|I_k / I_{k+1}| = p`.
fn central_pc_basis(ring: &FiniteLieRing) -> Vec<Element> {
    let p = ring.p() as i64;
    let lcs = ring.lower_central_series();
    let mut out = Vec::new();
    for w in lcs.windows(2) {
        let (mut top, bottom) = (w[0].clone(), &w[1]);
        while top.order() != bottom.order() {
            let scaled: Vec<Element> = top.generators().iter().map(|g| ring.scale(p, g)).collect();
            let next = ring.subgroup(&scaled).sum(bottom);
            let mut cur = next.clone();
            for g in top.generators() {
                if cur.add_generator(&g) {
                    out.push(g);
                }
            }
            top = next;
        }
    }
    out
}

/// The group `(L, *)` with `*` the BCH product, presented on a central pc
/// series of `L`.
pub fn to_group(ring: &FiniteLieRing) -> Result<Correspondence, LazardError> {
    let p = ring.p();
    check_class(ring.nilpotency_class(), p)?;
    let n = ring.size().filter(|&n| n <= GROUP_SCAN_CAP).ok_or_else(|| LazardError::TooLarge(ring.order().to_string()))?;
    let bg = BchGroup::new(ring)?;
    let basis = central_pc_basis(ring);
    let m = basis.len();
    let chain: Vec<FiniteSubgroup> = (0..=m).map(|k| ring.subgroup(&basis[k..])).collect();

    let sift = |mut z: Element| -> Word {
        let mut word = Vec::new();
        for k in 0..m {
            let a = (0..p as i64)
                .find(|&a| chain[k + 1].contains(&ring.sub(&z, &ring.scale(a, &basis[k]))))
                .expect("element lies in the chain term");
            if a != 0 {
                word.push((k, a));
                z = bg.mul(&ring.scale(-a, &basis[k]), &z);
            }
        }
        word
    };

    let names: Vec<String> = (1..=m).map(|i| format!("g{i}")).collect();
    let mut pres = PcPresentation::new(p, names);
    for k in 0..m {
        pres.set_power(k, sift(ring.scale(p as i64, &basis[k])));
        for j in k + 1..m {
            pres.set_commutator(j, k, sift(bg.comm(&basis[j], &basis[k])));
        }
    }
    let group = PcGroup::new(pres)?;
    let table: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = group.element_at(i);
            let mut x = ring.zero();
            for (k, &e) in a.iter().enumerate() {
                if e != 0 {
                    x = bg.mul(&x, &ring.scale(e, &basis[k]));
                }
            }
            ring.index_of(&x)
        })
        .collect();
    Correspondence::new(group, ring.clone(), table)
}

struct LieOps<'a> {
    g: &'a PcGroup,
    add: CompiledWord,
    bracket: CompiledWord,
}

impl LieOps<'_> {
    fn add(&self, x: &[i64], y: &[i64]) -> GroupElement {
        self.add.eval(self.g, &[x.to_vec(), y.to_vec()]).expect("two arguments")
    }

    fn bracket(&self, x: &[i64], y: &[i64]) -> GroupElement {
        self.bracket.eval(self.g, &[x.to_vec(), y.to_vec()]).expect("two arguments")
    }

    /// `sum_i c_i u_i`; integer multiples are group powers.
    fn combine(&self, coeffs: &[i64], gens: &[GroupElement]) -> GroupElement {
        let mut z = self.g.identity();
        for (c, u) in coeffs.iter().zip(gens) {
            if *c != 0 {
                z = self.add(&z, &self.g.pow(u, *c));
            }
        }
        z
    }
}

/// Pc series is normal: every `[g_j, g_i]` lies in `<g_j, ..., g_m>`.
fn is_normal_series(g: &PcGroup) -> bool {
    let m = g.len();
    (0..m).all(|j| (0..j).all(|i| g.comm(&g.generator(j), &g.generator(i))[..j].iter().all(|&a| a == 0)))
}

/// Additive generators, coordinates of every group element over them, and
/// the relations among them.
struct Additive {
    gens: Vec<GroupElement>,
    coords: Vec<Vec<i64>>,
    relations: Vec<Vec<i64>>,
    sifted: bool,
}

/// Along a normal pc series `G_k / G_{k+1}` is cyclic both as a group and
/// additively, so the exponent of `g_k` in the normal form of `z ∈ G_k` is
/// its `v_k` coordinate.
fn sift_additive(ops: &LieOps<'_>, n: u64) -> Additive {
    let g = ops.g;
    let m = g.len();
    let gens: Vec<GroupElement> = (0..m).map(|i| g.generator(i)).collect();
    let sift = |mut z: GroupElement| -> Vec<i64> {
        let mut c = vec![0; m];
        for k in 0..m {
            debug_assert!(z[..k].iter().all(|&a| a == 0));
            let a = z[k];
            if a != 0 {
                c[k] = a;
                z = ops.add(&z, &g.pow(&gens[k], -a));
            }
        }
        c
    };
    let coords: Vec<Vec<i64>> = (0..n).into_par_iter().map(|i| sift(g.element_at(i))).collect();
    let q = g.relative_orders();
    let relations = (0..m)
        .map(|k| {
            let mut row = coords[g.index_of(&g.pow(&gens[k], q[k])) as usize].iter().map(|&a| -a).collect::<Vec<_>>();
            row[k] += q[k];
            row
        })
        .collect();
    Additive { gens, coords, relations, sifted: true }
}

/// Breadth-first additive closure of the pc generators, extended by bracket
/// values while the closure is proper.
fn closure_additive(ops: &LieOps<'_>, n: u64) -> Additive {
    let g = ops.g;
    let mut gens: Vec<GroupElement> = (0..g.len()).map(|i| g.generator(i)).collect();
    loop {
        let r = gens.len();
        let mut coords: Vec<Option<Vec<i64>>> = vec![None; n as usize];
        let mut queue = vec![g.identity()];
        coords[0] = Some(vec![0; r]);
        let mut relations = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            let cx = coords[g.index_of(&x) as usize].clone().expect("visited");
            for (i, u) in gens.iter().enumerate() {
                let y = ops.add(&x, u);
                let k = g.index_of(&y) as usize;
                let mut cy = cx.clone();
                cy[i] += 1;
                match &coords[k] {
                    None => {
                        coords[k] = Some(cy);
                        queue.push(y);
                    }
                    Some(old) => {
                        let rel: Vec<i64> = cy.iter().zip(old).map(|(a, b)| a - b).collect();
                        if rel.iter().any(|&v| v != 0) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }
        if queue.len() as u64 == n {
            let coords = coords.into_iter().map(|c| c.expect("closure is everything")).collect();
            return Additive { gens, coords, relations, sifted: false };
        }
        let reached: Vec<bool> = coords.iter().map(|c| c.is_some()).collect();
        let mut extra = None;
        'search: for a in 0..r {
            for b in 0..r {
                let v = ops.bracket(&gens[a], &gens[b]);
                if !reached[g.index_of(&v) as usize] {
                    extra = Some(v);
                    break 'search;
                }
            }
        }
        // brackets of additive generators span L modulo their additive
        // closure unless that closure is a subring; a subring containing the
        // group generators is everything
        gens.push(extra.expect("bracket values leave the additive closure"));
    }
}

fn exponent_as_i64(e: u64) -> Result<i64, LazardError> {
    i64::try_from(e).ok().filter(|&e| e < (1 << 62)).ok_or_else(|| LazardError::TooLarge(e.to_string()))
}

/// The Lie ring on the underlying set of `G`, with addition and bracket
/// given by inverse BCH words.
pub fn to_lie(group: &PcGroup) -> Result<Correspondence, LazardError> {
    let p = group.p();
    let n = group.size().filter(|&n| n <= GROUP_SCAN_CAP).ok_or_else(|| LazardError::TooLarge(group.order().to_string()))?;
    let class = group.nilpotency_class()?;
    check_class(class, p)?;
    let words = inverse_words(class.max(1))?;
    let e = group.exponent();
    let ops = LieOps { g: group, add: words.add.compile(e, p)?, bracket: words.bracket.compile(e, p)? };

    let additive = if is_normal_series(group) { sift_additive(&ops, n) } else { closure_additive(&ops, n) };
    let r = additive.gens.len();
    let d = exponent_as_i64(e)?;
    let mut lattice = ModularLattice::with_modulus(r, d).map_err(LieRingError::from)?;
    for row in &additive.relations {
        let row: Vec<i64> = row.iter().map(|&a| a.rem_euclid(d)).collect();
        lattice.insert(&row);
    }
    lattice.canonicalize();
    let qm = QuotientMap::new(&lattice);
    if qm.order() != n.into() {
        return Err(LazardError::Mismatch(format!("additive group of order {} for a group of order {n}", qm.order())));
    }
    let k = qm.rank();
    let basis: Vec<GroupElement> = (0..k).map(|t| ops.combine(qm.lift(t), &additive.gens)).collect();
    let coords_of = |x: &GroupElement| qm.project(&additive.coords[group.index_of(x) as usize]);
    let mut table = vec![vec![0i64; k]; k * k];
    for s in 0..k {
        for t in 0..k {
            table[s * k + t] = coords_of(&ops.bracket(&basis[s], &basis[t]));
        }
    }
    let names: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
    let ring = FiniteLieRing::new(p, names, qm.orders().to_vec(), table)?;
    let images: Vec<(String, Element)> = (0..group.len())
        .map(|i| (lie_name(&group.names()[i]), coords_of(&group.generator(i))))
        .collect();
    let ring = ring.with_generator_images(images);
    let map: Vec<u64> = additive.coords.par_iter().map(|c| ring.index_of(&qm.project(c))).collect();
    let mut corr = Correspondence::new(group.clone(), ring, map)?;

    if additive.sifted {
        let m = group.len();
        let q = group.relative_orders();
        let reduce = |c: &[i64]| c.iter().zip(q).map(|(a, q)| a.rem_euclid(*q)).collect::<Vec<_>>();
        let coords = |x: &GroupElement| reduce(&additive.coords[group.index_of(x) as usize]);
        let mut brackets = BTreeMap::new();
        for j in 0..m {
            for i in 0..j {
                brackets.insert((j, i), coords(&ops.bracket(&additive.gens[j], &additive.gens[i])));
            }
        }
        let powers = (0..m).map(|i| coords(&group.pow(&additive.gens[i], q[i]))).collect();
        corr.relations = Some(GeneratorRelations {
            names: group.names().iter().map(|s| lie_name(s)).collect(),
            relative_orders: q.to_vec(),
            powers,
            brackets,
        });
    }
    Ok(corr)
}

/// `g`, `g1`, ... become `v`, `v1`, ...; other names are kept.
pub fn lie_name(name: &str) -> String {
    match name.strip_prefix('g') {
        Some(rest) if rest.chars().all(|c| c.is_ascii_digit()) => format!("v{rest}"),
        _ => name.to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubobjectCheck {
    pub generators: Vec<Vec<i64>>,
    pub order: u64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientCheck {
    pub by: String,
    pub group_quotient_order: u64,
    pub ring_quotient_order: u64,
    pub group_quotient_class: usize,
    pub ring_quotient_class: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub order_match: bool,
    pub class_match: bool,
    pub center_set_match: bool,
    pub derived_set_match: bool,
    pub commuting_preserved: bool,
    pub subobject_checks: Vec<SubobjectCheck>,
    pub quotient_checks: Vec<QuotientCheck>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.order_match
            && self.class_match
            && self.center_set_match
            && self.derived_set_match
            && self.commuting_preserved
            && self.subobject_checks.iter().all(|c| c.passed)
            && self.quotient_checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.order_match, "order"),
            (self.class_match, "class"),
            (self.center_set_match, "center"),
            (self.derived_set_match, "derived subobject"),
            (self.commuting_preserved, "commuting pairs"),
        ] {
            if !ok {
                out.push(name.to_string());
            }
        }
        out.extend(self.subobject_checks.iter().filter(|c| !c.passed).map(|c| format!("subobject {:?}", c.generators)));
        out.extend(self.quotient_checks.iter().filter(|c| !c.passed).map(|c| format!("quotient by {}", c.by)));
        out
    }
}

/// Default generating subsets: the first pc generators and pairs of them.
fn default_subsets(g: &PcGroup) -> Vec<Vec<GroupElement>> {
    let m = g.len();
    let mut out: Vec<Vec<GroupElement>> = (0..m.min(3)).map(|i| vec![g.generator(i)]).collect();
    for i in 0..m.min(3) {
        if i + 1 < m && out.len() < 5 {
            out.push(vec![g.generator(i), g.generator(i + 1)]);
        }
    }
    out.truncate(5);
    out
}

/// Smallest `k` with `γ_{k+1}` inside `sub`, i.e. the class of the quotient.
fn quotient_class(lcs: &[BTreeSet<u64>], sub: &BTreeSet<u64>) -> usize {
    lcs.iter().position(|s| s.is_subset(sub)).unwrap_or(lcs.len())
}

pub fn verify_correspondence(
    corr: &Correspondence,
    subsets: Option<&[Vec<GroupElement>]>,
) -> Result<CorrespondenceReport, LazardError> {
    let (g, l) = (&corr.group, &corr.ring);
    let order_match = g.order() == l.order();
    let group_lcs = g.lower_central_series()?;
    let ring_lcs = l.lower_central_series();
    let class_match = group_lcs.len() == ring_lcs.len();

    let group_set = |s: &crate::pcgroup::Subgroup| -> BTreeSet<u64> { s.elements().iter().map(|x| g.index_of(x)).collect() };
    let zg = group_set(&g.center()?);
    let zl = corr.ring_set_as_group(&l.center());
    let dg = group_set(&g.derived_subgroup()?);
    let dl = corr.ring_set_as_group(&l.derived_subring());

    let subsets = subsets.map(|s| s.to_vec()).unwrap_or_else(|| default_subsets(g));
    let mut subobject_checks = Vec::new();
    for xs in subsets.iter().take(5) {
        let hg = group_set(&g.subgroup(xs)?);
        let images: Vec<Element> = xs.iter().map(|x| corr.ring_element(x)).collect();
        let hl = corr.ring_set_as_group(&l.subring_generated(&images));
        subobject_checks.push(SubobjectCheck { generators: xs.clone(), order: hg.len() as u64, passed: hg == hl });
    }

    let glcs: Vec<BTreeSet<u64>> = group_lcs.iter().map(group_set).collect();
    let llcs: Vec<BTreeSet<u64>> = ring_lcs.iter().map(|s| corr.ring_set_as_group(s)).collect();
    let mut quotient_checks = Vec::new();
    let mut candidates = vec![("center".to_string(), zg.clone(), zl.clone())];
    if glcs.len() >= 3 {
        let c = glcs.len() - 2;
        candidates.push((format!("term {} of the lower central series", c + 1), glcs[c].clone(), llcs[c.min(llcs.len() - 1)].clone()));
    }
    for (by, ng, nl) in candidates {
        let n = g.size().unwrap_or(0);
        quotient_checks.push(QuotientCheck {
            by,
            group_quotient_order: n / ng.len() as u64,
            ring_quotient_order: n / nl.len() as u64,
            group_quotient_class: quotient_class(&glcs, &ng),
            ring_quotient_class: quotient_class(&llcs, &nl),
            passed: ng == nl && quotient_class(&glcs, &ng) == quotient_class(&llcs, &nl),
        });
    }

    Ok(CorrespondenceReport {
        order_match,
        class_match,
        center_set_match: zg == zl,
        derived_set_match: dg == dl,
        commuting_preserved: commuting_preserved(corr)?,
        subobject_checks,
        quotient_checks,
    })
}

/// Up to this group order commuting pairs are compared as sets; beyond it
/// only centralizer orders are compared.
pub const COMMUTING_EXHAUSTIVE: u64 = 3125;

/// `[x,y]_G = 1` exactly when `[x,y]_L = 0`.
///
/// `|C_G(x)| = |G| / |x^G|` comes from the conjugacy classes and is compared
/// with `|C_L(x)|` for every `x`. Up to [`COMMUTING_EXHAUSTIVE`] every element
/// of `C_L(x)` is also checked to commute with `x` in `G`, which together
/// with the orders gives `C_L(x) = C_G(x)` and so covers all pairs.
pub fn commuting_preserved(corr: &Correspondence) -> Result<bool, LazardError> {
    let g = &corr.group;
    let n = g.size().ok_or_else(|| LazardError::TooLarge(g.order().to_string()))?;
    let (label, sizes) = g.conjugacy_classes()?;
    let exhaustive = n <= COMMUTING_EXHAUSTIVE;
    Ok((0..n).into_par_iter().all(|i| {
        let x = g.element_at(i);
        let s = corr.ring.centralizer(&corr.ring_element(&x));
        if s.order() != n / sizes[label[i as usize] as usize] {
            return false;
        }
        !exhaustive || s.elements().iter().all(|y| g.commuting(&x, &corr.group_element(y)))
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupBogomolov {
    pub bogomolov: AbelianInvariants,
    pub multiplier: MultiplierReport,
    pub correspondence: CorrespondenceReport,
    pub method: String,
}

/// `B̃0(G)` as the Bogomolov multiplier of the Lazard ring of `G`, after the
/// correspondence checks pass.
pub fn b0_of_group(group: &PcGroup, strategy: ScanStrategy) -> Result<GroupBogomolov, LazardError> {
    let corr = to_lie(group)?;
    let report = verify_correspondence(&corr, None)?;
    if !report.passed() {
        return Err(LazardError::CorrespondenceFailed(report.failures().join(", ")));
    }
    let multiplier = bogomolov_multiplier(&corr.ring.to_presentation(), strategy)?;
    Ok(GroupBogomolov {
        bogomolov: multiplier.bogomolov.clone(),
        multiplier,
        correspondence: report,
        method: "Bogomolov multiplier of the Lazard-corresponding Lie ring".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub passed: bool,
}

/// Exhaustive up to this ring order, sampled beyond.
pub const ROUNDTRIP_EXHAUSTIVE: u64 = 625;
pub const ROUNDTRIP_SAMPLES: u64 = 10_000;

/// Compares `to_lie(to_group(L))` with `L` operation by operation.
pub fn roundtrip_check(ring: &FiniteLieRing, seed: u64) -> Result<RoundtripReport, LazardError> {
    let there = to_group(ring)?;
    let back = to_lie(&there.group)?;
    let phi = |x: &[i64]| back.ring_element(&there.group_element(x));
    let check = |x: &Element, y: &Element| {
        let (a, b) = (phi(x), phi(y));
        back.ring.add(&a, &b) == phi(&ring.add(x, y)) && back.ring.bracket(&a, &b) == phi(&ring.bracket(x, y))
    };
    let n = ring.size().expect("checked by to_group");
    if n <= ROUNDTRIP_EXHAUSTIVE {
        let elems: Vec<Element> = ring.elements()?.collect();
        let passed = elems.par_iter().all(|x| elems.iter().all(|y| check(x, y)));
        return Ok(RoundtripReport { pairs_checked: n * n, exhaustive: true, passed });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Element, Element)> =
        (0..ROUNDTRIP_SAMPLES).map(|_| (ring.random_element(&mut rng), ring.random_element(&mut rng))).collect();
    let passed = pairs.par_iter().all(|(x, y)| check(x, y));
    Ok(RoundtripReport { pairs_checked: ROUNDTRIP_SAMPLES, exhaustive: false, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::tests::heisenberg;
    use crate::pcgroup::tests::g1p;

    #[test]
    fn heisenberg_to_group() {
        let h = heisenberg(5);
        let c = to_group(&h).unwrap();
        assert_eq!(c.group.size(), Some(125));
        assert_eq!(c.group.nilpotency_class().unwrap(), 2);
        assert_eq!(c.group.exponent(), 5);
        let r = verify_correspondence(&c, None).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert!(matches!(to_group(&heisenberg(2)), Err(LazardError::ClassTooLarge { .. })));
    }

    #[test]
    fn heisenberg_roundtrip() {
        let r = roundtrip_check(&heisenberg(5), 1).unwrap();
        assert!(r.exhaustive && r.passed);
    }

    #[test]
    fn g1p_to_lie_golden() {
        let g = PcGroup::new(g1p(5)).unwrap();
        let c = to_lie(&g).unwrap();
        let l = &c.ring;
        assert_eq!(l.size(), Some(3125));
        assert_eq!(l.nilpotency_class(), 3);
        let v: Vec<Element> = (0..4).map(|i| c.generator_image(i)).collect();
        // [v1,v] = v2 - (1/2) v3, with -1/2 = 2 mod 5
        assert_eq!(l.bracket(&v[1], &v[0]), l.add(&v[2], &l.scale(2, &v[3])));
        assert_eq!(l.bracket(&v[2], &v[0]), v[3]);
        for i in 0..4 {
            assert_eq!(l.additive_order(&v[i]), g.element_order(&g.generator(i)));
        }
        let r = verify_correspondence(&c, None).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn non_normal_series_uses_closure() {
        // Heisenberg with pc sequence x, z, y: [y, x] = z sits before y
        let mut pres = PcPresentation::new(5, vec!["x".into(), "z".into(), "y".into()]);
        pres.set_commutator(2, 0, vec![(1, 1)]);
        let g = PcGroup::new(pres).unwrap();
        assert!(!is_normal_series(&g));
        let c = to_lie(&g).unwrap();
        assert!(c.relations.is_none());
        assert_eq!(c.ring.nilpotency_class(), 2);
        assert!(verify_correspondence(&c, None).unwrap().passed());
    }

    #[test]
    fn perturbed_bracket_breaks_commuting() {
        let c = to_group(&heisenberg(5)).unwrap();
        let flat = FiniteLieRing::new(5, vec!["x".into(), "y".into(), "z".into()], vec![5; 3], vec![vec![0; 3]; 9]).unwrap();
        let bad = Correspondence::new(c.group.clone(), flat, c.group_to_ring_table().to_vec()).unwrap();
        assert!(!commuting_preserved(&bad).unwrap());
        assert!(commuting_preserved(&c).unwrap());
    }
}
