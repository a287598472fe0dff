mod common;

use common::*;
use liemult::bch::{BchGroup, GroupOracle};
use liemult::bogomolov::{cp_cover_of, multiplier_report, ScanStrategy};
use liemult::cli::emit::small_fraction;
use liemult::cli::parse::parse;
use liemult::exactlin::{hnf, lattice_intersect, lattice_sum, snf, IntegerLattice};
use liemult::liering::{realize, Element, FiniteLieRing};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rings() -> Vec<FiniteLieRing> {
    ["heisenberg.lr", "l1p.lr", "l2p.lr", "maxclass5.lr", "z25xz5.lr", "h2.lr"]
        .iter()
        .map(|n| realize_fixture(n, None).ring)
        .collect()
}

fn element(ring: &FiniteLieRing, seed: &[i64]) -> Element {
    ring.reduce(&seed[..ring.dim()])
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1000i64..1000, 6)
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn matrix(cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-12i64..12, cols), 0..5)
}

fn coefficient() -> impl Strategy<Value = String> {
    prop_oneof![
        (1i64..9).prop_map(|n| n.to_string()),
        (1i64..9, 2i64..5).prop_map(|(n, d)| format!("({n}/{d})")),
        Just("p".to_string()),
    ]
}

fn atom(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop::sample::select(vec!["a", "b", "c"]).prop_map(String::from);
    if depth == 0 {
        return leaf.boxed();
    }
    prop_oneof![
        2 => leaf,
        1 => (atom(depth - 1), atom(depth - 1)).prop_map(|(x, y)| format!("[{x},{y}]")),
        1 => (atom(depth - 1), atom(depth - 1), atom(0)).prop_map(|(x, y, z)| format!("[{x},{y},{z}]")),
    ]
    .boxed()
}

fn sum() -> impl Strategy<Value = String> {
    prop::collection::vec((prop::bool::ANY, coefficient(), atom(2)), 1..4).prop_map(|terms| {
        let mut s = String::new();
        for (k, (neg, c, a)) in terms.into_iter().enumerate() {
            let sign = if neg { "-" } else if k > 0 { "+" } else { "" };
            s.push_str(&format!(" {sign} {c}*{a}"));
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_fraction_is_a_congruent_representative(c in -500i64..500, k in 0usize..4) {
        let q = [5i64, 7, 25, 2][k];
        let f = small_fraction(c, q);
        let (a, b) = (f.numer().clone(), f.denom().clone());
        prop_assert!(b == BigInt::from(1) || b == BigInt::from(2));
        prop_assert!((a - BigInt::from(c) * &b).mod_floor(&BigInt::from(q)).is_zero());
        prop_assert!(f.numer().abs() <= BigInt::from(q / 2));
    }

    #[test]
    fn presentations_print_and_reparse(lhs in sum(), rhs in sum(), o in 1u32..3) {
        let text = format!("liering R(p=5) {{\n  gens a, b, c;\n  order a = p^{o};\n  rel {lhs} = {rhs};\n}}\n");
        let f = parse(&text).unwrap();
        let again = parse(&f.to_string()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_string(), f.to_string());
    }

    #[test]
    fn hnf_is_canonical(rows in matrix(4), k in 0usize..5) {
        let a = hnf(4, &big_rows(&rows));
        let mut shuffled = rows.clone();
        if !shuffled.is_empty() {
            let k = k % shuffled.len();
            shuffled.rotate_left(k);
            let extra: Vec<i64> = shuffled.iter().fold(vec![0; 4], |acc, r| acc.iter().zip(r).map(|(x, y)| x + y).collect());
            shuffled.push(extra);
        }
        let b = hnf(4, &big_rows(&shuffled));
        prop_assert_eq!(a.basis(), b.basis());
        for r in big_rows(&rows) {
            prop_assert!(a.contains(&r));
        }
    }

    #[test]
    fn snf_order_is_the_determinant(rows in prop::collection::vec(prop::collection::vec(-9i64..9, 3), 3)) {
        let inv = snf(3, &big_rows(&rows));
        prop_assert!(inv.is_divisibility_chain());
        let lat = IntegerLattice::from_i64(3, &rows).unwrap();
        match lat.determinant() {
            Some(d) if !d.is_zero() => prop_assert_eq!(inv.order(), Some(d.abs())),
            _ => prop_assert!(!inv.is_finite()),
        }
    }

    #[test]
    fn sum_and_intersection_bound_both(a in matrix(3), b in matrix(3)) {
        let la = IntegerLattice::from_i64(3, &a).unwrap();
        let lb = IntegerLattice::from_i64(3, &b).unwrap();
        let s = lattice_sum(&la, &lb).unwrap();
        let i = lattice_intersect(&la, &lb).unwrap();
        prop_assert!(s.contains_lattice(&la) && s.contains_lattice(&lb));
        prop_assert!(la.contains_lattice(&i) && lb.contains_lattice(&i));
        prop_assert!(s.rank() + i.rank() == la.rank() + lb.rank());
    }

    #[test]
    fn corpus_rings_are_lie_rings(x in coords(), y in coords(), z in coords(), k in -30i64..30) {
        for ring in rings() {
            let (x, y, z) = (element(&ring, &x), element(&ring, &y), element(&ring, &z));
            prop_assert!(ring.add(&ring.bracket(&x, &y), &ring.bracket(&y, &x)).iter().all(|&c| c == 0));
            prop_assert!(ring.bracket(&x, &x).iter().all(|&c| c == 0));
            let jacobi = ring.add(
                &ring.add(&ring.bracket(&x, &ring.bracket(&y, &z)), &ring.bracket(&y, &ring.bracket(&z, &x))),
                &ring.bracket(&z, &ring.bracket(&x, &y)),
            );
            prop_assert!(jacobi.iter().all(|&c| c == 0));
            prop_assert_eq!(ring.bracket(&ring.add(&x, &y), &z), ring.add(&ring.bracket(&x, &z), &ring.bracket(&y, &z)));
            prop_assert_eq!(ring.bracket(&ring.scale(k, &x), &y), ring.scale(k, &ring.bracket(&x, &y)));
            prop_assert_eq!(ring.element_at(ring.index_of(&x)), x);
        }
    }

    #[test]
    fn bch_product_is_a_group(x in coords(), y in coords(), z in coords(), n in -12i64..12) {
        for name in ["heisenberg.lr", "l1p.lr", "l2p.lr", "maxclass5.lr"] {
            let ring = realize_fixture(name, None).ring;
            let g = BchGroup::new(&ring).unwrap();
            let (x, y, z) = (element(&ring, &x), element(&ring, &y), element(&ring, &z));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert_eq!(g.mul(&x, &ring.neg(&x)), ring.zero());
            prop_assert_eq!(GroupOracle::pow(&g, &x, n), ring.scale(n, &x));
            let commute = g.mul(&x, &y) == g.mul(&y, &x);
            prop_assert_eq!(commute, ring.bracket(&x, &y).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn collection_is_associative(x in coords(), y in coords(), z in coords(), n in -30i64..30) {
        for name in ["g1p.pc", "g2p.pc", "maxclass5.pc", "heisenberg.pc"] {
            let g = group_fixture(name, None);
            let e = |v: &[i64]| g.collect(&v[..g.len()].iter().copied().enumerate().collect::<Vec<_>>());
            let (x, y, z) = (e(&x), e(&y), e(&z));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
            prop_assert_eq!(g.pow(&x, n + 1), g.mul(&g.pow(&x, n), &x));
            let c = g.mul(&g.mul(&g.mul(&g.inv(&x), &g.inv(&y)), &x), &y);
            prop_assert_eq!(g.comm(&x, &y), c);
        }
    }
}

/// Two-generator rings of order at most `5^6` cut out of the free class-3
/// ring by random relators.
fn small_presentation() -> impl Strategy<Value = String> {
    let rel = prop::collection::vec(0i64..5, 3).prop_map(|c| {
        format!("rel {}[x,y] + {}[x,y,x] + {}[x,y,y] = 0;", c[0], c[1], c[2])
    });
    (prop::collection::vec(rel, 0..3), 1u32..3).prop_map(|(rels, e)| {
        format!(
            "liering S(p=5) {{\n  gens x, y;\n  order x = p^{e};\n  order y = p;\n  rel p[x,y] = 0;\n  {}\n  rel [x,y,x,x] = 0;\n  rel [x,y,x,y] = 0;\n  rel [x,y,y,y] = 0;\n}}\n",
            rels.join("\n  ")
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplier_identities_on_random_rings(text in small_presentation()) {
        let pres = parse(&text).unwrap().to_lie_presentation().unwrap();
        let r = realize(&pres).unwrap();
        let fast = r.context.m0(&r.ring, ScanStrategy::Centralizer).unwrap();
        if r.ring.size().is_some_and(|n| n <= 3125) {
            let naive = r.context.m0(&r.ring, ScanStrategy::Naive).unwrap();
            prop_assert_eq!(&naive.subgroup, &fast.subgroup);
        }
        let m = multiplier_report(&r.ring, &r.context, ScanStrategy::Centralizer).unwrap();
        prop_assert!(m.schur.is_divisibility_chain());
        prop_assert_eq!(m.schur.torsion_product(), BigInt::from(m.m0_index) * m.bogomolov.torsion_product());
        let c = cp_cover_of(&r.ring, &r.context, ScanStrategy::Centralizer).unwrap();
        prop_assert_eq!(c.cover.order(), r.ring.order() * m.bogomolov.torsion_product());
        prop_assert!(c.report.is_valid());
    }
}
