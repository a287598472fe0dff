//! Presentation files for computed rings and groups.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::parse::{Expr, Kind, LieAtom, LieSum, PcAtom, PcWord, PresentationFile, Statement};
use crate::lazard::GeneratorRelations;
use crate::liering::FiniteLieRing;
use crate::pcgroup::{PcPresentation, Word};

/// The representative `a/b` of `c mod q` with `b ∈ {1, 2}` and smallest
/// `|a|`, preferring `b = 1` on ties. For `q = 5`, `2` becomes `-1/2`.
pub fn small_fraction(c: i64, q: i64) -> BigRational {
    let centered = |x: i64| {
        let x = x.rem_euclid(q);
        if 2 * x > q {
            x - q
        } else {
            x
        }
    };
    let a1 = centered(c);
    if q % 2 == 0 {
        return BigRational::from_integer(a1.into());
    }
    let a2 = centered(2 * c);
    if a2.abs() < a1.abs() {
        BigRational::new(a2.into(), 2.into())
    } else {
        BigRational::from_integer(a1.into())
    }
}

fn gen_atom(name: &str) -> LieAtom {
    LieAtom::Gen(name.to_string())
}

fn bracket_atom(a: &str, b: &str) -> LieAtom {
    let one = |n: &str| LieSum(vec![(BigRational::from_integer(1.into()), gen_atom(n))]);
    LieAtom::Bracket(vec![one(a), one(b)])
}

/// Coordinates as a sum; `exact[k]` says whether `coords[k]` is a residue
/// modulo `orders[k]` that may be rewritten as a small fraction.
fn coords_sum(coords: &[i64], names: &[String], orders: &[i64], exact: &[bool]) -> LieSum {
    LieSum(
        coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, &c)| {
                let coeff = if exact[k] { small_fraction(c, orders[k]) } else { BigRational::from_integer(c.into()) };
                (coeff, gen_atom(&names[k]))
            })
            .collect(),
    )
}

fn negated(s: &LieSum) -> LieSum {
    LieSum(s.0.iter().map(|(c, a)| (-c.clone(), a.clone())).collect())
}

fn leads_negative(s: &LieSum) -> bool {
    s.0.first().is_some_and(|(c, _)| c.is_negative())
}

fn base_params(p: u64) -> Vec<(String, BigInt)> {
    vec![("p".into(), p.into())]
}

/// Basis presentation: every order and every bracket `[b_i, b_j]`, `i < j`.
pub fn ring_file(ring: &FiniteLieRing, name: &str) -> PresentationFile {
    let names = ring.names().to_vec();
    let orders = ring.orders();
    let exact = vec![true; names.len()];
    let mut statements: Vec<Statement> =
        (0..names.len()).map(|i| Statement::Order { gen: names[i].clone(), value: orders[i].into() }).collect();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            statements.push(Statement::Rel {
                lhs: Expr::Lie(LieSum(vec![(BigRational::from_integer(1.into()), bracket_atom(&names[i], &names[j]))])),
                rhs: Expr::Lie(coords_sum(ring.bracket_basis(i, j), &names, orders, &exact)),
            });
        }
    }
    PresentationFile { kind: Kind::LieRing, name: name.into(), params: base_params(ring.p()), gens: names, statements }
}

/// Relations on the images `v_i` of pc generators. Each bracket is written
/// as `[v_j, v_i]` with `j > i`, or the other way round when that makes the
/// leading coefficient positive.
pub fn relations_file(rel: &GeneratorRelations, p: u64, name: &str) -> PresentationFile {
    let names = &rel.names;
    let q = &rel.relative_orders;
    let exact: Vec<bool> = rel.powers.iter().map(|w| w.iter().all(|&c| c == 0)).collect();
    let one = BigRational::from_integer(1.into());
    let mut statements = Vec::new();
    for i in 0..names.len() {
        if exact[i] {
            statements.push(Statement::Order { gen: names[i].clone(), value: q[i].into() });
        } else {
            statements.push(Statement::Rel {
                lhs: Expr::Lie(LieSum(vec![(BigRational::from_integer(q[i].into()), gen_atom(&names[i]))])),
                rhs: Expr::Lie(coords_sum(&rel.powers[i], names, q, &exact)),
            });
        }
    }
    for (&(j, i), coords) in &rel.brackets {
        let rhs = coords_sum(coords, names, q, &exact);
        let (lhs, rhs) = if leads_negative(&rhs) {
            (bracket_atom(&names[i], &names[j]), negated(&rhs))
        } else {
            (bracket_atom(&names[j], &names[i]), rhs)
        };
        statements.push(Statement::Rel { lhs: Expr::Lie(LieSum(vec![(one.clone(), lhs)])), rhs: Expr::Lie(rhs) });
    }
    PresentationFile { kind: Kind::LieRing, name: name.into(), params: base_params(p), gens: names.clone(), statements }
}

fn pc_word(w: &Word, names: &[String]) -> PcWord {
    PcWord(w.iter().filter(|(_, e)| *e != 0).map(|&(g, e)| (PcAtom::Gen(names[g].clone()), BigInt::from(e))).collect())
}

/// Orders other than `p`, nontrivial powers and nontrivial commutators.
pub fn pc_file(pres: &PcPresentation, name: &str) -> PresentationFile {
    let names = pres.names.clone();
    let mut statements = Vec::new();
    for (i, &q) in pres.relative_orders.iter().enumerate() {
        let power = pc_word(&pres.powers[i], &names);
        if !power.0.is_empty() {
            let lhs = PcWord(vec![(PcAtom::Gen(names[i].clone()), q.into())]);
            statements.push(Statement::Rel { lhs: Expr::Pc(lhs), rhs: Expr::Pc(power) });
        } else if q as u64 != pres.p {
            statements.push(Statement::Order { gen: names[i].clone(), value: q.into() });
        }
    }
    for (&(j, i), w) in &pres.commutators {
        let rhs = pc_word(w, &names);
        if rhs.0.is_empty() {
            continue;
        }
        let gen = |k: usize| PcWord(vec![(PcAtom::Gen(names[k].clone()), BigInt::from(1))]);
        let lhs = PcWord(vec![(PcAtom::Comm(vec![gen(j), gen(i)]), BigInt::from(1))]);
        statements.push(Statement::Rel { lhs: Expr::Pc(lhs), rhs: Expr::Pc(rhs) });
    }
    PresentationFile { kind: Kind::PcGroup, name: name.into(), params: base_params(pres.p), gens: names, statements }
}

/// Whether the two sums agree coefficientwise, as rationals.
pub fn same_sum(a: &LieSum, b: &LieSum) -> bool {
    let mut d: Vec<(LieAtom, BigRational)> = Vec::new();
    for (sign, s) in [(1, a), (-1, b)] {
        for (c, atom) in &s.0 {
            let c = c * BigRational::from_integer(sign.into());
            match d.iter_mut().find(|(x, _)| x == atom) {
                Some((_, v)) => *v += c,
                None => d.push((atom.clone(), c)),
            }
        }
    }
    d.iter().all(|(_, v)| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse;

    #[test]
    fn fractions() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(small_fraction(2, 5), r(-1, 2));
        assert_eq!(small_fraction(3, 5), r(1, 2));
        assert_eq!(small_fraction(4, 5), r(-1, 1));
        assert_eq!(small_fraction(1, 5), r(1, 1));
        assert_eq!(small_fraction(3, 7), r(-1, 2));
        assert_eq!(small_fraction(2, 7), r(2, 1));
        assert_eq!(small_fraction(4, 7), r(1, 2));
        assert_eq!(small_fraction(1, 2), r(1, 1));
    }

    #[test]
    fn ring_file_reparses() {
        let ring = crate::liering::tests::heisenberg(5);
        let f = ring_file(&ring, "H");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        let back = crate::liering::realize(&f.to_lie_presentation().unwrap()).unwrap();
        assert_eq!(back.ring.size(), Some(125));
    }
}
