//! Hall bases of free nilpotent Lie rings and the Witt dimension formula.

use liemult::freelie::{witt_rank, CoefficientRing, FreeNilpotentLieRing, HallBasis, LieExpr, RewriteMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names = ["x", "y", "z"].map(String::from);
    let basis = HallBasis::new(2, 4)?;
    for i in 0..basis.len() {
        println!("{:>2}: {}", i, basis.format(i, &names));
    }
    for d in 1..=6 {
        println!("degree {d}: {} monomials on 3 generators", witt_rank(3, d));
    }
    let f = FreeNilpotentLieRing::new(3, 3, CoefficientRing::Integers)?;
    let jacobi = LieExpr::Sum(vec![
        LieExpr::left_normed(vec![LieExpr::gen(0), LieExpr::gen(1), LieExpr::gen(2)]),
        LieExpr::left_normed(vec![LieExpr::gen(1), LieExpr::gen(2), LieExpr::gen(0)]),
        LieExpr::left_normed(vec![LieExpr::gen(2), LieExpr::gen(0), LieExpr::gen(1)]),
    ]);
    println!("[[x,y],z] + [[y,z],x] + [[z,x],y] = {:?}", f.rewrite(&jacobi, RewriteMode::Truncate)?);
    Ok(())
}
