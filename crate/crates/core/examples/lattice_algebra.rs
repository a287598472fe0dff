//! Integer lattices: Hermite and Smith normal forms, sums, intersections and
//! quotients.

use liemult::exactlin::{hnf, lattice_intersect, lattice_sum, quotient_invariants, snf, to_big_rows, IntegerLattice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = to_big_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let h = hnf(3, &rows);
    println!("HNF basis: {:?}", h.basis());
    println!("Z^3 / L = {}", snf(3, &rows));

    let a = IntegerLattice::from_i64(2, &[vec![4, 0], vec![0, 6]])?;
    let b = IntegerLattice::from_i64(2, &[vec![6, 0], vec![0, 4]])?;
    println!("A + B = {:?}", lattice_sum(&a, &b)?.basis());
    println!("A ∩ B = {:?}", lattice_intersect(&a, &b)?.basis());
    println!("(A + B) / (A ∩ B) = {}", quotient_invariants(&lattice_sum(&a, &b)?, &lattice_intersect(&a, &b)?)?);
    Ok(())
}
