//! The Baker-Campbell-Hausdorff series up to a given class, and the group
//! law it induces on the Heisenberg ring.

use liemult::bch::{bch_series, BchGroup};
use liemult::liering::FiniteLieRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let s = bch_series(c)?;
    println!("log(exp x exp y) up to class {c}:");
    println!("  {s}");
    println!("largest prime in a denominator: {}", s.largest_denominator_prime());

    let table = |i: usize, j: usize| -> Vec<i64> {
        match (i, j) {
            (0, 1) => vec![0, 0, 1],
            (1, 0) => vec![0, 0, 4],
            _ => vec![0, 0, 0],
        }
    };
    let mut flat = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            flat.push(table(i, j));
        }
    }
    let h = FiniteLieRing::new(5, vec!["x".into(), "y".into(), "z".into()], vec![5, 5, 5], flat)?;
    let g = BchGroup::new(&h)?;
    let (x, y) = (h.basis_element(0), h.basis_element(1));
    println!("in the Heisenberg ring mod 5: x * y = {}", h.format_element(&g.mul(&x, &y)));
    println!("                              y * x = {}", h.format_element(&g.mul(&y, &x)));
    Ok(())
}
