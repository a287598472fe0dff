//! Collection in a pc presentation: products, powers, commutators and the
//! consistency check.

use liemult::pcgroup::{PcError, PcGroup, PcPresentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names = ["g", "g1", "g2", "g3"].map(String::from).to_vec();
    let mut pres = PcPresentation::new(5, names);
    pres.relative_orders[0] = 25;
    pres.set_power(0, vec![(3, 1)]);
    pres.set_commutator(1, 0, vec![(2, 1)]);
    pres.set_commutator(2, 0, vec![(3, 1)]);
    let g = PcGroup::new(pres)?;
    println!("order {}, exponent {}, class {}", g.order(), g.exponent(), g.nilpotency_class()?);
    let (a, b) = (g.generator(0), g.generator(1));
    println!("g1 * g       = {:?}", g.mul(&b, &a));
    println!("g * g1       = {:?}", g.mul(&a, &b));
    println!("g^25         = {:?}", g.pow(&a, 25));
    println!("[g1, g]      = {:?}", g.comm(&b, &a));
    println!("(g g1)^-1    = {:?}", g.inv(&g.mul(&a, &b)));
    let (_, sizes) = g.conjugacy_classes()?;
    println!("conjugacy classes: {}", sizes.len());

    let mut bad = PcPresentation::new(5, ["a", "b", "c"].map(String::from).to_vec());
    bad.set_commutator(1, 0, vec![(2, 1)]);
    bad.set_power(1, vec![(2, 1)]);
    bad.set_power(0, vec![(1, 1)]);
    match PcGroup::new(bad) {
        Err(PcError::Inconsistent(why)) => println!("rejected: {why}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
