//! A CP cover of a ring, written out as a presentation, with its defining
//! pair checked; then a pair that is not CP.

use liemult::bogomolov::{cp_cover, verify_cp_pair, ScanStrategy};
use liemult::cli::corpus::fixture;
use liemult::cli::emit::ring_file;
use liemult::cli::parse::parse;
use liemult::liering::realize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "heisenberg.lr".into());
    let file = parse(fixture(&name).ok_or("unknown fixture")?)?;
    let c = cp_cover(&file.to_lie_presentation()?, ScanStrategy::Centralizer)?;
    println!("|C| = {}, |K| = {}, valid pair: {}", c.cover.order(), c.kernel_order, c.report.is_valid());
    print!("{}", ring_file(&c.cover, &format!("{}_cp", file.name)));

    // ⟨z⟩ in the Heisenberg ring is central and derived, but z = [x, y]
    let h = realize(&parse(fixture("heisenberg.lr").unwrap())?.to_lie_presentation()?)?;
    let a = realize(&parse(fixture("abelian.lr").unwrap())?.to_lie_presentation()?)?;
    let z = h.ring.generator_images().unwrap()[2].1.clone();
    let r = verify_cp_pair(&h.ring, &[z], &a.ring, None)?;
    println!(
        "(H, <z>) over (Z/5)^2: quotient {}, central and derived {}, avoids commutators {}",
        r.quotient_matches, r.kernel_central_derived, r.kernel_avoids_commutators
    );
    Ok(())
}
