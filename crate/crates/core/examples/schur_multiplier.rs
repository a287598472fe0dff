//! Schur multipliers of small Lie rings through the Hopf formula, with the
//! brute-force integer computation alongside.

use liemult::bogomolov::schur_multiplier_bruteforce;
use liemult::cli::corpus::fixture;
use liemult::cli::parse::parse;
use liemult::liering::realize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["z5.lr", "abelian.lr", "z25xz5.lr", "heisenberg.lr", "l1p.lr"] {
        let file = parse(fixture(name).expect("shipped fixture"))?;
        let pres = file.to_lie_presentation()?;
        let r = realize(&pres)?;
        let m = r.context.schur_multiplier();
        print!("{:<14} |L| = {:<5} class {}  M(L) = {}", file.name, r.ring.order(), r.context.class(), m);
        if r.ring.size().unwrap_or(u64::MAX) <= 125 {
            print!("  (brute force: {})", schur_multiplier_bruteforce(&pres)?);
        }
        println!();
    }
    Ok(())
}
