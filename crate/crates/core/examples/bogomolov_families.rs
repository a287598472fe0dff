//! Bogomolov multipliers of the two class-3 families for several primes,
//! using both commuting-pair strategies, and of a class-4 ring where it is
//! nonzero.

use liemult::bogomolov::{bogomolov_multiplier, ScanStrategy};
use liemult::cli::corpus::{family, fixture, Family};
use liemult::cli::parse::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for fam in [Family::L1p, Family::L2p] {
        for p in [5, 7] {
            let pres = family(fam, p)?.to_lie_presentation()?;
            for strategy in [ScanStrategy::Centralizer, ScanStrategy::Naive] {
                // the naive scan visits every pair and is capped at 5^5 elements
                if strategy == ScanStrategy::Naive && (p > 5 || fam == Family::L2p) {
                    continue;
                }
                let t = std::time::Instant::now();
                let r = bogomolov_multiplier(&pres, strategy)?;
                println!(
                    "{} p={p} {strategy:<11} |L| = {:<6} M = {:<28} |M0| = {:<5} B0 = {}  ({:.1?})",
                    fam.name(),
                    r.ring_order,
                    r.schur.to_string(),
                    r.m0_index,
                    r.bogomolov,
                    t.elapsed()
                );
            }
        }
    }
    let pres = parse(fixture("maxclass5.lr").expect("shipped"))?.to_lie_presentation()?;
    for strategy in [ScanStrategy::Centralizer, ScanStrategy::Naive] {
        let r = bogomolov_multiplier(&pres, strategy)?;
        println!(
            "maxclass5 p=5 {strategy:<11} |L| = {:<6} M = {:<28} |M0| = {:<5} B0 = {}",
            r.ring_order,
            r.schur.to_string(),
            r.m0_index,
            r.bogomolov
        );
    }
    Ok(())
}
