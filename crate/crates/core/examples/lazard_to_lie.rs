//! Lie rings of the pc groups g1p and g2p, printed on the images of the pc
//! generators.

use liemult::cli::corpus::{family, Family};
use liemult::cli::emit::relations_file;
use liemult::lazard::{to_lie, verify_correspondence};
use liemult::pcgroup::PcGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    for fam in [Family::G1p, Family::G2p] {
        let file = family(fam, p)?;
        let g = PcGroup::new(file.to_pc_presentation()?)?;
        let corr = to_lie(&g)?;
        let rel = corr.relations.as_ref().ok_or("series is not normal")?;
        print!("{}", relations_file(rel, p, &format!("{}_lie", file.name)));
        if g.size().is_some_and(|n| n <= 3125) {
            let report = verify_correspondence(&corr, None)?;
            println!("correspondence checks passed: {}", report.passed());
        }
    }
    Ok(())
}
