//! Ring to group and back: the result has the same operation tables.

use liemult::cli::corpus::fixture;
use liemult::cli::emit::pc_file;
use liemult::cli::parse::parse;
use liemult::lazard::{roundtrip_check, to_group};
use liemult::liering::realize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["abelian.lr", "heisenberg.lr", "l1p.lr"] {
        let file = parse(fixture(name).unwrap())?;
        let r = realize(&file.to_lie_presentation()?)?;
        let corr = to_group(&r.ring)?;
        print!("{}", pc_file(corr.group.presentation(), &format!("{}_grp", file.name)));
        let rt = roundtrip_check(&r.ring, 7)?;
        println!(
            "round trip: {} pairs ({}), identical tables: {}",
            rt.pairs_checked,
            if rt.exhaustive { "all" } else { "sampled" },
            rt.passed
        );
    }
    Ok(())
}
