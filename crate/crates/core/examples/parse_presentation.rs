//! Parse a presentation file, print its canonical form and realize it.
//! Without arguments the shipped `l1p.lr` is used.

use liemult::cli::parse::{parse_with_p, Kind};
use liemult::liering::realize;
use liemult::pcgroup::PcGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(path)?,
        None => liemult::cli::corpus::fixture("l1p.lr").expect("shipped").to_string(),
    };
    let p = args.next().map(|s| s.parse()).transpose()?;
    let file = parse_with_p(&text, p)?;
    print!("{file}");
    match file.kind {
        Kind::LieRing => {
            let r = realize(&file.to_lie_presentation()?)?;
            println!("order {}, class {}", r.ring.order(), r.context.class());
            print!("{}", r.ring);
        }
        Kind::PcGroup => {
            let g = PcGroup::new(file.to_pc_presentation()?)?;
            println!("order {}, class {}", g.order(), g.nilpotency_class()?);
        }
    }
    Ok(())
}
