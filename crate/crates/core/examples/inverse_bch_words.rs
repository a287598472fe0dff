//! Group words with rational exponents that realize `x + y` and `[x, y]`,
//! checked symbolically in the free nilpotent group.

use liemult::bch::{inverse_words, verify_inverse_words};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_class: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    for c in 1..=max_class {
        let t = std::time::Instant::now();
        let w = inverse_words(c)?;
        let ok = verify_inverse_words(&w)?;
        println!("class {c} ({:.2?}, verified: {ok})", t.elapsed());
        println!("  x + y  = {}", w.add);
        if c >= 2 {
            println!("  [x, y] = {}", w.bracket);
        }
    }
    Ok(())
}
