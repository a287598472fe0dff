//! Shipped presentation files and the four parameterized families.

use super::parse::{parse_with_p, ParseError, PresentationFile};

/// `(file name, text)` for every shipped fixture.
pub const FIXTURES: &[(&str, &str)] = &[
    ("abelian.lr", include_str!("../../fixtures/abelian.lr")),
    ("abelian_b.lr", include_str!("../../fixtures/abelian_b.lr")),
    ("abelian_c.lr", include_str!("../../fixtures/abelian_c.lr")),
    ("abelian_d.lr", include_str!("../../fixtures/abelian_d.lr")),
    ("g1p.pc", include_str!("../../fixtures/g1p.pc")),
    ("g2p.pc", include_str!("../../fixtures/g2p.pc")),
    ("h2.lr", include_str!("../../fixtures/h2.lr")),
    ("half_p2.lr", include_str!("../../fixtures/half_p2.lr")),
    ("heisenberg.lr", include_str!("../../fixtures/heisenberg.lr")),
    ("heisenberg.pc", include_str!("../../fixtures/heisenberg.pc")),
    ("heisenberg_b.lr", include_str!("../../fixtures/heisenberg_b.lr")),
    ("heisenberg_c.lr", include_str!("../../fixtures/heisenberg_c.lr")),
    ("heisenberg_d.lr", include_str!("../../fixtures/heisenberg_d.lr")),
    ("inconsistent.pc", include_str!("../../fixtures/inconsistent.pc")),
    ("l1p.lr", include_str!("../../fixtures/l1p.lr")),
    ("l1p_b.lr", include_str!("../../fixtures/l1p_b.lr")),
    ("l1p_c.lr", include_str!("../../fixtures/l1p_c.lr")),
    ("l1p_d.lr", include_str!("../../fixtures/l1p_d.lr")),
    ("l2p.lr", include_str!("../../fixtures/l2p.lr")),
    ("l2p_b.lr", include_str!("../../fixtures/l2p_b.lr")),
    ("l2p_c.lr", include_str!("../../fixtures/l2p_c.lr")),
    ("l2p_d.lr", include_str!("../../fixtures/l2p_d.lr")),
    ("maxclass5.lr", include_str!("../../fixtures/maxclass5.lr")),
    ("maxclass5.pc", include_str!("../../fixtures/maxclass5.pc")),
    ("maxclass5_b.lr", include_str!("../../fixtures/maxclass5_b.lr")),
    ("maxclass5_c.lr", include_str!("../../fixtures/maxclass5_c.lr")),
    ("maxclass5_d.lr", include_str!("../../fixtures/maxclass5_d.lr")),
    ("z25xz5.lr",include_str!("../../fixtures/z25xz5.lr")),
    ("z5.lr", include_str!("../../fixtures/z5.lr")),
];

/// A file with a syntax error, kept out of `FIXTURES`.
pub const SYNTAX_ERROR: &str = include_str!("../../fixtures/syntax_error.lr");

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    G1p,
    L1p,
    G2p,
    L2p,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G1p, Family::L1p, Family::G2p, Family::L2p];

    pub fn name(self) -> &'static str {
        match self {
            Family::G1p => "g1p",
            Family::L1p => "l1p",
            Family::G2p => "g2p",
            Family::L2p => "l2p",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Family::G1p => "g1p.pc",
            Family::L1p => "l1p.lr",
            Family::G2p => "g2p.pc",
            Family::L2p => "l2p.lr",
        }
    }

    /// Nilpotency class of every member.
    pub fn class(self) -> u64 {
        3
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected g1p, l1p, g2p or l2p)"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("class {class} needs p >= {min}, got p = {p}")]
    PrimeTooSmall { p: u64, class: u64, min: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The family member at `p`, with every coefficient evaluated.
pub fn family(f: Family, p: u64) -> Result<PresentationFile, FamilyError> {
    if p <= f.class() {
        return Err(FamilyError::PrimeTooSmall { p, class: f.class(), min: f.class() + 2 });
    }
    let text = fixture(f.file_name()).expect("family fixture is shipped");
    Ok(parse_with_p(text, Some(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse;

    #[test]
    fn corpus_round_trips() {
        for (name, text) in FIXTURES {
            let f = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let again = parse(&f.to_string()).unwrap_or_else(|e| panic!("{name} reprinted: {e}"));
            assert_eq!(again, f, "{name}");
        }
        assert!(parse(SYNTAX_ERROR).is_err());
    }

    #[test]
    fn families_are_byte_stable() {
        let a = family(Family::G1p, 5).unwrap().to_string();
        assert_eq!(a, family(Family::G1p, 5).unwrap().to_string());
        assert!(a.contains("rel g^25 = g3;"), "{a}");
        assert!(matches!(family(Family::G1p, 3), Err(FamilyError::PrimeTooSmall { .. })));
        assert!(family(Family::L2p, 4).is_err());
    }
}
