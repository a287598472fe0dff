//! Presentation files.
//!
//! ```text
//! file  := kind NAME [ "(" param ("," param)* ")" ] "{" stmt* "}"
//! kind  := "liering" | "pcgroup"
//! param := ident "=" INT
//! stmt  := "gens" ident ("," ident)* ";"
//!        | "order" ident "=" arith ";"
//!        | "rel" expr "=" expr ";"
//! ```
//!
//! `arith` is integer arithmetic over literals and `p`. In Lie rings an
//! expression is a sum of terms `coeff * atom`, where atoms are generators
//! or brackets `[a, b, ...]` (left-normed) and coefficients are rational.
//! Group expressions are words of generators, commutators and parenthesized
//! words with integer powers `^k`. `#` and `//` start comments.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::freelie::LieExpr;
use crate::liering::LieRingPresentation;
use crate::pcgroup::{PcPresentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    LieRing,
    PcGroup,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::LieRing => "liering",
            Kind::PcGroup => "pcgroup",
        }
    }
}

/// A rational combination of Lie atoms, kept in written order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSum(pub Vec<(BigRational, LieAtom)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieAtom {
    Gen(String),
    /// Left-normed: `[a, b, c] = [[a, b], c]`.
    Bracket(Vec<LieSum>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcWord(pub Vec<(PcAtom, BigInt)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcAtom {
    Gen(String),
    /// Left-normed group commutator.
    Comm(Vec<PcWord>),
    Group(PcWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lie(LieSum),
    Pc(PcWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Order { gen: String, value: BigInt },
    Rel { lhs: Expr, rhs: Expr },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub kind: Kind,
    pub name: String,
    /// `p` first, then any of `k`, `class` in the order written.
    pub params: Vec<(String, BigInt)>,
    pub gens: Vec<String>,
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i);
        } else if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(1, &mut i);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, col: c0 });
        } else {
            let sym = match c {
                '−' => '-',
                '·' => '*',
                '(' | ')' | '{' | '}' | '[' | ']' | ',' | ';' | '=' | '+' | '-' | '*' | '/' | '^' => c,
                _ => {
                    return Err(ParseError { line: l0, col: c0, message: format!("unexpected character '{c}'") });
                }
            };
            advance(1, &mut i);
            out.push(Token { tok: Tok::Sym(sym), line: l0, col: c0 });
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    p: BigInt,
    kind: Kind,
    gens: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if *self.peek() == Tok::Ident(kw.into()) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn generator(&mut self) -> PResult<String> {
        let at = self.pos;
        let name = self.ident()?;
        if !self.gens.contains(&name) {
            self.pos = at;
            return self.err(format!("unknown generator '{name}'"));
        }
        Ok(name)
    }

    // ---- scalar arithmetic over INT and p

    fn arith(&mut self) -> PResult<BigRational> {
        let mut v = self.aterm()?;
        loop {
            if self.eat('+') {
                v += self.aterm()?;
            } else if self.eat('-') {
                v -= self.aterm()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn aterm(&mut self) -> PResult<BigRational> {
        let mut v = self.afactor()?;
        loop {
            if self.eat('*') {
                v *= self.afactor()?;
            } else if self.is_sym('/') {
                self.pos += 1;
                let d = self.afactor()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn afactor(&mut self) -> PResult<BigRational> {
        if self.eat('-') {
            return Ok(-self.afactor()?);
        }
        let base = self.aprimary()?;
        if self.eat('^') {
            let e = self.afactor()?;
            let Some(e) = e.to_integer().to_u32().filter(|_| e.is_integer()) else {
                return self.err("exponent must be a small non-negative integer");
            };
            return Ok(num_traits::pow(base, e as usize));
        }
        Ok(base)
    }

    fn aprimary(&mut self) -> PResult<BigRational> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(BigRational::from_integer(n))
            }
            Tok::Ident(s) if s == "p" => {
                self.pos += 1;
                Ok(BigRational::from_integer(self.p.clone()))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let v = self.arith()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym('{') => {
                self.pos += 1;
                let v = self.arith()?;
                self.expect('}')?;
                Ok(v)
            }
            _ => self.err("expected a number, p, or a parenthesized expression"),
        }
    }

    fn integer(&mut self) -> PResult<BigInt> {
        let v = self.arith()?;
        if !v.is_integer() {
            return self.err(format!("expected an integer, found {v}"));
        }
        Ok(v.to_integer())
    }

    // ---- Lie expressions

    fn lie_sum(&mut self) -> PResult<LieSum> {
        let mut terms = Vec::new();
        let mut sign = BigRational::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        loop {
            for (c, a) in self.lie_term()? {
                let c = c * &sign;
                if !c.is_zero() {
                    terms.push((c, a));
                }
            }
            if self.eat('+') {
                sign = BigRational::one();
            } else if self.eat('-') {
                sign = -BigRational::one();
            } else {
                return Ok(LieSum(terms));
            }
        }
    }

    fn starts_unit(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(') | Tok::Sym('[') | Tok::Sym('{'))
    }

    /// A product of scalar units and at most one Lie atom.
    fn lie_term(&mut self) -> PResult<Vec<(BigRational, LieAtom)>> {
        let mut coeff = BigRational::one();
        let mut atom: Option<LieSum> = None;
        loop {
            let at = self.pos;
            let is_scalar_start = match self.peek() {
                Tok::Int(_) | Tok::Sym('{') => true,
                Tok::Ident(s) => s == "p" && !self.gens.contains(s),
                Tok::Sym('(') => true,
                _ => false,
            };
            let mut parsed_scalar = false;
            if is_scalar_start && atom.is_none() {
                match self.afactor() {
                    Ok(v) => {
                        coeff *= v;
                        parsed_scalar = true;
                    }
                    Err(e) => {
                        if !self.is_sym_at(at, '(') {
                            return Err(e);
                        }
                        self.pos = at;
                    }
                }
            }
            if !parsed_scalar {
                if atom.is_some() {
                    return self.err("a term holds at most one Lie atom");
                }
                atom = Some(self.lie_atom()?);
            }
            if self.eat('*') {
                continue;
            }
            if atom.is_none() && self.starts_unit() {
                continue;
            }
            break;
        }
        match atom {
            Some(LieSum(inner)) => Ok(inner.into_iter().map(|(c, a)| (c * &coeff, a)).collect()),
            None if coeff.is_zero() => Ok(Vec::new()),
            None => self.err(format!("scalar {coeff} where a Lie element is expected")),
        }
    }

    fn is_sym_at(&self, at: usize, c: char) -> bool {
        self.toks[at].tok == Tok::Sym(c)
    }

    /// A generator, bracket, or parenthesized sum; returned as a sum.
    fn lie_atom(&mut self) -> PResult<LieSum> {
        if self.eat('[') {
            let mut items = vec![self.lie_sum()?];
            while self.eat(',') {
                items.push(self.lie_sum()?);
            }
            self.expect(']')?;
            if items.len() < 2 {
                return self.err("a bracket needs at least two entries");
            }
            return Ok(LieSum(vec![(BigRational::one(), LieAtom::Bracket(items))]));
        }
        if self.eat('(') {
            let s = self.lie_sum()?;
            self.expect(')')?;
            return Ok(s);
        }
        let g = self.generator()?;
        Ok(LieSum(vec![(BigRational::one(), LieAtom::Gen(g))]))
    }

    // ---- group words

    fn pc_word(&mut self) -> PResult<PcWord> {
        if *self.peek() == Tok::Int(BigInt::one()) {
            self.pos += 1;
            return Ok(PcWord(Vec::new()));
        }
        let mut factors = vec![self.pc_factor()?];
        loop {
            if self.eat('*') || matches!(self.peek(), Tok::Ident(_) | Tok::Sym('[') | Tok::Sym('(')) {
                factors.push(self.pc_factor()?);
            } else {
                return Ok(PcWord(factors));
            }
        }
    }

    fn pc_factor(&mut self) -> PResult<(PcAtom, BigInt)> {
        let atom = if self.eat('[') {
            let mut items = vec![self.pc_word()?];
            while self.eat(',') {
                items.push(self.pc_word()?);
            }
            self.expect(']')?;
            if items.len() < 2 {
                return self.err("a commutator needs at least two entries");
            }
            PcAtom::Comm(items)
        } else if self.eat('(') {
            let w = self.pc_word()?;
            self.expect(')')?;
            PcAtom::Group(w)
        } else {
            PcAtom::Gen(self.generator()?)
        };
        let e = if self.eat('^') {
            let v = self.afactor()?;
            if !v.is_integer() {
                return self.err("group exponents must be integers");
            }
            v.to_integer()
        } else {
            BigInt::one()
        };
        Ok((atom, e))
    }

    fn expr(&mut self) -> PResult<Expr> {
        match self.kind {
            Kind::LieRing => Ok(Expr::Lie(self.lie_sum()?)),
            Kind::PcGroup => Ok(Expr::Pc(self.pc_word()?)),
        }
    }

    // ---- file

    fn file(&mut self, p_override: Option<u64>) -> PResult<PresentationFile> {
        let kind = match self.peek() {
            Tok::Ident(s) if s == "liering" => Kind::LieRing,
            Tok::Ident(s) if s == "pcgroup" => Kind::PcGroup,
            _ => return self.err("expected 'liering' or 'pcgroup'"),
        };
        self.pos += 1;
        self.kind = kind;
        let name = self.ident()?;
        let mut params: Vec<(String, BigInt)> = Vec::new();
        if self.eat('(') {
            loop {
                let key = self.ident()?;
                if !["p", "k", "class"].contains(&key.as_str()) {
                    self.pos -= 1;
                    return self.err(format!("unknown parameter '{key}'"));
                }
                self.expect('=')?;
                let v = match self.next() {
                    Tok::Int(v) => v,
                    _ => {
                        self.pos -= 1;
                        return self.err("expected an integer");
                    }
                };
                params.push((key, v));
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
        }
        if let Some(p) = p_override {
            params.retain(|(k, _)| k != "p");
            params.insert(0, ("p".into(), p.into()));
        }
        let Some(pos) = params.iter().position(|(k, _)| k == "p") else {
            return self.err("missing parameter p (give it in the header or with --p)");
        };
        let pv = params.remove(pos);
        params.insert(0, pv);
        let p = params[0].1.clone();
        if !p.to_u64().map(is_prime).unwrap_or(false) {
            return self.err(format!("non-prime p = {p}"));
        }
        self.p = p;

        self.expect('{')?;
        let mut statements = Vec::new();
        loop {
            if self.eat('}') {
                break;
            }
            if self.keyword("gens") {
                loop {
                    let at = self.pos;
                    let g = self.ident()?;
                    if g == "p" {
                        self.pos = at;
                        return self.err("'p' is reserved for the prime");
                    }
                    if self.gens.contains(&g) {
                        self.pos = at;
                        return self.err(format!("generator '{g}' declared twice"));
                    }
                    self.gens.push(g);
                    if !self.eat(',') {
                        break;
                    }
                }
            } else if self.keyword("order") {
                let gen = self.generator()?;
                self.expect('=')?;
                let value = self.integer()?;
                if !value.is_positive() {
                    return self.err("orders must be positive");
                }
                statements.push(Statement::Order { gen, value });
            } else if self.keyword("rel") {
                let lhs = self.expr()?;
                self.expect('=')?;
                let rhs = self.expr()?;
                statements.push(Statement::Rel { lhs, rhs });
            } else {
                return self.err("expected 'gens', 'order', 'rel' or '}'");
            }
            self.expect(';')?;
        }
        if *self.peek() != Tok::Eof {
            return self.err("trailing input after '}'");
        }
        Ok(PresentationFile { kind, name, params, gens: std::mem::take(&mut self.gens), statements })
    }
}

pub fn parse(src: &str) -> Result<PresentationFile, ParseError> {
    parse_with_p(src, None)
}

/// Parses with `p` taken from `p_override` when given, else from the header.
pub fn parse_with_p(src: &str, p_override: Option<u64>) -> Result<PresentationFile, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, p: BigInt::zero(), kind: Kind::LieRing, gens: Vec::new() };
    parser.file(p_override)
}

/// Lie expressions and pc words in text form, for command-line arguments.
pub fn parse_lie_expr(src: &str, gens: &[String], p: u64) -> Result<LieSum, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, p: p.into(), kind: Kind::LieRing, gens: gens.to_vec() };
    let s = parser.lie_sum()?;
    if *parser.peek() != Tok::Eof {
        return parser.err("trailing input");
    }
    Ok(s)
}

impl LieSum {
    pub fn to_lie_expr(&self, gens: &[String]) -> LieExpr {
        LieExpr::Sum(self.0.iter().map(|(c, a)| LieExpr::scale(c.clone(), a.to_lie_expr(gens))).collect())
    }
}

impl LieAtom {
    fn to_lie_expr(&self, gens: &[String]) -> LieExpr {
        match self {
            LieAtom::Gen(g) => LieExpr::gen(gens.iter().position(|x| x == g).expect("declared generator")),
            LieAtom::Bracket(items) => LieExpr::left_normed(items.iter().map(|s| s.to_lie_expr(gens)).collect()),
        }
    }
}

impl PresentationFile {
    pub fn p(&self) -> u64 {
        self.params[0].1.to_u64().expect("checked prime")
    }

    pub fn param(&self, key: &str) -> Option<&BigInt> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn gen_index(&self, name: &str) -> usize {
        self.gens.iter().position(|g| g == name).expect("declared generator")
    }

    /// Relators `q g` for each order statement and `lhs - rhs` for each
    /// relation.
    pub fn to_lie_presentation(&self) -> Result<LieRingPresentation, String> {
        if self.kind != Kind::LieRing {
            return Err("expected a liering file".into());
        }
        let mut pres = LieRingPresentation::new(self.p(), self.gens.clone());
        for s in &self.statements {
            match s {
                Statement::Order { gen, value } => pres.add_relator(LieExpr::scale(
                    BigRational::from_integer(value.clone()),
                    LieExpr::gen(self.gen_index(gen)),
                )),
                Statement::Rel { lhs: Expr::Lie(l), rhs: Expr::Lie(r) } => {
                    pres.add_relator(LieExpr::sub(l.to_lie_expr(&self.gens), r.to_lie_expr(&self.gens)))
                }
                Statement::Rel { .. } => unreachable!("parser keeps expression kinds apart"),
            }
        }
        Ok(pres)
    }

    fn flat_word(&self, w: &PcWord) -> Result<Word, String> {
        let mut out = Vec::new();
        for (a, e) in &w.0 {
            match a {
                PcAtom::Gen(g) => out.push((self.gen_index(g), e.to_i64().ok_or("exponent too large")?)),
                _ => return Err("right-hand sides must be products of generator powers".into()),
            }
        }
        Ok(out)
    }

    /// Power relations `g^q = w`, commutator relations `[a, b] = w` and
    /// orders; unspecified relations are trivial and orders default to `p`.
    pub fn to_pc_presentation(&self) -> Result<PcPresentation, String> {
        if self.kind != Kind::PcGroup {
            return Err("expected a pcgroup file".into());
        }
        let p = self.p();
        let mut pres = PcPresentation::new(p, self.gens.clone());
        let mut order_given = vec![false; self.gens.len()];
        for s in &self.statements {
            if let Statement::Order { gen, value } = s {
                let i = self.gen_index(gen);
                pres.relative_orders[i] = value.to_i64().ok_or("order too large")?;
                order_given[i] = true;
            }
        }
        for s in &self.statements {
            let Statement::Rel { lhs: Expr::Pc(l), rhs: Expr::Pc(r) } = s else { continue };
            let rhs = self.flat_word(r)?;
            match l.0.as_slice() {
                [(PcAtom::Gen(g), e)] => {
                    let i = self.gen_index(g);
                    let e = e.to_i64().ok_or("exponent too large")?;
                    if !order_given[i] {
                        pres.relative_orders[i] = e;
                        order_given[i] = true;
                    } else if pres.relative_orders[i] != e {
                        return Err(format!("power {g}^{e} differs from the relative order {}", pres.relative_orders[i]));
                    }
                    pres.set_power(i, rhs);
                }
                [(PcAtom::Comm(items), e)] if e.is_one() && items.len() == 2 => {
                    let single = |w: &PcWord| match w.0.as_slice() {
                        [(PcAtom::Gen(g), e)] if e.is_one() => Some(self.gen_index(g)),
                        _ => None,
                    };
                    let (Some(a), Some(b)) = (single(&items[0]), single(&items[1])) else {
                        return Err("commutator relations need two generators on the left".into());
                    };
                    if a == b {
                        return Err("a generator commutes with itself".into());
                    }
                    if a > b {
                        pres.set_commutator(a, b, rhs);
                    } else {
                        // [a, b] = w gives [b, a] = w^-1
                        pres.set_commutator(b, a, rhs.iter().rev().map(|&(g, e)| (g, -e)).collect());
                    }
                }
                _ => return Err("left-hand sides must be g^q or [a, b]".into()),
            }
        }
        Ok(pres)
    }
}

// ---- printing

fn coeff_prefix(c: &BigRational) -> String {
    if c.is_one() {
        String::new()
    } else if c.is_integer() {
        format!("{c}")
    } else {
        format!("({c})")
    }
}

impl fmt::Display for LieSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, a)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{}{}", coeff_prefix(&c.abs()), a)?;
        }
        Ok(())
    }
}

impl fmt::Display for LieAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieAtom::Gen(g) => f.write_str(g),
            LieAtom::Bracket(items) => {
                let parts: Vec<String> = items.iter().map(|s| s.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl fmt::Display for PcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, e)| {
                let base = match a {
                    PcAtom::Gen(g) => g.clone(),
                    PcAtom::Comm(items) => {
                        format!("[{}]", items.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","))
                    }
                    PcAtom::Group(w) => format!("({w})"),
                };
                if e.is_one() {
                    base
                } else if e.is_positive() {
                    format!("{base}^{e}")
                } else {
                    format!("{base}^({e})")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lie(s) => s.fmt(f),
            Expr::Pc(w) => w.fmt(f),
        }
    }
}

impl fmt::Display for PresentationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "{} {}({}) {{", self.kind.keyword(), self.name, params.join(", "))?;
        if !self.gens.is_empty() {
            writeln!(f, "  gens {};", self.gens.join(", "))?;
        }
        for s in &self.statements {
            match s {
                Statement::Order { gen, value } => writeln!(f, "  order {gen} = {value};")?,
                Statement::Rel { lhs, rhs } => writeln!(f, "  rel {lhs} = {rhs};")?,
            }
        }
        writeln!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: &str = "liering H(p=5){ gens x,y,z; order x=5; order y=5; order z=5; rel [x,y]=z; rel [x,z]=0; rel [y,z]=0; }";

    #[test]
    fn heisenberg_text() {
        let f = parse(H).unwrap();
        assert_eq!(f.gens, ["x", "y", "z"]);
        assert_eq!(f.statements.len(), 6);
        let again = parse(&f.to_string()).unwrap();
        assert_eq!(again, f);
        let pres = f.to_lie_presentation().unwrap();
        assert_eq!(pres.relators.len(), 6);
    }

    #[test]
    fn coefficients_and_brackets() {
        let src = "liering T(p=5) { gens v, v1, v2, v3;\n rel [v1,v] = v2 - (1/2)v3; rel v3 = p^2*v + (p^4/2)*v; rel [v1,v,v] = 2 [v2, v]; }";
        let f = parse(src).unwrap();
        let Statement::Rel { rhs: Expr::Lie(s), .. } = &f.statements[0] else { panic!() };
        assert_eq!(s.0[1].0, BigRational::new((-1).into(), 2.into()));
        let Statement::Rel { rhs: Expr::Lie(s), .. } = &f.statements[1] else { panic!() };
        assert_eq!(s.0[0].0, BigRational::from_integer(25.into()));
        assert_eq!(s.0[1].0, BigRational::new(625.into(), 2.into()));
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        let g = parse_with_p(src, Some(7)).unwrap();
        assert_eq!(g.p(), 7);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse("liering A(p=5) {\n gens x;\n rel [x,w] = 0; }").unwrap_err();
        assert_eq!((e.line, e.col), (3, 9));
        assert!(e.message.contains("unknown generator"));
        let e = parse("liering A(p=6) { gens x; }").unwrap_err();
        assert!(e.message.contains("non-prime"));
        assert!(parse("liering A(p=5) { gens x; rel x = ; }").is_err());
    }

    #[test]
    fn pc_words() {
        let src = "pcgroup G(p=5) { gens g, g1, g2, g3; order g = p^2; rel [g1,g] = g2; rel [g2,g] = g3; rel g^{p^2} = g3; }";
        let f = parse(src).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        let pres = f.to_pc_presentation().unwrap();
        assert_eq!(pres.relative_orders, vec![25, 5, 5, 5]);
        assert_eq!(pres.commutator(1, 0), &[(2, 1)]);
        assert_eq!(pres.powers[0], vec![(3, 1)]);
        let f = parse("pcgroup G(p=5) { gens a, b, c; rel [a,b] = c^-1 * (a b)^2 [a,b]; }").unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
