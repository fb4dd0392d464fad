//! Text syntaxes accepted on the command line and in job files.
//!
//! * abelian groups: `p=5: 3,1,1`, `p=2: 2*3,1*inf` (exponent, optional
//!   multiplicity)
//! * active profiles: `p=2 c=2 s=2,1` (optionally prefixed with `profile`),
//!   or the builtins `D4` and `Q8`
//! * explicit groups for the brute-force engine: `C4`, `D4`, `Q8`, `C2xC2`,
//!   `C2 wr C4`, `(C2 wr C2) wr C2`

use std::fmt;

use num_bigint::BigUint;
use wreathlab::oracle::FiniteGroup;
use wreathlab::{AbelianGroupSpec, AbelianPGroup, ActiveProfile, Multiplicity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn at(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed abelian group spec; infinite multiplicities only in the second form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGroup {
    Finite(AbelianPGroup),
    Infinite(AbelianGroupSpec),
}

impl ParsedGroup {
    pub fn into_spec(self) -> AbelianGroupSpec {
        match self {
            ParsedGroup::Finite(g) => AbelianGroupSpec::from(&g),
            ParsedGroup::Infinite(s) => s,
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(0, char::len_utf8);
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(ParseError::at(self.pos, format!("expected {token:?}")))
        }
    }

    fn digits(&mut self) -> Result<(usize, &'a str), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(ParseError::at(start, "expected a number"));
        }
        self.pos += len;
        Ok((start, &self.text[start..start + len]))
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<(usize, T), ParseError> {
        let (start, digits) = self.digits()?;
        digits
            .parse()
            .map(|n| (start, n))
            .map_err(|_| ParseError::at(start, format!("number {digits} out of range")))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::at(self.pos, "unexpected trailing input"))
        }
    }
}

fn prime_at(position: usize, p: u64) -> Result<u64, ParseError> {
    AbelianPGroup::trivial(p)
        .map(|_| p)
        .map_err(|e| ParseError::at(position, e.to_string()))
}

/// `p=<prime>: <e>[*<n|inf>] (,<e>[*<n|inf>])*`; the factor list may be empty.
pub fn parse_group_spec(text: &str) -> Result<ParsedGroup, ParseError> {
    let mut cur = Cursor::new(text);
    cur.expect("p")?;
    cur.expect("=")?;
    let (p_pos, p) = cur.number::<u64>()?;
    let p = prime_at(p_pos, p)?;
    cur.expect(":")?;
    let mut factors = Vec::new();
    if !cur.at_end() {
        loop {
            let (e_pos, e) = cur.number::<u32>()?;
            if e == 0 {
                return Err(ParseError::at(e_pos, "cyclic factor exponents must be positive"));
            }
            let m = if cur.eat("*") {
                if cur.eat("inf") {
                    Multiplicity::Omega
                } else {
                    let (_, digits) = cur.digits()?;
                    Multiplicity::Finite(digits.parse::<BigUint>().expect("ASCII digits"))
                }
            } else {
                Multiplicity::Finite(BigUint::from(1u32))
            };
            factors.push((e, m));
            if !cur.eat(",") {
                break;
            }
        }
    }
    cur.finish()?;
    let spec = AbelianGroupSpec::new(p, factors).map_err(|e| ParseError::at(0, e.to_string()))?;
    Ok(match spec.to_finite() {
        Some(g) => ParsedGroup::Finite(g),
        None => ParsedGroup::Infinite(spec),
    })
}

/// `D4`, `Q8`, or `[profile] p=<prime> c=<class> s=<s1>,…,<sc>`.
pub fn parse_profile(text: &str) -> Result<ActiveProfile, ParseError> {
    match text.trim() {
        "D4" | "d4" => return Ok(ActiveProfile::dihedral8()),
        "Q8" | "q8" => return Ok(ActiveProfile::quaternion8()),
        _ => {}
    }
    let mut cur = Cursor::new(text);
    cur.eat("profile");
    cur.expect("p")?;
    cur.expect("=")?;
    let (p_pos, p) = cur.number::<u64>()?;
    let p = prime_at(p_pos, p)?;
    let mut class = None;
    if cur.eat("c") {
        cur.expect("=")?;
        class = Some(cur.number::<usize>()?);
    }
    cur.expect("s")?;
    cur.expect("=")?;
    let s_pos = cur.pos;
    let mut s = vec![cur.number::<u32>()?.1];
    while cur.eat(",") {
        s.push(cur.number::<u32>()?.1);
    }
    cur.finish()?;
    if let Some((c_pos, c)) = class {
        if c != s.len() {
            return Err(ParseError::at(c_pos, format!("c={c} but {} exponents given", s.len())));
        }
    }
    ActiveProfile::new(p, s).map_err(|e| ParseError::at(s_pos, e.to_string()))
}

/// An explicit group expression, parsed but not yet built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Cyclic(u64),
    Dihedral8,
    Quaternion8,
    Trivial,
    Product(Box<GroupExpr>, Box<GroupExpr>),
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    /// Builds the group, failing if any intermediate group exceeds `size_limit`.
    pub fn build(&self, size_limit: u64) -> wreathlab::Result<FiniteGroup> {
        Ok(match self {
            GroupExpr::Cyclic(n) => {
                if *n > size_limit {
                    return Err(wreathlab::Error::SizeLimit {
                        required: BigUint::from(*n),
                        limit: size_limit,
                    });
                }
                FiniteGroup::cyclic(*n)?
            }
            GroupExpr::Dihedral8 => FiniteGroup::dihedral8(),
            GroupExpr::Quaternion8 => FiniteGroup::quaternion8(),
            GroupExpr::Trivial => FiniteGroup::trivial(),
            GroupExpr::Product(left, right) => {
                FiniteGroup::direct_product(&left.build(size_limit)?, &right.build(size_limit)?, size_limit)?
            }
            GroupExpr::Wreath(base, top) => {
                FiniteGroup::wreath_product(&base.build(size_limit)?, &top.build(size_limit)?, size_limit)?
            }
        })
    }
}

/// Explicit group expression: products bind tighter than `wr`, and `wr`
/// associates to the left.
pub fn parse_explicit_group(text: &str) -> Result<GroupExpr, ParseError> {
    let mut cur = Cursor::new(text);
    let group = wreath_expr(&mut cur)?;
    cur.finish()?;
    Ok(group)
}

fn wreath_expr(cur: &mut Cursor<'_>) -> Result<GroupExpr, ParseError> {
    let mut group = product_expr(cur)?;
    while cur.eat("wr") {
        group = GroupExpr::Wreath(Box::new(group), Box::new(product_expr(cur)?));
    }
    Ok(group)
}

fn product_expr(cur: &mut Cursor<'_>) -> Result<GroupExpr, ParseError> {
    let mut group = atom(cur)?;
    while cur.eat("x") {
        group = GroupExpr::Product(Box::new(group), Box::new(atom(cur)?));
    }
    Ok(group)
}

fn atom(cur: &mut Cursor<'_>) -> Result<GroupExpr, ParseError> {
    cur.skip_ws();
    let pos = cur.pos;
    if cur.eat("(") {
        let group = wreath_expr(cur)?;
        cur.expect(")")?;
        return Ok(group);
    }
    if cur.eat("D4") {
        return Ok(GroupExpr::Dihedral8);
    }
    if cur.eat("Q8") {
        return Ok(GroupExpr::Quaternion8);
    }
    if cur.eat("C") {
        let (n_pos, n) = cur.number::<u64>()?;
        if n == 0 {
            return Err(ParseError::at(n_pos, "cyclic group of order 0"));
        }
        return Ok(GroupExpr::Cyclic(n));
    }
    if cur.eat("1") {
        return Ok(GroupExpr::Trivial);
    }
    Err(ParseError::at(pos, "expected C<n>, D4, Q8, 1 or a parenthesized group"))
}
