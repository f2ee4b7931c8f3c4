//! Element expressions: products and powers of registered generators.
//!
//! ```text
//! expr  := term ('*' term)*
//! term  := atom ('^' int)?
//! atom  := '(' expr ')' | 'Id'
//!        | 'W(' word ',' slot [',' 'rev'] ')'
//!        | 'M(' W-atom (',' W-atom)* ')'        simultaneous word maps
//!        | 'LS(' n ',' m1 ',' m2 ')'
//!        | 'H(' int [',' 'stride=' k] [',' 'offset=' o] [',' 'line=' a '-' b] ')'
//!        | 'C(' 'a'i '->' word (',' 'a'j '->' word)* ')'
//! slot  := 'R'k'.'s | 'L'i'.'(0|1) | 'E'j
//! ```
//!
//! `g * f` means `g ∘ f`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::freegrp::Word;
use crate::{Error, Result};

/// An interval slot for a word map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// Sub-interval `sub` of ray `ray`; larger `sub` is farther out.
    Ray { ray: u32, sub: u32 },
    /// Start (`end = 0`) or end (`end = 1`) of loop `a_index`.
    Loop { index: i32, end: u8 },
    /// Spine segment from `v_j` to `v_{j+1}`; `E0` is `(w0, v1)`.
    Edge(i64),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Ray { ray, sub } => write!(f, "R{ray}.{sub}"),
            Slot::Loop { index, end } => write!(f, "L{index}.{end}"),
            Slot::Edge(j) => write!(f, "E{j}"),
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad slot '{s}'"));
        let s = s.trim();
        let (kind, rest) = s.split_at(s.find(|c: char| !c.is_ascii_alphabetic()).ok_or_else(bad)?);
        let pair = |rest: &str| -> Result<(i64, u32)> {
            let (a, b) = rest.split_once('.').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        };
        match kind {
            "R" => {
                let (k, sub) = pair(rest)?;
                Ok(Slot::Ray { ray: u32::try_from(k).map_err(|_| bad())?, sub })
            }
            "L" => {
                let (i, end) = pair(rest)?;
                if end > 1 {
                    return Err(bad());
                }
                Ok(Slot::Loop { index: i32::try_from(i).map_err(|_| bad())?, end: end as u8 })
            }
            "E" => Ok(Slot::Edge(rest.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// One word map `φ_(w, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMap {
    pub word: Word,
    pub slot: Slot,
    /// Orientation opposite to the standard one.
    pub reversed: bool,
}

/// Loop shift specification: positions `p ≡ offset (mod stride)` along the
/// line from arm `line.0` to arm `line.1` move by `stride · power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftSpec {
    pub power: i64,
    pub stride: u32,
    pub offset: u32,
    pub line: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Id,
    /// Word maps performed simultaneously on disjoint slots.
    Words(Vec<WordMap>),
    Swap { n: u32, m1: i64, m2: i64 },
    Shift(ShiftSpec),
    Core(BTreeMap<i32, Word>),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
}

impl Expr {
    pub fn word(word: Word, slot: Slot) -> Expr {
        Expr::Words(vec![WordMap { word, slot, reversed: false }])
    }

    pub fn product(items: Vec<Expr>) -> Expr {
        match items.len() {
            0 => Expr::Id,
            1 => items.into_iter().next().unwrap(),
            _ => Expr::Product(items),
        }
    }

    pub fn inverse(&self) -> Expr {
        Expr::Power(Box::new(self.clone()), -1)
    }
}

impl fmt::Display for WordMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({}, {}", self.word, self.slot)?;
        if self.reversed {
            f.write_str(", rev")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Id => f.write_str("Id"),
            Expr::Words(ws) if ws.len() == 1 => write!(f, "{}", ws[0]),
            Expr::Words(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "M({})", parts.join(", "))
            }
            Expr::Swap { n, m1, m2 } => write!(f, "LS({n},{m1},{m2})"),
            Expr::Shift(s) => write!(
                f,
                "H({:+}, stride={}, offset={}, line={}-{})",
                s.power, s.stride, s.offset, s.line.0, s.line.1
            ),
            Expr::Core(m) => {
                let parts: Vec<String> = m.iter().map(|(g, w)| format!("a{g} -> {w}")).collect();
                write!(f, "C({})", parts.join(", "))
            }
            Expr::Product(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|e| match e {
                        Expr::Product(_) => format!("({e})"),
                        _ => e.to_string(),
                    })
                    .collect();
                f.write_str(&parts.join(" * "))
            }
            Expr::Power(e, k) => match **e {
                Expr::Product(_) | Expr::Power(..) => write!(f, "({e})^{k}"),
                _ => write!(f, "{e}^{k}"),
            },
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in '{}'", self.pos, self.src))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{tok}'")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let r = self.rest();
        let mut end = 0;
        for (i, c) in r.char_indices() {
            if c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')) {
                end = i + c.len_utf8();
            } else {
                break;
            }
        }
        let v = r[..end].parse().map_err(|_| self.err("expected an integer"))?;
        self.pos += end;
        Ok(v)
    }

    /// Text up to the next `,` or `)` at this nesting level.
    fn field(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let end = r.find([',', ')']).unwrap_or(r.len());
        self.pos += end;
        r[..end].trim()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![self.term()?];
        while self.eat("*") {
            items.push(self.term()?);
        }
        Ok(Expr::product(items))
    }

    fn term(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.eat("^") {
            let k = self.int()?;
            return Ok(Expr::Power(Box::new(atom), k));
        }
        Ok(atom)
    }

    fn word_map(&mut self) -> Result<WordMap> {
        let word: Word = self.field().parse()?;
        self.expect(",")?;
        let slot: Slot = self.field().parse()?;
        let reversed = if self.eat(",") {
            match self.field() {
                "rev" => true,
                other => return Err(self.err(&format!("unknown flag '{other}'"))),
            }
        } else {
            false
        };
        self.expect(")")?;
        Ok(WordMap { word, slot, reversed })
    }

    fn atom(&mut self) -> Result<Expr> {
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("Id") {
            return Ok(Expr::Id);
        }
        if self.eat("W(") {
            return Ok(Expr::Words(vec![self.word_map()?]));
        }
        if self.eat("M(") {
            let mut maps = vec![];
            loop {
                self.expect("W(")?;
                maps.push(self.word_map()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            return Ok(Expr::Words(maps));
        }
        if self.eat("LS(") {
            let n = self.int()?;
            self.expect(",")?;
            let m1 = self.int()?;
            self.expect(",")?;
            let m2 = self.int()?;
            self.expect(")")?;
            let n = u32::try_from(n).map_err(|_| self.err("loop count must be non-negative"))?;
            return Ok(Expr::Swap { n, m1, m2 });
        }
        if self.eat("H(") {
            let power = self.int()?;
            let mut spec = ShiftSpec { power, stride: 1, offset: 0, line: (0, 1) };
            while self.eat(",") {
                let field = self.field();
                let (k, v) = field.split_once('=').ok_or_else(|| self.err("expected key=value"))?;
                let num = |v: &str| v.trim().parse::<u32>().map_err(|_| self.err("bad number"));
                match k.trim() {
                    "stride" => spec.stride = num(v)?,
                    "offset" => spec.offset = num(v)?,
                    "line" => {
                        let (a, b) = v.split_once('-').ok_or_else(|| self.err("line is a-b"))?;
                        spec.line = (num(a)?, num(b)?);
                    }
                    other => return Err(self.err(&format!("unknown shift key '{other}'"))),
                }
            }
            self.expect(")")?;
            return Ok(Expr::Shift(spec));
        }
        if self.eat("C(") {
            let mut images = BTreeMap::new();
            loop {
                self.expect("a")?;
                let g = self.int()?;
                let g = i32::try_from(g).map_err(|_| self.err("generator out of range"))?;
                self.expect("->")?;
                let w: Word = self.field().parse()?;
                if images.insert(g, w).is_some() {
                    return Err(self.err(&format!("a{g} given twice")));
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            return Ok(Expr::Core(images));
        }
        Err(self.err("expected an element atom"))
    }
}
