//! A small expression language for clopen sets and elements, and identity
//! files built from it.
//!
//! Elements: `phi`, `id`, names, `gammaU(C)`, `tauU(C)`, `sigmaU(C)`,
//! `phiU(C)`, products by juxtaposition or `*` (composed right to left),
//! powers `g^k`, `inv(g)`, commutators `[g, h] = g⁻¹h⁻¹gh`, parentheses.
//!
//! Clopen sets: cylinders `[ab.c]`, `X`, `empty`, `~C`, `C | D`, `C & D`,
//! `C - D`, `shift(C, k)` (the image under `φ^k`), `tile(a, i)` (position `i`
//! of a substitution image of `a`), names, parentheses.
//!
//! Identity files hold one statement per line:
//!
//! ```text
//! # comment
//! set A = [0.] | [1.0]
//! let s = sigmaU(A)
//! check involution: s^2 = id
//! shifted copy: phi s phi^-1 = sigmaU(shift(A, 1))
//! phi^2 s phi^-2 = sigmaU(shift(A, 2))
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::element::FullGroupElement;
use crate::error::{Error, Result};
use crate::generators::{check_equal, gamma_u, phi, sigma_u, tau_u};
use crate::ktheory::first_return;
use crate::report::CheckRecord;
use crate::subshift::{parse_dotted, tile_set, ClopenSet, SubshiftSystem};

/// Named sets and elements over one system.
#[derive(Clone, Debug)]
pub struct Env {
    pub sys: Arc<SubshiftSystem>,
    pub sets: BTreeMap<String, ClopenSet>,
    pub elements: BTreeMap<String, FullGroupElement>,
    /// Cap on first-return times for `phiU`.
    pub return_cap: usize,
}

impl Env {
    pub fn new(sys: &Arc<SubshiftSystem>) -> Self {
        Env {
            sys: sys.clone(),
            sets: BTreeMap::new(),
            elements: BTreeMap::new(),
            return_cap: 256,
        }
    }

    pub fn clopen(&self, src: &str) -> Result<ClopenSet> {
        let mut p = Parser::new(src, self);
        let c = p.clopen()?;
        p.finish()?;
        Ok(c)
    }

    pub fn element(&self, src: &str) -> Result<FullGroupElement> {
        let mut p = Parser::new(src, self);
        let g = p.product()?;
        p.finish()?;
        Ok(g)
    }

    pub fn define_set(&mut self, name: &str, src: &str) -> Result<()> {
        check_name(name)?;
        let c = self.clopen(src)?;
        self.sets.insert(name.to_string(), c);
        Ok(())
    }

    pub fn define_element(&mut self, name: &str, src: &str) -> Result<()> {
        check_name(name)?;
        let g = self.element(src)?;
        self.elements.insert(name.to_string(), g);
        Ok(())
    }

    /// Runs an identity file; definitions extend the environment.
    pub fn run_identities(&mut self, text: &str) -> Result<Vec<CheckRecord>> {
        let mut out = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos,
                    msg: format!("line {}: {msg}", lineno + 1),
                },
                other => other,
            };
            if let Some(rest) = line.strip_prefix("set ") {
                let (name, src) = split_definition(rest).map_err(at)?;
                self.define_set(name, src).map_err(at)?;
            } else if let Some(rest) = line.strip_prefix("let ") {
                let (name, src) = split_definition(rest).map_err(at)?;
                self.define_element(name, src).map_err(at)?;
            } else {
                let body = line.strip_prefix("check ").unwrap_or(line);
                // expressions never contain ':', so any prefix up to one names the check
                let (name, eq) = match body.split_once(':') {
                    Some((n, e)) if !n.trim().is_empty() => (n.trim().to_string(), e),
                    _ => (body.to_string(), body),
                };
                let (lhs, rhs) = eq.split_once('=').ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("line {}: expected `lhs = rhs`", lineno + 1),
                })?;
                let l = self.element(lhs).map_err(at)?;
                let r = self.element(rhs).map_err(at)?;
                out.push(check_equal(name, format!("line {}", lineno + 1), &l, &r)?);
            }
        }
        Ok(out)
    }
}

fn split_definition(s: &str) -> Result<(&str, &str)> {
    let (name, src) = s.split_once('=').ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "expected `name = expression`".into(),
    })?;
    Ok((name.trim(), src.trim()))
}

const RESERVED: [&str; 11] = [
    "phi", "id", "inv", "gammaU", "tauU", "sigmaU", "phiU", "X", "empty", "shift", "tile",
];

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_name(name: &str) -> Result<()> {
    if !is_ident(name) || RESERVED.contains(&name) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("{name:?} is not a usable name"),
        });
    }
    Ok(())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    env: &'a Env,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, env: &'a Env) -> Self {
        Parser { src, pos: 0, env }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err(format!("unexpected {:?}", self.rest()));
        }
        Ok(())
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphanumeric() || c == '_') || (i == 0 && c.is_ascii_digit())
            })
            .map_or(r.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&r[..len])
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.eat('(') {
            let k = self.int()?;
            self.expect(')')?;
            return Ok(k);
        }
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
            .map_or(r.len(), |(i, _)| i);
        match r[..len].parse() {
            Ok(k) => {
                self.pos += len;
                Ok(k)
            }
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    // elements -------------------------------------------------------------

    fn product(&mut self) -> Result<FullGroupElement> {
        let mut acc = self.power()?;
        loop {
            self.eat('*');
            match self.peek() {
                None | Some(')') | Some(',') | Some(']') | Some('=') => return Ok(acc),
                _ => {
                    let next = self.power()?;
                    acc = acc.compose(&next)?;
                }
            }
        }
    }

    fn power(&mut self) -> Result<FullGroupElement> {
        let g = self.atom()?;
        if self.eat('^') {
            let k = self.int()?;
            return g.pow(k);
        }
        Ok(g)
    }

    fn atom(&mut self) -> Result<FullGroupElement> {
        let sys = &self.env.sys;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let g = self.product()?;
                self.expect(')')?;
                Ok(g)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(',')?;
                let b = self.product()?;
                self.expect(']')?;
                FullGroupElement::commutator(&a, &b)
            }
            Some(_) => {
                let at = self.pos;
                let Some(name) = self.ident() else {
                    return self.err("expected an element");
                };
                match name {
                    "phi" => Ok(phi(sys)),
                    "id" => Ok(FullGroupElement::identity(sys)),
                    "inv" => {
                        self.expect('(')?;
                        let g = self.product()?;
                        self.expect(')')?;
                        Ok(g.inverse())
                    }
                    "gammaU" | "tauU" | "sigmaU" | "phiU" => {
                        self.expect('(')?;
                        let c = self.clopen()?;
                        self.expect(')')?;
                        match name {
                            "gammaU" => gamma_u(&c),
                            "tauU" => tau_u(&c),
                            "sigmaU" => sigma_u(&c),
                            _ => first_return(&c, self.env.return_cap),
                        }
                    }
                    _ => match self.env.elements.get(name) {
                        Some(g) => Ok(g.clone()),
                        None => {
                            self.pos = at;
                            self.err(format!("unknown element {name:?}"))
                        }
                    },
                }
            }
            None => self.err("unexpected end of input"),
        }
    }

    // clopen sets ----------------------------------------------------------

    fn clopen(&mut self) -> Result<ClopenSet> {
        let mut acc = self.clopen_meet()?;
        loop {
            if self.eat('|') {
                acc = acc.union(&self.clopen_meet()?)?;
            } else if self.eat('-') {
                acc = acc.difference(&self.clopen_meet()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn clopen_meet(&mut self) -> Result<ClopenSet> {
        let mut acc = self.clopen_atom()?;
        while self.eat('&') {
            acc = acc.intersect(&self.clopen_atom()?)?;
        }
        Ok(acc)
    }

    fn clopen_atom(&mut self) -> Result<ClopenSet> {
        let sys = &self.env.sys;
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                self.clopen_atom()?.complement()
            }
            Some('(') => {
                self.pos += 1;
                let c = self.clopen()?;
                self.expect(')')?;
                Ok(c)
            }
            Some('[') => {
                let at = self.pos;
                let Some(close) = self.rest().find(']') else {
                    return self.err("unclosed cylinder");
                };
                let inner = &self.rest()[1..close];
                let (w, start) = parse_dotted(sys, inner).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { pos: at, msg },
                    other => Error::Parse {
                        pos: at,
                        msg: other.to_string(),
                    },
                })?;
                self.pos += close + 1;
                ClopenSet::cylinder(sys, &w, start)
            }
            Some(_) => {
                let at = self.pos;
                let Some(name) = self.ident() else {
                    return self.err("expected a clopen set");
                };
                match name {
                    "X" => Ok(ClopenSet::full(sys)),
                    "empty" => Ok(ClopenSet::empty(sys)),
                    "shift" => {
                        self.expect('(')?;
                        let c = self.clopen()?;
                        self.expect(',')?;
                        let k = self.int()?;
                        self.expect(')')?;
                        Ok(c.shift(k))
                    }
                    "tile" => {
                        self.expect('(')?;
                        self.skip_ws();
                        let Some(ch) = self.rest().chars().next() else {
                            return self.err("expected a letter");
                        };
                        let Some(letter) = sys.alphabet().letter(ch) else {
                            return self.err(format!("{ch:?} is not a letter"));
                        };
                        self.pos += ch.len_utf8();
                        self.expect(',')?;
                        let i = self.int()?;
                        self.expect(')')?;
                        if i < 0 {
                            return self.err("tile position must be nonnegative");
                        }
                        tile_set(sys, letter, i as usize)
                    }
                    _ => match self.env.sets.get(name) {
                        Some(c) => Ok(c.clone()),
                        None => {
                            self.pos = at;
                            self.err(format!("unknown set {name:?}"))
                        }
                    },
                }
            }
            None => self.err("unexpected end of input"),
        }
    }
}
