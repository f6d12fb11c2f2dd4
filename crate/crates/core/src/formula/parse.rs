//! Recursive-descent parser for the ASCII formula grammar. Errors carry the
//! byte position where parsing stopped.
//!
//! ```text
//! formula := atom | "~" formula | "(" formula (("&"|"|") formula)+ ")"
//!          | "A" var "." formula | "E" var "." formula
//!          | "E<=" nat "[" var{","var} "]" "." formula
//! atom    := "R" nat "(" var{","var} ")" | var "=" var
//! var     := "v" nat
//! ```
//!
//! Mixing `&` and `|` inside one parenthesized group is a syntax error.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::Formula;

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let formula = p.formula()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(formula)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .text
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", want as char)))
        }
    }

    fn nat(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as usize))
                .ok_or(Error::Parse {
                    pos: start,
                    msg: "number too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(value)
    }

    fn var(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.peek() != Some(b'v') {
            return Err(self.err("expected a variable like v0"));
        }
        self.pos += 1;
        self.nat()
    }

    fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => self.group(),
            Some(b'A') => {
                self.pos += 1;
                let v = self.var()?;
                self.expect(b'.')?;
                Ok(Formula::forall(v, self.formula()?))
            }
            Some(b'E') => {
                self.pos += 1;
                if self.peek() == Some(b'<') {
                    self.pos += 1;
                    if self.peek() != Some(b'=') {
                        return Err(self.err("expected '=' after '<'"));
                    }
                    self.pos += 1;
                    self.counting()
                } else {
                    let v = self.var()?;
                    self.expect(b'.')?;
                    Ok(Formula::exists(v, self.formula()?))
                }
            }
            Some(b'R') => self.rel_atom(),
            Some(b'v') => {
                let a = self.var()?;
                self.expect(b'=')?;
                let b = self.var()?;
                Ok(Formula::Eq(a, b))
            }
            _ => Err(self.err("expected a formula")),
        }
    }

    fn group(&mut self) -> Result<Formula> {
        self.expect(b'(')?;
        let mut parts = vec![self.formula()?];
        self.skip_ws();
        let op = match self.peek() {
            Some(c @ (b'&' | b'|')) => {
                self.pos += 1;
                c
            }
            _ => return Err(self.err("expected '&' or '|' inside group")),
        };
        loop {
            parts.push(self.formula()?);
            self.skip_ws();
            match self.peek() {
                Some(c @ (b'&' | b'|')) => {
                    if c != op {
                        return Err(self.err("mixed '&' and '|' in one group; parenthesize"));
                    }
                    self.pos += 1;
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected '&', '|' or ')'")),
            }
        }
        Ok(if op == b'&' {
            Formula::And(parts)
        } else {
            Formula::Or(parts)
        })
    }

    fn counting(&mut self) -> Result<Formula> {
        self.skip_ws();
        let bound = self.nat()?;
        self.expect(b'[')?;
        let mut block = vec![self.var()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    block.push(self.var()?);
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ']' in variable block")),
            }
        }
        let distinct: BTreeSet<usize> = block.iter().copied().collect();
        if distinct.len() != block.len() {
            return Err(self.err("variable block entries must be distinct"));
        }
        self.expect(b'.')?;
        Ok(Formula::ExistsAtMost(
            bound,
            block,
            Box::new(self.formula()?),
        ))
    }

    fn rel_atom(&mut self) -> Result<Formula> {
        self.pos += 1; // caller saw 'R'
        let rel = self.nat()?;
        self.expect(b'(')?;
        let mut args = vec![self.var()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.var()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ')' in argument list")),
            }
        }
        Ok(Formula::Rel(rel, args))
    }
}

#[cfg(test)]
mod tests {
    use super::super::gen;
    use super::*;
    use crate::structure::Signature;
    use proptest::prelude::*;

    #[test]
    fn parses_the_irreflexivity_axiom() {
        let f = parse("A v0 . ~R0(v0,v0)").unwrap();
        assert_eq!(f, Formula::forall(0, Formula::not(Formula::rel(0, vec![0, 0]))));
    }

    #[test]
    fn parses_groups_and_counting() {
        let f = parse("(R0(v0,v1) & v0 = v1)").unwrap();
        assert_eq!(
            f,
            Formula::And(vec![Formula::rel(0, vec![0, 1]), Formula::Eq(0, 1)])
        );
        let g = parse("E<=2 [v1] . R0(v0,v1)").unwrap();
        assert_eq!(
            g,
            Formula::exists_at_most(2, vec![1], Formula::rel(0, vec![0, 1]))
        );
        let h = parse("E<=0 [v1,v2] . (R0(v1,v2) | v1 = v0)").unwrap();
        match h {
            Formula::ExistsAtMost(0, block, _) => assert_eq!(block, vec![1, 2]),
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn whitespace_is_flexible() {
        assert_eq!(
            parse("Av0.~R0(v0,v0)").unwrap(),
            parse("A v0 .  ~ R0( v0 , v0 )").unwrap()
        );
    }

    #[test]
    fn rejects_bad_input() {
        let mixed = parse("(v0 = v1 & v1 = v2 | v0 = v2)");
        assert!(matches!(mixed, Err(Error::Parse { .. })), "{mixed:?}");
        assert!(parse("").is_err());
        assert!(parse("(v0 = v1)").is_err(), "groups need two parts");
        assert!(parse("v0 = v1 junk").is_err());
        assert!(parse("E<=2 [v1,v1] . R0(v0,v1)").is_err(), "duplicate block");
        assert!(parse("R0()").is_err());
        assert!(parse("A x0 . v0 = v0").is_err());
        assert!(parse("(v0 = v1 &)").is_err());
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        match parse("A v0 , v0 = v0") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected: {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            let f = gen::random_formula(&mut rng, &sig, 4, 3);
            let text = f.to_string();
            prop_assert_eq!(parse(&text).unwrap(), f);
        }
    }
}
