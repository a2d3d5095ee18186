//! Integer expressions on the command line: `3^11-1`, `2*(41^11-1)`.
//!
//! Grammar: `sum := prod (('+'|'-') prod)*`, `prod := pow ('*' pow)*`,
//! `pow := atom ('^' pow)?`, `atom := digits | '(' sum ')'`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::CliError;

/// Results wider than this many bits are refused.
const MAX_BITS: u64 = 1 << 16;

pub fn parse_natural(src: &str) -> Result<BigUint, CliError> {
    let v = parse_integer(src)?;
    if v.is_negative() {
        return Err(CliError::Input(format!("{src} evaluates to a negative number")));
    }
    Ok(v.magnitude().clone())
}

pub fn parse_u64(src: &str) -> Result<u64, CliError> {
    parse_natural(src)?
        .to_u64()
        .ok_or_else(|| CliError::Input(format!("{src} does not fit in 64 bits")))
}

pub fn parse_integer(src: &str) -> Result<BigInt, CliError> {
    let tokens: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if tokens.is_empty() {
        return Err(CliError::Input("empty expression".into()));
    }
    let mut p = Parser { src, tokens, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> CliError {
        CliError::Input(format!("cannot parse {:?}: {what} at offset {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<BigInt, CliError> {
        let mut acc = self.prod()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.prod()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<BigInt, CliError> {
        let mut acc = self.pow()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc *= self.pow()?;
            self.check_size(&acc)?;
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<BigInt, CliError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.pow()?;
        let exp = exp.to_u32().ok_or_else(|| self.error("exponent out of range"))?;
        if base.bits().saturating_mul(exp as u64) > MAX_BITS {
            return Err(self.error("result too large"));
        }
        Ok(num_traits::Pow::pow(base, exp))
    }

    fn atom(&mut self) -> Result<BigInt, CliError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    self.pos += 1;
                }
                let digits: String = self.tokens[start..self.pos].iter().filter(|&&c| c != '_').collect();
                Ok(digits.parse().expect("ascii digits"))
            }
            _ => Err(self.error("expected a number or '('")),
        }
    }

    fn check_size(&self, v: &BigInt) -> Result<(), CliError> {
        if v.bits() > MAX_BITS {
            return Err(self.error("result too large"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        assert_eq!(parse_u64("24").unwrap(), 24);
        assert_eq!(parse_u64("3^11-1").unwrap(), 177146);
        assert_eq!(parse_u64("2^3^2").unwrap(), 512);
        assert_eq!(parse_u64("2*(5^3+1)").unwrap(), 252);
        assert_eq!(parse_u64("1_000_000").unwrap(), 1_000_000);
        assert_eq!(parse_natural("41^11").unwrap(), BigUint::from(41u64.pow(11)));
        assert!(parse_natural("1-2").is_err());
        assert!(parse_natural("2^").is_err());
        assert!(parse_natural("abc").is_err());
        assert!(parse_natural("(3").is_err());
        assert!(parse_natural("2^100000").is_err());
    }
}
