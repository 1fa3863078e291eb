//! Tiny expression language for the `real` subcommand:
//!
//! ```text
//! expr := NUMBER | "stream(" PATH ["," INTEGER] ")" | "const(" DIGIT "," BASE ")"
//!       | ("add" | "sub" | "mul") "(" expr "," expr ")" | "neg(" expr ")"
//!       | "exp(" expr "," NUMBER ")"
//! ```
//!
//! The second argument of `exp` bounds the magnitude of its first.
//!
//! NUMBER is anything `Rational` parses (`3`, `-2/9`, `0.125`).

use circlefree::exec::Budget;
use circlefree::reals::{digit_to_modulus, DigitStreamReal, ModulusReal, Rational};

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
    budget: Budget,
}

#[derive(Debug)]
pub struct ExprError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError(msg.into()))
}

impl<'a> Parser<'a> {
    pub fn parse(src: &'a str, budget: Budget) -> Result<ModulusReal, ExprError> {
        let mut p = Parser { src, pos: 0, budget };
        let x = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return err(format!("trailing input at column {}", p.pos + 1));
        }
        Ok(x)
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            err(format!("expected `{c}` at column {}", self.pos + 1))
        }
    }

    /// Characters up to the next delimiter.
    fn atom(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(['(', ')', ',']).unwrap_or(rest.len());
        self.pos += end;
        rest[..end].trim()
    }

    fn expr(&mut self) -> Result<ModulusReal, ExprError> {
        let word = self.atom();
        if !self.rest().starts_with('(') {
            return word
                .parse::<Rational>()
                .map(ModulusReal::from_rational)
                .map_err(|_| ExprError(format!("not a number: `{word}`")));
        }
        self.eat('(')?;
        let out = match word {
            "add" | "sub" | "mul" => {
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                match word {
                    "add" => a.add(&b),
                    "sub" => a.sub(&b),
                    _ => a.mul(&b),
                }
            }
            "neg" => self.expr()?.neg(),
            "exp" => {
                let x = self.expr()?;
                let bound = if self.rest().trim_start().starts_with(',') {
                    self.eat(',')?;
                    let b = self.atom();
                    Some(b.parse::<Rational>().map_err(|_| ExprError(format!("not a number: `{b}`")))?)
                } else {
                    None
                };
                x.exp(bound).map_err(|e| ExprError(e.to_string()))?
            }
            "stream" => {
                let path = self.atom().to_string();
                let mut integer = 0i64;
                if self.rest().trim_start().starts_with(',') {
                    self.eat(',')?;
                    integer = self.atom().parse().map_err(|_| ExprError("bad integer part".into()))?;
                }
                let src = std::fs::read_to_string(&path).map_err(|e| ExprError(format!("{path}: {e}")))?;
                let m = circlefree::parse_text(&src).map_err(|e| ExprError(format!("{path}: {e}")))?;
                digit_to_modulus(&DigitStreamReal::new(integer, m), &self.budget)
                    .map_err(|e| ExprError(e.to_string()))?
            }
            "const" => {
                let digit: u8 = self.atom().parse().map_err(|_| ExprError("bad digit".into()))?;
                self.eat(',')?;
                let base: u32 = self.atom().parse().map_err(|_| ExprError("bad base".into()))?;
                if base < 2 || digit as u32 >= base {
                    return err("digit must be below the base");
                }
                circlefree::reals::constant_digit_real(digit, base, &self.budget)
            }
            other => return err(format!("unknown function `{other}`")),
        };
        self.eat(')')?;
        Ok(out)
    }
}
