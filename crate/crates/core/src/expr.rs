//! Small arithmetic expressions for coefficients in model files: integers,
//! fractions, named parameters and the extension generator `z`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Field, Value};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[st..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
    vars: &'a BTreeMap<String, Value>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in expression {:?}", self.src))
    }

    fn expr(&mut self) -> Result<Value> {
        let f = self.field;
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = f.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = f.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let f = self.field;
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = f.mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = f.div(&acc, &d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(self.field.neg(&v));
        }
        self.eat('+');
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u64::try_from(n).map_err(|_| self.err("exponent too large"))?
                }
                _ => return Err(self.err("expected an integer exponent")),
            };
            let p = self.field.pow(&base, e);
            return if neg { self.field.inv(&p) } else { Ok(p) };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.field.from_bigint(&n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = self.vars.get(&name) {
                    return Ok(v.clone());
                }
                if name == "z" {
                    return self
                        .field
                        .generator()
                        .ok_or_else(|| self.err("`z` needs an extension field"));
                }
                Err(self.err(&format!("unknown name `{name}`")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(v)
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

/// Evaluates `src` in `field` with the given variable bindings.
pub fn eval(src: &str, field: &Field, vars: &BTreeMap<String, Value>) -> Result<Value> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        field,
        vars,
        src,
    };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_parameters() {
        let q = Field::rationals();
        let mut vars = BTreeMap::new();
        vars.insert("mu".to_string(), q.from_i64(3));
        let v = eval("(2 - mu^2)*(mu + 1) + 1/4", &q, &vars).unwrap();
        assert_eq!(q.format_value(&v), "-111/4");
        assert_eq!(eval("-2^2", &q, &vars).unwrap(), q.from_i64(-4));
    }

    #[test]
    fn extension_generator() {
        let f = Field::finite(2, 4).unwrap();
        let v = eval("z^4 + z", &f, &BTreeMap::new()).unwrap();
        assert_eq!(v, f.one());
        assert!(eval("1/2", &f, &BTreeMap::new()).is_err());
    }

    #[test]
    fn rejects_garbage() {
        let q = Field::rationals();
        for s in ["", "1 +", "(1", "x", "2 3", "1.5"] {
            assert!(eval(s, &q, &BTreeMap::new()).is_err(), "{s}");
        }
    }
}
