//! Infix expressions such as `b*c`, `2*i*a*x0 + 2*r*x2` or
//! `-(a*x0^2 + x2^2)/(x0 + x1)^2`.

use dp4_core::field::{Constant, FieldDescriptor, FieldElement, Scalar};
use dp4_core::symbols::{FormPoly, RationalFunctionOnX};

/// Number of homogeneous coordinates.
pub const COORDS: usize = 5;

/// A quotient of polynomials in `x0..x4` over the field.
#[derive(Clone, Debug)]
pub struct Value {
    pub num: FormPoly,
    pub den: FormPoly,
}

impl Value {
    fn constant(c: FieldElement) -> Self {
        Value { num: FormPoly::constant(COORDS, c), den: FormPoly::one(COORDS) }
    }

    fn tidy(mut self) -> Self {
        if let Some(d) = self.den.constant_value() {
            if let Some(inv) = d.inv() {
                self.num = self.num.scale(&inv);
                self.den = FormPoly::one(COORDS);
            }
        }
        self
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Value { num: self.num.add(&o.num), den: self.den.clone() };
        }
        Value { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.tidy()
    }

    fn neg(&self) -> Self {
        Value { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, o: &Self) -> Self {
        Value { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.tidy()
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Value { num: self.den.clone(), den: self.num.clone() }.tidy())
    }

    /// The value as a field element, if it does not involve the coordinates.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        self.num.constant_value()?.div(&self.den.constant_value()?)
    }

    pub fn into_function(self) -> Result<RationalFunctionOnX, String> {
        RationalFunctionOnX::new(self.num, self.den).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, String> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = s[start..i].parse::<i64>().map_err(|_| format!("number too large at column {}", start + 1))?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}' at column {}", i + 1));
        }
    }
    Ok(out)
}

/// What identifiers may appear.
pub struct Scope<'a> {
    pub field: &'a FieldDescriptor,
    pub coordinates: bool,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    scope: &'a Scope<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| c + 1).unwrap_or(0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, String> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v = v.add(&self.term()?);
            } else if self.eat('-') {
                v = v.add(&self.term()?.neg());
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Value, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v = v.mul(&self.unary()?);
            } else if self.eat('/') {
                let col = self.column();
                let d = self.unary()?;
                v = v.mul(&d.inv().ok_or_else(|| format!("division by zero at column {col}"))?);
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, String> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, String> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let col = self.column();
        let Some(Tok::Num(e)) = self.peek().cloned() else {
            return Err(format!("expected an integer exponent at column {col}"));
        };
        self.pos += 1;
        let e = u32::try_from(e).map_err(|_| format!("exponent too large at column {col}"))?;
        let mut acc = Value::constant(FieldElement::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        if negative {
            acc = acc.inv().ok_or_else(|| format!("zero to a negative power at column {col}"))?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value, String> {
        let col = self.column();
        let Some(tok) = self.peek().cloned() else {
            return Err("unexpected end of expression".into());
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Value::constant(FieldElement::from_i64(n))),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(format!("missing ')' at column {}", self.column()));
                }
                Ok(v)
            }
            Tok::Op(c) => Err(format!("unexpected '{c}' at column {col}")),
            Tok::Ident(name) => self.ident(&name, col),
        }
    }

    fn ident(&self, name: &str, col: usize) -> Result<Value, String> {
        let field = self.scope.field;
        if name == "i" {
            return Ok(Value::constant(FieldElement::constant(Constant::i())));
        }
        if let Some(k) = field.param_index(name) {
            return Ok(Value::constant(field.param(k)));
        }
        if let Some(ext) = &field.ext {
            if ext.name == name {
                return Ok(Value::constant(field.generator().map_err(|e| e.to_string())?));
            }
        }
        if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if !self.scope.coordinates {
                return Err(format!("coordinate {name} is not allowed here (column {col})"));
            }
            if k >= COORDS {
                return Err(format!("coordinate {name} out of range (column {col})"));
            }
            return Ok(Value { num: FormPoly::var(COORDS, k), den: FormPoly::one(COORDS) });
        }
        Err(format!("unknown name '{name}' at column {col}"))
    }
}

pub fn parse(s: &str, scope: &Scope<'_>) -> Result<Value, String> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0, scope };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at column {}", p.column()));
    }
    Ok(v)
}

/// A constant of the field.
pub fn parse_scalar(s: &str, field: &FieldDescriptor) -> Result<FieldElement, String> {
    let v = parse(s, &Scope { field, coordinates: false })?;
    v.as_scalar().ok_or_else(|| format!("'{s}' is not a field element"))
}

/// Splits on commas that are not inside parentheses.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dp4_core::field::{ConstantMode, RatFunc};

    fn field() -> FieldDescriptor {
        FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
            .with_extension("r", RatFunc::param(3, 0))
            .unwrap()
    }

    #[test]
    fn scalars() {
        let f = field();
        let bc = parse_scalar("b*c", &f).unwrap();
        assert_eq!(bc, f.param(1).mul(&f.param(2)));
        let r2 = parse_scalar("r^2 - a", &f).unwrap();
        assert!(r2.is_zero());
        let q = parse_scalar("-1/(b - 1)^2", &f).unwrap();
        let b1 = f.param(1).sub(&FieldElement::one());
        assert_eq!(q, b1.mul(&b1).inv().unwrap().neg());
        assert!(parse_scalar("x0", &f).is_err());
        assert!(parse_scalar("d", &f).unwrap_err().contains("unknown name"));
        assert!(parse_scalar("(a", &f).is_err());
    }

    #[test]
    fn forms() {
        let f = field();
        let scope = Scope { field: &f, coordinates: true };
        let v = parse("-(a*x0^2 + x2^2)/(x0 + x1)^2", &scope).unwrap().into_function().unwrap();
        assert_eq!(v.num().total_degree(), Some(2));
        assert!(parse("x0/x1^2", &scope).unwrap().into_function().is_err());
    }

    #[test]
    fn splitting() {
        assert_eq!(split_top("(a, b), c", ','), vec!["(a, b)", "c"]);
    }
}
