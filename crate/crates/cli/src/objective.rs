//! Objectives for `pairs optimize`: arithmetic in `k` and `l`.
//!
//! Grammar: `+ - * /`, unary minus, parentheses, numbers (`0.5`, `3/4` is
//! division), `max(a, b, ...)`, `min(...)`, and juxtaposition as
//! multiplication (`2k + l`). All arithmetic is in `f64`.

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    K,
    L,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(Fold, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fold {
    Max,
    Min,
}

impl Expr {
    pub fn eval(&self, k: f64, l: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::K => k,
            Expr::L => l,
            Expr::Neg(e) => -e.eval(k, l),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(k, l), b.eval(k, l));
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    _ => a / b,
                }
            }
            Expr::Call(f, args) => {
                let vals = args.iter().map(|e| e.eval(k, l));
                match f {
                    Fold::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                    Fold::Min => vals.fold(f64::INFINITY, f64::min),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| format!("bad number {text:?}"))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c @ ('+' | '-'))) => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    let c = *c;
                    self.pos += 1;
                    c
                }
                // juxtaposition
                Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('(')) => '*',
                _ => return Ok(lhs),
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "k" | "kappa" => Ok(Expr::K),
                "l" | "lambda" => Ok(Expr::L),
                "max" | "min" => {
                    let f = if name == "max" { Fold::Max } else { Fold::Min };
                    if !self.eat('(') {
                        return Err(format!("expected '(' after {name}"));
                    }
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return Err(format!("missing ')' after {name} arguments"));
                    }
                    Ok(Expr::Call(f, args))
                }
                _ => Err(format!("unknown name {name:?}: use k, l, max, min")),
            },
            Tok::Op(c) => Err(format!("unexpected {c:?}")),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, String> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in objective {s:?}"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str, k: f64, l: f64) -> f64 {
        parse(s).unwrap().eval(k, l)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(at("k+l", 0.25, 0.5), 0.75);
        assert_eq!(at("1/2*k", 4.0, 0.0), 2.0);
        assert_eq!(at("2k + 3(l - 1)", 1.0, 2.0), 5.0);
        assert_eq!(at("-k - -l", 1.0, 3.0), 2.0);
        assert_eq!(at("max(k, l, 0.9)", 0.1, 0.7), 0.9);
        assert_eq!(at("min(k,l)/2", 0.4, 0.6), 0.2);
        assert_eq!(at("kappa*lambda", 0.5, 0.5), 0.25);
    }

    #[test]
    fn rejects() {
        for s in ["", "k+", "(k", "x", "max k", "k $ l", "1..2"] {
            assert!(parse(s).is_err(), "{s}");
        }
    }
}
