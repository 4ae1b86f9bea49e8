use thiserror::Error;

use super::{Bag, Context, Head, Hint, Name, Seq, SimpleType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    binders: Vec<Name>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0, binders: Vec::new() }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.src[self.pos..].char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return self.err("expected identifier"),
        }
        let mut end = self.src.len();
        for (i, c) in chars {
            if !(c.is_alphanumeric() || c == '_' || c == '\'') {
                end = self.pos + i;
                break;
            }
        }
        self.pos = end;
        Ok(self.src[start..end].into())
    }

    fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let dom = self.ty_atom()?;
        if self.eat("->") || self.eat("→") {
            let cod = self.ty()?;
            Ok(SimpleType::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self) -> Result<SimpleType, ParseError> {
        if self.eat("(") {
            let t = self.ty()?;
            self.expect(")")?;
            return Ok(t);
        }
        let save = self.pos;
        match self.ident() {
            Ok(n) if &*n == "o" => Ok(SimpleType::Base),
            _ => {
                self.pos = save;
                self.err("expected type")
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.eat("\\") || self.eat("λ") {
            let name = self.ident()?;
            self.expect(":")?;
            let ty = self.ty()?;
            self.expect(".")?;
            self.binders.push(name.clone());
            let body = self.term();
            self.binders.pop();
            return Ok(Term::Abs(Hint(name), ty, Box::new(body?)));
        }
        if self.eat("(") {
            let mut head = self.term()?;
            self.expect(")")?;
            while self.peek() == Some('[') {
                let b = self.bag()?;
                head = Term::App(Box::new(head), b);
            }
            return Ok(head);
        }
        let name = self.ident()?;
        let head = match self.binders.iter().rposition(|b| *b == name) {
            Some(i) => Head::Bound((self.binders.len() - 1 - i) as u32),
            None => Head::Free(name),
        };
        let mut args = Vec::new();
        while self.peek() == Some('[') {
            args.push(self.bag()?);
        }
        Ok(Term::Var(head, Seq::new(args)))
    }

    fn bag(&mut self) -> Result<Bag, ParseError> {
        self.expect("[")?;
        let mut elems = Vec::new();
        if self.eat("]") {
            return Ok(Bag::empty());
        }
        loop {
            elems.push(self.term()?);
            if self.eat(",") {
                continue;
            }
            self.expect("]")?;
            break;
        }
        Ok(Bag::new(elems))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<SimpleType, ParseError> {
    let mut p = Parser::new(src);
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// `x:T, y:U`. Entries may omit the name (`T, U`); such entries get
/// generated names `_0`, `_1`, ...
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(src);
    let mut ctx = Context::new();
    if p.at_end() {
        return Ok(ctx);
    }
    loop {
        let save = p.pos;
        let named = match p.ident() {
            Ok(n) if p.eat(":") => Some(n),
            _ => {
                p.pos = save;
                None
            }
        };
        let ty = p.ty()?;
        let name: Name = named.unwrap_or_else(|| format!("_{}", ctx.len()).into());
        if ctx.push(&name, ty).is_err() {
            return p.err(format!("duplicate context entry `{name}`"));
        }
        if !p.eat(",") {
            break;
        }
    }
    p.finish()?;
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let t = parse_term(r"\x:o. x").unwrap();
        assert_eq!(
            t,
            Term::Abs(Hint("x".into()), SimpleType::Base, Box::new(Term::Var(Head::Bound(0), Seq::empty())))
        );
    }

    #[test]
    fn unbalanced() {
        assert!(parse_term("x [y z").is_err());
        assert!(parse_term("x [y").is_err());
    }

    #[test]
    fn variable_takes_all_bags() {
        let t = parse_term("f [a] [] [b, c]").unwrap();
        match t {
            Term::Var(_, args) => assert_eq!(args.len(), 3),
            _ => panic!(),
        }
    }

    #[test]
    fn parenthesized_head_is_application() {
        let t = parse_term(r"(\x:o. x) [y] []").unwrap();
        assert!(matches!(t, Term::App(..)));
    }

    #[test]
    fn contexts() {
        let c = parse_context("x:o, f:o->o").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.lookup("f").unwrap().0, 1);
        assert!(parse_context("x:o, x:o").is_err());
        assert!(parse_context("").unwrap().is_empty());
        assert_eq!(parse_context("o, o->o").unwrap().len(), 2);
    }

    #[test]
    fn types_are_right_associative() {
        let t = parse_type("o -> o -> o").unwrap();
        assert_eq!(t.arity(), 2);
        let u = parse_type("(o -> o) -> o").unwrap();
        assert_eq!(u.arity(), 1);
    }
}
