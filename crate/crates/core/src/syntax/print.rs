use std::collections::BTreeSet;

use super::{Bag, Head, Name, Seq, Term};

struct Printer {
    avoid: BTreeSet<Name>,
    env: Vec<String>,
    out: String,
}

impl Printer {
    fn new(free: Vec<Name>) -> Printer {
        Printer { avoid: free.into_iter().collect(), env: Vec::new(), out: String::new() }
    }

    fn fresh(&self, hint: &str) -> String {
        let mut name = hint.to_string();
        while self.avoid.contains(name.as_str()) || self.env.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(head, args) => {
                match head {
                    Head::Free(n) => self.out.push_str(n),
                    Head::Bound(i) => {
                        let i = *i as usize;
                        let name = if i < self.env.len() {
                            self.env[self.env.len() - 1 - i].clone()
                        } else {
                            format!("#{i}")
                        };
                        self.out.push_str(&name);
                    }
                }
                self.seq(args);
            }
            Term::Abs(hint, ty, body) => {
                let name = self.fresh(&hint.0);
                self.out.push('\\');
                self.out.push_str(&name);
                self.out.push(':');
                self.out.push_str(&ty.to_string());
                self.out.push_str(". ");
                self.env.push(name);
                self.term(body);
                self.env.pop();
            }
            Term::App(f, b) => {
                match f.as_ref() {
                    Term::App(..) => self.term(f),
                    _ => {
                        self.out.push('(');
                        self.term(f);
                        self.out.push(')');
                    }
                }
                self.out.push(' ');
                self.bag(b);
            }
        }
    }

    fn seq(&mut self, s: &Seq) {
        for b in s.items() {
            self.out.push(' ');
            self.bag(b);
        }
    }

    fn bag(&mut self, b: &Bag) {
        self.out.push('[');
        for (i, t) in b.elems().iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.term(t);
        }
        self.out.push(']');
    }
}

pub fn print_term(t: &Term) -> String {
    let mut p = Printer::new(t.free_names());
    p.term(t);
    p.out
}

pub fn print_bag(b: &Bag) -> String {
    let mut free = Vec::new();
    for t in b.elems() {
        free.extend(t.free_names());
    }
    let mut p = Printer::new(free);
    p.bag(b);
    p.out
}

pub fn print_seq(s: &Seq) -> String {
    let mut free = Vec::new();
    for b in s.items() {
        for t in b.elems() {
            free.extend(t.free_names());
        }
    }
    let mut p = Printer::new(free);
    for (i, b) in s.items().iter().enumerate() {
        if i > 0 {
            p.out.push(' ');
        }
        p.bag(b);
    }
    p.out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_term, SimpleType, Term};
    use super::*;

    #[test]
    fn prints_identity() {
        let t = Term::lam("x", SimpleType::Base, Term::var("x"));
        assert_eq!(print_term(&t), r"\x:o. x");
    }

    #[test]
    fn empty_bag() {
        assert_eq!(print_bag(&Bag::empty()), "[]");
    }

    #[test]
    fn shadowing_is_disambiguated() {
        let t = parse_term(r"\x:o. \x:o. x").unwrap();
        let s = print_term(&t);
        assert_eq!(s, r"\x:o. \x':o. x'");
        assert_eq!(parse_term(&s).unwrap(), t);
    }

    #[test]
    fn bound_name_clashing_with_free() {
        let t = Term::lam("y", SimpleType::Base, Term::apply_var("f", vec![Bag::new(vec![Term::var("y"), Term::var("x")])]));
        let t = Term::lam("x", SimpleType::Base, t);
        let s = print_term(&t);
        assert_eq!(parse_term(&s).unwrap(), t);
    }
}
