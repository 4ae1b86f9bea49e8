//! Terms, bags, sequences and simple types of the resource calculus,
//! together with formal sums over them.
//!
//! Bound variables are stored as de Bruijn indices, so the derived
//! equality and ordering are already invariant under renaming of binders.
//! Binder names survive only as printing hints.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use parse::{parse_context, parse_term, parse_type, ParseError};
pub use print::{print_bag, print_seq, print_term};

pub type Name = Arc<str>;

/// Simple types over the single atom `o`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleType {
    Base,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    /// `A1 -> ... -> An -> o`.
    pub fn from_domains(domains: impl IntoIterator<Item = SimpleType>) -> SimpleType {
        let doms: Vec<SimpleType> = domains.into_iter().collect();
        doms.into_iter()
            .rev()
            .fold(SimpleType::Base, |acc, d| SimpleType::arrow(d, acc))
    }

    /// The list `A⃗` such that the type is `A⃗ -> o`.
    pub fn domains(&self) -> Vec<&SimpleType> {
        let mut out = Vec::new();
        let mut cur = self;
        while let SimpleType::Arrow(a, b) = cur {
            out.push(a.as_ref());
            cur = b;
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.domains().len()
    }

    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base)
    }

    /// Number of occurrences of `o`.
    pub fn atoms(&self) -> usize {
        match self {
            SimpleType::Base => 1,
            SimpleType::Arrow(a, b) => a.atoms() + b.atoms(),
        }
    }

    /// Strip `k` leading domains, returning them with the remaining codomain.
    pub fn split_domains(&self, k: usize) -> Option<(Vec<SimpleType>, SimpleType)> {
        let mut doms = Vec::new();
        let mut cur = self;
        for _ in 0..k {
            match cur {
                SimpleType::Arrow(a, b) => {
                    doms.push((**a).clone());
                    cur = b;
                }
                SimpleType::Base => return None,
            }
        }
        Some((doms, cur.clone()))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base => write!(f, "o"),
            SimpleType::Arrow(a, b) => {
                if a.is_base() {
                    write!(f, "o->{b}")
                } else {
                    write!(f, "({a})->{b}")
                }
            }
        }
    }
}

/// A binder name kept for display only. All hints compare equal.
#[derive(Clone, Debug)]
pub struct Hint(pub Name);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Hint {}
impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}
impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// Head of a variable occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    /// de Bruijn index, 0 being the innermost enclosing binder.
    Bound(u32),
    Free(Name),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Head, Seq),
    Abs(Hint, SimpleType, Box<Term>),
    App(Box<Term>, Bag),
}

/// Finite multiset of terms, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bag(Vec<Term>);

/// Finite list of bags.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seq(Vec<Bag>);

impl Bag {
    pub fn new(mut elems: Vec<Term>) -> Bag {
        elems.sort();
        Bag(elems)
    }
    pub fn empty() -> Bag {
        Bag(Vec::new())
    }
    pub fn singleton(t: Term) -> Bag {
        Bag(vec![t])
    }
    pub fn elems(&self) -> &[Term] {
        &self.0
    }
    pub fn into_elems(self) -> Vec<Term> {
        self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// Multiset union.
    pub fn union(&self, other: &Bag) -> Bag {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Bag::new(v)
    }
}

impl Seq {
    pub fn new(items: Vec<Bag>) -> Seq {
        Seq(items)
    }
    pub fn empty() -> Seq {
        Seq(Vec::new())
    }
    pub fn items(&self) -> &[Bag] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Term {
    /// Free variable with no arguments.
    pub fn var(name: &str) -> Term {
        Term::Var(Head::Free(name.into()), Seq::empty())
    }

    /// Free variable applied to a sequence of bags.
    pub fn apply_var(name: &str, args: Vec<Bag>) -> Term {
        Term::Var(Head::Free(name.into()), Seq::new(args))
    }

    /// `\name:ty. body`, binding the free occurrences of `name` in `body`.
    pub fn lam(name: &str, ty: SimpleType, body: Term) -> Term {
        Term::Abs(Hint(name.into()), ty, Box::new(body.close(name, 0)))
    }

    pub fn app(fun: Term, arg: Bag) -> Term {
        Term::App(Box::new(fun), arg)
    }

    fn close(self, name: &str, depth: u32) -> Term {
        match self {
            Term::Var(head, args) => {
                let head = match head {
                    Head::Free(n) if &*n == name => Head::Bound(depth),
                    h => h,
                };
                Term::Var(head, args.close(name, depth))
            }
            Term::Abs(h, ty, body) => Term::Abs(h, ty, Box::new(body.close(name, depth + 1))),
            Term::App(f, b) => Term::App(Box::new(f.close(name, depth)), b.close(name, depth)),
        }
    }

    /// True iff the term contains no application node.
    pub fn is_normal(&self) -> bool {
        match self {
            Term::Var(_, args) => args.is_normal(),
            Term::Abs(_, _, body) => body.is_normal(),
            Term::App(..) => false,
        }
    }

    /// Number of variable and abstraction nodes plus application nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_, args) => 1 + args.size(),
            Term::Abs(_, _, body) => 1 + body.size(),
            Term::App(f, b) => 1 + f.size() + b.size(),
        }
    }

    /// Number of variable occurrences.
    pub fn var_count(&self) -> usize {
        match self {
            Term::Var(_, args) => 1 + args.0.iter().map(Bag::var_count).sum::<usize>(),
            Term::Abs(_, _, body) => body.var_count(),
            Term::App(f, b) => f.var_count() + b.var_count(),
        }
    }

    pub fn free_names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(head, args) => {
                if let Head::Free(n) = head {
                    out.push(n.clone());
                }
                args.collect_free(out);
            }
            Term::Abs(_, _, body) => body.collect_free(out),
            Term::App(f, b) => {
                f.collect_free(out);
                b.collect_free(out);
            }
        }
    }

    /// Add `by` to every bound index `>= cutoff`.
    pub fn shift(&self, by: u32, cutoff: u32) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Var(head, args) => {
                let head = match head {
                    Head::Bound(i) if *i >= cutoff => Head::Bound(i + by),
                    h => h.clone(),
                };
                Term::Var(head, args.shift(by, cutoff))
            }
            Term::Abs(h, ty, body) => {
                Term::Abs(h.clone(), ty.clone(), Box::new(body.shift(by, cutoff + 1)))
            }
            Term::App(f, b) => Term::App(Box::new(f.shift(by, cutoff)), b.shift(by, cutoff)),
        }
    }
}

impl Bag {
    fn close(self, name: &str, depth: u32) -> Bag {
        Bag::new(self.0.into_iter().map(|t| t.close(name, depth)).collect())
    }
    pub fn is_normal(&self) -> bool {
        self.0.iter().all(Term::is_normal)
    }
    pub fn size(&self) -> usize {
        self.0.iter().map(Term::size).sum()
    }
    pub fn var_count(&self) -> usize {
        self.0.iter().map(Term::var_count).sum()
    }
    fn collect_free(&self, out: &mut Vec<Name>) {
        for t in &self.0 {
            t.collect_free(out);
        }
    }
    pub fn shift(&self, by: u32, cutoff: u32) -> Bag {
        Bag::new(self.0.iter().map(|t| t.shift(by, cutoff)).collect())
    }
}

impl Seq {
    fn close(self, name: &str, depth: u32) -> Seq {
        Seq(self.0.into_iter().map(|b| b.close(name, depth)).collect())
    }
    pub fn is_normal(&self) -> bool {
        self.0.iter().all(Bag::is_normal)
    }
    pub fn size(&self) -> usize {
        self.0.iter().map(Bag::size).sum()
    }
    fn collect_free(&self, out: &mut Vec<Name>) {
        for b in &self.0 {
            b.collect_free(out);
        }
    }
    pub fn shift(&self, by: u32, cutoff: u32) -> Seq {
        Seq(self.0.iter().map(|b| b.shift(by, cutoff)).collect())
    }
}

/// Formal finite sum with natural coefficients. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sum<T: Ord> {
    entries: BTreeMap<T, BigUint>,
}

pub type TermSum = Sum<Term>;
pub type BagSum = Sum<Bag>;
pub type SeqSum = Sum<Seq>;

impl<T: Ord> Default for Sum<T> {
    fn default() -> Self {
        Sum { entries: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> Sum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: T) -> Self {
        let mut s = Self::zero();
        s.add_entry(t, BigUint::one());
        s
    }

    pub fn add_entry(&mut self, t: T, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.entries.entry(t).or_insert_with(BigUint::zero) += c;
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (t, c) in &other.entries {
            self.add_entry(t.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn scale(&self, c: &BigUint) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Sum {
            entries: self.entries.iter().map(|(t, k)| (t.clone(), k * c)).collect(),
        }
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Sum<U> {
        let mut out = Sum::zero();
        for (t, c) in &self.entries {
            out.add_entry(f(t), c.clone());
        }
        out
    }

    /// Bilinear product: `(Σ a_i s_i) · (Σ b_j t_j) = Σ a_i b_j f(s_i, t_j)`.
    pub fn product<U: Ord + Clone, V: Ord + Clone>(
        &self,
        other: &Sum<U>,
        mut f: impl FnMut(&T, &U) -> V,
    ) -> Sum<V> {
        let mut out = Sum::zero();
        for (s, a) in &self.entries {
            for (t, b) in &other.entries {
                out.add_entry(f(s, t), a * b);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, t: &T) -> BigUint {
        self.entries.get(t).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &BigUint)> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> BTreeMap<T, BigUint> {
        self.entries
    }

    /// Pop the smallest entry.
    pub fn pop_first(&mut self) -> Option<(T, BigUint)> {
        self.entries.pop_first()
    }
}

impl<T: Ord + Clone> FromIterator<(T, BigUint)> for Sum<T> {
    fn from_iter<I: IntoIterator<Item = (T, BigUint)>>(iter: I) -> Self {
        let mut s = Sum::zero();
        for (t, c) in iter {
            s.add_entry(t, c);
        }
        s
    }
}

pub fn sum_add<T: Ord + Clone>(a: &Sum<T>, b: &Sum<T>) -> Sum<T> {
    a.add(b)
}

/// Render a term sum as `t1 + 2 * t2`, or `0` when empty.
pub fn print_sum(s: &TermSum) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = s
        .iter()
        .map(|(t, c)| {
            let body = match t {
                Term::Abs(..) => format!("({})", print_term(t)),
                _ => print_term(t),
            };
            if c.is_one() {
                body
            } else {
                format!("{c} * {body}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// Ordered typing context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    bindings: Vec<(Name, SimpleType)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Fails on a duplicate name.
    pub fn from_bindings(bindings: Vec<(Name, SimpleType)>) -> Result<Context, Name> {
        let mut ctx = Context::new();
        for (n, t) in bindings {
            if ctx.lookup(&n).is_some() {
                return Err(n);
            }
            ctx.bindings.push((n, t));
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: &str, ty: SimpleType) -> Result<(), Name> {
        if self.lookup(name).is_some() {
            return Err(name.into());
        }
        self.bindings.push((name.into(), ty));
        Ok(())
    }

    pub fn with(mut self, name: &str, ty: SimpleType) -> Context {
        self.push(name, ty).expect("duplicate context entry");
        self
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, &SimpleType)> {
        self.bindings
            .iter()
            .position(|(n, _)| &**n == name)
            .map(|i| (i, &self.bindings[i].1))
    }

    pub fn bindings(&self) -> &[(Name, SimpleType)] {
        &self.bindings
    }

    pub fn types(&self) -> Vec<SimpleType> {
        self.bindings.iter().map(|(_, t)| t.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        Ok(())
    }
}

/// A context extended by the binders crossed so far. Free names resolve
/// against the base context; bound indices count from the end.
#[derive(Clone, Debug)]
pub struct Scope {
    base: Context,
    bound: Vec<SimpleType>,
}

impl Scope {
    pub fn new(base: Context) -> Scope {
        Scope { base, bound: Vec::new() }
    }

    pub fn push(&mut self, ty: SimpleType) {
        self.bound.push(ty);
    }

    pub fn pop(&mut self) {
        self.bound.pop();
    }

    pub fn len(&self) -> usize {
        self.base.len() + self.bound.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position (in `Γ, bound...` order) and type of a head.
    pub fn resolve(&self, head: &Head) -> Option<(usize, &SimpleType)> {
        match head {
            Head::Free(n) => self.base.lookup(n),
            Head::Bound(i) => {
                let i = *i as usize;
                if i < self.bound.len() {
                    let pos = self.bound.len() - 1 - i;
                    Some((self.base.len() + pos, &self.bound[pos]))
                } else {
                    None
                }
            }
        }
    }

    /// Head addressing the component at `pos`.
    pub fn head_at(&self, pos: usize) -> Head {
        if pos < self.base.len() {
            Head::Free(self.base.bindings[pos].0.clone())
        } else {
            Head::Bound((self.len() - 1 - pos) as u32)
        }
    }

    pub fn types(&self) -> Vec<SimpleType> {
        let mut v = self.base.types();
        v.extend(self.bound.iter().cloned());
        v
    }

    pub fn type_at(&self, pos: usize) -> &SimpleType {
        if pos < self.base.len() {
            &self.base.bindings[pos].1
        } else {
            &self.bound[pos - self.base.len()]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bag_order_is_canonical() {
        let a = Bag::new(vec![Term::var("y"), Term::var("x")]);
        let b = Bag::new(vec![Term::var("x"), Term::var("y")]);
        assert_eq!(a, b);
    }

    #[test]
    fn alpha_equivalent_terms_are_equal() {
        let a = Term::lam("x", SimpleType::Base, Term::var("x"));
        let b = Term::lam("z", SimpleType::Base, Term::var("z"));
        assert_eq!(a, b);
        let c = Term::lam("z", SimpleType::Base, Term::var("x"));
        assert_ne!(a, c);
    }

    #[test]
    fn sum_unit_and_doubling() {
        let s = TermSum::single(Term::var("s"));
        let t = TermSum::single(Term::var("t"));
        let r = s.add(&t).add(&t);
        assert_eq!(r.coefficient(&Term::var("t")), BigUint::from(2u32));
        assert_eq!(s.add(&TermSum::zero()), s);
    }

    #[test]
    fn type_spine() {
        let t = SimpleType::from_domains(vec![
            SimpleType::arrow(SimpleType::Base, SimpleType::Base),
            SimpleType::Base,
        ]);
        assert_eq!(t.to_string(), "(o->o)->o->o");
        assert_eq!(t.arity(), 2);
        assert_eq!(t.atoms(), 4);
    }
}
