//! The nine acceptance criteria, one line each.
//!
//! Run with `cargo test -p isog --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use isog::arena::{interpret_context, interpret_type, Arena};
use isog::causal::{
    enumerate_augmentations, enumerate_positions, splitting_count, sym_count, sym_count_by_enumeration, Augmentation,
    Configuration, IsoKey,
};
use isog::correspondence::{decode_term, encode_term, enumerate_normal_terms};
use isog::interp::{bag_laws, check_substitution, generate_corpus, generate_substitutions, interpret_term, soundness, small_types};
use isog::rewrite::{normalize_with, substitute_term, Order, DEFAULT_FUEL};
use isog::strategy::laws::{algebraic_laws, check_laws};
use isog::strategy::{evaluate, fuzz_interactions, Coeff, Demand, Expr, Interface, Kernel, Strategy};
use isog::syntax::{parse_context, parse_term, parse_type, print_sum, print_term, Bag, Context, SimpleType, Term, TermSum};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn criterion_1() -> Outcome {
    let t = parse_term(r"\f:o->o->o. f [x] [x]").unwrap();
    let bag = Bag::new(vec![Term::var("y"), Term::var("z")]);
    let got = substitute_term(&t, "x", &bag);
    let mut expected = TermSum::zero();
    for s in [r"\f:o->o->o. f [y] [z]", r"\f:o->o->o. f [z] [y]"] {
        expected.add_entry(parse_term(s).unwrap(), BigUint::from(1u32));
    }
    check(got == expected, || format!("got {}", print_sum(&got)))?;
    Ok(print_sum(&got))
}

fn criterion_2() -> Outcome {
    let corpus = generate_corpus(100, 7, 14);
    let mut summands = 0;
    for it in &corpus {
        let run = |o| normalize_with(&TermSum::single(it.term.clone()), DEFAULT_FUEL, o).map_err(|e| format!("{e}"));
        let a = run(Order::LeftmostOutermost)?;
        let b = run(Order::RightmostInnermost)?;
        check(a == b, || format!("orders disagree on {}", print_term(&it.term)))?;
        summands += a.len();
    }
    Ok(format!("{} terms, {summands} normal summands in total", corpus.len()))
}

/// The running example, event by event: the root question, the call to
/// `f`, two questions on its first argument answered by `x` each, one on
/// its second argument answered by a second call to `f`.
fn running_example() -> (Arena, Augmentation) {
    let a = interpret_type(&parse_type("((o->o)->(o->o)->o)->o").unwrap());
    let root = a.roots()[0];
    let f = a.children(root)[0];
    let (g1, g2) = (a.children(f)[0], a.children(f)[1]);
    let x1 = a.children(g1)[0];
    let q = Augmentation {
        display: vec![root, f, g1, g1, g2, x1, x1, f],
        static_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(0)],
        dyn_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(4)],
    };
    (a, q)
}

fn criterion_3() -> Outcome {
    let mut families: Vec<(Context, SimpleType, usize)> =
        small_types().into_iter().map(|t| (Context::new(), t, 12)).collect();
    for (c, n) in [("x:o", 12), ("f:o->o, x:o", 12), ("f:(o->o)->o, x:o", 12), ("f:o->o->o, x:o", 7)] {
        families.push((parse_context(c).unwrap(), SimpleType::Base, n));
    }
    let mut terms = 0;
    for (ctx, ty, n) in &families {
        let ts = enumerate_normal_terms(ctx, ty, *n);
        terms += ts.len();
        ts.par_iter().try_for_each(|t| {
            let (iso, found) = encode_term(ctx, t).map_err(|e| e.to_string())?;
            check(&found == ty, || format!("type {found} for {}", print_term(t)))?;
            let back = decode_term(ctx, ty, &iso.representative).map_err(|e| e.to_string())?;
            check(&back == t, || format!("{} decodes back to {}", print_term(t), print_term(&back)))
        })?;
    }
    let mut isos = 0;
    for c in ["x:o, y:o", "f:o->o, x:o", "f:(o->o)->o", "f:o->o->o, x:o", "f:((o->o)->o)->o", "g:o->o, f:(o->o)->o"] {
        let ctx = parse_context(c).unwrap();
        let arena = Arena::hom(&interpret_context(&ctx), &interpret_type(&SimpleType::Base));
        let all: Vec<(IsoKey, Augmentation)> = enumerate_augmentations(&arena, 10, true).into_iter().collect();
        isos += all.len();
        all.par_iter().try_for_each(|(key, q)| {
            let t = decode_term(&ctx, &SimpleType::Base, q).map_err(|e| e.to_string())?;
            let (iso, _) = encode_term(&ctx, &t).map_err(|e| e.to_string())?;
            check(&iso.key == key, || format!("{} re-encodes to a different isogmentation", print_term(&t)))
        })?;
    }
    let (arena, fig) = running_example();
    fig.validate(&arena).map_err(|e| e.to_string())?;
    let t = parse_term(r"\f:((o->o)->(o->o)->o). f [\x:o.x, \x:o.x] [\y:o. f [] []]").unwrap();
    let (iso, _) = encode_term(&Context::new(), &t).map_err(|e| e.to_string())?;
    check(iso.key == IsoKey::of(&fig), || "running example encodes to a different key".into())?;
    Ok(format!("{terms} terms, {isos} pointed isogmentations, running example matches"))
}

fn criterion_4() -> Outcome {
    let qq = Configuration { display: vec![0, 0], parent: vec![None, None] };
    let n = sym_count_by_enumeration(&qq);
    check(n == 2, || format!("|Sym(qq)| = {n}"))?;
    let mut arenas: Vec<Arena> = small_types().iter().map(interpret_type).collect();
    arenas.push(interpret_context(&parse_context("a:o, b:o->o").unwrap()));
    let (mut formula, mut splits) = (0, 0);
    for a in &arenas {
        let ps: Vec<Configuration> = enumerate_positions(a, 8).into_values().collect();
        for x in &ps {
            let e = sym_count_by_enumeration(x);
            check(BigUint::from(e) == sym_count(x), || format!("{e} symmetries enumerated, formula says {}", sym_count(x)))?;
            formula += 1;
        }
        for x in ps.iter().filter(|x| x.len() <= 4) {
            for y in ps.iter().filter(|y| x.len() + y.len() <= 8) {
                let z = Configuration::union_star(x, y);
                let lhs = sym_count_by_enumeration(&z);
                let rhs = splitting_count(&z, x, y) * sym_count_by_enumeration(x) * sym_count_by_enumeration(y);
                check(lhs == rhs, || format!("splitting: {lhs} against {rhs}"))?;
                splits += 1;
            }
        }
    }
    Ok(format!("|Sym(qq)| = 2, {formula} positions against the formula, {splits} splittings"))
}

fn criterion_5() -> Outcome {
    let r = fuzz_interactions(10_000, 2024, 10, 6);
    check(r.deadlocks == 0, || format!("{} deadlocks", r.deadlocks))?;
    check(r.unclassified_edges == 0, || format!("{} unclassified edges", r.unclassified_edges))?;
    check(r.max_arena <= 10, || format!("arena of {} nodes", r.max_arena))?;
    Ok(format!("{} interactions, largest arena {} nodes", r.interactions, r.max_arena))
}

fn random_strategy(iface: &Arc<Interface>, augs: &[Augmentation], rng: &mut ChaCha8Rng) -> Strategy {
    let k = rng.gen_range(1..=8.min(augs.len()));
    let entries = augs.choose_multiple(rng, k).map(|q| {
        let c = Coeff::ratio(rng.gen_range(1..6), rng.gen_range(1..4));
        (IsoKey::of(q), c)
    });
    Strategy::from_entries(iface.clone(), entries.collect::<Vec<_>>())
}

fn criterion_6() -> Outcome {
    let o = SimpleType::Base;
    let oo = SimpleType::arrow(o.clone(), o.clone());
    let objects = [vec![o.clone()], vec![oo.clone()], vec![o.clone(), o.clone()], vec![]];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pool = std::collections::BTreeMap::new();
    let mut augs_for = |l: &Vec<SimpleType>, r: &Vec<SimpleType>| {
        pool.entry((l.clone(), r.clone()))
            .or_insert_with(|| {
                let iface = Interface::new(l.clone(), r.clone());
                let augs: Vec<Augmentation> = enumerate_augmentations(&iface.arena, 4, false).into_values().collect();
                (iface, augs)
            })
            .clone()
    };
    let mut sigmas = Vec::new();
    for it in generate_corpus(20, 6, 10) {
        sigmas.push(interpret_term(&it.context, &it.term).map_err(|e| e.to_string())?);
    }
    for _ in 0..20 {
        let (l, r) = (objects.choose(&mut rng).unwrap(), objects.choose(&mut rng).unwrap());
        let (iface, augs) = augs_for(l, r);
        sigmas.push(random_strategy(&iface, &augs, &mut rng));
    }
    for s in &sigmas {
        let (l, r) = (&s.interface().left, &s.interface().right);
        for e in [
            Expr::comp(Expr::ker(Kernel::id(r)), Expr::fin(s.clone())),
            Expr::comp(Expr::fin(s.clone()), Expr::ker(Kernel::id(l))),
        ] {
            let got = evaluate(&e, &Demand::default()).map_err(|e| e.to_string())?;
            check(got == *s, || format!("identity law fails on {}", s.interface()))?;
        }
    }
    let mut nonzero = 0;
    for _ in 0..50 {
        let ts: Vec<&Vec<SimpleType>> = (0..4).map(|_| objects[..3].choose(&mut rng).unwrap()).collect();
        let (i1, a1) = augs_for(ts[0], ts[1]);
        let (i2, a2) = augs_for(ts[1], ts[2]);
        let (i3, a3) = augs_for(ts[2], ts[3]);
        let (s, t, u) = (random_strategy(&i1, &a1, &mut rng), random_strategy(&i2, &a2, &mut rng), random_strategy(&i3, &a3, &mut rng));
        let lhs = Strategy::compose(&u, &Strategy::compose(&t, &s));
        let rhs = Strategy::compose(&Strategy::compose(&u, &t), &s);
        check(lhs == rhs, || format!("associativity fails on {} ; {} ; {}", s.interface(), t.interface(), u.interface()))?;
        nonzero += usize::from(!lhs.is_zero());
    }
    Ok(format!("identities on {} strategies, 50 triples associate ({nonzero} non-zero)", sigmas.len()))
}

fn criterion_7() -> Outcome {
    let objs = ["o", "o->o", "(o->o)->o"].map(|s| parse_type(s).unwrap());
    let mut total = 0;
    for a in &objs {
        let mut laws = algebraic_laws(a, &SimpleType::Base);
        for b in &objs {
            laws.extend(bag_laws(a, b));
        }
        total += laws.len();
        if let Some(r) = check_laws(&laws, 6).into_iter().find(|r| !r.passed) {
            return Err(format!("on {a}: {} {}", r.name, r.detail.unwrap_or_default()));
        }
    }
    Ok(format!("{total} laws at window 6"))
}

fn criterion_8() -> Outcome {
    let r = soundness(&generate_corpus(500, 42, 14));
    if let Some(f) = r.failures.first() {
        return Err(format!("{} failures, first {} in {}", r.failures.len(), f.term, f.context));
    }
    check(r.total >= 500, || format!("only {} terms", r.total))?;
    check(r.with_repeated_summand >= 20, || format!("only {} with a repeated summand", r.with_repeated_summand))?;
    check(r.normalizing_to_zero >= 20, || format!("only {} normalizing to 0", r.normalizing_to_zero))?;
    Ok(format!(
        "{} terms, {} with a repeated summand, {} normalizing to 0",
        r.total, r.with_repeated_summand, r.normalizing_to_zero
    ))
}

fn criterion_9() -> Outcome {
    let insts = generate_substitutions(100, 42, 10);
    let mut zero = 0;
    for i in &insts {
        let r = check_substitution(i).map_err(|e| e.to_string())?;
        check(r.passed, || format!("{} with {} in {}", r.body, r.bag, r.context))?;
        zero += usize::from(substitute_term(&i.body, &i.var, &i.bag).is_zero());
    }
    Ok(format!("{} instances, {zero} substitute to 0", insts.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("substitution example", 1, criterion_1),
        ("confluence and normalization", 30, criterion_2),
        ("terms and isogmentations in bijection", 120, criterion_3),
        ("symmetry counting", 30, criterion_4),
        ("deadlock-free interaction", 120, criterion_5),
        ("category laws", 60, criterion_6),
        ("resource-category laws", 300, criterion_7),
        ("soundness", 600, criterion_8),
        ("semantic substitution", 300, criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took longer than {limit} s")),
            o => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {} {status} {name} [{:.2?} / {limit} s]: {detail}", i + 1, elapsed);
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
