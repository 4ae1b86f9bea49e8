//! The structural equations of a resource category, stated on kernels.

use rayon::prelude::*;
use serde::Serialize;

use crate::syntax::SimpleType;

use super::{windowed_equal, Expr, Kernel, Strategy};

pub struct Law {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

fn law(name: &str, lhs: Expr, rhs: Expr) -> Law {
    Law { name: name.to_string(), lhs, rhs }
}

fn k(k: Kernel) -> Expr {
    Expr::ker(k)
}

fn t(a: Expr, b: Expr) -> Expr {
    Expr::tensor(a, b)
}

fn c(parts: Vec<Expr>) -> Expr {
    Expr::chain(parts)
}

fn zero_like(e: &Expr) -> Expr {
    Expr::fin(Strategy::zero(e.interface()))
}

/// Monoid, comonoid, bialgebra, pointed identity and monoidal
/// compatibility laws for the object `⟦a⟧`, with `⟦b⟧` as a second object.
pub fn algebraic_laws(a: &SimpleType, b: &SimpleType) -> Vec<Law> {
    let x = [a.clone()];
    let id = || k(Kernel::id(&x));
    let pid = || k(Kernel::pointed_id(&x));
    let delta = || k(Kernel::delta(&x, 2));
    let mu = || k(Kernel::mu(&x, 2));
    let eps = || k(Kernel::eps(&x));
    let eta = || k(Kernel::eta(&x));
    let gamma = || k(Kernel::swap(&x, &x));
    let id_i = || k(Kernel::id(&[]));
    let mut out = vec![
        law("id . id = id", c(vec![id(), id()]), id()),
        law("coassociativity", c(vec![t(delta(), id()), delta()]), c(vec![t(id(), delta()), delta()])),
        law("left counit", c(vec![t(eps(), id()), delta()]), id()),
        law("right counit", c(vec![t(id(), eps()), delta()]), id()),
        law("cocommutativity", c(vec![gamma(), delta()]), delta()),
        law("associativity", c(vec![mu(), t(mu(), id())]), c(vec![mu(), t(id(), mu())])),
        law("left unit", c(vec![mu(), t(eta(), id())]), id()),
        law("right unit", c(vec![mu(), t(id(), eta())]), id()),
        law("commutativity", c(vec![mu(), gamma()]), mu()),
        law(
            "delta . mu = g . d",
            c(vec![delta(), mu()]),
            c(vec![t(mu(), mu()), t(t(id(), gamma()), id()), t(delta(), delta())]),
        ),
        law("delta . eta = eta * eta", c(vec![delta(), eta()]), t(eta(), eta())),
        law("eps . mu = eps * eps", c(vec![eps(), mu()]), t(eps(), eps())),
        law("eps . eta = id_I", c(vec![eps(), eta()]), id_i()),
        law("pid . pid = pid", c(vec![pid(), pid()]), pid()),
        law(
            "delta . pid = pid * eta + eta * pid",
            c(vec![delta(), pid()]),
            Expr::sum(t(pid(), eta()), t(eta(), pid())),
        ),
        law(
            "pid . mu = pid * eps + eps * pid",
            c(vec![pid(), mu()]),
            Expr::sum(t(pid(), eps()), t(eps(), pid())),
        ),
    ];
    let l = c(vec![eps(), pid()]);
    let z = zero_like(&l);
    out.push(law("eps . pid = 0", l, z));
    let l = c(vec![pid(), eta()]);
    let z = zero_like(&l);
    out.push(law("pid . eta = 0", l, z));

    let ab = [a.clone(), b.clone()];
    let y = [b.clone()];
    out.push(law(
        "delta_(A*B) = (A * gamma * B) . (delta_A * delta_B)",
        k(Kernel::delta(&ab, 2)),
        c(vec![
            t(t(k(Kernel::id(&x)), k(Kernel::swap(&x, &y))), k(Kernel::id(&y))),
            t(k(Kernel::delta(&x, 2)), k(Kernel::delta(&y, 2))),
        ]),
    ));
    out.push(law("eps_(A*B) = eps_A * eps_B", k(Kernel::eps(&ab)), t(k(Kernel::eps(&x)), k(Kernel::eps(&y)))));
    out.push(law("eps_I = id_I", k(Kernel::eps(&[])), id_i()));
    out.push(law(
        "mu_(A*B) = (mu_A * mu_B) . (A * gamma * B)",
        k(Kernel::mu(&ab, 2)),
        c(vec![
            t(k(Kernel::mu(&x, 2)), k(Kernel::mu(&y, 2))),
            t(t(k(Kernel::id(&x)), k(Kernel::swap(&y, &x))), k(Kernel::id(&y))),
        ]),
    ));
    out.push(law("eta_(A*B) = eta_A * eta_B", k(Kernel::eta(&ab)), t(k(Kernel::eta(&x)), k(Kernel::eta(&y)))));
    out.push(law("eta_I = id_I", k(Kernel::eta(&[])), id_i()));
    out.push(law(
        "<pi_1, pi_2> = id",
        c(vec![t(k(Kernel::proj(&ab, 0)), k(Kernel::proj(&ab, 1))), k(Kernel::delta(&ab, 2))]),
        k(Kernel::id(&ab)),
    ));
    out
}

pub fn check_laws(laws: &[Law], window: usize) -> Vec<LawReport> {
    laws.par_iter()
        .map(|l| match windowed_equal(&l.lhs, &l.rhs, window) {
            Ok(None) => LawReport { name: l.name.clone(), passed: true, detail: None },
            Ok(Some(m)) => LawReport { name: l.name.clone(), passed: false, detail: Some(m.to_string()) },
            Err(e) => LawReport { name: l.name.clone(), passed: false, detail: Some(e.to_string()) },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_hold_on_the_base_type() {
        let laws = algebraic_laws(&SimpleType::Base, &SimpleType::Base);
        for r in check_laws(&laws, 3) {
            assert!(r.passed, "{}: {:?}", r.name, r.detail);
        }
    }
}
