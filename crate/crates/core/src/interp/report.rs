use rayon::prelude::*;
use serde::Serialize;

use crate::correspondence::encode_term;
use crate::rewrite::{max_coefficient, normalize_with, reduce_step_with, substitute_term, Order, DEFAULT_FUEL};
use crate::strategy::{Interface, Strategy};
use crate::syntax::{print_bag, print_sum, print_term, Context, SimpleType, Term, TermSum};
use crate::typing::typecheck_term;

use super::{interpret_bag, interpret_sum, interpret_term, nat_coeff, semantic_substitute, CorpusItem, InterpError, SubstInstance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub key: String,
    pub expected: String,
    pub actual: String,
}

/// Entries on which two strategies on the same interface differ.
pub fn compare(expected: &Strategy, actual: &Strategy) -> Vec<Mismatch> {
    let mut keys: Vec<_> = expected.keys().chain(actual.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let (e, a) = (expected.get(&k), actual.get(&k));
            (e != a).then(|| Mismatch { key: k.to_string(), expected: e.to_string(), actual: a.to_string() })
        })
        .collect()
}

/// `Σ c · encode(t)` over a sum of normal terms.
pub fn encode_sum(ctx: &Context, s: &TermSum, ty: &SimpleType) -> Result<Strategy, String> {
    let mut out = Strategy::zero(Interface::new(ctx.types(), vec![ty.clone()]));
    for (t, c) in s.iter() {
        let (iso, _) = encode_term(ctx, t).map_err(|e| e.to_string())?;
        out.add_entry(iso.key, nat_coeff(c));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub context: String,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub normal_form: String,
    pub summands: usize,
    pub max_coefficient: String,
    pub passed: bool,
    pub error: Option<String>,
    pub mismatches: Vec<Mismatch>,
}

/// `⟦t⟧` against the encodings of the summands of its normal form.
pub fn check_normal_form_correspondence(ctx: &Context, t: &Term) -> CorrespondenceReport {
    let mut r = CorrespondenceReport {
        context: ctx.to_string(),
        term: print_term(t),
        ty: String::new(),
        normal_form: String::new(),
        summands: 0,
        max_coefficient: "0".into(),
        passed: false,
        error: None,
        mismatches: vec![],
    };
    let ty = match typecheck_term(ctx, t) {
        Ok(ty) => ty,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.ty = ty.to_string();
    let nf = match normalize_with(&TermSum::single(t.clone()), DEFAULT_FUEL, Order::LeftmostOutermost) {
        Ok(nf) => nf,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.normal_form = print_sum(&nf);
    r.summands = nf.len();
    r.max_coefficient = max_coefficient(&nf).to_string();
    let expected = match encode_sum(ctx, &nf, &ty) {
        Ok(s) => s,
        Err(e) => {
            r.error = Some(e);
            return r;
        }
    };
    match interpret_term(ctx, t) {
        Ok(actual) => {
            r.mismatches = compare(&expected, &actual);
            r.passed = r.mismatches.is_empty();
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub context: String,
    pub sum: String,
    pub reducts_checked: usize,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
}

/// `⟦s⟧ = ⟦s'⟧` for the one-step reducts `s'` of `s` under both redex
/// orders.
pub fn check_invariance(ctx: &Context, s: &TermSum, ty: &SimpleType) -> Result<InvarianceReport, InterpError> {
    let before = interpret_sum(ctx, s, ty)?;
    let mut report = InvarianceReport {
        context: ctx.to_string(),
        sum: print_sum(s),
        reducts_checked: 0,
        passed: true,
        mismatches: vec![],
    };
    for order in [Order::LeftmostOutermost, Order::RightmostInnermost] {
        let mut reduct = TermSum::zero();
        let mut moved = false;
        for (t, c) in s.iter() {
            match reduce_step_with(t, order) {
                Ok(r) => {
                    moved = true;
                    reduct.add_assign(&r.scale(c));
                }
                Err(_) => reduct.add_entry(t.clone(), c.clone()),
            }
        }
        if !moved {
            continue;
        }
        report.reducts_checked += 1;
        let after = interpret_sum(ctx, &reduct, ty)?;
        report.mismatches.extend(compare(&before, &after));
    }
    report.passed = report.mismatches.is_empty();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub total: usize,
    pub passed: usize,
    pub with_repeated_summand: usize,
    pub normalizing_to_zero: usize,
    pub failures: Vec<CorrespondenceReport>,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn soundness(corpus: &[CorpusItem]) -> SoundnessReport {
    let reports: Vec<CorrespondenceReport> =
        corpus.par_iter().map(|it| check_normal_form_correspondence(&it.context, &it.term)).collect();
    SoundnessReport {
        total: reports.len(),
        passed: reports.iter().filter(|r| r.passed).count(),
        with_repeated_summand: reports.iter().filter(|r| r.max_coefficient.parse::<u64>().is_ok_and(|c| c >= 2)).count(),
        normalizing_to_zero: reports.iter().filter(|r| r.error.is_none() && r.summands == 0).count(),
        failures: reports.into_iter().filter(|r| !r.passed).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubstitutionReport {
    pub context: String,
    pub body: String,
    pub bag: String,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
}

/// `⟦s⟨b̄/x⟩⟧` against `⟦s⟧ ∘ ⟨id, Π⟦b̄⟧⟩`.
pub fn check_substitution(inst: &SubstInstance) -> Result<SubstitutionReport, InterpError> {
    let syntactic = substitute_term(&inst.body, &inst.var, &inst.bag);
    let lhs = interpret_sum(&inst.context, &syntactic, &inst.body_ty)?;
    let f = interpret_term(&inst.extended_context(), &inst.body)?;
    let g = interpret_bag(&inst.context, &inst.bag, &inst.var_ty)?;
    let rhs = semantic_substitute(&f, &g)?;
    let mismatches = compare(&lhs, &rhs);
    Ok(SubstitutionReport {
        context: inst.extended_context().to_string(),
        body: print_term(&inst.body),
        bag: print_bag(&inst.bag),
        passed: mismatches.is_empty(),
        mismatches,
    })
}
