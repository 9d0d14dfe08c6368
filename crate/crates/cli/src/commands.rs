//! Subcommand implementations and their report documents.
//!
//! Action and outcome indices in reports are 1-based.

use std::fs;
use std::path::Path;

use linear_contracts::contracts::{
    best_debt, best_linear, best_monotone, optimal_contract, single_payment_contract, solve_all_actions,
};
use linear_contracts::families::{audit_ratio, generate as generate_family, AuditReport, Family, FamilyParams};
use linear_contracts::lp::{is_implementable, CertificateKind, DualCertificate, PaymentOutcome};
use linear_contracts::robust::{
    linear_worst_case, sample_contracts, verify_theorem_4_1, AdversaryConfig, AdversaryMenu, ConstructionCase, Line,
    SampleCheck, TwoPoint,
};
use linear_contracts::{format_rational, to_decimal, Contract, ContractError, Instance, PreconditionKind, Rational};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::document::{AmbiguousDocument, InstanceDocument, Metadata};
use crate::{AuditArgs, CliError, FamilyArgs, GenerateArgs, Mode, Output, OutputArgs, RobustArgs, SolveArgs};

/// Exact value plus its decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub exact: String,
    pub decimal: String,
}

fn value(q: &Rational, precision: usize) -> Value {
    Value {
        exact: format_rational(q),
        decimal: to_decimal(q, precision),
    }
}

fn exact_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractView {
    pub payments: Vec<String>,
    pub payments_decimal: Vec<String>,
    pub positive_payments: usize,
    pub monotone: bool,
}

impl ContractView {
    fn new(contract: &Contract, precision: usize) -> Self {
        Self {
            payments: exact_all(contract.payments()),
            payments_decimal: contract.payments().iter().map(|t| to_decimal(t, precision)).collect(),
            positive_payments: contract.positive_count(),
            monotone: contract.is_monotone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateView {
    pub action: usize,
    pub kind: &'static str,
    pub lambdas: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mus: Option<Vec<String>>,
    pub mixture: Vec<String>,
    pub mixture_cost: String,
    pub action_cost: String,
    pub verified: bool,
}

impl CertificateView {
    pub fn new(instance: &Instance, cert: &DualCertificate) -> Self {
        Self {
            action: cert.action + 1,
            kind: match cert.kind {
                CertificateKind::NonImplementability => "non_implementability",
                CertificateKind::MonotoneNonImplementability => "monotone_non_implementability",
            },
            lambdas: exact_all(&cert.lambdas),
            mus: cert.mus.as_deref().map(exact_all),
            mixture: exact_all(&cert.mixture(instance)),
            mixture_cost: format_rational(&cert.mixture_cost(instance)),
            action_cost: format_rational(instance.cost(cert.action)),
            verified: cert.verify(instance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionLpView {
    pub action: usize,
    pub implementable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_payment: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payoff: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_objective: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateView>,
}

fn action_lp_view(instance: &Instance, action: usize, outcome: &PaymentOutcome, precision: usize) -> ActionLpView {
    match outcome {
        PaymentOutcome::Implemented(p) => ActionLpView {
            action: action + 1,
            implementable: true,
            expected_payment: Some(value(&p.expected_payment, precision)),
            payoff: Some(value(&p.target_payoff(instance), precision)),
            dual_objective: Some(format_rational(&p.duals.objective(instance, action))),
            certificate: None,
        },
        PaymentOutcome::NotImplementable(c) => ActionLpView {
            action: action + 1,
            implementable: false,
            expected_payment: None,
            payoff: None,
            dual_objective: None,
            certificate: Some(CertificateView::new(instance, c)),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionView {
    pub a1: bool,
    pub a2: bool,
    pub a3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub precision: usize,
    pub assumptions: AssumptionView,
    /// `None` when the agent opts out.
    pub action: Option<usize>,
    pub contract: ContractView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Value>,
    /// Lowest paid outcome of a debt contract.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub debt_k: Option<usize>,
    pub payoff: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_reward: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_payment: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_action: Option<Vec<ActionLpView>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(output: &OutputArgs, text: String) -> Result<Output, CliError> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Output::default())
        }
        None => Ok(Output {
            stdout: text,
            ..Output::default()
        }),
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("plain data serializes");
    s.push('\n');
    s
}

fn doc_name(metadata: &Option<Metadata>, path: &Path) -> Option<String> {
    metadata
        .as_ref()
        .and_then(|m| m.name.clone())
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Optimal => "optimal",
        Mode::Linear => "linear",
        Mode::Monotone => "monotone",
        Mode::Debt => "debt",
        Mode::SinglePayment => "single-payment",
    }
}

fn unique_costliest(instance: &Instance) -> Option<usize> {
    let costs = instance.costs();
    let top = costs.iter().max()?;
    let all: Vec<usize> = (0..instance.n()).filter(|&i| costs[i] == *top).collect();
    (all.len() == 1).then(|| all[0])
}

pub fn solve(args: &SolveArgs) -> Result<Output, CliError> {
    let doc = InstanceDocument::from_json(&read(&args.instance)?)?;
    let inst = doc.to_instance()?;
    let p = args.output.precision;
    let flags = inst.flags();

    let mut per_action = None;
    let mut alpha = None;
    let mut debt_k = None;
    let (action, contract, payoff) = match args.mode {
        Mode::Optimal | Mode::Monotone => {
            let monotone = args.mode == Mode::Monotone;
            let solves = solve_all_actions(&inst, monotone)?;
            let picked = if monotone {
                best_monotone(&inst)
            } else {
                optimal_contract(&inst)
            };
            let choice = match picked {
                Err(ContractError::NoImplementableAction) => {
                    return Err(CliError::NotImplementable {
                        message: "no action is implementable".into(),
                        certificates: solves
                            .iter()
                            .filter_map(PaymentOutcome::certificate)
                            .map(|c| CertificateView::new(&inst, c))
                            .collect(),
                    })
                }
                other => other?,
            };
            per_action = Some(
                solves
                    .iter()
                    .enumerate()
                    .map(|(a, s)| action_lp_view(&inst, a, s, p))
                    .collect(),
            );
            (Some(choice.action), choice.contract, choice.payoff)
        }
        Mode::Linear => {
            let lin = best_linear(&inst)?;
            alpha = Some(value(&lin.alpha, p));
            (lin.action, inst.linear_contract(&lin.alpha), lin.payoff)
        }
        Mode::Debt => {
            let d = best_debt(&inst)?;
            alpha = Some(value(&d.alpha, p));
            debt_k = Some(d.cut + 1);
            (d.action, d.contract, d.payoff)
        }
        Mode::SinglePayment => {
            let contract = match single_payment_contract(&inst) {
                Err(ContractError::PreconditionFailed(PreconditionKind::NotImplementable)) => {
                    let certificates = unique_costliest(&inst)
                        .map(|a| is_implementable(&inst, a))
                        .transpose()
                        .map_err(ContractError::from)?
                        .and_then(|(_, c)| c)
                        .map(|c| vec![CertificateView::new(&inst, &c)])
                        .unwrap_or_default();
                    return Err(CliError::NotImplementable {
                        message: "the highest-cost action is not implementable".into(),
                        certificates,
                    });
                }
                other => other?,
            };
            let br = inst.best_response(&contract);
            (br.choice.action(), contract, br.principal_payoff)
        }
    };

    let report = SolveReport {
        mode: mode_name(args.mode),
        instance: doc_name(&doc.metadata, &args.instance),
        precision: p,
        assumptions: AssumptionView {
            a1: flags.a1,
            a2: flags.a2,
            a3: flags.a3,
        },
        action: action.map(|a| a + 1),
        expected_reward: action.map(|a| value(&inst.expected_reward(a), p)),
        expected_payment: action.map(|a| value(&inst.expected_payment(a, &contract), p)),
        contract: ContractView::new(&contract, p),
        alpha,
        debt_k,
        payoff: value(&payoff, p),
        per_action,
    };
    emit(&args.output, to_json(&report))
}

fn family_of(args: &FamilyArgs) -> Result<Family, CliError> {
    let name = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("--family is required".into()))?;
    Ok(name.parse()?)
}

fn params(family: Family, args: &FamilyArgs, n: usize, m: usize, seed: u64) -> FamilyParams {
    FamilyParams {
        family,
        n,
        m,
        eps: args.eps.clone(),
        delta: args.delta.clone(),
        gamma: args.gamma.clone(),
        seed,
    }
}

/// Compact identifier listing the parameters the family actually uses.
pub fn family_label(p: &FamilyParams) -> String {
    let e = format_rational(&p.eps);
    let d = format_rational(&p.delta);
    let g = format_rational(&p.gamma);
    match p.family {
        Family::Thm52 => format!("thm52:n={}:eps={e}", p.n),
        Family::AppendixE => format!("appendixE:n={}:eps={e}:delta={d}", p.n),
        Family::AppendixF => format!("appendixF:n={}:eps={e}:delta={d}:gamma={g}", p.n),
        Family::RandomSpanning => format!("random-spanning:n={}:m={}:seed={}", p.n, p.m, p.seed),
        f => f.name().to_string(),
    }
}

pub fn generate(args: &GenerateArgs) -> Result<Output, CliError> {
    let family = family_of(&args.family)?;
    let p = params(family, &args.family, args.n, args.m, args.family.seed);
    let inst = generate_family(&p)?;
    let metadata = Metadata {
        name: Some(family_label(&p)),
        source: Some("lincon generate".into()),
    };
    emit(
        &args.output,
        InstanceDocument::from_instance(&inst, Some(metadata)).to_json(),
    )
}

pub const AUDIT_HEADER: [&str; 15] = [
    "instance",
    "n",
    "m",
    "N",
    "K",
    "L",
    "opt",
    "alg_linear",
    "alg_monotone",
    "rho",
    "le_N",
    "le_2K",
    "le_4L",
    "le_welfare",
    "sparse_ok",
];

fn check_cell(c: Option<bool>) -> String {
    match c {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "n/a",
    }
    .to_string()
}

fn rho_cell(rep: &AuditReport) -> String {
    match rep.ratio_or_one() {
        Some(r) => format_rational(&r),
        None if rep.linear_payoff.as_ref().is_some_and(Zero::is_zero) => "inf".into(),
        None => "n/a".into(),
    }
}

fn audit_row(id: &str, rep: &AuditReport) -> Vec<String> {
    let na = || "n/a".to_string();
    vec![
        id.to_string(),
        rep.n.to_string(),
        rep.m.to_string(),
        rep.big_n.map_or_else(na, |v| v.to_string()),
        rep.k.to_string(),
        rep.l.to_string(),
        format_rational(&rep.opt_payoff),
        rep.linear_payoff.as_ref().map_or_else(na, format_rational),
        format_rational(&rep.monotone_payoff),
        rho_cell(rep),
        check_cell(rep.checks.le_n),
        check_cell(rep.checks.le_2k),
        check_cell(rep.checks.le_4l),
        check_cell(Some(rep.checks.le_welfare)),
        check_cell(Some(rep.checks.sparse_ok)),
    ]
}

fn sweep(args: &AuditArgs, family: Family) -> Vec<FamilyParams> {
    let f = &args.family;
    match family {
        Family::Example11 | Family::Example12 | Family::ExampleD5 => vec![params(family, f, 0, 0, 0)],
        Family::RandomSpanning => {
            let mut out = Vec::new();
            for n in args.n.values() {
                for m in args.m.values() {
                    for s in 0..args.count {
                        out.push(params(family, f, n, m, f.seed + s));
                    }
                }
            }
            out
        }
        _ => args.n.values().map(|n| params(family, f, n, 0, f.seed)).collect(),
    }
}

#[derive(Debug, Default, Serialize)]
struct ReadingTally {
    checked: usize,
    failed: usize,
}

pub fn audit(args: &AuditArgs) -> Result<Output, CliError> {
    let items: Vec<(String, Instance)> = match &args.instance {
        Some(path) => {
            if args.family.family.is_some() {
                return Err(CliError::Usage("give an instance file or --family, not both".into()));
            }
            let doc = InstanceDocument::from_json(&read(path)?)?;
            let name = doc_name(&doc.metadata, path).unwrap_or_else(|| "instance".into());
            vec![(name, doc.to_instance()?)]
        }
        None => {
            if args.family.family.is_none() {
                return Err(CliError::Usage("audit needs an instance file or --family".into()));
            }
            let family = family_of(&args.family)?;
            sweep(args, family)
                .into_iter()
                .map(|p| Ok((family_label(&p), generate_family(&p)?)))
                .collect::<Result<_, CliError>>()?
        }
    };

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(AUDIT_HEADER).expect("in-memory write");
    let mut failed = Vec::new();
    let mut max_rho: Option<Rational> = None;
    let mut positive_reading = ReadingTally::default();
    let mut zero_reading = ReadingTally::default();
    for (id, inst) in &items {
        let rep = audit_ratio(inst)?;
        csv.write_record(audit_row(id, &rep)).expect("in-memory write");
        if !rep.checks.all_pass() {
            failed.push(id.clone());
        }
        if let Some(r) = &rep.rho {
            if max_rho.as_ref().is_none_or(|m| r > m) {
                max_rho = Some(r.clone());
            }
        }
        if let Some(ok) = rep.checks.le_4l {
            positive_reading.checked += 1;
            positive_reading.failed += usize::from(!ok);
        }
        if let (Some(lin), true) = (&rep.linear_payoff, rep.l_with_zero > 0) {
            zero_reading.checked += 1;
            let bound = Rational::from_integer((4 * rep.l_with_zero).into()) * lin;
            zero_reading.failed += usize::from(rep.opt_payoff > bound);
        }
    }
    let table = String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("utf-8 cells");

    let p = args.output.precision;
    let all_pass = failed.is_empty();
    let summary = json!({
        "instances": items.len(),
        "all_pass": all_pass,
        "failed": failed,
        "max_rho": max_rho.as_ref().map(|r| value(r, p)),
        "le_4L_readings": {
            "positive_cost_buckets": positive_reading,
            "with_zero_cost_bucket": zero_reading,
        },
    });
    let summary = to_json(&summary);
    let code = if all_pass {
        crate::EXIT_OK
    } else {
        crate::EXIT_CHECK_FAILED
    };
    let mut out = match &args.output.out {
        Some(_) => {
            emit(&args.output, table)?;
            Output {
                stdout: summary,
                ..Output::default()
            }
        }
        None => Output {
            stdout: table,
            stderr: summary,
            ..Output::default()
        },
    };
    out.code = code;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearView {
    pub alpha: Value,
    pub action: Option<usize>,
    pub payoff: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineView {
    pub intercept: String,
    pub slope: String,
}

impl From<&Line> for LineView {
    fn from(l: &Line) -> Self {
        Self {
            intercept: format_rational(&l.intercept),
            slope: format_rational(&l.slope),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoPointView {
    pub low: usize,
    pub high: usize,
    pub weight_high: String,
}

impl From<&TwoPoint> for TwoPointView {
    fn from(d: &TwoPoint) -> Self {
        Self {
            low: d.low + 1,
            high: d.high + 1,
            weight_high: format_rational(&d.weight),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceView {
    pub case: &'static str,
    pub pivot: Option<usize>,
    pub l1: LineView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<LineView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l3: Option<LineView>,
    pub affine_alpha0: String,
    pub affine_alpha1: String,
    pub distributions: Vec<TwoPointView>,
    pub affine_action: Option<usize>,
    pub affine_payoff: String,
    pub contract_action: Option<usize>,
    pub contract_payoff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleChecksView {
    pub linear_beats_adversary: bool,
    pub affine_dominates: bool,
    pub adversary_within_construction: bool,
    pub intercept_shift: bool,
    pub linear_beats_slope: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleView {
    pub payments: Vec<String>,
    pub adversary_payoff: Value,
    pub adversary_action: Option<usize>,
    pub adversary_distributions: Vec<TwoPointView>,
    pub checks: SampleChecksView,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceView>,
}

fn sample_view(s: &SampleCheck, precision: usize, trace: bool) -> SampleView {
    let c = &s.construction;
    SampleView {
        payments: exact_all(s.contract.payments()),
        adversary_payoff: value(&s.adversary.payoff, precision),
        adversary_action: s.adversary.choice.action().map(|a| a + 1),
        adversary_distributions: s.adversary.distributions.iter().map(TwoPointView::from).collect(),
        checks: SampleChecksView {
            linear_beats_adversary: s.linear_beats_adversary,
            affine_dominates: s.affine_dominates,
            adversary_within_construction: s.adversary_within_construction,
            intercept_shift: s.intercept_shift,
            linear_beats_slope: s.linear_beats_slope,
        },
        passed: s.passed(),
        trace: trace.then(|| TraceView {
            case: match c.case {
                ConstructionCase::Downward => "downward",
                ConstructionCase::Identity => "identity",
                ConstructionCase::Above => "above",
                ConstructionCase::Below => "below",
            },
            pivot: c.pivot.map(|j| j + 1),
            l1: (&c.l1).into(),
            l2: c.l2.as_ref().map(LineView::from),
            l3: c.l3.as_ref().map(LineView::from),
            affine_alpha0: format_rational(c.affine.alpha0()),
            affine_alpha1: format_rational(c.affine.alpha1()),
            distributions: c.distributions.iter().map(TwoPointView::from).collect(),
            affine_action: c.affine_response.choice.action().map(|a| a + 1),
            affine_payoff: format_rational(&c.affine_response.principal_payoff),
            contract_action: c.contract_response.choice.action().map(|a| a + 1),
            contract_payoff: format_rational(&c.contract_response.principal_payoff),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub linear_is_worst_case_optimal: bool,
    pub samples: usize,
    pub failures: usize,
    pub max_adversary_payoff: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RobustReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub precision: usize,
    pub linear_worst_case: LinearView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleView>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

pub fn robust(args: &RobustArgs) -> Result<Output, CliError> {
    let doc = AmbiguousDocument::from_json(&read(&args.instance)?)?;
    let amb = doc.to_ambiguous()?;
    let p = args.output.precision;
    let linear = linear_worst_case(&amb);
    let mut report = RobustReport {
        instance: doc_name(&doc.metadata, &args.instance),
        precision: p,
        linear_worst_case: LinearView {
            alpha: value(&linear.alpha, p),
            action: linear.action.map(|a| a + 1),
            payoff: value(&linear.payoff, p),
        },
        samples: None,
        verdict: None,
    };
    let mut code = crate::EXIT_OK;
    if args.samples > 0 {
        let config = AdversaryConfig {
            cap: args.cap,
            menu: AdversaryMenu::Full,
        };
        let contracts = sample_contracts(&amb, args.samples, args.seed);
        let checked = verify_theorem_4_1(&amb, &contracts, &config)?;
        let failures = checked.samples.iter().filter(|s| !s.passed()).count();
        let max_adv = checked
            .samples
            .iter()
            .map(|s| s.adversary.payoff.clone())
            .max()
            .unwrap_or_else(Rational::zero);
        report.samples = Some(checked.samples.iter().map(|s| sample_view(s, p, args.trace)).collect());
        report.verdict = Some(Verdict {
            linear_is_worst_case_optimal: failures == 0,
            samples: checked.samples.len(),
            failures,
            max_adversary_payoff: value(&max_adv, p),
        });
        if failures > 0 {
            code = crate::EXIT_CHECK_FAILED;
        }
    }
    let mut out = emit(&args.output, to_json(&report))?;
    out.code = code;
    Ok(out)
}
