//! End-to-end acceptance report.
//!
//! Prints one `criterion N: PASS|FAIL` line per criterion. Several criteria
//! are known not to hold for the published data; the test asserts that the
//! failing set is exactly that known set and that the engine itself never
//! fails, so a regression in either direction is caught.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use spincheck_core::builders::{
    build_general_scalar, build_hamiltonian, build_integral, printed_general_scalar, GeneralScalarSpec, IntegralId,
    PotentialSpec,
};
use spincheck_core::catalog::{
    gauge_checks, parse_radial, verify_all, Catalog, EntryReport, EpsChoice, Mode, Verdict, VerifyOptions,
};
use spincheck_core::determining::{golden_sets, match_equation, SpinBasis};
use spincheck_core::field::Gaussian;
use spincheck_core::spinalg::{basis_product, SpinLabel};
use spincheck_core::{Op, Rational, Scalar};

type C = Gaussian<Rational>;
type M4 = [[C; 4]; 4];

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

struct Line {
    number: u8,
    outcome: Outcome,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Line {
    fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    fn render(&self) -> String {
        let verdict = if self.outcome.pass && self.within_budget() { "PASS" } else { "FAIL" };
        let timing = match self.budget {
            Some(b) if self.elapsed > b => {
                format!("{:.2}s, over the {}s budget", self.elapsed.as_secs_f64(), b.as_secs())
            }
            Some(b) => format!("{:.2}s of {}s", self.elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", self.elapsed.as_secs_f64()),
        };
        format!("criterion {}: {verdict} ({timing}) {}", self.number, self.outcome.detail)
    }
}

fn timed(number: u8, budget: Option<u64>, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let outcome = f();
    Line { number, outcome, elapsed: start.elapsed(), budget: budget.map(Duration::from_secs) }
}

fn pauli(a: u8) -> [[C; 2]; 2] {
    let (o, z, i) = (C::from_i64(1), C::from_i64(0), C::i());
    match a {
        0 => [[o.clone(), z.clone()], [z, o]],
        1 => [[z.clone(), o.clone()], [o, z]],
        2 => [[z.clone(), -i.clone()], [i, z]],
        _ => [[o.clone(), z.clone()], [z, -o]],
    }
}

fn kron(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> M4 {
    std::array::from_fn(|row| std::array::from_fn(|col| &a[row / 2][col / 2] * &b[row % 2][col % 2]))
}

fn product(a: &M4, b: &M4) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).fold(C::from_i64(0), |acc, k| acc + &a[i][k] * &b[k][j])))
}

fn scaled(a: &M4, c: &C) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] * c))
}

fn pauli_realization() -> Outcome {
    let matrices: Vec<M4> = SpinLabel::all().map(|l| kron(&pauli(l.left), &pauli(l.right))).collect();
    let mut mismatches = 0;
    for a in SpinLabel::all() {
        for b in SpinLabel::all() {
            let (c, n) = basis_product(a, b);
            let phase = (0..n).fold(C::from_i64(1), |acc, _| acc * C::i());
            let expected = product(&matrices[a.index()], &matrices[b.index()]);
            if scaled(&matrices[c.index()], &phase) != expected {
                mismatches += 1;
            }
        }
    }
    Outcome::new(mismatches == 0, format!("{} of 256 basis products agree with 4x4 matrix products", 256 - mismatches))
}

fn symmetrizer_golden() -> Outcome {
    let built: Op = build_general_scalar(&GeneralScalarSpec::symbolic()).expect("symbolic weights are valid");
    let printed: Op = printed_general_scalar();
    if built == printed {
        return Outcome::new(true, "symmetrized operator equals the printed display");
    }
    let diff = built.sub(&printed);
    let mut orders = BTreeSet::new();
    let mut components = 0;
    let mut symbols = BTreeSet::new();
    for (d, m) in diff.terms() {
        orders.insert(d.iter().sum::<u8>());
        for (_, c) in m.iter().filter(|(_, c)| !c.is_zero()) {
            components += 1;
            symbols.extend(c.free_functions().into_iter().map(|f| f.to_string()));
        }
    }
    Outcome::new(
        false,
        format!(
            "symmetrized operator differs from the printed display in {components} spin components of derivative order {:?}, involving {}",
            orders,
            symbols.into_iter().collect::<Vec<_>>().join(", ")
        ),
    )
}

const TENSOR_MOMENTUM_FREE: &str = "f8' + f9'";
const SPIN_ORBIT_RELATION: &str = "r*f10*(2*V1 - 6*hbar*V5 + hbar*r*V5') + hbar*(f10' + (f5 + f6)*V5')";

fn determining_golden() -> Outcome {
    let sets = golden_sets();
    let third = sets.iter().find(|s| s.orders == [3]).expect("third-order golden set");
    let report = third.check::<Rational>(SpinBasis::Entries).expect("third-order system");
    let all_listed = report.matched() == report.matches.len();
    let exact = all_listed && report.system_size == report.matches.len();

    let second = sets
        .iter()
        .find(|s| s.orders == [2] && s.potentials.get("V4").is_some_and(|v| v == "0"))
        .expect("second-order golden set");
    let system = second.system::<Rational>(SpinBasis::Entries).expect("second-order system");
    let mut second_detail = Vec::new();
    let mut second_ok = true;
    for expr in [TENSOR_MOMENTUM_FREE, SPIN_ORBIT_RELATION] {
        let candidate: Scalar = parse_radial(expr).expect("golden expression parses");
        let found = match_equation(&candidate, &system).expect("candidate is radial");
        second_ok &= found;
        second_detail.push(format!("`{expr}` {}", if found { "matched" } else { "missing" }));
    }
    Outcome::new(
        exact && second_ok,
        format!(
            "third order: {} of {} displayed equations found, system has {} independent equations; second order: {}",
            report.matched(),
            report.matches.len(),
            report.system_size,
            second_detail.join(", ")
        ),
    )
}

fn verdict_counts(reports: &[EntryReport]) -> BTreeMap<Verdict, usize> {
    let mut counts = BTreeMap::new();
    for r in reports.iter().flat_map(|e| &e.reports) {
        *counts.entry(r.verdict).or_insert(0) += 1;
    }
    counts
}

fn failing_items(reports: &[EntryReport], verdict: Verdict) -> Vec<String> {
    let mut items: Vec<String> = reports
        .iter()
        .flat_map(|e| &e.reports)
        .filter(|r| r.verdict == verdict)
        .map(|r| format!("{}:{}", r.id, r.integral))
        .collect();
    items.dedup();
    items
}

fn options(mode: Mode) -> VerifyOptions {
    VerifyOptions { mode, eps: EpsChoice::Both, timing: false, ..VerifyOptions::default() }
}

fn theorem_verification(reports: &[EntryReport]) -> Outcome {
    let counts = verdict_counts(reports);
    let count = |v| counts.get(&v).copied().unwrap_or(0);
    let discrepant = failing_items(reports, Verdict::CatalogDiscrepancy);
    let pass = count(Verdict::CatalogDiscrepancy) + count(Verdict::EngineFailure) == 0;
    let mut detail = format!(
        "{} entries, {} checks: {} zero, {} flagged known discrepancies, {} unflagged discrepancies, {} engine failures",
        reports.len(),
        counts.values().sum::<usize>(),
        count(Verdict::Zero),
        count(Verdict::KnownDiscrepancy),
        count(Verdict::CatalogDiscrepancy),
        count(Verdict::EngineFailure)
    );
    if !discrepant.is_empty() {
        detail.push_str(&format!(" [{}]", discrepant.join(", ")));
    }
    Outcome::new(pass, detail)
}

fn gauge_sector(catalog: &Catalog) -> Outcome {
    let checks = gauge_checks(catalog, &options(Mode::Symbolic)).expect("gauge entries load");
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    Outcome::new(
        failed.is_empty(),
        format!("{} of {} gauge checks hold{}", checks.len() - failed.len(), checks.len(), if failed.is_empty() {
            String::new()
        } else {
            format!(" (failed: {})", failed.join(", "))
        }),
    )
}

fn trivial_integrals() -> Outcome {
    let h: Op = build_hamiltonian(&PotentialSpec::symbolic());
    let mut bad = Vec::new();
    for id in [IntegralId::TrivialId, IntegralId::TrivialSigma] {
        if !h.commutator(&build_integral(id)).is_zero() {
            bad.push(id.to_string());
        }
    }
    Outcome::new(bad.is_empty(), format!("identity and sigma1.sigma2 commute with H(V0..V5 symbolic){}", if bad.is_empty() {
        String::new()
    } else {
        format!(" except {}", bad.join(", "))
    }))
}

type PairKey = (String, String, Option<i64>);

fn verdict_map(reports: &[EntryReport]) -> BTreeMap<PairKey, Verdict> {
    reports
        .iter()
        .flat_map(|e| &e.reports)
        .map(|r| ((r.id.to_string(), r.integral.clone(), r.eps), r.verdict))
        .collect()
}

fn oracle_agreement(oracle: &[EntryReport], symbolic: &[EntryReport]) -> (Outcome, bool) {
    let counts = verdict_counts(oracle);
    let count = |v| counts.get(&v).copied().unwrap_or(0);
    let max_numeric_on_zero = oracle
        .iter()
        .flat_map(|e| &e.reports)
        .filter(|r| r.verdict == Verdict::Zero)
        .filter_map(|r| r.max_numeric)
        .fold(0.0f64, f64::max);
    let sym = verdict_map(symbolic);
    let orc = verdict_map(oracle);
    let disagreements: Vec<String> = orc
        .iter()
        .filter(|(k, v)| sym.get(*k) != Some(*v))
        .map(|((id, integral, eps), _)| format!("{id}:{integral}{}", eps.map(|e| format!("(eps={e})")).unwrap_or_default()))
        .collect();
    let agree = disagreements.is_empty() && orc.len() == sym.len();
    let pass = count(Verdict::Zero) == counts.values().sum::<usize>();
    let detail = format!(
        "{} pairs: {} exact zero fields (max numeric residual {:.1e}), {} nonzero; verdicts {} the symbolic path{}",
        counts.values().sum::<usize>(),
        count(Verdict::Zero),
        max_numeric_on_zero,
        counts.values().sum::<usize>() - count(Verdict::Zero),
        if agree { "agree with" } else { "disagree with" },
        if disagreements.is_empty() { String::new() } else { format!(" on {}", disagreements.join(", ")) }
    );
    (Outcome::new(pass, detail), agree)
}

fn property_suites() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for suite in common::suites() {
        match (suite.run)() {
            Ok(cases) => parts.push(format!("{} ({cases})", suite.name)),
            Err(e) => {
                pass = false;
                parts.push(format!("{} FAILED: {e}", suite.name));
            }
        }
    }
    Outcome::new(pass, parts.join(", "))
}

fn main() {
    let catalog = Catalog::embedded().expect("embedded catalog loads");
    let mut lines = Vec::new();

    lines.push(timed(1, Some(1), pauli_realization));
    lines.push(timed(2, Some(5), symmetrizer_golden));
    lines.push(timed(3, Some(30), determining_golden));

    let mut symbolic = Vec::new();
    lines.push(timed(4, Some(60), || {
        symbolic = verify_all(&catalog, &options(Mode::Symbolic)).expect("catalog verifies");
        theorem_verification(&symbolic)
    }));
    lines.push(timed(5, Some(10), || gauge_sector(&catalog)));
    lines.push(timed(6, None, trivial_integrals));

    let mut agree = false;
    lines.push(timed(7, Some(120), || {
        let oracle = verify_all(&catalog, &options(Mode::Oracle)).expect("catalog verifies");
        let (outcome, agreed) = oracle_agreement(&oracle, &symbolic);
        agree = agreed;
        outcome
    }));
    lines.push(timed(8, None, property_suites));

    for line in &lines {
        println!("{}", line.render());
    }

    let engine_failures: usize = symbolic.iter().flat_map(|e| &e.reports).filter(|r| r.verdict == Verdict::EngineFailure).count();
    assert_eq!(engine_failures, 0, "engine failures in the symbolic run");
    assert!(agree, "oracle and symbolic verdicts disagree");

    let failing: BTreeSet<u8> = lines.iter().filter(|l| !l.outcome.pass).map(|l| l.number).collect();
    let expected: BTreeSet<u8> = [2, 3, 4, 7].into();
    assert_eq!(failing, expected, "criteria failing on correctness");
    println!("acceptance: failing criteria match the expected set {expected:?}");
}
