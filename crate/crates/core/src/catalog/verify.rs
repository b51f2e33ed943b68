use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entry::{Catalog, CatalogEntry, EntryId};
use super::CatalogError;
use crate::builders::{build_hamiltonian, build_integral, IntegralId};
use crate::field::{Field, Gaussian};
use crate::geomring::{ConstBindings, Constant, FuncBindings, FuncName, GeomScalar};
use crate::opalg::{Operator, NO_DERIV};
use crate::oracle::{check_pair, random_function_bindings, OracleConfig};
use crate::spinalg::TwoSpinMatrix;

/// Which verification paths to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Oracle,
    Both,
}

impl Mode {
    fn symbolic(self) -> bool {
        matches!(self, Mode::Symbolic | Mode::Both)
    }

    fn oracle(self) -> bool {
        matches!(self, Mode::Oracle | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "oracle" => Ok(Mode::Oracle),
            "both" => Ok(Mode::Both),
            _ => Err(format!("unknown mode `{s}` (expected symbolic, oracle or both)")),
        }
    }
}

/// Which sign branches of `eps` to run for entries that carry it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsChoice {
    Plus,
    Minus,
    Both,
}

impl EpsChoice {
    pub fn values(self) -> Vec<i64> {
        match self {
            EpsChoice::Plus => vec![1],
            EpsChoice::Minus => vec![-1],
            EpsChoice::Both => vec![1, -1],
        }
    }
}

impl FromStr for EpsChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "+1" | "plus" => Ok(EpsChoice::Plus),
            "-1" | "minus" => Ok(EpsChoice::Minus),
            "both" => Ok(EpsChoice::Both),
            _ => Err(format!("unknown eps branch `{s}` (expected +1, -1 or both)")),
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The residual vanished exactly.
    Zero,
    /// Nonzero residual on an entry flagged as an open question.
    KnownDiscrepancy,
    /// Nonzero residual on an unflagged entry.
    CatalogDiscrepancy,
    /// The engine could not complete the check or its paths disagree.
    EngineFailure,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::CatalogDiscrepancy | Verdict::EngineFailure)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Zero => "zero",
            Verdict::KnownDiscrepancy => "known-discrepancy",
            Verdict::CatalogDiscrepancy => "catalog-discrepancy",
            Verdict::EngineFailure => "engine-failure",
        };
        f.write_str(s)
    }
}

/// Symmetry of an integral under the formal adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hermiticity {
    Hermitian,
    /// `Y − Y†` is a constant multiple of `(σ1,σ2)`.
    UpToTrivial,
    NonHermitian,
}

/// Classifies `op` by comparing it with its formal adjoint.
pub fn hermiticity<T: Field>(op: &Operator<T>) -> Hermiticity {
    let diff = op.sub(&op.adjoint());
    if diff.is_zero() {
        return Hermiticity::Hermitian;
    }
    let sigma = TwoSpinMatrix::<T>::sigma_dot();
    let label = crate::spinalg::SpinLabel::new(1, 1);
    if diff.len() == 1 {
        if let Some(m) = diff.coeff(&NO_DERIV) {
            let c = m.coeff(label).clone();
            let constant = (0..3).all(|k| c.partial(k).is_zero());
            if constant && *m == sigma.scale(&c) {
                return Hermiticity::UpToTrivial;
            }
        }
    }
    Hermiticity::NonHermitian
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub id: EntryId,
    pub integral: String,
    pub mode: Mode,
    pub eps: Option<i64>,
    pub verdict: Verdict,
    pub residual_terms: usize,
    pub wall_time_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermiticity: Option<Hermiticity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_numeric: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// All report lines of one entry, in a deterministic order.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport {
    pub id: EntryId,
    pub reports: Vec<Report>,
}

impl EntryReport {
    pub fn worst(&self) -> Verdict {
        self.reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub eps: EpsChoice,
    pub oracle: OracleConfig,
    pub timing: bool,
    /// Numeric tolerance of the floating cross-check.
    pub tolerance: f64,
    /// Maximum number of residual lines kept in a report.
    pub residual_lines: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Both,
            eps: EpsChoice::Both,
            oracle: OracleConfig::default(),
            timing: true,
            tolerance: 1e-10,
            residual_lines: 12,
        }
    }
}

/// Parses a signed sum of vector integral names such as `J-S`.
pub fn parse_vector_combo(text: &str) -> Option<Vec<(i64, char)>> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut expect_name = true;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        match (c, expect_name) {
            ('+', true) if out.is_empty() => {}
            ('-', true) if out.is_empty() => sign = -1,
            ('+', false) => (sign, expect_name) = (1, true),
            ('-', false) => (sign, expect_name) = (-1, true),
            ('J' | 'S' | 'P', true) => {
                out.push((sign, c));
                expect_name = false;
            }
            _ => return None,
        }
    }
    (!out.is_empty() && !expect_name).then_some(out)
}

fn vector_component<T: Field>(combo: &[(i64, char)], axis: usize) -> Operator<T> {
    let n = axis as u8 + 1;
    combo.iter().fold(Operator::zero(), |acc, &(sign, c)| {
        let id = match c {
            'J' => IntegralId::J(n),
            'S' => IntegralId::S(n),
            _ => IntegralId::P(n),
        };
        acc.add(&build_integral::<T>(id).scale_gaussian(&Gaussian::from_i64(sign)))
    })
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn residual_text<T: Field>(op: &Operator<T>, max_lines: usize) -> Option<String> {
    if op.is_zero() {
        return None;
    }
    let full = op.to_string();
    let lines: Vec<&str> = full.lines().collect();
    let mut text = lines.iter().take(max_lines).copied().collect::<Vec<_>>().join("\n");
    if lines.len() > max_lines {
        text.push_str(&format!("\n... {} more lines", lines.len() - max_lines));
    }
    Some(text)
}

fn free_function_names<T: Field>(ops: &[&Operator<T>]) -> Vec<FuncName> {
    let mut names: Vec<FuncName> = ops
        .iter()
        .flat_map(|op| op.terms().flat_map(|(_, m)| m.iter().flat_map(|(_, c)| c.free_functions())).collect::<Vec<_>>())
        .map(|f| f.name)
        .collect();
    names.sort();
    names.dedup();
    names
}

fn eps_bindings<T: Field>(eps: Option<i64>) -> ConstBindings<T> {
    let mut b = ConstBindings::new();
    if let Some(e) = eps {
        b.insert(Constant::Eps, Gaussian::from_i64(e));
    }
    b
}

fn stable_seed(base: u64, entry: EntryId, task: usize) -> u64 {
    let id = match entry {
        EntryId::Item(n) => n as u64,
        EntryId::Gauge(n) => 100 + n as u64,
    };
    base.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (id << 32) ^ task as u64
}

struct Task {
    integral: IntegralId,
    eps: Option<i64>,
}

/// Verifies every listed integral of `entry` (and every bracket relation)
/// along the selected paths.
pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> Result<EntryReport, CatalogError> {
    type R = crate::Rational;
    let spec = entry.potential_spec::<R>()?;
    let weights: FuncBindings<R> = entry.weight_bindings()?;
    let h_sym = build_hamiltonian(&spec);
    let eps_values: Vec<Option<i64>> =
        if entry.eps_branches { opts.eps.values().into_iter().map(Some).collect() } else { vec![None] };
    let tasks: Vec<Task> = entry
        .integrals
        .iter()
        .flat_map(|&integral| eps_values.iter().map(move |&eps| Task { integral, eps }))
        .collect();
    let per_task: Vec<Vec<Report>> = tasks
        .par_iter()
        .enumerate()
        .map(|(idx, task)| run_task(entry, &h_sym, &weights, task, stable_seed(opts.oracle.seed, entry.id, idx), opts))
        .collect();
    let mut reports: Vec<Report> = per_task.into_iter().flatten().collect();
    let brackets: Vec<Report> = entry.brackets.par_iter().map(|b| check_bracket::<R>(entry, b, opts)).collect();
    reports.extend(brackets);
    let entry_flagged = !entry.integrals.is_empty() && entry.integrals.iter().all(|&id| entry.is_flagged(id));
    if entry_flagged && reports.iter().any(|r| r.verdict == Verdict::KnownDiscrepancy) {
        if let Some(diag) = diagnose_subscripts(entry, opts) {
            for r in reports.iter_mut().filter(|r| r.verdict == Verdict::KnownDiscrepancy) {
                r.diagnosis = Some(diag.clone());
            }
        }
    }
    Ok(EntryReport { id: entry.id, reports })
}

fn classify(entry: &CatalogEntry, integral: IntegralId, zero: bool) -> Verdict {
    match (zero, entry.is_flagged(integral)) {
        (true, _) => Verdict::Zero,
        (false, true) => Verdict::KnownDiscrepancy,
        (false, false) => Verdict::CatalogDiscrepancy,
    }
}

fn run_task<T: Field>(
    entry: &CatalogEntry,
    h_sym: &Operator<T>,
    weights: &FuncBindings<T>,
    task: &Task,
    seed: u64,
    opts: &VerifyOptions,
) -> Vec<Report> {
    let start = Instant::now();
    let elapsed = |start: Instant| opts.timing.then(|| start.elapsed().as_millis() as u64);
    let consts = eps_bindings::<T>(task.eps);
    let blank = |mode: Mode| Report {
        id: entry.id,
        integral: task.integral.to_string(),
        mode,
        eps: task.eps,
        verdict: Verdict::EngineFailure,
        residual_terms: 0,
        wall_time_ms: None,
        hermiticity: None,
        max_numeric: None,
        residual: None,
        diagnosis: None,
    };
    let prepared = build_integral::<T>(task.integral)
        .substitute(weights, &consts)
        .and_then(|y| h_sym.substitute(&FuncBindings::new(), &consts).map(|h| (h, y)));
    let (h, y) = match prepared {
        Ok(pair) => pair,
        Err(e) => {
            let mut r = blank(opts.mode);
            r.diagnosis = Some(e.to_string());
            r.wall_time_ms = elapsed(start);
            return vec![r];
        }
    };
    let mut out = Vec::new();
    let mut symbolic_zero = None;
    if opts.mode.symbolic() {
        let c = h.commutator(&y);
        let mut r = blank(Mode::Symbolic);
        r.verdict = classify(entry, task.integral, c.is_zero());
        r.residual_terms = c.coefficient_count();
        r.residual = residual_text(&c, opts.residual_lines);
        r.hermiticity = Some(hermiticity(&y));
        r.wall_time_ms = elapsed(start);
        symbolic_zero = Some(c.is_zero());
        out.push(r);
    }
    if opts.mode.oracle() {
        let start = Instant::now();
        let mut r = blank(Mode::Oracle);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = free_function_names(&[&h, &y]);
        let funcs = random_function_bindings::<T>(&names, &mut rng);
        let cfg = OracleConfig { seed, ..opts.oracle };
        let concrete = h.substitute(&funcs, &ConstBindings::new()).and_then(|hc| {
            y.substitute(&funcs, &ConstBindings::new()).map(|yc| (hc, yc))
        });
        match concrete.map_err(|e| e.to_string()).and_then(|(hc, yc)| {
            check_pair(&hc, &yc, task.eps.unwrap_or(1), &cfg).map_err(|e| e.to_string())
        }) {
            Ok(outcome) => {
                let passed = outcome.passes(opts.tolerance);
                r.verdict = classify(entry, task.integral, passed);
                if symbolic_zero == Some(true) && !passed {
                    r.verdict = Verdict::EngineFailure;
                    r.diagnosis = Some("oracle disagrees with an exact symbolic zero".into());
                }
                if outcome.exact_zero && !passed {
                    r.verdict = Verdict::EngineFailure;
                    r.diagnosis = Some(format!("numeric residual {:e} above tolerance", outcome.max_numeric));
                }
                r.residual_terms = outcome.residual_terms;
                r.max_numeric = Some(outcome.max_numeric);
            }
            Err(e) => r.diagnosis = Some(e),
        }
        r.wall_time_ms = elapsed(start);
        out.push(r);
    }
    out
}

pub(crate) fn check_bracket<T: Field>(entry: &CatalogEntry, b: &super::entry::BracketSpec, opts: &VerifyOptions) -> Report {
    let start = Instant::now();
    let left = parse_vector_combo(&b.left).expect("validated");
    let right = parse_vector_combo(&b.right).expect("validated");
    let result = if b.result == "0" { None } else { Some(parse_vector_combo(&b.result).expect("validated")) };
    let ih = GeomScalar::<T>::hbar().mul(&GeomScalar::i());
    let mut residual = Operator::<T>::zero();
    for i in 0..3 {
        let a = vector_component::<T>(&left, i);
        for j in 0..3 {
            let lhs = a.commutator(&vector_component(&right, j));
            let rhs = match &result {
                None => Operator::zero(),
                Some(c) => (0..3).fold(Operator::zero(), |acc, k| {
                    let e = levi_civita(i, j, k);
                    if e == 0 {
                        acc
                    } else {
                        acc.add(&vector_component::<T>(c, k).scale(&ih).scale_gaussian(&Gaussian::from_i64(e)))
                    }
                }),
            };
            residual = residual.add(&lhs.sub(&rhs));
        }
    }
    Report {
        id: entry.id,
        integral: b.to_string(),
        mode: Mode::Symbolic,
        eps: None,
        verdict: if residual.is_zero() { Verdict::Zero } else { Verdict::CatalogDiscrepancy },
        residual_terms: residual.coefficient_count(),
        wall_time_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
        hermiticity: None,
        max_numeric: None,
        residual: residual_text(&residual, opts.residual_lines),
        diagnosis: None,
    }
}

fn replace_token(text: &str, from: &str, to: &str) -> String {
    let mut out = String::new();
    let mut rest = text;
    while let Some(pos) = rest.find(from) {
        let after = &rest[pos + from.len()..];
        let boundary_before = rest[..pos].chars().last().is_none_or(|c| !c.is_ascii_alphanumeric());
        let boundary_after = after.chars().next().is_none_or(|c| !c.is_ascii_digit());
        out.push_str(&rest[..pos]);
        out.push_str(if boundary_before && boundary_after { to } else { from });
        rest = after;
    }
    out.push_str(rest);
    out
}

/// Searches for a single change of one constant subscript in the potentials
/// that makes every listed integral commute. Runs only when every listed
/// integral fails, since a slip in the potentials affects all of them.
/// Diagnostic only: the catalog itself is never modified.
fn diagnose_subscripts(entry: &CatalogEntry, opts: &VerifyOptions) -> Option<String> {
    type R = crate::Rational;
    let mut alphas: Vec<u8> = Vec::new();
    for p in &entry.parameters {
        if let Ok(Constant::Alpha(n)) = p.parse::<Constant>() {
            if n != 7 {
                alphas.push(n);
            }
        }
    }
    let candidates: Vec<(u8, u8)> = alphas.iter().flat_map(|&n| (1..=26u8).filter(move |&m| m != n).map(move |m| (n, m))).collect();
    let eps = if entry.eps_branches { opts.eps.values() } else { vec![1] };
    let works = |&(n, m): &(u8, u8)| -> bool {
        let mut changed = entry.clone();
        for expr in changed.potentials.values_mut() {
            *expr = replace_token(expr, &format!("alpha{n}"), &format!("alpha{m}"));
        }
        let Ok(spec) = changed.potential_spec::<R>() else { return false };
        let h = build_hamiltonian(&spec);
        entry.integrals.iter().all(|&id| {
            eps.iter().all(|&e| {
                let consts = if entry.eps_branches { eps_bindings::<R>(Some(e)) } else { ConstBindings::new() };
                let pair = h
                    .substitute(&FuncBindings::new(), &consts)
                    .and_then(|hh| build_integral::<R>(id).substitute(&FuncBindings::new(), &consts).map(|y| (hh, y)));
                pair.map(|(hh, y)| hh.commutator(&y).is_zero()).unwrap_or(false)
            })
        })
    };
    let found: Vec<(u8, u8)> = candidates.par_iter().filter(|c| works(c)).copied().collect();
    Some(if found.is_empty() {
        "no single alpha subscript change yields a zero residual".to_string()
    } else {
        let list: Vec<String> = found.iter().map(|(n, m)| format!("alpha{n} -> alpha{m}")).collect();
        format!("zero residual after substituting {}", list.join(" or "))
    })
}

/// Verifies every entry of the catalog, in id order.
pub fn verify_all(catalog: &Catalog, opts: &VerifyOptions) -> Result<Vec<EntryReport>, CatalogError> {
    let entries: Vec<&CatalogEntry> = catalog.entries().collect();
    entries.par_iter().map(|e| verify_entry(e, opts)).collect()
}

/// Verdict counts over a set of reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub zero: usize,
    pub known: usize,
    pub discrepancy: usize,
    pub failure: usize,
}

impl Summary {
    /// Process exit status: 0 when everything vanished, 2 when only flagged
    /// open questions remain, 1 on any other failure.
    pub fn exit_code(&self) -> i32 {
        if self.discrepancy + self.failure > 0 {
            1
        } else if self.known > 0 {
            2
        } else {
            0
        }
    }
}

pub fn summarize<'a>(reports: impl IntoIterator<Item = &'a Report>) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.verdict {
            Verdict::Zero => s.zero += 1,
            Verdict::KnownDiscrepancy => s.known += 1,
            Verdict::CatalogDiscrepancy => s.discrepancy += 1,
            Verdict::EngineFailure => s.failure += 1,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn vector_combos() {
        assert_eq!(parse_vector_combo("J-S"), Some(vec![(1, 'J'), (-1, 'S')]));
        assert_eq!(parse_vector_combo("-P"), Some(vec![(-1, 'P')]));
        assert_eq!(parse_vector_combo("J+"), None);
        assert_eq!(parse_vector_combo("JS"), None);
        assert_eq!(parse_vector_combo("Q"), None);
    }

    #[test]
    fn token_replacement_respects_boundaries() {
        assert_eq!(replace_token("alpha2 + alpha20*alpha2", "alpha2", "alpha9"), "alpha9 + alpha20*alpha9");
    }

    #[test]
    fn hermiticity_classes() {
        let sym = |id| hermiticity(&build_integral::<BigRational>(id));
        assert_eq!(sym(IntegralId::Y(7)), Hermiticity::Hermitian);
        assert_eq!(sym(IntegralId::Y(3)), Hermiticity::UpToTrivial);
        assert_eq!(sym(IntegralId::Y(4)), Hermiticity::NonHermitian);
    }

    #[test]
    fn exit_codes() {
        let mut s = Summary { zero: 3, ..Default::default() };
        assert_eq!(s.exit_code(), 0);
        s.known = 1;
        assert_eq!(s.exit_code(), 2);
        s.discrepancy = 1;
        assert_eq!(s.exit_code(), 1);
    }

    #[test]
    fn mode_and_eps_parsing() {
        assert_eq!("both".parse::<Mode>(), Ok(Mode::Both));
        assert!("fast".parse::<Mode>().is_err());
        assert_eq!("-1".parse::<EpsChoice>().unwrap().values(), vec![-1]);
        assert_eq!(EpsChoice::Both.values(), vec![1, -1]);
    }
}
