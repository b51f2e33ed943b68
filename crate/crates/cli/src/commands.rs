//! Implementations of the subcommands. Each returns the text to print and a
//! process exit code.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::json;
use spincheck_core::builders::{build_general_scalar, build_hamiltonian, build_integral, GeneralScalarSpec, IntegralId, PotentialSpec};
use spincheck_core::catalog::{
    gauge_checks, parse_radial, summarize, verify_entry, Catalog, EntryId, EntryReport, Report, VerifyOptions,
};
use spincheck_core::determining::{system_for, SpinBasis};
use spincheck_core::geomring::{FuncName, GeomScalar};
use spincheck_core::oracle::OracleConfig;

use crate::args::{BasisArg, DeriveArgs, DumpArgs, ReportFormat, SymmetrizeArgs, VerifyArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 3;

/// Output of a subcommand.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// A user-facing error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: EXIT_USAGE }
    }

    fn internal(message: impl std::fmt::Display) -> Self {
        CliError { message: message.to_string(), code: EXIT_FAILURE }
    }
}

type R = spincheck_core::Rational;

/// Parses `NAME=EXPR` into a function symbol and a ring element.
pub fn parse_assignment(text: &str) -> Result<(FuncName, GeomScalar<R>), CliError> {
    let (name, expr) = text
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("expected NAME=EXPR, got `{text}`")))?;
    let name: FuncName = name.trim().parse().map_err(CliError::usage)?;
    let value = parse_radial(expr.trim()).map_err(|e| CliError::usage(format!("{}: {e}", name)))?;
    if !value.is_radial() {
        return Err(CliError::usage(format!("{name} must depend on r only")));
    }
    Ok((name, value))
}

fn apply_assignment(
    spec: &mut PotentialSpec<R>,
    weights: &mut GeneralScalarSpec<R>,
    (name, value): (FuncName, GeomScalar<R>),
) -> Result<(), CliError> {
    match name {
        FuncName::V(i @ 0..=5) => spec.v[i as usize] = value,
        FuncName::F(j @ 1..=10) => weights.f[j as usize - 1] = value,
        other => return Err(CliError::usage(format!("no potential or weight named {other}"))),
    }
    Ok(())
}

/// Resolves a case selector to entry ids in catalog order.
pub fn parse_selector(text: &str) -> Result<Vec<EntryId>, CliError> {
    let mut ids = BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            ids.extend(EntryId::all());
        } else if let Some((a, b)) = part.split_once('-') {
            let lo: EntryId = a.trim().parse().map_err(|e| CliError::usage(format!("{e}")))?;
            let hi: EntryId = b.trim().parse().map_err(|e| CliError::usage(format!("{e}")))?;
            if lo > hi {
                return Err(CliError::usage(format!("empty range `{part}`")));
            }
            ids.extend(EntryId::all().filter(|id| *id >= lo && *id <= hi));
        } else {
            ids.insert(part.parse::<EntryId>().map_err(|e| CliError::usage(format!("{e}")))?);
        }
    }
    if ids.is_empty() {
        return Err(CliError::usage("empty case selector"));
    }
    Ok(ids.into_iter().collect())
}

fn load_catalog() -> Result<Catalog, CliError> {
    Catalog::load().map_err(|e| CliError::usage(format!("catalog: {e}")))
}

pub fn derive(args: &DeriveArgs, format: ReportFormat) -> Result<Outcome, CliError> {
    let mut spec = PotentialSpec::symbolic();
    let mut weights = GeneralScalarSpec::symbolic();
    for text in &args.sets {
        apply_assignment(&mut spec, &mut weights, parse_assignment(text)?)?;
    }
    let basis = match args.basis {
        BasisArg::Entries => SpinBasis::Entries,
        BasisArg::Pauli => SpinBasis::Pauli,
    };
    let orders: Vec<u32> = args.order.into_iter().collect();
    let system = system_for(&spec, &weights, &orders, basis).map_err(CliError::internal)?;
    let mut out = String::new();
    match format {
        ReportFormat::Text => {
            let filter = args.order.map_or("all orders".to_string(), |k| format!("order {k}"));
            writeln!(out, "# {} determining equations ({filter})", system.len()).unwrap();
            for eq in system.iter() {
                writeln!(out, "{} = 0    # order {}, {} sources, first at {}", eq.expr, eq.order, eq.provenance.len(), eq.provenance[0])
                    .unwrap();
            }
        }
        ReportFormat::Json => {
            for eq in system.iter() {
                let line = json!({
                    "order": eq.order,
                    "expr": eq.expr.to_string(),
                    "sources": eq.provenance.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                });
                writeln!(out, "{line}").unwrap();
            }
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}

fn text_line(r: &Report) -> String {
    let eps = r.eps.map_or(String::new(), |e| format!(" eps={e:+}"));
    let time = r.wall_time_ms.map_or(String::new(), |t| format!(" {t}ms"));
    let mut line = format!(
        "{:>3} {:<14} {:<8}{eps} {} residual_terms={}{time}",
        r.id.to_string(),
        r.integral,
        format!("{:?}", r.mode).to_lowercase(),
        r.verdict,
        r.residual_terms
    );
    if let Some(d) = &r.diagnosis {
        write!(line, "\n      diagnosis: {d}").unwrap();
    }
    if let Some(res) = &r.residual {
        for l in res.lines() {
            write!(line, "\n      | {l}").unwrap();
        }
    }
    line
}

pub fn verify(args: &VerifyArgs, format: ReportFormat) -> Result<Outcome, CliError> {
    let ids = if args.all { EntryId::all().collect() } else { parse_selector(&args.case)? };
    let catalog = load_catalog()?;
    let opts = VerifyOptions {
        mode: args.mode,
        eps: args.eps,
        oracle: OracleConfig { seed: args.seed, ..OracleConfig::default() },
        timing: !args.no_timing,
        ..VerifyOptions::default()
    };
    let mut entries: Vec<EntryReport> = Vec::new();
    for id in ids {
        let entry = catalog.get(id).ok_or_else(|| CliError::usage(format!("unknown catalog id `{id}`")))?;
        entries.push(verify_entry(entry, &opts).map_err(CliError::internal)?);
    }
    let reports: Vec<&Report> = entries.iter().flat_map(|e| e.reports.iter()).collect();
    let summary = summarize(reports.iter().copied());
    let mut out = String::new();
    for r in &reports {
        match format {
            ReportFormat::Text => writeln!(out, "{}", text_line(r)).unwrap(),
            ReportFormat::Json => writeln!(out, "{}", r.to_json()).unwrap(),
        }
    }
    if format == ReportFormat::Text {
        writeln!(
            out,
            "# {} entries, {} reports: {} zero, {} known discrepancy, {} catalog discrepancy, {} engine failure",
            entries.len(),
            reports.len(),
            summary.zero,
            summary.known,
            summary.discrepancy,
            summary.failure
        )
        .unwrap();
    }
    Ok(Outcome { stdout: out, code: summary.exit_code() })
}

/// Reads `fJ = EXPR` lines, skipping blanks and `#` comments.
pub fn parse_weights_file(text: &str) -> Result<Vec<(FuncName, GeomScalar<R>)>, CliError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_assignment)
        .collect()
}

pub fn symmetrize(args: &SymmetrizeArgs) -> Result<Outcome, CliError> {
    let mut weights = if args.symbolic { GeneralScalarSpec::symbolic() } else { GeneralScalarSpec::zero() };
    let mut assignments = Vec::new();
    if let Some(path) = &args.weights {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        assignments.extend(parse_weights_file(&text)?);
    }
    for text in &args.sets {
        assignments.push(parse_assignment(text)?);
    }
    for (name, value) in assignments {
        match name {
            FuncName::F(j @ 1..=10) => weights.f[j as usize - 1] = value,
            other => return Err(CliError::usage(format!("{other} is not a weight f1..f10"))),
        }
    }
    let op = build_general_scalar(&weights).map_err(CliError::internal)?;
    Ok(Outcome { stdout: format!("{op}\n"), code: EXIT_OK })
}

pub fn gauge_check(format: ReportFormat) -> Result<Outcome, CliError> {
    let catalog = load_catalog()?;
    let checks = gauge_checks(&catalog, &VerifyOptions::default()).map_err(CliError::internal)?;
    let mut out = String::new();
    for c in &checks {
        match format {
            ReportFormat::Text => {
                writeln!(out, "{} {}", if c.pass { "pass" } else { "FAIL" }, c.name).unwrap();
                if let Some(d) = c.detail.as_ref().filter(|_| !c.pass) {
                    for l in d.lines() {
                        writeln!(out, "      | {l}").unwrap();
                    }
                }
            }
            ReportFormat::Json => writeln!(out, "{}", serde_json::to_string(c).unwrap()).unwrap(),
        }
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if format == ReportFormat::Text {
        writeln!(out, "# {} checks, {failed} failed", checks.len()).unwrap();
    }
    Ok(Outcome { stdout: out, code: if failed == 0 { EXIT_OK } else { EXIT_FAILURE } })
}

pub fn dump(args: &DumpArgs) -> Result<Outcome, CliError> {
    let mut out = String::new();
    if let Some(name) = &args.integral {
        let id: IntegralId = name.parse().map_err(|e| CliError::usage(format!("{e}")))?;
        writeln!(out, "{}", build_integral::<R>(id)).unwrap();
        return Ok(Outcome { stdout: out, code: EXIT_OK });
    }
    let case = args.case.as_deref().ok_or_else(|| CliError::usage("dump needs --case or --integral"))?;
    let catalog = load_catalog()?;
    for id in parse_selector(case)? {
        let entry = catalog.get(id).ok_or_else(|| CliError::usage(format!("unknown catalog id `{id}`")))?;
        let spec = entry.potential_spec::<R>().map_err(CliError::internal)?;
        writeln!(out, "## entry {id}").unwrap();
        write!(out, "{}", entry.to_toml()).unwrap();
        writeln!(out, "\n### H").unwrap();
        writeln!(out, "{}", build_hamiltonian(&spec)).unwrap();
        let weights = entry.weight_bindings::<R>().map_err(CliError::internal)?;
        for &integral in &entry.integrals {
            let op = build_integral::<R>(integral)
                .substitute(&weights, &Default::default())
                .map_err(CliError::internal)?;
            writeln!(out, "\n### {integral}").unwrap();
            writeln!(out, "{op}").unwrap();
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}
