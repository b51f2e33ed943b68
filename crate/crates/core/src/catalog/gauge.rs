//! Checks of the gauge-induced sector: unitarity of `U`, the transformed
//! scalar Hamiltonian and the Lie-algebra bracket tables of the gauge
//! entries.

use serde::{Deserialize, Serialize};

use super::entry::{Catalog, EntryId};
use super::verify::{check_bracket, Verdict, VerifyOptions};
use super::CatalogError;
use crate::builders::{
    build_gauge_matrix, build_hamiltonian, gauge_potentials, gauge_transformed_hamiltonian, printed_gauge_hamiltonian,
};
use crate::field::Gaussian;
use crate::geomring::{FuncName, GeomScalar};
use crate::spinalg::TwoSpinMatrix;

type R = crate::Rational;

/// Outcome of one gauge-sector check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeCheck {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl GaugeCheck {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        GaugeCheck { name: name.into(), pass, detail: None }
    }
}

fn induced_potentials_check(catalog: &Catalog, id: EntryId, v0: GeomScalar<R>) -> Result<GaugeCheck, CatalogError> {
    let entry = catalog.get(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
    let spec = entry.potential_spec::<R>()?;
    let expected = gauge_potentials(v0);
    let mut check = GaugeCheck::new(format!("{id} potentials equal the induced potentials"), spec == expected);
    if !check.pass {
        let diffs: Vec<String> = (0..6)
            .filter(|&i| spec.v[i] != expected.v[i])
            .map(|i| format!("V{i}: catalog {} vs induced {}", spec.v[i], expected.v[i]))
            .collect();
        check.detail = Some(diffs.join("; "));
    }
    Ok(check)
}

/// Runs every gauge-sector check in a fixed order.
pub fn gauge_checks(catalog: &Catalog, opts: &VerifyOptions) -> Result<Vec<GaugeCheck>, CatalogError> {
    let mut out = Vec::new();
    let u = build_gauge_matrix::<R>();
    let identity = TwoSpinMatrix::identity();
    out.push(GaugeCheck::new("U^dagger U = I", u.adjoint().mul(&u) == identity));
    out.push(GaugeCheck::new("U U^dagger = I", u.mul(&u.adjoint()) == identity));

    let v0 = GeomScalar::<R>::func_name(FuncName::V(0));
    let transformed = gauge_transformed_hamiltonian(v0.clone());
    let printed = printed_gauge_hamiltonian(v0.clone());
    let mut display = GaugeCheck::new("U^-1 H U equals the displayed transformed Hamiltonian", transformed == printed);
    if !display.pass {
        display.detail = Some(transformed.sub(&printed).to_string());
    }
    out.push(display);
    let hbar = GeomScalar::<R>::hbar();
    let shift = hbar.mul(&hbar).mul(&GeomScalar::inv_s()).scale(&Gaussian::from_i64(2));
    let induced = build_hamiltonian(&gauge_potentials(v0.add(&shift)));
    out.push(GaugeCheck::new("U^-1 H U has the induced potentials with V0 + 2*hbar^2/r^2", transformed == induced));

    out.push(induced_potentials_check(catalog, EntryId::Gauge(1), v0)?);
    out.push(induced_potentials_check(catalog, EntryId::Gauge(2), shift)?);

    for id in [EntryId::Gauge(1), EntryId::Gauge(2)] {
        let entry = catalog.get(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
        for b in &entry.brackets {
            let report = check_bracket::<R>(entry, b, opts);
            let mut check = GaugeCheck::new(format!("{id} {b}"), report.verdict == Verdict::Zero);
            check.detail = report.residual;
            out.push(check);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_gauge_checks_pass() {
        let catalog = Catalog::embedded().unwrap();
        let checks = gauge_checks(&catalog, &VerifyOptions::default()).unwrap();
        assert_eq!(checks.len(), 14);
        for c in &checks {
            assert!(c.pass, "{}: {:?}", c.name, c.detail);
        }
    }
}
