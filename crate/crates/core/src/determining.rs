//! Determining equations of the commutativity condition `[H, Y] = 0`.
//!
//! Every coefficient of the commutator is a ring element attached to a spin
//! basis label and a derivative monomial. Writing it as
//! `Σ x^a y^b z^c · g_abc` with `a ≤ 1` and radial `g_abc` splits it into
//! radial constraints; the monomials `x^a y^b z^c` are independent over
//! radial functions, so the constraints vanish iff the commutator does.
//! Constraints are stored in a unit normal form so that equations differing
//! by a monomial unit compare equal.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::parse_radial;
use crate::builders::{build_general_scalar, build_hamiltonian, BuildError, GeneralScalarSpec, PotentialSpec};
use crate::field::{Field, Gaussian};
use crate::geomring::{ConstBindings, ConstPowers, Constant, FuncBindings, FuncName, GeomScalar, Monomial, Poly, RingError};
use crate::opalg::{deriv_order, Deriv, Operator};
use crate::spinalg::SpinLabel;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeterminingError {
    #[error("the zero expression matches every system vacuously")]
    Vacuous,
    #[error("candidate equation depends on x, y or z")]
    NotRadial,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("golden data: {0}")]
    Golden(String),
}

/// How matrix coefficients are split into scalar components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SpinBasis {
    /// The sixteen entries of the explicit 4×4 matrix.
    #[default]
    Entries,
    /// The coefficients of the products `σ1a σ2b`.
    Pauli,
}

/// Scalar component of a matrix coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Entry { row: u8, col: u8 },
    Pauli(SpinLabel),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Entry { row, col } => write!(f, "({row},{col})"),
            Component::Pauli(label) => write!(f, "{label}"),
        }
    }
}

/// Where a determining equation was read off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Provenance {
    pub component: Component,
    pub deriv: Deriv,
    pub xyz: [u16; 3],
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.deriv;
        let [x, y, z] = self.xyz;
        write!(f, "{} d[{a},{b},{c}] x^{x}y^{y}z^{z}", self.component)
    }
}

/// One radial constraint `expr = 0`, in unit normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingEquation<T> {
    pub expr: GeomScalar<T>,
    /// Derivative order of the commutator coefficient it came from.
    pub order: u32,
    /// Every coefficient that produced this equation, in order.
    pub provenance: Vec<Provenance>,
}

/// A deduplicated set of determining equations in deterministic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem<T> {
    equations: Vec<DeterminingEquation<T>>,
}

fn w_monomial() -> Monomial {
    let mut m = Monomial::one();
    m.w = true;
    m
}

/// Removes monomial unit factors that do not involve `w` or `eps`: powers of
/// `r` and `q`, a Laurent monomial in constants and the leading coefficient.
fn strip_units<T: Field>(p: &Poly<T>) -> Poly<T> {
    let min_r = p.min_r().unwrap_or(0);
    let mut p = p.shift_r(-min_r);
    while p.len() > 1 {
        match p.div_q_exact() {
            Some(d) => p = d,
            None => break,
        }
    }
    let mut low: BTreeMap<Constant, i16> = BTreeMap::new();
    let mut seen: BTreeMap<Constant, usize> = BTreeMap::new();
    for (m, _) in p.iter() {
        for &(c, e) in m.consts() {
            if c == Constant::Eps {
                continue;
            }
            let v = low.entry(c).or_insert(e);
            *v = (*v).min(e);
            *seen.entry(c).or_default() += 1;
        }
    }
    let shift: ConstPowers = low
        .into_iter()
        .map(|(c, e)| (c, if seen[&c] < p.len() { e.min(0) } else { e }))
        .filter(|&(_, e)| e != 0)
        .map(|(c, e)| (c, -e))
        .collect();
    let mut out = Poly::zero();
    for (m, c) in p.iter() {
        out.add_term(m.times_consts(&shift), c.clone());
    }
    let lead = out.iter().next().and_then(|(_, c)| c.inv());
    match lead {
        Some(inv) => out.scale(&inv),
        None => out,
    }
}

/// Canonical representative of the class of `e` under multiplication by
/// monomial units, or `None` for zero.
pub fn unit_normal_form<T: Field>(e: &GeomScalar<T>) -> Option<GeomScalar<T>> {
    if e.is_zero() {
        return None;
    }
    let one = Gaussian::one();
    let base = e.numerator().clone();
    let eps = Monomial::constant(Constant::Eps, 1);
    let with_eps = base.mul_term(&eps, &one);
    let uses_eps = base.iter().any(|(m, _)| m.consts().iter().any(|c| c.0 == Constant::Eps));
    let mut variants = vec![base.clone(), base.mul_term(&w_monomial(), &one)];
    if uses_eps {
        variants.push(with_eps.clone());
        variants.push(with_eps.mul_term(&w_monomial(), &one));
    }
    variants
        .iter()
        .map(|p| GeomScalar::from_parts(strip_units(p), 0))
        .min_by_key(|g| (g.term_count(), g.to_string()))
}

/// True when `a = u·b` for a monomial unit `u`.
pub fn same_up_to_unit<T: Field>(a: &GeomScalar<T>, b: &GeomScalar<T>) -> bool {
    match (unit_normal_form(a), unit_normal_form(b)) {
        (Some(x), Some(y)) => x == y,
        (None, None) => true,
        _ => false,
    }
}

/// Writes `c = Σ x^a y^b z^c · g_abc` (`a ≤ 1`) and returns the nonzero
/// radial factors `g_abc` keyed by their position monomial.
pub fn split_radial<T: Field>(c: &GeomScalar<T>) -> Vec<([u16; 3], GeomScalar<T>)> {
    let mut parts: BTreeMap<[u16; 3], Poly<T>> = BTreeMap::new();
    for (m, k) in c.numerator().iter() {
        let mut radial = m.clone();
        radial.xyz = [0, 0, 0];
        parts.entry(m.xyz()).or_default().add_term(radial, k.clone());
    }
    parts
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(xyz, p)| (xyz, GeomScalar::from_parts(p, c.q_pow())))
        .collect()
}

impl<T: Field> DeterminingSystem<T> {
    pub fn empty() -> Self {
        DeterminingSystem { equations: Vec::new() }
    }

    /// Reads the determining equations off an operator, keeping only
    /// derivative order `order_filter` when given.
    pub fn from_operator(op: &Operator<T>, order_filter: Option<u32>, basis: SpinBasis) -> Self {
        match order_filter {
            Some(k) => Self::from_operator_orders(op, &[k], basis),
            None => Self::from_operator_orders(op, &[], basis),
        }
    }

    /// As [`Self::from_operator`] for several derivative orders; an empty
    /// slice keeps every order.
    pub fn from_operator_orders(op: &Operator<T>, orders: &[u32], basis: SpinBasis) -> Self {
        let mut classes: BTreeMap<String, DeterminingEquation<T>> = BTreeMap::new();
        for (deriv, matrix) in op.terms() {
            let order = deriv_order(deriv);
            if !orders.is_empty() && !orders.contains(&order) {
                continue;
            }
            let components: Vec<(Component, GeomScalar<T>)> = match basis {
                SpinBasis::Pauli => matrix.iter().map(|(label, c)| (Component::Pauli(label), c.clone())).collect(),
                SpinBasis::Entries => {
                    let entries = matrix.to_entries();
                    let mut out = Vec::new();
                    for (row, line) in entries.into_iter().enumerate() {
                        for (col, c) in line.into_iter().enumerate() {
                            out.push((Component::Entry { row: row as u8, col: col as u8 }, c));
                        }
                    }
                    out
                }
            };
            for (component, coeff) in components {
                for (xyz, radial) in split_radial(&coeff) {
                    let Some(expr) = unit_normal_form(&radial) else { continue };
                    let prov = Provenance { component, deriv: *deriv, xyz };
                    classes
                        .entry(expr.to_string())
                        .and_modify(|eq| {
                            eq.order = eq.order.max(order);
                            eq.provenance.push(prov);
                        })
                        .or_insert_with(|| DeterminingEquation { expr, order, provenance: vec![prov] });
                }
            }
        }
        let mut equations: Vec<DeterminingEquation<T>> = classes.into_values().collect();
        equations.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.provenance[0].cmp(&b.provenance[0])));
        DeterminingSystem { equations }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DeterminingEquation<T>> {
        self.equations.iter()
    }

    /// The member equal to `candidate` up to a monomial unit.
    pub fn find(&self, candidate: &GeomScalar<T>) -> Result<Option<&DeterminingEquation<T>>, DeterminingError> {
        if !candidate.is_radial() {
            return Err(DeterminingError::NotRadial);
        }
        let normal = unit_normal_form(candidate).ok_or(DeterminingError::Vacuous)?;
        Ok(self.equations.iter().find(|eq| eq.expr == normal))
    }

    /// Members ranked by how many terms they share with `candidate`, for
    /// reporting near misses.
    pub fn nearest(&self, candidate: &GeomScalar<T>, count: usize) -> Vec<&DeterminingEquation<T>> {
        let Some(normal) = unit_normal_form(candidate) else { return Vec::new() };
        let shared = |eq: &DeterminingEquation<T>| {
            let theirs: Vec<&Monomial> = eq.expr.numerator().iter().map(|(m, _)| m).collect();
            normal.numerator().iter().filter(|(m, _)| theirs.contains(m)).count()
        };
        let mut ranked: Vec<(usize, &DeterminingEquation<T>)> = self.equations.iter().map(|eq| (shared(eq), eq)).collect();
        ranked.sort_by_key(|a| std::cmp::Reverse(a.0));
        ranked.into_iter().take(count).filter(|(n, _)| *n > 0).map(|(_, eq)| eq).collect()
    }

    /// Substitutes potentials and weights into every equation and returns
    /// the ones that do not vanish.
    pub fn residual(&self, funcs: &FuncBindings<T>, consts: &ConstBindings<T>) -> Result<Vec<GeomScalar<T>>, RingError> {
        let mut out = Vec::new();
        for eq in &self.equations {
            let v = eq.expr.substitute(funcs, consts)?;
            if let Some(n) = unit_normal_form(&v) {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        Ok(out)
    }

    /// One equation per line in the expression mini-language.
    pub fn to_lines(&self) -> Vec<String> {
        self.equations.iter().map(|eq| eq.expr.to_string()).collect()
    }
}

/// `[H, Y_s]` for fully symbolic potentials and weights.
pub fn symbolic_commutator<T: Field>() -> Result<Operator<T>, DeterminingError> {
    let h = build_hamiltonian(&PotentialSpec::symbolic());
    let y = build_general_scalar(&GeneralScalarSpec::symbolic())?;
    Ok(h.commutator(&y))
}

/// The determining system of the general symmetric scalar operator,
/// optionally restricted to one derivative order.
pub fn derive_system<T: Field>(order_filter: Option<u32>) -> Result<DeterminingSystem<T>, DeterminingError> {
    Ok(DeterminingSystem::from_operator(&symbolic_commutator()?, order_filter, SpinBasis::default()))
}

/// The determining system of `[H, Y]` for partially substituted potentials
/// and weights, restricted to `orders` (all orders when empty).
pub fn system_for<T: Field>(
    spec: &PotentialSpec<T>,
    weights: &GeneralScalarSpec<T>,
    orders: &[u32],
    basis: SpinBasis,
) -> Result<DeterminingSystem<T>, DeterminingError> {
    spec.validate()?;
    weights.validate()?;
    let commutator = build_hamiltonian(spec).commutator(&build_general_scalar(weights)?);
    Ok(DeterminingSystem::from_operator_orders(&commutator, orders, basis))
}

/// True iff `candidate` equals a member of `system` up to a monomial unit.
pub fn match_equation<T: Field>(candidate: &GeomScalar<T>, system: &DeterminingSystem<T>) -> Result<bool, DeterminingError> {
    Ok(system.find(candidate)?.is_some())
}

/// Outcome of a closure check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport<T> {
    /// Nonvanishing equations in unit normal form; empty iff `[H, Y] = 0`.
    pub residual: Vec<GeomScalar<T>>,
}

impl<T: Field> ClosureReport<T> {
    pub fn is_zero(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Bindings that turn the symbolic system into the one for `spec` and
/// `weights`. Entries equal to their own symbol are left out.
pub fn closure_bindings<T: Field>(spec: &PotentialSpec<T>, weights: &GeneralScalarSpec<T>) -> FuncBindings<T> {
    let mut funcs = FuncBindings::new();
    for (i, v) in spec.v.iter().enumerate() {
        let name = FuncName::V(i as u8);
        if *v != GeomScalar::func_name(name) {
            funcs.insert(name, v.clone());
        }
    }
    for (i, f) in weights.f.iter().enumerate() {
        let name = FuncName::F(i as u8 + 1);
        if *f != GeomScalar::func_name(name) {
            funcs.insert(name, f.clone());
        }
    }
    funcs
}

/// Computes `[H, Y]` for the given potentials and weights directly and
/// reports its determining equations.
pub fn verify_closure<T: Field>(
    spec: &PotentialSpec<T>,
    weights: &GeneralScalarSpec<T>,
) -> Result<ClosureReport<T>, DeterminingError> {
    spec.validate()?;
    weights.validate()?;
    let h = build_hamiltonian(spec);
    let y = build_general_scalar(weights)?;
    let system = DeterminingSystem::from_operator(&h.commutator(&y), None, SpinBasis::default());
    Ok(ClosureReport { residual: system.equations.into_iter().map(|eq| eq.expr).collect() })
}

/// Same check through the symbolic system: substitutes the specs into every
/// equation of `system`, which must come from [`derive_system`] without an
/// order filter.
pub fn verify_closure_via_system<T: Field>(
    system: &DeterminingSystem<T>,
    spec: &PotentialSpec<T>,
    weights: &GeneralScalarSpec<T>,
) -> Result<ClosureReport<T>, DeterminingError> {
    spec.validate()?;
    weights.validate()?;
    let residual = system.residual(&closure_bindings(spec, weights), &ConstBindings::new())?;
    Ok(ClosureReport { residual })
}

/// The displayed equation sets shipped with the crate.
pub const GOLDEN_DATA: &str = include_str!("../golden/determining.toml");

/// A group of displayed equations sharing one substitution state.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenSet {
    pub name: String,
    /// Derivative orders of the commutator the equations come from.
    pub orders: Vec<u32>,
    /// Potentials substituted into H before commuting; others stay symbolic.
    #[serde(default)]
    pub potentials: BTreeMap<String, String>,
    /// Weights substituted into Y_s before commuting; others stay symbolic.
    #[serde(default)]
    pub weights: BTreeMap<String, String>,
    pub equations: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GoldenFile {
    set: Vec<GoldenSet>,
}

/// Parses golden data in the format of [`GOLDEN_DATA`].
pub fn load_golden(text: &str) -> Result<Vec<GoldenSet>, DeterminingError> {
    let file: GoldenFile = toml::from_str(text).map_err(|e| DeterminingError::Golden(e.to_string()))?;
    Ok(file.set)
}

/// The embedded golden sets.
pub fn golden_sets() -> Vec<GoldenSet> {
    load_golden(GOLDEN_DATA).expect("embedded golden data is well formed")
}

/// Result of matching one displayed equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenMatch {
    pub expr: String,
    /// Where the matching system member was read off.
    pub provenance: Option<Provenance>,
    /// Closest system members when unmatched.
    pub nearest: Vec<String>,
}

impl GoldenMatch {
    pub fn matched(&self) -> bool {
        self.provenance.is_some()
    }
}

/// Result of matching a whole golden set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenReport {
    pub name: String,
    pub system_size: usize,
    pub matches: Vec<GoldenMatch>,
}

impl GoldenReport {
    pub fn matched(&self) -> usize {
        self.matches.iter().filter(|m| m.matched()).count()
    }
}

fn parse_bindings<T: Field>(
    entries: &BTreeMap<String, String>,
) -> Result<Vec<(FuncName, GeomScalar<T>)>, DeterminingError> {
    entries
        .iter()
        .map(|(name, expr)| {
            let f: FuncName = name.parse().map_err(DeterminingError::Golden)?;
            let v = parse_radial(expr).map_err(|e| DeterminingError::Golden(format!("{name}: {e}")))?;
            Ok((f, v))
        })
        .collect()
}

impl GoldenSet {
    /// Potentials and weights of the set's substitution state.
    pub fn specs<T: Field>(&self) -> Result<(PotentialSpec<T>, GeneralScalarSpec<T>), DeterminingError> {
        let mut spec = PotentialSpec::symbolic();
        for (name, v) in parse_bindings(&self.potentials)? {
            match name {
                FuncName::V(i @ 0..=5) => spec.v[i as usize] = v,
                other => return Err(DeterminingError::Golden(format!("{other} is not a potential"))),
            }
        }
        let mut weights = GeneralScalarSpec::symbolic();
        for (name, v) in parse_bindings(&self.weights)? {
            match name {
                FuncName::F(j @ 1..=10) => weights.f[j as usize - 1] = v,
                other => return Err(DeterminingError::Golden(format!("{other} is not a weight"))),
            }
        }
        Ok((spec, weights))
    }

    /// The determining system the set is matched against.
    pub fn system<T: Field>(&self, basis: SpinBasis) -> Result<DeterminingSystem<T>, DeterminingError> {
        let (spec, weights) = self.specs::<T>()?;
        system_for(&spec, &weights, &self.orders, basis)
    }

    pub fn check<T: Field>(&self, basis: SpinBasis) -> Result<GoldenReport, DeterminingError> {
        let system = self.system::<T>(basis)?;
        let mut matches = Vec::new();
        for expr in &self.equations {
            let candidate: GeomScalar<T> =
                parse_radial(expr).map_err(|e| DeterminingError::Golden(format!("`{expr}`: {e}")))?;
            let found = system.find(&candidate)?;
            let nearest = match found {
                Some(_) => Vec::new(),
                None => system.nearest(&candidate, 3).into_iter().map(|eq| eq.expr.to_string()).collect(),
            };
            matches.push(GoldenMatch { expr: expr.clone(), provenance: found.map(|eq| eq.provenance[0]), nearest });
        }
        Ok(GoldenReport { name: self.name.clone(), system_size: system.len(), matches })
    }
}
