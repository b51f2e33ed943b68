//! Independent check of commutation by applying operators to explicit
//! spinor-valued test fields, exactly and at sample points.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, Gaussian};
use crate::geomring::{ConstBindings, Constant, FuncBindings, FuncName, FuncSym, GeomScalar, RingError};
use crate::opalg::{Deriv, Operator, NO_DERIV};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("operator still contains function symbol {0}")]
    FreeSymbols(FuncSym),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A four-component field with coefficients in the geometric ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestField<T> {
    pub components: [GeomScalar<T>; 4],
}

impl<T: Field> TestField<T> {
    pub fn new(components: [GeomScalar<T>; 4]) -> Self {
        TestField { components }
    }

    pub fn zero() -> Self {
        Self::new(std::array::from_fn(|_| GeomScalar::zero()))
    }

    /// `value` in component `idx`, zero elsewhere.
    pub fn single(idx: usize, value: GeomScalar<T>) -> Self {
        let mut f = Self::zero();
        f.components[idx] = value;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GeomScalar::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(std::array::from_fn(|i| self.components[i].sub(&other.components[i])))
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(GeomScalar::term_count).sum()
    }

    pub fn partial(&self, axis: usize) -> Self {
        Self::new(std::array::from_fn(|i| self.components[i].partial(axis)))
    }

    /// A pseudo-random field whose components are polynomials of total degree
    /// at most `max_degree`, each optionally multiplied by `r` or `w`.
    pub fn random(rng: &mut impl Rng, max_degree: u32) -> Self {
        Self::new(std::array::from_fn(|_| random_component(rng, max_degree)))
    }
}

fn random_component<T: Field>(rng: &mut impl Rng, max_degree: u32) -> GeomScalar<T> {
    let coords = [GeomScalar::<T>::coord(0), GeomScalar::coord(1), GeomScalar::coord(2)];
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let degree = rng.gen_range(0..=max_degree);
        let mut m = GeomScalar::from_i64(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
        for _ in 0..degree {
            m = m.mul(&coords[rng.gen_range(0..3)]);
        }
        terms.push(m);
    }
    let poly = GeomScalar::sum(terms.iter());
    match rng.gen_range(0..4) {
        0 => poly.mul(&GeomScalar::r()),
        1 => poly.mul(&GeomScalar::w()),
        _ => poly,
    }
}

fn ensure_concrete<T: Field>(op: &Operator<T>) -> Result<(), OracleError> {
    for (_, m) in op.terms() {
        for (_, c) in m.iter() {
            if let Some(f) = c.free_functions().first() {
                return Err(OracleError::FreeSymbols(*f));
            }
        }
    }
    Ok(())
}

fn derivative_of<T: Field>(cache: &mut HashMap<Deriv, TestField<T>>, psi: &TestField<T>, d: Deriv) -> TestField<T> {
    if let Some(f) = cache.get(&d) {
        return f.clone();
    }
    let result = match d.iter().position(|&e| e > 0) {
        None => psi.clone(),
        Some(axis) => {
            let mut lower = d;
            lower[axis] -= 1;
            derivative_of(cache, psi, lower).partial(axis)
        }
    };
    cache.insert(d, result.clone());
    result
}

/// Applies `op` to `psi` by differentiating the components and multiplying
/// by the explicit 4×4 coefficient matrices.
pub fn apply<T: Field>(op: &Operator<T>, psi: &TestField<T>) -> Result<TestField<T>, OracleError> {
    ensure_concrete(op)?;
    let mut cache = HashMap::new();
    cache.insert(NO_DERIV, psi.clone());
    let mut parts: [Vec<GeomScalar<T>>; 4] = Default::default();
    for (d, m) in op.terms() {
        let dpsi = derivative_of(&mut cache, psi, *d);
        let entries = m.to_entries();
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() && !dpsi.components[j].is_zero() {
                    parts[i].push(e.mul_raw(&dpsi.components[j]));
                }
            }
        }
    }
    Ok(TestField::new(std::array::from_fn(|i| GeomScalar::sum(parts[i].iter()))))
}

/// `H(Yψ) − Y(Hψ)` computed by sequential application.
pub fn commutator_residual<T: Field>(
    h: &Operator<T>,
    y: &Operator<T>,
    psi: &TestField<T>,
) -> Result<TestField<T>, OracleError> {
    let (hy, yh) = sequential_pair(h, y, psi)?;
    Ok(hy.sub(&yh))
}

fn sequential_pair<T: Field>(
    h: &Operator<T>,
    y: &Operator<T>,
    psi: &TestField<T>,
) -> Result<(TestField<T>, TestField<T>), OracleError> {
    let (hy, yh) = rayon::join(
        || apply(y, psi).and_then(|f| apply(h, &f)),
        || apply(h, psi).and_then(|f| apply(y, &f)),
    );
    Ok((hy?, yh?))
}

/// Floating evaluation of every component at a rational point.
pub fn evaluate_at<T: Field>(
    field: &TestField<T>,
    point: &[T; 3],
    consts: &ConstBindings<T>,
) -> Result<[Complex64; 4], OracleError> {
    let p = [point[0].to_f64(), point[1].to_f64(), point[2].to_f64()];
    let lookup = |c: Constant| consts.get(&c).map(|g| g.to_f64_pair().0);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (slot, comp) in out.iter_mut().zip(&field.components) {
        let (re, im) = comp.evaluate_at(p, &lookup)?;
        *slot = Complex64::new(re, im);
    }
    Ok(out)
}

/// Concrete radial functions standing in for free function symbols.
pub fn random_function_bindings<T: Field>(names: &[FuncName], rng: &mut impl Rng) -> FuncBindings<T> {
    let pool = [
        GeomScalar::<T>::one(),
        GeomScalar::r(),
        GeomScalar::r().try_inverse().expect("r is a unit"),
        GeomScalar::s(),
        GeomScalar::inv_s(),
        GeomScalar::w(),
    ];
    let mut out = BTreeMap::new();
    for &name in names {
        let picks: Vec<_> = pool.choose_multiple(rng, 2).collect();
        let value = picks.iter().fold(GeomScalar::zero(), |acc, g| {
            let k = Gaussian::ratio(rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
            acc.add(&g.scale(&k))
        });
        out.insert(name, value);
    }
    out
}

/// Random real rational values for every listed constant; `alpha7` and
/// `hbar` are positive and `eps` is set to `eps`.
pub fn random_constant_bindings<T: Field>(consts: &[Constant], eps: i64, rng: &mut impl Rng) -> ConstBindings<T> {
    let mut out = BTreeMap::new();
    for &c in consts {
        let value = match c {
            Constant::Eps => Gaussian::from_i64(eps),
            Constant::Hbar | Constant::Alpha(7) => Gaussian::ratio(rng.gen_range(2..=8), 4),
            _ => Gaussian::ratio(rng.gen_range(1..=8) * if rng.gen_bool(0.5) { 1 } else { -1 }, 4),
        };
        out.insert(c, value);
    }
    out
}

/// A rational point with every coordinate of magnitude in `[1/2, 2]`.
pub fn random_point<T: Field>(rng: &mut impl Rng) -> [T; 3] {
    std::array::from_fn(|_| T::from_ratio(rng.gen_range(2..=8) * if rng.gen_bool(0.5) { 1 } else { -1 }, 4))
}

/// Parameters of an oracle run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub fields: usize,
    pub max_degree: u32,
    pub points: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seed: 0x5eed, fields: 8, max_degree: 4, points: 10 }
    }
}

/// Result of checking one operator pair on all test fields.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome {
    /// Every exact residual field vanished.
    pub exact_zero: bool,
    /// Total number of terms over all residual fields.
    pub residual_terms: usize,
    /// Largest `|HYψ − YHψ|` component over all fields and points.
    pub max_numeric: f64,
}

impl OracleOutcome {
    pub fn passes(&self, tol: f64) -> bool {
        self.exact_zero && self.max_numeric < tol
    }
}

/// Runs the sequential-application check of `[h, y]` on seeded test fields.
/// Both operators must be free of function symbols; constants may remain
/// symbolic in the exact check and are sampled for the numeric one, with
/// `eps` fixed to `eps`.
pub fn check_pair<T: Field>(
    h: &Operator<T>,
    y: &Operator<T>,
    eps: i64,
    cfg: &OracleConfig,
) -> Result<OracleOutcome, OracleError> {
    ensure_concrete(h)?;
    ensure_concrete(y)?;
    let mut consts: Vec<Constant> = Vec::new();
    for op in [h, y] {
        for (_, m) in op.terms() {
            for (_, c) in m.iter() {
                consts.extend(c.free_constants());
            }
        }
    }
    consts.extend([Constant::Hbar, Constant::ALPHA7, Constant::Eps]);
    consts.sort();
    consts.dedup();
    let results: Vec<Result<(usize, f64), OracleError>> = (0..cfg.fields)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
            let psi = TestField::<T>::random(&mut rng, cfg.max_degree);
            let (hy, yh) = sequential_pair(h, y, &psi)?;
            let residual = hy.sub(&yh);
            let mut worst = 0.0f64;
            for _ in 0..cfg.points {
                let bindings = random_constant_bindings::<T>(&consts, eps, &mut rng);
                let point = random_point::<T>(&mut rng);
                let a = evaluate_at(&hy, &point, &bindings)?;
                let b = evaluate_at(&yh, &point, &bindings)?;
                for (u, v) in a.iter().zip(&b) {
                    worst = worst.max((u - v).norm());
                }
            }
            Ok((residual.term_count(), worst))
        })
        .collect();
    let mut outcome = OracleOutcome { exact_zero: true, residual_terms: 0, max_numeric: 0.0 };
    for r in results {
        let (terms, worst) = r?;
        outcome.residual_terms += terms;
        outcome.exact_zero &= terms == 0;
        outcome.max_numeric = outcome.max_numeric.max(worst);
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_hamiltonian, build_integral, inv_r_pow, IntegralId, PotentialSpec};
    use crate::spinalg::TwoSpinMatrix;
    use num_rational::BigRational;

    type G = GeomScalar<BigRational>;
    type F = TestField<BigRational>;

    fn x() -> G {
        G::coord(0)
    }

    #[test]
    fn momentum_on_x_squared() {
        let psi = F::single(0, x().mul(&x()));
        let out = apply(&Operator::momentum(0), &psi).unwrap();
        let expected = x().mul(&G::hbar()).mul(&G::i()).scale(&Gaussian::from_i64(-2));
        assert_eq!(out, F::single(0, expected));
    }

    #[test]
    fn angular_momentum_kills_radial_fields() {
        let psi = F::single(0, G::s());
        assert!(apply(&Operator::angular(2), &psi).unwrap().is_zero());
    }

    #[test]
    fn sigma_dot_mixes_components() {
        let psi = F::single(1, G::one());
        let out = apply(&Operator::from_matrix(TwoSpinMatrix::sigma_dot()), &psi).unwrap();
        let expected = F::new([G::zero(), G::from_i64(-1), G::from_i64(2), G::zero()]);
        assert_eq!(out, expected);
    }

    #[test]
    fn rejects_symbolic_operators() {
        let h = build_hamiltonian(&PotentialSpec::<BigRational>::symbolic());
        assert!(matches!(apply(&h, &F::zero()), Err(OracleError::FreeSymbols(_))));
    }

    #[test]
    fn evaluation_at_points() {
        let consts = ConstBindings::new();
        let zero = evaluate_at(&F::zero(), &[1, 2, 3].map(BigRational::from_i64), &consts).unwrap();
        assert!(zero.iter().all(|c| c.norm() == 0.0));
        let field = F::single(0, inv_r_pow(1));
        let v = evaluate_at(&field, &[3, 4, 0].map(BigRational::from_i64), &consts).unwrap();
        assert!((v[0].re - 0.2).abs() < 1e-15 && v[1].norm() == 0.0);
        assert!(evaluate_at(&field, &[0, 0, 0].map(BigRational::from_i64), &consts).is_err());
        let hb = F::single(0, G::hbar());
        assert!(evaluate_at(&hb, &[1, 0, 0].map(BigRational::from_i64), &consts).is_err());
    }

    #[test]
    fn operator_commutes_with_itself() {
        let spec = PotentialSpec::<BigRational>::symbolic().with(0, inv_r_pow(2)).with(1, G::one());
        let spec = (2..6).fold(spec, |s, k| s.with(k, G::zero()));
        let h = build_hamiltonian(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = F::random(&mut rng, 3);
        assert!(commutator_residual(&h, &h, &psi).unwrap().is_zero());
        let y = build_integral(IntegralId::Y(7));
        let out = check_pair(&h, &y, 1, &OracleConfig { fields: 2, points: 3, ..Default::default() }).unwrap();
        assert!(out.passes(1e-10), "{out:?}");
    }
}
