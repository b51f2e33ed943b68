//! Strategies and property checks shared by the property suite and the
//! acceptance report.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, RngSeed, TestCaseError, TestRunner};
use spincheck_core::field::Gaussian;
use spincheck_core::geomring::{Constant, FuncName, FuncSym, GeomScalar};
use spincheck_core::opalg::{Deriv, Operator};
use spincheck_core::spinalg::{SpinLabel, TwoSpinMatrix};
use spincheck_core::Rational;

pub type G = GeomScalar<Rational>;
pub type Op = Operator<Rational>;

/// Number of random instances per property.
pub const CASES: u32 = 256;

/// Fixed-seed configuration so every run draws the same instances.
pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(0x5eed_2024),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    }
}

#[derive(Clone, Debug)]
struct TermSpec {
    coeff: (i64, i64, bool),
    xyz: [u8; 3],
    r: i16,
    w: bool,
    constant: u8,
    func: u8,
}

fn term_spec() -> impl Strategy<Value = TermSpec> {
    (
        (-6i64..=6, 1i64..=3, any::<bool>()),
        [0u8..=2, 0u8..=2, 0u8..=2],
        -3i16..=3,
        prop::bool::weighted(0.25),
        0u8..6,
        0u8..6,
    )
        .prop_map(|(coeff, xyz, r, w, constant, func)| TermSpec { coeff, xyz, r, w, constant, func })
}

fn build_term(t: &TermSpec) -> G {
    let (n, d, imag) = t.coeff;
    let c = Gaussian::ratio(n, d);
    let mut g = G::from_gaussian(if imag { &c * &Gaussian::i() } else { c });
    for (axis, &e) in t.xyz.iter().enumerate() {
        for _ in 0..e {
            g = g.mul(&G::coord(axis));
        }
    }
    g = g.mul(&G::r_pow(t.r));
    if t.w {
        g = g.mul(&G::w());
    }
    let constant = match t.constant {
        0 => Some(Constant::Hbar),
        1 => Some(Constant::Alpha(1)),
        2 => Some(Constant::Eps),
        _ => None,
    };
    if let Some(k) = constant {
        g = g.mul(&G::constant(k));
    }
    let func = match t.func {
        0 => Some(FuncSym::new(FuncName::V(1), 0)),
        1 => Some(FuncSym::new(FuncName::F(2), 1)),
        _ => None,
    };
    if let Some(f) = func {
        g = g.mul(&G::func(f));
    }
    g
}

/// Ring elements with up to four terms mixing coordinates, Laurent powers of
/// `r`, the radical `w`, constants and function symbols.
pub fn scalar() -> impl Strategy<Value = G> {
    scalar_with(4)
}

fn scalar_with(max_terms: usize) -> impl Strategy<Value = G> {
    prop::collection::vec(term_spec(), 1..=max_terms).prop_map(|terms| {
        let parts: Vec<G> = terms.iter().map(build_term).collect();
        G::sum(parts.iter())
    })
}

fn deriv() -> impl Strategy<Value = Deriv> {
    (0u8..=2, 0u8..=2, 0u8..=2).prop_filter("order at most two", |d| d.0 + d.1 + d.2 <= 2).prop_map(|(a, b, c)| [a, b, c])
}

fn matrix(scalar_terms: usize) -> impl Strategy<Value = TwoSpinMatrix<Rational>> {
    prop::collection::vec((0u8..4, 0u8..4, scalar_with(scalar_terms)), 1..=2).prop_map(|entries| {
        entries.into_iter().fold(TwoSpinMatrix::zero(), |acc, (a, b, c)| acc.add(&TwoSpinMatrix::basis(SpinLabel::new(a, b), c)))
    })
}

/// Operators of derivative order at most two with up to two terms.
pub fn operator() -> impl Strategy<Value = Op> {
    operator_with(2)
}

/// Operators whose coefficients are single ring terms, for properties that
/// nest several commutators.
pub fn light_operator() -> impl Strategy<Value = Op> {
    operator_with(1)
}

fn operator_with(scalar_terms: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec((deriv(), matrix(scalar_terms)), 1..=2)
        .prop_map(|terms| terms.into_iter().fold(Op::zero(), |acc, (d, m)| acc.add(&Op::term(d, m))))
}

pub fn ring_axioms(a: &G, b: &G, c: &G) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.mul(&G::one()), a.clone());
    prop_assert!(a.sub(a).is_zero());
    Ok(())
}

pub fn mixed_partials(a: &G) -> Result<(), TestCaseError> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        prop_assert_eq!(a.partial(i).partial(j), a.partial(j).partial(i));
    }
    Ok(())
}

pub fn leibniz(a: &G, b: &G) -> Result<(), TestCaseError> {
    for axis in 0..3 {
        let lhs = a.mul(b).partial(axis);
        let rhs = a.partial(axis).mul(b).add(&a.mul(&b.partial(axis)));
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn jacobi(a: &Op, b: &Op, c: &Op) -> Result<(), TestCaseError> {
    let sum = a
        .commutator(&b.commutator(c))
        .add(&b.commutator(&c.commutator(a)))
        .add(&c.commutator(&a.commutator(b)));
    prop_assert!(sum.is_zero(), "Jacobi sum:\n{}", sum);
    Ok(())
}

pub fn adjoint_anti_homomorphism(a: &Op, b: &Op) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.compose(b).adjoint(), b.adjoint().compose(&a.adjoint()));
    prop_assert_eq!(a.adjoint().adjoint(), a.clone());
    Ok(())
}

/// Rebuilding a normal-ordered operator term by term as
/// `coefficient ∘ derivative` reproduces it.
pub fn normal_ordering_idempotent(a: &Op) -> Result<(), TestCaseError> {
    let rebuilt = a
        .terms()
        .fold(Op::zero(), |acc, (d, m)| acc.add(&Op::from_matrix(m.clone()).compose(&Op::derivative(*d))));
    prop_assert_eq!(&rebuilt, a);
    prop_assert_eq!(&a.compose(&Op::identity()), a);
    prop_assert_eq!(&Op::identity().compose(a), a);
    Ok(())
}

/// One named property suite, runnable outside the `proptest!` macro.
pub struct Suite {
    pub name: &'static str,
    pub run: fn() -> Result<u32, String>,
}

fn run_with<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    let mut runner = TestRunner::new(config());
    runner.run(&strategy, check).map(|_| CASES).map_err(|e| e.to_string())
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "ring axioms", run: || run_with((scalar(), scalar(), scalar()), |(a, b, c)| ring_axioms(&a, &b, &c)) },
        Suite { name: "mixed-partial symmetry", run: || run_with(scalar(), |a| mixed_partials(&a)) },
        Suite { name: "Leibniz rule", run: || run_with((scalar(), scalar()), |(a, b)| leibniz(&a, &b)) },
        Suite { name: "Jacobi identity", run: || run_with((light_operator(), light_operator(), light_operator()), |(a, b, c)| jacobi(&a, &b, &c)) },
        Suite {
            name: "adjoint anti-homomorphism",
            run: || run_with((operator(), operator()), |(a, b)| adjoint_anti_homomorphism(&a, &b)),
        },
        Suite { name: "normal-ordering idempotence", run: || run_with(operator(), |a| normal_ordering_idempotent(&a)) },
    ]
}
