//! Constructors for the two-spin Hamiltonian, the ten scalar constructs, the
//! general symmetric scalar operator, the catalogued integrals of motion and
//! the gauge matrix.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, Gaussian};
use crate::geomring::{Constant, FuncName, GeomScalar};
use crate::opalg::{OpError, Operator};
use crate::spinalg::TwoSpinMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("scalar basis index {0} out of range 1..=10")]
    BasisIndex(usize),
    #[error("unknown integral id `{0}`")]
    UnknownIntegral(String),
    #[error("{0} must depend on position only through r")]
    NotRadial(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// Assignment of the six potentials `V0..V5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSpec<T> {
    pub v: [GeomScalar<T>; 6],
}

impl<T: Field> PotentialSpec<T> {
    /// Every potential a formal radial function `Vi(r)`.
    pub fn symbolic() -> Self {
        PotentialSpec { v: std::array::from_fn(|i| GeomScalar::func_name(FuncName::V(i as u8))) }
    }

    pub fn with(mut self, idx: usize, value: GeomScalar<T>) -> Self {
        self.v[idx] = value;
        self
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        for (i, v) in self.v.iter().enumerate() {
            if !v.is_radial() {
                return Err(BuildError::NotRadial(format!("V{i}")));
            }
        }
        Ok(())
    }
}

/// Assignment of the ten weight functions `f1..f10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralScalarSpec<T> {
    pub f: [GeomScalar<T>; 10],
}

impl<T: Field> GeneralScalarSpec<T> {
    pub fn symbolic() -> Self {
        GeneralScalarSpec { f: std::array::from_fn(|i| GeomScalar::func_name(FuncName::F(i as u8 + 1))) }
    }

    pub fn zero() -> Self {
        GeneralScalarSpec { f: std::array::from_fn(|_| GeomScalar::zero()) }
    }

    /// Sets `f_j` (1-based).
    pub fn with(mut self, j: usize, value: GeomScalar<T>) -> Self {
        self.f[j - 1] = value;
        self
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        for (i, f) in self.f.iter().enumerate() {
            if !f.is_radial() {
                return Err(BuildError::NotRadial(format!("f{}", i + 1)));
            }
        }
        Ok(())
    }
}

fn coords<T: Field>() -> [GeomScalar<T>; 3] {
    std::array::from_fn(GeomScalar::coord)
}

fn ih<T: Field>() -> GeomScalar<T> {
    GeomScalar::i().mul(&GeomScalar::hbar())
}

/// `1/r^k` inside the ring.
pub fn inv_r_pow<T: Field>(k: u32) -> GeomScalar<T> {
    GeomScalar::r().pow(-(k as i32)).expect("r is a unit")
}

fn scalar_op<T: Field>(c: GeomScalar<T>) -> Operator<T> {
    Operator::from_scalar(c)
}

fn matrix_op<T: Field>(m: TwoSpinMatrix<T>) -> Operator<T> {
    Operator::from_matrix(m)
}

/// `(x, p)`.
pub fn x_dot_p<T: Field>() -> Operator<T> {
    (0..3).fold(Operator::zero(), |acc, a| acc.add(&Operator::momentum(a).scale(&GeomScalar::coord(a))))
}

/// `(σ1, x)(σ2, x)`.
pub fn s4_matrix<T: Field>() -> TwoSpinMatrix<T> {
    let x = coords::<T>();
    TwoSpinMatrix::sigma1_dot(&x).mul(&TwoSpinMatrix::sigma2_dot(&x))
}

/// `(σ_slot, L)` for slot 1 or 2.
pub fn sigma_dot_l<T: Field>(slot: u8) -> Operator<T> {
    (0..3).fold(Operator::zero(), |acc, a| {
        let s = if slot == 1 { TwoSpinMatrix::sigma1(a) } else { TwoSpinMatrix::sigma2(a) };
        acc.add(&Operator::angular(a).left_mul_matrix(&s))
    })
}

/// `(σ_slot, p)` for slot 1 or 2.
pub fn sigma_dot_p<T: Field>(slot: u8) -> Operator<T> {
    (0..3).fold(Operator::zero(), |acc, a| {
        let s = if slot == 1 { TwoSpinMatrix::sigma1(a) } else { TwoSpinMatrix::sigma2(a) };
        acc.add(&Operator::momentum(a).left_mul_matrix(&s))
    })
}

/// The Hamiltonian
/// `-ħ²/2·Δ + V0 + V1·½(σ1+σ2, L) + V2(σ1,σ2) + V3(σ1,x)(σ2,x)
///  + ½{V4, (σ1,p)(σ2,p)} + V5·½((σ1,L)(σ2,L) + (σ2,L)(σ1,L))`.
pub fn build_hamiltonian<T: Field>(spec: &PotentialSpec<T>) -> Operator<T> {
    let half = Gaussian::ratio(1, 2);
    let hbar2 = GeomScalar::hbar().mul(&GeomScalar::hbar());
    let mut h = Operator::laplacian().scale(&hbar2.scale(&Gaussian::ratio(-1, 2)));
    let [v0, v1, v2, v3, v4, v5] = &spec.v;
    h = h.add(&scalar_op(v0.clone()));
    if !v1.is_zero() {
        let so = sigma_dot_l(1).add(&sigma_dot_l(2));
        h = h.add(&so.scale(&v1.scale(&half)));
    }
    if !v2.is_zero() {
        h = h.add(&matrix_op(TwoSpinMatrix::sigma_dot().scale(v2)));
    }
    if !v3.is_zero() {
        h = h.add(&matrix_op(s4_matrix().scale(v3)));
    }
    if !v4.is_zero() {
        let pp = sigma_dot_p(1).compose(&sigma_dot_p(2));
        let sym = pp.scale(v4).add(&pp.compose(&scalar_op(v4.clone())));
        h = h.add(&sym.scale_gaussian(&half));
    }
    if !v5.is_zero() {
        let (l1, l2) = (sigma_dot_l(1), sigma_dot_l(2));
        let qso = l1.compose(&l2).add(&l2.compose(&l1));
        h = h.add(&qso.scale(&v5.scale(&half)));
    }
    h
}

/// The unsymmetrized scalar construct `S_j` (1-based).
pub fn build_scalar_basis<T: Field>(j: usize) -> Result<Operator<T>, BuildError> {
    let x = coords::<T>();
    let op = match j {
        1 => Operator::identity(),
        2 => x_dot_p(),
        3 => matrix_op(TwoSpinMatrix::sigma_dot()),
        4 => matrix_op(s4_matrix()),
        5 => sigma_dot_p(2).left_mul_matrix(&TwoSpinMatrix::sigma1_dot(&x)),
        6 => sigma_dot_p(1).left_mul_matrix(&TwoSpinMatrix::sigma2_dot(&x)),
        7 => x_dot_p().left_mul_matrix(&TwoSpinMatrix::sigma_dot()),
        8 => sigma_dot_l(1),
        9 => sigma_dot_l(2),
        10 => x_dot_p().left_mul_matrix(&s4_matrix()),
        _ => return Err(BuildError::BasisIndex(j)),
    };
    Ok(op)
}

/// `Σ f_j S_j`, then symmetrized.
pub fn build_general_scalar<T: Field>(spec: &GeneralScalarSpec<T>) -> Result<Operator<T>, BuildError> {
    let mut acc = Operator::zero();
    for (j, f) in spec.f.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        acc = acc.add(&build_scalar_basis(j + 1)?.scale(f));
    }
    Ok(acc.symmetrize_first_order()?)
}

/// The general symmetric scalar operator exactly as printed, with symbolic
/// weights, for term-by-term comparison against [`build_general_scalar`].
pub fn printed_general_scalar<T: Field>() -> Operator<T> {
    let f = |j: u8| GeomScalar::<T>::func_name(FuncName::F(j));
    let fp = |j: u8| GeomScalar::<T>::func(crate::geomring::FuncSym::new(FuncName::F(j), 1));
    let r = GeomScalar::<T>::r();
    let k = |n: i64| Gaussian::<T>::from_i64(n);
    let minus_half_ih = ih::<T>().scale(&Gaussian::ratio(-1, 2));
    let s3 = TwoSpinMatrix::<T>::sigma_dot();
    let s4 = s4_matrix::<T>();
    let xp = x_dot_p::<T>();
    let x = coords::<T>();

    let c1 = f(1).add(&minus_half_ih.mul(&r.mul(&fp(2)).add(&f(2).scale(&k(3)))));
    let dil = TwoSpinMatrix::scalar(f(2)).add(&s3.scale(&f(7))).add(&s4.scale(&f(10)));
    let c3 = f(3).add(&minus_half_ih.mul(&GeomScalar::sum([&f(5), &f(6), &r.mul(&fp(7)), &f(7).scale(&k(3))])));
    let c4 = f(4).add(&minus_half_ih.mul(&GeomScalar::sum([&fp(5), &fp(6), &r.mul(&fp(10)), &f(10).scale(&k(5))])));

    scalar_op(c1)
        .add(&xp.left_mul_matrix(&dil))
        .add(&matrix_op(s3.scale(&c3)))
        .add(&matrix_op(s4.scale(&c4)))
        .add(&sigma_dot_p(2).left_mul_matrix(&TwoSpinMatrix::sigma1_dot(&x)).scale(&f(5)))
        .add(&sigma_dot_p(1).left_mul_matrix(&TwoSpinMatrix::sigma2_dot(&x)).scale(&f(6)))
        .add(&sigma_dot_l(1).scale(&f(8)))
        .add(&sigma_dot_l(2).scale(&f(9)))
}

/// Identifier of a catalogued integral of motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum IntegralId {
    Y(u8),
    J(u8),
    S(u8),
    P(u8),
    TrivialId,
    TrivialSigma,
}

impl IntegralId {
    pub fn all_y() -> impl Iterator<Item = IntegralId> {
        (1..=22).map(IntegralId::Y)
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralId::Y(n) => write!(f, "Y{n}"),
            IntegralId::J(n) => write!(f, "J{n}"),
            IntegralId::S(n) => write!(f, "S{n}"),
            IntegralId::P(n) => write!(f, "P{n}"),
            IntegralId::TrivialId => write!(f, "trivial_id"),
            IntegralId::TrivialSigma => write!(f, "trivial_sigma"),
        }
    }
}

impl FromStr for IntegralId {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BuildError::UnknownIntegral(s.to_string());
        match s {
            "trivial_id" => return Ok(IntegralId::TrivialId),
            "trivial_sigma" => return Ok(IntegralId::TrivialSigma),
            _ => {}
        }
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: u8 = tail.parse().map_err(|_| bad())?;
        let id = match head {
            "Y" if (1..=22).contains(&n) => IntegralId::Y(n),
            "J" if (1..=3).contains(&n) => IntegralId::J(n),
            "S" if (1..=3).contains(&n) => IntegralId::S(n),
            "P" if (1..=3).contains(&n) => IntegralId::P(n),
            _ => return Err(bad()),
        };
        Ok(id)
    }
}

impl TryFrom<String> for IntegralId {
    type Error = BuildError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<IntegralId> for String {
    fn from(id: IntegralId) -> String {
        id.to_string()
    }
}

/// `S = (σ1 + σ2)/2` along `axis`.
fn total_spin<T: Field>(axis: usize) -> TwoSpinMatrix<T> {
    TwoSpinMatrix::sigma1(axis).add(&TwoSpinMatrix::sigma2(axis)).scale_gaussian(&Gaussian::ratio(1, 2))
}

fn build_y<T: Field>(n: u8) -> Operator<T> {
    let k = |v: i64| Gaussian::<T>::from_i64(v);
    let ihb = ih::<T>();
    let inv_r = inv_r_pow::<T>(1);
    let inv_r2 = inv_r_pow::<T>(2);
    let inv_r3 = inv_r_pow::<T>(3);
    let s3 = TwoSpinMatrix::<T>::sigma_dot();
    let s4 = s4_matrix::<T>();
    let xp = x_dot_p::<T>();
    let basis = |j: usize| build_scalar_basis::<T>(j).expect("index in range");
    let l1 = sigma_dot_l::<T>(1);
    let l2 = sigma_dot_l::<T>(2);
    let hbar = GeomScalar::<T>::hbar();
    let beta = GeomScalar::<T>::constant(Constant::Beta);
    let s4_over_r2 = |c: GeomScalar<T>| matrix_op(s4.scale(&inv_r2.mul(&c)));
    match n {
        1 => l2,
        2 => l1,
        3 => {
            // (1/r²) S4 (−(x,p) + 3iħ/2) + S6
            let inner = xp.neg().add(&scalar_op(ihb.scale(&Gaussian::ratio(3, 2))));
            inner.left_mul_matrix(&s4.scale(&inv_r2)).add(&basis(6))
        }
        4 => {
            let one_plus = TwoSpinMatrix::identity().add(&s3);
            let t1 = scalar_op(ihb.mul(&inv_r).neg());
            let t2 = xp.left_mul_matrix(&one_plus.scale(&inv_r));
            let t3 = xp.neg().add(&scalar_op(ihb.clone())).left_mul_matrix(&s4.scale(&inv_r3.scale(&k(2))));
            let t4 = matrix_op(s3.scale(&ihb.mul(&inv_r).scale(&Gaussian::ratio(-1, 2))));
            t1.add(&t2).add(&t3).add(&t4)
        }
        5 => {
            let inner = xp.scale_gaussian(&k(-2)).add(&scalar_op(ihb.scale(&k(3))));
            basis(5).add(&basis(6)).add(&inner.left_mul_matrix(&s4.scale(&inv_r2)))
        }
        6 => s4_over_r2(GeomScalar::one()),
        7 => l1.add(&l2),
        8 => l1.sub(&l2),
        9 => basis(5).sub(&basis(6)),
        10 => l2.sub(&s4_over_r2(beta)),
        11 => l1.sub(&s4_over_r2(beta)),
        12 => l1.add(&l2).sub(&s4_over_r2(beta.scale(&k(2)))),
        13 => l2.sub(&s4_over_r2(hbar.scale(&Gaussian::ratio(1, 2)))),
        14 => l1.sub(&s4_over_r2(hbar.scale(&Gaussian::ratio(1, 2)))),
        15 => {
            let one_minus = TwoSpinMatrix::identity().sub(&s3);
            scalar_op(ihb.mul(&inv_r).neg())
                .add(&xp.left_mul_matrix(&one_minus.scale(&inv_r)))
                .add(&matrix_op(s3.scale(&ihb.mul(&inv_r))))
        }
        16 => {
            let eps = GeomScalar::<T>::constant(Constant::Eps);
            let w = GeomScalar::<T>::w();
            let r = GeomScalar::<T>::r();
            let a7h2 = GeomScalar::<T>::constant(Constant::ALPHA7).mul(&hbar).mul(&hbar);
            let lead = GeomScalar::one().add(&eps.mul(&w)).mul(&inv_r3);
            let t1 = xp.left_mul_matrix(&s4.scale(&lead));
            let t2 = matrix_op(s3.scale(&eps.mul(&ihb).mul(&w).mul(&inv_r).scale(&Gaussian::ratio(1, 2))));
            let paren = GeomScalar::sum([
                &GeomScalar::from_i64(4),
                &r.scale(&k(2)),
                &eps.mul(&w).scale(&k(2)),
                &a7h2.mul(&GeomScalar::s()).scale(&k(3)),
            ]);
            let inv_w = w.try_inverse().expect("w is a unit");
            let c3 = eps.mul(&ihb).mul(&paren).mul(&inv_r3).mul(&inv_w).scale(&Gaussian::ratio(-1, 2));
            let t3 = matrix_op(s4.scale(&c3));
            let t4 = basis(5).add(&basis(6)).scale(&eps.mul(&w).mul(&inv_r).scale(&Gaussian::ratio(-1, 2)));
            t1.add(&t2).add(&t3).add(&t4)
        }
        17 => l1.add(&l2).sub(&s4_over_r2(hbar)),
        18 => build_y::<T>(16).scale_gaussian(&k(4)).add(&build_y(15)),
        19 => l2.sub(&s4_over_r2(hbar.scale(&Gaussian::ratio(1, 6)))),
        20 => l1.sub(&s4_over_r2(hbar.scale(&Gaussian::ratio(1, 6)))),
        21 => {
            let f1 = GeomScalar::<T>::func_name(FuncName::F(1));
            let f7 = GeomScalar::<T>::func_name(FuncName::F(7));
            let f7p = f7.radial_derivative();
            let r = GeomScalar::<T>::r();
            let c0 = f1.add(&ihb.scale(&Gaussian::ratio(1, 2)).mul(&r.mul(&f7p).add(&f7.scale(&k(3)))));
            let inner = scalar_op(c0).sub(&xp.scale(&f7));
            inner.left_mul_matrix(&TwoSpinMatrix::identity().sub(&s3))
        }
        22 => {
            let f1 = GeomScalar::<T>::func_name(FuncName::F(1));
            matrix_op(TwoSpinMatrix::identity().sub(&s3).scale(&f1))
        }
        _ => unreachable!("Y index validated by IntegralId"),
    }
}

/// The integral of motion named by `id`, in normal order.
pub fn build_integral<T: Field>(id: IntegralId) -> Operator<T> {
    let hbar = GeomScalar::<T>::hbar();
    let inv_r2 = inv_r_pow::<T>(2);
    let x = coords::<T>();
    match id {
        IntegralId::Y(n) => build_y(n),
        IntegralId::J(n) => {
            let i = n as usize - 1;
            Operator::angular(i).add(&matrix_op(total_spin(i).scale(&hbar)))
        }
        IntegralId::S(n) => {
            let i = n as usize - 1;
            let s_dot_x = (0..3).fold(TwoSpinMatrix::zero(), |acc, a| acc.add(&total_spin(a).scale(&x[a])));
            let coeff = hbar.mul(&inv_r2).mul(&x[i]).scale(&Gaussian::from_i64(2));
            matrix_op(total_spin(i).scale(&hbar).neg().add(&s_dot_x.scale(&coeff)))
        }
        IntegralId::P(n) => {
            let i = n as usize - 1;
            let (k, l) = ((i + 1) % 3, (i + 2) % 3);
            // ε_ikl x_k S_l = x_k S_l − x_l S_k for (i, k, l) cyclic
            let cross = total_spin::<T>(l).scale(&x[k]).sub(&total_spin(k).scale(&x[l]));
            let coeff = hbar.mul(&inv_r2).scale(&Gaussian::from_i64(-2));
            Operator::momentum(i).add(&matrix_op(cross.scale(&coeff)))
        }
        IntegralId::TrivialId => Operator::identity(),
        IntegralId::TrivialSigma => matrix_op(TwoSpinMatrix::sigma_dot()),
    }
}

/// Cartesian forms of the trigonometric monomials appearing in `U`, keyed by
/// `(e^{iφ} power, cosθ power, sinθ power)`.
fn trig_entry<T: Field>(phase: i8, cos_pow: u8, sin_pow: u8) -> GeomScalar<T> {
    let x = GeomScalar::<T>::coord(0);
    let y = GeomScalar::<T>::coord(1);
    let z = GeomScalar::<T>::coord(2);
    let inv_s = GeomScalar::<T>::inv_s();
    let xp = x.add(&y.mul(&GeomScalar::i()));
    let xm = x.sub(&y.mul(&GeomScalar::i()));
    match (phase, cos_pow, sin_pow) {
        (2, 0, 2) => xp.mul(&xp).mul(&inv_s),
        (-2, 0, 2) => xm.mul(&xm).mul(&inv_s),
        (1, 1, 1) => xp.mul(&z).mul(&inv_s),
        (-1, 1, 1) => xm.mul(&z).mul(&inv_s),
        (0, 2, 0) => z.mul(&z).mul(&inv_s),
        (0, 0, 2) => x.mul(&x).add(&y.mul(&y)).mul(&inv_s),
        _ => unreachable!("monomial not used by U"),
    }
}

/// Layout of `U` as `(sign, phase, cos power, sin power)` per entry.
const U_LAYOUT: [[(i8, i8, u8, u8); 4]; 4] = [
    [(1, 2, 0, 2), (-1, 1, 1, 1), (-1, 1, 1, 1), (1, 0, 2, 0)],
    [(1, 1, 1, 1), (1, 0, 0, 2), (-1, 0, 2, 0), (-1, -1, 1, 1)],
    [(1, 1, 1, 1), (-1, 0, 2, 0), (1, 0, 0, 2), (-1, -1, 1, 1)],
    [(1, 0, 2, 0), (1, -1, 1, 1), (1, -1, 1, 1), (1, -2, 0, 2)],
];

/// The gauge matrix `U` with its trigonometric entries in Cartesian form.
pub fn build_gauge_matrix<T: Field>() -> TwoSpinMatrix<T> {
    let entries: [[GeomScalar<T>; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (sign, phase, c, s) = U_LAYOUT[i][j];
            trig_entry::<T>(phase, c, s).scale(&Gaussian::from_i64(sign as i64))
        })
    });
    TwoSpinMatrix::from_entries(&entries)
}

/// Largest deviation between the trigonometric entries of `U` and their
/// Cartesian forms over `samples` seeded random angle pairs.
pub fn gauge_trig_identity_error(seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let theta: f64 = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let radius: f64 = rng.gen_range(0.5..3.0);
        let point = [
            radius * theta.sin() * phi.cos(),
            radius * theta.sin() * phi.sin(),
            radius * theta.cos(),
        ];
        for (phase, c, s) in [(2i8, 0u8, 2u8), (-2, 0, 2), (1, 1, 1), (-1, 1, 1), (0, 2, 0), (0, 0, 2)] {
            let mag = theta.cos().powi(c as i32) * theta.sin().powi(s as i32);
            let (tr, ti) = (mag * (phase as f64 * phi).cos(), mag * (phase as f64 * phi).sin());
            let cart = trig_entry::<crate::Rational>(phase, c, s);
            let (er, ei) = cart.evaluate_at(point, &|_| None).expect("no constants");
            worst = worst.max((er - tr).abs()).max((ei - ti).abs());
        }
    }
    worst
}

/// Potentials induced by the gauge transformation, with `V0` left free.
pub fn gauge_potentials<T: Field>(v0: GeomScalar<T>) -> PotentialSpec<T> {
    let hbar = GeomScalar::<T>::hbar();
    let hbar2 = hbar.mul(&hbar);
    PotentialSpec {
        v: [
            v0,
            hbar.mul(&inv_r_pow(2)).scale(&Gaussian::from_i64(2)),
            hbar2.mul(&inv_r_pow(2)),
            hbar2.mul(&inv_r_pow(4)).neg(),
            GeomScalar::zero(),
            GeomScalar::zero(),
        ],
    }
}

/// The transformed Hamiltonian as printed:
/// `H + 2ħ²/r² + (ħ/r²)(σ1+σ2,L) + (ħ²/r²)(σ1,σ2) − (ħ²/r⁴)(σ1,x)(σ2,x)`
/// with `H = −ħ²/2·Δ + V0`.
pub fn printed_gauge_hamiltonian<T: Field>(v0: GeomScalar<T>) -> Operator<T> {
    let hbar = GeomScalar::<T>::hbar();
    let hbar2 = hbar.mul(&hbar);
    let base = scalar_hamiltonian(v0);
    base.add(&scalar_op(hbar2.mul(&inv_r_pow(2)).scale(&Gaussian::from_i64(2))))
        .add(&sigma_dot_l(1).add(&sigma_dot_l(2)).scale(&hbar.mul(&inv_r_pow(2))))
        .add(&matrix_op(TwoSpinMatrix::sigma_dot().scale(&hbar2.mul(&inv_r_pow(2)))))
        .add(&matrix_op(s4_matrix().scale(&hbar2.mul(&inv_r_pow(4)).neg())))
}

/// `−ħ²/2·Δ + V0` times the identity matrix.
pub fn scalar_hamiltonian<T: Field>(v0: GeomScalar<T>) -> Operator<T> {
    let hbar2 = GeomScalar::<T>::hbar().mul(&GeomScalar::hbar());
    Operator::laplacian().scale(&hbar2.scale(&Gaussian::ratio(-1, 2))).add(&scalar_op(v0))
}

/// `U⁻¹ H U` for the scalar Hamiltonian, using `U⁻¹ = U†`.
pub fn gauge_transformed_hamiltonian<T: Field>(v0: GeomScalar<T>) -> Operator<T> {
    let u = build_gauge_matrix::<T>();
    let h = scalar_hamiltonian(v0);
    matrix_op(u.adjoint()).compose(&h).compose(&matrix_op(u))
}
