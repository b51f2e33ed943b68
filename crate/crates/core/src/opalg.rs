//! Normal-ordered matrix differential operators `Σ c_α ∂^α` with
//! [`TwoSpinMatrix`] coefficients standing to the left of every derivative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, Gaussian};
use crate::geomring::{GeomScalar, RingError};
use crate::spinalg::{Accumulator, TwoSpinMatrix};

/// Exponents of `∂x, ∂y, ∂z`.
pub type Deriv = [u8; 3];

pub const NO_DERIV: Deriv = [0, 0, 0];

pub fn deriv_order(d: &Deriv) -> u32 {
    d.iter().map(|&e| e as u32).sum()
}

pub fn unit_deriv(axis: usize) -> Deriv {
    let mut d = NO_DERIV;
    d[axis] = 1;
    d
}

fn binomial(n: u8, k: u8) -> i64 {
    (0..k as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

/// All `γ ≤ α` componentwise with the multinomial weight `C(α, γ)`.
fn sub_multi_indices(alpha: &Deriv) -> Vec<(Deriv, i64)> {
    let mut out = Vec::new();
    for a in 0..=alpha[0] {
        for b in 0..=alpha[1] {
            for c in 0..=alpha[2] {
                let w = binomial(alpha[0], a) * binomial(alpha[1], b) * binomial(alpha[2], c);
                out.push(([a, b, c], w));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("symmetrization needs an operator of order at most one, got order {0}")]
    OrderTooHigh(u32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Normal-ordered matrix differential operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator<T> {
    terms: BTreeMap<Deriv, TwoSpinMatrix<T>>,
}

impl<T: Field> Operator<T> {
    pub fn zero() -> Self {
        Operator { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::from_matrix(TwoSpinMatrix::identity())
    }

    /// Multiplication operator by a matrix.
    pub fn from_matrix(m: TwoSpinMatrix<T>) -> Self {
        Self::term(NO_DERIV, m)
    }

    /// Multiplication operator by a ring element (times the identity matrix).
    pub fn from_scalar(c: GeomScalar<T>) -> Self {
        Self::from_matrix(TwoSpinMatrix::scalar(c))
    }

    pub fn term(d: Deriv, m: TwoSpinMatrix<T>) -> Self {
        let mut op = Self::zero();
        if !m.is_zero() {
            op.terms.insert(d, m);
        }
        op
    }

    /// Bare derivative `∂^d`.
    pub fn derivative(d: Deriv) -> Self {
        Self::term(d, TwoSpinMatrix::identity())
    }

    /// `p_axis = -i·hbar·∂_axis`.
    pub fn momentum(axis: usize) -> Self {
        let c = GeomScalar::i().mul(&GeomScalar::hbar()).neg();
        Self::term(unit_deriv(axis), TwoSpinMatrix::scalar(c))
    }

    /// `L1 = i·hbar(z∂y - y∂z)` and cyclic.
    pub fn angular(axis: usize) -> Self {
        let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
        let ih = GeomScalar::i().mul(&GeomScalar::hbar());
        let mut op = Self::zero();
        op.add_term(unit_deriv(j), TwoSpinMatrix::scalar(ih.mul(&GeomScalar::coord(k))));
        op.add_term(unit_deriv(k), TwoSpinMatrix::scalar(ih.mul(&GeomScalar::coord(j)).neg()));
        op
    }

    pub fn laplacian() -> Self {
        let mut op = Self::zero();
        for axis in 0..3 {
            let mut d = NO_DERIV;
            d[axis] = 2;
            op.add_term(d, TwoSpinMatrix::identity());
        }
        op
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Deriv, &TwoSpinMatrix<T>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &Deriv) -> Option<&TwoSpinMatrix<T>> {
        self.terms.get(d)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(deriv_order).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, d: Deriv, m: TwoSpinMatrix<T>) {
        if m.is_zero() {
            return;
        }
        let sum = match self.terms.get(&d) {
            Some(old) => old.add(&m),
            None => m,
        };
        if sum.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, m) in &other.terms {
            out.add_term(*d, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|m| m.neg())
    }

    /// Left multiplication by a ring element.
    pub fn scale(&self, c: &GeomScalar<T>) -> Self {
        self.map_coeffs(|m| m.scale(c))
    }

    pub fn scale_gaussian(&self, c: &Gaussian<T>) -> Self {
        self.map_coeffs(|m| m.scale_gaussian(c))
    }

    /// Left multiplication by a matrix.
    pub fn left_mul_matrix(&self, a: &TwoSpinMatrix<T>) -> Self {
        self.map_coeffs(|m| a.mul(m))
    }

    pub fn map_coeffs(&self, f: impl Fn(&TwoSpinMatrix<T>) -> TwoSpinMatrix<T>) -> Self {
        let mut out = Self::zero();
        for (d, m) in &self.terms {
            out.add_term(*d, f(m));
        }
        out
    }

    pub fn try_map_coeffs<E>(&self, f: impl Fn(&TwoSpinMatrix<T>) -> Result<TwoSpinMatrix<T>, E>) -> Result<Self, E> {
        let mut out = Self::zero();
        for (d, m) in &self.terms {
            out.add_term(*d, f(m)?);
        }
        Ok(out)
    }

    /// Normal-ordered product `self ∘ other`, moving each derivative of `self`
    /// past the coefficients of `other` by the multi-index Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let mut cache: HashMap<(Deriv, Deriv), TwoSpinMatrix<T>> = HashMap::new();
        let max_gamma = self.terms.keys().fold(NO_DERIV, |acc, a| [acc[0].max(a[0]), acc[1].max(a[1]), acc[2].max(a[2])]);
        for (beta, b) in &other.terms {
            for (gamma, _) in sub_multi_indices(&max_gamma) {
                derivative_cached(&mut cache, *beta, b, gamma);
            }
        }
        let jobs: Vec<(Deriv, &TwoSpinMatrix<T>, Deriv, i64)> = self
            .terms
            .iter()
            .flat_map(|(alpha, a)| {
                sub_multi_indices(alpha).into_iter().map(move |(gamma, w)| (*alpha, a, gamma, w))
            })
            .collect();
        let partials: Vec<BTreeMap<Deriv, Accumulator<T>>> = jobs
            .par_iter()
            .map(|(alpha, a, gamma, w)| {
                let mut local: BTreeMap<Deriv, Accumulator<T>> = BTreeMap::new();
                let weight = Gaussian::from_i64(*w);
                for beta in other.terms.keys() {
                    let db = &cache[&(*beta, *gamma)];
                    if db.is_zero() {
                        continue;
                    }
                    let key = [alpha[0] - gamma[0] + beta[0], alpha[1] - gamma[1] + beta[1], alpha[2] - gamma[2] + beta[2]];
                    local.entry(key).or_default().add_product(a, db, &weight);
                }
                local
            })
            .collect();
        let mut merged: BTreeMap<Deriv, Vec<Accumulator<T>>> = BTreeMap::new();
        for part in partials {
            for (k, acc) in part {
                merged.entry(k).or_default().push(acc);
            }
        }
        let finished: Vec<(Deriv, TwoSpinMatrix<T>)> = merged
            .into_par_iter()
            .map(|(k, accs)| {
                let mut total = Accumulator::new();
                for acc in accs {
                    total.absorb(acc);
                }
                (k, total.finish())
            })
            .collect();
        let mut out = Self::zero();
        for (k, m) in finished {
            if !m.is_zero() {
                out.terms.insert(k, m);
            }
        }
        out
    }

    /// `[A, B] = A∘B - B∘A`.
    pub fn commutator(&self, other: &Self) -> Self {
        let (ab, ba) = rayon::join(|| self.compose(other), || other.compose(self));
        ab.sub(&ba)
    }

    /// Formal adjoint with `x† = x`, `p† = p`, `i† = -i`, self-adjoint spin
    /// labels: `(c ∂^α)† = (-1)^|α| ∂^α ∘ c†`, re-normal-ordered.
    pub fn adjoint(&self) -> Self {
        let mut out: BTreeMap<Deriv, Accumulator<T>> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            let sign = if deriv_order(alpha).is_multiple_of(2) { 1 } else { -1 };
            let cd = c.adjoint();
            let mut cache: HashMap<(Deriv, Deriv), TwoSpinMatrix<T>> = HashMap::new();
            for (gamma, w) in sub_multi_indices(alpha) {
                let d = derivative_cached(&mut cache, *alpha, &cd, gamma);
                let key = [alpha[0] - gamma[0], alpha[1] - gamma[1], alpha[2] - gamma[2]];
                out.entry(key).or_default().add(&d.scale_gaussian(&Gaussian::from_i64(sign * w)));
            }
        }
        let mut op = Self::zero();
        for (k, acc) in out {
            let m = acc.finish();
            if !m.is_zero() {
                op.terms.insert(k, m);
            }
        }
        op
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// Weyl symmetrization of an operator of order at most one:
    /// `c0 + Σ c_k ∂_k ↦ c0 + Σ c_k ∂_k + ½ Σ ∂_k(c_k)`, which equals the
    /// anticommutator form `½{c, p_k}` for each first-order term.
    pub fn symmetrize_first_order(&self) -> Result<Self, OpError> {
        let order = self.order();
        if order > 1 {
            return Err(OpError::OrderTooHigh(order));
        }
        let mut out = self.clone();
        let half = Gaussian::ratio(1, 2);
        for axis in 0..3 {
            if let Some(c) = self.terms.get(&unit_deriv(axis)) {
                out.add_term(NO_DERIV, c.partial(axis).scale_gaussian(&half));
            }
        }
        Ok(out)
    }

    /// Applies a ring substitution to every coefficient.
    pub fn substitute(
        &self,
        funcs: &crate::geomring::FuncBindings<T>,
        consts: &crate::geomring::ConstBindings<T>,
    ) -> Result<Self, RingError> {
        self.try_map_coeffs(|m| m.try_map(|c| c.substitute(funcs, consts)))
    }

    /// True when no coefficient contains a function symbol.
    pub fn is_concrete(&self) -> bool {
        self.terms.values().all(|m| m.iter().all(|(_, c)| c.is_concrete()))
    }

    /// Number of nonzero (derivative, spin label) coefficient slots.
    pub fn coefficient_count(&self) -> usize {
        self.terms.values().map(|m| m.iter().count()).sum()
    }
}

fn derivative_cached<T: Field>(
    cache: &mut HashMap<(Deriv, Deriv), TwoSpinMatrix<T>>,
    key: Deriv,
    base: &TwoSpinMatrix<T>,
    gamma: Deriv,
) -> TwoSpinMatrix<T> {
    if let Some(m) = cache.get(&(key, gamma)) {
        return m.clone();
    }
    let result = match gamma.iter().position(|&e| e > 0) {
        None => base.clone(),
        Some(axis) => {
            let mut lower = gamma;
            lower[axis] -= 1;
            derivative_cached(cache, key, base, lower).partial(axis)
        }
    };
    cache.insert((key, gamma), result.clone());
    result
}

impl<T: Field> Default for Operator<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Field> fmt::Display for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (d, m)) in self.terms.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "[d{}{}{}] {}", d[0], d[1], d[2], m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomring::{FuncName, FuncSym};
    use num_rational::BigRational;

    type Op = Operator<BigRational>;
    type G = GeomScalar<BigRational>;

    fn mult(c: G) -> Op {
        Op::from_scalar(c)
    }

    #[test]
    fn canonical_commutation() {
        let dx = Op::derivative(unit_deriv(0));
        let got = dx.compose(&mult(G::coord(0)));
        let expected = mult(G::coord(0)).compose(&dx).add(&Op::identity());
        assert_eq!(got, expected);
    }

    #[test]
    fn x_p_commutator() {
        let c = mult(G::coord(0)).commutator(&Op::momentum(0));
        assert_eq!(c, mult(G::i().mul(&G::hbar())));
    }

    #[test]
    fn angular_momentum_algebra() {
        let c = Op::angular(0).commutator(&Op::angular(1));
        let expected = Op::angular(2).scale(&G::i().mul(&G::hbar()));
        assert_eq!(c, expected);
    }

    #[test]
    fn angular_kills_radial_functions() {
        let g = mult(G::func_name(FuncName::F(3)));
        for axis in 0..3 {
            assert!(Op::angular(axis).commutator(&g).is_zero());
        }
    }

    #[test]
    fn dilation_commutator_with_radial_function() {
        let xp = (0..3).fold(Op::zero(), |acc, a| acc.add(&mult(G::coord(a)).compose(&Op::momentum(a))));
        let f = G::func_name(FuncName::F(1));
        let got = xp.commutator(&mult(f));
        let fp = G::func(FuncSym::new(FuncName::F(1), 1));
        let expected = mult(G::i().mul(&G::hbar()).mul(&G::r()).mul(&fp).neg());
        assert_eq!(got, expected);
    }

    #[test]
    fn l_dot_x_vanishes() {
        let lx = (0..3).fold(Op::zero(), |acc, a| acc.add(&Op::angular(a).compose(&mult(G::coord(a)))));
        assert!(lx.is_zero());
    }

    #[test]
    fn momentum_is_symmetric() {
        assert_eq!(Op::momentum(1).adjoint(), Op::momentum(1));
        assert_eq!(Op::derivative(unit_deriv(0)).adjoint(), Op::derivative(unit_deriv(0)).neg());
    }

    #[test]
    fn symmetrize_dilation() {
        let f2 = G::func_name(FuncName::F(2));
        let xp = (0..3).fold(Op::zero(), |acc, a| acc.add(&mult(G::coord(a).mul(&f2)).compose(&Op::momentum(a))));
        let sym = xp.symmetrize_first_order().unwrap();
        let f2p = G::func(FuncSym::new(FuncName::F(2), 1));
        let corr = G::r().mul(&f2p).add(&f2.scale(&Gaussian::from_i64(3)));
        let expected = xp.add(&mult(corr.mul(&G::i()).mul(&G::hbar()).scale(&Gaussian::ratio(-1, 2))));
        assert_eq!(sym, expected);
        assert!(sym.is_hermitian());
    }
}
