//! Sparse numerators of ring elements.
//!
//! A monomial is `x^a y^b z^c r^k w^e` times a Laurent monomial in constants
//! and a monomial in radial function symbols, with `a, e` at most one and `k`
//! any integer. Products keep this shape through `x² = r² - y² - z²` and
//! `w² = q = 2 + alpha7·hbar²·r²`, so the representation is unique.

use std::cmp::Ordering;
use std::collections::btree_map::{BTreeMap, Entry};

use num_traits::Zero;
use smallvec::SmallVec;

use super::symbol::{Constant, FuncSym};
use crate::field::{Field, Gaussian};

pub(crate) type ConstPowers = SmallVec<[(Constant, i16); 3]>;
pub(crate) type FuncPowers = SmallVec<[(FuncSym, u16); 2]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub(crate) xyz: [u16; 3],
    pub(crate) r: i16,
    pub(crate) w: bool,
    pub(crate) consts: ConstPowers,
    pub(crate) funcs: FuncPowers,
}

impl Ord for Monomial {
    /// Graded lexicographic on `x, y, z` (higher degree first), then higher
    /// powers of `r`, then `w`, then function symbols, then constants.
    fn cmp(&self, other: &Self) -> Ordering {
        let d1: u32 = self.xyz.iter().map(|&e| e as u32).sum();
        let d2: u32 = other.xyz.iter().map(|&e| e as u32).sum();
        d2.cmp(&d1)
            .then_with(|| other.xyz.cmp(&self.xyz))
            .then_with(|| other.r.cmp(&self.r))
            .then_with(|| other.w.cmp(&self.w))
            .then_with(|| self.funcs.cmp(&other.funcs))
            .then_with(|| self.consts.cmp(&other.consts))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn merge_consts(a: &ConstPowers, b: &ConstPowers) -> ConstPowers {
    let mut out = ConstPowers::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let pick = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        let (c, e) = match pick {
            Ordering::Less => {
                i += 1;
                a[i - 1]
            }
            Ordering::Greater => {
                j += 1;
                b[j - 1]
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1 + b[j - 1].1)
            }
        };
        let e = if c == Constant::Eps { e.rem_euclid(2) } else { e };
        if e != 0 {
            out.push((c, e));
        }
    }
    out
}

fn merge_funcs(a: &FuncPowers, b: &FuncPowers) -> FuncPowers {
    let mut out = FuncPowers::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                out.push((x.0, x.1 + y.1));
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub(crate) fn alpha7_hbar2() -> ConstPowers {
    let mut c = ConstPowers::new();
    c.push((Constant::Hbar, 2));
    c.push((Constant::ALPHA7, 1));
    c
}

fn inv_alpha7_hbar2() -> ConstPowers {
    let mut c = ConstPowers::new();
    c.push((Constant::Hbar, -2));
    c.push((Constant::ALPHA7, -1));
    c
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.xyz == [0, 0, 0] && self.r == 0 && !self.w && self.consts.is_empty() && self.funcs.is_empty()
    }

    pub fn var(axis: usize) -> Self {
        let mut m = Monomial::one();
        m.xyz[axis] = 1;
        m
    }

    pub fn r_pow(k: i16) -> Self {
        Monomial { r: k, ..Monomial::one() }
    }

    pub fn constant(c: Constant, exp: i16) -> Self {
        let mut m = Monomial::one();
        let e = if c == Constant::Eps { exp.rem_euclid(2) } else { exp };
        if e != 0 {
            m.consts.push((c, e));
        }
        m
    }

    pub fn func(sym: FuncSym) -> Self {
        let mut m = Monomial::one();
        m.funcs.push((sym, 1));
        m
    }

    pub fn xyz(&self) -> [u16; 3] {
        self.xyz
    }

    /// Exponent of `r`, possibly negative.
    pub fn r_exp(&self) -> i16 {
        self.r
    }

    pub fn has_w(&self) -> bool {
        self.w
    }

    pub fn consts(&self) -> &[(Constant, i16)] {
        &self.consts
    }

    pub fn funcs(&self) -> &[(FuncSym, u16)] {
        &self.funcs
    }

    pub fn has_position(&self) -> bool {
        self.xyz != [0, 0, 0]
    }

    /// Product of the monomial parts. The flags report an `x²` and a `w²`,
    /// which the caller rewrites.
    pub fn mul(&self, other: &Monomial) -> (Monomial, bool, bool) {
        let x = self.xyz[0] + other.xyz[0];
        let m = Monomial {
            xyz: [x, self.xyz[1] + other.xyz[1], self.xyz[2] + other.xyz[2]],
            r: self.r + other.r,
            w: self.w ^ other.w,
            consts: if other.consts.is_empty() {
                self.consts.clone()
            } else if self.consts.is_empty() {
                other.consts.clone()
            } else {
                merge_consts(&self.consts, &other.consts)
            },
            funcs: if other.funcs.is_empty() {
                self.funcs.clone()
            } else if self.funcs.is_empty() {
                other.funcs.clone()
            } else {
                merge_funcs(&self.funcs, &other.funcs)
            },
        };
        (m, x >= 2, self.w && other.w)
    }

    pub(crate) fn times_consts(&self, consts: &ConstPowers) -> Monomial {
        let mut m = self.clone();
        m.consts = merge_consts(&self.consts, consts);
        m
    }

    /// One factor of `funcs[idx]` replaced by its radial derivative.
    pub(crate) fn with_func_replaced(&self, idx: usize) -> Monomial {
        let mut m = self.clone();
        let (sym, e) = m.funcs[idx];
        if e == 1 {
            m.funcs.remove(idx);
        } else {
            m.funcs[idx].1 = e - 1;
        }
        let mut d = FuncPowers::new();
        d.push((sym.derivative(), 1));
        m.funcs = merge_funcs(&m.funcs, &d);
        m
    }
}

/// Sparse polynomial with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    pub(crate) terms: BTreeMap<Monomial, Gaussian<T>>,
}

impl<T: Field> Poly<T> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(m: Monomial, c: Gaussian<T>) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Gaussian<T>)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Gaussian<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, m: &Monomial, c: &Gaussian<T>) {
        if c.is_zero() {
            return;
        }
        if let Some(v) = self.terms.get_mut(m) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(m);
            }
        } else {
            self.terms.insert(m.clone(), c.clone());
        }
    }

    /// Adds `c·m·q` (expanding `q`).
    fn add_times_q(&mut self, m: &Monomial, c: &Gaussian<T>) {
        self.add_term_ref(m, &c.scale(&T::from_i64(2)));
        let mut high = m.times_consts(&alpha7_hbar2());
        high.r += 2;
        self.add_term(high, c.clone());
    }

    /// Adds `c·m` where `m` came out of a monomial product with collision flags.
    pub(crate) fn add_product(&mut self, m: &Monomial, xx: bool, ww: bool, c: &Gaussian<T>) {
        if !xx {
            if ww {
                self.add_times_q(m, c);
            } else {
                self.add_term_ref(m, c);
            }
            return;
        }
        let mut base = m.clone();
        base.xyz[0] -= 2;
        let mut r2 = base.clone();
        r2.r += 2;
        let mut y2 = base.clone();
        y2.xyz[1] += 2;
        let mut z2 = base;
        z2.xyz[2] += 2;
        let neg = -c.clone();
        for (t, k) in [(r2, c), (y2, &neg), (z2, &neg)] {
            if ww {
                self.add_times_q(&t, k);
            } else {
                self.add_term(t, k.clone());
            }
        }
    }

    pub fn add_assign_poly(&mut self, other: &Poly<T>) {
        for (m, c) in &other.terms {
            self.add_term_ref(m, c);
        }
    }

    pub fn neg(&self) -> Poly<T> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &Gaussian<T>) -> Poly<T> {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &Gaussian<T>) -> Poly<T> {
        let mut out = Poly::zero();
        for (mm, c) in &self.terms {
            let (p, xx, ww) = mm.mul(m);
            out.add_product(&p, xx, ww, &(c * k));
        }
        out
    }

    pub fn mul(&self, other: &Poly<T>) -> Poly<T> {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Poly::zero();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                let (p, xx, ww) = m1.mul(m2);
                out.add_product(&p, xx, ww, &(c1 * c2));
            }
        }
        out
    }

    /// Multiplies by `r^k`.
    pub fn shift_r(&self, k: i16) -> Poly<T> {
        if k == 0 {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.clone();
                    mm.r += k;
                    (mm, c.clone())
                })
                .collect(),
        }
    }

    pub fn mul_q(&self) -> Poly<T> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_times_q(m, c);
        }
        out
    }

    pub fn mul_q_pow(&self, k: u32) -> Poly<T> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.mul_q();
        }
        out
    }

    /// Exact quotient by `q`, or `None` when `q` does not divide.
    ///
    /// Long division in `r`: the leading part `alpha7·hbar²·r²` of `q` is a
    /// unit, so every term of top degree is eliminated exactly, and `q`
    /// divides iff nothing survives below the lowest degree plus two.
    pub fn div_q_exact(&self) -> Option<Poly<T>> {
        let Some(min_r) = self.terms.keys().map(|m| m.r).min() else {
            return Some(Poly::zero());
        };
        let mut buckets: BTreeMap<i16, Poly<T>> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets.entry(m.r).or_default().add_term_ref(m, c);
        }
        let inv = inv_alpha7_hbar2();
        let minus_two = Gaussian::<T>::from_i64(-2);
        let mut quo = Poly::zero();
        while let Some((top, bucket)) = buckets.pop_last() {
            if bucket.is_zero() {
                continue;
            }
            if top < min_r + 2 {
                return None;
            }
            let below = buckets.entry(top - 2).or_default();
            for (m, c) in bucket.terms {
                let mut qm = m.times_consts(&inv);
                qm.r -= 2;
                below.add_term_ref(&qm, &(&c * &minus_two));
                quo.add_term(qm, c);
            }
        }
        Some(quo)
    }

    pub fn conj(&self) -> Poly<T> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    /// Smallest power of `r` among the terms.
    pub fn min_r(&self) -> Option<i16> {
        self.terms.keys().map(|m| m.r).min()
    }
}

impl<T: Field> Default for Poly<T> {
    fn default() -> Self {
        Poly::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    type P = Poly<BigRational>;

    fn one() -> Gaussian<BigRational> {
        Gaussian::one()
    }

    fn q() -> P {
        P::term(Monomial::one(), one()).mul_q()
    }

    #[test]
    fn x_squared_reduces() {
        let x = P::term(Monomial::var(0), one());
        let mut expected = P::term(Monomial::r_pow(2), one());
        expected.add_term(Monomial { xyz: [0, 2, 0], ..Monomial::one() }, -one());
        expected.add_term(Monomial { xyz: [0, 0, 2], ..Monomial::one() }, -one());
        assert_eq!(x.mul(&x), expected);
    }

    #[test]
    fn w_squared_is_q() {
        let w = P::term(Monomial { w: true, ..Monomial::one() }, one());
        assert_eq!(w.mul(&w), q());
    }

    #[test]
    fn exact_division_by_q() {
        let x = P::term(Monomial::var(0), one());
        let prod = x.shift_r(-3).mul_q().mul_q();
        assert_eq!(prod.div_q_exact().unwrap().div_q_exact().unwrap(), x.shift_r(-3));
        assert!(x.div_q_exact().is_none());
        let mut almost = q();
        almost.add_term(Monomial::one(), one());
        assert!(almost.div_q_exact().is_none());
        assert!(P::zero().div_q_exact().unwrap().is_zero());
    }

    #[test]
    fn eps_squares_to_one() {
        let e = Monomial::constant(Constant::Eps, 1);
        let (m, _, _) = e.mul(&e);
        assert!(m.is_one());
    }
}
