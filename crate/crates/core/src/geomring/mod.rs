//! Exact commutative coefficient ring.
//!
//! Elements are `N / q^n` where `N` is a [`Poly`] and
//! `q = 2 + alpha7·hbar²·r²`. The numerator is a Laurent polynomial in `r`
//! over `x, y, z`, with `x` reduced to degree one through
//! `x² = r² - y² - z²` and the radical `w = √q` to degree one. Canonical
//! form cancels every `q` that divides the numerator, so structural equality
//! is ring equality.

mod poly;
pub mod symbol;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Float, One, Zero};
use thiserror::Error;

pub use poly::{Monomial, Poly};
pub use symbol::{Constant, FuncName, FuncSym};

use crate::field::{Field, Gaussian};
pub(crate) use poly::ConstPowers;
use poly::alpha7_hbar2;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("element is not a unit of the coefficient ring")]
    NotUnit,
    #[error("derivative symbol {0} cannot be bound directly; bind its base symbol")]
    DerivativeBinding(FuncSym),
    #[error("constant {0} enters the admitted radical and cannot be substituted")]
    RadicalConstant(Constant),
    #[error("binding for {0} is zero but appears with a negative power")]
    ZeroDivisor(Constant),
    #[error("substitution did not reach a fixed point (cyclic bindings?)")]
    Cyclic,
    #[error("unbound symbol {0} during numeric evaluation")]
    Unbound(String),
    #[error("evaluation at the origin")]
    Origin,
    #[error("radical atom {0} is irrational at the evaluation point")]
    Irrational(&'static str),
}

/// Element of the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomScalar<T> {
    num: Poly<T>,
    q_pow: u32,
}

/// Bindings of order-zero function symbols used by [`GeomScalar::substitute`].
pub type FuncBindings<T> = BTreeMap<FuncName, GeomScalar<T>>;
/// Bindings of named constants used by [`GeomScalar::substitute`].
pub type ConstBindings<T> = BTreeMap<Constant, Gaussian<T>>;

impl<T: Field> GeomScalar<T> {
    pub fn zero() -> Self {
        GeomScalar { num: Poly::zero(), q_pow: 0 }
    }

    pub fn one() -> Self {
        Self::from_gaussian(Gaussian::one())
    }

    pub fn from_gaussian(c: Gaussian<T>) -> Self {
        Self::from_monomial(Monomial::one(), c)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_gaussian(Gaussian::from_i64(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_gaussian(Gaussian::ratio(n, d))
    }

    pub fn i() -> Self {
        Self::from_gaussian(Gaussian::i())
    }

    /// A single term; `m` must already be reduced.
    pub fn from_monomial(m: Monomial, c: Gaussian<T>) -> Self {
        GeomScalar { num: Poly::term(m, c), q_pow: 0 }
    }

    /// Coordinate `x`, `y` or `z` for `axis` 0, 1, 2.
    pub fn coord(axis: usize) -> Self {
        Self::from_monomial(Monomial::var(axis), Gaussian::one())
    }

    pub fn r() -> Self {
        Self::r_pow(1)
    }

    /// `r^k` for any integer `k`.
    pub fn r_pow(k: i16) -> Self {
        Self::from_monomial(Monomial::r_pow(k), Gaussian::one())
    }

    /// The radical atom `w = sqrt(2 + alpha7·hbar²·r²)`.
    pub fn w() -> Self {
        let mut m = Monomial::one();
        m.w = true;
        Self::from_monomial(m, Gaussian::one())
    }

    /// `s = x²+y²+z² = r²`.
    pub fn s() -> Self {
        Self::r_pow(2)
    }

    /// `q = 2 + alpha7·hbar²·r²`.
    pub fn q() -> Self {
        GeomScalar { num: Poly::term(Monomial::one(), Gaussian::one()).mul_q(), q_pow: 0 }
    }

    /// `s^-1`.
    pub fn inv_s() -> Self {
        Self::r_pow(-2)
    }

    pub fn constant(c: Constant) -> Self {
        Self::from_monomial(Monomial::constant(c, 1), Gaussian::one())
    }

    pub fn hbar() -> Self {
        Self::constant(Constant::Hbar)
    }

    pub fn func(sym: FuncSym) -> Self {
        Self::from_monomial(Monomial::func(sym), Gaussian::one())
    }

    pub fn func_name(name: FuncName) -> Self {
        Self::func(FuncSym::base(name))
    }

    /// Builds a canonical element `num / q^q_pow`.
    pub fn from_parts(num: Poly<T>, q_pow: u32) -> Self {
        let mut g = GeomScalar { num, q_pow };
        g.normalize();
        g
    }

    pub fn numerator(&self) -> &Poly<T> {
        &self.num
    }

    pub fn q_pow(&self) -> u32 {
        self.q_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q_pow == 0 && self.num.len() == 1 && self.num.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The constant value when the element is a bare Gaussian rational.
    pub fn as_gaussian(&self) -> Option<Gaussian<T>> {
        if self.is_zero() {
            return Some(Gaussian::zero());
        }
        if self.q_pow != 0 || self.num.len() != 1 {
            return None;
        }
        let (m, c) = self.num.iter().next()?;
        m.is_one().then(|| c.clone())
    }

    pub fn term_count(&self) -> usize {
        self.num.len()
    }

    fn uses_radical(&self) -> bool {
        self.q_pow > 0 || self.num.iter().any(|(m, _)| m.w)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.q_pow = 0;
            return;
        }
        while self.q_pow > 0 {
            match self.num.div_q_exact() {
                Some(p) => {
                    self.num = p;
                    self.q_pow -= 1;
                }
                None => break,
            }
        }
    }

    fn raised_to(&self, q_pow: u32) -> Poly<T> {
        self.num.mul_q_pow(q_pow - self.q_pow)
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let qp = self.q_pow.max(other.q_pow);
        let mut num = self.raised_to(qp);
        num.add_assign_poly(&other.raised_to(qp));
        Self::from_parts(num, qp)
    }

    /// Sum of many elements over a common denominator, normalized once.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        T: 'a,
    {
        let items: Vec<&Self> = items.into_iter().filter(|g| !g.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(),
            1 => return Self::from_parts(items[0].num.clone(), items[0].q_pow),
            _ => {}
        }
        let qp = items.iter().map(|g| g.q_pow).max().unwrap_or(0);
        let mut num = Poly::zero();
        for g in items {
            if g.q_pow == qp {
                num.add_assign_poly(&g.num);
            } else {
                num.add_assign_poly(&g.raised_to(qp));
            }
        }
        Self::from_parts(num, qp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GeomScalar { num: self.num.neg(), q_pow: self.q_pow }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_gaussian() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_gaussian() {
            return other.scale(&c);
        }
        Self::from_parts(self.num.mul(&other.num), self.q_pow + other.q_pow)
    }

    /// Product without cancelling common factors; only for feeding [`Self::sum`].
    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        GeomScalar { num: self.num.mul(&other.num), q_pow: self.q_pow + other.q_pow }
    }

    pub fn scale(&self, c: &Gaussian<T>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GeomScalar { num: self.num.scale(c), q_pow: self.q_pow }
    }

    pub fn pow(&self, e: i32) -> Result<Self, RingError> {
        let base = if e < 0 { self.try_inverse()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        GeomScalar { num: self.num.conj(), q_pow: self.q_pow }
    }

    /// Inverse of a unit `c·K·r^a·w^b·q^l` (`K` a Laurent monomial in
    /// constants, `a`, `l` any integers, `b` zero or one).
    pub fn try_inverse(&self) -> Result<Self, RingError> {
        let mut num = self.num.clone();
        let mut kq = 0u32;
        while num.len() > 1 {
            num = num.div_q_exact().ok_or(RingError::NotUnit)?;
            kq += 1;
        }
        let (m, c) = num.iter().next().ok_or(RingError::NotUnit)?;
        if m.has_position() || !m.funcs.is_empty() {
            return Err(RingError::NotUnit);
        }
        let c_inv = c.inv().ok_or(RingError::NotUnit)?;
        let inv_consts: ConstPowers = m.consts.iter().map(|&(k, e)| (k, -e)).collect();
        let mut im = Monomial::one().times_consts(&inv_consts);
        im.r = -m.r;
        im.w = m.w;
        let inv_num = Poly::term(im, c_inv).mul_q_pow(self.q_pow);
        Ok(Self::from_parts(inv_num, kq + m.w as u32))
    }

    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        Ok(self.mul(&other.try_inverse()?))
    }

    /// Exact partial derivative along `axis` (0, 1, 2 for x, y, z).
    pub fn partial(&self, axis: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p0 = Poly::zero();
        let mut pq = Poly::zero();
        let var = Monomial::var(axis);
        let a7h2 = Monomial::var(axis).times_consts(&alpha7_hbar2());
        for (m, c) in self.num.iter() {
            let e = m.xyz[axis];
            if e > 0 {
                let mut d = m.clone();
                d.xyz[axis] -= 1;
                p0.add_term(d, c.scale(&T::from_i64(e as i64)));
            }
            if m.r != 0 {
                let (mut d, xx, ww) = m.mul(&var);
                d.r -= 2;
                p0.add_product(&d, xx, ww, &c.scale(&T::from_i64(m.r as i64)));
            }
            if m.w {
                let (d, xx, ww) = m.mul(&a7h2);
                pq.add_product(&d, xx, ww, c);
            }
            for (idx, &(_, mult)) in m.funcs.iter().enumerate() {
                let (mut d, xx, ww) = m.with_func_replaced(idx).mul(&var);
                d.r -= 1;
                p0.add_product(&d, xx, ww, &c.scale(&T::from_i64(mult as i64)));
            }
        }
        let n = self.q_pow;
        if n > 0 {
            let t = self.num.mul_term(&a7h2, &Gaussian::from_i64(-2 * n as i64));
            pq.add_assign_poly(&t);
        }
        if pq.is_zero() {
            return Self::from_parts(p0, n);
        }
        let mut num = p0.mul_q();
        num.add_assign_poly(&pq);
        Self::from_parts(num, n + 1)
    }

    /// Radial derivative `d/dr` of an element depending on position only
    /// through `r`: `r⁻¹·Σ xᵢ ∂ᵢ`.
    pub fn radial_derivative(&self) -> Self {
        let terms: Vec<Self> = (0..3).map(|axis| Self::coord(axis).mul_raw(&self.partial(axis))).collect();
        Self::sum(&terms).mul(&Self::r_pow(-1))
    }

    /// True when no function symbol occurs.
    pub fn is_concrete(&self) -> bool {
        self.num.iter().all(|(m, _)| m.funcs.is_empty())
    }

    pub fn free_functions(&self) -> Vec<FuncSym> {
        let mut out: Vec<FuncSym> = self.num.iter().flat_map(|(m, _)| m.funcs.iter().map(|f| f.0)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn free_constants(&self) -> Vec<Constant> {
        let mut out: Vec<Constant> = self.num.iter().flat_map(|(m, _)| m.consts.iter().map(|c| c.0)).collect();
        if self.uses_radical() {
            out.push(Constant::Hbar);
            out.push(Constant::ALPHA7);
        }
        out.sort();
        out.dedup();
        out
    }

    /// True when the element depends on position only through `r`. The
    /// canonical form is unique, so this holds iff no coordinate occurs.
    pub fn is_radial(&self) -> bool {
        self.num.iter().all(|(m, _)| !m.has_position())
    }

    /// Eliminates bound function symbols and constants.
    ///
    /// Function bindings are given for order-zero symbols only; derivative
    /// symbols are replaced by radial derivatives of the binding. Bindings
    /// may mention other bound symbols, and substitution iterates to a fixed
    /// point. `hbar` and `alpha7` cannot be bound on elements that involve
    /// `w` or `q`, since they define the admitted radical.
    pub fn substitute(&self, funcs: &FuncBindings<T>, consts: &ConstBindings<T>) -> Result<Self, RingError> {
        let mut cache: BTreeMap<FuncSym, Self> = BTreeMap::new();
        let mut current = self.clone();
        for _ in 0..16 {
            let next = current.substitute_once(funcs, consts, &mut cache)?;
            let done = !next
                .num
                .iter()
                .any(|(m, _)| m.funcs.iter().any(|f| funcs.contains_key(&f.0.name)) || m.consts.iter().any(|c| consts.contains_key(&c.0)));
            current = next;
            if done {
                return Ok(current);
            }
        }
        Err(RingError::Cyclic)
    }

    fn func_value(sym: FuncSym, funcs: &FuncBindings<T>, cache: &mut BTreeMap<FuncSym, Self>) -> Option<Self> {
        if let Some(v) = cache.get(&sym) {
            return Some(v.clone());
        }
        let v = if sym.order == 0 {
            funcs.get(&sym.name)?.clone()
        } else {
            Self::func_value(FuncSym::new(sym.name, sym.order - 1), funcs, cache)?.radial_derivative()
        };
        cache.insert(sym, v.clone());
        Some(v)
    }

    fn substitute_once(
        &self,
        funcs: &FuncBindings<T>,
        consts: &ConstBindings<T>,
        cache: &mut BTreeMap<FuncSym, Self>,
    ) -> Result<Self, RingError> {
        if self.uses_radical() {
            for c in [Constant::Hbar, Constant::ALPHA7] {
                if consts.contains_key(&c) {
                    return Err(RingError::RadicalConstant(c));
                }
            }
        }
        for binding in funcs.values() {
            if binding.uses_radical() {
                for c in [Constant::Hbar, Constant::ALPHA7] {
                    if consts.contains_key(&c) {
                        return Err(RingError::RadicalConstant(c));
                    }
                }
            }
        }
        let mut out = Self::zero();
        let mut plain = Poly::zero();
        for (m, c) in self.num.iter() {
            let touches = m.funcs.iter().any(|f| funcs.contains_key(&f.0.name)) || m.consts.iter().any(|k| consts.contains_key(&k.0));
            if !touches {
                plain.add_term(m.clone(), c.clone());
                continue;
            }
            let mut rest = m.clone();
            rest.funcs.clear();
            rest.consts.clear();
            let mut coeff = c.clone();
            let mut factor = Self::one();
            for &(k, e) in m.consts.iter() {
                match consts.get(&k) {
                    Some(v) => {
                        let base = if e < 0 { v.inv().ok_or(RingError::ZeroDivisor(k))? } else { v.clone() };
                        for _ in 0..e.unsigned_abs() {
                            coeff = &coeff * &base;
                        }
                    }
                    None => rest = rest.times_consts(&std::iter::once((k, e)).collect()),
                }
            }
            for &(f, mult) in m.funcs.iter() {
                match Self::func_value(f, funcs, cache) {
                    Some(v) => {
                        for _ in 0..mult {
                            factor = factor.mul(&v);
                        }
                    }
                    None => rest.funcs.push((f, mult)),
                }
            }
            out = out.add(&factor.mul(&Self::from_monomial(rest, coeff)));
        }
        out = out.add(&GeomScalar { num: plain, q_pow: 0 });
        Ok(GeomScalar::from_parts(out.num, out.q_pow + self.q_pow))
    }

    /// Exact evaluation at a rational point. The atoms `r` and `w` must have
    /// rational values there (for example Pythagorean points for `r`) when
    /// they occur to odd powers.
    pub fn evaluate_exact(&self, point: &[T; 3], consts: &ConstBindings<T>) -> Result<Gaussian<T>, RingError> {
        let s = point.iter().fold(T::zero(), |acc, v| acc + v.clone() * v.clone());
        if s.is_zero() {
            return Err(RingError::Origin);
        }
        let get = |c: Constant| consts.get(&c).cloned().ok_or_else(|| RingError::Unbound(c.to_string()));
        let needs_r = self.num.iter().any(|(m, _)| m.r % 2 != 0);
        let r = if needs_r { s.sqrt_exact().ok_or(RingError::Irrational("r"))? } else { T::one() };
        let q = if self.uses_radical() {
            let h = get(Constant::Hbar)?;
            let a7 = get(Constant::ALPHA7)?;
            let v = Gaussian::from_i64(2) + &(&(&h * &h) * &a7) * &Gaussian::real(s.clone());
            if !v.is_real() {
                return Err(RingError::Irrational("w"));
            }
            v.re
        } else {
            T::one()
        };
        let needs_w = self.num.iter().any(|(m, _)| m.w);
        let w = if needs_w { q.sqrt_exact().ok_or(RingError::Irrational("w"))? } else { T::one() };
        let int_pow = |base: &T, e: i32| -> T {
            let mut v = T::one();
            for _ in 0..e.unsigned_abs() {
                v = v * base.clone();
            }
            if e < 0 {
                T::one() / v
            } else {
                v
            }
        };
        let mut total = Gaussian::zero();
        for (m, c) in self.num.iter() {
            if let Some(f) = m.funcs.first() {
                return Err(RingError::Unbound(f.0.to_string()));
            }
            let mut v = T::one();
            for axis in 0..3 {
                v = v * int_pow(&point[axis], m.xyz[axis] as i32);
            }
            let k = m.r as i32;
            v = v * int_pow(&s, k.div_euclid(2));
            if k.rem_euclid(2) == 1 {
                v = v * r.clone();
            }
            if m.w {
                v = v * w.clone();
            }
            let mut term = c.scale(&v);
            for &(k, e) in m.consts.iter() {
                let b = get(k)?;
                let b = if e < 0 { b.inv().ok_or(RingError::ZeroDivisor(k))? } else { b };
                for _ in 0..e.unsigned_abs() {
                    term = &term * &b;
                }
            }
            total = total + term;
        }
        let d = int_pow(&q, self.q_pow as i32);
        Ok(Gaussian::new(total.re / d.clone(), total.im / d))
    }

    /// Floating evaluation at a point. `consts` supplies every constant
    /// (including `eps`); function symbols must already be eliminated.
    pub fn evaluate_at<F: Float>(&self, point: [F; 3], consts: &dyn Fn(Constant) -> Option<F>) -> Result<(F, F), RingError> {
        let s = point[0] * point[0] + point[1] * point[1] + point[2] * point[2];
        if s.is_zero() {
            return Err(RingError::Origin);
        }
        let get = |c: Constant| consts(c).ok_or_else(|| RingError::Unbound(c.to_string()));
        let r = s.sqrt();
        let q = if self.uses_radical() {
            let h = get(Constant::Hbar)?;
            F::from(2.0).unwrap() + get(Constant::ALPHA7)? * h * h * s
        } else {
            F::one()
        };
        let w = q.sqrt();
        let (mut re, mut im) = (F::zero(), F::zero());
        for (m, c) in self.num.iter() {
            if let Some(f) = m.funcs.first() {
                return Err(RingError::Unbound(f.0.to_string()));
            }
            let mut v = r.powi(m.r as i32);
            for axis in 0..3 {
                v = v * point[axis].powi(m.xyz[axis] as i32);
            }
            if m.w {
                v = v * w;
            }
            for &(k, e) in m.consts.iter() {
                v = v * get(k)?.powi(e as i32);
            }
            let (cr, ci) = c.to_f64_pair();
            re = re + v * F::from(cr).unwrap();
            im = im + v * F::from(ci).unwrap();
        }
        let d = q.powi(self.q_pow as i32);
        Ok((re / d, im / d))
    }
}

impl<T: Field> Default for GeomScalar<T> {
    fn default() -> Self {
        Self::zero()
    }
}

fn fmt_monomial(m: &Monomial, r_shift: i16, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    for (axis, name) in ["x", "y", "z"].iter().enumerate() {
        match m.xyz[axis] {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    match m.r + r_shift {
        0 => {}
        1 => parts.push("r".into()),
        k => parts.push(format!("r^{k}")),
    }
    if m.w {
        parts.push("sqrt(2+alpha7*hbar^2*r^2)".into());
    }
    for &(c, e) in m.consts.iter() {
        if e == 1 {
            parts.push(c.to_string());
        } else {
            parts.push(format!("{c}^{e}"));
        }
    }
    for &(s, e) in m.funcs.iter() {
        if e == 1 {
            parts.push(s.to_string());
        } else {
            parts.push(format!("{s}^{e}"));
        }
    }
    if parts.is_empty() {
        return write!(f, "1");
    }
    write!(f, "{}", parts.join("*"))
}

struct TermDisplay<'a, T>(&'a Monomial, &'a Gaussian<T>, i16);

impl<T: Field> fmt::Display for TermDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, c, shift) = (self.0, self.1, self.2);
        let unit = m.xyz == [0, 0, 0] && m.r + shift == 0 && !m.w && m.consts.is_empty() && m.funcs.is_empty();
        if unit {
            return write!(f, "{c}");
        }
        if c.is_one() {
            return fmt_monomial(m, shift, f);
        }
        if *c == -Gaussian::one() {
            write!(f, "-")?;
            return fmt_monomial(m, shift, f);
        }
        write!(f, "{c}*")?;
        fmt_monomial(m, shift, f)
    }
}

impl<T: Field> fmt::Display for GeomScalar<T> {
    /// Prints in the expression mini-language; the output parses back to the
    /// same element. Negative powers of `r` are collected into the
    /// denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let r_den = -self.num.min_r().unwrap_or(0).min(0);
        let mut num = String::new();
        for (idx, (m, c)) in self.num.iter().enumerate() {
            let t = TermDisplay(m, c, r_den).to_string();
            if idx == 0 {
                num.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                num.push_str(" - ");
                num.push_str(rest);
            } else {
                num.push_str(" + ");
                num.push_str(&t);
            }
        }
        if r_den == 0 && self.q_pow == 0 {
            return write!(f, "{num}");
        }
        if self.num.len() > 1 {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        let mut den = Vec::new();
        match r_den {
            0 => {}
            1 => den.push("r".to_string()),
            k => den.push(format!("r^{k}")),
        }
        match self.q_pow {
            0 => {}
            1 => den.push("(2+alpha7*hbar^2*r^2)".into()),
            n => den.push(format!("(2+alpha7*hbar^2*r^2)^{n}")),
        }
        if den.len() == 1 {
            write!(f, "/{}", den[0])
        } else {
            write!(f, "/({})", den.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type G = GeomScalar<BigRational>;

    fn x() -> G {
        G::coord(0)
    }

    #[test]
    fn r_plus_r() {
        assert_eq!(G::r().add(&G::r()), G::r().scale(&Gaussian::from_i64(2)));
    }

    #[test]
    fn rationalized_inverse_of_r() {
        let inv_r = G::r().try_inverse().unwrap();
        let a = x().mul(&inv_r);
        let b = x().mul(&G::r()).mul(&G::inv_s());
        assert_eq!(a.add(&b), b.scale(&Gaussian::from_i64(2)));
        assert_eq!(inv_r.mul(&G::r()), G::one());
    }

    #[test]
    fn atom_squares() {
        assert!(G::r().mul(&G::r()).sub(&G::s()).is_zero());
        assert!(G::w().mul(&G::w()).sub(&G::q()).is_zero());
        let eps = G::constant(Constant::Eps);
        assert_eq!(eps.mul(&eps), G::one());
    }

    #[test]
    fn derivative_of_inverse_r() {
        let inv_r = G::r().try_inverse().unwrap();
        let expected = x().mul(&G::r()).mul(&G::inv_s()).mul(&G::inv_s()).neg();
        assert_eq!(inv_r.partial(0), expected);
    }

    #[test]
    fn inverse_r_is_harmonic() {
        let inv_r = G::r().try_inverse().unwrap();
        let lap = (0..3).fold(G::zero(), |acc, a| acc.add(&inv_r.partial(a).partial(a)));
        assert!(lap.is_zero());
    }

    #[test]
    fn derivative_of_radial_function() {
        let v5 = G::func_name(FuncName::V(5));
        let expected = x().mul(&G::r()).mul(&G::inv_s()).mul(&G::func(FuncSym::new(FuncName::V(5), 1)));
        assert_eq!(v5.partial(0), expected);
    }

    #[test]
    fn derivative_of_w_and_division_by_q() {
        let a7h2 = G::constant(Constant::ALPHA7).mul(&G::hbar()).mul(&G::hbar());
        let expected = a7h2.mul(&x()).mul(&G::w()).mul(&G::q().try_inverse().unwrap());
        assert_eq!(G::w().partial(0), expected);
        assert_eq!(G::q().mul(&G::q().try_inverse().unwrap()), G::one());
    }

    #[test]
    fn substitution_derives_derivatives() {
        let mut funcs = FuncBindings::new();
        let a1 = G::constant(Constant::Alpha(1));
        let v5 = G::ratio(-1, 2).mul(&G::inv_s()).add(&a1);
        funcs.insert(FuncName::V(5), v5);
        let d = G::func(FuncSym::new(FuncName::V(5), 1)).substitute(&funcs, &ConstBindings::new()).unwrap();
        assert_eq!(d, G::r().mul(&G::inv_s()).mul(&G::inv_s()));
    }

    #[test]
    fn eps_substitution() {
        let mut consts = ConstBindings::new();
        consts.insert(Constant::Eps, Gaussian::one());
        let e = G::constant(Constant::Eps).mul(&G::w());
        assert_eq!(e.substitute(&FuncBindings::new(), &consts).unwrap(), G::w());
    }

    #[test]
    fn display_collects_inverse_powers() {
        let g = x().mul(&G::r_pow(-3)).add(&G::r_pow(-1));
        assert_eq!(g.to_string(), "(x + r^2)/r^3");
        assert_eq!(G::w().try_inverse().unwrap().to_string(), "sqrt(2+alpha7*hbar^2*r^2)/(2+alpha7*hbar^2*r^2)");
    }

    #[test]
    fn exact_evaluation_with_negative_powers() {
        let g = x().mul(&G::r_pow(-3));
        let third = BigRational::new(1.into(), 3.into());
        let v = g.evaluate_exact(&[third.clone(), third.clone() * BigRational::from_integer(2.into()), third.clone() * BigRational::from_integer(2.into())], &ConstBindings::new()).unwrap();
        assert_eq!(v, Gaussian::real(BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn numeric_evaluation() {
        let inv_r = G::r().try_inverse().unwrap();
        let (re, im) = inv_r.evaluate_at([3.0f64, 4.0, 0.0], &|_| None).unwrap();
        assert!((re - 0.2).abs() < 1e-15 && im == 0.0);
    }

    #[test]
    fn radiality() {
        assert!(G::r().is_radial());
        assert!(G::w().mul(&G::inv_s()).is_radial());
        assert!(!x().is_radial());
        assert!(x().mul(&x()).add(&G::coord(1).mul(&G::coord(1))).add(&G::coord(2).mul(&G::coord(2))).is_radial());
    }

    #[test]
    fn single_summand_is_normalized() {
        let raw = G::w().mul_raw(&G::w().partial(0));
        assert_eq!(raw.q_pow(), 1);
        let summed = G::sum([&raw]);
        assert_eq!(summed.q_pow(), 0);
        assert_eq!(summed, G::w().mul(&G::w().partial(0)));
    }
}
