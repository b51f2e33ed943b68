//! The two-spin Pauli algebra spanned by `σ1a σ2b` for `a, b ∈ {1, x, y, z}`.
//!
//! Products follow `σa σb = δab·I + i·εabc·σc` applied independently in each
//! slot. The 4×4 realization uses `σ1 = σ ⊗ I2` and `σ2 = I2 ⊗ σ`.

use std::fmt;

use num_traits::{One, Zero};

use crate::field::{Field, Gaussian};
use crate::geomring::{GeomScalar, RingError};

/// Basis label `(left, right)` with 0 the identity and 1, 2, 3 the Pauli axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel {
    pub left: u8,
    pub right: u8,
}

impl SpinLabel {
    pub const IDENTITY: SpinLabel = SpinLabel { left: 0, right: 0 };

    pub const fn new(left: u8, right: u8) -> Self {
        SpinLabel { left, right }
    }

    pub const fn index(self) -> usize {
        (self.left * 4 + self.right) as usize
    }

    pub const fn from_index(idx: usize) -> Self {
        SpinLabel { left: (idx / 4) as u8, right: (idx % 4) as u8 }
    }

    pub fn all() -> impl Iterator<Item = SpinLabel> {
        (0..16).map(SpinLabel::from_index)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const AXES: [&str; 4] = ["1", "x", "y", "z"];
        match (self.left, self.right) {
            (0, 0) => write!(f, "I"),
            (a, 0) => write!(f, "s1{}", AXES[a as usize]),
            (0, b) => write!(f, "s2{}", AXES[b as usize]),
            (a, b) => write!(f, "s1{}*s2{}", AXES[a as usize], AXES[b as usize]),
        }
    }
}

/// Single-slot Pauli product: returns `(c, k)` with `σa σb = i^k σc`.
const fn pauli_slot(a: u8, b: u8) -> (u8, u8) {
    if a == 0 {
        return (b, 0);
    }
    if b == 0 || a == b {
        return (if a == b { 0 } else { a }, 0);
    }
    let c = 6 - a - b;
    let cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
    (c, if cyclic { 1 } else { 3 })
}

const fn build_table() -> [(u8, u8); 256] {
    let mut table = [(0u8, 0u8); 256];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            let (l, kl) = pauli_slot((i / 4) as u8, (j / 4) as u8);
            let (r, kr) = pauli_slot((i % 4) as u8, (j % 4) as u8);
            table[i * 16 + j] = (l * 4 + r, (kl + kr) % 4);
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT[16·i + j] = (k, n)` encodes `E_i E_j = i^n E_k`.
pub const PRODUCT: [(u8, u8); 256] = build_table();

/// Basis product `E_a E_b = i^n E_c`, returned as `(c, n)`.
pub fn basis_product(a: SpinLabel, b: SpinLabel) -> (SpinLabel, u8) {
    let (c, n) = PRODUCT[a.index() * 16 + b.index()];
    (SpinLabel::from_index(c as usize), n)
}

/// Element of the two-spin algebra with ring coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSpinMatrix<T> {
    coeffs: [GeomScalar<T>; 16],
}

impl<T: Field> TwoSpinMatrix<T> {
    pub fn zero() -> Self {
        TwoSpinMatrix { coeffs: std::array::from_fn(|_| GeomScalar::zero()) }
    }

    pub fn identity() -> Self {
        Self::scalar(GeomScalar::one())
    }

    pub fn scalar(c: GeomScalar<T>) -> Self {
        Self::basis(SpinLabel::IDENTITY, c)
    }

    pub fn basis(label: SpinLabel, c: GeomScalar<T>) -> Self {
        let mut m = Self::zero();
        m.coeffs[label.index()] = c;
        m
    }

    /// `σ1` along `axis` (0, 1, 2 for x, y, z).
    pub fn sigma1(axis: usize) -> Self {
        Self::basis(SpinLabel::new(axis as u8 + 1, 0), GeomScalar::one())
    }

    /// `σ2` along `axis` (0, 1, 2 for x, y, z).
    pub fn sigma2(axis: usize) -> Self {
        Self::basis(SpinLabel::new(0, axis as u8 + 1), GeomScalar::one())
    }

    /// `(σ1, σ2) = Σ σ1a σ2a`.
    pub fn sigma_dot() -> Self {
        let mut m = Self::zero();
        for a in 1..4 {
            m.coeffs[SpinLabel::new(a, a).index()] = GeomScalar::one();
        }
        m
    }

    /// `(σ1, v)` for a vector of ring elements.
    pub fn sigma1_dot(v: &[GeomScalar<T>; 3]) -> Self {
        let mut m = Self::zero();
        for a in 0..3 {
            m.coeffs[SpinLabel::new(a as u8 + 1, 0).index()] = v[a].clone();
        }
        m
    }

    /// `(σ2, v)` for a vector of ring elements.
    pub fn sigma2_dot(v: &[GeomScalar<T>; 3]) -> Self {
        let mut m = Self::zero();
        for a in 0..3 {
            m.coeffs[SpinLabel::new(0, a as u8 + 1).index()] = v[a].clone();
        }
        m
    }

    pub fn coeff(&self, label: SpinLabel) -> &GeomScalar<T> {
        &self.coeffs[label.index()]
    }

    pub fn set_coeff(&mut self, label: SpinLabel, c: GeomScalar<T>) {
        self.coeffs[label.index()] = c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpinLabel, &GeomScalar<T>)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (SpinLabel::from_index(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GeomScalar::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        TwoSpinMatrix { coeffs: std::array::from_fn(|i| self.coeffs[i].add(&other.coeffs[i])) }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for i in 0..16 {
            if !other.coeffs[i].is_zero() {
                self.coeffs[i] = self.coeffs[i].add(&other.coeffs[i]);
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TwoSpinMatrix { coeffs: std::array::from_fn(|i| self.coeffs[i].sub(&other.coeffs[i])) }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn map(&self, f: impl Fn(&GeomScalar<T>) -> GeomScalar<T>) -> Self {
        TwoSpinMatrix {
            coeffs: std::array::from_fn(|i| if self.coeffs[i].is_zero() { GeomScalar::zero() } else { f(&self.coeffs[i]) }),
        }
    }

    pub fn try_map<E>(&self, f: impl Fn(&GeomScalar<T>) -> Result<GeomScalar<T>, E>) -> Result<Self, E> {
        let mut out = Self::zero();
        for i in 0..16 {
            if !self.coeffs[i].is_zero() {
                out.coeffs[i] = f(&self.coeffs[i])?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by a ring element.
    pub fn scale(&self, c: &GeomScalar<T>) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_gaussian(&self, c: &Gaussian<T>) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Algebra product via the structure constants.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Accumulator::new();
        acc.add_product(self, other, &Gaussian::one());
        acc.finish()
    }

    /// Hermitian adjoint: basis elements are self-adjoint, coefficients conjugate.
    pub fn adjoint(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn partial(&self, axis: usize) -> Self {
        self.map(|c| c.partial(axis))
    }

    /// Explicit 4×4 matrix with ring entries.
    pub fn to_entries(&self) -> [[GeomScalar<T>; 4]; 4] {
        let mut out: [[GeomScalar<T>; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| GeomScalar::zero()));
        for (label, c) in self.iter() {
            let e = basis_matrix::<T>(label);
            for (i, row) in out.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    if !e[i][j].is_zero() {
                        *entry = entry.add(&c.scale(&e[i][j]));
                    }
                }
            }
        }
        out
    }

    /// Decomposes a 4×4 matrix: the coefficient of `E` is `tr(E·M)/4`.
    pub fn from_entries(m: &[[GeomScalar<T>; 4]; 4]) -> Self {
        let mut out = Self::zero();
        let quarter = Gaussian::ratio(1, 4);
        for label in SpinLabel::all() {
            let e = basis_matrix::<T>(label);
            let mut tr = GeomScalar::zero();
            for i in 0..4 {
                for k in 0..4 {
                    if !e[i][k].is_zero() {
                        tr = tr.add(&m[k][i].scale(&e[i][k]));
                    }
                }
            }
            out.coeffs[label.index()] = tr.scale(&quarter);
        }
        out
    }

    /// Literal 4×4 matrix with every coefficient evaluated exactly at a
    /// rational point.
    pub fn realize_at(
        &self,
        point: &[T; 3],
        consts: &crate::geomring::ConstBindings<T>,
    ) -> Result<[[Gaussian<T>; 4]; 4], RingError> {
        let entries = self.to_entries();
        let mut out: [[Gaussian<T>; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Gaussian::zero()));
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = entries[i][j].evaluate_exact(point, consts)?;
            }
        }
        Ok(out)
    }
}

/// Collects unnormalized contributions to a matrix and sums each basis
/// coefficient once at the end.
pub struct Accumulator<T> {
    parts: [Vec<GeomScalar<T>>; 16],
}

impl<T: Field> Accumulator<T> {
    pub fn new() -> Self {
        Accumulator { parts: std::array::from_fn(|_| Vec::new()) }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(Vec::is_empty)
    }

    pub fn add(&mut self, m: &TwoSpinMatrix<T>) {
        for (label, c) in m.iter() {
            self.parts[label.index()].push(c.clone());
        }
    }

    /// Adds `k·a·b`.
    pub fn add_product(&mut self, a: &TwoSpinMatrix<T>, b: &TwoSpinMatrix<T>, k: &Gaussian<T>) {
        for (la, ca) in a.iter() {
            for (lb, cb) in b.iter() {
                let (c, n) = basis_product(la, lb);
                let unit = &Gaussian::i_pow(n) * k;
                self.parts[c.index()].push(ca.mul_raw(cb).scale(&unit));
            }
        }
    }

    pub fn absorb(&mut self, other: Accumulator<T>) {
        for (mine, theirs) in self.parts.iter_mut().zip(other.parts) {
            mine.extend(theirs);
        }
    }

    pub fn finish(self) -> TwoSpinMatrix<T> {
        TwoSpinMatrix { coeffs: self.parts.map(|terms| GeomScalar::sum(terms.iter())) }
    }
}

impl<T: Field> Default for Accumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn pauli<T: Field>(a: u8) -> [[Gaussian<T>; 2]; 2] {
    let (o, z) = (Gaussian::one(), Gaussian::zero());
    match a {
        0 => [[o.clone(), z.clone()], [z, o]],
        1 => [[z.clone(), o.clone()], [o, z]],
        2 => [[z.clone(), -Gaussian::i()], [Gaussian::i(), z]],
        _ => [[o.clone(), z.clone()], [z, -o]],
    }
}

/// The 4×4 matrix of a basis element, `σa ⊗ σb`.
pub fn basis_matrix<T: Field>(label: SpinLabel) -> [[Gaussian<T>; 4]; 4] {
    let a = pauli::<T>(label.left);
    let b = pauli::<T>(label.right);
    std::array::from_fn(|row| std::array::from_fn(|col| &a[row / 2][col / 2] * &b[row % 2][col % 2]))
}

/// Plain 4×4 product, the independent oracle for [`TwoSpinMatrix::mul`].
pub fn matmul4<T: Field>(a: &[[Gaussian<T>; 4]; 4], b: &[[Gaussian<T>; 4]; 4]) -> [[Gaussian<T>; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(Gaussian::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

impl<T: Field> fmt::Display for TwoSpinMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if label == SpinLabel::IDENTITY {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type M = TwoSpinMatrix<BigRational>;
    type G = GeomScalar<BigRational>;

    #[test]
    fn slot_products() {
        let p = M::sigma1(0).mul(&M::sigma1(1));
        assert_eq!(p, M::sigma1(2).scale(&G::i()));
        let q = M::sigma1(0).mul(&M::sigma2(0));
        assert_eq!(q, M::basis(SpinLabel::new(1, 1), G::one()));
    }

    #[test]
    fn sigma_dot_quadratic_relation() {
        let d = M::sigma_dot();
        let expected = M::identity().scale(&G::from_i64(3)).sub(&d.scale(&G::from_i64(2)));
        assert_eq!(d.mul(&d), expected);
    }

    #[test]
    fn all_products_match_matrices() {
        for a in SpinLabel::all() {
            for b in SpinLabel::all() {
                let (c, n) = basis_product(a, b);
                let lhs = basis_matrix::<BigRational>(c).map(|row| row.map(|e| &e * &Gaussian::i_pow(n)));
                assert_eq!(lhs, matmul4(&basis_matrix(a), &basis_matrix(b)), "{a} * {b}");
            }
        }
    }

    #[test]
    fn sigma1x_realization() {
        let m = basis_matrix::<BigRational>(SpinLabel::new(1, 0));
        let one = Gaussian::one();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i as i32 - j as i32).abs() == 2 { one.clone() } else { Gaussian::zero() };
                assert_eq!(m[i][j], expected);
            }
        }
    }

    #[test]
    fn entries_round_trip() {
        let m = M::sigma_dot().add(&M::sigma1(1).scale(&G::coord(0)));
        assert_eq!(M::from_entries(&m.to_entries()), m);
    }

    #[test]
    fn adjoint_of_i_sigma() {
        let m = M::sigma1(2).scale(&G::i());
        assert_eq!(m.adjoint(), m.neg());
    }
}
