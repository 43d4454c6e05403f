//! Constant alternating forms on `Q^n` with sparse, exact coefficients.
//!
//! Basis blades `dx_{i_1}∧…∧dx_{i_p}` are stored as bitmasks. For blades of a
//! fixed degree, numeric order of the mask is the colexicographic order of
//! the index tuples, which fixes the row/column layout of every matrix built
//! in this module.

mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use linalg::{Matrix, Rref};

/// Exact coefficient field. Always reduced, denominator positive.
pub type Rational = BigRational;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("dimension {0} exceeds the cap of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("degree {degree} exceeds ambient dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("indices {0:?} are not strictly increasing")]
    NotStrictlyIncreasing(Vec<usize>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("term of degree {found} in a form of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// A strictly increasing tuple of coordinate indices, i.e. one basis blade.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn new(indices: &[usize]) -> Result<Self, ExteriorError> {
        let mut bits = 0u16;
        for (pos, &i) in indices.iter().enumerate() {
            if i >= MAX_DIM {
                return Err(ExteriorError::IndexOutOfRange { index: i, dim: MAX_DIM });
            }
            if pos > 0 && indices[pos - 1] >= i {
                return Err(ExteriorError::NotStrictlyIncreasing(indices.to_vec()));
            }
            bits |= 1 << i;
        }
        Ok(MultiIndex(bits))
    }

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_DIM);
        MultiIndex(1 << i)
    }

    pub fn from_bits(bits: u16) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 16 && self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..16).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    /// One past the largest index (0 for the empty blade).
    pub fn span(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    /// `e_self ∧ e_other = sign · e_merged`, or `None` when the blades share an index.
    pub fn wedge(self, other: MultiIndex) -> Option<(MultiIndex, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 | other.0), sign))
    }

    /// `ι_{e_i} e_self = sign · e_rest`, or `None` when `i` is not in the blade.
    pub fn remove(self, i: usize) -> Option<(MultiIndex, i8)> {
        if !self.contains(i) {
            return None;
        }
        let before = (self.0 & ((1u16 << i) - 1)).count_ones();
        let sign = if before.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 & !(1 << i)), sign))
    }

    /// Position of this blade among all blades of the same degree in colex order.
    pub fn rank(self) -> usize {
        self.indices()
            .enumerate()
            .map(|(r, i)| binomial(i, r + 1))
            .sum()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

/// All degree-`p` blades on `n` coordinates, in colex order.
pub fn blades(n: usize, p: usize) -> Vec<MultiIndex> {
    if p > n {
        return Vec::new();
    }
    if p == 0 {
        return vec![MultiIndex::EMPTY];
    }
    let mut out = Vec::with_capacity(binomial(n, p));
    let limit = 1u32 << n;
    let mut v: u32 = (1 << p) - 1;
    while v < limit {
        out.push(MultiIndex(v as u16));
        // Gosper's hack: next integer with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// A vector in `Q^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector(pub Vec<Rational>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Rational::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector(values.iter().map(|&v| rational(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|v| v * c).collect())
    }

    pub fn add_scaled(&self, c: &Rational, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }
}

/// A constant alternating `p`-form on `Q^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct AltForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl AltForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self, ExteriorError> {
        if dim > MAX_DIM {
            return Err(ExteriorError::DimensionTooLarge(dim));
        }
        if degree > dim {
            return Err(ExteriorError::DegreeTooLarge { degree, dim });
        }
        Ok(AltForm { dim, degree, coeffs: BTreeMap::new() })
    }

    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self, ExteriorError> {
        let mut form = Self::zero(dim, degree)?;
        for (mi, c) in terms {
            form.check_blade(mi)?;
            form.add_term(mi, c);
        }
        Ok(form)
    }

    /// The blade `dx_{i_1}∧…∧dx_{i_p}` with coefficient 1.
    pub fn blade(dim: usize, indices: &[usize]) -> Result<Self, ExteriorError> {
        let mi = MultiIndex::new(indices)?;
        Self::from_terms(dim, indices.len(), [(mi, Rational::one())])
    }

    /// `dx_i` as a 1-form.
    pub fn covector(dim: usize, i: usize) -> Self {
        Self::blade(dim, &[i]).expect("index in range")
    }

    /// The 1-form `Σ c_i dx_i`.
    pub fn from_covector(components: &[Rational]) -> Self {
        let dim = components.len();
        let terms = components
            .iter()
            .enumerate()
            .map(|(i, c)| (MultiIndex::single(i), c.clone()));
        Self::from_terms(dim, 1, terms).expect("covector within caps")
    }

    fn check_blade(&self, mi: MultiIndex) -> Result<(), ExteriorError> {
        if mi.len() != self.degree {
            return Err(ExteriorError::DegreeMismatch { expected: self.degree, found: mi.len() });
        }
        if mi.span() > self.dim {
            return Err(ExteriorError::IndexOutOfRange { index: mi.span() - 1, dim: self.dim });
        }
        Ok(())
    }

    fn add_term(&mut self, mi: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mi).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&mi);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, mi: MultiIndex) -> Rational {
        self.coeffs.get(&mi).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Dense coefficient vector in the colex blade basis of `Λ^p`.
    pub fn to_dense(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); binomial(self.dim, self.degree)];
        for (mi, c) in &self.coeffs {
            v[mi.rank()] = c.clone();
        }
        v
    }

    pub fn from_dense(dim: usize, degree: usize, values: &[Rational]) -> Result<Self, ExteriorError> {
        let basis = blades(dim, degree);
        assert_eq!(basis.len(), values.len());
        Self::from_terms(dim, degree, basis.into_iter().zip(values.iter().cloned()))
    }

    pub fn scale(&self, c: &Rational) -> AltForm {
        let mut out = AltForm { dim: self.dim, degree: self.degree, coeffs: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (mi, v) in &self.coeffs {
            out.coeffs.insert(*mi, v * c);
        }
        out
    }

    pub fn add(&self, other: &AltForm) -> Result<AltForm, ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (mi, c) in &other.coeffs {
            out.add_term(*mi, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AltForm) -> Result<AltForm, ExteriorError> {
        self.add(&other.scale(&rational(-1)))
    }

    pub fn wedge(&self, other: &AltForm) -> Result<AltForm, ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        // Past the top degree the product is the zero form; keep it in the top degree.
        let mut out = AltForm { dim: self.dim, degree: degree.min(self.dim), coeffs: BTreeMap::new() };
        if degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some((mi, sign)) = a.wedge(*b) {
                    let v = ca * cb;
                    out.add_term(mi, if sign > 0 { v } else { -v });
                }
            }
        }
        Ok(out)
    }

    /// Interior product `ι_v a` (contraction in the first slot).
    pub fn interior(&self, v: &Vector) -> Result<AltForm, ExteriorError> {
        if v.dim() != self.dim {
            return Err(ExteriorError::DimensionMismatch(v.dim(), self.dim));
        }
        let mut out = AltForm {
            dim: self.dim,
            degree: self.degree.saturating_sub(1),
            coeffs: BTreeMap::new(),
        };
        if self.degree == 0 {
            return Ok(out);
        }
        for (mi, c) in &self.coeffs {
            for i in mi.indices() {
                let vi = &v.0[i];
                if vi.is_zero() {
                    continue;
                }
                let (rest, sign) = mi.remove(i).expect("index in blade");
                let t = c * vi;
                out.add_term(rest, if sign > 0 { t } else { -t });
            }
        }
        Ok(out)
    }

    /// Full antisymmetric evaluation `a(v_1, …, v_p)`.
    pub fn evaluate(&self, vs: &[Vector]) -> Result<Rational, ExteriorError> {
        if vs.len() != self.degree {
            return Err(ExteriorError::ArityMismatch { expected: self.degree, found: vs.len() });
        }
        if let Some(v) = vs.iter().find(|v| v.dim() != self.dim) {
            return Err(ExteriorError::DimensionMismatch(v.dim(), self.dim));
        }
        let mut total = Rational::zero();
        for (mi, c) in &self.coeffs {
            let idx = mi.to_vec();
            let minor: Vec<Vec<Rational>> = vs
                .iter()
                .map(|v| idx.iter().map(|&i| v.0[i].clone()).collect())
                .collect();
            total += c * Matrix::from_rows(&minor, idx.len()).determinant();
        }
        Ok(total)
    }

    /// Pullback along the linear map sending the `j`-th new basis vector to
    /// `vectors[j]`. The result lives on `Q^{vectors.len()}` and its
    /// coefficient on blade `J` is `a(vectors[J_1], …, vectors[J_p])`.
    pub fn pullback(&self, vectors: &[Vector]) -> Result<AltForm, ExteriorError> {
        let new_dim = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.dim() != self.dim) {
            return Err(ExteriorError::DimensionMismatch(v.dim(), self.dim));
        }
        let mut out = AltForm::zero(new_dim, self.degree.min(new_dim))?;
        if self.degree > new_dim {
            return Ok(out);
        }
        // Pulled-back coordinate covectors: dx_i ↦ Σ_j vectors[j][i] de_j.
        let pulled: Vec<AltForm> = (0..self.dim)
            .map(|i| {
                let comps: Vec<Rational> = vectors.iter().map(|v| v.0[i].clone()).collect();
                AltForm::from_covector(&comps)
            })
            .collect();
        for (mi, c) in &self.coeffs {
            let mut acc = AltForm::from_terms(new_dim, 0, [(MultiIndex::EMPTY, c.clone())])?;
            for i in mi.indices() {
                acc = acc.wedge(&pulled[i])?;
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = out.add(&acc)?;
            }
        }
        Ok(out)
    }

    /// Re-embeds into a larger space, sending coordinate `i` to `positions[i]`.
    pub fn embed(&self, dim: usize, positions: &[usize]) -> Result<AltForm, ExteriorError> {
        assert_eq!(positions.len(), self.dim);
        let mut out = AltForm::zero(dim, self.degree)?;
        for (mi, c) in &self.coeffs {
            let mut acc = MultiIndex::EMPTY;
            let mut sign = 1i8;
            for i in mi.indices() {
                let (m, s) = acc
                    .wedge(MultiIndex::single(positions[i]))
                    .ok_or(ExteriorError::NotStrictlyIncreasing(positions.to_vec()))?;
                acc = m;
                sign *= s;
            }
            out.check_blade(acc)?;
            out.add_term(acc, if sign > 0 { c.clone() } else { -c.clone() });
        }
        Ok(out)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Renders with coordinate names (`dx1∧dx2 + …`).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> DisplayAlt<'a> {
        DisplayAlt { form: self, names }
    }
}

pub struct DisplayAlt<'a> {
    form: &'a AltForm,
    names: &'a [String],
}

impl fmt::Display for DisplayAlt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        for (n, (mi, c)) in self.form.terms().enumerate() {
            let blade = blade_name(mi, self.names);
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mi.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{blade}")?;
            } else {
                write!(f, "{mag} {blade}")?;
            }
        }
        Ok(())
    }
}

/// `dx1∧dx2` style name of a blade.
pub fn blade_name(mi: MultiIndex, names: &[String]) -> String {
    mi.indices()
        .map(|i| match names.get(i) {
            Some(n) => format!("d{n}"),
            None => format!("de{}", i + 1),
        })
        .collect::<Vec<_>>()
        .join("∧")
}

/// Default coordinate names `x1, …, xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Debug for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.dim);
        let body = self.display_with(&names).to_string();
        write!(f, "AltForm(n={}, p={}: {body})", self.dim, self.degree)
    }
}

/// Matrix of `v ↦ ι_v a`: row `i` holds the coefficients of `ι_{e_i} a` in
/// the colex basis of `Λ^{p-1}`.
pub fn contraction_matrix(a: &AltForm) -> Matrix {
    let n = a.dim();
    if a.degree() == 0 {
        return Matrix::zeros(n, 0);
    }
    let mut m = Matrix::zeros(n, binomial(n, a.degree() - 1));
    for (mi, c) in a.terms() {
        for i in mi.indices() {
            let (rest, sign) = mi.remove(i).expect("index in blade");
            let col = rest.rank();
            if sign > 0 {
                m[(i, col)] += c;
            } else {
                m[(i, col)] -= c;
            }
        }
    }
    m
}

/// Matrix of `β ↦ β ∧ a` from `Λ^l` to `Λ^{l+p}`; row `I` is `e_I ∧ a`.
/// When `l + p > n` the codomain is zero and the matrix has no columns.
pub fn wedge_matrix(a: &AltForm, l: usize) -> Matrix {
    let n = a.dim();
    let domain = blades(n, l);
    let target = l + a.degree();
    if target > n {
        return Matrix::zeros(domain.len(), 0);
    }
    let mut m = Matrix::zeros(domain.len(), binomial(n, target));
    for (row, b) in domain.iter().enumerate() {
        for (mi, c) in a.terms() {
            if let Some((prod, sign)) = b.wedge(mi) {
                let col = prod.rank();
                if sign > 0 {
                    m[(row, col)] += c;
                } else {
                    m[(row, col)] -= c;
                }
            }
        }
    }
    m
}

/// Basis of `{β ∈ Λ^l : β ∧ a = 0}`.
pub fn wedge_kernel(a: &AltForm, l: usize) -> Vec<AltForm> {
    let n = a.dim();
    wedge_matrix(a, l)
        .left_nullspace()
        .into_iter()
        .map(|v| AltForm::from_dense(n, l, &v).expect("kernel vector within caps"))
        .collect()
}

/// `Σ_{i<m} e_{2i}∧e_{2i+1}` on `Q^{2m}`.
pub fn standard_symplectic(m: usize) -> AltForm {
    let terms = (0..m).map(|i| (MultiIndex::new(&[2 * i, 2 * i + 1]).unwrap(), Rational::one()));
    AltForm::from_terms(2 * m, 2, terms).expect("within caps")
}

/// The model form `(Σ e_{2i}∧e_{2i+1}) ∧ e_{2m}∧…∧e_{2m+k-1}` on `Q^{2m+k}`.
pub fn standard_dvs(m: usize, k: usize) -> AltForm {
    let n = 2 * m + k;
    let y = MultiIndex::from_bits((((1u32 << k) - 1) << (2 * m)) as u16);
    let terms = (0..m).map(|i| {
        let x = MultiIndex::new(&[2 * i, 2 * i + 1]).unwrap();
        (MultiIndex::from_bits(x.bits() | y.bits()), Rational::one())
    });
    AltForm::from_terms(n, k + 2, terms).expect("within caps")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blade(n: usize, idx: &[usize]) -> AltForm {
        AltForm::blade(n, idx).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let e12 = blade(3, &[0, 1]);
        let e3 = blade(3, &[2]);
        assert_eq!(e12.wedge(&e3).unwrap(), blade(3, &[0, 1, 2]));
        let e2 = blade(3, &[1]);
        let e1 = blade(3, &[0]);
        assert_eq!(e2.wedge(&e1).unwrap(), blade(3, &[0, 1]).scale(&rational(-1)));
        let e23 = blade(3, &[1, 2]);
        assert!(e12.wedge(&e23).unwrap().is_zero());
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert_eq!(
            blade(3, &[0]).wedge(&blade(4, &[0])),
            Err(ExteriorError::DimensionMismatch(3, 4))
        );
    }

    #[test]
    fn interior_examples() {
        // coordinates x1 x2 y
        let a = blade(3, &[0, 1, 2]);
        assert_eq!(a.interior(&Vector::basis(3, 2)).unwrap(), blade(3, &[0, 1]));
        assert_eq!(a.interior(&Vector::basis(3, 0)).unwrap(), blade(3, &[1, 2]));
        let v = Vector::from_ints(&[1, -2, 3]);
        assert!(a.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        let zero_form = AltForm::from_terms(3, 0, [(MultiIndex::EMPTY, rational(5))]).unwrap();
        assert!(zero_form.interior(&v).unwrap().is_zero());
    }

    #[test]
    fn contraction_matrix_examples() {
        let a = blade(2, &[0, 1]);
        let m = contraction_matrix(&a);
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m[(0, 1)], rational(1));
        assert_eq!(m[(1, 0)], rational(-1));
        assert_eq!(m.rank(), 2);
        assert!(contraction_matrix(&AltForm::zero(4, 2).unwrap()).is_zero());

        let dvs = standard_dvs(2, 1);
        let m = contraction_matrix(&dvs);
        assert_eq!((m.rows(), m.cols()), (5, 10));
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn wedge_matrix_examples() {
        // top degree: kernel is everything
        let a = blade(3, &[0, 1, 2]);
        assert_eq!(wedge_kernel(&a, 1).len(), 3);

        let dvs = standard_dvs(2, 1);
        let ker = wedge_kernel(&dvs, 1);
        assert_eq!(ker, vec![blade(5, &[4])]);

        let sym = standard_symplectic(2);
        assert_eq!(wedge_matrix(&sym, 2).rows(), 6);
        assert_eq!(wedge_kernel(&sym, 2).len(), 5);
    }

    #[test]
    fn evaluate_examples() {
        let a = blade(2, &[0, 1]);
        let (e1, e2) = (Vector::basis(2, 0), Vector::basis(2, 1));
        assert_eq!(a.evaluate(&[e1.clone(), e2.clone()]).unwrap(), rational(1));
        assert_eq!(a.evaluate(&[e2, e1]).unwrap(), rational(-1));
        let v = Vector::from_ints(&[3, 7]);
        assert_eq!(a.evaluate(&[v.clone(), v]).unwrap(), rational(0));
    }

    #[test]
    fn blade_enumeration_is_colex() {
        let b = blades(4, 2);
        let tuples: Vec<Vec<usize>> = b.iter().map(|m| m.to_vec()).collect();
        assert_eq!(
            tuples,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        for (r, mi) in b.iter().enumerate() {
            assert_eq!(mi.rank(), r);
        }
        assert_eq!(blades(12, 6).len(), 924);
    }

    #[test]
    fn construction_caps() {
        assert_eq!(AltForm::zero(13, 1), Err(ExteriorError::DimensionTooLarge(13)));
        assert_eq!(AltForm::zero(3, 4), Err(ExteriorError::DegreeTooLarge { degree: 4, dim: 3 }));
        assert!(MultiIndex::new(&[2, 1]).is_err());
        assert!(AltForm::blade(3, &[0, 3]).is_err());
    }

    #[test]
    fn pullback_by_identity_is_identity() {
        let a = standard_dvs(1, 1);
        let basis: Vec<Vector> = (0..3).map(|i| Vector::basis(3, i)).collect();
        assert_eq!(a.pullback(&basis).unwrap(), a);
    }

    #[test]
    fn embed_interleaves() {
        let a = blade(2, &[0, 1]);
        // send coordinate 0 to 3 and 1 to 1: e3∧e1 = -e1∧e3
        let e = a.embed(4, &[3, 1]).unwrap();
        assert_eq!(e, blade(4, &[1, 3]).scale(&rational(-1)));
    }
}
