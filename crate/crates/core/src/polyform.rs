//! Differential forms and vector fields with polynomial coefficients on a
//! coordinate box, with the exterior derivative, its split `d = d^x + d^y`
//! along a coordinate partition, contraction, Lie derivative and the cone
//! homotopy operator for `d^x`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exterior::{blade_name, AltForm, ExteriorError, MultiIndex, Rational, MAX_DIM};
use crate::poly::{Monomial, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("coefficient has {found} variables, form lives in dimension {expected}")]
    VariableCount { expected: usize, found: usize },
    #[error("invalid coordinate split: {0}")]
    InvalidSplit(String),
    #[error("form is not d^x-closed; d^x of it is {residual:?}")]
    NotXClosed { residual: PolyForm },
    #[error("form has a term of x-degree 0: {residual:?}")]
    ZeroXDegree { residual: PolyForm },
    #[error("vector field has a nonzero x-component {component}")]
    NotAYField { component: usize },
    #[error("frame generator {generator} does not have the shape dy_j + (x-terms): {reason}")]
    FrameShape { generator: usize, reason: String },
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
}

/// Partition of the coordinates into an x-block and a y-block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSplit {
    x: Vec<usize>,
    y: Vec<usize>,
    x_mask: u16,
    y_mask: u16,
}

impl CoordinateSplit {
    pub fn new(x: Vec<usize>, y: Vec<usize>) -> Result<Self, FormError> {
        let n = x.len() + y.len();
        if n > MAX_DIM {
            return Err(FormError::InvalidSplit(format!("{n} coordinates exceed the cap of {MAX_DIM}")));
        }
        let mut seen = 0u16;
        for &i in x.iter().chain(&y) {
            if i >= n {
                return Err(FormError::InvalidSplit(format!("index {i} out of range for {n} coordinates")));
            }
            if seen & (1 << i) != 0 {
                return Err(FormError::InvalidSplit(format!("index {i} listed twice")));
            }
            seen |= 1 << i;
        }
        let mask = |v: &[usize]| v.iter().fold(0u16, |m, &i| m | (1 << i));
        Ok(CoordinateSplit { x_mask: mask(&x), y_mask: mask(&y), x, y })
    }

    /// x = first `2m` coordinates, y = the remaining `k`.
    pub fn standard(m: usize, k: usize) -> Self {
        Self::new((0..2 * m).collect(), (2 * m..2 * m + k).collect()).expect("standard split")
    }

    pub fn dim(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn x_mask(&self) -> u16 {
        self.x_mask
    }

    pub fn y_mask(&self) -> u16 {
        self.y_mask
    }

    pub fn is_x(&self, i: usize) -> bool {
        self.x_mask & (1 << i) != 0
    }

    /// `(x-degree, y-degree)` of a blade.
    pub fn bidegree(&self, mi: MultiIndex) -> (usize, usize) {
        (
            (mi.bits() & self.x_mask).count_ones() as usize,
            (mi.bits() & self.y_mask).count_ones() as usize,
        )
    }

    /// `dy_1∧…∧dy_k` in the order the y-block is listed.
    pub fn y_volume(&self) -> PolyForm {
        let n = self.dim();
        let mut acc = PolyForm::constant(n, Rational::one());
        for &j in &self.y {
            acc = acc.wedge(&PolyForm::dx(n, j));
        }
        acc
    }
}

/// A differential form with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM && degree <= dim, "form shape out of range");
        PolyForm { dim, degree, terms: BTreeMap::new() }
    }

    /// Checked constructor; enforces the dimension and degree caps.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<Self, FormError> {
        AltForm::zero(dim, degree)?;
        let mut out = PolyForm { dim, degree, terms: BTreeMap::new() };
        for (mi, p) in terms {
            if mi.len() != degree {
                return Err(ExteriorError::DegreeMismatch { expected: degree, found: mi.len() }.into());
            }
            if mi.span() > dim {
                return Err(ExteriorError::IndexOutOfRange { index: mi.span() - 1, dim }.into());
            }
            if p.nvars() != dim {
                return Err(FormError::VariableCount { expected: dim, found: p.nvars() });
            }
            p.check_degree_cap()?;
            out.add_term(mi, &p);
        }
        Ok(out)
    }

    pub fn function(p: Poly) -> Self {
        let mut out = PolyForm::zero(p.nvars(), 0);
        out.add_term(MultiIndex::EMPTY, &p);
        out
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::function(Poly::constant(dim, c))
    }

    pub fn dx(dim: usize, i: usize) -> Self {
        let mut out = PolyForm::zero(dim, 1);
        out.add_term(MultiIndex::single(i), &Poly::one(dim));
        out
    }

    /// The 1-form `Σ c_i dx_i`.
    pub fn one_form(components: &[Poly]) -> Self {
        let dim = components.len();
        let mut out = PolyForm::zero(dim, 1);
        for (i, c) in components.iter().enumerate() {
            out.add_term(MultiIndex::single(i), c);
        }
        out
    }

    /// Single blade with a polynomial coefficient. Panics on malformed blades.
    pub fn term(dim: usize, indices: &[usize], coefficient: Poly) -> Self {
        let mi = MultiIndex::new(indices).expect("valid blade");
        let mut out = PolyForm::zero(dim, indices.len());
        out.add_term(mi, &coefficient);
        out
    }

    pub fn from_alt(a: &AltForm) -> Self {
        let mut out = PolyForm::zero(a.dim(), a.degree());
        for (mi, c) in a.terms() {
            out.add_term(mi, &Poly::constant(a.dim(), c.clone()));
        }
        out
    }

    pub(crate) fn add_term(&mut self, mi: MultiIndex, p: &Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&mi) {
            Some(existing) => {
                let sum = &*existing + p;
                if sum.is_zero() {
                    self.terms.remove(&mi);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mi, p.clone());
            }
        }
    }

    fn add_signed(&mut self, mi: MultiIndex, sign: i8, p: &Poly) {
        if sign > 0 {
            self.add_term(mi, p);
        } else {
            self.add_term(mi, &-p);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mi: MultiIndex) -> Poly {
        self.terms.get(&mi).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &Poly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    /// Largest total degree among the coefficients.
    pub fn max_coefficient_degree(&self) -> u32 {
        self.terms.values().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch in sum");
        let mut out = self.clone();
        for (mi, p) in &other.terms {
            out.add_term(*mi, p);
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch in difference");
        let mut out = self.clone();
        for (mi, p) in &other.terms {
            out.add_term(*mi, &-p);
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, self.degree);
        if c.is_zero() {
            return out;
        }
        for (mi, p) in &self.terms {
            out.terms.insert(*mi, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, f: &Poly) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, self.degree);
        for (mi, p) in &self.terms {
            out.add_term(*mi, &(p * f));
        }
        out
    }

    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.dim, other.dim, "dimension mismatch in wedge");
        let degree = self.degree + other.degree;
        let mut out = PolyForm::zero(self.dim, degree.min(self.dim));
        if degree > self.dim {
            return out;
        }
        for (a, pa) in &self.terms {
            for (b, pb) in &other.terms {
                if let Some((mi, sign)) = a.wedge(*b) {
                    out.add_signed(mi, sign, &(pa * pb));
                }
            }
        }
        out
    }

    fn d_masked(&self, mask: u16) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, (self.degree + 1).min(self.dim));
        if self.degree == self.dim {
            return out;
        }
        for (mi, p) in &self.terms {
            for i in 0..self.dim {
                if mask & (1 << i) == 0 || mi.contains(i) {
                    continue;
                }
                let dp = p.partial(i);
                if dp.is_zero() {
                    continue;
                }
                let (blade, sign) = MultiIndex::single(i).wedge(*mi).expect("disjoint");
                out.add_signed(blade, sign, &dp);
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        self.d_masked(u16::MAX)
    }

    pub fn d_x(&self, split: &CoordinateSplit) -> PolyForm {
        self.d_masked(split.x_mask())
    }

    pub fn d_y(&self, split: &CoordinateSplit) -> PolyForm {
        self.d_masked(split.y_mask())
    }

    /// `(d^x η, d^y η)`.
    pub fn d_split(&self, split: &CoordinateSplit) -> (PolyForm, PolyForm) {
        (self.d_x(split), self.d_y(split))
    }

    pub fn interior(&self, v: &PolyVectorField) -> PolyForm {
        assert_eq!(v.dim(), self.dim, "dimension mismatch in contraction");
        let mut out = PolyForm::zero(self.dim, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (mi, p) in &self.terms {
            for i in mi.indices() {
                let vi = &v.components[i];
                if vi.is_zero() {
                    continue;
                }
                let (rest, sign) = mi.remove(i).expect("index in blade");
                out.add_signed(rest, sign, &(p * vi));
            }
        }
        out
    }

    /// `L_V η = d ι_V η + ι_V dη`.
    pub fn lie_derivative(&self, v: &PolyVectorField) -> PolyForm {
        if self.degree == 0 {
            return self.d().interior(v);
        }
        if self.degree == self.dim {
            return self.interior(v).d();
        }
        self.interior(v).d().add(&self.d().interior(v))
    }

    /// Exact pointwise value at a rational point.
    pub fn evaluate_at(&self, point: &[Rational]) -> Result<AltForm, FormError> {
        if point.len() != self.dim {
            return Err(FormError::PointDimension { expected: self.dim, found: point.len() });
        }
        let terms = self.terms.iter().map(|(mi, p)| (*mi, p.eval(point)));
        Ok(AltForm::from_terms(self.dim, self.degree, terms)?)
    }

    /// Pointwise value in binary64, as `(blade, coefficient)` pairs.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<Vec<(MultiIndex, f64)>, FormError> {
        if point.len() != self.dim {
            return Err(FormError::PointDimension { expected: self.dim, found: point.len() });
        }
        Ok(self.terms.iter().map(|(mi, p)| (*mi, p.eval_f64(point))).collect())
    }

    /// `η(x + shift)` with the same blades (pullback by a translation).
    pub fn translate(&self, shift: &[Rational]) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, self.degree);
        for (mi, p) in &self.terms {
            out.add_term(*mi, &p.translate(shift));
        }
        out
    }

    /// Pullback along the polynomial map whose `i`-th component is `map[i]`.
    pub fn pullback(&self, map: &[Poly]) -> PolyForm {
        assert_eq!(map.len(), self.dim, "one component per coordinate");
        let new_dim = map.first().map_or(self.dim, Poly::nvars);
        let differentials: Vec<PolyForm> = map.iter().map(|p| PolyForm::function(p.clone()).d()).collect();
        let mut out = PolyForm::zero(new_dim, self.degree.min(new_dim));
        for (mi, p) in &self.terms {
            let mut acc = PolyForm::function(p.compose(map));
            for i in mi.indices() {
                acc = acc.wedge(&differentials[i]);
            }
            if acc.degree == out.degree {
                out = out.add(&acc);
            }
        }
        out
    }

    /// Cone homotopy along `x ↦ t·x` with the y-block frozen. Terms of
    /// x-degree 0 are dropped. On forms whose terms all have x-degree ≥ 1,
    /// `d^x h + h d^x = id`.
    pub fn homotopy_x(&self, split: &CoordinateSplit) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, self.degree.saturating_sub(1));
        for (mi, p) in &self.terms {
            let p_x = split.bidegree(*mi).0 as u32;
            if p_x == 0 {
                continue;
            }
            // ∫_0^1 t^{p_x - 1 + |a|} dt = 1 / (p_x + |a|) on each monomial.
            let integrated = p.map_terms(|m, c| {
                let w = p_x + m.degree_in(split.x_mask());
                Some((*m, c / Rational::from_integer(w.into())))
            });
            for i in mi.indices().filter(|&i| split.is_x(i)) {
                let (rest, sign) = mi.remove(i).expect("index in blade");
                let coeff = &integrated * &Poly::var(self.dim, i);
                out.add_signed(rest, sign, &coeff);
            }
        }
        out
    }

    /// A primitive θ with `d^x θ = η` for a d^x-closed η of x-degree ≥ 1,
    /// anchored at the origin of the x-block.
    pub fn homotopy_primitive_x(&self, split: &CoordinateSplit) -> Result<PolyForm, FormError> {
        let residual = self.d_x(split);
        if !residual.is_zero() {
            return Err(FormError::NotXClosed { residual });
        }
        let flat: PolyForm = self.filter(|mi| split.bidegree(mi).0 == 0);
        if !flat.is_zero() {
            return Err(FormError::ZeroXDegree { residual: flat });
        }
        Ok(self.homotopy_x(split))
    }

    /// Terms whose blade satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(MultiIndex) -> bool) -> PolyForm {
        let mut out = PolyForm::zero(self.dim, self.degree);
        for (mi, p) in &self.terms {
            if keep(*mi) {
                out.terms.insert(*mi, p.clone());
            }
        }
        out
    }

    /// Components grouped by `(x-degree, y-degree)` of their blades.
    pub fn bidegree_components(&self, split: &CoordinateSplit) -> BTreeMap<(usize, usize), PolyForm> {
        let mut out: BTreeMap<(usize, usize), PolyForm> = BTreeMap::new();
        for (mi, p) in &self.terms {
            out.entry(split.bidegree(*mi))
                .or_insert_with(|| PolyForm::zero(self.dim, self.degree))
                .terms
                .insert(*mi, p.clone());
        }
        out
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> DisplayForm<'a> {
        DisplayForm { form: self, names }
    }
}

pub struct DisplayForm<'a> {
    form: &'a PolyForm,
    names: &'a [String],
}

impl fmt::Display for DisplayForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        for (n, (mi, p)) in self.form.terms().enumerate() {
            let blade = blade_name(mi, self.names);
            // Single-term coefficients print inline; sums get parentheses.
            let (neg, coeff) = if p.num_terms() == 1 {
                let (m, c) = p.terms().next().expect("one term");
                let single = Poly::monomial(p.nvars(), &m.exponents(p.nvars()), c.abs());
                (c.is_negative(), single)
            } else {
                (false, p.clone())
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let text = coeff.display_with(self.names).to_string();
            let is_one = coeff.is_constant() && coeff.constant_term().is_one();
            match (mi.is_empty(), is_one, coeff.num_terms() > 1) {
                (true, _, true) => write!(f, "({text})")?,
                (true, _, false) => write!(f, "{text}")?,
                (false, true, _) => write!(f, "{blade}")?,
                (false, false, true) => write!(f, "({text}) {blade}")?,
                (false, false, false) => write!(f, "{text} {blade}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::exterior::default_names(self.dim);
        let body = self.display_with(&names).to_string();
        write!(f, "PolyForm(n={}, p={}: {body})", self.dim, self.degree)
    }
}

/// A vector field `Σ V_i ∂_i` with polynomial components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVectorField {
    pub components: Vec<Poly>,
}

impl PolyVectorField {
    pub fn zero(dim: usize) -> Self {
        PolyVectorField { components: vec![Poly::zero(dim); dim] }
    }

    pub fn new(components: Vec<Poly>) -> Result<Self, FormError> {
        let dim = components.len();
        for p in &components {
            if p.nvars() != dim {
                return Err(FormError::VariableCount { expected: dim, found: p.nvars() });
            }
            p.check_degree_cap()?;
        }
        Ok(PolyVectorField { components })
    }

    /// `∂_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[i] = Poly::one(dim);
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim());
        PolyVectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim());
        PolyVectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul_poly(&self, f: &Poly) -> PolyVectorField {
        PolyVectorField { components: self.components.iter().map(|c| c * f).collect() }
    }

    pub fn scale(&self, c: &Rational) -> PolyVectorField {
        PolyVectorField { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    fn masked(&self, mask: u16) -> PolyVectorField {
        PolyVectorField {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| if mask & (1 << i) != 0 { c.clone() } else { Poly::zero(c.nvars()) })
                .collect(),
        }
    }

    pub fn x_part(&self, split: &CoordinateSplit) -> PolyVectorField {
        self.masked(split.x_mask())
    }

    pub fn y_part(&self, split: &CoordinateSplit) -> PolyVectorField {
        self.masked(split.y_mask())
    }

    /// `V(f) = Σ V_i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.components
            .iter()
            .enumerate()
            .fold(Poly::zero(f.nvars()), |acc, (i, c)| &acc + &(c * &f.partial(i)))
    }

    pub fn eval(&self, point: &[Rational]) -> crate::exterior::Vector {
        crate::exterior::Vector(self.components.iter().map(|c| c.eval(point)).collect())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                let text = c.display_with(names).to_string();
                match text.as_str() {
                    "1" => format!("∂{name}"),
                    "-1" => format!("-∂{name}"),
                    _ if c.num_terms() > 1 => format!("({text}) ∂{name}"),
                    _ => format!("{text} ∂{name}"),
                }
            })
            .collect();
        let mut out = String::new();
        for (i, part) in parts.iter().enumerate() {
            match (i, part.strip_prefix('-')) {
                (0, _) => out.push_str(part),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(part);
                }
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }
}

/// `Σ_j ∂Y_{y_j} / ∂y_j` for a field supported on the y-block.
pub fn div_y(field: &PolyVectorField, split: &CoordinateSplit) -> Result<Poly, FormError> {
    if let Some(i) = split.x().iter().copied().find(|&i| !field.components[i].is_zero()) {
        return Err(FormError::NotAYField { component: i });
    }
    Ok(split
        .y()
        .iter()
        .fold(Poly::zero(field.dim()), |acc, &j| &acc + &field.components[j].partial(j)))
}

/// The radial field `Σ_{i ∈ x} x_i ∂_i`.
pub fn radial_x(split: &CoordinateSplit) -> PolyVectorField {
    let n = split.dim();
    let mut v = PolyVectorField::zero(n);
    for &i in split.x() {
        v.components[i] = Poly::var(n, i);
    }
    v
}

/// A frame `α_1, …, α_k` of polynomial 1-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    pub generators: Vec<PolyForm>,
}

impl FrameSpec {
    pub fn new(generators: Vec<PolyForm>) -> Self {
        FrameSpec { generators }
    }

    /// `{dy_j}` for the y-block of the split.
    pub fn coordinate(split: &CoordinateSplit) -> Self {
        FrameSpec { generators: split.y().iter().map(|&j| PolyForm::dx(split.dim(), j)).collect() }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `α_1∧…∧α_k`.
    pub fn wedge_all(&self, dim: usize) -> PolyForm {
        self.generators
            .iter()
            .fold(PolyForm::constant(dim, Rational::one()), |acc, a| acc.wedge(a))
    }

    /// Checks that `α_j = dy_j + Σ_i a_{ji} dx_i` and returns the x-coefficients `a_{ji}`,
    /// indexed `[j][position in the x-block]`.
    pub fn unit_y_coefficients(&self, split: &CoordinateSplit) -> Result<Vec<Vec<Poly>>, FormError> {
        let n = split.dim();
        if self.generators.len() != split.y().len() {
            return Err(FormError::FrameShape {
                generator: self.generators.len(),
                reason: format!("{} generators for a y-block of size {}", self.generators.len(), split.y().len()),
            });
        }
        let mut out = Vec::new();
        for (j, alpha) in self.generators.iter().enumerate() {
            if alpha.dim() != n || alpha.degree() != 1 {
                return Err(FormError::FrameShape { generator: j, reason: "not a 1-form on this space".into() });
            }
            for (l, &yl) in split.y().iter().enumerate() {
                let c = alpha.coefficient(MultiIndex::single(yl));
                let want = if l == j { Poly::one(n) } else { Poly::zero(n) };
                if c != want {
                    return Err(FormError::FrameShape {
                        generator: j,
                        reason: format!("coefficient of the y-direction {yl} is {c:?}, expected {want:?}"),
                    });
                }
            }
            out.push(split.x().iter().map(|&i| alpha.coefficient(MultiIndex::single(i))).collect());
        }
        Ok(out)
    }
}

/// Rewrites `η` in the coframe `(dx_i, α_j)` (substituting `dy_j = α_j − Σ a_{ji} dx_i`)
/// and buckets the result by `(x-degree, α-degree)`. In the returned forms the
/// slot of `y_j` stands for `α_j`.
pub fn frame_bidegree_decompose(
    frame: &FrameSpec,
    split: &CoordinateSplit,
    eta: &PolyForm,
) -> Result<BTreeMap<(usize, usize), PolyForm>, FormError> {
    let n = split.dim();
    let coeffs = frame.unit_y_coefficients(split)?;
    // Image of each coordinate covector under the substitution.
    let mut images: Vec<PolyForm> = (0..n).map(|i| PolyForm::dx(n, i)).collect();
    for (j, &yj) in split.y().iter().enumerate() {
        let mut img = PolyForm::dx(n, yj);
        for (pos, &xi) in split.x().iter().enumerate() {
            img = img.sub(&PolyForm::dx(n, xi).mul_poly(&coeffs[j][pos]));
        }
        images[yj] = img;
    }
    let mut rewritten = PolyForm::zero(n, eta.degree());
    for (mi, p) in eta.terms() {
        let mut acc = PolyForm::function(p.clone());
        for i in mi.indices() {
            acc = acc.wedge(&images[i]);
        }
        rewritten = rewritten.add(&acc);
    }
    Ok(rewritten.bidegree_components(split))
}

/// Every monomial of `p` that involves an x-variable, if any.
pub fn x_dependent_monomial(p: &Poly, split: &CoordinateSplit) -> Option<(Monomial, Rational)> {
    p.terms()
        .find(|(m, _)| m.degree_in(split.x_mask()) > 0)
        .map(|(m, c)| (*m, c.clone()))
}

/// Largest absolute coefficient over all terms (for quick size reports).
pub fn max_abs_coefficient(form: &PolyForm) -> Rational {
    form.terms().map(|(_, p)| p.max_abs_coefficient()).max().unwrap_or_else(Rational::zero).abs()
}
