//! Cosymplectic pairs `(α, β)` on R^{2n+1}: validation, the induced dvs form
//! `β∧α`, the normal-form test, and the ladder cosymplectic ⊃ weakly
//! co-Hamiltonian ⊃ co-Hamiltonian for vector fields.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exterior::{MultiIndex, Rational};
use crate::flatness::{involutivity_check, FrameSpec, InvolutivityReport};
use crate::pointwise::{self, DvsType};
use crate::poly::Poly;
use crate::polyform::{CoordinateSplit, FormError, PolyForm, PolyVectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CosymplecticError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("cosymplectic pairs live in odd dimension 2n+1 ≥ 3, got {dim}")]
    Dimension { dim: usize },
    #[error("α must be a 1-form and β a 2-form on the same space")]
    Shape,
    #[error("d{which} ≠ 0: {residual:?}")]
    NotClosed { which: &'static str, residual: PolyForm },
    #[error("field is classified {class}, not co-Hamiltonian; see the classification certificate")]
    NotCoHamiltonian { class: SymmetryClass },
    #[error("internal consistency failure: primitive residual {residual:?}")]
    Primitive { residual: PolyForm },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosymplecticPair {
    pub alpha: PolyForm,
    pub beta: PolyForm,
    /// Half-rank: the ambient dimension is `2n + 1`.
    pub n: usize,
}

impl CosymplecticPair {
    pub fn new(alpha: PolyForm, beta: PolyForm) -> Result<Self, CosymplecticError> {
        let dim = alpha.dim();
        if beta.dim() != dim || alpha.degree() != 1 || beta.degree() != 2 {
            return Err(CosymplecticError::Shape);
        }
        if dim.is_multiple_of(2) || dim < 3 {
            return Err(CosymplecticError::Dimension { dim });
        }
        Ok(CosymplecticPair { alpha, beta, n: (dim - 1) / 2 })
    }

    /// `α = dy`, `β = Σ dx_{2i−1}∧dx_{2i}` with y the last coordinate.
    pub fn standard(n: usize) -> Self {
        let split = CoordinateSplit::standard(n, 1);
        let dim = split.dim();
        CosymplecticPair { alpha: PolyForm::dx(dim, split.y()[0]), beta: standard_beta(&split), n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// `α∧β^n`.
    pub fn volume(&self) -> PolyForm {
        (0..self.n).fold(self.alpha.clone(), |acc, _| acc.wedge(&self.beta))
    }
}

fn standard_beta(split: &CoordinateSplit) -> PolyForm {
    let dim = split.dim();
    let x = split.x();
    (0..x.len() / 2).fold(PolyForm::zero(dim, 2), |acc, i| {
        acc.add(&PolyForm::dx(dim, x[2 * i]).wedge(&PolyForm::dx(dim, x[2 * i + 1])))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum VolumeCheck {
    /// The top coefficient is a nonzero constant.
    CertifiedGlobally { value: Rational },
    /// Nonzero at every sample; not a global statement.
    VerifiedAtSamples { count: usize },
    /// The top coefficient vanishes here.
    VanishesAt { point: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    /// Top coefficient of `α∧β^n`.
    pub top_coefficient: Poly,
    pub volume: VolumeCheck,
    /// `n = 1` lies outside the hypothesis `n > 1` under which the pair
    /// was introduced.
    pub below_stated_range: bool,
}

impl PairReport {
    pub fn valid(&self) -> bool {
        !matches!(self.volume, VolumeCheck::VanishesAt { .. })
    }
}

pub fn validate_pair(pair: &CosymplecticPair, samples: &[Vec<Rational>]) -> Result<PairReport, CosymplecticError> {
    let da = pair.alpha.d();
    if !da.is_zero() {
        return Err(CosymplecticError::NotClosed { which: "α", residual: da });
    }
    let db = pair.beta.d();
    if !db.is_zero() {
        return Err(CosymplecticError::NotClosed { which: "β", residual: db });
    }
    let dim = pair.dim();
    let top = MultiIndex::new(&(0..dim).collect::<Vec<_>>()).expect("full blade");
    let top_coefficient = pair.volume().coefficient(top);
    let volume = if top_coefficient.is_constant() && !top_coefficient.is_zero() {
        VolumeCheck::CertifiedGlobally { value: top_coefficient.constant_term() }
    } else {
        match samples.iter().find(|p| top_coefficient.eval(p).is_zero()) {
            Some(p) => VolumeCheck::VanishesAt { point: p.clone() },
            None if top_coefficient.is_zero() => VolumeCheck::VanishesAt { point: vec![Rational::zero(); dim] },
            None => VolumeCheck::VerifiedAtSamples { count: samples.len() },
        }
    };
    Ok(PairReport { top_coefficient, volume, below_stated_range: pair.n == 1 })
}

/// `ω = β∧α`.
pub fn induced_dvs(pair: &CosymplecticPair) -> PolyForm {
    pair.beta.wedge(&pair.alpha)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedReport {
    pub omega: PolyForm,
    pub closed: bool,
    /// Pointwise type at each sample.
    pub types: Vec<Option<DvsType>>,
    /// `dim F(ω_p)` at each sample.
    pub f_dims: Vec<usize>,
    /// The frame `{α}`.
    pub involutivity: InvolutivityReport,
}

impl InducedReport {
    /// Type `(n, 1)` with `dim F = 1` at every sample, closed, involutive.
    pub fn passed(&self, n: usize) -> bool {
        self.closed
            && self.involutivity.involutive
            && self.types.iter().all(|t| *t == Some(DvsType { m: n, k: 1 }))
            && self.f_dims.iter().all(|&d| d == 1)
    }
}

pub fn induced_dvs_report(pair: &CosymplecticPair, samples: &[Vec<Rational>]) -> Result<InducedReport, CosymplecticError> {
    let omega = induced_dvs(pair);
    let mut types = Vec::new();
    let mut f_dims = Vec::new();
    for p in samples {
        let at = omega.evaluate_at(p)?;
        types.push(pointwise::dvs_type(&at));
        f_dims.push(pointwise::f_space(&at).len());
    }
    let involutivity = involutivity_check(&FrameSpec::new(vec![pair.alpha.clone()]), pair.dim());
    Ok(InducedReport { closed: omega.d().is_zero(), omega, types, f_dims, involutivity })
}

/// Exact match with `α = dy`, `β = Σ dx_{x[2i]}∧dx_{x[2i+1]}` in the labels
/// given by `split` (one y-coordinate).
pub fn is_standard_cosymplectic(pair: &CosymplecticPair, split: &CoordinateSplit) -> bool {
    split.dim() == pair.dim()
        && split.y().len() == 1
        && pair.alpha == PolyForm::dx(pair.dim(), split.y()[0])
        && pair.beta == standard_beta(split)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymmetryClass {
    None,
    Cosymplectic,
    WeaklyCoHamiltonian,
    CoHamiltonian,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryClass::None => "not cosymplectic",
            SymmetryClass::Cosymplectic => "cosymplectic",
            SymmetryClass::WeaklyCoHamiltonian => "weakly co-Hamiltonian",
            SymmetryClass::CoHamiltonian => "co-Hamiltonian",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: SymmetryClass,
    pub lie_alpha: PolyForm,
    pub lie_beta: PolyForm,
    /// `α(X)`.
    pub alpha_of_x: Poly,
    /// `ι_X β + α(X) α`.
    pub one_form: PolyForm,
    /// `d(ι_X β + α(X) α)`.
    pub closedness: PolyForm,
    /// `γ` with `dγ = ι_X β + α(X) α`, when the one-form is closed.
    pub primitive: Option<Poly>,
}

fn full_split(dim: usize) -> CoordinateSplit {
    CoordinateSplit::new((0..dim).collect(), Vec::new()).expect("all coordinates")
}

/// Cone primitive over all coordinates of a closed form; `None` if not closed.
pub fn poincare_primitive(form: &PolyForm) -> Option<PolyForm> {
    if !form.d().is_zero() {
        return None;
    }
    let primitive = form.homotopy_x(&full_split(form.dim()));
    if form.degree() == 0 || primitive.d() != *form {
        return None;
    }
    Some(primitive)
}

pub fn classify_symmetry(x: &PolyVectorField, pair: &CosymplecticPair) -> Classification {
    let lie_alpha = pair.alpha.lie_derivative(x);
    let lie_beta = pair.beta.lie_derivative(x);
    let alpha_of_x = pair.alpha.interior(x).coefficient(MultiIndex::new(&[]).expect("empty blade"));
    let one_form = pair.beta.interior(x).add(&pair.alpha.mul_poly(&alpha_of_x));
    let closedness = one_form.d();
    let primitive = poincare_primitive(&one_form)
        .map(|g| g.coefficient(MultiIndex::new(&[]).expect("empty blade")));
    let cosymplectic = lie_alpha.is_zero() && lie_beta.is_zero();
    let class = if !cosymplectic {
        SymmetryClass::None
    } else if primitive.is_none() {
        SymmetryClass::Cosymplectic
    } else if !alpha_of_x.is_zero() {
        SymmetryClass::WeaklyCoHamiltonian
    } else {
        SymmetryClass::CoHamiltonian
    };
    Classification { class, lie_alpha, lie_beta, alpha_of_x, one_form, closedness, primitive }
}

/// `γ∧α` with `d(γ∧α) = ι_X(β∧α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoHamPrimitive {
    pub gamma: Poly,
    pub form: PolyForm,
    pub residual: PolyForm,
}

pub fn coham_primitive(x: &PolyVectorField, pair: &CosymplecticPair) -> Result<CoHamPrimitive, CosymplecticError> {
    let c = classify_symmetry(x, pair);
    if c.class != SymmetryClass::CoHamiltonian {
        return Err(CosymplecticError::NotCoHamiltonian { class: c.class });
    }
    let gamma = c.primitive.expect("co-Hamiltonian fields carry a primitive");
    let form = pair.alpha.mul_poly(&gamma);
    let residual = form.d().sub(&induced_dvs(pair).interior(x));
    if !residual.is_zero() {
        return Err(CosymplecticError::Primitive { residual });
    }
    Ok(CoHamPrimitive { gamma, form, residual })
}

/// On a box, `ι_X(β∧α)` of a cosymplectic field is closed and hence exact.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxExactness {
    pub class: SymmetryClass,
    /// `ι_X(β∧α)`.
    pub contraction: PolyForm,
    pub closed: bool,
    pub primitive: Option<PolyForm>,
}

impl BoxExactness {
    pub fn exact(&self) -> bool {
        self.primitive.is_some()
    }
}

pub fn box_exactness_check(x: &PolyVectorField, pair: &CosymplecticPair) -> BoxExactness {
    let class = classify_symmetry(x, pair).class;
    let contraction = induced_dvs(pair).interior(x);
    BoxExactness { class, closed: contraction.d().is_zero(), primitive: poincare_primitive(&contraction), contraction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{rational, ratio, standard_dvs};

    fn var(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn samples(n: usize) -> Vec<Vec<Rational>> {
        (0..20).map(|s| (0..n).map(|i| ratio(((s * 7 + i * 3) % 11) as i64 - 5, 4)).collect()).collect()
    }

    fn perturbed() -> CosymplecticPair {
        let n = 5;
        let beta = PolyForm::term(n, &[0, 1], Poly::one(n))
            .add(&PolyForm::term(n, &[0, 2], var(n, 0)))
            .add(&PolyForm::term(n, &[2, 3], Poly::one(n)));
        CosymplecticPair::new(PolyForm::dx(n, 4), beta).unwrap()
    }

    #[test]
    fn validation() {
        let r = validate_pair(&CosymplecticPair::standard(2), &samples(5)).unwrap();
        assert_eq!(r.volume, VolumeCheck::CertifiedGlobally { value: rational(2) });
        assert!(r.valid() && !r.below_stated_range);

        let r = validate_pair(&perturbed(), &samples(5)).unwrap();
        assert!(r.valid());

        let bad = CosymplecticPair::new(PolyForm::term(5, &[4], var(5, 0)), CosymplecticPair::standard(2).beta).unwrap();
        assert!(matches!(validate_pair(&bad, &[]), Err(CosymplecticError::NotClosed { which: "α", .. })));

        let even = CosymplecticPair::new(PolyForm::dx(4, 3), PolyForm::term(4, &[0, 1], Poly::one(4)));
        assert!(matches!(even, Err(CosymplecticError::Dimension { dim: 4 })));

        assert!(validate_pair(&CosymplecticPair::standard(1), &[]).unwrap().below_stated_range);

        // β = (1 + x1) dx1∧dx2 is closed, and its volume vanishes on x1 = −1.
        let beta = PolyForm::term(3, &[0, 1], &Poly::one(3) + &var(3, 0));
        let pair = CosymplecticPair::new(PolyForm::dx(3, 2), beta).unwrap();
        let r = validate_pair(&pair, &[vec![rational(0); 3], vec![rational(-1), rational(0), rational(0)]]).unwrap();
        assert!(!r.valid());
    }

    #[test]
    fn induced_form() {
        let pair = CosymplecticPair::standard(2);
        assert_eq!(induced_dvs(&pair), PolyForm::from_alt(&standard_dvs(2, 1)));
        let r = induced_dvs_report(&perturbed(), &samples(5)).unwrap();
        assert!(r.passed(2));

        let degenerate = CosymplecticPair::new(PolyForm::dx(5, 4), PolyForm::term(5, &[0, 1], Poly::one(5))).unwrap();
        let r = induced_dvs_report(&degenerate, &samples(5)).unwrap();
        assert!(r.types.iter().all(Option::is_none));
    }

    #[test]
    fn normal_form_recognition() {
        let split = CoordinateSplit::standard(2, 1);
        assert!(is_standard_cosymplectic(&CosymplecticPair::standard(2), &split));
        let mut doubled = CosymplecticPair::standard(2);
        doubled.alpha = doubled.alpha.scale(&rational(2));
        assert!(!is_standard_cosymplectic(&doubled, &split));
        let permuted = CoordinateSplit::new(vec![2, 3, 0, 1], vec![4]).unwrap();
        assert!(is_standard_cosymplectic(&CosymplecticPair::standard(2), &permuted));
    }

    #[test]
    fn classification_ladder() {
        let pair = CosymplecticPair::standard(2);
        let n = 5;
        let c = classify_symmetry(&PolyVectorField::coordinate(n, 4), &pair);
        assert_eq!(c.class, SymmetryClass::WeaklyCoHamiltonian);
        assert_eq!(c.alpha_of_x, Poly::one(n));
        assert_eq!(c.primitive, Some(var(n, 4)));

        // X_H for H = x1: ι_Xβ = dx1.
        let mut xh = PolyVectorField::zero(n);
        xh.components[1] = Poly::constant(n, rational(-1));
        let c = classify_symmetry(&xh, &pair);
        assert_eq!(c.class, SymmetryClass::CoHamiltonian);
        let p = coham_primitive(&xh, &pair).unwrap();
        assert_eq!(p.gamma, var(n, 0));
        assert_eq!(p.form, PolyForm::term(n, &[4], var(n, 0)));

        let mut radial = PolyVectorField::zero(n);
        radial.components[0] = var(n, 0);
        let c = classify_symmetry(&radial, &pair);
        assert_eq!(c.class, SymmetryClass::None);
        assert!(!c.lie_beta.is_zero());

        let z = coham_primitive(&PolyVectorField::zero(n), &pair).unwrap();
        assert!(z.form.is_zero());
        assert!(matches!(
            coham_primitive(&PolyVectorField::coordinate(n, 4), &pair),
            Err(CosymplecticError::NotCoHamiltonian { class: SymmetryClass::WeaklyCoHamiltonian })
        ));
    }

    #[test]
    fn cosymplectic_fields_on_a_box_have_primitives() {
        // α(X) is constant for cosymplectic X, so the one-form is closed and
        // the label Cosymplectic alone never occurs for polynomial fields.
        let pair = CosymplecticPair::standard(1);
        let n = 3;
        let mut shear = PolyVectorField::zero(n);
        shear.components[0] = var(n, 1);
        let c = classify_symmetry(&shear, &pair);
        assert_eq!(c.class, SymmetryClass::CoHamiltonian);
        assert_eq!(c.primitive, Some((&var(n, 1) * &var(n, 1)).scale(&ratio(1, 2))));
    }

    #[test]
    fn box_level_exactness() {
        let pair = CosymplecticPair::standard(2);
        let check = box_exactness_check(&PolyVectorField::coordinate(5, 4), &pair);
        assert_eq!(check.class, SymmetryClass::WeaklyCoHamiltonian);
        assert_eq!(check.contraction, pair.beta);
        assert!(check.closed && check.exact());
        assert_eq!(check.primitive.unwrap().d(), pair.beta);
    }
}
