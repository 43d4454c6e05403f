//! Infinitesimal symmetries of the model form `ω = ω̄∧ν` with constant
//! symplectic `ω̄` on the x-block and `ν = dy_1∧…∧dy_k`: every polynomial
//! symmetry is `X_H − div_y(Y)·ℰ + Y` with `Y` a field on the y-block alone.

use num_traits::Zero;
use thiserror::Error;

use crate::exterior::{standard_symplectic, AltForm, Matrix, MultiIndex, Rational};
use crate::poly::{Monomial, Poly};
use crate::polyform::{div_y, x_dependent_monomial, CoordinateSplit, FormError, PolyForm, PolyVectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("ω̄ is degenerate on the x-block; kernel vector {kernel:?}")]
    Degenerate { kernel: Vec<Rational> },
    #[error("ω̄ must be a constant 2-form supported on the x-block")]
    NotModel,
    #[error("θ must be a y-independent 1-form in the dx's with dθ = ω̄; dθ − ω̄ = {residual:?}")]
    BadPrimitive { residual: PolyForm },
    #[error("equation ι_X ω̄ = β needs β in the dx's only; found a dy term in {beta:?}")]
    NotXForm { beta: PolyForm },
    #[error("not a symmetry of the model: component {component} of V^y depends on x (monomial {monomial:?} with coefficient {coefficient})")]
    YDependsOnX { component: usize, monomial: Monomial, coefficient: Rational },
    #[error("not a symmetry of the model: ι_W ω̄ is not d^x-closed, d^x ι_W ω̄ = {residual:?}")]
    NotConformal { residual: PolyForm },
    #[error("internal consistency failure: rebuilding the generator differs from V by {difference:?}")]
    RoundTrip { difference: PolyVectorField },
    #[error("vector field has {found} components, expected {expected}")]
    FieldDimension { expected: usize, found: usize },
}

/// Constant `ω̄` on the x-block, a primitive `θ`, its Euler field `ℰ` and `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelContext {
    pub split: CoordinateSplit,
    pub omega_bar: AltForm,
    pub theta: PolyForm,
    pub euler: PolyVectorField,
    pub nu: PolyForm,
    /// `X = solver·β` solves `ι_X ω̄ = β` on the x-block.
    solver: Matrix,
}

impl ModelContext {
    /// `ω̄ = Σ dx_{2i−1}∧dx_{2i}`, `θ = Σ x_{2i−1} dx_{2i}` in the standard split.
    pub fn standard(m: usize, k: usize) -> Self {
        Self::for_split(&CoordinateSplit::standard(m, k)).expect("standard model")
    }

    /// The standard model in the labels of `split`: pairs `(x[2i], x[2i+1])`.
    pub fn for_split(split: &CoordinateSplit) -> Result<Self, SymmetryError> {
        if split.x().len() % 2 == 1 {
            return Err(SymmetryError::NotModel);
        }
        let split = split.clone();
        let n = split.dim();
        let m = split.x().len() / 2;
        let x = split.x().to_vec();
        let omega_bar = standard_symplectic(m).embed(n, &x).expect("x-block fits");
        let theta = (0..m).fold(PolyForm::zero(n, 1), |acc, i| {
            acc.add(&PolyForm::term(n, &[x[2 * i + 1]], Poly::var(n, x[2 * i])))
        });
        Self::new(split, omega_bar, theta)
    }

    pub fn new(split: CoordinateSplit, omega_bar: AltForm, theta: PolyForm) -> Result<Self, SymmetryError> {
        let n = split.dim();
        if omega_bar.dim() != n || omega_bar.degree() != 2 || omega_bar.terms().any(|(mi, _)| split.bidegree(mi) != (2, 0)) {
            return Err(SymmetryError::NotModel);
        }
        let bar = PolyForm::from_alt(&omega_bar);
        let residual = theta.d().sub(&bar);
        if theta.dim() != n || theta.degree() != 1 || !residual.is_zero() || theta.terms().any(|(mi, _)| split.bidegree(mi) != (1, 0)) {
            return Err(SymmetryError::BadPrimitive { residual });
        }
        let a = x_block(&omega_bar, &split);
        // (ι_X ω̄)_l = Σ_i X_i A_il, so ι_X ω̄ = β reads Aᵀ X = β, i.e. X = −A⁻¹ β.
        let Some(inv) = a.inverse() else {
            let kernel = a.nullspace().into_iter().next().unwrap_or_default();
            return Err(SymmetryError::Degenerate { kernel });
        };
        let mut solver = Matrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                solver[(i, j)] = -inv[(i, j)].clone();
            }
        }
        let nu = split.y_volume();
        let mut ctx = ModelContext { split, omega_bar, theta, euler: PolyVectorField::zero(n), nu, solver };
        ctx.euler = solve_contraction(&ctx, &ctx.theta)?;
        Ok(ctx)
    }

    pub fn dim(&self) -> usize {
        self.split.dim()
    }

    pub fn omega_bar_form(&self) -> PolyForm {
        PolyForm::from_alt(&self.omega_bar)
    }

    /// `ω = ω̄∧ν`.
    pub fn omega(&self) -> PolyForm {
        self.omega_bar_form().wedge(&self.nu)
    }
}

fn x_block(bar: &AltForm, split: &CoordinateSplit) -> Matrix {
    let x = split.x();
    let mut a = Matrix::zeros(x.len(), x.len());
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            if xi < xj {
                let c = bar.coefficient(MultiIndex::new(&[xi, xj]).expect("distinct"));
                a[(j, i)] = -c.clone();
                a[(i, j)] = c;
            }
        }
    }
    a
}

/// The x-block field `X` with `ι_X ω̄ = β` for a 1-form `β` in the dx's.
pub fn solve_contraction(ctx: &ModelContext, beta: &PolyForm) -> Result<PolyVectorField, SymmetryError> {
    let n = ctx.dim();
    if beta.degree() != 1 || beta.terms().any(|(mi, _)| split_is_y(&ctx.split, mi)) {
        return Err(SymmetryError::NotXForm { beta: beta.clone() });
    }
    let x = ctx.split.x();
    let b: Vec<Poly> = x.iter().map(|&i| beta.coefficient(MultiIndex::single(i))).collect();
    let mut v = PolyVectorField::zero(n);
    for (r, &xr) in x.iter().enumerate() {
        let mut acc = Poly::zero(n);
        for (l, bl) in b.iter().enumerate() {
            let s = &ctx.solver[(r, l)];
            if !s.is_zero() && !bl.is_zero() {
                acc = &acc + &bl.scale(s);
            }
        }
        v.components[xr] = acc;
    }
    Ok(v)
}

fn split_is_y(split: &CoordinateSplit, mi: MultiIndex) -> bool {
    split.bidegree(mi).1 > 0
}

/// `ℰ` with `ι_ℰ ω̄ = θ`.
pub fn euler_field(ctx: &ModelContext) -> PolyVectorField {
    ctx.euler.clone()
}

/// `X^x_H` with `ι_X ω̄ = d^x H`.
pub fn hamiltonian_field_x(h: &Poly, ctx: &ModelContext) -> PolyVectorField {
    let dxh = PolyForm::function(h.clone()).d_x(&ctx.split);
    solve_contraction(ctx, &dxh).expect("d^x H has only dx terms")
}

/// A pair `(H, Y)` parametrizing a symmetry; `Y` lives on the y-block.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGenerator {
    pub h: Poly,
    pub y: PolyVectorField,
}

impl SymmetryGenerator {
    pub fn new(h: Poly, y: PolyVectorField, split: &CoordinateSplit) -> Result<Self, SymmetryError> {
        let n = split.dim();
        if y.dim() != n {
            return Err(SymmetryError::FieldDimension { expected: n, found: y.dim() });
        }
        if h.nvars() != n {
            return Err(FormError::VariableCount { expected: n, found: h.nvars() }.into());
        }
        div_y(&y, split)?;
        Ok(SymmetryGenerator { h, y })
    }

    /// `H(0, y) = 0`: the gauge in which decomposition is unique.
    pub fn is_normalized(&self, split: &CoordinateSplit) -> bool {
        self.h.terms().all(|(m, _)| m.degree_in(split.x_mask()) > 0)
    }
}

/// `V = X^x_H − div_y(Y)·ℰ + Y`.
pub fn build_symmetry(g: &SymmetryGenerator, ctx: &ModelContext) -> Result<PolyVectorField, SymmetryError> {
    let c = div_y(&g.y, &ctx.split)?;
    Ok(hamiltonian_field_x(&g.h, ctx).sub(&ctx.euler.mul_poly(&c)).add(&g.y))
}

/// `L_V ω`, zero exactly when `V` preserves `ω`.
pub fn verify_symmetry(v: &PolyVectorField, omega: &PolyForm) -> PolyForm {
    omega.lie_derivative(v)
}

/// Recovers `(H, Y)` from a symmetry `V`, with `H(0, y) = 0`.
pub fn decompose_symmetry(v: &PolyVectorField, ctx: &ModelContext) -> Result<SymmetryGenerator, SymmetryError> {
    let split = &ctx.split;
    if v.dim() != ctx.dim() {
        return Err(SymmetryError::FieldDimension { expected: ctx.dim(), found: v.dim() });
    }
    let y = v.y_part(split);
    for &j in split.y() {
        if let Some((monomial, coefficient)) = x_dependent_monomial(&y.components[j], split) {
            return Err(SymmetryError::YDependsOnX { component: j, monomial, coefficient });
        }
    }
    let c = div_y(&y, split)?;
    let w = v.x_part(split).add(&ctx.euler.mul_poly(&c));
    let beta = ctx.omega_bar_form().interior(&w);
    let residual = beta.d_x(split);
    if !residual.is_zero() {
        return Err(SymmetryError::NotConformal { residual });
    }
    let h = beta.homotopy_x(split).coefficient(MultiIndex::new(&[]).expect("empty blade"));
    let g = SymmetryGenerator { h, y };
    let rebuilt = build_symmetry(&g, ctx)?;
    if &rebuilt != v {
        return Err(SymmetryError::RoundTrip { difference: rebuilt.sub(v) });
    }
    Ok(g)
}

/// The Hamiltonian-form candidate and its residual `dα − ι_V ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianForm {
    pub alpha: PolyForm,
    pub residual: PolyForm,
}

impl HamiltonianForm {
    /// `α` is a Hamiltonian form for `V`.
    pub fn certifies(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `α = H·ν + θ∧ι_Y ν`, checked against `ι_V ω` for `V = build_symmetry(g)`.
pub fn hamiltonian_form_candidate(g: &SymmetryGenerator, ctx: &ModelContext) -> Result<HamiltonianForm, SymmetryError> {
    let alpha = ctx.nu.mul_poly(&g.h).add(&ctx.theta.wedge(&ctx.nu.interior(&g.y)));
    let v = build_symmetry(g, ctx)?;
    let residual = alpha.d().sub(&ctx.omega().interior(&v));
    Ok(HamiltonianForm { alpha, residual })
}

/// `L_{cℰ} ω̄ − c·ω̄`, zero for every constant `c`.
pub fn conformal_residual(c: &Rational, ctx: &ModelContext) -> PolyForm {
    let bar = ctx.omega_bar_form();
    bar.lie_derivative(&ctx.euler.scale(c)).sub(&bar.scale(c))
}
