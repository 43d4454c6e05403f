//! Flatness of dvs forms: frame membership and involutivity of the ideal
//! generated by `F(ω)`, the Moser path from `ω̄_0∧ν` to `ω̄∧ν` along the
//! leaves of the y-foliation, numeric flow integration with its Jacobian,
//! pullback verification on a grid, and the audit showing that closedness
//! forces involutivity once `m > 2`.

use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exterior::{binomial, AltForm, Matrix, MultiIndex, Rational, Vector};
use crate::numeric::{pullback_constant, rk4, solve_in_place, solve_with_rcond, PolySystem, Real, TwoFloat};
use crate::pointwise::{self, lepage_injectivity, lepage_kernel, NormalBasis, PointwiseError};
use crate::poly::Poly;
pub use crate::polyform::FrameSpec;
use crate::polyform::{frame_bidegree_decompose, CoordinateSplit, FormError, PolyForm};

/// Step for the central differences of the Moser field.
pub const FD_STEP: f64 = 1e-6;
/// Reciprocal condition number below which the field solve aborts.
pub const RCOND_MIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlatnessError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Pointwise(#[from] PointwiseError),
    #[error("form is not closed; dω = {d_omega:?}")]
    NotClosed { d_omega: PolyForm },
    #[error("form has degree {degree}, but a y-block of size {k} needs degree {}", k + 2)]
    DegreeForSplit { degree: usize, k: usize },
    #[error("ω is not ω̄∧dy_1∧…∧dy_k: re-wedge residual {residual:?}")]
    Rewedge { residual: PolyForm },
    #[error("F(ω) at {point:?} has dimension {f_dim}, not spanned by the dy's")]
    FNotSpannedByDy { point: Vec<Rational>, f_dim: usize },
    #[error("ω̄_t is degenerate on the x-block at t = {t} and point {point:?}; shrink the box")]
    DegenerateOmegaBarT { t: Rational, point: Vec<Rational> },
    #[error("Moser field solve is ill-conditioned at t = {t}, x = {point:?} (rcond {rcond:e})")]
    SingularField { t: f64, point: Vec<f64>, rcond: f64 },
    #[error("flow left the inflated box at t = {t} (x = {point:?})")]
    LeftBox { t: f64, point: Vec<f64> },
    #[error("frame is not of the admitted shape: {0}")]
    FrameMismatch(String),
    #[error("{stage}: {source}")]
    Stage { stage: &'static str, source: Box<FlatnessError> },
    #[error("box must have one positive half-width per coordinate")]
    BadBox,
}

fn stage<T>(name: &'static str, r: Result<T, FlatnessError>) -> Result<T, FlatnessError> {
    r.map_err(|e| FlatnessError::Stage { stage: name, source: Box::new(e) })
}

/// Outcome of checking `α_i∧ω = 0` and pointwise independence of the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport {
    /// `α_i∧ω` for each generator.
    pub products: Vec<PolyForm>,
    /// First sample where the generators are dependent.
    pub dependent_at: Option<Vec<Rational>>,
}

impl FrameReport {
    pub fn members(&self) -> bool {
        self.products.iter().all(PolyForm::is_zero)
    }

    pub fn independent(&self) -> bool {
        self.dependent_at.is_none()
    }

    pub fn passed(&self) -> bool {
        self.members() && self.independent()
    }
}

pub fn verify_frame(omega: &PolyForm, frame: &FrameSpec, samples: &[Vec<Rational>]) -> Result<FrameReport, FlatnessError> {
    let n = omega.dim();
    for a in &frame.generators {
        if a.dim() != n || a.degree() != 1 {
            return Err(FlatnessError::FrameMismatch("generators must be 1-forms on the same space".into()));
        }
    }
    let products = frame.generators.iter().map(|a| a.wedge(omega)).collect();
    let mut dependent_at = None;
    for p in samples {
        let rows: Vec<Vec<Rational>> = frame
            .generators
            .iter()
            .map(|a| a.evaluate_at(p).map(|v| v.to_dense()))
            .collect::<Result<_, _>>()?;
        if Matrix::from_rows(&rows, n).rank() < frame.len() {
            dependent_at = Some(p.clone());
            break;
        }
    }
    Ok(FrameReport { products, dependent_at })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutivityReport {
    /// `dα_i∧α_1∧…∧α_k` for each generator.
    pub residuals: Vec<PolyForm>,
    pub involutive: bool,
}

pub fn involutivity_check(frame: &FrameSpec, dim: usize) -> InvolutivityReport {
    let all = frame.wedge_all(dim);
    let residuals: Vec<PolyForm> = frame.generators.iter().map(|a| a.d().wedge(&all)).collect();
    let involutive = residuals.iter().all(PolyForm::is_zero);
    InvolutivityReport { residuals, involutive }
}

/// `ω̄ = ι_{∂y_k}⋯ι_{∂y_1} ω`, checked by `ω̄∧dy_1∧…∧dy_k = ω`.
pub fn extract_omega_bar(omega: &PolyForm, split: &CoordinateSplit) -> Result<PolyForm, FlatnessError> {
    let k = split.y().len();
    if omega.degree() != k + 2 || omega.dim() != split.dim() {
        return Err(FlatnessError::DegreeForSplit { degree: omega.degree(), k });
    }
    let n = omega.dim();
    let mut bar = omega.clone();
    for &j in split.y() {
        bar = bar.interior(&crate::polyform::PolyVectorField::coordinate(n, j));
    }
    let residual = bar.wedge(&split.y_volume()).sub(omega);
    if !residual.is_zero() {
        return Err(FlatnessError::Rewedge { residual });
    }
    Ok(bar)
}

/// Checks that `F(ω_p)` has dimension `k` at every sample (for top-degree
/// forms: that `ω_p ≠ 0`).
pub fn check_dy_span(omega: &PolyForm, split: &CoordinateSplit, samples: &[Vec<Rational>]) -> Result<(), FlatnessError> {
    for p in samples {
        let at = omega.evaluate_at(p)?;
        // For m = 1 the form has top degree and F is everything wherever it is nonzero.
        if omega.degree() == omega.dim() && !at.is_zero() {
            continue;
        }
        let f_dim = pointwise::f_space(&at).len();
        if f_dim != split.y().len() {
            return Err(FlatnessError::FNotSpannedByDy { point: p.clone(), f_dim });
        }
    }
    Ok(())
}

/// Points `{-w_i, …, w_i}` per coordinate with `per_axis` values each.
pub fn box_grid(half_width: &[Rational], per_axis: usize) -> Vec<Vec<Rational>> {
    let axis = |w: &Rational| -> Vec<Rational> {
        if per_axis <= 1 {
            return vec![Rational::zero()];
        }
        let steps = Rational::from_integer((per_axis as i64 - 1).into());
        (0..per_axis)
            .map(|i| -w + w * Rational::from_integer((2 * i as i64).into()) / &steps)
            .collect()
    };
    let mut points = vec![Vec::new()];
    for w in half_width {
        let values = axis(w);
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    points
}

/// Everything the flow stage needs, in coordinates centred at the origin.
#[derive(Clone, Debug)]
pub struct MoserSetup {
    pub split: CoordinateSplit,
    pub center: Vec<Rational>,
    pub half_width: Vec<Rational>,
    /// ω after translating the centre to the origin.
    pub omega: PolyForm,
    pub omega_bar: PolyForm,
    /// ω̄ at the origin, as a constant form.
    pub omega_bar_0: PolyForm,
    /// `ω̄_0∧dy_1∧…∧dy_k`.
    pub omega_0: PolyForm,
    /// `d^xθ = ω̄ − ω̄_0`.
    pub theta: PolyForm,
    pub m: usize,
    pub k: usize,
}

const T_SAMPLES: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

fn x_block_matrix(bar: &AltForm, split: &CoordinateSplit) -> Matrix {
    let x = split.x();
    let mut a = Matrix::zeros(x.len(), x.len());
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            if xi < xj {
                let c = bar.coefficient(MultiIndex::new(&[xi, xj]).expect("distinct"));
                a[(i, j)] = c.clone();
                a[(j, i)] = -c;
            }
        }
    }
    a
}

pub fn moser_setup(
    omega: &PolyForm,
    split: &CoordinateSplit,
    center: &[Rational],
    half_width: &[Rational],
    samples_per_axis: usize,
) -> Result<MoserSetup, FlatnessError> {
    let n = omega.dim();
    if half_width.len() != n || half_width.iter().any(|w| !w.is_positive()) {
        return Err(FlatnessError::BadBox);
    }
    if center.len() != n {
        return Err(FormError::PointDimension { expected: n, found: center.len() }.into());
    }
    let d_omega = omega.d();
    if !d_omega.is_zero() {
        return Err(FlatnessError::NotClosed { d_omega });
    }
    let omega = omega.translate(center);
    let omega_bar = extract_omega_bar(&omega, split)?;
    let origin = vec![Rational::zero(); n];
    let bar0 = omega_bar.evaluate_at(&origin)?;
    let omega_bar_0 = PolyForm::from_alt(&bar0);
    let omega_0 = omega_bar_0.wedge(&split.y_volume());
    let theta = omega_bar.sub(&omega_bar_0).homotopy_x(split);
    debug_assert_eq!(theta.d_x(split), omega_bar.sub(&omega_bar_0));

    // Non-degeneracy of ω̄_t on the x-block over the box and the t-grid.
    let a0 = x_block_matrix(&bar0, split);
    let grid = box_grid(half_width, samples_per_axis);
    let failure = grid.par_iter().find_map_first(|rel| {
        let a = x_block_matrix(&omega_bar.evaluate_at(rel).expect("dimension checked"), split);
        T_SAMPLES.iter().find_map(|&(num, den)| {
            let t = Rational::new(num.into(), den.into());
            let one_minus = Rational::one() - &t;
            let mut at = Matrix::zeros(a.rows(), a.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    at[(i, j)] = &t * &a[(i, j)] + &one_minus * &a0[(i, j)];
                }
            }
            at.determinant().is_zero().then(|| {
                let point = rel.iter().zip(center).map(|(r, c)| r + c).collect();
                FlatnessError::DegenerateOmegaBarT { t, point }
            })
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let m = split.x().len() / 2;
    let k = split.y().len();
    Ok(MoserSetup {
        split: split.clone(),
        center: center.to_vec(),
        half_width: half_width.to_vec(),
        omega,
        omega_bar,
        omega_bar_0,
        omega_0,
        theta,
        m,
        k,
    })
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The Moser field on one leaf (fixed y), compiled for evaluation in the
/// x-block.
pub struct LeafField<'a, T: Real = f64> {
    setup: &'a MoserSetup,
    dim2m: usize,
    pairs: Vec<(usize, usize)>,
    system: PolySystem<T>,
    a0: Vec<T>,
    bound: Vec<T>,
    values: Vec<T>,
    scratch: Vec<T>,
    a: Vec<T>,
    xp: Vec<T>,
    plus: Vec<T>,
    minus: Vec<T>,
}

impl<'a, T: Real> LeafField<'a, T> {
    /// `point` is a full coordinate vector relative to the centre; only its
    /// y-entries are used.
    pub fn new(setup: &'a MoserSetup, point: &[f64]) -> Self {
        let x = setup.split.x();
        let d = x.len();
        let mut pairs = Vec::new();
        let mut polys = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let (lo, hi, sign) = if x[i] < x[j] { (x[i], x[j], 1) } else { (x[j], x[i], -1) };
                let p = setup.omega_bar.coefficient(MultiIndex::new(&[lo, hi]).expect("distinct"));
                pairs.push((i, j));
                polys.push(if sign > 0 { p } else { -&p });
            }
        }
        for &xi in x {
            polys.push(setup.theta.coefficient(MultiIndex::single(xi)));
        }
        let system = PolySystem::compile(&polys, x, point);
        let bar0 = setup.omega_bar_0.evaluate_at(&vec![Rational::zero(); setup.split.dim()]).expect("constant");
        let a0m = x_block_matrix(&bar0, &setup.split);
        let a0 = (0..d * d).map(|r| T::from_rational(&a0m[(r / d, r % d)])).collect();
        let bound = x.iter().map(|&i| T::lift(1.5) * T::from_rational(&setup.half_width[i])).collect();
        let zero = vec![T::zero(); d];
        LeafField {
            setup,
            dim2m: d,
            pairs,
            values: vec![T::zero(); system.len()],
            scratch: vec![T::zero(); system.scratch_len()],
            system,
            a0,
            bound,
            a: vec![T::zero(); d * d],
            xp: zero.clone(),
            plus: zero.clone(),
            minus: zero,
        }
    }

    // (ι_X ω̄_t)_l = Σ_i X_i A_il = −(A X)_l for skew A, so the system is A X = θ.
    fn assemble(&mut self, t: T, x: &[T]) {
        let d = self.dim2m;
        self.system.eval_into(x, &mut self.values, &mut self.scratch);
        for (r, v) in self.a0.iter().enumerate() {
            self.a[r] = (T::one() - t) * *v;
        }
        for (q, &(i, j)) in self.pairs.iter().enumerate() {
            let c = t * self.values[q];
            self.a[i * d + j] += c;
            self.a[j * d + i] -= c;
        }
    }

    /// `X_t(x)` without a condition estimate.
    pub fn eval_plain(&mut self, t: T, x: &[T], out: &mut [T]) -> Result<(), FlatnessError> {
        let d = self.dim2m;
        self.assemble(t, x);
        out[..d].copy_from_slice(&self.values[self.pairs.len()..]);
        if !solve_in_place(&mut self.a, &mut out[..d], d) {
            return Err(FlatnessError::SingularField {
                t: t.approx(),
                point: x.iter().map(|v| v.approx()).collect(),
                rcond: 0.0,
            });
        }
        Ok(())
    }

    // Negated so that NaN counts as outside.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn check_box(&self, t: T, x: &[T]) -> Result<(), FlatnessError> {
        if x.iter().zip(&self.bound).any(|(v, b)| !(v.abs() <= *b)) {
            return Err(FlatnessError::LeftBox { t: t.approx(), point: x.iter().map(|v| v.approx()).collect() });
        }
        Ok(())
    }

    pub fn setup(&self) -> &MoserSetup {
        self.setup
    }
}

impl LeafField<'_, f64> {
    /// `X_t(x)` solving `ι_X ω̄_t = −θ` on the leaf, with its reciprocal
    /// condition number.
    pub fn eval(&mut self, t: f64, x: &[f64], out: &mut [f64]) -> Result<f64, FlatnessError> {
        let d = self.dim2m;
        self.assemble(t, x);
        let (sol, rcond) = solve_with_rcond(&self.a, d, &self.values[self.pairs.len()..]);
        if rcond < RCOND_MIN {
            return Err(FlatnessError::SingularField { t, point: x.to_vec(), rcond });
        }
        out[..d].copy_from_slice(&sol);
        Ok(rcond)
    }

    fn jacobian(&mut self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<(), FlatnessError> {
        let d = self.dim2m;
        self.xp[..d].copy_from_slice(x);
        for j in 0..d {
            self.xp[j] = x[j] + FD_STEP;
            let xp = std::mem::take(&mut self.xp);
            let mut plus = std::mem::take(&mut self.plus);
            let mut minus = std::mem::take(&mut self.minus);
            self.eval_plain(t, &xp, &mut plus)?;
            let mut xm = xp;
            xm[j] = x[j] - FD_STEP;
            self.eval_plain(t, &xm, &mut minus)?;
            xm[j] = x[j];
            for i in 0..d {
                dx[i * d + j] = (plus[i] - minus[i]) / (2.0 * FD_STEP);
            }
            self.xp = xm;
            self.plus = plus;
            self.minus = minus;
        }
        Ok(())
    }
}

/// `X_t` at a full point (relative to the centre); y-components are zero.
pub fn moser_field(setup: &MoserSetup, t: f64, point: &[f64]) -> Result<Vec<f64>, FlatnessError> {
    let mut leaf: LeafField = LeafField::new(setup, point);
    let x: Vec<f64> = setup.split.x().iter().map(|&i| point[i]).collect();
    let mut out = vec![0.0; x.len()];
    leaf.eval(t, &x, &mut out)?;
    let mut full = vec![0.0; point.len()];
    for (r, &i) in setup.split.x().iter().enumerate() {
        full[i] = out[r];
    }
    Ok(full)
}

/// Endpoint of the time-1 flow and its x-block Jacobian (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub endpoint: Vec<f64>,
    pub jacobian: Vec<f64>,
}

/// RK4 on `ż = X_t(z)`, `J̇ = DX_t(z)·J` from `t = 0` to `1`; `point` is
/// relative to the centre. The state carries the displacement `z − point`,
/// which keeps rounding proportional to the size of the flow.
pub fn integrate_flow(setup: &MoserSetup, point: &[f64], steps: usize) -> Result<FlowResult, FlatnessError> {
    let mut leaf: LeafField = LeafField::new(setup, point);
    let bound_leaf: LeafField = LeafField::new(setup, point);
    let x = setup.split.x();
    let d = x.len();
    let start: Vec<f64> = x.iter().map(|&i| point[i]).collect();
    let mut state = vec![0.0; d + d * d];
    for r in 0..d {
        state[d + r * d + r] = 1.0;
    }
    let mut dx = vec![0.0; d * d];
    let mut z = vec![0.0; d];
    let mut zb = vec![0.0; d];
    let end = rk4(
        &state,
        steps,
        |t, s, out| {
            for r in 0..d {
                z[r] = start[r] + s[r];
            }
            leaf.eval(t, &z, &mut out[..d])?;
            leaf.jacobian(t, &z, &mut dx)?;
            let j = &s[d..];
            for r in 0..d {
                for c in 0..d {
                    out[d + r * d + c] = (0..d).map(|q| dx[r * d + q] * j[q * d + c]).sum();
                }
            }
            Ok(())
        },
        |t, s| {
            for r in 0..d {
                zb[r] = start[r] + s[r];
            }
            bound_leaf.check_box(t, &zb)
        },
    )?;
    let mut endpoint = point.to_vec();
    for (r, &i) in x.iter().enumerate() {
        endpoint[i] = start[r] + end[r];
    }
    Ok(FlowResult { endpoint, jacobian: end[d..].to_vec() })
}

/// Displacement `φ_1(point) − point` on the x-block, without the variational
/// equation.
pub fn integrate_displacement(setup: &MoserSetup, point: &[f64], steps: usize) -> Result<Vec<f64>, FlatnessError> {
    integrate_displacement_in(setup, point, steps)
}

/// [`integrate_displacement`] in any [`Real`] type. The conditioned solve is
/// binary64 only, so singularity shows up here as an exact zero pivot.
pub fn integrate_displacement_in<T: Real>(setup: &MoserSetup, point: &[f64], steps: usize) -> Result<Vec<T>, FlatnessError> {
    let mut leaf: LeafField<T> = LeafField::new(setup, point);
    let bound_leaf: LeafField<T> = LeafField::new(setup, point);
    let x = setup.split.x();
    let d = x.len();
    let start: Vec<T> = x.iter().map(|&i| T::lift(point[i])).collect();
    let mut z = vec![T::zero(); d];
    let mut zb = vec![T::zero(); d];
    rk4(
        &vec![T::zero(); d],
        steps,
        |t, u, out| {
            for r in 0..d {
                z[r] = start[r] + u[r];
            }
            leaf.eval_plain(t, &z, out)
        },
        |t, u| {
            for r in 0..d {
                zb[r] = start[r] + u[r];
            }
            bound_leaf.check_box(t, &zb)
        },
    )
}

/// Endpoint only, without the variational equation.
pub fn integrate_endpoint(setup: &MoserSetup, point: &[f64], steps: usize) -> Result<Vec<f64>, FlatnessError> {
    let u = integrate_displacement(setup, point, steps)?;
    let mut endpoint = point.to_vec();
    for (r, &i) in setup.split.x().iter().enumerate() {
        endpoint[i] += u[r];
    }
    Ok(endpoint)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    /// Start point in the original coordinates.
    pub start: Vec<f64>,
    /// `φ_1(start)` in the original coordinates.
    pub end: Vec<f64>,
    /// x-block Jacobian of `φ_1`, row-major.
    pub jacobian: Vec<f64>,
    /// Largest absolute coefficient of `φ_1^*ω − ω_0` at this point.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxChart {
    pub points: Vec<ChartPoint>,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub steps: usize,
    pub samples_per_axis: usize,
    pub tol: f64,
    /// Verified at the grid samples, not globally.
    pub verified: bool,
    pub seconds: f64,
}

/// Pullback residual of one flow result against `ω_0`.
pub fn pullback_residual(setup: &MoserSetup, omega_coeffs: &PolySystem, blades: &[MultiIndex], flow: &FlowResult) -> f64 {
    let n = setup.split.dim();
    let x = setup.split.x();
    let d = x.len();
    let values = omega_coeffs.eval(&flow.endpoint);
    let terms: Vec<(MultiIndex, f64)> = blades.iter().copied().zip(values).collect();
    let mut jac = vec![0.0; n * n];
    for i in 0..n {
        jac[i * n + i] = 1.0;
    }
    for (r, &xr) in x.iter().enumerate() {
        for (c, &xc) in x.iter().enumerate() {
            jac[xr * n + xc] = flow.jacobian[r * d + c];
        }
    }
    let pulled = pullback_constant(&terms, setup.omega.degree(), &jac, n);
    pulled
        .into_iter()
        .map(|(mi, v)| (v - to_f64(&setup.omega_0.coefficient(mi).constant_term())).abs())
        .fold(0.0, f64::max)
}

pub fn darboux_verify(setup: &MoserSetup, samples_per_axis: usize, steps: usize, tol: f64) -> Result<DarbouxChart, FlatnessError> {
    let started = Instant::now();
    let blades: Vec<MultiIndex> = setup.omega.terms().map(|(mi, _)| mi).collect();
    let polys: Vec<Poly> = setup.omega.terms().map(|(_, p)| p.clone()).collect();
    let coeffs = PolySystem::compile_full(&polys);
    let grid = box_grid(&setup.half_width, samples_per_axis);
    let center: Vec<f64> = setup.center.iter().map(to_f64).collect();
    let points: Vec<ChartPoint> = grid
        .par_iter()
        .map(|rel| {
            let rel: Vec<f64> = rel.iter().map(to_f64).collect();
            let flow = integrate_flow(setup, &rel, steps)?;
            let residual = pullback_residual(setup, &coeffs, &blades, &flow);
            Ok(ChartPoint {
                start: rel.iter().zip(&center).map(|(a, b)| a + b).collect(),
                end: flow.endpoint.iter().zip(&center).map(|(a, b)| a + b).collect(),
                jacobian: flow.jacobian,
                residual,
            })
        })
        .collect::<Result<_, FlatnessError>>()?;
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    let mean_residual = points.iter().map(|p| p.residual).sum::<f64>() / points.len().max(1) as f64;
    Ok(DarbouxChart {
        verified: max_residual < tol,
        points,
        max_residual,
        mean_residual,
        steps,
        samples_per_axis,
        tol,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// For each entry of `steps`, the largest endpoint deviation
/// `max_p ‖φ^{steps}(p) − φ^{reference}(p)‖_∞` over the given relative points:
/// the part of the error owed to time stepping. All runs use double-double
/// arithmetic, so binary64 rounding (about 1e-17 on these flows) does not
/// mask the truncation error being measured.
pub fn integration_errors(setup: &MoserSetup, points: &[Vec<f64>], steps: &[usize], reference: usize) -> Result<Vec<f64>, FlatnessError> {
    let per_point: Vec<Vec<f64>> = points
        .par_iter()
        .map(|p| {
            let exact = integrate_displacement_in::<TwoFloat>(setup, p, reference)?;
            steps
                .iter()
                .map(|&s| {
                    let u = integrate_displacement_in::<TwoFloat>(setup, p, s)?;
                    Ok(u.iter().zip(&exact).map(|(a, b)| (*a - *b).abs().approx()).fold(0.0, f64::max))
                })
                .collect()
        })
        .collect::<Result<_, FlatnessError>>()?;
    Ok((0..steps.len()).map(|i| per_point.iter().map(|e| e[i]).fold(0.0, f64::max)).collect())
}

#[derive(Clone, Debug)]
pub struct FlattenParams {
    pub half_width: Rational,
    pub samples_per_axis: usize,
    pub steps: usize,
    pub tol: f64,
}

impl Default for FlattenParams {
    fn default() -> Self {
        FlattenParams { half_width: Rational::new(1.into(), 4.into()), samples_per_axis: 3, steps: 200, tol: 1e-8 }
    }
}

#[derive(Clone, Debug)]
pub struct FlattenReport {
    pub setup: MoserSetup,
    pub involutivity: InvolutivityReport,
    pub chart: DarbouxChart,
    /// Linear stage: a basis taking `ω_0` to the model form.
    pub normal_basis: NormalBasis,
}

/// Full pipeline: closedness, frame `{dy_j}`, involutivity, ω̄ extraction and
/// `F`-span check, Moser setup, grid verification, linear normal form.
pub fn flatten(
    omega: &PolyForm,
    split: &CoordinateSplit,
    center: &[Rational],
    params: &FlattenParams,
) -> Result<FlattenReport, FlatnessError> {
    let n = omega.dim();
    if split.dim() != n {
        return Err(FormError::InvalidSplit(format!("split covers {} coordinates, form has {n}", split.dim())).into());
    }
    let d_omega = omega.d();
    stage("closedness", if d_omega.is_zero() { Ok(()) } else { Err(FlatnessError::NotClosed { d_omega }) })?;
    let half_width = vec![params.half_width.clone(); n];
    let samples: Vec<Vec<Rational>> = box_grid(&half_width, params.samples_per_axis.min(2))
        .into_iter()
        .map(|p| p.iter().zip(center).map(|(a, b)| a + b).collect())
        .collect();
    let frame = FrameSpec::coordinate(split);
    let report = stage("frame", verify_frame(omega, &frame, &samples))?;
    if !report.members() {
        let residual = report.products.into_iter().find(|p| !p.is_zero()).expect("non-member");
        return Err(FlatnessError::Stage { stage: "frame", source: Box::new(FlatnessError::Rewedge { residual }) });
    }
    let involutivity = involutivity_check(&frame, n);
    stage("extract", extract_omega_bar(omega, split).map(|_| ()))?;
    stage("dy-span", check_dy_span(omega, split, &samples))?;
    let setup = stage("setup", moser_setup(omega, split, center, &half_width, params.samples_per_axis))?;
    let chart = stage("verify", darboux_verify(&setup, params.samples_per_axis, params.steps, params.tol))?;
    let origin = vec![Rational::zero(); n];
    let omega_0 = setup.omega_0.evaluate_at(&origin)?;
    let normal_basis = stage("linear", pointwise::linear_normal_basis(&omega_0).map_err(Into::into))?;
    Ok(FlattenReport { setup, involutivity, chart, normal_basis })
}

/// Lepage data at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct LepageSample {
    pub point: Vec<Rational>,
    pub injective: bool,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub m: usize,
    pub k: usize,
    /// ω̄ read off in the coframe `(dx, α)`, slots of y standing for α.
    pub omega_bar: PolyForm,
    /// `R(α_i)`: the (2,0) component of `dα_i`.
    pub r_components: Vec<PolyForm>,
    /// `R(α_i)∧ω̄`, zero for closed ω.
    pub r_wedge_omega_bar: Vec<PolyForm>,
    pub lepage: Vec<LepageSample>,
    /// Injectivity held at every sample, so `R(α_i)∧ω̄ = 0` forces `R(α_i) = 0`.
    pub concluded_r_zero: bool,
    /// Symbolic cross-check that every `R(α_i)` is identically zero.
    pub r_zero_symbolic: bool,
    pub involutivity: InvolutivityReport,
    /// For `m = 2`: a kernel basis of `∧ω̄(p)` on 2-forms of the x-block at the first sample.
    pub kernel_witness: Option<Vec<AltForm>>,
}

impl AuditReport {
    /// The argument applies and its conclusion agrees with the direct check.
    pub fn consistent(&self) -> bool {
        self.r_wedge_omega_bar.iter().all(PolyForm::is_zero)
            && (!self.concluded_r_zero || (self.r_zero_symbolic && self.involutivity.involutive))
    }
}

pub fn auto_involutivity_audit(
    omega: &PolyForm,
    frame: &FrameSpec,
    split: &CoordinateSplit,
    samples: &[Vec<Rational>],
) -> Result<AuditReport, FlatnessError> {
    let n = omega.dim();
    let k = split.y().len();
    let m = split.x().len() / 2;
    let buckets = frame_bidegree_decompose(frame, split, omega)?;
    if buckets.keys().any(|&b| b != (2, k)) {
        return Err(FlatnessError::FrameMismatch(format!(
            "ω has components of bidegree {:?} in the coframe (dx, α)",
            buckets.keys().filter(|&&b| b != (2, k)).collect::<Vec<_>>()
        )));
    }
    let rewritten = buckets.get(&(2, k)).cloned().unwrap_or_else(|| PolyForm::zero(n, omega.degree()));
    let omega_bar = extract_omega_bar(&rewritten, split)?;
    let mut r_components = Vec::new();
    for alpha in &frame.generators {
        let parts = frame_bidegree_decompose(frame, split, &alpha.d())?;
        r_components.push(parts.get(&(2, 0)).cloned().unwrap_or_else(|| PolyForm::zero(n, 2)));
    }
    let r_wedge_omega_bar: Vec<PolyForm> = r_components.iter().map(|r| r.wedge(&omega_bar)).collect();

    let x_basis: Vec<Vector> = split.x().iter().map(|&i| Vector::basis(n, i)).collect();
    let mut lepage = Vec::new();
    let mut kernel_witness = None;
    for p in samples {
        let b = omega_bar.evaluate_at(p)?.pullback(&x_basis).expect("x-block vectors");
        let (injective, kernel_dim) = if 2 + 2 <= b.dim() {
            lepage_injectivity(&b, 2)
        } else {
            (false, binomial(b.dim(), 2))
        };
        if m == 2 && kernel_witness.is_none() {
            kernel_witness = Some(lepage_kernel(&b, 2));
        }
        lepage.push(LepageSample { point: p.clone(), injective, kernel_dim });
    }
    let concluded_r_zero = m > 2
        && !lepage.is_empty()
        && lepage.iter().all(|s| s.injective)
        && r_wedge_omega_bar.iter().all(PolyForm::is_zero);
    let r_zero_symbolic = r_components.iter().all(PolyForm::is_zero);
    let involutivity = involutivity_check(frame, n);
    Ok(AuditReport {
        m,
        k,
        omega_bar,
        r_components,
        r_wedge_omega_bar,
        lepage,
        concluded_r_zero,
        r_zero_symbolic,
        involutivity,
        kernel_witness,
    })
}

/// Splits off as y-coordinates the pivot columns of `F(ω_p)`, scanning from
/// the last coordinate, so that `F` projects isomorphically onto the dy's.
pub fn suggest_split(omega: &PolyForm, point: &[Rational]) -> Result<Option<CoordinateSplit>, FlatnessError> {
    let n = omega.dim();
    let f = pointwise::f_space(&omega.evaluate_at(point)?);
    let rows: Vec<Vec<Rational>> = f.iter().map(|b| (0..n).rev().map(|i| b.coefficient(MultiIndex::single(i))).collect()).collect();
    let pivots = Matrix::from_rows(&rows, n).rref().pivots;
    let mut y: Vec<usize> = pivots.iter().map(|&c| n - 1 - c).collect();
    y.sort_unstable();
    let x: Vec<usize> = (0..n).filter(|i| !y.contains(i)).collect();
    if x.len() % 2 == 1 {
        return Ok(None);
    }
    Ok(Some(CoordinateSplit::new(x, y)?))
}

/// Polynomials of degree `≤ d` in `n` variables, as monomial forms.
fn monomials_up_to(n: usize, d: u32) -> Vec<Poly> {
    let mut out = vec![vec![0u32; n]];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for e in &frontier {
            let last = e.iter().rposition(|&v| v > 0).unwrap_or(0);
            for i in last..n {
                let mut f = e.clone();
                f[i] += 1;
                next.push(f);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter().map(|e| Poly::monomial(n, &e, Rational::one())).collect()
}

/// Frame `α_j = dy_j + Σ_i a_{ji} dx_i` with `α_j∧ω = 0`, searching the
/// coefficients `a_{ji}` among polynomials of degree `≤ max_degree`. The
/// linear system is solved exactly, lowest degree first.
pub fn find_frame(omega: &PolyForm, split: &CoordinateSplit, max_degree: u32) -> Option<FrameSpec> {
    let n = omega.dim();
    let mut generators = Vec::new();
    for &j in split.y() {
        let rhs_form = PolyForm::dx(n, j).wedge(omega).neg();
        let found = (0..=max_degree).find_map(|d| {
            let monomials = monomials_up_to(n, d);
            let mut columns = Vec::new();
            let mut unknowns = Vec::new();
            for &i in split.x() {
                let base = PolyForm::dx(n, i).wedge(omega);
                for mono in &monomials {
                    columns.push(base.mul_poly(mono));
                    unknowns.push((i, mono.clone()));
                }
            }
            let mut keys = std::collections::BTreeMap::new();
            for form in columns.iter().chain(std::iter::once(&rhs_form)) {
                for (mi, p) in form.terms() {
                    for (m, _) in p.terms() {
                        let len = keys.len();
                        keys.entry((mi, *m)).or_insert(len);
                    }
                }
            }
            let mut a = Matrix::zeros(keys.len(), columns.len());
            for (c, form) in columns.iter().enumerate() {
                for (mi, p) in form.terms() {
                    for (m, v) in p.terms() {
                        a[(keys[&(mi, *m)], c)] = v.clone();
                    }
                }
            }
            let mut b = vec![Rational::zero(); keys.len()];
            for (mi, p) in rhs_form.terms() {
                for (m, v) in p.terms() {
                    b[keys[&(mi, *m)]] = v.clone();
                }
            }
            let sol = a.solve(&b)?;
            let alpha = unknowns.iter().zip(&sol).fold(PolyForm::dx(n, j), |acc, ((i, mono), c)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&PolyForm::term(n, &[*i], mono.scale(c)))
                }
            });
            alpha.wedge(omega).is_zero().then_some(alpha)
        })?;
        generators.push(found);
    }
    Some(FrameSpec::new(generators))
}
