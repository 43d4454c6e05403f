//! Linear algebra of a single alternating form: non-degeneracy, the kernel
//! space `F(a) = {β ∈ V* : β∧a = 0}`, its annihilator `D(a)`, the dvs type and
//! an explicit basis putting `a` into the model shape.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{
    binomial, contraction_matrix, standard_dvs, standard_symplectic, wedge_kernel, wedge_matrix, AltForm,
    Matrix, Rational, Vector,
};

/// `(m, k)`: `m` symplectic pairs and a `k`-dimensional `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DvsType {
    pub m: usize,
    pub k: usize,
}

/// A basis `(e_1, …, e_{2m}, h_1, …, h_k)` together with the pullback of the
/// input along it, which equals the model form.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalBasis {
    pub dvs_type: DvsType,
    pub basis: Vec<Vector>,
    pub certificate: AltForm,
}

impl NormalBasis {
    /// The basis as the columns of a matrix.
    pub fn matrix(&self) -> Matrix {
        let n = self.basis.len();
        let cols: Vec<Vec<Rational>> = self.basis.iter().map(|v| v.0.clone()).collect();
        Matrix::from_columns(&cols, n)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointwiseError {
    #[error("form is degenerate: ι_v a = 0 for v = {kernel:?}")]
    Degenerate { kernel: Vector },
    #[error("form of degree {degree} has dim F = {f_dim}; a dvs form needs degree = dim F + 2")]
    DegreeMismatch { degree: usize, f_dim: usize },
    #[error("dim D = {d_dim} is odd")]
    OddSymplecticPart { d_dim: usize },
    #[error("re-wedge check failed: ω̄∧f_1∧…∧f_k − a = {residual:?}")]
    Rewedge { residual: AltForm },
    #[error("2-form is degenerate on the subspace; kernel vector {kernel:?}")]
    DegenerateTwoForm { kernel: Vector },
    #[error("expected a 2-form, found degree {0}")]
    NotTwoForm(usize),
    #[error("normal-form certificate differs from the model: {certificate:?}")]
    Certificate { certificate: AltForm },
}

/// A nonzero `v` with `ι_v a = 0`, if there is one.
pub fn contraction_kernel(a: &AltForm) -> Option<Vector> {
    contraction_matrix(a).left_nullspace().into_iter().next().map(Vector)
}

/// True iff `v ↦ ι_v a` is injective.
pub fn is_nondegenerate(a: &AltForm) -> bool {
    contraction_matrix(a).rank() == a.dim()
}

/// Basis of `F(a)` as 1-forms.
pub fn f_space(a: &AltForm) -> Vec<AltForm> {
    wedge_kernel(a, 1)
}

fn f_matrix(f: &[AltForm], n: usize) -> Matrix {
    let rows: Vec<Vec<Rational>> = f.iter().map(AltForm::to_dense).collect();
    Matrix::from_rows(&rows, n)
}

/// Basis of the annihilator `D(a)` of `F(a)`.
pub fn d_space(a: &AltForm) -> Vec<Vector> {
    let n = a.dim();
    let f = f_space(a);
    if f.is_empty() {
        return (0..n).map(|i| Vector::basis(n, i)).collect();
    }
    f_matrix(&f, n).nullspace().into_iter().map(Vector).collect()
}

/// Full diagnosis of membership in the dvs orbit.
pub fn classify(a: &AltForm) -> Result<DvsType, PointwiseError> {
    linear_normal_basis(a).map(|nb| nb.dvs_type)
}

/// `(m, k)` when `a` is linearly equivalent to the model form. Non-zero
/// top-degree forms on a space of dimension `n ≥ 2` are reported as `(1, n - 2)`
/// even though their `F` is all of `V*`.
pub fn dvs_type(a: &AltForm) -> Option<DvsType> {
    classify(a).ok()
}

/// Symplectic Gram–Schmidt on the whole space of `b`. Returns
/// `(u_1, v_1, …, u_m, v_m)` with `b = Σ u_i*∧v_i*` in that basis.
pub fn symplectic_basis(b: &AltForm) -> Result<Vec<Vector>, PointwiseError> {
    if b.degree() != 2 {
        return Err(PointwiseError::NotTwoForm(b.degree()));
    }
    let n = b.dim();
    let pair = |u: &Vector, w: &Vector| b.evaluate(&[u.clone(), w.clone()]).expect("2 vectors");
    let mut work: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    let mut out = Vec::with_capacity(n);
    while !work.is_empty() {
        let found = (0..work.len()).find_map(|i| {
            (0..work.len()).find_map(|j| {
                let c = pair(&work[i], &work[j]);
                (!c.is_zero()).then_some((i, j, c))
            })
        });
        let Some((i, j, c)) = found else {
            return Err(PointwiseError::DegenerateTwoForm { kernel: work[0].clone() });
        };
        let u = work[i].clone();
        let v = work[j].scale(&(Rational::one() / c));
        let rest: Vec<Vector> = work
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != i && r != j)
            .map(|(_, w)| {
                let bwv = pair(w, &v);
                let bwu = pair(w, &u);
                w.add_scaled(&-bwv, &u).add_scaled(&bwu, &v)
            })
            .collect();
        out.push(u);
        out.push(v);
        work = rest;
    }
    Ok(out)
}

/// Construct a basis in which `a` becomes the model form, with the pullback
/// attached as certificate.
pub fn linear_normal_basis(a: &AltForm) -> Result<NormalBasis, PointwiseError> {
    let n = a.dim();
    if let Some(kernel) = contraction_kernel(a) {
        return Err(PointwiseError::Degenerate { kernel });
    }
    if a.degree() == n && n >= 2 {
        return volume_normal_basis(a);
    }
    let f = f_space(a);
    let k = f.len();
    if a.degree() != k + 2 {
        return Err(PointwiseError::DegreeMismatch { degree: a.degree(), f_dim: k });
    }
    if !(n - k).is_multiple_of(2) {
        return Err(PointwiseError::OddSymplecticPart { d_dim: n - k });
    }
    let m = (n - k) / 2;

    // h_j with f_i(h_j) = δ_ij, supported on the pivot columns of F.
    let fm = f_matrix(&f, n);
    let pivots = fm.rref().pivots;
    let mut block = Matrix::zeros(k, k);
    for i in 0..k {
        for (r, &col) in pivots.iter().enumerate() {
            block[(i, r)] = fm[(i, col)].clone();
        }
    }
    let inv = block.inverse().expect("F rows are independent");
    let h: Vec<Vector> = (0..k)
        .map(|j| {
            let mut v = Vector::zeros(n);
            for (r, &col) in pivots.iter().enumerate() {
                v.0[col] = inv[(r, j)].clone();
            }
            v
        })
        .collect();

    let mut omega_bar = a.clone();
    for hj in &h {
        omega_bar = omega_bar.interior(hj).expect("dimensions agree");
    }
    let mut rewedged = omega_bar.clone();
    for fi in &f {
        rewedged = rewedged.wedge(fi).expect("dimensions agree");
    }
    let residual = rewedged.sub(a).expect("same shape");
    if !residual.is_zero() {
        return Err(PointwiseError::Rewedge { residual });
    }

    let d: Vec<Vector> = if k == 0 {
        (0..n).map(|i| Vector::basis(n, i)).collect()
    } else {
        fm.nullspace().into_iter().map(Vector).collect()
    };
    let restricted = omega_bar.pullback(&d).expect("vectors in V");
    let sb = symplectic_basis(&restricted).map_err(|e| match e {
        PointwiseError::DegenerateTwoForm { kernel } => {
            // Report the kernel vector in the ambient space.
            let mut v = Vector::zeros(n);
            for (r, dr) in d.iter().enumerate() {
                v = v.add_scaled(&kernel.0[r], dr);
            }
            PointwiseError::DegenerateTwoForm { kernel: v }
        }
        other => other,
    })?;
    let mut basis: Vec<Vector> = sb
        .iter()
        .map(|u| {
            let mut v = Vector::zeros(n);
            for (r, dr) in d.iter().enumerate() {
                if !u.0[r].is_zero() {
                    v = v.add_scaled(&u.0[r], dr);
                }
            }
            v
        })
        .collect();
    basis.extend(h);

    let certificate = a.pullback(&basis).expect("n vectors");
    if certificate != standard_dvs(m, k) {
        return Err(PointwiseError::Certificate { certificate });
    }
    Ok(NormalBasis { dvs_type: DvsType { m, k }, basis, certificate })
}

// With m = 1 the model form is a volume form and F is all of V*, so the
// F-based construction does not apply; rescaling one basis vector suffices.
fn volume_normal_basis(a: &AltForm) -> Result<NormalBasis, PointwiseError> {
    let n = a.dim();
    let c = a.terms().next().map(|(_, c)| c.clone()).expect("non-degenerate");
    let mut basis: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    basis[0] = basis[0].scale(&(Rational::one() / c));
    let certificate = a.pullback(&basis).expect("n vectors");
    let (m, k) = (1, n - 2);
    if certificate != standard_dvs(m, k) {
        return Err(PointwiseError::Certificate { certificate });
    }
    Ok(NormalBasis { dvs_type: DvsType { m, k }, basis, certificate })
}

/// Kernel dimension of `β ↦ β∧b` on `Λ^l`, and whether it is trivial.
pub fn lepage_injectivity(b: &AltForm, l: usize) -> (bool, usize) {
    let kernel = binomial(b.dim(), l) - wedge_matrix(b, l).rank();
    (kernel == 0, kernel)
}

/// A basis of that kernel, as witnesses.
pub fn lepage_kernel(b: &AltForm, l: usize) -> Vec<AltForm> {
    wedge_kernel(b, l)
}

/// Lepage table for the standard symplectic form on `Q^{2m}`.
pub fn lepage_standard(m: usize, l: usize) -> (bool, usize) {
    lepage_injectivity(&standard_symplectic(m), l)
}
