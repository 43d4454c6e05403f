//! Floating-point kernels for the flow stage: compiled polynomial
//! evaluation, small dense solves with a condition estimate, classical RK4
//! and the pullback of a constant form through a Jacobian. Evaluation, the
//! plain solve and RK4 are generic over [`Real`], so the same code runs in
//! binary64 and in double-double.

use num_traits::{Float, ToPrimitive};
pub use twofloat::TwoFloat;

use crate::exterior::{blades, MultiIndex, Rational};
use crate::poly::Poly;
use crate::polyform::{PolyForm, PolyVectorField};

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Scalar types the flow kernels run in.
pub trait Real: Float + std::ops::AddAssign + std::ops::SubAssign + std::ops::MulAssign + Send + Sync + std::fmt::Debug {
    fn lift(x: f64) -> Self;
    /// Nearest value to an exact rational.
    fn from_rational(r: &Rational) -> Self;
    fn approx(self) -> f64;
    /// Correctly rounded quotient; generic code divides only through this.
    fn quot(self, other: Self) -> Self;
}

impl Real for f64 {
    fn lift(x: f64) -> Self {
        x
    }

    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn approx(self) -> f64 {
        self
    }

    fn quot(self, other: Self) -> Self {
        self / other
    }
}

impl Real for TwoFloat {
    fn lift(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn from_rational(r: &Rational) -> Self {
        let hi = to_f64(r);
        match Rational::from_float(hi) {
            Some(h) => TwoFloat::new_add(hi, to_f64(&(r - h))),
            None => TwoFloat::from(hi),
        }
    }

    fn approx(self) -> f64 {
        self.hi() + self.lo()
    }

    // The crate's own quotient carries only binary64 accuracy; one Newton
    // correction restores the full width.
    fn quot(self, other: Self) -> Self {
        let q = self / other;
        q + (self - q * other) / other
    }
}

/// A family of polynomials compiled for repeated evaluation in a subset of
/// their variables, the remaining ones frozen at fixed values.
#[derive(Clone, Debug)]
pub struct PolySystem<T = f64> {
    free: usize,
    max_exp: usize,
    offsets: Vec<u32>,
    coeffs: Vec<T>,
    starts: Vec<u32>,
    factors: Vec<u16>,
}

impl<T: Real> PolySystem<T> {
    /// `free[r]` is the original variable that becomes local variable `r`;
    /// every other variable `i` is frozen to `point[i]`.
    pub fn compile(polys: &[Poly], free: &[usize], point: &[f64]) -> Self {
        let max_exp = polys
            .iter()
            .flat_map(|p| p.terms().map(|(m, _)| free.iter().map(|&i| m.exponent(i)).max().unwrap_or(0)))
            .max()
            .unwrap_or(0) as usize;
        let mut sys = PolySystem {
            free: free.len(),
            max_exp,
            offsets: vec![0],
            coeffs: Vec::new(),
            starts: vec![0],
            factors: Vec::new(),
        };
        let width = max_exp + 1;
        for p in polys {
            // Collapse monomials that agree on the free variables.
            let mut collapsed: Vec<(Vec<u32>, T)> = Vec::new();
            for (m, c) in p.terms() {
                let mut value = T::from_rational(c);
                for (i, &xi) in point.iter().enumerate() {
                    if free.contains(&i) {
                        continue;
                    }
                    for _ in 0..m.exponent(i) {
                        value *= T::lift(xi);
                    }
                }
                let key: Vec<u32> = free.iter().map(|&i| m.exponent(i)).collect();
                match collapsed.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, v)) => *v += value,
                    None => collapsed.push((key, value)),
                }
            }
            for (key, value) in collapsed {
                if value.is_zero() {
                    continue;
                }
                sys.coeffs.push(value);
                for (r, &e) in key.iter().enumerate() {
                    if e > 0 {
                        sys.factors.push((r * width + e as usize) as u16);
                    }
                }
                sys.starts.push(sys.factors.len() as u32);
            }
            sys.offsets.push(sys.coeffs.len() as u32);
        }
        sys
    }

    /// Compile in all variables.
    pub fn compile_full(polys: &[Poly]) -> Self {
        let n = polys.first().map_or(0, Poly::nvars);
        let free: Vec<usize> = (0..n).collect();
        Self::compile(polys, &free, &vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Scratch buffer size needed by [`PolySystem::eval_into`].
    pub fn scratch_len(&self) -> usize {
        self.free * (self.max_exp + 1)
    }

    pub fn eval_into(&self, x: &[T], out: &mut [T], scratch: &mut [T]) {
        let width = self.max_exp + 1;
        for (r, &xr) in x.iter().enumerate().take(self.free) {
            let row = &mut scratch[r * width..(r + 1) * width];
            row[0] = T::one();
            for e in 1..width {
                row[e] = row[e - 1] * xr;
            }
        }
        for (q, slot) in out.iter_mut().enumerate().take(self.len()) {
            let mut acc = T::zero();
            for t in self.offsets[q] as usize..self.offsets[q + 1] as usize {
                let mut v = self.coeffs[t];
                for &f in &self.factors[self.starts[t] as usize..self.starts[t + 1] as usize] {
                    v *= scratch[f as usize];
                }
                acc += v;
            }
            *slot = acc;
        }
    }

    pub fn eval(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        let mut scratch = vec![T::zero(); self.scratch_len()];
        self.eval_into(x, &mut out, &mut scratch);
        out
    }
}

/// Inverse of a row-major `n × n` matrix by Gauss–Jordan with partial
/// pivoting, or `None` if a pivot vanishes.
pub fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| m[r * n + col].abs().total_cmp(&m[s * n + col].abs()))?;
        if m[piv * n + col] == 0.0 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let d = 1.0 / m[col * n + col];
        for c in 0..n {
            m[col * n + c] *= d;
            inv[col * n + c] *= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..n {
                m[r * n + c] -= f * m[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    Some(inv)
}

/// Solves `a·x = b` in place (Gaussian elimination with partial pivoting);
/// `a` is destroyed and `b` receives the solution. False if `a` is singular.
pub fn solve_in_place<T: Real>(a: &mut [T], b: &mut [T], n: usize) -> bool {
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].is_zero() {
            return false;
        }
        if piv != col {
            for c in col..n {
                a.swap(piv * n + c, col * n + c);
            }
            b.swap(piv, col);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col].quot(p);
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let v = f * a[col * n + c];
                a[r * n + c] -= v;
            }
            let v = f * b[col];
            b[r] -= v;
        }
    }
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r * n + c] * b[c];
        }
        b[r] = acc.quot(a[r * n + r]);
    }
    true
}

/// Maximum absolute column sum.
pub fn norm1(a: &[f64], n: usize) -> f64 {
    (0..n).map(|c| (0..n).map(|r| a[r * n + c].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `a·x = b` and reports the reciprocal 1-norm condition number
/// `1 / (‖a‖₁ ‖a⁻¹‖₁)`; zero when `a` is exactly singular.
pub fn solve_with_rcond(a: &[f64], n: usize, b: &[f64]) -> (Vec<f64>, f64) {
    if n == 0 {
        return (Vec::new(), 1.0);
    }
    match invert(a, n) {
        None => (vec![f64::NAN; n], 0.0),
        Some(inv) => {
            let rcond = 1.0 / (norm1(a, n) * norm1(&inv, n));
            let x = (0..n).map(|r| (0..n).map(|c| inv[r * n + c] * b[c]).sum()).collect();
            (x, if rcond.is_finite() { rcond } else { 0.0 })
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| m[r * n + col].abs().total_cmp(&m[s * n + col].abs()))
            .expect("non-empty range");
        if m[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
            }
            d = -d;
        }
        let p = m[col * n + col];
        d *= p;
        for r in col + 1..n {
            let f = m[r * n + col] / p;
            for c in col..n {
                m[r * n + c] -= f * m[col * n + c];
            }
        }
    }
    d
}

/// Scratch space and compensation terms for [`rk4`].
struct Rk4Work<T> {
    k: [Vec<T>; 4],
    tmp: Vec<T>,
    carry: Vec<T>,
}

/// One classical RK4 step of `ẏ = f(t, y)`. The update of `y` is
/// compensated (Kahan), which keeps the accumulated rounding of long runs
/// well below the truncation error.
fn rk4_step<T: Real, E>(
    f: &mut impl FnMut(T, &[T], &mut [T]) -> Result<(), E>,
    t: T,
    y: &mut [T],
    h: T,
    w: &mut Rk4Work<T>,
) -> Result<(), E> {
    let n = y.len();
    let half = T::lift(0.5) * h;
    let two = T::lift(2.0);
    let sixth = h.quot(T::lift(6.0));
    let [k1, k2, k3, k4] = &mut w.k;
    f(t, y, k1)?;
    for i in 0..n {
        w.tmp[i] = y[i] + half * k1[i];
    }
    f(t + half, &w.tmp, k2)?;
    for i in 0..n {
        w.tmp[i] = y[i] + half * k2[i];
    }
    f(t + half, &w.tmp, k3)?;
    for i in 0..n {
        w.tmp[i] = y[i] + h * k3[i];
    }
    f(t + h, &w.tmp, k4)?;
    for i in 0..n {
        let incr = sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]) - w.carry[i];
        let sum = y[i] + incr;
        w.carry[i] = (sum - y[i]) - incr;
        y[i] = sum;
    }
    Ok(())
}

/// Fixed-step RK4 from `t = 0` to `t = 1`; `after_step(t, y)` runs after
/// every step and may abort.
pub fn rk4<T: Real, E>(
    y0: &[T],
    steps: usize,
    mut f: impl FnMut(T, &[T], &mut [T]) -> Result<(), E>,
    mut after_step: impl FnMut(T, &[T]) -> Result<(), E>,
) -> Result<Vec<T>, E> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let zero = vec![T::zero(); n];
    let mut w = Rk4Work { k: [zero.clone(), zero.clone(), zero.clone(), zero.clone()], tmp: zero.clone(), carry: zero };
    let h = T::one().quot(T::lift(steps as f64));
    for s in 0..steps {
        let t = T::lift(s as f64) * h;
        rk4_step(&mut f, t, &mut y, h, &mut w)?;
        after_step(t + h, &y)?;
    }
    Ok(y)
}

/// Pullback of the constant form `Σ c_K dz_K` along a linear map with
/// row-major Jacobian `jac[r·n + c] = ∂z_r/∂w_c`; the coefficient on `dw_I`
/// is `Σ_K c_K det(jac[K, I])`.
pub fn pullback_constant(terms: &[(MultiIndex, f64)], degree: usize, jac: &[f64], n: usize) -> Vec<(MultiIndex, f64)> {
    let mut sub = vec![0.0; degree * degree];
    blades(n, degree)
        .into_iter()
        .map(|target| {
            let cols = target.to_vec();
            let mut acc = 0.0;
            for (source, c) in terms {
                if *c == 0.0 {
                    continue;
                }
                for (a, r) in source.indices().enumerate() {
                    for (b, &col) in cols.iter().enumerate() {
                        sub[a * degree + b] = jac[r * n + col];
                    }
                }
                acc += c * det(&sub, degree);
            }
            (target, acc)
        })
        .collect()
}

/// Central difference quotient `(ψ_ε^*η − ψ_{−ε}^*η)(p) / 2ε` with
/// `ψ_ε = id + εV`. It agrees with `L_Vη(p)` up to `O(ε²)`.
pub fn lie_derivative_fd(eta: &PolyForm, v: &PolyVectorField, point: &[f64], eps: f64) -> Vec<(MultiIndex, f64)> {
    let n = eta.dim();
    let vp: Vec<f64> = v.components.iter().map(|c| c.eval_f64(point)).collect();
    let dv: Vec<f64> = v.components.iter().flat_map(|c| (0..n).map(|j| c.partial(j).eval_f64(point))).collect();
    let pulled = |s: f64| {
        let moved: Vec<f64> = point.iter().zip(&vp).map(|(p, v)| p + s * v).collect();
        let terms = eta.evaluate_f64(&moved).expect("point has the form's dimension");
        let jac: Vec<f64> = (0..n * n).map(|rc| if rc / n == rc % n { 1.0 } else { 0.0 } + s * dv[rc]).collect();
        pullback_constant(&terms, eta.degree(), &jac, n)
    };
    let plus = pulled(eps);
    let minus = pulled(-eps);
    plus.into_iter().zip(minus).map(|((mi, a), (_, b))| (mi, (a - b) / (2.0 * eps))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{rational, ratio};

    #[test]
    fn compiled_polynomials_match_exact_evaluation() {
        let n = 3;
        let p = &(&Poly::var(n, 0) * &Poly::var(n, 1)).scale(&ratio(3, 2)) + &Poly::var(n, 2);
        let q = &(&Poly::var(n, 2) * &Poly::var(n, 2)) - &Poly::constant(n, rational(1));
        let sys: PolySystem = PolySystem::compile_full(&[p.clone(), q.clone()]);
        let x = [0.5, -2.0, 0.25];
        let out = sys.eval(&x);
        assert!((out[0] - p.eval_f64(&x)).abs() < 1e-15);
        assert!((out[1] - q.eval_f64(&x)).abs() < 1e-15);

        // freeze x3 = 0.25 and evaluate in (x1, x2)
        let sys: PolySystem = PolySystem::compile(&[p.clone(), q.clone()], &[0, 1], &x);
        let out = sys.eval(&x[..2]);
        assert!((out[0] - p.eval_f64(&x)).abs() < 1e-15);
        assert!((out[1] - q.eval_f64(&x)).abs() < 1e-15);
    }

    #[test]
    fn solver_and_condition() {
        let a = [0.0, 2.0, -2.0, 0.0];
        let (x, rcond) = solve_with_rcond(&a, 2, &[4.0, 6.0]);
        assert!((x[0] + 3.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!((rcond - 1.0).abs() < 1e-15);
        let (_, rcond) = solve_with_rcond(&[1.0, 1.0, 1.0, 1.0], 2, &[1.0, 1.0]);
        assert_eq!(rcond, 0.0);
        let mut a = [0.0, 2.0, -2.0, 0.0];
        let mut b = [4.0, 6.0];
        assert!(solve_in_place(&mut a, &mut b, 2));
        assert_eq!(b, [-3.0, 2.0]);
        assert!((det(&[1.0, 2.0, 3.0, 4.0], 2) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn rk4_on_exponential() {
        let c = 0.7;
        let run = |steps| {
            rk4(&[1.0], steps, |_, y, out: &mut [f64]| -> Result<(), ()> {
                out[0] = c * y[0];
                Ok(())
            }, |_, _| Ok(()))
            .unwrap()[0]
        };
        let e100 = (run(100) - c.exp()).abs();
        let e200 = (run(200) - c.exp()).abs();
        let ratio = e100 / e200;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn double_double_evaluation_and_rk4() {
        let n = 1;
        let third = Poly::constant(n, ratio(1, 3));
        let sys: PolySystem<TwoFloat> = PolySystem::compile_full(&[&third * &Poly::var(n, 0)]);
        let v = sys.eval(&[TwoFloat::from(3.0)])[0];
        let tenth = TwoFloat::from(1.0).quot(TwoFloat::from(10.0));
        assert!((tenth * TwoFloat::from(10.0) - TwoFloat::from(1.0)).abs() < TwoFloat::from(1e-30));
        assert!((v - TwoFloat::from(1.0)).abs() < TwoFloat::from(1e-30));

        // RK4 on y' = y: the error ratio under step doubling stays near 16 past
        // the binary64 floor.
        let run = |steps| {
            rk4(&[TwoFloat::from(1.0)], steps, |_, y, out: &mut [TwoFloat]| -> Result<(), ()> {
                out[0] = y[0];
                Ok(())
            }, |_, _| Ok(()))
            .unwrap()[0]
        };
        let reference = run(64000);
        let e4000 = (run(4000) - reference).abs();
        let e8000 = (run(8000) - reference).abs();
        let ratio = e4000.quot(e8000).approx();
        assert!(e8000.approx() < 1e-17 && (14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn pullback_of_area_form() {
        // dz1∧dz2 through diag(2, 3) → 6 dw1∧dw2
        let terms = [(MultiIndex::new(&[0, 1]).unwrap(), 1.0)];
        let out = pullback_constant(&terms, 2, &[2.0, 0.0, 0.0, 3.0], 2);
        assert_eq!(out, vec![(MultiIndex::new(&[0, 1]).unwrap(), 6.0)]);
    }
}
