//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exterior::{Rational, MAX_DIM};

/// Largest total degree accepted from callers.
pub const DEGREE_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} variables exceed the cap of {MAX_DIM}")]
    TooManyVariables(usize),
    #[error("total degree {0} exceeds the cap of {DEGREE_CAP}")]
    DegreeTooLarge(u32),
    #[error("exponent vector of length {found} for a polynomial in {expected} variables")]
    ExponentLength { expected: usize, found: usize },
}

/// Exponent vector. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; MAX_DIM]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_DIM]);

    pub fn new(exponents: &[u32]) -> Self {
        assert!(exponents.len() <= MAX_DIM);
        let mut e = [0u8; MAX_DIM];
        for (slot, &x) in e.iter_mut().zip(exponents) {
            *slot = u8::try_from(x).expect("exponent fits in u8");
        }
        Monomial(e)
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u8; MAX_DIM];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.0[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Total degree in the variables selected by `mask` (bit `i` = variable `i`).
    pub fn degree_in(&self, mask: u16) -> u32 {
        (0..MAX_DIM).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i] as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("exponent overflow");
        }
        Monomial(e)
    }

    /// Divides by `x_i`, returning the old exponent, or `None` if absent.
    pub fn lower(&self, i: usize) -> Option<(Monomial, u32)> {
        let e = self.0[i];
        if e == 0 {
            return None;
        }
        let mut out = self.0;
        out[i] -= 1;
        Some((Monomial(out), e as u32))
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; MAX_DIM]
    }
}

// Graded order: total degree first, then higher powers of earlier variables first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_DIM, "too many variables");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(i), Rational::one());
        p
    }

    pub fn monomial(nvars: usize, exponents: &[u32], c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exponents), c);
        p
    }

    /// Checked constructor for caller-supplied data.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, PolyError> {
        if nvars > MAX_DIM {
            return Err(PolyError::TooManyVariables(nvars));
        }
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::ExponentLength { expected: nvars, found: exps.len() });
            }
            let deg: u32 = exps.iter().sum();
            if deg > DEGREE_CAP || exps.iter().any(|&e| e > u8::MAX as u32) {
                return Err(PolyError::DegreeTooLarge(deg));
            }
            p.add_term(Monomial::new(&exps), c);
        }
        Ok(p)
    }

    pub fn check_degree_cap(&self) -> Result<(), PolyError> {
        match self.degree() {
            Some(d) if d > DEGREE_CAP => Err(PolyError::DegreeTooLarge(d)),
            _ => Ok(()),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((lowered, e)) = m.lower(i) {
                out.add_term(lowered, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Applies `f` to every term, collecting the results.
    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &Rational) -> Option<(Monomial, Rational)>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, x) in point.iter().enumerate() {
                    let e = m.exponent(i);
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes `x_i ↦ images[i]`. All images must share one variable count.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(self.nvars, Poly::nvars);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &images[i];
                    pw.push(next);
                }
                if e > 0 {
                    t = &t * &pw[e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// `p(x + shift)`.
    pub fn translate(&self, shift: &[Rational]) -> Poly {
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, shift[i].clone()))
            .collect();
        self.compose(&images)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(Signed::abs).max().unwrap_or_else(Rational::zero)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> DisplayPoly<'a> {
        DisplayPoly { poly: self, names }
    }
}

pub struct DisplayPoly<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

pub(crate) fn monomial_name(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for i in 0..MAX_DIM {
        let e = m.exponent(i);
        if e == 0 {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    parts.join("*")
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let name = monomial_name(m, self.names);
            match (m.is_one(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "{mag}*{name}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let body = self.display_with(&names).to_string();
        write!(f, "Poly({body})")
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{rational, ratio};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let prod = &a * &b;
        let expect = &(&x(2, 0) * &x(2, 0)) - &(&x(2, 1) * &x(2, 1));
        assert_eq!(prod, expect);
        assert!((&prod - &expect).is_zero());
    }

    #[test]
    fn partial_derivatives() {
        // p = 3 x^2 y + y
        let p = Poly::from_terms(2, [(vec![2, 1], rational(3)), (vec![0, 1], rational(1))]).unwrap();
        assert_eq!(p.partial(0), Poly::monomial(2, &[1, 1], rational(6)));
        assert_eq!(p.partial(1), &Poly::monomial(2, &[2, 0], rational(3)) + &Poly::one(2));
    }

    #[test]
    fn evaluation_exact_and_float() {
        let p = Poly::from_terms(2, [(vec![2, 1], ratio(1, 2)), (vec![0, 0], rational(-1))]).unwrap();
        let v = p.eval(&[rational(2), ratio(1, 3)]);
        assert_eq!(v, ratio(2, 3) - rational(1));
        assert!((p.eval_f64(&[2.0, 1.0 / 3.0]) - (-1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn translate_matches_evaluation() {
        let p = Poly::from_terms(2, [(vec![3, 0], rational(1)), (vec![1, 2], ratio(-2, 5))]).unwrap();
        let shift = [ratio(1, 2), rational(-3)];
        let t = p.translate(&shift);
        let pt = [ratio(7, 3), ratio(-1, 4)];
        let moved: Vec<Rational> = pt.iter().zip(&shift).map(|(a, b)| a + b).collect();
        assert_eq!(t.eval(&pt), p.eval(&moved));
    }

    #[test]
    fn caps_are_enforced() {
        assert_eq!(
            Poly::from_terms(1, [(vec![9], rational(1))]),
            Err(PolyError::DegreeTooLarge(9))
        );
        assert!(matches!(
            Poly::from_terms(2, [(vec![1], rational(1))]),
            Err(PolyError::ExponentLength { .. })
        ));
        assert!(matches!(Poly::from_terms(13, []), Err(PolyError::TooManyVariables(13))));
    }

    #[test]
    fn graded_order() {
        let a = Monomial::new(&[0, 1]);
        let b = Monomial::new(&[1, 0]);
        let c = Monomial::new(&[0, 0]);
        let d = Monomial::new(&[1, 1]);
        let mut v = vec![d, a, c, b];
        v.sort();
        assert_eq!(v, vec![c, b, a, d]);
    }
}
