//! Seeded random instances: rational points, sparse forms and polynomials,
//! basis changes, and the families used by the randomized checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use num_traits::Zero;

use crate::exterior::{blades, rational, standard_symplectic, AltForm, Matrix, Rational, Vector};
use crate::poly::{Monomial, Poly};
use crate::polyform::{CoordinateSplit, FrameSpec, PolyForm, PolyVectorField};
use crate::symmetry::SymmetryGenerator;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ num`, `1 ≤ q ≤ den`.
pub fn rational_in(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num).into(), rng.gen_range(1..=den).into())
}

pub fn integer_in(rng: &mut impl Rng, bound: i64) -> Rational {
    rational(rng.gen_range(-bound..=bound))
}

/// A point with coordinates `p/q`, `q ≤ 16`, inside `[−1/4, 1/4]`.
pub fn box_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let q: i64 = rng.gen_range(1..=16);
            Rational::new(rng.gen_range(-(q / 4)..=q / 4).into(), q.into())
        })
        .collect()
}

pub fn box_points(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Vec<Rational>> {
    (0..count).map(|_| box_point(rng, n)).collect()
}

/// Exponents of total degree `≤ max_degree` spread over the variables in `vars`.
pub fn monomial_in(rng: &mut impl Rng, n: usize, vars: &[usize], max_degree: u32) -> Monomial {
    let mut e = vec![0u32; n];
    if !vars.is_empty() {
        for _ in 0..rng.gen_range(0..=max_degree) {
            e[vars[rng.gen_range(0..vars.len())]] += 1;
        }
    }
    Monomial::new(&e)
}

/// Sum of `terms` monomials in `vars` with integer coefficients in `[−c, c]`.
pub fn poly_in(rng: &mut impl Rng, n: usize, vars: &[usize], terms: usize, max_degree: u32, c: i64) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        p.add_term(monomial_in(rng, n, vars, max_degree), integer_in(rng, c));
    }
    p
}

pub fn poly(rng: &mut impl Rng, n: usize, terms: usize, max_degree: u32) -> Poly {
    let vars: Vec<usize> = (0..n).collect();
    poly_in(rng, n, &vars, terms, max_degree, 3)
}

/// A sparse constant form with up to `terms` blades.
pub fn alt_form(rng: &mut impl Rng, n: usize, p: usize, terms: usize) -> AltForm {
    let all = blades(n, p);
    let chosen = (0..terms).map(|_| (all[rng.gen_range(0..all.len())], rational_in(rng, 5, 4)));
    let mut out = AltForm::zero(n, p).expect("small dims");
    for (mi, c) in chosen {
        out = out.add(&AltForm::from_terms(n, p, [(mi, c)]).expect("valid blade")).expect("same shape");
    }
    out
}

/// A sparse polynomial form with up to `terms` blades.
pub fn poly_form(rng: &mut impl Rng, n: usize, p: usize, terms: usize, max_degree: u32) -> PolyForm {
    let all = blades(n, p);
    (0..terms).fold(PolyForm::zero(n, p), |acc, _| {
        let mi = all[rng.gen_range(0..all.len())];
        acc.add(&PolyForm::term(n, &mi.to_vec(), poly(rng, n, 2, max_degree)))
    })
}

pub fn vector_field(rng: &mut impl Rng, n: usize, max_degree: u32) -> PolyVectorField {
    PolyVectorField { components: (0..n).map(|_| poly(rng, n, 2, max_degree)).collect() }
}

pub fn vector(rng: &mut impl Rng, n: usize) -> Vector {
    Vector((0..n).map(|_| rational_in(rng, 4, 3)).collect())
}

/// An invertible matrix with small integer entries.
pub fn invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| integer_in(rng, 3)).collect()).collect();
        let m = Matrix::from_rows(&rows, n);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// `a` in the basis given by the columns of `p`.
pub fn change_basis(a: &AltForm, p: &Matrix) -> AltForm {
    let cols: Vec<Vector> = (0..p.cols()).map(|j| Vector(p.column(j))).collect();
    a.pullback(&cols).expect("square change of basis")
}

/// `(ω̄_0 + (1/10)·d^x q)∧dy_1∧…∧dy_k` with `q` a 1-form whose x-components
/// are four monomials of degree ≤ 3 in all variables, integer coefficients
/// in `[−3, 3]`. Redrawn until `d^x q ≠ 0`.
pub fn moser_instance(rng: &mut impl Rng, m: usize, k: usize) -> PolyForm {
    let split = CoordinateSplit::standard(m, k);
    let n = split.dim();
    let vars: Vec<usize> = (0..n).collect();
    let bar0 = PolyForm::from_alt(&standard_symplectic(m).embed(n, split.x()).expect("x-block"));
    loop {
        let mut q = PolyForm::zero(n, 1);
        for &i in split.x() {
            q = q.add(&PolyForm::term(n, &[i], poly_in(rng, n, &vars, 4, 3, 3)));
        }
        let dq = q.d_x(&split);
        if !dq.is_zero() {
            return bar0.add(&dq.scale(&Rational::new(1.into(), 10.into()))).wedge(&split.y_volume());
        }
    }
}

/// A closed dvs form of type `(m, k)` with a frame of the shape
/// `α_j = dy_j + (x-terms)`: the pullback of `ω̄∧dy_1∧…∧dy_k`, where
/// `ω̄ = ω̄_0 + d^x θ(x, y)`, along `x ↦ x + g(x, y)`, `y_j ↦ y_j + f_j(x)`
/// with `g` quadratic and `f_j` of degree ≤ 2. The frame is `{d(y_j + f_j)}`.
pub fn closed_dvs_instance(rng: &mut impl Rng, m: usize, k: usize) -> (PolyForm, FrameSpec) {
    let split = CoordinateSplit::standard(m, k);
    let n = split.dim();
    let all: Vec<usize> = (0..n).collect();
    let tenth = Rational::new(1.into(), 10.into());
    let bar0 = PolyForm::from_alt(&standard_symplectic(m).embed(n, split.x()).expect("x-block"));
    let theta = split.x().iter().fold(PolyForm::zero(n, 1), |acc, &i| {
        acc.add(&PolyForm::term(n, &[i], poly_in(rng, n, &all, 2, 2, 3)))
    });
    let bar = bar0.add(&theta.d_x(&split).scale(&tenth));
    let flat = bar.wedge(&split.y_volume());

    let quadratic = |rng: &mut _, vars: &[usize]| {
        let mut p = Poly::zero(n);
        for _ in 0..2 {
            let mut e = vec![0u32; n];
            e[vars[rng_index(rng, vars.len())]] += 1;
            e[vars[rng_index(rng, vars.len())]] += 1;
            p.add_term(Monomial::new(&e), integer_in(rng, 3));
        }
        p.scale(&tenth)
    };
    let mut map: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    for &i in split.x() {
        map[i] = &map[i] + &quadratic(rng, &all);
    }
    let mut frame = Vec::new();
    for &j in split.y() {
        let f = &quadratic(rng, split.x()) + &poly_in(rng, n, split.x(), 1, 1, 3);
        map[j] = &map[j] + &f;
        frame.push(PolyForm::function(map[j].clone()).d());
    }
    (flat.pullback(&map), FrameSpec::new(frame))
}

fn rng_index(rng: &mut impl Rng, len: usize) -> usize {
    rng.gen_range(0..len)
}

/// `(H, Y)` with `H` of degree ≤ `max_degree` normalized by `H(0, y) = 0`
/// and `Y` a field on the y-block with coefficients in `y` only.
pub fn generator(rng: &mut impl Rng, m: usize, k: usize, max_degree: u32) -> (SymmetryGenerator, CoordinateSplit) {
    let split = CoordinateSplit::standard(m, k);
    let n = split.dim();
    let all: Vec<usize> = (0..n).collect();
    let mut h = Poly::zero(n);
    for _ in 0..4 {
        let mon = monomial_in(rng, n, &all, max_degree);
        if mon.degree_in(split.x_mask()) > 0 {
            h.add_term(mon, integer_in(rng, 3));
        }
    }
    let mut y = PolyVectorField::zero(n);
    for &j in split.y() {
        y.components[j] = poly_in(rng, n, split.y(), 2, max_degree, 3);
    }
    let g = SymmetryGenerator::new(h, y, &split).expect("y-block field of the right size");
    (g, split)
}
