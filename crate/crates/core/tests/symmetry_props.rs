use dvs_core::cosymplectic::{
    box_exactness_check, classify_symmetry, coham_primitive, induced_dvs_report, validate_pair, CosymplecticPair,
    SymmetryClass,
};
use dvs_core::exterior::{Rational, standard_symplectic};
use dvs_core::poly::Poly;
use dvs_core::polyform::{CoordinateSplit, PolyForm, PolyVectorField};
use dvs_core::sample::{box_points, change_basis, generator, invertible, poly_in, rational_in, rng, vector_field, ChaCha8Rng};
use dvs_core::symmetry::{
    build_symmetry, conformal_residual, decompose_symmetry, hamiltonian_form_candidate, verify_symmetry, ModelContext,
};
use proptest::prelude::*;

/// A model with a scrambled constant ω̄ and a primitive shifted by `d f(x)`.
fn context(r: &mut ChaCha8Rng, m: usize, k: usize) -> ModelContext {
    let split = CoordinateSplit::standard(m, k);
    let n = split.dim();
    let bar = change_basis(&standard_symplectic(m), &invertible(r, 2 * m)).embed(n, split.x()).unwrap();
    let f = poly_in(r, n, split.x(), 3, 3, 3);
    let theta = PolyForm::from_alt(&bar).homotopy_x(&split).add(&PolyForm::function(f).d());
    ModelContext::new(split, bar, theta).unwrap()
}

/// `X_f + c ∂_y` for the standard pair, `f` a function of the x-block.
fn cosymplectic_field(r: &mut ChaCha8Rng, n: usize, c: Rational) -> PolyVectorField {
    let dim = 2 * n + 1;
    let x: Vec<usize> = (0..2 * n).collect();
    let f = poly_in(r, dim, &x, 3, 3, 3);
    let mut v = PolyVectorField::zero(dim);
    for i in 0..n {
        v.components[2 * i] = f.partial(2 * i + 1);
        v.components[2 * i + 1] = -&f.partial(2 * i);
    }
    v.components[2 * n] = Poly::constant(dim, c);
    v
}

/// The standard pair pulled back along `x ↦ x + g(x, y)`, `y ↦ y + f(x)`.
fn scrambled_pair(r: &mut ChaCha8Rng, n: usize) -> CosymplecticPair {
    let dim = 2 * n + 1;
    let all: Vec<usize> = (0..dim).collect();
    let tenth = Rational::new(1.into(), 10.into());
    let mut map: Vec<Poly> = (0..dim).map(|i| Poly::var(dim, i)).collect();
    for i in 0..dim {
        let vars = if i == 2 * n { &all[..2 * n] } else { &all[..] };
        let mut g = poly_in(r, dim, vars, 2, 2, 3);
        g = g.map_terms(|m, c| (m.degree() >= 2).then(|| (*m, c.clone())));
        map[i] = &map[i] + &g.scale(&tenth);
    }
    let std = CosymplecticPair::standard(n);
    CosymplecticPair::new(std.alpha.pullback(&map), std.beta.pullback(&map)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn model_context_identities(seed in any::<u64>(), m in 1usize..=3, k in 0usize..=2) {
        let mut r = rng(seed);
        let ctx = context(&mut r, m, k);
        prop_assert_eq!(ctx.omega_bar_form().interior(&ctx.euler), ctx.theta.clone());
        prop_assert_eq!(ctx.theta.d(), ctx.omega_bar_form());
        let c = rational_in(&mut r, 9, 7);
        prop_assert!(conformal_residual(&c, &ctx).is_zero());
    }

    #[test]
    fn generators_build_symmetries_and_round_trip(seed in any::<u64>(), m in 1usize..=2, k in 1usize..=2) {
        let mut r = rng(seed);
        let ctx = if seed % 2 == 0 { ModelContext::standard(m, k) } else { context(&mut r, m, k) };
        let (g, split) = generator(&mut r, m, k, 3);
        prop_assert!(g.is_normalized(&split));
        let v = build_symmetry(&g, &ctx).unwrap();
        prop_assert!(verify_symmetry(&v, &ctx.omega()).is_zero());
        prop_assert_eq!(decompose_symmetry(&v, &ctx).unwrap(), g.clone());
        let hf = hamiltonian_form_candidate(&g, &ctx).unwrap();
        prop_assert!(hf.certifies(), "residual {:?}", hf.residual);
    }

    #[test]
    fn classification_is_monotone(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let pair = CosymplecticPair::standard(n);
        let dim = 2 * n + 1;
        let x = match seed % 3 {
            0 => cosymplectic_field(&mut r, n, Rational::from_integer(0.into())),
            1 => {
                let c = rational_in(&mut r, 3, 2);
                cosymplectic_field(&mut r, n, c)
            }
            _ => vector_field(&mut r, dim, 2),
        };
        let c = classify_symmetry(&x, &pair);
        let cosymplectic = c.lie_alpha.is_zero() && c.lie_beta.is_zero();
        prop_assert_eq!(c.class >= SymmetryClass::Cosymplectic, cosymplectic);
        if c.class >= SymmetryClass::WeaklyCoHamiltonian {
            prop_assert!(c.closedness.is_zero() && c.primitive.is_some());
        }
        if !c.closedness.is_zero() {
            prop_assert!(c.class < SymmetryClass::WeaklyCoHamiltonian);
        }
        prop_assert_eq!(c.class == SymmetryClass::CoHamiltonian, cosymplectic && c.primitive.is_some() && c.alpha_of_x.is_zero());
        match coham_primitive(&x, &pair) {
            Ok(p) => {
                prop_assert!(p.residual.is_zero());
                prop_assert_eq!(c.class, SymmetryClass::CoHamiltonian);
            }
            Err(_) => prop_assert!(c.class != SymmetryClass::CoHamiltonian),
        }
        let be = box_exactness_check(&x, &pair);
        if c.class >= SymmetryClass::Cosymplectic {
            prop_assert!(be.closed && be.exact());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn scrambled_pairs_induce_dvs_forms(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let pair = scrambled_pair(&mut r, n);
        let samples = box_points(&mut r, 2 * n + 1, 5);
        let report = validate_pair(&pair, &samples).unwrap();
        prop_assert!(report.valid());
        prop_assert_eq!(report.below_stated_range, n == 1);
        let induced = induced_dvs_report(&pair, &samples).unwrap();
        if n == 1 {
            // A top-degree form on R^3: F is all of V*.
            prop_assert!(induced.closed && induced.involutivity.involutive);
            prop_assert!(induced.f_dims.iter().all(|&d| d == 3));
        } else {
            prop_assert!(induced.passed(n));
        }
    }
}
