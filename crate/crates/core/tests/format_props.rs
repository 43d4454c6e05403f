use dvs_core::format::{
    coordinate_names, emit_field, emit_form, emit_generator, parse_field, parse_form, parse_generator,
};
use dvs_core::polyform::CoordinateSplit;
use dvs_core::sample::{generator, poly_form, rng, vector_field};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn forms_round_trip_byte_identically(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let p = (seed as usize / 3) % (n + 1);
        let form = poly_form(&mut r, n, p, 4, 3);
        let k = (seed as usize / 17) % n;
        let split = CoordinateSplit::new((0..n - k).collect(), (n - k..n).collect()).unwrap();
        let names = coordinate_names(n, Some(&split));
        let text = emit_form(&form, &names, Some(&split));
        let parsed = parse_form(&text).unwrap();
        prop_assert_eq!(&parsed, &form);
        prop_assert_eq!(emit_form(&parsed, &names, Some(&split)), text);
    }

    #[test]
    fn fields_and_generators_round_trip(seed in any::<u64>(), m in 1usize..=2, k in 1usize..=2) {
        let mut r = rng(seed);
        let n = 2 * m + k;
        let names = coordinate_names(n, None);
        let v = vector_field(&mut r, n, 3);
        let text = emit_field(&v, &names, None);
        prop_assert_eq!(emit_field(&parse_field(&text).unwrap(), &names, None), text);
        let (g, split) = generator(&mut r, m, k, 3);
        let text = emit_generator(&g, &names, &split);
        let (parsed, parsed_split) = parse_generator(&text).unwrap();
        prop_assert_eq!(parsed_split, split.clone());
        prop_assert_eq!(emit_generator(&parsed, &names, &split), text);
    }
}
