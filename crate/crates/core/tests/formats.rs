use dispersion::instance::{generate, parse_instance, write_instance, GeneratorSpec};
use dispersion::milp::{check_lp, emit, FormulationKind};
use dispersion::Family;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Som), Just(Family::Mdg), Just(Family::GkdD), Just(Family::Gkd)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_text_round_trips(f in family(), n in 3usize..20, seed in 0u64..1000) {
        let inst = generate(&GeneratorSpec::new(f, n, 2, seed)).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn every_formulation_is_well_formed(f in family(), n in 3usize..9, seed in 0u64..1000, pick in 0usize..100) {
        let m = 2 + pick % (n - 1);
        let inst = generate(&GeneratorSpec::new(f, n, 2, seed)).unwrap();
        let l = inst.distinct_distances()[pick % inst.distinct_distances().len()];
        let pairs = n * (n - 1) / 2;
        for kind in [
            FormulationKind::MaxSumKuo,
            FormulationKind::MaxSumW,
            FormulationKind::MaxMinKuo,
            FormulationKind::MaxMinSumTight,
            FormulationKind::MinDiffTight,
            FormulationKind::NodePacking(l),
            FormulationKind::PackingFeasibility(l),
        ] {
            let text = emit(&inst, m, kind).unwrap();
            let s = check_lp(&text).unwrap();
            prop_assert_eq!(s.binaries.len(), n);
            let rows = s.rows.len();
            match kind {
                FormulationKind::MaxSumKuo => prop_assert_eq!(rows, 1 + 3 * pairs),
                FormulationKind::MaxMinKuo => prop_assert_eq!(rows, 1 + 4 * pairs),
                FormulationKind::MaxSumW => prop_assert_eq!(rows, 1 + 2 * (n - 1)),
                FormulationKind::MaxMinSumTight => prop_assert_eq!(rows, 1 + n),
                FormulationKind::MinDiffTight => prop_assert_eq!(rows, 2 + 2 * n),
                FormulationKind::NodePacking(l) => {
                    prop_assert_eq!(rows, inst.pairs().filter(|p| p.2 < l).count())
                }
                FormulationKind::PackingFeasibility(l) => {
                    prop_assert_eq!(rows, 1 + inst.pairs().filter(|p| p.2 < l).count())
                }
            }
        }
    }
}
