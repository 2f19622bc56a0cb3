mod common;

use geoclass_core::category::random;
use geoclass_core::category::{
    action_to_dofib, check_category, core, descend_dofib, dofib_to_action, is_fully_faithful, pullback_sheaf,
    two_cell_canonical, CategoryError, FiniteCategory, InternalTransformation,
};
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn validator_agrees_with_direct_check_after_mutation(seed in any::<u64>(), groupoid in any::<bool>()) {
        let mut rng = random::rng(seed);
        let c = if groupoid { random::groupoid(&mut rng, 4) } else { random::category(&mut rng, 4) };
        let mut t = c.tables().clone();
        prop_assert!(common::valid_tables(&t));
        let (a, n) = (t.source.len(), t.objects);
        match rng.random_range(0..5) {
            0 => t.source[rng.random_range(0..a)] = rng.random_range(0..n),
            1 => t.target[rng.random_range(0..a)] = rng.random_range(0..n),
            2 => t.identity[rng.random_range(0..n)] = rng.random_range(0..a),
            3 => {
                let (f, g) = (rng.random_range(0..a), rng.random_range(0..a));
                t.compose[f][g] = if rng.random_bool(0.2) { None } else { Some(rng.random_range(0..a)) };
            }
            _ => {
                if let Some(inv) = t.inverse.as_mut() {
                    inv[rng.random_range(0..a)] = rng.random_range(0..a);
                }
            }
        }
        let expected = common::valid_tables(&t);
        match check_category(t) {
            Ok(_) => prop_assert!(expected),
            Err(CategoryError::Equations(vs)) => prop_assert!(!expected && !vs.is_empty()),
            Err(CategoryError::Shape(_)) => prop_assert!(!expected),
        }
    }

    #[test]
    fn actions_and_opfibrations_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let h = random::category(&mut rng, 4);
        let a = random::action(&mut rng, &h);
        let d = action_to_dofib(&a, &h).unwrap();
        prop_assert!(d.check(&h).is_ok());
        prop_assert_eq!(dofib_to_action(&d, &h).unwrap(), a);
    }

    #[test]
    fn descent_round_trips(seed in any::<u64>()) {
        prop_assert_eq!(common::descent_instance(seed), Ok(()));
    }

    #[test]
    fn descended_opfibrations_pull_back(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let k = random::category(&mut rng, 3);
        let (h, phi) = random::ff_surjection(&mut rng, &k, 2);
        let x = random::action(&mut rng, &h);
        let (down, iso) = descend_dofib(&h, &k, &phi, &action_to_dofib(&x, &h).unwrap()).unwrap();
        prop_assert!(down.check(&k).is_ok());
        let (pulled, _) = pullback_sheaf(&h, &phi, &dofib_to_action(&down, &k).unwrap());
        prop_assert_eq!(iso.len(), pulled.len());
    }

    #[test]
    fn two_cells_have_unique_representatives(seed in any::<u64>()) {
        prop_assert_eq!(common::two_cell_unique(&common::two_cell_instance(seed)), Ok(()));
    }

    #[test]
    fn interpretation_commutes_with_base_change(seed in any::<u64>()) {
        prop_assert!(common::base_change_instance(seed));
    }

    #[test]
    fn core_inclusion_is_faithful_into_a_groupoid(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let c = random::category(&mut rng, 4);
        let k = core(&c);
        prop_assert!(k.category.is_groupoid());
        prop_assert!(k.inclusion.check(&k.category, &c).is_ok());
        let mut images = k.inclusion.arr.clone();
        images.sort_unstable();
        images.dedup();
        prop_assert_eq!(images.len(), k.category.arrows());
        if c.is_groupoid() {
            prop_assert!(is_fully_faithful(&k.category, &c, &k.inclusion));
        }
    }
}

#[test]
fn two_cell_rejects_tau_not_constant_on_fibers() {
    for seed in 0..200 {
        let mut inst = common::two_cell_instance(seed);
        let sigma = &inst.datum.sigma;
        let Some((y1, y2)) = (0..sigma.obj.len())
            .flat_map(|a| (a + 1..sigma.obj.len()).map(move |b| (a, b)))
            .find(|&(a, b)| sigma.obj[a] == sigma.obj[b])
        else {
            continue;
        };
        let k = &inst.k;
        let (from, to) = (k.s(inst.datum.tau.components[y2]), k.t(inst.datum.tau.components[y2]));
        let Some(other) = k.hom(from, to).into_iter().find(|&g| g != inst.datum.tau.components[y1]) else { continue };
        let mut components = inst.datum.tau.components.clone();
        components[y2] = other;
        inst.datum.tau = InternalTransformation { components };
        assert!(two_cell_canonical(&inst.k, &inst.f1, &inst.f2, &inst.datum).is_err(), "seed {seed}");
        return;
    }
    panic!("no seed produced a cover with two objects over one point");
}

#[test]
fn free_arrow_core_is_discrete() {
    let k = core(&FiniteCategory::free_arrow());
    assert_eq!((k.category.objects(), k.category.arrows()), (2, 2));
}
