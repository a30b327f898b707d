use adiabatic_paths::collective::{CollectivePath, Scaling};
use adiabatic_paths::instances::build_symmetric_instance;
use adiabatic_paths::operators::PathHamiltonian;
use adiabatic_paths::spectra::eigenvalues;
use proptest::prelude::*;

/// Symmetric sector eigenvalues sit inside the full spectrum, and the full
/// ground state is symmetric.
#[test]
fn collective_sector_embeds_in_full_space() {
    for n in 3..=8 {
        let full = PathHamiltonian::new(&build_symmetric_instance(n).unwrap(), None).unwrap();
        let coll = CollectivePath::new(n, false, Scaling::Raw).unwrap();
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let ef = eigenvalues(&full.materialize(s).unwrap()).unwrap();
            let ec = eigenvalues(&coll.at(s).matrix).unwrap();
            assert!((ef[0] - ec[0]).abs() < 1e-9, "n={n} s={s}");
            for e in ec.iter() {
                assert!(ef.iter().any(|x| (x - e).abs() < 1e-8), "n={n} s={s} e={e}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn full_path_is_hermitian_with_real_trace(n in 3usize..=6, s in 0.0f64..=1.0) {
        let h = PathHamiltonian::new(&build_symmetric_instance(n).unwrap(), None).unwrap().materialize(s).unwrap();
        prop_assert!((&h - h.adjoint()).norm() < 1e-12);
        let tr: f64 = eigenvalues(&h).unwrap().iter().sum();
        prop_assert!((tr - h.trace().re).abs() < 1e-9 * h.norm().max(1.0));
    }
}
