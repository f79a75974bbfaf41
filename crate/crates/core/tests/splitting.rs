mod common;

use common::{c, operator_expansion, random_column, random_splitter, random_state, rng};
use modesplit::entanglement::schmidt_entropy;
use modesplit::mixing::{evolve_joint, JointModeState};
use modesplit::numeric::binomial;
use modesplit::splitting::{
    beamsplit, ideal_mode_split, mode_schmidt_coeffs, multimode_split, particle_schmidt,
    project_sector, spectrum_deviation, NetworkColumn, SectoredState, SplitterParams,
};
use modesplit::states::{make_fock, to_first_quantization, TwoModeState};
use modesplit::Complex64;
use proptest::prelude::*;

type Terms<'a> = &'a [(&'a [usize], f64)];

/// Compares every sector of a split against the operator expansion.
fn assert_matches_expansion(s: &TwoModeState, alphas: &[Complex64], split: &SectoredState) {
    let oracle = operator_expansion(s.amplitudes(), alphas);
    let modes = alphas.len();
    let mut seen = 0;
    for (occ, z) in &oracle {
        let totals: Vec<usize> = (0..modes).map(|k| occ[2 * k] + occ[2 * k + 1]).collect();
        let downs: Vec<usize> = (0..modes).map(|k| occ[2 * k]).collect();
        let lib = split
            .sector(&totals)
            .map(|sec| sec.weight * sec.state.amplitude(&downs))
            .unwrap_or_default();
        assert!((lib - z).norm() < 1e-10, "occupation {occ:?}: {lib} vs {z}");
        seen += 1;
    }
    // Nothing the expansion lacks may appear in the library output.
    let lib_count: usize = split
        .sectors()
        .values()
        .map(|sec| sec.state.amplitudes().iter().filter(|z| (sec.weight * *z).norm() > 1e-14).count())
        .sum();
    assert!(lib_count <= seen);
}

#[test]
fn two_one_split_gives_expected_sectors() {
    let s = make_fock(2, 3).unwrap();
    let mut r = rng(11);
    let root3 = 3f64.sqrt();
    let (a, b) = ((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt());
    for _ in 0..20 {
        let p = random_splitter(&mut r);
        let (rr, tt) = (p.r(), p.t());
        let ss = beamsplit(&s, &p);
        let expected_weights = [
            (vec![3, 0], rr.powu(3)),
            (vec![2, 1], rr * rr * tt * root3),
            (vec![1, 2], rr * tt * tt * root3),
            (vec![0, 3], tt.powu(3)),
        ];
        for (key, w) in &expected_weights {
            assert!((ss.sector(key).unwrap().weight - w).norm() < 1e-12);
        }
        // Sector states as written out term by term.
        let states: [(&[usize], Terms); 4] = [
            (&[3, 0], &[(&[2, 0], 1.0)]),
            (&[2, 1], &[(&[2, 0], a), (&[1, 1], b)]),
            (&[1, 2], &[(&[0, 2], a), (&[1, 1], b)]),
            (&[0, 3], &[(&[0, 2], 1.0)]),
        ];
        for (key, terms) in states {
            let st = &ss.sector(key).unwrap().state;
            let mut norm = 0.0;
            for (downs, amp) in terms {
                assert!((st.amplitude(downs) - c(*amp, 0.0)).norm() < 1e-12);
                norm += amp * amp;
            }
            assert!((st.norm() - norm.sqrt()).abs() < 1e-12);
        }
        assert_matches_expansion(&s, &[rr, tt], &ss);
    }
}

#[test]
fn two_mode_split_matches_expansion_for_superpositions() {
    let mut r = rng(12);
    for n in 0..=7 {
        for _ in 0..5 {
            let s = random_state(&mut r, n);
            let p = random_splitter(&mut r);
            let ss = beamsplit(&s, &p);
            assert_matches_expansion(&s, &[p.r(), p.t()], &ss);
            assert!((ss.total_probability() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn three_mode_split_matches_expansion() {
    let mut r = rng(13);
    for total in 0..=6 {
        for n in 0..=total {
            let s = make_fock(n, total).unwrap();
            let alphas = random_column(&mut r, 3);
            let col = NetworkColumn::new(alphas.clone()).unwrap();
            assert_matches_expansion(&s, &alphas, &multimode_split(&s, &col));
        }
    }
    for _ in 0..5 {
        let s = random_state(&mut r, 5);
        let alphas = random_column(&mut r, 4);
        let col = NetworkColumn::new(alphas.clone()).unwrap();
        assert_matches_expansion(&s, &alphas, &multimode_split(&s, &col));
    }
}

#[test]
fn multimode_weights_form_a_distribution() {
    let mut r = rng(14);
    for _ in 0..100 {
        let k = 2 + (r.random_range(0..3usize));
        let col = NetworkColumn::new(random_column(&mut r, k)).unwrap();
        let total = r.random_range(0..9usize);
        let ss = multimode_split(&make_fock(total / 2, total).unwrap(), &col);
        assert!((ss.total_probability() - 1.0).abs() < 1e-10);
    }
    assert!(NetworkColumn::new(vec![c(1.0, 0.0), c(0.5, 0.0)]).is_err());
}

use rand::Rng;

#[test]
fn schmidt_spectra_agree_in_both_pictures() {
    for total in 2..=8 {
        for n in 0..=total {
            let ps = to_first_quantization(&make_fock(n, total).unwrap()).unwrap();
            for n_x in 1..total {
                let mode = mode_schmidt_coeffs(n, total, n_x, total - n_x).unwrap();
                let particle = particle_schmidt(&ps, n_x).unwrap();
                let dev = spectrum_deviation(mode.coefficients(), particle.coefficients());
                assert!(dev < 1e-10, "N={total} n={n} N_X={n_x}: {dev}");
            }
        }
    }
    let mut r = rng(15);
    for total in 2..=8 {
        for _ in 0..10 {
            let s = random_state(&mut r, total);
            let ps = to_first_quantization(&s).unwrap();
            let n_x = r.random_range(1..total);
            let mode = ideal_mode_split(&s, n_x, total - n_x).unwrap().schmidt().unwrap();
            let particle = particle_schmidt(&ps, n_x).unwrap();
            assert!(mode.spectrum_deviation(&particle) < 1e-10);
        }
    }
}

#[test]
fn closed_form_coefficients_small_cases() {
    let sd = mode_schmidt_coeffs(2, 3, 2, 1).unwrap();
    let expected = [(2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()];
    assert!(spectrum_deviation(sd.coefficients(), &expected) < 1e-15);
    for n in 0..=5 {
        let sd = mode_schmidt_coeffs(n, 5, 3, 2).unwrap();
        let sum: f64 = sd.coefficients().iter().map(|l| l * l).sum();
        assert!((sum - 1.0).abs() < 1e-14);
        assert_eq!(
            sd.rank(),
            (0..=n).filter(|&k| k <= 3 && n - k <= 2).count()
        );
    }
    assert!(mode_schmidt_coeffs(2, 3, 2, 2).is_err());
}

#[test]
fn projection_of_missing_and_invalid_sectors() {
    let ss = beamsplit(&make_fock(1, 2).unwrap(), &SplitterParams::identity());
    let out = project_sector(&ss, &[0, 2]).unwrap();
    assert_eq!(out.probability, 0.0);
    assert!(out.state.is_none());
    assert!(project_sector(&ss, &[1, 2]).is_err());
    assert!(project_sector(&ss, &[2]).is_err());
    let hit = project_sector(&ss, &[2, 0]).unwrap();
    assert!((hit.probability - 1.0).abs() < 1e-15);
}

#[test]
fn beamsplit_sectors_equal_ideal_splits() {
    let mut r = rng(16);
    let s = random_state(&mut r, 6);
    let p = random_splitter(&mut r);
    for (key, sector) in beamsplit(&s, &p).sectors() {
        let ideal = ideal_mode_split(&s, key[0], key[1]).unwrap();
        assert!(sector.state.distance_up_to_phase(&ideal) < 1e-12);
        let expected = binomial(6, key[0]).sqrt() * p.r().powu(key[0] as u32) * p.t().powu(key[1] as u32);
        assert!((sector.weight - expected).norm() < 1e-12);
    }
}

#[test]
fn coherent_input_is_never_entangled() {
    let p = SplitterParams::balanced();
    for total in 1..=6 {
        for key_sector in beamsplit(&make_fock(total, total).unwrap(), &p).sectors().values() {
            assert!(schmidt_entropy(&key_sector.state.schmidt().unwrap()) < 1e-12);
        }
    }
}

#[test]
fn occupied_second_input_adds_entanglement() {
    // One spin-down particle in A, one spin-up in B: a product across A:B.
    let input = JointModeState::basis([1, 0, 0, 1]);
    let out = evolve_joint(&input, &SplitterParams::balanced());
    let sector = out.sector_component((1, 1));
    let prob = sector.norm().powi(2);
    assert!((prob - 0.5).abs() < 1e-12);
    let normalized = sector.scaled(c(1.0 / prob.sqrt(), 0.0));
    let entropy = schmidt_entropy(&normalized.schmidt().unwrap());
    assert!((entropy - 1.0).abs() < 1e-12, "{entropy}");
}

/// Mixed inputs given as explicit pure ensembles: sector probabilities are
/// ensemble averages.
#[test]
fn ensemble_sector_probabilities_are_linear() {
    let mut r = rng(17);
    let members: Vec<(f64, TwoModeState)> = vec![(0.3, random_state(&mut r, 4)), (0.7, random_state(&mut r, 4))];
    let p = random_splitter(&mut r);
    let mixed: f64 = members
        .iter()
        .map(|(w, s)| w * project_sector(&beamsplit(s, &p), &[2, 2]).unwrap().probability)
        .sum();
    let expected = binomial(4, 2) * p.r().norm_sqr().powi(2) * p.t().norm_sqr().powi(2);
    assert!((mixed - expected).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn swapped_split_is_the_mirror(seed in any::<u64>(), total in 2usize..8, n_c in 0usize..8) {
        let n_c = n_c % (total + 1);
        let s = random_state(&mut rng(seed), total);
        let a = ideal_mode_split(&s, n_c, total - n_c).unwrap().swap_modes();
        let b = ideal_mode_split(&s, total - n_c, n_c).unwrap();
        prop_assert!(a.distance_up_to_phase(&b) < 1e-12);
        prop_assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
    }
}
