use bosent::entanglement::density_closed_form;
use bosent::oracle::oracle_project_single;
use bosent::sampling::{random_overlap, random_particle, random_spatial, random_spin};
use bosent::{
    expand_in_detector_basis, labeled_inner, oracle_postselected_density, postselected_spin_state,
    project_single, symmetrize, transition_two, Complex64, DistVector, SingleParticleState, Spin,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 150;

fn any(rng: &mut ChaCha8Rng, d: usize) -> SingleParticleState {
    let s = random_spin(rng);
    random_particle(rng, s, d)
}

#[test]
fn transition_rule_matches_tensor_inner_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in 0..TRIALS {
        let d = 1 + k % 3;
        let p: Vec<_> = (0..4).map(|_| any(&mut rng, d)).collect();
        let rule = transition_two((&p[0], &p[1]), (&p[2], &p[3])).unwrap();
        let brute = labeled_inner(
            &symmetrize(&p[0], &p[1]).unwrap(),
            &symmetrize(&p[2], &p[3]).unwrap(),
        )
        .unwrap();
        assert!(
            (rule - brute).norm() < 1e-12,
            "trial {k}: {rule} vs {brute}"
        );
    }
}

#[test]
fn single_projection_matches_slot_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for k in 0..TRIALS {
        let d = 1 + k % 3;
        let p: Vec<_> = (0..3).map(|_| any(&mut rng, d)).collect();
        let rule = project_single(&p[0], (&p[1], &p[2]))
            .unwrap()
            .to_slot_vector();
        let brute = oracle_project_single(&p[0], &symmetrize(&p[1], &p[2]).unwrap()).unwrap();
        let dev = rule
            .iter()
            .zip(&brute)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "trial {k}: {dev}");
    }
}

#[test]
fn expansion_and_density_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for k in 0..TRIALS {
        let d = 1 + k % 3;
        let a = random_particle(&mut rng, Spin::Up, d);
        let b = random_particle(&mut rng, Spin::Down, d);
        let sym = symmetrize(&a, &b).unwrap();
        let expanded = expand_in_detector_basis(&a, &b)
            .unwrap()
            .to_labeled()
            .unwrap();
        assert!(expanded.max_abs_diff(&sym).unwrap() < 1e-12);
        let rho = postselected_spin_state(&a, &b).unwrap();
        let dev = rho.max_abs_diff(&oracle_postselected_density(&sym));
        assert!(dev < 1e-12, "trial {k}: {dev}");
    }
}

#[test]
fn closed_form_density_matches_oracle_for_complex_overlaps() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..TRIALS {
        let (sa, sb) = (random_spatial(&mut rng), random_spatial(&mut rng));
        let o: Complex64 = random_overlap(&mut rng);
        let (pa, pb) = DistVector::pair_with_overlap(o).unwrap();
        let a = SingleParticleState::new(sa, Spin::Up, pa);
        let b = SingleParticleState::new(sb, Spin::Down, pb);
        let oracle = oracle_postselected_density(&symmetrize(&a, &b).unwrap());
        assert!(density_closed_form(&sa, &sb, o).max_abs_diff(&oracle) < 1e-12);
    }
}
