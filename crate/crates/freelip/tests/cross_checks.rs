//! Checks that cut across module boundaries.

mod common;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_metric_space, random_molecule};
use freelip::basis::BasisSystem;
use freelip::freespace::{kr_norm, kr_norm_float, lip_constant, Molecule};
use freelip::groups::{CayleyBall, Group};
use freelip::metric::{
    greedy_net, sample_hyperboloid, snowflake, AnySpace, MetricScalar, Space,
};
use freelip::scalar::{rat, rational_to_f64};

/// The basis audit's exact per-n Lipschitz constants agree with the
/// freespace module's generic pair maximization over the core space.
#[test]
fn basis_lipschitz_agrees_with_freespace_lip_constant() {
    let ball = CayleyBall::build(Group::free_abelian(2, vec![]).unwrap(), 4).unwrap();
    let sys = BasisSystem::new(ball).unwrap();
    let report = sys.audit_claim();
    let space = sys.space();
    for n in [1usize, 3, 9, sys.n_max()] {
        let map: Vec<usize> = (0..sys.core_len())
            .map(|g| sys.retraction(n, g).unwrap())
            .collect();
        let generic = lip_constant(&map, space, space);
        let record = &report.records[n - 1];
        assert_eq!(
            generic,
            rat(record.lip_num as i64) / rat(record.lip_den as i64),
            "n = {n}"
        );
    }
}

/// Rational instances recomputed over float distances land within tolerance
/// of the exact value.
#[test]
fn float_norm_tracks_exact_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let space = random_metric_space(&mut rng, 6);
        let m = random_molecule(&mut rng, &space, 5);
        let exact = kr_norm(&m).unwrap().value;

        let float_space = Arc::new(
            Space::new(
                space.points().to_vec(),
                space.point_name(space.basepoint()),
                (0..space.len())
                    .map(|i| (0..space.len()).map(|j| space.dist(i, j).as_f64()).collect())
                    .collect(),
            )
            .unwrap(),
        );
        let fm = Molecule::new(
            float_space,
            m.coeffs().iter().map(|(&i, c)| (i, c.clone())),
        )
        .unwrap();
        let cert = kr_norm_float(&fm, 1e-9).unwrap();
        assert!((cert.value - rational_to_f64(&exact)).abs() <= 1e-9);
        assert!(cert.gap <= 1e-9);
    }
}

/// delta(x) over a hyperbolic net has norm d(x, basepoint).
#[test]
fn delta_norm_on_hyperbolic_net() {
    let samples = sample_hyperboloid(2, 60, 2.0, 13);
    let net = Arc::new(greedy_net(&samples, 0.4).unwrap());
    for x in 1..net.len() {
        let m = Molecule::delta(net.clone(), x).unwrap();
        let cert = kr_norm_float(&m, 1e-9).unwrap();
        assert!((cert.value - net.dist(net.basepoint(), x)).abs() <= 1e-9);
    }
}

/// Cayley balls export valid metric spaces, before and after snowflaking.
#[test]
fn ball_spaces_validate_and_snowflake() {
    let ball = CayleyBall::build(Group::free(2).unwrap(), 3).unwrap();
    let space = ball.to_space();
    assert!(space.validate_exact().is_empty());
    let flaked = snowflake(&AnySpace::Rational(Arc::new(space)), 0.5).unwrap();
    assert!(flaked.validate().is_empty());
}

/// Larger instances: the returned certificate is itself an optimality proof
/// (feasible flow and feasible witness with equal values), and kr_norm
/// re-verifies it on every call; a pass here means the simplex solved every
/// instance to proven optimality.
#[test]
fn solver_stress_with_wide_supports() {
    let mut rng = ChaCha8Rng::seed_from_u64(321);
    for round in 0..50 {
        let space = random_metric_space(&mut rng, 30);
        let m = random_molecule(&mut rng, &space, 20);
        let cert = kr_norm(&m).unwrap();
        assert!(cert.verify(&m).is_ok(), "round {round}");
        // triangle inequality of the norm against a split of the molecule
        let half = m.scale(&freelip::scalar::ratio(1, 2));
        let n_half = kr_norm(&half).unwrap().value;
        assert_eq!(n_half + kr_norm(&half).unwrap().value, cert.value);
    }
}

/// Projection norms over the basis system respect the K+1 bound on a random
/// molecule sweep, 200 samples per (group, n) as stated.
#[test]
fn projection_norm_sweep() {
    let cases = vec![
        CayleyBall::build(Group::free_abelian(2, vec![]).unwrap(), 4).unwrap(),
        CayleyBall::build(Group::free(2).unwrap(), 4).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for ball in cases {
        let sys = BasisSystem::new(ball).unwrap();
        let bound = rat(i64::from(sys.combability_constant()) + 1);
        for n in 1..=sys.n_max() {
            for _ in 0..200 {
                let m = random_molecule(&mut rng, sys.space(), 5);
                let norm = kr_norm(&m).unwrap().value;
                let proj_norm = kr_norm(&sys.project(n, &m).unwrap()).unwrap().value;
                assert!(proj_norm <= &bound * &norm, "n = {n}");
            }
        }
    }
}
