//! Property tests for the norm solver: seminorm axioms, agreement with the
//! independent oracle, and the lift-norm identity.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use freelip::freespace::{brute_force_norm, kr_norm, lip_constant, Molecule};
use freelip::metric::Space;
use freelip::scalar::{ratio, Rational};

/// Strategy: shortest-path closure of random symmetric integer seeds.
fn space_strategy(n: usize) -> impl Strategy<Value = Arc<Space<Rational>>> {
    prop::collection::vec(1i64..=9, n * (n - 1) / 2).prop_map(move |seeds| {
        let mut d = vec![vec![0i64; n]; n];
        let mut it = seeds.into_iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = it.next().unwrap();
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i != j && d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let names = (0..n).map(|i| format!("p{i}")).collect();
        let table = d
            .into_iter()
            .map(|row| row.into_iter().map(|v| Rational::from_integer(v.into())).collect())
            .collect();
        Arc::new(Space::new(names, "p0", table).unwrap())
    })
}

fn coeffs_strategy(n: usize, support: usize) -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0..n, -5i64..=5, 1i64..=3), 1..=support)
}

fn molecule_from(space: &Arc<Space<Rational>>, raw: &[(usize, i64, i64)]) -> Molecule {
    Molecule::new(
        space.clone(),
        raw.iter().map(|&(p, num, den)| (p, ratio(num, den))),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_is_subadditive(
        space in space_strategy(5),
        raw1 in coeffs_strategy(5, 4),
        raw2 in coeffs_strategy(5, 4),
    ) {
        let a = molecule_from(&space, &raw1);
        let b = molecule_from(&space, &raw2);
        let na = kr_norm(&a).unwrap().value;
        let nb = kr_norm(&b).unwrap().value;
        let nab = kr_norm(&a.add(&b)).unwrap().value;
        prop_assert!(nab <= na + nb);
    }

    #[test]
    fn norm_is_absolutely_homogeneous(
        space in space_strategy(5),
        raw in coeffs_strategy(5, 4),
        num in -6i64..=6,
        den in 1i64..=4,
    ) {
        let m = molecule_from(&space, &raw);
        let c = ratio(num, den);
        let scaled = kr_norm(&m.scale(&c)).unwrap().value;
        let direct = {
            let abs_c = if num < 0 { ratio(-num, den) } else { c.clone() };
            abs_c * kr_norm(&m).unwrap().value
        };
        prop_assert_eq!(scaled, direct);
    }

    #[test]
    fn simplex_matches_vertex_enumeration(
        space in space_strategy(6),
        raw in coeffs_strategy(6, 5),
    ) {
        let m = molecule_from(&space, &raw);
        prop_assert_eq!(kr_norm(&m).unwrap().value, brute_force_norm(&m).unwrap());
    }

    #[test]
    fn lift_is_bounded_by_the_lipschitz_constant(
        space in space_strategy(5),
        map in prop::collection::vec(0usize..5, 5),
        raw in coeffs_strategy(5, 4),
    ) {
        // basepoint-preserving point map
        let mut map = map;
        map[0] = 0;
        let lip = lip_constant(&map, &space, &space);
        let m = molecule_from(&space, &raw);
        let pushed = m.pushforward(|p| map[p]).unwrap();
        prop_assert!(kr_norm(&pushed).unwrap().value <= lip.clone() * kr_norm(&m).unwrap().value);

        // equality is attained by the pair molecule of a maximizing pair
        let mut best: Option<(usize, usize)> = None;
        let mut best_ratio = Rational::from_integer(0.into());
        for x in 0..5 {
            for y in (x + 1)..5 {
                let r = space.dist(map[x], map[y]) / space.dist(x, y);
                if best.is_none() || r > best_ratio {
                    best = Some((x, y));
                    best_ratio = r;
                }
            }
        }
        let (x, y) = best.unwrap();
        let pair = Molecule::pair(space.clone(), x, y).unwrap();
        let pushed_pair = pair.pushforward(|p| map[p]).unwrap();
        prop_assert_eq!(
            kr_norm(&pushed_pair).unwrap().value,
            lip * kr_norm(&pair).unwrap().value
        );
    }

    #[test]
    fn certificates_always_verify(
        space in space_strategy(6),
        raw in coeffs_strategy(6, 5),
    ) {
        let m = molecule_from(&space, &raw);
        let cert = kr_norm(&m).unwrap();
        prop_assert!(cert.verify(&m).is_ok());
    }
}
