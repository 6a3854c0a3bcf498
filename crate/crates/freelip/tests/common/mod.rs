//! Shared generators for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use freelip::freespace::Molecule;
use freelip::metric::Space;
use freelip::scalar::{ratio, Rational};

/// Prints the per-criterion verdict line, then enforces it.
pub fn gate(criterion: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} - {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance {criterion} failed: {detail}");
}

/// Random finite metric space: symmetric integer seeds in 1..=9 closed under
/// shortest paths, so the triangle inequality holds exactly.
pub fn random_metric_space(rng: &mut ChaCha8Rng, n: usize) -> Arc<Space<Rational>> {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(1..=9);
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
    let names = (0..n)
        .map(|i| if i == 0 { "0".to_string() } else { format!("x{i}") })
        .collect();
    let table = d
        .into_iter()
        .map(|row| row.into_iter().map(|v| Rational::from_integer(v.into())).collect())
        .collect();
    Arc::new(Space::new(names, "0", table).expect("closure table is well-formed"))
}

/// Random molecule with small rational coefficients and support at most
/// `max_support`.
pub fn random_molecule(
    rng: &mut ChaCha8Rng,
    space: &Arc<Space<Rational>>,
    max_support: usize,
) -> Molecule {
    let picks = rng.gen_range(1..=max_support);
    let coeffs: Vec<(usize, Rational)> = (0..picks)
        .map(|_| {
            let p = rng.gen_range(0..space.len());
            let num = rng.gen_range(-6i64..=6);
            let den = rng.gen_range(1i64..=4);
            (p, ratio(num, den))
        })
        .collect();
    Molecule::new(space.clone(), coeffs).expect("indices are in range")
}
