//! Prefix-divergence audit for shortlex normal forms.
//!
//! For every in-ball edge {g, h} the audit measures
//! d_S((w_g(<= i))_G, (w_h(<= i))_G) over two index ranges: i up to
//! min{|g|, |h|}, and i strictly below max{|g|, |h|} with the shorter
//! element's prefix saturating at the element itself. Both maxima are
//! reported; the empirical combability constant is max(1, larger of the two).

use serde::Serialize;

use crate::{Error, Result};

use super::CayleyBall;

/// An edge and prefix index attaining a divergence maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub g: usize,
    pub h: usize,
    pub g_name: String,
    pub h_name: String,
    pub index: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CombabilityReport {
    pub radius: u32,
    /// Edges with both endpoint lengths <= radius - 1; every prefix distance
    /// for such an edge resolves inside the ball.
    pub audited_edges: usize,
    /// Max divergence over indices i <= min{|g|, |h|}.
    pub max_divergence_min_index: u32,
    pub witness_min_index: Option<Witness>,
    /// Max divergence over indices i < max{|g|, |h|}, saturating prefixes.
    pub max_divergence_max_index: u32,
    pub witness_max_index: Option<Witness>,
}

impl CombabilityReport {
    /// Empirical combability constant: at least 1, and at least every
    /// divergence observed under either index convention.
    pub fn combability_constant(&self) -> u32 {
        1.max(self.max_divergence_min_index)
            .max(self.max_divergence_max_index)
    }
}

struct EdgeResult {
    max_min: u32,
    arg_min: u32,
    max_max: u32,
    arg_max: u32,
}

/// Exhaustive divergence audit over all edges whose endpoints both have
/// length <= radius - 1.
pub fn audit_combability(ball: &CayleyBall) -> Result<CombabilityReport> {
    if ball.radius() < 1 {
        return Err(Error::OutOfRange("combability audit needs radius >= 1".into()));
    }
    let limit = ball.radius() - 1;
    let edges: Vec<(usize, usize)> = ball
        .edges()
        .iter()
        .copied()
        .filter(|&(g, h)| ball.length(g) <= limit && ball.length(h) <= limit)
        .collect();

    use rayon::prelude::*;
    let results: Vec<EdgeResult> = edges
        .par_iter()
        .map(|&(g, h)| audit_edge(ball, g, h))
        .collect();

    let mut report = CombabilityReport {
        radius: ball.radius(),
        audited_edges: edges.len(),
        max_divergence_min_index: 0,
        witness_min_index: None,
        max_divergence_max_index: 0,
        witness_max_index: None,
    };
    for (&(g, h), r) in edges.iter().zip(&results) {
        let witness = |i: u32| Witness {
            g,
            h,
            g_name: ball.element_name(g),
            h_name: ball.element_name(h),
            index: i,
        };
        if report.witness_min_index.is_none() || r.max_min > report.max_divergence_min_index {
            report.max_divergence_min_index = r.max_min;
            report.witness_min_index = Some(witness(r.arg_min));
        }
        if report.witness_max_index.is_none() || r.max_max > report.max_divergence_max_index {
            report.max_divergence_max_index = r.max_max;
            report.witness_max_index = Some(witness(r.arg_max));
        }
    }
    Ok(report)
}

fn audit_edge(ball: &CayleyBall, g: usize, h: usize) -> EdgeResult {
    // g precedes h in shortlex enumeration, so |g| <= |h|.
    let lg = ball.length(g);
    let lh = ball.length(h);
    debug_assert!(lg <= lh);
    let top = if lg == lh { lg } else { lh - 1 };
    let mut r = EdgeResult { max_min: 0, arg_min: 0, max_max: 0, arg_max: 0 };
    for i in 0..=top {
        let pg = ball.prefix_element(g, i.min(lg)).expect("prefix index in range");
        let ph = ball.prefix_element(h, i.min(lh)).expect("prefix index in range");
        // Both endpoints have length <= radius - 1, so every prefix pair is
        // within ball radius of each other (d <= min(2i, 2(radius-1) - 2i + 1)).
        let d = ball
            .word_distance(pg, ph)
            .expect("prefix distances of audited edges resolve in the ball");
        if i <= lg && d > r.max_min {
            r.max_min = d;
            r.arg_min = i;
        }
        if i < lh && d > r.max_max {
            r.max_max = d;
            r.arg_max = i;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{CayleyBall, Element, Group};

    #[test]
    fn integers_have_zero_divergence() {
        let ball = CayleyBall::build(Group::free_abelian(1, vec![]).unwrap(), 6).unwrap();
        let report = audit_combability(&ball).unwrap();
        assert_eq!(report.max_divergence_min_index, 0);
        assert_eq!(report.max_divergence_max_index, 0);
        assert_eq!(report.combability_constant(), 1);
    }

    #[test]
    fn z2_divergence_is_two_with_the_expected_witness() {
        let ball = CayleyBall::build(Group::free_abelian(2, vec![]).unwrap(), 5).unwrap();
        let report = audit_combability(&ball).unwrap();
        assert_eq!(report.max_divergence_min_index, 2);
        assert_eq!(report.max_divergence_max_index, 2);
        assert_eq!(report.combability_constant(), 2);
        let w = report.witness_min_index.unwrap();
        assert_eq!(
            ball.element(w.g),
            &Element::Abelian(vec![0, 1], vec![]),
        );
        assert_eq!(
            ball.element(w.h),
            &Element::Abelian(vec![1, 1], vec![]),
        );
        assert_eq!(w.index, 1);
    }

    #[test]
    fn free_group_has_zero_divergence() {
        let ball = CayleyBall::build(Group::free(2).unwrap(), 5).unwrap();
        let report = audit_combability(&ball).unwrap();
        assert_eq!(report.max_divergence_min_index, 0);
        assert_eq!(report.max_divergence_max_index, 0);
    }

    #[test]
    fn free_product_constant_is_stable_across_radii() {
        for orders in [vec![2, 2, 2], vec![2, 3]] {
            let g = || Group::free_product_cyclic(orders.clone()).unwrap();
            let r4 = audit_combability(&CayleyBall::build(g(), 4).unwrap()).unwrap();
            let r5 = audit_combability(&CayleyBall::build(g(), 5).unwrap()).unwrap();
            assert_eq!(r4.max_divergence_min_index, r5.max_divergence_min_index);
            assert_eq!(r4.max_divergence_max_index, r5.max_divergence_max_index);
            assert_eq!(r4.combability_constant(), r5.combability_constant());
        }
    }

    #[test]
    fn radius_zero_rejected() {
        let ball = CayleyBall::build(Group::free(1).unwrap(), 0).unwrap();
        assert!(audit_combability(&ball).is_err());
    }

    #[test]
    fn mixed_length_neighbours_in_odd_cyclic_products() {
        // In Z3 * Z3 adjacent elements can have equal lengths (s2 vs s2^2);
        // the min-index convention then sees divergence 1 at i = min.
        let ball = CayleyBall::build(Group::free_product_cyclic(vec![3, 3]).unwrap(), 4).unwrap();
        let report = audit_combability(&ball).unwrap();
        assert_eq!(report.max_divergence_min_index, 1);
        assert_eq!(report.max_divergence_max_index, 0);
    }
}
