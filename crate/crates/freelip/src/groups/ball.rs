//! Shortlex Cayley balls.
//!
//! The ball of radius r is enumerated by a breadth-first search that expands
//! frontier elements in shortlex order and appends generators in generator
//! order, keeping the first word that reaches each new element. That first
//! word is the shortlex-minimal geodesic spelling, and the discovery order is
//! exactly the shortlex order on elements: the prefix of a shortlex-minimal
//! word is the shortlex-minimal word of its endpoint, so length-(r+1)
//! candidates are generated in lexicographic order. Rather than relying on
//! this argument, [`CayleyBall::build`] re-verifies the resulting invariants
//! element by element before returning.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::metric::Space;
use crate::scalar::Rational;
use crate::{Error, Result};

use super::{Element, Group};

/// Default cap on ball size; exhaustive audits stay in the seconds-to-minutes
/// range below this.
pub const DEFAULT_ELEMENT_CAP: usize = 500_000;

/// The radius-r ball of a group in shortlex enumeration order.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    group: Arc<Group>,
    radius: u32,
    elements: Vec<Element>,
    /// Shortlex normal forms as ordered-generator index sequences.
    words: Vec<Vec<u32>>,
    lengths: Vec<u32>,
    /// parents[i] is the index of the length-(|g|-1) prefix of element i.
    parents: Vec<usize>,
    index: HashMap<Element, usize>,
    /// Unordered word-distance-1 pairs inside the ball, as (i, j) with i < j.
    edges: Vec<(usize, usize)>,
}

impl CayleyBall {
    pub fn build(group: Group, radius: u32) -> Result<CayleyBall> {
        CayleyBall::build_with_cap(group, radius, DEFAULT_ELEMENT_CAP)
    }

    pub fn build_with_cap(group: Group, radius: u32, cap: usize) -> Result<CayleyBall> {
        let group = Arc::new(group);
        let identity = group.identity();
        let mut elements = vec![identity.clone()];
        let mut words: Vec<Vec<u32>> = vec![Vec::new()];
        let mut lengths = vec![0u32];
        let mut parents = vec![0usize];
        let mut index = HashMap::from([(identity, 0usize)]);

        let mut layer_start = 0usize;
        let mut layer_end = 1usize;
        for r in 1..=radius {
            for p in layer_start..layer_end {
                let parent_elem = elements[p].clone();
                for s in 0..group.generator_count() {
                    let x = group.apply_gen(&parent_elem, s);
                    if index.contains_key(&x) {
                        continue;
                    }
                    if elements.len() >= cap {
                        return Err(Error::ResourceCap { cap });
                    }
                    index.insert(x.clone(), elements.len());
                    elements.push(x);
                    let mut w = words[p].clone();
                    w.push(s as u32);
                    words.push(w);
                    lengths.push(r);
                    parents.push(p);
                }
            }
            layer_start = layer_end;
            layer_end = elements.len();
            if layer_start == layer_end {
                break; // group exhausted
            }
        }

        let mut edges = Vec::new();
        for i in 0..elements.len() {
            for s in 0..group.generator_count() {
                let x = group.apply_gen(&elements[i], s);
                if let Some(&j) = index.get(&x) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let ball = CayleyBall { group, radius, elements, words, lengths, parents, index, edges };
        ball.verify_invariants()?;
        Ok(ball)
    }

    /// Re-derives every structural invariant from scratch. In particular the
    /// prefix property (each prefix of a normal form is the normal form of
    /// its endpoint) is checked here rather than assumed.
    fn verify_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidGroup(format!("ball invariant violated: {msg}")));
        if self.elements[0] != self.group.identity() {
            return fail("first element is not the identity".into());
        }
        for k in 1..self.elements.len() {
            let (lp, wp) = (self.lengths[k - 1], &self.words[k - 1]);
            let (lk, wk) = (self.lengths[k], &self.words[k]);
            if (lp, wp) >= (lk, wk) {
                return fail(format!("enumeration not shortlex-increasing at {k}"));
            }
        }
        for k in 0..self.elements.len() {
            let w = &self.words[k];
            if w.len() as u32 != self.lengths[k] {
                return fail(format!("word length mismatch at {k}"));
            }
            if self.group.word_length(&self.elements[k]) != u64::from(self.lengths[k]) {
                return fail(format!("normal form of element {k} is not geodesic"));
            }
            let mut x = self.group.identity();
            for &s in w {
                x = self.group.apply_gen(&x, s as usize);
            }
            if x != self.elements[k] {
                return fail(format!("word of element {k} does not evaluate to it"));
            }
            for t in 1..w.len() {
                if self.group.generator_inverse(w[t - 1] as usize) == w[t] as usize {
                    return fail(format!("word of element {k} is not reduced"));
                }
            }
            if k > 0 {
                let p = self.parents[k];
                if self.lengths[p] + 1 != self.lengths[k] {
                    return fail(format!("parent of {k} has wrong length"));
                }
                if self.words[p][..] != w[..w.len() - 1] {
                    return fail(format!("prefix of element {k} is not its parent's normal form"));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn length(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    pub fn parent(&self, i: usize) -> usize {
        self.parents[i]
    }

    pub fn word(&self, i: usize) -> &[u32] {
        &self.words[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of_element(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Number of elements of length <= radius - 1 (an initial segment of the
    /// enumeration); the part of the ball whose neighbours are all in-ball.
    pub fn core_size(&self) -> usize {
        if self.radius == 0 {
            return 0;
        }
        self.lengths.iter().take_while(|&&l| l < self.radius).count()
    }

    /// Normal form rendered with generator names, "1" for the identity.
    pub fn element_name(&self, i: usize) -> String {
        if self.words[i].is_empty() {
            "1".to_string()
        } else {
            self.words[i]
                .iter()
                .map(|&s| self.group.generator_name(s as usize))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Word distance d_S(g, h) = |g^{-1} h| resolved inside the ball.
    /// Errors when g^{-1} h falls outside the ball; it never guesses.
    pub fn word_distance(&self, g: usize, h: usize) -> Result<u32> {
        let q = self.group.mul(&self.group.inv(&self.elements[g]), &self.elements[h]);
        match self.index.get(&q) {
            Some(&k) => Ok(self.lengths[k]),
            None => Err(Error::OutOfRange(format!(
                "d({}, {}) exceeds ball radius {}",
                self.element_name(g),
                self.element_name(h),
                self.radius
            ))),
        }
    }

    /// Exact word distance in the ambient group, via the family's closed
    /// form; not limited to the ball radius.
    pub fn group_distance(&self, g: usize, h: usize) -> u64 {
        self.group.distance(&self.elements[g], &self.elements[h])
    }

    /// The element (w_g(<= i))_G spelled by the first i letters of g's
    /// normal form. i = 0 gives the identity, i = |g| gives g.
    pub fn prefix_element(&self, g: usize, i: u32) -> Result<usize> {
        if i > self.lengths[g] {
            return Err(Error::OutOfRange(format!(
                "prefix index {i} exceeds |g| = {}",
                self.lengths[g]
            )));
        }
        let mut k = g;
        for _ in 0..(self.lengths[g] - i) {
            k = self.parents[k];
        }
        Ok(k)
    }

    /// The ball as a pointed metric space: basepoint the identity, exact
    /// integer word distances (computed in the ambient group, so pairs at
    /// distance beyond the radius are still exact).
    pub fn to_space(&self) -> Space<Rational> {
        let n = self.len();
        let names: Vec<String> = (0..n).map(|i| self.element_name(i)).collect();
        let rows: Vec<Vec<Rational>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| Rational::from_integer(self.group_distance(i, j).into()))
                    .collect()
            })
            .collect();
        Space::new(names, "1", rows).expect("ball space is well-formed")
    }
}
