//! Finitely generated groups with ordered symmetric generating sets.
//!
//! Four families are supported, each with a closed-form solution to its word
//! problem: free abelian groups with a torsion summand, free groups, free
//! products of cyclic groups, and finite groups given by multiplication
//! table. General finitely presented groups are out of scope (their word
//! problem is undecidable).
//!
//! Generators carry an explicit linear order; all shortlex machinery
//! (normal forms, ball enumeration, prefix audits) lives in [`ball`] and
//! [`comb`].

mod ball;
mod comb;

pub use ball::{CayleyBall, DEFAULT_ELEMENT_CAP};
pub use comb::{audit_combability, CombabilityReport, Witness};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A group element in the family's canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Free coordinates, then torsion coordinates (reduced mod their orders).
    Abelian(Vec<i64>, Vec<u32>),
    /// Freely reduced word over canonical letters; letter 2k is the k-th
    /// generator, letter 2k+1 its inverse.
    FreeWord(Vec<u32>),
    /// Alternating syllables (factor, exponent), exponent in 1..order.
    Syllables(Vec<(u32, u32)>),
    /// Index into a finite multiplication table.
    Index(usize),
}

#[derive(Debug, Clone)]
enum GenData {
    AbelianDelta { free: Vec<i64>, torsion: Vec<u32> },
    FreeLetter(u32),
    ProductSyllable { factor: u32, exp: u32 },
    TableElement(usize),
}

#[derive(Debug, Clone)]
struct Gen {
    name: String,
    data: GenData,
    /// Ordered index of this generator's inverse.
    inverse: usize,
}

#[derive(Debug, Clone)]
enum Family {
    FreeAbelian { rank: usize, torsion: Vec<u32> },
    Free { rank: usize },
    FreeProductCyclic { orders: Vec<u32> },
    FiniteTable { table: Vec<Vec<usize>>, inv: Vec<usize>, lengths: Vec<u64> },
}

/// A concrete group together with its ordered symmetric generating set.
#[derive(Debug, Clone)]
pub struct Group {
    family: Family,
    gens: Vec<Gen>,
}

/// Serialized form of a group plus ordered generating set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    FreeAbelian {
        rank: usize,
        #[serde(default)]
        torsion: Vec<u32>,
        #[serde(default)]
        generator_order: Option<Vec<String>>,
    },
    Free {
        rank: usize,
        #[serde(default)]
        generator_order: Option<Vec<String>>,
    },
    FreeProductCyclic {
        orders: Vec<u32>,
        #[serde(default)]
        generator_order: Option<Vec<String>>,
    },
    FiniteTable {
        table: Vec<Vec<usize>>,
        /// Element indices; the list order is the generator order.
        generators: Vec<usize>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

fn letter_name(k: usize, rank: usize) -> String {
    if rank <= 26 {
        let c = (b'a' + k as u8) as char;
        c.to_string()
    } else {
        format!("x{}", k + 1)
    }
}

/// Enumerates the nonzero vectors of a finite abelian product in
/// lexicographic order.
fn torsion_vectors(orders: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total: u64 = orders.iter().map(|&o| o as u64).product();
    let mut v = vec![0u32; orders.len()];
    for _ in 1..total {
        // increment little-endian on the last coordinate
        for i in (0..orders.len()).rev() {
            v[i] += 1;
            if v[i] < orders[i] {
                break;
            }
            v[i] = 0;
        }
        out.push(v.clone());
    }
    out.sort();
    out
}

impl Group {
    pub fn free_abelian(rank: usize, torsion: Vec<u32>) -> Result<Group> {
        if torsion.iter().any(|&o| o < 2) {
            return Err(Error::InvalidGroup("torsion orders must be >= 2".into()));
        }
        let tvecs = torsion_vectors(&torsion);
        let mut gens = Vec::new();
        for i in 0..rank {
            let mut plus = vec![0i64; rank];
            plus[i] = 1;
            let mut minus = vec![0i64; rank];
            minus[i] = -1;
            gens.push(Gen {
                name: format!("e{}", i + 1),
                data: GenData::AbelianDelta { free: plus, torsion: vec![0; torsion.len()] },
                inverse: 2 * i + 1,
            });
            gens.push(Gen {
                name: format!("e{}inv", i + 1),
                data: GenData::AbelianDelta { free: minus, torsion: vec![0; torsion.len()] },
                inverse: 2 * i,
            });
        }
        let base = gens.len();
        for (j, tv) in tvecs.iter().enumerate() {
            let neg: Vec<u32> = tv
                .iter()
                .zip(&torsion)
                .map(|(&x, &o)| if x == 0 { 0 } else { o - x })
                .collect();
            let inv_pos = tvecs.iter().position(|w| *w == neg).expect("negation is a nonzero vector");
            gens.push(Gen {
                name: format!("f{}", j + 1),
                data: GenData::AbelianDelta { free: vec![0; rank], torsion: tv.clone() },
                inverse: base + inv_pos,
            });
        }
        Ok(Group { family: Family::FreeAbelian { rank, torsion }, gens })
    }

    pub fn free(rank: usize) -> Result<Group> {
        let mut gens = Vec::new();
        for k in 0..rank {
            let name = letter_name(k, rank);
            gens.push(Gen {
                name: name.clone(),
                data: GenData::FreeLetter(2 * k as u32),
                inverse: 2 * k + 1,
            });
            gens.push(Gen {
                name: format!("{name}inv"),
                data: GenData::FreeLetter(2 * k as u32 + 1),
                inverse: 2 * k,
            });
        }
        Ok(Group { family: Family::Free { rank }, gens })
    }

    pub fn free_product_cyclic(orders: Vec<u32>) -> Result<Group> {
        if orders.iter().any(|&o| o < 2) {
            return Err(Error::InvalidGroup("cyclic factor orders must be >= 2".into()));
        }
        let mut gens = Vec::new();
        for (f, &o) in orders.iter().enumerate() {
            let at = gens.len();
            if o == 2 {
                gens.push(Gen {
                    name: format!("s{}", f + 1),
                    data: GenData::ProductSyllable { factor: f as u32, exp: 1 },
                    inverse: at,
                });
            } else {
                gens.push(Gen {
                    name: format!("s{}", f + 1),
                    data: GenData::ProductSyllable { factor: f as u32, exp: 1 },
                    inverse: at + 1,
                });
                gens.push(Gen {
                    name: format!("s{}inv", f + 1),
                    data: GenData::ProductSyllable { factor: f as u32, exp: o - 1 },
                    inverse: at,
                });
            }
        }
        Ok(Group { family: Family::FreeProductCyclic { orders }, gens })
    }

    pub fn finite_table(
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Group> {
        let (identity, inv) = table_axioms(&table)?;
        let n = table.len();
        if generators.is_empty() {
            return Err(Error::InvalidGroup("finite table needs a nonempty generating set".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &g in &generators {
            if g >= n {
                return Err(Error::InvalidGroup(format!("generator index {g} out of range")));
            }
            if g == identity {
                return Err(Error::InvalidGroup("identity cannot be a generator".into()));
            }
            if !seen.insert(g) {
                return Err(Error::InvalidGroup(format!("duplicate generator {g}")));
            }
        }
        for &g in &generators {
            if !generators.contains(&inv[g]) {
                return Err(Error::InvalidGroup(format!(
                    "generating set is not symmetric: inverse of {g} is missing"
                )));
            }
        }
        // Word lengths by breadth-first search; the set must generate.
        let mut lengths = vec![u64::MAX; n];
        lengths[identity] = 0;
        let mut queue = std::collections::VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &generators {
                let y = table[x][g];
                if lengths[y] == u64::MAX {
                    lengths[y] = lengths[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if lengths.contains(&u64::MAX) {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        let labels = match labels {
            Some(ls) => {
                if ls.len() != n {
                    return Err(Error::InvalidGroup("labels length must match table size".into()));
                }
                ls
            }
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let gens = generators
            .iter()
            .map(|&g| Gen {
                name: labels[g].clone(),
                data: GenData::TableElement(g),
                inverse: generators.iter().position(|&h| h == inv[g]).unwrap(),
            })
            .collect();
        Ok(Group { family: Family::FiniteTable { table, inv, lengths }, gens })
    }

    /// Builds from a serialized spec, applying any custom generator order.
    pub fn from_spec(spec: &GroupSpec) -> Result<Group> {
        let (mut group, order) = match spec {
            GroupSpec::FreeAbelian { rank, torsion, generator_order } => {
                (Group::free_abelian(*rank, torsion.clone())?, generator_order.clone())
            }
            GroupSpec::Free { rank, generator_order } => {
                (Group::free(*rank)?, generator_order.clone())
            }
            GroupSpec::FreeProductCyclic { orders, generator_order } => {
                (Group::free_product_cyclic(orders.clone())?, generator_order.clone())
            }
            GroupSpec::FiniteTable { table, generators, labels } => (
                Group::finite_table(table.clone(), generators.clone(), labels.clone())?,
                None,
            ),
        };
        if let Some(order) = order {
            group = group.with_generator_order(&order)?;
        }
        Ok(group)
    }

    /// Reorders the generating set by name. The list must be a permutation
    /// of the canonical generator names.
    pub fn with_generator_order(mut self, order: &[String]) -> Result<Group> {
        if order.len() != self.gens.len() {
            return Err(Error::InvalidGroup(format!(
                "generator order lists {} names, group has {} generators",
                order.len(),
                self.gens.len()
            )));
        }
        let mut perm = Vec::with_capacity(order.len());
        for name in order {
            let old = self
                .gens
                .iter()
                .position(|g| g.name == *name)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown generator {name:?}")))?;
            if perm.contains(&old) {
                return Err(Error::InvalidGroup(format!("generator {name:?} listed twice")));
            }
            perm.push(old);
        }
        let mut new_index = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        let gens = perm
            .iter()
            .map(|&old| {
                let g = self.gens[old].clone();
                Gen { inverse: new_index[g.inverse], ..g }
            })
            .collect();
        self.gens = gens;
        Ok(self)
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn generator_inverse(&self, i: usize) -> usize {
        self.gens[i].inverse
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            Family::FreeAbelian { rank, torsion } => {
                Element::Abelian(vec![0; *rank], vec![0; torsion.len()])
            }
            Family::Free { .. } => Element::FreeWord(Vec::new()),
            Family::FreeProductCyclic { .. } => Element::Syllables(Vec::new()),
            Family::FiniteTable { table, .. } => {
                let n = table.len();
                let e = (0..n)
                    .find(|&e| (0..n).all(|x| table[e][x] == x))
                    .expect("validated on construction");
                Element::Index(e)
            }
        }
    }

    /// Right multiplication by the i-th ordered generator.
    pub fn apply_gen(&self, e: &Element, i: usize) -> Element {
        match (&self.family, &self.gens[i].data, e) {
            (Family::FreeAbelian { torsion, .. }, GenData::AbelianDelta { free, torsion: dt }, Element::Abelian(v, t)) => {
                let nv = v.iter().zip(free).map(|(a, b)| a + b).collect();
                let nt = t
                    .iter()
                    .zip(dt)
                    .zip(torsion)
                    .map(|((a, b), &o)| (a + b) % o)
                    .collect();
                Element::Abelian(nv, nt)
            }
            (Family::Free { .. }, GenData::FreeLetter(l), Element::FreeWord(w)) => {
                let mut w = w.clone();
                if w.last() == Some(&(l ^ 1)) {
                    w.pop();
                } else {
                    w.push(*l);
                }
                Element::FreeWord(w)
            }
            (Family::FreeProductCyclic { orders }, GenData::ProductSyllable { factor, exp }, Element::Syllables(s)) => {
                let mut s = s.clone();
                push_syllable(&mut s, *factor, *exp, orders);
                Element::Syllables(s)
            }
            (Family::FiniteTable { table, .. }, GenData::TableElement(g), Element::Index(x)) => {
                Element::Index(table[*x][*g])
            }
            _ => unreachable!("element does not belong to this group"),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.family, a, b) {
            (Family::FreeAbelian { torsion, .. }, Element::Abelian(v1, t1), Element::Abelian(v2, t2)) => {
                let v = v1.iter().zip(v2).map(|(x, y)| x + y).collect();
                let t = t1
                    .iter()
                    .zip(t2)
                    .zip(torsion)
                    .map(|((x, y), &o)| (x + y) % o)
                    .collect();
                Element::Abelian(v, t)
            }
            (Family::Free { .. }, Element::FreeWord(u), Element::FreeWord(w)) => {
                let mut out = u.clone();
                for &l in w {
                    if out.last() == Some(&(l ^ 1)) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Element::FreeWord(out)
            }
            (Family::FreeProductCyclic { orders }, Element::Syllables(u), Element::Syllables(w)) => {
                let mut out = u.clone();
                for &(f, e) in w {
                    push_syllable(&mut out, f, e, orders);
                }
                Element::Syllables(out)
            }
            (Family::FiniteTable { table, .. }, Element::Index(x), Element::Index(y)) => {
                Element::Index(table[*x][*y])
            }
            _ => unreachable!("elements do not belong to this group"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (&self.family, a) {
            (Family::FreeAbelian { torsion, .. }, Element::Abelian(v, t)) => Element::Abelian(
                v.iter().map(|x| -x).collect(),
                t.iter().zip(torsion).map(|(&x, &o)| if x == 0 { 0 } else { o - x }).collect(),
            ),
            (Family::Free { .. }, Element::FreeWord(w)) => {
                Element::FreeWord(w.iter().rev().map(|&l| l ^ 1).collect())
            }
            (Family::FreeProductCyclic { orders }, Element::Syllables(s)) => Element::Syllables(
                s.iter().rev().map(|&(f, e)| (f, orders[f as usize] - e)).collect(),
            ),
            (Family::FiniteTable { inv, .. }, Element::Index(x)) => Element::Index(inv[*x]),
            _ => unreachable!("element does not belong to this group"),
        }
    }

    /// Exact word length |g| = d_S(g, identity), by the family's closed form.
    pub fn word_length(&self, e: &Element) -> u64 {
        match (&self.family, e) {
            (Family::FreeAbelian { .. }, Element::Abelian(v, t)) => {
                let free: u64 = v.iter().map(|x| x.unsigned_abs()).sum();
                free + u64::from(t.iter().any(|&x| x != 0))
            }
            (Family::Free { .. }, Element::FreeWord(w)) => w.len() as u64,
            (Family::FreeProductCyclic { orders }, Element::Syllables(s)) => s
                .iter()
                .map(|&(f, e)| u64::from(e.min(orders[f as usize] - e)))
                .sum(),
            (Family::FiniteTable { lengths, .. }, Element::Index(x)) => lengths[*x],
            _ => unreachable!("element does not belong to this group"),
        }
    }

    /// Exact word distance d_S(g, h) = |g^{-1} h|, not limited to any ball.
    pub fn distance(&self, a: &Element, b: &Element) -> u64 {
        self.word_length(&self.mul(&self.inv(a), b))
    }

    /// True iff the group is given by a finite multiplication table.
    pub fn is_finite_table(&self) -> bool {
        matches!(self.family, Family::FiniteTable { .. })
    }

    /// Short human-readable family description for reports.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::FreeAbelian { rank, torsion } if torsion.is_empty() => {
                format!("free_abelian(rank {rank})")
            }
            Family::FreeAbelian { rank, torsion } => {
                format!("free_abelian(rank {rank}, torsion {torsion:?})")
            }
            Family::Free { rank } => format!("free(rank {rank})"),
            Family::FreeProductCyclic { orders } => {
                format!("free_product_cyclic(orders {orders:?})")
            }
            Family::FiniteTable { table, .. } => format!("finite_table(order {})", table.len()),
        }
    }
}

/// Checks the group axioms for a multiplication table and returns the
/// identity index and the inverse of each element.
pub fn table_axioms(table: &[Vec<usize>]) -> Result<(usize, Vec<usize>)> {
    let n = table.len();
    if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidGroup("multiplication table must be square over 0..n".into()));
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    let mut inv = vec![usize::MAX; n];
    for a in 0..n {
        match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
            Some(b) => inv[a] = b,
            None => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
        }
    }
    Ok((identity, inv))
}

fn push_syllable(s: &mut Vec<(u32, u32)>, factor: u32, exp: u32, orders: &[u32]) {
    let o = orders[factor as usize];
    let exp = exp % o;
    if exp == 0 {
        return;
    }
    if let Some(&(lf, le)) = s.last() {
        if lf == factor {
            let ne = (le + exp) % o;
            s.pop();
            if ne != 0 {
                s.push((factor, ne));
            }
            return;
        }
    }
    s.push((factor, exp));
}

/// Multiplication table of the cyclic group Z_n.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_abelian_generators_and_inverses() {
        let g = Group::free_abelian(2, vec![]).unwrap();
        assert_eq!(g.generator_names(), vec!["e1", "e1inv", "e2", "e2inv"]);
        for i in 0..g.generator_count() {
            assert_eq!(g.generator_inverse(g.generator_inverse(i)), i);
        }
        let e = g.identity();
        let x = g.apply_gen(&e, 0);
        assert_eq!(x, Element::Abelian(vec![1, 0], vec![]));
        assert_eq!(g.word_length(&Element::Abelian(vec![2, -3], vec![])), 5);
    }

    #[test]
    fn torsion_part_costs_one_letter() {
        let g = Group::free_abelian(1, vec![2, 3]).unwrap();
        // nonzero torsion vectors of Z2 x Z3: 5 of them
        assert_eq!(g.generator_count(), 2 + 5);
        let e = g.identity();
        let f1 = g.apply_gen(&e, 2);
        assert_eq!(g.word_length(&f1), 1);
        let mixed = Element::Abelian(vec![-2], vec![1, 2]);
        assert_eq!(g.word_length(&mixed), 3);
        // inverse pairing within the torsion block
        for i in 0..g.generator_count() {
            let x = g.apply_gen(&e, i);
            let xi = g.apply_gen(&e, g.generator_inverse(i));
            assert_eq!(g.mul(&x, &xi), e);
        }
    }

    #[test]
    fn free_group_reduction() {
        let g = Group::free(2).unwrap();
        assert_eq!(g.generator_names(), vec!["a", "ainv", "b", "binv"]);
        let e = g.identity();
        let a = g.apply_gen(&e, 0);
        let ab = g.apply_gen(&a, 2);
        let aba_inv = g.apply_gen(&ab, 1);
        assert_eq!(aba_inv, Element::FreeWord(vec![0, 2, 1]));
        assert_eq!(g.mul(&a, &g.inv(&a)), e);
        // d(ab, ba) = |b^{-1} a^{-1} b a| = 4
        let b = g.apply_gen(&e, 2);
        let ba = g.apply_gen(&b, 0);
        assert_eq!(g.distance(&ab, &ba), 4);
    }

    #[test]
    fn free_product_syllables() {
        let g = Group::free_product_cyclic(vec![2, 3]).unwrap();
        assert_eq!(g.generator_names(), vec!["s1", "s2", "s2inv"]);
        let e = g.identity();
        let s2 = g.apply_gen(&e, 1);
        let s2s2 = g.apply_gen(&s2, 1);
        // s2^2 = s2inv as an element; its geodesic cost is one letter
        assert_eq!(s2s2, Element::Syllables(vec![(1, 2)]));
        assert_eq!(g.word_length(&s2s2), 1);
        let s2s2s2 = g.apply_gen(&s2s2, 1);
        assert_eq!(s2s2s2, e);
        assert_eq!(g.inv(&s2s2), s2);
    }

    #[test]
    fn finite_table_validation() {
        let z4 = Group::finite_table(cyclic_table(4), vec![1, 3], None).unwrap();
        assert_eq!(z4.word_length(&Element::Index(2)), 2);
        assert_eq!(z4.word_length(&Element::Index(3)), 1);

        // asymmetric generating set rejected
        assert!(Group::finite_table(cyclic_table(4), vec![1], None).is_err());
        // non-generating set rejected
        assert!(Group::finite_table(cyclic_table(4), vec![2], None).is_err());
        // broken table rejected
        let mut bad = cyclic_table(3);
        bad[1][2] = 1;
        assert!(Group::finite_table(bad, vec![1, 2], None).is_err());
    }

    #[test]
    fn generator_order_permutation() {
        let g = Group::free(1)
            .unwrap()
            .with_generator_order(&["ainv".into(), "a".into()])
            .unwrap();
        assert_eq!(g.generator_names(), vec!["ainv", "a"]);
        assert_eq!(g.generator_inverse(0), 1);
        let e = g.identity();
        assert_eq!(g.apply_gen(&e, 0), Element::FreeWord(vec![1]));
        assert!(Group::free(1)
            .unwrap()
            .with_generator_order(&["a".into(), "zz".into()])
            .is_err());
    }

    #[test]
    fn group_spec_json_round_trip() {
        let js = r#"{"family":"free_abelian","rank":2,"torsion":[],"generator_order":["e1","e1inv","e2","e2inv"]}"#;
        let spec: GroupSpec = serde_json::from_str(js).unwrap();
        let g = Group::from_spec(&spec).unwrap();
        assert_eq!(g.generator_count(), 4);

        let js = r#"{"family":"free_product_cyclic","orders":[2,2,2]}"#;
        let spec: GroupSpec = serde_json::from_str(js).unwrap();
        let g = Group::from_spec(&spec).unwrap();
        assert_eq!(g.generator_names(), vec!["s1", "s2", "s3"]);

        let js = r#"{"family":"finite_table","table":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],"generators":[1,3]}"#;
        let spec: GroupSpec = serde_json::from_str(js).unwrap();
        let g = Group::from_spec(&spec).unwrap();
        assert_eq!(g.generator_count(), 2);
        assert!(g.is_finite_table());
    }
}
