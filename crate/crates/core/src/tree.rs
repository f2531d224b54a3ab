//! Truncated automorphism groups `Omega_n` of the rooted binary tree.
//!
//! An automorphism of depth `n` is stored by its portrait: one swap bit per
//! internal node. Nodes of level `k` (the root is level 1) are indexed by the
//! integer value of their `k-1`-bit path prefix, most significant bit first,
//! and stored at heap position `2^(k-1) - 1 + j`.
//!
//! Composition is functional: `compose(g, h)` acts as `h` first, then `g`,
//! and its label at node `w` is `label_h(w) ^ label_g(h(w))`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index_sets::IndexVector;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAut {
    depth: usize,
    bits: Vec<u64>,
}

fn node_index(level: usize, j: usize) -> usize {
    (1usize << (level - 1)) - 1 + j
}

/// Number of internal nodes of a depth-`n` tree: `2^n - 1`.
pub fn node_count(depth: usize) -> usize {
    (1usize << depth) - 1
}

impl TreeAut {
    pub fn identity(depth: usize) -> Self {
        assert!((1..28).contains(&depth), "depth out of supported range");
        TreeAut {
            depth,
            bits: vec![0; node_count(depth).div_ceil(64)],
        }
    }

    /// The element whose heap-ordered portrait bits are the binary digits of
    /// `code`; enumerates `Omega_n` for `n <= 6`.
    pub fn from_code(depth: usize, code: u64) -> Self {
        assert!(node_count(depth) <= 64);
        let mut g = Self::identity(depth);
        g.bits[0] = code;
        g
    }

    /// Builds a portrait from per-level bitstrings such as `["1", "10"]`.
    pub fn from_strings<S: AsRef<str>>(levels: &[S]) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Parse("portrait needs at least one level".into()));
        }
        let mut g = Self::identity(levels.len());
        for (k, s) in levels.iter().enumerate() {
            let s = s.as_ref();
            if s.len() != 1 << k {
                return Err(Error::Parse(format!(
                    "level {} needs {} bits, got {s:?}",
                    k + 1,
                    1 << k
                )));
            }
            for (j, ch) in s.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => g.set(k + 1, j, true),
                    _ => return Err(Error::Parse(format!("bad portrait bit {ch:?}"))),
                }
            }
        }
        Ok(g)
    }

    /// Root swap with every other label zero.
    pub fn root_swap(depth: usize) -> Self {
        let mut g = Self::identity(depth);
        g.set(1, 0, true);
        g
    }

    /// Single swap at the `j`-th node of `level`.
    pub fn node_swap(depth: usize, level: usize, j: usize) -> Self {
        let mut g = Self::identity(depth);
        g.set(level, j, true);
        g
    }

    pub fn random<R: Rng>(depth: usize, rng: &mut R) -> Self {
        let mut g = Self::identity(depth);
        for w in g.bits.iter_mut() {
            *w = rng.gen();
        }
        let n = node_count(depth);
        if !n.is_multiple_of(64) {
            let last = g.bits.len() - 1;
            g.bits[last] &= (1u64 << (n % 64)) - 1;
        }
        g
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set_bit(&mut self, i: usize, v: bool) {
        if v {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Swap bit of node `j` on `level` (1-based).
    pub fn label(&self, level: usize, j: usize) -> bool {
        self.bit(node_index(level, j))
    }

    pub fn set(&mut self, level: usize, j: usize, v: bool) {
        assert!(level >= 1 && level <= self.depth && j < 1 << (level - 1));
        self.set_bit(node_index(level, j), v);
    }

    pub fn level_bits(&self, level: usize) -> Vec<bool> {
        (0..1 << (level - 1)).map(|j| self.label(level, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Image of every node under `self`, as level-local indices in heap order.
    /// Leaves are not included.
    fn node_images(&self) -> Vec<usize> {
        let mut img = vec![0usize; node_count(self.depth)];
        for level in 1..self.depth {
            for j in 0..1 << (level - 1) {
                let i = img[node_index(level, j)];
                let s = self.label(level, j) as usize;
                for b in 0..2 {
                    img[node_index(level + 1, 2 * j + b)] = 2 * i + (b ^ s);
                }
            }
        }
        img
    }

    /// Image of a node given by its path.
    pub fn image_of_node(&self, path: &[bool]) -> Vec<bool> {
        let mut out = Vec::with_capacity(path.len());
        let mut j = 0usize;
        for (i, &b) in path.iter().enumerate() {
            out.push(b ^ self.label(i + 1, j));
            j = 2 * j + b as usize;
        }
        out
    }

    /// Action on a leaf: bit `i` flips when the node at the leaf's own
    /// `i-1`-prefix carries a swap.
    pub fn act(&self, leaf: &[bool]) -> Result<Vec<bool>> {
        if leaf.len() != self.depth {
            return Err(Error::LengthMismatch {
                got: leaf.len(),
                expected: self.depth,
            });
        }
        Ok(self.image_of_node(leaf))
    }

    pub fn compose(&self, h: &TreeAut) -> Result<TreeAut> {
        if self.depth != h.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: h.depth,
            });
        }
        let img = h.node_images();
        let mut out = TreeAut::identity(self.depth);
        for level in 1..=self.depth {
            let base = node_index(level, 0);
            for j in 0..1 << (level - 1) {
                let v = h.label(level, j) ^ self.label(level, img[base + j]);
                out.set_bit(base + j, v);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> TreeAut {
        // label_inv(w) = label_g(inv(w)), computed top-down.
        let mut out = TreeAut::identity(self.depth);
        let mut img = vec![0usize; node_count(self.depth)];
        for level in 1..=self.depth {
            for j in 0..1 << (level - 1) {
                let i = img[node_index(level, j)];
                let s = self.label(level, i);
                out.set(level, j, s);
                if level < self.depth {
                    for b in 0..2usize {
                        img[node_index(level + 1, 2 * j + b)] = 2 * i + (b ^ s as usize);
                    }
                }
            }
        }
        out
    }

    /// Character summing the level-`k` swap bits.
    pub fn phi(&self, k: usize) -> Result<bool> {
        self.check_level(k)?;
        Ok(self.level_bits(k).into_iter().fold(false, |a, b| a ^ b))
    }

    pub fn abelianization(&self) -> Vec<bool> {
        (1..=self.depth).map(|k| self.phi(k).expect("in range")).collect()
    }

    /// Sum of the first half of the level-`k` bits; a character of the
    /// commutator subgroup for `2 <= k <= depth`.
    pub fn tilde_phi(&self, k: usize) -> Result<bool> {
        self.check_level(k)?;
        if k < 2 {
            return Err(Error::OutOfRange {
                index: k,
                depth: self.depth,
            });
        }
        if self.abelianization().iter().any(|&b| b) {
            return Err(Error::NotInCommutator);
        }
        Ok((0..1 << (k - 2)).fold(false, |a, j| a ^ self.label(k, j)))
    }

    /// Membership in the maximal subgroup `M_v = ker(sum_i v_i phi_i)`.
    pub fn in_mv(&self, v: &IndexVector) -> Result<bool> {
        let mut acc = false;
        for i in v.iter() {
            acc ^= self.phi(i as usize)?;
        }
        Ok(!acc)
    }

    /// Portrait of the subtree below `w`, provided `self` fixes `w`.
    pub fn restrict(&self, w: &[bool]) -> Result<TreeAut> {
        if w.len() >= self.depth {
            return Err(Error::OutOfRange {
                index: w.len(),
                depth: self.depth - 1,
            });
        }
        if self.image_of_node(w) != w {
            return Err(Error::NodeMoved {
                node: path_string(w),
            });
        }
        let offset = w.iter().fold(0usize, |acc, &b| 2 * acc + b as usize);
        let sub_depth = self.depth - w.len();
        let mut out = TreeAut::identity(sub_depth);
        for level in 1..=sub_depth {
            let global_level = level + w.len();
            let shift = level - 1;
            for j in 0..1 << shift {
                out.set(level, j, self.label(global_level, (offset << shift) + j));
            }
        }
        Ok(out)
    }

    /// Image in `Omega_m` for `m <= depth`.
    pub fn truncate(&self, m: usize) -> TreeAut {
        assert!(m >= 1 && m <= self.depth);
        let mut out = TreeAut::identity(m);
        for i in 0..node_count(m) {
            out.set_bit(i, self.bit(i));
        }
        out
    }

    pub fn commutes_with(&self, o: &TreeAut) -> bool {
        self.compose(o).expect("same depth") == o.compose(self).expect("same depth")
    }

    pub fn to_strings(&self) -> Vec<String> {
        (1..=self.depth)
            .map(|k| {
                self.level_bits(k)
                    .into_iter()
                    .map(|b| if b { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.depth {
            return Err(Error::OutOfRange {
                index: k,
                depth: self.depth,
            });
        }
        Ok(())
    }
}

impl fmt::Display for TreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(","))
    }
}

impl Serialize for TreeAut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

pub fn path_string(w: &[bool]) -> String {
    if w.is_empty() {
        return "root".into();
    }
    w.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_path(s: &str) -> Result<Vec<bool>> {
    if s == "root" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad path {s:?}"))),
        })
        .collect()
}

/// All of `Omega_n`, `n <= 4`, in code order.
pub fn enumerate(depth: usize) -> Vec<TreeAut> {
    assert!(depth <= 4, "exhaustive enumeration is limited to depth 4");
    (0..1u64 << node_count(depth))
        .map(|c| TreeAut::from_code(depth, c))
        .collect()
}

/// Generators of a subgroup of `Omega_n`.
#[derive(Debug, Clone)]
pub struct SubgroupGens {
    depth: usize,
    gens: Vec<TreeAut>,
}

impl SubgroupGens {
    pub fn new(gens: Vec<TreeAut>) -> Result<Self> {
        let Some(first) = gens.first() else {
            return Err(Error::Precondition("at least one generator".into()));
        };
        let depth = first.depth;
        if let Some(g) = gens.iter().find(|g| g.depth != depth) {
            return Err(Error::DepthMismatch {
                left: depth,
                right: g.depth,
            });
        }
        Ok(Self { depth, gens })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gens(&self) -> &[TreeAut] {
        &self.gens
    }

    /// The generated subgroup, by breadth-first closure under right
    /// multiplication with generators.
    pub fn closure(&self, cap: usize) -> Result<BTreeSet<TreeAut>> {
        let id = TreeAut::identity(self.depth);
        let mut seen: HashSet<TreeAut> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = x.compose(g)?;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Least `n` such that the image in `Omega_{n+1}` is nontrivial.
    pub fn level(&self) -> Result<usize> {
        (1..=self.depth)
            .find(|&k| self.gens.iter().any(|g| g.level_bits(k).contains(&true)))
            .map(|k| k - 1)
            .ok_or(Error::TrivialSubgroup)
    }

    /// Nodes at distance `level` from the root below which some element
    /// swaps the two subtrees. On the level's nodes the group acts
    /// trivially, so the swap bits there add up along products and the
    /// generators suffice.
    pub fn faithful_nodes(&self) -> Result<Vec<Vec<bool>>> {
        let n = self.level()?;
        let mut out = Vec::new();
        for j in 0..1usize << n {
            if self.gens.iter().any(|g| g.label(n + 1, j)) {
                out.push((0..n).rev().map(|i| j >> i & 1 == 1).collect());
            }
        }
        Ok(out)
    }
}

/// Ordered pairs `(sigma, tau)` with `phi_1(tau) = 1`, abelianization of
/// `sigma` outside `{0, ab(tau)}`, that nevertheless commute.
#[derive(Debug, Clone, Serialize)]
pub struct NoncommutationReport {
    pub depth: usize,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub counterexamples: Vec<(TreeAut, TreeAut)>,
}

fn noncommutation_hypothesis(sigma: &TreeAut, tau: &TreeAut) -> bool {
    if !tau.label(1, 0) {
        return false;
    }
    let a = sigma.abelianization();
    a.iter().any(|&b| b) && a != tau.abelianization()
}

/// Exhaustive check over all ordered pairs of `Omega_n`, `n <= 3`.
pub fn verify_noncommutation(depth: usize) -> Result<NoncommutationReport> {
    if depth > 3 {
        return Err(Error::Precondition(
            "exhaustive check is limited to depth 3; use the sampled variant".into(),
        ));
    }
    let all = enumerate(depth);
    let mut counterexamples = Vec::new();
    let mut pairs = 0u64;
    for sigma in &all {
        for tau in &all {
            pairs += 1;
            if noncommutation_hypothesis(sigma, tau) && sigma.commutes_with(tau) {
                counterexamples.push((sigma.clone(), tau.clone()));
            }
        }
    }
    Ok(NoncommutationReport {
        depth,
        exhaustive: true,
        pairs_checked: pairs,
        counterexamples,
    })
}

/// Seeded sampling of pairs satisfying the hypothesis; `tau` is drawn with
/// its root bit forced on.
pub fn verify_noncommutation_sampled(depth: usize, samples: u64, seed: u64) -> NoncommutationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    let mut pairs = 0u64;
    while pairs < samples {
        let sigma = TreeAut::random(depth, &mut rng);
        let mut tau = TreeAut::random(depth, &mut rng);
        tau.set(1, 0, true);
        if !noncommutation_hypothesis(&sigma, &tau) {
            continue;
        }
        pairs += 1;
        if sigma.commutes_with(&tau) {
            counterexamples.push((sigma, tau));
        }
    }
    NoncommutationReport {
        depth,
        exhaustive: false,
        pairs_checked: pairs,
        counterexamples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        parse_path(s).unwrap()
    }

    fn t(levels: &[&str]) -> TreeAut {
        TreeAut::from_strings(levels).unwrap()
    }

    #[test]
    fn act_examples() {
        assert_eq!(TreeAut::root_swap(2).act(&bits("00")).unwrap(), bits("10"));
        assert_eq!(TreeAut::identity(3).act(&bits("101")).unwrap(), bits("101"));
        // Bit 2 flips because the node at the original prefix "0" swaps.
        assert_eq!(t(&["1", "10"]).act(&bits("01")).unwrap(), bits("10"));
        assert_eq!(t(&["1", "10"]).act(&bits("11")).unwrap(), bits("01"));
        assert!(TreeAut::identity(2).act(&bits("1")).is_err());
    }

    #[test]
    fn compose_examples() {
        let g = t(&["1", "10", "0110"]);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        let r = TreeAut::root_swap(3);
        assert!(r.compose(&r).unwrap().is_identity());
        assert!(TreeAut::identity(2).compose(&TreeAut::identity(3)).is_err());
    }

    #[test]
    fn phi_examples() {
        assert!(TreeAut::root_swap(3).phi(1).unwrap());
        for k in 1..=3 {
            assert!(!TreeAut::identity(3).phi(k).unwrap());
        }
        assert!(TreeAut::identity(3).phi(4).is_err());
        assert_eq!(TreeAut::root_swap(3).abelianization(), vec![true, false, false]);
    }

    #[test]
    fn tilde_phi_on_commutator() {
        let a = TreeAut::root_swap(2);
        let b = t(&["0", "10"]);
        // a b a^-1 b^-1 moves the swap to the other node and adds it back.
        let comm = a
            .compose(&b)
            .unwrap()
            .compose(&a.inverse())
            .unwrap()
            .compose(&b.inverse())
            .unwrap();
        assert_eq!(comm, t(&["0", "11"]));
        assert!(comm.tilde_phi(2).unwrap());
        assert!(!TreeAut::identity(3).tilde_phi(2).unwrap());
        assert_eq!(a.tilde_phi(2), Err(Error::NotInCommutator));
    }

    #[test]
    fn mv_membership() {
        let v1 = IndexVector::from_indices([1]);
        assert!(TreeAut::identity(3).in_mv(&v1).unwrap());
        assert!(!TreeAut::root_swap(3).in_mv(&v1).unwrap());
        assert!(TreeAut::root_swap(3).in_mv(&IndexVector::zero()).unwrap());
        assert!(TreeAut::root_swap(3).in_mv(&IndexVector::from_indices([5])).is_err());
    }

    #[test]
    fn closure_examples() {
        let one = SubgroupGens::new(vec![TreeAut::root_swap(1)]).unwrap();
        assert_eq!(one.closure(10).unwrap().len(), 2);
        let mut singles = Vec::new();
        for level in 1..=3 {
            for j in 0..1 << (level - 1) {
                singles.push(TreeAut::node_swap(3, level, j));
            }
        }
        let all = SubgroupGens::new(singles).unwrap();
        assert_eq!(all.closure(1000).unwrap().len(), 128);
        assert_eq!(all.closure(100), Err(Error::CapExceeded { cap: 100 }));
        let triv = SubgroupGens::new(vec![TreeAut::identity(3)]).unwrap();
        assert_eq!(triv.closure(10).unwrap().len(), 1);
    }

    #[test]
    fn levels_and_faithful_nodes() {
        let s = SubgroupGens::new(vec![TreeAut::root_swap(3)]).unwrap();
        assert_eq!(s.level().unwrap(), 0);
        assert_eq!(s.faithful_nodes().unwrap(), vec![Vec::<bool>::new()]);
        let s = SubgroupGens::new(vec![t(&["0", "10"])]).unwrap();
        assert_eq!(s.level().unwrap(), 1);
        assert_eq!(s.faithful_nodes().unwrap(), vec![bits("0")]);
        let s = SubgroupGens::new(vec![t(&["0", "11"])]).unwrap();
        assert_eq!(s.faithful_nodes().unwrap(), vec![bits("0"), bits("1")]);
        let s = SubgroupGens::new(vec![TreeAut::identity(2)]).unwrap();
        assert_eq!(s.level(), Err(Error::TrivialSubgroup));
    }

    #[test]
    fn restriction() {
        assert!(TreeAut::identity(3).restrict(&bits("01")).unwrap().is_identity());
        assert_eq!(
            t(&["0", "10"]).restrict(&bits("0")).unwrap(),
            TreeAut::root_swap(1)
        );
        assert_eq!(
            t(&["0", "01", "0010"]).restrict(&bits("1")).unwrap(),
            t(&["1", "10"])
        );
        assert!(matches!(
            TreeAut::root_swap(2).restrict(&bits("0")),
            Err(Error::NodeMoved { .. })
        ));
    }

    #[test]
    fn noncommutation_small_depths() {
        for depth in 1..=2 {
            let r = verify_noncommutation(depth).unwrap();
            assert!(r.counterexamples.is_empty(), "depth {depth}");
        }
        assert_eq!(verify_noncommutation(2).unwrap().pairs_checked, 64);
        assert!(verify_noncommutation(4).is_err());
    }

    #[test]
    fn serialization() {
        let g = t(&["1", "10", "1001"]);
        assert_eq!(g.to_strings(), vec!["1", "10", "1001"]);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"["1","10","1001"]"#);
        assert!(TreeAut::from_strings(&["1", "1"]).is_err());
    }
}
