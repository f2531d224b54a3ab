//! Tree automorphisms checked against their action as permutations of the
//! leaves.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arboreal::tree::{enumerate, SubgroupGens, TreeAut};

fn leaves(depth: usize) -> Vec<Vec<bool>> {
    (0..1usize << depth)
        .map(|x| (0..depth).rev().map(|i| x >> i & 1 == 1).collect())
        .collect()
}

fn as_perm(g: &TreeAut) -> Vec<usize> {
    let index = |l: &[bool]| l.iter().fold(0, |a, &b| 2 * a + b as usize);
    leaves(g.depth())
        .iter()
        .map(|l| index(&g.act(l).unwrap()))
        .collect()
}

fn aut(depth: usize) -> impl Strategy<Value = TreeAut> {
    any::<u64>().prop_map(move |seed| TreeAut::random(depth, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn commutator(a: &TreeAut, b: &TreeAut) -> TreeAut {
    a.compose(b)
        .unwrap()
        .compose(&a.inverse())
        .unwrap()
        .compose(&b.inverse())
        .unwrap()
}

proptest! {
    #[test]
    fn compose_is_permutation_product(g in aut(4), h in aut(4)) {
        let (pg, ph) = (as_perm(&g), as_perm(&h));
        let expected: Vec<usize> = ph.iter().map(|&i| pg[i]).collect();
        prop_assert_eq!(as_perm(&g.compose(&h).unwrap()), expected);
    }

    #[test]
    fn inverse_is_permutation_inverse(g in aut(5)) {
        let p = as_perm(&g);
        let q = as_perm(&g.inverse());
        for (i, &j) in p.iter().enumerate() {
            prop_assert_eq!(q[j], i);
        }
    }

    #[test]
    fn associativity(a in aut(4), b in aut(4), c in aut(4)) {
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn phi_is_a_homomorphism(a in aut(5), b in aut(5), k in 1usize..=5) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.phi(k).unwrap(), a.phi(k).unwrap() ^ b.phi(k).unwrap());
    }

    #[test]
    fn tilde_phi_is_a_homomorphism_on_commutators(
        a in aut(4), b in aut(4), c in aut(4), d in aut(4), k in 2usize..=4
    ) {
        let x = commutator(&a, &b);
        let y = commutator(&c, &d);
        let xy = x.compose(&y).unwrap();
        prop_assert_eq!(xy.tilde_phi(k).unwrap(), x.tilde_phi(k).unwrap() ^ y.tilde_phi(k).unwrap());
    }

    #[test]
    fn restriction_matches_subtree_action(g in aut(4), w in 0usize..2) {
        // Force g to fix the level-1 node w.
        let mut g = g;
        g.set(1, 0, false);
        let node = vec![w == 1];
        let r = g.restrict(&node).unwrap();
        for leaf in leaves(3) {
            let mut full = node.clone();
            full.extend(&leaf);
            let image = g.act(&full).unwrap();
            prop_assert_eq!(&image[..1], &node[..]);
            prop_assert_eq!(image[1..].to_vec(), r.act(&leaf).unwrap());
        }
    }

    #[test]
    fn truncation_is_a_homomorphism(a in aut(5), b in aut(5), m in 1usize..=5) {
        let l = a.compose(&b).unwrap().truncate(m);
        let r = a.truncate(m).compose(&b.truncate(m)).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn enumeration_sizes() {
    assert_eq!(enumerate(1).len(), 2);
    assert_eq!(enumerate(2).len(), 8);
    assert_eq!(enumerate(3).len(), 128);
}

#[test]
fn closure_matches_brute_force_orbit() {
    let all = enumerate(3);
    let gens = vec![all[37].clone(), all[101].clone()];
    let closed = SubgroupGens::new(gens.clone()).unwrap().closure(200).unwrap();
    for x in &closed {
        for g in &gens {
            assert!(closed.contains(&x.compose(g).unwrap()));
        }
    }
    assert!(128 % closed.len() == 0);
}

#[test]
fn faithful_nodes_of_level_one_subgroup() {
    let a = TreeAut::from_strings(&["0", "10", "0000"]).unwrap();
    let b = TreeAut::from_strings(&["0", "00", "1100"]).unwrap();
    let s = SubgroupGens::new(vec![a, b]).unwrap();
    assert_eq!(s.level().unwrap(), 1);
    assert_eq!(s.faithful_nodes().unwrap(), vec![vec![false]]);
}
