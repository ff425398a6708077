use std::collections::BTreeSet;
use std::sync::Arc;

use pregalois::amalgam::ACategory;
use pregalois::gsets::{
    coequalizer, fiber_product, image, kernel_pair, FiniteGroup, TransitiveCategory,
};
use pregalois::permlab::{
    contains_pattern, find_pattern, inflation, is_separable_by_avoidance,
    is_separable_by_decomposition, Permutation,
};
use pregalois::relstruct::{canonical_form, Signature, Structure};
use proptest::prelude::*;

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_len)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn graph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rel.push(vec![i, j]);
                        rel.push(vec![j, i]);
                    }
                    k += 1;
                }
            }
            let sig = Signature::new([("edge", 2)]).unwrap();
            Structure::new(sig, n, vec![rel]).unwrap()
        })
    })
}

fn s4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(4).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn separability_two_ways(sigma in permutation(8)) {
        prop_assert_eq!(
            is_separable_by_avoidance(&sigma),
            is_separable_by_decomposition(&sigma)
        );
    }

    #[test]
    fn inflation_contains_its_parts(
        sigma in permutation(4),
        blocks in proptest::collection::vec(permutation(3), 4),
    ) {
        let blocks = &blocks[..sigma.len()];
        let inflated = inflation(&sigma, blocks).unwrap();
        let total: usize = blocks.iter().map(Permutation::len).sum();
        prop_assert_eq!(inflated.len(), total);
        prop_assert!(contains_pattern(&inflated, &sigma));
        for b in blocks {
            prop_assert!(contains_pattern(&inflated, b));
        }
    }

    #[test]
    fn occurrences_spell_the_pattern(
        sigma in permutation(7),
        keep in proptest::collection::vec(any::<bool>(), 7),
    ) {
        let positions: Vec<usize> = (0..sigma.len()).filter(|&i| keep[i]).collect();
        prop_assume!(!positions.is_empty());
        let tau = sigma.pattern_at(&positions);
        let found = find_pattern(&sigma, &tau).unwrap();
        prop_assert_eq!(sigma.pattern_at(&found), tau);
        prop_assert!(found <= positions);
    }

    #[test]
    fn canonical_form_ignores_labels(x in graph(6), seed in any::<u64>()) {
        let n = x.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let y = x.relabel(&perm);
        prop_assert_eq!(canonical_form(&x).structure, canonical_form(&y).structure);
    }

    #[test]
    fn group_laws(gens in proptest::collection::vec(
        Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), 1..3)
    ) {
        let g = FiniteGroup::from_generators(4, gens).unwrap();
        let n = g.order();
        prop_assert_eq!(24 % n, 0);
        for a in 0..n {
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in 0..n {
                for c in [0, n / 2, n - 1] {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        for h in g.all_subgroups().unwrap() {
            prop_assert_eq!(g.index(&h) * h.order(), n);
        }
    }

    #[test]
    fn double_cosets_count_orbits(u in 0usize..11, v in 0usize..11) {
        let g = s4();
        let cat = TransitiveCategory::full(g.clone()).unwrap();
        let (u, v) = (cat.subgroup(u).clone(), cat.subgroup(v).clone());
        let pairs: BTreeSet<Vec<usize>> = (0..g.order())
            .map(|a| {
                (0..g.order())
                    .map(|x| {
                        let y = g.mul(x, a);
                        let ku = g.coset_rep(x, &u);
                        let kv = g.coset_rep(y, &v);
                        ku * g.order() + kv
                    })
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            })
            .collect();
        prop_assert_eq!(g.double_coset_count(&u, &v), pairs.len());
    }

    #[test]
    fn set_level_limits(x in 0usize..11, y in 0usize..11, z in 0usize..11, i in any::<usize>(), j in any::<usize>()) {
        let g = s4();
        let cat = TransitiveCategory::full(g).unwrap();
        // maps z -> x of the opposite category are G-maps G/U_x -> G/U_z
        let fs = cat.hom(&z, &x).unwrap();
        let gs = cat.hom(&z, &y).unwrap();
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let f = cat.g_map(&fs[i % fs.len()]);
        let h = cat.g_map(&gs[j % gs.len()]);
        let (p, p1, p2) = fiber_product(&f, &h).unwrap();
        let pairs = (0..f.source.len())
            .flat_map(|a| (0..h.source.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| f.map[a] == h.map[b])
            .count();
        prop_assert_eq!(p.len(), pairs);
        prop_assert_eq!(f.after(&p1).unwrap().map, h.after(&p2).unwrap().map);

        let (_, k1, k2) = kernel_pair(&f).unwrap();
        let (q, _) = coequalizer(&k1, &k2).unwrap();
        let (im, _, _) = image(&f).unwrap();
        prop_assert_eq!(q.len(), im.len());
        prop_assert!(q.is_isomorphic(&im));
    }
}
