//! Randomized laws for the perturbation, hull and group routines.

mod common;

use std::collections::BTreeSet;

use isoforge::doubling::zoo;
use isoforge::groups::{find_isomorphism, group_from_perm_list, structure_report, DEFAULT_ISO_CAP};
use isoforge::hull::{pair_classes, symmetrized_hull, DEFAULT_BUDGET};
use isoforge::io::{parse_metric_file, write_metric_file};
use isoforge::metrics::invariantize;
use isoforge::perturb::{class_values, lip_bump, separate_orbits, PairSet, Scheme};
use isoforge::rational::{format, frac, int, parse};
use isoforge::{FiniteGroup, GroupAction, Perm, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{naive_lip, random_metric};

const ACTIONS: [&str; 8] = [
    "L:cyclic:2",
    "L:cyclic:3",
    "L:boolean:2",
    "L:cyclic:4",
    "L:cyclic:5",
    "L:sym:3",
    "N:sym:3",
    "N:dihedral:4",
];

fn action(i: usize) -> GroupAction {
    let (kind, name) = ACTIONS[i].split_at(2);
    let entry = zoo(name).unwrap();
    match kind {
        "L:" => entry.group.left_regular_action(),
        _ => entry.action.unwrap(),
    }
}

fn epsilon(i: usize) -> Rational {
    [frac(1, 2), frac(1, 10), frac(1, 37), frac(1, 1000)][i].clone()
}

fn relabel(g: &FiniteGroup, sigma: &[usize]) -> FiniteGroup {
    // sigma maps old labels to new ones.
    let n = g.order();
    let mut inv = vec![0; n];
    for (old, &new) in sigma.iter().enumerate() {
        inv[new] = old;
    }
    let table = (0..n)
        .map(|a| (0..n).map(|b| sigma[g.mul(inv[a], inv[b])]).collect())
        .collect();
    FiniteGroup::from_cayley(table, sigma[g.identity()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariantize_laws(seed in any::<u64>(), which in 0..ACTIONS.len()) {
        let a = action(which);
        let rho = random_metric(&mut ChaCha8Rng::seed_from_u64(seed), a.degree());
        let d = invariantize(&rho, &a).unwrap();
        prop_assert!(d.is_invariant_under(&a));
        prop_assert!(rho.le(&d));
        prop_assert_eq!(&invariantize(&d, &a).unwrap(), &d);
        let part = pair_classes(&a);
        for class in part.classes() {
            let (x0, y0) = class[0];
            prop_assert!(class.iter().all(|&(x, y)| d.get(x, y) == d.get(x0, y0)));
        }
        // Monotone: a pointwise larger input gives a pointwise larger output.
        let doubled = rho.scaled(&int(2));
        prop_assert!(d.le(&invariantize(&doubled, &a).unwrap()));
    }

    #[test]
    fn bump_properties(
        seed in any::<u64>(),
        n in 3usize..=7,
        e in 0usize..4,
        pick in any::<u64>(),
        nforbid in 0usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_metric(&mut rng, n);
        let a = (pick % n as u64) as usize;
        let b = (a + 1 + (pick / 7 % (n as u64 - 1)) as usize) % n;
        let mut k = PairSet::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && (x, y) != (a, b) && (y, x) != (a, b) && (x + 2 * y + seed as usize) % 3 != 0 {
                    k.insert((x, y));
                    k.insert((y, x));
                }
            }
        }
        prop_assume!(!k.is_empty());
        let forbidden: BTreeSet<Rational> = (0..nforbid)
            .flat_map(|i| (0..n).map(move |x| (i, x)))
            .map(|(i, x)| rho.get(x, (x + i + 1) % n).clone())
            .collect();
        let eps = epsilon(e);
        let bump = lip_bump(&rho, a, b, &k, &eps, &forbidden).unwrap();
        bump.verify(&rho, &k, &eps).unwrap();
        prop_assert!(naive_lip(&bump.u.values, &rho) <= int(1) + &eps);
        prop_assert!(&bump.alpha > rho.get(a, b));
        prop_assert!(!forbidden.contains(&bump.alpha));
        let ua = &bump.u.values[a];
        let ub = &bump.u.values[b];
        let jump = if ua > ub { ua - ub } else { ub - ua };
        prop_assert_eq!(jump, bump.alpha.clone());
        for &(x, y) in &k {
            let gap = &bump.u.values[x] - &bump.u.values[y];
            prop_assert!(gap < bump.alpha && -gap < bump.alpha);
        }
    }

    #[test]
    fn separation_bounds(seed in any::<u64>(), which in 0..ACTIONS.len(), e in 0usize..4, paper in any::<bool>()) {
        let a = action(which);
        let rho = random_metric(&mut ChaCha8Rng::seed_from_u64(seed), a.degree());
        let d0 = invariantize(&rho, &a).unwrap();
        let eps = epsilon(e);
        let scheme = if paper { Scheme::Paper } else { Scheme::Direct };
        let d = separate_orbits(&d0, &a, &eps, scheme).unwrap();
        prop_assert!(d.is_invariant_under(&a));
        prop_assert!(d0.le(&d));
        prop_assert!(d.le(&d0.scaled(&(int(1) + &eps))));
        let part = pair_classes(&a);
        let values: BTreeSet<Rational> = class_values(&d, &part).into_iter().collect();
        prop_assert_eq!(values.len(), part.num_classes());
    }

    #[test]
    fn isomorphism_search_is_symmetric(i in 0usize..12, j in 0usize..12, shuffle in any::<u64>()) {
        let names = [
            "cyclic:8", "abelian:2,4", "boolean:3", "dihedral:4", "quaternion", "IS:1",
            "cyclic:6", "sym:3", "double:cyclic:4:2", "dihedral:3", "cyclic:4", "boolean:2",
        ];
        let g = zoo(names[i]).unwrap().group;
        let h = zoo(names[j]).unwrap().group;
        let gh = find_isomorphism(&g, &h, DEFAULT_ISO_CAP).unwrap();
        let hg = find_isomorphism(&h, &g, DEFAULT_ISO_CAP).unwrap();
        prop_assert_eq!(gh.is_some(), hg.is_some());
        if let Some(f) = gh {
            for x in g.elements() {
                for y in g.elements() {
                    prop_assert_eq!(f[g.mul(x, y)], h.mul(f[x], f[y]));
                }
            }
        }
        let mut sigma: Vec<usize> = g.elements().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        rand::seq::SliceRandom::shuffle(sigma.as_mut_slice(), &mut rng);
        let g2 = relabel(&g, &sigma);
        prop_assert!(find_isomorphism(&g, &g2, DEFAULT_ISO_CAP).unwrap().is_some());
        prop_assert_eq!(structure_report(&g2).exponent, structure_report(&g).exponent);
    }

    #[test]
    fn hull_laws(which in 0..ACTIONS.len()) {
        let a = action(which);
        let h = symmetrized_hull(&a, DEFAULT_BUDGET).unwrap();
        for p in a.perms() {
            prop_assert!(h.contains(p));
        }
        for u in &h.maps {
            prop_assert!(h.contains(&u.inverse()));
            for v in &h.maps {
                prop_assert!(h.contains(&u.compose(v)));
            }
        }
        let part = pair_classes(&a);
        prop_assert!(h.maps.iter().all(|u| part.preserved_by(u)));
        let (_, closure) = group_from_perm_list(h.maps.clone(), a.degree()).unwrap();
        prop_assert_eq!(&symmetrized_hull(&closure, DEFAULT_BUDGET).unwrap().maps, &h.maps);
        prop_assert_eq!(h.closed, h.len() == a.perms().iter().collect::<BTreeSet<&Perm>>().len());
    }

    #[test]
    fn rational_text_round_trip(p in -100_000i64..100_000, q in 1i64..10_000) {
        let r = frac(p, q);
        prop_assert_eq!(parse(&format(&r)).unwrap(), r);
    }

    #[test]
    fn metric_file_round_trip(seed in any::<u64>(), n in 1usize..8) {
        let d = random_metric(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert_eq!(parse_metric_file(&write_metric_file(&d)).unwrap(), d);
    }

    #[test]
    fn structure_report_laws(i in 0usize..18) {
        let g = zoo(isoforge::doubling::CURATED_ZOO[i]).unwrap().group;
        let s = structure_report(&g);
        prop_assert_eq!(g.order() % s.exponent, 0);
        prop_assert!(s.center.contains(&g.identity()));
        prop_assert!(s.squares.contains(&g.identity()));
        prop_assert_eq!(s.abelian, s.center.len() == g.order());
        prop_assert_eq!(s.boolean, s.exponent <= 2);
        prop_assert!(!s.boolean || s.abelian);
        for &z in &s.center {
            prop_assert!(g.elements().all(|x| g.commute(x, z)));
        }
    }
}
