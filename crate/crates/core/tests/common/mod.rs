//! Independent oracles shared by the integration tests. None of these call
//! the search routines they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use isoforge::rational::{frac, int};
use isoforge::{FiniteGroup, Perm, Rational, RationalMetric};
use itertools::Itertools;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Quaternion group entered by hand. Index order: 1, −1, i, −i, j, −j, k, −k.
pub fn q8_by_hand() -> FiniteGroup {
    // Units as (sign, letter) with letter 0 = 1, 1 = i, 2 = j, 3 = k.
    let units: [(i8, usize); 8] = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)];
    // Letter products: LETTER[a][b] = (sign, letter) of a·b.
    const LETTER: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let index = |s: i8, l: usize| units.iter().position(|&u| u == (s, l)).unwrap();
    let table = units
        .iter()
        .map(|&(s1, l1)| {
            units
                .iter()
                .map(|&(s2, l2)| {
                    let (s, l) = LETTER[l1][l2];
                    index(s * s1 * s2, l)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_cayley(table, 0).unwrap()
}

/// All permutations of `0..n` preserving every distance, by brute force.
pub fn naive_isometries(d: &RationalMetric) -> Vec<Perm> {
    let n = d.degree();
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|x| (0..n).all(|y| d.get(p[x], p[y]) == d.get(x, y))))
        .map(|p| Perm::from_images(p).unwrap())
        .sorted()
        .collect()
}

/// Brute-force symmetrized 2-hull straight from the definition.
pub fn naive_hull(perms: &[Perm], degree: usize) -> Vec<Perm> {
    (0..degree)
        .permutations(degree)
        .filter(|u| {
            (0..degree).all(|x| {
                (0..degree).all(|y| {
                    perms.iter().any(|f| {
                        let (fx, fy) = (f.apply(x), f.apply(y));
                        (u[x] == fx && u[y] == fy) || (u[x] == fy && u[y] == fx)
                    })
                })
            })
        })
        .map(|u| Perm::from_images(u).unwrap())
        .sorted()
        .collect()
}

/// Exact Lipschitz constant of `u`, recomputed from scratch.
pub fn naive_lip(u: &[Rational], d: &RationalMetric) -> Rational {
    let n = d.degree();
    let mut best = int(0);
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let r = (&u[x] - &u[y]).abs() / d.get(x, y);
                if r > best {
                    best = r;
                }
            }
        }
    }
    best
}

/// Random metric: shortest paths over random rational edge weights in
/// `[1/10, 3]`, so distances are not confined to a narrow band.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> RationalMetric {
    let mut m = vec![vec![int(0); n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let w = frac(rng.gen_range(1..=30), 10) + frac(rng.gen_range(0..7), 70);
            m[x][y] = w.clone();
            m[y][x] = w;
        }
    }
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = &m[x][k] + &m[k][y];
                if via < m[x][y] {
                    m[x][y] = via;
                }
            }
        }
    }
    RationalMetric::validate(m).unwrap()
}

/// Random left-invariant metric on `g`: length uniform in `[1, 2)` on each
/// inverse pair.
pub fn random_length_metric(rng: &mut ChaCha8Rng, g: &FiniteGroup) -> RationalMetric {
    let mut length = vec![int(0); g.order()];
    for x in g.elements() {
        let xi = g.inv(x);
        if x != g.identity() && x <= xi {
            let v = int(1) + frac(rng.gen_range(0..1000), 1000);
            length[x] = v.clone();
            length[xi] = v;
        }
    }
    RationalMetric::from_length_function(g, &length).unwrap()
}

pub fn right_translation(g: &FiniteGroup, a: usize) -> Perm {
    Perm::from_images(g.elements().map(|x| g.mul(x, a)).collect()).unwrap()
}

/// Subgroups of index 2 by checking every half-size subset containing the identity.
pub fn naive_index2(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
    let n = g.order();
    if !n.is_multiple_of(2) {
        return Vec::new();
    }
    let others: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    others
        .into_iter()
        .combinations(n / 2 - 1)
        .map(|c| c.into_iter().chain([g.identity()]).collect::<BTreeSet<usize>>())
        .filter(|s| s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, g.inv(b))))))
        .sorted()
        .collect()
}
