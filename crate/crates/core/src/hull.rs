//! Pair-orbit classes and symmetrized 2-hulls.
//!
//! A map `u` lies in the symmetrized 2-hull of a permutation group `G` iff
//! every image pair `{u(x), u(y)}` equals `{f(x), f(y)}` for a single
//! `f ∈ G`, i.e. iff `(u(x), u(y))` stays in the pair-orbit class of
//! `(x, y)` for all `x ≠ y` (plus `u(x) ∈ G.x`).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAction, Perm};

/// Default node budget for backtracking searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const NO_CLASS: u32 = u32::MAX;

/// The classes `G^s(x, y)` of off-diagonal ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbitPartition {
    degree: usize,
    class_of: Vec<u32>,
    classes: Vec<Vec<(usize, usize)>>,
}

impl PairOrbitPartition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Class id of `(x, y)`; `None` on the diagonal.
    pub fn class_of(&self, x: usize, y: usize) -> Option<usize> {
        let c = self.class_of[x * self.degree + y];
        (c != NO_CLASS).then_some(c as usize)
    }

    #[inline]
    fn raw(&self, x: usize, y: usize) -> u32 {
        self.class_of[x * self.degree + y]
    }

    pub fn classes(&self) -> &[Vec<(usize, usize)>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// The class as a set, convenient for the separation routines.
    pub fn class_set(&self, id: usize) -> BTreeSet<(usize, usize)> {
        self.classes[id].iter().copied().collect()
    }

    /// Does `u` keep every off-diagonal pair in its class?
    pub fn preserved_by(&self, u: &Perm) -> bool {
        (0..self.degree).all(|x| {
            (0..self.degree).all(|y| x == y || self.raw(u.apply(x), u.apply(y)) == self.raw(x, y))
        })
    }
}

/// Orbits of off-diagonal pairs under `(x,y) ↦ (g.x, g.y)` and the swap.
/// Class ids follow the lexicographically smallest member pair.
pub fn pair_classes(a: &GroupAction) -> PairOrbitPartition {
    let n = a.degree();
    let mut class_of = vec![NO_CLASS; n * n];
    let mut classes = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || class_of[x * n + y] != NO_CLASS {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = Vec::new();
            for p in a.perms() {
                for (s, t) in [(p.apply(x), p.apply(y)), (p.apply(y), p.apply(x))] {
                    if class_of[s * n + t] == NO_CLASS {
                        class_of[s * n + t] = id;
                        members.push((s, t));
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
    }
    PairOrbitPartition {
        degree: n,
        class_of,
        classes,
    }
}

/// A symmetrized 2-hull, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullSet {
    pub maps: Vec<Perm>,
    /// True when the hull equals the generating group.
    pub closed: bool,
}

impl HullSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn contains(&self, u: &Perm) -> bool {
        self.maps.binary_search(u).is_ok()
    }
}

struct Search<'a> {
    part: &'a PairOrbitPartition,
    candidates: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
    images: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Perm>,
}

impl Search<'_> {
    fn run(&mut self, x: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        let n = self.part.degree;
        if x == n {
            let u = Perm::from_images(self.images.clone());
            assert!(u.is_ok(), "hull member must be a bijection");
            self.out.push(u.unwrap());
            return Ok(());
        }
        for i in 0..self.candidates[x].len() {
            let c = self.candidates[x][i];
            if self.used[c] {
                continue;
            }
            let fits = (0..x).all(|y| self.part.raw(self.images[y], c) == self.part.raw(y, x));
            if !fits {
                continue;
            }
            self.images.push(c);
            self.used[c] = true;
            self.run(x + 1)?;
            self.used[c] = false;
            self.images.pop();
        }
        Ok(())
    }
}

fn hull_search(a: &GroupAction, restrict_to_orbits: bool, budget: u64) -> Result<HullSet> {
    let part = pair_classes(a);
    let n = a.degree();
    let candidates = (0..n)
        .map(|x| {
            if restrict_to_orbits {
                a.orbit(x).into_iter().collect()
            } else {
                (0..n).collect()
            }
        })
        .collect();
    let mut s = Search {
        part: &part,
        candidates,
        budget,
        nodes: 0,
        images: Vec::with_capacity(n),
        used: vec![false; n],
        out: Vec::new(),
    };
    s.run(0)?;
    let mut maps = s.out;
    maps.sort();
    let closed = maps.len() == a.group().order();
    Ok(HullSet { maps, closed })
}

/// The symmetrized 2-hull of the acting permutations, by backtracking over
/// point images (orbit-restricted, pruned pairwise against placed points).
pub fn symmetrized_hull(a: &GroupAction, budget: u64) -> Result<HullSet> {
    hull_search(a, true, budget)
}

/// Hull membership using only the pairwise condition (no `u(x) ∈ G.x`).
/// Agrees with [`symmetrized_hull`] except when `(|G|, degree) = (1, 2)`.
pub fn pairwise_hull(a: &GroupAction, budget: u64) -> Result<HullSet> {
    hull_search(a, false, budget)
}

pub fn is_hull_closed(a: &GroupAction, budget: u64) -> Result<bool> {
    Ok(symmetrized_hull(a, budget)?.closed)
}

/// Maps in the hull of `L(G)` fixing the identity.
///
/// Every such map sends `x` to `x` or `x⁻¹` and swaps within each inverse
/// pair, so the search runs over one orientation bit per pair `{x, x⁻¹}`
/// with `x ≠ x⁻¹`, checking the pairwise class condition as it goes.
pub fn hull_at_identity(g: &FiniteGroup, budget: u64) -> Result<HullSet> {
    let n = g.order();
    // Canonical class key of the pair (x, y) under L(G): {x⁻¹y, y⁻¹x}.
    let key = |x: usize, y: usize| {
        let a = g.mul(g.inv(x), y);
        let b = g.inv(a);
        a.min(b)
    };
    let mut fixed: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x in g.elements() {
        let xi = g.inv(x);
        if x == xi {
            fixed.push(x);
        } else if x < xi {
            pairs.push((x, xi));
        }
    }
    let mut images: Vec<usize> = (0..n).collect();
    let mut decided = fixed.clone();
    let mut out = Vec::new();
    let mut nodes = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        pairs: &[(usize, usize)],
        images: &mut Vec<usize>,
        decided: &mut Vec<usize>,
        out: &mut Vec<Perm>,
        nodes: &mut u64,
        budget: u64,
        key: &dyn Fn(usize, usize) -> usize,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::SearchBudgetExceeded(budget));
        }
        if i == pairs.len() {
            out.push(Perm::from_images(images.clone()).expect("orientation maps are bijections"));
            return Ok(());
        }
        let (x, xi) = pairs[i];
        for (fx, fxi) in [(x, xi), (xi, x)] {
            images[x] = fx;
            images[xi] = fxi;
            let ok = key(fx, fxi) == key(x, xi)
                && decided.iter().all(|&y| {
                    key(fx, images[y]) == key(x, y) && key(fxi, images[y]) == key(xi, y)
                });
            if ok {
                decided.push(x);
                decided.push(xi);
                go(i + 1, pairs, images, decided, out, nodes, budget, key)?;
                decided.pop();
                decided.pop();
            }
        }
        images[x] = x;
        images[xi] = xi;
        Ok(())
    }

    go(0, &pairs, &mut images, &mut decided, &mut out, &mut nodes, budget, &key)?;
    out.sort();
    let closed = out.len() == 1;
    Ok(HullSet { maps: out, closed })
}

/// `hull(L(G)) = { L_a ∘ f : a ∈ G, f ∈ hull_at_identity(G) }`, sorted.
pub fn left_hull_from_identity(g: &FiniteGroup, hull_e: &HullSet) -> HullSet {
    let mut maps: Vec<Perm> = g
        .elements()
        .flat_map(|a| {
            let la = g.left_translation(a);
            hull_e.maps.iter().map(move |f| la.compose(f))
        })
        .collect();
    maps.sort();
    maps.dedup();
    let closed = maps.len() == g.order();
    HullSet { maps, closed }
}
