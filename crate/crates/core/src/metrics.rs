//! Exact rational metrics on `{0..degree-1}` and the isometry-group oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{group_from_perm_list, FiniteGroup, GroupAction, Perm};
use crate::hull::PairOrbitPartition;
use crate::rational::{abs_diff, int, Rational};

/// A validated finite metric with exact rational distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMetric {
    degree: usize,
    dist: Vec<Rational>,
}

impl RationalMetric {
    /// Checks the metric axioms, naming the first violation.
    pub fn validate(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        Self::from_flat(n, dist)
    }

    fn from_flat(n: usize, dist: Vec<Rational>) -> Result<Self> {
        let d = |x: usize, y: usize| &dist[x * n + y];
        for x in 0..n {
            if !d(x, x).is_zero() {
                return Err(Error::NonzeroDiagonal(x));
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if d(x, y) != d(y, x) {
                    return Err(Error::AsymmetricEntry(x, y));
                }
                if !d(x, y).is_positive() {
                    return Err(Error::NegativeOrZeroOffDiagonal(x, y));
                }
            }
        }
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    if d(x, z) > &(d(x, y) + d(y, z)) {
                        return Err(Error::TriangleViolation(x, z, y));
                    }
                }
            }
        }
        Ok(RationalMetric { degree: n, dist })
    }

    /// All off-diagonal distances equal to 1.
    pub fn discrete(n: usize) -> Self {
        let dist = (0..n * n)
            .map(|i| if i / n == i % n { int(0) } else { int(1) })
            .collect();
        RationalMetric { degree: n, dist }
    }

    /// Builds the metric constant on each pair class with the given values.
    pub fn from_class_values(part: &PairOrbitPartition, values: &[Rational]) -> Result<Self> {
        let n = part.degree();
        let dist = (0..n * n)
            .map(|i| match part.class_of(i / n, i % n) {
                Some(c) => values[c].clone(),
                None => int(0),
            })
            .collect();
        Self::from_flat(n, dist)
    }

    /// `d(x, y) = ℓ(x⁻¹y)` for a length function `ℓ` on the group.
    pub fn from_length_function(g: &FiniteGroup, length: &[Rational]) -> Result<Self> {
        let n = g.order();
        if length.len() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: length.len(),
            });
        }
        let dist = (0..n * n)
            .map(|i| length[g.mul(g.inv(i / n), i % n)].clone())
            .collect();
        Self::from_flat(n, dist)
    }

    /// Left-invariant word metric for the symmetric closure of `gens`.
    pub fn word_metric(g: &FiniteGroup, gens: &[usize]) -> Result<Self> {
        let mut steps: Vec<usize> = gens.iter().flat_map(|&s| [s, g.inv(s)]).collect();
        steps.sort_unstable();
        steps.dedup();
        let mut len = vec![usize::MAX; g.order()];
        len[g.identity()] = 0;
        let mut queue = std::collections::VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for &s in &steps {
                let y = g.mul(x, s);
                if len[y] == usize::MAX {
                    len[y] = len[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if len.contains(&usize::MAX) {
            return Err(Error::InvalidArgument("generators do not generate the group".into()));
        }
        let length: Vec<Rational> = len.iter().map(|&l| int(l as i64)).collect();
        Self::from_length_function(g, &length)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x * self.degree + y]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.degree.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Smallest positive distance, `None` below two points.
    pub fn min_positive(&self) -> Option<Rational> {
        self.off_diagonal().map(|(_, _, v)| v).min().cloned()
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let n = self.degree;
        (0..n).flat_map(move |x| (0..n).filter(move |&y| y != x).map(move |y| (x, y, self.get(x, y))))
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &RationalMetric) -> bool {
        self.degree == other.degree && self.dist.iter().zip(&other.dist).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, factor: &Rational) -> RationalMetric {
        RationalMetric {
            degree: self.degree,
            dist: self.dist.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_invariant_under(&self, a: &GroupAction) -> bool {
        a.degree() == self.degree
            && a.perms().iter().all(|p| self.is_isometry(p))
    }

    pub fn is_isometry(&self, p: &Perm) -> bool {
        p.degree() == self.degree
            && self
                .off_diagonal()
                .all(|(x, y, v)| self.get(p.apply(x), p.apply(y)) == v)
    }

    /// Pointwise maximum of `self` and the pseudometric `|u(x) − u(y)|`.
    pub fn max_with_function(&self, u: &MetricFunction) -> Result<RationalMetric> {
        check_degree(self.degree, u.values.len())?;
        let n = self.degree;
        let dist = (0..n * n)
            .map(|i| {
                let w = abs_diff(&u.values[i / n], &u.values[i % n]);
                self.dist[i].clone().max(w)
            })
            .collect();
        Ok(RationalMetric { degree: n, dist })
    }

    /// Builds a metric from a flat matrix without re-validating. Callers
    /// must only pass values produced by metric-preserving operations.
    pub(crate) fn from_trusted(degree: usize, dist: Vec<Rational>) -> Self {
        debug_assert!(Self::from_flat(degree, dist.clone()).is_ok());
        RationalMetric { degree, dist }
    }

    pub(crate) fn flat(&self) -> &[Rational] {
        &self.dist
    }
}

fn check_degree(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DegreeMismatch { expected, found });
    }
    Ok(())
}

/// A real-valued (rational) function on the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricFunction {
    pub values: Vec<Rational>,
}

impl MetricFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        MetricFunction { values }
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    /// The Kuratowski map `x ↦ d(b, x)`.
    pub fn kuratowski(d: &RationalMetric, b: usize) -> Self {
        MetricFunction {
            values: (0..d.degree()).map(|x| d.get(b, x).clone()).collect(),
        }
    }

    /// `x ↦ dist(x, A)` for a nonempty set `A`.
    pub fn distance_to_set(d: &RationalMetric, set: &BTreeSet<usize>) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::InvalidArgument("distance to an empty set".into()));
        }
        Ok(MetricFunction {
            values: (0..d.degree())
                .map(|x| set.iter().map(|&a| d.get(x, a)).min().unwrap().clone())
                .collect(),
        })
    }

    pub fn oscillation(&self) -> Rational {
        match (self.values.iter().max(), self.values.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => int(0),
        }
    }
}

/// `max |f(x) − f(y)| / d(x, y)` over `x ≠ y`; 0 below two points.
pub fn lip_constant_fn(f: &MetricFunction, d: &RationalMetric) -> Result<Rational> {
    check_degree(d.degree(), f.degree())?;
    Ok(d
        .off_diagonal()
        .map(|(x, y, v)| abs_diff(&f.values[x], &f.values[y]) / v)
        .max()
        .unwrap_or_else(|| int(0)))
}

/// `max d(f(x), f(y)) / d(x, y)` over `x ≠ y` for a self-map of the points.
pub fn lip_constant_map(f: &Perm, d: &RationalMetric) -> Result<Rational> {
    check_degree(d.degree(), f.degree())?;
    Ok(d
        .off_diagonal()
        .map(|(x, y, v)| d.get(f.apply(x), f.apply(y)) / v)
        .max()
        .unwrap_or_else(|| int(0)))
}

/// `ρ_G(x, y) = max_g ρ(g.x, g.y)`.
pub fn invariantize(rho: &RationalMetric, a: &GroupAction) -> Result<RationalMetric> {
    check_degree(rho.degree(), a.degree())?;
    let n = rho.degree();
    let dist = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            a.perms()
                .iter()
                .map(|p| rho.get(p.apply(x), p.apply(y)))
                .max()
                .unwrap()
                .clone()
        })
        .collect();
    Ok(RationalMetric::from_trusted(n, dist))
}

/// Least `C` with `|ρ1 − ρ2| ≤ C·d`.
pub fn lambda_distance(rho1: &RationalMetric, rho2: &RationalMetric, d: &RationalMetric) -> Result<Rational> {
    check_degree(d.degree(), rho1.degree())?;
    check_degree(d.degree(), rho2.degree())?;
    Ok(d
        .off_diagonal()
        .map(|(x, y, v)| abs_diff(rho1.get(x, y), rho2.get(x, y)) / v)
        .max()
        .unwrap_or_else(|| int(0)))
}

/// Ranks distinct distance values so the search compares small integers.
fn rank_matrix(d: &RationalMetric) -> Vec<u32> {
    let values: BTreeSet<&Rational> = d.flat().iter().collect();
    let rank: BTreeMap<&Rational, u32> = values.into_iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
    d.flat().iter().map(|v| rank[v]).collect()
}

/// Iterated colour refinement: a point's colour is refined by the multiset
/// of `(distance, neighbour colour)` until the partition stabilizes.
fn refine_colors(rank: &[u32], n: usize) -> Vec<u32> {
    let mut colors = vec![0u32; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|x| {
                let mut s: Vec<(u32, u32)> = (0..n).map(|y| (rank[x * n + y], colors[y])).collect();
                s.sort_unstable();
                (colors[x], s)
            })
            .collect();
        let ids: BTreeMap<&(u32, Vec<(u32, u32)>), u32> = sigs
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let next: Vec<u32> = sigs.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// All isometries of `d`, sorted, by colour refinement and backtracking.
pub fn isometries(d: &RationalMetric, budget: u64) -> Result<Vec<Perm>> {
    let n = d.degree();
    let rank = rank_matrix(d);
    let colors = refine_colors(&rank, n);
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| colors[y] == colors[x]).collect())
        .collect();
    let mut images = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut out = Vec::new();
    let mut nodes = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go(
        x: usize,
        n: usize,
        rank: &[u32],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Perm>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::SearchBudgetExceeded(budget));
        }
        if x == n {
            out.push(Perm::from_images(images.clone()).expect("injective on a finite set"));
            return Ok(());
        }
        for &c in &candidates[x] {
            if used[c] || !(0..x).all(|y| rank[images[y] * n + c] == rank[y * n + x]) {
                continue;
            }
            images.push(c);
            used[c] = true;
            go(x + 1, n, rank, candidates, images, used, out, nodes, budget)?;
            used[c] = false;
            images.pop();
        }
        Ok(())
    }

    go(0, n, &rank, &candidates, &mut images, &mut used, &mut out, &mut nodes, budget)?;
    out.sort();
    Ok(out)
}

/// `Iso(d)` as a group with its tautological action. Elements are sorted
/// lexicographically by image vector, so the identity has index 0.
pub fn isometry_group(d: &RationalMetric, budget: u64) -> Result<(FiniteGroup, GroupAction)> {
    let perms = isometries(d, budget)?;
    let (g, a) = group_from_perm_list(perms, d.degree())
        .map_err(|e| Error::VerificationFailed(format!("isometries do not form a group: {e}")))?;
    Ok((g, a))
}
