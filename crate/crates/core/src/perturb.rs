//! Small metric perturbations that separate pair classes.
//!
//! Everything here stays inside the multiplicative corridor
//! `ρ ≤ ρ' ≤ (1 + ε)ρ` and is computed exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAction, Perm};
use crate::hull::{hull_at_identity, left_hull_from_identity, pair_classes, PairOrbitPartition};
use crate::metrics::{invariantize, lip_constant_fn, MetricFunction, RationalMetric};
use crate::rational::{abs_diff, int, pow2_floor, Rational};

pub type PairSet = BTreeSet<(usize, usize)>;

/// Cap on successive halvings of any step size before giving up.
const MAX_HALVINGS: usize = 1024;

/// A bump function `u` with its certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BumpResult {
    pub a: usize,
    pub b: usize,
    pub alpha: Rational,
    pub delta: Rational,
    /// The shrunk ε actually used.
    pub epsilon: Rational,
    pub lambda: Rational,
    pub c: Rational,
    /// Closed δ-balls around `a` and `b`.
    pub ball_a: BTreeSet<usize>,
    pub ball_b: BTreeSet<usize>,
    pub u: MetricFunction,
}

impl BumpResult {
    /// Re-checks the three bump properties against `ρ`, `K` and the
    /// caller's `ε`, exactly.
    pub fn verify(&self, rho: &RationalMetric, k: &PairSet, eps: &Rational) -> Result<()> {
        let fail = |what: &str| Err(Error::VerificationFailed(format!("bump property {what}")));
        let u = &self.u.values;
        if lip_constant_fn(&self.u, rho)? > int(1) + eps || self.u.oscillation() > self.alpha {
            return fail("L1");
        }
        for &x in &self.ball_a {
            for &y in &self.ball_b {
                if abs_diff(&u[x], &u[y]) != self.alpha || &self.alpha <= rho.get(x, y) {
                    return fail("L2");
                }
            }
        }
        if k.iter().any(|&(x, y)| abs_diff(&u[x], &u[y]) >= self.alpha) {
            return fail("L3");
        }
        Ok(())
    }
}

fn ball(rho: &RationalMetric, centre: usize, r: &Rational) -> BTreeSet<usize> {
    (0..rho.degree()).filter(|&y| rho.get(centre, y) <= r).collect()
}

fn check_symmetric(k: &PairSet, name: &str) -> Result<()> {
    if k.is_empty() {
        return Err(Error::InvalidSeparation(format!("{name} is empty")));
    }
    if k.iter().any(|&(x, y)| !k.contains(&(y, x))) {
        return Err(Error::InvalidSeparation(format!("{name} is not symmetric")));
    }
    Ok(())
}

/// Largest `1 + 1/k` strictly above `lower` and at most `upper` whose
/// product with `c` avoids `forbidden`. The largest choice keeps the jump
/// `α − ρ(a, b)` proportional to the corridor rather than to its square.
fn choose_lambda(lower: &Rational, upper: &Rational, c: &Rational, forbidden: &BTreeSet<Rational>) -> Option<Rational> {
    let one = Rational::one();
    if upper <= lower || upper <= &one {
        return None;
    }
    // 1 + 1/k ≤ upper  ⇔  k ≥ 1/(upper − 1); 1 + 1/k > lower  ⇔  k < 1/(lower − 1).
    let k_min = (one.clone() / (upper - &one)).ceil().to_integer().max(BigInt::one());
    let k_max = if lower <= &one {
        None
    } else {
        let bound = one.clone() / (lower - &one);
        let f = bound.floor().to_integer();
        Some(if Rational::from_integer(f.clone()) == bound { f - 1 } else { f })
    };
    let mut k = k_min;
    // Forbidden values are finitely many, so a few steps always suffice.
    for _ in 0..=forbidden.len() {
        if k_max.as_ref().is_some_and(|m| &k > m) {
            return None;
        }
        let lambda = one.clone() + Rational::new(BigInt::one(), k.clone());
        if !forbidden.contains(&(c * &lambda)) {
            return Some(lambda);
        }
        k += 1;
    }
    None
}

/// Builds `u = λ·u_δ` with `u_δ(y) = min(dist(y, A), c) − δ·min(dist(y, A), dist(y, B), c)`,
/// where `A`, `B` are the closed δ-balls at `a`, `b` and `c = ρ(a, b) − 2δ`.
///
/// `u` is `(1+ε)`-Lipschitz, jumps by exactly `α = λc > ρ` across `A × B`,
/// and stays strictly below `α` on `K`. `α` avoids `forbidden`.
pub fn lip_bump(
    rho: &RationalMetric,
    a: usize,
    b: usize,
    k: &PairSet,
    eps: &Rational,
    forbidden: &BTreeSet<Rational>,
) -> Result<BumpResult> {
    let n = rho.degree();
    if a >= n || b >= n || a == b {
        return Err(Error::InvalidSeparation(format!("bad base pair ({a}, {b})")));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    check_symmetric(k, "K")?;
    if k.contains(&(a, b)) {
        return Err(Error::InvalidSeparation(format!("({a}, {b}) lies in K")));
    }
    if k.iter().any(|&(x, y)| x >= n || y >= n) {
        return Err(Error::InvalidSeparation("K refers to missing points".into()));
    }
    let rab = rho.get(a, b).clone();
    let two = int(2);
    let mut e = eps.clone().min(rab.clone().min(int(1)) / int(8));
    let mut tries = 0;
    loop {
        let (ba, bb) = (ball(rho, a, &(&e * &two)), ball(rho, b, &(&e * &two)));
        if !k.iter().any(|(x, y)| ba.contains(x) && bb.contains(y)) {
            break;
        }
        tries += 1;
        if tries > MAX_HALVINGS {
            return Err(Error::InfeasibleSeparation(a, b));
        }
        e /= &two;
    }
    let mu = rho.min_positive().expect("two distinct points");
    let mut delta = e.clone().min(mu / int(3)) / &two;
    let one = Rational::one();
    for _ in 0..MAX_HALVINGS {
        let ball_a = ball(rho, a, &delta);
        let ball_b = ball(rho, b, &delta);
        let c = &rab - &delta * &two;
        if c.is_positive() {
            let span = ball_a
                .iter()
                .flat_map(|&x| ball_b.iter().map(move |&y| rho.get(x, y)))
                .max()
                .unwrap()
                .clone();
            let lower = span / &c;
            let upper = (&one + &e) / (&one + &delta);
            if let Some(lambda) = choose_lambda(&lower, &upper, &c, forbidden) {
                let dist_a = MetricFunction::distance_to_set(rho, &ball_a)?;
                let dist_b = MetricFunction::distance_to_set(rho, &ball_b)?;
                let values = (0..n)
                    .map(|y| {
                        let (da, db) = (&dist_a.values[y], &dist_b.values[y]);
                        let first = da.clone().min(c.clone());
                        let second = da.clone().min(db.clone()).min(c.clone());
                        (first - &delta * second) * &lambda
                    })
                    .collect();
                return Ok(BumpResult {
                    a,
                    b,
                    alpha: &lambda * &c,
                    delta,
                    epsilon: e,
                    lambda,
                    c,
                    ball_a,
                    ball_b,
                    u: MetricFunction::new(values),
                });
            }
        }
        delta /= &two;
    }
    Err(Error::InfeasibleSeparation(a, b))
}

fn sup_over(rho: &RationalMetric, set: &PairSet) -> Rational {
    set.iter().map(|&(x, y)| rho.get(x, y)).max().cloned().unwrap_or_else(|| int(0))
}

/// Returns `ρ_ε = max(ρ, |u(x) − u(y)|)` for a bump at the smallest pair of
/// `L`, so that the suprema of `ρ_ε` over `K` and `L` differ. Returns `ρ`
/// itself when they already differ.
pub fn separate_pair_sets(
    rho: &RationalMetric,
    k: &PairSet,
    l: &PairSet,
    eps: &Rational,
    forbidden: &BTreeSet<Rational>,
) -> Result<RationalMetric> {
    check_symmetric(k, "K")?;
    check_symmetric(l, "L")?;
    if !k.is_disjoint(l) {
        return Err(Error::InvalidSeparation("K and L intersect".into()));
    }
    if l.iter().any(|&(x, y)| x == y) {
        return Err(Error::InvalidSeparation("L meets the diagonal".into()));
    }
    if sup_over(rho, k) != sup_over(rho, l) {
        return Ok(rho.clone());
    }
    let &(a, b) = l.iter().next().unwrap();
    if l.iter().any(|&(x, y)| rho.get(x, y) != rho.get(a, b)) {
        return Err(Error::InvalidSeparation("metric is not constant on L".into()));
    }
    let bump = lip_bump(rho, a, b, k, eps, forbidden)?;
    rho.max_with_function(&bump.u)
}

/// How `separate_orbits` picks its perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Class-by-class bumps with shrinking budgets, reinvariantizing after
    /// each bump.
    Paper,
    /// One explicit shift per class: `ρ = d0 + τ·w_class` with distinct
    /// weights in `[1, 2)` and `τ` small enough to stay in the corridor.
    Direct,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Scheme::Paper),
            "direct" => Ok(Scheme::Direct),
            _ => Err(Error::InvalidArgument(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Class values of an invariant metric, indexed by class id.
pub fn class_values(rho: &RationalMetric, part: &PairOrbitPartition) -> Vec<Rational> {
    part.classes()
        .iter()
        .map(|c| rho.get(c[0].0, c[0].1).clone())
        .collect()
}

/// An invariant metric in `[d0, (1+ε)d0]` whose values on distinct pair
/// classes are pairwise distinct.
pub fn separate_orbits(d0: &RationalMetric, a: &GroupAction, eps: &Rational, scheme: Scheme) -> Result<RationalMetric> {
    if d0.degree() != a.degree() {
        return Err(Error::DegreeMismatch {
            expected: a.degree(),
            found: d0.degree(),
        });
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if !d0.is_invariant_under(a) {
        return Err(Error::NotInvariant);
    }
    let part = pair_classes(a);
    if part.num_classes() <= 1 {
        return Ok(d0.clone());
    }
    let rho = match scheme {
        Scheme::Paper => separate_paper(d0, a, &part, eps)?,
        Scheme::Direct => separate_direct(d0, &part, eps)?,
    };
    let values: BTreeSet<Rational> = class_values(&rho, &part).into_iter().collect();
    assert_eq!(values.len(), part.num_classes(), "class values must be distinct");
    Ok(rho)
}

fn separate_paper(d0: &RationalMetric, a: &GroupAction, part: &PairOrbitPartition, eps: &Rational) -> Result<RationalMetric> {
    let classes: Vec<PairSet> = (0..part.num_classes()).map(|i| part.class_set(i)).collect();
    let last = classes.len() - 1;
    let one = Rational::one();
    let mut s_prev = eps / int(2);
    let mut product = &one + &s_prev;
    let current_values = |d: &RationalMetric| -> BTreeSet<Rational> { class_values(d, part).into_iter().collect() };
    let forbidden = current_values(d0);
    let rho = separate_pair_sets(d0, &classes[0], &classes[1], &s_prev, &forbidden)?;
    let mut d = invariantize(&rho, a)?;
    for n in 1..last {
        let values = class_values(&d, part);
        let c_n = (0..=n)
            .flat_map(|j| (0..j).map(move |l| (j, l)))
            .map(|(j, l)| abs_diff(&values[j], &values[l]))
            .min()
            .unwrap();
        debug_assert!(c_n.is_positive());
        let scale = values[..=n + 1].iter().cloned().fold(one.clone(), Rational::max) * int(8);
        let mut s = pow2_floor(&(s_prev.clone().min(c_n) / scale), MAX_HALVINGS).ok_or(Error::BudgetUnderflow(n))?;
        let mut halvings = 0;
        while &product * (&one + &s) >= &one + eps {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::BudgetUnderflow(n));
            }
            s /= int(2);
        }
        product *= &one + &s;
        if let Some(clash) = (0..=n).find(|&j| values[j] == values[n + 1]) {
            let forbidden = values.iter().cloned().collect();
            let rho = separate_pair_sets(&d, &classes[clash], &classes[n + 1], &s, &forbidden)?;
            d = invariantize(&rho, a)?;
        }
        s_prev = s;
    }
    Ok(d)
}

fn separate_direct(d0: &RationalMetric, part: &PairOrbitPartition, eps: &Rational) -> Result<RationalMetric> {
    let values = class_values(d0, part);
    let count = values.len();
    let weights: Vec<Rational> = (0..count)
        .map(|j| int(1) + Rational::new((j as i64).into(), ((count + 1) as i64).into()))
        .collect();
    // Shift values τ at which two classes would collide.
    let collisions: BTreeSet<Rational> = (0..count)
        .flat_map(|j| (0..j).map(move |l| (j, l)))
        .map(|(j, l)| (&values[j] - &values[l]) / (&weights[l] - &weights[j]))
        .filter(|t| t.is_positive())
        .collect();
    let min_value = values.iter().min().unwrap();
    let mut tau = eps * min_value / int(2);
    let mut halvings = 0;
    while collisions.contains(&tau) {
        halvings += 1;
        if halvings > MAX_HALVINGS {
            return Err(Error::BudgetUnderflow(0));
        }
        tau /= int(2);
    }
    let shifted: Vec<Rational> = values
        .iter()
        .zip(&weights)
        .map(|(v, w)| v + &tau * w)
        .collect();
    RationalMetric::from_class_values(part, &shifted)
}

/// Turns a left-invariant `d` on `G` into a left-invariant `ρ` in the
/// `(1+ε)` corridor for which `f` is not an isometry.
///
/// The witness is the lexicographically smallest pair `(a, b)` whose image
/// `(f(a), f(b))` leaves the class of `(a, b)`; a bump at the image pair is
/// spread over all left translates.
pub fn break_symmetry(d: &RationalMetric, g: &FiniteGroup, f: &Perm, eps: &Rational, budget: u64) -> Result<RationalMetric> {
    if d.degree() != g.order() || f.degree() != g.order() {
        return Err(Error::DegreeMismatch {
            expected: g.order(),
            found: if d.degree() != g.order() { d.degree() } else { f.degree() },
        });
    }
    let left = g.left_regular_action();
    if !d.is_invariant_under(&left) {
        return Err(Error::NotInvariant);
    }
    let hull = left_hull_from_identity(g, &hull_at_identity(g, budget)?);
    if hull.contains(f) {
        return Err(Error::NotOutsideHull);
    }
    if !d.is_isometry(f) {
        return Ok(d.clone());
    }
    let part = pair_classes(&left);
    let n = g.order();
    let (a, b) = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| x != y && part.class_of(f.apply(x), f.apply(y)) != part.class_of(x, y))
        .expect("maps outside the hull move some pair class");
    let k = part.class_set(part.class_of(a, b).unwrap());
    let bump = lip_bump(d, f.apply(a), f.apply(b), &k, eps, &BTreeSet::new())?;
    let u = &bump.u.values;
    let dist = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            let spread = left
                .perms()
                .iter()
                .map(|p| abs_diff(&u[p.apply(x)], &u[p.apply(y)]))
                .max()
                .unwrap();
            d.get(x, y).clone().max(spread)
        })
        .collect();
    Ok(RationalMetric::from_trusted(n, dist))
}
