//! Metrics whose full isometry group is a prescribed permutation group.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{group_from_perm_list, FiniteGroup, GroupAction, Perm};
use crate::hull::{pairwise_hull, symmetrized_hull, DEFAULT_BUDGET};
use crate::metrics::{invariantize, isometries, RationalMetric};
use crate::perturb::{separate_orbits, Scheme};
use crate::rational::{frac, int, Rational};

/// Above this many points the oracle is skipped unless asked for.
pub const AUTO_VERIFY_MAX_DEGREE: usize = 16;

#[derive(Clone, Debug)]
pub struct RigidOptions {
    pub epsilon: Rational,
    pub scheme: Scheme,
    /// `None` runs the oracle only on small spaces.
    pub verify: Option<bool>,
    /// Fail unless the isometry group will be exactly the acting group.
    pub demand_exact: bool,
    pub budget: u64,
}

impl Default for RigidOptions {
    fn default() -> Self {
        RigidOptions {
            epsilon: frac(1, 10),
            scheme: Scheme::Direct,
            verify: None,
            demand_exact: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub metric: RationalMetric,
    /// The invariantized seed the corridor is measured against.
    pub seed: RationalMetric,
    pub epsilon: Rational,
    pub group_order: usize,
    pub hull_order: usize,
    pub realized_group_order: usize,
    /// The hull equals the acting group.
    pub exact: bool,
    /// Least and greatest ratio `ρ / seed` off the diagonal.
    pub corridor: (Rational, Rational),
    pub verified: bool,
    /// The expected isometry group, sorted.
    pub isometries: Vec<Perm>,
}

impl RigidityReport {
    pub fn corridor_holds(&self) -> bool {
        self.corridor.0 >= int(1) && self.corridor.1 <= int(1) + &self.epsilon
    }
}

fn corridor(rho: &RationalMetric, seed: &RationalMetric) -> (Rational, Rational) {
    let ratios: Vec<Rational> = rho
        .off_diagonal()
        .map(|(x, y, v)| v / seed.get(x, y))
        .collect();
    match (ratios.iter().min(), ratios.iter().max()) {
        (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
        _ => (int(1), int(1)),
    }
}

/// Perturbs the invariantized seed (default: discrete) so distinct pair
/// classes get distinct distances. The isometry group of the result is the
/// symmetrized 2-hull of the action.
pub fn rigid_metric(a: &GroupAction, seed: Option<&RationalMetric>, opts: &RigidOptions) -> Result<RigidityReport> {
    let n = a.degree();
    let exceptional = a.group().order() == 1 && n == 2;
    if exceptional && opts.demand_exact {
        return Err(Error::ForbiddenCardinality);
    }
    let base = match seed {
        Some(s) => invariantize(s, a)?,
        None => RationalMetric::discrete(n),
    };
    let metric = separate_orbits(&base, a, &opts.epsilon, opts.scheme)?;
    // On two points every metric admits the swap, which the raw hull omits.
    let expected = if exceptional {
        pairwise_hull(a, opts.budget)?
    } else {
        symmetrized_hull(a, opts.budget)?
    };
    let exact = expected.len() == a.group().order();
    if opts.demand_exact && !exact {
        return Err(Error::NotHullClosed);
    }
    let verify = opts.verify.unwrap_or(n <= AUTO_VERIFY_MAX_DEGREE);
    if verify {
        let found = isometries(&metric, opts.budget)?;
        if found != expected.maps {
            return Err(Error::VerificationFailed(format!(
                "oracle found {} isometries, expected {}",
                found.len(),
                expected.len()
            )));
        }
    }
    Ok(RigidityReport {
        corridor: corridor(&metric, &base),
        metric,
        seed: base,
        epsilon: opts.epsilon.clone(),
        group_order: a.group().order(),
        hull_order: expected.len(),
        realized_group_order: expected.len(),
        exact,
        verified: verify,
        isometries: expected.maps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeConditions {
    pub free_at_omega: bool,
    pub effective_off_orbit: bool,
    pub transitive: bool,
    /// All hypotheses hold, including the cardinality guard.
    pub applies: bool,
}

/// The hypotheses of the free-point realization criterion at `omega`.
pub fn check_free_conditions(a: &GroupAction, omega: usize) -> Result<FreeConditions> {
    if omega >= a.degree() {
        return Err(Error::InvalidArgument(format!("point {omega} out of range")));
    }
    let g = a.group();
    let free_at_omega = g
        .elements()
        .all(|h| h == g.identity() || a.act(h, omega) != omega);
    let orbit = a.orbit(omega);
    let effective_off_orbit = g.elements().all(|h| {
        h == g.identity() || (0..a.degree()).any(|x| !orbit.contains(&x) && a.act(h, x) != x)
    });
    let transitive = a.is_transitive();
    let guard = !(g.order() == 1 && a.degree() == 2);
    Ok(FreeConditions {
        free_at_omega,
        effective_off_orbit,
        transitive,
        applies: free_at_omega && effective_off_orbit && !transitive && guard,
    })
}

/// `a.(g, x) = (ag, x)` on `G × {0..m−1}`, with `(g, x)` at index `g + |G|·x`.
pub fn product_action(g: &FiniteGroup, m: usize) -> Result<GroupAction> {
    let n = g.order();
    let map = g
        .elements()
        .map(|a| Perm::from_images((0..n * m).map(|i| g.mul(a, i % n) + n * (i / n)).collect()))
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(g.clone(), n * m, map)
}

fn require_closed(a: &GroupAction, budget: u64) -> Result<()> {
    if !symmetrized_hull(a, budget)?.closed {
        return Err(Error::NotHullClosed);
    }
    Ok(())
}

/// Rigid metric on `G × {0..m−1}` whose isometries are exactly the maps
/// `(g, x) ↦ (ag, x)`.
pub fn product_rigid(g: &FiniteGroup, m: usize, opts: &RigidOptions) -> Result<(RigidityReport, GroupAction)> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    if g.order() == 1 && m == 2 {
        return Err(Error::ForbiddenCardinality);
    }
    let a = product_action(g, m)?;
    require_closed(&a, opts.budget)?;
    let report = rigid_metric(&a, None, opts)?;
    Ok((report, a))
}

/// The action on `X ⊔ G`: `a.x` on the first `|X|` points, left
/// translation on the remaining `|G|`.
pub fn disjoint_union_action(a: &GroupAction) -> Result<GroupAction> {
    let g = a.group();
    let k = a.degree();
    let map = g
        .elements()
        .map(|h| {
            let images = (0..k).map(|x| a.act(h, x)).chain(g.elements().map(|y| k + g.mul(h, y)));
            Perm::from_images(images.collect())
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(g.clone(), k + g.order(), map)
}

pub fn disjoint_union_rigid(a: &GroupAction, opts: &RigidOptions) -> Result<(RigidityReport, GroupAction)> {
    if a.degree() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let u = disjoint_union_action(a)?;
    if u.group().order() == 1 && u.degree() == 2 {
        return Err(Error::ForbiddenCardinality);
    }
    require_closed(&u, opts.budget)?;
    let report = rigid_metric(&u, None, opts)?;
    Ok((report, u))
}

/// Rigid metric on an abelian group: isometries are `x ↦ ax` and `x ↦ ax⁻¹`.
pub fn abelian_rigid(h: &FiniteGroup, opts: &RigidOptions) -> Result<RigidityReport> {
    if !h.is_abelian() {
        return Err(Error::NotAbelian);
    }
    rigid_metric(&h.left_regular_action(), None, opts)
}

/// `Iso(d1) ∩ Iso(d2)` with its tautological action.
pub fn common_isometries(d1: &RationalMetric, d2: &RationalMetric, budget: u64) -> Result<GroupAction> {
    if d1.degree() != d2.degree() {
        return Err(Error::DegreeMismatch {
            expected: d1.degree(),
            found: d2.degree(),
        });
    }
    let second: BTreeSet<Perm> = isometries(d2, budget)?.into_iter().collect();
    let common: Vec<Perm> = isometries(d1, budget)?
        .into_iter()
        .filter(|p| second.contains(p))
        .collect();
    Ok(group_from_perm_list(common, d1.degree())?.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub points: usize,
    pub trials: usize,
    pub trivial: usize,
    pub fraction: Rational,
    /// Every sample, perturbed by the trivial-group construction, ended up
    /// with a trivial isometry group.
    pub perturbed_all_trivial: bool,
}

/// Uniform rationals `1 + k/1000`, `k ∈ 0..1000`, on each pair. Trial `t`
/// draws from stream `t` of the seeded generator.
pub fn sample_metric(points: usize, seed: u64, trial: u64) -> RationalMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut m = vec![vec![int(0); points]; points];
    for x in 0..points {
        for y in x + 1..points {
            let v = int(1) + frac(rng.gen_range(0..1000), 1000);
            m[x][y] = v.clone();
            m[y][x] = v;
        }
    }
    RationalMetric::validate(m).expect("entries in [1, 2) satisfy the triangle inequality")
}

/// Fraction of random metrics on `points` points with trivial isometry group.
pub fn density_trial(points: usize, trials: usize, seed: u64) -> Result<DensityReport> {
    if points < 3 {
        return Err(Error::InvalidArgument("density trials need at least 3 points".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let trivial_action = GroupAction::trivial(points);
    let opts = RigidOptions {
        verify: Some(true),
        ..RigidOptions::default()
    };
    let mut trivial = 0;
    let mut perturbed_all_trivial = true;
    for t in 0..trials {
        let d = sample_metric(points, seed, t as u64);
        if isometries(&d, DEFAULT_BUDGET)?.len() == 1 {
            trivial += 1;
        }
        let report = rigid_metric(&trivial_action, Some(&d), &opts)?;
        perturbed_all_trivial &= report.realized_group_order == 1 && report.corridor_holds();
    }
    Ok(DensityReport {
        points,
        trials,
        trivial,
        fraction: frac(trivial as i64, trials as i64),
        perturbed_all_trivial,
    })
}
