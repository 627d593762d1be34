//! Three-way classification of finite groups by the hull of their left
//! translations, computed structurally and by search, and cross-checked.

use std::collections::BTreeMap;
use std::fmt;

use crate::doubling::{iso_singular, recognize_double, DoubleStructure};
use crate::error::{Error, Result};
use crate::groups::{find_isomorphism, structure_report, FiniteGroup, DEFAULT_ISO_CAP};
use crate::hull::{hull_at_identity, HullSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    /// Hull of `L(G)` is `L(G)` itself.
    A,
    /// Hull at the identity has two elements, both automorphisms.
    B,
    /// Hull at the identity is `{−1,1}³` and contains inversion.
    C,
}

impl Case {
    pub fn hull_e_size(self) -> usize {
        match self {
            Case::A => 1,
            Case::B => 2,
            Case::C => 8,
        }
    }

    fn from_hull_e_size(n: usize) -> Option<Case> {
        match n {
            1 => Some(Case::A),
            2 => Some(Case::B),
            8 => Some(Case::C),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub case: Case,
    pub hull_e: HullSet,
    /// Index-2 double structure of `G` (cases B and C, non-abelian).
    pub structural_witness: Option<DoubleStructure>,
    /// For case C: the double structure of the witness subgroup, on the
    /// subgroup relabelled in ascending index order.
    pub inner_witness: Option<DoubleStructure>,
    pub kappa_in_hull: bool,
}

/// Case and witnesses from group structure alone.
pub fn structural_case(g: &FiniteGroup) -> Result<(Case, Option<DoubleStructure>, Option<DoubleStructure>)> {
    if g.is_boolean() {
        return Ok((Case::A, None, None));
    }
    if g.is_abelian() {
        return Ok((Case::B, None, None));
    }
    let Some(ds) = recognize_double(g) else {
        return Ok((Case::A, None, None));
    };
    let base = ds.base_pair()?;
    let h = base.group();
    let q = base.p();
    let squares_in_e_q = h.elements().all(|x| {
        let s = h.square(x);
        s == h.identity() || s == q
    });
    if !squares_in_e_q {
        return Ok((Case::B, Some(ds), None));
    }
    // `H` is then a double of a Boolean group with the same involution.
    match recognize_double(h) {
        Some(inner) if inner.p_tilde == q && h.induced_subgroup(&inner.subgroup)?.0.is_boolean() => {
            Ok((Case::C, Some(ds), Some(inner)))
        }
        _ => Err(Error::RouteMismatch(
            "abelian witness with squares in {e, q} is not a Boolean double".into(),
        )),
    }
}

/// Classifies `G` both structurally and by the size of the hull at the
/// identity; disagreement is an error.
pub fn classify(g: &FiniteGroup, budget: u64) -> Result<Classification> {
    let (case, structural_witness, inner_witness) = structural_case(g)?;
    let hull_e = hull_at_identity(g, budget)?;
    let by_hull = Case::from_hull_e_size(hull_e.len())
        .ok_or_else(|| Error::RouteMismatch(format!("hull at identity has {} elements", hull_e.len())))?;
    if by_hull != case {
        return Err(Error::RouteMismatch(format!(
            "structure gives case {case}, hull gives case {by_hull}"
        )));
    }
    let kappa_in_hull = hull_e.contains(&g.inversion());
    if kappa_in_hull != (case == Case::C || g.is_abelian()) {
        return Err(Error::RouteMismatch("inversion membership disagrees with the case".into()));
    }
    Ok(Classification {
        case,
        hull_e,
        structural_witness,
        inner_witness,
        kappa_in_hull,
    })
}

/// Applicability flag for a sufficient condition that has no finite content.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    Holds,
    Fails,
    NotApplicable,
}

impl From<bool> for Applicability {
    fn from(b: bool) -> Self {
        if b {
            Applicability::Holds
        } else {
            Applicability::Fails
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftRigidReport {
    /// `G` carries a left-invariant metric whose isometries are exactly
    /// the left translations.
    pub admits: bool,
    pub case: Case,
    pub non_solvable: Applicability,
    /// Non-abelian with trivial or non-Boolean center.
    pub center_criterion: Applicability,
    /// The connectedness criterion; finite groups are discrete.
    pub connected: Applicability,
}

pub fn admits_left_rigid(g: &FiniteGroup, budget: u64) -> Result<LeftRigidReport> {
    let case = classify(g, budget)?.case;
    let admits = case == Case::A;
    let non_solvable = !g.is_solvable();
    let center = g.center();
    let center_boolean = center.iter().all(|&z| g.square(z) == g.identity());
    let center_criterion = !g.is_abelian() && (center.len() == 1 || !center_boolean);
    if (non_solvable || center_criterion) && !admits {
        return Err(Error::RouteMismatch("a sufficient condition fired outside case A".into()));
    }
    Ok(LeftRigidReport {
        admits,
        case,
        non_solvable: non_solvable.into(),
        center_criterion: center_criterion.into(),
        connected: Applicability::NotApplicable,
    })
}

/// `∀x,y: x² = y² ∨ xy = yx`.
pub fn squares_or_commute(g: &FiniteGroup) -> bool {
    g.elements()
        .all(|x| g.elements().all(|y| g.square(x) == g.square(y) || g.commute(x, y)))
}

/// True iff every left-invariant pseudometric on `G` is right-invariant.
pub fn biinvariant_only(g: &FiniteGroup, budget: u64) -> Result<bool> {
    let c = classify(g, budget)?;
    let by_case = g.is_abelian() || c.case == Case::C;
    let by_predicate = g.is_abelian() || squares_or_commute(g);
    if by_case != by_predicate || by_case != c.kappa_in_hull {
        return Err(Error::RouteMismatch("bi-invariance routes disagree".into()));
    }
    Ok(by_case)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    /// Names and orders of the case-C members.
    pub members: Vec<(String, usize)>,
    pub all_exponent_four: bool,
    pub same_order_isomorphic: bool,
    /// `(n, |IS(n)|)` for the family members built here.
    pub family_orders: Vec<(usize, usize)>,
    pub family_orders_ok: bool,
}

impl CensusReport {
    pub fn ok(&self) -> bool {
        self.all_exponent_four && self.same_order_isomorphic && self.family_orders_ok
    }
}

/// Largest `n` for which `IS(n)` is built and measured.
pub const CENSUS_FAMILY_MAX: usize = 4;

pub fn iso_singular_census(groups: &[(String, FiniteGroup)], budget: u64) -> Result<CensusReport> {
    let mut members: Vec<(String, &FiniteGroup)> = Vec::new();
    for (name, g) in groups {
        if classify(g, budget)?.case == Case::C {
            members.push((name.clone(), g));
        }
    }
    let all_exponent_four = members.iter().all(|(_, g)| structure_report(g).exponent == 4);
    let mut by_order: BTreeMap<usize, Vec<&FiniteGroup>> = BTreeMap::new();
    for (_, g) in &members {
        by_order.entry(g.order()).or_default().push(g);
    }
    let mut same_order_isomorphic = true;
    for list in by_order.values() {
        for h in &list[1..] {
            same_order_isomorphic &= find_isomorphism(list[0], h, DEFAULT_ISO_CAP)?.is_some();
        }
    }
    let family_orders: Vec<(usize, usize)> = (1..=CENSUS_FAMILY_MAX)
        .map(|n| Ok((n, iso_singular(n)?.order())))
        .collect::<Result<_>>()?;
    let family_orders_ok = family_orders.iter().all(|&(n, o)| o == 1 << (n + 2));
    Ok(CensusReport {
        members: members.into_iter().map(|(n, g)| (n, g.order())).collect(),
        all_exponent_four,
        same_order_isomorphic,
        family_orders,
        family_orders_ok,
    })
}
