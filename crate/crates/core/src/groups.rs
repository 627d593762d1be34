//! Finite groups as Cayley tables, permutation groups, and isomorphism search.
//!
//! Group elements are opaque indices `0..order`. The canonical element order
//! is the index order of the table, and every search in this module walks
//! candidates in that order so results are deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the order of a group produced by closing generators.
pub const DEFAULT_CLOSURE_CAP: usize = 20_000;
/// Default cap on the order accepted by the isomorphism search.
pub const DEFAULT_ISO_CAP: usize = 200;

/// A bijection of `{0..degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection")));
            }
            seen[y] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(Error::InvalidPerm(format!("bad cycle {cycle:?}")));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(|(x, y)| x == *y).map(|(x, _)| x)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

/// A finite group given by its Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}, identity={})", self.order, self.identity)
    }
}

impl FiniteGroup {
    /// Validates a Cayley table (`table[g][h] = g·h`) with the given identity.
    pub fn from_cayley(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Malformed("empty Cayley table".into()));
        }
        if let Some((i, _)) = table.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Malformed(format!("row {i} has wrong length")));
        }
        if identity >= n {
            return Err(Error::Malformed(format!("identity {identity} out of range")));
        }
        if let Some(&v) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::Malformed(format!("entry {v} out of range")));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        Self::from_flat(n, flat, identity)
    }

    fn from_flat(n: usize, table: Vec<usize>, identity: usize) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * n + b];
        for x in 0..n {
            if at(identity, x) != x || at(x, identity) != x {
                return Err(Error::NoIdentity(identity));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                let v = at(g, h);
                if seen[v] == g {
                    return Err(Error::NotLatinSquare {
                        axis: "row",
                        index: g,
                        value: v,
                    });
                }
                seen[v] = g;
            }
        }
        seen.fill(usize::MAX);
        for h in 0..n {
            for g in 0..n {
                let v = at(g, h);
                if seen[v] == h {
                    return Err(Error::NotLatinSquare {
                        axis: "column",
                        index: h,
                        value: v,
                    });
                }
                seen[v] = h;
            }
        }
        let mut inverses = vec![0; n];
        for g in 0..n {
            match (0..n).find(|&h| at(g, h) == identity && at(h, g) == identity) {
                Some(h) => inverses[g] = h,
                None => return Err(Error::NoInverse(g)),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
        })
    }

    /// Re-checks every group axiom on an existing value.
    pub fn validate(&self) -> Result<()> {
        Self::from_flat(self.order, self.table.clone(), self.identity).map(|_| ())
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            table: vec![0],
            identity: 0,
            inverses: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn square(&self, a: usize) -> usize {
        self.mul(a, a)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    pub fn is_boolean(&self) -> bool {
        self.elements().all(|a| self.square(a) == self.identity)
    }

    pub fn center(&self) -> BTreeSet<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|x| self.commute(z, x)))
            .collect()
    }

    pub fn squares(&self) -> BTreeSet<usize> {
        self.elements().map(|x| self.square(x)).collect()
    }

    /// `L_a: x ↦ a·x` as a permutation of the elements.
    pub fn left_translation(&self, a: usize) -> Perm {
        Perm {
            images: self.elements().map(|x| self.mul(a, x)).collect(),
        }
    }

    /// `x ↦ x⁻¹`.
    pub fn inversion(&self) -> Perm {
        Perm {
            images: self.inverses.clone(),
        }
    }

    /// The left regular action `L(G)`.
    pub fn left_regular_action(&self) -> GroupAction {
        let map = self.elements().map(|a| self.left_translation(a)).collect();
        GroupAction {
            group: self.clone(),
            degree: self.order,
            map,
        }
    }

    /// The action `g.x = x·g⁻¹`.
    pub fn right_regular_action(&self) -> GroupAction {
        let map = self
            .elements()
            .map(|g| Perm {
                images: self.elements().map(|x| self.mul(x, self.inv(g))).collect(),
            })
            .collect();
        GroupAction {
            group: self.clone(),
            degree: self.order,
            map,
        }
    }

    /// Closure of `gens` under multiplication (always contains the identity).
    pub fn subgroup_generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Greedy generating set: scan elements in index order, keep each one not
    /// already generated by the previous picks.
    pub fn canonical_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.subgroup_generated(&gens);
        for x in self.elements() {
            if span.len() == self.order {
                break;
            }
            if !span.contains(&x) {
                gens.push(x);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// The subgroup on `elements` relabelled `0..k` in ascending index order.
    /// Returns the group and the embedding `new index -> old index`.
    pub fn induced_subgroup(&self, elements: &BTreeSet<usize>) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(elements) {
            return Err(Error::InvalidArgument("set is not a subgroup".into()));
        }
        let embed: Vec<usize> = elements.iter().copied().collect();
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let k = embed.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &embed {
            for &b in &embed {
                table.push(pos[&self.mul(a, b)]);
            }
        }
        let g = FiniteGroup::from_flat(k, table, pos[&self.identity])?;
        Ok((g, embed))
    }

    /// `self × other` with `(a, b)` at index `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order;
        let n = self.order * m;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (a1, b1) = (x / m, x % m);
                let (a2, b2) = (y / m, y % m);
                table.push(self.mul(a1, a2) * m + other.mul(b1, b2));
            }
        }
        let inverses = (0..n).map(|x| self.inv(x / m) * m + other.inv(x % m)).collect();
        FiniteGroup {
            order: n,
            table,
            identity: self.identity * m + other.identity,
            inverses,
        }
    }

    /// Derived-series test.
    pub fn is_solvable(&self) -> bool {
        let mut current: BTreeSet<usize> = self.elements().collect();
        loop {
            let mut comms = Vec::new();
            for &a in &current {
                for &b in &current {
                    let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                    comms.push(c);
                }
            }
            comms.sort_unstable();
            comms.dedup();
            let derived = self.subgroup_generated(&comms);
            if derived.len() == 1 {
                return true;
            }
            if derived.len() == current.len() {
                return false;
            }
            current = derived;
        }
    }
}

/// A homomorphism from a finite group into the permutations of `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    degree: usize,
    map: Vec<Perm>,
}

impl GroupAction {
    /// Validates that `map[g]` is a permutation, that the assignment is a
    /// homomorphism, and that it is effective.
    pub fn new(group: FiniteGroup, degree: usize, map: Vec<Perm>) -> Result<Self> {
        if map.len() != group.order() {
            return Err(Error::Malformed(format!(
                "action has {} rows for a group of order {}",
                map.len(),
                group.order()
            )));
        }
        if let Some(p) = map.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: p.degree(),
            });
        }
        if !map[group.identity()].is_identity() {
            return Err(Error::NotHomomorphism(group.identity(), group.identity()));
        }
        for g in group.elements() {
            for h in group.elements() {
                if map[group.mul(g, h)] != map[g].compose(&map[h]) {
                    return Err(Error::NotHomomorphism(g, h));
                }
            }
        }
        if let Some(g) = group
            .elements()
            .find(|&g| g != group.identity() && map[g].is_identity())
        {
            return Err(Error::NotEffective(g));
        }
        Ok(GroupAction { group, degree, map })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.map[g].apply(x)
    }

    pub fn perm(&self, g: usize) -> &Perm {
        &self.map[g]
    }

    pub fn perms(&self) -> &[Perm] {
        &self.map
    }

    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        self.map.iter().map(|p| p.apply(x)).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// The trivial group acting on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        GroupAction {
            group: FiniteGroup::trivial(),
            degree,
            map: vec![Perm::identity(degree)],
        }
    }
}

/// Closes `gens` under composition. Elements are ordered by breadth-first
/// discovery from the identity (multiplying on the right by generators).
pub fn group_from_generators(gens: &[Perm], degree: usize, cap: usize) -> Result<(FiniteGroup, GroupAction)> {
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: g.degree(),
        });
    }
    let id = Perm::identity(degree);
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elems.len() {
        for g in gens {
            let y = elems[head].compose(g);
            if !index.contains_key(&y) {
                if elems.len() >= cap {
                    return Err(Error::OrderLimitExceeded {
                        size: elems.len() + 1,
                        cap,
                    });
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        head += 1;
    }
    build_from_perm_list(elems, index, degree)
}

/// Builds a group from a list of permutations that is already closed under
/// composition (e.g. an isometry group). The list order becomes the index order.
pub fn group_from_perm_list(perms: Vec<Perm>, degree: usize) -> Result<(FiniteGroup, GroupAction)> {
    let index: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    if index.len() != perms.len() {
        return Err(Error::InvalidArgument("duplicate permutations".into()));
    }
    build_from_perm_list(perms, index, degree)
}

fn build_from_perm_list(
    elems: Vec<Perm>,
    index: HashMap<Perm, usize>,
    degree: usize,
) -> Result<(FiniteGroup, GroupAction)> {
    let n = elems.len();
    let identity = *index
        .get(&Perm::identity(degree))
        .ok_or_else(|| Error::InvalidArgument("permutation list lacks the identity".into()))?;
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            let c = a.compose(b);
            match index.get(&c) {
                Some(&i) => table.push(i),
                None => return Err(Error::InvalidArgument("permutation list is not closed".into())),
            }
        }
    }
    let inverses = elems.iter().map(|p| index[&p.inverse()]).collect();
    let group = FiniteGroup {
        order: n,
        table,
        identity,
        inverses,
    };
    let action = GroupAction {
        group: group.clone(),
        degree,
        map: elems,
    };
    Ok((group, action))
}

/// Structural summary of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub abelian: bool,
    pub boolean: bool,
    pub exponent: usize,
    pub center: BTreeSet<usize>,
    pub squares: BTreeSet<usize>,
}

pub fn structure_report(g: &FiniteGroup) -> StructureReport {
    let exponent = g.elements().map(|x| g.element_order(x)).fold(1, lcm);
    StructureReport {
        abelian: g.is_abelian(),
        boolean: g.is_boolean(),
        exponent,
        center: g.center(),
        squares: g.squares(),
    }
}

fn lcm(a: usize, b: usize) -> usize {
    num_integer::lcm(a, b)
}

/// All subgroups of index exactly 2, sorted as ascending element lists.
///
/// Every such subgroup contains the subgroup `S` generated by all squares, and
/// `G/S` is elementary abelian; the index-2 subgroups are the kernels of the
/// nonzero functionals on `G/S` viewed as a vector space over GF(2).
pub fn index2_subgroups(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
    if !g.order().is_multiple_of(2) {
        return Vec::new();
    }
    let squares: Vec<usize> = g.squares().into_iter().collect();
    let mut span_gens = squares.clone();
    let mut basis = Vec::new();
    let mut span = g.subgroup_generated(&span_gens);
    for x in g.elements() {
        if span.len() == g.order() {
            break;
        }
        if !span.contains(&x) {
            basis.push(x);
            span_gens.push(x);
            span = g.subgroup_generated(&span_gens);
        }
    }
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    // Coordinates of each element in G/S.
    let mut coord: Vec<Option<u64>> = vec![None; g.order()];
    coord[g.identity()] = Some(0);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let c = coord[x].unwrap();
        let steps = squares
            .iter()
            .map(|&s| (s, 0u64))
            .chain(basis.iter().enumerate().map(|(i, &b)| (b, 1u64 << i)));
        for (s, flip) in steps {
            let y = g.mul(x, s);
            if coord[y].is_none() {
                coord[y] = Some(c ^ flip);
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<BTreeSet<usize>> = (1u64..(1u64 << k))
        .map(|functional| {
            g.elements()
                .filter(|&x| (coord[x].unwrap() & functional).count_ones().is_multiple_of(2))
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out
}

fn fingerprint(g: &FiniteGroup) -> (usize, BTreeMap<usize, usize>, usize, usize) {
    let mut orders = BTreeMap::new();
    for x in g.elements() {
        *orders.entry(g.element_order(x)).or_insert(0) += 1;
    }
    (g.order(), orders, g.center().len(), g.squares().len())
}

/// Finds an isomorphism `G → H` as an element map, or `None`.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Result<Option<Vec<usize>>> {
    find_isomorphism_pinned(g, h, &[], cap)
}

/// Isomorphism search with some element images fixed in advance.
///
/// Backtracks over images of the canonical generators of `G` (pinned
/// elements first), extending each partial assignment to the generated
/// subgroup and rejecting it on the first inconsistency.
pub fn find_isomorphism_pinned(
    g: &FiniteGroup,
    h: &FiniteGroup,
    pins: &[(usize, usize)],
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    for grp in [g, h] {
        if grp.order() > cap {
            return Err(Error::OrderLimitExceeded {
                size: grp.order(),
                cap,
            });
        }
    }
    if fingerprint(g) != fingerprint(h) {
        return Ok(None);
    }
    let mut gens: Vec<usize> = pins.iter().map(|&(x, _)| x).collect();
    for x in g.canonical_generators() {
        if !gens.contains(&x) {
            gens.push(x);
        }
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i < pins.len() {
                vec![pins[i].1]
            } else {
                let ord = g.element_order(x);
                h.elements().filter(|&y| h.element_order(y) == ord).collect()
            }
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(iso_backtrack(g, h, &gens, &candidates, &mut images))
}

fn iso_backtrack(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let level = images.len();
    if level == gens.len() {
        let phi = extend_hom(g, h, gens, images)?;
        return (phi.iter().all(Option::is_some)).then(|| phi.into_iter().map(Option::unwrap).collect());
    }
    for &c in &candidates[level] {
        images.push(c);
        if extend_hom(g, h, &gens[..=level], images).is_some() {
            if let Some(found) = iso_backtrack(g, h, gens, candidates, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] ↦ images[i]` over the generated subgroup by BFS along
/// right multiplication; `None` on inconsistency or loss of injectivity.
fn extend_hom(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut phi: Vec<Option<usize>> = vec![None; g.order()];
    let mut used = vec![false; h.order()];
    phi[g.identity()] = Some(h.identity());
    used[h.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let px = phi[x].unwrap();
        for (&s, &ps) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let py = h.mul(px, ps);
            match phi[y] {
                Some(v) if v != py => return None,
                Some(_) => {}
                None => {
                    if used[py] {
                        return None;
                    }
                    used[py] = true;
                    phi[y] = Some(py);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(phi)
}
