//! The doubling construction `H ×_p {−1,1}` on a base pair `(H, p)`, its
//! recognition inside a given group, and the curated group zoo.
//!
//! Carrier convention for a double of `H`: `(h, 1)` has index `h` and
//! `(h, −1)` has index `|H| + h`, so the copy of `H` is the first half.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::groups::{
    find_isomorphism_pinned, group_from_generators, index2_subgroups, FiniteGroup, GroupAction, Perm,
    DEFAULT_CLOSURE_CAP,
};

/// An abelian group with a distinguished involution `p ≠ e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePair {
    group: FiniteGroup,
    p: usize,
}

impl BasePair {
    pub fn new(group: FiniteGroup, p: usize) -> Result<Self> {
        if p >= group.order() {
            return Err(Error::InvalidBasePair(format!("element {p} out of range")));
        }
        if !group.is_abelian() {
            return Err(Error::InvalidBasePair("group is not abelian".into()));
        }
        if p == group.identity() || group.square(p) != group.identity() {
            return Err(Error::InvalidBasePair(format!("{p} is not an involution")));
        }
        Ok(BasePair { group, p })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

/// A group together with an abelian index-2 subgroup whose complement
/// squares constantly to an involution `p̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleStructure {
    pub whole: FiniteGroup,
    pub subgroup: BTreeSet<usize>,
    pub p_tilde: usize,
}

impl DoubleStructure {
    /// Checks the defining properties against `whole`.
    pub fn validate(&self) -> bool {
        let g = &self.whole;
        let e = g.identity();
        self.subgroup.len() * 2 == g.order()
            && g.is_subgroup(&self.subgroup)
            && self
                .subgroup
                .iter()
                .all(|&a| self.subgroup.iter().all(|&b| g.commute(a, b)))
            && self.p_tilde != e
            && g.square(self.p_tilde) == e
            && g
                .elements()
                .filter(|x| !self.subgroup.contains(x))
                .all(|x| g.square(x) == self.p_tilde)
    }

    /// The base pair `(K, q)` with `K` relabelled in ascending index order.
    pub fn base_pair(&self) -> Result<BasePair> {
        let (k, embed) = self.whole.induced_subgroup(&self.subgroup)?;
        let q = embed.iter().position(|&x| x == self.p_tilde).expect("p̃ lies in the subgroup");
        BasePair::new(k, q)
    }
}

/// Builds `H ×_p {−1,1}` with the four-case product
/// `(x,1)(y,k) = (xy,k)`, `(x,−1)(y,1) = (xy⁻¹,−1)`, `(x,−1)(y,−1) = (xy⁻¹p,1)`.
pub fn double(bp: &BasePair) -> Result<(FiniteGroup, DoubleStructure)> {
    let h = &bp.group;
    let n = h.order();
    let enc = |x: usize, j: i8| if j == 1 { x } else { n + x };
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..2 * n {
        let (x, j) = if a < n { (a, 1i8) } else { (a - n, -1) };
        for b in 0..2 * n {
            let (y, k) = if b < n { (b, 1i8) } else { (b - n, -1) };
            table[a][b] = match (j, k) {
                (1, _) => enc(h.mul(x, y), k),
                (_, 1) => enc(h.mul(x, h.inv(y)), -1),
                _ => enc(h.mul(h.mul(x, h.inv(y)), bp.p), 1),
            };
        }
    }
    let whole = FiniteGroup::from_cayley(table, h.identity())?;
    let ds = DoubleStructure {
        whole: whole.clone(),
        subgroup: (0..n).collect(),
        p_tilde: bp.p,
    };
    Ok((whole, ds))
}

/// First index-2 abelian subgroup (in canonical subgroup order) whose
/// complement squares constantly to an involution.
pub fn recognize_double(g: &FiniteGroup) -> Option<DoubleStructure> {
    let e = g.identity();
    for k in index2_subgroups(g) {
        if !k.iter().all(|&a| k.iter().all(|&b| g.commute(a, b))) {
            continue;
        }
        let mut outside = g.elements().filter(|x| !k.contains(x));
        let Some(first) = outside.next() else { continue };
        let q = g.square(first);
        if q == e || g.square(q) != e || !outside.all(|x| g.square(x) == q) {
            continue;
        }
        return Some(DoubleStructure {
            whole: g.clone(),
            subgroup: k,
            p_tilde: q,
        });
    }
    None
}

/// `Φ`: identity on the subgroup, `z ↦ z·p̃` off it.
pub fn phi_automorphism(ds: &DoubleStructure) -> Perm {
    let g = &ds.whole;
    let images = g
        .elements()
        .map(|z| {
            if ds.subgroup.contains(&z) {
                z
            } else {
                g.mul(z, ds.p_tilde)
            }
        })
        .collect();
    Perm::from_images(images).expect("Φ is a bijection")
}

/// True iff some isomorphism of the groups carries `a.p` to `b.p`.
pub fn base_pair_isomorphic(a: &BasePair, b: &BasePair, cap: usize) -> Result<bool> {
    Ok(find_isomorphism_pinned(&a.group, &b.group, &[(a.p, b.p)], cap)?.is_some())
}

/// A zoo entry: a group and, for permutation-defined families, its natural action.
#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub group: FiniteGroup,
    pub action: Option<GroupAction>,
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic:0".into()));
    }
    FiniteGroup::from_cayley((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(), 0)
}

/// `{−1,1}^n` as bit vectors under xor; bit `i` set means coordinate `i+1` is `−1`.
pub fn boolean(n: usize) -> Result<FiniteGroup> {
    if n > 12 {
        return Err(Error::OrderLimitExceeded {
            size: 1 << n.min(63),
            cap: 1 << 12,
        });
    }
    let m = 1usize << n;
    FiniteGroup::from_cayley((0..m).map(|i| (0..m).map(|j| i ^ j).collect()).collect(), 0)
}

/// Quaternion group with elements `1, −1, i, −i, j, −j, k, −k` at indices `0..8`.
pub fn quaternion() -> FiniteGroup {
    // unit products: (basis index 0..4 = 1,i,j,k) -> (sign, basis)
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let decode = |x: usize| (if x.is_multiple_of(2) { 1i8 } else { -1 }, x / 2);
    let encode = |s: i8, b: usize| 2 * b + usize::from(s < 0);
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, ba) = decode(a);
                    let (sb, bb) = decode(b);
                    let (s, c) = UNIT[ba][bb];
                    encode(sa * sb * s, c)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_cayley(table, 0).expect("quaternion table is a group")
}

fn perm_family(gens: Vec<Perm>, degree: usize) -> Result<ZooEntry> {
    let (group, action) = group_from_generators(&gens, degree, DEFAULT_CLOSURE_CAP)?;
    Ok(ZooEntry {
        group,
        action: Some(action),
    })
}

pub fn symmetric(n: usize) -> Result<ZooEntry> {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::from_cycles(n, &[&[0, 1]])?);
        let cycle: Vec<usize> = (0..n).collect();
        gens.push(Perm::from_cycles(n, &[&cycle])?);
    }
    perm_family(gens, n)
}

pub fn alternating(n: usize) -> Result<ZooEntry> {
    let gens = (2..n)
        .map(|k| Perm::from_cycles(n, &[&[0, 1, k]]))
        .collect::<Result<Vec<_>>>()?;
    perm_family(gens, n)
}

/// Symmetries of the regular `n`-gon acting on its vertices (order `2n`).
pub fn dihedral(n: usize) -> Result<ZooEntry> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("dihedral:{n} needs n >= 3")));
    }
    let rot = Perm::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    let refl = Perm::from_images((0..n).map(|i| (n - i) % n).collect())?;
    perm_family(vec![rot, refl], n)
}

/// `IS(n) = double(double(B(n), p(n)), p̃(n))` with `p(n)` the involution that
/// is `−1` in the first coordinate only.
pub fn iso_singular(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("IS:0".into()));
    }
    let inner = BasePair::new(boolean(n)?, 1)?;
    let (k, ds) = double(&inner)?;
    let outer = BasePair::new(k, ds.p_tilde)?;
    Ok(double(&outer)?.0)
}

fn parse_count(name: &str, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::UnknownName(name.to_string()))
}

/// Looks up a group by name.
///
/// Grammar: `trivial`, `cyclic:n`, `boolean:n`, `dihedral:n`, `quaternion`,
/// `sym:n`, `alt:n`, `IS:n`, `abelian:n1,n2,...` (direct product of cyclic
/// groups), and `double:<source>:<p-index>` where `<source>` is a group file
/// path or another zoo name.
pub fn zoo(name: &str) -> Result<ZooEntry> {
    zoo_with_loader(name, &|path: &Path| {
        let text = std::fs::read_to_string(path)?;
        Ok(crate::io::parse_group_file(&text)?.1)
    })
}

pub(crate) fn zoo_with_loader(name: &str, load: &dyn Fn(&Path) -> Result<FiniteGroup>) -> Result<ZooEntry> {
    let plain = |group: FiniteGroup| ZooEntry { group, action: None };
    if let Some(rest) = name.strip_prefix("double:") {
        let (source, p) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let p = parse_count(name, p)?;
        let inner = if Path::new(source).is_file() {
            load(Path::new(source))?
        } else {
            zoo_with_loader(source, load)?.group
        };
        return Ok(plain(double(&BasePair::new(inner, p)?)?.0));
    }
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    match (head, arg) {
        ("trivial", None) => Ok(plain(FiniteGroup::trivial())),
        ("quaternion", None) => Ok(plain(quaternion())),
        ("cyclic", Some(n)) => Ok(plain(cyclic(parse_count(name, n)?)?)),
        ("boolean", Some(n)) => Ok(plain(boolean(parse_count(name, n)?)?)),
        ("dihedral", Some(n)) => dihedral(parse_count(name, n)?),
        ("sym", Some(n)) => symmetric(parse_count(name, n)?),
        ("alt", Some(n)) => alternating(parse_count(name, n)?),
        ("IS", Some(n)) => Ok(plain(iso_singular(parse_count(name, n)?)?)),
        ("abelian", Some(list)) => {
            let mut g = FiniteGroup::trivial();
            for part in list.split(',') {
                g = g.direct_product(&cyclic(parse_count(name, part.trim())?)?);
                if g.order() > DEFAULT_CLOSURE_CAP {
                    return Err(Error::OrderLimitExceeded {
                        size: g.order(),
                        cap: DEFAULT_CLOSURE_CAP,
                    });
                }
            }
            Ok(plain(g))
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// The curated census universe, keyed by zoo name.
pub const CURATED_ZOO: [&str; 18] = [
    "trivial",
    "cyclic:2",
    "boolean:2",
    "boolean:3",
    "sym:3",
    "dihedral:4",
    "alt:4",
    "sym:4",
    "dihedral:6",
    "cyclic:4",
    "cyclic:6",
    "cyclic:8",
    "abelian:2,4",
    "double:boolean:2:1",
    "quaternion",
    "IS:1",
    "IS:2",
    "double:cyclic:4:2",
];

pub fn curated_zoo() -> Result<Vec<(String, FiniteGroup)>> {
    CURATED_ZOO
        .iter()
        .map(|name| Ok((name.to_string(), zoo(name)?.group)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{find_isomorphism, structure_report, DEFAULT_ISO_CAP};

    #[test]
    fn double_of_z2_is_z4() {
        let (g, ds) = double(&BasePair::new(cyclic(2).unwrap(), 1).unwrap()).unwrap();
        assert!(ds.validate());
        assert!(find_isomorphism(&g, &cyclic(4).unwrap(), DEFAULT_ISO_CAP).unwrap().is_some());
    }

    #[test]
    fn double_of_klein_is_abelian() {
        let (g, _) = double(&BasePair::new(boolean(2).unwrap(), 3).unwrap()).unwrap();
        let r = structure_report(&g);
        assert!(r.abelian && !r.boolean);
    }

    #[test]
    fn invalid_base_pairs() {
        assert!(matches!(BasePair::new(cyclic(4).unwrap(), 1), Err(Error::InvalidBasePair(_))));
        assert!(matches!(BasePair::new(cyclic(4).unwrap(), 0), Err(Error::InvalidBasePair(_))));
        let s3 = symmetric(3).unwrap().group;
        let inv = s3.elements().find(|&x| x != 0 && s3.square(x) == 0).unwrap();
        assert!(matches!(BasePair::new(s3, inv), Err(Error::InvalidBasePair(_))));
    }

    #[test]
    fn recognition_examples() {
        let q = recognize_double(&quaternion()).unwrap();
        assert_eq!(q.subgroup.len(), 4);
        assert_eq!(q.p_tilde, 1);
        assert!(recognize_double(&dihedral(4).unwrap().group).is_none());
        assert!(recognize_double(&cyclic(3).unwrap()).is_none());
    }

    #[test]
    fn phi_examples() {
        let (_, ds) = double(&BasePair::new(cyclic(2).unwrap(), 1).unwrap()).unwrap();
        let phi = phi_automorphism(&ds);
        assert_eq!(phi.images(), &[0, 1, 3, 2]);
        assert!(phi.compose(&phi).is_identity());
    }

    #[test]
    fn base_pair_iso_examples() {
        let b2 = boolean(2).unwrap();
        let a = BasePair::new(b2.clone(), 1).unwrap();
        let b = BasePair::new(b2.clone(), 2).unwrap();
        let c = BasePair::new(b2, 3).unwrap();
        assert!(base_pair_isomorphic(&a, &b, DEFAULT_ISO_CAP).unwrap());
        assert!(base_pair_isomorphic(&a, &c, DEFAULT_ISO_CAP).unwrap());
        let z4 = BasePair::new(cyclic(4).unwrap(), 2).unwrap();
        assert!(!base_pair_isomorphic(&z4, &a, DEFAULT_ISO_CAP).unwrap());
    }

    #[test]
    fn zoo_names() {
        assert_eq!(zoo("IS:1").unwrap().group.order(), 8);
        assert_eq!(zoo("boolean:3").unwrap().group.order(), 8);
        let is2 = structure_report(&zoo("IS:2").unwrap().group);
        assert!(!is2.abelian);
        assert_eq!(is2.exponent, 4);
        assert_eq!(zoo("sym:4").unwrap().group.order(), 24);
        assert_eq!(zoo("alt:4").unwrap().group.order(), 12);
        assert_eq!(zoo("dihedral:6").unwrap().group.order(), 12);
        assert_eq!(zoo("abelian:2,4").unwrap().group.order(), 8);
        assert_eq!(zoo("double:cyclic:4:2").unwrap().group.order(), 8);
        assert!(matches!(zoo("nonsense"), Err(Error::UnknownName(_))));
        assert!(matches!(zoo("cyclic:x"), Err(Error::UnknownName(_))));
        assert!(matches!(zoo("sym:9"), Err(Error::OrderLimitExceeded { .. })));
    }
}
