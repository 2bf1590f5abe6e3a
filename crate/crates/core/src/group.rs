//! Abstract finite groups given by Cayley tables, and involutory automorphisms.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Groups up to this order get a full associativity check on load.
pub const FULL_ASSOCIATIVITY_ORDER: usize = 128;
/// Default order cap for `rank`.
pub const RANK_CAP: usize = 256;

/// A group of order `m` on element indices `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if identity >= m {
            return Err(Error::InvalidGroup(format!("identity index {identity} out of range")));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&c) = row.iter().find(|&&c| c >= m) {
                return Err(Error::InvalidGroup(format!("entry {c} in row {a} out of range")));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if row[identity] != a || table[identity][a] != a {
                return Err(Error::InvalidGroup(format!("{identity} is not an identity for {a}")));
            }
        }
        let mut inverses = vec![usize::MAX; m];
        for a in 0..m {
            match (0..m).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses[a] = b,
                None => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        let g = FiniteGroup { name: name.into(), table, identity, inverses };
        g.check_associativity()?;
        Ok(g)
    }

    fn check_associativity(&self) -> Result<()> {
        let m = self.order();
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if m <= FULL_ASSOCIATIVITY_ORDER {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                }
            }
        }
        Ok(())
    }

    /// The group of a permutation group, elements in its sorted order.
    pub fn from_perm_group(name: impl Into<String>, g: &PermGroup) -> Self {
        let els = g.elements();
        let table = els
            .iter()
            .map(|a| els.iter().map(|b| g.index_of(&a.compose(b).unwrap()).unwrap()).collect())
            .collect();
        let identity = g.index_of(&Permutation::identity(g.degree())).unwrap();
        Self::from_table(name, table, identity).expect("permutation groups are groups")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let a = list[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !members[b] {
                    members[b] = true;
                    list.push(b);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// Smallest size of a generating set, with the lexicographically first
    /// such set by element index.
    pub fn rank(&self) -> Result<(usize, Vec<usize>)> {
        self.rank_capped(RANK_CAP)
    }

    pub fn rank_capped(&self, cap: usize) -> Result<(usize, Vec<usize>)> {
        let m = self.order();
        if m > cap {
            return Err(Error::ResourceCap { what: "group order for rank", cap: cap as u64 });
        }
        if m == 1 {
            return Ok((0, Vec::new()));
        }
        let candidates: Vec<usize> = (0..m).filter(|&a| a != self.identity).collect();
        for k in 1.. {
            let mut chosen = Vec::with_capacity(k);
            if let Some(w) = self.rank_search(&candidates, 0, k, &mut chosen) {
                return Ok((k, w));
            }
        }
        unreachable!("the whole group generates itself")
    }

    fn rank_search(&self, cands: &[usize], from: usize, k: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
        if chosen.len() == k {
            return (self.subgroup(chosen).len() == self.order()).then(|| chosen.clone());
        }
        // a generator already inside the span of the earlier ones is wasted
        let span = self.subgroup(chosen);
        for i in from..cands.len() {
            if span.binary_search(&cands[i]).is_ok() {
                continue;
            }
            chosen.push(cands[i]);
            if let Some(w) = self.rank_search(cands, i + 1, k, chosen) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }

    pub fn generates(&self, set: &[usize]) -> bool {
        self.subgroup(set).len() == self.order()
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let m = self.order();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for a in 0..m {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..m).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class.into_iter().collect());
        }
        out.sort_by_key(|c: &Vec<usize>| c[0]);
        out
    }

    /// The subgroup on `elements` (sorted) as a group in its own right;
    /// index `i` of the result stands for `elements[i]`.
    pub fn restrict(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos = |x: usize| {
            elements
                .binary_search(&x)
                .map_err(|_| Error::InvalidGroup(format!("{x} escapes the subset")))
        };
        let table = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        FiniteGroup::from_table(format!("{}|sub", self.name), table, pos(self.identity)?)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (ma, mb) = (a.order(), b.order());
        let table = (0..ma * mb)
            .map(|x| {
                (0..ma * mb)
                    .map(|y| a.mul(x / mb, y / mb) * mb + b.mul(x % mb, y % mb))
                    .collect()
            })
            .collect();
        let id = a.identity * mb + b.identity;
        FiniteGroup::from_table(format!("{}x{}", a.name, b.name), table, id).expect("product of groups")
    }
}

/// Built-in groups.
pub mod builtin {
    use super::*;

    pub fn trivial() -> FiniteGroup {
        cyclic(1).expect("order 1")
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidGroup("Z:0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(format!("Z:{n}"), table, 0)
    }

    /// ℤ₂^k with elements as k-bit masks.
    pub fn elementary_abelian_2(k: u32) -> Result<FiniteGroup> {
        if k > 7 {
            return Err(Error::InvalidGroup(format!("Z2^:{k} too large for a Cayley table")));
        }
        let m = 1usize << k;
        let table = (0..m).map(|a| (0..m).map(|b| a ^ b).collect()).collect();
        FiniteGroup::from_table(format!("Z2^:{k}"), table, 0)
    }

    /// Dihedral group of order 2n; index `i + n*b` stands for r^i s^b.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidGroup("D:0".into()));
        }
        let m = 2 * n;
        let mul = |x: usize, y: usize| {
            let (i, b) = (x % n, x / n);
            let (j, c) = (y % n, y / n);
            // r^i s^b r^j s^c = r^{i ± j} s^{b+c}
            let k = if b == 0 { (i + j) % n } else { (i + n - j) % n };
            k + n * ((b + c) % 2)
        };
        let table = (0..m).map(|x| (0..m).map(|y| mul(x, y)).collect()).collect();
        FiniteGroup::from_table(format!("D:{n}"), table, 0)
    }

    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        if !(1..=5).contains(&n) {
            return Err(Error::InvalidGroup(format!("S:{n} outside the supported range 1..=5")));
        }
        let gens: Vec<Permutation> = if n == 1 {
            Vec::new()
        } else {
            vec![
                Permutation::from_cycles(n, &[&[0, 1]]).unwrap(),
                Permutation::from_images((1..n).chain([0]).collect()).unwrap(),
            ]
        };
        let g = PermGroup::closure(n, &gens)?;
        Ok(FiniteGroup::from_perm_group(format!("S:{n}"), &g))
    }

    /// Parse `Z:n`, `Z2^:k`, `D:n`, `S:n`, `prod:A,B`.
    pub fn by_name(spec: &str) -> Result<FiniteGroup> {
        let bad = || Error::InvalidGroup(format!("unknown group {spec:?}"));
        if let Some(rest) = spec.strip_prefix("prod:") {
            let parts = split_product(rest).ok_or_else(bad)?;
            let a = by_name(parts.0)?;
            let b = by_name(parts.1)?;
            return Ok(FiniteGroup::direct_product(&a, &b));
        }
        if spec == "1" || spec.eq_ignore_ascii_case("trivial") {
            return Ok(trivial());
        }
        let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
        let n: usize = arg.parse().map_err(|_| bad())?;
        match kind {
            "Z" => cyclic(n),
            "Z2^" => elementary_abelian_2(n as u32),
            "D" => dihedral(n),
            "S" => symmetric(n),
            _ => Err(bad()),
        }
    }

    /// Split `A,B` at the comma that separates two well-formed names;
    /// `prod:prod:Z:2,Z:2,Z:3` splits after the nested product.
    fn split_product(s: &str) -> Option<(&str, &str)> {
        s.match_indices(',')
            .map(|(i, _)| (&s[..i], &s[i + 1..]))
            .find(|(a, b)| by_name(a).is_ok() && by_name(b).is_ok())
    }

    /// Every built-in group of order at most `max_order` (one name per isomorphism
    /// type is not attempted; duplicates such as Z:2 and S:2 both appear).
    pub fn catalogue(max_order: usize) -> Vec<FiniteGroup> {
        let mut names: Vec<String> = Vec::new();
        names.extend((1..=max_order).map(|n| format!("Z:{n}")));
        names.extend((1..=7u32).filter(|k| 1usize << k <= max_order).map(|k| format!("Z2^:{k}")));
        names.extend((2..=max_order / 2).map(|n| format!("D:{n}")));
        names.extend((3..=5).filter(|&n| (1..=n).product::<usize>() <= max_order).map(|n| format!("S:{n}")));
        let small = ["Z:2", "Z:3", "Z:4", "S:3", "D:4", "Z2^:2"];
        for a in small {
            for b in small {
                names.push(format!("prod:{a},{b}"));
            }
        }
        names
            .iter()
            .filter_map(|n| by_name(n).ok())
            .filter(|g| g.order() <= max_order)
            .collect()
    }
}

/// An involutory automorphism σ of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAutomorphism {
    map: Vec<usize>,
}

impl GroupAutomorphism {
    /// Validates that `map` is a bijective homomorphism with `σ∘σ = id`.
    pub fn new(group: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let m = group.order();
        if map.len() != m {
            return Err(Error::InvalidGroup(format!("sigma has {} entries for order {m}", map.len())));
        }
        Permutation::from_images(map.clone())
            .map_err(|_| Error::InvalidGroup("sigma is not a bijection".into()))?;
        for a in 0..m {
            if map[map[a]] != a {
                return Err(Error::InvalidGroup(format!("sigma is not an involution at {a}")));
            }
            for b in 0..m {
                if map[group.mul(a, b)] != group.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroup(format!("sigma is not a homomorphism at ({a},{b})")));
                }
            }
        }
        Ok(GroupAutomorphism { map })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupAutomorphism { map: (0..group.order()).collect() }
    }

    pub fn inversion(group: &FiniteGroup) -> Result<Self> {
        Self::new(group, (0..group.order()).map(|a| group.inv(a)).collect())
    }

    /// Conjugation `h ↦ t h t⁻¹`; involutory only when `t²` is central.
    pub fn conjugation(group: &FiniteGroup, t: usize) -> Result<Self> {
        if t >= group.order() {
            return Err(Error::NotMember(t.to_string()));
        }
        Self::new(group, (0..group.order()).map(|h| group.mul(group.mul(t, h), group.inv(t))).collect())
    }

    /// `id`, `inv`, `conj:t`, or an explicit comma-separated image list.
    pub fn by_name(group: &FiniteGroup, spec: &str) -> Result<Self> {
        match spec {
            "id" | "identity" => Ok(Self::identity(group)),
            "inv" | "inversion" => Self::inversion(group),
            _ => {
                if let Some(t) = spec.strip_prefix("conj:") {
                    let t = t.parse().map_err(|_| Error::InvalidGroup(format!("bad conjugator {t:?}")))?;
                    return Self::conjugation(group, t);
                }
                let map: std::result::Result<Vec<usize>, _> =
                    spec.trim_start_matches("map:").split(',').map(str::parse).collect();
                Self::new(group, map.map_err(|_| Error::InvalidGroup(format!("unknown sigma {spec:?}")))?)
            }
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&a| self.map[a] == a).collect()
    }

    /// Every involutory automorphism of `group` (brute force; small groups only).
    pub fn all_involutory(group: &FiniteGroup) -> Result<Vec<Self>> {
        let (_, gens) = group.rank()?;
        let m = group.order();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        Self::extend_images(group, &gens, 0, &mut images, m, &mut out);
        Ok(out)
    }

    fn extend_images(group: &FiniteGroup, gens: &[usize], i: usize, images: &mut Vec<usize>, m: usize, out: &mut Vec<Self>) {
        if i == gens.len() {
            if let Some(map) = extend_hom(group, gens, images) {
                if let Ok(s) = Self::new(group, map) {
                    out.push(s);
                }
            }
            return;
        }
        for x in 0..m {
            if group.element_order(x) == group.element_order(gens[i]) {
                images[i] = x;
                Self::extend_images(group, gens, i + 1, images, m, out);
            }
        }
    }
}

/// Extend generator images to a map on all elements, if consistent.
fn extend_hom(group: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let m = group.order();
    let mut map = vec![usize::MAX; m];
    map[group.identity()] = group.identity();
    let mut queue = vec![group.identity()];
    while let Some(a) = queue.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let b = group.mul(a, g);
            let fb = group.mul(map[a], img);
            if map[b] == usize::MAX {
                map[b] = fb;
                queue.push(b);
            } else if map[b] != fb {
                return None;
            }
        }
    }
    Some(map)
}

/// Group plus involution in the JSON interchange form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
}

impl GroupJson {
    pub fn load(self) -> Result<(FiniteGroup, Option<GroupAutomorphism>)> {
        if self.order != self.table.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        let g = FiniteGroup::from_table("json", self.table, self.identity)?;
        let sigma = self.sigma.map(|s| GroupAutomorphism::new(&g, s)).transpose()?;
        Ok((g, sigma))
    }

    pub fn from_group(g: &FiniteGroup, sigma: Option<&GroupAutomorphism>) -> Self {
        GroupJson {
            order: g.order(),
            table: g.table.clone(),
            identity: g.identity,
            sigma: sigma.map(|s| s.map.clone()),
        }
    }
}
