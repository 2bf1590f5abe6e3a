//! Vertex permutations and permutation groups given by full enumeration.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the number of elements `PermGroup::closure` will enumerate.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A bijection on `0..n`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x >= n || y >= n {
                    return Err(Error::InvalidPermutation(format!("point out of range in {cycle:?}")));
                }
                images[x] = y;
            }
        }
        Self::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
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

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Permutation::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            out = base.compose_unchecked(&out);
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let mut x = self.images[s];
            while x != s {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_lcm(acc, c.len() as u64))
    }

    /// Orbits of the cyclic group generated by `self`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.cycles()
    }

    /// Parse cycle notation such as `(0 1)(2 3 4)` or `()`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let flush = |number: &mut String, current: &mut Option<Vec<usize>>, at: usize| -> Result<()> {
            if !number.is_empty() {
                let v = number.parse().map_err(|_| Error::parse(at, "bad point"))?;
                current.as_mut().ok_or_else(|| Error::parse(at, "point outside a cycle"))?.push(v);
                number.clear();
            }
            Ok(())
        };
        for (at, ch) in text.char_indices() {
            match ch {
                '(' if current.is_none() => current = Some(Vec::new()),
                ')' => {
                    flush(&mut number, &mut current, at)?;
                    cycles.push(current.take().ok_or_else(|| Error::parse(at, "unbalanced `)`"))?);
                }
                c if c.is_ascii_digit() => number.push(c),
                ' ' | ',' => flush(&mut number, &mut current, at)?,
                _ => return Err(Error::parse(at, format!("unexpected {ch:?}"))),
            }
        }
        if current.is_some() {
            return Err(Error::parse(text.len(), "unterminated cycle"));
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(n, &refs)
    }
}

fn num_lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<Vec<usize>> =
            self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "()");
        }
        for c in nontrivial {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A permutation group held as a sorted list of all of its elements.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self::from_elements_unchecked(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    pub fn closure(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::closure_capped(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    /// Breadth-first closure under right multiplication by generators.
    pub fn closure_capped(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::from([(id.clone(), ())]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = p.compose_unchecked(g);
                if !seen.contains_key(&q) {
                    if elements.len() >= cap {
                        return Err(Error::ResourceCap { what: "permutation group closure", cap: cap as u64 });
                    }
                    seen.insert(q.clone(), ());
                    elements.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(Self::from_elements_unchecked(degree, generators.to_vec(), elements))
    }

    /// Wrap an element list already known to be a group.
    pub(crate) fn from_elements_unchecked(
        degree: usize,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
    ) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PermGroup { degree, generators, elements, index }
    }

    /// Accepts an arbitrary element list after checking closure.
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self> {
        let g = Self::from_elements_unchecked(degree, elements.clone(), elements);
        if !g.contains(&Permutation::identity(degree)) {
            return Err(Error::InvalidGroup("identity missing".into()));
        }
        for a in &g.elements {
            for b in &g.elements {
                if !g.contains(&a.compose_unchecked(b)) {
                    return Err(Error::InvalidGroup("not closed under composition".into()));
                }
            }
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in lexicographic order of image tables; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = if self.generators.is_empty() { &self.elements } else { &self.generators };
        gens.iter().all(|a| gens.iter().all(|b| a.compose_unchecked(b) == b.compose_unchecked(a)))
    }

    /// Orbits on points, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if seen[s] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|p| p.apply(s)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn basic_operations() {
        let a = p(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(a.order(), 6);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert_eq!(p(5, &[&[0, 1, 2]]).order(), 3);
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(a.to_string(), "(0 1)(2 3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(a.compose(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn composition_applies_right_operand_first() {
        let a = p(3, &[&[0, 1]]);
        let b = p(3, &[&[1, 2]]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(1), a.apply(b.apply(1)));
        assert_eq!(ab.apply(1), 2);
    }

    #[test]
    fn pow_and_parse() {
        let a = p(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(a.pow(6), Permutation::identity(5));
        assert_eq!(a.pow(-1), a.inverse());
        assert_eq!(a.pow(3), p(5, &[&[0, 1]]));
        assert_eq!(Permutation::parse_cycles(5, &a.to_string()).unwrap(), a);
        assert_eq!(Permutation::parse_cycles(5, "()").unwrap(), Permutation::identity(5));
        assert!(Permutation::parse_cycles(5, "(0 1").is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn closures() {
        let cyc = p(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert_eq!(PermGroup::closure(6, &[cyc]).unwrap().order(), 6);
        assert_eq!(PermGroup::closure(4, &[]).unwrap().order(), 1);
        let s5 = PermGroup::closure(5, &[p(5, &[&[0, 1]]), p(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(s5.order(), 120);
        assert!(s5.elements()[0].is_identity());
        assert!(matches!(
            PermGroup::closure_capped(5, s5.generators(), 50),
            Err(Error::ResourceCap { cap: 50, .. })
        ));
    }

    #[test]
    fn orbits_and_abelian() {
        let g = PermGroup::closure(5, &[p(5, &[&[0, 1]]), p(5, &[&[2, 3]])]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert!(g.is_abelian());
        let s3 = PermGroup::closure(3, &[p(3, &[&[0, 1]]), p(3, &[&[0, 1, 2]])]).unwrap();
        assert!(!s3.is_abelian());
    }
}
