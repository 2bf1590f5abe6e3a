//! The semidirect product `H ⋊_σ ℤ₂` for an involutory automorphism σ.
//!
//! Element `(h, b)` has index `h + b·|H|`; `x = (e, 1)` is the swap element.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAutomorphism};

#[derive(Clone, Debug)]
pub struct SemidirectZ2<'a> {
    base: &'a FiniteGroup,
    sigma: &'a GroupAutomorphism,
}

impl<'a> SemidirectZ2<'a> {
    pub fn new(base: &'a FiniteGroup, sigma: &'a GroupAutomorphism) -> Result<Self> {
        if sigma.map().len() != base.order() {
            return Err(Error::InvalidGroup("sigma does not match the base group".into()));
        }
        Ok(SemidirectZ2 { base, sigma })
    }

    pub fn base(&self) -> &FiniteGroup {
        self.base
    }

    pub fn sigma(&self) -> &GroupAutomorphism {
        self.sigma
    }

    pub fn order(&self) -> usize {
        2 * self.base.order()
    }

    pub fn element(&self, h: usize, b: bool) -> usize {
        h + b as usize * self.base.order()
    }

    pub fn parts(&self, g: usize) -> (usize, bool) {
        let m = self.base.order();
        (g % m, g >= m)
    }

    pub fn x(&self) -> usize {
        self.element(self.base.identity(), true)
    }

    pub fn identity(&self) -> usize {
        self.base.identity()
    }

    pub fn mul(&self, g1: usize, g2: usize) -> usize {
        let (h1, b1) = self.parts(g1);
        let (h2, b2) = self.parts(g2);
        let twisted = if b1 { self.sigma.apply(h2) } else { h2 };
        self.element(self.base.mul(h1, twisted), b1 ^ b2)
    }

    pub fn inv(&self, g: usize) -> usize {
        let (h, b) = self.parts(g);
        // (h,b)⁻¹ = (σ^b(h⁻¹), b)
        let hi = self.base.inv(h);
        self.element(if b { self.sigma.apply(hi) } else { hi }, b)
    }

    pub fn conjugate(&self, y: usize, g: usize) -> usize {
        self.mul(self.mul(y, g), self.inv(y))
    }

    pub fn conjugacy_class(&self, g: usize) -> BTreeSet<usize> {
        (0..self.order()).map(|y| self.conjugate(y, g)).collect()
    }

    /// All conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if !seen[g] {
                let class = self.conjugacy_class(g);
                for &c in &class {
                    seen[c] = true;
                }
                out.push(class.into_iter().collect());
            }
        }
        out
    }

    /// `S(H,σ)`: the elements `(h,1)` of order at most two, i.e. `σ(h) = h⁻¹`.
    pub fn s_set(&self) -> Vec<usize> {
        (0..self.base.order())
            .filter(|&h| self.sigma.apply(h) == self.base.inv(h))
            .map(|h| self.element(h, true))
            .collect()
    }

    /// Conjugacy classes of the whole group that meet `S(H,σ)`.
    pub fn s_classes(&self) -> Vec<Vec<usize>> {
        let s: BTreeSet<usize> = self.s_set().into_iter().collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &g in &s {
            if seen.contains(&g) {
                continue;
            }
            let class = self.conjugacy_class(g);
            debug_assert!(class.is_subset(&s), "conjugation preserves S(H,σ)");
            seen.extend(class.iter().copied());
            out.push(class.into_iter().collect());
        }
        out
    }

    pub fn count_tf_classes(&self) -> usize {
        self.s_classes().len()
    }

    /// Conjugate of `(h,1)` whose `H`-part has 2-power order: with
    /// `ord(h) = 2^k (2l+1)` this is `(h^{2l+1}, 1)`.
    pub fn reduce_to_2power_rep(&self, s: usize) -> Result<usize> {
        let (h, b) = self.parts(s);
        if !b || self.sigma.apply(h) != self.base.inv(h) {
            return Err(Error::NotMember(format!("element {s} of S(H,sigma)")));
        }
        let mut odd = self.base.element_order(h);
        while odd.is_multiple_of(2) {
            odd /= 2;
        }
        Ok(self.element(self.base.pow(h, odd), true))
    }
}

/// Largest power of two dividing `m`.
pub fn two_part(m: usize) -> usize {
    1 << m.trailing_zeros()
}

#[derive(Clone, Debug, Serialize)]
pub struct SylowReport {
    pub group: String,
    pub order: usize,
    pub sylow_order: usize,
    pub count_h: usize,
    pub count_p2: usize,
    pub bound_2k: usize,
    pub holds: bool,
}

/// Largest order for which the invariant Sylow subgroup search is attempted.
pub const SYLOW_SEARCH_CAP: usize = 64;

/// A σ-invariant Sylow 2-subgroup of `H`, as a sorted element list.
pub fn sigma_invariant_sylow2(h: &FiniteGroup, sigma: &GroupAutomorphism) -> Result<Vec<usize>> {
    if h.order() > SYLOW_SEARCH_CAP {
        return Err(Error::ResourceCap { what: "group order for Sylow search", cap: SYLOW_SEARCH_CAP as u64 });
    }
    let target = two_part(h.order());
    let two_power: Vec<usize> =
        (0..h.order()).filter(|&a| (h.element_order(a) as usize).is_power_of_two()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![vec![h.identity()]];
    while let Some(p) = stack.pop() {
        if p.len() == target {
            return Ok(p);
        }
        for &g in &two_power {
            if p.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = p.clone();
            gens.extend([g, sigma.apply(g)]);
            let q = h.subgroup(&gens);
            if q.len().is_power_of_two() && q.len() <= target && seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    Err(Error::Internal(format!("no sigma-invariant Sylow 2-subgroup of {}", h.name())))
}

/// Compare class counts of `H` and of a σ-invariant Sylow 2-subgroup against `2^k`.
pub fn sylow2_invariant_bound_check(h: &FiniteGroup, sigma: &GroupAutomorphism) -> Result<SylowReport> {
    let p2 = sigma_invariant_sylow2(h, sigma)?;
    let sub = h.restrict(&p2)?;
    let sub_sigma = GroupAutomorphism::new(
        &sub,
        p2.iter().map(|&a| p2.binary_search(&sigma.apply(a)).expect("invariant")).collect(),
    )?;
    let count_h = SemidirectZ2::new(h, sigma)?.count_tf_classes();
    let count_p2 = SemidirectZ2::new(&sub, &sub_sigma)?.count_tf_classes();
    let bound_2k = two_part(h.order());
    Ok(SylowReport {
        group: h.name().to_string(),
        order: h.order(),
        sylow_order: p2.len(),
        count_h,
        count_p2,
        bound_2k,
        holds: count_h <= count_p2 && count_p2 <= bound_2k,
    })
}
