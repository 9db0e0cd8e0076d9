//! Permutation groups given by generators, with a lazily built stabilizer chain.

mod bsgs;
mod hom;
mod search;
mod series;

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bsgs::{Bsgs, Level};
pub use hom::ActionHom;
pub use search::{conjugating_element, conjugating_subgroups, intersection};
pub use series::{derived_series, derived_subgroup, is_solvable, normal_closure, solvable_residual};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Seed used for internal known-order chain rebuilds. Any seed gives the same
/// group; a fixed one keeps base choices reproducible.
pub(crate) const INTERNAL_SEED: u64 = 0x5eed_c0de;

#[derive(Clone)]
pub struct Group {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<Arc<Bsgs>>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("generators", &self.gens)
            .finish()
    }
}

impl Group {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::Degree(degree, g.degree()));
            }
        }
        Ok(Self::from_gens_unchecked(degree, gens))
    }

    pub(crate) fn from_gens_unchecked(degree: usize, gens: Vec<Perm>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_identity() && seen.insert(g.clone()))
            .collect();
        Group {
            degree,
            gens,
            chain: OnceLock::new(),
        }
    }

    /// A group with a chain already at hand; the generators are taken from it.
    pub fn from_chain(chain: Bsgs) -> Self {
        let degree = chain.degree();
        let gens = chain.strong_generators();
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(chain));
        Group {
            degree,
            gens,
            chain: cell,
        }
    }

    /// A group whose order is known in advance, with a uniform sampler of its
    /// elements. The chain is built eagerly and is exact.
    pub fn with_known_order(
        degree: usize,
        gens: Vec<Perm>,
        order: &BigUint,
        sample: impl FnMut(&mut ChaCha8Rng) -> Perm,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(INTERNAL_SEED);
        let chain = Bsgs::with_known_order(degree, &gens, &[], order, &mut rng, sample);
        let g = Self::from_gens_unchecked(degree, gens);
        let _ = g.chain.set(Arc::new(chain));
        g
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_gens_unchecked(degree, Vec::new())
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[&[0, 1]]).unwrap());
        }
        if degree >= 3 {
            let cyc: Vec<usize> = (0..degree).collect();
            gens.push(Perm::from_cycles(degree, &[&cyc]).unwrap());
        }
        Self::from_gens_unchecked(degree, gens)
    }

    pub fn alternating(degree: usize) -> Self {
        let gens = (2..degree)
            .map(|k| Perm::from_cycles(degree, &[&[0, 1, k]]).unwrap())
            .collect();
        Self::from_gens_unchecked(degree, gens)
    }

    pub fn cyclic(degree: usize) -> Self {
        let cyc: Vec<usize> = (0..degree).collect();
        Self::from_gens_unchecked(degree, vec![Perm::from_cycles(degree, &[&cyc]).unwrap()])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    /// The stabilizer chain, built on first use and then frozen.
    pub fn chain(&self) -> &Bsgs {
        self.chain
            .get_or_init(|| Arc::new(Bsgs::new(self.degree, &self.gens, &[])))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::Degree(self.degree, g.degree()));
        }
        Ok(self.chain().contains(g))
    }

    /// Membership without the degree check.
    pub fn has(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.has(g))
    }

    pub fn same_as(&self, other: &Group) -> bool {
        self.is_subgroup_of(other) && self.order() == other.order()
    }

    /// A chain for this group whose base starts with `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> Bsgs {
        let base = self.chain();
        if base.base().starts_with(prefix) {
            return base.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(INTERNAL_SEED);
        Bsgs::with_known_order(
            self.degree,
            &self.gens,
            prefix,
            &base.order(),
            &mut rng,
            |r| base.random_element(r),
        )
    }

    /// Subgroup fixing every point of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<Group> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.degree) {
            return Err(Error::Argument(format!("point {} out of range", p + 1)));
        }
        let mut pts: Vec<usize> = points.to_vec();
        pts.dedup();
        let chain = self.chain_with_base(&pts);
        let depth = chain
            .levels()
            .iter()
            .take_while(|l| pts.contains(&l.base_point()))
            .count();
        Ok(Group::from_chain(chain.tail(depth)))
    }

    /// Uniform random element, deterministic per seed.
    pub fn random_element(&self, seed: u64) -> Perm {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.chain().random_element(&mut rng)
    }

    pub fn random_element_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain().random_element(rng)
    }

    /// `k^-1 G k`, reusing the chain.
    pub fn conjugated(&self, k: &Perm) -> Group {
        let chain = self.chain().conjugated(k);
        let gens = self.gens.iter().map(|g| g.conj(k)).collect();
        let g = Group::from_gens_unchecked(self.degree, gens);
        let _ = g.chain.set(Arc::new(chain));
        g
    }

    /// The subgroup generated by this group and extra elements.
    pub fn join(&self, extra: &[Perm]) -> Group {
        let mut chain = self.chain().clone();
        let mut gens = self.gens.clone();
        for e in extra {
            if chain.add_generator(e) {
                gens.push(e.clone());
            }
        }
        let g = Group::from_gens_unchecked(self.degree, gens);
        let _ = g.chain.set(Arc::new(chain));
        g
    }

    /// Restriction to an invariant point list, re-indexed by position.
    pub fn restrict(&self, points: &[usize]) -> Group {
        let gens = self.gens.iter().map(|g| g.restrict(points)).collect();
        Group::from_gens_unchecked(points.len(), gens)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    pub fn is_transitive(&self) -> bool {
        crate::blocks::orbits(self).len() <= 1
    }
}
