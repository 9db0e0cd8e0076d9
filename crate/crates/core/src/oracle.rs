//! Brute-force ground truth at small degree.
//!
//! Nothing here uses the stabilizer chain beyond the order check that guards
//! the cap: elements come from a closure fixpoint over the generators and
//! conjugacy classes from orbits of the conjugation action.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::blocks::UnionFind;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;

/// Version tag carried by golden files produced from this module.
pub const ORACLE_VERSION: u32 = 1;

fn check_cap(g: &Group, cap: u64) -> Result<()> {
    if g.order() > BigUint::from(cap) {
        return Err(Error::Cap {
            order: g.order().to_string(),
            cap,
        });
    }
    Ok(())
}

/// Every element of `g`, by closure under right multiplication by generators.
pub fn enumerate_group(g: &Group, cap: u64) -> Result<Vec<Perm>> {
    check_cap(g, cap)?;
    let id = g.identity();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in g.generators() {
            let y = x.mul(s);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Least generator of `<c>` in image-table order; equal for equal subgroups.
pub fn canonical_generator(c: &Perm) -> Perm {
    let n = c.degree() as u64;
    (1..n.max(2))
        .filter(|&a| gcd(a, n) == 1)
        .map(|a| c.pow(a as i64))
        .min()
        .unwrap_or_else(|| c.clone())
}

/// Canonical generators of all regular cyclic subgroups of `g`, sorted.
pub fn regular_cyclic_subgroups(g: &Group, cap: u64) -> Result<Vec<Perm>> {
    let mut subs = std::collections::BTreeSet::new();
    for x in enumerate_group(g, cap)? {
        if x.is_full_cycle() {
            subs.insert(canonical_generator(&x));
        }
    }
    Ok(subs.into_iter().collect())
}

/// One `K`-conjugacy class of regular cyclic subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycClass {
    /// Least canonical generator in the class.
    pub representative: Perm,
    /// Canonical generators of every subgroup in the class, sorted.
    pub subgroups: Vec<Perm>,
}

/// `cyc(K)` partitioned into `K`-conjugacy classes, ordered by representative.
pub fn oracle_cyc(k: &Group, cap: u64) -> Result<Vec<CycClass>> {
    let subs = regular_cyclic_subgroups(k, cap)?;
    let index: BTreeMap<&Perm, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut uf = UnionFind::new(subs.len());
    for (i, s) in subs.iter().enumerate() {
        for g in k.generators() {
            let t = canonical_generator(&s.conj(g));
            uf.union(i, index[&t]);
        }
    }
    Ok(uf
        .classes()
        .into_iter()
        .map(|cls| {
            let subgroups: Vec<Perm> = cls.iter().map(|&i| subs[i].clone()).collect();
            CycClass {
                representative: subgroups[0].clone(),
                subgroups,
            }
        })
        .collect())
}

/// Index of the class containing `<c>`, if any.
pub fn class_of(classes: &[CycClass], c: &Perm) -> Option<usize> {
    let key = canonical_generator(c);
    classes
        .iter()
        .position(|cls| cls.subgroups.binary_search(&key).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&str]) -> Group {
        Group::new(
            n,
            gens.iter().map(|s| Perm::parse_cycles(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn closure_sizes() {
        assert_eq!(enumerate_group(&Group::trivial(3), 10).unwrap().len(), 1);
        assert_eq!(enumerate_group(&Group::symmetric(4), 100).unwrap().len(), 24);
        assert_eq!(enumerate_group(&Group::alternating(5), 100).unwrap().len(), 60);
        assert!(matches!(
            enumerate_group(&Group::symmetric(5), 100),
            Err(Error::Cap { .. })
        ));
    }

    #[test]
    fn class_counts() {
        assert_eq!(oracle_cyc(&Group::symmetric(5), 1000).unwrap().len(), 1);
        assert_eq!(oracle_cyc(&grp(6, &["(1,2,3,4,5,6)"]), 10).unwrap().len(), 1);
        assert!(oracle_cyc(&Group::alternating(4), 100).unwrap().is_empty());
        // C_2 x C_2 regular: no 4-cycle
        assert!(oracle_cyc(&grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]), 10).unwrap().is_empty());
    }

    #[test]
    fn canonical_generator_is_class_invariant() {
        let c = Perm::parse_cycles("(1,2,3,4,5)", 5).unwrap();
        let key = canonical_generator(&c);
        for a in 1..5 {
            assert_eq!(canonical_generator(&c.pow(a)), key);
        }
    }

    #[test]
    fn sym4_has_three_subgroups_in_one_class() {
        let cls = oracle_cyc(&Group::symmetric(4), 100).unwrap();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].subgroups.len(), 3);
    }
}
