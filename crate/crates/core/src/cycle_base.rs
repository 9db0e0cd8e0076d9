//! Cycle bases: one full cycle per `K`-conjugacy class of regular cyclic
//! subgroups, extracted from the controlling subgroup `M`.
//!
//! Full cycles of `M` are harvested by enumeration when `|M|` is small and by
//! seeded sampling otherwise. Candidates are first fused under `M`-conjugacy
//! (orbits of `M`'s generators), then under `K`-conjugacy by conjugator search.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::phi;
use crate::blocks::UnionFind;
use crate::control::{control_subgroup, Conclusion, ControlResult};
use crate::error::{Error, Result};
use crate::group::{conjugating_element, Group};
use crate::oracle::{canonical_generator, class_of, oracle_cyc};
use crate::perm::Perm;

/// Default bound on `|M|` for exhaustive harvesting.
pub const DEFAULT_ENUM_BOUND: u64 = 1_000_000;
/// Sampling runs in this many independently seeded chunks, whatever the
/// thread count, so results do not depend on parallelism.
const SAMPLE_CHUNKS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "search+fusion")]
    SearchFusion,
    #[serde(rename = "oracle")]
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBaseResult {
    /// Full cycles, one per class, in canonical form and sorted.
    pub base: Vec<Perm>,
    pub method: Method,
    /// Maximality is certified (exhaustive harvest or oracle agreement).
    pub verified: bool,
    pub phi_bound: u64,
    /// Distinct regular cyclic subgroups of `M` that were fused.
    pub candidates: usize,
    /// Present when `verified` is false.
    pub caveat: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CycleBaseOptions {
    pub seed: u64,
    pub enum_bound: u64,
    /// Random draws in `M` when it is too large to enumerate; `None` means
    /// `200·n·φ(n)`.
    pub sample_budget: Option<u64>,
    pub threads: usize,
}

impl Default for CycleBaseOptions {
    fn default() -> Self {
        CycleBaseOptions {
            seed: 0,
            enum_bound: DEFAULT_ENUM_BOUND,
            sample_budget: None,
            threads: 1,
        }
    }
}

/// A cycle base together with the control run it came from.
#[derive(Clone, Debug)]
pub struct CycleBaseRun {
    pub control: ControlResult,
    pub result: CycleBaseResult,
}

/// Cycle base of `K` with default options.
pub fn cycle_base(k: &Group, seed: u64) -> Result<CycleBaseResult> {
    let opts = CycleBaseOptions {
        seed,
        ..CycleBaseOptions::default()
    };
    Ok(cycle_base_with(k, &opts)?.result)
}

/// The circulant representations of an object with automorphism group `K`
/// are in bijection with the regular cyclic subgroups of `K`; a system of
/// pairwise nonequivalent ones is a cycle base.
pub fn circulant_representations(k: &Group, seed: u64) -> Result<Vec<Perm>> {
    Ok(cycle_base(k, seed)?.base)
}

pub fn cycle_base_with(k: &Group, opts: &CycleBaseOptions) -> Result<CycleBaseRun> {
    let n = k.degree();
    let bound = phi(n as u64);
    let control = control_subgroup(k, opts.seed)?;
    let m = &control.m;

    let (subgroups, exhaustive) = if control.conclusion == Conclusion::ProvablyEmptyCyc {
        (BTreeSet::new(), true)
    } else if m.order() <= BigUint::from(opts.enum_bound) {
        let mut subs = BTreeSet::new();
        m.chain().for_each_element(|g| {
            if g.is_full_cycle() {
                subs.insert(canonical_generator(g));
            }
        });
        (subs, true)
    } else {
        let budget = opts
            .sample_budget
            .unwrap_or(200 * n as u64 * bound);
        let mut subs = sample_full_cycles(m, budget, opts.seed, opts.threads);
        for w in &control.witnesses {
            if m.has(w) {
                subs.insert(canonical_generator(w));
            }
        }
        (subs, false)
    };

    let base = fuse(k, m, subgroups.iter().cloned().collect())?;
    if base.len() as u64 > bound {
        return Err(Error::PhiBound {
            size: base.len(),
            bound,
        });
    }
    let result = CycleBaseResult {
        base,
        method: Method::SearchFusion,
        verified: exhaustive,
        phi_bound: bound,
        candidates: subgroups.len(),
        caveat: (!exhaustive).then(|| {
            format!(
                "M of order {} was sampled, not enumerated; classes may be missing",
                m.order()
            )
        }),
    };
    Ok(CycleBaseRun { control, result })
}

fn sample_full_cycles(m: &Group, budget: u64, seed: u64, threads: usize) -> BTreeSet<Perm> {
    let chunk = |i: u64| -> BTreeSet<Perm> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let draws = budget / SAMPLE_CHUNKS + u64::from(i < budget % SAMPLE_CHUNKS);
        (0..draws)
            .map(|_| m.random_element_with(&mut rng))
            .filter(Perm::is_full_cycle)
            .map(|g| canonical_generator(&g))
            .collect()
    };
    let threads = threads.clamp(1, SAMPLE_CHUNKS as usize) as u64;
    let mut out = BTreeSet::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let chunk = &chunk;
                s.spawn(move || {
                    (t..SAMPLE_CHUNKS)
                        .step_by(threads as usize)
                        .flat_map(chunk)
                        .collect::<BTreeSet<_>>()
                })
            })
            .collect();
        for h in handles {
            out.extend(h.join().expect("sampling worker panicked"));
        }
    });
    out
}

/// Keeps the first candidate of each `K`-class; `candidates` must be sorted.
fn fuse(k: &Group, m: &Group, candidates: Vec<Perm>) -> Result<Vec<Perm>> {
    // M-classes first: M ≤ K, so these merges are free of search
    let index: BTreeMap<&Perm, usize> = candidates.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut uf = UnionFind::new(candidates.len());
    for (i, c) in candidates.iter().enumerate() {
        for g in m.generators() {
            if let Some(&j) = index.get(&canonical_generator(&c.conj(g))) {
                uf.union(i, j);
            }
        }
    }
    let mut base: Vec<Perm> = Vec::new();
    for class in uf.classes() {
        let c = &candidates[class[0]];
        let mut fresh = true;
        for b in &base {
            if conjugating_element(k, c, b)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            base.push(c.clone());
        }
    }
    base.sort();
    Ok(base)
}

/// Compares `result` with the brute-force classes of `K`; on agreement the
/// result is marked verified.
pub fn confirm_with_oracle(k: &Group, result: &mut CycleBaseResult, cap: u64) -> Result<bool> {
    let classes = oracle_cyc(k, cap)?;
    let hit: BTreeSet<Option<usize>> = result.base.iter().map(|c| class_of(&classes, c)).collect();
    let agrees = classes.len() == result.base.len()
        && hit.len() == result.base.len()
        && hit.iter().all(Option::is_some);
    if agrees && !result.verified {
        result.verified = true;
        result.method = Method::Oracle;
        result.caveat = None;
    }
    Ok(agrees)
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
    fn small_examples() {
        assert_eq!(cycle_base(&Group::symmetric(6), 0).unwrap().base.len(), 1);
        let c8 = grp(8, &["(1,2,3,4,5,6,7,8)"]);
        let r = cycle_base(&c8, 0).unwrap();
        assert_eq!(r.base, vec![canonical_generator(&c8.generators()[0])]);
        assert!(r.verified);
        assert_eq!(cycle_base(&Group::alternating(5), 0).unwrap().base.len(), 1);
        assert_eq!(cycle_base(&Group::symmetric(4), 0).unwrap().base.len(), 1);
        assert!(cycle_base(&Group::trivial(3), 0).unwrap().base.is_empty());
        let d5 = grp(5, &["(1,2,3,4,5)", "(2,5)(3,4)"]);
        assert_eq!(circulant_representations(&d5, 0).unwrap().len(), 1);
    }

    #[test]
    fn agl_1_8_has_no_full_cycle() {
        // F_8 = F_2[x]/(x^3+x+1), points 1 + a0 + 2 a1 + 4 a2
        let add = |v: usize| -> Perm {
            Perm::from_images(&(0..8).map(|x| x ^ v).collect::<Vec<_>>()).unwrap()
        };
        let times_x = |x: usize| -> usize {
            let y = x << 1;
            if y & 8 != 0 {
                (y ^ 0b1011) & 7
            } else {
                y
            }
        };
        let mul = Perm::from_images(&(0..8).map(times_x).collect::<Vec<_>>()).unwrap();
        let k = Group::new(8, vec![add(1), mul]).unwrap();
        assert_eq!(k.order_u64(), Some(56));
        let r = cycle_base(&k, 0).unwrap();
        assert!(r.base.is_empty());
    }

    #[test]
    fn wreath_fixture_matches_oracle() {
        let k = grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"]);
        let mut r = cycle_base(&k, 0).unwrap();
        assert!(r.verified);
        assert!(confirm_with_oracle(&k, &mut r, 100_000).unwrap());
        assert!(r.base.len() as u64 <= r.phi_bound);
    }

    #[test]
    fn sampling_does_not_depend_on_threads() {
        let k = Group::symmetric(7);
        let opts = |threads| CycleBaseOptions {
            enum_bound: 10,
            sample_budget: Some(3000),
            threads,
            ..CycleBaseOptions::default()
        };
        let a = cycle_base_with(&k, &opts(1)).unwrap().result;
        let b = cycle_base_with(&k, &opts(4)).unwrap().result;
        assert_eq!(a, b);
        assert!(!a.verified);
        assert_eq!(a.base.len(), 1);
    }
}
