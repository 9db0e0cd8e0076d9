//! A solvable subgroup `M ≤ K` such that every regular cyclic subgroup of `K`
//! has a conjugate inside `M`.
//!
//! The recursion takes a minimal block system `𝔇`, replaces `K` by the
//! preimage of the controlling group of `K^𝔇`, and then either stops (`K`
//! solvable, or provably without full cycles) or embeds `K` into
//! `Sym(Δ) ≀ Sym(𝔇)` and intersects with `N*(H) ≀ K^𝔇` for a full cycle `H`
//! of the block action `K^Δ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blocks::{minimal_block_system, orbits, BlockAction};
use crate::error::Result;
use crate::feasible::{build_wstar, FeasibleContext};
use crate::group::{derived_series, intersection, is_solvable, Group};
use crate::perm::Perm;
use crate::primitive::{build_normalizer_tower, classify_unchecked, find_regular_cyclic, PrimitiveClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// `M` controls the regular cyclic subgroups of `K`.
    ControlsCyc,
    /// `K` has no regular cyclic subgroup; `M` is trivial.
    ProvablyEmptyCyc,
    /// `M = K`.
    TriviallyK,
}

/// Which exit a level of the recursion took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    DegreeOne,
    Intransitive,
    NotNormal,
    QuotientEmpty,
    Solvable,
    BlockImprimitive,
    NoRegularCyclicOnBlock,
    SystemsDisagree,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub depth: usize,
    pub degree: usize,
    pub block_size: usize,
    pub block_count: usize,
    pub branch: Branch,
    /// Classification of `K^Δ`, when it was computed.
    pub block_class: Option<PrimitiveClass>,
    /// The full cycle found on the first block, 1-based.
    pub block_witness: Option<String>,
    /// Group orders as decimal strings, keyed by name.
    pub orders: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct ControlResult {
    pub m: Group,
    pub conclusion: Conclusion,
    /// Innermost recursion level first.
    pub trace: Vec<TraceRecord>,
    pub seed: u64,
    /// Full cycles of `K` met on the way (the witness of a primitive `K`).
    pub witnesses: Vec<Perm>,
}

impl ControlResult {
    /// Lengths of the derived series of `M`; the last term is trivial.
    pub fn solvability_witness(&self) -> Vec<String> {
        derived_series(&self.m).iter().map(|g| g.order().to_string()).collect()
    }
}

fn child_seed(seed: u64) -> u64 {
    // splitmix64 step
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Level {
    m: Group,
    conclusion: Conclusion,
}

struct Run {
    trace: Vec<TraceRecord>,
    witnesses: Vec<Perm>,
}

impl Run {
    fn record(
        &mut self,
        depth: usize,
        degree: usize,
        blocks: (usize, usize),
        branch: Branch,
        orders: &[(&str, &Group)],
    ) {
        self.trace.push(TraceRecord {
            depth,
            degree,
            block_size: blocks.0,
            block_count: blocks.1,
            branch,
            block_class: None,
            block_witness: None,
            orders: orders
                .iter()
                .map(|(name, g)| (name.to_string(), g.order().to_string()))
                .collect(),
        });
    }

    fn annotate(&mut self, class: PrimitiveClass, witness: Option<&Perm>) {
        let last = self.trace.last_mut().unwrap();
        last.block_class = Some(class);
        last.block_witness = witness.map(|w| w.to_cycle_string());
    }

    fn level(&mut self, k: &Group, seed: u64, depth: usize) -> Result<Level> {
        let n = k.degree();
        let empty = |n| Level {
            m: Group::trivial(n),
            conclusion: Conclusion::ProvablyEmptyCyc,
        };
        if n == 1 {
            self.record(depth, n, (1, 1), Branch::DegreeOne, &[("K", k)]);
            return Ok(Level {
                m: k.clone(),
                conclusion: Conclusion::TriviallyK,
            });
        }
        if !k.is_transitive() {
            self.record(depth, n, (0, 0), Branch::Intransitive, &[("K", k)]);
            return Ok(empty(n));
        }

        // minimal system; it must be normal
        let d = minimal_block_system(k)?;
        let shape = (d.block_size(), d.count());
        let action = BlockAction::new(k, &d)?;
        let kernel = action.kernel();
        if orbits(&kernel) != d.blocks() {
            self.record(depth, n, shape, Branch::NotNormal, &[("K", k), ("kernel", &kernel)]);
            return Ok(empty(n));
        }

        // control the block action and pull back
        let (k2, quotient) = if d.count() == 1 {
            (k.clone(), Group::trivial(1))
        } else {
            let sub = self.level(action.image(), child_seed(seed), depth + 1)?;
            if sub.conclusion == Conclusion::ProvablyEmptyCyc {
                self.record(depth, n, shape, Branch::QuotientEmpty, &[("K", k)]);
                return Ok(empty(n));
            }
            if sub.m.order() == action.image().order() {
                (k.clone(), action.image().clone())
            } else {
                (action.preimage(&sub.m)?, sub.m)
            }
        };
        let replaced = k2.order() != k.order();

        if !k2.is_transitive() {
            self.record(depth, n, shape, Branch::Intransitive, &[("K", &k2)]);
            return Ok(empty(n));
        }
        let delta = d.block(0);
        let k_delta = if d.count() == 1 {
            k2.clone()
        } else {
            let mut gens: Vec<Perm> = kernel.generators().iter().map(|g| g.restrict(delta)).collect();
            let stab = quotient.pointwise_stabilizer(&[0])?;
            for q in stab.generators() {
                let lift = action.hom().lift(q).expect("quotient lies in the image");
                gens.push(lift.restrict(delta));
            }
            Group::new(delta.len(), gens)?
        };
        // solvable case: K ≤ K^Δ ≀ K^𝔇 with K^𝔇 solvable, so K is solvable iff K^Δ is.
        if is_solvable(&k_delta) {
            self.record(depth, n, shape, Branch::Solvable, &[("K", &k2), ("K^Delta", &k_delta)]);
            let conclusion = if replaced {
                Conclusion::ControlsCyc
            } else {
                Conclusion::TriviallyK
            };
            return Ok(Level { m: k2, conclusion });
        }

        // a full cycle of the block action
        if !minimal_block_system(&k_delta)?.is_primitive_marker() {
            self.record(depth, n, shape, Branch::BlockImprimitive, &[("K", &k2), ("K^Delta", &k_delta)]);
            return Ok(empty(n));
        }
        let class = classify_unchecked(&k_delta);
        let Some(h) = find_regular_cyclic(&k_delta, &class, seed)? else {
            self.record(
                depth,
                n,
                shape,
                Branch::NoRegularCyclicOnBlock,
                &[("K", &k2), ("K^Delta", &k_delta)],
            );
            self.annotate(class, None);
            return Ok(empty(n));
        };

        // feasible structure and the frame
        let ctx = FeasibleContext::new(&k2, &d, &kernel, &k_delta)?;
        if !ctx.systems_agree() {
            self.record(
                depth,
                n,
                shape,
                Branch::SystemsDisagree,
                &[("K", &k2), ("socle", ctx.socle())],
            );
            self.annotate(class, Some(h.generator()));
            return Ok(empty(n));
        }
        let frame = ctx.build_frame()?;
        let tower = build_normalizer_tower(h.generator())?;
        let wstar = build_wstar(&tower, &quotient);

        // intersect in frame coordinates and pull back
        let kstar = frame.transport(&k2);
        let mstar = intersection(&kstar, &wstar)?;
        let m = frame.pull_back(&mstar);
        self.record(
            depth,
            n,
            shape,
            Branch::Intersection,
            &[("K", &k2), ("K^Delta", &k_delta), ("socle", ctx.socle()), ("W*", &wstar), ("M", &m)],
        );
        self.annotate(class, Some(h.generator()));
        if d.count() == 1 && depth == 0 {
            self.witnesses.push(h.generator().clone());
        }
        Ok(Level {
            m,
            conclusion: Conclusion::ControlsCyc,
        })
    }
}

/// Solvable `M ≤ K` controlling the regular cyclic subgroups of `K`.
///
/// Intransitive input yields the trivial group. Randomness is confined to
/// the full-cycle search on blocks and is fixed by `seed`.
pub fn control_subgroup(k: &Group, seed: u64) -> Result<ControlResult> {
    let mut run = Run {
        trace: Vec::new(),
        witnesses: Vec::new(),
    };
    let level = run.level(k, seed, 0)?;
    Ok(ControlResult {
        m: level.m,
        conclusion: level.conclusion,
        trace: run.trace,
        seed,
        witnesses: run.witnesses,
    })
}

/// Outcome of checking that given full cycles of `K` conjugate into `M`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlReport {
    pub checked: usize,
    pub conjugated_in: usize,
    /// 1-based cycle strings of the cycles with no conjugate in `M`.
    pub failures: Vec<String>,
}

impl ControlReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each full cycle `c`, searches `k ∈ K` with `⟨c⟩^k ≤ M`, trying every
/// regular cyclic subgroup of `M` (enumerated, so `M` must be small).
pub fn verify_control(k: &Group, m: &Group, cycles: &[Perm], cap: u64) -> Result<ControlReport> {
    let targets = crate::oracle::regular_cyclic_subgroups(m, cap)?;
    let mut report = ControlReport::default();
    for c in cycles {
        report.checked += 1;
        let mut ok = m.has(c);
        for d in &targets {
            if ok {
                break;
            }
            ok = crate::group::conjugating_element(k, c, d)?.is_some();
        }
        if ok {
            report.conjugated_in += 1;
        } else {
            report.failures.push(c.to_cycle_string());
        }
    }
    Ok(report)
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
    fn cyclic_group_controls_itself() {
        let c6 = grp(6, &["(1,2,3,4,5,6)"]);
        let r = control_subgroup(&c6, 0).unwrap();
        assert!(r.m.same_as(&c6));
        assert_eq!(r.conclusion, Conclusion::TriviallyK);
    }

    #[test]
    fn alt4_is_solvable() {
        let r = control_subgroup(&Group::alternating(4), 0).unwrap();
        assert_eq!(r.m.order_u64(), Some(12));
    }

    #[test]
    fn sym5_wr_c2_gives_order_800() {
        let k = grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"]);
        let r = control_subgroup(&k, 0).unwrap();
        assert_eq!(r.conclusion, Conclusion::ControlsCyc);
        assert_eq!(r.m.order_u64(), Some(800));
        assert!(r.m.is_subgroup_of(&k));
        assert!(is_solvable(&r.m));
    }

    #[test]
    fn primitive_input_meets_the_normalizer() {
        let r = control_subgroup(&Group::symmetric(6), 3).unwrap();
        assert_eq!(r.conclusion, Conclusion::ControlsCyc);
        assert!(is_solvable(&r.m));
        assert!(r.m.generators().iter().all(|g| Group::symmetric(6).has(g)));
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.m.has(&r.witnesses[0]));
    }

    #[test]
    fn intransitive_input_is_empty() {
        let r = control_subgroup(&grp(4, &["(1,2)"]), 0).unwrap();
        assert_eq!(r.conclusion, Conclusion::ProvablyEmptyCyc);
        assert!(r.m.is_trivial());
    }

    #[test]
    fn seeds_give_identical_traces() {
        let k = grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"]);
        let a = control_subgroup(&k, 9).unwrap();
        let b = control_subgroup(&k, 9).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.m.generators(), b.m.generators());
    }
}
