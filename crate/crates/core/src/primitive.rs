//! Primitive groups with a regular cyclic subgroup: recognition, a finder
//! for a full cycle, and the solvable normalizer towers around it.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ops::ControlFlow;

use crate::arith;
use crate::blocks::{minimal_block_system, BlockSystem};
use crate::error::{Error, Result};
use crate::group::{derived_series, solvable_residual, Group};
use crate::perm::Perm;

/// Random draws per squared degree before the finder falls back to enumeration.
pub const SEARCH_BUDGET_FACTOR: usize = 64;
/// Largest group the finder enumerates exhaustively.
pub const ENUMERATION_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sporadic {
    Psl2_11,
    M11,
    M23,
}

/// Where a primitive group sits in the list of primitive groups that may
/// contain a full cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum PrimitiveClass {
    /// `C_p ≤ K ≤ AGL(1, p)`.
    Affine { p: u64 },
    SymOrAlt { is_alt: bool, n: usize },
    /// Socle `PSL_d(q)` on the `(q^d - 1)/(q - 1)` projective points.
    Projective { d: u32, q: u64 },
    Sporadic { group: Sporadic },
    NoRegularCyclic,
}

/// Socle of a primitive group: the last nontrivial derived term when `k` is
/// solvable, the solvable residual otherwise.
pub fn primitive_socle(k: &Group) -> Group {
    let series = derived_series(k);
    let last = series.last().unwrap();
    if last.is_trivial() && series.len() >= 2 {
        series[series.len() - 2].clone()
    } else {
        last.clone()
    }
}

pub fn is_two_transitive(g: &Group) -> bool {
    let n = g.degree();
    if n <= 1 {
        return true;
    }
    g.is_transitive()
        && g.pointwise_stabilizer(&[0])
            .map(|st| crate::blocks::orbits(&st).len() == 2)
            .unwrap_or(false)
}

/// Classifies a primitive group. Errors if `k` is not primitive.
pub fn classify_primitive(k: &Group) -> Result<PrimitiveClass> {
    if !minimal_block_system(k)?.is_primitive_marker() {
        return Err(Error::Argument("group is imprimitive".into()));
    }
    Ok(classify_unchecked(k))
}

/// Classification assuming `k` is primitive.
pub(crate) fn classify_unchecked(k: &Group) -> PrimitiveClass {
    let n = k.degree();
    if n == 1 {
        return PrimitiveClass::SymOrAlt { is_alt: false, n };
    }
    let order = k.order();
    let residual = solvable_residual(k);
    if residual.is_trivial() {
        if arith::is_prime(n as u64) {
            return PrimitiveClass::Affine { p: n as u64 };
        }
        let full = arith::factorial(n as u64);
        return if order == full {
            PrimitiveClass::SymOrAlt { is_alt: false, n }
        } else if order * 2u32 == full {
            PrimitiveClass::SymOrAlt { is_alt: true, n }
        } else {
            PrimitiveClass::NoRegularCyclic
        };
    }
    let s = residual.order();
    if s.clone() * 2u32 == arith::factorial(n as u64) {
        return PrimitiveClass::SymOrAlt {
            is_alt: order == s,
            n,
        };
    }
    if !is_two_transitive(&residual) {
        return PrimitiveClass::NoRegularCyclic;
    }
    let sporadic = [
        (11, 660u64, Sporadic::Psl2_11),
        (11, 7920, Sporadic::M11),
        (23, 10_200_960, Sporadic::M23),
    ];
    for (deg, ord, group) in sporadic {
        if n == deg && s == BigUint::from(ord) {
            return PrimitiveClass::Sporadic { group };
        }
    }
    if let Some((d, q)) = projective_parameters(n as u64, &s) {
        return PrimitiveClass::Projective { d, q };
    }
    PrimitiveClass::NoRegularCyclic
}

/// `(d, q)` with `n = (q^d - 1)/(q - 1)` and `|PSL_d(q)| = order`.
fn projective_parameters(n: u64, order: &BigUint) -> Option<(u32, u64)> {
    for q in 2..n {
        if arith::prime_power(q).is_none() {
            continue;
        }
        let (mut d, mut size, mut power) = (1u32, 1u64, 1u64);
        while size < n {
            power *= q;
            size += power;
            d += 1;
        }
        if size == n && d >= 2 && arith::psl_order(d, q) == *order {
            return Some((d, q));
        }
    }
    None
}

/// A full cycle of some group, generating a regular cyclic subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularCyclicWitness {
    generator: Perm,
}

impl RegularCyclicWitness {
    pub fn new(generator: Perm) -> Result<Self> {
        if !generator.is_full_cycle() {
            return Err(Error::Argument(format!("{generator} is not a full cycle")));
        }
        Ok(RegularCyclicWitness { generator })
    }

    pub fn generator(&self) -> &Perm {
        &self.generator
    }

    pub fn group(&self) -> Group {
        Group::from_gens_unchecked(self.generator.degree(), vec![self.generator.clone()])
    }
}

/// A regular cyclic subgroup of a primitive group, or `None` if there is none.
///
/// `SearchExhausted` means the random search and the enumeration fallback
/// were both out of reach; it never stands for "none".
pub fn find_regular_cyclic(
    k: &Group,
    cls: &PrimitiveClass,
    seed: u64,
) -> Result<Option<RegularCyclicWitness>> {
    let n = k.degree();
    match *cls {
        PrimitiveClass::NoRegularCyclic => Ok(None),
        PrimitiveClass::SymOrAlt { is_alt, n } => {
            if is_alt && n % 2 == 0 {
                return Ok(None);
            }
            let points: Vec<usize> = (0..n).collect();
            Ok(Some(RegularCyclicWitness {
                generator: Perm::from_cycles(n, &[&points])?,
            }))
        }
        PrimitiveClass::Affine { .. } => {
            let generator = primitive_socle(k).generators()[0].clone();
            Ok(Some(RegularCyclicWitness::new(generator)?))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = SEARCH_BUDGET_FACTOR * n * n;
            for _ in 0..draws {
                let g = k.random_element_with(&mut rng);
                if g.is_full_cycle() {
                    return Ok(Some(RegularCyclicWitness { generator: g }));
                }
            }
            if k.order() > BigUint::from(ENUMERATION_BOUND) {
                return Err(Error::SearchExhausted { degree: n, draws });
            }
            let found = k.chain().try_for_each_element(|g| {
                if g.is_full_cycle() {
                    ControlFlow::Break(g.clone())
                } else {
                    ControlFlow::Continue(())
                }
            });
            Ok(match found {
                ControlFlow::Break(generator) => Some(RegularCyclicWitness { generator }),
                ControlFlow::Continue(()) => None,
            })
        }
    }
}

/// The solvable groups `N(H) ≤ N*(H)` built around a full cycle `h` of
/// degree `m`.
///
/// With `p` the largest prime dividing `m` and `P = ⟨h^(m/p)⟩`, `N(H)` is `H`
/// extended by a copy of `AGL(1, p)` on every orbit of `P`, and `N*(H)` adds
/// the holomorph `N_Δ(H)` of `H`.
#[derive(Clone, Debug)]
pub struct NormalizerTower {
    h: RegularCyclicWitness,
    p: u64,
    p_generator: Perm,
    p_system: BlockSystem,
    theta_groups: Vec<Group>,
    n_h: Group,
    holomorph: Group,
    n_star: Group,
}

impl NormalizerTower {
    pub fn witness(&self) -> &RegularCyclicWitness {
        &self.h
    }

    /// Largest prime divisor of the degree (1 when the degree is 1).
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Generator of the order-`p` subgroup `P` of `H`.
    pub fn p_generator(&self) -> &Perm {
        &self.p_generator
    }

    /// Orbits of `P`.
    pub fn p_system(&self) -> &BlockSystem {
        &self.p_system
    }

    /// `AGL(1, p)` on each orbit of `P`, embedded in the full degree.
    pub fn theta_groups(&self) -> &[Group] {
        &self.theta_groups
    }

    /// `N(H)`.
    pub fn n_h(&self) -> &Group {
        &self.n_h
    }

    /// `N_Δ(H)`, the full normalizer of `H` in the symmetric group.
    pub fn holomorph(&self) -> &Group {
        &self.holomorph
    }

    /// `N*(H)`.
    pub fn n_star(&self) -> &Group {
        &self.n_star
    }
}

/// Generators of the unit group modulo `m`, chosen greedily.
fn unit_generators(m: u64) -> Vec<u64> {
    let mut reached = vec![false; m as usize];
    reached[1 % m as usize] = true;
    let mut gens = Vec::new();
    for a in 2..m {
        if arith::gcd(a, m) != 1 || reached[a as usize] {
            continue;
        }
        gens.push(a);
        let mut frontier: Vec<u64> = (0..m).filter(|&x| reached[x as usize]).collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % m;
                if !reached[y as usize] {
                    reached[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

pub fn build_normalizer_tower(h: &Perm) -> Result<NormalizerTower> {
    let witness = RegularCyclicWitness::new(h.clone())?;
    let m = h.degree();
    if m == 1 {
        let t = Group::trivial(1);
        return Ok(NormalizerTower {
            h: witness,
            p: 1,
            p_generator: h.clone(),
            p_system: BlockSystem::trivial(1),
            theta_groups: Vec::new(),
            n_h: t.clone(),
            holomorph: t.clone(),
            n_star: t,
        });
    }
    let p = *arith::prime_factors(m as u64).last().unwrap();
    let pu = p as usize;
    let step = m / pu;
    // pos[i] = 0^(h^i)
    let mut pos = Vec::with_capacity(m);
    let mut x = 0;
    for _ in 0..m {
        pos.push(x);
        x = h.image(x);
    }
    let g = h.pow(step as i64);
    let root = arith::primitive_root(p) as usize;
    let mut thetas = Vec::with_capacity(step);
    let mut theta_groups = Vec::with_capacity(step);
    let mut local_gens = Vec::new();
    for j in 0..step {
        let mut theta: Vec<usize> = (0..pu).map(|k| pos[j + k * step]).collect();
        theta.sort_unstable();
        let theta0 = theta[0];
        let mut orbit = Vec::with_capacity(pu);
        let mut y = theta0;
        for _ in 0..pu {
            orbit.push(y);
            y = g.image(y);
        }
        let mut cycle = vec![0; m];
        let mut mult: Vec<usize> = (0..m).collect();
        for (i, &q) in orbit.iter().enumerate() {
            cycle[q] = orbit[(i + 1) % pu];
            mult[q] = orbit[i * root % pu];
        }
        let mut gens = Vec::new();
        for (i, c) in cycle.iter_mut().enumerate() {
            if !theta.contains(&i) {
                *c = i;
            }
        }
        gens.push(Perm::from_images(&cycle)?);
        gens.push(Perm::from_images(&mult)?);
        let grp = Group::new(m, gens)?;
        local_gens.extend(grp.generators().iter().cloned());
        theta_groups.push(grp);
        thetas.push(theta);
    }
    let mut n_gens = vec![h.clone()];
    n_gens.extend(local_gens.iter().cloned());
    let n_h = Group::new(m, n_gens)?;

    let mut hol_gens = vec![h.clone()];
    for a in unit_generators(m as u64) {
        let mut images = vec![0; m];
        for i in 0..m {
            images[pos[i]] = pos[i * a as usize % m];
        }
        hol_gens.push(Perm::from_images(&images)?);
    }
    let holomorph = Group::new(m, hol_gens.clone())?;
    let mut star_gens = hol_gens;
    star_gens.extend(local_gens);
    let n_star = Group::new(m, star_gens)?;
    Ok(NormalizerTower {
        h: witness,
        p,
        p_generator: g,
        p_system: BlockSystem::new(m, thetas)?,
        theta_groups,
        n_h,
        holomorph,
        n_star,
    })
}
