//! Backtrack searches over stabilizer chains: subgroup intersection and
//! conjugacy of cyclic subgroups.

use num_integer::Integer;

use super::{Bsgs, Group};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Tracks whether a partial base image is realizable in a second group `Y`
/// whose chain shares the search base as a prefix.
struct PrefixFilter<'a> {
    chain: &'a Bsgs,
}

impl PrefixFilter<'_> {
    /// Given the accumulated inverse `z` for levels `< l`, checks the image
    /// `c` of base point `l` and returns the updated inverse.
    fn step(&self, l: usize, z: &Perm, c: usize) -> Option<Perm> {
        let level = &self.chain.levels()[l];
        let target = z.image(c);
        let inv = level.rep_inv(target)?;
        Some(if inv.is_identity() { z.clone() } else { z.mul(inv) })
    }
}

struct IntersectionSearch<'a> {
    x: &'a Bsgs,
    y: PrefixFilter<'a>,
    y_full: &'a Bsgs,
}

impl IntersectionSearch<'_> {
    /// Finds `g` in `X ∩ Y` fixing base points `0..i` with `b_i^g = gamma`.
    fn find(&self, i: usize, gamma: usize) -> Option<Perm> {
        let xl = &self.x.levels()[i];
        let u = xl.rep(gamma)?;
        let z = Perm::identity(self.x.degree());
        let z = self.y.step(i, &z, gamma)?;
        self.descend(i + 1, u.clone(), z)
    }

    // acc = u_{l-1} ... u_i; candidates at level l are (orbit_l)^acc
    fn descend(&self, l: usize, acc: Perm, z: Perm) -> Option<Perm> {
        if l == self.x.levels().len() {
            return self.y_full.contains(&acc).then_some(acc);
        }
        let level = &self.x.levels()[l];
        for &beta in level.orbit() {
            let c = acc.image(beta);
            let Some(z2) = self.y.step(l, &z, c) else { continue };
            let u = level.rep(beta).unwrap();
            let acc2 = if u.is_identity() { acc.clone() } else { u.mul(&acc) };
            if let Some(g) = self.descend(l + 1, acc2, z2) {
                return Some(g);
            }
        }
        None
    }
}

/// `G ∩ W` by backtrack over the chain of the smaller group, pruned by
/// prefix realizability in the other group. Exact.
pub fn intersection(g: &Group, w: &Group) -> Result<Group> {
    if g.degree() != w.degree() {
        return Err(Error::Degree(g.degree(), w.degree()));
    }
    if w.is_subgroup_of(g) {
        return Ok(w.clone());
    }
    if g.is_subgroup_of(w) {
        return Ok(g.clone());
    }
    let (x, y) = if g.order() <= w.order() { (g, w) } else { (w, g) };
    let xc = x.chain();
    let base = xc.base();
    let yc = y.chain_with_base(&base);
    let search = IntersectionSearch {
        x: xc,
        y: PrefixFilter { chain: &yc },
        y_full: &yc,
    };
    let n = g.degree();
    let mut result = Bsgs::empty(n, &base);
    for i in (0..base.len()).rev() {
        let mut failed = vec![false; n];
        let orbit: Vec<usize> = xc.levels()[i].orbit().to_vec();
        for &gamma in &orbit[1..] {
            if result.levels()[i].in_orbit(gamma) || failed[gamma] {
                continue;
            }
            match search.find(i, gamma) {
                Some(elem) => {
                    result.add_generator(&elem);
                }
                None => {
                    // the whole orbit of gamma under the known stabilizer fails too
                    let stab = result.levels()[i].generators();
                    let mut stack = vec![gamma];
                    failed[gamma] = true;
                    while let Some(p) = stack.pop() {
                        for s in stab {
                            let q = s.image(p);
                            if !failed[q] {
                                failed[q] = true;
                                stack.push(q);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Group::from_chain(result))
}

/// Searches `k ∈ K` with `c^k = d` by backtrack through K's chain; every
/// choice of a base image forces the images along the whole `c`-cycle of the
/// base point.
fn conjugator_for_elements(k: &Group, c: &Perm, d: &Perm) -> Option<Perm> {
    if c.cycle_type() != d.cycle_type() {
        return None;
    }
    let n = k.degree();
    let chain = k.chain();
    let none = usize::MAX;

    fn extend(
        c: &Perm,
        d: &Perm,
        map: &mut [usize],
        used: &mut [bool],
        trail: &mut Vec<usize>,
        from: usize,
        to: usize,
    ) -> bool {
        let (mut x, mut y) = (from, to);
        loop {
            if map[x] != usize::MAX {
                if map[x] != y {
                    return false;
                }
            } else {
                if used[y] {
                    return false;
                }
                map[x] = y;
                used[y] = true;
                trail.push(x);
            }
            x = c.image(x);
            y = d.image(y);
            if x == from {
                return y == to;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        chain: &Bsgs,
        l: usize,
        acc: Perm,
        c: &Perm,
        d: &Perm,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Option<Perm> {
        if l == chain.levels().len() {
            return (c.conj(&acc) == *d).then_some(acc);
        }
        let level = &chain.levels()[l];
        let b = level.base_point();
        for &beta in level.orbit() {
            let img = acc.image(beta);
            let mut trail = Vec::new();
            if extend(c, d, map, used, &mut trail, b, img) {
                let u = level.rep(beta).unwrap();
                let acc2 = if u.is_identity() { acc.clone() } else { u.mul(&acc) };
                if let Some(k) = rec(chain, l + 1, acc2, c, d, map, used) {
                    return Some(k);
                }
            }
            for x in trail {
                used[map[x]] = false;
                map[x] = usize::MAX;
            }
        }
        None
    }

    let mut map = vec![none; n];
    let mut used = vec![false; n];
    rec(chain, 0, Perm::identity(n), c, d, &mut map, &mut used)
}

/// An element `k ∈ K` with `<c>^k = <d>`, if one exists.
///
/// `c` and `d` must lie in `K`. For full cycles the conjugators from
/// `<c>` onto `<d>` form `φ(n)` cosets of `<c>`, so a membership test per
/// coset decides the question; otherwise a backtrack search runs per
/// generator `d^a` of `<d>`.
pub fn conjugating_element(k: &Group, c: &Perm, d: &Perm) -> Result<Option<Perm>> {
    let n = k.degree();
    if c.degree() != n || d.degree() != n {
        return Err(Error::Degree(n, c.degree().max(d.degree())));
    }
    if !k.has(c) || !k.has(d) {
        return Err(Error::Argument("cyclic subgroup is not contained in K".into()));
    }
    let ord = c.order();
    if ord != d.order() {
        return Ok(None);
    }
    if c == d {
        return Ok(Some(Perm::identity(n)));
    }
    let coprime = (1..=ord as u64).filter(|&a| a.gcd(&(ord as u64)) == 1);
    if c.is_full_cycle() {
        let cyc_c = c.cycles().into_iter().next().unwrap_or_else(|| vec![0]);
        for a in coprime {
            let da = d.pow(a as i64);
            let cyc_d = da.cycles().into_iter().next().unwrap_or_else(|| vec![0]);
            // x_i -> y_i maps the c-cycle onto the d^a-cycle
            let mut images = vec![0usize; n];
            for (x, y) in cyc_c.iter().zip(&cyc_d) {
                images[*x] = *y;
            }
            let cand = Perm::from_images(&images).expect("cycle alignment is a bijection");
            if k.has(&cand) {
                debug_assert_eq!(c.conj(&cand), da);
                return Ok(Some(cand));
            }
        }
        return Ok(None);
    }
    for a in coprime {
        let da = d.pow(a as i64);
        if let Some(x) = conjugator_for_elements(k, c, &da) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Subgroup form: `C` and `D` must each be given by a single generator.
pub fn conjugating_subgroups(k: &Group, c: &Group, d: &Group) -> Result<Option<Perm>> {
    let one = |g: &Group| -> Result<Perm> {
        match g.generators() {
            [] => Ok(g.identity()),
            [x] => Ok(x.clone()),
            _ => {
                let ord = g.order();
                g.generators()
                    .iter()
                    .find(|x| num_bigint::BigUint::from(x.order()) == ord)
                    .cloned()
                    .ok_or_else(|| Error::Argument("subgroup is not cyclic".into()))
            }
        }
    };
    conjugating_element(k, &one(c)?, &one(d)?)
}
