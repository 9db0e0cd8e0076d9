//! Schreier–Sims stabilizer chains with explicit transversal tables.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use rand::Rng;

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Coset {
    rep: Perm,
    rep_inv: Perm,
}

/// One level of a stabilizer chain: the stabilizer of all earlier base
/// points, its generators, and the orbit of this level's base point.
#[derive(Clone, Debug)]
pub struct Level {
    base_point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Box<Coset>>>,
    // tested[o] = number of generators whose Schreier generator with orbit[o] has been sifted
    tested: Vec<usize>,
    cursor: usize,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some(Box::new(Coset {
            rep: Perm::identity(degree),
            rep_inv: Perm::identity(degree),
        }));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            tested: vec![0],
            cursor: 0,
        }
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn in_orbit(&self, point: usize) -> bool {
        self.transversal[point].is_some()
    }

    /// Coset representative `u` with `base_point^u = point`.
    pub fn rep(&self, point: usize) -> Option<&Perm> {
        self.transversal[point].as_ref().map(|c| &c.rep)
    }

    pub fn rep_inv(&self, point: usize) -> Option<&Perm> {
        self.transversal[point].as_ref().map(|c| &c.rep_inv)
    }

    fn add_generator(&mut self, s: Perm) {
        let old_len = self.orbit.len();
        self.gens.push(s);
        self.cursor = 0;
        let sidx = self.gens.len() - 1;
        // new generator applied to every old point, then closure of new points
        let mut frontier = old_len;
        for o in 0..old_len {
            let beta = self.orbit[o];
            self.try_extend(beta, sidx);
        }
        while frontier < self.orbit.len() {
            let beta = self.orbit[frontier];
            for g in 0..self.gens.len() {
                self.try_extend(beta, g);
            }
            frontier += 1;
        }
    }

    fn try_extend(&mut self, beta: usize, gen: usize) {
        let s = &self.gens[gen];
        let gamma = s.image(beta);
        if self.transversal[gamma].is_none() {
            let rep = self.transversal[beta].as_ref().unwrap().rep.mul(s);
            let rep_inv = rep.inverse();
            self.transversal[gamma] = Some(Box::new(Coset { rep, rep_inv }));
            self.orbit.push(gamma);
            self.tested.push(0);
        }
    }

    fn next_untested(&mut self) -> Option<(usize, usize)> {
        while self.cursor < self.orbit.len() && self.tested[self.cursor] >= self.gens.len() {
            self.cursor += 1;
        }
        if self.cursor == self.orbit.len() {
            return None;
        }
        let o = self.cursor;
        let g = self.tested[o];
        self.tested[o] += 1;
        Some((self.orbit[o], g))
    }

    fn is_complete(&self) -> bool {
        self.tested[self.cursor.min(self.tested.len())..]
            .iter()
            .all(|&t| t >= self.gens.len())
    }

    fn mark_complete(&mut self) {
        let n = self.gens.len();
        self.tested.iter_mut().for_each(|t| *t = n);
        self.cursor = self.orbit.len();
    }
}

/// Base and strong generating set.
///
/// Invariant: the generators stored at level `i` fix base points `0..i` and
/// generate the stabilizer `G^(i)`; each level's orbit is the orbit of its base
/// point under that stabilizer.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    /// Empty chain with the given base prefix (levels may have trivial orbits).
    pub fn empty(degree: usize, base_prefix: &[usize]) -> Self {
        let mut levels = Vec::with_capacity(base_prefix.len());
        for &b in base_prefix {
            if levels.iter().all(|l: &Level| l.base_point != b) {
                levels.push(Level::new(degree, b));
            }
        }
        Bsgs { degree, levels }
    }

    /// Deterministic Schreier–Sims. New base points are first moved points.
    pub fn new(degree: usize, gens: &[Perm], base_prefix: &[usize]) -> Self {
        let mut chain = Self::empty(degree, base_prefix);
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    /// Schreier–Sims driven by random elements of a group whose order is known
    /// in advance; stops exactly when the chain reaches that order, so the
    /// result is a complete chain.
    pub fn with_known_order<R: Rng>(
        degree: usize,
        gens: &[Perm],
        base_prefix: &[usize],
        order: &BigUint,
        rng: &mut R,
        mut sample: impl FnMut(&mut R) -> Perm,
    ) -> Self {
        let mut chain = Self::empty(degree, base_prefix);
        for g in gens {
            if &chain.order() == order {
                break;
            }
            chain.insert_unverified(g);
        }
        let mut misses = 0usize;
        while &chain.order() < order {
            let g = sample(rng);
            if !chain.insert_unverified(&g) {
                misses += 1;
                if misses > 64 + 8 * degree {
                    // sampler is not producing new elements; finish deterministically
                    for g in gens {
                        chain.add_generator(g);
                    }
                    chain.complete();
                    break;
                }
            }
        }
        debug_assert_eq!(&chain.order(), order, "known-order construction overshot");
        for l in &mut chain.levels {
            l.mark_complete();
        }
        chain
    }

    fn insert_unverified(&mut self, g: &Perm) -> bool {
        let (h, j) = self.sift_from(g.clone(), 0);
        if h.is_identity() {
            return false;
        }
        self.install(h, 0, j);
        true
    }

    /// Adds `h` (which fixes base points `0..=j-1`) to levels `from..=j`.
    fn install(&mut self, h: Perm, from: usize, j: usize) {
        if j == self.levels.len() {
            let b = h.first_moved_point().expect("identity residue");
            self.levels.push(Level::new(self.degree, b));
        }
        for l in from..=j {
            self.levels[l].add_generator(h.clone());
        }
    }

    /// Adds a generator to the group and restores the chain.
    pub fn add_generator(&mut self, g: &Perm) -> bool {
        assert_eq!(g.degree(), self.degree);
        let (h, j) = self.sift_from(g.clone(), 0);
        if h.is_identity() {
            return false;
        }
        self.install(h, 0, j);
        self.complete();
        true
    }

    fn complete(&mut self) {
        while let Some(i) = (0..self.levels.len())
            .rev()
            .find(|&i| !self.levels[i].is_complete())
        {
            while let Some((beta, gidx)) = self.levels[i].next_untested() {
                let level = &self.levels[i];
                let s = &level.gens[gidx];
                let gamma = s.image(beta);
                let u = level.rep(beta).unwrap();
                let w = level.rep_inv(gamma).unwrap();
                let schreier = Perm::from_vec_unchecked(
                    u.raw().iter().map(|&x| w.raw()[s.raw()[x as usize] as usize]).collect(),
                );
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift_from(schreier, i + 1);
                if !h.is_identity() {
                    self.install(h, i + 1, j);
                    break;
                }
            }
        }
    }

    /// Strips `g` through levels `from..`; returns the residue and the index of
    /// the level where stripping stopped (`len()` if it passed every level).
    pub fn sift_from(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.base_point);
            match level.rep_inv(beta) {
                None => return (g, l),
                Some(inv) => {
                    if !inv.is_identity() {
                        g = g.mul(inv);
                    }
                }
            }
        }
        let l = self.levels.len();
        (g, l)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// All strong generators without repetition, in level order.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Generators of the stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Perm> {
        self.levels.get(depth).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// The chain of the stabilizer of the first `depth` base points.
    pub fn tail(&self, depth: usize) -> Bsgs {
        Bsgs {
            degree: self.degree,
            levels: self.levels[depth.min(self.levels.len())..].to_vec(),
        }
    }

    /// Uniform random element: one coset representative per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())];
            let u = level.rep(beta).unwrap();
            if !u.is_identity() {
                g = g.mul(u);
            }
        }
        g
    }

    /// The chain of `k^-1 G k`.
    pub fn conjugated(&self, k: &Perm) -> Bsgs {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut transversal = vec![None; self.degree];
                for &p in &l.orbit {
                    let c = l.transversal[p].as_ref().unwrap();
                    transversal[k.image(p)] = Some(Box::new(Coset {
                        rep: c.rep.conj(k),
                        rep_inv: c.rep_inv.conj(k),
                    }));
                }
                Level {
                    base_point: k.image(l.base_point),
                    gens: l.gens.iter().map(|g| g.conj(k)).collect(),
                    orbit: l.orbit.iter().map(|&p| k.image(p)).collect(),
                    transversal,
                    tested: l.tested.clone(),
                    cursor: l.cursor,
                }
            })
            .collect();
        Bsgs {
            degree: self.degree,
            levels,
        }
    }

    /// Enumerates every element by walking all transversal combinations.
    pub fn for_each_element(&self, mut f: impl FnMut(&Perm)) {
        let _ = self.try_for_each_element(|g| {
            f(g);
            ControlFlow::<()>::Continue(())
        });
    }

    /// As `for_each_element`, stopping at the first `Break`.
    pub fn try_for_each_element<B>(
        &self,
        mut f: impl FnMut(&Perm) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        // g = u_k ... u_1, so the deepest level is multiplied first
        fn walk<B>(
            levels: &[Level],
            acc: Perm,
            f: &mut dyn FnMut(&Perm) -> ControlFlow<B>,
        ) -> ControlFlow<B> {
            match levels.split_last() {
                None => f(&acc),
                Some((deepest, rest)) => {
                    for &p in &deepest.orbit {
                        let u = deepest.rep(p).unwrap();
                        walk(rest, acc.mul(u), f)?;
                    }
                    ControlFlow::Continue(())
                }
            }
        }
        walk(&self.levels, Perm::identity(self.degree), &mut f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn orders_of_small_groups() {
        let c5 = Bsgs::new(5, &[p("n=5: (1,2,3,4,5)")], &[]);
        assert_eq!(c5.order(), BigUint::from(5u32));
        let s5 = Bsgs::new(5, &[p("n=5: (1,2)"), p("n=5: (1,2,3,4,5)")], &[]);
        assert_eq!(s5.order(), BigUint::from(120u32));
        let t = Bsgs::new(4, &[], &[]);
        assert_eq!(t.order(), BigUint::from(1u32));
    }

    #[test]
    fn chain_property_holds() {
        let gens = [p("n=7: (1,2,3,4,5,6,7)"), p("n=7: (2,3)(4,7)")];
        let g = Bsgs::new(7, &gens, &[]);
        assert_eq!(g.order(), BigUint::from(168u32));
        let base = g.base();
        for (i, l) in g.levels().iter().enumerate() {
            for s in l.generators() {
                for &b in &base[..i] {
                    assert_eq!(s.image(b), b);
                }
            }
        }
    }

    #[test]
    fn known_order_matches_deterministic() {
        let gens = [p("n=6: (1,2)"), p("n=6: (1,2,3,4,5,6)")];
        let det = Bsgs::new(6, &gens, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fast = Bsgs::with_known_order(6, &gens, &[5, 4], &det.order(), &mut rng, |r| {
            det.random_element(r)
        });
        assert_eq!(fast.order(), det.order());
        assert_eq!(&fast.base()[..2], &[5, 4]);
        let mut count = 0;
        det.for_each_element(|g| {
            assert!(fast.contains(g));
            count += 1;
        });
        assert_eq!(count, 720);
    }

    #[test]
    fn conjugated_chain_is_valid() {
        let gens = [p("n=5: (1,2,3)"), p("n=5: (3,4,5)")];
        let g = Bsgs::new(5, &gens, &[]);
        let k = p("n=5: (1,5)(2,3)");
        let h = g.conjugated(&k);
        assert_eq!(h.order(), g.order());
        for s in &gens {
            assert!(h.contains(&s.conj(&k)));
        }
        assert!(!h.contains(&p("n=5: (1,2)")));
    }
}
