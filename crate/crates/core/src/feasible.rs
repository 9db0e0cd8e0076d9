//! Structure of a transitive group with a minimal normal block system whose
//! blocks carry non-solvable primitive actions: the socle of the block
//! kernel, the two coarser systems it induces, block bijections, the
//! relabeling onto `Δ × 𝔇`, and the wreath product `N*(H) ≀ K^𝔇`.

use std::collections::VecDeque;

use crate::blocks::{orbits, BlockSystem, UnionFind};
use crate::error::{Error, Result};
use crate::group::{solvable_residual, Group};
use crate::perm::Perm;
use crate::primitive::{is_two_transitive, primitive_socle, NormalizerTower};
use crate::wreath;

/// Orbits of a group on the pairs `Δ × Γ` of two of its orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbits {
    pub count: usize,
    /// `f[i]` is the partner in `Γ` of the `i`-th point of `Δ`, when the
    /// smaller of exactly two orbits is the graph of a bijection.
    pub bijection: Option<Vec<usize>>,
}

pub fn pair_orbits(s: &Group, delta: &[usize], gamma: &[usize]) -> Result<PairOrbits> {
    let n = s.degree();
    let m = delta.len();
    if gamma.len() != m || m == 0 {
        return Err(Error::Argument("blocks must have equal positive size".into()));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in delta.iter().enumerate() {
        pos[x] = i;
    }
    for (j, &y) in gamma.iter().enumerate() {
        if pos[y] != usize::MAX {
            return Err(Error::Argument("blocks are not distinct".into()));
        }
        pos[y] = j;
    }
    let mut uf = UnionFind::new(m * m);
    for g in s.generators() {
        for (i, &x) in delta.iter().enumerate() {
            let (gx, ix) = (g.image(x), pos[g.image(x)]);
            if ix == usize::MAX || !delta.contains(&gx) {
                return Err(Error::Argument("blocks are not orbits of the group".into()));
            }
            for (j, &y) in gamma.iter().enumerate() {
                let jy = pos[g.image(y)];
                uf.union(i * m + j, ix * m + jy);
            }
        }
    }
    let classes = uf.classes();
    let mut bijection = None;
    if classes.len() == 2 {
        let small = classes.iter().min_by_key(|c| c.len()).unwrap();
        if small.len() == m {
            let mut f = vec![usize::MAX; m];
            let mut hit = vec![false; m];
            for &pair in small {
                let (i, j) = (pair / m, pair % m);
                if f[i] == usize::MAX && !hit[j] {
                    f[i] = gamma[j];
                    hit[j] = true;
                }
            }
            if !f.contains(&usize::MAX) {
                bijection = Some(f);
            }
        }
    }
    Ok(PairOrbits {
        count: classes.len(),
        bijection,
    })
}

/// The bijection `Δ → Γ` whose graph is an orbit of `s`, if any.
pub fn block_bijection(s: &Group, delta: &[usize], gamma: &[usize]) -> Result<Option<Vec<usize>>> {
    Ok(pair_orbits(s, delta, gamma)?.bijection)
}

/// Partition of block indices; classes sorted, ordered by least element.
pub type BlockPartition = Vec<Vec<usize>>;

fn normalize(mut p: BlockPartition) -> BlockPartition {
    for c in &mut p {
        c.sort_unstable();
    }
    p.sort();
    p
}

/// The data of a feasible group.
#[derive(Clone, Debug)]
pub struct FeasibleContext {
    k: Group,
    system: BlockSystem,
    kernel: Group,
    socle: Group,
    e: BlockPartition,
    e_prime: BlockPartition,
    /// Each point's partner in the first block of its class of `𝔈`.
    to_class_rep: Vec<usize>,
}

/// `S = soc(K_𝔇)` as the solvable residual of the kernel, checked against
/// the orbit and per-block order conditions it must satisfy.
pub fn socle_of_kernel(kernel: &Group, d: &BlockSystem, k_delta: &Group) -> Result<Group> {
    let s = solvable_residual(kernel);
    if orbits(&s) != d.blocks() {
        return Err(Error::FeasibilityViolation(
            "orbits of the kernel socle differ from the blocks".into(),
        ));
    }
    let expected = primitive_socle(k_delta).order();
    for block in d.blocks() {
        let r = s.restrict(block);
        if r.order() != expected || !is_two_transitive(&r) {
            return Err(Error::FeasibilityViolation(format!(
                "socle restriction to a block has order {}, expected {expected}",
                r.order()
            )));
        }
    }
    Ok(s)
}

/// Classes of blocks joined by a bijection orbit of `s`, together with the
/// map of each point to its partner in the first block of its class.
#[allow(clippy::needless_range_loop)]
pub fn compute_e(s: &Group, d: &BlockSystem) -> Result<(BlockPartition, Vec<usize>)> {
    let b = d.count();
    let mut related = vec![vec![None; b]; b];
    for i in 0..b {
        for j in i + 1..b {
            let f = block_bijection(s, d.block(i), d.block(j))?;
            related[i][j] = f.clone();
            related[j][i] = f.map(|f| {
                let mut inv = vec![0; d.block_size()];
                for (x, &y) in f.iter().enumerate() {
                    inv[d.block(j).binary_search(&y).unwrap()] = d.block(i)[x];
                }
                inv
            });
        }
    }
    let mut class_of = vec![usize::MAX; b];
    let mut classes: BlockPartition = Vec::new();
    let mut to_rep: Vec<usize> = (0..d.degree()).collect();
    for i in 0..b {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        class_of[i] = c;
        let mut members = vec![i];
        for j in i + 1..b {
            if let Some(f) = &related[j][i] {
                if class_of[j] != usize::MAX {
                    return Err(Error::FeasibilityViolation("block relation is not transitive".into()));
                }
                class_of[j] = c;
                for (x, &y) in d.block(j).iter().zip(f) {
                    to_rep[*x] = y;
                }
                members.push(j);
            }
        }
        classes.push(members);
    }
    for i in 0..b {
        for j in 0..b {
            if i != j && related[i][j].is_some() != (class_of[i] == class_of[j]) {
                return Err(Error::FeasibilityViolation("block relation is not transitive".into()));
            }
        }
    }
    Ok((classes, to_rep))
}

/// Blocks `Δ` and `Γ` share a class iff the pointwise stabilizer of `Δ` in
/// `s` fixes `Γ` pointwise.
pub fn compute_e_prime(s: &Group, d: &BlockSystem) -> Result<BlockPartition> {
    let b = d.count();
    let mut uf = UnionFind::new(b);
    for i in 0..b {
        let st = s.pointwise_stabilizer(d.block(i))?;
        let mut moved = vec![false; b];
        for g in st.generators() {
            for x in g.moved_points() {
                moved[d.block_of(x)] = true;
            }
        }
        for (j, &mv) in moved.iter().enumerate() {
            if !mv {
                uf.union(i, j);
            }
        }
    }
    Ok(normalize(uf.classes()))
}

impl FeasibleContext {
    /// `kernel` is `K_𝔇` and `k_delta` is `K^Δ` for the first block.
    pub fn new(k: &Group, system: &BlockSystem, kernel: &Group, k_delta: &Group) -> Result<Self> {
        let socle = socle_of_kernel(kernel, system, k_delta)?;
        let (e, to_class_rep) = compute_e(&socle, system)?;
        let e_prime = compute_e_prime(&socle, system)?;
        Ok(FeasibleContext {
            k: k.clone(),
            system: system.clone(),
            kernel: kernel.clone(),
            socle,
            e: normalize(e),
            e_prime,
            to_class_rep,
        })
    }

    pub fn group(&self) -> &Group {
        &self.k
    }

    pub fn system(&self) -> &BlockSystem {
        &self.system
    }

    pub fn kernel(&self) -> &Group {
        &self.kernel
    }

    pub fn socle(&self) -> &Group {
        &self.socle
    }

    pub fn e(&self) -> &BlockPartition {
        &self.e
    }

    pub fn e_prime(&self) -> &BlockPartition {
        &self.e_prime
    }

    /// True when the two systems agree, as they must if `K` has a regular
    /// cyclic subgroup.
    pub fn systems_agree(&self) -> bool {
        self.e == self.e_prime
    }

    /// Relabeling of the domain onto `Δ × 𝔇` with `Δ` the first block.
    pub fn build_frame(&self) -> Result<WreathFrame> {
        let d = &self.system;
        let (n, m, b) = (d.degree(), d.block_size(), d.count());
        let mut class_of = vec![0; b];
        for (c, members) in self.e.iter().enumerate() {
            for &j in members {
                class_of[j] = c;
            }
        }
        // transversal of K on blocks from block 0
        let mut reach: Vec<Option<Perm>> = vec![None; b];
        reach[0] = Some(Perm::identity(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(j) = queue.pop_front() {
            for g in self.k.generators() {
                let t = d.block_of(g.image(d.block(j)[0]));
                if reach[t].is_none() {
                    reach[t] = Some(reach[j].as_ref().unwrap().mul(g));
                    queue.push_back(t);
                }
            }
        }
        let mut class_reps: Vec<Option<Perm>> = vec![None; self.e.len()];
        class_reps[class_of[0]] = Some(Perm::identity(n));
        for j in 0..b {
            if class_reps[class_of[j]].is_none() {
                class_reps[class_of[j]] = reach[j].clone();
            }
        }
        let reps: Vec<Perm> = class_reps
            .into_iter()
            .map(|r| r.ok_or_else(|| Error::Frame("group is not transitive on blocks".into())))
            .collect::<Result<_>>()?;
        let inv_reps: Vec<Perm> = reps.iter().map(Perm::inverse).collect();
        let delta = d.block(0);
        let mut label = vec![0; n];
        for (x, slot) in label.iter_mut().enumerate() {
            let gamma = d.block_of(x);
            let y = inv_reps[class_of[gamma]].image(x);
            if class_of[d.block_of(y)] != class_of[0] {
                return Err(Error::Frame("class representative misses the reference class".into()));
            }
            let star = self.to_class_rep[y];
            let idx = delta
                .binary_search(&star)
                .map_err(|_| Error::Frame("bijection misses the reference block".into()))?;
            *slot = gamma * m + idx;
        }
        let label = Perm::from_images(&label).map_err(|e| Error::Frame(e.to_string()))?;
        let frame = WreathFrame {
            m,
            b,
            label,
            class_reps: reps,
            classes: self.e.clone(),
        };
        frame.check_kernel_shape(&self.kernel)?;
        Ok(frame)
    }
}

/// The relabeling `f*: Ω → Δ × 𝔇` in product coordinates, with the class
/// representatives it was built from.
#[derive(Clone, Debug)]
pub struct WreathFrame {
    m: usize,
    b: usize,
    label: Perm,
    class_reps: Vec<Perm>,
    classes: BlockPartition,
}

impl WreathFrame {
    pub fn block_size(&self) -> usize {
        self.m
    }

    pub fn block_count(&self) -> usize {
        self.b
    }

    /// `x ↦ γ·m + δ` for `f*(x) = (δ, γ)`.
    pub fn label(&self) -> &Perm {
        &self.label
    }

    /// `k_Λ` per class of `𝔈`, identity for the reference class.
    pub fn class_reps(&self) -> &[Perm] {
        &self.class_reps
    }

    pub fn classes(&self) -> &BlockPartition {
        &self.classes
    }

    /// `K* = K^{f*}`.
    pub fn transport(&self, k: &Group) -> Group {
        k.conjugated(&self.label)
    }

    /// The `f*`-preimage of a group on `Δ × 𝔇`.
    pub fn pull_back(&self, g: &Group) -> Group {
        g.conjugated(&self.label.inverse())
    }

    /// Conjugated kernel elements have constant sections on each class.
    pub fn check_kernel_shape(&self, kernel: &Group) -> Result<()> {
        for g in kernel.generators() {
            let x = g.conj(&self.label);
            if wreath::top(&x, self.m).is_none_or(|t| !t.is_identity()) {
                return Err(Error::Frame("kernel element moves a block".into()));
            }
            for class in &self.classes {
                let first = wreath::section(&x, self.m, class[0]);
                if class[1..].iter().any(|&j| wreath::section(&x, self.m, j) != first) {
                    return Err(Error::Frame("kernel sections differ within a class".into()));
                }
            }
        }
        Ok(())
    }
}

/// `W* = N*(H) ≀ K^𝔇` on `Δ × 𝔇`.
pub fn build_wstar(tower: &NormalizerTower, kq: &Group) -> Group {
    wreath::wreath_product(tower.n_star(), kq)
}

/// Outcome of aligning block sections of a group inside `Sym(Δ) ≀ Sym(Γ)`.
#[derive(Clone, Debug)]
pub struct Standardized {
    /// `t(γ)` for each block.
    pub sections: Vec<Perm>,
    /// The base element with sections `t(γ)`.
    pub t: Perm,
    /// The common block restriction.
    pub c0: Group,
    /// `t C t^-1`.
    pub conjugated: Group,
}

/// Finds `t` with sections in `N(C_0)` and `t C t^-1 ≤ C_0 ≀ B`, where `C` acts
/// on product coordinates with blocks of size `m`.
pub fn wreath_standardize(c: &Group, b: &Group, m: usize) -> Result<Standardized> {
    let n = c.degree();
    let nb = b.degree();
    if m == 0 || m * nb != n {
        return Err(Error::Standardize("degrees do not form a product".into()));
    }
    if !c.is_transitive() {
        return Err(Error::Standardize("group is not transitive".into()));
    }
    for g in c.generators() {
        match wreath::top(g, m) {
            Some(q) if b.has(&q) => {}
            _ => return Err(Error::Standardize("block action leaves the top group".into())),
        }
    }
    let mut reach: Vec<Option<Perm>> = vec![None; nb];
    reach[0] = Some(Perm::identity(n));
    let mut queue = VecDeque::from([0usize]);
    while let Some(j) = queue.pop_front() {
        for g in c.generators() {
            let t = g.image(j * m) / m;
            if reach[t].is_none() {
                reach[t] = Some(reach[j].as_ref().unwrap().mul(g));
                queue.push_back(t);
            }
        }
    }
    let system = wreath::product_system(m, nb);
    let action = crate::blocks::BlockAction::new(c, &system)?;
    let restriction = |j: usize| action.restriction(j);
    let c0 = restriction(0)?;
    for j in 1..nb {
        if !restriction(j)?.same_as(&c0) {
            return Err(Error::Standardize(format!(
                "restriction to block {} differs from the first",
                j + 1
            )));
        }
    }
    let sections: Vec<Perm> = reach
        .iter()
        .map(|r| wreath::section(r.as_ref().unwrap(), m, 0))
        .collect();
    let t = wreath::base_element(&sections);
    let t_inv = t.inverse();
    let gens: Vec<Perm> = c.generators().iter().map(|g| t.mul(g).mul(&t_inv)).collect();
    for g in &gens {
        if !wreath::in_wreath(g, &c0, b) {
            return Err(Error::Standardize("conjugated generator leaves C0 wr B".into()));
        }
    }
    for s in &sections {
        if c0.generators().iter().any(|x| !c0.has(&x.conj(s))) {
            return Err(Error::Standardize("section does not normalize C0".into()));
        }
    }
    let conjugated = Group::new(n, gens)?;
    Ok(Standardized {
        sections,
        t,
        c0,
        conjugated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{minimal_block_system, BlockAction};

    fn grp(n: usize, gens: &[&str]) -> Group {
        Group::new(
            n,
            gens.iter().map(|s| Perm::parse_cycles(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn s5_wr_c2() -> Group {
        grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"])
    }

    /// `Sym(5)` acting the same way on five blocks, permuted cyclically.
    fn diagonal_s5() -> Group {
        let b = 5;
        let diag = |x: &str| {
            let p = Perm::parse_cycles(x, 5).unwrap();
            wreath::base_element(&vec![p; b])
        };
        let shift = wreath::top_element(&Group::cyclic(b).generators()[0], 5);
        Group::new(25, vec![diag("(1,2)"), diag("(1,2,3,4,5)"), shift]).unwrap()
    }

    fn context(k: &Group) -> FeasibleContext {
        let d = minimal_block_system(k).unwrap();
        let a = BlockAction::new(k, &d).unwrap();
        FeasibleContext::new(k, &d, &a.kernel(), &a.restriction(0).unwrap()).unwrap()
    }

    #[test]
    fn socle_examples() {
        let ctx = context(&s5_wr_c2());
        assert_eq!(ctx.socle().order_u64(), Some(3600));
        let psl = ["(1,2,3,4,5,6,7)", "(2,3)(4,7)"];
        let k = grp(
            14,
            &[psl[0], psl[1], "(8,9,10,11,12,13,14)", "(9,10)(11,14)", "(1,8)(2,9)(3,10)(4,11)(5,12)(6,13)(7,14)"],
        );
        assert_eq!(context(&k).socle().order_u64(), Some(168 * 168));

        let c6 = grp(6, &["(1,2,3,4,5,6)"]);
        let d = minimal_block_system(&c6).unwrap();
        let a = BlockAction::new(&c6, &d).unwrap();
        let err = socle_of_kernel(&a.kernel(), &d, &a.restriction(0).unwrap());
        assert!(matches!(err, Err(Error::FeasibilityViolation(_))));
    }

    #[test]
    fn bijection_examples() {
        let ctx = context(&s5_wr_c2());
        let d = ctx.system();
        let po = pair_orbits(ctx.socle(), d.block(0), d.block(1)).unwrap();
        assert_eq!(po.count, 1);
        assert!(po.bijection.is_none());

        let diag_a5 = grp(10, &["(1,2,3)(6,7,8)", "(1,2,3,4,5)(6,7,8,9,10)"]);
        let po = pair_orbits(&diag_a5, &[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9]).unwrap();
        assert_eq!(po.count, 2);
        assert_eq!(po.bijection, Some(vec![5, 6, 7, 8, 9]));
        assert!(pair_orbits(&diag_a5, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn class_examples() {
        let ctx = context(&s5_wr_c2());
        assert_eq!(ctx.e(), &vec![vec![0], vec![1]]);
        assert_eq!(ctx.e_prime(), &vec![vec![0], vec![1]]);
        let ctx = context(&diagonal_s5());
        assert_eq!(ctx.system().block_size(), 5);
        assert_eq!(ctx.e(), &vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(ctx.e_prime(), &vec![vec![0, 1, 2, 3, 4]]);
        let ctx = context(&Group::symmetric(5));
        assert_eq!(ctx.e(), &vec![vec![0]]);
        assert!(ctx.systems_agree());
    }

    #[test]
    fn frame_examples() {
        for (k, b) in [(s5_wr_c2(), 2), (diagonal_s5(), 5)] {
            let ctx = context(&k);
            let frame = ctx.build_frame().unwrap();
            let ks = frame.transport(&k);
            assert_eq!(ks.order(), k.order());
            let sym5 = Group::symmetric(5);
            for g in ks.generators() {
                assert!(wreath::in_wreath(g, &sym5, &Group::symmetric(b)));
            }
            assert!(frame.pull_back(&ks).same_as(&k));
        }
        // the diagonal frame is the bijection table itself
        let frame = context(&diagonal_s5()).build_frame().unwrap();
        assert!(frame.label().is_identity());
    }

    #[test]
    fn frame_of_twisted_diagonal() {
        // relabel blocks 2 and 4 so the bijections are not the identity
        let k = diagonal_s5();
        let p = |x: &str| Perm::parse_cycles(x, 5).unwrap();
        let e = Perm::identity(5);
        let twist = wreath::base_element(&[e.clone(), p("(1,3,2)(4,5)"), e.clone(), p("(1,5)"), e]);
        let kt = k.conjugated(&twist);
        let ctx = context(&kt);
        assert_eq!(ctx.e(), &vec![vec![0, 1, 2, 3, 4]]);
        let frame = ctx.build_frame().unwrap();
        assert_eq!(frame.label(), &twist.inverse());
        assert!(frame.transport(&kt).same_as(&k));
    }

    #[test]
    fn wstar_examples() {
        let tower = crate::primitive::build_normalizer_tower(&Perm::parse_cycles("(1,2,3,4,5)", 5).unwrap()).unwrap();
        assert_eq!(build_wstar(&tower, &Group::cyclic(2)).order_u64(), Some(800));
        assert!(build_wstar(&tower, &Group::trivial(1)).same_as(tower.n_star()));
        let t1 = crate::primitive::build_normalizer_tower(&Perm::identity(1)).unwrap();
        assert_eq!(build_wstar(&t1, &Group::cyclic(3)).order_u64(), Some(3));
    }

    #[test]
    fn standardize_examples() {
        // C10 = <(1..5)(6..10) then swap>, sections twisted by AGL(1,5)
        let c10 = grp(10, &["(1,6,2,7,3,8,4,9,5,10)"]);
        let b = Group::cyclic(2);
        let st = wreath_standardize(&c10, &b, 5).unwrap();
        assert_eq!(st.c0.order_u64(), Some(5));
        let twist = wreath::base_element(&[
            Perm::identity(5),
            Perm::parse_cycles("(2,3,5,4)", 5).unwrap(),
        ]);
        let tw = c10.conjugated(&twist);
        let st = wreath_standardize(&tw, &b, 5).unwrap();
        for g in st.conjugated.generators() {
            assert!(wreath::in_wreath(g, &st.c0, &b));
        }
        let straight = wreath_standardize(&wreath::wreath_product(&Group::cyclic(5), &b), &b, 5).unwrap();
        assert!(straight.t.is_identity());
    }
}
