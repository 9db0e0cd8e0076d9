//! Orbits, block systems and the action of a group on its blocks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ActionHom, Group};
use crate::perm::Perm;

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub(crate) fn class_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// Classes as sorted point lists, ordered by least element.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Orbits of `g`, each sorted, ordered by least element.
pub fn orbits(g: &Group) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.degree());
    for s in g.generators() {
        for x in 0..g.degree() {
            uf.union(x, s.image(x));
        }
    }
    uf.classes()
}

pub fn is_transitive(g: &Group) -> bool {
    g.is_transitive()
}

/// An equal-size partition of the domain.
///
/// The one-block system `{Ω}` marks a primitive group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    degree: usize,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Blocks are re-sorted internally and ordered by least element.
    pub fn new(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let size = blocks.first().map_or(0, Vec::len);
        if size == 0 || blocks.iter().any(|b| b.len() != size) {
            return Err(Error::InvalidBlocks("blocks must be non-empty and of equal size".into()));
        }
        let mut block_of = vec![usize::MAX; degree];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= degree || block_of[x] != usize::MAX {
                    return Err(Error::InvalidBlocks(format!("point {} misplaced", x + 1)));
                }
                block_of[x] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::InvalidBlocks("blocks do not cover the domain".into()));
        }
        Ok(BlockSystem {
            degree,
            block_of,
            blocks,
        })
    }

    /// The single block `Ω`.
    pub fn trivial(degree: usize) -> Self {
        BlockSystem {
            degree,
            block_of: vec![0; degree],
            blocks: vec![(0..degree).collect()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    /// True for the one-block marker of a primitive group.
    pub fn is_primitive_marker(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Induced permutation of block indices, if `g` preserves the system.
    pub fn induced(&self, g: &Perm) -> Option<Perm> {
        let mut images = Vec::with_capacity(self.count());
        for b in &self.blocks {
            let t = self.block_of[g.image(b[0])];
            if b[1..].iter().any(|&x| self.block_of[g.image(x)] != t) {
                return None;
            }
            images.push(t);
        }
        Perm::from_images(&images).ok()
    }

    pub fn is_invariant_under(&self, g: &Group) -> bool {
        g.degree() == self.degree && g.generators().iter().all(|s| self.induced(s).is_some())
    }
}

/// Finest system containing `alpha` and `beta` in one block.
fn block_closure(g: &Group, alpha: usize, beta: usize) -> UnionFind {
    let mut uf = UnionFind::new(g.degree());
    let mut queue = vec![(alpha, beta)];
    while let Some((a, b)) = queue.pop() {
        if uf.union(a, b) {
            for s in g.generators() {
                queue.push((s.image(a), s.image(b)));
            }
        }
    }
    uf
}

/// A block system of smallest block size greater than one, or the one-block
/// marker when `k` is primitive. Ties go to the lexicographically least block
/// through point 1.
pub fn minimal_block_system(k: &Group) -> Result<BlockSystem> {
    let n = k.degree();
    if !k.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let mut best: Option<(usize, Vec<usize>, UnionFind)> = None;
    for beta in 1..n {
        let mut uf = block_closure(k, 0, beta);
        let size = uf.class_size(0);
        if size == n {
            continue;
        }
        let root = uf.find(0);
        let block: Vec<usize> = (0..n).filter(|&x| uf.find(x) == root).collect();
        let better = match &best {
            None => true,
            Some((s, b, _)) => size < *s || (size == *s && block < *b),
        };
        if better {
            best = Some((size, block, uf));
        }
    }
    match best {
        None => Ok(BlockSystem::trivial(n)),
        Some((_, _, mut uf)) => BlockSystem::new(n, uf.classes()),
    }
}

/// The action of a group on a block system, with its image.
#[derive(Clone, Debug)]
pub struct BlockAction {
    system: Arc<BlockSystem>,
    hom: ActionHom,
    image: Group,
}

impl BlockAction {
    pub fn new(k: &Group, system: &BlockSystem) -> Result<Self> {
        if !system.is_invariant_under(k) {
            return Err(Error::InvalidBlocks("system is not invariant".into()));
        }
        let system = Arc::new(system.clone());
        let sys = Arc::clone(&system);
        let hom = ActionHom::new(k, system.count(), move |g| {
            sys.induced(g).expect("group preserves its block system")
        });
        let image = hom.image();
        Ok(BlockAction { system, hom, image })
    }

    pub fn system(&self) -> &BlockSystem {
        &self.system
    }

    pub fn hom(&self) -> &ActionHom {
        &self.hom
    }

    pub fn group(&self) -> &Group {
        self.hom.source()
    }

    /// `K^𝔇` on block indices.
    pub fn image(&self) -> &Group {
        &self.image
    }

    /// `K_𝔇`, the elements fixing every block setwise.
    pub fn kernel(&self) -> Group {
        self.hom.kernel()
    }

    pub fn preimage(&self, mq: &Group) -> Result<Group> {
        self.hom.preimage(mq)
    }

    /// Setwise stabilizer of block `i`.
    pub fn block_stabilizer(&self, i: usize) -> Result<Group> {
        if self.system.count() == 1 {
            return Ok(self.group().clone());
        }
        let st = self.image.pointwise_stabilizer(&[i])?;
        self.preimage(&st)
    }

    /// `K^Δ` for block `i`, re-indexed by position in the sorted block.
    pub fn restriction(&self, i: usize) -> Result<Group> {
        let st = self.block_stabilizer(i)?;
        Ok(st.restrict(self.system.block(i)))
    }
}

pub fn action_on_blocks(k: &Group, d: &BlockSystem) -> Result<(ActionHom, Group)> {
    let a = BlockAction::new(k, d)?;
    Ok((a.hom, a.image))
}

pub fn kernel_of_blocks(k: &Group, d: &BlockSystem) -> Result<Group> {
    Ok(BlockAction::new(k, d)?.kernel())
}

/// True iff the orbits of `K_𝔇` are exactly the blocks.
pub fn is_normal_system(k: &Group, d: &BlockSystem) -> Result<bool> {
    let kernel = kernel_of_blocks(k, d)?;
    Ok(orbits(&kernel) == d.blocks())
}

pub fn preimage_under_blocks(hom: &ActionHom, mq: &Group) -> Result<Group> {
    hom.preimage(mq)
}

pub fn restriction_to_block(k: &Group, d: &BlockSystem, block: usize) -> Result<Group> {
    if block >= d.count() {
        return Err(Error::Argument(format!("no block {block}")));
    }
    BlockAction::new(k, d)?.restriction(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn grp(n: usize, gens: &[&str]) -> Group {
        Group::new(
            n,
            gens.iter().map(|s| Perm::parse_cycles(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
        blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect()
    }

    fn s3_wr_s2() -> Group {
        grp(6, &["(1,2)", "(1,2,3)", "(1,4)(2,5)(3,6)"])
    }

    /// Whether the images of `block` under `g` pairwise coincide or are disjoint.
    fn is_block(g: &Group, block: &BTreeSet<usize>) -> bool {
        let mut seen = vec![block.clone()];
        let mut i = 0;
        while i < seen.len() {
            for s in g.generators() {
                let img: BTreeSet<usize> = seen[i].iter().map(|&x| s.image(x)).collect();
                if !seen.contains(&img) {
                    if seen.iter().any(|b| !b.is_disjoint(&img)) {
                        return false;
                    }
                    seen.push(img);
                }
            }
            i += 1;
        }
        true
    }

    /// Smallest nontrivial block size through point 0, by subset enumeration.
    fn brute_min_block(g: &Group) -> usize {
        let n = g.degree();
        for size in 2..n {
            if !n.is_multiple_of(size) {
                continue;
            }
            let mut found = false;
            let rest: Vec<usize> = (1..n).collect();
            let mut idx: Vec<usize> = (0..size - 1).collect();
            loop {
                let b: BTreeSet<usize> =
                    std::iter::once(0).chain(idx.iter().map(|&i| rest[i])).collect();
                if is_block(g, &b) {
                    found = true;
                    break;
                }
                let mut j = idx.len();
                let mut advanced = false;
                while j > 0 {
                    j -= 1;
                    if idx[j] < rest.len() - (idx.len() - j) {
                        idx[j] += 1;
                        for t in j + 1..idx.len() {
                            idx[t] = idx[t - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
            if found {
                return size;
            }
        }
        n
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(
            one_based(&orbits(&grp(5, &["(1,2)(3,4)"]))),
            vec![vec![1, 2], vec![3, 4], vec![5]]
        );
        assert_eq!(orbits(&Group::symmetric(4)).len(), 1);
        let g = grp(5, &["(1,2,3)", "(4,5)"]);
        assert_eq!(one_based(&orbits(&g)), vec![vec![1, 2, 3], vec![4, 5]]);
        assert!(!is_transitive(&g));
    }

    #[test]
    fn minimal_block_examples() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let d = minimal_block_system(&c4).unwrap();
        assert_eq!(one_based(d.blocks()), vec![vec![1, 3], vec![2, 4]]);
        assert!(minimal_block_system(&Group::symmetric(4)).unwrap().is_primitive_marker());
        let d = minimal_block_system(&s3_wr_s2()).unwrap();
        assert_eq!(one_based(d.blocks()), vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert!(matches!(
            minimal_block_system(&grp(4, &["(1,2)"])),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn tie_break_prefers_least_block() {
        // regular C2 x C2 x C2: seven systems of size 2
        let g = grp(8, &["(1,2)(3,4)(5,6)(7,8)", "(1,3)(2,4)(5,7)(6,8)", "(1,5)(2,6)(3,7)(4,8)"]);
        let d = minimal_block_system(&g).unwrap();
        assert_eq!(one_based(d.blocks())[0], vec![1, 2]);
    }

    #[test]
    fn minimality_matches_brute_force() {
        let cases = [
            grp(4, &["(1,2,3,4)"]),
            grp(6, &["(1,2,3,4,5,6)"]),
            s3_wr_s2(),
            grp(6, &["(1,2)", "(1,3,5)(2,4,6)"]),
            grp(8, &["(1,2,3,4,5,6,7,8)", "(2,8)(3,7)(4,6)"]),
            grp(9, &["(1,2,3)", "(1,4,7)(2,5,8)(3,6,9)"]),
            grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"]),
            grp(12, &["(1,2,3,4,5,6,7,8,9,10,11,12)", "(2,6)(3,11)(5,9)(8,12)"]),
            grp(7, &["(1,2,3,4,5,6,7)", "(2,3)(4,7)"]),
            Group::symmetric(5),
        ];
        for g in &cases {
            let d = minimal_block_system(g).unwrap();
            let size = if d.is_primitive_marker() { g.degree() } else { d.block_size() };
            assert_eq!(size, brute_min_block(g), "{g:?}");
            assert!(d.is_invariant_under(g));
        }
    }

    #[test]
    fn block_action_examples() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let d = minimal_block_system(&c4).unwrap();
        let (_, img) = action_on_blocks(&c4, &d).unwrap();
        assert_eq!(img.degree(), 2);
        assert_eq!(img.order_u64(), Some(2));
        let ker = kernel_of_blocks(&c4, &d).unwrap();
        assert_eq!(ker.order_u64(), Some(2));
        assert!(ker.has(&Perm::parse_cycles("(1,3)(2,4)", 4).unwrap()));
        assert!(is_normal_system(&c4, &d).unwrap());
        let r = restriction_to_block(&c4, &d, 0).unwrap();
        assert_eq!((r.degree(), r.order_u64()), (2, Some(2)));

        let w = s3_wr_s2();
        let d = minimal_block_system(&w).unwrap();
        let a = BlockAction::new(&w, &d).unwrap();
        assert_eq!(a.image().order_u64(), Some(2));
        assert_eq!(a.kernel().order_u64(), Some(36));
        assert!(is_normal_system(&w, &d).unwrap());
        assert_eq!(a.preimage(a.image()).unwrap().order_u64(), Some(72));
        assert_eq!(a.preimage(&Group::trivial(2)).unwrap().order_u64(), Some(36));
        let r = a.restriction(0).unwrap();
        assert_eq!((r.degree(), r.order_u64()), (3, Some(6)));

        let t = BlockSystem::trivial(4);
        let (_, img) = action_on_blocks(&c4, &t).unwrap();
        assert!(img.is_trivial());
        assert_eq!(kernel_of_blocks(&c4, &t).unwrap().order_u64(), Some(4));
    }

    #[test]
    fn non_invariant_system_is_rejected() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let d = BlockSystem::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(action_on_blocks(&c4, &d), Err(Error::InvalidBlocks(_))));
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![2]]).is_err());
    }

    #[test]
    fn regular_sym3_has_non_normal_minimal_system() {
        // Right regular action of Sym(3) on its six elements.
        let elems: Vec<Perm> = {
            let s3 = Group::symmetric(3);
            let mut v = Vec::new();
            s3.chain().for_each_element(|g| v.push(g.clone()));
            v.sort();
            v
        };
        let index = |g: &Perm| elems.iter().position(|e| e == g).unwrap();
        let gens: Vec<Perm> = Group::symmetric(3)
            .generators()
            .iter()
            .map(|s| Perm::from_images(&elems.iter().map(|e| index(&e.mul(s))).collect::<Vec<_>>()).unwrap())
            .collect();
        let k = Group::new(6, gens).unwrap();
        assert_eq!(k.order_u64(), Some(6));
        let d = minimal_block_system(&k).unwrap();
        assert_eq!(d.block_size(), 2);
        assert!(!is_normal_system(&k, &d).unwrap());
    }

    #[test]
    fn kernel_image_orders_multiply() {
        for g in [s3_wr_s2(), grp(8, &["(1,2,3,4,5,6,7,8)", "(2,8)(3,7)(4,6)"]), grp(6, &["(1,2,3,4,5,6)"])] {
            let d = minimal_block_system(&g).unwrap();
            let a = BlockAction::new(&g, &d).unwrap();
            assert_eq!(a.kernel().order() * a.image().order(), g.order());
            for i in 0..d.count() {
                assert!(a.restriction(i).unwrap().is_transitive());
            }
        }
    }
}
