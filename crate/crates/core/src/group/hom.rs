use std::sync::Arc;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Bsgs, Group, INTERNAL_SEED};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Homomorphism given by an induced action of the source group on `t` target
/// points (e.g. on blocks).
///
/// Realized as the combined action on `n + t` points: the chain of that
/// action uses the target points as its leading base, which yields the kernel
/// as a stabilizer and lets target elements be lifted by sifting.
#[derive(Clone)]
pub struct ActionHom {
    source: Group,
    action: Arc<dyn Fn(&Perm) -> Perm + Send + Sync>,
    target_degree: usize,
    images: Vec<Perm>,
    ext: Bsgs,
}

impl std::fmt::Debug for ActionHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionHom")
            .field("source_degree", &self.source.degree())
            .field("target_degree", &self.target_degree)
            .field("images", &self.images)
            .finish()
    }
}

fn combine(g: &Perm, a: &Perm) -> Perm {
    let n = g.degree();
    let images: Vec<usize> = g.images().chain(a.images().map(|x| x + n)).collect();
    Perm::from_images(&images).expect("combined action is a permutation")
}

fn target_part(x: &Perm, n: usize) -> Perm {
    let images: Vec<usize> = x.images().skip(n).map(|y| y - n).collect();
    Perm::from_images(&images).expect("target part is a permutation")
}

fn source_part(x: &Perm, n: usize) -> Perm {
    let images: Vec<usize> = x.images().take(n).collect();
    Perm::from_images(&images).expect("source part is a permutation")
}

impl ActionHom {
    /// `action(g)` must be a homomorphism into `Sym(target_degree)`.
    pub fn new(
        source: &Group,
        target_degree: usize,
        action: impl Fn(&Perm) -> Perm + Send + Sync + 'static,
    ) -> Self {
        let n = source.degree();
        let images: Vec<Perm> = source.generators().iter().map(&action).collect();
        let ext_gens: Vec<Perm> = source
            .generators()
            .iter()
            .zip(&images)
            .map(|(g, a)| combine(g, a))
            .collect();
        let prefix: Vec<usize> = (n..n + target_degree).collect();
        let chain = source.chain();
        let mut rng = ChaCha8Rng::seed_from_u64(INTERNAL_SEED);
        let ext = Bsgs::with_known_order(
            n + target_degree,
            &ext_gens,
            &prefix,
            &chain.order(),
            &mut rng,
            |r| {
                let g = chain.random_element(r);
                let a = action(&g);
                combine(&g, &a)
            },
        );
        ActionHom {
            source: source.clone(),
            action: Arc::new(action),
            target_degree,
            images,
            ext,
        }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    /// Images of the source generators, in order.
    pub fn generator_images(&self) -> &[Perm] {
        &self.images
    }

    pub fn kernel_order(&self) -> BigUint {
        self.ext.tail(self.target_degree).order()
    }

    pub fn image_order(&self) -> BigUint {
        self.ext.order() / self.kernel_order()
    }

    pub fn kernel(&self) -> Group {
        let n = self.source.degree();
        let tail = self.ext.tail(self.target_degree);
        let gens = tail
            .stabilizer_generators(0)
            .iter()
            .map(|g| source_part(g, n))
            .collect();
        Group::with_known_order(n, gens, &tail.order(), |r| source_part(&tail.random_element(r), n))
    }

    pub fn image(&self) -> Group {
        let n = self.source.degree();
        let ext = &self.ext;
        Group::with_known_order(self.target_degree, self.images.clone(), &self.image_order(), |r| {
            target_part(&ext.random_element(r), n)
        })
    }

    /// Image of an element of the source group.
    pub fn apply(&self, g: &Perm) -> Perm {
        (self.action)(g)
    }

    /// An element of the source group mapping to `q`, if `q` lies in the image.
    pub fn lift(&self, q: &Perm) -> Option<Perm> {
        let n = self.source.degree();
        if q.degree() != self.target_degree {
            return None;
        }
        let mut r = combine(&Perm::identity(n), q);
        let mut acc = Perm::identity(n + self.target_degree);
        for level in &self.ext.levels()[..self.target_degree] {
            let beta = r.image(level.base_point());
            let u = level.rep(beta)?;
            r = r.mul(level.rep_inv(beta).unwrap());
            acc = u.mul(&acc);
        }
        if (n..n + self.target_degree).any(|x| r.image(x) != x) {
            return None;
        }
        Some(source_part(&acc, n))
    }

    /// Full preimage `{k : image(k) in mq}`.
    pub fn preimage(&self, mq: &Group) -> Result<Group> {
        if mq.degree() != self.target_degree {
            return Err(Error::Degree(self.target_degree, mq.degree()));
        }
        let lifts = mq
            .generators()
            .iter()
            .map(|q| {
                self.lift(q)
                    .ok_or_else(|| Error::Argument("subgroup is not inside the image".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let kernel = self.kernel();
        let mut gens = kernel.generators().to_vec();
        gens.extend(lifts);
        let order = kernel.order() * mq.order();
        let kchain = kernel.chain();
        let mchain = mq.chain();
        Ok(Group::with_known_order(self.source.degree(), gens, &order, |r| {
            let k = kchain.random_element(r);
            let q = mchain.random_element(r);
            k.mul(&self.lift(&q).expect("image element lifts"))
        }))
    }
}
