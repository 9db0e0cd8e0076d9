//! Imprimitive wreath products in product coordinates.
//!
//! The point `(δ, γ)` of `Δ × Γ` with `|Δ| = m` is stored as `γ·m + δ`, so
//! block `γ` is the interval `γ·m .. (γ+1)·m`. A permutation preserving the
//! blocks acts as `(δ, γ) ↦ (δ^g(γ), γ^g)` with section `g(γ) ∈ Sym(Δ)`.

use num_bigint::BigUint;

use crate::blocks::BlockSystem;
use crate::group::Group;
use crate::perm::Perm;

/// The system of intervals of length `m` on `m·b` points.
pub fn product_system(m: usize, b: usize) -> BlockSystem {
    BlockSystem::new(m * b, (0..b).map(|j| (j * m..(j + 1) * m).collect()).collect())
        .expect("intervals partition the domain")
}

/// Induced permutation of the blocks, if `g` preserves them.
pub fn top(g: &Perm, m: usize) -> Option<Perm> {
    let b = g.degree() / m;
    let mut images = Vec::with_capacity(b);
    for j in 0..b {
        let t = g.image(j * m) / m;
        if (j * m + 1..(j + 1) * m).any(|x| g.image(x) / m != t) {
            return None;
        }
        images.push(t);
    }
    Perm::from_images(&images).ok()
}

/// Section `g(γ)`; `g` must preserve the blocks.
pub fn section(g: &Perm, m: usize, gamma: usize) -> Perm {
    let images: Vec<usize> = (0..m).map(|d| g.image(gamma * m + d) % m).collect();
    Perm::from_images(&images).expect("section of a block-preserving permutation")
}

/// Base-group element `(δ, γ) ↦ (δ^t(γ), γ)`.
pub fn base_element(sections: &[Perm]) -> Perm {
    let m = sections.first().map_or(0, Perm::degree);
    let mut images = Vec::with_capacity(m * sections.len());
    for (j, s) in sections.iter().enumerate() {
        images.extend(s.images().map(|d| j * m + d));
    }
    Perm::from_images(&images).expect("sections are permutations")
}

/// Top-group element `(δ, γ) ↦ (δ, γ^q)`.
pub fn top_element(q: &Perm, m: usize) -> Perm {
    let b = q.degree();
    let images: Vec<usize> = (0..m * b).map(|x| q.image(x / m) * m + x % m).collect();
    Perm::from_images(&images).expect("top element is a permutation")
}

/// Copy of `a` acting on block `gamma` only.
pub fn embed_in_block(a: &Perm, gamma: usize, b: usize) -> Perm {
    let m = a.degree();
    let mut sections = vec![Perm::identity(m); b];
    sections[gamma] = a.clone();
    base_element(&sections)
}

/// `A ≀ B` in its imprimitive action on `Δ × Γ`.
pub fn wreath_product(a: &Group, b: &Group) -> Group {
    let m = a.degree();
    let nb = b.degree();
    let mut gens = Vec::new();
    for s in a.generators() {
        for j in 0..nb {
            gens.push(embed_in_block(s, j, nb));
        }
    }
    gens.extend(b.generators().iter().map(|q| top_element(q, m)));
    let order: BigUint = a.order().pow(nb as u32) * b.order();
    let (ac, bc) = (a.chain(), b.chain());
    Group::with_known_order(m * nb, gens, &order, |r| {
        let sections: Vec<Perm> = (0..nb).map(|_| ac.random_element(r)).collect();
        base_element(&sections).mul(&top_element(&bc.random_element(r), m))
    })
}

/// Membership in `A ≀ B`.
pub fn in_wreath(g: &Perm, a: &Group, b: &Group) -> bool {
    let m = a.degree();
    if g.degree() != m * b.degree() {
        return false;
    }
    match top(g, m) {
        Some(q) if b.has(&q) => (0..b.degree()).all(|j| a.has(&section(g, m, j))),
        _ => false,
    }
}
