use super::{Bsgs, Group};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Smallest subgroup containing `h` and normalized by `g`.
pub fn normal_closure(g: &Group, h: &Group) -> Result<Group> {
    if g.degree() != h.degree() {
        return Err(Error::Degree(g.degree(), h.degree()));
    }
    Ok(closure_of(g, h.generators().to_vec()))
}

fn closure_of(g: &Group, seeds: Vec<Perm>) -> Group {
    let n = g.degree();
    let mut chain = Bsgs::empty(n, &[]);
    let mut gens: Vec<Perm> = Vec::new();
    for s in seeds {
        if chain.add_generator(&s) {
            gens.push(s);
        }
    }
    let mut i = 0;
    while i < gens.len() {
        for x in g.generators() {
            let c = gens[i].conj(x);
            if chain.add_generator(&c) {
                gens.push(c);
            }
        }
        i += 1;
    }
    let out = Group::from_gens_unchecked(n, gens);
    let _ = out.chain.set(std::sync::Arc::new(chain));
    out
}

/// Commutator subgroup `[G, G]`.
pub fn derived_subgroup(g: &Group) -> Group {
    let gens = g.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    closure_of(g, comms)
}

/// `G = G^(0) > G^(1) > ... > G^(k)` with `G^(k)` perfect; the stable term
/// appears once.
pub fn derived_series(g: &Group) -> Vec<Group> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            break;
        }
        series.push(next);
    }
    series
}

pub fn is_solvable(g: &Group) -> bool {
    derived_series(g).last().unwrap().order_u64() == Some(1)
}

/// Last term of the derived series.
pub fn solvable_residual(g: &Group) -> Group {
    derived_series(g).pop().unwrap()
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
    fn solvability_examples() {
        let s4 = Group::symmetric(4);
        assert!(is_solvable(&s4));
        assert_eq!(solvable_residual(&s4).order_u64(), Some(1));
        let orders: Vec<_> = derived_series(&s4).iter().map(|g| g.order_u64().unwrap()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);

        let s5 = Group::symmetric(5);
        assert!(!is_solvable(&s5));
        let r = solvable_residual(&s5);
        assert_eq!(r.order_u64(), Some(60));
        assert!(r.same_as(&Group::alternating(5)));

        let c6 = Group::cyclic(6);
        assert!(is_solvable(&c6));
        assert_eq!(derived_series(&c6).len(), 2);
    }

    #[test]
    fn normal_closure_examples() {
        let s4 = Group::symmetric(4);
        let v = normal_closure(&s4, &grp(4, &["(1,2)(3,4)"])).unwrap();
        assert_eq!(v.order_u64(), Some(4));
        let t = normal_closure(&s4, &Group::trivial(4)).unwrap();
        assert_eq!(t.order_u64(), Some(1));
        let a5 = normal_closure(&Group::symmetric(5), &grp(5, &["(1,2,3)"])).unwrap();
        assert!(a5.same_as(&Group::alternating(5)));
    }

    #[test]
    fn residual_is_perfect_and_normal() {
        let g = grp(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"]);
        let r = solvable_residual(&g);
        assert_eq!(r.order_u64(), Some(3600));
        assert_eq!(derived_subgroup(&r).order(), r.order());
        for x in g.generators() {
            for y in r.generators() {
                assert!(r.has(&y.conj(x)));
            }
        }
    }
}
