//! Permutations of `{0, .., n-1}` stored as image tables.
//!
//! Points are 0-based internally and 1-based in every textual form. The group
//! action is on the right: `i^(gh) = (i^g)^h`, so `g.mul(&h)` means "apply `g`,
//! then `h`".

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, ParseError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

/// Multiset of cycle lengths, sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self, ParseError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(ParseError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&x| x as u32).collect(),
        })
    }

    /// Builds a permutation from 1-based images such as `[2, 3, 1]`.
    pub fn from_images_one_based(images: &[usize]) -> Result<Self, ParseError> {
        let zero: Vec<usize> = images
            .iter()
            .map(|&x| x.checked_sub(1).ok_or(ParseError::NotBijection(images.len())))
            .collect::<Result<_, _>>()?;
        Self::from_images(&zero)
    }

    pub(crate) fn from_vec_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(&images.iter().map(|&x| x as usize).collect::<Vec<_>>()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from disjoint (or not) cycles of 0-based points,
    /// composed left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, ParseError> {
        let mut g = Perm::identity(degree);
        for cycle in cycles {
            let mut c = Perm::identity(degree);
            let mut seen = std::collections::HashSet::new();
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(ParseError::PointOutOfRange { point: x + 1, degree });
                }
                if !seen.insert(x) {
                    return Err(ParseError::RepeatedPoint(x + 1));
                }
                c.images[x] = cycle[(i + 1) % cycle.len()] as u32;
            }
            g = g.mul(&c);
        }
        Ok(g)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Unchecked product "self then other". Panics on degree mismatch.
    pub fn mul(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// Checked product: `i^(gh) = (i^g)^h`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::Degree(self.degree(), other.degree()));
        }
        Ok(self.mul(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `k^-1 * self * k`. Panics on degree mismatch.
    pub fn conj(&self, k: &Perm) -> Perm {
        assert_eq!(self.degree(), k.degree(), "degree mismatch in conjugation");
        let mut out = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[k.images[i] as usize] = k.images[x as usize];
        }
        Perm { images: out }
    }

    /// Checked conjugation `k^-1 g k`.
    pub fn conjugate(&self, k: &Perm) -> Result<Perm> {
        if self.degree() != k.degree() {
            return Err(Error::Degree(self.degree(), k.degree()));
        }
        Ok(self.conj(k))
    }

    /// Commutator `g^-1 h^-1 g h`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    pub fn pow(&self, exp: i64) -> Perm {
        let n = self.degree();
        let mut out = vec![0u32; n];
        let mut done = vec![false; n];
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            let mut x = self.images[start];
            while x as usize != start {
                cycle.push(x);
                x = self.images[x as usize];
            }
            let len = cycle.len() as i64;
            let shift = exp.rem_euclid(len) as usize;
            for (i, &p) in cycle.iter().enumerate() {
                out[p as usize] = cycle[(i + shift) % cycle.len()];
                done[p as usize] = true;
            }
        }
        Perm { images: out }
    }

    /// Cycles of length at least two, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.image(x);
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lens)
    }

    /// True iff the cycle decomposition is a single cycle through all points.
    pub fn is_full_cycle(&self) -> bool {
        let n = self.degree();
        if n == 0 {
            return false;
        }
        let mut x = self.image(0);
        let mut steps = 1;
        while x != 0 {
            x = self.image(x);
            steps += 1;
        }
        steps == n
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycle_type()
            .0
            .iter()
            .fold(1u128, |acc, &l| acc.lcm(&(l as u128)))
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.moved_points().next()
    }

    /// Restriction to an invariant point list; point `points[i]` becomes `i`.
    pub fn restrict(&self, points: &[usize]) -> Perm {
        let mut index = vec![u32::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i as u32;
        }
        let images = points
            .iter()
            .map(|&p| {
                let q = index[self.image(p)];
                assert!(q != u32::MAX, "restriction to a non-invariant set");
                q
            })
            .collect();
        Perm { images }
    }

    /// Embeds `self` acting on `points` (by index) into degree `degree`,
    /// fixing everything else.
    pub fn embed(&self, points: &[usize], degree: usize) -> Perm {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &p) in points.iter().enumerate() {
            images[p] = points[self.image(i)] as u32;
        }
        Perm { images }
    }

    /// Disjoint-cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`; `()` for identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        s
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)` at a known degree.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, ParseError> {
        let t = text.trim();
        if t.is_empty() || t == "()" || t == "id" {
            return Ok(Perm::identity(degree));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let r = rest.trim_start();
            if r.is_empty() {
                break;
            }
            let r = r
                .strip_prefix('(')
                .ok_or_else(|| ParseError::Malformed(text.to_string()))?;
            let close = r
                .find(')')
                .ok_or_else(|| ParseError::Malformed(text.to_string()))?;
            let body = &r[..close];
            let mut cycle = Vec::new();
            if !body.trim().is_empty() {
                for tok in body.split(',') {
                    let p: usize = tok
                        .trim()
                        .parse()
                        .map_err(|_| ParseError::Malformed(text.to_string()))?;
                    if p == 0 || p > degree {
                        return Err(ParseError::PointOutOfRange { point: p, degree });
                    }
                    cycle.push(p - 1);
                }
            }
            cycles.push(cycle);
            rest = &r[close + 1..];
        }
        let mut seen = vec![false; degree];
        for c in &cycles {
            for &x in c {
                if seen[x] {
                    return Err(ParseError::RepeatedPoint(x + 1));
                }
                seen[x] = true;
            }
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }
}

/// Parses `"n=6: (1,2,3)(4,5)"`.
impl FromStr for Perm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| ParseError::Malformed(s.to_string()))?;
        let (deg, cycles) = rest
            .split_once(':')
            .ok_or_else(|| ParseError::Malformed(s.to_string()))?;
        let degree: usize = deg
            .trim()
            .parse()
            .map_err(|_| ParseError::Malformed(s.to_string()))?;
        if degree == 0 {
            return Err(ParseError::Malformed(s.to_string()));
        }
        Perm::parse_cycles(cycles, degree)
    }
}

/// Formats as `"n=6: (1,2,3)(4,5)"`.
/// Serialized as the 1-based image list, which fixes the degree.
impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based_images().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_images_one_based(&images).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}: {}", self.degree(), self.to_cycle_string())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"n=6: (1,2,3)(4,5)"`.
pub fn parse_cycles(text: &str) -> Result<Perm, ParseError> {
    text.parse()
}

pub fn format_cycles(g: &Perm) -> String {
    g.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert!(p("n=2: (1,2)").mul(&p("n=2: (1,2)")).is_identity());
        assert_eq!(p("n=3: (1,2,3)").mul(&p("n=3: (1,2,3)")), p("n=3: (1,3,2)"));
        let gh = p("n=3: (1,2)").compose(&p("n=3: (2,3)")).unwrap();
        assert_eq!(gh.image(0), 2);
        assert!(matches!(
            p("n=3: (1,2)").compose(&p("n=4: (1,2)")),
            Err(Error::Degree(3, 4))
        ));
    }

    #[test]
    fn conjugate_examples() {
        let g = p("n=3: (1,2,3)");
        assert_eq!(g.conjugate(&Perm::identity(3)).unwrap(), g);
        // (1,2)^-1 (1,2,3) (1,2): 1 -> 2 -> 3 -> 3, i.e. 1 -> 3.
        let c = g.conjugate(&p("n=3: (1,2)")).unwrap();
        assert_eq!(c, p("n=3: (1,3,2)"));
        let k = p("n=3: (1,2)");
        assert_eq!(c, k.inverse().mul(&g).mul(&k));
    }

    #[test]
    fn cycle_type_and_order() {
        let g = p("n=5: (1,2,3,4,5)");
        assert!(g.is_full_cycle());
        assert_eq!(g.order(), 5);
        let h = p("n=5: (1,2)(3,4,5)");
        assert!(!h.is_full_cycle());
        assert_eq!(h.order(), 6);
        assert_eq!(h.cycle_type().lengths(), &[3, 2]);
        let id = Perm::identity(1);
        assert!(id.is_full_cycle());
        assert_eq!(id.order(), 1);
    }

    #[test]
    fn parse_examples() {
        let g = p("n=3: (1,2,3)");
        assert_eq!(g.one_based_images(), vec![2, 3, 1]);
        assert!(p("n=5: ()").is_identity());
        assert_eq!(p("n=5: ()").degree(), 5);
        assert_eq!(
            "n=4: (1,2)(1,3)".parse::<Perm>(),
            Err(ParseError::RepeatedPoint(1))
        );
        assert!(matches!(
            "n=3: (1,4)".parse::<Perm>(),
            Err(ParseError::PointOutOfRange { point: 4, degree: 3 })
        ));
        assert!(matches!("(1,2)".parse::<Perm>(), Err(ParseError::Malformed(_))));
        assert!(matches!("n=3: (1,2".parse::<Perm>(), Err(ParseError::Malformed(_))));
        assert_eq!(p("n=6: (1,2,3)(4,5)").to_string(), "n=6: (1,2,3)(4,5)");
    }

    #[test]
    fn restrict_and_embed() {
        let g = p("n=6: (1,3,5)(2,4)");
        let r = g.restrict(&[0, 2, 4]);
        assert_eq!(r, p("n=3: (1,2,3)"));
        assert_eq!(r.embed(&[0, 2, 4], 6), p("n=6: (1,3,5)"));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(&v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn conjugation_preserves_cycle_type(g in arb_perm(10), k in arb_perm(10)) {
            prop_assert_eq!(g.conj(&k).cycle_type(), g.cycle_type());
            prop_assert_eq!(g.conj(&k), k.inverse().mul(&g).mul(&k));
        }

        #[test]
        fn inverse_of_product(g in arb_perm(9), h in arb_perm(9)) {
            prop_assert_eq!(g.mul(&h).inverse(), h.inverse().mul(&g.inverse()));
            prop_assert!(g.mul(&g.inverse()).is_identity());
        }

        #[test]
        fn order_is_least_exponent(g in arb_perm(9)) {
            let ord = g.order();
            let mut x = g.clone();
            let mut m = 1u128;
            while !x.is_identity() && m <= 10_000 {
                x = x.mul(&g);
                m += 1;
            }
            prop_assert_eq!(m, ord);
            prop_assert!(g.pow(ord as i64).is_identity());
            prop_assert_eq!(g.pow(-1), g.inverse());
        }

        #[test]
        fn text_round_trip(g in arb_perm(8)) {
            prop_assert_eq!(parse_cycles(&format_cycles(&g)).unwrap(), g);
        }
    }
}
