//! Deterministic test corpora of transitive groups.
//!
//! Profiles:
//! - `tiny`: degree ≤ 10, every entry enumerable (order ≤ 10^6).
//! - `paper-cases`: one or more fixtures per family of primitive groups
//!   with a full cycle (affine, symmetric/alternating, projective,
//!   sporadic), plus the wreath fixture. `M_23` is parse-only.
//! - `full`: `tiny` together with degree 11 and 12 entries.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::prime_factors;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;
use crate::wreath::wreath_product;

/// Properties known by construction; `None` where only the oracle knows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub transitive: bool,
    pub primitive: Option<bool>,
    pub has_regular_cyclic: Option<bool>,
    pub base_size: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub family: &'static str,
    pub group: Group,
    pub expected: Expected,
    /// False for fixtures above the enumeration cap.
    pub enumerable: bool,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub profile: String,
    pub entries: Vec<CorpusEntry>,
}

pub const PROFILES: [&str; 3] = ["tiny", "paper-cases", "full"];

/// Arithmetic in `GF(p^k)`; elements are integers whose base-`p` digits
/// are polynomial coefficients, lowest first.
#[derive(Clone, Debug)]
pub struct Gf {
    p: usize,
    k: usize,
    /// Monic modulus without its leading coefficient.
    modulus: Vec<usize>,
}

impl Gf {
    pub fn new(q: usize) -> Gf {
        let p = prime_factors(q as u64)[0] as usize;
        let k = (q as f64).log(p as f64).round() as usize;
        // x^2+x+1, x^3+x+1, x^2+1 (mod 3); prime fields need none
        let modulus = match (p, k) {
            (_, 1) => vec![0],
            (2, 2) => vec![1, 1],
            (2, 3) => vec![1, 1, 0],
            (3, 2) => vec![1, 0],
            _ => panic!("no modulus tabulated for GF({q})"),
        };
        Gf { p, k, modulus }
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.k as u32)
    }

    fn digits(&self, x: usize) -> Vec<usize> {
        (0..self.k).map(|i| x / self.p.pow(i as u32) % self.p).collect()
    }

    fn compose_digits(&self, d: &[usize]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.compose_digits(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let d: Vec<usize> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.compose_digits(&d)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return a * b % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0; 2 * self.k - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // x^k = -modulus
        for top in (self.k..prod.len()).rev() {
            let c = prod[top];
            prod[top] = 0;
            for (i, m) in self.modulus.iter().enumerate() {
                let t = top - self.k + i;
                prod[t] = (prod[t] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        self.compose_digits(&prod[..self.k])
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn inv(&self, a: usize) -> usize {
        self.pow(a, self.order() - 2)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        let q = self.order();
        (2..q)
            .chain([1])
            .find(|&g| (1..q - 1).all(|e| self.pow(g, e) != 1))
            .unwrap_or(1)
    }
}

fn perm_of(n: usize, f: impl Fn(usize) -> usize) -> Perm {
    Perm::from_images(&(0..n).map(f).collect::<Vec<_>>()).expect("construction is a bijection")
}

/// `PGL_2(q)` on the projective line `GF(q) ∪ {∞}`, `∞` being point `q`;
/// with `semilinear`, `PΓL_2(q)`; with `special`, `PSL_2(q)`.
pub fn projective_line(q: usize, special: bool, semilinear: bool) -> Group {
    let f = Gf::new(q);
    let inf = q;
    let w = f.primitive_element();
    let translate = perm_of(q + 1, |x| if x == inf { inf } else { f.add(x, 1) });
    let scale = |a: usize| perm_of(q + 1, |x| if x == inf { inf } else { f.mul(a, x) });
    let invert = perm_of(q + 1, |x| match x {
        x if x == inf => 0,
        0 => inf,
        x => f.neg(f.inv(x)),
    });
    let mut gens = vec![translate, invert];
    gens.push(if special { scale(f.mul(w, w)) } else { scale(w) });
    if semilinear {
        gens.push(perm_of(q + 1, |x| if x == inf { inf } else { f.pow(x, f.p) }));
    }
    Group::new(q + 1, gens).expect("generators share the degree")
}

/// `AGL(1,q)` on `GF(q)`, or `AΓL(1,q)` with `semilinear`.
pub fn affine_line(q: usize, semilinear: bool) -> Group {
    let f = Gf::new(q);
    let w = f.primitive_element();
    let mut gens = vec![perm_of(q, |x| f.add(x, 1)), perm_of(q, |x| f.mul(w, x))];
    if semilinear {
        gens.push(perm_of(q, |x| f.pow(x, f.p)));
    }
    Group::new(q, gens).expect("generators share the degree")
}

/// `p:k`, the subgroup of `AGL(1,p)` with multipliers of order `k`.
pub fn affine_subgroup(p: usize, k: usize) -> Group {
    let f = Gf::new(p);
    let a = f.pow(f.primitive_element(), (p - 1) / k);
    Group::new(p, vec![perm_of(p, |x| (x + 1) % p), perm_of(p, |x| f.mul(a, x))]).unwrap()
}

/// `PGL_3(2)` on the seven nonzero vectors of `GF(2)^3`.
pub fn pgl_3_2() -> Group {
    // points are v - 1 for bit vectors v = 1..7
    let singer = |v: usize| {
        let y = v << 1;
        if y & 8 != 0 {
            (y ^ 0b1011) & 7
        } else {
            y
        }
    };
    let transvection = |v: usize| v ^ ((v >> 1) & 1);
    Group::new(
        7,
        vec![
            perm_of(7, |x| singer(x + 1) - 1),
            perm_of(7, |x| transvection(x + 1) - 1),
        ],
    )
    .unwrap()
}

pub fn dihedral(n: usize) -> Group {
    let rot = perm_of(n, |x| (x + 1) % n);
    let refl = perm_of(n, |x| (n - x) % n);
    Group::new(n, vec![rot, refl]).unwrap()
}

/// `Sym(5)` on the ten 2-subsets of `{1..5}`.
pub fn sym5_on_pairs(alternating: bool) -> Group {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let act = |g: &Perm| {
        perm_of(10, |x| {
            let (a, b) = pairs[x];
            let (u, v) = (g.image(a), g.image(b));
            pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap()
        })
    };
    let src = if alternating {
        Group::alternating(5)
    } else {
        Group::symmetric(5)
    };
    Group::new(10, src.generators().iter().map(act).collect()).unwrap()
}

fn parse(n: usize, gens: &[&str]) -> Group {
    Group::new(
        n,
        gens.iter()
            .map(|s| Perm::parse_cycles(s, n).expect("fixture text parses"))
            .collect(),
    )
    .expect("fixture generators share the degree")
}

pub fn psl_2_11() -> Group {
    parse(11, &["(1,2,3,4,5,6,7,8,9,10,11)", "(2,10)(3,4)(5,9)(6,7)"])
}

pub fn m11() -> Group {
    parse(11, &["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"])
}

pub fn m23() -> Group {
    let cycle: Vec<String> = (1..=23).map(|i| i.to_string()).collect();
    let c = format!("({})", cycle.join(","));
    parse(
        23,
        &[
            &c,
            "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
        ],
    )
}

/// `Sym(5) ≀ C_2` on ten points, blocks `{1..5}` and `{6..10}`.
pub fn sym5_wr_c2() -> Group {
    parse(10, &["(1,2)", "(1,2,3,4,5)", "(1,6)(2,7)(3,8)(4,9)(5,10)"])
}

/// `Sym(5) ≀ C_2 ≀ … ≀ C_2` with `levels` copies of `C_2`, degree `5·2^levels`.
pub fn scaling_family(levels: usize) -> Group {
    let mut g = Group::symmetric(5);
    for _ in 0..levels {
        g = wreath_product(&g, &Group::cyclic(2));
    }
    g
}

struct Builder {
    entries: Vec<CorpusEntry>,
}

impl Builder {
    fn add(&mut self, name: impl Into<String>, family: &'static str, group: Group, expected: Expected) {
        self.entries.push(CorpusEntry {
            name: name.into(),
            family,
            group,
            expected: Expected {
                transitive: true,
                ..expected
            },
            enumerable: true,
        });
    }

    fn plain(&mut self, name: impl Into<String>, family: &'static str, group: Group) {
        self.add(name, family, group, Expected::default());
    }
}

fn known(primitive: Option<bool>, base_size: usize) -> Expected {
    Expected {
        transitive: true,
        primitive,
        has_regular_cyclic: Some(base_size > 0),
        base_size: Some(base_size),
    }
}

fn primitive_only() -> Expected {
    Expected {
        primitive: Some(true),
        ..Expected::default()
    }
}

fn tiny(b: &mut Builder) {
    for n in 2..=10 {
        b.add(format!("C{n}"), "cyclic", Group::cyclic(n), known(Some(crate::arith::is_prime(n as u64)), 1));
    }
    for n in 3..=10 {
        b.add(format!("D{n}"), "dihedral", dihedral(n), known(Some(crate::arith::is_prime(n as u64)), 1));
    }
    for n in 3..=8 {
        b.add(format!("Sym{n}"), "symmetric", Group::symmetric(n), known(Some(true), 1));
    }
    for n in 4..=9 {
        // even n: full cycles are odd; prime n: Sylow; Alt9 is left to the oracle
        let expected = match n {
            9 => primitive_only(),
            n => known(Some(true), usize::from(n % 2 == 1)),
        };
        b.add(format!("Alt{n}"), "alternating", Group::alternating(n), expected);
    }
    for (p, k) in [(5, 2), (5, 4), (7, 3), (7, 6), (7, 2)] {
        b.add(format!("{p}:{k}"), "affine", affine_subgroup(p, k), primitive_only());
    }
    b.plain("AGL(1,8)", "affine", affine_line(8, false));
    b.plain("AGammaL(1,8)", "affine", affine_line(8, true));
    b.plain("AGL(1,9)", "affine", affine_line(9, false));
    b.plain("AGammaL(1,9)", "affine", affine_line(9, true));
    b.plain("PGL(2,4)", "projective", projective_line(4, false, false));
    b.plain("PGammaL(2,4)", "projective", projective_line(4, false, true));
    b.plain("PSL(2,5)", "projective", projective_line(5, true, false));
    b.plain("PGL(2,5)", "projective", projective_line(5, false, false));
    b.plain("PGL(3,2)", "projective", pgl_3_2());
    b.plain("PSL(2,7)", "projective", projective_line(7, true, false));
    b.plain("PGL(2,7)", "projective", projective_line(7, false, false));
    b.plain("PGL(2,8)", "projective", projective_line(8, false, false));
    b.plain("PGammaL(2,8)", "projective", projective_line(8, false, true));
    b.plain("PSL(2,9)", "projective", projective_line(9, true, false));
    b.plain("PGL(2,9)", "projective", projective_line(9, false, false));
    b.plain("PGammaL(2,9)", "projective", projective_line(9, false, true));
    b.plain("Sym5 on pairs", "primitive-other", sym5_on_pairs(false));
    b.plain("Alt5 on pairs", "primitive-other", sym5_on_pairs(true));

    let (s, a, c) = (Group::symmetric, Group::alternating, Group::cyclic);
    let wreaths: Vec<(&str, Group, Group)> = vec![
        ("C2 wr C2", c(2), c(2)),
        ("C2 wr C3", c(2), c(3)),
        ("Sym2 wr Sym3", s(2), s(3)),
        ("C3 wr C2", c(3), c(2)),
        ("Sym3 wr Sym2", s(3), s(2)),
        ("C2 wr C4", c(2), c(4)),
        ("C4 wr C2", c(4), c(2)),
        ("Sym2 wr Sym4", s(2), s(4)),
        ("Sym4 wr Sym2", s(4), s(2)),
        ("Alt4 wr C2", a(4), c(2)),
        ("D4 wr C2", dihedral(4), c(2)),
        ("C2 wr D4", c(2), dihedral(4)),
        ("C3 wr C3", c(3), c(3)),
        ("Sym3 wr Sym3", s(3), s(3)),
        ("Sym3 wr C3", s(3), c(3)),
        ("C2 wr C5", c(2), c(5)),
        ("Sym2 wr Sym5", s(2), s(5)),
        ("C5 wr C2", c(5), c(2)),
        ("D5 wr C2", dihedral(5), c(2)),
        ("5:4 wr C2", affine_subgroup(5, 4), c(2)),
        ("Alt5 wr C2", a(5), c(2)),
        ("Sym5 wr C2", s(5), c(2)),
        ("C2 wr C2 wr C2", wreath_product(&c(2), &c(2)), c(2)),
        ("PGL(2,4) wr C2", projective_line(4, false, false), c(2)),
    ];
    for (name, x, y) in wreaths {
        b.add(
            name,
            "wreath",
            wreath_product(&x, &y),
            Expected {
                primitive: Some(false),
                ..Expected::default()
            },
        );
    }

    // conjugates by seeded random permutations keep every expectation
    let mut rng = ChaCha8Rng::seed_from_u64(0x0771_57ed);
    let picks = [
        "C8", "D6", "Sym6", "Alt7", "7:3", "PGL(2,5)", "PGL(3,2)", "PGL(2,8)", "Sym3 wr Sym2",
        "C2 wr C4", "Sym5 wr C2", "D5 wr C2", "Sym4 wr Sym2", "AGL(1,9)",
    ];
    for name in picks {
        let e = b.entries.iter().find(|e| e.name == name).unwrap().clone();
        let n = e.group.degree();
        let mut img: Vec<usize> = (0..n).collect();
        img.shuffle(&mut rng);
        let t = Perm::from_images(&img).unwrap();
        b.entries.push(CorpusEntry {
            name: format!("{name} twisted"),
            family: "twisted",
            group: e.group.conjugated(&t),
            ..e
        });
    }
}

fn primitive_cases(b: &mut Builder) {
    b.add("AGL(1,5)", "affine", affine_subgroup(5, 4), primitive_only());
    b.add("AGL(1,11)", "affine", affine_subgroup(11, 10), primitive_only());
    b.add("Sym6", "symmetric", Group::symmetric(6), known(Some(true), 1));
    b.add("Alt7", "alternating", Group::alternating(7), known(Some(true), 1));
    b.plain("PGL(2,5)", "projective", projective_line(5, false, false));
    b.plain("PGL(3,2)", "projective", pgl_3_2());
    b.plain("PGammaL(2,8)", "projective", projective_line(8, false, true));
    b.plain("PSL(2,11)", "sporadic", psl_2_11());
    b.plain("M11", "sporadic", m11());
    b.add("Sym5 wr C2", "wreath", sym5_wr_c2(), Expected::default());
    b.entries.push(CorpusEntry {
        name: "M23".into(),
        family: "sporadic",
        group: m23(),
        expected: Expected {
            transitive: true,
            primitive: Some(true),
            ..Expected::default()
        },
        enumerable: false,
    });
}

fn degree_11_12(b: &mut Builder) {
    b.add("C11", "cyclic", Group::cyclic(11), known(Some(true), 1));
    b.add("C12", "cyclic", Group::cyclic(12), known(Some(false), 1));
    b.add("D11", "dihedral", dihedral(11), known(Some(true), 1));
    b.add("D12", "dihedral", dihedral(12), known(Some(false), 1));
    b.add("AGL(1,11)", "affine", affine_subgroup(11, 10), primitive_only());
    b.add("11:5", "affine", affine_subgroup(11, 5), primitive_only());
    b.plain("PSL(2,11)", "sporadic", psl_2_11());
    b.plain("M11", "sporadic", m11());
    b.plain("PGL(2,11)", "projective", projective_line(11, false, false));
    b.plain("PSL(2,11) on 12", "projective", projective_line(11, true, false));
    let (s, c) = (Group::symmetric, Group::cyclic);
    for (name, x, y) in [
        ("C3 wr C4", c(3), c(4)),
        ("C4 wr C3", c(4), c(3)),
        ("Sym3 wr Sym4", s(3), s(4)),
        ("Sym4 wr Sym3", s(4), s(3)),
        ("C6 wr C2", c(6), c(2)),
        ("Alt6 wr C2", Group::alternating(6), c(2)),
        ("PGL(2,5) wr C2", projective_line(5, false, false), c(2)),
    ] {
        b.plain(name, "wreath", wreath_product(&x, &y));
    }
}

pub fn generate_corpus(profile: &str) -> Result<Corpus> {
    let mut b = Builder { entries: Vec::new() };
    match profile {
        "tiny" => tiny(&mut b),
        "paper-cases" => primitive_cases(&mut b),
        "full" => {
            tiny(&mut b);
            degree_11_12(&mut b);
        }
        _ => {
            return Err(Error::Argument(format!(
                "unknown corpus profile {profile:?}; expected one of {PROFILES:?}"
            )))
        }
    }
    Ok(Corpus {
        profile: profile.to_string(),
        entries: b.entries,
    })
}
