//! Built-in test polytopes and a generator of random Delzant polytopes.

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::polytope::{is_delzant, normalize_at_vertex, HalfSpace, Polytope};
use crate::rational::{int, Rat, RatVec};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub polytope: Polytope,
    /// Vertex at which the growth condition is built.
    pub vertex: RatVec,
}

impl CorpusEntry {
    fn at_origin(name: &str, polytope: Polytope) -> Self {
        let vertex = RatVec::zeros(polytope.dim());
        CorpusEntry { name: name.to_string(), polytope, vertex }
    }
}

/// The trapezoid `conv{(0,0), (3,0), (1,1), (0,1)}`, a Hirzebruch surface polytope.
pub fn trapezoid() -> Polytope {
    let pts: Vec<RatVec> = [[0, 0], [3, 0], [1, 1], [0, 1]].iter().map(|p| RatVec::from_ints(p)).collect();
    Polytope::hull(&pts).expect("full-dimensional")
}

pub fn builtin() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry::at_origin("simplex-1", Polytope::simplex(1, &int(1))),
        CorpusEntry::at_origin("simplex-2", Polytope::simplex(2, &int(1))),
        CorpusEntry::at_origin("simplex-3", Polytope::simplex(3, &int(1))),
        CorpusEntry::at_origin("interval-3", Polytope::cube(1, &int(3))),
        CorpusEntry::at_origin("square-2", Polytope::cube(2, &int(2))),
        CorpusEntry::at_origin("cube-2", Polytope::cube(3, &int(2))),
        CorpusEntry::at_origin("trapezoid", trapezoid()),
    ]
}

/// Cuts the corner at vertex `v` of a Delzant polytope: in normalized
/// coordinates this removes `{Σxᵢ < t}`, which keeps the polytope Delzant
/// when `t` is below every lattice edge length at `v`.
pub fn chop_corner(p: &Polytope, v: &RatVec, t: u32) -> Option<Polytope> {
    let (q, map) = normalize_at_vertex(p, v).ok()?;
    let n = p.dim();
    let shortest = q
        .vertices()
        .iter()
        .filter(|w| w.iter().filter(|c| !num_traits::Zero::is_zero(*c)).count() == 1)
        .map(RatVec::sum)
        .min()?;
    if Rat::from_integer(t.into()) >= shortest || t == 0 {
        return None;
    }
    let mut hs = q.facets().to_vec();
    hs.push(HalfSpace::new(RatVec(vec![-Rat::one(); n]), -int(i64::from(t))));
    let cut = Polytope::from_inequalities(n, &hs).ok()?;
    cut.map_vertices(n, |x| map.apply_inverse(x)).ok()
}

fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..2 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let source = m[j].clone();
        for (x, s) in m[i].iter_mut().zip(&source) {
            *x += c * s;
        }
    }
    m
}

/// A random Delzant lattice polytope: a box with sides in 2..=5, up to two
/// corner cuts, then a random lattice automorphism and translation.
pub fn random_delzant<R: Rng>(n: usize, rng: &mut R) -> Polytope {
    let sides: Vec<i64> = (0..n).map(|_| rng.gen_range(2..=5)).collect();
    let corners: Vec<RatVec> = (0..1usize << n)
        .map(|mask| RatVec((0..n).map(|i| if mask >> i & 1 == 1 { int(sides[i]) } else { int(0) }).collect()))
        .collect();
    let mut p = Polytope::conv(n, &corners).expect("box");
    for _ in 0..rng.gen_range(0..=2) {
        let v = p.vertices().choose(rng).expect("nonempty").clone();
        let t = rng.gen_range(1..=2);
        if let Some(q) = chop_corner(&p, &v, t) {
            p = q;
        }
    }
    let a = random_unimodular(n, rng);
    let shift = RatVec((0..n).map(|_| int(rng.gen_range(-2..=2))).collect());
    let am: Vec<Vec<Rat>> = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let p = p
        .map_vertices(n, |x| &RatVec(crate::linalg::mat_vec(&am, &x.0)) + &shift)
        .expect("same dimension");
    debug_assert!(is_delzant(&p).is_ok_and(|r| r.delzant));
    p
}

/// A random Delzant polytope normalized at a random vertex.
pub fn random_normalized<R: Rng>(n: usize, rng: &mut R) -> Polytope {
    let p = random_delzant(n, rng);
    let v = p.vertices().choose(rng).expect("nonempty").clone();
    normalize_at_vertex(&p, &v).expect("Delzant").0
}
