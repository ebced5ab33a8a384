//! Straight-line drawings with exact rational coordinates and the signed
//! crossing functional `kr`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::forms::Form2;
use crate::graph::Graph;
use intlattice::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    fn sub(&self, o: &Point) -> (BigRational, BigRational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let p = |s: &str| BigRational::from_str(s.trim()).map_err(serde::de::Error::custom);
        Ok(Point {
            x: p(&x)?,
            y: p(&y)?,
        })
    }
}

fn cross(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// Orientation of the triangle `a, b, c`: positive when counterclockwise.
fn orient(a: &Point, b: &Point, c: &Point) -> BigRational {
    cross(&b.sub(a), &c.sub(a))
}

fn in_box(p: &Point, a: &Point, b: &Point) -> bool {
    let within = |v: &BigRational, s: &BigRational, t: &BigRational| {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        lo <= v && v <= hi
    };
    within(&p.x, &a.x, &b.x) && within(&p.y, &a.y, &b.y)
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p).is_zero() && in_box(p, a, b)
}

/// Vertex positions of a straight-line drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Drawing {
    pub positions: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DrawingError {
    #[error("drawing places {found} vertices, graph has {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("drawing is not generic: {0}")]
    NotGeneric(GenericityViolation),
    #[error("edges {0} and {1} share an end")]
    Adjacent(usize, usize),
    #[error("no generic drawing found after {0} attempts")]
    GaveUp(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GenericityViolation {
    CoincidentVertices(usize, usize),
    VertexOnEdge { vertex: usize, edge: usize },
    ParallelEdges(usize, usize),
    Concurrent([usize; 3]),
}

impl fmt::Display for GenericityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenericityViolation::CoincidentVertices(u, v) => {
                write!(f, "vertices {u} and {v} coincide")
            }
            GenericityViolation::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies on edge {edge}")
            }
            GenericityViolation::ParallelEdges(e, g) => {
                write!(f, "parallel edges {e} and {g} overlap")
            }
            GenericityViolation::Concurrent([a, b, c]) => {
                write!(f, "edges {a}, {b}, {c} pass through one point")
            }
        }
    }
}

impl Drawing {
    fn seg(&self, g: &Graph, e: usize) -> (&Point, &Point) {
        let (t, h) = g.edge(e);
        (&self.positions[t], &self.positions[h])
    }

    /// Proper crossing point of two nonadjacent edges, if their interiors cross.
    fn crossing_point(&self, g: &Graph, e: usize, f: usize) -> Option<Point> {
        let (p1, p2) = self.seg(g, e);
        let (q1, q2) = self.seg(g, f);
        let o1 = orient(p1, p2, q1).signum();
        let o2 = orient(p1, p2, q2).signum();
        let o3 = orient(q1, q2, p1).signum();
        let o4 = orient(q1, q2, p2).signum();
        let neg = |a: &BigRational, b: &BigRational| (a * b).is_negative();
        if !(neg(&o1, &o2) && neg(&o3, &o4)) {
            return None;
        }
        let r = p2.sub(p1);
        let s = q2.sub(q1);
        let t = cross(&q1.sub(p1), &s) / cross(&r, &s);
        Some(Point {
            x: &p1.x + &t * &r.0,
            y: &p1.y + &t * &r.1,
        })
    }
}

/// Exact genericity test; reports the first violation found.
pub fn check_generic(g: &Graph, dr: &Drawing) -> Result<(), GenericityViolation> {
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            if dr.positions[u] == dr.positions[v] {
                return Err(GenericityViolation::CoincidentVertices(u, v));
            }
        }
    }
    for e in 0..g.m() {
        let (a, b) = dr.seg(g, e);
        for w in 0..n {
            if !g.has_end(e, w) && on_segment(&dr.positions[w], a, b) {
                return Err(GenericityViolation::VertexOnEdge { vertex: w, edge: e });
            }
        }
        for f in e + 1..g.m() {
            let (t1, h1) = g.edge(e);
            let (t2, h2) = g.edge(f);
            if (t1 == t2 && h1 == h2) || (t1 == h2 && h1 == t2) {
                return Err(GenericityViolation::ParallelEdges(e, f));
            }
        }
    }
    for e in 0..g.m() {
        for f in e + 1..g.m() {
            if g.adjacent(e, f) {
                continue;
            }
            if let Some(p) = dr.crossing_point(g, e, f) {
                for h in 0..g.m() {
                    if h != e && h != f {
                        let (a, b) = dr.seg(g, h);
                        if on_segment(&p, a, b) {
                            return Err(GenericityViolation::Concurrent([e, f, h]));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn is_generic(g: &Graph, dr: &Drawing) -> bool {
    dr.positions.len() == g.n() && check_generic(g, dr).is_ok()
}

/// `kr(f, h)`: `+1` when `f` crosses `h` with `(dir f, dir h)` a positive
/// frame, `-1` for a negative frame, `0` when they do not cross.
pub fn signed_crossing(g: &Graph, dr: &Drawing, f: usize, h: usize) -> Result<i64, DrawingError> {
    if g.adjacent(f, h) {
        return Err(DrawingError::Adjacent(f, h));
    }
    if dr.crossing_point(g, f, h).is_none() {
        return Ok(0);
    }
    let (a, b) = dr.seg(g, f);
    let (c, d) = dr.seg(g, h);
    let s = cross(&b.sub(a), &d.sub(c));
    Ok(if s.is_positive() { 1 } else { -1 })
}

/// `kr(d) = Σ d(f, h) kr(f, h)` over a generic drawing.
pub fn kr_functional(g: &Graph, dr: &Drawing, d: &Form2) -> Result<Int, DrawingError> {
    if dr.positions.len() != g.n() {
        return Err(DrawingError::WrongSize {
            expected: g.n(),
            found: dr.positions.len(),
        });
    }
    check_generic(g, dr).map_err(DrawingError::NotGeneric)?;
    let mut total = Int::ZERO;
    for ((f, h), x) in d.iter() {
        let k = signed_crossing(g, dr, f, h)?;
        if k != 0 {
            total += &(x * &Int::from(k));
        }
    }
    Ok(total)
}

/// Grid size for random drawings.
const GRID: i64 = 1 << 24;

/// A generic drawing with integer positions drawn from a seeded generator.
/// The same seed always gives the same drawing.
pub fn random_generic_drawing(g: &Graph, seed: u64) -> Result<Drawing, DrawingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 64;
    for _ in 0..ATTEMPTS {
        let positions = (0..g.n())
            .map(|_| {
                let x = rng.gen_range(0..GRID);
                let y = rng.gen_range(0..GRID);
                Point::new(
                    BigRational::from_integer(BigInt::from(x)),
                    BigRational::from_integer(BigInt::from(y)),
                )
            })
            .collect();
        let dr = Drawing { positions };
        match check_generic(g, &dr) {
            Ok(()) => return Ok(dr),
            Err(GenericityViolation::ParallelEdges(..)) => {
                return Err(DrawingError::NotGeneric(check_generic(g, &dr).unwrap_err()))
            }
            Err(_) => continue,
        }
    }
    Err(DrawingError::GaveUp(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{circuit_pair_form, elementary_k5_form, two_cycle_lattice, SigmaMode};
    use crate::patterns::{enumerate_disjoint_cycle_pairs, Caps};

    fn draw(pts: &[(i64, i64)]) -> Drawing {
        Drawing {
            positions: pts.iter().map(|&(x, y)| Point::from_i64(x, y)).collect(),
        }
    }

    fn complete(n: usize) -> Graph {
        let mut e = vec![];
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n, &e)
    }

    #[test]
    fn genericity_cases() {
        let k4 = complete(4);
        assert!(is_generic(&k4, &draw(&[(0, 0), (4, 0), (4, 4), (0, 4)])));
        let tri = complete(3);
        assert!(matches!(
            check_generic(&tri, &draw(&[(0, 0), (1, 0), (2, 0)])),
            Err(GenericityViolation::VertexOnEdge { .. })
        ));
        assert!(matches!(
            check_generic(&tri, &draw(&[(0, 0), (0, 0), (2, 1)])),
            Err(GenericityViolation::CoincidentVertices(0, 1))
        ));
        // three diagonals of a hexagon through the centre
        let g = Graph::from_edges(6, &[(0, 3), (1, 4), (2, 5)]);
        let hex = draw(&[(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]);
        assert!(matches!(
            check_generic(&g, &hex),
            Err(GenericityViolation::Concurrent(_))
        ));
    }

    #[test]
    fn crossing_signs() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let dr = draw(&[(-1, 0), (1, 0), (0, -1), (0, 1)]);
        assert_eq!(signed_crossing(&g, &dr, 0, 1).unwrap(), 1);
        assert_eq!(signed_crossing(&g, &dr, 1, 0).unwrap(), -1);
        let rev = Graph::from_edges(4, &[(0, 1), (3, 2)]);
        assert_eq!(signed_crossing(&rev, &dr, 0, 1).unwrap(), -1);
        let apart = draw(&[(0, 0), (1, 0), (0, 5), (1, 5)]);
        assert_eq!(signed_crossing(&g, &apart, 0, 1).unwrap(), 0);
        let k3 = complete(3);
        assert!(signed_crossing(&k3, &draw(&[(0, 0), (1, 0), (0, 1)]), 0, 1).is_err());
    }

    #[test]
    fn kr_vanishes_on_two_cycles() {
        let g = complete(5);
        let k = elementary_k5_form(&g, [0, 1, 2, 3, 4]).unwrap();
        for seed in 0..10 {
            let dr = random_generic_drawing(&g, seed).unwrap();
            assert_eq!(kr_functional(&g, &dr, &k).unwrap(), Int::ZERO);
        }
        let k6 = complete(6);
        let l = two_cycle_lattice(&k6, SigmaMode::Plain);
        let pairs = enumerate_disjoint_cycle_pairs(&k6, &Caps::default()).unwrap();
        let x = circuit_pair_form(&k6, &pairs[0].0, &pairs[0].1).unwrap();
        assert!(l.contains(&x));
        for seed in 0..5 {
            let dr = random_generic_drawing(&k6, seed).unwrap();
            assert_eq!(kr_functional(&k6, &dr, &x).unwrap(), Int::ZERO);
        }
    }

    #[test]
    fn seeded_drawings_repeat() {
        let g = complete(5);
        assert_eq!(
            random_generic_drawing(&g, 7).unwrap(),
            random_generic_drawing(&g, 7).unwrap()
        );
        let dr = random_generic_drawing(&g, 7).unwrap();
        let text = serde_json::to_string(&dr).unwrap();
        assert_eq!(serde_json::from_str::<Drawing>(&text).unwrap(), dr);
    }
}
