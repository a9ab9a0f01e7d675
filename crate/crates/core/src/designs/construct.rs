use std::collections::BTreeSet;

use super::{verify_design, Design, Point, MAX_POINTS};
use crate::combin::is_prime;
use crate::error::{Error, Result};

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    Ok(())
}

fn require_points(v: u64) -> Result<()> {
    if v > MAX_POINTS as u64 {
        return Err(Error::Resource(format!(
            "{v} points exceed the ceiling of {MAX_POINTS}"
        )));
    }
    Ok(())
}

/// The 2-(p²+p+1, p+1, 1) design of points and lines of PG(2, p).
///
/// Points are the normalized homogeneous triples (first non-zero coordinate
/// equal to 1) numbered in lexicographic order. Lines are listed by their
/// normalized normal vector in the same order.
pub fn projective_plane(p: u64) -> Result<Design> {
    require_prime(p)?;
    let v = p * p + p + 1;
    require_points(v)?;
    let mut triples = Vec::with_capacity(v as usize);
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                let first = [x, y, z].into_iter().find(|&c| c != 0);
                if first == Some(1) {
                    triples.push([x, y, z]);
                }
            }
        }
    }
    debug_assert_eq!(triples.len() as u64, v);
    let blocks = triples
        .iter()
        .map(|n| {
            triples
                .iter()
                .enumerate()
                .filter(|(_, pt)| (n[0] * pt[0] + n[1] * pt[1] + n[2] * pt[2]) % p == 0)
                .map(|(i, _)| i as Point + 1)
                .collect()
        })
        .collect();
    Design::new(2, v as usize, p as usize + 1, 1, blocks)
}

/// A Steiner triple system on `v ≡ 1, 3 (mod 6)` points.
///
/// `v = 6n + 3` uses Bose's construction over Z_{2n+1} × Z_3, point `(x, i)`
/// labelled `i·(2n+1) + x + 1`. `v = 6n + 1` uses Skolem's construction over
/// {∞} ∪ Z_{2n} × Z_3, point `(x, i)` labelled `i·2n + x + 1` and ∞ labelled `v`.
pub fn steiner_triple(v: u64) -> Result<Design> {
    if v < 7 || !(v % 6 == 1 || v % 6 == 3) {
        return Err(Error::Parameter(format!(
            "a Steiner triple system needs v >= 7 and v = 1 or 3 (mod 6), got {v}"
        )));
    }
    require_points(v)?;
    let blocks = if v % 6 == 3 { bose(v) } else { skolem(v) };
    Design::new(2, v as usize, 3, 1, blocks)
}

fn bose(v: u64) -> Vec<Vec<Point>> {
    let n = v / 3;
    let label = |x: u64, i: u64| (i * n + x + 1) as Point;
    // idempotent commutative quasigroup: x∘y = (x + y)/2 mod n
    let half = n.div_ceil(2);
    let op = |x: u64, y: u64| ((x + y) * half) % n;
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push(vec![label(x, 0), label(x, 1), label(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                blocks.push(vec![label(x, i), label(y, i), label(op(x, y), (i + 1) % 3)]);
            }
        }
    }
    blocks
}

fn skolem(v: u64) -> Vec<Vec<Point>> {
    let m = (v - 1) / 3; // order 2n of the half-idempotent quasigroup
    let n = m / 2;
    let inf = v as Point;
    let label = |x: u64, i: u64| (i * m + x + 1) as Point;
    let op = |x: u64, y: u64| {
        let s = (x + y) % m;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            n + (s - 1) / 2
        }
    };
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push(vec![label(x, 0), label(x, 1), label(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            blocks.push(vec![inf, label(x + n, i), label(x, (i + 1) % 3)]);
        }
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                blocks.push(vec![label(x, i), label(y, i), label(op(x, y), (i + 1) % 3)]);
            }
        }
    }
    blocks
}

/// Develops `base` cyclically: block `i` is `base + i (mod v)` for
/// `i = 0..v`, residues written as `1..=v`.
///
/// The result claims `t = 2, λ = 1`; it is a design only if
/// [`verify_design`] says so (use [`Design::with_params`] to claim others).
pub fn cyclic_design(base: &[Point], v: u64) -> Result<Design> {
    require_points(v)?;
    if base.is_empty() || base.len() as u64 > v {
        return Err(Error::Structural(format!(
            "base block of {} points for modulus {v}",
            base.len()
        )));
    }
    if let Some(&p) = base.iter().find(|&&p| p == 0 || u64::from(p) > v) {
        return Err(Error::Structural(format!("base point {p} outside 1..={v}")));
    }
    let developed: Vec<Vec<Point>> = (0..v)
        .map(|i| {
            base.iter()
                .map(|&x| ((u64::from(x) - 1 + i) % v + 1) as Point)
                .collect()
        })
        .collect();
    let t = base.len().min(2);
    Design::with_development(t, v as usize, base.len(), 1, developed)
}

/// Elements of GF(p²) as `a + b·ω`, encoded `a·p + b`.
struct Gf2 {
    p: u64,
    /// ω² = -c1·ω - c0
    c1: u64,
    c0: u64,
}

impl Gf2 {
    fn new(p: u64) -> Self {
        // lexicographically first monic x² + c1·x + c0 without roots
        let (c1, c0) = (0..p)
            .flat_map(|c1| (0..p).map(move |c0| (c1, c0)))
            .find(|&(c1, c0)| (0..p).all(|r| (r * r + c1 * r + c0) % p != 0))
            .expect("an irreducible quadratic exists over every prime field");
        Gf2 { p, c1, c0 }
    }

    fn split(&self, e: u64) -> (u64, u64) {
        (e / self.p, e % self.p)
    }

    fn join(&self, a: u64, b: u64) -> u64 {
        (a % self.p) * self.p + b % self.p
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        let ((a, b), (c, d)) = (self.split(x), self.split(y));
        self.join(a + self.p - c, b + self.p - d)
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        let ((a, b), (c, d)) = (self.split(x), self.split(y));
        let bd = b * d % p;
        let real = a * c + (p - self.c0) * bd;
        let omega = a * d + b * c + (p - self.c1) * bd;
        self.join(real % p, omega % p)
    }
}

/// Homogeneous coordinates `(x : y)` on the projective line; ∞ = (1 : 0).
type LinePoint = (u64, u64);

/// The 3-(p²+1, p+1, 1) inversive plane: the projective line over GF(p²)
/// with the circles (images of GF(p) ∪ {∞} under fractional-linear maps)
/// as blocks.
///
/// Field element `a + b·ω` is point `a·p + b + 1`, ∞ is point `p² + 1`.
/// Blocks are listed in lexicographic order.
pub fn inversive_plane(p: u64) -> Result<Design> {
    require_prime(p)?;
    let q = p * p;
    require_points(q + 1)?;
    let field = Gf2::new(p);
    let one = field.join(1, 0);
    let zero = 0;
    let points: Vec<LinePoint> = (0..q).map(|e| (e, one)).chain([(one, zero)]).collect();
    // [u, w] = u.x·w.y − u.y·w.x
    let bracket = |u: LinePoint, w: LinePoint| field.sub(field.mul(u.0, w.1), field.mul(u.1, w.0));
    let in_subfield = |num: u64, den: u64| {
        // num/den ∈ GF(p) iff num = r·den for some r in GF(p)
        (0..p).any(|r| field.mul(field.join(r, 0), den) == num)
    };

    let n = points.len();
    let mut circles = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (pa, pb, pc) = (points[a], points[b], points[c]);
                let ca = bracket(pc, pa);
                let cb = bracket(pc, pb);
                let circle: Vec<Point> = (0..n)
                    .filter(|&z| {
                        // cross ratio ([z,b][c,a]) / ([z,a][c,b]) lies in GF(p) ∪ {∞}
                        let num = field.mul(bracket(points[z], pb), ca);
                        let den = field.mul(bracket(points[z], pa), cb);
                        den == 0 || in_subfield(num, den)
                    })
                    .map(|z| z as Point + 1)
                    .collect();
                circles.insert(circle);
            }
        }
    }
    Design::new(3, n, p as usize + 1, 1, circles.into_iter().collect())
}

/// Doubles a Steiner triple system: 2-(v,3,1) to 2-(2v+1,3,1).
///
/// New points `v+1..=2v+1` carry a round-robin one-factorization of their
/// complete graph; old point `x` is joined to every edge of factor `x`. The
/// input blocks come first, unchanged.
pub fn embed_sts(design: &Design) -> Result<Design> {
    if design.t() != 2 || design.k() != 3 || design.lambda() != 1 {
        return Err(Error::Parameter(format!(
            "expected a 2-(v,3,1) design, got {}-({},{},{})",
            design.t(),
            design.v(),
            design.k(),
            design.lambda()
        )));
    }
    verify_design(design)?.into_result(design)?;
    let v = design.v() as u64;
    require_points(2 * v + 1)?;
    // new vertices: ∞ and Z_v (v odd), labelled v+1 (∞) and v+2+i
    let inf = (v + 1) as Point;
    let vertex = |i: u64| (v + 2 + i % v) as Point;
    let mut blocks = design.blocks().to_vec();
    for x in 0..v {
        let old = (x + 1) as Point;
        blocks.push(vec![old, inf, vertex(x)]);
        for j in 1..=(v - 1) / 2 {
            blocks.push(vec![old, vertex(x + v - j), vertex(x + j)]);
        }
    }
    Design::new(2, (2 * v + 1) as usize, 3, 1, blocks)
}
