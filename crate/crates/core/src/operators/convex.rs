use crate::error::{Error, Result};
use crate::point::Point;
use crate::util::gauss;
use rand::Rng;

/// Closed convex subsets of R^d with exact projections.
#[derive(Debug, Clone)]
pub enum ConvexSet {
    Ball { center: Point, radius: f64 },
    Box { lo: Point, hi: Point },
    /// Affine subspace anchor + span(basis); basis vectors are orthonormal.
    AffineSubspace { anchor: Point, basis: Vec<Point> },
    /// { x : <normal, x> <= offset }
    Halfspace { normal: Point, offset: f64 },
    Segment { a: Point, b: Point },
    Singleton { p: Point },
}

impl ConvexSet {
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::Ball { radius, .. } => {
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(Error::MalformedSpec("ball radius must be >= 0".into()));
                }
            }
            ConvexSet::Box { lo, hi } => {
                if lo.dim() != hi.dim() {
                    return Err(Error::MalformedSpec("box bounds dimension mismatch".into()));
                }
                if lo.coords().iter().zip(hi.coords()).any(|(l, h)| l > h) {
                    return Err(Error::MalformedSpec("box has lo > hi".into()));
                }
            }
            ConvexSet::AffineSubspace { anchor, basis } => {
                for (i, v) in basis.iter().enumerate() {
                    if v.dim() != anchor.dim() {
                        return Err(Error::MalformedSpec("basis vector dimension mismatch".into()));
                    }
                    for (j, w) in basis.iter().enumerate() {
                        let expected = if i == j { 1.0 } else { 0.0 };
                        if (v.dot(w) - expected).abs() > 1e-9 {
                            return Err(Error::MalformedSpec(
                                "affine subspace basis is not orthonormal".into(),
                            ));
                        }
                    }
                }
            }
            ConvexSet::Halfspace { normal, .. } => {
                if normal.norm() < 1e-12 {
                    return Err(Error::MalformedSpec("halfspace normal must be nonzero".into()));
                }
            }
            ConvexSet::Segment { a, b } => {
                if a.dim() != b.dim() {
                    return Err(Error::MalformedSpec("segment endpoint dimension mismatch".into()));
                }
            }
            ConvexSet::Singleton { .. } => {}
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::Box { lo, .. } => lo.dim(),
            ConvexSet::AffineSubspace { anchor, .. } => anchor.dim(),
            ConvexSet::Halfspace { normal, .. } => normal.dim(),
            ConvexSet::Segment { a, .. } => a.dim(),
            ConvexSet::Singleton { p } => p.dim(),
        }
    }

    /// Orthogonal projection onto the set.
    pub fn project(&self, x: &Point) -> Point {
        match self {
            ConvexSet::Ball { center, radius } => {
                let d = x.sub(center);
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    center.axpy(*radius / n, &d)
                }
            }
            ConvexSet::Box { lo, hi } => Point::new(
                x.coords()
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .map(|(&c, (&l, &h))| c.clamp(l, h))
                    .collect(),
            )
            .expect("finite clamp"),
            ConvexSet::AffineSubspace { anchor, basis } => {
                let d = x.sub(anchor);
                let mut p = anchor.clone();
                for v in basis {
                    p = p.axpy(d.dot(v), v);
                }
                p
            }
            ConvexSet::Halfspace { normal, offset } => {
                let excess = x.dot(normal) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x.axpy(-excess / normal.norm_sq(), normal)
                }
            }
            ConvexSet::Segment { a, b } => {
                let ab = b.sub(a);
                let len_sq = ab.norm_sq();
                if len_sq == 0.0 {
                    return a.clone();
                }
                let t = (x.sub(a).dot(&ab) / len_sq).clamp(0.0, 1.0);
                a.lerp(b, t)
            }
            ConvexSet::Singleton { p } => p.clone(),
        }
    }

    pub fn distance(&self, x: &Point) -> f64 {
        x.dist(&self.project(x))
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// True when x lies in the interior with margin > tol (used to decide
    /// where the normal cone is single-valued).
    pub fn strictly_inside(&self, x: &Point, tol: f64) -> bool {
        match self {
            ConvexSet::Ball { center, radius } => x.dist(center) < radius - tol,
            ConvexSet::Box { lo, hi } => x
                .coords()
                .iter()
                .zip(lo.coords().iter().zip(hi.coords()))
                .all(|(&c, (&l, &h))| c > l + tol && c < h - tol),
            ConvexSet::Halfspace { normal, offset } => {
                x.dot(normal) < offset - tol * normal.norm()
            }
            ConvexSet::AffineSubspace { anchor, basis } => {
                // interior only when the subspace is the whole space
                basis.len() == anchor.dim() && self.contains(x, tol)
            }
            ConvexSet::Segment { .. } | ConvexSet::Singleton { .. } => false,
        }
    }

    pub fn has_interior(&self) -> bool {
        match self {
            ConvexSet::Ball { radius, .. } => *radius > 0.0,
            ConvexSet::Box { lo, hi } => lo.coords().iter().zip(hi.coords()).all(|(l, h)| h > l),
            ConvexSet::Halfspace { .. } => true,
            ConvexSet::AffineSubspace { anchor, basis } => basis.len() == anchor.dim(),
            ConvexSet::Segment { .. } | ConvexSet::Singleton { .. } => false,
        }
    }

    /// Symmetric about the origin (C = -C); decides oddness of normal cones.
    pub fn symmetric(&self) -> bool {
        let near_zero = |p: &Point| p.norm() <= 1e-12;
        match self {
            ConvexSet::Ball { center, .. } => near_zero(center),
            ConvexSet::Box { lo, hi } => near_zero(&lo.add(hi)),
            ConvexSet::AffineSubspace { .. } => self.contains(&Point::zeros(self.dim()), 1e-12),
            ConvexSet::Halfspace { .. } => false,
            ConvexSet::Segment { a, b } => near_zero(&a.add(b)),
            ConvexSet::Singleton { p } => near_zero(p),
        }
    }

    /// Deterministic member sample driven by the caller's RNG.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        match self {
            ConvexSet::Ball { center, radius } => {
                let d = center.dim();
                let dir = Point::new((0..d).map(|_| gauss(rng)).collect()).expect("finite");
                let n = dir.norm();
                if n == 0.0 {
                    return center.clone();
                }
                let r = *radius * rng.random_range(0.0..1.0f64).powf(1.0 / d as f64);
                center.axpy(r / n, &dir)
            }
            ConvexSet::Box { lo, hi } => Point::new(
                lo.coords()
                    .iter()
                    .zip(hi.coords())
                    .map(|(&l, &h)| if l == h { l } else { rng.random_range(l..h) })
                    .collect(),
            )
            .expect("finite"),
            ConvexSet::AffineSubspace { anchor, basis } => {
                let mut p = anchor.clone();
                for v in basis {
                    p = p.axpy(gauss(rng), v);
                }
                p
            }
            ConvexSet::Halfspace { .. } => {
                let d = self.dim();
                let raw = Point::new((0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
                    .expect("finite");
                self.project(&raw)
            }
            ConvexSet::Segment { a, b } => a.lerp(b, rng.random_range(0.0..1.0)),
            ConvexSet::Singleton { p } => p.clone(),
        }
    }
}
