use super::{ConvexSet, OperatorHandle, SolutionInfo};
use crate::error::{Error, Result};
use crate::point::Point;

/// Nonexpansive self-maps of R^d used by the residual operator I - T.
#[derive(Debug, Clone)]
pub enum NonexpansiveMap {
    Projection(ConvexSet),
    ResolventOf { op: Box<OperatorHandle>, lambda: f64 },
    /// Plane rotation by `angle` (d = 2).
    Rotation { angle: f64 },
    Composition(Vec<NonexpansiveMap>),
}

impl NonexpansiveMap {
    pub fn validate(&self) -> Result<()> {
        match self {
            NonexpansiveMap::Projection(set) => set.validate(),
            NonexpansiveMap::ResolventOf { lambda, .. } => {
                if *lambda <= 0.0 {
                    return Err(Error::MalformedSpec("resolvent map needs lambda > 0".into()));
                }
                Ok(())
            }
            NonexpansiveMap::Rotation { angle } => {
                if !angle.is_finite() {
                    return Err(Error::MalformedSpec("rotation angle must be finite".into()));
                }
                Ok(())
            }
            NonexpansiveMap::Composition(maps) => {
                if maps.is_empty() {
                    return Err(Error::MalformedSpec("empty composition".into()));
                }
                let d = maps[0].dim();
                for m in maps {
                    m.validate()?;
                    if m.dim() != d {
                        return Err(Error::MalformedSpec("composition dimension mismatch".into()));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NonexpansiveMap::Projection(set) => set.dim(),
            NonexpansiveMap::ResolventOf { op, .. } => op.dim(),
            NonexpansiveMap::Rotation { .. } => 2,
            NonexpansiveMap::Composition(maps) => maps[0].dim(),
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            NonexpansiveMap::Projection(set) => Ok(set.project(x)),
            NonexpansiveMap::ResolventOf { op, lambda } => op.resolvent(*lambda, x),
            NonexpansiveMap::Rotation { angle } => {
                let (s, c) = angle.sin_cos();
                let v = x.coords();
                Ok(Point::new(vec![c * v[0] - s * v[1], s * v[0] + c * v[1]]).expect("finite"))
            }
            NonexpansiveMap::Composition(maps) => {
                let mut y = x.clone();
                for m in maps {
                    y = m.apply(&y)?;
                }
                Ok(y)
            }
        }
    }

    /// T(-x) = -T(x) for all x.
    pub fn odd(&self) -> bool {
        match self {
            NonexpansiveMap::Projection(set) => set.symmetric(),
            NonexpansiveMap::ResolventOf { op, .. } => op.flags().odd,
            NonexpansiveMap::Rotation { .. } => true,
            NonexpansiveMap::Composition(maps) => maps.iter().all(|m| m.odd()),
        }
    }

    /// Fixed-point set where it has a closed form.
    pub fn fixed_points(&self) -> SolutionInfo {
        match self {
            NonexpansiveMap::Projection(set) => SolutionInfo::Known(set.clone()),
            NonexpansiveMap::ResolventOf { op, .. } => op.solutions().clone(),
            NonexpansiveMap::Rotation { angle } => {
                let turns = angle / std::f64::consts::TAU;
                if (turns - turns.round()).abs() < 1e-12 {
                    // identity: every point is fixed
                    SolutionInfo::Known(ConvexSet::AffineSubspace {
                        anchor: Point::zeros(2),
                        basis: vec![
                            Point::new(vec![1.0, 0.0]).expect("finite"),
                            Point::new(vec![0.0, 1.0]).expect("finite"),
                        ],
                    })
                } else {
                    SolutionInfo::Known(ConvexSet::Singleton { p: Point::zeros(2) })
                }
            }
            NonexpansiveMap::Composition(_) => SolutionInfo::Unknown,
        }
    }

    /// Short stable description used in operator ids.
    pub fn describe(&self, out: &mut String) {
        use std::fmt::Write;
        match self {
            NonexpansiveMap::Projection(set) => {
                let _ = write!(out, "proj({set:?})");
            }
            NonexpansiveMap::ResolventOf { op, lambda } => {
                let _ = write!(out, "resolvent({},{lambda})", op.id());
            }
            NonexpansiveMap::Rotation { angle } => {
                let _ = write!(out, "rot({angle})");
            }
            NonexpansiveMap::Composition(maps) => {
                let _ = write!(out, "comp[");
                for m in maps {
                    m.describe(out);
                    let _ = write!(out, ";");
                }
                let _ = write!(out, "]");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rotation_is_isometry() {
        let t = NonexpansiveMap::Rotation { angle: std::f64::consts::FRAC_PI_2 };
        let y = t.apply(&pt(&[1.0, 0.0])).unwrap();
        assert!(y.dist(&pt(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn composition_nonexpansive_on_samples() {
        let t = NonexpansiveMap::Composition(vec![
            NonexpansiveMap::Projection(ConvexSet::Box {
                lo: pt(&[-0.5, -0.5]),
                hi: pt(&[0.5, 0.5]),
            }),
            NonexpansiveMap::Rotation { angle: 0.3 },
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let x = pt(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
            let y = pt(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
            let tx = t.apply(&x).unwrap();
            let ty = t.apply(&y).unwrap();
            assert!(tx.dist(&ty) <= x.dist(&y) + 1e-12);
        }
    }
}
