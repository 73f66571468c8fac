//! Catalog of maximal monotone operators on R^d.
//!
//! A handle bundles the operator's evaluation rules (resolvent, optional
//! forward map, minimal section), an exact description of its solution set
//! where one is known, and analytic property flags. Handles are immutable
//! and all operations are pure.

mod convex;
mod nonexpansive;
pub mod spec;

pub use convex::ConvexSet;
pub use nonexpansive::NonexpansiveMap;
pub use spec::{build_operator, MapSpec, OperatorSpec, SetSpec};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::util::fnv64;
use nalgebra::DMatrix;

/// Iterative resolvent controls (damped fixed-point solves).
pub const SOLVE_TOL: f64 = 1e-12;
pub const SOLVE_BUDGET: usize = 10_000;

/// Three-valued analytic flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Flags {
    pub forward_capable: bool,
    pub demipositive: Tri,
    pub strongly_monotone_modulus: f64,
    pub odd: bool,
    pub interior_solutions: bool,
    pub nr_condition: Tri,
}

/// Exact description of S = A^{-1}0 when available.
#[derive(Debug, Clone)]
pub enum SolutionInfo {
    Known(ConvexSet),
    KnownEmpty,
    Unknown,
}

impl SolutionInfo {
    pub fn known(&self) -> Option<&ConvexSet> {
        match self {
            SolutionInfo::Known(set) => Some(set),
            _ => None,
        }
    }
}

/// Objective value of the potential f when A = ∂f. Indicator objectives
/// report +∞ with an explicit marker rather than a float sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveValue {
    Finite(f64),
    PlusInfinity,
}

impl ObjectiveValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            ObjectiveValue::Finite(v) => Some(v),
            ObjectiveValue::PlusInfinity => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Kind {
    /// A x = Q x - b with Q symmetric PSD (the gradient of a convex quadratic).
    Quadratic { q: DMatrix<f64>, b: Point },
    /// Subdifferential of the indicator of a closed convex set.
    NormalCone { set: ConvexSet },
    /// A x = M x with M skew-symmetric.
    Skew { m: DMatrix<f64> },
    /// A = I - T for a nonexpansive T.
    Residual { map: NonexpansiveMap },
    /// Gradient of half the squared distance to a closed convex set.
    DistSquared { set: ConvexSet },
    /// A + alpha I.
    Shifted { base: Box<OperatorHandle>, alpha: f64 },
    /// The Yosida regularization A_mu of a base operator.
    Yosida { base: Box<OperatorHandle>, mu: f64 },
    /// Subdifferential of the l1 norm.
    SoftAbs,
}

#[derive(Debug, Clone)]
pub struct OperatorHandle {
    kind: Kind,
    dim: usize,
    flags: Flags,
    solutions: SolutionInfo,
    id: String,
}

impl OperatorHandle {
    pub(crate) fn assemble(kind: Kind, dim: usize, flags: Flags, solutions: SolutionInfo) -> Self {
        let mut descr = String::new();
        describe_kind(&kind, &mut descr);
        let id = format!("{}#{:08x}(d={dim})", kind_name(&kind), fnv64(descr.as_bytes()));
        OperatorHandle { kind, dim, flags, solutions, id }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    pub fn solutions(&self) -> &SolutionInfo {
        &self.solutions
    }

    /// Stable short identifier (kind + parameter hash); used for trajectory
    /// provenance and mismatch checks.
    pub fn id(&self) -> &str {
        &self.id
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::MalformedSpec(format!(
                "point dimension {} does not match operator dimension {}",
                p.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// J_lambda(y) = (I + lambda A)^{-1} y.
    pub fn resolvent(&self, lambda: f64, y: &Point) -> Result<Point> {
        self.resolvent_map(lambda)?.apply(y)
    }

    /// Prefactorized resolvent for repeated application at fixed lambda.
    pub fn resolvent_map(&self, lambda: f64) -> Result<Resolvent<'_>> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::MalformedSpec(format!("resolvent needs lambda > 0, got {lambda}")));
        }
        let plan = match &self.kind {
            Kind::Quadratic { q, b } => {
                let n = self.dim;
                let mat = DMatrix::identity(n, n) + q.scale(lambda);
                Plan::Linear {
                    lu: mat.lu(),
                    shift: Some(b.scale(lambda)),
                }
            }
            Kind::NormalCone { set } => Plan::Projection { set },
            Kind::Skew { m } => {
                let n = self.dim;
                let mat = DMatrix::identity(n, n) + m.scale(lambda);
                Plan::Linear { lu: mat.lu(), shift: None }
            }
            Kind::Residual { map } => Plan::Residual { applier: MapApplier::build(map)?, lambda },
            Kind::DistSquared { set } => Plan::DistSq { set, t: lambda / (1.0 + lambda) },
            Kind::Shifted { base, alpha } => {
                let scale = 1.0 / (1.0 + lambda * alpha);
                Plan::PreScaled {
                    inner: Box::new(base.resolvent_map(lambda * scale)?),
                    pre: scale,
                }
            }
            Kind::Yosida { base, mu } => {
                // Resolvent identity: J^{A_mu}_lambda(y) = y - w (y - J^A_{lambda+mu}(y))
                // with w = lambda / (lambda + mu).
                Plan::YosidaShrink {
                    inner: Box::new(base.resolvent_map(lambda + mu)?),
                    w: lambda / (lambda + mu),
                }
            }
            Kind::SoftAbs => Plan::SoftThreshold { t: lambda },
        };
        Ok(Resolvent { dim: self.dim, plan })
    }

    /// A_lambda(x) = (x - J_lambda x) / lambda.
    pub fn yosida_eval(&self, lambda: f64, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        let j = self.resolvent(lambda, x)?;
        Ok(x.sub(&j).scale(1.0 / lambda))
    }

    /// The unique element of Ax where A is single-valued at x.
    pub fn forward_eval(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        match &self.kind {
            Kind::Quadratic { q, b } => {
                Ok(Point::from_dvector(&(q * x.as_dvector())).sub(b))
            }
            Kind::Skew { m } => Ok(Point::from_dvector(&(m * x.as_dvector()))),
            Kind::Residual { map } => Ok(x.sub(&map.apply(x)?)),
            Kind::DistSquared { set } => Ok(x.sub(&set.project(x))),
            Kind::Yosida { base, mu } => base.yosida_eval(*mu, x),
            Kind::Shifted { base, alpha } => Ok(base.forward_eval(x)?.axpy(*alpha, x)),
            Kind::NormalCone { set } => {
                if set.strictly_inside(x, 1e-12) {
                    Ok(Point::zeros(self.dim))
                } else {
                    Err(Error::NotForwardCapable(
                        "normal cone is multivalued on the boundary of the set".into(),
                    ))
                }
            }
            Kind::SoftAbs => {
                if x.coords().iter().any(|&c| c == 0.0) {
                    Err(Error::NotForwardCapable(
                        "l1 subdifferential is multivalued at zero coordinates".into(),
                    ))
                } else {
                    Ok(Point::new(x.coords().iter().map(|c| c.signum()).collect())
                        .expect("finite"))
                }
            }
        }
    }

    /// ||A^0 x||, the norm of the least-norm element of Ax.
    pub fn minimal_section_norm(&self, x: &Point) -> Result<f64> {
        self.check_dim(x)?;
        match &self.kind {
            Kind::Quadratic { .. }
            | Kind::Skew { .. }
            | Kind::Residual { .. }
            | Kind::DistSquared { .. }
            | Kind::Yosida { .. } => Ok(self.forward_eval(x)?.norm()),
            Kind::SoftAbs => {
                let k = x.coords().iter().filter(|&&c| c != 0.0).count();
                Ok((k as f64).sqrt())
            }
            Kind::NormalCone { set } => {
                if set.contains(x, 1e-9) {
                    Ok(0.0)
                } else {
                    Err(Error::MalformedSpec(
                        "point is outside the domain of the normal cone".into(),
                    ))
                }
            }
            Kind::Shifted { base, alpha } => {
                if base.flags.forward_capable {
                    Ok(base.forward_eval(x)?.axpy(*alpha, x).norm())
                } else {
                    // ||A_lambda x|| increases to ||A^0 x|| as lambda decreases;
                    // halve lambda until successive values stabilize.
                    let mut lambda = 1.0;
                    let mut prev = self.yosida_eval(lambda, x)?.norm();
                    for _ in 0..40 {
                        lambda *= 0.5;
                        let cur = self.yosida_eval(lambda, x)?.norm();
                        if (cur - prev).abs() < 1e-8 {
                            return Ok(cur);
                        }
                        prev = cur;
                    }
                    Err(Error::NonConvergedLimit)
                }
            }
        }
    }

    /// Exact distance from x to the solution set S = A^{-1}0.
    pub fn distance_to_solutions(&self, x: &Point) -> Result<f64> {
        self.check_dim(x)?;
        match &self.solutions {
            SolutionInfo::Known(set) => Ok(set.distance(x)),
            _ => Err(Error::UnknownSolutionSet),
        }
    }

    /// Projection of x onto the solution set.
    pub fn project_solutions(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        match &self.solutions {
            SolutionInfo::Known(set) => Ok(set.project(x)),
            _ => Err(Error::UnknownSolutionSet),
        }
    }

    /// f(x) for subdifferential kinds (A = ∂f).
    pub fn objective_value(&self, x: &Point) -> Result<ObjectiveValue> {
        self.check_dim(x)?;
        match &self.kind {
            Kind::Quadratic { q, b } => {
                let v = x.as_dvector();
                Ok(ObjectiveValue::Finite(0.5 * (q * &v).dot(&v) - b.dot(x)))
            }
            Kind::DistSquared { set } => {
                let d = set.distance(x);
                Ok(ObjectiveValue::Finite(0.5 * d * d))
            }
            Kind::SoftAbs => Ok(ObjectiveValue::Finite(
                x.coords().iter().map(|c| c.abs()).sum(),
            )),
            Kind::NormalCone { set } => {
                if set.contains(x, 1e-9) {
                    Ok(ObjectiveValue::Finite(0.0))
                } else {
                    Ok(ObjectiveValue::PlusInfinity)
                }
            }
            Kind::Shifted { base, alpha } => match base.objective_value(x)? {
                ObjectiveValue::Finite(f) => {
                    Ok(ObjectiveValue::Finite(f + 0.5 * alpha * x.norm_sq()))
                }
                ObjectiveValue::PlusInfinity => Ok(ObjectiveValue::PlusInfinity),
            },
            Kind::Yosida { base, mu } => Ok(ObjectiveValue::Finite(base.moreau_value(*mu, x)?)),
            Kind::Skew { .. } | Kind::Residual { .. } => Err(Error::NoObjective(
                "operator is not a subdifferential".into(),
            )),
        }
    }

    /// Moreau-Yosida value f(J_lambda y) + ||J_lambda y - y||^2 / (2 lambda).
    pub fn moreau_value(&self, lambda: f64, y: &Point) -> Result<f64> {
        let j = self.resolvent(lambda, y)?;
        let f = match self.objective_value(&j)? {
            ObjectiveValue::Finite(f) => f,
            // J_lambda y always lands in dom f
            ObjectiveValue::PlusInfinity => {
                return Err(Error::NoObjective("resolvent point escaped dom f".into()))
            }
        };
        Ok(f + j.sub(y).norm_sq() / (2.0 * lambda))
    }

    /// A domain point for property sampling; honors D(A) for normal cones.
    pub fn sample_domain<R: rand::Rng>(&self, rng: &mut R, scale: f64) -> Point {
        match &self.kind {
            Kind::NormalCone { set } => set.sample(rng),
            Kind::Shifted { base, .. } => base.sample_domain(rng, scale),
            _ => Point::new(
                (0..self.dim)
                    .map(|_| rng.random_range(-scale..scale))
                    .collect(),
            )
            .expect("finite"),
        }
    }
}

fn kind_name(kind: &Kind) -> &'static str {
    match kind {
        Kind::Quadratic { .. } => "quadratic",
        Kind::NormalCone { .. } => "normal_cone",
        Kind::Skew { .. } => "skew",
        Kind::Residual { .. } => "residual",
        Kind::DistSquared { .. } => "dist_squared",
        Kind::Shifted { .. } => "shifted",
        Kind::Yosida { .. } => "yosida",
        Kind::SoftAbs => "soft_abs",
    }
}

fn describe_kind(kind: &Kind, out: &mut String) {
    use std::fmt::Write;
    match kind {
        Kind::Quadratic { q, b } => {
            let _ = write!(out, "quadratic{:?}{:?}", q.as_slice(), b.coords());
        }
        Kind::NormalCone { set } => {
            let _ = write!(out, "ncone{set:?}");
        }
        Kind::Skew { m } => {
            let _ = write!(out, "skew{:?}", m.as_slice());
        }
        Kind::Residual { map } => {
            let _ = write!(out, "residual:");
            map.describe(out);
        }
        Kind::DistSquared { set } => {
            let _ = write!(out, "dsq{set:?}");
        }
        Kind::Shifted { base, alpha } => {
            let _ = write!(out, "shift({},{alpha})", base.id());
        }
        Kind::Yosida { base, mu } => {
            let _ = write!(out, "yosida({},{mu})", base.id());
        }
        Kind::SoftAbs => {
            let _ = write!(out, "softabs");
        }
    }
}

/// A resolvent at fixed lambda, with linear kinds prefactorized.
pub struct Resolvent<'a> {
    dim: usize,
    plan: Plan<'a>,
}

enum Plan<'a> {
    Linear {
        lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
        shift: Option<Point>,
    },
    Projection {
        set: &'a ConvexSet,
    },
    DistSq {
        set: &'a ConvexSet,
        t: f64,
    },
    SoftThreshold {
        t: f64,
    },
    Residual {
        applier: MapApplier<'a>,
        lambda: f64,
    },
    PreScaled {
        inner: Box<Resolvent<'a>>,
        pre: f64,
    },
    YosidaShrink {
        inner: Box<Resolvent<'a>>,
        w: f64,
    },
}

/// A nonexpansive map with inner resolvents prefactorized, for hot loops.
enum MapApplier<'a> {
    Projection(&'a ConvexSet),
    Resolvent(Box<Resolvent<'a>>),
    Rotation { sin: f64, cos: f64 },
    Composition(Vec<MapApplier<'a>>),
}

impl<'a> MapApplier<'a> {
    fn build(map: &'a NonexpansiveMap) -> Result<Self> {
        Ok(match map {
            NonexpansiveMap::Projection(set) => MapApplier::Projection(set),
            NonexpansiveMap::ResolventOf { op, lambda } => {
                MapApplier::Resolvent(Box::new(op.resolvent_map(*lambda)?))
            }
            NonexpansiveMap::Rotation { angle } => {
                let (sin, cos) = angle.sin_cos();
                MapApplier::Rotation { sin, cos }
            }
            NonexpansiveMap::Composition(maps) => MapApplier::Composition(
                maps.iter().map(MapApplier::build).collect::<Result<_>>()?,
            ),
        })
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            MapApplier::Projection(set) => Ok(set.project(x)),
            MapApplier::Resolvent(res) => res.apply(x),
            MapApplier::Rotation { sin, cos } => {
                let v = x.coords();
                Ok(Point::new(vec![cos * v[0] - sin * v[1], sin * v[0] + cos * v[1]])
                    .expect("finite"))
            }
            MapApplier::Composition(parts) => {
                let mut y = x.clone();
                for p in parts {
                    y = p.apply(&y)?;
                }
                Ok(y)
            }
        }
    }
}

impl Resolvent<'_> {
    pub fn apply(&self, y: &Point) -> Result<Point> {
        if y.dim() != self.dim {
            return Err(Error::MalformedSpec(format!(
                "point dimension {} does not match operator dimension {}",
                y.dim(),
                self.dim
            )));
        }
        match &self.plan {
            Plan::Linear { lu, shift } => {
                let rhs = match shift {
                    Some(s) => y.add(s).as_dvector(),
                    None => y.as_dvector(),
                };
                let x = lu.solve(&rhs).ok_or_else(|| {
                    Error::MalformedSpec("singular resolvent system".into())
                })?;
                Ok(Point::from_dvector(&x))
            }
            Plan::Projection { set } => Ok(set.project(y)),
            Plan::DistSq { set, t } => {
                let p = set.project(y);
                Ok(y.axpy(*t, &p.sub(y)))
            }
            Plan::SoftThreshold { t } => Ok(Point::new(
                y.coords()
                    .iter()
                    .map(|&c| c.signum() * (c.abs() - t).max(0.0))
                    .collect(),
            )
            .expect("finite")),
            Plan::Residual { applier, lambda } => {
                // Solve x + lambda (x - Tx) = y by the damped fixed point
                // x <- (y + lambda Tx) / (1 + lambda), a contraction with
                // factor lambda / (1 + lambda). The a-posteriori error of the
                // iterate is bounded by lambda * ||step||.
                let lam = *lambda;
                let tol = SOLVE_TOL * (1.0 + y.norm());
                let mut x = y.clone();
                let mut residual = f64::INFINITY;
                for _ in 0..SOLVE_BUDGET {
                    let tx = applier.apply(&x)?;
                    let next = y.axpy(lam, &tx).scale(1.0 / (1.0 + lam));
                    residual = lam * next.dist(&x);
                    x = next;
                    if residual <= tol {
                        return Ok(x);
                    }
                }
                Err(Error::NonConvergedSolve { tol, budget: SOLVE_BUDGET, residual })
            }
            Plan::PreScaled { inner, pre } => inner.apply(&y.scale(*pre)),
            Plan::YosidaShrink { inner, w } => {
                let j = inner.apply(y)?;
                Ok(y.axpy(*w, &j.sub(y)))
            }
        }
    }
}
