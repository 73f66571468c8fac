//! Declarative operator descriptions and the catalog build rules.

use super::{ConvexSet, Flags, Kind, NonexpansiveMap, OperatorHandle, SolutionInfo, Tri};
use crate::error::{Error, Result};
use crate::point::Point;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 64;
/// Symmetry / definiteness verification tolerance at build time.
pub const MATRIX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Quadratic {
        q: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Vec<f64>>,
    },
    NormalCone {
        set: SetSpec,
    },
    Skew {
        m: Vec<Vec<f64>>,
    },
    Residual {
        map: MapSpec,
    },
    DistSquared {
        set: SetSpec,
    },
    Shifted {
        base: Box<OperatorSpec>,
        alpha: f64,
    },
    Yosida {
        base: Box<OperatorSpec>,
        lambda: f64,
    },
    SoftAbs {
        dim: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    AffineSubspace { anchor: Vec<f64>, basis: Vec<Vec<f64>> },
    Halfspace { normal: Vec<f64>, offset: f64 },
    Segment { a: Vec<f64>, b: Vec<f64> },
    Singleton { p: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Projection { set: SetSpec },
    ResolventOf { operator: Box<OperatorSpec>, lambda: f64 },
    Rotation { angle: f64 },
    Composition { maps: Vec<MapSpec> },
}

impl SetSpec {
    pub fn build(&self) -> Result<ConvexSet> {
        let set = match self {
            SetSpec::Ball { center, radius } => ConvexSet::Ball {
                center: Point::new(center.clone())?,
                radius: *radius,
            },
            SetSpec::Box { lo, hi } => ConvexSet::Box {
                lo: Point::new(lo.clone())?,
                hi: Point::new(hi.clone())?,
            },
            SetSpec::AffineSubspace { anchor, basis } => ConvexSet::AffineSubspace {
                anchor: Point::new(anchor.clone())?,
                basis: basis
                    .iter()
                    .map(|v| Point::new(v.clone()))
                    .collect::<Result<_>>()?,
            },
            SetSpec::Halfspace { normal, offset } => ConvexSet::Halfspace {
                normal: Point::new(normal.clone())?,
                offset: *offset,
            },
            SetSpec::Segment { a, b } => ConvexSet::Segment {
                a: Point::new(a.clone())?,
                b: Point::new(b.clone())?,
            },
            SetSpec::Singleton { p } => ConvexSet::Singleton { p: Point::new(p.clone())? },
        };
        set.validate()?;
        Ok(set)
    }
}

impl MapSpec {
    pub fn build(&self) -> Result<NonexpansiveMap> {
        let map = match self {
            MapSpec::Projection { set } => NonexpansiveMap::Projection(set.build()?),
            MapSpec::ResolventOf { operator, lambda } => NonexpansiveMap::ResolventOf {
                op: Box::new(build_operator(operator)?),
                lambda: *lambda,
            },
            MapSpec::Rotation { angle } => NonexpansiveMap::Rotation { angle: *angle },
            MapSpec::Composition { maps } => NonexpansiveMap::Composition(
                maps.iter().map(|m| m.build()).collect::<Result<_>>()?,
            ),
        };
        map.validate()?;
        Ok(map)
    }
}

fn parse_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::MalformedSpec("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::MalformedSpec("matrix must be square".into()));
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::MalformedSpec("matrix entry not finite".into()));
            }
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn check_symmetric_psd(q: &DMatrix<f64>) -> Result<()> {
    let n = q.nrows();
    for i in 0..n {
        for j in 0..n {
            if (q[(i, j)] - q[(j, i)]).abs() > MATRIX_TOL {
                return Err(Error::NotMonotone("Q is not symmetric".into()));
            }
        }
    }
    let sym = (q + q.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -MATRIX_TOL {
        return Err(Error::NotMonotone(format!(
            "Q has a negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

fn check_skew(m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..n {
            if (m[(i, j)] + m[(j, i)]).abs() > MATRIX_TOL {
                return Err(Error::NotMonotone("M is not skew-symmetric".into()));
            }
        }
    }
    Ok(())
}

/// Nullspace basis and a min-norm particular solution of Q x = b, via SVD.
fn affine_solutions(q: &DMatrix<f64>, b: &Point) -> Result<SolutionInfo> {
    let n = q.nrows();
    let svd = q.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = (smax * 1e-12).max(1e-12);
    let pinv = svd.clone().pseudo_inverse(cut).map_err(|e| {
        Error::MalformedSpec(format!("pseudo-inverse failed: {e}"))
    })?;
    let anchor = &pinv * b.as_dvector();
    let residual = (q * &anchor - b.as_dvector()).norm();
    if residual > 1e-9 * (1.0 + b.norm()) {
        return Ok(SolutionInfo::KnownEmpty);
    }
    let vt = svd.v_t.as_ref().expect("svd computed with V^T");
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            basis.push(Point::from_dvector(&vt.row(k).transpose()));
        }
    }
    // rows of V^T beyond the stored singular values also span the nullspace
    for k in svd.singular_values.len()..n {
        basis.push(Point::from_dvector(&vt.row(k).transpose()));
    }
    let anchor = Point::from_dvector(&anchor);
    if basis.is_empty() {
        Ok(SolutionInfo::Known(ConvexSet::Singleton { p: anchor }))
    } else {
        Ok(SolutionInfo::Known(ConvexSet::AffineSubspace { anchor, basis }))
    }
}

fn is_zero_matrix(m: &DMatrix<f64>) -> bool {
    m.iter().all(|&v| v.abs() <= MATRIX_TOL)
}

/// Build an immutable handle from a declarative spec, verifying the declared
/// matrix structure numerically and deriving capability flags and the
/// solution-set description from the catalog rules.
pub fn build_operator(spec: &OperatorSpec) -> Result<OperatorHandle> {
    let handle = match spec {
        OperatorSpec::Quadratic { q, b } => {
            let q = parse_matrix(q)?;
            let n = q.nrows();
            let b = match b {
                Some(b) => Point::new(b.clone())?,
                None => Point::zeros(n),
            };
            if b.dim() != n {
                return Err(Error::MalformedSpec("b dimension does not match Q".into()));
            }
            check_symmetric_psd(&q)?;
            let solutions = affine_solutions(&q, &b)?;
            let sym = (&q + q.transpose()).scale(0.5);
            let eigmin = sym
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min)
                .max(0.0);
            let nonempty = matches!(solutions, SolutionInfo::Known(_));
            let whole_space = is_zero_matrix(&q) && b.norm() <= MATRIX_TOL;
            let flags = Flags {
                forward_capable: true,
                demipositive: if nonempty { Tri::Yes } else { Tri::No },
                strongly_monotone_modulus: eigmin,
                odd: b.norm() <= MATRIX_TOL,
                interior_solutions: whole_space,
                nr_condition: if nonempty { Tri::Yes } else { Tri::Unknown },
            };
            OperatorHandle::assemble(Kind::Quadratic { q, b }, n, flags, solutions)
        }
        OperatorSpec::NormalCone { set } => {
            let set = set.build()?;
            let n = set.dim();
            let flags = Flags {
                forward_capable: false,
                demipositive: Tri::Yes,
                strongly_monotone_modulus: 0.0,
                odd: set.symmetric(),
                interior_solutions: set.has_interior(),
                nr_condition: Tri::Yes,
            };
            let solutions = SolutionInfo::Known(set.clone());
            OperatorHandle::assemble(Kind::NormalCone { set }, n, flags, solutions)
        }
        OperatorSpec::Skew { m } => {
            let m = parse_matrix(m)?;
            check_skew(&m)?;
            let n = m.nrows();
            let zero = is_zero_matrix(&m);
            let solutions = affine_solutions(&m, &Point::zeros(n))?;
            let flags = Flags {
                forward_capable: true,
                demipositive: if zero { Tri::Yes } else { Tri::No },
                strongly_monotone_modulus: 0.0,
                odd: true,
                interior_solutions: zero,
                nr_condition: if zero { Tri::Yes } else { Tri::No },
            };
            OperatorHandle::assemble(Kind::Skew { m }, n, flags, solutions)
        }
        OperatorSpec::Residual { map } => {
            let map = map.build()?;
            let n = map.dim();
            let solutions = map.fixed_points();
            let nonempty = matches!(solutions, SolutionInfo::Known(_));
            let flags = Flags {
                forward_capable: true,
                demipositive: if nonempty { Tri::Yes } else { Tri::Unknown },
                strongly_monotone_modulus: 0.0,
                odd: map.odd(),
                interior_solutions: match &solutions {
                    SolutionInfo::Known(s) => s.has_interior(),
                    _ => false,
                },
                nr_condition: if nonempty { Tri::Yes } else { Tri::Unknown },
            };
            OperatorHandle::assemble(Kind::Residual { map }, n, flags, solutions)
        }
        OperatorSpec::DistSquared { set } => {
            let set = set.build()?;
            let n = set.dim();
            let flags = Flags {
                forward_capable: true,
                demipositive: Tri::Yes,
                strongly_monotone_modulus: 0.0,
                odd: set.symmetric(),
                interior_solutions: set.has_interior(),
                nr_condition: Tri::Yes,
            };
            let solutions = SolutionInfo::Known(set.clone());
            OperatorHandle::assemble(Kind::DistSquared { set }, n, flags, solutions)
        }
        OperatorSpec::Shifted { base, alpha } => {
            if !alpha.is_finite() || *alpha < 0.0 {
                return Err(Error::MalformedSpec("shift alpha must be >= 0".into()));
            }
            let base = build_operator(base)?;
            let n = base.dim();
            if *alpha == 0.0 {
                return Ok(base);
            }
            let solutions = shifted_solutions(&base, *alpha)?;
            let flags = Flags {
                forward_capable: base.flags().forward_capable,
                demipositive: Tri::Yes, // strongly monotone
                strongly_monotone_modulus: base.flags().strongly_monotone_modulus + alpha,
                odd: base.flags().odd,
                interior_solutions: false,
                nr_condition: Tri::Yes, // strongly monotone
            };
            OperatorHandle::assemble(
                Kind::Shifted { base: Box::new(base), alpha: *alpha },
                n,
                flags,
                solutions,
            )
        }
        OperatorSpec::Yosida { base, lambda } => {
            if !(*lambda > 0.0) {
                return Err(Error::MalformedSpec("yosida lambda must be > 0".into()));
            }
            let base = build_operator(base)?;
            let n = base.dim();
            let alpha = base.flags().strongly_monotone_modulus;
            let solutions = base.solutions().clone();
            let flags = Flags {
                forward_capable: true,
                demipositive: Tri::Unknown,
                strongly_monotone_modulus: if alpha > 0.0 {
                    alpha / (1.0 + lambda * alpha)
                } else {
                    0.0
                },
                odd: base.flags().odd,
                interior_solutions: base.flags().interior_solutions,
                nr_condition: Tri::Unknown,
            };
            OperatorHandle::assemble(
                Kind::Yosida { base: Box::new(base), mu: *lambda },
                n,
                flags,
                solutions,
            )
        }
        OperatorSpec::SoftAbs { dim } => {
            if *dim == 0 {
                return Err(Error::MalformedSpec("dimension must be >= 1".into()));
            }
            let flags = Flags {
                forward_capable: false,
                demipositive: Tri::Yes,
                strongly_monotone_modulus: 0.0,
                odd: true,
                interior_solutions: false,
                nr_condition: Tri::Yes,
            };
            let solutions = SolutionInfo::Known(ConvexSet::Singleton { p: Point::zeros(*dim) });
            OperatorHandle::assemble(Kind::SoftAbs, *dim, flags, solutions)
        }
    };
    if handle.dim() > MAX_DIM {
        return Err(Error::MalformedSpec(format!(
            "dimension {} exceeds the supported maximum {MAX_DIM}",
            handle.dim()
        )));
    }
    Ok(handle)
}

/// Solutions of A + alpha I where they have a closed form.
fn shifted_solutions(base: &OperatorHandle, alpha: f64) -> Result<SolutionInfo> {
    let n = base.dim();
    Ok(match base.kind() {
        Kind::Quadratic { q, b } => {
            let mat = q + DMatrix::identity(n, n).scale(alpha);
            let lu = mat.lu();
            match lu.solve(&b.as_dvector()) {
                Some(x) => SolutionInfo::Known(ConvexSet::Singleton {
                    p: Point::from_dvector(&x),
                }),
                None => SolutionInfo::Unknown,
            }
        }
        Kind::Skew { .. } => SolutionInfo::Known(ConvexSet::Singleton { p: Point::zeros(n) }),
        // -alpha x in N_C(x) is the variational characterization of P_C(0)
        Kind::NormalCone { set } => SolutionInfo::Known(ConvexSet::Singleton {
            p: set.project(&Point::zeros(n)),
        }),
        Kind::SoftAbs => SolutionInfo::Known(ConvexSet::Singleton { p: Point::zeros(n) }),
        _ => SolutionInfo::Unknown,
    })
}
