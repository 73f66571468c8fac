//! Smallest enclosing ball by Welzl's move-to-front algorithm, exact for the
//! small dimensions used here (d <= 64, support sets of size <= d+1 solved by
//! a dense least-squares system).

use crate::error::{Error, Result};
use crate::point::Point;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &Point, slack: f64) -> bool {
        p.dist(&self.center) <= self.radius * (1.0 + slack) + slack
    }
}

/// Ball with every support point on its boundary: the circumsphere of the
/// affinely independent support set, via the Gram system
///   (V^T V) a = 1/2 [ ||p_i - p_0||^2 ].
fn ball_of_support(support: &[&Point]) -> Ball {
    match support.len() {
        0 => Ball { center: Point::zeros(1), radius: -1.0 },
        1 => Ball { center: support[0].clone(), radius: 0.0 },
        _ => {
            let p0 = support[0];
            let k = support.len() - 1;
            let mut gram = DMatrix::zeros(k, k);
            let mut rhs = DVector::zeros(k);
            let diffs: Vec<Point> = support[1..].iter().map(|p| p.sub(p0)).collect();
            for i in 0..k {
                for j in 0..k {
                    gram[(i, j)] = diffs[i].dot(&diffs[j]);
                }
                rhs[i] = 0.5 * diffs[i].norm_sq();
            }
            let svd = gram.svd(true, true);
            let coef = svd.solve(&rhs, 1e-12).unwrap_or_else(|_| DVector::zeros(k));
            let mut center = p0.clone();
            for (i, d) in diffs.iter().enumerate() {
                center = center.axpy(coef[i], d);
            }
            let radius = support
                .iter()
                .map(|p| p.dist(&center))
                .fold(0.0, f64::max);
            Ball { center, radius }
        }
    }
}

fn welzl(points: &[Point], end: usize, support: &mut Vec<Point>, dim: usize) -> Ball {
    let mut ball = ball_of_support(&support.iter().collect::<Vec<_>>());
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        if ball.radius < 0.0 || !ball.contains(&points[i], 1e-12) {
            support.push(points[i].clone());
            ball = welzl(points, i, support, dim);
            support.pop();
        }
    }
    ball
}

/// The unique smallest ball containing all points.
pub fn min_enclosing_ball(points: &[Point]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = points[0].dim();
    // deterministic shuffle keeps the expected-linear behavior of the
    // randomized incremental construction without threading an RNG through
    // every caller
    let mut shuffled: Vec<Point> = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ba11);
    shuffled.shuffle(&mut rng);
    let mut support = Vec::with_capacity(dim + 2);
    let ball = welzl(&shuffled, shuffled.len(), &mut support, dim);
    // tighten the radius to exactly cover the input
    let radius = points.iter().map(|p| p.dist(&ball.center)).fold(0.0, f64::max);
    Ok(Ball { center: ball.center, radius })
}
