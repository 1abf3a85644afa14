use num_rational::BigRational;
use num_traits::Zero;

use super::RatePoint;
use crate::error::{MaccError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    /// Strictly increasing memory.
    points: Vec<RatePoint>,
}

fn cross(o: &RatePoint, a: &RatePoint, b: &RatePoint) -> BigRational {
    (&a.memory - &o.memory) * (&b.rate - &o.rate) - (&a.rate - &o.rate) * (&b.memory - &o.memory)
}

/// Sorts by memory and keeps the lowest rate at each memory value.
fn normalise(points: &[RatePoint]) -> Vec<RatePoint> {
    let mut sorted: Vec<RatePoint> = points.to_vec();
    sorted.sort_by(|a, b| a.memory.cmp(&b.memory).then_with(|| a.rate.cmp(&b.rate)));
    sorted.dedup_by(|later, kept| later.memory == kept.memory);
    sorted
}

/// Lower convex hull of the points in the memory-rate plane, cut at the
/// first vertex with rate zero.
pub fn envelope(points: &[RatePoint]) -> Result<Curve> {
    if points.is_empty() {
        return Err(MaccError::arg("envelope of an empty point set"));
    }
    let mut hull: Vec<RatePoint> = Vec::new();
    for p in normalise(points) {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= BigRational::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    if let Some(first_zero) = hull.iter().position(|p| p.rate.is_zero()) {
        hull.truncate(first_zero + 1);
    }
    Ok(Curve { points: hull })
}

impl Curve {
    /// Piecewise-linear curve through the given points as they are (no
    /// hull), sorted by memory.
    pub fn polyline(points: &[RatePoint]) -> Result<Curve> {
        if points.is_empty() {
            return Err(MaccError::arg("polyline through no points"));
        }
        Ok(Curve {
            points: normalise(points),
        })
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    /// Linear interpolation; constant beyond either end.
    pub fn eval(&self, memory: &BigRational) -> BigRational {
        let first = &self.points[0];
        if memory <= &first.memory {
            return first.rate.clone();
        }
        for pair in self.points.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if memory <= &b.memory {
                let slope = (&b.rate - &a.rate) / (&b.memory - &a.memory);
                return &a.rate + slope * (memory - &a.memory);
            }
        }
        self.points[self.points.len() - 1].rate.clone()
    }

    /// Is `memory` the abscissa of one of the curve's vertices?
    pub fn vertex_at(&self, memory: &BigRational) -> Option<&RatePoint> {
        self.points.iter().find(|p| &p.memory == memory)
    }
}
