use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::modifier::Direction;

// Relative slack used when deciding whether a ratio is integral or a half-way tie.
const GRID_TOL: f64 = 1e-9;

/// Uniform grid of local variants around a base parameter value.
///
/// Grid point `i` (for `0 <= i < count`) sits at `base + (i - (count-1)/2) * step`,
/// so the grid is symmetric about `base`. Grids built by [`build_variant_space`]
/// have an odd count and contain `base` itself; [`VariantSpace::uniform`] also
/// allows even counts, where `base` falls between two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantSpace {
    pub base: f64,
    pub range: f64,
    pub step: f64,
    pub count: usize,
}

/// Builds the grid `{ base + k*step : |k*step| <= range }`.
pub fn build_variant_space(base: f64, range: f64, step: f64) -> Result<VariantSpace> {
    if !base.is_finite() {
        return Err(invalid("base must be finite"));
    }
    if !(range.is_finite() && range > 0.0) {
        return Err(invalid(format!("range must be positive, got {range}")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid(format!("step must be positive, got {step}")));
    }
    if step > range {
        return Err(invalid(format!(
            "step {step} exceeds range {range}: no variants besides the base"
        )));
    }
    let half = (range / step + GRID_TOL).floor() as usize;
    Ok(VariantSpace {
        base,
        range,
        step,
        count: 2 * half + 1,
    })
}

impl VariantSpace {
    /// `count` evenly spaced points from `lower` to `upper` inclusive.
    pub fn uniform(lower: f64, upper: f64, count: usize) -> Result<VariantSpace> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(invalid(format!("bad interval [{lower}, {upper}]")));
        }
        if count < 2 {
            return Err(invalid(format!("need at least 2 grid points, got {count}")));
        }
        Ok(VariantSpace {
            base: 0.5 * (lower + upper),
            range: 0.5 * (upper - lower),
            step: (upper - lower) / (count - 1) as f64,
            count,
        })
    }

    fn center(&self) -> f64 {
        (self.count - 1) as f64 / 2.0
    }

    pub fn point(&self, index: usize) -> f64 {
        debug_assert!(index < self.count);
        self.base + (index as f64 - self.center()) * self.step
    }

    pub fn lowest(&self) -> f64 {
        self.point(0)
    }

    pub fn highest(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    /// Fractional grid coordinate of `x`.
    fn coordinate(&self, x: f64) -> f64 {
        (x - self.base) / self.step + self.center()
    }

    fn clamp_index(&self, i: f64) -> usize {
        i.max(0.0).min((self.count - 1) as f64) as usize
    }

    /// Index of the grid point nearest to `x`; exact half-way ties go the way
    /// of `toward` (`None` rounds up).
    pub fn nearest_index(&self, x: f64, toward: Option<Direction>) -> usize {
        let u = self.coordinate(x);
        let below = u.floor();
        let frac = u - below;
        let k = if (frac - 0.5).abs() < GRID_TOL {
            match toward {
                Some(Direction::Less) => below,
                _ => below + 1.0,
            }
        } else {
            u.round()
        };
        self.clamp_index(k)
    }

    /// Index of the grid point equal to `x`, if `x` is one.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let i = self.nearest_index(x, None);
        ((self.point(i) - x).abs() <= GRID_TOL * self.step).then_some(i)
    }

    /// Nearest grid point to `x` among those inside `[lower, upper]`.
    ///
    /// Falls back to the overall nearest point when the interval holds no grid
    /// point.
    pub fn snap_within(&self, x: f64, lower: f64, upper: f64, toward: Option<Direction>) -> usize {
        let tol = GRID_TOL * self.step;
        let i = self.nearest_index(x, toward);
        let p = self.point(i);
        if p < lower - tol {
            let first_inside = self.clamp_index((self.coordinate(lower) - GRID_TOL).ceil());
            if self.point(first_inside) <= upper + tol && self.point(first_inside) >= lower - tol {
                return first_inside;
            }
        } else if p > upper + tol {
            let last_inside = self.clamp_index((self.coordinate(upper) + GRID_TOL).floor());
            if self.point(last_inside) >= lower - tol && self.point(last_inside) <= upper + tol {
                return last_inside;
            }
        }
        i
    }
}
