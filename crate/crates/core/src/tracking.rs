//! Crest location on a periodic field and shape comparison about a crest.

use crate::diff::{DiffOperator, TrigInterpolant};
use crate::error::{Error, Result};
use crate::model::WaveField;

/// A local maximum of the trigonometric interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crest {
    pub x: f64,
    pub height: f64,
}

fn refine(interp: &TrigInterpolant, x0: f64, dx: f64) -> Crest {
    let mut x = x0;
    for _ in 0..50 {
        let (_, d1, d2) = interp.eval(x);
        if d2 >= 0.0 {
            break;
        }
        let step = (d1 / d2).clamp(-dx, dx);
        x -= step;
        if step.abs() < 1e-14 * dx.max(1.0) {
            break;
        }
    }
    Crest {
        x,
        height: interp.eval(x).0,
    }
}

/// Position of the global maximum, refined to sub-grid accuracy by Newton
/// iteration on the interpolant's slope.
pub fn crest_position(field: &WaveField, ops: &DiffOperator) -> Result<Crest> {
    let h = field.h();
    let j = (0..h.len())
        .max_by(|&a, &b| h[a].total_cmp(&h[b]))
        .ok_or_else(|| Error::Degenerate("empty field".into()))?;
    if h.iter().all(|&v| v == h[j]) {
        return Err(Error::Degenerate("flat field has no crest".into()));
    }
    let grid = field.grid();
    let crest = refine(&ops.interpolant(h), grid.x(j), grid.dx());
    Ok(Crest {
        x: grid.wrap(crest.x),
        ..crest
    })
}

/// Every local maximum higher than `min_height`, tallest first.
pub fn find_crests(field: &WaveField, ops: &DiffOperator, min_height: f64) -> Vec<Crest> {
    let h = field.h();
    let n = h.len();
    let grid = field.grid();
    let interp = ops.interpolant(h);
    let mut crests: Vec<Crest> = (0..n)
        .filter(|&j| {
            let (prev, next) = (h[(j + n - 1) % n], h[(j + 1) % n]);
            h[j] > min_height && h[j] > prev && h[j] >= next
        })
        .map(|j| {
            let c = refine(&interp, grid.x(j), grid.dx());
            Crest {
                x: grid.wrap(c.x),
                ..c
            }
        })
        .collect();
    crests.sort_by(|a, b| b.height.total_cmp(&a.height));
    crests
}

/// max_j |h_j − profile(x_j − x_c)| with x_c the crest of `field` and
/// periodic wrapping of the offset.
pub fn shape_error_about_crest(
    field: &WaveField,
    ops: &DiffOperator,
    profile: impl Fn(f64) -> f64,
) -> Result<(Crest, f64)> {
    let crest = crest_position(field, ops)?;
    let grid = field.grid();
    let err = field
        .h()
        .iter()
        .enumerate()
        .map(|(j, &v)| (v - profile(grid.wrap(grid.x(j) - crest.x))).abs())
        .fold(0.0, f64::max);
    Ok((crest, err))
}

/// Accumulates crest displacement across periodic wrap-arounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CrestTracker {
    length: f64,
    last: Option<f64>,
    travelled: f64,
}

impl CrestTracker {
    pub fn new(length: f64) -> Self {
        Self {
            length,
            last: None,
            travelled: 0.0,
        }
    }

    /// Record a crest position. Successive samples must be less than half
    /// a domain length apart.
    pub fn push(&mut self, x: f64) {
        if let Some(prev) = self.last {
            let mut d = x - prev;
            d -= self.length * (d / self.length).round();
            self.travelled += d;
        }
        self.last = Some(x);
    }

    /// Net displacement since the first sample.
    pub fn travelled(&self) -> f64 {
        self.travelled
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PeriodicGrid;

    #[test]
    fn crest_of_offgrid_gaussian() {
        let grid = PeriodicGrid::new(40.0, 256).unwrap();
        let ops = DiffOperator::spectral(grid);
        let f = WaveField::from_fn(grid, 0.0, |x| 0.1 * (-(x - 3.0137) * (x - 3.0137)).exp()).unwrap();
        let c = crest_position(&f, &ops).unwrap();
        assert!((c.x - 3.0137).abs() < 1e-12, "{c:?}");
        assert!((c.height - 0.1).abs() < 1e-13);
    }

    #[test]
    fn flat_field_has_no_crest() {
        let grid = PeriodicGrid::new(40.0, 64).unwrap();
        let ops = DiffOperator::spectral(grid);
        assert!(crest_position(&WaveField::zeros(grid), &ops).is_err());
    }

    #[test]
    fn two_crests_sorted() {
        let grid = PeriodicGrid::new(80.0, 512).unwrap();
        let ops = DiffOperator::spectral(grid);
        let f = WaveField::from_fn(grid, 0.0, |x| {
            0.2 * (-(x + 20.0) * (x + 20.0)).exp() + 0.5 * (-(x - 10.3) * (x - 10.3)).exp()
        })
        .unwrap();
        let c = find_crests(&f, &ops, 0.01);
        assert_eq!(c.len(), 2);
        assert!((c[0].x - 10.3).abs() < 1e-10 && (c[1].x + 20.0).abs() < 1e-10);
    }

    #[test]
    fn tracker_unwraps() {
        let mut t = CrestTracker::new(10.0);
        for x in [3.0, 4.5, -4.0, -2.0] {
            t.push(x);
        }
        assert!((t.travelled() - 5.0).abs() < 1e-12);
    }
}
