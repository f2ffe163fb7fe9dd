//! Cardinal B-splines of degree 0 to 3 on the integer knots 0, 1, ..., p+1.

use crate::error::{invalid, Result};

/// Polynomial degree of a cardinal B-spline, restricted to 0..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplineDegree(u8);

impl SplineDegree {
    pub const CONSTANT: SplineDegree = SplineDegree(0);
    pub const LINEAR: SplineDegree = SplineDegree(1);
    pub const QUADRATIC: SplineDegree = SplineDegree(2);
    pub const CUBIC: SplineDegree = SplineDegree(3);

    pub fn new(p: u8) -> Result<Self> {
        if p > 3 {
            return invalid(format!("spline degree {p} not in 0..=3"));
        }
        Ok(SplineDegree(p))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Hat function supported on [0, 2].
#[inline]
pub fn linear(t: f64) -> f64 {
    if t <= 0.0 || t >= 2.0 {
        0.0
    } else if t < 1.0 {
        t
    } else {
        2.0 - t
    }
}

/// Cubic B-spline supported on [0, 4], evaluated piecewise.
#[inline]
pub fn cubic(t: f64) -> f64 {
    if t <= 0.0 || t >= 4.0 {
        0.0
    } else if t < 1.0 {
        t * t * t / 6.0
    } else if t < 2.0 {
        ((-0.5 * t + 2.0) * t - 2.0) * t + 2.0 / 3.0
    } else if t < 3.0 {
        ((0.5 * t - 4.0) * t + 10.0) * t - 22.0 / 3.0
    } else {
        let u = 4.0 - t;
        u * u * u / 6.0
    }
}

fn recursive(p: u8, t: f64) -> f64 {
    match p {
        0 => {
            if (0.0..1.0).contains(&t) {
                1.0
            } else {
                0.0
            }
        }
        _ => {
            let q = f64::from(p);
            (t * recursive(p - 1, t) + (q + 1.0 - t) * recursive(p - 1, t - 1.0)) / q
        }
    }
}

/// Evaluates B_p(t). Degrees 1 and 3 use closed forms, 0 and 2 the degree recursion.
pub fn bspline_eval(p: SplineDegree, t: f64) -> f64 {
    match p.0 {
        1 => linear(t),
        3 => cubic(t),
        q => recursive(q, t),
    }
}

/// Evaluates the degree recursion for any p ≤ 3, bypassing the closed forms.
pub fn bspline_eval_recursive(p: SplineDegree, t: f64) -> f64 {
    recursive(p.0, t)
}

/// B_p'(t) = B_{p-1}(t) - B_{p-1}(t-1). Degree 0 has no derivative and yields an error.
pub fn bspline_derivative(p: SplineDegree, t: f64) -> Result<f64> {
    if p.0 == 0 {
        return invalid("derivative of B_0 is not defined");
    }
    let lower = SplineDegree(p.0 - 1);
    Ok(bspline_eval(lower, t) - bspline_eval(lower, t - 1.0))
}

/// Taylor coefficients of B_3 at the integer knot `t0`, taken from the piece
/// on the right (`right = true`) or left of the knot.
///
/// The cubic is C² so only the third coefficient depends on the side.
pub(crate) fn cubic_taylor(t0: i64, right: bool) -> [f64; 4] {
    let (c0, c1, c2) = match t0 {
        1 => (1.0 / 6.0, 0.5, 0.5),
        2 => (2.0 / 3.0, 0.0, -1.0),
        3 => (1.0 / 6.0, -0.5, 0.5),
        _ => (0.0, 0.0, 0.0),
    };
    // leading coefficient of the piece on [j, j+1)
    let lead = |j: i64| match j {
        0 => 1.0 / 6.0,
        1 => -0.5,
        2 => 0.5,
        3 => -1.0 / 6.0,
        _ => 0.0,
    };
    let c3 = if right { lead(t0) } else { lead(t0 - 1) };
    [c0, c1, c2, c3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_recursion() {
        for i in -100..=500 {
            let t = i as f64 * 0.01;
            assert!((cubic(t) - recursive(3, t)).abs() < 1e-14, "t={t}");
            assert!((linear(t) - recursive(1, t)).abs() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn taylor_reproduces_pieces() {
        for t0 in 1..=4 {
            for &right in &[true, false] {
                let c = cubic_taylor(t0, right);
                for j in 1..10 {
                    let v = if right { 0.1 * j as f64 } else { -0.1 * j as f64 };
                    let p = c[0] + v * (c[1] + v * (c[2] + v * c[3]));
                    assert!((p - cubic(t0 as f64 + v)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn degree_bounds() {
        assert!(SplineDegree::new(4).is_err());
        assert!(bspline_derivative(SplineDegree::CONSTANT, 0.5).is_err());
    }
}
