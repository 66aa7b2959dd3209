use serde::{Deserialize, Serialize};

/// Comparison tolerance used for every equality and tie test on values.
///
/// Two values are equal when they differ by at most `relative` times the
/// larger magnitude, or by at most `absolute` near zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-9,
            absolute: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(relative: f64) -> Self {
        Tolerance {
            relative,
            ..Tolerance::default()
        }
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= (self.relative * scale).max(self.absolute)
    }

    pub fn is_zero(&self, x: f64) -> bool {
        x.abs() <= self.absolute
    }

    /// `a < b` by more than the tolerance.
    pub fn lt(&self, a: f64, b: f64) -> bool {
        a < b && !self.eq(a, b)
    }

    pub fn gt(&self, a: f64, b: f64) -> bool {
        self.lt(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_and_absolute_regimes() {
        let tol = Tolerance::default();
        assert!(tol.eq(1.0, 1.0 + 1e-10));
        assert!(!tol.eq(1.0, 1.0 + 1e-8));
        // near zero the absolute floor takes over
        assert!(tol.eq(0.0, 1e-13));
        assert!(!tol.eq(0.0, 1e-11));
        assert!(tol.is_zero(-5e-13));
        assert!(tol.lt(1.0, 1.1));
        assert!(!tol.lt(1.0, 1.0 + 1e-12));
    }

    #[test]
    fn geometric_values_do_not_spuriously_tie() {
        // consecutive terms of a 0.75-ratio geometric sequence far down the tail
        let tol = Tolerance::default();
        let a = 1.5 * 0.75f64.powi(38);
        let b = 1.5 * 0.75f64.powi(39);
        assert!(!tol.eq(a, b));
    }
}
