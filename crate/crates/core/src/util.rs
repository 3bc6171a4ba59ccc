//! Small shared numeric helpers.

use std::f64::consts::TAU;

/// Wraps an angle into `[0, 2π)`.
pub(crate) fn wrap_tau(a: f64) -> f64 {
    let mut a = a % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}

/// Wraps an angle into `(-π, π]`.
pub(crate) fn wrap_pi(a: f64) -> f64 {
    let a = wrap_tau(a);
    if a > std::f64::consts::PI {
        a - TAU
    } else {
        a
    }
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}
