//! Closed-form names for values that show up in the game.

const MATCH_TOL: f64 = 1e-9;

fn known() -> [(f64, &'static str); 17] {
    let r2 = std::f64::consts::SQRT_2;
    [
        (0.0, "0"),
        (0.125, "1/8"),
        (0.25, "1/4"),
        (0.375, "3/8"),
        (0.5, "1/2"),
        (0.625, "5/8"),
        (0.875, "7/8"),
        (5.0 / 9.0, "5/9"),
        (2.0 / 3.0, "2/3"),
        (0.75, "3/4"),
        (7.0 / 9.0, "7/9"),
        ((2.0 + r2) / 4.0, "cos^2(pi/8)"),
        (1.0, "1"),
        (r2 - 1.0, "sqrt(2)-1"),
        ((r2 - 1.0) / 4.0, "(sqrt(2)-1)/4"),
        (std::f64::consts::FRAC_PI_4, "pi/4"),
        (1.0 / 3.0 + 2.0 / (3.0 * 3f64.sqrt()) * (std::f64::consts::PI / 18.0).cos(), "1/3+2cos(pi/18)/(3sqrt(3))"),
    ]
}

/// Name of `v` if it lies within 1e-9 of a recognized constant.
pub fn name(v: f64) -> Option<&'static str> {
    known().into_iter().find(|(k, _)| (k - v).abs() < MATCH_TOL).map(|(_, n)| n)
}

/// 12-digit decimal.
pub fn decimal(v: f64) -> String {
    format!("{v:.12}")
}

/// Decimal followed by the symbolic name in brackets, if any.
pub fn pretty(v: f64) -> String {
    match name(v) {
        Some(n) => format!("{} [{n}]", decimal(v)),
        None => decimal(v),
    }
}
