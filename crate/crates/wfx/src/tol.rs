//! Centralized tolerance constants.
//!
//! Every asserted inequality in this crate carries an explicit error budget
//! built from these pieces; reports list the budget terms separately so a
//! reader can tell a truncation tail from a bisection slack.

/// Relative tolerance for exact algebraic identities (duality of A_p
/// constants, offset identities, oracle equivalence). These identities hold
/// in exact arithmetic; the budget only covers floating-point roundoff
/// amplified by modest powers.
pub const IDENTITY_REL: f64 = 1e-10;

/// Relative tolerance for Luxemburg-type norm bisections (Orlicz, variable
/// exponent). Bisection runs until the bracket is this small relative to the
/// current scale.
pub const BISECT_REL: f64 = 1e-12;

/// Stopping window (in p) for the A_inf minimization over p.
pub const AINF_P_TOL: f64 = 1e-6;

/// Right endpoint of the exponent interval scanned by the A_inf
/// minimization when callers do not have a sharper cap.
pub const AINF_P_MAX: f64 = 16.0;

/// Relative error budget for checks that involve a tabulated complementary
/// Young function (numeric Legendre transform on log-spaced knots plus
/// interpolation).
pub const YOUNG_TAB_REL: f64 = 2e-2;

/// Relative tolerance for Young-function checks with analytic complementary
/// functions (power family).
pub const YOUNG_ANALYTIC_REL: f64 = 1e-9;

/// Geometric tail bound for the Rubio de Francia series truncated at K terms.
/// The iterates are damped by (2N)^{-k} with N >= 1, so the dropped tail is
/// at most 2^{-K} of the leading scale; one factor 2 covers the sum, one
/// covers the worst-case ratio slack left by the norm-estimate safety margin.
pub fn rdf_tail(k: usize) -> f64 {
    2f64.powi(2 - (k as i32))
}

/// Multiplicative safety applied to empirically estimated maximal-operator
/// norms before they are used as the N in the Rubio de Francia series. Keeps
/// the damped iterate ratios strictly below 1 even if the battery missed the
/// true maximizer by a hair.
pub const NORM_SAFETY: f64 = 1.02;

/// Relative slack for inequality checks whose two sides are both computed by
/// bisection-backed norms.
pub const NORM_CHECK_REL: f64 = 1e-9;
