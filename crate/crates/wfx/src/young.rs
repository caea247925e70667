//! Young functions: evaluation, complementary (Legendre) transforms,
//! dilation indices, doubling constants, and modulars.
//!
//! Built-in families cover powers, powers with a logarithmic bump,
//! min-of-powers, powered composition, and tabulated functions given by
//! log-log interpolation. Complementary functions are exact for the power
//! family and numeric (tabulated) otherwise.

use crate::numeric::{conjugate_exponent, golden_min, monotone_bisect, pairwise_sum_by};
use crate::space::{GridFunction, Weight};
use crate::{tol, Error, Result};

#[derive(Debug, Clone)]
pub enum YoungFamily {
    /// t^p, p >= 1.
    Power { p: f64 },
    /// c t^p.
    ScaledPower { scale: f64, p: f64 },
    /// t^p ln(e + t)^a.
    PLog { p: f64, a: f64 },
    /// min(t^p, t^q). Not convex at t = 1, but Phi(t)/t is nondecreasing,
    /// which is all the identities here use.
    MinOfPowers { p: f64, q: f64 },
    /// Phi(t^r).
    Powered { r: f64, inner: Box<YoungFunction> },
    /// Log-log interpolation between knots; end slopes extrapolate.
    Tabulated {
        name: String,
        logt: Vec<f64>,
        logv: Vec<f64>,
        /// The function is identically zero at or below this abscissa
        /// (Legendre transforms of functions with positive slope at zero).
        zero_below: f64,
    },
    /// The L-infinity convention: 0 on [0,1], infinite beyond.
    SupNorm,
}

#[derive(Debug, Clone)]
pub struct YoungFunction {
    family: YoungFamily,
}

/// Doubling report: the observed sup of Phi(2t)/Phi(t), and whether the sup
/// had stabilized inside the scanned range. `doubling = false` means the
/// per-decade sup was still growing at the top of the range, so no finite
/// constant is claimed.
#[derive(Debug, Clone, Copy)]
pub struct Delta2 {
    pub constant: f64,
    pub doubling: bool,
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::invalid(name, format!("exponent must be >= 1, got {p}")));
    }
    Ok(())
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        check_exponent("p", p)?;
        Ok(YoungFunction { family: YoungFamily::Power { p } })
    }

    pub fn scaled_power(scale: f64, p: f64) -> Result<Self> {
        check_exponent("p", p)?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid("scale", format!("must be positive, got {scale}")));
        }
        Ok(YoungFunction { family: YoungFamily::ScaledPower { scale, p } })
    }

    /// t^p ln(e+t)^a.
    pub fn plog(p: f64, a: f64) -> Result<Self> {
        check_exponent("p", p)?;
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::invalid("a", format!("log power must be >= 0, got {a}")));
        }
        Ok(YoungFunction { family: YoungFamily::PLog { p, a } })
    }

    pub fn min_of_powers(p: f64, q: f64) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        Ok(YoungFunction { family: YoungFamily::MinOfPowers { p, q } })
    }

    pub fn sup_norm() -> Self {
        YoungFunction { family: YoungFamily::SupNorm }
    }

    /// Phi(t^r) for r > 0.
    pub fn powered(&self, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::invalid("r", format!("power must be positive, got {r}")));
        }
        Ok(YoungFunction {
            family: YoungFamily::Powered { r, inner: Box::new(self.clone()) },
        })
    }

    /// Tabulate `f` on `knots` log-spaced points of [t_lo, t_hi].
    pub fn tabulate(
        name: &str,
        t_lo: f64,
        t_hi: f64,
        knots: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !(t_lo > 0.0 && t_hi > t_lo && knots >= 2) {
            return Err(Error::invalid("tabulate", "need 0 < t_lo < t_hi and >= 2 knots".to_string()));
        }
        let (llo, lhi) = (t_lo.ln(), t_hi.ln());
        let mut logt = Vec::with_capacity(knots);
        let mut logv = Vec::with_capacity(knots);
        let mut zero_below = 0.0f64;
        for k in 0..knots {
            let lt = llo + (lhi - llo) * (k as f64) / ((knots - 1) as f64);
            let v = f(lt.exp());
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NonFinite { index: k, value: v });
            }
            if v == 0.0 {
                zero_below = lt.exp();
                logt.clear();
                logv.clear();
                continue;
            }
            logt.push(lt);
            logv.push(v.ln());
        }
        if logt.len() < 2 {
            return Err(Error::invalid("tabulate", "function vanishes on the whole range".to_string()));
        }
        Ok(YoungFunction {
            family: YoungFamily::Tabulated { name: name.to_string(), logt, logv, zero_below },
        })
    }

    /// e^t - 1, tabulated (its doubling constant is unbounded).
    pub fn exp_minus_one() -> Self {
        Self::tabulate("expm1", 1e-8, 500.0, 4096, |t| t.exp_m1()).expect("static table")
    }

    pub fn name(&self) -> String {
        match &self.family {
            YoungFamily::Power { p } => format!("t^{p}"),
            YoungFamily::ScaledPower { scale, p } => format!("{scale}*t^{p}"),
            YoungFamily::PLog { p, a } => format!("t^{p}*ln(e+t)^{a}"),
            YoungFamily::MinOfPowers { p, q } => format!("min(t^{p},t^{q})"),
            YoungFamily::Powered { r, inner } => format!("({})(t^{r})", inner.name()),
            YoungFamily::Tabulated { name, .. } => name.clone(),
            YoungFamily::SupNorm => "linf".to_string(),
        }
    }

    pub fn family(&self) -> &YoungFamily {
        &self.family
    }

    pub fn is_sup_norm(&self) -> bool {
        matches!(self.family, YoungFamily::SupNorm)
    }

    /// `Some((p, scale))` when Phi(t) = scale * t^p.
    pub fn as_power(&self) -> Option<(f64, f64)> {
        match &self.family {
            YoungFamily::Power { p } => Some((*p, 1.0)),
            YoungFamily::ScaledPower { scale, p } => Some((*p, *scale)),
            YoungFamily::Powered { r, inner } => inner.as_power().map(|(p, s)| (p * r, s)),
            _ => None,
        }
    }

    /// Range on which pointwise evaluation is trustworthy (tabulated
    /// functions extrapolate outside their knots).
    fn native_range(&self) -> (f64, f64) {
        match &self.family {
            YoungFamily::Tabulated { logt, .. } => {
                (logt[0].exp(), logt[logt.len() - 1].exp())
            }
            YoungFamily::Powered { r, inner } => {
                let (lo, hi) = inner.native_range();
                (lo.powf(1.0 / r), hi.powf(1.0 / r))
            }
            _ => (1e-300, 1e300),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            YoungFamily::Power { p } => t.powf(*p),
            YoungFamily::ScaledPower { scale, p } => scale * t.powf(*p),
            YoungFamily::PLog { p, a } => {
                let base = t.powf(*p);
                if *a == 0.0 {
                    base
                } else {
                    base * (std::f64::consts::E + t).ln().powf(*a)
                }
            }
            YoungFamily::MinOfPowers { p, q } => t.powf(*p).min(t.powf(*q)),
            YoungFamily::Powered { r, inner } => inner.eval(t.powf(*r)),
            YoungFamily::Tabulated { logt, logv, zero_below, .. } => {
                if t <= *zero_below {
                    return 0.0;
                }
                let x = t.ln();
                let n = logt.len();
                let seg = match logt.binary_search_by(|a| a.partial_cmp(&x).unwrap()) {
                    Ok(k) => return logv[k].exp(),
                    Err(0) => 0,
                    Err(k) if k >= n => n - 2,
                    Err(k) => k - 1,
                };
                let (x0, x1) = (logt[seg], logt[seg + 1]);
                let (y0, y1) = (logv[seg], logv[seg + 1]);
                (y0 + (y1 - y0) * (x - x0) / (x1 - x0)).exp()
            }
            YoungFamily::SupNorm => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Generalized inverse: the least t with Phi(t) >= y.
    pub fn inv(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        match &self.family {
            YoungFamily::Power { p } => y.powf(1.0 / p),
            YoungFamily::ScaledPower { scale, p } => (y / scale).powf(1.0 / p),
            YoungFamily::SupNorm => 1.0,
            YoungFamily::Powered { r, inner } => inner.inv(y).powf(1.0 / r),
            _ => monotone_bisect(1e-8, 1.0, tol::BISECT_REL, &|t| self.eval(t) >= y, "Young inverse")
                .unwrap_or(0.0),
        }
    }

    /// Complementary Young function: Phibar(s) = sup_t (st - Phi(t)). Exact
    /// for powers, numeric (tabulated Legendre transform) otherwise.
    pub fn complementary(&self) -> Result<YoungFunction> {
        match &self.family {
            YoungFamily::Power { p } if *p == 1.0 => Ok(YoungFunction::sup_norm()),
            YoungFamily::Power { p } => {
                let pc = conjugate_exponent(*p);
                YoungFunction::scaled_power((*p - 1.0) * (*p).powf(-pc), pc)
            }
            YoungFamily::ScaledPower { scale, p } if *p > 1.0 => {
                let pc = conjugate_exponent(*p);
                YoungFunction::scaled_power(
                    scale.powf(1.0 - pc) * (*p - 1.0) * (*p).powf(-pc),
                    pc,
                )
            }
            YoungFamily::SupNorm => YoungFunction::power(1.0),
            YoungFamily::ScaledPower { .. } => Err(Error::Unsupported(
                "complementary of a scaled linear function is a scaled sup-norm".to_string(),
            )),
            _ => self.legendre_numeric(),
        }
    }

    /// Tabulated Legendre transform on log-spaced knots. The supremand
    /// st - Phi(t) is scanned coarsely over the native range of Phi and then
    /// refined by golden section in ln t.
    fn legendre_numeric(&self) -> Result<YoungFunction> {
        let (t_lo, t_hi) = self.native_range();
        let (lt_lo, lt_hi) = (t_lo.max(1e-12).ln(), t_hi.min(1e12).ln());
        let scan = 240usize;
        let sup_at = |s: f64| -> f64 {
            let g = |lt: f64| {
                let t = lt.exp();
                s * t - self.eval(t)
            };
            let mut best = 0.0f64;
            let mut best_lt = lt_lo;
            for k in 0..=scan {
                let lt = lt_lo + (lt_hi - lt_lo) * (k as f64) / (scan as f64);
                let v = g(lt);
                if v > best {
                    best = v;
                    best_lt = lt;
                }
            }
            let step = (lt_hi - lt_lo) / (scan as f64);
            let refined = golden_min(
                (best_lt - step).max(lt_lo),
                (best_lt + step).min(lt_hi),
                1e-10,
                &|lt| -g(lt),
            );
            best.max(g(refined)).max(0.0)
        };
        YoungFunction::tabulate(
            &format!("conj({})", self.name()),
            1e-8,
            1e8,
            4096,
            sup_at,
        )
    }

    /// h_Phi(t) = sup_s Phi(st)/Phi(s), evaluated on a log grid of s.
    pub fn h_phi(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (lo, hi) = self.native_range();
        // Keep both s and st inside the native range.
        let s_lo = (lo / t.min(1.0)).max(lo).max(1e-12);
        let s_hi = (hi / t.max(1.0)).min(hi).min(1e12);
        if s_hi <= s_lo {
            return f64::NAN;
        }
        let (a, b) = (s_lo.ln(), s_hi.ln());
        let n = 600usize;
        let mut sup = 0.0f64;
        for k in 0..=n {
            let s = (a + (b - a) * (k as f64) / (n as f64)).exp();
            let d = self.eval(s);
            if d > 0.0 {
                let r = self.eval(s * t) / d;
                if r > sup {
                    sup = r;
                }
            }
        }
        sup
    }

    /// Lower and upper dilation indices (i_Phi, I_Phi). Analytic for the
    /// built-in families, slope fits of ln h_Phi otherwise.
    pub fn dilation_indices(&self) -> (f64, f64) {
        match &self.family {
            YoungFamily::Power { p } | YoungFamily::ScaledPower { p, .. } => (*p, *p),
            YoungFamily::PLog { p, .. } => (*p, *p),
            YoungFamily::MinOfPowers { p, q } => (p.min(*q), p.max(*q)),
            YoungFamily::Powered { r, inner } => {
                let (i, s) = inner.dilation_indices();
                (r * i, r * s)
            }
            YoungFamily::SupNorm => (f64::INFINITY, f64::INFINITY),
            YoungFamily::Tabulated { logt, .. } => {
                // Local log-log slope of Phi, extrapolated to the end of the
                // range by fitting sigma(x) = a + b/x. For power tails with a
                // slowly varying factor (t^p ln^b t) the 1/x term absorbs the
                // factor exactly, so the intercept recovers p.
                let sigma = |x: f64| -> f64 {
                    (self.eval((x + 1.0).exp()).ln() - self.eval((x - 1.0).exp()).ln()) / 2.0
                };
                let intercept = |xs: &[f64]| -> f64 {
                    let pts: Vec<(f64, f64)> = xs
                        .iter()
                        .map(|&x| (1.0 / x, sigma(x)))
                        .filter(|(_, y)| y.is_finite())
                        .collect();
                    let n = pts.len() as f64;
                    let sx: f64 = pts.iter().map(|p| p.0).sum();
                    let sy: f64 = pts.iter().map(|p| p.1).sum();
                    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
                    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
                    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                    (sy - slope * sx) / n
                };
                let (lo, hi) = (logt[0] + 2.0, logt[logt.len() - 1] - 2.0);
                let spread = |a: f64, b: f64| -> Vec<f64> {
                    (0..12).map(|k| a + (b - a) * (k as f64) / 11.0).collect()
                };
                let small = spread(lo, (-4.0f64).max(lo + 0.5).min(-0.5));
                let large = spread(4.0f64.min(hi - 0.5).max(0.5), hi);
                (intercept(&small), intercept(&large))
            }
        }
    }

    /// Doubling constant sup_t Phi(2t)/Phi(t), scanned per decade over the
    /// native range with growth detection at the top.
    pub fn delta2_constant(&self) -> Result<Delta2> {
        if self.is_sup_norm() {
            return Err(Error::Unsupported("doubling constant of the sup-norm convention".to_string()));
        }
        let (lo, hi) = self.native_range();
        let t_lo = lo.max(1e-8);
        let t_hi = (hi / 2.0).min(1e8);
        if t_hi <= t_lo {
            return Err(Error::invalid("delta2", "empty scan range".to_string()));
        }
        let decades = ((t_hi / t_lo).log10().ceil() as usize).max(1);
        let per = 64usize;
        let mut decade_sup = vec![0.0f64; decades];
        let (la, lb) = (t_lo.ln(), t_hi.ln());
        let total = decades * per;
        for k in 0..=total {
            let lt = la + (lb - la) * (k as f64) / (total as f64);
            let t = lt.exp();
            let d = self.eval(t);
            if d > 0.0 {
                let r = self.eval(2.0 * t) / d;
                let idx = (k / per).min(decades - 1);
                if r > decade_sup[idx] {
                    decade_sup[idx] = r;
                }
            }
        }
        let constant = decade_sup.iter().fold(0.0f64, |a, &b| a.max(b));
        // Still climbing at the top of the range => no finite constant claimed.
        let doubling = if decades >= 2 {
            decade_sup[decades - 1] <= decade_sup[decades - 2] * 1.01
        } else {
            true
        };
        Ok(Delta2 { constant, doubling })
    }
}

impl std::str::FromStr for YoungFunction {
    type Err = Error;

    /// Forms: `power:P`, `scaled:C:P`, `plog:P`, `plog:P:A`, `minpow:P:Q`,
    /// `linf`, `expm1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::invalid("phi", format!("bad number `{x}` in `{s}`")))
        };
        match parts.as_slice() {
            ["power", p] => YoungFunction::power(num(p)?),
            ["scaled", c, p] => YoungFunction::scaled_power(num(c)?, num(p)?),
            ["plog", p] => YoungFunction::plog(num(p)?, 1.0),
            ["plog", p, a] => YoungFunction::plog(num(p)?, num(a)?),
            ["minpow", p, q] => YoungFunction::min_of_powers(num(p)?, num(q)?),
            ["linf"] => Ok(YoungFunction::sup_norm()),
            ["expm1"] => Ok(YoungFunction::exp_minus_one()),
            _ => Err(Error::invalid(
                "phi",
                format!("unknown Young function `{s}` (power:P|scaled:C:P|plog:P[:A]|minpow:P:Q|linf|expm1)"),
            )),
        }
    }
}

/// Modular of `f`: integral of Phi(|f|) against `w d(mu)`.
pub fn modular(f: &GridFunction, phi: &YoungFunction, w: Option<&Weight>) -> Result<f64> {
    if let Some(w) = w {
        if !f.space().same_grid(w.space()) {
            return Err(Error::SpaceMismatch("modular weight on a different grid".into()));
        }
    }
    let space = f.space();
    let fv = f.values();
    Ok(pairwise_sum_by(fv.len(), &|i| {
        phi.eval(fv[i].abs()) * w.map_or(1.0, |w| w.values()[i]) * space.mass(i)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_conjugate_exact() {
        let phi = YoungFunction::power(2.0).unwrap();
        let bar = phi.complementary().unwrap();
        for &t in &[0.3, 1.0, 2.5, 10.0] {
            assert!((bar.eval(t) - t * t / 4.0).abs() < 1e-12 * (t * t / 4.0 + 1.0));
        }
        // Bidual of t^p returns t^p.
        let bidual = bar.complementary().unwrap();
        for &t in &[0.5, 1.0, 4.0] {
            assert!((bidual.eval(t) - t * t).abs() < 1e-12 * (t * t));
        }
    }

    #[test]
    fn half_square_is_self_conjugate() {
        let phi = YoungFunction::scaled_power(0.5, 2.0).unwrap();
        let bar = phi.complementary().unwrap();
        for &t in &[0.2, 1.0, 3.0] {
            assert!((bar.eval(t) - 0.5 * t * t).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_constants() {
        let p3 = YoungFunction::power(3.0).unwrap().delta2_constant().unwrap();
        assert!(p3.doubling && (p3.constant - 8.0).abs() < 1e-9);
        let plog = YoungFunction::plog(2.0, 1.0).unwrap().delta2_constant().unwrap();
        assert!(plog.doubling && plog.constant >= 4.0 && plog.constant <= 8.0);
        let exp = YoungFunction::exp_minus_one().delta2_constant().unwrap();
        assert!(!exp.doubling);
    }

    #[test]
    fn young_inequality_one_for_powers() {
        // t <= Phi^{-1}(t) Phibar^{-1}(t) <= 2t
        let phi = YoungFunction::power(2.0).unwrap();
        let bar = phi.complementary().unwrap();
        for &t in &[0.01, 1.0, 7.0, 1e4] {
            let prod = phi.inv(t) * bar.inv(t);
            assert!(prod >= t * (1.0 - 1e-12) && prod <= 2.0 * t * (1.0 + 1e-12));
        }
        // Linear + sup-norm pair sits at the lower end.
        let lin = YoungFunction::power(1.0).unwrap();
        let sup = lin.complementary().unwrap();
        assert!(sup.is_sup_norm());
        for &t in &[0.5, 2.0] {
            let prod = lin.inv(t) * sup.inv(t);
            assert!((prod - t).abs() < 1e-12);
        }
    }

    #[test]
    fn young_inequality_two() {
        // Phibar(Phi(t)/t) <= Phi(t)
        for phi in [
            YoungFunction::power(2.0).unwrap(),
            YoungFunction::plog(2.0, 1.0).unwrap(),
            YoungFunction::min_of_powers(1.5, 3.0).unwrap(),
        ] {
            let bar = phi.complementary().unwrap();
            for &t in &[0.3, 1.0, 5.0, 40.0] {
                let v = phi.eval(t);
                assert!(
                    bar.eval(v / t) <= v * (1.0 + 2e-2),
                    "{} at {t}: {} vs {v}",
                    phi.name(),
                    bar.eval(v / t)
                );
            }
        }
    }

    #[test]
    fn dilation_indices_analytic_and_fitted() {
        let (i, s) = YoungFunction::power(3.0).unwrap().dilation_indices();
        assert!((i - 3.0).abs() < 1e-12 && (s - 3.0).abs() < 1e-12);
        let (i, s) = YoungFunction::min_of_powers(1.5, 4.0).unwrap().dilation_indices();
        assert_eq!((i, s), (1.5, 4.0));
        // Fitted path: tabulate t^2 and recover the index.
        let tab = YoungFunction::tabulate("sq", 1e-8, 1e8, 1024, |t| t * t).unwrap();
        let (i, s) = tab.dilation_indices();
        assert!((i - 2.0).abs() < 0.05 && (s - 2.0).abs() < 0.05);
    }

    #[test]
    fn conjugate_index_duality() {
        // i of the conjugate equals (I_Phi)'.
        let phi = YoungFunction::plog(2.0, 1.0).unwrap();
        let bar = phi.complementary().unwrap();
        let (i_bar, _) = bar.dilation_indices();
        let (_, cap_i) = phi.dilation_indices();
        let expect = cap_i / (cap_i - 1.0);
        assert!((i_bar - expect).abs() < 0.05, "{i_bar} vs {expect}");
    }

    #[test]
    fn h_phi_power_identity() {
        let phi = YoungFunction::power(2.5).unwrap();
        for &t in &[0.1, 1.0, 9.0] {
            assert!((phi.h_phi(t) - t.powf(2.5)).abs() < 1e-9 * t.powf(2.5).max(1.0));
        }
    }

    #[test]
    fn modular_matches_hand_sum() {
        let s = crate::space::MeasureSpace::line(4, 0.5).unwrap();
        let f = GridFunction::new(s.clone(), vec![1.0, -2.0, 0.0, 3.0]).unwrap();
        let phi = YoungFunction::power(2.0).unwrap();
        let m = modular(&f, &phi, None).unwrap();
        assert!((m - 0.5 * (1.0 + 4.0 + 0.0 + 9.0)).abs() < 1e-12);
        let w = Weight::from_values(s, vec![1.0, 1.0, 1.0, 2.0]).unwrap();
        let mw = modular(&f, &phi, Some(&w)).unwrap();
        assert!((mw - 0.5 * (1.0 + 4.0 + 18.0)).abs() < 1e-12);
    }

    #[test]
    fn parse_forms() {
        assert!("power:2".parse::<YoungFunction>().is_ok());
        assert!("plog:2".parse::<YoungFunction>().is_ok());
        assert!("minpow:1.5:3".parse::<YoungFunction>().is_ok());
        assert!("linf".parse::<YoungFunction>().unwrap().is_sup_norm());
        assert!("bogus:1".parse::<YoungFunction>().is_err());
    }
}
