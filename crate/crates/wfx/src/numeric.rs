//! Small numeric helpers shared across modules: deterministic summation,
//! bracketing bisection, and a golden-section minimizer.

/// Pairwise (cascade) summation. Deterministic for a fixed input order and
/// considerably more accurate than a running sum on long vectors.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n if n <= 32 => {
            let mut acc = 0.0;
            for &x in xs {
                acc += x;
            }
            acc
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Sum of `f(i)` over `0..n` by pairwise splitting, without materializing the
/// vector.
pub(crate) fn pairwise_sum_by(n: usize, f: &dyn Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &dyn Fn(usize) -> f64) -> f64 {
        if hi - lo <= 32 {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    if n == 0 {
        0.0
    } else {
        go(0, n, f)
    }
}

/// x^e computed through exp(e ln x) for strictly positive x. Stable for the
/// negative and fractional exponents that weight manipulations need; callers
/// guarantee x > 0.
#[inline]
pub(crate) fn powf_pos(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        x
    } else {
        (e * x.ln()).exp()
    }
}

/// Conjugate exponent p' with the usual conventions: 1' = inf, inf' = 1.
#[inline]
pub(crate) fn conjugate_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p <= 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Find the smallest lambda in (0, hi] with `pred(lambda)` true, assuming
/// `pred` is monotone (false below the root, true above). Expands `hi`
/// upward if `pred(hi)` is false, shrinks `lo` from `hi/2` downward. Returns
/// the midpoint of the final bracket.
pub(crate) fn monotone_bisect(
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    pred: &dyn Fn(f64) -> bool,
    context: &str,
) -> crate::Result<f64> {
    debug_assert!(lo > 0.0 && hi > lo);
    let mut grow = 0;
    while !pred(hi) {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 600 {
            return Err(crate::Error::BracketExhausted {
                context: format!("expanding upper bracket while {context}"),
            });
        }
    }
    let mut shrink = 0;
    while pred(lo) {
        hi = lo;
        lo /= 2.0;
        shrink += 1;
        if shrink > 600 {
            // pred holds arbitrarily close to zero: the root is 0.
            return Ok(0.0);
        }
    }
    // Invariant: pred(lo) false, pred(hi) true.
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization of a unimodal function on [a, b]; returns the
/// abscissa of the minimum to within `tol`.
pub(crate) fn golden_min(a: f64, b: f64, tol: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
        assert!((pairwise_sum_by(xs.len(), &|i| xs[i]) - naive).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_threshold() {
        // Smallest lambda with lambda^2 >= 7.
        let root = monotone_bisect(1.0, 2.0, 1e-14, &|l| l * l >= 7.0, "test").unwrap();
        assert!((root - 7f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn golden_finds_min() {
        let x = golden_min(0.0, 5.0, 1e-9, &|x| (x - 2.3) * (x - 2.3));
        assert!((x - 2.3).abs() < 1e-6);
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(2.0), 2.0);
        assert!((conjugate_exponent(3.0) - 1.5).abs() < 1e-15);
        assert!(conjugate_exponent(1.0).is_infinite());
        assert_eq!(conjugate_exponent(f64::INFINITY), 1.0);
    }
}
