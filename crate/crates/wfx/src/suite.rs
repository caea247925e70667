//! The paper-core verification battery: ten numbered end-to-end criteria
//! shared by `wfx suite` and the acceptance test target. Each criterion
//! returns a pass flag plus a human-readable detail line; nothing here
//! asserts, so the CLI can report partial failures.

use std::time::Instant;

use serde::Serialize;

use crate::basis::{enumerate, BasisKind};
use crate::harness::{
    ainf_pair_family, generate_pairs, input_battery, verify_ainf_extrapolation,
    verify_ainf_vector_valued, verify_bfs_extrapolation, verify_modular_extrapolation,
    verify_vector_valued, FamilyKind,
};
use crate::maximal::maximal;
use crate::muckenhoupt::{
    a1_constant, ap_constant, apq_constant, bmo_norm, make_power_weight, make_random_a1ish,
    rh_constant,
};
use crate::operators::{
    make_order_m_measure, solve_dirichlet, solve_dirichlet_modular, square_function, ConeSpec,
};
use crate::rdf::{build_ap_weight, build_modular_weight, estimate_maximal_norm,
    estimate_modular_ratio, lp_norm, RdfConfig};
use crate::report::Verdict;
use crate::space::{GridFunction, MeasureSpace, SpaceRef, Weight};
use crate::spaces::{SpaceFamily, SpaceSpec};
use crate::young::YoungFunction;
use crate::{Error, Result};

#[derive(Debug, Serialize)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "ACCEPTANCE {}: {} — {} ({}; {:.1}s)",
            self.index,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "weight constant identities"),
    (2, "series majorant certificates"),
    (3, "extremal weight constructions"),
    (4, "norm extrapolation"),
    (5, "modular extrapolation"),
    (6, "A-infinity extrapolation"),
    (7, "Young function library"),
    (8, "Dirichlet certificates"),
    (9, "square function stability"),
    (10, "naive oracle equivalence"),
];

pub fn criterion(index: usize) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let (pass, detail) = match index {
        1 => criterion_identities()?,
        2 => criterion_series()?,
        3 => criterion_builds()?,
        4 => criterion_norm_extrapolation()?,
        5 => criterion_modular_extrapolation()?,
        6 => criterion_ainf_extrapolation()?,
        7 => criterion_young()?,
        8 => criterion_dirichlet()?,
        9 => criterion_square_function()?,
        10 => criterion_oracles()?,
        _ => return Err(Error::invalid("criterion", format!("no criterion {index}"))),
    };
    Ok(CriterionOutcome {
        index,
        name: CRITERIA[index - 1].1,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Run the full battery for a named preset.
pub fn run_preset(preset: &str) -> Result<Vec<CriterionOutcome>> {
    if preset != "paper-core" {
        return Err(Error::invalid("preset", format!("unknown preset `{preset}`")));
    }
    (1..=10).map(criterion).collect()
}

fn line(n: usize) -> Result<SpaceRef> {
    MeasureSpace::line(n, 1.0 / n as f64)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn conj(p: f64) -> f64 {
    p / (p - 1.0)
}

// --- 1: exact identities and per-box inequalities over a large battery ----

fn smooth_weight(space: &SpaceRef, k: f64, phase: f64) -> Result<Weight> {
    let vals = (0..space.len())
        .map(|i| (1.2 * (k * space.center_x(i) + phase).sin()).exp())
        .collect();
    Weight::new(GridFunction::new(space.clone(), vals)?)
}

fn criterion_identities() -> Result<(bool, String)> {
    let s = line(256)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let mut max_id_err = 0.0f64;
    let mut violations = 0usize;
    let mut slowest = 0.0f64;
    for i in 0..100usize {
        let t0 = Instant::now();
        let p = [1.5, 2.0, 3.0][i % 3];
        let w = match i % 4 {
            0 => make_power_weight(&s, -0.95 + 2.9 * (i as f64 / 99.0))?,
            1 => make_random_a1ish(&s, &basis, 1000 + i as u64, if i % 8 < 4 { 0.3 } else { 0.7 })?,
            2 => {
                let w1 = make_random_a1ish(&s, &basis, 2000 + i as u64, 0.5)?;
                let w2 = make_random_a1ish(&s, &basis, 3000 + i as u64, 0.5)?;
                w1.mul(&w2.pow(1.0 - p))?
            }
            _ => smooth_weight(&s, 2.0 + i as f64 / 7.0, i as f64)?,
        };
        let pc = conj(p);
        let ap = ap_constant(&w, &basis, p)?.value;
        let dual = ap_constant(&w.pow(1.0 - pc), &basis, pc)?.value;
        max_id_err = max_id_err.max(rel_err(dual, ap.powf(1.0 / (p - 1.0))));
        let q = p + 1.0;
        let apq = apq_constant(&w, &basis, p, q)?.value;
        let lifted = ap_constant(&w.pow(q), &basis, 1.0 + q / pc)?.value;
        max_id_err = max_id_err.max(rel_err(lifted, apq));
        let flipped = apq_constant(&w.recip(), &basis, conj(q), pc)?.value;
        max_id_err = max_id_err.max(rel_err(flipped, apq.powf(pc / q)));
        // one-sided comparisons: zero violations expected
        let w1 = make_random_a1ish(&s, &basis, 4000 + i as u64, 0.4)?;
        let w2 = make_random_a1ish(&s, &basis, 5000 + i as u64, 0.4)?;
        let prod = w1.mul(&w2.pow(1.0 - p))?;
        let bound = a1_constant(&w1, &basis)?.value * a1_constant(&w2, &basis)?.value.powf(p - 1.0);
        if ap_constant(&prod, &basis, p)?.value > bound * (1.0 + 1e-10) {
            violations += 1;
        }
        let mix = Weight::new(w1.function().zip_map(w2.function(), |a, b| a.sqrt() * b.sqrt())?)?;
        let interp =
            ap_constant(&w1, &basis, p)?.value.sqrt() * ap_constant(&w2, &basis, p)?.value.sqrt();
        if ap_constant(&mix, &basis, p)?.value > interp * (1.0 + 1e-10) {
            violations += 1;
        }
        let sx = 1.5;
        let tau = sx * (p - 1.0) + 1.0;
        let jn = (ap * rh_constant(&w, &basis, sx)?.value).powf(sx);
        if ap_constant(&w.pow(sx), &basis, tau)?.value > jn * (1.0 + 1e-10) {
            violations += 1;
        }
        slowest = slowest.max(t0.elapsed().as_secs_f64());
    }
    let pass = max_id_err <= 1e-10 && violations == 0 && slowest < 5.0;
    Ok((
        pass,
        format!("100 weights, max identity error {max_id_err:.2e}, {violations} violations, slowest {slowest:.2}s"),
    ))
}

// --- 2: truncated series majorants carry their certificates ---------------

fn criterion_2_specs(s: &SpaceRef) -> Result<Vec<SpaceSpec>> {
    let n = s.len();
    let mut pieces = vec![1.5; n / 2];
    pieces.extend(vec![3.0; n - n / 2]);
    Ok(vec![
        SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, s)?,
        SpaceSpec::new(SpaceFamily::Lorentz { p: 2.0, q: 1.0 }, s)?,
        SpaceSpec::new(SpaceFamily::Orlicz { phi: YoungFunction::plog(2.0, 1.0)? }, s)?,
        SpaceSpec::new(SpaceFamily::VarExp { p: pieces }, s)?,
    ])
}

fn criterion_series() -> Result<(bool, String)> {
    let s = line(128)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let cfg = RdfConfig::default();
    let inputs = input_battery(&s, 2, 2)?;
    let mut checks = 0usize;
    let mut failed = 0usize;
    for spec in criterion_2_specs(&s)? {
        for p0 in [1.5, 2.0, 3.0] {
            for f in &inputs {
                let g = maximal(f, &basis)?;
                let build = build_ap_weight(f, &g, &spec, &basis, p0, &cfg)?;
                checks += build.checks.len();
                failed += build.checks.iter().filter(|c| !c.pass).count();
            }
        }
    }
    Ok((failed == 0, format!("{checks} series certificates, {failed} failed")))
}

// --- 3: extremal constructions on a seeded triple battery -----------------

fn criterion_builds() -> Result<(bool, String)> {
    let start = Instant::now();
    let s = line(256)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let spec = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s)?;
    let phi = YoungFunction::plog(2.0, 1.0)?;
    let one = Weight::constant(s.clone(), 1.0)?;
    let mut cfg = RdfConfig::default();
    cfg.n1 = Some(estimate_maximal_norm(&spec, &basis, false, &cfg)?.used);
    cfg.n2 = Some(estimate_maximal_norm(&spec, &basis, true, &cfg)?.used);
    let mut cfgm = RdfConfig::default();
    cfgm.n1 = Some(estimate_modular_ratio(&phi, &one, &one, &basis, false, &cfgm)?.used);
    cfgm.n2 = Some(estimate_modular_ratio(&phi, &one, &one, &basis, true, &cfgm)?.used);
    let inputs = input_battery(&s, 50, 3)?;
    let mut failed = 0usize;
    let mut max_ap = 0.0f64;
    for (i, f) in inputs.iter().enumerate() {
        let p0 = [1.5, 2.0, 3.0][i % 3];
        let g = maximal(f, &basis)?;
        let build = build_ap_weight(f, &g, &spec, &basis, p0, &cfg)?;
        if !build.passed() {
            failed += 1;
        }
        max_ap = max_ap.max(build.details.get("ap_constant").copied().unwrap_or(0.0));
        for theta in [1.0, 0.5] {
            let mb = build_modular_weight(f, &g, &phi, &one, &one, &basis, p0, theta, &cfgm)?;
            if !mb.passed() {
                failed += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failed == 0 && secs < 60.0;
    Ok((
        pass,
        format!("50 norm + 100 modular builds, {failed} failed, max [w]_Ap {max_ap:.3}, {secs:.1}s"),
    ))
}

// --- 4: norm extrapolation across space families ---------------------------

fn criterion_norm_extrapolation() -> Result<(bool, String)> {
    let start = Instant::now();
    let s = line(512)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let fam = generate_pairs(&s, &basis, &FamilyKind::Hilbert, 8, 4)?;
    let cfg = RdfConfig::default();
    let n = s.len();
    let mut pieces = vec![1.5; n / 2];
    pieces.extend(vec![3.0; n - n / 2]);
    let u = make_power_weight(&s, 0.05)?;
    let specs = vec![
        SpaceSpec::new(SpaceFamily::Lorentz { p: 3.0, q: 1.5 }, &s)?.with_u(u)?,
        SpaceSpec::new(SpaceFamily::VarExp { p: pieces }, &s)?,
        SpaceSpec::new(SpaceFamily::Orlicz { phi: YoungFunction::plog(2.0, 1.0)? }, &s)?,
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for spec in &specs {
        let rep = verify_bfs_extrapolation(&fam, spec, &basis, 2.0, &cfg)?;
        ok &= rep.verdict == Verdict::Pass;
        lines.push(format!("{}:{}", spec.name(), rep.verdict));
    }
    let vv = verify_vector_valued(&fam, &specs[0], &basis, 2.0, 2.0, &cfg)?;
    ok &= vv.verdict == Verdict::Pass;
    lines.push(format!("vector:{}", vv.verdict));
    let secs = start.elapsed().as_secs_f64();
    Ok((ok && secs < 300.0, format!("{} [{secs:.1}s]", lines.join(", "))))
}

// --- 5: modular extrapolation ----------------------------------------------

fn criterion_modular_extrapolation() -> Result<(bool, String)> {
    let start = Instant::now();
    let s = line(256)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let fam = generate_pairs(&s, &basis, &FamilyKind::Hilbert, 6, 5)?;
    let u = make_power_weight(&s, 0.05)?;
    let v = Weight::constant(s.clone(), 1.0)?;
    let cfg = RdfConfig::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for phi in [YoungFunction::power(2.0)?, YoungFunction::plog(2.0, 1.0)?] {
        let rep = verify_modular_extrapolation(&fam, &phi, &u, &v, &basis, 2.0, &cfg)?;
        let viol = rep.pairs.iter().filter(|p| !p.pass).count();
        ok &= rep.verdict == Verdict::Pass && viol == 0;
        lines.push(format!("{}: C1={:.3e}, {} violations", phi.name(), rep.constant, viol));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((ok && secs < 300.0, format!("{} [{secs:.1}s]", lines.join("; "))))
}

// --- 6: A-infinity extrapolation -------------------------------------------

fn criterion_ainf_extrapolation() -> Result<(bool, String)> {
    let s = line(256)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let u = make_power_weight(&s, 0.1)?;
    let spec = SpaceSpec::new(SpaceFamily::Lp { p: 3.0 }, &s)?.with_u(u)?;
    let fam = ainf_pair_family(&s, &basis, 6, 6)?;
    let cfg = RdfConfig::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for p in [0.5, 1.0, 2.0] {
        let rep = verify_ainf_extrapolation(&fam, &spec, &basis, p, &cfg)?;
        ok &= rep.verdict == Verdict::Pass;
        lines.push(format!("p={p}:{}", rep.verdict));
    }
    let vv = verify_ainf_vector_valued(&fam, &spec, &basis, 2.0, &cfg)?;
    ok &= vv.verdict == Verdict::Pass;
    lines.push(format!("vector:{}", vv.verdict));
    Ok((ok, lines.join(", ")))
}

// --- 7: Young function library ----------------------------------------------

fn criterion_young() -> Result<(bool, String)> {
    let phis = [
        YoungFunction::power(2.0)?,
        YoungFunction::power(3.5)?,
        YoungFunction::scaled_power(0.7, 1.5)?,
        YoungFunction::plog(2.0, 1.0)?,
        YoungFunction::plog(1.5, 1.0)?,
        YoungFunction::min_of_powers(1.2, 2.4)?,
    ];
    let mut worst_bracket = 0.0f64;
    let mut worst_index = 0.0f64;
    let mut pass = true;
    for phi in &phis {
        let bar = phi.complementary()?;
        let analytic = phi.as_power().is_some();
        let budget = if analytic { crate::tol::YOUNG_ANALYTIC_REL } else { crate::tol::YOUNG_TAB_REL };
        for k in 0..200 {
            let t = 10f64.powf(-6.0 + 12.0 * k as f64 / 199.0);
            let prod = phi.inv(t) * bar.inv(t);
            let lo = t * (1.0 - budget);
            let hi = 2.0 * t * (1.0 + budget);
            if !(prod >= lo && prod <= hi) {
                pass = false;
            }
            worst_bracket = worst_bracket.max((prod / t - 1.5).abs() - 0.5);
        }
        let (i_lo, i_hi) = phi.dilation_indices();
        if let Some((p, _)) = phi.as_power() {
            worst_index = worst_index.max((i_lo - p).abs().max((i_hi - p).abs()));
            if (i_lo - p).abs() > 0.05 || (i_hi - p).abs() > 0.05 {
                pass = false;
            }
        }
        // conjugate exponent duality of the dilation indices
        let (bar_lo, _) = bar.dilation_indices();
        if i_hi.is_finite() && i_hi > 1.0 {
            let expected = conj(i_hi);
            worst_index = worst_index.max((bar_lo - expected).abs());
            if (bar_lo - expected).abs() > 0.05 {
                pass = false;
            }
        }
    }
    Ok((
        pass,
        format!(
            "{} families x 200 points, worst bracket excess {worst_bracket:.2e}, worst index error {worst_index:.3}",
            phis.len()
        ),
    ))
}

// --- 8: Dirichlet certificates ----------------------------------------------

fn criterion_dirichlet() -> Result<(bool, String)> {
    let start = Instant::now();
    let n = 512usize;
    let s = line(n)?;
    let basis = enumerate(&s, BasisKind::Intervals)?;
    let spec = SpaceSpec::new(SpaceFamily::Lorentz { p: 2.0, q: 1.0 }, &s)?;
    let cone = ConeSpec::geometric(1.0, 0.5 / n as f64, 2.0, 24)?;
    let cfg = RdfConfig::default();
    let mut ok = true;
    let one = GridFunction::constant(s.clone(), 1.0)?;
    let (_, cert) = solve_dirichlet(&one, &spec, &cone, &basis, &cfg)?;
    ok &= cert.verdict == Verdict::Pass;
    let conserved =
        (cert.details["norm_f"] - cert.details["norm_nk"]).abs() / cert.details["norm_f"];
    ok &= conserved <= 1e-12;
    let inputs = input_battery(&s, 20, 8)?;
    let mut fails = 0usize;
    for f in &inputs {
        let (_, cert) = solve_dirichlet(f, &spec, &cone, &basis, &cfg)?;
        if cert.verdict != Verdict::Pass {
            fails += 1;
        }
    }
    let phi = YoungFunction::plog(2.0, 1.0)?;
    let u = Weight::constant(s.clone(), 1.0)?;
    let v = Weight::constant(s.clone(), 1.0)?;
    for f in inputs.iter().take(5) {
        let (_, cert) = solve_dirichlet_modular(f, &phi, &u, &v, &cone, &basis, &cfg)?;
        if cert.verdict != Verdict::Pass {
            fails += 1;
        }
    }
    ok &= fails == 0;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        ok,
        format!("20 norm + 5 modular data, {fails} failed, constant-datum gap {conserved:.2e} [{secs:.1}s]"),
    ))
}

// --- 9: square function stability -------------------------------------------

fn criterion_square_function() -> Result<(bool, String)> {
    let n = 512usize;
    let lebesgue = line(n)?;
    let fractional = make_order_m_measure(n, 0.7)?;
    let mut worst = 0.0f64;
    for (space, m) in [(lebesgue, 1.0), (fractional, 0.7)] {
        let basis = enumerate(&space, BasisKind::Intervals)?;
        let mut fs = Vec::new();
        // plateau with smoothstep edges: macro-scale but regular enough that
        // the truncated band energy is essentially exhausted by t >= 0.025
        let edge = |z: f64| {
            let z = z.clamp(0.0, 1.0);
            z * z * (3.0 - 2.0 * z)
        };
        fs.push(GridFunction::new(
            space.clone(),
            (0..n)
                .map(|i| {
                    let x = space.center_x(i);
                    edge((x - 0.25) / 0.08) * edge((0.75 - x) / 0.08)
                })
                .collect(),
        )?);
        fs.push(GridFunction::new(
            space.clone(),
            (0..n)
                .map(|i| {
                    let z = (space.center_x(i) - 0.4) / 0.12;
                    (-z * z).exp()
                })
                .collect(),
        )?);
        fs.push(GridFunction::new(
            space.clone(),
            (0..n)
                .map(|i| (1.0 - (2.0 * space.center_x(i) - 1.0).abs()).max(0.0))
                .collect(),
        )?);
        let mut ws = vec![
            make_power_weight(&space, -0.3)?,
            make_power_weight(&space, 0.0)?,
            make_power_weight(&space, 0.25)?,
            make_power_weight(&space, 0.45)?,
        ];
        ws.push(make_random_a1ish(&space, &basis, 91, 0.4)?);
        ws.push(make_random_a1ish(&space, &basis, 92, 0.4)?);
        for f in &fs {
            let gs: Vec<GridFunction> = [0.1, 0.05, 0.025]
                .iter()
                .map(|&t0| square_function(f, t0, m))
                .collect::<Result<_>>()?;
            for w in &ws {
                let mut ratios = Vec::new();
                for g in &gs {
                    ratios.push(lp_norm(g, 2.0, w)? / lp_norm(f, 2.0, w)?);
                }
                let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
                worst = worst.max(hi / lo - 1.0);
            }
        }
    }
    Ok((worst <= 0.10, format!("max ratio drift {:.1}% across t0 refinements", worst * 100.0)))
}

// --- 10: naive oracle equivalence --------------------------------------------

fn naive_avg(vals: &[f64], masses: &[f64], a: usize, b: usize, pow: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in a..=b {
        num += vals[i].powf(pow) * masses[i];
        den += masses[i];
    }
    num / den
}

fn naive_ap(w: &[f64], mu: &[f64], p: f64) -> f64 {
    let n = w.len();
    let mut sup = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let left = naive_avg(w, mu, a, b, 1.0);
            let right = naive_avg(w, mu, a, b, 1.0 - conj(p));
            sup = sup.max(left * right.powf(p - 1.0));
        }
    }
    sup
}

fn naive_a1(w: &[f64], mu: &[f64]) -> f64 {
    let n = w.len();
    let mut sup = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let avg = naive_avg(w, mu, a, b, 1.0);
            let mut inf = f64::INFINITY;
            for i in a..=b {
                inf = inf.min(w[i]);
            }
            sup = sup.max(avg / inf);
        }
    }
    sup
}

fn naive_rh(w: &[f64], mu: &[f64], s: f64) -> f64 {
    let n = w.len();
    let mut sup = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let hi = naive_avg(w, mu, a, b, s).powf(1.0 / s);
            let lo = naive_avg(w, mu, a, b, 1.0);
            sup = sup.max(hi / lo);
        }
    }
    sup
}

fn naive_apq(w: &[f64], mu: &[f64], p: f64, q: f64) -> f64 {
    let n = w.len();
    let pc = conj(p);
    let mut sup = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let hi = naive_avg(w, mu, a, b, q);
            let lo = naive_avg(w, mu, a, b, -pc);
            sup = sup.max(hi * lo.powf(q / pc));
        }
    }
    sup
}

fn naive_bmo(f: &[f64], mu: &[f64]) -> f64 {
    let n = f.len();
    let mut sup = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let mean = naive_avg(f, mu, a, b, 1.0);
            let mut dev = 0.0;
            let mut den = 0.0;
            for i in a..=b {
                dev += (f[i] - mean).abs() * mu[i];
                den += mu[i];
            }
            sup = sup.max(dev / den);
        }
    }
    sup
}

fn naive_bisect(hi: f64, ok: impl Fn(f64) -> bool) -> f64 {
    let mut lo = hi * 1e-9;
    let mut hi = hi;
    while !ok(hi) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-14 * hi {
            break;
        }
    }
    hi
}

fn criterion_oracles() -> Result<(bool, String)> {
    use rand::{Rng, SeedableRng};
    let mut worst = 0.0f64;
    for &n in &[8usize, 16] {
        let s = line(n)?;
        let basis = enumerate(&s, BasisKind::Intervals)?;
        let mu: Vec<f64> = (0..n).map(|i| s.mass(i)).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40 + n as u64);
        let wv: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..4.0f64)).collect();
        let w = Weight::new(GridFunction::new(s.clone(), wv.clone())?)?;
        let bv: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0f64)).collect();
        let b = GridFunction::new(s.clone(), bv.clone())?;
        let fv: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0f64)).collect();
        let f = GridFunction::new(s.clone(), fv.clone())?;
        worst = worst.max(rel_err(ap_constant(&w, &basis, 1.7)?.value, naive_ap(&wv, &mu, 1.7)));
        worst = worst.max(rel_err(a1_constant(&w, &basis)?.value, naive_a1(&wv, &mu)));
        worst = worst.max(rel_err(rh_constant(&w, &basis, 2.5)?.value, naive_rh(&wv, &mu, 2.5)));
        worst =
            worst.max(rel_err(apq_constant(&w, &basis, 2.0, 3.0)?.value, naive_apq(&wv, &mu, 2.0, 3.0)));
        worst = worst.max(rel_err(bmo_norm(&b, &basis)?.value, naive_bmo(&bv, &mu)));
        // norms, with a nontrivial underlying v
        let vv: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0f64)).collect();
        let v = Weight::new(GridFunction::new(s.clone(), vv.clone())?)?;
        let lp = SpaceSpec::with_weights(
            SpaceFamily::Lp { p: 2.3 },
            Weight::constant(s.clone(), 1.0)?,
            v.clone(),
        )?;
        let naive_lp = fv
            .iter()
            .enumerate()
            .map(|(i, &x)| x.abs().powf(2.3) * vv[i] * mu[i])
            .sum::<f64>()
            .powf(1.0 / 2.3);
        worst = worst.max(rel_err(lp.base_norm(&f)?, naive_lp));
        let lorentz = SpaceSpec::with_weights(
            SpaceFamily::Lorentz { p: 2.0, q: 1.3 },
            Weight::constant(s.clone(), 1.0)?,
            v.clone(),
        )?;
        let mut cells: Vec<(f64, f64)> = (0..n).map(|i| (fv[i].abs(), vv[i] * mu[i])).collect();
        cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let (p, q) = (2.0, 1.3);
        let mut acc = 0.0;
        let mut cum = 0.0;
        let mut prev = 0.0f64;
        let mut k = 0;
        while k < cells.len() {
            let a = cells[k].0;
            while k < cells.len() && cells[k].0 == a {
                cum += cells[k].1;
                k += 1;
            }
            if a > 0.0 {
                acc += a.powf(q) * (p / q) * (cum.powf(q / p) - prev.powf(q / p));
            }
            prev = cum;
        }
        worst = worst.max(rel_err(lorentz.base_norm(&f)?, acc.powf(1.0 / q)));
        let phi = YoungFunction::plog(2.0, 1.0)?;
        let orlicz = SpaceSpec::with_weights(
            SpaceFamily::Orlicz { phi: phi.clone() },
            Weight::constant(s.clone(), 1.0)?,
            v.clone(),
        )?;
        let peak = f.max_abs();
        let naive_orl = naive_bisect(peak, |lam| {
            (0..n).map(|i| phi.eval(fv[i].abs() / lam) * vv[i] * mu[i]).sum::<f64>() <= 1.0
        });
        worst = worst.max(rel_err(orlicz.base_norm(&f)?, naive_orl));
        let ps: Vec<f64> = (0..n).map(|_| rng.random_range(1.5..3.0f64)).collect();
        let varexp = SpaceSpec::with_weights(
            SpaceFamily::VarExp { p: ps.clone() },
            Weight::constant(s.clone(), 1.0)?,
            v.clone(),
        )?;
        let naive_ve = naive_bisect(peak, |lam| {
            (0..n)
                .map(|i| (fv[i].abs() / lam).powf(ps[i]) * vv[i] * mu[i])
                .sum::<f64>()
                <= 1.0
        });
        worst = worst.max(rel_err(varexp.base_norm(&f)?, naive_ve));
    }
    Ok((worst <= 1e-10, format!("max relative deviation {worst:.2e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_criterion_is_clean() {
        let out = criterion(10).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn young_criterion_is_clean() {
        let out = criterion(7).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn unknown_preset_is_rejected() {
        assert!(run_preset("bogus").is_err());
    }
}
