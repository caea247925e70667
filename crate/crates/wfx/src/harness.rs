//! Extrapolation harness: generates operator pair families, calibrates the
//! scalar hypothesis constant empirically on a weight battery, and checks the
//! extrapolated conclusion with the certified constants.
//!
//! A verification never "proves" the hypothesis; it estimates the hypothesis
//! envelope on a frozen battery and then tests the conclusion inequality
//! pair by pair. Estimation failures surface as `Inconclusive`, never as
//! `Fail`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::Basis;
use crate::maximal::{iterate_maximal, maximal};
use crate::muckenhoupt::{ainf_constant, ap_constant, bmo_norm, make_power_weight, make_random_a1ish, rh_constant};
use crate::operators::{
    calderon_commutator, commutator, hilbert, nontangential_maximal, poisson_extend,
    square_function, ConeSpec,
};
use crate::rdf::{
    build_ap_weight, build_limited_range_weight, build_modular_weight, estimate_maximal_norm,
    estimate_modular_ratio, lp_norm, RdfConfig,
};
use crate::report::Verdict;
use crate::space::{GridFunction, SpaceRef, Weight};
use crate::spaces::SpaceSpec;
use crate::young::{modular, YoungFamily, YoungFunction};
use crate::{tol, Error, Result};

/// Built-in pair generators. Each produces (f, g) with the scalar weighted
/// inequality `||f||_{Lp(w)} <= Psi([w]) ||g||_{Lp(w)}` expected to hold on
/// the calibration battery.
#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// (|phi|, |phi|): the hypothesis envelope is exactly 1.
    Identity,
    /// (|H phi|, |phi|) for the discrete Hilbert transform.
    Hilbert,
    /// (M phi, |phi|).
    MaximalPair,
    /// (|C_b^k phi|, M^{k+1} phi) with a fixed BMO-normalized symbol.
    Commutator { k: u32 },
    /// (|C_F phi|, M phi) for a fixed Lipschitz profile.
    Calderon,
    /// (g phi, M phi) for the truncated square function of order m.
    SquareFunction { t0: f64, m: f64 },
    /// (N_kappa(ext phi), |phi|) through the Poisson extension.
    Poisson { kappa: f64 },
    /// (|H phi|, M phi): ratio controlled by the A_inf characteristic alone.
    AinfPair,
}

impl FamilyKind {
    pub fn label(&self) -> String {
        match self {
            FamilyKind::Identity => "identity".into(),
            FamilyKind::Hilbert => "hilbert".into(),
            FamilyKind::MaximalPair => "maximal-pair".into(),
            FamilyKind::Commutator { k } => format!("commutator-k{k}"),
            FamilyKind::Calderon => "calderon".into(),
            FamilyKind::SquareFunction { t0, m } => format!("sqfn-t0{t0}-m{m}"),
            FamilyKind::Poisson { kappa } => format!("poisson-k{kappa}"),
            FamilyKind::AinfPair => "ainf-pair".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairFamily {
    pub name: String,
    pub pairs: Vec<(GridFunction, GridFunction)>,
}

impl PairFamily {
    pub fn from_pairs(name: impl Into<String>, pairs: Vec<(GridFunction, GridFunction)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySet);
        }
        for (f, g) in &pairs {
            if !f.space().same_grid(g.space()) {
                return Err(Error::SpaceMismatch("pair on mismatched grids".into()));
            }
        }
        Ok(PairFamily { name: name.into(), pairs })
    }
}

pub(crate) fn input_battery(space: &SpaceRef, count: usize, seed: u64) -> Result<Vec<GridFunction>> {
    let n = space.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a19_c0de);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let f = match idx % 4 {
            0 => {
                let w = rng.random_range(n.div_ceil(32)..(n / 4).max(2)).max(1);
                let lo = rng.random_range(0..n - w);
                GridFunction::indicator(space.clone(), &(lo..lo + w).collect::<Vec<_>>())?
            }
            1 => {
                let c = rng.random_range(0.2..0.8);
                let s = rng.random_range(0.02..0.15);
                GridFunction::new(
                    space.clone(),
                    (0..n)
                        .map(|i| {
                            let z = (space.center_x(i) - c) / s;
                            (-z * z).exp()
                        })
                        .collect(),
                )?
            }
            2 => GridFunction::new(
                space.clone(),
                (0..n).map(|_| rng.random_range(0.0..1.0f64) + 0.05).collect(),
            )?,
            _ => {
                let om = rng.random_range(4.0..40.0f64);
                GridFunction::new(
                    space.clone(),
                    (0..n)
                        .map(|i| {
                            let x = space.center_x(i);
                            let z = (x - 0.5) / 0.3;
                            (om * x).sin() * (-z * z).exp()
                        })
                        .collect(),
                )?
            }
        };
        out.push(f);
    }
    Ok(out)
}

/// Deterministic battery of (f, g) pairs for a built-in family.
pub fn generate_pairs(
    space: &SpaceRef,
    basis: &Basis,
    kind: &FamilyKind,
    count: usize,
    seed: u64,
) -> Result<PairFamily> {
    if count == 0 {
        return Err(Error::EmptySet);
    }
    let inputs = input_battery(space, count, seed)?;
    let n = space.len();
    // family-fixed symbols
    let symbol = match kind {
        FamilyKind::Commutator { .. } => {
            let raw = GridFunction::new(
                space.clone(),
                (0..n)
                    .map(|i| (space.center_x(i) - 0.4321).abs().max(1e-9).ln())
                    .collect(),
            )?;
            let nb = bmo_norm(&raw, basis)?.value;
            Some(raw.scale(1.0 / nb)?)
        }
        FamilyKind::Calderon => Some(GridFunction::new(
            space.clone(),
            (0..n)
                .map(|i| {
                    let x = space.center_x(i);
                    0.6 * (x - 0.45).abs() + 0.1 * (3.0 * x).sin()
                })
                .collect(),
        )?),
        _ => None,
    };
    let cone = match kind {
        FamilyKind::Poisson { kappa } => Some(ConeSpec::geometric(
            *kappa,
            0.5 * space.cell_width(),
            2.0,
            24,
        )?),
        _ => None,
    };
    let mut pairs = Vec::with_capacity(count);
    for phi in inputs {
        let pair = match kind {
            FamilyKind::Identity => (phi.abs(), phi.abs()),
            FamilyKind::Hilbert => (hilbert(&phi)?.abs(), phi.abs()),
            FamilyKind::MaximalPair => (maximal(&phi, basis)?, phi.abs()),
            FamilyKind::Commutator { k } => (
                commutator(symbol.as_ref().unwrap(), *k, &phi)?.abs(),
                iterate_maximal(&phi, basis, *k as usize + 1)?,
            ),
            FamilyKind::Calderon => (
                calderon_commutator(symbol.as_ref().unwrap(), &phi)?.0.abs(),
                maximal(&phi, basis)?,
            ),
            FamilyKind::SquareFunction { t0, m } => {
                (square_function(&phi, *t0, *m)?, maximal(&phi, basis)?)
            }
            FamilyKind::Poisson { kappa } => {
                let field = poisson_extend(&phi, &cone.as_ref().unwrap().ts)?;
                (nontangential_maximal(&field, *kappa)?, phi.abs())
            }
            FamilyKind::AinfPair => (hilbert(&phi)?.abs(), maximal(&phi, basis)?),
        };
        pairs.push(pair);
    }
    PairFamily::from_pairs(kind.label(), pairs)
}

/// Monotone envelope of observed (characteristic, ratio) points: the running
/// max over sorted characteristics, clamped below by 1. Lookup is a
/// right-continuous step function, constant beyond the data range.
#[derive(Debug, Clone, Serialize)]
pub struct PsiTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PsiTable {
    pub fn fit(points: &[(f64, f64)]) -> Result<PsiTable> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for &(x, y) in points {
            if !(x.is_finite() && x >= 1.0 - 1e-12) {
                return Err(Error::invalid("points", format!("characteristic {x} out of range")));
            }
            if !y.is_finite() {
                return Err(Error::invalid(
                    "points",
                    "hypothesis ratio is not finite on the calibration battery".to_string(),
                ));
            }
        }
        let mut pts: Vec<(f64, f64)> = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut xs: Vec<f64> = Vec::with_capacity(pts.len());
        let mut ys: Vec<f64> = Vec::with_capacity(pts.len());
        let mut run = 1.0f64;
        for (x, y) in pts {
            run = run.max(y);
            if xs.last().is_some_and(|&last| last == x) {
                *ys.last_mut().unwrap() = run;
            } else {
                xs.push(x);
                ys.push(run);
            }
        }
        Ok(PsiTable { xs, ys })
    }

    /// Value at the largest knot <= x (first knot's value below the range,
    /// last knot's value above it).
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&t| t <= x);
        if k == 0 {
            self.ys[0]
        } else {
            self.ys[k - 1]
        }
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn max_value(&self) -> f64 {
        *self.ys.last().unwrap()
    }
}

fn ratio_table(
    family: &PairFamily,
    weights: &[Weight],
    x_of: impl Fn(&Weight) -> Result<f64>,
    exponent: f64,
    power: f64,
) -> Result<PsiTable> {
    let mut pts = Vec::with_capacity(weights.len());
    for w in weights {
        let x = x_of(w)?;
        let mut y = 1.0f64;
        for (f, g) in &family.pairs {
            let nf = lp_norm(f, exponent, w)?;
            let ng = lp_norm(g, exponent, w)?;
            if nf == 0.0 {
                continue;
            }
            if ng == 0.0 || !(nf / ng).is_finite() {
                return Err(Error::invalid(
                    "family",
                    "hypothesis ratio is infinite on a battery weight".to_string(),
                ));
            }
            y = y.max((nf / ng).powf(power));
        }
        pts.push((x, y));
    }
    PsiTable::fit(&pts)
}

/// Envelope of `||f||_{Lp0(w)} / ||g||_{Lp0(w)}` against the A_{p0}
/// characteristic over the supplied battery.
pub fn calibrate_psi(
    family: &PairFamily,
    basis: &Basis,
    p0: f64,
    weights: &[Weight],
) -> Result<PsiTable> {
    if !(p0.is_finite() && p0 >= 1.0) {
        return Err(Error::invalid("p0", format!("need p0 >= 1, got {p0}")));
    }
    ratio_table(family, weights, |w| Ok(ap_constant(w, basis, p0)?.value), p0, 1.0)
}

/// Fixed calibration battery: 12 power weights spanning the class, 8 weights
/// from the extremal series construction, 8 random products of A1-type
/// factors.
pub fn weight_battery(
    spec: &SpaceSpec,
    basis: &Basis,
    p0: f64,
    family: &PairFamily,
    cfg: &RdfConfig,
) -> Result<Vec<Weight>> {
    let space = spec.space();
    let mut out = Vec::with_capacity(28);
    let lo = -0.9;
    let hi = if p0 > 1.0 { 0.9 * (p0 - 1.0) } else { 0.45 };
    for j in 0..12 {
        let a = lo + (hi - lo) * j as f64 / 11.0;
        out.push(make_power_weight(space, a)?);
    }
    for j in 0..8 {
        let (f, g) = &family.pairs[j % family.pairs.len()];
        out.push(build_ap_weight(f, g, spec, basis, p0, cfg)?.w);
    }
    let seed = cfg.seed ^ 0xba77_e21;
    for j in 0..8u64 {
        let delta = if j % 2 == 0 { 0.3 } else { 0.7 };
        let w1 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j), delta)?;
        let w2 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j + 1), delta)?;
        out.push(w1.mul(&w2.pow(1.0 - p0))?);
    }
    Ok(out)
}

fn modular_weight_battery(
    phi: &YoungFunction,
    u: &Weight,
    v: &Weight,
    basis: &Basis,
    p0: f64,
    family: &PairFamily,
    cfg: &RdfConfig,
) -> Result<Vec<Weight>> {
    let space = u.space();
    let mut out = Vec::with_capacity(28);
    let lo = -0.9;
    let hi = if p0 > 1.0 { 0.9 * (p0 - 1.0) } else { 0.45 };
    for j in 0..12 {
        let a = lo + (hi - lo) * j as f64 / 11.0;
        out.push(make_power_weight(space, a)?);
    }
    for j in 0..8 {
        let (f, g) = &family.pairs[j % family.pairs.len()];
        out.push(build_modular_weight(f, g, phi, u, v, basis, p0, 1.0, cfg)?.w);
    }
    let seed = cfg.seed ^ 0x0d71_a2b;
    for j in 0..8u64 {
        let delta = if j % 2 == 0 { 0.3 } else { 0.7 };
        let w1 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j), delta)?;
        let w2 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j + 1), delta)?;
        out.push(w1.mul(&w2.pow(1.0 - p0))?);
    }
    Ok(out)
}

fn ainf_weight_battery(
    spec: &SpaceSpec,
    basis: &Basis,
    family: &PairFamily,
    cfg: &RdfConfig,
) -> Result<Vec<Weight>> {
    let space = spec.space();
    let mut out = Vec::with_capacity(28);
    for j in 0..12 {
        let a = -0.9 + 3.3 * j as f64 / 11.0;
        out.push(make_power_weight(space, a)?);
    }
    for j in 0..8 {
        let (f, g) = &family.pairs[j % family.pairs.len()];
        out.push(build_ap_weight(f, g, spec, basis, 2.0, cfg)?.w);
    }
    let seed = cfg.seed ^ 0xa1f_0;
    for j in 0..8u64 {
        let delta = if j % 2 == 0 { 0.3 } else { 0.7 };
        let w1 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j), delta)?;
        let w2 = make_random_a1ish(space, basis, seed.wrapping_add(2 * j + 1), delta)?;
        out.push(w1.mul(&w2.recip())?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOutcome {
    pub index: usize,
    pub lhs: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ExtrapolationReport {
    pub family: String,
    pub mode: String,
    pub verdict: Verdict,
    /// certified conclusion constant (without the reported slack factor)
    pub constant: f64,
    /// multiplicative tolerance applied on the right-hand side: associate
    /// duality slack times the series truncation allowance
    pub slack: f64,
    pub psi_arg: f64,
    pub psi_value: f64,
    pub psi: PsiTable,
    pub n1: Option<f64>,
    pub n2: Option<f64>,
    pub pairs: Vec<PairOutcome>,
    pub worst_index: Option<usize>,
    pub details: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ExtrapolationReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

fn conclude(
    family: &str,
    mode: &str,
    hypothesis_ok: bool,
    constant: f64,
    slack: f64,
    psi_arg: f64,
    psi: PsiTable,
    n1: Option<f64>,
    n2: Option<f64>,
    checks: Vec<(f64, f64)>,
    details: BTreeMap<String, f64>,
    notes: Vec<String>,
) -> ExtrapolationReport {
    let mut pairs = Vec::with_capacity(checks.len());
    let mut worst: Option<(usize, f64)> = None;
    for (index, (lhs, bound)) in checks.into_iter().enumerate() {
        let pass = lhs <= bound * (1.0 + tol::NORM_CHECK_REL);
        let sev = if bound > 0.0 { lhs / bound } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        if worst.is_none_or(|(_, s)| sev > s) {
            worst = Some((index, sev));
        }
        pairs.push(PairOutcome { index, lhs, bound, pass });
    }
    let all_pass = pairs.iter().all(|p| p.pass);
    let verdict = if !hypothesis_ok {
        Verdict::Inconclusive
    } else if all_pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let psi_value = psi.eval(psi_arg);
    ExtrapolationReport {
        family: family.to_string(),
        mode: mode.to_string(),
        verdict,
        constant,
        slack,
        psi_arg,
        psi_value,
        psi,
        n1,
        n2,
        pairs,
        worst_index: worst.map(|(i, _)| i),
        details,
        notes,
    }
}

fn front_factor(p0: f64) -> f64 {
    // 2^{3 + 2/p0'}; the exponent degenerates to 3 at p0 = 1
    2f64.powf(3.0 + 2.0 * (p0 - 1.0) / p0)
}

fn psi_argument(p0: f64, n1: f64, n2: f64) -> f64 {
    2f64.powf(p0) * n1.powf(p0 - 1.0) * n2
}

/// Norm-to-norm extrapolation check: from the empirical Lp0(w) envelope to
/// the weighted-space inequality for every pair of the family.
pub fn verify_bfs_extrapolation(
    family: &PairFamily,
    spec: &SpaceSpec,
    basis: &Basis,
    p0: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(p0.is_finite() && p0 >= 1.0) {
        return Err(Error::invalid("p0", format!("need p0 >= 1, got {p0}")));
    }
    let mut notes = Vec::new();
    let mut hypothesis_ok = true;
    let (n1, n2);
    let mut cfg2 = cfg.clone();
    if p0 > 1.0 {
        let e1 = estimate_maximal_norm(spec, basis, false, cfg)?;
        if !e1.converged {
            hypothesis_ok = false;
            notes.push("maximal operator norm estimate did not stabilize".to_string());
        }
        n1 = e1.used;
    } else {
        n1 = 1.0;
    }
    let e2 = estimate_maximal_norm(spec, basis, true, cfg)?;
    if !e2.converged {
        hypothesis_ok = false;
        notes.push("dual maximal operator norm estimate did not stabilize".to_string());
    }
    n2 = e2.used;
    cfg2.n1 = Some(n1);
    cfg2.n2 = Some(n2);
    let weights = weight_battery(spec, basis, p0, family, &cfg2)?;
    let psi = calibrate_psi(family, basis, p0, &weights)?;
    let arg = psi_argument(p0, n1, n2);
    let constant = front_factor(p0) * psi.eval(arg);
    let slack = spec.assoc_slack() * (1.0 + tol::rdf_tail(cfg.k));
    let mut checks = Vec::with_capacity(family.pairs.len());
    for (f, g) in &family.pairs {
        let lhs = spec.norm(f)?;
        let rhs = spec.norm(g)?;
        checks.push((lhs, constant * slack * rhs));
    }
    let mut details = BTreeMap::new();
    details.insert("p0".to_string(), p0);
    details.insert("battery_size".to_string(), weights.len() as f64);
    Ok(conclude(
        &family.name,
        "bfs",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        if p0 > 1.0 { Some(n1) } else { None },
        Some(n2),
        checks,
        details,
        notes,
    ))
}

fn aggregate_lq(
    pairs: &[(GridFunction, GridFunction)],
    q: f64,
    batch: usize,
) -> Result<Vec<(GridFunction, GridFunction)>> {
    let mut out = Vec::new();
    for chunk in pairs.chunks(batch.max(1)) {
        let space = chunk[0].0.space().clone();
        let mut accf = vec![0.0f64; space.len()];
        let mut accg = vec![0.0f64; space.len()];
        for (f, g) in chunk {
            for (i, &x) in f.values().iter().enumerate() {
                accf[i] += x.abs().powf(q);
            }
            for (i, &x) in g.values().iter().enumerate() {
                accg[i] += x.abs().powf(q);
            }
        }
        let inv = 1.0 / q;
        out.push((
            GridFunction::new(space.clone(), accf.into_iter().map(|t| t.powf(inv)).collect())?,
            GridFunction::new(space, accg.into_iter().map(|t| t.powf(inv)).collect())?,
        ));
    }
    Ok(out)
}

/// Vector-valued conclusion on l^q aggregates of the family, in batches of 8.
/// At q = p0 the scalar envelope certifies the same constant; otherwise the
/// envelope is recalibrated at q on the aggregates and the verdict is
/// conditional on maximal-operator control at that exponent.
pub fn verify_vector_valued(
    family: &PairFamily,
    spec: &SpaceSpec,
    basis: &Basis,
    p0: f64,
    q: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::invalid("q", format!("need q >= 1, got {q}")));
    }
    let agg = PairFamily::from_pairs(
        format!("{}-l{q}", family.name),
        aggregate_lq(&family.pairs, q, 8)?,
    )?;
    let calibration_family = if (q - p0).abs() < 1e-12 { family } else { &agg };
    let mut notes = Vec::new();
    let mut hypothesis_ok = true;
    let mut cfg2 = cfg.clone();
    let n1 = if q > 1.0 {
        let e1 = estimate_maximal_norm(spec, basis, false, cfg)?;
        if !e1.converged {
            hypothesis_ok = false;
            notes.push("maximal operator norm estimate did not stabilize".to_string());
        }
        e1.used
    } else {
        1.0
    };
    let e2 = estimate_maximal_norm(spec, basis, true, cfg)?;
    if !e2.converged {
        hypothesis_ok = false;
        notes.push("dual maximal operator norm estimate did not stabilize".to_string());
    }
    let n2 = e2.used;
    cfg2.n1 = Some(n1);
    cfg2.n2 = Some(n2);
    if (q - p0).abs() >= 1e-12 {
        notes.push(format!(
            "envelope recalibrated at the aggregate exponent {q}; conclusion conditional on maximal-operator control at that exponent"
        ));
    }
    let weights = weight_battery(spec, basis, q, calibration_family, &cfg2)?;
    let psi = calibrate_psi(calibration_family, basis, q, &weights)?;
    let arg = psi_argument(q, n1, n2);
    let constant = front_factor(q) * psi.eval(arg);
    let slack = spec.assoc_slack() * (1.0 + tol::rdf_tail(cfg.k));
    let mut checks = Vec::with_capacity(agg.pairs.len());
    for (f, g) in &agg.pairs {
        checks.push((spec.norm(f)?, constant * slack * spec.norm(g)?));
    }
    let mut details = BTreeMap::new();
    details.insert("p0".to_string(), p0);
    details.insert("q".to_string(), q);
    details.insert("batches".to_string(), agg.pairs.len() as f64);
    Ok(conclude(
        &agg.name,
        "vector",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        if q > 1.0 { Some(n1) } else { None },
        Some(n2),
        checks,
        details,
        notes,
    ))
}

/// Built-in family for A_inf-type verification.
pub fn ainf_pair_family(
    space: &SpaceRef,
    basis: &Basis,
    count: usize,
    seed: u64,
) -> Result<PairFamily> {
    generate_pairs(space, basis, &FamilyKind::AinfPair, count, seed)
}

/// A_inf extrapolation: the dual maximal hypothesis alone moves the
/// empirical A_inf envelope at exponent p to the weighted space inequality
/// between p-th powers.
pub fn verify_ainf_extrapolation(
    family: &PairFamily,
    spec: &SpaceSpec,
    basis: &Basis,
    p: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::invalid("p", format!("need p > 0, got {p}")));
    }
    let mut notes = Vec::new();
    let mut hypothesis_ok = true;
    let e2 = estimate_maximal_norm(spec, basis, true, cfg)?;
    if !e2.converged {
        hypothesis_ok = false;
        notes.push("dual maximal operator norm estimate did not stabilize".to_string());
    }
    let n2 = e2.used;
    let mut cfg2 = cfg.clone();
    let e1 = estimate_maximal_norm(spec, basis, false, cfg)?;
    cfg2.n1 = Some(e1.used);
    cfg2.n2 = Some(n2);
    let weights = ainf_weight_battery(spec, basis, family, &cfg2)?;
    let psi = ratio_table(
        family,
        &weights,
        |w| Ok(ainf_constant(w, basis, tol::AINF_P_MAX)?.value),
        p,
        p,
    )?;
    let arg = 2.0 * n2;
    let constant = 8.0 * psi.eval(arg);
    let slack = spec.assoc_slack() * (1.0 + tol::rdf_tail(cfg.k));
    let mut checks = Vec::with_capacity(family.pairs.len());
    for (f, g) in &family.pairs {
        let fp = f.map(|t| t.abs().powf(p))?;
        let gp = g.map(|t| t.abs().powf(p))?;
        checks.push((spec.norm(&fp)?, constant * slack * spec.norm(&gp)?));
    }
    let mut details = BTreeMap::new();
    details.insert("p".to_string(), p);
    details.insert("battery_size".to_string(), weights.len() as f64);
    Ok(conclude(
        &family.name,
        "ainf",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        None,
        Some(n2),
        checks,
        details,
        notes,
    ))
}

/// Vector-valued A_inf conclusion: aggregate at exponent q, then apply the
/// scalar route at exponent 1 to the aggregated family.
pub fn verify_ainf_vector_valued(
    family: &PairFamily,
    spec: &SpaceSpec,
    basis: &Basis,
    q: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::invalid("q", format!("need q > 0, got {q}")));
    }
    let agg = PairFamily::from_pairs(
        format!("{}-l{q}", family.name),
        aggregate_lq(&family.pairs, q, 8)?,
    )?;
    let mut rep = verify_ainf_extrapolation(&agg, spec, basis, 1.0, cfg)?;
    rep.mode = "ainf-vector".to_string();
    rep.details.insert("q".to_string(), q);
    Ok(rep)
}

fn delta2_data(phi: &YoungFunction) -> Result<(f64, f64, f64)> {
    let d2 = phi.delta2_constant()?;
    if !d2.doubling {
        return Err(Error::invalid(
            "phi",
            format!("{} does not satisfy the doubling condition required for modular extrapolation", phi.name()),
        ));
    }
    let (_, big_i) = phi.dilation_indices();
    if !(big_i.is_finite() && big_i > 0.0) {
        return Err(Error::invalid("phi", "upper dilation index unavailable".to_string()));
    }
    // smallest constant with Phi(lambda t) <= C lambda^{2I} Phi(t) across a
    // dilation grid; finite because 2I sits strictly above the growth rate
    let mut cphi = 1.0f64;
    let mut lam = 1.05f64;
    while lam <= 64.0 {
        cphi = cphi.max(phi.h_phi(lam) / lam.powf(2.0 * big_i));
        lam *= 1.15;
    }
    Ok((cphi, big_i, d2.constant))
}

fn modular_of(f: &GridFunction, u: &Weight, phi: &YoungFunction, v: &Weight) -> Result<f64> {
    let arg = f.zip_map(u.function(), |a, b| (a * b).abs())?;
    modular(&arg, phi, Some(v))
}

fn modular_slack(phi: &YoungFunction, k: usize) -> f64 {
    let tab = matches!(phi.family(), YoungFamily::Tabulated { .. });
    let rel = if tab { tol::YOUNG_TAB_REL } else { 1e-9 };
    (1.0 + rel) * (1.0 + tol::rdf_tail(k))
}

/// Modular extrapolation: the scalar Lp0(w) envelope plus modular bounds for
/// the maximal operator give a modular conclusion with constant
/// `C_Phi * max(C0, C0^{2I})`.
pub fn verify_modular_extrapolation(
    family: &PairFamily,
    phi: &YoungFunction,
    u: &Weight,
    v: &Weight,
    basis: &Basis,
    p0: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(p0.is_finite() && p0 >= 1.0) {
        return Err(Error::invalid("p0", format!("need p0 >= 1, got {p0}")));
    }
    let (cphi, big_i, doubling) = delta2_data(phi)?;
    let mut notes = Vec::new();
    let mut hypothesis_ok = true;
    let mut cfg2 = cfg.clone();
    let n1 = if p0 > 1.0 {
        let e1 = estimate_modular_ratio(phi, u, v, basis, false, cfg)?;
        if !e1.converged {
            hypothesis_ok = false;
            notes.push("modular maximal ratio estimate did not stabilize".to_string());
        }
        e1.used
    } else {
        1.0
    };
    let e2 = estimate_modular_ratio(phi, u, v, basis, true, cfg)?;
    if !e2.converged {
        hypothesis_ok = false;
        notes.push("dual modular maximal ratio estimate did not stabilize".to_string());
    }
    let n2 = e2.used;
    cfg2.n1 = Some(n1);
    cfg2.n2 = Some(n2);
    let weights = modular_weight_battery(phi, u, v, basis, p0, family, &cfg2)?;
    let psi = calibrate_psi(family, basis, p0, &weights)?;
    let arg = psi_argument(p0, n1, n2);
    let c0 = front_factor(p0) * psi.eval(arg);
    let constant = cphi * c0.max(c0.powf(2.0 * big_i));
    let slack = modular_slack(phi, cfg.k);
    let mut checks = Vec::with_capacity(family.pairs.len());
    for (f, g) in &family.pairs {
        let lhs = modular_of(f, u, phi, v)?;
        let rhs = modular_of(g, u, phi, v)?;
        checks.push((lhs, constant * slack * rhs));
    }
    let mut details = BTreeMap::new();
    details.insert("p0".to_string(), p0);
    details.insert("c0".to_string(), c0);
    details.insert("c_phi".to_string(), cphi);
    details.insert("upper_index".to_string(), big_i);
    details.insert("doubling".to_string(), doubling);
    Ok(conclude(
        &family.name,
        "modular",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        if p0 > 1.0 { Some(n1) } else { None },
        Some(n2),
        checks,
        details,
        notes,
    ))
}

/// Vector-valued modular conclusion on l^{p0} aggregates (batches of 8) with
/// the scalar envelope and constant.
pub fn verify_modular_vector_valued(
    family: &PairFamily,
    phi: &YoungFunction,
    u: &Weight,
    v: &Weight,
    basis: &Basis,
    p0: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    let agg = PairFamily::from_pairs(
        format!("{}-l{p0}", family.name),
        aggregate_lq(&family.pairs, p0, 8)?,
    )?;
    let mut rep = verify_modular_extrapolation(&agg, phi, u, v, basis, p0, cfg)?;
    rep.mode = "modular-vector".to_string();
    Ok(rep)
}

/// Modular A_inf extrapolation: dual modular hypothesis only; the envelope
/// is measured against the A_inf characteristic at exponent p and the
/// conclusion compares modulars of p-th powers.
pub fn verify_modular_ainf(
    family: &PairFamily,
    phi: &YoungFunction,
    u: &Weight,
    v: &Weight,
    basis: &Basis,
    p: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::invalid("p", format!("need p > 0, got {p}")));
    }
    let (cphi, big_i, _) = delta2_data(phi)?;
    let mut notes = Vec::new();
    let mut hypothesis_ok = true;
    let e2 = estimate_modular_ratio(phi, u, v, basis, true, cfg)?;
    if !e2.converged {
        hypothesis_ok = false;
        notes.push("dual modular maximal ratio estimate did not stabilize".to_string());
    }
    let n2 = e2.used;
    // battery via the norm-side builds on L2 over the same grid
    let lp2 = SpaceSpec::with_weights(
        crate::spaces::SpaceFamily::Lp { p: 2.0 },
        u.clone(),
        v.clone(),
    )?;
    let e1 = estimate_maximal_norm(&lp2, basis, false, cfg)?;
    let e2n = estimate_maximal_norm(&lp2, basis, true, cfg)?;
    let mut cfgb = cfg.clone();
    cfgb.n1 = Some(e1.used);
    cfgb.n2 = Some(e2n.used);
    let weights = ainf_weight_battery(&lp2, basis, family, &cfgb)?;
    let psi = ratio_table(
        family,
        &weights,
        |w| Ok(ainf_constant(w, basis, tol::AINF_P_MAX)?.value),
        p,
        p,
    )?;
    let arg = 2.0 * n2;
    let c0 = 8.0 * psi.eval(arg);
    let constant = cphi * c0.max(c0.powf(2.0 * big_i));
    let slack = modular_slack(phi, cfg.k);
    let mut checks = Vec::with_capacity(family.pairs.len());
    for (f, g) in &family.pairs {
        let fp = f.map(|t| t.abs().powf(p))?;
        let gp = g.map(|t| t.abs().powf(p))?;
        checks.push((modular_of(&fp, u, phi, v)?, constant * slack * modular_of(&gp, u, phi, v)?));
    }
    let mut details = BTreeMap::new();
    details.insert("p".to_string(), p);
    details.insert("c0".to_string(), c0);
    details.insert("c_phi".to_string(), cphi);
    details.insert("upper_index".to_string(), big_i);
    Ok(conclude(
        &family.name,
        "modular-ainf",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        None,
        Some(n2),
        checks,
        details,
        notes,
    ))
}

fn conj_exponent(p: f64) -> f64 {
    if p <= 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Limited-range extrapolation on a rearrangement-invariant lp/lorentz spec:
/// gate the multiplier condition at the space indices, calibrate the
/// envelope on an intersection-class battery parameterized by the combined
/// characteristic, and check the conclusion with the constant assembled from
/// the witness construction.
pub fn verify_limited_range(
    family: &PairFamily,
    x: &SpaceSpec,
    basis: &Basis,
    p_minus: f64,
    p_plus: f64,
    cfg: &RdfConfig,
) -> Result<ExtrapolationReport> {
    if !(p_minus > 0.0 && p_minus.is_finite() && p_plus > p_minus && p_plus.is_finite()) {
        return Err(Error::invalid(
            "range",
            format!("need 0 < p_minus < p_plus < inf, got ({p_minus}, {p_plus})"),
        ));
    }
    let (p_x, q_x) = x.boyd_indices();
    if !(p_x > p_minus && q_x < p_plus) {
        return Err(Error::invalid(
            "range",
            format!("space indices ({p_x}, {q_x}) must lie strictly inside ({p_minus}, {p_plus})"),
        ));
    }
    let mut details = BTreeMap::new();
    // multiplier condition at both space indices
    for (tag, r) in [("px", p_x), ("qx", q_x)] {
        let ur = x.u().pow(r);
        let apv = ap_constant(&ur, basis, r / p_minus)?.value;
        let rhv = rh_constant(&ur, basis, conj_exponent(p_plus / r))?.value;
        details.insert(format!("u_ap_{tag}"), apv);
        details.insert(format!("u_rh_{tag}"), rhv);
    }
    // pick a working exponent that the witness construction accepts
    let mut chosen: Option<(f64, crate::rdf::WeightBuild)> = None;
    let mut last_err: Option<Error> = None;
    for cand in [
        (p_minus * p_plus).sqrt(),
        0.5 * (p_minus + p_plus),
        p_minus * 1.25,
        p_plus * 0.8,
    ] {
        if !(cand > p_minus && cand < p_plus) {
            continue;
        }
        match build_limited_range_weight(
            &family.pairs[0].0,
            &family.pairs[0].1,
            x,
            basis,
            p_minus,
            p_plus,
            cand,
            cfg,
        ) {
            Ok(b) => {
                chosen = Some((cand, b));
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some((p_star, witness)) = chosen else {
        return Err(last_err.unwrap_or(Error::Unsupported(
            "no admissible working exponent in the range".to_string(),
        )));
    };
    let hypothesis_ok = witness.passed()
        && witness.details.get("converged").copied().unwrap_or(0.0) > 0.5;
    let mut notes = Vec::new();
    if !hypothesis_ok {
        notes.push("witness construction did not certify all series bounds".to_string());
    }
    let sigma = conj_exponent(p_plus / p_star);
    let tau = sigma * (p_star / p_minus - 1.0) + 1.0;
    // calibration battery inside the intersection class, measured by the
    // combined characteristic of w^sigma
    let space = x.space();
    let mut weights = Vec::with_capacity(24);
    let hi = (0.5 * (p_star / p_minus - 1.0)).min(0.45);
    for j in 0..12 {
        let a = -0.45 / sigma + (hi / sigma + 0.45 / sigma) * j as f64 / 11.0;
        weights.push(make_power_weight(space, a)?);
    }
    weights.push(witness.w.clone());
    for j in 0..7 {
        let (f, g) = &family.pairs[(j + 1) % family.pairs.len()];
        match build_limited_range_weight(f, g, x, basis, p_minus, p_plus, p_star, cfg) {
            Ok(b) => weights.push(b.w),
            Err(_) => weights.push(witness.w.clone()),
        }
    }
    let seed = cfg.seed ^ 0x11_e4;
    for j in 0..8u64 {
        let w1 = make_random_a1ish(space, basis, seed.wrapping_add(j), 0.3 / sigma.max(1.0))?;
        weights.push(w1);
    }
    let psi = ratio_table(
        family,
        &weights,
        |w| Ok(ap_constant(&w.pow(sigma), basis, tau)?.value),
        p_star,
        1.0,
    )?;
    let d = &witness.details;
    let (s_hat, a1, a2, r_star, c0, n1, n2) = (
        d["s"], d["alpha1"], d["alpha2"], d["r_star"], d["c0"], d["n1"], d["n2"],
    );
    let rsc = conj_exponent(r_star);
    let ef = 2f64.powf(1.0 + (1.0 + s_hat + s_hat / a1) / rsc) * c0.powf(1.0 / (rsc * a2));
    let eg = 2f64.powf(1.0 + s_hat + s_hat / a1) * c0.powf(1.0 / a2);
    let arg = 2f64.powf(tau) * n1.powf(tau - 1.0) * n2;
    let constant = ef.powf(1.0 / (s_hat * p_minus)) * psi.eval(arg) * eg.powf(1.0 / p_star);
    let slack = x.assoc_slack() * (1.0 + tol::rdf_tail(cfg.k));
    let mut checks = Vec::with_capacity(family.pairs.len());
    for (f, g) in &family.pairs {
        checks.push((x.norm(f)?, constant * slack * x.norm(g)?));
    }
    details.insert("p_star".to_string(), p_star);
    details.insert("sigma".to_string(), sigma);
    details.insert("tau".to_string(), tau);
    details.insert("embed_f".to_string(), ef);
    details.insert("embed_g".to_string(), eg);
    details.insert("c0".to_string(), c0);
    Ok(conclude(
        &family.name,
        "limited",
        hypothesis_ok,
        constant,
        slack,
        arg,
        psi,
        Some(n1),
        Some(n2),
        checks,
        details,
        notes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate, BasisKind};
    use crate::space::MeasureSpace;
    use crate::spaces::SpaceFamily;

    fn setup(n: usize) -> (SpaceRef, Basis) {
        let s = MeasureSpace::line(n, 1.0 / n as f64).unwrap();
        let b = enumerate(&s, BasisKind::Intervals).unwrap();
        (s, b)
    }

    #[test]
    fn psi_table_envelope() {
        let t = PsiTable::fit(&[(4.0, 2.0), (1.0, 0.5), (2.0, 3.0), (2.0, 1.5)]).unwrap();
        assert_eq!(t.eval(0.9), 1.0);
        assert_eq!(t.eval(1.0), 1.0);
        assert_eq!(t.eval(2.5), 3.0);
        assert_eq!(t.eval(100.0), 3.0);
        assert!(PsiTable::fit(&[(1.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn identity_family_envelope_is_one() {
        let (s, b) = setup(64);
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s).unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::Identity, 6, 7).unwrap();
        let rep = verify_bfs_extrapolation(&fam, &spec, &b, 2.0, &RdfConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!((rep.psi_value - 1.0).abs() < 1e-12);
        assert!((rep.constant - front_factor(2.0)).abs() < 1e-9);
    }

    #[test]
    fn hilbert_on_weighted_lorentz_passes() {
        let (s, b) = setup(128);
        let u = make_power_weight(&s, 0.05).unwrap();
        let spec = SpaceSpec::new(SpaceFamily::Lorentz { p: 3.0, q: 1.5 }, &s)
            .unwrap()
            .with_u(u)
            .unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::Hilbert, 6, 3).unwrap();
        let rep = verify_bfs_extrapolation(&fam, &spec, &b, 2.0, &RdfConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.notes);
        assert!(rep.n1.unwrap() >= 1.0 && rep.n2.unwrap() >= 1.0);
    }

    #[test]
    fn varexp_constant_exponent_matches_lp() {
        let (s, b) = setup(64);
        let fam = generate_pairs(&s, &b, &FamilyKind::MaximalPair, 4, 5).unwrap();
        let lp = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s).unwrap();
        let ve = SpaceSpec::new(SpaceFamily::VarExp { p: vec![2.0; 64] }, &s).unwrap();
        let cfg = RdfConfig::default();
        let r1 = verify_bfs_extrapolation(&fam, &lp, &b, 2.0, &cfg).unwrap();
        let r2 = verify_bfs_extrapolation(&fam, &ve, &b, 2.0, &cfg).unwrap();
        assert_eq!(r1.verdict, Verdict::Pass);
        assert_eq!(r2.verdict, Verdict::Pass);
        // same norms up to bisection tolerance; battery and envelope agree
        assert!((r1.psi_value - r2.psi_value).abs() / r1.psi_value < 1e-6);
    }

    #[test]
    fn vector_valued_exponent_shift() {
        let (s, b) = setup(128);
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 4.0 }, &s).unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::Hilbert, 8, 2).unwrap();
        let rep = verify_vector_valued(&fam, &spec, &b, 2.0, 3.0, &RdfConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.notes);
        assert!(rep.notes.iter().any(|s| s.contains("conditional")));
        let same = verify_vector_valued(&fam, &spec, &b, 2.0, 2.0, &RdfConfig::default()).unwrap();
        assert_eq!(same.verdict, Verdict::Pass);
        assert!(same.notes.iter().all(|s| !s.contains("conditional")));
    }

    #[test]
    fn ainf_modes_pass() {
        let (s, b) = setup(64);
        let u = make_power_weight(&s, 0.1).unwrap();
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 3.0 }, &s).unwrap().with_u(u).unwrap();
        let fam = ainf_pair_family(&s, &b, 6, 9).unwrap();
        let cfg = RdfConfig::default();
        for p in [0.5, 1.0, 2.0] {
            let rep = verify_ainf_extrapolation(&fam, &spec, &b, p, &cfg).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "p={p} {:?}", rep.notes);
        }
        let vv = verify_ainf_vector_valued(&fam, &spec, &b, 2.0, &cfg).unwrap();
        assert_eq!(vv.verdict, Verdict::Pass);
    }

    #[test]
    fn modular_modes_pass() {
        let (s, b) = setup(64);
        let u = Weight::constant(s.clone(), 1.0).unwrap();
        let v = Weight::constant(s.clone(), 1.0).unwrap();
        let phi = YoungFunction::plog(2.0, 1.0).unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::Hilbert, 4, 13).unwrap();
        let cfg = RdfConfig::default();
        let rep = verify_modular_extrapolation(&fam, &phi, &u, &v, &b, 2.0, &cfg).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.notes);
        assert!(rep.constant >= rep.details["c0"]);
        let vv = verify_modular_vector_valued(&fam, &phi, &u, &v, &b, 2.0, &cfg).unwrap();
        assert_eq!(vv.verdict, Verdict::Pass);
        let am = verify_modular_ainf(&fam, &phi, &u, &v, &b, 1.0, &cfg).unwrap();
        assert_eq!(am.verdict, Verdict::Pass, "{:?}", am.notes);
    }

    #[test]
    fn limited_range_gate_and_pass() {
        let (s, b) = setup(64);
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s).unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::Hilbert, 4, 17).unwrap();
        let cfg = RdfConfig::default();
        let rep = verify_limited_range(&fam, &spec, &b, 1.0, 4.0, &cfg).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.notes);
        // a full-range call behaves like the unrestricted mode
        let wide = verify_limited_range(&fam, &spec, &b, 1.0, 1.0e4, &cfg).unwrap();
        assert_eq!(wide.verdict, Verdict::Pass);
        // indices outside the range are a parameter error
        assert!(verify_limited_range(&fam, &spec, &b, 2.5, 4.0, &cfg).is_err());
    }

    #[test]
    fn infinite_ratio_is_rejected() {
        let (s, b) = setup(32);
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s).unwrap();
        let f = GridFunction::indicator(s.clone(), &[4, 5, 6]).unwrap();
        let g = GridFunction::constant(s.clone(), 0.0).unwrap();
        let fam = PairFamily::from_pairs("bad", vec![(f, g)]).unwrap();
        let err = verify_bfs_extrapolation(&fam, &spec, &b, 2.0, &RdfConfig::default());
        assert!(err.is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let (s, b) = setup(32);
        let spec = SpaceSpec::new(SpaceFamily::Lp { p: 2.0 }, &s).unwrap();
        let fam = generate_pairs(&s, &b, &FamilyKind::MaximalPair, 4, 21).unwrap();
        let cfg = RdfConfig::default();
        let r1 = verify_bfs_extrapolation(&fam, &spec, &b, 2.0, &cfg).unwrap();
        let r2 = verify_bfs_extrapolation(&fam, &spec, &b, 2.0, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }
}
