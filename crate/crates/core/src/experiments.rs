//! Sweeps, worked-example checks and report formatting shared by the CLI
//! and the acceptance suite.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::catalog;
use crate::channel::{CqChannel, IidChannel};
use crate::channel_divergences::{
    choi_divergence_to_set, choi_trace_distance, diamond_distance, divergence_to_set, hypothesis_test_channel,
    DivergenceKind, InputMode,
};
use crate::divergences::{self, rel_entropy, sandwiched_renyi};
use crate::error::{Error, Result};
use crate::free_sets::{holevo_capacity, FreeSetDescriptor, FreeSetKind};
use crate::hypothesis::{hypothesis_test, hypothesis_test_diagonal};
use crate::random;
use crate::resource_ops::{arng_deficit, smooth_channel, Superchannel};
use crate::state::DensityMatrix;
use crate::symmetry::enumerate_types;

/// `%.12g`, with `inf`, `-inf` and `nan` spelled out.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `α/(α−1)·log(1/(1−ε))`, the additive slack of the Rényi converse bound.
pub fn converse_slack(alpha: f64, eps: f64) -> f64 {
    alpha / (alpha - 1.0) * (1.0 / (1.0 - eps)).ln()
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub eps: f64,
    pub alpha: f64,
    pub n_max: usize,
    /// Hard ceiling on `n_max`.
    pub n_guard: usize,
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(eps: f64, alpha: f64, n_max: usize) -> Self {
        Self { eps, alpha, n_max, n_guard: 10, timing: false }
    }

    fn check(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::EpsOutOfRange(self.eps));
        }
        if !(self.alpha > 1.0) || !self.alpha.is_finite() {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        if self.n_max == 0 || self.n_max > self.n_guard {
            return Err(Error::InvalidArgument(format!("nmax must lie in 1..={}, got {}", self.n_guard, self.n_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub dh_over_n: f64,
    pub d_over_n: f64,
    pub upper_bound: f64,
    /// `true` when `dh_over_n` is only a classical-input lower bound.
    pub lb: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SweepRow {
    fn truncated(n: usize, why: &Error) -> Self {
        SweepRow {
            n,
            dh_over_n: f64::NAN,
            d_over_n: f64::NAN,
            upper_bound: f64::NAN,
            lb: false,
            wall_ms: None,
            note: Some(format!("truncated: {why}")),
        }
    }

    fn timed(mut self, start: Option<Instant>) -> Self {
        self.wall_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
        self
    }
}

fn is_size_error(e: &Error) -> bool {
    matches!(e, Error::EnumerationTooLarge(_) | Error::DimensionGuard(_) | Error::CombinatorialOverflow(_))
}

/// Runs rows in ascending `n`, stopping with a flagged row at the first
/// size-guard error.
fn sweep(cfg: &SweepConfig, mut row: impl FnMut(usize) -> Result<SweepRow>) -> Result<Vec<SweepRow>> {
    cfg.check()?;
    let mut rows = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let start = cfg.timing.then(Instant::now);
        match row(n) {
            Ok(r) => rows.push(r.timed(start)),
            Err(e) if is_size_error(&e) => {
                rows.push(SweepRow::truncated(n, &e));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

/// `(1/n) D_H^ε`, `(1/n) D` and the Rényi converse bound for `E^{⊗n}`
/// against `S_n`, singleton and replacer families only.
pub fn sweep_gqsl(e: &CqChannel, s: &FreeSetDescriptor, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let single = s.with_copies(1);
    // replacer bound: any fixed replacer is an admissible alternative, take the capacity-achieving one
    let reference = match &single.kind {
        FreeSetKind::SingletonIid(f) => f.clone(),
        FreeSetKind::Replacer => {
            let cap = holevo_capacity(e, 1e-10)?;
            CqChannel::replacer(e.alphabet_size(), cap.optimal_sigma)
        }
        _ => return Err(Error::UnsupportedSetKind(format!("GQSL sweep against {}", s.kind_name()))),
    };
    let slack = converse_slack(cfg.alpha, cfg.eps);
    sweep(cfg, |n| {
        let e_n = IidChannel::new(e.clone(), n)?;
        let s_n = s.with_copies(n);
        let dh = hypothesis_test_channel(&e_n, &s_n, cfg.eps, InputMode::ClassicalTypes)?;
        let f_n = IidChannel::new(reference.clone(), n)?;
        let mut renyi = f64::NEG_INFINITY;
        let mut d = f64::NEG_INFINITY;
        for t in enumerate_types(n, e.alphabet_size())? {
            let rep = t.representative();
            let (w, v) = (e_n.output_for(&rep), f_n.output_for(&rep));
            renyi = renyi.max(sandwiched_renyi(&w, &v, cfg.alpha)?);
            if matches!(single.kind, FreeSetKind::SingletonIid(_)) {
                d = d.max(rel_entropy(&w, &v)?);
            }
        }
        if matches!(single.kind, FreeSetKind::Replacer) {
            let choi_dim = (e.alphabet_size() * e.out_dim()).checked_pow(n as u32);
            if choi_dim.is_none_or(|k| k > crate::channel::DENSE_DIM_GUARD) {
                return Err(Error::DimensionGuard(format!("replacer radius needs (|X| d)^{n} <= {}", crate::channel::DENSE_DIM_GUARD)));
            }
            d =divergence_to_set(DivergenceKind::Umegaki, &crate::channel::tensor_power(e, n)?, &s_n)?.value;
        }
        let nf = n as f64;
        Ok(SweepRow {
            n,
            dh_over_n: dh.value / nf,
            d_over_n: d / nf,
            upper_bound: (renyi + slack) / nf,
            lb: dh.lower_bound_only,
            wall_ms: None,
            note: None,
        })
    })
}

/// Largest state dimension for which the Stein sweep handles
/// non-commuting pairs densely.
pub const STEIN_DENSE_DIM: usize = 256;

/// `(1/n) D_H^ε(ρ^{⊗n}‖σ^{⊗n})` against `D(ρ‖σ)` and the converse bound.
pub fn sweep_stein(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let d = rel_entropy(rho, sigma)?;
    let renyi = sandwiched_renyi(rho, sigma, cfg.alpha)?;
    let slack = converse_slack(cfg.alpha, cfg.eps);
    let diagonal = divergences::both_diagonal(rho, sigma);
    sweep(cfg, |n| {
        let value = match &diagonal {
            Some((p, q)) => {
                let (pn, qn) = (kron_power(p, n)?, kron_power(q, n)?);
                hypothesis_test_diagonal(&pn, &qn, cfg.eps)?.value
            }
            None => {
                let dim = rho.dim().checked_pow(n as u32).filter(|&k| k <= STEIN_DENSE_DIM);
                if dim.is_none() {
                    return Err(Error::DimensionGuard(format!(
                        "non-commuting {}^{n} exceeds {STEIN_DENSE_DIM}",
                        rho.dim()
                    )));
                }
                hypothesis_test(&state_power(rho, n), &state_power(sigma, n), cfg.eps)?.value
            }
        };
        let nf = n as f64;
        Ok(SweepRow {
            n,
            dh_over_n: value / nf,
            d_over_n: d,
            upper_bound: renyi + slack / nf,
            lb: false,
            wall_ms: None,
            note: None,
        })
    })
}

fn kron_power(p: &[f64], n: usize) -> Result<Vec<f64>> {
    if p.len().checked_pow(n as u32).is_none_or(|k| k > crate::channel::DENSE_DIM_GUARD) {
        return Err(Error::DimensionGuard(format!("{}^{n} outcomes", p.len())));
    }
    let mut acc = vec![1.0];
    for _ in 0..n {
        acc = acc.iter().flat_map(|a| p.iter().map(move |b| a * b)).collect();
    }
    Ok(acc)
}

fn state_power(rho: &DensityMatrix, n: usize) -> DensityMatrix {
    (1..n).fold(rho.clone(), |acc, _| acc.tensor(rho))
}

pub fn rows_to_csv(rows: &[SweepRow], timing: bool) -> String {
    let mut out = String::from("n,dh_over_n,d_over_n,upper_bound,dh_kind");
    if timing {
        out.push_str(",wall_ms");
    }
    out.push_str(",note\n");
    for r in rows {
        let kind = if r.note.is_some() { "" } else if r.lb { "lb" } else { "exact" };
        let _ = write!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt_num(r.dh_over_n),
            fmt_num(r.d_over_n),
            fmt_num(r.upper_bound),
            kind
        );
        if timing {
            let _ = write!(out, ",{}", r.wall_ms.map(fmt_num).unwrap_or_default());
        }
        let _ = writeln!(out, ",{}", r.note.as_deref().unwrap_or(""));
    }
    out
}

/// JSON with numbers rendered through [`fmt_num`], so `inf` survives.
pub fn rows_to_json(rows: &[SweepRow], timing: bool) -> String {
    let items: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut v = serde_json::json!({
                "n": r.n,
                "dh_over_n": fmt_num(r.dh_over_n),
                "d_over_n": fmt_num(r.d_over_n),
                "upper_bound": fmt_num(r.upper_bound),
                "dh_kind": if r.lb { "lb" } else { "exact" },
            });
            if timing {
                v["wall_ms"] = serde_json::json!(r.wall_ms.map(fmt_num));
            }
            if let Some(note) = &r.note {
                v["note"] = serde_json::json!(note);
            }
            v
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("plain JSON values")
}

/// One expected-versus-computed comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn close(name: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        let pass = (expected - computed).abs() <= tol || expected == computed;
        Self { name: name.into(), expected, computed, tol, pass }
    }

    /// `computed ≤ expected + tol`.
    pub fn at_most(name: impl Into<String>, computed: f64, bound: f64, tol: f64) -> Self {
        Self { name: name.into(), expected: bound, computed, tol, pass: computed <= bound + tol }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: expected {} computed {} tol {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            fmt_num(self.expected),
            fmt_num(self.computed),
            fmt_num(self.tol)
        )
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render(&self) -> String {
        self.checks.iter().map(|c| c.line() + "\n").collect()
    }

    fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

/// The qubit pair `|0⟩⟨0|, 1/2` and the constant `|0⟩⟨0|` channel against
/// the depolarizing singleton set.
pub fn relative_entropy_examples() -> Result<Report> {
    let ln2 = std::f64::consts::LN_2;
    let s = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), 1);
    let mut r = Report::default();
    for (label, e, r_exp, choi_exp) in [
        ("pure_or_mixed", catalog::pure_or_mixed(), ln2, 0.5 * ln2),
        ("constant_zero", catalog::constant_zero(), ln2, ln2),
    ] {
        let v = divergence_to_set(DivergenceKind::Umegaki, &e, &s)?.value;
        r.checks.push(Check::close(format!("R({label})"), r_exp, v, 1e-9));
        let c = choi_divergence_to_set(DivergenceKind::Umegaki, &e, &s)?;
        r.checks.push(Check::close(format!("choi R({label})"), choi_exp, c, 1e-9));
    }
    Ok(r)
}

/// Choi distances before and after forcing the all-ones input, diamond
/// distance of the pair and the resource generated by the relabeling.
pub fn continuity_examples(n_max: usize) -> Result<Report> {
    let mut r = Report::default();
    for n in 1..=n_max {
        let (a, b) = (catalog::all_zero_string(n)?, catalog::flag_all_ones(n)?);
        let theta = catalog::force_all_ones(n)?;
        let expected = 2f64.powi(1 - n as i32);
        r.checks.push(Check::close(format!("n={n} choi distance"), expected, choi_trace_distance(&a, &b)?, 1e-12));
        let (ta, tb) = (theta.apply(&a)?, theta.apply(&b)?);
        r.checks.push(Check::close(format!("n={n} choi distance after relabeling"), 2.0, choi_trace_distance(&ta, &tb)?, 1e-12));
        r.checks.push(Check::close(format!("n={n} diamond distance"), 2.0, diamond_distance(&a, &b)?, 1e-12));
        let free = CqChannel::depolarizing(1 << n, 1 << n);
        let s = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), n);
        let deficit = arng_deficit(&theta, &free, &s)?.deficit;
        r.checks.push(Check::close(format!("n={n} relabeling deficit"), 0.0, deficit, 1e-12));
    }
    Ok(r)
}

/// Divergence radius to the replacer set against the Holevo capacity.
pub fn capacity_examples(seed: u64, count: usize) -> Result<Report> {
    let mut rng = random::rng(seed);
    let mut r = Report::default();
    for i in 0..count {
        let letters = rng.random_range(2..=4);
        let dim = rng.random_range(2..=3);
        let e = random::channel(&mut rng, letters, dim);
        let radius = divergence_to_set(DivergenceKind::Umegaki, &e, &FreeSetDescriptor::replacer(1))?.value;
        let cap = holevo_capacity(&e, 1e-9)?;
        r.checks.push(Check::close(format!("channel {i} (|X|={letters}, d={dim}) radius = capacity"), cap.lower, radius, 1e-6));
    }
    Ok(r)
}

pub fn examples_report(seed: u64) -> Result<Report> {
    let mut r = relative_entropy_examples()?;
    r.extend(continuity_examples(8)?);
    r.extend(capacity_examples(seed, 20)?);
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothRow {
    pub k: usize,
    pub copies: usize,
    pub dmax_lower: f64,
    pub dmax_upper: f64,
    pub dmax_bound: f64,
    pub convexity_bound: f64,
    pub max_cut_weight: f64,
    pub cut_bound: f64,
    pub diamond: f64,
}

pub fn smooth_rows(
    e: &CqChannel,
    f_m: &CqChannel,
    m: usize,
    s: &FreeSetDescriptor,
    rate: f64,
    ks: &[usize],
) -> Result<Vec<SmoothRow>> {
    ks.iter()
        .map(|&k| {
            let sm = smooth_channel(e, f_m, m, s, rate, k)?;
            Ok(SmoothRow {
                k,
                copies: sm.copies,
                dmax_lower: sm.dmax_lower,
                dmax_upper: sm.dmax_upper,
                dmax_bound: sm.dmax_bound,
                convexity_bound: sm.convexity_bound,
                max_cut_weight: sm.max_cut_weight,
                cut_bound: (-(sm.copies as f64) * rate).exp(),
                diamond: sm.diamond_to_original,
            })
        })
        .collect()
}

pub fn smooth_rows_to_csv(rows: &[SmoothRow]) -> String {
    let mut out = String::from("k,copies,dmax_lower,dmax_upper,dmax_bound,convexity_bound,max_cut_weight,cut_bound,diamond\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            r.copies,
            fmt_num(r.dmax_lower),
            fmt_num(r.dmax_upper),
            fmt_num(r.dmax_bound),
            fmt_num(r.convexity_bound),
            fmt_num(r.max_cut_weight),
            fmt_num(r.cut_bound),
            fmt_num(r.diamond)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1.5e-7), "1.5e-07");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(-0.000123), "-0.000123");
    }

    #[test]
    fn free_channel_sweep_is_trivial() {
        let f = catalog::depolarizing_qubit();
        let s = FreeSetDescriptor::singleton_iid(f.clone(), 1);
        let rows = sweep_gqsl(&f, &s, &SweepConfig::new(0.1, 1.5, 3)).unwrap();
        for r in &rows {
            assert!((r.dh_over_n - (1.0 / 0.9f64).ln() / r.n as f64).abs() < 1e-12);
            assert_eq!(r.d_over_n, 0.0);
            assert!(r.lb);
        }
    }

    #[test]
    fn pure_or_mixed_sweep_has_constant_rate() {
        let s = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), 1);
        let rows = sweep_gqsl(&catalog::pure_or_mixed(), &s, &SweepConfig::new(0.1, 1.5, 4)).unwrap();
        for r in &rows {
            assert!((r.d_over_n - std::f64::consts::LN_2).abs() < 1e-12);
            assert!(r.dh_over_n <= r.upper_bound + 1e-8);
        }
    }

    #[test]
    fn sweep_guards() {
        let f = catalog::depolarizing_qubit();
        let s = FreeSetDescriptor::singleton_iid(f.clone(), 1);
        assert!(sweep_gqsl(&f, &s, &SweepConfig::new(0.1, 1.5, 11)).is_err());
        assert!(sweep_gqsl(&f, &s, &SweepConfig::new(0.0, 1.5, 2)).is_err());
        let rho = random::state(&mut random::rng(1), 2);
        let sigma = random::state(&mut random::rng(2), 2);
        let rows = sweep_stein(&rho, &sigma, &SweepConfig::new(0.1, 1.5, 10)).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows[8].note.is_some());
    }

    #[test]
    fn csv_is_deterministic_and_flags_lower_bounds() {
        let s = FreeSetDescriptor::replacer(1);
        let cfg = SweepConfig::new(0.2, 2.0, 2);
        let a = rows_to_csv(&sweep_gqsl(&catalog::pure_or_mixed(), &s, &cfg).unwrap(), false);
        let b = rows_to_csv(&sweep_gqsl(&catalog::pure_or_mixed(), &s, &cfg).unwrap(), false);
        assert_eq!(a, b);
        assert!(a.lines().nth(1).unwrap().ends_with(",lb,"));
    }

    #[test]
    fn relative_entropy_examples_pass() {
        let r = relative_entropy_examples().unwrap();
        assert!(r.all_pass(), "{}", r.render());
    }
}
