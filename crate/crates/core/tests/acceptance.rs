//! Acceptance criteria, one line per criterion with its runtime budget.

mod common;

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use cqstein::catalog;
use cqstein::channel_divergences::{
    channel_divergence, choi_divergence_to_set, choi_trace_distance, diamond_distance, divergence_to_set,
    DivergenceKind,
};
use cqstein::divergences::{dmax, rel_entropy, sandwiched_renyi, trace_distance};
use cqstein::experiments::{sweep_gqsl, sweep_stein, SweepConfig};
use cqstein::free_sets::{holevo_capacity, log_robustness, FreeSetDescriptor};
use cqstein::linalg;
use cqstein::pinching::{pinching_of, DEFAULT_CLUSTER_TOL};
use cqstein::resource_ops::{arng_deficit, build_superchannel, robustness_decompose, smooth_channel, Superchannel};
use cqstein::{cq_apply, hypothesis_test, random, tensor_power, CqChannel, DensityMatrix};

use common::c;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: cqstein::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn example_quartet() -> Verdict {
    let s = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), 1);
    let cases = [
        ("R(E1)", catalog::pure_or_mixed(), false, LN_2),
        ("choi R(E1)", catalog::pure_or_mixed(), true, 0.5 * LN_2),
        ("R(E2)", catalog::constant_zero(), false, LN_2),
        ("choi R(E2)", catalog::constant_zero(), true, LN_2),
    ];
    let mut worst: f64 = 0.0;
    for (name, e, via_choi, expected) in cases {
        let v = if via_choi {
            lib(choi_divergence_to_set(DivergenceKind::Umegaki, &e, &s))?
        } else {
            lib(divergence_to_set(DivergenceKind::Umegaki, &e, &s))?.value
        };
        worst = worst.max((v - expected).abs());
        ensure((v - expected).abs() <= 1e-9, || format!("{name} = {v}, expected {expected}"))?;
    }
    Ok(format!("max error {worst:.1e}"))
}

fn continuity_example() -> Verdict {
    for n in 1..=8usize {
        let (a, b) = (lib(catalog::all_zero_string(n))?, lib(catalog::flag_all_ones(n))?);
        let d = 1usize << n;
        let before = lib(choi_trace_distance(&a, &b))?;
        ensure((before - 2f64.powi(1 - n as i32)).abs() <= 1e-12, || format!("n={n}: Choi distance {before}"))?;
        let theta = lib(catalog::force_all_ones(n))?;
        let (ta, tb) = (lib(theta.apply(&a))?, lib(theta.apply(&b))?);
        let ones = DensityMatrix::basis(d, d - 1);
        ensure((0..d).all(|x| tb.output(x) == &ones), || format!("n={n}: relabeled channel is not constant |1…1⟩"))?;
        let after = lib(choi_trace_distance(&ta, &tb))?;
        ensure((after - 2.0).abs() <= 1e-12, || format!("n={n}: Choi distance after relabeling {after}"))?;
        let diamond = lib(diamond_distance(&a, &b))?;
        ensure((diamond - 2.0).abs() <= 1e-12, || format!("n={n}: diamond {diamond}"))?;
        let free = CqChannel::depolarizing(d, d);
        let s = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), n);
        ensure(lib(theta.apply(&free))? == free, || format!("n={n}: relabeling changes the free channel"))?;
        let deficit = lib(arng_deficit(&theta, &free, &s))?.deficit;
        ensure(deficit.abs() <= 1e-12, || format!("n={n}: deficit {deficit}"))?;
    }
    Ok("n = 1..8".into())
}

/// `χ(p) = S(Σ p ω) − Σ p S(ω)` evaluated by the oracle.
fn holevo_quantity(e: &CqChannel, p: &[f64]) -> f64 {
    let mix = lib(e.apply_classical(p)).unwrap();
    common::entropy(&mix) - p.iter().zip(e.outputs()).map(|(pi, o)| pi * common::entropy(o)).sum::<f64>()
}

fn radius_at(e: &CqChannel, sigma: &DensityMatrix) -> f64 {
    e.outputs().iter().map(|o| common::rel_entropy(o, sigma)).fold(f64::NEG_INFINITY, f64::max)
}

fn capacity_identity() -> Verdict {
    let mut rng = random::rng(413);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let (k, d) = (rng.random_range(2..=4), rng.random_range(2..=3));
        let e = random::channel(&mut rng, k, d);
        let radius = lib(divergence_to_set(DivergenceKind::Umegaki, &e, &FreeSetDescriptor::replacer(1)))?;
        let cap = lib(holevo_capacity(&e, 1e-9))?;
        let gap = (radius.value - cap.lower).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-6, || format!("channel {i}: radius {} vs capacity {}", radius.value, cap.lower))?;
        // oracle: the witness output certifies the radius, the input distribution certifies χ
        let sigma = radius.witness.as_ref().ok_or("no witness")?.output(0).clone();
        let chi = holevo_quantity(&e, &cap.optimal_p);
        let rad = radius_at(&e, &sigma);
        ensure((chi - cap.lower).abs() <= 1e-8, || format!("channel {i}: oracle χ {chi} vs {}", cap.lower))?;
        ensure(rad - chi <= 1e-6 && rad - chi >= -1e-9, || format!("channel {i}: oracle sandwich [{chi}, {rad}]"))?;
    }
    Ok(format!("20 channels, max |radius − capacity| {worst:.1e}"))
}

fn hypothesis_solver() -> Verdict {
    let mut rng = random::rng(2024);
    let epss = [0.05, 0.2, 0.5];
    let mut worst_classical: f64 = 0.0;
    for i in 0..200 {
        let dim = rng.random_range(2..=8);
        let eps = epss[i % 3];
        let p = random::distribution(&mut rng, dim);
        let mut q = random::distribution(&mut rng, dim);
        if i % 4 == 0 {
            // outcomes that the alternative never produces
            q[0] = 0.0;
            let s: f64 = q.iter().sum();
            q.iter_mut().for_each(|v| *v /= s);
        }
        let rho = lib(DensityMatrix::from_diagonal(&p))?;
        let sigma = lib(DensityMatrix::from_diagonal(&q))?;
        let v = lib(hypothesis_test(&rho, &sigma, eps))?.value;
        let oracle = -common::neyman_pearson_beta(&p, &q, eps).ln();
        let err = if v.is_infinite() && oracle.is_infinite() { 0.0 } else { (v - oracle).abs() };
        worst_classical = worst_classical.max(err);
        ensure(err <= 1e-8, || format!("commuting pair {i}: {v} vs oracle {oracle}"))?;
    }
    let (mut worst_gap, mut worst_res): (f64, f64) = (0.0, 0.0);
    for i in 0..200 {
        let dim = rng.random_range(2..=8);
        let eps = epss[i % 3];
        let rho = random::state(&mut rng, dim);
        let sigma = random::state(&mut rng, dim);
        let r = lib(hypothesis_test(&rho, &sigma, eps))?;
        let m = &r.optimal_test;
        let ev = common::eigvals(m);
        let box_res = (-ev[0]).max(ev[dim - 1] - 1.0).max(0.0);
        let accept = (m * rho.matrix()).trace().re;
        let type1 = ((1.0 - eps) - accept).max(0.0);
        let beta = (m * sigma.matrix()).trace().re;
        // weak duality with the reported multiplier, evaluated independently
        let mu = r.dual_multiplier;
        let pos: f64 = common::eigvals(&(rho.matrix() * c(mu) - sigma.matrix())).iter().map(|l| l.max(0.0)).sum();
        let dual = mu * (1.0 - eps) - pos;
        let gap = beta - dual;
        worst_gap = worst_gap.max(gap.abs()).max(r.duality_gap);
        worst_res = worst_res.max(box_res).max(type1);
        ensure(r.duality_gap <= 1e-8 && gap.abs() <= 1e-8, || format!("pair {i}: duality gaps {} / {gap}", r.duality_gap))?;
        ensure(box_res <= 1e-9 && type1 <= 1e-9, || format!("pair {i}: residuals {box_res} / {type1}"))?;
        ensure((-beta.ln() - r.value).abs() <= 1e-9 * r.value.abs().max(1.0), || format!("pair {i}: value {} vs −log β {}", r.value, -beta.ln()))?;
    }
    Ok(format!(
        "classical max error {worst_classical:.1e}; quantum max gap {worst_gap:.1e}, max residual {worst_res:.1e}"
    ))
}

fn inequality_suite() -> Verdict {
    let mut rng = random::rng(77);
    let mut worst: f64 = f64::NEG_INFINITY;
    for i in 0..500 {
        let d_in = rng.random_range(2..=4);
        let d_out = rng.random_range(2..=4);
        let env = (d_in + d_out - 1) / d_out + rng.random_range(0..=1);
        let ch = common::Stinespring::random(&mut rng, d_in, d_out, env);
        let rho = random::state(&mut rng, d_in);
        let sigma = random::state(&mut rng, d_in);
        let (r2, s2) = (ch.apply(&rho), ch.apply(&sigma));
        let alpha = 1.0 + rng.random_range(0.05..2.0);
        let pairs = [
            ("D", lib(rel_entropy(&rho, &sigma))?, lib(rel_entropy(&r2, &s2))?),
            ("Renyi", lib(sandwiched_renyi(&rho, &sigma, alpha))?, lib(sandwiched_renyi(&r2, &s2, alpha))?),
            ("Dmax", lib(dmax(&rho, &sigma))?, lib(dmax(&r2, &s2))?),
            ("DH", lib(hypothesis_test(&rho, &sigma, 0.1))?.value, lib(hypothesis_test(&r2, &s2, 0.1))?.value),
            ("trace", lib(trace_distance(&rho, &sigma))?, lib(trace_distance(&r2, &s2))?),
        ];
        for (name, before, after) in pairs {
            worst = worst.max(after - before);
            ensure(after <= before + 1e-9, || format!("DPI {name} instance {i}: {after} > {before}"))?;
        }
        // ordering chain on the oracle, α ∈ (1, 2]
        let a2 = 1.0 + (alpha - 1.0) / 2.0;
        let (d, dr, dm) = (common::rel_entropy(&rho, &sigma), common::renyi(&rho, &sigma, a2), common::dmax(&rho, &sigma));
        ensure(d <= dr + 1e-9 && dr <= dm + 1e-9, || format!("chain instance {i}: {d}, {dr}, {dm}"))?;
        ensure((pairs[0].1 - d).abs() <= 1e-8 && (pairs[2].1 - dm).abs() <= 1e-8, || format!("oracle mismatch instance {i}"))?;
        let converse = common::renyi(&rho, &sigma, alpha) + alpha / (alpha - 1.0) * (1.0 / 0.9f64).ln();
        ensure(pairs[3].1 <= converse + 1e-9, || format!("converse bound instance {i}"))?;
    }
    for i in 0..200 {
        let dim = rng.random_range(2..=4);
        // repeated eigenvalues exercise clustering
        let mut spec = random::distribution(&mut rng, dim);
        if i % 2 == 0 {
            spec[1] = spec[0];
            let s: f64 = spec.iter().sum();
            spec.iter_mut().for_each(|v| *v /= s);
        }
        let u = random::unitary(&mut rng, dim);
        let sigma = lib(DensityMatrix::validate(&u * linalg::from_real_diagonal(&spec) * u.adjoint()))?;
        let rho = random::state(&mut rng, dim);
        let pin = pinching_of(&sigma, DEFAULT_CLUSTER_TOL);
        let k = pin.k() as f64;
        let pinched = pin.apply(&rho);
        let low = common::eigvals(&(pinched.matrix() * c(k) - rho.matrix()))[0];
        ensure(low >= -1e-9, || format!("pinching inequality instance {i}: {low}"))?;
        let lhs = common::rel_entropy(&rho, &sigma);
        let rhs = common::rel_entropy(&pinched, &sigma) + k.ln();
        ensure(lhs <= rhs + 1e-9, || format!("pinching bound instance {i}: {lhs} > {rhs}"))?;
    }
    let mut rows = 0;
    let check_rows = |rows_: Vec<cqstein::experiments::SweepRow>, count: &mut usize| -> Result<(), String> {
        for r in rows_ {
            ensure(r.note.is_none() && r.dh_over_n <= r.upper_bound + 1e-9, || format!("sweep row n={} {:?}", r.n, r))?;
            *count += 1;
        }
        Ok(())
    };
    let depol = FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), 1);
    check_rows(lib(sweep_gqsl(&catalog::pure_or_mixed(), &depol, &SweepConfig::new(0.05, 1.1, 8)))?, &mut rows)?;
    let commuting = random::commuting_channel(&mut rng, 2, 2);
    check_rows(lib(sweep_gqsl(&commuting, &FreeSetDescriptor::replacer(1), &SweepConfig::new(0.2, 1.5, 4)))?, &mut rows)?;
    let general = random::channel(&mut rng, 2, 2);
    let f = random::channel(&mut rng, 2, 2);
    check_rows(lib(sweep_gqsl(&general, &FreeSetDescriptor::singleton_iid(f, 1), &SweepConfig::new(0.1, 2.0, 4)))?, &mut rows)?;
    let mut stein = SweepConfig::new(0.05, 1.1, 12);
    stein.n_guard = 12;
    let (rho, sigma) = (lib(DensityMatrix::from_diagonal(&[0.8, 0.2]))?, lib(DensityMatrix::from_diagonal(&[0.3, 0.7]))?);
    check_rows(lib(sweep_stein(&rho, &sigma, &stein))?, &mut rows)?;
    Ok(format!("500 DPI instances (max excess {worst:.1e}), 200 pinching instances, {rows} sweep rows"))
}

fn input_reduction() -> Verdict {
    let mut rng = random::rng(5);
    let mut samples = 0;
    for pair in 0..10 {
        let (k, d) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let e = random::channel(&mut rng, k, d);
        let f = random::channel(&mut rng, k, d);
        let classical = [
            lib(channel_divergence(DivergenceKind::Umegaki, &e, &f))?.value,
            lib(channel_divergence(DivergenceKind::Renyi(1.5), &e, &f))?.value,
            lib(channel_divergence(DivergenceKind::Dmax, &e, &f))?.value,
        ];
        let diamond = lib(diamond_distance(&e, &f))?;
        for s in 0..50 {
            // mostly-pure inputs on R ⊗ X with |R| = |X|
            let psi = random::pure_state(&mut rng, k * k);
            let noise = random::state(&mut rng, k * k);
            let w = if s % 5 == 0 { 0.5 } else { 0.98 };
            let nu = lib(DensityMatrix::mixture(&[w, 1.0 - w], &[&psi, &noise]))?;
            let (a, b) = (lib(cq_apply(&e, &nu, k))?, lib(cq_apply(&f, &nu, k))?);
            let sampled = [common::rel_entropy(&a, &b), common::renyi(&a, &b, 1.5), common::dmax(&a, &b)];
            for (name, (v, m)) in ["D", "Renyi", "Dmax"].iter().zip(sampled.iter().zip(classical)) {
                ensure(*v <= m + 1e-9, || format!("pair {pair} sample {s}: {name} {v} > classical {m}"))?;
            }
            let tn = common::trace_norm(&(a.matrix() - b.matrix()));
            ensure(tn <= diamond + 1e-9, || format!("pair {pair} sample {s}: trace norm {tn} > {diamond}"))?;
            samples += 1;
        }
    }
    Ok(format!("{samples} entangled inputs over 10 channel pairs"))
}

fn minimax() -> Verdict {
    let mut rng = random::rng(36);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let (k, d) = (rng.random_range(2..=4), rng.random_range(2..=3));
        let e = random::channel(&mut rng, k, d);
        let cap = lib(holevo_capacity(&e, 1e-7))?;
        let width = cap.upper - cap.lower;
        let sandwich = radius_at(&e, &cap.optimal_sigma) - holevo_quantity(&e, &cap.optimal_p);
        worst = worst.max(width).max(sandwich);
        ensure(width <= 1e-6 && sandwich <= 1e-6, || format!("instance {i}: bracket {width}, oracle {sandwich}"))?;
        ensure(cap.max_lower_decrease <= 1e-12, || format!("instance {i}: lower bound decreased by {}", cap.max_lower_decrease))?;
    }
    Ok(format!("20 instances, widest bracket {worst:.1e}"))
}

/// Closed form for commuting outputs: `log Σ_j max_x ω_x(j)`.
fn classical_replacer_dmax(e: &CqChannel) -> f64 {
    let d = e.out_dim();
    (0..d)
        .map(|j| e.outputs().iter().map(|o| o.matrix()[(j, j)].re).fold(0.0, f64::max))
        .sum::<f64>()
        .ln()
}

fn smoothing() -> Verdict {
    let e = lib(CqChannel::new(vec![
        lib(DensityMatrix::from_diagonal(&[0.65, 0.35]))?,
        DensityMatrix::maximally_mixed(2),
    ]))?;
    let f = catalog::depolarizing_qubit();
    let rate = 0.2;
    let d = common::rel_entropy(e.output(0), f.output(0)).max(common::rel_entropy(e.output(1), f.output(1)));
    let dm = common::dmax(e.output(0), f.output(0));
    ensure(d < rate && rate < dm, || format!("instance does not satisfy D < R < Dmax: {d}, {dm}"))?;
    let s = FreeSetDescriptor::replacer(1);
    let mut diamonds = Vec::new();
    let mut details = Vec::new();
    for k in 1..=3usize {
        let sm = lib(smooth_channel(&e, &f, 1, &s, rate, k))?;
        let spec = common::eigvals(tensor_power(&f, k).unwrap().output(0).matrix());
        let distinct = 1 + spec.windows(2).filter(|w| w[1] - w[0] > 1e-9).count();
        let bound = k as f64 * rate + (distinct as f64).ln();
        let achieved = classical_replacer_dmax(&sm.channel);
        ensure((achieved - sm.dmax_upper).abs() <= 1e-9, || format!("k={k}: oracle {achieved} vs {}", sm.dmax_upper))?;
        ensure(achieved <= bound + 1e-8, || format!("k={k}: Dmax {achieved} > bound {bound}"))?;
        let f_k = lib(tensor_power(&f, k))?;
        for (x, p) in sm.projectors.iter().enumerate() {
            let w = (p * f_k.output(x).matrix()).trace().re;
            ensure(w <= (-(k as f64) * rate).exp() + 1e-10, || format!("k={k} letter {x}: cut weight {w}"))?;
        }
        let e_k = lib(tensor_power(&e, k))?;
        let diamond = (0..e_k.alphabet_size())
            .map(|x| common::trace_norm(&(e_k.output(x).matrix() - sm.channel.output(x).matrix())))
            .fold(0.0, f64::max);
        diamonds.push(diamond);
        details.push(format!("k={k}: {achieved:.4} <= {bound:.4}"));
    }
    ensure(diamonds.windows(2).all(|w| w[1] <= w[0] + 1e-12), || format!("diamond distances {diamonds:?}"))?;
    Ok(format!("{}; diamond {:?}", details.join(", "), diamonds.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()))
}

fn decomposition() -> Verdict {
    let mut rng = random::rng(101);
    let (mut worst_res, mut worst_mem): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let d = rng.random_range(2..=3);
        let e = random::channel(&mut rng, 2, d);
        let (s, member) = if i % 2 == 0 {
            let f = random::channel(&mut rng, 2, d);
            (FreeSetDescriptor::singleton_iid(f.clone(), 1), Some(f))
        } else {
            (FreeSetDescriptor::replacer(1), None)
        };
        let dec = lib(robustness_decompose(&e, &s))?;
        let r = dec.r;
        let mut residual: f64 = 0.0;
        for x in 0..2 {
            let mix = (e.output(x).matrix() + dec.complement.output(x).matrix() * c(r)) * c(1.0 / (1.0 + r));
            residual = residual.max(common::max_abs(&(mix - dec.free_channel.output(x).matrix())));
        }
        let violation = match &member {
            Some(f) => (0..2).map(|x| common::max_abs(&(dec.free_channel.output(x).matrix() - f.output(x).matrix()))).fold(0.0, f64::max),
            None => common::max_abs(&(dec.free_channel.output(0).matrix() - dec.free_channel.output(1).matrix())),
        };
        if let Some(f) = &member {
            let expected = (0..2).map(|x| common::dmax(e.output(x), f.output(x))).fold(f64::NEG_INFINITY, f64::max);
            ensure(((1.0 + r).ln() - expected).abs() <= 1e-8, || format!("channel {i}: log(1+r) vs oracle {expected}"))?;
        } else {
            let lr = lib(log_robustness(&e, &s))?;
            ensure(((1.0 + r).ln() - lr.upper).abs() <= 1e-8, || format!("channel {i}: log(1+r) vs robustness"))?;
        }
        worst_res = worst_res.max(residual);
        worst_mem = worst_mem.max(violation);
        ensure(residual <= 1e-9 && violation <= 1e-9, || format!("channel {i}: residual {residual}, violation {violation}"))?;
    }
    Ok(format!("50 channels, max residual {worst_res:.1e}, max violation {worst_mem:.1e}"))
}

fn finite_n_trends() -> Verdict {
    // Stein sandwich with a shrinking gap
    let (p, q) = ([0.9, 0.1], [0.2, 0.8]);
    let (rho, sigma) = (lib(DensityMatrix::from_diagonal(&p))?, lib(DensityMatrix::from_diagonal(&q))?);
    let mut cfg = SweepConfig::new(0.05, 1.1, 12);
    cfg.n_guard = 12;
    let rows = lib(sweep_stein(&rho, &sigma, &cfg))?;
    let mut pn = vec![1.0];
    let mut qn = vec![1.0];
    for r in &rows {
        pn = common::kron_vec(&pn, &p);
        qn = common::kron_vec(&qn, &q);
        let oracle = -common::neyman_pearson_beta(&pn, &qn, 0.05).ln() / r.n as f64;
        ensure((r.dh_over_n - oracle).abs() <= 1e-9 && r.dh_over_n <= r.upper_bound + 1e-9, || format!("Stein row n={}", r.n))?;
    }
    let d = rows[0].d_over_n;
    let (g2, g12) = ((rows[1].dh_over_n - d).abs(), (rows[11].dh_over_n - d).abs());
    ensure(g12 < g2, || format!("Stein gap did not shrink: {g2} -> {g12}"))?;

    // subadditivity of the replacer radius for n + m <= 4
    let mut rng = random::rng(12);
    let e = random::channel(&mut rng, 2, 2);
    let radius = |n: usize| -> Result<f64, String> {
        Ok(lib(divergence_to_set(DivergenceKind::Umegaki, &lib(tensor_power(&e, n))?, &FreeSetDescriptor::replacer(n)))?.value)
    };
    let r: Vec<f64> = (1..=4).map(radius).collect::<Result<_, _>>()?;
    for n in 1..=3 {
        for m in 1..=(4 - n) {
            ensure(r[n + m - 1] <= r[n - 1] + r[m - 1] + 1e-6, || format!("subadditivity fails at {n}+{m}: {r:?}"))?;
        }
    }

    // test-and-prepare deficit bounds shrink with n
    let f = catalog::depolarizing_qubit();
    let mut bounds = Vec::new();
    for n in 1..=5usize {
        let s = FreeSetDescriptor::singleton_iid(f.clone(), n);
        let free = lib(tensor_power(&f, n))?;
        let target = lib(tensor_power(&catalog::constant_zero(), n))?;
        let dec = lib(robustness_decompose(&target, &s))?;
        let probe_out = lib(tensor_power(&catalog::pure_or_mixed(), n))?;
        let test = lib(hypothesis_test(probe_out.output(0), free.output(0), 0.1))?;
        let theta = lib(build_superchannel(test.optimal_test.clone(), 0, target.clone(), dec.complement.clone()))?;
        let a = lib(arng_deficit(&theta, &free, &s))?;
        let bound = a.bound.ok_or("recipe without a bound")?;
        ensure(a.deficit <= bound + 1e-8, || format!("n={n}: deficit {} > bound {bound}", a.deficit))?;
        bounds.push(bound);
    }
    ensure(bounds.windows(2).all(|w| w[1] < w[0]), || format!("deficit bounds not decreasing: {bounds:?}"))?;
    Ok(format!(
        "Stein gap {g2:.3e} -> {g12:.3e}; replacer radii {:?}; deficit bounds {:?}",
        r.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
        bounds.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Verdict); 10] = [
        ("worked example: relative entropy of resource, channel and Choi versions", 1, example_quartet),
        ("worked example: relabeling superchannel and Choi distances, n = 1..8", 5, continuity_example),
        ("replacer divergence radius equals Holevo capacity", 30, capacity_identity),
        ("hypothesis-testing solver against Neyman–Pearson and duality", 60, hypothesis_solver),
        ("inequality suite: DPI, pinching, converse bound, ordering", 60, inequality_suite),
        ("classical inputs dominate entangled inputs", 30, input_reduction),
        ("minimax exchange for replacer sets", 20, minimax),
        ("max-divergence smoothing bounds and diamond convergence", 60, smoothing),
        ("robustness decomposition reconstruction and membership", 10, decomposition),
        ("finite-n trends: Stein sandwich, subadditivity, deficit bounds", 60, finite_n_trends),
    ];
    let mut failed = 0;
    for (i, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(*budget);
        let (ok, detail) = match verdict {
            Ok(d) if in_budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget} s budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {title} ({} ms, budget {budget} s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_millis()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
