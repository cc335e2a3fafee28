//! Independent-oracle checks: integral representations, statistical suites
//! for the samplers, and trend verifications against closed forms.

use rayon::prelude::*;

use lifshits::asymptotics;
use lifshits::bounds;
use lifshits::montecarlo::{self, MCConfig};
use lifshits::numerics::{self, quad, special};
use lifshits::params::{self, DecayParams};
use lifshits::potential::{self, ImpurityPotential};

fn iso4() -> DecayParams {
    DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap()
}

#[test]
fn gamma_quarter_against_integral_representation() {
    // Gamma(1/4) = int_0^inf t^{-3/4} e^{-t} dt = 4 int_0^inf e^{-v^4} dv
    let oracle = quad::integrate_checked(|v| (-v.powi(4)).exp(), 0.0, 12.0, 1e-14, 1e-13, 2_000_000)
        .unwrap()
        .value
        * 4.0;
    let lanczos = special::gamma(0.25).unwrap();
    assert!(
        (oracle - lanczos).abs() / lanczos < 1e-12,
        "integral {oracle} vs lanczos {lanczos}"
    );
}

#[test]
fn quadrature_error_contract_on_closed_forms() {
    // |value - exact| <= 10 * abs_error_estimate wherever the exact value
    // is known
    let gauss = numerics::integrate_axisymmetric(
        |r, z| (-0.5 * (r * r + z * z)).exp(),
        1e-10,
    )
    .unwrap();
    let exact = (2.0 * std::f64::consts::PI).powf(1.5);
    assert!((gauss.value - exact).abs() <= 10.0 * gauss.abs_error_estimate.max(1e-15));

    let p = iso4();
    let i_inf = numerics::i_infinity(&p, 1e-7).unwrap();
    let exact = 4.0 * std::f64::consts::PI / 3.0 * special::gamma(0.25).unwrap();
    assert!((i_inf.value - exact).abs() <= 10.0 * i_inf.abs_error_estimate);

    let cube = quad::integrate_checked(|x| x * x * x, 0.0, 2.0, 1e-13, 0.0, 10_000).unwrap();
    assert!((cube.value - 4.0).abs() <= 10.0 * cube.abs_error_estimate.max(1e-15));
}

#[test]
fn i_infinity_g_scaling_tight() {
    let p1 = iso4();
    let mut pg = iso4();
    pg.g = 2.3;
    let base = numerics::i_infinity(&p1, 1e-10).unwrap().value;
    let scaled = numerics::i_infinity(&pg, 1e-10).unwrap().value;
    let expect = 2.3_f64.powf(0.75) * base;
    assert!(
        (scaled - expect).abs() / expect < 1e-9,
        "scaled {scaled} vs {expect}"
    );
}

#[test]
fn i_t_scaled_increases_to_limit() {
    let p = iso4();
    let u = ImpurityPotential::canonical(p.clone());
    let i_inf = numerics::i_infinity(&p, 1e-9).unwrap().value;
    let mut last = 0.0;
    let mut gaps = Vec::new();
    for t in [1e2, 1e3, 1e4, 1e6] {
        let scaled = numerics::i_t(&u, t, 1e-8).unwrap().value * t.powf(-0.75);
        assert!(scaled > last, "not increasing at t = {t}");
        assert!(scaled < i_inf + 1e-6);
        gaps.push(i_inf - scaled);
        last = scaled;
    }
    assert!(gaps.last().unwrap() < &gaps[1]);
}

#[test]
fn smeared_exponent_approaches_i_infinity() {
    let p = iso4();
    let u = ImpurityPotential::canonical(p.clone());
    let profile = bounds::make_profile(&p).unwrap();
    let i_inf = numerics::i_infinity(&p, 1e-9).unwrap().value;
    let j3 = bounds::smeared_exponent(1e3, &p, &u, &profile, 1e-2).unwrap().value;
    let j6 = bounds::smeared_exponent(1e6, &p, &u, &profile, 1e-2).unwrap().value;
    assert!(
        (j6 - i_inf).abs() < (j3 - i_inf).abs(),
        "J(1e3) = {j3}, J(1e6) = {j6}, I_inf = {i_inf}"
    );
}

#[test]
fn lemma_ratio_limsup_envelope() {
    // the smeared profile stays within a shrinking envelope of u(x)
    let p = iso4();
    let u = ImpurityPotential::canonical(p.clone());
    let profile = bounds::make_profile(&p).unwrap();
    let mut worst: f64 = 0.0;
    for t in [1e3, 1e4, 1e5, 1e6] {
        let r = bounds::lemma1_ratio([1.0, 0.0, 0.0], t, &p, &u, &profile).unwrap();
        worst = worst.max(r);
    }
    assert!(worst <= 1.25, "max ratio {worst}");
}

#[test]
fn upper_bound_scaled_curve_extrapolates_to_constant() {
    let p = iso4();
    let u = ImpurityPotential::canonical(p.clone());
    let target = -(4.0 * std::f64::consts::PI / 3.0) * special::gamma(0.25).unwrap();
    let grid = [1e3, 1e4, 1e5, 1e6];
    let pts = asymptotics::scaled_log_curve(
        |t| bounds::upper_bound_log(t, &p, &u),
        &grid,
        4.0,
    )
    .unwrap();
    // last point within 5%
    let last = pts.last().unwrap().1;
    assert!((last - target).abs() / target.abs() < 0.05);
    // extrapolated constant within 2%
    let est = asymptotics::extrapolate_limit(&pts).unwrap();
    assert!(
        (est.value - target).abs() / target.abs() < 0.02,
        "extrapolated {} vs {target}",
        est.value
    );
}

#[test]
fn bessel_reduction_matches_angular_quadrature() {
    // the Rice kernel is the closed form of the transverse angular integral;
    // check it against brute-force periodic trapezoid
    for (c, r, y) in [(10.0, 0.5, 0.7), (31.6, 1.0, 1.2), (1000.0, 0.9, 0.95), (50.0, 0.0, 0.3)]
    {
        let closed = c * y
            * special::bessel_i0e(c * r * y)
            * (-0.5 * c * (r - y) * (r - y)).exp();
        let n = 16384;
        let mut acc = 0.0;
        for k in 0..n {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let dist_sq = r * r + y * y - 2.0 * r * y * theta.cos();
            acc += (-0.5 * c * dist_sq).exp();
        }
        let brute = c * y * acc / n as f64;
        assert!(
            (closed - brute).abs() <= 1e-6 * brute.max(1e-12),
            "c={c} r={r} y={y}: closed {closed} vs brute {brute}"
        );
    }
}

#[test]
fn campbell_binomial_across_certified_grid() {
    // with truncation certificates satisfied, the identity holds within
    // 3 std_err in at least 99 of 100 independently seeded trials
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 0.01, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    let combos = [(0.5, 60.0), (0.25, 40.0)];
    let hits: usize = combos
        .iter()
        .map(|&(t, radius)| {
            (0..50u64)
                .into_par_iter()
                .map(|k| {
                    let cfg = MCConfig {
                        seed: 91_000 + k,
                        n_samples: 800,
                        radius,
                        workers: 0,
                    };
                    let c = montecarlo::campbell_laplace_mc(&u, &p, t, &cfg).unwrap();
                    assert!(c.certificate_ok, "certificate must hold for this grid");
                    usize::from(c.z_score.abs() <= 3.0)
                })
                .sum::<usize>()
        })
        .sum();
    assert!(hits >= 99, "only {hits}/100 trials within 3 std_err");
}

#[test]
fn monte_carlo_variance_scaling() {
    // std_err ~ 1/sqrt(n): quadrupling n halves it within 20%
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 0.05, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    let run = |n: usize| {
        let cfg = MCConfig {
            seed: 5150,
            n_samples: n,
            radius: 35.0,
            workers: 0,
        };
        montecarlo::classical_idos_mc(&u, &p, 2.0, &cfg).unwrap().std_err
    };
    let ratio = run(400) / run(1600);
    assert!(
        (ratio - 2.0).abs() < 0.4,
        "std_err ratio {ratio} outside [1.6, 2.4]"
    );
}

#[test]
fn poisson_count_census() {
    // mean count over 1e4 seeds within 3 standard errors of rho |B_R|
    let radius = 2.29_f64;
    let rho = 1.0;
    let lambda = rho * 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3);
    let n = 10_000;
    let counts: Vec<f64> = (0..n)
        .map(|seed| potential::sample_poisson(radius, rho, seed as u64).unwrap().count as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (n as f64 - 1.0);
    let se = (var / n as f64).sqrt();
    assert!(
        (mean - lambda).abs() <= 3.0 * se,
        "mean {mean} vs lambda {lambda} (se {se})"
    );
}

#[test]
fn poisson_counts_chi_square_independence() {
    // counts across disjoint seed streams follow Poisson(5); chi-square
    // goodness of fit at the 1% level over 1e4 seeds
    let lambda = 5.0_f64;
    let radius = (lambda / (4.0 / 3.0 * std::f64::consts::PI)).cbrt();
    let n = 10_000usize;
    let k_max = 13usize; // pool the tail
    let mut observed = vec![0.0_f64; k_max + 1];
    for seed in 0..n {
        let c = potential::sample_poisson(radius, 1.0, 500_000 + seed as u64)
            .unwrap()
            .count;
        observed[c.min(k_max)] += 1.0;
    }
    let mut pmf = vec![0.0_f64; k_max + 1];
    let mut acc = (-lambda).exp();
    let mut total = 0.0;
    for (k, slot) in pmf.iter_mut().enumerate().take(k_max) {
        *slot = acc;
        total += acc;
        acc *= lambda / (k as f64 + 1.0);
    }
    pmf[k_max] = 1.0 - total;
    let chi2: f64 = observed
        .iter()
        .zip(&pmf)
        .map(|(&o, &q)| {
            let e = q * n as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    // 99% quantile of chi-square with 13 degrees of freedom
    assert!(chi2 < 27.688, "chi-square statistic {chi2}");
}

#[test]
fn poisson_low_intensity_fraction() {
    // rho |B_R| = 1e-6: the fraction of seeds with any point at all stays
    // at the 1e-6 scale over 1e6 seeds
    let radius = 0.01_f64;
    let rho = 1e-6 / (4.0 / 3.0 * std::f64::consts::PI * radius.powi(3));
    let nonzero: usize = (0..1_000_000u64)
        .into_par_iter()
        .map(|seed| {
            usize::from(
                potential::sample_poisson(radius, rho, 3_000_000 + seed)
                    .unwrap()
                    .count
                    > 0,
            )
        })
        .sum();
    assert!(nonzero <= 6, "{nonzero} of 1e6 seeds had points");
}

#[test]
fn classical_idos_laplace_transform_identity() {
    // t int e^{-tE} N_cl(E) dE = (2 pi t)^{-3/2} exp(-rho I_t) at t = 5
    // within 5%; the Monte Carlo curve is sampled once and reused
    let t = 5.0;
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 0.01, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    let e_grid: Vec<f64> = (1..=120).map(|k| 0.05 * k as f64).collect();
    let cfg = MCConfig {
        seed: 777,
        n_samples: 1000,
        radius: 255.0,
        workers: 0,
    };
    let curve = montecarlo::classical_idos_mc_grid(&u, &p, &e_grid, &cfg).unwrap();

    // trapezoid of t e^{-tE} N(E) with the exact N(0) = 0 anchor
    let mut xs = vec![0.0_f64];
    let mut ys = vec![0.0_f64];
    for (e, r) in e_grid.iter().zip(&curve) {
        xs.push(*e);
        ys.push(t * (-t * e).exp() * r.mean);
    }
    let mut transform = 0.0;
    for i in 1..xs.len() {
        transform += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }

    let i_t = numerics::i_t(&u, t, 1e-8).unwrap().value;
    let reference = (2.0 * std::f64::consts::PI * t).powf(-1.5) * (-p.rho * i_t).exp();
    let rel = (transform - reference).abs() / reference;
    assert!(
        rel < 0.05,
        "transform {transform} vs reference {reference} (rel {rel})"
    );
}
