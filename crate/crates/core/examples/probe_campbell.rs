use lifshits::montecarlo::{campbell_laplace_mc, MCConfig};
use lifshits::params::DecayParams;
use lifshits::potential::ImpurityPotential;
use std::time::Instant;

fn main() {
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    for seed in [7000u64, 7001, 7002, 7003, 7004] {
        let t0 = Instant::now();
        let cfg = MCConfig { seed, n_samples: 100_000, radius: 50.0, workers: 2 };
        let c = campbell_laplace_mc(&u, &p, 10.0, &cfg).unwrap();
        println!(
            "seed {seed}: mean={:.6e} ref={:.6e} rel_err={:+.4} z={:+.3} shells={} n={} tail={:.3} cert={} [{:.2}s]",
            c.mc.mean, c.reference, c.mc.mean / c.reference - 1.0, c.z_score,
            c.shells, c.mc.n, c.mc.tail_bound, c.certificate_ok, t0.elapsed().as_secs_f64()
        );
    }
}
