use lifshits::montecarlo::{campbell_laplace_mc, MCConfig};
use lifshits::params::DecayParams;
use lifshits::potential::ImpurityPotential;
use std::time::Instant;

fn main() {
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    for (n, r) in [(1000usize, 50.0f64), (100_000, 50.0), (100_000, 25.0), (100_000, 12.5)] {
        let t0 = Instant::now();
        let cfg = MCConfig { seed: 7000, n_samples: n, radius: r, workers: 2 };
        let c = campbell_laplace_mc(&u, &p, 10.0, &cfg).unwrap();
        println!("n={n} R={r}: shells={} total_samples={} [{:.3}s]", c.shells, c.mc.n, t0.elapsed().as_secs_f64());
    }
}
