use lifshits::numerics;
use lifshits::params::DecayParams;
use lifshits::potential::{self, ImpurityPotential};
use std::time::Instant;

fn main() {
    let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
    let u = ImpurityPotential::canonical(p.clone());
    let t0 = Instant::now();
    let tail = potential::truncation_tail_bound(50.0, &p).unwrap();
    println!("tail bound: {tail:.6} [{:.3}s]", t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let ball = numerics::i_t_ball(&u, 10.0, 50.0, 1e-9).unwrap();
    println!("i_t_ball: {:.8} evals={} [{:.3}s]", ball.value, ball.evaluations, t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let full = numerics::i_t(&u, 10.0, 1e-8).unwrap();
    println!("i_t full: {:.8} evals={} [{:.3}s]", full.value, full.evaluations, t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let iinf = numerics::i_infinity(&p, 1e-7).unwrap();
    println!("i_infinity: {:.8} evals={} [{:.3}s]", iinf.value, iinf.evaluations, t0.elapsed().as_secs_f64());
}
