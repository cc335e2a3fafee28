use lifshits::numerics;
use lifshits::params::{self, DecayParams};
use std::time::Instant;

fn main() {
    let sweep = [
        (1.0, 4.0, 4.0, 4.0),
        (1.0, 4.0, 2.0, 5.0),
        (1.0, 3.5, 3.5, 3.5),
        (2.0, 4.5, 4.5, 4.5),
        (1.0, 4.0, 0.0, 4.0),
    ];
    for (g, a, b, c) in sweep {
        let p = DecayParams::new(g, a, b, c, 1.0, 1.0).unwrap();
        let closed = params::laplace_constant_closed(&p).unwrap();
        let t0 = Instant::now();
        match numerics::i_infinity(&p, 1e-7) {
            Ok(q) => println!(
                "({a},{b},{c},g={g}): closed={closed:.10} quad={:.10} rel={:.3e} evals={} conv={} [{:.2}s]",
                q.value, (q.value - closed).abs() / closed, q.evaluations, q.converged, t0.elapsed().as_secs_f64()
            ),
            Err(e) => println!("({a},{b},{c},g={g}): closed={closed:.10} ERROR {e} [{:.2}s]", t0.elapsed().as_secs_f64()),
        }
    }
}
