use lifshits::params::DecayParams;
use lifshits::potential::u_limit_rz;

fn main() {
    let p = DecayParams::new(1.0, 3.5, 3.5, 3.5, 1.0, 1.0).unwrap();
    for ds in [1e-14f64, 1e-15, 1.2e-16, 1.1e-16, 0.0] {
        let s: f64 = 1.0 - ds;
        let omr = 1.0 - s;
        let r = s / omr;
        let u = u_limit_rz(r, r, &p);
        let v = -(-u).exp_m1();
        let jac = 1.0 / (omr * omr * omr * omr);
        let prod = 4.0 * std::f64::consts::PI * r * v * jac;
        println!("ds={ds:.3e} s={s:.17} omr={omr:.3e} r={r:.3e} u={u:.3e} v={v:.3e} jac={jac:.3e} prod={prod:.3e}");
    }
}
