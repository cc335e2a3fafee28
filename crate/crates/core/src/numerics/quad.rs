//! Globally adaptive Gauss-Kronrod quadrature, 1-D and 2-D tensor panels.
//!
//! The 15-point Kronrod rule with embedded 7-point Gauss rule is the
//! workhorse; panels are refined worst-error-first from a heap, and the
//! final sum is accumulated in a fixed (insertion) order so repeated runs
//! are bit-identical.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::numerics::QuadResult;

/// Positive abscissae of the 15-point Kronrod rule (descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights paired with `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule; `WG[3]` belongs to the centre.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style safeguard against over-optimistic `|K - G|` estimates.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 15-point Kronrod panel on `[a, b]`; returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);

    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];

    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = rescale_error((resk - resg) * h, resabs * h.abs(), resasc * h.abs());
    (resk * h, err)
}

#[derive(Debug)]
struct Seg {
    err: f64,
    id: u64,
    a: f64,
    b: f64,
    val: f64,
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.id == other.id
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on error; ties broken by insertion id for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Converges once the summed panel error drops below
/// `max(tol_abs, tol_rel * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut next_id = 0_u64;
    let mut evals = 0_usize;

    let (v0, e0) = gk15(&f, a, b);
    evals += 15;
    if !v0.is_finite() {
        return Err(Error::Convergence(
            "non-finite integrand value in initial panel".into(),
        ));
    }
    heap.push(Seg {
        err: e0,
        id: next_id,
        a,
        b,
        val: v0,
    });
    next_id += 1;
    let mut total_val = v0;
    let mut total_err = e0;

    loop {
        let target = tol_abs.max(tol_rel * total_val.abs());
        if total_err <= target || evals + 30 > max_evals {
            // re-sum in insertion order for run-to-run reproducibility
            let mut segs: Vec<&Seg> = heap.iter().collect();
            segs.sort_by_key(|s| s.id);
            let value = segs.iter().map(|s| s.val).sum();
            let err: f64 = segs.iter().map(|s| s.err).sum();
            return Ok(QuadResult {
                value,
                abs_error_estimate: err,
                evaluations: evals,
                converged: err <= tol_abs.max(tol_rel * value.abs()),
            });
        }

        let worst = heap.pop().expect("heap never empty");
        total_val -= worst.val;
        total_err -= worst.err;
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // panel no longer splittable at f64 resolution; freeze it
            let mut frozen = worst;
            total_val += frozen.val;
            frozen.err = 0.0;
            heap.push(frozen);
            continue;
        }
        for (pa, pb) in [(worst.a, m), (m, worst.b)] {
            let (v, e) = gk15(&f, pa, pb);
            evals += 15;
            if !v.is_finite() {
                return Err(Error::Convergence(format!(
                    "non-finite integrand value on panel [{pa}, {pb}]"
                )));
            }
            total_val += v;
            total_err += e;
            heap.push(Seg {
                err: e,
                id: next_id,
                a: pa,
                b: pb,
                val: v,
            });
            next_id += 1;
        }
    }
}

/// Like [`integrate`] but errors out instead of returning an unconverged result.
pub fn integrate_checked<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let r = integrate(f, a, b, tol_abs, tol_rel, max_evals)?;
    if !r.converged {
        return Err(Error::Convergence(format!(
            "1-d quadrature exhausted {max_evals} evaluations (error estimate {:.3e})",
            r.abs_error_estimate
        )));
    }
    Ok(r)
}

/// Full 15-node offsets/weights for tensor panels (symmetric order).
fn nodes15() -> ([f64; 15], [f64; 15], [f64; 15]) {
    let mut xs = [0.0_f64; 15];
    let mut wk = [0.0_f64; 15];
    let mut wg = [0.0_f64; 15];
    for j in 0..7 {
        xs[j] = -XGK[j];
        xs[14 - j] = XGK[j];
        wk[j] = WGK[j];
        wk[14 - j] = WGK[j];
        if j % 2 == 1 {
            wg[j] = WG[j / 2];
            wg[14 - j] = WG[j / 2];
        }
    }
    xs[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (xs, wk, wg)
}

#[derive(Debug)]
struct Panel {
    err: f64,
    id: u64,
    rect: [f64; 4], // ax, bx, ay, by
    val: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.id == other.id
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Tensor 15x15 Kronrod panel with embedded 7x7 Gauss estimate.
fn gk15_2d<F: Fn(f64, f64) -> f64>(f: &F, rect: [f64; 4]) -> (f64, f64) {
    let (xs, wk, wg) = nodes15();
    let [ax, bx, ay, by] = rect;
    let cx = 0.5 * (ax + bx);
    let hx = 0.5 * (bx - ax);
    let cy = 0.5 * (ay + by);
    let hy = 0.5 * (by - ay);

    let mut resk = 0.0;
    let mut resg = 0.0;
    let mut resabs = 0.0;
    for (i, &xi) in xs.iter().enumerate() {
        let x = cx + hx * xi;
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        let mut row_abs = 0.0;
        for (j, &yj) in xs.iter().enumerate() {
            let v = f(x, cy + hy * yj);
            row_k += wk[j] * v;
            row_g += wg[j] * v;
            row_abs += wk[j] * v.abs();
        }
        resk += wk[i] * row_k;
        resg += wg[i] * row_g;
        resabs += wk[i] * row_abs;
    }
    let scale = hx * hy;
    let err = rescale_error((resk - resg) * scale, resabs * scale.abs(), resabs * scale.abs());
    (resk * scale, err)
}

/// Adaptive integral of `f` over the rectangle `[ax,bx] x [ay,by]`.
pub fn integrate2d<F: Fn(f64, f64) -> f64>(
    f: F,
    rect: [f64; 4],
    tol_abs: f64,
    tol_rel: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut next_id = 0_u64;
    let mut evals = 0_usize;

    let (v0, e0) = gk15_2d(&f, rect);
    evals += 225;
    if !v0.is_finite() {
        return Err(Error::Convergence(
            "non-finite integrand value in initial 2-d panel".into(),
        ));
    }
    heap.push(Panel {
        err: e0,
        id: next_id,
        rect,
        val: v0,
    });
    next_id += 1;
    let mut total_val = v0;
    let mut total_err = e0;

    loop {
        let target = tol_abs.max(tol_rel * total_val.abs());
        if total_err <= target || evals + 4 * 225 > max_evals {
            let mut panels: Vec<&Panel> = heap.iter().collect();
            panels.sort_by_key(|p| p.id);
            let value: f64 = panels.iter().map(|p| p.val).sum();
            let err: f64 = panels.iter().map(|p| p.err).sum();
            return Ok(QuadResult {
                value,
                abs_error_estimate: err,
                evaluations: evals,
                converged: err <= tol_abs.max(tol_rel * value.abs()),
            });
        }

        let worst = heap.pop().expect("heap never empty");
        total_val -= worst.val;
        total_err -= worst.err;
        let [ax, bx, ay, by] = worst.rect;
        let mx = 0.5 * (ax + bx);
        let my = 0.5 * (ay + by);
        if mx <= ax || mx >= bx || my <= ay || my >= by {
            let mut frozen = worst;
            total_val += frozen.val;
            frozen.err = 0.0;
            heap.push(frozen);
            continue;
        }
        for sub in [
            [ax, mx, ay, my],
            [mx, bx, ay, my],
            [ax, mx, my, by],
            [mx, bx, my, by],
        ] {
            let (v, e) = gk15_2d(&f, sub);
            evals += 225;
            if !v.is_finite() {
                return Err(Error::Convergence(format!(
                    "non-finite integrand value on panel {sub:?}"
                )));
            }
            total_val += v;
            total_err += e;
            heap.push(Panel {
                err: e,
                id: next_id,
                rect: sub,
                val: v,
            });
            next_id += 1;
        }
    }
}

/// Fixed-order Gauss-Legendre rule on `[-1, 1]` (Newton-refined nodes).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, d)
}
