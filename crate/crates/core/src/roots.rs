//! Scan-and-bisect root location for opaque scalar functions.

/// Uniformly spaced samples on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |k| if k == n - 1 { hi } else { lo + k as f64 * step })
}

/// Bisection on a bracketing interval until it cannot be halved further.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // pick the endpoint with the smaller residual
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

/// Every sign change (or exact zero) of `f` on an `n`-point scan of `[lo, hi]`,
/// refined by bisection, sorted and deduplicated at spacing `dedup`.
pub fn scan_zeros(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize, dedup: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for y in linspace(lo, hi, n) {
        let fy = f(y);
        if fy == 0.0 {
            roots.push(y);
        } else if let Some((py, pf)) = prev {
            if pf != 0.0 && (pf < 0.0) != (fy < 0.0) && pf.is_finite() && fy.is_finite() {
                roots.push(bisect(f, py, y));
            }
        }
        prev = Some((y, fy));
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= dedup);
    roots
}

/// Golden-section refinement of a local extremum of `f` inside `[a, b]`.
/// `maximize` selects max vs min; returns the best value seen.
pub fn golden_extremum(f: &dyn Fn(f64) -> f64, a: f64, b: f64, maximize: bool) -> f64 {
    let sign = if maximize { -1.0 } else { 1.0 };
    let g = |y: f64| sign * f(y);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..100 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    sign * gc.min(gd).min(g(a)).min(g(b))
}
