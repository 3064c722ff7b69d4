/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first cut into 64 panels so oscillatory integrands are
/// resolved before the error estimate is trusted.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let panel_tol = tol / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = lo + h;
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            let whole = simpson(lo, hi, flo, fmid, fhi);
            adapt(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, 40)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `int conj(phi_A(w)) phi_B(w) dw` for two Gaussian spectral amplitudes of
/// width `delta` whose arrival times differ by `l_um`.
///
/// The integrand is `(2 pi delta^2)^(-1/2) exp(-w^2 / (2 delta^2)) exp(i w l)`;
/// its imaginary part is odd in `w` and integrates to zero, so only the real
/// part is evaluated.
pub(crate) fn spectral_overlap(l_um: f64, delta: f64) -> f64 {
    let norm = 1.0 / (2.0 * std::f64::consts::PI * delta * delta).sqrt();
    let half_span = 12.0 * delta;
    integrate(
        |w| norm * (-w * w / (2.0 * delta * delta)).exp() * (w * l_um).cos(),
        -half_span,
        half_span,
        1e-13,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = integrate(|x| 3.0 * x * x + 2.0 * x, 0.0, 2.0, 1e-14);
        assert!((v - 12.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_oscillatory_function() {
        let v = integrate(|x| (5.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-13);
        assert!((v - 0.4).abs() < 1e-11);
    }

    #[test]
    fn spectral_amplitude_is_normalized() {
        for delta in [0.001, 0.01, 0.5, 3.0] {
            assert!((spectral_overlap(0.0, delta) - 1.0).abs() < 1e-11);
        }
    }
}
