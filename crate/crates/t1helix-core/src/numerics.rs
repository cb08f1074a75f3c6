//! Grid numerics: finite-difference stencils, quadrature, monotone interpolation,
//! and the constancy detector used by the helix checks.

/// Fourth-order first derivative of a sampled series on a uniform grid.
///
/// Interior points use the 5-point central stencil; the two points at each
/// end use one-sided 5-point stencils of the same order.
pub fn deriv_series(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "need at least 5 samples for 5-point stencils");
    let mut out = vec![0.0; n];
    let v = values;
    for i in 0..n {
        out[i] = if i >= 2 && i + 2 < n {
            (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h)
        } else if i < 2 {
            // forward-biased, O(h^4)
            (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3]
                - 3.0 * v[i + 4])
                / (12.0 * h)
        } else {
            (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3]
                + 3.0 * v[i - 4])
                / (12.0 * h)
        };
    }
    out
}

/// Cumulative trapezoid of a sampled integrand; result[0] = 0.
pub fn cumtrapz(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * (w[0] + w[1]) * h;
        out.push(acc);
    }
    out
}

/// Monotone cubic (Fritsch-Carlson) interpolant through (xs, ys).
///
/// `xs` must be strictly increasing. Used to invert arc-length tables, where
/// overshoot-free interpolation matters more than smoothness of the second
/// derivative.
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 {
                0.0
            } else {
                // harmonic mean keeps the interpolant monotone
                let w1 = 2.0 * (xs[i + 1] - xs[i]) + (xs[i] - xs[i - 1]);
                let w2 = (xs[i + 1] - xs[i]) + 2.0 * (xs[i] - xs[i - 1]);
                (w1 + w2) / (w1 / d[i - 1] + w2 / d[i])
            };
        }
        MonotoneCubic { xs, ys, slopes: m }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.slopes[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.slopes[n - 1] * (x - self.xs[n - 1]);
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let hseg = self.xs[lo + 1] - self.xs[lo];
        let t = (x - self.xs[lo]) / hseg;
        let (y0, y1) = (self.ys[lo], self.ys[lo + 1]);
        let (m0, m1) = (self.slopes[lo] * hseg, self.slopes[lo + 1] * hseg);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

/// Natural cubic spline for resampling tabulated curve components.
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>, // second derivatives
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 3 && ys.len() == n);
        // Thomas algorithm for the natural-spline tridiagonal system
        let mut a = vec![0.0; n];
        let mut b = vec![2.0; n];
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        for i in 1..n - 1 {
            let hl = xs[i] - xs[i - 1];
            let hr = xs[i + 1] - xs[i];
            a[i] = hl / (hl + hr);
            c[i] = hr / (hl + hr);
            r[i] = 6.0 / (hl + hr) * ((ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl);
        }
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = r[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
        }
        CubicSpline { xs, ys, m }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        if x <= self.xs[0] {
            hi = 1;
        } else if x >= self.xs[n - 1] {
            lo = n - 2;
        } else {
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if self.xs[mid] <= x {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let h = self.xs[hi] - self.xs[lo];
        let t = (x - self.xs[lo]) / h;
        let (y0, y1) = (self.ys[lo], self.ys[hi]);
        let (m0, m1) = (self.m[lo], self.m[hi]);
        y0 * (1.0 - t) + y1 * t
            + h * h / 6.0
                * (((1.0 - t).powi(3) - (1.0 - t)) * m0 + (t.powi(3) - t) * m1)
    }
}

/// Summary statistics of a series over an interior window.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SeriesStats {
    pub mean: f64,
    pub std: f64,
    pub max_abs_dev: f64,
}

/// Mean / std / max deviation of `values[margin .. len-margin]`.
pub fn series_stats(values: &[f64], margin: usize) -> SeriesStats {
    let n = values.len();
    let lo = margin.min(n / 2);
    let hi = n - lo;
    let slice = &values[lo..hi];
    let mean = slice.iter().sum::<f64>() / slice.len() as f64;
    let var = slice.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / slice.len() as f64;
    let max_abs_dev = slice
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0_f64, f64::max);
    SeriesStats {
        mean,
        std: var.sqrt(),
        max_abs_dev,
    }
}

/// Constancy verdict: relative std below `tol` over the interior window.
pub fn is_constant(values: &[f64], margin: usize, tol: f64) -> (bool, SeriesStats) {
    let st = series_stats(values, margin);
    let scale = st.mean.abs().max(1e-12);
    (st.std / scale < tol, st)
}

/// Interior margin used for statistics over nested finite-difference series.
/// Third derivatives stack three stencils, so the first couple of points at
/// each end carry degraded accuracy.
pub const STATS_MARGIN: usize = 8;
