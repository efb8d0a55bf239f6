//! Adaptive Gauss-Kronrod (7, 15) quadrature for complex-valued integrands.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Kronrod estimate and `|K − G|` on one panel.
pub fn gk15(f: &mut dyn FnMut(f64) -> C, a: f64, b: f64) -> (C, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    val: C,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

#[derive(Copy, Clone, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Initial uniform subdivision.
    pub initial: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4000, initial: 8 }
    }
}

/// `∫_a^b f(t) dt` with the worst panel bisected until the summed error estimate
/// meets `max(abs_tol, rel_tol·|I|)`. Returns the value and the error estimate.
pub fn integrate(mut f: impl FnMut(f64) -> C, a: f64, b: f64, opts: QuadOptions) -> Result<(C, f64)> {
    let mut heap = BinaryHeap::new();
    let n = opts.initial.max(1);
    for i in 0..n {
        let lo = a + (b - a) * i as f64 / n as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n as f64;
        let (val, err) = gk15(&mut f, lo, hi);
        heap.push(Panel { a: lo, b: hi, val, err });
    }
    loop {
        let total: C = heap.iter().map(|p| p.val).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::QuadratureFail("non-finite integrand".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::QuadratureFail(format!("error estimate {err:.3e} after {} panels", heap.len())));
        }
        let p = heap.pop().expect("nonempty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            return Err(Error::QuadratureFail("panel underflow".into()));
        }
        for (lo, hi) in [(p.a, m), (m, p.b)] {
            let (val, err) = gk15(&mut f, lo, hi);
            heap.push(Panel { a: lo, b: hi, val, err });
        }
    }
}

/// Vector-valued `∫_a^b f(t) dt` on `panels` equal GK15 panels, without adaptivity.
/// Returns the Kronrod values and the summed `|K − G|` per component.
pub fn integrate_fixed_vec(mut f: impl FnMut(f64) -> Vec<C>, a: f64, b: f64, panels: usize) -> (Vec<C>, Vec<f64>) {
    let mut val: Vec<C> = Vec::new();
    let mut err: Vec<f64> = Vec::new();
    let w = (b - a) / panels as f64;
    for p in 0..panels {
        let c = a + w * (p as f64 + 0.5);
        let h = 0.5 * w;
        let mut k: Vec<C> = Vec::new();
        let mut g: Vec<C> = Vec::new();
        let mut acc = |t: f64, wk: f64, wg: f64, k: &mut Vec<C>, g: &mut Vec<C>| {
            let v = f(t);
            k.resize(v.len(), C::default());
            g.resize(v.len(), C::default());
            for (i, z) in v.iter().enumerate() {
                k[i] += z * wk;
                g[i] += z * wg;
            }
        };
        acc(c, WGK[7], WG[3], &mut k, &mut g);
        for j in 0..7 {
            let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
            acc(c - h * XGK[j], WGK[j], wg, &mut k, &mut g);
            acc(c + h * XGK[j], WGK[j], wg, &mut k, &mut g);
        }
        val.resize(k.len(), C::default());
        err.resize(k.len(), 0.0);
        for i in 0..k.len() {
            val[i] += k[i] * h;
            err[i] += ((k[i] - g[i]) * h).norm();
        }
    }
    (val, err)
}

/// `∫ f(z) dz` along the polyline through `points`.
pub fn integrate_polyline(mut f: impl FnMut(C) -> C, points: &[C], opts: QuadOptions) -> Result<(C, f64)> {
    let mut total = C::default();
    let mut err = 0.0;
    for w in points.windows(2) {
        let (z0, dz) = (w[0], w[1] - w[0]);
        let (v, e) = integrate(|t| f(z0 + dz * t) * dz, 0.0, 1.0, opts)?;
        total += v;
        err += e;
    }
    Ok((total, err))
}
