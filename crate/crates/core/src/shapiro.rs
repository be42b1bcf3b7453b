// Shapiro-Wilk W test with Royston's AS R94 approximation (3 <= n <= 5000).
//
// Coefficients for the expected normal order statistics come from Royston's
// polynomial corrections; p-values use the exact formula for n = 3, a
// log-normal transform of 1 - W for 4 <= n <= 11, and a log-normal fit in
// log(n) for n >= 12.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const MIN_LEN: usize = 3;
pub const MAX_LEN: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
}

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

/// `c[0] + c[1] x + c[2] x^2 + ...`
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Half of the antisymmetric weight vector: `a[i]` for the `i`-th smallest
/// order statistic pairing, `i < n / 2`, all positive.
fn weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let normal = std_normal();
    let an = n as f64;
    let mut m: Vec<f64> = (1..=half)
        .map(|i| normal.inverse_cdf((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let (first_scaled, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        m[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    m[0] = a1;
    for v in &mut m[first_scaled..] {
        *v /= -fac;
    }
    m
}

/// Shapiro-Wilk statistic and p-value of `v`.
pub fn shapiro_wilk(v: &[f64]) -> Result<ShapiroWilk> {
    let n = v.len();
    if !(MIN_LEN..=MAX_LEN).contains(&n) {
        return Err(Error::DegenerateSample("Shapiro-Wilk needs 3 to 5000 observations"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("sample contains non-finite values".into()));
    }
    let mut x = v.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range < 1e-19 {
        return Err(Error::DegenerateSample("zero variance"));
    }

    let half = weights(n);
    // full antisymmetric coefficient vector over the sorted sample
    let coef: Vec<f64> = (0..n)
        .map(|i| {
            let j = n - 1 - i;
            match i.cmp(&j) {
                std::cmp::Ordering::Less => -half[i],
                std::cmp::Ordering::Greater => half[j],
                std::cmp::Ordering::Equal => 0.0,
            }
        })
        .collect();

    let an = n as f64;
    let sa = coef.iter().sum::<f64>() / an;
    let sx = x.iter().map(|xi| xi / range).sum::<f64>() / an;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (c, xi) in coef.iter().zip(&x) {
        let asa = c - sa;
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    // 1 - W, formed to limit cancellation when W is close to 1
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = (1.0 - w1).clamp(0.0, 1.0);

    let p_value = if n == 3 {
        const SIX_OVER_PI: f64 = 6.0 / std::f64::consts::PI;
        const PI_OVER_THREE: f64 = std::f64::consts::FRAC_PI_3;
        (SIX_OVER_PI * (w.sqrt().asin() - PI_OVER_THREE)).max(0.0)
    } else if n <= 11 {
        let gamma = poly(&G, an);
        let y = w1.ln();
        if y >= gamma {
            1e-99
        } else {
            let y = -(gamma - y).ln();
            let m = poly(&C3, an);
            let s = poly(&C4, an).exp();
            upper_tail(y, m, s)
        }
    } else {
        let ln_n = an.ln();
        let m = poly(&C5, ln_n);
        let s = poly(&C6, ln_n).exp();
        upper_tail(w1.ln(), m, s)
    };

    Ok(ShapiroWilk {
        w,
        p_value: p_value.clamp(0.0, 1.0),
    })
}

fn upper_tail(y: f64, mean: f64, sd: f64) -> f64 {
    std_normal().sf((y - mean) / sd)
}
