use super::{check_probability, std_normal_quantile};
use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;

/// Regularized lower incomplete gamma function P(a, x).
///
/// Power series below `a + 1`, Lentz continued fraction for Q above.
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!("P(a, x) needs a > 0, x >= 0; got a={a}, x={x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let log_prefix = a * x.ln() - x - libm::lgamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut term = 1.0 / a;
        let mut sum = term;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        Ok((sum.ln() + log_prefix).exp().min(1.0))
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (h.ln() + log_prefix).exp();
        Ok((1.0 - q).max(0.0))
    }
}

pub fn chi_square_cdf(q: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("chi-square degrees of freedom must be >= 1"));
    }
    if q <= 0.0 {
        return Ok(0.0);
    }
    reg_lower_gamma(0.5 * f64::from(k), 0.5 * q)
}

fn chi_square_pdf(q: f64, k: u32) -> f64 {
    let h = 0.5 * f64::from(k);
    ((h - 1.0) * q.ln() - 0.5 * q - h * std::f64::consts::LN_2 - libm::lgamma(h)).exp()
}

/// Quantile of the chi-square distribution with `k` degrees of freedom.
///
/// Newton iterations from the Wilson–Hilferty start, kept inside a bracket
/// that is tightened on every step so a bad Newton step falls back to
/// bisection.
pub fn chi_square_quantile(p: f64, k: u32) -> Result<f64> {
    check_probability(p)?;
    if k == 0 {
        return Err(Error::domain("chi-square degrees of freedom must be >= 1"));
    }
    let kf = f64::from(k);
    let z = std_normal_quantile(p)?;
    let v = 2.0 / (9.0 * kf);
    let wh = kf * (1.0 - v + z * v.sqrt()).powi(3);

    let mut lo = 0.0_f64;
    let mut hi = kf.max(1.0);
    while chi_square_cdf(hi, k)? < p {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = if wh > lo && wh < hi { wh } else { 0.5 * (lo + hi) };

    for _ in 0..200 {
        let f = chi_square_cdf(x, k)? - p;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dens = chi_square_pdf(x, k);
        let newton = x - f / dens;
        let next = if dens > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * x.abs().max(1e-300) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
