//! Exact combinatorics and small complex-vector helpers.
//!
//! Binomial and multinomial coefficients are formed in arbitrary precision and
//! converted to `f64` once, so closed-form coefficients stay accurate far past
//! the point where `f64` factorials overflow.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)` in exact integer arithmetic; zero when `k > n`.
pub fn binomial_exact(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` rounded to the nearest `f64` (may be `inf` for very large `n`).
pub fn binomial(n: usize, k: usize) -> f64 {
    binomial_exact(n, k).to_f64().unwrap_or(f64::INFINITY)
}

/// `n! / (k_1! k_2! ... k_m!)` in exact arithmetic, where `n = Σ k_i`.
pub fn multinomial_exact(parts: &[usize]) -> BigUint {
    let mut acc = BigUint::one();
    let mut running = 0usize;
    for &k in parts {
        running += k;
        acc *= binomial_exact(running, k);
    }
    acc
}

/// Ratio of two big integers as an `f64`, accurate to a couple of ulps even
/// when both operands overflow `f64`.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "ratio with zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    // Shift so the integer quotient carries at least 64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mantissa = quotient.to_f64().unwrap_or(f64::INFINITY);
    scale_by_pow2(mantissa, -shift)
}

fn scale_by_pow2(x: f64, mut exp: i64) -> f64 {
    let mut out = x;
    while exp > 1000 {
        out *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        out *= 2f64.powi(-1000);
        exp += 1000;
    }
    out * 2f64.powi(exp as i32)
}

/// Natural log of a big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `sqrt(Π_K C(N_K, n_K) / C(N, n))`, the amplitude of one product term in a
/// symmetric state split into groups of sizes `totals` with `downs[K]` spin-down
/// particles per group.
pub fn split_amplitude(totals: &[usize], downs: &[usize]) -> f64 {
    debug_assert_eq!(totals.len(), downs.len());
    let n_total: usize = totals.iter().sum();
    let n_down: usize = downs.iter().sum();
    let mut num = BigUint::one();
    for (&big, &small) in totals.iter().zip(downs) {
        if small > big {
            return 0.0;
        }
        num *= binomial_exact(big, small);
    }
    ratio_to_f64(&num, &binomial_exact(n_total, n_down)).sqrt()
}

/// `sqrt(N! / Π N_K!) Π α_K^{N_K}`, the weight of the particle-number sector
/// `counts` when a single occupied mode is spread over modes with amplitudes
/// `alphas`.
pub fn sector_weight(alphas: &[Complex64], counts: &[usize]) -> Complex64 {
    debug_assert_eq!(alphas.len(), counts.len());
    if counts
        .iter()
        .zip(alphas)
        .any(|(&k, a)| k > 0 && a.norm_sqr() == 0.0)
    {
        return Complex64::new(0.0, 0.0);
    }
    let multinomial = multinomial_exact(counts);
    let n: usize = counts.iter().sum();
    if n <= 170 {
        // Direct products are exact enough and keep small cases bit-faithful.
        let mut w = Complex64::new(multinomial.to_f64().unwrap().sqrt(), 0.0);
        for (a, &k) in alphas.iter().zip(counts) {
            w *= a.powu(k as u32);
        }
        return w;
    }
    let mut log_mag = 0.5 * ln_biguint(&multinomial);
    let mut phase = 0.0;
    for (a, &k) in alphas.iter().zip(counts) {
        if k == 0 {
            continue;
        }
        log_mag += k as f64 * a.norm().ln();
        phase += k as f64 * a.arg();
    }
    Complex64::from_polar(log_mag.exp(), phase)
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `<a|b>` with the first argument conjugated.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Multiply by the phase that makes the largest-magnitude entry real and
/// positive. Ties go to the lowest index.
pub fn align_phase(v: &[Complex64]) -> Vec<Complex64> {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        // Small slack so that numerically equal magnitudes pick the first.
        if z.norm() > best_mag + 1e-12 {
            best = i;
            best_mag = z.norm();
        }
    }
    if best_mag <= 0.0 {
        return v.to_vec();
    }
    let phase = v[best].conj() / v[best].norm();
    v.iter().map(|z| z * phase).collect()
}

/// Largest entry-wise deviation after quotienting the global phase.
pub fn max_deviation_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let overlap = inner(a, b);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Round to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Mixed-radix enumeration of all tuples `t` with `0 <= t[k] <= limits[k]`,
/// first position most significant.
pub(crate) fn tuples_up_to(limits: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(limits.len())];
    for &lim in limits {
        let mut next = Vec::with_capacity(out.len() * (lim + 1));
        for prefix in &out {
            for v in 0..=lim {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// All tuples of `parts` non-negative integers summing to `total`, in
/// lexicographic order.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut t = Vec::with_capacity(parts);
            t.push(first);
            t.append(&mut rest);
            out.push(t);
        }
    }
    out
}
