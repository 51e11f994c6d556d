use crate::error::{OtkError, Result};

/// `s(k)`: 1 for odd `k`, 0 for even `k`.
pub fn s_of_k(k: usize) -> usize {
    k % 2
}

const ROOT_LO: f64 = 1e-9;
const ROOT_HI: f64 = 1.0 - 1e-9;
const ROOT_TOL: f64 = 1e-12;

/// Bisection for an increasing `f` with `f(lo) < 0 < f(hi)`.
fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The unique root in `(0, 1)` of `5γ³ + 5γ² + 3γ − 1`, approximately 0.2274.
pub fn gamma_star() -> f64 {
    bisect_increasing(|g| ((5.0 * g + 5.0) * g + 3.0) * g - 1.0, ROOT_LO, ROOT_HI)
}

/// `G_ω(γ) = (2ω + 1) γ √((1 + γ)/(1 − γ)) + γ`.
pub fn g_omega(omega: usize, gamma: f64) -> f64 {
    (2.0 * omega as f64 + 1.0) * gamma * ((1.0 + gamma) / (1.0 - gamma)).sqrt() + gamma
}

fn check_omega(omega: usize) -> Result<()> {
    if omega == 0 {
        return Err(OtkError::Argument("omega must be >= 1".into()));
    }
    Ok(())
}

/// Root of `G_ω(γ) = 1`; bounds δ_3k for HBROT.
pub fn gamma_star_omega(omega: usize) -> Result<f64> {
    check_omega(omega)?;
    Ok(bisect_increasing(|g| g_omega(omega, g) - 1.0, ROOT_LO, ROOT_HI))
}

/// Root of `G_ω(γ) / √(1 − γ²) = 1`; bounds δ_3k for HBROTP.
pub fn gamma_sharp_omega(omega: usize) -> Result<f64> {
    check_omega(omega)?;
    Ok(bisect_increasing(
        |g| g_omega(omega, g) / (1.0 - g * g).sqrt() - 1.0,
        ROOT_LO,
        ROOT_HI,
    ))
}

/// Block-sum factor `ξ_q` used by the relaxed bounds.
pub fn xi_q(q: usize) -> Result<f64> {
    match q {
        0 => Err(OtkError::Argument("xi_q needs q >= 1".into())),
        1 => Ok(1.0),
        2..=7 => {
            let r = (q as f64).sqrt();
            Ok(2.0 / r + r / 4.0)
        }
        _ => Ok(std::f64::consts::SQRT_2),
    }
}

/// Upper bound on `||h||_2` for `h ∈ R^r` with `||h||_1 <= ζ1` and
/// `||h||_∞ <= ζ2`, built from `g(j) = ζ1/√j + √j ζ2/4`. `g` decreases up to
/// `4ζ1/ζ2` and increases after, so past `t0 = ⌊4ζ1/ζ2⌋` the best integer
/// choice is `t0` or `t0 + 1`. Needs `ζ1 > ζ2 > 0` and `r >= 2`.
pub fn l2_bound_g(zeta1: f64, zeta2: f64, r: usize) -> Result<f64> {
    if !(zeta1 > zeta2 && zeta2 > 0.0 && zeta1.is_finite()) {
        return Err(OtkError::Argument(format!(
            "l2 bound needs zeta1 > zeta2 > 0, got {zeta1}, {zeta2}"
        )));
    }
    if r < 2 {
        return Err(OtkError::Argument(format!("l2 bound needs r >= 2, got {r}")));
    }
    let g = |j: f64| zeta1 / j.sqrt() + j.sqrt() * zeta2 / 4.0;
    let t0 = (4.0 * zeta1 / zeta2).floor();
    if (r as f64) <= t0 {
        Ok(g(r as f64))
    } else {
        Ok(g(t0).min(g(t0 + 1.0)))
    }
}

/// Closed-form bound for a sequence obeying
/// `e_{p+1} <= b1 e_p + b2 e_{p-1} + b3` with `e_0 <= a0`, `e_1 <= a1`:
/// `θ^{p−1}(a1 + (θ − b1) a0) + b3/(1 − θ)`, where `θ = (b1 + √(b1² + 4 b2))/2`.
/// Requires `b1 + b2 < 1` (equivalently `θ < 1`) and `p >= 2`.
pub fn geometric_envelope(a0: f64, a1: f64, b1: f64, b2: f64, b3: f64, p: usize) -> Result<f64> {
    if [a0, a1, b1, b2, b3].iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(OtkError::Argument(format!(
            "envelope inputs must be finite and >= 0: a0={a0}, a1={a1}, b1={b1}, b2={b2}, b3={b3}"
        )));
    }
    if p < 2 {
        return Err(OtkError::Argument(format!("envelope index p must be >= 2, got {p}")));
    }
    if b1 + b2 >= 1.0 {
        return Err(OtkError::Window(format!("b1 + b2 = {} is not < 1", b1 + b2)));
    }
    let theta = envelope_rate(b1, b2);
    Ok(theta.powi(p as i32 - 1) * (a1 + (theta - b1) * a0) + b3 / (1.0 - theta))
}

/// `θ = (b1 + √(b1² + 4 b2))/2`, the larger root of `t² = b1 t + b2`.
pub fn envelope_rate(b1: f64, b2: f64) -> f64 {
    0.5 * (b1 + (b1 * b1 + 4.0 * b2).sqrt())
}
