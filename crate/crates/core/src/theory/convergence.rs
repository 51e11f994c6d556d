use crate::algorithms::Variant;
use crate::error::{OtkError, Result};

use super::bounds::{envelope_rate, gamma_sharp_omega, gamma_star, gamma_star_omega, xi_q};
use super::ric::RicProfile;

/// `num / den` with a fixed value for `0/0` and `+inf` for `x/0`, `x > 0`.
fn limit_ratio(num: f64, den: f64, zero_over_zero: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        zero_over_zero
    } else {
        f64::INFINITY
    }
}

/// `beta * x` with `0 * inf = 0`.
fn scaled(beta: f64, x: f64) -> f64 {
    if beta == 0.0 {
        0.0
    } else {
        beta * x
    }
}

fn check_ab(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite() && beta >= 0.0 && beta.is_finite()) {
        return Err(OtkError::Argument(format!(
            "need alpha > 0 and beta >= 0, got alpha={alpha}, beta={beta}"
        )));
    }
    Ok(())
}

/// Rate and noise constants of the HBOT / HBOTP error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbotConstants {
    pub alpha: f64,
    pub beta: f64,
    pub delta_k: f64,
    /// `δ_{k+s(k)}`
    pub delta_ksk: f64,
    pub eta: f64,
    pub b: f64,
    pub theta: f64,
    pub c2: f64,
}

impl HbotConstants {
    /// Evaluates the constants without checking the parameter window, so
    /// `theta` may be `>= 1`. Fails only when `1 − 2δ_k − δ_{k+s(k)} <= 0`.
    pub fn evaluate(ric: &RicProfile, alpha: f64, beta: f64) -> Result<Self> {
        ric.validate()?;
        check_ab(alpha, beta)?;
        let (dk, d) = (ric.delta_k, ric.delta_ksk());
        let denom = 1.0 - 2.0 * dk - d;
        if denom <= 0.0 {
            return Err(OtkError::Window(format!(
                "1 - 2 delta_k - delta_k+s(k) = {denom} is not > 0"
            )));
        }
        let eta = ((1.0 + dk) / denom).sqrt();
        let b = eta * ((1.0 + beta - alpha).abs() + 5f64.sqrt() * alpha * d);
        let theta = envelope_rate(b, eta * beta);
        let c2 = (2.0 + (1.0 + dk) * alpha) / ((1.0 - theta) * denom.sqrt());
        Ok(Self {
            alpha,
            beta,
            delta_k: dk,
            delta_ksk: d,
            eta,
            b,
            theta,
            c2,
        })
    }

    /// `C1 = ||x_S − x^1|| + (θ − b) ||x_S − x^0||`.
    pub fn c1(&self, err0: f64, err1: f64) -> f64 {
        err1 + (self.theta - self.b) * err0
    }

    /// Bound on `||x_S − x^p||` given the starting errors and `||ν'||`.
    pub fn envelope(&self, p: usize, err0: f64, err1: f64, noise_norm: f64) -> f64 {
        self.c1(err0, err1) * self.theta.powi(p as i32 - 1) + self.c2 * noise_norm
    }

    /// Coefficients `(b1, b2, b3)` of the two-step recursion the bound solves,
    /// with `b3` per unit of `||ν'||`.
    pub fn recursion(&self) -> (f64, f64, f64) {
        (self.b, self.eta * self.beta, (1.0 - self.theta) * self.c2)
    }
}

/// HBOT / HBOTP constants after checking `δ_{k+s(k)} < γ*` and the `(α, β)` window.
pub fn hbot_constants(ric: &RicProfile, alpha: f64, beta: f64) -> Result<HbotConstants> {
    let window = parameter_window(ric, 1, Variant::Hbot, 0)?;
    window.check(alpha, beta)?;
    let c = HbotConstants::evaluate(ric, alpha, beta)?;
    if c.theta >= 1.0 {
        return Err(OtkError::Window(format!("theta = {} is not < 1", c.theta)));
    }
    Ok(c)
}

/// Rate and noise constants of the HBROT / HBROTP error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbrotConstants {
    pub variant: Variant,
    pub alpha: f64,
    pub beta: f64,
    pub omega: usize,
    pub sigma: usize,
    pub xi_sigma: f64,
    pub delta_k: f64,
    pub delta_2k: f64,
    pub delta_3k: f64,
    pub t_k: f64,
    pub z_k: f64,
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub c1_sigma: f64,
    pub c_sigma: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    /// `θ1` for HBROT, `θ2` for HBROTP.
    pub theta: f64,
}

/// Ratio inside `d2`, `(2ωδ3k + δ2k)/(2(ω−1)δ3k + δ2k)`; `(2ω+1)/(2ω−1)` at zero RIC.
fn d2_ratio(omega: f64, d2k: f64, d3k: f64) -> f64 {
    limit_ratio(
        2.0 * omega * d3k + d2k,
        2.0 * (omega - 1.0) * d3k + d2k,
        (2.0 * omega + 1.0) / (2.0 * omega - 1.0),
    )
}

fn relaxed_variant(variant: Variant) -> Result<()> {
    if !variant.is_relaxed() {
        return Err(OtkError::Argument(format!("{variant} is not a relaxed variant")));
    }
    Ok(())
}

/// `d0, d1, d2, t_k, z_k, σ, ξ_σ`: the pieces that do not depend on `(α, β)`.
fn structural(ric: &RicProfile, omega: usize, n: usize) -> Result<(f64, f64, f64, f64, f64, usize, f64)> {
    ric.validate()?;
    let k = ric.k;
    if omega == 0 {
        return Err(OtkError::Argument("omega must be >= 1".into()));
    }
    if n <= 3 * k {
        return Err(OtkError::Argument(format!(
            "relaxed bounds need n > 3k, got n={n}, k={k}"
        )));
    }
    if ric.delta_2k >= 1.0 {
        return Err(OtkError::Window(format!("delta_2k = {} is not < 1", ric.delta_2k)));
    }
    let sigma = (n - 2 * k).div_ceil(k);
    let xi = xi_q(sigma)?;
    let w = omega as f64;
    let (dk, d2k, d3k) = (ric.delta_k, ric.delta_2k, ric.delta_3k);
    let t_k = (1.0 + dk).sqrt() / (1.0 - d2k).sqrt();
    let z_k = (1.0 - d2k * d2k).sqrt();
    let d0 = t_k * (w * xi + 1.0);
    let d1 = t_k * (2.0 * w * d3k + d2k) + d3k;
    let d2 = t_k * (xi * (w - 1.0) + 1.0) * d2_ratio(w, d2k, d3k);
    Ok((d0, d1, d2, t_k, z_k, sigma, xi))
}

impl HbrotConstants {
    /// Evaluates the constants without checking the RIC bound or the window,
    /// so `theta` may be `>= 1`. Needs `n > 3k` and a relaxed `variant`.
    pub fn evaluate(ric: &RicProfile, alpha: f64, beta: f64, omega: usize, n: usize, variant: Variant) -> Result<Self> {
        relaxed_variant(variant)?;
        check_ab(alpha, beta)?;
        let (d0, d1, d2, t_k, z_k, sigma, xi) = structural(ric, omega, n)?;
        let w = omega as f64;
        let (dk, d2k, d3k) = (ric.delta_k, ric.delta_2k, ric.delta_3k);
        let gap = (1.0 - alpha + beta).abs();
        let r_d2 = d2_ratio(w, d2k, d3k);

        let c1_sigma = (xi * (w - 1.0) + 1.0) * gap + alpha * (2.0 * (w - 1.0) * d3k + d2k);
        let c_sigma = (w * xi + 1.0) * gap + alpha * (2.0 * w * d3k + d2k);
        let c2_sigma = xi * gap + 2.0 * alpha * d3k;

        let b1 = t_k * c_sigma + (gap + alpha * d3k);
        // c_σ / c_{1,σ} reduces to the d2 ratio when c_{1,σ} vanishes
        let r_b2 = if c1_sigma > 0.0 { c_sigma / c1_sigma } else { r_d2 };
        let b2 = scaled(beta, t_k * (xi * (w - 1.0) + 1.0) * r_b2) + beta;
        let r_b3 = if c2_sigma > 0.0 {
            limit_ratio(2.0 * d3k, 2.0 * (w - 1.0) * d3k + d2k, 2.0 / (2.0 * w - 1.0)) * c_sigma / c2_sigma
        } else {
            r_d2
        };
        let b3 = (alpha * (2.0 * w - 1.0) * (1.0 + dk) + 2.0) / (1.0 - d2k).sqrt() * r_b3 + alpha * (1.0 + dk).sqrt();

        let theta = match variant {
            Variant::Hbrot => envelope_rate(b1, b2),
            _ => (b1 + (b1 * b1 + 4.0 * b2 * z_k).sqrt()) / (2.0 * z_k),
        };
        Ok(Self {
            variant,
            alpha,
            beta,
            omega,
            sigma,
            xi_sigma: xi,
            delta_k: dk,
            delta_2k: d2k,
            delta_3k: d3k,
            t_k,
            z_k,
            d0,
            d1,
            d2,
            c1_sigma,
            c_sigma,
            b1,
            b2,
            b3,
            theta,
        })
    }

    /// Coefficients `(b1, b2, b3)` of the two-step recursion the bound solves,
    /// with `b3` per unit of `||ν'||`.
    pub fn recursion(&self) -> (f64, f64, f64) {
        match self.variant {
            Variant::Hbrot => (self.b1, self.b2, self.b3),
            _ => {
                let z = self.z_k;
                (
                    self.b1 / z,
                    self.b2 / z,
                    self.b3 / z + (1.0 + self.delta_k).sqrt() / (1.0 - self.delta_2k),
                )
            }
        }
    }

    /// Bound on `||x_S − x^p||` given the starting errors and `||ν'||`.
    pub fn envelope(&self, p: usize, err0: f64, err1: f64, noise_norm: f64) -> f64 {
        let (b1, _, b3) = self.recursion();
        let transient = self.theta.powi(p as i32 - 1) * (err1 + (self.theta - b1) * err0);
        let noise = if noise_norm == 0.0 {
            0.0
        } else {
            b3 / (1.0 - self.theta) * noise_norm
        };
        transient + noise
    }
}

/// HBROT / HBROTP constants after checking `n > 3k`, the δ_3k bound and the `(α, β)` window.
pub fn hbrot_constants(
    ric: &RicProfile,
    alpha: f64,
    beta: f64,
    omega: usize,
    n: usize,
    variant: Variant,
) -> Result<HbrotConstants> {
    relaxed_variant(variant)?;
    let window = parameter_window(ric, omega, variant, n)?;
    window.check(alpha, beta)?;
    let c = HbrotConstants::evaluate(ric, alpha, beta, omega, n, variant)?;
    if c.theta >= 1.0 {
        return Err(OtkError::Window(format!("theta = {} is not < 1", c.theta)));
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// HBOT / HBOTP: `η` and `√5 δ_{k+s(k)}`
    Thresholding { eta: f64, s5d: f64 },
    /// HBROT / HBROTP: `d0, d1, d2` and the right-hand side (1 or `z_k`)
    Relaxed { d0: f64, d1: f64, d2: f64, target: f64 },
}

/// Admissible `(α, β)` for one variant: `0 <= β < beta_max` and, for each
/// such `β`, `α` in an open interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterWindow {
    pub variant: Variant,
    pub beta_max: f64,
    shape: Shape,
}

impl ParameterWindow {
    /// The open `α` interval for `β`, or `None` when `β` is outside `[0, beta_max)`.
    pub fn alpha_interval(&self, beta: f64) -> Option<(f64, f64)> {
        if !(beta >= 0.0 && beta < self.beta_max) {
            return None;
        }
        Some(match self.shape {
            Shape::Thresholding { eta, s5d } => (
                (1.0 + 2.0 * beta - 1.0 / eta) / (1.0 - s5d),
                (1.0 + 1.0 / eta) / (1.0 + s5d),
            ),
            Shape::Relaxed { d0, d1, d2, target } => (
                (scaled(beta, d0 + d2 + 2.0) + d0 + 1.0 - target) / (d0 - d1 + 1.0),
                (d0 + 1.0 + target - scaled(beta, d2 - d0)) / (d0 + d1 + 1.0),
            ),
        })
    }

    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        matches!(self.alpha_interval(beta), Some((lo, hi)) if lo < alpha && alpha < hi)
    }

    /// The piecewise-linear function whose sublevel set `{< target}` is
    /// exactly the window: `θ < 1` for HBOT/HBOTP, and a sufficient
    /// condition for `θ1 < 1` / `θ2 < 1` for HBROT/HBROTP.
    pub fn margin_function(&self, alpha: f64, beta: f64) -> (f64, f64) {
        let gap = (1.0 - alpha + beta).abs();
        match self.shape {
            Shape::Thresholding { eta, s5d } => (eta * (gap + s5d * alpha + beta), 1.0),
            Shape::Relaxed { d0, d1, d2, target } => ((d0 + 1.0) * gap + d1 * alpha + scaled(beta, d2 + 1.0), target),
        }
    }

    fn check(&self, alpha: f64, beta: f64) -> Result<()> {
        check_ab(alpha, beta)?;
        match self.alpha_interval(beta) {
            None => Err(OtkError::Window(format!(
                "beta = {beta} is not in [0, {}) for {}",
                self.beta_max, self.variant
            ))),
            Some((lo, hi)) if !(lo < alpha && alpha < hi) => Err(OtkError::Window(format!(
                "alpha = {alpha} is not in ({lo}, {hi}) for {} at beta = {beta}",
                self.variant
            ))),
            Some(_) => Ok(()),
        }
    }
}

/// The `(α, β)` window of `variant`. `omega` and `n` only matter for the
/// relaxed variants. Fails when the RIC hypothesis of that variant does not hold.
pub fn parameter_window(ric: &RicProfile, omega: usize, variant: Variant, n: usize) -> Result<ParameterWindow> {
    ric.validate()?;
    let (beta_max, shape) = if variant.is_relaxed() {
        let (d0, d1, d2, _, z_k, _, _) = structural(ric, omega, n)?;
        let (bound, name, target) = match variant {
            Variant::Hbrot => (gamma_star_omega(omega)?, "gamma*(omega)", 1.0),
            _ => (gamma_sharp_omega(omega)?, "gamma#(omega)", z_k),
        };
        if ric.delta_3k >= bound {
            return Err(OtkError::Window(format!(
                "delta_3k = {} is not < {name} = {bound}",
                ric.delta_3k
            )));
        }
        ((target - d1) / (1.0 + d1 + d2), Shape::Relaxed { d0, d1, d2, target })
    } else {
        let d = ric.delta_ksk();
        let bound = gamma_star();
        if d >= bound {
            return Err(OtkError::Window(format!(
                "delta_k+s(k) = {d} is not < gamma* = {bound}"
            )));
        }
        let eta = ((1.0 + ric.delta_k) / (1.0 - 2.0 * ric.delta_k - d)).sqrt();
        let s5d = 5f64.sqrt() * d;
        ((1.0 + 1.0 / eta) / (1.0 + s5d) - 1.0, Shape::Thresholding { eta, s5d })
    };
    if beta_max.is_nan() || beta_max <= 0.0 {
        return Err(OtkError::Window(format!(
            "{variant} window is empty (beta_max = {beta_max})"
        )));
    }
    Ok(ParameterWindow {
        variant,
        beta_max,
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ric(k: usize, d: [f64; 4]) -> RicProfile {
        RicProfile::assumed(k, d[0], d[1], d[2], d[3]).unwrap()
    }

    #[test]
    fn hbot_zero_ric_examples() {
        let c = hbot_constants(&RicProfile::zero(2), 1.0, 0.0).unwrap();
        assert_eq!((c.eta, c.b, c.theta, c.c2), (1.0, 0.0, 0.0, 3.0));
        let c = hbot_constants(&RicProfile::zero(2), 1.5, 0.0).unwrap();
        assert_eq!((c.b, c.theta), (0.5, 0.5));
    }

    #[test]
    fn hbot_rejects_large_ric() {
        let err = hbot_constants(&ric(3, [0.1, 0.23, 0.3, 0.4]), 1.0, 0.0).unwrap_err();
        assert!(matches!(err, OtkError::Window(m) if m.contains("gamma*")));
        // even k reads delta_k instead
        assert!(hbot_constants(&ric(2, [0.1, 0.23, 0.3, 0.4]), 1.0, 0.0).is_ok());
    }

    #[test]
    fn hbot_zero_ric_window() {
        let w = parameter_window(&RicProfile::zero(1), 1, Variant::Hbotp, 0).unwrap();
        assert_eq!(w.beta_max, 1.0);
        assert_eq!(w.alpha_interval(0.0), Some((0.0, 2.0)));
        assert_eq!(w.alpha_interval(1.0), None);
        let err = hbot_constants(&RicProfile::zero(1), 2.0, 0.0).unwrap_err();
        assert!(matches!(err, OtkError::Window(m) if m.contains("alpha")));
        let err = hbot_constants(&RicProfile::zero(1), 1.0, 1.5).unwrap_err();
        assert!(matches!(err, OtkError::Window(m) if m.contains("beta")));
    }

    #[test]
    fn hbot_beta_max_vanishes_at_gamma_star() {
        let g = gamma_star();
        let mut prev = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
            let d = g - eps;
            let w = parameter_window(&ric(2, [d, d, d, d]), 1, Variant::Hbot, 0).unwrap();
            assert!(w.beta_max > 0.0 && w.beta_max < prev);
            prev = w.beta_max;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn hbrot_zero_ric_example() {
        for variant in [Variant::Hbrot, Variant::Hbrotp] {
            let c = hbrot_constants(&RicProfile::zero(2), 1.0, 0.0, 1, 20, variant).unwrap();
            assert_eq!((c.b1, c.b2, c.theta, c.c_sigma), (0.0, 0.0, 0.0, 0.0));
            assert!(c.b3.is_finite());
        }
    }

    #[test]
    fn sigma_and_xi() {
        let c = HbrotConstants::evaluate(&RicProfile::zero(10), 1.0, 0.0, 1, 100, Variant::Hbrot).unwrap();
        assert_eq!(c.sigma, 8);
        assert_eq!(c.xi_sigma, std::f64::consts::SQRT_2);
        assert!(HbrotConstants::evaluate(&RicProfile::zero(10), 1.0, 0.0, 1, 30, Variant::Hbrot).is_err());
    }

    #[test]
    fn zero_ric_limit_is_continuous() {
        let at_zero = HbrotConstants::evaluate(&RicProfile::zero(1), 1.3, 0.1, 2, 10, Variant::Hbrot).unwrap();
        let d = 1e-9;
        let near = HbrotConstants::evaluate(&ric(1, [d, d, d, d]), 1.3, 0.1, 2, 10, Variant::Hbrot).unwrap();
        assert!((at_zero.d2 - near.d2).abs() < 1e-6);
        assert!((at_zero.b2 - near.b2).abs() < 1e-6);
        assert!((at_zero.b3 - near.b3).abs() < 1e-6);
    }

    #[test]
    fn relaxed_window_rejects_large_ric() {
        let r = ric(1, [0.0, 0.1, 0.1, 0.209]);
        assert!(parameter_window(&r, 1, Variant::Hbrot, 10).is_ok());
        assert!(matches!(
            parameter_window(&r, 1, Variant::Hbrotp, 10),
            Err(OtkError::Window(m)) if m.contains("gamma#")
        ));
    }

    #[test]
    fn unit_momentum_line_is_admissible() {
        let profiles = [
            RicProfile::zero(2),
            ric(2, [0.02, 0.03, 0.05, 0.08]),
            ric(1, [0.0, 0.1, 0.1, 0.15]),
        ];
        for r in &profiles {
            for variant in [Variant::Hbot, Variant::Hbrot, Variant::Hbrotp] {
                let w = parameter_window(r, 1, variant, 12).unwrap();
                for i in 0..20 {
                    let beta = w.beta_max * i as f64 / 20.0;
                    let (lo, hi) = w.alpha_interval(beta).unwrap();
                    assert!(lo < 1.0 + beta && 1.0 + beta < hi, "{variant} beta={beta}");
                }
            }
        }
    }

    #[test]
    fn recursion_reproduces_envelope() {
        let r = ric(2, [0.01, 0.02, 0.03, 0.05]);
        let c = hbot_constants(&r, 1.1, 0.05).unwrap();
        let (b1, b2, b3) = c.recursion();
        let want = super::super::geometric_envelope(0.7, 0.4, b1, b2, b3 * 0.2, 6).unwrap();
        assert!((c.envelope(6, 0.7, 0.4, 0.2) - want).abs() < 1e-12 * want);
        for variant in [Variant::Hbrot, Variant::Hbrotp] {
            let c = hbrot_constants(&r, 1.05, 0.02, 1, 40, variant).unwrap();
            let (b1, b2, b3) = c.recursion();
            assert!((envelope_rate(b1, b2) - c.theta).abs() < 1e-14);
            let want = super::super::geometric_envelope(0.7, 0.4, b1, b2, b3 * 0.2, 6).unwrap();
            assert!((c.envelope(6, 0.7, 0.4, 0.2) - want).abs() < 1e-12 * want);
        }
    }
}
