use super::{BetaParams, JacobiParams};
use crate::error::{Error, Result};
use crate::linalg::{ln_gamma, FieldCase};

/// `(c₁, c₂)` with `E[X] = c₁ I` and `E[X²] = c₂ I` for `X ~ Beta_p(a, b)`.
///
/// Real: `c₂ = a/((a+b)(a+b+1)) (a + 1 + (p-1) b/(2a+2b-1))`.
/// Complex: `c₂ = a/((a+b)(a+b+1)) (a + 1 + (p-1) b/(a+b-1))`.
pub fn beta_moment_formulas(params: &BetaParams) -> Result<(f64, f64)> {
    let BetaParams { field, p, a, b } =
        BetaParams::new(params.field, params.p, params.a, params.b)?;
    let s = a + b;
    let coupling = match field {
        FieldCase::Real => b / (2.0 * s - 1.0),
        FieldCase::Complex => b / (s - 1.0),
    };
    let c1 = a / s;
    let c2 = a / (s * (s + 1.0)) * (a + 1.0 + (p as f64 - 1.0) * coupling);
    Ok((c1, c2))
}

/// `ln c_J` with
/// `c_J = ∏_{j=1}^p Γ(1+β/2) Γ(a+b+β(p+j-2)/2) / (Γ(1+βj/2) Γ(a+β(j-1)/2) Γ(b+β(j-1)/2))`.
fn log_jacobi_constant(params: &JacobiParams) -> f64 {
    let JacobiParams { a, b, beta, p } = *params;
    let half = beta / 2.0;
    (1..=p)
        .map(|j| {
            let j = j as f64;
            ln_gamma(1.0 + half) + ln_gamma(a + b + half * (p as f64 + j - 2.0))
                - ln_gamma(1.0 + half * j)
                - ln_gamma(a + half * (j - 1.0))
                - ln_gamma(b + half * (j - 1.0))
        })
        .sum()
}

/// Log density of the Jacobi ensemble
/// `c_J |Δ(λ)|^β ∏ λ_i^{a-1} (1-λ_i)^{b-1}` on `(0, 1)^p`.
pub fn jacobi_log_density(lambda: &[f64], params: &JacobiParams) -> Result<f64> {
    let params = JacobiParams::new(params.a, params.b, params.beta, params.p)?;
    if lambda.len() != params.p {
        return Err(Error::Domain(format!(
            "expected {} eigenvalues, got {}",
            params.p,
            lambda.len()
        )));
    }
    if lambda.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::Domain("eigenvalues must lie in (0, 1)".into()));
    }
    let mut log_vandermonde = 0.0;
    for i in 0..lambda.len() {
        for j in (i + 1)..lambda.len() {
            log_vandermonde += (lambda[j] - lambda[i]).abs().ln();
        }
    }
    let weights: f64 = lambda
        .iter()
        .map(|&x| (params.a - 1.0) * x.ln() + (params.b - 1.0) * (1.0 - x).ln())
        .sum();
    Ok(log_jacobi_constant(&params) + params.beta * log_vandermonde + weights)
}

/// `E[λ_1 ... λ_m] = ∏_{i=1}^m (α + γ(p-i)) / (α + β + γ(2p-i-1))` with `α = a`, `β = b`,
/// `γ = beta/2`.
pub fn aomoto_moments(params: &JacobiParams, m: usize) -> Result<f64> {
    let JacobiParams { a, b, beta, p } =
        JacobiParams::new(params.a, params.b, params.beta, params.p)?;
    if m == 0 || m > p {
        return Err(Error::Domain(format!("need 1 <= m <= p (m={m}, p={p})")));
    }
    let g = beta / 2.0;
    let p = p as f64;
    Ok((1..=m)
        .map(|i| {
            let i = i as f64;
            (a + g * (p - i)) / (a + b + g * (2.0 * p - i - 1.0))
        })
        .product())
}

/// `E[λ_1²]` for the Jacobi ensemble.
pub fn aomoto_second_moment(params: &JacobiParams) -> Result<f64> {
    let JacobiParams { a, b, beta, p } =
        JacobiParams::new(params.a, params.b, params.beta, params.p)?;
    let g = beta / 2.0;
    let q = g * (p as f64 - 1.0);
    let s = a + b + 2.0 * q;
    Ok((a + q) / (s * (s + 1.0)) * ((a + 1.0 + q) + q * (b + q) / (s - g)))
}
