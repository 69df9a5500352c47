use super::report::BoundReport;
use crate::error::{Error, Result};
use crate::measurement::projective::real_trace_product;
use crate::measurement::{disturbance, entropy_increase, lueders_update, ProjectiveMeasurement};
use crate::quantum::{trace_norm, DensityMatrix, Operator, C64};

/// `ṗ_j = tr(i[H, P_j] ρ)`, the instantaneous rate of each outcome
/// probability along the Hamiltonian orbit through `rho`.
pub fn outcome_rate(h: &Operator, m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<Vec<f64>> {
    h.ensure_same_dim(rho.operator())?;
    m.ensure_dim(rho.dim())?;
    // tr(i[H,P]ρ) = tr(P · i[ρ,H])
    let velocity = rho.operator().commutator(h).scale_complex(C64::new(0.0, 1.0));
    Ok(rates_from_velocity(m, &velocity))
}

/// `ṗ_j = tr(P_j ρ̇)` for an arbitrary state velocity `ρ̇`.
pub fn rates_from_velocity(m: &ProjectiveMeasurement, velocity: &Operator) -> Vec<f64> {
    m.projections()
        .iter()
        .map(|p| real_trace_product(p, velocity))
        .collect()
}

/// `‖ṗ‖₁ = Σ_j |ṗ_j|`.
pub fn l1_rate(h: &Operator, m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<f64> {
    Ok(outcome_rate(h, m, rho)?.iter().map(|x| x.abs()).sum())
}

/// `‖ρ - ρ̃‖₁ ≥ ‖ṗ‖₁ / ΔE`.
pub fn lemma3_bound(h: &Operator, m: &ProjectiveMeasurement, rho: &DensityMatrix, bandwidth: f64) -> Result<BoundReport> {
    if !(bandwidth > 0.0) {
        return Err(Error::NoClock);
    }
    let rate = l1_rate(h, m, rho)?;
    let left = trace_norm(&(rho.operator() - lueders_update(m, rho)?.operator()))?;
    Ok(disturbance_rate_report(left, rate, bandwidth))
}

pub(crate) fn disturbance_rate_report(disturbance: f64, l1: f64, bandwidth: f64) -> BoundReport {
    BoundReport::compare(
        "disturbance-rate",
        "disturbance-rate",
        "||rho - rho~||_1 >= ||p'||_1 / dE",
        disturbance,
        l1 / bandwidth,
    )
    .with_input("l1_rate", l1)
    .with_input("bandwidth", bandwidth)
}

/// `ΔS ≥ ½‖ρ - ρ̃‖₁²`.
pub fn pinsker_bound(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<BoundReport> {
    let ds = entropy_increase(m, rho)?;
    let d = disturbance(m, rho)?;
    Ok(pinsker_report(ds, d))
}

pub(crate) fn pinsker_report(entropy_increase: f64, disturbance: f64) -> BoundReport {
    BoundReport::compare("pinsker", "pinsker", "dS >= ||rho - rho~||_1^2 / 2", entropy_increase, 0.5 * disturbance * disturbance)
        .with_input("trace_norm", disturbance)
}

/// `‖ṗ‖₁ ≤ ΔE`, written as `ΔE ≥ ‖ṗ‖₁`.
pub fn rate_cap_report(l1: f64, bandwidth: f64) -> BoundReport {
    BoundReport::compare("rate-cap", "rate-cap", "dE >= ||p'||_1", bandwidth, l1)
}
