//! Clocks whose orbit is a wave packet moving around the unit circle.
//!
//! Level `j` is the Fourier mode `e^{ijφ}/√(2π)`; the initial state is the
//! uniform superposition of `k` consecutive modes, so the packet density
//! `|ψ_t(φ)|²` peaks at `φ = t` and the period is `2π`. Reading out which of
//! `n` equal arcs the packet is in gives the compressed operators
//!
//! ```text
//! (G_m)_{ab} = (1/2π) ∫_{arc m} e^{i(b-a)φ} dφ,
//! ```
//!
//! which sum to the identity but are not projections. The dense
//! representation dilates them: `E v = ⊕_m √G_m v` is an isometry into
//! `C^{n·k}`, the sector readout becomes the block projections there, and
//! `H' = E H E†` satisfies `H'E = EH`, so the embedded orbit reproduces
//! every outcome probability exactly.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::instance::{ClockInstance, FastPath};
use crate::bounds::{OrbitProbe, Snapshot};
use crate::dynamics::Generator;
use crate::error::{Error, Result};
use crate::measurement::{pure_disturbance, pure_entropy_increase, ProjectiveMeasurement};
use crate::quantum::{matrix_function, DensityMatrix, Operator, C64};

/// `g_m(d) = (1/2π) ∫_{arc m} e^{idφ} dφ` for arcs `[2πm/n, 2π(m+1)/n)`.
pub fn sector_moment(m: usize, n_sectors: usize, d: i64) -> C64 {
    if d == 0 {
        return C64::new(1.0 / n_sectors as f64, 0.0);
    }
    let (a, b) = arc(m, n_sectors);
    let d = d as f64;
    (C64::new(0.0, d * b).exp() - C64::new(0.0, d * a).exp()) / C64::new(0.0, 2.0 * PI * d)
}

fn arc(m: usize, n_sectors: usize) -> (f64, f64) {
    let w = 2.0 * PI / n_sectors as f64;
    (w * m as f64, w * (m + 1) as f64)
}

/// Sectors are numbered from 1, counterclockwise from angle 0.
pub fn sector_labels(n_sectors: usize) -> Vec<String> {
    (1..=n_sectors).map(|m| m.to_string()).collect()
}

/// The compressed sector operator `G_m` on `k` levels.
pub fn sector_block(k: usize, m: usize, n_sectors: usize) -> Operator {
    let g = DMatrix::from_fn(k, k, |a, b| sector_moment(m, n_sectors, b as i64 - a as i64));
    Operator::from_matrix(g).unwrap().hermitian_part()
}

/// Closed-form outcome probabilities and rates for the uniform packet.
#[derive(Clone, Debug)]
pub struct CircleProbe {
    k: usize,
    labels: Vec<String>,
    /// `weights[m][d] = (k - d)/k · g_m(d)` for `d = 0..k`.
    weights: Vec<Vec<C64>>,
}

impl CircleProbe {
    pub fn new(k: usize, n_sectors: usize, labels: Vec<String>) -> Result<Self> {
        if k < 2 || n_sectors < 2 {
            return Err(Error::InvalidArgument(format!("need k >= 2 and >= 2 sectors, got {k}, {n_sectors}")));
        }
        if labels.len() != n_sectors {
            return Err(Error::DimensionMismatch { expected: n_sectors, found: labels.len() });
        }
        let weights = (0..n_sectors)
            .map(|m| {
                (0..k)
                    .map(|d| sector_moment(m, n_sectors, d as i64) * ((k - d) as f64 / k as f64))
                    .collect()
            })
            .collect();
        Ok(CircleProbe { k, labels, weights })
    }

    /// `p_m(t) = Σ_{|d|<k} (k-|d|)/k · g_m(d) e^{-idt}` and its derivative.
    fn evaluate(&self, t: f64, with_rate: bool) -> (Vec<f64>, Vec<f64>) {
        let phases: Vec<C64> = (0..self.k).map(|d| C64::new(0.0, -(d as f64) * t).exp()).collect();
        let mut p = Vec::with_capacity(self.weights.len());
        let mut rate = Vec::new();
        for w in &self.weights {
            let mut acc = w[0].re;
            let mut dacc = 0.0;
            for d in 1..self.k {
                let z = w[d] * phases[d];
                acc += 2.0 * z.re;
                if with_rate {
                    // d/dt of 2 Re(w e^{-idt}) = 2 d Im(w e^{-idt})
                    dacc += 2.0 * d as f64 * z.im;
                }
            }
            p.push(acc.clamp(0.0, 1.0));
            rate.push(dacc);
        }
        (p, rate)
    }
}

impl OrbitProbe for CircleProbe {
    fn labels(&self) -> Vec<String> {
        self.labels.clone()
    }

    fn probabilities(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.evaluate(t, false).0)
    }

    fn entropy_increase(&self, t: f64) -> Result<f64> {
        Ok(pure_entropy_increase(&self.evaluate(t, false).0))
    }

    fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let (p, rate) = self.evaluate(t, true);
        Ok(Snapshot {
            t,
            entropy: 0.0,
            entropy_increase: pure_entropy_increase(&p),
            disturbance: pure_disturbance(&p),
            probabilities: p,
            rate,
        })
    }
}

/// Dense dilation of a `k`-level packet clock with level energies
/// `energies` (consecutive, unit spacing) and `n_sectors` arcs.
pub(crate) fn sector_clock(
    name: &str,
    energies: &[f64],
    n_sectors: usize,
    parameter_name: &str,
) -> Result<ClockInstance> {
    let k = energies.len();
    if k < 2 || n_sectors < 2 {
        return Err(Error::InvalidArgument(format!("need >= 2 levels and >= 2 sectors, got {k}, {n_sectors}")));
    }
    let big = n_sectors * k;
    let mut embedding = DMatrix::<C64>::zeros(big, k);
    for m in 0..n_sectors {
        let root = matrix_function(&sector_block(k, m, n_sectors), |x| x.max(0.0).sqrt())?;
        embedding.view_mut((m * k, 0), (k, k)).copy_from(root.matrix());
    }
    let h = DMatrix::from_diagonal(&DVector::from_iterator(k, energies.iter().map(|&e| C64::new(e, 0.0))));
    let h_big = Operator::from_matrix(&embedding * h * embedding.adjoint())?.hermitian_part();
    let psi = DVector::from_element(k, C64::new(1.0 / (k as f64).sqrt(), 0.0));
    let psi_big = &embedding * psi;
    let initial = DensityMatrix::pure(&psi_big)?;

    let projections = (0..n_sectors)
        .map(|m| {
            let diag: Vec<f64> = (0..big).map(|i| if i / k == m { 1.0 } else { 0.0 }).collect();
            Operator::diagonal(&diag)
        })
        .collect();
    let measurement = ProjectiveMeasurement::new(projections, sector_labels(n_sectors))?;
    let bandwidth = energies[k - 1] - energies[0];

    let instance = ClockInstance {
        name: name.into(),
        generator: Generator::Hamiltonian { hamiltonian: h_big },
        initial,
        measurement,
        horizon: 2.0 * PI,
        parameter_name: parameter_name.into(),
        bandwidth: Some(bandwidth),
        target_resolution: None,
        fast_path: Some(FastPath::Circle { k, n_sectors }),
    };
    orientation_self_test(k, n_sectors)?;
    instance.validate()?;
    Ok(instance)
}

/// The packet must sit in sector 0 at `t = π/n` and in sector 1 at `t = 3π/n`
/// (arc centers).
fn orientation_self_test(k: usize, n_sectors: usize) -> Result<()> {
    let probe = CircleProbe::new(k, n_sectors, sector_labels(n_sectors))?;
    let w = PI / n_sectors as f64;
    for (sector, t) in [(0usize, w), (1, 3.0 * w)] {
        let p = probe.probabilities(t)?;
        let best = (0..n_sectors).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        if best != sector {
            return Err(Error::InvalidState(format!(
                "packet orientation self-test failed: at t = {t} the largest sector is {best}, expected {sector}"
            )));
        }
    }
    Ok(())
}

/// `k` Fourier modes `j = 0..k-1` with `H|j> = j|j>`, read out in
/// `n_sectors` equal arcs. `T = 2π`, `ΔE = k - 1`.
pub fn make_circle_clock(k: usize, n_sectors: usize) -> Result<ClockInstance> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("circle clock needs k >= 2, got {k}")));
    }
    let energies: Vec<f64> = (0..k).map(|j| j as f64).collect();
    let mut clock = sector_clock(&format!("circle(k={k}, sectors={n_sectors})"), &energies, n_sectors, "time t")?;
    clock.target_resolution = Some(PI);
    Ok(clock)
}
