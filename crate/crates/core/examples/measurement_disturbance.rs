//! Pointwise chain along a random Hamiltonian orbit: entropy increase,
//! trace-norm disturbance and the rate of change of the outcome
//! distribution, each bounded by the next.

use qclock::bounds::{lemma3_bound, pinsker_bound, rate_cap_report};
use qclock::dynamics::{energy_bandwidth, propagate};
use qclock::random;
use qclock::tol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qclock::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dim = 4;
    let h = random::hermitian(&mut rng, dim, 1.0);
    let rho = random::pure_state(&mut rng, dim);
    let m = random::projective_measurement(&mut rng, dim, Some(2));
    let de = energy_bandwidth(&h, &rho, tol::OCCUPATION)?;
    println!("dE = {de:.6}");

    for k in 0..6 {
        let t = 0.5 * k as f64;
        let rt = propagate(&h, &rho, t)?;
        let lemma3 = lemma3_bound(&h, &m, &rt, de)?;
        let l1 = lemma3.inputs["l1_rate"];
        println!("t = {t:.1}");
        println!("  {}", pinsker_bound(&m, &rt)?);
        println!("  {lemma3}");
        println!("  {}", rate_cap_report(l1, de));
    }
    Ok(())
}
