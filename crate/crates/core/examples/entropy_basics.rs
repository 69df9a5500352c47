//! Entropy generated by one projective measurement of a random qubit state,
//! and the relative-entropy identity behind it.

use qclock::measurement::{disturbance, entropy_increase, lueders_update, ProjectiveMeasurement};
use qclock::quantum::{relative_entropy, von_neumann_entropy};
use qclock::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qclock::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = random::density_matrix(&mut rng, 3, Some(2));
    let m = ProjectiveMeasurement::computational_basis(3);
    let post = lueders_update(&m, &rho)?;

    let ds = entropy_increase(&m, &rho)?;
    println!("S(rho)            = {:.12}", von_neumann_entropy(&rho));
    println!("S(rho~)           = {:.12}", von_neumann_entropy(&post));
    println!("dS                = {ds:.12}");
    println!("K(rho || rho~)    = {:.12}", relative_entropy(&rho, &post)?);
    let d = disturbance(&m, &rho)?;
    println!("||rho - rho~||_1  = {d:.12}");
    println!("Pinsker floor     = {:.12}", 0.5 * d * d);
    Ok(())
}
