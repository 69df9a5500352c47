//! Matrix exponential by scaling and squaring with a diagonal Padé
//! approximant.

use nalgebra::DMatrix;

use crate::quantum::C64;

/// Diagonal Padé order.
const ORDER: usize = 6;

/// Coefficients `c_k = (2q-k)! q! / ((2q)! k! (q-k)!)` for `q = 6`.
const PADE: [f64; ORDER + 1] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// The scaled matrix is brought to 1-norm at most this before the Padé step.
const THETA: f64 = 0.5;

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Number of squarings used for a matrix of the given 1-norm.
pub fn squarings_for(norm: f64) -> u32 {
    if norm <= THETA {
        0
    } else {
        (norm / THETA).log2().ceil() as u32
    }
}

/// `exp(A)` for a dense complex matrix.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let s = squarings_for(one_norm(a));
    let scaled = a * C64::new(0.5f64.powi(s as i32), 0.0);

    let id = DMatrix::<C64>::identity(n, n);
    let mut power = id.clone();
    let mut num = id.clone();
    let mut den = id.clone();
    for (k, &c) in PADE.iter().enumerate().skip(1) {
        power = &power * &scaled;
        let term = &power * C64::new(c, 0.0);
        num += &term;
        if k % 2 == 0 {
            den += &term;
        } else {
            den -= &term;
        }
    }
    let mut result = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is nonsingular for ||A|| <= 1/2");
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{matrix_function, Operator};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::<C64>::zeros(3, 3);
        assert_eq!(expm(&z), DMatrix::identity(3, 3));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(-3.0, 0.0),
            C64::new(0.0, 2.0),
        ]));
        let e = expm(&d);
        assert!((e[(0, 0)] - C64::new(1f64.exp(), 0.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - C64::new((-3f64).exp(), 0.0)).norm() < 1e-15);
        assert!((e[(2, 2)] - C64::new(2f64.cos(), 2f64.sin())).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_jordan_block() {
        // exp([[0, a], [0, 0]]) = [[1, a], [0, 1]] exactly
        let mut a = DMatrix::<C64>::zeros(2, 2);
        a[(0, 1)] = C64::new(50.0, 0.0);
        let e = expm(&a);
        assert!((e[(0, 1)] - C64::new(50.0, 0.0)).norm() < 1e-10);
        assert!((e[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn agrees_with_spectral_exponential_of_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for scale in [0.1, 1.0, 10.0] {
            let h = random::hermitian(&mut rng, 5, scale);
            let via_eig = matrix_function(&h, f64::exp).unwrap();
            let via_pade = Operator::from_matrix(expm(h.matrix())).unwrap();
            let rel = via_pade.max_abs_diff(&via_eig) / via_eig.max_abs();
            assert!(rel < 1e-12, "scale {scale}: rel err {rel}");
        }
    }

    #[test]
    fn additive_in_commuting_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let h = random::hermitian(&mut rng, 4, 1.0);
        let a = h.matrix() * C64::new(0.0, -0.7);
        let b = h.matrix() * C64::new(0.0, -1.9);
        let lhs = expm(&(&a + &b));
        let rhs = expm(&a) * expm(&b);
        assert!((lhs - rhs).camax() < 1e-12);
    }
}
