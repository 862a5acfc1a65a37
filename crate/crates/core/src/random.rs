//! Seeded random states for property checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::fourier::Wavefunction;
use crate::wigner::DensityOperator;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A Haar-distributed normalized state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Wavefunction {
    loop {
        let amps: Vec<Complex64> = (0..order).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = Wavefunction::new(amps).and_then(|w| w.normalized()) {
            return psi;
        }
    }
}

/// `A A† / Tr(A A†)` for a complex Gaussian `A`; full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, order: usize) -> DensityOperator {
    let a = DMatrix::from_fn(order, order, |_, _| gaussian(rng));
    let mut rho = &a * a.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    // symmetrize away rounding
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityOperator::new(rho).expect("gaussian construction is a density operator")
}
