//! The superposition `ψ = c1 δ_{(3,1)} + c2 δ_{(2,2)}` on `Z_7 ⋊ Z_3`.
//!
//! Its distribution splits as `|c1|² W1 + |c2|² W2 + W_int`, where `W1`
//! and `W2` belong to the two delta states and the interference term
//! `W_int` sits at their midpoint `(0,0)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{Wavefunction, NORM_TOLERANCE};
use crate::group::{Element, FiniteGroup};
use crate::repr::Basis;
use crate::wigner::{PhaseSpace, WignerTable};

/// Reference phase `exp(−8πi/7)` for `W_int((0,0); 4 12 13)`
/// up to the factor `c2* c1 / 7`. Direct evaluation gives `exp(−2πi/7)`.
pub fn reference_interference_phase() -> Complex64 {
    Complex64::from_polar(1.0, -8.0 * PI / 7.0)
}

/// The index `(J, M, N, M', N') = (4, 1, 2, 1, 3)` in 1-based notation.
pub const HIGHLIGHT: (i64, usize, usize, usize, usize) = (4, 1, 2, 1, 3);

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub c1: Complex64,
    pub c2: Complex64,
    pub first: Element,
    pub second: Element,
    pub midpoint: Element,
    pub w1: WignerTable,
    pub w2: WignerTable,
    pub interference: WignerTable,
    pub total: WignerTable,
    /// `max |W − (|c1|² W1 + |c2|² W2 + W_int)|`
    pub residual: f64,
}

/// Builds the phase space for the order-21 group in the given basis.
pub fn order21_space(basis: Basis) -> Result<PhaseSpace> {
    PhaseSpace::with_basis(FiniteGroup::metacyclic(7, 3, 2)?, basis)
}

/// Computes the decomposition and cross-checks it against the distribution
/// of the superposition itself.
pub fn decompose(space: &PhaseSpace, c1: Complex64, c2: Complex64) -> Result<Decomposition> {
    let norm_sqr = c1.norm_sqr() + c2.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let group = space.group();
    let (first, second) = match (group.at(3, 1), group.at(2, 2)) {
        (Some(a), Some(b)) if group.order() == 21 => (a, b),
        _ => return Err(Error::IncompatibleTables(format!("{} is not the order-21 group", space.group_id()))),
    };
    let n = group.order();
    let psi1 = Wavefunction::delta(n, first);
    let psi2 = Wavefunction::delta(n, second);
    let w1 = space.wigner_pure(&psi1)?;
    let w2 = space.wigner_pure(&psi2)?;
    // W_int = c2* c1 W(ψ2, ψ1) + c1* c2 W(ψ1, ψ2)
    let cross21 = space.wigner_cross(&psi2, &psi1)?;
    let cross12 = space.wigner_cross(&psi1, &psi2)?;
    let interference = WignerTable::linear_combination(&[(c2.conj() * c1, &cross21), (c1.conj() * c2, &cross12)])?;

    let mut amps = vec![Complex64::new(0.0, 0.0); n];
    amps[first.0] = c1;
    amps[second.0] = c2;
    let total = space.wigner_pure(&Wavefunction::new(amps)?)?;
    let one = Complex64::new(1.0, 0.0);
    let assembled = WignerTable::linear_combination(&[
        (one * c1.norm_sqr(), &w1),
        (one * c2.norm_sqr(), &w2),
        (one, &interference),
    ])?;
    let residual = total.max_abs_diff(&assembled)?;
    let midpoint = space.midpoints().get(first, second);
    Ok(Decomposition { c1, c2, first, second, midpoint, w1, w2, interference, total, residual })
}

impl Decomposition {
    /// Reads `(J, M, N, M', N')`, 1-based, from `table` at `g`.
    pub fn component(table: &WignerTable, g: Element, index: (i64, usize, usize, usize, usize)) -> Option<Complex64> {
        let (label, m, n, mp, np) = index;
        let j = table.labels().iter().position(|&l| l == label)?;
        let d = table.dims()[j];
        if [m, n, mp, np].iter().any(|&x| x == 0 || x > d) {
            return None;
        }
        Some(table.get(g, j, m - 1, n - 1, mp - 1, np - 1))
    }

    /// `W_int((0,0); 4 12 13)`
    pub fn highlighted_interference(&self) -> Complex64 {
        Self::component(&self.interference, self.midpoint, HIGHLIGHT).expect("label 4 has dimension 3")
    }

    /// `(1/7) c2* c1 exp(−8πi/7)`
    pub fn reference_value(&self) -> Complex64 {
        self.c2.conj() * self.c1 * reference_interference_phase() / 7.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::root_of_unity;

    #[test]
    fn supports_and_midpoint() {
        let space = order21_space(Basis::Paper).unwrap();
        let s = 0.5f64.sqrt();
        let d = decompose(&space, Complex64::new(s, 0.0), Complex64::new(0.0, s)).unwrap();
        assert_eq!(space.group().label(d.midpoint), "(0,0)");
        assert_eq!(d.w1.support(), vec![d.first]);
        assert_eq!(d.w2.support(), vec![d.second]);
        assert_eq!(d.interference.support(), vec![space.group().identity()]);
        assert!(d.residual < 1e-15);
    }

    #[test]
    fn highlighted_component_value() {
        let space = order21_space(Basis::Paper).unwrap();
        let c1 = Complex64::new(0.6, 0.0);
        let c2 = Complex64::new(0.0, 0.8);
        let d = decompose(&space, c1, c2).unwrap();
        // D⁴_{12}((2,2)) D⁴_{13}((3,1))* = ω'² ω'^{-3}
        let expected = c2.conj() * c1 * root_of_unity(-1, 7) * (3.0 / 21.0);
        assert!((d.highlighted_interference() - expected).norm() < 1e-15);
        assert!((d.highlighted_interference().norm() - 0.48 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn no_superposition_no_interference() {
        let space = order21_space(Basis::Paper).unwrap();
        let d = decompose(&space, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(d.interference.entries().all(|e| e.6.norm() == 0.0));
        assert!(d.total.max_abs_diff(&d.w1).unwrap() == 0.0);
    }

    #[test]
    fn rejects_unnormalized_coefficients() {
        let space = order21_space(Basis::Paper).unwrap();
        assert!(matches!(
            decompose(&space, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            Err(Error::NotNormalized { .. })
        ));
    }
}
