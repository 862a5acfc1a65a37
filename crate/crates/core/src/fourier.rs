//! The group Fourier transform between `ψ(g)` and `ψ_{JMN}`.
//!
//! `ψ_{JMN} = √(N_J/|G|) Σ_g D^J_{MN}(g)* ψ(g)` and, by completeness,
//! `ψ(g) = Σ_{JMN} √(N_J/|G|) D^J_{MN}(g) ψ_{JMN}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::repr::{IrrepSet, TOLERANCE};

/// Tolerance on `‖ψ‖² = 1` for normalized states.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Position-space amplitudes, one per element index.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    amplitudes: Vec<Complex64>,
}

impl Wavefunction {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Wavefunction { amplitudes })
    }

    pub fn zeros(order: usize) -> Self {
        Wavefunction { amplitudes: vec![Complex64::new(0.0, 0.0); order] }
    }

    /// `δ_{g, g0}`
    pub fn delta(order: usize, g0: Element) -> Self {
        let mut psi = Self::zeros(order);
        psi.amplitudes[g0.0] = Complex64::new(1.0, 0.0);
        psi
    }

    pub fn uniform(order: usize) -> Self {
        let a = 1.0 / (order as f64).sqrt();
        Wavefunction { amplitudes: vec![Complex64::new(a, 0.0); order] }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn get(&self, g: Element) -> Complex64 {
        self.amplitudes[g.0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Wavefunction { amplitudes: self.amplitudes.iter().map(|z| z / n).collect() })
    }

    /// `ψ'(g) = ψ(g1⁻¹ g)`
    pub fn left_translated(&self, group: &FiniteGroup, g1: Element) -> Self {
        let inv = group.inv(g1);
        Wavefunction { amplitudes: group.elements().map(|g| self.get(group.mul(inv, g))).collect() }
    }

    /// `ψ''(g) = ψ(g g2)`
    pub fn right_translated(&self, group: &FiniteGroup, g2: Element) -> Self {
        Wavefunction { amplitudes: group.elements().map(|g| self.get(group.mul(g, g2))).collect() }
    }

    /// SHA-256 over the little-endian bit patterns of `(re, im)` per element.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for z in &self.amplitudes {
            hasher.update(z.re.to_le_bytes());
            hasher.update(z.im.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Momentum-space coefficients stored irrep-major, then row, then column.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavefunction {
    dims: Vec<usize>,
    coefficients: Vec<Complex64>,
}

impl MomentumWavefunction {
    pub fn new(set: &IrrepSet, coefficients: Vec<Complex64>) -> Result<Self> {
        let expected = set.dimension_sum();
        if coefficients.len() != expected {
            return Err(Error::CoefficientLength { len: coefficients.len(), expected });
        }
        Ok(MomentumWavefunction { dims: set.dims(), coefficients })
    }

    pub fn zeros(set: &IrrepSet) -> Self {
        MomentumWavefunction {
            dims: set.dims(),
            coefficients: vec![Complex64::new(0.0, 0.0); set.dimension_sum()],
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `ψ_{JMN}` for irrep position `j` and 0-based `m`, `n`.
    pub fn get(&self, j: usize, m: usize, n: usize) -> Complex64 {
        let offset: usize = self.dims[..j].iter().map(|d| d * d).sum();
        self.coefficients[offset + m * self.dims[j] + n]
    }

    pub fn get_mut(&mut self, j: usize, m: usize, n: usize) -> &mut Complex64 {
        let offset: usize = self.dims[..j].iter().map(|d| d * d).sum();
        &mut self.coefficients[offset + m * self.dims[j] + n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(Complex64::norm_sqr).sum()
    }

    /// `(J position, M, N, ψ_{JMN})` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, Complex64)> + '_ {
        let mut out = Vec::with_capacity(self.coefficients.len());
        let mut idx = 0;
        for (j, &d) in self.dims.iter().enumerate() {
            for m in 0..d {
                for n in 0..d {
                    out.push((j, m, n, self.coefficients[idx]));
                    idx += 1;
                }
            }
        }
        out.into_iter()
    }
}

fn ensure_complete(group: &FiniteGroup, set: &IrrepSet) -> Result<()> {
    if set.order() != group.order() || set.dimension_sum() != group.order() {
        return Err(Error::DimensionSum { sum: set.dimension_sum(), order: group.order() });
    }
    let residual = set.completeness_residual();
    if residual > TOLERANCE {
        return Err(Error::Completeness { residual });
    }
    Ok(())
}

/// `ψ_{JMN} = √(N_J/|G|) Σ_g D^J_{MN}(g)* ψ(g)`
pub fn forward(group: &FiniteGroup, set: &IrrepSet, psi: &Wavefunction) -> Result<MomentumWavefunction> {
    ensure_complete(group, set)?;
    if psi.len() != group.order() {
        return Err(Error::StateLength { len: psi.len(), order: group.order() });
    }
    let order = group.order() as f64;
    let mut out = MomentumWavefunction::zeros(set);
    let mut idx = 0;
    for irrep in set.irreps() {
        let scale = (irrep.dim as f64 / order).sqrt();
        for m in 0..irrep.dim {
            for n in 0..irrep.dim {
                let sum: Complex64 = group
                    .elements()
                    .map(|g| irrep.entry(g, m, n).conj() * psi.get(g))
                    .sum();
                out.coefficients[idx] = sum * scale;
                idx += 1;
            }
        }
    }
    Ok(out)
}

/// `ψ(g) = Σ_{JMN} √(N_J/|G|) D^J_{MN}(g) φ_{JMN}`
pub fn inverse(group: &FiniteGroup, set: &IrrepSet, phi: &MomentumWavefunction) -> Result<Wavefunction> {
    ensure_complete(group, set)?;
    if phi.dims != set.dims() {
        return Err(Error::CoefficientLength { len: phi.coefficients.len(), expected: set.dimension_sum() });
    }
    let order = group.order() as f64;
    let amplitudes = group
        .elements()
        .map(|g| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0;
            for irrep in set.irreps() {
                let scale = (irrep.dim as f64 / order).sqrt();
                for m in 0..irrep.dim {
                    for n in 0..irrep.dim {
                        acc += irrep.entry(g, m, n) * phi.coefficients[idx] * scale;
                        idx += 1;
                    }
                }
            }
            acc
        })
        .collect();
    Ok(Wavefunction { amplitudes })
}

/// A state as written to disk: dense `[re, im]` pairs per element, or a
/// sparse list where missing elements are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateDocument {
    Dense(Vec<[f64; 2]>),
    Sparse(Vec<SparseAmplitude>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseAmplitude {
    pub element: ElementRef,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// An element given either by index or by label such as `"(3,1)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

impl ElementRef {
    pub fn resolve(&self, group: &FiniteGroup) -> Result<Element> {
        match self {
            ElementRef::Index(i) => group.element(*i),
            ElementRef::Label(l) => group.find_label(l),
        }
    }
}

impl StateDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state document: {e}")))
    }

    pub fn to_wavefunction(&self, group: &FiniteGroup) -> Result<Wavefunction> {
        match self {
            StateDocument::Dense(pairs) => {
                if pairs.len() != group.order() {
                    return Err(Error::StateLength { len: pairs.len(), order: group.order() });
                }
                Wavefunction::new(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            }
            StateDocument::Sparse(entries) => {
                let mut amps = vec![Complex64::new(0.0, 0.0); group.order()];
                for entry in entries {
                    let g = entry.element.resolve(group)?;
                    amps[g.0] += Complex64::new(entry.re, entry.im);
                }
                Wavefunction::new(amps)
            }
        }
    }

    pub fn dense(psi: &Wavefunction) -> Self {
        StateDocument::Dense(psi.amplitudes().iter().map(|z| [z.re, z.im]).collect())
    }
}
