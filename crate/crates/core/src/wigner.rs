//! Wigner distributions on groups of odd order.
//!
//! For a state `ψ` on `G` the distribution is
//!
//! ```text
//! W(g; J M N M' N') = (N_J/|G|) Σ_{g', g''} δ_{g, s(g', g'')}
//!                      D^J_{MN}(g') ψ(g')* D^J_{M'N'}(g'')* ψ(g'')
//! ```
//!
//! where `s` is the midpoint map. Density operators enter through the
//! linear extension `ψ(g')* ψ(g'') → ρ(g'', g')`.
//!
//! Every entry is summed with `g'` ascending in the outer loop and `g''`
//! ascending in the inner loop.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{MomentumWavefunction, Wavefunction};
use crate::group::{Element, FiniteGroup, GroupSpec};
use crate::midpoint::{MidpointMap, SquareRootMap};
use crate::repr::{Basis, CMatrix, IrrepSet, TOLERANCE};

/// Entries below this modulus are dropped from sparse output.
pub const SPARSE_THRESHOLD: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A density operator with entries `ρ(g'', g') = ⟨g''|ρ|g'⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Accepts a Hermitian, unit-trace, positive semidefinite matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let asym = crate::repr::max_abs(&(&matrix - matrix.adjoint()));
        if asym > 1e-12 {
            return Err(Error::InvalidDensity(format!("not Hermitian (residual {asym:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let min = matrix.clone().symmetric_eigenvalues().min();
        if min < -TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityOperator { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &Wavefunction) -> Result<Self> {
        psi.ensure_normalized()?;
        let a = psi.amplitudes();
        Ok(DensityOperator { matrix: DMatrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj()) })
    }

    /// `α ρ1 + (1 − α) ρ2` for `α ∈ [0, 1]`.
    pub fn mix(alpha: f64, first: &Self, second: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || first.dim() != second.dim() {
            return Err(Error::InvalidDensity("mixture needs alpha in [0, 1] and equal dimensions".into()));
        }
        let a = Complex64::new(alpha, 0.0);
        let b = Complex64::new(1.0 - alpha, 0.0);
        Ok(DensityOperator { matrix: &first.matrix * a + &second.matrix * b })
    }

    pub fn maximally_mixed(order: usize) -> Self {
        DensityOperator { matrix: CMatrix::identity(order, order) / Complex64::new(order as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(ρ1 ρ2)`
    pub fn overlap(&self, other: &Self) -> Complex64 {
        (&self.matrix * &other.matrix).trace()
    }
}

/// The five-index table `W(g; J M N M' N')`, stored per irrep as
/// `[g][M][N][M'][N']` with 0-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerTable {
    group_id: String,
    basis: Basis,
    order: usize,
    labels: Vec<i64>,
    dims: Vec<usize>,
    blocks: Vec<Vec<Complex64>>,
}

impl WignerTable {
    fn zeros_like(space: &PhaseSpace) -> Self {
        let order = space.group.order();
        let dims = space.irreps.dims();
        WignerTable {
            group_id: space.group_id.clone(),
            basis: space.irreps.basis().clone(),
            order,
            labels: space.irreps.irreps().iter().map(|r| r.label).collect(),
            blocks: dims.iter().map(|d| vec![ZERO; order * d.pow(4)]).collect(),
            dims,
        }
    }

    fn empty_copy(&self) -> Self {
        WignerTable {
            blocks: self.blocks.iter().map(|b| vec![ZERO; b.len()]).collect(),
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Self {
        WignerTable {
            group_id: self.group_id.clone(),
            basis: self.basis.clone(),
            order: self.order,
            labels: self.labels.clone(),
            dims: self.dims.clone(),
            blocks: Vec::new(),
        }
    }

    #[inline]
    fn index(&self, j: usize, g: usize, m: usize, n: usize, mp: usize, np: usize) -> usize {
        let d = self.dims[j];
        (((g * d + m) * d + n) * d + mp) * d + np
    }

    /// Entry for irrep position `j` (not label) with 0-based row/column
    /// indices.
    #[inline]
    pub fn get(&self, g: Element, j: usize, m: usize, n: usize, mp: usize, np: usize) -> Complex64 {
        self.blocks[j][self.index(j, g.0, m, n, mp, np)]
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `Σ_J |G| N_J⁴`
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries as `(g, j, m, n, m', n', value)` in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Element, usize, usize, usize, usize, usize, Complex64)> + '_ {
        self.blocks.iter().enumerate().flat_map(move |(j, block)| {
            let d = self.dims[j];
            block.iter().enumerate().map(move |(i, &z)| {
                let np = i % d;
                let mp = (i / d) % d;
                let n = (i / (d * d)) % d;
                let m = (i / (d * d * d)) % d;
                let g = i / d.pow(4);
                (Element(g), j, m, n, mp, np, z)
            })
        })
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.group_id != other.group_id || self.dims != other.dims {
            return Err(Error::IncompatibleTables(format!("{} vs {}", self.group_id, other.group_id)));
        }
        if self.basis != other.basis {
            return Err(Error::IncompatibleTables(format!("basis {} vs {}", self.basis, other.basis)));
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.ensure_compatible(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    /// `Σ_k c_k W_k` over tables of the same shape.
    pub fn linear_combination(terms: &[(Complex64, &WignerTable)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::IncompatibleTables("no terms".into()))?.1;
        let mut out = first.empty_copy();
        for (c, table) in terms {
            out.ensure_compatible(table)?;
            for (dst, src) in out.blocks.iter_mut().zip(&table.blocks) {
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += c * y;
                }
            }
        }
        Ok(out)
    }

    /// Largest `|W(g;JMN M'N')* − W(g;JM'N' MN)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, &d) in self.dims.iter().enumerate() {
            for g in 0..self.order {
                for m in 0..d {
                    for n in 0..d {
                        for mp in 0..d {
                            for np in 0..d {
                                let a = self.blocks[j][self.index(j, g, m, n, mp, np)];
                                let b = self.blocks[j][self.index(j, g, mp, np, m, n)];
                                worst = worst.max((a.conj() - b).norm());
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Elements `g` carrying at least one nonzero entry.
    pub fn support(&self) -> Vec<Element> {
        (0..self.order)
            .filter(|&g| {
                self.blocks.iter().enumerate().any(|(j, block)| {
                    let size = self.dims[j].pow(4);
                    block[g * size..(g + 1) * size].iter().any(|z| *z != ZERO)
                })
            })
            .map(Element)
            .collect()
    }

    /// `Σ_g W(g; JMN M'N')`, one `N_J² × N_J²` matrix per irrep with rows
    /// `(M, N)` and columns `(M', N')`.
    pub fn marginal_momentum(&self) -> Vec<CMatrix> {
        self.dims
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let size = d * d;
                let mut out = CMatrix::zeros(size, size);
                for g in 0..self.order {
                    for r in 0..size {
                        for c in 0..size {
                            out[(r, c)] += self.blocks[j][(g * size + r) * size + c];
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// `Σ_{JMN} W(g; JMN MN)` for each `g`.
    pub fn marginal_position(&self) -> PositionMarginal {
        let sums: Vec<Complex64> = (0..self.order)
            .map(|g| {
                let mut acc = ZERO;
                for (j, &d) in self.dims.iter().enumerate() {
                    for m in 0..d {
                        for n in 0..d {
                            acc += self.blocks[j][self.index(j, g, m, n, m, n)];
                        }
                    }
                }
                acc
            })
            .collect();
        PositionMarginal {
            max_imaginary: sums.iter().fold(0.0, |acc, z| acc.max(z.im.abs())),
            values: sums.iter().map(|z| z.re).collect(),
        }
    }

    /// `W̃(g; J M M') = Σ_N W(g; J M N M' N)`
    pub fn tilde(&self) -> AuxiliaryWigner {
        let blocks = self
            .dims
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let mut out = vec![ZERO; self.order * d * d];
                for g in 0..self.order {
                    for m in 0..d {
                        for mp in 0..d {
                            let mut acc = ZERO;
                            for n in 0..d {
                                acc += self.blocks[j][self.index(j, g, m, n, mp, n)];
                            }
                            out[(g * d + m) * d + mp] = acc;
                        }
                    }
                }
                out
            })
            .collect();
        AuxiliaryWigner {
            group_id: self.group_id.clone(),
            basis: self.basis.clone(),
            order: self.order,
            dims: self.dims.clone(),
            blocks,
        }
    }
}

/// Real position marginal plus the largest imaginary part discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMarginal {
    pub values: Vec<f64>,
    pub max_imaginary: f64,
}

/// `W̃(g; J M M')`, stored per irrep as `[g][M][M']`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryWigner {
    group_id: String,
    basis: Basis,
    order: usize,
    dims: Vec<usize>,
    blocks: Vec<Vec<Complex64>>,
}

impl AuxiliaryWigner {
    pub fn get(&self, g: Element, j: usize, m: usize, mp: usize) -> Complex64 {
        let d = self.dims[j];
        self.blocks[j][(g.0 * d + m) * d + mp]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `Σ_{J M M'} (|G|/N_J) Σ_g W̃1(g; J M M') W̃2(g; J M' M)`, which equals
    /// `Tr(ρ1 ρ2)`.
    pub fn traciality_pairing(&self, other: &Self) -> Result<Complex64> {
        if self.group_id != other.group_id || self.dims != other.dims {
            return Err(Error::IncompatibleTables(format!("{} vs {}", self.group_id, other.group_id)));
        }
        if self.basis != other.basis {
            return Err(Error::IncompatibleTables(format!("basis {} vs {}", self.basis, other.basis)));
        }
        let order = self.order as f64;
        let mut total = ZERO;
        for (j, &d) in self.dims.iter().enumerate() {
            let mut acc = ZERO;
            for g in 0..self.order {
                for m in 0..d {
                    for mp in 0..d {
                        acc += self.blocks[j][(g * d + m) * d + mp] * other.blocks[j][(g * d + mp) * d + m];
                    }
                }
            }
            total += acc * (order / d as f64);
        }
        Ok(total)
    }
}

/// A group of odd order with its irreps and midpoint table: everything
/// needed to evaluate Wigner distributions.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    group: FiniteGroup,
    irreps: IrrepSet,
    roots: SquareRootMap,
    midpoints: MidpointMap,
    group_id: String,
}

impl PhaseSpace {
    /// Fails with `EvenOrderGroup` for even `|G|`, and on irrep sets that are
    /// not complete for `group`.
    pub fn new(group: FiniteGroup, irreps: IrrepSet) -> Result<Self> {
        let roots = SquareRootMap::new(&group)?;
        if irreps.order() != group.order() || irreps.dimension_sum() != group.order() {
            return Err(Error::DimensionSum { sum: irreps.dimension_sum(), order: group.order() });
        }
        let residual = irreps.completeness_residual();
        if residual > TOLERANCE {
            return Err(Error::Completeness { residual });
        }
        let midpoints = MidpointMap::new(&group, &roots);
        let group_id = group.spec().id();
        Ok(PhaseSpace { group, irreps, roots, midpoints, group_id })
    }

    /// Builds irreps with [`IrrepSet::for_group`].
    pub fn with_basis(group: FiniteGroup, basis: Basis) -> Result<Self> {
        SquareRootMap::new(&group)?;
        let irreps = IrrepSet::for_group(&group, basis)?;
        Self::new(group, irreps)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &IrrepSet {
        &self.irreps
    }

    pub fn roots(&self) -> &SquareRootMap {
        &self.roots
    }

    pub fn midpoints(&self) -> &MidpointMap {
        &self.midpoints
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    fn check_state(&self, psi: &Wavefunction) -> Result<()> {
        if psi.len() != self.group.order() {
            return Err(Error::StateLength { len: psi.len(), order: self.group.order() });
        }
        Ok(())
    }

    /// Accumulates `coeff[g'][g''] · (N_J/|G|) D_{MN}(g') D_{M'N'}(g'')*` at
    /// `g = s(g', g'')`.
    fn accumulate(&self, coeff: &[Complex64]) -> WignerTable {
        let n = self.group.order();
        let mut table = WignerTable::zeros_like(self);
        for (j, irrep) in self.irreps.irreps().iter().enumerate() {
            let d = irrep.dim;
            let size = d * d;
            let scale = irrep.dim as f64 / n as f64;
            let block = &mut table.blocks[j];
            let mut left = vec![ZERO; size];
            for a in self.group.elements() {
                let da = irrep.matrix(a);
                for b in self.group.elements() {
                    let c = coeff[a.0 * n + b.0];
                    if c == ZERO {
                        continue;
                    }
                    let c = c * scale;
                    for m in 0..d {
                        for col in 0..d {
                            left[m * d + col] = c * da[(m, col)];
                        }
                    }
                    let db = irrep.matrix(b);
                    let base = self.midpoints.get(a, b).0 * size * size;
                    for (r, &u) in left.iter().enumerate() {
                        let row = &mut block[base + r * size..base + (r + 1) * size];
                        for mp in 0..d {
                            for np in 0..d {
                                row[mp * d + np] += u * db[(mp, np)].conj();
                            }
                        }
                    }
                }
            }
        }
        table
    }

    /// The Wigner distribution of a pure state.
    pub fn wigner_pure(&self, psi: &Wavefunction) -> Result<WignerTable> {
        self.wigner_cross(psi, psi)
    }

    /// The sesquilinear form behind the pure-state distribution: `φ(g')*`
    /// and `χ(g'')` in place of `ψ(g')*` and `ψ(g'')`.
    pub fn wigner_cross(&self, phi: &Wavefunction, chi: &Wavefunction) -> Result<WignerTable> {
        self.check_state(phi)?;
        self.check_state(chi)?;
        let coeff: Vec<Complex64> = phi
            .amplitudes()
            .iter()
            .flat_map(|a| chi.amplitudes().iter().map(move |b| a.conj() * b))
            .collect();
        Ok(self.accumulate(&coeff))
    }

    /// The Wigner distribution of a density operator.
    pub fn wigner_density(&self, rho: &DensityOperator) -> Result<WignerTable> {
        let n = self.group.order();
        if rho.dim() != n {
            return Err(Error::InvalidDensity(format!("dimension {} for group order {n}", rho.dim())));
        }
        let m = rho.matrix();
        let coeff: Vec<Complex64> = (0..n).flat_map(|a| (0..n).map(move |b| m[(b, a)])).collect();
        Ok(self.accumulate(&coeff))
    }

    fn ensure_own(&self, table: &WignerTable) -> Result<()> {
        if table.group_id != self.group_id || &table.basis != self.irreps.basis() || table.dims != self.irreps.dims() {
            return Err(Error::IncompatibleTables(format!(
                "table for {} ({}) used with {} ({})",
                table.group_id,
                table.basis,
                self.group_id,
                self.irreps.basis()
            )));
        }
        Ok(())
    }

    /// `W'(g;JMN M'N') = Σ_{M1 M1'} D_{M M1}(g1) D_{M' M1'}(g1)* W(g1⁻¹g; J M1 N M1' N')`,
    /// the distribution of `ψ(g1⁻¹ ·)`.
    pub fn left_translate(&self, table: &WignerTable, g1: Element) -> Result<WignerTable> {
        self.ensure_own(table)?;
        let mut out = table.empty_copy();
        let g1inv = self.group.inv(g1);
        for (j, irrep) in self.irreps.irreps().iter().enumerate() {
            let d = irrep.dim;
            let u = irrep.matrix(g1);
            for g in self.group.elements() {
                let src = self.group.mul(g1inv, g).0;
                for m in 0..d {
                    for n in 0..d {
                        for mp in 0..d {
                            for np in 0..d {
                                let mut acc = ZERO;
                                for m1 in 0..d {
                                    for m1p in 0..d {
                                        acc += u[(m, m1)]
                                            * u[(mp, m1p)].conj()
                                            * table.blocks[j][table.index(j, src, m1, n, m1p, np)];
                                    }
                                }
                                let idx = out.index(j, g.0, m, n, mp, np);
                                out.blocks[j][idx] = acc;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `W''(g;JMN M'N') = Σ_{N1 N1'} W(g g2; J M N1 M' N1') D_{N1 N}(g2⁻¹) D_{N1' N'}(g2⁻¹)*`,
    /// the distribution of `ψ(· g2)`.
    pub fn right_translate(&self, table: &WignerTable, g2: Element) -> Result<WignerTable> {
        self.ensure_own(table)?;
        let mut out = table.empty_copy();
        for (j, irrep) in self.irreps.irreps().iter().enumerate() {
            let d = irrep.dim;
            let v = irrep.matrix(self.group.inv(g2));
            for g in self.group.elements() {
                let src = self.group.mul(g, g2).0;
                for m in 0..d {
                    for n in 0..d {
                        for mp in 0..d {
                            for np in 0..d {
                                let mut acc = ZERO;
                                for n1 in 0..d {
                                    for n1p in 0..d {
                                        acc += table.blocks[j][table.index(j, src, m, n1, mp, n1p)]
                                            * v[(n1, n)]
                                            * v[(n1p, np)].conj();
                                    }
                                }
                                let idx = out.index(j, g.0, m, n, mp, np);
                                out.blocks[j][idx] = acc;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest deviation of `Σ_g W` from `ψ_{JM'N'} ψ_{JMN}*`.
    pub fn momentum_marginal_residual(&self, table: &WignerTable, momentum: &MomentumWavefunction) -> f64 {
        let mut worst = 0.0f64;
        for (j, marginal) in table.marginal_momentum().iter().enumerate() {
            let d = table.dims[j];
            for m in 0..d {
                for n in 0..d {
                    for mp in 0..d {
                        for np in 0..d {
                            let expected = momentum.get(j, mp, np) * momentum.get(j, m, n).conj();
                            worst = worst.max((marginal[(m * d + n, mp * d + np)] - expected).norm());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// `W(k, J) = (1/N) Σ_l ψ(l)* ψ(2k − l) ω^{2J(l − k)}` on `Z_N`, as an
/// `N × N` matrix indexed `(k, J)`.
pub fn cyclic_wigner(psi: &Wavefunction, n: usize) -> Result<CMatrix> {
    if n.is_multiple_of(2) {
        let h = n / 2;
        return Err(Error::EvenOrderGroup { order: n, first: 0, second: h, square: 0 });
    }
    if psi.len() != n {
        return Err(Error::StateLength { len: psi.len(), order: n });
    }
    let a = psi.amplitudes();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for l in 0..n {
                let partner = (2 * k + n - l) % n;
                let phase = crate::repr::root_of_unity(2 * j as i64 * (l as i64 - k as i64), n);
                acc += a[l].conj() * a[partner] * phase;
            }
            out[(k, j)] = acc / n as f64;
        }
    }
    Ok(out)
}

/// Header identifying what a serialized table describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerHeader {
    pub group: GroupSpec,
    pub basis: String,
    pub state_hash: String,
}

/// One serialized entry; `m, n, mp, np` are 0-based and `j` is the irrep
/// label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerEntry {
    pub g: usize,
    pub j: i64,
    pub m: usize,
    pub n: usize,
    pub mp: usize,
    pub np: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Dense,
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerDocument {
    pub header: WignerHeader,
    pub layout: Layout,
    pub entries: Vec<WignerEntry>,
}

impl WignerDocument {
    pub fn new(table: &WignerTable, group: GroupSpec, state_hash: String, layout: Layout) -> Self {
        let entries = table
            .entries()
            .filter(|e| layout == Layout::Dense || e.6.norm() >= SPARSE_THRESHOLD)
            .map(|(g, j, m, n, mp, np, z)| WignerEntry {
                g: g.0,
                j: table.labels[j],
                m,
                n,
                mp,
                np,
                re: z.re,
                im: z.im,
            })
            .collect();
        WignerDocument {
            header: WignerHeader { group, basis: table.basis.to_string(), state_hash },
            layout,
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("wigner document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("wigner document: {e}")))
    }
}
