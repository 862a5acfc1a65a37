//! Unitary irreducible representations.
//!
//! Cyclic groups get their characters `D^J(k) = exp(2πi kJ/n)`. Metacyclic
//! groups `Z_p ⋊ Z_q` get `q` one-dimensional irreps lifted from `Z_q` plus
//! `(p−1)/q` irreps of dimension `q` induced from `Z_p`, one per orbit of
//! `⟨k⟩` acting on `{1, …, p−1}`. Other groups must supply their irreps as
//! a document, which is validated on load.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{gcd, ConjugacyPartition, Element, FiniteGroup, GroupKind};
use crate::report::{Check, Report};

pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for every representation residual.
pub const TOLERANCE: f64 = 1e-10;

/// `exp(2πi·num/den)` with `num` reduced first.
pub fn root_of_unity(num: i64, den: usize) -> Complex64 {
    let r = num.rem_euclid(den as i64);
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / den as f64)
}

/// Which basis the multi-dimensional irreps are written in. Wigner entries
/// with explicit row/column indices depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Basis {
    /// For the order-21 group: `a ↦ diag(ω^{M²})`, `b` shifting `M → M+2`.
    /// Identical to `Orbit` wherever no separate convention exists.
    Paper,
    /// Diagonal entries ordered along the orbit `t, tk, tk², …`.
    Orbit,
    /// A user-supplied set.
    External(String),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Paper => f.write_str("paper"),
            Basis::Orbit => f.write_str("orbit"),
            Basis::External(name) => write!(f, "external:{name}"),
        }
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Basis::Paper),
            "orbit" => Ok(Basis::Orbit),
            other => match other.strip_prefix("external:") {
                Some(name) => Ok(Basis::External(name.to_string())),
                None => Ok(Basis::External(other.to_string())),
            },
        }
    }
}

impl From<Basis> for String {
    fn from(b: Basis) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for Basis {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One irreducible representation: a `dim × dim` unitary matrix per element.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: i64,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

impl Irrep {
    #[inline]
    pub fn matrix(&self, g: Element) -> &CMatrix {
        &self.matrices[g.0]
    }

    /// `D_{MN}(g)` with 0-based `m`, `n`.
    #[inline]
    pub fn entry(&self, g: Element, m: usize, n: usize) -> Complex64 {
        self.matrices[g.0][(m, n)]
    }

    /// Trace of `D(g)` on each conjugacy class.
    pub fn character(&self, classes: &ConjugacyPartition) -> Result<Vec<Complex64>> {
        classes
            .classes()
            .iter()
            .enumerate()
            .map(|(id, class)| {
                let chi = self.matrix(class[0]).trace();
                if class.iter().any(|&g| (self.matrix(g).trace() - chi).norm() > TOLERANCE) {
                    return Err(Error::CharacterNotClassFunction { label: self.label, class: id });
                }
                Ok(chi)
            })
            .collect()
    }
}

/// A family of irreps for one group, in a fixed basis.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    basis: Basis,
    order: usize,
    irreps: Vec<Irrep>,
    offsets: Vec<usize>,
    completeness: OnceLock<f64>,
}

impl PartialEq for IrrepSet {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.order == other.order && self.irreps == other.irreps
    }
}

impl IrrepSet {
    /// Assembles a set after checking only shapes. Use [`IrrepSet::load`] or
    /// [`verify_irrep_set`] for the algebraic checks.
    pub fn from_irreps(basis: Basis, order: usize, irreps: Vec<Irrep>) -> Result<Self> {
        for irrep in &irreps {
            if irrep.dim == 0 {
                return Err(Error::MalformedIrrep { label: irrep.label, reason: "dimension 0".into() });
            }
            if irrep.matrices.len() != order {
                return Err(Error::MalformedIrrep {
                    label: irrep.label,
                    reason: format!("{} matrices for {order} elements", irrep.matrices.len()),
                });
            }
            if let Some(g) = irrep.matrices.iter().position(|m| m.shape() != (irrep.dim, irrep.dim)) {
                return Err(Error::MalformedIrrep {
                    label: irrep.label,
                    reason: format!("matrix for element {g} is not {0}x{0}", irrep.dim),
                });
            }
            if let Some(g) = irrep.matrices.iter().position(|m| m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
                return Err(Error::MalformedIrrep {
                    label: irrep.label,
                    reason: format!("non-finite entry for element {g}"),
                });
            }
        }
        let mut offsets = Vec::with_capacity(irreps.len() + 1);
        let mut acc = 0;
        for irrep in &irreps {
            offsets.push(acc);
            acc += irrep.dim * irrep.dim;
        }
        offsets.push(acc);
        Ok(IrrepSet { basis, order, irreps, offsets, completeness: OnceLock::new() })
    }

    /// The `n` characters of `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        let irreps = (0..n)
            .map(|j| Irrep {
                label: j as i64,
                dim: 1,
                matrices: (0..n)
                    .map(|k| CMatrix::from_element(1, 1, root_of_unity((k * j) as i64, n)))
                    .collect(),
            })
            .collect();
        Self::from_irreps(Basis::Paper, n, irreps).expect("cyclic irreps are well formed")
    }

    /// Characters of `Z_p × Z_q` on the metacyclic indexing `λ·q + j`,
    /// labelled `u·q + v` for `(λ, j) ↦ exp(2πi(uλ/p + vj/q))`.
    pub fn direct_product(p: usize, q: usize) -> Self {
        let mut irreps = Vec::with_capacity(p * q);
        for u in 0..p {
            for v in 0..q {
                let matrices = (0..p)
                    .flat_map(|lambda| (0..q).map(move |j| (lambda, j)))
                    .map(|(lambda, j)| {
                        let z = root_of_unity((u * lambda) as i64, p) * root_of_unity((v * j) as i64, q);
                        CMatrix::from_element(1, 1, z)
                    })
                    .collect();
                irreps.push(Irrep { label: (u * q + v) as i64, dim: 1, matrices });
            }
        }
        Self::from_irreps(Basis::Paper, p * q, irreps).expect("product characters are well formed")
    }

    /// Complete irreps of `Z_p ⋊ Z_q` with `b a b⁻¹ = a^k`.
    ///
    /// Requires `p` prime, `q | p − 1` and `k` of multiplicative order exactly
    /// `q` modulo `p`. Labels run `1..=q` for the lifted one-dimensional
    /// irreps, then upwards for the induced ones. `Basis::Paper` selects the
    /// diag(ω^{M²}) convention when `(p, q, k) = (7, 3, 2)` and falls back to
    /// the orbit basis otherwise.
    pub fn metacyclic(p: usize, q: usize, k: usize, basis: Basis) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidMetacyclic { p, q, k, reason: reason.to_string() };
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(invalid("p must be prime"));
        }
        if q < 2 || !(p - 1).is_multiple_of(q) {
            return Err(invalid("q must be at least 2 and divide p - 1"));
        }
        let k = k % p;
        if gcd(k, p) != 1 || multiplicative_order(k, p) != q {
            return Err(invalid("k must have multiplicative order q modulo p"));
        }
        let order = p * q;
        let mut irreps = Vec::with_capacity(q + (p - 1) / q);

        for label in 1..=q {
            let matrices = (0..p)
                .flat_map(|_| 0..q)
                .map(|j| CMatrix::from_element(1, 1, root_of_unity((j * (label - 1)) as i64, q)))
                .collect();
            irreps.push(Irrep { label: label as i64, dim: 1, matrices });
        }

        let paper = basis == Basis::Paper && (p, q, k) == (7, 3, 2);
        let basis = if paper { Basis::Paper } else { Basis::Orbit };
        if paper {
            irreps.push(order21_paper_irrep(4, false));
            irreps.push(order21_paper_irrep(5, true));
        } else {
            let mut visited = vec![false; p];
            let mut label = q as i64;
            for t in 1..p {
                if visited[t] {
                    continue;
                }
                let mut orbit = Vec::with_capacity(q);
                let mut x = t;
                loop {
                    visited[x] = true;
                    orbit.push(x);
                    x = x * k % p;
                    if x == t {
                        break;
                    }
                }
                if orbit.len() != q {
                    return Err(Error::OrbitDecomposition { q, found: orbit.len(), expected: q });
                }
                label += 1;
                irreps.push(induced_irrep(label, p, q, &orbit));
            }
            let found = irreps.len() - q;
            if found * q != p - 1 {
                return Err(Error::OrbitDecomposition { q, found, expected: (p - 1) / q });
            }
        }
        Self::from_irreps(basis, order, irreps)
    }

    /// Irreps for any group this crate knows how to construct.
    pub fn for_group(group: &FiniteGroup, basis: Basis) -> Result<Self> {
        match *group.kind() {
            GroupKind::Cyclic { n } => {
                let mut set = Self::cyclic(n);
                set.basis = match basis {
                    Basis::External(_) => Basis::Paper,
                    b => b,
                };
                Ok(set)
            }
            GroupKind::Metacyclic { p, q, k } if k % p == 1 % p => Ok(Self::direct_product(p, q)),
            GroupKind::Metacyclic { p, q, k } => Self::metacyclic(p, q, k, basis),
            GroupKind::Cayley => Err(Error::Parse(
                "irreps for cayley-table groups must be supplied as a document".into(),
            )),
        }
    }

    /// Parses and fully validates a document against `group`.
    pub fn load(group: &FiniteGroup, doc: &IrrepDocument) -> Result<Self> {
        let set = doc.to_set(group.order())?;
        set.validate(group)?;
        Ok(set)
    }

    /// Runs every check of [`verify_irrep_set`], failing on the first
    /// violation with an error that names the irrep and element.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let sum = self.dimension_sum();
        if sum != group.order() {
            return Err(Error::DimensionSum { sum, order: group.order() });
        }
        for irrep in &self.irreps {
            for g in group.elements() {
                let residual = unitarity_residual(irrep.matrix(g));
                if residual > TOLERANCE {
                    return Err(Error::NotUnitary { label: irrep.label, element: g.0, residual });
                }
            }
            for a in group.elements() {
                for b in group.elements() {
                    let residual = max_abs(&(irrep.matrix(a) * irrep.matrix(b) - irrep.matrix(group.mul(a, b))));
                    if residual > TOLERANCE {
                        return Err(Error::NotHomomorphism { label: irrep.label, first: a.0, second: b.0, residual });
                    }
                }
            }
        }
        let residual = self.orthogonality_residual();
        if residual > TOLERANCE {
            return Err(Error::Orthogonality { residual });
        }
        let residual = self.completeness_residual();
        if residual > TOLERANCE {
            return Err(Error::Completeness { residual });
        }
        Ok(())
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// `Σ_J N_J²`
    pub fn dimension_sum(&self) -> usize {
        self.offsets[self.irreps.len()]
    }

    /// Position of the first `(J, M, N)` coefficient of irrep `idx` in the
    /// flat momentum layout (irrep-major, then row, then column).
    pub fn offset(&self, idx: usize) -> usize {
        self.offsets[idx]
    }

    pub fn position_of_label(&self, label: i64) -> Option<usize> {
        self.irreps.iter().position(|r| r.label == label)
    }

    /// The `Σ N_J² × |G|` matrix with entries `√(N_J/|G|) D^J_{MN}(g)`.
    pub fn transform_matrix(&self) -> CMatrix {
        let n = self.order;
        let mut f = CMatrix::zeros(self.dimension_sum(), n);
        for (idx, irrep) in self.irreps.iter().enumerate() {
            let scale = (irrep.dim as f64 / n as f64).sqrt();
            for g in 0..n {
                let d = &irrep.matrices[g];
                for m in 0..irrep.dim {
                    for c in 0..irrep.dim {
                        f[(self.offsets[idx] + m * irrep.dim + c, g)] = d[(m, c)] * scale;
                    }
                }
            }
        }
        f
    }

    /// Largest deviation of `(1/|G|) Σ_g D'* D` from `δ/N_J`.
    pub fn orthogonality_residual(&self) -> f64 {
        let f = self.transform_matrix();
        let gram = &f * f.adjoint();
        max_abs(&(gram - CMatrix::identity(f.nrows(), f.nrows())))
    }

    /// Largest deviation of `(1/|G|) Σ_{JMN} N_J D(g) D(g')*` from `δ_{g,g'}`.
    /// Cached after the first call.
    pub fn completeness_residual(&self) -> f64 {
        *self.completeness.get_or_init(|| {
            let f = self.transform_matrix();
            let gram = f.adjoint() * &f;
            max_abs(&(gram - CMatrix::identity(self.order, self.order)))
        })
    }

    pub fn to_document(&self) -> IrrepDocument {
        IrrepDocument {
            basis: self.basis.to_string(),
            irreps: self
                .irreps
                .iter()
                .map(|r| IrrepEntry {
                    label: r.label,
                    dim: r.dim,
                    matrices: r
                        .matrices
                        .iter()
                        .map(|m| {
                            let mut flat = Vec::with_capacity(r.dim * r.dim);
                            for row in 0..r.dim {
                                for col in 0..r.dim {
                                    let z = m[(row, col)];
                                    flat.push([z.re, z.im]);
                                }
                            }
                            flat
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn multiplicative_order(k: usize, p: usize) -> usize {
    let mut x = k % p;
    let mut d = 1;
    while x != 1 {
        x = x * k % p;
        d += 1;
        if d > p {
            return 0;
        }
    }
    d
}

/// `a ↦ diag(ω_p^{orbit[i]})`, `b ↦` the shift `e_{i+1} → e_i`, so that
/// `B A B⁻¹ = A^k`.
fn induced_irrep(label: i64, p: usize, q: usize, orbit: &[usize]) -> Irrep {
    let mut matrices = Vec::with_capacity(p * q);
    for lambda in 0..p {
        for j in 0..q {
            let mut m = CMatrix::zeros(q, q);
            for row in 0..q {
                // (A^λ B^j)_{row, row+j}
                m[(row, (row + j) % q)] = root_of_unity((lambda * orbit[row]) as i64, p);
            }
            matrices.push(m);
        }
    }
    Irrep { label, dim: q, matrices }
}

/// `D_{MN}((λ, j)) = ω'^{±λM²} δ_{[M+2j], N}` for 1-based `M, N`.
fn order21_paper_irrep(label: i64, conjugate: bool) -> Irrep {
    let sign: i64 = if conjugate { -1 } else { 1 };
    let mut matrices = Vec::with_capacity(21);
    for lambda in 0..7i64 {
        for j in 0..3usize {
            let mut m = CMatrix::zeros(3, 3);
            for big_m in 1..=3usize {
                let big_n = (big_m - 1 + 2 * j) % 3 + 1;
                let exp = sign * lambda * (big_m * big_m) as i64;
                m[(big_m - 1, big_n - 1)] = root_of_unity(exp, 7);
            }
            matrices.push(m);
        }
    }
    Irrep { label, dim: 3, matrices }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn unitarity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m * m.adjoint() - CMatrix::identity(m.nrows(), m.nrows())))
}

/// Checks unitarity, `D(e) = I`, the homomorphism property, orthogonality,
/// completeness and `Σ N_J² = |G|`, one report entry each.
pub fn verify_irrep_set(group: &FiniteGroup, set: &IrrepSet, tol: f64) -> Report {
    let mut report = Report::new();
    let n = group.order();
    let sum = set.dimension_sum();
    report.push(Check::exact(
        "dimension sum",
        set.len(),
        (sum != n || set.order() != n).then(|| format!("sum N_J^2 = {sum}, |G| = {n}")),
    ));
    if set.order() != n {
        return report;
    }

    let mut worst = (0.0f64, None);
    let mut identity_worst = (0.0f64, None);
    let mut hom_worst = (0.0f64, None);
    let e = group.identity();
    for irrep in set.irreps() {
        for g in group.elements() {
            let r = unitarity_residual(irrep.matrix(g));
            if r > worst.0 || r.is_nan() {
                worst = (r, Some(format!("J={} g={}", irrep.label, group.label(g))));
            }
        }
        let r = max_abs(&(irrep.matrix(e) - CMatrix::identity(irrep.dim, irrep.dim)));
        if r > identity_worst.0 {
            identity_worst = (r, Some(format!("J={}", irrep.label)));
        }
        for a in group.elements() {
            for b in group.elements() {
                let r = max_abs(&(irrep.matrix(a) * irrep.matrix(b) - irrep.matrix(group.mul(a, b))));
                if r > hom_worst.0 || r.is_nan() {
                    hom_worst = (r, Some(format!("J={} g'={} g={}", irrep.label, group.label(a), group.label(b))));
                }
            }
        }
    }
    let cases = set.len() * n;
    report.push(Check::numeric("unitarity", cases, worst.0, tol).with_witness(worst.1));
    report.push(Check::numeric("identity maps to identity", set.len(), identity_worst.0, tol).with_witness(identity_worst.1));
    report.push(Check::numeric("homomorphism", cases * n, hom_worst.0, tol).with_witness(hom_worst.1));
    report.push(Check::numeric("orthogonality", sum * sum, set.orthogonality_residual(), tol));
    report.push(Check::numeric("completeness", n * n, set.completeness_residual(), tol));
    report
}

/// Serialized form of an irrep set. Rows and columns are 0-based; each
/// matrix is a row-major list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepDocument {
    pub basis: String,
    pub irreps: Vec<IrrepEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepEntry {
    pub label: i64,
    pub dim: usize,
    /// One entry per element index, each holding `dim²` pairs.
    pub matrices: Vec<Vec<[f64; 2]>>,
}

impl IrrepDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("irrep document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("irrep document serializes")
    }

    /// Builds the set checking shapes only.
    pub fn to_set(&self, order: usize) -> Result<IrrepSet> {
        let irreps = self
            .irreps
            .iter()
            .map(|entry| {
                let d = entry.dim;
                let matrices = entry
                    .matrices
                    .iter()
                    .enumerate()
                    .map(|(g, flat)| {
                        if flat.len() != d * d {
                            return Err(Error::MalformedIrrep {
                                label: entry.label,
                                reason: format!("element {g} has {} entries, expected {}", flat.len(), d * d),
                            });
                        }
                        Ok(CMatrix::from_row_iterator(d, d, flat.iter().map(|&[re, im]| Complex64::new(re, im))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Irrep { label: entry.label, dim: d, matrices })
            })
            .collect::<Result<Vec<_>>>()?;
        IrrepSet::from_irreps(self.basis.parse()?, order, irreps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cyclic_values() {
        let s1 = IrrepSet::cyclic(1);
        assert_eq!(s1.len(), 1);
        assert_eq!(s1.irreps()[0].entry(Element(0), 0, 0), c(1.0, 0.0));
        let s3 = IrrepSet::cyclic(3);
        let v = s3.irreps()[1].entry(Element(2), 0, 0);
        assert!((v - Complex64::from_polar(1.0, 4.0 * PI / 3.0)).norm() < 1e-15);
        assert_eq!(IrrepSet::cyclic(7).dimension_sum(), 7);
    }

    #[test]
    fn order21_dims_and_diagonal_basis_entries() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let s = IrrepSet::metacyclic(7, 3, 2, Basis::Paper).unwrap();
        assert_eq!(s.dims(), vec![1, 1, 1, 3, 3]);
        assert_eq!(s.basis(), &Basis::Paper);
        let j4 = &s.irreps()[3];
        assert_eq!(j4.label, 4);
        let w = |e: i64| root_of_unity(e, 7);
        assert!((j4.entry(g.at(3, 1).unwrap(), 0, 2) - w(3)).norm() < 1e-15);
        assert_eq!(j4.entry(g.at(3, 1).unwrap(), 0, 1), c(0.0, 0.0));
        let j5 = &s.irreps()[4];
        for x in g.elements() {
            assert!(max_abs(&(j5.matrix(x) - j4.matrix(x).map(|z| z.conj()))) < 1e-15);
        }
        for x in g.elements() {
            let (_, j) = g.coords(x).unwrap();
            for label in 1..=3usize {
                let expected = root_of_unity((j * (label - 1)) as i64, 3);
                assert_eq!(s.irreps()[label - 1].entry(x, 0, 0), expected);
            }
        }
    }

    #[test]
    fn order21_primitive_relations() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        for basis in [Basis::Paper, Basis::Orbit] {
            let s = IrrepSet::metacyclic(7, 3, 2, basis).unwrap();
            for irrep in s.irreps() {
                let a = irrep.matrix(g.at(1, 0).unwrap());
                let b = irrep.matrix(g.at(0, 1).unwrap());
                let id = CMatrix::identity(irrep.dim, irrep.dim);
                assert!(max_abs(&(a.pow(7) - &id)) < 1e-12);
                assert!(max_abs(&(b.pow(3) - &id)) < 1e-12);
                assert!(max_abs(&(b * a - a * a * b)) < 1e-12);
            }
        }
    }

    #[test]
    fn constructed_sets_verify() {
        let cases = [
            (FiniteGroup::cyclic(9), IrrepSet::cyclic(9)),
            (FiniteGroup::metacyclic(7, 3, 2).unwrap(), IrrepSet::metacyclic(7, 3, 2, Basis::Paper).unwrap()),
            (FiniteGroup::metacyclic(7, 3, 2).unwrap(), IrrepSet::metacyclic(7, 3, 2, Basis::Orbit).unwrap()),
            (FiniteGroup::metacyclic(13, 4, 5).unwrap(), IrrepSet::metacyclic(13, 4, 5, Basis::Orbit).unwrap()),
        ];
        for (g, s) in cases {
            let report = verify_irrep_set(&g, &s, 1e-12);
            assert!(report.all_passed(), "{}", report.render());
            s.validate(&g).unwrap();
            assert_eq!(s.len(), g.conjugacy_classes().len());
        }
    }

    #[test]
    fn bases_have_equal_characters() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let classes = g.conjugacy_classes();
        let paper = IrrepSet::metacyclic(7, 3, 2, Basis::Paper).unwrap();
        let orbit = IrrepSet::metacyclic(7, 3, 2, Basis::Orbit).unwrap();
        for (a, b) in paper.irreps().iter().zip(orbit.irreps()) {
            let ca = a.character(&classes).unwrap();
            let cb = b.character(&classes).unwrap();
            for (x, y) in ca.iter().zip(&cb) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn characters() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let classes = g.conjugacy_classes();
        let s = IrrepSet::metacyclic(7, 3, 2, Basis::Paper).unwrap();
        let trivial = s.irreps()[0].character(&classes).unwrap();
        assert!(trivial.iter().all(|&z| z == c(1.0, 0.0)));
        let j4 = &s.irreps()[3];
        let chi = j4.character(&classes).unwrap();
        assert_eq!(chi[classes.class_of(g.identity())], c(3.0, 0.0));
        let norm: f64 = g.elements().map(|x| j4.matrix(x).trace().norm_sqr()).sum::<f64>() / 21.0;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_metacyclic_parameters() {
        assert!(IrrepSet::metacyclic(9, 3, 4, Basis::Orbit).is_err()); // 9 not prime
        assert!(IrrepSet::metacyclic(7, 3, 1, Basis::Orbit).is_err()); // k ≡ 1
        assert!(IrrepSet::metacyclic(7, 4, 2, Basis::Orbit).is_err()); // 4 ∤ 6
        assert!(IrrepSet::metacyclic(13, 6, 3, Basis::Orbit).is_err()); // ord(3) = 3
    }

    #[test]
    fn document_round_trip_is_bit_exact() {
        let g = FiniteGroup::cyclic(5);
        let s = IrrepSet::cyclic(5);
        let text = s.to_document().to_json();
        let back = IrrepSet::load(&g, &IrrepDocument::from_json(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let s = IrrepSet::metacyclic(7, 3, 2, Basis::Paper).unwrap();
        let back = IrrepSet::load(&g, &IrrepDocument::from_json(&s.to_document().to_json()).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn load_reports_faults() {
        let g = FiniteGroup::cyclic(3);
        let mut doc = IrrepSet::cyclic(3).to_document();
        doc.irreps[1].matrices[2][0][0] *= 2.0;
        doc.irreps[1].matrices[2][0][1] *= 2.0;
        assert!(matches!(
            IrrepSet::load(&g, &doc),
            Err(Error::NotUnitary { label: 1, element: 2, .. })
        ));

        let mut doc = IrrepSet::cyclic(3).to_document();
        doc.irreps.pop();
        assert_eq!(IrrepSet::load(&g, &doc), Err(Error::DimensionSum { sum: 2, order: 3 }));

        let mut doc = IrrepSet::cyclic(3).to_document();
        doc.irreps[2] = doc.irreps[1].clone();
        assert!(matches!(IrrepSet::load(&g, &doc), Err(Error::Orthogonality { .. })));
    }

    #[test]
    fn identity_only_set_fails_completeness() {
        let g = FiniteGroup::cyclic(3);
        let trivial = IrrepSet::cyclic(3).irreps()[0].clone();
        let s = IrrepSet::from_irreps(Basis::External("broken".into()), 3, vec![trivial]).unwrap();
        let report = verify_irrep_set(&g, &s, TOLERANCE);
        assert!(!report.get("completeness").unwrap().passed);
        assert!(report.get("orthogonality").unwrap().passed);
        assert!(!report.get("dimension sum").unwrap().passed);
    }

    #[test]
    fn abelian_metacyclic_uses_product_characters() {
        for (p, q) in [(7, 3), (5, 1), (3, 3)] {
            let g = FiniteGroup::metacyclic(p, q, 1).unwrap();
            let s = IrrepSet::for_group(&g, Basis::Paper).unwrap();
            assert_eq!(s.len(), p * q);
            s.validate(&g).unwrap();
        }
    }

    #[test]
    fn basis_names() {
        assert_eq!("paper".parse::<Basis>().unwrap(), Basis::Paper);
        assert_eq!("orbit".parse::<Basis>().unwrap(), Basis::Orbit);
        assert_eq!(Basis::External("x".into()).to_string().parse::<Basis>().unwrap(), Basis::External("x".into()));
    }
}
