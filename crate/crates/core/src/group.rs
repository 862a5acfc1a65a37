//! Finite groups stored as multiplication tables.
//!
//! Three constructors are provided: cyclic groups `Z_n`, metacyclic groups
//! `Z_p ⋊ Z_q` presented by `a^p = b^q = e`, `b a b⁻¹ = a^k`, and arbitrary
//! Cayley tables. Elements are addressed by a dense index in `0..order`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order accepted by the exhaustive `O(|G|³)` validations.
pub const DEFAULT_MAX_ORDER: usize = 1024;

/// A group element, identified by its index in the multiplication table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub usize);

impl Element {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a group was constructed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic { n: usize },
    Metacyclic { p: usize, q: usize, k: usize },
    Cayley,
}

/// Group description as read from and written to disk.
///
/// ```json
/// {"type": "metacyclic", "p": 7, "q": 3, "k": 2}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Metacyclic { p: usize, q: usize, k: usize },
    Cayley { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group spec serializes")
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { n: 0 } => Err(Error::Parse("group spec: cyclic n must be positive".into())),
            &GroupSpec::Cyclic { n } => Ok(FiniteGroup::cyclic(n)),
            &GroupSpec::Metacyclic { p, q, k } => FiniteGroup::metacyclic(p, q, k),
            GroupSpec::Cayley { table } => FiniteGroup::from_cayley(table),
        }
    }

    /// Short identifier, e.g. `metacyclic(7,3,2)`. Cayley tables are
    /// identified by a digest of their entries.
    pub fn id(&self) -> String {
        match self {
            GroupSpec::Cyclic { n } => format!("cyclic({n})"),
            GroupSpec::Metacyclic { p, q, k } => format!("metacyclic({p},{q},{k})"),
            GroupSpec::Cayley { table } => {
                use sha2::{Digest, Sha256};
                let mut h = Sha256::new();
                for row in table {
                    for &v in row {
                        h.update((v as u64).to_le_bytes());
                    }
                }
                format!("cayley({},{})", table.len(), &hex::encode(h.finalize())[..16])
            }
        }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
    kind: GroupKind,
}

pub(crate) fn pow_mod(base: usize, mut exp: usize, modulus: usize) -> usize {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as usize
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl FiniteGroup {
    /// The cyclic group `Z_n` with `mul(a, b) = (a + b) mod n`.
    ///
    /// Even `n` is accepted here; the square-root map rejects it later.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push((a + b) % n);
            }
        }
        FiniteGroup {
            order: n,
            mul,
            inv: (0..n).map(|a| (n - a) % n).collect(),
            identity: 0,
            labels: (0..n).map(|a| a.to_string()).collect(),
            kind: GroupKind::Cyclic { n },
        }
    }

    /// The metacyclic group on pairs `(λ, j) = a^λ b^j` with
    /// `(λ, j)(μ, j') = (λ + k^j μ mod p, j + j' mod q)`.
    ///
    /// Element `(λ, j)` has index `λ·q + j`.
    pub fn metacyclic(p: usize, q: usize, k: usize) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidMetacyclic {
            p,
            q,
            k,
            reason: reason.to_string(),
        };
        if p == 0 || q == 0 || k == 0 {
            return Err(invalid("p, q and k must be positive"));
        }
        if gcd(k % p, p) != 1 && p != 1 {
            return Err(invalid("k must be coprime to p"));
        }
        if pow_mod(k, q, p) != 1 % p {
            return Err(invalid("k^q must be congruent to 1 mod p"));
        }
        let order = p * q;
        let index = |lambda: usize, j: usize| lambda * q + j;
        let powers: Vec<usize> = (0..q).map(|j| pow_mod(k, j, p)).collect();

        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        let mut labels = Vec::with_capacity(order);
        for lambda in 0..p {
            for j in 0..q {
                let g = index(lambda, j);
                labels.push(format!("({lambda},{j})"));
                for mu in 0..p {
                    for jj in 0..q {
                        let h = index(mu, jj);
                        mul[g * order + h] = index((lambda + powers[j] * mu) % p, (j + jj) % q);
                    }
                }
                // (λ, j)⁻¹ = (−k^{-j} λ, −j); k^{-j} = k^{q-j}
                let jinv = (q - j) % q;
                let kinv = pow_mod(k, jinv, p);
                let linv = (p - (kinv * lambda) % p) % p;
                inv[g] = index(linv, jinv);
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            identity: 0,
            labels,
            kind: GroupKind::Metacyclic { p, q, k },
        })
    }

    /// Validates an arbitrary Cayley table (row `a`, column `b` holds `a·b`).
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self> {
        Self::from_cayley_with_limit(table, DEFAULT_MAX_ORDER)
    }

    pub fn from_cayley_with_limit(table: &[Vec<usize>], limit: usize) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::EmptyTable);
        }
        if order > limit {
            return Err(Error::OrderTooLarge { order, limit });
        }
        let mut mul = Vec::with_capacity(order * order);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(Error::NotSquare { row, len: entries.len(), expected: order });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(Error::EntryOutOfRange { row, col, value, order });
                }
            }
            mul.extend_from_slice(entries);
        }
        if let Some((line, index, value)) = latin_violation(order, &mul) {
            return Err(Error::NotLatinSquare { line, index, value });
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul[e * order + g] == g && mul[g * order + e] == g))
            .ok_or(Error::NoIdentity)?;
        let mut inv = Vec::with_capacity(order);
        for g in 0..order {
            let h = (0..order)
                .find(|&h| mul[g * order + h] == identity && mul[h * order + g] == identity)
                .ok_or(Error::MissingInverse { element: g })?;
            inv.push(h);
        }
        let group = FiniteGroup {
            order,
            mul,
            inv,
            identity,
            labels: (0..order).map(|g| g.to_string()).collect(),
            kind: GroupKind::Cayley,
        };
        if let Some((a, b, c)) = group.associativity_violation() {
            return Err(Error::NotAssociative { a: a.0, b: b.0, c: c.0 });
        }
        Ok(group)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Element {
        Element(self.identity)
    }

    pub fn spec(&self) -> GroupSpec {
        match self.kind {
            GroupKind::Cyclic { n } => GroupSpec::Cyclic { n },
            GroupKind::Metacyclic { p, q, k } => GroupSpec::Metacyclic { p, q, k },
            GroupKind::Cayley => GroupSpec::Cayley { table: self.table() },
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn is_odd(&self) -> bool {
        self.order % 2 == 1
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.mul[a.0 * self.order + b.0])
    }

    #[inline]
    pub fn inv(&self, g: Element) -> Element {
        Element(self.inv[g.0])
    }

    /// `h g h⁻¹`
    pub fn conjugate(&self, h: Element, g: Element) -> Element {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, g: Element, exp: usize) -> Element {
        let mut acc = self.identity();
        for _ in 0..exp {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    pub fn element(&self, index: usize) -> Result<Element> {
        if index < self.order {
            Ok(Element(index))
        } else {
            Err(Error::ElementOutOfRange { index, order: self.order })
        }
    }

    pub fn label(&self, g: Element) -> &str {
        &self.labels[g.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks up an element by its label, e.g. `"(3,1)"` for metacyclic groups.
    pub fn find_label(&self, label: &str) -> Result<Element> {
        let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels
            .iter()
            .position(|l| *l == compact)
            .map(Element)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Coordinates `(λ, j)` of a metacyclic element.
    pub fn coords(&self, g: Element) -> Option<(usize, usize)> {
        match self.kind {
            GroupKind::Metacyclic { q, .. } => Some((g.0 / q, g.0 % q)),
            _ => None,
        }
    }

    /// The metacyclic element `a^λ b^j`.
    pub fn at(&self, lambda: usize, j: usize) -> Option<Element> {
        match self.kind {
            GroupKind::Metacyclic { p, q, .. } if lambda < p && j < q => Some(Element(lambda * q + j)),
            _ => None,
        }
    }

    /// Smallest `d ≥ 1` with `g^d = e`.
    pub fn element_order(&self, g: Element) -> usize {
        let mut acc = g;
        let mut d = 1;
        while acc.0 != self.identity {
            acc = self.mul(acc, g);
            d += 1;
        }
        d
    }

    /// The multiplication table as rows of indices.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// First row or column that is not a permutation, if any.
    pub fn latin_violation(&self) -> Option<(&'static str, usize, usize)> {
        latin_violation(self.order, &self.mul)
    }

    /// First triple with `(ab)c ≠ a(bc)`, scanning exhaustively.
    pub fn associativity_violation(&self) -> Option<(Element, Element, Element)> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Partition into conjugacy classes, sorted by size and then by smallest
    /// member. Elements inside a class are ascending.
    pub fn conjugacy_classes(&self) -> ConjugacyPartition {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes: Vec<Vec<Element>> = Vec::new();
        for g in self.elements() {
            if class_of[g.0] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for h in self.elements() {
                let c = self.conjugate(h, g);
                if class_of[c.0] == usize::MAX {
                    class_of[c.0] = id;
                    members.push(c);
                }
            }
            members.sort();
            classes.push(members);
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        for (id, class) in classes.iter().enumerate() {
            for g in class {
                class_of[g.0] = id;
            }
        }
        ConjugacyPartition { classes, class_of }
    }
}

fn latin_violation(order: usize, mul: &[usize]) -> Option<(&'static str, usize, usize)> {
    let mut seen = vec![false; order];
    for row in 0..order {
        seen.iter_mut().for_each(|s| *s = false);
        for col in 0..order {
            let v = mul[row * order + col];
            if std::mem::replace(&mut seen[v], true) {
                return Some(("row", row, v));
            }
        }
    }
    for col in 0..order {
        seen.iter_mut().for_each(|s| *s = false);
        for row in 0..order {
            let v = mul[row * order + col];
            if std::mem::replace(&mut seen[v], true) {
                return Some(("column", col, v));
            }
        }
    }
    None
}

/// Conjugacy classes of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPartition {
    classes: Vec<Vec<Element>>,
    class_of: Vec<usize>,
}

impl ConjugacyPartition {
    pub fn classes(&self) -> &[Vec<Element>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, g: Element) -> usize {
        self.class_of[g.0]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: usize) -> Element {
        Element(i)
    }

    #[test]
    fn trivial_cyclic() {
        let g = FiniteGroup::cyclic(1);
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(el(0), el(0)), el(0));
    }

    #[test]
    fn cyclic_inverse_and_order() {
        let z7 = FiniteGroup::cyclic(7);
        assert_eq!(z7.inv(el(3)), el(4));
        let z9 = FiniteGroup::cyclic(9);
        assert_eq!(z9.element_order(el(3)), 3);
        assert_eq!(z9.element_order(z9.identity()), 1);
        assert!(z9.conjugacy_classes().sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn order_21_composition_and_inverse() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let x = g.at(3, 1).unwrap();
        let y = g.at(2, 2).unwrap();
        assert_eq!(g.mul(x, y), g.identity());
        assert_eq!(g.inv(x), y);
        // (λ, j)⁻¹ = (−2^{3−j} λ mod 7, 2j mod 3)
        for lambda in 0..7 {
            for j in 0..3 {
                let e = g.at(lambda, j).unwrap();
                let expected = ((7 * 8 - (1 << (3 - j)) * lambda) % 7, (2 * j) % 3);
                assert_eq!(g.coords(g.inv(e)), Some(expected));
            }
        }
        assert_eq!(g.element_order(g.at(0, 1).unwrap()), 3);
        assert_eq!(g.element_order(g.at(1, 0).unwrap()), 7);
    }

    #[test]
    fn order_21_derived_relations() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let a = g.at(1, 0).unwrap();
        let b = g.at(0, 1).unwrap();
        let pw = |x, n| g.pow(x, n);
        assert_eq!(pw(a, 7), g.identity());
        assert_eq!(pw(b, 3), g.identity());
        assert_eq!(g.mul(b, a), g.mul(pw(a, 2), b));
        assert_eq!(g.conjugate(b, a), pw(a, 2));
        assert_eq!(g.conjugate(g.inv(b), a), pw(a, 4));
        assert_eq!(g.conjugate(a, b), g.mul(pw(a, 6), b));
        assert_eq!(g.conjugate(g.inv(a), b), g.mul(a, b));
        for j in 0..3 {
            for lambda in 0..7 {
                let lhs = g.mul(pw(b, j), pw(a, lambda));
                let rhs = g.mul(pw(a, (1 << j) * lambda), pw(b, j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn order_21_classes() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let classes = g.conjugacy_classes();
        assert_eq!(classes.sizes(), vec![1, 3, 3, 7, 7]);
        let c = &classes.classes()[classes.class_of(g.at(1, 0).unwrap())];
        let coords: Vec<_> = c.iter().map(|&e| g.coords(e).unwrap()).collect();
        assert_eq!(coords, vec![(1, 0), (2, 0), (4, 0)]);
        let c = &classes.classes()[classes.class_of(g.at(3, 0).unwrap())];
        let coords: Vec<_> = c.iter().map(|&e| g.coords(e).unwrap()).collect();
        assert_eq!(coords, vec![(3, 0), (5, 0), (6, 0)]);
        for class in classes.classes() {
            let j0 = g.coords(class[0]).unwrap().1;
            assert!(class.iter().all(|&e| g.coords(e).unwrap().1 == j0));
        }
    }

    #[test]
    fn abelian_metacyclic() {
        let g = FiniteGroup::metacyclic(7, 3, 1).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.order(), 21);
        assert!(!FiniteGroup::metacyclic(7, 3, 2).unwrap().is_abelian());
    }

    #[test]
    fn metacyclic_rejects_inconsistent_relations() {
        assert!(matches!(
            FiniteGroup::metacyclic(7, 3, 3),
            Err(Error::InvalidMetacyclic { .. })
        ));
        assert!(FiniteGroup::metacyclic(7, 0, 2).is_err());
    }

    #[test]
    fn metacyclic_q1_matches_cyclic() {
        for n in [1, 3, 5, 9] {
            let m = FiniteGroup::metacyclic(n, 1, 1).unwrap();
            let c = FiniteGroup::cyclic(n);
            assert_eq!(m.table(), c.table());
        }
    }

    #[test]
    fn cayley_trivial_and_z3() {
        let g = FiniteGroup::from_cayley(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z3 = FiniteGroup::from_cayley(&FiniteGroup::cyclic(3).table()).unwrap();
        assert_eq!(z3.table(), FiniteGroup::cyclic(3).table());
        assert_eq!(z3.inv(el(1)), el(2));
    }

    #[test]
    fn cayley_left_projection_is_not_latin() {
        let table: Vec<Vec<usize>> = (0..3).map(|a| vec![a; 3]).collect();
        assert!(matches!(
            FiniteGroup::from_cayley(&table),
            Err(Error::NotLatinSquare { line: "row", index: 0, value: 0 })
        ));
    }

    #[test]
    fn cayley_rejects_non_associative_quasigroup() {
        // a·b = (2a − b) mod 3 is latin but not associative and has no identity
        let t: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (2 * a + 3 - b) % 3).collect()).collect();
        assert!(FiniteGroup::from_cayley(&t).is_err());
        // a·b = (−a − b) mod 3 with relabelled identity still fails identity search
        let t: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (6 - a - b) % 3).collect()).collect();
        assert_eq!(FiniteGroup::from_cayley(&t), Err(Error::NoIdentity));
    }

    #[test]
    fn cayley_reports_associativity_witness() {
        // loop of order 5 with identity 0 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley(&t), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn cayley_structural_errors() {
        assert_eq!(FiniteGroup::from_cayley(&[]), Err(Error::EmptyTable));
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 1], vec![1]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 2], vec![1, 0]]),
            Err(Error::EntryOutOfRange { .. })
        ));
        let big = FiniteGroup::cyclic(5).table();
        assert!(matches!(
            FiniteGroup::from_cayley_with_limit(&big, 4),
            Err(Error::OrderTooLarge { order: 5, limit: 4 })
        ));
    }

    #[test]
    fn spec_documents() {
        let spec = GroupSpec::from_json(r#"{"type": "metacyclic", "p": 7, "q": 3, "k": 2}"#).unwrap();
        assert_eq!(spec, GroupSpec::Metacyclic { p: 7, q: 3, k: 2 });
        assert_eq!(spec.build().unwrap().spec(), spec);
        let spec = GroupSpec::from_json(r#"{"type": "cayley", "table": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(spec.build().unwrap().order(), 2);
        let err = GroupSpec::from_json("{\n  \"type\": \"cyclic\",\n  \"m\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("missing field `n`"), "{err}");
        let err = GroupSpec::from_json(r#"{"type": "dihedral", "n": 3}"#).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(GroupSpec::Cyclic { n: 0 }.build().is_err());
    }

    #[test]
    fn labels_round_trip() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        assert_eq!(g.find_label("(3, 1)").unwrap(), g.at(3, 1).unwrap());
        assert_eq!(g.label(g.at(2, 2).unwrap()), "(2,2)");
        assert!(g.find_label("(9,9)").is_err());
    }
}
