//! Square roots and midpoints on groups of odd order.
//!
//! When `|G|` is odd, squaring is a permutation of `G`, so every element has
//! a unique square root `s0(g)`. The midpoint of two elements is then
//! `s(g', g'') = g' · s0(g'⁻¹ g'')`, which is symmetric, fixes the diagonal
//! and is covariant under left and right translations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::report::{Check, Report};

/// The table `g ↦ s0(g)` with `s0(g)² = g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareRootMap {
    roots: Vec<usize>,
}

impl SquareRootMap {
    /// Inverts the squaring permutation and cross-checks every entry against
    /// `g^m`, where `g` has order `2m − 1`.
    pub fn new(group: &FiniteGroup) -> Result<Self> {
        let by_inversion = invert_squaring(group)?;
        for g in group.elements() {
            let order = group.element_order(g);
            // odd order of the group forces odd element orders
            let by_power = group.pow(g, order.div_ceil(2));
            if by_power.0 != by_inversion[g.0] {
                return Err(Error::SquareRootMismatch {
                    element: g.0,
                    by_inversion: by_inversion[g.0],
                    by_power: by_power.0,
                });
            }
        }
        Ok(SquareRootMap { roots: by_inversion })
    }

    /// Square roots from the cycle structure alone: `s0(g) = g^m` with
    /// `g^{2m−1} = e`.
    pub fn by_powers(group: &FiniteGroup) -> Result<Self> {
        if !group.is_odd() {
            invert_squaring(group)?;
        }
        let roots = group
            .elements()
            .map(|g| group.pow(g, group.element_order(g).div_ceil(2)).0)
            .collect();
        Ok(SquareRootMap { roots })
    }

    #[inline]
    pub fn root(&self, g: Element) -> Element {
        Element(self.roots[g.0])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.roots
    }
}

fn invert_squaring(group: &FiniteGroup) -> Result<Vec<usize>> {
    let n = group.order();
    let mut roots = vec![usize::MAX; n];
    for h in group.elements() {
        let sq = group.mul(h, h);
        if roots[sq.0] != usize::MAX {
            return Err(Error::EvenOrderGroup {
                order: n,
                first: roots[sq.0],
                second: h.0,
                square: sq.0,
            });
        }
        roots[sq.0] = h.0;
    }
    if !group.is_odd() {
        // unreachable for a genuine group: Cauchy gives an involution
        return Err(Error::EvenOrderGroup { order: n, first: 0, second: 0, square: 0 });
    }
    Ok(roots)
}

/// The full midpoint table `s(g', g'')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidpointMap {
    order: usize,
    table: Vec<usize>,
}

impl MidpointMap {
    pub fn new(group: &FiniteGroup, roots: &SquareRootMap) -> Self {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for a in group.elements() {
            for b in group.elements() {
                table.push(midpoint(group, roots, a, b).0);
            }
        }
        MidpointMap { order: n, table }
    }

    /// Builds the square-root map and tabulates midpoints in one step.
    pub fn for_group(group: &FiniteGroup) -> Result<Self> {
        Ok(Self::new(group, &SquareRootMap::new(group)?))
    }

    /// Wraps an arbitrary table without checking any axiom.
    ///
    /// # Panics
    ///
    /// Panics if `table.len() != order²`.
    pub fn from_table(order: usize, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), order * order, "midpoint table must be order x order");
        MidpointMap { order, table }
    }

    #[inline]
    pub fn get(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.0 * self.order + b.0])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.table
    }

    pub fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.table
    }
}

/// `s(g', g'') = g' s0(g'⁻¹ g'')`
pub fn midpoint(group: &FiniteGroup, roots: &SquareRootMap, a: Element, b: Element) -> Element {
    group.mul(a, roots.root(group.mul(group.inv(a), b)))
}

/// How thoroughly to check two-sided covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    /// Groups up to this order are checked over every quadruple.
    pub exhaustive_limit: usize,
    /// Random quadruples drawn above the limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { exhaustive_limit: 25, samples: 1000, seed: 42 }
    }
}

/// Checks every midpoint axiom and the induced square-root conditions,
/// returning one report entry per axiom.
pub fn verify_midpoint_axioms(group: &FiniteGroup, map: &MidpointMap, plan: &SamplingPlan) -> Report {
    let n = group.order();
    let mut report = Report::new();
    let lbl = |g: Element| group.label(g).to_string();

    if map.order() != n {
        report.push(Check::exact(
            "midpoint table shape",
            1,
            Some(format!("table order {} for group order {n}", map.order())),
        ));
        return report;
    }

    let out_of_range = map.as_slice().iter().position(|&v| v >= n);
    report.push(Check::exact(
        "midpoint closure",
        n * n,
        out_of_range.map(|i| format!("s({}, {}) = {}", i / n, i % n, map.as_slice()[i])),
    ));
    if out_of_range.is_some() {
        return report;
    }

    let mut witness = None;
    'sym: for a in group.elements() {
        for b in group.elements() {
            if map.get(a, b) != map.get(b, a) {
                witness = Some(format!("s({}, {}) != s({}, {})", lbl(a), lbl(b), lbl(b), lbl(a)));
                break 'sym;
            }
        }
    }
    report.push(Check::exact("midpoint symmetry", n * n, witness));

    let witness = group
        .elements()
        .find(|&g| map.get(g, g) != g)
        .map(|g| format!("s({0}, {0}) = {1}", lbl(g), lbl(map.get(g, g))));
    report.push(Check::exact("midpoint idempotence", n, witness));

    let covariant = |g1: Element, g2: Element, a: Element, b: Element| {
        let g2i = group.inv(g2);
        let ta = group.mul(group.mul(g1, a), g2i);
        let tb = group.mul(group.mul(g1, b), g2i);
        map.get(ta, tb) == group.mul(group.mul(g1, map.get(a, b)), g2i)
    };
    let fmt4 = |g1, g2, a, b| format!("g1={} g2={} g'={} g''={}", lbl(g1), lbl(g2), lbl(a), lbl(b));
    let mut witness = None;
    let cases;
    if n <= plan.exhaustive_limit {
        cases = n.pow(4);
        'cov: for g1 in group.elements() {
            for g2 in group.elements() {
                for a in group.elements() {
                    for b in group.elements() {
                        if !covariant(g1, g2, a, b) {
                            witness = Some(fmt4(g1, g2, a, b));
                            break 'cov;
                        }
                    }
                }
            }
        }
    } else {
        cases = plan.samples;
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        for _ in 0..plan.samples {
            let mut pick = || Element(rng.random_range(0..n));
            let (g1, g2, a, b) = (pick(), pick(), pick(), pick());
            if !covariant(g1, g2, a, b) {
                witness = Some(fmt4(g1, g2, a, b));
                break;
            }
        }
    }
    report.push(Check::exact("midpoint covariance", cases, witness));

    // square-root conditions, reading s0(g) = s(e, g)
    let e = group.identity();
    let root = |g: Element| map.get(e, g);
    let witness = (root(e) != e).then(|| format!("s0(e) = {}", lbl(root(e))));
    report.push(Check::exact("square root of identity", 1, witness));

    let witness = group
        .elements()
        .find(|&g| group.mul(root(g), root(g)) != g)
        .map(|g| format!("s0({})^2 != {}", lbl(g), lbl(g)));
    report.push(Check::exact("square root squares back", n, witness));

    let witness = group
        .elements()
        .find(|&g| root(group.inv(g)) != group.mul(group.inv(g), root(g)))
        .map(|g| format!("s0({0}^-1) != {0}^-1 s0({0})", lbl(g)));
    report.push(Check::exact("square root of inverse", n, witness));

    let mut witness = None;
    'conj: for h in group.elements() {
        for g in group.elements() {
            if root(group.conjugate(h, g)) != group.conjugate(h, root(g)) {
                witness = Some(format!("h={} g={}", lbl(h), lbl(g)));
                break 'conj;
            }
        }
    }
    report.push(Check::exact("square root conjugation", n * n, witness));

    let witness = group
        .elements()
        .find(|&g| group.mul(root(g), g) != group.mul(g, root(g)))
        .map(|g| format!("s0({0}) does not commute with {0}", lbl(g)));
    report.push(Check::exact("square root commutes", n, witness));

    let witness = group
        .elements()
        .flat_map(|a| group.elements().map(move |b| (a, b)))
        .find(|&(a, b)| map.get(a, b) != group.mul(a, root(group.mul(group.inv(a), b))))
        .map(|(a, b)| format!("s({}, {}) != g' s0(g'^-1 g'')", lbl(a), lbl(b)));
    report.push(Check::exact("midpoint from square root", n * n, witness));

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z9_roots_and_midpoints() {
        let g = FiniteGroup::cyclic(9);
        let s0 = SquareRootMap::new(&g).unwrap();
        assert_eq!(s0.root(Element(1)), Element(5));
        for x in 0..9 {
            assert_eq!(s0.root(Element(x)).0, (5 * x) % 9);
        }
        assert_eq!(midpoint(&g, &s0, Element(2), Element(4)), Element(3));
    }

    #[test]
    fn even_order_is_rejected_with_witness() {
        for n in [2, 4, 6, 8] {
            match SquareRootMap::new(&FiniteGroup::cyclic(n)) {
                Err(Error::EvenOrderGroup { order, first, second, square }) => {
                    assert_eq!(order, n);
                    assert_ne!(first, second);
                    assert_eq!((2 * first) % n, square);
                    assert_eq!((2 * second) % n, square);
                }
                other => panic!("expected EvenOrderGroup, got {other:?}"),
            }
        }
        let err = SquareRootMap::new(&FiniteGroup::cyclic(6)).unwrap_err();
        assert_eq!(err, Error::EvenOrderGroup { order: 6, first: 0, second: 3, square: 0 });
        assert!(SquareRootMap::by_powers(&FiniteGroup::cyclic(4)).is_err());
    }

    #[test]
    fn order_21_square_root_and_midpoint() {
        let g = FiniteGroup::metacyclic(7, 3, 2).unwrap();
        let s0 = SquareRootMap::new(&g).unwrap();
        let x = g.at(3, 1).unwrap();
        let y = g.at(2, 2).unwrap();
        assert_eq!(s0.root(x), y);
        assert_eq!(g.mul(y, y), x);
        assert_eq!(midpoint(&g, &s0, x, y), g.identity());
    }

    #[test]
    fn both_constructions_agree() {
        for g in [
            FiniteGroup::cyclic(15),
            FiniteGroup::metacyclic(7, 3, 2).unwrap(),
            FiniteGroup::metacyclic(13, 3, 3).unwrap(),
        ] {
            assert_eq!(SquareRootMap::new(&g).unwrap(), SquareRootMap::by_powers(&g).unwrap());
        }
    }

    #[test]
    fn constructed_maps_pass_all_axioms() {
        for g in [FiniteGroup::cyclic(7), FiniteGroup::metacyclic(7, 3, 2).unwrap()] {
            let map = MidpointMap::for_group(&g).unwrap();
            let report = verify_midpoint_axioms(&g, &map, &SamplingPlan::default());
            assert!(report.all_passed(), "{}", report.render());
        }
    }

    #[test]
    fn cyclic_midpoint_formula() {
        for n in [3usize, 5, 7, 9, 11] {
            let g = FiniteGroup::cyclic(n);
            let map = MidpointMap::for_group(&g).unwrap();
            for l in 0..n {
                for m in 0..n {
                    let s = map.get(Element(l), Element(m)).0;
                    assert_eq!(s, n.div_ceil(2) * (l + m) % n);
                    assert_eq!((2 * s) % n, (l + m) % n);
                }
            }
        }
    }

    #[test]
    fn corrupted_map_is_caught() {
        let g = FiniteGroup::cyclic(7);
        let mut map = MidpointMap::for_group(&g).unwrap();
        map.as_mut_slice().swap(1, 2);
        let report = verify_midpoint_axioms(&g, &map, &SamplingPlan::default());
        assert!(!report.all_passed());
        let sym = report.get("midpoint symmetry").unwrap();
        assert!(!sym.passed);
        assert!(sym.witness.is_some());
        assert!(!report.get("midpoint covariance").unwrap().passed);
    }
}
