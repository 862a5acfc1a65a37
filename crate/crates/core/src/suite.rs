//! The full property suite run by `oddwigner verify`.
//!
//! Output is a deterministic text report: the same group, irreps, seed and
//! counts always render byte-identical text.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::fourier::{forward, inverse, Wavefunction};
use crate::group::{Element, FiniteGroup, GroupKind, DEFAULT_MAX_ORDER};
use crate::midpoint::{verify_midpoint_axioms, SamplingPlan, SquareRootMap};
use crate::order21;
use crate::random::{random_density, random_state};
use crate::repr::{verify_irrep_set, Basis, IrrepSet, TOLERANCE};
use crate::report::{fmt_f64, Check, Report};
use crate::wigner::{cyclic_wigner, DensityOperator, PhaseSpace, WignerTable};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub tolerance: f64,
    pub seed: u64,
    /// Random pure states per state-based property.
    pub samples: usize,
    /// Random density-operator pairs for traciality.
    pub density_pairs: usize,
    /// Random translations when the group is too large for all of them.
    pub translations: usize,
    /// Groups up to this order get exhaustive covariance checks.
    pub exhaustive_limit: usize,
    /// Random quadruples for sampled midpoint covariance.
    pub midpoint_samples: usize,
    pub basis: Basis,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tolerance: TOLERANCE,
            seed: DEFAULT_SEED,
            samples: 100,
            density_pairs: 50,
            translations: 20,
            exhaustive_limit: 25,
            midpoint_samples: 1000,
            basis: Basis::Paper,
        }
    }
}

/// A finished suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub header: Vec<(String, String)>,
    pub report: Report,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.report.all_passed()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k}: {v}");
        }
        out.push_str(&self.report.render());
        let failed = self.report.failures().count();
        let _ = writeln!(
            out,
            "result: {} ({} checks, {} failed)",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.report.checks.len(),
            failed
        );
        out
    }
}

/// Runs every applicable check on `group`. When `irreps` is `None` they are
/// constructed in `config.basis`.
pub fn run(group: &FiniteGroup, irreps: Option<IrrepSet>, config: &SuiteConfig) -> SuiteOutcome {
    let spec = group.spec();
    let mut header = vec![
        ("group".to_string(), spec.id()),
        ("order".to_string(), group.order().to_string()),
        ("seed".to_string(), config.seed.to_string()),
        ("tolerance".to_string(), fmt_f64(config.tolerance)),
        ("samples".to_string(), config.samples.to_string()),
        ("density pairs".to_string(), config.density_pairs.to_string()),
    ];
    let mut report = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tol = config.tolerance;
    let n = group.order();

    report.extend(group_checks(group));

    let roots = match SquareRootMap::new(group) {
        Ok(r) => r,
        Err(e) => {
            report.push(Check::exact("odd order", 1, Some(e.to_string())));
            return SuiteOutcome { header, report };
        }
    };
    report.push(Check::exact("odd order", 1, None));
    report.extend(square_root_checks(group, &roots));

    let plan = SamplingPlan {
        exhaustive_limit: config.exhaustive_limit,
        samples: config.midpoint_samples,
        seed: rng.random(),
    };
    let space_map = crate::midpoint::MidpointMap::new(group, &roots);
    report.extend(verify_midpoint_axioms(group, &space_map, &plan));

    let irreps = match irreps {
        Some(set) => set,
        None => match IrrepSet::for_group(group, config.basis.clone()) {
            Ok(set) => set,
            Err(e) => {
                report.push(Check::exact("irrep construction", 1, Some(e.to_string())));
                return SuiteOutcome { header, report };
            }
        },
    };
    header.push(("basis".to_string(), irreps.basis().to_string()));
    header.push((
        "irrep dimensions".to_string(),
        irreps.dims().iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    ));
    let irrep_report = verify_irrep_set(group, &irreps, tol);
    let irreps_ok = irrep_report.all_passed();
    report.extend(irrep_report);
    let classes = group.conjugacy_classes().len();
    report.push(Check::exact(
        "irrep count equals class count",
        1,
        (irreps.len() != classes).then(|| format!("{} irreps, {classes} classes", irreps.len())),
    ));
    if !irreps_ok {
        report.push(Check::exact("wigner checks", 0, Some("skipped: irrep set failed verification".into())));
        return SuiteOutcome { header, report };
    }

    let space = match PhaseSpace::new(group.clone(), irreps) {
        Ok(s) => s,
        Err(e) => {
            report.push(Check::exact("phase space", 1, Some(e.to_string())));
            return SuiteOutcome { header, report };
        }
    };

    report.extend(fourier_checks(&space, &mut rng, config));
    report.extend(marginal_checks(&space, &mut rng, config));
    report.extend(covariance_checks(&space, &mut rng, config));
    report.extend(traciality_checks(&space, &mut rng, config));

    if let GroupKind::Cyclic { n: cn } = *group.kind() {
        let mut worst = 0.0f64;
        for _ in 0..config.samples {
            let psi = random_state(&mut rng, n);
            worst = worst.max(cyclic_residual(&space, &psi, cn));
        }
        report.push(Check::numeric("cyclic closed form", config.samples, worst, tol.min(1e-12)));
    }
    if *group.kind() == (GroupKind::Metacyclic { p: 7, q: 3, k: 2 }) {
        report.extend(order21_checks(&space, &mut rng, tol));
    }
    SuiteOutcome { header, report }
}

fn group_checks(group: &FiniteGroup) -> Report {
    let mut report = Report::new();
    let n = group.order();
    report.push(Check::exact(
        "latin square",
        n * n,
        group.latin_violation().map(|(line, i, v)| format!("{line} {i} repeats {v}")),
    ));
    let e = group.identity();
    report.push(Check::exact(
        "identity",
        n,
        group
            .elements()
            .find(|&g| group.mul(e, g) != g || group.mul(g, e) != g)
            .map(|g| format!("g={}", group.label(g))),
    ));
    report.push(Check::exact(
        "inverses",
        n,
        group
            .elements()
            .find(|&g| group.mul(group.inv(g), g) != e || group.mul(g, group.inv(g)) != e || group.inv(group.inv(g)) != g)
            .map(|g| format!("g={}", group.label(g))),
    ));
    if n <= DEFAULT_MAX_ORDER {
        report.push(Check::exact(
            "associativity",
            n * n * n,
            group.associativity_violation().map(|(a, b, c)| format!("({a}, {b}, {c})")),
        ));
    }
    let sizes = group.conjugacy_classes().sizes();
    let total: usize = sizes.iter().sum();
    report.push(Check::exact(
        "class equation",
        sizes.len(),
        (total != n || sizes.iter().any(|s| !n.is_multiple_of(*s))).then(|| format!("sizes {sizes:?}")),
    ));
    report
}

fn square_root_checks(group: &FiniteGroup, roots: &SquareRootMap) -> Report {
    let mut report = Report::new();
    let n = group.order();
    let mut hit = vec![false; n];
    for g in group.elements() {
        hit[group.mul(g, g).0] = true;
    }
    report.push(Check::exact(
        "squaring is onto",
        n,
        hit.iter().position(|h| !h).map(|g| format!("{} is not a square", group.label(Element(g)))),
    ));
    let agree = SquareRootMap::by_powers(group).map(|p| p == *roots).unwrap_or(false);
    report.push(Check::exact(
        "square root constructions agree",
        n,
        (!agree).then(|| "inversion and power constructions differ".to_string()),
    ));
    report
}

fn fourier_checks(space: &PhaseSpace, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Report {
    let (group, irreps) = (space.group(), space.irreps());
    let n = group.order();
    let mut parseval = 0.0f64;
    let mut round_trip = 0.0f64;
    let mut translation = 0.0f64;
    for _ in 0..config.samples {
        let psi = random_state(rng, n);
        let phi = match forward(group, irreps, &psi) {
            Ok(p) => p,
            Err(_) => return failed("fourier", "forward transform refused the irrep set"),
        };
        parseval = parseval.max((phi.norm_sqr() - psi.norm_sqr()).abs());
        let back = inverse(group, irreps, &phi).expect("same irrep set");
        round_trip = round_trip.max(max_diff(back.amplitudes(), psi.amplitudes()));

        let g1 = Element(rng.random_range(0..n));
        let shifted = forward(group, irreps, &psi.left_translated(group, g1)).expect("same irrep set");
        for (j, irrep) in irreps.irreps().iter().enumerate() {
            let d = irrep.matrix(g1);
            for m in 0..irrep.dim {
                for col in 0..irrep.dim {
                    let expected: Complex64 = (0..irrep.dim).map(|m1| d[(m, m1)].conj() * phi.get(j, m1, col)).sum();
                    translation = translation.max((shifted.get(j, m, col) - expected).norm());
                }
            }
        }
    }
    let tol = config.tolerance.min(1e-12);
    let mut report = Report::new();
    report.push(Check::numeric("fourier parseval", config.samples, parseval, tol));
    report.push(Check::numeric("fourier round trip", config.samples, round_trip, tol));
    report.push(Check::numeric("fourier left translation", config.samples, translation, config.tolerance));
    report
}

fn marginal_checks(space: &PhaseSpace, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Report {
    let (group, irreps) = (space.group(), space.irreps());
    let n = group.order();
    let mut herm = 0.0f64;
    let mut momentum = 0.0f64;
    let mut position = 0.0f64;
    let mut density = 0.0f64;
    for i in 0..config.samples {
        let psi = random_state(rng, n);
        let w = space.wigner_pure(&psi).expect("state matches group");
        herm = herm.max(w.hermiticity_residual());
        let phi = forward(group, irreps, &psi).expect("complete irrep set");
        momentum = momentum.max(space.momentum_marginal_residual(&w, &phi));
        let marginal = w.marginal_position();
        position = position.max(marginal.max_imaginary);
        for (v, a) in marginal.values.iter().zip(psi.amplitudes()) {
            position = position.max((v - a.norm_sqr()).abs());
        }
        if i < 5 {
            let rho = DensityOperator::pure(&psi).expect("normalized");
            let wd = space.wigner_density(&rho).expect("dimension matches");
            density = density.max(wd.max_abs_diff(&w).expect("same space"));
        }
    }
    let tol = config.tolerance;
    let mut report = Report::new();
    report.push(Check::numeric("wigner hermiticity", config.samples, herm, tol));
    report.push(Check::numeric("momentum marginal", config.samples, momentum, tol));
    report.push(Check::numeric("position marginal", config.samples, position, tol));
    report.push(Check::numeric("density matches pure", config.samples.min(5), density, tol.min(1e-12)));
    report
}

fn covariance_checks(space: &PhaseSpace, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Report {
    let group = space.group();
    let n = group.order();
    let translations: Vec<Element> = if n <= config.exhaustive_limit {
        group.elements().collect()
    } else {
        (0..config.translations).map(|_| Element(rng.random_range(0..n))).collect()
    };
    let mut left = 0.0f64;
    let mut right = 0.0f64;
    for &g in &translations {
        let psi = random_state(rng, n);
        let w = space.wigner_pure(&psi).expect("state matches group");
        let lhs = space.wigner_pure(&psi.left_translated(group, g)).expect("state matches group");
        left = left.max(lhs.max_abs_diff(&space.left_translate(&w, g).expect("own table")).expect("same space"));
        let lhs = space.wigner_pure(&psi.right_translated(group, g)).expect("state matches group");
        right = right.max(lhs.max_abs_diff(&space.right_translate(&w, g).expect("own table")).expect("same space"));
    }
    let mut report = Report::new();
    report.push(Check::numeric("left translation covariance", translations.len(), left, config.tolerance));
    report.push(Check::numeric("right translation covariance", translations.len(), right, config.tolerance));
    report
}

fn traciality_checks(space: &PhaseSpace, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Report {
    let n = space.group().order();
    let mut worst = 0.0f64;
    let mut linear = 0.0f64;
    for i in 0..config.density_pairs {
        let r1 = random_density(rng, n);
        let r2 = random_density(rng, n);
        let w1 = space.wigner_density(&r1).expect("dimension matches");
        let w2 = space.wigner_density(&r2).expect("dimension matches");
        let pairing = w1.tilde().traciality_pairing(&w2.tilde()).expect("same space");
        worst = worst.max((pairing - r1.overlap(&r2)).norm());
        if i < 5 {
            let alpha: f64 = rng.random();
            let mixed = space
                .wigner_density(&DensityOperator::mix(alpha, &r1, &r2).expect("valid mixture"))
                .expect("dimension matches");
            let combo = WignerTable::linear_combination(&[
                (Complex64::new(alpha, 0.0), &w1),
                (Complex64::new(1.0 - alpha, 0.0), &w2),
            ])
            .expect("same space");
            linear = linear.max(mixed.max_abs_diff(&combo).expect("same space"));
        }
    }
    let e = space.group().identity();
    let delta = space
        .wigner_pure(&Wavefunction::delta(n, e))
        .expect("state matches group")
        .tilde();
    let analytic = (delta.traciality_pairing(&delta).expect("same space") - Complex64::new(1.0, 0.0)).norm();

    let mut report = Report::new();
    report.push(Check::numeric("traciality", config.density_pairs, worst, config.tolerance));
    report.push(Check::numeric("traciality at identity delta", 1, analytic, 1e-12));
    report.push(Check::numeric("density linearity", config.density_pairs.min(5), linear, config.tolerance.min(1e-12)));
    report
}

/// Largest entrywise gap between the general table and the closed form.
pub fn cyclic_residual(space: &PhaseSpace, psi: &Wavefunction, n: usize) -> f64 {
    let general = space.wigner_pure(psi).expect("state matches group");
    let closed = cyclic_wigner(psi, n).expect("odd n");
    general
        .entries()
        .map(|(g, j, _, _, _, _, z)| (z - closed[(g.0, j)]).norm())
        .fold(0.0, f64::max)
}

fn order21_checks(space: &PhaseSpace, rng: &mut ChaCha8Rng, tol: f64) -> Report {
    let mut supports = None;
    let mut modulus = 0.0f64;
    let mut residual = 0.0f64;
    let pairs = 10;
    for _ in 0..pairs {
        let psi = random_state(rng, 2);
        let (c1, c2) = (psi.amplitudes()[0], psi.amplitudes()[1]);
        let d = match order21::decompose(space, c1, c2) {
            Ok(d) => d,
            Err(e) => return failed("order-21 decomposition", &e.to_string()),
        };
        let group = space.group();
        if supports.is_none()
            && (d.w1.support() != vec![d.first]
                || d.w2.support() != vec![d.second]
                || d.interference.support() != vec![group.identity()])
        {
            supports = Some(format!("c1={c1} c2={c2}"));
        }
        modulus = modulus.max((d.highlighted_interference().norm() - (c1 * c2).norm() / 7.0).abs());
        residual = residual.max(d.residual);
    }
    let mut report = Report::new();
    report.push(Check::exact("order-21 supports", pairs, supports));
    report.push(Check::numeric("order-21 interference modulus", pairs, modulus, 1e-12));
    report.push(Check::numeric("order-21 decomposition", pairs, residual, tol.min(1e-12)));
    report
}

fn failed(name: &str, why: &str) -> Report {
    let mut r = Report::new();
    r.push(Check::exact(name, 1, Some(why.to_string())));
    r
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

impl From<Error> for Report {
    fn from(e: Error) -> Self {
        failed("error", &e.to_string())
    }
}
