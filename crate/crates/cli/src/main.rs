use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use oddwigner::order21::{self, HIGHLIGHT};
use oddwigner::report::fmt_f64;
use oddwigner::suite::{self, SuiteConfig, DEFAULT_SEED};
use oddwigner::{
    forward, Basis, Error, FiniteGroup, GroupSpec, IrrepDocument, IrrepSet, Layout, PhaseSpace, SquareRootMap,
    StateDocument, Wavefunction, WignerDocument,
};

/// Wigner distributions on finite groups of odd order.
#[derive(Parser)]
#[command(name = "oddwigner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print order, elements, inverses and conjugacy classes.
    Group {
        /// Group spec file, or shorthand `cyclic:N` / `metacyclic:P,Q,K`.
        group: String,
    },
    /// Run the full property suite and exit nonzero on any failure.
    Verify {
        group: String,
        #[command(flatten)]
        irreps: IrrepArgs,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random pure states per property.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random density pairs for traciality.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the momentum-space coefficients of a state.
    Fourier {
        group: String,
        state: PathBuf,
        #[command(flatten)]
        irreps: IrrepArgs,
        #[arg(long)]
        auto_normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the Wigner distribution of a state as a JSON document.
    Wigner {
        group: String,
        state: PathBuf,
        #[command(flatten)]
        irreps: IrrepArgs,
        /// Keep only entries with modulus at least 1e-14.
        #[arg(long)]
        sparse: bool,
        #[arg(long)]
        auto_normalize: bool,
        /// Also write position and momentum marginals here.
        #[arg(long)]
        marginals: Option<PathBuf>,
        /// Also write the contracted distribution W̃ here.
        #[arg(long)]
        tilde: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose c1 δ(3,1) + c2 δ(2,2) on the order-21 group.
    PaperExample {
        /// Complex coefficient as `re,im`.
        #[arg(long, default_value = "0.7071067811865476,0", value_parser = parse_complex, allow_hyphen_values = true)]
        c1: Complex64,
        #[arg(long, default_value = "0.7071067811865476,0", value_parser = parse_complex, allow_hyphen_values = true)]
        c2: Complex64,
        #[arg(long, default_value = "paper")]
        basis: Basis,
    },
    /// Export or check irreducible representation documents.
    Irreps {
        #[command(subcommand)]
        action: IrrepsAction,
    },
}

#[derive(Subcommand)]
enum IrrepsAction {
    /// Write the built-in irreps of a group as JSON.
    Dump {
        group: String,
        #[arg(long, default_value = "paper")]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load an irrep document and verify it against a group.
    Check {
        group: String,
        irreps: PathBuf,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
        tol: f64,
    },
}

#[derive(Args)]
struct IrrepArgs {
    /// Irrep document to use instead of the built-in set.
    #[arg(long)]
    irreps: Option<PathBuf>,
    #[arg(long, default_value = "paper")]
    basis: Basis,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let tol: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !tol.is_finite() || tol < 1e-14 {
        return Err("tolerance must be a finite number >= 1e-14".into());
    }
    Ok(tol)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().map_err(|e| format!("real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// Failure classes mapped onto exit codes 1 and 2.
enum Failure {
    Validation(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::UnknownLabel(_)
            | Error::ElementOutOfRange { .. }
            | Error::StateLength { .. }
            | Error::CoefficientLength { .. }
            | Error::EmptyTable
            | Error::NotSquare { .. }
            | Error::EntryOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Group { group } => cmd_group(&group),
        Command::Verify { group, irreps, tol, seed, samples, pairs, out } => {
            cmd_verify(&group, &irreps, tol, seed, samples, pairs, out.as_deref())
        }
        Command::Fourier { group, state, irreps, auto_normalize, out } => {
            cmd_fourier(&group, &state, &irreps, auto_normalize, out.as_deref())
        }
        Command::Wigner { group, state, irreps, sparse, auto_normalize, marginals, tilde, out } => cmd_wigner(
            &group,
            &state,
            &irreps,
            sparse,
            auto_normalize,
            marginals.as_deref(),
            tilde.as_deref(),
            out.as_deref(),
        ),
        Command::PaperExample { c1, c2, basis } => cmd_paper_example(c1, c2, basis),
        Command::Irreps { action: IrrepsAction::Dump { group, basis, out } } => cmd_irreps_dump(&group, basis, out.as_deref()),
        Command::Irreps { action: IrrepsAction::Check { group, irreps, tol } } => cmd_irreps_check(&group, &irreps, tol),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes to `out` when given, otherwise returns the text for stdout.
fn emit(text: String, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn parse_shorthand(arg: &str) -> Option<Result<GroupSpec, Failure>> {
    let (kind, rest) = arg.split_once(':')?;
    let nums: Result<Vec<usize>, _> = rest.split(',').map(|s| s.trim().parse::<usize>()).collect();
    let bad = || Failure::Usage(format!("group shorthand {arg:?}: expected cyclic:N or metacyclic:P,Q,K"));
    let nums = match nums {
        Ok(n) => n,
        Err(_) => return Some(Err(bad())),
    };
    Some(match (kind, nums.as_slice()) {
        ("cyclic", &[n]) => Ok(GroupSpec::Cyclic { n }),
        ("metacyclic", &[p, q, k]) => Ok(GroupSpec::Metacyclic { p, q, k }),
        _ => Err(bad()),
    })
}

fn load_spec(arg: &str) -> Result<GroupSpec, Failure> {
    if !Path::new(arg).exists() {
        if let Some(spec) = parse_shorthand(arg) {
            return spec;
        }
    }
    Ok(GroupSpec::from_json(&read(Path::new(arg))?)?)
}

fn load_group(arg: &str) -> Result<FiniteGroup, Failure> {
    Ok(load_spec(arg)?.build()?)
}

fn load_irreps(group: &FiniteGroup, args: &IrrepArgs) -> Result<IrrepSet, Failure> {
    match &args.irreps {
        Some(path) => Ok(IrrepSet::load(group, &IrrepDocument::from_json(&read(path)?)?)?),
        None => Ok(IrrepSet::for_group(group, args.basis.clone())?),
    }
}

fn load_state(group: &FiniteGroup, path: &Path, auto_normalize: bool) -> Result<Wavefunction, Failure> {
    let psi = StateDocument::from_json(&read(path)?)?.to_wavefunction(group)?;
    if auto_normalize {
        Ok(psi.normalized()?)
    } else {
        psi.ensure_normalized()?;
        Ok(psi)
    }
}

fn cmp(z: Complex64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn cmd_group(arg: &str) -> CmdResult {
    let spec = load_spec(arg)?;
    let group = spec.build()?;
    let n = group.order();
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", spec.id());
    let _ = writeln!(out, "order: {n} ({})", if group.is_odd() { "odd" } else { "even" });
    let _ = writeln!(out, "abelian: {}", group.is_abelian());
    out.push_str("elements (index label order inverse):\n");
    for g in group.elements() {
        let inv = group.inv(g);
        let _ = writeln!(out, "  {} {} {} {}", g.0, group.label(g), group.element_order(g), inv.0);
    }
    let _ = writeln!(out, "inverse table: {}", join(group.elements().map(|g| group.inv(g).0), " "));
    let classes = group.conjugacy_classes();
    let sizes = classes.sizes();
    if sizes.iter().all(|&s| s == 1) {
        let _ = writeln!(out, "classes: {} classes, all singletons", classes.len());
    } else {
        let _ = writeln!(out, "classes: {} classes, sizes {}", classes.len(), join(&sizes, ","));
    }
    for (i, class) in classes.classes().iter().enumerate() {
        let _ = writeln!(out, "  class {} (size {}): {}", i + 1, class.len(), join(class.iter().map(|&g| group.label(g)), " "));
    }
    if let Err(e) = SquareRootMap::new(&group) {
        let _ = writeln!(out, "warning: even order: Wigner construction unavailable ({e})");
    }
    Ok(out)
}

fn cmd_verify(
    arg: &str,
    irreps: &IrrepArgs,
    tol: f64,
    seed: u64,
    samples: usize,
    pairs: usize,
    out: Option<&Path>,
) -> CmdResult {
    let group = load_group(arg)?;
    // Loaded documents are only shape-checked here; the suite reports
    // which property fails.
    let set = match &irreps.irreps {
        Some(path) => Some(IrrepDocument::from_json(&read(path)?)?.to_set(group.order())?),
        None => None,
    };
    let config = SuiteConfig { tolerance: tol, seed, samples, density_pairs: pairs, basis: irreps.basis.clone(), ..SuiteConfig::default() };
    let outcome = suite::run(&group, set, &config);
    let text = outcome.render();
    if outcome.passed() {
        emit(text, out)
    } else {
        match out {
            Some(path) => write(path, &text)?,
            None => print!("{text}"),
        }
        let names = join(outcome.report.failures().map(|c| c.name.clone()), ", ");
        Err(Failure::Validation(format!("verification failed: {names}")))
    }
}

fn cmd_fourier(arg: &str, state: &Path, irreps: &IrrepArgs, auto_normalize: bool, out: Option<&Path>) -> CmdResult {
    let spec = load_spec(arg)?;
    let group = spec.build()?;
    let set = load_irreps(&group, irreps)?;
    let psi = load_state(&group, state, auto_normalize)?;
    let phi = forward(&group, &set, &psi)?;
    let mut text = String::new();
    let _ = writeln!(text, "group: {}", spec.id());
    let _ = writeln!(text, "basis: {}", set.basis());
    let _ = writeln!(text, "state: {}", psi.digest());
    let _ = writeln!(text, "norm: {} {}", fmt_f64(psi.norm_sqr()), fmt_f64(phi.norm_sqr()));
    text.push_str("# J M N re im\n");
    for (j, m, n, z) in phi.iter() {
        let _ = writeln!(text, "{} {} {} {}", set.irreps()[j].label, m + 1, n + 1, cmp(z));
    }
    emit(text, out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_wigner(
    arg: &str,
    state: &Path,
    irreps: &IrrepArgs,
    sparse: bool,
    auto_normalize: bool,
    marginals: Option<&Path>,
    tilde: Option<&Path>,
    out: Option<&Path>,
) -> CmdResult {
    let spec = load_spec(arg)?;
    let group = spec.build()?;
    SquareRootMap::new(&group)?;
    let set = load_irreps(&group, irreps)?;
    let psi = load_state(&group, state, auto_normalize)?;
    let space = PhaseSpace::new(group, set)?;
    let table = space.wigner_pure(&psi)?;

    if let Some(path) = marginals {
        let pos = table.marginal_position();
        let momentum: Vec<serde_json::Value> = table
            .marginal_momentum()
            .iter()
            .zip(table.labels())
            .map(|(m, label)| {
                let rows: Vec<Vec<[f64; 2]>> =
                    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
                serde_json::json!({ "j": label, "matrix": rows })
            })
            .collect();
        let doc = serde_json::json!({ "position": pos.values, "momentum": momentum });
        write(path, &serde_json::to_string_pretty(&doc).expect("json value serializes"))?;
    }
    if let Some(path) = tilde {
        let aux = table.tilde();
        let mut entries = Vec::new();
        for g in space.group().elements() {
            for (j, &d) in aux.dims().iter().enumerate() {
                for m in 0..d {
                    for mp in 0..d {
                        let z = aux.get(g, j, m, mp);
                        if !sparse || z.norm() >= oddwigner::wigner::SPARSE_THRESHOLD {
                            entries.push(serde_json::json!({
                                "g": g.0, "j": table.labels()[j], "m": m, "mp": mp, "re": z.re, "im": z.im
                            }));
                        }
                    }
                }
            }
        }
        write(path, &serde_json::to_string_pretty(&serde_json::json!({ "entries": entries })).expect("json value serializes"))?;
    }

    let layout = if sparse { Layout::Sparse } else { Layout::Dense };
    let doc = WignerDocument::new(&table, spec, psi.digest(), layout);
    let mut text = doc.to_json();
    text.push('\n');
    emit(text, out)
}

fn support_labels(group: &FiniteGroup, table: &oddwigner::WignerTable) -> String {
    let s = table.support();
    if s.is_empty() {
        "(none)".to_string()
    } else {
        join(s.iter().map(|&g| group.label(g)), " ")
    }
}

fn cmd_paper_example(c1: Complex64, c2: Complex64, basis: Basis) -> CmdResult {
    let space = order21::order21_space(basis)?;
    let d = order21::decompose(&space, c1, c2)?;
    let group = space.group();
    let computed = d.highlighted_interference();
    let reference = d.reference_value();
    let (label, m, n, mp, np) = HIGHLIGHT;
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", space.group_id());
    let _ = writeln!(out, "basis: {}", space.irreps().basis());
    let _ = writeln!(out, "c1: {} at {}", cmp(c1), group.label(d.first));
    let _ = writeln!(out, "c2: {} at {}", cmp(c2), group.label(d.second));
    let _ = writeln!(out, "W1 support: {}", support_labels(group, &d.w1));
    let _ = writeln!(out, "W2 support: {}", support_labels(group, &d.w2));
    let _ = writeln!(out, "W_int support: {}", support_labels(group, &d.interference));
    let _ = writeln!(out, "midpoint: {}", group.label(d.midpoint));
    let _ = writeln!(out, "decomposition residual: {}", fmt_f64(d.residual));
    let _ = writeln!(out, "W_int({}; J={label} M={m} N={n} M'={mp} N'={np}):", group.label(d.midpoint));
    let _ = writeln!(out, "  computed:  {}  |z| {}  arg {}", cmp(computed), fmt_f64(computed.norm()), fmt_f64(computed.arg()));
    let _ = writeln!(out, "  reference: {}  |z| {}  arg {}", cmp(reference), fmt_f64(reference.norm()), fmt_f64(reference.arg()));
    let _ = writeln!(out, "  expected modulus |c1 c2|/7: {}", fmt_f64((c1 * c2).norm() / 7.0));
    let agree = (computed - reference).norm() <= 1e-12;
    if agree {
        out.push_str("  agreement: yes\n");
    } else {
        let ratio = computed / reference;
        let _ = writeln!(
            out,
            "  agreement: no (arg(computed/reference) = {})",
            fmt_f64(ratio.arg())
        );
    }
    Ok(out)
}

fn cmd_irreps_dump(arg: &str, basis: Basis, out: Option<&Path>) -> CmdResult {
    let group = load_group(arg)?;
    let set = IrrepSet::for_group(&group, basis)?;
    let mut text = set.to_document().to_json();
    text.push('\n');
    emit(text, out)
}

fn cmd_irreps_check(arg: &str, path: &Path, tol: f64) -> CmdResult {
    let group = load_group(arg)?;
    let set = IrrepDocument::from_json(&read(path)?)?.to_set(group.order())?;
    let report = oddwigner::verify_irrep_set(&group, &set, tol);
    let text = report.render();
    if report.all_passed() {
        Ok(text)
    } else {
        print!("{text}");
        let names = join(report.failures().map(|c| c.name.clone()), ", ");
        Err(Failure::Validation(format!("irrep check failed: {names}")))
    }
}
