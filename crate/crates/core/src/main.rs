use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cretan::catalog::{catalog_table, Catalog, CatalogTable, DiffKind, CONSTRUCT_METHODS};
use cretan::cretan::{group_orthogonality_check, LevelMatrix};
use cretan::designs::{
    biquadratic_difference_set, develop, qr_difference_set, singer_difference_set, DifferenceSet, REGISTRY,
};
use cretan::io::fixture::FixtureStore;
use cretan::io::matrix_file::MatrixFile;
use cretan::io::render::{render, ImageFormat, RenderStyle};
use cretan::scalar::VERIFY_TOL;
use cretan::verify::{det_bounds, verify_cretan, Bound, Certificate, VerifyMode};
use cretan::CretanError;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FIXTURE: u8 = 3;

#[derive(Parser)]
#[command(name = "cretan", version, about = "Build and check Cretan matrices")]
struct Cli {
    /// Fixture directory (overrides CRETAN_FIXTURE_DIR and the built-in set).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one matrix of the given order.
    Construct {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "auto", value_parser = clap::builder::PossibleValuesParser::new(CONSTRUCT_METHODS))]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Image path; `.pgm` gives a greymap, anything else SVG.
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Check a matrix file.
    Verify {
        file: PathBuf,
        /// Also require a unit-modulus entry in every row and column.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = VERIFY_TOL)]
        tolerance: f64,
    },
    /// Best verified construction for every odd order.
    Catalog {
        #[arg(long, default_value_t = 199)]
        max: usize,
        #[arg(long)]
        diff: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Determinant bounds for order N.
    Bounds { n: usize },
    /// Difference sets and designs.
    Designs {
        #[command(subcommand)]
        action: DesignAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum DesignAction {
    List,
    Make {
        #[arg(long, value_enum)]
        family: Family,
        /// qr: q; biquadratic: p; singer: n q.
        #[arg(long, num_args = 1.., required = true)]
        params: Vec<u64>,
        /// Adjoin 0 to a biquadratic set.
        #[arg(long)]
        zero: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Qr,
    Biquadratic,
    Singer,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let store = match &cli.fixtures {
        Some(dir) => FixtureStore::from_dir(dir),
        None => FixtureStore::from_env(),
    };
    match run(cli.command, store) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CretanError::MissingFixture(_) => EXIT_FIXTURE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(command: Command, store: FixtureStore) -> cretan::Result<u8> {
    match command {
        Command::Construct {
            order,
            method,
            out,
            render: image,
        } => construct(order, &method, out, image, store),
        Command::Verify {
            file,
            strict,
            tolerance,
        } => verify(&file, strict, tolerance),
        Command::Catalog { max, diff, format } => {
            let table = catalog_table(max, &store)?;
            match format {
                Format::Structured => println!("{}", serde_json::to_string_pretty(&table).expect("serializable")),
                Format::Text => print_catalog(&table, diff),
            }
            Ok(0)
        }
        Command::Bounds { n } => {
            let b = det_bounds(n);
            println!("order {n}");
            print_bound("hadamard", Some(&b.hadamard));
            print_bound("barba", b.barba.as_ref());
            print_bound("wojtas", b.wojtas.as_ref());
            print_bound("brent-osborn", Some(&b.brent_osborn));
            Ok(0)
        }
        Command::Designs { action } => designs(action, &store),
    }
}

fn print_bound(name: &str, b: Option<&Bound>) {
    match b {
        None => println!("{name:<13} n/a"),
        Some(b) => {
            let value = match b.value {
                Some(v) if v.fract() == 0.0 && v < 1e15 => format!("{v:.0}"),
                Some(v) if v < 1e12 => format!("{v:.2}"),
                Some(v) => format!("{v:.6e}"),
                None => "overflow".to_string(),
            };
            println!("{name:<13} {value}  (ln {:.6})", b.log);
        }
    }
}

fn construct(
    order: usize,
    method: &str,
    out: Option<PathBuf>,
    image: Option<PathBuf>,
    store: FixtureStore,
) -> cretan::Result<u8> {
    let file = Catalog::new(store).construct(order, method)?;
    let text = file.to_text();
    match &out {
        Some(path) => file.write(path)?,
        None => print!("{text}"),
    }
    if let Some(path) = image {
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("pgm") => ImageFormat::Pgm,
            _ => ImageFormat::Svg,
        };
        std::fs::write(&path, render(&file, format, RenderStyle::default()))
            .map_err(|e| CretanError::Io(format!("{}: {e}", path.display())))?;
    }
    let ok = check(&file, false, VERIFY_TOL, &mut |line| eprintln!("{line}"));
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn verify(path: &Path, strict: bool, tolerance: f64) -> cretan::Result<u8> {
    let file = match MatrixFile::read(path) {
        Ok(f) => f,
        Err(e @ CretanError::Io(_)) => return Err(e),
        Err(e) => {
            println!("FAIL unreadable matrix: {e}");
            return Ok(EXIT_VERIFY);
        }
    };
    let ok = check(&file, strict, tolerance, &mut |line| println!("{line}"));
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn check(file: &MatrixFile, strict: bool, tol: f64, say: &mut dyn FnMut(String)) -> bool {
    let mode = if strict {
        VerifyMode::Strict
    } else {
        VerifyMode::Relaxed
    };
    match file {
        MatrixFile::Level(m) => {
            let c = verify_cretan(m, mode, tol);
            report_level(m, &c, say);
            c.passed
        }
        MatrixFile::Complex(m) => {
            let r = m.gram_residual();
            let ok = r < tol;
            say(format!(
                "order {} complex omega {} tau {}",
                m.order(),
                m.omega(),
                m.tau()
            ));
            say(format!("max |MM* - omega I| = {r:.3e}"));
            say(verdict(ok));
            ok
        }
        MatrixFile::Group { matrix, .. } => {
            let c = group_orthogonality_check(matrix);
            say(format!(
                "order {} over Z_{} weight {}, {} row pairs",
                matrix.order(),
                matrix.modulus(),
                matrix.weight(),
                c.row_pairs
            ));
            for f in &c.failures {
                say(format!("  {f}"));
            }
            say(verdict(c.passed));
            c.passed
        }
    }
}

fn verdict(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

fn report_level(m: &LevelMatrix, c: &Certificate, say: &mut dyn FnMut(String)) {
    let levels: Vec<String> = c.levels.iter().map(ToString::to_string).collect();
    say(format!(
        "order {} method {} tau {} omega {} ({})",
        c.order,
        m.method(),
        c.tau,
        c.omega_claimed,
        if c.exact { "exact" } else { "float" }
    ));
    say(format!("levels {}", levels.join(" ")));
    say(format!(
        "radius {} matches claim: {}; within order: {}",
        c.radius, c.omega_matches, c.radius_within_order
    ));
    if c.gram_exact_zero {
        say("off-diagonal Gram entries are exactly zero".to_string());
    } else {
        say(format!(
            "max off-diagonal residual {:.3e}, max diagonal deviation {:.3e} (tolerance {:.1e})",
            c.max_offdiag_residual, c.max_diag_deviation, c.tolerance
        ));
    }
    say(format!(
        "moduli <= 1: {}; columns agree: {}; strict: {}; relaxed: {}",
        c.moduli_ok, c.columns_agree, c.strict, c.relaxed
    ));
    say(format!(
        "ln|det| {:.6} vs (n/2) ln omega {:.6}, relative residual {:.2e}",
        c.det.log_abs_det, c.det.expected, c.det.relative_residual
    ));
    say(verdict(c.passed));
}

fn print_catalog(t: &CatalogTable, diff: bool) {
    println!(
        "{:>5}  {:<17} {:>3}  {:>12}  {:<11}  applicable",
        "order", "best", "tau", "omega", "paper"
    );
    for r in &t.rows {
        let Some(b) = &r.best else { continue };
        let methods: Vec<String> = r.methods.iter().map(|m| m.label()).collect();
        println!(
            "{:>5}  {:<17} {:>3}  {:>12.4}  {:<11}  {}",
            r.order,
            b.method,
            b.tau,
            b.omega,
            r.paper.text(),
            methods.join(", ")
        );
    }
    if !diff {
        return;
    }
    println!();
    for kind in [
        DiffKind::Agree,
        DiffKind::Substituted,
        DiffKind::OurExtra,
        DiffKind::PaperExtra,
        DiffKind::Conflict,
    ] {
        println!("{kind:?}: {}", t.diff.count(kind));
        if kind == DiffKind::Agree {
            continue;
        }
        for i in t.diff.of_kind(kind) {
            println!("  {} {:>4} [{}] {} {}", i.table, i.order, i.paper, i.ours, i.note);
        }
    }
}

fn designs(action: DesignAction, store: &FixtureStore) -> cretan::Result<u8> {
    match action {
        DesignAction::List => {
            for e in REGISTRY.iter() {
                let status = if e.available(store) { "ok" } else { "missing fixture" };
                let params = format!("({},{},{})", e.v, e.k, e.lambda);
                println!("{params:<12} {:<28} {status}", e.label);
            }
            Ok(0)
        }
        DesignAction::Make { family, params, zero } => {
            let want = |n: usize| -> cretan::Result<()> {
                if params.len() == n {
                    Ok(())
                } else {
                    Err(CretanError::Invalid(format!(
                        "expected {n} parameter(s), got {}",
                        params.len()
                    )))
                }
            };
            let ds: DifferenceSet = match family {
                Family::Qr => {
                    want(1)?;
                    qr_difference_set(params[0])?
                }
                Family::Biquadratic => {
                    want(1)?;
                    biquadratic_difference_set(params[0], zero)?
                }
                Family::Singer => {
                    want(2)?;
                    let n = u32::try_from(params[0]).map_err(|_| CretanError::Invalid("n too large".into()))?;
                    singer_difference_set(n, params[1])?
                }
            };
            let (v, k, l) = ds.params();
            let census = ds.census();
            println!("params ({v},{k},{l}) over {}", ds.group);
            println!(
                "elements {}",
                ds.elements.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            );
            println!("census {}", if census.passed { "balanced" } else { "FAILED" });
            let design = develop(&ds);
            println!(
                "|det| of incidence matches k(k-lambda)^((v-1)/2): {}",
                design.abs_det() == design.expected_abs_det()
            );
            Ok(if census.passed { 0 } else { EXIT_VERIFY })
        }
    }
}
