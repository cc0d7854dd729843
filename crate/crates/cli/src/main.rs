//! Command-line interface: builds the graph complexes from text inputs,
//! computes Betti tables and chromatic polynomials, and runs the named
//! verification suites.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure, 2 input
//! error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use graphcohom::chromatic::{chromatic_delcon, chromatic_subset};
use graphcohom::complexes::{
    build_cbs, build_cbs_dual, build_conn, build_rn, build_rn_from, GeneratorMode,
};
use graphcohom::field::{check_prime, Field, FieldSpec, Fp};
use graphcohom::frobenius::{parse_algebra, parse_algebra_field, FrobeniusAlgebra};
use graphcohom::graph::Graph;
use graphcohom::homology::{betti, euler_characteristic, graded_euler, quasi_iso_check};
use graphcohom::Rational;

mod verify;

#[derive(Parser, Debug)]
#[command(
    name = "graphcohom",
    about = "Graph cohomology complexes over exact fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Chain group dimensions and Betti numbers of a chosen complex.
    Betti(BettiArgs),
    /// Compare Betti tables of the dual complex and the quotient model.
    QuasiIso(CommonArgs),
    /// Chromatic polynomial by both routes, plus the graded Euler identity.
    Chromatic(CommonArgs),
    /// Run every named verification suite on the given graph and algebra.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Graph file (text format: `vertices N` then one `i j` line per edge).
    #[arg(long)]
    graph: PathBuf,
    /// Built-in algebra name (s2, s4, cp2, t2, ground) or an algebra file.
    #[arg(long, default_value = "s2")]
    algebra: String,
    /// Coefficient field: `Q` or `F<p>`; also via GRAPHCOHOM_FIELD.
    #[arg(long)]
    field: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct BettiArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which complex to build.
    #[arg(long, value_enum)]
    complex: ComplexKind,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Cycle generators used for the ideal-based checks.
    #[arg(long, value_enum, default_value_t = GeneratorModeArg::AllCycles)]
    generator_mode: GeneratorModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ComplexKind {
    Cbs,
    Dual,
    Rn,
    Conn,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorModeArg {
    AllCycles,
    TrianglesOnly,
}

impl From<GeneratorModeArg> for GeneratorMode {
    fn from(m: GeneratorModeArg) -> Self {
        match m {
            GeneratorModeArg::AllCycles => GeneratorMode::AllCycles,
            GeneratorModeArg::TrianglesOnly => GeneratorMode::TrianglesOnly,
        }
    }
}

/// Input error (exit 2) vs verification failure (exit 1).
enum CliError {
    Input(String),
    Verification,
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::Input(message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(1),
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Resolved inputs shared by all commands.
struct Inputs {
    graph: Graph,
    graph_path: String,
    algebra_name: String,
    algebra_source: AlgebraSource,
    field: FieldSpec,
    format: Format,
}

enum AlgebraSource {
    Builtin(String),
    File(String),
}

fn resolve(common: &CommonArgs) -> Result<Inputs, CliError> {
    let graph_text = std::fs::read_to_string(&common.graph)
        .map_err(|e| format!("cannot read {}: {e}", common.graph.display()))?;
    let graph =
        Graph::parse(&graph_text).map_err(|e| format!("{}: {e}", common.graph.display()))?;

    let is_builtin = FrobeniusAlgebra::<Rational>::BUILTIN_NAMES
        .iter()
        .any(|n| n.eq_ignore_ascii_case(&common.algebra));
    let (algebra_source, file_field) = if is_builtin {
        (
            AlgebraSource::Builtin(common.algebra.to_ascii_lowercase()),
            None,
        )
    } else {
        let text = std::fs::read_to_string(&common.algebra)
            .map_err(|e| format!("cannot read algebra {}: {e}", common.algebra))?;
        let spec = parse_algebra_field(&text).map_err(|e| format!("{}: {e}", common.algebra))?;
        (AlgebraSource::File(text), Some(spec))
    };

    let flag_field = match &common.field {
        Some(text) => Some(FieldSpec::parse(text).map_err(|e| e.to_string())?),
        None => None,
    };
    let env_field = match std::env::var("GRAPHCOHOM_FIELD") {
        Ok(text) => Some(FieldSpec::parse(&text).map_err(|e| e.to_string())?),
        Err(_) => None,
    };
    // flag wins, then the algebra file header, then the environment
    let field = flag_field
        .or(file_field)
        .or(env_field)
        .unwrap_or(FieldSpec::Rational);
    if let (Some(flag), Some(file)) = (flag_field, file_field) {
        if flag != file {
            return Err(CliError::Input(format!(
                "field {flag} requested but the algebra file declares {file}"
            )));
        }
    }
    if let FieldSpec::Prime(p) = field {
        check_prime(p).map_err(|e| e.to_string())?;
    }

    Ok(Inputs {
        graph,
        graph_path: common.graph.display().to_string(),
        algebra_name: common.algebra.clone(),
        algebra_source,
        field,
        format: common.format,
    })
}

fn load_algebra<F: Field>(
    inputs: &Inputs,
    params: &F::Params,
) -> Result<FrobeniusAlgebra<F>, CliError> {
    match &inputs.algebra_source {
        AlgebraSource::Builtin(name) => Ok(FrobeniusAlgebra::builtin(name, params)
            .expect("name validated against the builtin list")),
        AlgebraSource::File(text) => parse_algebra(text, params)
            .map_err(|e| CliError::Input(format!("{}: {e}", inputs.algebra_name))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Betti(args) => {
            let inputs = resolve(&args.common)?;
            match inputs.field {
                FieldSpec::Rational => cmd_betti::<Rational>(&inputs, args.complex, &()),
                FieldSpec::Prime(p) => cmd_betti::<Fp>(&inputs, args.complex, &p),
            }
        }
        Command::QuasiIso(common) => {
            let inputs = resolve(&common)?;
            match inputs.field {
                FieldSpec::Rational => cmd_quasi_iso::<Rational>(&inputs, &()),
                FieldSpec::Prime(p) => cmd_quasi_iso::<Fp>(&inputs, &p),
            }
        }
        Command::Chromatic(common) => {
            let inputs = resolve(&common)?;
            match inputs.field {
                FieldSpec::Rational => cmd_chromatic::<Rational>(&inputs, &()),
                FieldSpec::Prime(p) => cmd_chromatic::<Fp>(&inputs, &p),
            }
        }
        Command::Verify(args) => {
            let inputs = resolve(&args.common)?;
            let mode = GeneratorMode::from(args.generator_mode);
            match inputs.field {
                FieldSpec::Rational => verify::cmd_verify::<Rational>(&inputs, mode, &()),
                FieldSpec::Prime(p) => verify::cmd_verify::<Fp>(&inputs, mode, &p),
            }
        }
    }
}

/// Emits one record, either aligned text or `key<TAB>value`.
fn emit(format: Format, key: &str, value: impl std::fmt::Display) {
    match format {
        Format::Text => println!("{key}: {value}"),
        Format::Structured => println!("{key}\t{value}"),
    }
}

fn emit_table(format: Format, name: &str, dims: &BTreeMap<i64, usize>) {
    for (deg, value) in dims {
        match format {
            Format::Text => println!("{name} degree {deg}: {value}"),
            Format::Structured => println!("{name}.{deg}\t{value}"),
        }
    }
}

fn cmd_betti<F: Field>(
    inputs: &Inputs,
    kind: ComplexKind,
    params: &F::Params,
) -> Result<(), CliError> {
    let fmt = inputs.format;
    emit(fmt, "command", "betti");
    emit(fmt, "graph", &inputs.graph_path);
    emit(fmt, "field", inputs.field);
    let g = &inputs.graph;
    let to_err = |e: graphcohom::complexes::BuildError| CliError::Input(e.to_string());
    let (complex, name) = match kind {
        ComplexKind::Cbs => {
            let a = load_algebra::<F>(inputs, params)?;
            emit(fmt, "algebra", &inputs.algebra_name);
            (build_cbs(g, &a).map_err(to_err)?.complex().clone(), "cbs")
        }
        ComplexKind::Dual => {
            let a = load_algebra::<F>(inputs, params)?;
            emit(fmt, "algebra", &inputs.algebra_name);
            (
                build_cbs_dual(g, &a).map_err(to_err)?.complex().clone(),
                "dual",
            )
        }
        ComplexKind::Rn => {
            let a = load_algebra::<F>(inputs, params)?;
            emit(fmt, "algebra", &inputs.algebra_name);
            (build_rn(g, &a).map_err(to_err)?.complex().clone(), "rn")
        }
        ComplexKind::Conn => (build_conn::<F>(g, params).map_err(to_err)?, "conn"),
    };
    emit(fmt, "complex", name);
    let dims: BTreeMap<i64, usize> = complex
        .degrees()
        .into_iter()
        .map(|deg| (deg, complex.dim(deg)))
        .collect();
    emit_table(fmt, "dim", &dims);
    let table = betti(&complex);
    emit_table(fmt, "betti", &table.dims);
    emit(fmt, "euler", euler_characteristic(&complex));
    Ok(())
}

fn cmd_quasi_iso<F: Field>(inputs: &Inputs, params: &F::Params) -> Result<(), CliError> {
    let fmt = inputs.format;
    emit(fmt, "command", "quasi-iso");
    emit(fmt, "graph", &inputs.graph_path);
    emit(fmt, "algebra", &inputs.algebra_name);
    emit(fmt, "field", inputs.field);
    let a = load_algebra::<F>(inputs, params)?;
    let to_err = |e: graphcohom::complexes::BuildError| CliError::Input(e.to_string());
    let dual = build_cbs_dual(&inputs.graph, &a).map_err(to_err)?;
    let rn = build_rn_from(&dual).map_err(to_err)?;
    let report = quasi_iso_check(dual.complex(), rn.complex())
        .map_err(|e| CliError::Input(e.to_string()))?;
    for (deg, left, right) in &report.rows {
        match fmt {
            Format::Text => {
                let mark = if left == right { "ok" } else { "MISMATCH" };
                println!("degree {deg}: dual {left} vs rn {right} [{mark}]");
            }
            Format::Structured => {
                println!("betti.dual.{deg}\t{left}");
                println!("betti.rn.{deg}\t{right}");
            }
        }
    }
    emit(fmt, "match", report.matches);
    if report.matches {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn cmd_chromatic<F: Field>(inputs: &Inputs, params: &F::Params) -> Result<(), CliError> {
    let fmt = inputs.format;
    emit(fmt, "command", "chromatic");
    emit(fmt, "graph", &inputs.graph_path);
    let g = &inputs.graph;
    let subset = chromatic_subset(g);
    let delcon = chromatic_delcon(g);
    emit(fmt, "chromatic.subset", &subset);
    emit(fmt, "chromatic.delcon", &delcon);
    emit(fmt, "routes_agree", subset == delcon);
    let mut ok = subset == delcon;
    if g.is_simple() {
        let a = load_algebra::<F>(inputs, params)?;
        emit(fmt, "algebra", &inputs.algebra_name);
        let cbs = build_cbs(g, &a).map_err(|e| CliError::Input(e.to_string()))?;
        let euler = graded_euler(&cbs);
        let expected = subset.compose(&a.graded_dimension());
        emit(fmt, "graded_euler", &euler);
        emit(fmt, "identity", euler == expected);
        ok &= euler == expected;
    } else {
        emit(fmt, "identity", "skipped (graph not simple)");
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
