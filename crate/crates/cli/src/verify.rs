//! The `verify` subcommand: one named check per structural identity, one
//! line per check, exit 0 iff nothing failed.

use graphcohom::chromatic::{chromatic_delcon, chromatic_subset};
use graphcohom::complexes::{
    build_cbs, build_cbs_dual, build_conn, build_rn_from, chain_map_commutes, delcon_sequence,
    ideal_subspace_of, map_f, GeneratorMode,
};
use graphcohom::field::Field;
use graphcohom::frobenius::{FrobeniusAlgebra, TensorElement};
use graphcohom::graph::Graph;
use graphcohom::homology::{betti, graded_euler, quasi_iso_check};

use crate::{emit, load_algebra, CliError, Format, Inputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Info,
    Skip,
}

struct Report {
    format: Format,
    failed: bool,
}

impl Report {
    fn record(&mut self, name: &str, outcome: Outcome, detail: &str) {
        let tag = match outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Info => "info",
            Outcome::Skip => "skip",
        };
        match self.format {
            Format::Text => {
                if detail.is_empty() {
                    println!("{name}: {}", tag.to_uppercase());
                } else {
                    println!("{name}: {} ({detail})", tag.to_uppercase());
                }
            }
            Format::Structured => {
                println!("check.{name}\t{tag}");
                if !detail.is_empty() {
                    println!("detail.{name}\t{detail}");
                }
            }
        }
        if outcome == Outcome::Fail {
            self.failed = true;
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: &str) {
        self.record(name, if ok { Outcome::Pass } else { Outcome::Fail }, detail);
    }
}

pub(crate) fn cmd_verify<F: Field>(
    inputs: &Inputs,
    mode: GeneratorMode,
    params: &F::Params,
) -> Result<(), CliError> {
    let fmt = inputs.format;
    emit(fmt, "command", "verify");
    emit(fmt, "graph", &inputs.graph_path);
    emit(fmt, "algebra", &inputs.algebra_name);
    emit(fmt, "field", inputs.field);
    let a = load_algebra::<F>(inputs, params)?;
    let g = &inputs.graph;
    let mut report = Report {
        format: fmt,
        failed: false,
    };

    frobenius_checks(&mut report, &a);
    complex_checks(&mut report, g, &a, mode, params);
    conn_checks::<F>(&mut report, g, params);
    chromatic_checks::<F>(&mut report, g, &a);

    if report.failed {
        Err(CliError::Verification)
    } else {
        Ok(())
    }
}

/// `(a⊗b)Δ = μ*(ab)`, `(1⊗a)Δ = (a⊗1)Δ`, and the two-sided module identity
/// of the comultiplication, exhaustively over basis elements.
fn frobenius_checks<F: Field>(report: &mut Report, a: &FrobeniusAlgebra<F>) {
    let dim = a.dim();
    let unit = a.unit_index();
    let pure = |i: usize, j: usize| TensorElement::pure(vec![i, j], a.scalar(1));

    let mut lemma = true;
    for i in 0..dim {
        for j in 0..dim {
            let lhs = a.tensor_multiply(&pure(i, j), a.diagonal()).unwrap();
            let mut rhs = TensorElement::zero(2);
            for (t, c) in a.product(i, j) {
                for (idx, d) in a.comultiply_basis(*t).terms() {
                    rhs.add_term(idx.clone(), c.clone() * d.clone());
                }
            }
            lemma &= lhs == rhs;
        }
    }
    for i in 0..dim {
        let left = a.tensor_multiply(&pure(unit, i), a.diagonal()).unwrap();
        let right = a.tensor_multiply(&pure(i, unit), a.diagonal()).unwrap();
        lemma &= left == right;
    }
    report.check("lemma-delta", lemma, "(a⊗b)Δ = μ*(ab) and (1⊗a)Δ = (a⊗1)Δ");

    let mut bimodule = true;
    for x in 0..dim {
        for y in 0..dim {
            for i in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        let sandwich = a
                            .tensor_multiply(
                                &a.tensor_multiply(&pure(i, unit), a.comultiply_basis(b))
                                    .unwrap(),
                                &pure(unit, c),
                            )
                            .unwrap();
                        let lhs = a.tensor_pairing(&pure(x, y), &sandwich).unwrap();
                        let mut rhs = F::zero();
                        for (xy, c1) in a.product(x, y) {
                            for (ib, c2) in a.product(i, b) {
                                for (ibc, c3) in a.product(*ib, c) {
                                    rhs += c1.clone()
                                        * c2.clone()
                                        * c3.clone()
                                        * a.pairing(*xy, *ibc).clone();
                                }
                            }
                        }
                        bimodule &= lhs == rhs;
                    }
                }
            }
        }
    }
    report.check(
        "comultiplication-bimodule",
        bimodule,
        "⟨x⊗y,(a⊗1)μ*(b)(1⊗c)⟩ = ⟨xy,abc⟩",
    );
}

fn complex_checks<F: Field>(
    report: &mut Report,
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
    mode: GeneratorMode,
    params: &F::Params,
) {
    if !g.is_simple() {
        report.record(
            "d-squared",
            Outcome::Skip,
            "edge-subset complexes need a simple graph",
        );
        return;
    }
    let cbs = match build_cbs(g, a) {
        Ok(c) => c,
        Err(e) => {
            report.record("d-squared", Outcome::Fail, &e.to_string());
            return;
        }
    };
    let dual = match build_cbs_dual(g, a) {
        Ok(c) => c,
        Err(e) => {
            // odd pairing degree is a builder precondition, not a failure
            report.check(
                "d-squared",
                cbs.complex().d_squared_is_zero(),
                "edge-adding only",
            );
            for name in [
                "ideal-closure",
                "ideal-triangle-generators",
                "arnold-cycles-vanish",
                "chain-map-f",
                "quasi-iso",
            ] {
                report.record(name, Outcome::Skip, &e.to_string());
            }
            return;
        }
    };
    let mut d2 = cbs.complex().d_squared_is_zero() && dual.complex().d_squared_is_zero();
    if g.edge_count() == 0 || g.component_count(g.full_subset()) == 1 {
        match build_conn::<F>(g, params) {
            Ok(c) => d2 &= c.d_squared_is_zero(),
            Err(e) => {
                report.record("d-squared", Outcome::Fail, &e.to_string());
                return;
            }
        }
    }

    // ideal closure under the chosen generator mode
    match ideal_subspace_of(&dual, mode) {
        Ok(ideal) => {
            report.check(
                "ideal-closure",
                true,
                &format!("total ideal dimension {}", ideal.total_dim()),
            );
            let _ = ideal;
        }
        Err(e) => report.check("ideal-closure", false, &e.to_string()),
    }

    // generator comparison: all cycles vs triangles only
    match (
        ideal_subspace_of(&dual, GeneratorMode::AllCycles),
        ideal_subspace_of(&dual, GeneratorMode::TrianglesOnly),
    ) {
        (Ok(all), Ok(tri)) => {
            if all.dims() == tri.dims() {
                report.record(
                    "ideal-triangle-generators",
                    Outcome::Pass,
                    "triangle generators span the full ideal",
                );
            } else {
                report.record(
                    "ideal-triangle-generators",
                    Outcome::Info,
                    &format!(
                        "triangle generators span {} of {} dimensions",
                        tri.total_dim(),
                        all.total_dim()
                    ),
                );
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            report.check("ideal-triangle-generators", false, &e.to_string())
        }
    }

    if a.pairing_degree() % 2 != 0 {
        report.record(
            "quasi-iso",
            Outcome::Skip,
            "quotient model requires an even pairing degree",
        );
        report.check("d-squared", d2, "");
        return;
    }
    let rn = match build_rn_from(&dual) {
        Ok(c) => c,
        Err(e) => {
            report.check("quasi-iso", false, &e.to_string());
            return;
        }
    };
    d2 &= rn.complex().d_squared_is_zero();
    report.check("d-squared", d2, "");

    // cycle-supported monomials die in the quotient
    let mut vanish = true;
    for deg in dual.complex().degrees() {
        for (pos, label) in dual.complex().basis_at(deg).iter().enumerate() {
            if !g.is_forest(label.edges) {
                vanish &= rn.project(deg, &vec![(pos, a.scalar(1))]).is_empty();
            }
        }
    }
    report.check("arnold-cycles-vanish", vanish, "");

    match map_f(&dual, &rn) {
        Ok(map) => report.check(
            "chain-map-f",
            chain_map_commutes(dual.complex(), rn.complex(), &map, 0),
            "",
        ),
        Err(e) => report.check("chain-map-f", false, &e.to_string()),
    }

    match quasi_iso_check(dual.complex(), rn.complex()) {
        Ok(r) => report.check("quasi-iso", r.matches, ""),
        Err(e) => report.check("quasi-iso", false, &e.to_string()),
    }
}

fn conn_checks<F: Field>(report: &mut Report, g: &Graph, params: &F::Params) {
    if g.edge_count() == 0 || g.component_count(g.full_subset()) != 1 {
        report.record(
            "del-contr-exact",
            Outcome::Skip,
            "needs a connected graph with edges",
        );
        report.record(
            "loop-homology",
            Outcome::Skip,
            "needs a connected graph with edges",
        );
        return;
    }
    let last = g.edge_count() - 1;
    let (i, j) = g.edge(last).expect("edge in range");
    if i == j {
        report.record("del-contr-exact", Outcome::Skip, "last edge is a loop");
    } else {
        match delcon_sequence::<F>(g, last, params) {
            Ok(seq) => report.check("del-contr-exact", seq.verify_exact(), ""),
            Err(e) => report.check("del-contr-exact", false, &e.to_string()),
        }
    }

    // a loop kills the homology; doubling an edge leaves it unchanged
    let mut edges = g.edges().to_vec();
    edges.push((0, 0));
    let looped = Graph::new(g.n_vertices(), edges).expect("vertex 0 exists");
    let mut ok = match build_conn::<F>(&looped, params) {
        Ok(c) => betti(&c).total() == 0,
        Err(_) => false,
    };
    let mut edges = g.edges().to_vec();
    edges.push(edges[0]);
    let doubled = Graph::new(g.n_vertices(), edges).expect("valid edges");
    ok &= match (
        build_conn::<F>(g, params),
        build_conn::<F>(&doubled, params),
    ) {
        (Ok(single), Ok(double)) => {
            let (bs, bd) = (betti(&single), betti(&double));
            bs.dims
                .iter()
                .filter(|(_, d)| **d > 0)
                .eq(bd.dims.iter().filter(|(_, d)| **d > 0))
        }
        _ => false,
    };
    report.check(
        "loop-homology",
        ok,
        "loops kill homology, parallel edges keep it",
    );
}

fn chromatic_checks<F: Field>(report: &mut Report, g: &Graph, a: &FrobeniusAlgebra<F>) {
    let subset = chromatic_subset(g);
    let delcon = chromatic_delcon(g);
    let mut ok = subset == delcon;
    let mut detail = String::from("subset expansion = deletion-contraction");
    if g.is_simple() {
        if let Ok(cbs) = build_cbs(g, a) {
            let identity = graded_euler(&cbs) == subset.compose(&a.graded_dimension());
            ok &= identity;
            detail.push_str("; graded Euler identity");
        }
    }
    report.check("euler-chromatic", ok, &detail);
}
