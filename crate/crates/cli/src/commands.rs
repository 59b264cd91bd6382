//! Command implementations.

use std::io::Read as _;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpwalk::continuum::{
    discretization_discrepancy, kernel_tp_check, quadrant_conditional_nonintersection, quadrant_det2,
    quadrant_nonintersection, quadrant_nonintersection_quadrature, quadrant_unordered_nonintersection, Kernel,
};
use tpwalk::linalg::{is_totally_nonnegative, ScalarValue};
use tpwalk::network::loop_erase;
use tpwalk::resistor::{
    associated_markov_chain, hitting_from_response, ingerman_minor, response_matrix, ConductivityNetwork,
};
use tpwalk::stochastic::bernoulli::gap;
use tpwalk::stochastic::{
    bernoulli_closed_forms, estimate_hitting_minor_with, BernoulliChain, ChainSampler, Execution, ThreePointLayout,
};
use tpwalk::walks::grid::GridLayout;
use tpwalk::walks::{
    boundary_columns, hitting_matrix, hitting_matrix_series, le_constrained_sum, minor_via_walk_det, walk_matrix_exact,
    walk_matrix_series, OracleMode, WalkMode,
};
use tpwalk::{DirectedNetwork, Rational, VertexId, Walk};

use crate::document::{parse_rational, Kind, NetworkDocument};
use crate::report::Report;
use crate::{
    BernoulliArgs, BrownianCommand, CliError, Command, GridArgs, KernelArg, KindArg, LeArgs, MatrixArgs, McCommand,
    MinorArgs, ModeArg, OracleArgs, PairArgs, ResistorCommand, SetArgs, TnnArgs, TnnMatrix, WeightsArg, EXIT_INVARIANT,
};

type CmdResult = Result<Output, CliError>;

/// Text written to stdout and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub text: String,
}

impl From<Report> for Output {
    fn from(r: Report) -> Self {
        Output {
            code: r.code(),
            text: r.render(),
        }
    }
}

pub fn execute(command: &Command) -> CmdResult {
    match command {
        Command::WalkMatrix(args) => walk_matrix_cmd(args),
        Command::HittingMatrix(args) => hitting_matrix_cmd(args),
        Command::Minor(args) => minor_cmd(args),
        Command::Le(args) => le_cmd(args),
        Command::OracleCheck(args) => oracle_cmd(args),
        Command::TnnCheck(args) => tnn_cmd(args),
        Command::Resistor(cmd) => resistor_cmd(cmd),
        Command::Mc(cmd) => mc_cmd(cmd),
        Command::Bernoulli(args) => bernoulli_cmd(args),
        Command::Brownian(cmd) => brownian_cmd(cmd),
        Command::Grid(args) => grid_cmd(args),
    }
}

fn read_document(path: &str) -> Result<NetworkDocument, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
            path: path.into(),
            message: e.to_string(),
        })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.into(),
            message: e.to_string(),
        })?
    };
    NetworkDocument::parse(&text).map_err(|source| CliError::Document {
        path: path.into(),
        source,
    })
}

fn expect_kind(doc: &NetworkDocument, kind: Kind) -> Result<(), CliError> {
    if doc.kind != kind {
        return Err(CliError::Usage(format!("expected a {kind} document, got {}", doc.kind)));
    }
    Ok(())
}

fn directed(path: &str) -> Result<(NetworkDocument, DirectedNetwork), CliError> {
    let doc = read_document(path)?;
    expect_kind(&doc, Kind::Directed)?;
    let net = doc.to_directed()?;
    Ok((doc, net))
}

fn conductivity(path: &str) -> Result<(NetworkDocument, ConductivityNetwork), CliError> {
    let doc = read_document(path)?;
    expect_kind(&doc, Kind::Conductivity)?;
    let net = doc.to_conductivity()?;
    Ok((doc, net))
}

fn lookup(doc: &NetworkDocument, names: &[String]) -> Result<Vec<VertexId>, CliError> {
    names
        .iter()
        .map(|n| {
            doc.vertex(n)
                .ok_or_else(|| CliError::Usage(format!("unknown vertex {n:?}")))
        })
        .collect()
}

/// `(index, name)` pairs for the given vertices, sorted by name. `index` is
/// the position in `ids`.
fn by_name<'a>(doc: &'a NetworkDocument, ids: &[VertexId]) -> Vec<(usize, &'a str)> {
    let mut out: Vec<(usize, &str)> = ids
        .iter()
        .enumerate()
        .map(|(i, v)| (i, doc.vertices[v.0].name.as_str()))
        .collect();
    out.sort_by(|a, b| a.1.cmp(b.1));
    out
}

fn all_vertices(net: &DirectedNetwork) -> Vec<VertexId> {
    (0..net.vertex_count()).map(VertexId).collect()
}

fn walk_mode(args: &MatrixArgs) -> WalkMode {
    match args.mode {
        ModeArg::Series => WalkMode::Series(args.order),
        ModeArg::Numeric => WalkMode::Numeric,
    }
}

fn mode_name(mode: WalkMode) -> String {
    match mode {
        WalkMode::Series(order) => format!("series (order {order})"),
        WalkMode::Numeric => "numeric".into(),
    }
}

fn walk_matrix_cmd(args: &MatrixArgs) -> CmdResult {
    let (doc, net) = directed(&args.document)?;
    let ids = by_name(&doc, &all_vertices(&net));
    let mut r = Report::new("ok");
    r.field("matrix", "walk").field("mode", mode_name(walk_mode(args)));
    match walk_mode(args) {
        WalkMode::Series(order) => r.matrix(&walk_matrix_series(&net, order)?, &ids, &ids),
        WalkMode::Numeric => r.matrix(&walk_matrix_exact(&net)?, &ids, &ids),
    };
    Ok(r.into())
}

fn hitting_matrix_cmd(args: &MatrixArgs) -> CmdResult {
    let (doc, net) = directed(&args.document)?;
    let rows = by_name(&doc, &all_vertices(&net));
    let cols = by_name(&doc, &net.boundary());
    let mut r = Report::new("ok");
    r.field("matrix", "hitting").field("mode", mode_name(walk_mode(args)));
    match walk_mode(args) {
        WalkMode::Series(order) => r.matrix(&hitting_matrix_series(&net, order)?, &rows, &cols),
        WalkMode::Numeric => r.matrix(&hitting_matrix(&net)?, &rows, &cols),
    };
    Ok(r.into())
}

fn minor_cmd(args: &MinorArgs) -> CmdResult {
    let (doc, net) = directed(&args.matrix.document)?;
    let a = lookup(&doc, &args.sets.rows)?;
    let b = lookup(&doc, &args.sets.cols)?;
    let mode = walk_mode(&args.matrix);
    let value = minor_via_walk_det(&net, &a, &b, mode, args.hitting)?;
    let mut r = Report::new("ok");
    r.field("matrix", if args.hitting { "hitting" } else { "walk" })
        .field("mode", mode_name(mode))
        .list("rows", &args.sets.rows)
        .list("cols", &args.sets.cols)
        .field("value", &value);
    if let ScalarValue::Rational(v) = &value {
        if let Some(x) = v.to_f64() {
            r.float("value-float", x);
        }
    }
    Ok(r.into())
}

fn le_cmd(args: &LeArgs) -> CmdResult {
    let (doc, net) = directed(&args.document)?;
    let walk = if args.walk.is_empty() {
        let Some(start) = &args.start else {
            return Err(CliError::Usage("an empty walk needs --start".into()));
        };
        Walk::empty(lookup(&doc, std::slice::from_ref(start))?[0])
    } else {
        Walk::from_edges(&net, args.walk.iter().map(|&e| tpwalk::EdgeId(e)).collect())?
    };
    let erased = loop_erase(&net, &walk)?;
    let names = |w: &Walk| -> Result<Vec<String>, CliError> {
        Ok(w.vertices(&net)?
            .iter()
            .map(|v| doc.vertices[v.0].name.clone())
            .collect())
    };
    let ids: Vec<usize> = erased.edges.iter().map(|e| e.0).collect();
    let mut r = Report::new("ok");
    r.list("walk", &args.walk)
        .list("walk-vertices", &names(&walk)?)
        .list("loop-erased", &ids)
        .list("loop-erased-vertices", &names(&erased)?)
        .field("weight", tpwalk::network::walk_weight(&net, &erased)?);
    Ok(r.into())
}

fn oracle_cmd(args: &OracleArgs) -> CmdResult {
    let (doc, net) = directed(&args.document)?;
    let a = lookup(&doc, &args.sets.rows)?;
    let b = lookup(&doc, &args.sets.cols)?;
    let mode = if args.planar {
        OracleMode::Planar
    } else {
        OracleMode::Signed
    };
    let sum = le_constrained_sum(&net, &a, &b, args.order, mode, args.hitting)?;
    let det = match minor_via_walk_det(&net, &a, &b, WalkMode::Series(args.order), args.hitting)? {
        ScalarValue::Series(s) => s,
        other => return Err(tpwalk::Error::InvariantViolation(format!("expected a series, got {other}")).into()),
    };
    let matches = sum.series == det;
    let mut r = if matches {
        Report::new("match")
    } else {
        Report::new("mismatch").with_code(EXIT_INVARIANT)
    };
    r.field("oracle", if args.planar { "planar" } else { "signed" })
        .field("matrix", if args.hitting { "hitting" } else { "walk" })
        .field("order", args.order)
        .list("rows", &args.sets.rows)
        .list("cols", &args.sets.cols)
        .field("families", sum.families)
        .field("truncation-too-small", sum.truncation_too_small)
        .field("columns", "oracle determinant");
    for i in 0..=args.order {
        r.field(
            format!("coeff {i}"),
            format!("{} {}", sum.series.coeff(i), det.coeff(i)),
        );
    }
    Ok(r.into())
}

fn select(doc: &NetworkDocument, names: &[String], default: &[VertexId]) -> Result<Vec<VertexId>, CliError> {
    if names.is_empty() {
        Ok(by_name(doc, default).into_iter().map(|(i, _)| default[i]).collect())
    } else {
        lookup(doc, names)
    }
}

fn tnn_cmd(args: &TnnArgs) -> CmdResult {
    let (doc, net) = directed(&args.document)?;
    let (full, col_ids) = match args.matrix {
        TnnMatrix::Hitting => (hitting_matrix(&net)?, net.boundary()),
        TnnMatrix::Walk => (walk_matrix_exact(&net)?, all_vertices(&net)),
    };
    let rows = select(&doc, &args.rows, &all_vertices(&net))?;
    let cols = select(&doc, &args.cols, &col_ids)?;
    let col_index: Vec<usize> = match args.matrix {
        TnnMatrix::Hitting => boundary_columns(&net, &cols)?,
        TnnMatrix::Walk => cols.iter().map(|v| v.0).collect(),
    };
    let m = full.submatrix(&rows.iter().map(|v| v.0).collect::<Vec<_>>(), &col_index)?;
    let report = is_totally_nonnegative(&m, args.max_minor);
    let row_names: Vec<&str> = rows.iter().map(|v| doc.vertices[v.0].name.as_str()).collect();
    let col_names: Vec<&str> = cols.iter().map(|v| doc.vertices[v.0].name.as_str()).collect();
    let mut r = Report::new(if report.holds { "tnn" } else { "not-tnn" });
    r.field(
        "matrix",
        match args.matrix {
            TnnMatrix::Hitting => "hitting",
            TnnMatrix::Walk => "walk",
        },
    )
    .list("rows", &row_names)
    .list("cols", &col_names)
    .field("max-minor", args.max_minor)
    .field("minors-checked", report.minors_checked);
    if let Some(w) = &report.witness {
        r.witness(w, &row_names, &col_names);
    }
    Ok(r.into())
}

fn resistor_cmd(cmd: &ResistorCommand) -> CmdResult {
    match cmd {
        ResistorCommand::Response { document } => {
            let (doc, net) = conductivity(document)?;
            let ids = by_name(&doc, &net.boundary());
            let mut r = Report::new("ok");
            r.field("matrix", "response")
                .matrix(&response_matrix(&net)?, &ids, &ids);
            Ok(r.into())
        }
        ResistorCommand::Ingerman { document, sets } => ingerman_cmd(document, sets),
        ResistorCommand::Markov { document, out } => {
            let (doc, net) = conductivity(document)?;
            let chain = associated_markov_chain(&net);
            emit_document(
                &NetworkDocument::from_directed(&chain, &doc.names()),
                out.as_deref(),
                Report::new("ok"),
            )
        }
        ResistorCommand::Hitting { document } => {
            let (doc, net) = conductivity(document)?;
            let x = hitting_from_response(&net)?;
            let walk = hitting_matrix(&associated_markov_chain(&net))?;
            let boundary: Vec<usize> = net.boundary().iter().map(|v| v.0).collect();
            let block = walk.submatrix(&boundary, &(0..boundary.len()).collect::<Vec<_>>())?;
            let ids = by_name(&doc, &net.boundary());
            let mut r = if block == x {
                Report::new("match")
            } else {
                Report::new("mismatch").with_code(EXIT_INVARIANT)
            };
            r.field("matrix", "hitting").matrix(&x, &ids, &ids);
            Ok(r.into())
        }
    }
}

fn ingerman_cmd(document: &str, sets: &SetArgs) -> CmdResult {
    let (doc, net) = conductivity(document)?;
    let a = lookup(&doc, &sets.rows)?;
    let b = lookup(&doc, &sets.cols)?;
    let minor = ingerman_minor(&net, &a, &b)?;
    let boundary = net.boundary();
    let pos = |v: &VertexId| boundary.iter().position(|x| x == v).expect("boundary vertex");
    let rows: Vec<usize> = a.iter().map(pos).collect();
    let cols: Vec<usize> = b.iter().map(pos).collect();
    let direct = response_matrix(&net)?.submatrix(&rows, &cols)?.det()?;
    let mut r = if direct == minor.lambda_det {
        Report::new("match")
    } else {
        Report::new("mismatch").with_code(EXIT_INVARIANT)
    };
    r.list("rows", &sets.rows)
        .list("cols", &sets.cols)
        .field("families", minor.families.len())
        .field("response-minor", &minor.lambda_det)
        .field("response-det", &direct)
        .field("hitting-minor", &minor.hitting_det);
    Ok(r.into())
}

fn mc_cmd(cmd: &McCommand) -> CmdResult {
    let McCommand::HittingMinor {
        document,
        sets,
        samples,
        seed,
        max_steps,
        serial,
    } = cmd;
    let (doc, net) = directed(document)?;
    let a = lookup(&doc, &sets.rows)?;
    let b = lookup(&doc, &sets.cols)?;
    let sampler = ChainSampler::new(net.clone(), *seed)?;
    let execution = if *serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let est = estimate_hitting_minor_with(&sampler, &a, &b, *samples, *max_steps, execution)?;
    let mut r = Report::new("ok");
    r.list("rows", &sets.rows)
        .list("cols", &sets.cols)
        .field("samples", est.samples)
        .field("seed", est.seed)
        .field("max-steps", max_steps)
        .field("events", est.events)
        .field("truncated", est.truncated)
        .float("mean", est.mean)
        .float("stderr", est.stderr);
    if let Ok(ScalarValue::Rational(exact)) = minor_via_walk_det(&net, &a, &b, WalkMode::Numeric, true) {
        let x = exact.to_f64().unwrap_or(f64::NAN);
        r.field("exact", &exact)
            .float("exact-float", x)
            .float("z-score", est.z_score(x));
    }
    Ok(r.into())
}

fn rational_arg(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("--{name}: invalid rational {s:?}")))
}

fn bernoulli_cmd(args: &BernoulliArgs) -> CmdResult {
    let p = rational_arg("p", &args.p)?;
    let f = bernoulli_closed_forms(&p, args.k, args.l, args.m)?;
    let long = bernoulli_closed_forms(&p, args.k + args.l + args.m, 1, 1)?;
    let factor = &f.w * &long.e2 * &f.e3;
    let mut r = Report::new("ok");
    r.field("p", &p)
        .field("k", args.k)
        .field("l", args.l)
        .field("m", args.m);
    for (key, v) in [
        ("w", &f.w),
        ("e2", &f.e2),
        ("e2-shifted", &f.e2_shifted),
        ("e3", &f.e3),
        ("det", &factor),
    ] {
        r.field(key, v)
            .float(format!("{key}-float"), v.to_f64().unwrap_or(f64::NAN));
    }
    if let Some(radius) = args.radius {
        let chain = BernoulliChain::new(p.clone(), radius)?;
        let t = ThreePointLayout::new(args.k, args.l, args.m);
        let [_, a2, a3] = t.a;
        let [b1, _, b3] = t.b;
        let (k, l) = (i64::from(args.k), i64::from(args.l));
        let w = chain.walk_submatrix(&t.a, &t.b)?;
        let clipped = [
            ("w", w.get(0, 0).clone(), &f.w),
            ("e2", chain.avoiding(k, k + 1, &[0])?, &f.e2),
            ("e2-shifted", chain.avoiding(k + l, k, &[0])?, &f.e2_shifted),
            ("e3", chain.avoiding(a3, b3, &[b1, a2])?, &f.e3),
            ("det", w.det()?, &factor),
        ];
        r.field("radius", radius).list("sources", &t.a).list("targets", &t.b);
        let mut worst = 0f64;
        for (key, value, closed) in &clipped {
            let g = gap(value, closed);
            worst = worst.max(g);
            r.float(format!("clipped-{key}"), value.to_f64().unwrap_or(f64::NAN));
            r.float(format!("gap-{key}"), g);
        }
        r.float("max-gap", worst);
    }
    Ok(r.into())
}

fn parse_alpha(s: &str) -> Result<f64, CliError> {
    match s {
        "phi" | "golden" => Ok((1.0 + 5f64.sqrt()) / 2.0),
        _ => s
            .parse()
            .map_err(|_| CliError::Usage(format!("--alpha: invalid number {s:?}"))),
    }
}

fn brownian_cmd(cmd: &BrownianCommand) -> CmdResult {
    let mut r = Report::new("ok");
    match cmd {
        BrownianCommand::QuadrantDet2(PairArgs { x1, x2, y1, y2 }) => {
            r.float("value", quadrant_det2(*x1, *x2, *y1, *y2)?);
        }
        BrownianCommand::Cond(PairArgs { x1, x2, y1, y2 }) => {
            r.float("conditional", quadrant_conditional_nonintersection(*x1, *x2, *y1, *y2)?)
                .float("unordered", quadrant_unordered_nonintersection(*x1, *x2, *y1, *y2)?);
        }
        BrownianCommand::Nonint { alpha, quadrature } => {
            let alpha = parse_alpha(alpha)?;
            r.float("alpha", alpha).float("value", quadrant_nonintersection(alpha)?);
            if *quadrature {
                let q = quadrant_nonintersection_quadrature(alpha)?;
                r.float("quadrature", q.value)
                    .float("quadrature-error", q.error)
                    .field("panels", q.panels);
            }
        }
        BrownianCommand::TpCheck {
            kernel,
            xs,
            ys,
            max_minor,
        } => {
            let k = match kernel {
                KernelArg::Quadrant => Kernel::Quadrant,
                KernelArg::Strip => Kernel::Strip,
            };
            let report = kernel_tp_check(k, xs, ys, *max_minor)?;
            let floats = |v: &[f64]| v.iter().map(|&x| crate::report::float(x)).collect::<Vec<_>>();
            r = Report::new(if report.holds { "tp" } else { "not-tp" });
            r.field("kernel", format!("{kernel:?}").to_lowercase())
                .list("xs", &floats(xs))
                .list("ys", &floats(ys))
                .field("monotone", report.sample.is_monotone())
                .field("max-minor", max_minor)
                .field("minors-checked", report.minors_checked);
            if let Some(w) = &report.witness {
                r.field(
                    "witness-rows",
                    w.rows.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                )
                .field(
                    "witness-cols",
                    w.cols.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                )
                .float("witness-value", w.value);
            }
        }
        BrownianCommand::Discretize { h, radius, x0 } => {
            let d = discretization_discrepancy(*h, *radius, *x0)?;
            r.float("h", d.h)
                .float("radius", d.radius)
                .float("x0", d.x0)
                .field("cells", d.masses.len())
                .float("max-discrepancy", d.max_discrepancy)
                .float("density-discrepancy", d.density_discrepancy)
                .float("relative-discrepancy", d.relative_discrepancy);
        }
    }
    Ok(r.into())
}

/// Cells are `c<row>_<col>`, pendant boundary vertices `p<ccw position>`,
/// all zero-padded so that name order follows position.
fn grid_names(layout: &GridLayout) -> Vec<String> {
    let width = |n: usize| n.saturating_sub(1).to_string().len();
    let (wr, wc, wp) = (width(layout.rows), width(layout.cols), width(layout.boundary_ccw.len()));
    let mut names = vec![String::new(); layout.vertex_count];
    for row in 0..layout.rows {
        for col in 0..layout.cols {
            names[layout.cell(row, col).0] = format!("c{row:0wr$}_{col:0wc$}");
        }
    }
    for (i, v) in layout.boundary_ccw.iter().enumerate() {
        names[v.0] = format!("p{i:0wp$}");
    }
    names
}

fn grid_cmd(args: &GridArgs) -> CmdResult {
    let layout = GridLayout::pendant(args.rows, args.cols)?;
    let (sources, targets) = layout.crossing_sets(args.start, args.k, args.gap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let weights = args.weights;
    let gamma = move |_: VertexId, _: VertexId| match weights {
        WeightsArg::Unit => Rational::from_integer(1.into()),
        WeightsArg::Random => Rational::new(rng.random_range(1..=6).into(), rng.random_range(1..=4).into()),
    };
    let net = ConductivityNetwork::from_grid(&layout, gamma)?;
    let names = grid_names(&layout);
    let doc = match args.kind {
        KindArg::Conductivity => NetworkDocument::from_conductivity(&net, &names),
        KindArg::Directed => NetworkDocument::from_directed(&associated_markov_chain(&net), &names),
    };
    let pick = |vs: &[VertexId]| vs.iter().map(|v| names[v.0].clone()).collect::<Vec<_>>();
    let mut r = Report::new("ok");
    r.field("rows", args.rows)
        .field("cols", args.cols)
        .list("sources", &pick(&sources))
        .list("targets", &pick(&targets));
    emit_document(&doc, args.out.as_deref(), r)
}

/// Writes the document to `out` and prints the report, or prints the
/// report as comment lines followed by the document.
fn emit_document(doc: &NetworkDocument, out: Option<&str>, mut report: Report) -> CmdResult {
    let text = doc.emit();
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io {
                path: path.into(),
                message: e.to_string(),
            })?;
            report.field("out", path);
            Ok(report.into())
        }
        None => {
            let header: String = report.render().lines().map(|l| format!("# {l}\n")).collect();
            Ok(Output {
                code: report.code(),
                text: header + &text,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use tpwalk::linalg::Matrix;

    use super::*;

    #[test]
    fn grid_names_sort_by_position() {
        let layout = GridLayout::pendant(3, 4).unwrap();
        let names = grid_names(&layout);
        let boundary: Vec<&str> = layout.boundary_ccw.iter().map(|v| names[v.0].as_str()).collect();
        let mut sorted = boundary.clone();
        sorted.sort();
        assert_eq!(boundary, sorted);
        assert_eq!(boundary.len(), 14);
        assert_eq!(names[layout.cell(2, 3).0], "c2_3");
        assert_eq!(boundary[0], "p00");
    }

    #[test]
    fn matrix_rows_follow_name_order() {
        let m = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let mut r = Report::new("ok");
        r.matrix(&m, &[(1, "a"), (0, "b")], &[(0, "x")]);
        assert_eq!(
            r.render(),
            "status: ok\nrows: a,b\ncols: x\nentry a x: 3\nentry b x: 1\n"
        );
    }
}
