//! Command-line front end: load and validate ultragraphs, evaluate the
//! generalized-vertex lattice and the cylinder semi-ring, compute kappa,
//! solve for KMS and ground states, and run the verifiers.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ultrakms::graph::Ultragraph;
use ultrakms::measure::KappaMeasure;
use ultrakms::parse::{
    load_ultragraph, parse_base_expr, parse_cylinder, parse_general_cylinder, parse_sec6_selector,
};
use ultrakms::report::{Report, Verdict};
use ultrakms::scalar::{format_sig, Scalar};
use ultrakms::sec6;
use ultrakms::shift::{check_partition, cyl_diff, cyl_intersect, cyl_refine, refine_general};
use ultrakms::solver::{
    critical_beta, finite_lattice, solve_ground, solve_kms, GroundDescription,
};
use ultrakms::star::kms_check;
use ultrakms::state::{
    load_mfunction, verify_ground_m, verify_kms_m, write_mfunction, EdgeWeightN, ScaledWeightM,
};

#[derive(Parser)]
#[command(name = "ultrakms", version, about = "KMS and ground states of ultragraph C*-algebras")]
struct Cli {
    /// Oracle enumeration depth for partition checks
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    /// Maximum |F| for the finite-subset m3 checks
    #[arg(long, global = true, default_value_t = 8)]
    fbound: usize,
    /// Numeric tolerance (exact comparisons use 0)
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Force exact rational arithmetic; errors on irrational inputs
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph: parsing, sinks, the RFUM presentation
    Check { graph: String },
    /// Evaluate a lattice expression to canonical form
    G0 {
        graph: String,
        /// Base expression, e.g. "r(e1) & r(e2)"
        expr: String,
    },
    /// Semi-ring operations on cylinder sets
    Semiring {
        graph: String,
        /// refine | intersect | diff
        op: String,
        /// First cylinder, e.g. "(e1 ; B ; e4)"
        cyl: String,
        /// Second cylinder (intersect/diff)
        cyl2: Option<String>,
    },
    /// Evaluate kappa of a cylinder set
    Measure {
        graph: String,
        /// m-function file
        #[arg(long)]
        m: String,
        #[arg(long)]
        beta: Scalar,
        #[arg(long)]
        cyl: String,
    },
    /// KMS-state solving on finite graphs
    Kms {
        #[command(subcommand)]
        action: KmsAction,
    },
    /// Ground-state description
    Ground { graph: String },
    /// Exhaustive KMS condition check through the state functional
    Kmscheck {
        graph: String,
        #[arg(long)]
        beta: Scalar,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// The built-in family: conditions, states, verification
    Sec6(Sec6Args),
}

#[derive(Subcommand)]
enum KmsAction {
    /// Solve for the state simplex at a fixed beta
    Solve {
        graph: String,
        #[arg(long)]
        beta: Scalar,
    },
    /// Bisect for the critical beta where the spectral radius crosses 1
    Critical {
        graph: String,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 64.0)]
        hi: f64,
    },
}

#[derive(Args)]
struct Sec6Args {
    #[arg(long)]
    d: Scalar,
    #[arg(long)]
    a: Scalar,
    #[arg(long)]
    beta: Scalar,
    /// Instantiate the state at this m_w and print its m-function file
    #[arg(long)]
    mw: Option<Scalar>,
    /// Run the generic KMS verifier on the instantiated state
    #[arg(long)]
    verify: bool,
    /// Describe and verify the ground-state segment instead
    #[arg(long)]
    ground: bool,
    /// Vertex atoms to materialize
    #[arg(long, default_value_t = 40)]
    vertex_bound: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load_graph(input: &str) -> Result<(Ultragraph, EdgeWeightN), String> {
    if let Some(sel) = parse_sec6_selector(input) {
        let sel = sel.map_err(|e| e.to_string())?;
        return Ok((
            Ultragraph::sec6(),
            EdgeWeightN::Sec6 { d: sel.d, a: sel.a },
        ));
    }
    let text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
    let g = load_ultragraph(&text).map_err(|e| e.to_string())?;
    let n = EdgeWeightN::from_graph(&g);
    Ok((g, n))
}

fn require_exact_beta(cli: &Cli, beta: &Scalar) -> Result<(), String> {
    if cli.exact && beta.as_integer().is_none() {
        return Err("exact mode needs an integer beta (N(e)^(-beta) must stay rational)".into());
    }
    Ok(())
}

fn emit(report: &Report) -> bool {
    print!("{}", report.render());
    report.all_pass()
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::Check { graph } => {
            let mut report = Report::new(cli.tol);
            match load_graph(graph) {
                Ok((g, _)) => {
                    report.push("no-sinks", Verdict::Pass, "every vertex emits");
                    match g.check_rfum(cli.depth.max(8)) {
                        Ok(()) => report.push(
                            "rfum",
                            Verdict::Pass,
                            format!("ranges decompose to depth {}", cli.depth.max(8)),
                        ),
                        Err(e) => report.push("rfum", Verdict::Fail, e.to_string()),
                    }
                }
                Err(e) => report.push("no-sinks", Verdict::Fail, e),
            }
            Ok(emit(&report))
        }
        Command::G0 { graph, expr } => {
            let (g, _) = load_graph(graph)?;
            let gv = parse_base_expr(&g, expr).map_err(|e| e.to_string())?;
            let d = g.decompose(&gv);
            println!("canonical {}", g.gv_display(&gv));
            let parts: Vec<String> = d
                .minimal_parts
                .iter()
                .map(|&m| g.emitter_name(m))
                .collect();
            println!("minimal-parts [{}]", parts.join(" "));
            let fin: Vec<String> = d.finite_part.iter().map(|&v| g.vertex_name(v)).collect();
            println!("finite-part [{}]", fin.join(" "));
            Ok(true)
        }
        Command::Semiring { graph, op, cyl, cyl2 } => {
            let (g, _) = load_graph(graph)?;
            let index_bound = 30;
            let (c, pieces, removed) = match op.as_str() {
                "refine" => {
                    // refine accepts a general base, beyond the two semi-ring
                    // shapes, and splits it into basis pieces
                    match parse_cylinder(&g, cyl) {
                        Ok(c) => {
                            let pieces = cyl_refine(&g, &c);
                            (c, pieces, vec![])
                        }
                        Err(_) => {
                            let (stem, base) =
                                parse_general_cylinder(&g, cyl).map_err(|e| e.to_string())?;
                            let pieces = refine_general(&g, stem.clone(), &base);
                            let whole = ultrakms::shift::Cylinder {
                                stem,
                                base: ultrakms::shift::Base::FiniteSet(base),
                                excluded: BTreeSet::new(),
                            };
                            (whole, pieces, vec![])
                        }
                    }
                }
                "intersect" | "diff" => {
                    let c = parse_cylinder(&g, cyl).map_err(|e| e.to_string())?;
                    let c2 = cyl2
                        .as_deref()
                        .ok_or_else(|| format!("`{op}` needs a second cylinder"))?;
                    let c2 = parse_cylinder(&g, c2).map_err(|e| e.to_string())?;
                    if op == "intersect" {
                        let pieces = cyl_intersect(&g, &c, &c2).into_vec();
                        (c, pieces, vec![])
                    } else {
                        let pieces = cyl_diff(&g, &c, &c2).map_err(|e| e.to_string())?;
                        (c, pieces, vec![c2])
                    }
                }
                other => return Err(format!("unknown semiring op `{other}`")),
            };
            for p in &pieces {
                println!("piece {}", p.display(&g));
            }
            if op != "intersect" {
                let mut report = Report::new(cli.tol);
                match check_partition(&g, &c, &removed, &pieces, cli.depth, index_bound) {
                    None => report.push("partition", Verdict::Pass, c.display(&g)),
                    Some(p) => {
                        report.push("partition", Verdict::Fail, format!("point {p:?}"))
                    }
                }
                return Ok(emit(&report));
            }
            Ok(true)
        }
        Command::Measure { graph, m, beta, cyl } => {
            require_exact_beta(cli, beta)?;
            let (g, n) = load_graph(graph)?;
            let text = std::fs::read_to_string(m).map_err(|e| format!("{m}: {e}"))?;
            let mf = load_mfunction(&g, &text).map_err(|e| e.to_string())?;
            let c = parse_cylinder(&g, cyl).map_err(|e| e.to_string())?;
            let k = KappaMeasure::new(mf, ScaledWeightM::new(n, beta.clone()));
            let value = k.kappa(&g, &c).map_err(|e| e.to_string())?;
            println!("kappa {value}");
            Ok(true)
        }
        Command::Kms { action } => match action {
            KmsAction::Solve { graph, beta } => {
                require_exact_beta(cli, beta)?;
                let (g, n) = load_graph(graph)?;
                if !g.is_finite() {
                    return Err("kms solve needs a finite graph; use `sec6` for the family".into());
                }
                let sol = solve_kms(&g, &n, beta, cli.tol);
                if sol.is_empty() {
                    println!("EMPTY");
                    return Ok(true);
                }
                let mut report = Report::new(cli.tol);
                let mm = ScaledWeightM::new(n, beta.clone());
                for (i, m) in sol.states.iter().enumerate() {
                    println!("state {i}");
                    print!("{}", write_mfunction(&g, m));
                    let r = verify_kms_m(&g, m, &mm, &finite_lattice(&g), cli.fbound, 30, cli.tol)
                        .map_err(|e| e.to_string())?;
                    report.push(
                        "state-verified",
                        if r.all_pass() { Verdict::Pass } else { Verdict::Fail },
                        format!("state {i}"),
                    );
                }
                Ok(emit(&report))
            }
            KmsAction::Critical { graph, lo, hi } => {
                let (g, n) = load_graph(graph)?;
                if !g.is_finite() {
                    return Err("kms critical needs a finite graph".into());
                }
                let beta = critical_beta(&g, &n, *lo, *hi, cli.tol).map_err(|e| e.to_string())?;
                println!("beta* = {}", format_sig(beta, 12));
                Ok(true)
            }
        },
        Command::Ground { graph } => {
            let (g, _) = load_graph(graph)?;
            match solve_ground(&g).map_err(|e| e.to_string())? {
                GroundDescription::Empty => println!("EMPTY"),
                GroundDescription::Simplex { emitters } => {
                    let names: Vec<String> =
                        emitters.iter().map(|&m| g.emitter_name(m)).collect();
                    println!(
                        "simplex: nonnegative weights on [{}] summing to 1, all other atoms 0",
                        names.join(" ")
                    );
                }
            }
            Ok(true)
        }
        Command::Kmscheck { graph, beta, m, len } => {
            require_exact_beta(cli, beta)?;
            let (g, n) = load_graph(graph)?;
            if !g.is_finite() {
                return Err("kmscheck needs a finite graph".into());
            }
            let text = std::fs::read_to_string(m).map_err(|e| format!("{m}: {e}"))?;
            let mf = load_mfunction(&g, &text).map_err(|e| e.to_string())?;
            let report = kms_check(&g, &mf, &n, beta, *len, cli.tol).map_err(|e| e.to_string())?;
            Ok(emit(&report))
        }
        Command::Sec6(args) => {
            require_exact_beta(cli, &args.beta)?;
            let g = Ultragraph::sec6();
            let mut report = Report::new(cli.tol);
            if args.ground {
                for t in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::one()] {
                    let m = sec6::ground_states_sec6(&t, args.vertex_bound);
                    let r = verify_ground_m(
                        &g,
                        &m,
                        &sec6::sec6_lattice(&g, 12),
                        if cli.exact { 0.0 } else { cli.tol },
                    )
                    .map_err(|e| e.to_string())?;
                    report.push(
                        "ground-segment",
                        if r.all_pass() { Verdict::Pass } else { Verdict::Fail },
                        format!("t={t}"),
                    );
                }
                println!("ground states: m(B)=t, m(w)=1-t for t in [0,1], vertex atoms 0");
                return Ok(emit(&report));
            }
            match sec6::paper_b_condition(&args.d, &args.beta) {
                Ok(c) => println!(
                    "paper-condition defined={} holds={} value={}",
                    c.defined,
                    c.holds,
                    c.value.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
                ),
                Err(e) => println!("paper-condition error: {e}"),
            }
            match sec6::exact_b_condition(&args.d, &args.beta) {
                Ok(c) => println!(
                    "exact-condition defined={} holds={} value={}",
                    c.defined,
                    c.holds,
                    c.value.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
                ),
                Err(e) => println!("exact-condition error: {e}"),
            }
            let fam = sec6::kms_states_sec6(&args.d, &args.a, &args.beta);
            match &fam {
                sec6::Sec6KmsFamily::Empty { reason } => {
                    println!("kms-states EMPTY ({reason})");
                    return Ok(true);
                }
                sec6::Sec6KmsFamily::Interval { d_beta, series, mw_min } => {
                    println!("d_beta {d_beta}");
                    println!("series {series}");
                    println!("admissible m_w [{mw_min}, 1]");
                }
            }
            if let Some(mw) = &args.mw {
                let m = fam
                    .state(mw, args.vertex_bound)
                    .map_err(|e| e.to_string())?;
                print!("{}", write_mfunction(&g, &m));
                if args.verify {
                    let n = EdgeWeightN::Sec6 {
                        d: args.d.clone(),
                        a: args.a.clone(),
                    };
                    let mm = ScaledWeightM::new(n, args.beta.clone());
                    let r = verify_kms_m(
                        &g,
                        &m,
                        &mm,
                        &sec6::sec6_lattice(&g, 12),
                        cli.fbound,
                        30,
                        if cli.exact { 0.0 } else { cli.tol },
                    )
                    .map_err(|e| e.to_string())?;
                    return Ok(emit(&r));
                }
            }
            Ok(true)
        }
    }
}
