use clap::{Args, Parser, Subcommand};
use k3e::commands::{self, parse_keys, parse_method, parse_window, DumpArgs, Output};
use k3e::error::{CliError, CliResult};
use k3e::json::canonical;
use k3e::manifest::RunManifest;
use k3e::render::render;
use k3e::suites::{self, Level, Limits};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Exact computations for the Igusa cusp form, the Hilbert-scheme Fock space
/// and curve counts on K3 x E.
#[derive(Parser, Debug)]
#[command(name = "k3e", version, arg_required_else_help = true)]
struct Cli {
    /// Emit canonical JSON with an embedded run manifest.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Modular and Jacobi forms.
    #[command(subcommand, arg_required_else_help = true)]
    Forms(FormsCmd),
    /// The Igusa cusp form and the coefficients of its inverse.
    #[command(subcommand, arg_required_else_help = true)]
    Igusa(IgusaCmd),
    /// The operators E^(r) on the Fock space.
    #[command(subcommand, arg_required_else_help = true)]
    Fock(FockCmd),
    /// Curve-counting generating series.
    #[command(subcommand, arg_required_else_help = true)]
    Enum(EnumCmd),
    /// Run the identity suites; exits nonzero on any failure.
    Verify {
        #[arg(long, default_value = "quick", value_parser = ["quick", "full", "acceptance"])]
        level: String,
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Dump a named object as JSON.
    Dump {
        /// chi10, psi, H, phi-table, E-matrix, gw, ky, or a forms name.
        object: String,
        #[command(flatten)]
        args: DumpFlags,
    },
}

#[derive(Args, Debug)]
struct DumpFlags {
    #[arg(long, default_value_t = 3)]
    qmax: i64,
    #[arg(long, default_value_t = 3)]
    qtmax: i64,
    #[arg(long, default_value_t = 4)]
    umax: i64,
    #[arg(long, default_value = "-6,6", allow_hyphen_values = true)]
    window: String,
    #[arg(short, long, default_value_t = 0, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, default_value = "product")]
    method: String,
}

#[derive(Subcommand, Debug)]
enum FormsCmd {
    /// Print one of: e<k>, delta, delta-inverse, gottsche, k, f, g, wp, z.
    Dump {
        name: String,
        #[arg(long)]
        qmax: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum IgusaCmd {
    /// chi10 on the box q^0..qmax, q~^0..qtmax.
    Chi10 {
        #[arg(long)]
        qmax: i64,
        #[arg(long)]
        qtmax: i64,
        #[arg(long, default_value = "product")]
        method: String,
    },
    /// psi_d, the q~^d coefficient of 1/chi10, on a p-window.
    Psi {
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// psi_d, its polar part and the finite part H_{d+1}.
    Split {
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[arg(long, default_value = "-8,8", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 3)]
        margin: i64,
    },
}

#[derive(Subcommand, Debug)]
enum FockCmd {
    /// Closed-form matrix elements: i (fibre), ii (section), iii (point chain).
    Example {
        which: String,
        #[arg(short)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
    },
    /// Traces of E^(0) on F_0..F_dmax.
    Trace {
        #[arg(long)]
        dmax: i64,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
    },
    /// Both WDVV residuals on F_d.
    Wdvv {
        #[arg(short)]
        d: i64,
        #[arg(long, default_value = "B")]
        gamma: String,
        #[arg(long, default_value = "F")]
        gamma2: String,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
    },
    /// Solve phi entries from the WDVV equations, e.g. --keys "2,-1".
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        keys: String,
        #[arg(long, default_value_t = 2)]
        qmax: i64,
    },
}

#[derive(Subcommand, Debug)]
enum EnumCmd {
    /// The partition function in u, q, q~.
    Gw {
        #[arg(long)]
        umax: i64,
        #[arg(long)]
        qmax: i64,
        #[arg(long)]
        qtmax: i64,
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value = "product")]
        method: String,
    },
    /// The imprimitive series for the class m*beta_h.
    #[command(disable_help_flag = true)]
    MultipleCover {
        #[arg(short)]
        m: i64,
        #[arg(short)]
        h: i64,
        #[arg(long, default_value_t = 4)]
        umax: i64,
        #[arg(long, default_value_t = 2)]
        qtmax: i64,
        #[arg(long, action = clap::ArgAction::Help)]
        help: Option<bool>,
    },
    /// Descendent multiple-cover predictions against a fixtures file.
    C2 {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// The refined product with Poincare variable w.
    Ky {
        #[arg(long)]
        wmax: i64,
        #[arg(long)]
        ymax: i64,
        #[arg(long)]
        qmax: i64,
    },
}

fn compute(cmd: Cmd) -> CliResult<Output> {
    Ok(match cmd {
        Cmd::Forms(FormsCmd::Dump { name, qmax, window }) => {
            let w = window.as_deref().map(parse_window).transpose()?;
            commands::forms_dump(&name, qmax, w)?
        }
        Cmd::Igusa(IgusaCmd::Chi10 { qmax, qtmax, method }) => commands::igusa_chi10(qmax, qtmax, parse_method(&method)?)?,
        Cmd::Igusa(IgusaCmd::Psi { d, qmax, window }) => commands::igusa_psi(d, qmax, parse_window(&window)?)?,
        Cmd::Igusa(IgusaCmd::Split { d, qmax, window, margin }) => commands::igusa_split(d, qmax, parse_window(&window)?, margin)?,
        Cmd::Fock(FockCmd::Example { which, d, qmax }) => commands::fock_example(&which, d, qmax)?,
        Cmd::Fock(FockCmd::Trace { dmax, qmax }) => commands::fock_trace(dmax, qmax)?,
        Cmd::Fock(FockCmd::Wdvv { d, gamma, gamma2, qmax }) => commands::fock_wdvv(d, &gamma, &gamma2, qmax)?,
        Cmd::Fock(FockCmd::Solve { keys, qmax }) => commands::fock_solve(&parse_keys(&keys)?, qmax)?,
        Cmd::Enum(EnumCmd::Gw { umax, qmax, qtmax, connected, method }) => {
            commands::enum_gw(umax, qmax, qtmax, connected, parse_method(&method)?)?
        }
        Cmd::Enum(EnumCmd::MultipleCover { m, h, umax, qtmax, .. }) => commands::enum_multiple_cover(m, h, umax, qtmax)?,
        Cmd::Enum(EnumCmd::C2 { fixtures }) => commands::enum_c2(fixtures.as_deref())?,
        Cmd::Enum(EnumCmd::Ky { wmax, ymax, qmax }) => commands::enum_ky(wmax, ymax, qmax)?,
        Cmd::Dump { object, args } => {
            let a = DumpArgs {
                qmax: args.qmax,
                qtmax: args.qtmax,
                umax: args.umax,
                window: parse_window(&args.window)?,
                d: args.d,
                method: parse_method(&args.method)?,
            };
            commands::dump(&object, &a)?
        }
        Cmd::Verify { .. } => unreachable!("handled separately"),
    })
}

fn verify(level: &str, only: &[usize], as_json: bool) -> CliResult<bool> {
    let level = match level {
        "quick" => Level::Quick,
        "full" => Level::Full,
        _ => Level::Acceptance,
    };
    let lim = Limits::for_level(level);
    let ids = if only.is_empty() { suites::all_ids(&lim) } else { only.to_vec() };
    let start = Instant::now();
    let outcomes = suites::run(&lim, &ids, suites::thread_count(), |o| eprintln!("done: criterion {} ({:.1} s)", o.id, o.elapsed.as_secs_f64()));
    let ok = outcomes.iter().all(|o| o.passed);
    if as_json {
        let list: Vec<Value> = outcomes
            .iter()
            .map(|o| json!({"id": o.id.to_string(), "title": o.title, "passed": o.passed, "detail": o.detail}))
            .collect();
        let result = json!({"passed": ok, "criteria": list});
        let mut limits = lim.to_map();
        limits.insert("only".into(), ids.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
        let m = RunManifest::new("verify", limits, &result, start.elapsed());
        println!("{}", canonical(&m.document(result)));
    } else {
        for o in &outcomes {
            println!("{}", o.line());
        }
        println!("{}", if ok { "all identities hold" } else { "FAILURES present" });
    }
    eprintln!("wall time: {:.2} s", start.elapsed().as_secs_f64());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    let res = match cli.cmd {
        Cmd::Verify { level, only } => verify(&level, &only, as_json),
        cmd => {
            let start = Instant::now();
            compute(cmd).map(|out| {
                let m = RunManifest::new(&out.subcommand, out.limits.clone(), &out.result, start.elapsed());
                if as_json {
                    println!("{}", canonical(&m.document(out.result)));
                } else {
                    print!("{}", render(&out.result));
                    eprintln!("{} [{}]", m.subcommand, m.digest);
                }
                eprintln!("wall time: {:.2} s", m.wall_time.as_secs_f64());
                true
            })
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) | CliError::UnknownObject(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
