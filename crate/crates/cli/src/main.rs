use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geodiscord::states::named_state_str;
use geodiscord::sweep::format_significant;
use geodiscord::{
    bloch_decompose, detect_branch_crossings, discord_generic_upper_bound, discord_qubit, discord_qubit_closed_form,
    family_state, ingest_pauli_table, load_state, oracle_discord_qubit, save_state, standard_coefficient_tensor,
    sweep_family, total_quantum_correlations, Error, Family, FamilySpec, GridSpec, PauliTable,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "geodiscord", version, about = "Geometric discord and total quantum correlations of multipartite states")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord for a measurement on one party.
    Discord {
        #[arg(long)]
        state: PathBuf,
        /// 1-based party index.
        #[arg(long)]
        part: usize,
        /// Also minimize over the Bloch sphere by brute force (qubit parties).
        #[arg(long)]
        oracle: bool,
        /// Oracle grid as THETA,PHI,ROUNDS.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
        /// Restarts of the numerical search used for non-qubit parties.
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Total quantum correlations of an all-qubit state.
    Total {
        #[arg(long)]
        state: PathBuf,
        /// Measurement order, e.g. 3,1,2.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Tabulate D_k and Q along a one-parameter family.
    Sweep {
        /// ghz-noise, w-ghz or ghz-ghzminus.
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parties to report, e.g. 1,3 (default all).
        #[arg(long, value_delimiter = ',')]
        parties: Option<Vec<usize>>,
        /// Also locate jumps of the optimal axis for this party.
        #[arg(long)]
        crossings: Option<usize>,
    },
    /// Discord from a table of measured Pauli expectations.
    Ingest {
        #[arg(long)]
        pauli: PathBuf,
        #[arg(long)]
        part: usize,
        /// Reject tables that do not describe a physical state.
        #[arg(long)]
        strict: bool,
    },
    /// Write a named state, e.g. ghz(3), w(3), bell, max-mixed(2,3), or a
    /// family member when --p is given.
    Gen {
        #[arg(long)]
        name: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[t, p, r] => GridSpec::new(t, p, r, GridSpec::default().zoom_factor).map_err(|e| e.to_string()),
        _ => Err("expected THETA,PHI,ROUNDS".into()),
    }
}

fn fmt(x: f64) -> String {
    format_significant(x, 12)
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    let mut out = std::io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))
    } else {
        write!(out, "{text}")
    };
}

fn with_path<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn to_value<T: serde::Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

fn run(cli: Cli) -> Result<(), Error> {
    let json = cli.json;
    match cli.command {
        Command::Discord { state, part, oracle, grid, restarts, seed } => {
            let rho = with_path(&state, load_state(&state))?;
            let dims = rho.party_dims();
            if part == 0 || part > dims.len() {
                return Err(Error::InvalidParty(format!("party {part} of {}", dims.len())));
            }
            if rho.is_qubits() {
                let report = discord_qubit(&rho, part)?;
                let mut text = format!("D_{part} = {}\n", fmt(report.value));
                text += &format!("axis = [{}, {}, {}]\n", fmt(report.e_max[0]), fmt(report.e_max[1]), fmt(report.e_max[2]));
                let mut value = json!({ "kind": "closed-form", "report": to_value(&report) });
                if oracle {
                    let o = oracle_discord_qubit(&rho, part, &grid.unwrap_or_default())?;
                    let gap = (o.value - report.value).abs();
                    text += &format!("oracle = {}\ngap = {gap:.3e}\n", fmt(o.value));
                    value["oracle"] = to_value(&o);
                    value["gap"] = json!(gap);
                }
                emit(json, value, text);
            } else {
                if oracle {
                    return Err(Error::InvalidArgument("the oracle needs every party to be a qubit".into()));
                }
                let c = standard_coefficient_tensor(&rho)?;
                let found = discord_generic_upper_bound(&c, part, restarts, seed)?;
                let text = format!("D_{part} <= {} (numerical search, {restarts} restarts)\n", fmt(found.value));
                emit(json, json!({ "kind": "upper-bound", "report": to_value(&found) }), text);
            }
        }
        Command::Total { state, order } => {
            let rho = with_path(&state, load_state(&state))?;
            let report = total_quantum_correlations(&bloch_decompose(&rho)?, order.as_deref())?;
            let mut text = String::new();
            for s in &report.steps {
                text += &format!("step {}: D = {}\n", s.party, fmt(s.discord));
            }
            text += &format!("Q = {}\ntelescoped = {}\n", fmt(report.q_value), fmt(report.telescoped));
            emit(json, to_value(&report), text);
        }
        Command::Sweep { family, from, to, steps, out, parties, crossings } => {
            let sweep = sweep_family(family, from, to, steps, parties.as_deref())?;
            let found = match crossings {
                Some(k) => detect_branch_crossings(family, from, to, steps, k)?,
                None => Vec::new(),
            };
            let csv = sweep.to_csv();
            let mut text = String::new();
            match &out {
                Some(path) => {
                    with_path(path, std::fs::write(path, &csv).map_err(Error::from))?;
                    text += &format!("wrote {} rows to {}\n", sweep.rows.len(), path.display());
                }
                None if !json => text += &csv,
                None => {}
            }
            for c in &found {
                text += &format!("axis jump at p = {}\n", fmt(c.p));
            }
            emit(json, json!({ "sweep": to_value(&sweep), "crossings": to_value(&found) }), text);
        }
        Command::Ingest { pauli, part, strict } => {
            let table = with_path(&pauli, PauliTable::load(&pauli))?;
            let ingested = ingest_pauli_table(&table, strict)?;
            for w in &ingested.warnings {
                eprintln!("warning: {w}");
            }
            let report = discord_qubit_closed_form(&ingested.decomposition, part)?;
            let text = format!("D_{part} = {}\n", fmt(report.value));
            emit(json, json!({ "report": to_value(&report), "warnings": ingested.warnings }), text);
        }
        Command::Gen { name, p, out } => {
            let rho = match p {
                Some(p) => family_state(&FamilySpec::new(name.parse::<Family>()?, p)?)?,
                None => named_state_str(&name)?,
            };
            with_path(&out, save_state(&rho, &out))?;
            let text = format!("wrote {} to {}\n", name, out.display());
            emit(json, json!({ "name": name, "p": p, "out": out, "dims": rho.party_dims() }), text);
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
