use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use parikh_core::format::{AutomatonFile, Kind};
use parikh_core::linear::is_empty_linear;
use parikh_core::parikh_string::PaEmptiness;
use parikh_core::ptar::Ptar;
use parikh_core::terms::parse_tree;
use parikh_core::twocm::encode;

/// Parikh tree automata: validation, membership and emptiness.
#[derive(Parser)]
#[command(name = "parikh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check an automaton file.
    Validate { file: PathBuf },
    /// Print PTA, PTAR or LINEAR-PTAR (or the file kind for other automata).
    Classify { file: PathBuf },
    /// Decide whether a tree is accepted.
    Member {
        file: PathBuf,
        tree: String,
        /// Print the computation (PTA/PTAR) or labelling and run (GPTA).
        #[arg(long)]
        trace: bool,
    },
    /// Decide emptiness of a PA or a linear PTA/PTAR.
    Empty {
        file: PathBuf,
        /// Print the fixpoint chain and the spinal computation tree.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Encode a two-counter machine as a 3-dimensional PTA file.
    #[command(name = "encode-2cm")]
    Encode2cm { machine: PathBuf, out: PathBuf },
    /// Search for an accepting run of a two-counter machine.
    #[command(name = "cm-run")]
    CmRun {
        machine: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
    },
}

enum Failure {
    Input(String),
    Unsupported(String),
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Classify { file } => classify(&file),
        Command::Member { file, tree, trace } => member(&file, &tree, trace),
        Command::Empty { file, verbose } => empty(&file, verbose),
        Command::Encode2cm { machine, out } => encode_2cm(&machine, &out),
        Command::CmRun { machine, max_steps } => cm_run(&machine, max_steps),
    }
}

fn load(path: &Path) -> Result<AutomatonFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    AutomatonFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Outcome {
    let file = load(path)?;
    let (states, transitions, dim) = match &file {
        AutomatonFile::Pa(a) => (a.states().len(), a.transitions().len(), Some(a.dim())),
        AutomatonFile::Pta(a) | AutomatonFile::Ptar(a) => {
            (a.states().len(), a.transitions().len(), Some(a.dim()))
        }
        AutomatonFile::Gpta(g) => (g.states().len(), g.transitions().len(), Some(g.dim())),
        AutomatonFile::TwoCm(m) => (m.states().len(), m.transitions().len(), None),
    };
    let mut out = format!(
        "valid {}: {states} states, {transitions} transitions",
        file.kind()
    );
    if let Some(d) = dim {
        let _ = write!(out, ", dim {d}");
    }
    out.push('\n');
    Ok(out)
}

fn classify(path: &Path) -> Outcome {
    let file = load(path)?;
    Ok(match file.as_ptar() {
        Some(a) => format!("{}\n", a.classify()),
        None => format!("{}\n", file.kind().to_string().to_uppercase()),
    })
}

fn member(path: &Path, text: &str, trace: bool) -> Outcome {
    let file = load(path)?;
    match &file {
        AutomatonFile::Pta(a) | AutomatonFile::Ptar(a) => {
            let tree = parse_tree(text, a.alphabet()).map_err(|e| Failure::Input(e.to_string()))?;
            let found = a.member(&tree).map_err(|e| Failure::Input(e.to_string()))?;
            let mut out = String::new();
            match found {
                None => out.push_str("NONMEMBER\n"),
                Some(t) => {
                    out.push_str("MEMBER\n");
                    if trace {
                        for (ti, at) in &t.steps {
                            let _ = writeln!(out, "step {ti} {at}  ; {}", describe(a, *ti));
                        }
                    }
                }
            }
            Ok(out)
        }
        AutomatonFile::Gpta(g) => {
            let tree = parse_tree(text, g.alphabet()).map_err(|e| Failure::Input(e.to_string()))?;
            let found = g.member(&tree).map_err(|e| Failure::Input(e.to_string()))?;
            let mut out = String::new();
            match found {
                None => out.push_str("NONMEMBER\n"),
                Some((labeled, run)) => {
                    out.push_str("MEMBER\n");
                    if trace {
                        let names = run.states.map(&|q| g.states()[*q].clone());
                        let _ = writeln!(out, "labelling {labeled}");
                        let _ = writeln!(out, "run {names}");
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Failure::Unsupported(format!(
            "membership of trees is defined for pta, ptar and gpta files, not {}",
            file.kind()
        ))),
    }
}

fn describe(a: &Ptar, index: usize) -> String {
    let t = &a.transitions()[index];
    let s = a.states();
    let mut out = format!("{} -> {}", s[t.from], t.symbol);
    if !t.children.is_empty() {
        let kids: Vec<String> = t
            .children
            .iter()
            .map(|(q, act)| format!("{} {act}", s[*q]))
            .collect();
        let _ = write!(out, " ( {} )", kids.join(" , "));
    }
    out
}

fn empty(path: &Path, verbose: bool) -> Outcome {
    let file = load(path)?;
    match &file {
        AutomatonFile::Pa(a) => Ok(match a.is_empty() {
            PaEmptiness::Empty => "EMPTY\n".into(),
            PaEmptiness::NonEmpty(run) => {
                let indices: Vec<String> = run.transitions.iter().map(|t| t.to_string()).collect();
                let word: Vec<String> = a.run_word(&run).iter().map(|s| s.to_string()).collect();
                format!(
                    "NONEMPTY\nrun {}\nword {}\n",
                    indices.join(" "),
                    word.join(" ")
                )
                .replace(" \n", "\n")
            }
        }),
        AutomatonFile::Pta(a) | AutomatonFile::Ptar(a) => {
            if !a.is_linear() {
                return Err(Failure::Unsupported(
                    "emptiness is decided for linear PTA/PTAR only; it is undecidable for \
                     non-linear PTA/PTAR of dimension ≥ 3 (two-counter machines reduce to it)"
                        .into(),
                ));
            }
            let result = is_empty_linear(a).map_err(|e| Failure::Input(e.to_string()))?;
            let mut out = String::new();
            if verbose {
                for (i, u) in result.chain().iter().enumerate() {
                    let names: Vec<&str> = u.iter().map(|q| a.states()[*q].as_str()).collect();
                    let _ = writeln!(out, "; U{i} = {{{}}}", names.join(", "));
                }
            }
            match (result.witness(), result.spinal()) {
                (Some(w), Some(d)) => {
                    let _ = writeln!(out, "NONEMPTY\nwitness {w}");
                    if verbose {
                        let mut shown = String::new();
                        d.render(a.states(), &mut shown);
                        for line in shown.lines() {
                            let _ = writeln!(out, "; {line}");
                        }
                    }
                }
                _ => out.push_str("EMPTY\n"),
            }
            Ok(out)
        }
        _ => Err(Failure::Unsupported(format!(
            "emptiness is decided for pa files and linear pta/ptar files, not {}",
            file.kind()
        ))),
    }
}

fn machine(path: &Path) -> Result<parikh_core::twocm::TwoCM, Failure> {
    match load(path)? {
        AutomatonFile::TwoCm(m) => Ok(m),
        other => Err(Failure::Input(format!(
            "{}: expected a 2cm file, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn encode_2cm(path: &Path, out: &Path) -> Outcome {
    let m = machine(path)?;
    let encoded = encode(&m);
    let text = AutomatonFile::Pta(encoded.ptar.clone()).to_text();
    std::fs::write(out, &text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    Ok(format!(
        "wrote {}: kind {}, {} states, {} transitions\n",
        out.display(),
        Kind::Pta,
        encoded.ptar.states().len(),
        encoded.ptar.transitions().len()
    ))
}

fn cm_run(path: &Path, max_steps: usize) -> Outcome {
    let m = machine(path)?;
    Ok(match m.cm_bounded_accepts(max_steps) {
        None => "NOT-FOUND-WITHIN-BOUND\n".into(),
        Some(seq) => {
            let mut out = format!("ACCEPTS in {} steps\n", seq.len());
            for t in seq {
                let t = &m.transitions()[t];
                let _ = writeln!(out, "{} {} {}", m.states()[t.from], t.op, m.states()[t.to]);
            }
            out
        }
    })
}
