//! Command-line frontend: enumeration, complex inspection, polar and
//! singular queries, spread and partition checking, form searches, and
//! the verification battery.
//!
//! Exit codes: 0 success (and zero search hits), 10 a search found a
//! singular-free form (a reportable mathematical event), 1 verification
//! or computation failure, 2 usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lincomplex::complexes::{LinearComplex, PolarTarget};
use lincomplex::gf::Field;
use lincomplex::partitions::LinePartition;
use lincomplex::projspace::{self, Subspace};
use lincomplex::search::{self, SearchMode, SearchOptions};
use lincomplex::spreads::{self, LineSpread};
use lincomplex::verify::{self, Level, EXPECTED_PASS};

#[derive(Parser)]
#[command(
    name = "lincomplex",
    version,
    about = "Linear complexes of subspaces over small fields"
)]
struct Cli {
    /// Output format (json is the machine contract)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Ambient {
    /// Projective dimension n of PG(n,q)
    #[arg(long)]
    n: u8,
    /// Field order q (a prime power up to 16)
    #[arg(long)]
    q: u8,
}

#[derive(Subcommand)]
enum Command {
    /// List or count the d-subspaces of PG(n,q)
    Enumerate {
        #[command(flatten)]
        ambient: Ambient,
        /// Subspace dimension (-1 for the empty subspace)
        #[arg(long, allow_hyphen_values = true)]
        d: i32,
        /// Print the count only
        #[arg(long)]
        count_only: bool,
        /// First enumeration index to emit
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Maximum number of subspaces to emit
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Inspect a linear complex of h-subspaces given by a form literal
    Complex {
        #[command(flatten)]
        ambient: Ambient,
        /// Dimension h of the member subspaces
        #[arg(long)]
        h: i32,
        /// Covector literal, e.g. "01+23" or "2*012+034"
        #[arg(long)]
        form: String,
        /// Print the member count
        #[arg(long)]
        count: bool,
        /// List the members
        #[arg(long)]
        members: bool,
        /// Test one subspace for membership ("1000;0100" syntax)
        #[arg(long)]
        test: Option<String>,
    },
    /// Polar hyperplane of an (h−1)-subspace under a complex
    Polar {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        h: i32,
        #[arg(long)]
        form: String,
        /// The (h−1)-subspace to polarize
        #[arg(long, required_unless_present = "all")]
        subspace: Option<String>,
        /// Emit the whole polar table instead
        #[arg(long, conflicts_with = "subspace")]
        all: bool,
    },
    /// Singular locus of a complex
    Singular {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        h: i32,
        #[arg(long)]
        form: String,
    },
    /// Check a line set for the spread / geometric / linear properties
    Spread {
        /// Field order q
        #[arg(long)]
        q: u8,
        /// Ambient dimension n (required with --file)
        #[arg(long)]
        n: Option<u8>,
        /// Spread file: one line of PG(n,q) per record
        #[arg(long, conflicts_with = "field_reduction")]
        file: Option<PathBuf>,
        /// Build the field-reduction spread of PG(2m−1,q) instead
        #[arg(long, value_name = "M")]
        field_reduction: Option<u8>,
        /// Write the line set to a file after checking
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Line partition utilities
    Partition {
        #[command(subcommand)]
        action: PartitionAction,
    },
    /// Scan degree-3 forms for complexes of planes without singular lines
    Search {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Sample count in random mode
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker count (default: LINCOMPLEX_WORKERS or the CPU count)
        #[arg(long)]
        workers: Option<u32>,
        /// Cap on exhaustive enumeration size
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
        /// Skip non-minimal forms under coordinate permutations
        #[arg(long)]
        prune: bool,
        /// Classify forms whose singular lines form a spread (n = 5)
        #[arg(long)]
        classify_spreads: bool,
    },
    /// Run the verification battery
    VerifySuite {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Subcommand)]
enum PartitionAction {
    /// Verify a partition file and test its linearity
    Check {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        q: u8,
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Failures carrying their intended process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn run(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn field(q: u8) -> Result<Arc<Field>, Failure> {
    Field::shared(q).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_complex(f: &Arc<Field>, n: u8, h: i32, literal: &str) -> Result<LinearComplex, Failure> {
    LinearComplex::parse(f, n, h, literal).map_err(|e| Failure::usage(e.to_string()))
}

fn echo(op: &str, params: Value) -> Value {
    // flat record: {"op":…, "version":…, <params…>, "result":…}
    let mut v = json!({
        "op": op,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let (Value::Object(base), Value::Object(extra)) = (&mut v, params) {
        for (k, val) in extra {
            base.insert(k, val);
        }
    }
    v
}

fn emit(format: Format, mut report: Value, result: Value, text: String, csv: Vec<Vec<String>>) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => {
            report["result"] = result;
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        Format::Csv => {
            for row in csv {
                println!("{}", row.join(","));
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Enumerate {
            ambient,
            d,
            count_only,
            from,
            limit,
        } => {
            let f = field(ambient.q)?;
            if d < -1 || d > ambient.n as i32 {
                return Err(Failure::usage(format!(
                    "dimension {d} out of range for PG({},{})",
                    ambient.n, ambient.q
                )));
            }
            let all =
                projspace::enumerate(&f, ambient.n, d).map_err(|e| Failure::run(e.to_string()))?;
            let count = all.len();
            let slice: Vec<String> = if count_only {
                Vec::new()
            } else {
                all.iter()
                    .skip(from)
                    .take(limit.unwrap_or(usize::MAX))
                    .map(|s| s.to_string())
                    .collect()
            };
            let params =
                json!({"n": ambient.n, "q": ambient.q, "d": d, "from": from, "limit": limit});
            let text = if count_only {
                format!("{count}")
            } else {
                format!("{} subspaces\n{}", count, slice.join("\n"))
            };
            let mut csv = vec![vec!["index".into(), "subspace".into()]];
            csv.extend(
                slice
                    .iter()
                    .enumerate()
                    .map(|(i, s)| vec![(from + i).to_string(), s.clone()]),
            );
            emit(
                cli.format,
                echo("enumerate", params),
                json!({"count": count, "items": slice}),
                text,
                csv,
            );
            Ok(0)
        }
        Command::Complex {
            ambient,
            h,
            form,
            count,
            members,
            test,
        } => {
            let f = field(ambient.q)?;
            let k = parse_complex(&f, ambient.n, h, &form)?;
            let member_list = k.members().map_err(|e| Failure::run(e.to_string()))?;
            let tested: Option<(String, bool)> = match test {
                Some(t) => {
                    let s = Subspace::parse(&f, ambient.n, &t)
                        .map_err(|e| Failure::usage(e.to_string()))?;
                    let inside = k.contains(&s).map_err(|e| Failure::usage(e.to_string()))?;
                    Some((t, inside))
                }
                None => None,
            };
            let params =
                json!({"n": ambient.n, "q": ambient.q, "h": h, "form": k.form().to_literal()});
            let listed: Vec<String> = if members {
                member_list.iter().map(|m| m.to_string()).collect()
            } else {
                Vec::new()
            };
            let mut text = format!("members: {}", member_list.len());
            if members {
                text.push('\n');
                text.push_str(&listed.join("\n"));
            }
            if let Some((t, inside)) = &tested {
                text.push_str(&format!("\ncontains {t}: {inside}"));
            }
            let _ = count; // the count is always reported
            let mut csv = vec![vec!["member_count".into(), member_list.len().to_string()]];
            csv.extend(listed.iter().map(|m| vec!["member".into(), m.clone()]));
            emit(
                cli.format,
                echo("complex", params),
                json!({
                    "member_count": member_list.len(),
                    "members": if members { Some(&listed) } else { None },
                    "test": tested.as_ref().map(|(t, inside)| json!({"subspace": t, "member": inside})),
                }),
                text,
                csv,
            );
            Ok(0)
        }
        Command::Polar {
            ambient,
            h,
            form,
            subspace,
            all,
        } => {
            let f = field(ambient.q)?;
            let k = parse_complex(&f, ambient.n, h, &form)?;
            if all {
                let chi = k.up_polarity().map_err(|e| Failure::usage(e.to_string()))?;
                let params = json!({
                    "n": ambient.n, "q": ambient.q, "h": h, "form": k.form().to_literal(),
                });
                let rows: Vec<(String, String)> = chi
                    .entries()
                    .map(|(u, t)| {
                        let img = match t {
                            PolarTarget::Singular => "SINGULAR".to_string(),
                            PolarTarget::Hyperplane(hyp) => hyp.to_string(),
                        };
                        (u.to_string(), img)
                    })
                    .collect();
                let text = rows
                    .iter()
                    .map(|(u, img)| format!("{u} -> {img}"))
                    .collect::<Vec<_>>()
                    .join("\n");
                let csv: Vec<Vec<String>> =
                    std::iter::once(vec!["subspace".into(), "polar".into()])
                        .chain(rows.iter().map(|(u, img)| vec![u.clone(), img.clone()]))
                        .collect();
                let table: Vec<Value> = rows
                    .iter()
                    .map(|(u, img)| json!({"subspace": u, "polar": img}))
                    .collect();
                emit(
                    cli.format,
                    echo("polar-table", params),
                    json!({"table": table}),
                    text,
                    csv,
                );
                return Ok(0);
            }
            let u = Subspace::parse(&f, ambient.n, subspace.as_deref().unwrap_or_default())
                .map_err(|e| Failure::usage(e.to_string()))?;
            let target = k
                .polar_hyperplane(&u)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let params = json!({
                "n": ambient.n, "q": ambient.q, "h": h,
                "form": k.form().to_literal(), "subspace": u.to_string(),
            });
            let (result, text, csv) = match target {
                PolarTarget::Singular => (
                    json!({"singular": true}),
                    "SINGULAR".to_string(),
                    vec![vec!["polar".into(), "SINGULAR".into()]],
                ),
                PolarTarget::Hyperplane(hyp) => {
                    let cov = hyp
                        .dual_covector()
                        .map_err(|e| Failure::run(e.to_string()))?;
                    (
                        json!({"singular": false, "hyperplane": hyp.to_string(), "covector": cov}),
                        format!("hyperplane: {hyp}  (covector {cov:?})"),
                        vec![vec!["polar".into(), hyp.to_string()]],
                    )
                }
            };
            emit(cli.format, echo("polar", params), result, text, csv);
            Ok(0)
        }
        Command::Singular { ambient, h, form } => {
            let f = field(ambient.q)?;
            let k = parse_complex(&f, ambient.n, h, &form)?;
            let locus = k
                .singular_locus()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let singular: Vec<String> = locus.singular.iter().map(|s| s.to_string()).collect();
            let params =
                json!({"n": ambient.n, "q": ambient.q, "h": h, "form": k.form().to_literal()});
            let text = format!(
                "kernel dimension: {}\nsingular ({}):\n{}",
                locus.kernel.dim(),
                singular.len(),
                singular.join("\n")
            );
            let mut csv = vec![vec!["kernel_dim".into(), locus.kernel.dim().to_string()]];
            csv.extend(singular.iter().map(|s| vec!["singular".into(), s.clone()]));
            emit(
                cli.format,
                echo("singular", params),
                json!({
                    "kernel_dim": locus.kernel.dim(),
                    "count": singular.len(),
                    "singular": singular,
                }),
                text,
                csv,
            );
            Ok(0)
        }
        Command::Spread {
            q,
            n,
            file,
            field_reduction,
            out,
        } => {
            let f = field(q)?;
            let lines: Vec<Subspace> = match (&file, field_reduction) {
                (Some(path), None) => {
                    let n = n.ok_or_else(|| Failure::usage("--file needs --n"))?;
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    spreads::parse_spread_file(&f, n, &text)
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
                (None, Some(m)) => spreads::field_reduction_spread(m, q)
                    .map_err(|e| Failure::usage(e.to_string()))?
                    .lines()
                    .to_vec(),
                _ => {
                    return Err(Failure::usage(
                        "give exactly one of --file or --field-reduction",
                    ))
                }
            };
            if lines.is_empty() {
                return Err(Failure::usage("the line set is empty"));
            }
            let mut carrier = lines[0].clone();
            for l in &lines[1..] {
                carrier = carrier.join(l).map_err(|e| Failure::usage(e.to_string()))?;
            }
            let is_spread =
                spreads::is_spread(&lines, &carrier).map_err(|e| Failure::usage(e.to_string()))?;
            let verdicts = if is_spread {
                let spread = LineSpread::new(carrier.clone(), lines.clone())
                    .map_err(|e| Failure::run(e.to_string()))?;
                let geometric = spread
                    .is_geometric()
                    .map_err(|e| Failure::run(e.to_string()))?;
                let (linear, span_dim) = spread
                    .is_linear()
                    .map_err(|e| Failure::run(e.to_string()))?;
                Some((geometric, linear, span_dim))
            } else {
                None
            };
            if let Some(path) = out {
                std::fs::write(&path, spreads::spread_to_text(&lines))
                    .map_err(|e| Failure::run(format!("{}: {e}", path.display())))?;
            }
            let params = json!({"q": q, "n": carrier.ambient(), "source":
                file.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "field-reduction".into())});
            let result = json!({
                "carrier": carrier.to_string(),
                "size": lines.len(),
                "is_spread": is_spread,
                "is_geometric": verdicts.map(|v| v.0),
                "is_linear": verdicts.map(|v| v.1),
                "span_dim": verdicts.map(|v| v.2),
            });
            let text = match verdicts {
                Some((g, l, sd)) => format!(
                    "carrier {carrier}; {} lines; spread: true; geometric: {g}; linear: {l} (span {sd})",
                    lines.len()
                ),
                None => format!("carrier {carrier}; {} lines; spread: false", lines.len()),
            };
            let csv = vec![
                vec!["carrier".into(), carrier.to_string()],
                vec!["size".into(), lines.len().to_string()],
                vec!["is_spread".into(), is_spread.to_string()],
                vec![
                    "is_geometric".into(),
                    verdicts.map_or("".into(), |v| v.0.to_string()),
                ],
                vec![
                    "is_linear".into(),
                    verdicts.map_or("".into(), |v| v.1.to_string()),
                ],
                vec![
                    "span_dim".into(),
                    verdicts.map_or("".into(), |v| v.2.to_string()),
                ],
            ];
            emit(cli.format, echo("spread", params), result, text, csv);
            Ok(0)
        }
        Command::Partition { action } => match action {
            PartitionAction::Check { n, q, file } => {
                let f = field(q)?;
                let text = std::fs::read_to_string(&file)
                    .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
                let partition = LinePartition::parse(&f, n, &text)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                let (valid, mut witness) = match partition.verify_detailed() {
                    Ok(check) => (check.valid, check.witness),
                    Err(e) => (false, Some(e.to_string())),
                };
                let linear = if valid {
                    match partition
                        .linearity_witness()
                        .map_err(|e| Failure::run(e.to_string()))?
                    {
                        None => Some(true),
                        Some(pencil) => {
                            witness = Some(format!(
                                "pencil with vertex \"{}\" in carrier \"{}\"",
                                pencil.vertex, pencil.carrier
                            ));
                            Some(false)
                        }
                    }
                } else {
                    None
                };
                let params = json!({"n": n, "q": q, "file": file.display().to_string()});
                let result = json!({"valid": valid, "linear": linear, "witness": witness});
                let text_out = format!(
                    "valid: {valid}; linear: {}; witness: {}",
                    linear.map_or("n/a".into(), |l| l.to_string()),
                    result["witness"].as_str().unwrap_or("none")
                );
                let csv = vec![
                    vec!["valid".into(), valid.to_string()],
                    vec!["linear".into(), linear.map_or("".into(), |l| l.to_string())],
                ];
                emit(
                    cli.format,
                    echo("partition-check", params),
                    result,
                    text_out,
                    csv,
                );
                Ok(0)
            }
        },
        Command::Search {
            ambient,
            mode,
            budget,
            seed,
            workers,
            cap,
            prune,
            classify_spreads,
        } => {
            let f = field(ambient.q)?;
            let workers = workers
                .or_else(|| {
                    std::env::var("LINCOMPLEX_WORKERS")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or_else(|| {
                    std::thread::available_parallelism()
                        .map(|p| p.get() as u32)
                        .unwrap_or(1)
                });
            let opts = SearchOptions {
                mode: match mode {
                    ModeArg::Exhaustive => SearchMode::Exhaustive,
                    ModeArg::Random => SearchMode::Random,
                },
                budget,
                seed,
                workers,
                exhaustive_cap: cap,
                prune_permutations: prune,
                witness_limit: 8,
            };
            if classify_spreads {
                let (hits, report) = search::classify_spread_forms(&f, ambient.n, &opts)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                let geometric = hits.iter().filter(|h| h.geometric).count();
                let params = json!({
                    "n": ambient.n, "q": ambient.q, "mode": report.mode,
                    "budget": budget, "seed": seed, "workers": workers,
                });
                let text = format!(
                    "tested {}; spread-forms {}; geometric {}; first witnesses {:?}",
                    report.forms_tested,
                    report.forms_whose_singular_lines_form_a_spread,
                    geometric,
                    report.witnesses
                );
                let csv = vec![
                    vec!["forms_tested".into(), report.forms_tested.to_string()],
                    vec![
                        "spread_forms".into(),
                        report.forms_whose_singular_lines_form_a_spread.to_string(),
                    ],
                    vec!["geometric".into(), geometric.to_string()],
                ];
                emit(
                    cli.format,
                    echo("search-classify", params),
                    json!({"report": report, "geometric_hits": geometric}),
                    text,
                    csv,
                );
                Ok(0)
            } else {
                let report = search::search_no_singular(&f, ambient.n, &opts)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                let params = json!({
                    "n": ambient.n, "q": ambient.q, "mode": report.mode,
                    "budget": budget, "seed": seed, "workers": workers,
                });
                let hit = report.forms_without_singular_line > 0;
                let text = format!(
                    "tested {}; singular-free {}; witnesses {:?}",
                    report.forms_tested, report.forms_without_singular_line, report.witnesses
                );
                let csv = vec![
                    vec!["forms_tested".into(), report.forms_tested.to_string()],
                    vec![
                        "singular_free".into(),
                        report.forms_without_singular_line.to_string(),
                    ],
                ];
                emit(
                    cli.format,
                    echo("search", params),
                    json!({"report": report}),
                    text,
                    csv,
                );
                Ok(if hit { 10 } else { 0 })
            }
        }
        Command::VerifySuite { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let outcomes = verify::run(level);
            let mut regressions = 0;
            for o in &outcomes {
                println!("{}", o.status_line());
                if o.passed != EXPECTED_PASS[o.id as usize - 1] {
                    regressions += 1;
                }
            }
            if outcomes.iter().any(|o| !o.passed) {
                println!(
                    "note: criterion 5 is red by design; its (4,2) case lies outside \
                     the parity hypothesis it relies on, and the runner verifies the \
                     parity-valid (5,2) instance instead (see the detail line)."
                );
            }
            if cli.format == Format::Json {
                let report: Vec<Value> = outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "id": o.id, "name": o.name, "passed": o.passed,
                            "expected": EXPECTED_PASS[o.id as usize - 1],
                            "detail": o.detail, "millis": o.millis as u64,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            Ok(if regressions == 0 { 0 } else { 1 })
        }
    }
}
