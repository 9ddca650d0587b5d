use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dyer_lashof::{nishida_action, BarElement};
use ehp_pipelines::audit::check_acyclicity;
use ehp_pipelines::build::{build_table, build_tahss, build_tehpss, build_tgss, tahss_page, tehpss_page, tgss_page, Ledgers, Table};
use ehp_pipelines::diff::{diff_golden, Style};
use ehp_pipelines::emit::emit_table;
use ehp_pipelines::golden::{bundled, GoldenTable};
use ehp_pipelines::nishida::nishida_candidates;
use ehp_pipelines::stream::{record_lines, to_json_lines};
use stems_db::StemsDb;

/// Transfinite AHSS, Goodwillie and EHP spectral sequences from shipped
/// ledgers.
#[derive(Parser)]
#[command(name = "ehp", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Stems database to use instead of the bundled one.
    #[arg(long, global = true)]
    stems_db: Option<PathBuf>,
    /// Directory of `<id>.ledger` files to use instead of the bundled ones.
    #[arg(long, global = true)]
    ledger_dir: Option<PathBuf>,
    /// Last grade (TAHSS) or stem (TGSS, TEHPSS) to compute.
    #[arg(long, global = true)]
    t_max: Option<i64>,
    /// Write the record stream as JSON lines instead of the table.
    #[arg(long, global = true)]
    records: bool,
}

#[derive(Subcommand)]
enum Command {
    /// TAHSS for L(k)_n.
    Tahss {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
    /// TGSS for S^n.
    Tgss {
        #[arg(long)]
        sphere: i64,
    },
    /// The transfinite EHP spectral sequence.
    Tehpss,
    /// Attaching-map differentials proposed for L(k)_n.
    Candidates {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
    /// Compares every table with its golden file and audits S^1.
    Check {
        /// Directory of golden files; the bundled ones by default.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// CU cells of L(k)_n (optionally of L(k)_n^m) by degree.
    Basis {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long)]
        m: Option<i64>,
    },
    /// Dual Steenrod operations on a Dyer–Lashof monomial.
    Nishida {
        /// Operations applied right to left, e.g. `2,1` for Sq^2 Sq^1.
        #[arg(long, value_delimiter = ',')]
        sq: Vec<i64>,
        /// The monomial, e.g. `6` or `9,4`.
        #[arg(long, value_delimiter = ',')]
        ops: Vec<i64>,
        /// Base weight.
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common) -> Result<(StemsDb, Ledgers), String> {
    let db = match &common.stems_db {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            StemsDb::load(&text).map_err(|e| e.to_string())?
        }
        None => StemsDb::bundled(),
    };
    let ledgers = match &common.ledger_dir {
        Some(d) => Ledgers::load_dir(d)?,
        None => Ledgers::bundled(),
    };
    Ok((db, ledgers))
}

fn print_table(common: &Common, db: &StemsDb, table: &Table) -> Result<(), String> {
    let text = if common.records {
        to_json_lines(&record_lines(&table.computed))
    } else {
        let labels = bundled::by_id(&table.id).and_then(|t| GoldenTable::parse(t).ok());
        emit_table(db, table, labels.as_ref()).to_string()
    };
    // A closed pipe (`ehp tgss | head`) is not an error.
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let common = &cli.common;
    match cli.command {
        Command::Tahss { k, n } => {
            let (db, ledgers) = load(common)?;
            let t_max = common.t_max.unwrap_or(23);
            let computed = build_tahss(k, n, t_max + 1, &db, &ledgers).map_err(|e| e.to_string())?;
            let table = Table { id: format!("L{k}"), computed, page: tahss_page(k), style: Style::Tahss };
            print_table(common, &db, &table)?;
        }
        Command::Tgss { sphere } => {
            let (db, ledgers) = load(common)?;
            let t_max = common.t_max.unwrap_or(20);
            let computed = build_tgss(sphere, t_max + sphere, &db, &ledgers).map_err(|e| e.to_string())?;
            let table = Table { id: format!("S{sphere}"), computed, page: tgss_page(), style: Style::Tgss };
            print_table(common, &db, &table)?;
        }
        Command::Tehpss => {
            let (db, ledgers) = load(common)?;
            let t_max = common.t_max.unwrap_or(19);
            let computed = build_tehpss(t_max + 1, &db, &ledgers).map_err(|e| e.to_string())?;
            let table = Table { id: "EHP".into(), computed, page: tehpss_page(), style: Style::Tehpss };
            print_table(common, &db, &table)?;
        }
        Command::Candidates { k, n } => {
            let (db, _) = load(common)?;
            let c = nishida_candidates(&db, k, n, common.t_max.unwrap_or(23));
            for r in &c.records {
                println!("{r}");
            }
            eprintln!("{} candidates, {} products unknown", c.records.len(), c.unknown.len());
        }
        Command::Check { golden } => {
            let (db, ledgers) = load(common)?;
            let mut ok = true;
            for id in bundled::IDS {
                let text = match &golden {
                    Some(dir) => {
                        let p = dir.join(bundled::file_name(id));
                        std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?
                    }
                    None => bundled::by_id(id).expect("bundled").to_string(),
                };
                let g = GoldenTable::parse(&text).map_err(|e| format!("{id}: {e}"))?;
                match build_table(id, &db, &ledgers) {
                    Ok(t) => {
                        let r = diff_golden(&t.computed, &db, &g, &t.page, t.style);
                        ok &= r.is_clean();
                        if r.is_clean() {
                            println!("{id}: clean ({} entries)", r.entries);
                        } else {
                            println!("{id}: {r}");
                        }
                    }
                    Err(e) => {
                        ok = false;
                        println!("{id}: {e}");
                    }
                }
            }
            let s1 = build_tgss(1, 21, &db, &ledgers).map_err(|e| e.to_string())?;
            let r = check_acyclicity(&s1, &db, 2, 20);
            ok &= r.is_clean();
            println!("S1 acyclicity: {r}");
            println!("{}", if ok { "all audits pass" } else { "audit FAILED" });
            return Ok(ok);
        }
        Command::Basis { k, n, m } => {
            let t_max = common.t_max.unwrap_or(23);
            for d in 0..=t_max {
                let cells = layer_homology::basis(k, n, m, d);
                if cells.is_empty() {
                    continue;
                }
                let names: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
                println!("{d}: {} {}", cells.len(), names.join(" "));
            }
        }
        Command::Nishida { sq, ops, n } => {
            let mut e = BarElement::monomial(ops, n);
            for &r in sq.iter().rev() {
                e = nishida_action(r, &e);
            }
            println!("{e}");
        }
    }
    Ok(true)
}
