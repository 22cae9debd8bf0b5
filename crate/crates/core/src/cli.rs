//! Command-line front end. Exit status 0 means success, 1 a computed
//! negative answer (not a changemaker, obstructed, not realized), 2 a usage
//! or input error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::alexander::{
    cable_genus, cable_lspace_criterion, torsion, torus_poly, validate_lspace_form, AlexanderPoly,
};
use crate::cables::{family, linking_matrix, verify_stage};
use crate::changemaker::{
    bound_nonsharp, bound_sharp, changemakers_with_l1_at_most, enumerate_changemakers,
    is_changemaker, l1_floor, make_change, sharp_genus, subset_sums_complete, Changemaker,
};
use crate::dinvariants::{d_lspace_surgery, d_unknot, lemma_c_check, SpincLabel};
use crate::error::{Error, Result};
use crate::realization::{
    cabling_sum_data, goda_teragaito_max, realize, scan, summarize, write_csv, write_json_lines,
    CablingInput,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cmlattice",
    version,
    about = "Changemaker lattices and L-space surgery obstructions"
)]
pub struct Cli {
    #[command(flatten)]
    pub format: FormatArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// JSON output (JSON lines for `scan`)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// CSV output, where the command produces a table
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Changemaker vectors
    #[command(subcommand)]
    Cm(CmCommand),
    /// Alexander polynomials, given as `a_0,a_1,...,a_g`
    #[command(subcommand)]
    Alex(AlexCommand),
    /// Correction terms
    #[command(subcommand)]
    Dinv(DinvCommand),
    /// Genus bounds at slope p
    Bounds { p: i64 },
    /// Stage n of the extremal iterated cable family
    Family { n: u32 },
    /// Realize Lambda(p,q) as a changemaker complement
    Realize { p: i64, q: i64 },
    /// Realize every coprime (p,q) with p <= pmax
    Scan {
        pmax: i64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest 2g-1 allowed by a sharp filling at slope p
    Gt { p: i64 },
    /// Slope and summands of a reducible surgery on a torus knot or cable
    #[command(subcommand)]
    Cabling(CablingCommand),
}

#[derive(Debug, Subcommand)]
pub enum CmCommand {
    Check {
        #[arg(value_parser = parse_list, allow_hyphen_values = true)]
        sigma: IntList,
    },
    Enum {
        p: i64,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, requires = "length")]
        allow_zeros: bool,
        #[arg(long, conflicts_with_all = ["length", "allow_zeros"])]
        max_l1: Option<i64>,
    },
    Change {
        #[arg(value_parser = parse_list)]
        sigma: IntList,
        k: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlexCommand {
    Validate {
        #[arg(value_parser = parse_poly, allow_hyphen_values = true)]
        poly: AlexanderPoly,
    },
    Torsion {
        #[arg(value_parser = parse_poly, allow_hyphen_values = true)]
        poly: AlexanderPoly,
        #[arg(long, allow_hyphen_values = true)]
        i: Option<i64>,
    },
    Torus {
        r: i64,
        s: i64,
    },
    CableGenus {
        q: i64,
        r: i64,
        g: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum DinvCommand {
    Unknot {
        p: i64,
        #[arg(long)]
        i: Option<i64>,
    },
    Surgery {
        p: i64,
        #[arg(value_parser = parse_poly, allow_hyphen_values = true)]
        poly: AlexanderPoly,
        #[arg(long)]
        i: Option<i64>,
    },
    LemmaC {
        #[arg(value_parser = parse_list)]
        sigma: IntList,
        #[arg(value_parser = parse_poly, allow_hyphen_values = true)]
        poly: AlexanderPoly,
        #[arg(long = "box", default_value_t = 3)]
        box_bound: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CablingCommand {
    Torus {
        p: i64,
        q: i64,
    },
    Cable {
        q: i64,
        r: i64,
        s: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i64,
    },
}

/// Integers separated by `,` or `;`, optionally in brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

fn parse_list(s: &str) -> std::result::Result<IntList, String> {
    split_ints(s).map(IntList)
}

fn split_ints(s: &str) -> std::result::Result<Vec<i64>, String> {
    let t = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split([',', ';'])
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

fn parse_poly(s: &str) -> std::result::Result<AlexanderPoly, String> {
    AlexanderPoly::from_half(split_ints(s)?).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

/// What a subcommand computed, in every format it supports.
struct Report {
    json: Value,
    human: String,
    table: Option<Table>,
    status: i32,
}

impl Report {
    fn new(json: Value, human: String) -> Self {
        Report {
            json,
            human,
            table: None,
            status: EXIT_OK,
        }
    }

    fn status(mut self, status: i32) -> Self {
        self.status = status;
        self
    }

    fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }
}

fn tuple(xs: &[i64]) -> String {
    let inner: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("({})", inner.join(","))
}

fn semis(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Parses `args` (including the program name), runs the command, and writes
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let format = if cli.format.json {
        Format::Json
    } else if cli.format.csv {
        Format::Csv
    } else {
        Format::Human
    };
    match execute(cli.command, format, out, err) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(
    command: Command,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let report = match command {
        Command::Scan {
            pmax,
            workers,
            out: path,
        } => {
            return run_scan(pmax, workers, path, format, out, err);
        }
        Command::Cm(c) => cm(c)?,
        Command::Alex(c) => alex(c)?,
        Command::Dinv(c) => dinv(c)?,
        Command::Bounds { p } => bounds(p)?,
        Command::Family { n } => family_report(n)?,
        Command::Realize { p, q } => realize_report(p, q)?,
        Command::Gt { p } => {
            let (value, sigma) = goda_teragaito_max(p)?;
            Report::new(
                json!({ "p": p, "max_2g_minus_1": value, "maximizer": sigma }),
                format!("max 2g-1: {value}\nmaximizer: {}\n", tuple(sigma.sigma())),
            )
        }
        Command::Cabling(c) => {
            let input = match c {
                CablingCommand::Torus { p, q } => CablingInput::Torus { p, q },
                CablingCommand::Cable { q, r, s, sign } => CablingInput::Cable { q, r, s, sign },
            };
            let d = cabling_sum_data(input)?;
            Report::new(
                json!({ "input": input, "result": d }),
                format!(
                    "slope: {}\nsummand orders: {} {}\n",
                    d.slope, d.orders.0, d.orders.1
                ),
            )
        }
    };
    emit(&report, format, out)?;
    Ok(report.status)
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("output: {e}"))
}

fn emit(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Human => write!(out, "{}", report.human).map_err(io_err),
        Format::Json => writeln!(out, "{}", report.json).map_err(io_err),
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--csv is not supported here".into()))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.header).map_err(io_err)?;
            for row in &table.rows {
                w.write_record(row).map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

fn cm(c: CmCommand) -> Result<Report> {
    Ok(match c {
        CmCommand::Check {
            sigma: IntList(sigma),
        } => {
            let ok = is_changemaker(&sigma)?;
            let complete = subset_sums_complete(&sigma);
            let mut json =
                json!({ "sigma": sigma, "changemaker": ok, "subset_sums_complete": complete });
            let mut human = format!("changemaker: {ok}\nsubset sums complete: {complete}\n");
            if ok {
                let cm = Changemaker::new(sigma)?;
                json["norm"] = json!(cm.norm());
                json["l1"] = json!(cm.l1());
                json["sharp_genus"] = json!(sharp_genus(&cm));
                human += &format!(
                    "norm: {}\nl1: {}\nsharp genus: {}\n",
                    cm.norm(),
                    cm.l1(),
                    sharp_genus(&cm)
                );
            }
            Report::new(json, human).status(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        CmCommand::Enum {
            p,
            length,
            allow_zeros,
            max_l1,
        } => {
            let list = match max_l1 {
                Some(m) => changemakers_with_l1_at_most(p, m)?,
                None => enumerate_changemakers(p, length, allow_zeros)?,
            };
            let human: String = list
                .iter()
                .map(|s| {
                    format!(
                        "{} l1={} genus={}\n",
                        tuple(s.sigma()),
                        s.l1(),
                        sharp_genus(s)
                    )
                })
                .collect();
            let rows = list
                .iter()
                .map(|s| {
                    vec![
                        semis(s.sigma()),
                        s.l1().to_string(),
                        sharp_genus(s).to_string(),
                    ]
                })
                .collect();
            Report::new(
                json!({ "p": p, "count": list.len(), "changemakers": list }),
                human,
            )
            .table(vec!["sigma", "l1", "genus"], rows)
        }
        CmCommand::Change { sigma, k } => {
            let cm = Changemaker::new(sigma.0)?;
            let change = make_change(&cm, k)?;
            let parts: Vec<i64> = change.indices.iter().map(|&i| cm.sigma()[i]).collect();
            Report::new(
                to_value(&change),
                format!(
                    "indices: {:?}\n{} = {}\n",
                    change.indices,
                    k,
                    semis(&parts).replace(';', " + ")
                ),
            )
        }
    })
}

fn alex(c: AlexCommand) -> Result<Report> {
    Ok(match c {
        AlexCommand::Validate { poly } => {
            let ok = validate_lspace_form(&poly);
            Report::new(
                json!({ "poly": poly, "lspace_form": ok, "degree": poly.degree() }),
                format!("L-space form: {ok}\ndegree: {}\n", poly.degree()),
            )
            .status(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        AlexCommand::Torsion { poly, i } => {
            let g = poly.degree() as i64;
            let labels: Vec<i64> = match i {
                Some(i) => vec![i],
                None => (0..=g).collect(),
            };
            let mut values = Vec::new();
            for &j in &labels {
                values.push(torsion(&poly, j)?);
            }
            let validated = validate_lspace_form(&poly);
            let human: String = labels
                .iter()
                .zip(&values)
                .map(|(j, t)| format!("t_{j} = {}\n", t.value))
                .chain((!validated).then(|| "warning: not of L-space form\n".to_string()))
                .collect();
            let rows = labels
                .iter()
                .zip(&values)
                .map(|(j, t)| vec![j.to_string(), t.value.to_string()])
                .collect();
            let entries: Vec<Value> = labels
                .iter()
                .zip(&values)
                .map(|(j, t)| json!({ "i": j, "t": t.value }))
                .collect();
            Report::new(
                json!({ "poly": poly, "validated": validated, "torsion": entries }),
                human,
            )
            .table(vec!["i", "t"], rows)
        }
        AlexCommand::Torus { r, s } => {
            let poly = torus_poly(r, s)?;
            Report::new(
                json!({ "r": r, "s": s, "poly": poly, "genus": poly.degree() }),
                format!("{poly}\ngenus: {}\n", poly.degree()),
            )
        }
        AlexCommand::CableGenus { q, r, g } => {
            let genus = cable_genus(q, r, g)?;
            let lspace = cable_lspace_criterion(q, r, g);
            Report::new(
                json!({ "q": q, "r": r, "companion_genus": g, "genus": genus, "lspace_slope": lspace }),
                format!("genus: {genus}\nqr-surgery is an L-space when the companion is an L-space knot: {lspace}\n"),
            )
        }
    })
}

fn labels_for(p: i64, i: Option<i64>) -> Result<Vec<SpincLabel>> {
    if p < 1 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: ">= 1".into(),
        });
    }
    match i {
        Some(i) => Ok(vec![SpincLabel::new(i, p)?]),
        None => (0..p).map(|i| SpincLabel::new(i, p)).collect(),
    }
}

fn dinv(c: DinvCommand) -> Result<Report> {
    Ok(match c {
        DinvCommand::Unknot { p, i } => {
            let mut rows = Vec::new();
            for l in labels_for(p, i)? {
                rows.push((l.value(), d_unknot(p, l)?));
            }
            d_table(json!({ "p": p }), rows)
        }
        DinvCommand::Surgery { p, poly, i } => {
            let mut rows = Vec::new();
            for l in labels_for(p, i)? {
                rows.push((l.value(), d_lspace_surgery(p, l, &poly)?));
            }
            d_table(json!({ "p": p, "poly": poly }), rows)
        }
        DinvCommand::LemmaC {
            sigma,
            poly,
            box_bound,
        } => {
            let cm = Changemaker::new(sigma.0)?;
            let r = lemma_c_check(&cm, &poly, box_bound)?;
            let mut human = format!(
                "checked {} covectors with |c_j| <= {}\nviolations: {}\n",
                r.covectors_checked, r.box_bound, r.violation_count
            );
            for v in &r.violations {
                human += &format!(
                    "  label {}: c = {} gives {} > {}\n",
                    v.label,
                    tuple(&v.covector),
                    v.lhs,
                    v.rhs
                );
            }
            for l in &r.labels {
                let w = l
                    .equality_witness
                    .as_deref()
                    .map(tuple)
                    .unwrap_or_else(|| "none".into());
                human += &format!("label {} (t = {}): equality at {}\n", l.label, l.torsion, w);
            }
            if let Some(c) = &r.caveat {
                human += &format!("note: {c}\n");
            }
            let status = if r.obstructed() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            };
            let rows = r
                .labels
                .iter()
                .map(|l| {
                    vec![
                        l.label.to_string(),
                        l.torsion.to_string(),
                        l.equality_witness.as_deref().map(semis).unwrap_or_default(),
                    ]
                })
                .collect();
            Report::new(to_value(&r), human)
                .status(status)
                .table(vec!["label", "torsion", "equality_witness"], rows)
        }
    })
}

fn d_table(mut json: Value, rows: Vec<(i64, crate::dinvariants::CorrectionTerm)>) -> Report {
    let human = rows
        .iter()
        .map(|(i, d)| format!("d({i}) = {d}\n"))
        .collect();
    json["d"] = rows
        .iter()
        .map(|(i, d)| json!({ "i": i, "d": d }))
        .collect();
    let rows = rows
        .iter()
        .map(|(i, d)| vec![i.to_string(), d.to_string()])
        .collect();
    Report::new(json, human).table(vec!["i", "d"], rows)
}

fn bounds(p: i64) -> Result<Report> {
    let ns = bound_nonsharp(p)?;
    let sh = bound_sharp(p)?;
    let floor = l1_floor(p)?;
    Ok(Report::new(
        json!({ "p": p, "nonsharp": ns, "sharp": sh, "min_l1": floor }),
        format!("2g-1 <= {ns} (nonsharp)\n2g-1 <= {sh} (sharp)\n|sigma|_1 >= {floor}\n"),
    )
    .table(
        vec!["p", "nonsharp", "sharp", "min_l1"],
        vec![vec![
            p.to_string(),
            ns.to_string(),
            sh.to_string(),
            floor.to_string(),
        ]],
    ))
}

fn family_report(n: u32) -> Result<Report> {
    let stage = family(n)?;
    let check = verify_stage(&stage)?;
    let linking = if n >= 2 {
        Some(linking_matrix(n)?)
    } else {
        None
    };
    let mut human = format!(
        "cables: {}\np: {}\nsigma: {}\ngenus: {}\n",
        stage
            .cable_params
            .iter()
            .map(|a| format!("(2,{a})"))
            .collect::<Vec<_>>()
            .join(" "),
        stage.p,
        tuple(stage.sigma.sigma()),
        stage.genus,
    );
    if stage.degenerate {
        human += "degenerate: unknot at slope 1\n";
    }
    human += &format!("verified: {}\n", check.passed());
    let status = if check.passed() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Ok(Report::new(
        json!({ "stage": stage, "check": check, "linking_matrix": linking, "verified": check.passed() }),
        human,
    )
    .status(status))
}

fn realize_report(p: i64, q: i64) -> Result<Report> {
    Ok(match realize(p, q)? {
        Some(w) => {
            let chain: Vec<String> = w.chain.iter().map(|v| v.to_string()).collect();
            let human = format!(
                "realized\nweights: {}\nsigma: {}\ngenus: {}\nchain: {}{}\n",
                tuple(&w.weights),
                tuple(w.sigma.sigma()),
                w.genus,
                chain.join(" "),
                if w.reversed { " (reversed)" } else { "" },
            );
            let mut json = to_value(&w);
            json["realized"] = json!(true);
            Report::new(json, human)
        }
        None => Report::new(
            json!({ "p": p, "q": q, "realized": false }),
            "not realized\n".into(),
        )
        .status(EXIT_NEGATIVE),
    })
}

fn run_scan(
    pmax: i64,
    workers: usize,
    path: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let records = scan(pmax, workers)?;
    let mut file;
    let sink: &mut dyn Write = match &path {
        Some(p) => {
            file = BufWriter::new(File::create(p).map_err(io_err)?);
            &mut file
        }
        None => out,
    };
    match format {
        Format::Json => write_json_lines(&records, &mut *sink)?,
        Format::Csv | Format::Human => write_csv(&records, &mut *sink)?,
    }
    sink.flush().map_err(io_err)?;
    let summary = summarize(pmax, &records);
    writeln!(
        err,
        "{} pairs, {} realized, {} Berge bound failures{}",
        summary.pairs,
        summary.realized,
        summary.berge_violations.len(),
        summary
            .berge_violations
            .iter()
            .map(|(p, q, g)| format!(" ({p},{q}) g={g}"))
            .collect::<String>()
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn list_parsing() {
        assert_eq!(split_ints("1,2,4").unwrap(), vec![1, 2, 4]);
        assert_eq!(split_ints("(1;2)").unwrap(), vec![1, 2]);
        assert_eq!(split_ints("[-1, 1]").unwrap(), vec![-1, 1]);
        assert_eq!(split_ints("").unwrap(), Vec::<i64>::new());
        assert!(split_ints("1,x").is_err());
    }
}
