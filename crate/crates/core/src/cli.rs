//! Command-line front end. Every command writes JSON or CSV to `out` and
//! diagnostics to `err`; the return value is the process exit code.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analytics::{
    self, comparison_row_f64, cross_section_table, diagonal_curve, find_diagonal_zeros_with, find_extremum,
    first_server_advantage, ComparisonRow, ExtremumOptions, Mode, SearchRegion,
};
use crate::error::{Error, Result};
use crate::oracle::{self, ClosedForm, FormId};
use crate::par::{self, Execution};
use crate::rational::{fraction_string, log10_abs, parse_rational, to_fixed, to_scientific, Rational};
use crate::simulator::{simulate, FirstServer, SimConfig};
use crate::solver::chain_summary;
use crate::state_space::{ScoringSystem, SystemKind, Team};
use crate::transitions::{RallyParams, TransitionModel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const DEFAULT_DIGITS: u32 = 12;
const ADVANTAGE_SIG_DIGITS: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "pickleball", version, about = "Exact Markov chain analysis of pickleball doubles scoring")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Decimal places for decimal renderings (default 12; zeros and extremum points default to 6).
    #[arg(long, global = true)]
    digits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FirstArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "coin")]
    Coin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Min,
    Max,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// side-out, modified-rally or hybrid-rally.
    #[arg(long, value_parser = parse_kind)]
    system: SystemKind,
    /// Points needed to win (at least 4).
    #[arg(long)]
    n: u32,
}

impl SystemArgs {
    fn system(&self) -> Result<ScoringSystem> {
        ScoringSystem::new(self.system, self.n)
    }
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Team A's serve-win probability, as a decimal or p/q.
    #[arg(long, value_parser = parse_probability)]
    pa: Rational,
    /// Team B's serve-win probability, as a decimal or p/q.
    #[arg(long, value_parser = parse_probability)]
    pb: Rational,
}

impl PointArgs {
    fn params(&self) -> Result<RallyParams> {
        RallyParams::new(self.pa.clone(), self.pb.clone())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Win probability and duration moments from the opening serve.
    Summary {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        point: PointArgs,
        /// First server; `coin` averages both conditionals.
        #[arg(long, value_enum, default_value_t = FirstArg::A)]
        first: FirstArg,
    },
    /// First-server advantage at one point.
    Advantage {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Zeros of the advantage along the diagonal p_A = p_B.
    Zeros {
        #[command(flatten)]
        system: SystemArgs,
        /// Width of each reported root interval.
        #[arg(long, value_parser = parse_rational, default_value = "1e-7")]
        tol: Rational,
        /// Spacing of the initial sign scan.
        #[arg(long, value_parser = parse_rational, default_value = "1/1024")]
        step: Rational,
    },
    /// Minimum or maximum of the advantage over a region.
    Extremum {
        #[command(flatten)]
        system: SystemArgs,
        /// Bounds "x_lo,x_hi,y_lo,y_hi,s_lo,s_hi" with s = x + y.
        #[arg(long, value_parser = parse_region)]
        region: RegionBounds,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Stop once the search step falls below this.
        #[arg(long, value_parser = parse_rational, default_value = "1e-7")]
        tol: Rational,
        /// Spacing of the coarse grid.
        #[arg(long, value_parser = parse_rational, default_value = "1/64")]
        grid_step: Rational,
    },
    /// Table behind one of the figures.
    Figure {
        /// 3, 4: sign grids of the side-out advantage to 11 and 15; 5: diagonal
        /// curves; 6: win probability; 7: mean duration; 8: duration spread.
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        id: u8,
        /// Grid points along p_A (default 201; sign grids default to 51 per axis).
        #[arg(long)]
        points: Option<usize>,
        /// Use double precision for the cross-section tables 6 to 8.
        #[arg(long)]
        fast: bool,
    },
    /// Monte Carlo estimate from direct playout of the rules.
    Simulate {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        games: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FirstArg::A)]
        first: FirstArg,
        /// Worker threads; results do not depend on this.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare a published closed form with the chain at random rational points.
    OracleCheck {
        /// f11_full, f15_full, f21star_diag or f21circ_diag.
        #[arg(long, value_parser = parse_form)]
        form: FormId,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest denominator of a sampled coordinate.
        #[arg(long, default_value_t = 1000)]
        max_den: i64,
    },
}

fn parse_kind(s: &str) -> std::result::Result<SystemKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_form(s: &str) -> std::result::Result<FormId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_probability(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
struct RegionBounds([Rational; 6]);

fn parse_region(s: &str) -> std::result::Result<RegionBounds, String> {
    let parts: Vec<Rational> = s.split(',').map(parse_rational).collect::<Result<_>>().map_err(|e| e.to_string())?;
    let bounds: [Rational; 6] =
        parts.try_into().map_err(|_| "region needs six comma-separated bounds".to_string())?;
    Ok(RegionBounds(bounds))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            return if informational {
                let _ = out.write_all(text.as_bytes());
                0
            } else {
                let _ = err.write_all(text.as_bytes());
                2
            };
        }
    };
    match execute(&cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "cannot write output: {e}");
                1
            }
        },
        Err(e) => {
            let report = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            let _ = writeln!(err, "{report}");
            if matches!(e, Error::Usage(_) | Error::Parse(_)) {
                2
            } else {
                1
            }
        }
    }
}

struct Emitter {
    format: Format,
    digits: Option<u32>,
}

impl Emitter {
    fn digits_or(&self, default: u32) -> u32 {
        self.digits.unwrap_or(default)
    }

    fn exact(&self, r: &Rational) -> Value {
        json!({ "exact": fraction_string(r), "decimal": to_fixed(r, self.digits_or(DEFAULT_DIGITS)) })
    }

    /// Advantage values read best in scientific notation unless digits were requested.
    fn advantage(&self, r: &Rational) -> Value {
        let decimal = match self.digits {
            Some(d) => to_fixed(r, d),
            None => to_scientific(r, ADVANTAGE_SIG_DIGITS),
        };
        json!({
            "exact": fraction_string(r),
            "decimal": decimal,
            "scientific": to_scientific(r, ADVANTAGE_SIG_DIGITS),
        })
    }

    fn record(&self, command: &str, fields: Value, result: Value) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), command.into());
        if let Value::Object(extra) = fields {
            map.extend(extra);
        }
        map.insert("result".into(), result);
        map.insert("metadata".into(), json!({ "tool": "pickleball", "version": VERSION }));
        Value::Object(map)
    }

    fn json(&self, value: &Value) -> Result<String> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Domain(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    fn csv(&self, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        writer.write_record(header).map_err(fail)?;
        for row in rows {
            writer.write_record(row).map_err(fail)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))
    }

    /// Single-record commands: JSON as is, CSV as one `key,value` row per scalar leaf.
    fn single(&self, record: &Value) -> Result<String> {
        match self.format {
            Format::Json => self.json(record),
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", record, &mut rows);
                self.csv(&["field", "value"], &rows)
            }
        }
    }
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<Vec<String>>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
        other => rows.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn system_fields(system: ScoringSystem) -> Value {
    json!({ "system": system.kind.name(), "n": system.n })
}

fn with_fields(base: Value, extra: Value) -> Value {
    let mut map = match base {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    if let Value::Object(extra) = extra {
        map.extend(extra);
    }
    Value::Object(map)
}

fn execute(cli: &Cli) -> Result<String> {
    let em = Emitter { format: cli.format, digits: cli.digits };
    match &cli.command {
        Command::Summary { system, point, first } => summary(&em, system.system()?, &point.params()?, *first),
        Command::Advantage { system, point } => advantage(&em, system.system()?, &point.params()?),
        Command::Zeros { system, tol, step } => zeros(&em, system.system()?, tol, step),
        Command::Extremum { system, region, mode, tol, grid_step } => {
            let options =
                ExtremumOptions { grid_step: grid_step.clone(), point_tol: tol.clone(), ..ExtremumOptions::default() };
            extremum(&em, system.system()?, &SearchRegion::new(region.0.clone())?, *mode, &options)
        }
        Command::Figure { id, points, fast } => figure(&em, *id, *points, *fast),
        Command::Simulate { system, point, games, seed, first, workers } => {
            let first_server = match first {
                FirstArg::A => FirstServer::A,
                FirstArg::B => FirstServer::B,
                FirstArg::Coin => FirstServer::FairCoin,
            };
            let config = SimConfig {
                system: system.system()?,
                params: point.params()?,
                first_server,
                num_games: *games,
                seed: *seed,
                workers: *workers,
            };
            simulation(&em, &config)
        }
        Command::OracleCheck { form, points, seed, max_den } => oracle_check(&em, *form, *points, *seed, *max_den),
    }
}

fn params_fields(em: &Emitter, params: &RallyParams) -> Value {
    json!({ "p_a": em.exact(params.p_a()), "p_b": em.exact(params.p_b()) })
}

fn summary(em: &Emitter, system: ScoringSystem, params: &RallyParams, first: FirstArg) -> Result<String> {
    let fields = with_fields(system_fields(system), params_fields(em, params));
    let (fields, result) = match first {
        FirstArg::A | FirstArg::B => {
            let team = if first == FirstArg::A { Team::A } else { Team::B };
            let model = TransitionModel::build(system, params.clone())?;
            let start = system.initial_state(team);
            let s = chain_summary(&model, &start)?;
            let fields = with_fields(fields, json!({ "first_server": team_name(team), "start": start.to_string() }));
            let result = json!({
                "win_prob_a": em.exact(&s.absorb_prob_a),
                "win_prob_b": em.exact(&s.absorb_prob_b),
                "mean_duration": em.exact(&s.mean_duration),
                "duration_variance": em.exact(&s.duration_variance),
            });
            (fields, result)
        }
        FirstArg::Coin => {
            let row = analytics::comparison_row(system, params, em.digits_or(DEFAULT_DIGITS))?;
            (with_fields(fields, json!({ "first_server": "coin" })), comparison_json(em, &row))
        }
    };
    em.single(&em.record("summary", fields, result))
}

fn team_name(team: Team) -> &'static str {
    match team {
        Team::A => "A",
        Team::B => "B",
    }
}

fn comparison_json(em: &Emitter, row: &ComparisonRow) -> Value {
    json!({
        "win_prob_a": em.exact(&row.win_prob_a),
        "mean_duration": em.exact(&row.mean_duration),
        "duration_variance": em.exact(&row.duration_variance),
        "sd_duration": row.sd_duration,
    })
}

fn advantage(em: &Emitter, system: ScoringSystem, params: &RallyParams) -> Result<String> {
    let r = first_server_advantage(system, params)?;
    let result = json!({
        "value": em.advantage(&r.value),
        "sign": r.sign,
        "win_prob_a_if_a_first": em.exact(&r.win_a_first),
        "win_prob_a_if_b_first": em.exact(&r.win_b_first),
    });
    let fields = with_fields(system_fields(system), params_fields(em, params));
    em.single(&em.record("advantage", fields, result))
}

fn zeros(em: &Emitter, system: ScoringSystem, tol: &Rational, step: &Rational) -> Result<String> {
    let set = find_diagonal_zeros_with(system, tol, step, Execution::default())?;
    let digits = em.digits_or(6);
    match em.format {
        Format::Json => {
            let roots: Vec<Value> = set
                .roots
                .iter()
                .map(|r| {
                    json!({
                        "lo": fraction_string(&r.lo),
                        "hi": fraction_string(&r.hi),
                        "midpoint": { "exact": fraction_string(&r.midpoint()), "decimal": to_fixed(&r.midpoint(), digits) },
                        "sign_left": r.sign_left,
                        "sign_right": r.sign_right,
                    })
                })
                .collect();
            let fields = with_fields(
                system_fields(system),
                json!({ "tolerance": fraction_string(tol), "scan_step": fraction_string(&set.scan_step) }),
            );
            let result = json!({ "count": roots.len(), "roots": roots });
            em.json(&em.record("zeros", fields, result))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = set
                .roots
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    vec![
                        system.kind.name().to_string(),
                        system.n.to_string(),
                        (k + 1).to_string(),
                        to_fixed(&r.midpoint(), digits),
                        fraction_string(&r.lo),
                        fraction_string(&r.hi),
                        r.sign_left.to_string(),
                        r.sign_right.to_string(),
                    ]
                })
                .collect();
            em.csv(&["system", "n", "index", "root", "lo", "hi", "sign_left", "sign_right"], &rows)
        }
    }
}

fn extremum(
    em: &Emitter,
    system: ScoringSystem,
    region: &SearchRegion,
    mode: ModeArg,
    options: &ExtremumOptions,
) -> Result<String> {
    let mode = match mode {
        ModeArg::Min => Mode::Min,
        ModeArg::Max => Mode::Max,
    };
    let e = find_extremum(system, region, mode, options, Execution::default())?;
    let digits = em.digits_or(6);
    let coordinate = |r: &Rational| json!({ "exact": fraction_string(r), "decimal": to_fixed(r, digits) });
    let bounds = [&region.x_lo, &region.x_hi, &region.y_lo, &region.y_hi, &region.s_lo, &region.s_hi]
        .map(fraction_string)
        .join(",");
    let fields = with_fields(
        system_fields(system),
        json!({ "region": bounds, "mode": if mode == Mode::Min { "min" } else { "max" } }),
    );
    let result = json!({
        "x": coordinate(&e.x),
        "y": coordinate(&e.y),
        "value": em.advantage(&e.value),
        "evaluations": e.evaluations,
    });
    em.single(&em.record("extremum", fields, result))
}

fn simulation(em: &Emitter, config: &SimConfig) -> Result<String> {
    let est = simulate(config)?;
    let fields = with_fields(
        with_fields(system_fields(config.system), params_fields(em, &config.params)),
        json!({ "first_server": config.first_server, "games": config.num_games, "seed": config.seed }),
    );
    let result = json!({
        "games": est.games,
        "win_freq_a": est.win_freq_a,
        "mean_duration": est.mean_duration,
        "sd_duration": est.sd_duration,
        "standard_error_win": est.standard_error_win,
        "standard_error_duration": est.standard_error_duration,
    });
    let mut record = em.record("simulate", fields, result);
    record["metadata"]["seed"] = config.seed.into();
    em.single(&record)
}

fn oracle_check(em: &Emitter, id: FormId, count: usize, seed: u64, max_den: i64) -> Result<String> {
    if max_den < 2 {
        return Err(Error::Usage("max-den must be at least 2".into()));
    }
    let form = ClosedForm::load(id);
    let points = oracle::random_points(id, count, max_den, seed);
    let rows = oracle::cross_check(&form, &points, Execution::default())?;
    let mismatches: Vec<Value> = rows
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| {
            json!({
                "x": fraction_string(&r.x),
                "y": r.y.as_ref().map(fraction_string),
                "closed_form": to_scientific(&r.closed_form, 10),
                "chain": to_scientific(&r.chain, 10),
            })
        })
        .collect();
    let symmetric = if id.is_diagonal() { Value::Null } else { Value::Bool(form.coefficient_symmetry_check()?) };
    let pass = mismatches.is_empty() && symmetric != Value::Bool(false);
    let fields = json!({
        "form": id.name(),
        "system": id.system().kind.name(),
        "n": id.system().n,
        "points": count,
        "seed": seed,
        "max_denominator": max_den,
    });
    let result = json!({
        "pass": pass,
        "agreements": rows.len() - mismatches.len(),
        "mismatches": mismatches,
        "coefficients_symmetric": symmetric,
    });
    em.single(&em.record("oracle-check", fields, result))
}

fn figure(em: &Emitter, id: u8, points: Option<usize>, fast: bool) -> Result<String> {
    if points == Some(0) || points == Some(1) {
        return Err(Error::Usage("points must be at least 2".into()));
    }
    match id {
        3 | 4 => sign_grid(em, ScoringSystem::side_out(if id == 3 { 11 } else { 15 })?, points.unwrap_or(51)),
        5 => diagonal_curves(em, points.unwrap_or(201)),
        6 => {
            let (pb, pa) = analytics::win_probability_grid(points.unwrap_or(201));
            cross_sections(em, id, &pb, &pa, fast)
        }
        7 | 8 => {
            let (pb, pa) = analytics::duration_grid(points.unwrap_or(201));
            cross_sections(em, id, &pb, &pa, fast)
        }
        _ => Err(Error::Usage(format!("no figure {id}"))),
    }
}

fn figure_output(em: &Emitter, id: u8, header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    match em.format {
        Format::Csv => em.csv(header, &rows),
        Format::Json => {
            let records: Vec<Value> = rows
                .into_iter()
                .map(|row| Value::Object(header.iter().map(|h| h.to_string()).zip(row.into_iter().map(Value::String)).collect()))
                .collect();
            em.json(&em.record("figure", json!({ "id": id }), json!({ "rows": records })))
        }
    }
}

fn log_magnitude(r: &Rational) -> String {
    if num_traits::Zero::is_zero(r) {
        "-inf".to_string()
    } else {
        format!("{:.6}", log10_abs(r))
    }
}

fn sign_grid(em: &Emitter, system: ScoringSystem, points: usize) -> Result<String> {
    let grid = analytics::advantage_grid(system, points, Execution::default())?;
    let digits = em.digits_or(DEFAULT_DIGITS);
    let rows = grid
        .iter()
        .map(|r| {
            vec![
                system.kind.name().to_string(),
                system.n.to_string(),
                to_fixed(&r.p_a, digits),
                to_fixed(&r.p_b, digits),
                r.sign.to_string(),
                to_scientific(&r.value, ADVANTAGE_SIG_DIGITS),
            ]
        })
        .collect();
    figure_output(em, if system.n == 11 { 3 } else { 4 }, &["system", "n", "p_a", "p_b", "sign", "value"], rows)
}

fn diagonal_curves(em: &Emitter, points: usize) -> Result<String> {
    let systems = [
        ScoringSystem::side_out(11)?,
        ScoringSystem::side_out(15)?,
        ScoringSystem::modified_rally(21)?,
        ScoringSystem::hybrid_rally(21)?,
    ];
    let digits = em.digits_or(DEFAULT_DIGITS);
    let mut rows = Vec::new();
    for system in systems {
        for (x, value) in diagonal_curve(system, points - 1, Execution::default())? {
            rows.push(vec![
                system.kind.name().to_string(),
                system.n.to_string(),
                to_fixed(&x, digits),
                crate::rational::sign_of(&value).to_string(),
                to_scientific(&value, ADVANTAGE_SIG_DIGITS),
                log_magnitude(&value),
            ]);
        }
    }
    figure_output(em, 5, &["system", "n", "x", "sign", "value", "log10_abs"], rows)
}

fn cross_sections(em: &Emitter, id: u8, pb: &[Rational], pa: &[Rational], fast: bool) -> Result<String> {
    let systems = [ScoringSystem::side_out(11)?, ScoringSystem::modified_rally(21)?];
    let digits = em.digits_or(DEFAULT_DIGITS);
    let column = match id {
        6 => "win_prob_a",
        7 => "mean_duration",
        _ => "sd_duration",
    };
    let rows: Vec<Vec<String>> = if fast {
        let points: Vec<(ScoringSystem, Rational, Rational)> = systems
            .iter()
            .flat_map(|s| pb.iter().flat_map(move |b| pa.iter().map(move |a| (*s, a.clone(), b.clone()))))
            .collect();
        par::try_map(Execution::default(), &points, |(system, a, b)| {
            let (win, mean, sd) = comparison_row_f64(*system, &RallyParams::new(a.clone(), b.clone())?)?;
            let value = match id {
                6 => win,
                7 => mean,
                _ => sd,
            };
            Ok(vec![
                system.kind.name().to_string(),
                system.n.to_string(),
                to_fixed(b, digits),
                to_fixed(a, digits),
                format!("{value:.prec$}", prec = digits as usize),
            ])
        })?
    } else {
        cross_section_table(&systems, pb, pa, digits, Execution::default())?
            .iter()
            .map(|row| {
                let value = match id {
                    6 => to_fixed(&row.win_prob_a, digits),
                    7 => to_fixed(&row.mean_duration, digits),
                    _ => row.sd_duration.clone(),
                };
                vec![
                    row.system.kind.name().to_string(),
                    row.system.n.to_string(),
                    to_fixed(&row.p_b, digits),
                    to_fixed(&row.p_a, digits),
                    value,
                ]
            })
            .collect()
    };
    figure_output(em, id, &["system", "n", "p_b", "p_a", column], rows)
}
