//! Command-line front end: one JSON config in, CSV or JSON out.
//!
//! Exit codes: `0` success, `2` configuration error, `3` solver failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cheap_talk::{pareto_compare, solve_cheap_talk_with_grid};
use crate::conditions::{
    check_full_delegation_with_grid, check_interval_with_grid, check_logconcave_with_grid, check_no_compromise_with_grid,
    check_risk_aversion_threshold_with_grid, ConditionReport, FULL_DELEGATION_GRID, LOGCONCAVE_GRID, PAIR_GRID,
};
use crate::error::Error;
use crate::interval::{solve_interval_with_grid, stitch_with_default, sweep_with_grid, LqNormal, SweepParam, SOLVE_GRID};
use crate::model::{DistributionSpec, ProposerUtility, TypeDistribution, UtilitySpec};
use crate::oracle::simplex::LinearProgram;
use crate::oracle::{
    best_delegation_exhaustive, best_delegation_sampled, best_delegation_structured, best_stochastic_lp_with,
    example_e1_menu, stochastic_lp, DiscreteInstance, GridSpec, IcConstraints, MenuSolution, StochasticSolution,
};
use crate::scalar::{linspace, Field};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
const DEFAULT_STITCH_GRID: usize = 41;

#[derive(Parser, Debug)]
#[command(name = "vetodel", version, about = "Optimal delegation in veto bargaining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (directory for the `fig2` preset); stdout if omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Grid resolution (threshold grid, condition grid, or oracle actions).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Seed for the sampled oracle.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the optimality conditions for full delegation, no compromise and
    /// the optimal interval.
    Check,
    /// Solve for the optimal interval thresholds.
    Solve,
    /// Comparative statics of the threshold in the LQ-normal family.
    Sweep {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Cheap-talk equilibria and their comparison with interval delegation.
    Cheaptalk,
    /// Brute-force oracle on a discretised instance.
    Oracle {
        /// Also write the linear program in plain text (method `lp`).
        #[arg(long)]
        lp_text: Option<PathBuf>,
    },
    /// The lottery example under a dipped density.
    ExampleE1,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Threshold against gamma at Normal(0.45, 1), 21 points.
    Fig2a,
    /// Threshold against sigma at gamma = 0, mu = 0.45, 21 points.
    Fig2b,
    /// Both panels, written as `fig2a` and `fig2b` into the `--out` directory.
    Fig2,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub utility: Option<UtilitySpec>,
    pub distribution: Option<DistributionSpec>,
    pub check: Option<CheckConfig>,
    pub solve: Option<SolveConfig>,
    pub sweep: Option<SweepConfig>,
    pub oracle: Option<OracleConfig>,
    pub example_e1: Option<E1Config>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    /// Threshold for the interval check; the solved threshold by default.
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    /// Second veto option; adds the stitched menu to the output.
    pub a_star: Option<f64>,
    pub stitch_grid: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: LqNormal<f64>,
    pub param: SweepParam,
    pub values: Option<Vec<f64>>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Exhaustive,
    #[default]
    Structured,
    Lp,
    Sampled,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcChoice {
    #[default]
    Adjacent,
    AllPairs,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub method: OracleMethod,
    pub actions: Option<usize>,
    pub types: Option<usize>,
    #[serde(default)]
    pub extra_actions: Vec<f64>,
    pub samples: Option<usize>,
    /// Solve the LP in exact rational arithmetic.
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub ic: IcChoice,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct E1Config {
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_slope")]
    pub slope: f64,
}

fn default_delta() -> f64 {
    0.05
}

fn default_slope() -> f64 {
    1.0
}

impl Default for E1Config {
    fn default() -> Self {
        Self { delta: default_delta(), slope: default_slope() }
    }
}

/// A failed run, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
        }
    }
}

fn solver(e: Error) -> CliError {
    CliError::Solver(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

/// Tagged model specs are buffered by serde, which loses the field path of
/// a type error inside them; find the offending key by its JSON type.
fn spec_field_error(root: &Value, section: &str) -> Option<String> {
    let obj = root.get(section)?.as_object()?;
    obj.iter().find_map(|(k, v)| {
        let expected = match k.as_str() {
            "family" => (!v.is_string()).then_some("a string"),
            "gamma" | "scale" | "mu" | "sigma" | "delta" | "slope" => (!v.is_number()).then_some("a number"),
            "knots" | "grid" => {
                let pairs = v.as_array().is_some_and(|a| {
                    a.iter().all(|p| p.as_array().is_some_and(|p| p.len() == 2 && p.iter().all(Value::is_number)))
                });
                (!pairs).then_some("an array of [x, y] number pairs")
            }
            _ => None,
        }?;
        Some(format!("field `{section}.{k}`: expected {expected}, got {v}"))
    })
}

/// Parses a configuration document; errors name the offending field path.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            return CliError::Config(e.into_inner().to_string());
        }
        if path == "utility" || path == "distribution" {
            if let Some(m) = serde_json::from_str::<Value>(text).ok().and_then(|v| spec_field_error(&v, &path)) {
                return CliError::Config(m);
            }
        }
        CliError::Config(format!("field `{path}`: {}", e.into_inner()))
    })
}

fn load_config(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            parse_config(&text)
        }
    }
}

fn model(cfg: &RunConfig) -> CliResult<(ProposerUtility<f64>, TypeDistribution<f64>)> {
    let u = cfg.utility.as_ref().ok_or_else(|| CliError::Config("missing field `utility`".into()))?;
    let d = cfg.distribution.as_ref().ok_or_else(|| CliError::Config("missing field `distribution`".into()))?;
    let u = u.build().map_err(|e| CliError::Config(format!("field `utility`: {e}")))?;
    let d = d.build().map_err(|e| CliError::Config(format!("field `distribution`: {e}")))?;
    Ok((u, d))
}

/// `%.12g`-style rendering.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let s = format!("{x:.*}", (11 - exp).max(0) as usize);
        trim_fraction(&s)
    } else {
        format!("{}e{}{:02}", trim_fraction(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

struct Csv(String);

impl Csv {
    fn new(header: &[&str]) -> Self {
        Csv(format!("{}\n", header.join(",")))
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.0, "{}", cells.join(","));
    }
}

fn num(x: f64) -> String {
    fmt_g(x)
}

enum Output {
    Json(Value),
    Csv(String),
}

impl Output {
    fn render(self) -> String {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("serialisable") + "\n",
            Output::Csv(s) => s,
        }
    }
}

fn emit(out: Option<&Path>, body: Output) -> CliResult<()> {
    let text = body.render();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Solver(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn report_row(csv: &mut Csv, name: &str, r: &ConditionReport<f64>) {
    csv.row(&[
        name.into(),
        r.verdict.to_string(),
        num(r.worst_margin),
        num(r.tolerance),
        r.certifies_necessity.to_string(),
        r.grid_resolution.to_string(),
    ]);
}

fn cmd_check(cfg: &RunConfig, common: &Common) -> CliResult<Output> {
    let (u, d) = model(cfg)?;
    let n = common.grid;
    let full = check_full_delegation_with_grid(&u, &d, n.unwrap_or(FULL_DELEGATION_GRID));
    let nc = match check_no_compromise_with_grid(&u, &d, n.unwrap_or(PAIR_GRID)) {
        Ok(r) => Some(r),
        Err(Error::NotLq) => None,
        Err(e) => return Err(solver(e)),
    };
    let c = match cfg.check.as_ref().and_then(|c| c.c) {
        Some(c) => c,
        None => solve_interval_with_grid(&u, &d, n.unwrap_or(SOLVE_GRID)).c_lo(),
    };
    let interval = check_interval_with_grid(&u, &d, c, n.unwrap_or(FULL_DELEGATION_GRID), n.unwrap_or(PAIR_GRID))
        .map_err(|e| CliError::Config(format!("field `check.c`: {e}")))?;
    let logc = check_logconcave_with_grid(&d, n.unwrap_or(LOGCONCAVE_GRID));
    let threshold = check_risk_aversion_threshold_with_grid(&u, &d, n.unwrap_or(LOGCONCAVE_GRID));
    Ok(match format(common, Format::Json) {
        Format::Json => Output::Json(json!({
            "full_delegation": to_json(&full),
            "no_compromise": nc.as_ref().map(to_json),
            "interval": { "c": c, "report": to_json(&interval) },
            "logconcave": to_json(&logc),
            "risk_aversion_threshold": threshold,
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["condition", "verdict", "worst_margin", "tolerance", "certifies_necessity", "grid"]);
            report_row(&mut csv, "full_delegation", &full);
            if let Some(r) = &nc {
                report_row(&mut csv, "no_compromise", r);
            }
            report_row(&mut csv, "interval", &interval);
            report_row(&mut csv, "logconcave", &logc);
            Output::Csv(csv.0)
        }
    })
}

fn format(common: &Common, default: Format) -> Format {
    common.format.unwrap_or(default)
}

fn cmd_solve(cfg: &RunConfig, common: &Common) -> CliResult<Output> {
    let (u, d) = model(cfg)?;
    let s = solve_interval_with_grid(&u, &d, common.grid.unwrap_or(SOLVE_GRID));
    let solve = cfg.solve.clone().unwrap_or_default();
    let stitched = match solve.a_star {
        Some(a) => Some(
            stitch_with_default(&u, &d, a, solve.stitch_grid.unwrap_or(DEFAULT_STITCH_GRID)).map_err(|e| match e {
                Error::BadDefault(_) => CliError::Config(format!("field `solve.a_star`: {e}")),
                e => solver(e),
            })?,
        ),
        None => None,
    };
    Ok(match format(common, Format::Json) {
        Format::Json => {
            let mut v = json!({
                "c_set": [s.c_lo(), s.c_hi()],
                "pieces": s.c_set,
                "w_star": s.w_star,
                "flat": s.flat,
                "foc_roots": s.foc_roots,
                "grid_resolution": s.grid_resolution,
            });
            if let Some(m) = stitched {
                v["stitched"] = json!({ "a_star": solve.a_star, "pieces": m.pieces() });
            }
            Output::Json(v)
        }
        Format::Csv => {
            let mut csv = Csv::new(&["c_lo", "c_hi", "w_star", "flat"]);
            for &(lo, hi) in &s.c_set {
                csv.row(&[num(lo), num(hi), num(s.w_star), s.flat.to_string()]);
            }
            Output::Csv(csv.0)
        }
    })
}

fn preset_rows(preset: Preset) -> (LqNormal<f64>, SweepParam, Vec<f64>) {
    match preset {
        Preset::Fig2a | Preset::Fig2 => {
            (LqNormal { gamma: 0.0, mu: 0.45, sigma: 1.0 }, SweepParam::Gamma, linspace(0.0, 1.0, 21))
        }
        Preset::Fig2b => {
            let sigmas = linspace(-2.0f64, 0.0, 21).into_iter().map(|e| 10f64.powf(e)).collect();
            (LqNormal { gamma: 0.0, mu: 0.45, sigma: 1.0 }, SweepParam::Sigma, sigmas)
        }
    }
}

fn sweep_output(
    base: LqNormal<f64>,
    param: SweepParam,
    values: &[f64],
    common: &Common,
) -> CliResult<Output> {
    let rows = sweep_with_grid(base, param, values, common.grid.unwrap_or(SOLVE_GRID)).map_err(|e| match e {
        Error::BadUtility(_) | Error::BadDistribution(_) => CliError::Config(format!("field `sweep`: {e}")),
        e => solver(e),
    })?;
    Ok(match format(common, Format::Csv) {
        Format::Json => Output::Json(to_json(&rows)),
        Format::Csv => {
            let mut csv = Csv::new(&["param", "c_lo", "c_hi", "w_star"]);
            for r in &rows {
                csv.row(&[num(r.param), num(r.c_lo), num(r.c_hi), num(r.w_star)]);
            }
            Output::Csv(csv.0)
        }
    })
}

fn cmd_sweep(cfg: &RunConfig, common: &Common, preset: Option<Preset>) -> CliResult<()> {
    match preset {
        Some(Preset::Fig2) => {
            let dir = common
                .out
                .as_ref()
                .ok_or_else(|| CliError::Config("the fig2 preset needs --out DIR".into()))?;
            std::fs::create_dir_all(dir).map_err(|e| CliError::Solver(format!("{}: {e}", dir.display())))?;
            let ext = match format(common, Format::Csv) {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            for (p, name) in [(Preset::Fig2a, "fig2a"), (Preset::Fig2b, "fig2b")] {
                let (base, param, values) = preset_rows(p);
                let body = sweep_output(base, param, &values, common)?;
                emit(Some(&dir.join(format!("{name}.{ext}"))), body)?;
            }
            Ok(())
        }
        Some(p) => {
            let (base, param, values) = preset_rows(p);
            emit(common.out.as_deref(), sweep_output(base, param, &values, common)?)
        }
        None => {
            let s = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("missing field `sweep` (or pass --preset)".into()))?;
            let values = match (&s.values, s.from, s.to, s.steps) {
                (Some(v), None, None, None) => v.clone(),
                (None, Some(a), Some(b), Some(n)) if n >= 2 => linspace(a, b, n),
                _ => {
                    return Err(CliError::Config(
                        "field `sweep`: give either `values` or all of `from`, `to`, `steps` (steps >= 2)".into(),
                    ))
                }
            };
            emit(common.out.as_deref(), sweep_output(s.base, s.param, &values, common)?)
        }
    }
}

fn cmd_cheaptalk(cfg: &RunConfig, common: &Common) -> CliResult<Output> {
    let (u, d) = model(cfg)?;
    let eq = solve_cheap_talk_with_grid(&u, &d, common.grid.unwrap_or(crate::cheap_talk::CHEAP_TALK_GRID));
    let (pareto, reason) = match pareto_compare(&u, &d) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::HypothesisFailed(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(solver(e)),
    };
    Ok(match format(common, Format::Json) {
        Format::Json => Output::Json(json!({
            "a_U": eq.a_u,
            "a_I": eq.a_i,
            "v_I": eq.v_i,
            "pareto": pareto.as_ref().map(to_json),
            "pareto_skipped": reason,
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["kind", "value"]);
            for &a in &eq.a_u {
                csv.row(&["a_U".into(), num(a)]);
            }
            for &a in &eq.a_i {
                csv.row(&["a_I".into(), num(a)]);
            }
            if let Some(p) = &pareto {
                csv.row(&["c_star".into(), num(p.c_star)]);
                csv.row(&["proposer_gain".into(), num(p.proposer_gain)]);
                csv.row(&["vetoer_gain_measure".into(), num(p.vetoer_gain_measure)]);
            }
            Output::Csv(csv.0)
        }
    })
}

fn menu_output<S: Field>(method: &str, s: &MenuSolution<S>, common: &Common) -> Output {
    let actions: Vec<f64> = s.actions.iter().map(|a| a.to_f64_lossy()).collect();
    let value = s.value.to_f64_lossy();
    match format(common, Format::Json) {
        Format::Json => Output::Json(json!({
            "method": method,
            "value": value,
            "menu": actions,
            "optimal_count": s.optimal_count,
            "shape": to_json(&s.shape),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["action", "value"]);
            for a in actions {
                csv.row(&[num(a), num(value)]);
            }
            Output::Csv(csv.0)
        }
    }
}

fn lp_output<S: Field>(s: &StochasticSolution<S>, common: &Common) -> Output {
    let m = &s.mechanism;
    let f = |x: &S| x.to_f64_lossy();
    match format(common, Format::Json) {
        Format::Json => Output::Json(json!({
            "method": "lp",
            "value": f(&s.value),
            "duality_gap": f(&s.duality_gap),
            "iterations": s.iterations,
            "audit": to_json(&s.audit),
            "actions": m.actions.iter().map(f).collect::<Vec<_>>(),
            "types": m.types.iter().map(f).collect::<Vec<_>>(),
            "expected_action": (0..m.types.len()).map(|i| f(&m.expected_action(i))).collect::<Vec<_>>(),
            "rows": m.rows.iter().map(|r| r.iter().map(f).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["type", "action", "probability"]);
            for (i, row) in m.rows.iter().enumerate() {
                for (k, p) in row.iter().enumerate() {
                    // skip rounding noise from the float simplex
                    if f(p).abs() > 1e-12 {
                        csv.row(&[num(f(&m.types[i])), num(f(&m.actions[k])), num(f(p))]);
                    }
                }
            }
            Output::Csv(csv.0)
        }
    }
}

fn write_lp<S: Field>(lp: &LinearProgram<S>, path: &Path) -> CliResult<()> {
    std::fs::write(path, lp.to_text()).map_err(|e| CliError::Solver(format!("{}: {e}", path.display())))
}

fn cmd_oracle(cfg: &RunConfig, common: &Common, lp_text: Option<&Path>) -> CliResult<Output> {
    let (u, d) = model(cfg)?;
    let oc = cfg.oracle.clone().unwrap_or_default();
    let mut spec = GridSpec::new(common.grid.or(oc.actions).unwrap_or(11)).with_extra_actions(&oc.extra_actions);
    if let Some(t) = oc.types {
        spec = spec.with_types(t);
    }
    let inst = DiscreteInstance::from_model(&u, &d, &spec).map_err(|e| CliError::Config(format!("field `oracle`: {e}")))?;
    let ic = match oc.ic {
        IcChoice::Adjacent => IcConstraints::Adjacent,
        IcChoice::AllPairs => IcConstraints::AllPairs,
    };
    Ok(match oc.method {
        OracleMethod::Exhaustive => menu_output("exhaustive", &best_delegation_exhaustive(&inst).map_err(solver)?, common),
        OracleMethod::Structured => menu_output("structured", &best_delegation_structured(&inst), common),
        OracleMethod::Sampled => {
            let s = best_delegation_sampled(&inst, oc.samples.unwrap_or(10_000), common.seed.unwrap_or(0));
            menu_output("sampled", &s, common)
        }
        OracleMethod::Lp if oc.exact => {
            let exact = inst.to_exact().map_err(solver)?;
            if let Some(p) = lp_text {
                write_lp(&stochastic_lp(&exact, ic).map_err(solver)?.0, p)?;
            }
            lp_output(&best_stochastic_lp_with(&exact, ic).map_err(solver)?, common)
        }
        OracleMethod::Lp => {
            if let Some(p) = lp_text {
                write_lp(&stochastic_lp(&inst, ic).map_err(solver)?.0, p)?;
            }
            lp_output(&best_stochastic_lp_with(&inst, ic).map_err(solver)?, common)
        }
    })
}

fn cmd_example_e1(cfg: &RunConfig, common: &Common) -> CliResult<Output> {
    let e = cfg.example_e1.clone().unwrap_or_default();
    let r = example_e1_menu(e.delta, e.slope).map_err(|err| match err {
        Error::BadDelta(_) => CliError::Config(format!("field `example_e1.delta`: {err}")),
        Error::BadDistribution(_) => CliError::Config(format!("field `example_e1.slope`: {err}")),
        err => solver(err),
    })?;
    Ok(match format(common, Format::Json) {
        Format::Json => Output::Json(to_json(&r)),
        Format::Csv => {
            let mut csv = Csv::new(&["delta", "slope", "p", "tail", "gain", "half_menu_loss", "residual_low", "residual_high"]);
            csv.row(&[r.delta, r.slope, r.p, r.tail, r.gain, r.half_menu_loss, r.residual_low, r.residual_high].map(num));
            Output::Csv(csv.0)
        }
    })
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    let cfg = load_config(common.config.as_deref())?;
    let out = common.out.as_deref();
    match &cli.command {
        Command::Check => emit(out, cmd_check(&cfg, common)?),
        Command::Solve => emit(out, cmd_solve(&cfg, common)?),
        Command::Sweep { preset } => cmd_sweep(&cfg, common, *preset),
        Command::Cheaptalk => emit(out, cmd_cheaptalk(&cfg, common)?),
        Command::Oracle { lp_text } => emit(out, cmd_oracle(&cfg, common, lp_text.as_deref())?),
        Command::ExampleE1 => emit(out, cmd_example_e1(&cfg, common)?),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
