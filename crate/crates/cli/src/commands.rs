use std::io::Write;
use std::path::Path;
use std::time::Instant;

use hypoexp::fit::{fit_eme_mle, StageCount};
use hypoexp::gof::{gof_test, residual_profile, GofConfig};
use hypoexp::identity::{run_verify, VerifyConfig};
use hypoexp::sample::{read_samples, write_plain};
use hypoexp::sim::{simulate_absorption_par, validate_against, StageChain};
use hypoexp::{rng, Dist, Family, Law, ParamRecord, SampleBatch};
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, DistArgs, EvalArgs, FitArgs, Format, GofArgs, SampleArgs, SimulateArgs, Sweep,
    VerifyArgs,
};
use crate::config::FileConfig;
use crate::CliError;

type Out<'a> = &'a mut dyn Write;

/// Draws per parallel simulation block.
const SIM_BLOCK: usize = 10_000;

struct Ctx {
    format: Format,
    seed: u64,
    timing: Option<Instant>,
    file: FileConfig,
}

impl Ctx {
    /// Writes a report: `text` in text mode, `value` as one JSON line otherwise.
    fn emit(&self, out: Out, text: String, mut value: Value) -> Result<(), CliError> {
        let elapsed = self.timing.map(|t| t.elapsed().as_secs_f64() * 1e3);
        let written = match self.format {
            Format::Text => {
                let suffix = elapsed.map_or(String::new(), |ms| format!("\nelapsed_ms={ms:.1}"));
                writeln!(out, "{text}{suffix}")
            }
            Format::Structured => {
                if let (Some(ms), Value::Object(map)) = (elapsed, &mut value) {
                    map.insert("elapsed_ms".into(), json!(ms));
                }
                writeln!(out, "{value}")
            }
        };
        written.map_err(|e| CliError::Core(e.into()))
    }
}

pub fn run(cli: Cli, out: Out) -> Result<(), CliError> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    let ctx = Ctx {
        format: cli.global.format.or(file.format).unwrap_or(Format::Text),
        seed: cli.global.seed.or(file.seed).unwrap_or(rng::DEFAULT_SEED),
        timing: cli.global.timing.then(Instant::now),
        file,
    };
    match cli.command {
        Command::Eval(a) => eval(&ctx, a, out),
        Command::Sample(a) => sample(&ctx, a, out),
        Command::Fit(a) => fit(&ctx, a, out),
        Command::Gof(a) => gof(&ctx, a, out),
        Command::Verify(a) => verify(&ctx, a, out),
        Command::Simulate(a) => simulate(&ctx, a, out),
    }
}

fn resolve_dist(args: &DistArgs, file: &FileConfig) -> Result<Dist, CliError> {
    let base = match &args.params {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("--params {}: {e}", path.display())))?;
            Some(
                serde_json::from_str::<ParamRecord>(&text)
                    .map_err(|e| CliError::Usage(format!("--params {}: {e}", path.display())))?,
            )
        }
        None => file.dist.clone(),
    };
    let family = match (&args.family, &base) {
        (Some(name), _) => name
            .parse::<Family>()
            .map_err(|_| CliError::Usage(format!("--dist: unknown family `{name}`")))?,
        (None, Some(rec)) => rec.family,
        (None, None) => return Err(CliError::Usage("missing --dist (or --params)".into())),
    };
    let same_family = base.as_ref().filter(|r| r.family == family);
    let rec = ParamRecord {
        family,
        n: args.n.or(same_family.and_then(|r| r.n)),
        lambda: args.lambda.or(same_family.and_then(|r| r.lambda)),
        w: args.w.or(same_family.and_then(|r| r.w)),
        rates: args
            .rates
            .clone()
            .or(same_family.and_then(|r| r.rates.clone())),
    };
    let required: &[(&str, bool)] = match family {
        Family::Exp => &[("--lambda", rec.lambda.is_some())],
        Family::Erlang => &[("--n", rec.n.is_some()), ("--lambda", rec.lambda.is_some())],
        Family::Hypo => &[("--rates", rec.rates.is_some())],
        Family::Eme => &[
            ("--n", rec.n.is_some()),
            ("--lambda", rec.lambda.is_some()),
            ("--w", rec.w.is_some()),
        ],
    };
    if let Some((flag, _)) = required.iter().find(|(_, present)| !present) {
        return Err(CliError::Usage(format!(
            "missing {flag} for --dist {}",
            family.name()
        )));
    }
    Ok(Dist::from_record(&rec)?)
}

fn eval(ctx: &Ctx, a: EvalArgs, out: Out) -> Result<(), CliError> {
    let dist = resolve_dist(&a.dist, &ctx.file)?;
    let single = a.x.len() == 1;
    for &x in &a.x {
        let pdf = dist.pdf(x)?;
        let cdf = dist.cdf(x)?;
        let text = if single {
            format!("pdf={pdf} cdf={cdf}")
        } else {
            format!("x={x} pdf={pdf} cdf={cdf}")
        };
        ctx.emit(out, text, json!({"x": x, "pdf": pdf, "cdf": cdf}))?;
    }
    Ok(())
}

fn sample(ctx: &Ctx, a: SampleArgs, out: Out) -> Result<(), CliError> {
    let dist = resolve_dist(&a.dist, &ctx.file)?;
    let count = a
        .count
        .or(ctx.file.sample.count)
        .ok_or_else(|| CliError::Usage("missing --count".into()))?;
    let mut rng = rng::stream(ctx.seed, "sample", 0);
    let batch = hypoexp::sample(&dist, count, &mut rng)?;
    match &a.out {
        Some(path) => {
            write_file(path, &batch)?;
            ctx.emit(
                out,
                format!(
                    "wrote {} values to {} (mean={} variance={})",
                    batch.len(),
                    path.display(),
                    batch.mean(),
                    batch.variance()
                ),
                json!({
                    "count": batch.len(),
                    "out": path.display().to_string(),
                    "mean": batch.mean(),
                    "variance": batch.variance(),
                    "dist": dist.to_record(),
                    "seed": ctx.seed,
                }),
            )
        }
        None => write_plain(out, &batch).map_err(CliError::Core),
    }
}

fn write_file(path: &Path, batch: &SampleBatch) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Core(hypoexp::Error::Io(format!("{}: {e}", path.display()))))?;
    let mut w = std::io::BufWriter::new(file);
    write_plain(&mut w, batch)?;
    w.flush().map_err(|e| CliError::Core(e.into()))
}

fn load_input(path: &Path, column: Option<&str>) -> Result<SampleBatch, CliError> {
    Ok(read_samples(path, column)?)
}

fn fit(ctx: &Ctx, a: FitArgs, out: Out) -> Result<(), CliError> {
    let family = a
        .family
        .parse::<Family>()
        .map_err(|_| CliError::Usage(format!("--family: unknown family `{}`", a.family)))?;
    let data = load_input(&a.input.input, a.input.column.as_deref())?;
    data.require_positive()?;
    let mean = data.mean();
    let (dist, extra) = match family {
        Family::Eme => {
            let stages = match (a.n, a.search) {
                (Some(n), None) => StageCount::Fixed(n),
                (None, Some(max)) => StageCount::SearchUpTo(max),
                _ => {
                    return Err(CliError::Usage(
                        "fit --family eme needs --n or --search".into(),
                    ))
                }
            };
            let f = fit_eme_mle(&data, stages)?;
            (Dist::Eme(f.params()?), Some(f))
        }
        Family::Exp => (Dist::Exp(hypoexp::ExpParams::new(1.0 / mean)?), None),
        Family::Erlang => {
            let n =
                a.n.ok_or_else(|| CliError::Usage("fit --family erlang needs --n".into()))?;
            (
                Dist::Erlang(hypoexp::ErlangParams::new(n, n as f64 / mean)?),
                None,
            )
        }
        Family::Hypo => {
            return Err(CliError::Usage(
                "--family hypo is not fittable; use exp, erlang or eme".into(),
            ))
        }
    };
    let loglik = match &extra {
        Some(f) => f.log_likelihood,
        None => data
            .values()
            .iter()
            .map(|&x| dist.pdf(x).map(f64::ln))
            .sum::<hypoexp::Result<f64>>()?,
    };
    let rec = dist.to_record();
    let mut text = format!("family={} ", family.name());
    if let Some(n) = rec.n {
        text += &format!("n={n} ");
    }
    if let Some(l) = rec.lambda {
        text += &format!("lambda={l} ");
    }
    if let Some(w) = rec.w {
        text += &format!("w={w} ");
    }
    text += &format!("log_likelihood={loglik} count={}", data.len());
    if let Some(f) = &extra {
        text += &format!(" iterations={}", f.iterations);
    }
    ctx.emit(
        out,
        text,
        json!({
            "params": rec,
            "log_likelihood": loglik,
            "count": data.len(),
            "iterations": extra.map(|f| f.iterations),
        }),
    )
}

fn gof(ctx: &Ctx, a: GofArgs, out: Out) -> Result<(), CliError> {
    let sec = &ctx.file.gof;
    let defaults = GofConfig::default();
    let cfg = GofConfig {
        n: a.n.or(sec.n).unwrap_or(defaults.n),
        w: a.w.or(sec.w).unwrap_or(defaults.w),
        grid_points: a
            .grid_points
            .or(sec.grid_points)
            .unwrap_or(defaults.grid_points),
        grid_decay: a
            .grid_decay
            .or(sec.grid_decay)
            .unwrap_or(defaults.grid_decay),
        bootstrap_reps: a
            .bootstrap
            .or(sec.bootstrap)
            .unwrap_or(defaults.bootstrap_reps),
        level: a.alpha.or(sec.alpha).unwrap_or(defaults.level),
        seed: ctx.seed,
    };
    let data = load_input(&a.input.input, a.input.column.as_deref())?;
    let result = gof_test(&data, &cfg)?;
    if let Some(path) = &a.residuals {
        let profile = residual_profile(&data, &cfg)?;
        let mut table = String::from("t residual\n");
        for (t, d) in profile {
            table += &format!("{t} {d}\n");
        }
        std::fs::write(path, table)
            .map_err(|e| CliError::Core(hypoexp::Error::Io(format!("{}: {e}", path.display()))))?;
    }
    ctx.emit(
        out,
        format!(
            "statistic={} p_value={} lambda_hat={} reject={} count={} n={} w={} B={} alpha={}",
            result.statistic,
            result.p_value,
            result.lambda_hat,
            result.reject,
            data.len(),
            cfg.n,
            cfg.w,
            cfg.bootstrap_reps,
            cfg.level
        ),
        json!({
            "statistic": result.statistic,
            "p_value": result.p_value,
            "lambda_hat": result.lambda_hat,
            "reject": result.reject,
            "count": data.len(),
            "config": cfg,
        }),
    )
}

fn verify(ctx: &Ctx, a: VerifyArgs, out: Out) -> Result<(), CliError> {
    let sec = &ctx.file.verify;
    let base = match a.sweep.or(sec.sweep).unwrap_or(Sweep::Default) {
        Sweep::Default => VerifyConfig::default(),
        Sweep::Quick => VerifyConfig::quick(),
    };
    let cfg = VerifyConfig {
        max_n: a.max_n.or(sec.max_n).unwrap_or(base.max_n),
        max_m: a.max_m.or(sec.max_m).unwrap_or(base.max_m),
        random_v: a.random_v.or(sec.random_v).unwrap_or(base.random_v),
        seed: ctx.seed,
    };
    let report = run_verify(&cfg)?;
    let failures = report.total_failures();
    let value = serde_json::to_value(&report).map_err(|e| CliError::Failed(e.to_string()))?;
    ctx.emit(out, report.to_string(), value)?;
    if failures > 0 {
        return Err(CliError::Failed(format!(
            "{failures} identity checks failed"
        )));
    }
    Ok(())
}

fn simulate(ctx: &Ctx, a: SimulateArgs, out: Out) -> Result<(), CliError> {
    let sec = &ctx.file.simulate;
    let stages = a
        .stages
        .or(sec.stages.clone())
        .ok_or_else(|| CliError::Usage("missing --stages".into()))?;
    let count = a
        .count
        .or(sec.count)
        .ok_or_else(|| CliError::Usage("missing --count".into()))?;
    let chain = StageChain::new(stages)?;
    let times = simulate_absorption_par(&chain, count, ctx.seed, SIM_BLOCK)?;
    if let Some(path) = &a.out {
        write_file(path, &times)?;
    }
    let mut text = format!(
        "stages={:?} count={} mean={} variance={} expected_mean={} expected_variance={}",
        chain.stage_rates(),
        times.len(),
        times.mean(),
        times.variance(),
        chain.mean(),
        chain.variance()
    );
    let mut value = json!({
        "stages": chain.stage_rates(),
        "count": times.len(),
        "mean": times.mean(),
        "variance": times.variance(),
        "expected_mean": chain.mean(),
        "expected_variance": chain.variance(),
    });
    if !a.no_validate {
        match chain.absorption_law() {
            Ok(law) => {
                let r = validate_against(times, &law)?;
                let reference = serde_json::to_string(&r.reference)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                text += &format!(
                    "\nreference={reference} ks_distance={} critical_1pct={} passed={}",
                    r.ks_distance, r.critical_value, r.passed
                );
                value["validation"] =
                    serde_json::to_value(&r).map_err(|e| CliError::Failed(e.to_string()))?;
            }
            Err(e) => {
                text += &format!("\nvalidation skipped: {e}");
                value["validation"] = Value::Null;
            }
        }
    }
    ctx.emit(out, text, value)
}
