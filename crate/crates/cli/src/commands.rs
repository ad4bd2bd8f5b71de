use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use polyiter::bracket::{self, bounds_from, check_conditions, error_bounds, ErrorBounds, Interval};
use polyiter::format::sig;
use polyiter::poly::{parse, Polynomial};
use polyiter::render::{colorize, render_with, write_ppm, BasinImage, Execution, RenderConfig, Window};
use polyiter::schemes::{Criterion, IterationScheme, StopRule};

use crate::config::{pick, pick_list, ConfigFile, Defaults};
use crate::{CliError, CompareArgs, EstimateArgs, GridArgs, RenderArgs, SolveArgs};

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn polynomial(flag: Option<&str>, file: &ConfigFile, key: &str, var: char) -> Result<Polynomial, CliError> {
    let text = flag
        .or_else(|| file.text(key))
        .ok_or_else(|| CliError::Usage(format!("missing --{key} expression")))?;
    parse(text, var).map_err(|e| CliError::Usage(format!("'{text}': {e}")))
}

/// Expands a bare scheme name with the default weights.
pub fn resolve_scheme(text: &str, alpha: f64, beta: f64, gamma: f64) -> Result<IterationScheme, CliError> {
    let full = match text.trim() {
        "picard_mann" => format!("picard_mann:{alpha}"),
        "three_step" => format!("three_step:{gamma},{beta},{alpha}"),
        "kadioglu" => format!("kadioglu:{alpha},{beta}"),
        "s" => format!("s:{alpha},{beta}"),
        t => t.to_string(),
    };
    full.parse().map_err(|e| CliError::Usage(format!("scheme '{text}': {e}")))
}

fn interval(flag: Option<&[f64]>, file: &ConfigFile) -> Result<Interval, CliError> {
    let [a, b] = match flag {
        Some(_) => pick_list(flag, file, "interval", [0.0; 2])?,
        None => file.list("interval")?.ok_or_else(|| usage("missing --interval A B"))?,
    };
    Interval::new(a, b).map_err(usage)
}

fn write_bounds(out: &mut impl Write, b: &ErrorBounds) -> std::io::Result<()> {
    writeln!(out, "error factors")?;
    writeln!(out, "  three-stage mM/((1+a)M^2 - b m^2)  {}", sig(b.three_stage))?;
    writeln!(out, "  picard-mann mM/(M^2 - a m^2)       {}", sig(b.picard_mann))?;
    writeln!(out, "  newton M/m                         {}", sig(b.slope_ratio))?;
    writeln!(out, "  newton M2/(2 m1)                   {}", sig(b.second_derivative))
}

pub fn solve(args: &SolveArgs, file: &ConfigFile, out: &mut impl Write) -> Result<(), CliError> {
    let d = Defaults::default();
    let f = polynomial(args.f.as_deref(), file, "f", args.var)?;
    let iv = interval(args.interval.as_deref(), file)?;
    let alpha = pick(args.alpha, file, "alpha", d.alpha)?;
    let beta = pick(args.beta, file, "beta", d.beta)?;
    let tol = pick(args.tol, file, "tol", 1e-12)?;
    let max_iter = pick(args.max_iter, file, "max_iter", 100)?;
    let x0 = match args.x0 {
        Some(x) => Some(x),
        None => file.get("x0")?,
    };
    let stop = StopRule::displacement(tol, max_iter).map_err(usage)?;
    let rep = bracket::solve(&f, iv, alpha, beta, &stop, x0).map_err(usage)?;

    for c in rep.conditions.violations() {
        eprintln!("warning: {c} violated; result is not certified");
    }
    if rep.left_interval {
        eprintln!("warning: iterates left the interval");
    }
    (|| -> std::io::Result<()> {
        writeln!(out, "f = {}", f.to_expr(args.var).unwrap_or_default())?;
        writeln!(out, "{}", rep.conditions)?;
        if let Some(b) = &rep.bounds {
            write_bounds(out, b)?;
        }
        writeln!(out)?;
        write!(out, "{rep}")?;
        writeln!(out)?;
        writeln!(out, "root        {}", sig(rep.root))?;
        writeln!(out, "iterations  {}", rep.iterations)?;
        writeln!(out, "converged   {}", if rep.converged { "yes" } else { "no" })?;
        writeln!(out, "certified   {}", if rep.certified { "yes" } else { "no" })
    })()
    .map_err(io_err)?;

    if let Some(e) = rep.failure {
        return Err(CliError::Failed(format!("iteration stopped: {e}")));
    }
    if !rep.converged {
        return Err(CliError::Failed(format!("no convergence within {max_iter} iterations")));
    }
    Ok(())
}

pub fn estimate(args: &EstimateArgs, file: &ConfigFile, out: &mut impl Write) -> Result<(), CliError> {
    let d = Defaults::default();
    let alpha = pick(args.alpha, file, "alpha", d.alpha)?;
    let beta = pick(args.beta, file, "beta", d.beta)?;
    let explicit = args.min_slope.is_some() || args.max_slope.is_some();
    let bounds = if explicit || file.text("min_slope").is_some() {
        let m: f64 = pick(args.min_slope, file, "min_slope", f64::NAN)?;
        let big_m: f64 = pick(args.max_slope, file, "max_slope", f64::NAN)?;
        let m2: f64 = pick(args.max_curvature, file, "max_curvature", f64::NAN)?;
        if !(m > 0.0 && big_m >= m) {
            return Err(usage("need 0 < --min-slope <= --max-slope"));
        }
        if !(2.0 * m > big_m) {
            return Err(CliError::Failed("f3 violated: 2m > M does not hold".into()));
        }
        bounds_from(m, big_m, m2, alpha, beta).map_err(usage)?
    } else {
        let f = polynomial(args.f.as_deref(), file, "f", args.var)?;
        let iv = interval(args.interval.as_deref(), file)?;
        let report = check_conditions(&f, iv).map_err(usage)?;
        writeln!(out, "{report}").map_err(io_err)?;
        match error_bounds(&report, alpha, beta) {
            Ok(b) => b,
            Err(bracket::BracketError::ConditionViolated(v)) => {
                let names: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                return Err(CliError::Failed(format!("{} violated; no error estimate", names.join(", "))));
            }
            Err(e) => return Err(usage(e)),
        }
    };
    write_bounds(out, &bounds).map_err(io_err)
}

struct Grid {
    config: RenderConfig,
    execution: Execution,
    defaults: Defaults,
}

fn grid(args: &GridArgs, file: &ConfigFile) -> Result<Grid, CliError> {
    let d = Defaults::default();
    let p = polynomial(args.p.as_deref(), file, "p", 'z')?;
    let eps = pick(args.eps, file, "eps", d.eps)?;
    let k = pick(args.k, file, "k", d.k)?;
    let [width, height] = pick_list(args.size.as_deref(), file, "size", d.size)?;
    let [re_min, re_max, im_min, im_max] = pick_list(args.window.as_deref(), file, "window", d.window)?;
    let residual = args.residual || file.get::<bool>("residual")?.unwrap_or(false);
    let sequential = args.sequential || file.get::<bool>("sequential")?.unwrap_or(false);
    let criterion = if residual { Criterion::Residual } else { Criterion::Displacement };
    let defaults = Defaults {
        alpha: pick(args.alpha, file, "alpha", d.alpha)?,
        beta: pick(args.beta, file, "beta", d.beta)?,
        gamma: pick(args.gamma, file, "gamma", d.gamma)?,
        ..d
    };
    if width == 0 || height == 0 {
        return Err(usage("--size must be positive"));
    }
    let config = RenderConfig::new(p)
        .with_size(width, height)
        .with_window(Window::new(re_min, re_max, im_min, im_max).map_err(usage)?)
        .with_stop(StopRule::new(criterion, eps, k).map_err(usage)?);
    let execution = if sequential { Execution::Sequential } else { Execution::Parallel };
    Ok(Grid { config, execution, defaults })
}

fn run(config: &RenderConfig, execution: Execution) -> Result<BasinImage, CliError> {
    render_with(config, execution).map_err(|e| CliError::Failed(e.to_string()))
}

pub fn render(args: &RenderArgs, file: &ConfigFile, out: &mut impl Write) -> Result<(), CliError> {
    let Grid { mut config, execution, defaults: d } = grid(&args.grid, file)?;
    let scheme_text = args
        .scheme
        .clone()
        .or_else(|| file.text("scheme").map(str::to_string))
        .unwrap_or_else(|| "kadioglu".to_string());
    config.scheme = resolve_scheme(&scheme_text, d.alpha, d.beta, d.gamma)?;
    let path = args
        .out
        .clone()
        .or_else(|| file.text("out").map(Into::into))
        .ok_or_else(|| usage("missing --out path"))?;

    let img = run(&config, execution)?;
    let rgb = colorize(&img, config.stop.max_iter, config.polynomial.degree());
    let sink = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_ppm(&rgb, BufWriter::new(sink)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let dump = args.dump.clone().or_else(|| file.text("dump").map(Into::into));
    if let Some(dump) = &dump {
        let sink = File::create(dump).map_err(|e| CliError::Io(format!("{}: {e}", dump.display())))?;
        let mut w = BufWriter::new(sink);
        img.write_dump(&mut w).and_then(|()| w.flush()).map_err(|e| CliError::Io(format!("{}: {e}", dump.display())))?;
    }

    let nonconverged = img.cells().len() - img.converged_count();
    (|| -> std::io::Result<()> {
        writeln!(out, "polynomial       {}", config.polynomial)?;
        writeln!(out, "scheme           {}", config.scheme)?;
        writeln!(out, "size             {}x{}", img.width(), img.height())?;
        writeln!(out, "basins found     {}", img.basins().len())?;
        writeln!(out, "mean iterations  {}", img.mean_iterations().map_or("-".to_string(), sig))?;
        writeln!(out, "non-converged    {nonconverged}")?;
        writeln!(out, "wrote            {}", path.display())
    })()
    .map_err(io_err)
}

pub fn compare(args: &CompareArgs, file: &ConfigFile, out: &mut impl Write) -> Result<(), CliError> {
    let mut texts = args.schemes.clone();
    if texts.is_empty() {
        if let Some(list) = file.text("schemes") {
            texts = list.split_whitespace().map(str::to_string).collect();
        }
    }
    if texts.is_empty() {
        return Err(usage("compare needs at least one scheme"));
    }
    let Grid { config, execution, defaults: d } = grid(&args.grid, file)?;
    let schemes: Vec<IterationScheme> =
        texts.iter().map(|t| resolve_scheme(t, d.alpha, d.beta, d.gamma)).collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let cfg = RenderConfig { scheme, ..config.clone() };
        let start = Instant::now();
        let img = run(&cfg, execution)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push((cfg.scheme.to_string(), img.mean_iterations(), img.converged_fraction(), img.basins().len(), ms));
    }
    (|| -> std::io::Result<()> {
        writeln!(out, "polynomial {}  size {}x{}", config.polynomial, config.width, config.height)?;
        writeln!(out, "{:<28} {:>16} {:>18} {:>7} {:>12}", "scheme", "mean_iterations", "converged_fraction", "basins", "wall_ms")?;
        for (name, mean, frac, basins, ms) in &rows {
            let mean = mean.map_or("-".to_string(), sig);
            writeln!(out, "{name:<28} {mean:>16} {:>18} {basins:>7} {:>12}", sig(*frac), format!("{ms:.1}"))?;
        }
        Ok(())
    })()
    .map_err(io_err)
}
