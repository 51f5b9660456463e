//! Command-line front end. Argument parsing lives here so that the binary
//! only dispatches; every command writes to the given sinks and returns the
//! process exit code (0 success, 1 verification failure, 2 usage or
//! validation error).

use std::cmp::Ordering;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::continued_fractions::{make_context, periodic_value, KContext, Word};
use crate::cylinder_sets::{build_cylinders, CylinderSet};
use crate::error::{Error, Result};
use crate::exact_numbers::{compare_real, Rational, Rounding, Surd};
use crate::graph_builder::{build_compressed, build_gplus, build_trie, edge_bound, EdgeKind};
use crate::oracle::{lagrange_of_period, periodic_net, verify_spectrum};
use crate::spectra::{hausdorff_close, spectra_of, SpectrumApproximation, SpectrumKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Compute,
    Plotdata,
    Stats,
    Verify,
    Constants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lagrange,
    Markov,
}

impl From<KindArg> for SpectrumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lagrange => SpectrumKind::Lagrange,
            KindArg::Markov => SpectrumKind::Markov,
        }
    }
}

/// Certified approximations of the Lagrange and Markov spectra.
#[derive(Debug, Parser)]
#[command(name = "spectra", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Largest partial quotient.
    #[arg(long)]
    pub k: u32,
    /// Resolution: the output is 1/Q-close to the spectrum.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_enum, default_value = "lagrange")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Fractional digits in decimal renderings.
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
    /// Directory for cached cylinder sets.
    #[arg(long, env = "SPECTRA_CACHE")]
    pub cache: Option<PathBuf>,
    /// Longest period in the verification net.
    #[arg(long, default_value_t = 8)]
    pub maxlen: usize,
    /// Refuse to build graphs with more shift edges than this.
    #[arg(long, default_value_t = 20_000_000)]
    pub max_edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub k: u32,
    pub q: Option<u64>,
    pub kind: SpectrumKind,
    pub format: Format,
    pub digits: u32,
    pub cache_dir: Option<PathBuf>,
    pub maxlen: usize,
    pub max_edges: u64,
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            k: c.k,
            q: c.q,
            kind: c.kind.into(),
            format: c.format,
            digits: c.digits,
            cache_dir: c.cache,
            maxlen: c.maxlen,
            max_edges: c.max_edges,
        }
    }
}

impl RunConfig {
    pub fn new(command: Command, k: u32, q: Option<u64>) -> Self {
        RunConfig {
            command,
            k,
            q,
            kind: SpectrumKind::Lagrange,
            format: Format::Csv,
            digits: 10,
            cache_dir: None,
            maxlen: 8,
            max_edges: 20_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > 255 {
            return Err(Error::InvalidAlphabet(self.k));
        }
        if self.k == 1 && self.command != Command::Compute {
            return Err(Error::Config("K = 1 is only supported by `compute`".into()));
        }
        if self.command != Command::Constants {
            match self.q {
                None => return Err(Error::Config("--q is required".into())),
                Some(0) => return Err(Error::Config("--q must be positive".into())),
                Some(_) => {}
            }
        }
        if self.digits > 1000 {
            return Err(Error::Config("--digits must be at most 1000".into()));
        }
        Ok(())
    }

    fn q(&self) -> u64 {
        self.q.expect("validated")
    }
}

/// Modifies the computed set before verification; used to check that the
/// verifier catches a wrong set.
pub type Tamper<'a> = &'a dyn Fn(&mut SpectrumApproximation);

pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    run_with_hook(cfg, out, err, None)
}

pub fn run_with_hook(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write, tamper: Option<Tamper<'_>>) -> i32 {
    let result = cfg.validate().and_then(|()| match cfg.command {
        Command::Compute => cmd_compute(cfg, out).map(|()| 0),
        Command::Plotdata => cmd_plotdata(cfg, out).map(|()| 0),
        Command::Stats => cmd_stats(cfg, out).map(|()| 0),
        Command::Verify => cmd_verify(cfg, out, tamper),
        Command::Constants => cmd_constants(cfg, out).map(|()| 0),
    });
    let flushed = out.flush();
    match result.and_then(|code| flushed.map(|()| code).map_err(Error::from)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn cache_path(dir: &Path, k: u8, q: u64) -> PathBuf {
    dir.join(format!("cylinders-k{k}-q{q}.txt"))
}

/// Builds `C_{K,Q}`, going through the cache directory when one is configured.
pub fn load_cylinders(ctx: &KContext, q: u64, cache_dir: Option<&Path>) -> Result<CylinderSet> {
    let Some(dir) = cache_dir else {
        return build_cylinders(ctx, q);
    };
    let path = cache_path(dir, ctx.k(), q);
    if path.exists() {
        let file = File::open(&path)?;
        return CylinderSet::read_cache(ctx, q, BufReader::new(file));
    }
    let cs = build_cylinders(ctx, q)?;
    if ctx.k() <= 9 {
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        let mut w = BufWriter::new(File::create(&tmp)?);
        cs.write_cache(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, &path)?;
    }
    Ok(cs)
}

fn setup(cfg: &RunConfig) -> Result<(KContext, CylinderSet)> {
    let ctx = make_context(cfg.k)?;
    let cs = load_cylinders(&ctx, cfg.q(), cfg.cache_dir.as_deref())?;
    let shift_edges = (cs.len() as u128).pow(2) * u128::from(cs.k());
    if shift_edges > u128::from(cfg.max_edges) {
        return Err(Error::Config(format!(
            "C_{{{},{}}} has {} cylinders, giving {shift_edges} shift edges, above --max-edges {}",
            cs.k(),
            cs.q(),
            cs.len(),
            cfg.max_edges
        )));
    }
    Ok((ctx, cs))
}

#[derive(Serialize)]
struct ExactRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    a_num: String,
    a_den: String,
    b_num: String,
    b_den: String,
    d: String,
    decimal: String,
}

fn exact_row(name: Option<String>, x: &Surd, digits: u32) -> ExactRow {
    let (a, b) = (x.rational_part(), x.irrational_part());
    ExactRow {
        name,
        a_num: a.numer().to_string(),
        a_den: a.denom().to_string(),
        b_num: b.numer().to_string(),
        b_den: b.denom().to_string(),
        d: x.radicand().to_string(),
        decimal: x.to_decimal(digits),
    }
}

fn write_rows(out: &mut dyn Write, format: Format, rows: &[ExactRow], header: &str) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{header}")?;
            for r in rows {
                if let Some(name) = &r.name {
                    write!(out, "{name},")?;
                }
                writeln!(out, "{},{},{},{},{},{}", r.a_num, r.a_den, r.b_num, r.b_den, r.d, r.decimal)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| Error::Config(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// The requested spectrum; `K = 1` has the single value `sqrt(5)`.
pub fn compute_weights(cfg: &RunConfig) -> Result<Vec<Surd>> {
    if cfg.k == 1 {
        return Ok(vec![Surd::sqrt(5)?]);
    }
    let (_, cs) = setup(cfg)?;
    let s = spectra_of(&build_compressed(&cs));
    Ok(s.get(cfg.kind).weights.clone())
}

fn cmd_compute(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let rows: Vec<ExactRow> = compute_weights(cfg)?.iter().map(|w| exact_row(None, w, cfg.digits)).collect();
    write_rows(out, cfg.format, &rows, "a_num,a_den,b_num,b_den,d,decimal")
}

/// Replaces each weight `w` by `[w - eps, w + eps]` and merges overlaps.
/// `weights` must be sorted increasingly.
pub fn fatten_and_merge(weights: &[Surd], eps: &Rational) -> Vec<(Surd, Surd)> {
    let mut merged: Vec<(Surd, Surd)> = Vec::new();
    for w in weights {
        let (lo, hi) = (w.add_rational(&-eps.clone()), w.add_rational(eps));
        match merged.last_mut() {
            Some(last) if compare_real(&lo, &last.1) != Ordering::Greater => {
                if compare_real(&hi, &last.1) == Ordering::Greater {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn cmd_plotdata(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let weights = compute_weights(cfg)?;
    let eps = Rational::new(1.into(), cfg.q().into());
    let intervals = fatten_and_merge(&weights, &eps);
    let rendered: Vec<(String, String)> = intervals
        .iter()
        .map(|(lo, hi)| {
            (lo.to_decimal_rounded(cfg.digits, Rounding::Floor), hi.to_decimal_rounded(cfg.digits, Rounding::Ceil))
        })
        .collect();
    match cfg.format {
        Format::Csv => {
            writeln!(out, "lo,hi")?;
            for (lo, hi) in rendered {
                writeln!(out, "{lo},{hi}")?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Interval {
                lo: String,
                hi: String,
            }
            let v: Vec<Interval> = rendered.into_iter().map(|(lo, hi)| Interval { lo, hi }).collect();
            serde_json::to_writer_pretty(&mut *out, &v).map_err(|e| Error::Config(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_pairs(out: &mut dyn Write, format: Format, pairs: &[(&str, String)]) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "key,value")?;
            for (k, v) in pairs {
                writeln!(out, "{k},{v}")?;
            }
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone()))).collect();
            serde_json::to_writer_pretty(&mut *out, &map).map_err(|e| Error::Config(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn cmd_stats(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let t0 = Instant::now();
    let (ctx, cs) = setup(cfg)?;
    let trie = build_trie(&cs);
    let gplus = build_gplus(&trie);
    let g = build_compressed(&cs);
    let build = t0.elapsed();
    let t1 = Instant::now();
    let s = spectra_of(&g);
    let solve = t1.elapsed();

    let n = cs.len() as f64;
    let q = cfg.q() as f64;
    let envelope = match ctx.growth() {
        Some(gc) => {
            let (lo, hi) = (gc.lower_envelope(q), gc.upper_envelope(q));
            format!("{}", lo <= n && n <= hi)
        }
        None => "n/a".into(),
    };
    let k = usize::from(cs.k());
    let shift = g.count(EdgeKind::Shift);
    let pairs: Vec<(&str, String)> = vec![
        ("k", cfg.k.to_string()),
        ("q", cfg.q().to_string()),
        ("cylinders", cs.len().to_string()),
        ("trie_nodes", cs.trie().len().to_string()),
        ("vplus_vertices", gplus.vertices().len().to_string()),
        ("gplus_prolongation_edges", gplus.count(EdgeKind::Prolongation).to_string()),
        ("gplus_shift_edges", gplus.count(EdgeKind::Shift).to_string()),
        ("product_states", (cs.len() * k * cs.trie().len()).to_string()),
        ("product_prolongation_edges", (cs.len() * k * (cs.trie().len() - 1)).to_string()),
        ("compressed_states", g.n_states().to_string()),
        ("compressed_prolongation_edges", g.count(EdgeKind::Prolongation).to_string()),
        ("shift_edges", shift.to_string()),
        ("edge_bound", format!("{:.1}", edge_bound(&cs))),
        ("edge_bound_ratio", format!("{:.4}", g.n_edges() as f64 / edge_bound(&cs))),
        ("growth_envelope_holds", envelope),
        ("lagrange_weights", s.lagrange.weights.len().to_string()),
        ("markov_weights", s.markov.weights.len().to_string()),
        ("build_seconds", format!("{:.6}", build.as_secs_f64())),
        ("solve_seconds", format!("{:.6}", solve.as_secs_f64())),
    ];
    write_pairs(out, cfg.format, &pairs)
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write, tamper: Option<Tamper<'_>>) -> Result<i32> {
    let (ctx, cs) = setup(cfg)?;
    let mut sa = spectra_of(&build_compressed(&cs)).get(cfg.kind).clone();
    if let Some(t) = tamper {
        t(&mut sa);
    }
    let net = periodic_net(&ctx, cfg.maxlen)?;
    let report = verify_spectrum(&sa, &net.values);

    let fine_cfg = RunConfig { q: Some(cfg.q() * 10), ..cfg.clone() };
    let (_, fine_cs) = setup(&fine_cfg)?;
    let fine = spectra_of(&build_compressed(&fine_cs)).get(cfg.kind).clone();
    let eps = Rational::new(1.into(), cfg.q().into()) + Rational::new(1.into(), (cfg.q() * 10).into());
    let consistent = hausdorff_close(&sa.weights, &fine.weights, &eps);

    let worst = report
        .worst
        .as_ref()
        .map_or_else(|| "none".to_string(), |(v, gap)| format!("{} (gap {gap:.3e})", v.to_decimal(cfg.digits)));
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_decimal(cfg.digits)).collect();
    let passed = report.passed() && consistent;
    let pairs: Vec<(&str, String)> = vec![
        ("k", cfg.k.to_string()),
        ("q", cfg.q().to_string()),
        ("kind", cfg.kind.to_string()),
        ("maxlen", cfg.maxlen.to_string()),
        ("certified_n", net.certified_n.map_or_else(|| "none".into(), |n| n.to_string())),
        ("net_values", report.checked.to_string()),
        ("weights", sa.weights.len().to_string()),
        ("violations", report.violations.len().to_string()),
        ("violating_values", violations.join(" ")),
        ("worst_net_value", worst),
        ("two_resolution_q", fine_cfg.q().to_string()),
        ("two_resolution_close", consistent.to_string()),
        ("result", if passed { "pass" } else { "fail" }.to_string()),
    ];
    write_pairs(out, cfg.format, &pairs)?;
    Ok(if passed { 0 } else { 1 })
}

/// Named constants for alphabet `1..=k`.
pub fn constants(k: u32) -> Result<Vec<(String, Surd)>> {
    let ctx = make_context(k)?;
    let kk = ctx.k();
    let mut rows = Vec::new();
    for j in 1..=kk {
        let w = Word::new(vec![j], kk)?;
        rows.push((format!("cf_periodic_{j}"), periodic_value(&w)?));
        rows.push((format!("lagrange_periodic_{j}"), lagrange_of_period(&w)?));
    }
    rows.push(("alpha_minus".into(), ctx.alpha_minus().clone()));
    rows.push(("alpha_plus".into(), ctx.alpha_plus().clone()));
    rows.push((format!("lagrange_periodic_1_{kk}"), lagrange_of_period(&Word::new(vec![1, kk], kk)?)?));
    Ok(rows)
}

fn cmd_constants(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let rows: Vec<ExactRow> = constants(cfg.k)?.into_iter().map(|(n, x)| exact_row(Some(n), &x, cfg.digits)).collect();
    write_rows(out, cfg.format, &rows, "name,a_num,a_den,b_num,b_den,d,decimal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(cfg: &RunConfig) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(cfg, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn merge_overlaps() {
        let w = |n: i64, d: i64| Surd::from_rational(Rational::new(n.into(), d.into()), 5).unwrap();
        let merged = fatten_and_merge(&[w(2, 1), w(2001, 1000)], &Rational::new(1.into(), 1000.into()));
        assert_eq!(merged, vec![(w(1999, 1000), w(2002, 1000))]);
        let apart = fatten_and_merge(&[w(2, 1), w(3, 1)], &Rational::new(1.into(), 1000.into()));
        assert_eq!(apart.len(), 2);
    }

    #[test]
    fn k1_compute_is_sqrt5() {
        let (code, text) = run_str(&RunConfig::new(Command::Compute, 1, Some(10)));
        assert_eq!(code, 0);
        assert_eq!(text, "a_num,a_den,b_num,b_den,d,decimal\n0,1,1,1,5,2.2360679775\n");
    }

    #[test]
    fn validation_errors_exit_2() {
        assert_eq!(run_str(&RunConfig::new(Command::Compute, 0, Some(10))).0, 2);
        assert_eq!(run_str(&RunConfig::new(Command::Compute, 2, None)).0, 2);
        assert_eq!(run_str(&RunConfig::new(Command::Stats, 1, Some(10))).0, 2);
        assert_eq!(run_str(&RunConfig::new(Command::Compute, 2, Some(2))).0, 2);
    }

    #[test]
    fn constants_rows() {
        let rows = constants(3).unwrap();
        let names: Vec<&str> = rows.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            [
                "cf_periodic_1",
                "lagrange_periodic_1",
                "cf_periodic_2",
                "lagrange_periodic_2",
                "cf_periodic_3",
                "lagrange_periodic_3",
                "alpha_minus",
                "alpha_plus",
                "lagrange_periodic_1_3"
            ]
        );
        assert_eq!(rows[8].1, Surd::sqrt(21).unwrap());
    }
}
