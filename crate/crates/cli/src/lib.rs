//! Command-line front end for `prexp`.
//!
//! [`run`] takes the argument vector and returns the text to print together
//! with the exit code, so the binary and the tests share one code path.
//! Exit code 0 means no `FAIL` line was printed, 1 means at least one check
//! failed and 2 means the inputs could not be processed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use prexp::actions::{self, PartialActionOnSet};
use prexp::expansion::{self, ExpansionOptions};
use prexp::matrix::models::{self, MatrixModel};
use prexp::matrix::{self, io as mio, DEFAULT_TOL};
use prexp::rewriter::{self, DEFAULT_STEP_LIMIT};
use prexp::{ElemSet, InverseSemigroup, Report};

#[derive(Parser, Debug)]
#[command(name = "prexp", version, about = "Prefix expansions of finite inverse semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate S(G) and compare with the counting formula
    Expand {
        /// Cayley-table file or `builtin:<name>`
        semigroup: String,
        #[command(flatten)]
        caps: Caps,
        /// Write the Cayley table of S(G) here (element list to `<out>.elems`)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a word such as `[s][t*]` to its normal form
    Reduce {
        semigroup: String,
        word: String,
        /// Print every rewriting step
        #[arg(long)]
        trace: bool,
        /// Maximum number of rewriting steps
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        max_steps: usize,
    },
    /// Predicted order of S(G) and of its idempotents, without enumeration
    Count { semigroup: String },
    /// List the filters of G
    Filters {
        semigroup: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Run one of the checkers; exit 1 if any check fails
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Caps {
    /// Upper bound on |S(G)|
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u128,
    /// Upper bound on |G| for filter enumeration
    #[arg(long, default_value_t = actions::DEFAULT_FILTER_CAP)]
    pub filter_cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ModelInput {
    /// Bundle file or `builtin:<name>` (five, five-twisted, five-corrupt, z2, trivial)
    pub model: String,
    /// Semigroup the bundle file is graded over
    #[arg(long)]
    pub over: Option<String>,
    /// Subspace tolerance, in (0, 1e-3]
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u128,
}

#[derive(Subcommand, Debug)]
pub enum VerifyKind {
    /// Partial-homomorphism axioms and dual-prehomomorphism conditions of a map G -> H
    PartialHom {
        semigroup: String,
        target: String,
        /// Lines `s -> x` giving the image of every element of G
        map: PathBuf,
    },
    /// Both characterizations of a partial action of G on a finite set
    PartialAction { semigroup: String, action: PathBuf },
    /// Filter conditions, and the canonical partial action on the filters
    Filters {
        semigroup: String,
        /// Candidate filters such as `{e,s}`; repeatable
        #[arg(long = "set")]
        sets: Vec<String>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Concrete Fell bundle conditions, expansion to S(G) and regularity
    Fell(ModelInput),
    /// Twisted partial action from regularity data, and its expansion
    Twisted {
        #[command(flatten)]
        input: ModelInput,
        /// Multiply omega(s,t) by exp(i*theta): `s,t,theta`
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Lift a partial action of G (the canonical one by default) to S(G)
    Lift {
        semigroup: String,
        action: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
}

/// Runs the command line and returns `(output, exit code)`.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => return (e.render().to_string(), e.exit_code()),
    };
    let mut out = String::new();
    match execute(&cli.command, &mut out) {
        Ok(()) => {
            let failed = out.lines().any(|l| l.starts_with("FAIL"));
            (out, i32::from(failed))
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e:#}");
            (out, 2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `builtin:<name>` or a Cayley-table file.
pub fn load_semigroup(spec: &str) -> Result<InverseSemigroup> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return prexp::catalog::builtin(name).ok_or_else(|| anyhow!("unknown built-in semigroup `{name}`"));
    }
    Ok(InverseSemigroup::parse_cayley(&read(Path::new(spec))?)?)
}

fn load_model(input: &ModelInput) -> Result<MatrixModel> {
    if !(input.tol > 0.0 && input.tol <= 1e-3) {
        bail!("--tol must lie in (0, 1e-3]");
    }
    if let Some(name) = input.model.strip_prefix("builtin:") {
        if input.over.is_some() {
            bail!("--over applies to bundle files only");
        }
        let m = models::builtin(name).ok_or_else(|| anyhow!("unknown built-in model `{name}`"))?;
        if input.tol == DEFAULT_TOL {
            return Ok(m);
        }
        // re-read at the requested tolerance
        return Ok(mio::parse_bundle(&mio::to_doc_string(&m), m.semigroup, input.tol)?);
    }
    let over = input.over.as_deref().ok_or_else(|| anyhow!("--over <semigroup> is required for bundle files"))?;
    let g = load_semigroup(over)?;
    Ok(mio::parse_bundle(&read(Path::new(&input.model))?, g, input.tol)?)
}

/// Parses `{a,b,c}` (braces optional) into a set of elements of `g`.
pub fn parse_set(text: &str, g: &InverseSemigroup) -> Result<ElemSet> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut set = ElemSet::empty(g.len());
    for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        set.insert(g.find(tok).ok_or_else(|| anyhow!("unknown element `{tok}`"))?);
    }
    Ok(set)
}

fn parse_map(text: &str, g: &InverseSemigroup, h: &InverseSemigroup) -> Result<Vec<usize>> {
    let mut pi = vec![None; g.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = line.split_once("->").ok_or_else(|| anyhow!("line {}: expected `s -> x`", i + 1))?;
        let s = g.find(a.trim()).ok_or_else(|| anyhow!("line {}: unknown element `{}`", i + 1, a.trim()))?;
        let x = h.find(b.trim()).ok_or_else(|| anyhow!("line {}: unknown target `{}`", i + 1, b.trim()))?;
        if pi[s].replace(x).is_some() {
            bail!("line {}: `{}` mapped twice", i + 1, a.trim());
        }
    }
    pi.iter()
        .enumerate()
        .map(|(s, x)| x.ok_or_else(|| anyhow!("no image given for `{}`", g.name(s))))
        .collect()
}

fn push_report(out: &mut String, prefix: &str, report: Report) {
    let mut r = Report::new();
    r.extend_prefixed(prefix, report);
    out.push_str(&r.to_string());
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cmd: &Command, out: &mut String) -> Result<()> {
    match cmd {
        Command::Expand { semigroup, caps, out: path } => cmd_expand(semigroup, *caps, path.as_deref(), out),
        Command::Reduce { semigroup, word, trace, max_steps } => {
            let g = load_semigroup(semigroup)?;
            let w = rewriter::parse_word(word, &g)?;
            if *trace {
                let (nf, steps) = rewriter::rewrite_steps(&g, &w, *max_steps)?;
                out.push_str(&steps.to_string());
                let _ = writeln!(out, "{}", nf.render(&g));
            } else {
                let _ = writeln!(out, "{}", rewriter::reduce_to_normal_form(&g, &w).render(&g));
            }
            Ok(())
        }
        Command::Count { semigroup } => {
            let g = load_semigroup(semigroup)?;
            let c = expansion::predicted_count(&g)?;
            let _ = writeln!(out, "|G|={} predicted={} idempotents={}", g.len(), c.total, c.idempotent);
            Ok(())
        }
        Command::Filters { semigroup, caps } => {
            let g = load_semigroup(semigroup)?;
            let fs = actions::enumerate_filters_with_cap(&g, caps.filter_cap)?;
            for f in &fs {
                let _ = writeln!(out, "{}", g.set_name(f));
            }
            let _ = writeln!(out, "filters={}", fs.len());
            Ok(())
        }
        Command::Verify { kind } => cmd_verify(kind, out),
    }
}

fn cmd_expand(spec: &str, caps: Caps, path: Option<&Path>, out: &mut String) -> Result<()> {
    let g = load_semigroup(spec)?;
    let opts = ExpansionOptions { cap: caps.cap, ..ExpansionOptions::default() };
    let predicted = expansion::predicted_count(&g)?;
    let table = expansion::build_expansion_with(&g, opts)?;
    let sg = table.base();
    let idempotents = sg.idempotents().len();
    let _ = writeln!(out, "|G|={} |S(G)|={}", g.len(), table.len());
    let _ = writeln!(out, "enumerated={} predicted={} idempotents={}", table.len(), predicted.total, idempotents);
    if table.len() <= 64 {
        let names: Vec<String> = sg.elements().map(|x| sg.name(x)).collect();
        let _ = writeln!(out, "elements: {}", names.join(" "));
    }
    let (eu_g, eu_s) = (g.is_e_unitary(), sg.is_e_unitary());
    let _ = writeln!(out, "e-unitary: G={} S(G)={}", yes_no(eu_g), yes_no(eu_s));
    let mut r = Report::new();
    r.check(
        "count-matches-prediction",
        (table.len() as u128 != predicted.total).then(|| format!("{} vs {}", table.len(), predicted.total)),
    );
    r.check(
        "idempotents-match-prediction",
        (idempotents as u128 != predicted.idempotent).then(|| format!("{idempotents} vs {}", predicted.idempotent)),
    );
    r.check("e-unitary-transfer", (eu_g != eu_s).then(|| format!("G={eu_g} S(G)={eu_s}")));
    out.push_str(&r.to_string());
    if let Some(p) = path {
        std::fs::write(p, sg.to_cayley_string()).with_context(|| format!("writing {}", p.display()))?;
        let mut side = p.as_os_str().to_owned();
        side.push(".elems");
        std::fs::write(&side, table.sidecar_string()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn cmd_verify(kind: &VerifyKind, out: &mut String) -> Result<()> {
    match kind {
        VerifyKind::PartialHom { semigroup, target, map } => {
            let g = load_semigroup(semigroup)?;
            let h = load_semigroup(target)?;
            let pi = parse_map(&read(map)?, &g, &h)?;
            push_report(out, "", actions::is_partial_homomorphism(&g, &h, &pi)?);
            push_report(out, "dual-", actions::is_dual_prehomomorphism(&g, &h, &pi)?);
        }
        VerifyKind::PartialAction { semigroup, action } => {
            let g = load_semigroup(semigroup)?;
            let act = PartialActionOnSet::parse(&read(action)?, &g)?;
            push_report(out, "", actions::is_partial_action(&g, &act)?);
        }
        VerifyKind::Filters { semigroup, sets, caps } => {
            let g = load_semigroup(semigroup)?;
            let mut r = Report::new();
            for text in sets {
                let set = parse_set(text, &g)?;
                let name = format!("filter {}", g.set_name(&set));
                let (a, b) = (actions::is_filter(&g, &set), actions::is_filter_by_conditions(&g, &set));
                if a != b {
                    bail!("filter definitions disagree on {}", g.set_name(&set));
                }
                r.check(name, (!a).then(|| "not a filter".to_string()));
            }
            out.push_str(&r.to_string());
            let canon = actions::canonical_partial_action_with_cap(&g, caps.filter_cap)?;
            let _ = writeln!(out, "INFO filters {}", canon.filters.len());
            push_report(out, "canonical-", actions::is_partial_action(&g, &canon.action)?);
        }
        VerifyKind::Fell(input) => {
            let m = load_model(input)?;
            let g = &m.semigroup;
            let report = matrix::check_concrete_fell_bundle(g, &m.bundle);
            let ok = report.passed();
            push_report(out, "", report);
            if !ok {
                return Ok(());
            }
            let mut r = Report::new();
            r.check("saturated", matrix::saturation_witness(g, &m.bundle));
            out.push_str(&r.to_string());
            let table = expansion::build_expansion_with(g, ExpansionOptions { cap: input.cap, ..Default::default() })?;
            let hat = matrix::expand_bundle(&table, &m.bundle)?;
            let mut r = Report::new();
            r.pass("expanded-saturated");
            out.push_str(&r.to_string());
            push_report(out, "", matrix::check_span_refinement(&table, &m.bundle, &hat));
            if let Some(u) = &m.u {
                push_report(out, "regularity-", matrix::check_regularity(g, &m.bundle, u)?);
            }
        }
        VerifyKind::Twisted { input, perturb } => {
            let m = load_model(input)?;
            let g = &m.semigroup;
            let u = m.u.as_ref().ok_or_else(|| anyhow!("model has no regularity data"))?;
            let mut tpa = matrix::twisted_from_regular(g, &m.bundle, u)?;
            if let Some(p) = perturb {
                let parts: Vec<&str> = p.split(',').map(str::trim).collect();
                let [s, t, theta] = parts[..] else { bail!("--perturb expects `s,t,theta`") };
                let find = |x: &str| g.find(x).ok_or_else(|| anyhow!("unknown element `{x}`"));
                let theta: f64 = theta.parse().with_context(|| format!("bad angle `{theta}`"))?;
                tpa = tpa.with_omega_phase(find(s)?, find(t)?, theta);
                let _ = writeln!(out, "INFO perturbed omega({s},{t}) by exp(i*{theta})");
            }
            let report = matrix::check_twisted_partial_action(g, &tpa);
            let ok = report.passed();
            push_report(out, "", report);
            if ok {
                let table = expansion::build_expansion_with(g, ExpansionOptions { cap: input.cap, ..Default::default() })?;
                let (_, global) = matrix::twisted_global_from_partial(&table, &tpa)?;
                push_report(out, "", global);
                if perturb.is_none() {
                    let dev = matrix::twisted_round_trip_deviation(g, &m.bundle, u)?;
                    let mut r = Report::new();
                    r.check("round-trip", (dev >= 1e-8).then(|| format!("{dev:e}")));
                    out.push_str(&r.to_string());
                }
            }
        }
        VerifyKind::Lift { semigroup, action, caps } => {
            let g = load_semigroup(semigroup)?;
            let table = expansion::build_expansion_with(&g, ExpansionOptions { cap: caps.cap, ..Default::default() })?;
            match action {
                Some(path) => {
                    let act = PartialActionOnSet::parse(&read(path)?, &g)?;
                    let (_, report) = actions::lift_action(&table, &act)?;
                    push_report(out, "", report);
                }
                None => {
                    let canon = actions::canonical_partial_action_with_cap(&g, caps.filter_cap)?;
                    let (_, report) = actions::lift_action(&table, &canon.action)?;
                    push_report(out, "", report);
                    let sep = actions::separation_check(&table)?;
                    let _ = writeln!(
                        out,
                        "INFO separation elements={} filters={} distinct-lifts={}",
                        sep.elements, sep.filters, sep.distinct_lifts
                    );
                    push_report(out, "", sep.report);
                }
            }
        }
    }
    Ok(())
}
