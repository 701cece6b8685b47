//! Command-line front end.

pub mod parse;

use std::fs;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::decide::{
    cellularity_bound, check_condition, isometric_embeds, isomorphic_embeds, szlenk_of, Answer, Certificate,
    Condition, Verdict,
};
use crate::error::{Error, Result};
use crate::funcalc::FunctionRep;
use crate::ordinal::{ExtendedOrdinal, Ordinal};
use crate::space::{derived_ext, height, ms_normal_form, perfect_kernel, Space};
use crate::synthesis::{
    composition_operator, synth_cantor_embedding, synth_cantor_surjection, synth_interval_embedding,
    synth_onepoint_embedding, synth_surjection, Operator, Region, SurjectionMap,
};
use crate::verify::{run_checks, Check, TrialConfig};

#[derive(Parser, Debug)]
#[command(name = "ckembed", version, about = "Cantor-Bendixson invariants and embeddings of C(K) spaces")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cantor-Bendixson height.
    Height { space: String },
    /// The derivative of order ORDER (an ordinal or `inf`).
    Derive { space: String, order: String },
    /// The perfect kernel.
    Kernel { space: String },
    /// Mazurkiewicz-Sierpinski normal form `I(a,m)`.
    Msnf { space: String },
    /// Szlenk index of C(K).
    Szlenk { space: String },
    /// Relative cellularity of the derivative of order ORDER, with witnesses.
    Cellularity {
        space: String,
        order: String,
        #[arg(long, default_value_t = 6)]
        cap: u64,
    },
    /// Does C(L) embed into C(K)?
    Embeds(EmbedsArgs),
    /// Conditions (ii), (iii), (iv) and the cellularity refuters.
    Conditions {
        l: String,
        k: String,
        #[arg(long)]
        assume_ch: bool,
        /// Evaluate one condition and exit with its answer.
        #[arg(long)]
        only: Option<String>,
    },
    /// Build an operator or surjection and write it as JSON.
    Synth(SynthArgs),
    /// Apply an operator to a function.
    Apply {
        /// Operator JSON file.
        #[arg(long)]
        op: String,
        /// Function JSON, inline or a file path.
        function: String,
    },
    /// Evaluate a surjection at a point of the canonical tree of its domain.
    SurjectEval {
        /// Surjection JSON file.
        #[arg(long)]
        map: String,
        point: String,
    },
    /// Run the exact property checks on an operator.
    Verify {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Comma-separated subset of linear,isometry,pnpp,positive,support,lattice,algebra.
        #[arg(long)]
        checks: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct EmbedsArgs {
    #[arg(long, conflicts_with = "isomorphic")]
    pub isometric: bool,
    #[arg(long)]
    pub isomorphic: bool,
    #[arg(long)]
    pub assume_ch: bool,
    /// Write the certificate here, if one is built.
    #[arg(long)]
    pub cert: Option<String>,
    pub l: String,
    pub k: String,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    pub space: String,
    #[arg(long, group = "kind")]
    pub embedding: bool,
    #[arg(long, group = "kind")]
    pub surjection: bool,
    /// Embedding of the sum of N copies of `[1, w^alpha]`.
    #[arg(long, group = "kind")]
    pub onepoint: Option<u64>,
    /// Cantor-set surjection (with --surjection) or embedding.
    #[arg(long)]
    pub cantor: bool,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Region selector JSON, inline or a file path.
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
}

/// What a command printed and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn answer_code(a: Answer) -> i32 {
    match a {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Independent | Answer::Unknown => 2,
    }
}

fn read_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with(['{', '[', '"']) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Json(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))
}

fn write_json(path: &str, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Json(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Json(format!("{path}: {e}")))
}

fn cert_json(c: &Certificate) -> Value {
    c.to_json()
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("{} [{}]", v.answer, v.rule);
    if let Some(Certificate::Refuter(why)) = &v.certificate {
        s.push_str(&format!(": {why}"));
    }
    s
}

fn emit_verdict(v: &Verdict, cert: Option<&str>, as_json: bool) -> Result<(i32, String)> {
    let mut written = None;
    if let (Some(path), Some(c)) = (cert, &v.certificate) {
        if !matches!(c, Certificate::Refuter(_)) {
            write_json(path, &cert_json(c))?;
            written = Some(path);
        }
    }
    let out = if as_json { v.to_json(written).to_string() } else { verdict_text(v) };
    Ok((answer_code(v.answer), out))
}

fn dispatch(cli: Cli) -> Result<(i32, String)> {
    let j = cli.json;
    let space = |s: &str| -> Result<Space> { s.parse() };
    let plain = |text: String, value: Value| if j { value.to_string() } else { text };
    match cli.command {
        Command::Height { space: s } => {
            let h = height(&space(&s)?);
            Ok((0, plain(h.to_string(), json!({ "height": h.to_string() }))))
        }
        Command::Derive { space: s, order } => {
            let o: ExtendedOrdinal = order.parse()?;
            let d = derived_ext(&space(&s)?, &o);
            Ok((0, plain(d.to_string(), json!({ "derived": d.to_string() }))))
        }
        Command::Kernel { space: s } => {
            let d = perfect_kernel(&space(&s)?);
            Ok((0, plain(d.to_string(), json!({ "kernel": d.to_string() }))))
        }
        Command::Msnf { space: s } => {
            let (a, m) = ms_normal_form(&space(&s)?)?;
            let form = Space::interval(a.clone(), m).to_string();
            Ok((0, plain(form.clone(), json!({ "form": form, "alpha": a.to_string(), "m": m }))))
        }
        Command::Szlenk { space: s } => {
            let g = szlenk_of(&space(&s)?);
            Ok((0, plain(g.value().to_string(), json!({ "szlenk": g.value().to_string() }))))
        }
        Command::Cellularity { space: s, order, cap } => {
            let o: ExtendedOrdinal = order.parse()?;
            let b = cellularity_bound(&space(&s)?, &o, cap);
            let text = format!("{} (witnessed up to {}{})", b.value, b.witness_max, if b.next_fails { ", next fails" } else { "" });
            let value = json!({ "value": b.value.to_string(), "witness_max": b.witness_max, "next_fails": b.next_fails });
            Ok((0, plain(text, value)))
        }
        Command::Embeds(a) => {
            let (l, k) = (space(&a.l)?, space(&a.k)?);
            let v = if a.isomorphic { isomorphic_embeds(&l, &k)? } else { isometric_embeds(&l, &k, a.assume_ch)? };
            emit_verdict(&v, a.cert.as_deref(), j)
        }
        Command::Conditions { l, k, assume_ch, only } => {
            let (l, k) = (space(&l)?, space(&k)?);
            if let Some(c) = only {
                let v = check_condition(c.parse::<Condition>()?, &l, &k, assume_ch);
                return emit_verdict(&v, None, j);
            }
            let all = [Condition::Ii, Condition::Iii, Condition::Iv, Condition::CellNecessary];
            let verdicts: Vec<(Condition, Verdict)> =
                all.into_iter().map(|c| (c, check_condition(c, &l, &k, assume_ch))).collect();
            let text = verdicts.iter().map(|(c, v)| format!("{c}: {}", verdict_text(v))).collect::<Vec<_>>().join("\n");
            let value: serde_json::Map<String, Value> =
                verdicts.iter().map(|(c, v)| (c.to_string(), v.to_json(None))).collect();
            Ok((0, plain(text, Value::Object(value))))
        }
        Command::Synth(a) => synth(a, j),
        Command::Apply { op, function } => {
            let t = Operator::from_json(&read_json(&op)?)?;
            let f = FunctionRep::from_json(&read_json(&function)?)?;
            Ok((0, t.apply(&f)?.to_json().to_string()))
        }
        Command::SurjectEval { map, point } => {
            let rho = SurjectionMap::from_json(&read_json(&map)?)?;
            let p = rho.eval(&point.parse()?)?;
            Ok((0, plain(p.to_string(), json!({ "image": p.to_string() }))))
        }
        Command::Verify { op, trials, seed, checks } => {
            let t = Operator::from_json(&read_json(&op)?)?;
            let checks = match checks {
                Some(list) => list.split(',').map(|c| c.trim().parse::<Check>()).collect::<Result<_>>()?,
                None => Check::ALL.into_iter().collect(),
            };
            let cfg = TrialConfig { seed, trials, checks, ..TrialConfig::default() };
            let r = run_checks(&t, &cfg);
            let code = if r.all_passed() { 0 } else { 1 };
            Ok((code, plain(r.to_string().trim_end().to_string(), r.to_json())))
        }
    }
}

fn synth(a: SynthArgs, j: bool) -> Result<(i32, String)> {
    let k: Space = a.space.parse()?;
    let region = match &a.region {
        Some(r) => Region::from_json(&read_json(r)?)?,
        None => Region::Whole,
    };
    let alpha: Ordinal = a.alpha.parse()?;
    let (doc, what) = if a.surjection {
        let rho = if a.cantor { synth_cantor_surjection(&k, &region)? } else { synth_surjection(&k, &alpha, a.m, &region)? };
        let what = format!("surjection of {} onto {}", rho.domain, rho.codomain);
        (rho.to_json(), what)
    } else {
        let t = if let Some(n) = a.onepoint {
            synth_onepoint_embedding(&k, n, &alpha)?
        } else if a.cantor {
            synth_cantor_embedding(&k, &region)?
        } else if a.embedding {
            synth_interval_embedding(&k, &alpha, a.m, &region)?
        } else {
            composition_operator(synth_surjection(&k, &alpha, a.m, &region)?)?
        };
        let what = format!("operator C({}) -> C({})", t.domain, t.codomain);
        (t.to_json(), what)
    };
    match &a.out {
        Some(path) => {
            write_json(path, &doc)?;
            Ok((0, if j { json!({ "written": path, "what": what }).to_string() } else { format!("{what} written to {path}") }))
        }
        None => Ok((0, serde_json::to_string_pretty(&doc).map_err(|e| Error::Json(e.to_string()))?)),
    }
}

/// Parses arguments and runs the command, never panicking on bad input.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: 3, stdout: String::new(), stderr: format!("error: {e}") },
    }
}
