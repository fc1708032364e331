//! Command-line front door: parse ring specs, run operations and suites,
//! emit human tables or machine JSON.
//!
//! Exit codes: 0 pass, 1 suite failure / failed verification, 2 usage error,
//! 3 cap exceeded.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use modclass::approx::{
    closure_check, construct_c1_preenvelope, module_corpus, run_suite, ClassId, SUITE_NAMES,
};
use modclass::classify::{classify, key_trick_witness};
use modclass::config::Caps;
use modclass::error::Error;
use modclass::injective::{
    indecomposable_injectives, injective_hull, is_injective, simple_modules, uniform_modules,
};
use modclass::module::{build_module, direct_sum, regular_module, FiniteModule};
use modclass::ring::{build_ring, FiniteRing, RingSpec};

const SCHEMA: &str = "modclass-report/1";

#[derive(Parser)]
#[command(
    name = "modclass",
    version,
    about = "Exact classification of finite modules: C1..C6, injectivity, hulls, preenvelopes"
)]
struct Cli {
    /// Ring spec: JSON ({"type":"zmod","n":8}) or shorthand (zmod:8, gf:4,
    /// ut2:2, ut2rel:2,2)
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Output format
    #[arg(long, global = true, default_value = "table", value_parser = ["table", "json"])]
    format: String,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Corpus size bound
    #[arg(long, global = true, default_value_t = 64)]
    bound: usize,

    /// Corpus generator bound G (quotients of R^g for g <= G)
    #[arg(long, global = true, default_value_t = 2)]
    gen_bound: usize,

    /// Module size cap (also via MODCLASS_MAX_MODULE_SIZE)
    #[arg(long, global = true)]
    module_cap: Option<usize>,

    /// Submodule lattice cap
    #[arg(long, global = true)]
    lattice_cap: Option<usize>,

    /// Hom-space enumeration cap
    #[arg(long, global = true)]
    hom_cap: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleArg {
    /// Module spec: regular, simple:i, inj:i, sum(a, b, ...), or raw JSON
    /// tables {"add": [[...]], "act": [[...]]}
    #[arg(long)]
    module: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the ring and describe it
    Ring,
    /// List the simple modules
    Simples,
    /// List the indecomposable injective modules
    Injectives,
    /// List the uniform modules up to the bound
    Uniforms,
    /// Classify a module (C1..C6, injectivity, invariants)
    Classify(ModuleArg),
    /// Compute the injective hull of a module
    Hull(ModuleArg),
    /// Enumerate the module corpus up to the bound
    Corpus,
    /// Construct and verify a C1-preenvelope of a module
    Preenvelope {
        #[command(flatten)]
        module: ModuleArg,
        /// Target class (only c1 is constructible)
        #[arg(long, default_value = "c1")]
        class: String,
    },
    /// Check closure of a class under direct sums within the bound
    Closure {
        /// Class: c1..c6 or injective
        #[arg(long)]
        class: String,
    },
    /// Run a named suite: rare, mainC1, comC1, ut2, ut2kl, key_trick, chain
    Suite { name: String },
    /// Run the key-trick construction on a non-injective module
    Keytrick(ModuleArg),
}

fn parse_ring_spec(s: &str) -> Result<RingSpec, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| format!("bad ring JSON `{s}`: {e}"));
    }
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    let nums: Vec<usize> = if rest.is_empty() {
        vec![]
    } else {
        rest.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad ring shorthand `{s}`: {e}"))?
    };
    match (head, nums.as_slice()) {
        ("zmod", [n]) => Ok(RingSpec::Zmod { n: *n }),
        ("gf", [q]) => Ok(RingSpec::Gf { q: *q }),
        ("ut2", [q]) => Ok(RingSpec::Ut2 { q: *q }),
        ("ut2rel", [q, d]) => Ok(RingSpec::Ut2Rel { q: *q, d: *d }),
        _ => Err(format!(
            "unrecognized ring shorthand `{s}` (try zmod:8, gf:4, ut2:2, ut2rel:2,2 or JSON)"
        )),
    }
}

/// Split `sum(a, b(c), d)` arguments at depth 0.
fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '}' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[derive(serde::Deserialize)]
struct RawModule {
    add: Vec<Vec<u32>>,
    act: Vec<Vec<u32>>,
}

fn parse_module(
    spec: &str,
    ring: &Arc<FiniteRing>,
    caps: &Caps,
) -> Result<Arc<FiniteModule>, Error> {
    let spec = spec.trim();
    if spec == "regular" {
        return Ok(regular_module(ring));
    }
    if let Some(i) = spec.strip_prefix("simple:") {
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad module spec `{spec}`")))?;
        let simples = simple_modules(ring, caps)?;
        return simples.get(i).cloned().ok_or_else(|| {
            Error::InvalidSpec(format!(
                "`{spec}`: only {} simple modules exist",
                simples.len()
            ))
        });
    }
    if let Some(i) = spec.strip_prefix("inj:") {
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad module spec `{spec}`")))?;
        let injs = indecomposable_injectives(ring, caps)?;
        return injs.get(i).cloned().ok_or_else(|| {
            Error::InvalidSpec(format!(
                "`{spec}`: only {} indecomposable injectives exist",
                injs.len()
            ))
        });
    }
    if let Some(inner) = spec.strip_prefix("sum(").and_then(|r| r.strip_suffix(')')) {
        let parts = split_args(inner)
            .iter()
            .map(|p| parse_module(p, ring, caps))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.is_empty() {
            return Err(Error::InvalidSpec(format!("`{spec}`: empty sum")));
        }
        return Ok(direct_sum(&parts)?.module);
    }
    if spec.starts_with('{') {
        let raw: RawModule = serde_json::from_str(spec)
            .map_err(|e| Error::InvalidSpec(format!("bad module JSON `{spec}`: {e}")))?;
        let add: Vec<u32> = raw.add.into_iter().flatten().collect();
        let act: Vec<u32> = raw.act.into_iter().flatten().collect();
        return build_module(ring.clone(), add, act, "cli".to_string());
    }
    Err(Error::InvalidSpec(format!(
        "unrecognized module spec `{spec}` (try regular, simple:0, inj:0, sum(...), or JSON)"
    )))
}

struct Run {
    ring: Arc<FiniteRing>,
    caps: Caps,
    bound: usize,
    gen_bound: usize,
    format: String,
    out: Option<std::path::PathBuf>,
}

impl Run {
    fn emit<T: Serialize>(&self, command: &str, report: &T, table: String) -> Result<(), Error> {
        let text = if self.format == "json" {
            let envelope = json!({
                "schema": SCHEMA,
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "ring": self.ring.spec,
                "caps": self.caps,
                "corpus_bound": self.bound,
                "generator_bound": self.gen_bound,
                "report": report,
            });
            serde_json::to_string_pretty(&envelope).expect("report serialization") + "\n"
        } else {
            table
        };
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::InvalidSpec(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn module_lines(ms: &[Arc<FiniteModule>], caps: &Caps) -> Result<(Vec<serde_json::Value>, String), Error> {
    let mut rows = Vec::new();
    let mut table = format!("{:>5}  {:>6}  {:>9}  label\n", "size", "length", "injective");
    for m in ms {
        let inj = is_injective(m, caps, false)?;
        table.push_str(&format!(
            "{:>5}  {:>6}  {:>9}  {}\n",
            m.size,
            m.composition_length(),
            inj,
            m.label
        ));
        rows.push(json!({
            "size": m.size,
            "length": m.composition_length(),
            "injective": inj,
            "fingerprint": m.fingerprint(),
        }));
    }
    Ok((rows, table))
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let mut caps = Caps::from_env();
    if let Some(v) = cli.module_cap {
        caps.max_module_size = v;
    }
    if let Some(v) = cli.lattice_cap {
        caps.max_lattice = v;
    }
    if let Some(v) = cli.hom_cap {
        caps.max_hom_enum = v;
    }
    let ring_str = cli
        .ring
        .as_deref()
        .ok_or_else(|| Error::InvalidSpec("--ring is required".into()))?;
    let spec = parse_ring_spec(ring_str).map_err(Error::InvalidSpec)?;
    let ring = build_ring(&spec, &caps)?;
    let run = Run {
        ring: ring.clone(),
        caps,
        bound: cli.bound,
        gen_bound: cli.gen_bound,
        format: cli.format.clone(),
        out: cli.out.clone(),
    };

    match &cli.command {
        Command::Ring => {
            let semisimple = ring.jacobson_radical().len() == 1;
            let report = json!({
                "size": ring.size,
                "characteristic": ring.characteristic,
                "commutative": ring.is_commutative(),
                "semisimple": semisimple,
                "radical_size": ring.jacobson_radical().len(),
                "units": ring.units().len(),
            });
            let table = format!(
                "ring {:?}\n  size {}  characteristic {}  commutative {}  semisimple {}  |J(R)| {}  units {}\n",
                ring.spec,
                ring.size,
                ring.characteristic,
                ring.is_commutative(),
                semisimple,
                ring.jacobson_radical().len(),
                ring.units().len()
            );
            run.emit("ring", &report, table)?;
            Ok(true)
        }
        Command::Simples => {
            let ms = simple_modules(&ring, &run.caps)?;
            let (rows, table) = module_lines(&ms, &run.caps)?;
            run.emit("simples", &rows, table)?;
            Ok(true)
        }
        Command::Injectives => {
            let ms = indecomposable_injectives(&ring, &run.caps)?;
            let (rows, table) = module_lines(&ms, &run.caps)?;
            run.emit("injectives", &rows, table)?;
            Ok(true)
        }
        Command::Uniforms => {
            let ms = uniform_modules(&ring, run.bound, &run.caps)?;
            let (rows, table) = module_lines(&ms, &run.caps)?;
            run.emit("uniforms", &rows, table)?;
            Ok(true)
        }
        Command::Classify(arg) => {
            let m = parse_module(&arg.module, &ring, &run.caps)?;
            let report = classify(&m, &run.caps)?;
            let f = &report.flags;
            let table = format!(
                "module {} (size {})\n  C1 {}  C2 {}  C3 {}  C4 {}  C5 {}  C6 {}  injective {}\n  length {}  socle {}  radical {}  uniform {}  semisimple {}  summand sizes {:?}\n",
                m.label, m.size, f.c1, f.c2, f.c3, f.c4, f.c5, f.c6, f.injective,
                report.length, report.socle_size, report.radical_size,
                report.uniform, report.semisimple, report.indecomposable_summand_sizes
            );
            run.emit("classify", &report, table)?;
            Ok(true)
        }
        Command::Hull(arg) => {
            let m = parse_module(&arg.module, &ring, &run.caps)?;
            let e = injective_hull(&m, &run.caps)?;
            let report = json!({
                "module_size": m.size,
                "hull_size": e.size,
                "hull_length": e.composition_length(),
                "hull_fingerprint": e.fingerprint(),
            });
            let table = format!(
                "E({}) has size {} and length {}\n",
                m.label,
                e.size,
                e.composition_length()
            );
            run.emit("hull", &report, table)?;
            Ok(true)
        }
        Command::Corpus => {
            let corpus = module_corpus(&ring, run.bound, run.gen_bound, &run.caps)?;
            let report = json!({
                "pool": corpus.pool_info,
                "members": corpus.members.len(),
                "member_sizes": (0..corpus.members.len())
                    .map(|k| corpus.member_sizes(k))
                    .collect::<Vec<_>>(),
            });
            let mut table = format!(
                "indecomposable pool ({} modules): {:?}\ncorpus members: {}\n",
                corpus.pool.len(),
                corpus.pool.iter().map(|p| p.size).collect::<Vec<_>>(),
                corpus.members.len()
            );
            for k in 0..corpus.members.len() {
                table.push_str(&format!("  {:?}\n", corpus.member_sizes(k)));
            }
            run.emit("corpus", &report, table)?;
            Ok(true)
        }
        Command::Preenvelope { module, class } => {
            if ClassId::parse(class) != Some(ClassId::C1) {
                return Err(Error::InvalidSpec(format!(
                    "only C1-preenvelopes are constructible, got `{class}`"
                )));
            }
            let m = parse_module(&module.module, &ring, &run.caps)?;
            let corpus = module_corpus(&ring, run.bound, run.gen_bound, &run.caps)?;
            let cert = construct_c1_preenvelope(&m, &corpus, &run.caps)?;
            let table = format!(
                "C1-preenvelope of {} (size {}): target size {} ({:?}), target C1 {}, status {:?}\n  verification pass {} over {} targets; split mono {}; minimal {:?}\n",
                m.label,
                m.size,
                cert.target_size,
                cert.target_membership.component_sizes,
                cert.target_membership.c1,
                cert.status,
                cert.verification.pass,
                cert.verification.targets_checked,
                cert.split_mono,
                cert.minimal
            );
            let pass = cert.verification.pass && cert.target_membership.c1;
            run.emit("preenvelope", &cert, table)?;
            Ok(pass)
        }
        Command::Closure { class } => {
            let class = ClassId::parse(class)
                .ok_or_else(|| Error::InvalidSpec(format!("unknown class `{class}`")))?;
            let corpus = module_corpus(&ring, run.bound, run.gen_bound, &run.caps)?;
            let report = closure_check(class, &corpus, &run.caps)?;
            let table = match &report.counterexample {
                None => format!(
                    "{} is closed under direct sums at bound {} ({} pairs)\n",
                    class.name(),
                    run.bound,
                    report.pairs_checked
                ),
                Some(p) => format!(
                    "{} is NOT closed: sum of {:?} and {:?} (size {}) leaves the class\n",
                    class.name(),
                    p.left_sizes,
                    p.right_sizes,
                    p.sum_size
                ),
            };
            run.emit("closure", &report, table)?;
            Ok(true)
        }
        Command::Suite { name } => {
            if !SUITE_NAMES.contains(&name.as_str()) && !["mainc1", "comc1"].contains(&name.as_str())
            {
                return Err(Error::InvalidSpec(format!(
                    "unknown suite `{name}` (available: {})",
                    SUITE_NAMES.join(", ")
                )));
            }
            let report = run_suite(name, &ring, run.bound, run.gen_bound, &run.caps)?;
            let mut table = format!(
                "suite {} over {:?} (bound {}, G {}): {}\n",
                report.suite,
                report.ring,
                report.corpus_bound,
                report.generator_bound,
                if report.pass { "PASS" } else { "FAIL" }
            );
            for c in &report.claims {
                table.push_str(&format!(
                    "  [{}] {}: {}\n",
                    if c.pass { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            let pass = report.pass;
            run.emit("suite", &report, table)?;
            Ok(pass)
        }
        Command::Keytrick(arg) => {
            let m = parse_module(&arg.module, &ring, &run.caps)?;
            let w = key_trick_witness(&m, &run.caps)?;
            let ok = w.a_b_are_summands
                && w.a_b_isomorphic_to_n
                && w.intersection_zero
                && w.sum_not_summand;
            let table = format!(
                "key trick on {} (size {}): M = N + E(N) has size {}\n  A,B summands {}  A,B iso N {}  A.cap.B = 0 {}  A+B not summand {}\n",
                m.label, m.size, w.m_size, w.a_b_are_summands, w.a_b_isomorphic_to_n,
                w.intersection_zero, w.sum_not_summand
            );
            run.emit("keytrick", &w, table)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SizeLimit { .. }
                | Error::LatticeTooLarge { .. }
                | Error::HomSpaceTooLarge { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
