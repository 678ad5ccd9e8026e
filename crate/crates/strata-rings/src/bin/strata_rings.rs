//! Command-line front end: Betti vectors by recursion or exact rank,
//! presentation dumps, verification suites, and a persistent result cache.
//!
//! # Rendering grammar
//!
//! Generator names are `E{J|K}`, `D{J|K}`, and `D{I;J|K}`, where each set
//! lists its marks in increasing order: concatenated digits when every mark
//! is a single digit (`D{2;13|}`), comma-separated otherwise
//! (`E{1,11|2,...}`, with the node marker rendered as `nd`). An empty set
//! renders as nothing (`E{12|}`).
//!
//! Polynomials are terms joined with `" + "` / `" - "`: each term is an
//! optional coefficient in lowest terms, `*`, and generator names joined by
//! `*` with `^e` for repeated factors, e.g. `3/2*E{1|23}^2*D{1;23|}`. Unit
//! coefficients are dropped before a generator name; the zero polynomial
//! renders as `0`.
//!
//! # Exit codes
//!
//! 0 on success, 1 on a failed check or method mismatch, 2 on usage errors
//! (including out-of-range levels and unknown check names). JSON goes to
//! stdout; logs, timing, and cache flags go to stderr.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::time::Instant;
use strata_rings::cache::{recursion_hash, BettiRecord, Cache, CacheOutcome, ReportRecord};
use strata_rings::transfer::{verify_transfer_surjective, verify_transfer_well_defined};
use strata_rings::{
    complex_betti, complex_ideal, quotient_dims, real_betti, real_h1_closed_form, real_ideal,
    torsion_free_relation, BettiVector, Error, Family, IdealPresentation, RankContext,
};

#[derive(Parser)]
#[command(name = "strata-rings", version, about = "Boundary-class presentations and Betti numbers of moduli spaces of rational curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complex,
    Real,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Complex => Family::Complex,
            FamilyArg::Real => Family::Real,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Recursion,
    Rank,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Graded Betti numbers, by closed recursion and/or exact rank
    Betti {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        ell: u32,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Truncate the computation at this cohomological degree
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        json: bool,
        /// Cache directory (overrides STRATA_RINGS_CACHE)
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// The generator alphabet and tagged ideal generators
    Presentation {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run named verification suites
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        ell: u32,
        /// Comma-separated list: duality, euler, recursion-match,
        /// torsion-relation, transfer-welldef, transfer-surjective,
        /// h1-closed-form
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        json: bool,
        /// Cache directory for transfer reports (overrides STRATA_RINGS_CACHE)
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::InvalidPartition(_) => 2,
                _ => 1,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> strata_rings::Result<i32> {
    match cli.cmd {
        Cmd::Betti {
            family,
            ell,
            method,
            max_degree,
            json,
            cache_dir,
        } => cmd_betti(family.into(), ell, method, max_degree, json, cache_dir),
        Cmd::Presentation { family, ell, json } => cmd_presentation(family.into(), ell, json),
        Cmd::Verify {
            family,
            ell,
            checks,
            max_degree,
            json,
            cache_dir,
        } => cmd_verify(family.into(), ell, &checks, max_degree, json, cache_dir),
    }
}

fn build_ideal(family: Family, ell: u32) -> strata_rings::Result<IdealPresentation> {
    match family {
        Family::Complex => complex_ideal(ell),
        Family::Real => real_ideal(ell),
    }
}

fn recursion_vector(family: Family, ell: u32, bound: Option<u32>) -> strata_rings::Result<BettiVector> {
    let mut v = match family {
        Family::Complex => complex_betti(ell)?,
        Family::Real => real_betti(ell)?,
    };
    let top = BettiVector::top_degree(family, ell);
    if let Some(b) = bound {
        if b < top {
            v.dims.truncate(b as usize + 1);
            v.truncated_at = Some(b);
        }
    }
    Ok(v)
}

fn rank_record(
    family: Family,
    ell: u32,
    bound: Option<u32>,
    cache: Option<&Cache>,
) -> strata_rings::Result<BettiRecord> {
    let start = Instant::now();
    let pres = build_ideal(family, ell)?;
    let hash = pres.content_hash();
    let key = format!(
        "betti-{family}-{ell}-rank-{}",
        bound.map_or("full".to_string(), |b| b.to_string())
    );
    if let Some(cache) = cache {
        let (payload, outcome) = cache.get(&key, &hash);
        if let Some(payload) = payload {
            let record: BettiRecord = serde_json::from_str(&payload)?;
            eprintln!(
                "elapsed_ms={} cache=hit key={key}",
                start.elapsed().as_millis()
            );
            return Ok(record);
        }
        if outcome == CacheOutcome::Stale {
            eprintln!("cache: stale record for {key}, recomputing");
        }
    }
    let ctx = RankContext::default();
    let out = strata_rings::rank::quotient_dims_over(&pres, bound, &ctx)?;
    if out.clamped {
        eprintln!(
            "warning: requested degree exceeds the top degree; clamped to {}",
            BettiVector::top_degree(family, ell)
        );
    }
    let record = BettiRecord::from_vector(&out.vector, hash);
    if let Some(cache) = cache {
        let payload = serde_json::to_string_pretty(&record)?;
        if let Err(e) = cache.put(&key, &payload) {
            eprintln!("warning: cache write failed: {e}");
        }
        eprintln!(
            "elapsed_ms={} cache=miss key={key}",
            start.elapsed().as_millis()
        );
    } else {
        eprintln!("elapsed_ms={} cache=off", start.elapsed().as_millis());
    }
    Ok(record)
}

fn dims_line(dims: &[u64]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_betti(
    family: Family,
    ell: u32,
    method: MethodArg,
    max_degree: Option<u32>,
    json: bool,
    cache_dir: Option<PathBuf>,
) -> strata_rings::Result<i32> {
    let cache = Cache::resolve(cache_dir);
    match method {
        MethodArg::Recursion => {
            let v = recursion_vector(family, ell, max_degree)?;
            let record = BettiRecord::from_vector(&v, recursion_hash(family, ell));
            if json {
                println!("{}", serde_json::to_string_pretty(&record)?);
            } else {
                println!("{}", dims_line(&record.dims));
            }
            Ok(0)
        }
        MethodArg::Rank => {
            let record = rank_record(family, ell, max_degree, cache.as_ref())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&record)?);
            } else {
                println!("{}", dims_line(&record.dims));
            }
            Ok(0)
        }
        MethodArg::Both => {
            let rec = recursion_vector(family, ell, max_degree)?;
            let rec_record = BettiRecord::from_vector(&rec, recursion_hash(family, ell));
            let rank = rank_record(family, ell, max_degree, cache.as_ref())?;
            let matched = rec_record.dims == rank.dims;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!([rec_record, rank]))?
                );
            } else {
                println!("{}", dims_line(&rec_record.dims));
                println!("{}", dims_line(&rank.dims));
                println!("{}", if matched { "MATCH" } else { "MISMATCH" });
            }
            Ok(if matched { 0 } else { 1 })
        }
    }
}

fn cmd_presentation(family: Family, ell: u32, json: bool) -> strata_rings::Result<i32> {
    let pres = build_ideal(family, ell)?;
    let doc = pres.to_doc();
    if json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("family: {}", doc.family);
        println!("ell: {}", doc.ell);
        println!("alphabet ({}):", doc.alphabet.len());
        for name in &doc.alphabet {
            println!("  {name}");
        }
        println!("generators ({}):", doc.generators.len());
        for g in &doc.generators {
            if g.indices.is_empty() {
                println!("  {}: {}", g.tag, g.poly);
            } else {
                println!("  {}[{}]: {}", g.tag, g.indices, g.poly);
            }
        }
    }
    Ok(0)
}

#[derive(serde::Serialize)]
struct VerifyCheckOut {
    check: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<serde_json::Value>,
}

const KNOWN_CHECKS: &[&str] = &[
    "duality",
    "euler",
    "recursion-match",
    "torsion-relation",
    "transfer-welldef",
    "transfer-surjective",
    "h1-closed-form",
];

fn cmd_verify(
    family: Family,
    ell: u32,
    checks: &[String],
    max_degree: Option<u32>,
    json: bool,
    cache_dir: Option<PathBuf>,
) -> strata_rings::Result<i32> {
    if checks.is_empty() {
        return Err(Error::InvalidArgument("no checks requested".into()));
    }
    for c in checks {
        if !KNOWN_CHECKS.contains(&c.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "unknown check `{c}`; known checks: {}",
                KNOWN_CHECKS.join(", ")
            )));
        }
    }
    let cache = Cache::resolve(cache_dir);
    let ctx = RankContext::default();
    let mut out = Vec::new();
    let mut all_pass = true;
    for check in checks {
        let (pass, detail) = dispatch_check(check, family, ell, max_degree, &ctx, cache.as_ref())?;
        all_pass &= pass;
        if !json {
            println!("{check}: {}", if pass { "PASS" } else { "FAIL" });
        }
        out.push(VerifyCheckOut {
            check: check.clone(),
            pass,
            detail,
        });
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "family": family.as_str(),
                "ell": ell,
                "checks": out,
            }))?
        );
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// Transfer reports are cached against the target presentation's hash; all
/// other checks are cheap enough to recompute.
fn dispatch_check(
    check: &str,
    family: Family,
    ell: u32,
    max_degree: Option<u32>,
    ctx: &RankContext,
    cache: Option<&Cache>,
) -> strata_rings::Result<(bool, Option<serde_json::Value>)> {
    let cacheable = matches!(check, "transfer-welldef" | "transfer-surjective");
    if !cacheable || cache.is_none() {
        return run_check(check, family, ell, max_degree, ctx);
    }
    let cache = cache.expect("checked above");
    let target_hash = build_ideal(family, ell + 1)?.content_hash();
    let key = format!(
        "verify-{check}-{family}-{ell}-{}",
        max_degree.map_or("full".to_string(), |b| b.to_string())
    );
    let (payload, outcome) = cache.get(&key, &target_hash);
    if let Some(payload) = payload {
        let record: ReportRecord = serde_json::from_str(&payload)?;
        eprintln!("cache=hit key={key}");
        return Ok((record.pass, Some(record.payload)));
    }
    if outcome == CacheOutcome::Stale {
        eprintln!("cache: stale record for {key}, recomputing");
    }
    let (pass, detail) = run_check(check, family, ell, max_degree, ctx)?;
    let record = ReportRecord {
        family: family.as_str().to_string(),
        ell,
        check: check.to_string(),
        degree_bound: max_degree,
        pass,
        payload: detail.clone().unwrap_or(serde_json::Value::Null),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        presentation_hash: target_hash,
    };
    if let Err(e) = cache.put(&key, &serde_json::to_string_pretty(&record)?) {
        eprintln!("warning: cache write failed: {e}");
    }
    eprintln!("cache=miss key={key}");
    Ok((pass, detail))
}

fn run_check(
    check: &str,
    family: Family,
    ell: u32,
    max_degree: Option<u32>,
    ctx: &RankContext,
) -> strata_rings::Result<(bool, Option<serde_json::Value>)> {
    match check {
        "duality" => {
            let v = recursion_vector(family, ell, None)?;
            let mut rev = v.dims.clone();
            rev.reverse();
            Ok((v.dims == rev, None))
        }
        "euler" => {
            if family != Family::Real {
                return Err(Error::InvalidArgument(
                    "euler check applies to the real family only".into(),
                ));
            }
            let v = real_betti(ell)?;
            let chi: i128 = v
                .dims
                .iter()
                .enumerate()
                .map(|(p, &d)| if p % 2 == 0 { d as i128 } else { -(d as i128) })
                .sum();
            Ok((chi == 0, Some(serde_json::json!({ "chi": chi.to_string() }))))
        }
        "recursion-match" => {
            let rec = recursion_vector(family, ell, max_degree)?;
            let rank = quotient_dims(family, ell, max_degree, ctx)?;
            let pass = rec.dims == rank.vector.dims;
            Ok((
                pass,
                Some(serde_json::json!({
                    "recursion": rec.display_dims(),
                    "rank": rank.vector.display_dims(),
                })),
            ))
        }
        "torsion-relation" => {
            if family != Family::Real {
                return Err(Error::InvalidArgument(
                    "torsion-relation check applies to the real family only".into(),
                ));
            }
            let pres = real_ideal(ell)?;
            let values: Vec<u32> = pres.ground().marks().values().collect();
            let mut pass = true;
            let mut tried = 0u32;
            for &a in &values {
                for &b in &values {
                    for &c in &values {
                        if a == b || a == c || b == c {
                            continue;
                        }
                        let rel = torsion_free_relation(pres.alphabet(), a, b, c)?;
                        tried += 1;
                        if !strata_rings::ideal_contains(&pres, &rel, ctx)? {
                            pass = false;
                        }
                    }
                }
            }
            Ok((pass, Some(serde_json::json!({ "triples": tried }))))
        }
        "transfer-welldef" => {
            let report = verify_transfer_well_defined(family, ell, max_degree, ctx)?;
            let pass = report.all_pass();
            Ok((pass, Some(serde_json::to_value(&report)?)))
        }
        "transfer-surjective" => {
            let top = BettiVector::top_degree(family, ell + 1);
            let bound = max_degree.unwrap_or(top).min(top);
            let mut pass = true;
            let mut witnesses = Vec::new();
            for d in 0..=bound {
                let (ok, witness) = verify_transfer_surjective(family, ell, d, ctx)?;
                pass &= ok;
                witnesses.push(serde_json::json!({
                    "degree": d,
                    "pass": ok,
                    "witness": witness,
                }));
            }
            Ok((pass, Some(serde_json::Value::Array(witnesses))))
        }
        "h1-closed-form" => {
            if family != Family::Real {
                return Err(Error::InvalidArgument(
                    "h1-closed-form check applies to the real family only".into(),
                ));
            }
            let closed = real_h1_closed_form(ell)?;
            let mut pass = closed == real_betti(ell)?.dims[1];
            if ell <= 4 {
                let rank = quotient_dims(family, ell, Some(1), ctx)?;
                pass &= rank.vector.dims[1] == closed;
            }
            Ok((pass, Some(serde_json::json!({ "closed_form": closed }))))
        }
        _ => unreachable!("check names validated by the caller"),
    }
}
