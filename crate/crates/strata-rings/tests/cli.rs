//! End-to-end tests of the command-line surface: output shapes, exit codes,
//! JSON schema round-trips, cache behavior, and determinism.

use num_bigint::BigInt;
use std::collections::HashMap;
use std::process::{Command, Output};
use strata_rings::ideals::PresentationDoc;
use strata_rings::rank::{rank_of_rows, RankConfig, SparseRow};
use strata_rings::{
    count_monomials, monomials_of_degree, real_ideal, Alphabet, Family, GeneratorId, GroundSet,
    MarkSet, Monomial, PartitionPair, Polynomial, TriplePartition,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata-rings"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_strata-rings"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn betti_both_methods_match() {
    let out = run(&[
        "betti", "--family", "real", "--ell", "4", "--method", "both",
    ]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines, vec!["1 7 20 20 7 1", "1 7 20 20 7 1", "MATCH"]);
}

#[test]
fn betti_recursion_prints_the_table_row() {
    let out = run(&[
        "betti", "--family", "complex", "--ell", "7", "--method", "recursion",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 42 127 42 1");
}

#[test]
fn betti_rejects_out_of_range_levels() {
    let out = run(&[
        "betti", "--family", "real", "--ell", "1", "--method", "recursion",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "betti", "--family", "complex", "--ell", "2", "--method", "rank",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["betti", "--family", "marsian", "--ell", "3", "--method", "rank"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--family", "real", "--ell", "3", "--checks", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_and_human_agree() {
    let human = run(&[
        "betti", "--family", "real", "--ell", "5", "--method", "recursion",
    ]);
    let json = run(&[
        "betti", "--family", "real", "--ell", "5", "--method", "recursion", "--json",
    ]);
    assert!(human.status.success() && json.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let dims: Vec<u64> = record["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    let human_dims: Vec<u64> = stdout(&human)
        .trim()
        .split(' ')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(dims, human_dims);
    assert_eq!(record["family"], "real");
    assert_eq!(record["ell"], 5);
    assert_eq!(record["method"], "recursion");
    assert_eq!(record["truncated_at"], serde_json::Value::Null);
    assert!(record["tool_version"].is_string());
    assert!(record["presentation_hash"].is_string());
}

#[test]
fn betti_both_json_is_a_two_record_array() {
    let out = run(&[
        "betti", "--family", "complex", "--ell", "5", "--method", "both", "--json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = value.as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["method"], "recursion");
    assert_eq!(records[1]["method"], "rank");
    assert_eq!(records[0]["dims"], records[1]["dims"]);
    assert_ne!(
        records[0]["presentation_hash"],
        records[1]["presentation_hash"]
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = run(&["betti", "--family", "real", "--ell", "3", "--method", "rank", "--json"]);
    let b = run(&["betti", "--family", "real", "--ell", "3", "--method", "rank", "--json"]);
    assert_eq!(out_bytes(&a), out_bytes(&b));
    let a = run(&["presentation", "--family", "real", "--ell", "3", "--json"]);
    let b = run(&["presentation", "--family", "real", "--ell", "3", "--json"]);
    assert_eq!(out_bytes(&a), out_bytes(&b));
}

fn out_bytes(out: &Output) -> &[u8] {
    assert!(out.status.success());
    &out.stdout
}

#[test]
fn presentation_small_real_level() {
    let out = run(&["presentation", "--family", "real", "--ell", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("E{1|2}"));
    assert!(text.contains("E{12|}"));
    assert!(text.contains("generators (4):"));
}

#[test]
fn presentation_complex_four_marks() {
    let out = run(&["presentation", "--family", "complex", "--ell", "4", "--json"]);
    let doc: PresentationDoc = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.alphabet.len(), 3);
    assert_eq!(doc.generators.iter().filter(|g| g.tag == "e1a").count(), 3);
    assert!(doc.generators.iter().any(|g| g.tag == "e2"));
}

#[test]
fn presentation_json_round_trips() {
    let out = run(&["presentation", "--family", "real", "--ell", "3", "--json"]);
    let text = stdout(&out);
    let doc: PresentationDoc = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(text.trim_end(), again);
}

#[test]
fn verify_checks_pass_and_fail_codes() {
    let out = run(&[
        "verify", "--family", "real", "--ell", "3", "--checks", "torsion-relation",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "torsion-relation: PASS");

    let out = run(&[
        "verify", "--family", "real", "--ell", "4", "--checks", "duality,euler,recursion-match",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 3);

    let out = run(&[
        "verify", "--family", "complex", "--ell", "4", "--checks",
        "transfer-welldef,transfer-surjective",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("PASS").count(), 2);

    // Real-only checks reject the complex family as a usage error.
    let out = run(&["verify", "--family", "complex", "--ell", "4", "--checks", "euler"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_embeds_reports() {
    let out = run(&[
        "verify", "--family", "real", "--ell", "2", "--checks",
        "transfer-welldef,h1-closed-form", "--json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = value["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["pass"] == true));
    let report = &checks[0]["detail"];
    assert_eq!(report["family"], "real");
    assert!(report["checks"].as_array().is_some());
}

#[test]
fn cache_round_trip_hit_and_stale() {
    let dir = tempfile::tempdir().unwrap();
    let dir_str = dir.path().to_str().unwrap();
    let args = [
        "betti", "--family", "real", "--ell", "3", "--method", "rank", "--json",
        "--cache-dir", dir_str,
    ];
    let first = run(&args);
    assert!(first.status.success());
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache=miss"));

    let second = run(&args);
    assert!(second.status.success());
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache=hit"));
    assert_eq!(first.stdout, second.stdout);

    // Corrupt the stored hash: the record is ignored and rewritten.
    let path = dir.path().join("betti-real-3-rank-full.json");
    let mut record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    record["presentation_hash"] = serde_json::Value::String("stale".into());
    std::fs::write(&path, serde_json::to_string_pretty(&record).unwrap()).unwrap();
    let third = run(&args);
    assert!(third.status.success());
    let err = String::from_utf8_lossy(&third.stderr).to_string();
    assert!(err.contains("stale") && err.contains("cache=miss"), "stderr: {err}");
    assert_eq!(first.stdout, third.stdout);

    // The environment variable names the cache directory as well.
    let fourth = run_env(
        &["betti", "--family", "real", "--ell", "3", "--method", "rank", "--json"],
        &[("STRATA_RINGS_CACHE", dir_str)],
    );
    assert!(String::from_utf8_lossy(&fourth.stderr).contains("cache=hit"));
}

#[test]
fn verify_reports_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let dir_str = dir.path().to_str().unwrap();
    let args = [
        "verify", "--family", "complex", "--ell", "4", "--checks", "transfer-welldef",
        "--json", "--cache-dir", dir_str,
    ];
    let first = run(&args);
    assert!(first.status.success());
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache=miss"));
    let second = run(&args);
    assert!(second.status.success());
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache=hit"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn max_degree_truncates() {
    let out = run(&[
        "betti", "--family", "real", "--ell", "4", "--method", "rank", "--max-degree", "2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 7 20");
    let out = run(&[
        "betti", "--family", "real", "--ell", "3", "--method", "rank", "--max-degree", "99",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 3 3 1");
    assert!(String::from_utf8_lossy(&out.stderr).contains("clamped"));
}

// The emitted three-mark presentation has the same Hilbert function as the
// six-generator presentation worked out with generators x_i = E{i|..},
// y_i = D{i;..|}: x_i x_j, y_i y_j, x_i y_j (i≠j), x1y1 - x2y2, x1y1 - x3y3.
#[test]
fn worked_three_mark_presentation_matches() {
    let pres = real_ideal(3).unwrap();
    let alpha = pres.alphabet().clone();
    let ground = GroundSet::integers(3).unwrap();

    let x = |i: u32| -> Polynomial {
        let rest = ground.marks().minus(MarkSet::from_values([i]));
        let gid = GeneratorId::RealE(
            PartitionPair::new(ground, MarkSet::from_values([i]), rest).unwrap(),
        );
        Polynomial::generator(&alpha, &gid).unwrap()
    };
    let y = |i: u32| -> Polynomial {
        let rest = ground.marks().minus(MarkSet::from_values([i]));
        let gid = GeneratorId::RealD(
            TriplePartition::new(ground, MarkSet::from_values([i]), rest, MarkSet::EMPTY).unwrap(),
        );
        Polynomial::generator(&alpha, &gid).unwrap()
    };

    let mut gens: Vec<Polynomial> = Vec::new();
    for i in 1..=3u32 {
        for j in i..=3u32 {
            gens.push(x(i).mul(&x(j)).unwrap());
            gens.push(y(i).mul(&y(j)).unwrap());
            if i != j {
                gens.push(x(i).mul(&y(j)).unwrap());
                gens.push(x(j).mul(&y(i)).unwrap());
            }
        }
    }
    let x1y1 = x(1).mul(&y(1)).unwrap();
    gens.push(x1y1.sub(&x(2).mul(&y(2)).unwrap()).unwrap());
    gens.push(x1y1.sub(&x(3).mul(&y(3)).unwrap()).unwrap());

    // Hilbert function of the worked six-variable ring: restrict the ambient
    // monomial basis to monomials supported on the six chosen generators.
    let mut allowed = std::collections::HashSet::new();
    for i in 1..=3u32 {
        for p in [x(i), y(i)] {
            let (m, _) = p.terms().next().unwrap();
            allowed.insert(m.exps()[0].0);
        }
    }
    assert_eq!(allowed.len(), 6);
    let supported =
        |m: &Monomial| -> bool { m.exps().iter().all(|(idx, _)| allowed.contains(idx)) };

    let cfg = RankConfig::default();
    let mut worked_dims = Vec::new();
    for d in 0..=3u32 {
        let columns: Vec<Monomial> = monomials_of_degree(&alpha, d)
            .into_iter()
            .filter(supported)
            .collect();
        let col_index: HashMap<Monomial, u32> = columns
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut rows: Vec<SparseRow> = Vec::new();
        for g in &gens {
            let gd = g.homogeneous_degree().unwrap().unwrap();
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(&alpha, d - gd).into_iter().filter(supported) {
                let p = g.mul_monomial(&m);
                let mut row: SparseRow = p
                    .terms()
                    .map(|(mono, c)| {
                        assert!(c.denom() == &BigInt::from(1));
                        (col_index[mono], c.numer().clone())
                    })
                    .collect();
                row.sort_by_key(|&(c, _)| c);
                rows.push(row);
            }
        }
        worked_dims.push(columns.len() as u64 - rank_of_rows(&rows, columns.len(), &cfg) as u64);
    }

    let ctx = strata_rings::RankContext::default();
    let ours = strata_rings::quotient_dims(Family::Real, 3, None, &ctx)
        .unwrap()
        .vector
        .dims;
    assert_eq!(worked_dims, ours);
    assert_eq!(worked_dims, vec![1, 3, 3, 1]);
    let _ = count_monomials(&alpha, 2);
    let _ = Alphabet::new(Family::Real, ground).unwrap();
}
