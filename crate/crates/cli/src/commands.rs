use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use esz_core::acceptance::{run_criterion, Scale};
use esz_core::bounds::{bound_table, to_csv};
use esz_core::chains::{largest_convex_subset, longest_cap, longest_cup, oracle_max, DetectionReport};
use esz_core::constructions::{FreeSampler, GeneratorSpec};
use esz_core::geometry::{format_point_set, format_rational};
use esz_core::good_points::{certify_adversarially, check_certificate, find_good_point, OutcomeKind};
use esz_core::partition::{
    check_cap_extension, check_cap_extension_exhaustive, recursive_bound_check, split_upper_lower, BoundOutcome,
    EXHAUSTIVE_EXTENSION_GUARD,
};
use esz_core::projective::verify_reduction;
use esz_core::{Error, Target};
use serde_json::{json, Value};

use crate::input::{load, Loaded};
use crate::{Cli, CliError, Command, GenerateKind, Global, Outcome, Sampler};

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Analyze { file } => analyze(g, &file),
        Command::Partition { file, n, m } => partition(g, &file, n.zip(m)),
        Command::Goodpoint { file, m, l, n, trials } => goodpoint(g, &file, m, l, &n, trials),
        Command::Transform { file, n } => transform(&file, n),
        Command::Generate { kind, out } => generate(g, kind, out.as_deref()),
        Command::Bounds { n_range, csv } => bounds(&n_range, csv),
        Command::Verify { quick, only } => verify(quick, &only),
    }
}

fn ok(digest: Option<String>, results: Value, summary: String) -> Outcome {
    Outcome { digest, results, summary, failed: None }
}

fn lines_of(loaded: &Loaded, indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|&i| loaded.lines[i]).collect()
}

fn input_json(loaded: &Loaded) -> Value {
    json!({
        "size": loaded.set.len(),
        "shear": loaded.shear.as_ref().map(format_rational),
    })
}

fn analyze(g: &Global, file: &Path) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let set = &loaded.set;
    let (_, cup) = longest_cup(set);
    let (_, cap) = longest_cap(set);
    let (_, convex) = largest_convex_subset(set);
    let reports = [
        ("cup", DetectionReport::new(set, "longest_cup", cup.indices)),
        ("cap", DetectionReport::new(set, "longest_cap", cap.indices)),
        ("convex", DetectionReport::new(set, "largest_convex_subset", convex.indices)),
    ];

    let mut results = json!({ "input": input_json(&loaded) });
    let mut summary = format!("points: {}\n", set.len());
    if let Some(eps) = &loaded.shear {
        writeln!(summary, "sheared x' = x + {} y to separate equal x", format_rational(eps)).unwrap();
    }
    for (name, report) in &reports {
        let lines = lines_of(&loaded, &report.witness);
        writeln!(summary, "{:<23} {:>3}  lines {:?}", format!("{}:", report.operation), report.length, lines).unwrap();
        let mut value = serde_json::to_value(report).expect("reports serialize");
        value["source_lines"] = json!(lines);
        results[*name] = value;
    }

    if g.oracle {
        if set.len() > g.guard_size {
            return Err(Error::SizeGuard { size: set.len(), guard: g.guard_size }.into());
        }
        let mut agree = json!({});
        for ((name, report), target) in reports.iter().zip([Target::Cup, Target::Cap, Target::Convex]) {
            let (best, _) = oracle_max(set, target, g.guard_size)?;
            if best != report.length {
                return Err(CliError::Invariant(format!(
                    "{} detector found {} but enumeration found {best}",
                    name, report.length
                )));
            }
            agree[*name] = json!(best);
        }
        results["oracle"] = agree;
        summary.push_str("oracle: all three agree with enumeration\n");
    }
    Ok(ok(Some(loaded.digest), results, summary))
}

fn partition(g: &Global, file: &Path, search: Option<(usize, usize)>) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let set = &loaded.set;
    let split = split_upper_lower(set);
    let violations = check_cap_extension(set, &split);
    let mut results = json!({
        "input": input_json(&loaded),
        "partition": split,
        "violations": violations,
    });
    let mut summary = format!(
        "upper: {} points, lines {:?}\nlower: {} points, lines {:?}\nties: {}\nextension violations: {}\n",
        split.upper.len(),
        lines_of(&loaded, &split.upper),
        split.lower.len(),
        lines_of(&loaded, &split.lower),
        split.ties().count(),
        violations.len()
    );
    if g.oracle && set.len() <= EXHAUSTIVE_EXTENSION_GUARD {
        let exhaustive = check_cap_extension_exhaustive(set, &split)?;
        if exhaustive.len() != violations.len() {
            return Err(CliError::Invariant(format!(
                "edge check found {} violations, enumeration found {}",
                violations.len(),
                exhaustive.len()
            )));
        }
        results["oracle_violations"] = json!(exhaustive.len());
    }
    if let Some((n, m)) = search {
        let found = recursive_bound_check(set, n, m)?;
        let line = match &found.outcome {
            BoundOutcome::FoundCup(c) => format!("{n}-cup on lines {:?}", lines_of(&loaded, &c.indices)),
            BoundOutcome::FoundCap(c) => format!("{m}-cap on lines {:?}", lines_of(&loaded, &c.indices)),
            BoundOutcome::BelowBound => "below the bound, nothing forced".to_string(),
        };
        writeln!(summary, "recursive search ({n}, {m}): {line}").unwrap();
        results["search"] = serde_json::to_value(&found).expect("search serializes");
    }
    let failed = (!violations.is_empty()).then(|| format!("{} chains fail to extend across the split", violations.len()));
    Ok(Outcome { digest: Some(loaded.digest), results, summary, failed })
}

fn goodpoint(g: &Global, file: &Path, m: usize, l: usize, ns: &[usize], trials: u64) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let set = &loaded.set;
    let cert = find_good_point(set, m, l)?;
    check_certificate(set, &cert).map_err(|e| CliError::Invariant(format!("certificate fails its own check: {e}")))?;

    let mut summary = format!(
        "good point: index {} (line {}), base ({}, 4)\ncup: lines {:?}\nr: line {}\ncap: lines {:?}\n",
        cert.s,
        loaded.lines[cert.s],
        cert.base_m,
        lines_of(&loaded, &cert.cup_witness.indices),
        loaded.lines[cert.r_witness],
        lines_of(&loaded, &cert.property_r_witness.indices),
    );
    let mut runs = Vec::new();
    let mut refuted = 0;
    if trials > 0 {
        for &n in ns {
            let report = certify_adversarially(set, &cert, n, trials, g.seed)?;
            let counts: Vec<(OutcomeKind, usize)> = [
                OutcomeKind::LCapTwoRightmostInS,
                OutcomeKind::MCupTwoLeftmostInS,
                OutcomeKind::ConvexNGon,
                OutcomeKind::Refuted,
            ]
            .into_iter()
            .map(|k| (k, report.count(k)))
            .collect();
            refuted += report.count(OutcomeKind::Refuted);
            writeln!(
                summary,
                "n = {n}: {} trials, cap {} / cup {} / n-gon {} / refuted {}, {} exhausted",
                trials,
                counts[0].1,
                counts[1].1,
                counts[2].1,
                counts[3].1,
                report.exhausted.len()
            )
            .unwrap();
            runs.push(json!({
                "n": n,
                "trials": trials,
                "counts": counts.iter().map(|(k, c)| json!({ "kind": k, "count": c })).collect::<Vec<_>>(),
                "exhausted": report.exhausted.len(),
                "first_refutation": report.refutations().next(),
            }));
        }
    }
    let results = json!({
        "input": input_json(&loaded),
        "certificate": cert,
        "source_line": loaded.lines[cert.s],
        "adversary": runs,
    });
    let failed = (refuted > 0).then(|| format!("{refuted} adversarial trials refuted the certificate"));
    Ok(Outcome { digest: Some(loaded.digest), results, summary, failed })
}

fn transform(file: &Path, n: usize) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let report = verify_reduction(&loaded.set, n)?;
    let frame = &report.map.frame;
    let summary = format!(
        "apex: {} (line {})\nauxiliary point: {}\nmap:\n{}triples checked: {}\n{}-caps checked: {}, {}-cups checked: {}{}\nround trip exact: {}\n",
        frame.x,
        loaded.lines[frame.apex],
        frame.y,
        report.map,
        report.triples_checked,
        n - 1,
        report.caps_checked,
        n,
        report.cups_checked,
        if report.truncated { " (truncated)" } else { "" },
        report.round_trip
    );
    let results = json!({ "input": input_json(&loaded), "reduction": report });
    Ok(ok(Some(loaded.digest), results, summary))
}

fn generate(g: &Global, kind: GenerateKind, out: Option<&Path>) -> Result<Outcome, CliError> {
    let spec = match kind {
        GenerateKind::CupcapExtremal { n, m } => GeneratorSpec::CupcapExtremal { n, m },
        GenerateKind::EsLowerBound { n } => GeneratorSpec::EsLowerBound { n },
        GenerateKind::Random { count, bbox } => {
            if bbox < 2 {
                return Err(CliError::Usage(format!("--bbox must be at least 2, got {bbox}")));
            }
            GeneratorSpec::Random { count, seed: g.seed, bound: bbox }
        }
        GenerateKind::RandomFree { n_cup, m_cap, size, count, sampler } => GeneratorSpec::RandomFree {
            n_cup,
            m_cap,
            size,
            count,
            seed: g.seed,
            sampler: match sampler {
                Sampler::Uniform => FreeSampler::Uniform,
                Sampler::Structured => FreeSampler::Structured,
            },
        },
    };
    let sets = spec.generate()?;
    let header = spec.header();
    let texts: Vec<String> = sets.iter().map(|s| format_point_set(s, &header)).collect();

    let mut paths: Vec<PathBuf> = Vec::new();
    let mut summary = String::new();
    match out {
        Some(out) => {
            for (i, text) in texts.iter().enumerate() {
                let path = if texts.len() == 1 { out.to_path_buf() } else { numbered(out, i) };
                fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                writeln!(summary, "wrote {} points to {}", sets[i].len(), path.display()).unwrap();
                paths.push(path);
            }
        }
        None => {
            for (i, text) in texts.iter().enumerate() {
                if texts.len() > 1 {
                    writeln!(summary, "# set {i}").unwrap();
                }
                summary.push_str(text);
            }
        }
    }
    let results = json!({
        "generator": spec,
        "header": header,
        "sizes": sets.iter().map(|s| s.len()).collect::<Vec<_>>(),
        "paths": paths,
        "sets": if out.is_none() { json!(sets) } else { Value::Null },
    });
    Ok(ok(None, results, summary))
}

fn numbered(out: &Path, i: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "txt".into());
    out.with_file_name(format!("{stem}-{i}.{ext}"))
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("--n-range expects `a..b` or `n`, got `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(text)?;
            Ok(n..=n)
        }
    }
}

fn bounds(n_range: &str, csv: bool) -> Result<Outcome, CliError> {
    let range = parse_range(n_range)?;
    let rows = bound_table(range)?;
    let summary = if csv {
        to_csv(&rows)
    } else {
        let mut s = format!("{:>6}  {:>24}  {:>24}  ratio\n", "n", "new bound", "previous best");
        for row in &rows {
            let prev = row.prior.toth_valtr_2005.0.to_string();
            writeln!(s, "{:>6}  {:>24}  {:>24}  {}", row.n, clip(&row.new_bound.0.to_string()), clip(&prev), &row.ratio_decimal[..row.ratio_decimal.len().min(14)]).unwrap();
        }
        s
    };
    Ok(ok(None, json!({ "rows": rows }), summary))
}

/// Long integers shown by digit count in the text table; CSV and JSON keep every digit.
fn clip(digits: &str) -> String {
    if digits.len() <= 24 {
        digits.to_string()
    } else {
        format!("{}..({} digits)", &digits[..8], digits.len())
    }
}

fn verify(quick: bool, only: &[u8]) -> Result<Outcome, CliError> {
    if let Some(bad) = only.iter().find(|&&id| !(1..=10).contains(&id)) {
        return Err(CliError::Usage(format!("criteria are numbered 1 to 10, got {bad}")));
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    let scale = if quick { Scale::Quick } else { Scale::Full };
    let mut summary = String::new();
    let mut reports = Vec::new();
    for id in ids {
        let report = run_criterion(id, scale);
        summary.push_str(&report.line());
        summary.push('\n');
        reports.push(report);
    }
    let failures: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let failed = (!failures.is_empty()).then(|| format!("criteria {failures:?} failed"));
    Ok(Outcome { digest: None, results: json!({ "scale": scale, "criteria": reports }), summary, failed })
}
