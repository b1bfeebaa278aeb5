use std::collections::HashSet;
use std::path::{Path, PathBuf};

use emomap_core::builder::{render_corr, render_summary, render_top_k};
use emomap_core::eval::{eval_cross_pair_named, eval_mono_named, fingerprint, render_bagged, render_table};
use emomap_core::lexicon::{write_lexicon, write_merged};
use emomap_core::stats::reference::reported_floors;
use emomap_core::stats::StatsError;
use emomap_core::{
    build, cross_corr, describe, eval_cross_bagged, intersect, isr, isr_floor, rescale, top_k, Direction,
    DirectionChoice, EvalConfig, EvalReport, FormatDescriptor, IsrFloor, IsrResult, KnnModel, MatchPolicy,
    MergedLexicon,
};

use crate::args::*;
use crate::io::{self, commit, data_err, named_path, read_gold, read_lexicon, read_model, resolve, CliError, Result};

/// Prints the resolved configuration to the diagnostic stream.
fn echo(command: &str, pairs: &[(&str, String)]) {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("emomap {command}: {}", body.join(" "));
}

fn show(path: &Path) -> String {
    path.display().to_string()
}

fn show_opt(path: &Option<PathBuf>) -> String {
    path.as_deref().map_or_else(|| "-".to_string(), show)
}

fn parse_echo(flags: &ParseFlags) -> [(&'static str, String); 2] {
    [("clamp", flags.clamp.to_string()), ("dedup", format!("{:?}", flags.dedup).to_lowercase())]
}

fn policy(flags: &MatchFlags) -> MatchPolicy {
    if flags.fold_case {
        MatchPolicy::fold_case()
    } else {
        MatchPolicy::exact()
    }
}

fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

fn report_outputs(flags: &ReportFlags, text: String, json_bytes: Vec<u8>) -> Vec<(Option<PathBuf>, Vec<u8>)> {
    let mut outputs = vec![(flags.out.clone(), text.into_bytes())];
    if let Some(path) = &flags.json {
        outputs.push((Some(path.clone()), json_bytes));
    }
    outputs
}

/// `SOURCE2TARGET` against the two format names of a gold lexicon. Format
/// names may themselves contain `2`, so every split point is tried.
fn parse_direction(spec: &str, formats: &(FormatDescriptor, FormatDescriptor)) -> Result<DirectionChoice> {
    let spec = spec.trim().to_lowercase();
    if spec == "both" {
        return Ok(DirectionChoice::Both);
    }
    let (a, b) = (formats.0.name(), formats.1.name());
    for (i, _) in spec.match_indices('2') {
        let (src, tgt) = (&spec[..i], &spec[i + 1..]);
        if src == a && tgt == b {
            return Ok(DirectionChoice::FirstToSecond);
        }
        if src == b && tgt == a {
            return Ok(DirectionChoice::SecondToFirst);
        }
    }
    Err(CliError::Usage(format!("--direction: expected both, {a}2{b} or {b}2{a}, got `{spec}`")))
}

fn single_direction(spec: &str, formats: &(FormatDescriptor, FormatDescriptor)) -> Result<Direction> {
    match parse_direction(spec, formats)? {
        DirectionChoice::FirstToSecond => Ok(Direction::FirstToSecond),
        DirectionChoice::SecondToFirst => Ok(Direction::SecondToFirst),
        DirectionChoice::Both => Err(CliError::Usage("--direction: a model maps one way; use SOURCE2TARGET".into())),
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Rescale(a) => cmd_rescale(a),
        Command::Intersect(a) => cmd_intersect(a),
        Command::Train(a) => cmd_train(a),
        Command::Map(a) => cmd_map(a),
        Command::EvalMono(a) => cmd_eval_mono(a),
        Command::EvalCross(a) => cmd_eval_cross(a),
        Command::EvalBag(a) => cmd_eval_bag(a),
        Command::Isr(a) => cmd_isr(a),
        Command::Build(a) => cmd_build(a),
        Command::ReportStats(a) => cmd_report_stats(a),
        Command::ReportTopk(a) => cmd_report_topk(a),
        Command::ReportCorr(a) => cmd_report_corr(a),
    }
}

fn cmd_rescale(a: RescaleArgs) -> Result<()> {
    let target = a.format.with_scale(a.to.0, a.to.1).map_err(|e| CliError::Usage(format!("--to: {e}")))?;
    let mut cfg = vec![
        ("input", show(&a.input)),
        ("format", a.format.to_string()),
        ("to", target.to_string()),
        ("precision", a.output.precision.to_string()),
        ("out", show_opt(&a.output.out)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("rescale", &cfg);
    let lex = read_lexicon(&a.input, &a.format, &a.parse)?;
    let out = rescale(&lex, &target).map_err(|e| data_err(&a.input, e))?;
    commit(vec![(a.output.out, write_lexicon(&out, a.output.precision.into()))])
}

fn cmd_intersect(a: IntersectArgs) -> Result<()> {
    let mut cfg = vec![
        ("first", show(&a.first)),
        ("second", show(&a.second)),
        ("format_a", a.format_a.to_string()),
        ("format_b", a.format_b.to_string()),
        ("fold_case", a.matching.fold_case.to_string()),
        ("precision", a.output.precision.to_string()),
        ("out", show_opt(&a.output.out)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("intersect", &cfg);
    let first = read_lexicon(&a.first, &a.format_a, &a.parse)?;
    let second = read_lexicon(&a.second, &a.format_b, &a.parse)?;
    let merged = intersect(&first, &second, policy(&a.matching))
        .map_err(|e| CliError::Data(format!("{} + {}: {e}", show(&a.first), show(&a.second))))?;
    eprintln!("emomap intersect: {} shared words", merged.len());
    commit(vec![(a.output.out, write_merged(&merged, a.output.precision.into()))])
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let formats = &a.gold_flags.formats;
    let direction = single_direction(&a.direction, formats)?;
    let k = a.k as usize;
    let mut cfg = vec![
        ("gold", a.gold.iter().map(|p| show(p)).collect::<Vec<_>>().join(",")),
        ("formats", format!("{},{}", formats.0, formats.1)),
        ("direction", a.direction.to_lowercase()),
        ("k", k.to_string()),
        ("out", show(&a.out)),
    ];
    cfg.extend(parse_echo(&a.gold_flags.parse));
    echo("train", &cfg);
    let golds =
        a.gold.iter().map(|p| read_gold(p, formats, &a.gold_flags.parse)).collect::<Result<Vec<MergedLexicon>>>()?;
    let refs: Vec<&MergedLexicon> = golds.iter().collect();
    let provenance: Vec<String> = a
        .gold
        .iter()
        .zip(&golds)
        .map(|(p, g)| format!("{} rows={} sha256={}", show(p), g.len(), fingerprint(g)))
        .collect();
    let model = KnnModel::fit_many(&refs, direction, k)
        .map_err(|e| CliError::Data(e.to_string()))?
        .with_provenance(format!("direction={}; {}", a.direction.to_lowercase(), provenance.join("; ")));
    if model.k() < k {
        eprintln!("emomap train: k={k} exceeds {} training rows; using k={}", model.rows(), model.k());
    }
    commit(vec![(Some(a.out), model.to_bytes())])
}

fn cmd_map(a: MapArgs) -> Result<()> {
    let model = read_model(&a.model)?;
    let mut cfg = vec![
        ("model", show(&a.model)),
        ("input", show(&a.input)),
        ("source", model.source_format().to_string()),
        ("target", model.target_format().to_string()),
        ("k", model.k().to_string()),
        ("precision", a.output.precision.to_string()),
        ("out", show_opt(&a.output.out)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("map", &cfg);
    let lex = read_lexicon(&a.input, model.source_format(), &a.parse)?;
    let out = model.map_lexicon(&lex).map_err(|e| data_err(&a.input, e))?;
    commit(vec![(a.output.out, write_lexicon(&out, a.output.precision.into()))])
}

fn floors(paths: &[PathBuf]) -> Result<IsrFloor> {
    if paths.is_empty() {
        return Ok(reported_floors());
    }
    let mut results = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(resolve(p)).map_err(|e| data_err(p, e))?;
        let r: IsrResult = serde_json::from_str(&text).map_err(|e| data_err(p, e))?;
        results.push(r);
    }
    isr_floor(&results, &[]).map_err(|e| CliError::Data(e.to_string()))
}

fn eval_config(e: &EvalFlags, folds: usize) -> Result<EvalConfig> {
    Ok(EvalConfig {
        k: e.k as usize,
        folds,
        seed: e.seed,
        direction: parse_direction(&e.direction, &e.gold_flags.formats)?,
        floors: floors(&e.isr)?,
    })
}

fn eval_echo(e: &EvalFlags, cfg: &EvalConfig) -> Vec<(&'static str, String)> {
    let floors: Vec<String> = cfg.floors.floors.iter().map(|f| format!("{}:{}", f.dimension, f.r)).collect();
    let mut pairs = vec![
        ("k", cfg.k.to_string()),
        ("folds", cfg.folds.to_string()),
        ("seed", cfg.seed.to_string()),
        ("direction", e.direction.to_lowercase()),
        ("formats", format!("{},{}", e.gold_flags.formats.0, e.gold_flags.formats.1)),
        ("floors", floors.join(",")),
        ("allow_degenerate", e.allow_degenerate.to_string()),
        ("out", show_opt(&e.report.out)),
        ("json", show_opt(&e.report.json)),
    ];
    pairs.extend(parse_echo(&e.gold_flags.parse));
    pairs
}

fn load_named(specs: &[String], e: &EvalFlags) -> Result<Vec<(String, MergedLexicon)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let (name, path) = named_path(spec)?;
        if !seen.insert(name.clone()) {
            return Err(CliError::Usage(format!("--gold: name `{name}` given twice")));
        }
        out.push((name, read_gold(&path, &e.gold_flags.formats, &e.gold_flags.parse)?));
    }
    Ok(out)
}

fn check_degenerate<'a>(reports: impl IntoIterator<Item = &'a EvalReport>, allow: bool) -> Result<()> {
    let bad: Vec<&str> = reports.into_iter().filter(|r| r.has_degenerate()).map(|r| r.label.as_str()).collect();
    if bad.is_empty() {
        return Ok(());
    }
    let msg = format!("undefined correlation in {}", bad.join(", "));
    if allow {
        eprintln!("emomap: warning: {msg}");
        Ok(())
    } else {
        Err(CliError::Degenerate(format!("{msg}; rerun with --allow-degenerate to write the report anyway")))
    }
}

fn eval_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn cmd_eval_mono(a: EvalMonoArgs) -> Result<()> {
    let cfg = eval_config(&a.eval, a.folds as usize)?;
    let mut pairs = vec![("gold", a.gold.join(","))];
    pairs.extend(eval_echo(&a.eval, &cfg));
    echo("eval-mono", &pairs);
    let golds = load_named(&a.gold, &a.eval)?;
    let reports =
        golds.iter().map(|(n, g)| eval_mono_named(g, n, &cfg).map_err(eval_err)).collect::<Result<Vec<_>>>()?;
    check_degenerate(&reports, a.eval.allow_degenerate)?;
    commit(report_outputs(&a.eval.report, render_table(&reports), json(&reports)))
}

fn cmd_eval_cross(a: EvalCrossArgs) -> Result<()> {
    let cfg = eval_config(&a.eval, EvalConfig::default().folds)?;
    let mut pairs = vec![("train", a.train.clone()), ("test", a.test.clone())];
    pairs.extend(eval_echo(&a.eval, &cfg).into_iter().filter(|(k, _)| *k != "folds"));
    echo("eval-cross", &pairs);
    let golds = load_named(&[a.train.clone(), a.test.clone()], &a.eval)?;
    let (train, test) = (&golds[0], &golds[1]);
    let report = eval_cross_pair_named((&train.0, &train.1), (&test.0, &test.1), &cfg).map_err(eval_err)?;
    let reports = [report];
    check_degenerate(&reports, a.eval.allow_degenerate)?;
    commit(report_outputs(&a.eval.report, render_table(&reports), json(&reports)))
}

fn cmd_eval_bag(a: EvalBagArgs) -> Result<()> {
    let cfg = eval_config(&a.eval, EvalConfig::default().folds)?;
    let max = a.max_size.unwrap_or(a.gold.len());
    let mut pairs = vec![
        ("gold", a.gold.join(",")),
        ("target", if a.target.is_empty() { "all".to_string() } else { a.target.join(",") }),
        ("sizes", format!("{}..={max}", a.min_size)),
    ];
    pairs.extend(eval_echo(&a.eval, &cfg).into_iter().filter(|(k, _)| *k != "folds"));
    echo("eval-bag", &pairs);
    let golds = load_named(&a.gold, &a.eval)?;
    let named: Vec<(&str, &MergedLexicon)> = golds.iter().map(|(n, g)| (n.as_str(), g)).collect();
    let targets: Vec<&str> = if a.target.is_empty() {
        named.iter().map(|(n, _)| *n).collect()
    } else {
        a.target.iter().map(String::as_str).collect()
    };
    let outcome = eval_cross_bagged(&named, &targets, a.min_size..=max, &cfg).map_err(|e| match e {
        emomap_core::EvalError::BagSize { .. } | emomap_core::EvalError::UnknownSet(_) => {
            CliError::Usage(e.to_string())
        }
        e => eval_err(e),
    })?;
    check_degenerate(outcome.bags.iter().flat_map(|b| &b.reports), a.eval.allow_degenerate)?;
    commit(report_outputs(&a.eval.report, render_bagged(&outcome), outcome.to_json().into_bytes()))
}

fn stats_err(label: &str, e: StatsError) -> CliError {
    match e {
        StatsError::ZeroVariance { .. } => CliError::Degenerate(format!("{label}: {e}")),
        e => CliError::Data(format!("{label}: {e}")),
    }
}

fn cmd_isr(a: IsrArgs) -> Result<()> {
    let format_b = a.format_b.clone().unwrap_or_else(|| a.format.clone());
    let label = a.label.clone().unwrap_or_else(|| format!("{} vs {}", show(&a.first), show(&a.second)));
    let mut cfg = vec![
        ("first", show(&a.first)),
        ("second", show(&a.second)),
        ("format", a.format.to_string()),
        ("format_b", format_b.to_string()),
        ("fold_case", a.matching.fold_case.to_string()),
        ("out", show_opt(&a.report.out)),
        ("json", show_opt(&a.report.json)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("isr", &cfg);
    let first = read_lexicon(&a.first, &a.format, &a.parse)?;
    let second = read_lexicon(&a.second, &format_b, &a.parse)?;
    let mut result = isr(&first, &second, policy(&a.matching)).map_err(|e| stats_err(&label, e))?;
    result.label = label;
    let mut text = format!("# {}\n# overlap: {}\ndimension\tr\n", result.label, result.overlap);
    for (d, c) in &result.dimensions {
        text.push_str(&format!("{d}\t{:.3}\n", c.r));
    }
    commit(report_outputs(&a.report, text, json(&result)))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let model = read_model(&a.model)?;
    let manifest_out = manifest_path(&a.out);
    let mut cfg = vec![
        ("input", show(&a.input)),
        ("model", show(&a.model)),
        ("k", model.k().to_string()),
        ("source", model.source_format().to_string()),
        ("target", model.target_format().to_string()),
        ("exclude", a.exclude.iter().map(|p| show(p)).collect::<Vec<_>>().join(",")),
        ("precision", a.precision.to_string()),
        ("out", show(&a.out)),
        ("manifest", show(&manifest_out)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("build", &cfg);
    let lex = read_lexicon(&a.input, model.source_format(), &a.parse)?;
    let exclude = if a.exclude.is_empty() {
        None
    } else {
        let mut words = HashSet::new();
        for p in &a.exclude {
            words.extend(io::read_words(p)?);
        }
        Some(words)
    };
    let (out, mut manifest) = build(&lex, &model, exclude.as_ref()).map_err(|e| data_err(&a.input, e))?;
    manifest.input_path = Some(show(&a.input));
    manifest.output_path = Some(show(&a.out));
    commit(vec![
        (Some(a.out), write_lexicon(&out, a.precision.into())),
        (Some(manifest_out), manifest.to_json().into_bytes()),
    ])
}

fn cmd_report_stats(a: ReportStatsArgs) -> Result<()> {
    let mut cfg = vec![
        ("input", show(&a.input)),
        ("format", a.format.to_string()),
        ("out", show_opt(&a.report.out)),
        ("json", show_opt(&a.report.json)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("report-stats", &cfg);
    let lex = read_lexicon(&a.input, &a.format, &a.parse)?;
    let summary = describe(&lex).map_err(|e| data_err(&a.input, e))?;
    commit(report_outputs(&a.report, render_summary(&summary), json(&summary)))
}

fn cmd_report_topk(a: ReportTopkArgs) -> Result<()> {
    let dims: Vec<String> = if a.dims.is_empty() {
        a.format.dimensions().to_vec()
    } else {
        a.dims.iter().map(|d| d.trim().to_string()).collect()
    };
    for d in &dims {
        if a.format.dimension_index(d).is_none() {
            return Err(CliError::Usage(format!("--dims: `{d}` is not a dimension of {}", a.format)));
        }
    }
    let mut cfg = vec![
        ("input", show(&a.input)),
        ("format", a.format.to_string()),
        ("k", a.k.to_string()),
        ("dims", dims.join(",")),
        ("out", show_opt(&a.report.out)),
        ("json", show_opt(&a.report.json)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("report-topk", &cfg);
    let lex = read_lexicon(&a.input, &a.format, &a.parse)?;
    let columns = dims
        .iter()
        .map(|d| top_k(&lex, d, a.k as usize).map(|words| (d.clone(), words)).map_err(|e| data_err(&a.input, e)))
        .collect::<Result<Vec<_>>>()?;
    commit(report_outputs(&a.report, render_top_k(&columns), json(&columns)))
}

fn cmd_report_corr(a: ReportCorrArgs) -> Result<()> {
    let mut cfg = vec![
        ("first", show(&a.first)),
        ("second", show(&a.second)),
        ("format_a", a.format_a.to_string()),
        ("format_b", a.format_b.to_string()),
        ("fold_case", a.matching.fold_case.to_string()),
        ("out", show_opt(&a.report.out)),
        ("json", show_opt(&a.report.json)),
    ];
    cfg.extend(parse_echo(&a.parse));
    echo("report-corr", &cfg);
    let first = read_lexicon(&a.first, &a.format_a, &a.parse)?;
    let second = read_lexicon(&a.second, &a.format_b, &a.parse)?;
    let m = cross_corr(&first, &second, policy(&a.matching))
        .map_err(|e| CliError::Data(format!("{} + {}: {e}", show(&a.first), show(&a.second))))?;
    commit(report_outputs(&a.report, render_corr(&m), json(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_resolve_against_formats() {
        let f = (FormatDescriptor::vad(), FormatDescriptor::be5());
        assert_eq!(parse_direction("vad2be5", &f).unwrap(), DirectionChoice::FirstToSecond);
        assert_eq!(parse_direction("BE52VAD", &f).unwrap(), DirectionChoice::SecondToFirst);
        assert_eq!(parse_direction("both", &f).unwrap(), DirectionChoice::Both);
        assert!(parse_direction("va2be5", &f).is_err());
        assert!(single_direction("both", &f).is_err());
    }

    #[test]
    fn manifest_sits_beside_output() {
        assert_eq!(manifest_path(Path::new("out/x.tsv")), PathBuf::from("out/x.tsv.manifest.json"));
    }
}
