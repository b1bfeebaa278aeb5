//! Plain-text tables: one row per experiment/language, one column per
//! dimension, plus per-direction averages. Significant values carry `*`.

use std::fmt::Write;

use super::{BaggedOutcome, EvalReport, Experiment};

/// Three decimals with the leading zero dropped (`.966`, `-.030`).
pub fn format_r(r: Option<f64>) -> String {
    match r {
        None => "n/a".into(),
        Some(r) => {
            let s = format!("{r:.3}");
            s.replacen("0.", ".", 1)
        }
    }
}

fn experiment_name(e: Experiment) -> &'static str {
    match e {
        Experiment::Monolingual => "monolingual",
        Experiment::CrosslingualPairwise => "crosslingual (pairwise)",
        Experiment::CrosslingualBagged => "crosslingual (bagged)",
    }
}

fn header_lines(reports: &[EvalReport], out: &mut String) {
    if let Some(first) = reports.first() {
        let c = &first.config;
        let _ = writeln!(out, "# k={} folds={} seed={} direction={:?}", c.k, c.folds, c.seed, c.direction);
        for f in &c.floors.floors {
            let _ = writeln!(out, "# floor {}={} ({})", f.dimension, f.r, f.source);
        }
    }
    let mut seen = Vec::new();
    for rep in reports {
        for i in &rep.inputs {
            let line = format!("# input {} rows={} sha256={}", i.name, i.rows, i.sha256);
            if !seen.contains(&line) {
                let _ = writeln!(out, "{line}");
                seen.push(line);
            }
        }
    }
}

/// Renders reports that share a column layout as one aligned table.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    header_lines(reports, &mut out);
    let Some(first) = reports.first() else {
        return out;
    };
    let mut head = vec!["Experiment".to_string(), "Language".to_string()];
    for d in &first.directions {
        head.extend(d.dimensions.iter().map(|s| s.dimension.clone()));
        head.push(format!("Av_{}", d.target));
    }
    let mut rows = vec![head];
    for rep in reports {
        let mut row = vec![experiment_name(rep.experiment).to_string(), rep.label.clone()];
        for d in &rep.directions {
            for s in &d.dimensions {
                let star = rep.verdict(&s.dimension).is_some_and(|v| v.significant);
                row.push(format_r(s.r) + if star { "*" } else { "" });
            }
            row.push(format_r(d.average));
        }
        rows.push(row);
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c < 2 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    let mut notes = Vec::new();
    for rep in reports {
        for w in &rep.warnings {
            notes.push(format!("# note [{}]: {w}", rep.label));
        }
        for d in &rep.directions {
            for s in &d.dimensions {
                if let Some(n) = &s.note {
                    notes.push(format!("# note [{}] {}: {n}", rep.label, s.dimension));
                }
            }
        }
    }
    for n in notes {
        let _ = writeln!(out, "{n}");
    }
    out
}

/// Ranking of all bags followed by the best bag's per-target table.
pub fn render_bagged(outcome: &BaggedOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# bags ranked by mean r over all dimensions and targets");
    let mut ranked: Vec<_> = outcome.bags.iter().collect();
    ranked.sort_by(|a, b| b.mean_r.unwrap_or(f64::NEG_INFINITY).total_cmp(&a.mean_r.unwrap_or(f64::NEG_INFINITY)));
    for b in ranked {
        let mark = if b.bag == outcome.best_bag { "  <- best" } else { "" };
        let _ = writeln!(out, "{:<40} {}{mark}", b.bag.join("+"), format_r(b.mean_r));
    }
    out.push('\n');
    out.push_str(&render_table(&outcome.best().reports));
    out
}
