//! Tab-separated lexicon files.
//!
//! Layout: header `word\t<dim1>\t...\t<dimN>\n`, then one `word\tv1\t...\tvN\n`
//! row per entry. No quoting or escaping; words may not contain tabs or
//! newlines. Header columns may appear in any order and are re-mapped onto the
//! descriptor's dimension order.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::format::FormatDescriptor;

use super::{Entry, Lexicon, LexiconError, MergedLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangePolicy {
    #[default]
    Strict,
    Clamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    #[default]
    Error,
    /// Average all rows of a repeated word into its first occurrence.
    Mean,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub range: RangePolicy,
    pub duplicates: DuplicatePolicy,
    pub language: Option<String>,
}

impl ParseOptions {
    pub fn strict() -> Self {
        Self::default()
    }
}

/// Where each header column lands: which format and which dimension slot.
struct ColumnMap {
    slots: Vec<(usize, usize)>,
    names: Vec<String>,
}

fn map_header(header: &str, formats: &[&FormatDescriptor]) -> Result<ColumnMap, LexiconError> {
    let mismatch = |message: String| LexiconError::HeaderMismatch { line: 1, message };
    let mut cols = header.split('\t');
    match cols.next() {
        Some("word") => {}
        other => return Err(mismatch(format!("first column must be `word`, found {:?}", other.unwrap_or("")))),
    }
    let mut slots = Vec::new();
    let mut names = Vec::new();
    let mut filled: Vec<Vec<bool>> = formats.iter().map(|f| vec![false; f.len()]).collect();
    for col in cols {
        let slot = formats
            .iter()
            .enumerate()
            .find_map(|(fi, f)| f.dimension_index(col).map(|di| (fi, di)))
            .ok_or_else(|| mismatch(format!("unknown dimension `{col}`")))?;
        if std::mem::replace(&mut filled[slot.0][slot.1], true) {
            return Err(mismatch(format!("dimension `{col}` appears twice")));
        }
        slots.push(slot);
        names.push(col.to_string());
    }
    for (f, got) in formats.iter().zip(&filled) {
        if let Some(i) = got.iter().position(|&g| !g) {
            return Err(mismatch(format!("missing dimension `{}` of format `{}`", f.dimensions()[i], f.name())));
        }
    }
    Ok(ColumnMap { slots, names })
}

struct Row {
    word: String,
    values: Vec<Vec<f64>>,
}

fn parse_rows<R: BufRead>(
    reader: R,
    formats: &[&FormatDescriptor],
    options: &ParseOptions,
) -> Result<Vec<Row>, LexiconError> {
    let mut lines = reader.split(b'\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(LexiconError::MissingHeader)?;
    let header = String::from_utf8(header?).map_err(|_| LexiconError::InvalidUtf8 { line: 1 })?;
    let columns = map_header(&header, formats)?;
    let expected = columns.slots.len() + 1;

    let mut rows: Vec<Row> = Vec::new();
    let mut seen: HashMap<String, (usize, usize)> = HashMap::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut pending_blank: Option<usize> = None;

    for (line, bytes) in lines {
        let bytes = bytes?;
        // A single trailing empty line is tolerated; interior blank lines are not.
        if let Some(blank) = pending_blank.take() {
            return Err(LexiconError::MalformedRow { line: blank, expected, found: 1 });
        }
        if bytes.is_empty() {
            pending_blank = Some(line);
            continue;
        }
        let text = String::from_utf8(bytes).map_err(|_| LexiconError::InvalidUtf8 { line })?;
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != expected {
            return Err(LexiconError::MalformedRow { line, expected, found: fields.len() });
        }
        let word = fields[0];
        if word.is_empty() {
            return Err(LexiconError::EmptyWord { line });
        }
        let mut values: Vec<Vec<f64>> = formats.iter().map(|f| vec![0.0; f.len()]).collect();
        for ((field, &(fi, di)), name) in fields[1..].iter().zip(&columns.slots).zip(&columns.names) {
            let format = formats[fi];
            values[fi][di] = parse_rating(field, name, format, line, options.range)?;
        }
        match seen.get(word) {
            None => {
                seen.insert(word.to_string(), (rows.len(), line));
                counts.push(1);
                rows.push(Row { word: word.to_string(), values });
            }
            Some(&(idx, first_line)) => match options.duplicates {
                DuplicatePolicy::Error => {
                    return Err(LexiconError::DuplicateWord { line, word: word.to_string(), first_line })
                }
                DuplicatePolicy::Mean => {
                    counts[idx] += 1;
                    for (acc, v) in rows[idx].values.iter_mut().zip(values) {
                        acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
                    }
                }
            },
        }
    }
    for (row, &n) in rows.iter_mut().zip(&counts) {
        if n > 1 {
            let n = n as f64;
            for (f, vals) in formats.iter().zip(row.values.iter_mut()) {
                vals.iter_mut().for_each(|v| *v = f.clamp(*v / n));
            }
        }
    }
    Ok(rows)
}

fn parse_rating(
    field: &str,
    dimension: &str,
    format: &FormatDescriptor,
    line: usize,
    range: RangePolicy,
) -> Result<f64, LexiconError> {
    if field.trim().is_empty() {
        return Err(LexiconError::MissingRating { line, dimension: dimension.to_string() });
    }
    let value: f64 = field.parse().map_err(|_| LexiconError::NonNumeric {
        line,
        dimension: dimension.to_string(),
        value: field.to_string(),
    })?;
    if !value.is_finite() {
        return Err(LexiconError::NonFinite { line, dimension: dimension.to_string(), value: field.to_string() });
    }
    if format.contains(value) {
        return Ok(value);
    }
    match range {
        RangePolicy::Clamp => Ok(format.clamp(value)),
        RangePolicy::Strict => Err(LexiconError::OutOfRange {
            line,
            dimension: dimension.to_string(),
            value,
            min: format.scale_min(),
            max: format.scale_max(),
        }),
    }
}

/// Reads a single-format lexicon. Entry order is file order.
pub fn parse_lexicon<R: BufRead>(
    reader: R,
    format: &FormatDescriptor,
    options: &ParseOptions,
) -> Result<Lexicon, LexiconError> {
    let rows = parse_rows(reader, &[format], options)?;
    let entries =
        rows.into_iter().map(|mut r| Entry { word: r.word, ratings: r.values.pop().expect("one format") }).collect();
    let mut lex = Lexicon::new(format.clone(), entries)?;
    lex.language = options.language.clone();
    Ok(lex)
}

/// Reads a dual-annotated file whose header carries the dimensions of both formats.
pub fn parse_merged<R: BufRead>(
    reader: R,
    first: &FormatDescriptor,
    second: &FormatDescriptor,
    options: &ParseOptions,
) -> Result<MergedLexicon, LexiconError> {
    if let Some(d) = first.shares_dimension_with(second) {
        return Err(LexiconError::DimensionCollision { dimension: d.to_string() });
    }
    let rows = parse_rows(reader, &[first, second], options)?;
    let (mut a, mut b) = (Vec::with_capacity(rows.len()), Vec::with_capacity(rows.len()));
    for mut r in rows {
        let second_vals = r.values.pop().expect("two formats");
        let first_vals = r.values.pop().expect("two formats");
        b.push(Entry { word: r.word.clone(), ratings: second_vals });
        a.push(Entry { word: r.word, ratings: first_vals });
    }
    let mut a = Lexicon::new(first.clone(), a)?;
    let mut b = Lexicon::new(second.clone(), b)?;
    a.language = options.language.clone();
    b.language = options.language.clone();
    MergedLexicon::new(a, b)
}

fn format_row(out: &mut String, word: &str, values: &[f64], precision: usize) {
    out.push_str(word);
    for v in values {
        out.push('\t');
        out.push_str(&format!("{v:.precision$}"));
    }
    out.push('\n');
}

pub fn write_lexicon_to<W: Write>(lex: &Lexicon, precision: usize, mut out: W) -> std::io::Result<()> {
    let mut buf = String::new();
    buf.push_str("word");
    for d in lex.format().dimensions() {
        buf.push('\t');
        buf.push_str(d);
    }
    buf.push('\n');
    for e in lex.entries() {
        format_row(&mut buf, &e.word, &e.ratings, precision);
    }
    out.write_all(buf.as_bytes())
}

/// Serializes with `precision` fixed decimals per rating.
pub fn write_lexicon(lex: &Lexicon, precision: usize) -> Vec<u8> {
    let mut out = Vec::new();
    write_lexicon_to(lex, precision, &mut out).expect("writing to a Vec cannot fail");
    out
}

pub fn write_merged_to<W: Write>(merged: &MergedLexicon, precision: usize, mut out: W) -> std::io::Result<()> {
    let (a, b) = (merged.first(), merged.second());
    let mut buf = String::from("word");
    for d in a.format().dimensions().iter().chain(b.format().dimensions()) {
        buf.push('\t');
        buf.push_str(d);
    }
    buf.push('\n');
    let mut row = Vec::with_capacity(a.format().len() + b.format().len());
    for (ea, eb) in a.entries().iter().zip(b.entries()) {
        row.clear();
        row.extend_from_slice(&ea.ratings);
        row.extend_from_slice(&eb.ratings);
        format_row(&mut buf, &ea.word, &row, precision);
    }
    out.write_all(buf.as_bytes())
}

pub fn write_merged(merged: &MergedLexicon, precision: usize) -> Vec<u8> {
    let mut out = Vec::new();
    write_merged_to(merged, precision, &mut out).expect("writing to a Vec cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "word\tvalence\tarousal\tdominance\nsunshine\t8.1\t5.3\t5.4\nterrorism\t1.6\t7.4\t2.7\n";

    fn vad(text: &str) -> Result<Lexicon, LexiconError> {
        parse_lexicon(text.as_bytes(), &FormatDescriptor::vad(), &ParseOptions::strict())
    }

    #[test]
    fn parses_rows_in_file_order() {
        let lex = vad(TABLE).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.entries()[0].word, "sunshine");
        assert_eq!(lex.entries()[0].ratings, vec![8.1, 5.3, 5.4]);
        assert_eq!(lex.entries()[1].word, "terrorism");
    }

    #[test]
    fn header_only_is_empty() {
        assert!(vad("word\tvalence\tarousal\tdominance\n").unwrap().is_empty());
        assert!(vad("word\tvalence\tarousal\tdominance").unwrap().is_empty());
    }

    #[test]
    fn header_columns_are_remapped() {
        let lex = vad("word\tDominance\tvalence\tarousal\nx\t3\t1\t2\n").unwrap();
        assert_eq!(lex.entries()[0].ratings, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(vad(""), Err(LexiconError::MissingHeader)));
        assert!(matches!(vad("term\tvalence\tarousal\tdominance\n"), Err(LexiconError::HeaderMismatch { .. })));
        assert!(matches!(vad("word\tvalence\tarousal\n"), Err(LexiconError::HeaderMismatch { .. })));
        assert!(matches!(vad("word\tvalence\tarousal\tdominance\tjoy\n"), Err(LexiconError::HeaderMismatch { .. })));
        assert!(matches!(
            vad("word\tvalence\tarousal\tdominance\tvalence\n"),
            Err(LexiconError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn row_errors_carry_line_numbers() {
        let h = "word\tvalence\tarousal\tdominance\n";
        let err = |body: &str| vad(&format!("{h}ok\t5\t5\t5\n{body}")).unwrap_err();
        assert!(matches!(err("x\t9.5\t5\t5\n"), LexiconError::OutOfRange { line: 3, .. }));
        assert!(matches!(err("x\t5\t5\n"), LexiconError::MalformedRow { line: 3, expected: 4, found: 3 }));
        assert!(matches!(err("x\ta\t5\t5\n"), LexiconError::NonNumeric { line: 3, .. }));
        assert!(matches!(err("x\tNaN\t5\t5\n"), LexiconError::NonFinite { line: 3, .. }));
        assert!(matches!(err("x\t\t5\t5\n"), LexiconError::MissingRating { line: 3, .. }));
        assert!(matches!(err("\t5\t5\t5\n"), LexiconError::EmptyWord { line: 3 }));
        assert!(matches!(err("ok\t4\t4\t4\n"), LexiconError::DuplicateWord { line: 3, first_line: 2, .. }));
        assert!(matches!(err("\nx\t5\t5\t5\n"), LexiconError::MalformedRow { line: 3, .. }));
        assert!(matches!(err("x\t5\t5\t5\r\n"), LexiconError::NonNumeric { line: 3, .. }));
        let bad = &b"word\tvalence\tarousal\tdominance\n\xff\t5\t5\t5\n"[..];
        assert!(matches!(
            parse_lexicon(bad, &FormatDescriptor::vad(), &ParseOptions::strict()),
            Err(LexiconError::InvalidUtf8 { line: 2 })
        ));
    }

    #[test]
    fn permissive_options() {
        let opts =
            ParseOptions { range: RangePolicy::Clamp, duplicates: DuplicatePolicy::Mean, language: Some("en".into()) };
        let text = "word\tvalence\tarousal\tdominance\nx\t9.5\t2\t0.5\ny\t5\t5\t5\nx\t3\t4\t5\n";
        let lex = parse_lexicon(text.as_bytes(), &FormatDescriptor::vad(), &opts).unwrap();
        assert_eq!(lex.words().collect::<Vec<_>>(), ["x", "y"]);
        assert_eq!(lex.entries()[0].ratings, vec![6.0, 3.0, 3.0]);
        assert_eq!(lex.language(), Some("en"));
    }

    #[test]
    fn writes_fixed_point_rows() {
        let lex = vad(TABLE).unwrap();
        let text = String::from_utf8(write_lexicon(&lex, 1)).unwrap();
        assert_eq!(text, TABLE);
        let two = String::from_utf8(write_lexicon(&vad("word\tvalence\tarousal\tdominance\nz\t2\t2\t2\n").unwrap(), 2))
            .unwrap();
        assert_eq!(two.lines().nth(1), Some("z\t2.00\t2.00\t2.00"));
        let empty = Lexicon::empty(FormatDescriptor::vad());
        assert_eq!(write_lexicon(&empty, 3), b"word\tvalence\tarousal\tdominance\n");
    }

    #[test]
    fn merged_files_split_by_format() {
        let text =
            "word\tjoy\tvalence\tanger\tarousal\tsadness\tdominance\tfear\tdisgust\nx\t2\t8\t1\t5\t1\t6\t1.5\t1\n";
        let m =
            parse_merged(text.as_bytes(), &FormatDescriptor::vad(), &FormatDescriptor::be5(), &ParseOptions::strict())
                .unwrap();
        assert_eq!(m.first().entries()[0].ratings, vec![8.0, 5.0, 6.0]);
        assert_eq!(m.second().entries()[0].ratings, vec![2.0, 1.0, 1.0, 1.5, 1.0]);
        let out = String::from_utf8(write_merged(&m, 1)).unwrap();
        assert_eq!(out, "word\tvalence\tarousal\tdominance\tjoy\tanger\tsadness\tfear\tdisgust\nx\t8.0\t5.0\t6.0\t2.0\t1.0\t1.0\t1.5\t1.0\n");
    }
}
