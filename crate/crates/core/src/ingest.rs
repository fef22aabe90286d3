//! Readers and writers for edge lists, vector tables, label tables, seed
//! files and reports.
//!
//! Grammars:
//!
//! * edge list: one edge per line, two whitespace-separated tokens; blank
//!   lines and lines starting with `#` are skipped.
//! * vector table: header `node,d0,d1,...`, then `token,x0,x1,...`.
//! * label table: header `node,label`, then `token,value`. A file whose
//!   values are all unsigned integers is a classification table; otherwise
//!   every value must be a decimal and the table holds regression targets.
//!   Writers always print regression targets with a decimal point.
//! * seed file: one token per line, `#` comments allowed.
//!
//! Line numbers in errors are 1-based and count every physical line.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::embed::FeatureMatrix;
use crate::error::{Error, Result};
use crate::eval::{AggregateDistance, BoundReport, Labels, OrderingCheck, SubgroupReport, TrialGroup};
use crate::graph::{Graph, TokenTable, VertexId};
use crate::metrics::{DistortionEstimate, EmbeddingTable, ProfileRow};
use crate::sampling::SeedSelection;
use crate::verify::PropertyOutcome;

pub const SCHEMA_VERSION: &str = "1";

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(String, String)>> {
    let mut edges = Vec::new();
    for item in lines(reader) {
        let (no, line) = item?;
        if is_skippable(&line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                no,
                line.trim(),
                format!("expected 2 tokens, found {}", fields.len()),
            ));
        }
        edges.push((fields[0].to_owned(), fields[1].to_owned()));
    }
    Ok(edges)
}

/// Parses an edge list and builds the graph in one step.
pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph> {
    crate::graph::build_graph(&parse_edge_list(reader)?)
}

/// Writes every edge once, ordered so that reading the file back assigns the
/// same ids. A vertex that no edge can introduce in id order, isolated
/// vertices included, is declared by a self-loop line `v v`.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    let n = g.n();
    let mut introduced = 0;
    // (u, v) with u < v, already written as an introduction
    let mut written = HashSet::new();
    while introduced < n {
        let v = introduced;
        let lower = g.neighbors(v).first().copied().filter(|&u| u < v);
        match lower {
            Some(u) => {
                writeln!(out, "{} {}", g.token(u), g.token(v))?;
                written.insert((u, v));
                introduced += 1;
            }
            None if v + 1 < n && g.has_edge(v, v + 1) => {
                writeln!(out, "{} {}", g.token(v), g.token(v + 1))?;
                written.insert((v, v + 1));
                introduced += 2;
            }
            None => {
                writeln!(out, "{} {}", g.token(v), g.token(v))?;
                introduced += 1;
            }
        }
    }
    for (u, v) in g.edges() {
        if !written.contains(&(u, v)) {
            writeln!(out, "{} {}", g.token(u), g.token(v))?;
        }
    }
    Ok(())
}

fn parse_finite(field: &str, no: usize) -> Result<f64> {
    let x: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::parse(no, field, "not a decimal number"))?;
    if !x.is_finite() {
        return Err(Error::parse(no, field, "value is not finite"));
    }
    Ok(x)
}

/// `(line number, vertex, fields)`.
type KeyedRow = (usize, VertexId, Vec<String>);

/// Reads a header-prefixed CSV of `(token, values...)`, checking duplicates
/// and resolving tokens. Returns `(id, values)` rows and the header.
fn parse_keyed_rows<R: BufRead>(
    reader: R,
    tokens: &TokenTable,
    expected_header: Option<&[&str]>,
) -> Result<(Vec<String>, Vec<KeyedRow>)> {
    let mut it = lines(reader);
    let (header_no, header) = loop {
        match it.next() {
            Some(item) => {
                let (no, line) = item?;
                if !line.trim().is_empty() {
                    break (no, line);
                }
            }
            None => return Err(Error::parse(1, "", "missing header line")),
        }
    };
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_owned()).collect();
    if columns.first().map(String::as_str) != Some("node") || columns.len() < 2 {
        return Err(Error::parse(
            header_no,
            header.trim(),
            "header must start with `node` and name at least one column",
        ));
    }
    if let Some(exp) = expected_header {
        if columns != exp {
            return Err(Error::parse(
                header_no,
                header.trim(),
                format!("expected header `{}`", exp.join(",")),
            ));
        }
    }
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    let mut unknown = Vec::new();
    for item in it {
        let (no, line) = item?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            return Err(Error::parse(
                no,
                fields[0],
                format!("expected {} fields, found {}", columns.len(), fields.len()),
            ));
        }
        let token = fields[0];
        if token.is_empty() {
            return Err(Error::parse(no, "", "empty token"));
        }
        if !seen.insert(token.to_owned()) {
            return Err(Error::parse(no, token, "duplicate token"));
        }
        match tokens.id(token) {
            Some(id) => rows.push((no, id, fields[1..].iter().map(|s| s.to_string()).collect())),
            None => unknown.push(token.to_owned()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownTokens { tokens: unknown });
    }
    Ok((columns, rows))
}

fn parse_vectors<R: BufRead>(reader: R, tokens: &TokenTable) -> Result<EmbeddingTable> {
    let (columns, rows) = parse_keyed_rows(reader, tokens, None)?;
    let mut table = EmbeddingTable::new(tokens.len(), columns.len() - 1)?;
    for (no, id, fields) in rows {
        let values = fields
            .iter()
            .map(|f| parse_finite(f, no))
            .collect::<Result<Vec<_>>>()?;
        table.insert(id, &values)?;
    }
    Ok(table)
}

/// Embedding table; vertices without a row stay uncovered.
pub fn parse_embeddings<R: BufRead>(reader: R, tokens: &TokenTable) -> Result<EmbeddingTable> {
    parse_vectors(reader, tokens)
}

/// Feature matrix; every vertex must have a row.
pub fn parse_features<R: BufRead>(reader: R, tokens: &TokenTable) -> Result<FeatureMatrix> {
    FeatureMatrix::try_from(&parse_vectors(reader, tokens)?)
}

/// Covered rows in id order, values printed in shortest round-trip form.
pub fn write_embeddings<W: Write>(emb: &EmbeddingTable, tokens: &TokenTable, mut out: W) -> Result<()> {
    write!(out, "node")?;
    for j in 0..emb.dim() {
        write!(out, ",d{j}")?;
    }
    writeln!(out)?;
    for v in emb.coverage() {
        write!(out, "{}", tokens.token(v))?;
        for x in emb.get(v).unwrap() {
            write!(out, ",{x:?}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn parse_label_table<R: BufRead>(reader: R, tokens: &TokenTable) -> Result<Labels> {
    let (_, rows) = parse_keyed_rows(reader, tokens, Some(&["node", "label"]))?;
    let n = tokens.len();
    let is_class = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let class_table = rows.first().is_none_or(|(_, _, f)| is_class(&f[0]));
    if class_table {
        let mut out = vec![None; n];
        for (no, id, fields) in rows {
            let f = &fields[0];
            if !is_class(f) {
                return Err(Error::parse(no, f.as_str(), "mixed class ids and real values"));
            }
            let c: u32 = f
                .parse()
                .map_err(|_| Error::parse(no, f.as_str(), "class id out of range"))?;
            out[id] = Some(c);
        }
        Ok(Labels::Classes(out))
    } else {
        let mut out = vec![None; n];
        for (no, id, fields) in rows {
            let f = &fields[0];
            if is_class(f) {
                return Err(Error::parse(no, f.as_str(), "mixed class ids and real values"));
            }
            out[id] = Some(parse_finite(f, no)?);
        }
        Ok(Labels::Reals(out))
    }
}

pub fn write_label_table<W: Write>(labels: &Labels, tokens: &TokenTable, mut out: W) -> Result<()> {
    writeln!(out, "node,label")?;
    match labels {
        Labels::Classes(xs) => {
            for (v, c) in xs.iter().enumerate() {
                if let Some(c) = c {
                    writeln!(out, "{},{c}", tokens.token(v))?;
                }
            }
        }
        Labels::Reals(xs) => {
            for (v, x) in xs.iter().enumerate() {
                if let Some(x) = x {
                    writeln!(out, "{},{x:?}", tokens.token(v))?;
                }
            }
        }
    }
    Ok(())
}

/// Seed tokens, one per line, resolved to ids in file order.
pub fn parse_seed_file<R: BufRead>(reader: R, tokens: &TokenTable) -> Result<Vec<VertexId>> {
    let mut seeds = Vec::new();
    let mut seen = HashSet::new();
    let mut unknown = Vec::new();
    for item in lines(reader) {
        let (no, line) = item?;
        if is_skippable(&line) {
            continue;
        }
        let token = line.trim();
        if token.split_whitespace().count() != 1 {
            return Err(Error::parse(no, token, "expected one token per line"));
        }
        if !seen.insert(token.to_owned()) {
            return Err(Error::parse(no, token, "duplicate seed"));
        }
        match tokens.id(token) {
            Some(id) => seeds.push(id),
            None => unknown.push(token.to_owned()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownTokens { tokens: unknown });
    }
    if seeds.is_empty() {
        return Err(Error::parse(1, "", "seed file lists no seeds"));
    }
    Ok(seeds)
}

pub fn write_seed_file<W: Write>(seeds: &[VertexId], tokens: &TokenTable, mut out: W) -> Result<()> {
    for &s in seeds {
        writeln!(out, "{}", tokens.token(s))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopCount {
    pub hop: u32,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub seed_count: usize,
    pub per_hop: Vec<HopCount>,
    pub beyond_max_hop: usize,
    pub unreachable: usize,
    pub max_hop: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSummary {
    pub estimate: DistortionEstimate,
    pub profile: Vec<ProfileRow>,
    pub beyond_max_hop: usize,
    pub unreachable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub selection: SeedSelection,
    pub seed_tokens: Vec<String>,
    /// Absent when the seeds cover every vertex.
    pub aggregate: Option<AggregateDistance>,
    /// Names the measure behind a baseline method, when the method name alone is ambiguous.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopBound {
    pub hop: u32,
    pub bound: BoundReport,
    pub bound_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub subgroups: SubgroupReport,
    /// `"ACC|MD"` on the percent scale.
    pub acc_md: String,
    pub ordering: Option<OrderingCheck>,
    pub distortion: Option<DistortionEstimate>,
    pub bounds: Vec<HopBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTable {
    pub groups: Vec<TrialGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub properties: Vec<PropertyOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Partition(PartitionSummary),
    Distortion(DistortionSummary),
    Selection(SelectionSummary),
    Evaluation(EvaluationSummary),
    Bound(BoundReport),
    Trials(TrialTable),
    Verify(VerifySummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub tool_version: String,
    /// Every configuration choice that shaped the run.
    pub parameters: BTreeMap<String, String>,
    pub payload: Payload,
}

impl Report {
    pub fn new(tool_version: &str, parameters: BTreeMap<String, String>, payload: Payload) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_owned(),
            tool_version: tool_version.to_owned(),
            parameters,
            payload,
        }
    }

    /// The report as it reads back after a structured write: every real
    /// rounded to 6 significant digits.
    pub fn rounded(&self) -> Report {
        let mut value = serde_json::to_value(self).expect("report serializes");
        round_values(&mut value);
        serde_json::from_value(value).expect("rounded report deserializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Structured,
    Tabular,
}

/// Rounds to 6 significant digits.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap()
}

fn fmt6(x: f64) -> String {
    format!("{}", round6(x))
}

fn round_values(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            *v = serde_json::Number::from_f64(round6(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_values),
        Value::Object(map) => map.values_mut().for_each(round_values),
        _ => {}
    }
}

pub fn write_report<W: Write>(report: &Report, format: ReportFormat, mut out: W) -> Result<()> {
    match format {
        ReportFormat::Structured => {
            let mut value = serde_json::to_value(report).map_err(|e| Error::Io(e.to_string()))?;
            round_values(&mut value);
            let text = serde_json::to_string_pretty(&value).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
        ReportFormat::Tabular => write_tabular(&report.payload, &mut out)?,
    }
    Ok(())
}

pub fn render_report(report: &Report, format: ReportFormat) -> String {
    let mut buf = Vec::new();
    write_report(report, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("reports are UTF-8")
}

pub fn parse_structured_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), "", e.to_string()))
}

fn write_tabular<W: Write>(payload: &Payload, out: &mut W) -> Result<()> {
    match payload {
        Payload::Partition(p) => {
            let rest: usize = p.per_hop.iter().map(|h| h.count).sum::<usize>()
                + p.beyond_max_hop
                + p.unreachable;
            writeln!(out, "hop,value,count")?;
            for h in &p.per_hop {
                let frac = if rest == 0 { 0.0 } else { h.count as f64 / rest as f64 };
                writeln!(out, "{},{},{}", h.hop, fmt6(frac), h.count)?;
            }
        }
        Payload::Distortion(d) => {
            writeln!(out, "hop,value,count")?;
            for r in &d.profile {
                writeln!(out, "{},{},{}", r.hop, fmt6(r.mean), r.count)?;
            }
        }
        Payload::Evaluation(e) => {
            writeln!(out, "hop,value,count")?;
            for h in &e.subgroups.per_hop {
                writeln!(out, "{},{},{}", h.hop, fmt6(h.accuracy), h.count)?;
            }
        }
        Payload::Selection(s) => {
            writeln!(out, "rank,seed,distance")?;
            for (i, tok) in s.seed_tokens.iter().enumerate() {
                let d = match i {
                    0 => String::new(),
                    _ => s
                        .selection
                        .pick_distances
                        .get(i - 1)
                        .map(ToString::to_string)
                        .unwrap_or_default(),
                };
                writeln!(out, "{},{tok},{d}", i + 1)?;
            }
        }
        Payload::Bound(b) => {
            writeln!(out, "hop,value,count")?;
            writeln!(out, "{},{},1", b.group_distance, fmt6(b.bound_driver))?;
        }
        Payload::Trials(t) => {
            writeln!(out, "group,value,count")?;
            for g in &t.groups {
                writeln!(out, "{},{},{}", g.index, fmt6(g.mean_accuracy), g.size)?;
            }
        }
        Payload::Verify(v) => {
            writeln!(out, "property,passed,cases")?;
            for p in &v.properties {
                writeln!(out, "{},{},{}", p.name, p.passed, p.cases)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::HopAccuracy;
    use std::io::Cursor;

    fn tokens(names: &[&str]) -> TokenTable {
        let mut t = TokenTable::new();
        names.iter().for_each(|n| {
            t.intern(n);
        });
        t
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let edges = parse_edge_list(Cursor::new("a b\n# comment\nb c\n")).unwrap();
        assert_eq!(
            edges,
            vec![("a".into(), "b".into()), ("b".into(), "c".into())]
        );
        match parse_edge_list(Cursor::new("a\n")) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_edge_list(Cursor::new("a b\n\nx y z\n")) {
            Err(Error::Parse { line: 3, token, .. }) => assert_eq!(token, "x y z"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vector_table_basic_and_ragged() {
        let t = tokens(&["a", "b"]);
        let emb = parse_embeddings(Cursor::new("node,d0,d1\na,1.0,0.0\nb,0.0,1.0\n"), &t).unwrap();
        assert_eq!(emb.dim(), 2);
        assert_eq!(emb.get(1), Some(&[0.0, 1.0][..]));
        match parse_embeddings(Cursor::new("node,d0,d1\na,1.0\n"), &t) {
            Err(Error::Parse { line: 2, token, .. }) => assert_eq!(token, "a"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_embeddings(Cursor::new("node,d0\na,NaN\n"), &t),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_embeddings(Cursor::new("node,d0\na,1\na,2\n"), &t),
            Err(Error::Parse { line: 3, .. })
        ));
        assert_eq!(
            parse_embeddings(Cursor::new("node,d0\nzz,1\nyy,2\n"), &t),
            Err(Error::UnknownTokens {
                tokens: vec!["zz".into(), "yy".into()]
            })
        );
    }

    #[test]
    fn features_need_every_vertex() {
        let t = tokens(&["a", "b"]);
        assert_eq!(
            parse_features(Cursor::new("node,d0\na,1\n"), &t),
            Err(Error::Coverage { missing: vec![1] })
        );
        let x = parse_features(Cursor::new("node,d0\nb,2\na,1\n"), &t).unwrap();
        assert_eq!(x.row(0), &[1.0]);
    }

    #[test]
    fn label_tables() {
        let t = tokens(&["a", "b"]);
        let l = parse_label_table(Cursor::new("node,label\na,0\nb,1\n"), &t).unwrap();
        assert_eq!(l, Labels::Classes(vec![Some(0), Some(1)]));
        assert!(matches!(
            parse_label_table(Cursor::new("node,label\na,0\na,1\n"), &t),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_label_table(Cursor::new("node,label\na,0\nb,1.5\n"), &t),
            Err(Error::Parse { line: 3, .. })
        ));
        let r = parse_label_table(Cursor::new("node,label\na,0.5\nb,-2.0\n"), &t).unwrap();
        assert_eq!(r, Labels::Reals(vec![Some(0.5), Some(-2.0)]));
        assert!(parse_label_table(Cursor::new("node,class\na,0\n"), &t).is_err());
    }

    #[test]
    fn real_labels_survive_integral_values() {
        let t = tokens(&["a", "b"]);
        let labels = Labels::Reals(vec![Some(2.0), Some(-3.0)]);
        let mut buf = Vec::new();
        write_label_table(&labels, &t, &mut buf).unwrap();
        assert_eq!(parse_label_table(Cursor::new(buf), &t).unwrap(), labels);
    }

    #[test]
    fn seed_files() {
        let t = tokens(&["a", "b", "c"]);
        assert_eq!(parse_seed_file(Cursor::new("# s\nc\na\n"), &t).unwrap(), vec![2, 0]);
        assert!(parse_seed_file(Cursor::new("a\na\n"), &t).is_err());
        assert!(parse_seed_file(Cursor::new("q\n"), &t).is_err());
        assert!(parse_seed_file(Cursor::new("# nothing\n"), &t).is_err());
    }

    fn subgroup_report() -> Report {
        let per_hop = (1..=3)
            .map(|hop| HopAccuracy {
                hop,
                accuracy: 1.0 / (hop as f64 + 1.0),
                count: hop as usize * 2,
            })
            .collect::<Vec<_>>();
        let subgroups = SubgroupReport {
            max_discrepancy: crate::eval::max_discrepancy(&per_hop),
            per_hop,
            train_accuracy: 1.0,
            test_accuracy: 0.4,
            test_count: 12,
            max_hop: 5,
        };
        let mut params = BTreeMap::new();
        params.insert("max_hop".into(), "5".into());
        Report::new(
            "0.1.0",
            params,
            Payload::Evaluation(EvaluationSummary {
                subgroups,
                acc_md: "40.00|25.00".into(),
                ordering: None,
                distortion: None,
                bounds: Vec::new(),
            }),
        )
    }

    #[test]
    fn tabular_has_row_per_hop() {
        let text = render_report(&subgroup_report(), ReportFormat::Tabular);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], "hop,value,count");
        assert_eq!(rows[1], "1,0.5,2");
        assert_eq!(rows[2], "2,0.333333,4");
    }

    #[test]
    fn structured_is_deterministic_and_reparses() {
        let r = subgroup_report();
        let a = render_report(&r, ReportFormat::Structured);
        assert_eq!(a, render_report(&r.clone(), ReportFormat::Structured));
        let back = parse_structured_report(&a).unwrap();
        assert_eq!(back, r.rounded());
        assert!(a.contains("0.333333"));
        assert!(!a.contains("0.3333333"));
    }

    #[test]
    fn round6_examples() {
        assert_eq!(round6(1.0 / 3.0), 0.333333);
        assert_eq!(round6(123456789.0), 123457000.0);
        assert_eq!(round6(0.0), 0.0);
        assert_eq!(round6(-2.5e-9), -2.5e-9);
    }
}
