//! Table rows and their text renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use lensdim_core::{Bound, Provenance, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Md,
    Jsonl,
}

/// One row of a bounds table. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u64,
    pub dim: u64,
    pub e: u64,
    pub lower: u64,
    pub lower_rule: String,
    pub upper: u64,
    pub upper_rule: String,
    pub upper_category: String,
    pub gap: u64,
    pub eff: i64,
    pub exact: bool,
}

pub const COLUMNS: [&str; 11] = [
    "m",
    "dim",
    "e",
    "lower",
    "lower_rule",
    "upper",
    "upper_rule",
    "upper_category",
    "gap",
    "eff",
    "exact",
];

impl TableRow {
    pub fn from_report(r: &Report) -> Self {
        TableRow {
            m: r.space.m(),
            dim: r.space.dim(),
            e: r.space.e(),
            lower: r.lower.dim,
            lower_rule: r.lower.rule_id.clone(),
            upper: r.upper.dim,
            upper_rule: r.upper.rule_id.clone(),
            upper_category: r.upper.category.as_str().to_string(),
            gap: r.gap(),
            eff: r.efficiency(),
            exact: r.exact,
        }
    }

    fn cells(&self) -> [String; 11] {
        [
            self.m.to_string(),
            self.dim.to_string(),
            self.e.to_string(),
            self.lower.to_string(),
            self.lower_rule.clone(),
            self.upper.to_string(),
            self.upper_rule.clone(),
            self.upper_category.clone(),
            self.gap.to_string(),
            self.eff.to_string(),
            self.exact.to_string(),
        ]
    }
}

pub fn render_rows(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Jsonl => rows_to_jsonl(rows),
        Format::Md => rows_to_markdown(rows),
        Format::Human => rows_to_human(rows),
    }
}

pub fn rows_to_csv(rows: &[TableRow]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(COLUMNS).expect("writing to memory");
    }
    for row in rows {
        w.serialize(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn parse_csv(text: &str) -> Result<Vec<TableRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn rows_to_jsonl(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("rows serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_jsonl(text: &str) -> Result<Vec<TableRow>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub fn rows_to_markdown(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
    for row in rows {
        let _ = writeln!(out, "| {} |", row.cells().join(" | "));
    }
    out
}

pub fn rows_to_human(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 11]> = rows.iter().map(TableRow::cells).collect();
    let mut widths: Vec<usize> = COLUMNS.iter().map(|c| c.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |items: &mut dyn Iterator<Item = &str>, out: &mut String| {
        let parts: Vec<String> = items.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut COLUMNS.iter().copied(), &mut out);
    for row in &cells {
        line(&mut row.iter().map(String::as_str), &mut out);
    }
    out
}

fn flags(b: &Bound) -> String {
    let mut tags = Vec::new();
    if b.direction == lensdim_core::Direction::Upper {
        tags.push(b.category.as_str().to_string());
    } else {
        tags.push("nonembedding".to_string());
    }
    match b.provenance {
        Provenance::Proven => {}
        Provenance::Conjectural => tags.push("CONJECTURAL".into()),
        Provenance::ExternalInput => tags.push("external-input".into()),
    }
    if b.transferred {
        tags.push("transferred".into());
    }
    if b.direction == lensdim_core::Direction::Upper && b.metastable {
        tags.push("metastable".into());
    }
    tags.join(", ")
}

/// Human-readable report; `all` lists every bound that applied.
pub fn report_to_human(r: &Report, all: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  (m = {}, manifold dimension {})",
        r.space,
        r.space.m(),
        r.space.dim()
    );
    if r.exact {
        let _ = writeln!(out, "exact: {} ({} + {})", r.upper.dim, r.lower.rule_id, r.upper.rule_id);
    } else {
        let _ = writeln!(
            out,
            "lower {} ({}), upper {} ({}), gap {}",
            r.lower.dim,
            r.lower.rule_id,
            r.upper.dim,
            r.upper.rule_id,
            r.gap()
        );
    }
    let _ = writeln!(out, "  lower: embedding dimension >= {} [{}]", r.lower.dim, flags(&r.lower));
    let _ = writeln!(out, "         {}", r.lower.citation);
    let _ = writeln!(out, "  upper: embeds in R^{} [{}]", r.upper.dim, flags(&r.upper));
    let _ = writeln!(out, "         {}", r.upper.citation);
    let _ = writeln!(out, "  efficiency: {}", r.efficiency());
    if all {
        let _ = writeln!(out, "all bounds:");
        for b in &r.all_bounds {
            let rel = match b.direction {
                lensdim_core::Direction::Lower => ">=",
                lensdim_core::Direction::Upper => "<=",
            };
            let _ = writeln!(out, "  {rel} {:<4} {} [{}] {}", b.dim, b.rule_id, flags(b), b.citation);
        }
    }
    out
}

pub fn report_to_markdown(r: &Report, all: bool) -> String {
    let mut out = rows_to_markdown(&[TableRow::from_report(r)]);
    if all {
        out.push('\n');
        let _ = writeln!(out, "| direction | dim | rule | flags | citation |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for b in &r.all_bounds {
            let dir = match b.direction {
                lensdim_core::Direction::Lower => "lower",
                lensdim_core::Direction::Upper => "upper",
            };
            let _ = writeln!(out, "| {dir} | {} | {} | {} | {} |", b.dim, b.rule_id, flags(b), b.citation);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<TableRow> {
        vec![
            TableRow {
                m: 3,
                dim: 7,
                e: 2,
                lower: 10,
                lower_rule: "euler-class-nonembedding".into(),
                upper: 11,
                upper_rule: "induction:round-one".into(),
                upper_category: "topological".into(),
                gap: 1,
                eff: 3,
                exact: false,
            },
            TableRow {
                m: 8,
                dim: 17,
                e: 2,
                lower: 33,
                lower_rule: "power-of-two-optimality".into(),
                upper: 33,
                upper_rule: "hhmp".into(),
                upper_category: "smooth".into(),
                gap: 0,
                eff: 1,
                exact: true,
            },
        ]
    }

    #[test]
    fn csv_header_and_round_trip() {
        let text = rows_to_csv(&sample());
        assert!(text.starts_with("m,dim,e,lower,lower_rule,upper,upper_rule,upper_category,gap,eff,exact\n"));
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed, sample());
        assert_eq!(rows_to_csv(&parsed), text);
    }

    #[test]
    fn jsonl_round_trip() {
        let text = rows_to_jsonl(&sample());
        assert_eq!(text.lines().count(), 2);
        assert_eq!(rows_to_jsonl(&parse_jsonl(&text).unwrap()), text);
    }

    #[test]
    fn markdown_shape() {
        let text = rows_to_markdown(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.matches('|').count() == 12));
    }

    #[test]
    fn human_columns_align() {
        let text = rows_to_human(&sample());
        let starts: Vec<usize> = text.lines().map(|l| l.find("lower").unwrap_or(usize::MAX)).collect();
        assert_eq!(starts[0], text.lines().nth(1).unwrap().find("10").unwrap());
    }
}
