//! Ingestion of interaction records and canonical serialization.
//!
//! One record per line: `src dst timestamp quantity`, whitespace-separated
//! for TSV and comma-separated for CSV. Lines starting with `#` and blank
//! lines are skipped.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::GraphError;
use crate::graph::{GraphBuilder, TemporalGraph, Timestamp};
use crate::quantity::Quantity;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Tsv,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected tsv or csv)")),
        }
    }
}

pub fn parse_interactions<R: Read>(reader: R, format: Format) -> Result<TemporalGraph, GraphError> {
    parse_interactions_windowed(reader, format, None)
}

/// Parse with an optional inclusive time window; interactions outside the
/// window are disregarded at ingestion.
pub fn parse_interactions_windowed<R: Read>(
    reader: R,
    format: Format,
    window: Option<(Timestamp, Timestamp)>,
) -> Result<TemporalGraph, GraphError> {
    let mut builder = GraphBuilder::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            Format::Tsv => line.split_whitespace().collect(),
            Format::Csv => line.split(',').map(str::trim).collect(),
        };
        if fields.len() != 4 {
            return Err(GraphError::MalformedRecord {
                line: line_no,
                reason: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let t: i64 = fields[2].parse().map_err(|_| GraphError::MalformedRecord {
            line: line_no,
            reason: format!("bad timestamp `{}`", fields[2]),
        })?;
        if fields[3].starts_with('-') {
            return Err(GraphError::NegativeQuantity { line: line_no });
        }
        let q: u64 = fields[3].parse().map_err(|_| GraphError::MalformedRecord {
            line: line_no,
            reason: format!("bad quantity `{}`", fields[3]),
        })?;
        if q > Quantity::MAX_FINITE {
            return Err(GraphError::QuantityOverflow);
        }
        if let Some((lo, hi)) = window {
            if t < lo.0 || t > hi.0 {
                continue;
            }
        }
        builder.add(fields[0], fields[1], t, q).map_err(|e| match e {
            GraphError::SelfLoop { .. } => GraphError::SelfLoop { line: line_no },
            other => other,
        })?;
    }
    Ok(builder.build())
}

/// Write the graph back out as TSV, edges in id order and interactions in
/// time order. The output is a canonically sorted multiset of the records
/// the graph was built from.
pub fn serialize<W: Write>(graph: &TemporalGraph, out: &mut W) -> std::io::Result<()> {
    for e in graph.edges() {
        for i in &e.interactions {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                graph.name(e.src),
                graph.name(e.dst),
                i.t.0,
                i.q
            )?;
        }
    }
    Ok(())
}
