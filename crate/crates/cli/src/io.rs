//! Input loading and the error-to-exit-code mapping.

use tempoflow_core::parse::{parse_interactions_windowed, Format};
use tempoflow_core::{GraphError, TemporalGraph, Timestamp};

/// Error classes aligned with the exit codes: usage 1, data 2, internal 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Data(e.to_string())
    }
}

pub fn load_graph(
    file: &str,
    format: Format,
    window: Option<(i64, i64)>,
) -> Result<TemporalGraph, CliError> {
    let window = window.map(|(a, b)| (Timestamp(a), Timestamp(b)));
    let graph = if file == "-" {
        parse_interactions_windowed(std::io::stdin().lock(), format, window)
    } else {
        let f = std::fs::File::open(file)
            .map_err(|e| CliError::Data(format!("{file}: {e}")))?;
        parse_interactions_windowed(std::io::BufReader::new(f), format, window)
    }?;
    Ok(graph)
}
