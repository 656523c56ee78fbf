//! On-disk formats: topology files, trace CSVs, and state dumps.

use std::fs;
use std::path::Path;

use icnsim_core::learning::{QTables, TableView};
use icnsim_core::topology::{parse_topology, serialize_topology, Topology};
use icnsim_core::workload::{validate_trace, TraceEpoch};

use crate::CliFailure;

/// Reads and parses a topology file. Parse errors carry the path and line.
pub fn load_topology(path: &Path) -> Result<Topology, CliFailure> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliFailure::Config(format!("cannot read topology file {}: {e}", path.display())))?;
    parse_topology(&text)
        .map_err(|e| CliFailure::Config(format!("{}: {e}", path.display())))
}

pub fn save_topology(path: &Path, topology: &Topology) -> Result<(), CliFailure> {
    fs::write(path, serialize_topology(topology))
        .map_err(|e| CliFailure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parses the trace CSV format: header `epoch,content_id,requests`, epochs
/// 0-based and contiguous, missing (epoch, content) pairs count as 0.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEpoch>, CliFailure> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| CliFailure::Config("trace file is empty".into()))?
        .1
        .trim();
    if header != "epoch,content_id,requests" {
        return Err(CliFailure::Config(format!(
            "trace line 1: expected header 'epoch,content_id,requests', got '{header}'"
        )));
    }
    let mut rows: Vec<(u64, usize, u64)> = Vec::new();
    let mut max_epoch = 0u64;
    let mut max_content = 0usize;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliFailure::Config(format!(
                "trace line {line_no}: expected 3 fields, got {}",
                fields.len()
            )));
        }
        let epoch: u64 = fields[0].trim().parse().map_err(|_| {
            CliFailure::Config(format!("trace line {line_no}: bad epoch '{}'", fields[0]))
        })?;
        let content: usize = fields[1].trim().parse().map_err(|_| {
            CliFailure::Config(format!("trace line {line_no}: bad content_id '{}'", fields[1]))
        })?;
        let requests: u64 = fields[2].trim().parse().map_err(|_| {
            CliFailure::Config(format!(
                "trace line {line_no}: bad request count '{}'",
                fields[2]
            ))
        })?;
        max_epoch = max_epoch.max(epoch);
        max_content = max_content.max(content);
        rows.push((epoch, content, requests));
    }
    if rows.is_empty() {
        return Err(CliFailure::Config("trace has no data rows".into()));
    }
    let contents = max_content + 1;
    let mut epochs: Vec<TraceEpoch> = (0..=max_epoch)
        .map(|e| TraceEpoch { epoch: e, counts: vec![0; contents] })
        .collect();
    for (epoch, content, requests) in rows {
        epochs[epoch as usize].counts[content] += requests;
    }
    validate_trace(&epochs).map_err(|e| CliFailure::Config(format!("bad trace: {e}")))?;
    Ok(epochs)
}

pub fn trace_to_csv(epochs: &[TraceEpoch]) -> String {
    let mut out = String::from("epoch,content_id,requests\n");
    for epoch in epochs {
        for (content, &count) in epoch.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", epoch.epoch, content, count));
        }
    }
    out
}

pub fn load_trace(path: &Path) -> Result<Vec<TraceEpoch>, CliFailure> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliFailure::Config(format!("cannot read trace file {}: {e}", path.display())))?;
    parse_trace(&text).map_err(|e| match e {
        CliFailure::Config(msg) => CliFailure::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_trace(path: &Path, epochs: &[TraceEpoch]) -> Result<(), CliFailure> {
    fs::write(path, trace_to_csv(epochs))
        .map_err(|e| CliFailure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Q-table dump: `node,content,neighbor,q_value` over the live table.
pub fn qtables_csv(tables: &QTables) -> String {
    let mut out = String::from("node,content,neighbor,q_value\n");
    for (node, content, neighbor, q) in tables.entries(TableView::Live) {
        out.push_str(&format!("{node},{content},{neighbor},{q}\n"));
    }
    out
}

/// Cache occupancy dump: `step,node,content` rows.
pub fn cache_dump_csv(rows: &[(u64, usize, usize)]) -> String {
    let mut out = String::from("step,node,content\n");
    for (step, node, content) in rows {
        out.push_str(&format!("{step},{node},{content}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_round_trips_and_validates() {
        let text = "epoch,content_id,requests\n0,0,10\n0,1,30\n1,0,5\n1,1,1\n";
        let epochs = parse_trace(text).unwrap();
        assert_eq!(epochs.len(), 2);
        assert_eq!(epochs[0].counts, vec![10, 30]);
        assert_eq!(epochs[0].rates(), vec![0.25, 0.75]);
        assert_eq!(parse_trace(&trace_to_csv(&epochs)).unwrap(), epochs);
    }

    #[test]
    fn trace_errors_name_the_line() {
        let err = parse_trace("epoch,content_id,requests\n0,0,10\n1,x,3\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_trace("epoch,content_id,requests\n0,0,-4\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        // A skipped epoch densifies to an all-zero epoch and is rejected.
        let err = parse_trace("epoch,content_id,requests\n0,0,1\n2,0,1\n").unwrap_err();
        assert!(err.to_string().contains("epoch 1"), "{err}");
    }

    #[test]
    fn single_epoch_traces_are_stationary_workloads() {
        let epochs = parse_trace("epoch,content_id,requests\n0,0,3\n0,1,1\n").unwrap();
        assert_eq!(epochs.len(), 1);
        assert_eq!(epochs[0].rates(), vec![0.75, 0.25]);
    }
}
