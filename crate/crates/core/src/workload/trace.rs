use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::event::{EventKind, RequestEvent};
use crate::error::{Error, Result};

/// Parses `timestamp,op,id` lines. Blank lines are ignored; timestamps must
/// be finite and non-decreasing.
pub fn parse_trace_str(text: &str) -> Result<Vec<RequestEvent>> {
    let mut events = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut fields = raw.splitn(3, ',');
        let (Some(ts), Some(op), Some(id)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected timestamp,op,id, got {raw:?}")));
        };
        let timestamp: f64 = ts.parse().map_err(|e| err(format!("bad timestamp {ts:?}: {e}")))?;
        if !timestamp.is_finite() {
            return Err(err(format!("timestamp {ts:?} is not finite")));
        }
        if timestamp < last {
            return Err(err(format!("timestamp {timestamp} goes back in time")));
        }
        last = timestamp;
        let kind: EventKind = op.parse().map_err(|_| err(format!("unknown op code {op:?}")))?;
        if id.is_empty() {
            return Err(err("empty identifier".into()));
        }
        events.push(RequestEvent::new(timestamp, kind, id));
    }
    Ok(events)
}

pub fn parse_trace(path: &Path) -> Result<Vec<RequestEvent>> {
    parse_trace_str(&fs::read_to_string(path)?)
}

pub fn write_trace<W: Write>(events: &[RequestEvent], mut out: W) -> io::Result<()> {
    for e in events {
        writeln!(out, "{},{},{}", e.timestamp, e.kind.code(), e.target)?;
    }
    Ok(())
}

pub fn serialize_trace(events: &[RequestEvent], path: &Path) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write_trace(events, &mut out)?;
    out.flush()?;
    Ok(())
}
