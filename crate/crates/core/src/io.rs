//! Plain-text file formats.
//!
//! * labels: a header `alpha=<real>` then one 1-based label per line;
//! * edge list: one `u v` pair per line (consecutive labels);
//! * schedule: one arrival time per line, `inf` allowed, `#` comments (provenance);
//! * Ψ dump: one real per line, `j`-th line is `Ψ_j`.
//!
//! Partitions use the label format; the bijection with graphs is the identity on files.

use crate::error::{Error, Result};
use crate::graph::{Label, LabelSequence};
use crate::schedule::{validate_schedule, ArrivalSchedule, ArrivalTime};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn format_labels(alpha: f64, labels: &LabelSequence) -> String {
    let mut out = format!("alpha={alpha}\n");
    for l in labels.as_slice() {
        writeln!(out, "{l}").unwrap();
    }
    out
}

/// Returns the `alpha` header (if any) and the labels.
pub fn parse_labels(text: &str) -> Result<(Option<f64>, LabelSequence)> {
    let mut alpha = None;
    let mut labels = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(v) = l.strip_prefix("alpha=") {
            if !labels.is_empty() || alpha.is_some() {
                return Err(Error::Parse(format!("line {line}: unexpected alpha header")));
            }
            alpha = Some(v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {line}: {e}")))?);
            continue;
        }
        labels.push(l.parse::<Label>().map_err(|e| Error::Parse(format!("line {line}: {l:?}: {e}")))?);
    }
    Ok((alpha, LabelSequence::new(labels)?))
}

pub fn read_labels_file(path: &Path) -> Result<(Option<f64>, LabelSequence)> {
    parse_labels(&fs::read_to_string(path)?)
}

pub fn format_edge_list(labels: &LabelSequence) -> String {
    let mut out = String::new();
    for (u, v) in labels.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<LabelSequence> {
    let mut labels = Vec::new();
    for (line, l) in content_lines(text) {
        let mut it = l.split_whitespace();
        for _ in 0..2 {
            let tok = it.next().ok_or_else(|| Error::Parse(format!("line {line}: expected two labels")))?;
            labels.push(tok.parse::<Label>().map_err(|e| Error::Parse(format!("line {line}: {e}")))?);
        }
        if it.next().is_some() {
            return Err(Error::Parse(format!("line {line}: expected two labels")));
        }
    }
    LabelSequence::new(labels)
}

pub fn format_schedule(schedule: &ArrivalSchedule) -> String {
    let mut out = format!("# provenance: {}\n", schedule.provenance());
    for t in schedule.finite_times() {
        writeln!(out, "{t}").unwrap();
    }
    out.push_str("inf\n");
    out
}

pub fn parse_schedule(text: &str) -> Result<ArrivalSchedule> {
    let raw = content_lines(text)
        .map(|(line, l)| l.parse::<ArrivalTime>().map_err(|e| Error::Parse(format!("line {line}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    validate_schedule(&raw)
}

pub fn read_schedule_file(path: &Path) -> Result<ArrivalSchedule> {
    parse_schedule(&fs::read_to_string(path)?)
}

pub fn format_psi(psi: &[f64]) -> String {
    let mut out = String::new();
    for p in psi {
        writeln!(out, "{p:e}").unwrap();
    }
    out
}

pub fn parse_psi(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(line, l)| l.parse::<f64>().map_err(|e| Error::Parse(format!("line {line}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Provenance;

    #[test]
    fn labels_round_trip() {
        let l = LabelSequence::new(vec![1, 1, 2, 1, 3]).unwrap();
        let text = format_labels(0.5, &l);
        assert!(text.starts_with("alpha=0.5\n"));
        let (alpha, back) = parse_labels(&text).unwrap();
        assert_eq!(alpha, Some(0.5));
        assert_eq!(back, l);
        assert!(parse_labels("alpha=0\n1\n3\n").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let l = LabelSequence::new(vec![1, 2, 2, 3]).unwrap();
        let text = format_edge_list(&l);
        assert_eq!(text, "1 2\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap(), l);
    }

    #[test]
    fn schedule_round_trip() {
        let s = ArrivalSchedule::from_finite(vec![1, 2, 4], Provenance::Constant { d: 1 }).unwrap();
        let text = format_schedule(&s);
        assert!(text.contains("inf"));
        assert_eq!(parse_schedule(&text).unwrap().finite_times(), &[1, 2, 4]);
        assert!(parse_schedule("1\ninf\n3\n").is_err());
    }

    #[test]
    fn psi_round_trip() {
        let psi = vec![1.0, 0.25, 1.0 / 3.0];
        assert_eq!(parse_psi(&format_psi(&psi)).unwrap(), psi);
    }
}
