//! The JSON-lines record stream written by `--records`.
//!
//! One object per ledger record used by a run, with the stable fields
//!
//! | field     | type    | meaning                                              |
//! |-----------|---------|------------------------------------------------------|
//! | `sseq`    | string  | spectral sequence id (`L2`, `S3`, `EHP`, ...)        |
//! | `source`  | string  | source class, `name(group)[cell]@offset`             |
//! | `target`  | string  | target class, same syntax                            |
//! | `tag`     | string  | provenance tag                                       |
//! | `comment` | string  | provenance comment (possibly empty)                  |
//! | `fired`   | bool    | whether at least one line pair of the record fired   |
//! | `length`  | string? | ordinal length of the first fired pair, if any       |

use serde::{Deserialize, Serialize};
use sseq_engine::Computed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub sseq: String,
    pub source: String,
    pub target: String,
    pub tag: String,
    pub comment: String,
    pub fired: bool,
    pub length: Option<String>,
}

/// The record stream of a run, one JSON object per line.
pub fn record_lines(c: &Computed) -> Vec<RecordLine> {
    c.records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let first = c.fired.iter().find(|p| p.record == i);
            RecordLine {
                sseq: r.sseq.clone(),
                source: r.source.to_string(),
                target: r.target.to_string(),
                tag: r.tag.to_string(),
                comment: r.comment.clone(),
                fired: first.is_some(),
                length: first.map(|p| p.length.to_string()),
            }
        })
        .collect()
}

pub fn to_json_lines(lines: &[RecordLine]) -> String {
    lines
        .iter()
        .map(|l| serde_json::to_string(l).expect("record lines serialize") + "\n")
        .collect()
}
