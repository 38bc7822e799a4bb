use std::io::{BufRead, BufReader, Read};

use super::{Builder, Folksonomy};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Trim and lowercase tags. On by default.
    pub normalize_tags: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            normalize_tags: true,
        }
    }
}

/// Reads header-less `user\tresource\ttag\ttimestamp` lines.
///
/// Blank lines are skipped. Exact duplicate (user, resource, tag) triples
/// collapse into one assignment carrying the earliest timestamp.
pub fn parse_dataset<R: Read>(input: R, opts: ParseOptions) -> Result<Folksonomy> {
    let mut reader = BufReader::with_capacity(1 << 16, input);
    let mut builder = Builder::default();
    let mut buf = Vec::new();
    let mut tag_buf = String::new();
    let mut line_no = 0usize;

    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| malformed(line_no, "not valid UTF-8"))?;
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }

        let mut fields = line.split('\t');
        let (Some(user), Some(resource), Some(tag), Some(ts), None) = (
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
        ) else {
            let n = line.split('\t').count();
            return Err(malformed(
                line_no,
                &format!("expected 4 tab-separated fields, found {n}"),
            ));
        };

        if user.is_empty() || resource.is_empty() {
            return Err(malformed(line_no, "empty user or resource id"));
        }
        let timestamp: i64 = ts
            .trim()
            .parse()
            .map_err(|_| malformed(line_no, &format!("timestamp `{ts}` is not an integer")))?;
        if timestamp < 0 {
            return Err(malformed(line_no, "negative timestamp"));
        }

        let tag = if opts.normalize_tags {
            tag_buf.clear();
            tag_buf.extend(tag.trim().chars().flat_map(char::to_lowercase));
            tag_buf.as_str()
        } else {
            tag
        };
        if tag.is_empty() {
            return Err(malformed(line_no, "empty tag"));
        }

        builder.add(user, resource, tag, timestamp);
    }

    if builder.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(builder.finish())
}

fn malformed(line: usize, reason: &str) -> Error {
    Error::MalformedLine {
        line,
        reason: reason.to_owned(),
    }
}
