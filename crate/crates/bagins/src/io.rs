//! Reading and writing PCM documents.
//!
//! JSON schema:
//! `{"id": str, "n": int, "items": [str], "judgments": [{"i": int, "j": int,
//! "grade": int, "direction": "i_over_j"|"j_over_i"}]}`
//!
//! CSV schema: a comment line `# id=<id> n=<n>`, a header `i,j,grade,direction`,
//! then one judgment per row. CSV carries no item names; parsing assigns
//! `item-1..item-n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcm::{default_item_names, Direction, Grade, Judgment, LinguisticPcm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcmFormat {
    Json,
    Csv,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PcmDoc {
    pub id: String,
    pub n: usize,
    pub items: Vec<String>,
    pub judgments: Vec<JudgmentDoc>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct JudgmentDoc {
    pub i: usize,
    pub j: usize,
    pub grade: u8,
    pub direction: Direction,
}

impl PcmDoc {
    pub(crate) fn from_pcm(pcm: &LinguisticPcm) -> PcmDoc {
        PcmDoc {
            id: pcm.id.clone(),
            n: pcm.n,
            items: pcm.items.clone(),
            judgments: pcm
                .judgments
                .iter()
                .map(|j| JudgmentDoc {
                    i: j.i(),
                    j: j.j(),
                    grade: j.grade().get(),
                    direction: j.direction(),
                })
                .collect(),
        }
    }

    pub(crate) fn into_pcm(self) -> Result<LinguisticPcm> {
        let mut judgments = Vec::with_capacity(self.judgments.len());
        for (idx, doc) in self.judgments.into_iter().enumerate() {
            judgments.push(build_judgment(
                &format!("judgments[{idx}]"),
                doc.i,
                doc.j,
                doc.grade,
                doc.direction,
                self.n,
            )?);
        }
        Ok(LinguisticPcm::new(self.id, self.n, self.items, judgments))
    }
}

fn build_judgment(
    location: &str,
    i: usize,
    j: usize,
    grade: u8,
    direction: Direction,
    n: usize,
) -> Result<Judgment> {
    let grade = Grade::new(grade)
        .map_err(|_| Error::parse(location, format!("label grade out of range: {grade}")))?;
    if i == j {
        return Err(Error::parse(location, "diagonal pair not allowed"));
    }
    if i > j {
        return Err(Error::parse(
            location,
            format!("pair ({i},{j}) must be upper-triangle (i < j)"),
        ));
    }
    if j >= n {
        return Err(Error::parse(
            location,
            format!("index out of range: pair ({i},{j}) with n={n}"),
        ));
    }
    Judgment::new(i, j, grade, direction)
}

/// Parses a PCM document. Field-level problems (grade range, pair shape,
/// index bounds) are parse errors with locations; pair coverage is left to
/// [`crate::pcm::validate_pcm`].
pub fn parse_pcm(text: &str, format: PcmFormat) -> Result<LinguisticPcm> {
    match format {
        PcmFormat::Json => parse_json(text),
        PcmFormat::Csv => parse_csv(text),
    }
}

/// Serializes a PCM document; the inverse of [`parse_pcm`].
pub fn serialize_pcm(pcm: &LinguisticPcm, format: PcmFormat) -> String {
    match format {
        PcmFormat::Json => {
            serde_json::to_string_pretty(&PcmDoc::from_pcm(pcm)).expect("PCM serializes")
        }
        PcmFormat::Csv => serialize_csv(pcm),
    }
}

fn parse_json(text: &str) -> Result<LinguisticPcm> {
    let doc: PcmDoc = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("json line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    doc.into_pcm()
}

fn parse_csv(text: &str) -> Result<LinguisticPcm> {
    let mut lines = text.lines().enumerate();

    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::parse("line 1", "empty document"))?;
    let (id, n) = parse_csv_preamble(first)?;

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("line 2", "missing header"))?;
    if header.trim() != "i,j,grade,direction" {
        return Err(Error::parse(
            "line 2",
            format!("expected header 'i,j,grade,direction', got '{header}'"),
        ));
    }

    let mut judgments = Vec::new();
    for (lineno, line) in lines {
        let location = format!("line {}", lineno + 1);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                &location,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let i: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(&location, format!("malformed index '{}'", fields[0])))?;
        let j: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(&location, format!("malformed index '{}'", fields[1])))?;
        let grade: u8 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(&location, format!("malformed grade '{}'", fields[2])))?;
        let direction = Direction::parse(fields[3].trim())
            .ok_or_else(|| Error::parse(&location, format!("unknown direction '{}'", fields[3])))?;
        judgments.push(build_judgment(&location, i, j, grade, direction, n)?);
    }

    Ok(LinguisticPcm::new(id, n, default_item_names(n), judgments))
}

fn parse_csv_preamble(line: &str) -> Result<(String, usize)> {
    let location = "line 1";
    let rest = line
        .strip_prefix("# id=")
        .ok_or_else(|| Error::parse(location, "expected comment line '# id=<id> n=<n>'"))?;
    let split = rest
        .rfind(" n=")
        .ok_or_else(|| Error::parse(location, "missing ' n=' in comment line"))?;
    let id = rest[..split].to_string();
    let n: usize = rest[split + 3..]
        .trim()
        .parse()
        .map_err(|_| Error::parse(location, format!("malformed n '{}'", &rest[split + 3..])))?;
    Ok((id, n))
}

fn serialize_csv(pcm: &LinguisticPcm) -> String {
    let mut out = format!("# id={} n={}\ni,j,grade,direction\n", pcm.id, pcm.n);
    for j in &pcm.judgments {
        out.push_str(&format!(
            "{},{},{},{}\n",
            j.i(),
            j.j(),
            j.grade(),
            j.direction().as_str()
        ));
    }
    out
}
