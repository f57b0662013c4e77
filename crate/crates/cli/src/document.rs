//! Square documents and their text, JSON and CSV encodings.
//!
//! Text: optional `key: value` header lines (`primes`, `class`, `orbit`,
//! `planes`), then four lines of four whitespace-separated integers. A
//! `primes:` header marks a multiplicative square. Documents in a catalog are
//! separated by blank lines; lines starting with `#` are comments.
//!
//! JSON: one object per line with keys `kind`, `entries`, and optionally
//! `primes`, `class`, `orbit`, `planes`.
//!
//! CSV: header `kind,primes,e0,...,e15,class`; entries flattened row-major,
//! primes space-separated (empty for additive squares).

use std::fmt::Write as _;

use magic4::correspond::{apply_f, parse_mult_square};
use magic4::{AdditiveSquare, MultSquare, PrimeBasis, Square, ValueSquare};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDocument {
    pub kind: Kind,
    pub entries: [[u64; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<[u64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    /// Index of the square's D8 orbit among the 880 orbits of normal squares,
    /// ordered by canonical representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<usize>,
    /// Orbit labels of the bit planes, weight 8 first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planes: Option<[String; 4]>,
}

impl SquareDocument {
    pub fn additive(sq: &AdditiveSquare) -> Self {
        SquareDocument {
            kind: Kind::Additive,
            entries: sq.map(u64::from).rows().to_owned(),
            primes: None,
            class: None,
            orbit: None,
            planes: None,
        }
    }

    pub fn multiplicative(m: &MultSquare) -> Self {
        SquareDocument {
            kind: Kind::Multiplicative,
            entries: *m.values().rows(),
            primes: Some(m.basis().primes()),
            class: None,
            orbit: None,
            planes: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.kind {
            Kind::Additive => self.additive_square().map(|_| ()),
            Kind::Multiplicative => self.mult_square().map(|_| ()),
        }
    }

    pub fn basis(&self) -> Result<PrimeBasis, CliError> {
        let primes = self
            .primes
            .ok_or_else(|| CliError::Validation("multiplicative square needs primes".into()))?;
        Ok(PrimeBasis::new(primes)?)
    }

    /// Entries as an additive square; fails on entries beyond `u32`.
    pub fn additive_square(&self) -> Result<AdditiveSquare, CliError> {
        let mut rows = [[0u32; 4]; 4];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[i][j] = u32::try_from(v).map_err(|_| {
                    CliError::Validation(format!("entry {v} at ({i},{j}) is too large"))
                })?;
            }
        }
        Ok(Square::new(rows))
    }

    pub fn mult_square(&self) -> Result<MultSquare, CliError> {
        let basis = self.basis()?;
        let values: ValueSquare = Square::new(self.entries);
        Ok(parse_mult_square(&values, &basis)?)
    }

    /// The additive side: the entries themselves, or the image of a
    /// multiplicative square.
    pub fn to_additive(&self) -> Result<AdditiveSquare, CliError> {
        match self.kind {
            Kind::Additive => self.additive_square(),
            Kind::Multiplicative => Ok(apply_f(&self.mult_square()?)),
        }
    }

    /// Shifts 1-based additive entries down to 0-based.
    pub fn shift_one_based(&mut self) -> Result<(), CliError> {
        if self.kind != Kind::Additive {
            return Ok(());
        }
        for (i, row) in self.entries.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = v
                    .checked_sub(1)
                    .ok_or_else(|| CliError::Validation(format!("1-based entry 0 at ({i},{j})")))?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(p) = self.primes {
            let _ = writeln!(out, "primes: {} {} {} {}", p[0], p[1], p[2], p[3]);
        }
        if let Some(c) = &self.class {
            let _ = writeln!(out, "class: {c}");
        }
        if let Some(o) = self.orbit {
            let _ = writeln!(out, "orbit: {o}");
        }
        if let Some(p) = &self.planes {
            let _ = writeln!(out, "planes: {}", p.join(" "));
        }
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut rec = Vec::with_capacity(19);
        rec.push(
            match self.kind {
                Kind::Additive => "additive",
                Kind::Multiplicative => "multiplicative",
            }
            .to_string(),
        );
        rec.push(
            self.primes
                .map(|p| p.map(|x| x.to_string()).join(" "))
                .unwrap_or_default(),
        );
        rec.extend(self.entries.iter().flatten().map(u64::to_string));
        rec.push(self.class.clone().unwrap_or_default());
        rec
    }
}

pub fn csv_header() -> Vec<String> {
    let mut h = vec!["kind".to_string(), "primes".to_string()];
    h.extend((0..16).map(|i| format!("e{i}")));
    h.push("class".to_string());
    h
}

fn parse_u64s(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>().map_err(|_| {
                CliError::Validation(format!("{what}: {t:?} is not a non-negative integer"))
            })
        })
        .collect()
}

pub fn parse_primes(s: &str) -> Result<[u64; 4], CliError> {
    let v = parse_u64s(s, "primes")?;
    v.try_into()
        .map_err(|v: Vec<u64>| CliError::Validation(format!("expected 4 primes, got {}", v.len())))
}

/// One text document (no blank lines inside).
pub fn parse_text_document(block: &str) -> Result<SquareDocument, CliError> {
    let mut doc = SquareDocument {
        kind: Kind::Additive,
        entries: [[0; 4]; 4],
        primes: None,
        class: None,
        orbit: None,
        planes: None,
    };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for line in block.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "primes" => {
                    doc.primes = Some(parse_primes(value)?);
                    doc.kind = Kind::Multiplicative;
                }
                "class" => doc.class = Some(value.to_string()),
                "orbit" => {
                    doc.orbit = Some(value.parse().map_err(|_| {
                        CliError::Validation(format!("orbit: {value:?} is not an index"))
                    })?)
                }
                "planes" => {
                    let labels: Vec<String> = value.split_whitespace().map(String::from).collect();
                    doc.planes =
                        Some(labels.try_into().map_err(|_| {
                            CliError::Validation("planes: expected 4 labels".into())
                        })?);
                }
                other => return Err(CliError::Validation(format!("unknown header {other:?}"))),
            }
            continue;
        }
        rows.push(parse_u64s(line, &format!("row {}", rows.len()))?);
    }
    let square = Square::from_rows(&rows)?;
    doc.entries = *square.rows();
    Ok(doc)
}

/// Parses a catalog in text or newline-delimited JSON, detected from the
/// first non-blank character.
pub fn parse_documents(input: &str) -> Result<Vec<SquareDocument>, CliError> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return trimmed
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                serde_json::from_str(l)
                    .map_err(|e| CliError::Validation(format!("invalid JSON document: {e}")))
            })
            .collect();
    }
    let mut docs = Vec::new();
    let mut block = String::new();
    for line in input.lines() {
        if line.trim().is_empty() {
            if has_content(&block) {
                docs.push(parse_text_document(&block)?);
            }
            block.clear();
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    if has_content(&block) {
        docs.push(parse_text_document(&block)?);
    }
    if docs.is_empty() {
        return Err(CliError::Validation("no square found in input".into()));
    }
    Ok(docs)
}

fn has_content(block: &str) -> bool {
    block
        .lines()
        .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Reads CSV produced by [`csv_record`](SquareDocument::csv_record).
pub fn parse_csv(input: &str) -> Result<Vec<SquareDocument>, CliError> {
    let mut reader = csv::Reader::from_reader(input.as_bytes());
    let mut docs = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Validation(format!("invalid CSV: {e}")))?;
        if rec.len() != 19 {
            return Err(CliError::Validation(format!(
                "CSV record has {} fields, expected 19",
                rec.len()
            )));
        }
        let kind = match &rec[0] {
            "additive" => Kind::Additive,
            "multiplicative" => Kind::Multiplicative,
            k => return Err(CliError::Validation(format!("unknown kind {k:?}"))),
        };
        let primes = match rec[1].trim() {
            "" => None,
            p => Some(parse_primes(p)?),
        };
        let flat = (2..18)
            .map(|i| {
                let field = &rec[i];
                field.trim().parse::<u64>().map_err(|_| {
                    CliError::Validation(format!(
                        "e{}: {field:?} is not a non-negative integer",
                        i - 2
                    ))
                })
            })
            .collect::<Result<Vec<u64>, _>>()?;
        let mut entries = [[0u64; 4]; 4];
        for (k, v) in flat.into_iter().enumerate() {
            entries[k / 4][k % 4] = v;
        }
        let class = Some(rec[18].to_string()).filter(|c| !c.is_empty());
        docs.push(SquareDocument {
            kind,
            entries,
            primes,
            class,
            orbit: None,
            planes: None,
        });
    }
    Ok(docs)
}
