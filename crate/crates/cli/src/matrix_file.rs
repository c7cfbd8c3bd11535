//! Matrix files: JSON `{"modulus", "size", "entries"}` or plain text
//! (`l n` on the first line, then `n` rows). Entries are reduced on load.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use skewswitch::AltMatrix;

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub modulus: u32,
    pub size: usize,
    pub entries: Vec<Vec<i64>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &AltMatrix) -> Self {
        Self {
            modulus: m.modulus(),
            size: m.size(),
            entries: m
                .to_grid()
                .into_iter()
                .map(|row| row.into_iter().map(i64::from).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<AltMatrix> {
        if self.entries.len() != self.size {
            bail!(
                "\"size\" is {} but \"entries\" has {} rows",
                self.size,
                self.entries.len()
            );
        }
        Ok(AltMatrix::new(self.modulus, &self.entries)?)
    }
}

pub fn parse(text: &str) -> Result<AltMatrix> {
    if text.trim_start().starts_with('{') {
        let doc: MatrixDoc = serde_json::from_str(text).context("malformed JSON matrix")?;
        return doc.to_matrix();
    }
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().context("empty matrix file")?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        bail!("first line must be \"<modulus> <size>\", found {header:?}");
    }
    let modulus: u32 = head[0].parse().context("modulus is not an integer")?;
    let size: usize = head[1].parse().context("size is not an integer")?;
    let mut rows = Vec::with_capacity(size);
    for (r, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(c, w)| {
                w.parse::<i64>()
                    .with_context(|| format!("entry ({},{}) is not an integer: {w:?}", r + 1, c + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    MatrixDoc {
        modulus,
        size,
        entries: rows,
    }
    .to_matrix()
}

/// Read a matrix from a path, or from standard input when the path is `-`.
pub fn load(path: &Path) -> Result<AltMatrix> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    };
    parse(&text).with_context(|| format!("invalid matrix in {}", path.display()))
}
