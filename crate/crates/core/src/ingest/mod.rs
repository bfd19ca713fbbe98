//! Link ingestion: parsing, alias resolution, validation, dedup and the
//! minimum-authors-per-project filter.

mod alias;
mod email;

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::Execution;

pub use alias::{load_alias_map, resolve_alias, AliasMap, LoadedAliases};
pub use email::validate_author_id;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("min_authors must be at least 1")]
    InvalidMinAuthors,
}

/// One (project, author) contribution pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkRecord {
    pub project: String,
    pub author: String,
}

impl LinkRecord {
    pub fn new(project: impl Into<String>, author: impl Into<String>) -> Self {
        Self {
            project: project.into(),
            author: author.into(),
        }
    }

    fn is_well_formed(&self) -> bool {
        !self.project.is_empty()
            && !self.author.is_empty()
            && !self.project.contains(['\t', '\n', '\r'])
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedLinks {
    pub records: Vec<LinkRecord>,
    pub errors: usize,
}

/// Parses `project<delim>author` lines. The split happens on the first
/// delimiter; the author keeps the remainder verbatim. Lines with no
/// delimiter or an empty field are counted in `errors` and skipped.
pub fn parse_link_stream<R: BufRead>(
    input: R,
    delimiter: char,
) -> Result<ParsedLinks, IngestError> {
    let mut out = ParsedLinks::default();
    for line in input.lines() {
        let line = line?;
        match line.split_once(delimiter) {
            Some((project, author)) => {
                let rec = LinkRecord::new(project, author);
                if rec.is_well_formed() {
                    out.records.push(rec);
                } else {
                    out.errors += 1;
                }
            }
            None => out.errors += 1,
        }
    }
    Ok(out)
}

/// Row accounting for [`clean_links`].
///
/// `rows_read = pairs_out + rows_dropped_invalid + rows_merged_dedup +
/// rows_dropped_min_authors`. `rows_merged_alias` counts rows whose author
/// was rewritten by the alias map and is not part of that identity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanStats {
    pub rows_read: u64,
    pub rows_dropped_invalid: u64,
    pub rows_merged_alias: u64,
    pub rows_merged_dedup: u64,
    pub rows_dropped_min_authors: u64,
    pub pairs_out: u64,
    pub projects_out: u64,
    pub authors_out: u64,
}

impl CleanStats {
    pub fn is_conserved(&self) -> bool {
        self.rows_read
            == self.pairs_out
                + self.rows_dropped_invalid
                + self.rows_merged_dedup
                + self.rows_dropped_min_authors
    }
}

/// Distinct, validated (project, canonical author) pairs sorted by
/// (project, author).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleanedLinkSet {
    pairs: Vec<LinkRecord>,
    pub stats: CleanStats,
}

impl CleanedLinkSet {
    pub fn pairs(&self) -> &[LinkRecord] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<LinkRecord> {
        self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Writes the pairs as `project<TAB>author` lines.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for p in &self.pairs {
            writeln!(out, "{}\t{}", p.project, p.author)?;
        }
        out.flush()
    }
}

pub fn clean_links(
    records: &[LinkRecord],
    aliases: &AliasMap,
    min_authors: usize,
) -> Result<CleanedLinkSet, IngestError> {
    clean_links_with(records, aliases, min_authors, Execution::default())
}

/// Alias resolution, then validation, then dedup, then the min-authors filter.
pub fn clean_links_with(
    records: &[LinkRecord],
    aliases: &AliasMap,
    min_authors: usize,
    exec: Execution,
) -> Result<CleanedLinkSet, IngestError> {
    if min_authors == 0 {
        return Err(IngestError::InvalidMinAuthors);
    }
    let mut stats = CleanStats {
        rows_read: records.len() as u64,
        ..Default::default()
    };

    let resolved: Vec<(Option<LinkRecord>, bool)> = exec.map_slice(records, |r| {
        let canon = resolve_alias(&r.author, aliases);
        let rewritten = canon != r.author;
        if validate_author_id(canon) {
            (Some(LinkRecord::new(r.project.clone(), canon)), rewritten)
        } else {
            (None, rewritten)
        }
    });

    let mut pairs = Vec::with_capacity(resolved.len());
    for (rec, rewritten) in resolved {
        stats.rows_merged_alias += rewritten as u64;
        match rec {
            Some(r) => pairs.push(r),
            None => stats.rows_dropped_invalid += 1,
        }
    }
    let valid = pairs.len();
    exec.sort_dedup(&mut pairs);
    stats.rows_merged_dedup = (valid - pairs.len()) as u64;

    // Pairs are sorted by project, so each project is one contiguous run.
    let mut kept = Vec::with_capacity(pairs.len());
    let mut start = 0;
    while start < pairs.len() {
        let end = start
            + pairs[start..]
                .iter()
                .position(|p| p.project != pairs[start].project)
                .unwrap_or(pairs.len() - start);
        if end - start >= min_authors {
            stats.projects_out += 1;
            kept.extend_from_slice(&pairs[start..end]);
        } else {
            stats.rows_dropped_min_authors += (end - start) as u64;
        }
        start = end;
    }

    stats.pairs_out = kept.len() as u64;
    stats.authors_out = kept
        .iter()
        .map(|p| p.author.as_str())
        .collect::<HashSet<_>>()
        .len() as u64;
    Ok(CleanedLinkSet { pairs: kept, stats })
}
