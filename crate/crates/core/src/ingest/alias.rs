//! Author alias maps (raw author id -> canonical author id).

use std::collections::HashMap;
use std::io::BufRead;

use super::IngestError;

/// Resolved alias map. Every value is a fixed point: either absent from the
/// keys or mapped to itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    entries: HashMap<String, String>,
}

/// Result of [`load_alias_map`].
#[derive(Debug, Clone, Default)]
pub struct LoadedAliases {
    pub map: AliasMap,
    pub malformed: usize,
}

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a resolved map from raw `(alias, canonical)` edges.
    ///
    /// Chains are collapsed transitively. Members of a cycle (and everything
    /// leading into it) resolve to the lexicographically smallest id on the
    /// cycle. When one raw id appears with several targets the first wins.
    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut ids: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |s: String, ids: &mut Vec<String>| -> usize {
            if let Some(&i) = index.get(&s) {
                return i;
            }
            ids.push(s.clone());
            index.insert(s, ids.len() - 1);
            ids.len() - 1
        };

        let mut next: Vec<Option<usize>> = Vec::new();
        for (raw, canon) in pairs {
            let r = intern(raw.into(), &mut ids);
            let c = intern(canon.into(), &mut ids);
            if next.len() < ids.len() {
                next.resize(ids.len(), None);
            }
            if next[r].is_none() {
                next[r] = Some(c);
            }
        }
        next.resize(ids.len(), None);

        // Functional-graph walk: 0 = unvisited, 1 = on current path, 2 = done.
        let n = ids.len();
        let mut state = vec![0u8; n];
        let mut root = vec![usize::MAX; n];
        let mut path: Vec<usize> = Vec::new();
        for start in 0..n {
            if state[start] == 2 {
                continue;
            }
            path.clear();
            let mut cur = start;
            let resolved = loop {
                if state[cur] == 2 {
                    break root[cur];
                }
                if state[cur] == 1 {
                    // Cycle: from `cur` to the end of `path`.
                    let pos = path.iter().position(|&p| p == cur).unwrap();
                    let cycle = &path[pos..];
                    let min = cycle
                        .iter()
                        .copied()
                        .min_by(|&a, &b| ids[a].cmp(&ids[b]))
                        .unwrap();
                    for &m in cycle {
                        root[m] = min;
                        state[m] = 2;
                    }
                    path.truncate(pos);
                    break min;
                }
                state[cur] = 1;
                path.push(cur);
                match next[cur] {
                    Some(nx) if nx != cur => cur = nx,
                    _ => {
                        root[cur] = cur;
                        state[cur] = 2;
                        path.pop();
                        break cur;
                    }
                }
            };
            for &p in &path {
                root[p] = resolved;
                state[p] = 2;
            }
        }

        let entries = (0..n)
            .filter(|&i| next[i].is_some())
            .map(|i| (ids[i].clone(), ids[root[i]].clone()))
            .collect();
        AliasMap { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, raw: &str) -> Option<&str> {
        self.entries.get(raw).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Canonical id for `author`; ids absent from the map pass through unchanged.
pub fn resolve_alias<'a>(author: &'a str, aliases: &'a AliasMap) -> &'a str {
    aliases.get(author).unwrap_or(author)
}

/// Reads `raw<TAB>canonical` lines. Lines without a tab or with an empty
/// field are counted as malformed and skipped.
pub fn load_alias_map<R: BufRead>(input: R) -> Result<LoadedAliases, IngestError> {
    let mut pairs = Vec::new();
    let mut malformed = 0;
    for line in input.lines() {
        let line = line?;
        match line.split_once('\t') {
            Some((raw, canon)) if !raw.is_empty() && !canon.is_empty() => {
                pairs.push((raw.to_owned(), canon.to_owned()))
            }
            _ => malformed += 1,
        }
    }
    Ok(LoadedAliases {
        map: AliasMap::from_pairs(pairs),
        malformed,
    })
}
