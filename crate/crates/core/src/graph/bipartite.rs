use crate::ingest::CleanedLinkSet;

use super::Mode;

/// Compressed sparse rows: `targets[offsets[i]..offsets[i + 1]]` are the
/// neighbours of row `i`, sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Csr {
    pub offsets: Vec<usize>,
    pub targets: Vec<u32>,
}

impl Csr {
    /// `edges` must be sorted by (row, target) and free of duplicates.
    pub fn from_sorted_edges(rows: usize, edges: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut offsets = vec![0usize; rows + 1];
        let mut targets = Vec::new();
        for (r, t) in edges {
            offsets[r as usize + 1] += 1;
            targets.push(t);
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, targets }
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn rows(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn transpose(&self, cols: usize) -> Self {
        let mut offsets = vec![0usize; cols + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..cols {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        // Rows are visited in ascending order, so each column list comes out sorted.
        for r in 0..self.rows() {
            for &t in self.row(r) {
                targets[fill[t as usize]] = r as u32;
                fill[t as usize] += 1;
            }
        }
        Csr { offsets, targets }
    }
}

/// Author/project contribution graph. Both node sets are sorted by id and
/// indexed densely from zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    authors: Vec<String>,
    projects: Vec<String>,
    project_authors: Csr,
    author_projects: Csr,
}

impl BipartiteGraph {
    /// Builds the graph from `(project, author)` pairs; duplicates collapse.
    pub fn from_pairs<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let pairs: Vec<(&str, &str)> = pairs.into_iter().collect();
        let mut projects: Vec<&str> = pairs.iter().map(|p| p.0).collect();
        projects.sort_unstable();
        projects.dedup();
        let mut authors: Vec<&str> = pairs.iter().map(|p| p.1).collect();
        authors.sort_unstable();
        authors.dedup();

        let lookup = |set: &[&str], key: &str| set.binary_search(&key).unwrap() as u32;
        let mut edges: Vec<(u32, u32)> = pairs
            .iter()
            .map(|(p, a)| (lookup(&projects, p), lookup(&authors, a)))
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let project_authors = Csr::from_sorted_edges(projects.len(), edges.into_iter());
        let author_projects = project_authors.transpose(authors.len());
        BipartiteGraph {
            authors: authors.into_iter().map(str::to_owned).collect(),
            projects: projects.into_iter().map(str::to_owned).collect(),
            project_authors,
            author_projects,
        }
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    pub fn projects(&self) -> &[String] {
        &self.projects
    }

    pub fn edge_count(&self) -> usize {
        self.project_authors.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty() && self.projects.is_empty()
    }

    pub fn authors_of(&self, project: usize) -> &[u32] {
        self.project_authors.row(project)
    }

    pub fn projects_of(&self, author: usize) -> &[u32] {
        self.author_projects.row(author)
    }

    /// Node ids on the `mode` side.
    pub fn nodes(&self, mode: Mode) -> &[String] {
        match mode {
            Mode::Author => &self.authors,
            Mode::Project => &self.projects,
        }
    }

    /// Opposite-side neighbours of node `i` on the `mode` side.
    pub fn counterparts(&self, mode: Mode, i: usize) -> &[u32] {
        match mode {
            Mode::Author => self.projects_of(i),
            Mode::Project => self.authors_of(i),
        }
    }

    pub fn index_of(&self, mode: Mode, id: &str) -> Option<usize> {
        self.nodes(mode)
            .binary_search_by(|n| n.as_str().cmp(id))
            .ok()
    }
}

/// Materializes a cleaned link set as a bipartite graph.
pub fn build_bipartite(links: &CleanedLinkSet) -> BipartiteGraph {
    BipartiteGraph::from_pairs(
        links
            .pairs()
            .iter()
            .map(|r| (r.project.as_str(), r.author.as_str())),
    )
}
