//! Synthetic contribution data with Zipf-distributed degrees, used by the
//! benchmarks and the scale tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::ingest::LinkRecord;

#[derive(Debug, Clone, Copy)]
pub struct ZipfLinks {
    pub rows: usize,
    pub projects: usize,
    pub authors: usize,
    /// Zipf exponent for project popularity.
    pub project_exponent: f64,
    /// Zipf exponent for author activity.
    pub author_exponent: f64,
    pub seed: u64,
}

impl Default for ZipfLinks {
    fn default() -> Self {
        Self {
            rows: 1_000_000,
            projects: 100_000,
            authors: 150_000,
            project_exponent: 0.8,
            author_exponent: 0.8,
            seed: 1,
        }
    }
}

pub fn project_name(i: usize) -> String {
    format!("org{}/repo{i}", i % 97)
}

pub fn author_id(i: usize) -> String {
    format!("Dev {i} <dev{i}@example{}.org>", i % 13)
}

impl ZipfLinks {
    /// Each row draws a project and an author independently. Ranks are
    /// shuffled through a fixed permutation so popularity is not correlated
    /// with id order.
    pub fn generate(&self) -> Vec<LinkRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pz = Zipf::new(self.projects as f64, self.project_exponent).expect("valid zipf");
        let az = Zipf::new(self.authors as f64, self.author_exponent).expect("valid zipf");
        let (pp, ap) = (
            self.permutation(self.projects, &mut rng),
            self.permutation(self.authors, &mut rng),
        );
        let project_names: Vec<String> = (0..self.projects).map(project_name).collect();
        let author_ids: Vec<String> = (0..self.authors).map(author_id).collect();
        (0..self.rows)
            .map(|_| {
                let p = pp[pz.sample(&mut rng) as usize - 1];
                let a = ap[az.sample(&mut rng) as usize - 1];
                LinkRecord::new(project_names[p].clone(), author_ids[a].clone())
            })
            .collect()
    }

    fn permutation(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            v.swap(i, rng.random_range(0..=i));
        }
        v
    }
}
