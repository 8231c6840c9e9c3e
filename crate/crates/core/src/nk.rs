//! NK landscapes: generation, evaluation and the portable instance file.
//!
//! A configuration of `n` binary genes is encoded as an integer whose bit `i`
//! is gene `i`. Gene `i` contributes `tables[i][row]` where `row` is built
//! from gene `i` as the most significant bit followed by the genes listed in
//! `links[i]`, in stored order. Fitness is the mean of the `n` contributions.

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest gene count a [`Configuration`] can encode.
pub const MAX_GENES: usize = 30;

/// A bit string of fixed length, stored as its binary encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    index: u32,
    len: u8,
}

impl Configuration {
    pub fn new(index: u32, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_GENES {
            return Err(Error::Domain(format!(
                "configuration length {len} outside [1, {MAX_GENES}]"
            )));
        }
        if u64::from(index) >> len != 0 {
            return Err(Error::Domain(format!(
                "index {index} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            index,
            len: len as u8,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Self::new(index, bits.len())
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    #[inline]
    pub fn index(&self) -> u32 {
        self.index
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn bit(&self, gene: usize) -> bool {
        (self.index >> gene) & 1 == 1
    }

    /// The configuration with `gene` flipped.
    #[inline]
    pub fn flip(&self, gene: usize) -> Self {
        debug_assert!(gene < self.len());
        Self {
            index: self.index ^ (1 << gene),
            len: self.len,
        }
    }

    pub fn hamming_distance(&self, other: &Self) -> u32 {
        (self.index ^ other.index).count_ones()
    }

    /// The `n` one-bit-flip neighbours, ordered by flipped gene ascending.
    ///
    /// The order matters: hill climbing breaks fitness ties in favour of the
    /// first neighbour in this list.
    pub fn neighbors(&self) -> Vec<Configuration> {
        (0..self.len()).map(|g| self.flip(g)).collect()
    }
}

/// Neighbours of `config` in an `n`-gene space; fails if the lengths disagree.
pub fn neighbors(config: &Configuration, n: usize) -> Result<Vec<Configuration>> {
    if config.len() != n {
        return Err(Error::Domain(format!(
            "configuration has {} genes, expected {n}",
            config.len()
        )));
    }
    Ok(config.neighbors())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodModel {
    /// Each gene's epistatic partners are drawn uniformly without replacement.
    Random,
    /// Each gene's partners are its nearest genes on a ring.
    Adjacent,
}

impl std::str::FromStr for NeighborhoodModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "adjacent" => Ok(Self::Adjacent),
            other => Err(Error::Domain(format!(
                "unknown neighborhood model {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for NeighborhoodModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Random => f.write_str("random"),
            Self::Adjacent => f.write_str("adjacent"),
        }
    }
}

/// The ring pattern used by [`NeighborhoodModel::Adjacent`]: `i-1, i+1, i-2,
/// i+2, ...` modulo `n`, truncated to `k` entries.
pub fn adjacent_links(gene: usize, n: usize, k: usize) -> Vec<usize> {
    (1..)
        .flat_map(|d| [(gene + n - d % n) % n, (gene + d) % n])
        .take(k)
        .collect()
}

/// A fully materialized NK landscape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NkInstance {
    pub n: usize,
    pub k: usize,
    pub model: NeighborhoodModel,
    pub seed: u64,
    pub links: Vec<Vec<usize>>,
    pub tables: Vec<Vec<f64>>,
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > MAX_GENES {
        return Err(Error::Domain(format!("n = {n} outside [1, {MAX_GENES}]")));
    }
    if k >= n {
        return Err(Error::Domain(format!(
            "k = {k} must be at most n - 1 = {}",
            n - 1
        )));
    }
    Ok(())
}

impl NkInstance {
    /// Draws a landscape. The result is a pure function of the arguments.
    pub fn generate(n: usize, k: usize, model: NeighborhoodModel, seed: u64) -> Result<Self> {
        check_params(n, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut links = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        for gene in 0..n {
            let l = match model {
                NeighborhoodModel::Random => index::sample(&mut rng, n - 1, k)
                    .into_iter()
                    .map(|x| if x >= gene { x + 1 } else { x })
                    .collect(),
                NeighborhoodModel::Adjacent => adjacent_links(gene, n, k),
            };
            links.push(l);
            tables.push((0..1usize << (k + 1)).map(|_| rng.gen::<f64>()).collect());
        }
        Ok(Self {
            n,
            k,
            model,
            seed,
            links,
            tables,
        })
    }

    /// Checks every structural invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.k).map_err(|e| Error::Format(e.to_string()))?;
        if self.links.len() != self.n {
            return Err(Error::Format(format!(
                "expected {} link lists, found {}",
                self.n,
                self.links.len()
            )));
        }
        if self.tables.len() != self.n {
            return Err(Error::Format(format!(
                "expected {} fitness tables, found {}",
                self.n,
                self.tables.len()
            )));
        }
        let rows = 1usize << (self.k + 1);
        for gene in 0..self.n {
            let l = &self.links[gene];
            if l.len() != self.k {
                return Err(Error::Format(format!(
                    "gene {gene}: link list has {} entries, expected k = {}",
                    l.len(),
                    self.k
                )));
            }
            for (pos, &x) in l.iter().enumerate() {
                if x >= self.n || x == gene || l[..pos].contains(&x) {
                    return Err(Error::Format(format!(
                        "gene {gene}: link {x} must be a distinct gene index in [0, {}) other than {gene}",
                        self.n
                    )));
                }
            }
            if self.model == NeighborhoodModel::Adjacent
                && *l != adjacent_links(gene, self.n, self.k)
            {
                return Err(Error::Format(format!(
                    "gene {gene}: links do not follow the adjacent ring pattern"
                )));
            }
            let t = &self.tables[gene];
            if t.len() != rows {
                return Err(Error::Format(format!(
                    "gene {gene}: table has {} entries, expected 2^(k+1) = {rows}",
                    t.len()
                )));
            }
            if let Some(v) = t.iter().find(|v| !(0.0..1.0).contains(*v)) {
                return Err(Error::Format(format!(
                    "gene {gene}: table entry {v} outside [0, 1)"
                )));
            }
        }
        Ok(())
    }

    /// Number of configurations, `2^n`.
    pub fn space_size(&self) -> usize {
        1usize << self.n
    }

    #[inline]
    fn row(&self, gene: usize, index: u32) -> usize {
        let mut row = ((index >> gene) & 1) as usize;
        for &l in &self.links[gene] {
            row = (row << 1) | ((index >> l) & 1) as usize;
        }
        row
    }

    /// Fitness of the configuration with encoding `index`, unchecked.
    #[inline]
    pub fn fitness_of(&self, index: u32) -> f64 {
        let sum: f64 = (0..self.n)
            .map(|g| self.tables[g][self.row(g, index)])
            .sum();
        sum / self.n as f64
    }

    pub fn evaluate(&self, config: &Configuration) -> Result<f64> {
        if config.len() != self.n {
            return Err(Error::Domain(format!(
                "configuration has {} genes, instance has {}",
                config.len(),
                self.n
            )));
        }
        Ok(self.fitness_of(config.index()))
    }

    /// Fitness of every configuration, indexed by encoding. Each entry is
    /// bit-identical to [`NkInstance::fitness_of`].
    pub fn fitness_landscape(&self) -> Vec<f64> {
        let size = self.space_size();
        let mut total = vec![0.0f64; size];
        for gene in 0..self.n {
            let table = &self.tables[gene];
            for (index, acc) in total.iter_mut().enumerate() {
                *acc += table[self.row(gene, index as u32)];
            }
        }
        let n = self.n as f64;
        total.iter_mut().for_each(|f| *f /= n);
        total
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("malformed instance JSON: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
