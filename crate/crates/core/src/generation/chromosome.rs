use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GenerationError, GenerationParams};
use crate::corpus::{is_subsequence, CorpusSlice};

/// Upper bound (exclusive) for freshly drawn gene values. Genes are read
/// modulo whatever count they index, so any large range works.
pub const GENE_RANGE: u32 = 1 << 24;

/// Integer genome: one selector per source word followed by one mixing
/// decision per letter of the combined source words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chromosome {
    genes: Vec<u32>,
    sources: usize,
}

impl Chromosome {
    pub fn new(source_genes: Vec<u32>, mix_genes: Vec<u32>) -> Self {
        let sources = source_genes.len();
        let mut genes = source_genes;
        genes.extend(mix_genes);
        Chromosome { genes, sources }
    }

    pub fn random<R: Rng + ?Sized>(params: &GenerationParams, rng: &mut R) -> Self {
        let genes = (0..params.genome_len())
            .map(|_| rng.random_range(0..GENE_RANGE))
            .collect();
        Chromosome {
            genes,
            sources: params.source_words.len(),
        }
    }

    pub fn source_genes(&self) -> &[u32] {
        &self.genes[..self.sources]
    }

    pub fn mix_genes(&self) -> &[u32] {
        &self.genes[self.sources..]
    }

    pub fn genes(&self) -> &[u32] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// One-point crossover: genes before `cut` come from `self`, the rest
    /// from `other`.
    pub fn crossover(&self, other: &Chromosome, cut: usize) -> Chromosome {
        debug_assert_eq!(self.len(), other.len());
        let mut genes = self.genes[..cut].to_vec();
        genes.extend_from_slice(&other.genes[cut..]);
        Chromosome {
            genes,
            sources: self.sources,
        }
    }

    /// Redraws each gene with probability `rate`.
    pub fn mutate<R: Rng + ?Sized>(&mut self, rate: f64, rng: &mut R) {
        for g in &mut self.genes {
            if rng.random_bool(rate) {
                *g = rng.random_range(0..GENE_RANGE);
            }
        }
    }
}

/// Candidate source words of each required length, drawn from a slice.
#[derive(Debug, Clone)]
pub struct SourcePool<'a> {
    by_length: BTreeMap<usize, Vec<&'a str>>,
}

impl<'a> SourcePool<'a> {
    pub fn new(slice: &CorpusSlice<'a>, lengths: &[usize]) -> Result<Self, GenerationError> {
        let mut by_length = BTreeMap::new();
        for &len in lengths {
            by_length
                .entry(len)
                .or_insert_with(|| slice.candidates(len));
        }
        for (&len, words) in &by_length {
            let needed = lengths.iter().filter(|&&l| l == len).count();
            if words.len() < needed {
                return Err(GenerationError::Decode(format!(
                    "rank window [{}, {}] holds {} word(s) of length {len}, need {needed}",
                    slice.min_rank(),
                    slice.max_rank(),
                    words.len()
                )));
            }
        }
        Ok(SourcePool { by_length })
    }

    pub fn candidates(&self, len: usize) -> &[&'a str] {
        self.by_length.get(&len).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Resolves source selectors to words. A selector that lands on a word
    /// already chosen advances cyclically to the next unused candidate.
    pub fn decode(
        &self,
        chromosome: &Chromosome,
        lengths: &[usize],
    ) -> Result<Vec<&'a str>, GenerationError> {
        let mut chosen: Vec<&'a str> = Vec::with_capacity(lengths.len());
        for (&gene, &len) in chromosome.source_genes().iter().zip(lengths) {
            let cands = self.candidates(len);
            if cands.is_empty() {
                return Err(GenerationError::Decode(format!(
                    "no candidate words of length {len}"
                )));
            }
            let k = cands.len();
            let start = gene as usize % k;
            let pick = (0..k)
                .map(|off| cands[(start + off) % k])
                .find(|w| !chosen.contains(w))
                .ok_or_else(|| {
                    GenerationError::Decode(format!("not enough distinct words of length {len}"))
                })?;
            chosen.push(pick);
        }
        Ok(chosen)
    }
}

pub fn decode_sources<'a>(
    chromosome: &Chromosome,
    params: &GenerationParams,
    slice: &CorpusSlice<'a>,
) -> Result<Vec<&'a str>, GenerationError> {
    SourcePool::new(slice, &params.source_words)?.decode(chromosome, &params.source_words)
}

/// Interleaves the source words. Each mixing gene picks, modulo the number
/// of words that still have letters left, which word supplies the next
/// letter.
pub fn mix_sources<S: AsRef<str>>(mix_genes: &[u32], words: &[S]) -> String {
    let words: Vec<&[u8]> = words.iter().map(|w| w.as_ref().as_bytes()).collect();
    let total: usize = words.iter().map(|w| w.len()).sum();
    let mut cursor = vec![0usize; words.len()];
    let mut out = Vec::with_capacity(total);
    let mut genes = mix_genes.iter();
    while out.len() < total {
        let active: Vec<usize> = (0..words.len())
            .filter(|&i| cursor[i] < words[i].len())
            .collect();
        let g = genes.next().copied().unwrap_or(0) as usize;
        let w = active[g % active.len()];
        out.push(words[w][cursor[w]]);
        cursor[w] += 1;
    }
    String::from_utf8(out).expect("ascii input")
}

/// Shortens `word` one letter at a time, always removing the leftmost
/// letter whose removal keeps every source a subsequence, until the word
/// fits `target_length` or nothing more can go.
pub fn greedy_reduce<S: AsRef<str>>(word: &str, sources: &[S], target_length: usize) -> String {
    let mut current = word.to_string();
    'outer: while current.len() > target_length {
        for i in 0..current.len() {
            let mut candidate = current.clone();
            candidate.remove(i);
            if sources
                .iter()
                .all(|s| is_subsequence(s.as_ref(), &candidate))
            {
                current = candidate;
                continue 'outer;
            }
        }
        break;
    }
    current
}
