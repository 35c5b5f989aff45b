//! Recoding an automorphism over an `m^k`-letter alphabet as one over `m`
//! letters, by replacing each coarse letter with a block of `k` fine letters.

use std::collections::HashMap;

use crate::automaton::{Letter, StateData, TreeAutomorphism, Word};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Bijection from coarse letters to fine blocks of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementMap {
    fine_size: usize,
    block_length: usize,
    table: Vec<Word>,
}

impl RefinementMap {
    pub fn new(fine_size: usize, table: Vec<Word>) -> Result<Self> {
        if fine_size < 2 {
            return Err(Error::InvalidAlphabet(fine_size));
        }
        let block_length = table.first().map_or(0, Vec::len);
        if block_length == 0 {
            return Err(Error::Shape("refinement blocks must be non-empty".into()));
        }
        let expected = fine_size
            .checked_pow(block_length as u32)
            .ok_or(Error::Overflow("refinement alphabet size"))?;
        if table.len() != expected {
            return Err(Error::Shape(format!(
                "{} blocks given, a bijection onto {fine_size}^{block_length} needs {expected}",
                table.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for block in &table {
            if block.len() != block_length {
                return Err(Error::Shape("refinement blocks differ in length".into()));
            }
            if let Some(&letter) = block.iter().find(|&&y| y >= fine_size) {
                return Err(Error::InvalidLetter { letter, alphabet: fine_size });
            }
            if !seen.insert(block.clone()) {
                return Err(Error::Shape(format!("block {block:?} is used twice")));
            }
        }
        Ok(RefinementMap { fine_size, block_length, table })
    }

    /// `1 ↦ 00, 2 ↦ 11, 3 ↦ 10, 4 ↦ 01`.
    pub fn quaternary_to_binary() -> Self {
        Self::new(2, vec![vec![0, 0], vec![1, 1], vec![1, 0], vec![0, 1]]).expect("fixed table is a bijection")
    }

    pub fn coarse_size(&self) -> usize {
        self.table.len()
    }

    pub fn fine_size(&self) -> usize {
        self.fine_size
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn block(&self, coarse: Letter) -> &[Letter] {
        &self.table[coarse]
    }

    /// Returns a copy with the images of two coarse letters exchanged.
    pub fn with_swapped(&self, x: Letter, y: Letter) -> Self {
        let mut table = self.table.clone();
        table.swap(x, y);
        RefinementMap { table, ..self.clone() }
    }

    pub fn encode(&self, word: &[Letter]) -> Result<Word> {
        word.iter()
            .map(|&x| {
                self.table
                    .get(x)
                    .map(|b| b.as_slice())
                    .ok_or(Error::InvalidLetter { letter: x, alphabet: self.table.len() })
            })
            .collect::<Result<Vec<_>>>()
            .map(|blocks| blocks.concat())
    }

    /// Whether `perm` sends blocks with a common prefix to blocks with a
    /// common prefix, at every prefix length.
    pub fn preserves_prefixes(&self, perm: &Permutation) -> bool {
        (1..self.block_length).all(|len| {
            let mut image_of: HashMap<&[Letter], &[Letter]> = HashMap::new();
            self.table.iter().enumerate().all(|(x, block)| {
                let image = &self.table[perm.apply(x)][..len];
                *image_of.entry(&block[..len]).or_insert(image) == image
            })
        })
    }

    fn decode_block(&self) -> HashMap<&[Letter], Letter> {
        self.table.iter().enumerate().map(|(x, b)| (b.as_slice(), x)).collect()
    }
}

impl TreeAutomorphism {
    /// Automorphism `h` of the fine tree with `encode(v^g) = encode(v)^h` for
    /// every coarse vertex `v`.
    ///
    /// Fine states are pairs (coarse state, buffered prefix of the current
    /// block), so each coarse state contributes `1 + m + … + m^(k-1)` states
    /// before minimization. Every rooted permutation must map blocks sharing a
    /// prefix to blocks sharing a prefix, otherwise no letter-to-letter
    /// machine exists and [`Error::NotPrefixPreserving`] is returned.
    pub fn refine(&self, map: &RefinementMap) -> Result<Self> {
        if map.coarse_size() != self.degree() {
            return Err(Error::RefinementMismatch { expected: map.coarse_size(), found: self.degree() });
        }
        let m = map.fine_size();
        let k = map.block_length();
        let decode = map.decode_block();

        // All proper prefixes of blocks, shortest first.
        let mut prefixes: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 1..k {
            layer = layer
                .iter()
                .flat_map(|p| {
                    (0..m).map(move |y| {
                        let mut q = p.clone();
                        q.push(y);
                        q
                    })
                })
                .collect();
            prefixes.extend(layer.iter().cloned());
        }
        let prefix_id: HashMap<&[Letter], usize> =
            prefixes.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let per_state = prefixes.len();
        let fine_id = |coarse: usize, prefix: usize| coarse * per_state + prefix;

        for (coarse, s) in self.states().iter().enumerate() {
            if !map.preserves_prefixes(&s.output) {
                return Err(Error::NotPrefixPreserving(coarse));
            }
        }

        let mut states = Vec::with_capacity(self.num_states() * per_state);
        for (coarse, s) in self.states().iter().enumerate() {
            for prefix in &prefixes {
                let depth = prefix.len();
                let mut images = Vec::with_capacity(m);
                let mut transitions = Vec::with_capacity(m);
                for y in 0..m {
                    let mut extended = prefix.clone();
                    extended.push(y);
                    let x = map
                        .table
                        .iter()
                        .position(|b| b.starts_with(&extended))
                        .expect("every prefix extends to a block");
                    images.push(map.block(s.output.apply(x))[depth]);
                    transitions.push(if depth + 1 == k {
                        fine_id(s.transitions[decode[extended.as_slice()]], 0)
                    } else {
                        fine_id(coarse, prefix_id[extended.as_slice()])
                    });
                }
                states.push(StateData::new(Permutation::from_images(images)?, transitions));
            }
        }
        TreeAutomorphism::new(m, states, fine_id(self.initial(), 0))
    }
}
