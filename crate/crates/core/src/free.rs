//! A rank-2 free group of automorphisms of the binary tree.
//!
//! Over the 4-letter alphabet the squares `t_1^2` and `s_1^2`, with
//! `s_1 = s_12 t_1 s_12`, are the images of the Sanov matrices
//! `[[1,0],[2,1]]` and `[[1,2],[0,1]]`. Recoding letters as binary blocks
//! (`1 ↦ 00, 2 ↦ 11, 3 ↦ 10, 4 ↦ 01`) turns them into the binary
//! automorphisms `a` and `d`. Freeness of `⟨a, d⟩` is checked here by
//! exhaustive relation search up to a word length.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::automaton::TreeAutomorphism;
use crate::embed::{generator_automorphism_with, CarryRule, Generator};
use crate::error::{Error, Result};
use crate::refine::RefinementMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    D,
}

/// One letter of a group word. The derived order is the search order
/// `a < A < d < D` (lowercase is the generator, uppercase its inverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub symbol: Symbol,
    pub inverse: bool,
}

impl Syllable {
    pub const ALL: [Syllable; 4] = [
        Syllable { symbol: Symbol::A, inverse: false },
        Syllable { symbol: Symbol::A, inverse: true },
        Syllable { symbol: Symbol::D, inverse: false },
        Syllable { symbol: Symbol::D, inverse: true },
    ];

    pub fn cancels(&self, other: &Syllable) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }

    fn as_char(&self) -> char {
        match (self.symbol, self.inverse) {
            (Symbol::A, false) => 'a',
            (Symbol::A, true) => 'A',
            (Symbol::D, false) => 'd',
            (Symbol::D, true) => 'D',
        }
    }
}

/// Word over `a^{±1}, d^{±1}`; written `a`, `A`, `d`, `D` with uppercase for
/// inverses, so `adAD` is the commutator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<Syllable>);

impl GroupWord {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        GroupWord(syllables)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of the first cancelling pair, if any.
    pub fn first_cancellation(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0].cancels(&w[1]))
    }

    pub fn is_reduced(&self) -> bool {
        self.first_cancellation().is_none()
    }

    fn pushed(&self, s: Syllable) -> Self {
        let mut v = self.0.clone();
        v.push(s);
        GroupWord(v)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                'a' => Ok(Syllable { symbol: Symbol::A, inverse: false }),
                'A' => Ok(Syllable { symbol: Symbol::A, inverse: true }),
                'd' => Ok(Syllable { symbol: Symbol::D, inverse: false }),
                'D' => Ok(Syllable { symbol: Symbol::D, inverse: true }),
                other => Err(Error::Parse(format!("unexpected {other:?} in group word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupWord)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Pair of generators together with their inverses, minimized.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    images: [TreeAutomorphism; 4],
}

impl GeneratorPair {
    pub fn new(a: &TreeAutomorphism, d: &TreeAutomorphism) -> Result<Self> {
        if a.degree() != d.degree() {
            return Err(Error::AlphabetMismatch(a.degree(), d.degree()));
        }
        Ok(GeneratorPair {
            images: [a.minimize(), a.inverse().minimize(), d.minimize(), d.inverse().minimize()],
        })
    }

    pub fn image(&self, s: Syllable) -> &TreeAutomorphism {
        let idx = Syllable::ALL.iter().position(|x| *x == s).expect("syllable is one of four");
        &self.images[idx]
    }

    pub fn degree(&self) -> usize {
        self.images[0].degree()
    }

    /// Product of the syllable images, minimized after every step.
    pub fn evaluate(&self, w: &GroupWord) -> Result<TreeAutomorphism> {
        if let Some(pos) = w.first_cancellation() {
            return Err(Error::NotReduced(pos));
        }
        w.syllables().iter().try_fold(TreeAutomorphism::identity(self.degree())?, |acc, &s| {
            Ok(acc.compose(self.image(s))?.minimize())
        })
    }
}

/// `s_1 = s_12 t_1 s_12` over the 4-letter alphabet.
pub fn s1(rule: CarryRule) -> Result<TreeAutomorphism> {
    let s12 = generator_automorphism_with(Generator::S(1, 2), 2, rule)?;
    let t1 = generator_automorphism_with(Generator::T1, 2, rule)?;
    Ok(s12.compose(&t1)?.compose(&s12)?.minimize())
}

/// `s_2`, the state of `s_1` at letter 4.
pub fn s2(rule: CarryRule) -> Result<TreeAutomorphism> {
    Ok(s1(rule)?.state_at(&[3])?.minimize())
}

/// `(t_1^2, s_1^2)` over the 4-letter alphabet.
pub fn sanov_generators() -> (TreeAutomorphism, TreeAutomorphism) {
    sanov_generators_with(CarryRule::default()).expect("fixed construction")
}

pub fn sanov_generators_with(rule: CarryRule) -> Result<(TreeAutomorphism, TreeAutomorphism)> {
    let t1 = generator_automorphism_with(Generator::T1, 2, rule)?;
    Ok((t1.power(2), s1(rule)?.power(2)))
}

/// `(a, d)` over the binary alphabet, each minimized.
pub fn binary_generators() -> (TreeAutomorphism, TreeAutomorphism) {
    binary_generators_with(CarryRule::default()).expect("fixed construction")
}

pub fn binary_generators_with(rule: CarryRule) -> Result<(TreeAutomorphism, TreeAutomorphism)> {
    let f = RefinementMap::quaternary_to_binary();
    let (t, s) = sanov_generators_with(rule)?;
    Ok((t.refine(&f)?.minimize(), s.refine(&f)?.minimize()))
}

/// `(name, coarse automorphism, index of a or d, binary path)`.
type Target = (&'static str, TreeAutomorphism, usize, Vec<usize>);

/// Coarse automorphisms and the binary paths at which their refined
/// counterparts sit inside `a` or `d`.
///
/// `t_1^2` moves to `t_1 t_2` on letter 4 (block `01`) and `t_1 t_2` moves to
/// `t_2^2` on letter 4; on the `s` side the steps are letter 2 (`11`) then
/// letter 4 (`01`).
fn conjugacy_targets(rule: CarryRule) -> Result<Vec<Target>> {
    let t1 = generator_automorphism_with(Generator::T1, 2, rule)?;
    let t2 = generator_automorphism_with(Generator::T2, 2, rule)?;
    let (s1, s2) = (s1(rule)?, s2(rule)?);
    let prod = |x: &TreeAutomorphism, y: &TreeAutomorphism| x.compose(y).map(|g| g.minimize());
    Ok(vec![
        ("a", prod(&t1, &t1)?, 0, vec![]),
        ("b", prod(&t1, &t2)?, 0, vec![0, 1]),
        ("c", prod(&t2, &t2)?, 0, vec![0, 1, 0, 1]),
        ("d", prod(&s1, &s1)?, 1, vec![]),
        ("e", prod(&s1, &s2)?, 1, vec![1, 1]),
        ("f", prod(&s2, &s2)?, 1, vec![1, 1, 0, 1]),
    ])
}

/// Checks `encode(v^g) = encode(v)^h` for every 4-ary vertex `v` with
/// `|v| ≤ depth` and each of the six pairs `(t_1^2, a)`, `(t_1 t_2, b)`,
/// `(t_2^2, c)`, `(s_1^2, d)`, `(s_1 s_2, e)`, `(s_2^2, f)`, where `b, c`
/// and `e, f` are states of `a` and `d`.
pub fn depth_conjugacy_check(depth: usize) -> bool {
    depth_conjugacy_check_with(&RefinementMap::quaternary_to_binary(), depth)
}

/// Same check with `a` and `d` built from the standard block map but
/// vertices encoded with `encoding`.
pub fn depth_conjugacy_check_with(encoding: &RefinementMap, depth: usize) -> bool {
    conjugacy_failure(encoding, depth, CarryRule::default()).expect("fixed construction").is_none()
}

/// First failing `(pair name, vertex)` of the conjugacy check.
pub fn conjugacy_failure(
    encoding: &RefinementMap,
    depth: usize,
    rule: CarryRule,
) -> Result<Option<(&'static str, Vec<usize>)>> {
    let (a, d) = binary_generators_with(rule)?;
    let targets = conjugacy_targets(rule)?;
    let fine: Vec<TreeAutomorphism> = targets
        .iter()
        .map(|(_, _, base, path)| if *base == 0 { a.state_at(path) } else { d.state_at(path) })
        .collect::<Result<_>>()?;
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 0..=depth {
        for v in &layer {
            for ((name, coarse, _, _), h) in targets.iter().zip(&fine) {
                let lhs = encoding.encode(&coarse.act(v)?)?;
                let rhs = h.act(&encoding.encode(v)?)?;
                if lhs != rhs {
                    return Ok(Some((name, v.clone())));
                }
            }
        }
        if len < depth {
            layer = layer
                .iter()
                .flat_map(|v| {
                    (0..4).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub max_length: usize,
    pub words_checked: u64,
    pub counterexample: Option<GroupWord>,
}

impl FreenessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Searches all reduced words of length `1..=max_length` in `a, d` for one
/// that evaluates to the identity.
pub fn freeness_check(max_length: usize) -> FreenessReport {
    let (a, d) = binary_generators();
    let gens = GeneratorPair::new(&a, &d).expect("same alphabet");
    freeness_check_with(&gens, max_length)
}

/// Breadth-first by length, `a < A < d < D` within a length. Each level
/// extends the previous one by a single minimized product per word, and the
/// reported counterexample is the first identity word in that order.
pub fn freeness_check_with(gens: &GeneratorPair, max_length: usize) -> FreenessReport {
    let identity = TreeAutomorphism::identity(gens.degree()).expect("degree validated");
    let mut frontier: Vec<(GroupWord, TreeAutomorphism)> = vec![(GroupWord::default(), identity)];
    let mut words_checked = 0u64;
    for _ in 0..max_length {
        let next: Vec<(GroupWord, TreeAutomorphism)> = frontier
            .par_iter()
            .flat_map_iter(|(w, g)| {
                let last = w.syllables().last().copied();
                Syllable::ALL
                    .into_iter()
                    .filter(move |s| !last.is_some_and(|l| l.cancels(s)))
                    .map(move |s| {
                        let h = g.compose(gens.image(s)).expect("same alphabet").minimize();
                        (w.pushed(s), h)
                    })
            })
            .collect();
        words_checked += next.len() as u64;
        if let Some((w, _)) = next.iter().find(|(_, g)| g.is_identity()) {
            return FreenessReport { max_length, words_checked, counterexample: Some(w.clone()) };
        }
        frontier = next;
    }
    FreenessReport { max_length, words_checked, counterexample: None }
}
