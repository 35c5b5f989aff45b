//! Finite-state automorphisms of the rooted `n`-regular tree.
//!
//! An automorphism is a pointed, invertible, letter-to-letter Mealy machine.
//! Every state carries its rooted permutation (the output on each input
//! letter) and one transition per letter. The action on words is the right
//! action `(xw)^g = x^{σ_g} w^{g_x}`, so [`TreeAutomorphism::compose`]
//! applies its receiver first.
//!
//! Constructors always trim: states unreachable from the initial state are
//! dropped and the rest renumbered breadth-first (letters in increasing
//! order). After [`TreeAutomorphism::minimize`] the machine is canonical, so
//! derived `PartialEq` compares minimized machines exactly.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// 0-based letter index.
pub type Letter = usize;

/// A vertex of the tree; the empty word is the root.
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateData {
    pub output: Permutation,
    pub transitions: Vec<usize>,
}

impl StateData {
    pub fn new(output: Permutation, transitions: Vec<usize>) -> Self {
        StateData { output, transitions }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeAutomorphism {
    degree: usize,
    states: Vec<StateData>,
    initial: usize,
}

impl TreeAutomorphism {
    /// Validates the machine and trims it to the states reachable from
    /// `initial`.
    pub fn new(degree: usize, states: Vec<StateData>, initial: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidAlphabet(degree));
        }
        if initial >= states.len() {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range ({} states)",
                states.len()
            )));
        }
        for (id, s) in states.iter().enumerate() {
            if s.output.degree() != degree || s.transitions.len() != degree {
                return Err(Error::InvalidAutomaton(format!(
                    "state {id} does not have {degree} letters"
                )));
            }
            if let Some(&t) = s.transitions.iter().find(|&&t| t >= states.len()) {
                return Err(Error::InvalidAutomaton(format!(
                    "state {id} has a transition to missing state {t}"
                )));
            }
        }
        Ok(Self::trimmed(degree, &states, initial))
    }

    fn trimmed(degree: usize, states: &[StateData], initial: usize) -> Self {
        let mut renumber = vec![usize::MAX; states.len()];
        let mut order = Vec::with_capacity(states.len());
        let mut queue = VecDeque::from([initial]);
        renumber[initial] = 0;
        order.push(initial);
        while let Some(s) = queue.pop_front() {
            for &t in &states[s].transitions {
                if renumber[t] == usize::MAX {
                    renumber[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let states = order
            .iter()
            .map(|&old| {
                let s = &states[old];
                StateData {
                    output: s.output.clone(),
                    transitions: s.transitions.iter().map(|&t| renumber[t]).collect(),
                }
            })
            .collect();
        TreeAutomorphism { degree, states, initial: 0 }
    }

    pub fn identity(degree: usize) -> Result<Self> {
        Self::from_permutation(Permutation::identity(degree))
    }

    /// One-state automorphism acting by `perm` on every letter of every word.
    pub fn from_permutation(perm: Permutation) -> Result<Self> {
        let degree = perm.degree();
        Self::new(degree, vec![StateData::new(perm, vec![0; degree])], 0)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn states(&self) -> &[StateData] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Number of states of this machine as stored, which is `|Q(g)|` only
    /// once minimized. See [`TreeAutomorphism::state_count`].
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn rooted_permutation(&self) -> &Permutation {
        &self.states[self.initial].output
    }

    fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&x| x >= self.degree) {
            Some(&letter) => Err(Error::InvalidLetter { letter, alphabet: self.degree }),
            None => Ok(()),
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::AlphabetMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    /// Image of the vertex `word`.
    pub fn act(&self, word: &[Letter]) -> Result<Word> {
        self.check_word(word)?;
        let mut state = self.initial;
        Ok(word
            .iter()
            .map(|&x| {
                let s = &self.states[state];
                state = s.transitions[x];
                s.output.apply(x)
            })
            .collect())
    }

    fn state_index_at(&self, word: &[Letter]) -> Result<usize> {
        self.check_word(word)?;
        Ok(word.iter().fold(self.initial, |s, &x| self.states[s].transitions[x]))
    }

    /// The state `g_v`: this machine re-pointed at the state reached by
    /// reading `v`.
    pub fn state_at(&self, v: &[Letter]) -> Result<Self> {
        let s = self.state_index_at(v)?;
        Ok(self.repointed(s))
    }

    fn repointed(&self, state: usize) -> Self {
        Self::trimmed(self.degree, &self.states, state)
    }

    /// Wreath recursion `(g_x, x ∈ X) σ_g` of the initial state.
    pub fn first_level_states(&self) -> (Vec<Self>, Permutation) {
        let init = &self.states[self.initial];
        let children = init.transitions.iter().map(|&t| self.repointed(t)).collect();
        (children, init.output.clone())
    }

    /// The product `gh`: `self` acts first, then `other`. Built as the
    /// reachable part of the pair-product machine; not minimized.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let n = self.degree;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut states = Vec::new();
        let mut next = 0;
        while next < pairs.len() {
            let (p, q) = pairs[next];
            next += 1;
            let sp = &self.states[p];
            let sq = &other.states[q];
            let mut transitions = Vec::with_capacity(n);
            for x in 0..n {
                let y = sp.output.apply(x);
                let target = (sp.transitions[x], sq.transitions[y]);
                let id = *index.entry(target).or_insert_with(|| {
                    pairs.push(target);
                    pairs.len() - 1
                });
                transitions.push(id);
            }
            states.push(StateData::new(sp.output.then(&sq.output), transitions));
        }
        Ok(TreeAutomorphism { degree: n, states, initial: 0 })
    }

    /// Same state set with each state inverted: output `σ⁻¹`, and the
    /// transition on `y` goes where the original went on `y^{σ⁻¹}`.
    pub fn inverse(&self) -> Self {
        let states: Vec<StateData> = self
            .states
            .iter()
            .map(|s| {
                let inv = s.output.inverse();
                let transitions = (0..self.degree).map(|y| s.transitions[inv.apply(y)]).collect();
                StateData::new(inv, transitions)
            })
            .collect();
        Self::trimmed(self.degree, &states, self.initial)
    }

    /// `g^k` for any integer `k`, minimizing after every product.
    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() }.minimize();
        let mut acc = Self::identity(self.degree).expect("degree already validated");
        let mut square = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&square).expect("same degree").minimize();
            }
            e >>= 1;
            if e > 0 {
                square = square.compose(&square).expect("same degree").minimize();
            }
        }
        acc
    }

    /// Bisimulation quotient in canonical numbering.
    ///
    /// Moore-style partition refinement: states start grouped by output
    /// permutation and are split by the classes of their successors until the
    /// number of classes stops growing.
    pub fn minimize(&self) -> Self {
        let mut class = {
            let mut by_output: HashMap<&Permutation, usize> = HashMap::new();
            self.states
                .iter()
                .map(|s| {
                    let k = by_output.len();
                    *by_output.entry(&s.output).or_insert(k)
                })
                .collect::<Vec<_>>()
        };
        let mut classes = class.iter().max().map_or(0, |m| m + 1);
        loop {
            let mut by_signature: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let refined: Vec<usize> = self
                .states
                .iter()
                .enumerate()
                .map(|(id, s)| {
                    let sig = (class[id], s.transitions.iter().map(|&t| class[t]).collect());
                    let k = by_signature.len();
                    *by_signature.entry(sig).or_insert(k)
                })
                .collect();
            let refined_classes = by_signature.len();
            class = refined;
            if refined_classes == classes {
                break;
            }
            classes = refined_classes;
        }
        let mut quotient: Vec<Option<StateData>> = vec![None; classes];
        for (id, s) in self.states.iter().enumerate() {
            quotient[class[id]].get_or_insert_with(|| {
                StateData::new(s.output.clone(), s.transitions.iter().map(|&t| class[t]).collect())
            });
        }
        let quotient: Vec<StateData> = quotient.into_iter().map(|s| s.expect("class has a member")).collect();
        Self::trimmed(self.degree, &quotient, class[self.initial])
    }

    /// Whether both machines define the same automorphism. Explores pairs of
    /// states reachable in lockstep and compares their outputs, so no product
    /// with an inverse is ever built.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_degree(other)?;
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([(self.initial, other.initial)]);
        seen.insert((self.initial, other.initial));
        while let Some((p, q)) = queue.pop_front() {
            let (sp, sq) = (&self.states[p], &other.states[q]);
            if sp.output != sq.output {
                return Ok(false);
            }
            for x in 0..self.degree {
                let pair = (sp.transitions[x], sq.transitions[x]);
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> bool {
        self.states.iter().all(|s| s.output.is_identity())
    }

    /// `|Q(g)|`, the number of states of the minimized machine.
    pub fn state_count(&self) -> usize {
        self.minimize().num_states()
    }

    pub fn is_strongly_connected(&self) -> bool {
        let min = self.minimize();
        // Every state is reachable from the initial one after trimming, so
        // it is enough that the initial state is reachable from every state.
        let n = min.states.len();
        let mut reverse = vec![Vec::new(); n];
        for (id, s) in min.states.iter().enumerate() {
            for &t in &s.transitions {
                reverse[t].push(id);
            }
        }
        let mut seen = vec![false; n];
        seen[min.initial] = true;
        let mut stack = vec![min.initial];
        let mut count = 1;
        while let Some(s) = stack.pop() {
            for &p in &reverse[s] {
                if !seen[p] {
                    seen[p] = true;
                    count += 1;
                    stack.push(p);
                }
            }
        }
        count == n
    }

    /// Moore diagram in Graphviz DOT. Letters in edge labels are 1-based.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|x| (x + 1).to_string())
    }

    /// Moore diagram with edge-label letters written by `letter`.
    pub fn to_dot_with(&self, letter: impl Fn(Letter) -> String) -> String {
        use std::fmt::Write;
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for id in 0..self.states.len() {
            let shape = if id == self.initial { " [shape=doublecircle]" } else { "" };
            writeln!(out, "  q{id}{shape};").unwrap();
        }
        for (id, s) in self.states.iter().enumerate() {
            for (x, &t) in s.transitions.iter().enumerate() {
                writeln!(out, "  q{id} -> q{t} [label=\"{}|{}\"];", letter(x), letter(s.output.apply(x))).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_value(&self) -> AutomatonJson {
        AutomatonJson {
            n: self.degree,
            initial: self.initial,
            states: self
                .states
                .iter()
                .map(|s| StateJson {
                    out: s.output.images().iter().map(|y| y + 1).collect(),
                    to: s.transitions.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("automaton serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AutomatonJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

/// Wire form: `{"n": 4, "initial": 0, "states": [{"out": [..], "to": [..]}]}`
/// with 1-based output letters and 0-based state ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub n: usize,
    pub initial: usize,
    pub states: Vec<StateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub out: Vec<usize>,
    pub to: Vec<usize>,
}

impl TryFrom<AutomatonJson> for TreeAutomorphism {
    type Error = Error;

    fn try_from(raw: AutomatonJson) -> Result<Self> {
        let states = raw
            .states
            .into_iter()
            .map(|s| {
                let images = s
                    .out
                    .iter()
                    .map(|&y| y.checked_sub(1).ok_or_else(|| Error::Parse("letters are 1-based".into())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(StateData::new(Permutation::from_images(images)?, s.to))
            })
            .collect::<Result<Vec<_>>>()?;
        TreeAutomorphism::new(raw.n, states, raw.initial)
    }
}

/// Parses comma-separated 1-based letters (`"4,4,1"`) into a 0-based word.
/// The empty string is the root.
pub fn parse_word(text: &str, degree: usize) -> Result<Word> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            let letter: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))?;
            if letter == 0 || letter > degree {
                return Err(Error::InvalidLetter { letter, alphabet: degree });
            }
            Ok(letter - 1)
        })
        .collect()
}

pub fn format_word(word: &[Letter]) -> String {
    word.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}
