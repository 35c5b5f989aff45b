//! Hand transcription of the reference Moore diagrams for `a` and `d`,
//! and a machine-readable diff against the machines built by refinement.
//!
//! The refined machines are the ground truth. A refined state is named by its
//! coarse state and the buffered block prefix: `b` is `(t_1 t_2, "")`, `b0`
//! is `(t_1 t_2, "0")`, and so on. The transcription is kept verbatim,
//! including edges that cannot be right (a node with two edges on the same
//! letter, edges into a node of the other diagram).

use serde::Serialize;

use crate::automaton::TreeAutomorphism;
use crate::embed::{generator_automorphism_with, CarryRule, Generator};
use crate::error::Result;
use crate::free::{s1, s2};
use crate::refine::RefinementMap;

/// `(from, input, output, to)` with binary letters.
pub type Edge = (&'static str, usize, usize, &'static str);

pub const FIGURE_A: &[Edge] = &[
    ("a", 0, 0, "a0"),
    ("a0", 0, 0, "a"),
    ("a", 1, 1, "a1"),
    ("a1", 1, 1, "a"),
    ("b", 0, 1, "b0"),
    ("b0", 0, 1, "b"),
    ("b", 1, 0, "b1"),
    ("b1", 0, 1, "b"),
    ("c", 0, 0, "c0"),
    ("c0", 1, 1, "c"),
    ("c", 1, 1, "c1"),
    ("c1", 0, 0, "c"),
    ("a0", 1, 1, "b"),
    ("a1", 0, 0, "b"),
    ("b0", 1, 0, "c"),
    ("b1", 1, 0, "a"),
    ("c0", 1, 0, "b"),
    ("c1", 1, 1, "b"),
];

pub const FIGURE_D: &[Edge] = &[
    ("d", 0, 0, "d0"),
    ("d0", 0, 0, "d"),
    ("d", 1, 1, "d1"),
    ("d1", 0, 0, "d"),
    ("e", 0, 1, "e0"),
    ("e0", 0, 0, "e"),
    ("e", 1, 0, "e1"),
    ("e1", 1, 1, "e"),
    ("f", 0, 0, "f0"),
    ("f0", 1, 1, "f"),
    ("f", 1, 1, "f1"),
    ("f1", 1, 1, "f"),
    ("d0", 1, 1, "b"),
    ("d1", 1, 1, "e"),
    ("e0", 1, 1, "f"),
    ("e1", 0, 0, "d"),
    ("f0", 0, 0, "e"),
    ("f1", 0, 0, "b"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDiff {
    pub figure: &'static str,
    pub state: String,
    pub letter: usize,
    /// `(output, target)` of the constructed machine; the target is `None`
    /// when it matches no named state.
    pub constructed: (usize, Option<String>),
    /// Transcribed `(output, target)` pairs leaving `state` on `letter`.
    pub transcribed: Vec<(usize, String)>,
}

/// The eighteen named states of the refined machines.
pub fn named_states(rule: CarryRule) -> Result<Vec<(String, TreeAutomorphism)>> {
    let f = RefinementMap::quaternary_to_binary();
    let t1 = generator_automorphism_with(Generator::T1, 2, rule)?;
    let t2 = generator_automorphism_with(Generator::T2, 2, rule)?;
    let (s1, s2) = (s1(rule)?, s2(rule)?);
    let coarse = [
        ("a", t1.compose(&t1)?),
        ("b", t1.compose(&t2)?),
        ("c", t2.compose(&t2)?),
        ("d", s1.compose(&s1)?),
        ("e", s1.compose(&s2)?),
        ("f", s2.compose(&s2)?),
    ];
    let mut out = Vec::new();
    for (name, g) in coarse {
        let fine = g.minimize().refine(&f)?;
        out.push((name.to_string(), fine.minimize()));
        for y in 0..2 {
            out.push((format!("{name}{y}"), fine.state_at(&[y])?.minimize()));
        }
    }
    Ok(out)
}

/// Every (state, letter) where the transcription disagrees with the
/// constructed machines, in figure order then state order.
pub fn figure_diff(rule: CarryRule) -> Result<Vec<EdgeDiff>> {
    let named = named_states(rule)?;
    let name_of = |g: &TreeAutomorphism| -> Result<Option<String>> {
        for (name, h) in &named {
            if g.equals(h)? {
                return Ok(Some(name.clone()));
            }
        }
        Ok(None)
    };
    let mut diffs = Vec::new();
    for (figure, edges, prefix) in [("a", FIGURE_A, ['a', 'b', 'c']), ("d", FIGURE_D, ['d', 'e', 'f'])] {
        for (name, g) in named.iter().filter(|(n, _)| prefix.contains(&n.chars().next().unwrap())) {
            let (children, perm) = g.first_level_states();
            for (letter, child) in children.iter().enumerate() {
                let constructed = (perm.apply(letter), name_of(child)?);
                let transcribed: Vec<(usize, String)> = edges
                    .iter()
                    .filter(|e| e.0 == name && e.1 == letter)
                    .map(|e| (e.2, e.3.to_string()))
                    .collect();
                let agrees = match transcribed.as_slice() {
                    [(out, target)] => {
                        let target = named.iter().find(|(n, _)| n == target).map(|(_, h)| h);
                        *out == constructed.0 && target.map_or(Ok(false), |h| h.equals(child))?
                    }
                    _ => false,
                };
                if !agrees {
                    diffs.push(EdgeDiff { figure, state: name.clone(), letter, constructed, transcribed });
                }
            }
        }
    }
    Ok(diffs)
}
