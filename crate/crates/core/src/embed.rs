//! The embedding of `GL(n, Z)` into finite-state automorphisms of the
//! `2^n`-regular tree.
//!
//! Letters of the `2^n` alphabet are bit vectors `(x_1, …, x_n)` over `Z_2`,
//! encoded with `x_1` as the least significant bit. The embedding sends the
//! transvection `T_21(1)` to `t_1` and each transposition matrix `E_ij` to
//! the one-state automorphism `s_ij`; every other elementary matrix is
//! written as a word in those.

use std::fmt;

use crate::automaton::{Letter, StateData, TreeAutomorphism};
use crate::error::{Error, Result};
use crate::matrix::{factorize, ElementaryFactor, IntMatrix};
use crate::perm::Permutation;

/// Largest supported dimension; the alphabet has `2^n` letters.
pub const MAX_DIMENSION: usize = 16;

fn check_dimension(n: usize) -> Result<()> {
    if !(2..=MAX_DIMENSION).contains(&n) {
        return Err(Error::InvalidIndex(format!("dimension must be in 2..={MAX_DIMENSION}, got {n}")));
    }
    Ok(())
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidIndex(format!("need 1 <= i < j <= {n}, got ({i}, {j})")));
    }
    Ok(())
}

/// 0-based letter of a bit vector, `x_1` least significant.
pub fn letter_from_bits(bits: &[u8]) -> Letter {
    bits.iter().rev().fold(0, |acc, &b| (acc << 1) | usize::from(b & 1))
}

pub fn bits_from_letter(letter: Letter, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((letter >> i) & 1) as u8).collect()
}

/// Bit vector rendered as `(x_1,…,x_n)`.
pub fn format_bits(letter: Letter, n: usize) -> String {
    let bits: Vec<String> = bits_from_letter(letter, n).iter().map(u8::to_string).collect();
    format!("({})", bits.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasePermutation {
    /// `(x_1, x_2, …) ↦ (x_1 + x_2, x_2, …)`
    Tau,
    /// `(x_1, x_2, …) ↦ (x_1 + 1, x_2, …)`
    Sigma,
    /// Exchanges coordinates `i < j` (1-based).
    Pi(usize, usize),
}

pub fn base_permutation(kind: BasePermutation, n: usize) -> Result<Permutation> {
    check_dimension(n)?;
    let map: Box<dyn Fn(usize) -> usize> = match kind {
        BasePermutation::Tau => Box::new(|x| x ^ ((x >> 1) & 1)),
        BasePermutation::Sigma => Box::new(|x| x ^ 1),
        BasePermutation::Pi(i, j) => {
            check_pair(i, j, n)?;
            Box::new(move |x| {
                let (bi, bj) = ((x >> (i - 1)) & 1, (x >> (j - 1)) & 1);
                if bi == bj {
                    x
                } else {
                    x ^ (1 << (i - 1)) ^ (1 << (j - 1))
                }
            })
        }
    };
    Permutation::from_images((0..1usize << n).map(map).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    T1,
    T2,
    S(usize, usize),
}

impl Generator {
    /// Accepts `t1`, `t2`, or `s` followed by two 1-based indices.
    pub fn parse(tokens: &[&str]) -> Result<Self> {
        match tokens {
            ["t1"] => Ok(Generator::T1),
            ["t2"] => Ok(Generator::T2),
            ["s", i, j] => {
                let idx = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad index {t:?}")));
                Ok(Generator::S(idx(i)?, idx(j)?))
            }
            _ => Err(Error::Parse(format!("unknown generator {tokens:?}"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::T1 => write!(f, "t1"),
            Generator::T2 => write!(f, "t2"),
            Generator::S(i, j) => write!(f, "s{i}{j}"),
        }
    }
}

/// Transition rule of the state `t_2`.
///
/// `Standard` is the recursion `t_2 = (t_2, t_1, t_2, t_2)(12)`: `t_2`
/// moves to `t_1` exactly on letters with `x_1 = 1, x_2 = 0`. It gives 8
/// states for a sign flip and the first-level formulas for `t_1^a t_2^b`,
/// but the resulting map from matrices is not a homomorphism: the image of
/// `E_1` is not an involution.
///
/// `Additive` moves to `t_1` exactly on `x_1 = x_2 = 0`, which makes `t_1`
/// and `t_2` the 2-adic maps `x_1 ↦ x_1 + x_2` and `x_1 ↦ x_1 + x_2 + 1`. The
/// map from matrices is then a homomorphism, and a sign flip has 2 states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CarryRule {
    #[default]
    Standard,
    Additive,
}

/// The two-state machine shared by `t_1` (state 0) and `t_2` (state 1).
fn t_machine(n: usize, initial: usize, rule: CarryRule) -> Result<TreeAutomorphism> {
    let tau = base_permutation(BasePermutation::Tau, n)?;
    let tau_sigma = tau.then(&base_permutation(BasePermutation::Sigma, n)?);
    let letters = 1usize << n;
    let bit = |x: usize, i: usize| (x >> i) & 1;
    let t1 = StateData::new(tau, (0..letters).map(|x| usize::from(bit(x, 0) == 1 && bit(x, 1) == 1)).collect());
    let to_t1 = |x: usize| match rule {
        CarryRule::Standard => bit(x, 0) == 1 && bit(x, 1) == 0,
        CarryRule::Additive => bit(x, 0) == 0 && bit(x, 1) == 0,
    };
    let t2 = StateData::new(tau_sigma, (0..letters).map(|x| usize::from(!to_t1(x))).collect());
    TreeAutomorphism::new(letters, vec![t1, t2], initial)
}

pub fn generator_automorphism(generator: Generator, n: usize) -> Result<TreeAutomorphism> {
    generator_automorphism_with(generator, n, CarryRule::default())
}

pub fn generator_automorphism_with(generator: Generator, n: usize, rule: CarryRule) -> Result<TreeAutomorphism> {
    check_dimension(n)?;
    match generator {
        Generator::T1 => t_machine(n, 0, rule),
        Generator::T2 => t_machine(n, 1, rule),
        Generator::S(i, j) => TreeAutomorphism::from_permutation(base_permutation(BasePermutation::Pi(i, j), n)?),
    }
}

/// `t_1^i t_2^j`, minimized.
pub fn t_monomial(n: usize, i: i64, j: i64) -> Result<TreeAutomorphism> {
    let a = generator_automorphism(Generator::T1, n)?.power(i);
    let b = generator_automorphism(Generator::T2, n)?.power(j);
    Ok(a.compose(&b)?.minimize())
}

/// A letter of the word an elementary matrix is rewritten into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    /// `T_21(k)`, image `t_1^k`.
    T21(i64),
    /// `E_ij`, image `s_ij`.
    Swap(usize, usize),
}

impl Atom {
    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        match *self {
            Atom::T21(k) => ElementaryFactor::transvection(2, 1, k).matrix(n),
            Atom::Swap(i, j) => ElementaryFactor::transposition(i, j).matrix(n),
        }
    }

    pub fn automorphism(&self, n: usize, rule: CarryRule) -> Result<TreeAutomorphism> {
        match *self {
            Atom::T21(k) => Ok(generator_automorphism_with(Generator::T1, n, rule)?.power(k)),
            Atom::Swap(i, j) => generator_automorphism(Generator::S(i.min(j), i.max(j)), n),
        }
    }
}

/// Rewrites an elementary matrix as a product of `T_21(k)` and
/// transpositions.
///
/// `T_ij(k)` is `T_21(k)` conjugated by at most two transpositions that carry
/// the index pair `(2, 1)` to `(i, j)`. The sign flip uses
/// `E_1 = T_21(1) E_12 T_21(-1) E_12 T_21(1) E_12` and `E_i = E_1i E_1 E_1i`.
pub fn elementary_word(f: ElementaryFactor, n: usize) -> Result<Vec<Atom>> {
    check_dimension(n)?;
    f.validate(n)?;
    Ok(match f {
        ElementaryFactor::Transposition(i, j) => vec![Atom::Swap(i, j)],
        ElementaryFactor::Transvection { i, j, k } => {
            let mut cur = (2, 1);
            let mut swaps = Vec::new();
            let relabel = |x: usize, a: usize, b: usize| if x == a { b } else if x == b { a } else { x };
            if cur.0 != i {
                swaps.push((cur.0, i));
                cur = (i, relabel(cur.1, cur.0, i));
            }
            if cur.1 != j {
                swaps.push((cur.1, j));
                cur = (cur.0, j);
            }
            debug_assert_eq!(cur, (i, j));
            let mut word: Vec<Atom> = swaps.iter().rev().map(|&(a, b)| Atom::Swap(a.min(b), a.max(b))).collect();
            word.push(Atom::T21(k));
            word.extend(swaps.iter().map(|&(a, b)| Atom::Swap(a.min(b), a.max(b))));
            word
        }
        ElementaryFactor::SignFlip(i) => {
            let s = Atom::Swap(1, 2);
            let e1 = [Atom::T21(1), s, Atom::T21(-1), s, Atom::T21(1), s];
            if i == 1 {
                e1.to_vec()
            } else {
                let c = Atom::Swap(1, i);
                std::iter::once(c).chain(e1).chain(std::iter::once(c)).collect()
            }
        }
    })
}

fn product_of(items: impl IntoIterator<Item = Result<TreeAutomorphism>>, n: usize) -> Result<TreeAutomorphism> {
    items
        .into_iter()
        .try_fold(TreeAutomorphism::identity(1 << n)?, |acc, g| Ok(acc.compose(&g?)?.minimize()))
}

/// Image of an elementary matrix, minimized.
pub fn elementary_to_automorphism(f: ElementaryFactor, n: usize) -> Result<TreeAutomorphism> {
    elementary_to_automorphism_with(f, n, CarryRule::default())
}

pub fn elementary_to_automorphism_with(f: ElementaryFactor, n: usize, rule: CarryRule) -> Result<TreeAutomorphism> {
    let word = elementary_word(f, n)?;
    product_of(word.iter().map(|a| a.automorphism(n, rule)), n)
}

/// Image of a unimodular matrix: factorize, map each factor, multiply in
/// order, minimizing after every product.
pub fn phi(a: &IntMatrix) -> Result<TreeAutomorphism> {
    phi_with(a, CarryRule::default())
}

pub fn phi_with(a: &IntMatrix, rule: CarryRule) -> Result<TreeAutomorphism> {
    let n = a.dim();
    check_dimension(n)?;
    let factors = factorize(a)?;
    product_of(factors.iter().map(|&f| elementary_to_automorphism_with(f, n, rule)), n)
}

/// Number of states of the image of an elementary matrix.
pub fn expected_states(f: ElementaryFactor) -> usize {
    match f {
        ElementaryFactor::Transposition(..) => 1,
        ElementaryFactor::SignFlip(_) => 8,
        ElementaryFactor::Transvection { k, .. } => k.unsigned_abs() as usize + 1,
    }
}
