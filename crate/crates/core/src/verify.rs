//! Bounded verification suites for the state-count and commutation claims
//! about the embedding. Each suite returns one [`ClaimResult`] per claim.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::TreeAutomorphism;
use crate::embed::{elementary_to_automorphism, expected_states, generator_automorphism, phi, t_monomial, Generator};
use crate::error::Result;
use crate::matrix::{ElementaryFactor, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

impl ClaimResult {
    fn new(claim: impl Into<String>, failures: Vec<String>, checked: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{checked} checks")
        } else {
            format!("{} of {checked} checks failed; first: {}", failures.len(), failures[0])
        };
        ClaimResult { claim: claim.into(), passed, detail }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// State counts of images of permutation matrices, sign flips and
/// transvections with `1 ≤ |k| ≤ kmax`.
pub fn theorem1(n: usize, kmax: i64) -> Result<Vec<ClaimResult>> {
    let mut results = Vec::new();

    let (mut failures, mut checked) = (Vec::new(), 0);
    for p in permutations(n) {
        let m = IntMatrix::permutation(&p)?;
        let count = phi(&m)?.state_count();
        checked += 1;
        if count != 1 {
            failures.push(format!("{m}: {count} states"));
        }
    }
    results.push(ClaimResult::new(format!("theorem1 permutation matrices (n={n})"), failures, checked));

    let (mut failures, mut checked) = (Vec::new(), 0);
    for i in 1..=n {
        let f = ElementaryFactor::SignFlip(i);
        let count = phi(&f.matrix(n)?)?.state_count();
        checked += 1;
        if count != expected_states(f) {
            failures.push(format!("{f}: {count} states"));
        }
    }
    results.push(ClaimResult::new(format!("theorem1 sign flips (n={n})"), failures, checked));

    let (mut failures, mut checked) = (Vec::new(), 0);
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            for k in (-kmax..=kmax).filter(|&k| k != 0) {
                let f = ElementaryFactor::transvection(i, j, k);
                let count = phi(&f.matrix(n)?)?.state_count();
                checked += 1;
                if count != expected_states(f) {
                    failures.push(format!("{f}: {count} states"));
                }
            }
        }
    }
    results.push(ClaimResult::new(format!("theorem1 transvections (n={n}, |k|<={kmax})"), failures, checked));
    Ok(results)
}

/// `t_1 t_2 = t_2 t_1`, with rooted permutation `σ`.
pub fn lemma1(n: usize) -> Result<Vec<ClaimResult>> {
    let t1 = generator_automorphism(Generator::T1, n)?;
    let t2 = generator_automorphism(Generator::T2, n)?;
    let g = t1.compose(&t2)?;
    let h = t2.compose(&t1)?;
    let sigma = crate::embed::base_permutation(crate::embed::BasePermutation::Sigma, n)?;
    let mut failures = Vec::new();
    if !g.equals(&h)? {
        failures.push("t1 t2 != t2 t1".to_string());
    }
    for (name, x) in [("t1 t2", &g), ("t2 t1", &h)] {
        if x.rooted_permutation() != &sigma {
            failures.push(format!("rooted permutation of {name} is {}", x.rooted_permutation()));
        }
    }
    Ok(vec![ClaimResult::new(format!("lemma1 commutation (n={n})"), failures, 3)])
}

/// For `1 ≤ m ≤ mmax`: the states of `t_1^m` are exactly the `m + 1`
/// pairwise different products `t_1^i t_2^(m-i)` and form a strongly
/// connected diagram; plus the first-level formula for
/// `t_1^(2k_1+ε_1) t_2^(2k_2+ε_2)`, `k_1, k_2 ≤ 3`.
pub fn lemma2(n: usize, mmax: i64) -> Result<Vec<ClaimResult>> {
    let t1 = generator_automorphism(Generator::T1, n)?;
    let (mut failures, mut checked) = (Vec::new(), 0);
    for m in 1..=mmax {
        let g = t1.power(m);
        checked += 1;
        if let Some(problem) = lemma2_states(&g, n, m)? {
            failures.push(format!("m={m}: {problem}"));
        }
    }
    let mut results = vec![ClaimResult::new(format!("lemma2 states of t1^m (n={n}, m<={mmax})"), failures, checked)];

    let (mut failures, mut checked) = (Vec::new(), 0);
    for (k1, k2, e1, e2) in eq1_grid() {
        let g = t_monomial(n, 2 * k1 + e1, 2 * k2 + e2)?;
        let (children, _) = g.first_level_states();
        for (x, exp) in eq1_expected(k1, k2, e1, e2).into_iter().enumerate() {
            let expected = t_monomial(n, exp.0, exp.1)?;
            checked += 1;
            if !children[x].equals(&expected)? {
                failures.push(format!("k=({k1},{k2}) e=({e1},{e2}) letter {}", x + 1));
            }
        }
    }
    results.push(ClaimResult::new(format!("lemma2 first-level formula (n={n})"), failures, checked));
    Ok(results)
}

fn lemma2_states(g: &TreeAutomorphism, n: usize, m: i64) -> Result<Option<String>> {
    if g.num_states() as i64 != m + 1 {
        return Ok(Some(format!("{} states", g.num_states())));
    }
    if !g.is_strongly_connected() {
        return Ok(Some("not strongly connected".into()));
    }
    let monomials = (0..=m).map(|i| t_monomial(n, i, m - i)).collect::<Result<Vec<_>>>()?;
    for (i, p) in monomials.iter().enumerate() {
        for q in &monomials[i + 1..] {
            if p.equals(q)? {
                return Ok(Some(format!("t1^{i} t2^{} coincides with another monomial", m - i as i64)));
            }
        }
    }
    for s in 0..g.num_states() {
        let state = TreeAutomorphism::new(g.degree(), g.states().to_vec(), s)?;
        let mut hit = false;
        for p in &monomials {
            hit |= state.equals(p)?;
        }
        if !hit {
            return Ok(Some(format!("state {s} is no monomial")));
        }
    }
    Ok(None)
}

/// All `(k_1, k_2, ε_1, ε_2)` with `k ≤ 3` and `ε ∈ {0, 1}`.
pub fn eq1_grid() -> impl Iterator<Item = (i64, i64, i64, i64)> {
    (0..=3).flat_map(|k1| (0..=3).flat_map(move |k2| (0..=1).flat_map(move |e1| (0..=1).map(move |e2| (k1, k2, e1, e2)))))
}

/// Exponents `(a, b)` of `t_1^a t_2^b` at letters `(0,0), (1,0), (0,1), (1,1)`.
pub fn eq1_expected(k1: i64, k2: i64, e1: i64, e2: i64) -> [(i64, i64); 4] {
    [
        (2 * k1 + e1 + k2, k2 + e2),
        (2 * k1 + e1 + k2 + e2, k2),
        (k1 + e1, k1 + 2 * k2 + e2),
        (k1, k1 + e1 + 2 * k2 + e2),
    ]
}

/// `t_1^j t_2^k ≠ e` for `0 ≤ j, k ≤ bound`, `(j, k) ≠ (0, 0)`.
pub fn proposition1(n: usize, bound: i64) -> Result<Vec<ClaimResult>> {
    let (mut failures, mut checked) = (Vec::new(), 0);
    for j in 0..=bound {
        for k in 0..=bound {
            if (j, k) != (0, 0) {
                checked += 1;
                if t_monomial(n, j, k)?.is_identity() {
                    failures.push(format!("t1^{j} t2^{k} = e"));
                }
            }
        }
    }
    Ok(vec![ClaimResult::new(format!("proposition1 no small relations (n={n})"), failures, checked)])
}

/// Random unit-diagonal triangular matrix with off-diagonal entries in
/// `-max_entry..=max_entry`.
pub fn random_unitriangular(rng: &mut impl Rng, n: usize, max_entry: i64, upper: bool) -> IntMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = match (r == c, (r < c) == upper) {
                (true, _) => 1,
                (false, true) => rng.gen_range(-max_entry..=max_entry),
                (false, false) => 0,
            };
        }
    }
    IntMatrix::from_rows(rows).expect("square")
}

/// Product of up to `max_factors` random elementary matrices.
pub fn random_elementary_product(rng: &mut impl Rng, n: usize, max_factors: usize, max_k: i64) -> (IntMatrix, Vec<ElementaryFactor>) {
    let count = rng.gen_range(0..=max_factors);
    let factors: Vec<ElementaryFactor> = (0..count)
        .map(|_| match rng.gen_range(0..3) {
            0 => {
                let mut idx: Vec<usize> = (1..=n).collect();
                idx.shuffle(rng);
                let k = loop {
                    let k = rng.gen_range(-max_k..=max_k);
                    if k != 0 {
                        break k;
                    }
                };
                ElementaryFactor::transvection(idx[0], idx[1], k)
            }
            1 => ElementaryFactor::SignFlip(rng.gen_range(1..=n)),
            _ => {
                let mut idx: Vec<usize> = (1..=n).collect();
                idx.shuffle(rng);
                ElementaryFactor::transposition(idx[0], idx[1])
            }
        })
        .collect();
    let m = crate::matrix::product(&factors, n).expect("small entries");
    (m, factors)
}

/// `|Q(φ(A))| ≤ ∏_{i≠j} (1 + |a_ij|)` for `samples` random unit-diagonal
/// triangular `A` with `|a_ij| ≤ 5`.
pub fn corollary(n: usize, samples: usize, seed: u64) -> Result<Vec<ClaimResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut failures, mut checked) = (Vec::new(), 0);
    for s in 0..samples {
        let a = random_unitriangular(&mut rng, n, 5, s % 2 == 0);
        let bound: u64 = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| 1 + a.get(r, c).unsigned_abs())
            .product();
        let count = phi(&a)?.state_count() as u64;
        checked += 1;
        if count > bound {
            failures.push(format!("{a}: {count} states > {bound}"));
        }
    }
    Ok(vec![ClaimResult::new(format!("corollary triangular bound (n={n})"), failures, checked)])
}

/// Elementary images agree with the state-count oracle.
pub fn elementary_counts(n: usize, kmax: i64) -> Result<Vec<ClaimResult>> {
    let (mut failures, mut checked) = (Vec::new(), 0);
    for i in 1..=n {
        for j in 1..=n {
            let mut fs = Vec::new();
            if i < j {
                fs.push(ElementaryFactor::Transposition(i, j));
            }
            if i == j {
                fs.push(ElementaryFactor::SignFlip(i));
            } else {
                fs.extend((-kmax..=kmax).filter(|&k| k != 0).map(|k| ElementaryFactor::transvection(i, j, k)));
            }
            for f in fs {
                checked += 1;
                let count = elementary_to_automorphism(f, n)?.num_states();
                if count != expected_states(f) {
                    failures.push(format!("{f}: {count}"));
                }
            }
        }
    }
    Ok(vec![ClaimResult::new(format!("elementary images (n={n})"), failures, checked)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn small_suites_pass() {
        for r in theorem1(2, 3).unwrap().into_iter().chain(lemma1(3).unwrap()).chain(lemma2(2, 4).unwrap()) {
            assert!(r.passed, "{r:?}");
        }
        for r in proposition1(2, 3).unwrap().into_iter().chain(corollary(2, 6, 1).unwrap()) {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn random_products_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (m, _) = random_elementary_product(&mut rng, 3, 6, 4);
            assert!(m.check_unimodular().is_ok());
        }
    }
}
