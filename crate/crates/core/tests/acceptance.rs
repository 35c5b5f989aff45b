//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! status 1 when any criterion fails.
//!
//! Oracles here are independent of the code under test where possible:
//! equality is cross-checked by comparing actions on every vertex of a fixed
//! level, matrix products use a local multiplication, and state sets are
//! counted by action signatures instead of minimization.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use glnz_core::embed::{generator_automorphism, generator_automorphism_with, phi, phi_with, CarryRule, Generator};
use glnz_core::free::{binary_generators, depth_conjugacy_check, freeness_check, s1, s2};
use glnz_core::matrix::{factorize, ElementaryFactor, IntMatrix};
use glnz_core::{Permutation, TreeAutomorphism};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn vertices(degree: usize, level: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..degree).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Equality of actions on every vertex of the given level.
fn same_action(g: &TreeAutomorphism, h: &TreeAutomorphism, level: usize) -> bool {
    vertices(g.degree(), level).iter().all(|v| g.act(v).unwrap() == h.act(v).unwrap())
}

/// Number of distinct states reachable within `reach` letters, told apart by
/// their action on level `level`.
fn state_signatures(g: &TreeAutomorphism, reach: usize, level: usize) -> usize {
    let probes = vertices(g.degree(), level);
    let mut seen = HashSet::new();
    for r in 0..=reach {
        for v in vertices(g.degree(), r) {
            let s = g.state_at(&v).unwrap();
            seen.insert(probes.iter().map(|p| s.act(p).unwrap()).collect::<Vec<_>>());
        }
    }
    seen.len()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}

fn random_factor(rng: &mut ChaCha8Rng, n: usize) -> ElementaryFactor {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    match rng.gen_range(0..3) {
        0 => {
            let k = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
            ElementaryFactor::transvection(idx[0], idx[1], k)
        }
        1 => ElementaryFactor::SignFlip(idx[0]),
        _ => ElementaryFactor::transposition(idx[0], idx[1]),
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, max_factors: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
    for _ in 0..rng.gen_range(0..=max_factors) {
        m = mat_mul(&m, &random_factor(rng, n).matrix(n).unwrap().rows());
    }
    m
}

fn theorem1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for n in 2..=4 {
        for _ in 0..10 {
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rng);
            let p = IntMatrix::permutation(&images).unwrap();
            let c = phi(&p).unwrap().state_count();
            if c != 1 {
                return Err(format!("phi({p}) has {c} states"));
            }
            checked += 1;
        }
        for i in 1..=n {
            let c = phi(&ElementaryFactor::SignFlip(i).matrix(n).unwrap()).unwrap().state_count();
            if c != 8 {
                return Err(format!("phi(E_{i}) has {c} states for n={n}"));
            }
            checked += 1;
        }
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for k in (-20..=20i64).filter(|&k| k != 0) {
                    let m = ElementaryFactor::transvection(i, j, k).matrix(n).unwrap();
                    let c = phi(&m).unwrap().state_count();
                    if c as i64 != k.abs() + 1 {
                        return Err(format!("phi(T_{i}{j}({k})) has {c} states for n={n}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} images"))
}

fn lemma1() -> Outcome {
    for n in 2..=4 {
        let t1 = generator_automorphism(Generator::T1, n).unwrap();
        let t2 = generator_automorphism(Generator::T2, n).unwrap();
        let (g, h) = (t1.compose(&t2).unwrap(), t2.compose(&t1).unwrap());
        let sigma = Permutation::from_images((0..1 << n).map(|x| x ^ 1).collect()).unwrap();
        if !g.equals(&h).unwrap() || !same_action(&g, &h, 3) {
            return Err(format!("t1 t2 != t2 t1 for n={n}"));
        }
        if g.rooted_permutation() != &sigma || h.rooted_permutation() != &sigma {
            return Err(format!("rooted permutation is not sigma for n={n}"));
        }
    }
    Ok("n = 2, 3, 4".into())
}

fn monomial(t1: &TreeAutomorphism, t2: &TreeAutomorphism, i: i64, j: i64) -> TreeAutomorphism {
    t1.power(i).compose(&t2.power(j)).unwrap().minimize()
}

fn lemma2() -> Outcome {
    for n in 2..=3 {
        let t1 = generator_automorphism(Generator::T1, n).unwrap();
        let t2 = generator_automorphism(Generator::T2, n).unwrap();
        for m in 1..=20i64 {
            let g = t1.power(m).minimize();
            if g.state_count() as i64 != m + 1 {
                return Err(format!("t1^{m} has {} states (n={n})", g.state_count()));
            }
            if !g.is_strongly_connected() {
                return Err(format!("t1^{m} is not strongly connected (n={n})"));
            }
            let q: Vec<TreeAutomorphism> = (0..=m).map(|i| monomial(&t1, &t2, i, m - i)).collect();
            let states: Vec<TreeAutomorphism> =
                (0..g.num_states()).map(|s| TreeAutomorphism::new(g.degree(), g.states().to_vec(), s).unwrap()).collect();
            let mut used = vec![false; q.len()];
            for s in &states {
                let hits: Vec<usize> = (0..q.len()).filter(|&i| s.equals(&q[i]).unwrap()).collect();
                match hits.as_slice() {
                    [i] if !used[*i] => used[*i] = true,
                    _ => return Err(format!("state set of t1^{m} does not match Q (n={n})")),
                }
            }
            if used.iter().any(|u| !u) {
                return Err(format!("Q not covered for m={m}"));
            }
        }
        let mut checked = 0;
        for k1 in 0..=3i64 {
            for k2 in 0..=3i64 {
                for e1 in 0..=1i64 {
                    for e2 in 0..=1i64 {
                        let g = monomial(&t1, &t2, 2 * k1 + e1, 2 * k2 + e2);
                        let expected = [
                            (2 * k1 + e1 + k2, k2 + e2),
                            (2 * k1 + e1 + k2 + e2, k2),
                            (k1 + e1, k1 + 2 * k2 + e2),
                            (k1, k1 + e1 + 2 * k2 + e2),
                        ];
                        for (bits, (a, b)) in expected.into_iter().enumerate() {
                            // Remaining coordinates zero: letter index equals the two low bits.
                            let child = g.state_at(&[bits]).unwrap();
                            let want = monomial(&t1, &t2, a, b);
                            if !child.equals(&want).unwrap() || !same_action(&child, &want, 2) {
                                return Err(format!("first-level state at {bits} of t1^{} t2^{} (n={n})", 2 * k1 + e1, 2 * k2 + e2));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        if checked != 256 {
            return Err("grid size".into());
        }
    }
    Ok("m <= 20, n = 2, 3; 256 first-level states per n".into())
}

fn proposition1() -> Outcome {
    let t1 = generator_automorphism(Generator::T1, 2).unwrap();
    let t2 = generator_automorphism(Generator::T2, 2).unwrap();
    if !t1.compose(&t2).unwrap().equals(&t2.compose(&t1).unwrap()).unwrap() {
        return Err("t1, t2 do not commute".into());
    }
    for j in 0..=10 {
        for k in 0..=10 {
            if (j, k) != (0, 0) && monomial(&t1, &t2, j, k).is_identity() {
                return Err(format!("t1^{j} t2^{k} = e"));
            }
        }
    }
    Ok("120 monomials".into())
}

fn corollary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in 0..100 {
        let n = 2 + s % 2;
        let upper = rng.gen_bool(0.5);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match (r == c, (c > r) == upper) {
                        (true, _) => 1,
                        (false, true) => rng.gen_range(-5..=5),
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let bound: u64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| 1 + rows[r][c].unsigned_abs())
            .product();
        let a = IntMatrix::from_rows(rows).unwrap();
        let c = phi(&a).unwrap().state_count() as u64;
        if c > bound {
            return Err(format!("phi({a}) has {c} states > {bound}"));
        }
    }
    Ok("100 triangular matrices".into())
}

fn factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for s in 0..200 {
        let n = 2 + s % 3;
        let a = random_unimodular(&mut rng, n, 12);
        let factors = factorize(&IntMatrix::from_rows(a.clone()).unwrap()).map_err(|e| e.to_string())?;
        let mut p: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
        for f in &factors {
            p = mat_mul(&p, &f.matrix(n).unwrap().rows());
        }
        if p != a {
            return Err(format!("factorize({a:?}) multiplies to {p:?}"));
        }
    }
    Ok("200 matrices".into())
}

fn homomorphism_failures(rule: CarryRule) -> (usize, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    let mut first = String::new();
    for s in 0..50 {
        let n = 2 + s % 2;
        let a = IntMatrix::from_rows(random_unimodular(&mut rng, n, 4)).unwrap();
        let b = IntMatrix::from_rows(random_unimodular(&mut rng, n, 4)).unwrap();
        let lhs = phi_with(&a.mul(&b).unwrap(), rule).unwrap();
        let rhs = phi_with(&a, rule).unwrap().compose(&phi_with(&b, rule).unwrap()).unwrap();
        let eq = lhs.equals(&rhs).unwrap();
        assert!(!eq || same_action(&lhs, &rhs, if n == 2 { 4 } else { 3 }), "equality oracle disagrees");
        if !eq {
            failures += 1;
            if first.is_empty() {
                first = format!("A = {a}, B = {b}");
            }
        }
    }
    (failures, first)
}

fn homomorphism() -> Outcome {
    let (failures, first) = homomorphism_failures(CarryRule::default());
    let (additive, _) = homomorphism_failures(CarryRule::Additive);
    let info = format!("additive-carry t2 fails {additive} of 50");
    check(failures == 0, format!("{failures} of 50 pairs differ (first: {first}); {info}"))
}

fn recursion_table() -> Outcome {
    let t1 = generator_automorphism(Generator::T1, 2).unwrap();
    let t2 = generator_automorphism(Generator::T2, 2).unwrap();
    let (s1, s2) = (s1(CarryRule::default()).unwrap(), s2(CarryRule::default()).unwrap());
    let p = |x: &TreeAutomorphism, y: &TreeAutomorphism| x.compose(y).unwrap();
    let (t11, t22, t12, t21) = (p(&t1, &t1), p(&t2, &t2), p(&t1, &t2), p(&t2, &t1));
    let (s11, s22, s12, s21) = (p(&s1, &s1), p(&s2, &s2), p(&s1, &s2), p(&s2, &s1));
    let table: [(&str, &TreeAutomorphism, [&TreeAutomorphism; 4], &str); 6] = [
        ("t1^2", &t11, [&t11, &t11, &t12, &t21], "()"),
        ("t2^2", &t22, [&t21, &t12, &t22, &t22], "()"),
        ("t1t2", &t12, [&t12, &t11, &t12, &t22], "(12)(34)"),
        ("s1^2", &s11, [&s11, &s12, &s11, &s21], "()"),
        ("s2^2", &s22, [&s21, &s22, &s12, &s22], "()"),
        ("s1s2", &s12, [&s12, &s12, &s11, &s22], "(13)(24)"),
    ];
    for (name, g, children, perm) in table {
        if g.rooted_permutation().to_string() != perm {
            return Err(format!("{name}: rooted permutation {}", g.rooted_permutation()));
        }
        for (x, want) in children.into_iter().enumerate() {
            if !same_action(&g.state_at(&[x]).unwrap(), want, 5) {
                return Err(format!("{name}: state at letter {} differs", x + 1));
            }
        }
    }
    if !t12.equals(&t21).unwrap() || !s12.equals(&s21).unwrap() {
        return Err("products do not commute".into());
    }
    Ok("six recursions".into())
}

fn refinement() -> Outcome {
    let (a, d) = binary_generators();
    let (ca, cd) = (a.state_count(), d.state_count());
    let (oa, od) = (state_signatures(&a, 8, 7), state_signatures(&d, 8, 7));
    let conj = depth_conjugacy_check(6);
    let detail = format!(
        "a: {ca} states (signature oracle {oa}), d: {cd} states (signature oracle {od}), raw refined sizes {}/{}; conjugacy at depth 6: {conj}",
        raw_size(CarryRule::default(), true),
        raw_size(CarryRule::default(), false)
    );
    check(ca == 9 && cd == 9 && ca == oa && cd == od && conj, detail)
}

fn raw_size(rule: CarryRule, first: bool) -> usize {
    let f = glnz_core::RefinementMap::quaternary_to_binary();
    let g = if first {
        let t1 = generator_automorphism_with(Generator::T1, 2, rule).unwrap();
        t1.compose(&t1).unwrap()
    } else {
        let s = s1(rule).unwrap();
        s.compose(&s).unwrap()
    };
    g.minimize().refine(&f).unwrap().num_states()
}

fn freeness() -> Outcome {
    let report = freeness_check(8);
    check(
        report.counterexample.is_none() && report.words_checked == 13_120,
        format!("{} reduced words, counterexample: {:?}", report.words_checked, report.counterexample.map(|w| w.to_string())),
    )
}

fn random_element(rng: &mut ChaCha8Rng, gens: &[TreeAutomorphism]) -> TreeAutomorphism {
    let mut g = TreeAutomorphism::identity(gens[0].degree()).unwrap();
    for _ in 0..rng.gen_range(0..=6) {
        let x = gens.choose(rng).unwrap();
        let x = if rng.gen_bool(0.5) { x.inverse() } else { x.clone() };
        g = g.compose(&x).unwrap();
    }
    g
}

fn calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=3 {
        let mut gens = vec![
            generator_automorphism(Generator::T1, n).unwrap(),
            generator_automorphism(Generator::T2, n).unwrap(),
            generator_automorphism(Generator::S(1, 2), n).unwrap(),
        ];
        if n == 3 {
            gens.push(generator_automorphism(Generator::S(2, 3), n).unwrap());
        }
        for _ in 0..40 {
            let g = random_element(&mut rng, &gens);
            let h = random_element(&mut rng, &gens);
            let gh = g.compose(&h).unwrap();
            let gi = g.inverse();
            let depth = rng.gen_range(0..=6);
            let v: Vec<usize> = (0..depth).map(|_| rng.gen_range(0..1 << n)).collect();
            if gh.act(&v).unwrap() != h.act(&g.act(&v).unwrap()).unwrap() {
                return Err(format!("action law at {v:?}"));
            }
            if gi.act(&g.act(&v).unwrap()).unwrap() != v || !g.compose(&gi).unwrap().is_identity() {
                return Err("inverse law".into());
            }
            if gh.num_states() > g.num_states() * h.num_states() {
                return Err("product state bound".into());
            }
            if gi.state_count() != g.state_count() {
                return Err("inverse state count".into());
            }
            let m = g.minimize();
            if m.minimize() != m {
                return Err("minimization is not idempotent".into());
            }
        }
    }
    Ok("80 random pairs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 theorem 1 state counts", theorem1),
        ("2 lemma 1 commutation", lemma1),
        ("3 lemma 2 state sets", lemma2),
        ("4 proposition 1 bounded", proposition1),
        ("5 corollary bound", corollary),
        ("6 factorization soundness", factorization),
        ("7 homomorphism property", homomorphism),
        ("8 recursion table", recursion_table),
        ("9 refinement and conjugacy", refinement),
        ("10 bounded freeness", freeness),
        ("11 calculus invariants", calculus),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
