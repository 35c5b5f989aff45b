//! Square integer matrices and their factorization into elementary matrices.
//!
//! Indices in [`ElementaryFactor`] are 1-based. All arithmetic is checked;
//! overflow surfaces as [`Error::Overflow`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::Shape(format!("dimension must be at least 2, got {n}")));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!("row of length {} in a {n}x{n} matrix", r.len())));
        }
        Ok(IntMatrix { n, entries: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry in 0-based row `r`, column `c`.
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Shape(format!("cannot multiply {0}x{0} by {1}x{1}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc: i64 = 0;
                for t in 0..n {
                    let term = self.get(r, t).checked_mul(other.get(t, c)).ok_or(Error::Overflow("matrix product"))?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow("matrix product"))?;
                }
                out[r * n + c] = acc;
            }
        }
        Ok(IntMatrix { n, entries: out })
    }

    /// Determinant by fraction-free (Bareiss) elimination in 128-bit
    /// arithmetic.
    pub fn determinant(&self) -> Result<i64> {
        let n = self.n;
        let mut a: Vec<Vec<i128>> = self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .zip(a[i][k].checked_mul(a[k][j]))
                        .and_then(|(x, y)| x.checked_sub(y))
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
    }

    pub fn check_unimodular(&self) -> Result<()> {
        match self.determinant()? {
            1 | -1 => Ok(()),
            d => Err(Error::NotUnimodular(d)),
        }
    }

    /// Permutation matrix whose column `j` is the standard basis vector
    /// `e_{images[j]}` (0-based).
    pub fn permutation(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut m = IntMatrix { n, entries: vec![0; n * n] };
        let mut seen = vec![false; n];
        for (c, &r) in images.iter().enumerate() {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidIndex(format!("{images:?} is not a permutation")));
            }
            m.set(r, c, 1);
        }
        if n < 2 {
            return Err(Error::Shape("dimension must be at least 2".into()));
        }
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m = IntMatrix::from_rows(raw.rows)?;
        if m.n != raw.n {
            return Err(Error::Shape(format!("declared n = {} but rows describe {}x{}", raw.n, m.n, m.n)));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson { n: self.n, rows: self.rows() }).expect("matrix serializes")
    }

    fn add_column_multiple(&mut self, src: usize, dst: usize, k: i64) -> Result<()> {
        for r in 0..self.n {
            let v = self
                .get(r, src)
                .checked_mul(k)
                .and_then(|t| t.checked_add(self.get(r, dst)))
                .ok_or(Error::Overflow("column operation"))?;
            self.set(r, dst, v);
        }
        Ok(())
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        for r in 0..self.n {
            self.entries.swap(r * self.n + a, r * self.n + b);
        }
    }

    fn negate_column(&mut self, c: usize) -> Result<()> {
        for r in 0..self.n {
            let v = self.get(r, c).checked_neg().ok_or(Error::Overflow("column operation"))?;
            self.set(r, c, v);
        }
        Ok(())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `{"n": 2, "rows": [[1,0],[2,1]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
}

/// Elementary matrices, 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementaryFactor {
    /// Identity with entry `(i, j)` set to `k`: adds `k` times column `i`
    /// to column `j`.
    #[serde(rename = "T")]
    Transvection { i: usize, j: usize, k: i64 },
    /// Identity with column `i` negated.
    #[serde(rename = "E")]
    SignFlip(usize),
    /// Permutation matrix exchanging `i < j`.
    #[serde(rename = "P")]
    Transposition(usize, usize),
}

impl ElementaryFactor {
    pub fn transvection(i: usize, j: usize, k: i64) -> Self {
        ElementaryFactor::Transvection { i, j, k }
    }

    /// Transposition with its indices put in increasing order.
    pub fn transposition(i: usize, j: usize) -> Self {
        ElementaryFactor::Transposition(i.min(j), i.max(j))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let in_range = |i: usize| (1..=n).contains(&i);
        let ok = match *self {
            ElementaryFactor::Transvection { i, j, k } => in_range(i) && in_range(j) && i != j && k != 0,
            ElementaryFactor::SignFlip(i) => in_range(i),
            ElementaryFactor::Transposition(i, j) => in_range(i) && in_range(j) && i < j,
        };
        if n < 2 || !ok {
            return Err(Error::InvalidIndex(format!("{self} is not an elementary factor for n = {n}")));
        }
        Ok(())
    }

    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        self.validate(n)?;
        let mut m = IntMatrix::identity(n);
        match *self {
            ElementaryFactor::Transvection { i, j, k } => m.set(i - 1, j - 1, k),
            ElementaryFactor::SignFlip(i) => m.set(i - 1, i - 1, -1),
            ElementaryFactor::Transposition(i, j) => m.swap_columns(i - 1, j - 1),
        }
        Ok(m)
    }

    pub fn inverse(&self) -> Self {
        match *self {
            ElementaryFactor::Transvection { i, j, k } => ElementaryFactor::Transvection { i, j, k: -k },
            other => other,
        }
    }
}

impl fmt::Display for ElementaryFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ElementaryFactor::Transvection { i, j, k } => write!(f, "T{i},{j}({k})"),
            ElementaryFactor::SignFlip(i) => write!(f, "E{i}"),
            ElementaryFactor::Transposition(i, j) => write!(f, "E{i},{j}"),
        }
    }
}

/// Wire form of a factor: `{"T": [i,j,k]}`, `{"E": i}` or `{"P": [i,j]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum FactorJson {
    T([i64; 3]),
    E(usize),
    P([usize; 2]),
}

pub fn factors_to_json(factors: &[ElementaryFactor]) -> String {
    let raw: Vec<FactorJson> = factors
        .iter()
        .map(|f| match *f {
            ElementaryFactor::Transvection { i, j, k } => FactorJson::T([i as i64, j as i64, k]),
            ElementaryFactor::SignFlip(i) => FactorJson::E(i),
            ElementaryFactor::Transposition(i, j) => FactorJson::P([i, j]),
        })
        .collect();
    serde_json::to_string(&raw).expect("factors serialize")
}

pub fn factors_from_json(text: &str) -> Result<Vec<ElementaryFactor>> {
    let raw: Vec<FactorJson> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_iter()
        .map(|f| match f {
            FactorJson::T([i, j, k]) => {
                let idx = |v: i64| usize::try_from(v).map_err(|_| Error::Parse(format!("bad index {v}")));
                Ok(ElementaryFactor::Transvection { i: idx(i)?, j: idx(j)?, k })
            }
            FactorJson::E(i) => Ok(ElementaryFactor::SignFlip(i)),
            FactorJson::P([i, j]) => Ok(ElementaryFactor::Transposition(i, j)),
        })
        .collect()
}

/// Ordered product `F_1 ⋯ F_m` (the identity for an empty list).
pub fn product(factors: &[ElementaryFactor], n: usize) -> Result<IntMatrix> {
    factors
        .iter()
        .try_fold(IntMatrix::identity(n), |acc, f| acc.mul(&f.matrix(n)?))
}

/// Factors a unimodular matrix as `A = F_1 ⋯ F_m`.
///
/// Integer column reduction: for each row `p` the smallest nonzero entry
/// among columns `p..n` is swapped onto the diagonal and the Euclidean
/// algorithm clears the rest of the row, leaving a lower triangular matrix
/// with `±1` on the diagonal. Subdiagonal entries are then cleared column by
/// column and the remaining signs become [`ElementaryFactor::SignFlip`]s.
/// The result makes no claim of minimality.
pub fn factorize(a: &IntMatrix) -> Result<Vec<ElementaryFactor>> {
    a.check_unimodular()?;
    let n = a.dim();
    let mut m = a.clone();
    // Column operations C_1, …, C_r with A·C_1⋯C_r = D.
    let mut ops: Vec<ElementaryFactor> = Vec::new();

    for p in 0..n {
        loop {
            let pivot = (p..n)
                .filter(|&c| m.get(p, c) != 0)
                .min_by_key(|&c| (m.get(p, c).unsigned_abs(), c))
                .ok_or(Error::NotUnimodular(0))?;
            if pivot != p {
                m.swap_columns(p, pivot);
                ops.push(ElementaryFactor::transposition(p + 1, pivot + 1));
            }
            let d = m.get(p, p);
            let mut done = true;
            for c in p + 1..n {
                let q = m.get(p, c) / d;
                if q != 0 {
                    let k = q.checked_neg().ok_or(Error::Overflow("factorization"))?;
                    m.add_column_multiple(p, c, k)?;
                    ops.push(ElementaryFactor::transvection(p + 1, c + 1, k));
                }
                done &= m.get(p, c) == 0;
            }
            if done {
                break;
            }
        }
    }

    // Right to left: column r is already ±e_r when it clears column c, so
    // each entry is removed by one transvection carrying its own value.
    for c in (0..n).rev() {
        for r in c + 1..n {
            let v = m.get(r, c);
            if v != 0 {
                let k = v.checked_mul(m.get(r, r)).and_then(i64::checked_neg).ok_or(Error::Overflow("factorization"))?;
                m.add_column_multiple(r, c, k)?;
                ops.push(ElementaryFactor::transvection(r + 1, c + 1, k));
            }
        }
    }

    let mut factors: Vec<ElementaryFactor> = Vec::new();
    for i in 0..n {
        match m.get(i, i) {
            1 => {}
            -1 => {
                m.negate_column(i)?;
                factors.push(ElementaryFactor::SignFlip(i + 1));
            }
            d => return Err(Error::NotUnimodular(d)),
        }
    }
    debug_assert_eq!(m, IntMatrix::identity(n));
    factors.extend(ops.iter().rev().map(ElementaryFactor::inverse));
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn elementary_matrices() {
        assert_eq!(ElementaryFactor::transvection(2, 1, 1).matrix(2).unwrap(), mat(&[&[1, 0], &[1, 1]]));
        assert_eq!(ElementaryFactor::SignFlip(1).matrix(2).unwrap(), mat(&[&[-1, 0], &[0, 1]]));
        assert_eq!(ElementaryFactor::Transposition(1, 2).matrix(2).unwrap(), mat(&[&[0, 1], &[1, 0]]));
        assert!(ElementaryFactor::transvection(1, 1, 3).validate(3).is_err());
        assert!(ElementaryFactor::transvection(1, 2, 0).validate(3).is_err());
        assert!(ElementaryFactor::Transposition(2, 1).validate(3).is_err());
        assert!(ElementaryFactor::SignFlip(4).validate(3).is_err());
    }

    #[test]
    fn determinant() {
        assert_eq!(mat(&[&[0, -1], &[1, 0]]).determinant().unwrap(), 1);
        assert_eq!(mat(&[&[2, 0], &[0, 1]]).determinant().unwrap(), 2);
        assert_eq!(mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).determinant().unwrap(), -1);
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).determinant().unwrap(), 0);
        assert_eq!(mat(&[&[2, 3, 1], &[1, 2, 5], &[0, 1, 7]]).determinant().unwrap(), -2);
    }

    #[test]
    fn sign_flip_identity_through_transvections() {
        // E_1 = T21(1) E12 T21(-1) E12 T21(1) E12
        let t = |k| ElementaryFactor::transvection(2, 1, k);
        let s = ElementaryFactor::Transposition(1, 2);
        let word = [t(1), s, t(-1), s, t(1), s];
        assert_eq!(product(&word, 2).unwrap(), ElementaryFactor::SignFlip(1).matrix(2).unwrap());
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(&IntMatrix::identity(3)).unwrap().is_empty());
        assert_eq!(
            factorize(&mat(&[&[1, 0], &[1, 1]])).unwrap(),
            vec![ElementaryFactor::transvection(2, 1, 1)]
        );
        let rot = mat(&[&[0, -1], &[1, 0]]);
        assert_eq!(product(&factorize(&rot).unwrap(), 2).unwrap(), rot);
        let big = mat(&[&[7, 5, 2], &[3, 2, 1], &[1, 1, 1]]);
        assert_eq!(big.determinant().unwrap(), -1);
        assert_eq!(product(&factorize(&big).unwrap(), 3).unwrap(), big);
    }

    #[test]
    fn unitriangular_factors_carry_the_entries() {
        let seen = |a: IntMatrix| {
            let mut ks: Vec<i64> = factorize(&a)
                .unwrap()
                .into_iter()
                .map(|f| match f {
                    ElementaryFactor::Transvection { k, .. } => k,
                    other => panic!("unexpected factor {other}"),
                })
                .collect();
            ks.sort();
            ks
        };
        assert_eq!(seen(mat(&[&[1, 0, 0], &[4, 1, 0], &[4, -1, 1]])), [-1, 4, 4]);
        assert_eq!(seen(mat(&[&[1, 2, -3], &[0, 1, 5], &[0, 0, 1]])), [-3, 2, 5]);
    }

    #[test]
    fn factorize_rejects_singular() {
        assert_eq!(factorize(&mat(&[&[2, 0], &[0, 1]])), Err(Error::NotUnimodular(2)));
        assert_eq!(factorize(&mat(&[&[1, 2], &[2, 4]])), Err(Error::NotUnimodular(0)));
    }

    #[test]
    fn factorize_reports_overflow() {
        let huge = mat(&[&[1, i64::MAX], &[0, 1]]);
        let mut big = huge.clone();
        big.set(1, 0, i64::MAX);
        assert!(matches!(factorize(&big), Err(Error::Overflow(_))));
    }

    #[test]
    fn json_formats() {
        let m = IntMatrix::from_json(r#"{"n":2,"rows":[[1,0],[2,1]]}"#).unwrap();
        assert_eq!(m, mat(&[&[1, 0], &[2, 1]]));
        assert_eq!(m.to_json(), r#"{"n":2,"rows":[[1,0],[2,1]]}"#);
        assert!(matches!(IntMatrix::from_json(r#"{"n":2,"rows":[[1,0]]}"#), Err(Error::Shape(_))));
        assert!(matches!(IntMatrix::from_json(r#"{"n":3,"rows":[[1,0],[0,1]]}"#), Err(Error::Shape(_))));
        assert!(matches!(IntMatrix::from_json("[1"), Err(Error::Parse(_))));

        let fs = vec![
            ElementaryFactor::transvection(2, 1, -3),
            ElementaryFactor::SignFlip(2),
            ElementaryFactor::Transposition(1, 3),
        ];
        let text = factors_to_json(&fs);
        assert_eq!(text, r#"[{"T":[2,1,-3]},{"E":2},{"P":[1,3]}]"#);
        assert_eq!(factors_from_json(&text).unwrap(), fs);
    }
}
