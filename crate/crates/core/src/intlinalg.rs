//! Exact integer linear algebra: Smith normal form with transforms, column
//! echelon (Hermite) form of sparse lattices, and least multiples of a
//! vector lying in a column lattice.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|x| x.iter().cloned().map(Into::into)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = q * s;
                self.data[dst * self.cols + j] -= t;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let t = q * s;
                self.data[i * self.cols + dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `U · A · V = S` with `U`, `V` unimodular and `S` diagonal,
/// `s_1 | s_2 | ...`, all `s_i >= 0`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        (0..self.s.rows.min(self.s.cols))
            .take_while(|&i| !self.s[(i, i)].is_zero())
            .count()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn min_abs_nonzero(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !s[(i, t)].is_zero() {
                    let q = s[(i, t)].div_floor(&s[(t, t)]);
                    s.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !s[(t, j)].is_zero() {
                    let q = s[(t, j)].div_floor(&s[(t, t)]);
                    s.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !s[(i, t)].is_zero() && s[(i, t)].abs() < s[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !s[(t, j)].is_zero() && s[(t, j)].abs() < s[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    s.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    s.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            let pivot = s[(t, t)].clone();
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    s.row_sub(t, i, &minus_one);
                    u.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, s, v }
}

/// Outcome of a least-multiple query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultipleOutcome {
    /// `D · witness = n · c`, and no smaller positive `n` works.
    Found { n: u64, witness: Vec<BigInt> },
    /// No `n` in `1..=bound` puts `n · c` in the column lattice.
    NoneUpTo(u64),
}

impl MultipleOutcome {
    pub fn multiple(&self) -> Option<u64> {
        match self {
            MultipleOutcome::Found { n, .. } => Some(*n),
            MultipleOutcome::NoneUpTo(_) => None,
        }
    }
}

/// Row and column count at or below which the dense SNF route is used.
pub const DENSE_LIMIT: usize = 200;

/// Least `n` in `1..=bound` with `n · c` in the integer column span of `d`,
/// with a witness. Dense matrices of modest size go through the Smith form;
/// larger ones through the sparse column echelon form.
pub fn minimal_multiple_in_image(d: &IntMatrix, c: &[BigInt], bound: u64) -> Result<MultipleOutcome, LinAlgError> {
    check_dims(d.rows, c.len())?;
    if d.rows <= DENSE_LIMIT && d.cols <= DENSE_LIMIT {
        Ok(minimal_multiple_snf(d, c, bound))
    } else {
        Ok(minimal_multiple_hnf(&SparseColumns::from_dense(d), c, bound))
    }
}

fn check_dims(rows: usize, len: usize) -> Result<(), LinAlgError> {
    if rows != len {
        return Err(LinAlgError::DimensionMismatch(format!(
            "matrix has {rows} rows but vector has length {len}"
        )));
    }
    Ok(())
}

/// Smith-form route: with `U D V = S` and `d = U c`, `n c ∈ im D` iff
/// `s_i | n d_i` for `i < rank` and `d_i = 0` beyond the rank.
pub fn minimal_multiple_snf(d: &IntMatrix, c: &[BigInt], bound: u64) -> MultipleOutcome {
    let snf = smith_normal_form(d);
    let uc = snf.u.mul_vec(c);
    let r = snf.rank();
    if uc[r..].iter().any(|x| !x.is_zero()) {
        return MultipleOutcome::NoneUpTo(bound);
    }
    let mut n = BigInt::one();
    for i in 0..r {
        let s = &snf.s[(i, i)];
        let need = s / s.gcd(&uc[i]);
        n = n.lcm(&need);
    }
    if n > BigInt::from(bound) {
        return MultipleOutcome::NoneUpTo(bound);
    }
    let mut y = vec![BigInt::zero(); d.cols];
    for i in 0..r {
        y[i] = &n * &uc[i] / &snf.s[(i, i)];
    }
    MultipleOutcome::Found {
        n: n.to_u64().unwrap(),
        witness: snf.v.mul_vec(&y),
    }
}

type SparseVec = Vec<(usize, BigInt)>;

/// Column-major sparse integer matrix.
#[derive(Debug, Clone, Default)]
pub struct SparseColumns {
    pub rows: usize,
    pub columns: Vec<SparseVec>,
}

impl SparseColumns {
    pub fn new(rows: usize) -> Self {
        SparseColumns {
            rows,
            columns: Vec::new(),
        }
    }

    /// Appends a column given as unsorted `(row, value)` pairs; repeated
    /// rows are summed.
    pub fn push_column(&mut self, entries: impl IntoIterator<Item = (usize, BigInt)>) {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (r, x) in entries {
            assert!(r < self.rows, "row index out of range");
            *acc.entry(r).or_default() += x;
        }
        self.columns.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
    }

    pub fn from_dense(d: &IntMatrix) -> Self {
        let mut s = SparseColumns::new(d.rows);
        for j in 0..d.cols {
            s.push_column((0..d.rows).map(|i| (i, d[(i, j)].clone())));
        }
        s
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m[(*i, j)] = x.clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rows];
        for (col, a) in self.columns.iter().zip(x) {
            if a.is_zero() {
                continue;
            }
            for (i, v) in col {
                out[*i] += v * a;
            }
        }
        out
    }
}

/// `a -= q * b` on sorted sparse vectors.
fn sparse_axpy(a: &SparseVec, q: &BigInt, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(q * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - q * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column echelon basis of a column lattice: pivot rows strictly increase,
/// and each basis column records its combination of the original columns.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub rows: usize,
    pub pivots: Vec<(usize, SparseVec, SparseVec)>,
}

impl ColumnEchelon {
    pub fn new(d: &SparseColumns) -> Self {
        let mut buckets: BTreeMap<usize, Vec<(SparseVec, SparseVec)>> = BTreeMap::new();
        for (j, col) in d.columns.iter().enumerate() {
            if let Some(&(lead, _)) = col.first() {
                buckets
                    .entry(lead)
                    .or_default()
                    .push((col.clone(), vec![(j, BigInt::one())]));
            }
        }
        let mut pivots = Vec::new();
        while let Some((r, mut group)) = buckets.pop_first() {
            while group.len() > 1 {
                let p = (0..group.len())
                    .min_by(|&a, &b| group[a].0[0].1.abs().cmp(&group[b].0[0].1.abs()))
                    .unwrap();
                let pivot = group.swap_remove(p);
                let mut keep = vec![];
                for (col, combo) in group.drain(..) {
                    let q = col[0].1.div_floor(&pivot.0[0].1);
                    let col = sparse_axpy(&col, &q, &pivot.0);
                    let combo = sparse_axpy(&combo, &q, &pivot.1);
                    match col.first() {
                        None => {}
                        Some(&(lead, _)) if lead == r => keep.push((col, combo)),
                        Some(&(lead, _)) => buckets.entry(lead).or_default().push((col, combo)),
                    }
                }
                keep.push(pivot);
                group = keep;
            }
            let (col, combo) = group.pop().unwrap();
            pivots.push((r, col, combo));
        }
        ColumnEchelon { rows: d.rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Hermite/echelon route: solve `H y = c` by forward substitution on the
/// pivot rows, scaling by the least factor that keeps every coordinate
/// integral. The final scale is the least multiple.
pub fn minimal_multiple_hnf(d: &SparseColumns, c: &[BigInt], bound: u64) -> MultipleOutcome {
    assert_eq!(d.rows, c.len(), "dimension mismatch");
    let ech = ColumnEchelon::new(d);
    let mut residual = c.to_vec();
    let mut n = BigInt::one();
    let mut y: Vec<BigInt> = Vec::with_capacity(ech.rank());
    let big_bound = BigInt::from(bound);
    for (r, col, _) in &ech.pivots {
        let a = &residual[*r];
        if a.is_zero() {
            y.push(BigInt::zero());
            continue;
        }
        let p = &col[0].1;
        let scale = p.abs() / p.gcd(a);
        if !scale.is_one() {
            n *= &scale;
            if n > big_bound {
                return MultipleOutcome::NoneUpTo(bound);
            }
            for x in residual.iter_mut() {
                *x *= &scale;
            }
            for x in y.iter_mut() {
                *x *= &scale;
            }
        }
        let yk = &residual[*r] / p;
        for (i, v) in col {
            residual[*i] -= &yk * v;
        }
        y.push(yk);
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return MultipleOutcome::NoneUpTo(bound);
    }
    let mut witness = vec![BigInt::zero(); d.columns.len()];
    for (yk, (_, _, combo)) in y.iter().zip(&ech.pivots) {
        if yk.is_zero() {
            continue;
        }
        for (j, v) in combo {
            witness[*j] += yk * v;
        }
    }
    MultipleOutcome::Found {
        n: n.to_u64().unwrap(),
        witness,
    }
}

/// Same dispatch as [`minimal_multiple_in_image`] for a sparse matrix.
pub fn minimal_multiple_sparse(d: &SparseColumns, c: &[BigInt], bound: u64) -> Result<MultipleOutcome, LinAlgError> {
    check_dims(d.rows, c.len())?;
    if d.rows <= DENSE_LIMIT && d.columns.len() <= DENSE_LIMIT {
        Ok(minimal_multiple_snf(&d.to_dense(), c, bound))
    } else {
        Ok(minimal_multiple_hnf(d, c, bound))
    }
}

pub fn vec_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
