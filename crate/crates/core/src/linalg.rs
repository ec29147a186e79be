//! Exact rational matrices: reduction, kernels, Gale duality, primitive
//! normalization and the little integer lattice machinery the divisor-class
//! bookkeeping needs.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{
    format_rational, gcd_slice, int, lcm_int, parse_rational, Int, Rational,
};

/// Dense exact rational matrix, row major. Entries are always in lowest
/// terms; equality is entrywise exact equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// The designated empty matrix (both dimensions zero).
    pub fn empty() -> Self {
        Self { rows: 0, cols: 0, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::Shape("ragged rows".into()));
            }
            entries.extend(row.iter().cloned());
        }
        Self::new(nrows, ncols, entries)
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(int(x))).collect())
                .collect(),
        )
        .expect("literal rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let term = a * &other[(k, c)];
                    out[(r, c)] += term;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| crate::rational::dot(self.row(r), v))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat with different row counts".into()));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.extend_from_slice(other.row(r));
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    /// Vertical concatenation, `self` on top.
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape("vcat with different column counts".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out[(r, k)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by exact Gaussian elimination (square matrices only).
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(sel) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if sel != col {
                m.swap_rows(col, sel);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let f = &m[(r, col)] / &pivot;
                    for c in col..n {
                        let term = &m[(col, c)] * &f;
                        m[(r, c)] -= term;
                    }
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form together with the pivot column indices in
    /// increasing order. The row space is preserved.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(sel) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, sel);
            let inv = m[(pivot_row, col)].recip();
            for c in col..m.cols {
                let scaled = &m[(pivot_row, c)] * &inv;
                m[(pivot_row, c)] = scaled;
            }
            for r in 0..m.rows {
                if r != pivot_row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let term = &m[(pivot_row, c)] * &factor;
                        m[(r, c)] -= term;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : M v = 0}` as matrix columns, canonicalized: columns are
    /// ordered by the position of their leading nonzero entry and that entry
    /// is normalized to 1.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Self::zero(self.cols, 0);
        }
        let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            // normalize the leading nonzero entry to 1
            let lead = v
                .iter()
                .position(|x| !x.is_zero())
                .expect("kernel vector is nonzero");
            let inv = v[lead].clone().recip();
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
            columns.push(v);
        }
        columns.sort_by_key(|v| v.iter().position(|x| !x.is_zero()).unwrap_or(self.cols));
        let mut out = Self::zero(self.cols, columns.len());
        for (j, v) in columns.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                out[(i, j)] = x.clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Solves `self * x = rhs` exactly. Returns `None` when inconsistent; for
    /// underdetermined systems returns the solution with free variables zero.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        if rhs.len() != self.rows {
            return None;
        }
        let mut aug = self.clone();
        let rhs_col = Self::new(self.rows, 1, rhs.to_vec()).ok()?;
        aug = aug.hcat(&rhs_col).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Serializes as rows of `"p/q"` strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        let parsed: Result<Vec<Vec<Rational>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect();
        Self::from_rows(parsed?)
    }

    /// Whitespace-separated text block, one row per line. `#` starts a
    /// comment; blank lines are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<Rational>> = line
                .split_whitespace()
                .map(|tok| {
                    parse_rational(tok).map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("malformed entry `{tok}`"),
                    })
                })
                .collect();
            rows.push(row?);
        }
        if rows.is_empty() {
            return Ok(Self::empty());
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parse {
                line: 0,
                msg: "rows have different lengths".into(),
            });
        }
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Self::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Integer vector; primitive means the gcd of the absolute values is one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerVector(pub Vec<Int>);

impl Serialize for IntegerVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        let mut coords = Vec::with_capacity(raw.len());
        for v in raw {
            let parsed = match &v {
                serde_json::Value::String(s) => s.parse::<Int>().ok(),
                serde_json::Value::Number(n) => n.as_i64().map(Int::from),
                _ => None,
            };
            coords.push(parsed.ok_or_else(|| {
                serde::de::Error::custom(format!("malformed integer entry {v}"))
            })?);
        }
        Ok(IntegerVector(coords))
    }
}

impl std::fmt::Debug for IntegerVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl IntegerVector {
    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Int::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && gcd_slice(&self.0).is_one()
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The unique primitive integer vector that is a positive rational multiple
/// of `v`. Rejects the zero vector.
pub fn primitive(v: &[Rational]) -> Result<IntegerVector> {
    if v.iter().all(Rational::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut denom_lcm = Int::one();
    for x in v {
        denom_lcm = lcm_int(&denom_lcm, x.denom());
    }
    let scaled: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let g = gcd_slice(&scaled);
    Ok(IntegerVector(scaled.iter().map(|x| x / &g).collect()))
}

/// Gale transform of a degree matrix in block form `(A | I_r)`: returns the
/// `(m + r) x m` matrix stacking `I_m` on top of `-A`. The input rows
/// annihilate every column of the output.
pub fn gale_transform(degree: &RationalMatrix) -> Result<RationalMatrix> {
    let r = degree.rows();
    let n = degree.cols();
    if r == 0 || n <= r {
        return Err(Error::Shape(format!(
            "degree matrix must be r x (m + r) with m > 0, got {}x{}",
            r, n
        )));
    }
    let m = n - r;
    for i in 0..r {
        for j in 0..r {
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            if degree[(i, m + j)] != expected {
                return Err(Error::NotIdentityBlock);
            }
        }
    }
    let mut out = RationalMatrix::zero(n, m);
    for i in 0..m {
        out[(i, i)] = Rational::one();
    }
    for i in 0..r {
        for j in 0..m {
            out[(m + i, j)] = -degree[(i, j)].clone();
        }
    }
    Ok(out)
}

/// Row-reduces an arbitrary full-row-rank degree matrix into `(A | I)` form by
/// permuting a set of pivot columns to the back. Returns the reduced matrix
/// together with the column permutation applied (new index -> old index).
pub fn to_gale_block_form(degree: &RationalMatrix) -> Result<(RationalMatrix, Vec<usize>)> {
    let (reduced, pivots) = degree.rref();
    let r = pivots.len();
    if r < degree.rows() {
        return Err(Error::DegenerateSystem(
            "degree matrix does not have full row rank".into(),
        ));
    }
    let non_pivots: Vec<usize> = (0..degree.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut perm = non_pivots.clone();
    perm.extend(pivots.iter().copied());
    let block = reduced.submatrix_cols(&perm);
    Ok((block, perm))
}

// ---------------------------------------------------------------------------
// Integer lattice routines (column-style Hermite reduction). Only what the
// class-group presentation needs: saturated integer kernels and canonical
// row-lattice bases.
// ---------------------------------------------------------------------------

/// Basis of the saturated lattice `{u in Z^n : M u = 0}` for an integer
/// matrix, returned as the columns of an integer matrix.
///
/// Column operations by unimodular transforms: `M U = (H | 0)`; the columns of
/// `U` below the zero block form the kernel basis and are automatically
/// saturated.
pub fn integer_kernel(m: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    let rows = m.len();
    let mut work: Vec<Vec<Int>> = m.to_vec();
    let mut u: Vec<Vec<Int>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect(); // u is cols x cols, columns tracked; stored row-major as rows of U

    // We operate on columns of `work`; mirror every operation on columns of U.
    let col_swap = |w: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, a: usize, b: usize| {
        for row in w.iter_mut() {
            row.swap(a, b);
        }
        for row in u.iter_mut() {
            row.swap(a, b);
        }
    };
    let col_axpy = |w: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, target: usize, source: usize, q: &Int| {
        // col_target -= q * col_source
        for row in w.iter_mut() {
            let delta = q * &row[source];
            row[target] -= delta;
        }
        for row in u.iter_mut() {
            let delta = q * &row[source];
            row[target] -= delta;
        }
    };
    let col_neg = |w: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, target: usize| {
        for row in w.iter_mut() {
            row[target] = -row[target].clone();
        }
        for row in u.iter_mut() {
            row[target] = -row[target].clone();
        }
    };

    let mut lead = 0usize;
    for r in 0..rows {
        if lead == cols {
            break;
        }
        // gcd-reduce row r over columns lead..cols
        loop {
            let mut nonzero: Vec<usize> = (lead..cols).filter(|&c| !work[r][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let c = nonzero[0];
                col_swap(&mut work, &mut u, lead, c);
                if work[r][lead].is_negative() {
                    col_neg(&mut work, &mut u, lead);
                }
                lead += 1;
                break;
            }
            // reduce the larger entries by the smallest
            nonzero.sort_by(|&a, &b| work[r][a].abs().cmp(&work[r][b].abs()));
            let smallest = nonzero[0];
            for &c in &nonzero[1..] {
                let q = num::Integer::div_floor(&work[r][c], &work[r][smallest]);
                if !q.is_zero() {
                    col_axpy(&mut work, &mut u, c, smallest, &q);
                }
            }
        }
    }
    // kernel columns are those with all-zero work entries
    let mut kernel = Vec::new();
    for c in 0..cols {
        if (0..rows).all(|r| work[r][c].is_zero()) {
            kernel.push((0..cols).map(|i| u[i][c].clone()).collect());
        }
    }
    kernel
}

/// Canonical (row-style Hermite) basis of the lattice spanned by the given
/// integer rows: echelon with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`. Two row sets span the same lattice iff their
/// canonical bases are equal.
pub fn row_hermite_basis(rows_in: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = rows_in.iter().filter(|r| !r.iter().all(Int::is_zero)).cloned().collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let width = rows[0].len();
    let mut basis: Vec<Vec<Int>> = Vec::new();
    let mut col = 0usize;
    while col < width && !rows.is_empty() {
        let mut have: Vec<Vec<Int>> = Vec::new();
        let mut rest: Vec<Vec<Int>> = Vec::new();
        for r in rows {
            if r[col].is_zero() {
                rest.push(r);
            } else {
                have.push(r);
            }
        }
        if have.is_empty() {
            rows = rest;
            col += 1;
            continue;
        }
        // Euclidean reduction among the rows with nonzero in `col`
        while have.len() > 1 {
            have.sort_by(|a, b| a[col].abs().cmp(&b[col].abs()));
            let (small, tail) = have.split_at_mut(1);
            for r in tail.iter_mut() {
                let q = num::Integer::div_floor(&r[col], &small[0][col]);
                for (x, y) in r.iter_mut().zip(&small[0]) {
                    *x -= &q * y;
                }
            }
            let mut keep = vec![have.remove(0)];
            for r in have {
                if r[col].is_zero() {
                    if !r.iter().all(Int::is_zero) {
                        rest.push(r);
                    }
                } else {
                    keep.push(r);
                }
            }
            have = keep;
        }
        let mut pivot_row = have.pop().expect("nonempty");
        if pivot_row[col].is_negative() {
            for x in pivot_row.iter_mut() {
                *x = -x.clone();
            }
        }
        basis.push(pivot_row);
        rows = rest;
        col += 1;
    }
    // reduce entries above pivots
    let pivot_cols: Vec<usize> = basis
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("pivot row"))
        .collect();
    for i in (0..basis.len()).rev() {
        let pc = pivot_cols[i];
        let pivot = basis[i][pc].clone();
        for j in 0..i {
            let q = num::Integer::div_floor(&basis[j][pc], &pivot);
            if !q.is_zero() {
                for k in 0..basis[j].len() {
                    let delta = &q * &basis[i][k];
                    basis[j][k] -= delta;
                }
            }
        }
    }
    basis
}
