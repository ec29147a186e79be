//! Linear matroids of coordinate functionals restricted to a linear
//! subspace: rank oracle, closure, flats, circuits and connectivity.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::Rational;

/// A closed set of the matroid together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flat {
    pub elements: Vec<usize>,
    pub rank: usize,
}

/// Linear matroid on ground set `0 .. ground_size`, realized by the columns
/// of an exact rational matrix. Column `i` is the `i`-th coordinate
/// functional expressed in a basis of the underlying subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    columns: RationalMatrix,
}

impl Matroid {
    /// Raw constructor; loops (zero columns) and parallel columns are
    /// permitted at this level.
    pub fn from_columns(columns: RationalMatrix) -> Self {
        Self { columns }
    }

    pub fn ground_size(&self) -> usize {
        self.columns.cols()
    }

    pub fn columns(&self) -> &RationalMatrix {
        &self.columns
    }

    pub fn full_rank(&self) -> usize {
        self.columns.rank()
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.ground_size())
            .filter(|&i| self.columns.col(i).iter().all(Rational::is_zero))
            .collect()
    }

    fn check_subset(&self, set: &[usize]) -> Result<()> {
        for &i in set {
            if i >= self.ground_size() {
                return Err(Error::IndexRange {
                    index: i,
                    size: self.ground_size(),
                });
            }
        }
        Ok(())
    }

    /// Rank of the column submatrix indexed by `set`.
    pub fn rank(&self, set: &[usize]) -> Result<usize> {
        self.check_subset(set)?;
        if set.is_empty() {
            return Ok(0);
        }
        Ok(self.columns.submatrix_cols(set).rank())
    }

    /// The maximal superset of `set` with the same rank.
    pub fn closure(&self, set: &[usize]) -> Result<Flat> {
        self.check_subset(set)?;
        let r = self.rank(set)?;
        let mut elements = Vec::new();
        for e in 0..self.ground_size() {
            let mut with_e: Vec<usize> = set.to_vec();
            if !with_e.contains(&e) {
                with_e.push(e);
            }
            if self.rank(&with_e)? == r {
                elements.push(e);
            }
        }
        Ok(Flat { elements, rank: r })
    }

    /// All flats `F` with `0 < rank(F) < rank(M)`, canonically ordered by
    /// rank then lexicographically. Enumerates by breadth-first closure from
    /// the rank-one flats upward.
    pub fn proper_flats(&self) -> Result<Vec<Flat>> {
        let full = self.full_rank();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out: Vec<Flat> = Vec::new();
        let mut frontier: Vec<Flat> = Vec::new();
        for e in 0..self.ground_size() {
            if self.columns.col(e).iter().all(Rational::is_zero) {
                continue; // loops close into every flat, they seed nothing
            }
            let f = self.closure(&[e])?;
            if f.rank < full && seen.insert(f.elements.clone()) {
                frontier.push(f.clone());
                out.push(f);
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for e in 0..self.ground_size() {
                    if f.elements.contains(&e) {
                        continue;
                    }
                    let mut set = f.elements.clone();
                    set.push(e);
                    let g = self.closure(&set)?;
                    if g.rank < full && seen.insert(g.elements.clone()) {
                        next.push(g.clone());
                        out.push(g);
                    }
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| (a.rank, &a.elements).cmp(&(b.rank, &b.elements)));
        Ok(out)
    }

    /// All minimal dependent sets, canonically ordered (by size, then
    /// lexicographically). A circuit has at most rank + 1 elements.
    pub fn circuits(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.ground_size();
        let max_size = self.full_rank() + 1;
        let mut circuits: Vec<Vec<usize>> = Vec::new();
        let mut subset: Vec<usize> = Vec::new();
        // enumerate subsets in size-lexicographic order
        fn visit(
            m: &Matroid,
            n: usize,
            size: usize,
            start: usize,
            subset: &mut Vec<usize>,
            circuits: &mut Vec<Vec<usize>>,
        ) -> Result<()> {
            if subset.len() == size {
                if circuits.iter().any(|c| c.iter().all(|x| subset.contains(x))) {
                    return Ok(());
                }
                if m.rank(subset)? == size - 1 {
                    circuits.push(subset.clone());
                }
                return Ok(());
            }
            for e in start..n {
                subset.push(e);
                visit(m, n, size, e + 1, subset, circuits)?;
                subset.pop();
            }
            Ok(())
        }
        for size in 1..=max_size.min(n) {
            visit(self, n, size, 0, &mut subset, &mut circuits)?;
        }
        circuits.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        Ok(circuits)
    }

    /// Connectivity of the restriction to `set`: no partition `A | B` with
    /// `rank(A) + rank(B) = rank(set)`. Computed through the circuit
    /// equivalence (elements connected iff some circuit contains both);
    /// `is_connected_by_separators` is the direct oracle.
    pub fn is_connected(&self, set: &[usize]) -> Result<bool> {
        self.check_subset(set)?;
        if set.len() <= 1 {
            return Ok(true);
        }
        let circuits = self.circuits()?;
        let sorted: BTreeSet<usize> = set.iter().copied().collect();
        let index: BTreeMap<usize, usize> =
            sorted.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mut uf: Vec<usize> = (0..sorted.len()).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let root = find(uf, uf[x]);
                uf[x] = root;
            }
            uf[x]
        }
        for c in &circuits {
            if !c.iter().all(|e| index.contains_key(e)) {
                continue;
            }
            let first = index[&c[0]];
            for e in &c[1..] {
                let (a, b) = (find(&mut uf, first), find(&mut uf, index[e]));
                if a != b {
                    uf[a] = b;
                }
            }
        }
        let root = find(&mut uf, 0);
        Ok((1..sorted.len()).all(|k| find(&mut uf, k) == root))
    }

    /// Separator-enumeration connectivity oracle (exponential in `|set|`).
    pub fn is_connected_by_separators(&self, set: &[usize]) -> Result<bool> {
        self.check_subset(set)?;
        let sorted: Vec<usize> = {
            let s: BTreeSet<usize> = set.iter().copied().collect();
            s.into_iter().collect()
        };
        if sorted.len() <= 1 {
            return Ok(true);
        }
        let total = self.rank(&sorted)?;
        let k = sorted.len();
        // first element stays in A; enumerate the rest
        for mask in 0..(1u64 << (k - 1)) {
            let mut a = vec![sorted[0]];
            let mut b = Vec::new();
            for (pos, &e) in sorted[1..].iter().enumerate() {
                if mask >> pos & 1 == 1 {
                    a.push(e);
                } else {
                    b.push(e);
                }
            }
            if b.is_empty() {
                continue;
            }
            if self.rank(&a)? + self.rank(&b)? == total {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the matroid of the coordinate functionals of `P^{ambient-1}`
/// restricted to the solution space of the given homogeneous linear forms.
/// Rows of `linear_forms` are the forms; there must be `ambient` columns.
///
/// Loops (functionals vanishing on the whole solution space) and
/// zero-dimensional solution spaces are rejected.
pub fn matroid_from_equations(linear_forms: &RationalMatrix, ambient: usize) -> Result<Matroid> {
    if linear_forms.cols() != ambient {
        return Err(Error::Shape(format!(
            "expected {} columns, got {}",
            ambient,
            linear_forms.cols()
        )));
    }
    let kernel = linear_forms.kernel_basis(); // ambient x d
    if kernel.cols() == 0 {
        return Err(Error::DegenerateSystem(
            "the forms cut out only the origin".into(),
        ));
    }
    // functional x_i in the kernel basis = i-th row of the kernel matrix
    let matroid = Matroid::from_columns(kernel.transpose());
    if let Some(&e) = matroid.loops().first() {
        return Err(Error::Loop(e));
    }
    Ok(matroid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;

    pub(crate) fn u23() -> Matroid {
        // x0 + x1 + x2 = 0 in P^2
        matroid_from_equations(&RationalMatrix::from_int_rows(&[vec![1, 1, 1]]), 3).unwrap()
    }

    /// Plane in P^5 with coordinates ordered x0..x5:
    /// x2+x4+x0 = 0, x1+x4+x5 = 0, x2+x3+x4+x5 = 0.
    pub(crate) fn example1() -> Matroid {
        matroid_from_equations(
            &RationalMatrix::from_int_rows(&[
                vec![1, 0, 1, 0, 1, 0],
                vec![0, 1, 0, 0, 1, 1],
                vec![0, 0, 1, 1, 1, 1],
            ]),
            6,
        )
        .unwrap()
    }

    #[test]
    fn u23_is_the_three_point_line() {
        let m = u23();
        assert_eq!(m.full_rank(), 2);
        assert_eq!(m.rank(&[0]).unwrap(), 1);
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(m.rank(&pair).unwrap(), 2);
        }
        assert_eq!(m.circuits().unwrap(), vec![vec![0, 1, 2]]);
        let flats = m.proper_flats().unwrap();
        assert_eq!(
            flats.iter().map(|f| f.elements.clone()).collect::<Vec<_>>(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(m.closure(&[0]).unwrap().elements, vec![0]);
    }

    #[test]
    fn example1_flat_structure() {
        let m = example1();
        assert_eq!(m.full_rank(), 3);
        assert_eq!(m.rank(&[1, 2, 3]).unwrap(), 2);
        assert_eq!(m.closure(&[1, 2]).unwrap().elements, vec![1, 2, 3]);
        assert_eq!(
            m.closure(&(0..6).collect::<Vec<_>>()).unwrap().elements,
            (0..6).collect::<Vec<_>>()
        );
        let flats = m.proper_flats().unwrap();
        let sets: Vec<Vec<usize>> = flats.iter().map(|f| f.elements.clone()).collect();
        assert_eq!(flats.len(), 13);
        for single in 0..6 {
            assert!(sets.contains(&vec![single]));
        }
        for triple in [vec![0, 2, 4], vec![0, 3, 5], vec![1, 2, 3], vec![1, 4, 5]] {
            assert!(sets.contains(&triple));
        }
        for pair in [vec![0, 1], vec![2, 5], vec![3, 4]] {
            assert!(sets.contains(&pair));
        }
    }

    #[test]
    fn example1_connectivity() {
        let m = example1();
        assert!(!m.is_connected(&[2, 5]).unwrap());
        assert!(m.is_connected(&[1, 2, 3]).unwrap());
        assert!(m.is_connected(&[4]).unwrap());
        let flats = m.proper_flats().unwrap();
        let connected: Vec<&Flat> = flats
            .iter()
            .filter(|f| m.is_connected(&f.elements).unwrap())
            .collect();
        assert_eq!(connected.len(), 10);
        // both connectivity routes agree on every flat and on the ground set
        for f in &flats {
            assert_eq!(
                m.is_connected(&f.elements).unwrap(),
                m.is_connected_by_separators(&f.elements).unwrap()
            );
        }
        assert!(m.is_connected(&(0..6).collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn example1_circuits_by_brute_force() {
        let m = example1();
        let circuits = m.circuits().unwrap();
        // {1,2,3,4} contains the dependent triple {1,2,3}, so it is not a
        // circuit even though its rank is 3
        assert_eq!(m.rank(&[1, 2, 3, 4]).unwrap(), 3);
        assert!(!circuits.contains(&vec![1, 2, 3, 4]));
        // every circuit: rank = size - 1 and every proper subset independent
        for c in &circuits {
            assert_eq!(m.rank(c).unwrap(), c.len() - 1);
            for skip in 0..c.len() {
                let mut sub = c.clone();
                sub.remove(skip);
                assert_eq!(m.rank(&sub).unwrap(), sub.len());
            }
        }
        assert_eq!(circuits.len(), 7);
    }

    #[test]
    fn boolean_matroid_has_no_circuits() {
        let m = Matroid::from_columns(RationalMatrix::identity(3));
        assert!(m.circuits().unwrap().is_empty());
        assert!(!m.is_connected(&[0, 1]).unwrap());
    }

    #[test]
    fn parallel_elements_form_a_flat() {
        // rank-2 matroid with parallel pair {0,1} and one independent element
        let m = Matroid::from_columns(RationalMatrix::from_int_rows(&[
            vec![1, 2, 0],
            vec![0, 0, 1],
        ]));
        let sets: Vec<Vec<usize>> = m
            .proper_flats()
            .unwrap()
            .iter()
            .map(|f| f.elements.clone())
            .collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn degenerate_systems_rejected() {
        // full-rank system: solution space is 0
        let err = matroid_from_equations(&RationalMatrix::identity(2), 2);
        assert!(matches!(err, Err(Error::DegenerateSystem(_))));
        // x0 = 0 makes element 0 a loop
        let err = matroid_from_equations(
            &RationalMatrix::from_int_rows(&[vec![1, 0, 0]]),
            3,
        );
        assert!(matches!(err, Err(Error::Loop(0))));
    }

    #[test]
    fn flat_intersection_is_a_flat() {
        let m = example1();
        let flats = m.proper_flats().unwrap();
        for a in &flats {
            for b in &flats {
                let inter: Vec<usize> = a
                    .elements
                    .iter()
                    .copied()
                    .filter(|e| b.elements.contains(e))
                    .collect();
                let cl = m.closure(&inter).unwrap();
                assert_eq!(cl.elements, inter);
            }
        }
    }
}
