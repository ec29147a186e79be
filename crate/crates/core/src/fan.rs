//! Rational polyhedral fans stored as primitive rays plus explicit cones at
//! every dimension (faces of simplicial cones are ray subsets, so the cone
//! list is subset-closed). Provides validation, stellar subdivision, subfan
//! extraction against a point-membership oracle, and flag-chain enumeration.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{cone_facets, cone_from_constraints, GeneratedCone};
use crate::error::{Error, Result};
use crate::linalg::{primitive, IntegerVector, RationalMatrix};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    ambient_dim: usize,
    rays: Vec<IntegerVector>,
    /// Sorted ray-index sets of every cone of every positive dimension; the
    /// zero cone is implicit. Sorted by (size, lex) and deduplicated.
    cones: Vec<Vec<usize>>,
    lineality_dim: usize,
}

/// Validation summary. `issues` is empty for a well-formed fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub dim: usize,
    pub pure: bool,
    pub simplicial: bool,
    pub fvector: Vec<usize>,
    pub lineality_dim: usize,
    pub face_to_face_checked: bool,
    pub issues: Vec<String>,
}

/// A chain of cones with dimensions 1, 2, ..., n, each a face of the next.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FlagChain {
    pub cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(
        ambient_dim: usize,
        rays: Vec<IntegerVector>,
        cones: Vec<Vec<usize>>,
        lineality_dim: usize,
    ) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != ambient_dim {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has length {} in ambient dimension {ambient_dim}",
                    r.len()
                )));
            }
            if !r.is_primitive() {
                return Err(Error::InvalidFan(format!("ray {i} {r:?} is not primitive")));
            }
            if rays[..i].contains(r) {
                return Err(Error::InvalidFan(format!("duplicate ray {r:?}")));
            }
        }
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .filter(|c| !c.is_empty())
            .collect();
        for c in &cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::IndexRange { index: bad, size: rays.len() });
            }
        }
        cones.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        cones.dedup();
        Ok(Self { ambient_dim, rays, cones, lineality_dim })
    }

    /// Builds a simplicial fan from maximal cones, generating all faces.
    pub fn from_maximal(
        ambient_dim: usize,
        rays: Vec<IntegerVector>,
        maximal: &[Vec<usize>],
    ) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for m in maximal {
            let mut c = m.clone();
            c.sort_unstable();
            c.dedup();
            subsets_into(&c, &mut all);
        }
        Self::new(ambient_dim, rays, all.into_iter().collect(), 0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[IntegerVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    pub fn ray_index(&self, ray: &IntegerVector) -> Option<usize> {
        self.rays.iter().position(|r| r == ray)
    }

    /// Rank of the ray matrix of a cone (its dimension for simplicial fans
    /// and in general).
    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        if cone.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<Rational>> = cone.iter().map(|&i| self.rays[i].to_rational()).collect();
        RationalMatrix::from_rows(rows).expect("rectangular").rank()
    }

    /// Cones not contained in any other stored cone.
    pub fn maximal_cones(&self) -> Vec<&Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i)))
            })
            .collect()
    }

    pub fn fvector(&self) -> Vec<usize> {
        let mut counts = vec![1usize];
        for c in &self.cones {
            let d = self.cone_dim(c);
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(|c| self.cone_dim(c)).max().unwrap_or(0)
    }

    /// Exact coefficients of `x` in the simplicial cone spanned by the given
    /// rays, or `None` when `x` is outside the cone or off its span.
    pub fn simplicial_cone_coeffs(&self, cone: &[usize], x: &[Rational]) -> Option<Vec<Rational>> {
        if cone.is_empty() {
            return if x.iter().all(Rational::is_zero) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let cols: Vec<Vec<Rational>> = cone.iter().map(|&i| self.rays[i].to_rational()).collect();
        let mat = RationalMatrix::from_rows(cols).ok()?.transpose();
        let coeffs = mat.solve(x)?;
        if mat.mul_vec(&coeffs).ok()? != x {
            return None;
        }
        if coeffs.iter().any(Rational::is_negative) {
            return None;
        }
        Some(coeffs)
    }

    /// The unique cone whose relative interior contains `x`, for simplicial
    /// fans. The zero cone answers for `x = 0`.
    pub fn minimal_containing_cone(&self, x: &[Rational]) -> Option<Vec<usize>> {
        if x.iter().all(Rational::is_zero) {
            return Some(Vec::new());
        }
        for c in &self.cones {
            if let Some(coeffs) = self.simplicial_cone_coeffs(c, x) {
                let support: Vec<usize> = c
                    .iter()
                    .zip(&coeffs)
                    .filter(|(_, l)| l.is_positive())
                    .map(|(&i, _)| i)
                    .collect();
                // the support face is a cone because the list is face-closed
                return Some(support);
            }
        }
        None
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.minimal_containing_cone(x).is_some()
    }

    /// `fvector`, purity, simpliciality and structural issues. Pairwise
    /// face-to-face intersection is checked exactly (double description)
    /// for fans with at most twelve rays.
    pub fn validate(&self) -> FanReport {
        let mut issues = Vec::new();
        let mut simplicial = true;
        let mut dims = Vec::with_capacity(self.cones.len());
        for c in &self.cones {
            let d = self.cone_dim(c);
            if d != c.len() {
                simplicial = false;
            }
            dims.push(d);
        }
        let dim = dims.iter().copied().max().unwrap_or(0);
        let mut fvector = vec![0usize; dim + 1];
        fvector[0] = 1; // the zero cone
        for &d in &dims {
            fvector[d] += 1;
        }

        let maximal = self.maximal_cones();
        let pure = maximal.iter().all(|c| self.cone_dim(c) == dim);

        // face closure: every subset of a stored cone is stored (simplicial)
        if simplicial {
            let set: BTreeSet<&Vec<usize>> = self.cones.iter().collect();
            'outer: for c in &self.cones {
                for skip in 0..c.len() {
                    if c.len() > 1 {
                        let mut f = c.clone();
                        f.remove(skip);
                        if !set.contains(&f) {
                            issues.push(format!("cone {c:?} is missing its face {f:?}"));
                            continue 'outer;
                        }
                    }
                }
            }
        }

        let face_to_face_checked = self.rays.len() <= 12;
        if face_to_face_checked {
            issues.extend(self.face_to_face_issues());
        }
        FanReport {
            dim,
            pure,
            simplicial,
            fvector,
            lineality_dim: self.lineality_dim,
            face_to_face_checked,
            issues,
        }
    }

    /// Brute-force face-to-face oracle: for every pair of maximal cones the
    /// double-description intersection must equal the cone on the shared
    /// rays.
    pub fn face_to_face_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let maximal = self.maximal_cones();
        for (i, a) in maximal.iter().enumerate() {
            for b in maximal.iter().skip(i + 1) {
                let inter = self.cone_intersection(a, b);
                if !inter.lineality.is_empty() {
                    issues.push(format!("cones {a:?} and {b:?} overlap in a subspace"));
                    continue;
                }
                let shared: Vec<usize> =
                    a.iter().copied().filter(|i| b.contains(i)).collect();
                let mut expected: Vec<Vec<Rational>> =
                    shared.iter().map(|&i| self.rays[i].to_rational()).collect();
                expected.sort();
                if inter.rays != expected {
                    issues.push(format!(
                        "cones {a:?} and {b:?} do not meet in their common face"
                    ));
                }
            }
        }
        issues
    }

    fn cone_hrep(&self, cone: &[usize]) -> crate::dd::ConeHRep {
        let rays: Vec<Vec<Rational>> = cone.iter().map(|&i| self.rays[i].to_rational()).collect();
        cone_facets(self.ambient_dim, &[], &rays)
    }

    fn cone_intersection(&self, a: &[usize], b: &[usize]) -> GeneratedCone {
        let ha = self.cone_hrep(a);
        let hb = self.cone_hrep(b);
        let mut equations = ha.equations;
        equations.extend(hb.equations);
        let mut inequalities = ha.inequalities;
        inequalities.extend(hb.inequalities);
        cone_from_constraints(self.ambient_dim, &equations, &inequalities)
    }

    /// Pure simplicial fans: complete iff every wall bounds exactly two
    /// maximal cones and the top-dimensional part is nonempty and spans.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient_dim;
        let maximal = self.maximal_cones();
        if maximal.is_empty() || maximal.iter().any(|c| c.len() != n || self.cone_dim(c) != n) {
            return false;
        }
        let mut wall_count: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
        for m in &maximal {
            for skip in 0..m.len() {
                let mut w = (*m).clone();
                w.remove(skip);
                *wall_count.entry(w).or_default() += 1;
            }
        }
        wall_count.values().all(|&c| c == 2)
    }

    /// Stellar subdivision at `v`. Subdividing at an existing ray is the
    /// identity; the zero vector and vectors outside the support are
    /// rejected.
    pub fn stellar_subdivision(&self, v: &IntegerVector) -> Result<Fan> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let v = primitive(&v.to_rational())?;
        if self.rays.contains(&v) {
            return Ok(self.clone());
        }
        let vr = v.to_rational();
        let Some(sigma) = self.minimal_containing_cone(&vr) else {
            return Err(Error::OutsideSupport);
        };
        debug_assert!(!sigma.is_empty());
        let mut rays = self.rays.clone();
        let new_idx = rays.len();
        rays.push(v);
        let mut new_maximal: Vec<Vec<usize>> = Vec::new();
        for m in self.maximal_cones() {
            if sigma.iter().all(|i| m.contains(i)) {
                for &s in &sigma {
                    let mut c: Vec<usize> = m.iter().copied().filter(|&i| i != s).collect();
                    c.push(new_idx);
                    new_maximal.push(c);
                }
            } else {
                new_maximal.push(m.clone());
            }
        }
        Fan::from_maximal(self.ambient_dim, rays, &new_maximal)
    }

    /// Keeps exactly the cones whose rays all pass the oracle and whose
    /// relative-interior sample (the exact sum of primitive rays) passes as
    /// well; the zero cone is always kept. A closed oracle support contains
    /// the rays of any cone whose interior it contains, so a passing
    /// barycenter over a failing ray means the fan does not refine the
    /// support; such cones are reported as mixed. (Rays in, interior out is
    /// legitimate: the cone merely touches the support along its boundary.)
    pub fn subfan_meeting<F>(&self, oracle: F) -> Result<Fan>
    where
        F: Fn(&[Rational]) -> bool,
    {
        let ray_pass: Vec<bool> = self
            .rays
            .iter()
            .map(|r| oracle(&r.to_rational()))
            .collect();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for c in &self.cones {
            let all_rays = c.iter().all(|&i| ray_pass[i]);
            let barycenter: Vec<Rational> = {
                let mut acc = vec![Rational::zero(); self.ambient_dim];
                for &i in c {
                    for (a, x) in acc.iter_mut().zip(&self.rays[i].0) {
                        *a += Rational::from_integer(x.clone());
                    }
                }
                acc
            };
            let bary_pass = oracle(&barycenter);
            if bary_pass && !all_rays {
                return Err(Error::MixedCone(c.clone()));
            }
            if all_rays && bary_pass {
                kept.push(c.clone());
            }
        }
        // the result must be face-closed; a gap means the oracle support is
        // not refined by this fan
        let set: BTreeSet<&Vec<usize>> = kept.iter().collect();
        for c in &kept {
            if c.len() > 1 {
                for skip in 0..c.len() {
                    let mut f = c.clone();
                    f.remove(skip);
                    if !set.contains(&f) {
                        return Err(Error::MixedCone(c.clone()));
                    }
                }
            }
        }
        Fan::new(self.ambient_dim, self.rays.clone(), kept, self.lineality_dim)
    }

    /// All chains of cones of dimensions 1, 2, ..., `depth` inside the given
    /// ambient cone (a ray-index set), in canonical order.
    pub fn flag_chains(&self, ambient_max_cone: &[usize], depth: usize) -> Vec<FlagChain> {
        let inside: Vec<&Vec<usize>> = self
            .cones
            .iter()
            .filter(|c| c.iter().all(|i| ambient_max_cone.contains(i)))
            .collect();
        let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); depth + 1];
        for c in inside {
            let d = self.cone_dim(c);
            if d >= 1 && d <= depth {
                by_dim[d].push(c);
            }
        }
        let mut chains: Vec<FlagChain> = Vec::new();
        let mut current: Vec<Vec<usize>> = Vec::new();
        fn extend(
            by_dim: &[Vec<&Vec<usize>>],
            depth: usize,
            current: &mut Vec<Vec<usize>>,
            chains: &mut Vec<FlagChain>,
        ) {
            let next_dim = current.len() + 1;
            if next_dim > depth {
                chains.push(FlagChain { cones: current.clone() });
                return;
            }
            for cand in &by_dim[next_dim] {
                if let Some(last) = current.last() {
                    if !last.iter().all(|i| cand.contains(i)) {
                        continue;
                    }
                }
                current.push((*cand).clone());
                extend(by_dim, depth, current, chains);
                current.pop();
            }
        }
        extend(&by_dim, depth, &mut current, &mut chains);
        chains.sort();
        chains
    }

    /// Translates cone indices through a ray matching with `other`, when the
    /// ray sets coincide as primitive vectors.
    pub fn match_rays(&self, other: &Fan) -> Option<Vec<usize>> {
        if self.rays.len() != other.rays.len() {
            return None;
        }
        self.rays.iter().map(|r| other.ray_index(r)).collect()
    }
}

fn subsets_into(cone: &[usize], all: &mut BTreeSet<Vec<usize>>) {
    let n = cone.len();
    for mask in 1u64..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| cone[k]).collect();
        all.insert(subset);
    }
}

/// The complete fan of the projective plane; handy in tests and fixtures.
pub fn p2_fan() -> Fan {
    Fan::from_maximal(
        2,
        vec![
            IntegerVector::from_i64(&[1, 0]),
            IntegerVector::from_i64(&[0, 1]),
            IntegerVector::from_i64(&[-1, -1]),
        ],
        &[vec![0, 1], vec![1, 2], vec![0, 2]],
    )
    .expect("valid fan")
}

/// The complete fan of projective space of the given dimension: the standard
/// basis rays, their negative sum, and all proper subsets of size `dim`.
pub fn projective_space_fan(dim: usize) -> Fan {
    let mut rays = Vec::with_capacity(dim + 1);
    for i in 0..dim {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        rays.push(IntegerVector::from_i64(&v));
    }
    rays.push(IntegerVector::from_i64(&vec![-1; dim]));
    let maximal: Vec<Vec<usize>> = (0..=dim)
        .map(|skip| (0..=dim).filter(|&i| i != skip).collect())
        .collect();
    Fan::from_maximal(dim, rays, &maximal).expect("valid fan")
}
