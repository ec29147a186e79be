//! Divisor-class bookkeeping on complete simplicial toric fans: class-group
//! presentation, nef cone from wall relations, divisor polytopes, push-pull
//! bases and exact Minkowski decomposition of a class over a basis.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{cone_facets, cone_from_constraints};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{integer_kernel, primitive, row_hermite_basis, IntegerVector, RationalMatrix};
use crate::polytope::Polytope;
use crate::rational::{int_dot, Int, Rational};

/// Integer vector in a fixed basis of the divisor class lattice.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass(pub IntegerVector);

impl std::fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DivisorClass{:?}", self.0)
    }
}

impl DivisorClass {
    pub fn from_i64(v: &[i64]) -> Self {
        Self(IntegerVector::from_i64(v))
    }
}

/// Linear map between class lattices, columns indexed by the source basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMap(pub RationalMatrix);

impl ClassMap {
    pub fn identity(rank: usize) -> Self {
        Self(RationalMatrix::identity(rank))
    }

    pub fn apply(&self, class: &DivisorClass) -> Result<DivisorClass> {
        let image = self.0.mul_vec(&class.0.to_rational())?;
        let mut coords = Vec::with_capacity(image.len());
        for x in &image {
            if !x.denom().is_one() {
                return Err(Error::DimMismatch(format!(
                    "class map image is not integral: {x}"
                )));
            }
            coords.push(x.numer().clone());
        }
        Ok(DivisorClass(IntegerVector(coords)))
    }
}

/// A presentation of the divisor class lattice of a complete fan: the ray
/// matrix (rays as rows) and a surjective integer projection from the ray
/// divisor lattice whose kernel is spanned by the ray pairings. The class of
/// the `i`-th ray divisor is the `i`-th column of `projection`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPresentation {
    pub ray_matrix: RationalMatrix,
    pub projection: RationalMatrix,
}

impl ClassPresentation {
    pub fn class_rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn ray_count(&self) -> usize {
        self.projection.cols()
    }

    /// Class of a ray-coefficient divisor (integer coefficients).
    pub fn class_of(&self, coeffs: &[Rational]) -> Result<DivisorClass> {
        let image = self.projection.mul_vec(coeffs)?;
        let mut coords = Vec::with_capacity(image.len());
        for x in &image {
            if !x.denom().is_one() {
                return Err(Error::DimMismatch(format!("non-integral class: {x}")));
            }
            coords.push(x.numer().clone());
        }
        Ok(DivisorClass(IntegerVector(coords)))
    }

    /// A user-supplied projection, validated: it must annihilate the rays and
    /// present the same saturated relation lattice as the canonical one.
    pub fn with_projection(fan: &Fan, projection: RationalMatrix) -> Result<Self> {
        let canonical = class_group_presentation(fan)?;
        if projection.cols() != fan.rays().len() || projection.rows() != canonical.class_rank() {
            return Err(Error::Shape(format!(
                "projection must be {}x{}",
                canonical.class_rank(),
                fan.rays().len()
            )));
        }
        if !projection.mul(&canonical.ray_matrix)?.is_zero() {
            return Err(Error::InvalidFan(
                "projection does not annihilate the ray matrix".into(),
            ));
        }
        let to_int_rows = |m: &RationalMatrix| -> Result<Vec<Vec<Int>>> {
            m.row_vecs()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            if x.denom().is_one() {
                                Ok(x.numer().clone())
                            } else {
                                Err(Error::Shape("projection must be integral".into()))
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let given = row_hermite_basis(&to_int_rows(&projection)?);
        let canon = row_hermite_basis(&to_int_rows(&canonical.projection)?);
        if given != canon {
            return Err(Error::InvalidFan(
                "projection rows do not span the relation lattice".into(),
            ));
        }
        Ok(Self {
            ray_matrix: canonical.ray_matrix,
            projection,
        })
    }
}

/// Canonical class-group presentation of a complete fan whose rays span the
/// ambient space: the saturated left-kernel of the ray matrix in Hermite
/// form. Composing with Gale-dual data recovers the originating degree
/// matrix up to the recorded unimodular change of basis.
pub fn class_group_presentation(fan: &Fan) -> Result<ClassPresentation> {
    if !fan.is_complete() {
        return Err(Error::InvalidFan(
            "class group presentation needs a complete fan".into(),
        ));
    }
    let rays = fan.rays();
    let n = fan.ambient_dim();
    let s = rays.len();
    let ray_matrix = RationalMatrix::from_rows(rays.iter().map(|r| r.to_rational()).collect())?;
    if ray_matrix.rank() != n {
        return Err(Error::InvalidFan("rays do not span the ambient space".into()));
    }
    // rows of V^T are the coordinates; integer kernel of V^T = {u : uV = 0}
    let vt: Vec<Vec<Int>> = (0..n)
        .map(|k| rays.iter().map(|r| r.0[k].clone()).collect())
        .collect();
    let kernel = integer_kernel(&vt, s);
    let basis = row_hermite_basis(&kernel);
    let projection = RationalMatrix::from_rows(
        basis
            .iter()
            .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect(),
    )?;
    Ok(ClassPresentation { ray_matrix, projection })
}

/// Wall-relation curve classes of a complete simplicial fan, expressed in
/// the presentation's class coordinates, deduplicated and sorted.
pub fn wall_curve_classes(
    fan: &Fan,
    presentation: &ClassPresentation,
) -> Result<Vec<IntegerVector>> {
    let n = fan.ambient_dim();
    let maximal = fan.maximal_cones();
    if maximal.iter().any(|c| c.len() != n || fan.cone_dim(c) != n) {
        return Err(Error::InvalidFan(
            "wall relations need a complete simplicial fan".into(),
        ));
    }
    // wall -> the two incident maximal cones
    let mut walls: std::collections::BTreeMap<Vec<usize>, Vec<&Vec<usize>>> = Default::default();
    for m in &maximal {
        for skip in 0..m.len() {
            let mut w = (*m).clone();
            w.remove(skip);
            walls.entry(w).or_default().push(m);
        }
    }
    let mut classes: Vec<IntegerVector> = Vec::new();
    for (wall, incident) in &walls {
        if incident.len() != 2 {
            return Err(Error::InvalidFan(format!(
                "wall {wall:?} bounds {} maximal cones",
                incident.len()
            )));
        }
        let i = *incident[0].iter().find(|i| !wall.contains(i)).expect("facet");
        let j = *incident[1].iter().find(|i| !wall.contains(i)).expect("facet");
        let mut support = wall.clone();
        support.push(i);
        support.push(j);
        support.sort_unstable();
        // 1-dimensional kernel of the ray columns over the support
        let cols = RationalMatrix::from_rows(
            support.iter().map(|&k| fan.rays()[k].to_rational()).collect(),
        )?
        .transpose();
        let kernel = cols.kernel_basis();
        if kernel.cols() != 1 {
            return Err(Error::InvalidFan(format!(
                "wall {wall:?} has a {}-dimensional relation space",
                kernel.cols()
            )));
        }
        let mut rel = kernel.col(0);
        let pos_i = support.iter().position(|&k| k == i).expect("present");
        let pos_j = support.iter().position(|&k| k == j).expect("present");
        if rel[pos_i].is_negative() {
            rel = rel.iter().map(|x| -x).collect();
        }
        if !rel[pos_i].is_positive() || !rel[pos_j].is_positive() {
            return Err(Error::InvalidFan(format!(
                "wall {wall:?} relation is not positive on both sides"
            )));
        }
        let mut full = vec![Rational::zero(); fan.rays().len()];
        for (pos, &k) in support.iter().enumerate() {
            full[k] = rel[pos].clone();
        }
        let full = primitive(&full)?;
        // express the curve as a functional on classes: projection^T w = full
        let w = presentation
            .projection
            .transpose()
            .solve(&full.to_rational())
            .ok_or_else(|| {
                Error::InvalidFan("wall relation is not in the relation lattice".into())
            })?;
        let mut coords = Vec::with_capacity(w.len());
        for x in &w {
            if !x.denom().is_one() {
                return Err(Error::InvalidFan(
                    "curve class is not integral in this presentation".into(),
                ));
            }
            coords.push(x.numer().clone());
        }
        classes.push(IntegerVector(coords));
    }
    classes.sort();
    classes.dedup();
    Ok(classes)
}

/// Extremal generators of the nef cone: the dual of the cone spanned by the
/// wall curve classes, primitive and in canonical (descending) order.
pub fn nef_cone(fan: &Fan, presentation: &ClassPresentation) -> Result<Vec<DivisorClass>> {
    let curves = wall_curve_classes(fan, presentation)?;
    let constraints: Vec<Vec<Rational>> = curves.iter().map(|c| c.to_rational()).collect();
    let dual = cone_from_constraints(presentation.class_rank(), &[], &constraints);
    if !dual.lineality.is_empty() {
        return Err(Error::InvalidFan("nef cone contains a line".into()));
    }
    let mut out: Vec<DivisorClass> = dual
        .rays
        .iter()
        .map(|r| Ok(DivisorClass(primitive(r)?)))
        .collect::<Result<_>>()?;
    sort_classes(&mut out);
    Ok(out)
}

/// Canonical order for class lists: lexicographic, descending.
pub fn sort_classes(classes: &mut [DivisorClass]) {
    classes.sort_by(|a, b| b.cmp(a));
}

/// `{m : <m, v_i> >= -a_i}` for a complete fan; both representations.
pub fn divisor_polytope(fan: &Fan, coeffs: &[Rational]) -> Result<Polytope> {
    if coeffs.len() != fan.rays().len() {
        return Err(Error::DimMismatch(format!(
            "{} coefficients for {} rays",
            coeffs.len(),
            fan.rays().len()
        )));
    }
    if !fan.is_complete() {
        return Err(Error::InvalidFan("divisor polytopes need a complete fan".into()));
    }
    let data: Vec<(Vec<Rational>, Rational)> = fan
        .rays()
        .iter()
        .zip(coeffs)
        .map(|(r, a)| (r.to_rational(), -a.clone()))
        .collect();
    Polytope::from_halfspace_data(fan.ambient_dim(), &data)
}

/// Applies push o restrict to each generator, deduplicates up to positive
/// scaling (primitive representatives) and sorts canonically.
pub fn push_pull_basis(
    nef_gens: &[DivisorClass],
    restrict: &ClassMap,
    push: &ClassMap,
) -> Result<Vec<DivisorClass>> {
    let mut out: Vec<DivisorClass> = Vec::new();
    for g in nef_gens {
        let image = push.apply(&restrict.apply(g)?)?;
        if image.0.is_zero() {
            return Err(Error::DimMismatch("a generator maps to zero".into()));
        }
        let prim = DivisorClass(primitive(&image.0.to_rational())?);
        if !out.contains(&prim) {
            out.push(prim);
        }
    }
    sort_classes(&mut out);
    Ok(out)
}

/// Exact nonnegative decomposition of `target` over `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// One coefficient per basis element, in the order given.
    pub coefficients: Vec<Rational>,
    /// False when other nonnegative solutions exist (the reported one is the
    /// lexicographically greatest over the basis order).
    pub unique: bool,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Decomposition", 2)?;
        let coeffs: Vec<String> = self
            .coefficients
            .iter()
            .map(crate::rational::format_rational)
            .collect();
        st.serialize_field("coefficients", &coeffs)?;
        st.serialize_field("unique", &self.unique)?;
        st.end()
    }
}

/// Solves `sum a_i basis_i = target`, `a_i >= 0`, exactly. When several
/// solutions exist the lexicographically-greedy one over the canonical
/// (descending) basis order is returned — independent of the order the
/// caller lists the basis in — and flagged non-unique. Infeasibility
/// carries an exact separating functional.
pub fn minkowski_decompose(
    target: &DivisorClass,
    basis: &[DivisorClass],
) -> Result<Decomposition> {
    if basis.is_empty() {
        return Err(Error::Shape("empty basis".into()));
    }
    let rank = target.0.len();
    if basis.iter().any(|b| b.0.len() != rank) {
        return Err(Error::DimMismatch("basis and target ranks differ".into()));
    }
    let k = basis.len();
    let b_cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.0.to_rational()).collect();
    let b_matrix = RationalMatrix::from_rows(b_cols.clone())?.transpose(); // rank x k
    let t = target.0.to_rational();

    // nonzero recession would make the greedy coefficients unbounded
    let mut eqs: Vec<Vec<Rational>> = Vec::with_capacity(rank);
    for r in 0..rank {
        eqs.push((0..k).map(|c| b_matrix[(r, c)].clone()).collect());
    }
    let nonneg: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut v = vec![Rational::zero(); k];
            v[i] = Rational::one();
            v
        })
        .collect();
    let recession = cone_from_constraints(k, &eqs, &nonneg);
    if !recession.is_trivial() {
        return Err(Error::DegenerateSystem(
            "basis admits a nonzero nonnegative relation; decompositions are unbounded".into(),
        ));
    }

    // vertices of {a >= 0 : B a = t} are basic solutions over independent
    // column subsets
    let b_rank = b_matrix.rank();
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    fn visit(
        b: &RationalMatrix,
        t: &[Rational],
        k: usize,
        max_size: usize,
        start: usize,
        subset: &mut Vec<usize>,
        vertices: &mut Vec<Vec<Rational>>,
    ) {
        // try to finish with the current subset
        let cols = b.submatrix_cols(subset);
        if cols.rank() == subset.len() {
            if let Some(sol) = cols.solve(t) {
                if cols.mul_vec(&sol).expect("shape") == t && sol.iter().all(|x| !x.is_negative())
                {
                    let mut full = vec![Rational::zero(); k];
                    for (pos, &c) in subset.iter().enumerate() {
                        full[c] = sol[pos].clone();
                    }
                    if !vertices.contains(&full) {
                        vertices.push(full);
                    }
                }
            }
        } else {
            return; // dependent columns never extend to a basic solution
        }
        if subset.len() == max_size {
            return;
        }
        for c in start..k {
            subset.push(c);
            visit(b, t, k, max_size, c + 1, subset, vertices);
            subset.pop();
        }
    }
    visit(&b_matrix, &t, k, b_rank, 0, &mut subset, &mut vertices);

    if vertices.is_empty() {
        // separating functional from a violated facet of cone(basis)
        let hrep = cone_facets(rank, &[], &b_cols);
        let mut certificate: Option<Vec<Rational>> = None;
        for e in &hrep.equations {
            let v = crate::rational::dot(e, &t);
            if !v.is_zero() {
                let flip = if v.is_positive() {
                    e.iter().map(|x| -x).collect()
                } else {
                    e.clone()
                };
                certificate = Some(flip);
                break;
            }
        }
        if certificate.is_none() {
            certificate = hrep
                .inequalities
                .iter()
                .find(|a| crate::rational::dot(a, &t).is_negative())
                .cloned();
        }
        let cert = certificate.ok_or_else(|| {
            Error::DegenerateSystem("no separating functional found for infeasible target".into())
        })?;
        debug_assert!(b_cols
            .iter()
            .all(|bc| !crate::rational::dot(&cert, bc).is_negative()));
        return Err(Error::Infeasible {
            reason: "target is outside the nonnegative span of the basis".into(),
            certificate: cert.iter().map(crate::rational::format_rational).collect(),
        });
    }

    // greedy order: canonical descending order of the basis classes
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| basis[b].cmp(&basis[a]));
    let key = |v: &Vec<Rational>| -> Vec<Rational> {
        order.iter().map(|&i| v[i].clone()).collect()
    };
    let best = vertices
        .iter()
        .max_by(|a, b| key(a).cmp(&key(b)))
        .expect("nonempty")
        .clone();
    // exact recombination
    debug_assert_eq!(b_matrix.mul_vec(&best).expect("shape"), t);
    Ok(Decomposition {
        coefficients: best,
        unique: vertices.len() == 1,
    })
}

/// Pairing of a curve class with a divisor class (both integer vectors in
/// dual coordinates).
pub fn intersection_pairing(curve: &IntegerVector, class: &DivisorClass) -> Rational {
    int_dot(&curve.0, &class.0.to_rational())
}
