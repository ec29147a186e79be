//! Exact double description for rational polyhedral cones.
//!
//! One kernel serves every conversion in the crate: halfspaces to extreme
//! rays, generators to facets (via the polar cone), hull and halfspace
//! intersection for polytopes (via homogenization), and dual cones for the
//! nef-cone computation. Lineality is tracked explicitly, so non-pointed and
//! lower-dimensional cones come out exact.

use num::{One, Signed, Zero};

use crate::linalg::{primitive, RationalMatrix};
use crate::rational::{dot, is_zero_vec, Rational};

/// Generator description of a cone: `lin(lineality) + cone(rays)`.
///
/// After [`cone_from_constraints`] the lineality rows are in reduced echelon
/// form, rays are primitive, reduced modulo the lineality space and sorted,
/// and the rays are exactly the extreme rays of the cone modulo lineality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedCone {
    pub lineality: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

impl GeneratedCone {
    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeHRep {
    /// Functionals vanishing on the cone (span constraints).
    pub equations: Vec<Vec<Rational>>,
    /// Irredundant facet inequalities `<a, x> >= 0`.
    pub inequalities: Vec<Vec<Rational>>,
}

#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

struct RayRec {
    vec: Vec<Rational>,
    zeros: BitSet,
}

/// Extreme rays and lineality of
/// `{x : <e, x> = 0 for e in equations, <a, x> >= 0 for a in inequalities}`.
pub fn cone_from_constraints(
    dim: usize,
    equations: &[Vec<Rational>],
    inequalities: &[Vec<Rational>],
) -> GeneratedCone {
    // processed constraint list used for the zero-set adjacency test
    let total = equations.len() + inequalities.len();
    let mut processed: Vec<Vec<Rational>> = Vec::with_capacity(total);

    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut v = vec![Rational::zero(); dim];
            v[i] = Rational::one();
            v
        })
        .collect();
    let mut rays: Vec<RayRec> = Vec::new();

    let recompute_zeros = |vec: &Vec<Rational>, processed: &[Vec<Rational>], total: usize| {
        let mut z = BitSet::new(total);
        for (i, c) in processed.iter().enumerate() {
            if dot(c, vec).is_zero() {
                z.set(i);
            }
        }
        z
    };

    let all_constraints = equations
        .iter()
        .map(|e| (e, true))
        .chain(inequalities.iter().map(|a| (a, false)));

    for (a, is_equation) in all_constraints {
        processed.push(a.clone());

        // A lineality direction crossing the constraint absorbs it.
        if let Some(k) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lineality.remove(k);
            let al = dot(a, &l);
            if al.is_negative() {
                for x in l.iter_mut() {
                    *x = -x.clone();
                }
            }
            let al = dot(a, &l);
            for other in lineality.iter_mut() {
                let f = dot(a, other) / &al;
                if !f.is_zero() {
                    for (o, lv) in other.iter_mut().zip(&l) {
                        *o -= &f * lv;
                    }
                }
            }
            for r in rays.iter_mut() {
                let f = dot(a, &r.vec) / &al;
                if !f.is_zero() {
                    for (x, lv) in r.vec.iter_mut().zip(&l) {
                        *x -= &f * lv;
                    }
                }
            }
            if !is_equation {
                rays.push(RayRec { vec: l, zeros: BitSet::new(0) });
            }
            // zero sets change for every ray: recompute
            for r in rays.iter_mut() {
                r.zeros = recompute_zeros(&r.vec, &processed, total);
            }
            continue;
        }

        // Split rays by the sign of the new constraint.
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for r in rays.drain(..) {
            let v = dot(a, &r.vec);
            if v.is_zero() {
                let mut r = r;
                r.zeros = recompute_zeros(&r.vec, &processed, total);
                zero.push(r);
            } else if v.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }

        let mut new_rays: Vec<RayRec> = Vec::new();
        for (pi, p) in pos.iter().enumerate() {
            for n in neg.iter() {
                // adjacency: no third ray's zero set contains zeros(p) n zeros(n)
                let common = p.zeros.intersect(&n.zeros);
                let adjacent = pos
                    .iter()
                    .enumerate()
                    .filter(|(qi, _)| *qi != pi)
                    .map(|(_, q)| q)
                    .chain(neg.iter().filter(|q| !std::ptr::eq(*q, n)))
                    .chain(zero.iter())
                    .all(|q| !common.is_subset(&q.zeros));
                if !adjacent {
                    continue;
                }
                let ap = dot(a, &p.vec);
                let an = dot(a, &n.vec);
                // combo = ap * n - an * p  (both coefficients positive)
                let combo: Vec<Rational> = p
                    .vec
                    .iter()
                    .zip(&n.vec)
                    .map(|(pv, nv)| &ap * nv - &an * pv)
                    .collect();
                if is_zero_vec(&combo) {
                    continue;
                }
                let zeros = recompute_zeros(&combo, &processed, total);
                new_rays.push(RayRec { vec: combo, zeros });
            }
        }

        rays = zero;
        if !is_equation {
            for mut r in pos {
                r.zeros = recompute_zeros(&r.vec, &processed, total);
                rays.push(r);
            }
        }
        rays.extend(new_rays);
    }

    canonicalize(dim, lineality, rays.into_iter().map(|r| r.vec).collect())
}

fn canonicalize(
    dim: usize,
    lineality: Vec<Vec<Rational>>,
    rays: Vec<Vec<Rational>>,
) -> GeneratedCone {
    let (lin_rref, pivots) = match RationalMatrix::from_rows(lineality.clone()) {
        Ok(m) if m.rows() > 0 => m.rref(),
        _ => (RationalMatrix::empty(), Vec::new()),
    };
    let lin_rows: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| lin_rref.row(i).to_vec()).collect();

    let mut out_rays: Vec<Vec<Rational>> = Vec::new();
    for mut r in rays {
        // reduce modulo the lineality space: kill the pivot coordinates
        for (i, &p) in pivots.iter().enumerate() {
            let f = r[p].clone();
            if !f.is_zero() {
                for (x, l) in r.iter_mut().zip(&lin_rows[i]) {
                    *x -= &f * l;
                }
            }
        }
        if is_zero_vec(&r) {
            continue;
        }
        let prim = primitive(&r).expect("nonzero ray").to_rational();
        out_rays.push(prim);
    }
    out_rays.sort();
    out_rays.dedup();
    debug_assert!(out_rays.iter().all(|r| r.len() == dim));
    GeneratedCone { lineality: lin_rows, rays: out_rays }
}

/// Irredundant H-representation of `lin(lineality) + cone(rays)`, computed
/// through the polar cone.
pub fn cone_facets(
    dim: usize,
    lineality: &[Vec<Rational>],
    rays: &[Vec<Rational>],
) -> ConeHRep {
    let polar = cone_from_constraints(dim, lineality, rays);
    ConeHRep {
        equations: polar.lineality,
        inequalities: polar.rays,
    }
}

/// Exact membership test against a generator description.
pub fn cone_contains(cone: &GeneratedCone, x: &[Rational]) -> bool {
    // x in lin(L) + cone(R)  <=>  every valid inequality holds; cheapest exact
    // route at our sizes: facet description of the cone.
    let dim = x.len();
    let h = cone_facets(dim, &cone.lineality, &cone.rays);
    h.equations.iter().all(|e| dot(e, x).is_zero())
        && h.inequalities.iter().all(|a| !dot(a, x).is_negative())
}
