//! Exact rational polytopes with cross-validated V- and H-representations.
//!
//! Conversions run through the double description kernel on the
//! homogenization cone, so hulls, halfspace intersections and Minkowski sums
//! are bit-exact. Affine-hull equations are stored as opposite halfspace
//! pairs.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{cone_facets, cone_from_constraints};
use crate::error::{Error, Result};
use crate::linalg::{primitive, IntegerVector, RationalMatrix};
use crate::rational::{
    add_vec, format_rational, int_dot, parse_rational, Int, Rational,
};

/// The closed halfspace `<normal, x> >= offset`, with a primitive integer
/// normal (normalized jointly with the offset).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: IntegerVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        int_dot(&self.normal.0, point) >= self.offset
    }

    pub fn active_at(&self, point: &[Rational]) -> bool {
        int_dot(&self.normal.0, point) == self.offset
    }

    fn negated(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.neg(),
            offset: -self.offset.clone(),
        }
    }
}

/// Bounded intersection of halfspaces with exact extreme points.
///
/// Invariants kept by every constructor: `vertices` are exactly the extreme
/// points, sorted lexicographically; `halfspaces` are irredundant and
/// canonically ordered; both describe the same set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim_ambient: usize,
    vertices: Vec<Vec<Rational>>,
    halfspaces: Vec<Halfspace>,
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn hull(points: &[Vec<Rational>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Shape("hull of an empty point set".into()));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimMismatch("points of unequal dimension".into()));
        }
        let gens: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| {
                let mut h = Vec::with_capacity(dim + 1);
                h.push(Rational::one());
                h.extend(p.iter().cloned());
                h
            })
            .collect();
        Self::from_homogenized(dim, cone_facets(dim + 1, &[], &gens))
    }

    /// Intersection `{x : <normal_i, x> >= offset_i}`; rejects unbounded or
    /// empty regions.
    pub fn from_halfspace_data(dim: usize, constraints: &[(Vec<Rational>, Rational)]) -> Result<Self> {
        let mut ineqs: Vec<Vec<Rational>> = Vec::with_capacity(constraints.len() + 1);
        for (n, c) in constraints {
            if n.len() != dim {
                return Err(Error::DimMismatch("halfspace normal of wrong length".into()));
            }
            let mut h = Vec::with_capacity(dim + 1);
            h.push(-c.clone());
            h.extend(n.iter().cloned());
            ineqs.push(h);
        }
        let mut x0 = vec![Rational::zero(); dim + 1];
        x0[0] = Rational::one();
        ineqs.push(x0);
        let cone = cone_from_constraints(dim + 1, &[], &ineqs);
        if !cone.lineality.is_empty() || cone.rays.iter().any(|r| r[0].is_zero()) {
            return Err(Error::Unbounded);
        }
        if cone.rays.is_empty() {
            return Err(Error::Infeasible {
                reason: "halfspace intersection is empty".into(),
                certificate: Vec::new(),
            });
        }
        let points: Vec<Vec<Rational>> = cone
            .rays
            .iter()
            .map(|r| r[1..].iter().map(|x| x / &r[0]).collect())
            .collect();
        Self::hull(&points)
    }

    fn from_homogenized(dim: usize, hrep: crate::dd::ConeHRep) -> Result<Self> {
        // extreme rays of the homogenization cone = vertices (x0 > 0)
        let cone = cone_from_constraints(dim + 1, &hrep.equations, &hrep.inequalities);
        debug_assert!(cone.lineality.is_empty());
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        for r in &cone.rays {
            debug_assert!(r[0].is_positive(), "homogenization cone ray with x0 <= 0");
            vertices.push(r[1..].iter().map(|x| x / &r[0]).collect());
        }
        vertices.sort();

        let mut halfspaces: Vec<Halfspace> = Vec::new();
        let push = |functional: &[Rational], halfspaces: &mut Vec<Halfspace>| {
            // functional (c0, c): c . m >= -c0 on the slice x0 = 1
            let normal_part = &functional[1..];
            if normal_part.iter().all(Rational::is_zero) {
                return; // vacuous on the slice
            }
            let prim = primitive(functional).expect("nonzero functional");
            let scale = {
                // factor between functional and its primitive form, positive
                let k = functional
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero");
                &functional[k] / Rational::from_integer(prim.0[k].clone())
            };
            debug_assert!(scale.is_positive());
            let offset = -Rational::from_integer(prim.0[0].clone());
            halfspaces.push(Halfspace {
                normal: IntegerVector(prim.0[1..].to_vec()),
                offset,
            });
        };
        for e in &hrep.equations {
            push(e, &mut halfspaces);
            let neg: Vec<Rational> = e.iter().map(|x| -x).collect();
            push(&neg, &mut halfspaces);
        }
        let equation_count = halfspaces.len();
        for a in &hrep.inequalities {
            push(a, &mut halfspaces);
        }
        // every facet of a bounded polytope touches a vertex; inequalities
        // that touch none are slice artifacts of the homogenization
        let supported: Vec<Halfspace> = halfspaces
            .iter()
            .enumerate()
            .filter(|(k, h)| *k < equation_count || vertices.iter().any(|v| h.active_at(v)))
            .map(|(_, h)| h.clone())
            .collect();
        let mut halfspaces = supported;
        halfspaces.sort();
        halfspaces.dedup();
        Ok(Self { dim_ambient: dim, vertices, halfspaces })
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Halfspaces that are genuine facets (not half of an equation pair).
    pub fn facet_halfspaces(&self) -> Vec<&Halfspace> {
        self.halfspaces
            .iter()
            .filter(|h| !self.halfspaces.contains(&h.negated()))
            .collect()
    }

    pub fn affine_dim(&self) -> usize {
        if self.vertices.len() <= 1 {
            return 0;
        }
        let base = &self.vertices[0];
        let diffs: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        RationalMatrix::from_rows(diffs).expect("rectangular").rank()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim_ambient && self.halfspaces.iter().all(|h| h.satisfied_by(point))
    }

    pub fn is_vertex(&self, point: &[Rational]) -> bool {
        self.vertices.iter().any(|v| v[..] == *point)
    }

    /// Minkowski sum: hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim_ambient != other.dim_ambient {
            return Err(Error::DimMismatch(format!(
                "minkowski sum of dimensions {} and {}",
                self.dim_ambient, other.dim_ambient
            )));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(add_vec(a, b));
            }
        }
        Self::hull(&sums)
    }

    /// Dilation by a nonnegative rational factor.
    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::Shape("scaling factor must be nonnegative".into()));
        }
        if factor.is_zero() {
            return Self::hull(&[vec![Rational::zero(); self.dim_ambient]]);
        }
        let scaled: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * factor).collect())
            .collect();
        Self::hull(&scaled)
    }

    /// dim! times the Euclidean volume, by simplicial decomposition from the
    /// first vertex. Requires a full-dimensional polytope.
    pub fn normalized_volume(&self) -> Result<Rational> {
        let adim = self.affine_dim();
        if adim < self.dim_ambient {
            return Err(Error::LowerDimensional {
                found: adim,
                ambient: self.dim_ambient,
            });
        }
        let mut total = Rational::zero();
        for simplex in self.triangulate()? {
            let base = &simplex[0];
            let rows: Vec<Vec<Rational>> = simplex[1..]
                .iter()
                .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let det = RationalMatrix::from_rows(rows)?.det()?;
            total += det.abs();
        }
        Ok(total)
    }

    /// Decomposes into full-dimensional simplices sharing the first vertex.
    fn triangulate(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        fn facet_vertex_sets(p: &Polytope) -> Vec<Vec<Vec<Rational>>> {
            p.facet_halfspaces()
                .iter()
                .map(|h| {
                    p.vertices
                        .iter()
                        .filter(|v| h.active_at(v))
                        .cloned()
                        .collect()
                })
                .collect()
        }
        // triangulates the polytope spanned by `verts` coning from its first
        // vertex over recursively triangulated facets
        fn rec(verts: &[Vec<Rational>]) -> Result<Vec<Vec<Vec<Rational>>>> {
            let p = Polytope::hull(verts)?;
            let adim = p.affine_dim();
            if p.vertices.len() == adim + 1 {
                return Ok(vec![p.vertices.clone()]);
            }
            let apex = p.vertices[0].clone();
            let mut simplices = Vec::new();
            for fv in facet_vertex_sets(&p) {
                if fv.iter().any(|v| v == &apex) {
                    continue;
                }
                for mut s in rec(&fv)? {
                    s.push(apex.clone());
                    simplices.push(s);
                }
            }
            Ok(simplices)
        }
        rec(&self.vertices)
    }

    /// All integer points, sorted, by exact bounding-box scan.
    pub fn lattice_points(&self) -> Vec<IntegerVector> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let dim = self.dim_ambient;
        if dim == 0 {
            return vec![IntegerVector(Vec::new())];
        }
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut mn = self.vertices[0][k].clone();
            let mut mx = mn.clone();
            for v in &self.vertices[1..] {
                if v[k] < mn {
                    mn = v[k].clone();
                }
                if v[k] > mx {
                    mx = v[k].clone();
                }
            }
            lo.push(mn.ceil().to_integer());
            hi.push(mx.floor().to_integer());
        }
        let mut out = Vec::new();
        let mut current: Vec<Int> = lo.clone();
        if (0..dim).any(|k| lo[k] > hi[k]) {
            return Vec::new();
        }
        loop {
            let point: Vec<Rational> = current
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect();
            if self.contains(&point) {
                out.push(IntegerVector(current.clone()));
            }
            // odometer increment
            let mut k = 0;
            loop {
                if k == dim {
                    out.sort();
                    return out;
                }
                current[k] += 1;
                if current[k] <= hi[k] {
                    break;
                }
                current[k] = lo[k].clone();
                k += 1;
            }
        }
    }

    /// True when every vertex is integral.
    pub fn vertices_integral(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| x.denom().is_one()))
    }

    /// Cross-validates the two representations: every vertex satisfies all
    /// halfspaces with a spanning active set, every halfspace is supporting,
    /// and no vertex is a convex combination of the others.
    pub fn verify(&self) -> Result<()> {
        for v in &self.vertices {
            if !self.contains(v) {
                return Err(Error::InvalidFan(format!(
                    "vertex {v:?} violates a halfspace"
                )));
            }
            let active: Vec<Vec<Rational>> = self
                .halfspaces
                .iter()
                .filter(|h| h.active_at(v))
                .map(|h| h.normal.to_rational())
                .collect();
            let rank = RationalMatrix::from_rows(active)?.rank();
            if rank < self.dim_ambient {
                return Err(Error::InvalidFan(format!(
                    "vertex {v:?} has active-constraint rank {rank} < {}",
                    self.dim_ambient
                )));
            }
        }
        for h in &self.halfspaces {
            if !self.vertices.iter().any(|v| h.active_at(v)) {
                return Err(Error::InvalidFan(format!(
                    "halfspace {:?} >= {} is not supporting",
                    h.normal, h.offset
                )));
            }
        }
        let rebuilt = Polytope::hull(&self.vertices)?;
        if rebuilt != *self {
            return Err(Error::InvalidFan("representations disagree".into()));
        }
        Ok(())
    }

    /// Integer-coordinate SVG rendering of a 2-dimensional polytope with its
    /// lattice points marked.
    pub fn to_svg(&self) -> Result<String> {
        if self.dim_ambient != 2 {
            return Err(Error::DimMismatch(format!(
                "svg output is for 2-dimensional polytopes, got {}",
                self.dim_ambient
            )));
        }
        // Scale all coordinates to integers: unit = lcm of denominators, with
        // some headroom so strokes and dots have integer sizes too.
        let mut unit = Int::from(24);
        for v in &self.vertices {
            for x in v {
                unit = crate::rational::lcm_int(&unit, x.denom());
            }
        }
        let scaled: Vec<(Int, Int)> = self
            .vertices
            .iter()
            .map(|v| {
                (
                    (&v[0] * Rational::from_integer(unit.clone())).to_integer(),
                    (&v[1] * Rational::from_integer(unit.clone())).to_integer(),
                )
            })
            .collect();
        let ordered = order_polygon(&scaled);
        let xs: Vec<&Int> = scaled.iter().map(|p| &p.0).collect();
        let ys: Vec<&Int> = scaled.iter().map(|p| &p.1).collect();
        let min_x = (*xs.iter().min().unwrap()).clone() - &unit;
        let max_x = (*xs.iter().max().unwrap()).clone() + &unit;
        let min_y = (*ys.iter().min().unwrap()).clone() - &unit;
        let max_y = (*ys.iter().max().unwrap()).clone() + &unit;
        let width = &max_x - &min_x;
        let height = &max_y - &min_y;
        // flip y so the figure reads mathematically (y up)
        let flip = |y: &Int| -> Int { &max_y + &min_y - y };
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            min_x, min_y, width, height
        ));
        let pts: Vec<String> = ordered
            .iter()
            .map(|(x, y)| format!("{},{}", x, flip(y)))
            .collect();
        let stroke = (&unit / Int::from(12)).max(Int::one());
        svg.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>\n",
            pts.join(" "),
            stroke
        ));
        let dot_r = (&unit / Int::from(8)).max(Int::one());
        for p in self.lattice_points() {
            let cx = &p.0[0] * &unit;
            let cy = &p.0[1] * &unit;
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>\n",
                cx,
                flip(&cy),
                dot_r
            ));
        }
        svg.push_str("</svg>\n");
        Ok(svg)
    }
}

/// Orders 2-d integer points counterclockwise around their centroid using
/// exact comparisons.
fn order_polygon(points: &[(Int, Int)]) -> Vec<(Int, Int)> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let n = Int::from(points.len() as i64);
    let cx: Int = points.iter().map(|p| p.0.clone()).sum();
    let cy: Int = points.iter().map(|p| p.1.clone()).sum();
    // compare angles of (n*p - c) exactly via half-plane + cross product
    let half = |dx: &Int, dy: &Int| -> u8 {
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut out = points.to_vec();
    out.sort_by(|a, b| {
        let (ax, ay) = (&a.0 * &n - &cx, &a.1 * &n - &cy);
        let (bx, by) = (&b.0 * &n - &cx, &b.1 * &n - &cy);
        half(&ax, &ay).cmp(&half(&bx, &by)).then_with(|| {
            let cross = &bx * &ay - &ax * &by;
            cross.cmp(&Int::zero())
        })
    });
    out
}

// ---------------------------------------------------------------------------
// serde (strings for exactness)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct HalfspaceDto {
    normal: IntegerVector,
    offset: String,
}

#[derive(Serialize, Deserialize)]
struct PolytopeDto {
    dim_ambient: usize,
    vertices: Vec<Vec<String>>,
    halfspaces: Vec<HalfspaceDto>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeDto {
            dim_ambient: self.dim_ambient,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfspaceDto {
                    normal: h.normal.clone(),
                    offset: format_rational(&h.offset),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = PolytopeDto::deserialize(d)?;
        let mut vertices = Vec::with_capacity(dto.vertices.len());
        for v in &dto.vertices {
            let parsed: Result<Vec<Rational>> = v.iter().map(|s| parse_rational(s)).collect();
            vertices.push(parsed.map_err(serde::de::Error::custom)?);
        }
        // rebuild canonically from the vertex list, then check the stored
        // halfspaces describe the same polytope
        let p = Polytope::hull(&vertices).map_err(serde::de::Error::custom)?;
        if dto.dim_ambient != p.dim_ambient {
            return Err(serde::de::Error::custom("dim_ambient mismatch"));
        }
        for h in &dto.halfspaces {
            let offset = parse_rational(&h.offset).map_err(serde::de::Error::custom)?;
            let hs = Halfspace { normal: h.normal.clone(), offset };
            if !p.vertices.iter().all(|v| hs.satisfied_by(v)) {
                return Err(serde::de::Error::custom(
                    "stored halfspace is violated by a vertex",
                ));
            }
        }
        Ok(p)
    }
}

pub fn polytope_point(coords: &[Rational]) -> Polytope {
    Polytope::hull(&[coords.to_vec()]).expect("point hull")
}
