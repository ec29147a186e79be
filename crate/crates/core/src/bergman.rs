//! Tropicalization of a linear subvariety of the torus as the Bergman fan of
//! its matroid, in the fine (chains of flats) and coarse (nested sets of
//! connected flats) structures, plus the circuit membership oracle for the
//! support.
//!
//! Convention, frozen: the ray of a proper flat `F` on ground set
//! `0..N` is `-e_F`, shifted by the all-ones vector when `0 in F` so that
//! coordinate 0 vanishes, then dehomogenized by dropping coordinate 0. The
//! oracle works in the same chart: a point `w` of length `N - 1` is
//! homogenized by inserting 0 in front, and membership requires every
//! circuit to attain its maximum at least twice.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::IntegerVector;
use crate::matroid::{Flat, Matroid};
use crate::rational::{Int, Rational};

/// A Bergman fan together with the flat labelling of its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalFan {
    pub fan: Fan,
    /// Ray index -> the proper flat it comes from (same order as the rays).
    pub flat_labels: Vec<Flat>,
    /// Min/max convention tag; this crate always produces "max".
    pub convention: &'static str,
    /// Coordinate dropped by dehomogenization; always 0.
    pub dehomogenized_by: usize,
}

impl TropicalFan {
    /// Ray index of a flat given by its element set.
    pub fn ray_of_flat(&self, elements: &[usize]) -> Option<usize> {
        self.flat_labels.iter().position(|f| f.elements == elements)
    }
}

/// Dehomogenized ray vector of a proper flat.
pub fn flat_ray(elements: &[usize], ground_size: usize) -> IntegerVector {
    let mut v = vec![Int::zero(); ground_size];
    for &e in elements {
        v[e] = -Int::from(1);
    }
    if elements.contains(&0) {
        for x in v.iter_mut() {
            *x += 1;
        }
    }
    IntegerVector(v[1..].to_vec())
}

/// Reusable membership oracle for the support of the tropicalized linear
/// space; caches the circuit list.
pub struct TropMembership {
    circuits: Vec<Vec<usize>>,
    ground_size: usize,
}

impl TropMembership {
    pub fn new(matroid: &Matroid) -> Result<Self> {
        Ok(Self {
            circuits: matroid.circuits()?,
            ground_size: matroid.ground_size(),
        })
    }

    pub fn circuits(&self) -> &[Vec<usize>] {
        &self.circuits
    }

    /// `w` has length `ground_size - 1`; homogenization inserts 0 in front.
    pub fn contains(&self, w: &[Rational]) -> bool {
        debug_assert_eq!(w.len(), self.ground_size - 1);
        let zero = Rational::zero();
        let coord = |i: usize| -> &Rational {
            if i == 0 {
                &zero
            } else {
                &w[i - 1]
            }
        };
        for c in &self.circuits {
            let mut max = coord(c[0]);
            let mut count = 1usize;
            for &e in &c[1..] {
                let x = coord(e);
                if x > max {
                    max = x;
                    count = 1;
                } else if x == max {
                    count += 1;
                }
            }
            if count < 2 {
                return false;
            }
        }
        true
    }
}

/// Circuit criterion for a single point.
pub fn trop_membership(matroid: &Matroid, w: &[Rational]) -> Result<bool> {
    if w.len() + 1 != matroid.ground_size() {
        return Err(Error::DimMismatch(format!(
            "point of length {} for ground size {}",
            w.len(),
            matroid.ground_size()
        )));
    }
    Ok(TropMembership::new(matroid)?.contains(w))
}

fn check_loopless(matroid: &Matroid) -> Result<()> {
    if let Some(&e) = matroid.loops().first() {
        return Err(Error::Loop(e));
    }
    Ok(())
}

/// Fine structure: one ray per proper flat, one cone per chain of proper
/// flats.
pub fn fine_bergman(matroid: &Matroid) -> Result<TropicalFan> {
    check_loopless(matroid)?;
    let flats = matroid.proper_flats()?;
    build_chain_fan(matroid, flats)
}

/// Coarse structure: the nested-set fan of the minimal building set, whose
/// rays are the connected proper flats. A set of building flats is nested
/// when the closure of the union of every antichain of two or more of them
/// is disconnected (the ground set, which is connected, is never a valid
/// join either — this is what keeps the fan inside the tropical support).
/// Requires a connected matroid.
pub fn coarse_bergman(matroid: &Matroid) -> Result<TropicalFan> {
    check_loopless(matroid)?;
    let ground: Vec<usize> = (0..matroid.ground_size()).collect();
    if !matroid.is_connected(&ground)? {
        return Err(Error::DisconnectedMatroid);
    }
    let flats = matroid.proper_flats()?;
    let mut building: Vec<Flat> = Vec::new();
    for f in flats {
        if matroid.is_connected(&f.elements)? {
            building.push(f);
        }
    }

    let n = building.len();
    // strict containment between building flats
    let contains = |a: &Flat, b: &Flat| b.elements.iter().all(|e| a.elements.contains(e));
    let mut comparable = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && (contains(&building[i], &building[j]) || contains(&building[j], &building[i])) {
                comparable[i][j] = true;
            }
        }
    }

    let mut join_connected: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let mut join_is_connected = |m: &Matroid, union: Vec<usize>| -> Result<bool> {
        if let Some(&v) = join_connected.get(&union) {
            return Ok(v);
        }
        let closure = m.closure(&union)?;
        let v = m.is_connected(&closure.elements)?;
        join_connected.insert(union, v);
        Ok(v)
    };

    // depth-first enumeration of nested sets in index order
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        matroid: &Matroid,
        building: &[Flat],
        comparable: &[Vec<bool>],
        join_is_connected: &mut dyn FnMut(&Matroid, Vec<usize>) -> Result<bool>,
        stack: &mut Vec<usize>,
        cones: &mut Vec<Vec<usize>>,
        start: usize,
    ) -> Result<()> {
        for j in start..building.len() {
            // antichains of stack + j that include j: subsets of the members
            // incomparable with j, themselves pairwise incomparable
            let incomp: Vec<usize> = stack
                .iter()
                .copied()
                .filter(|&i| !comparable[i][j])
                .collect();
            let mut ok = true;
            'mask: for mask in 1u64..(1 << incomp.len()) {
                let chosen: Vec<usize> = (0..incomp.len())
                    .filter(|&k| mask >> k & 1 == 1)
                    .map(|k| incomp[k])
                    .collect();
                for (a, &x) in chosen.iter().enumerate() {
                    for &y in &chosen[a + 1..] {
                        if comparable[x][y] {
                            continue 'mask;
                        }
                    }
                }
                let mut union: Vec<usize> = building[j].elements.clone();
                for &i in &chosen {
                    union.extend(building[i].elements.iter().copied());
                }
                union.sort_unstable();
                union.dedup();
                if join_is_connected(matroid, union)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                stack.push(j);
                cones.push(stack.clone());
                extend(
                    matroid,
                    building,
                    comparable,
                    join_is_connected,
                    stack,
                    cones,
                    j + 1,
                )?;
                stack.pop();
            }
        }
        Ok(())
    }
    extend(
        matroid,
        &building,
        &comparable,
        &mut join_is_connected,
        &mut stack,
        &mut cones,
        0,
    )?;

    let rays: Vec<IntegerVector> = building
        .iter()
        .map(|f| flat_ray(&f.elements, matroid.ground_size()))
        .collect();
    let fan = Fan::new(matroid.ground_size() - 1, rays, cones, 0)?;
    Ok(TropicalFan {
        fan,
        flat_labels: building,
        convention: "max",
        dehomogenized_by: 0,
    })
}

fn build_chain_fan(matroid: &Matroid, flats: Vec<Flat>) -> Result<TropicalFan> {
    let n = flats.len();
    let contains = |a: &Flat, b: &Flat| b.elements.iter().all(|e| a.elements.contains(e));
    // edges of the containment order: i -> j means flat_i strictly below flat_j
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && contains(&flats[j], &flats[i]) {
                above[i].push(j);
            }
        }
    }
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn chains(
        above: &[Vec<usize>],
        stack: &mut Vec<usize>,
        cones: &mut Vec<Vec<usize>>,
        candidates: &[usize],
    ) {
        for &j in candidates {
            stack.push(j);
            let mut sorted = stack.clone();
            sorted.sort_unstable();
            cones.push(sorted);
            chains(above, stack, cones, &above[j]);
            stack.pop();
        }
    }
    let all: Vec<usize> = (0..n).collect();
    chains(&above, &mut stack, &mut cones, &all);
    cones.sort();
    cones.dedup();

    let rays: Vec<IntegerVector> = flats
        .iter()
        .map(|f| flat_ray(&f.elements, matroid.ground_size()))
        .collect();
    let fan = Fan::new(matroid.ground_size() - 1, rays, cones, 0)?;
    Ok(TropicalFan {
        fan,
        flat_labels: flats,
        convention: "max",
        dehomogenized_by: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::matroid::matroid_from_equations;
    use crate::rational::rat_vec;

    fn u23() -> Matroid {
        matroid_from_equations(&RationalMatrix::from_int_rows(&[vec![1, 1, 1]]), 3).unwrap()
    }

    fn example1() -> Matroid {
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
    fn flat_ray_convention_reproduces_known_rays() {
        assert_eq!(flat_ray(&[1, 2, 3], 6), IntegerVector::from_i64(&[-1, -1, -1, 0, 0]));
        assert_eq!(flat_ray(&[0], 6), IntegerVector::from_i64(&[1, 1, 1, 1, 1]));
        assert_eq!(flat_ray(&[0, 2, 4], 6), IntegerVector::from_i64(&[1, 0, 1, 0, 1]));
        assert_eq!(flat_ray(&[0, 3, 5], 6), IntegerVector::from_i64(&[1, 1, 0, 1, 0]));
    }

    #[test]
    fn tropical_line_fine_structure() {
        let trop = fine_bergman(&u23()).unwrap();
        let rays: Vec<_> = trop.fan.rays().to_vec();
        assert_eq!(
            rays,
            vec![
                IntegerVector::from_i64(&[1, 1]),
                IntegerVector::from_i64(&[-1, 0]),
                IntegerVector::from_i64(&[0, -1]),
            ]
        );
        assert_eq!(trop.fan.fvector(), vec![1, 3]);
        assert_eq!(trop.convention, "max");
        // coarse agrees because every flat is connected
        let coarse = coarse_bergman(&u23()).unwrap();
        assert_eq!(coarse.fan, trop.fan);
    }

    #[test]
    fn boolean_matroid_on_two_elements() {
        let m = Matroid::from_columns(RationalMatrix::identity(2));
        let trop = fine_bergman(&m).unwrap();
        assert_eq!(
            trop.fan.rays(),
            &[IntegerVector::from_i64(&[1]), IntegerVector::from_i64(&[-1])]
        );
        assert_eq!(trop.fan.fvector(), vec![1, 2]);
        // the coarse structure needs a connected matroid
        assert!(matches!(coarse_bergman(&m), Err(Error::DisconnectedMatroid)));
    }

    #[test]
    fn example1_fine_has_13_rays_dim_2() {
        let trop = fine_bergman(&example1()).unwrap();
        assert_eq!(trop.fan.rays().len(), 13);
        let report = trop.fan.validate();
        assert_eq!(report.dim, 2);
        assert!(report.pure);
        assert!(report.simplicial);
        assert!(report.issues.is_empty(), "{:?}", report.issues);
    }

    #[test]
    fn example1_coarse_matches_printed_structure() {
        let trop = coarse_bergman(&example1()).unwrap();
        assert_eq!(trop.fan.rays().len(), 10);
        let report = trop.fan.validate();
        assert_eq!(report.fvector, vec![1, 10, 15]);
        assert!(report.pure);
        assert!(report.simplicial);
        assert!(report.issues.is_empty(), "{:?}", report.issues);
        // 12 chain cones plus the three disjoint singleton pairs
        let two_cones: Vec<&Vec<usize>> = trop
            .fan
            .cones()
            .iter()
            .filter(|c| c.len() == 2)
            .collect();
        assert_eq!(two_cones.len(), 15);
        // the pair of triples {1,2,3} and {1,4,5} joins to the ground set,
        // so it is not nested and its cone is absent
        let i = trop.ray_of_flat(&[1, 2, 3]).unwrap();
        let j = trop.ray_of_flat(&[1, 4, 5]).unwrap();
        let mut pair = vec![i, j];
        pair.sort_unstable();
        assert!(!two_cones.iter().any(|c| **c == pair));
        // the singletons {2} and {5} join into the disconnected flat {2,5},
        // so their cone is present
        let a = trop.ray_of_flat(&[2]).unwrap();
        let b = trop.ray_of_flat(&[5]).unwrap();
        let mut pair = vec![a, b];
        pair.sort_unstable();
        assert!(two_cones.iter().any(|c| **c == pair));
    }

    #[test]
    fn membership_oracle_on_the_line() {
        let m = u23();
        assert!(trop_membership(&m, &rat_vec(&[1, 1])).unwrap());
        assert!(!trop_membership(&m, &rat_vec(&[2, 0])).unwrap());
        assert!(trop_membership(&m, &rat_vec(&[0, 0])).unwrap());
        assert!(trop_membership(&m, &rat_vec(&[-3, 0])).unwrap());
    }

    #[test]
    fn membership_on_printed_example_rays() {
        let m = example1();
        let oracle = TropMembership::new(&m).unwrap();
        // every ray of the coarse fan lies in the support
        let trop = coarse_bergman(&m).unwrap();
        for r in trop.fan.rays() {
            assert!(oracle.contains(&r.to_rational()), "{r:?}");
        }
        // ray #7 of the printed listing
        assert!(oracle.contains(&rat_vec(&[1, 0, 1, 0, 1])));
        // the geometric-side vector fails under the max convention
        assert!(!oracle.contains(&rat_vec(&[-1, 0, -1, 0, -1])));
    }

    #[test]
    fn coarse_rays_subset_of_fine_rays() {
        let m = example1();
        let fine = fine_bergman(&m).unwrap();
        let coarse = coarse_bergman(&m).unwrap();
        for r in coarse.fan.rays() {
            assert!(fine.fan.rays().contains(r));
        }
        assert_eq!(fine.fan.rays().len() - 3, coarse.fan.rays().len());
    }

    #[test]
    fn fixed_point_of_subfan_extraction() {
        let m = example1();
        let trop = coarse_bergman(&m).unwrap();
        let oracle = TropMembership::new(&m).unwrap();
        let sub = trop.fan.subfan_meeting(|w| oracle.contains(w)).unwrap();
        assert_eq!(sub, trop.fan);
    }
}
