use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finite::{verify_family, FiniteFamily, Space, WitnessAssignment};
use crate::freegroup::Word;
use crate::system::{CongruenceSystem, Relation};
use crate::{Point, Rational, RotMat};

use super::geometry::{fixed_axis, standard_free_rotations, word_to_matrix, Vec3};

/// Base points tried in order for group-mode realizations.
pub const FALLBACK_BASE_POINTS: [[i64; 3]; 8] = [
    [3, 4, 12],
    [1, 2, 3],
    [2, 3, 7],
    [1, 5, 11],
    [2, 7, 13],
    [3, 5, 17],
    [4, 9, 19],
    [5, 6, 23],
];

/// Images of the family's elements on the sphere (unnormalized), with the
/// rotations used to produce them.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRealization {
    pub generators: Vec<RotMat>,
    pub base_point: Point,
    /// Per set, the element and its point.
    pub points: Vec<Vec<(Word, Point)>>,
    /// Squared chordal radius of the caps; absent with fewer than two points.
    pub epsilon_sq: Option<Rational>,
}

/// Rotations for `m` free generators: the standard pair when `m ≤ 2`,
/// otherwise `σ^i ρ σ^{-i}` for `i = 0..m`.
pub fn sphere_generators(m: usize) -> Vec<RotMat> {
    let (sigma, rho) = standard_free_rotations();
    if m <= 2 {
        return [sigma, rho].into_iter().take(m.max(1)).collect();
    }
    let sigma_t = sigma.transpose();
    let mut conj = RotMat::identity();
    let mut conj_inv = RotMat::identity();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(conj.mul_mat(&rho).mul_mat(&conj_inv));
        conj = conj.mul_mat(&sigma);
        conj_inv = sigma_t.mul_mat(&conj_inv);
    }
    out
}

impl SphereRealization {
    fn all_points(&self) -> impl Iterator<Item = &Point> {
        self.points.iter().flatten().map(|(_, p)| p)
    }

    fn union_points(&self, indices: crate::IndexSet) -> Vec<Point> {
        let mut v: Vec<Point> = indices
            .iter()
            .filter(|&k| k <= self.points.len())
            .flat_map(|k| self.points[k - 1].iter().map(|(_, p)| p.clone()))
            .collect();
        v.sort();
        v
    }

    /// JSON with every rational written as a string.
    pub fn to_json(&self) -> Value {
        let triple = |p: &Point| json!(p.0.iter().map(|q| q.to_string()).collect::<Vec<_>>());
        json!({
            "base_point": triple(&self.base_point),
            "sets": self.points.iter().map(|set| {
                set.iter().map(|(w, p)| json!({"element": w.to_string(), "point": triple(p)})).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "epsilon_sq": self.epsilon_sq.as_ref().map(|e| e.to_string()),
        })
    }
}

fn min_distance_sq<'a>(points: impl Iterator<Item = &'a Point>) -> Option<Rational> {
    let pts: Vec<&Point> = points.collect();
    let mut best: Option<Rational> = None;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = a.distance_sq(b);
            if best.as_ref().is_none_or(|cur| d < *cur) {
                best = Some(d);
            }
        }
    }
    best
}

/// Elements that must land on distinct points: the family plus every
/// witness image of a left side.
fn relevant_elements(
    fam: &FiniteFamily,
    wit: &WitnessAssignment,
    sys: &CongruenceSystem,
) -> Vec<Word> {
    let mut all = fam.elements();
    for (st, g) in sys.statements().iter().zip(wit.words()) {
        all.extend(fam.image(g, &fam.union_of(st.left)));
    }
    all.into_iter().collect()
}

fn place(elements: &[Word], gens: &[RotMat], base: &Point) -> Result<BTreeMap<Word, Point>> {
    let mut placed: BTreeMap<Word, Point> = BTreeMap::new();
    let mut owner: BTreeMap<Point, Word> = BTreeMap::new();
    for x in elements {
        let p = word_to_matrix(x, gens)?.mul_vec(base);
        if let Some(other) = owner.get(&p) {
            return Err(Error::PointCollision(other.to_string(), x.to_string()));
        }
        owner.insert(p.clone(), x.clone());
        placed.insert(x.clone(), p);
    }
    Ok(placed)
}

/// Sends each element `x` to `M(x)·x₀`. In coset mode `x₀` is the axis of the
/// subgroup generator, so the map is well defined on cosets.
pub fn realize(
    fam: &FiniteFamily,
    wit: &WitnessAssignment,
    sys: &CongruenceSystem,
) -> Result<SphereRealization> {
    if !verify_family(fam, wit, sys)?.holds {
        return Err(Error::FamilyDoesNotSatisfy);
    }
    let m = fam.space().m().max(wit.max_generator());
    let gens = sphere_generators(m);
    let elements = relevant_elements(fam, wit, sys);
    let coset_axis = match fam.space() {
        Space::Coset(cs) if !cs.generator().is_identity() => {
            Some(fixed_axis(&word_to_matrix(cs.generator(), &gens)?)?)
        }
        _ => None,
    };
    let (base_point, placed) = match coset_axis {
        Some(axis) => {
            let placed = place(&elements, &gens, &axis)?;
            (axis, placed)
        }
        None => FALLBACK_BASE_POINTS
            .iter()
            .map(|&v| Vec3::from_ints(v))
            .find_map(|base| place(&elements, &gens, &base).ok().map(|p| (base, p)))
            .ok_or(Error::FallbacksExhausted)?,
    };
    let points: Vec<Vec<(Word, Point)>> = fam
        .sets()
        .iter()
        .map(|s| s.iter().map(|x| (x.clone(), placed[x].clone())).collect())
        .collect();
    let epsilon_sq = min_distance_sq(points.iter().flatten().map(|(_, p)| p))
        .map(|d| d / Rational::from_integer(5.into()));
    Ok(SphereRealization {
        generators: gens,
        base_point,
        points,
        epsilon_sq,
    })
}

/// Each witness rotation carries the points of the left union exactly onto
/// (or into) those of the right union; all points share one norm; caps of
/// squared radius `epsilon_sq` are pairwise disjoint.
pub fn verify_realization(
    real: &SphereRealization,
    wit: &WitnessAssignment,
    sys: &CongruenceSystem,
) -> bool {
    if wit.len() != sys.len() || real.points.len() != sys.r() {
        return false;
    }
    let norm = real.base_point.norm_sq();
    if real.all_points().any(|p| p.norm_sq() != norm) {
        return false;
    }
    if let Some(eps) = &real.epsilon_sq {
        let four = Rational::from_integer(4.into());
        if eps.is_zero() || min_distance_sq(real.all_points()).is_some_and(|d| d <= &four * eps) {
            return false;
        }
    } else if real.all_points().count() >= 2 {
        return false;
    }
    for (st, g) in sys.statements().iter().zip(wit.words()) {
        let Ok(rot) = word_to_matrix(g, &real.generators) else {
            return false;
        };
        let mut image: Vec<Point> = real
            .union_points(st.left)
            .iter()
            .map(|p| rot.mul_vec(p))
            .collect();
        image.sort();
        let target = real.union_points(st.right);
        let ok = match st.kind {
            Relation::Congruence => image == target,
            Relation::Subcongruence => {
                image.windows(2).all(|w| w[0] != w[1])
                    && image.iter().all(|p| target.binary_search(p).is_ok())
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::CosetSpace;

    fn f(k: i64) -> Word {
        Word::generator(1).pow(k)
    }

    fn z_case() -> (FiniteFamily, WitnessAssignment, CongruenceSystem) {
        let fam = FiniteFamily::group(1, vec![vec![f(2)], vec![f(1)], vec![f(3)]]).unwrap();
        let wit = WitnessAssignment(vec![f(-1), f(1), f(1)]);
        let sys = CongruenceSystem::from_congruences(
            3,
            &[(&[1], &[2]), (&[1], &[3]), (&[1, 2], &[1, 3])],
        )
        .unwrap();
        (fam, wit, sys)
    }

    #[test]
    fn integer_example() {
        let (fam, wit, sys) = z_case();
        let real = realize(&fam, &wit, &sys).unwrap();
        assert_eq!(real.base_point, Vec3::from_ints([3, 4, 12]));
        assert!(real
            .epsilon_sq
            .as_ref()
            .is_some_and(|e| *e > Rational::zero()));
        assert!(verify_realization(&real, &wit, &sys));

        let mut bent = real.clone();
        let p = &mut bent.points[0][0].1;
        *p = p.add(&Vec3::from_ints([1, 0, 0]));
        assert!(!verify_realization(&bent, &wit, &sys));
    }

    #[test]
    fn coset_example() {
        let w = |l: &[i32]| Word::from_letters(l.iter().copied());
        let space = CosetSpace::new(2, w(&[1])).unwrap();
        let fam = FiniteFamily::coset(space, vec![vec![w(&[])], vec![w(&[1, 2])], vec![w(&[2])]])
            .unwrap();
        let sys = CongruenceSystem::from_congruences(
            3,
            &[(&[1], &[3]), (&[3], &[2]), (&[1, 3], &[1, 2])],
        )
        .unwrap();
        let wit = WitnessAssignment(vec![w(&[2]), w(&[1]), w(&[1])]);
        let real = realize(&fam, &wit, &sys).unwrap();
        assert_eq!(real.base_point, Vec3::from_ints([0, 0, 1]));
        assert_eq!(real.points[0][0].1, Vec3::from_ints([0, 0, 1]));
        assert!(verify_realization(&real, &wit, &sys));
    }

    #[test]
    fn empty_family() {
        let (_, wit, sys) = z_case();
        let fam = FiniteFamily::group(1, vec![vec![], vec![], vec![]]).unwrap();
        let real = realize(&fam, &wit, &sys).unwrap();
        assert_eq!(real.epsilon_sq, None);
        assert!(verify_realization(&real, &wit, &sys));
    }

    #[test]
    fn rejects_non_solutions() {
        let (fam, _, sys) = z_case();
        let wit = WitnessAssignment(vec![f(1), f(1), f(1)]);
        assert_eq!(realize(&fam, &wit, &sys), Err(Error::FamilyDoesNotSatisfy));
    }

    #[test]
    fn many_generators_are_rotations() {
        for g in sphere_generators(4) {
            assert!(g.is_rotation());
        }
    }

    #[test]
    fn json_shape() {
        let (fam, wit, sys) = z_case();
        let v = realize(&fam, &wit, &sys).unwrap().to_json();
        assert_eq!(v["base_point"], json!(["3", "4", "12"]));
        assert_eq!(v["sets"][1][0]["element"], json!("a"));
    }
}
