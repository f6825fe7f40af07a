use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::scalar::Scalar;
use crate::{Point, Rational, RotMat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Scalar> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn from_ints(v: [i64; 3]) -> Self {
        Vec3(v.map(T::from_i64))
    }

    pub fn dot(&self, other: &Vec3<T>) -> T {
        (0..3).fold(T::zero(), |acc, i| {
            acc + self.0[i].clone() * other.0[i].clone()
        })
    }

    pub fn sub(&self, other: &Vec3<T>) -> Vec3<T> {
        Vec3(std::array::from_fn(|i| {
            self.0[i].clone() - other.0[i].clone()
        }))
    }

    pub fn add(&self, other: &Vec3<T>) -> Vec3<T> {
        Vec3(std::array::from_fn(|i| {
            self.0[i].clone() + other.0[i].clone()
        }))
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn distance_sq(&self, other: &Vec3<T>) -> T {
        self.sub(other).norm_sq()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// Row-major 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn identity() -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
        }))
    }

    pub fn transpose(&self) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].clone())
        }))
    }

    pub fn mul_mat(&self, other: &Mat3<T>) -> Mat3<T> {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(T::zero(), |acc, k| {
                    acc + self.0[i][k].clone() * other.0[k][j].clone()
                })
            })
        }))
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3(std::array::from_fn(|i| {
            (0..3).fold(T::zero(), |acc, k| {
                acc + self.0[i][k].clone() * v.0[k].clone()
            })
        }))
    }

    pub fn det(&self) -> T {
        let a = &self.0;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            a[r1][c1].clone() * a[r2][c2].clone() - a[r1][c2].clone() * a[r2][c1].clone()
        };
        a[0][0].clone() * minor(1, 2, 1, 2) - a[0][1].clone() * minor(1, 2, 0, 2)
            + a[0][2].clone() * minor(1, 2, 0, 1)
    }

    /// `MᵀM = I` and `det M = 1`.
    pub fn is_rotation(&self) -> bool {
        self.transpose().mul_mat(self) == Mat3::identity() && self.det() == T::one()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat3::identity()
    }
}

impl<T: Scalar> Mul for &Mat3<T> {
    type Output = Mat3<T>;

    fn mul(self, rhs: &Mat3<T>) -> Mat3<T> {
        self.mul_mat(rhs)
    }
}

/// Rotation about the z-axis and about the x-axis, both with cosine 3/5 and
/// sine 4/5.
pub fn standard_free_rotations() -> (RotMat, RotMat) {
    let q = |n: i64| Rational::new(n.into(), 5.into());
    let (o, z) = (Rational::one(), Rational::zero());
    let about_z = Mat3([
        [q(3), q(-4), z.clone()],
        [q(4), q(3), z.clone()],
        [z.clone(), z.clone(), o.clone()],
    ]);
    let about_x = Mat3([
        [o, z.clone(), z.clone()],
        [z.clone(), q(3), q(-4)],
        [z, q(4), q(3)],
    ]);
    (about_z, about_x)
}

/// Evaluates a word with generator `i` sent to `gens[i-1]` and its inverse
/// to the transpose.
pub fn word_to_matrix<T: Scalar>(w: &Word, gens: &[Mat3<T>]) -> Result<Mat3<T>> {
    if w.max_generator() > gens.len() {
        return Err(Error::ArityMismatch {
            expected: gens.len(),
            found: w.max_generator(),
        });
    }
    let inverses: Vec<Mat3<T>> = gens.iter().map(Mat3::transpose).collect();
    Ok(w.letters().iter().fold(Mat3::identity(), |acc, &l| {
        let g = l.unsigned_abs() as usize - 1;
        if l > 0 {
            acc.mul_mat(&gens[g])
        } else {
            acc.mul_mat(&inverses[g])
        }
    }))
}

/// A nonzero vector in the kernel of `a`, by exact elimination, or `None`
/// when `a` is invertible.
pub fn kernel_vector<T: Scalar>(a: &Mat3<T>) -> Option<Vec3<T>> {
    let mut rows = a.0.clone();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..3 {
        let Some(p) = (r..3).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free = (0..3).find(|c| !pivot_cols.contains(c))?;
    let mut v: [T; 3] = std::array::from_fn(|_| T::zero());
    v[free] = T::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -rows[row][free].clone();
    }
    Some(Vec3(v))
}

/// The rotation axis of `m`: a primitive integer vector with first nonzero
/// coordinate positive spanning `ker(M − I)`.
pub fn fixed_axis(m: &RotMat) -> Result<Point> {
    if m.is_identity() {
        return Err(Error::IdentityInput);
    }
    let shifted = Mat3(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let d = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            m.0[i][j].clone() - d
        })
    }));
    let v = kernel_vector(&shifted)
        .ok_or_else(|| Error::InvalidSystem("matrix has no fixed axis".into()))?;
    Ok(primitive(&v))
}

/// Scales a nonzero rational vector to coprime integers, first nonzero entry positive.
fn primitive(v: &Point) -> Point {
    let lcm = v.0.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.0.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Vec3(std::array::from_fn(|i| {
        Rational::from_integer(&ints[i] / &gcd * &sign)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::ball;

    fn pt(v: [i64; 3]) -> Point {
        Vec3::from_ints(v)
    }

    #[test]
    fn standard_pair_is_rotations() {
        let (s, r) = standard_free_rotations();
        assert!(s.is_rotation() && r.is_rotation());
        assert_eq!(s.mul_vec(&pt([0, 0, 1])), pt([0, 0, 1]));
        assert_eq!(r.mul_vec(&pt([1, 0, 0])), pt([1, 0, 0]));
    }

    #[test]
    fn no_short_relations() {
        let (s, r) = standard_free_rotations();
        let gens = [s, r];
        for w in ball(2, 6).iter().skip(1) {
            assert!(!word_to_matrix(w, &gens).unwrap().is_identity(), "{w}");
        }
    }

    #[test]
    fn evaluation() {
        let (s, r) = standard_free_rotations();
        let gens = [s.clone(), r.clone()];
        assert!(word_to_matrix(&Word::identity(), &gens)
            .unwrap()
            .is_identity());
        let ab = Word::from_letters([1, 2]);
        assert_eq!(word_to_matrix(&ab, &gens).unwrap(), &s * &r);
        assert!(word_to_matrix(&Word::generator(3), &gens).is_err());
    }

    #[test]
    fn axes() {
        let (s, r) = standard_free_rotations();
        assert_eq!(fixed_axis(&s).unwrap(), pt([0, 0, 1]));
        assert_eq!(fixed_axis(&Mat3::identity()), Err(Error::IdentityInput));
        let sr = &s * &r;
        let v = fixed_axis(&sr).unwrap();
        assert!(!v.is_zero());
        assert_eq!(sr.mul_vec(&v), v);
    }

    #[test]
    fn float_geometry() {
        let m: Mat3<f64> = Mat3([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(m.det(), 1.0);
        let shifted = Mat3([[-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_eq!(kernel_vector(&shifted), Some(Vec3([0.0, 0.0, 1.0])));
    }
}
