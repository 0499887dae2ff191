//! Exact coefficient arithmetic: ℚ, the Gaussian field ℚ(i), and prime
//! fields F_p.
//!
//! Every [`Scalar`] knows which [`Field`] it belongs to; mixing fields in
//! one operation is a programming error and panics. Boundary code (matrix
//! and element constructors) checks field agreement up front so internal
//! arithmetic can stay panic-free in practice.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient field descriptor.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Field {
    /// Rational numbers.
    Q,
    /// Gaussian rationals ℚ(i) with conjugation `i ↦ -i`.
    Qi,
    /// Prime field of the given (prime) characteristic.
    Fp(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Qi => write!(f, "Q(i)"),
            Field::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Scalar {
    Q(BigRational),
    Qi { re: BigRational, im: BigRational },
    Fp { p: u32, val: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Qi => Scalar::Qi {
                re: BigRational::from(BigInt::from(n)),
                im: BigRational::zero(),
            },
            Field::Fp(p) => Scalar::Fp {
                p,
                val: n.rem_euclid(p as i64) as u32,
            },
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Gaussian rational `re + im·i` from integer parts.
    pub fn gauss(re: i64, im: i64) -> Scalar {
        Scalar::Qi {
            re: BigRational::from(BigInt::from(re)),
            im: BigRational::from(BigInt::from(im)),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Qi { .. } => Field::Qi,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Qi { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Qi { re, im } => re.is_one() && im.is_zero(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Qi { re, im } => {
                // 1/(a+bi) = (a-bi)/(a²+b²)
                let norm = re * re + im * im;
                Scalar::Qi {
                    re: re / &norm,
                    im: -im / &norm,
                }
            }
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: fp_pow(*val as u64, *p as u64 - 2, *p as u64) as u32,
            },
        })
    }

    /// Complex conjugation; the identity on ℚ and F_p.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Qi { re, im } => Scalar::Qi {
                re: re.clone(),
                im: -im,
            },
            other => other.clone(),
        }
    }

    fn check_matching(&self, rhs: &Scalar) {
        assert_eq!(
            self.field(),
            rhs.field(),
            "scalar arithmetic across distinct fields"
        );
    }
}

fn fp_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_matching(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Qi { re: a, im: b }, Scalar::Qi { re: c, im: d }) => Scalar::Qi {
                re: a + c,
                im: b + d,
            },
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                p: *p,
                val: ((*a as u64 + *b as u64) % *p as u64) as u32,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_matching(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Qi { re: a, im: b }, Scalar::Qi { re: c, im: d }) => Scalar::Qi {
                re: a * c - b * d,
                im: a * d + b * c,
            },
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => Scalar::Fp {
                p: *p,
                val: (*a as u64 * *b as u64 % *p as u64) as u32,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Qi { re, im } => Scalar::Qi {
                re: -re,
                im: -im,
            },
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Qi { re, im } => {
                if im.is_zero() {
                    write!(f, "{re}")
                } else if re.is_zero() {
                    write!(f, "{im}i")
                } else if im.is_negative() {
                    write!(f, "{re}{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_inverse_roundtrip() {
        let a = Scalar::from_ratio(-3, 7);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(Scalar::zero(Field::Q).inv().is_none());
    }

    #[test]
    fn gauss_inverse_and_conj() {
        let z = Scalar::gauss(2, -3);
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        // z·conj(z) is the (real) norm
        let n = &z * &z.conj();
        assert_eq!(n, Scalar::gauss(13, 0));
    }

    #[test]
    fn fp_arithmetic() {
        let p = Field::Fp(7);
        let a = Scalar::from_i64(p, 12); // 5 mod 7
        assert_eq!(a, Scalar::from_i64(p, 5));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(-&Scalar::from_i64(p, 0), Scalar::from_i64(p, 0));
        assert_eq!(-&a, Scalar::from_i64(p, 2));
    }

    #[test]
    fn from_i64_negative_fp() {
        assert_eq!(Scalar::from_i64(Field::Fp(5), -3), Scalar::from_i64(Field::Fp(5), 2));
    }

    #[test]
    #[should_panic(expected = "distinct fields")]
    fn mixed_field_panics() {
        let _ = &Scalar::one(Field::Q) + &Scalar::one(Field::Qi);
    }
}
