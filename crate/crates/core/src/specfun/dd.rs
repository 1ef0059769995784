//! Double-double real and complex arithmetic (about 32 significant digits).
//!
//! Only the handful of operations needed by the terminating hypergeometric
//! sums are provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DDComplex {
    pub re: DD,
    pub im: DD,
}

impl DDComplex {
    pub const ZERO: DDComplex = DDComplex {
        re: DD::ZERO,
        im: DD::ZERO,
    };
    pub const ONE: DDComplex = DDComplex {
        re: DD::ONE,
        im: DD::ZERO,
    };

    pub fn new(re: DD, im: DD) -> Self {
        DDComplex { re, im }
    }

    pub fn conj(self) -> Self {
        DDComplex {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> DD {
        self.re * self.re + self.im * self.im
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Complex64> for DDComplex {
    fn from(z: Complex64) -> Self {
        DDComplex {
            re: DD::new(z.re),
            im: DD::new(z.im),
        }
    }
}

impl From<f64> for DDComplex {
    fn from(x: f64) -> Self {
        DDComplex {
            re: DD::new(x),
            im: DD::ZERO,
        }
    }
}

impl Add for DDComplex {
    type Output = DDComplex;
    fn add(self, o: DDComplex) -> DDComplex {
        DDComplex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for DDComplex {
    type Output = DDComplex;
    fn sub(self, o: DDComplex) -> DDComplex {
        DDComplex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for DDComplex {
    type Output = DDComplex;
    fn mul(self, o: DDComplex) -> DDComplex {
        DDComplex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for DDComplex {
    type Output = DDComplex;
    fn div(self, o: DDComplex) -> DDComplex {
        let d = o.norm_sqr();
        let n = self * o.conj();
        DDComplex::new(n.re / d, n.im / d)
    }
}
