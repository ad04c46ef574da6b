//! Double-double arithmetic (~31 significant digits).
//!
//! The Mittag-Leffler power series on the negative real axis cancels
//! catastrophically: the largest term can exceed the sum by ten or more
//! orders of magnitude. Summing in double-double keeps the rounding floor
//! far below the 1e-10 accuracy contract. Only the operations the series
//! and the Stirling log-gamma need are implemented.

use std::sync::LazyLock;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
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
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles as a Dd.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        Dd::from_sum(q1, q2).add_f64(q3)
    }

    /// Full-precision division by an f64.
    #[inline]
    pub fn div_f64(self, other: f64) -> Dd {
        let q1 = self.hi / other;
        let (p, e) = two_prod(q1, other);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = r.to_f64() / other;
        Dd::from_sum(q1, q2)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    pub fn sqr(self) -> Dd {
        self.mul(self)
    }

    /// Scale by 2^k exactly.
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        Dd {
            hi: libm_ldexp(self.hi, k),
            lo: libm_ldexp(self.lo, k),
        }
    }

    /// exp(self) via argument reduction against ln 2 and a Taylor tail.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f64(k));
        // |r| <= ln(2)/2; Taylor converges in ~30 terms at dd precision
        let mut sum = Dd::ONE.add(r);
        let mut term = r;
        for n in 2..40 {
            term = term.mul(r).div_f64(n as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.ldexp(k as i32)
    }

    /// ln(self) for self > 0, by Newton refinement of the f64 logarithm.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let mut y = Dd::from_f64(self.hi.ln());
        // y <- y + x*exp(-y) - 1, twice
        for _ in 0..2 {
            let e = y.neg().exp();
            y = y.add(self.mul(e)).add_f64(-1.0);
        }
        y
    }

    /// sin(pi * self), with exact integer reduction.
    pub fn sin_pi(self) -> Dd {
        // reduce to r in [-1, 1] with x = 2n + r
        let n = (self.hi / 2.0).round();
        let r = self.sub(Dd::from_f64(2.0 * n));
        // fold to [-1/2, 1/2]: sin(pi r) with r in [-1,1]
        let (r, sign) = if r.hi > 0.5 {
            (Dd::from_f64(1.0).sub(r), 1.0)
        } else if r.hi < -0.5 {
            (Dd::from_f64(-1.0).sub(r), 1.0)
        } else {
            (r, 1.0)
        };
        let x = PI.mul(r);
        // Taylor for sin around 0, |x| <= pi/2
        let x2 = x.sqr();
        let mut term = x;
        let mut sum = x;
        let mut n2 = 1.0;
        for _ in 0..30 {
            term = term.mul(x2).div_f64(-(n2 + 1.0) * (n2 + 2.0));
            n2 += 2.0;
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        sum.mul_f64(sign)
    }

    /// ln Gamma(self) for self > 0: Stirling series with upward recurrence.
    pub fn lgamma(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let mut x = self;
        // shift to x >= 26 where the truncated Stirling tail is < 1e-33
        let mut shift = Dd::ZERO;
        while x.hi < 26.0 {
            shift = shift.add(x.ln());
            x = x.add_f64(1.0);
        }
        // (x - 1/2) ln x - x + ln(2 pi)/2 + sum c_k x^{1-2k}
        let lnx = x.ln();
        let mut s = x.add_f64(-0.5).mul(lnx).sub(x).add(*HALF_LN_2PI);
        let x2 = x.sqr().recip();
        let mut p = x.recip();
        for c in STIRLING.iter() {
            s = s.add(c.mul(p));
            p = p.mul(x2);
        }
        s.sub(shift)
    }

    /// 1 / Gamma(self) for self > 0 (underflows to zero for huge arguments).
    pub fn rgamma_pos(self) -> Dd {
        self.lgamma().neg().exp()
    }

    /// Gamma(self) for arbitrary non-pole real argument.
    /// At poles (self a non-positive integer) returns infinity.
    pub fn gamma(self) -> Dd {
        if self.hi > 0.0 {
            self.lgamma().exp()
        } else {
            // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
            let s = self.sin_pi();
            if s.hi == 0.0 {
                return Dd::from_f64(f64::INFINITY);
            }
            PI.div(s.mul(Dd::ONE.sub(self).lgamma().exp()))
        }
    }
}

fn libm_ldexp(x: f64, k: i32) -> f64 {
    // split the scale to stay in range for denormal-adjacent intermediates
    if k.abs() <= 1000 {
        x * f64::powi(2.0, k)
    } else {
        let h = k / 2;
        x * f64::powi(2.0, h) * f64::powi(2.0, k - h)
    }
}

pub(crate) fn dd_pi() -> Dd {
    PI
}

static LN2: Dd = Dd {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};

static PI: Dd = Dd {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};

static HALF_LN_2PI: LazyLock<Dd> = LazyLock::new(|| {
    // ln(2 pi)/2 computed in dd from ln 2 + ln pi
    let two_pi = PI.mul_f64(2.0);
    two_pi.ln().mul_f64(0.5)
});

/// Stirling coefficients B_{2k} / (2k (2k-1)), k = 1..=13, as exact ratios.
static STIRLING: LazyLock<[Dd; 13]> = LazyLock::new(|| {
    let r = |num: f64, den: f64| Dd::from_f64(num).div(Dd::from_f64(den));
    [
        r(1.0, 12.0),                       // B2/(2*1)
        r(-1.0, 360.0),                     // B4/(4*3)
        r(1.0, 1260.0),                     // B6/(6*5)
        r(-1.0, 1680.0),                    // B8/(8*7)
        r(1.0, 1188.0),                     // B10/(10*9)
        r(-691.0, 360360.0),                // B12/(12*11)
        r(1.0, 156.0),                      // B14/(14*13)
        r(-3617.0, 122400.0),               // B16/(16*15)
        r(43867.0, 244188.0),               // B18/(18*17)
        r(-174611.0, 125400.0),             // B20/(20*19)
        r(77683.0, 5796.0),                 // B22/(22*21)
        r(-236364091.0, 1506960.0),         // B24/(24*23)
        r(657931.0, 300.0),                 // B26/(26*25)
    ]
});

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let a = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let b = a.mul_f64(3.0);
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
        let c = a.add(a).add(a).sub(Dd::ONE);
        assert!(c.to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[1e-3, 0.1, 1.0, 3.5, 20.0, 100.0, 650.0] {
            let d = Dd::from_f64(x);
            let r = d.exp().ln().sub(d);
            assert!(r.to_f64().abs() < 1e-28 * x.max(1.0), "x={x} err={}", r.to_f64());
        }
    }

    #[test]
    fn exp_matches_f64() {
        for &x in &[-30.0, -1.0, 0.0, 0.5, 10.0, 300.0] {
            let e = Dd::from_f64(x).exp().to_f64();
            assert!((e - x.exp()).abs() <= 4.0 * f64::EPSILON * x.exp(), "x={x}");
        }
    }

    #[test]
    fn lgamma_known_values() {
        // Gamma(0.5) = sqrt(pi)
        let g = Dd::from_f64(0.5).lgamma().exp().to_f64();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        // Gamma(11) = 10!
        let g = Dd::from_f64(11.0).lgamma().exp().to_f64();
        assert!((g - 3628800.0).abs() / 3628800.0 < 1e-14);
        // large-argument agreement with the f64 implementation
        for &x in &[0.3f64, 2.7, 25.0, 171.0, 900.0] {
            let lg = Dd::from_f64(x).lgamma().to_f64();
            let reference = statrs::function::gamma::ln_gamma(x);
            assert!(
                (lg - reference).abs() <= 4e-14 * reference.abs().max(1.0),
                "x={x}: dd={lg} statrs={reference}"
            );
        }
    }

    #[test]
    fn gamma_reflection_negative() {
        // Gamma(-0.5) = -2 sqrt(pi)
        let g = Dd::from_f64(-0.5).gamma().to_f64();
        assert!((g + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // Gamma(-1.5) = 4 sqrt(pi) / 3
        let g = Dd::from_f64(-1.5).gamma().to_f64();
        assert!((g - 4.0 * std::f64::consts::PI.sqrt() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sin_pi_values() {
        assert!(Dd::from_f64(1.0).sin_pi().to_f64().abs() < 1e-30);
        assert!((Dd::from_f64(0.5).sin_pi().to_f64() - 1.0).abs() < 1e-30);
        let s = Dd::from_f64(10.25).sin_pi().to_f64();
        assert!((s - (std::f64::consts::PI * 0.25).sin()).abs() < 1e-15);
        let s = Dd::from_f64(-3.3).sin_pi().to_f64();
        assert!((s - (std::f64::consts::PI * -3.3).sin()).abs() < 1e-14);
    }
}
