//! Exact rationals over `i128`.
//!
//! Hull values are linear interpolations between integer points, so every
//! quantity the convolution kernels compare is a rational with a denominator
//! no larger than a segment length. Comparisons never normalize: two-term
//! comparisons cross-multiply, and sums are compared by splitting each term
//! into its floor and a fractional remainder so that intermediate products
//! stay inside 128 bits.

use std::cmp::Ordering;
use std::fmt;

/// Largest denominator accepted by [`cmp_sums`] and [`floor_sum`].
pub const MAX_DEN: i128 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational with zero denominator");
        if den < 0 {
            Rational { num: -num, den: -den }
        } else {
            Rational { num, den }
        }
    }

    pub fn from_int(v: i64) -> Self {
        Rational { num: v as i128, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }

    pub fn ceil(&self) -> i128 {
        -(-self.num).div_euclid(self.den)
    }

    pub fn is_integer(&self) -> bool {
        self.num.rem_euclid(self.den) == 0
    }

    pub fn neg(&self) -> Self {
        Rational { num: -self.num, den: self.den }
    }

    /// Multiplication by an integer; keeps the denominator.
    pub fn scale(&self, k: i128) -> Self {
        Rational { num: self.num.checked_mul(k).expect("rational scale overflow"), den: self.den }
    }

    /// Reduced form, mainly for display and equality in tests.
    pub fn reduced(&self) -> Self {
        let g = gcd(self.num.unsigned_abs(), self.den as u128) as i128;
        if g <= 1 {
            *self
        } else {
            Rational { num: self.num / g, den: self.den / g }
        }
    }

    /// Exact sum; `None` on overflow.
    pub fn checked_add(&self, other: &Rational) -> Option<Rational> {
        let g = gcd(self.den as u128, other.den as u128) as i128;
        let lhs_scale = other.den / g;
        let rhs_scale = self.den / g;
        let num = self
            .num
            .checked_mul(lhs_scale)?
            .checked_add(other.num.checked_mul(rhs_scale)?)?;
        let den = self.den.checked_mul(lhs_scale)?;
        Some(Rational::new(num, den).reduced())
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => cmp_sums(&[*self], &[*other]),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den == 1 {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, r.den)
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Accumulates `int + frac_num / frac_den` with `0 <= frac_num < frac_den`.
struct SplitSum {
    int: i128,
    frac_num: u128,
    frac_den: u128,
}

impl SplitSum {
    fn new() -> Self {
        SplitSum { int: 0, frac_num: 0, frac_den: 1 }
    }

    fn push(&mut self, r: &Rational) {
        assert!(r.den <= MAX_DEN, "denominator {} exceeds the supported bound", r.den);
        self.int += r.num.div_euclid(r.den);
        let rem = r.num.rem_euclid(r.den) as u128;
        if rem == 0 {
            return;
        }
        let d = r.den as u128;
        let g = gcd(self.frac_den, d);
        let lcm = self.frac_den / g * d;
        let num = self.frac_num * (lcm / self.frac_den) + rem * (lcm / d);
        let (mut num, mut den) = (num, lcm);
        if num >= den {
            num -= den;
            self.int += 1;
        }
        let g = gcd(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        self.frac_num = num;
        self.frac_den = den;
    }
}

fn split_sum(lhs: &[Rational], rhs: &[Rational]) -> SplitSum {
    let mut acc = SplitSum::new();
    for r in lhs {
        acc.push(r);
    }
    for r in rhs {
        acc.push(&r.neg());
    }
    acc
}

/// Compares `sum(lhs)` with `sum(rhs)` exactly.
///
/// Every denominator must be at most [`MAX_DEN`]; up to five terms in total
/// keep all intermediates below 2^127.
pub fn cmp_sums(lhs: &[Rational], rhs: &[Rational]) -> Ordering {
    // Cheap filter first: magnitudes are far below 2^100, so a comfortable
    // relative margin in f64 decides the sign.
    let mut approx = 0.0f64;
    let mut scale = 0.0f64;
    for r in lhs {
        let v = r.to_f64();
        approx += v;
        scale += v.abs();
    }
    for r in rhs {
        let v = r.to_f64();
        approx -= v;
        scale += v.abs();
    }
    let margin = scale * 1e-12 + 1e-9;
    if approx > margin {
        return Ordering::Greater;
    }
    if approx < -margin {
        return Ordering::Less;
    }
    let acc = split_sum(lhs, rhs);
    match acc.int.cmp(&0) {
        Ordering::Greater => Ordering::Greater,
        Ordering::Less => Ordering::Less,
        Ordering::Equal if acc.frac_num > 0 => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor(sum(terms))`, exactly.
pub fn floor_sum(terms: &[Rational]) -> i128 {
    split_sum(terms, &[]).int
}

/// Smallest integer `x >= 0` with `x * x * den >= num`, i.e. `ceil(sqrt(num / den))`.
pub fn ceil_sqrt_ratio(num: u128, den: u128) -> u128 {
    assert!(den > 0);
    let approx = ((num as f64) / (den as f64)).sqrt().ceil() as u128;
    let mut x = approx.saturating_sub(2);
    while x.checked_mul(x).and_then(|sq| sq.checked_mul(den)).is_some_and(|v| v < num) {
        x += 1;
    }
    while x > 0 && (x - 1) * (x - 1) * den >= num {
        x -= 1;
    }
    x
}
