//! Exact convolution of non-negative integer vectors via a number-theoretic
//! transform over the prime `p = 2^64 - 2^32 + 1`.
//!
//! Results are exact whenever every true output coefficient is below `p`.

const P: u64 = 0xFFFF_FFFF_0000_0001;
const EPSILON: u64 = 0xFFFF_FFFF; // 2^64 mod p
const GENERATOR: u64 = 7;
const TWO_ADICITY: u32 = 32;

#[inline]
fn reduce128(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (mut res, carry) = t0.overflowing_add(t1);
    if carry {
        res = res.wrapping_add(EPSILON);
    }
    if res >= P {
        res - P
    } else {
        res
    }
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let (s, over) = a.overflowing_add(b);
    let (s2, under) = s.overflowing_sub(P);
    if over || !under {
        s2
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(P)
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn transform(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let log_n = n.trailing_zeros();
    assert!(log_n <= TWO_ADICITY, "transform length exceeds 2^32");

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let mut w_len = pow(GENERATOR, (P - 1) / len as u64);
        if invert {
            w_len = pow(w_len, P - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = mul(w, w_len);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = mul(*v, tw);
                let x = *u;
                *u = add(x, t);
                *v = sub(x, t);
            }
        }
        len <<= 1;
    }

    if invert {
        let inv_n = pow(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = mul(*x, inv_n);
        }
    }
}

/// Length-`len` forward transform of `a`, zero-padded.
pub(crate) fn forward(a: &[u64], len: usize) -> Vec<u64> {
    let mut buf = vec![0u64; len];
    buf[..a.len()].copy_from_slice(a);
    transform(&mut buf, false);
    buf
}

/// Inverse transform in place.
pub(crate) fn inverse(buf: &mut [u64]) {
    transform(buf, true);
}

/// Pointwise product of two transformed vectors.
pub(crate) fn pointwise(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| mul(x, y)).collect()
}

/// Pointwise `a * b + c * d`.
pub(crate) fn pointwise_sum2(a: &[u64], b: &[u64], c: &[u64], d: &[u64]) -> Vec<u64> {
    (0..a.len()).map(|k| add(mul(a[k], b[k]), mul(c[k], d[k]))).collect()
}

/// Transform length sufficient for the linear convolution of the inputs.
pub(crate) fn conv_len(a: usize, b: usize) -> usize {
    (a + b - 1).next_power_of_two()
}

/// Linear convolution; exact while all output coefficients are below `2^63`.
pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = conv_len(a.len(), b.len());
    let fa = forward(a, len);
    let fb = forward(b, len);
    let mut c = pointwise(&fa, &fb);
    inverse(&mut c);
    c.truncate(a.len() + b.len() - 1);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn reduction_matches_u128_modulo() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = rng.gen::<u64>() % P;
            let b = rng.gen::<u64>() % P;
            assert_eq!(mul(a, b) as u128, (a as u128 * b as u128) % P as u128);
            assert_eq!(add(a, b) as u128, (a as u128 + b as u128) % P as u128);
            assert_eq!(sub(a, b) as u128, (a as u128 + P as u128 - b as u128) % P as u128);
        }
        for x in [0u128, P as u128, u128::MAX, (P as u128) * (P as u128 - 1)] {
            assert_eq!(reduce128(x) as u128, x % P as u128);
        }
    }

    #[test]
    fn root_of_unity_has_full_order() {
        let w = pow(GENERATOR, (P - 1) >> TWO_ADICITY);
        assert_eq!(pow(w, 1 << TWO_ADICITY), 1);
        assert_ne!(pow(w, 1 << (TWO_ADICITY - 1)), 1);
    }

    #[test]
    fn matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let la = rng.gen_range(1..200);
            let lb = rng.gen_range(1..200);
            let a: Vec<u64> = (0..la).map(|_| rng.gen_range(0..1_000_000)).collect();
            let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(0..1_000_000)).collect();
            assert_eq!(convolve(&a, &b), schoolbook(&a, &b));
        }
    }
}
