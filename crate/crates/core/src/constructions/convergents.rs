//! Continued-fraction convergents of square roots.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

/// Convergents `p_k / q_k` of `sqrt(n)` for a non-square `n`, in order.
pub fn sqrt_convergents(n: u64) -> impl Iterator<Item = (BigInt, BigInt)> {
    let a0 = n.sqrt();
    assert!(a0 * a0 != n, "sqrt_convergents needs a non-square");
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (mut p0, mut p1) = (BigInt::one(), BigInt::from(a0));
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            return Some((p1.clone(), q1.clone()));
        }
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        (p0, p1) = (p1.clone(), p2);
        (q0, q1) = (q1.clone(), q2);
        Some((p1.clone(), q1.clone()))
    })
}

/// First convergent of `sqrt(2)` with denominator at least `min_den`.
pub fn sqrt2_convergent(min_den: u64) -> (BigInt, BigInt) {
    let bound = BigInt::from(min_den);
    sqrt_convergents(2).find(|(_, q)| q >= &bound).expect("convergents are unbounded")
}
