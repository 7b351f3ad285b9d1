//! Multiplicative dependence of integers, i.e. rational dependence of their logarithms.

use num_rational::BigRational;

use super::KmsError;

/// Prime factorization of `n >= 1` as `(prime, exponent)` pairs, primes increasing.
pub fn prime_exponents(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `ln a / ln b` as a rational when it is one, i.e. when `a` and `b` are
/// powers of a common integer. `a = 1` gives zero.
pub fn log_ratio(a: u64, b: u64) -> Option<BigRational> {
    if b < 2 || a == 0 {
        return None;
    }
    if a == 1 {
        return Some(BigRational::from_integer(0.into()));
    }
    let pa = prime_exponents(a);
    let pb = prime_exponents(b);
    if pa.len() != pb.len() || pa.iter().zip(&pb).any(|(x, y)| x.0 != y.0) {
        return None;
    }
    let ratio = BigRational::new(pa[0].1.into(), pb[0].1.into());
    pa.iter()
        .zip(&pb)
        .all(|(x, y)| BigRational::new(x.1.into(), y.1.into()) == ratio)
        .then_some(ratio)
}

/// True unless `d1 = m^p` and `d2 = m^q` for some integer `m >= 2`.
pub fn rationally_independent(d1: u64, d2: u64) -> Result<bool, KmsError> {
    if d1 < 2 || d2 < 2 {
        return Err(KmsError::InvalidArgument(format!(
            "rational independence needs both integers >= 2, got ({d1}, {d2})"
        )));
    }
    Ok(log_ratio(d1, d2).is_none())
}
