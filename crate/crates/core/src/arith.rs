//! Small integer helpers: primality, factorization, modular arithmetic, `n_π`.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n` in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in `n` (`n >= 1`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// The largest divisor of `n` whose prime factors all lie in `primes`.
pub fn pi_part(n: u64, primes: &[u64]) -> u64 {
    assert!(n >= 1, "pi_part needs n >= 1");
    let mut out = 1;
    for &p in primes {
        if p < 2 {
            continue;
        }
        let mut m = n;
        while m % p == 0 {
            m /= p;
            out *= p;
        }
    }
    out
}

/// `n_{π'}`: the part of `n` coprime to every prime in `primes`.
pub fn pi_complement_part(n: u64, primes: &[u64]) -> u64 {
    n / pi_part(n, primes)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo prime `q` (`a != 0`).
pub fn mult_order(a: u64, q: u64) -> u64 {
    let n = q - 1;
    let mut ord = n;
    for p in prime_divisors(n) {
        while ord % p == 0 && pow_mod(a, ord / p, q) == 1 {
            ord /= p;
        }
    }
    ord
}
