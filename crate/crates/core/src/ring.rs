//! The base ring Z/n and residue arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus. Products of two residues stay below 2^62.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// The ring Z/n together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    modulus: u64,
    factorization: Vec<(u64, u32)>,
}

impl RingSpec {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(RingSpec {
            modulus,
            factorization: factorize(modulus),
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Prime factors with exponents, primes ascending.
    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn is_local(&self) -> bool {
        self.factorization.len() == 1
    }

    /// `p^k` where `p^k` exactly divides `n`, or 1 if `p` does not divide `n`.
    pub fn local_factor(&self, p: u64) -> u64 {
        self.factorization
            .iter()
            .find(|(q, _)| *q == p)
            .map(|&(q, k)| q.pow(k))
            .unwrap_or(1)
    }

    /// All positive divisors of `n`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, k) in &self.factorization {
            let prev = out.clone();
            let mut pe = 1;
            for _ in 0..k {
                pe *= p;
                out.extend(prev.iter().map(|d| d * pe));
            }
        }
        out.sort_unstable();
        out
    }

    /// The prime-power divisors `p^e > 1` of `n`, ordered by `(p, e)`.
    pub fn prime_power_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &(p, k) in &self.factorization {
            let mut pe = 1;
            for _ in 0..k {
                pe *= p;
                out.push(pe);
            }
        }
        out
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.modulus
    }

    #[inline]
    pub fn reduce_signed(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.modulus) * (b % self.modulus) % self.modulus
    }

    /// `gcd(a, n)`, with `gcd(0, n) = n`.
    #[inline]
    pub fn ideal_generator(&self, a: u64) -> u64 {
        gcd(a % self.modulus, self.modulus)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.ideal_generator(a) == 1
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let (g, x, _) = xgcd(a as i64 % self.modulus as i64, self.modulus as i64);
        (g == 1).then(|| self.reduce_signed(x))
    }

    /// A unit `u` with `u * a = gcd(a, n)` modulo `n`.
    pub fn normalizing_unit(&self, a: u64) -> u64 {
        let a = a % self.modulus;
        if a == 0 {
            return 1;
        }
        let g = gcd(a, self.modulus);
        let n_red = self.modulus / g;
        let (_, x, _) = xgcd((a / g) as i64, n_red as i64);
        let base = (x.rem_euclid(n_red as i64)) as u64;
        // base is correct modulo n/g; shift by multiples of n/g until it is a unit mod n.
        let mut u = base;
        while gcd(u, self.modulus) != 1 {
            u += n_red;
        }
        u % self.modulus
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid on non-negative inputs: returns `(g, x, y)` with `a x + b y = g`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits `d` into its prime-power parts, primes ascending.
pub fn prime_power_parts(d: u64) -> Vec<u64> {
    factorize(d).into_iter().map(|(p, k)| p.pow(k)).collect()
}

/// The prime of a prime power `q > 1`.
pub fn prime_of(q: u64) -> u64 {
    factorize(q)[0].0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_multiplies_back() {
        for n in 2..500u64 {
            let r = RingSpec::new(n).unwrap();
            let prod: u64 = r.factorization().iter().map(|&(p, k)| p.pow(k)).product();
            assert_eq!(prod, n);
            assert!(r.factorization().windows(2).all(|w| w[0].0 < w[1].0));
            assert_eq!(r.is_local(), r.factorization().len() == 1);
        }
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(RingSpec::new(1).is_err());
        assert!(RingSpec::new(0).is_err());
        assert!(RingSpec::new(MAX_MODULUS + 1).is_err());
        assert!(RingSpec::new(MAX_MODULUS).is_ok());
    }

    #[test]
    fn normalizing_unit_hits_gcd() {
        for n in [4u64, 6, 8, 9, 12, 30, 36] {
            let r = RingSpec::new(n).unwrap();
            for a in 1..n {
                let u = r.normalizing_unit(a);
                assert!(r.is_unit(u), "n={n} a={a} u={u}");
                assert_eq!(r.mul(u, a), gcd(a, n));
            }
        }
    }

    #[test]
    fn divisors_of_twelve() {
        let r = RingSpec::new(12).unwrap();
        assert_eq!(r.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(r.prime_power_divisors(), vec![2, 4, 3]);
        assert_eq!(prime_power_parts(12), vec![4, 3]);
    }
}
