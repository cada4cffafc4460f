//! Modular arithmetic helpers shared by every other module.

use num_integer::gcd;

/// Canonical representative of `x` modulo `m` in `[0, m)`.
pub fn reduce(x: i64, m: u32) -> u32 {
    let m = i64::from(m);
    (x.rem_euclid(m)) as u32
}

/// `a * b mod m` without overflow for any `u64` inputs.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller-Rabin for `u64`.
///
/// The base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is a proven
/// witness set for the full 64-bit range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[2, bound]`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// The units of ℤ/mℤ in increasing order.
pub fn units(m: u32) -> Vec<u32> {
    (1..m).filter(|&t| gcd(t, m) == 1).collect()
}

/// Whether `a` generates the (cyclic) unit group of ℤ/nℤ for `n` prime or
/// an odd prime power. `group_order` must be φ(n).
fn generates(a: u64, n: u64, group_order: u64, order_factors: &[(u64, u32)]) -> bool {
    if gcd(a, n) != 1 {
        return false;
    }
    order_factors
        .iter()
        .all(|&(f, _)| pow_mod(a, group_order / f, n) != 1)
}

/// Smallest primitive root modulo an odd prime `q`.
pub fn primitive_root_mod_prime(q: u64) -> u64 {
    debug_assert!(is_prime(q) && q > 2);
    let order = q - 1;
    let factors = factorize(order);
    (2..q)
        .find(|&a| generates(a, q, order, &factors))
        .expect("every prime has a primitive root")
}

/// Smallest generator of the unit group modulo `p²`, `p` an odd prime.
pub fn primitive_root_mod_p2(p: u32) -> u32 {
    debug_assert!(is_prime(u64::from(p)) && p > 2);
    let n = u64::from(p) * u64::from(p);
    let order = u64::from(p) * u64::from(p - 1);
    let factors = factorize(order);
    (2..n)
        .find(|&a| generates(a, n, order, &factors))
        .expect("unit group mod p^2 is cyclic") as u32
}

/// Whether `a` generates the unit group modulo `p²`.
pub fn is_generator_mod_p2(p: u32, a: u32) -> bool {
    let n = u64::from(p) * u64::from(p);
    let order = u64::from(p) * u64::from(p - 1);
    generates(u64::from(a % (p * p)), n, order, &factorize(order))
}

/// Discrete logarithm table base `a` in the unit group modulo `p²`:
/// `table[u] = k` with `a^k ≡ u`, and `u32::MAX` on non-units.
pub fn dlog_table_mod_p2(p: u32, a: u32) -> Vec<u32> {
    assert!(is_generator_mod_p2(p, a), "{a} does not generate mod {p}^2");
    let n = (p * p) as usize;
    let mut table = vec![u32::MAX; n];
    let mut acc = 1u64;
    let order = u64::from(p) * u64::from(p - 1);
    for k in 0..order {
        table[acc as usize] = k as u32;
        acc = acc * u64::from(a) % n as u64;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_is_canonical() {
        assert_eq!(reduce(-3, 9), 6);
        assert_eq!(reduce(14, 25), 14);
        assert_eq!(reduce(50, 25), 0);
        assert_eq!(reduce(-50, 25), 0);
    }

    #[test]
    fn pow_mod_matches_naive() {
        for m in [3u64, 9, 25, 97] {
            for b in 0..m {
                let mut acc = 1u64;
                for e in 0..12u64 {
                    assert_eq!(pow_mod(b, e, m), acc);
                    acc = acc * b % m;
                }
            }
        }
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let primes = primes_up_to(2000);
        let set: std::collections::HashSet<u64> = primes.iter().copied().collect();
        for n in 0..2000u64 {
            assert_eq!(is_prime(n), set.contains(&n), "n = {n}");
        }
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn factorization_round_trips() {
        for n in 1..5000u64 {
            let f = factorize(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            for &(p, _) in &f {
                assert!(is_prime(p));
            }
        }
    }

    #[test]
    fn totient_small_values() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(25), 20);
        assert_eq!(euler_phi(49), 42);
        assert_eq!(euler_phi(1), 1);
        for m in 2..200u64 {
            assert_eq!(euler_phi(m), units(m as u32).len() as u64);
        }
    }

    #[test]
    fn primitive_roots_have_full_order() {
        for p in [3u32, 5, 7, 11, 13] {
            let a = primitive_root_mod_p2(p);
            assert!(is_generator_mod_p2(p, a));
            let n = u64::from(p * p);
            let order = euler_phi(n);
            for (f, _) in factorize(order) {
                assert_ne!(pow_mod(u64::from(a), order / f, n), 1);
            }
        }
        assert_eq!(primitive_root_mod_p2(3), 2);
        assert_eq!(primitive_root_mod_p2(5), 2);
        assert_eq!(primitive_root_mod_p2(7), 3);
        assert_eq!(primitive_root_mod_p2(11), 2);
        assert_eq!(primitive_root_mod_p2(13), 2);
    }

    #[test]
    fn prime_field_roots_generate() {
        for q in primes_up_to(500).into_iter().filter(|&q| q > 2) {
            let g = primitive_root_mod_prime(q);
            let mut seen = vec![false; q as usize];
            let mut acc = 1u64;
            for _ in 0..q - 1 {
                seen[acc as usize] = true;
                acc = acc * g % q;
            }
            assert!((1..q).all(|x| seen[x as usize]));
        }
    }

    #[test]
    fn dlog_table_inverts_powers() {
        let table = dlog_table_mod_p2(5, 2);
        let order = 20u64;
        for k in 0..order {
            let u = pow_mod(2, k, 25);
            assert_eq!(table[u as usize], k as u32);
        }
        assert_eq!(table[0], u32::MAX);
        assert_eq!(table[5], u32::MAX);
        assert_eq!(table[10], u32::MAX);
    }
}
