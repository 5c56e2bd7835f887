//! Exact integer and rational number-theory primitives: deterministic
//! factorization at desk scale, Jacobi symbols, p-adic valuations and
//! square roots with explicit precision tracking.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_BOUND as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2usize;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=limit).filter(|&n| sieve[n]).map(|n| n as u64).collect()
    })
}

fn mul_mod_u128(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        (a % n) * (b % n) % n
    } else {
        // Russian-peasant product; only reached above 64 bits.
        let mut a = a % n;
        let mut b = b % n;
        let mut acc: u128 = 0;
        while b > 0 {
            if b & 1 == 1 {
                acc = (acc + a) % n;
            }
            a = (a + a) % n;
            b >>= 1;
        }
        acc
    }
}

fn pow_mod_u128(mut base: u128, mut exp: u128, n: u128) -> u128 {
    let mut acc: u128 = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, n);
        }
        base = mul_mod_u128(base, base, n);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_witness(n: u128, a: u128) -> bool {
    // Returns true if `a` witnesses compositeness of odd n > 2.
    let a = a % n;
    if a == 0 {
        return false;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mul_mod_u128(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Deterministic primality for n < 3.3e24 (first twelve prime bases); above
/// that, forty additional deterministic pseudo-random bases are used.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    for &a in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if miller_rabin_witness(n, a) {
            return false;
        }
    }
    if n < 3_317_044_064_679_887_385_961_981 {
        return true;
    }
    let mut a: u128 = 41;
    for i in 0..40u128 {
        if miller_rabin_witness(n, a.wrapping_add(i * 97) | 1) {
            return false;
        }
        a = a.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    }
    true
}

/// Primality for arbitrary-size inputs; exact below 128 bits, forty
/// Miller-Rabin rounds beyond.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u128() {
        return is_prime_u128(v);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'base: for i in 0..40u64 {
        let a = BigUint::from(2u64 + 31 * i) % (n - 3u32) + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u128) -> u128 {
    // n odd composite, not a prime power of a small prime.
    let mut c: u128 = 1;
    loop {
        let mut x: u128 = 2;
        let mut y: u128 = 2;
        let mut d: u128 = 1;
        let f = |v: u128| (mul_mod_u128(v, v, n) + c) % n;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
            count += 1;
            if count > 50_000_000 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A signed factorization: `sign * prod p_i^e_i` with strictly increasing
/// primes, every prime certified by `is_prime`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let m = BigInt::from(acc);
        if self.sign < 0 {
            -m
        } else {
            m
        }
    }

    /// Prime factors, smallest first.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

fn factor_u128_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    // Perfect squares defeat the rho cycle; peel them first.
    let r = integer_sqrt_u128(n);
    if r * r == n {
        factor_u128_into(r, out);
        factor_u128_into(r, out);
        return;
    }
    let d = pollard_brent(n);
    factor_u128_into(d, out);
    factor_u128_into(n / d, out);
}

fn integer_sqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map(|s| s <= n).unwrap_or(false) {
        x += 1;
    }
    x
}

/// Exact prime factorization of a nonzero integer. Trial division to 10^6,
/// then Miller-Rabin plus Brent-cycle Pollard rho.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("factorize: input must be nonzero".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }
    if !rest.is_one() {
        if let Some(v) = rest.to_u128() {
            let mut ps: Vec<u128> = Vec::new();
            factor_u128_into(v, &mut ps);
            ps.sort_unstable();
            let mut i = 0;
            while i < ps.len() {
                let mut j = i;
                while j < ps.len() && ps[j] == ps[i] {
                    j += 1;
                }
                factors.push((BigUint::from(ps[i]), (j - i) as u32));
                i = j;
            }
        } else if is_prime(&rest) {
            factors.push((rest, 1));
        } else {
            return Err(Error::Internal(
                "factorize: composite cofactor beyond 128 bits".into(),
            ));
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

/// Jacobi symbol (a|n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::InvalidArgument(
            "jacobi: modulus must be odd and positive".into(),
        ));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t: i8 = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u8().unwrap() == 3 && (&n % 4u32).to_u8().unwrap() == 3 {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Convenience wrapper for machine-sized arguments.
pub fn jacobi_i64(a: i64, n: u64) -> Result<i8> {
    jacobi(&BigInt::from(a), &BigInt::from(n))
}

/// v_p of a nonzero integer.
pub fn valuation_int(p: u64, n: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("valuation of zero is infinite".into()));
    }
    if p < 2 {
        return Err(Error::InvalidArgument("valuation: p must be at least 2".into()));
    }
    let pb = BigInt::from(p);
    let mut v = 0u32;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if r.is_zero() {
            rest = q;
            v += 1;
        } else {
            return Ok(v);
        }
    }
}

/// v_p of a nonzero rational: v_p(numerator) - v_p(denominator).
pub fn valuation(p: u64, q: &BigRational) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("valuation of zero is infinite".into()));
    }
    let vn = valuation_int(p, q.numer())? as i64;
    let vd = valuation_int(p, q.denom())? as i64;
    Ok(vn - vd)
}

/// Splits n = s^2 * W with W squarefree and s maximal positive.
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigUint, BigInt)> {
    let f = factorize(n)?;
    let mut s = BigUint::one();
    let mut w = BigUint::one();
    for (p, e) in &f.factors {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            w *= p;
        }
    }
    let w = BigInt::from_biguint(if f.sign < 0 { Sign::Minus } else { Sign::Plus }, w);
    Ok((s, w))
}

/// True when |n| has no repeated prime factor.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    let (s, _) = squarefree_decompose(n)?;
    Ok(s.is_one())
}

/// A residue modulo p^k with the precision carried explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicInt {
    prime: u64,
    precision: u32,
    residue: BigUint,
}

impl PAdicInt {
    pub fn new(prime: u64, precision: u32, value: &BigInt) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let modulus = BigInt::from(prime).pow(precision);
        let residue = value.mod_floor(&modulus).to_biguint().unwrap();
        Ok(PAdicInt { prime, precision, residue })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::InvalidArgument(
                "p-adic operands have different primes".into(),
            ));
        }
        Ok(())
    }

    fn at_precision(&self, k: u32) -> Self {
        let residue = &self.residue % BigUint::from(self.prime).pow(k);
        PAdicInt { prime: self.prime, precision: k, residue }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let k = self.precision.min(other.precision);
        let m = BigUint::from(self.prime).pow(k);
        let r = (&self.residue + &other.residue) % &m;
        Ok(PAdicInt { prime: self.prime, precision: k, residue: r })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let k = self.precision.min(other.precision);
        let m = BigUint::from(self.prime).pow(k);
        let r = (&m + &self.residue % &m + &m - &other.residue % &m) % &m;
        Ok(PAdicInt { prime: self.prime, precision: k, residue: r })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let k = self.precision.min(other.precision);
        let m = BigUint::from(self.prime).pow(k);
        let r = (&self.residue * &other.residue) % &m;
        Ok(PAdicInt { prime: self.prime, precision: k, residue: r })
    }

    /// v_p of the residue, or None when the residue vanishes at this
    /// precision (the valuation is then only bounded below by it).
    pub fn valuation(&self) -> Option<u32> {
        if self.residue.is_zero() {
            return None;
        }
        let p = BigUint::from(self.prime);
        let mut v = 0u32;
        let mut r = self.residue.clone();
        while (&r % &p).is_zero() {
            r /= &p;
            v += 1;
        }
        Some(v)
    }

    /// Splits into p^v * unit; the unit keeps precision k - v.
    pub fn unit_part(&self) -> Result<(u32, PAdicInt)> {
        let v = self
            .valuation()
            .ok_or(Error::PrecisionExhausted(self.precision))?;
        if v >= self.precision {
            return Err(Error::PrecisionUnderflow);
        }
        let unit = &self.residue / BigUint::from(self.prime).pow(v);
        Ok((
            v,
            PAdicInt {
                prime: self.prime,
                precision: self.precision - v,
                residue: unit % BigUint::from(self.prime).pow(self.precision - v),
            },
        ))
    }

    /// Division, defined when the divisor valuation does not exceed the
    /// dividend's; precision shrinks by the divisor valuation.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (vd, du) = other.unit_part()?;
        let k = self.precision.min(other.precision);
        let this = self.at_precision(k);
        if vd == 0 {
            let m = BigUint::from(self.prime).pow(k);
            let inv = mod_inverse(&BigInt::from(du.at_precision(k).residue), &BigInt::from(m.clone()))
                .ok_or_else(|| Error::Internal("unit has no inverse".into()))?;
            let r = (&this.residue * inv.to_biguint().unwrap()) % &m;
            return Ok(PAdicInt { prime: self.prime, precision: k, residue: r });
        }
        let vn = this.valuation().ok_or(Error::PrecisionExhausted(k))?;
        if vn < vd {
            return Err(Error::InvalidArgument(
                "p-adic division with negative valuation result".into(),
            ));
        }
        if k - vd == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let shifted = PAdicInt {
            prime: self.prime,
            precision: k - vd,
            residue: (&this.residue / BigUint::from(self.prime).pow(vd))
                % BigUint::from(self.prime).pow(k - vd),
        };
        let dunit = du.at_precision(k - vd);
        shifted.div(&dunit)
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.residue.clone())
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    // Square root mod an odd prime p, a not divisible by p.
    let a = (a % p) as u128;
    let p128 = p as u128;
    if p == 2 {
        return Some(a as u64);
    }
    if pow_mod_u128(a, (p128 - 1) / 2, p128) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod_u128(a, (p128 + 1) / 4, p128) as u64);
    }
    let mut q = p128 - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z: u128 = 2;
    while pow_mod_u128(z, (p128 - 1) / 2, p128) == 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u128(z, q, p128);
    let mut t = pow_mod_u128(a, q, p128);
    let mut r = pow_mod_u128(a, (q + 1) / 2, p128);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod_u128(t2, t2, p128);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = pow_mod_u128(c, 1 << (m - i - 1), p128);
        m = i;
        c = mul_mod_u128(b, b, p128);
        t = mul_mod_u128(t, c, p128);
        r = mul_mod_u128(r, b, p128);
    }
    Some(r as u64)
}

/// Square root of a modulo p^k for odd p with p not dividing a, Hensel-lifted
/// from a Tonelli-Shanks root. Canonical choice: the root whose least residue
/// mod p is even. Returns None when a is a non-residue.
pub fn sqrt_mod_prime_power(a: &BigInt, p: u64, k: u32) -> Result<Option<PAdicInt>> {
    if p == 2 || p % 2 == 0 {
        return Err(Error::InvalidArgument(
            "sqrt_mod_prime_power: p must be an odd prime".into(),
        ));
    }
    if k == 0 {
        return Err(Error::PrecisionUnderflow);
    }
    let a_mod_p = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if a_mod_p == 0 {
        return Err(Error::InvalidArgument(
            "sqrt_mod_prime_power: a must be a unit mod p".into(),
        ));
    }
    let r0 = match tonelli_shanks(a_mod_p, p) {
        Some(r) => r,
        None => return Ok(None),
    };
    let pk = BigInt::from(p).pow(k);
    let a_mod = a.mod_floor(&pk);
    let mut prec = 1u32;
    let mut root = BigInt::from(r0);
    while prec < k {
        prec = (prec * 2).min(k);
        let m = BigInt::from(p).pow(prec);
        let two_r = 2 * &root;
        let inv = mod_inverse(&two_r, &m)
            .ok_or_else(|| Error::Internal("hensel: derivative not invertible".into()))?;
        let fx = (&root * &root - &a_mod).mod_floor(&m);
        root = (&root - fx * inv).mod_floor(&m);
    }
    // Pick the lift whose least residue mod p is even.
    let other = (&pk - &root).mod_floor(&pk);
    let r_mod_p = root.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let chosen = if r_mod_p % 2 == 0 { root } else { other };
    debug_assert!((&chosen * &chosen - &a_mod).mod_floor(&pk).is_zero());
    Ok(Some(PAdicInt::new(p, k, &chosen)?))
}

/// Square root of w = 1 (mod 8) modulo 2^k, k >= 3. Among the four roots the
/// canonical one is the smallest that is 1 (mod 4).
pub fn sqrt_2adic(w: &BigInt, k: u32) -> Result<PAdicInt> {
    if w.mod_floor(&BigInt::from(8)).to_u8().unwrap() != 1 {
        return Err(Error::InvalidArgument(
            "sqrt_2adic: w must be 1 mod 8".into(),
        ));
    }
    if k < 3 {
        return Err(Error::InvalidArgument("sqrt_2adic: precision must be at least 3".into()));
    }
    let root = lift_sqrt_2adic(w, &BigInt::one(), 3, k)?;
    let m = BigInt::one() << k;
    let w_mod = w.mod_floor(&m);
    let half = BigInt::one() << (k - 1);
    let mut candidates = vec![
        root.clone(),
        (&m - &root).mod_floor(&m),
        (&root + &half).mod_floor(&m),
        (&m - &root + &half).mod_floor(&m),
    ];
    candidates.retain(|r| r.mod_floor(&BigInt::from(4)).to_u8().unwrap() == 1);
    candidates.sort();
    let chosen = candidates
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal("sqrt_2adic: no canonical root".into()))?;
    debug_assert!((&chosen * &chosen - &w_mod).mod_floor(&m).is_zero());
    PAdicInt::new(2, k, &chosen)
}

/// Hensel lift at 2 from a seed root valid mod 2^seed_k up to 2^k. All
/// adjustments are multiples of 2^(seed_k - 1), so the seed's residue class
/// mod 2^(seed_k - 1) is preserved.
pub fn lift_sqrt_2adic(w: &BigInt, seed: &BigInt, seed_k: u32, k: u32) -> Result<BigInt> {
    if seed_k < 3 {
        return Err(Error::InvalidArgument("lift_sqrt_2adic: seed precision too small".into()));
    }
    let target = BigInt::one() << k;
    let w_mod = w.mod_floor(&target);
    let seed_m = BigInt::one() << seed_k;
    if !(&(seed * seed) - w).mod_floor(&seed_m).is_zero() {
        return Err(Error::InvalidArgument("lift_sqrt_2adic: seed is not a root".into()));
    }
    let mut r = seed.mod_floor(&target);
    let mut j = seed_k;
    while j < k {
        let m_next = BigInt::one() << (j + 1);
        if !(&(&r * &r) - &w_mod).mod_floor(&m_next).is_zero() {
            r += BigInt::one() << (j - 1);
            r = r.mod_floor(&target);
        }
        j += 1;
    }
    debug_assert!((&(&r * &r) - &w_mod).mod_floor(&target).is_zero());
    Ok(r)
}

/// gcd of a slice of integers (non-negative result).
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}
