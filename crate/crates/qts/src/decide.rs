//! Top-level decision procedures: whether an element of K, a rational
//! prime, or -1 is a sum of two squares, assembled from the per-place
//! certificates. The verdict is yes exactly when every certificate is +1;
//! every failed clause is reported, not just the first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kfield::{FieldParams, QuartElement};
use crate::localtests::{self, SymbolCertificate};
use crate::numth;
use crate::splitting::{self, SplitTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

/// The decomposition M = lambda^2 * P * Q * m with m a primitive integer
/// quadruple, P the product of the listed primes = 3 (mod 4) and Q of the
/// others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessing {
    pub lambda: BigRational,
    pub p_primes: Vec<u64>,
    pub q_primes: Vec<u64>,
    pub primitive_part: QuartElement,
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Verdict,
    pub certificates: Vec<SymbolCertificate>,
    pub preprocessing: Preprocessing,
    pub failed_conditions: Vec<String>,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

/// Extracts the largest rational square, then splits the remaining rational
/// content into primes = 3 (mod 4) and the rest, leaving a primitive
/// integer quadruple.
pub fn normalize(params: &FieldParams, m: &QuartElement) -> Result<Preprocessing> {
    if m.field_id() != params.id() {
        return Err(Error::MixedFields);
    }
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in m.coords() {
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    // content of the quadruple as a positive rational
    let content_nums: Vec<BigInt> = m
        .coords()
        .iter()
        .map(|c| (*c * BigRational::from(den_lcm.clone())).numer().clone())
        .collect();
    let g = numth::gcd_all(&content_nums);
    let content = BigRational::new(g, den_lcm);
    let inv = content.recip();
    let primitive = params.scalar_mul(&inv, m)?;
    debug_assert!(primitive.is_primitive());

    let mut lambda = BigRational::one();
    let mut p_primes = Vec::new();
    let mut q_primes = Vec::new();
    let mut push_part = |n: &BigInt, den: bool| -> Result<()> {
        if n.is_one() {
            return Ok(());
        }
        for (p, e) in numth::factorize(n)?.factors {
            let e = if den { -(e as i64) } else { e as i64 };
            let half = e.div_euclid(2);
            let odd = e.rem_euclid(2) == 1;
            let p_u64 = p
                .to_u64()
                .ok_or_else(|| Error::InvalidArgument("content prime beyond 64 bits".into()))?;
            let pr = BigRational::from(BigInt::from(p));
            if half >= 0 {
                lambda *= pr.pow(half as i32);
            } else {
                lambda /= pr.pow((-half) as i32);
            }
            if odd {
                if p_u64 % 4 == 3 {
                    p_primes.push(p_u64);
                } else {
                    q_primes.push(p_u64);
                }
            }
        }
        Ok(())
    };
    push_part(content.numer(), false)?;
    push_part(content.denom(), true)?;
    p_primes.sort_unstable();
    q_primes.sort_unstable();
    Ok(Preprocessing { lambda, p_primes, q_primes, primitive_part: primitive })
}

fn failed_clauses(
    params: &FieldParams,
    prep: &Preprocessing,
    certs: &[SymbolCertificate],
) -> Result<Vec<String>> {
    let n_abs = params.norm_abs(&prep.primitive_part)?;
    let mut out: Vec<String> = Vec::new();
    let mut push = |s: String| {
        if !out.contains(&s) {
            out.push(s);
        }
    };
    for c in certs.iter().filter(|c| c.value == -1) {
        match (c.place.kind.as_str(), c.place.p) {
            ("infinite", _) => push("total-positivity".into()),
            ("finite", Some(2)) => {
                let tag = c.place.splitting.clone().unwrap_or_default();
                push(format!("dyadic-{}", tag.to_lowercase()))
            }
            ("finite", Some(p)) => {
                let unit_at_p = numth::valuation(p, &n_abs)? == 0;
                if unit_at_p && prep.p_primes.contains(&p) {
                    push(format!("rational-prime-factor(p={p})"));
                } else {
                    let tag = c.place.splitting.clone().unwrap_or_default();
                    push(format!("odd-place(p={p},{tag})"));
                }
            }
            _ => push("unknown-place".into()),
        }
    }
    Ok(out)
}

/// Decides whether M is a sum of two squares in K, with full certificates.
pub fn is_sum_of_two_squares(params: &FieldParams, m: &QuartElement) -> Result<Decision> {
    is_sum_of_two_squares_with_precision(params, m, 16)
}

/// Same, with a caller-chosen starting dyadic precision (the engine
/// escalates on its own when the images vanish at the working precision).
pub fn is_sum_of_two_squares_with_precision(
    params: &FieldParams,
    m: &QuartElement,
    dyadic_precision: u32,
) -> Result<Decision> {
    let prep = normalize(params, m)?;
    let certs = localtests::evaluate_all(
        params,
        &prep.primitive_part,
        &prep.p_primes,
        dyadic_precision.max(8),
    )?;
    let failed = failed_clauses(params, &prep, &certs)?;
    let verdict = if certs.iter().all(|c| c.value == 1) {
        Verdict::Yes
    } else {
        Verdict::No
    };
    debug_assert_eq!(verdict == Verdict::Yes, failed.is_empty());
    Ok(Decision { verdict, certificates: certs, preprocessing: prep, failed_conditions: failed })
}

/// Whether the rational prime p is a sum of two squares in K: automatic
/// for p = 1, 2 (mod 4); for p = 3 (mod 4) exactly when neither the dyadic
/// place nor p itself is of split-split type.
pub fn prime_is_sum_of_two_squares(params: &FieldParams, p: u64) -> Result<Decision> {
    if !numth::is_prime_u128(p as u128) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let one = params.one();
    if p % 4 != 3 {
        // already a sum of two squares in Q
        return Ok(Decision {
            verdict: Verdict::Yes,
            certificates: vec![],
            preprocessing: Preprocessing {
                lambda: BigRational::one(),
                p_primes: vec![],
                q_primes: vec![p],
                primitive_part: one,
            },
            failed_conditions: vec![],
        });
    }
    let certs = localtests::symbols_for_rational_p(params, &[p])?;
    let dy = splitting::classify_dyadic(params)?;
    let odd = splitting::classify_odd(params, p)?;
    let ok = dy.tag != SplitTag::SS && odd.tag != SplitTag::SS;
    debug_assert_eq!(ok, certs.iter().all(|c| c.value == 1));
    let mut failed = Vec::new();
    if odd.tag == SplitTag::SS {
        failed.push(format!("rational-prime-factor(p={p})"));
    }
    if dy.tag == SplitTag::SS {
        failed.push("dyadic-ss".into());
    }
    Ok(Decision {
        verdict: if ok { Verdict::Yes } else { Verdict::No },
        certificates: certs,
        preprocessing: Preprocessing {
            lambda: BigRational::one(),
            p_primes: vec![p],
            q_primes: vec![],
            primitive_part: one,
        },
        failed_conditions: failed,
    })
}

/// Whether -1 is a sum of two squares in K: exactly when A < 0 and the
/// dyadic place is not split-split. Certificates come from the general
/// engine applied to -1.
pub fn minus_one_is_sum_of_two_squares(params: &FieldParams) -> Result<Decision> {
    let minus_one = params.element_int(-1, 0, 0, 0);
    let decision = is_sum_of_two_squares(params, &minus_one)?;
    let closed_form =
        params.a() < 0 && splitting::classify_dyadic(params)?.tag != SplitTag::SS;
    if closed_form != decision.is_yes() {
        return Err(Error::Internal(
            "closed form for -1 disagrees with the certificate engine".into(),
        ));
    }
    Ok(decision)
}
