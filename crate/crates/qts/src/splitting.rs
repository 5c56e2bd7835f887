//! Classification of a rational prime's behavior in the tower
//! Q < k < K into the six types (first letter: how p behaves in k,
//! second: how the primes of k behave in K), plus the dyadic variant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::dyadic;
use crate::error::{Error, Result};
use crate::kfield::FieldParams;
use crate::numth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitTag {
    RR,
    SS,
    SI,
    SR,
    II,
    IR,
}

impl std::fmt::Display for SplitTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SplitTag::RR => "RR",
            SplitTag::SS => "SS",
            SplitTag::SI => "SI",
            SplitTag::SR => "SR",
            SplitTag::II => "II",
            SplitTag::IR => "IR",
        };
        f.write_str(s)
    }
}

/// The type of one rational prime in the tower. `single_dyadic_spot` is set
/// only for p = 2 and is true exactly when 2 does not split in k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub tag: SplitTag,
    pub single_dyadic_spot: bool,
}

impl SplittingType {
    fn odd(tag: SplitTag) -> Self {
        SplittingType { tag, single_dyadic_spot: false }
    }
}

/// Classifies an odd prime. Decision rules:
/// p | D -> RR; (D/p) = -1 -> IR if p | A else II; (D/p) = +1 -> SR if
/// p | A, otherwise SS or SI by the residue symbol of the p-free part of
/// A(D + Bc), c a square root of D lifted until that valuation stabilizes.
pub fn classify_odd(params: &FieldParams, p: u64) -> Result<SplittingType> {
    if p == 2 {
        return Err(Error::InvalidArgument(
            "classify_odd: use classify_dyadic for p = 2".into(),
        ));
    }
    if !numth::is_prime_u128(p as u128) {
        return Err(Error::InvalidArgument(format!("classify_odd: {p} is not prime")));
    }
    let (a, d) = (params.a(), params.d());
    let pi = p as i64;
    if d % pi == 0 {
        return Ok(SplittingType::odd(SplitTag::RR));
    }
    let chi_d = numth::jacobi_i64(d, p)?;
    if chi_d == -1 {
        return Ok(SplittingType::odd(if a % pi == 0 {
            SplitTag::IR
        } else {
            SplitTag::II
        }));
    }
    if a % pi == 0 {
        return Ok(SplittingType::odd(SplitTag::SR));
    }
    // Split-unramified: decide SS vs SI from the unit part of A(D + Bc).
    let (_, unit) = split_local_unit(params, p)?;
    let chi = numth::jacobi(&unit, &BigInt::from(p))?;
    debug_assert!(chi != 0);
    Ok(SplittingType::odd(if chi == 1 { SplitTag::SS } else { SplitTag::SI }))
}

/// v_p and p-free part of A(D + Bc) where c is the canonical root of D mod
/// p^k, with the precision raised until the valuation is determined. The
/// valuation is at most 2 v_p(C), so this terminates quickly.
pub fn split_local_unit(params: &FieldParams, p: u64) -> Result<(u32, BigInt)> {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let mut k = 2u32;
    loop {
        let c = numth::sqrt_mod_prime_power(&BigInt::from(d), p, k)?
            .ok_or_else(|| Error::Internal("split prime without a root of D".into()))?;
        let value = BigInt::from(a) * (BigInt::from(d) + BigInt::from(b) * c.to_bigint());
        let pk = BigInt::from(p).pow(k);
        if value.mod_floor(&pk) != BigInt::from(0) {
            let reduced = value.mod_floor(&pk);
            let v = numth::valuation_int(p, &reduced)?;
            if v < k {
                let unit = reduced / BigInt::from(p).pow(v);
                return Ok((v, unit.mod_floor(&BigInt::from(p).pow(k - v))));
            }
        }
        k *= 2;
        if k > 256 {
            return Err(Error::PrecisionExhausted(k));
        }
    }
}

/// Classifies p = 2. D not 1 mod 8 gives the single dyadic spot (ramified
/// or inert in k, per D mod 8 and the conductor exponent); D = 1 mod 8
/// splits in k, then the conductor exponent separates SR from SS/SI, which
/// are told apart by the square class of A(D + B e(D)).
pub fn classify_dyadic(params: &FieldParams) -> Result<SplittingType> {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let d8 = d.rem_euclid(8);
    match d8 {
        2 => Ok(SplittingType { tag: SplitTag::RR, single_dyadic_spot: true }),
        5 => Ok(SplittingType {
            tag: if params.l() != 0 { SplitTag::IR } else { SplitTag::II },
            single_dyadic_spot: true,
        }),
        1 => {
            if params.l() != 0 {
                return Ok(SplittingType { tag: SplitTag::SR, single_dyadic_spot: false });
            }
            let e_d = dyadic::e_of(&BigInt::from(d))?;
            let w = BigInt::from(a) * (BigInt::from(d) + BigInt::from(b) * e_d);
            // odd since B is even here; its square class mod 8 decides
            let class = w.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            match class {
                1 => Ok(SplittingType { tag: SplitTag::SS, single_dyadic_spot: false }),
                5 => Ok(SplittingType { tag: SplitTag::SI, single_dyadic_spot: false }),
                _ => Err(Error::Internal(format!(
                    "unramified dyadic class {class} contradicts conductor exponent 0"
                ))),
            }
        }
        _ => Err(Error::Internal(format!("invalid D mod 8 = {d8} passed validation"))),
    }
}

/// Classifies any prime.
pub fn classify(params: &FieldParams, p: u64) -> Result<SplittingType> {
    if p == 2 {
        classify_dyadic(params)
    } else {
        classify_odd(params, p)
    }
}
