//! Per-place evaluation of the Hilbert symbol (-1, m) over K, one
//! certificate per place that can carry -1: real embeddings, odd primes
//! p = 3 (mod 4) dividing the norm (or a supplied rational prime product),
//! and the dyadic places. Values are honest per-place symbols, so the
//! product over all emitted certificates is +1 by reciprocity; the rule
//! applied at each place and its intermediate data are recorded for
//! auditing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::dyadic::{self, DyadicQuadElement, ExtLabel};
use crate::error::{Error, Result};
use crate::kfield::{EmbeddingSigns, FieldParams, QuadElement, QuartElement};
use crate::numth;
use crate::splitting::{self, SplitTag};

pub const RULE_REAL: &str = "real-embedding";
pub const RULE_COMPLEX: &str = "complex-place";
pub const RULE_RAMIFIED_COORDS: &str = "ramified-coordinates";
pub const RULE_INERT_AUTO: &str = "inert-automatic";
pub const RULE_SPLIT_INERT_AUTO: &str = "split-inert-automatic";
pub const RULE_SPLIT_SPLIT: &str = "split-split-parity";
pub const RULE_SPLIT_RAMIFIED: &str = "split-ramified-parity";
pub const RULE_UNIT_AT_PLACE: &str = "unit-at-place";
pub const RULE_DYADIC_SINGLE: &str = "single-dyadic-reciprocity";
pub const RULE_DYADIC_SS: &str = "dyadic-split-square-units";
pub const RULE_DYADIC_SR: &str = "dyadic-ramified-unit";
pub const RULE_DYADIC_SI: &str = "dyadic-split-inert-unit";
pub const RULE_RATIONAL_PRIME: &str = "rational-prime-product";

const MAX_ODD_PRECISION: u32 = 1024;
const MAX_DYADIC_PRECISION: u32 = 1024;

/// A place of K in a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Place {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub label: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub splitting: Option<String>,
}

impl Place {
    fn infinite(label: &str) -> Self {
        Place { kind: "infinite".into(), p: None, label: label.into(), splitting: None }
    }

    fn finite(p: u64, label: &str, tag: SplitTag) -> Self {
        Place {
            kind: "finite".into(),
            p: Some(p),
            label: label.into(),
            splitting: Some(tag.to_string()),
        }
    }
}

/// One place, the symbol value there, the rule that produced it, and the
/// intermediate data needed to recheck the rule by hand.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolCertificate {
    pub place: Place,
    pub value: i8,
    pub rule: String,
    pub data: BTreeMap<String, String>,
}

fn data_map(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parity_symbol(v: i64) -> i8 {
    if v.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// infinite places
// ---------------------------------------------------------------------------

/// Certificates at the archimedean places: one per real embedding when
/// A > 0 (+1 iff the conjugate is positive), two trivial certificates for
/// the complex pair when A < 0.
pub fn symbol_infinite(params: &FieldParams, m: &QuartElement) -> Result<Vec<SymbolCertificate>> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    match params.embedding_signs(m)? {
        EmbeddingSigns::NotTotallyReal => Ok((0..2)
            .map(|i| SymbolCertificate {
                place: Place::infinite(&format!("complex{i}")),
                value: 1,
                rule: RULE_COMPLEX.into(),
                data: data_map(&[("reason", "complex place".into())]),
            })
            .collect()),
        EmbeddingSigns::Real(signs) => Ok(signs
            .iter()
            .enumerate()
            .map(|(i, &s)| SymbolCertificate {
                place: Place::infinite(&format!("real{i}")),
                value: s,
                rule: RULE_REAL.into(),
                data: data_map(&[("conjugate_sign", s.to_string())]),
            })
            .collect()),
    }
}

// ---------------------------------------------------------------------------
// odd places: shared embedding machinery
// ---------------------------------------------------------------------------

fn with_escalation<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<T> {
    let mut k = start.max(8);
    loop {
        if let Some(v) = f(k)? {
            return Ok(v);
        }
        if k >= cap {
            return Err(Error::PrecisionExhausted(k));
        }
        k = (k * 2).min(cap);
    }
}

fn max_denom_valuation(p: u64, coords: &[&BigRational]) -> Result<u32> {
    let mut worst = 0u32;
    for c in coords {
        worst = worst.max(numth::valuation_int(p, c.denom())?);
    }
    Ok(worst)
}

/// v_p of an exact rational approximating a p-adic number to p^k. Returns
/// None when the approximation cannot pin the valuation down (escalate).
fn approx_valuation(p: u64, value: &BigRational, k: u32, slack: u32) -> Result<Option<i64>> {
    if value.is_zero() {
        return Ok(None);
    }
    let v = numth::valuation(p, value)?;
    if v + (slack as i64) + 2 <= k as i64 {
        Ok(Some(v))
    } else {
        Ok(None)
    }
}

struct SplitEmbedding {
    c: BigInt,
    /// integer approximations of sqrt(A(D + Bc)) and sqrt(A(D - Bc))
    t: [BigInt; 2],
}

fn build_split_embedding(params: &FieldParams, p: u64, k: u32) -> Result<Option<SplitEmbedding>> {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let c = numth::sqrt_mod_prime_power(&BigInt::from(d), p, k)?
        .ok_or_else(|| Error::Internal("split embedding at a non-split prime".into()))?
        .to_bigint();
    let pk = BigInt::from(p).pow(k);
    let mut roots: Vec<BigInt> = Vec::with_capacity(2);
    for eps in [1i64, -1] {
        let c_eps = if eps == 1 { c.clone() } else { (&pk - &c).mod_floor(&pk) };
        let w = BigInt::from(a) * (BigInt::from(d) + BigInt::from(b) * &c_eps);
        let w_red = w.mod_floor(&pk);
        if w_red.is_zero() {
            return Ok(None);
        }
        let v = numth::valuation_int(p, &w_red)?;
        if v + 2 >= k || v % 2 != 0 {
            // valuation not yet resolved (it is always even in the limit)
            return Ok(None);
        }
        let unit = &w_red / BigInt::from(p).pow(v);
        let s = match numth::sqrt_mod_prime_power(&unit, p, k - v)? {
            Some(s) => s,
            None => {
                return Err(Error::Internal(
                    "unit part is a non-residue at a split-split prime".into(),
                ))
            }
        };
        roots.push(BigInt::from(p).pow(v / 2) * s.to_bigint());
    }
    let t_neg = roots.pop().unwrap();
    let t_pos = roots.pop().unwrap();
    let _ = k;
    Ok(Some(SplitEmbedding { c, t: [t_pos, t_neg] }))
}

impl SplitEmbedding {
    fn c_at(&self, eps: usize) -> BigInt {
        if eps == 0 {
            self.c.clone()
        } else {
            -self.c.clone()
        }
    }

    /// Rational image of a k-element at the eps-labeled root of D.
    fn quad_value(&self, x: &QuadElement, eps: usize) -> BigRational {
        &x.a + &x.b * BigRational::from(self.c_at(eps))
    }

    /// Rational image of a K-element at the place (eps, delta).
    fn quart_value(&self, m: &QuartElement, eps: usize, delta: usize) -> BigRational {
        let xp = self.quad_value(&m.x_part(), eps);
        let yp = self.quad_value(&m.y_part(), eps);
        let t = BigRational::from(self.t[eps].clone());
        let signed = if delta == 0 { yp } else { -yp };
        xp + signed * t
    }
}

/// The four place valuations of an element at a split-split odd prime,
/// labels (eps, delta) with eps = 0 the canonical root.
fn ss_place_valuations(
    params: &FieldParams,
    m: &QuartElement,
    p: u64,
    start: u32,
) -> Result<[i64; 4]> {
    let slack_base = max_denom_valuation(p, &m.coords())?;
    with_escalation(start, MAX_ODD_PRECISION, |k| {
        let emb = match build_split_embedding(params, p, k)? {
            Some(e) => e,
            None => return Ok(None),
        };
        let mut vals = [0i64; 4];
        for (i, (eps, delta)) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
            let value = emb.quart_value(m, *eps, *delta);
            match approx_valuation(p, &value, k, slack_base)? {
                Some(v) => vals[i] = v,
                None => return Ok(None),
            }
        }
        Ok(Some(vals))
    })
}

/// v_p of an element of k at the two primes above a split p (canonical root
/// first). Needs only the root of D, so it works at both split-split and
/// split-ramified primes.
fn split_quad_valuations(
    params: &FieldParams,
    x: &QuadElement,
    p: u64,
    start: u32,
) -> Result<[i64; 2]> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let slack = max_denom_valuation(p, &[&x.a, &x.b])?;
    with_escalation(start, MAX_ODD_PRECISION, |k| {
        let c = numth::sqrt_mod_prime_power(&BigInt::from(params.d()), p, k)?
            .ok_or_else(|| Error::Internal("quad valuation at a non-split prime".into()))?
            .to_bigint();
        let mut out = [0i64; 2];
        for eps in 0..2 {
            let c_eps = if eps == 0 { c.clone() } else { -c.clone() };
            let value = &x.a + &x.b * BigRational::from(c_eps);
            match approx_valuation(p, &value, k, slack)? {
                Some(v) => out[eps] = v,
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    })
}

// ---------------------------------------------------------------------------
// odd places: the per-type rules
// ---------------------------------------------------------------------------

/// Rule for p dividing D (p ramified in k and again in K): +1 exactly when
/// p | x1, p | y1, p does not divide x2. Only meaningful for primes
/// p = 3 (mod 4); such primes never divide a sum of two coprime squares,
/// so on valid parameters this rule is reachable only through the
/// unchecked test constructor.
pub fn symbol_rr(params: &FieldParams, m: &QuartElement, p: u64) -> Result<SymbolCertificate> {
    if params.d() % (p as i64) != 0 {
        return Err(Error::InvalidArgument("symbol_rr requires p | D".into()));
    }
    let coords = m
        .integer_coords()
        .ok_or(Error::NotPrimitive)?;
    let n = params.norm_abs(m)?;
    let pb = BigInt::from(p);
    if numth::valuation(p, &n)? == 0 {
        return Ok(SymbolCertificate {
            place: Place::finite(p, "P", SplitTag::RR),
            value: 1,
            rule: RULE_UNIT_AT_PLACE.into(),
            data: data_map(&[("v_p_norm", "0".into())]),
        });
    }
    let div = |i: usize| coords[i].mod_floor(&pb).is_zero();
    let ok = div(0) && div(2) && !div(1);
    Ok(SymbolCertificate {
        place: Place::finite(p, "P", SplitTag::RR),
        value: if ok { 1 } else { -1 },
        rule: RULE_RAMIFIED_COORDS.into(),
        data: data_map(&[
            ("p_divides_x1", div(0).to_string()),
            ("p_divides_y1", div(2).to_string()),
            ("p_divides_x2", div(1).to_string()),
            ("v_p_norm", numth::valuation(p, &n)?.to_string()),
        ]),
    })
}

/// Rule for inert p = 3 (mod 4): the completion of k contains a square
/// root of -1, so the symbol is +1 regardless of m.
pub fn symbol_inert(params: &FieldParams, m: &QuartElement, p: u64) -> Result<SymbolCertificate> {
    let t = splitting::classify_odd(params, p)?;
    if !matches!(t.tag, SplitTag::II | SplitTag::IR) {
        return Err(Error::InvalidArgument("symbol_inert requires (D/p) = -1".into()));
    }
    let n = params.norm_abs(m)?;
    Ok(SymbolCertificate {
        place: Place::finite(p, "P", t.tag),
        value: 1,
        rule: RULE_INERT_AUTO.into(),
        data: data_map(&[("v_p_norm", numth::valuation(p, &n)?.to_string())]),
    })
}

/// Evaluation of the three-case parity condition at a split-split prime.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionMP {
    pub holds: bool,
    pub case: char,
    pub data: BTreeMap<String, String>,
}

/// The parity condition at SS(p): which of m*sigma(m), m*sigma^3(m) are
/// divisible by p selects the case, and the listed valuations must all be
/// even.
pub fn condition_m_p(params: &FieldParams, m: &QuartElement, p: u64) -> Result<ConditionMP> {
    let t = splitting::classify_odd(params, p)?;
    if t.tag != SplitTag::SS {
        return Err(Error::InvalidArgument("condition [m,p] requires an SS prime".into()));
    }
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n_abs = params.norm_abs(m)?;
    let v_n = numth::valuation(p, &n_abs)?;

    let z1 = params.mul(m, &params.sigma_pow(m, 1)?)?;
    let z2 = params.mul(m, &params.sigma_pow(m, 3)?)?;
    let min4 = |z: &QuartElement| -> Result<i64> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        let vs = ss_place_valuations(params, z, p, 8)?;
        Ok(*vs.iter().min().unwrap())
    };
    let v_z1 = min4(&z1)?;
    let v_z2 = min4(&z2)?;
    let div1 = v_z1 >= 1;
    let div2 = v_z2 >= 1;

    let mut data: BTreeMap<String, String> = BTreeMap::new();
    data.insert("v_p(m*sigma(m))".into(), v_z1.to_string());
    data.insert("v_p(m*sigma^3(m))".into(), v_z2.to_string());
    data.insert("v_p(norm)".into(), v_n.to_string());

    let (holds, case) = if div1 && div2 {
        // exactly one prime of k above p divides m; relabel so it is p1
        let big = i64::MAX / 4; // stands in for the valuation of zero
        let vx = if m.x_part().is_zero() {
            [big, big]
        } else {
            split_quad_valuations(params, &m.x_part(), p, 8)?
        };
        let vy = if m.y_part().is_zero() {
            [big, big]
        } else {
            split_quad_valuations(params, &m.y_part(), p, 8)?
        };
        let vp1 = [vx[0].min(vy[0]), vx[1].min(vy[1])];
        let swap = vp1[0] < 1 && vp1[1] >= 1;
        let (i1, i2) = if swap { (1usize, 0usize) } else { (0usize, 1usize) };
        let v_m_p1 = vp1[i1];
        let n_rel = params.norm_rel(m)?;
        let v_nrel = split_quad_valuations(params, &n_rel, p, 8)?;
        let v_nrel_p2 = v_nrel[i2];
        data.insert("v_p1(m)".into(), v_m_p1.to_string());
        data.insert("v_p2(relative_norm)".into(), v_nrel_p2.to_string());
        data.insert("relabeled".into(), swap.to_string());
        (
            v_m_p1 >= 1
                && v_m_p1 % 2 == 0
                && v_nrel_p2 % 2 == 0
                && v_n % 2 == 0,
            'A',
        )
    } else if div1 || div2 {
        let v_z = if div1 { v_z1 } else { v_z2 };
        (v_z % 2 == 0 && v_n % 2 == 0, 'B')
    } else {
        (v_n % 2 == 0, 'C')
    };
    data.insert("case".into(), case.to_string());
    Ok(ConditionMP { holds, case, data })
}

/// Four certificates at a split-split odd prime, values (-1)^{v_P(m)} at
/// the fixed embedding labels, optionally twisted by a rational prime
/// factor p of the ambient element. The case analysis of the parity
/// condition is recorded alongside.
pub fn symbol_ss_with_twist(
    params: &FieldParams,
    m: &QuartElement,
    p: u64,
    twist: bool,
) -> Result<Vec<SymbolCertificate>> {
    let t = splitting::classify_odd(params, p)?;
    if t.tag != SplitTag::SS {
        return Err(Error::InvalidArgument("symbol_ss requires an SS prime".into()));
    }
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n_abs = params.norm_abs(m)?;
    let v_n = numth::valuation(p, &n_abs)?;
    let vals = if v_n == 0 {
        [0i64; 4]
    } else {
        ss_place_valuations(params, m, p, 8)?
    };
    debug_assert_eq!(vals.iter().sum::<i64>(), v_n);
    let cond = condition_m_p(params, m, p)?;
    let labels = ["P11", "P12", "P21", "P22"];
    let mut out = Vec::with_capacity(4);
    for (i, label) in labels.iter().enumerate() {
        let base = parity_symbol(vals[i]);
        let value = if twist { -base } else { base };
        let mut data = data_map(&[
            ("v_place(m)", vals[i].to_string()),
            ("condition_holds", cond.holds.to_string()),
            ("condition_case", cond.case.to_string()),
        ]);
        if twist {
            data.insert("rational_prime_twist".into(), "-1".into());
        }
        out.push(SymbolCertificate {
            place: Place::finite(p, label, SplitTag::SS),
            value,
            rule: RULE_SPLIT_SPLIT.into(),
            data,
        });
    }
    Ok(out)
}

/// Spec surface without a rational-prime twist.
pub fn symbol_ss(params: &FieldParams, m: &QuartElement, p: u64) -> Result<Vec<SymbolCertificate>> {
    symbol_ss_with_twist(params, m, p, false)
}

/// Two certificates at a split-ramified odd prime (p | A, (D/p) = +1):
/// the place valuations are read off the relative norm through the two
/// embeddings of k, and the symbol is their parity.
pub fn symbol_sr(params: &FieldParams, m: &QuartElement, p: u64) -> Result<Vec<SymbolCertificate>> {
    let t = splitting::classify_odd(params, p)?;
    if t.tag != SplitTag::SR {
        return Err(Error::InvalidArgument("symbol_sr requires an SR prime".into()));
    }
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n_abs = params.norm_abs(m)?;
    let v_n = numth::valuation(p, &n_abs)?;
    let vals = if v_n == 0 {
        [0i64; 2]
    } else {
        let n_rel = params.norm_rel(m)?;
        split_quad_valuations(params, &n_rel, p, 8)?
    };
    debug_assert_eq!(vals[0] + vals[1], v_n);
    let both_divide = vals[0] >= 1 && vals[1] >= 1;
    let mut out = Vec::with_capacity(2);
    for (i, label) in ["P1", "P2"].iter().enumerate() {
        out.push(SymbolCertificate {
            place: Place::finite(p, label, SplitTag::SR),
            value: parity_symbol(vals[i]),
            rule: RULE_SPLIT_RAMIFIED.into(),
            data: data_map(&[
                ("v_place(m)", vals[i].to_string()),
                ("v_p(norm)", v_n.to_string()),
                ("p_divides_m_squared", both_divide.to_string()),
            ]),
        });
    }
    Ok(out)
}

/// Two trivial certificates at a split-inert odd prime.
fn symbol_si(params: &FieldParams, m: &QuartElement, p: u64) -> Result<Vec<SymbolCertificate>> {
    let n = params.norm_abs(m)?;
    let v = numth::valuation(p, &n)?;
    Ok(["P1", "P2"]
        .iter()
        .map(|label| SymbolCertificate {
            place: Place::finite(p, label, SplitTag::SI),
            value: 1,
            rule: RULE_SPLIT_INERT_AUTO.into(),
            data: data_map(&[("v_p_norm", v.to_string())]),
        })
        .collect())
}

// ---------------------------------------------------------------------------
// dyadic places
// ---------------------------------------------------------------------------

fn two_adic_split(n: &BigRational) -> Result<(i64, BigInt)> {
    // n = 2^v * unit; returns (v, unit mod 16) for a nonzero rational.
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let v = numth::valuation(2, n)?;
    let two = BigInt::from(2);
    let m = BigInt::from(16);
    let num_odd = n.numer() / two.pow(numth::valuation_int(2, n.numer())?);
    let den_odd = n.denom() / two.pow(numth::valuation_int(2, n.denom())?);
    let inv = den_odd
        .extended_gcd(&m)
        .x
        .mod_floor(&m);
    Ok((v, (num_odd * inv).mod_floor(&m)))
}

fn symbol_from_unit_mod4(v: i64, unit_mod16: &BigInt) -> i8 {
    let _ = v;
    if unit_mod16.mod_floor(&BigInt::from(4)) == BigInt::one() {
        1
    } else {
        -1
    }
}

/// Integer coordinates after clearing denominators by a square (symbols are
/// square-class invariant).
fn clear_denominators(params: &FieldParams, m: &QuartElement) -> Result<QuartElement> {
    let mut l = BigInt::one();
    for c in m.coords() {
        l = l.lcm(c.denom());
    }
    let scale = BigRational::from(l.clone()) * BigRational::from(l);
    params.scalar_mul(&scale, m)
}

struct DyadicLifts {
    e: BigInt,
    w: [BigInt; 2],
}

fn build_dyadic_lifts(params: &FieldParams, k: u32) -> Result<DyadicLifts> {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let seed = dyadic::e_of(&BigInt::from(d))?;
    let e = numth::lift_sqrt_2adic(&BigInt::from(d), &seed, 8, k)?;
    let w_pos = BigInt::from(a) * (BigInt::from(d) + BigInt::from(b) * &e);
    let w_neg = BigInt::from(a) * (BigInt::from(d) - BigInt::from(b) * &e);
    let _ = k;
    Ok(DyadicLifts { e, w: [w_pos, w_neg] })
}

impl DyadicLifts {
    fn x_image(&self, x: &QuadElement, eps: usize) -> BigRational {
        let c = if eps == 0 { self.e.clone() } else { -self.e.clone() };
        &x.a + &x.b * BigRational::from(c)
    }
}

/// Dyadic certificates for a primitive element, with the rational-prime
/// parity twist applied at the split-split case.
pub fn symbol_dyadic_with_twist(
    params: &FieldParams,
    m: &QuartElement,
    alpha_odd: bool,
    start_precision: u32,
) -> Result<Vec<SymbolCertificate>> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let m = clear_denominators(params, m)?;
    let ty = splitting::classify_dyadic(params)?;
    match (ty.single_dyadic_spot, ty.tag) {
        (true, tag) => {
            // one place above 2: the symbol is the symbol of the full norm
            // over Q_2 (norm functoriality); in the decision flow this is
            // the reciprocity-shortcut place.
            let n = params.norm_abs(&m)?;
            let (v, unit) = two_adic_split(&n)?;
            let value = symbol_from_unit_mod4(v, &unit);
            Ok(vec![SymbolCertificate {
                place: Place::finite(2, "P", tag),
                value,
                rule: RULE_DYADIC_SINGLE.into(),
                data: data_map(&[
                    ("v_2(norm)", v.to_string()),
                    ("norm_unit_mod_16", unit.to_string()),
                ]),
            }])
        }
        (false, SplitTag::SR) => symbol_dyadic_sr(params, &m, start_precision),
        (false, SplitTag::SS) => symbol_dyadic_ss(params, &m, alpha_odd, start_precision),
        (false, SplitTag::SI) => symbol_dyadic_si(params, &m, start_precision),
        (false, tag) => Err(Error::Internal(format!(
            "dyadic classification {tag} cannot split in k"
        ))),
    }
}

/// Spec surface: dyadic certificates without a rational prime product.
pub fn symbol_dyadic(params: &FieldParams, m: &QuartElement) -> Result<Vec<SymbolCertificate>> {
    symbol_dyadic_with_twist(params, m, false, 16)
}

fn symbol_dyadic_ss(
    params: &FieldParams,
    m: &QuartElement,
    alpha_odd: bool,
    start: u32,
) -> Result<Vec<SymbolCertificate>> {
    // four places, each completion Q_2; the image of m at (eps, delta) is
    // (x1 + x2 e) + delta (y1 + y2 e) sqrt(A(D + eps B e)).
    let evaluated = with_escalation(start, MAX_DYADIC_PRECISION, |k| {
        let lifts = build_dyadic_lifts(params, k)?;
        let modulus = BigInt::one() << k;
        let mut roots = Vec::with_capacity(2);
        for w in &lifts.w {
            if w.mod_floor(&BigInt::from(8)).to_u8() != Some(1) {
                return Err(Error::Internal(
                    "split-split dyadic radicand is not 1 mod 8".into(),
                ));
            }
            roots.push(numth::sqrt_2adic(w, k)?.to_bigint());
        }
        let mut vals: Vec<(i64, BigInt)> = Vec::with_capacity(4);
        for (eps, delta) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            let xp = lifts.x_image(&m.x_part(), eps);
            let yp = lifts.x_image(&m.y_part(), eps);
            let signed = if delta == 0 { yp } else { -yp };
            let value = xp + signed * BigRational::from(roots[eps].clone());
            debug_assert!(value.denom().is_one());
            let residue = value.numer().mod_floor(&modulus);
            if residue.is_zero() {
                return Ok(None);
            }
            let v = numth::valuation_int(2, &residue)? as i64;
            if v + 4 > k as i64 {
                return Ok(None);
            }
            let unit = (residue >> (v as u32)).mod_floor(&BigInt::from(16));
            vals.push((v, unit));
        }
        Ok(Some(vals))
    })?;
    let labels = ["P11", "P12", "P21", "P22"];
    let mut out = Vec::with_capacity(4);
    for (i, (v, unit)) in evaluated.into_iter().enumerate() {
        let base = symbol_from_unit_mod4(v, &unit);
        let value = if alpha_odd { -base } else { base };
        let mut data = data_map(&[
            ("v_2(image)", v.to_string()),
            ("image_unit_mod_16", unit.to_string()),
        ]);
        if alpha_odd {
            data.insert("rational_prime_twist".into(), "-1".into());
        }
        out.push(SymbolCertificate {
            place: Place::finite(2, labels[i], SplitTag::SS),
            value,
            rule: RULE_DYADIC_SS.into(),
            data,
        });
    }
    Ok(out)
}

fn symbol_dyadic_sr(
    params: &FieldParams,
    m: &QuartElement,
    start: u32,
) -> Result<Vec<SymbolCertificate>> {
    // two places; each completion is ramified quadratic over Q_2 with
    // radicand w_eps = A(D + eps B e), and the symbol is the symbol of the
    // local norm xp^2 - w_eps yp^2 over Q_2.
    let evaluated = with_escalation(start, MAX_DYADIC_PRECISION, |k| {
        let lifts = build_dyadic_lifts(params, k)?;
        let modulus = BigInt::one() << k;
        let mut vals: Vec<(i64, BigInt, bool)> = Vec::with_capacity(2);
        for eps in 0..2usize {
            let xp = lifts.x_image(&m.x_part(), eps);
            let yp = lifts.x_image(&m.y_part(), eps);
            let w = BigRational::from(lifts.w[eps].clone());
            let local_norm = &xp * &xp - &w * &yp * &yp;
            debug_assert!(local_norm.denom().is_one());
            let residue = local_norm.numer().mod_floor(&modulus);
            if residue.is_zero() {
                return Ok(None);
            }
            let v = numth::valuation_int(2, &residue)? as i64;
            if v + 4 > k as i64 {
                return Ok(None);
            }
            let unit = (residue >> (v as u32)).mod_floor(&BigInt::from(16));
            // Unit-test data: is 2 | h - 1 for h = m scaled to a unit at
            // this place (defined when the place valuation v is even).
            let lemma_unit = if v % 2 == 0 {
                let half = BigRational::from(BigInt::one() << ((v / 2) as u32));
                let hx = &xp / &half;
                let hy = &yp / &half;
                let hm1 = &hx - BigRational::one();
                let hm1_norm = &hm1 * &hm1 - &w * &hy * &hy;
                if hm1_norm.is_zero() {
                    Some(true)
                } else {
                    Some(numth::valuation(2, &hm1_norm).map(|t| t >= 2)?)
                }
            } else {
                None
            };
            vals.push((v, unit, lemma_unit.unwrap_or(false)));
        }
        Ok(Some(vals))
    })?;
    let mut out = Vec::with_capacity(2);
    for (i, (v, unit, lemma)) in evaluated.into_iter().enumerate() {
        out.push(SymbolCertificate {
            place: Place::finite(2, ["P1", "P2"][i], SplitTag::SR),
            value: symbol_from_unit_mod4(v, &unit),
            rule: RULE_DYADIC_SR.into(),
            data: data_map(&[
                ("v_place(m)", v.to_string()),
                ("local_norm_unit_mod_16", unit.to_string()),
                ("two_divides_unit_minus_one", lemma.to_string()),
            ]),
        });
    }
    Ok(out)
}

/// Square root of w (a 2-adic integer of square class 5 * square) inside
/// Q_2(sqrt 5), by Newton iteration from a table-class seed.
fn sqrt_in_q2_sqrt5(w: &BigInt, k: u32) -> Result<DyadicQuadElement> {
    let w32 = w.mod_floor(&BigInt::from(32)).to_u8().unwrap();
    let mut seed_v = None;
    for v in (1u8..32).step_by(2) {
        if (5 * (v as u32) * (v as u32)) % 32 == w32 as u32 {
            seed_v = Some(v);
            break;
        }
    }
    let seed_v = seed_v.ok_or_else(|| {
        Error::InvalidArgument(format!("{w32} mod 32 is not 5 times a square class"))
    })?;
    let kk = k + 16;
    let wq = DyadicQuadElement::from_coords(ExtLabel::C5, kk, &w.clone(), &BigInt::zero())?;
    let mut x =
        DyadicQuadElement::from_coords(ExtLabel::C5, kk, &BigInt::zero(), &BigInt::from(seed_v))?;
    let two = DyadicQuadElement::from_coords(ExtLabel::C5, kk, &BigInt::from(2), &BigInt::zero())?;
    for _ in 0..64 {
        let f = x.square().sub(&wq)?;
        let fv = f.valuation()?;
        if fv.map(|v| v >= k).unwrap_or(true) {
            return Ok(x);
        }
        let denom = two.mul(&x)?;
        let delta = f.div_exact(&denom)?;
        x = x.sub(&delta)?;
    }
    Err(Error::PrecisionExhausted(k))
}

fn symbol_dyadic_si(
    params: &FieldParams,
    m: &QuartElement,
    start: u32,
) -> Result<Vec<SymbolCertificate>> {
    // two places with completion Q_2(sqrt 5); the image of m is reduced to
    // its unit part and tested against the sum-of-two-squares unit classes.
    let evaluated = with_escalation(start, MAX_DYADIC_PRECISION, |k| {
        let lifts = build_dyadic_lifts(params, k)?;
        let mut vals: Vec<(u32, bool, String)> = Vec::with_capacity(2);
        for eps in 0..2usize {
            let root = sqrt_in_q2_sqrt5(&lifts.w[eps], k)?;
            let xp = lifts.x_image(&m.x_part(), eps);
            let yp = lifts.x_image(&m.y_part(), eps);
            debug_assert!(xp.denom().is_one() && yp.denom().is_one());
            let xe = DyadicQuadElement::from_coords(
                ExtLabel::C5,
                k,
                &xp.numer().clone(),
                &BigInt::zero(),
            )?;
            let ye = DyadicQuadElement::from_coords(
                ExtLabel::C5,
                k,
                &yp.numer().clone(),
                &BigInt::zero(),
            )?;
            let image = xe.add(&ye.mul(&root)?)?;
            if image.is_zero_at_precision() {
                return Ok(None);
            }
            let (v, unit) = match image.unit_part() {
                Ok(x) => x,
                Err(Error::PrecisionExhausted(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if (v + 6) as i64 > k as i64 {
                return Ok(None);
            }
            let member = dyadic::unit_is_sum_two_squares(ExtLabel::C5, &unit)?;
            let (p_num, q_num) = unit.numerators();
            let desc = format!(
                "({} + {} sqrt5)/2 mod 8",
                p_num.mod_floor(&BigInt::from(8)),
                q_num.mod_floor(&BigInt::from(8))
            );
            vals.push((v, member, desc));
        }
        Ok(Some(vals))
    })?;
    let mut out = Vec::with_capacity(2);
    for (i, (v, member, desc)) in evaluated.into_iter().enumerate() {
        out.push(SymbolCertificate {
            place: Place::finite(2, ["P1", "P2"][i], SplitTag::SI),
            value: if member { 1 } else { -1 },
            rule: RULE_DYADIC_SI.into(),
            data: data_map(&[
                ("v_place(m)", v.to_string()),
                ("unit_part", desc),
                ("unit_in_sum_classes", member.to_string()),
            ]),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// rational prime products and the combined engine
// ---------------------------------------------------------------------------

/// Certificate summary for a product P of distinct primes = 3 (mod 4), by
/// the closed case list: SS(p) places carry -1, the dyadic split-split
/// places carry (-1)^alpha, everything else is +1.
pub fn symbols_for_rational_p(
    params: &FieldParams,
    primes: &[u64],
) -> Result<Vec<SymbolCertificate>> {
    let mut seen = std::collections::BTreeSet::new();
    for &p in primes {
        if !numth::is_prime_u128(p as u128) || p % 4 != 3 {
            return Err(Error::InvalidArgument(format!(
                "rational product factor {p} is not a prime = 3 mod 4"
            )));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidArgument(format!("repeated prime {p}")));
        }
    }
    let alpha_odd = primes.len() % 2 == 1;
    let mut out = Vec::new();
    for &p in &seen {
        let t = splitting::classify_odd(params, p)?;
        let labels: &[&str] = match t.tag {
            SplitTag::SS => &["P11", "P12", "P21", "P22"],
            SplitTag::SR | SplitTag::SI => &["P1", "P2"],
            _ => &["P"],
        };
        let value = if t.tag == SplitTag::SS { -1 } else { 1 };
        for label in labels {
            out.push(SymbolCertificate {
                place: Place::finite(p, label, t.tag),
                value,
                rule: RULE_RATIONAL_PRIME.into(),
                data: data_map(&[("divides_product", "true".into())]),
            });
        }
    }
    let dy = splitting::classify_dyadic(params)?;
    let (labels, value): (&[&str], i8) = if dy.single_dyadic_spot {
        (&["P"], 1)
    } else {
        match dy.tag {
            SplitTag::SS => (
                &["P11", "P12", "P21", "P22"],
                if alpha_odd { -1 } else { 1 },
            ),
            _ => (&["P1", "P2"], 1),
        }
    };
    for label in labels {
        out.push(SymbolCertificate {
            place: Place::finite(2, label, dy.tag),
            value,
            rule: RULE_RATIONAL_PRIME.into(),
            data: data_map(&[("alpha", primes.len().to_string())]),
        });
    }
    Ok(out)
}

/// Full certificate list for a primitive element times an implicit product
/// of the given distinct primes = 3 (mod 4): infinite places, every odd
/// prime = 3 (mod 4) dividing the norm or the product, and the dyadic
/// places. Certificates are sorted by place.
pub fn evaluate_all(
    params: &FieldParams,
    m: &QuartElement,
    p_primes: &[u64],
    dyadic_precision: u32,
) -> Result<Vec<SymbolCertificate>> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let mut out = symbol_infinite(params, m)?;

    let n_abs = params.norm_abs(m)?;
    let n_int = n_abs.numer().clone();
    let fact = numth::factorize(&n_int)?;
    let mut relevant: Vec<u64> = Vec::new();
    for p in fact.primes() {
        if (p % 4u32).to_u8() == Some(3) {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::InvalidArgument("norm prime beyond 64 bits".into()))?;
            relevant.push(p);
        }
    }
    for &p in p_primes {
        if !relevant.contains(&p) {
            relevant.push(p);
        }
    }
    relevant.sort_unstable();

    for p in relevant {
        let t = splitting::classify_odd(params, p)?;
        let twist = p_primes.contains(&p);
        match t.tag {
            SplitTag::RR => {
                // unreachable on valid parameters for p = 3 mod 4
                out.push(symbol_rr(params, m, p)?);
            }
            SplitTag::II | SplitTag::IR => out.push(symbol_inert(params, m, p)?),
            SplitTag::SI => out.extend(symbol_si(params, m, p)?),
            SplitTag::SS => out.extend(symbol_ss_with_twist(params, m, p, twist)?),
            SplitTag::SR => out.extend(symbol_sr(params, m, p)?),
        }
    }

    let alpha_odd = p_primes.len() % 2 == 1;
    out.extend(symbol_dyadic_with_twist(params, m, alpha_odd, dyadic_precision)?);

    out.sort_by(|a, b| {
        let key = |c: &SymbolCertificate| {
            (
                c.place.kind.clone(),
                c.place.p.unwrap_or(0),
                c.place.label.clone(),
            )
        };
        key(a).cmp(&key(b))
    });
    Ok(out)
}

/// Product of all certificate values; +1 for every honest set by
/// reciprocity.
pub fn certificate_product(certs: &[SymbolCertificate]) -> i64 {
    certs.iter().map(|c| c.value as i64).product()
}
