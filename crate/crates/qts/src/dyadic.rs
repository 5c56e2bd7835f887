//! 2-adic square classes and sum-of-two-squares tests in the quadratic
//! extensions of Q_2, together with the canonical square-root residue tables
//! e(w) (mod 64, for w = 1 mod 8) and e(N) (mod 16 in Q_2(sqrt 5), for
//! N = 5 mod 8).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numth;

/// The 32 rows of the canonical dyadic square-root table: (w mod 256 over
/// squarefree w = 1 mod 8) -> e with e^2 = w (mod 128) and e odd.
pub const E_TABLE: [(u32, u32); 32] = [
    (1, 1),
    (9, 3),
    (25, 5),
    (49, 7),
    (81, 9),
    (121, 11),
    (169, 13),
    (225, 15),
    (33, 17),
    (105, 19),
    (185, 21),
    (17, 23),
    (113, 25),
    (217, 27),
    (73, 29),
    (193, 31),
    (65, 33),
    (201, 35),
    (89, 37),
    (241, 39),
    (145, 41),
    (57, 43),
    (233, 45),
    (161, 47),
    (97, 49),
    (41, 51),
    (249, 53),
    (209, 55),
    (177, 57),
    (153, 59),
    (137, 61),
    (129, 63),
];

/// e(N) rows for Q_2(sqrt 5): (N mod 32 over squarefree N = 5 mod 8) -> t
/// with (t sqrt5)^2 = N (mod 32).
pub const E5_TABLE: [(u32, u32); 4] = [(5, 1), (13, 13), (21, 9), (29, 5)];

fn table_lookup(key: u32) -> Result<u32> {
    E_TABLE
        .iter()
        .find(|(w, _)| *w == key)
        .map(|(_, e)| *e)
        .ok_or_else(|| Error::Internal(format!("no dyadic root table row for {key}")))
}

/// Canonical Hensel recomputation of a table row: the odd residue e in
/// [1, 64) with e^2 = w (mod 256). Used to cross-check the literal table.
pub fn hensel_e_of_class(w_mod_256: u32) -> Result<u32> {
    if w_mod_256 % 8 != 1 {
        return Err(Error::InvalidArgument("class must be 1 mod 8".into()));
    }
    let root = numth::sqrt_2adic(&BigInt::from(w_mod_256), 8)?;
    let r = root.residue().to_u32().unwrap();
    let cands = [r % 64, 64 - (r % 64)];
    for e in cands {
        if (e * e) % 256 == w_mod_256 {
            return Ok(e);
        }
    }
    Err(Error::Internal(format!("no canonical root mod 256 for {w_mod_256}")))
}

/// e(w) for any integer whose squarefree part W is 1 mod 8: the table value
/// of W scaled by the square part, reduced mod 64.
pub fn e_of(w: &BigInt) -> Result<BigInt> {
    if w.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (s, sf) = numth::squarefree_decompose(w)?;
    let class = sf.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    if class != 1 {
        return Err(Error::InvalidArgument(format!(
            "e(w): squarefree part must be 1 mod 8, got {sf} = {class} mod 8"
        )));
    }
    let key = sf.mod_floor(&BigInt::from(256)).to_u32().unwrap();
    let e = table_lookup(key)?;
    Ok((BigInt::from(s) * BigInt::from(e)).mod_floor(&BigInt::from(64)))
}

/// e(N) in Q_2(sqrt 5) for any integer whose squarefree part is 5 mod 8:
/// the sqrt5-coefficient (mod 16), scaled by the square part.
pub fn e5_of(n: &BigInt) -> Result<DyadicQuadElement> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (s, sf) = numth::squarefree_decompose(n)?;
    let class = sf.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    if class != 5 {
        return Err(Error::InvalidArgument(format!(
            "e5(N): squarefree part must be 5 mod 8, got {sf} = {class} mod 8"
        )));
    }
    let key = sf.mod_floor(&BigInt::from(32)).to_u32().unwrap();
    let t = E5_TABLE
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Internal(format!("no e5 row for {key}")))?;
    let coeff = (BigInt::from(s) * BigInt::from(t)).mod_floor(&BigInt::from(16));
    DyadicQuadElement::from_coords(ExtLabel::C5, 8, &BigInt::zero(), &coeff)
}

/// Labels for the quadratic extensions Q_2(sqrt c) handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtLabel {
    C2,
    C3,
    C7,
    C10,
    C11,
    C14,
    C5,
}

impl ExtLabel {
    pub const ALL: [ExtLabel; 7] = [
        ExtLabel::C2,
        ExtLabel::C3,
        ExtLabel::C7,
        ExtLabel::C10,
        ExtLabel::C11,
        ExtLabel::C14,
        ExtLabel::C5,
    ];

    pub fn c(self) -> i64 {
        match self {
            ExtLabel::C2 => 2,
            ExtLabel::C3 => 3,
            ExtLabel::C7 => 7,
            ExtLabel::C10 => 10,
            ExtLabel::C11 => 11,
            ExtLabel::C14 => 14,
            ExtLabel::C5 => 5,
        }
    }

    pub fn from_c(c: i64) -> Result<Self> {
        Ok(match c {
            2 => ExtLabel::C2,
            3 => ExtLabel::C3,
            7 => ExtLabel::C7,
            10 => ExtLabel::C10,
            11 => ExtLabel::C11,
            14 => ExtLabel::C14,
            5 => ExtLabel::C5,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "no quadratic extension label for c = {c}"
                )))
            }
        })
    }

    pub fn is_ramified(self) -> bool {
        !matches!(self, ExtLabel::C5)
    }

    /// The uniformizer named in the square-class case analysis.
    pub fn uniformizer(self) -> DyadicQuadElement {
        let (u, v) = match self {
            ExtLabel::C2 => (0i64, 1i64),
            ExtLabel::C3 => (-1, 1),
            ExtLabel::C7 => (3, -1),
            ExtLabel::C10 => (0, 1),
            ExtLabel::C11 => (-3, 1),
            ExtLabel::C14 => (4, -1),
            ExtLabel::C5 => (2, 0),
        };
        DyadicQuadElement::from_coords(self, 16, &BigInt::from(u), &BigInt::from(v)).unwrap()
    }
}

/// u + v sqrt(c) at 2-adic coordinate precision k. For c = 5 the ring of
/// integers contains (1 + sqrt5)/2, so coordinates are stored doubled:
/// the value is (p + q sqrt5)/2 with p = q (mod 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicQuadElement {
    label: ExtLabel,
    k: u32,
    // numerators of the coordinates over the fixed denominator
    p: BigInt,
    q: BigInt,
}

impl DyadicQuadElement {
    fn denom(label: ExtLabel) -> i64 {
        if label == ExtLabel::C5 {
            2
        } else {
            1
        }
    }

    fn modulus(k: u32) -> BigInt {
        BigInt::one() << k
    }

    /// Builds u + v sqrt(c) from plain coordinates.
    pub fn from_coords(label: ExtLabel, k: u32, u: &BigInt, v: &BigInt) -> Result<Self> {
        if k == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let d = Self::denom(label);
        Ok(Self::from_numerators(label, k, &(u * d), &(v * d)))
    }

    /// Builds (p + q sqrt(c))/denom from numerators; for c = 5 requires
    /// p = q (mod 2).
    pub fn from_half_coords(label: ExtLabel, k: u32, p: &BigInt, q: &BigInt) -> Result<Self> {
        if label != ExtLabel::C5 {
            return Err(Error::InvalidArgument(
                "half coordinates only exist over sqrt(5)".into(),
            ));
        }
        if (p - q).is_odd() {
            return Err(Error::InvalidArgument(
                "(p + q sqrt5)/2 is integral only for p = q mod 2".into(),
            ));
        }
        Ok(Self::from_numerators(label, k, p, q))
    }

    fn from_numerators(label: ExtLabel, k: u32, p: &BigInt, q: &BigInt) -> Self {
        let m = Self::modulus(k);
        DyadicQuadElement {
            label,
            k,
            p: p.mod_floor(&m),
            q: q.mod_floor(&m),
        }
    }

    pub fn label(&self) -> ExtLabel {
        self.label
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// Numerator pair over the fixed denominator (1, or 2 for c = 5).
    pub fn numerators(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.label != o.label {
            return Err(Error::InvalidArgument(
                "dyadic elements from different extensions".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.k.min(o.k);
        Ok(Self::from_numerators(self.label, k, &(&self.p + &o.p), &(&self.q + &o.q)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.k.min(o.k);
        Ok(Self::from_numerators(self.label, k, &(&self.p - &o.p), &(&self.q - &o.q)))
    }

    pub fn neg(&self) -> Self {
        Self::from_numerators(self.label, self.k, &(-&self.p), &(-&self.q))
    }

    pub fn conj(&self) -> Self {
        Self::from_numerators(self.label, self.k, &self.p, &(-&self.q))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.k.min(o.k);
        let c = BigInt::from(self.label.c());
        let mut p = &self.p * &o.p + &c * &self.q * &o.q;
        let mut q = &self.p * &o.q + &self.q * &o.p;
        if self.label == ExtLabel::C5 {
            // numerators are over denominator 2; the product needs one
            // halving, which the integrality constraint guarantees is exact
            debug_assert!(p.is_even() && q.is_even());
            p /= 2;
            q /= 2;
        }
        Ok(Self::from_numerators(self.label, k, &p, &q))
    }

    pub fn square(&self) -> Self {
        self.mul(self).unwrap()
    }

    /// Norm to Q_2 (a 2-adic residue at the element's precision).
    pub fn norm(&self) -> BigInt {
        let c = BigInt::from(self.label.c());
        let mut n = &self.p * &self.p - c * &self.q * &self.q;
        if self.label == ExtLabel::C5 {
            // (p^2 - 5 q^2)/4 is integral under the parity constraint
            debug_assert!(n.mod_floor(&BigInt::from(4)).is_zero());
            n /= 4;
        }
        n.mod_floor(&Self::modulus(self.k))
    }

    /// Valuation with respect to the uniformizer, derived from the norm:
    /// v_2(N) in the ramified fields, v_2(N)/2 over sqrt(5). None when the
    /// valuation is not determined at the stored precision.
    pub fn valuation(&self) -> Result<Option<u32>> {
        if self.p.is_zero() && self.q.is_zero() {
            return Ok(None);
        }
        // exact norm of the stored representative (c is never a square, so
        // it vanishes only for the zero pair)
        let c = BigInt::from(self.label.c());
        let mut n = &self.p * &self.p - c * &self.q * &self.q;
        if self.label == ExtLabel::C5 {
            n /= 4;
        }
        if n.is_zero() {
            return Err(Error::Internal("nonzero pair with zero norm".into()));
        }
        let v2 = numth::valuation_int(2, &n)?;
        // representatives are residues mod 2^k, so only valuations safely
        // below the precision are trustworthy
        if self.label.is_ramified() {
            if v2 >= self.k {
                return Ok(None);
            }
            Ok(Some(v2))
        } else {
            if v2 + 2 >= self.k {
                return Ok(None);
            }
            Ok(Some(v2 / 2))
        }
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.valuation()? == Some(0))
    }

    /// Exact division when the quotient is integral; errors if the divisor
    /// valuation exceeds the dividend's or precision would vanish.
    pub fn div_exact(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let vo = o
            .valuation()?
            .ok_or(Error::PrecisionExhausted(o.k))?;
        let k = self.k.min(o.k);
        if k <= vo {
            return Err(Error::PrecisionUnderflow);
        }
        // multiply by the conjugate, divide by the norm
        let c = BigInt::from(self.label.c());
        let (np, nq) = if self.label == ExtLabel::C5 {
            (
                (&self.p * &o.p - &c * &self.q * &o.q) / 2,
                (&o.p * &self.q - &self.p * &o.q) / 2,
            )
        } else {
            (
                &self.p * &o.p - &c * &self.q * &o.q,
                &o.p * &self.q - &self.p * &o.q,
            )
        };
        let mut nn = &o.p * &o.p - &c * &o.q * &o.q;
        if self.label == ExtLabel::C5 {
            nn /= 4;
        }
        let v2n = numth::valuation_int(2, &nn)?;
        let odd = &nn >> v2n;
        let m = Self::modulus(k + v2n);
        let inv = mod_inv_2adic(&odd, k + v2n)?;
        let scale = |t: &BigInt| -> Result<BigInt> {
            let t = (t * &inv).mod_floor(&m);
            if !t.mod_floor(&(BigInt::one() << v2n)).is_zero() {
                return Err(Error::InvalidArgument("division is not exact".into()));
            }
            Ok(t >> v2n)
        };
        let p = scale(&np)?;
        let q = scale(&nq)?;
        let k_out = k - vo;
        Ok(Self::from_numerators(self.label, k_out, &p, &q))
    }

    /// Strips the uniformizer power: returns (v, unit part).
    pub fn unit_part(&self) -> Result<(u32, Self)> {
        let v = self
            .valuation()?
            .ok_or(Error::PrecisionExhausted(self.k))?;
        let mut out = self.clone();
        let pi = self.label.uniformizer();
        for _ in 0..v {
            out = out.div_exact(&pi)?;
        }
        Ok((v, out))
    }

    /// Congruence modulo a principal ideal (m): (self - other)/m integral.
    pub fn congruent_mod(&self, other: &Self, modulus: &Self) -> Result<bool> {
        let diff = self.sub(other)?;
        if diff.is_zero_at_precision() {
            return Ok(true);
        }
        let vd = diff.valuation()?;
        let vm = modulus
            .valuation()?
            .ok_or(Error::PrecisionExhausted(modulus.k))?;
        match vd {
            None => {
                // zero to stored precision; demand enough headroom
                if diff.k > vm + 2 {
                    Ok(true)
                } else {
                    Err(Error::PrecisionExhausted(diff.k))
                }
            }
            Some(v) => Ok(v >= vm),
        }
    }
}

fn mod_inv_2adic(odd: &BigInt, k: u32) -> Result<BigInt> {
    let m = BigInt::one() << k;
    let e = odd.extended_gcd(&m);
    if !e.gcd.is_one() {
        return Err(Error::Internal("2-adic inverse of a non-unit".into()));
    }
    Ok(e.x.mod_floor(&m))
}

/// Square-class representatives from the case analysis: a unit r is a square
/// iff it is congruent to one of these modulo 4*pi (modulo 4 over sqrt(5)).
pub fn square_unit_classes(label: ExtLabel) -> Vec<DyadicQuadElement> {
    let k = 16;
    let e = |u: i64, v: i64| {
        DyadicQuadElement::from_coords(label, k, &BigInt::from(u), &BigInt::from(v)).unwrap()
    };
    match label {
        ExtLabel::C2 => vec![e(1, 0), e(3, 2)],
        ExtLabel::C3 => vec![e(1, 0), e(3, 0)],
        ExtLabel::C7 => vec![e(1, 0), e(-1, 0)],
        ExtLabel::C10 => vec![e(1, 0), e(3, 2)],
        ExtLabel::C11 => vec![e(1, 0), e(3, 0)],
        ExtLabel::C14 => vec![e(1, 0), e(-1, 0)],
        ExtLabel::C5 => vec![
            e(1, 0),
            DyadicQuadElement::from_half_coords(label, k, &BigInt::from(3), &BigInt::from(1))
                .unwrap(),
            DyadicQuadElement::from_half_coords(label, k, &BigInt::from(3), &BigInt::from(-1))
                .unwrap(),
        ],
    }
}

/// Unit classes that are sums of two squares: h = 1 (mod 2) in the ramified
/// fields; the six listed classes (mod 4) over sqrt(5).
pub fn sum_two_squares_unit_classes(label: ExtLabel) -> Vec<DyadicQuadElement> {
    let k = 16;
    if label == ExtLabel::C5 {
        let half = |p: i64, q: i64| {
            DyadicQuadElement::from_half_coords(label, k, &BigInt::from(p), &BigInt::from(q))
                .unwrap()
        };
        let int = |u: i64| {
            DyadicQuadElement::from_coords(label, k, &BigInt::from(u), &BigInt::zero()).unwrap()
        };
        vec![
            int(1),
            int(3),
            half(3, 1),
            half(3, -1),
            half(-3, 1),
            half(-3, -1),
        ]
    } else {
        // placeholder: membership for ramified fields is the parity test below
        Vec::new()
    }
}

/// The congruence modulus of the square-class case analysis: 4*pi, or 4
/// over sqrt(5).
pub fn square_class_modulus(label: ExtLabel) -> DyadicQuadElement {
    let four =
        DyadicQuadElement::from_coords(label, 16, &BigInt::from(4), &BigInt::zero()).unwrap();
    if label == ExtLabel::C5 {
        four
    } else {
        four.mul(&label.uniformizer()).unwrap()
    }
}

/// Case-by-case squareness test: even valuation plus the unit-part
/// congruence list for the extension.
pub fn is_square(label: ExtLabel, t: &DyadicQuadElement) -> Result<bool> {
    if t.label() != label {
        return Err(Error::InvalidArgument("label mismatch".into()));
    }
    if t.precision() < 8 {
        return Err(Error::PrecisionExhausted(t.precision()));
    }
    let (v, unit) = t.unit_part()?;
    if v % 2 != 0 {
        return Ok(false);
    }
    let modulus = square_class_modulus(label);
    for rep in square_unit_classes(label) {
        if unit.congruent_mod(&rep, &modulus)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether a unit h is a sum of two squares in Q_2(sqrt c): h = 1 (mod 2)
/// when c is one of the ramified labels, membership in the six-class list
/// over sqrt(5).
pub fn unit_is_sum_two_squares(label: ExtLabel, h: &DyadicQuadElement) -> Result<bool> {
    if h.label() != label {
        return Err(Error::InvalidArgument("label mismatch".into()));
    }
    if !h.is_unit()? {
        return Err(Error::InvalidArgument("h must be a unit".into()));
    }
    if h.precision() < 4 {
        return Err(Error::PrecisionExhausted(h.precision()));
    }
    if label != ExtLabel::C5 {
        // 2 | h - 1, i.e. both integral coordinates of h - 1 even.
        let one = DyadicQuadElement::from_coords(label, h.precision(), &BigInt::one(), &BigInt::zero())?;
        let diff = h.sub(&one)?;
        let (p, q) = diff.numerators();
        return Ok(p.is_even() && q.is_even());
    }
    let four = DyadicQuadElement::from_coords(label, 16, &BigInt::from(4), &BigInt::zero())?;
    for rep in sum_two_squares_unit_classes(label) {
        if h.congruent_mod(&rep, &four)? {
            return Ok(true);
        }
    }
    Ok(false)
}
