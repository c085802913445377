//! Arithmetic for the field tower F_p ⊆ F_q ⊆ F_{q^r} with q = p^m.
//!
//! Elements are stored as indices into a canonical enumeration: the
//! little-endian base-p packing of the coefficient vector in the power
//! basis of a fixed modulus. Index 0 is zero, index 1 is one, and indices
//! below p are the prime-field constants. The modulus for each degree is
//! the lowest-lexicographic monic irreducible polynomial, where
//! "lexicographic" compares the packed index of the non-leading
//! coefficients; this makes every construction reproducible from
//! (p, m, r) alone.
//!
//! Multiplication goes through discrete-log tables built from the first
//! multiplicative generator in enumeration order. Small fields also get
//! full order×order add/mul tables, which the enumeration-heavy callers
//! index directly.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the extension-field order p^(m·r).
pub const DEFAULT_FIELD_CAP: u64 = 1 << 24;

/// Orders up to this get full order×order multiplication/addition tables.
const FULL_TABLE_MAX_ORDER: u64 = 2048;

const NO_LOG: u32 = u32::MAX;

/// A field element, stored as its index in the owning field's canonical
/// enumeration. Elements carry no field pointer; all arithmetic goes
/// through the owning [`FieldSpec`] or [`Tower`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Decompose a prime power: q = p^m with p prime.
pub fn split_prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= q as u64 {
        if q % p == 0 {
            let mut n = q;
            let mut m = 0u32;
            while n % p == 0 {
                n /= p;
                m += 1;
            }
            return if n == 1 {
                Ok((p, m))
            } else {
                Err(Error::NotPrimePower(q))
            };
        }
        p += 1;
    }
    // q itself is prime.
    Ok((q, 1))
}

fn unpack_digits(p: u32, len: usize, mut v: u32) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    debug_assert_eq!(v, 0);
    out
}

fn pack_digits(p: u32, digits: &[u32]) -> u32 {
    let mut out = 0u64;
    for &d in digits.iter().rev() {
        out = out * p as u64 + d as u64;
    }
    out as u32
}

/// Schoolbook product of two coefficient vectors of length m, reduced by
/// the monic `modulus` of degree m. Used only during table construction.
fn raw_mul(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut acc = vec![0u64; 2 * m.max(1)];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    for i in (m..2 * m.max(1)).rev() {
        let c = acc[i];
        if c == 0 {
            continue;
        }
        acc[i] = 0;
        for (j, &mj) in modulus.iter().take(m).enumerate() {
            // acc[i-m+j] -= c * modulus[j]
            let sub = c * mj as u64 % p64;
            acc[i - m + j] = (acc[i - m + j] + p64 - sub) % p64;
        }
    }
    acc.truncate(m);
    acc.iter().map(|&x| x as u32).collect()
}

fn raw_pow(p: u32, modulus: &[u32], a: &[u32], mut e: u64) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut result = vec![0u32; m.max(1)];
    result[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = raw_mul(p, modulus, &result, &base);
        }
        base = raw_mul(p, modulus, &base, &base);
        e >>= 1;
    }
    result
}

/// Remainder of `poly` (any degree) by the monic `divisor`; true iff zero.
fn divides(p: u32, divisor: &[u32], poly: &[u32]) -> bool {
    let e = divisor.len() - 1;
    let p64 = p as u64;
    let mut rem: Vec<u64> = poly.iter().map(|&x| x as u64).collect();
    for i in (e..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        rem[i] = 0;
        for (j, &dj) in divisor.iter().take(e).enumerate() {
            let sub = c * dj as u64 % p64;
            rem[i - e + j] = (rem[i - e + j] + p64 - sub) % p64;
        }
    }
    rem.iter().all(|&x| x == 0)
}

/// Exhaustive trial division by every monic polynomial of degree ≤ deg/2.
fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let d = poly.len() - 1;
    debug_assert_eq!(poly[d], 1, "modulus candidates are monic");
    if d == 1 {
        return true;
    }
    for e in 1..=d / 2 {
        let count = (p as u64).pow(e as u32);
        for v in 0..count {
            let mut divisor = unpack_digits(p, e, v as u32);
            divisor.push(1);
            if divides(p, &divisor, poly) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree d over F_p in packed-index order of
/// the non-leading coefficients.
fn lowest_lex_irreducible(p: u32, d: u32) -> Vec<u32> {
    let count = (p as u64).pow(d);
    for v in 0..count {
        let mut poly = unpack_digits(p, d as usize, v as u32);
        poly.push(1);
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of degree {d} over F_{p} exists")
}

/// A concrete finite field F_{p^m} = F_p[t]/(modulus).
pub struct FieldSpec {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: Felt,
    exp: Vec<u32>,
    log: Vec<u32>,
    mul_table: Option<Vec<u32>>,
    add_table: Option<Vec<u32>>,
    neg_table: Option<Vec<u32>>,
}

impl FieldSpec {
    /// Build F_{p^m} with the canonical modulus. Fails if p is not prime
    /// or p^m exceeds `cap`.
    pub fn build(p: u32, m: u32, cap: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be ≥ 1".into()));
        }
        let order128 = (p as u128).pow(m);
        if order128 > cap as u128 || order128 > (1u128 << 31) {
            return Err(Error::CapExceeded {
                order: order128,
                cap,
            });
        }
        let order = order128 as u32;
        let modulus = lowest_lex_irreducible(p, m);

        // Multiplicative generator: first element (in enumeration order)
        // of order exactly order-1.
        let group = order as u64 - 1;
        let factors = distinct_prime_factors(group);
        let one = {
            let mut v = vec![0u32; m as usize];
            v[0] = 1;
            v
        };
        let mut generator = None;
        for cand in 1..order {
            let digits = unpack_digits(p, m as usize, cand);
            let is_gen = factors
                .iter()
                .all(|&f| raw_pow(p, &modulus, &digits, group / f) != one);
            if is_gen {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![NO_LOG; order as usize];
        let gen_digits = unpack_digits(p, m as usize, generator);
        let mut acc = one.clone();
        for i in 0..group as usize {
            let idx = pack_digits(p, &acc);
            exp[i] = idx;
            assert_eq!(log[idx as usize], NO_LOG, "generator has full order");
            log[idx as usize] = i as u32;
            acc = raw_mul(p, &modulus, &acc, &gen_digits);
        }
        assert_eq!(pack_digits(p, &acc), 1, "g^(order-1) = 1");
        for i in group as usize..2 * group as usize {
            exp[i] = exp[i - group as usize];
        }

        let mut field = FieldSpec {
            p,
            m,
            order,
            modulus,
            generator: Felt(generator),
            exp,
            log,
            mul_table: None,
            add_table: None,
            neg_table: None,
        };

        if order as u64 <= FULL_TABLE_MAX_ORDER {
            let n = order as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            let mut neg = vec![0u32; n];
            for a in 0..order {
                neg[a as usize] = field.neg_slow(a);
                for b in a..order {
                    let s = field.add_slow(a, b);
                    let m_ = field.mul_slow(a, b);
                    add[(a * order + b) as usize] = s;
                    add[(b * order + a) as usize] = s;
                    mul[(a * order + b) as usize] = m_;
                    mul[(b * order + a) as usize] = m_;
                }
            }
            field.add_table = Some(add);
            field.mul_table = Some(mul);
            field.neg_table = Some(neg);
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Little-endian coefficients of the modulus, length m+1, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Felt {
        self.generator
    }

    pub fn elt(&self, index: u32) -> Felt {
        assert!(index < self.order, "element index {index} out of range");
        Felt(index)
    }

    pub fn checked_elt(&self, index: u32) -> Result<Felt> {
        if index < self.order {
            Ok(Felt(index))
        } else {
            Err(Error::InvalidParameter(format!(
                "element index {index} out of range for field of order {}",
                self.order
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.order).map(Felt)
    }

    /// Little-endian coefficient vector over F_p, length m.
    pub fn coeffs(&self, a: Felt) -> Vec<u32> {
        unpack_digits(self.p, self.m as usize, a.0)
    }

    pub fn from_coeffs(&self, digits: &[u32]) -> Result<Felt> {
        if digits.len() > self.m as usize {
            return Err(Error::ArityMismatch {
                expected: self.m as usize,
                got: digits.len(),
            });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {d} not reduced mod {}",
                self.p
            )));
        }
        let mut full = digits.to_vec();
        full.resize(self.m as usize, 0);
        Ok(Felt(pack_digits(self.p, &full)))
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let (mut x, mut y) = (a, b);
        let mut out = 0u32;
        let mut mult = 1u32;
        while x != 0 || y != 0 {
            let s = (x % p + y % p) % p;
            out += s * mult;
            x /= p;
            y /= p;
            mult = mult.wrapping_mul(p);
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a;
        let mut out = 0u32;
        let mut mult = 1u32;
        while x != 0 {
            let d = x % p;
            if d != 0 {
                out += (p - d) * mult;
            }
            x /= p;
            mult = mult.wrapping_mul(p);
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as usize;
        let lb = self.log[b as usize] as usize;
        self.exp[la + lb]
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        match &self.add_table {
            Some(t) => Felt(t[(a.0 * self.order + b.0) as usize]),
            None => Felt(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        match &self.neg_table {
            Some(t) => Felt(t[a.0 as usize]),
            None => Felt(self.neg_slow(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        match &self.mul_table {
            Some(t) => Felt(t[(a.0 * self.order + b.0) as usize]),
            None => Felt(self.mul_slow(a.0, b.0)),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Felt) -> Felt {
        assert!(!a.is_zero(), "inverse of zero");
        let group = (self.order - 1) as usize;
        Felt(self.exp[group - self.log[a.0 as usize] as usize])
    }

    pub fn div(&self, a: Felt, b: Felt) -> Felt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Felt, e: u64) -> Felt {
        if a.is_zero() {
            return if e == 0 { Felt::ONE } else { Felt::ZERO };
        }
        let group = (self.order - 1) as u64;
        let la = self.log[a.0 as usize] as u64;
        let idx = la * (e % group) % group;
        Felt(self.exp[idx as usize])
    }

    /// True iff `a` has a square root in this field.
    pub fn is_square(&self, a: Felt) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.log[a.0 as usize] % 2 == 0
    }

    /// A square root of `a`, when one exists. For odd order the root with
    /// even discrete log is returned, which fixes the choice of sign.
    pub fn sqrt(&self, a: Felt) -> Option<Felt> {
        if a.is_zero() {
            return Some(Felt::ZERO);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.order as u64 / 2));
        }
        let la = self.log[a.0 as usize];
        if la % 2 != 0 {
            return None;
        }
        Some(Felt(self.exp[(la / 2) as usize]))
    }

    /// Horner evaluation of a little-endian coefficient slice at x.
    pub fn eval_poly(&self, coeffs: &[Felt], x: Felt) -> Felt {
        let mut acc = Felt::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

/// Report for the row identity of the circulant conjugate matrix.
#[derive(Debug, Clone, Serialize)]
pub struct MRowIdentityReport {
    pub pass: bool,
    pub vectors_checked: u64,
    pub counterexample: Option<MRowCounterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MRowCounterexample {
    pub s: Vec<u32>,
    pub row: u32,
}

/// Per-base-element fiber sizes of the trace and norm maps.
#[derive(Debug, Clone, Serialize)]
pub struct FiberSizes {
    pub trace: Vec<u64>,
    pub norm: Vec<u64>,
}

/// The tower F_q ⊆ F_{q^r} with its subfield embedding, Frobenius data,
/// and a normal basis {α, α^q, …, α^(q^(r-1))} of F_{q^r} over F_q.
pub struct Tower {
    base: FieldSpec,
    ext: FieldSpec,
    r: u32,
    embed_table: Vec<Felt>,
    unembed_map: HashMap<u32, u32>,
    alpha: Felt,
    basis: Vec<Felt>,
    /// q^i mod (q^r - 1) for i in 0..r.
    frob_exps: Vec<u64>,
    norm_exponent: u64,
}

impl Tower {
    pub fn build(p: u32, m: u32, r: u32, cap: u64) -> Result<Tower> {
        if r == 0 {
            return Err(Error::InvalidParameter("tower degree r must be ≥ 1".into()));
        }
        let ext_degree = m
            .checked_mul(r)
            .ok_or_else(|| Error::InvalidParameter("m·r overflows".into()))?;
        let ext = FieldSpec::build(p, ext_degree, cap)?;
        let base = FieldSpec::build(p, m, cap)?;
        let q = base.order;

        // The base modulus splits in the extension; its first root (in
        // enumeration order) defines the subfield embedding.
        let mod_consts: Vec<Felt> = base.modulus.iter().map(|&c| Felt(c)).collect();
        let beta = ext
            .elements()
            .find(|&x| ext.eval_poly(&mod_consts, x).is_zero())
            .expect("the base modulus has a root in the extension");

        let mut embed_table = Vec::with_capacity(q as usize);
        let mut unembed_map = HashMap::with_capacity(q as usize);
        for a in 0..q {
            let digits = unpack_digits(p, m as usize, a);
            let mut acc = Felt::ZERO;
            for &d in digits.iter().rev() {
                acc = ext.add(ext.mul(acc, beta), Felt(d));
            }
            embed_table.push(acc);
            if unembed_map.insert(acc.0, a).is_some() {
                panic!("subfield embedding is not injective");
            }
        }

        let group = ext.order as u64 - 1;
        let frob_exps: Vec<u64> = (0..r).map(|i| mod_pow(q as u64, i as u64, group)).collect();
        let norm_exponent = (0..r).map(|i| (q as u64).pow(i)).sum::<u64>();

        let mut tower = Tower {
            base,
            ext,
            r,
            embed_table,
            unembed_map,
            alpha: Felt::ZERO,
            basis: Vec::new(),
            frob_exps,
            norm_exponent,
        };
        tower.verify_embedding();

        // Normal-basis search: first α (in enumeration order) whose
        // conjugates are independent over F_q. Independence is the Moore
        // criterion: the r×r circulant conjugate matrix has full rank.
        let (alpha, basis) = tower
            .ext
            .elements()
            .skip(1)
            .find_map(|cand| {
                let conj: Vec<Felt> = (0..r).map(|j| tower.frobenius(cand, j)).collect();
                let rows: Vec<Vec<Felt>> = (0..r as usize)
                    .map(|i| (0..r as usize).map(|j| conj[(i + j) % r as usize]).collect())
                    .collect();
                if crate::linalg::rank(&tower.ext, rows) == r as usize {
                    Some((cand, conj))
                } else {
                    None
                }
            })
            .expect("a normal basis exists for every finite extension");
        tower.alpha = alpha;
        tower.basis = basis;
        Ok(tower)
    }

    /// Ring-homomorphism and injectivity check for the embedding:
    /// exhaustive for small q, deterministic stride sampling above.
    fn verify_embedding(&self) {
        let q = self.base.order as u64;
        assert_eq!(self.unembed_map.len() as u64, q, "embedding is injective");
        assert_eq!(self.embed(Felt::ONE), Felt::ONE);
        let check = |a: Felt, b: Felt| {
            let (ea, eb) = (self.embed(a), self.embed(b));
            assert_eq!(
                self.embed(self.base.add(a, b)),
                self.ext.add(ea, eb),
                "embedding preserves addition"
            );
            assert_eq!(
                self.embed(self.base.mul(a, b)),
                self.ext.mul(ea, eb),
                "embedding preserves multiplication"
            );
        };
        if q * q <= 1 << 16 {
            for a in self.base.elements() {
                for b in self.base.elements() {
                    check(a, b);
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..1000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = Felt((state >> 33) as u32 % self.base.order);
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = Felt((state >> 33) as u32 % self.base.order);
                check(a, b);
            }
        }
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.base.order
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    /// Image of a base-field element in the extension.
    pub fn embed(&self, a: Felt) -> Felt {
        self.embed_table[a.0 as usize]
    }

    /// Preimage under the embedding, when x lies in the base subfield.
    pub fn unembed(&self, x: Felt) -> Option<Felt> {
        self.unembed_map.get(&x.0).map(|&a| Felt(a))
    }

    /// x^(q^i), computed in the discrete-log domain.
    pub fn frobenius(&self, x: Felt, i: u32) -> Felt {
        if x.is_zero() {
            return Felt::ZERO;
        }
        self.ext.pow(x, self.frob_exps[(i % self.r) as usize])
    }

    /// Norm down to F_q: x^((q^r-1)/(q-1)), returned as a base element.
    pub fn norm(&self, x: Felt) -> Felt {
        let v = self.ext.pow(x, self.norm_exponent);
        self.unembed(v).expect("norms land in the base subfield")
    }

    /// Trace down to F_q: x + x^q + … + x^(q^(r-1)), as a base element.
    pub fn trace(&self, x: Felt) -> Felt {
        let v = self.trace_ext(x);
        self.unembed(v).expect("traces land in the base subfield")
    }

    /// The trace value as an element of the extension.
    pub fn trace_ext(&self, x: Felt) -> Felt {
        let mut acc = Felt::ZERO;
        for i in 0..self.r {
            acc = self.ext.add(acc, self.frobenius(x, i));
        }
        acc
    }

    /// The norm value as an element of the extension.
    pub fn norm_ext(&self, x: Felt) -> Felt {
        self.ext.pow(x, self.norm_exponent)
    }

    /// Generator of the normal basis.
    pub fn alpha(&self) -> Felt {
        self.alpha
    }

    /// The conjugates α^(q^j), j = 0..r.
    pub fn basis(&self) -> &[Felt] {
        &self.basis
    }

    /// Coordinate isomorphism F_q^r → F_{q^r}: s ↦ Σ s_j α^(q^(j-1)).
    pub fn phi_basis(&self, s: &[Felt]) -> Result<Felt> {
        if s.len() != self.r as usize {
            return Err(Error::ArityMismatch {
                expected: self.r as usize,
                got: s.len(),
            });
        }
        let mut acc = Felt::ZERO;
        for (&sj, &bj) in s.iter().zip(&self.basis) {
            acc = self.ext.add(acc, self.ext.mul(self.embed(sj), bj));
        }
        Ok(acc)
    }

    /// The r×r circulant conjugate matrix M with M[i][j] = α^(q^((i+j) mod r)).
    pub fn matrix_m(&self) -> Vec<Vec<Felt>> {
        let r = self.r as usize;
        (0..r)
            .map(|i| (0..r).map(|j| self.basis[(i + j) % r]).collect())
            .collect()
    }

    /// Exhaustive check of the row identity (M·s)_i = Φ_B(s)^(q^i) over
    /// every coordinate vector s in F_q^r.
    pub fn m_row_identity_check(&self) -> MRowIdentityReport {
        let m = self.matrix_m();
        let mut checked = 0u64;
        for s in self.base_vectors() {
            let phi = self.phi_basis(&s).expect("vector has arity r");
            let embedded: Vec<Felt> = s.iter().map(|&c| self.embed(c)).collect();
            for (i, row) in m.iter().enumerate() {
                let mut lhs = Felt::ZERO;
                for (&mij, &sj) in row.iter().zip(&embedded) {
                    lhs = self.ext.add(lhs, self.ext.mul(mij, sj));
                }
                if lhs != self.frobenius(phi, i as u32) {
                    return MRowIdentityReport {
                        pass: false,
                        vectors_checked: checked,
                        counterexample: Some(MRowCounterexample {
                            s: s.iter().map(|c| c.0).collect(),
                            row: i as u32,
                        }),
                    };
                }
            }
            checked += 1;
        }
        MRowIdentityReport {
            pass: true,
            vectors_checked: checked,
            counterexample: None,
        }
    }

    /// All q^r coordinate vectors over the base field, in odometer order
    /// (first coordinate fastest).
    pub fn base_vectors(&self) -> impl Iterator<Item = Vec<Felt>> + '_ {
        let q = self.base.order as u64;
        let r = self.r as usize;
        let total = q.pow(self.r);
        (0..total).map(move |mut v| {
            (0..r)
                .map(|_| {
                    let c = (v % q) as u32;
                    v /= q;
                    Felt(c)
                })
                .collect()
        })
    }

    /// Extension elements grouped by trace value: fiber c holds every y
    /// with T(y) = c, ascending. Each fiber has exactly q^(r-1) elements.
    pub fn trace_fibers(&self) -> Vec<Vec<Felt>> {
        let mut fibers = vec![Vec::new(); self.base.order as usize];
        for y in self.ext.elements() {
            fibers[self.trace(y).0 as usize].push(y);
        }
        fibers
    }

    /// Per-extension-element norm, as base-field indices.
    pub fn norm_base_table(&self) -> Vec<u32> {
        self.ext.elements().map(|x| self.norm(x).0).collect()
    }

    /// Per-extension-element trace, as base-field indices.
    pub fn trace_base_table(&self) -> Vec<u32> {
        self.ext.elements().map(|x| self.trace(x).0).collect()
    }

    pub fn fiber_sizes(&self) -> FiberSizes {
        let mut trace = vec![0u64; self.base.order as usize];
        let mut norm = vec![0u64; self.base.order as usize];
        for x in self.ext.elements() {
            trace[self.trace(x).0 as usize] += 1;
            norm[self.norm(x).0 as usize] += 1;
        }
        FiberSizes { trace, norm }
    }
}
