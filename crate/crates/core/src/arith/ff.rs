//! Prime fields, small extension fields, and field-generic linear algebra.
//!
//! The same substitution and row-reduction code has to run over ℚ (exact
//! conjugation), over F_p (reductions of presentations), and over F_{p^k}
//! (diagnostic flag enumeration in extension degree k). A small context
//! trait keeps one implementation for all three.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::primes::PrimeInt;
use crate::arith::valuation::{ord_p, Valuation};
use crate::error::{Error, Result};

/// An element of F_p, carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FFElem {
    residue: u64,
    modulus: u64,
}

impl FFElem {
    pub fn new(residue: u64, modulus: u64) -> FFElem {
        assert!(modulus > 1, "modulus must exceed 1");
        FFElem {
            residue: residue % modulus,
            modulus,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn add(&self, other: &FFElem) -> FFElem {
        assert_eq!(self.modulus, other.modulus);
        FFElem::new(
            addmod(self.residue, other.residue, self.modulus),
            self.modulus,
        )
    }

    pub fn mul(&self, other: &FFElem) -> FFElem {
        assert_eq!(self.modulus, other.modulus);
        FFElem::new(
            mulmod(self.residue, other.residue, self.modulus),
            self.modulus,
        )
    }

    pub fn neg(&self) -> FFElem {
        FFElem::new(
            if self.residue == 0 {
                0
            } else {
                self.modulus - self.residue
            },
            self.modulus,
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FFElem> {
        inv_mod(self.residue, self.modulus).map(|r| FFElem::new(r, self.modulus))
    }
}

fn addmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` mod `m` by extended Euclid; `None` when gcd(a, m) > 1.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Reduction of a rational number mod p. Requires `ord_p(x) ≥ 0`; the
/// denominator is then a unit mod p and gets inverted exactly.
pub fn reduce_mod_p(x: &BigRational, p: &PrimeInt) -> Result<FFElem> {
    if let Valuation::Finite(v) = ord_p(x, p) {
        if v < 0 {
            return Err(Error::NotIntegralAtP {
                value: x.to_string(),
                prime: p.to_string(),
                ord: v,
            });
        }
    }
    let modulus = p.to_u64().ok_or_else(|| {
        Error::SizeLimit(format!("prime {p} too large for residue arithmetic"))
    })?;
    let m = BigInt::from(modulus);
    let num = x.numer().mod_floor(&m).to_u64().expect("residue fits");
    let den = x.denom().mod_floor(&m).to_u64().expect("residue fits");
    let den_inv = inv_mod(den, modulus).expect("denominator is a unit mod p");
    Ok(FFElem::new(mulmod(num, den_inv, modulus), modulus))
}

/// Field operations parameterized by a context value, so runtime moduli
/// share code with ℚ.
pub trait FieldCtx {
    type El: Clone + PartialEq + Eq + Ord + std::hash::Hash + std::fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
}

/// Fields with finitely many elements, enumerable in a fixed order.
pub trait FiniteFieldCtx: FieldCtx {
    fn order(&self) -> u64;
    /// All elements, in a deterministic order starting with 0.
    fn elements(&self) -> Vec<Self::El>;
    /// Canonical image of a ground-field residue.
    fn lift_residue(&self, r: u64) -> Self::El;
}

/// F_p with a u64 modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl FieldCtx for PrimeField {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        addmod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        addmod(*a, self.p - *b % self.p, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.p)
    }
}

impl FiniteFieldCtx for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
    fn lift_residue(&self, r: u64) -> u64 {
        r % self.p
    }
}

/// F_{p^k} as F_p[T]/(f), for the first monic irreducible f of degree k in
/// base-p counting order of the non-leading coefficients. Elements are
/// little-endian coefficient vectors of length k.
///
/// Supports k ≤ 3, where irreducibility of a monic polynomial is
/// equivalent to having no roots in F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    k: usize,
    /// Non-leading coefficients of the monic modulus, length k.
    modulus_low: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, k: usize) -> Result<ExtField> {
        if !(1..=3).contains(&k) {
            return Err(Error::SizeLimit(format!(
                "extension degree {k} outside supported range 1..=3"
            )));
        }
        if k == 1 {
            // F_p[T]/(T): constants only.
            return Ok(ExtField {
                p,
                k,
                modulus_low: vec![0],
            });
        }
        let gf = PrimeField { p };
        let total = (p as u128).pow(k as u32);
        for code in 0..total {
            let mut low = Vec::with_capacity(k);
            let mut c = code;
            for _ in 0..k {
                low.push((c % p as u128) as u64);
                c /= p as u128;
            }
            // Monic f(T) = T^k + Σ low[i] T^i; degrees 2 and 3 are
            // irreducible exactly when f has no roots.
            let has_root = (0..p).any(|x| {
                let mut acc = 1u64; // x^k
                for _ in 0..k {
                    acc = gf.mul(&acc, &x);
                }
                let mut val = acc;
                let mut pow = 1u64;
                for c in &low {
                    val = gf.add(&val, &gf.mul(c, &pow));
                    pow = gf.mul(&pow, &x);
                }
                val == 0
            });
            if !has_root {
                return Ok(ExtField {
                    p,
                    k,
                    modulus_low: low,
                });
            }
        }
        unreachable!("irreducible polynomials of degree 2 and 3 exist over every prime field")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    fn ground(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    /// Reduce a raw coefficient vector (any length) mod the monic modulus.
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let gf = self.ground();
        while v.len() > self.k {
            let top = v.pop().expect("nonempty");
            if top != 0 {
                let deg = v.len() - self.k;
                for (i, c) in self.modulus_low.iter().enumerate() {
                    let t = gf.mul(&top, c);
                    v[deg + i] = gf.sub(&v[deg + i], &t);
                }
            }
        }
        v.resize(self.k, 0);
        v
    }
}

impl FieldCtx for ExtField {
    type El = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1 % self.p;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let gf = self.ground();
        a.iter().zip(b).map(|(x, y)| gf.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let gf = self.ground();
        a.iter().zip(b).map(|(x, y)| gf.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let gf = self.ground();
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = gf.mul(x, y);
                prod[i + j] = gf.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let gf = self.ground();
        a.iter().map(|x| gf.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid in F_p[T] against the monic modulus.
        let gf = self.ground();
        let mut f: Vec<u64> = {
            let mut m = self.modulus_low.clone();
            m.push(1);
            m
        };
        let mut g = trim(a.clone());
        let mut s: Vec<u64> = vec![];
        let mut t: Vec<u64> = vec![1];
        while !g.is_empty() {
            let (q, r) = poly_divmod(&gf, &f, &g);
            let new_t = poly_sub(&gf, &s, &poly_mul(&gf, &q, &t));
            f = g;
            g = r;
            s = t;
            t = new_t;
        }
        // f is now gcd(modulus, a), a nonzero constant since the modulus
        // is irreducible and a ≠ 0.
        debug_assert_eq!(f.len(), 1);
        let c = gf.inv(&f[0]).expect("gcd constant is nonzero");
        let mut out: Vec<u64> = s.iter().map(|x| gf.mul(x, &c)).collect();
        out.resize(self.k, 0);
        Some(self.reduce(out))
    }
}

impl FiniteFieldCtx for ExtField {
    fn order(&self) -> u64 {
        (self.p as u128).pow(self.k as u32) as u64
    }
    fn elements(&self) -> Vec<Vec<u64>> {
        let total = self.order();
        (0..total)
            .map(|code| {
                let mut v = Vec::with_capacity(self.k);
                let mut c = code;
                for _ in 0..self.k {
                    v.push(c % self.p);
                    c /= self.p;
                }
                v
            })
            .collect()
    }
    fn lift_residue(&self, r: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = r % self.p;
        v
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(gf: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = gf.mul(x, y);
            out[i + j] = gf.add(&out[i + j], &t);
        }
    }
    trim(out)
}

fn poly_sub(gf: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = gf.sub(&x, &y);
    }
    trim(out)
}

fn poly_divmod(gf: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (vec![], trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - b.len() + 1];
    let lead_inv = gf.inv(b.last().expect("nonzero leading")).expect("unit");
    for i in (0..quot.len()).rev() {
        let top = rem[i + b.len() - 1];
        if top == 0 {
            continue;
        }
        let q = gf.mul(&top, &lead_inv);
        quot[i] = q;
        for (j, c) in b.iter().enumerate() {
            let t = gf.mul(&q, c);
            rem[i + j] = gf.sub(&rem[i + j], &t);
        }
    }
    (trim(quot), trim(rem))
}

/// ℚ as a `FieldCtx`, so exact conjugation shares the generic machinery.
#[derive(Clone, Copy, Debug, Default)]
pub struct RatCtx;

impl FieldCtx for RatCtx {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// Matrix product of square row-major matrices.
pub fn mat_mul<C: FieldCtx>(ctx: &C, a: &[Vec<C::El>], b: &[Vec<C::El>]) -> Vec<Vec<C::El>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ctx.zero();
                    for k in 0..n {
                        acc = ctx.add(&acc, &ctx.mul(&a[i][k], &b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant by Laplace expansion. Intended for the small matrices that
/// act on coordinates (dimension ≤ 4); large determinants go through the
/// fraction-free code in `arith::matrix`.
pub fn mat_det<C: FieldCtx>(ctx: &C, m: &[Vec<C::El>]) -> C::El {
    let n = m.len();
    match n {
        0 => ctx.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ctx.zero();
            for j in 0..n {
                if ctx.is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<C::El>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = ctx.mul(&m[0][j], &mat_det(ctx, &minor));
                acc = if j % 2 == 0 {
                    ctx.add(&acc, &term)
                } else {
                    ctx.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

/// Adjugate matrix: `A · adj(A) = det(A) · I`, valid over any field and
/// polynomial in the entries (no inverses taken).
pub fn mat_adjugate<C: FieldCtx>(ctx: &C, m: &[Vec<C::El>]) -> Vec<Vec<C::El>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ctx.one()]];
    }
    let mut adj = vec![vec![ctx.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // adj[i][j] is the (j, i) cofactor.
            let minor: Vec<Vec<C::El>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let d = mat_det(ctx, &minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { ctx.neg(&d) };
        }
    }
    adj
}

/// Reduced row echelon form with zero rows dropped: a canonical basis for
/// the row span, used to key subspaces during flag enumeration.
pub fn rref<C: FieldCtx>(ctx: &C, mut rows: Vec<Vec<C::El>>) -> Vec<Vec<C::El>> {
    let ncols = match rows.first() {
        Some(r) => r.len(),
        None => return rows,
    };
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(src) = (pivot_row..rows.len()).find(|&r| !ctx.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let scale = ctx.inv(&rows[pivot_row][col]).expect("pivot is nonzero");
        for c in 0..ncols {
            rows[pivot_row][c] = ctx.mul(&rows[pivot_row][c], &scale);
        }
        for r in 0..rows.len() {
            if r != pivot_row && !ctx.is_zero(&rows[r][col]) {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let t = ctx.mul(&factor, &rows[pivot_row][c]);
                    rows[r][c] = ctx.sub(&rows[r][c], &t);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}
