//! Presentations of degree-d endomorphisms of P^n and their reductions.
//!
//! A presentation is a tuple of n + 1 homogeneous degree-d forms over ℚ,
//! not all zero. Two presentations related by a nonzero scalar define the
//! same rational map; conjugation by Γ in GL_{n+1}(ℚ) changes coordinates
//! on source and target simultaneously. Reduction mod p goes through the
//! normalized model, scaled so every coefficient is p-integral and some
//! coefficient is a p-adic unit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::ff::{PrimeField, RatCtx};
use crate::arith::matrix::RationalMatrix;
use crate::arith::primes::PrimeInt;
use crate::arith::valuation::{ord_p, Valuation};
use crate::arith::{reduce_mod_p, FieldCtx};
use crate::error::{Error, Result};
use crate::poly::{binomial, conjugate_tuple, monomial_table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    d: u32,
    /// coeffs[i] is the dense coefficient vector of the i-th form,
    /// indexed by the degree-d monomial table.
    coeffs: Vec<Vec<BigRational>>,
}

impl Presentation {
    pub fn new(n: usize, d: u32, coeffs: Vec<Vec<BigRational>>) -> Result<Presentation> {
        if n == 0 {
            return Err(Error::Construction(
                "projective dimension must be at least 1".into(),
            ));
        }
        if d == 0 {
            return Err(Error::Construction("degree must be at least 1".into()));
        }
        let dim = binomial(n + d as usize, d as usize)
            .ok_or_else(|| Error::SizeLimit(format!("monomial count overflows for n={n}, d={d}")))?;
        if coeffs.len() != n + 1 {
            return Err(Error::Construction(format!(
                "expected {} forms, got {}",
                n + 1,
                coeffs.len()
            )));
        }
        for (i, f) in coeffs.iter().enumerate() {
            if f.len() != dim {
                return Err(Error::Construction(format!(
                    "form {i} has {} coefficients, expected {dim}",
                    f.len()
                )));
            }
        }
        if coeffs.iter().all(|f| f.iter().all(|c| c.is_zero())) {
            return Err(Error::Construction("all coefficients are zero".into()));
        }
        Ok(Presentation { n, d, coeffs })
    }

    /// Build from sparse (coefficient, exponent vector) terms per form.
    /// Repeated monomials accumulate.
    pub fn from_sparse(
        n: usize,
        d: u32,
        forms: &[Vec<(BigRational, Vec<u32>)>],
    ) -> Result<Presentation> {
        if forms.len() != n + 1 {
            return Err(Error::Construction(format!(
                "expected {} forms, got {}",
                n + 1,
                forms.len()
            )));
        }
        let table = monomial_table(n, d);
        let mut coeffs = vec![vec![BigRational::zero(); table.len()]; n + 1];
        for (i, terms) in forms.iter().enumerate() {
            for (c, exps) in terms {
                let idx = table.index_of(exps).ok_or_else(|| {
                    Error::Construction(format!(
                        "form {i}: exponents {exps:?} are not a degree-{d} monomial in {} variables",
                        n + 1
                    ))
                })?;
                coeffs[i][idx] += c;
            }
        }
        Presentation::new(n, d, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Number of monomials per form.
    pub fn monomial_count(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn forms(&self) -> &[Vec<BigRational>] {
        &self.coeffs
    }

    pub fn coeff(&self, form: usize, idx: usize) -> &BigRational {
        &self.coeffs[form][idx]
    }

    pub fn iter_coeffs(&self) -> impl Iterator<Item = &BigRational> {
        self.coeffs.iter().flatten()
    }

    /// Nonzero terms of each form as (coefficient, exponents), in table
    /// order.
    pub fn to_sparse(&self) -> Vec<Vec<(BigRational, Vec<u32>)>> {
        let table = monomial_table(self.n, self.d);
        self.coeffs
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (c.clone(), table.exponents(i).to_vec()))
                    .collect()
            })
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Result<Presentation> {
        if c.is_zero() {
            return Err(Error::Construction("scaling by zero".into()));
        }
        Ok(Presentation {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|f| f.iter().map(|x| x * c).collect())
                .collect(),
        })
    }

    /// Conjugation by an invertible Γ: the i-th output form is
    /// Σ_k adj(Γ)[i][k] · F_k(Γ x).
    pub fn conjugate(&self, gamma: &RationalMatrix) -> Result<Presentation> {
        if gamma.nrows() != self.n + 1 || gamma.ncols() != self.n + 1 {
            return Err(Error::Construction(format!(
                "conjugating matrix must be {0}×{0}",
                self.n + 1
            )));
        }
        let ctx = RatCtx;
        let out = conjugate_tuple(&ctx, self.n, self.d, &self.coeffs, gamma.rows())?;
        Presentation::new(self.n, self.d, out)
    }

    /// True when the other presentation is a nonzero scalar multiple of
    /// this one (same rational map, same coordinates).
    pub fn projectively_equal(&self, other: &Presentation) -> bool {
        if self.n != other.n || self.d != other.d {
            return false;
        }
        let mut ratio: Option<BigRational> = None;
        for (a, b) in self.iter_coeffs().zip(other.iter_coeffs()) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = b / a;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) => {
                            if *prev != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        ratio.is_some()
    }

    /// Minimum p-adic valuation over all coefficients; finite because a
    /// presentation is never identically zero.
    pub fn min_coeff_ord(&self, p: &PrimeInt) -> i64 {
        let mut min: Option<i64> = None;
        for c in self.iter_coeffs() {
            if let Valuation::Finite(v) = ord_p(c, p) {
                min = Some(min.map_or(v, |m| m.min(v)));
            }
        }
        min.expect("presentation has a nonzero coefficient")
    }

    /// Scale by p^{-m} where m is the minimum coefficient valuation: the
    /// result is p-integral with at least one unit coefficient. Returns
    /// the normalized presentation and m.
    pub fn normalize_at(&self, p: &PrimeInt) -> (Presentation, i64) {
        let m = self.min_coeff_ord(p);
        if m == 0 {
            return (self.clone(), 0);
        }
        let p_big = BigInt::from_biguint(num_bigint::Sign::Plus, p.value().clone());
        let factor = if m > 0 {
            BigRational::new(BigInt::one(), p_big.pow(m as u32))
        } else {
            BigRational::from(p_big.pow((-m) as u32))
        };
        let scaled = self.scale(&factor).expect("p power is nonzero");
        (scaled, m)
    }

    /// Reduction mod p of the normalized model.
    pub fn reduce_at(&self, p: &PrimeInt) -> Result<ReducedPoint> {
        let (normalized, _) = self.normalize_at(p);
        let modulus = p.to_u64().ok_or_else(|| {
            Error::SizeLimit(format!("prime {p} too large for reduction"))
        })?;
        let coords = normalized
            .coeffs
            .iter()
            .map(|f| {
                f.iter()
                    .map(|c| reduce_mod_p(c, p).map(|e| e.residue()))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<Vec<u64>>>>()?;
        Ok(ReducedPoint {
            n: self.n,
            d: self.d,
            p: modulus,
            coords,
        })
    }

    /// Integer model with coprime coefficients and positive leading
    /// nonzero coefficient, plus the scalar that produced it.
    pub fn primitive_integral_model(&self) -> (Presentation, BigRational) {
        let denom_lcm = self
            .iter_coeffs()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer_gcd = self
            .iter_coeffs()
            .fold(BigInt::zero(), |acc, c| {
                acc.gcd(&(c.numer() * (&denom_lcm / c.denom())))
            });
        let mut factor = BigRational::new(denom_lcm, numer_gcd);
        let lead = self
            .iter_coeffs()
            .find(|c| !c.is_zero())
            .expect("nonzero coefficient exists");
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
        let scaled = self.scale(&factor).expect("factor is nonzero");
        (scaled, factor)
    }

    /// True when every coefficient is an integer and their gcd is 1.
    pub fn is_primitive_integral(&self) -> bool {
        if self.iter_coeffs().any(|c| !c.denom().is_one()) {
            return false;
        }
        let g = self
            .iter_coeffs()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        g.is_one()
    }

    fn variable_names(n: usize) -> Vec<String> {
        if n + 1 <= 4 {
            ["x", "y", "z", "w"][..n + 1]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (0..=n).map(|i| format!("x{i}")).collect()
        }
    }
}

fn format_term(coeff_str: Option<String>, exps: &[u32], vars: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(c) = coeff_str {
        parts.push(c);
    }
    for (v, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn format_form<T: fmt::Display + PartialEq>(
    terms: &[(T, Vec<u32>)],
    vars: &[String],
    one: &T,
) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(c, exps)| {
            let all_zero_exp = exps.iter().all(|&e| e == 0);
            let coeff_str = if c == one && !all_zero_exp {
                None
            } else {
                Some(c.to_string())
            };
            format_term(coeff_str, exps, vars)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = Presentation::variable_names(self.n);
        let one = BigRational::one();
        let rendered: Vec<String> = self
            .to_sparse()
            .iter()
            .map(|terms| format_form(terms, &vars, &one))
            .collect();
        write!(f, "({})", rendered.join(", "))
    }
}

/// A presentation reduced mod p: coefficient vectors over F_p, not all
/// zero by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoint {
    n: usize,
    d: u32,
    p: u64,
    coords: Vec<Vec<u64>>,
}

impl ReducedPoint {
    pub fn new(n: usize, d: u32, p: u64, coords: Vec<Vec<u64>>) -> Result<ReducedPoint> {
        let dim = binomial(n + d as usize, d as usize)
            .ok_or_else(|| Error::SizeLimit(format!("monomial count overflows for n={n}, d={d}")))?;
        if coords.len() != n + 1 || coords.iter().any(|f| f.len() != dim) {
            return Err(Error::Construction(
                "reduced point has wrong coefficient shape".into(),
            ));
        }
        let coords: Vec<Vec<u64>> = coords
            .into_iter()
            .map(|f| f.into_iter().map(|c| c % p).collect())
            .collect();
        if coords.iter().all(|f| f.iter().all(|&c| c == 0)) {
            return Err(Error::Construction(
                "reduced point is identically zero".into(),
            ));
        }
        Ok(ReducedPoint { n, d, p, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[Vec<u64>] {
        &self.coords
    }

    /// Nonzero coefficient positions as (form index, exponent vector).
    pub fn support(&self) -> Vec<(usize, Vec<u32>)> {
        let table = monomial_table(self.n, self.d);
        let mut out = Vec::new();
        for (i, f) in self.coords.iter().enumerate() {
            for (j, &c) in f.iter().enumerate() {
                if c != 0 {
                    out.push((i, table.exponents(j).to_vec()));
                }
            }
        }
        out
    }

    /// Conjugation over F_p by an invertible matrix given as residue rows.
    pub fn conjugate(&self, gamma: &[Vec<u64>]) -> Result<ReducedPoint> {
        let ctx = PrimeField { p: self.p };
        if gamma.len() != self.n + 1 || gamma.iter().any(|r| r.len() != self.n + 1) {
            return Err(Error::Construction(format!(
                "conjugating matrix must be {0}×{0}",
                self.n + 1
            )));
        }
        let rows: Vec<Vec<u64>> = gamma
            .iter()
            .map(|r| r.iter().map(|&x| x % self.p).collect())
            .collect();
        let out = conjugate_tuple(&ctx, self.n, self.d, &self.coords, &rows)?;
        ReducedPoint::new(self.n, self.d, self.p, out)
    }

    /// True when the other point is a nonzero scalar multiple of this one.
    pub fn projectively_equal(&self, other: &ReducedPoint) -> bool {
        if self.n != other.n || self.d != other.d || self.p != other.p {
            return false;
        }
        let ctx = PrimeField { p: self.p };
        let mut ratio: Option<u64> = None;
        for (a, b) in self
            .coords
            .iter()
            .flatten()
            .zip(other.coords.iter().flatten())
        {
            match (*a == 0, *b == 0) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = ctx.mul(b, &ctx.inv(a).expect("nonzero residue"));
                    match ratio {
                        None => ratio = Some(r),
                        Some(prev) => {
                            if prev != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        ratio.is_some()
    }
}

impl fmt::Display for ReducedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = Presentation::variable_names(self.n);
        let table = monomial_table(self.n, self.d);
        let rendered: Vec<String> = self
            .coords
            .iter()
            .map(|form| {
                let terms: Vec<(u64, Vec<u32>)> = form
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (c, table.exponents(i).to_vec()))
                    .collect();
                format_form(&terms, &vars, &1u64)
            })
            .collect();
        write!(f, "({}) mod {}", rendered.join(", "), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pres(n: usize, d: u32, forms: &[&[i64]]) -> Presentation {
        Presentation::new(
            n,
            d,
            forms
                .iter()
                .map(|f| f.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn p(v: u64) -> PrimeInt {
        PrimeInt::from_u64(v).unwrap()
    }

    #[test]
    fn construction_validates_shape() {
        assert!(Presentation::new(1, 2, vec![vec![rat(1, 1); 3]]).is_err());
        assert!(Presentation::new(1, 2, vec![vec![rat(0, 1); 3], vec![rat(0, 1); 3]]).is_err());
        assert!(Presentation::new(1, 2, vec![vec![rat(1, 1); 2], vec![rat(0, 1); 3]]).is_err());
        assert!(pres(1, 2, &[&[1, 0, 0], &[0, 0, 1]]).projectively_equal(&pres(
            1,
            2,
            &[&[3, 0, 0], &[0, 0, 3]]
        )));
    }

    #[test]
    fn sparse_round_trip() {
        let f = Presentation::from_sparse(
            1,
            2,
            &[
                vec![(rat(3, 1), vec![2, 0]), (rat(1, 2), vec![0, 2])],
                vec![(rat(1, 1), vec![1, 1])],
            ],
        )
        .unwrap();
        assert_eq!(f.coeff(0, 0), &rat(3, 1));
        assert_eq!(f.coeff(0, 2), &rat(1, 2));
        assert_eq!(f.coeff(1, 1), &rat(1, 1));
        let sparse = f.to_sparse();
        let again = Presentation::from_sparse(1, 2, &sparse).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn normalization_examples() {
        let f = pres(1, 2, &[&[3, 0, 0], &[0, 0, 3]]);
        let (g, m) = f.normalize_at(&p(3));
        assert_eq!(m, 1);
        assert_eq!(g.coeff(0, 0), &rat(1, 1));
        let h = Presentation::new(
            1,
            2,
            vec![
                vec![rat(1, 4), rat(0, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(1, 2)],
            ],
        )
        .unwrap();
        let (g2, m2) = h.normalize_at(&p(2));
        assert_eq!(m2, -2);
        assert_eq!(g2.coeff(0, 0), &rat(1, 1));
        assert_eq!(g2.coeff(1, 2), &rat(2, 1));
    }

    #[test]
    fn reduction_examples() {
        let f = pres(1, 2, &[&[2, 0, 0], &[0, 0, 1]]);
        let r = f.reduce_at(&p(2)).unwrap();
        assert_eq!(r.coords(), &[vec![0, 0, 0], vec![0, 0, 1]]);
        assert_eq!(r.support(), vec![(1, vec![0, 2])]);
        let r3 = f.reduce_at(&p(3)).unwrap();
        assert_eq!(r3.coords(), &[vec![2, 0, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn primitive_model_examples() {
        let f = Presentation::new(
            1,
            2,
            vec![
                vec![rat(-2, 3), rat(0, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(-4, 3)],
            ],
        )
        .unwrap();
        let (g, factor) = f.primitive_integral_model();
        assert!(g.is_primitive_integral());
        assert_eq!(g.coeff(0, 0), &rat(1, 1));
        assert_eq!(g.coeff(1, 2), &rat(2, 1));
        assert_eq!(factor, rat(-3, 2));
    }

    #[test]
    fn display_is_readable() {
        let f = pres(1, 2, &[&[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(f.to_string(), "(x^2 + 2*x*y, y^2)");
        let r = f.reduce_at(&p(2)).unwrap();
        assert_eq!(r.to_string(), "(x^2, y^2) mod 2");
    }

    #[test]
    fn reduced_conjugation_by_swap() {
        let r = ReducedPoint::new(1, 2, 2, vec![vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
        let swapped = r.conjugate(&[vec![0, 1], vec![1, 0]]).unwrap();
        // (0, y²) with x ↔ y becomes (x², 0): conjugation moves the
        // nonzero form to the other slot and swaps the variables.
        assert_eq!(swapped.coords(), &[vec![1, 0, 0], vec![0, 0, 0]]);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(
            raw in proptest::collection::vec(-40i64..=40, 6),
            prime in prop_oneof![Just(2u64), Just(3), Just(5)],
        ) {
            prop_assume!(raw.iter().any(|&x| x != 0));
            let f = Presentation::new(
                1, 2,
                vec![
                    raw[..3].iter().map(|&x| rat(x, 1)).collect(),
                    raw[3..].iter().map(|&x| rat(x, 1)).collect(),
                ],
            ).unwrap();
            let pr = p(prime);
            let (g, _) = f.normalize_at(&pr);
            let (h, m) = g.normalize_at(&pr);
            prop_assert_eq!(m, 0);
            prop_assert_eq!(g, h);
        }

        #[test]
        fn scaled_gamma_gives_projectively_equal_conjugate(
            raw in proptest::collection::vec(-5i64..=5, 6),
            g_raw in proptest::collection::vec(-3i64..=3, 4),
            c in 1i64..=4,
        ) {
            prop_assume!(raw.iter().any(|&x| x != 0));
            prop_assume!(g_raw[0] * g_raw[3] != g_raw[1] * g_raw[2]);
            let f = Presentation::new(
                1, 2,
                vec![
                    raw[..3].iter().map(|&x| rat(x, 1)).collect(),
                    raw[3..].iter().map(|&x| rat(x, 1)).collect(),
                ],
            ).unwrap();
            let gamma = RationalMatrix::from_rows(vec![
                vec![rat(g_raw[0], 1), rat(g_raw[1], 1)],
                vec![rat(g_raw[2], 1), rat(g_raw[3], 1)],
            ]);
            let scaled = gamma.scale(&rat(c, 1));
            let a = f.conjugate(&gamma).unwrap();
            let b = f.conjugate(&scaled).unwrap();
            prop_assert!(a.projectively_equal(&b));
        }

        #[test]
        fn scaling_commutes_with_conjugation(
            raw in proptest::collection::vec(-5i64..=5, 6),
            num in 1i64..=6,
            den in 1i64..=6,
        ) {
            prop_assume!(raw.iter().any(|&x| x != 0));
            let f = Presentation::new(
                1, 2,
                vec![
                    raw[..3].iter().map(|&x| rat(x, 1)).collect(),
                    raw[3..].iter().map(|&x| rat(x, 1)).collect(),
                ],
            ).unwrap();
            let gamma = RationalMatrix::from_rows(vec![
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ]);
            let c = rat(num, den);
            let a = f.scale(&c).unwrap().conjugate(&gamma).unwrap();
            let b = f.conjugate(&gamma).unwrap().scale(&c).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
