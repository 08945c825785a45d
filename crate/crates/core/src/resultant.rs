//! Resultants of presentations and their p-adic valuations.
//!
//! For P^1 the resultant is a Sylvester determinant. For higher dimension
//! it is the Macaulay quotient det(M)/det(M'), where M is the matrix of
//! the maps m ↦ (m / x_i^d) · F_i on degree-ν monomials, ν = (n+1)(d-1)+1,
//! each monomial assigned to the least i with x_i^d dividing it, and M'
//! is the square submatrix on monomials divisible by x_i^d for at least
//! two values of i. When det(M') vanishes the quotient is recovered by
//! interpolation: adding t to every diagonal entry perturbs the system to
//! (F_i + t·x_i^d), whose resultant is a polynomial in t of degree at
//! most (n+1)·d^n, evaluated back at t = 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::matrix::RationalMatrix;
use crate::arith::primes::PrimeInt;
use crate::arith::valuation::{ord_p, Valuation};
use crate::error::{Error, Result};
use crate::poly::monomial_table;
use crate::presentation::Presentation;

const MAX_SYLVESTER_DEGREE: u32 = 30;
const MAX_MACAULAY_DIM: usize = 400;

/// Sylvester matrix of the two degree-d binary forms of a P^1
/// presentation: d shifted rows of the first form's coefficients, then d
/// shifted rows of the second's.
pub fn sylvester_matrix(f: &Presentation) -> Result<RationalMatrix> {
    if f.n() != 1 {
        return Err(Error::Construction(
            "Sylvester matrix requires a P^1 presentation".into(),
        ));
    }
    let d = f.degree() as usize;
    if f.degree() > MAX_SYLVESTER_DEGREE {
        return Err(Error::Budget(format!(
            "degree {d} exceeds the Sylvester bound {MAX_SYLVESTER_DEGREE}"
        )));
    }
    let size = 2 * d;
    let mut rows = Vec::with_capacity(size);
    for block in 0..2 {
        for shift in 0..d {
            let mut row = vec![BigRational::zero(); size];
            for (j, c) in f.forms()[block].iter().enumerate() {
                row[shift + j] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(RationalMatrix::from_rows(rows))
}

pub fn sylvester_resultant(f: &Presentation) -> Result<BigRational> {
    Ok(sylvester_matrix(f)?.det())
}

/// Row structure of the Macaulay matrix for (n, d): for each degree-ν
/// monomial, the least form index i with x_i^d dividing it, and whether
/// that i is unique (a "reduced" monomial) or not.
struct MacaulayStructure {
    nu: u32,
    assigned: Vec<usize>,
    reduced: Vec<bool>,
}

fn macaulay_structure(n: usize, d: u32) -> Result<MacaulayStructure> {
    let nu = (n as u32 + 1) * (d - 1) + 1;
    let table = monomial_table(n, nu);
    if table.len() > MAX_MACAULAY_DIM {
        return Err(Error::Budget(format!(
            "Macaulay matrix dimension {} exceeds the bound {MAX_MACAULAY_DIM}",
            table.len()
        )));
    }
    let mut assigned = Vec::with_capacity(table.len());
    let mut reduced = Vec::with_capacity(table.len());
    for m in table.iter() {
        let divisors: Vec<usize> = (0..=n).filter(|&i| m[i] >= d).collect();
        // Degree ν = (n+1)(d-1)+1 forces some exponent to reach d.
        let least = *divisors.first().expect("pigeonhole divisor");
        assigned.push(least);
        reduced.push(divisors.len() == 1);
    }
    Ok(MacaulayStructure { nu, assigned, reduced })
}

/// Dense Macaulay matrix, with `t` added on the diagonal. With t ≠ 0 the
/// rows present the perturbed system (F_i + t·x_i^d).
fn macaulay_matrix(f: &Presentation, st: &MacaulayStructure, t: &BigRational) -> Vec<Vec<BigRational>> {
    let n = f.n();
    let d = f.degree();
    let big = monomial_table(n, st.nu);
    let small = monomial_table(n, d);
    let dim = big.len();
    let mut rows = vec![vec![BigRational::zero(); dim]; dim];
    for (r, m) in big.iter().enumerate() {
        let i = st.assigned[r];
        let mut quotient = m.clone();
        quotient[i] -= d;
        for (j, c) in f.forms()[i].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let col_exps: Vec<u32> = quotient
                .iter()
                .zip(small.exponents(j))
                .map(|(a, b)| a + b)
                .collect();
            let col = big.index_of(&col_exps).expect("product monomial in table");
            rows[r][col] += c;
        }
        if !t.is_zero() {
            rows[r][r] += t;
        }
    }
    rows
}

fn submatrix_on(rows: &[Vec<BigRational>], keep: &[usize]) -> RationalMatrix {
    RationalMatrix::from_rows(
        keep.iter()
            .map(|&r| keep.iter().map(|&c| rows[r][c].clone()).collect())
            .collect(),
    )
}

/// Macaulay resultant of a presentation with n ≥ 1.
pub fn macaulay_resultant(f: &Presentation) -> Result<BigRational> {
    let n = f.n();
    let d = f.degree();
    let st = macaulay_structure(n, d)?;
    let nonreduced: Vec<usize> = (0..st.reduced.len()).filter(|&i| !st.reduced[i]).collect();
    let zero = BigRational::zero();
    let rows = macaulay_matrix(f, &st, &zero);
    let minor = submatrix_on(&rows, &nonreduced).det();
    if !minor.is_zero() {
        let full = RationalMatrix::from_rows(rows).det();
        return Ok(full / minor);
    }
    // Interpolate Res(F_i + t·x_i^d) through points where the minor is
    // invertible, then evaluate at t = 0.
    let degree_bound = (n as u64 + 1)
        .checked_mul((d as u64).checked_pow(n as u32).ok_or_else(|| {
            Error::SizeLimit("resultant degree bound overflows".into())
        })?)
        .ok_or_else(|| Error::SizeLimit("resultant degree bound overflows".into()))?;
    let needed = degree_bound as usize + 1;
    let mut samples: Vec<(BigRational, BigRational)> = Vec::with_capacity(needed);
    // det M'(t) is monic of degree |M'| in t, so at most |M'| integer
    // sample points can fail.
    let mut t_int: i64 = 1;
    let limit = needed as i64 + nonreduced.len() as i64 + 1;
    while samples.len() < needed {
        if t_int > limit {
            return Err(Error::Invariant(
                "perturbed Macaulay minor vanished beyond its root bound".into(),
            ));
        }
        let t = BigRational::from(BigInt::from(t_int));
        t_int += 1;
        let rows_t = macaulay_matrix(f, &st, &t);
        let minor_t = submatrix_on(&rows_t, &nonreduced).det();
        if minor_t.is_zero() {
            continue;
        }
        let full_t = RationalMatrix::from_rows(rows_t).det();
        samples.push((t, full_t / minor_t));
    }
    Ok(lagrange_at_zero(&samples))
}

fn lagrange_at_zero(samples: &[(BigRational, BigRational)]) -> BigRational {
    let mut acc = BigRational::zero();
    for (j, (tj, yj)) in samples.iter().enumerate() {
        let mut weight = BigRational::one();
        for (k, (tk, _)) in samples.iter().enumerate() {
            if k != j {
                weight *= -tk / (tj - tk);
            }
        }
        acc += yj * weight;
    }
    acc
}

/// Resultant of a presentation: Sylvester determinant for n = 1, Macaulay
/// quotient otherwise. Zero exactly when the forms share a projective
/// common zero over the algebraic closure.
pub fn resultant(f: &Presentation) -> Result<BigRational> {
    if f.n() == 1 {
        sylvester_resultant(f)
    } else {
        macaulay_resultant(f)
    }
}

impl Presentation {
    /// A presentation defines an endomorphism exactly when its resultant
    /// is nonzero.
    pub fn is_morphism(&self) -> Result<bool> {
        Ok(!resultant(self)?.is_zero())
    }
}

/// d^n, the degree of the resultant in the coefficients of any one form.
pub fn resultant_form_degree(n: usize, d: u32) -> Result<u64> {
    (d as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::SizeLimit("resultant degree overflows".into()))
}

/// (n+1)·d^n: scaling a presentation by c scales the resultant by
/// c^{(n+1)·d^n}.
pub fn scaling_exponent(n: usize, d: u32) -> Result<u64> {
    (n as u64 + 1)
        .checked_mul(resultant_form_degree(n, d)?)
        .ok_or_else(|| Error::SizeLimit("scaling exponent overflows".into()))
}

/// (n+d)·d^n: conjugating by Γ multiplies the resultant by
/// det(Γ)^{(n+d)·d^n}.
pub fn conjugation_exponent(n: usize, d: u32) -> Result<u64> {
    (n as u64 + d as u64)
        .checked_mul(resultant_form_degree(n, d)?)
        .ok_or_else(|| Error::SizeLimit("conjugation exponent overflows".into()))
}

/// Minimum p-adic valuation over the entries of a matrix.
pub fn matrix_ord(gamma: &RationalMatrix, p: &PrimeInt) -> Valuation {
    let mut min = Valuation::Infinite;
    for row in gamma.rows() {
        for x in row {
            let v = ord_p(x, p);
            if v < min {
                min = v;
            }
        }
    }
    min
}

/// The p-adic data attached to a presentation's resultant: the raw
/// valuation, the minimum coefficient valuation, and the normalized
/// valuation ord_R = ord_p(ρ) - (n+1)·d^n · min_ord, which is invariant
/// under scaling and nonnegative whenever the resultant is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantValuation {
    pub prime: PrimeInt,
    pub resultant: BigRational,
    pub ord_resultant: Valuation,
    pub min_coeff_ord: i64,
    pub ord_r: Valuation,
}

pub fn valuation_report(f: &Presentation, p: &PrimeInt) -> Result<ResultantValuation> {
    let rho = resultant(f)?;
    let ord_rho = ord_p(&rho, p);
    let min_ord = f.min_coeff_ord(p);
    let shift = scaling_exponent(f.n(), f.degree())? as i64;
    let correction = shift
        .checked_mul(min_ord)
        .ok_or_else(|| Error::SizeLimit("normalized valuation overflows".into()))?;
    let ord_r = ord_rho.minus(Valuation::Finite(correction));
    Ok(ResultantValuation {
        prime: p.clone(),
        resultant: rho,
        ord_resultant: ord_rho,
        min_coeff_ord: min_ord,
        ord_r,
    })
}

/// Both sides of the conjugation identity
/// ord_p ρ(F^Γ) = ord_p ρ(F) + (n+d)·d^n · ord_p(det Γ),
/// together with the exact scalar identity ρ(F^Γ) = det(Γ)^{(n+d)·d^n}·ρ(F).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationValuationCheck {
    pub prime: PrimeInt,
    pub exponent: u64,
    pub det_ord: Valuation,
    pub lhs_ord: Valuation,
    pub rhs_ord: Valuation,
    pub holds: bool,
    pub holds_exactly: bool,
}

pub fn check_conjugation_valuation(
    f: &Presentation,
    gamma: &RationalMatrix,
    p: &PrimeInt,
) -> Result<ConjugationValuationCheck> {
    let det = gamma.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let exponent = conjugation_exponent(f.n(), f.degree())?;
    let rho = resultant(f)?;
    let conj = f.conjugate(gamma)?;
    let rho_conj = resultant(&conj)?;
    let det_ord = ord_p(&det, p);
    let lhs_ord = ord_p(&rho_conj, p);
    let rhs_ord = ord_p(&rho, p).plus(det_ord.times(exponent as i64));
    let holds = lhs_ord == rhs_ord;
    let mut det_pow = BigRational::one();
    for _ in 0..exponent {
        det_pow *= &det;
    }
    let holds_exactly = rho_conj == det_pow * &rho;
    Ok(ConjugationValuationCheck {
        prime: p.clone(),
        exponent,
        det_ord,
        lhs_ord,
        rhs_ord,
        holds,
        holds_exactly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    fn pres(n: usize, d: u32, forms: &[&[i64]]) -> Presentation {
        Presentation::new(
            n,
            d,
            forms
                .iter()
                .map(|f| f.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn p(v: u64) -> PrimeInt {
        PrimeInt::from_u64(v).unwrap()
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(resultant(&pres(1, 1, &[&[1, 0], &[0, 1]])).unwrap(), rat(1));
        assert_eq!(resultant(&pres(1, 2, &[&[1, 0, 0], &[0, 0, 1]])).unwrap(), rat(1));
        assert_eq!(resultant(&pres(1, 3, &[&[1, 0, 0, 0], &[0, 0, 0, 1]])).unwrap(), rat(1));
        assert_eq!(resultant(&pres(1, 2, &[&[1, 0, -1], &[0, 1, 0]])).unwrap(), rat(-1));
        assert_eq!(resultant(&pres(1, 2, &[&[2, 0, 0], &[0, 0, 1]])).unwrap(), rat(4));
    }

    #[test]
    fn sylvester_matches_root_differences() {
        // (x - y)(x - 2y) and (x - 3y)(x - 4y):
        // Res = (1-3)(1-4)(2-3)(2-4) = 12.
        let f = pres(1, 2, &[&[1, -3, 2], &[1, -7, 12]]);
        assert_eq!(resultant(&f).unwrap(), rat(12));
    }

    #[test]
    fn macaulay_agrees_with_sylvester_on_p1() {
        let cases = [
            pres(1, 2, &[&[1, 0, -1], &[0, 1, 0]]),
            pres(1, 2, &[&[1, -3, 2], &[1, -7, 12]]),
            pres(1, 3, &[&[1, 0, 0, 2], &[0, 1, -1, 0]]),
            pres(1, 2, &[&[2, 0, 0], &[0, 0, 1]]),
        ];
        for f in &cases {
            assert_eq!(
                macaulay_resultant(f).unwrap(),
                sylvester_resultant(f).unwrap(),
                "disagreement for {f}"
            );
        }
    }

    #[test]
    fn macaulay_diagonal_example() {
        // Res is homogeneous of degree d^n = 4 in each form, so
        // Res(2x², 3y², 5z²) = 2⁴·3⁴·5⁴·Res(x², y², z²) = 810000.
        let f = pres(
            2,
            2,
            &[
                &[2, 0, 0, 0, 0, 0],
                &[0, 0, 0, 3, 0, 0],
                &[0, 0, 0, 0, 0, 5],
            ],
        );
        assert_eq!(resultant(&f).unwrap(), rat(810000));
        let id = pres(
            2,
            2,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 0, 1],
            ],
        );
        assert_eq!(resultant(&id).unwrap(), rat(1));
    }

    #[test]
    fn macaulay_perturbation_fallback() {
        // (y², x², z²) sends the minor determinant to zero: the swapped
        // forms have no x_i^d term on their assigned rows.
        let f = pres(
            2,
            2,
            &[
                &[0, 0, 0, 1, 0, 0],
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 0, 0, 0, 1],
            ],
        );
        assert_eq!(resultant(&f).unwrap(), rat(1));
    }

    #[test]
    fn degenerate_presentations_have_zero_resultant() {
        // x² and xy share the zero (0 : 1).
        let f = pres(1, 2, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(resultant(&f).unwrap(), rat(0));
        assert!(!f.is_morphism().unwrap());
        let g = pres(
            2,
            2,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
            ],
        );
        // x², xy, xz all vanish at (0 : 1 : 0).
        assert_eq!(resultant(&g).unwrap(), rat(0));
    }

    #[test]
    fn valuation_report_examples() {
        let f = pres(1, 2, &[&[3, 0, 0], &[0, 0, 3]]);
        let rep = valuation_report(&f, &p(3)).unwrap();
        assert_eq!(rep.ord_resultant, Valuation::Finite(4));
        assert_eq!(rep.min_coeff_ord, 1);
        assert_eq!(rep.ord_r, Valuation::Finite(0));

        let g = pres(1, 2, &[&[2, 0, 0], &[0, 0, 1]]);
        let rep = valuation_report(&g, &p(2)).unwrap();
        assert_eq!(rep.ord_resultant, Valuation::Finite(2));
        assert_eq!(rep.min_coeff_ord, 0);
        assert_eq!(rep.ord_r, Valuation::Finite(2));
    }

    #[test]
    fn conjugation_identity_example() {
        let f = pres(1, 2, &[&[1, 0, 0], &[0, 0, 1]]);
        let gamma = RationalMatrix::diagonal(&[rat(2), rat(1)]);
        let check = check_conjugation_valuation(&f, &gamma, &p(2)).unwrap();
        assert_eq!(check.exponent, 6);
        assert_eq!(check.lhs_ord, Valuation::Finite(6));
        assert_eq!(check.rhs_ord, Valuation::Finite(6));
        assert!(check.holds);
        assert!(check.holds_exactly);
    }

    #[test]
    fn zero_resultant_conjugation_check_degenerates_gracefully() {
        let f = pres(1, 2, &[&[1, 0, 0], &[0, 1, 0]]);
        let gamma = RationalMatrix::diagonal(&[rat(2), rat(1)]);
        let check = check_conjugation_valuation(&f, &gamma, &p(2)).unwrap();
        assert_eq!(check.lhs_ord, Valuation::Infinite);
        assert_eq!(check.rhs_ord, Valuation::Infinite);
        assert!(check.holds);
        assert!(check.holds_exactly);
    }

    fn arbitrary_pres(raw: &[i64]) -> Option<Presentation> {
        if raw.iter().all(|&x| x == 0) {
            return None;
        }
        Presentation::new(
            1,
            2,
            vec![
                raw[..3].iter().map(|&x| rat(x)).collect(),
                raw[3..].iter().map(|&x| rat(x)).collect(),
            ],
        )
        .ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_scales_resultant_by_fixed_power(
            raw in proptest::collection::vec(-6i64..=6, 6),
            c in prop_oneof![Just(2i64), Just(3), Just(-2), Just(5)],
        ) {
            let Some(f) = arbitrary_pres(&raw) else { return Ok(()) };
            let scaled = f.scale(&rat(c)).unwrap();
            let lhs = resultant(&scaled).unwrap();
            let mut pow = BigRational::one();
            for _ in 0..scaling_exponent(1, 2).unwrap() {
                pow *= rat(c);
            }
            prop_assert_eq!(lhs, pow * resultant(&f).unwrap());
        }

        #[test]
        fn conjugation_identity_holds_exactly(
            raw in proptest::collection::vec(-6i64..=6, 6),
            g_raw in proptest::collection::vec(-3i64..=3, 4),
            prime in prop_oneof![Just(2u64), Just(3), Just(5)],
        ) {
            let Some(f) = arbitrary_pres(&raw) else { return Ok(()) };
            prop_assume!(g_raw[0] * g_raw[3] != g_raw[1] * g_raw[2]);
            let gamma = RationalMatrix::from_rows(vec![
                vec![rat(g_raw[0]), rat(g_raw[1])],
                vec![rat(g_raw[2]), rat(g_raw[3])],
            ]);
            let check = check_conjugation_valuation(&f, &gamma, &p(prime)).unwrap();
            prop_assert!(check.holds);
            prop_assert!(check.holds_exactly);
        }

        #[test]
        fn normalized_valuation_is_nonnegative_and_scale_invariant(
            raw in proptest::collection::vec(-20i64..=20, 6),
            num in 1i64..=9,
            den in 1i64..=9,
            prime in prop_oneof![Just(2u64), Just(3), Just(5)],
        ) {
            let Some(f) = arbitrary_pres(&raw) else { return Ok(()) };
            let pr = p(prime);
            let rep = valuation_report(&f, &pr).unwrap();
            if let Valuation::Finite(v) = rep.ord_r {
                prop_assert!(v >= 0);
            }
            let scaled = f.scale(&BigRational::new(BigInt::from(num), BigInt::from(den))).unwrap();
            let rep2 = valuation_report(&scaled, &pr).unwrap();
            prop_assert_eq!(rep.ord_r, rep2.ord_r);
        }

        #[test]
        fn unimodular_conjugation_preserves_normalized_valuation(
            raw in proptest::collection::vec(-10i64..=10, 6),
            which in 0usize..3,
            prime in prop_oneof![Just(2u64), Just(3)],
        ) {
            let Some(f) = arbitrary_pres(&raw) else { return Ok(()) };
            let u = match which {
                0 => RationalMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(0), rat(1)]]),
                1 => RationalMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]),
                _ => RationalMatrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]]),
            };
            let pr = p(prime);
            let a = valuation_report(&f, &pr).unwrap();
            let b = valuation_report(&f.conjugate(&u).unwrap(), &pr).unwrap();
            prop_assert_eq!(a.ord_r, b.ord_r);
        }

        #[test]
        fn conjugate_min_ord_obeys_matrix_ord_slack(
            raw in proptest::collection::vec(-10i64..=10, 6),
            g_raw in proptest::collection::vec(-4i64..=4, 4),
            prime in prop_oneof![Just(2u64), Just(3)],
        ) {
            let Some(f) = arbitrary_pres(&raw) else { return Ok(()) };
            prop_assume!(g_raw[0] * g_raw[3] != g_raw[1] * g_raw[2]);
            let gamma = RationalMatrix::from_rows(vec![
                vec![rat(g_raw[0]), rat(g_raw[1])],
                vec![rat(g_raw[2]), rat(g_raw[3])],
            ]);
            let pr = p(prime);
            let conj = f.conjugate(&gamma).unwrap();
            let slack = matrix_ord(&gamma, &pr).finite().expect("nonzero matrix");
            // n + d = 3 entry factors in every coefficient of the image.
            prop_assert!(conj.min_coeff_ord(&pr) >= f.min_coeff_ord(&pr) + 3 * slack);
        }
    }
}
