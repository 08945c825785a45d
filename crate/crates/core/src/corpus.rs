//! Seeded, reproducible corpus generation: random presentations and
//! morphisms, random conjugating matrices of controlled reduction type,
//! planted non-minimal models, exhaustive reduced-point enumeration, and
//! lifts of reduced points back to characteristic zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::matrix::RationalMatrix;
use crate::arith::primes::PrimeInt;
use crate::arith::valuation::{ord_p, Valuation};
use crate::error::{Error, Result};
use crate::poly::binomial;
use crate::presentation::{Presentation, ReducedPoint};
use crate::resultant::resultant;

pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rat(x: i64) -> BigRational {
    BigRational::from(BigInt::from(x))
}

/// Uniform integer coefficients in [-coeff_bound, coeff_bound], not all
/// zero. The presentation may well be degenerate (zero resultant).
pub fn random_presentation(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: u32,
    coeff_bound: i64,
) -> Result<Presentation> {
    let dim = binomial(n + d as usize, d as usize)
        .ok_or_else(|| Error::SizeLimit("monomial table too large".into()))?;
    loop {
        let coeffs: Vec<Vec<BigRational>> = (0..=n)
            .map(|_| {
                (0..dim)
                    .map(|_| rat(rng.gen_range(-coeff_bound..=coeff_bound)))
                    .collect()
            })
            .collect();
        if coeffs.iter().flatten().all(|c| c.is_zero()) {
            continue;
        }
        return Presentation::new(n, d, coeffs);
    }
}

/// Random presentation with nonzero resultant.
pub fn random_morphism(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: u32,
    coeff_bound: i64,
    max_tries: u32,
) -> Result<Presentation> {
    for _ in 0..max_tries {
        let f = random_presentation(rng, n, d, coeff_bound)?;
        if !resultant(&f)?.is_zero() {
            return Ok(f);
        }
    }
    Err(Error::Construction(
        "no morphism found within the try budget".into(),
    ))
}

/// Random integer matrix with nonzero determinant.
pub fn random_invertible(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> RationalMatrix {
    loop {
        let rows: Vec<Vec<BigRational>> = (0..dim)
            .map(|_| (0..dim).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let m = RationalMatrix::from_rows(rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random integer matrix whose determinant is a p-unit.
pub fn random_p_unimodular(
    rng: &mut ChaCha8Rng,
    dim: usize,
    p: &PrimeInt,
    bound: i64,
) -> RationalMatrix {
    loop {
        let m = random_invertible(rng, dim, bound);
        if ord_p(&m.det(), p) == Valuation::Finite(0) {
            return m;
        }
    }
}

/// Random integer matrix with determinant ±1, built from row operations
/// so it is unimodular at every prime at once.
pub fn random_unimodular(rng: &mut ChaCha8Rng, dim: usize, ops: u32) -> RationalMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for _ in 0..ops {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        if i == j {
            rows.swap(i, (i + 1) % dim);
            continue;
        }
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        let source = rows[j].clone();
        for (dst, src) in rows[i].iter_mut().zip(source) {
            *dst += &k * src;
        }
    }
    RationalMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(BigRational::from).collect())
            .collect(),
    )
}

/// Conjugate by diag(p^alpha, 1, ..., 1), optionally disguised by a
/// random unimodular change of coordinates, then re-primitivized. Raises
/// ord_R at p whenever the valuation bookkeeping does not cancel, which
/// the caller should check.
pub fn plant_at_prime(
    rng: &mut ChaCha8Rng,
    f: &Presentation,
    p: &PrimeInt,
    alpha: u32,
    disguise: bool,
) -> Result<Presentation> {
    let dim = f.n() + 1;
    let p_rat = BigRational::from(BigInt::from(p.value().clone()));
    let mut diag = vec![rat(1); dim];
    let mut scale = rat(1);
    for _ in 0..alpha {
        scale *= &p_rat;
    }
    diag[0] = scale;
    let mut gamma = RationalMatrix::diagonal(&diag);
    if disguise {
        gamma = gamma.mul(&random_unimodular(rng, dim, 8));
    }
    Ok(f.conjugate(&gamma)?.primitive_integral_model().0)
}

/// The straight lift of a reduced point: coefficients in {0, ..., p-1}
/// read as integers, so the lift reduces back to the same point.
pub fn lift_reduced(point: &ReducedPoint) -> Result<Presentation> {
    Presentation::new(
        point.n(),
        point.degree(),
        point
            .coords()
            .iter()
            .map(|form| form.iter().map(|&c| rat(c as i64)).collect())
            .collect(),
    )
}

/// Lift a reduced point to a morphism over ℚ with the same reduction,
/// perturbing coefficients by multiples of p until the resultant is
/// nonzero.
pub fn lift_to_morphism(
    rng: &mut ChaCha8Rng,
    point: &ReducedPoint,
    max_tries: u32,
) -> Result<Presentation> {
    let base = lift_reduced(point)?;
    if !resultant(&base)?.is_zero() {
        return Ok(base);
    }
    let p = rat(point.prime() as i64);
    for _ in 0..max_tries {
        let coeffs: Vec<Vec<BigRational>> = base
            .forms()
            .iter()
            .map(|form| {
                form.iter()
                    .map(|c| c + &p * rat(rng.gen_range(-2i64..=2)))
                    .collect()
            })
            .collect();
        let candidate = Presentation::new(base.n(), base.degree(), coeffs)?;
        if !resultant(&candidate)?.is_zero() {
            debug_assert!(candidate
                .reduce_at(&PrimeInt::from_u64(point.prime())?)?
                .projectively_equal(point));
            return Ok(candidate);
        }
    }
    Err(Error::Construction(
        "no morphism lift found within the try budget".into(),
    ))
}

/// Every reduced point with the given shape: all coordinate vectors over
/// F_p except zero. Refuses shapes with more than 2^20 points.
pub fn exhaustive_reduced_points(n: usize, d: u32, p: u64) -> Result<Vec<ReducedPoint>> {
    let dim = binomial(n + d as usize, d as usize)
        .ok_or_else(|| Error::SizeLimit("monomial table too large".into()))?;
    let slots = (n + 1) * dim;
    let total = (p as u128).checked_pow(slots as u32);
    match total {
        Some(t) if t <= 1 << 20 => {}
        _ => {
            return Err(Error::SizeLimit(format!(
                "exhaustive enumeration of {slots} coordinates over F_{p} is too large"
            )))
        }
    }
    let mut out = Vec::new();
    let mut flat = vec![0u64; slots];
    loop {
        let mut idx = 0;
        loop {
            if idx == slots {
                return Ok(out);
            }
            flat[idx] += 1;
            if flat[idx] < p {
                break;
            }
            flat[idx] = 0;
            idx += 1;
        }
        let coords: Vec<Vec<u64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
        out.push(ReducedPoint::new(n, d, p, coords)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resultant::valuation_report;

    fn p(v: u64) -> PrimeInt {
        PrimeInt::from_u64(v).unwrap()
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let mut a = corpus_rng(7);
        let mut b = corpus_rng(7);
        let fa = random_morphism(&mut a, 1, 2, 5, 100).unwrap();
        let fb = random_morphism(&mut b, 1, 2, 5, 100).unwrap();
        assert_eq!(fa, fb);
        let mut c = corpus_rng(8);
        let fc = random_morphism(&mut c, 1, 2, 5, 100).unwrap();
        assert_ne!(fa, fc);
    }

    #[test]
    fn random_matrices_have_the_advertised_reduction_type() {
        let mut rng = corpus_rng(11);
        for _ in 0..20 {
            let u = random_p_unimodular(&mut rng, 2, &p(3), 5);
            assert_eq!(ord_p(&u.det(), &p(3)), Valuation::Finite(0));
            let v = random_unimodular(&mut rng, 3, 12);
            let det = v.det();
            assert!(det == rat(1) || det == rat(-1), "determinant {det}");
        }
    }

    #[test]
    fn planting_raises_the_valuation() {
        let mut rng = corpus_rng(23);
        let f = Presentation::new(1, 2, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(0), rat(1)]]).unwrap();
        // diag(2,1) multiplies the resultant order by the conjugation
        // exponent 6 and shifts min-ord by 1: ord_R goes 0 to 6 - 4 = 2.
        let planted = plant_at_prime(&mut rng, &f, &p(2), 1, true).unwrap();
        let ord = valuation_report(&planted, &p(2)).unwrap().ord_r;
        assert_eq!(ord, Valuation::Finite(2));
    }

    #[test]
    fn lifts_reduce_back_to_their_point() {
        let mut rng = corpus_rng(5);
        // x²y and xy² share a zero, so the straight lift is degenerate
        // and must be perturbed.
        let point = ReducedPoint::new(
            1,
            3,
            2,
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
        )
        .unwrap();
        let lift = lift_to_morphism(&mut rng, &point, 100).unwrap();
        assert!(!resultant(&lift).unwrap().is_zero());
        assert!(lift.reduce_at(&p(2)).unwrap().projectively_equal(&point));
    }

    #[test]
    fn exhaustive_enumeration_counts() {
        assert_eq!(exhaustive_reduced_points(1, 2, 2).unwrap().len(), 63);
        assert_eq!(exhaustive_reduced_points(1, 2, 3).unwrap().len(), 728);
        assert!(exhaustive_reduced_points(2, 3, 7).is_err());
    }
}
