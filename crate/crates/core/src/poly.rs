//! Dense homogeneous polynomials in n + 1 variables over a `FieldCtx`.
//!
//! A degree-d form is a coefficient vector indexed by the monomial table
//! of degree d, which lists exponent vectors in descending lexicographic
//! order: for n = 1, d = 2 the order is x², xy, y². Every consumer of
//! coefficient vectors in this crate (resultant matrices, weight
//! functionals, serialized documents) indexes against these tables, so
//! they are built once per (n, d) and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::ff::{mat_adjugate, mat_det, FieldCtx};
use crate::error::{Error, Result};

/// Exponent vectors of all degree-d monomials in n + 1 variables, in
/// descending lex order, with the inverse index map.
#[derive(Debug)]
pub struct MonomialTable {
    n: usize,
    d: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Number of monomials, C(n + d, d).
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn exponents(&self, idx: usize) -> &[u32] {
        &self.monomials[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.monomials.iter()
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

fn generate_monomials(prefix: &mut Vec<u32>, vars_left: usize, deg_left: u32, out: &mut Vec<Vec<u32>>) {
    if vars_left == 1 {
        let mut m = prefix.clone();
        m.push(deg_left);
        out.push(m);
        return;
    }
    for e in (0..=deg_left).rev() {
        prefix.push(e);
        generate_monomials(prefix, vars_left - 1, deg_left - e, out);
        prefix.pop();
    }
}

/// Shared table for (n, d); built on first use.
pub fn monomial_table(n: usize, d: u32) -> Arc<MonomialTable> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("monomial cache poisoned");
    guard
        .entry((n, d))
        .or_insert_with(|| {
            let mut monomials = Vec::new();
            generate_monomials(&mut Vec::new(), n + 1, d, &mut monomials);
            let index = monomials
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i))
                .collect();
            Arc::new(MonomialTable {
                n,
                d,
                monomials,
                index,
            })
        })
        .clone()
}

/// C(n, k) as usize, with overflow checks.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    usize::try_from(acc).ok()
}

/// Product of homogeneous forms: degrees add, coefficients convolve
/// through the monomial tables.
pub fn mul_homog<C: FieldCtx>(
    ctx: &C,
    n: usize,
    a: &[C::El],
    da: u32,
    b: &[C::El],
    db: u32,
) -> Vec<C::El> {
    let ta = monomial_table(n, da);
    let tb = monomial_table(n, db);
    let tout = monomial_table(n, da + db);
    assert_eq!(a.len(), ta.len());
    assert_eq!(b.len(), tb.len());
    let mut out = vec![ctx.zero(); tout.len()];
    for (i, ea) in ta.iter().enumerate() {
        if ctx.is_zero(&a[i]) {
            continue;
        }
        for (j, eb) in tb.iter().enumerate() {
            if ctx.is_zero(&b[j]) {
                continue;
            }
            let sum: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let k = tout.index_of(&sum).expect("product monomial in table");
            let term = ctx.mul(&a[i], &b[j]);
            out[k] = ctx.add(&out[k], &term);
        }
    }
    out
}

/// Substitute x_j ↦ Σ_k gamma[j][k] x_k into a degree-d form. Powers of
/// each substituted linear form are built once and reused across
/// monomials.
pub fn substitute<C: FieldCtx>(
    ctx: &C,
    n: usize,
    d: u32,
    coeffs: &[C::El],
    gamma: &[Vec<C::El>],
) -> Vec<C::El> {
    let table = monomial_table(n, d);
    assert_eq!(coeffs.len(), table.len());
    assert_eq!(gamma.len(), n + 1);
    let mut max_pow = vec![0u32; n + 1];
    for (i, e) in table.iter().enumerate() {
        if ctx.is_zero(&coeffs[i]) {
            continue;
        }
        for j in 0..=n {
            max_pow[j] = max_pow[j].max(e[j]);
        }
    }
    // powers[j][e] is the degree-e coefficient vector of (Σ gamma[j][k] x_k)^e.
    let powers: Vec<Vec<Vec<C::El>>> = (0..=n)
        .map(|j| {
            let mut pows = vec![vec![ctx.one()]];
            let linear = gamma[j].clone();
            for e in 1..=max_pow[j] {
                let prev = &pows[(e - 1) as usize];
                pows.push(mul_homog(ctx, n, prev, e - 1, &linear, 1));
            }
            pows
        })
        .collect();
    let out_len = table.len();
    let mut out = vec![ctx.zero(); out_len];
    for (i, e) in table.iter().enumerate() {
        if ctx.is_zero(&coeffs[i]) {
            continue;
        }
        let mut term = vec![ctx.one()];
        let mut deg = 0u32;
        for j in 0..=n {
            if e[j] > 0 {
                term = mul_homog(ctx, n, &term, deg, &powers[j][e[j] as usize], e[j]);
                deg += e[j];
            }
        }
        debug_assert_eq!(deg, d);
        if deg == 0 {
            // Degree-zero form: single constant slot.
            out[0] = ctx.add(&out[0], &ctx.mul(&coeffs[i], &term[0]));
            continue;
        }
        for (k, t) in term.iter().enumerate() {
            let scaled = ctx.mul(&coeffs[i], t);
            out[k] = ctx.add(&out[k], &scaled);
        }
    }
    out
}

/// Conjugate a tuple of degree-d forms by an invertible matrix:
/// the i-th output is Σ_k adj(Γ)[i][k] · F_k(Γ x). Composition is then
/// exactly multiplicative, (F^A)^B = F^{AB}, because adjugates reverse
/// products without any determinant correction.
pub fn conjugate_tuple<C: FieldCtx>(
    ctx: &C,
    n: usize,
    d: u32,
    forms: &[Vec<C::El>],
    gamma: &[Vec<C::El>],
) -> Result<Vec<Vec<C::El>>> {
    assert_eq!(forms.len(), n + 1);
    assert_eq!(gamma.len(), n + 1);
    if ctx.is_zero(&mat_det(ctx, gamma)) {
        return Err(Error::SingularMatrix);
    }
    let adj = mat_adjugate(ctx, gamma);
    let substituted: Vec<Vec<C::El>> = forms
        .iter()
        .map(|f| substitute(ctx, n, d, f, gamma))
        .collect();
    let len = substituted[0].len();
    let out = (0..=n)
        .map(|i| {
            let mut acc = vec![ctx.zero(); len];
            for k in 0..=n {
                if ctx.is_zero(&adj[i][k]) {
                    continue;
                }
                for (c, s) in acc.iter_mut().zip(&substituted[k]) {
                    let t = ctx.mul(&adj[i][k], s);
                    *c = ctx.add(c, &t);
                }
            }
            acc
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ff::RatCtx;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn rats(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn tables_are_descending_lex() {
        let t = monomial_table(1, 2);
        let rows: Vec<&[u32]> = t.iter().map(|m| m.as_slice()).collect();
        assert_eq!(rows, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        let t = monomial_table(2, 2);
        let rows: Vec<&[u32]> = t.iter().map(|m| m.as_slice()).collect();
        assert_eq!(
            rows,
            vec![
                &[2, 0, 0][..],
                &[1, 1, 0],
                &[1, 0, 1],
                &[0, 2, 0],
                &[0, 1, 1],
                &[0, 0, 2],
            ]
        );
        assert_eq!(t.index_of(&[1, 0, 1]), Some(2));
        assert_eq!(t.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn table_sizes_match_binomial() {
        for n in 0..=3usize {
            for d in 1..=5u32 {
                let t = monomial_table(n, d);
                assert_eq!(Some(t.len()), binomial(n + d as usize, d as usize));
            }
        }
    }

    #[test]
    fn product_of_conjugate_linear_forms() {
        let ctx = RatCtx;
        // (x + y)(x - y) = x² - y²
        let a = rats(&[1, 1]);
        let b = rats(&[1, -1]);
        assert_eq!(mul_homog(&ctx, 1, &a, 1, &b, 1), rats(&[1, 0, -1]));
    }

    #[test]
    fn substitution_expands_binomial() {
        let ctx = RatCtx;
        // x² under x ↦ x + y, y ↦ y
        let f = rats(&[1, 0, 0]);
        let gamma = vec![rats(&[1, 1]), rats(&[0, 1])];
        assert_eq!(substitute(&ctx, 1, 2, &f, &gamma), rats(&[1, 2, 1]));
    }

    #[test]
    fn conjugation_by_diagonal() {
        let ctx = RatCtx;
        let forms = vec![rats(&[1, 0, 0]), rats(&[0, 0, 1])];
        let gamma = vec![rats(&[2, 0]), rats(&[0, 1])];
        let conj = conjugate_tuple(&ctx, 1, 2, &forms, &gamma).unwrap();
        assert_eq!(conj[0], rats(&[4, 0, 0]));
        assert_eq!(conj[1], rats(&[0, 0, 2]));
    }

    #[test]
    fn conjugation_by_shear() {
        let ctx = RatCtx;
        let forms = vec![rats(&[1, 0, 0]), rats(&[0, 0, 1])];
        let gamma = vec![rats(&[1, 1]), rats(&[0, 1])];
        let conj = conjugate_tuple(&ctx, 1, 2, &forms, &gamma).unwrap();
        assert_eq!(conj[0], rats(&[1, 2, 0]));
        assert_eq!(conj[1], rats(&[0, 0, 1]));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let ctx = RatCtx;
        let forms = vec![rats(&[1, 0, 0]), rats(&[0, 0, 1])];
        let gamma = vec![rats(&[1, 1]), rats(&[2, 2])];
        assert!(matches!(
            conjugate_tuple(&ctx, 1, 2, &forms, &gamma),
            Err(Error::SingularMatrix)
        ));
    }

    proptest! {
        #[test]
        fn conjugation_is_functorial(
            f0 in proptest::collection::vec(-5i64..=5, 3),
            f1 in proptest::collection::vec(-5i64..=5, 3),
            a_raw in proptest::collection::vec(-3i64..=3, 4),
            b_raw in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let ctx = RatCtx;
            prop_assume!(a_raw[0] * a_raw[3] != a_raw[1] * a_raw[2]);
            prop_assume!(b_raw[0] * b_raw[3] != b_raw[1] * b_raw[2]);
            let forms = vec![rats(&f0), rats(&f1)];
            let a = vec![rats(&a_raw[..2]), rats(&a_raw[2..])];
            let b = vec![rats(&b_raw[..2]), rats(&b_raw[2..])];
            let step = conjugate_tuple(&ctx, 1, 2, &forms, &a).unwrap();
            let two_step = conjugate_tuple(&ctx, 1, 2, &step, &b).unwrap();
            let ab = crate::arith::ff::mat_mul(&ctx, &a, &b);
            let direct = conjugate_tuple(&ctx, 1, 2, &forms, &ab).unwrap();
            prop_assert_eq!(two_step, direct);
        }

        #[test]
        fn identity_conjugation_is_identity(
            f0 in proptest::collection::vec(-5i64..=5, 3),
            f1 in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let ctx = RatCtx;
            let forms = vec![rats(&f0), rats(&f1)];
            let id = vec![rats(&[1, 0]), rats(&[0, 1])];
            let conj = conjugate_tuple(&ctx, 1, 2, &forms, &id).unwrap();
            prop_assert_eq!(conj, forms);
        }
    }
}
