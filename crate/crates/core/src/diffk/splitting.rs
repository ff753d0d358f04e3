//! The linear algebra behind the splitting principle: on the projective
//! bundle of a rank-`r` bundle over a formal base, `1, e^c, ..., e^((r-1)c)`
//! is a basis of the cohomology over the base, because the transition matrix
//! `A = V + B` to `1, c, c^2/2!, ...` is a Vandermonde matrix `V = (j^k)`
//! plus a nilpotent correction `B`.

use std::sync::Arc;

use crate::cdga::{CdgaModel, CdgaMorphism, GradedElement, ModelSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

/// Square matrix over the base ring.
pub type BaseMatrix = Vec<Vec<GradedElement>>;

#[derive(Debug, Clone)]
pub struct SplittingData {
    pub base: Arc<CdgaModel>,
    pub bundle: Arc<CdgaModel>,
    pub rank: usize,
    /// `A[k][j]`: coefficient of `c^k / k!` in `e^(jc)`.
    pub a: BaseMatrix,
    pub a_inv: BaseMatrix,
    pub v: linalg::Matrix,
    pub b: BaseMatrix,
    /// `e = f A` and `f = e A^-1` hold in the bundle model.
    pub verified: bool,
    /// Rank of `{b_i c^k}` over Q, `b_i` a basis of the base.
    pub module_rank: usize,
}

impl SplittingData {
    /// Whether `{b_i c^k : k < r}` is linearly independent and spans.
    pub fn is_free(&self) -> bool {
        self.module_rank == self.base.dim() * self.rank && self.module_rank == self.bundle.dim()
    }
}

pub fn mat_mul_base(model: &Arc<CdgaModel>, x: &BaseMatrix, y: &BaseMatrix) -> BaseMatrix {
    let n = x.len();
    let m = y.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = GradedElement::zero(model);
                    for (l, row) in y.iter().enumerate() {
                        if !x[i][l].is_zero() && !row[j].is_zero() {
                            s = &s + &(&x[i][l] * &row[j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn scalar_matrix(model: &Arc<CdgaModel>, m: &linalg::Matrix) -> BaseMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|c| GradedElement::scalar(model, c.clone()))
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &BaseMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| {
            if i == j {
                e.is_homogeneous_of(0) && e.constant_term().is_one()
            } else {
                e.is_zero()
            }
        })
    })
}

/// Builds `A`, inverts it as `sum_m (-V^-1 B)^m V^-1`, and checks both
/// change-of-basis identities in the bundle model.
pub fn exp_basis_matrix(base: &ModelSpec, r: usize, chern: &[String]) -> Result<SplittingData> {
    if !base.differential.is_empty() {
        return Err(Error::Unsupported(
            "splitting matrix over a base with nonzero differential".into(),
        ));
    }
    let bundle_spec = ModelSpec::projective_bundle(base, r, chern)?;
    let base_m = CdgaModel::build(base)?;
    let bundle = CdgaModel::build(&bundle_spec)?;
    let cs: Vec<GradedElement> = chern
        .iter()
        .map(|c| GradedElement::parse(&base_m, c))
        .collect::<Result<_>>()?;

    // c^k as coefficients of 1, c, ..., c^(r-1) over the base
    let zero = GradedElement::zero(&base_m);
    let mut powers: Vec<Vec<GradedElement>> = Vec::new();
    let mut p = vec![zero.clone(); r];
    p[0] = GradedElement::one(&base_m);
    let k_max = bundle.top_degree() / 2;
    for _ in 0..=k_max {
        powers.push(p.clone());
        let overflow = p[r - 1].clone();
        let mut next = vec![zero.clone(); r];
        next[1..r].clone_from_slice(&p[..(r - 1)]);
        if !overflow.is_zero() {
            for (j, c) in cs.iter().enumerate() {
                // c^r = - sum_j c_(j+1) c^(r-1-j)
                next[r - 1 - j] = &next[r - 1 - j] - &(&overflow * c);
            }
        }
        p = next;
    }

    let mut a = vec![vec![zero.clone(); r]; r];
    for (k, pk) in powers.iter().enumerate() {
        let kf = Rational::factorial(k as u32).recip().expect("nonzero");
        for j in 0..r {
            let w = Rational::from(j as i64).pow(k as u32) * &kf;
            if w.is_zero() {
                continue;
            }
            for (i, coeff) in pk.iter().enumerate() {
                if !coeff.is_zero() {
                    let s = Rational::factorial(i as u32) * &w;
                    a[i][j] = &a[i][j] + &coeff.scale(&s);
                }
            }
        }
    }
    let v: linalg::Matrix = (0..r)
        .map(|k| {
            (0..r)
                .map(|j| Rational::from(j as i64).pow(k as u32))
                .collect()
        })
        .collect();
    let b: BaseMatrix = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| &a[i][j] - &GradedElement::scalar(&base_m, v[i][j].clone()))
                .collect()
        })
        .collect();
    let v_inv = linalg::invert(&v)
        .ok_or_else(|| Error::InvalidArgument("Vandermonde matrix is singular".into()))?;
    let v_inv_b = scalar_matrix(&base_m, &v_inv);
    let minus_m: BaseMatrix = mat_mul_base(&base_m, &v_inv_b, &b)
        .into_iter()
        .map(|row| row.into_iter().map(|e| -&e).collect())
        .collect();
    let mut term = v_inv_b.clone();
    let mut a_inv = v_inv_b;
    loop {
        term = mat_mul_base(&base_m, &minus_m, &term);
        if term.iter().flatten().all(GradedElement::is_zero) {
            break;
        }
        a_inv = a_inv
            .iter()
            .zip(&term)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
            .collect();
    }

    let names: Vec<&str> = base_m
        .generators()
        .iter()
        .map(|g| g.name.as_str())
        .collect();
    let incl = CdgaMorphism::new("base-inclusion", &base_m, &bundle, &names)?;
    let h = GradedElement::parse(&bundle, "h")?;
    let e: Vec<GradedElement> = (0..r)
        .map(|j| h.scale(&Rational::from(j as i64)).exp_nilpotent())
        .collect::<Result<_>>()?;
    let f: Vec<GradedElement> = (0..r)
        .map(|i| {
            h.pow(i as u32)
                .scale(&Rational::factorial(i as u32).recip().expect("nonzero"))
        })
        .collect();
    let combine = |vecs: &[GradedElement], m: &BaseMatrix, j: usize| -> Result<GradedElement> {
        let mut s = GradedElement::zero(&bundle);
        for (i, x) in vecs.iter().enumerate() {
            s = &s + &(x * &incl.pullback(&m[i][j])?);
        }
        Ok(s)
    };
    let mut verified = true;
    for j in 0..r {
        verified &= combine(&f, &a, j)? == e[j];
        verified &= combine(&e, &a_inv, j)? == f[j];
    }

    let mut span = Vec::new();
    for i in 0..base_m.dim() {
        let bi = incl.pullback(&GradedElement::basis(&base_m, i))?;
        for k in 0..r {
            span.push((&bi * &h.pow(k as u32)).coords().to_vec());
        }
    }
    let module_rank = linalg::rank(&span);

    Ok(SplittingData {
        base: base_m,
        bundle,
        rank: r,
        a,
        a_inv,
        v,
        b,
        verified,
        module_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rank_one_is_trivial() {
        let s = exp_basis_matrix(&ModelSpec::point(), 1, &strs(&["0"])).unwrap();
        assert!(s.verified && s.is_free());
        assert!(is_identity(&s.a));
    }

    #[test]
    fn rank_two_vandermonde() {
        let s = exp_basis_matrix(&ModelSpec::point(), 2, &strs(&["0", "0"])).unwrap();
        let q = |n: i64| Rational::from(n);
        assert_eq!(s.v, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        let inv: Vec<Vec<Rational>> = s
            .a_inv
            .iter()
            .map(|row| row.iter().map(|e| e.constant_term().clone()).collect())
            .collect();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(0), q(1)]]);
        assert!(s.verified && s.is_free());
    }

    #[test]
    fn nilpotent_correction_over_cp3() {
        let s = exp_basis_matrix(&ModelSpec::cpn(3), 3, &strs(&["2*x", "x^2", "-x^3"])).unwrap();
        assert!(s.verified, "change of basis identities");
        assert!(s.is_free());
        assert!(s.b.iter().flatten().any(|e| !e.is_zero()));
        assert!(is_identity(&mat_mul_base(&s.base, &s.a, &s.a_inv)));
    }

    #[test]
    fn rejects_non_formal_base() {
        assert!(exp_basis_matrix(&ModelSpec::s2(), 2, &strs(&["x", "0"])).is_err());
    }
}
