//! Free infinite divisibility, desk-scale.
//!
//! A freely infinitely divisible law has `K_{j+2} = ∫ xʲ dρ` for a finite
//! positive measure ρ, so the shifted cumulants must form a positive
//! semidefinite Hankel sequence. Only this necessary condition is checked:
//! a failing minor is a definitive "not FID", a passing truncation is merely
//! consistent with FID to that order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::free_moments::FreeFamily;
use crate::quadratic_forms::RationalMatrix;
use crate::rational::{format_rational, Rational};
use crate::series::CumulantSeq;

/// Moments `m₀..m_{N−2}` of the Lévy measure: `m_j = K_{j+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevySeq {
    m: Vec<Rational>,
}

impl LevySeq {
    pub fn moments(&self) -> &[Rational] {
        &self.m
    }

    /// Order of the cumulant sequence this was shifted from.
    pub fn source_order(&self) -> usize {
        self.m.len() + 1
    }
}

pub fn levy_moments(kc: &CumulantSeq) -> Result<LevySeq> {
    if kc.order() < 2 {
        return Err(Error::Truncation {
            needed: 2,
            order: kc.order(),
        });
    }
    Ok(LevySeq {
        m: kc.as_slice()[1..].to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HankelVerdict {
    pub fid_consistent: bool,
    /// Truncation order of the cumulant sequence.
    pub order: usize,
    /// 0-based index `k` of the first negative leading minor of
    /// `[m_{i+j}]_{0≤i,j≤k}`.
    pub violating_minor: Option<usize>,
    #[serde(skip)]
    pub minor_value: Option<Rational>,
    /// Every leading minor that was evaluated, `k = 0, 1, …`.
    #[serde(skip)]
    pub minors: Vec<Rational>,
}

impl HankelVerdict {
    pub fn label(&self) -> String {
        if self.fid_consistent {
            format!("consistent-to-order-{}", self.order)
        } else {
            "violates-FID".to_string()
        }
    }

    pub fn minor_text(&self) -> Option<String> {
        self.minor_value.as_ref().map(format_rational)
    }
}

/// Determinant by fraction-free (Bareiss) elimination after clearing each
/// row's denominators.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Rational::new(sign * &a[n - 1][n - 1], scale)
}

/// Leading principal minors of the Hankel matrix of `ls`, as far as the
/// sequence reaches (`m_{2k}` must exist).
pub fn hankel_necessary_check(ls: &LevySeq) -> HankelVerdict {
    let m = &ls.m;
    let k_max = m.len().div_ceil(2);
    let mut minors = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let rows: Vec<Vec<Rational>> = (0..=k).map(|i| (0..=k).map(|j| m[i + j].clone()).collect()).collect();
        let d = determinant(&rows);
        let negative = d.is_negative();
        minors.push(d.clone());
        if negative {
            return HankelVerdict {
                fid_consistent: false,
                order: ls.source_order(),
                violating_minor: Some(k),
                minor_value: Some(d),
                minors,
            };
        }
    }
    HankelVerdict {
        fid_consistent: true,
        order: ls.source_order(),
        violating_minor: None,
        minor_value: None,
        minors,
    }
}

/// `levy_moments` followed by the Hankel check.
pub fn fid_check(kc: &CumulantSeq) -> Result<HankelVerdict> {
    Ok(hankel_necessary_check(&levy_moments(kc)?))
}

/// `Σ_{i∈[n]^r} Tr(AE_{i₁}⋯AE_{i_r}) · τ(Y_{i₁}⋯Y_{i_r})` for `r ≤ r_max`,
/// with `Yᵢ` free and `K_r(Y) = k_{2r}` of the even law `kc`.
pub fn fid_witness_moments(a: &RationalMatrix, kc: &CumulantSeq, r_max: usize) -> Result<Vec<Rational>> {
    kc.require_even()?;
    kc.require_order(2 * r_max)?;
    let n = a.n();
    let y = CumulantSeq::new((1..=r_max.max(1)).map(|r| kc.as_slice()[2 * r - 1].clone()).collect())?;
    let family = FreeFamily::iid(y, n);
    let mut out = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let words = exec::all_words(n, r);
        let v = exec::try_sum_by(&words, |w| -> Result<Rational> {
            let mut coeff = Rational::one();
            for m in 0..r {
                coeff *= a.get(w[(m + r - 1) % r] + 1, w[m] + 1);
                if coeff.is_zero() {
                    return Ok(coeff);
                }
            }
            let letters: Vec<usize> = w.iter().map(|i| i + 1).collect();
            Ok(coeff * family.joint_moment(&letters)?)
        })?;
        out.push(v);
    }
    Ok(out)
}
