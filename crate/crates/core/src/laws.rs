//! Named distribution models, compiled to truncated cumulant sequences.
//!
//! A law here is a formal cumulant sequence; nothing checks that it is the
//! sequence of an actual probability measure (see `infdiv` for the one
//! necessary condition that is implemented).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_moments::{FreeFamily, PolySpec, Scalar};
use crate::rational::{int, powi, Rational};
use crate::series::CumulantSeq;

fn zero() -> Rational {
    Rational::zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawSpec {
    Semicircle {
        #[serde(with = "crate::rational::serde_str")]
        sigma2: Rational,
    },
    FreePoisson {
        #[serde(with = "crate::rational::serde_str")]
        lambda: Rational,
        #[serde(with = "crate::rational::serde_str")]
        alpha: Rational,
    },
    ChiSquare {
        n: u32,
        #[serde(with = "crate::rational::serde_str")]
        sigma2: Rational,
        #[serde(with = "crate::rational::serde_str", default = "zero")]
        delta: Rational,
    },
    Odd {
        #[serde(with = "crate::rational::serde_str")]
        k2: Rational,
        #[serde(with = "crate::rational::serde_str::map", default)]
        odd: BTreeMap<usize, Rational>,
    },
    CompoundPoisson {
        #[serde(with = "crate::rational::serde_str")]
        lambda: Rational,
        #[serde(with = "crate::rational::serde_str::vec")]
        jump_moments: Vec<Rational>,
    },
    Custom {
        #[serde(with = "crate::rational::serde_str::vec")]
        k: Vec<Rational>,
    },
}

impl LawSpec {
    pub fn semicircle(sigma2: Rational) -> Self {
        LawSpec::Semicircle { sigma2 }
    }

    /// The standard semicircle, `K₂ = 1`.
    pub fn standard_semicircle() -> Self {
        LawSpec::Semicircle {
            sigma2: Rational::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |q: &Rational, what: &str| {
            if q.is_negative() {
                Err(Error::arg(format!("{what} must be >= 0, got {q}")))
            } else {
                Ok(())
            }
        };
        match self {
            LawSpec::Semicircle { sigma2 } => nonneg(sigma2, "sigma2"),
            LawSpec::FreePoisson { lambda, .. } => nonneg(lambda, "lambda"),
            LawSpec::ChiSquare { n, sigma2, delta } => {
                if *n == 0 {
                    return Err(Error::arg("chi-square needs n >= 1"));
                }
                if !sigma2.is_positive() {
                    return Err(Error::arg(format!("sigma2 must be > 0, got {sigma2}")));
                }
                nonneg(delta, "delta")
            }
            LawSpec::Odd { k2, odd } => {
                if !k2.is_positive() {
                    return Err(Error::arg(format!("k2 must be > 0, got {k2}")));
                }
                match odd.keys().find(|&&r| r < 3 || r % 2 == 0) {
                    Some(r) => Err(Error::arg(format!("odd law entries must have odd order >= 3, got {r}"))),
                    None => Ok(()),
                }
            }
            LawSpec::CompoundPoisson { lambda, .. } => nonneg(lambda, "lambda"),
            LawSpec::Custom { k } => {
                if k.is_empty() {
                    Err(Error::arg("custom law needs at least one cumulant"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Short human-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            LawSpec::Semicircle { .. } => "semicircle",
            LawSpec::FreePoisson { .. } => "free_poisson",
            LawSpec::ChiSquare { .. } => "chi_square",
            LawSpec::Odd { .. } => "odd",
            LawSpec::CompoundPoisson { .. } => "compound_poisson",
            LawSpec::Custom { .. } => "custom",
        }
    }
}

/// `K₁..K_N` of the law.
pub fn to_cumulants(spec: &LawSpec, order: usize) -> Result<CumulantSeq> {
    if order == 0 {
        return Err(Error::arg("order must be >= 1"));
    }
    spec.validate()?;
    let k: Vec<Rational> = match spec {
        LawSpec::Semicircle { sigma2 } => (1..=order)
            .map(|r| if r == 2 { sigma2.clone() } else { zero() })
            .collect(),
        LawSpec::FreePoisson { lambda, alpha } => (1..=order).map(|r| powi(alpha, r as i64) * lambda).collect(),
        LawSpec::ChiSquare { n, sigma2, delta } => (1..=order)
            .map(|r| {
                let r = r as i64;
                // (X+m)² with Var X = σ² is σ²·(X'+m/σ)², hence the (2σ²)^{r−1}
                int(*n as i64) * powi(sigma2, r) + delta * int(r) * powi(&(int(2) * sigma2), r - 1)
            })
            .collect(),
        LawSpec::Odd { k2, odd } => (1..=order)
            .map(|r| match r {
                2 => k2.clone(),
                _ => odd.get(&r).cloned().unwrap_or_else(zero),
            })
            .collect(),
        LawSpec::CompoundPoisson { lambda, jump_moments } => {
            if jump_moments.len() < order {
                return Err(Error::arg(format!(
                    "compound Poisson needs {order} jump moments, {} given",
                    jump_moments.len()
                )));
            }
            jump_moments[..order].iter().map(|m| m * lambda).collect()
        }
        LawSpec::Custom { k } => {
            if k.len() < order {
                return Err(Error::Truncation {
                    needed: order,
                    order: k.len(),
                });
            }
            k[..order].to_vec()
        }
    };
    CumulantSeq::new(k)
}

/// Moments `m₁..m_N` of the point mass at `a`.
pub fn point_mass_moments(a: &Rational, order: usize) -> Vec<Rational> {
    (1..=order).map(|r| powi(a, r as i64)).collect()
}

/// Moments of the symmetric ±1 coin: `0, 1, 0, 1, …`.
pub fn symmetric_bernoulli_moments(order: usize) -> Vec<Rational> {
    (1..=order)
        .map(|r| if r % 2 == 0 { Rational::one() } else { zero() })
        .collect()
}

/// Cumulants of `Σ (Xᵢ + mᵢ)²` for free semicircles `Xᵢ` of variance
/// `sigma2`, computed by word expansion. Should agree with
/// `ChiSquare { n, sigma2, δ = Σ mᵢ² }`.
pub fn noncentral_chi_square_oracle(
    n: usize,
    sigma2: &Rational,
    shifts: &[Rational],
    order: usize,
) -> Result<CumulantSeq> {
    if n == 0 || shifts.len() != n {
        return Err(Error::arg(format!(
            "need exactly n = {n} >= 1 shifts, got {}",
            shifts.len()
        )));
    }
    let law = to_cumulants(&LawSpec::semicircle(sigma2.clone()), 2 * order)?;
    let family = FreeFamily::iid(law, n);
    let mut p = PolySpec::zero(n);
    for (i, m) in shifts.iter().enumerate() {
        let mut lin = PolySpec::var(n, i + 1)?;
        lin.add_term(vec![], Scalar::new(m.clone(), zero()));
        p = p.add(&lin.mul(&lin)?)?;
    }
    crate::free_moments::poly_cumulants(&p, &family, order)
}
