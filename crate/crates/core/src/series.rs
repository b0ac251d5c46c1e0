//! Truncated cumulant and moment sequences and the univariate transforms
//! acting on them.
//!
//! Sequences are 1-based: `k(1)` is the mean, `k(2)` the variance, and so on
//! up to the truncation order. The zeroth moment is implicitly one.
//!
//! Moments and cumulants are converted with the first-block recursion of the
//! moment generating function, `M(z) = 1 + Σ_s k_s zˢ M(z)ˢ`, which is
//! `O(N³)` rational operations instead of a sum over `NC(N)`. The partition
//! sum itself is kept as the test oracle.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{for_each_nc, kreweras_left, kreweras_right, Partition};
use crate::rational::{powi, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCumulants", into = "RawCumulants")]
pub struct CumulantSeq {
    k: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMoments", into = "RawMoments")]
pub struct MomentSeq {
    m: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawCumulants {
    order: usize,
    #[serde(with = "crate::rational::serde_str::vec")]
    k: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawMoments {
    order: usize,
    #[serde(with = "crate::rational::serde_str::vec")]
    m: Vec<Rational>,
}

impl TryFrom<RawCumulants> for CumulantSeq {
    type Error = Error;
    fn try_from(raw: RawCumulants) -> Result<Self> {
        if raw.k.len() != raw.order {
            return Err(Error::arg(format!(
                "order {} but {} cumulants given",
                raw.order,
                raw.k.len()
            )));
        }
        CumulantSeq::new(raw.k)
    }
}

impl From<CumulantSeq> for RawCumulants {
    fn from(c: CumulantSeq) -> Self {
        RawCumulants {
            order: c.k.len(),
            k: c.k,
        }
    }
}

impl TryFrom<RawMoments> for MomentSeq {
    type Error = Error;
    fn try_from(raw: RawMoments) -> Result<Self> {
        if raw.m.len() != raw.order {
            return Err(Error::arg(format!(
                "order {} but {} moments given",
                raw.order,
                raw.m.len()
            )));
        }
        MomentSeq::new(raw.m)
    }
}

impl From<MomentSeq> for RawMoments {
    fn from(c: MomentSeq) -> Self {
        RawMoments {
            order: c.m.len(),
            m: c.m,
        }
    }
}

fn entry(v: &[Rational], r: usize) -> Result<&Rational> {
    if r == 0 || r > v.len() {
        return Err(Error::Truncation {
            needed: r,
            order: v.len(),
        });
    }
    Ok(&v[r - 1])
}

impl CumulantSeq {
    pub fn new(k: Vec<Rational>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::arg("a cumulant sequence needs order >= 1"));
        }
        Ok(CumulantSeq { k })
    }

    pub fn zeros(order: usize) -> Self {
        CumulantSeq {
            k: vec![Rational::zero(); order.max(1)],
        }
    }

    pub fn order(&self) -> usize {
        self.k.len()
    }

    /// `K_r`, 1-based.
    pub fn k(&self, r: usize) -> Result<&Rational> {
        entry(&self.k, r)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.k
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.k
    }

    /// All odd-order entries vanish.
    pub fn is_even(&self) -> bool {
        self.k.iter().step_by(2).all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order == 0 || order > self.order() {
            return Err(Error::Truncation {
                needed: order,
                order: self.order(),
            });
        }
        CumulantSeq::new(self.k[..order].to_vec())
    }

    pub(crate) fn require_order(&self, needed: usize) -> Result<()> {
        if needed > self.order() {
            return Err(Error::Truncation {
                needed,
                order: self.order(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        match self.k.iter().step_by(2).position(|x| !x.is_zero()) {
            None => Ok(()),
            Some(i) => Err(Error::arg(format!("law is not even: K_{} is nonzero", 2 * i + 1))),
        }
    }
}

impl MomentSeq {
    pub fn new(m: Vec<Rational>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::arg("a moment sequence needs order >= 1"));
        }
        Ok(MomentSeq { m })
    }

    pub fn order(&self) -> usize {
        self.m.len()
    }

    /// `τ(Xʳ)`, 1-based; `r = 0` gives one.
    pub fn m(&self, r: usize) -> Result<Rational> {
        if r == 0 {
            return Ok(Rational::one());
        }
        entry(&self.m, r).cloned()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.m
    }
}

/// `[z^d] M(z)^s` for all `s ≤ N`, `d ≤ N`, built column by column as the
/// moments become known.
struct PowerTable {
    n: usize,
    // pow[s][d]
    pow: Vec<Vec<Rational>>,
}

impl PowerTable {
    fn new(n: usize) -> Self {
        let mut pow = vec![vec![Rational::zero(); n + 1]; n + 1];
        for row in pow.iter_mut() {
            row[0] = Rational::one();
        }
        PowerTable { n, pow }
    }

    /// Fills column `d` once `m_0..m_d` are known.
    fn fill_column(&mut self, d: usize, m: &[Rational]) {
        for s in 1..=self.n {
            let mut acc = Rational::zero();
            for (j, mj) in m.iter().enumerate().take(d + 1) {
                let prev = &self.pow[s - 1][d - j];
                if !prev.is_zero() && !mj.is_zero() {
                    acc += mj * prev;
                }
            }
            self.pow[s][d] = acc;
        }
    }
}

/// `m_r = Σ_{π∈NC(r)} Π_{B∈π} k_{|B|}`.
pub fn moments_from_cumulants(kc: &CumulantSeq) -> MomentSeq {
    let n = kc.order();
    let mut m = vec![Rational::one()];
    let mut table = PowerTable::new(n);
    for r in 1..=n {
        let mut acc = Rational::zero();
        for s in 1..=r {
            let k = &kc.k[s - 1];
            if !k.is_zero() {
                acc += k * &table.pow[s][r - s];
            }
        }
        m.push(acc);
        table.fill_column(r, &m);
    }
    m.remove(0);
    MomentSeq { m }
}

/// Inverse of [`moments_from_cumulants`] by forward substitution.
pub fn cumulants_from_moments(ms: &MomentSeq) -> CumulantSeq {
    let n = ms.order();
    let mut m = vec![Rational::one()];
    m.extend(ms.m.iter().cloned());
    let mut k: Vec<Rational> = Vec::with_capacity(n);
    let mut table = PowerTable::new(n);
    for r in 1..=n {
        table.fill_column(r - 1, &m[..r]);
        let mut acc = m[r].clone();
        for (s, ks) in k.iter().enumerate() {
            let s = s + 1;
            if !ks.is_zero() {
                acc -= ks * &table.pow[s][r - s];
            }
        }
        k.push(acc);
    }
    CumulantSeq { k }
}

/// `Π_{B∈p} k_{|B|}`.
pub fn k_pi(kc: &CumulantSeq, p: &Partition) -> Result<Rational> {
    let mut acc = Rational::one();
    for b in p.blocks() {
        acc *= kc.k(b.len())?;
    }
    Ok(acc)
}

fn same_order(a: &CumulantSeq, b: &CumulantSeq) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::arg(format!("order mismatch: {} vs {}", a.order(), b.order())));
    }
    Ok(())
}

/// Free additive convolution: cumulants add.
pub fn add_free(a: &CumulantSeq, b: &CumulantSeq) -> Result<CumulantSeq> {
    same_order(a, b)?;
    Ok(CumulantSeq {
        k: a.k.iter().zip(&b.k).map(|(x, y)| x + y).collect(),
    })
}

/// Law of `cX`: `k_r ↦ cʳ k_r`.
pub fn scale(kc: &CumulantSeq, c: &Rational) -> CumulantSeq {
    let mut pw = Rational::one();
    let k =
        kc.k.iter()
            .map(|x| {
                pw *= c;
                x * &pw
            })
            .collect();
    CumulantSeq { k }
}

/// Law of `√c·X` for an even law: `k_r ↦ c^{r/2} k_r`, exact because only
/// even `r` carry mass.
pub fn scale_sqrt(kc: &CumulantSeq, c: &Rational) -> Result<CumulantSeq> {
    kc.require_even()?;
    let k =
        kc.k.iter()
            .enumerate()
            .map(|(i, x)| {
                let r = i + 1;
                if r % 2 == 0 {
                    x * powi(c, (r / 2) as i64)
                } else {
                    Rational::zero()
                }
            })
            .collect();
    Ok(CumulantSeq { k })
}

/// Odd entries zeroed.
pub fn symmetrize_even(kc: &CumulantSeq) -> CumulantSeq {
    let k =
        kc.k.iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 0 { Rational::zero() } else { x.clone() })
            .collect();
    CumulantSeq { k }
}

fn multiplicative_coeff(seq: &CumulantSeq, p: &Partition) -> Rational {
    p.blocks()
        .iter()
        .map(|b| &seq.k[b.len() - 1])
        .fold(Rational::one(), |acc, x| acc * x)
}

fn boxed_with(
    a: &CumulantSeq,
    b: &CumulantSeq,
    complement: fn(&Partition) -> Result<Partition>,
) -> Result<CumulantSeq> {
    same_order(a, b)?;
    if a.order() > crate::partitions::NC_ENUMERATION_CAP {
        return Err(Error::SizeLimit {
            what: "boxed convolution order",
            size: a.order(),
            cap: crate::partitions::NC_ENUMERATION_CAP,
        });
    }
    let mut k = Vec::with_capacity(a.order());
    for n in 1..=a.order() {
        let mut acc = Rational::zero();
        for_each_nc(n, |p| {
            let lhs = multiplicative_coeff(a, p);
            if lhs.is_zero() {
                return;
            }
            let q = complement(p).expect("enumerated partitions are noncrossing");
            acc += lhs * multiplicative_coeff(b, &q);
        });
        k.push(acc);
    }
    Ok(CumulantSeq { k })
}

/// `c_n = Σ_{π∈NC(n)} a_π · b_{Krewr π}`.
pub fn boxed_convolve(a: &CumulantSeq, b: &CumulantSeq) -> Result<CumulantSeq> {
    boxed_with(a, b, kreweras_right)
}

/// The same convolution written with the left complement,
/// `Σ_{π∈NC(n)} a_π · b_{Krewl π}`; it must agree with [`boxed_convolve`].
pub fn boxed_convolve_left(a: &CumulantSeq, b: &CumulantSeq) -> Result<CumulantSeq> {
    boxed_with(a, b, kreweras_left)
}

/// The all-ones sequence.
pub fn zeta_seq(order: usize) -> CumulantSeq {
    CumulantSeq {
        k: vec![Rational::one(); order.max(1)],
    }
}

/// Cumulants of `XY` for free `X`, `Y`.
pub fn mult_free_convolve(a: &CumulantSeq, b: &CumulantSeq) -> Result<CumulantSeq> {
    boxed_convolve(a, b)
}

/// Cumulants of `X²` for an even law given to order `2N`; the result has
/// order `N` and entry `r` equals `Σ_{π∈NC(r)} Π_{B∈π} k_{2|B|}`.
pub fn square_even(kc: &CumulantSeq) -> Result<CumulantSeq> {
    kc.require_even()?;
    let n = kc.order() / 2;
    if n == 0 {
        return Err(Error::Truncation {
            needed: 2,
            order: kc.order(),
        });
    }
    let alpha = CumulantSeq {
        k: (1..=n).map(|j| kc.k[2 * j - 1].clone()).collect(),
    };
    // Σ_{π∈NC(r)} α_π is the r-th moment of the law with cumulants α.
    Ok(CumulantSeq {
        k: moments_from_cumulants(&alpha).m,
    })
}

/// Compression by a projection of trace `t`: `k_r ↦ t^{r−1} k_r`.
pub fn compress(kc: &CumulantSeq, t: &Rational) -> Result<CumulantSeq> {
    if *t <= Rational::zero() || *t > Rational::one() {
        return Err(Error::arg(format!("compression parameter {t} outside (0,1]")));
    }
    let mut pw = Rational::one();
    let k =
        kc.k.iter()
            .map(|x| {
                let v = x * &pw;
                pw *= t;
                v
            })
            .collect();
    Ok(CumulantSeq { k })
}

/// Cumulants of `Σ θᵢ Xᵢ` for free copies `Xᵢ`: `k_r ↦ (Σ θᵢʳ) k_r`.
pub fn linear_form_cumulants(kc: &CumulantSeq, coeffs: &[Rational]) -> CumulantSeq {
    let mut powers: Vec<Rational> = vec![Rational::one(); coeffs.len()];
    let k =
        kc.k.iter()
            .map(|x| {
                let mut s = Rational::zero();
                for (p, c) in powers.iter_mut().zip(coeffs) {
                    *p *= c;
                    s += &*p;
                }
                x * s
            })
            .collect();
    CumulantSeq { k }
}
