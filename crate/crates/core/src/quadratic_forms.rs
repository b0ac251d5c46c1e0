//! Quadratic forms `T = Σ a_{ij} XᵢXⱼ` in free even variables.
//!
//! The matrix `[XᵢXⱼ]` is R-cyclic, and the cumulants of `T` reduce to
//! traces of products `A E_{i₁} A E_{i₂} ⋯` summed over index tuples whose
//! kernel dominates a noncrossing partition. Those constrained sums are
//! evaluated by recursion on the block that contains the last index:
//!
//! ```text
//! M(π; A₁..A_{r+1}) = M(π₁; A₁..A_{j₁}) · Π_{k≥2} E_D(M(π_k; …)) · A_{r+1}
//! ```
//!
//! where `{j₁ < … < j_p = r}` is that block and `π_k` are the restrictions
//! of `π` to the gaps between its elements. This is the nested conditional
//! expectation along the Kreweras complement, at `O(r·n³)` cost instead of
//! `n^{|π|}` index tuples.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec;
use crate::free_moments::{product_cumulant, FreeFamily};
use crate::partitions::{blow_up, contract, enumerate_nc, visit_nc_labels, Partition};
use crate::rational::{format_rational, int, parse_rational, powi, Rational};
use crate::series::{compress, moments_from_cumulants, scale_sqrt, square_even, symmetrize_even, CumulantSeq};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMatrix {
    diagonal: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// `I − J/n`, the projection onto the mean-zero vectors.
    pub fn sample_variance(n: usize) -> Self {
        let w = Rational::new((-1).into(), (n.max(1) as i64).into());
        let mut m = RationalMatrix {
            n,
            entries: vec![w; n * n],
        };
        for i in 0..n {
            m.entries[i * n + i] += Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::arg("matrix has no rows"));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::arg(format!(
                "row {} has {} entries, expected {n}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(RationalMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Comma-separated rows of `p/q` tokens; blank lines and `#` comments
    /// are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_rows(rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    fn same_dim(&self, other: &RationalMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::arg(format!("dimension mismatch: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.same_dim(other)?;
        let n = self.n;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A · D`: column `j` scaled by `d_j`.
    pub fn mul_diag(&self, d: &DiagonalMatrix) -> Result<RationalMatrix> {
        if d.n() != self.n {
            return Err(Error::arg("dimension mismatch with diagonal"));
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i * self.n + j] *= &d.diagonal[j];
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix[{}]", self.to_csv().trim_end().replace('\n', "; "))
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::rational::serde_str::StrOrNum;
        let raw = Vec::<Vec<StrOrNum>>::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|r| r.into_iter().map(StrOrNum::into_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RationalMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl DiagonalMatrix {
    pub fn new(diagonal: Vec<Rational>) -> Self {
        DiagonalMatrix { diagonal }
    }

    pub fn identity(n: usize) -> Self {
        DiagonalMatrix {
            diagonal: vec![Rational::one(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.diagonal
    }

    pub fn trace(&self) -> Rational {
        self.diagonal.iter().sum()
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let n = self.n();
        let mut m = RationalMatrix::zeros(n);
        for (i, d) in self.diagonal.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    fn hadamard(&mut self, other: &DiagonalMatrix) {
        for (a, b) in self.diagonal.iter_mut().zip(&other.diagonal) {
            *a *= b;
        }
    }

    fn scaled(&self, c: &Rational) -> DiagonalMatrix {
        DiagonalMatrix {
            diagonal: self.diagonal.iter().map(|x| x * c).collect(),
        }
    }

    fn add_assign(&mut self, other: &DiagonalMatrix) {
        for (a, b) in self.diagonal.iter_mut().zip(&other.diagonal) {
            *a += b;
        }
    }
}

impl Serialize for DiagonalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.diagonal.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

/// Diagonal part of `A`.
pub fn e_d(a: &RationalMatrix) -> DiagonalMatrix {
    DiagonalMatrix {
        diagonal: (0..a.n).map(|i| a.at(i, i).clone()).collect(),
    }
}

fn check_dims(mats: &[RationalMatrix]) -> Result<usize> {
    let n = mats.first().ok_or_else(|| Error::arg("no matrices"))?.n;
    if mats.iter().any(|m| m.n != n) {
        return Err(Error::arg("matrices of different dimensions"));
    }
    Ok(n)
}

/// `Σ_{ker i ≥ π} A₁E_{i₁}A₂⋯A_rE_{i_r}A_{r+1}` for noncrossing `π`.
fn nested_sum(p: &Partition, mats: &[RationalMatrix]) -> RationalMatrix {
    let r = p.n();
    if r == 0 {
        return mats[0].clone();
    }
    let last = p.block_of(r).expect("r lies in some block").to_vec();
    let segment = |lo: usize, hi: usize| -> Partition {
        let elems: Vec<usize> = (lo..hi).collect();
        p.restrict(&elems)
    };
    let j1 = last[0];
    let first = nested_sum(&segment(1, j1), &mats[..j1]);
    let mut d = DiagonalMatrix::identity(mats[0].n);
    for w in last.windows(2) {
        let inner = nested_sum(&segment(w[0] + 1, w[1]), &mats[w[0]..w[1]]);
        d.hadamard(&e_d(&inner));
    }
    first
        .mul_diag(&d)
        .and_then(|m| m.mul(&mats[r]))
        .expect("dimensions were checked")
}

fn nested_checked(p: &Partition, mats: &[RationalMatrix]) -> Result<RationalMatrix> {
    if mats.len() != p.n() + 1 {
        return Err(Error::arg(format!(
            "partition of {} needs {} matrices, got {}",
            p.n(),
            p.n() + 1,
            mats.len()
        )));
    }
    check_dims(mats)?;
    if !p.is_noncrossing() {
        return Err(Error::arg(format!("partition {p} is crossing")));
    }
    Ok(nested_sum(p, mats))
}

/// The nested conditional expectation `E_D[K̂(π)](A₁, …, A_{r+1})`, equal
/// to `Σ_{ker i ≥ π} E_D(A₁E_{i₁}⋯A_rE_{i_r}A_{r+1})`.
pub fn e_d_nested(p: &Partition, mats: &[RationalMatrix]) -> Result<DiagonalMatrix> {
    Ok(e_d(&nested_checked(p, mats)?))
}

/// `Σ_{ker i ≥ π} a¹_{i_r i₁} a²_{i₁ i₂} ⋯ aʳ_{i_{r−1} i_r}`. Noncrossing
/// partitions use the nested recursion; crossing ones fall back to the
/// index sum over block values.
pub fn trace_over_partition(mats: &[RationalMatrix], p: &Partition) -> Result<Rational> {
    if mats.len() != p.n() {
        return Err(Error::arg(format!(
            "partition of {} needs {} matrices, got {}",
            p.n(),
            p.n(),
            mats.len()
        )));
    }
    let n = check_dims(mats)?;
    if p.is_noncrossing() {
        let mut with_id = mats.to_vec();
        with_id.push(RationalMatrix::identity(n));
        return Ok(nested_sum(p, &with_id).trace());
    }
    let labels = p.labels();
    let assignments = exec::all_words(n, p.num_blocks());
    Ok(exec::sum_by(&assignments, |vals| {
        let idx: Vec<usize> = labels.iter().map(|&b| vals[b]).collect();
        cyclic_product(mats, &idx)
    }))
}

/// `a¹_{i_r i₁} a²_{i₁ i₂} ⋯`, 0-based indices.
fn cyclic_product(mats: &[RationalMatrix], idx: &[usize]) -> Rational {
    let r = idx.len();
    let mut acc = Rational::one();
    for m in 0..r {
        let prev = idx[(m + r - 1) % r];
        let a = mats[m].at(prev, idx[m]);
        if a.is_zero() {
            return Rational::zero();
        }
        acc *= a;
    }
    acc
}

fn even_law_check(kc: &CumulantSeq, r: usize) -> Result<()> {
    kc.require_even()?;
    kc.require_order(2 * r)
}

/// `Π_{B∈π} k_{2|B|}`.
fn doubled_k_pi(kc: &CumulantSeq, p: &Partition) -> Rational {
    p.blocks()
        .iter()
        .map(|b| &kc.as_slice()[2 * b.len() - 1])
        .fold(Rational::one(), |acc, k| acc * k)
}

/// `Σ_{π∈NC(r), π ≤ ker i} Π_B k_{2|B|}(law of i_B)`, 0-based indices.
fn even_inner_sum(idx: &[usize], laws: &[&CumulantSeq]) -> Rational {
    let mut acc = Rational::zero();
    let mut sizes = [0usize; 64];
    let mut letter = [0usize; 64];
    visit_nc_labels(
        idx.len(),
        |first, e| idx[first] == idx[e],
        |labels, nb| {
            sizes[..nb].fill(0);
            for (i, &b) in labels.iter().enumerate() {
                sizes[b] += 1;
                letter[b] = idx[i];
            }
            let mut term = Rational::one();
            for b in 0..nb {
                let k = &laws[letter[b]].as_slice()[2 * sizes[b] - 1];
                if k.is_zero() {
                    return;
                }
                term *= k;
            }
            acc += term;
        },
    );
    acc
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 || r > 32 {
        return Err(Error::arg(format!("order r = {r} outside 1..=32")));
    }
    Ok(())
}

/// `K_r(Σ a_{ij}XᵢXⱼ)` for free even `Xᵢ` with individual laws, by the sum
/// over cyclic index tuples.
pub fn quad_cumulant_even_family(a: &RationalMatrix, laws: &[CumulantSeq], r: usize) -> Result<Rational> {
    check_r(r)?;
    if laws.len() != a.n() {
        return Err(Error::arg(format!(
            "{} laws for a {}x{} matrix",
            laws.len(),
            a.n(),
            a.n()
        )));
    }
    for law in laws {
        even_law_check(law, r)?;
    }
    let refs: Vec<&CumulantSeq> = laws.iter().collect();
    let mats = vec![a.clone(); r];
    let tuples = exec::all_words(a.n(), r);
    Ok(exec::sum_by(&tuples, |idx| {
        let coeff = cyclic_product(&mats, idx);
        if coeff.is_zero() {
            return coeff;
        }
        coeff * even_inner_sum(idx, &refs)
    }))
}

/// The cyclic-tuple coefficients `K_r(Z_{i_r i₁}, Z_{i₁ i₂}, …)` of
/// `Z = A∘[XᵢXⱼ]` for i.i.d. even `Xᵢ`, keyed by 1-based `(i₁, …, i_r)`.
pub fn determining_series_coeffs(
    a: &RationalMatrix,
    kc: &CumulantSeq,
    r: usize,
) -> Result<BTreeMap<Vec<usize>, Rational>> {
    check_r(r)?;
    even_law_check(kc, r)?;
    let refs = vec![kc; a.n()];
    let mats = vec![a.clone(); r];
    let tuples = exec::all_words(a.n(), r);
    let values = exec::map_collect(&tuples, |idx| {
        let coeff = cyclic_product(&mats, idx);
        if coeff.is_zero() {
            coeff
        } else {
            coeff * even_inner_sum(idx, &refs)
        }
    });
    Ok(tuples
        .into_iter()
        .map(|t| t.into_iter().map(|i| i + 1).collect())
        .zip(values)
        .collect())
}

/// `Σ_{π∈NC(r)} Tr(E_D[Krewl π](A₁, …, A_r)) · Π_B k_{2|B|}`.
pub fn joint_quad_cumulant(mats: &[RationalMatrix], kc: &CumulantSeq) -> Result<Rational> {
    let r = mats.len();
    check_r(r)?;
    let n = check_dims(mats)?;
    even_law_check(kc, r)?;
    let mut with_id = mats.to_vec();
    with_id.push(RationalMatrix::identity(n));
    let parts = enumerate_nc(r)?;
    Ok(exec::sum_by(&parts, |p| {
        let k = doubled_k_pi(kc, p);
        if k.is_zero() {
            return k;
        }
        k * nested_sum(p, &with_id).trace()
    }))
}

/// `K_r` of `Σ a_{ij}XᵢXⱼ` for i.i.d. even `Xᵢ`, as a sum over `NC(r)`.
pub fn quad_cumulant_iid(a: &RationalMatrix, kc: &CumulantSeq, r: usize) -> Result<Rational> {
    check_r(r)?;
    joint_quad_cumulant(&vec![a.clone(); r], kc)
}

/// Diagonal-matrix-valued cumulant
/// `Σ_{π∈NC(r)} E_D[Krewl π](A₁Λ₁, …, A_{r−1}Λ_{r−1}, A_r) · Π k_{2|B|}`.
pub fn opvalued_cumulant(
    mats: &[RationalMatrix],
    lambdas: &[DiagonalMatrix],
    kc: &CumulantSeq,
) -> Result<DiagonalMatrix> {
    let r = mats.len();
    check_r(r)?;
    let n = check_dims(mats)?;
    if lambdas.len() + 1 != r {
        return Err(Error::arg(format!(
            "{r} matrices need {} diagonal weights, got {}",
            r - 1,
            lambdas.len()
        )));
    }
    even_law_check(kc, r)?;
    let mut args = Vec::with_capacity(r + 1);
    for (m, l) in mats.iter().zip(lambdas) {
        args.push(m.mul_diag(l)?);
    }
    args.push(mats[r - 1].clone());
    args.push(RationalMatrix::identity(n));
    let mut total = DiagonalMatrix::new(vec![Rational::zero(); n]);
    for p in enumerate_nc(r)? {
        let k = doubled_k_pi(kc, &p);
        if !k.is_zero() {
            total.add_assign(&e_d(&nested_sum(&p, &args)).scaled(&k));
        }
    }
    Ok(total)
}

/// `K_r(Q_n) = n Σ_{π∈NC(r)} (1−1/n)^{r+1−|π|} Π_B k_{2|B|}`; odd entries
/// of `kc` are ignored.
pub fn sample_variance_cumulant(kc: &CumulantSeq, n: usize, r: usize) -> Result<Rational> {
    check_r(r)?;
    if n < 2 {
        return Err(Error::arg("sample variance needs n >= 2"));
    }
    kc.require_order(2 * r)?;
    let nn = int(n as i64);
    let t = (&nn - Rational::one()) / &nn;
    // Σ_π t^{r+1−|π|} Π α_{|B|} = t^{r+1} · m_r(law with cumulants α/t)
    let alpha = CumulantSeq::new((1..=r).map(|j| &kc.as_slice()[2 * j - 1] / &t).collect())?;
    let m = moments_from_cumulants(&alpha);
    Ok(nn * powi(&t, (r + 1) as i64) * m.m(r)?)
}

/// `c_n(π̂)` for `π̂ ∈ [pispecial(r), 1̂_{2r}] ∩ NC^even(2r)`: the partition
/// trace of `I − J/n` at the contracted partition.
pub fn coefficient_cn(pi_hat: &Partition, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::arg("n must be >= 1"));
    }
    if !pi_hat.is_noncrossing() || !pi_hat.is_even() {
        return Err(Error::arg(format!("{pi_hat} is not a noncrossing even partition")));
    }
    let p = contract(pi_hat)?;
    let a = RationalMatrix::sample_variance(n);
    trace_over_partition(&vec![a; p.n()], &p)
}

/// Every `(π̂, c_n(π̂))` of the interval above `pispecial(r)`, in the order
/// of `NC(r)`.
pub fn cn_table(n: usize, r: usize) -> Result<Vec<(Partition, Rational)>> {
    check_r(r)?;
    enumerate_nc(r)?
        .iter()
        .map(|p| {
            let hat = blow_up(p);
            let c = coefficient_cn(&hat, n)?;
            Ok((hat, c))
        })
        .collect()
}

/// `Σ c_n(π̂) K_{π̂}` over the interval, which must reproduce `K_r(Q_n)`.
pub fn cn_decomposition_sum(kc: &CumulantSeq, n: usize, r: usize) -> Result<Rational> {
    kc.require_order(2 * r)?;
    let mut total = Rational::zero();
    for (hat, c) in cn_table(n, r)? {
        let k: Rational = hat
            .blocks()
            .iter()
            .map(|b| &kc.as_slice()[b.len() - 1])
            .fold(Rational::one(), |a, x| a * x);
        total += c * k;
    }
    Ok(total)
}

/// Law of `Z = √(n/(n−1))·P X̃ P` with `τ(P) = (n−1)/n` and `X̃` the
/// symmetrization: `K_r(Z) = ((n−1)/n)^{r/2−1} k_r` at even `r`.
pub fn compressed_symmetrization(kc: &CumulantSeq, n: usize) -> Result<CumulantSeq> {
    if n < 2 {
        return Err(Error::arg("compression needs n >= 2"));
    }
    let t = Rational::new((n as i64 - 1).into(), (n as i64).into());
    scale_sqrt(&compress(&symmetrize_even(kc), &t)?, &t.recip())
}

/// Checks `K_r(Q_n) = (n−1)·K_r(Z²)` for `r ≤ r_max`.
pub fn compression_corollary_check(kc: &CumulantSeq, n: usize, r_max: usize) -> Result<bool> {
    kc.require_order(2 * r_max)?;
    let z = compressed_symmetrization(&kc.truncate(2 * r_max)?, n)?;
    let z2 = square_even(&z)?;
    let scale = int(n as i64 - 1);
    for r in 1..=r_max {
        if sample_variance_cumulant(kc, n, r)? != &scale * z2.k(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicityReport {
    pub cyclic: bool,
    /// Number of non-cyclic index-pair tuples evaluated.
    pub checked: usize,
    /// First tuple (in lexicographic order of `r`, then pairs) with a
    /// nonzero cumulant, 1-based, with that value.
    pub violation: Option<(Vec<(usize, usize)>, String)>,
}

/// Evaluates every non-cyclic `K_r(Z_{i₁j₁}, …, Z_{i_rj_r})`, `r ≤ r_max`,
/// by the product formula for i.i.d. variables with law `kc`.
pub fn r_cyclicity_check(a: &RationalMatrix, kc: &CumulantSeq, r_max: usize) -> Result<CyclicityReport> {
    let n = a.n();
    if 2 * r_max > crate::free_moments::WORD_LENGTH_CAP {
        return Err(Error::SizeLimit {
            what: "r-cyclicity order (word length 2r)",
            size: 2 * r_max,
            cap: crate::free_moments::WORD_LENGTH_CAP,
        });
    }
    kc.require_order(2 * r_max)?;
    let family = FreeFamily::iid(kc.clone(), n);
    let mut checked = 0;
    for r in 1..=r_max {
        let tuples: Vec<Vec<usize>> = exec::all_words(n * n, r)
            .into_iter()
            .filter(|t| (0..r).any(|m| t[m] % n != t[(m + 1) % r] / n))
            .collect();
        checked += tuples.len();
        let values = exec::map_collect(&tuples, |t| -> Result<Rational> {
            let mut coeff = Rational::one();
            let mut groups = Vec::with_capacity(r);
            for &pair in t {
                let (i, j) = (pair / n, pair % n);
                coeff *= a.at(i, j);
                groups.push(vec![i + 1, j + 1]);
            }
            if coeff.is_zero() {
                return Ok(coeff);
            }
            Ok(coeff * product_cumulant(&groups, &family)?)
        });
        for (t, v) in tuples.iter().zip(values) {
            let v = v?;
            if !v.is_zero() {
                let pairs = t.iter().map(|&p| (p / n + 1, p % n + 1)).collect();
                return Ok(CyclicityReport {
                    cyclic: false,
                    checked,
                    violation: Some((pairs, format_rational(&v))),
                });
            }
        }
    }
    Ok(CyclicityReport {
        cyclic: true,
        checked,
        violation: None,
    })
}
