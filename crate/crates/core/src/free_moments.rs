//! Brute-force moment oracle for polynomials in free variables.
//!
//! A joint moment `τ(X_{w₁}⋯X_{w_L})` is the sum of `K_π` over noncrossing
//! `π` whose blocks never mix letters, each block contributing the
//! cumulant of its letter's law. The letter constraint is applied while the
//! partitions are generated, so forbidden partitions are never built.
//!
//! The moment of a word only depends on its kernel and on which law sits on
//! each block, so [`FreeFamily`] memoizes on that key. Expanding `Pʳ` into
//! words and summing is then cheap even when there are thousands of words.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::partitions::{labels_join_interval_to_one, visit_nc_labels, BlockSet};
use crate::quadratic_forms::RationalMatrix;
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::series::{cumulants_from_moments, CumulantSeq, MomentSeq};

/// Complex rational coefficient.
pub type Scalar = Complex<Rational>;

/// Longest word the oracle will evaluate (`|NC(12)| = 208012`).
pub const WORD_LENGTH_CAP: usize = 12;

pub fn real(q: Rational) -> Scalar {
    Complex::new(q, Rational::zero())
}

fn check_length(len: usize) -> Result<()> {
    if len > WORD_LENGTH_CAP {
        return Err(Error::SizeLimit {
            what: "word length",
            size: len,
            cap: WORD_LENGTH_CAP,
        });
    }
    Ok(())
}

/// Keyed by (relabelled word, law index per distinct letter).
type MomentCache = RwLock<HashMap<(Vec<u8>, Vec<u8>), Rational>>;

/// A family of free variables `X₁..X_n`, each with its own law.
pub struct FreeFamily {
    laws: Vec<CumulantSeq>,
    var_law: Vec<usize>,
    cache: MomentCache,
}

impl FreeFamily {
    /// One law per variable; identical laws share cache entries.
    pub fn new(per_var: Vec<CumulantSeq>) -> Result<Self> {
        if per_var.is_empty() {
            return Err(Error::arg("a free family needs at least one variable"));
        }
        let mut laws: Vec<CumulantSeq> = Vec::new();
        let mut var_law = Vec::with_capacity(per_var.len());
        for law in per_var {
            match laws.iter().position(|l| *l == law) {
                Some(id) => var_law.push(id),
                None => {
                    var_law.push(laws.len());
                    laws.push(law);
                }
            }
        }
        Ok(FreeFamily {
            laws,
            var_law,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// `n` free copies of one law.
    pub fn iid(law: CumulantSeq, n: usize) -> Self {
        FreeFamily {
            laws: vec![law],
            var_law: vec![0; n.max(1)],
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.var_law.len()
    }

    /// Law of variable `i` (1-based).
    pub fn law(&self, i: usize) -> &CumulantSeq {
        &self.laws[self.var_law[i - 1]]
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        check_length(word.len())?;
        if let Some(&bad) = word.iter().find(|&&l| l == 0 || l > self.n_vars()) {
            return Err(Error::arg(format!("letter {bad} outside 1..={}", self.n_vars())));
        }
        // a block can be at most as long as its letter's multiplicity
        let mut count = vec![0usize; self.n_vars() + 1];
        for &l in word {
            count[l] += 1;
        }
        for (l, &c) in count.iter().enumerate().skip(1) {
            self.law(l).require_order(c)?;
        }
        Ok(())
    }

    /// `τ(X_{w₁}⋯X_{w_L})`, letters 1-based.
    pub fn joint_moment(&self, word: &[usize]) -> Result<Rational> {
        if word.is_empty() {
            return Ok(Rational::one());
        }
        self.check_word(word)?;
        let key = self.kernel_key(word);
        if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&key).cloned()) {
            return Ok(v);
        }
        let v = self.moment_uncached(word);
        if let Ok(mut c) = self.cache.write() {
            c.insert(key, v.clone());
        }
        Ok(v)
    }

    fn kernel_key(&self, word: &[usize]) -> (Vec<u8>, Vec<u8>) {
        let mut seen: Vec<usize> = Vec::new();
        let mut labels = Vec::with_capacity(word.len());
        for &l in word {
            let b = match seen.iter().position(|&s| s == l) {
                Some(b) => b,
                None => {
                    seen.push(l);
                    seen.len() - 1
                }
            };
            labels.push(b as u8);
        }
        let laws = seen.iter().map(|&l| self.var_law[l - 1] as u8).collect();
        (labels, laws)
    }

    fn moment_uncached(&self, word: &[usize]) -> Rational {
        self.partition_sum(word, |_, _| true)
    }

    /// `Σ K_π` over noncrossing `π ≤ ker(word)` accepted by `keep`.
    fn partition_sum<F>(&self, word: &[usize], keep: F) -> Rational
    where
        F: Fn(&[usize], usize) -> bool,
    {
        let mut acc = Rational::zero();
        let mut sizes = [0usize; WORD_LENGTH_CAP];
        let mut letter = [0usize; WORD_LENGTH_CAP];
        visit_nc_labels(
            word.len(),
            |first, e| word[first] == word[e],
            |labels, nb| {
                sizes[..nb].fill(0);
                for (i, &b) in labels.iter().enumerate() {
                    sizes[b] += 1;
                    letter[b] = word[i];
                }
                let mut term = Rational::one();
                for b in 0..nb {
                    let k = &self.law(letter[b]).as_slice()[sizes[b] - 1];
                    if k.is_zero() {
                        return;
                    }
                    term *= k;
                }
                if keep(labels, nb) {
                    acc += term;
                }
            },
        );
        acc
    }
}

/// Free-standing form of [`FreeFamily::joint_moment`].
pub fn joint_moment(word: &[usize], family: &FreeFamily) -> Result<Rational> {
    family.joint_moment(word)
}

/// Noncommutative polynomial with complex rational coefficients. Words are
/// 1-based letter sequences; the empty word is the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct PolySpec {
    n_vars: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    n_vars: usize,
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    word: Vec<usize>,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".into()
}

impl TryFrom<RawPoly> for PolySpec {
    type Error = Error;
    fn try_from(raw: RawPoly) -> Result<Self> {
        let mut p = PolySpec::zero(raw.n_vars);
        if raw.n_vars == 0 {
            return Err(Error::arg("n_vars must be >= 1"));
        }
        for t in raw.terms {
            if let Some(&bad) = t.word.iter().find(|&&l| l == 0 || l > raw.n_vars) {
                return Err(Error::arg(format!("letter {bad} outside 1..={}", raw.n_vars)));
            }
            let c = Complex::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            p.add_term(t.word, c);
        }
        Ok(p)
    }
}

impl From<PolySpec> for RawPoly {
    fn from(p: PolySpec) -> Self {
        RawPoly {
            n_vars: p.n_vars,
            terms: p
                .terms
                .into_iter()
                .map(|(word, c)| RawTerm {
                    word,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }
}

impl PolySpec {
    pub fn zero(n_vars: usize) -> Self {
        PolySpec {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Scalar) -> Self {
        let mut p = PolySpec::zero(n_vars);
        p.add_term(vec![], c);
        p
    }

    /// The variable `X_i`, 1-based.
    pub fn var(n_vars: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n_vars {
            return Err(Error::arg(format!("variable {i} outside 1..={n_vars}")));
        }
        let mut p = PolySpec::zero(n_vars);
        p.add_term(vec![i], Scalar::one());
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has length `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Vec::len);
        let d = lens.next()?;
        lens.all(|l| l == d).then_some(d)
    }

    pub fn add_term(&mut self, word: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn same_vars(&self, other: &PolySpec) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::arg(format!(
                "polynomials over {} and {} variables",
                self.n_vars, other.n_vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolySpec) -> Result<PolySpec> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolySpec) -> Result<PolySpec> {
        self.add(&other.scale(&real(int(-1))))
    }

    pub fn scale(&self, c: &Scalar) -> PolySpec {
        let mut out = PolySpec::zero(self.n_vars);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &PolySpec) -> Result<PolySpec> {
        self.same_vars(other)?;
        let mut out = PolySpec::zero(self.n_vars);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// `Pʳ`, refusing words longer than the oracle cap.
    pub fn pow(&self, r: usize) -> Result<PolySpec> {
        check_length(self.degree() * r)?;
        let mut out = PolySpec::constant(self.n_vars, Scalar::one());
        for _ in 0..r {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Relabels `X_i ↦ X_{σ(i)}`, `sigma` 0-based.
    pub fn permute_vars(&self, sigma: &[usize]) -> PolySpec {
        let mut out = PolySpec::zero(self.n_vars);
        for (w, c) in &self.terms {
            out.add_term(w.iter().map(|&l| sigma[l - 1] + 1).collect(), c.clone());
        }
        out
    }

    /// `Σ_{σ∈S_n} P(X_{σ(1)},…,X_{σ(n)})`; `n ≤ 7`.
    pub fn symmetrize(&self) -> Result<PolySpec> {
        if self.n_vars > 7 {
            return Err(Error::SizeLimit {
                what: "symmetrization variables",
                size: self.n_vars,
                cap: 7,
            });
        }
        let mut out = PolySpec::zero(self.n_vars);
        let mut sigma: Vec<usize> = (0..self.n_vars).collect();
        loop {
            out = out.add(&self.permute_vars(&sigma))?;
            if !next_permutation(&mut sigma) {
                return Ok(out);
            }
        }
    }

    /// `Xᵢ − X̄`.
    pub fn centered_var(i: usize, n: usize) -> Result<PolySpec> {
        let mut p = PolySpec::var(n, i)?;
        let w = real(Rational::new((-1).into(), (n as i64).into()));
        for j in 1..=n {
            p.add_term(vec![j], w.clone());
        }
        Ok(p)
    }

    /// `Q_n = Σ (Xᵢ − X̄)² = Σ Xᵢ² − (1/n) Σ_{i,j} XᵢXⱼ`.
    pub fn sample_variance(n: usize) -> Result<PolySpec> {
        if n == 0 {
            return Err(Error::arg("sample variance needs n >= 1"));
        }
        PolySpec::quadratic_form(&RationalMatrix::sample_variance(n))
    }

    /// `Σ a_{ij} XᵢXⱼ`.
    pub fn quadratic_form(a: &RationalMatrix) -> Result<PolySpec> {
        let n = a.n();
        if n == 0 {
            return Err(Error::arg("empty matrix"));
        }
        let mut p = PolySpec::zero(n);
        for i in 1..=n {
            for j in 1..=n {
                p.add_term(vec![i, j], real(a.get(i, j).clone()));
            }
        }
        Ok(p)
    }

    /// `i(X₁X₂ − X₂X₁)`.
    pub fn commutator() -> PolySpec {
        let i = Complex::new(Rational::zero(), Rational::one());
        let mut p = PolySpec::zero(2);
        p.add_term(vec![1, 2], i.clone());
        p.add_term(vec![2, 1], -i);
        p
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_family(p: &PolySpec, family: &FreeFamily) -> Result<()> {
    if p.n_vars() > family.n_vars() {
        return Err(Error::arg(format!(
            "polynomial uses {} variables, family has {}",
            p.n_vars(),
            family.n_vars()
        )));
    }
    Ok(())
}

/// `τ(P)`.
pub fn poly_moment(p: &PolySpec, family: &FreeFamily) -> Result<Scalar> {
    check_family(p, family)?;
    let terms: Vec<(&Vec<usize>, &Scalar)> = p.terms().iter().collect();
    exec::try_sum_by(&terms, |(w, c)| Ok((*c).clone() * real(family.joint_moment(w)?)))
}

/// `τ(P), τ(P²), …, τ(P^{r_max})`.
pub fn poly_power_moments(p: &PolySpec, family: &FreeFamily, r_max: usize) -> Result<Vec<Scalar>> {
    check_family(p, family)?;
    check_length(p.degree() * r_max)?;
    let mut out = Vec::with_capacity(r_max);
    let mut power = PolySpec::constant(p.n_vars(), Scalar::one());
    for _ in 0..r_max {
        power = power.mul(p)?;
        out.push(poly_moment(&power, family)?);
    }
    Ok(out)
}

/// Cumulants of the law of a self-adjoint `P`; non-real moments are
/// rejected.
pub fn poly_cumulants(p: &PolySpec, family: &FreeFamily, order: usize) -> Result<CumulantSeq> {
    let moments = poly_power_moments(p, family, order)?;
    let mut m = Vec::with_capacity(order);
    for (r, z) in moments.into_iter().enumerate() {
        if !z.im.is_zero() {
            return Err(Error::arg(format!(
                "τ(P^{}) has imaginary part {}; P is not self-adjoint",
                r + 1,
                format_rational(&z.im)
            )));
        }
        m.push(z.re);
    }
    Ok(cumulants_from_moments(&MomentSeq::new(m)?))
}

/// Cumulant of products `K_r(X_{g₁}, X_{g₂}, …)` with each argument the
/// product of the letters of one group: the sum of `K_π` over noncrossing
/// `π ≤ ker` whose join with the group partition is `1̂`.
pub fn product_cumulant(groups: &[Vec<usize>], family: &FreeFamily) -> Result<Rational> {
    let len = groups.iter().map(Vec::len).sum();
    filtered_product_cumulant(groups, family, &BlockSet::empty(len))
}

/// [`product_cumulant`] restricted to partitions with none of the
/// forbidden sets as a block.
pub fn filtered_product_cumulant(groups: &[Vec<usize>], family: &FreeFamily, forbidden: &BlockSet) -> Result<Rational> {
    if groups.is_empty() || groups.iter().any(Vec::is_empty) {
        return Err(Error::arg("product cumulant needs nonempty groups"));
    }
    let word: Vec<usize> = groups.concat();
    if forbidden.n() != word.len() {
        return Err(Error::arg(format!(
            "forbidden blocks live on 1..={}, word has length {}",
            forbidden.n(),
            word.len()
        )));
    }
    family.check_word(&word)?;
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    Ok(family.partition_sum(&word, |labels, nb| {
        labels_join_interval_to_one(labels, nb, &sizes) && forbidden.admits_labels(labels)
    }))
}

/// Multilinear extension of [`filtered_product_cumulant`] to homogeneous
/// polynomial arguments: `K^ρ(P₁, …, P_r)` where ρ groups the letters of
/// each argument.
pub fn poly_product_cumulant(args: &[PolySpec], family: &FreeFamily, forbidden: Option<&BlockSet>) -> Result<Scalar> {
    if args.is_empty() {
        return Err(Error::arg("no arguments"));
    }
    let mut total = 0;
    for a in args {
        check_family(a, family)?;
        match a.homogeneous_degree() {
            Some(d) if d > 0 => total += d,
            _ if a.is_zero() => return Ok(Scalar::zero()),
            _ => {
                return Err(Error::arg(
                    "product cumulant arguments must be homogeneous of degree >= 1",
                ))
            }
        }
    }
    check_length(total)?;
    let empty = BlockSet::empty(total);
    let forbidden = forbidden.unwrap_or(&empty);
    let term_lists: Vec<Vec<(&Vec<usize>, &Scalar)>> = args.iter().map(|a| a.terms().iter().collect()).collect();
    let radices: Vec<usize> = term_lists.iter().map(Vec::len).collect();
    let tuples = mixed_radix(&radices);
    exec::try_sum_by(&tuples, |tuple| {
        let mut coeff = Scalar::one();
        let mut groups = Vec::with_capacity(tuple.len());
        for (list, &t) in term_lists.iter().zip(tuple) {
            coeff *= list[t].1;
            groups.push(list[t].0.clone());
        }
        Ok(coeff * real(filtered_product_cumulant(&groups, family, forbidden)?))
    })
}

fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |d| {
                    let mut p = prefix.clone();
                    p.push(d);
                    p
                })
            })
            .collect();
    }
    out
}

/// `K₂(Xᵢ − X̄, Xⱼ − X̄)` for free copies with variance `k2`.
pub fn covariance_centered(i: usize, j: usize, n: usize, k2: &Rational) -> Result<Rational> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::arg(format!("indices ({i},{j}) outside 1..={n}")));
    }
    let n = Rational::from_integer((n as i64).into());
    Ok(if i == j {
        k2 * (&n - Rational::one()) / n
    } else {
        -k2 / n
    })
}
