//! Independent oracles and seeded random data shared by the integration
//! tests. Nothing here calls the code paths it is used to check.
#![allow(dead_code)]

use freechi::partitions::Partition;
use freechi::rational::{int, rat, Rational};
use freechi::{CumulantSeq, RationalMatrix};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=7))
}

pub fn rand_nonzero(rng: &mut impl Rng) -> Rational {
    loop {
        let q = rand_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn rand_positive(rng: &mut impl Rng) -> Rational {
    rat(rng.random_range(1..=9), rng.random_range(1..=7))
}

/// Even law of the given order with positive `K₂` and random nonzero
/// higher even cumulants.
pub fn rand_even_law(rng: &mut impl Rng, order: usize) -> CumulantSeq {
    let k = (1..=order)
        .map(|r| match r {
            2 => rand_positive(rng),
            r if r % 2 == 0 => rand_nonzero(rng),
            _ => Rational::zero(),
        })
        .collect();
    CumulantSeq::new(k).unwrap()
}

pub fn rand_law(rng: &mut impl Rng, order: usize) -> CumulantSeq {
    CumulantSeq::new((0..order).map(|_| rand_rational(rng)).collect()).unwrap()
}

pub fn rand_matrix(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    RationalMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rand_rational(rng)).collect()).collect()).unwrap()
}

#[allow(clippy::needless_range_loop)]
pub fn rand_symmetric(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let q = rand_rational(rng);
            rows[i][j] = q.clone();
            rows[j][i] = q;
        }
    }
    RationalMatrix::from_rows(rows).unwrap()
}

pub fn seq(v: &[i64]) -> CumulantSeq {
    CumulantSeq::new(v.iter().map(|&x| int(x)).collect()).unwrap()
}

/// Every set partition of `{1..n}` via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == rgs.len() {
            out.push(Partition::from_labels(rgs));
            return;
        }
        for v in 0..=max + 1 {
            if i == 0 && v > 0 {
                break;
            }
            rgs[i] = v;
            rec(i + 1, max.max(v), rgs, out);
        }
    }
    if n == 0 {
        return vec![Partition::zero(0)];
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// The quadruple definition: `i<j<k<l`, `i∼k`, `j∼l`, `i≁j`.
pub fn crosses(p: &Partition) -> bool {
    let l = p.labels();
    let n = l.len();
    for i in 0..n {
        for j in i + 1..n {
            if l[i] == l[j] {
                continue;
            }
            for k in j + 1..n {
                if l[k] != l[i] {
                    continue;
                }
                for m in k + 1..n {
                    if l[m] == l[j] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

pub fn nc_oracle(n: usize) -> Vec<Partition> {
    set_partitions(n).into_iter().filter(|p| !crosses(p)).collect()
}

/// `Σ_{ker i ≥ π} A₁E_{i₁}A₂⋯A_rE_{i_r}A_{r+1}` by the raw index sum.
pub fn index_nested(p: &Partition, mats: &[RationalMatrix]) -> RationalMatrix {
    let r = p.n();
    let n = mats[0].n();
    let labels = p.labels();
    let mut out = vec![vec![Rational::zero(); n]; n];
    let total = n.pow(r as u32);
    for code in 0..total {
        let mut idx = vec![0usize; r];
        let mut c = code;
        for slot in idx.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        // ker i ≥ π: constant on blocks
        if (0..r).any(|a| (0..r).any(|b| labels[a] == labels[b] && idx[a] != idx[b])) {
            continue;
        }
        for (a, row) in out.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let mut v = Rational::one();
                let mut prev = a;
                for (m, &i) in idx.iter().enumerate() {
                    v *= mats[m].get(prev + 1, i + 1);
                    prev = i;
                }
                v *= mats[r].get(prev + 1, b + 1);
                *cell += v;
            }
        }
    }
    RationalMatrix::from_rows(out).unwrap()
}

pub fn diag_of(m: &RationalMatrix) -> Vec<Rational> {
    (1..=m.n()).map(|i| m.get(i, i).clone()).collect()
}

/// `Σ_{π∈NC(r)} Π_B k_{2|B|}` by explicit enumeration.
pub fn square_by_enumeration(kc: &CumulantSeq, r: usize) -> Rational {
    nc_oracle(r)
        .iter()
        .map(|p| {
            p.blocks()
                .iter()
                .map(|b| kc.as_slice()[2 * b.len() - 1].clone())
                .fold(Rational::one(), |a, x| a * x)
        })
        .sum()
}
