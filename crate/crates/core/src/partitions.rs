//! Set partitions of `{1..n}`, the noncrossing lattice `NC(n)` and its
//! Kreweras complements.
//!
//! A [`Partition`] is always stored in canonical form: every block sorted
//! ascending, blocks ordered by their minimum. Equality is therefore plain
//! structural equality.
//!
//! The enumeration core is a stack generator: elements are placed left to
//! right, each either opening a new block or joining a block that is still
//! open, which closes every block opened after it. Every noncrossing
//! partition is produced exactly once, and a caller-supplied predicate can
//! veto a join while the partition is being built (this is how the
//! "blocks may not mix letters" rule of the moment oracle is applied).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` for which [`enumerate_nc`] materializes `NC(n)`.
pub const NC_ENUMERATION_CAP: usize = 14;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from 1-based blocks, validating coverage and
    /// disjointness, and canonicalizes the block order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::arg("empty block"));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > n {
                    return Err(Error::arg(format!("element {e} outside 1..={n}")));
                }
                if seen[e] {
                    return Err(Error::arg(format!("element {e} appears twice")));
                }
                seen[e] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::arg(format!("element {missing} not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    /// Partition of `{1..labels.len()}` grouping positions with equal labels.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<&T> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match reps.iter().position(|r| *r == l) {
                Some(b) => blocks[b].push(i + 1),
                None => {
                    reps.push(l);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        Partition {
            n: labels.len(),
            blocks,
        }
    }

    /// `0̂_n`: all singletons.
    pub fn zero(n: usize) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// `1̂_n`: a single block.
    pub fn one(n: usize) -> Self {
        let blocks = if n == 0 { vec![] } else { vec![(1..=n).collect()] };
        Partition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index (in canonical order) of every element, 0-based positions.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                out[e - 1] = b;
            }
        }
        out
    }

    pub fn block_of(&self, e: usize) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|b| b.binary_search(&e).is_ok())
            .map(|b| b.as_slice())
    }

    pub fn contains_block(&self, block: &[usize]) -> bool {
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        self.blocks.contains(&sorted)
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_even(&self) -> bool {
        self.blocks.iter().all(|b| b.len() % 2 == 0)
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        let mut first = vec![usize::MAX; self.blocks.len()];
        let mut last = vec![0; self.blocks.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            first[b] = block[0];
            last[b] = *block.last().unwrap();
        }
        let mut stack: Vec<usize> = Vec::new();
        for i in 1..=self.n {
            let b = labels[i - 1];
            while let Some(&t) = stack.last() {
                if last[t] < i {
                    stack.pop();
                } else {
                    break;
                }
            }
            if first[b] == i {
                stack.push(b);
            } else if stack.last() != Some(&b) {
                return false;
            }
        }
        true
    }

    /// Is every block a run of consecutive integers?
    pub fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        same_n(self, other)?;
        let theirs = other.labels();
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&e| theirs[e - 1] == theirs[b[0] - 1])))
    }

    /// Restriction to the sorted element list `elems`, relabelled `1..=k` by
    /// position.
    pub fn restrict(&self, elems: &[usize]) -> Partition {
        let labels = self.labels();
        let sub: Vec<usize> = elems.iter().map(|&e| labels[e - 1]).collect();
        Partition::from_labels(&sub)
    }

    /// Juxtaposition: the parts occupy consecutive ranges in the given order.
    pub fn concat(parts: &[Partition]) -> Partition {
        let mut n = 0;
        let mut blocks = Vec::new();
        for p in parts {
            for b in &p.blocks {
                blocks.push(b.iter().map(|&e| e + n).collect());
            }
            n += p.n;
        }
        Partition { n, blocks }
    }

    /// The permutation sending every element to the next element of its
    /// block, cyclically (0-based).
    pub fn cycle_permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.n];
        for b in &self.blocks {
            for (k, &e) in b.iter().enumerate() {
                perm[e - 1] = b[(k + 1) % b.len()] - 1;
            }
        }
        perm
    }

    /// Cycle decomposition of a 0-based permutation.
    pub fn from_permutation(perm: &[usize]) -> Partition {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut block = Vec::new();
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                block.push(e + 1);
                e = perm[e];
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { n, blocks }
    }

    /// The JSON array-of-arrays form.
    pub fn to_nested(&self) -> Vec<Vec<usize>> {
        self.blocks.clone()
    }

    /// Inverse of [`Partition::to_nested`]; the ground set size is the
    /// largest element.
    pub fn from_nested(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

fn same_n(p: &Partition, q: &Partition) -> Result<()> {
    if p.n != q.n {
        return Err(Error::arg(format!(
            "partitions of different ground sets ({} vs {})",
            p.n, q.n
        )));
    }
    Ok(())
}

fn require_nc(p: &Partition) -> Result<()> {
    if p.is_noncrossing() {
        Ok(())
    } else {
        Err(Error::arg(format!("partition {p} is crossing")))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({}; {})", self.n, self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"1,3|2|4"`. The ground set is `1..=max element`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::zero(0));
        }
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let block = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad element {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        Partition::from_nested(blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        Partition::from_nested(blocks).map_err(serde::de::Error::custom)
    }
}

/// A family of subsets of `{1..n}` that must not occur as blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSet {
    n: usize,
    forbidden: Vec<Vec<usize>>,
}

impl BlockSet {
    pub fn new(n: usize, forbidden: Vec<Vec<usize>>) -> Result<Self> {
        let mut forbidden = forbidden;
        for set in &mut forbidden {
            if set.is_empty() {
                return Err(Error::arg("forbidden block must be nonempty"));
            }
            set.sort_unstable();
            set.dedup();
            if set[0] == 0 || *set.last().unwrap() > n {
                return Err(Error::arg(format!("forbidden block {set:?} not inside 1..={n}")));
            }
        }
        Ok(BlockSet { n, forbidden })
    }

    pub fn empty(n: usize) -> Self {
        BlockSet {
            n,
            forbidden: Vec::new(),
        }
    }

    /// All subsets of `{1..n}` of odd cardinality, in order of size then
    /// lexicographically.
    pub fn odd_subsets(n: usize) -> Self {
        let mut forbidden = Vec::new();
        for mask in 1u64..(1u64 << n) {
            if mask.count_ones() % 2 == 1 {
                forbidden.push((0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect());
            }
        }
        forbidden.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then(a.cmp(b)));
        BlockSet { n, forbidden }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.forbidden
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// True when `p` avoids every forbidden set as a block.
    pub fn admits(&self, p: &Partition) -> bool {
        self.forbidden.iter().all(|f| !p.contains_block(f))
    }

    /// Same check on a label vector produced by the enumeration core.
    pub(crate) fn admits_labels(&self, labels: &[usize]) -> bool {
        self.forbidden.iter().all(|f| !labels_have_block(labels, f))
    }
}

fn labels_have_block(labels: &[usize], block: &[usize]) -> bool {
    let l = labels[block[0] - 1];
    block.iter().all(|&e| labels[e - 1] == l) && labels.iter().filter(|&&x| x == l).count() == block.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcKind {
    All,
    Pair,
    Even,
}

impl FromStr for NcKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(NcKind::All),
            "pair" => Ok(NcKind::Pair),
            "even" => Ok(NcKind::Even),
            other => Err(Error::Parse(format!("unknown partition kind {other:?}"))),
        }
    }
}

struct NcGen<'a, A, V> {
    n: usize,
    labels: Vec<usize>,
    firsts: Vec<usize>,
    stack: Vec<usize>,
    allow: &'a A,
    visit: &'a mut V,
}

impl<A, V> NcGen<'_, A, V>
where
    A: Fn(usize, usize) -> bool,
    V: FnMut(&[usize], usize),
{
    fn run(&mut self, i: usize) {
        if i == self.n {
            (self.visit)(&self.labels, self.firsts.len());
            return;
        }
        // open a new block
        let b = self.firsts.len();
        self.firsts.push(i);
        self.stack.push(b);
        self.labels[i] = b;
        self.run(i + 1);
        self.stack.pop();
        self.firsts.pop();

        // join an open block, closing everything above it
        for depth in (0..self.stack.len()).rev() {
            let b = self.stack[depth];
            if !(self.allow)(self.firsts[b], i) {
                continue;
            }
            let closed: Vec<usize> = self.stack.drain(depth + 1..).collect();
            self.labels[i] = b;
            self.run(i + 1);
            self.stack.extend(closed);
        }
    }
}

/// Streams every noncrossing partition of `{1..n}` whose blocks pass
/// `allow(first, e)` for each element `e` joining a block started at
/// `first` (both 0-based). The visitor receives 0-based block labels in
/// order of first appearance and the block count.
pub fn visit_nc_labels<A, V>(n: usize, allow: A, mut visit: V)
where
    A: Fn(usize, usize) -> bool,
    V: FnMut(&[usize], usize),
{
    let mut gen = NcGen {
        n,
        labels: vec![0; n],
        firsts: Vec::with_capacity(n),
        stack: Vec::with_capacity(n),
        allow: &allow,
        visit: &mut visit,
    };
    gen.run(0);
}

/// Visitor form of [`enumerate_nc`] without the size cap.
pub fn for_each_nc<V: FnMut(&Partition)>(n: usize, mut visit: V) {
    visit_nc_labels(
        n,
        |_, _| true,
        |labels, _| {
            visit(&Partition::from_labels(labels));
        },
    );
}

pub fn is_noncrossing(p: &Partition) -> bool {
    p.is_noncrossing()
}

/// All of `NC(n)`, each partition once, in the generator's order.
pub fn enumerate_nc(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::arg("enumerate_nc needs n >= 1"));
    }
    if n > NC_ENUMERATION_CAP {
        return Err(Error::SizeLimit {
            what: "NC(n) enumeration",
            size: n,
            cap: NC_ENUMERATION_CAP,
        });
    }
    let mut out = Vec::with_capacity(catalan(n) as usize);
    for_each_nc(n, |p| out.push(p.clone()));
    Ok(out)
}

/// `NC(n)` restricted by kind, an optional required block and a family of
/// forbidden blocks.
pub fn enumerate_nc_filtered(
    n: usize,
    kind: NcKind,
    filter: &BlockSet,
    required: Option<&[usize]>,
) -> Result<Vec<Partition>> {
    if filter.n() != n {
        return Err(Error::arg("filter ground set differs from n"));
    }
    if let Some(req) = required {
        if req.is_empty() || req.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::arg(format!("required block {req:?} not inside 1..={n}")));
        }
    }
    Ok(enumerate_nc(n)?
        .into_iter()
        .filter(|p| match kind {
            NcKind::All => true,
            NcKind::Pair => p.is_pairing(),
            NcKind::Even => p.is_even(),
        })
        .filter(|p| required.is_none_or(|r| p.contains_block(r)))
        .filter(|p| filter.admits(p))
        .collect())
}

pub fn leq(p: &Partition, q: &Partition) -> Result<bool> {
    p.leq(q)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
    fn merge_blocks(&mut self, p: &Partition) {
        for b in p.blocks() {
            for w in b.windows(2) {
                self.union(w[0] - 1, w[1] - 1);
            }
        }
    }
    fn into_partition(mut self) -> Partition {
        let n = self.0.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_labels(&roots)
    }
}

/// Join in the `NC(n)` lattice: the set-partition join, then crossing
/// blocks merged until the result is noncrossing.
pub fn nc_join(p: &Partition, q: &Partition) -> Result<Partition> {
    same_n(p, q)?;
    require_nc(p)?;
    require_nc(q)?;
    let mut uf = UnionFind::new(p.n());
    uf.merge_blocks(p);
    uf.merge_blocks(q);
    let mut joined = uf.into_partition();
    while let Some((a, b)) = first_crossing(&joined) {
        let mut uf = UnionFind::new(joined.n());
        uf.merge_blocks(&joined);
        uf.union(a - 1, b - 1);
        joined = uf.into_partition();
    }
    Ok(joined)
}

/// Representatives of two crossing blocks, if any.
fn first_crossing(p: &Partition) -> Option<(usize, usize)> {
    let blocks = p.blocks();
    for (x, bx) in blocks.iter().enumerate() {
        for by in &blocks[x + 1..] {
            let crossing = bx.windows(2).any(|w| {
                let inside = by.iter().filter(|&&e| w[0] < e && e < w[1]).count();
                inside > 0 && inside < by.len()
            });
            if crossing {
                return Some((bx[0], by[0]));
            }
        }
    }
    None
}

/// `nc_join(p, rho) == 1̂_n`.
///
/// Decided by connectivity of the block-overlap graph. The set join of a
/// noncrossing partition with an interval partition is already
/// noncrossing, so a disconnected graph is a definite "no" whenever either
/// argument is an interval partition; otherwise the closure is computed.
pub fn joins_to_one(p: &Partition, rho: &Partition) -> Result<bool> {
    same_n(p, rho)?;
    require_nc(p)?;
    require_nc(rho)?;
    Ok(joins_to_one_unchecked(p, rho))
}

pub(crate) fn joins_to_one_unchecked(p: &Partition, rho: &Partition) -> bool {
    let n = p.n();
    if n <= 1 {
        return true;
    }
    let mut uf = UnionFind::new(n);
    uf.merge_blocks(p);
    uf.merge_blocks(rho);
    let root = uf.find(0);
    if (1..n).all(|i| uf.find(i) == root) {
        return true;
    }
    if p.is_interval() || rho.is_interval() {
        return false;
    }
    nc_join(p, rho).map(|j| j.num_blocks() == 1).unwrap_or(false)
}

/// Connectivity test on raw 0-based labels against an interval partition
/// given by its block sizes. Used in the hot loops of the product formula.
pub(crate) fn labels_join_interval_to_one(labels: &[usize], nblocks: usize, sizes: &[usize]) -> bool {
    let n = labels.len();
    if n <= 1 {
        return true;
    }
    // nodes: blocks of pi (0..nblocks) and blocks of rho (nblocks..)
    let mut uf = UnionFind::new(nblocks + sizes.len());
    let mut pos = 0;
    for (g, &len) in sizes.iter().enumerate() {
        for _ in 0..len {
            uf.union(labels[pos], nblocks + g);
            pos += 1;
        }
    }
    let root = uf.find(0);
    (1..nblocks + sizes.len()).all(|x| uf.find(x) == root)
}

fn kreweras_perm(p: &Partition) -> Result<Vec<usize>> {
    require_nc(p)?;
    let perm = p.cycle_permutation();
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    Ok(inv)
}

/// Right complement: blocks are the cycles of `P⁻¹ ∘ γ`, with `P` the block
/// permutation and `γ = (1 2 … n)`.
pub fn kreweras_right(p: &Partition) -> Result<Partition> {
    let inv = kreweras_perm(p)?;
    let n = inv.len();
    let sigma: Vec<usize> = (0..n).map(|i| inv[(i + 1) % n]).collect();
    Ok(Partition::from_permutation(&sigma))
}

/// Left complement: blocks are the cycles of `γ ∘ P⁻¹`.
pub fn kreweras_left(p: &Partition) -> Result<Partition> {
    let inv = kreweras_perm(p)?;
    let n = inv.len();
    let sigma: Vec<usize> = (0..n).map(|i| (inv[i] + 1) % n).collect();
    Ok(Partition::from_permutation(&sigma))
}

/// Extended complement on the labels `0̄..n̄`, returned as a partition of
/// `{1..n+1}` where element `j + 1` stands for label `j̄`. It is the right
/// complement with `0̄` joined to the block of `n̄`.
pub fn kreweras_extended(p: &Partition) -> Result<Partition> {
    let n = p.n();
    let right = kreweras_right(p)?;
    let mut blocks: Vec<Vec<usize>> = right
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&e| e + 1).collect())
        .collect();
    match blocks.iter_mut().find(|b| b.contains(&(n + 1))) {
        Some(last) => last.insert(0, 1),
        None => blocks.push(vec![1]),
    }
    Partition::new(n + 1, blocks)
}

/// Kernel of a word: positions with equal letters share a block.
pub fn ker<T: PartialEq>(word: &[T]) -> Partition {
    Partition::from_labels(word)
}

/// `{{1,2},{3,4},…,{2r−1,2r}}`.
pub fn onetwo(r: usize) -> Partition {
    Partition {
        n: 2 * r,
        blocks: (0..r).map(|i| vec![2 * i + 1, 2 * i + 2]).collect(),
    }
}

/// `{{1,2r},{2,3},…,{2r−2,2r−1}}`.
pub fn pispecial(r: usize) -> Partition {
    if r == 0 {
        return Partition::zero(0);
    }
    let mut blocks = vec![vec![1, 2 * r]];
    blocks.extend((1..r).map(|i| vec![2 * i, 2 * i + 1]));
    Partition { n: 2 * r, blocks }
}

pub fn interval_partition(sizes: &[usize]) -> Result<Partition> {
    if sizes.contains(&0) {
        return Err(Error::arg("interval sizes must be positive"));
    }
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut next = 1;
    for &s in sizes {
        blocks.push((next..next + s).collect());
        next += s;
    }
    Ok(Partition { n: next - 1, blocks })
}

/// Image of `π ∈ NC(r)` in the interval `[pispecial(r), 1̂_{2r}]`: element
/// `j` becomes the pair `{2j, 2j+1}`, with `2r+1` read as `1`.
pub fn blow_up(p: &Partition) -> Partition {
    let r = p.n();
    let blocks = p
        .blocks()
        .iter()
        .map(|b| {
            b.iter()
                .flat_map(|&j| [2 * j, if j == r { 1 } else { 2 * j + 1 }])
                .collect()
        })
        .collect();
    Partition::new(2 * r, blocks).expect("blow-up of a valid partition is valid")
}

/// Inverse of [`blow_up`]; fails unless `pi_hat ≥ pispecial(r)`.
pub fn contract(pi_hat: &Partition) -> Result<Partition> {
    let n = pi_hat.n();
    if !n.is_multiple_of(2) || !pispecial(n / 2).leq(pi_hat)? {
        return Err(Error::arg(format!("{pi_hat} is not above the special pairing")));
    }
    let r = n / 2;
    let labels = pi_hat.labels();
    // pair j sits at positions 2j (1-based), i.e. index 2j-1
    let contracted: Vec<usize> = (1..=r).map(|j| labels[2 * j - 1]).collect();
    Ok(Partition::from_labels(&contracted))
}

/// Catalan number `C_n = |NC(n)|`.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}
