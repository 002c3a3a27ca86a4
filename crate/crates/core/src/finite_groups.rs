//! Matrix groups over prime fields: reduction of exact matrices mod split
//! primes, exact group orders through stabilizer chains on the vector action,
//! certified surjectivity onto SL(n, q), randomized irreducibility testing,
//! and serializable certificates.
//!
//! The surjectivity certification rests on an inequality that holds for any
//! partial stabilizer chain: the product of the orbit lengths never exceeds
//! the order of the generated group. Generators with determinant 1 generate a
//! subgroup of SL(n, q), so once the orbit product *reaches* |SL(n, q)| the
//! generated group must be all of it -- no further verification pass is
//! needed, however the chain was produced.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, powmod};
use crate::cyclotomic::{CycError, SplitPrime};
use crate::linalg::{FieldScalar, Matrix, Scalar};
use crate::{CycMatrix, FqMatrix};

/// An element of the prime field F_q, tagged with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Fq {
    pub v: u64,
    pub q: u64,
}

impl Fq {
    pub fn new(v: u64, q: u64) -> Self {
        assert!(q >= 2 && q < (1 << 31), "modulus out of range");
        Fq { v: v % q, q }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Fq {
    fn zero_like(&self) -> Self {
        Fq { v: 0, q: self.q }
    }
    fn one_like(&self) -> Self {
        Fq { v: 1, q: self.q }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        Fq { v: (self.v + rhs.v) % self.q, q: self.q }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        Fq { v: (self.v + self.q - rhs.v) % self.q, q: self.q }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        Fq { v: self.v * rhs.v % self.q, q: self.q }
    }
    fn neg(&self) -> Self {
        Fq { v: (self.q - self.v) % self.q, q: self.q }
    }
}

impl FieldScalar for Fq {
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        Some(Fq { v: powmod(self.v, self.q - 2, self.q), q: self.q })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("generator {0} does not have determinant 1")]
    NotUnimodular(usize),
    #[error("state space of {points} points exceeds the cap of {cap}; use evidence mode")]
    TooLarge { points: u128, cap: u64 },
    #[error("closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
    #[error("order computation exceeded its work budget: {0}")]
    Budget(String),
    #[error("randomized chain stalled below the target order; retry with another seed or use evidence mode ({0})")]
    Stalled(String),
    #[error(transparent)]
    Cyclotomic(#[from] CycError),
}

/// Entrywise reduction of an exact matrix along the split prime's character
/// zeta -> root; fails on denominators divisible by q.
pub fn reduce_matrix(m: &CycMatrix, sp: &SplitPrime) -> Result<FqMatrix, CycError> {
    let mut out = Matrix::filled(m.rows(), m.cols(), Fq::new(0, sp.q));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, Fq::new(sp.reduce(m.get(i, j))?, sp.q));
        }
    }
    Ok(out)
}

/// |SL(n, q)| = q^{n(n-1)/2} * prod_{i=2..n} (q^i - 1).
pub fn sl_order(n: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut out = q.pow((n * (n - 1) / 2) as u32);
    for i in 2..=n {
        out *= q.pow(i as u32) - 1u32;
    }
    out
}

/// |PSL(n, q)| = |SL(n, q)| / gcd(n, q - 1).
pub fn psl_quotient_order(n: u64, q: u64) -> BigUint {
    sl_order(n, q) / BigUint::from(crate::arith::gcd_u64(n, q - 1))
}

fn dims_of(gens: &[FqMatrix]) -> Result<(usize, u64), GroupError> {
    let first = gens.first().ok_or_else(|| GroupError::BadInput("no generators".into()))?;
    if !first.is_square() {
        return Err(GroupError::BadInput("generators must be square".into()));
    }
    let n = first.rows();
    let q = first.sample().q;
    if !is_prime_u64(q) {
        return Err(GroupError::BadInput(format!("modulus {q} is not prime")));
    }
    for m in gens {
        if m.rows() != n || m.cols() != n {
            return Err(GroupError::BadInput("generator dimensions disagree".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let e = m.get(i, j);
                if e.q != q || e.v >= q {
                    return Err(GroupError::BadInput("entry not reduced mod q".into()));
                }
            }
        }
    }
    Ok((n, q))
}

// ---- dense matrices for the hot vector-action loops ----

#[derive(Clone, PartialEq, Eq)]
struct DenseMat {
    n: usize,
    q: u64,
    a: Vec<u64>, // row-major
}

impl DenseMat {
    fn from_matrix(m: &FqMatrix) -> Self {
        let n = m.rows();
        let q = m.sample().q;
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(m.get(i, j).v);
            }
        }
        DenseMat { n, q, a }
    }

    fn to_matrix(&self) -> FqMatrix {
        Matrix::from_fn(self.n, self.n, |i, j| Fq::new(self.a[i * self.n + j], self.q))
    }

    fn identity(n: usize, q: u64) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        DenseMat { n, q, a }
    }

    fn is_identity(&self) -> bool {
        self.a.iter().enumerate().all(|(k, &v)| {
            let (i, j) = (k / self.n, k % self.n);
            v == u64::from(i == j)
        })
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let q = self.q;
        let mut a = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let s = self.a[i * n + k];
                if s == 0 {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut a[i * n + j];
                    *cell = (*cell + s * rhs.a[k * n + j]) % q;
                }
            }
        }
        DenseMat { n, q, a }
    }

    fn inverse(&self) -> Option<Self> {
        self.to_matrix().inverse().ok().map(|m| DenseMat::from_matrix(&m))
    }

    fn decode(&self, mut x: u32, out: &mut [u64]) {
        for slot in out.iter_mut() {
            *slot = u64::from(x) % self.q;
            x = (u64::from(x) / self.q) as u32;
        }
    }

    fn apply_point(&self, x: u32, buf: &mut [u64]) -> u32 {
        self.decode(x, buf);
        let mut out = 0u64;
        let mut place = 1u64;
        for r in 0..self.n {
            let mut acc = 0u64;
            for (c, &v) in buf.iter().enumerate() {
                acc = (acc + self.a[r * self.n + c] * v) % self.q;
            }
            out += acc * place;
            place *= self.q;
        }
        out as u32
    }
}

const UNSET: u32 = u32::MAX;

struct Level {
    base: u32,
    gens: Vec<DenseMat>,
    gen_invs: Vec<DenseMat>,
    parent: Vec<u32>,
    orbit_size: u64,
}

impl Level {
    fn new(base: u32, points: usize) -> Self {
        let mut parent = vec![UNSET; points];
        parent[base as usize] = base;
        Level { base, gens: Vec::new(), gen_invs: Vec::new(), parent, orbit_size: 1 }
    }

    /// Expand the orbit with the current generator set, keeping previously
    /// discovered parent pointers valid.
    fn grow_orbit(&mut self, n: usize) {
        let mut buf = vec![0u64; n];
        let mut queue: VecDeque<u32> = self
            .parent
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != UNSET)
            .map(|(x, _)| x as u32)
            .collect();
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = g.apply_point(x, &mut buf);
                if self.parent[y as usize] == UNSET {
                    self.parent[y as usize] = x;
                    self.orbit_size += 1;
                    queue.push_back(y);
                }
            }
        }
    }

    /// u_x^{-1} * h, walking the tree from x up to the base.
    fn reduce_by_transversal(&self, mut x: u32, mut h: DenseMat, buf: &mut [u64]) -> DenseMat {
        while x != self.base {
            let par = self.parent[x as usize];
            let j = (0..self.gens.len())
                .find(|&j| self.gens[j].apply_point(par, buf) == x)
                .expect("parent pointer comes from one of the generators");
            h = self.gen_invs[j].mul(&h);
            x = par;
        }
        h
    }

    /// The coset representative u_y with u_y * base = y.
    fn transversal(&self, mut y: u32, buf: &mut [u64]) -> DenseMat {
        let mut word = Vec::new();
        while y != self.base {
            let par = self.parent[y as usize];
            let j = (0..self.gens.len())
                .find(|&j| self.gens[j].apply_point(par, buf) == y)
                .expect("parent pointer comes from one of the generators");
            word.push(j);
            y = par;
        }
        let mut m = DenseMat::identity(self.gens[0].n, self.gens[0].q);
        for j in word {
            m = m.mul(&self.gens[j]);
        }
        m
    }
}

/// Work limits for the stabilizer-chain routines.
#[derive(Clone, Debug)]
pub struct ChainBudget {
    /// cap on q^n, the size of the acted-on vector space
    pub max_points: u64,
    /// number of random strengthening rounds before concluding a stall
    pub max_random_rounds: u32,
    /// consecutive clean random sifts treated as saturation
    pub clean_streak: u32,
    /// cap on processed Schreier generators in the deterministic pass
    pub det_work_cap: u64,
}

impl Default for ChainBudget {
    fn default() -> Self {
        ChainBudget {
            max_points: 1 << 27,
            max_random_rounds: 512,
            clean_streak: 24,
            det_work_cap: 4_000_000,
        }
    }
}

/// A stabilizer chain for a group of n x n matrices over F_q acting on the
/// q^n column vectors.
pub struct StabilizerChain {
    n: usize,
    q: u64,
    points: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    fn new(n: usize, q: u64, budget: &ChainBudget) -> Result<Self, GroupError> {
        let points = (q as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if points > u128::from(budget.max_points) || points >= u128::from(UNSET) {
            return Err(GroupError::TooLarge { points, cap: budget.max_points });
        }
        Ok(StabilizerChain { n, q, points: points as usize, levels: Vec::new() })
    }

    pub fn order(&self) -> BigUint {
        let mut out = BigUint::one();
        for l in &self.levels {
            out *= BigUint::from(l.orbit_size);
        }
        out
    }

    pub fn base_points(&self) -> Vec<u64> {
        self.levels.iter().map(|l| u64::from(l.base)).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.orbit_size).collect()
    }

    /// Sift h through the chain; None means it reduced to the identity.
    fn sift(&self, h: &DenseMat) -> Option<(DenseMat, usize)> {
        let mut buf = vec![0u64; self.n];
        let mut h = h.clone();
        for (i, level) in self.levels.iter().enumerate() {
            if h.is_identity() {
                return None;
            }
            let x = h.apply_point(level.base, &mut buf);
            if x == level.base {
                continue;
            }
            if level.parent[x as usize] == UNSET {
                return Some((h, i));
            }
            h = level.reduce_by_transversal(x, h, &mut buf);
        }
        if h.is_identity() {
            None
        } else {
            Some((h, self.levels.len()))
        }
    }

    /// Whether the chain's group contains m. Meaningful once the chain is
    /// complete (deterministically verified or certified against a target).
    pub fn contains(&self, m: &FqMatrix) -> bool {
        self.sift(&DenseMat::from_matrix(m)).is_none()
    }

    /// Sift and, while a residue remains, extend the chain with it. Returns
    /// true when anything was added.
    fn absorb(&mut self, m: &DenseMat) -> bool {
        let mut added = false;
        loop {
            match self.sift(m) {
                None => return added,
                Some((residue, lvl)) => {
                    added = true;
                    if lvl == self.levels.len() {
                        let base = self.first_moved_basis_point(&residue);
                        self.levels.push(Level::new(base, self.points));
                    }
                    let inv = residue.inverse().expect("group elements are invertible");
                    self.levels[lvl].gens.push(residue);
                    self.levels[lvl].gen_invs.push(inv);
                    self.levels[lvl].grow_orbit(self.n);
                }
            }
        }
    }

    fn first_moved_basis_point(&self, h: &DenseMat) -> u32 {
        let mut buf = vec![0u64; self.n];
        for j in 0..self.n {
            let e_j = (self.q as u128).pow(j as u32) as u32;
            if h.apply_point(e_j, &mut buf) != e_j {
                return e_j;
            }
        }
        // a non-identity matrix moves some basis vector
        unreachable!("identity matrices are never absorbed");
    }

    /// Verify every Schreier generator sifts to the identity, extending the
    /// chain where it does not. Afterwards the orbit product is the exact
    /// group order.
    fn complete_deterministic(&mut self, work_cap: u64) -> Result<(), GroupError> {
        let mut buf = vec![0u64; self.n];
        'restart: loop {
            let mut work = 0u64;
            for i in 0..self.levels.len() {
                let pts: Vec<u32> = self.levels[i]
                    .parent
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p != UNSET)
                    .map(|(x, _)| x as u32)
                    .collect();
                for y in pts {
                    let u_y = self.levels[i].transversal(y, &mut buf);
                    for j in 0..self.levels[i].gens.len() {
                        work += 1;
                        if work > work_cap {
                            return Err(GroupError::Budget(format!(
                                "deterministic verification exceeded {work_cap} Schreier generators"
                            )));
                        }
                        let w = self.levels[i].gens[j].mul(&u_y);
                        let x = w.apply_point(self.levels[i].base, &mut buf);
                        let g = self.levels[i].reduce_by_transversal(x, w, &mut buf);
                        if !g.is_identity() && self.absorb(&g) {
                            continue 'restart;
                        }
                    }
                }
            }
            return Ok(());
        }
    }
}

/// Product-replacement sampler over the generated group.
struct Rattle {
    state: Vec<DenseMat>,
    acc: DenseMat,
    rng: ChaCha8Rng,
}

impl Rattle {
    fn new(gens: &[DenseMat], n: usize, q: u64, seed: u64) -> Self {
        let mut state: Vec<DenseMat> = Vec::new();
        while state.len() < gens.len().max(6) {
            state.push(gens[state.len() % gens.len()].clone());
        }
        let mut r = Rattle { state, acc: DenseMat::identity(n, q), rng: ChaCha8Rng::seed_from_u64(seed) };
        for _ in 0..64 {
            r.step();
        }
        r
    }

    fn step(&mut self) {
        let k = self.state.len();
        let i = self.rng.gen_range(0..k);
        let mut j = self.rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        self.state[i] = if self.rng.gen_bool(0.5) {
            self.state[i].mul(&self.state[j])
        } else {
            self.state[j].mul(&self.state[i])
        };
        self.acc = self.acc.mul(&self.state[i]);
    }

    fn next(&mut self) -> DenseMat {
        self.step();
        self.acc.clone()
    }
}

/// Build a stabilizer chain for the generated matrix group and return it with
/// its exact order. With `target` given, the build stops successfully as soon
/// as the orbit product reaches the target (which certifies it); otherwise,
/// and on a stalled randomized phase, a deterministic verification pass makes
/// the order exact.
pub fn stabilizer_chain(
    gens: &[FqMatrix],
    seed: u64,
    budget: &ChainBudget,
    target: Option<&BigUint>,
) -> Result<StabilizerChain, GroupError> {
    let (n, q) = dims_of(gens)?;
    let dense: Vec<DenseMat> = gens.iter().map(DenseMat::from_matrix).collect();
    for m in &dense {
        if m.inverse().is_none() {
            return Err(GroupError::BadInput("singular generator".into()));
        }
    }
    let mut chain = StabilizerChain::new(n, q, budget)?;
    for m in &dense {
        chain.absorb(m);
    }
    if dense.iter().all(|m| m.is_identity()) {
        return Ok(chain); // trivial group, empty chain
    }
    if let Some(t) = target {
        if chain.order() == *t {
            return Ok(chain);
        }
    }
    let mut rattle = Rattle::new(&dense, n, q, seed);
    let mut streak = 0u32;
    for _ in 0..budget.max_random_rounds {
        let r = rattle.next();
        if chain.absorb(&r) {
            streak = 0;
            if let Some(t) = target {
                if chain.order() == *t {
                    return Ok(chain);
                }
            }
        } else {
            streak += 1;
            if streak >= budget.clean_streak {
                break;
            }
        }
    }
    if let Some(t) = target {
        if chain.order() == *t {
            return Ok(chain);
        }
    }
    // saturated below target (or no target): fall back to the deterministic
    // verification so the reported order is exact
    let est: u64 = chain
        .levels
        .iter()
        .map(|l| l.orbit_size.saturating_mul(l.gens.len() as u64))
        .sum();
    if est > budget.det_work_cap {
        return Err(GroupError::Stalled(format!(
            "orbit product {} below target; deterministic pass would process ~{est} Schreier generators",
            chain.order()
        )));
    }
    chain.complete_deterministic(budget.det_work_cap)?;
    Ok(chain)
}

/// Exact order of the generated matrix group.
pub fn group_order(gens: &[FqMatrix], seed: u64, budget: &ChainBudget) -> Result<BigUint, GroupError> {
    Ok(stabilizer_chain(gens, seed, budget, None)?.order())
}

/// Breadth-first closure of a small generating set; errors out beyond `cap`
/// elements. The identity is always included.
pub fn bfs_closure(gens: &[FqMatrix], cap: usize) -> Result<Vec<FqMatrix>, GroupError> {
    let (n, q) = dims_of(gens)?;
    let dense: Vec<DenseMat> = gens.iter().map(DenseMat::from_matrix).collect();
    let id = DenseMat::identity(n, q);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(id.a.clone());
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        out.push(m.clone());
        for g in &dense {
            let next = g.mul(&m);
            if seen.insert(next.a.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::ClosureCap(cap));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(out.iter().map(DenseMat::to_matrix).collect())
}

/// Canonical representative of the image of m in PSL: the lexicographically
/// smallest scalar multiple lambda * m over the n-th roots of unity lambda.
pub fn project_to_psl(m: &FqMatrix) -> FqMatrix {
    let n = m.rows() as u64;
    let q = m.sample().q;
    let mut best: Option<Vec<u64>> = None;
    let mut best_lambda = 1;
    for lambda in 1..q {
        if powmod(lambda, n, q) != 1 {
            continue;
        }
        let enc: Vec<u64> = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| m.get(i, j).v * lambda % q))
            .collect();
        if best.as_ref().map_or(true, |b| enc < *b) {
            best = Some(enc);
            best_lambda = lambda;
        }
    }
    m.map(|x| Fq::new(x.v * best_lambda % q, q))
}

/// Size of the image in PSL of an explicitly listed group of matrices.
pub fn psl_image_size(elements: &[FqMatrix]) -> usize {
    let mut classes: HashSet<Vec<u64>> = HashSet::new();
    for m in elements {
        let c = project_to_psl(m);
        let mut enc = Vec::with_capacity(c.rows() * c.cols());
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                enc.push(c.get(i, j).v);
            }
        }
        classes.insert(enc);
    }
    classes.len()
}

// ---- element orders ----

pub fn matrix_pow_big(m: &FqMatrix, e: &BigUint) -> FqMatrix {
    let mut result = Matrix::identity(m.rows(), m.sample());
    let mut base = m.clone();
    let mut e = e.clone();
    let two = BigUint::from(2u32);
    while !e.is_zero() {
        if (&e % &two).is_one() {
            result = result.mul(&base);
        }
        base = base.mul(&base);
        e /= &two;
    }
    result
}

/// Exact multiplicative order of m, given any multiple of it (for matrices in
/// SL(n, q), |SL(n, q)| works).
pub fn element_order(m: &FqMatrix, order_multiple: &BigUint) -> BigUint {
    let mut e = order_multiple.clone();
    debug_assert!(matrix_pow_big(m, &e).is_identity(), "order multiple is wrong");
    for (r, _) in crate::arith::factorize(order_multiple) {
        while (&e % &r).is_zero() {
            let cand = &e / &r;
            if matrix_pow_big(m, &cand).is_identity() {
                e = cand;
            } else {
                break;
            }
        }
    }
    e
}

/// A prime r dividing `order` with r | q^n - 1 but r not dividing q^i - 1 for
/// 0 < i < n: the classical large-subgroup evidence.
pub fn primitive_prime_divisor(order: &BigUint, q: u64, n: u64) -> Option<BigUint> {
    let q_big = BigUint::from(q);
    for (r, _) in crate::arith::factorize(order) {
        if ((q_big.pow(n as u32) - 1u32) % &r).is_zero()
            && (1..n).all(|i| !((q_big.pow(i as u32) - 1u32) % &r).is_zero())
        {
            return Some(r);
        }
    }
    None
}

// ---- irreducibility ----

/// Outcome of the randomized nullity-one irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrredOutcome {
    Irreducible,
    /// Row basis of a proper nonzero invariant subspace.
    Reducible { subspace: Vec<Vec<u64>> },
    /// No nullity-one algebra element was found within the budget.
    Unknown,
}

/// Randomized irreducibility test over F_q: find an algebra element of
/// nullity one, spin its kernel vector, and spin a dual kernel vector. Both
/// spinning to full dimension proves irreducibility; a proper spin yields an
/// invariant subspace directly (primal case) or via the annihilator of the
/// dual span (dual case).
pub fn irreducibility(gens: &[FqMatrix], seed: u64, tries: u32) -> Result<IrredOutcome, GroupError> {
    let (n, q) = dims_of(gens)?;
    let dense: Vec<DenseMat> = gens.iter().map(DenseMat::from_matrix).collect();
    let mut rattle = Rattle::new(&dense, n, q, seed ^ 0x6e75_6c6c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7370_696e);
    for _ in 0..tries {
        // random element of the enveloping algebra
        let mut z = Matrix::filled(n, n, Fq::new(0, q));
        for _ in 0..n + 2 {
            let w = rattle.next().to_matrix();
            let c = Fq::new(rng.gen_range(0..q), q);
            z = z.add(&w.scalar_mul(&c));
        }
        let ker = z.kernel();
        if ker.len() != 1 {
            continue;
        }
        let v: Vec<u64> = ker[0].iter().map(|x| x.v).collect();
        let span = spin(&v, gens, n, q);
        if span.len() < n {
            return Ok(IrredOutcome::Reducible { subspace: span });
        }
        // dual spin: w in ker(z^T) under the transposed generators
        let zt = z.transpose();
        let kert = zt.kernel();
        debug_assert_eq!(kert.len(), 1, "transpose has equal nullity");
        let w: Vec<u64> = kert[0].iter().map(|x| x.v).collect();
        let gens_t: Vec<FqMatrix> = gens.iter().map(Matrix::transpose).collect();
        let dual_span = spin(&w, &gens_t, n, q);
        if dual_span.len() == n {
            return Ok(IrredOutcome::Irreducible);
        }
        // the annihilator of the dual span is a proper invariant subspace
        let rows: Vec<Vec<Fq>> = dual_span
            .iter()
            .map(|r| r.iter().map(|&v| Fq::new(v, q)).collect())
            .collect();
        let ann = Matrix::from_rows(rows)
            .map_err(|e| GroupError::BadInput(e.to_string()))?
            .kernel();
        let subspace: Vec<Vec<u64>> = ann
            .iter()
            .map(|col| col.iter().map(|x| x.v).collect())
            .collect();
        return Ok(IrredOutcome::Reducible { subspace });
    }
    Ok(IrredOutcome::Unknown)
}

/// Row-reduced basis of the smallest invariant subspace containing v.
fn spin(v: &[u64], gens: &[FqMatrix], n: usize, q: u64) -> Vec<Vec<u64>> {
    let mut basis: Vec<Vec<u64>> = Vec::new(); // rows in echelon form
    let mut pivots: Vec<usize> = Vec::new();
    let mut stack = vec![v.to_vec()];
    while let Some(mut w) = stack.pop() {
        // reduce against the basis
        for (b, &piv) in basis.iter().zip(&pivots) {
            if w[piv] != 0 {
                let c = w[piv];
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = (*wi + (q - c) * bi) % q;
                }
            }
        }
        if let Some(piv) = w.iter().position(|&x| x != 0) {
            let inv = powmod(w[piv], q - 2, q);
            for wi in w.iter_mut() {
                *wi = *wi * inv % q;
            }
            for g in gens {
                let mut img = vec![0u64; n];
                for (r, slot) in img.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for c in 0..n {
                        acc = (acc + g.get(r, c).v * w[c]) % q;
                    }
                    *slot = acc;
                }
                stack.push(img);
            }
            basis.push(w);
            pivots.push(piv);
            if basis.len() == n {
                return basis;
            }
        }
    }
    basis
}

// ---- certificates ----

pub const CERT_KIND_SURJECTIVITY: &str = "sl-surjectivity";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurjectivityMode {
    /// stabilizer-chain order certification (exact)
    Exact,
    /// irreducibility + element-order evidence, no order claim
    Evidence,
    /// exact when the state space fits the budget, else evidence
    Auto,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EvidenceSummary {
    pub irreducibility: String,
    pub sampled_element_orders: Vec<String>,
    pub ppd_prime: Option<String>,
    pub ppd_element_order: Option<String>,
}

/// A self-contained, deterministic record of a surjectivity computation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SurjectivityCertificate {
    pub schema_version: u32,
    pub kind: String,
    pub convention: String,
    pub mode: String,
    pub n: u64,
    pub q: u64,
    pub context: BTreeMap<String, String>,
    pub generator_count: usize,
    pub generators_sha256: String,
    pub sl_order: String,
    pub psl_order: String,
    pub computed_order: Option<String>,
    pub base_points: Vec<u64>,
    pub orbit_sizes: Vec<u64>,
    pub verdict: String,
    pub evidence: Option<EvidenceSummary>,
    pub seed: u64,
}

pub fn generators_digest(gens: &[FqMatrix]) -> String {
    use sha2::{Digest, Sha256};
    let enc: Vec<Vec<Vec<u64>>> = gens
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).v).collect())
                .collect()
        })
        .collect();
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&enc).expect("vectors of integers serialize"));
    hex::encode(h.finalize())
}

/// Decide whether the given determinant-one matrices generate SL(n, q), or
/// gather evidence when the exact route is out of budget.
pub fn verify_surjectivity(
    gens: &[FqMatrix],
    mode: SurjectivityMode,
    seed: u64,
    budget: &ChainBudget,
    context: BTreeMap<String, String>,
) -> Result<SurjectivityCertificate, GroupError> {
    let (n, q) = dims_of(gens)?;
    for (i, m) in gens.iter().enumerate() {
        let d = m.det();
        if d.v != 1 {
            return Err(GroupError::NotUnimodular(i));
        }
    }
    let target = sl_order(n as u64, q);
    let points = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let exact = match mode {
        SurjectivityMode::Exact => {
            if points > u128::from(budget.max_points) {
                return Err(GroupError::TooLarge { points, cap: budget.max_points });
            }
            true
        }
        SurjectivityMode::Evidence => false,
        SurjectivityMode::Auto => points <= u128::from(budget.max_points),
    };
    let mut cert = SurjectivityCertificate {
        schema_version: crate::SCHEMA_VERSION,
        kind: CERT_KIND_SURJECTIVITY.to_string(),
        convention: crate::CONVENTION.to_string(),
        mode: if exact { "exact" } else { "evidence" }.to_string(),
        n: n as u64,
        q,
        context,
        generator_count: gens.len(),
        generators_sha256: generators_digest(gens),
        sl_order: target.to_string(),
        psl_order: psl_quotient_order(n as u64, q).to_string(),
        computed_order: None,
        base_points: Vec::new(),
        orbit_sizes: Vec::new(),
        verdict: String::new(),
        evidence: None,
        seed,
    };
    if exact {
        let chain = stabilizer_chain(gens, seed, budget, Some(&target))?;
        let order = chain.order();
        cert.computed_order = Some(order.to_string());
        cert.base_points = chain.base_points();
        cert.orbit_sizes = chain.orbit_sizes();
        cert.verdict = if order == target { "surjective" } else { "proper-subgroup" }.to_string();
    } else {
        let irred = irreducibility(gens, seed, 64)?;
        let dense: Vec<DenseMat> = gens.iter().map(DenseMat::from_matrix).collect();
        let mut rattle = Rattle::new(&dense, n, q, seed ^ 0x6f72_6465);
        let mut orders = Vec::new();
        let mut ppd: Option<(BigUint, BigUint)> = None;
        for _ in 0..5 {
            let m = rattle.next().to_matrix();
            let o = element_order(&m, &target);
            if ppd.is_none() {
                if let Some(r) = primitive_prime_divisor(&o, q, n as u64) {
                    ppd = Some((r, o.clone()));
                }
            }
            orders.push(o.to_string());
        }
        cert.evidence = Some(EvidenceSummary {
            irreducibility: match irred {
                IrredOutcome::Irreducible => "irreducible".to_string(),
                IrredOutcome::Reducible { .. } => "reducible".to_string(),
                IrredOutcome::Unknown => "unknown".to_string(),
            },
            sampled_element_orders: orders,
            ppd_prime: ppd.as_ref().map(|(r, _)| r.to_string()),
            ppd_element_order: ppd.as_ref().map(|(_, o)| o.to_string()),
        });
        cert.verdict = "evidence-only".to_string();
    }
    Ok(cert)
}

/// Convenience: group order by explicit enumeration for cross-checking the
/// chain machinery on small inputs.
pub fn brute_force_order(gens: &[FqMatrix], cap: usize) -> Result<usize, GroupError> {
    Ok(bfs_closure(gens, cap)?.len())
}
