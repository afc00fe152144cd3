//! Finite verification: solutions inside finite sets, monochromatic
//! solutions under colorings of `{1..N}`, minimal forcing `N`, and
//! Milliken–Taylor / finite sums.
//!
//! The domain is always the positive integers; 0 is never a candidate value,
//! which rules out the trivial all-zero solution of a sum-zero equation.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::witness::EquationCoeffs;

/// Default node budget of [`min_forcing_n`].
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Default cap on the number of block tuples [`mt_sums`] may enumerate.
pub const DEFAULT_MT_CAP: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded after {nodes} nodes (longest valid prefix so far: {longest_prefix})")]
    ResourceExceeded { nodes: u64, longest_prefix: usize },
    #[error("enumeration exceeded the cap of {cap} block tuples")]
    EnumerationCapExceeded { cap: u64 },
    #[error("value {value} lies outside the colored range 1..={n_max}")]
    OutOfRange { value: u128, n_max: usize },
    #[error("coefficient {0} does not fit the search's 64-bit arithmetic")]
    CoefficientTooLarge(String),
}

/// A total map `{1..N} → {0..r−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    r: usize,
    colors: Vec<u8>,
}

impl Coloring {
    /// `colors[i − 1]` is the color of `i`.
    pub fn new(colors: Vec<u8>, r: usize) -> Result<Self, SearchError> {
        if r == 0 || r > 256 {
            return Err(SearchError::InvalidInput(format!("color count {r} not in 1..=256")));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c as usize >= r) {
            return Err(SearchError::InvalidInput(format!("color {bad} not below r = {r}")));
        }
        Ok(Coloring { r, colors })
    }

    /// Uses `max color + 1` colors.
    pub fn from_colors(colors: Vec<u8>) -> Self {
        let r = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(1);
        Coloring { r, colors }
    }

    /// Periodic coloring: `i ↦ pattern[(i − 1) mod len]`.
    pub fn periodic(pattern: &[u8], n_max: usize) -> Self {
        Self::from_colors((0..n_max).map(|i| pattern[i % pattern.len()]).collect())
    }

    pub fn n_max(&self) -> usize {
        self.colors.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Color of `i`, for `1 ≤ i ≤ N`.
    pub fn color(&self, i: usize) -> Option<u8> {
        i.checked_sub(1).and_then(|j| self.colors.get(j)).copied()
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Members of color class `c`, ascending.
    pub fn class(&self, c: u8) -> Vec<u64> {
        (1..=self.colors.len() as u64)
            .filter(|&i| self.colors[i as usize - 1] == c)
            .collect()
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.colors.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<u8>::deserialize(deserializer).map(Coloring::from_colors)
    }
}

/// A tuple `x₁ … x_k` of positive integers solving an equation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Solution(pub Vec<u64>);

impl Solution {
    pub fn values(&self) -> &[u64] {
        &self.0
    }
}

fn small_coeffs(eq: &EquationCoeffs) -> Result<Vec<i64>, SearchError> {
    eq.coeffs()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| SearchError::CoefficientTooLarge(c.to_string())))
        .collect()
}

/// Enumerates solutions lexicographically. Positions `0..k−1` take values from
/// `candidates(prefix)`, and the last position is solved for.
struct TupleSearch<'a, F, G> {
    c: &'a [i64],
    distinct: bool,
    candidates: F,
    accept_last: G,
    x: Vec<u64>,
}

impl<F, G> TupleSearch<'_, F, G>
where
    F: Fn(&[u64]) -> Vec<u64>,
    G: Fn(&[u64], u64) -> bool,
{
    /// Calls `emit` on each solution until it returns `false`.
    fn run(&mut self, emit: &mut dyn FnMut(&[u64]) -> bool) {
        self.step(0, 0, emit);
    }

    fn step(&mut self, pos: usize, partial: i128, emit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        let k = self.c.len();
        if pos + 1 == k {
            let last = self.c[k - 1] as i128;
            if partial % last != 0 {
                return true;
            }
            let v = -partial / last;
            if v < 1 || v > u64::MAX as i128 {
                return true;
            }
            let v = v as u64;
            if self.distinct && self.x.contains(&v) {
                return true;
            }
            if !(self.accept_last)(&self.x, v) {
                return true;
            }
            self.x.push(v);
            let go_on = emit(&self.x);
            self.x.pop();
            return go_on;
        }
        for v in (self.candidates)(&self.x) {
            if self.distinct && self.x.contains(&v) {
                continue;
            }
            self.x.push(v);
            let go_on = self.step(pos + 1, partial + self.c[pos] as i128 * v as i128, emit);
            self.x.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Up to `limit` solutions with every `xᵢ ∈ set`, in lexicographic order.
pub fn solutions_in_set(
    eq: &EquationCoeffs,
    set: &BTreeSet<u64>,
    distinct: bool,
    limit: usize,
) -> Result<Vec<Solution>, SearchError> {
    if set.is_empty() {
        return Err(SearchError::InvalidInput("the set is empty".into()));
    }
    if set.contains(&0) {
        return Err(SearchError::InvalidInput("the set must contain positive integers only".into()));
    }
    if limit == 0 {
        return Err(SearchError::InvalidInput("limit must be at least 1".into()));
    }
    let c = small_coeffs(eq)?;
    let members: Vec<u64> = set.iter().copied().collect();
    let mut out = Vec::new();
    let mut search = TupleSearch {
        c: &c,
        distinct,
        candidates: |_: &[u64]| members.clone(),
        accept_last: |_: &[u64], v: u64| set.contains(&v),
        x: Vec::with_capacity(c.len()),
    };
    search.run(&mut |x| {
        out.push(Solution(x.to_vec()));
        out.len() < limit
    });
    Ok(out)
}

/// The lexicographically first solution lying inside a single color class.
pub fn find_monochromatic(
    eq: &EquationCoeffs,
    col: &Coloring,
    distinct: bool,
) -> Result<Option<Solution>, SearchError> {
    let c = small_coeffs(eq)?;
    let n = col.n_max() as u64;
    let classes: Vec<Vec<u64>> = (0..col.r()).map(|k| col.class(k as u8)).collect();
    let mut found = None;
    let mut search = TupleSearch {
        c: &c,
        distinct,
        candidates: |x: &[u64]| match x.first() {
            None => (1..=n).collect(),
            Some(&x0) => classes[col.color(x0 as usize).unwrap() as usize].clone(),
        },
        accept_last: |x: &[u64], v: u64| {
            let want = col.color(x.first().copied().unwrap_or(v) as usize);
            v <= n && col.color(v as usize) == want
        },
        x: Vec::with_capacity(c.len()),
    };
    search.run(&mut |x| {
        found = Some(Solution(x.to_vec()));
        false
    });
    Ok(found)
}

/// Tuning knobs for [`min_forcing_n`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of color assignments tried.
    pub node_budget: u64,
    /// Only allow a new color once all smaller colors have appeared.
    /// Integer 1 always receives color 0 regardless.
    pub color_symmetry: bool,
    /// Split the search tree across the rayon thread pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            color_symmetry: true,
            parallel: true,
        }
    }
}

/// Either a coloring with no monochromatic solution or the statement that
/// the whole tree was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Counterexample(Coloring),
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Every coloring of `{1..n}` has a monochromatic solution.
    pub forced: bool,
    pub n: usize,
    pub certificate: Certificate,
    pub nodes: u64,
}

impl Serialize for SearchOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SearchOutcome", 4)?;
        s.serialize_field("forced", &self.forced)?;
        s.serialize_field("n", &self.n)?;
        match &self.certificate {
            Certificate::Counterexample(col) => s.serialize_field("certificate", col)?,
            Certificate::Exhausted => s.serialize_field("certificate", "exhausted")?,
        }
        s.serialize_field("nodes", &self.nodes)?;
        s.end()
    }
}

/// Result of [`min_forcing_n`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingReport {
    pub outcome: SearchOutcome,
    /// A longest coloring of an initial segment without a monochromatic
    /// solution. Its length is `n − 1` when forced, `n` otherwise.
    pub longest_valid: Coloring,
}

/// Coloring `{1..N}` in increasing order, one branch per color; a branch dies
/// as soon as the newly colored integer completes a monochromatic solution.
/// Valid colorings are closed under restriction, so the deepest surviving
/// branch determines the minimal forcing `N`.
struct Backtracker<'a> {
    c: &'a [i64],
    r: usize,
    n_max: usize,
    distinct: bool,
    symmetry: bool,
    colors: Vec<u8>,
    classes: Vec<Vec<u64>>,
    max_used: Vec<u8>,
    best: Vec<u8>,
    local_nodes: u64,
    shared: &'a Shared,
}

struct Shared {
    nodes: AtomicU64,
    budget: u64,
    done: AtomicBool,
    exceeded: AtomicBool,
}

const FLUSH_EVERY: u64 = 1024;

impl<'a> Backtracker<'a> {
    fn new(c: &'a [i64], r: usize, n_max: usize, distinct: bool, symmetry: bool, shared: &'a Shared) -> Self {
        Backtracker {
            c,
            r,
            n_max,
            distinct,
            symmetry,
            colors: Vec::with_capacity(n_max),
            classes: vec![Vec::new(); r],
            max_used: Vec::with_capacity(n_max),
            best: Vec::new(),
            local_nodes: 0,
            shared,
        }
    }

    fn allowed_colors(&self) -> usize {
        if self.colors.is_empty() {
            1
        } else if self.symmetry {
            (*self.max_used.last().unwrap() as usize + 2).min(self.r)
        } else {
            self.r
        }
    }

    fn push(&mut self, color: u8) {
        let n = self.colors.len() as u64 + 1;
        self.colors.push(color);
        self.classes[color as usize].push(n);
        let m = self.max_used.last().map_or(color, |&m| m.max(color));
        self.max_used.push(m);
    }

    fn pop(&mut self) {
        let color = self.colors.pop().unwrap();
        self.classes[color as usize].pop();
        self.max_used.pop();
    }

    /// Does the most recently colored integer complete a monochromatic
    /// solution with smaller integers of its color?
    fn last_closes_solution(&self) -> bool {
        let n = self.colors.len() as u64;
        let color = *self.colors.last().unwrap();
        let class = &self.classes[color as usize];
        let k = self.c.len();
        (0..k).any(|p| {
            let solved = if p == k - 1 { k - 2 } else { k - 1 };
            let mut x = vec![0u64; k];
            x[p] = n;
            self.complete(&mut x, p, solved, 0, self.c[p] as i128 * n as i128, class, color)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn complete(
        &self,
        x: &mut [u64],
        fixed: usize,
        solved: usize,
        pos: usize,
        partial: i128,
        class: &[u64],
        color: u8,
    ) -> bool {
        if pos == x.len() {
            let cs = self.c[solved] as i128;
            if partial % cs != 0 {
                return false;
            }
            let v = -partial / cs;
            let n = self.colors.len() as i128;
            if v < 1 || v > n || self.colors[v as usize - 1] != color {
                return false;
            }
            let v = v as u64;
            return !self.distinct
                || x.iter().enumerate().all(|(i, &xi)| i == solved || xi != v);
        }
        if pos == fixed || pos == solved {
            return self.complete(x, fixed, solved, pos + 1, partial, class, color);
        }
        for &v in class {
            if self.distinct && x[..pos].iter().enumerate().any(|(i, &xi)| i != solved && xi == v) {
                continue;
            }
            if self.distinct && x[fixed] == v {
                continue;
            }
            x[pos] = v;
            if self.complete(x, fixed, solved, pos + 1, partial + self.c[pos] as i128 * v as i128, class, color) {
                return true;
            }
        }
        false
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(FLUSH_EVERY) {
            let total = self.shared.nodes.fetch_add(FLUSH_EVERY, Ordering::Relaxed) + FLUSH_EVERY;
            if total > self.shared.budget {
                self.shared.exceeded.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.exceeded.load(Ordering::Relaxed) && !self.shared.done.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let rest = self.local_nodes % FLUSH_EVERY;
        let total = self.shared.nodes.fetch_add(rest, Ordering::Relaxed) + rest;
        if total > self.shared.budget {
            self.shared.exceeded.store(true, Ordering::Relaxed);
        }
        self.local_nodes = 0;
    }

    fn record(&mut self) {
        if self.colors.len() > self.best.len() {
            self.best = self.colors.clone();
        }
    }

    /// Explores below the current (valid) prefix.
    fn dfs(&mut self) {
        self.record();
        if self.colors.len() == self.n_max {
            self.shared.done.store(true, Ordering::Relaxed);
            return;
        }
        for color in 0..self.allowed_colors() as u8 {
            if !self.tick() {
                return;
            }
            self.push(color);
            if !self.last_closes_solution() {
                self.dfs();
            }
            self.pop();
        }
    }

    /// Valid prefixes of exactly `depth` integers, for splitting the tree.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<u8>>) {
        self.record();
        if self.colors.len() == depth {
            out.push(self.colors.clone());
            return;
        }
        for color in 0..self.allowed_colors() as u8 {
            self.tick();
            self.push(color);
            if !self.last_closes_solution() {
                self.prefixes(depth, out);
            }
            self.pop();
        }
    }
}

/// Least `N ≤ n_max` such that every `r`-coloring of `{1..N}` contains a
/// monochromatic solution of `eq` (pairwise distinct when `distinct`).
///
/// When no such `N` exists the outcome is not forced, `n = n_max`, and the
/// certificate is a coloring of `{1..n_max}` without monochromatic solutions.
/// Running out of budget is an error, never a "not forced" answer.
pub fn min_forcing_n(
    eq: &EquationCoeffs,
    r: usize,
    distinct: bool,
    n_max: usize,
    config: &SearchConfig,
) -> Result<ForcingReport, SearchError> {
    if r == 0 || r > 256 {
        return Err(SearchError::InvalidInput(format!("color count {r} not in 1..=256")));
    }
    if n_max == 0 {
        return Err(SearchError::InvalidInput("n_max must be at least 1".into()));
    }
    let c = small_coeffs(eq)?;
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget: config.node_budget,
        done: AtomicBool::new(false),
        exceeded: AtomicBool::new(false),
    };

    let split_depth = split_depth(r, n_max);
    let best = if config.parallel && split_depth > 0 {
        let mut root = Backtracker::new(&c, r, n_max, distinct, config.color_symmetry, &shared);
        let mut prefixes = Vec::new();
        root.prefixes(split_depth, &mut prefixes);
        root.flush();
        let best = Mutex::new(root.best);
        prefixes.par_iter().for_each(|prefix| {
            if shared.done.load(Ordering::Relaxed) || shared.exceeded.load(Ordering::Relaxed) {
                return;
            }
            let mut bt = Backtracker::new(&c, r, n_max, distinct, config.color_symmetry, &shared);
            for &color in prefix {
                bt.push(color);
            }
            bt.dfs();
            bt.flush();
            let mut best = best.lock().unwrap();
            if bt.best.len() > best.len() {
                *best = bt.best;
            }
        });
        best.into_inner().unwrap()
    } else {
        let mut bt = Backtracker::new(&c, r, n_max, distinct, config.color_symmetry, &shared);
        bt.dfs();
        bt.flush();
        bt.best
    };

    let nodes = shared.nodes.load(Ordering::Relaxed);
    let longest = best.len();
    if longest == n_max {
        let col = Coloring { r, colors: best };
        return Ok(ForcingReport {
            outcome: SearchOutcome {
                forced: false,
                n: n_max,
                certificate: Certificate::Counterexample(col.clone()),
                nodes,
            },
            longest_valid: col,
        });
    }
    if shared.exceeded.load(Ordering::Relaxed) {
        return Err(SearchError::ResourceExceeded {
            nodes,
            longest_prefix: longest,
        });
    }
    Ok(ForcingReport {
        outcome: SearchOutcome {
            forced: true,
            n: longest + 1,
            certificate: Certificate::Exhausted,
            nodes,
        },
        longest_valid: Coloring { r, colors: best },
    })
}

/// Depth at which the tree has a few hundred prefixes; 0 means "don't split".
fn split_depth(r: usize, n_max: usize) -> usize {
    if r < 2 {
        return 0;
    }
    let mut depth = 0;
    let mut count = 1usize;
    while count < 256 && depth < n_max {
        count = count.saturating_mul(r);
        depth += 1;
    }
    if depth >= n_max {
        0
    } else {
        depth
    }
}

/// A Milliken–Taylor configuration: a strictly increasing ground sequence
/// `x₁ < … < x_n` and positive block coefficients `a₀ … a_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MTSpec {
    ground: Vec<u64>,
    coeffs: Vec<u64>,
}

impl MTSpec {
    pub fn new(ground: Vec<u64>, coeffs: Vec<u64>) -> Result<Self, SearchError> {
        if ground.first() == Some(&0) {
            return Err(SearchError::InvalidInput("ground elements must be positive".into()));
        }
        if ground.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SearchError::InvalidInput("ground sequence must be strictly increasing".into()));
        }
        if coeffs.is_empty() {
            return Err(SearchError::InvalidInput("at least one coefficient is required".into()));
        }
        if coeffs.contains(&0) {
            return Err(SearchError::InvalidInput("coefficients must be at least 1".into()));
        }
        Ok(MTSpec { ground, coeffs })
    }

    pub fn ground(&self) -> &[u64] {
        &self.ground
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// All sums `Σ_s Σ_{i∈I_s} a_s·x_i` over block tuples `I₀ < … < I_k` of
/// nonempty index sets. Fails once more than `cap` tuples were visited.
pub fn mt_sums(spec: &MTSpec, cap: u64) -> Result<BTreeSet<u128>, SearchError> {
    struct Walk<'a> {
        x: &'a [u64],
        a: &'a [u64],
        cap: u64,
        visited: u64,
        out: BTreeSet<u128>,
    }

    impl Walk<'_> {
        // `block` is the index of the open block, or None before the first one.
        fn go(&mut self, idx: usize, block: Option<usize>, open_nonempty: bool, sum: u128) -> Result<(), SearchError> {
            let last = self.a.len() - 1;
            if idx == self.x.len() {
                if block == Some(last) && open_nonempty {
                    self.visited += 1;
                    if self.visited > self.cap {
                        return Err(SearchError::EnumerationCapExceeded { cap: self.cap });
                    }
                    self.out.insert(sum);
                }
                return Ok(());
            }
            let xi = self.x[idx] as u128;
            let a = self.a;
            let term = |s: usize| a[s] as u128 * xi;
            // skip x[idx]
            self.go(idx + 1, block, open_nonempty, sum)?;
            // add x[idx] to the open block
            if let Some(b) = block {
                self.go(idx + 1, block, true, add(sum, term(b))?)?;
            }
            // open the next block with x[idx]
            let next = block.map_or(0, |b| b + 1);
            if next <= last && (block.is_none() || open_nonempty) {
                self.go(idx + 1, Some(next), true, add(sum, term(next))?)?;
            }
            Ok(())
        }
    }

    fn add(a: u128, b: u128) -> Result<u128, SearchError> {
        a.checked_add(b)
            .ok_or_else(|| SearchError::InvalidInput("sum overflows 128 bits".into()))
    }

    let mut walk = Walk {
        x: &spec.ground,
        a: &spec.coeffs,
        cap,
        visited: 0,
        out: BTreeSet::new(),
    };
    walk.go(0, None, false, 0)?;
    Ok(walk.out)
}

/// Finite sums `FS(x₁, …, x_n)`: all nonempty subset sums.
pub fn fs(ground: &[u64], cap: u64) -> Result<BTreeSet<u128>, SearchError> {
    mt_sums(&MTSpec::new(ground.to_vec(), vec![1])?, cap)
}

/// The color shared by all MT-sums of `spec`, or `None` if they are not
/// monochromatic. An empty sum set yields `None`.
pub fn verify_mt_monochromatic(spec: &MTSpec, col: &Coloring, cap: u64) -> Result<Option<u8>, SearchError> {
    let sums = mt_sums(spec, cap)?;
    if let Some(&max) = sums.last() {
        if max > col.n_max() as u128 {
            return Err(SearchError::OutOfRange {
                value: max,
                n_max: col.n_max(),
            });
        }
    }
    let mut colors = sums.iter().map(|&s| col.color(s as usize).unwrap());
    let Some(first) = colors.next() else {
        return Ok(None);
    };
    Ok(colors.all(|c| c == first).then_some(first))
}
