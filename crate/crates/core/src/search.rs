//! Large pattern-avoiding sets: greedy construction and exact maximum by
//! branch-and-bound, both certified against the detector.
//!
//! The avoidance structure is an independent-set problem in the r-uniform
//! hypergraph of instances. Hyperedges are never materialized; instead a
//! completion table maps an ordered pair of point indices to the rest of the
//! tuple, so the incremental "does adding p keep the set avoiding" check is a
//! handful of table lookups.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::pattern::{PatternSpec, PointSet, Validation};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// completion tables are quadratic in the universe; cap it
const MAX_UNIVERSE: u128 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Lexicographic,
    SeededRandom(u64),
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_set: PointSet,
    pub size: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Index-space view of the pattern on the full universe (F_q^n)^k: point i is
/// `Point::from_flat_index(i)` and `completions[v1][v2]` lists the indices of
/// v_3..v_r for the instance determined by the ordered pair (v1, v2).
struct Universe {
    points: Vec<Point>,
    size: usize,
    r: usize,
    completions: Vec<Vec<u32>>,
}

impl Universe {
    fn build(pattern: &PatternSpec, n: usize) -> Result<Self> {
        if pattern.validation() != Validation::FullRank {
            return Err(match pattern.validation() {
                Validation::Unchecked => Error::Unvalidated,
                _ => Error::NotFullRank("search requires a full-rank pattern".into()),
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let field = pattern.field();
        let k = pattern.k();
        let total = (field.q() as u128).pow((n * k) as u32);
        if total > MAX_UNIVERSE {
            return Err(Error::InvalidParameter(format!(
                "universe size {total} exceeds the search limit {MAX_UNIVERSE}"
            )));
        }
        let size = total as usize;
        let points: Vec<Point> = (0..total)
            .map(|i| Point::from_flat_index(field, k, n, i))
            .collect();
        let cms = pattern.completion_matrices()?;
        let r = pattern.r();
        let mut completions: Vec<Vec<u32>> = Vec::with_capacity(size);
        for v1 in 0..size {
            let mut row = vec![0u32; (r - 2) * size];
            for v2 in 0..size {
                if v1 == v2 {
                    continue;
                }
                let base = points[v2].sub(&points[v1])?;
                for (t, c) in cms.iter().enumerate() {
                    let v = points[v1].add(&c.apply_block(&base)?)?;
                    row[v2 * (r - 2) + t] = v.flat_index() as u32;
                }
            }
            completions.push(row);
        }
        Ok(Universe {
            points,
            size,
            r,
            completions,
        })
    }

    /// Would `members ∪ {cand}` still avoid the pattern? `members` is assumed
    /// avoiding, so only instances through `cand` need checking.
    fn stays_avoiding(&self, in_set: &[bool], members: &[u32], cand: u32) -> bool {
        let step = self.r - 2;
        let inside = |idx: u32| idx == cand || in_set[idx as usize];
        let mut pool: Vec<u32> = Vec::with_capacity(members.len() + 1);
        pool.extend_from_slice(members);
        pool.push(cand);
        for &v1 in &pool {
            for &v2 in &pool {
                if v1 == v2 {
                    continue;
                }
                let row = &self.completions[v1 as usize][v2 as usize * step..(v2 as usize + 1) * step];
                if !row.iter().all(|&v| inside(v)) {
                    continue;
                }
                // full instance inside the candidate set; reject if it
                // actually involves cand (otherwise members was not avoiding)
                if v1 == cand || v2 == cand || row.contains(&cand) {
                    return false;
                }
            }
        }
        true
    }

    fn to_point_set(&self, pattern: &PatternSpec, n: usize, members: &[u32]) -> Result<PointSet> {
        PointSet::from_points(
            pattern.field(),
            pattern.k(),
            n,
            members.iter().map(|&i| self.points[i as usize].clone()),
        )
    }
}

/// One pass over the universe in the given order, keeping every point that
/// does not create an instance. The result is certified before returning.
pub fn greedy(pattern: &PatternSpec, n: usize, order: Order) -> Result<SearchResult> {
    let uni = Universe::build(pattern, n)?;
    let mut visit: Vec<u32> = (0..uni.size as u32).collect();
    if let Order::SeededRandom(seed) = order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        visit.shuffle(&mut rng);
    }
    let mut in_set = vec![false; uni.size];
    let mut members: Vec<u32> = Vec::new();
    for cand in visit {
        if uni.stays_avoiding(&in_set, &members, cand) {
            in_set[cand as usize] = true;
            members.push(cand);
        }
    }
    let best_set = uni.to_point_set(pattern, n, &members)?;
    certify_internal(pattern, &best_set)?;
    Ok(SearchResult {
        size: best_set.len(),
        best_set,
        optimal: false,
        nodes_explored: uni.size as u64,
    })
}

struct Bnb<'a> {
    uni: &'a Universe,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<u32>,
}

impl Bnb<'_> {
    /// include/exclude branching over points `next..size` in index order,
    /// pruned by the trivial remaining-count bound
    fn explore(&mut self, in_set: &mut Vec<bool>, members: &mut Vec<u32>, next: usize) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if members.len() > self.best.len() {
            self.best = members.clone();
        }
        if next >= self.uni.size {
            return;
        }
        let remaining = self.uni.size - next;
        if members.len() + remaining <= self.best.len() {
            return;
        }
        let cand = next as u32;
        if self.uni.stays_avoiding(in_set, members, cand) {
            in_set[next] = true;
            members.push(cand);
            self.explore(in_set, members, next + 1);
            members.pop();
            in_set[next] = false;
        }
        self.explore(in_set, members, next + 1);
    }
}

/// Exact maximum avoiding set by branch-and-bound. Translation invariance is
/// exploited by forcing the zero point into the set: every nonempty avoiding
/// set translates to one containing zero, so the maximum is unchanged.
/// `optimal` is true iff the search ran to completion within the node budget.
pub fn exact_max(pattern: &PatternSpec, n: usize, budget: u64) -> Result<SearchResult> {
    exact_max_with_root(pattern, n, budget, true)
}

/// As `exact_max`, with the zero-point root fixing made optional so the
/// soundness of the trick can be checked by comparing both variants.
pub fn exact_max_with_root(
    pattern: &PatternSpec,
    n: usize,
    budget: u64,
    fix_zero: bool,
) -> Result<SearchResult> {
    let uni = Universe::build(pattern, n)?;
    // seed the incumbent with the greedy set so pruning bites immediately
    let greedy_result = greedy(pattern, n, Order::Lexicographic)?;
    let mut seed: Vec<u32> = greedy_result
        .best_set
        .members()
        .iter()
        .map(|p| p.flat_index() as u32)
        .collect();
    seed.sort_unstable();
    let mut bnb = Bnb {
        uni: &uni,
        budget,
        nodes: 0,
        exhausted: false,
        best: seed,
    };
    let mut in_set = vec![false; uni.size];
    let mut members: Vec<u32> = Vec::new();
    if fix_zero && uni.size > 0 {
        in_set[0] = true;
        members.push(0);
        bnb.explore(&mut in_set, &mut members, 1);
    } else {
        bnb.explore(&mut in_set, &mut members, 0);
    }
    let best_set = uni.to_point_set(pattern, n, &bnb.best)?;
    certify_internal(pattern, &best_set)?;
    Ok(SearchResult {
        size: best_set.len(),
        best_set,
        optimal: !bnb.exhausted,
        nodes_explored: bnb.nodes,
    })
}

fn certify_internal(pattern: &PatternSpec, set: &PointSet) -> Result<()> {
    if let Some(w) = pattern.find_violation(set)? {
        return Err(Error::NotAvoiding(w.render()));
    }
    Ok(())
}

/// Detector wrapper for externally supplied sets: Ok(None) means avoiding,
/// Ok(Some(witness)) carries the instance found.
pub fn certify(
    pattern: &PatternSpec,
    set: &PointSet,
) -> Result<Option<crate::pattern::Witness>> {
    pattern.find_violation(set)
}
