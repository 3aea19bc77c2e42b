use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Left translates `t·T` partitioning a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSolution {
    pub translates: Vec<u32>,
}

impl CoverSolution {
    /// Whether the translates of `tile` partition the group exactly.
    pub fn is_exact(&self, group: &FiniteGroupTable, tile: &[u32]) -> bool {
        let mut hits = vec![0usize; group.order()];
        for &t in &self.translates {
            for &s in tile {
                hits[group.mul(t, s) as usize] += 1;
            }
        }
        hits.iter().all(|&h| h == 1)
    }
}

struct Search<'a> {
    order: usize,
    translates: Vec<Vec<u32>>,
    /// For each element x, the t with x ∈ t·T, ascending.
    covering: Vec<Vec<u32>>,
    covered: Vec<bool>,
    allowed: Vec<bool>,
    nodes: u64,
    budget: u64,
    chosen: Vec<u32>,
    _group: &'a FiniteGroupTable,
}

impl<'a> Search<'a> {
    fn new(group: &'a FiniteGroupTable, tile: &[u32], budget: u64) -> Self {
        let order = group.order();
        let translates: Vec<Vec<u32>> = (0..order as u32)
            .map(|t| tile.iter().map(|&s| group.mul(t, s)).collect())
            .collect();
        let mut covering = vec![Vec::new(); order];
        for (t, cells) in translates.iter().enumerate() {
            for &x in cells {
                covering[x as usize].push(t as u32);
            }
        }
        for c in &mut covering {
            c.sort_unstable();
        }
        Search {
            order,
            translates,
            covering,
            covered: vec![false; order],
            allowed: vec![true; order],
            nodes: 0,
            budget,
            chosen: Vec::new(),
            _group: group,
        }
    }

    fn fits(&self, t: u32) -> bool {
        self.allowed[t as usize] && self.translates[t as usize].iter().all(|&x| !self.covered[x as usize])
    }

    fn place(&mut self, t: u32, on: bool) {
        for &x in &self.translates[t as usize] {
            self.covered[x as usize] = on;
        }
        if on {
            self.chosen.push(t);
        } else {
            self.chosen.pop();
        }
    }

    /// Depth-first search branching on the uncovered element with the fewest
    /// fitting translates.
    fn feasible(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::NodeBudget(self.budget));
        }
        let mut pick: Option<(usize, Vec<u32>)> = None;
        for x in 0..self.order {
            if self.covered[x] {
                continue;
            }
            let options: Vec<u32> = self.covering[x].iter().copied().filter(|&t| self.fits(t)).collect();
            if options.is_empty() {
                return Ok(false);
            }
            if pick.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                pick = Some((x, options));
            }
        }
        let Some((_, options)) = pick else {
            return Ok(true);
        };
        for t in options {
            self.place(t, true);
            if self.feasible()? {
                self.place(t, false);
                return Ok(true);
            }
            self.place(t, false);
        }
        Ok(false)
    }
}

/// Exact cover of the group by left translates of `tile`. Among all
/// solutions the lexicographically least translate set is returned.
pub fn exact_cover_search(group: &FiniteGroupTable, tile: &[u32]) -> Result<Option<CoverSolution>> {
    exact_cover_search_with_budget(group, tile, DEFAULT_NODE_BUDGET)
}

pub fn exact_cover_search_with_budget(
    group: &FiniteGroupTable,
    tile: &[u32],
    budget: u64,
) -> Result<Option<CoverSolution>> {
    let tile = normalize_tile(group, tile)?;
    let order = group.order();
    if !order.is_multiple_of(tile.len()) {
        return Ok(None);
    }
    let mut search = Search::new(group, &tile, budget);
    if !search.feasible()? {
        return Ok(None);
    }
    // fix translates in ascending order, each one kept only if the rest can
    // still be completed
    for t in 0..order as u32 {
        if !search.fits(t) {
            search.allowed[t as usize] = false;
            continue;
        }
        search.place(t, true);
        if search.feasible()? {
            continue;
        }
        search.place(t, false);
        search.allowed[t as usize] = false;
    }
    let mut translates = search.chosen.clone();
    translates.sort_unstable();
    if search.covered.iter().any(|&c| !c) {
        return Err(Error::ConsistencyViolation("exact cover fixing left cells uncovered".into()));
    }
    Ok(Some(CoverSolution { translates }))
}

fn normalize_tile(group: &FiniteGroupTable, tile: &[u32]) -> Result<Vec<u32>> {
    if tile.is_empty() {
        return Err(Error::MalformedInput("tile must be nonempty".into()));
    }
    let mut t = tile.to_vec();
    t.sort_unstable();
    if t.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::MalformedInput("tile elements must be distinct".into()));
    }
    if let Some(&x) = t.iter().find(|&&x| x as usize >= group.order()) {
        return Err(Error::MalformedInput(format!("element {x} is outside a group of order {}", group.order())));
    }
    Ok(t)
}

/// Smallest tile containing `f`, ties broken lexicographically.
pub fn monotile_extend_finite(group: &FiniteGroupTable, f: &[u32]) -> Result<Vec<u32>> {
    monotile_extend_finite_with_budget(group, f, DEFAULT_NODE_BUDGET)
}

pub fn monotile_extend_finite_with_budget(group: &FiniteGroupTable, f: &[u32], budget: u64) -> Result<Vec<u32>> {
    let base = normalize_tile(group, f)?;
    let order = group.order();
    let rest: Vec<u32> = (0..order as u32).filter(|x| base.binary_search(x).is_err()).collect();
    let mut spent = 0u64;
    for size in base.len()..=order {
        if !order.is_multiple_of(size) {
            continue;
        }
        let mut best: Option<Vec<u32>> = None;
        let mut pick = Vec::new();
        for_each_combination(&rest, size - base.len(), &mut pick, 0, &mut |extra| {
            let mut tile: Vec<u32> = base.iter().chain(extra).copied().collect();
            tile.sort_unstable();
            if best.as_ref().is_some_and(|b| *b <= tile) {
                return Ok(());
            }
            let left = budget.checked_sub(spent).filter(|&b| b > 0).ok_or(Error::NodeBudget(budget))?;
            let mut search = Search::new(group, &tile, left);
            let found = search.feasible();
            spent += search.nodes;
            if found? {
                best = Some(tile);
            }
            Ok(())
        })?;
        if let Some(tile) = best {
            return Ok(tile);
        }
    }
    Err(Error::ConsistencyViolation("the whole group failed to tile itself".into()))
}

fn for_each_combination(
    pool: &[u32],
    k: usize,
    pick: &mut Vec<u32>,
    from: usize,
    visit: &mut dyn FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if pick.len() == k {
        return visit(pick);
    }
    for i in from..pool.len() {
        if pool.len() - i < k - pick.len() {
            break;
        }
        pick.push(pool[i]);
        for_each_combination(pool, k, pick, i + 1, visit)?;
        pick.pop();
    }
    Ok(())
}
