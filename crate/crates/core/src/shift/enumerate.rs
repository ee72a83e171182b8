use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{is_periodic_word, OrbitClass, PeriodicOrbit, ShiftContext};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::semigroup::{Accumulator, Symbol};

const FLUSH: u64 = 1 << 12;

/// Node budget shared by the workers of one search.
struct Budget {
    limit: u64,
    used: AtomicU64,
    exhausted: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Charges `n` nodes; `false` once the budget is gone.
    fn charge(&self, n: u64) -> bool {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.limit {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }
}

struct Meter<'b> {
    budget: &'b Budget,
    pending: u64,
}

impl Meter<'_> {
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH {
            let n = std::mem::take(&mut self.pending);
            return self.budget.charge(n);
        }
        true
    }

    fn finish(&mut self) -> bool {
        let n = std::mem::take(&mut self.pending);
        self.budget.charge(n)
    }
}

fn all_symbols(g: &DirectedGraph) -> Vec<Symbol> {
    g.edge_ids()
        .map(Symbol::Minus)
        .chain(g.edge_ids().map(Symbol::Plus))
        .collect()
}

/// Symbols that may follow the current product without making it zero.
fn successors(g: &DirectedGraph, acc: &Accumulator<'_>, out: &mut Vec<Symbol>) {
    out.clear();
    let v = acc.right_vertex().expect("nonempty prefix");
    out.extend(g.out_edges(v).iter().map(|&e| Symbol::Minus(e)));
    match acc.open_edge() {
        Some(e) => out.push(Symbol::Plus(e)),
        None => out.extend(g.in_edges(v).iter().map(|&e| Symbol::Plus(e))),
    }
}

/// Exact number of admissible words of each length `0..=n`.
pub fn count_admissible(g: &DirectedGraph, n: usize, config: &SearchConfig) -> Result<Vec<u64>> {
    let budget = Budget::new(config.budget);
    let firsts = all_symbols(g);
    let partial: Vec<Option<Vec<u64>>> = config.install(|| {
        firsts
            .par_iter()
            .map(|&s| {
                let mut counts = vec![0u64; n + 1];
                if n == 0 {
                    return Some(counts);
                }
                let mut acc = Accumulator::new(g);
                acc.push(s);
                let mut meter = Meter {
                    budget: &budget,
                    pending: 0,
                };
                let ok = count_from(g, &mut acc, 1, n, &mut counts, &mut meter) && meter.finish();
                ok.then_some(counts)
            })
            .collect()
    });
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    for part in partial {
        let part = part.ok_or(Error::BudgetExceeded(config.budget))?;
        for (c, p) in counts.iter_mut().zip(part).skip(1) {
            *c += p;
        }
    }
    Ok(counts)
}

fn count_from(
    g: &DirectedGraph,
    acc: &mut Accumulator<'_>,
    depth: usize,
    n: usize,
    counts: &mut [u64],
    meter: &mut Meter<'_>,
) -> bool {
    counts[depth] += 1;
    if !meter.tick() {
        return false;
    }
    if depth == n {
        return true;
    }
    let mut next = Vec::new();
    successors(g, acc, &mut next);
    for s in next {
        let undo = acc.push(s).expect("successor keeps the product nonzero");
        let ok = count_from(g, acc, depth + 1, n, counts, meter);
        acc.undo(undo);
        if !ok {
            return false;
        }
    }
    true
}

/// All periodic orbits of period exactly `k`, classified, sorted by word.
pub fn enumerate_orbits(g: &DirectedGraph, k: usize) -> Result<Vec<(PeriodicOrbit, OrbitClass)>> {
    let ctx = ShiftContext::new(g)?;
    enumerate_orbits_with(&ctx, k, &SearchConfig::default())
}

/// Depth-first search over admissible words of length `k` that generates only
/// Lyndon words (primitive least rotations), pruning on the first zero prefix.
pub fn enumerate_orbits_with(
    ctx: &ShiftContext,
    k: usize,
    config: &SearchConfig,
) -> Result<Vec<(PeriodicOrbit, OrbitClass)>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let g = &ctx.graph;
    let budget = Budget::new(config.budget);
    let firsts = all_symbols(g);
    let partial: Vec<Result<Vec<(PeriodicOrbit, OrbitClass)>>> = config.install(|| {
        firsts
            .par_iter()
            .map(|&s| {
                let mut search = Search {
                    ctx,
                    k,
                    acc: Accumulator::new(g),
                    word: Vec::with_capacity(k),
                    out: Vec::new(),
                    meter: Meter {
                        budget: &budget,
                        pending: 0,
                    },
                    error: None,
                };
                search.acc.push(s);
                search.word.push(s);
                let ok = search.run(1) && search.meter.finish();
                match search.error {
                    Some(e) => Err(e),
                    None if !ok => Err(Error::BudgetExceeded(config.budget)),
                    None => Ok(search.out),
                }
            })
            .collect()
    });
    let mut all = Vec::new();
    for part in partial {
        all.extend(part?);
    }
    all.sort();
    Ok(all)
}

struct Search<'a, 'b> {
    ctx: &'a ShiftContext,
    k: usize,
    acc: Accumulator<'a>,
    word: Vec<Symbol>,
    out: Vec<(PeriodicOrbit, OrbitClass)>,
    meter: Meter<'b>,
    error: Option<Error>,
}

impl Search<'_, '_> {
    /// `p` is the period of the current prenecklace `word`.
    fn run(&mut self, p: usize) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let t = self.word.len();
        if t == self.k {
            if p == self.k && is_periodic_word(&self.ctx.graph, &self.word) {
                match self.ctx.classify(&self.word) {
                    Ok(class) => self.out.push((
                        PeriodicOrbit {
                            word: self.word.clone(),
                            period: self.k,
                        },
                        class,
                    )),
                    Err(e) => {
                        self.error = Some(e);
                        return false;
                    }
                }
            }
            return true;
        }
        let floor = self.word[t - p];
        let mut next = Vec::new();
        successors(&self.ctx.graph, &self.acc, &mut next);
        for s in next {
            if s < floor {
                continue;
            }
            let np = if s == floor { p } else { t + 1 };
            let undo = self.acc.push(s).expect("successor keeps the product nonzero");
            self.word.push(s);
            let ok = self.run(np);
            self.word.pop();
            self.acc.undo(undo);
            if !ok {
                return false;
            }
        }
        true
    }
}
