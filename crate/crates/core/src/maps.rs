//! Backtracking enumeration of maps `0..domain → 0..codomain` subject to
//! additive and equational constraints.
//!
//! Variables are assigned in index order. A constraint is checked as soon as
//! its last variable receives a value, and when that last variable is the
//! output of the constraint its value is forced instead of branched over.
//! This is what keeps homomorphism counts cheap: only a generating set of
//! the domain is ever branched.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy)]
enum Constraint {
    /// `f(z) = f(x) + f(y)`
    Sum { x: usize, y: usize, z: usize },
    /// `f(target) = table[f(source)]`
    Image { target: usize, source: usize, table: usize },
}

#[derive(Debug, Clone)]
pub struct MapSearch {
    domain: usize,
    codomain: usize,
    codomain_add: Vec<usize>,
    fixed: Vec<Option<usize>>,
    infeasible: bool,
    by_last: Vec<Vec<Constraint>>,
    tables: Vec<Vec<usize>>,
}

impl MapSearch {
    /// `codomain_add` is the codomain's addition table (row-major).
    pub fn new(domain: usize, codomain: usize, codomain_add: Vec<usize>) -> Self {
        debug_assert_eq!(codomain_add.len(), codomain * codomain);
        MapSearch {
            domain,
            codomain,
            codomain_add,
            fixed: vec![None; domain],
            infeasible: codomain == 0 && domain > 0,
            by_last: vec![Vec::new(); domain],
            tables: Vec::new(),
        }
    }

    pub fn fix(&mut self, x: usize, value: usize) -> &mut Self {
        match self.fixed[x] {
            Some(v) if v != value => self.infeasible = true,
            _ => self.fixed[x] = Some(value),
        }
        if value >= self.codomain {
            self.infeasible = true;
        }
        self
    }

    /// Requires `f(z) = f(x) + f(y)`.
    pub fn sum(&mut self, x: usize, y: usize, z: usize) -> &mut Self {
        let last = x.max(y).max(z);
        self.by_last[last].push(Constraint::Sum { x, y, z });
        self
    }

    /// Registers a codomain endomorphism table for use with [`MapSearch::image`].
    pub fn table(&mut self, table: Vec<usize>) -> usize {
        debug_assert_eq!(table.len(), self.codomain);
        if let Some(i) = self.tables.iter().position(|t| *t == table) {
            return i;
        }
        self.tables.push(table);
        self.tables.len() - 1
    }

    /// Requires `f(target) = tables[table][f(source)]`.
    pub fn image(&mut self, target: usize, source: usize, table: usize) -> &mut Self {
        let last = target.max(source);
        self.by_last[last].push(Constraint::Image { target, source, table });
        self
    }

    /// Requires `f(x) = f(y)`.
    pub fn equal(&mut self, x: usize, y: usize) -> &mut Self {
        let id = self.table((0..self.codomain).collect());
        self.image(x, y, id)
    }

    fn forced(&self, var: usize, assign: &[usize]) -> Option<usize> {
        if let Some(v) = self.fixed[var] {
            return Some(v);
        }
        for c in &self.by_last[var] {
            match *c {
                Constraint::Sum { x, y, z } if z == var && x != var && y != var => {
                    return Some(self.codomain_add[assign[x] * self.codomain + assign[y]]);
                }
                Constraint::Image { target, source, table } if target == var && source != var => {
                    return Some(self.tables[table][assign[source]]);
                }
                _ => {}
            }
        }
        None
    }

    fn consistent(&self, var: usize, assign: &[usize]) -> bool {
        self.by_last[var].iter().all(|c| match *c {
            Constraint::Sum { x, y, z } => {
                assign[z] == self.codomain_add[assign[x] * self.codomain + assign[y]]
            }
            Constraint::Image { target, source, table } => {
                assign[target] == self.tables[table][assign[source]]
            }
        })
    }

    /// Visits every satisfying map in lexicographic order. Returns the number
    /// of search nodes used.
    pub fn run<F>(&self, budget: u64, mut visit: F) -> Result<u64>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.infeasible {
            return Ok(0);
        }
        let mut assign = vec![0usize; self.domain];
        let mut nodes = 0u64;
        let mut stop = false;
        self.descend(0, &mut assign, &mut nodes, budget, &mut stop, &mut visit)?;
        Ok(nodes)
    }

    fn descend<F>(
        &self,
        var: usize,
        assign: &mut [usize],
        nodes: &mut u64,
        budget: u64,
        stop: &mut bool,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if var == self.domain {
            if visit(assign).is_break() {
                *stop = true;
            }
            return Ok(());
        }
        let candidates = match self.forced(var, assign) {
            Some(v) => v..v + 1,
            None => 0..self.codomain,
        };
        for v in candidates {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::resource("map search nodes", *nodes as u128, budget as u128));
            }
            assign[var] = v;
            if self.consistent(var, assign) {
                self.descend(var + 1, assign, nodes, budget, stop, visit)?;
                if *stop {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    pub fn count(&self, budget: u64) -> Result<u64> {
        let mut n = 0;
        self.run(budget, |_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }

    pub fn collect(&self, budget: u64) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.run(budget, |m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// Additive monoid maps between two finite monoids given by addition tables.
pub fn additive_maps(src_size: usize, src_add: &[usize], tgt_size: usize, tgt_add: &[usize]) -> MapSearch {
    let mut search = MapSearch::new(src_size, tgt_size, tgt_add.to_vec());
    if src_size > 0 {
        search.fix(0, 0);
    }
    for x in 0..src_size {
        for y in x..src_size {
            search.sum(x, y, src_add[x * src_size + y]);
        }
    }
    search
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Vec<usize> {
        (0..n * n).map(|i| (i / n + i % n) % n).collect()
    }

    #[test]
    fn hom_counts_between_cyclic_groups() {
        // |Hom(Z_m, Z_n)| = gcd(m, n)
        for m in 1..9 {
            for n in 1..9 {
                let g = num_integer::gcd(m, n) as u64;
                let count = additive_maps(m, &cyclic(m), n, &cyclic(n))
                    .count(DEFAULT_NODE_BUDGET)
                    .unwrap();
                assert_eq!(count, g, "Hom(Z{m}, Z{n})");
            }
        }
    }

    #[test]
    fn conflicting_fix_is_empty() {
        let mut s = additive_maps(2, &cyclic(2), 2, &cyclic(2));
        s.fix(0, 1);
        assert_eq!(s.count(100).unwrap(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let s = MapSearch::new(12, 4, cyclic(4));
        assert!(matches!(s.count(1000), Err(Error::Resource { .. })));
    }
}
