//! Hitting sets over copies given as sorted lists of element ids.

use crate::error::{Error, Result};

/// Greedy hitting set: repeatedly take the element lying in the most unhit
/// copies, breaking ties towards the smallest id.
pub(crate) fn greedy(copies: &[Vec<usize>], elements: usize) -> Vec<usize> {
    let mut hit = vec![false; copies.len()];
    let mut cover = vec![0usize; elements];
    let mut member_of = vec![Vec::new(); elements];
    for (c, copy) in copies.iter().enumerate() {
        for &e in copy {
            cover[e] += 1;
            member_of[e].push(c);
        }
    }
    let mut chosen = Vec::new();
    loop {
        // max_by_key keeps the last maximum, so scan in reverse to get the smallest id
        let best = (0..elements).rev().max_by_key(|&e| cover[e]);
        match best {
            Some(e) if cover[e] > 0 => {
                chosen.push(e);
                for &c in &member_of[e] {
                    if !hit[c] {
                        hit[c] = true;
                        for &x in &copies[c] {
                            cover[x] -= 1;
                        }
                    }
                }
            }
            _ => break,
        }
    }
    chosen.sort_unstable();
    chosen
}

struct Search<'a> {
    copies: &'a [Vec<usize>],
    member_of: Vec<Vec<usize>>,
    hits: Vec<u32>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn available(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.copies[c].iter().copied().filter(|&e| !self.excluded[e])
    }

    /// Size of a maximal family of unhit copies with pairwise disjoint
    /// available elements, packed smallest-first.
    fn packing_bound(&self, unhit: &[(usize, usize)]) -> usize {
        let mut used = vec![false; self.excluded.len()];
        let mut count = 0;
        for &(_, c) in unhit {
            if self.available(c).all(|e| !used[e]) {
                count += 1;
                for e in self.available(c).collect::<Vec<_>>() {
                    used[e] = true;
                }
            }
        }
        count
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget, nodes: self.nodes });
        }
        let mut unhit: Vec<(usize, usize)> =
            (0..self.copies.len()).filter(|&c| self.hits[c] == 0).map(|c| (self.available(c).count(), c)).collect();
        if unhit.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return Ok(());
        }
        unhit.sort_unstable();
        let (avail, branch) = unhit[0];
        if avail == 0 || self.chosen.len() + self.packing_bound(&unhit) >= self.best.len() {
            return Ok(());
        }
        let options: Vec<usize> = self.available(branch).collect();
        for &e in &options {
            self.chosen.push(e);
            for &c in &self.member_of[e] {
                self.hits[c] += 1;
            }
            let r = self.run();
            for &c in &self.member_of[e] {
                self.hits[c] -= 1;
            }
            self.chosen.pop();
            r?;
            self.excluded[e] = true;
        }
        for &e in &options {
            self.excluded[e] = false;
        }
        Ok(())
    }
}

/// Minimum-cardinality hitting set by branch and bound. Branches on the
/// unhit copy with the fewest available elements; bounds with a disjoint
/// packing of unhit copies. Among optima, the first found is kept, starting
/// from the greedy solution.
pub(crate) fn minimum(copies: &[Vec<usize>], elements: usize, budget: u64) -> Result<(Vec<usize>, u64)> {
    let mut member_of = vec![Vec::new(); elements];
    for (c, copy) in copies.iter().enumerate() {
        for &e in copy {
            member_of[e].push(c);
        }
    }
    let upper = greedy(copies, elements);
    let mut s = Search {
        copies,
        member_of,
        hits: vec![0; copies.len()],
        excluded: vec![false; elements],
        chosen: Vec::new(),
        best: upper,
        nodes: 0,
        budget,
    };
    s.run()?;
    let mut best = s.best;
    best.sort_unstable();
    Ok((best, s.nodes))
}
