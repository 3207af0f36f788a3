//! A small finite-domain constraint solver.
//!
//! Cells are assigned in index order with values ascending, so solutions
//! come out in lexicographic order. A constraint inspects the partial
//! assignment and either decides or names one unassigned cell it waits on;
//! it is re-examined only once that cell is assigned.

use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails,
    Blocked(usize),
}

pub type Constraint<'a> = Box<dyn Fn(&[Option<usize>]) -> Check + Send + Sync + 'a>;

pub struct Csp<'a> {
    pub domain: usize,
    pub fixed: Vec<Option<usize>>,
    pub constraints: Vec<Constraint<'a>>,
}

impl<'a> Csp<'a> {
    pub fn new(cells: usize, domain: usize) -> Self {
        Csp { domain, fixed: vec![None; cells], constraints: Vec::new() }
    }

    pub fn cells(&self) -> usize {
        self.fixed.len()
    }

    pub fn push(&mut self, c: Constraint<'a>) {
        self.constraints.push(c);
    }

    /// Calls `visit` on each solution in order until it returns `false`.
    /// Returns `false` if stopped early.
    pub fn solve(&self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        self.solve_from(&self.fixed, visit)
    }

    fn solve_from(&self, fixed: &[Option<usize>], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let assign = fixed.to_vec();
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); assign.len()];
        for (i, c) in self.constraints.iter().enumerate() {
            match c(&assign) {
                Check::Holds => {}
                Check::Fails => return true,
                Check::Blocked(x) => watch[x].push(i),
            }
        }
        let order: Vec<usize> = (0..assign.len()).filter(|&c| assign[c].is_none()).collect();
        let mut search = Search { csp: self, assign, watch, trail: Vec::new(), order, out: Vec::new() };
        search.run(0, visit)
    }

    /// All solutions, in order; the first free cell is split across threads.
    pub fn solve_all(&self) -> Vec<Vec<usize>> {
        let Some(first) = self.fixed.iter().position(Option::is_none) else {
            let mut out = Vec::new();
            self.solve(&mut |s| {
                out.push(s.to_vec());
                true
            });
            return out;
        };
        (0..self.domain)
            .into_par_iter()
            .map(|v| {
                let mut fixed = self.fixed.clone();
                fixed[first] = Some(v);
                let mut out = Vec::new();
                self.solve_from(&fixed, &mut |s| {
                    out.push(s.to_vec());
                    true
                });
                out
            })
            .flatten()
            .collect()
    }
}

struct Search<'s, 'a> {
    csp: &'s Csp<'a>,
    assign: Vec<Option<usize>>,
    watch: Vec<Vec<usize>>,
    trail: Vec<usize>,
    order: Vec<usize>,
    out: Vec<usize>,
}

impl Search<'_, '_> {
    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if pos == self.order.len() {
            self.out.clear();
            self.out.extend(self.assign.iter().map(|v| v.expect("complete")));
            return visit(&self.out);
        }
        let cell = self.order[pos];
        for value in 0..self.csp.domain {
            self.assign[cell] = Some(value);
            let mark = self.trail.len();
            let mut ok = true;
            let mut k = 0;
            while k < self.watch[cell].len() {
                let ci = self.watch[cell][k];
                k += 1;
                match (self.csp.constraints[ci])(&self.assign) {
                    Check::Holds => {}
                    Check::Fails => {
                        ok = false;
                        break;
                    }
                    Check::Blocked(x) => {
                        debug_assert!(self.assign[x].is_none());
                        self.watch[x].push(ci);
                        self.trail.push(x);
                    }
                }
            }
            let go_on = !ok || self.run(pos + 1, visit);
            while self.trail.len() > mark {
                let x = self.trail.pop().expect("nonempty");
                self.watch[x].pop();
            }
            if !go_on {
                self.assign[cell] = None;
                return false;
            }
        }
        self.assign[cell] = None;
        true
    }
}
