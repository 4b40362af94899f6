//! Deterministic grids over the probability simplex, and Dirichlet draws.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest grid any sweep will enumerate.
pub const MAX_GRID_POINTS: u128 = 100_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Points of the `k`-simplex whose first `k - 1` masses are multiples of
/// `step`; the last mass completes the sum to one.
///
/// Enumeration is lexicographic in the leading masses, so every sweep visits
/// points in the same order.
#[derive(Debug, Clone, Copy)]
pub struct SimplexGrid {
    k: usize,
    step: f64,
    n: usize,
}

impl SimplexGrid {
    pub fn new(k: usize, step: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("simplex dimension must be positive".into()));
        }
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidParameter(format!("grid step {step} outside (0, 1]")));
        }
        let n = (1.0 / step + 1e-9).floor() as usize;
        let grid = Self { k, step, n };
        let points = grid.count();
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge { points, limit: MAX_GRID_POINTS });
        }
        Ok(grid)
    }

    /// Number of grid points, `C(n + k - 1, k - 1)` with `n = floor(1/step)`.
    pub fn count(&self) -> u128 {
        binomial((self.n + self.k - 1) as u128, (self.k - 1) as u128)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    fn fill(&self, counts: &[usize], out: &mut [f64]) {
        let mut used = 0.0;
        for (o, &c) in out.iter_mut().zip(counts) {
            *o = c as f64 * self.step;
            used += *o;
        }
        out[self.k - 1] = (1.0 - used).max(0.0);
    }

    fn walk(&self, counts: &mut Vec<usize>, remaining: usize, out: &mut [f64], f: &mut dyn FnMut(&[f64])) {
        if counts.len() == self.k - 1 {
            self.fill(counts, out);
            f(out);
            return;
        }
        for c in 0..=remaining {
            counts.push(c);
            self.walk(counts, remaining - c, out, f);
            counts.pop();
        }
    }

    /// Visits every point in enumeration order.
    pub fn visit(&self, mut f: impl FnMut(&[f64])) {
        let mut out = vec![0.0; self.k];
        self.walk(&mut Vec::with_capacity(self.k), self.n, &mut out, &mut f);
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut all = Vec::new();
        self.visit(|p| all.push(p.to_vec()));
        all
    }

    /// Parallel fold over the grid. `merge` must be associative and
    /// order-independent for the result to be reproducible.
    pub fn par_fold<A, I, F, M>(&self, init: I, fold: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &[f64]) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        // Split on up to two leading masses so the work is reasonably balanced.
        let depth = (self.k - 1).min(2);
        let mut prefixes = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(p) = stack.pop() {
            if p.len() == depth {
                prefixes.push(p);
                continue;
            }
            let used: usize = p.iter().sum();
            for c in (0..=self.n - used).rev() {
                let mut q = p.clone();
                q.push(c);
                stack.push(q);
            }
        }
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut acc = init();
                let mut counts = prefix.clone();
                let remaining = self.n - prefix.iter().sum::<usize>();
                let mut out = vec![0.0; self.k];
                self.walk(&mut counts, remaining, &mut out, &mut |p| fold(&mut acc, p));
                acc
            })
            .reduce(&init, &merge)
    }
}

/// A draw from the symmetric Dirichlet(1) distribution on `k` symbols.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}
