#![allow(dead_code)]

use std::cell::{Cell, RefCell};

use seedpop_core::{BenchmarkId, BenchmarkSpec, Objective};

/// Wraps a benchmark and independently counts and inspects every call the
/// engine makes.
pub struct Shadow {
    pub id: BenchmarkId,
    pub calls: Cell<u64>,
    pub out_of_bounds: Cell<u64>,
    pub log: RefCell<Vec<f64>>,
}

impl Shadow {
    pub fn new(id: BenchmarkId) -> Self {
        Shadow {
            id,
            calls: Cell::new(0),
            out_of_bounds: Cell::new(0),
            log: RefCell::new(Vec::new()),
        }
    }
}

impl Objective for Shadow {
    fn spec(&self) -> &BenchmarkSpec {
        self.id.spec()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.calls.set(self.calls.get() + 1);
        if !self.id.spec().contains(x) {
            self.out_of_bounds.set(self.out_of_bounds.get() + 1);
        }
        let v = self.id.value(x);
        self.log.borrow_mut().push(v);
        v
    }
}

/// Sign-change scan on a fine uniform grid, root located by linear
/// interpolation inside each bracket.
pub fn brute_force_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    let mut roots = Vec::new();
    let mut xa = lo;
    let mut ga = g(xa);
    for j in 1..n {
        let xb = lo + j as f64 * h;
        let gb = g(xb);
        if ga == 0.0 {
            roots.push(xa);
        } else if ga * gb < 0.0 {
            roots.push(xa - ga * (xb - xa) / (gb - ga));
        }
        xa = xb;
        ga = gb;
    }
    roots
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
