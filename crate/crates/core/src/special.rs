//! Laguerre polynomials and Gauss-Laguerre quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

/// Associated Laguerre polynomial L_n^a(x) by the three-term recurrence in n.
pub fn laguerre(n: u32, a: u32, x: f64) -> f64 {
    let a = a as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dx L_n^a(x) = -L_{n-1}^{a+1}(x).
pub fn laguerre_derivative(n: u32, a: u32, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre(n - 1, a + 1, x)
    }
}

/// Gauss-Laguerre rule for integrals of the form \int_0^inf e^{-x} f(x) dx.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub-Welsch on the Jacobi matrix followed by Newton polishing of each node.
    pub fn new(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let jacobi = DMatrix::from_fn(order, order, |i, j| {
            if i == j {
                2.0 * i as f64 + 1.0
            } else if i + 1 == j || j + 1 == i {
                i.max(j) as f64
            } else {
                0.0
            }
        });
        let eig = jacobi.symmetric_eigen();
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));

        let n = order as u32;
        let weights = nodes
            .iter_mut()
            .map(|x| {
                for _ in 0..3 {
                    let p = laguerre(n, 0, *x);
                    let dp = laguerre_derivative(n, 0, *x);
                    if dp == 0.0 {
                        break;
                    }
                    *x -= p / dp;
                }
                let next = laguerre(n + 1, 0, *x);
                *x / ((order as f64 + 1.0).powi(2) * next * next)
            })
            .collect();
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Cached rule of the given order.
pub fn gauss_laguerre(order: usize) -> Arc<GaussLaguerre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLaguerre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(order).or_insert_with(|| Arc::new(GaussLaguerre::new(order))).clone()
}

/// n! / (n + k)! evaluated as a product, without overflow.
pub fn factorial_ratio(n: u32, k: u32) -> f64 {
    (n + 1..=n + k).fold(1.0, |acc, j| acc / j as f64)
}
