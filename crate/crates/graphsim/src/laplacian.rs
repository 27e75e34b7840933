//! Graph Laplacian, its pseudoinverse, and effective resistance.
//!
//! The Laplacian of a graph with incidence matrix Psi (one row per
//! edge, +1 at the low endpoint, -1 at the high one) is L = Psi' Psi.
//! Its pseudoinverse gives the effective resistance between vertex
//! pairs, r(i,j) = (e_i - e_j)' L+ (e_i - e_j), which is a metric and
//! for an edge of a connected graph lies in (0, 1].

use nalgebra::{DMatrix, DVector};

use crate::graph::{Graph, Labeling};
use crate::{Error, Result};

/// Ratio to the top eigenvalue below which an eigenvalue counts as zero.
const NULL_SPACE_RTOL: f64 = 1e-10;

/// Edge-vertex incidence matrix, m rows by n columns. Row `e` carries
/// +1 at the low endpoint of edge `e` and -1 at the high one.
pub fn incidence(g: &Graph) -> DMatrix<f64> {
    let mut psi = DMatrix::zeros(g.m(), g.n());
    for (row, &(u, v)) in g.edges().iter().enumerate() {
        psi[(row, u - 1)] = 1.0;
        psi[(row, v - 1)] = -1.0;
    }
    psi
}

/// Combinatorial Laplacian, degree matrix minus adjacency.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for &(u, v) in g.edges() {
        l[(u - 1, u - 1)] += 1.0;
        l[(v - 1, v - 1)] += 1.0;
        l[(u - 1, v - 1)] -= 1.0;
        l[(v - 1, u - 1)] -= 1.0;
    }
    l
}

/// Dense Laplacian pseudoinverse with resistance lookups.
#[derive(Debug, Clone)]
pub struct LaplacianPseudoinverse {
    n: usize,
    pinv: DMatrix<f64>,
}

impl LaplacianPseudoinverse {
    /// Eigendecomposes the Laplacian and inverts it away from the null
    /// space. A connected graph must show exactly one eigenvalue below
    /// `NULL_SPACE_RTOL` times the largest; anything else means the
    /// decomposition is not trustworthy.
    pub fn compute(g: &Graph) -> Result<LaplacianPseudoinverse> {
        let l = laplacian(g);
        let eig = l.symmetric_eigen();
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        if lambda_max <= 0.0 {
            return Err(Error::Eigen("Laplacian has no positive eigenvalue".into()));
        }
        let tol = NULL_SPACE_RTOL * lambda_max;
        let zeros = eig.eigenvalues.iter().filter(|&&v| v < tol).count();
        if zeros != 1 {
            return Err(Error::Eigen(format!(
                "expected one null direction, found {zeros}"
            )));
        }
        let mut pinv = DMatrix::zeros(g.n(), g.n());
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda >= tol {
                let q = eig.eigenvectors.column(idx);
                pinv += q * q.transpose() / lambda;
            }
        }
        Ok(LaplacianPseudoinverse { n: g.n(), pinv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    /// Entry (i, j) of the pseudoinverse, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.pinv[(i - 1, j - 1)]
    }

    /// The vector L+ (e_i - e_j), a difference of two columns.
    pub fn pair_vector(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_fn(self.n, |r, _| {
            self.pinv[(r, i - 1)] - self.pinv[(r, j - 1)]
        })
    }

    /// Effective resistance between `i` and `j`; zero when `i == j`.
    pub fn resistance(&self, i: usize, j: usize) -> f64 {
        self.entry(i, i) + self.entry(j, j) - 2.0 * self.entry(i, j)
    }

    /// Largest effective resistance over all vertex pairs.
    pub fn max_resistance(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                best = best.max(self.resistance(i, j));
            }
        }
        best
    }
}

/// Sum of effective resistances over cut edges. Never exceeds the cut
/// size, since each edge resistance is at most 1.
pub fn resistance_weighted_cut_size(
    g: &Graph,
    lp: &LaplacianPseudoinverse,
    lab: &Labeling,
) -> f64 {
    g.edges()
        .iter()
        .filter(|&&(u, v)| lab.label(u) != lab.label(v))
        .map(|&(u, v)| lp.resistance(u, v))
        .sum()
}
