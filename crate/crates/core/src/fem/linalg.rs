use crate::error::{Error, Result};
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Par, Side};

/// Sparse symmetric positive definite system assembled from triplets;
/// duplicate entries are summed.
pub(crate) struct SpdMatrix {
    pub n: usize,
    pub entries: Vec<Triplet<usize, usize, f64>>,
}

impl SpdMatrix {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.entries.push(Triplet::new(i, j, v));
    }

    /// Solves for each right-hand side with one Cholesky factorization.
    pub fn solve(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        faer::set_global_parallelism(Par::Seq);
        if self.n == 0 {
            return Ok(rhs.iter().map(|_| Vec::new()).collect());
        }
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(self.n, self.n, &self.entries)
            .map_err(|e| Error::SingularSystem(format!("matrix assembly failed: {e:?}")))?;
        let llt = a
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::SingularSystem(format!("Cholesky factorization failed: {e:?}")))?;
        let mut b = Mat::<f64>::from_fn(self.n, rhs.len(), |i, j| rhs[j][i]);
        llt.solve_in_place(b.as_mut());
        let out: Vec<Vec<f64>> = (0..rhs.len()).map(|j| (0..self.n).map(|i| b[(i, j)]).collect()).collect();
        if out.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem("non-finite solution".into()));
        }
        Ok(out)
    }

    pub fn nnz(&self) -> usize {
        let mut k: Vec<(usize, usize)> = self.entries.iter().map(|t| (t.row, t.col)).collect();
        k.sort_unstable();
        k.dedup();
        k.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let mut m = SpdMatrix::new(2);
        m.add(0, 0, 1.0);
        m.add(0, 0, 1.0);
        m.add(1, 1, 4.0);
        m.add(0, 1, 1.0);
        m.add(1, 0, 1.0);
        let x = m.solve(&[vec![3.0, 5.0]]).unwrap();
        assert!((x[0][0] - 1.0).abs() < 1e-14 && (x[0][1] - 1.0).abs() < 1e-14);
        assert_eq!(m.nnz(), 4);
    }

    #[test]
    fn indefinite_matrix_is_reported() {
        let mut m = SpdMatrix::new(2);
        m.add(0, 0, 1.0);
        m.add(1, 1, 0.0);
        assert!(matches!(m.solve(&[vec![1.0, 1.0]]), Err(Error::SingularSystem(_))));
    }
}
