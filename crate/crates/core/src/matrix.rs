use num_traits::Zero;

use crate::rational::Rational;

/// Row-compressed sparse matrix; each row holds `(column, value)` pairs sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, T)>>,
}

pub type SparseRationalMatrix = SparseMatrix<Rational>;

impl<T> SparseMatrix<T> {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

impl<T: Clone + Zero> SparseMatrix<T> {
    /// Builds from per-row entries, dropping explicit zeros.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        let rows: Vec<Vec<(usize, T)>> = rows
            .into_iter()
            .map(|mut row| {
                row.retain(|(c, v)| {
                    assert!(*c < n_cols, "column {c} out of range");
                    !v.is_zero()
                });
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        SparseMatrix { n_rows: rows.len(), n_cols, rows }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.rows[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .map(|at| self.rows[r][at].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_rows(
            self.n_cols,
            self.rows.iter().map(|row| row.iter().map(|(c, v)| (*c, f(v))).collect()).collect(),
        )
    }

    /// Rows with a relabelled set of indices: `perm[old] = new` for both rows and columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut rows = vec![Vec::new(); self.n_rows];
        for (old, row) in self.rows.iter().enumerate() {
            rows[row_perm[old]] = row.iter().map(|(c, v)| (col_perm[*c], v.clone())).collect();
        }
        SparseMatrix::from_rows(self.n_cols, rows)
    }
}
