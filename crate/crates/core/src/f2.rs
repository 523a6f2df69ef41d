//! Dense bit-packed linear algebra over F2.
//!
//! Everything here is desk scale (dimensions in the tens), so rows are plain
//! `Vec<u64>` bitsets and elimination is quadratic without apology.

/// Row-major matrix over F2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        F2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<usize>]) -> Self {
        let mut m = F2Matrix::zero(rows.len(), cols);
        for (i, support) in rows.iter().enumerate() {
            for &j in support {
                m.set(i, j, true);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            let v = self.data[a + k];
            self.data[b + k] ^= v;
        }
    }

    pub fn push_row(&mut self, support: &[usize]) {
        self.data.extend(std::iter::repeat_n(0u64, self.words));
        self.rows += 1;
        for &j in support {
            self.set(self.rows - 1, j, true);
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    /// self * other, shapes (r×c)·(c×k).
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = F2Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    let (a, b) = (j * other.words, i * out.words);
                    for k in 0..other.words {
                        out.data[b + k] ^= other.data[a + k];
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product over F2; `v` as a bitset of length cols.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.rows.div_ceil(64).max(1)];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for k in 0..self.words {
                acc ^= self.row(i)[k] & v[k];
            }
            if acc.count_ones() % 2 == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().0
    }

    /// In-place Gaussian elimination; returns (rank, pivot columns).
    pub fn row_reduce(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            if let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) {
                self.data.swap_chunks(r, p, self.words);
                for i in 0..self.rows {
                    if i != r && self.get(i, c) {
                        self.xor_row_into(r, i);
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        (r, pivots)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for k in 0..width {
            self.swap(a * width + k, b * width + k);
        }
    }
}

/// Subspace of F2^n given by a row basis in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: usize,
    basis: F2Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(ambient: usize, vectors: &[Vec<usize>]) -> Self {
        let mut m = F2Matrix::from_rows(ambient, vectors);
        let (rank, pivots) = m.row_reduce();
        let mut basis = F2Matrix::zero(rank, ambient);
        for i in 0..rank {
            for k in 0..m.words {
                basis.data[i * basis.words + k] = m.data[i * m.words + k];
            }
        }
        Subspace { ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_rows(&self) -> Vec<Vec<usize>> {
        (0..self.basis.rows).map(|i| self.basis.row_support(i)).collect()
    }

    pub fn contains(&self, v: &[usize]) -> bool {
        let mut vec = vec![0u64; self.basis.words];
        for &j in v {
            vec[j / 64] ^= 1 << (j % 64);
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            if vec[p / 64] >> (p % 64) & 1 == 1 {
                for k in 0..self.basis.words {
                    vec[k] ^= self.basis.row(i)[k];
                }
            }
        }
        vec.iter().all(|&w| w == 0)
    }

    /// Sum of two subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::from_spanning(self.ambient, &rows)
    }

    /// Intersection via the Zassenhaus block trick.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let n = self.ambient;
        // rows [u | u] for u in self, [v | 0] for v in other; reduce; rows with
        // zero left half carry the intersection in the right half.
        let mut m = F2Matrix::zero(self.dim() + other.dim(), 2 * n);
        for (i, u) in self.basis_rows().iter().enumerate() {
            for &j in u {
                m.set(i, j, true);
                m.set(i, n + j, true);
            }
        }
        for (i, v) in other.basis_rows().iter().enumerate() {
            for &j in v {
                m.set(self.dim() + i, j, true);
            }
        }
        m.row_reduce();
        let mut inter = Vec::new();
        for i in 0..m.rows {
            let left_zero = (0..n).all(|j| !m.get(i, j));
            if left_zero {
                let right: Vec<usize> = (0..n).filter(|&j| m.get(i, n + j)).collect();
                if !right.is_empty() {
                    inter.push(right);
                }
            }
        }
        Subspace::from_spanning(n, &inter)
    }
}

/// Solve `A x = b` over F2 where columns of `A` are given as supports.
/// Returns one solution as a set of column indices, or None.
pub fn solve_columns(ambient: usize, columns: &[Vec<usize>], b: &[usize]) -> Option<Vec<usize>> {
    let ncols = columns.len();
    // augmented system, rows = ambient, tracked by elimination on columns^T
    let mut m = F2Matrix::zero(ambient, ncols + 1);
    for (j, col) in columns.iter().enumerate() {
        for &i in col {
            m.set(i, j, true);
        }
    }
    for &i in b {
        m.set(i, ncols, true);
    }
    let (_, pivots) = m.row_reduce();
    if pivots.contains(&ncols) {
        return None; // inconsistent
    }
    let mut x = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        if m.get(r, ncols) {
            x.push(p);
        }
    }
    Some(x)
}
