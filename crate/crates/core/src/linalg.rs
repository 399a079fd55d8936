//! Exact elimination: nullspaces, affine solves and span membership.

use crate::scalar::Scalar;

/// A reduced row echelon form grown one row at a time.
///
/// Every stored row has a leading `1` in its pivot column and zeros in
/// every other pivot column.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    width: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        RowEchelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduces `row` against the stored rows and keeps it if anything is
    /// left. Returns the pivot column of the new row, if it was independent.
    pub fn insert(&mut self, mut row: Vec<Scalar>) -> Option<usize> {
        assert_eq!(row.len(), self.width, "row width");
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let pivot = row.iter().position(|v| !v.is_zero())?;
        let inv = row[pivot].recip().expect("nonzero");
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for r in self.rows.iter_mut() {
            if r[pivot].is_zero() {
                continue;
            }
            let f = r[pivot].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.rows.insert(at, row);
        self.pivots.insert(at, pivot);
        Some(pivot)
    }

    /// Basis of `{ v : row · v = 0 for every stored row }`, one vector per
    /// free column, ordered by free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        (0..self.width)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.width];
                v[free] = Scalar::one();
                for (r, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&r[free];
                }
                v
            })
            .collect()
    }
}

/// Basis of the solution space of the homogeneous system `rows · v = 0` in
/// `unknowns` variables. Empty when only the zero solution exists.
pub fn nullspace(rows: &[Vec<Scalar>], unknowns: usize) -> Vec<Vec<Scalar>> {
    let mut ech = RowEchelon::new(unknowns);
    for r in rows {
        if r.iter().any(|v| !v.is_zero()) {
            ech.insert(r.clone());
        }
    }
    ech.nullspace()
}

pub fn rank(rows: &[Vec<Scalar>], width: usize) -> usize {
    let mut ech = RowEchelon::new(width);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

/// The solution set `particular + span(null_basis)` of an affine system.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub null_basis: Vec<Vec<Scalar>>,
    pub rank: usize,
    /// The reduced equations, each `(coefficients, rhs)` with a leading 1.
    pub reduced: Vec<(Vec<Scalar>, Scalar)>,
}

/// Solves `A x = b` given as `(row, rhs)` pairs; `None` when inconsistent.
pub fn solve_affine(
    equations: impl IntoIterator<Item = (Vec<Scalar>, Scalar)>,
    unknowns: usize,
) -> Option<AffineSolution> {
    let mut ech = RowEchelon::new(unknowns + 1);
    for (mut row, rhs) in equations {
        assert_eq!(row.len(), unknowns);
        if row.iter().all(Scalar::is_zero) && rhs.is_zero() {
            continue;
        }
        row.push(rhs);
        if ech.insert(row) == Some(unknowns) {
            return None;
        }
    }
    let mut particular = vec![Scalar::zero(); unknowns];
    for (r, &p) in ech.rows.iter().zip(&ech.pivots) {
        particular[p] = r[unknowns].clone();
    }
    let null_basis = ech
        .nullspace()
        .into_iter()
        .filter(|v| v[unknowns].is_zero() && v.iter().any(|x| !x.is_zero()))
        .map(|mut v| {
            v.pop();
            v
        })
        .collect();
    let reduced = ech
        .rows
        .iter()
        .map(|r| (r[..unknowns].to_vec(), r[unknowns].clone()))
        .collect();
    Some(AffineSolution {
        particular,
        null_basis,
        rank: ech.rank(),
        reduced,
    })
}

/// Coefficients `c` with `v = Σ c_k basis[k]`, or `None` when `v` is not in
/// the span. The basis need not be independent; free coefficients are 0.
pub fn in_span(v: &[Scalar], basis: &[Vec<Scalar>]) -> Option<Vec<Scalar>> {
    let k = basis.len();
    for b in basis {
        assert_eq!(b.len(), v.len(), "basis vector length");
    }
    let equations = (0..v.len()).map(|i| {
        let row: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
        (row, v[i].clone())
    });
    solve_affine(equations, k).map(|s| s.particular)
}
