//! Representability over a small field by backtracking.
//!
//! A representation may be taken to have an identity on the lexicographically
//! first basis `B`. The column of any other element `e` is then supported
//! exactly on the rows of its fundamental circuit, and the entries on a
//! spanning forest of the row/column support graph can be scaled to 1. The
//! remaining support entries are tried over the nonzero field elements,
//! column by column; once a column is complete, every square submatrix it
//! closes is checked against the bases of the matroid.

use super::field::Field;
use super::matrix::{column_rank, MatrixRep};
use crate::error::Result;
use crate::matroid::Matroid;
use crate::search::{Budget, Outcome};
use crate::subset::Subset;

/// Square submatrix `rows × cols` of the non-basis block with the expected
/// singularity.
struct MinorCheck {
    rows: Vec<usize>,
    cols: Vec<usize>,
    nonsingular: bool,
}

struct Search<'a> {
    field: &'a Field,
    /// Non-basis block, indexed `[column][row]`.
    block: Vec<Vec<u8>>,
    /// Free entries per column.
    free: Vec<Vec<usize>>,
    checks: Vec<Vec<MinorCheck>>,
}

impl Search<'_> {
    fn check_column(&self, col: usize) -> bool {
        self.checks[col].iter().all(|c| {
            let projected: Vec<Vec<u8>> = c
                .cols
                .iter()
                .map(|&j| c.rows.iter().map(|&i| self.block[j][i]).collect())
                .collect();
            let full = column_rank(self.field, projected.iter().map(Vec::as_slice)) == c.rows.len();
            full == c.nonsingular
        })
    }

    fn fill(&mut self, col: usize, slot: usize, budget: &mut Budget) -> Option<bool> {
        if col == self.block.len() {
            return Some(true);
        }
        if slot == self.free[col].len() {
            if !budget.tick() {
                return None;
            }
            if !self.check_column(col) {
                return Some(false);
            }
            return self.fill(col + 1, 0, budget);
        }
        let row = self.free[col][slot];
        for v in 1..self.field.order() as u8 {
            if !budget.tick() {
                return None;
            }
            self.block[col][row] = v;
            match self.fill(col, slot + 1, budget) {
                Some(false) => {}
                other => return other,
            }
        }
        self.block[col][row] = 0;
        Some(false)
    }
}

/// Searches for a GF(q) matrix whose column matroid equals `m`, with the
/// default node budget.
pub fn is_representable(m: &Matroid, q: usize) -> Result<Outcome<MatrixRep>> {
    is_representable_with(m, q, &mut Budget::default())
}

pub fn is_representable_with(
    m: &Matroid,
    q: usize,
    budget: &mut Budget,
) -> Result<Outcome<MatrixRep>> {
    let field = Field::get(q)?;
    let n = m.len();
    let r = m.rank();
    let basis = m.bases()[0];
    let basis_elems: Vec<usize> = basis.iter().collect();
    let loops = m.loops();
    let others: Vec<usize> = (m.full() - basis - loops).iter().collect();

    // Fundamental-circuit supports.
    let support: Vec<Vec<usize>> = others
        .iter()
        .map(|&e| {
            basis_elems
                .iter()
                .enumerate()
                .filter(|(_, &b)| m.is_basis(basis.without(b).with(e)))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    // Spanning forest of the support graph; rows are nodes 0..r, columns
    // r.. . Forest entries are fixed to 1.
    let mut parent: Vec<usize> = (0..r + others.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut block = vec![vec![0u8; r]; others.len()];
    let mut free = vec![Vec::new(); others.len()];
    for (j, rows) in support.iter().enumerate() {
        for &i in rows {
            let (a, b) = (find(&mut parent, i), find(&mut parent, r + j));
            if a != b {
                parent[a] = b;
                block[j][i] = 1;
            } else {
                free[j].push(i);
            }
        }
    }

    // Square submatrices closed by each column: rows R, earlier columns plus
    // this one. B ∖ R ∪ cols is a basis iff the submatrix is nonsingular.
    let mut checks: Vec<Vec<MinorCheck>> = Vec::with_capacity(others.len());
    for j in 0..others.len() {
        let mut list = Vec::new();
        let earlier = Subset::full(j);
        for k in 2..=r.min(j + 1) {
            for prev in earlier.k_subsets(k - 1) {
                let cols: Vec<usize> = prev.iter().chain([j]).collect();
                let col_mask = Subset::from_indices(cols.iter().map(|&c| others[c]));
                for rows in Subset::full(r).k_subsets(k) {
                    let removed = Subset::from_indices(rows.iter().map(|i| basis_elems[i]));
                    list.push(MinorCheck {
                        rows: rows.iter().collect(),
                        cols: cols.clone(),
                        nonsingular: m.is_basis((basis - removed) | col_mask),
                    });
                }
            }
        }
        checks.push(list);
    }

    let mut search = Search {
        field,
        block,
        free,
        checks,
    };
    match search.fill(0, 0, budget) {
        None => Ok(Outcome::BudgetExceeded),
        Some(false) => Ok(Outcome::Absent),
        Some(true) => {
            let mut columns = vec![vec![0u8; r]; n];
            for (i, &b) in basis_elems.iter().enumerate() {
                columns[b][i] = 1;
            }
            for (j, &e) in others.iter().enumerate() {
                columns[e] = search.block[j].clone();
            }
            let rep = MatrixRep::from_columns(q, m.ground().clone(), columns)?;
            Ok(Outcome::Found(rep))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::matrix::matroid_from_matrix;
    use crate::subset::GroundSet;

    fn uniform(r: usize, n: usize) -> Matroid {
        Matroid::from_bases(GroundSet::letters(n).unwrap(), Subset::full(n).k_subsets(r)).unwrap()
    }

    #[test]
    fn uniform_lines() {
        // U2,n is representable over GF(q) iff n <= q + 1.
        for q in [2, 3, 4, 5] {
            for n in 2..=7 {
                let found = is_representable(&uniform(2, n), q).unwrap();
                assert_eq!(found.is_found(), n <= q + 1, "U2,{n} over GF({q})");
                if let Outcome::Found(rep) = found {
                    assert_eq!(matroid_from_matrix(&rep).unwrap(), uniform(2, n));
                }
            }
        }
    }

    #[test]
    fn loops_and_rank_zero() {
        let m = Matroid::from_bases(GroundSet::letters(2).unwrap(), [Subset::EMPTY]).unwrap();
        let rep = is_representable(&m, 2).unwrap().found().unwrap();
        assert_eq!(matroid_from_matrix(&rep).unwrap(), m);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let mut budget = Budget::new(1);
        let out = is_representable_with(&uniform(3, 6), 4, &mut budget).unwrap();
        assert_eq!(out, Outcome::BudgetExceeded);
    }

    #[test]
    fn unsupported_field() {
        assert!(is_representable(&uniform(2, 3), 6).is_err());
    }
}
