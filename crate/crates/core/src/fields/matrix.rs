use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::{GroundSet, Subset};

/// An `rows × n` matrix over GF(q) whose columns are labelled by a ground
/// set. Stored column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    q: usize,
    rows: usize,
    ground: GroundSet,
    columns: Vec<Vec<u8>>,
}

/// On-disk form: `entries` is row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub q: usize,
    pub rows: usize,
    pub columns: Vec<String>,
    pub entries: Vec<Vec<u8>>,
}

impl MatrixRep {
    /// Builds from column vectors with entries in `0..q`.
    pub fn from_columns(q: usize, ground: GroundSet, columns: Vec<Vec<u8>>) -> Result<Self> {
        Field::get(q)?;
        if columns.len() != ground.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} columns for {} labels",
                columns.len(),
                ground.len()
            )));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidMatrix("ragged columns".into()));
        }
        if rows > columns.len() {
            return Err(Error::InvalidMatrix(format!(
                "{rows} rows exceed {} columns",
                columns.len()
            )));
        }
        if columns.iter().flatten().any(|&x| x as usize >= q) {
            return Err(Error::InvalidMatrix(format!("entry outside 0..{q}")));
        }
        Ok(MatrixRep {
            q,
            rows,
            ground,
            columns,
        })
    }

    /// Builds from row-major entries.
    pub fn from_rows(q: usize, ground: GroundSet, rows: &[Vec<u8>]) -> Result<Self> {
        let n = ground.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "every row must have {n} entries"
            )));
        }
        let columns = (0..n)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        MatrixRep::from_columns(q, ground, columns)
    }

    pub fn field(&self) -> &'static Field {
        Field::get(self.q).expect("validated at construction")
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.columns[j][i]
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: u8) -> Result<Self> {
        let mut columns = self.columns.clone();
        columns[j][i] = value;
        MatrixRep::from_columns(self.q, self.ground.clone(), columns)
    }

    pub fn rank(&self) -> usize {
        column_rank(self.field(), self.columns.iter().map(Vec::as_slice))
    }

    pub fn rank_of(&self, x: Subset) -> usize {
        column_rank(self.field(), x.iter().map(|j| self.columns[j].as_slice()))
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            q: self.q,
            rows: self.rows,
            columns: self.ground.labels().to_vec(),
            entries: (0..self.rows)
                .map(|i| self.columns.iter().map(|c| c[i]).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        if doc.entries.len() != doc.rows {
            return Err(Error::InvalidMatrix(format!(
                "expected {} rows, found {}",
                doc.rows,
                doc.entries.len()
            )));
        }
        let ground = GroundSet::new(doc.columns.iter().cloned())?;
        let m = MatrixRep::from_rows(doc.q, ground, &doc.entries)?;
        if m.rows != doc.rows {
            return Err(Error::InvalidMatrix("row count mismatch".into()));
        }
        Ok(m)
    }
}

/// Rank of a set of column vectors by Gaussian elimination.
pub fn column_rank<'a>(field: &Field, cols: impl IntoIterator<Item = &'a [u8]>) -> usize {
    let mut basis: Vec<(usize, Vec<u8>)> = Vec::new();
    for col in cols {
        if let Some(b) = reduce(field, &basis, col) {
            basis.push(b);
        }
    }
    basis.len()
}

/// Reduces `col` against an echelon basis of `(pivot row, vector with a 1 at
/// the pivot)`; returns the normalised remainder if it is nonzero.
pub(crate) fn reduce(
    field: &Field,
    basis: &[(usize, Vec<u8>)],
    col: &[u8],
) -> Option<(usize, Vec<u8>)> {
    let mut v = col.to_vec();
    for (p, b) in basis {
        let c = v[*p];
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
    }
    let pivot = v.iter().position(|&x| x != 0)?;
    let inv = field.inv(v[pivot]).unwrap();
    for x in v.iter_mut() {
        *x = field.mul(*x, inv);
    }
    Some((pivot, v))
}

/// Bases are the column sets of size `rank(A)` that are independent.
pub fn matroid_from_matrix(a: &MatrixRep) -> Result<Matroid> {
    let field = a.field();
    let n = a.ground.len();
    let r = a.rank();
    let bases: Vec<Subset> = Subset::full(n)
        .k_subsets(r)
        .filter(|&x| column_rank(field, x.iter().map(|j| a.columns[j].as_slice())) == r)
        .collect();
    Matroid::from_bases(a.ground.clone(), bases)
}

/// One representative per point of PG(r-1, q), first nonzero coordinate 1,
/// in lexicographic order.
pub fn pg_points(r: usize, q: usize) -> Result<Vec<Vec<u8>>> {
    Field::get(q)?;
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut v = vec![0u8; r];
    loop {
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v.clone());
        }
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if (v[i] as usize) + 1 < q {
                v[i] += 1;
                break;
            }
            v[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(pg_points(3, 2).unwrap().len(), 7);
        assert_eq!(pg_points(3, 3).unwrap().len(), 13);
        assert_eq!(pg_points(3, 4).unwrap().len(), 21);
        assert_eq!(pg_points(4, 2).unwrap().len(), 15);
        let pts = pg_points(2, 3).unwrap();
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn identity_plus_ones_is_a_triangle() {
        let g = GroundSet::letters(3).unwrap();
        let a = MatrixRep::from_rows(2, g, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let m = matroid_from_matrix(&a).unwrap();
        assert_eq!(m.bases().len(), 3);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_deficient_matrix_uses_matrix_rank() {
        let g = GroundSet::letters(3).unwrap();
        let a = MatrixRep::from_rows(3, g, &[vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        let m = matroid_from_matrix(&a).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.is_loop(2));
    }

    #[test]
    fn rejects_bad_entries() {
        let g = GroundSet::letters(2).unwrap();
        assert!(MatrixRep::from_rows(3, g.clone(), &[vec![1, 3]]).is_err());
        assert!(MatrixRep::from_rows(6, g, &[vec![1, 0]]).is_err());
    }
}
