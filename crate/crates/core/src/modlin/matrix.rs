use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polycore::{Coeff, CoefficientDomain};

/// Dense matrix with exact entries in a coefficient domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    domain: CoefficientDomain,
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<Coeff>>,
}

/// Field used for rank computations: `F_p` stays, everything else goes to ℚ.
fn ambient_field(domain: CoefficientDomain) -> CoefficientDomain {
    match domain {
        CoefficientDomain::PrimeField(p) => CoefficientDomain::PrimeField(p),
        _ => CoefficientDomain::Rationals,
    }
}

impl ExactMatrix {
    pub fn from_rows(domain: CoefficientDomain, ncols: usize, rows: Vec<Vec<Coeff>>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != ncols {
                return Err(Error::ShapeMismatch(format!("row of length {} in a matrix with {ncols} columns", r.len())));
            }
            out.push(r.into_iter().map(|c| domain.try_normalize(c)).collect::<std::result::Result<Vec<_>, _>>()?);
        }
        Ok(ExactMatrix { domain, nrows: out.len(), ncols, rows: out })
    }

    pub fn from_i64(domain: CoefficientDomain, rows: &[Vec<i64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_rows(domain, ncols, rows.iter().map(|r| r.iter().map(|&v| Coeff::from_integer(v.into())).collect()).collect())
    }

    pub fn zeros(domain: CoefficientDomain, nrows: usize, ncols: usize) -> Self {
        ExactMatrix { domain, nrows, ncols, rows: vec![vec![Coeff::zero(); ncols]; nrows] }
    }

    pub fn identity(domain: CoefficientDomain, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m.rows[i][i] = Coeff::one();
        }
        m
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Coeff>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols).map(|j| (0..self.nrows).map(|i| self.rows[i][j].clone()).collect()).collect();
        ExactMatrix { domain: self.domain, nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let d = self.domain;
        let rows = (0..self.nrows)
            .map(|i| {
                (0..other.ncols)
                    .map(|j| {
                        let mut s = Coeff::zero();
                        for k in 0..self.ncols {
                            s += &self.rows[i][k] * &other.rows[k][j];
                        }
                        d.normalize(s)
                    })
                    .collect()
            })
            .collect();
        Ok(ExactMatrix { domain: d, nrows: self.nrows, ncols: other.ncols, rows })
    }

    pub fn apply(&self, v: &[Coeff]) -> Result<Vec<Coeff>> {
        if v.len() != self.ncols {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} columns", v.len(), self.ncols)));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| {
                let mut s = Coeff::zero();
                for (a, b) in r.iter().zip(v) {
                    s += a * b;
                }
                self.domain.normalize(s)
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols
            && self.rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }))
    }

    /// Reduced row echelon form over the ambient field, with pivot columns.
    fn rref(&self) -> (Vec<Vec<Coeff>>, Vec<usize>) {
        let f = ambient_field(self.domain);
        let mut a = self.rows.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row == self.nrows {
                break;
            }
            let Some(p) = (row..self.nrows).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(row, p);
            let inv = f.inv(&a[row][col]).expect("nonzero pivot");
            for c in a[row].iter_mut() {
                *c = f.mul(c, &inv);
            }
            for i in 0..self.nrows {
                if i != row && !a[i][col].is_zero() {
                    let factor = a[i][col].clone();
                    for j in 0..self.ncols {
                        let t = f.mul(&factor, &a[row][j]);
                        a[i][j] = f.normalize(&a[i][j] - t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Indices of the pivot columns: the first maximal independent set of columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Rank over the field (ℚ for integer and natural entries).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel over the ambient field.
    pub fn kernel(&self) -> Vec<Vec<Coeff>> {
        let f = ambient_field(self.domain);
        let (a, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Coeff::zero(); self.ncols];
                v[fc] = Coeff::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.normalize(-a[r][fc].clone());
                }
                v
            })
            .collect()
    }

    /// Determinant over the ambient field.
    pub fn determinant(&self) -> Result<Coeff> {
        if self.nrows != self.ncols {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let f = ambient_field(self.domain);
        let mut a = self.rows.clone();
        let n = self.nrows;
        let mut det = Coeff::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else { return Ok(Coeff::zero()) };
            if p != col {
                a.swap(p, col);
                det = f.normalize(-det);
            }
            det = f.mul(&det, &a[col][col]);
            let inv = f.inv(&a[col][col]).expect("nonzero pivot");
            for i in col + 1..n {
                if !a[i][col].is_zero() {
                    let factor = f.mul(&a[i][col], &inv);
                    for j in col..n {
                        let t = f.mul(&factor, &a[col][j]);
                        a[i][j] = f.normalize(&a[i][j] - t);
                    }
                }
            }
        }
        Ok(det)
    }

    /// Some `x` with `self · x = b` over the ambient field.
    pub fn solve(&self, b: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
        if b.len() != self.nrows {
            return Err(Error::ShapeMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.nrows)));
        }
        let f = ambient_field(self.domain);
        let mut aug = self.rows.clone();
        for (r, c) in aug.iter_mut().zip(b) {
            r.push(f.normalize(c.clone()));
        }
        let m = ExactMatrix { domain: f, nrows: self.nrows, ncols: self.ncols + 1, rows: aug };
        let (a, pivots) = m.rref();
        if pivots.contains(&self.ncols) {
            return Ok(None);
        }
        let mut x = vec![Coeff::zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[r][self.ncols].clone();
        }
        Ok(Some(x))
    }

    /// Right inverse over the ambient field, if the matrix has full row rank.
    pub fn right_inverse(&self) -> Result<Option<ExactMatrix>> {
        let mut cols = Vec::with_capacity(self.nrows);
        for k in 0..self.nrows {
            let mut e = vec![Coeff::zero(); self.nrows];
            e[k] = Coeff::one();
            match self.solve(&e)? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        let m = ExactMatrix { domain: ambient_field(self.domain), nrows: self.nrows, ncols: self.ncols, rows: cols };
        Ok(Some(m.transpose()))
    }

    fn integer_entries(&self) -> Result<Vec<Vec<BigInt>>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        if c.is_integer() {
                            Ok(c.to_integer())
                        } else {
                            Err(Error::ShapeMismatch(format!("entry {c} is not an integer")))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Integer solution of `self · x = b` via column Hermite reduction.
    pub fn integer_solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.nrows {
            return Err(Error::ShapeMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.nrows)));
        }
        let (l, u, pivots) = column_echelon(self.integer_entries()?, self.ncols);
        let mut y = vec![BigInt::zero(); self.ncols];
        for i in 0..self.nrows {
            let mut residual = b[i].clone();
            for (c, yc) in y.iter().enumerate() {
                residual -= &l[i][c] * yc;
            }
            match pivots.iter().position(|&(r, _)| r == i) {
                Some(k) => {
                    let c = pivots[k].1;
                    let (q, rem) = residual.div_rem(&l[i][c]);
                    if !rem.is_zero() {
                        return Ok(None);
                    }
                    y[c] = q;
                }
                None => {
                    if !residual.is_zero() {
                        return Ok(None);
                    }
                }
            }
        }
        let x = (0..self.ncols)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, yj) in y.iter().enumerate() {
                    s += &u[i][j] * yj;
                }
                s
            })
            .collect();
        Ok(Some(x))
    }

    /// Integer right inverse `X` with `self · X = I`, if one exists.
    pub fn integer_right_inverse(&self) -> Result<Option<ExactMatrix>> {
        let mut cols = Vec::with_capacity(self.nrows);
        for k in 0..self.nrows {
            let mut e = vec![BigInt::zero(); self.nrows];
            e[k] = BigInt::one();
            match self.integer_solve(&e)? {
                Some(x) => cols.push(x.into_iter().map(BigRational::from_integer).collect()),
                None => return Ok(None),
            }
        }
        let m = ExactMatrix { domain: CoefficientDomain::Integers, nrows: self.nrows, ncols: self.ncols, rows: cols };
        Ok(Some(m.transpose()))
    }
}

/// Unimodular column operations bringing `a` to lower echelon form `l = a·u`.
/// Returns `(l, u, pivots)` with pivots as (row, column) pairs.
fn column_echelon(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<(usize, usize)>) {
    let nrows = a.len();
    let mut u: Vec<Vec<BigInt>> = (0..ncols).map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    // column op helper: col_j <- p*col_j + q*col_k, col_k <- r*col_j + s*col_k
    let combine = |m: &mut Vec<Vec<BigInt>>, j: usize, k: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt| {
        for row in m.iter_mut() {
            let (x, y) = (row[j].clone(), row[k].clone());
            row[j] = p * &x + q * &y;
            row[k] = r * &x + s * &y;
        }
    };
    for row in 0..nrows {
        if col == ncols {
            break;
        }
        for k in col + 1..ncols {
            if a[row][k].is_zero() {
                continue;
            }
            let x = a[row][col].clone();
            let y = a[row][k].clone();
            let g = x.extended_gcd(&y);
            let (p, q) = (g.x.clone(), g.y.clone());
            let r = -(&y / &g.gcd);
            let s = &x / &g.gcd;
            combine(&mut a, col, k, &p, &q, &r, &s);
            combine(&mut u, col, k, &p, &q, &r, &s);
        }
        if a[row][col].is_zero() {
            continue;
        }
        if a[row][col].is_negative() {
            for m in [&mut a, &mut u] {
                for r in m.iter_mut() {
                    r[col] = -r[col].clone();
                }
            }
        }
        pivots.push((row, col));
        col += 1;
    }
    (a, u, pivots)
}
