//! Exact scalar types, parsing, and integer lattice algorithms.
//!
//! All arithmetic is arbitrary precision. `Rat` values are kept in canonical
//! form (positive denominator, reduced fraction) by construction, so equality
//! and ordering are always exact.

use std::fmt::Write as _;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Parses "p/q", plain integers, and exact decimal strings ("1.5", "-0.25").
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: Int = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in '{s}'")))?;
        let den: Int = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let whole_int: Int = if whole.is_empty() || whole == "-" || whole == "+" {
            Int::zero()
        } else {
            whole
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal '{s}'")))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal '{s}'")));
        }
        let frac_int: Int = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal '{s}'")))?;
        let scale = Int::from(10u32).pow(frac.len() as u32);
        let mut value = Rat::from_integer(whole_int.abs()) + Rat::new(frac_int, scale);
        if neg {
            value = -value;
        }
        return Ok(value);
    }
    let n: Int = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
    Ok(Rat::from_integer(n))
}

/// Canonical "p/q" form used in all JSON payloads.
pub fn format_rational(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_integer(s: &str) -> Result<Int> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// Nonnegative gcd of all entries; errors on an empty vector.
pub fn gcd_vector(v: &[Int]) -> Result<Int> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    Ok(g)
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    (a * b).abs() / a.gcd(b)
}

/// Common denominator of a slice of rationals.
pub fn common_denominator(v: &[Rat]) -> Int {
    let mut l = Int::one();
    for x in v {
        l = lcm_int(&l, x.denom());
    }
    l
}

/// Scales a rational vector to a primitive integer vector (gcd 1), keeping
/// direction. Errors on the zero vector.
pub fn primitive_direction(v: &[Rat]) -> Result<Vec<Int>> {
    let den = common_denominator(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = gcd_vector(&ints)?;
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(ints.iter().map(|x| x / &g).collect())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

fn ceil_div(a: &Int, m: &Int) -> Int {
    debug_assert!(m.is_positive());
    let (q, r) = a.div_rem(m);
    if r.is_positive() {
        q + 1
    } else {
        q
    }
}

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn mul_mat(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("matrix product shapes".into()));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + add);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() / inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).clone() - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Particular solution of `self * x = b` with free variables set to zero.
    /// Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.get(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                det = -det;
                for j in 0..n {
                    let a = m.get(c, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
            }
            let piv = m.get(c, c).clone();
            det *= piv.clone();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone() / piv.clone();
                for j in c..n {
                    let v = m.get(i, j).clone() - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut aug = RationalMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix);
        }
        let mut out = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn to_integer(&self) -> Result<IntegerMatrix> {
        if !self.is_integral() {
            return Err(Error::NonIntegral("matrix has fractional entries".into()));
        }
        Ok(IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, Rat::from_integer(self.get(i, j).clone()));
            }
        }
        out
    }

    pub fn det(&self) -> Result<Int> {
        let d = self.to_rational().det()?;
        Ok(d.to_integer())
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn submul_col(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) - q * self.get(i, src);
            self.set(i, dst, v);
        }
    }
}

/// Column-style Hermite normal form of a square nonsingular integer matrix.
///
/// Returns `(H, U)` with `A * U = H`, `U` unimodular, `H` lower triangular
/// with positive diagonal, and each off-diagonal entry nonpositive with
/// magnitude strictly below the diagonal entry of its row.
pub fn hermite_normal_form(a: &RationalMatrix) -> Result<(IntegerMatrix, IntegerMatrix)> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch("HNF needs a square matrix".into()));
    }
    let a = a.to_integer()?;
    hnf_int(&a)
}

pub fn hnf_int(a: &IntegerMatrix) -> Result<(IntegerMatrix, IntegerMatrix)> {
    let d = a.rows;
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(d);

    for i in 0..d {
        loop {
            let mut best: Option<usize> = None;
            for j in i..d {
                if h.get(i, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if h.get(i, j).abs() < h.get(i, b).abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else {
                return Err(Error::SingularMatrix);
            };
            h.swap_cols(i, b);
            u.swap_cols(i, b);
            if h.get(i, i).is_negative() {
                h.negate_col(i);
                u.negate_col(i);
            }
            let mut clean = true;
            for j in i + 1..d {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(i, i));
                h.submul_col(j, i, &q);
                u.submul_col(j, i, &q);
                if !h.get(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }

    // Normalize row i entries left of the diagonal into (-H[i][i], 0].
    for i in 0..d {
        for j in 0..i {
            let q = ceil_div(h.get(i, j), h.get(i, i));
            h.submul_col(j, i, &q);
            u.submul_col(j, i, &q);
        }
    }
    Ok((h, u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnPosition {
    First,
    Last,
}

/// Completes a primitive integer vector to a unimodular matrix containing it
/// as the requested column.
pub fn unimodular_completion(r: &[Int], position: ColumnPosition) -> Result<IntegerMatrix> {
    if r.is_empty() {
        return Err(Error::EmptyInput);
    }
    let g = gcd_vector(r)?;
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NonPrimitive(g.to_string()));
    }
    let d = r.len();
    if d == 1 {
        // r is (1) or (-1).
        return IntegerMatrix::from_rows(vec![vec![r[0].clone()]]);
    }

    // Rational basis completion: keep all unit vectors except one whose
    // index carries a nonzero entry of r, and put r last.
    let k = r.iter().position(|x| !x.is_zero()).unwrap();
    let mut b = RationalMatrix::zeros(d, d);
    let mut col = 0usize;
    for j in 0..d {
        if j == k {
            continue;
        }
        b.set(j, col, Rat::one());
        col += 1;
    }
    for i in 0..d {
        b.set(i, d - 1, Rat::from_integer(r[i].clone()));
    }

    let binv = b.inverse()?;
    let mut q = Int::one();
    for i in 0..d {
        for j in 0..d {
            q = lcm_int(&q, binv.get(i, j).denom());
        }
    }
    let mut scaled = RationalMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            scaled.set(i, j, binv.get(i, j) * Rat::from_integer(q.clone()));
        }
    }
    let a_int = scaled.to_integer()?;
    let (_h, mut u) = hnf_int(&a_int)?;

    if u.column(d - 1) != r {
        return Err(Error::Internal(
            "unimodular completion did not recover the input column".into(),
        ));
    }
    if let ColumnPosition::First = position {
        // Rotate the last column to the front, preserving |det| = 1.
        for j in (1..d).rev() {
            u.swap_cols(j, j - 1);
        }
    }
    if !u.is_unimodular() {
        return Err(Error::Internal("completion is not unimodular".into()));
    }
    Ok(u)
}

/// Renders an integer matrix as rows of decimal strings, for reports.
pub fn matrix_display(m: &IntegerMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        let _ = writeln!(out, "[{}]", row.join(", "));
    }
    out
}

/// Exact integer n-th root when it exists.
pub fn exact_nth_root_int(x: &Int, n: u32) -> Option<Int> {
    if x.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_nth_root_int(&x.abs(), n).map(|r| -r);
    }
    let r = x.nth_root(n);
    if num::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact rational n-th root when it exists.
pub fn exact_nth_root(x: &Rat, n: u32) -> Option<Rat> {
    let num = exact_nth_root_int(x.numer(), n)?;
    let den = exact_nth_root_int(x.denom(), n)?;
    Some(Rat::new(num, den))
}

/// Sign of an integer as -1, 0, 1.
pub fn sign(x: &Int) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: Vec<Vec<i64>>) -> IntegerMatrix {
        IntegerMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Independent checker for the HNF shape contract.
    fn assert_hnf_shape(h: &IntegerMatrix) {
        for i in 0..h.rows {
            assert!(h.get(i, i).is_positive(), "diagonal must be positive");
            for j in 0..h.cols {
                if j > i {
                    assert!(h.get(i, j).is_zero(), "upper triangle must vanish");
                } else if j < i {
                    assert!(!h.get(i, j).is_positive(), "off-diagonal must be <= 0");
                    assert!(
                        h.get(i, j).abs() < h.get(i, i).abs(),
                        "off-diagonal magnitude must stay below the row diagonal"
                    );
                }
            }
        }
    }

    fn assert_hnf_contract(a: &IntegerMatrix) {
        let (h, u) = hnf_int(a).unwrap();
        assert_hnf_shape(&h);
        assert!(u.is_unimodular(), "U must be unimodular");
        let prod = a.to_rational().mul_mat(&u.to_rational()).unwrap();
        assert_eq!(prod, h.to_rational(), "A*U must equal H");
        assert_eq!(
            a.det().unwrap().abs(),
            h.det().unwrap().abs(),
            "|det| preserved"
        );
    }

    #[test]
    fn parse_and_format_roundtrip() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rint(7));
        assert_eq!(format_rational(&rat(3, 2)), "3/2");
        assert_eq!(format_rational(&rint(-4)), "-4/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn gcd_vector_examples() {
        let v: Vec<Int> = vec![int(6), int(-9), int(12)];
        assert_eq!(gcd_vector(&v).unwrap(), int(3));
        let z: Vec<Int> = vec![int(0), int(0)];
        assert_eq!(gcd_vector(&z).unwrap(), int(0));
        assert!(gcd_vector(&[]).is_err());
    }

    #[test]
    fn hnf_fixed_examples() {
        assert_hnf_contract(&im(vec![vec![2, 0], vec![1, 3]]));
        assert_hnf_contract(&im(vec![vec![1, 2], vec![3, 4]]));
        let (h, _u) = hnf_int(&im(vec![vec![1, 2], vec![3, 4]])).unwrap();
        // |det| = 2 must survive into the diagonal product.
        assert_eq!(h.get(0, 0) * h.get(1, 1), int(2));
        let (h, u) = hnf_int(&IntegerMatrix::identity(4)).unwrap();
        assert_eq!(h, IntegerMatrix::identity(4));
        assert_eq!(u, IntegerMatrix::identity(4));
    }

    #[test]
    fn hnf_rejects_singular_and_fractional() {
        let singular = im(vec![vec![1, 2], vec![2, 4]]);
        assert!(matches!(hnf_int(&singular), Err(Error::SingularMatrix)));
        let frac = RationalMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert!(matches!(
            hermite_normal_form(&frac),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn hnf_random_contract() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut done = 0;
        while done < 300 {
            let d = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..d)
                .map(|_| (0..d).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let m = im(rows);
            if m.det().unwrap().is_zero() {
                continue;
            }
            assert_hnf_contract(&m);
            done += 1;
        }
    }

    #[test]
    fn unimodular_completion_examples() {
        let r = vec![int(1), int(0), int(0)];
        let u = unimodular_completion(&r, ColumnPosition::First).unwrap();
        assert!(u.is_unimodular());
        assert_eq!(u.column(0), r);

        let r = vec![int(2), int(3)];
        let u = unimodular_completion(&r, ColumnPosition::Last).unwrap();
        assert!(u.is_unimodular());
        assert_eq!(u.column(1), r);

        let r = vec![int(2), int(4)];
        assert!(matches!(
            unimodular_completion(&r, ColumnPosition::Last),
            Err(Error::NonPrimitive(_))
        ));
        let z = vec![int(0), int(0)];
        assert!(matches!(
            unimodular_completion(&z, ColumnPosition::Last),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn unimodular_completion_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut done = 0;
        while done < 100 {
            let d = rng.gen_range(2..=6);
            let v: Vec<Int> = (0..d).map(|_| int(rng.gen_range(-9..=9))).collect();
            let g = gcd_vector(&v).unwrap();
            if !g.is_one() {
                continue;
            }
            for pos in [ColumnPosition::First, ColumnPosition::Last] {
                let u = unimodular_completion(&v, pos).unwrap();
                assert!(u.is_unimodular());
                let col = match pos {
                    ColumnPosition::First => u.column(0),
                    ColumnPosition::Last => u.column(d - 1),
                };
                assert_eq!(col, v);
                // U^{-1} r must be the corresponding unit vector.
                let inv = u.to_rational().inverse().unwrap();
                let rv: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
                let e = inv.mul_vec(&rv).unwrap();
                for (i, x) in e.iter().enumerate() {
                    let expect = match pos {
                        ColumnPosition::First => i == 0,
                        ColumnPosition::Last => i == d - 1,
                    };
                    assert_eq!(*x == Rat::one(), expect);
                    assert!(x.is_zero() || *x == Rat::one());
                }
            }
            done += 1;
        }
    }

    #[test]
    fn linear_algebra_basics() {
        let m = RationalMatrix::from_rows(vec![
            vec![rint(1), rint(2)],
            vec![rint(3), rint(4)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), rint(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_mat(&inv).unwrap(), RationalMatrix::identity(2));
        let ns = RationalMatrix::from_rows(vec![vec![rint(1), rint(1), rint(0)]])
            .unwrap()
            .nullspace();
        assert_eq!(ns.len(), 2);
        let sol = m.solve(&[rint(5), rint(11)]).unwrap();
        assert_eq!(sol, vec![rint(1), rint(2)]);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_nth_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(exact_nth_root(&rat(27, 8), 3), Some(rat(3, 2)));
        assert_eq!(exact_nth_root(&rat(2, 1), 2), None);
        assert_eq!(exact_nth_root(&rat(-8, 1), 3), Some(rint(-2)));
        assert_eq!(exact_nth_root(&rat(-4, 1), 2), None);
    }

    proptest::proptest! {
        #[test]
        fn field_ops_are_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rat(a, b);
            let y = rat(c, d);
            proptest::prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
            if !y.is_zero() {
                proptest::prop_assert_eq!((x.clone() * y.clone()) / y.clone(), x.clone());
            }
            proptest::prop_assert!(x.denom().is_positive());
            proptest::prop_assert!(x.numer().gcd(x.denom()).is_one() || x.numer().is_zero());
        }
    }
}
