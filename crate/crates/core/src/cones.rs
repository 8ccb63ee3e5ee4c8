//! Conic set representation: affine maps into products of elementary cones.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::PolyhedronH;
use crate::rational::{dot, Rat, RationalMatrix};

/// The four cone kinds used by every set in this crate.
///
/// - `Zero(m)`: the origin of R^m (equality rows).
/// - `Nonneg(m)`: the nonnegative orthant (inequality rows).
/// - `SecondOrder(m)`: `{(t, w) : ||w||_2 <= t}`, first coordinate the bound.
/// - `RotatedSecondOrder(m)`: `{(u, v, w) : ||w||_2^2 <= u v, u >= 0, v >= 0}`,
///   first two coordinates the product terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryCone {
    Zero(usize),
    Nonneg(usize),
    SecondOrder(usize),
    RotatedSecondOrder(usize),
}

impl ElementaryCone {
    pub fn dim(&self) -> usize {
        match *self {
            ElementaryCone::Zero(m)
            | ElementaryCone::Nonneg(m)
            | ElementaryCone::SecondOrder(m)
            | ElementaryCone::RotatedSecondOrder(m) => m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ElementaryCone::Zero(m) | ElementaryCone::Nonneg(m) if m >= 1 => Ok(()),
            ElementaryCone::SecondOrder(m) if m >= 1 => Ok(()),
            ElementaryCone::RotatedSecondOrder(m) if m >= 2 => Ok(()),
            _ => Err(Error::Invalid("cone dimension too small".into())),
        }
    }

    /// Exact membership; second-order memberships are decided by squaring.
    pub fn contains(&self, y: &[Rat]) -> bool {
        debug_assert_eq!(y.len(), self.dim());
        match self {
            ElementaryCone::Zero(_) => y.iter().all(|v| v.is_zero()),
            ElementaryCone::Nonneg(_) => y.iter().all(|v| !v.is_negative()),
            ElementaryCone::SecondOrder(_) => {
                let t = &y[0];
                if t.is_negative() {
                    return false;
                }
                let sq: Rat = y[1..].iter().map(|v| v * v).sum();
                sq <= t * t
            }
            ElementaryCone::RotatedSecondOrder(_) => {
                let (u, v) = (&y[0], &y[1]);
                if u.is_negative() || v.is_negative() {
                    return false;
                }
                let sq: Rat = y[2..].iter().map(|w| w * w).sum();
                sq <= u * v
            }
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self, ElementaryCone::Zero(_) | ElementaryCone::Nonneg(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ElementaryCone::Zero(_) => "zero",
            ElementaryCone::Nonneg(_) => "nonneg",
            ElementaryCone::SecondOrder(_) => "second_order",
            ElementaryCone::RotatedSecondOrder(_) => "rotated_second_order",
        }
    }
}

/// A set `{ v in R^ambient : A v + b in K_1 x ... x K_m }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSet {
    pub ambient_dim: usize,
    pub a: RationalMatrix,
    pub b: Vec<Rat>,
    pub cones: Vec<ElementaryCone>,
}

impl ConicSet {
    pub fn new(
        ambient_dim: usize,
        a: RationalMatrix,
        b: Vec<Rat>,
        cones: Vec<ElementaryCone>,
    ) -> Result<Self> {
        if a.cols != ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "A has {} columns for ambient dimension {}",
                a.cols, ambient_dim
            )));
        }
        if a.rows != b.len() {
            return Err(Error::DimensionMismatch("A rows vs b length".into()));
        }
        let total: usize = cones.iter().map(|c| c.dim()).sum();
        if total != a.rows {
            return Err(Error::DimensionMismatch(format!(
                "cone dimensions sum to {} but A has {} rows",
                total, a.rows
            )));
        }
        for c in &cones {
            c.validate()?;
        }
        Ok(ConicSet {
            ambient_dim,
            a,
            b,
            cones,
        })
    }

    /// Whole space, no constraints.
    pub fn free(ambient_dim: usize) -> Self {
        ConicSet {
            ambient_dim,
            a: RationalMatrix::zeros(0, ambient_dim),
            b: Vec::new(),
            cones: Vec::new(),
        }
    }

    pub fn membership(&self, v: &[Rat]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, ambient dimension is {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let mut img = self.a.mul_vec(v)?;
        for (x, c) in img.iter_mut().zip(&self.b) {
            *x += c;
        }
        let mut offset = 0;
        for cone in &self.cones {
            let m = cone.dim();
            if !cone.contains(&img[offset..offset + m]) {
                return Ok(false);
            }
            offset += m;
        }
        Ok(true)
    }

    /// Recession cone: same rows with the offsets dropped.
    pub fn recession_cone(&self) -> ConicSet {
        ConicSet {
            ambient_dim: self.ambient_dim,
            a: self.a.clone(),
            b: vec![Rat::zero(); self.b.len()],
            cones: self.cones.clone(),
        }
    }

    /// Closed conic hull of the set lifted by one homogenizing coordinate,
    /// appended last: `{ (v, z) : A v + z b in K, z >= 0 }`.
    pub fn conic_hull(&self) -> ConicSet {
        let n = self.ambient_dim;
        let mut a = RationalMatrix::zeros(self.a.rows + 1, n + 1);
        for i in 0..self.a.rows {
            for j in 0..n {
                a.set(i, j, self.a.get(i, j).clone());
            }
            a.set(i, n, self.b[i].clone());
        }
        a.set(self.a.rows, n, Rat::one());
        let mut b = vec![Rat::zero(); self.a.rows + 1];
        b.truncate(self.a.rows + 1);
        let mut cones = self.cones.clone();
        cones.push(ElementaryCone::Nonneg(1));
        ConicSet {
            ambient_dim: n + 1,
            a,
            b,
            cones,
        }
    }

    /// Lifts the set by a new last coordinate `t` and adds the single block
    /// `||v||_2^2 <= t, t >= 0`, which forces the recession cone of the lift
    /// to be the upward `t` ray regardless of the input's recession cone.
    pub fn recession_equalize(&self) -> ConicSet {
        let n = self.ambient_dim;
        let mut a = RationalMatrix::zeros(self.a.rows + 2 + n, n + 1);
        let mut b = vec![Rat::zero(); self.a.rows + 2 + n];
        for i in 0..self.a.rows {
            for j in 0..n {
                a.set(i, j, self.a.get(i, j).clone());
            }
            b[i] = self.b[i].clone();
        }
        // Rotated second-order rows: u = t, v = 1, w = v (all coordinates).
        let base = self.a.rows;
        a.set(base, n, Rat::one());
        b[base + 1] = Rat::one();
        for j in 0..n {
            a.set(base + 2 + j, j, Rat::one());
        }
        let mut cones = self.cones.clone();
        cones.push(ElementaryCone::RotatedSecondOrder(2 + n));
        ConicSet {
            ambient_dim: n + 1,
            a,
            b,
            cones,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.cones.iter().all(|c| c.is_polyhedral())
    }

    /// Conversion to inequality/equality form, when every block is linear.
    pub fn to_polyhedron(&self) -> Result<PolyhedronH> {
        if !self.is_polyhedral() {
            return Err(Error::RequiresPolyhedral(
                "set has second-order blocks".into(),
            ));
        }
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        let mut offset = 0;
        for cone in &self.cones {
            for i in offset..offset + cone.dim() {
                let row = self.a.row(i).to_vec();
                let c = self.b[i].clone();
                match cone {
                    // a.v + c = 0
                    ElementaryCone::Zero(_) => eqs.push((row, -c)),
                    // a.v + c >= 0  <=>  (-a).v <= c
                    ElementaryCone::Nonneg(_) => {
                        ineqs.push((row.iter().map(|x| -x.clone()).collect(), c))
                    }
                    _ => unreachable!(),
                }
            }
            offset += cone.dim();
        }
        PolyhedronH::new(self.ambient_dim, ineqs, eqs)
    }

    pub fn from_polyhedron(p: &PolyhedronH) -> ConicSet {
        let mut rows = Vec::new();
        let mut b = Vec::new();
        let mut cones = Vec::new();
        if !p.eqs.is_empty() {
            for (e, f) in &p.eqs {
                rows.push(e.clone());
                b.push(-f.clone());
            }
            cones.push(ElementaryCone::Zero(p.eqs.len()));
        }
        if !p.ineqs.is_empty() {
            for (a, c) in &p.ineqs {
                rows.push(a.iter().map(|x| -x.clone()).collect());
                b.push(c.clone());
            }
            cones.push(ElementaryCone::Nonneg(p.ineqs.len()));
        }
        let a = if rows.is_empty() {
            RationalMatrix::zeros(0, p.dim)
        } else {
            RationalMatrix::from_rows(rows).expect("consistent rows")
        };
        ConicSet {
            ambient_dim: p.dim,
            a,
            b,
            cones,
        }
    }

    /// Fixes the trailing `values.len()` coordinates, producing a set over
    /// the remaining prefix.
    pub fn substitute_suffix(&self, values: &[Rat]) -> Result<ConicSet> {
        let k = values.len();
        if k > self.ambient_dim {
            return Err(Error::DimensionMismatch(
                "more fixed values than coordinates".into(),
            ));
        }
        let keep = self.ambient_dim - k;
        let mut a = RationalMatrix::zeros(self.a.rows, keep);
        let mut b = self.b.clone();
        for i in 0..self.a.rows {
            for j in 0..keep {
                a.set(i, j, self.a.get(i, j).clone());
            }
            let shift = dot(&self.a.row(i)[keep..], values);
            b[i] += shift;
        }
        Ok(ConicSet {
            ambient_dim: keep,
            a,
            b,
            cones: self.cones.clone(),
        })
    }
}

/// Row-level builder used by the formulation constructors.
pub struct ConicBuilder {
    ambient: usize,
    rows: Vec<Vec<Rat>>,
    offsets: Vec<Rat>,
    cones: Vec<ElementaryCone>,
}

impl ConicBuilder {
    pub fn new(ambient: usize) -> Self {
        ConicBuilder {
            ambient,
            rows: Vec::new(),
            offsets: Vec::new(),
            cones: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    fn sparse_row(&self, entries: &[(usize, Rat)], c: Rat) -> (Vec<Rat>, Rat) {
        let mut row = vec![Rat::zero(); self.ambient];
        for (j, v) in entries {
            row[*j] = row[*j].clone() + v;
        }
        (row, c)
    }

    /// Adds `sum entries + c = 0`.
    pub fn zero_row(&mut self, entries: &[(usize, Rat)], c: Rat) {
        let (row, c) = self.sparse_row(entries, c);
        self.rows.push(row);
        self.offsets.push(c);
        self.cones.push(ElementaryCone::Zero(1));
    }

    /// Adds `sum entries + c >= 0`.
    pub fn nonneg_row(&mut self, entries: &[(usize, Rat)], c: Rat) {
        let (row, c) = self.sparse_row(entries, c);
        self.rows.push(row);
        self.offsets.push(c);
        self.cones.push(ElementaryCone::Nonneg(1));
    }

    /// Adds a full block with explicit rows.
    pub fn block(&mut self, cone: ElementaryCone, rows: Vec<(Vec<(usize, Rat)>, Rat)>) {
        assert_eq!(cone.dim(), rows.len());
        for (entries, c) in rows {
            let (row, c) = self.sparse_row(&entries, c);
            self.rows.push(row);
            self.offsets.push(c);
        }
        self.cones.push(cone);
    }

    /// Embeds another conic set whose coordinate `j` maps to `positions[j]`.
    pub fn embed(&mut self, set: &ConicSet, positions: &[usize]) {
        assert_eq!(positions.len(), set.ambient_dim);
        for i in 0..set.a.rows {
            let mut row = vec![Rat::zero(); self.ambient];
            for (j, &pos) in positions.iter().enumerate() {
                let v = set.a.get(i, j);
                if !v.is_zero() {
                    row[pos] = row[pos].clone() + v;
                }
            }
            self.rows.push(row);
            self.offsets.push(set.b[i].clone());
        }
        self.cones.extend(set.cones.iter().copied());
    }

    pub fn build(self) -> ConicSet {
        let a = if self.rows.is_empty() {
            RationalMatrix::zeros(0, self.ambient)
        } else {
            RationalMatrix::from_rows(self.rows).expect("consistent rows")
        };
        ConicSet {
            ambient_dim: self.ambient,
            a,
            b: self.offsets,
            cones: self.cones,
        }
    }
}

/// Outcome of the exact simplification pass over fixed coordinates.
pub enum Simplified {
    Empty,
    Set(ConicSet),
}

/// Rewrites second-order blocks that became decidable after substitution:
/// constant blocks are checked exactly, a rotated block with one vanished
/// product term turns into equalities, and a rotated block whose other
/// product term is a variable that appears only with nonnegative influence
/// elsewhere is dropped (the block can always be satisfied by pushing that
/// variable up). The result is polyhedral whenever these rules suffice.
pub fn simplify_conic(set: &ConicSet) -> Simplified {
    simplify_conic_keeping(set, &vec![false; set.ambient_dim])
}

/// Like [`simplify_conic`], but the drop rule never fires on a variable
/// marked `protected`. The drop preserves only the projection that forgets
/// the pushed variable, so any coordinate the caller intends to keep must be
/// protected here.
pub fn simplify_conic_keeping(set: &ConicSet, protected: &[bool]) -> Simplified {
    assert_eq!(protected.len(), set.ambient_dim);
    let mut rows = set.a.row_vecs();
    let mut offs = set.b.clone();
    let mut cones = set.cones.clone();

    loop {
        let mut changed = false;
        let mut new_rows: Vec<Vec<Rat>> = Vec::new();
        let mut new_offs: Vec<Rat> = Vec::new();
        let mut new_cones: Vec<ElementaryCone> = Vec::new();
        let mut offset = 0usize;

        // Column usage per variable over all *other* rows, for the drop rule:
        // usage[j] = (appears in zero/soc/rsoc rows, negative nonneg appearances).
        let block_spans: Vec<(usize, ElementaryCone)> = {
            let mut v = Vec::new();
            let mut o = 0;
            for c in &cones {
                v.push((o, *c));
                o += c.dim();
            }
            v
        };
        let row_is_nonneg: Vec<bool> = {
            let mut v = vec![false; rows.len()];
            for (o, c) in &block_spans {
                if matches!(c, ElementaryCone::Nonneg(_)) {
                    for i in *o..*o + c.dim() {
                        v[i] = true;
                    }
                }
            }
            v
        };

        let monotone_up_ok = |var: usize, skip_row: usize| -> bool {
            for (i, row) in rows.iter().enumerate() {
                if i == skip_row || row[var].is_zero() {
                    continue;
                }
                if !row_is_nonneg[i] || row[var].is_negative() {
                    return false;
                }
            }
            true
        };

        for (span_start, cone) in &block_spans {
            let o = *span_start;
            let m = cone.dim();
            let const_row =
                |i: usize| -> Option<&Rat> { rows[i].iter().all(|x| x.is_zero()).then(|| &offs[i]) };
            match cone {
                ElementaryCone::Zero(_) | ElementaryCone::Nonneg(_) => {
                    for i in o..o + m {
                        new_rows.push(rows[i].clone());
                        new_offs.push(offs[i].clone());
                    }
                    new_cones.push(*cone);
                }
                ElementaryCone::SecondOrder(_) => {
                    let all_const = (o..o + m).all(|i| const_row(i).is_some());
                    if all_const {
                        let vals: Vec<Rat> = (o..o + m).map(|i| offs[i].clone()).collect();
                        if !cone.contains(&vals) {
                            return Simplified::Empty;
                        }
                        changed = true;
                        continue;
                    }
                    let w_zero = (o + 1..o + m)
                        .all(|i| const_row(i).map(|c| c.is_zero()).unwrap_or(false));
                    if w_zero {
                        // ||0|| <= t is just t >= 0.
                        new_rows.push(rows[o].clone());
                        new_offs.push(offs[o].clone());
                        new_cones.push(ElementaryCone::Nonneg(1));
                        changed = true;
                        continue;
                    }
                    if let Some(t) = const_row(o) {
                        if t.is_zero() {
                            for i in o + 1..o + m {
                                new_rows.push(rows[i].clone());
                                new_offs.push(offs[i].clone());
                            }
                            new_cones.push(ElementaryCone::Zero(m - 1));
                            changed = true;
                            continue;
                        }
                        if t.is_negative() {
                            return Simplified::Empty;
                        }
                    }
                    for i in o..o + m {
                        new_rows.push(rows[i].clone());
                        new_offs.push(offs[i].clone());
                    }
                    new_cones.push(*cone);
                }
                ElementaryCone::RotatedSecondOrder(_) => {
                    let u_const = const_row(o).cloned();
                    let v_const = const_row(o + 1).cloned();
                    if let Some(c) = &u_const {
                        if c.is_negative() {
                            return Simplified::Empty;
                        }
                    }
                    if let Some(c) = &v_const {
                        if c.is_negative() {
                            return Simplified::Empty;
                        }
                    }
                    let w_all_const = (o + 2..o + m).all(|i| const_row(i).is_some());
                    if w_all_const && u_const.is_some() && v_const.is_some() {
                        let vals: Vec<Rat> = (o..o + m).map(|i| offs[i].clone()).collect();
                        if !cone.contains(&vals) {
                            return Simplified::Empty;
                        }
                        changed = true;
                        continue;
                    }
                    let zero_side = match (&u_const, &v_const) {
                        (Some(c), _) if c.is_zero() => Some(o + 1),
                        (_, Some(c)) if c.is_zero() => Some(o),
                        _ => None,
                    };
                    if let Some(other) = zero_side {
                        // One product term is exactly zero: w must vanish and
                        // the other term only needs nonnegativity.
                        for i in o + 2..o + m {
                            new_rows.push(rows[i].clone());
                            new_offs.push(offs[i].clone());
                        }
                        if m > 2 {
                            new_cones.push(ElementaryCone::Zero(m - 2));
                        }
                        new_rows.push(rows[other].clone());
                        new_offs.push(offs[other].clone());
                        new_cones.push(ElementaryCone::Nonneg(1));
                        changed = true;
                        continue;
                    }
                    let w_zero = (o + 2..o + m)
                        .all(|i| const_row(i).map(|c| c.is_zero()).unwrap_or(false));
                    if w_zero {
                        for i in [o, o + 1] {
                            new_rows.push(rows[i].clone());
                            new_offs.push(offs[i].clone());
                            new_cones.push(ElementaryCone::Nonneg(1));
                        }
                        changed = true;
                        continue;
                    }
                    // Drop rule: one term is a positive constant and the other
                    // is a single variable that can grow freely.
                    let mut dropped = false;
                    for (const_side, var_side) in [(o, o + 1), (o + 1, o)] {
                        let Some(c) = const_row(const_side) else {
                            continue;
                        };
                        if !c.is_positive() {
                            continue;
                        }
                        let nz: Vec<usize> = (0..set.ambient_dim)
                            .filter(|&j| !rows[var_side][j].is_zero())
                            .collect();
                        if nz.len() == 1
                            && !protected[nz[0]]
                            && rows[var_side][nz[0]].is_positive()
                            && monotone_up_ok(nz[0], var_side)
                        {
                            dropped = true;
                        }
                        break;
                    }
                    if dropped {
                        changed = true;
                        continue;
                    }
                    for i in o..o + m {
                        new_rows.push(rows[i].clone());
                        new_offs.push(offs[i].clone());
                    }
                    new_cones.push(*cone);
                }
            }
            offset += m;
        }
        let _ = offset;

        rows = new_rows;
        offs = new_offs;
        cones = new_cones;
        if !changed {
            break;
        }
    }

    let a = if rows.is_empty() {
        RationalMatrix::zeros(0, set.ambient_dim)
    } else {
        RationalMatrix::from_rows(rows).expect("consistent rows")
    };
    Simplified::Set(ConicSet {
        ambient_dim: set.ambient_dim,
        a,
        b: offs,
        cones,
    })
}
