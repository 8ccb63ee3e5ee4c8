//! Exact polyhedra in inequality form, Fourier-Motzkin projection, and
//! desk-scale vertex/ray enumeration.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{
    common_denominator, dot, gcd_vector, primitive_direction, Int, Rat, RationalMatrix,
};

pub const DEFAULT_ROW_CAP: usize = 10_000;
const ENUM_DIM_CAP: usize = 8;
const ENUM_COMBO_CAP: u128 = 2_000_000;

/// `{ x : a_i . x <= b_i, e_j . x = f_j }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronH {
    pub dim: usize,
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
    pub eqs: Vec<(Vec<Rat>, Rat)>,
}

/// Generator form: convex hull of `vertices` plus the cone of `rays`.
/// Lineality is carried as opposite ray pairs; for polyhedra with lineality
/// the "vertices" are representatives of the minimal faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronV {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
}

pub enum LinearMax {
    Finite(Rat),
    Unbounded,
}

/// Scales an inequality to primitive integer coefficients, preserving
/// orientation. Returns `None` for a tautological constant row and a
/// canonical contradiction marker for an infeasible constant row.
fn normalize_ineq(row: &[Rat], rhs: &Rat) -> Option<(Vec<Int>, Rat)> {
    if row.iter().all(|x| x.is_zero()) {
        if rhs.is_negative() {
            return Some((vec![Int::zero(); row.len()], -Rat::one()));
        }
        return None;
    }
    let den = common_denominator(row);
    let ints: Vec<Int> = row.iter().map(|x| (x * &den).to_integer()).collect();
    let g = gcd_vector(&ints).expect("nonempty");
    let scaled: Vec<Int> = ints.iter().map(|x| x / &g).collect();
    let scale = Rat::new(den.clone(), g);
    Some((scaled, rhs * scale))
}

fn normalize_eq(row: &[Rat], rhs: &Rat) -> Option<(Vec<Int>, Rat)> {
    if row.iter().all(|x| x.is_zero()) {
        if rhs.is_zero() {
            return None;
        }
        let mut marker = vec![Int::zero(); row.len()];
        if !marker.is_empty() {
            marker[0] = Int::zero();
        }
        return Some((marker, Rat::one()));
    }
    let (mut ints, mut b) = normalize_ineq(row, rhs).expect("nonzero row");
    let lead = ints.iter().find(|x| !x.is_zero()).expect("nonzero");
    if lead.is_negative() {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
        b = -b;
    }
    Some((ints, b))
}

impl PolyhedronH {
    pub fn new(
        dim: usize,
        ineqs: Vec<(Vec<Rat>, Rat)>,
        eqs: Vec<(Vec<Rat>, Rat)>,
    ) -> Result<Self> {
        for (a, _) in ineqs.iter().chain(eqs.iter()) {
            if a.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row has {} coefficients for dimension {}",
                    a.len(),
                    dim
                )));
            }
        }
        Ok(PolyhedronH { dim, ineqs, eqs })
    }

    pub fn whole_space(dim: usize) -> Self {
        PolyhedronH {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    /// Axis-aligned box, inclusive bounds.
    pub fn from_box(bounds: &[(Rat, Rat)]) -> Self {
        let dim = bounds.len();
        let mut ineqs = Vec::new();
        for (j, (lo, hi)) in bounds.iter().enumerate() {
            let mut row = vec![Rat::zero(); dim];
            row[j] = -Rat::one();
            ineqs.push((row.clone(), -lo.clone()));
            let mut row = vec![Rat::zero(); dim];
            row[j] = Rat::one();
            ineqs.push((row, hi.clone()));
        }
        PolyhedronH {
            dim,
            ineqs,
            eqs: Vec::new(),
        }
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch("point dimension".into()));
        }
        Ok(self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.eqs.iter().all(|(e, f)| dot(e, x) == *f))
    }

    /// Syntactic cleanup: primitive scaling, duplicate removal, and pairwise
    /// dominance on identical coefficient vectors.
    pub fn canonicalized(&self) -> PolyhedronH {
        use std::collections::BTreeMap;
        let mut best: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
        for (a, b) in &self.ineqs {
            if let Some((k, v)) = normalize_ineq(a, b) {
                match best.get(&k) {
                    Some(cur) if *cur <= v => {}
                    _ => {
                        best.insert(k, v);
                    }
                }
            }
        }
        let ineqs = best
            .into_iter()
            .map(|(k, v)| {
                (
                    k.into_iter().map(Rat::from_integer).collect::<Vec<_>>(),
                    v,
                )
            })
            .collect();
        let mut eqset: BTreeSet<(Vec<Int>, Rat)> = BTreeSet::new();
        for (e, f) in &self.eqs {
            if let Some(kv) = normalize_eq(e, f) {
                eqset.insert(kv);
            }
        }
        let eqs = eqset
            .into_iter()
            .map(|(k, v)| {
                (
                    k.into_iter().map(Rat::from_integer).collect::<Vec<_>>(),
                    v,
                )
            })
            .collect();
        PolyhedronH {
            dim: self.dim,
            ineqs,
            eqs,
        }
    }

    /// Eliminates one variable. Uses an equality pivot when available,
    /// otherwise the classic positive/negative row pairing.
    fn eliminate_var(&self, j: usize, cap: usize) -> Result<PolyhedronH> {
        let mut out_ineqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut out_eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();

        let drop_coord = |v: &[Rat]| -> Vec<Rat> {
            v.iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, x)| x.clone())
                .collect()
        };

        if let Some(pidx) = self.eqs.iter().position(|(e, _)| !e[j].is_zero()) {
            let (pe, pf) = &self.eqs[pidx];
            let pj = pe[j].clone();
            let substitute = |(a, b): (&Vec<Rat>, &Rat)| -> (Vec<Rat>, Rat) {
                let factor = a[j].clone() / pj.clone();
                let row: Vec<Rat> = a
                    .iter()
                    .zip(pe)
                    .map(|(x, y)| x - &factor * y)
                    .collect();
                (drop_coord(&row), b - &factor * pf)
            };
            for (i, eq) in self.eqs.iter().enumerate() {
                if i == pidx {
                    continue;
                }
                out_eqs.push(substitute((&eq.0, &eq.1)));
            }
            for iq in &self.ineqs {
                out_ineqs.push(substitute((&iq.0, &iq.1)));
            }
        } else {
            for (e, f) in &self.eqs {
                out_eqs.push((drop_coord(e), f.clone()));
            }
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for (a, b) in &self.ineqs {
                if a[j].is_positive() {
                    pos.push((a, b));
                } else if a[j].is_negative() {
                    neg.push((a, b));
                } else {
                    out_ineqs.push((drop_coord(a), b.clone()));
                }
            }
            if pos.len() * neg.len() + out_ineqs.len() > cap {
                return Err(Error::RowCap(pos.len() * neg.len() + out_ineqs.len()));
            }
            for (pa, pb) in &pos {
                for (na, nb) in &neg {
                    let pc = pa[j].clone();
                    let nc = -na[j].clone();
                    // nc * (pa.x) + pc * (na.x) has zero coefficient on j.
                    let row: Vec<Rat> = pa
                        .iter()
                        .zip(na.iter())
                        .map(|(x, y)| &nc * x + &pc * y)
                        .collect();
                    let rhs = &nc * *pb + &pc * *nb;
                    out_ineqs.push((drop_coord(&row), rhs));
                }
            }
        }
        let p = PolyhedronH {
            dim: self.dim - 1,
            ineqs: out_ineqs,
            eqs: out_eqs,
        }
        .canonicalized();
        if p.ineqs.len() > cap {
            return Err(Error::RowCap(p.ineqs.len()));
        }
        Ok(p)
    }

    /// Exact projection onto the listed coordinates (in their current order).
    pub fn fm_project(&self, keep: &[usize]) -> Result<PolyhedronH> {
        self.fm_project_with_cap(keep, DEFAULT_ROW_CAP)
    }

    pub fn fm_project_with_cap(&self, keep: &[usize], cap: usize) -> Result<PolyhedronH> {
        let keep_set: BTreeSet<usize> = keep.iter().copied().collect();
        if keep_set.len() != keep.len() || keep.iter().any(|&k| k >= self.dim) {
            return Err(Error::Invalid("bad projection coordinate list".into()));
        }
        if !keep.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "projection coordinates must be strictly increasing".into(),
            ));
        }
        let mut cur = self.canonicalized();
        // Track original coordinate identity of each remaining column.
        let mut cols: Vec<usize> = (0..self.dim).collect();
        loop {
            let Some(pos) = cols.iter().position(|c| !keep_set.contains(c)) else {
                break;
            };
            // Among all droppable columns choose the cheapest elimination.
            let mut target = pos;
            let mut target_cost: Option<usize> = None;
            for (p, c) in cols.iter().enumerate() {
                if keep_set.contains(c) {
                    continue;
                }
                let in_eq = cur.eqs.iter().any(|(e, _)| !e[p].is_zero());
                let cost = if in_eq {
                    0
                } else {
                    let pos_c = cur.ineqs.iter().filter(|(a, _)| a[p].is_positive()).count();
                    let neg_c = cur.ineqs.iter().filter(|(a, _)| a[p].is_negative()).count();
                    1 + pos_c * neg_c
                };
                if target_cost.map(|t| cost < t).unwrap_or(true) {
                    target = p;
                    target_cost = Some(cost);
                }
            }
            cur = cur.eliminate_var(target, cap)?;
            cols.remove(target);
        }
        debug_assert_eq!(cols, keep);
        Ok(cur)
    }

    /// Exact emptiness via full elimination.
    pub fn is_empty(&self) -> Result<bool> {
        let collapsed = self.fm_project(&[])?;
        // After eliminating every variable only constant rows remain; the
        // canonical form keeps them only when contradictory.
        Ok(!collapsed.ineqs.is_empty() || !collapsed.eqs.is_empty())
    }

    /// Stacked coefficient matrix of all rows (equalities and inequalities).
    fn all_rows_matrix(&self) -> Option<RationalMatrix> {
        let rows: Vec<Vec<Rat>> = self
            .eqs
            .iter()
            .map(|(e, _)| e.clone())
            .chain(self.ineqs.iter().map(|(a, _)| a.clone()))
            .collect();
        if rows.is_empty() {
            None
        } else {
            Some(RationalMatrix::from_rows(rows).expect("consistent"))
        }
    }

    /// Basis of the lineality space.
    pub fn lineality_space(&self) -> Vec<Vec<Rat>> {
        match self.all_rows_matrix() {
            None => RationalMatrix::identity(self.dim).row_vecs(),
            Some(m) => m.nullspace(),
        }
    }

    /// Representative points of the minimal faces (the vertices when the
    /// polyhedron is pointed), found by exhausting maximal-rank active sets.
    pub fn minimal_face_points(&self) -> Result<Vec<Vec<Rat>>> {
        if self.dim > ENUM_DIM_CAP {
            return Err(Error::DeskScale(format!(
                "face enumeration limited to dimension {ENUM_DIM_CAP}"
            )));
        }
        let p = self.canonicalized();
        if p.eqs.is_empty() && p.ineqs.is_empty() {
            return Ok(vec![vec![Rat::zero(); p.dim]]);
        }
        let lin = p.lineality_space().len();
        let target = p.dim - lin;

        let eq_rows: Vec<(Vec<Rat>, Rat)> = p.eqs.clone();
        let m = p.ineqs.len();
        let eq_rank = if eq_rows.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(eq_rows.iter().map(|(e, _)| e.clone()).collect())
                .expect("rows")
                .rank()
        };
        if eq_rank > target {
            return Err(Error::Internal("equality rank exceeds row rank".into()));
        }
        let need = target - eq_rank;
        check_combo_budget(m, need)?;

        let mut reps: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let mut combo = init_combo(need);
        loop {
            let Some(active) = next_combo(&mut combo, m, need) else {
                break;
            };
            let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(eq_rows.len() + need);
            let mut rhs: Vec<Rat> = Vec::new();
            for (e, f) in &eq_rows {
                rows.push(e.clone());
                rhs.push(f.clone());
            }
            for &i in &active {
                rows.push(p.ineqs[i].0.clone());
                rhs.push(p.ineqs[i].1.clone());
            }
            let mat = RationalMatrix::from_rows(rows).expect("rows");
            if mat.rank() != target {
                continue;
            }
            let Some(x) = mat.solve(&rhs) else {
                continue;
            };
            if p.contains(&x)? {
                reps.insert(x);
            }
        }
        Ok(reps.into_iter().collect())
    }

    /// Extreme-ray representatives of the recession cone, modulo lineality.
    fn extreme_ray_points(&self) -> Result<Vec<Vec<Rat>>> {
        if self.dim > ENUM_DIM_CAP {
            return Err(Error::DeskScale(format!(
                "ray enumeration limited to dimension {ENUM_DIM_CAP}"
            )));
        }
        let p = self.canonicalized();
        let lineality = p.lineality_space();
        let lin = lineality.len();
        let target = p.dim - lin;
        if target == 0 {
            return Ok(Vec::new());
        }
        let eq_rows: Vec<Vec<Rat>> = p.eqs.iter().map(|(e, _)| e.clone()).collect();
        let eq_rank = if eq_rows.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(eq_rows.clone()).expect("rows").rank()
        };
        let m = p.ineqs.len();
        if target - eq_rank == 0 {
            return Ok(Vec::new());
        }
        let need = target - eq_rank - 1;
        check_combo_budget(m, need)?;

        let rec_ok = |d: &[Rat]| -> bool {
            p.ineqs.iter().all(|(a, _)| !dot(a, d).is_positive())
                && p.eqs.iter().all(|(e, _)| dot(e, d).is_zero())
        };

        let mut rays: BTreeSet<Vec<Int>> = BTreeSet::new();
        let mut combo = init_combo(need);
        loop {
            let Some(active) = next_combo(&mut combo, m, need) else {
                break;
            };
            let mut rows: Vec<Vec<Rat>> = eq_rows.clone();
            for &i in &active {
                rows.push(p.ineqs[i].0.clone());
            }
            if rows.is_empty() {
                // Whole space modulo lineality is one-dimensional.
                rows.push(vec![Rat::zero(); p.dim]);
            }
            let mat = RationalMatrix::from_rows(rows).expect("rows");
            if mat.rank() != target - 1 {
                continue;
            }
            let null = mat.nullspace();
            // Remove lineality components to find the genuine direction.
            for v in quotient_directions(&null, &lineality) {
                for cand in [v.clone(), v.iter().map(|x| -x.clone()).collect::<Vec<_>>()] {
                    if rec_ok(&cand) {
                        if let Ok(prim) = primitive_direction(&cand) {
                            rays.insert(prim);
                        }
                    }
                }
            }
        }
        Ok(rays
            .into_iter()
            .map(|r| r.into_iter().map(Rat::from_integer).collect())
            .collect())
    }

    /// Full generator decomposition. Lineality directions are reported as
    /// opposite ray pairs.
    pub fn vertices_and_rays(&self) -> Result<PolyhedronV> {
        let vertices = self.minimal_face_points()?;
        if vertices.is_empty() {
            return Ok(PolyhedronV {
                vertices,
                rays: Vec::new(),
            });
        }
        let mut rays = self.extreme_ray_points()?;
        for l in self.lineality_space() {
            let prim = primitive_direction(&l)?;
            let as_rat: Vec<Rat> = prim.iter().cloned().map(Rat::from_integer).collect();
            let neg: Vec<Rat> = as_rat.iter().map(|x| -x.clone()).collect();
            rays.push(as_rat);
            rays.push(neg);
        }
        rays.sort();
        rays.dedup();
        Ok(PolyhedronV { vertices, rays })
    }

    /// Exact maximum of `c . x` via the generator form.
    pub fn linear_max(&self, c: &[Rat]) -> Result<LinearMax> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch("objective dimension".into()));
        }
        let v = self.vertices_and_rays()?;
        if v.vertices.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        if v.rays.iter().any(|r| dot(c, r).is_positive()) {
            return Ok(LinearMax::Unbounded);
        }
        let best = v
            .vertices
            .iter()
            .map(|x| dot(c, x))
            .max()
            .expect("nonempty");
        Ok(LinearMax::Finite(best))
    }

    /// `self` is a subset of `other`, decided row by row through exact
    /// optimization (valid for arbitrary closed polyhedra).
    pub fn subset_of(&self, other: &PolyhedronH) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("subset test dimensions".into()));
        }
        if self.is_empty()? {
            return Ok(true);
        }
        for (a, b) in &other.ineqs {
            match self.linear_max(a)? {
                LinearMax::Unbounded => return Ok(false),
                LinearMax::Finite(v) => {
                    if v > *b {
                        return Ok(false);
                    }
                }
            }
        }
        for (e, f) in &other.eqs {
            match self.linear_max(e)? {
                LinearMax::Unbounded => return Ok(false),
                LinearMax::Finite(v) => {
                    if v != *f {
                        return Ok(false);
                    }
                }
            }
            let neg: Vec<Rat> = e.iter().map(|x| -x.clone()).collect();
            match self.linear_max(&neg)? {
                LinearMax::Unbounded => return Ok(false),
                LinearMax::Finite(v) => {
                    if v != -f {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn set_equal(&self, other: &PolyhedronH) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }
}

fn check_combo_budget(m: usize, k: usize) -> Result<()> {
    let mut total: u128 = 1;
    for i in 0..k {
        total = total.saturating_mul((m - i) as u128) / (i as u128 + 1);
        if total > ENUM_COMBO_CAP {
            return Err(Error::DeskScale(format!(
                "active-set enumeration over {m} rows choose {k} exceeds budget"
            )));
        }
    }
    if m < k {
        return Err(Error::DeskScale("fewer rows than required rank".into()));
    }
    Ok(())
}

fn init_combo(k: usize) -> Option<Vec<usize>> {
    let _ = k;
    None
}

/// Streams k-subsets of 0..m in lexicographic order.
fn next_combo(state: &mut Option<Vec<usize>>, m: usize, k: usize) -> Option<Vec<usize>> {
    match state {
        None => {
            if k > m {
                return None;
            }
            let first: Vec<usize> = (0..k).collect();
            *state = Some(first.clone());
            Some(first)
        }
        Some(cur) => {
            if k == 0 {
                return None;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if cur[i] != i + m - k {
                    break;
                }
            }
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
            Some(cur.clone())
        }
    }
}

/// Reduces `basis` against `lineality` and returns the directions that
/// remain nonzero, i.e. genuine directions modulo the lineality space.
fn quotient_directions(basis: &[Vec<Rat>], lineality: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let dim = basis[0].len();
    let mut rows: Vec<Vec<Rat>> = lineality.to_vec();
    let mut out = Vec::new();
    for cand in basis {
        let mut stacked = rows.clone();
        stacked.push(cand.clone());
        let before = if rows.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(rows.clone()).expect("rows").rank()
        };
        let after = RationalMatrix::from_rows(stacked.clone())
            .expect("rows")
            .rank();
        if after > before {
            out.push(cand.clone());
            rows.push(cand.clone());
        }
    }
    let _ = dim;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn interval_band() -> PolyhedronH {
        // x <= z, z <= x + 1, 0 <= z <= 2 over (x, z).
        PolyhedronH::new(
            2,
            vec![
                (vec![rint(1), rint(-1)], rint(0)),
                (vec![rint(-1), rint(1)], rint(1)),
                (vec![rint(0), rint(-1)], rint(0)),
                (vec![rint(0), rint(1)], rint(2)),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn fm_projects_band_to_interval() {
        let p = interval_band().fm_project(&[0]).unwrap();
        assert!(p.contains(&[rint(-1)]).unwrap());
        assert!(p.contains(&[rint(2)]).unwrap());
        assert!(!p.contains(&[rat(-101, 100)]).unwrap());
        assert!(!p.contains(&[rat(201, 100)]).unwrap());
    }

    #[test]
    fn fm_projection_is_exact_on_grid() {
        // Oracle: brute-force feasibility on a 1/4-step grid for a random-ish
        // fixed 3-variable system, compared against the projected rows.
        let p = PolyhedronH::new(
            3,
            vec![
                (vec![rint(1), rint(1), rint(1)], rint(2)),
                (vec![rint(-1), rint(2), rint(0)], rint(1)),
                (vec![rint(0), rint(-1), rint(1)], rint(0)),
                (vec![rint(0), rint(0), rint(-1)], rint(1)),
                (vec![rint(1), rint(-1), rint(-1)], rint(3)),
            ],
            vec![],
        )
        .unwrap();
        let proj = p.fm_project(&[0, 1]).unwrap();
        let step = rat(1, 4);
        for i in -12..=12 {
            for j in -12..=12 {
                let x = rint(i) * step.clone();
                let y = rint(j) * step.clone();
                // z feasibility scan over the same grid plus wide endpoints.
                let mut feasible = false;
                for k in -40..=40 {
                    let z = rint(k) * step.clone();
                    if p.contains(&[x.clone(), y.clone(), z]).unwrap() {
                        feasible = true;
                        break;
                    }
                }
                let projected = proj.contains(&[x, y]).unwrap();
                // Grid witnesses can only under-approximate the projection.
                if feasible {
                    assert!(projected);
                }
                if !projected {
                    assert!(!feasible);
                }
            }
        }
    }

    #[test]
    fn fm_idempotent_and_permutation_stable() {
        let p = interval_band();
        let once = p.fm_project(&[0]).unwrap();
        let twice = once.fm_project(&[0]).unwrap();
        assert!(once.set_equal(&twice).unwrap());
    }

    #[test]
    fn empty_detection() {
        let p = PolyhedronH::new(
            1,
            vec![
                (vec![rint(1)], rint(0)),
                (vec![rint(-1)], rint(-1)),
            ],
            vec![],
        )
        .unwrap();
        assert!(p.is_empty().unwrap());
        assert!(!interval_band().is_empty().unwrap());
    }

    #[test]
    fn unit_square_generators() {
        let square = PolyhedronH::from_box(&[(rint(0), rint(1)), (rint(0), rint(1))]);
        let v = square.vertices_and_rays().unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty());
        let expect: BTreeSet<Vec<Rat>> = [
            vec![rint(0), rint(0)],
            vec![rint(0), rint(1)],
            vec![rint(1), rint(0)],
            vec![rint(1), rint(1)],
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Vec<Rat>> = v.vertices.into_iter().collect();
        assert_eq!(expect, got);
    }

    #[test]
    fn halfline_generators() {
        // x >= 0 in one variable.
        let p = PolyhedronH::new(1, vec![(vec![rint(-1)], rint(0))], vec![]).unwrap();
        let v = p.vertices_and_rays().unwrap();
        assert_eq!(v.vertices, vec![vec![rint(0)]]);
        assert_eq!(v.rays, vec![vec![rint(1)]]);
    }

    #[test]
    fn lineality_reported_as_ray_pairs() {
        // Vertical strip: 0 <= x <= 1, y free.
        let p = PolyhedronH::new(
            2,
            vec![
                (vec![rint(-1), rint(0)], rint(0)),
                (vec![rint(1), rint(0)], rint(1)),
            ],
            vec![],
        )
        .unwrap();
        let v = p.vertices_and_rays().unwrap();
        assert!(!v.vertices.is_empty());
        let rayset: BTreeSet<Vec<Rat>> = v.rays.into_iter().collect();
        assert!(rayset.contains(&vec![rint(0), rint(1)]));
        assert!(rayset.contains(&vec![rint(0), rint(-1)]));
    }

    #[test]
    fn generators_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let dim = rng.gen_range(1..=3);
            let rows = rng.gen_range(2..=6);
            let mut ineqs = Vec::new();
            for _ in 0..rows {
                let a: Vec<Rat> = (0..dim).map(|_| rint(rng.gen_range(-3..=3))).collect();
                if a.iter().all(|x| x.is_zero()) {
                    continue;
                }
                ineqs.push((a, rint(rng.gen_range(0..=4))));
            }
            // Keep things bounded-ish with a box.
            let mut p = PolyhedronH::from_box(&vec![(rint(-5), rint(5)); dim]);
            p.ineqs.extend(ineqs);
            if p.is_empty().unwrap() {
                continue;
            }
            let v = p.vertices_and_rays().unwrap();
            // Every vertex satisfies the rows; random hull samples stay inside.
            for vertex in &v.vertices {
                assert!(p.contains(vertex).unwrap());
            }
            if v.vertices.len() >= 2 {
                let a = &v.vertices[0];
                let b = &v.vertices[1];
                let mid: Vec<Rat> = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x + y) / rint(2))
                    .collect();
                assert!(p.contains(&mid).unwrap());
            }
        }
    }

    #[test]
    fn linear_max_cases() {
        let square = PolyhedronH::from_box(&[(rint(0), rint(1)), (rint(0), rint(1))]);
        match square.linear_max(&[rint(1), rint(2)]).unwrap() {
            LinearMax::Finite(v) => assert_eq!(v, rint(3)),
            _ => panic!("bounded"),
        }
        let halfline = PolyhedronH::new(1, vec![(vec![rint(-1)], rint(0))], vec![]).unwrap();
        assert!(matches!(
            halfline.linear_max(&[rint(1)]).unwrap(),
            LinearMax::Unbounded
        ));
        match halfline.linear_max(&[rint(-1)]).unwrap() {
            LinearMax::Finite(v) => assert_eq!(v, rint(0)),
            _ => panic!("bounded below direction"),
        }
        let empty = PolyhedronH::new(
            1,
            vec![(vec![rint(1)], rint(-1)), (vec![rint(-1)], rint(0))],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            empty.linear_max(&[rint(1)]),
            Err(Error::EmptyPolyhedron)
        ));
    }

    #[test]
    fn subset_checks() {
        let unit = PolyhedronH::from_box(&[(rint(0), rint(1))]);
        let wide = PolyhedronH::from_box(&[(rint(-1), rint(2))]);
        assert!(unit.subset_of(&wide).unwrap());
        assert!(!wide.subset_of(&unit).unwrap());
        assert!(unit.set_equal(&unit.canonicalized()).unwrap());
    }
}
