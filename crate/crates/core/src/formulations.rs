//! Mixed-integer conic formulations over exact rationals: slicing along the
//! integer block, index-set projection, disjunction builders, ideality
//! checks, index reindexing, and decompositions of bounded generator forms.
//!
//! A formulation describes `S = { x : (x, y, z) in M, z integral }` where `M`
//! is a [`ConicSet`] over the stacked variables `x | y | z`. All operations
//! here are exact; nothing is sampled or rounded.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};

use crate::cones::{simplify_conic_keeping, ConicBuilder, ConicSet, ElementaryCone, Simplified};
use crate::error::{Error, Result};
use crate::polyhedron::{LinearMax, PolyhedronH};
use crate::rational::{Int, IntegerMatrix, Rat, RationalMatrix};

/// A set `M` together with the split of its coordinates into `n` output
/// variables, `p` continuous auxiliaries, and `d` trailing integer indices.
#[derive(Debug, Clone)]
pub struct MicpFormulation {
    pub set: ConicSet,
    pub n: usize,
    pub p: usize,
    pub d: usize,
    /// Short human-readable tag describing how the formulation was built.
    pub provenance: String,
    /// Non-fatal observations recorded by the builders.
    pub notes: Vec<String>,
}

/// One slice `A_z`: the x-projection of `M` at a fixed integer index.
#[derive(Debug, Clone)]
pub enum SliceSet {
    Empty,
    Polyhedral(PolyhedronH),
    /// The substituted set still has second-order blocks; it is returned over
    /// the full `(x, y)` space without projecting.
    Conic(ConicSet),
}

/// Slices indexed by their integer vector, over an explicit per-coordinate
/// search window.
#[derive(Debug, Clone)]
pub struct SliceFamily {
    pub window: Vec<(Int, Int)>,
    pub slices: BTreeMap<Vec<Int>, PolyhedronH>,
}

/// Outcome of the ideality check on the continuous relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealVerdict {
    /// Every minimal face of the relaxation has an integral index block.
    Ideal,
    /// Some minimal face carries a fractional index; a representative point
    /// of such a face is returned.
    NotIdeal { witness: Vec<Rat> },
    /// The lineality space moves the index block, so minimal faces do not pin
    /// the index to a single value.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Intersection,
    Product,
    MinkowskiSum,
}

/// Result of decomposing a bounded generator form plus integer recession
/// directions: finitely many polytope pieces and the directions themselves.
/// The represented set is the union of the pieces translated by nonnegative
/// integer combinations of `rays_x`.
#[derive(Debug, Clone)]
pub struct BoundedDecomposition {
    pub pieces: SliceFamily,
    pub rays_x: Vec<Vec<Int>>,
}

/// Roles of the remaining columns during the branch-and-project search.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Role {
    /// The coordinate whose attainable values are being collected.
    Target,
    /// Continuous auxiliary, free to take any feasible value.
    Free,
    /// Integer coordinate restricted to the closed window.
    Integer(Int, Int),
}

const PROPAGATE_SWEEPS: usize = 12;
const ENUM_SHORTCUT_CELLS: i64 = 4096;

impl MicpFormulation {
    pub fn new(
        set: ConicSet,
        n: usize,
        p: usize,
        d: usize,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if set.ambient_dim != n + p + d {
            return Err(Error::DimensionMismatch(format!(
                "set lives in dimension {} but n + p + d = {}",
                set.ambient_dim,
                n + p + d
            )));
        }
        Ok(MicpFormulation {
            set,
            n,
            p,
            d,
            provenance: provenance.into(),
            notes: Vec::new(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.n + self.p + self.d
    }

    fn x_cols(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    fn z_cols(&self) -> Vec<usize> {
        (self.n + self.p..self.ambient()).collect()
    }

    /// The x-projection of `M` at the fixed integer index `z`.
    pub fn slice(&self, z: &[Int]) -> Result<SliceSet> {
        if z.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "index has {} coordinates, formulation has d = {}",
                z.len(),
                self.d
            )));
        }
        let values: Vec<Rat> = z.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let sub = self.set.substitute_suffix(&values)?;
        let mut protected = vec![false; self.n + self.p];
        for flag in protected.iter_mut().take(self.n) {
            *flag = true;
        }
        let simp = match simplify_conic_keeping(&sub, &protected) {
            Simplified::Empty => return Ok(SliceSet::Empty),
            Simplified::Set(s) => s,
        };
        if !simp.is_polyhedral() {
            return Ok(SliceSet::Conic(simp));
        }
        let proj = simp.to_polyhedron()?.fm_project(&self.x_cols())?;
        if proj.is_empty()? {
            return Ok(SliceSet::Empty);
        }
        Ok(SliceSet::Polyhedral(proj))
    }

    /// Exact projection of `M` onto the index block. Only available when `M`
    /// is polyhedral.
    pub fn relaxed_index_set(&self) -> Result<PolyhedronH> {
        self.set.to_polyhedron()?.fm_project(&self.z_cols())
    }

    /// Integer bounding box of the index block of a linear outer relaxation
    /// of `M`. Exact for polyhedral `M`; a sound over-approximation when
    /// second-order blocks are present. Errors when some index direction is
    /// unbounded in the relaxation.
    pub fn default_z_window(&self) -> Result<Vec<(Int, Int)>> {
        let relax = relaxation_polyhedron(&self.set)?;
        let proj = relax.fm_project(&self.z_cols())?;
        window_box(&proj)
    }

    /// All nonempty slices with index inside the window. Requires every
    /// substituted slice to become polyhedral after simplification.
    pub fn enumerate_slices(&self, window: &[(Int, Int)]) -> Result<SliceFamily> {
        if window.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "window has {} ranges, formulation has d = {}",
                window.len(),
                self.d
            )));
        }
        let mut slices = BTreeMap::new();
        let mut suffix = Vec::new();
        self.enum_rec(&self.set, window, &mut suffix, &mut slices)?;
        Ok(SliceFamily {
            window: window.to_vec(),
            slices,
        })
    }

    fn enum_rec(
        &self,
        set: &ConicSet,
        window: &[(Int, Int)],
        suffix: &mut Vec<Int>,
        out: &mut BTreeMap<Vec<Int>, PolyhedronH>,
    ) -> Result<()> {
        let fixed = suffix.len();
        let remaining = self.d - fixed;
        if remaining == 0 {
            let mut protected = vec![false; self.n + self.p];
            for flag in protected.iter_mut().take(self.n) {
                *flag = true;
            }
            let simp = match simplify_conic_keeping(set, &protected) {
                Simplified::Empty => return Ok(()),
                Simplified::Set(s) => s,
            };
            if !simp.is_polyhedral() {
                return Err(Error::RequiresPolyhedral(
                    "slice keeps second-order rows after substitution".into(),
                ));
            }
            let proj = simp.to_polyhedron()?.fm_project(&self.x_cols())?;
            if !proj.is_empty()? {
                let mut z: Vec<Int> = suffix.clone();
                z.reverse();
                out.insert(z, proj);
            }
            return Ok(());
        }

        // Prune with interval propagation over a linear relaxation before
        // branching on the last remaining index coordinate.
        let mut roles: Vec<Role> = Vec::with_capacity(set.ambient_dim);
        for col in 0..set.ambient_dim {
            if col < self.n + self.p {
                roles.push(Role::Free);
            } else {
                let (lo, hi) = &window[col - self.n - self.p];
                roles.push(Role::Integer(lo.clone(), hi.clone()));
            }
        }
        let rows = relaxation_rows(set);
        if !propagate(&rows, &mut roles) {
            return Ok(());
        }
        let last = set.ambient_dim - 1;
        let Role::Integer(lo, hi) = roles[last].clone() else {
            unreachable!("last remaining coordinate is integer");
        };
        let mut v = lo;
        while v <= hi {
            let sub = set.substitute_suffix(&[Rat::from_integer(v.clone())])?;
            suffix.push(v.clone());
            self.enum_rec(&sub, window, suffix, out)?;
            suffix.pop();
            v += Int::one();
        }
        Ok(())
    }

    /// Exact membership of `x` in `S`, searching integer indices inside the
    /// window.
    pub fn member(&self, x: &[Rat], window: &[(Int, Int)]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, formulation has n = {}",
                x.len(),
                self.n
            )));
        }
        if window.len() != self.d {
            return Err(Error::DimensionMismatch(
                "window length differs from d".into(),
            ));
        }
        let mut cur = self.set.clone();
        for value in x {
            cur = substitute_coord(&cur, 0, value);
        }
        let mut roles = Vec::with_capacity(cur.ambient_dim);
        for col in 0..cur.ambient_dim {
            if col < self.p {
                roles.push(Role::Free);
            } else {
                let (lo, hi) = &window[col - self.p];
                roles.push(Role::Integer(lo.clone(), hi.clone()));
            }
        }
        explore_feasible(&cur, &roles)
    }

    /// For one-dimensional output sets: all integer members of `S` inside
    /// `[lo, hi]`, searching indices inside the window.
    pub fn integer_members_1d(
        &self,
        lo: &Int,
        hi: &Int,
        window: &[(Int, Int)],
    ) -> Result<BTreeSet<Int>> {
        if self.n != 1 {
            return Err(Error::Invalid(format!(
                "integer member enumeration needs n = 1, formulation has n = {}",
                self.n
            )));
        }
        if window.len() != self.d {
            return Err(Error::DimensionMismatch(
                "window length differs from d".into(),
            ));
        }
        let mut b = ConicBuilder::new(self.ambient());
        let positions: Vec<usize> = (0..self.ambient()).collect();
        b.embed(&self.set, &positions);
        b.nonneg_row(&[(0, Rat::one())], -Rat::from_integer(lo.clone()));
        b.nonneg_row(&[(0, -Rat::one())], Rat::from_integer(hi.clone()));
        let bounded = b.build();

        let mut roles = Vec::with_capacity(self.ambient());
        roles.push(Role::Target);
        for col in 1..self.ambient() {
            if col < 1 + self.p {
                roles.push(Role::Free);
            } else {
                let (wl, wh) = &window[col - 1 - self.p];
                roles.push(Role::Integer(wl.clone(), wh.clone()));
            }
        }
        let intervals = explore_intervals(&bounded, &roles)?;
        let mut members = BTreeSet::new();
        for (ilo, ihi) in intervals {
            let a = match ilo {
                Some(v) => {
                    let c = v.ceil().to_integer();
                    if c > *lo {
                        c
                    } else {
                        lo.clone()
                    }
                }
                None => lo.clone(),
            };
            let b = match ihi {
                Some(v) => {
                    let f = v.floor().to_integer();
                    if f < *hi {
                        f
                    } else {
                        hi.clone()
                    }
                }
                None => hi.clone(),
            };
            let mut v = a;
            while v <= b {
                members.insert(v.clone());
                v += Int::one();
            }
        }
        Ok(members)
    }

    /// Decides whether every minimal face of the polyhedral relaxation has an
    /// integral index block.
    pub fn check_ideal(&self) -> Result<IdealVerdict> {
        let poly = self.set.to_polyhedron()?;
        if self.d == 0 || poly.is_empty()? {
            return Ok(IdealVerdict::Ideal);
        }
        for dir in poly.lineality_space() {
            if dir[self.n + self.p..].iter().any(|v| !v.is_zero()) {
                return Ok(IdealVerdict::Indeterminate);
            }
        }
        for rep in poly.minimal_face_points()? {
            if rep[self.n + self.p..].iter().any(|v| !v.is_integer()) {
                return Ok(IdealVerdict::NotIdeal { witness: rep });
            }
        }
        Ok(IdealVerdict::Ideal)
    }

    /// Reindexes the integer block by `z = U w` for unimodular `U`; the new
    /// formulation indexes the same slices by `w = U^{-1} z`.
    pub fn reindex_unimodular(&self, u: &IntegerMatrix) -> Result<MicpFormulation> {
        if u.rows != self.d || u.cols != self.d {
            return Err(Error::DimensionMismatch(format!(
                "reindexing matrix is {}x{}, formulation has d = {}",
                u.rows, u.cols, self.d
            )));
        }
        if !u.is_unimodular() {
            return Err(Error::Invalid("reindexing matrix is not unimodular".into()));
        }
        let amb = self.ambient();
        let base = self.n + self.p;
        let ur = u.to_rational();
        let mut a = RationalMatrix::zeros(self.set.a.rows, amb);
        for i in 0..self.set.a.rows {
            for j in 0..base {
                a.set(i, j, self.set.a.get(i, j).clone());
            }
            for w in 0..self.d {
                let mut acc = Rat::zero();
                for k in 0..self.d {
                    acc += self.set.a.get(i, base + k) * ur.get(k, w);
                }
                a.set(i, base + w, acc);
            }
        }
        let set = ConicSet::new(amb, a, self.set.b.clone(), self.set.cones.clone())?;
        let mut out = MicpFormulation::new(
            set,
            self.n,
            self.p,
            self.d,
            format!("{} | reindexed", self.provenance),
        )?;
        out.notes = self.notes.clone();
        Ok(out)
    }

    /// Drops integrality of the first index coordinate, which becomes the
    /// last continuous auxiliary. The underlying set is unchanged.
    pub fn relax_first_integer(&self) -> Result<MicpFormulation> {
        if self.d == 0 {
            return Err(Error::Invalid("no integer coordinate to relax".into()));
        }
        let mut out = MicpFormulation::new(
            self.set.clone(),
            self.n,
            self.p + 1,
            self.d - 1,
            format!("{} | relaxed", self.provenance),
        )?;
        out.notes = self.notes.clone();
        Ok(out)
    }
}

/// Linear outer relaxation rows `(a, c)` meaning `a . v + c >= 0`. Zero rows
/// contribute both signs; second-order blocks contribute the standard
/// coordinatewise bounds implied by the cone.
fn relaxation_rows(set: &ConicSet) -> Vec<(Vec<Rat>, Rat)> {
    let mut out = Vec::new();
    let mut o = 0usize;
    let row = |i: usize| set.a.row(i).to_vec();
    let neg = |v: &[Rat]| -> Vec<Rat> { v.iter().map(|x| -x.clone()).collect() };
    let add = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    };
    let sub = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    };
    for cone in &set.cones {
        let m = cone.dim();
        match cone {
            ElementaryCone::Zero(_) => {
                for i in o..o + m {
                    out.push((row(i), set.b[i].clone()));
                    out.push((neg(&row(i)), -set.b[i].clone()));
                }
            }
            ElementaryCone::Nonneg(_) => {
                for i in o..o + m {
                    out.push((row(i), set.b[i].clone()));
                }
            }
            ElementaryCone::SecondOrder(_) => {
                let t = row(o);
                let tc = set.b[o].clone();
                out.push((t.clone(), tc.clone()));
                for i in o + 1..o + m {
                    let w = row(i);
                    let wc = &set.b[i];
                    out.push((sub(&t, &w), &tc - wc));
                    out.push((add(&t, &w), &tc + wc));
                }
            }
            ElementaryCone::RotatedSecondOrder(_) => {
                let u = row(o);
                let uc = set.b[o].clone();
                let v = row(o + 1);
                let vc = set.b[o + 1].clone();
                out.push((u.clone(), uc.clone()));
                out.push((v.clone(), vc.clone()));
                let uv = add(&u, &v);
                let uvc = &uc + &vc;
                for i in o + 2..o + m {
                    let w2: Vec<Rat> = row(i).iter().map(|x| x + x).collect();
                    let wc2 = &set.b[i] + &set.b[i];
                    out.push((sub(&uv, &w2), &uvc - &wc2));
                    out.push((add(&uv, &w2), &uvc + &wc2));
                }
            }
        }
        o += m;
    }
    out
}

fn relaxation_polyhedron(set: &ConicSet) -> Result<PolyhedronH> {
    let rows = relaxation_rows(set);
    let ineqs = rows
        .into_iter()
        .map(|(a, c)| (a.iter().map(|x| -x.clone()).collect(), c))
        .collect();
    PolyhedronH::new(set.ambient_dim, ineqs, Vec::new())
}

/// Integer bounding box of a polyhedron, one `(lo, hi)` pair per coordinate.
/// An empty input yields inverted ranges that enumerate nothing.
fn window_box(proj: &PolyhedronH) -> Result<Vec<(Int, Int)>> {
    if proj.is_empty()? {
        return Ok(vec![(Int::zero(), -Int::one()); proj.dim]);
    }
    let mut window = Vec::with_capacity(proj.dim);
    for j in 0..proj.dim {
        let mut e = vec![Rat::zero(); proj.dim];
        e[j] = Rat::one();
        let hi = match proj.linear_max(&e)? {
            LinearMax::Finite(v) => v.floor().to_integer(),
            LinearMax::Unbounded => {
                return Err(Error::InsufficientWindow(format!(
                    "index coordinate {} is unbounded above; pass an explicit window",
                    j
                )))
            }
        };
        e[j] = -Rat::one();
        let lo = match proj.linear_max(&e)? {
            LinearMax::Finite(v) => (-v).ceil().to_integer(),
            LinearMax::Unbounded => {
                return Err(Error::InsufficientWindow(format!(
                    "index coordinate {} is unbounded below; pass an explicit window",
                    j
                )))
            }
        };
        window.push((lo, hi));
    }
    Ok(window)
}

/// Fixes one coordinate to a value, producing a set over the remaining
/// coordinates with indices above `col` shifted down by one.
fn substitute_coord(set: &ConicSet, col: usize, value: &Rat) -> ConicSet {
    assert!(col < set.ambient_dim);
    let keep = set.ambient_dim - 1;
    let mut a = RationalMatrix::zeros(set.a.rows, keep);
    let mut b = set.b.clone();
    for i in 0..set.a.rows {
        let mut new_j = 0;
        for j in 0..set.ambient_dim {
            if j == col {
                let coef = set.a.get(i, j);
                if !coef.is_zero() {
                    b[i] += coef * value;
                }
            } else {
                a.set(i, new_j, set.a.get(i, j).clone());
                new_j += 1;
            }
        }
    }
    ConicSet {
        ambient_dim: keep,
        a,
        b,
        cones: set.cones.clone(),
    }
}

/// Interval propagation over relaxation rows. Tightens integer windows in
/// `roles` in place; returns `false` when some row or window is proved
/// infeasible.
fn propagate(rows: &[(Vec<Rat>, Rat)], roles: &mut [Role]) -> bool {
    let w = roles.len();
    let mut lo: Vec<Option<Rat>> = vec![None; w];
    let mut hi: Vec<Option<Rat>> = vec![None; w];
    for (j, role) in roles.iter().enumerate() {
        if let Role::Integer(l, h) = role {
            if l > h {
                return false;
            }
            lo[j] = Some(Rat::from_integer(l.clone()));
            hi[j] = Some(Rat::from_integer(h.clone()));
        }
    }

    for _ in 0..PROPAGATE_SWEEPS {
        let mut changed = false;
        for (a, c) in rows {
            let support: Vec<usize> = (0..w).filter(|&j| !a[j].is_zero()).collect();
            // Largest possible value of each term, when known.
            let mut unknown = Vec::new();
            let mut known_sum = Rat::zero();
            let mut term_max: Vec<Option<Rat>> = vec![None; support.len()];
            for (k, &j) in support.iter().enumerate() {
                let bound = if a[j].is_positive() { &hi[j] } else { &lo[j] };
                match bound {
                    Some(v) => {
                        let t = &a[j] * v;
                        known_sum += &t;
                        term_max[k] = Some(t);
                    }
                    None => unknown.push(k),
                }
            }
            match unknown.len() {
                0 => {
                    if (&known_sum + c).is_negative() {
                        return false;
                    }
                    for (k, &j) in support.iter().enumerate() {
                        let rest = &known_sum - term_max[k].as_ref().unwrap();
                        let bound = (-c - rest) / &a[j];
                        if !tighten(&mut lo, &mut hi, roles, j, bound, a[j].is_positive()) {
                            return false;
                        }
                        changed = true;
                    }
                }
                1 => {
                    let k = unknown[0];
                    let j = support[k];
                    let bound = (-c - &known_sum) / &a[j];
                    if !tighten(&mut lo, &mut hi, roles, j, bound, a[j].is_positive()) {
                        return false;
                    }
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    for (j, role) in roles.iter_mut().enumerate() {
        if let Role::Integer(l, h) = role {
            if let Some(v) = &lo[j] {
                let c = v.ceil().to_integer();
                if c > *l {
                    *l = c;
                }
            }
            if let Some(v) = &hi[j] {
                let f = v.floor().to_integer();
                if f < *h {
                    *h = f;
                }
            }
            if l > h {
                return false;
            }
        }
    }
    true
}

/// Applies `x_j >= bound` (when `positive`) or `x_j <= bound` to the working
/// interval, rounding for integer roles. Returns `false` on an empty window.
fn tighten(
    lo: &mut [Option<Rat>],
    hi: &mut [Option<Rat>],
    roles: &[Role],
    j: usize,
    bound: Rat,
    positive: bool,
) -> bool {
    let integral = matches!(roles[j], Role::Integer(_, _));
    if positive {
        let b = if integral {
            Rat::from_integer(bound.ceil().to_integer())
        } else {
            bound
        };
        if lo[j].as_ref().map_or(true, |cur| b > *cur) {
            lo[j] = Some(b);
        }
    } else {
        let b = if integral {
            Rat::from_integer(bound.floor().to_integer())
        } else {
            bound
        };
        if hi[j].as_ref().map_or(true, |cur| b < *cur) {
            hi[j] = Some(b);
        }
    }
    match (&lo[j], &hi[j]) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Partition of the columns into connectivity classes: linear rows connect
/// their support, second-order blocks connect the support of the whole
/// block. Isolated columns form singletons.
fn components(set: &ConicSet) -> Vec<Vec<usize>> {
    let w = set.ambient_dim;
    let mut dsu = Dsu::new(w);
    let mut o = 0usize;
    for cone in &set.cones {
        let m = cone.dim();
        if cone.is_polyhedral() {
            for i in o..o + m {
                let mut first: Option<usize> = None;
                for j in 0..w {
                    if !set.a.get(i, j).is_zero() {
                        match first {
                            Some(f) => dsu.union(f, j),
                            None => first = Some(j),
                        }
                    }
                }
            }
        } else {
            let mut first: Option<usize> = None;
            for i in o..o + m {
                for j in 0..w {
                    if !set.a.get(i, j).is_zero() {
                        match first {
                            Some(f) => dsu.union(f, j),
                            None => first = Some(j),
                        }
                    }
                }
            }
        }
        o += m;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..w {
        groups.entry(dsu.find(j)).or_default().push(j);
    }
    groups.into_values().collect()
}

/// Restriction of the set to one connectivity class. Rows supported outside
/// the class are dropped; constant rows were already checked by the caller's
/// simplification and propagation passes.
fn restrict_cols(set: &ConicSet, cols: &[usize], roles: &[Role]) -> (ConicSet, Vec<Role>) {
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (new_j, &j) in cols.iter().enumerate() {
        index.insert(j, new_j);
    }
    let remap = |i: usize| -> Option<Vec<(usize, Rat)>> {
        let mut entries = Vec::new();
        for j in 0..set.ambient_dim {
            let v = set.a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match index.get(&j) {
                Some(&nj) => entries.push((nj, v.clone())),
                None => return None,
            }
        }
        Some(entries)
    };
    let mut b = ConicBuilder::new(cols.len());
    let mut o = 0usize;
    for cone in &set.cones {
        let m = cone.dim();
        match cone {
            ElementaryCone::Zero(_) | ElementaryCone::Nonneg(_) => {
                for i in o..o + m {
                    if set.a.row(i).iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if let Some(entries) = remap(i) {
                        if matches!(cone, ElementaryCone::Zero(_)) {
                            b.zero_row(&entries, set.b[i].clone());
                        } else {
                            b.nonneg_row(&entries, set.b[i].clone());
                        }
                    }
                }
            }
            _ => {
                let support_in = (o..o + m).any(|i| {
                    (0..set.ambient_dim)
                        .any(|j| !set.a.get(i, j).is_zero() && index.contains_key(&j))
                });
                if !support_in {
                    continue;
                }
                let mut rows = Vec::with_capacity(m);
                let mut ok = true;
                for i in o..o + m {
                    match remap(i) {
                        Some(entries) => rows.push((entries, set.b[i].clone())),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                assert!(ok, "second-order block split across components");
                b.block(*cone, rows);
            }
        }
        o += m;
    }
    let sub_roles = cols.iter().map(|&j| roles[j].clone()).collect();
    (b.build(), sub_roles)
}

fn pick_integer_col(roles: &[Role]) -> Option<usize> {
    let mut best: Option<(Int, usize)> = None;
    for (j, role) in roles.iter().enumerate() {
        if let Role::Integer(l, h) = role {
            let width = h - l;
            let better = match &best {
                Some((bw, _)) => width < *bw || (width == *bw),
                None => true,
            };
            if better {
                best = Some((width, j));
            }
        }
    }
    best.map(|(_, j)| j)
}

fn integer_cols(roles: &[Role]) -> Vec<usize> {
    roles
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, Role::Integer(_, _)))
        .map(|(j, _)| j)
        .collect()
}

fn shortcut_cells(roles: &[Role], cols: &[usize]) -> Option<i64> {
    let mut cells: i64 = 1;
    for &j in cols {
        let Role::Integer(l, h) = &roles[j] else {
            return None;
        };
        let width = h - l + Int::one();
        let width: i64 = i64::try_from(&width).ok()?;
        cells = cells.checked_mul(width)?;
        if cells > ENUM_SHORTCUT_CELLS {
            return None;
        }
    }
    Some(cells)
}

fn h_substitute_last(p: &PolyhedronH, v: &Rat) -> PolyhedronH {
    let m = p.dim - 1;
    let conv = |rows: &[(Vec<Rat>, Rat)]| -> Vec<(Vec<Rat>, Rat)> {
        rows.iter()
            .map(|(a, b)| (a[..m].to_vec(), b - &a[m] * v))
            .collect()
    };
    PolyhedronH {
        dim: m,
        ineqs: conv(&p.ineqs),
        eqs: conv(&p.eqs),
    }
}

fn h_consistent_const(p: &PolyhedronH) -> bool {
    p.ineqs.iter().all(|(_, b)| !b.is_negative()) && p.eqs.iter().all(|(_, f)| f.is_zero())
}

/// Attainable interval of the single remaining coordinate, or `None` when
/// the one-dimensional system is infeasible. `None` endpoints are unbounded.
fn h_interval_1d(p: &PolyhedronH) -> Option<(Option<Rat>, Option<Rat>)> {
    debug_assert_eq!(p.dim, 1);
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let raise = |lo: &mut Option<Rat>, v: Rat| {
        if lo.as_ref().map_or(true, |cur| v > *cur) {
            *lo = Some(v);
        }
    };
    for (a, b) in &p.ineqs {
        let c = &a[0];
        if c.is_zero() {
            if b.is_negative() {
                return None;
            }
        } else if c.is_positive() {
            let v = b / c;
            if hi.as_ref().map_or(true, |cur| v < *cur) {
                hi = Some(v);
            }
        } else {
            raise(&mut lo, b / c);
        }
    }
    for (e, f) in &p.eqs {
        let c = &e[0];
        if c.is_zero() {
            if !f.is_zero() {
                return None;
            }
        } else {
            let v = f / c;
            raise(&mut lo, v.clone());
            if hi.as_ref().map_or(true, |cur| v < *cur) {
                hi = Some(v);
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

fn enum_h_feasible(p: &PolyhedronH, wins: &[(Int, Int)]) -> bool {
    if wins.is_empty() {
        return h_consistent_const(p);
    }
    let (lo, hi) = &wins[wins.len() - 1];
    let mut v = lo.clone();
    while v <= *hi {
        let sub = h_substitute_last(p, &Rat::from_integer(v.clone()));
        if enum_h_feasible(&sub, &wins[..wins.len() - 1]) {
            return true;
        }
        v += Int::one();
    }
    false
}

fn enum_h_intervals(
    p: &PolyhedronH,
    wins: &[(Int, Int)],
    out: &mut Vec<(Option<Rat>, Option<Rat>)>,
) {
    if wins.is_empty() {
        if let Some(iv) = h_interval_1d(p) {
            out.push(iv);
        }
        return;
    }
    let (lo, hi) = &wins[wins.len() - 1];
    let mut v = lo.clone();
    while v <= *hi {
        let sub = h_substitute_last(p, &Rat::from_integer(v.clone()));
        enum_h_intervals(&sub, &wins[..wins.len() - 1], out);
        v += Int::one();
    }
}

/// A unit equality row pins its lone variable to a constant. Returns the
/// column and the forced value, skipping `keep` (the interval target, which
/// must stay in the system).
fn pinned_column(set: &ConicSet, keep: Option<usize>) -> Option<(usize, Rat)> {
    let mut offset = 0usize;
    for cone in &set.cones {
        if matches!(cone, ElementaryCone::Zero(_)) {
            for i in offset..offset + cone.dim() {
                let row = set.a.row(i);
                let mut support = row.iter().enumerate().filter(|(_, v)| !v.is_zero());
                if let (Some((j, coeff)), None) = (support.next(), support.next()) {
                    if keep != Some(j) {
                        return Some((j, -(&set.b[i] / coeff)));
                    }
                }
            }
        }
        offset += cone.dim();
    }
    None
}

/// Substitutes a pinned column if its forced value is admissible for the
/// column's role; `Ok(None)` means the pin is inconsistent (infeasible).
fn apply_pin(
    set: &ConicSet,
    roles: &[Role],
    col: usize,
    value: &Rat,
) -> Option<(ConicSet, Vec<Role>)> {
    if let Role::Integer(lo, hi) = &roles[col] {
        if !value.is_integer() {
            return None;
        }
        let v = value.to_integer();
        if v < *lo || v > *hi {
            return None;
        }
    }
    let sub = substitute_coord(set, col, value);
    let mut sub_roles = roles.to_vec();
    sub_roles.remove(col);
    Some((sub, sub_roles))
}

/// Branch-and-project feasibility: is there a point of the set whose integer
/// columns take values inside their windows?
fn explore_feasible(set: &ConicSet, roles: &[Role]) -> Result<bool> {
    debug_assert_eq!(set.ambient_dim, roles.len());
    let protected: Vec<bool> = roles.iter().map(|r| !matches!(r, Role::Free)).collect();
    let set = match simplify_conic_keeping(set, &protected) {
        Simplified::Empty => return Ok(false),
        Simplified::Set(s) => s,
    };
    let mut roles = roles.to_vec();
    let rows = relaxation_rows(&set);
    if !propagate(&rows, &mut roles) {
        return Ok(false);
    }

    let comps = components(&set);
    if comps.len() > 1 {
        for comp in &comps {
            let (sub, sub_roles) = restrict_cols(&set, comp, &roles);
            if !explore_feasible(&sub, &sub_roles)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }

    if let Some((col, value)) = pinned_column(&set, None) {
        return match apply_pin(&set, &roles, col, &value) {
            Some((sub, sub_roles)) => explore_feasible(&sub, &sub_roles),
            None => Ok(false),
        };
    }

    let ints = integer_cols(&roles);
    if ints.is_empty() {
        if !set.is_polyhedral() {
            return Err(Error::RequiresPolyhedral(
                "continuous residue keeps second-order rows".into(),
            ));
        }
        return Ok(!set.to_polyhedron()?.is_empty()?);
    }
    if set.is_polyhedral() && ints.len() <= 2 && shortcut_cells(&roles, &ints).is_some() {
        let proj = set.to_polyhedron()?.fm_project(&ints)?;
        let wins: Vec<(Int, Int)> = ints
            .iter()
            .map(|&j| match &roles[j] {
                Role::Integer(l, h) => (l.clone(), h.clone()),
                _ => unreachable!(),
            })
            .collect();
        return Ok(enum_h_feasible(&proj, &wins));
    }

    let col = pick_integer_col(&roles).expect("integer column exists");
    let Role::Integer(lo, hi) = roles[col].clone() else {
        unreachable!()
    };
    let mut v = lo;
    while v <= hi {
        let sub = substitute_coord(&set, col, &Rat::from_integer(v.clone()));
        let mut sub_roles = roles.clone();
        sub_roles.remove(col);
        if explore_feasible(&sub, &sub_roles)? {
            return Ok(true);
        }
        v += Int::one();
    }
    Ok(false)
}

/// Branch-and-project interval collection for the unique `Target` column.
fn explore_intervals(
    set: &ConicSet,
    roles: &[Role],
) -> Result<Vec<(Option<Rat>, Option<Rat>)>> {
    debug_assert_eq!(set.ambient_dim, roles.len());
    let protected: Vec<bool> = roles.iter().map(|r| !matches!(r, Role::Free)).collect();
    let set = match simplify_conic_keeping(set, &protected) {
        Simplified::Empty => return Ok(Vec::new()),
        Simplified::Set(s) => s,
    };
    let mut roles = roles.to_vec();
    let rows = relaxation_rows(&set);
    if !propagate(&rows, &mut roles) {
        return Ok(Vec::new());
    }

    let comps = components(&set);
    if comps.len() > 1 {
        let mut target_result = None;
        for comp in &comps {
            let (sub, sub_roles) = restrict_cols(&set, comp, &roles);
            if sub_roles.iter().any(|r| matches!(r, Role::Target)) {
                target_result = Some(explore_intervals(&sub, &sub_roles)?);
            } else if !explore_feasible(&sub, &sub_roles)? {
                return Ok(Vec::new());
            }
        }
        return Ok(target_result.expect("target column present"));
    }

    let target = roles
        .iter()
        .position(|r| matches!(r, Role::Target))
        .expect("target column present");
    if let Some((col, value)) = pinned_column(&set, Some(target)) {
        return match apply_pin(&set, &roles, col, &value) {
            Some((sub, sub_roles)) => explore_intervals(&sub, &sub_roles),
            None => Ok(Vec::new()),
        };
    }
    let ints = integer_cols(&roles);
    if ints.is_empty() {
        if !set.is_polyhedral() {
            return Err(Error::RequiresPolyhedral(
                "continuous residue keeps second-order rows".into(),
            ));
        }
        let proj = set.to_polyhedron()?.fm_project(&[target])?;
        return Ok(h_interval_1d(&proj).into_iter().collect());
    }
    if set.is_polyhedral() && ints.len() <= 2 && shortcut_cells(&roles, &ints).is_some() {
        let mut keep = ints.clone();
        keep.push(target);
        keep.sort_unstable();
        let proj = set.to_polyhedron()?.fm_project(&keep)?;
        // Reorder so the target is first and the integer columns follow in
        // window order; the recursion substitutes from the back.
        let perm: Vec<usize> = {
            let mut order = vec![target];
            order.extend(ints.iter().copied());
            order
                .iter()
                .map(|orig| keep.iter().position(|k| k == orig).unwrap())
                .collect()
        };
        let reorder = |rows: &[(Vec<Rat>, Rat)]| -> Vec<(Vec<Rat>, Rat)> {
            rows.iter()
                .map(|(a, b)| (perm.iter().map(|&j| a[j].clone()).collect(), b.clone()))
                .collect()
        };
        let shuffled = PolyhedronH {
            dim: proj.dim,
            ineqs: reorder(&proj.ineqs),
            eqs: reorder(&proj.eqs),
        };
        let wins: Vec<(Int, Int)> = ints
            .iter()
            .map(|&j| match &roles[j] {
                Role::Integer(l, h) => (l.clone(), h.clone()),
                _ => unreachable!(),
            })
            .collect();
        let mut out = Vec::new();
        enum_h_intervals(&shuffled, &wins, &mut out);
        return Ok(out);
    }

    let col = pick_integer_col(&roles).expect("integer column exists");
    let Role::Integer(lo, hi) = roles[col].clone() else {
        unreachable!()
    };
    let mut out = Vec::new();
    let mut v = lo;
    while v <= hi {
        let sub = substitute_coord(&set, col, &Rat::from_integer(v.clone()));
        let mut sub_roles = roles.clone();
        sub_roles.remove(col);
        out.extend(explore_intervals(&sub, &sub_roles)?);
        v += Int::one();
    }
    Ok(out)
}

/// Pairwise combination of two formulations sharing the output convention.
pub fn combine(
    op: CombineOp,
    f1: &MicpFormulation,
    f2: &MicpFormulation,
) -> Result<MicpFormulation> {
    match op {
        CombineOp::Intersection => {
            if f1.n != f2.n {
                return Err(Error::DimensionMismatch(
                    "intersection needs equal output dimensions".into(),
                ));
            }
            let n = f1.n;
            let (p, d) = (f1.p + f2.p, f1.d + f2.d);
            let mut b = ConicBuilder::new(n + p + d);
            let pos1: Vec<usize> = (0..n)
                .chain(n..n + f1.p)
                .chain(n + p..n + p + f1.d)
                .collect();
            let pos2: Vec<usize> = (0..n)
                .chain(n + f1.p..n + p)
                .chain(n + p + f1.d..n + p + d)
                .collect();
            b.embed(&f1.set, &pos1);
            b.embed(&f2.set, &pos2);
            MicpFormulation::new(b.build(), n, p, d, "intersection")
        }
        CombineOp::Product => {
            let n = f1.n + f2.n;
            let (p, d) = (f1.p + f2.p, f1.d + f2.d);
            let mut b = ConicBuilder::new(n + p + d);
            let pos1: Vec<usize> = (0..f1.n)
                .chain(n..n + f1.p)
                .chain(n + p..n + p + f1.d)
                .collect();
            let pos2: Vec<usize> = (f1.n..n)
                .chain(n + f1.p..n + p)
                .chain(n + p + f1.d..n + p + d)
                .collect();
            b.embed(&f1.set, &pos1);
            b.embed(&f2.set, &pos2);
            MicpFormulation::new(b.build(), n, p, d, "product")
        }
        CombineOp::MinkowskiSum => {
            if f1.n != f2.n {
                return Err(Error::DimensionMismatch(
                    "sum needs equal output dimensions".into(),
                ));
            }
            let n = f1.n;
            let p = 2 * n + f1.p + f2.p;
            let d = f1.d + f2.d;
            let x1 = n;
            let x2 = 2 * n;
            let y1 = 3 * n;
            let y2 = 3 * n + f1.p;
            let zs = n + p;
            let mut b = ConicBuilder::new(n + p + d);
            let pos1: Vec<usize> = (x1..x1 + n)
                .chain(y1..y1 + f1.p)
                .chain(zs..zs + f1.d)
                .collect();
            let pos2: Vec<usize> = (x2..x2 + n)
                .chain(y2..y2 + f2.p)
                .chain(zs + f1.d..zs + d)
                .collect();
            b.embed(&f1.set, &pos1);
            b.embed(&f2.set, &pos2);
            for j in 0..n {
                b.zero_row(
                    &[
                        (j, Rat::one()),
                        (x1 + j, -Rat::one()),
                        (x2 + j, -Rat::one()),
                    ],
                    Rat::zero(),
                );
            }
            MicpFormulation::new(b.build(), n, p, d, "minkowski_sum")
        }
    }
}

/// Signed direction vectors in `{-1, 0, 1}^n` without the origin, in odometer
/// order, capped.
fn signed_directions(n: usize, cap: usize) -> Vec<Vec<Rat>> {
    let mut dig = vec![0u8; n];
    let mut dirs = Vec::new();
    loop {
        let mut i = 0;
        loop {
            if i == n {
                return dirs;
            }
            dig[i] += 1;
            if dig[i] == 3 {
                dig[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        dirs.push(
            dig.iter()
                .map(|&t| match t {
                    0 => Rat::zero(),
                    1 => Rat::one(),
                    _ => -Rat::one(),
                })
                .collect(),
        );
        if dirs.len() == cap {
            return dirs;
        }
    }
}

const RECESSION_PROBE_CAP: usize = 26;

/// Disjunction of closed conic-representable sets via one conic-hull block
/// per set and a unit-simplex choice of the active set. Exact when all the
/// sets share a recession cone; a sampled probe of sign-vector directions
/// records any observed mismatch as a note.
pub fn union_basic(sets: &[ConicSet]) -> Result<MicpFormulation> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = sets[0].ambient_dim;
    if sets.iter().any(|s| s.ambient_dim != n) {
        return Err(Error::DimensionMismatch(
            "union inputs live in different dimensions".into(),
        ));
    }
    let k = sets.len();
    let p = k * n;
    let d = k;
    let zs = n + p;
    let mut b = ConicBuilder::new(n + p + d);
    for (i, set) in sets.iter().enumerate() {
        let hull = set.conic_hull();
        let copy = n + i * n;
        let pos: Vec<usize> = (copy..copy + n).chain([zs + i]).collect();
        b.embed(&hull, &pos);
    }
    for j in 0..n {
        let mut entries = vec![(j, Rat::one())];
        for i in 0..k {
            entries.push((n + i * n + j, -Rat::one()));
        }
        b.zero_row(&entries, Rat::zero());
    }
    let simplex: Vec<(usize, Rat)> = (0..k).map(|i| (zs + i, Rat::one())).collect();
    b.zero_row(&simplex, -Rat::one());
    for i in 0..k {
        b.nonneg_row(&[(zs + i, Rat::one())], Rat::zero());
        b.nonneg_row(&[(zs + i, -Rat::one())], Rat::one());
    }
    let mut f = MicpFormulation::new(
        b.build(),
        n,
        p,
        d,
        format!("union_basic(k={}, n={})", k, n),
    )?;

    for dir in signed_directions(n, RECESSION_PROBE_CAP) {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (i, set) in sets.iter().enumerate() {
            if set.recession_cone().membership(&dir)? {
                inside.push(i.to_string());
            } else {
                outside.push(i.to_string());
            }
        }
        if !inside.is_empty() && !outside.is_empty() {
            let coords: Vec<String> = dir.iter().map(|v| v.to_string()).collect();
            f.notes.push(format!(
                "recession cones disagree along ({}): contained for sets [{}], not for [{}]; \
                 the union form may overcover",
                coords.join(", "),
                inside.join(", "),
                outside.join(", ")
            ));
        }
    }
    Ok(f)
}

/// Disjunction of sets over a shared output block with per-set auxiliaries.
/// Each input lives in `n + p_i` dimensions, its first `n` coordinates being
/// the output. A rotated second-order block per set squashes the hull copy
/// when its selector is off, so differing recession cones are handled
/// exactly.
pub fn union_projected(sets: &[ConicSet], n: usize) -> Result<MicpFormulation> {
    union_soc(sets, n, SquashMode::FullCopies, "union_projected")
}

/// Like [`union_projected`], with the squashing block restricted to the
/// output copies. For bounded polyhedral inputs the second-order rows are
/// omitted entirely: the plain hull form is already exact and ideal, and the
/// result stays polyhedral. The relaxation of this form has integral indices
/// at every minimal face.
pub fn union_ideal(sets: &[ConicSet], n: usize) -> Result<MicpFormulation> {
    if !sets.is_empty() && sets.iter().all(|s| s.is_polyhedral()) {
        match all_bounded(sets) {
            Ok(true) => return union_soc(sets, n, SquashMode::None, "union_ideal[polytopes]"),
            Ok(false) | Err(Error::DeskScale(_)) => {}
            Err(e) => return Err(e),
        }
    }
    union_soc(sets, n, SquashMode::OutputCopies, "union_ideal")
}

fn all_bounded(sets: &[ConicSet]) -> Result<bool> {
    for set in sets {
        let rec = set.recession_cone().to_polyhedron()?;
        for j in 0..rec.dim {
            for sgn in [Rat::one(), -Rat::one()] {
                let mut e = vec![Rat::zero(); rec.dim];
                e[j] = sgn;
                if matches!(rec.linear_max(&e)?, LinearMax::Unbounded) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Which coordinates of each hull copy the per-set second-order block pins
/// down when the selector is off.
#[derive(Clone, Copy, PartialEq, Eq)]
enum SquashMode {
    /// No second-order rows at all (bounded polyhedral inputs).
    None,
    /// Squash the output copy only.
    OutputCopies,
    /// Squash the output copy and the per-set auxiliaries.
    FullCopies,
}

/// Shared construction for the projected and output-only disjunctions.
fn union_soc(
    sets: &[ConicSet],
    n: usize,
    mode: SquashMode,
    tag: &str,
) -> Result<MicpFormulation> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    for set in sets {
        if set.ambient_dim < n {
            return Err(Error::DimensionMismatch(format!(
                "input dimension {} is below the output dimension {}",
                set.ambient_dim, n
            )));
        }
    }
    let k = sets.len();
    let aux: Vec<usize> = sets.iter().map(|s| s.ambient_dim - n).collect();
    let per: Vec<usize> = aux
        .iter()
        .map(|pi| n + pi + usize::from(mode != SquashMode::None))
        .collect();
    let p: usize = per.iter().sum();
    let d = k;
    let zs = n + p;
    let mut b = ConicBuilder::new(n + p + d);

    let mut starts = Vec::with_capacity(k);
    let mut cursor = n;
    for i in 0..k {
        starts.push(cursor);
        cursor += per[i];
    }

    for (i, set) in sets.iter().enumerate() {
        let hull = set.conic_hull();
        let x_i = starts[i];
        let pos: Vec<usize> = (x_i..x_i + n + aux[i]).chain([zs + i]).collect();
        b.embed(&hull, &pos);
        if mode != SquashMode::None {
            let t_i = x_i + n + aux[i];
            let squash = match mode {
                SquashMode::OutputCopies => n,
                _ => n + aux[i],
            };
            let mut rows: Vec<(Vec<(usize, Rat)>, Rat)> = Vec::with_capacity(2 + squash);
            rows.push((vec![(t_i, Rat::one())], Rat::zero()));
            rows.push((vec![(zs + i, Rat::one())], Rat::zero()));
            for j in 0..squash {
                rows.push((vec![(x_i + j, Rat::one())], Rat::zero()));
            }
            b.block(ElementaryCone::RotatedSecondOrder(2 + squash), rows);
            b.nonneg_row(&[(t_i, Rat::one())], Rat::zero());
        }
    }
    for j in 0..n {
        let mut entries = vec![(j, Rat::one())];
        for i in 0..k {
            entries.push((starts[i] + j, -Rat::one()));
        }
        b.zero_row(&entries, Rat::zero());
    }
    let simplex: Vec<(usize, Rat)> = (0..k).map(|i| (zs + i, Rat::one())).collect();
    b.zero_row(&simplex, -Rat::one());
    for i in 0..k {
        b.nonneg_row(&[(zs + i, Rat::one())], Rat::zero());
        b.nonneg_row(&[(zs + i, -Rat::one())], Rat::one());
    }
    MicpFormulation::new(b.build(), n, p, d, format!("{}(k={}, n={})", tag, k, n))
}

/// Disjunction of two formulations that keeps both index structures intact.
/// One new binary coordinate selects the active branch; a pair of rotated
/// second-order blocks forces the output to coincide with the active copy
/// while leaving the inactive copy free to sit anywhere in its own set.
pub fn union_rational(f1: &MicpFormulation, f2: &MicpFormulation) -> Result<MicpFormulation> {
    if f1.n != f2.n {
        return Err(Error::DimensionMismatch(
            "union needs equal output dimensions".into(),
        ));
    }
    let n = f1.n;
    let p = 2 * n + f1.p + f2.p + 1;
    let d = f1.d + f2.d + 1;
    let x1 = n;
    let y1 = 2 * n;
    let x2 = 2 * n + f1.p;
    let y2 = 3 * n + f1.p;
    let t = 3 * n + f1.p + f2.p;
    let zs = n + p;
    let zprime = zs + f1.d + f2.d;
    let mut b = ConicBuilder::new(n + p + d);

    let pos1: Vec<usize> = (x1..x1 + n)
        .chain(y1..y1 + f1.p)
        .chain(zs..zs + f1.d)
        .collect();
    let pos2: Vec<usize> = (x2..x2 + n)
        .chain(y2..y2 + f2.p)
        .chain(zs + f1.d..zs + f1.d + f2.d)
        .collect();
    b.embed(&f1.set, &pos1);
    b.embed(&f2.set, &pos2);

    // Active branch 1 when the selector is 0, branch 2 when it is 1.
    let mut rows1: Vec<(Vec<(usize, Rat)>, Rat)> = Vec::with_capacity(2 + n);
    rows1.push((vec![(t, Rat::one())], Rat::zero()));
    rows1.push((vec![(zprime, Rat::one())], Rat::zero()));
    for j in 0..n {
        rows1.push((
            vec![(j, Rat::one()), (x1 + j, -Rat::one())],
            Rat::zero(),
        ));
    }
    b.block(ElementaryCone::RotatedSecondOrder(2 + n), rows1);

    let mut rows2: Vec<(Vec<(usize, Rat)>, Rat)> = Vec::with_capacity(2 + n);
    rows2.push((vec![(t, Rat::one())], Rat::zero()));
    rows2.push((vec![(zprime, -Rat::one())], Rat::one()));
    for j in 0..n {
        rows2.push((
            vec![(j, Rat::one()), (x2 + j, -Rat::one())],
            Rat::zero(),
        ));
    }
    b.block(ElementaryCone::RotatedSecondOrder(2 + n), rows2);

    b.nonneg_row(&[(t, Rat::one())], Rat::zero());
    b.nonneg_row(&[(zprime, Rat::one())], Rat::zero());
    b.nonneg_row(&[(zprime, -Rat::one())], Rat::one());

    MicpFormulation::new(
        b.build(),
        n,
        p,
        d,
        format!(
            "union_rational({} | {})",
            f1.provenance, f2.provenance
        ),
    )
}

/// Decomposes `conv(vertices) + [0,1]-combinations of rays` intersected with
/// index integrality into finitely many polytope slices plus the integer
/// recession directions. Coordinates follow the `x | y | z` convention with
/// the given split.
pub fn decompose_bounded(
    vertices: &[Vec<Rat>],
    rays: &[Vec<Int>],
    n: usize,
    p: usize,
    d: usize,
) -> Result<BoundedDecomposition> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let amb = n + p + d;
    for v in vertices {
        if v.len() != amb {
            return Err(Error::DimensionMismatch(
                "vertex dimension differs from n + p + d".into(),
            ));
        }
    }
    for r in rays {
        if r.len() != amb {
            return Err(Error::DimensionMismatch(
                "ray dimension differs from n + p + d".into(),
            ));
        }
    }

    // (v, lambda, gamma) with v = sum lambda_i vert_i + sum gamma_j ray_j,
    // lambda on the unit simplex, gamma in the unit box.
    let nv = vertices.len();
    let nr = rays.len();
    let total = amb + nv + nr;
    let mut eqs = Vec::new();
    for coord in 0..amb {
        let mut row = vec![Rat::zero(); total];
        row[coord] = Rat::one();
        for (i, vert) in vertices.iter().enumerate() {
            row[amb + i] = -vert[coord].clone();
        }
        for (j, ray) in rays.iter().enumerate() {
            row[amb + nv + j] = -Rat::from_integer(ray[coord].clone());
        }
        eqs.push((row, Rat::zero()));
    }
    let mut simplex = vec![Rat::zero(); total];
    for i in 0..nv {
        simplex[amb + i] = Rat::one();
    }
    eqs.push((simplex, Rat::one()));
    let mut ineqs = Vec::new();
    for i in 0..nv {
        let mut row = vec![Rat::zero(); total];
        row[amb + i] = -Rat::one();
        ineqs.push((row, Rat::zero()));
    }
    for j in 0..nr {
        let mut row = vec![Rat::zero(); total];
        row[amb + nv + j] = -Rat::one();
        ineqs.push((row.clone(), Rat::zero()));
        let flipped: Vec<Rat> = row.iter().map(|x| -x.clone()).collect();
        ineqs.push((flipped, Rat::one()));
    }
    let lifted = PolyhedronH::new(total, ineqs, eqs)?;
    let keep: Vec<usize> = (0..amb).collect();
    let hull = lifted.fm_project(&keep)?;

    let zkeep: Vec<usize> = (n + p..amb).collect();
    let zproj = hull.fm_project(&zkeep)?;
    let window = window_box(&zproj)?;

    let mut slices = BTreeMap::new();
    let xkeep: Vec<usize> = (0..n).collect();
    enumerate_box(&window, &mut |z: &[Int]| -> Result<()> {
        let mut cur = hull.clone();
        for value in z.iter().rev() {
            cur = h_substitute_last(&cur, &Rat::from_integer(value.clone()));
        }
        if !cur.is_empty()? {
            let piece = cur.fm_project(&xkeep)?;
            slices.insert(z.to_vec(), piece);
        }
        Ok(())
    })?;

    let rays_x: Vec<Vec<Int>> = rays.iter().map(|r| r[..n].to_vec()).collect();
    Ok(BoundedDecomposition {
        pieces: SliceFamily { window, slices },
        rays_x,
    })
}

fn enumerate_box(
    window: &[(Int, Int)],
    visit: &mut impl FnMut(&[Int]) -> Result<()>,
) -> Result<()> {
    fn rec(
        window: &[(Int, Int)],
        prefix: &mut Vec<Int>,
        visit: &mut impl FnMut(&[Int]) -> Result<()>,
    ) -> Result<()> {
        if prefix.len() == window.len() {
            return visit(prefix);
        }
        let (lo, hi) = &window[prefix.len()];
        let mut v = lo.clone();
        while v <= *hi {
            prefix.push(v.clone());
            rec(window, prefix, visit)?;
            prefix.pop();
            v += Int::one();
        }
        Ok(())
    }
    let mut prefix = Vec::new();
    rec(window, &mut prefix, visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, rint};

    fn interval(lo: Rat, hi: Rat) -> ConicSet {
        let p = PolyhedronH::from_box(&[(lo, hi)]);
        ConicSet::from_polyhedron(&p)
    }

    fn point1(v: Rat) -> ConicSet {
        let p = PolyhedronH::new(1, vec![], vec![(vec![Rat::one()], v)]).unwrap();
        ConicSet::from_polyhedron(&p)
    }

    fn halfline_up(lo: Rat) -> ConicSet {
        let p = PolyhedronH::new(1, vec![(vec![-Rat::one()], -lo)], vec![]).unwrap();
        ConicSet::from_polyhedron(&p)
    }

    fn box_poly(lo: i64, hi: i64) -> PolyhedronH {
        PolyhedronH::from_box(&[(rint(lo), rint(hi))])
    }

    fn slice_poly(f: &MicpFormulation, z: &[i64]) -> PolyhedronH {
        let zz: Vec<Int> = z.iter().map(|&v| int(v)).collect();
        match f.slice(&zz).unwrap() {
            SliceSet::Polyhedral(p) => p,
            other => panic!("expected polyhedral slice, got {:?}", other),
        }
    }

    fn assert_empty_slice(f: &MicpFormulation, z: &[i64]) {
        let zz: Vec<Int> = z.iter().map(|&v| int(v)).collect();
        assert!(matches!(f.slice(&zz).unwrap(), SliceSet::Empty));
    }

    /// Brute-force 1D membership oracle for a union of intervals, scanned on
    /// a quarter-integer grid.
    fn union_contains(sets: &[(Rat, Rat)], x: &Rat) -> bool {
        sets.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    fn grid(lo: i64, hi: i64) -> Vec<Rat> {
        (4 * lo..=4 * hi).map(|q| rat(q, 4)).collect()
    }

    fn family_covers(f: &MicpFormulation, window: &[(Int, Int)], x: &Rat) -> bool {
        let fam = f.enumerate_slices(window).unwrap();
        fam.slices
            .values()
            .any(|p| p.contains(std::slice::from_ref(x)).unwrap())
    }

    #[test]
    fn union_basic_two_intervals() {
        let t1 = interval(rint(0), rint(1));
        let t2 = interval(rint(2), rint(3));
        let f = union_basic(&[t1, t2]).unwrap();
        assert_eq!((f.n, f.p, f.d), (1, 2, 2));
        assert!(f.notes.is_empty());

        let s10 = slice_poly(&f, &[1, 0]);
        assert!(s10.set_equal(&box_poly(0, 1)).unwrap());
        let s01 = slice_poly(&f, &[0, 1]);
        assert!(s01.set_equal(&box_poly(2, 3)).unwrap());
        assert_empty_slice(&f, &[0, 0]);
        assert_empty_slice(&f, &[1, 1]);
        assert_empty_slice(&f, &[2, -1]);

        let window = f.default_z_window().unwrap();
        assert_eq!(window, vec![(int(0), int(1)), (int(0), int(1))]);
        let fam = f.enumerate_slices(&window).unwrap();
        assert_eq!(fam.slices.len(), 2);

        for x in grid(-2, 5) {
            let expect = union_contains(&[(rint(0), rint(1)), (rint(2), rint(3))], &x);
            assert_eq!(family_covers(&f, &window, &x), expect, "x = {}", x);
        }
    }

    #[test]
    fn union_basic_flags_recession_mismatch() {
        let t1 = halfline_up(rint(0));
        let t2 = interval(rint(-3), rint(-2));
        let f = union_basic(&[t1, t2]).unwrap();
        assert!(!f.notes.is_empty());
        assert!(f.notes[0].contains("recession"));
    }

    #[test]
    fn union_basic_duplicate_set_slices() {
        let t = interval(rint(-1), rint(4));
        let f = union_basic(&[t.clone(), t]).unwrap();
        for z in [[1, 0], [0, 1]] {
            let s = slice_poly(&f, &z);
            assert!(s.set_equal(&box_poly(-1, 4)).unwrap());
        }
    }

    #[test]
    fn union_projected_mixed_boundedness() {
        let t1 = interval(rint(0), rint(1));
        let t2 = halfline_up(rint(2));
        let f = union_projected(&[t1, t2], 1).unwrap();
        assert_eq!(f.d, 2);

        let s10 = slice_poly(&f, &[1, 0]);
        assert!(s10.set_equal(&box_poly(0, 1)).unwrap());
        let s01 = slice_poly(&f, &[0, 1]);
        let halfline = PolyhedronH::new(1, vec![(vec![-rint(1)], rint(-2))], vec![]).unwrap();
        assert!(s01.set_equal(&halfline).unwrap());

        let window = vec![(int(0), int(1)), (int(0), int(1))];
        for x in [rat(1, 2), rint(3), rint(100)] {
            assert!(f.member(&[x], &window).unwrap());
        }
        for x in [rat(3, 2), rint(-1)] {
            assert!(!f.member(&[x], &window).unwrap());
        }
    }

    #[test]
    fn union_ideal_polytopes_is_ideal_and_correct() {
        let t1 = interval(rint(0), rint(1));
        let t2 = interval(rint(2), rint(3));
        let f = union_ideal(&[t1, t2], 1).unwrap();
        assert!(f.set.is_polyhedral(), "polytope inputs stay polyhedral");
        assert_eq!(f.check_ideal().unwrap(), IdealVerdict::Ideal);

        let s10 = slice_poly(&f, &[1, 0]);
        assert!(s10.set_equal(&box_poly(0, 1)).unwrap());
        let s01 = slice_poly(&f, &[0, 1]);
        assert!(s01.set_equal(&box_poly(2, 3)).unwrap());

        // Independent route: every relaxation vertex has integral indices.
        let poly = f.set.to_polyhedron().unwrap();
        let gens = poly.vertices_and_rays().unwrap();
        assert!(!gens.vertices.is_empty());
        for v in &gens.vertices {
            for c in &v[f.n + f.p..] {
                assert!(c.is_integer(), "fractional index at vertex {:?}", v);
            }
        }
    }

    #[test]
    fn union_ideal_point_pair_is_ideal() {
        let f = union_ideal(&[point1(rint(0)), point1(rint(1))], 1).unwrap();
        assert_eq!(f.check_ideal().unwrap(), IdealVerdict::Ideal);
        let s = slice_poly(&f, &[0, 1]);
        assert!(s.set_equal(&box_poly(1, 1)).unwrap());
    }

    #[test]
    fn union_ideal_unbounded_input_keeps_squash_blocks() {
        let t1 = halfline_up(rint(0));
        let t2 = point1(rint(-5));
        let f = union_ideal(&[t1, t2], 1).unwrap();
        assert!(!f.set.is_polyhedral());
        assert!(matches!(
            f.check_ideal(),
            Err(Error::RequiresPolyhedral(_))
        ));
        let s10 = slice_poly(&f, &[1, 0]);
        let halfline = PolyhedronH::new(1, vec![(vec![-rint(1)], rint(0))], vec![]).unwrap();
        assert!(s10.set_equal(&halfline).unwrap());
        let s01 = slice_poly(&f, &[0, 1]);
        assert!(s01.set_equal(&box_poly(-5, -5)).unwrap());
    }

    #[test]
    fn perspective_points_split_into_binary_ones() {
        // A fractional-selector point of the polytope union form decomposes
        // into a convex combination of two binary-selector points.
        let t1 = interval(rint(0), rint(1));
        let t2 = interval(rint(2), rint(3));
        let f = union_ideal(&[t1, t2], 1).unwrap();
        // Layout: x | x^1 x^2 | z1 z2.
        let beta = vec![rat(5, 4), rat(1, 4), rint(1), rat(1, 2), rat(1, 2)];
        assert!(f.set.membership(&beta).unwrap());
        let b1 = vec![rat(1, 2), rat(1, 2), rint(0), rint(1), rint(0)];
        let b2 = vec![rint(2), rint(0), rint(2), rint(0), rint(1)];
        assert!(f.set.membership(&b1).unwrap());
        assert!(f.set.membership(&b2).unwrap());
        for i in 0..beta.len() {
            let mix = (&b1[i] + &b2[i]) * rat(1, 2);
            assert_eq!(mix, beta[i], "coordinate {}", i);
        }
    }

    #[test]
    fn check_ideal_brands_fractional_vertex() {
        // 0 <= x <= 1 with x <= z <= 1/2: the vertex (1/2, 1/2) is minimal
        // and fractional in z.
        let p = PolyhedronH::new(
            2,
            vec![
                (vec![-rint(1), rint(0)], rint(0)),
                (vec![rint(1), rint(0)], rint(1)),
                (vec![rint(1), -rint(1)], rint(0)),
                (vec![rint(0), rint(1)], rat(1, 2)),
            ],
            vec![],
        )
        .unwrap();
        let f = MicpFormulation::new(ConicSet::from_polyhedron(&p), 1, 0, 1, "test").unwrap();
        match f.check_ideal().unwrap() {
            IdealVerdict::NotIdeal { witness } => {
                assert!(!witness[1].is_integer());
            }
            other => panic!("expected NotIdeal, got {:?}", other),
        }
    }

    #[test]
    fn check_ideal_agrees_with_vertex_oracle_on_big_m() {
        // x in [0,1] union [2,3] written with big-M rows; its relaxation
        // happens to have integral vertices.
        let p = PolyhedronH::new(
            2,
            vec![
                (vec![-rint(1), rint(0)], rint(0)),
                (vec![rint(1), rint(0)], rint(3)),
                (vec![rint(0), -rint(1)], rint(0)),
                (vec![rint(0), rint(1)], rint(1)),
                (vec![rint(1), -rint(2)], rint(1)),
                (vec![-rint(1), rint(2)], rint(0)),
            ],
            vec![],
        )
        .unwrap();
        let f =
            MicpFormulation::new(ConicSet::from_polyhedron(&p), 1, 0, 1, "big-m test").unwrap();
        let verdict = f.check_ideal().unwrap();

        let gens = p.vertices_and_rays().unwrap();
        let oracle_ideal = gens.vertices.iter().all(|v| v[1].is_integer());
        assert_eq!(verdict == IdealVerdict::Ideal, oracle_ideal);
        assert_eq!(verdict, IdealVerdict::Ideal);
    }

    #[test]
    fn union_rational_of_point_and_interval() {
        let f1 = MicpFormulation::new(point1(rint(0)), 1, 0, 0, "pt").unwrap();
        let f2 = MicpFormulation::new(interval(rint(2), rint(3)), 1, 0, 0, "iv").unwrap();
        let f = union_rational(&f1, &f2).unwrap();
        assert_eq!((f.n, f.p, f.d), (1, 3, 1));

        let window = vec![(int(0), int(1))];
        for x in [rint(0), rint(2), rat(5, 2), rint(3)] {
            assert!(f.member(&[x.clone()], &window).unwrap(), "x = {}", x);
        }
        for x in [rat(1, 2), rint(1), rat(7, 2), rint(-1)] {
            assert!(!f.member(&[x.clone()], &window).unwrap(), "x = {}", x);
        }

        let members = f
            .integer_members_1d(&int(-1), &int(5), &window)
            .unwrap();
        let expect: BTreeSet<Int> = [int(0), int(2), int(3)].into_iter().collect();
        assert_eq!(members, expect);
    }

    #[test]
    fn union_rational_idempotent_on_same_set() {
        let f1 = MicpFormulation::new(interval(rint(1), rint(2)), 1, 0, 0, "iv").unwrap();
        let f = union_rational(&f1, &f1.clone()).unwrap();
        let window = vec![(int(0), int(1))];
        for x in grid(-1, 4) {
            let expect = rint(1) <= x && x <= rint(2);
            assert_eq!(f.member(&[x.clone()], &window).unwrap(), expect, "x = {}", x);
        }
    }

    #[test]
    fn union_rational_slices_are_polyhedral() {
        let f1 = MicpFormulation::new(point1(rint(0)), 1, 0, 0, "pt").unwrap();
        let f2 = MicpFormulation::new(interval(rint(2), rint(3)), 1, 0, 0, "iv").unwrap();
        let f = union_rational(&f1, &f2).unwrap();
        let s0 = slice_poly(&f, &[0]);
        assert!(s0.set_equal(&box_poly(0, 0)).unwrap());
        let s1 = slice_poly(&f, &[1]);
        assert!(s1.set_equal(&box_poly(2, 3)).unwrap());
    }

    fn parity_cube(n: usize) -> MicpFormulation {
        // x in R^n with sum x_i = 2 z for one integer z.
        let mut b = ConicBuilder::new(n + 1);
        let mut entries: Vec<(usize, Rat)> = (0..n).map(|j| (j, Rat::one())).collect();
        entries.push((n, -rint(2)));
        b.zero_row(&entries, Rat::zero());
        MicpFormulation::new(b.build(), n, 0, 1, "parity").unwrap()
    }

    #[test]
    fn parity_slices_and_reindex() {
        let f = parity_cube(2);
        let s1 = slice_poly(&f, &[1]);
        let line = PolyhedronH::new(2, vec![], vec![(vec![rint(1), rint(1)], rint(2))]).unwrap();
        assert!(s1.set_equal(&line).unwrap());

        // Reindex by the 1x1 unimodular matrix [-1]: slice k of the new
        // formulation is slice -k of the original.
        let u = IntegerMatrix::from_rows(vec![vec![int(-1)]]).unwrap();
        let g = f.reindex_unimodular(&u).unwrap();
        let s_neg = slice_poly(&g, &[-1]);
        assert!(s_neg.set_equal(&s1).unwrap());

        let bad = IntegerMatrix::from_rows(vec![vec![int(2)]]).unwrap();
        assert!(f.reindex_unimodular(&bad).is_err());
    }

    #[test]
    fn relax_first_integer_widens_parity() {
        let f = parity_cube(2);
        let g = f.relax_first_integer().unwrap();
        assert_eq!((g.n, g.p, g.d), (2, 1, 0));
        // Once z is continuous the projection is the whole plane.
        let s = slice_poly(&g, &[]);
        for pt in [vec![rint(0), rint(0)], vec![rat(1, 3), rat(1, 7)]] {
            assert!(s.contains(&pt).unwrap());
        }
        assert!(g.relax_first_integer().is_err());
    }

    #[test]
    fn default_window_unbounded_index_errors() {
        let f = parity_cube(2);
        assert!(matches!(
            f.default_z_window(),
            Err(Error::InsufficientWindow(_))
        ));
    }

    #[test]
    fn combine_minkowski_of_finite_sets() {
        let f1 = union_basic(&[point1(rint(0)), point1(rint(3))]).unwrap();
        let f2 = union_basic(&[point1(rint(0)), point1(rint(1))]).unwrap();
        let f = combine(CombineOp::MinkowskiSum, &f1, &f2).unwrap();
        let window = vec![(int(0), int(1)); 4];
        let members = f.integer_members_1d(&int(-2), &int(6), &window).unwrap();
        let expect: BTreeSet<Int> = [0, 1, 3, 4].map(int).into_iter().collect();
        assert_eq!(members, expect);
        assert!(!f.member(&[rat(1, 2)], &window).unwrap());
    }

    #[test]
    fn combine_intersection_of_intervals() {
        let f1 = MicpFormulation::new(interval(rint(0), rint(2)), 1, 0, 0, "a").unwrap();
        let f2 = MicpFormulation::new(interval(rint(1), rint(3)), 1, 0, 0, "b").unwrap();
        let f = combine(CombineOp::Intersection, &f1, &f2).unwrap();
        assert!(f.member(&[rat(3, 2)], &[]).unwrap());
        assert!(f.member(&[rint(1)], &[]).unwrap());
        assert!(!f.member(&[rat(1, 2)], &[]).unwrap());
        assert!(!f.member(&[rat(7, 2)], &[]).unwrap());
    }

    #[test]
    fn combine_product_gives_rectangle() {
        let f1 = MicpFormulation::new(interval(rint(0), rint(1)), 1, 0, 0, "a").unwrap();
        let f2 = MicpFormulation::new(interval(rint(2), rint(3)), 1, 0, 0, "b").unwrap();
        let f = combine(CombineOp::Product, &f1, &f2).unwrap();
        assert_eq!(f.n, 2);
        assert!(f.member(&[rat(1, 2), rat(5, 2)], &[]).unwrap());
        assert!(!f.member(&[rat(1, 2), rat(7, 2)], &[]).unwrap());
        assert!(!f.member(&[rat(3, 2), rat(5, 2)], &[]).unwrap());
    }

    #[test]
    fn decompose_halfline_strip() {
        // conv{(0,0), (1/2,0)} + [0,1]-multiples of (1,1), sliced at integer
        // second coordinates.
        let verts = vec![vec![rint(0), rint(0)], vec![rat(1, 2), rint(0)]];
        let rays = vec![vec![int(1), int(1)]];
        let dec = decompose_bounded(&verts, &rays, 1, 0, 1).unwrap();
        assert_eq!(dec.rays_x, vec![vec![int(1)]]);
        assert_eq!(dec.pieces.window, vec![(int(0), int(1))]);
        assert_eq!(dec.pieces.slices.len(), 2);
        let p0 = &dec.pieces.slices[&vec![int(0)]];
        let mut half = PolyhedronH::from_box(&[(rint(0), rat(1, 2))]);
        assert!(p0.set_equal(&half).unwrap());
        let p1 = &dec.pieces.slices[&vec![int(1)]];
        half = PolyhedronH::new(
            1,
            vec![
                (vec![-rint(1)], rint(-1)),
                (vec![rint(1)], rat(3, 2)),
            ],
            vec![],
        )
        .unwrap();
        assert!(p1.set_equal(&half).unwrap());
    }

    #[test]
    fn decompose_rejects_mismatched_dimensions() {
        let verts = vec![vec![rint(0)]];
        assert!(decompose_bounded(&verts, &[], 1, 0, 1).is_err());
        assert!(decompose_bounded(&[], &[], 1, 0, 0).is_err());
    }

    #[test]
    fn random_interval_unions_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for case in 0..12 {
            let mut ends = || -> (Rat, Rat) {
                let a = rng.gen_range(-8..8);
                let w = rng.gen_range(0..5);
                (rat(a, 2), rat(a + w, 2))
            };
            let (a1, b1) = ends();
            let (a2, b2) = ends();
            let t1 = interval(a1.clone(), b1.clone());
            let t2 = interval(a2.clone(), b2.clone());
            let window = vec![(int(0), int(1)), (int(0), int(1))];
            let brute = [(a1, b1), (a2, b2)];
            for f in [
                union_basic(&[t1.clone(), t2.clone()]).unwrap(),
                union_projected(&[t1.clone(), t2.clone()], 1).unwrap(),
                union_ideal(&[t1.clone(), t2.clone()], 1).unwrap(),
            ] {
                let fam = f.enumerate_slices(&window).unwrap();
                for x in grid(-6, 7) {
                    let got = fam
                        .slices
                        .values()
                        .any(|p| p.contains(std::slice::from_ref(&x)).unwrap());
                    assert_eq!(
                        got,
                        union_contains(&brute, &x),
                        "case {} x = {} ({})",
                        case,
                        x,
                        f.provenance
                    );
                }
            }
        }
    }
}
