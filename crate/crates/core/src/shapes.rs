//! Exact geometry of small polytopes: volumes up to dimension 3, Minkowski
//! sums on vertex representations, translation and homothety tests, and the
//! equal-volume classification of indexed polytope families.

use std::collections::{BTreeMap, BTreeSet};

use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::PolyhedronV;
use crate::rational::{int, rat, Int, Rat, RationalMatrix};

const POINT_CAP: usize = 64;

fn dedup_points(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let set: BTreeSet<Vec<Rat>> = points.iter().cloned().collect();
    set.into_iter().collect()
}

fn cross2(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn sub3(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    (0..3).map(|i| &a[i] - &b[i]).collect()
}

fn cross3(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot_n(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn det3(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    dot_n(a, &cross3(b, c))
}

/// Counterclockwise strict convex hull of a planar point cloud (monotone
/// chain); collinear and interior points are dropped.
fn hull2d(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let pts = dedup_points(points);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<&Vec<Rat>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross2(lower[lower.len() - 2], lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<Rat>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross2(upper[upper.len() - 2], upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).cloned().collect()
}

/// Outward supporting planes (a, b) with a·x ≤ b of a full-dimensional 3D
/// cloud, deduplicated by primitive normal.
fn supporting_planes(pts: &[Vec<Rat>]) -> Result<Vec<(Vec<Rat>, Rat)>> {
    if pts.len() > POINT_CAP {
        return Err(Error::DeskScale(format!(
            "{} points exceed the 3D hull cap {}",
            pts.len(),
            POINT_CAP
        )));
    }
    let mut planes: BTreeMap<(Vec<Int>, Rat), (Vec<Rat>, Rat)> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let n = cross3(&sub3(&pts[j], &pts[i]), &sub3(&pts[k], &pts[i]));
                if n.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let b = dot_n(&n, &pts[i]);
                for (normal, offset) in [(n.clone(), b.clone()), (
                    n.iter().map(|c| -c).collect::<Vec<Rat>>(),
                    -b,
                )] {
                    if pts.iter().any(|p| dot_n(&normal, p) > offset) {
                        continue;
                    }
                    let prim = crate::rational::primitive_direction(&normal)
                        .expect("nonzero normal");
                    let scale = (0..3)
                        .find(|&c| !normal[c].is_zero())
                        .map(|c| &normal[c] / Rat::from_integer(prim[c].clone()))
                        .expect("nonzero normal");
                    let key_offset = &offset / &scale;
                    planes
                        .entry((prim.clone(), key_offset.clone()))
                        .or_insert_with(|| {
                            let pn: Vec<Rat> = prim
                                .iter()
                                .map(|c| Rat::from_integer(c.clone()))
                                .collect();
                            (pn, key_offset)
                        });
                }
            }
        }
    }
    Ok(planes.into_values().collect())
}

/// Points of `pts` lying on the plane, ordered as the facet's convex
/// polygon, counterclockwise when seen from outside.
fn facet_polygon(pts: &[Vec<Rat>], normal: &[Rat], offset: &Rat) -> Vec<Vec<Rat>> {
    let on: Vec<Vec<Rat>> = pts
        .iter()
        .filter(|p| &dot_n(normal, p) == offset)
        .cloned()
        .collect();
    let drop = (0..3)
        .max_by(|&a, &b| {
            normal[a]
                .abs()
                .partial_cmp(&normal[b].abs())
                .expect("rational order is total")
        })
        .expect("three axes");
    let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
    let flat: Vec<Vec<Rat>> = on
        .iter()
        .map(|p| vec![p[keep[0]].clone(), p[keep[1]].clone()])
        .collect();
    let hull = hull2d(&flat);
    let mut ordered: Vec<Vec<Rat>> = hull
        .iter()
        .map(|h| {
            on.iter()
                .find(|p| &p[keep[0]] == &h[0] && &p[keep[1]] == &h[1])
                .expect("hull point came from the cloud")
                .clone()
        })
        .collect();
    if ordered.len() >= 3 {
        let or = det3(
            normal,
            &sub3(&ordered[1], &ordered[0]),
            &sub3(&ordered[2], &ordered[0]),
        );
        if or.is_negative() {
            ordered.reverse();
        }
    }
    ordered
}

fn affine_rank(pts: &[Vec<Rat>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    RationalMatrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Extreme points of the convex hull of a cloud in dimension 1 to 3,
/// tolerant of duplicate, boundary, and interior points.
pub fn hull_vertices(points: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let pts = dedup_points(points);
    if pts.is_empty() {
        return Ok(vec![]);
    }
    let dim = pts[0].len();
    if dim == 0 || dim > 3 {
        return Err(Error::DeskScale(format!(
            "hulls are supported in dimensions 1 to 3, got {}",
            dim
        )));
    }
    if pts.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch("ragged point cloud".into()));
    }
    if pts.len() == 1 {
        return Ok(pts);
    }
    let rank = affine_rank(&pts);
    if rank == 0 {
        return Ok(vec![pts[0].clone()]);
    }
    if rank == dim {
        return match dim {
            1 => {
                let lo = pts.first().expect("nonempty").clone();
                let hi = pts.last().expect("nonempty").clone();
                Ok(vec![lo, hi])
            }
            2 => Ok(hull2d(&pts)),
            _ => {
                let planes = supporting_planes(&pts)?;
                let mut out = Vec::new();
                for p in &pts {
                    let normals: Vec<Vec<Rat>> = planes
                        .iter()
                        .filter(|(a, b)| &dot_n(a, p) == b)
                        .map(|(a, _)| a.clone())
                        .collect();
                    if normals.len() >= 3
                        && RationalMatrix::from_rows(normals)
                            .map(|m| m.rank())
                            .unwrap_or(0)
                            == 3
                    {
                        out.push(p.clone());
                    }
                }
                Ok(out)
            }
        };
    }
    // Degenerate cloud: work in exact coordinates on its affine hull.
    let base = pts[0].clone();
    let shifted: Vec<Vec<Rat>> = pts
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for u in &shifted {
        let mut candidate = basis.clone();
        candidate.push(u.clone());
        if RationalMatrix::from_rows(candidate.clone())
            .map(|mm| mm.rank())
            .unwrap_or(0)
            > basis.len()
        {
            basis = candidate;
        }
        if basis.len() == rank {
            break;
        }
    }
    let bmat = RationalMatrix::from_rows(
        (0..dim)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect(),
    )?;
    let coords: Vec<Vec<Rat>> = shifted
        .iter()
        .map(|u| bmat.solve(u).expect("u lies in the span of the basis"))
        .collect();
    let low = hull_vertices(&coords)?;
    let coord_set: BTreeSet<Vec<Rat>> = low.into_iter().collect();
    Ok(pts
        .iter()
        .zip(&coords)
        .filter(|(_, c)| coord_set.contains(*c))
        .map(|(p, _)| p.clone())
        .collect())
}

/// Outward facets a·x ≤ b of a full-dimensional cloud, usable as an exact
/// membership test for the hull.
pub fn hull_facets(points: &[Vec<Rat>]) -> Result<Vec<(Vec<Rat>, Rat)>> {
    let pts = dedup_points(points);
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = pts[0].len();
    if affine_rank(&pts) != dim {
        return Err(Error::Invalid(
            "facet enumeration needs a full-dimensional cloud".into(),
        ));
    }
    match dim {
        1 => {
            let lo = pts.first().expect("nonempty")[0].clone();
            let hi = pts.last().expect("nonempty")[0].clone();
            Ok(vec![
                (vec![Rat::one()], hi),
                (vec![-Rat::one()], -lo),
            ])
        }
        2 => {
            let hull = hull2d(&pts);
            let mut out = Vec::new();
            for i in 0..hull.len() {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                let normal = vec![&b[1] - &a[1], &a[0] - &b[0]];
                let off = dot_n(&normal, a);
                out.push((normal, off));
            }
            Ok(out)
        }
        3 => supporting_planes(&pts),
        other => Err(Error::DeskScale(format!(
            "facets are supported in dimensions 1 to 3, got {}",
            other
        ))),
    }
}

/// Exact volume of a bounded vertex-represented polytope in dimension 1 to
/// 3: interval length, shoelace, or a fan of tetrahedra over outward-ordered
/// facets. Lower-dimensional inputs have volume 0.
pub fn polytope_volume(p: &PolyhedronV) -> Result<Rat> {
    if !p.rays.is_empty() {
        return Err(Error::Invalid("volume needs a bounded polytope".into()));
    }
    let pts = dedup_points(&p.vertices);
    if pts.is_empty() {
        return Ok(Rat::zero());
    }
    let dim = pts[0].len();
    if dim == 0 || dim > 3 {
        return Err(Error::DeskScale(format!(
            "volumes are supported in dimensions 1 to 3, got {}",
            dim
        )));
    }
    if pts.iter().any(|q| q.len() != dim) {
        return Err(Error::DimensionMismatch("ragged vertex list".into()));
    }
    if affine_rank(&pts) < dim {
        return Ok(Rat::zero());
    }
    match dim {
        1 => Ok(&pts.last().expect("nonempty")[0] - &pts.first().expect("nonempty")[0]),
        2 => {
            let hull = hull2d(&pts);
            let mut twice = Rat::zero();
            for i in 0..hull.len() {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                twice += &a[0] * &b[1] - &b[0] * &a[1];
            }
            Ok(twice / rat(2, 1))
        }
        _ => {
            let planes = supporting_planes(&pts)?;
            let origin = pts.first().expect("nonempty").clone();
            let mut six = Rat::zero();
            for (normal, offset) in &planes {
                let poly = facet_polygon(&pts, normal, offset);
                for w in poly[1..].windows(2) {
                    six += det3(
                        &sub3(&poly[0], &origin),
                        &sub3(&w[0], &origin),
                        &sub3(&w[1], &origin),
                    );
                }
            }
            Ok(six.abs() / rat(6, 1))
        }
    }
}

/// Minkowski sum of two bounded polytopes on vertex representations.
pub fn minkowski_sum(p: &PolyhedronV, q: &PolyhedronV) -> Result<PolyhedronV> {
    if !p.rays.is_empty() || !q.rays.is_empty() {
        return Err(Error::Invalid("Minkowski sum needs bounded inputs".into()));
    }
    if p.vertices.is_empty() || q.vertices.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let mut cloud = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch(
                    "summands live in different dimensions".into(),
                ));
            }
            cloud.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    Ok(PolyhedronV {
        vertices: hull_vertices(&cloud)?,
        rays: vec![],
    })
}

pub fn scale_polytope(p: &PolyhedronV, s: &Rat) -> PolyhedronV {
    PolyhedronV {
        vertices: p
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c * s).collect())
            .collect(),
        rays: p
            .rays
            .iter()
            .map(|r| r.iter().map(|c| c * s).collect())
            .collect(),
    }
}

fn half_sum(p: &PolyhedronV, q: &PolyhedronV) -> Result<PolyhedronV> {
    minkowski_sum(&scale_polytope(p, &rat(1, 2)), &scale_polytope(q, &rat(1, 2)))
}

/// Whether `q` is a translate of `p`; on success the vector taking `p`
/// onto `q`. Decided by aligning lexicographically least hull vertices.
pub fn translation_equivalent(p: &PolyhedronV, q: &PolyhedronV) -> Result<Option<Vec<Rat>>> {
    if !p.rays.is_empty() || !q.rays.is_empty() {
        return Err(Error::Invalid("translation test needs bounded inputs".into()));
    }
    let vp = hull_vertices(&p.vertices)?;
    let vq = hull_vertices(&q.vertices)?;
    if vp.is_empty() || vq.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if vp.len() != vq.len() || vp[0].len() != vq[0].len() {
        return Ok(None);
    }
    let v: Vec<Rat> = vq[0].iter().zip(&vp[0]).map(|(a, b)| a - b).collect();
    let translated: BTreeSet<Vec<Rat>> = vp
        .iter()
        .map(|pt| pt.iter().zip(&v).map(|(a, b)| a + b).collect())
        .collect();
    let target: BTreeSet<Vec<Rat>> = vq.into_iter().collect();
    Ok(if translated == target { Some(v) } else { None })
}

fn exact_nth_root_int(x: &Int, n: u32) -> Option<Int> {
    if x.is_negative() {
        return None;
    }
    let r = x.nth_root(n);
    if num::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact rational n-th root, when it exists, of a nonnegative rational.
pub fn exact_nth_root(x: &Rat, n: u32) -> Option<Rat> {
    let nu = exact_nth_root_int(x.numer(), n)?;
    let de = exact_nth_root_int(x.denom(), n)?;
    Some(Rat::new(nu, de))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomothetyOutcome {
    Equivalent { scale: Rat, translation: Vec<Rat> },
    /// The volume ratio has no rational n-th root, so no rational scaling
    /// can relate the polytopes.
    IrrationalRatio,
    Distinct,
}

/// Whether `q` is a scaled translate of `p`. The candidate scale is the
/// n-th root of the volume ratio, accepted only when exactly rational.
pub fn homothety_equivalent(p: &PolyhedronV, q: &PolyhedronV) -> Result<HomothetyOutcome> {
    let vol_p = polytope_volume(p)?;
    let vol_q = polytope_volume(q)?;
    if !vol_p.is_positive() || !vol_q.is_positive() {
        return Err(Error::Invalid(
            "homothety test needs full-dimensional polytopes".into(),
        ));
    }
    let n = p.vertices[0].len() as u32;
    let ratio = vol_q / vol_p;
    let scale = match exact_nth_root(&ratio, n) {
        Some(s) => s,
        None => return Ok(HomothetyOutcome::IrrationalRatio),
    };
    let scaled = scale_polytope(p, &scale);
    Ok(match translation_equivalent(&scaled, q)? {
        Some(translation) => HomothetyOutcome::Equivalent { scale, translation },
        None => HomothetyOutcome::Distinct,
    })
}

/// Sign of Vol(½P+½Q)^{1/n} − ½Vol(P)^{1/n} − ½Vol(Q)^{1/n}, decided by
/// exact cross-powering; the rational surrogate Vol(½P+½Q) − ((Vol P^{1/n} +
/// Vol Q^{1/n})/2)^n is attached when both roots are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmGap {
    pub sign: i8,
    pub surrogate: Option<Rat>,
}

pub fn brunn_minkowski_gap(p: &PolyhedronV, q: &PolyhedronV) -> Result<BmGap> {
    let a = polytope_volume(p)?;
    let b = polytope_volume(q)?;
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Invalid(
            "the gap needs full-dimensional polytopes".into(),
        ));
    }
    let n = p.vertices[0].len() as u32;
    let mid = polytope_volume(&half_sum(p, q)?)?;

    let sign = match n {
        1 => {
            let t = rat(2, 1) * &mid - &a - &b;
            sign_of(&t)
        }
        2 => {
            // Compare sqrt(mid) with (sqrt a + sqrt b)/2 by squaring twice.
            let t = rat(4, 1) * &mid - &a - &b;
            if t.is_negative() {
                -1
            } else {
                sign_of(&(&t * &t - rat(4, 1) * &a * &b))
            }
        }
        3 => {
            // 2 mid^{1/3} vs a^{1/3} + b^{1/3}: with s = (ab)^{1/3}(a^{1/3} +
            // b^{1/3}), the comparison reduces to t/3 vs s where s is the
            // root of y^3 - 3ab y - ab(a+b) in its increasing region.
            let t = rat(8, 1) * &mid - &a - &b;
            if t.is_negative() {
                -1
            } else {
                let c = &a * &b;
                let y = t / rat(3, 1);
                if &y * &y < c {
                    -1
                } else {
                    let g = &y * &y * &y - rat(3, 1) * &c * &y - &c * (&a + &b);
                    sign_of(&g)
                }
            }
        }
        other => {
            return Err(Error::DeskScale(format!(
                "gap is supported in dimensions 1 to 3, got {}",
                other
            )))
        }
    };

    let surrogate = match (exact_nth_root(&a, n), exact_nth_root(&b, n)) {
        (Some(ra), Some(rb)) => {
            let mean = (ra + rb) / rat(2, 1);
            Some(&mid - num::pow(mean, n as usize))
        }
        _ => None,
    };
    Ok(BmGap { sign, surrogate })
}

fn sign_of(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A finite family of bounded polytopes indexed by integer vectors.
#[derive(Debug, Clone)]
pub struct IndexedFamily {
    pub members: BTreeMap<Vec<Int>, PolyhedronV>,
}

impl IndexedFamily {
    pub fn new(members: BTreeMap<Vec<Int>, PolyhedronV>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = members.keys().next().expect("nonempty").len();
        let mut ambient = None;
        for (z, p) in &members {
            if z.len() != d {
                return Err(Error::DimensionMismatch(
                    "index points have mixed dimensions".into(),
                ));
            }
            if !p.rays.is_empty() {
                return Err(Error::Invalid(format!(
                    "member at {:?} is unbounded",
                    z
                )));
            }
            let pa = p.vertices.first().map(|v| v.len());
            match (ambient, pa) {
                (None, Some(x)) => ambient = Some(x),
                (Some(x), Some(y)) if x != y => {
                    return Err(Error::DimensionMismatch(
                        "members have mixed ambient dimensions".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(IndexedFamily { members })
    }

    pub fn index_points(&self) -> Vec<Vec<Int>> {
        self.members.keys().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityClass {
    pub parity: Vec<u8>,
    pub representative: Vec<Int>,
    pub members: Vec<Vec<Int>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyVerdict {
    /// Equal volumes and, within every parity class, all members are
    /// translates of the class representative.
    TheoremConsistent { classes: Vec<ParityClass> },
    /// Equal volumes but a same-parity pair is not translation-equivalent,
    /// certified not to come from a convex family: the half-sum of the pair
    /// outgrows the member at their midpoint.
    HypothesisViolated {
        z: Vec<Int>,
        w: Vec<Int>,
        midpoint: Vec<Int>,
    },
    /// Volumes differ; members grouped into homothety classes instead.
    EqualVolumeUnmet {
        homothety_classes: Vec<Vec<Vec<Int>>>,
    },
}

/// Classifies an equal-volume family by parity-class translation structure,
/// or reports why the equal-volume route does not apply.
pub fn classify_family(f: &IndexedFamily) -> Result<FamilyVerdict> {
    let mut volumes: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
    for (z, p) in &f.members {
        let v = polytope_volume(p)?;
        if !v.is_positive() {
            return Err(Error::Invalid(format!(
                "member at {:?} is not full-dimensional",
                z
            )));
        }
        volumes.insert(z.clone(), v);
    }
    let first = volumes.values().next().expect("nonempty").clone();
    if volumes.values().any(|v| v != &first) {
        let mut classes: Vec<Vec<Vec<Int>>> = Vec::new();
        for z in f.members.keys() {
            let mut placed = false;
            for class in classes.iter_mut() {
                let rep = &class[0];
                if matches!(
                    homothety_equivalent(&f.members[rep], &f.members[z])?,
                    HomothetyOutcome::Equivalent { .. }
                ) {
                    class.push(z.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![z.clone()]);
            }
        }
        return Ok(FamilyVerdict::EqualVolumeUnmet {
            homothety_classes: classes,
        });
    }

    let two = int(2);
    let mut by_parity: BTreeMap<Vec<u8>, Vec<Vec<Int>>> = BTreeMap::new();
    for z in f.members.keys() {
        let parity: Vec<u8> = z
            .iter()
            .map(|c| if c.mod_floor(&two).is_zero() { 0 } else { 1 })
            .collect();
        by_parity.entry(parity).or_default().push(z.clone());
    }

    let mut classes = Vec::new();
    for (parity, members) in by_parity {
        let rep = members[0].clone();
        for z in &members[1..] {
            if translation_equivalent(&f.members[&rep], &f.members[z])?.is_some() {
                continue;
            }
            let midpoint: Vec<Int> = rep
                .iter()
                .zip(z.iter())
                .map(|(a, b)| (a + b) / &two)
                .collect();
            let mid_member = f.members.get(&midpoint).ok_or_else(|| {
                Error::Internal(format!(
                    "counterexample candidate: {:?} and {:?} are equal-volume, same \
                     parity, not translates, and the family has no member at the \
                     midpoint {:?} to test the convexity hypothesis",
                    rep, z, midpoint
                ))
            })?;
            let grown = polytope_volume(&half_sum(&f.members[&rep], &f.members[z])?)?;
            let mid_vol = polytope_volume(mid_member)?;
            if grown > mid_vol {
                return Ok(FamilyVerdict::HypothesisViolated {
                    z: rep,
                    w: z.clone(),
                    midpoint,
                });
            }
            return Err(Error::Internal(format!(
                "counterexample candidate: {:?} and {:?} are equal-volume, same \
                 parity, not translates, yet the half-sum volume {} does not exceed \
                 the midpoint volume {}",
                rep, z, grown, mid_vol
            )));
        }
        classes.push(ParityClass {
            parity,
            representative: rep,
            members,
        });
    }
    Ok(FamilyVerdict::TheoremConsistent { classes })
}
