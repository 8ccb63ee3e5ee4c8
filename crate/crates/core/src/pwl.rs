//! Graphs of rational piecewise-linear functions with integer breakpoints:
//! periodicity of the slope word, compilation to mixed-integer formulations
//! whose integer slices are full unit-step segments, and the split of a
//! general function into a finite head plus a periodic tail.

use num::{One, Zero};

use crate::cones::ConicBuilder;
use crate::error::{Error, Result};
use crate::formulations::{union_rational, MicpFormulation};
use crate::polyhedron::PolyhedronH;
use crate::rational::{Int, Rat};

fn rint_u(u: u64) -> Rat {
    Rat::from_integer(Int::from(u))
}

/// A continuous piecewise-linear function on the nonnegative reals with
/// breakpoints at the integers: explicit values at `0..=m`, then slopes
/// cycling through a repeating block forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwlFunction {
    /// Values at the integers `0..=m`.
    pub prefix_values: Vec<Rat>,
    /// Slopes on `[m+i, m+i+1]`, cycling with the block length.
    pub repeating_slopes: Vec<Rat>,
    pub m: u64,
}

impl PwlFunction {
    pub fn new(prefix_values: Vec<Rat>, repeating_slopes: Vec<Rat>) -> Result<Self> {
        if prefix_values.is_empty() {
            return Err(Error::Invalid("need at least the value at 0".into()));
        }
        if repeating_slopes.is_empty() {
            return Err(Error::Invalid("repeating slope block must be nonempty".into()));
        }
        let m = prefix_values.len() as u64 - 1;
        Ok(PwlFunction {
            prefix_values,
            repeating_slopes,
            m,
        })
    }

    /// Slope on the unit interval `[i, i+1]`.
    pub fn slope(&self, i: u64) -> Rat {
        if i < self.m {
            &self.prefix_values[(i + 1) as usize] - &self.prefix_values[i as usize]
        } else {
            let l = self.repeating_slopes.len() as u64;
            self.repeating_slopes[((i - self.m) % l) as usize].clone()
        }
    }

    /// Value at the integer `i`.
    pub fn value_int(&self, i: u64) -> Rat {
        if i <= self.m {
            return self.prefix_values[i as usize].clone();
        }
        let l = self.repeating_slopes.len() as u64;
        let steps = i - self.m;
        let cycles = steps / l;
        let rem = steps % l;
        let block_sum: Rat = self.repeating_slopes.iter().sum();
        let partial: Rat = self.repeating_slopes[..rem as usize].iter().sum();
        self.prefix_values[self.m as usize].clone()
            + Rat::from_integer(Int::from(cycles)) * block_sum
            + partial
    }

    /// Value at any nonnegative rational point.
    pub fn value(&self, x: &Rat) -> Result<Rat> {
        if x < &Rat::zero() {
            return Err(Error::Invalid(format!("{} is outside the domain", x)));
        }
        let i = x.floor().to_integer();
        let i_u = u64::try_from(&i)
            .map_err(|_| Error::DeskScale(format!("argument {} too large", x)))?;
        let frac = x - Rat::from_integer(i);
        Ok(self.value_int(i_u) + frac * self.slope(i_u))
    }

    /// The segment triple at index `i`: left value and rise over the step.
    pub fn segment(&self, i: u64) -> (u64, Rat, Rat) {
        (i, self.value_int(i), self.slope(i))
    }

    /// Segments `0..=hi` as a segment set.
    pub fn sample_segments(&self, hi: u64) -> SegmentSet {
        SegmentSet::new((0..=hi).map(|i| self.segment(i)).collect())
            .expect("indices are distinct")
    }
}

/// A set of unit-step segments in the plane: `(i, x, c)` is the segment from
/// `(i, x)` to `(i+1, x+c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentSet {
    pub segments: Vec<(u64, Rat, Rat)>,
}

impl SegmentSet {
    pub fn new(mut segments: Vec<(u64, Rat, Rat)>) -> Result<Self> {
        segments.sort_by_key(|s| s.0);
        for w in segments.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!(
                    "two segments share the index {}",
                    w[0].0
                )));
            }
        }
        Ok(SegmentSet { segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Whether the segments form the graph of a function on a contiguous
    /// range: consecutive indices with matching endpoints. Sets with gaps
    /// are still valid segment sets, just not graphs.
    pub fn is_contiguous_graph(&self) -> bool {
        self.segments.windows(2).all(|w| {
            let (i, x, c) = &w[0];
            let (j, y, _) = &w[1];
            *j == i + 1 && *y == x + c
        })
    }

    pub fn polyhedra(&self) -> Vec<PolyhedronH> {
        self.segments
            .iter()
            .map(|(i, x, c)| segment_polyhedron(*i, x, c))
            .collect()
    }
}

/// H-form of the segment from `(i, x)` to `(i+1, x+c)`.
pub fn segment_polyhedron(i: u64, x: &Rat, c: &Rat) -> PolyhedronH {
    let left = rint_u(i);
    let eqs = vec![(vec![-c.clone(), Rat::one()], x - c * &left)];
    let ineqs = vec![
        (vec![Rat::one(), Rat::zero()], &left + Rat::one()),
        (vec![-Rat::one(), Rat::zero()], -left),
    ];
    PolyhedronH::new(2, ineqs, eqs).expect("rows are two-dimensional")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwlMode {
    /// Period must hold from index 0.
    Global,
    /// Period may start after a finite head.
    Eventual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PwlPeriodicity {
    Periodic { threshold: u64, period: u64 },
    NotPeriodic,
}

/// Minimal period of the slope word, with the minimal threshold from which
/// it holds. The tail forces any period to be a multiple of the block's
/// primitive cyclic period, so that period is minimal; the threshold then
/// walks down through any prefix slopes the cycle absorbs.
pub fn detect_pwl_period(p: &PwlFunction, mode: PwlMode) -> PwlPeriodicity {
    let l = p.repeating_slopes.len() as u64;
    let q0 = (1..=l)
        .filter(|q| l % q == 0)
        .find(|&q| {
            (0..l).all(|j| {
                p.repeating_slopes[((j + q) % l) as usize] == p.repeating_slopes[j as usize]
            })
        })
        .expect("the full block length always works");
    let mut theta = p.m;
    while theta > 0 && p.slope(theta - 1) == p.slope(theta - 1 + q0) {
        theta -= 1;
    }
    match mode {
        PwlMode::Eventual => PwlPeriodicity::Periodic {
            threshold: theta,
            period: q0,
        },
        PwlMode::Global if theta == 0 => PwlPeriodicity::Periodic {
            threshold: 0,
            period: q0,
        },
        PwlMode::Global => PwlPeriodicity::NotPeriodic,
    }
}

/// Selector formulation over unit-step segments starting at `origin`:
/// `values` lists the function at `origin..=origin+k`. With a counter, the
/// whole family repeats along the translation `(k, values[k] - values[0])`.
///
/// Columns: `x1 x2 | theta_0..theta_{k-1} | z_0..z_{k-1} [lambda]`.
fn segment_selector(
    origin: u64,
    values: &[Rat],
    with_counter: bool,
    tag: &str,
) -> Result<MicpFormulation> {
    let k = values.len() - 1;
    if k == 0 {
        return Err(Error::Invalid("need at least one segment".into()));
    }
    let theta0 = 2;
    let z0 = 2 + k;
    let lambda = z0 + k;
    let ambient = if with_counter { lambda + 1 } else { lambda };
    let mut b = ConicBuilder::new(ambient);

    let mut row1: Vec<(usize, Rat)> = vec![(0, Rat::one())];
    let mut row2: Vec<(usize, Rat)> = vec![(1, Rat::one())];
    for j in 0..k {
        row1.push((z0 + j, -rint_u(origin + j as u64)));
        row1.push((theta0 + j, -Rat::one()));
        row2.push((z0 + j, -values[j].clone()));
        row2.push((theta0 + j, -(&values[j + 1] - &values[j])));
    }
    if with_counter {
        row1.push((lambda, -rint_u(k as u64)));
        row2.push((lambda, -(&values[k] - &values[0])));
    }
    b.zero_row(&row1, Rat::zero());
    b.zero_row(&row2, Rat::zero());

    let simplex: Vec<(usize, Rat)> = (0..k).map(|j| (z0 + j, Rat::one())).collect();
    b.zero_row(&simplex, -Rat::one());
    for j in 0..k {
        b.nonneg_row(&[(theta0 + j, Rat::one())], Rat::zero());
        b.nonneg_row(&[(z0 + j, Rat::one()), (theta0 + j, -Rat::one())], Rat::zero());
        b.nonneg_row(&[(z0 + j, Rat::one())], Rat::zero());
        b.nonneg_row(&[(z0 + j, -Rat::one())], Rat::one());
    }
    if with_counter {
        b.nonneg_row(&[(lambda, Rat::one())], Rat::zero());
    }
    let d = if with_counter { k + 1 } else { k };
    MicpFormulation::new(b.build(), 2, k, d, tag.to_string())
}

/// Compiles a globally periodic function to a formulation of its graph.
/// Every integer slice projects to one full unit-step segment.
pub fn pwl_to_milp(p: &PwlFunction) -> Result<MicpFormulation> {
    let t = match detect_pwl_period(p, PwlMode::Global) {
        PwlPeriodicity::Periodic { period, .. } => period,
        PwlPeriodicity::NotPeriodic => {
            return Err(Error::Invalid(
                "slope word is not globally periodic; split head and tail with pwl_decompose"
                    .into(),
            ))
        }
    };
    let values: Vec<Rat> = (0..=t).map(|i| p.value_int(i)).collect();
    segment_selector(0, &values, true, &format!("pwl_periodic(t={})", t))
}

/// A function split at its periodicity threshold: the finite head as bare
/// segments, and one formulation of the whole graph (head joined to the
/// compiled periodic tail).
#[derive(Debug, Clone)]
pub struct PwlDecomposition {
    pub head: SegmentSet,
    pub formulation: MicpFormulation,
    pub threshold: u64,
    pub period: u64,
}

pub fn pwl_decompose(p: &PwlFunction) -> Result<PwlDecomposition> {
    let (theta, t) = match detect_pwl_period(p, PwlMode::Eventual) {
        PwlPeriodicity::Periodic { threshold, period } => (threshold, period),
        PwlPeriodicity::NotPeriodic => unreachable!("eventual mode always finds a period"),
    };
    let tail_values: Vec<Rat> = (theta..=theta + t).map(|i| p.value_int(i)).collect();
    let tail = segment_selector(
        theta,
        &tail_values,
        true,
        &format!("pwl_tail(origin={}, t={})", theta, t),
    )?;
    if theta == 0 {
        return Ok(PwlDecomposition {
            head: SegmentSet::new(vec![])?,
            formulation: tail,
            threshold: 0,
            period: t,
        });
    }
    let head_segments: Vec<(u64, Rat, Rat)> = (0..theta).map(|i| p.segment(i)).collect();
    let head_values: Vec<Rat> = (0..=theta).map(|i| p.value_int(i)).collect();
    let head = segment_selector(0, &head_values, false, &format!("pwl_head(k={})", theta))?;
    let formulation = union_rational(&head, &tail)?;
    Ok(PwlDecomposition {
        head: SegmentSet::new(head_segments)?,
        formulation,
        threshold: theta,
        period: t,
    })
}
