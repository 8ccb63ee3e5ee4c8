//! Subsets of the natural numbers: integral cones of finite generator sets,
//! ultimately periodic normal forms, window-certified periodicity detection,
//! and compilation down to mixed-integer linear formulations.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, Zero};

use crate::cones::ConicBuilder;
use crate::error::{Error, Result};
use crate::formulations::{union_rational, MicpFormulation};
use crate::rational::{Int, Rat};

/// An ultimately periodic subset of the naturals: a finite exceptional part
/// plus, for each occupied residue, the arithmetic progression starting at
/// its minimal offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicNaturalSet {
    /// Members not covered by the periodic part, sorted.
    pub exceptional: Vec<u64>,
    /// Minimal starting points, one per occupied residue class, sorted.
    pub offsets: Vec<u64>,
    /// Positive period of the tail.
    pub period: u64,
}

impl PeriodicNaturalSet {
    /// Validates the canonical-form invariants. A finite set (no offsets)
    /// normalizes its vacuous period to 1.
    pub fn new(mut exceptional: Vec<u64>, mut offsets: Vec<u64>, period: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::Invalid("period must be positive".into()));
        }
        exceptional.sort_unstable();
        exceptional.dedup();
        offsets.sort_unstable();
        offsets.dedup();
        let period = if offsets.is_empty() { 1 } else { period };
        let mut residues = BTreeSet::new();
        for &o in &offsets {
            if !residues.insert(o % period) {
                return Err(Error::Invalid(format!(
                    "offsets share the residue {} mod {}",
                    o % period,
                    period
                )));
            }
        }
        let p = PeriodicNaturalSet {
            exceptional,
            offsets,
            period,
        };
        for &e in &p.exceptional {
            if p.periodic_contains(e) {
                return Err(Error::Invalid(format!(
                    "exceptional member {} is covered by the periodic part",
                    e
                )));
            }
        }
        for &o in &p.offsets {
            if o >= p.period && p.contains(o - p.period) {
                return Err(Error::Invalid(format!(
                    "offset {} is not minimal for its residue",
                    o
                )));
            }
        }
        Ok(p)
    }

    fn periodic_contains(&self, x: u64) -> bool {
        self.offsets
            .iter()
            .any(|&o| x >= o && (x - o) % self.period == 0)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.exceptional.binary_search(&x).is_ok() || self.periodic_contains(x)
    }

    pub fn members_upto(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&x| self.contains(x)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// An exact membership predicate over an initial segment of the naturals.
/// Queries beyond the certified bound are refused rather than guessed.
pub struct NaturalOracle {
    pub certified_bound: u64,
    pred: Box<dyn Fn(u64) -> bool>,
}

impl fmt::Debug for NaturalOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NaturalOracle")
            .field("certified_bound", &self.certified_bound)
            .finish_non_exhaustive()
    }
}

impl NaturalOracle {
    pub fn from_fn(certified_bound: u64, pred: impl Fn(u64) -> bool + 'static) -> Self {
        NaturalOracle {
            certified_bound,
            pred: Box::new(pred),
        }
    }

    pub fn from_members(members: BTreeSet<u64>, certified_bound: u64) -> Self {
        NaturalOracle {
            certified_bound,
            pred: Box::new(move |x| members.contains(&x)),
        }
    }

    pub fn member(&self, x: u64) -> Result<bool> {
        if x > self.certified_bound {
            return Err(Error::InsufficientWindow(format!(
                "query {} exceeds the certified bound {}",
                x, self.certified_bound
            )));
        }
        Ok((self.pred)(x))
    }
}

/// All elements of the integral cone of `generators` up to `bound`, sorted.
pub fn intcone_enumerate(generators: &[u64], bound: u64) -> Result<Vec<u64>> {
    if generators.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for x in 0..=bound {
        if !reach[x as usize] {
            continue;
        }
        for &g in generators {
            if g > 0 && x + g <= bound {
                reach[(x + g) as usize] = true;
            }
        }
    }
    Ok((0..=bound).filter(|&x| reach[x as usize]).collect())
}

/// Normal-form analysis of an integral cone: the gcd, the threshold beyond
/// which (in gcd-reduced terms) every integer is a member, the finite head,
/// and the product-of-head certificate for a valid period.
#[derive(Debug, Clone)]
pub struct IntconeAnalysis {
    pub normal: PeriodicNaturalSet,
    /// gcd of the generators; the minimal eventual period of the cone.
    pub g: u64,
    /// In gcd-reduced terms every integer >= alpha0 is a member.
    pub alpha0: u64,
    /// Members of the reduced cone below alpha0 plus alpha0 itself.
    pub head: Vec<u64>,
    /// Product of the nonzero head members: a valid, generally non-minimal,
    /// period of the reduced tail. Grows fast, hence exact integer.
    pub beta: Int,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Canonical ultimately periodic form of `intcone(generators)`.
pub fn intcone_normal_form(generators: &[u64]) -> Result<PeriodicNaturalSet> {
    Ok(intcone_analyze(generators)?.normal)
}

pub fn intcone_analyze(generators: &[u64]) -> Result<IntconeAnalysis> {
    if generators.is_empty() {
        return Err(Error::EmptyInput);
    }
    let nonzero: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
    if nonzero.is_empty() {
        // Cone of {0} is the finite set {0}.
        return Ok(IntconeAnalysis {
            normal: PeriodicNaturalSet::new(vec![0], vec![], 1)?,
            g: 0,
            alpha0: 0,
            head: vec![0],
            beta: Int::one(),
        });
    }
    let g = nonzero.iter().fold(0u64, |acc, &x| gcd_u64(acc, x));
    let reduced: Vec<u64> = nonzero.iter().map(|&x| x / g).collect();
    let a_min = *reduced.iter().min().expect("nonempty");

    // Find the least threshold with a full run of `a_min` consecutive
    // members: beyond such a run everything is reachable by adding a_min.
    let mut window = {
        let lo = *reduced.iter().min().unwrap();
        let hi = *reduced.iter().max().unwrap();
        ((lo.saturating_sub(1)) * (hi.saturating_sub(1))).max(64)
    };
    let alpha0 = loop {
        let members = intcone_enumerate(&reduced, window + a_min)?;
        let set: Vec<bool> = {
            let mut v = vec![false; (window + a_min + 1) as usize];
            for &m in &members {
                v[m as usize] = true;
            }
            v
        };
        let mut run = 0u64;
        let mut found = None;
        for x in 0..=window + a_min {
            if set[x as usize] {
                run += 1;
                if run >= a_min {
                    found = Some(x + 1 - a_min);
                    break;
                }
            } else {
                run = 0;
            }
        }
        if let Some(start) = found {
            // Everything >= start is a member; the threshold is one past the
            // largest non-member.
            let last_gap = (0..start).rev().find(|&x| !set[x as usize]);
            break match last_gap {
                Some(x) => x + 1,
                None => 0,
            };
        }
        window = window.checked_mul(2).ok_or_else(|| {
            Error::Internal("threshold search window overflow".into())
        })?;
        if window > 1 << 40 {
            return Err(Error::Internal(
                "no consecutive run found; generators do not reduce to gcd 1".into(),
            ));
        }
    };

    let head: Vec<u64> = intcone_enumerate(&reduced, alpha0)?;
    let beta = head
        .iter()
        .filter(|&&x| x > 0)
        .map(|&x| Int::from(x))
        .product::<Int>()
        .max(Int::one());

    // Back in original scale: members are g * (reduced members); the tail
    // beyond g*alpha0 is the single progression g*alpha0 + g*N, and the
    // minimal eventual period is g because all members are multiples of g.
    let threshold = alpha0 * g;
    let contains = |x: u64| x % g == 0 && reduced_member(&head, alpha0, x / g);
    let normal = canonical_from_window(&contains, threshold.max(g), g)?;
    Ok(IntconeAnalysis {
        normal,
        g,
        alpha0,
        head,
        beta,
    })
}

fn reduced_member(head: &[u64], alpha0: u64, y: u64) -> bool {
    y >= alpha0 || head.binary_search(&y).is_ok()
}

/// Builds the canonical triple from a membership predicate known to be
/// `t`-periodic at and beyond `theta`: walks each occupied residue down to
/// its minimal offset and collects the uncovered members as exceptional.
fn canonical_from_window(
    member: &dyn Fn(u64) -> bool,
    theta: u64,
    t: u64,
) -> Result<PeriodicNaturalSet> {
    let mut offsets = Vec::new();
    for r in 0..t {
        let first = theta + ((r + t - theta % t) % t);
        if !member(first) {
            continue;
        }
        let mut o = first;
        while o >= t && member(o - t) {
            o -= t;
        }
        offsets.push(o);
    }
    let probe = PeriodicNaturalSet::new(vec![], offsets.clone(), t)?;
    let mut exceptional = Vec::new();
    for x in 0..theta + t {
        if member(x) && !probe.periodic_contains(x) {
            exceptional.push(x);
        }
    }
    PeriodicNaturalSet::new(exceptional, offsets, t)
}

/// Outcome of window-certified periodicity detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicityOutcome {
    /// Certified on the oracle's window only: the set agrees with this
    /// canonical form on `[0, certified_bound]`.
    Periodic(PeriodicNaturalSet),
    NotPeriodicUpTo(u64),
}

/// Default window floor: at least two full periods beyond any plausible
/// threshold.
pub fn default_window_floor(max_period: u64) -> u64 {
    4 * max_period * max_period
}

/// Searches for the smallest period `t <= max_period` and minimal threshold
/// certifying window periodicity. A candidate period is accepted only when
/// its certified tail covers at least half the window and two full periods;
/// without that cap a threshold near the top of the window would vacuously
/// certify any set. Requires the oracle window to reach the default floor.
pub fn detect_periodicity(oracle: &NaturalOracle, max_period: u64) -> Result<PeriodicityOutcome> {
    detect_periodicity_with_floor(oracle, max_period, default_window_floor(max_period))
}

/// As [`detect_periodicity`] with an explicit window-floor override for
/// callers that certify their own window is adequate.
pub fn detect_periodicity_with_floor(
    oracle: &NaturalOracle,
    max_period: u64,
    floor: u64,
) -> Result<PeriodicityOutcome> {
    if max_period == 0 {
        return Err(Error::Invalid("max period must be positive".into()));
    }
    let bound = oracle.certified_bound;
    if bound < floor {
        return Err(Error::InsufficientWindow(format!(
            "certified bound {} is below the required window {}",
            bound, floor
        )));
    }
    let members: Vec<bool> = {
        let mut v = vec![false; bound as usize + 1];
        for (x, slot) in v.iter_mut().enumerate() {
            *slot = oracle.member(x as u64)?;
        }
        v
    };
    for t in 1..=max_period {
        if 2 * t > bound {
            break;
        }
        let mut theta = 0u64;
        for x in (0..=bound - t).rev() {
            if members[x as usize] != members[(x + t) as usize] {
                theta = x + 1;
                break;
            }
        }
        if theta <= (bound / 2).min(bound - 2 * t) {
            let member = |x: u64| members[x as usize];
            let canon = canonical_from_window(&member, theta, t)?;
            return Ok(PeriodicityOutcome::Periodic(canon));
        }
    }
    Ok(PeriodicityOutcome::NotPeriodicUpTo(max_period))
}

/// Selector formulation of a finite set of naturals: `x = sum_i v_i u_i`
/// over a binary unit simplex.
fn finite_selector(values: &[u64], tag: &str) -> Result<MicpFormulation> {
    let k = values.len();
    let mut b = ConicBuilder::new(1 + k);
    let mut row: Vec<(usize, Rat)> = vec![(0, Rat::one())];
    for (i, &v) in values.iter().enumerate() {
        row.push((1 + i, -Rat::from_integer(Int::from(v))));
    }
    b.zero_row(&row, Rat::zero());
    let simplex: Vec<(usize, Rat)> = (0..k).map(|i| (1 + i, Rat::one())).collect();
    b.zero_row(&simplex, -Rat::one());
    for i in 0..k {
        b.nonneg_row(&[(1 + i, Rat::one())], Rat::zero());
        b.nonneg_row(&[(1 + i, -Rat::one())], Rat::one());
    }
    MicpFormulation::new(b.build(), 1, 0, k, tag.to_string())
}

/// Compiles the canonical form to a mixed-integer linear formulation of
/// `{x}`: the periodic part is an offset selector plus a period counter, and
/// a nonempty exceptional part is joined in as a disjunction.
pub fn to_milp(p: &PeriodicNaturalSet) -> Result<MicpFormulation> {
    let periodic = if p.offsets.is_empty() {
        None
    } else {
        let k = p.offsets.len();
        // x | z_1..z_k (selector), lambda (counter).
        let mut b = ConicBuilder::new(1 + k + 1);
        let lambda = 1 + k;
        let mut row: Vec<(usize, Rat)> = vec![(0, Rat::one())];
        for (i, &o) in p.offsets.iter().enumerate() {
            row.push((1 + i, -Rat::from_integer(Int::from(o))));
        }
        row.push((lambda, -Rat::from_integer(Int::from(p.period))));
        b.zero_row(&row, Rat::zero());
        let simplex: Vec<(usize, Rat)> = (0..k).map(|i| (1 + i, Rat::one())).collect();
        b.zero_row(&simplex, -Rat::one());
        for i in 0..k {
            b.nonneg_row(&[(1 + i, Rat::one())], Rat::zero());
            b.nonneg_row(&[(1 + i, -Rat::one())], Rat::one());
        }
        b.nonneg_row(&[(lambda, Rat::one())], Rat::zero());
        Some(MicpFormulation::new(
            b.build(),
            1,
            0,
            k + 1,
            format!("naturals(offsets={}, period={})", k, p.period),
        )?)
    };

    let exceptional = if p.exceptional.is_empty() {
        None
    } else {
        Some(finite_selector(
            &p.exceptional,
            &format!("naturals(exceptional={})", p.exceptional.len()),
        )?)
    };

    match (exceptional, periodic) {
        (Some(e), Some(q)) => union_rational(&e, &q),
        (Some(e), None) => Ok(e),
        (None, Some(q)) => Ok(q),
        (None, None) => finite_selector(&[], "naturals(empty)"),
    }
}

/// Search window for the integer columns of [`to_milp`] output when
/// enumerating members up to `bound`.
pub fn milp_window(f: &MicpFormulation, bound: u64) -> Vec<(Int, Int)> {
    let lam = Int::from(bound);
    (0..f.d)
        .map(|_| (Int::zero(), lam.clone()))
        .collect()
}

/// Exact membership oracle for the closure-counterexample set: naturals `x`
/// whose fractional part of `sqrt(2) x` avoids the open interval
/// `(eps, 1 - sqrt(2) eps)`. Validity requires `0 < eps (1 + sqrt 2) < 1`,
/// checked by squaring.
pub fn fixture_s_epsilon(eps: &Rat) -> Result<NaturalOracle> {
    if !eps.is_positive() {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let p = eps.numer().clone();
    let q = eps.denom().clone();
    // eps (1 + sqrt 2) < 1  <=>  sqrt(2) p < q - p  <=>  2 p^2 < (q - p)^2.
    let lhs = Int::from(2) * &p * &p;
    let diff = &q - &p;
    if !diff.is_positive() || lhs >= &diff * &diff {
        return Err(Error::Invalid(format!(
            "eps = {} is out of range: need eps (1 + sqrt 2) < 1",
            eps
        )));
    }
    let bound = 1_000_000_000u64;
    Ok(NaturalOracle::from_fn(bound, move |x| {
        let xi = Int::from(x);
        let two_x2 = Int::from(2) * &xi * &xi;
        let m = two_x2.sqrt();
        // frac(sqrt(2) x) <= eps  <=>  2 q^2 x^2 <= (q m + p)^2.
        let left = &two_x2 * &q * &q;
        let anchor = &q * &m + &p;
        if left <= &anchor * &anchor {
            return true;
        }
        // frac(sqrt(2) x) >= 1 - sqrt(2) eps  <=>  2 (q x + p)^2 >= q^2 (m+1)^2.
        let shifted = &q * &xi + &p;
        let rhs = &q * (&m + Int::one());
        Int::from(2) * &shifted * &shifted >= &rhs * &rhs
    }))
}
