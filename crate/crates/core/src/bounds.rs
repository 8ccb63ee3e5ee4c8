//! Midpoint-exclusion witnesses: finite certificates that a set needs many
//! integer variables in any mixed-integer convex description.
//!
//! A list of points is a witness of strength `w` when the midpoint of every
//! pair lies outside the examined set. Any formulation of that set then
//! needs at least `ceil(log2 w)` integer variables, because points sharing
//! the integer part of a feasible lift would average to a member.

use std::collections::{BTreeMap, BTreeSet};

use num::Integer;

use crate::error::{Error, Result};
use crate::rational::{Int, Rat};

/// Largest candidate count for which the exact clique search is attempted.
pub const EXACT_CLIQUE_CAP: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// Points whose pairwise midpoints all avoid the examined set, together with
/// the implied lower bound on the number of integer variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidpointWitness {
    pub points: Vec<Vec<Rat>>,
    pub w: usize,
    pub bound: u32,
}

pub fn ceil_log2(w: usize) -> u32 {
    let mut b = 0u32;
    while (1usize << b) < w {
        b += 1;
    }
    b
}

impl MidpointWitness {
    /// Builds a witness after re-verifying the midpoint-exclusion property
    /// against the membership predicate.
    pub fn verified(
        points: Vec<Vec<Rat>>,
        member: &mut impl FnMut(&[Rat]) -> Result<bool>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let mid = midpoint(&points[i], &points[j]);
                if member(&mid)? {
                    return Err(Error::Internal(format!(
                        "witness pair ({}, {}) has a member midpoint",
                        i, j
                    )));
                }
            }
        }
        let w = points.len();
        Ok(MidpointWitness {
            points,
            w,
            bound: ceil_log2(w),
        })
    }
}

fn midpoint(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x + y) / (Rat::from_integer(Int::from(2))))
        .collect()
}

/// The implied lower bound on the number of integer variables.
pub fn dimension_lower_bound(witness: &MidpointWitness) -> u32 {
    ceil_log2(witness.w)
}

/// Searches the candidate points for a strongest midpoint-exclusion witness
/// with respect to the membership predicate. Candidates are deduplicated and
/// ordered lexicographically; the result is deterministic in both modes. In
/// exact mode the lexicographically smallest maximum clique of the exclusion
/// graph is returned; `w_target` stops the search at the first clique of
/// that size.
pub fn strongest_witness(
    candidates: &[Vec<Rat>],
    member: &mut impl FnMut(&[Rat]) -> Result<bool>,
    mode: SearchMode,
    w_target: Option<usize>,
) -> Result<MidpointWitness> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = candidates[0].len();
    if candidates.iter().any(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch(
            "candidate points have mixed dimensions".into(),
        ));
    }
    let points: Vec<Vec<Rat>> = candidates
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let m = points.len();

    if mode == SearchMode::Exact && m > EXACT_CLIQUE_CAP {
        return Err(Error::DeskScale(format!(
            "exact clique search handles at most {} candidates, got {}",
            EXACT_CLIQUE_CAP, m
        )));
    }

    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let excluded = !member(&midpoint(&points[i], &points[j]))?;
            adj[i][j] = excluded;
            adj[j][i] = excluded;
        }
    }

    let clique = match mode {
        SearchMode::Greedy => greedy_clique(&adj),
        SearchMode::Exact => exact_clique(&adj, w_target),
    };
    let chosen: Vec<Vec<Rat>> = clique.into_iter().map(|i| points[i].clone()).collect();
    MidpointWitness::verified(chosen, member)
}

/// Convenience form: the candidate list is also the set, so membership is
/// exact containment in the list.
pub fn witness_from_points(
    points: &[Vec<Rat>],
    mode: SearchMode,
    w_target: Option<usize>,
) -> Result<MidpointWitness> {
    let set: BTreeSet<Vec<Rat>> = points.iter().cloned().collect();
    strongest_witness(
        points,
        &mut |x: &[Rat]| Ok(set.contains(x)),
        mode,
        w_target,
    )
}

fn greedy_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for v in 0..adj.len() {
        if clique.iter().all(|&u| adj[u][v]) {
            clique.push(v);
        }
    }
    clique
}

/// Upper bound on the clique number of the subgraph induced by `allowed`,
/// via greedy coloring in index order.
fn coloring_bound(adj: &[Vec<bool>], allowed: &[usize]) -> usize {
    let mut colors: Vec<Vec<usize>> = Vec::new();
    for &v in allowed {
        let mut placed = false;
        for class in colors.iter_mut() {
            if class.iter().all(|&u| !adj[u][v]) {
                class.push(v);
                placed = true;
                break;
            }
        }
        if !placed {
            colors.push(vec![v]);
        }
    }
    colors.len()
}

/// Two-phase exact search: first the maximum size with standard pruning,
/// then the lexicographically first clique of that size in depth-first index
/// order. With a target size, the first clique reaching it is returned
/// directly.
fn exact_clique(adj: &[Vec<bool>], w_target: Option<usize>) -> Vec<usize> {
    let all: Vec<usize> = (0..adj.len()).collect();

    if let Some(target) = w_target {
        let mut current = Vec::new();
        if let Some(found) = find_of_size(adj, &mut current, &all, target) {
            return found;
        }
        // No clique of the requested size; fall through to the maximum.
    }

    let mut best = Vec::new();
    let mut current = Vec::new();
    max_size(adj, &mut current, &all, &mut best);
    let size = best.len();

    let mut current = Vec::new();
    find_of_size(adj, &mut current, &all, size).expect("a clique of the maximum size exists")
}

fn max_size(adj: &[Vec<bool>], current: &mut Vec<usize>, allowed: &[usize], best: &mut Vec<usize>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if current.len() + coloring_bound(adj, allowed) <= best.len() {
        return;
    }
    for (k, &v) in allowed.iter().enumerate() {
        if current.len() + (allowed.len() - k) <= best.len() {
            break;
        }
        let next: Vec<usize> = allowed[k + 1..]
            .iter()
            .copied()
            .filter(|&u| adj[v][u])
            .collect();
        current.push(v);
        max_size(adj, current, &next, best);
        current.pop();
    }
}

fn find_of_size(
    adj: &[Vec<bool>],
    current: &mut Vec<usize>,
    allowed: &[usize],
    size: usize,
) -> Option<Vec<usize>> {
    if current.len() == size {
        return Some(current.clone());
    }
    if current.len() + allowed.len() < size {
        return None;
    }
    if current.len() + coloring_bound(adj, allowed) < size {
        return None;
    }
    for (k, &v) in allowed.iter().enumerate() {
        if current.len() + (allowed.len() - k) < size {
            break;
        }
        let next: Vec<usize> = allowed[k + 1..]
            .iter()
            .copied()
            .filter(|&u| adj[v][u])
            .collect();
        current.push(v);
        if let Some(found) = find_of_size(adj, current, &next, size) {
            return Some(found);
        }
        current.pop();
    }
    None
}

/// Groups integer vectors by componentwise parity. Two vectors in the same
/// class have an integral midpoint.
pub fn parity_classes(zs: &[Vec<Int>]) -> Result<BTreeMap<Vec<u8>, Vec<Vec<Int>>>> {
    if let Some(first) = zs.first() {
        let dim = first.len();
        if zs.iter().any(|z| z.len() != dim) {
            return Err(Error::DimensionMismatch(
                "integer vectors have mixed dimensions".into(),
            ));
        }
    }
    let two = Int::from(2);
    let mut classes: BTreeMap<Vec<u8>, Vec<Vec<Int>>> = BTreeMap::new();
    for z in zs {
        let key: Vec<u8> = z
            .iter()
            .map(|v| u8::try_from(v.mod_floor(&two)).expect("residue mod 2"))
            .collect();
        classes.entry(key).or_default().push(z.clone());
    }
    Ok(classes)
}
