//! Named example constructions shared by the test suites and the CLI.
//!
//! Every fixture builds one concrete artifact: a mixed-integer conic
//! formulation, a natural-number membership oracle, or a piecewise linear
//! function. Parameters arrive as a name-to-rational map so command-line
//! `key=value` pairs can be forwarded without per-fixture plumbing.

use std::collections::BTreeMap;

use num::{One, Signed, ToPrimitive, Zero};

use crate::cones::{ConicBuilder, ElementaryCone};
use crate::error::{Error, Result};
use crate::formulations::MicpFormulation;
use crate::naturals::{fixture_s_epsilon, NaturalOracle};
use crate::pwl::PwlFunction;
use crate::rational::{rat, rint, Rat};

pub const REGISTRY: [&str; 8] = [
    "parity_cube",
    "dense_sqrt2",
    "hyperbola",
    "s_epsilon",
    "concave_balls",
    "lorentz_intcone",
    "figure2_pwl",
    "primes",
];

fn registry_string() -> String {
    REGISTRY.join(", ")
}

#[derive(Debug)]
pub enum FixtureArtifact {
    Formulation(MicpFormulation),
    Oracle(NaturalOracle),
    Pwl(PwlFunction),
}

impl FixtureArtifact {
    pub fn kind(&self) -> &'static str {
        match self {
            FixtureArtifact::Formulation(_) => "micp_formulation",
            FixtureArtifact::Oracle(_) => "natural_oracle",
            FixtureArtifact::Pwl(_) => "pwl_function",
        }
    }
}

/// A fixture request: a registered name plus its parameter map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureDescriptor {
    pub name: String,
    pub parameters: BTreeMap<String, Rat>,
}

impl FixtureDescriptor {
    pub fn new(name: impl Into<String>) -> Self {
        FixtureDescriptor {
            name: name.into(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Rat) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn build(&self) -> Result<FixtureArtifact> {
        fixture(&self.name, &self.parameters)
    }
}

fn check_keys(name: &str, params: &BTreeMap<String, Rat>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            let hint = if allowed.is_empty() {
                "none".to_string()
            } else {
                allowed.join(", ")
            };
            return Err(Error::Invalid(format!(
                "fixture '{}' does not take parameter '{}' (accepted: {})",
                name, key, hint
            )));
        }
    }
    Ok(())
}

fn count_param(params: &BTreeMap<String, Rat>, key: &str, default: u64, min: u64) -> Result<u64> {
    let v = match params.get(key) {
        None => return Ok(default),
        Some(v) => v,
    };
    if !v.is_integer() || v.is_negative() {
        return Err(Error::NonIntegral(format!("parameter '{}' = {}", key, v)));
    }
    let n = v
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::DeskScale(format!("parameter '{}' too large", key)))?;
    if n < min {
        return Err(Error::Invalid(format!(
            "parameter '{}' must be at least {}",
            key, min
        )));
    }
    Ok(n)
}

/// Builds the named example. Unknown names report the full registry.
pub fn fixture(name: &str, parameters: &BTreeMap<String, Rat>) -> Result<FixtureArtifact> {
    match name {
        "parity_cube" => {
            check_keys(name, parameters, &["n"])?;
            let n = count_param(parameters, "n", 3, 1)? as usize;
            Ok(FixtureArtifact::Formulation(parity_cube(n)?))
        }
        "dense_sqrt2" => {
            check_keys(name, parameters, &[])?;
            Ok(FixtureArtifact::Formulation(dense_sqrt2()?))
        }
        "hyperbola" => {
            check_keys(name, parameters, &[])?;
            Ok(FixtureArtifact::Formulation(hyperbola()?))
        }
        "s_epsilon" => {
            check_keys(name, parameters, &["eps", "bound"])?;
            let eps = parameters.get("eps").cloned().unwrap_or_else(|| rat(2, 5));
            let mut oracle = fixture_s_epsilon(&eps)?;
            if parameters.contains_key("bound") {
                oracle.certified_bound = count_param(parameters, "bound", 0, 1)?;
            }
            Ok(FixtureArtifact::Oracle(oracle))
        }
        "concave_balls" => {
            check_keys(name, parameters, &["n"])?;
            let n = count_param(parameters, "n", 2, 1)? as usize;
            Ok(FixtureArtifact::Formulation(concave_balls(n)?))
        }
        "lorentz_intcone" => {
            check_keys(name, parameters, &["n"])?;
            let n = count_param(parameters, "n", 2, 1)? as usize;
            Ok(FixtureArtifact::Formulation(lorentz_intcone(n)?))
        }
        "figure2_pwl" => {
            check_keys(name, parameters, &[])?;
            Ok(FixtureArtifact::Pwl(figure2_pwl()))
        }
        "primes" => {
            check_keys(name, parameters, &["bound"])?;
            let bound = count_param(parameters, "bound", 50, 2)?;
            Ok(FixtureArtifact::Oracle(primes_oracle(bound)))
        }
        _ => Err(Error::UnknownFixture {
            name: name.to_string(),
            registry: registry_string(),
        }),
    }
}

/// Even-parity slice of the binary hypercube: one integer variable ties the
/// coordinate sum to an even number.
///
/// Columns `x0..x{n-1} | z0`; single equality row `sum x - 2 z = 0`. The
/// projection is every point whose coordinate sum is an even integer; on
/// `{0,1}^n` that is exactly the even-parity vertices.
pub fn parity_cube(n: usize) -> Result<MicpFormulation> {
    let mut b = ConicBuilder::new(n + 1);
    let mut entries: Vec<(usize, Rat)> = (0..n).map(|j| (j, Rat::one())).collect();
    entries.push((n, rint(-2)));
    b.zero_row(&entries, Rat::zero());
    MicpFormulation::new(b.build(), n, 0, 1, format!("parity_cube(n={})", n))
}

/// The even-parity vertices of `{0,1}^n`, in lexicographic order.
pub fn even_parity_points(n: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if (mask.count_ones() % 2) == 0 {
            let point = (0..n)
                .map(|j| {
                    if (mask >> (n - 1 - j)) & 1 == 1 {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            out.push(point);
        }
    }
    out
}

/// One continuous output coordinate whose attainable values are the
/// fractional parts `sqrt(2) z - floor(sqrt(2) z)`, a set dense in `[0, 1]`.
///
/// Columns `x | y1 y2 y3 | z1 z2`. Four second-order blocks encode
/// `sqrt(2) z1 <= z2 + 1`, `sqrt(2) z2 <= 2 z1`, `sqrt(2) z1 <= y1`, and
/// `sqrt(2) y1 <= 2 z1`, pinning `y1 = sqrt(2) z1` and `z2 = floor(sqrt(2) z1)`;
/// the equality row sets `x = y1 - z2`. The only rational member is 0.
pub fn dense_sqrt2() -> Result<MicpFormulation> {
    let (x, y1, z1, z2) = (0usize, 1usize, 4usize, 5usize);
    let mut b = ConicBuilder::new(6);
    b.block(
        ElementaryCone::SecondOrder(3),
        vec![
            (vec![(z2, Rat::one())], Rat::one()),
            (vec![(z1, Rat::one())], Rat::zero()),
            (vec![(z1, Rat::one())], Rat::zero()),
        ],
    );
    b.block(
        ElementaryCone::SecondOrder(3),
        vec![
            (vec![(z1, rint(2))], Rat::zero()),
            (vec![(z2, Rat::one())], Rat::zero()),
            (vec![(z2, Rat::one())], Rat::zero()),
        ],
    );
    b.block(
        ElementaryCone::SecondOrder(3),
        vec![
            (vec![(y1, Rat::one())], Rat::zero()),
            (vec![(z1, Rat::one())], Rat::zero()),
            (vec![(z1, Rat::one())], Rat::zero()),
        ],
    );
    b.block(
        ElementaryCone::SecondOrder(3),
        vec![
            (vec![(z1, rint(2))], Rat::zero()),
            (vec![(y1, Rat::one())], Rat::zero()),
            (vec![(y1, Rat::one())], Rat::zero()),
        ],
    );
    b.zero_row(
        &[(x, Rat::one()), (y1, rint(-1)), (z2, Rat::one())],
        Rat::zero(),
    );
    MicpFormulation::new(b.build(), 1, 3, 2, "dense_sqrt2")
}

/// The hyperbola slices `{x : x1 integer, x1 x2 >= 1, x >= 0}`: infinitely
/// many translated-and-stretched rays, one per positive integer `x1`.
///
/// Columns `x1 x2 | z`. A rotated second-order block reads
/// `x1 x2 >= 1^2, x1 >= 0, x2 >= 0`; the equality row makes `x1` integer.
pub fn hyperbola() -> Result<MicpFormulation> {
    let mut b = ConicBuilder::new(3);
    b.block(
        ElementaryCone::RotatedSecondOrder(3),
        vec![
            (vec![(0, Rat::one())], Rat::zero()),
            (vec![(1, Rat::one())], Rat::zero()),
            (vec![], Rat::one()),
        ],
    );
    b.zero_row(&[(0, Rat::one()), (2, rint(-1))], Rat::zero());
    MicpFormulation::new(b.build(), 2, 0, 1, "hyperbola")
}

/// Balls of growing radius along the diagonal: `||x - z 1|| <= z + 1` for a
/// nonnegative integer `z`. Periodic centers, but no finite set of shapes.
///
/// Columns `x0..x{n-1} | z`.
pub fn concave_balls(n: usize) -> Result<MicpFormulation> {
    let z = n;
    let mut b = ConicBuilder::new(n + 1);
    let mut rows = vec![(vec![(z, Rat::one())], Rat::one())];
    for j in 0..n {
        rows.push((vec![(j, Rat::one()), (z, rint(-1))], Rat::zero()));
    }
    b.block(ElementaryCone::SecondOrder(n + 1), rows);
    b.nonneg_row(&[(z, Rat::one())], Rat::zero());
    MicpFormulation::new(b.build(), n, 0, 1, format!("concave_balls(n={})", n))
}

/// Integer points of the second-order cone: `(t, x) in Z^{n+1}` with
/// `||x|| <= t`. Every coordinate is tied to its own integer copy.
///
/// Columns `t x1..xn | z0..zn`.
pub fn lorentz_intcone(n: usize) -> Result<MicpFormulation> {
    let m = n + 1;
    let mut b = ConicBuilder::new(2 * m);
    let rows = (0..m)
        .map(|j| (vec![(j, Rat::one())], Rat::zero()))
        .collect();
    b.block(ElementaryCone::SecondOrder(m), rows);
    for j in 0..m {
        b.zero_row(&[(j, Rat::one()), (m + j, rint(-1))], Rat::zero());
    }
    MicpFormulation::new(b.build(), m, 0, m, format!("lorentz_intcone(n={})", n))
}

/// Piecewise linear interpolant through heights `1, 0, 3/2, 3, 9/2, ...` at
/// the naturals: one falling prefix segment, then constant slope `3/2`.
pub fn figure2_pwl() -> PwlFunction {
    PwlFunction::new(vec![rint(1), rint(0)], vec![rat(3, 2)]).expect("static data is valid")
}

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x % 2 == 0 {
        return x == 2;
    }
    let mut f = 3u64;
    while f * f <= x {
        if x % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn primes_upto(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&x| is_prime(x)).collect()
}

/// Primality oracle certified on `[0, bound]`.
pub fn primes_oracle(bound: u64) -> NaturalOracle {
    NaturalOracle::from_fn(bound, is_prime)
}
