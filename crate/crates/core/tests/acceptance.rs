//! End-to-end acceptance checks. Each test prints one PASS/FAIL line and
//! enforces its own wall-clock budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use micp_forge_core::bounds::{strongest_witness, MidpointWitness, SearchMode};
use micp_forge_core::cones::ConicSet;
use micp_forge_core::fixtures::{even_parity_points, is_prime, primes_upto};
use micp_forge_core::formulations::{
    decompose_bounded, union_basic, union_ideal, union_projected, IdealVerdict, MicpFormulation,
};
use micp_forge_core::naturals::{
    detect_periodicity_with_floor, fixture_s_epsilon, milp_window, to_milp, NaturalOracle,
    PeriodicNaturalSet, PeriodicityOutcome,
};
use micp_forge_core::polyhedron::{LinearMax, PolyhedronH, PolyhedronV};
use micp_forge_core::pwl::{pwl_decompose, PwlFunction};
use micp_forge_core::rational::{
    hnf_int, int, rat, unimodular_completion, ColumnPosition, Int, IntegerMatrix, Rat,
};
use micp_forge_core::shapes::{
    brunn_minkowski_gap, homothety_equivalent, hull_facets, hull_vertices, polytope_volume,
    scale_polytope, HomothetyOutcome,
};
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(label: &str, limit: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= limit => {
            println!("PASS {} ({:.2?}, limit {:?})", label, elapsed, limit);
        }
        Ok(()) => {
            println!(
                "FAIL {}: over time budget ({:.2?} > {:?})",
                label, elapsed, limit
            );
            panic!("{} exceeded its time budget", label);
        }
        Err(e) => {
            println!("FAIL {}: {}", label, e);
            panic!("{}: {}", label, e);
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<T>(tag: &str) -> impl FnOnce(T) -> String + '_
where
    T: std::fmt::Display,
{
    move |e| format!("{}: {}", tag, e)
}

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rat {
    rat(rng.gen_range(lo..=hi), rng.gen_range(1..=max_den))
}

/// Random nonempty interval [a, b] as an H-polyhedron over one variable.
fn random_interval(rng: &mut ChaCha8Rng) -> PolyhedronH {
    let mut a = rand_rat(rng, -6, 6, 3);
    let mut b = rand_rat(rng, -6, 6, 3);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    PolyhedronH::new(
        1,
        vec![(vec![-Rat::one()], -a), (vec![Rat::one()], b)],
        vec![],
    )
    .expect("interval rows")
}

/// Random full-dimensional polytope in `dim` dimensions, facet form.
fn random_polytope_h(rng: &mut ChaCha8Rng, dim: usize) -> PolyhedronH {
    loop {
        let k = rng.gen_range(dim + 1..=dim + 4);
        let cloud: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..dim).map(|_| rand_rat(rng, -6, 6, 3)).collect())
            .collect();
        if let Ok(facets) = hull_facets(&cloud) {
            return PolyhedronH::new(dim, facets, vec![]).expect("facet rows");
        }
    }
}

/// Random full-dimensional 2D polytope in generator form.
fn random_polytope_v(rng: &mut ChaCha8Rng) -> PolyhedronV {
    loop {
        let k = rng.gen_range(3..=6);
        let cloud: Vec<Vec<Rat>> = (0..k)
            .map(|_| vec![rand_rat(rng, -6, 6, 3), rand_rat(rng, -6, 6, 3)])
            .collect();
        let Ok(vertices) = hull_vertices(&cloud) else {
            continue;
        };
        let p = PolyhedronV {
            vertices,
            rays: vec![],
        };
        if polytope_volume(&p).map(|v| v.is_positive()).unwrap_or(false) {
            return p;
        }
    }
}

fn unit_index(d: usize, i: usize) -> Vec<Int> {
    (0..d).map(|j| if j == i { Int::one() } else { Int::zero() }).collect()
}

/// Brute-force canonical triple of a natural-number set given as a
/// membership bitmap: minimal eventual period, minimal offsets per occupied
/// residue, leftovers as the exceptional part.
fn canonical_triple_oracle(members: &[bool], max_period: usize) -> (Vec<u64>, Vec<u64>, u64) {
    let n = members.len();
    for t in 1..=max_period {
        let mut theta = 0usize;
        for x in (0..n - t).rev() {
            if members[x] != members[x + t] {
                theta = x + 1;
                break;
            }
        }
        if theta > (n / 2).min(n - 2 * t) {
            continue;
        }
        let mut offsets = Vec::new();
        for x in theta..theta + t {
            if !members[x] {
                continue;
            }
            let mut o = x;
            while o >= t && members[o - t] {
                o -= t;
            }
            offsets.push(o as u64);
        }
        offsets.sort_unstable();
        let exceptional: Vec<u64> = (0..n)
            .filter(|&x| {
                members[x]
                    && !offsets
                        .iter()
                        .any(|&o| x as u64 >= o && (x as u64 - o) % t as u64 == 0)
            })
            .map(|x| x as u64)
            .collect();
        return (exceptional, offsets, t as u64);
    }
    panic!("no period <= {} in the bitmap", max_period);
}

/// The three union builders agree with the input pair slice-by-slice.
fn union_matches_inputs(
    f: &MicpFormulation,
    inputs: &[PolyhedronH; 2],
    tag: &str,
) -> Result<(), String> {
    let window: Vec<(Int, Int)> = vec![(Int::zero(), Int::one()); f.d];
    let fam = f.enumerate_slices(&window).map_err(err(tag))?;
    ensure(fam.slices.len() == 2, || {
        format!("{}: expected 2 nonempty slices, got {}", tag, fam.slices.len())
    })?;
    let e0 = unit_index(f.d, f.d - 2);
    let e1 = unit_index(f.d, f.d - 1);
    let (Some(s0), Some(s1)) = (fam.slices.get(&e0), fam.slices.get(&e1)) else {
        return Err(format!("{}: slices are not indexed by unit vectors", tag));
    };
    let direct = s0.set_equal(&inputs[0]).map_err(err(tag))?
        && s1.set_equal(&inputs[1]).map_err(err(tag))?;
    let swapped = s0.set_equal(&inputs[1]).map_err(err(tag))?
        && s1.set_equal(&inputs[0]).map_err(err(tag))?;
    ensure(direct || swapped, || {
        format!("{}: slice family differs from the input pair", tag)
    })
}

#[test]
fn acceptance_01_union_slices_reproduce_inputs() {
    report(
        "union builders vs brute-force union (100 pairs)",
        Duration::from_secs(60),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for case in 0..100 {
                let dim = 1 + case % 2;
                let inputs = if dim == 1 {
                    [random_interval(&mut rng), random_interval(&mut rng)]
                } else {
                    [
                        random_polytope_h(&mut rng, 2),
                        random_polytope_h(&mut rng, 2),
                    ]
                };
                let sets = [
                    ConicSet::from_polyhedron(&inputs[0]),
                    ConicSet::from_polyhedron(&inputs[1]),
                ];
                let basic = union_basic(&sets).map_err(err("union_basic"))?;
                let projected = union_projected(&sets, dim).map_err(err("union_projected"))?;
                let ideal = union_ideal(&sets, dim).map_err(err("union_ideal"))?;
                for (f, tag) in [
                    (&basic, "union_basic"),
                    (&projected, "union_projected"),
                    (&ideal, "union_ideal"),
                ] {
                    union_matches_inputs(f, &inputs, tag)
                        .map_err(|e| format!("case {}: {}", case, e))?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_02_ideal_unions_pass_the_ideality_check() {
    report(
        "check_ideal on 50 ideal-mode unions",
        Duration::from_secs(120),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for case in 0..50 {
                let inputs = [random_interval(&mut rng), random_interval(&mut rng)];
                let sets = [
                    ConicSet::from_polyhedron(&inputs[0]),
                    ConicSet::from_polyhedron(&inputs[1]),
                ];
                let f = union_ideal(&sets, 1).map_err(err("union_ideal"))?;
                ensure(f.set.ambient_dim <= 6, || {
                    format!("case {}: ambient {} too large", case, f.set.ambient_dim)
                })?;
                let verdict = f.check_ideal().map_err(err("check_ideal"))?;
                ensure(verdict == IdealVerdict::Ideal, || {
                    format!("case {}: verdict {:?}", case, verdict)
                })?;
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_03_parity_cube_witness_strength() {
    report(
        "parity-cube midpoint witness, n = 2..6",
        Duration::from_secs(10),
        || {
            for n in 2..=6usize {
                let points = even_parity_points(n);
                let set: BTreeSet<Vec<Rat>> = points.iter().cloned().collect();
                let witness =
                    MidpointWitness::verified(points, &mut |x: &[Rat]| Ok(set.contains(x)))
                        .map_err(err("witness verification"))?;
                ensure(witness.w == 1 << (n - 1), || {
                    format!("n = {}: w = {}, expected {}", n, witness.w, 1 << (n - 1))
                })?;
                ensure(witness.bound == (n - 1) as u32, || {
                    format!("n = {}: bound = {}, expected {}", n, witness.bound, n - 1)
                })?;
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_04_prime_clique_lower_bound() {
    report(
        "midpoint clique among primes <= 50",
        Duration::from_secs(1),
        || {
            let mut member = |x: &[Rat]| {
                if !x[0].is_integer() || x[0].is_negative() {
                    return Ok(false);
                }
                Ok(x[0]
                    .to_integer()
                    .to_u64()
                    .map(is_prime)
                    .unwrap_or(false))
            };
            let example = vec![
                vec![rat(3, 1)],
                vec![rat(5, 1)],
                vec![rat(13, 1)],
            ];
            MidpointWitness::verified(example, &mut member)
                .map_err(err("example clique {3, 5, 13}"))?;

            let candidates: Vec<Vec<Rat>> = primes_upto(50)
                .into_iter()
                .map(|p| vec![Rat::from_integer(Int::from(p))])
                .collect();
            let witness = strongest_witness(&candidates, &mut member, SearchMode::Exact, None)
                .map_err(err("clique search"))?;
            ensure(witness.w >= 3, || format!("clique size {} < 3", witness.w))?;
            ensure(witness.bound >= 2, || format!("bound {} < 2", witness.bound))
        },
    );
}

#[test]
fn acceptance_05_naturals_round_trip() {
    report(
        "200 periodic natural sets: compile, enumerate, re-detect",
        Duration::from_secs(60),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for case in 0..200 {
                let t = rng.gen_range(1..=20u64);
                let mut offsets: BTreeSet<u64> = (0..rng.gen_range(0..=3usize))
                    .map(|_| rng.gen_range(0..t))
                    .collect();
                let exceptional: BTreeSet<u64> = (0..rng.gen_range(0..=3usize))
                    .map(|_| rng.gen_range(0..40u64))
                    .filter(|&e| !offsets.iter().any(|&o| e >= o && (e - o) % t == 0))
                    .collect();
                if offsets.is_empty() && exceptional.is_empty() {
                    offsets.insert(rng.gen_range(0..t));
                }
                let ps = PeriodicNaturalSet::new(
                    exceptional.into_iter().collect(),
                    offsets.into_iter().collect(),
                    t,
                )
                .map_err(err("canonical form"))?;

                let f = to_milp(&ps).map_err(err("to_milp"))?;
                let members = f
                    .integer_members_1d(&Int::zero(), &int(1000), &milp_window(&f, 1000))
                    .map_err(err("member enumeration"))?;
                let expected: BTreeSet<Int> =
                    ps.members_upto(1000).into_iter().map(Int::from).collect();
                ensure(members == expected, || {
                    format!("case {}: formulation members differ from {:?}", case, ps)
                })?;

                let mut bitmap = vec![false; 1001];
                for m in &members {
                    bitmap[m.to_usize().unwrap()] = true;
                }
                let canon = canonical_triple_oracle(&bitmap, 20);

                let oracle = NaturalOracle::from_members(
                    members.iter().map(|m| m.to_u64().unwrap()).collect(),
                    1000,
                );
                match detect_periodicity_with_floor(&oracle, 20, 1000)
                    .map_err(err("detection"))?
                {
                    PeriodicityOutcome::Periodic(q) => {
                        let got = (q.exceptional.clone(), q.offsets.clone(), q.period);
                        ensure(got == canon, || {
                            format!(
                                "case {}: detected {:?}, canonical {:?}, built {:?}",
                                case, got, canon, ps
                            )
                        })?;
                    }
                    PeriodicityOutcome::NotPeriodicUpTo(m) => {
                        return Err(format!(
                            "case {}: no period <= {} found for {:?}",
                            case, m, ps
                        ));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_06_sqrt2_residue_set_is_not_periodic() {
    report(
        "sqrt(2) residue set: no period <= 500 on [0, 100000]",
        Duration::from_secs(120),
        || {
            let mut oracle = fixture_s_epsilon(&rat(2, 5)).map_err(err("oracle"))?;
            oracle.certified_bound = 100_000;
            match detect_periodicity_with_floor(&oracle, 500, 100_000)
                .map_err(err("detection"))?
            {
                PeriodicityOutcome::NotPeriodicUpTo(500) => Ok(()),
                other => Err(format!("unexpected outcome {:?}", other)),
            }
        },
    );
}

#[test]
fn acceptance_07_pwl_decomposition_of_the_sawtooth_ramp() {
    report(
        "piecewise-linear decomposition: head/tail split and slice values",
        Duration::from_secs(5),
        || {
            let p = PwlFunction::new(vec![rat(1, 1), rat(0, 1)], vec![rat(3, 2)])
                .map_err(err("function"))?;
            let dec = pwl_decompose(&p).map_err(err("decomposition"))?;
            ensure(dec.head.len() == 1, || {
                format!("head has {} segments, expected 1", dec.head.len())
            })?;
            ensure(dec.period == 1, || format!("tail period {}, expected 1", dec.period))?;

            let expected = [rat(1, 1), rat(0, 1), rat(3, 2), rat(3, 1), rat(9, 2)];
            for (i, v) in expected.iter().enumerate() {
                ensure(&p.value_int(i as u64) == v, || {
                    format!("f({}) = {}, expected {}", i, p.value_int(i as u64), v)
                })?;
            }

            let f = &dec.formulation;
            let window: Vec<(Int, Int)> = vec![(Int::zero(), int(10)); f.d];
            for (i, v) in expected.iter().enumerate() {
                let x = Rat::from_integer(int(i as i64));
                let hit = f
                    .member(&[x.clone(), v.clone()], &window)
                    .map_err(err("membership"))?;
                ensure(hit, || format!("({}, {}) missing from the graph", i, v))?;
                let off = f
                    .member(&[x, v + Rat::one()], &window)
                    .map_err(err("membership"))?;
                ensure(!off, || format!("({}, {}) wrongly present", i, v + Rat::one()))?;
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_08_bounded_decomposition_of_the_interval_train() {
    report(
        "bounded decomposition rebuilds the half-interval train",
        Duration::from_secs(5),
        || {
            let vertices = vec![vec![rat(0, 1), rat(0, 1)], vec![rat(1, 2), rat(0, 1)]];
            let rays = vec![vec![Int::one(), Int::one()]];
            let dec = decompose_bounded(&vertices, &rays, 1, 0, 1)
                .map_err(err("decompose_bounded"))?;
            ensure(dec.rays_x == vec![vec![Int::one()]], || {
                format!("recession directions {:?}", dec.rays_x)
            })?;

            let mut rebuilt: BTreeSet<(Rat, Rat)> = BTreeSet::new();
            for piece in dec.pieces.slices.values() {
                let v = piece.vertices_and_rays().map_err(err("piece vertices"))?;
                ensure(v.rays.is_empty(), || "piece is unbounded".to_string())?;
                let mut xs: Vec<Rat> = v.vertices.iter().map(|p| p[0].clone()).collect();
                xs.sort();
                let (lo, hi) = (xs[0].clone(), xs[xs.len() - 1].clone());
                for k in 0..=10i64 {
                    let shift = Rat::from_integer(int(k));
                    if &lo + &shift <= rat(10, 1) {
                        rebuilt.insert((&lo + &shift, &hi + &shift));
                    }
                }
            }
            let want: BTreeSet<(Rat, Rat)> =
                (0..=10i64).map(|k| (rat(k, 1), rat(2 * k + 1, 2))).collect();
            ensure(rebuilt == want, || {
                format!("rebuilt intervals {:?}", rebuilt)
            })
        },
    );
}

#[test]
fn acceptance_09_brunn_minkowski_gap_sign() {
    report(
        "Brunn-Minkowski gap on 500 random pairs plus homothety equality",
        Duration::from_secs(120),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for case in 0..500 {
                let p = random_polytope_v(&mut rng);
                let q = random_polytope_v(&mut rng);
                let gap = brunn_minkowski_gap(&p, &q).map_err(err("gap"))?;
                ensure(gap.sign >= 0, || {
                    format!("case {}: negative gap sign {}", case, gap.sign)
                })?;
                if gap.sign == 0 {
                    let outcome = homothety_equivalent(&p, &q).map_err(err("homothety"))?;
                    ensure(
                        matches!(outcome, HomothetyOutcome::Equivalent { .. }),
                        || format!("case {}: zero gap without homothety", case),
                    )?;
                }
            }
            for case in 0..50 {
                let p = random_polytope_v(&mut rng);
                let s = rat(rng.gen_range(1..=4), rng.gen_range(1..=3));
                let shift = vec![rand_rat(&mut rng, -4, 4, 2), rand_rat(&mut rng, -4, 4, 2)];
                let scaled = scale_polytope(&p, &s);
                let q = PolyhedronV {
                    vertices: scaled
                        .vertices
                        .iter()
                        .map(|v| vec![&v[0] + &shift[0], &v[1] + &shift[1]])
                        .collect(),
                    rays: vec![],
                };
                let gap = brunn_minkowski_gap(&p, &q).map_err(err("gap"))?;
                ensure(gap.sign == 0, || {
                    format!("homothety case {}: gap sign {}", case, gap.sign)
                })?;
                match homothety_equivalent(&p, &q).map_err(err("homothety"))? {
                    HomothetyOutcome::Equivalent { scale, .. } => ensure(scale == s, || {
                        format!("homothety case {}: scale {} != {}", case, scale, s)
                    })?,
                    other => {
                        return Err(format!("homothety case {}: outcome {:?}", case, other));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_10_support_function_midpoint_concavity() {
    report(
        "support-function concavity on 100 collinear index triples",
        Duration::from_secs(60),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            let mut triples = 0usize;
            let mut instances = 0usize;
            while triples < 100 {
                instances += 1;
                ensure(instances <= 400, || {
                    format!("only {} triples found in 400 instances", triples)
                })?;
                let n = rng.gen_range(1..=2usize);
                let h = random_polytope_h(&mut rng, n + 1);
                let set = ConicSet::from_polyhedron(&h);
                let f = MicpFormulation::new(set, n, 0, 1, "random slice instance")
                    .map_err(err("formulation"))?;
                let fam = f
                    .enumerate_slices(&[(int(-7), int(7))])
                    .map_err(err("slice enumeration"))?;
                let keys: Vec<i64> = fam
                    .slices
                    .keys()
                    .map(|k| k[0].to_i64().unwrap())
                    .collect();
                for (ai, &a) in keys.iter().enumerate() {
                    for &b in &keys[ai + 1..] {
                        if (b - a) % 2 != 0 {
                            continue;
                        }
                        let mid = (a + b) / 2;
                        if !keys.contains(&mid) || triples >= 100 {
                            continue;
                        }
                        let c: Vec<Rat> = (0..n)
                            .map(|_| rand_rat(&mut rng, -3, 3, 2))
                            .collect();
                        let value = |z: i64| -> Result<Rat, String> {
                            let slice = &fam.slices[&vec![int(z)]];
                            match slice.linear_max(&c).map_err(err("linear_max"))? {
                                LinearMax::Finite(v) => Ok(v),
                                LinearMax::Unbounded => {
                                    Err("unbounded slice objective".to_string())
                                }
                            }
                        };
                        let (ga, gm, gb) = (value(a)?, value(mid)?, value(b)?);
                        ensure(&gm + &gm >= &ga + &gb, || {
                            format!(
                                "triple ({}, {}, {}): g = {}, {}, {} violates concavity",
                                a, mid, b, ga, gm, gb
                            )
                        })?;
                        triples += 1;
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_11_hnf_and_unimodular_completion() {
    report(
        "1000 Hermite forms and 200 unimodular completions",
        Duration::from_secs(30),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for case in 0..1000 {
                let n = rng.gen_range(1..=4usize);
                let a = loop {
                    let rows: Vec<Vec<Int>> = (0..n)
                        .map(|_| (0..n).map(|_| Int::from(rng.gen_range(-9..=9i64))).collect())
                        .collect();
                    let m = IntegerMatrix::from_rows(rows).map_err(err("matrix"))?;
                    if !m.det().map_err(err("det"))?.is_zero() {
                        break m;
                    }
                };
                let (h, u) = hnf_int(&a).map_err(err("hnf"))?;
                ensure(u.det().map_err(err("det U"))?.abs().is_one(), || {
                    format!("case {}: U is not unimodular", case)
                })?;
                for i in 0..n {
                    for j in 0..n {
                        let mut prod = Int::zero();
                        for k in 0..n {
                            prod += a.get(i, k) * u.get(k, j);
                        }
                        ensure(&prod == h.get(i, j), || {
                            format!("case {}: (A U)[{}][{}] = {} != H", case, i, j, prod)
                        })?;
                        let v = h.get(i, j);
                        if j > i {
                            ensure(v.is_zero(), || {
                                format!("case {}: H[{}][{}] above diagonal", case, i, j)
                            })?;
                        } else if j == i {
                            ensure(v.is_positive(), || {
                                format!("case {}: H[{}][{}] = {} not positive", case, i, j, v)
                            })?;
                        } else {
                            ensure(!v.is_positive() && v.abs() < h.get(i, i).abs(), || {
                                format!("case {}: H[{}][{}] = {} unreduced", case, i, j, v)
                            })?;
                        }
                    }
                }
            }
            for case in 0..200 {
                let d = rng.gen_range(1..=6usize);
                let r: Vec<Int> = loop {
                    let v: Vec<Int> =
                        (0..d).map(|_| Int::from(rng.gen_range(-9..=9i64))).collect();
                    let g = v.iter().fold(Int::zero(), |acc, x| num::integer::gcd(acc, x.abs()));
                    if !g.is_zero() {
                        break v.iter().map(|x| x / &g).collect();
                    }
                };
                let position = if rng.gen_bool(0.5) {
                    ColumnPosition::First
                } else {
                    ColumnPosition::Last
                };
                let u = unimodular_completion(&r, position).map_err(err("completion"))?;
                ensure(u.det().map_err(err("det"))?.abs().is_one(), || {
                    format!("completion case {}: not unimodular", case)
                })?;
                let col = match position {
                    ColumnPosition::First => u.column(0),
                    ColumnPosition::Last => u.column(d - 1),
                };
                ensure(col == r, || {
                    format!("completion case {}: column {:?} != {:?}", case, col, r)
                })?;
            }
            Ok(())
        },
    );
}
