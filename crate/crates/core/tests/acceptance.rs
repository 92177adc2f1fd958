//! Acceptance suite: twelve criteria, each with a wall-clock limit. Prints one
//! PASS/FAIL line per criterion and fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{n, oracle_code, safe_program};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relcomp::encode::*;
use relcomp::machine::builder::{tag, Arg, Asm, Template};
use relcomp::machine::{
    assemble, eval_exact, eval_fuel, kleene_fix, markov_realizer, smn, Program, StepObservation, SMN_OVERHEAD,
};
use relcomp::oracle::{boolean_oracle_from_subset, Oracle};
use relcomp::permred::*;
use relcomp::programs;
use relcomp::reducibility::*;
use relcomp::relmachine::{eval_oracle, run_with_witness, use_and_verify, UseVerdict, WitnessList};
use relcomp::Nat;

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn codecs() -> Outcome {
    check(pair(&n(3), &n(5)) == n(41) && pair(&n(3), &n(4)) == n(32), || "pair examples".into())?;
    for c in 0..100_000u64 {
        let c = n(c);
        let (a, b) = unpair(&c);
        check(pair(&a, &b) == c, || format!("pair∘unpair at {c}"))?;
        let (a, b) = compact_unpair(&c);
        check(compact_pair(&a, &b) == c, || format!("compact pair at {c}"))?;
        check(list_encode(&list_decode(&c)) == c, || format!("list at {c}"))?;
        check(theta_inv(&theta(&c)) == c, || format!("θ at {c}"))?;
        check(zstar_encode(&zstar_decode(&c)) == c, || format!("ℤ* at {c}"))?;
    }
    for a in 0..316u64 {
        for b in 0..316u64 {
            check(unpair(&pair(&n(a), &n(b))) == (n(a), n(b)), || format!("unpair∘pair at ({a}, {b})"))?;
        }
    }
    Ok("5 codecs exhaustive on n < 10^5".into())
}

fn step_uniqueness() -> Outcome {
    let mut r = rng(2);
    let (mut halted, mut probes) = (0, 0);
    for i in 0..200 {
        let p = safe_program(&mut r, 10).code();
        let x = n(r.gen_range(0..100));
        match eval_fuel(&p, &x, 5000) {
            StepObservation::Halted { value, steps } => {
                halted += 1;
                check(eval_exact(&p, steps, &x) == Some(value), || format!("program {i}: exact run disagrees"))?;
                for k in (0..steps).chain(steps + 1..steps + 20) {
                    probes += 1;
                    check(eval_exact(&p, k, &x).is_none(), || format!("program {i}: second halting count {k}"))?;
                }
            }
            StepObservation::OutOfFuel { .. } => {
                for k in (0..5000).step_by(97) {
                    probes += 1;
                    check(eval_exact(&p, k, &x).is_none(), || format!("program {i}: halts at {k} under exact"))?;
                }
            }
        }
    }
    Ok(format!("200 programs, {halted} halting, {probes} other counts rejected"))
}

fn smn_law() -> Outcome {
    let mut r = rng(3);
    let mut halting = 0;
    for i in 0..100 {
        let e = safe_program(&mut r, 10).code();
        let (x, y) = (n(r.gen_range(0..10_000)), n(r.gen_range(0..10_000)));
        if let StepObservation::Halted { value, steps } = eval_fuel(&e, &pair(&x, &y), 10_000) {
            halting += 1;
            let got = eval_fuel(&smn(&e, &x), &y, steps + SMN_OVERHEAD);
            let want = StepObservation::Halted { value, steps: steps + SMN_OVERHEAD };
            check(got == want, || format!("triple {i}: {got:?} != {want:?}"))?;
        }
    }
    Ok(format!("{halting}/100 halting triples specialise within steps + {SMN_OVERHEAD}"))
}

fn smn_transformation(c: &Nat) -> Nat {
    let t = Template::new()
        .op(tag::SET, vec![1.into(), Arg::Hole(0)])
        .op(tag::PAIR, vec![0.into(), 1.into(), 0.into()])
        .op(tag::SET, vec![2.into(), Arg::Hole(1)])
        .op(tag::CALL, vec![0.into(), 2.into(), 0.into()]);
    let mut a = Asm::new();
    a.set(1, c.clone()).quote(0, &t, &[0, 1]);
    a.finish().code()
}

fn recursion() -> Outcome {
    let mut r = rng(4);
    let mut converging = 0;
    for i in 0..20 {
        let c = safe_program(&mut r, 8).code();
        let d = if i % 2 == 0 { Program::new(vec![relcomp::machine::ins::set(0, c)]).code() } else { smn_transformation(&c) };
        let fix = kleene_fix(&d);
        let target = eval_fuel(&d, &fix, 100_000).value().cloned().ok_or("sampled d diverged")?;
        for x in 0..10u64 {
            let rhs = eval_fuel(&target, &n(x), 100_000);
            // the fixed point's preamble is a few dozen steps
            let lhs = eval_fuel(&fix, &n(x), 200_000);
            match (lhs.value(), rhs.value()) {
                (None, None) => {}
                (a, b) => {
                    converging += 1;
                    check(a == b, || format!("d #{i} at {x}: {a:?} vs {b:?}"))?;
                }
            }
        }
    }
    let seven = Program::new(vec![relcomp::machine::ins::set(0, 7u64)]).code();
    let got = eval_fuel(&markov_realizer(&seven), &n(0), 100_000);
    check(got.value() == Some(&n(7)), || format!("markov constant example: {got:?}"))?;
    Ok(format!("{converging}/200 convergent points agree; markov constant gives 7"))
}

/// Witness lists of length `≤ len + 1` with entries `≤ bound`.
fn small_witnesses(len: usize, bound: u64) -> Vec<WitnessList> {
    let mut out = vec![WitnessList(vec![])];
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..=len {
        let next: Vec<Vec<u64>> =
            layer.iter().flat_map(|w| (0..=bound).map(move |k| [w.clone(), vec![k]].concat())).collect();
        out.extend(next.iter().cloned().map(WitnessList));
        layer = next;
    }
    out
}

fn witnesses() -> Outcome {
    let mut r = rng(5);
    let chi = Oracle::new("scrambled", |x: &Nat| (x * 7u32 + 3u32) % 11u32);
    let (mut converged, mut searched) = (0, 0);
    for i in 0..30 {
        let e = oracle_code(&mut r, 2);
        let ev = eval_oracle(&e, &chi, 100_000).map_err(|e| e.to_string())?;
        let Some(res) = ev.result() else { continue };
        converged += 1;
        let replay = run_with_witness(&e, &res.witness, &chi).map_err(|e| e.to_string())?;
        check(replay == Some(res.value.clone()), || format!("code {i}: replay {replay:?}"))?;
        let bound = res.witness.0.iter().copied().max().unwrap_or(0).min(10) + 3;
        for w in small_witnesses(res.witness.len().min(2), bound) {
            if w == res.witness {
                continue;
            }
            searched += 1;
            let other = run_with_witness(&e, &w, &chi).map_err(|e| e.to_string())?;
            check(other.is_none(), || format!("code {i}: second witness {w:?}"))?;
        }
    }
    Ok(format!("{converged}/30 converge; {searched} other witnesses rejected"))
}

fn use_principle() -> Outcome {
    let mut r = rng(6);
    let chi = Oracle::identity();
    let (mut found, mut perturbed, mut tries) = (0, 0, 0);
    while found < 100 {
        tries += 1;
        check(tries < 10_000, || "too few converging codes".into())?;
        let e = oracle_code(&mut r, 3);
        let base = eval_oracle(&e, &chi, 100_000).map_err(|e| e.to_string())?;
        if base.result().is_none() {
            continue;
        }
        found += 1;
        let used: BTreeSet<Nat> = base.use_list().into_iter().collect();
        let top = used.iter().max().cloned().unwrap_or_default() + 5u32;
        let mut q = n(0);
        while q < top {
            if !used.contains(&q) {
                perturbed += 1;
                let alt = chi.patched(q.clone(), &q + 1u32);
                let rep = use_and_verify(&e, &chi, &alt, 100_000).map_err(|e| e.to_string())?;
                check(rep.verdict == UseVerdict::Stable, || format!("perturbing {q}: {:?}", rep.verdict))?;
            }
            q += 1u32;
        }
    }
    Ok(format!("100 converging codes, {perturbed} off-use perturbations stable"))
}

fn graph_equivalence() -> Outcome {
    let points = range(50);
    for chi in [Oracle::successor(), Oracle::identity(), Oracle::constant(0u32)] {
        let (to_chi, to_graph) = graph_reductions(&chi);
        let graph = graph_of(&chi);
        let a = verify_turing(&to_chi, &graph, &chi, &points, 1_000_000);
        check(a.all_pass(), || format!("graph ≤ {}: {}", chi.name(), a.to_json()))?;
        let b = verify_turing(&to_graph, &chi, &graph, &points, 1_000_000);
        check(b.all_pass(), || format!("{} ≤ graph: {}", chi.name(), b.to_json()))?;
    }
    Ok("both directions for succ, id, const:0 on n < 50".into())
}

fn wtt_compilation() -> Outcome {
    // last element of ⟨n, χ(0), …, χ(n)⟩ is χ(n)
    let last = assemble("DEC 0\nCUNPAIR 1 0 0\nJZ 0 4\nJZ 9 0\nCOPY 0 1").unwrap().code();
    let chi = boolean_oracle_from_subset("mod3", |x| (x % 3u32).bits() == 0);
    let samples = [
        ("prefix", WttReduction { bound: assemble("INC 0").unwrap().code(), evaluator: last }, chi.clone(), chi.clone()),
        (
            "constant",
            WttReduction { bound: assemble("SET 0 0").unwrap().code(), evaluator: assemble("SET 0 0").unwrap().code() },
            Oracle::constant(0u32),
            chi,
        ),
    ];
    let points = range(50);
    for (name, red, src, tgt) in &samples {
        let w = verify_wtt(red, src, tgt, &points, 1_000_000);
        let t = verify_turing(&wtt_to_turing(red), src, tgt, &points, 1_000_000);
        for (pw, pt) in w.points.iter().zip(&t.points) {
            if pw.verdict != Verdict::Pass {
                continue;
            }
            check(pt.verdict == Verdict::Pass, || format!("{name} at {}: compiled verdict {:?}", pt.n, pt.verdict))?;
            let bound = eval_fuel(&red.bound, &pt.n, 1_000_000).value().cloned().unwrap();
            check(pt.transcript.queries().all(|q| *q < bound), || format!("{name} at {}: query past bound", pt.n))?;
        }
        check(w.all_pass(), || format!("{name}: the wtt certificate itself fails"))?;
    }
    Ok("2 certificates, 100 points, use within bound".into())
}

fn jump_diagonal() -> Outcome {
    let chi = Oracle::identity();
    let cand = |reducer: Nat| TuringReduction { reducer, source: "jump:id".into(), target: "id".into() };
    for c in [0u32, 1] {
        let r = refute_jump_reduction(&cand(programs::constant_reducer(&n(c as u64))), &chi, 100_000)
            .map_err(|e| e.to_string())?;
        check(
            matches!(&r, JumpRefutation::Mismatch { claimed, jump_value, .. } if claimed != jump_value),
            || format!("constant {c}: {r:?}"),
        )?;
    }
    let r = refute_jump_reduction(&cand(loop_code()), &chi, 100_000).map_err(|e| e.to_string())?;
    check(matches!(r, JumpRefutation::Divergence { .. }), || format!("looping: {r:?}"))?;
    Ok("3/3 candidates refuted".into())
}

fn wtt_separation() -> Outcome {
    let e0 = assemble("SET 0 3").unwrap().code();
    let e1 = assemble("DEC 0\nCUNPAIR 1 0 0\nDEC 0\nCUNPAIR 0 1 0").unwrap().code();
    let r = wtt_separation_demo(&e0, &e1, 100_000, &range(30)).map_err(|e| e.to_string())?;
    check(r.verification.all_pass(), || format!("ζ ≤ κ verification: {}", r.verification.to_json()))?;
    check(r.refuted, || format!("pair output {:?} equals ζ = {}", r.pair_output, r.zeta_at_diagonal))?;
    Ok(format!("reduction verifies on n < 30; at the diagonal ζ = {}, pair gives {:?}", r.zeta_at_diagonal, r.pair_output))
}

fn permutation_algebra() -> Outcome {
    for k in -20..=20 {
        let t = tau_decomposition(k, &zstar_points(30));
        check(t.counterexamples.is_empty(), || format!("τ_{k}: {:?}", t.counterexamples))?;
    }
    let mut r = rng(11);
    let samples: Vec<Nat> = (0..20).map(|_| n(r.gen_range(0..200))).collect();
    let odd = boolean_oracle_from_subset("odd", |x| x.bit(0));
    let (k, kp) = k_encodings();
    for p in [PurePerm::Shift, PurePerm::Tau(3.into())] {
        let bad = conjugation_law_failures(&k, &p, &odd, &samples, 100_000).map_err(|e| e.to_string())?;
        check(bad.is_empty(), || format!("conjugation law with {p:?} fails at {bad:?}"))?;
    }
    let oracles = [odd, boolean_oracle_from_subset("squares", |x| x.sqrt().pow(2) == *x)];
    for chi in &oracles {
        for i in 0..20u64 {
            let zero = chi.answer_u64(i).map_err(|e| e.to_string())? == n(0);
            let dk = k_differs_from_conjugate(&k, i, chi, 2 * i + 4, 100_000).map_err(|e| e.to_string())?;
            let dkp = k_differs_from_conjugate(&kp, i, chi, 2 * i + 4, 100_000).map_err(|e| e.to_string())?;
            check(dk == zero && dkp == !zero, || format!("{} at {i}: k {dk}, k' {dkp}", chi.name()))?;
        }
    }
    Ok("τ decomposition on [-20, 20], conjugation law on 20 points, k criterion on 2 oracles".into())
}

fn iso_extraction() -> Outcome {
    let chi = boolean_oracle_from_subset("mod3", |x| (x % 3u32).bits() == 0);
    let renamed = renamed_oracle(&chi);
    let points = range(30);
    let cases = [("identity", IsoData::identity("mod3"), &chi), ("shift-renaming", IsoData::shift_renaming("renamed"), &renamed)];
    for (name, iso, tgt) in cases {
        let red = reduction_from_iso(&iso, tgt, 1_000_000).map_err(|e| e.to_string())?;
        let rep = verify_turing(&red, &chi, tgt, &points, 1_000_000);
        check(rep.all_pass(), || format!("{name}: {}", rep.to_json()))?;
    }
    let red = reduction_from_iso(&IsoData::corrupted("renamed"), &renamed, 1_000_000).map_err(|e| e.to_string())?;
    let rep = verify_turing(&red, &chi, &renamed, &points, 1_000_000);
    let fails = rep.count(Verdict::Fail);
    check(fails > 0, || "corrupted iso was not flagged".into())?;
    Ok(format!("identity and shift-renaming verify on n < 30; corrupted fails at {fails} points"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("codec suite", 5, codecs),
        ("step uniqueness", 10, step_uniqueness),
        ("s-m-n", 30, smn_law),
        ("recursion theorem", 30, recursion),
        ("witness semantics", 60, witnesses),
        ("use principle", 60, use_principle),
        ("graph equivalence", 30, graph_equivalence),
        ("wtt to Turing", 30, wtt_compilation),
        ("jump diagonal", 10, jump_diagonal),
        ("wtt separation", 60, wtt_separation),
        ("permutation algebra", 10, permutation_algebra),
        ("iso extraction", 60, iso_extraction),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => Err(format!("over time limit; {detail}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        println!("{tag} {:>2} {name} ({:.2}s, limit {limit}s): {detail}", i + 1, took.as_secs_f64());
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
