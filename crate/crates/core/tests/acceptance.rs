//! Acceptance criteria, one line of output each.
//!
//! Runs without the libtest harness so the verdicts are always printed.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use asp_templates::corelib::builtin_registry;
use asp_templates::semantics::{
    equilibrium_models, format_models, ground_with_extra, ht_models, stable_models, EngineLimits,
    HtMethod, HtPair, Interpretation,
};
use asp_templates::syntax::{is_local, parse_program, render, Program};
use asp_templates::templates::{
    expand_source, is_reserved, parse_program_with_templates, TemplateRegistry, UuidSource,
};
use asp_templates::validation::{
    validate_cannot_be_extended_to_stable_model, validate_in_all_models,
    validate_in_all_models_of_the_reduct,
};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Outcome {
    let took = start.elapsed();
    ensure(took < budget, || format!("took {took:?}, budget {budget:?}"))
}

fn limits() -> EngineLimits {
    EngineLimits::default()
}

fn solve(program: &Program) -> Result<Vec<Interpretation>, String> {
    stable_models(program, &limits()).map_err(|e| e.to_string())
}

fn choice() -> Outcome {
    let start = Instant::now();
    let models = solve(&parse_program(&corpus("choice.lp")).unwrap())?;
    let mut expected = vec![
        interp(&["e(1)", "e(2)", "a(1)", "a(2)"]),
        interp(&["e(1)", "e(2)", "b(1)", "a(2)"]),
        interp(&["e(1)", "e(2)", "b(1)", "b(2)"]),
    ];
    expected.sort();
    ensure(models == expected, || format!("got {models:?}"))?;
    within(start, Duration::from_secs(1))
}

fn stable_equals_equilibrium() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    for k in 0..200 {
        let p = random_small_program(&mut rng);
        let sm = solve(&p)?;
        let eq = equilibrium_models(&p, &limits()).map_err(|e| e.to_string())?;
        ensure(sm == eq, || format!("program #{k}:\n{p}\nstable {sm:?}\nequilibrium {eq:?}"))?;
    }
    within(start, Duration::from_secs(60))
}

fn ht_anti_monotone() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let base = atom_set(&PROP_POOL);
    for k in 0..100 {
        let p = random_prop_program(&mut rng, &PROP_POOL, 6);
        let q = random_prop_program(&mut rng, &PROP_POOL, 4);
        let union = p.union(&q);
        let small: BTreeSet<HtPair> = ht_models(&p, &base, &limits(), HtMethod::Reduct)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        let large = ht_models(&union, &base, &limits(), HtMethod::Reduct).map_err(|e| e.to_string())?;
        if let Some(extra) = large.iter().find(|m| !small.contains(m)) {
            return Err(format!("pair #{k}: {extra} is a model of the union only"));
        }
    }
    Ok(())
}

fn here_and_there_pairs() -> Outcome {
    let p = parse_program(&corpus("choice.lp")).unwrap();
    let base = ground_with_extra(&p, &BTreeSet::new()).unwrap().atoms();
    let x = interp(&["e(1)", "e(2)", "a(1)", "b(2)"]);
    let with_fail = x.union(&interp(&["fail"]));
    for method in [HtMethod::Reduct, HtMethod::Direct] {
        let models = ht_models(&p, &base, &limits(), method).map_err(|e| e.to_string())?;
        let pair = HtPair::new(x.clone(), with_fail.clone()).unwrap();
        ensure(models.contains(&pair), || format!("{method:?}: {pair} missing"))?;
        if let Some(m) = models.iter().find(|m| m.there() == &x) {
            return Err(format!("{method:?}: unexpected {m}"));
        }
    }
    Ok(())
}

fn constraints() -> Outcome {
    let p = parse_program(&corpus("constraints.lp")).unwrap();
    let t1 = validate_in_all_models(&p, &interp(&["b(1)", "g", "d"]), &interp(&["a(1)"]), &limits())
        .map_err(|e| e.to_string())?;
    ensure(t1.passed() && !t1.vacuous, || format!("T1: {t1}"))?;
    let model = interp(&["b(1)", "d", "g", "e"]);
    let pass = validate_in_all_models_of_the_reduct(&p, &model, &interp(&["b(1)", "g", "e"]))
        .map_err(|e| e.to_string())?;
    ensure(pass.passed(), || format!("T2 true {{b(1),g,e}}: {pass}"))?;
    let fail = validate_in_all_models_of_the_reduct(&p, &model, &interp(&["d"])).map_err(|e| e.to_string())?;
    ensure(!fail.passed() && fail.witness.is_some(), || format!("T2 true {{d}}: {fail}"))
}

fn fail_if_foo() -> Outcome {
    let p = parse_program("__fail :- foo, not __fail.").unwrap();
    let report =
        validate_cannot_be_extended_to_stable_model(&p, &interp(&["__fail"]), &interp(&[]), false, &limits())
            .map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("T3: {report}"))?;
    let context_pool = ["foo", "a", "b", "c", "d"];
    let fail = interp(&["__fail"]);
    let mut rng = StdRng::seed_from_u64(5);
    for k in 0..100 {
        let context = random_prop_program(&mut rng, &context_pool, 6);
        if rng.gen_bool(0.5) {
            // make sure foo is often derivable
            let union = p.union(&context).union(&parse_program("foo :- not a.").unwrap());
            check_no_fail(&union, &fail, k)?;
        } else {
            check_no_fail(&p.union(&context), &fail, k)?;
        }
    }
    Ok(())
}

fn check_no_fail(union: &Program, fail: &Interpretation, k: usize) -> Outcome {
    for m in solve(union)? {
        ensure(!fail.is_subset(&m), || format!("context #{k}: stable model {m} of\n{union}"))?;
    }
    Ok(())
}

fn closure_leak() -> Outcome {
    let source = corpus("closure_leak.lp");
    let uuids = UuidSource::deterministic(0);
    let mut registry = builtin_registry(&uuids);
    let expanded = expand_source(&source, &mut registry, &uuids).map_err(|e| e.to_string())?;
    let models = solve(&expanded)?;
    ensure(format_models(&models) == "UNSATISFIABLE\n", || format!("got {models:?}"))?;

    let trimmed = source.replace("reach(foo,bar).", "");
    let mut registry = builtin_registry(&uuids);
    let expanded = expand_source(&trimmed, &mut registry, &uuids).map_err(|e| e.to_string())?;
    let models = solve(&expanded)?;
    ensure(models.len() == 1, || format!("expected one model, got {models:?}"))?;
    let reach: BTreeSet<String> = models[0]
        .iter()
        .filter(|a| a.predicate == "reach")
        .map(|a| a.to_string())
        .collect();
    let expected: BTreeSet<String> = ["reach(a,b)", "reach(a,c)"].map(String::from).into();
    ensure(reach == expected, || format!("reach = {reach:?}"))
}

fn freshness() -> Outcome {
    let source: String = (0..50)
        .map(|i| format!("__apply_template__(\"@d/tcc\", (r, edge{i})).\n"))
        .collect();
    let uuids = UuidSource::deterministic(0);
    let mut registry = builtin_registry(&UuidSource::deterministic(asp_templates::corelib::BUILTIN_SEED));
    let expanded = expand_source(&source, &mut registry, &uuids).map_err(|e| e.to_string())?;
    let statements: Vec<_> = expanded.iter().collect();
    ensure(statements.len() == 150, || format!("{} statements", statements.len()))?;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (k, chunk) in statements.chunks(3).enumerate() {
        let locals: BTreeSet<String> = chunk
            .iter()
            .flat_map(|s| s.predicates())
            .filter(|p| is_local(p))
            .map(str::to_owned)
            .collect();
        ensure(!locals.is_empty(), || format!("application {k} has no local names"))?;
        for name in locals {
            ensure(seen.insert(name.clone()), || format!("{name} reused by application {k}"))?;
        }
    }
    let random = UuidSource::random();
    let draws: BTreeSet<String> = (0..10_000).map(|_| random.draw_suffix()).collect();
    ensure(draws.len() == 10_000, || format!("{} distinct draws", draws.len()))
}

fn corelib_oracles() -> Outcome {
    let start = Instant::now();
    let uuids = UuidSource::deterministic(0);
    let registry = builtin_registry(&uuids);
    let instantiate = |template_lines: &str| -> Program {
        expand_source(template_lines, &mut registry.clone(), &uuids).unwrap()
    };
    let tc = instantiate("__apply_template__(\"@d/tc\", (r, edge), (c, path)).");
    let tcc = instantiate("__apply_template__(\"@d/tcc\", (r, edge)).");
    let connected = instantiate(
        "__apply_template__(\"@d/symmetric closure\", (r, edge), (c, link)).\n\
         __apply_template__(\"@d/connected graph\").",
    );
    let check = |n: u32, g: &Graph| -> Outcome {
        let facts = parse_program(&format!("{}{}", edge_facts("edge", g), node_facts(n))).unwrap();
        let models = solve(&tc.union(&facts))?;
        ensure(models.len() == 1, || format!("tc on {g:?}: {} models", models.len()))?;
        let closure = relation(&models[0], "path");
        ensure(closure == transitive_closure(n, g), || format!("tc on {g:?}: {closure:?}"))?;
        let acyclic = !solve(&tcc.union(&facts))?.is_empty();
        ensure(acyclic == !has_cycle(n, g), || format!("tcc on {g:?}: satisfiable = {acyclic}"))?;
        let sat = !solve(&connected.union(&facts))?.is_empty();
        ensure(sat == is_connected(n, g), || format!("connected graph on n={n} {g:?}: {sat}"))
    };
    for n in 0..=4u32 {
        for mask in 0..(1u64 << (n * n)) {
            check(n, &graph_from_mask(n, mask))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..100 {
        let density = rng.gen_range(0.05..0.4);
        check(6, &random_graph(&mut rng, 6, density))?;
    }
    within(start, Duration::from_secs(120))
}

fn fig3_shape() -> Outcome {
    let uuids = UuidSource::deterministic(0);
    let mut registry = builtin_registry(&UuidSource::deterministic(asp_templates::corelib::BUILTIN_SEED));
    let expanded = expand_source(&corpus("alpha.lp"), &mut registry, &uuids).map_err(|e| e.to_string())?;
    let locals: BTreeSet<String> = expanded.predicates().into_iter().filter(|p| is_local(p)).collect();
    let expect = [("__start", 2), ("__reach", 2), ("__tree", 1)];
    for (base, count) in expect {
        let names: Vec<&String> = locals.iter().filter(|p| base_name(p) == base).collect();
        ensure(!names.is_empty(), || format!("no {base} in {locals:?}"))?;
        for name in names {
            ensure(uuid_suffix_count(name) == count, || format!("{name}: expected {count} suffixes"))?;
        }
    }
    let unexpected: Vec<&String> = locals
        .iter()
        .filter(|p| !expect.iter().any(|(b, _)| base_name(p) == *b))
        .collect();
    ensure(unexpected.is_empty(), || format!("unexpected local names {unexpected:?}"))
}

fn round_trip() -> Outcome {
    for (name, source) in all_sources() {
        let parsed = parse_program_with_templates(&source).map_err(|e| format!("{name}: {e}"))?;
        let once = parsed.to_string();
        let twice = parse_program_with_templates(&once).map_err(|e| format!("{name}: {e}"))?.to_string();
        ensure(once == twice, || format!("{name}: render is not a fixpoint\n{once}\n---\n{twice}"))?;

        let uuids = UuidSource::deterministic(0);
        let mut registry = builtin_registry(&UuidSource::deterministic(asp_templates::corelib::BUILTIN_SEED));
        let expanded = expand_source(&source, &mut registry, &uuids).map_err(|e| format!("{name}: {e}"))?;
        if let Some(p) = expanded.predicates().iter().find(|p| is_reserved(p)) {
            return Err(format!("{name}: reserved predicate {p} after expansion"));
        }
        let rendered = render(&expanded);
        ensure(parse_program(&rendered).as_ref() == Ok(&expanded), || format!("{name}: parse(render) differs"))?;
        let again = expand_source(&rendered, &mut TemplateRegistry::new(), &uuids).map_err(|e| format!("{name}: {e}"))?;
        ensure(render(&again) == rendered, || format!("{name}: expansion is not a fixpoint"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("choice program stable models", choice),
        ("stable models equal equilibrium models", stable_equals_equilibrium),
        ("here-and-there anti-monotonicity", ht_anti_monotone),
        ("here-and-there pairs of the choice program", here_and_there_pairs),
        ("T1 and T2 verdicts with constraints", constraints),
        ("T3 on fail-if-foo and random contexts", fail_if_foo),
        ("guaranteed closure expansion and solving", closure_leak),
        ("freshness of local names", freshness),
        ("core library oracles", corelib_oracles),
        ("spanning tree expansion shape", fig3_shape),
        ("round trip and expansion fixpoint", round_trip),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS {:>2} {name} ({:.2?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
