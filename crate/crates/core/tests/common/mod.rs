#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use asp_templates::semantics::{GroundProgram, Interpretation};
use asp_templates::syntax::{parse_program, Atom, Head, Program};
use asp_templates::templates::{has_uuid_suffix, UuidSource};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every `.lp` file of the test corpus and of the built-in library, by name.
pub fn all_sources() -> Vec<(String, String)> {
    let lib = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("templates");
    let mut out = Vec::new();
    for dir in [corpus_dir(), lib] {
        let mut entries: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "lp"))
            .collect();
        entries.sort();
        for path in entries {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            out.push((name, std::fs::read_to_string(&path).unwrap()));
        }
    }
    out
}

pub fn interp(atoms: &[&str]) -> Interpretation {
    atoms
        .iter()
        .flat_map(|a| asp_templates::syntax::parse_ground_atoms(a).unwrap())
        .collect()
}

pub fn det(seed: u64) -> UuidSource {
    UuidSource::deterministic(seed)
}

/// Number of UUID suffixes stacked at the end of a predicate name.
pub fn uuid_suffix_count(name: &str) -> usize {
    const LEN: usize = 37;
    let mut name = name;
    let mut n = 0;
    while has_uuid_suffix(name) {
        name = &name[..name.len() - LEN];
        n += 1;
    }
    n
}

/// The predicate name with every UUID suffix removed.
pub fn base_name(name: &str) -> &str {
    let n = uuid_suffix_count(name);
    &name[..name.len() - 37 * n]
}

// ---------------------------------------------------------------------------
// random programs

/// Eight ground atoms: four propositional, two unary predicates over {1, 2}.
pub const SMALL_POOL: [&str; 8] = ["p", "r", "t", "u", "q(1)", "q(2)", "s(1)", "s(2)"];

/// Ten propositional atoms.
pub const PROP_POOL: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];

fn literal_list(rng: &mut StdRng, pool: &[&str], max: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| pool.choose(rng).unwrap().to_string()).collect()
}

/// A random ground rule over `pool`, as text.
pub fn random_ground_rule(rng: &mut StdRng, pool: &[&str]) -> String {
    let head = if rng.gen_bool(0.15) {
        String::new()
    } else {
        pool.choose(rng).unwrap().to_string()
    };
    let pos = literal_list(rng, pool, 2);
    let neg: Vec<String> = literal_list(rng, pool, 2)
        .into_iter()
        .map(|a| format!("not {a}"))
        .collect();
    let body: Vec<String> = pos.into_iter().chain(neg).collect();
    match (head.is_empty(), body.is_empty()) {
        (false, true) => format!("{head}."),
        (true, true) => ":- not p.".to_owned(),
        (false, false) => format!("{head} :- {}.", body.join(", ")),
        (true, false) => format!(":- {}.", body.join(", ")),
    }
}

/// A random safe rule with variable `X` over the unary predicates of
/// [`SMALL_POOL`].
pub fn random_unary_rule(rng: &mut StdRng) -> String {
    let unary = ["q", "s"];
    let props = ["p", "r", "t", "u"];
    let head = match rng.gen_range(0..3) {
        0 => format!("{}(X)", unary.choose(rng).unwrap()),
        1 => props.choose(rng).unwrap().to_string(),
        _ => String::new(),
    };
    let mut body = vec![format!("{}(X)", unary.choose(rng).unwrap())];
    if rng.gen_bool(0.5) {
        body.push(format!("not {}(X)", unary.choose(rng).unwrap()));
    }
    if rng.gen_bool(0.3) {
        body.push(format!("not {}", props.choose(rng).unwrap()));
    }
    format!("{head} :- {}.", body.join(", "))
}

/// A random core program whose ground atoms all lie in [`SMALL_POOL`].
pub fn random_small_program(rng: &mut StdRng) -> Program {
    let n = rng.gen_range(1..=7);
    let text: Vec<String> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                random_unary_rule(rng)
            } else {
                random_ground_rule(rng, &SMALL_POOL)
            }
        })
        .collect();
    parse_program(&text.join("\n")).unwrap()
}

pub fn random_prop_program(rng: &mut StdRng, pool: &[&str], max_rules: usize) -> Program {
    let n = rng.gen_range(0..=max_rules);
    let text: Vec<String> = (0..n).map(|_| random_ground_rule(rng, pool)).collect();
    parse_program(&text.join("\n")).unwrap()
}

pub fn atom_set(pool: &[&str]) -> BTreeSet<Atom> {
    pool.iter()
        .flat_map(|a| asp_templates::syntax::parse_ground_atoms(a).unwrap())
        .collect()
}

// ---------------------------------------------------------------------------
// oracles

fn rule_satisfied(head: &Head, pos: &[Atom], neg: &[Atom], i: &BTreeSet<Atom>) -> bool {
    let body = pos.iter().all(|a| i.contains(a)) && neg.iter().all(|a| !i.contains(a));
    !body || matches!(head, Head::Atom(h) if i.contains(h))
}

/// Stable models straight from the definition: `I` satisfies the program and
/// no proper subset of `I` satisfies the reduct w.r.t. `I`.
pub fn stable_models_by_definition(gp: &GroundProgram) -> Vec<Interpretation> {
    let atoms: Vec<Atom> = gp.atoms().into_iter().collect();
    assert!(atoms.len() <= 16, "oracle is exponential");
    let subset = |mask: u32| -> BTreeSet<Atom> {
        atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    };
    let mut out = Vec::new();
    for mask in 0..(1u32 << atoms.len()) {
        let i = subset(mask);
        if !gp.rules().iter().all(|r| rule_satisfied(&r.head, &r.positive, &r.negative, &i)) {
            continue;
        }
        let reduct: Vec<_> = gp
            .rules()
            .iter()
            .filter(|r| {
                r.positive.iter().all(|a| i.contains(a)) && r.negative.iter().all(|a| !i.contains(a))
            })
            .collect();
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            let j = subset(sub);
            if reduct.iter().all(|r| rule_satisfied(&r.head, &r.positive, &[], &j)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(Interpretation::from(i));
        }
    }
    out.sort();
    out
}

pub type Graph = BTreeSet<(u32, u32)>;

/// The graph on nodes `0..n` whose edges are the set bits of `mask`, bit
/// `i * n + j` standing for the edge `(i, j)`.
pub fn graph_from_mask(n: u32, mask: u64) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        for j in 0..n {
            if mask & (1 << (i * n + j)) != 0 {
                g.insert((i, j));
            }
        }
    }
    g
}

pub fn random_graph(rng: &mut StdRng, n: u32, density: f64) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                g.insert((i, j));
            }
        }
    }
    g
}

/// Transitive closure by repeated squaring of the boolean adjacency matrix.
pub fn transitive_closure(n: u32, g: &Graph) -> Graph {
    let n = n as usize;
    let mut m = vec![vec![false; n]; n];
    for &(i, j) in g {
        m[i as usize][j as usize] = true;
    }
    loop {
        let mut next = m.clone();
        for i in 0..n {
            for k in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        next[i][j] |= m[k][j];
                    }
                }
            }
        }
        if next == m {
            break;
        }
        m = next;
    }
    let mut out = Graph::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                out.insert((i as u32, j as u32));
            }
        }
    }
    out
}

/// Depth-first search for a directed cycle (self-loops included).
pub fn has_cycle(n: u32, g: &Graph) -> bool {
    fn visit(v: u32, adj: &BTreeMap<u32, Vec<u32>>, state: &mut [u8]) -> bool {
        state[v as usize] = 1;
        for &w in adj.get(&v).into_iter().flatten() {
            let seen = state[w as usize];
            if seen == 1 || (seen == 0 && visit(w, adj, state)) {
                return true;
            }
        }
        state[v as usize] = 2;
        false
    }
    let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(i, j) in g {
        adj.entry(i).or_default().push(j);
    }
    let mut state = vec![0u8; n as usize];
    (0..n).any(|v| state[v as usize] == 0 && visit(v, &adj, &mut state))
}

/// Whether the undirected graph underlying `g` on nodes `0..n` is connected.
pub fn is_connected(n: u32, g: &Graph) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n as usize];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(i, j) in g {
            let w = if i == v { j } else if j == v { i } else { continue };
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn edge_facts(predicate: &str, g: &Graph) -> String {
    g.iter().map(|(i, j)| format!("{predicate}({i},{j}). ")).collect()
}

pub fn node_facts(n: u32) -> String {
    (0..n).map(|i| format!("node({i}). ")).collect()
}

/// The pairs of a binary relation in an interpretation, as integers.
pub fn relation(model: &Interpretation, predicate: &str) -> Graph {
    use asp_templates::syntax::Term;
    model
        .iter()
        .filter(|a| a.predicate == predicate && a.terms.len() == 2)
        .map(|a| match (&a.terms[0], &a.terms[1]) {
            (Term::Integer(x), Term::Integer(y)) => (*x as u32, *y as u32),
            other => panic!("non-integer pair {other:?}"),
        })
        .collect()
}
