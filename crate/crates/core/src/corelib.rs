//! Built-in templates.
//!
//! The library is kept as template source (see `templates/*.lp` in this
//! crate) and loaded through the ordinary expansion path, so built-in and
//! user templates behave the same way.

use crate::templates::{Template, TemplateError, TemplateRegistry, UuidSource};

/// Short-name core templates.
pub const CORE_SOURCE: &str = include_str!("../templates/core.lp");
/// Long-name aliases of the core templates.
pub const LONG_NAMES_SOURCE: &str = include_str!("../templates/dumbo.lp");

/// Arities of `@d/exact copy (arity n)` loaded eagerly; larger ones are
/// synthesized on lookup.
pub const PREGENERATED_EXACT_COPY: std::ops::RangeInclusive<usize> = 0..=8;

const EXACT_COPY_PREFIXES: [&str; 2] = ["@d/exact copy (arity ", "@dumbo/exact copy (arity "];

/// Seed for deterministic loading of the library, far from the seeds users
/// are likely to pick for their own programs.
pub const BUILTIN_SEED: u64 = 900_000_000_000;

/// Name of the exact-copy template of arity `n`.
pub fn exact_copy_name(n: usize) -> String {
    format!("{}{n})", EXACT_COPY_PREFIXES[0])
}

/// Source of `@d/exact copy (arity n)`: `output` is a copy of `input` and may
/// not be extended elsewhere.
pub fn exact_copy_source(name: &str, n: usize) -> String {
    let args = if n == 0 {
        String::new()
    } else {
        let vars: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        format!("({})", vars.join(","))
    };
    format!(
        "__template__({name:?}).\n    output{args} :- input{args}.\n    :- output{args}, not input{args}.\n__end__.\n"
    )
}

fn declare(registry: &mut TemplateRegistry, source: &str, uuids: &UuidSource) {
    let output = registry
        .declare_from_source(source, uuids)
        .unwrap_or_else(|e| panic!("built-in template library does not load: {e}"));
    debug_assert!(output.is_empty());
}

/// `@d/exact copy (arity n)`.
pub fn exact_copy(n: usize, uuids: &UuidSource) -> Result<Template, TemplateError> {
    let name = exact_copy_name(n);
    let mut registry = TemplateRegistry::new();
    registry.declare_from_source(&exact_copy_source(&name, n), uuids)?;
    Ok(registry.lookup(&name)?.into_owned())
}

/// Splits `@d/exact copy (arity n)` and its long alias into prefix and `n`.
pub(crate) fn exact_copy_arity(name: &str) -> Option<(&'static str, usize)> {
    EXACT_COPY_PREFIXES.iter().find_map(|&prefix| {
        let digits = name.strip_prefix(prefix)?.strip_suffix(')')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        Some((prefix, digits.parse().ok()?))
    })
}

/// The exact-copy template with the given name prefix and arity. Its body has
/// no local predicate, so no UUID is involved.
pub(crate) fn exact_copy_named(prefix: &str, n: usize) -> Template {
    let name = format!("{prefix}{n})");
    let mut registry = TemplateRegistry::new();
    declare(&mut registry, &exact_copy_source(&name, n), &UuidSource::random());
    registry.lookup(&name).expect("just declared").into_owned()
}

/// A registry holding the core library, its long-name aliases and the exact
/// copy templates. Local predicates inside library templates are renamed
/// with draws from `uuids`.
pub fn builtin_registry(uuids: &UuidSource) -> TemplateRegistry {
    let mut registry = TemplateRegistry::new().with_exact_copy_synthesis();
    declare(&mut registry, CORE_SOURCE, uuids);
    declare(&mut registry, LONG_NAMES_SOURCE, uuids);
    for n in PREGENERATED_EXACT_COPY {
        for prefix in EXACT_COPY_PREFIXES {
            let name = format!("{prefix}{n})");
            declare(&mut registry, &exact_copy_source(&name, n), uuids);
        }
    }
    registry
}

/// Names that belong to the long-name family.
pub fn is_long_name(name: &str) -> bool {
    name.starts_with("@dumbo/")
}
