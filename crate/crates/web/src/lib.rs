//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each exported function takes program text and returns the text the page
//! shows. Failures come back as a string starting with `error:` so the page
//! never has to handle exceptions.

use asp_templates::corelib::{builtin_registry, BUILTIN_SEED};
use asp_templates::semantics::{format_models, stable_models, EngineLimits};
use asp_templates::syntax::{render, Program};
use asp_templates::templates::{expand_source, UuidSource};
use asp_templates::validation::{parse_manifest, run_manifest};
use wasm_bindgen::prelude::*;

// The browser tab runs on one thread; keep enumeration small.
const LIMITS: EngineLimits = EngineLimits { max_atoms: 20, max_ht_atoms: 10 };

fn uuid_source(deterministic: bool) -> (UuidSource, UuidSource) {
    if deterministic {
        (UuidSource::deterministic(0), UuidSource::deterministic(BUILTIN_SEED))
    } else {
        (UuidSource::random(), UuidSource::random())
    }
}

fn expand_program(source: &str, deterministic: bool) -> Result<Program, String> {
    let (uuids, library) = uuid_source(deterministic);
    let mut registry = builtin_registry(&library);
    expand_source(source, &mut registry, &uuids).map_err(|e| e.to_string())
}

fn or_error(result: Result<String, String>) -> String {
    result.unwrap_or_else(|e| format!("error: {e}"))
}

/// Expanded program text.
pub fn expand_text(source: &str, deterministic: bool) -> Result<String, String> {
    expand_program(source, deterministic).map(|p| render(&p))
}

/// One stable model per line, or `UNSATISFIABLE`.
pub fn solve_text(source: &str, deterministic: bool) -> Result<String, String> {
    let program = expand_program(source, deterministic)?;
    let models = stable_models(&program, &LIMITS).map_err(|e| e.to_string())?;
    Ok(format_models(&models))
}

/// One report line per `%!` directive.
pub fn validate_text(source: &str, deterministic: bool, strict: bool) -> Result<String, String> {
    let manifest = parse_manifest(source).map_err(|e| e.to_string())?;
    if manifest.is_empty() {
        return Ok("no %! directives found\n".to_owned());
    }
    let program = expand_program(source, deterministic)?;
    let reports = run_manifest(&program, &manifest, strict, &LIMITS).map_err(|e| e.to_string())?;
    Ok(reports.iter().map(|r| format!("{r}\n")).collect())
}

#[wasm_bindgen]
pub fn expand(source: &str, deterministic: bool) -> String {
    or_error(expand_text(source, deterministic))
}

#[wasm_bindgen]
pub fn solve(source: &str, deterministic: bool) -> String {
    or_error(solve_text(source, deterministic))
}

#[wasm_bindgen]
pub fn validate(source: &str, deterministic: bool, strict: bool) -> String {
    or_error(validate_text(source, deterministic, strict))
}
