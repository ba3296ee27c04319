//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use bifib::cell::{CellStructure, StructureRecord};
use bifib::verify::{self, IdentityId, ReportRecord};
use bifib::word::{self, Convention, Params};
use bifib::{decompose, refine, DecomposeOptions};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest parent word the page will handle.
pub const DEMO_CAP: u64 = 2_000_000;

/// Symbols returned to the page for display.
const SHOWN_SYMBOLS: usize = 4096;

fn params(a: u32, b: u32, classical: bool) -> Result<Params, String> {
    let convention = if classical {
        Convention::ClassicalSwapped
    } else {
        Convention::Standard
    };
    Params::with_convention(a, b, convention).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Generated {
    kind: String,
    length: u64,
    symbols: String,
    truncated: bool,
}

pub fn generate_json(a: u32, b: u32, n: u32, kind: &str, classical: bool) -> Result<String, String> {
    let p = params(a, b, classical)?;
    let w = match kind {
        "f" => word::word_f_capped(&p, n, DEMO_CAP),
        "t" => word::word_t_capped(&p, n, DEMO_CAP),
        "I" | "i" => word::word_i_capped(&p, n, DEMO_CAP),
        other => return Err(format!("unknown word kind {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let mut symbols = w.to_string();
    let truncated = symbols.len() > SHOWN_SYMBOLS;
    symbols.truncate(SHOWN_SYMBOLS);
    let out = Generated {
        kind: kind.to_string(),
        length: w.len() as u64,
        symbols,
        truncated,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

pub fn structure(
    a: u32,
    b: u32,
    n: u32,
    classical: bool,
    depth: u32,
    expand_i: bool,
    compose_twice: bool,
) -> Result<CellStructure, String> {
    let p = params(a, b, classical)?;
    let length = word::length_f(&p, n).map_err(|e| e.to_string())?;
    if length > DEMO_CAP {
        return Err(format!("f(n={n}) has {length} symbols, demo limit is {DEMO_CAP}"));
    }
    let options = DecomposeOptions {
        expand_i: false,
        compose_twice,
    };
    let base = decompose(&p, n, options).map_err(|e| e.to_string())?;
    let refined = refine(&base, depth).map_err(|e| e.to_string())?;
    if expand_i {
        bifib::expand_all_i(&refined).map_err(|e| e.to_string())
    } else {
        Ok(refined)
    }
}

#[derive(Serialize)]
struct Decomposed {
    structure: StructureRecord,
    parent_length: u64,
    flatten_ok: bool,
    flatten_error: Option<String>,
}

pub fn decompose_json(
    a: u32,
    b: u32,
    n: u32,
    classical: bool,
    depth: u32,
    expand_i: bool,
    compose_twice: bool,
) -> Result<String, String> {
    let s = structure(a, b, n, classical, depth, expand_i, compose_twice)?;
    let reference = word::word_f(&s.params, n).map_err(|e| e.to_string())?;
    let (flatten_ok, flatten_error) = match bifib::flatten(&s) {
        Ok(w) => (w == reference, None),
        Err(e) => (false, Some(e.to_string())),
    };
    let out = Decomposed {
        structure: s.to_record(),
        parent_length: s.parent_length,
        flatten_ok,
        flatten_error,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

/// Every identity at a single `(a, b, n)`.
pub fn verify_json(a: u32, b: u32, n: u32, classical: bool) -> Result<String, String> {
    let p = params(a, b, classical)?;
    let records: Vec<ReportRecord> = IdentityId::ALL
        .iter()
        .map(|&id| verify::verify_identity(id, &p, n).to_record())
        .collect();
    Ok(serde_json::to_string(&records).expect("serializes"))
}

#[wasm_bindgen]
pub fn generate(a: u32, b: u32, n: u32, kind: &str, classical: bool) -> Result<String, JsValue> {
    generate_json(a, b, n, kind, classical).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = decomposeCells)]
pub fn decompose_cells(
    a: u32,
    b: u32,
    n: u32,
    classical: bool,
    depth: u32,
    expand_i: bool,
    compose_twice: bool,
) -> Result<String, JsValue> {
    decompose_json(a, b, n, classical, depth, expand_i, compose_twice)
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = verifyPoint)]
pub fn verify_point(a: u32, b: u32, n: u32, classical: bool) -> Result<String, JsValue> {
    verify_json(a, b, n, classical).map_err(|e| JsValue::from_str(&e))
}
