//! wasm-bindgen entry points for the browser demo in `www/`.
//!
//! Every export returns a JSON string; errors come back as a plain message.

use num_bigint::BigInt;
use serde_json::json;
use symrank::ffield::{self, PrimeField};
use symrank::motivic;
use wasm_bindgen::prelude::wasm_bindgen;

/// Browser tabs get a smaller enumeration cap than the CLI.
pub const DEMO_BUDGET: u64 = 20_000_000;

pub const MAX_TABLE_N: u32 = 16;

/// Every `[Sym^{n,k}]` for `k <= n <= max_n`, with its coefficient list
/// (ascending powers) for plotting.
#[wasm_bindgen]
pub fn class_table(max_n: u32) -> Result<String, String> {
    if max_n > MAX_TABLE_N {
        return Err(format!("max_n is capped at {MAX_TABLE_N}"));
    }
    let rows: Vec<_> = (0..=max_n)
        .flat_map(|n| (0..=i64::from(n)).map(move |k| (n, k)))
        .map(|(n, k)| {
            let value = motivic::class_exact(n, k).value;
            let top = value.degree_range().map_or(0, |(_, hi)| hi);
            let coefficients: Vec<String> = (0..=top).map(|e| value.coeff(e).to_string()).collect();
            json!({
                "n": n,
                "k": k,
                "text": value.to_string(),
                "latex": value.to_latex(),
                "coefficients": coefficients,
            })
        })
        .collect();
    Ok(json!({ "max_n": max_n, "rows": rows }).to_string())
}

/// Brute-force rank histogram over `F_p` next to the classes at `L = p`.
#[wasm_bindgen]
pub fn rank_counts(n: u32, p: u32) -> Result<String, String> {
    let field = PrimeField::new(u64::from(p)).map_err(|e| e.to_string())?;
    let hist = ffield::enumerate_rank_counts(n as usize, &field, DEMO_BUDGET).map_err(|e| e.to_string())?;
    let rows: Vec<_> = hist
        .counts
        .iter()
        .enumerate()
        .map(|(k, &count)| {
            let formula = motivic::class_exact(n, k as i64)
                .point_count(&BigInt::from(p))
                .expect("p >= 3");
            json!({
                "k": k,
                "brute_force": count,
                "formula": formula.to_string(),
                "match": BigInt::from(count) == formula,
            })
        })
        .collect();
    Ok(json!({ "n": n, "p": p, "total": hist.total(), "rows": rows }).to_string())
}

/// (minor rank, full rank) census with the per-bucket completion counts.
#[wasm_bindgen]
pub fn fiber_census(n: u32, p: u32) -> Result<String, String> {
    let field = PrimeField::new(u64::from(p)).map_err(|e| e.to_string())?;
    let n = n as usize;
    let census = ffield::fiber_census(n, &field, DEMO_BUDGET).map_err(|e| e.to_string())?;
    let minors = ffield::enumerate_rank_counts(n - 1, &field, DEMO_BUDGET).map_err(|e| e.to_string())?;
    let p = u64::from(p);
    let cells: Vec<_> = (0..n)
        .flat_map(|r| (0..=n).map(move |s| (r, s)))
        .map(|(r, s)| {
            let count = census.count(r, s);
            let expected = ffield::expected_completions(p, n, r, s) * minors.counts[r];
            json!({
                "minor_rank": r,
                "full_rank": s,
                "count": count,
                "expected": expected,
                "match": count == expected,
            })
        })
        .collect();
    Ok(json!({ "n": n, "p": p, "total": census.total(), "cells": cells }).to_string())
}
