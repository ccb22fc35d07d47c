//! Stable text renderings of simulation outputs.
//!
//! The trace CSV schema, for a network of `N` microgrids of which the first
//! `Ns` carry storage, is:
//!
//! ```text
//! k,lambda,pg_1..pg_N,pd_1..pd_N,v_1..v_N,s_1..s_Ns,u_d,u_g,stored_total,u_c,archive_size,fallback
//! ```
//!
//! where `k` is the step, `lambda` the applied price, `pg_i` the grid
//! exchange of microgrid `i`, `pd_i` its demand, `v_i` its renewable output,
//! `s_j` the end-of-step stored level of storage microgrid `j`, the `u_*`
//! columns the attained utilities and penalty, and `fallback` is `0`/`1`.
//! Front files hold one JSON object per archive member:
//! `{"k":…,"price":…,"dispatch":[…],"objectives":[…]}`.
//!
//! Numbers are rendered with the shortest round-trip formatting, so equal
//! runs produce byte-identical files. The column set is stable; downstream
//! tooling may rely on it.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::ScenarioConfig;
use crate::moia::ParetoArchive;
use crate::scalar::Scalar;
use crate::sim::SimulationTrace;

/// File name of the per-run trace table.
pub const TRACE_FILE: &str = "trace.csv";

/// File name of the per-run manifest.
pub const RUN_FILE: &str = "run.json";

/// File name of step `k`'s nondominated-front dump.
pub fn front_file_name(k: usize) -> String {
    format!("front_{k:04}.jsonl")
}

/// Header row of the trace CSV for the given network shape.
pub fn trace_header<T: Scalar>(config: &ScenarioConfig<T>) -> String {
    let mut h = String::from("k,lambda");
    for tag in ["pg", "pd", "v"] {
        for i in 1..=config.count() {
            write!(h, ",{tag}_{i}").unwrap();
        }
    }
    for j in 1..=config.storage_count() {
        write!(h, ",s_{j}").unwrap();
    }
    h.push_str(",u_d,u_g,stored_total,u_c,archive_size,fallback");
    h
}

/// Renders a full trace as CSV text (header + one row per step, trailing
/// newline).
pub fn render_trace_csv<T: Scalar>(
    trace: &SimulationTrace<T>,
    config: &ScenarioConfig<T>,
) -> String {
    let mut out = trace_header(config);
    out.push('\n');
    for r in &trace.records {
        write!(out, "{},{}", r.k, r.antibody.price).unwrap();
        for group in [&r.dispatch, &r.demands, &config.res_output[r.k]] {
            for x in group.iter() {
                write!(out, ",{x}").unwrap();
            }
        }
        for s in &r.stored_next {
            write!(out, ",{s}").unwrap();
        }
        write!(
            out,
            ",{},{},{},{},{},{}",
            r.objectives.microgrid_utility(),
            r.objectives.grid_utility(),
            r.objectives.stored_total(),
            r.objectives.penalty(),
            r.archive_size,
            u8::from(r.fallback)
        )
        .unwrap();
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct FrontRow<'a, T> {
    k: usize,
    price: T,
    dispatch: &'a [T],
    objectives: &'a [T],
}

/// Renders step `k`'s archive as JSON Lines (one member per line, archive
/// order, trailing newline; empty string for an empty archive).
pub fn render_front_jsonl<T>(k: usize, archive: &ParetoArchive<T>) -> String
where
    T: Scalar + Serialize,
{
    let mut out = String::new();
    for m in &archive.entries {
        let row = FrontRow {
            k,
            price: m.point[0],
            dispatch: &m.point[1..],
            objectives: &m.objectives,
        };
        out.push_str(&serde_json::to_string(&row).expect("front rows serialize"));
        out.push('\n');
    }
    out
}
