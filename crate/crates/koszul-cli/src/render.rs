//! Text and JSON renderings. The two formats carry the same entries; the
//! text form keeps one parseable `i=.. a=(..) dim=..` line per entry.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use koszul::families::{
    default_degree_bound, is_generic, is_quasi_stable, scarf_complex, FamilyError, QuasiStability,
};
use koszul::lattice::lcm_lattice;
use koszul::{BettiTable, ExponentVector, MonomialIdeal};

pub fn multidegree(a: &ExponentVector) -> String {
    let parts: Vec<String> = a.exponents().iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Serialize)]
struct EntryJson {
    i: usize,
    multidegree: Vec<u32>,
    dim: usize,
}

#[derive(Serialize)]
struct CoarseJson {
    i: usize,
    total_degree: u32,
    dim: usize,
}

#[derive(Serialize)]
struct StatsJson {
    multidegrees_checked: usize,
    rank_computations: usize,
    les_shortcuts: usize,
    taylor_size: u128,
    minimal_total: usize,
    minimal_distinct: usize,
}

#[derive(Serialize)]
struct BettiJson<'a> {
    variables: usize,
    generators: usize,
    characteristic: u64,
    strategy: &'a str,
    entries: Vec<EntryJson>,
    coarse: Vec<CoarseJson>,
    totals: Vec<usize>,
    stats: StatsJson,
}

fn coarse_rows(table: &BettiTable) -> Vec<CoarseJson> {
    let mut acc: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for (i, a, dim) in table.iter() {
        *acc.entry((i, a.total_degree())).or_insert(0) += dim;
    }
    acc.into_iter().map(|((i, total_degree), dim)| CoarseJson { i, total_degree, dim }).collect()
}

fn stats_json(table: &BettiTable) -> StatsJson {
    let stats = table.stats();
    StatsJson {
        multidegrees_checked: stats.multidegrees_checked,
        rank_computations: stats.rank_computations,
        les_shortcuts: stats.les_shortcuts,
        taylor_size: stats.taylor_size,
        minimal_total: stats.minimal_total,
        minimal_distinct: table.distinct_multidegrees(),
    }
}

pub fn betti_json(ideal: &MonomialIdeal, table: &BettiTable, strategy: &str) -> String {
    let payload = BettiJson {
        variables: ideal.num_vars(),
        generators: ideal.num_generators(),
        characteristic: table.field_char(),
        strategy,
        entries: table
            .iter()
            .map(|(i, a, dim)| EntryJson { i, multidegree: a.exponents().to_vec(), dim })
            .collect(),
        coarse: coarse_rows(table),
        totals: table.totals(),
        stats: stats_json(table),
    };
    serde_json::to_string_pretty(&payload).expect("table rendering is infallible")
}

pub fn betti_text(
    ideal: &MonomialIdeal,
    table: &BettiTable,
    strategy: &str,
    with_stats: bool,
) -> String {
    let mut out = String::new();
    writeln!(out, "ideal: {} generators in {} variables", ideal.num_generators(), ideal.num_vars())
        .unwrap();
    writeln!(out, "characteristic: {}", table.field_char()).unwrap();
    writeln!(out, "strategy: {strategy}").unwrap();
    writeln!(out, "entries: {}", table.num_entries()).unwrap();
    for (i, a, dim) in table.iter() {
        writeln!(out, "i={i} a={} dim={dim}", multidegree(a)).unwrap();
    }
    if !table.is_empty() {
        writeln!(out, "coarse:").unwrap();
        for row in coarse_rows(table) {
            writeln!(out, "i={} deg={} dim={}", row.i, row.total_degree, row.dim).unwrap();
        }
        let totals: Vec<String> = table.totals().iter().map(usize::to_string).collect();
        writeln!(out, "totals: {}", totals.join(" ")).unwrap();
    }
    if with_stats {
        let stats = stats_json(table);
        writeln!(out, "stats:").unwrap();
        writeln!(out, "  multidegrees checked: {}", stats.multidegrees_checked).unwrap();
        writeln!(out, "  rank computations: {}", stats.rank_computations).unwrap();
        writeln!(out, "  les shortcuts: {}", stats.les_shortcuts).unwrap();
        writeln!(out, "  taylor size: {}", stats.taylor_size).unwrap();
        writeln!(out, "  minimal total: {}", stats.minimal_total).unwrap();
        writeln!(out, "  minimal distinct: {}", stats.minimal_distinct).unwrap();
    }
    out
}

pub fn classify_text(ideal: &MonomialIdeal, bound: Option<u32>) -> Result<String, FamilyError> {
    let mut out = String::new();
    writeln!(out, "variables: {}", ideal.num_vars()).unwrap();
    writeln!(out, "generators: {}", ideal.num_generators()).unwrap();
    writeln!(out, "generic: {}", is_generic(ideal)).unwrap();
    let bound = bound.unwrap_or_else(|| default_degree_bound(ideal));
    match is_quasi_stable(ideal, bound)? {
        QuasiStability::Yes(basis) => {
            writeln!(out, "quasi-stable: yes (Pommaret basis size {}, bound {bound})", basis.len())
                .unwrap();
        }
        QuasiStability::NoWithinBound => {
            writeln!(out, "quasi-stable: no within degree bound {bound}").unwrap();
        }
    }
    match scarf_complex(ideal) {
        Ok(scarf) => {
            let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
            for face in scarf.faces() {
                *by_size.entry(face.len()).or_insert(0) += 1;
            }
            let sizes: Vec<String> =
                by_size.into_iter().map(|(size, count)| format!("{size}:{count}")).collect();
            writeln!(out, "scarf faces: {} (by size: {})", scarf.num_faces(), sizes.join(" "))
                .unwrap();
        }
        Err(FamilyError::GeneratorCapExceeded { generators, cap }) => {
            writeln!(out, "scarf faces: skipped ({generators} generators exceeds cap {cap})")
                .unwrap();
        }
        Err(other) => return Err(other),
    }
    let r = ideal.num_generators();
    if r == 0 {
        writeln!(out, "lcm lattice size: 0").unwrap();
    } else if r <= 24 {
        writeln!(out, "lcm lattice size: {}", lcm_lattice(ideal).len()).unwrap();
    } else {
        writeln!(out, "lcm lattice size: skipped (more than 24 generators)").unwrap();
    }
    Ok(out)
}
