//! Benchmark inputs shared by the compile and solver benches.

use unarysat_core::instances::{Bench, Via};

/// Instances small enough to run many times per measurement.
pub fn families() -> Vec<(String, Bench)> {
    let mut out = Vec::new();
    for (nodes, edges) in [(10, 15), (12, 18), (15, 26)] {
        out.push((format!("girth5_{nodes}_{edges}"), Bench::Girth { nodes, edges }));
    }
    out.push(("fractions_3".into(), Bench::Fractions { n: 3 }));
    for n in [8, 12] {
        out.push((format!("partition_{n}_pb"), Bench::Partition { n, via: Via::Pb }));
        out.push((format!("partition_{n}_binary"), Bench::Partition { n, via: Via::Binary }));
    }
    out
}

/// `bool_array_sum_leq` over `n` fresh Booleans.
pub fn sum_leq(n: usize, k: usize) -> String {
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut text: String = xs.iter().map(|x| format!("new_bool({x})\n")).collect();
    text.push_str(&format!("bool_array_sum_leq([{}],{k})\n", xs.join(",")));
    text
}

/// `int_plus` over two integers of the given width.
pub fn plus(m: i64, p: i64) -> String {
    format!("new_int(a,0,{m})\nnew_int(b,0,{p})\nnew_int(c,0,{})\nint_plus(a,b,c)\n", m + p)
}
