//! Benchmark model generators and solution checkers that only look at the
//! decoded values.

use std::fmt::Write;

use crate::compile::value_of;
use crate::encode::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    Pb,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bench {
    /// Graphs without 3- and 4-cycles with a given number of edges.
    Girth { nodes: usize, edges: usize },
    /// `sum x_i / (10 y_i + z_i) = 1` over digits 1..9.
    Fractions { n: usize },
    /// Split `1..n` into two halves with equal sums and equal square sums.
    Partition { n: usize, via: Via },
}

/// Label of the symmetry constraints in girth models.
pub const SYMMETRY_GROUP: &str = "sym";

fn list<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn edge(i: usize, j: usize) -> String {
    if i == j {
        "false".into()
    } else {
        format!("a_{i}_{j}")
    }
}

impl Bench {
    pub fn model_text(&self) -> String {
        match *self {
            Bench::Girth { nodes, edges } => girth_text(nodes, edges),
            Bench::Fractions { n } => fractions_text(n),
            Bench::Partition { n, via } => partition_text(n, via),
        }
    }

    /// Checks a decoded solution against the problem statement.
    pub fn verify(&self, vals: &[(String, Value)]) -> Result<(), String> {
        match *self {
            Bench::Girth { nodes, edges } => verify_girth(nodes, edges, vals),
            Bench::Fractions { n } => verify_fractions(n, vals),
            Bench::Partition { n, .. } => verify_partition(n, vals),
        }
    }
}

fn girth_text(n: usize, edges: usize) -> String {
    let mut s = String::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                writeln!(s, "new_bool({})", edge(i, j)).unwrap();
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            writeln!(s, "bool_eq({},{})@{SYMMETRY_GROUP}", edge(i, j), edge(j, i)).unwrap();
        }
    }
    // consecutive rows sorted, ignoring the two columns they swap
    for i in 1..n {
        let row = |r: usize| list((1..=n).filter(|&k| k != i && k != i + 1).map(|k| edge(r, k)));
        writeln!(s, "bool_arrays_lex({},{})@{SYMMETRY_GROUP}", row(i), row(i + 1)).unwrap();
    }
    let (dmin, dmax) = degree_bounds(n, edges);
    for i in 1..=n {
        let row = list((1..=n).filter(|&k| k != i).map(|k| edge(i, k)));
        writeln!(s, "bool_array_sum_leq({row},{dmax})@{SYMMETRY_GROUP}").unwrap();
        if dmin > 0 {
            writeln!(s, "bool_array_sum_geq({row},{dmin})@{SYMMETRY_GROUP}").unwrap();
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                writeln!(s, "bool_array_sum_lt({},3)", list([edge(i, j), edge(j, k), edge(k, i)])).unwrap();
            }
        }
    }
    // one tuple per 4-cycle: i smallest, j < l
    for i in 1..=n {
        for j in i + 1..=n {
            for l in j + 1..=n {
                for k in i + 1..=n {
                    if k != j && k != l {
                        let c = list([edge(i, j), edge(j, k), edge(k, l), edge(l, i)]);
                        writeln!(s, "bool_array_sum_lt({c},4)").unwrap();
                    }
                }
            }
        }
    }
    let all = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| edge(i, j)));
    writeln!(s, "bool_array_sum_eq({},{edges})", list(all)).unwrap();
    s
}

/// Upper bound on the edges of a 4-cycle-free graph with `m` nodes:
/// pairs of nodes have at most one common neighbour, so
/// `sum C(d,2) <= C(m,2)`, which gives `m/4 (1 + sqrt(4m - 3))`.
pub fn max_edges_bound(m: usize) -> usize {
    if m < 2 {
        return 0;
    }
    let r = (m as f64 / 4.0 * (1.0 + ((4 * m - 3) as f64).sqrt())).floor() as usize;
    r.min(m * (m - 1) / 2)
}

/// Degree bounds valid for every graph with `n` nodes, `e` edges and no 3-
/// or 4-cycles. A node of degree `d` and its neighbours touch at most
/// `n - 1` edges, the rest of the graph has `n - 1 - d` nodes, so
/// `e <= n - 1 + max_edges_bound(n - 1 - d)`. Dropping a node of minimum
/// degree leaves at most `max_edges_bound(n - 1)` edges.
pub fn degree_bounds(n: usize, e: usize) -> (usize, usize) {
    let dmin = e.saturating_sub(max_edges_bound(n - 1));
    let dmax = (0..n).rev().find(|&d| e <= n - 1 + max_edges_bound(n - 1 - d)).unwrap_or(0);
    (dmin, dmax)
}

fn get_bool(vals: &[(String, Value)], name: &str) -> Result<bool, String> {
    match value_of(vals, name) {
        Some(Value::Bool(b)) => Ok(*b),
        _ => Err(format!("no Boolean `{name}` in the solution")),
    }
}

fn get_int(vals: &[(String, Value)], name: &str) -> Result<i64, String> {
    match value_of(vals, name) {
        Some(Value::Int(v)) => Ok(*v),
        _ => Err(format!("no integer `{name}` in the solution")),
    }
}

fn verify_girth(n: usize, edges: usize, vals: &[(String, Value)]) -> Result<(), String> {
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                adj[i][j] = get_bool(vals, &edge(i, j))?;
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if adj[i][j] != adj[j][i] {
                return Err(format!("adjacency is not symmetric at {i},{j}"));
            }
        }
    }
    let count = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).count();
    if count != edges {
        return Err(format!("{count} edges, expected {edges}"));
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && j != k && i != k && adj[i][j] && adj[j][k] && adj[k][i] {
                    return Err(format!("triangle {i} {j} {k}"));
                }
                for l in 1..=n {
                    let distinct = i != j && i != k && i != l && j != k && j != l && k != l;
                    if distinct && adj[i][j] && adj[j][k] && adj[k][l] && adj[l][i] {
                        return Err(format!("4-cycle {i} {j} {k} {l}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn fractions_text(n: usize) -> String {
    let mut s = String::new();
    let digits: Vec<String> = (1..=n).flat_map(|i| ["x", "y", "z"].map(|d| format!("{d}{i}"))).collect();
    for d in &digits {
        writeln!(s, "new_int({d},1,9)").unwrap();
    }
    let w = |k: usize| 4 + 7 * k;
    for i in 1..=n {
        writeln!(s, "new_int(d{i},11,99)").unwrap();
        writeln!(s, "int_array_lin_eq([10,1],[y{i},z{i}],d{i})").unwrap();
        writeln!(s, "new_binary(bd{i},7)").unwrap();
        writeln!(s, "int2binary(d{i},bd{i})").unwrap();
        writeln!(s, "new_binary(bx{i},4)").unwrap();
        writeln!(s, "int2binary(x{i},bx{i})").unwrap();
    }
    // p_i = x_i * prod_{j != i} d_j, built left to right
    for i in 1..=n {
        let mut acc = format!("bx{i}");
        let mut k = 0;
        for j in (1..=n).filter(|&j| j != i) {
            k += 1;
            let next = format!("p{i}_{k}");
            writeln!(s, "new_binary({next},{})", w(k)).unwrap();
            writeln!(s, "binary_times({acc},bd{j},{next})").unwrap();
            acc = next;
        }
        writeln!(s, "new_binary(p{i},{})", w(k)).unwrap();
        writeln!(s, "binary_array_sum_eq([{acc}],p{i})").unwrap();
    }
    let mut acc = "bd1".to_string();
    for j in 2..=n {
        let next = format!("q{j}");
        writeln!(s, "new_binary({next},{})", 7 * j).unwrap();
        writeln!(s, "binary_times({acc},bd{j},{next})").unwrap();
        acc = next;
    }
    writeln!(s, "binary_array_sum_eq({},{acc})", list((1..=n).map(|i| format!("p{i}")))).unwrap();
    let ub = n.div_ceil(3);
    for v in 1..=9 {
        for d in &digits {
            writeln!(s, "new_bool(o_{d}_{v})").unwrap();
            writeln!(s, "int_eq_reif({d},{v},o_{d}_{v})").unwrap();
        }
        let os = list(digits.iter().map(|d| format!("o_{d}_{v}")));
        writeln!(s, "bool_array_sum_geq({os},1)").unwrap();
        writeln!(s, "bool_array_sum_leq({os},{ub})").unwrap();
    }
    s
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn verify_fractions(n: usize, vals: &[(String, Value)]) -> Result<(), String> {
    let mut counts = [0usize; 10];
    // running sum num/den in lowest terms
    let (mut num, mut den) = (0u128, 1u128);
    for i in 1..=n {
        let mut ds = [0i64; 3];
        for (k, d) in ["x", "y", "z"].iter().enumerate() {
            let v = get_int(vals, &format!("{d}{i}"))?;
            if !(1..=9).contains(&v) {
                return Err(format!("digit {d}{i} = {v} out of range"));
            }
            counts[v as usize] += 1;
            ds[k] = v;
        }
        let (x, q) = (ds[0] as u128, (10 * ds[1] + ds[2]) as u128);
        num = num * q + x * den;
        den *= q;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    if num != den {
        return Err(format!("fractions sum to {num}/{den}"));
    }
    let ub = n.div_ceil(3);
    for (v, &c) in counts.iter().enumerate().skip(1) {
        if c < 1 || c > ub {
            return Err(format!("digit {v} used {c} times"));
        }
    }
    Ok(())
}

fn partition_text(n: usize, via: Via) -> String {
    let mut s = String::new();
    for i in 1..=n {
        writeln!(s, "new_bool(s{i})").unwrap();
    }
    let ss = list((1..=n).map(|i| format!("s{i}")));
    // twice the chosen part equals the whole
    writeln!(s, "bool_array_pb_eq({},{ss},{n})", list((1..=n).map(|_| 2))).unwrap();
    let total: usize = (1..=n).sum();
    let squares: usize = (1..=n).map(|i| i * i).sum();
    match via {
        Via::Pb => {
            writeln!(s, "bool_array_pb_eq({},{ss},{total})", list((1..=n).map(|i| 2 * i))).unwrap();
            writeln!(s, "bool_array_pb_eq({},{ss},{squares})", list((1..=n).map(|i| 2 * i * i))).unwrap();
        }
        Via::Binary => {
            if total % 2 == 1 || squares % 2 == 1 {
                writeln!(s, "bool_array_or([])").unwrap();
                return s;
            }
            // m_i is i when s_i holds and 0 otherwise
            let bits = |i: usize| {
                let w = usize::BITS - i.leading_zeros();
                list((0..w).map(|b| if i >> b & 1 == 1 { format!("s{i}") } else { "false".into() }))
            };
            writeln!(s, "binary_array_sum_eq({},{})", list((1..=n).map(bits)), total / 2).unwrap();
            for i in 1..=n {
                let w = 2 * (usize::BITS - i.leading_zeros());
                writeln!(s, "new_binary(sq{i},{w})").unwrap();
                writeln!(s, "binary_square({},sq{i})", bits(i)).unwrap();
            }
            writeln!(s, "binary_array_sum_eq({},{})", list((1..=n).map(|i| format!("sq{i}"))), squares / 2).unwrap();
        }
    }
    s
}

fn verify_partition(n: usize, vals: &[(String, Value)]) -> Result<(), String> {
    let mut part = Vec::new();
    for i in 1..=n {
        if get_bool(vals, &format!("s{i}"))? {
            part.push(i);
        }
    }
    let rest: Vec<usize> = (1..=n).filter(|i| !part.contains(i)).collect();
    let sum = |xs: &[usize], p: u32| xs.iter().map(|&x| x.pow(p)).sum::<usize>();
    if part.len() != rest.len() {
        return Err(format!("parts have sizes {} and {}", part.len(), rest.len()));
    }
    for p in 1..=2 {
        if sum(&part, p) != sum(&rest, p) {
            return Err(format!("power {p} sums differ: {} vs {}", sum(&part, p), sum(&rest, p)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::{compile_text, CompileOptions, Outcome};
    use crate::sat::SolverConfig;

    fn run(b: Bench) -> Option<Vec<(String, Value)>> {
        let c = compile_text(&b.model_text(), &CompileOptions::default()).unwrap();
        match c.solve(SolverConfig::default()).unwrap() {
            Outcome::Sat(v) => Some(v),
            Outcome::Unsat => None,
        }
    }

    #[test]
    fn small_girth_instances() {
        for (nodes, edges, sat) in [(4, 3, true), (5, 5, true), (5, 6, false)] {
            let b = Bench::Girth { nodes, edges };
            let got = run(b);
            assert_eq!(got.is_some(), sat, "{nodes} {edges}");
            if let Some(v) = got {
                b.verify(&v).unwrap();
            }
        }
    }

    #[test]
    fn degree_bounds_hold_on_small_graphs() {
        // every girth >= 5 graph on 6 nodes, by brute force
        let n = 6;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut adj = [[false; 6]; 6];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
            let short = (0..n).any(|i| {
                (0..n).any(|j| {
                    (0..n).any(|k| {
                        let tri = adj[i][j] && adj[j][k] && adj[k][i];
                        let sq = (0..n).any(|l| i != k && j != l && adj[i][j] && adj[j][k] && adj[k][l] && adj[l][i]);
                        tri || sq
                    })
                })
            });
            if short {
                continue;
            }
            let deg: Vec<usize> = (0..n).map(|i| adj[i].iter().filter(|&&a| a).count()).collect();
            let (lo, hi) = degree_bounds(n, mask.count_ones() as usize);
            assert!(deg.iter().all(|&d| lo <= d && d <= hi), "{mask:b}");
        }
    }

    #[test]
    fn partition_paths_agree() {
        for n in [4, 5, 8] {
            let a = run(Bench::Partition { n, via: Via::Pb });
            let b = run(Bench::Partition { n, via: Via::Binary });
            assert_eq!(a.is_some(), b.is_some(), "n = {n}");
            for v in a.iter().chain(b.iter()) {
                verify_partition(n, v).unwrap();
            }
        }
    }

    #[test]
    fn one_fraction_is_unsat() {
        assert!(run(Bench::Fractions { n: 1 }).is_none());
    }
}
