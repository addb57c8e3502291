//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{check_text, cnf_solutions, random_instance, strategy_for, TEMPLATES};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use unarysat_core::binary_ext::square_columns;
use unarysat_core::cardinality::{adder_cost, CostModel, Strategy};
use unarysat_core::cep::{cep, Equation};
use unarysat_core::compile::{compile_text, value_of, CompileOptions, Compiled, Outcome};
use unarysat_core::encode::Value;
use unarysat_core::instances::{Bench, Via, SYMMETRY_GROUP};
use unarysat_core::sat::SolverConfig;
use unarysat_core::{CnfDoc, Constraint, Lit, Model, UnaryInt};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compile(text: &str, strategy: Strategy) -> Compiled {
    let opts = CompileOptions {
        strategy,
        ..CompileOptions::default()
    };
    compile_text(text, &opts).unwrap()
}

/// Bits of `x` as 0/1/symbol strings.
fn shape(m: &Model, x: &UnaryInt) -> Vec<String> {
    x.bits
        .iter()
        .map(|&b| {
            let l = m.resolve(b);
            match l.const_value() {
                Some(true) => "1".into(),
                Some(false) => "0".into(),
                None => format!("{}x{}", if l.is_negated() { "-" } else { "" }, l.var().unwrap()),
            }
        })
        .collect()
}

fn domain_of(text: &str) -> BTreeSet<i64> {
    let c = compile(text, Strategy::Hybrid);
    cnf_solutions(&c).unwrap().into_iter().map(|t| t[0]).collect()
}

fn criterion1() -> Check {
    // value 3 in [0,5]
    let x = UnaryInt::new(0, [true, true, true, false, false].map(Lit::constant).to_vec());
    ensure(x.decode(|l| l.is_true()) == 3, || "[1,1,1,0,0] does not decode to 3".into())?;
    let mut m = Model::new();
    let y = m.new_unary(0, 5).unwrap();
    m.assert_geq(&y, 3);
    m.assert_lt(&y, 4);
    let s = shape(&m, &y);
    ensure(s == ["1", "1", "1", "0", "0"], || format!("3 in [0,5] has shape {s:?}"))?;

    // bounds: x3 = 1 and x6 = 0 on [0,9]
    let mut m = Model::new();
    let x = m.new_unary(0, 9).unwrap();
    m.assert_geq(&x, 3);
    m.assert_lt(&x, 6);
    let s = shape(&m, &x);
    let want = ["1", "1", "1", "x4", "x5", "0", "0", "0", "0"];
    ensure(s == want, || format!("bounds give {s:?}"))?;
    let dom = domain_of("new_int(x,0,9)\nint_geq(x,3)\nint_leq(x,5)\n");
    ensure(dom == BTreeSet::from([3, 4, 5]), || format!("bounded domain {dom:?}"))?;

    // removals: x2 = x3, x5 = x6, x7 = x8
    let mut m = Model::new();
    let x = m.new_unary(0, 9).unwrap();
    for v in [2, 5, 7] {
        m.union(x.geq(v), x.geq(v + 1));
    }
    let s = shape(&m, &x);
    ensure(s[1] == s[2] && s[4] == s[5] && s[6] == s[7], || format!("removal shape {s:?}"))?;
    let distinct: BTreeSet<&String> = s.iter().collect();
    ensure(distinct.len() == 6, || format!("removal shape {s:?}"))?;
    let dom = domain_of("new_int(x,0,9)\nint_neq(x,2)\nint_neq(x,5)\nint_neq(x,7)\n");
    let want = BTreeSet::from([0, 1, 3, 4, 6, 8, 9]);
    ensure(dom == want, || format!("domain after removals {dom:?}"))?;
    Ok("[1,1,1,0,0] = 3; shape [1,1,1,x4,x5,0,0,0,0], dom {3,4,5}; dom {0,1,3,4,6,8,9}".into())
}

fn criterion2() -> Check {
    let c = compile("new_int(a,0,5)\nnew_int(b,0,5)\nint_plus(a,b,5)\n", Strategy::Hybrid);
    let m = &c.model;
    let get = |name: &str| match m.lookup(name) {
        Some(unarysat_core::Entity::Int(x)) => x.clone(),
        _ => unreachable!(),
    };
    let (a, b) = (get("a"), get("b"));
    for i in 1..=5 {
        let (bi, ai) = (m.resolve(b.geq(i)), m.resolve(a.geq(6 - i)));
        ensure(bi == !ai, || format!("b{i} is not -a{}", 6 - i))?;
    }
    let plus = c.stats.by_tag.get("int_plus").copied().unwrap_or(0);
    ensure(plus == 0, || format!("int_plus owns {plus} clauses"))?;
    // what remains is the order-encoding chain of a
    let rest = c.stats.clauses;
    let chain = c.stats.by_tag.get("monotonicity").copied().unwrap_or(0);
    ensure(rest == chain && chain == 4, || format!("{rest} clauses, {chain} of them monotonicity"))?;
    ensure(m.num_live() == 0, || "int_plus still live".into())?;
    Ok(format!("5 equivalences b_i = -a_(6-i); int_plus contributes 0 clauses; {rest} clauses total, all the order chain of a"))
}

fn criterion3() -> Check {
    let mut rng = StdRng::seed_from_u64(2013);
    let mut solutions = 0;
    for t in TEMPLATES {
        for i in 0..100 {
            let text = random_instance(&mut rng, t, 20_000);
            match check_text(&text, strategy_for(i)) {
                Ok(n) => solutions += n,
                Err(e) => return Err(format!("{t} #{i}: {e}\n{text}")),
            }
        }
    }
    Ok(format!("26 templates x 100 instances, {solutions} solutions matched"))
}

fn criterion4() -> Check {
    // actual clause counts of the unary adder
    for m in 1..=6i64 {
        for p in 1..=6i64 {
            let text = format!("new_int(a,0,{m})\nnew_int(b,0,{p})\nnew_int(c,0,{})\nint_plus(a,b,c)\n", m + p);
            let c = compile(&text, Strategy::Adder);
            let got = c.stats.by_tag["int_plus"] as u64;
            let want = 2 * (m + p + m * p) as u64;
            ensure(got == want, || format!("adder {m}+{p}: {got} clauses, want {want}"))?;
            ensure(adder_cost(m as u64, p as u64).clauses == want, || "adder cost formula".into())?;
        }
    }
    let mut cm = CostModel::new();
    for k in 1..=7u64 {
        let (a, g) = (adder_cost(k, k), cm.merger(k, k));
        ensure(a.clauses <= g.clauses, || format!("m=p={k}: adder {} > merger {}", a.clauses, g.clauses))?;
    }
    for k in 1..=128u64 {
        let (h, g) = (cm.hybrid(k, k), cm.merger(k, k));
        ensure(h.clauses <= g.clauses && h.vars <= g.vars, || {
            format!("m=p={k}: hybrid {h:?} vs merger {g:?}")
        })?;
    }
    let (h, g) = (cm.hybrid(128, 128), cm.merger(128, 128));
    Ok(format!(
        "adder = 2(m+p+mp) for m,p <= 6; adder <= merger up to 7; hybrid <= merger up to 128 (at 128: {}/{} vs {}/{} clauses/vars)",
        h.clauses, h.vars, g.clauses, g.vars
    ))
}

fn criterion5() -> Check {
    let mut nodes = 0;
    for n in 4..=8usize {
        for k in 0..n {
            let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let mut text: String = xs.iter().map(|x| format!("new_bool({x})\n")).collect();
            text.push_str(&format!("bool_array_sum_leq([{}],{k})\n", xs.join(",")));
            let c = compile(&text, Strategy::Hybrid);
            // the first int_plus derived from the source is T3 + T2 = k
            let source = c
                .model
                .slots
                .iter()
                .enumerate()
                .position(|(i, s)| s.origin == i && s.tag.starts_with("bool_array_sum"))
                .unwrap();
            let node = c
                .model
                .slots
                .iter()
                .enumerate()
                .position(|(i, s)| i > source && s.origin == source && s.tag == "int_plus");
            if let Some(j) = node {
                nodes += 1;
                let owned: usize = c.doc.provenance.iter().filter(|p| p.slot == Some(j)).map(|p| p.clauses.len()).sum();
                ensure(owned == 0, || format!("n={n} k={k}: the T3+T2=k node owns {owned} clauses"))?;
            } else {
                ensure(k == 0 || k == n - 1, || format!("n={n} k={k}: no T3+T2=k node"))?;
            }
            let got = cnf_solutions(&c)?;
            let want: BTreeSet<Vec<i64>> = (0..1u32 << n)
                .filter(|a| a.count_ones() as usize <= k)
                .map(|a| (0..n).map(|i| (a >> i & 1) as i64).collect())
                .collect();
            ensure(got == want, || format!("n={n} k={k}: model set differs"))?;
        }
    }
    Ok(format!("{nodes} T3+T2=k nodes with 0 clauses; model sets equal sum <= k for n in 4..8"))
}

/// Determined equations by enumeration, in the same normal form as CEP.
fn determined(doc: &CnfDoc, tracked: &[u32]) -> Option<BTreeSet<Equation>> {
    let n = doc.num_vars;
    let models: Vec<Vec<bool>> = (0..1u32 << n)
        .map(|a| (0..n).map(|i| a >> i & 1 == 1).collect())
        .filter(|m: &Vec<bool>| doc.clauses.iter().all(|c| c.iter().any(|&l| m[l.unsigned_abs() as usize - 1] == (l > 0))))
        .collect();
    if models.is_empty() {
        return None;
    }
    let occurs = |v: u32| doc.clauses.iter().any(|c| c.iter().any(|l| l.unsigned_abs() == v));
    let xs: Vec<u32> = tracked.iter().copied().filter(|&v| occurs(v)).collect();
    let col = |v: u32| -> Vec<bool> { models.iter().map(|m| m[v as usize - 1]).collect() };
    let mut out = BTreeSet::new();
    let mut done: Vec<u32> = Vec::new();
    for (j, &x) in xs.iter().enumerate() {
        let cx = col(x);
        if cx.iter().all(|&b| b) || cx.iter().all(|&b| !b) {
            out.insert(Equation::Const(x, cx[0]));
            continue;
        }
        let rep = xs[..j].iter().find(|&&y| {
            let cy = col(y);
            !done.contains(&y) && (cy == cx || cy.iter().zip(&cx).all(|(a, b)| a != b))
        });
        if let Some(&y) = rep {
            let same = col(y) == cx;
            out.insert(if same { Equation::Equal(y, x) } else { Equation::Opposite(y, x) });
            done.push(x);
        }
    }
    Some(out)
}

fn criterion6() -> Check {
    // three models over x1..x5
    let mut doc = CnfDoc {
        num_vars: 5,
        origin: (1..=5).map(Some).collect(),
        ..CnfDoc::default()
    };
    let models = [0b10010u32, 0b10001, 0b11001];
    for a in 0..32u32 {
        if !models.contains(&a) {
            doc.clauses.push((0..5).map(|i| if a >> (4 - i) & 1 == 1 { -(i + 1) } else { i + 1 }).collect());
        }
    }
    let out = cep(&doc, &[1, 2, 3, 4, 5]).unwrap().unwrap();
    let got: BTreeSet<Equation> = out.equations.iter().copied().collect();
    let want = BTreeSet::from([Equation::Const(1, true), Equation::Const(3, false), Equation::Opposite(4, 5)]);
    ensure(got == want, || format!("three-model instance gives {got:?}"))?;

    let mut rng = StdRng::seed_from_u64(42);
    let mut done = 0;
    let mut equations = 0;
    let mut max_calls = 0;
    while done < 200 {
        let n = rng.gen_range(2..=10u32);
        let mut doc = CnfDoc {
            num_vars: n,
            origin: (1..=n).map(Some).collect(),
            ..CnfDoc::default()
        };
        let lit = |rng: &mut StdRng| {
            let v = rng.gen_range(1..=n) as i32;
            if rng.gen() {
                v
            } else {
                -v
            }
        };
        for _ in 0..rng.gen_range(1..=3 * n) {
            let len = rng.gen_range(1..=3);
            let c: Vec<i32> = (0..len).map(|_| lit(&mut rng)).collect();
            doc.clauses.push(c);
        }
        // a few equivalences
        for _ in 0..rng.gen_range(0..=2) {
            let (a, b) = (lit(&mut rng), lit(&mut rng));
            doc.clauses.push(vec![a, -b]);
            doc.clauses.push(vec![-a, b]);
        }
        let tracked: Vec<u32> = (1..=n).filter(|_| rng.gen_bool(0.8)).collect();
        let Some(want) = determined(&doc, &tracked) else {
            continue;
        };
        let out = cep(&doc, &tracked).unwrap().ok_or("CEP says UNSAT on a satisfiable CNF")?;
        out.audit.verify().map_err(|e| format!("instance {done}: {e}"))?;
        let got: BTreeSet<Equation> = out.equations.iter().copied().collect();
        ensure(got == want, || format!("instance {done}: CEP {got:?}, enumeration {want:?}"))?;
        equations += got.len();
        max_calls = max_calls.max(out.audit.sat_calls as isize - out.audit.tracked as isize);
        done += 1;
    }
    Ok(format!(
        "three-model instance: x1, -x3, x4 = -x5; 200 random CNFs: sat calls <= n+1 (max excess over n: {max_calls}), 1 unsat call, {equations} equations equal enumeration"
    ))
}

fn criterion7() -> Check {
    // unary to binary for 0..63
    for v in 0..64 {
        let text = format!("new_int(u,0,63)\nnew_binary(b,6)\nint2binary(u,b)\nint_eq(u,{v})\n");
        let c = compile(&text, Strategy::Hybrid);
        let sols = cnf_solutions(&c)?;
        let want = BTreeSet::from([vec![v, v]]);
        ensure(sols == want, || format!("channeling {v}: {sols:?}"))?;
    }
    // 4x4 multiplication
    let c = compile("new_binary(a,4)\nnew_binary(b,4)\nnew_binary(c,8)\nbinary_times(a,b,c)\n", Strategy::Hybrid);
    let sols = cnf_solutions(&c)?;
    ensure(sols.len() == 256 && sols.iter().all(|t| t[0] * t[1] == t[2]), || {
        format!("binary_times: {} models", sols.len())
    })?;
    // squares
    for w in 1..=4usize {
        let sq = compile(&format!("new_binary(a,{w})\nnew_binary(c,{})\nbinary_square(a,c)\n", 2 * w), Strategy::Hybrid);
        let sols = cnf_solutions(&sq)?;
        ensure(sols.len() == 1 << w && sols.iter().all(|t| t[0] * t[0] == t[1]), || {
            format!("binary_square w={w}: {} models", sols.len())
        })?;
        let tm = compile(
            &format!("new_binary(a,{w})\nnew_binary(c,{})\nbinary_times(a,a,c)\n", 2 * w),
            Strategy::Hybrid,
        );
        let plain = cnf_solutions(&tm)?;
        ensure(plain == sols, || format!("w={w}: square and times(a,a) differ"))?;
        let mut m = Model::new();
        let a = m.new_binary(w);
        let mut out: Vec<Constraint> = Vec::new();
        let (_, fresh) = square_columns(&mut m, &a, &mut out);
        let mut distinct: BTreeSet<Lit> = fresh.iter().copied().collect();
        distinct.extend(a.bits.iter().copied());
        ensure(distinct.len() == w * (w + 1) / 2, || {
            format!("w={w}: {} distinct partial products", distinct.len())
        })?;
    }
    Ok("channeling 0..63; 256 products; squares for w <= 4 with w(w+1)/2 partial products, equal to times(a,a)".into())
}

fn run_bench(b: Bench, opts: &CompileOptions) -> Result<(Compiled, Option<Vec<(String, Value)>>), String> {
    let c = compile_text(&b.model_text(), opts).map_err(|e| e.to_string())?;
    let out = match c.solve(SolverConfig::default()).map_err(|e| e.to_string())? {
        Outcome::Sat(v) => {
            b.verify(&v)?;
            Some(v)
        }
        Outcome::Unsat => None,
    };
    Ok((c, out))
}

fn criterion8() -> Check {
    let plain = CompileOptions::default();
    let (without, sol) = run_bench(Bench::Girth { nodes: 15, edges: 26 }, &plain)?;
    ensure(sol.is_some(), || "girth5(15,26) UNSAT".into())?;
    let with_opts = CompileOptions {
        cep_groups: vec![SYMMETRY_GROUP.into()],
        ..CompileOptions::default()
    };
    let (with, sol) = run_bench(Bench::Girth { nodes: 15, edges: 26 }, &with_opts)?;
    ensure(sol.is_some(), || "girth5(15,26) with CEP UNSAT".into())?;
    let (cw, vw, co, vo) = (with.stats.clauses, with.stats.vars, without.stats.clauses, without.stats.vars);
    ensure(cw < co && vw < vo, || format!("with CEP {cw} clauses / {vw} vars, without {co} / {vo}"))?;

    let (_, sol) = run_bench(Bench::Girth { nodes: 5, edges: 6 }, &plain)?;
    ensure(sol.is_none(), || "girth5(5,6) SAT".into())?;
    // brute force over all 2^10 graphs on 5 nodes
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let exists = (0u32..1 << 10).filter(|m| m.count_ones() == 6).any(|mask| {
        let mut adj = [[false; 5]; 5];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            adj[i][j] = mask >> b & 1 == 1;
            adj[j][i] = adj[i][j];
        }
        let mut ok = true;
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    ok &= !(adj[i][j] && adj[j][k] && adj[k][i]);
                    for l in 0..5 {
                        ok &= !(i != k && j != l && adj[i][j] && adj[j][k] && adj[k][l] && adj[l][i]);
                    }
                }
            }
        }
        ok
    });
    ensure(!exists, || "brute force finds a 6-edge girth-5 graph on 5 nodes".into())?;

    let (_, sol) = run_bench(Bench::Fractions { n: 3 }, &plain)?;
    let vals = sol.ok_or("fractions(3) UNSAT")?;
    let digit = |s: &str| match value_of(&vals, s) {
        Some(Value::Int(v)) => *v,
        _ => 0,
    };
    let frac: Vec<String> = (1..=3)
        .map(|i| format!("{}/{}{}", digit(&format!("x{i}")), digit(&format!("y{i}")), digit(&format!("z{i}"))))
        .collect();

    let (_, sol) = run_bench(Bench::Partition { n: 8, via: Via::Pb }, &plain)?;
    let vals = sol.ok_or("partition(8) UNSAT")?;
    let part: Vec<usize> = (1..=8).filter(|i| value_of(&vals, &format!("s{i}")) == Some(&Value::Bool(true))).collect();
    let rest: Vec<usize> = (1..=8).filter(|i| !part.contains(i)).collect();
    let sums = |xs: &[usize]| (xs.iter().sum::<usize>(), xs.iter().map(|x| x * x).sum::<usize>());
    ensure(sums(&part) == (18, 102) && sums(&rest) == (18, 102), || format!("partition {part:?}"))?;
    Ok(format!(
        "girth5(15,26) SAT and checked, CEP {cw}/{vw} < {co}/{vo} clauses/vars; girth5(5,6) UNSAT as brute force; fractions(3) {}; partition(8) {part:?} vs {rest:?} (18/18, 102/102)",
        frac.join(" + ")
    ))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check, Duration); 8] = [
        (1, "order-encoding examples", criterion1, Duration::from_secs(1)),
        (2, "int_plus equi-propagation", criterion2, Duration::from_secs(1)),
        (3, "template soundness and completeness", criterion3, Duration::from_secs(300)),
        (4, "cardinality sizes", criterion4, Duration::from_secs(10)),
        (5, "sum_leq decomposition", criterion5, Duration::from_secs(60)),
        (6, "complete equi-propagation", criterion6, Duration::from_secs(120)),
        (7, "binary extension", criterion7, Duration::from_secs(120)),
        (8, "benchmarks", criterion8, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    let mut timings = HashMap::new();
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        timings.insert(id, took);
        let res = match res {
            Ok(s) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}; {s}")),
            r => r,
        };
        match res {
            Ok(s) => println!("criterion {id} PASS ({name}, {took:.2?}): {s}"),
            Err(e) => {
                failed += 1;
                println!("criterion {id} FAIL ({name}, {took:.2?}): {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
