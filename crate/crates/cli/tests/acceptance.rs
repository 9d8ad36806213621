//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use casson_core::formulas::{
    bb_census, decompose_lambda_zero, h1_small_seifert, h1_small_seifert_snf, lambda_psl_expr, lambda_psl_seifert_hs,
    lambda_psl_small_seifert, lambda_psl_twist, lambda_sl_expr, lambda_sl_small_seifert,
};
use casson_core::oracle::{
    count_sl_irreducible, count_triangle_reducible, enumerate_triangle_diagonal_characters,
    triangle_closed_form_applies, triangle_reducible_closed_form, DEFAULT_CAP,
};
use casson_core::report::{sample_coefficients, sweep_specs};
use casson_core::snf::two_torsion_order;
use casson_core::{
    AbelianGroup, ManifoldExpr, ManifoldSpec, QuarterRational, SeifertHSSpec, SmallSeifertSpec, TwistSurgerySpec,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn q(s: &str) -> QuarterRational {
    s.parse().unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Outcome {
    let mut specs: Vec<SmallSeifertSpec> =
        sample_coefficients(4, 6, 8, 6).into_iter().map(|(a, b, c)| SmallSeifertSpec::new(4, 6, 8, a, b, c).unwrap()).collect();
    specs.push(SmallSeifertSpec::new(4, 6, 8, -1, 1, 1).unwrap());
    specs.push(SmallSeifertSpec::new(4, 6, 8, 3, -5, 7).unwrap());
    for spec in &specs {
        let expr = ManifoldExpr::Leaf(ManifoldSpec::SmallSeifert(*spec));
        let start = Instant::now();
        let r = decompose_lambda_zero(&expr).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let got = (r.lambda_psl, r.lambda_sl, r.lambda_zero, r.residual);
        let want = (q("101/4"), Some(q("30")), Some(q("30/4")), Some(q("71/4")));
        if got != want {
            return Err(format!("{spec}: got {got:?}"));
        }
        within(elapsed, Duration::from_millis(1), "one evaluation")?;
    }
    Ok(format!("{} coefficient choices give 101/4, 30, 15/2, 71/4", specs.len()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut proved = (0, 0);
    let mut other: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
    let mut findings = Vec::new();
    for spec in sweep_specs(12, 2) {
        let (plus, minus) = count_sl_irreducible(&spec, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let sl = lambda_sl_small_seifert(&spec).map_err(|e| e.to_string())?;
        let agree = QuarterRational::from_int((plus + minus) as i128).unwrap() == sl;
        let evens = spec.cone_orders().iter().filter(|n| *n % 2 == 0).count();
        if evens == 3 {
            proved.0 += agree as u32;
            proved.1 += 1;
            if !agree {
                return Err(format!("{spec}: oracle {} vs closed form {sl}", plus + minus));
            }
        } else {
            let class = ["all odd", "one even", "two even"][evens];
            let entry = other.entry(class).or_default();
            entry.0 += agree as u32;
            entry.1 += 1;
            if !agree {
                findings.push(format!("{spec} oracle {} formula {sl}", plus + minus));
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "sweep")?;
    for f in &findings {
        println!("    finding: {f}");
    }
    let rates: Vec<String> = other.iter().map(|(k, (a, n))| format!("{k} {a}/{n}")).collect();
    Ok(format!("all-even {}/{} agree; other classes: {}", proved.0, proved.1, rates.join(", ")))
}

fn criterion_3() -> Outcome {
    let specs = sweep_specs(20, 3);
    let start = Instant::now();
    for spec in &specs {
        let census = bb_census(spec).map_err(|e| e.to_string())?;
        let psl = lambda_psl_small_seifert(spec).map_err(|e| e.to_string())?;
        if census.lambda_psl_from_census != psl {
            return Err(format!("{spec}: census {} vs {psl}", census.lambda_psl_from_census));
        }
    }
    within(start.elapsed(), Duration::from_secs(1), "composition sweep")?;
    Ok(format!("{} specs", specs.len()))
}

fn criterion_4() -> Outcome {
    let mut coprime = 0;
    for p in 2..=15 {
        for q in 2..=15 {
            for r in 2..=15 {
                if gcd(p, q) != 1 || gcd(p, r) != 1 || gcd(q, r) != 1 {
                    continue;
                }
                let shs = lambda_psl_seifert_hs(&SeifertHSSpec::new(vec![p, q, r]).unwrap()).unwrap();
                for (a, b, c) in sample_coefficients(p, q, r, 2) {
                    let spec = SmallSeifertSpec::new(p, q, r, a, b, c).unwrap();
                    let psl = lambda_psl_small_seifert(&spec).map_err(|e| e.to_string())?;
                    let sl = lambda_sl_small_seifert(&spec).map_err(|e| e.to_string())?;
                    if psl != shs || sl != shs {
                        return Err(format!("{spec}: {psl}, {sl} vs Sigma value {shs}"));
                    }
                    coprime += 1;
                }
            }
        }
    }
    let mut z2 = 0;
    for spec in sweep_specs(20, 3) {
        if spec.homology_order_signed() % 2 != 0 {
            let psl = lambda_psl_small_seifert(&spec).map_err(|e| e.to_string())?;
            let sl = lambda_sl_small_seifert(&spec).map_err(|e| e.to_string())?;
            if psl != sl {
                return Err(format!("{spec}: odd |H1| but {psl} != {sl}"));
            }
            z2 += 1;
        }
    }
    Ok(format!("{coprime} coprime specs reduce; {z2} odd-|H1| specs agree"))
}

fn elements_of_order_dividing_two(g: &AbelianGroup) -> i128 {
    fn go(orders: &[i128]) -> i128 {
        match orders.split_first() {
            None => 1,
            Some((&n, rest)) => (0..n).filter(|x| (2 * x) % n == 0).count() as i128 * go(rest),
        }
    }
    go(g.factors())
}

fn criterion_5() -> Outcome {
    let mut small = 0;
    let specs = sweep_specs(20, 3);
    for spec in &specs {
        let formula = h1_small_seifert(spec).map_err(|e| e.to_string())?;
        let snf = h1_small_seifert_snf(spec).map_err(|e| e.to_string())?;
        if formula != snf {
            return Err(format!("{spec}: {formula} vs {snf}"));
        }
        if formula.order().is_some_and(|n| n <= 200) {
            let h = two_torsion_order(&formula).map_err(|e| e.to_string())?;
            if h != elements_of_order_dividing_two(&formula) {
                return Err(format!("{spec}: two-torsion {h} for {formula}"));
            }
            small += 1;
        }
    }
    Ok(format!("{} specs match SNF; {small} groups of order <= 200 checked", specs.len()))
}

fn criterion_6() -> Outcome {
    let (mut closed, mut all) = (0, 0);
    for p in 2..=12 {
        for q in 2..=12 {
            for r in 2..=12 {
                let n = count_triangle_reducible(p, q, r).map_err(|e| e.to_string())?;
                if n != enumerate_triangle_diagonal_characters(p, q, r) {
                    return Err(format!("({p},{q},{r}): {n} vs enumeration"));
                }
                all += 1;
                if triangle_closed_form_applies(p, q, r).unwrap() {
                    let f = triangle_reducible_closed_form(p, q, r).unwrap();
                    if n != f {
                        return Err(format!("({p},{q},{r}): {n} vs 2 + G/2 = {f}"));
                    }
                    closed += 1;
                }
            }
        }
    }
    Ok(format!("{closed} triples match 2 + gcd(pq,pr,qr)/2; {all} match enumeration"))
}

fn criterion_7() -> Outcome {
    let mut n = 0;
    for xi in 1..=6 {
        for p in (-21i64..=21).filter(|p| p % 2 != 0) {
            for q in (-5i64..=5).filter(|&q| q != 0 && gcd(p, q) == 1) {
                let spec = TwistSurgerySpec::new(xi, p, q).map_err(|e| e.to_string())?;
                let v = lambda_psl_twist(&spec).map_err(|e| e.to_string())?;
                if v.is_negative() || v.to_string().parse::<QuarterRational>().unwrap() != v {
                    return Err(format!("{spec}: {v}"));
                }
                n += 1;
            }
        }
    }
    for p in [5, 7] {
        let v = lambda_psl_twist(&TwistSurgerySpec::new(1, p, 1).unwrap()).unwrap();
        if v != QuarterRational::ZERO {
            return Err(format!("K1 slope {p}/1 gives {v}"));
        }
    }
    Ok(format!("{n} surgeries non-negative; K1 at 5/1 and 7/1 give 0"))
}

fn random_leaf(rng: &mut StdRng) -> ManifoldSpec {
    loop {
        let leaf = match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(2..=4);
                SeifertHSSpec::new((0..k).map(|_| rng.gen_range(2..=13)).collect()).map(ManifoldSpec::SeifertHS).ok()
            }
            1 => {
                let mut v = [0i64; 6];
                for x in &mut v[..3] {
                    *x = rng.gen_range(2..=10);
                }
                for x in &mut v[3..] {
                    *x = rng.gen_range(-9..=9);
                }
                SmallSeifertSpec::new(v[0], v[1], v[2], v[3], v[4], v[5]).map(ManifoldSpec::SmallSeifert).ok()
            }
            _ => TwistSurgerySpec::new(rng.gen_range(1..=6), rng.gen_range(-21..=21), rng.gen_range(-5..=5))
                .map(ManifoldSpec::TwistSurgery)
                .ok(),
        };
        if let Some(leaf) = leaf {
            return leaf;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let leaves: Vec<ManifoldSpec> = (0..n).map(|_| random_leaf(&mut rng)).collect();
        let left = ManifoldExpr::left_fold(leaves.clone());
        let right = ManifoldExpr::right_fold(leaves.clone());
        let mut sum = QuarterRational::ZERO;
        for leaf in &leaves {
            sum = sum.checked_add(lambda_psl_expr(&ManifoldExpr::Leaf(leaf.clone())).unwrap()).unwrap();
        }
        let psl = lambda_psl_expr(&left).map_err(|e| e.to_string())?;
        if psl != sum || lambda_psl_expr(&right).unwrap() != sum {
            return Err(format!("{left}: PSL {psl} vs leaf sum {sum}"));
        }
        let (sl_l, sl_r) = (lambda_sl_expr(&left).unwrap(), lambda_sl_expr(&right).unwrap());
        if sl_l != sl_r {
            return Err(format!("{left}: SL {sl_l} vs {sl_r} for {right}"));
        }
    }
    let e = casson_core::parse_manifold_expr("SHS(2,3,5)#SHS(2,3,7)").unwrap();
    let pair = (lambda_psl_expr(&e).unwrap(), lambda_sl_expr(&e).unwrap());
    if pair != (q("5"), q("5")) {
        return Err(format!("SHS(2,3,5)#SHS(2,3,7) gives {pair:?}"));
    }
    Ok("100 random sums additive and association-independent; (5, 5) for SHS(2,3,5)#SHS(2,3,7)".into())
}

fn casson(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_casson")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("casson {args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn json_cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => String::new(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn criterion_9() -> Outcome {
    let first = casson(&["sweep", "--max", "10", "--format", "csv"])?;
    let second = casson(&["sweep", "--max", "10", "--format", "csv"])?;
    if first != second {
        return Err("repeated CSV sweeps differ".into());
    }
    let json: Vec<serde_json::Value> =
        serde_json::from_slice(&casson(&["sweep", "--max", "10", "--format", "json"])?).map_err(|e| e.to_string())?;
    let mut reader = csv::Reader::from_reader(first.as_slice());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if records.len() != json.len() || records.is_empty() {
        return Err(format!("{} CSV rows vs {} JSON rows", records.len(), json.len()));
    }
    for (record, object) in records.iter().zip(&json) {
        let object = object.as_object().ok_or("JSON row is not an object")?;
        if object.len() != header.len() {
            return Err(format!("JSON row has {} fields, CSV {}", object.len(), header.len()));
        }
        for (name, cell) in header.iter().zip(record.iter()) {
            let value = object.get(name).map(json_cell).ok_or(format!("JSON lacks {name}"))?;
            if value != cell {
                return Err(format!("{name}: CSV {cell:?} vs JSON {value:?}"));
            }
        }
    }
    Ok(format!("{} rows byte-identical across runs and equal field-for-field in JSON", records.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example (4,6,8)", criterion_1),
        ("oracle reproduces SL closed form", criterion_2),
        ("composition identity", criterion_3),
        ("coprime reduction and odd-homology agreement", criterion_4),
        ("homology formula vs SNF", criterion_5),
        ("triangle-group reducible count", criterion_6),
        ("twist-knot property suite", criterion_7),
        ("connected-sum laws", criterion_8),
        ("sweep determinism and formats", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
