//! Acceptance criteria. Prints one pass/fail line per criterion and exits
//! nonzero if any fails. All checks are exact.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use superspin::confmod::{SpinorDiffOp, Weights};
use superspin::invariants::{
    canonical_symbol, check_invariance, check_operator_invariance, dirac_power, predicted_dimension, search_invariants,
    test_lambdas, CanonicalName, Classification, ModuleTag,
};
use superspin::suites::{run_suite, Suite, SuiteConfig};
use superspin::{rat, Signature, SuperPolynomial};

type Outcome = Result<String, String>;

fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).expect("valid signature")
}

/// Runs suites and fails on the first identity that does not hold.
fn suites(list: &[Suite], sigs: &[Signature], samples: usize) -> Outcome {
    let mut identities = 0;
    let mut instances = 0;
    for &s in sigs {
        for &suite in list {
            let cfg = SuiteConfig { sig: s, seed: 0, samples };
            let report = run_suite(suite, &cfg).map_err(|e| format!("{suite} on {s}: {e}"))?;
            for c in &report.checks {
                if let Some((at, residual)) = &c.failure {
                    return Err(format!("{s} {}/{} at {at}: residual {residual}", c.suite, c.identity));
                }
                identities += 1;
                instances += c.instances;
            }
        }
    }
    Ok(format!("{identities} identities, {instances} instances"))
}

fn criterion_1() -> Outcome {
    let mut sigs = Vec::new();
    for n in 1..=6 {
        sigs.push(sig(n, 0));
        if n >= 2 {
            sigs.push(sig(n - 1, 1));
        }
    }
    suites(&[Suite::Star], &sigs, 200)
}

fn criterion_2() -> Outcome {
    let mut sigs = Vec::new();
    for n in 1..=4 {
        sigs.push(sig(n, 0));
        if n >= 2 {
            sigs.push(sig(n - 1, 1));
        }
    }
    suites(&[Suite::Poisson], &sigs, 200)
}

fn criterion_3() -> Outcome {
    suites(&[Suite::Lift, Suite::Comoment], &[sig(2, 0), sig(4, 0), sig(3, 1)], 3)
}

fn criterion_4() -> Outcome {
    suites(&[Suite::SpinRep], &[sig(2, 0), sig(1, 1), sig(4, 0), sig(3, 1), sig(2, 2)], 1)
}

fn criterion_5() -> Outcome {
    suites(&[Suite::Kosmann], &[sig(2, 0), sig(1, 1), sig(4, 0), sig(3, 1)], 1)
}

fn criterion_6() -> Outcome {
    suites(&[Suite::Modules], &[sig(2, 0), sig(1, 1), sig(4, 0), sig(3, 1)], 100)
}

fn criterion_7() -> Outcome {
    suites(&[Suite::GradedPoisson], &[sig(2, 0), sig(1, 1), sig(4, 0), sig(3, 1)], 100)
}

/// Compares every search with the published family list.
fn criterion_8() -> Outcome {
    let mut searches = 0;
    let mut mismatches = Vec::new();
    for s in [sig(2, 0), sig(1, 1), sig(4, 0), sig(3, 1)] {
        let n = s.n();
        let mut bidegrees: Vec<(usize, usize)> =
            (0..=n).flat_map(|kappa| (0..=(7 - kappa) / 2).map(move |k| (k, kappa))).collect();
        // second Dirac power
        bidegrees.push((5, 1));
        for (k, kappa) in bidegrees {
            let natural = rat(k as i64, n as i64);
            let mut cases = Vec::new();
            for tag in [ModuleTag::T, ModuleTag::S] {
                cases.push((tag, Weights::symbol(natural.clone())));
                cases.push((tag, Weights::symbol(&natural + &rat(1, 3))));
            }
            for lambda in test_lambdas(n, k) {
                cases.push((ModuleTag::D, Weights::operator(lambda.clone(), &lambda + &natural)));
            }
            cases.push((ModuleTag::D, Weights::operator(rat(0, 1), &natural + &rat(1, 3))));
            if (k, kappa) == (5, 1) {
                cases.retain(|(tag, _)| *tag == ModuleTag::D);
            }
            for (tag, w) in cases {
                let res = search_invariants(s, k, kappa, tag, &w).map_err(|e| e.to_string())?;
                searches += 1;
                for b in &res.basis {
                    let rep = check_invariance(b, tag, &w, s).map_err(|e| e.to_string())?;
                    if !rep.is_invariant() {
                        return Err(format!("basis element {b} of {s} ({k},{kappa}) {tag} fails re-check"));
                    }
                }
                let want =
                    predicted_dimension(n, k, kappa, tag, &w, Classification::Published).map_err(|e| e.to_string())?;
                if res.dimension() != want {
                    let l = w.lambda.as_ref().map(superspin::coeff::fmt_rational).unwrap_or_default();
                    mismatches.push(format!(
                        "{s} ({k},{kappa}) {tag} lambda={l}: found {} predicted {want}",
                        res.dimension()
                    ));
                }
            }
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{searches} searches match"))
    } else {
        Err(format!(
            "{} of {searches} searches differ from the published list: {}",
            mismatches.len(),
            mismatches.join("; ")
        ))
    }
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    for s in [sig(2, 0), sig(4, 0)] {
        let delta = canonical_symbol(CanonicalName::Delta, s).poly;
        let r = canonical_symbol(CanonicalName::R, s).poly;
        for power in 0..=2usize {
            let d = dirac_power(power, s).map_err(|e| e.to_string())?;
            let symbol = &delta * &r.pow(power as u32);
            let exact = Weights::operator(d.lambda.clone(), d.mu.clone());
            let bump = rat(1, 100);
            let off = Weights::operator(&d.lambda + &bump, &d.mu + &bump);
            let sym_ok = check_invariance(&symbol, ModuleTag::D, &exact, s).map_err(|e| e.to_string())?;
            let op_ok = check_operator_invariance(&d.op, &d.lambda, &d.mu).map_err(|e| e.to_string())?;
            if !sym_ok.is_invariant() || !op_ok.is_invariant() {
                return Err(format!("power {power} on {s} not invariant"));
            }
            let sym_off = check_invariance(&symbol, ModuleTag::D, &off, s).map_err(|e| e.to_string())?;
            let op_off = check_operator_invariance(&d.op, off.lambda.as_ref().unwrap(), off.mu.as_ref().unwrap())
                .map_err(|e| e.to_string())?;
            if sym_off.is_invariant() || op_off.is_invariant() {
                return Err(format!("power {power} on {s} survives perturbed weights"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} operators"))
}

// ---- CLI contract -----------------------------------------------------

fn run(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_superspin"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run binary: {e}"))?;
    let code = out.status.code().ok_or("terminated by signal")?;
    Ok((code, String::from_utf8(out.stdout).map_err(|e| e.to_string())?))
}

fn expect(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn is_uint(v: &Value) -> bool {
    v.as_u64().is_some()
}

fn is_rational_string(v: &Value) -> bool {
    v.as_str().is_some_and(|s| superspin::coeff::parse_rational(s).is_ok())
}

fn check_scalar(v: &Value) -> Result<(), String> {
    for t in v.as_array().ok_or("scalar is not an array")? {
        expect(t["hpow"].as_i64().is_some(), "scalar hpow")?;
        expect(matches!(t["part"].as_str(), Some("1" | "i" | "s" | "is")), "scalar part")?;
        expect(t["num"].as_i64().is_some_and(|x| x != 0), "scalar num")?;
        expect(t["den"].as_i64().is_some_and(|x| x > 0), "scalar den")?;
    }
    Ok(())
}

fn check_poly(v: &Value) -> Result<(), String> {
    let n = v["n"].as_u64().ok_or("poly n")? as usize;
    for t in v["terms"].as_array().ok_or("poly terms")? {
        for key in ["x", "p"] {
            let e = t[key].as_array().ok_or("exponents")?;
            expect(e.len() == n && e.iter().all(is_uint), "exponent vector")?;
        }
        let xi: Vec<u64> = t["xi"].as_array().ok_or("xi")?.iter().filter_map(Value::as_u64).collect();
        expect(xi.windows(2).all(|w| w[0] < w[1]) && xi.iter().all(|&i| i >= 1 && i as usize <= n), "xi set")?;
        check_scalar(&t["coeff"])?;
    }
    SuperPolynomial::from_json(v).map_err(|e| e.to_string())?;
    Ok(())
}

fn check_signature(v: &Value) -> Result<(), String> {
    let a = v.as_array().ok_or("signature")?;
    expect(a.len() == 2 && a.iter().all(is_uint), "signature pair")
}

fn check_report_json(v: &Value, invariant: bool) -> Result<(), String> {
    check_signature(&v["signature"])?;
    check_poly(&v["candidate"])?;
    expect(matches!(v["module"].as_str(), Some("T" | "S" | "D")), "module tag")?;
    expect(is_rational_string(&v["weights"]["delta"]), "delta")?;
    expect(v["invariant"].as_bool() == Some(invariant), "invariant flag")?;
    let res = v["residuals"].as_array().ok_or("residuals")?;
    expect(!res.is_empty(), "residuals nonempty")?;
    for r in res {
        expect(r["generator"].is_string(), "generator name")?;
        check_poly(&r["residual"])?;
    }
    Ok(())
}

fn check_search_json(v: &Value) -> Result<(), String> {
    check_signature(&v["signature"])?;
    let b = v["bidegree"].as_array().ok_or("bidegree")?;
    expect(b.len() == 2 && b.iter().all(is_uint), "bidegree pair")?;
    expect(matches!(v["module"].as_str(), Some("T" | "S" | "D")), "module tag")?;
    let w = v["weights"].as_object().ok_or("weights")?;
    expect(w.values().all(is_rational_string) && w.contains_key("delta"), "weights entries")?;
    let basis = v["basis"].as_array().ok_or("basis")?;
    expect(v["dimension"].as_u64() == Some(basis.len() as u64), "dimension matches basis")?;
    basis.iter().try_for_each(check_poly)
}

fn check_dirac_json(v: &Value) -> Result<(), String> {
    check_signature(&v["signature"])?;
    let (p, q) = (v["signature"][0].as_u64().unwrap() as usize, v["signature"][1].as_u64().unwrap() as usize);
    expect(is_uint(&v["s"]), "s")?;
    expect(is_rational_string(&v["weights"]["lambda"]) && is_rational_string(&v["weights"]["mu"]), "weights")?;
    expect(v["text"].is_string(), "text")?;
    let op = &v["operator"];
    for t in op["terms"].as_array().ok_or("operator terms")? {
        expect(t["cliff"].as_array().is_some_and(|c| c.iter().all(is_uint)), "cliff")?;
        expect(t["dx"].as_array().is_some_and(|c| c.iter().all(is_uint)), "dx")?;
        check_poly(&t["xcoeff"])?;
    }
    SpinorDiffOp::from_json(op, sig(p, q)).map_err(|e| e.to_string())?;
    Ok(())
}

fn check_spin_json(v: &Value) -> Result<(), String> {
    check_signature(&v["signature"])?;
    let size = v["size"].as_u64().ok_or("size")? as usize;
    let mats = v["matrices"].as_array().ok_or("matrices")?;
    for m in mats {
        let rows = m.as_array().ok_or("matrix rows")?;
        expect(rows.len() == size, "row count")?;
        for r in rows {
            let r = r.as_array().ok_or("row")?;
            expect(r.len() == size, "column count")?;
            r.iter().try_for_each(check_scalar)?;
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let golden: [(&[&str], i32); 3] = [
        (&["check", "p1*xi1+p2*xi2", "--module", "S", "--delta", "1/2", "--dim", "2"], 0),
        (&["check", "p1^2+p2^2", "--module", "S", "--delta", "1", "--dim", "2"], 1),
        (&["check", "p1^2+p2^2", "--module", "T", "--delta", "1", "--dim", "2"], 0),
    ];
    for (args, want) in golden {
        let (code, _) = run(args)?;
        expect(code == want, &format!("{} exited {code}, expected {want}", args.join(" ")))?;
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let (code, out) = run(&json_args)?;
        expect(code == want, "json run exit code")?;
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        check_report_json(&v, want == 0)?;
    }
    type Schema = fn(&Value) -> Result<(), String>;
    let emitters: [(&[&str], Schema); 4] = [
        (
            &["search", "--dim", "2", "--bidegree", "1,1", "--module", "S", "--delta", "1/2", "--format", "json"],
            check_search_json,
        ),
        (&["dirac-power", "--s", "1", "--dim", "4", "--format", "json"], check_dirac_json),
        (&["spin-rep", "--dim", "2", "--signature", "1,1", "--format", "json"], check_spin_json),
        (&["parse", "x1*p2 - 1/2*h*xi1*xi2", "--dim", "2", "--format", "json"], check_poly),
    ];
    for (args, schema) in emitters {
        let (code, out) = run(args)?;
        expect(code == 0, &format!("{} exited {code}", args.join(" ")))?;
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        schema(&v).map_err(|e| format!("{}: {e}", args[0]))?;
    }
    let (_, search) = run(emitters[0].0)?;
    let v: Value = serde_json::from_str(&search).map_err(|e| e.to_string())?;
    expect(v["dimension"] == 2, "search dimension 2")?;
    let repeat: [&[&str]; 3] = [
        &["verify", "--suite", "all", "--dim", "2", "--seed", "5", "--format", "json"],
        &[
            "search",
            "--dim",
            "4",
            "--bidegree",
            "1,1",
            "--module",
            "D",
            "--lambda",
            "3/8",
            "--mu",
            "5/8",
            "--format",
            "json",
        ],
        &["dirac-power", "--s", "2", "--dim", "2", "--gamma"],
    ];
    for args in repeat {
        let (code, a) = run(args)?;
        expect(code == 0, &format!("{} exited {code}", args.join(" ")))?;
        let (_, b) = run(args)?;
        expect(a == b, &format!("{} output differs between runs", args.join(" ")))?;
    }
    Ok("exit codes, schemas and repeat runs".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("Clifford relations from the star product", criterion_1, Duration::from_secs(10)),
        ("graded Poisson axioms", criterion_2, Duration::from_secs(30)),
        ("lift and comoment morphisms", criterion_3, Duration::from_secs(60)),
        ("spin representation", criterion_4, Duration::from_secs(30)),
        ("Kosmann correspondence", criterion_5, Duration::from_secs(60)),
        ("module-action coherence", criterion_6, Duration::from_secs(120)),
        ("graded Poisson algebra of operators", criterion_7, Duration::from_secs(60)),
        ("classification reproduction", criterion_8, Duration::from_secs(600)),
        ("Dirac-power invariance", criterion_9, Duration::from_secs(60)),
        ("CLI contract", criterion_10, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}, but took {took:.1?} (budget {budget:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] criterion {}: {name} ({msg}; {took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({took:.2?})\n       {msg}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
