//! torkh: exact Khovanov/Lee homology for links, with closed-formula
//! predictions and a verification harness for torus-link claims.

use std::path::PathBuf;
use std::process::ExitCode;

use torkh_core::cache::Cache;
use torkh_core::engine::{kh_table, kh_table_cube};
use torkh_core::formulas::{
    gr_lee_torus, k_poly, l_poly, lee_rank_torus, s_torus, stair, StairFamily,
};
use torkh_core::jones::{jones_braid, jones_kauffman};
use torkh_core::lee::{filtration_table, s_invariant};
use torkh_core::links::{parse_link, parse_orientation, torus_braid};
use torkh_core::poly::LaurentPoly2;
use torkh_core::ring::RingSpec;
use torkh_core::scan::{scan_complex, ScanOptions, Theory};
use torkh_core::table::BigradedTable;
use torkh_core::verify::{
    verify_filtration, verify_les_additivity, verify_lower_bound, verify_q_relations,
    verify_recursions, VerificationReport, VerifyCtx,
};

const USAGE: &str = "\
torkh — exact Khovanov/Lee homology and torus-link verification

USAGE:
  torkh kh <link> [options]             Khovanov homology table
  torkh lee <link> [rev=..] [options]   Lee (or Bar-Natan) filtration + gr table
  torkh s <link> [rev=..] [options]     s-invariant of the oriented link
  torkh jones <link> [options]          Kauffman-bracket graded Euler characteristic
  torkh predict gr torus:<n>,<m>        predicted associated-graded Lee table
  torkh predict lee-rank torus:<n>,<m>  predicted Lee ranks per h
  torkh predict s torus:<n>,<m> <p> <q> predicted s-invariant
  torkh predict stair <nn|n1n> <n>      staircase bound values
  torkh predict poly <L|K> <n>          conjectural Poincaré polynomial
  torkh verify lower-bound --n N --family <nn|n1n> [options]
  torkh verify les --n N [--m M] [--i I] [options]
  torkh verify recursions --n N [options]
  torkh verify filtration --n N --m M [options]
  torkh verify q-relations [--n-max N]

link grammar:
  braid:<n>:<w1>,<w2>,...   torus:<n>,<m>   dlink:<n>,<m>,<i>   elink:<n>,<m>,<i>
  pd:[[a,b,c,d;s],...]      unknot          unlink:<k>
  orientation subsets: rev=1,3 (1-based component labels)

options:
  --ring {Z,Q,F2,F3,F5,...}   coefficients (default Q)
  --format {json,csv,table}   output format (default table)
  --cache-dir DIR             result cache (or env TORKH_CACHE)
  --max-generators N          scan resource budget
  --naive                     use the full cube of resolutions instead of scanning
  --slow                      lift desk-scale crossing budgets

exit codes: 0 success / all verifications pass; 1 verification failure; 2 usage error.
";

struct Opts {
    ring: RingSpec,
    format: String,
    cache: Cache,
    scan: ScanOptions,
    slow: bool,
    naive: bool,
    positional: Vec<String>,
    named: std::collections::BTreeMap<String, String>,
}

fn parse_args(args: &[String]) -> Result<Opts, String> {
    let mut ring = RingSpec::Q;
    let mut format = "table".to_string();
    let mut cache_dir: Option<PathBuf> = None;
    let mut scan = ScanOptions::default();
    let mut slow = false;
    let mut naive = false;
    let mut positional = Vec::new();
    let mut named = std::collections::BTreeMap::new();
    let mut it = args.iter().peekable();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--ring" => {
                let v = it.next().ok_or("--ring needs a value")?;
                ring = v.parse()?;
            }
            "--format" => {
                let v = it.next().ok_or("--format needs a value")?;
                if !["json", "csv", "table"].contains(&v.as_str()) {
                    return Err(format!("unknown format: {v}"));
                }
                format = v.clone();
            }
            "--cache-dir" => {
                cache_dir = Some(PathBuf::from(it.next().ok_or("--cache-dir needs a value")?));
            }
            "--max-generators" => {
                scan.max_objects = it
                    .next()
                    .ok_or("--max-generators needs a value")?
                    .parse()
                    .map_err(|_| "bad --max-generators value".to_string())?;
            }
            "--slow" => slow = true,
            "--naive" => naive = true,
            _ if a.starts_with("--") => {
                let key = a.trim_start_matches("--").to_string();
                let v = it.next().ok_or_else(|| format!("{a} needs a value"))?;
                named.insert(key, v.clone());
            }
            _ => positional.push(a.clone()),
        }
    }
    Ok(Opts {
        ring,
        format,
        cache: Cache::resolve(cache_dir.as_deref()),
        scan,
        slow,
        naive,
        positional,
        named,
    })
}

fn print_table(t: &BigradedTable, format: &str) {
    match format {
        "json" => println!("{}", t.to_json()),
        "csv" => print!("{}", t.render_csv()),
        _ => print!("{}", t.render_grid()),
    }
}

fn print_poly(p: &LaurentPoly2, format: &str) {
    if format == "json" {
        let terms: Vec<serde_json::Value> = p
            .terms()
            .map(|(&(t, q), c)| serde_json::json!({"t": t, "q": q, "coeff": c.to_string()}))
            .collect();
        println!("{}", serde_json::Value::Array(terms));
    } else {
        println!("{p}");
    }
}

fn named_i64(o: &Opts, key: &str) -> Result<Option<i64>, String> {
    match o.named.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| format!("--{key} needs an integer, got {v}")),
    }
}

fn require_i64(o: &Opts, key: &str) -> Result<i64, String> {
    named_i64(o, key)?.ok_or_else(|| format!("missing required --{key}"))
}

fn split_rev(positional: &[String]) -> Result<(Vec<String>, Vec<usize>), String> {
    let mut rest = Vec::new();
    let mut rev = Vec::new();
    for p in positional {
        if p.starts_with("rev=") {
            rev = parse_orientation(p)?;
        } else {
            rest.push(p.clone());
        }
    }
    Ok((rest, rev))
}

fn cmd_kh(o: &Opts) -> Result<ExitCode, String> {
    let (pos, _) = split_rev(&o.positional)?;
    let link = pos.first().ok_or("kh needs a link spec")?;
    let diag = parse_link(link)?;
    let table = if o.naive {
        kh_table_cube(&diag, o.ring, torkh_core::engine::default_naive_limit())
            .map_err(|e| e.to_string())?
    } else {
        kh_table(&diag, o.ring, &o.scan, &o.cache).map_err(|e| e.to_string())?
    };
    print_table(&table, &o.format);
    Ok(ExitCode::SUCCESS)
}

fn cmd_lee(o: &Opts) -> Result<ExitCode, String> {
    let (pos, rev) = split_rev(&o.positional)?;
    let link = pos.first().ok_or("lee needs a link spec")?;
    let ring = if o.ring == RingSpec::Z { RingSpec::Q } else { o.ring };
    let diag = parse_link(link)?;
    let diag = if rev.is_empty() { diag } else { diag.reverse_components(&rev) };
    let theory = if ring.characteristic() == 2 { Theory::BarNatan } else { Theory::Lee };
    let ft = torkh_core::with_ring!(ring, R, {
        let cx = scan_complex::<R>(&diag, theory, &[], &o.scan)
            .map_err(|e| e.to_string())?
            .complex;
        filtration_table(&cx)
    });
    let mut gr = ft.gr_dimensions();
    gr.ring = ring;
    if o.format == "json" {
        let out = serde_json::json!({
            "ring": ring.name(),
            "theory": if theory == Theory::BarNatan { "barnatan" } else { "lee" },
            "filtration": serde_json::from_str::<serde_json::Value>(&ft.to_json()).unwrap(),
            "groups": serde_json::from_str::<serde_json::Value>(&gr.to_json()).unwrap()["groups"],
        });
        println!("{out}");
    } else {
        println!("filtration levels (per h): dim F_q");
        for (h, levels) in &ft.rows {
            let s: Vec<String> = levels.iter().map(|(q, d)| format!("F_{q}={d}")).collect();
            println!("  h={h}: {}", s.join(", "));
        }
        println!("associated graded dimensions:");
        print_table(&gr, &o.format);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_s(o: &Opts) -> Result<ExitCode, String> {
    let (pos, rev) = split_rev(&o.positional)?;
    let link = pos.first().ok_or("s needs a link spec")?;
    let ring = if o.ring == RingSpec::Z { RingSpec::Q } else { o.ring };
    let diag = parse_link(link)?;
    let s = s_invariant(&diag, &rev, ring, &o.scan)?;
    if o.format == "json" {
        let rev1: Vec<usize> = rev.iter().map(|r| r + 1).collect();
        println!(
            "{}",
            serde_json::json!({"s": s, "orientation": rev1, "field": ring.name()})
        );
    } else {
        println!("{s}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_jones(o: &Opts) -> Result<ExitCode, String> {
    let (pos, _) = split_rev(&o.positional)?;
    let link = pos.first().ok_or("jones needs a link spec")?;
    // torus specs take the Temperley-Lieb route, which has no crossing cap
    let poly = if let Some((n, m)) = link.strip_prefix("torus:").and_then(|r| {
        let v: Vec<i64> = r.split(',').filter_map(|t| t.parse().ok()).collect();
        (v.len() == 2).then(|| (v[0], v[1]))
    }) {
        jones_braid(&torus_braid(n, m)?)
    } else {
        let diag = parse_link(link)?;
        jones_kauffman(&diag).map_err(|e| e.to_string())?
    };
    print_poly(&poly, &o.format);
    Ok(ExitCode::SUCCESS)
}

fn parse_torus_spec(spec: &str) -> Result<(i64, i64), String> {
    let rest = spec.strip_prefix("torus:").ok_or("expected torus:<n>,<m>")?;
    let v: Vec<i64> = rest
        .split(',')
        .map(|t| t.parse().map_err(|_| format!("bad integer {t}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 2 {
        return Err("expected torus:<n>,<m>".into());
    }
    Ok((v[0], v[1]))
}

fn cmd_predict(o: &Opts) -> Result<ExitCode, String> {
    let (pos, _) = split_rev(&o.positional)?;
    let what = pos.first().ok_or("predict needs a target (gr, lee-rank, s, stair, poly)")?;
    match what.as_str() {
        "gr" => {
            let spec = pos.get(1).ok_or("predict gr needs torus:<n>,<m>")?;
            let (n, m) = parse_torus_spec(spec)?;
            print_table(&gr_lee_torus(n, m), &o.format);
        }
        "lee-rank" => {
            let spec = pos.get(1).ok_or("predict lee-rank needs torus:<n>,<m>")?;
            let (n, m) = parse_torus_spec(spec)?;
            let ranks = lee_rank_torus(n, m);
            if o.format == "json" {
                let rows: Vec<serde_json::Value> = ranks
                    .iter()
                    .map(|(h, r)| serde_json::json!({"h": h, "rank": r.to_string()}))
                    .collect();
                println!("{}", serde_json::Value::Array(rows));
            } else {
                for (h, r) in &ranks {
                    println!("h={h}: {r}");
                }
            }
        }
        "s" => {
            let spec = pos.get(1).ok_or("predict s needs torus:<n>,<m> <p> <q>")?;
            let (n, m) = parse_torus_spec(spec)?;
            let p: i64 = pos.get(2).ok_or("missing p")?.parse().map_err(|_| "bad p")?;
            let q: i64 = pos.get(3).ok_or("missing q")?.parse().map_err(|_| "bad q")?;
            println!("{}", s_torus(n, m, p, q)?);
        }
        "stair" => {
            let fam = match pos.get(1).map(|s| s.as_str()) {
                Some("nn") => StairFamily::Nn,
                Some("n1n") => StairFamily::N1n,
                _ => return Err("predict stair needs <nn|n1n> <n>".into()),
            };
            let n: i64 = pos.get(2).ok_or("missing n")?.parse().map_err(|_| "bad n")?;
            let hm = torkh_core::formulas::h_max(n, fam);
            for h in 0..=hm {
                println!("h={h}: {}", stair(n, fam, h).map_or("inf".into(), |v| v.to_string()));
            }
        }
        "poly" => {
            let which = pos.get(1).map(|s| s.as_str());
            let n: i64 = pos.get(2).ok_or("missing n")?.parse().map_err(|_| "bad n")?;
            let p = match which {
                Some("L") => l_poly(n),
                Some("K") => k_poly(n),
                _ => return Err("predict poly needs <L|K> <n>".into()),
            };
            print_poly(&p, &o.format);
        }
        other => return Err(format!("unknown predict target: {other}")),
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_reports(reports: &[VerificationReport], format: &str) -> ExitCode {
    let all_pass = reports.iter().all(|r| r.passed());
    if format == "json" {
        let arr: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
        println!("{}", serde_json::Value::Array(arr));
    } else {
        for r in reports {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut line = format!("[{}] {} {}", r.status.as_str(), r.claim, params.join(" "));
            if let Some(w) = &r.witness {
                line.push_str(&format!(
                    "  witness: (h={}, q={}) expected {} got {}",
                    w.h, w.q, w.expected, w.got
                ));
            }
            if let Some(d) = &r.detail {
                line.push_str(&format!("  [{d}]"));
            }
            println!("{line} ({} ms)", r.elapsed_ms);
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_verify(o: &Opts) -> Result<ExitCode, String> {
    let ctx = VerifyCtx { opts: o.scan.clone(), cache: o.cache.clone(), slow: o.slow };
    let (pos, _) = split_rev(&o.positional)?;
    let claim = pos.first().ok_or("verify needs a claim")?;
    let reports: Vec<VerificationReport> = match claim.as_str() {
        "lower-bound" => {
            let n = require_i64(o, "n")?;
            let fam = match o.named.get("family").map(|s| s.as_str()) {
                Some("nn") | None => StairFamily::Nn,
                Some("n1n") => StairFamily::N1n,
                Some(other) => return Err(format!("unknown family: {other}")),
            };
            vec![verify_lower_bound(n, fam, o.ring, &ctx)]
        }
        "les" => {
            let n = require_i64(o, "n")?;
            let m = named_i64(o, "m")?.unwrap_or(n - 1);
            match named_i64(o, "i")? {
                Some(i) => vec![verify_les_additivity(n, m, i, o.ring, &ctx)],
                None => (1..=n - 1)
                    .map(|i| verify_les_additivity(n, m, i, o.ring, &ctx))
                    .collect(),
            }
        }
        "recursions" => {
            let n = require_i64(o, "n")?;
            vec![verify_recursions(n, &ctx)]
        }
        "filtration" => {
            let n = require_i64(o, "n")?;
            let m = require_i64(o, "m")?;
            vec![verify_filtration(n, m, &ctx)]
        }
        "q-relations" => {
            let n_max = named_i64(o, "n-max")?.unwrap_or(200);
            vec![verify_q_relations(n_max)]
        }
        other => return Err(format!("unknown claim: {other}")),
    };
    Ok(emit_reports(&reports, &o.format))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = args.first() else {
        eprint!("{USAGE}");
        return ExitCode::from(2);
    };
    let rest = &args[1..];
    let opts = match parse_args(rest) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}\n");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    let result = match cmd.as_str() {
        "kh" => cmd_kh(&opts),
        "lee" => cmd_lee(&opts),
        "s" => cmd_s(&opts),
        "jones" => cmd_jones(&opts),
        "predict" => cmd_predict(&opts),
        "verify" => cmd_verify(&opts),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        other => Err(format!("unknown command: {other}")),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}\n");
            eprint!("{USAGE}");
            ExitCode::from(2)
        }
    }
}
