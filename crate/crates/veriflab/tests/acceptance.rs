//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any line fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pgv_core::cohomology::{cohomology, enumerate_derivations, enumerate_two_cocycles, h1_dim};
use pgv_core::extensions::{build_extension, transfer_maps, TransferPair};
use pgv_core::fp_linalg::FpSubspace;
use pgv_core::gmodule::{embed_into_free, sample_ng_module, AnnSide, FreeBimodule, GModule};
use pgv_core::group::{GroupTable, PcPresentation};
use pgv_core::noninner::{brute_force_order_p_noninner, engine_sweep, verify_certificate, BruteForce};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veriflab::catalog::{Catalog, Filter};
use veriflab::{run_suite, Status, SuiteConfig};

struct Line {
    ok: bool,
    summary: String,
}

fn line(ok: bool, summary: impl Into<String>) -> Line {
    Line { ok, summary: summary.into() }
}

fn groups(filter: &str) -> Vec<(String, Arc<GroupTable>)> {
    let f = Filter::parse(filter).expect("filter parses");
    Catalog::builtin().select(&f).into_iter().map(|e| (e.name.clone(), e.group.clone())).collect()
}

fn existence_sweep() -> Line {
    let mut worst = (String::new(), Duration::ZERO);
    let mut failures = Vec::new();
    let start = Instant::now();
    let selected = groups("nonabelian & order<=64 | nonabelian & order=81");
    for (name, g) in &selected {
        let t = Instant::now();
        let ok = match engine_sweep(g) {
            Ok(Some(cert)) => verify_certificate(g, &cert).map(|v| v.ok).unwrap_or(false),
            _ => false,
        };
        let dt = t.elapsed();
        if dt > worst.1 {
            worst = (name.clone(), dt);
        }
        if !ok || dt > Duration::from_secs(5) {
            failures.push(name.clone());
        }
    }
    let total = start.elapsed();
    let ok = failures.is_empty() && !selected.is_empty() && total <= Duration::from_secs(600);
    line(
        ok,
        format!(
            "{} groups, total {:.1}s, slowest {} {:.2}s, failures {:?}",
            selected.len(),
            total.as_secs_f64(),
            worst.0,
            worst.1.as_secs_f64(),
            failures
        ),
    )
}

fn oracle_agreement() -> Line {
    let mut disagree = Vec::new();
    let selected = groups("nonabelian & order<=16");
    for (name, g) in &selected {
        let swept = matches!(engine_sweep(g), Ok(Some(_)));
        let brute = match brute_force_order_p_noninner(g) {
            BruteForce::Found(_) => Some(true),
            BruteForce::Absent => Some(false),
            BruteForce::Unsupported => None,
        };
        if brute != Some(swept) {
            disagree.push(name.clone());
        }
    }
    line(disagree.is_empty(), format!("{} groups, disagreements {:?}", selected.len(), disagree))
}

fn cyclic(p: u32) -> Arc<GroupTable> {
    Arc::new(PcPresentation::parse_relations(p, 1, &[], &[]).unwrap().build().unwrap())
}

fn worked_example() -> Line {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [2u32, 3, 5] {
        let g = cyclic(p);
        let reg = GModule::regular(g.clone());
        let rad = reg.restrict(&reg.radical()).unwrap();
        let h1_base = h1_dim(&rad).unwrap();
        let trivial = GModule::trivial(g.clone(), 1);
        let h2 = cohomology(&trivial, 2).unwrap();
        let class = h2.h_cocycles();
        let (cyclic_ext, h1_ext) = match class.first() {
            Some(f) if h2.h_dim() == 1 => {
                let ext = build_extension(&trivial, f).unwrap();
                let e = &ext.total;
                let is_cyclic = e.order() == (p * p) as usize && e.elements().any(|x| e.elem_order(x) == e.order());
                (is_cyclic, h1_dim(&ext.inflate_module(&rad)).unwrap())
            }
            _ => (false, usize::MAX),
        };
        ok &= h1_base == 1 && cyclic_ext && h1_ext == 1;
        notes.push(format!("p={p}: h1={h1_base} cyclic={cyclic_ext} h1_ext={h1_ext}"));
    }
    line(ok, notes.join("; "))
}

/// Modules on `g` small enough to enumerate every function `G → M`.
fn enumerable_modules(g: &Arc<GroupTable>) -> Vec<(String, GModule)> {
    let p = g.p() as f64;
    let fits = |dim: usize| (g.order() * dim) as f64 * p.log2() <= 20.0 + 1e-9;
    let mut out = Vec::new();
    if !fits(1) {
        return out;
    }
    let mut d = 1;
    while fits(d) {
        out.push((format!("trivial:{d}"), GModule::trivial(g.clone(), d)));
        d += 1;
    }
    let reg = GModule::regular(g.clone());
    let mut layer = FpSubspace::full(g.p(), g.order());
    let mut depth = 0;
    while layer.dim() > 0 {
        let sub = reg.restrict(&layer).unwrap();
        if fits(sub.dim()) {
            out.push((format!("radical^{depth}"), sub.clone()));
            out.push((format!("radical^{depth} dual"), sub.dual()));
        }
        if depth > 0 && fits(g.order() - layer.dim()) {
            out.push((format!("regular/radical^{depth}"), reg.quotient(&layer).unwrap()));
        }
        let inner = sub.radical();
        let vecs: Vec<Vec<u32>> = inner.basis_vecs().iter().map(|c| layer.combine(c)).collect();
        layer = FpSubspace::from_spanning(g.p(), g.order(), &vecs);
        depth += 1;
    }
    out
}

fn solver_vs_enumeration() -> Line {
    let mut pairs = 0;
    let mut failures = Vec::new();
    for (name, g) in groups("all") {
        for (label, m) in enumerable_modules(&g) {
            let space = cohomology(&m, 1).unwrap();
            let Some(found) = enumerate_derivations(&m, 1 << 20) else {
                failures.push(format!("{name}/{label}: enumeration refused"));
                continue;
            };
            let count_ok = found.len() as u64 == (g.p() as u64).pow(space.z_dim() as u32);
            let members_ok = found.iter().all(|v| space.z.contains_vec(v));
            let distinct = found.iter().collect::<BTreeSet<_>>().len() == found.len();
            if !(count_ok && members_ok && distinct) {
                failures.push(format!("{name}/{label}"));
            }
            pairs += 1;
        }
    }
    let (h2_all, h2_normalized, h2_solver) = h2_of_c2();
    let ok = failures.is_empty() && pairs > 0 && h2_all == 1 && h2_normalized == 1 && h2_solver == 1;
    line(
        ok,
        format!(
            "{pairs} (G, M) pairs, failures {failures:?}; H2(C2, F2) by all 16 cochains = {h2_all}, by normalized cochains = {h2_normalized}, solver = {h2_solver}"
        ),
    )
}

/// `dim H²(C₂, F₂)` over all 16 cochains with their coboundaries, over
/// normalized cochains, and from the solver.
fn h2_of_c2() -> (u32, u32, usize) {
    let g = cyclic(2);
    let m = GModule::trivial(g.clone(), 1);
    let f = |code: u32, x: u32, y: u32| (code >> (2 * x + y)) & 1;
    let cocycles: Vec<u32> = (0..16u32)
        .filter(|&c| {
            g.elements().all(|x| {
                g.elements().all(|y| {
                    g.elements().all(|z| (f(c, y, z) + f(c, g.mul(x, y), z) + f(c, x, g.mul(y, z)) + f(c, x, y)) % 2 == 0)
                })
            })
        })
        .collect();
    let coboundaries: BTreeSet<u32> = (0..4u32)
        .map(|s| {
            let s = |x: u32| (s >> x) & 1;
            let mut code = 0;
            for x in g.elements() {
                for y in g.elements() {
                    code |= ((s(y) + s(g.mul(x, y)) + s(x)) % 2) << (2 * x + y);
                }
            }
            code
        })
        .collect();
    let h2_all = (cocycles.len() / coboundaries.len()).trailing_zeros();
    // With s(1) = 0 the only coboundary is δs(g, g) = 2·s(g) = 0.
    let normalized = enumerate_two_cocycles(&m, 1 << 20).expect("two normalized cochains").len();
    (h2_all, (normalized as u32).trailing_zeros(), cohomology(&m, 2).unwrap().h_dim())
}

fn duality_suite() -> Line {
    let mut tried = 0;
    let mut failures = Vec::new();
    for (name, g) in groups("order<=16 & p2 | order<=16 & p3") {
        for n in [1usize, 2] {
            let free = FreeBimodule::new(g.clone(), n);
            let right = free.right_module();
            for seed in 0..4u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 97 * n as u64);
                let k = rng.gen_range(1..=n + 1);
                let gens: Vec<Vec<u32>> =
                    (0..k).map(|_| (0..free.dim()).map(|_| rng.gen_range(0..g.p())).collect()).collect();
                let q = right.submodule_generated(&gens);
                let l = free.annihilator(&q, AnnSide::LeftOfRight).unwrap();
                let back = free.annihilator(&l, AnnSide::RightOfLeft).unwrap();
                if back != q || l.dim() + q.dim() != free.dim() {
                    failures.push(format!("{name} n={n} seed={seed}"));
                }
                tried += 1;
            }
        }
    }
    line(failures.is_empty() && tried >= 100, format!("{tried} submodules, failures {failures:?}"))
}

fn freeness() -> Line {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, g) in groups("order<=27") {
        for n in [1usize, 2] {
            for seed in 0..6u64 {
                let s = sample_ng_module(&g, n, seed).unwrap();
                let mut candidates = vec![s.module.clone()];
                if let Some(v) = s.module.radical().basis_vecs().first() {
                    let sub = s.module.submodule_generated(std::slice::from_ref(v));
                    candidates.push(s.module.quotient(&sub).unwrap());
                }
                for a in candidates {
                    if h1_dim(&a).unwrap() != 0 {
                        continue;
                    }
                    checked += 1;
                    let (free, hom) = embed_into_free(&a).unwrap();
                    let target = free.right_module();
                    let iso = hom.matrix.inverse().is_some_and(|inv| {
                        g.elements().all(|x| inv.mul(a.act(x)).mul(&hom.matrix) == *target.act(x))
                    });
                    if !iso {
                        failures.push(format!("{name} n={n} seed={seed}"));
                    }
                }
            }
        }
    }
    line(failures.is_empty() && checked > 0, format!("{checked} modules with H1 = 0, failures {failures:?}"))
}

fn transfer_checks(tp: &TransferPair) -> Result<(), String> {
    let p = tp.ext.base.p();
    if !tp.up.mul(&tp.down).is_zero() {
        return Err("down after up is nonzero".into());
    }
    if tp.down.mul(&tp.up) != tp.free().right_mul_matrix(tp.norm_element()) {
        return Err("up after down differs from the norm product".into());
    }
    let i1 = tp.filtration(1).map_err(|e| e.to_string())?;
    if tp.kernel_of_down() != i1 {
        return Err("ker(down) differs from the first filtration layer".into());
    }
    let top = 2 * (p - 1);
    let mut dims = Vec::new();
    for m in 0..=top + 1 {
        dims.push(tp.filtration(m).map_err(|e| e.to_string())?.dim());
    }
    let go = tp.ext.base.order();
    for i in 0..=top as usize {
        let want = (i + 1).min(2 * p as usize - 1 - i) * tp.n * go;
        if dims[i] - dims[i + 1] != want {
            return Err(format!("layer {i} has dimension {} instead of {want}", dims[i] - dims[i + 1]));
        }
    }
    Ok(())
}

fn transfer_suite() -> Line {
    let mut runs = 0;
    let mut failures = Vec::new();
    for (name, g) in groups("p2 & order<=8 | p3 & order<=9") {
        let kernel = GModule::trivial(g.clone(), 2);
        let space = cohomology(&kernel, 2).unwrap();
        let mut cocycles = vec![space.z_cocycles().into_iter().next().map(|mut f| {
            f.table.iter_mut().for_each(|x| *x = 0);
            f
        })];
        cocycles.extend(space.h_cocycles().into_iter().map(Some));
        for (k, f) in cocycles.into_iter().flatten().enumerate() {
            let ext = build_extension(&kernel, &f).unwrap();
            for n in [1usize, 2] {
                runs += 1;
                if let Err(e) = transfer_checks(&transfer_maps(&ext, n)) {
                    failures.push(format!("{name} cocycle {k} n={n}: {e}"));
                }
            }
        }
    }
    line(failures.is_empty() && runs > 0, format!("{runs} extensions with t = 2, failures {failures:?}"))
}

const GROWTH_CHECKS: [&str; 6] = [
    "extension_h1_growth",
    "extension_h1_upper",
    "extension_h1_growth_rank_t",
    "extension_h1_growth_rank2",
    "exact_module_growth",
    "annihilator_generators_lower",
];

fn growth_suite() -> Line {
    let mut cfg = SuiteConfig::new(Filter::parse("order<=16").unwrap(), 0);
    cfg.checks = GROWTH_CHECKS.iter().map(|s| s.to_string()).collect();
    let report = run_suite(Catalog::builtin(), &cfg).unwrap();
    let pass = report.count(Status::Pass);
    let ce = report.count(Status::Counterexample);
    let unsupported = report.count(Status::Unsupported);
    let reverified = report.entries.iter().filter(|e| e.reverified == Some(true)).count();
    let ok = pass + ce >= 50 && unsupported == 0 && reverified == ce && report.unreproduced().is_empty();
    line(
        ok,
        format!(
            "{} hypothesis-satisfying instances: PASS {pass}, COUNTEREXAMPLE {ce} ({reverified} re-verified), UNSUPPORTED {unsupported}",
            pass + ce
        ),
    )
}

fn pgv(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_pgv")).args(args).output().expect("pgv runs");
    assert!(out.status.success(), "pgv {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Line {
    let dir = std::env::temp_dir().join(format!("pgv-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let mut differing = Vec::new();
    let mut compare = |label: &str, files: [String; 2], argv: &dyn Fn(&str) -> Vec<String>| {
        let mut outputs = Vec::new();
        for f in &files {
            let args = argv(f);
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let stdout = pgv(&refs);
            let file = std::fs::read(f).unwrap_or_default();
            outputs.push((stdout, file));
        }
        if outputs[0] != outputs[1] {
            differing.push(label.to_string());
        }
    };
    for g in ["D16", "Heis27", "Q8xC2xC2"] {
        compare(&format!("find-noninner {g}"), [path(&format!("{g}-a.json")), path(&format!("{g}-b.json"))], &|f| {
            ["find-noninner", "--group", g, "--out", f].map(String::from).to_vec()
        });
    }
    compare("check", [path("r-a.json"), path("r-b.json")], &|f| {
        ["--seed", "11", "check", "--id", "annihilator_duality,extension_h1_upper", "--catalog", "order<=8", "--out", f]
            .map(String::from)
            .to_vec()
    });
    compare("extend", [path("unused-a"), path("unused-b")], &|_| {
        ["--seed", "5", "extend", "--group", "C2xC2", "--kernel", "2"].map(String::from).to_vec()
    });
    compare("h1", [path("unused-c"), path("unused-d")], &|_| {
        ["h1", "--group", "D8", "--normal", "center", "--module", "omega1-center"].map(String::from).to_vec()
    });
    let _ = std::fs::remove_dir_all(&dir);
    line(differing.is_empty(), format!("6 commands run twice, differing {differing:?}"))
}

type Criterion = (&'static str, fn() -> Line);

fn main() {
    let criteria: [Criterion; 9] = [
        ("existence sweep", existence_sweep),
        ("brute-force oracle agreement", oracle_agreement),
        ("cyclic worked example", worked_example),
        ("cohomology solver vs enumeration", solver_vs_enumeration),
        ("annihilator duality", duality_suite),
        ("freeness of H1-trivial modules", freeness),
        ("transfer maps and filtration", transfer_suite),
        ("growth-law audit", growth_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let l = run();
        let tag = if l.ok { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {} ({:.1}s)", k + 1, l.summary, t.elapsed().as_secs_f64());
        failed += usize::from(!l.ok);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
