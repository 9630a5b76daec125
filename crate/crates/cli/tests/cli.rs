use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rrfuse::config::KEYS;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn rrfuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrfuse"))
        .args(args)
        .output()
        .expect("spawn rrfuse")
}

fn ok(args: &[&str]) -> String {
    let out = rrfuse(args);
    assert!(
        out.status.success(),
        "rrfuse {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn s(p: PathBuf) -> String {
    p.to_str().unwrap().to_string()
}

/// Indexes the BM25 fixture and returns the index path.
fn fixture_index(dir: &TempDir) -> String {
    let idx = path(dir, "fixture.idx");
    ok(&[
        "index",
        "--corpus",
        &s(fixture("bm25_corpus.jsonl")),
        "-o",
        &idx,
    ]);
    idx
}

#[test]
fn index_prints_statistics() {
    let dir = TempDir::new().unwrap();
    let synth = path(&dir, "synth");
    ok(&["synth", "--docs", "10", "--queries", "5", "-o", &synth]);
    let out = ok(&[
        "index",
        "--corpus",
        &format!("{synth}/corpus.jsonl"),
        "-o",
        &path(&dir, "i"),
    ]);
    assert!(out.starts_with("documents\t10\n"), "{out}");
    assert!(out.contains("vocabulary\t") && out.contains("avgdl\t"));
}

#[test]
fn empty_corpus_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let corpus = path(&dir, "empty.jsonl");
    fs::write(&corpus, "").unwrap();
    let out = rrfuse(&["index", "--corpus", &corpus, "-o", &path(&dir, "i")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero documents"));
}

#[test]
fn bm25_search_matches_golden_run() {
    let dir = TempDir::new().unwrap();
    let idx = fixture_index(&dir);
    let run = ok(&[
        "search",
        "--mode",
        "bm25",
        "--index",
        &idx,
        "--queries",
        &s(fixture("bm25_queries.tsv")),
    ]);
    assert_eq!(
        run,
        fs::read_to_string(fixture("bm25_golden.trec")).unwrap()
    );
}

#[test]
fn reloaded_index_matches_in_memory_search() {
    use rrfuse::config::PipelineConfig;
    use rrfuse::corpus::{read_corpus, read_queries};
    use rrfuse::lexical::build_index;
    use rrfuse::pipeline::lexical_run;
    use rrfuse::trec::write_run;

    let dir = TempDir::new().unwrap();
    let synth = path(&dir, "synth");
    ok(&[
        "synth",
        "--seed",
        "9",
        "--docs",
        "150",
        "--queries",
        "15",
        "-o",
        &synth,
    ]);
    let corpus = format!("{synth}/corpus.jsonl");
    let queries = format!("{synth}/queries.tsv");
    let idx = path(&dir, "i");
    ok(&["index", "--corpus", &corpus, "-o", &idx]);

    let cfg = PipelineConfig::default();
    let analyzer = cfg.analyzer().unwrap();
    let docs: Vec<_> = read_corpus(&corpus)
        .unwrap()
        .collect::<Result<_, _>>()
        .unwrap();
    let index = build_index(&docs, &analyzer, cfg.index_options()).unwrap();
    let qs = read_queries(&queries).unwrap();
    for mode in ["bm25", "bm25+rm3"] {
        let from_disk = ok(&[
            "search",
            "--mode",
            mode,
            "--index",
            &idx,
            "--queries",
            &queries,
        ]);
        let run = lexical_run(&index, &analyzer, &qs, &cfg, mode.parse().unwrap()).unwrap();
        let mut in_memory = Vec::new();
        write_run(&run, &mut in_memory).unwrap();
        assert_eq!(from_disk.as_bytes(), in_memory.as_slice(), "{mode}");
    }
}

#[test]
fn disabled_bo1_is_byte_identical_to_bm25() {
    let dir = TempDir::new().unwrap();
    let idx = fixture_index(&dir);
    let q = s(fixture("bm25_queries.tsv"));
    let plain = ok(&["search", "--mode", "bm25", "--index", &idx, "--queries", &q]);
    let bo1 = ok(&[
        "search",
        "--mode",
        "bm25+bo1",
        "--index",
        &idx,
        "--queries",
        &q,
        "--set",
        "fb_terms=0",
    ]);
    // only the tag column may differ
    assert_eq!(plain, bo1.replace(" bm25+bo1\n", " bm25\n"));
    let cfg = path(&dir, "cfg");
    fs::write(&cfg, "fb_terms = 0\n").unwrap();
    let bo1_file = ok(&[
        "search",
        "--mode",
        "bm25+bo1",
        "--index",
        &idx,
        "--queries",
        &q,
        "--config",
        &cfg,
    ]);
    assert_eq!(bo1, bo1_file);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let idx = fixture_index(&dir);
    let q = s(fixture("bm25_queries.tsv"));
    let out = rrfuse(&["search", "--mode", "bm42", "--index", &idx, "--queries", &q]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bm42"));
    let out = rrfuse(&["search", "--mode", "dense", "--queries", &q]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--vectors"));
    let out = rrfuse(&[
        "search",
        "--mode",
        "bm25",
        "--index",
        &idx,
        "--queries",
        &q,
        "--set",
        "nope=1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rrfuse(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rrfuse(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_lists_every_configuration_key() {
    let help = ok(&["search", "--help"]);
    for (key, _) in KEYS {
        assert!(help.contains(key), "missing {key}");
    }
}

#[test]
fn fuse_matches_golden_and_self_fusion_keeps_order() {
    let runs: Vec<String> = ["run_a.trec", "run_b.trec", "run_c.trec"]
        .iter()
        .map(|f| s(fixture(f)))
        .collect();
    let fused = ok(&["fuse", &runs[0], &runs[1], &runs[2]]);
    assert_eq!(
        fused,
        fs::read_to_string(fixture("rrf_golden.trec")).unwrap()
    );

    let order = |text: &str| -> Vec<(String, String)> {
        text.lines()
            .map(|l| {
                let f: Vec<&str> = l.split(' ').collect();
                (f[0].to_string(), f[2].to_string())
            })
            .collect()
    };
    let itself = ok(&["fuse", &runs[0], &runs[0]]);
    assert_eq!(
        order(&itself),
        order(&fs::read_to_string(&runs[0]).unwrap())
    );
    assert!(itself.ends_with("RRF(sysA,sysA)\n"));

    let out = rrfuse(&["fuse", &runs[1]]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let single = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        single.lines().next().unwrap(),
        format!("1 Q0 c 1 {:.6} RRF(sysB)", 1.0 / 61.0)
    );
}

#[test]
fn malformed_run_reports_line_number() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.trec");
    fs::write(&bad, "1 Q0 a 1 2.0 t\n1 Q0 b two 1.0 t\n").unwrap();
    let out = rrfuse(&["fuse", &bad, &s(fixture("run_a.trec"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
}

#[test]
fn eval_reports_recall_and_map() {
    let dir = TempDir::new().unwrap();
    let run = path(&dir, "run");
    let qrels = path(&dir, "qrels");
    // relevant docs at ranks 1 and 4 of two: AP = (1 + 2/4) / 2 = 0.75; perfect recall
    fs::write(
        &run,
        "q Q0 a 1 4.0 t\nq Q0 b 2 3.0 t\nq Q0 c 3 2.0 t\nq Q0 d 4 1.0 t\n",
    )
    .unwrap();
    fs::write(&qrels, "q 0 a 1\nq 0 d 1\nz 0 a 0\n").unwrap();
    let per_query = path(&dir, "pq.tsv");
    let out = ok(&[
        "eval",
        "--run",
        &run,
        "--qrels",
        &qrels,
        "--per-query",
        &per_query,
    ]);
    assert_eq!(
        out,
        "queries_evaluated\t1\nqueries_skipped\t1\nrecall@1000\t1.0000\nmap@1000\t0.7500\n"
    );
    assert_eq!(
        fs::read_to_string(&per_query).unwrap(),
        "query_id\trecall@1000\tmap@1000\nq\t1.000000\t0.750000\n"
    );

    // single relevant document at rank 2: AP 0.5
    fs::write(&qrels, "q 0 b 1\n").unwrap();
    let out = ok(&["eval", "--run", &run, "--qrels", &qrels]);
    assert!(out.contains("map@1000\t0.5000"), "{out}");

    fs::write(&qrels, "other 0 b 1\n").unwrap();
    assert_eq!(
        rrfuse(&["eval", "--run", &run, "--qrels", &qrels])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyses_produce_tsv() {
    let a = s(fixture("run_a.trec"));
    let b = s(fixture("run_b.trec"));
    let qrels = s(fixture("fixture_qrels.txt"));

    let overlap = ok(&["analyze", "overlap", &a, &a, "--qrels", &qrels]);
    let populated: Vec<&str> = overlap
        .lines()
        .skip(1)
        .filter(|l| !l.ends_with("\t0"))
        .collect();
    assert_eq!(populated, vec!["sysA&sysA\t1"]);

    let sweep = ok(&[
        "analyze",
        "alpha-sweep",
        &a,
        &b,
        "--qrels",
        &qrels,
        "--grid",
        "0.5",
    ]);
    assert_eq!(sweep.lines().count(), 2, "{sweep}");

    let oracle = ok(&[
        "analyze",
        "oracle",
        &a,
        &b,
        &s(fixture("run_c.trec")),
        "--qrels",
        &qrels,
        "--set",
        "metric_depth=3",
    ]);
    assert_eq!(
        oracle,
        "query_id\toracle_recall@3\n1\t0.666667\n2\t1.000000\n"
    );

    let ttest = ok(&["analyze", "ttest", &a, &b, "--qrels", &qrels]);
    assert!(ttest.starts_with("metric\tn\t"));

    let dir = TempDir::new().unwrap();
    let queries = path(&dir, "q.tsv");
    fs::write(&queries, "1\talpha beta gamma\n2\tdelta\n3\tepsilon\n").unwrap();
    let bins = ok(&[
        "analyze",
        "bins",
        &a,
        &b,
        "--queries",
        &queries,
        "--qrels",
        &qrels,
    ]);
    assert_eq!(bins.lines().next().unwrap(), "bin\tqueries\tsysA\tsysB");
    assert_eq!(bins.lines().count(), 3, "{bins}");
}

#[test]
fn synth_is_deterministic_and_feeds_dense_search() {
    let dir = TempDir::new().unwrap();
    let (x, y) = (path(&dir, "x"), path(&dir, "y"));
    let mut summary = String::new();
    for out in [&x, &y] {
        summary = ok(&[
            "synth",
            "--seed",
            "4",
            "--docs",
            "120",
            "--queries",
            "12",
            "-o",
            out,
        ]);
    }
    let qrels_lines = fs::read_to_string(format!("{x}/qrels.txt"))
        .unwrap()
        .lines()
        .count();
    assert!(
        summary.contains(&format!("judgments\t{qrels_lines}\n")),
        "{summary}"
    );
    for f in ["corpus.jsonl", "queries.tsv", "qrels.txt", "synonyms.tsv"] {
        assert_eq!(
            fs::read(format!("{x}/{f}")).unwrap(),
            fs::read(format!("{y}/{f}")).unwrap(),
            "{f}"
        );
    }
    let vectors = path(&dir, "vec");
    let synonyms = format!("{x}/synonyms.tsv");
    ok(&[
        "embed",
        "--corpus",
        &format!("{x}/corpus.jsonl"),
        "--synonyms",
        &synonyms,
        "-o",
        &vectors,
        "--set",
        "window=1",
        "--set",
        "stride=1",
    ]);
    let run = path(&dir, "dense.trec");
    let queries = format!("{x}/queries.tsv");
    ok(&[
        "search",
        "--mode",
        "dense+maxpassage",
        "--vectors",
        &vectors,
        "--synonyms",
        &synonyms,
        "--queries",
        &queries,
        "-o",
        &run,
    ]);
    let report = ok(&["eval", "--run", &run, "--qrels", &format!("{x}/qrels.txt")]);
    assert!(report.contains("queries_evaluated\t12"), "{report}");

    // passage vectors cannot serve the document-level mode
    let out = rrfuse(&[
        "search",
        "--mode",
        "dense",
        "--vectors",
        &vectors,
        "--queries",
        &queries,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc_vectors = path(&dir, "docvec");
    ok(&[
        "embed",
        "--corpus",
        &format!("{x}/corpus.jsonl"),
        "--whole-documents",
        "-o",
        &doc_vectors,
    ]);
    ok(&[
        "search",
        "--mode",
        "dense",
        "--vectors",
        &doc_vectors,
        "--queries",
        &queries,
    ]);

    assert_eq!(
        rrfuse(&[
            "synth",
            "--mismatch-fraction",
            "1.5",
            "-o",
            &path(&dir, "z")
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn expand_writes_weighted_terms() {
    let dir = TempDir::new().unwrap();
    let idx = fixture_index(&dir);
    let out = ok(&[
        "expand",
        "--method",
        "rm3",
        "--index",
        &idx,
        "--queries",
        &s(fixture("bm25_queries.tsv")),
    ]);
    let q1: Vec<&str> = out.lines().filter(|l| l.starts_with("q1\t")).collect();
    assert!(!q1.is_empty());
    let total: f64 = q1
        .iter()
        .map(|l| l.rsplit('\t').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}
