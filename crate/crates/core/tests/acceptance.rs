//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! appear in `cargo test` output.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use emotopic::corpus::{
    parse_corpus, select_emotion_utterances, Cohort, CorpusFormat, Document, DyadKind, LabelMap, TimePoint, Transcript,
    Utterance,
};
use emotopic::emotion::{classify_subset, classify_utterance, emotion_distribution, EmotionAssignment};
use emotopic::lexicon::{EmotionLexicon, PolarityLexicon};
use emotopic::sentiment::{sentiment_series, SentimentSeries};
use emotopic::taxonomy::Emotion;
use emotopic::textprep::{normalize, FilterConfig};
use emotopic::topics::nmf::{fit_matrix, residual_sq};
use emotopic::topics::{
    assign_documents, build_tfidf, top_terms, CsrMatrix, Init, NmfParams, TfidfOptions, Vocabulary,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

// 1. Max-score classification with the "money" scores.
fn money_classification() -> Outcome {
    let start = Instant::now();
    let lex = EmotionLexicon::parse(
        "money\tanticipation\t0.586\nmoney\tjoy\t0.531\nmoney\ttrust\t0.359\n",
        "money.tsv",
    )
    .map_err(|e| e.to_string())?;
    let c = classify_utterance(&["money"], &lex).ok_or("money was not classified")?;
    if c.emotion != Emotion::Anticipation || c.score != 0.586 {
        return Err(format!("got ({}, {})", c.emotion, c.score));
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("(anticipation, 0.586) in {took:.2?}"))
}

// 2. Removing (kind, joy) unclassifies an utterance whose only hit it was.
fn kind_joy_removal() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(common::fixtures().join("emotion_lexicon.tsv")).map_err(|e| e.to_string())?;
    let lex = EmotionLexicon::parse(&text, "emotion_lexicon.tsv").map_err(|e| e.to_string())?;
    let filter = FilterConfig::builtin().for_lexicon();
    let tokens = normalize("That was so kind of you.", &filter);
    let before = classify_utterance(&tokens, &lex).ok_or("not classified before removal")?;
    let only_hit: BTreeSet<(Emotion, String)> = [(Emotion::Joy, "kind".to_string())].into();
    if before.hits != only_hit {
        return Err(format!(
            "fixture utterance hits {:?}, expected only (joy, kind)",
            before.hits
        ));
    }
    let (lex, removed) = lex.remove_association("kind", Emotion::Joy);
    if !removed {
        return Err("(kind, joy) was not present".into());
    }
    if let Some(c) = classify_utterance(&tokens, &lex) {
        return Err(format!("still classified as {}", c.emotion));
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("classified as joy, then unclassified, in {took:.2?}"))
}

fn random_transcripts(
    rng: &mut ChaCha8Rng,
    words: &[String],
    labels: &[&str],
    max_utterances: usize,
) -> Vec<Transcript> {
    let n_transcripts = rng.random_range(1..=3);
    let total = rng.random_range(1..=max_utterances);
    let mut out: Vec<Transcript> = (0..n_transcripts)
        .map(|i| {
            let dyad_kind = *[
                DyadKind::ParentParentOrSibling,
                DyadKind::ParentChild,
                DyadKind::Friends,
            ]
            .choose(rng)
            .unwrap();
            Transcript {
                id: format!("t{i}"),
                cohort: dyad_kind.cohort(),
                time_point: if rng.random_bool(0.5) {
                    TimePoint::T1
                } else {
                    TimePoint::T2
                },
                dyad_kind,
                utterances: Vec::new(),
            }
        })
        .collect();
    for _ in 0..total {
        let t = rng.random_range(0..n_transcripts);
        let transcript = &mut out[t];
        let mut labels_here = BTreeSet::new();
        if rng.random_bool(0.7) {
            for _ in 0..rng.random_range(1..=2) {
                labels_here.insert(labels.choose(rng).unwrap().to_string());
            }
        }
        let min_words = if labels_here.is_empty() { 1 } else { 0 };
        let text: Vec<&str> = (0..rng.random_range(min_words..=8))
            .map(|_| words.choose(rng).unwrap().as_str())
            .collect();
        transcript.utterances.push(Utterance {
            transcript_id: transcript.id.clone(),
            line_index: transcript.utterances.len(),
            speaker: "A".into(),
            text: text.join(" "),
            labels: labels_here,
        });
    }
    out
}

/// Exhaustive scan over every (word, emotion, score) triple.
fn oracle_classify(tokens: &[&str], triples: &[(String, Emotion, f64)]) -> Option<(Emotion, f64, String)> {
    let mut best: Option<(Emotion, f64, String)> = None;
    for token in tokens {
        for (word, emotion, score) in triples {
            if word != token {
                continue;
            }
            let better = match &best {
                None => true,
                Some((be, bs, bw)) => {
                    *score > *bs
                        || (*score == *bs && emotion.index() < be.index())
                        || (*score == *bs && emotion == be && word < bw)
                }
            };
            if better {
                best = Some((*emotion, *score, word.clone()));
            }
        }
    }
    best
}

fn one_oracle_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let pool: Vec<String> = (0..30).map(|i| format!("w{i:02}")).collect();
    let n_words = rng.random_range(1..=20);
    let mut lexicon_words: Vec<&String> = pool.iter().collect();
    lexicon_words.shuffle(rng);
    lexicon_words.truncate(n_words);

    let mut triples = Vec::new();
    let mut tsv = String::new();
    for word in &lexicon_words {
        let mut emotions = Emotion::ALL.to_vec();
        emotions.shuffle(rng);
        for emotion in emotions.into_iter().take(rng.random_range(1..=3)) {
            // A coarse grid makes score ties common.
            let score = rng.random_range(1..=10) as f64 / 10.0;
            tsv.push_str(&format!("{word}\t{emotion}\t{score}\n"));
            triples.push(((*word).clone(), emotion, score));
        }
    }
    let lex = EmotionLexicon::parse(&tsv, "random.tsv").map_err(|e| e.to_string())?;
    let labels = [
        "expresses joy",
        "expresses worry",
        "expresses anger",
        "expresses surprise",
    ];
    let transcripts = random_transcripts(rng, &pool, &labels, 50);

    let subset = select_emotion_utterances(&transcripts, &LabelMap::builtin());
    let filter = FilterConfig::builtin().for_lexicon();
    let classified = classify_subset(&subset, &lex, &filter);
    let got: HashMap<(String, usize), &EmotionAssignment> = classified
        .assignments
        .iter()
        .map(|a| ((a.transcript_id.clone(), a.line_index), a))
        .collect();

    let mut counts: BTreeMap<Emotion, usize> = BTreeMap::new();
    let mut n_classified = 0usize;
    let mut n_emotion = 0usize;
    for t in &transcripts {
        for u in &t.utterances {
            if u.labels.is_empty() {
                continue;
            }
            n_emotion += 1;
            let tokens: Vec<&str> = u.text.split_whitespace().collect();
            let key = (t.id.clone(), u.line_index);
            match (oracle_classify(&tokens, &triples), got.get(&key)) {
                (None, None) => {}
                (Some((e, s, w)), Some(a)) => {
                    let c = &a.classification;
                    if (c.emotion, c.score, c.trigger_word.as_str()) != (e, s, w.as_str()) {
                        return Err(format!(
                            "{key:?}: got ({}, {}, {}), oracle ({e}, {s}, {w})",
                            c.emotion, c.score, c.trigger_word
                        ));
                    }
                    *counts.entry(e).or_default() += 1;
                    n_classified += 1;
                }
                (oracle, got) => {
                    return Err(format!(
                        "{key:?}: oracle {oracle:?}, implementation {:?}",
                        got.map(|a| a.emotion())
                    ));
                }
            }
        }
    }
    if classified.assignments.len() + classified.unclassified.len() != n_emotion {
        return Err(format!(
            "{} emotion utterances expected, implementation saw {}",
            n_emotion,
            classified.assignments.len() + classified.unclassified.len()
        ));
    }
    match emotion_distribution(&classified.assignments) {
        Ok(dist) => {
            for e in Emotion::ALL {
                let expected = *counts.get(&e).unwrap_or(&0) as f64 / n_classified as f64;
                if dist[&e] != expected {
                    return Err(format!("proportion of {e}: got {}, oracle {expected}", dist[&e]));
                }
            }
        }
        Err(_) if n_classified == 0 => {}
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

// 4. Classification and distribution against a brute-force oracle.
fn emotion_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        one_oracle_case(&mut rng).map_err(|e| format!("corpus {case}: {e}"))?;
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("100 corpora match in {took:.2?}"))
}

fn fixture_transcripts() -> Result<Vec<Transcript>, String> {
    let file = std::fs::File::open(common::fixtures().join("corpus.jsonl")).map_err(|e| e.to_string())?;
    parse_corpus(file, CorpusFormat::JsonLines, "corpus.jsonl").map_err(|e| e.to_string())
}

fn fixture_lexicon() -> Result<EmotionLexicon, String> {
    let dir = common::fixtures();
    let lex = EmotionLexicon::load(&dir.join("emotion_lexicon.tsv")).map_err(|e| e.to_string())?;
    let adapt = std::fs::read_to_string(dir.join("adaptations.tsv")).map_err(|e| e.to_string())?;
    Ok(lex
        .apply_adaptations(&adapt, "adaptations.tsv")
        .map_err(|e| e.to_string())?
        .0)
}

// 3. Distributions sum to one.
fn distribution_normalization() -> Outcome {
    let transcripts = fixture_transcripts()?;
    let lex = fixture_lexicon()?;
    let filter = FilterConfig::builtin().for_lexicon();
    let subset = select_emotion_utterances(&transcripts, &LabelMap::builtin());
    let classified = classify_subset(&subset, &lex, &filter);
    let mut groups: Vec<(String, Vec<EmotionAssignment>)> = vec![("pooled".into(), classified.assignments.clone())];
    for cohort in Cohort::ALL {
        for tp in [TimePoint::T1, TimePoint::T2] {
            groups.push((
                format!("{cohort}/{tp}"),
                classified
                    .assignments
                    .iter()
                    .filter(|a| a.cohort == cohort && a.time_point == tp)
                    .cloned()
                    .collect(),
            ));
        }
    }
    let mut worst: f64 = 0.0;
    for (name, group) in &groups {
        let dist = emotion_distribution(group).map_err(|e| format!("{name}: {e}"))?;
        let err = (dist.values().sum::<f64>() - 1.0).abs();
        if err > 1e-9 {
            return Err(format!("{name}: sum off by {err:e}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("{} fixture groups, max |sum - 1| = {worst:.1e}", groups.len()))
}

// 5. Hand-counted 40-line binning fixture.
fn sentiment_binning() -> Outcome {
    let (lex, _) = PolarityLexicon::parse("happy\nfun\n", "pos", "sad\nangry\n", "neg").map_err(|e| e.to_string())?;
    let texts: Vec<&str> = (0..40)
        .map(|i| match i {
            2 => "we had a happy day",
            7 => "that was fun",
            15 => "so happy and fun",
            23 => "i was sad",
            31 => "he got angry",
            _ => "the bus came at noon",
        })
        .collect();
    let transcript = Transcript {
        id: "forty".into(),
        cohort: Cohort::IddFamily,
        time_point: TimePoint::T1,
        dyad_kind: DyadKind::ParentChild,
        utterances: texts
            .iter()
            .enumerate()
            .map(|(i, t)| Utterance {
                transcript_id: "forty".into(),
                line_index: i,
                speaker: "A".into(),
                text: t.to_string(),
                labels: BTreeSet::new(),
            })
            .collect(),
    };
    let filter = FilterConfig::builtin().for_lexicon();
    let bins = |s: &SentimentSeries| s.bins.iter().map(|b| (b.positive, b.negative)).collect::<Vec<_>>();
    let at20 = sentiment_series(&transcript, &lex, &filter, 20).map_err(|e| e.to_string())?;
    if bins(&at20) != vec![(3, 0), (0, 2)] {
        return Err(format!("bin_size 20 gave {:?}", bins(&at20)));
    }
    for size in [5, 10, 20, 40] {
        let s = sentiment_series(&transcript, &lex, &filter, size).map_err(|e| e.to_string())?;
        if (s.positive_total, s.negative_total) != (3, 2) || s.bins.len() != 40usize.div_ceil(size) {
            return Err(format!(
                "bin_size {size}: totals ({}, {}), {} bins",
                s.positive_total,
                s.negative_total,
                s.bins.len()
            ));
        }
    }
    Ok("[(3,0),(0,2)]; totals (3,2) at bin sizes 5/10/20/40".into())
}

// 6. TF-IDF against the formula computed densely.
fn tfidf_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pool = [
        "home", "money", "school", "bus", "doctor", "rent", "job", "game", "song", "dog", "cat", "pizza",
    ];
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let n = rng.random_range(1..=5);
        let docs: Vec<Document> = (0..n)
            .map(|i| Document {
                id: format!("d{i}"),
                source_transcript: "t".into(),
                chunk_index: i,
                lines: Vec::new(),
                tokens: (0..rng.random_range(0..=15))
                    .map(|_| pool.choose(&mut rng).unwrap().to_string())
                    .collect(),
            })
            .collect();
        let options = TfidfOptions {
            min_df: rng.random_range(1..=2),
            max_df_ratio: *[1.0, 0.8, 0.5].choose(&mut rng).unwrap(),
        };

        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for d in &docs {
            let distinct: BTreeSet<&str> = d.tokens.iter().map(String::as_str).collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        let vocab: Vec<&str> = df
            .iter()
            .filter(|(_, &c)| c >= options.min_df && c as f64 / n as f64 <= options.max_df_ratio)
            .map(|(t, _)| *t)
            .collect();
        let result = build_tfidf(&docs, options);
        if vocab.is_empty() {
            if result.is_ok() {
                return Err(format!("corpus {case}: empty vocabulary accepted"));
            }
            continue;
        }
        let (v, x) = result.map_err(|e| format!("corpus {case}: {e}"))?;
        if v.terms != vocab {
            return Err(format!("corpus {case}: vocabulary {:?} vs {vocab:?}", v.terms));
        }
        for (r, d) in docs.iter().enumerate() {
            let raw: Vec<f64> = vocab
                .iter()
                .map(|t| {
                    let tf = d.tokens.iter().filter(|w| w == t).count() as f64;
                    tf * (((1 + n) as f64 / (1 + df[t]) as f64).ln() + 1.0)
                })
                .collect();
            let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
            for (c, a) in raw.iter().enumerate() {
                let expected = if norm > 0.0 { a / norm } else { 0.0 };
                let err = (x.matrix.get(r, c) - expected).abs();
                if err > 1e-12 {
                    return Err(format!("corpus {case}: entry ({r}, {c}) off by {err:e}"));
                }
                worst = worst.max(err);
            }
        }
    }
    Ok(format!("20 corpora, max entry error {worst:.1e}"))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CsrMatrix {
    let dense: Vec<Vec<f64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.random_bool(0.3) {
                        0.0
                    } else {
                        rng.random_range(0.0..5.0)
                    }
                })
                .collect()
        })
        .collect();
    CsrMatrix::from_dense(&dense)
}

// 7. Objective never increases.
fn nmf_monotonicity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fits = 0;
    let mut worst_rise: f64 = f64::NEG_INFINITY;
    for m in 0..50 {
        let rows = rng.random_range(2..=30);
        let cols = rng.random_range(2..=40);
        let x = random_matrix(&mut rng, rows, cols);
        let k = rng.random_range(1..=8usize.min(rows).min(cols));
        for alpha in [0.0, 0.1, 1.0] {
            for l1_ratio in [0.0, 0.5, 1.0] {
                let params = NmfParams {
                    k,
                    alpha,
                    l1_ratio,
                    max_iter: 200,
                    tol: 1e-6,
                    seed: m,
                    init: if m % 2 == 0 { Init::Nndsvd } else { Init::RandomSeeded },
                };
                let model = match fit_matrix(&x, &params) {
                    Ok(model) => model,
                    // Sparse draws can leave fewer nonzero rows or columns than k.
                    Err(_) => continue,
                };
                fits += 1;
                for pair in model.objective_trace.windows(2) {
                    let rise = pair[1] - pair[0];
                    worst_rise = worst_rise.max(rise);
                    if rise > 1e-10 {
                        return Err(format!(
                            "matrix {m} ({rows}x{cols}, k={k}, alpha={alpha}, r={l1_ratio}): objective rose by {rise:e}"
                        ));
                    }
                }
                if model.w.iter().chain(model.h.iter()).any(|&e| e < 0.0) {
                    return Err(format!("matrix {m}: negative factor entry"));
                }
            }
        }
    }
    if fits < 400 {
        return Err(format!("only {fits} fits ran"));
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("{fits} fits, largest step change {worst_rise:.2e}, {took:.2?}"))
}

// 8. Rank-1 recovery and block-diagonal supports.
fn nmf_recovery() -> Outcome {
    let start = Instant::now();
    let u = [1.0, 2.0, 0.5, 3.0, 1.5];
    let v = [0.2, 1.0, 4.0, 0.7, 1.5, 2.5];
    let x = CsrMatrix::from_dense(&u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect::<Vec<_>>());
    let mut residuals = Vec::new();
    for init in [Init::Nndsvd, Init::RandomSeeded] {
        let params = NmfParams {
            k: 1,
            alpha: 0.0,
            l1_ratio: 0.0,
            max_iter: 200,
            tol: 0.0,
            seed: 3,
            init,
        };
        let m = fit_matrix(&x, &params).map_err(|e| e.to_string())?;
        let rel = (residual_sq(&x, &m.w, &m.h) / x.frobenius_sq()).sqrt();
        if rel >= 1e-6 || m.n_iter() > 200 {
            return Err(format!(
                "{init:?}: relative residual {rel:e} after {} iterations",
                m.n_iter()
            ));
        }
        residuals.push(rel);
    }

    let dense: Vec<Vec<f64>> = (0..6)
        .map(|r| {
            (0..6)
                .map(|c| {
                    if (r < 3) == (c < 3) {
                        1.0 + ((r * 5 + c * 3) % 4) as f64 * 0.25
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let x = CsrMatrix::from_dense(&dense);
    let terms: Vec<String> = (0..6).map(|c| format!("t{c}")).collect();
    let vocab = Vocabulary {
        index: terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect(),
        terms,
        document_frequency: vec![3; 6],
        idf: vec![1.0; 6],
    };
    let params = NmfParams {
        k: 2,
        alpha: 0.0,
        l1_ratio: 0.0,
        max_iter: 200,
        tol: 0.0,
        seed: 1,
        init: Init::Nndsvd,
    };
    let mut model = fit_matrix(&x, &params).map_err(|e| e.to_string())?;
    model.row_ids = (0..6).map(|r| format!("d{r}")).collect();
    let block_of = |c: usize| usize::from(c >= 3);
    let mut topic_block = Vec::new();
    for t in 0..2 {
        let support: BTreeSet<usize> = top_terms(&model, &vocab, t, 3)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|(_, w)| *w > 1e-9)
            .map(|(term, _)| vocab.index[&term])
            .collect();
        let blocks: BTreeSet<usize> = support.iter().map(|&c| block_of(c)).collect();
        if support.len() != 3 || blocks.len() != 1 {
            return Err(format!("topic {t} top terms span columns {support:?}"));
        }
        topic_block.push(*blocks.iter().next().unwrap());
    }
    if topic_block[0] == topic_block[1] {
        return Err("both topics landed on the same block".into());
    }
    for (id, a) in assign_documents(&model) {
        let r: usize = id[1..].parse().unwrap();
        if topic_block[a.topic] != block_of(r) {
            return Err(format!("{id} assigned to topic {} outside its block", a.topic));
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "rank-1 residuals {:.1e} / {:.1e}; block supports separate; {took:.2?}",
        residuals[0], residuals[1]
    ))
}

fn read_dir_files(dir: &std::path::Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        out.insert(name, std::fs::read(entry.path()).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

// 9. Same seed, same bytes; manifest replay reproduces the reports.
fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = common::fixture_config();
    let cfg = cfg.to_str().unwrap();
    let dirs: Vec<_> = ["a", "b", "replay"].iter().map(|d| tmp.path().join(d)).collect();
    for dir in &dirs[..2] {
        common::emotopic_ok(&[
            "topics",
            "--config",
            cfg,
            "--out",
            dir.to_str().unwrap(),
            "--init",
            "random-seeded",
            "--seed",
            "11",
        ])?;
    }
    let a = read_dir_files(&dirs[0])?;
    let b = read_dir_files(&dirs[1])?;
    let export = "topics_idd_k5_model.json";
    if !a.contains_key(export) || a[export] != b[export] {
        return Err(format!("{export} differs between runs"));
    }
    let manifest = dirs[0].join("manifest_topics.toml");
    common::emotopic_ok(&[
        "topics",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        dirs[2].to_str().unwrap(),
    ])?;
    let replay = read_dir_files(&dirs[2])?;
    let reports: Vec<&String> = a.keys().filter(|n| !n.starts_with("manifest_")).collect();
    for name in &reports {
        if a[*name] != b[*name] || replay.get(*name) != Some(&a[*name]) {
            return Err(format!("{name} is not byte-identical across runs"));
        }
    }
    Ok(format!(
        "{} report files identical across two runs and a manifest replay",
        reports.len()
    ))
}

fn csv_shape(path: &std::path::Path) -> Result<(Vec<String>, usize), String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let header = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    Ok((header, rdr.records().count()))
}

// 10. Whole pipeline over the shipped fixture, checked against goldens.
fn end_to_end() -> Outcome {
    let start = Instant::now();
    let transcripts = fixture_transcripts()?;
    let mut kinds: BTreeMap<DyadKind, usize> = BTreeMap::new();
    for t in &transcripts {
        *kinds.entry(t.dyad_kind).or_default() += 1;
    }
    let expected_kinds = [
        (DyadKind::ParentParentOrSibling, 29),
        (DyadKind::ParentChild, 9),
        (DyadKind::Friends, 25),
    ];
    if transcripts.len() != 63 || expected_kinds.iter().any(|(k, n)| kinds.get(k) != Some(n)) {
        return Err(format!("fixture has {} transcripts: {kinds:?}", transcripts.len()));
    }

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = tmp.path();
    common::run_fixture_pipeline(out)?;

    let (header, rows) = csv_shape(&out.join("emotion_distribution.csv"))?;
    if header
        != [
            "emotion",
            "idd_original",
            "idd_lexicon",
            "peer_original",
            "peer_lexicon",
        ]
        || rows != 9
    {
        return Err(format!("distribution table is {header:?} x {rows}"));
    }
    let (header, rows) = csv_shape(&out.join("emotion_intensity.csv"))?;
    if header != ["emotion", "idd_t1", "idd_t2", "peer_t1", "peer_t2"] || rows != 8 {
        return Err(format!("intensity table is {header:?} x {rows}"));
    }
    for cohort in ["idd", "peer"] {
        let (header, rows) = csv_shape(&out.join(format!("emotion_top_words_{cohort}.csv")))?;
        if header.len() != 17 || rows == 0 {
            return Err(format!("top words ({cohort}) is {} columns x {rows}", header.len()));
        }
    }
    let (_, cases) = csv_shape(&out.join("sentiment_cross_case.csv"))?;
    if cases != 24 {
        return Err(format!("cross-case table has {cases} rows"));
    }
    for (file, panels) in [
        ("sentiment.svg", 24),
        ("topics_idd_k5.svg", 5),
        ("topics_peer_k8.svg", 8),
    ] {
        let svg = std::fs::read_to_string(out.join(file)).map_err(|e| e.to_string())?;
        let found = svg.matches(r#"<g class="panel""#).count();
        if found != panels {
            return Err(format!("{file} has {found} panels, expected {panels}"));
        }
    }
    common::check_golden(out)?;
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("63 transcripts, all reports match goldens, {took:.2?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("max-score classification", money_classification),
        ("lexicon adaptation", kind_joy_removal),
        ("distribution normalization", distribution_normalization),
        ("emotion oracle equivalence", emotion_oracle),
        ("sentiment binning", sentiment_binning),
        ("tf-idf oracle", tfidf_oracle),
        ("nmf monotonicity", nmf_monotonicity),
        ("nmf exact recovery", nmf_recovery),
        ("determinism", determinism),
        ("end-to-end fixture pipeline", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
