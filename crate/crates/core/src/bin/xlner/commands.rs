use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use log::info;
use serde::Serialize;

use xlner::aligner::{self, AlignerConfig};
use xlner::corpus::{parse_tokenized_lines, write_pharaoh_file};
use xlner::metrics::{aer, corpus_bleu, label_distribution, ner_prf};
use xlner::projection::{
    back_project_corpus, extract_aligned_pairs, project_corpus, ProjectionConfig, ProjectionReport,
};
use xlner::select::{select_by_aer, select_by_bleu, SelectionMetric, SelectionReport};

use crate::io::{self, to_json};
use crate::{
    AlignArgs, AlignTrainArgs, Command, EvalAerArgs, EvalBleuArgs, EvalNerArgs, ExtractPairsArgs,
    ProjectArgs, SelectArgs, StatsArgs, UsageError,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::AlignTrain(args) => align_train(args),
        Command::Align(args) => align(args),
        Command::Project(args) => project(args, false),
        Command::Backproject(args) => project(args, true),
        Command::ExtractPairs(args) => extract_pairs(args),
        Command::EvalNer(args) => eval_ner(args),
        Command::EvalAer(args) => eval_aer(args),
        Command::EvalBleu(args) => eval_bleu(args),
        Command::Stats(args) => stats(args),
        Command::Select(args) => select(args),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", to_json(value));
    } else {
        print!("{}", text());
    }
}

#[derive(Serialize)]
struct TrainSummary {
    pairs: usize,
    iterations: usize,
    tension: f64,
    null_prob: f64,
    entries: usize,
    log_likelihood: Vec<f64>,
}

fn align_train(args: AlignTrainArgs) -> Result<()> {
    let cfg = AlignerConfig {
        iterations: args.iters,
        tension: args.tension,
        null_prob: args.p0,
        smoothing: args.smoothing,
        optimize_tension: args.optimize_tension,
    };
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    let bitext = io::read_parallel(&args.src, &args.tgt)?;
    info!("training on {} sentence pairs", bitext.len());
    let (model, trace) = aligner::train_traced(&bitext, &cfg)?;
    io::write(&args.out, &aligner::save_model(&model))?;

    let summary = TrainSummary {
        pairs: bitext.len(),
        iterations: cfg.iterations,
        tension: model.tension(),
        null_prob: model.null_prob(),
        entries: model.num_entries(),
        log_likelihood: trace.log_likelihood,
    };
    emit(args.json.json, &summary, || {
        let mut s = format!(
            "trained on {} pairs: {} entries, tension {}, null prob {}\n",
            summary.pairs, summary.entries, summary.tension, summary.null_prob
        );
        for (k, ll) in summary.log_likelihood.iter().enumerate() {
            let _ = writeln!(s, "  iteration {k}: log-likelihood {ll:.6}");
        }
        s
    });
    Ok(())
}

#[derive(Serialize)]
struct AlignSummary {
    pairs: usize,
    links: usize,
}

fn align(args: AlignArgs) -> Result<()> {
    let text = io::read(&args.model)?;
    let model =
        aligner::load_model(&text).with_context(|| format!("in {}", args.model.display()))?;
    let pairs = io::read_parallel(&args.src, &args.tgt)?;
    let alignments = aligner::align_corpus(&model, &pairs);
    io::write(&args.out, &write_pharaoh_file(&alignments))?;
    let summary = AlignSummary {
        pairs: pairs.len(),
        links: alignments.iter().map(|a| a.len()).sum(),
    };
    emit(args.json.json, &summary, || {
        format!("aligned {} pairs, {} links\n", summary.pairs, summary.links)
    });
    Ok(())
}

fn report_table(r: &ProjectionReport) -> String {
    format!(
        "entities in         {}\nentities projected  {}\ndropped (unaligned) {}\nsplit entities      {}\ntoken collisions    {}\n",
        r.entities_in,
        r.entities_projected,
        r.entities_dropped_unaligned,
        r.entities_split,
        r.token_collisions
    )
}

fn project(args: ProjectArgs, backward: bool) -> Result<()> {
    let cfg = ProjectionConfig {
        gap_strategy: args.gap_strategy,
        collision_policy: args.collision,
        unaligned_entity_policy: args.unaligned,
    };
    let labeled = io::read_corpus(&args.conll, args.format)?;
    let pairs = io::read_parallel(&args.src, &args.tgt)?;
    let alignments = io::read_alignments(&args.align)?;
    let run = if backward {
        back_project_corpus
    } else {
        project_corpus
    };
    let (projected, report) = run(&labeled, &pairs, &alignments, &cfg)?;
    io::write_corpus(&args.out, args.format, &projected)?;
    if let Some(path) = &args.report {
        io::write_json(path, &report)?;
    }
    emit(args.json.json, &report, || report_table(&report));
    Ok(())
}

#[derive(Serialize)]
struct PairsSummary {
    pairs: usize,
}

fn extract_pairs(args: ExtractPairsArgs) -> Result<()> {
    let pairs = io::read_parallel(&args.src, &args.tgt)?;
    let alignments = io::read_alignments(&args.align)?;
    if pairs.len() != alignments.len() {
        anyhow::bail!(
            "{} sentence pairs but {} alignment lines",
            pairs.len(),
            alignments.len()
        );
    }
    let mut out = String::new();
    let mut count = 0;
    for (index, (pair, alignment)) in pairs.iter().zip(&alignments).enumerate() {
        alignment
            .check_bounds(pair.source.len(), pair.target.len())
            .with_context(|| format!("sentence {index}"))?;
        for (s, t) in extract_aligned_pairs(pair, alignment) {
            let _ = writeln!(out, "{}\t{}", s.text, t.text);
            count += 1;
        }
    }
    io::write(&args.out, &out)?;
    let summary = PairsSummary { pairs: count };
    emit(args.json.json, &summary, || {
        format!("wrote {count} aligned word pairs\n")
    });
    Ok(())
}

fn eval_ner(args: EvalNerArgs) -> Result<()> {
    let gold = io::read_corpus(&args.gold, args.format)?;
    let pred = io::read_corpus(&args.pred, args.format)?;
    let report = ner_prf(&gold, &pred)?;
    emit(args.json.json, &report, || {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:>9} {:>9} {:>9} {:>6} {:>6} {:>6}",
            "label", "precision", "recall", "f1", "gold", "pred", "match"
        );
        if args.per_label {
            for (label, l) in &report.per_label {
                let _ = writeln!(
                    s,
                    "{:<12} {:>9.4} {:>9.4} {:>9.4} {:>6} {:>6} {:>6}",
                    label, l.precision, l.recall, l.f1, l.gold_count, l.pred_count, l.match_count
                );
            }
        }
        let m = report.micro;
        let _ = writeln!(
            s,
            "{:<12} {:>9.4} {:>9.4} {:>9.4}",
            "micro", m.precision, m.recall, m.f1
        );
        let _ = writeln!(s, "{:<12} {:>29.4}", "macro-f1", report.macro_f1);
        s
    });
    Ok(())
}

#[derive(Serialize)]
struct AerSummary {
    sentences: usize,
    aer: f64,
}

fn eval_aer(args: EvalAerArgs) -> Result<()> {
    let pred = io::read_alignments(&args.pred)?;
    let gold = io::read_gold(&args.gold)?;
    let summary = AerSummary {
        sentences: pred.len(),
        aer: aer(&pred, &gold)?,
    };
    emit(args.json.json, &summary, || {
        format!(
            "AER {:.4} over {} sentences\n",
            summary.aer, summary.sentences
        )
    });
    Ok(())
}

fn eval_bleu(args: EvalBleuArgs) -> Result<()> {
    let hyps = parse_tokenized_lines(&io::read(&args.hyp)?);
    let refs = parse_tokenized_lines(&io::read(&args.reference)?);
    let report = corpus_bleu(&hyps, &refs, args.max_n, args.smooth)?;
    emit(args.json.json, &report, || {
        let precisions: Vec<String> = report
            .n_gram_precisions
            .iter()
            .map(|p| format!("{:.1}", 100.0 * p))
            .collect();
        format!(
            "BLEU = {:.2}, {} (BP = {:.3}, hyp_len = {}, ref_len = {})\n",
            report.score,
            precisions.join("/"),
            report.brevity_penalty,
            report.hyp_length,
            report.ref_length
        )
    });
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let corpus = io::read_corpus(&args.conll, args.format)?;
    let dist = label_distribution(&corpus)?;
    emit(args.json.json, &dist, || {
        let mut s = String::new();
        let _ = writeln!(s, "sentences {}", dist.sentences);
        let _ = writeln!(s, "tokens    {}", dist.tokens);
        let _ = writeln!(s, "entities  {}", dist.entities);
        for (label, count) in &dist.per_label {
            let _ = writeln!(s, "  {label:<12} {count}");
        }
        s
    });
    Ok(())
}

fn parse_candidate(spec: &str) -> Result<(String, PathBuf)> {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(UsageError(format!("candidate {spec:?} is not NAME=FILE")).into()),
    }
}

fn select(args: SelectArgs) -> Result<()> {
    let candidates = args
        .candidates
        .iter()
        .map(|c| parse_candidate(c))
        .collect::<Result<Vec<_>>>()?;
    let report: SelectionReport = match args.metric {
        SelectionMetric::Bleu => {
            let reference = args
                .reference
                .as_ref()
                .ok_or_else(|| UsageError("--metric bleu needs --ref".into()))?;
            let refs = parse_tokenized_lines(&io::read(reference)?);
            let loaded = candidates
                .into_iter()
                .map(|(name, path)| Ok((name, parse_tokenized_lines(&io::read(&path)?))))
                .collect::<Result<Vec<_>>>()?;
            select_by_bleu(&loaded, &refs, args.max_n, args.smooth)?
        }
        SelectionMetric::Aer => {
            let gold_path = args
                .gold
                .as_ref()
                .ok_or_else(|| UsageError("--metric aer needs --gold".into()))?;
            let gold = io::read_gold(gold_path)?;
            let loaded = candidates
                .into_iter()
                .map(|(name, path)| {
                    let a =
                        io::read_alignments(&path).with_context(|| format!("candidate {name}"))?;
                    Ok((name, a))
                })
                .collect::<Result<Vec<_>>>()?;
            select_by_aer(&loaded, &gold)?
        }
    };
    if let Some(path) = &args.out {
        io::write_json(path, &report)?;
    }
    emit(args.json.json, &report, || {
        let mut s = String::new();
        let _ = writeln!(s, "{:<4} {:<24} {:>10}", "rank", "candidate", report.metric);
        for (k, c) in report.ranking.iter().enumerate() {
            let _ = writeln!(s, "{:<4} {:<24} {:>10.4}", k + 1, c.name, c.score);
        }
        s
    });
    Ok(())
}
