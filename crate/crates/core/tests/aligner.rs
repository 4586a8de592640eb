mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xlner::aligner::{load_model, save_model, train, train_traced, AlignerConfig};
use xlner::corpus::{Alignment, SentencePair};

fn pair(s: &str, t: &str) -> SentencePair {
    SentencePair::from_text(s, t).unwrap()
}

fn toy() -> Vec<SentencePair> {
    vec![pair("a", "x"), pair("a b", "x y")]
}

fn cfg(iterations: usize) -> AlignerConfig {
    AlignerConfig {
        iterations,
        ..AlignerConfig::default()
    }
}

// Frozen from the dense EM oracle in common::em_oracle (3 iterations,
// λ = 4, p0 = 0.08, α = 0.01).
const T_X_GIVEN_A: f64 = 0.993_968_744_910_359_3;
const T_Y_GIVEN_B: f64 = 0.986_489_621_440_863_7;

#[test]
fn toy_corpus_matches_frozen_oracle() {
    let model = train(&toy(), &cfg(3)).unwrap();
    let txa = model.translation_prob(Some("a"), "x").unwrap();
    let tyb = model.translation_prob(Some("b"), "y").unwrap();
    assert!(txa > 0.9 && tyb > 0.9);
    assert!((txa - T_X_GIVEN_A).abs() < 1e-12, "{txa}");
    assert!((tyb - T_Y_GIVEN_B).abs() < 1e-12, "{tyb}");
}

#[test]
fn matches_oracle_on_every_entry() {
    let bitext = vec![
        (vec!["a", "b", "c"], vec!["x", "y", "z", "w"]),
        (vec!["b", "c"], vec!["y", "z"]),
        (vec!["a", "a", "d"], vec!["x", "x", "v"]),
    ];
    let pairs: Vec<SentencePair> = bitext
        .iter()
        .map(|(s, t)| pair(&s.join(" "), &t.join(" ")))
        .collect();
    for iterations in 1..=4 {
        let c = AlignerConfig {
            iterations,
            tension: 2.5,
            null_prob: 0.1,
            smoothing: 0.05,
            optimize_tension: false,
        };
        let model = train(&pairs, &c).unwrap();
        let oracle = common::em_oracle(&bitext, iterations, 2.5, 0.1, 0.05);
        assert_eq!(model.num_entries(), oracle.len());
        for ((e, f), p) in &oracle {
            let got = model.translation_prob(e.as_deref(), f).unwrap();
            assert!((got - p).abs() < 1e-12, "t({f}|{e:?}) = {got} vs {p}");
        }
    }
}

#[test]
fn toy_viterbi() {
    let model = train(&toy(), &cfg(3)).unwrap();
    let a = model.viterbi_align(&pair("a b", "x y"));
    assert_eq!(a, [(0, 0), (1, 1)].into_iter().collect::<Alignment>());
}

#[test]
fn save_load_round_trip() {
    let model = train(&toy(), &cfg(3)).unwrap();
    let text = save_model(&model);
    // header, tension, null_prob, "null k", k rows, "lexical k", k rows
    let oracle = common::em_oracle(
        &[(vec!["a"], vec!["x"]), (vec!["a", "b"], vec!["x", "y"])],
        3,
        4.0,
        0.08,
        0.01,
    );
    assert_eq!(text.lines().count(), 5 + oracle.len());
    let loaded = load_model(&text).unwrap();
    assert_eq!(loaded.tension(), model.tension());
    assert_eq!(loaded.null_prob(), model.null_prob());
    let a = model.entries();
    let b = loaded.entries();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.0, x.1), (y.0, y.1));
        assert!((x.2 - y.2).abs() <= 1e-12);
    }
    assert_eq!(save_model(&loaded), text);
}

#[test]
fn rejects_unknown_header_and_bad_rows() {
    assert!(load_model("some-other-model 1\ntension 4\n").is_err());
    assert!(load_model("").is_err());
    let model = train(&toy(), &cfg(1)).unwrap();
    let text = save_model(&model);
    assert!(
        load_model(&text.replace("xlner-alignment-model 1", "xlner-alignment-model 2")).is_err()
    );
    assert!(load_model(&format!("{text}a z 0.5\n")).is_err());
    let bad_prob = text.replacen("\nx ", "\nx 1.5 ", 1);
    assert!(load_model(&bad_prob).is_err());
}

fn random_bitext(seed: u64, sentences: usize) -> Vec<SentencePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..12).map(|k| format!("w{k}")).collect();
    (0..sentences)
        .map(|_| {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(1..6);
            let s: Vec<&str> = (0..n)
                .map(|_| vocab[rng.gen_range(0..12)].as_str())
                .collect();
            let t: Vec<&str> = (0..m)
                .map(|_| vocab[rng.gen_range(0..12)].as_str())
                .collect();
            pair(&s.join(" "), &t.join(" "))
        })
        .collect()
}

#[test]
fn thread_count_does_not_change_the_model() {
    let bitext = random_bitext(7, 700);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| save_model(&train(&bitext, &cfg(4)).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn tension_optimization_is_opt_in() {
    let bitext = random_bitext(3, 40);
    let (fixed, trace) = train_traced(&bitext, &cfg(3)).unwrap();
    assert_eq!(fixed.tension(), 4.0);
    assert!(trace.tension.iter().all(|&t| t == 4.0));
    let c = AlignerConfig {
        optimize_tension: true,
        ..cfg(3)
    };
    let (tuned, trace) = train_traced(&bitext, &c).unwrap();
    assert_eq!(trace.tension.last(), Some(&tuned.tension()));
    assert_eq!(save_model(&tuned), save_model(&train(&bitext, &c).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn em_invariants(seed in any::<u64>(), sentences in 1usize..25, iterations in 1usize..5) {
        let bitext = random_bitext(seed, sentences);
        let (model, trace) = train_traced(&bitext, &cfg(iterations)).unwrap();
        prop_assert_eq!(trace.log_likelihood.len(), iterations + 1);
        for err in &trace.normalization_error {
            prop_assert!(*err <= 1e-9);
        }
        for w in trace.log_likelihood.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-6, "{:?}", trace.log_likelihood);
        }
        for (_, _, p) in model.entries() {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        for p in &bitext {
            let a = model.viterbi_align(p);
            prop_assert!(a.check_bounds(p.source.len(), p.target.len()).is_ok());
            let mut targets: Vec<usize> = a.iter().map(|l| l.target).collect();
            let before = targets.len();
            targets.dedup();
            prop_assert_eq!(before, targets.len());
        }
    }
}
