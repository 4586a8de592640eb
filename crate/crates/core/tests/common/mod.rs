//! Brute-force reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's algorithms; only plain data types
//! cross the boundary.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

pub type Links = BTreeSet<(usize, usize)>;

// ---------------------------------------------------------------- aligner

/// Dense EM for the diagonal-prior Model 2, string keyed. `None` is the null
/// word. Returns `t[(source, target)]` after `iterations` rounds.
pub fn em_oracle(
    bitext: &[(Vec<&str>, Vec<&str>)],
    iterations: usize,
    tension: f64,
    p0: f64,
    alpha: f64,
) -> BTreeMap<(Option<String>, String), f64> {
    let mut t: BTreeMap<(Option<String>, String), f64> = BTreeMap::new();
    // support: co-occurring targets, uniform start
    let mut support: BTreeMap<Option<String>, BTreeSet<String>> = BTreeMap::new();
    for (src, tgt) in bitext {
        let mut sources: Vec<Option<String>> = vec![None];
        sources.extend(src.iter().map(|s| Some(s.to_string())));
        for e in sources {
            for f in tgt {
                support.entry(e.clone()).or_default().insert(f.to_string());
            }
        }
    }
    for (e, fs) in &support {
        for f in fs {
            t.insert((e.clone(), f.clone()), 1.0 / fs.len() as f64);
        }
    }

    for _ in 0..iterations {
        let mut counts: BTreeMap<(Option<String>, String), f64> = BTreeMap::new();
        for (src, tgt) in bitext {
            let (n, m) = (src.len() as f64, tgt.len() as f64);
            for (j, f) in tgt.iter().enumerate() {
                let jr = (j + 1) as f64 / m;
                let weights: Vec<f64> = (0..src.len())
                    .map(|i| (-tension * ((i + 1) as f64 / n - jr).abs()).exp())
                    .collect();
                let z: f64 = weights.iter().sum();
                let mut posts: Vec<(Option<String>, f64)> = Vec::new();
                posts.push((None, p0 * t[&(None, f.to_string())]));
                for (i, e) in src.iter().enumerate() {
                    let a = (1.0 - p0) * weights[i] / z;
                    posts.push((
                        Some(e.to_string()),
                        a * t[&(Some(e.to_string()), f.to_string())],
                    ));
                }
                let total: f64 = posts.iter().map(|p| p.1).sum();
                for (e, p) in posts {
                    *counts.entry((e, f.to_string())).or_insert(0.0) += p / total;
                }
            }
        }
        for (e, fs) in &support {
            let total: f64 = fs
                .iter()
                .map(|f| counts.get(&(e.clone(), f.clone())).copied().unwrap_or(0.0) + alpha)
                .sum();
            for f in fs {
                let c = counts.get(&(e.clone(), f.clone())).copied().unwrap_or(0.0);
                t.insert((e.clone(), f.clone()), (c + alpha) / total);
            }
        }
    }
    t
}

// ------------------------------------------------------------- projection

/// A source entity as (label, token set).
pub type Entity = (String, BTreeSet<usize>);

/// Projected entities as (label, half-open fragments).
pub type Projected = Vec<(String, Vec<(usize, usize)>)>;

#[derive(Clone, Copy)]
pub enum OracleCollision {
    MostLinks,
    LeftmostEntity,
    DropToken,
}

/// Projects entities by enumerating every (entity, source, target) triple.
/// Output: (label, fragments) per surviving entity, sorted by first target
/// token, plus the number of collisions and dropped entities.
pub fn projection_oracle(
    entities: &[Entity],
    links: &Links,
    src_len: usize,
    tgt_len: usize,
    collision: OracleCollision,
) -> (Projected, usize, usize) {
    // entities ordered by their leftmost source token
    let mut order: Vec<&Entity> = entities.iter().collect();
    order.sort_by_key(|e| *e.1.iter().next().unwrap());

    let mut owned: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); order.len()];
    let mut collisions = 0;
    for j in 0..tgt_len {
        let support: Vec<usize> = order
            .iter()
            .map(|e| {
                (0..src_len)
                    .filter(|i| e.1.contains(i) && links.contains(&(*i, j)))
                    .count()
            })
            .collect();
        let claimants: Vec<usize> = (0..order.len()).filter(|&k| support[k] > 0).collect();
        if claimants.len() > 1 {
            collisions += 1;
        }
        let winner = match claimants.len() {
            0 => None,
            1 => Some(claimants[0]),
            _ => match collision {
                OracleCollision::DropToken => None,
                OracleCollision::LeftmostEntity => Some(claimants[0]),
                OracleCollision::MostLinks => {
                    let best = claimants.iter().map(|&k| support[k]).max().unwrap();
                    claimants.into_iter().find(|&k| support[k] == best)
                }
            },
        };
        if let Some(k) = winner {
            owned[k].insert(j);
        }
    }

    let mut out = Vec::new();
    let mut dropped = 0;
    for (k, e) in order.iter().enumerate() {
        if owned[k].is_empty() {
            dropped += 1;
            continue;
        }
        let mut frags: Vec<(usize, usize)> = Vec::new();
        for j in 0..tgt_len {
            if owned[k].contains(&j) {
                if j > 0 && owned[k].contains(&(j - 1)) {
                    frags.last_mut().unwrap().1 = j + 1;
                } else {
                    frags.push((j, j + 1));
                }
            }
        }
        out.push((e.0.clone(), frags));
    }
    out.sort_by_key(|(_, f)| f[0].0);
    (out, collisions, dropped)
}

/// Random non-overlapping single-fragment entities over `len` tokens.
pub fn random_entities<R: Rng>(rng: &mut R, len: usize, labels: &[&str]) -> Vec<Entity> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < len {
        if rng.gen_bool(0.4) {
            let width = rng.gen_range(1..=(len - i).min(3));
            let label = labels[rng.gen_range(0..labels.len())].to_string();
            out.push((label, (i..i + width).collect()));
            i += width;
        } else {
            i += 1;
        }
    }
    out
}

pub fn random_links<R: Rng>(rng: &mut R, src_len: usize, tgt_len: usize, density: f64) -> Links {
    let mut links = Links::new();
    for i in 0..src_len {
        for j in 0..tgt_len {
            if rng.gen_bool(density) {
                links.insert((i, j));
            }
        }
    }
    links
}

// ---------------------------------------------------------------- metrics

/// Entities of a BIO sequence with loose decoding, by explicit scanning.
pub fn bio_entities(tags: &[String]) -> Vec<(String, usize, usize)> {
    let mut out: Vec<(String, usize, usize)> = Vec::new();
    for (i, tag) in tags.iter().enumerate() {
        if tag == "O" {
            continue;
        }
        let (prefix, label) = tag.split_at(2);
        let extends = prefix == "I-"
            && i > 0
            && tags[i - 1] != "O"
            && &tags[i - 1][2..] == label
            && out.last().is_some_and(|e| e.2 == i);
        if extends {
            out.last_mut().unwrap().2 = i + 1;
        } else {
            out.push((label.to_string(), i, i + 1));
        }
    }
    out
}

/// (gold, predicted, matched) per label.
pub type LabelCounts = BTreeMap<String, (usize, usize, usize)>;

/// Micro (p, r, f1) and per-label f1 from explicit tuple sets.
pub fn ner_oracle(
    gold: &[Vec<String>],
    pred: &[Vec<String>],
) -> ((f64, f64, f64), LabelCounts, f64) {
    let collect = |corpus: &[Vec<String>]| -> BTreeSet<(usize, String, usize, usize)> {
        corpus
            .iter()
            .enumerate()
            .flat_map(|(s, tags)| {
                bio_entities(tags)
                    .into_iter()
                    .map(move |(l, a, b)| (s, l, a, b))
            })
            .collect()
    };
    let g = collect(gold);
    let p = collect(pred);
    let hits: BTreeSet<_> = g.intersection(&p).cloned().collect();
    let prf = |m: usize, pc: usize, gc: usize| {
        let pr = if pc == 0 { 0.0 } else { m as f64 / pc as f64 };
        let rc = if gc == 0 { 0.0 } else { m as f64 / gc as f64 };
        let f = if pr + rc == 0.0 {
            0.0
        } else {
            2.0 * pr * rc / (pr + rc)
        };
        (pr, rc, f)
    };
    let mut per_label: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for e in &g {
        per_label.entry(e.1.clone()).or_default().0 += 1;
    }
    for e in &p {
        per_label.entry(e.1.clone()).or_default().1 += 1;
    }
    for e in &hits {
        per_label.entry(e.1.clone()).or_default().2 += 1;
    }
    let gold_labels: Vec<f64> = per_label
        .values()
        .filter(|c| c.0 > 0)
        .map(|&(gc, pc, m)| prf(m, pc, gc).2)
        .collect();
    let macro_f1 = if gold_labels.is_empty() {
        0.0
    } else {
        gold_labels.iter().sum::<f64>() / gold_labels.len() as f64
    };
    (prf(hits.len(), p.len(), g.len()), per_label, macro_f1)
}

pub fn aer_oracle(pred: &[Links], sure: &[Links], possible: &[Links]) -> f64 {
    let mut a_s = 0;
    let mut a_p = 0;
    let mut a = 0;
    let mut s = 0;
    for k in 0..pred.len() {
        for link in &pred[k] {
            a += 1;
            if sure[k].iter().any(|x| x == link) {
                a_s += 1;
            }
            if possible[k].iter().any(|x| x == link) || sure[k].iter().any(|x| x == link) {
                a_p += 1;
            }
        }
        s += sure[k].len();
    }
    if a + s == 0 {
        0.0
    } else {
        1.0 - (a_s + a_p) as f64 / (a + s) as f64
    }
}

/// Unsmoothed corpus BLEU by listing every n-gram occurrence and clipping
/// with linear scans.
pub fn bleu_oracle(
    hyps: &[Vec<String>],
    refs: &[Vec<String>],
    max_n: usize,
) -> (f64, Vec<f64>, f64) {
    let mut matched = vec![0usize; max_n];
    let mut total = vec![0usize; max_n];
    let (mut c, mut r) = (0usize, 0usize);
    for (h, rf) in hyps.iter().zip(refs) {
        c += h.len();
        r += rf.len();
        for n in 1..=max_n {
            let grams = |s: &Vec<String>| -> Vec<Vec<String>> {
                if s.len() < n {
                    return vec![];
                }
                (0..=s.len() - n).map(|k| s[k..k + n].to_vec()).collect()
            };
            let hg = grams(h);
            let rg = grams(rf);
            let mut seen: Vec<&Vec<String>> = Vec::new();
            for g in &hg {
                total[n - 1] += 1;
                if seen.contains(&g) {
                    continue;
                }
                seen.push(g);
                let in_hyp = hg.iter().filter(|x| *x == g).count();
                let in_ref = rg.iter().filter(|x| *x == g).count();
                matched[n - 1] += in_hyp.min(in_ref);
            }
        }
    }
    let precisions: Vec<f64> = (0..max_n)
        .map(|k| {
            if total[k] == 0 {
                0.0
            } else {
                matched[k] as f64 / total[k] as f64
            }
        })
        .collect();
    let bp = if c >= r {
        1.0
    } else if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };
    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        let log_mean: f64 = precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
        100.0 * bp * log_mean.exp()
    };
    (score, precisions, bp)
}

// ---------------------------------------------------------------- helpers

pub fn random_tags<R: Rng>(rng: &mut R, len: usize, labels: &[&str]) -> Vec<String> {
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => "O".to_string(),
            1 => format!("B-{}", labels[rng.gen_range(0..labels.len())]),
            _ => format!("I-{}", labels[rng.gen_range(0..labels.len())]),
        })
        .collect()
}

pub fn random_sentence<R: Rng>(rng: &mut R, len: usize, vocab: &[&str]) -> Vec<String> {
    (0..len)
        .map(|_| vocab[rng.gen_range(0..vocab.len())].to_string())
        .collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
