use crate::corpus::{Alignment, GoldAlignment};
use crate::error::{Error, Result};

/// Alignment error rate pooled over the corpus:
/// `1 - (|A∩S| + |A∩P|) / (|A| + |S|)`, or 0 when `|A| + |S| = 0`.
pub fn aer(pred: &[Alignment], gold: &[GoldAlignment]) -> Result<f64> {
    if pred.len() != gold.len() {
        return Err(Error::mismatch(
            "predicted vs gold alignments",
            pred.len(),
            gold.len(),
        ));
    }
    let (mut a, mut s, mut a_s, mut a_p) = (0usize, 0usize, 0usize, 0usize);
    for (p, g) in pred.iter().zip(gold) {
        a += p.len();
        s += g.sure().len();
        a_s += p.iter().filter(|l| g.sure().contains(l)).count();
        a_p += p.iter().filter(|l| g.possible().contains(l)).count();
    }
    if a + s == 0 {
        return Ok(0.0);
    }
    Ok(1.0 - (a_s + a_p) as f64 / (a + s) as f64)
}
