//! Precision, recall and F-measure over raw counts.
//!
//! Zero denominators follow the usual scorer convention: a ratio whose
//! denominator is zero is 1.0 (nothing retrieved means no wrong answers,
//! nothing relevant means nothing missed).

use alloc::format;

use crate::{Error, Result};

/// Precision, recall and F1 as fractions in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// `num / den`, or 1.0 when `den == 0`.
pub fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// Weighted harmonic mean of precision and recall; 0 when both are 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den > 0.0 {
        (1.0 + b2) * precision * recall / den
    } else {
        0.0
    }
}

/// Scores `tp` true positives out of `retrieved` system units and `relevant`
/// gold units.
pub fn prf(tp: usize, retrieved: usize, relevant: usize) -> Result<Prf> {
    if tp > retrieved || tp > relevant {
        return Err(Error::Counts(format!(
            "true positives ({tp}) exceed retrieved ({retrieved}) or relevant ({relevant})"
        )));
    }
    let precision = ratio(tp, retrieved);
    let recall = ratio(tp, relevant);
    Ok(Prf {
        precision,
        recall,
        f1: f_beta(precision, recall, 1.0),
    })
}
