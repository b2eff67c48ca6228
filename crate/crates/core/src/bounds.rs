//! Explicit discrepancy bounds and their constants.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{LambdaTable, Params, Spectral};

/// Levels scanned when locating the threshold `N₀`.
const MAX_THRESHOLD_LEVEL: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Classical,
    Generalized,
}

/// Constants printed alongside the worked examples, kept for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedConstants {
    pub main_coeff: f64,
    pub additive_coeff: f64,
}

pub fn printed_constants(kind: BoundKind, params: &[u32]) -> Option<PrintedConstants> {
    let (main_coeff, additive_coeff) = match (kind, params) {
        (BoundKind::Classical, [1, 1]) => (2.366, 3.139),
        (BoundKind::Classical, [10, 1]) => (8.66, 22.02),
        (BoundKind::Generalized, [2, 1, 1]) => (51.4562, 122.5173),
        _ => return None,
    };
    Some(PrintedConstants { main_coeff, additive_coeff })
}

/// `D_N ≤ main_coeff · log_term(N) / N + additive_coeff / N` for `N ≥ n0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub params: Vec<u32>,
    pub main_coeff: f64,
    pub additive_coeff: f64,
    /// `"log N"` or `"log(N+1)"`.
    pub log_term: &'static str,
    pub r_tilde: f64,
    pub n0: u64,
    pub printed: Option<PrintedConstants>,
}

impl BoundReport {
    pub fn log_term_at(&self, n: u64) -> f64 {
        match self.kind {
            BoundKind::Classical => (n as f64).ln(),
            BoundKind::Generalized => (n as f64).ln_1p(),
        }
    }

    pub fn value_at(&self, n: u64) -> f64 {
        let nf = n as f64;
        self.main_coeff * self.log_term_at(n) / nf + self.additive_coeff / nf
    }

    /// Whether `N` is in the range the bound is proved for.
    pub fn certified(&self, n: u64) -> bool {
        n >= self.n0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalIngredients {
    pub l: u32,
    pub s: u32,
    pub beta: f64,
    pub tau1: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub r_tilde: f64,
    /// `L ≥ S`, the hypothesis of the classical bound.
    pub hypothesis_holds: bool,
}

pub fn classical_ingredients(l: u32, s: u32) -> Result<ClassicalIngredients> {
    if l == 0 || s == 0 {
        return Err(Error::InvalidClassicalParams(format!("L={l}, S={s}: both must be positive")));
    }
    let (lf, sf) = (l as f64, s as f64);
    let root = (lf * lf + 4.0 * sf).sqrt();
    // rationalised forms avoid cancellation for large L
    let beta = 2.0 / (lf + root);
    let lambda1 = sf * beta / root;
    let tau1 = lambda1 - sf / root;
    let lambda0 = (lf + root) / (2.0 * root);
    let r_tilde = tau1.abs().max((tau1 + (lf + sf - 2.0) * lambda1).abs());
    Ok(ClassicalIngredients { l, s, beta, tau1, lambda0, lambda1, r_tilde, hypothesis_holds: l >= s })
}

pub fn classical_bound(l: u32, s: u32) -> Result<BoundReport> {
    let ing = classical_ingredients(l, s)?;
    if !ing.hypothesis_holds {
        // S β < 1 fails exactly when S > L
        return Err(Error::InvalidClassicalParams(format!("L={l}, S={s}: the bound needs L >= S")));
    }
    let core = (2.0 * l as f64 + s as f64 - 2.0) * (ing.r_tilde / (1.0 - s as f64 * ing.beta) + 1.0);
    Ok(BoundReport {
        kind: BoundKind::Classical,
        params: vec![l, s],
        main_coeff: core / ing.beta.ln().abs(),
        additive_coeff: core + 2.0,
        log_term: "log N",
        r_tilde: ing.r_tilde,
        n0: 1,
        printed: printed_constants(BoundKind::Classical, &[l, s]),
    })
}

/// `main_coeff(L, S) / (2L / log L)`.
pub fn asymptotic_ratio(l: u32, s: u32) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidClassicalParams(format!("L={l}: need L >= 2")));
    }
    let report = classical_bound(l, s)?;
    let lf = l as f64;
    Ok(report.main_coeff / (2.0 * lf / lf.ln()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedIngredients {
    pub beta: f64,
    pub lambda10: f64,
    /// `Λ_j` for each conjugate, in root order.
    pub caps: Vec<f64>,
    pub r_tilde: f64,
}

/// Ingredients from an arbitrary root list (`β` first) and its `λ` table.
pub fn generalized_ingredients_from(
    params: &Params,
    roots: &[Complex64],
    lambdas: &LambdaTable,
) -> GeneralizedIngredients {
    let k = params.k();
    let extra = params.pieces() as f64 - 2.0;
    let lambda10 = lambdas.get(0, 0).norm();
    let mut caps = Vec::with_capacity(k.saturating_sub(1));
    let mut r_tilde = 1.0 + lambda10;
    for (j, root) in roots.iter().enumerate().skip(1) {
        let first = lambdas.get(j, 1).norm();
        let mut partial = first;
        let mut best = f64::NEG_INFINITY;
        for ell in 2..=k {
            partial += lambdas.get(j, ell).norm();
            best = best.max((partial + extra * first).abs());
        }
        let cap = best / (1.0 - 1.0 / root.norm());
        caps.push(cap);
        r_tilde += 2.0 * cap + lambdas.get(j, 0).norm();
    }
    GeneralizedIngredients { beta: roots[0].re, lambda10, caps, r_tilde }
}

pub fn generalized_ingredients(spectral: &Spectral) -> GeneralizedIngredients {
    generalized_ingredients_from(spectral.params(), spectral.roots(), spectral.lambdas())
}

/// `(main, additive)` coefficients for the given ingredients.
pub fn generalized_coefficients(params: &Params, ing: &GeneralizedIngredients) -> (f64, f64) {
    let coverage = 2.0 * params.l(1) as f64 + params.coeffs()[1..].iter().map(|&c| c as f64).sum::<f64>() - 2.0;
    let main = coverage * ing.r_tilde / ing.beta.ln().abs();
    let shift = -(ing.lambda10 * ing.beta.powi(params.k() as i32)).ln();
    (main, main * shift)
}

/// Smallest level `n₀` with `|λ_{1,0}| β^{-n} - 1 ≤ t_n` for every `n ≥ n₀`.
///
/// Works with `t_n β^n` (bounded) to stay in range. Past the level where
/// `Σ_{j≥2} |λ_{j,0}| |β_j|^{-n} < 1` the inequality holds automatically.
pub fn threshold_level(spectral: &Spectral) -> Result<usize> {
    let params = spectral.params();
    let k = params.k();
    let beta = spectral.beta();
    let lambda10 = spectral.lambda(0, 0).norm();
    let tail = |n: usize| -> f64 {
        spectral
            .roots()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, r)| spectral.lambda(j, 0).norm() * r.norm().powi(-(n as i32)))
            .sum()
    };
    let settled = (0..=MAX_THRESHOLD_LEVEL)
        .find(|&n| tail(n) < 1.0)
        .ok_or_else(|| Error::TooLarge(format!("threshold beyond level {MAX_THRESHOLD_LEVEL}")))?;

    // row[i-1] = l_{n,i} β^n
    let mut row = vec![0.0; k];
    row[0] = 1.0;
    let mut beta_n = 1.0;
    let mut first_ok = 0;
    for n in 0..settled {
        let scaled_t: f64 = row.iter().sum();
        if lambda10 - beta_n > scaled_t {
            first_ok = n + 1;
        }
        let l1 = row[0];
        row =
            (0..k).map(|i| beta * (row.get(i + 1).copied().unwrap_or(0.0) + params.coeffs()[i] as f64 * l1)).collect();
        beta_n *= beta;
    }
    Ok(first_ok)
}

pub fn generalized_bound(spectral: &Spectral, counts_t: impl Fn(usize) -> Option<u64>) -> Result<BoundReport> {
    let params = spectral.params();
    let ing = generalized_ingredients(spectral);
    let (main_coeff, additive_coeff) = generalized_coefficients(params, &ing);
    let level = threshold_level(spectral)?;
    let n0 = counts_t(level).unwrap_or(u64::MAX);
    Ok(BoundReport {
        kind: BoundKind::Generalized,
        params: params.coeffs().to_vec(),
        main_coeff,
        additive_coeff,
        log_term: "log(N+1)",
        r_tilde: ing.r_tilde,
        n0,
        printed: printed_constants(BoundKind::Generalized, params.coeffs()),
    })
}

/// The golden-ratio `β` of `L = S = 1`.
fn golden_beta() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `t_n` times the signed deviation `A([0,b))/t_n - b` of the `n`-th
/// Kakutani-Fibonacci partition, in closed form.
pub fn kakutani_deviation(n: u32) -> f64 {
    let b = golden_beta();
    let m = (-b).powi(n as i32);
    (b - 1.0) / (1.0 + b * b) * (b * b * (1.0 - m) - b + m * b.powi(n as i32) * (1.0 + b) - m)
}

/// `lim_{n→∞} kakutani_deviation(n) = (β - 1)(β² - β) / (1 + β²)`.
pub fn kakutani_limit() -> f64 {
    let b = golden_beta();
    (b - 1.0) * (b * b - b) / (1.0 + b * b)
}

/// Upper constant of the Kakutani-Fibonacci partition deviation.
pub const KAKUTANI_UPPER: f64 = 0.4068;

/// `2 · 0.4068 / |log β|`, the star-discrepancy coefficient for `L = S = 1`.
pub fn carbone_star_coefficient() -> f64 {
    2.0 * KAKUTANI_UPPER / golden_beta().ln().abs()
}
