//! Parameter tuples, the roots of `L_k X^k + ... + L_1 X - 1`, and the
//! coefficients `λ_{j,i}` of the closed form `l_{n,i} = Σ_j λ_{j,i} β_j^{-n}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::counts::CountsTable;
use crate::error::{Error, Result};

/// Maximum `|p(β)|` accepted for the dominant root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-12;
/// Conjugate roots must satisfy `|β_j| > 1 + UNIT_CIRCLE_MARGIN`.
pub const UNIT_CIRCLE_MARGIN: f64 = 1e-9;
/// Minimum distance between two distinct roots.
pub const ROOT_SEPARATION: f64 = 1e-8;
/// Maximum relative error of the closed form on the reconstruction window.
pub const LAMBDA_RESIDUAL_TOL: f64 = 1e-6;

/// The splitting pattern `(L_1, ..., L_k)`.
///
/// Construction only checks the coefficient constraints; the root condition
/// is checked by [`validate_params`] / [`solve_spectral`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Params {
    coeffs: Vec<u32>,
}

impl Params {
    pub fn new(coeffs: Vec<u32>) -> Result<Self> {
        let (first, last) = match (coeffs.first(), coeffs.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::EmptyTuple),
        };
        if first == 0 || last == 0 {
            return Err(Error::ZeroEndpoint);
        }
        let sum: u64 = coeffs.iter().map(|&c| c as u64).sum();
        if sum < 2 {
            return Err(Error::DegenerateAlphabet { sum });
        }
        Ok(Params { coeffs })
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `L_i` for `i = 1..=k`, zero outside that range.
    pub fn l(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.coeffs.get(i - 1).copied().unwrap_or(0)
    }

    /// `L_1 + ... + L_m`.
    pub fn partial_sum(&self, m: usize) -> u64 {
        self.coeffs.iter().take(m).map(|&c| c as u64).sum()
    }

    /// Number of pieces in one split, `L_1 + ... + L_k`.
    pub fn pieces(&self) -> u64 {
        self.partial_sum(self.k())
    }

    /// `L_1 ≥ L_2 ≥ ... ≥ L_k > 0`, a sufficient condition for the root condition.
    pub fn is_monotone(&self) -> bool {
        self.coeffs.windows(2).all(|w| w[0] >= w[1])
    }

    /// Evaluates `L_k x^k + ... + L_1 x - 1` and its derivative.
    fn eval(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c as f64;
        }
        // p currently holds L_1 + L_2 x + ...; multiply by x
        (p * x - 1.0, dp * x + p)
    }

    fn eval_complex(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p * z - 1.0, dp * z + p)
    }
}

impl FromStr for Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Params::new(coeffs)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Table `λ_{j,i}` for root index `j = 0..k` (root 0 is `β`) and `i = 0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    k: usize,
    data: Vec<Complex64>,
}

impl LambdaTable {
    pub fn get(&self, j: usize, i: usize) -> Complex64 {
        self.data[j * (self.k + 1) + i]
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Roots and closed-form coefficients for a parameter tuple.
#[derive(Debug, Clone)]
pub struct Spectral {
    params: Params,
    beta: f64,
    conjugates: Vec<Complex64>,
    roots: Vec<Complex64>,
    lambdas: LambdaTable,
    residual: f64,
}

impl Spectral {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// The unique root of `L_k X^k + ... + L_1 X - 1` in `(0,1)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `β_2, ..., β_k`.
    pub fn conjugates(&self) -> &[Complex64] {
        &self.conjugates
    }

    /// All roots, `β` first.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// `λ_{j,i}`, `j` indexing [`roots`](Self::roots).
    pub fn lambda(&self, j: usize, i: usize) -> Complex64 {
        self.lambdas.get(j, i)
    }

    pub fn lambdas(&self) -> &LambdaTable {
        &self.lambdas
    }

    /// Max relative reconstruction error of `l_{n,i}` over `n ≤ k+10`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `|p(β)|`.
    pub fn root_residual(&self) -> f64 {
        self.params.eval(self.beta).0.abs()
    }
}

/// Checks the coefficient constraints and the root condition.
pub fn validate_params(coeffs: &[u32]) -> Result<Params> {
    let params = Params::new(coeffs.to_vec())?;
    solve_spectral(&params)?;
    Ok(params)
}

/// Finds `β` by bisection and Newton on `(0,1)`.
fn dominant_root(params: &Params) -> f64 {
    // p(0) = -1 and p(1) = ΣL - 1 > 0; p is increasing on (0,1)
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if params.eval(mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let (p, dp) = params.eval(x);
        let next = x - p / dp;
        if !(next > 0.0 && next < 1.0) || params.eval(next).0.abs() >= p.abs() {
            break;
        }
        x = next;
    }
    x
}

fn polish(params: &Params, mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = params.eval_complex(z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if params.eval_complex(next).0.norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// All roots of `L_k X^k + ... + L_1 X - 1` as reciprocals of the eigenvalues of
/// the companion matrix of `X^k - L_1 X^{k-1} - ... - L_k`.
fn companion_roots(params: &Params) -> Vec<Complex64> {
    let k = params.k();
    let mut companion = DMatrix::<f64>::zeros(k, k);
    for (col, &c) in params.coeffs().iter().enumerate() {
        companion[(0, col)] = c as f64;
    }
    for row in 1..k {
        companion[(row, row - 1)] = 1.0;
    }
    companion.complex_eigenvalues().iter().map(|mu| Complex64::new(1.0, 0.0) / Complex64::new(mu.re, mu.im)).collect()
}

/// Solves the `k` Vandermonde-type systems `Σ_j λ_{j,i} β_j^{-n} = l_{n,i}`,
/// `n = 0..k`, for every `i = 0..=k`.
pub fn solve_lambdas(roots: &[Complex64], counts: &CountsTable) -> Result<LambdaTable> {
    let k = roots.len();
    let vandermonde = DMatrix::from_fn(k, k, |n, j| roots[j].powi(-(n as i32)));
    let lu = vandermonde.lu();
    let mut data = vec![Complex64::new(0.0, 0.0); k * (k + 1)];
    for i in 0..=k {
        let rhs = DMatrix::from_fn(k, 1, |n, _| Complex64::new(counts.l(n, i).to_f64().unwrap_or(f64::INFINITY), 0.0));
        let sol = lu.solve(&rhs).ok_or(Error::IllConditioned { residual: f64::INFINITY })?;
        for j in 0..k {
            data[j * (k + 1) + i] = sol[(j, 0)];
        }
    }
    Ok(LambdaTable { k, data })
}

/// Max over `n ≤ n_max`, `i ≤ k` of `|Σ_j λ_{j,i} β_j^{-n} - l_{n,i}| / max(1, l_{n,i})`.
pub fn reconstruction_residual(roots: &[Complex64], lambdas: &LambdaTable, counts: &CountsTable, n_max: usize) -> f64 {
    let k = roots.len();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for i in 0..=k {
            let approx: Complex64 = (0..k).map(|j| lambdas.get(j, i) * roots[j].powi(-(n as i32))).sum();
            let exact = counts.l(n, i).to_f64().unwrap_or(f64::INFINITY);
            let err = (approx - exact).norm() / exact.max(1.0);
            worst = worst.max(err);
        }
    }
    worst
}

/// Root finding and `λ` solve for a parameter tuple.
pub fn solve_spectral(params: &Params) -> Result<Spectral> {
    let k = params.k();
    let beta = dominant_root(params);

    let mut candidates = companion_roots(params);
    let closest = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - beta).norm();
            let db = (b.1 - beta).norm();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .expect("k >= 1 eigenvalues");
    candidates.swap_remove(closest);
    let mut conjugates: Vec<Complex64> = candidates.into_iter().map(|z| polish(params, z)).collect();
    conjugates.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));

    if let Some(bad) = conjugates.iter().find(|z| z.norm() <= 1.0 + UNIT_CIRCLE_MARGIN) {
        return Err(Error::RootConditionViolated { root: format!("{bad}"), modulus: bad.norm() });
    }

    let mut roots = Vec::with_capacity(k);
    roots.push(Complex64::new(beta, 0.0));
    roots.extend_from_slice(&conjugates);
    let mut separation = f64::INFINITY;
    for a in 0..k {
        for b in a + 1..k {
            separation = separation.min((roots[a] - roots[b]).norm());
        }
    }
    if separation < ROOT_SEPARATION {
        return Err(Error::MultipleRoot { separation });
    }

    let window = k + 10;
    let counts = CountsTable::new(params, window);
    let lambdas = solve_lambdas(&roots, &counts)?;
    let residual = reconstruction_residual(&roots, &lambdas, &counts, window);
    if residual.is_nan() || residual > LAMBDA_RESIDUAL_TOL {
        return Err(Error::IllConditioned { residual });
    }
    let lead = lambdas.get(0, 0);
    if lead.re.is_nan() || lead.re <= 0.0 || lead.im.abs() > LAMBDA_RESIDUAL_TOL * lead.re {
        return Err(Error::IllConditioned { residual: lead.im.abs() });
    }

    Ok(Spectral { params: params.clone(), beta, conjugates, roots, lambdas, residual })
}
