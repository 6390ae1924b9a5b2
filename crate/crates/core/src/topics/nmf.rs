//! Non-negative matrix factorization with elastic-net regularization.
//!
//! Minimizes
//!
//! ```text
//! F(W, H) = ½‖X − WH‖²_F + α·r·(‖W‖₁ + ‖H‖₁) + ½·α·(1 − r)·(‖W‖²_F + ‖H‖²_F)
//! ```
//!
//! over W, H ≥ 0 with multiplicative updates. Both penalty gradients are
//! nonnegative, so they enter the update denominators:
//!
//! ```text
//! H ← H ⊙ WᵀX ⊘ (WᵀWH + α·r + α·(1 − r)·H)
//! W ← W ⊙ XHᵀ ⊘ (WHHᵀ + α·r + α·(1 − r)·W)
//! ```
//!
//! Each step minimizes a diagonal quadratic majorizer of F in the updated
//! block, so F is non-increasing from one iteration to the next.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tfidf::{CsrMatrix, TermDocMatrix};
use crate::error::{Error, Result};

/// Lower bound applied to update denominators.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// NNDSVD entries below this are zeroed.
const NNDSVD_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    RandomSeeded,
    Nndsvd,
}

impl std::str::FromStr for Init {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nndsvd" => Ok(Init::Nndsvd),
            "random" | "random-seeded" | "random_seeded" => Ok(Init::RandomSeeded),
            other => Err(format!("unknown init `{other}` (nndsvd, random-seeded)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfParams {
    pub k: usize,
    pub alpha: f64,
    pub l1_ratio: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub init: Init,
}

impl Default for NmfParams {
    fn default() -> Self {
        Self {
            k: 5,
            alpha: 0.1,
            l1_ratio: 0.5,
            max_iter: 400,
            tol: 1e-4,
            seed: 0,
            init: Init::Nndsvd,
        }
    }
}

impl NmfParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha", "must be a finite value >= 0"));
        }
        if !(0.0..=1.0).contains(&self.l1_ratio) {
            return Err(Error::invalid("l1_ratio", "must be in [0, 1]"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::invalid("tol", "must be a finite value >= 0"));
        }
        Ok(())
    }

    fn l1(&self) -> f64 {
        self.alpha * self.l1_ratio
    }

    fn l2(&self) -> f64 {
        self.alpha * (1.0 - self.l1_ratio)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmfModel {
    /// Document–topic weights, N × k.
    pub w: DMatrix<f64>,
    /// Topic–term weights, k × V.
    pub h: DMatrix<f64>,
    pub params: NmfParams,
    /// Objective at initialization followed by one value per iteration.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub row_ids: Vec<String>,
}

impl NmfModel {
    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn n_iter(&self) -> usize {
        self.objective_trace.len().saturating_sub(1)
    }

    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace holds the initial objective")
    }
}

pub fn nmf_fit(x: &TermDocMatrix, params: &NmfParams) -> Result<NmfModel> {
    let mut model = fit_matrix(&x.matrix, params)?;
    model.row_ids = x.row_ids.clone();
    Ok(model)
}

/// Factorize a bare sparse matrix; row ids are left empty.
pub fn fit_matrix(x: &CsrMatrix, params: &NmfParams) -> Result<NmfModel> {
    params.validate()?;
    let (n, v) = (x.n_rows, x.n_cols);
    if params.k > n.min(v) {
        return Err(Error::invalid(
            "k",
            format!("k = {} exceeds min(documents, terms) = {}", params.k, n.min(v)),
        ));
    }
    if x.values.iter().any(|&e| !(e.is_finite() && e >= 0.0)) {
        return Err(Error::invalid("X", "entries must be finite and nonnegative"));
    }
    let nonzero_rows = (0..n).filter(|&r| x.row(r).any(|(_, e)| e > 0.0)).count();
    let mut col_used = vec![false; v];
    for (&c, &e) in x.col_idx.iter().zip(&x.values) {
        if e > 0.0 {
            col_used[c] = true;
        }
    }
    let nonzero_cols = col_used.iter().filter(|&&u| u).count();
    if params.k > nonzero_rows.min(nonzero_cols) {
        return Err(Error::invalid(
            "k",
            format!(
                "k = {} exceeds the {} nonzero rows / {} nonzero columns of X",
                params.k, nonzero_rows, nonzero_cols
            ),
        ));
    }

    let (mut w, mut h) = match params.init {
        Init::RandomSeeded => random_init(x, params.k, params.seed),
        Init::Nndsvd => nndsvd_init(x, params.k),
    };

    let mut trace = vec![objective(x, &w, &h, params)];
    let mut converged = false;
    for _ in 0..params.max_iter {
        update_h(x, &w, &mut h, params);
        update_w(x, &mut w, &h, params);
        let current = objective(x, &w, &h, params);
        let previous = *trace.last().expect("nonempty trace");
        trace.push(current);
        if previous <= 0.0 || (previous - current) / previous < params.tol {
            converged = true;
            break;
        }
    }

    Ok(NmfModel {
        w,
        h,
        params: *params,
        objective_trace: trace,
        converged,
        row_ids: Vec::new(),
    })
}

/// F(W, H) for the stated objective.
pub fn objective(x: &CsrMatrix, w: &DMatrix<f64>, h: &DMatrix<f64>, params: &NmfParams) -> f64 {
    let residual = residual_sq(x, w, h);
    let l1 = w.iter().sum::<f64>() + h.iter().sum::<f64>();
    let l2 = w.norm_squared() + h.norm_squared();
    0.5 * residual + params.l1() * l1 + 0.5 * params.l2() * l2
}

/// ‖X − WH‖²_F, accumulated entry by entry.
pub fn residual_sq(x: &CsrMatrix, w: &DMatrix<f64>, h: &DMatrix<f64>) -> f64 {
    let k = w.ncols();
    let mut total = 0.0;
    let mut row = vec![0.0; x.n_cols];
    for r in 0..x.n_rows {
        row.iter_mut().for_each(|e| *e = 0.0);
        for t in 0..k {
            let wt = w[(r, t)];
            if wt == 0.0 {
                continue;
            }
            for (c, slot) in row.iter_mut().enumerate() {
                *slot += wt * h[(t, c)];
            }
        }
        for (c, e) in x.row(r) {
            row[c] -= e;
        }
        total += row.iter().map(|d| d * d).sum::<f64>();
    }
    total
}

/// Wᵀ X, k × V.
fn wt_x(x: &CsrMatrix, w: &DMatrix<f64>) -> DMatrix<f64> {
    let k = w.ncols();
    let mut out = DMatrix::zeros(k, x.n_cols);
    for r in 0..x.n_rows {
        for (c, e) in x.row(r) {
            for t in 0..k {
                out[(t, c)] += w[(r, t)] * e;
            }
        }
    }
    out
}

/// X Hᵀ, N × k.
fn x_ht(x: &CsrMatrix, h: &DMatrix<f64>) -> DMatrix<f64> {
    let k = h.nrows();
    let mut out = DMatrix::zeros(x.n_rows, k);
    for r in 0..x.n_rows {
        for (c, e) in x.row(r) {
            for t in 0..k {
                out[(r, t)] += e * h[(t, c)];
            }
        }
    }
    out
}

fn update_h(x: &CsrMatrix, w: &DMatrix<f64>, h: &mut DMatrix<f64>, params: &NmfParams) {
    let numerator = wt_x(x, w);
    let gram = w.transpose() * w;
    let denominator = &gram * &*h;
    let (l1, l2) = (params.l1(), params.l2());
    for ((hv, &num), &den) in h.iter_mut().zip(numerator.iter()).zip(denominator.iter()) {
        let d = (den + l1 + l2 * *hv).max(DENOMINATOR_FLOOR);
        *hv *= num / d;
    }
}

fn update_w(x: &CsrMatrix, w: &mut DMatrix<f64>, h: &DMatrix<f64>, params: &NmfParams) {
    let numerator = x_ht(x, h);
    let gram = h * h.transpose();
    let denominator = &*w * &gram;
    let (l1, l2) = (params.l1(), params.l2());
    for ((wv, &num), &den) in w.iter_mut().zip(numerator.iter()).zip(denominator.iter()) {
        let d = (den + l1 + l2 * *wv).max(DENOMINATOR_FLOOR);
        *wv *= num / d;
    }
}

/// Uniform entries scaled by `sqrt(mean(X) / k)`, from a seeded ChaCha8 stream.
fn random_init(x: &CsrMatrix, k: usize, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = x.values.iter().sum::<f64>() / (x.n_rows * x.n_cols) as f64;
    let scale = (mean / k as f64).sqrt();
    // fill order is fixed: W row-major, then H row-major
    let mut w = DMatrix::zeros(x.n_rows, k);
    for r in 0..x.n_rows {
        for t in 0..k {
            w[(r, t)] = scale * rng.random::<f64>();
        }
    }
    let mut h = DMatrix::zeros(k, x.n_cols);
    for t in 0..k {
        for c in 0..x.n_cols {
            h[(t, c)] = scale * rng.random::<f64>();
        }
    }
    (w, h)
}

/// Nonnegative double SVD initialization.
fn nndsvd_init(x: &CsrMatrix, k: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let dense = DMatrix::from_fn(x.n_rows, x.n_cols, |r, c| x.get(r, c));
    let svd = dense.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = svd.singular_values;

    // order components by singular value, largest first
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));

    let mut w = DMatrix::zeros(x.n_rows, k);
    let mut h = DMatrix::zeros(k, x.n_cols);
    for (j, &comp) in order.iter().take(k).enumerate() {
        let xs: Vec<f64> = u.column(comp).iter().copied().collect();
        let ys: Vec<f64> = vt.row(comp).iter().copied().collect();
        let sigma = s[comp];
        if j == 0 {
            let root = sigma.sqrt();
            for (r, xv) in xs.iter().enumerate() {
                w[(r, 0)] = root * xv.abs();
            }
            for (c, yv) in ys.iter().enumerate() {
                h[(0, c)] = root * yv.abs();
            }
            continue;
        }
        let split = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
            (
                v.iter().map(|e| e.max(0.0)).collect(),
                v.iter().map(|e| (-e).max(0.0)).collect(),
            )
        };
        let norm = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>().sqrt();
        let (xp, xn) = split(&xs);
        let (yp, yn) = split(&ys);
        let (xpn, xnn, ypn, ynn) = (norm(&xp), norm(&xn), norm(&yp), norm(&yn));
        let (mp, mn) = (xpn * ypn, xnn * ynn);
        let (uu, vv, un, vn, m) = if mp > mn {
            (xp, yp, xpn, ypn, mp)
        } else {
            (xn, yn, xnn, ynn, mn)
        };
        if un == 0.0 || vn == 0.0 {
            continue;
        }
        let lambda = (sigma * m).sqrt();
        for (r, e) in uu.iter().enumerate() {
            w[(r, j)] = lambda * e / un;
        }
        for (c, e) in vv.iter().enumerate() {
            h[(j, c)] = lambda * e / vn;
        }
    }
    w.iter_mut().chain(h.iter_mut()).for_each(|e| {
        if *e < NNDSVD_EPS {
            *e = 0.0;
        }
    });
    (w, h)
}
