//! Floating-point shadow of the exact code: CP alternating least squares, border rank
//! probes under a cap on term norms, and residuals of explicit degenerations.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{independent_subset, RationalMatrix};
use crate::rational::{to_f64, Q};
use crate::segre::CurveJet;
use crate::tensor::{Rank1Term, Tensor3};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatTensor {
    pub dims: (usize, usize, usize),
    pub data: Vec<f64>,
}

impl FloatTensor {
    pub fn new(dims: (usize, usize, usize), data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::Dimension(format!("{} entries for dims {:?}", data.len(), dims)));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Degenerate("non-finite entry".into()));
        }
        Ok(FloatTensor { dims, data })
    }

    pub fn from_exact(t: &Tensor3) -> Self {
        FloatTensor { dims: t.dims(), data: t.entries().iter().map(to_f64).collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dims.1 + j) * self.dims.2 + k]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Moves factor `perm[n]` into slot n.
    pub fn permute(&self, perm: [usize; 3]) -> FloatTensor {
        let d = [self.dims.0, self.dims.1, self.dims.2];
        let nd = (d[perm[0]], d[perm[1]], d[perm[2]]);
        let mut data = vec![0.0; self.data.len()];
        for i in 0..d[0] {
            for j in 0..d[1] {
                for k in 0..d[2] {
                    let idx = [i, j, k];
                    let (x, y, z) = (idx[perm[0]], idx[perm[1]], idx[perm[2]]);
                    data[(x * nd.1 + y) * nd.2 + z] = self.get(i, j, k);
                }
            }
        }
        FloatTensor { dims: nd, data }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatTerm {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl FloatTerm {
    pub fn norm(&self) -> f64 {
        let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        n(&self.a) * n(&self.b) * n(&self.c)
    }
}

pub fn float_terms(terms: &[Rank1Term]) -> Vec<FloatTerm> {
    terms
        .iter()
        .map(|t| FloatTerm {
            a: t.a.iter().map(|x| to_f64(&(x * &t.coeff))).collect(),
            b: t.b.iter().map(to_f64).collect(),
            c: t.c.iter().map(to_f64).collect(),
        })
        .collect()
}

/// ‖T − Σ terms‖ / ‖T‖, recomputed entry by entry.
pub fn relative_residual(t: &FloatTensor, terms: &[FloatTerm]) -> f64 {
    let (da, db, dc) = t.dims;
    let mut s = 0.0;
    for i in 0..da {
        for j in 0..db {
            for k in 0..dc {
                let model: f64 = terms.iter().map(|u| u.a[i] * u.b[j] * u.c[k]).sum();
                let d = t.get(i, j, k) - model;
                s += d * d;
            }
        }
    }
    s.sqrt() / t.norm().max(f64::MIN_POSITIVE)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlsConfig {
    pub rank: usize,
    pub max_sweeps: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub restarts: usize,
    pub ridge: f64,
    /// Upper bound on ‖a‖‖b‖‖c‖ for every term.
    pub cap: Option<f64>,
}

impl AlsConfig {
    pub fn new(rank: usize) -> Self {
        AlsConfig { rank, max_sweeps: 500, tolerance: 1e-12, seed: 0, restarts: 1, ridge: 0.0, cap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub seed: u64,
    pub residual: f64,
    pub sweeps: usize,
    pub max_term_norm: f64,
    pub max_factor_entry: f64,
    pub jitter_restarts: usize,
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub rank: usize,
    pub cap: Option<f64>,
    pub best_residual: f64,
    pub best_seed: u64,
    pub residuals: Vec<f64>,
    pub sweeps: Vec<usize>,
    pub max_factor_entry: f64,
    pub max_term_norm: f64,
    pub jitter_restarts: usize,
}

type Factors = [DMatrix<f64>; 3];

fn random_factors(dims: (usize, usize, usize), r: usize, rng: &mut ChaCha8Rng) -> Factors {
    let mut m = |n: usize| DMatrix::from_fn(n, r, |_, _| rng.gen_range(-1.0..1.0));
    [m(dims.0), m(dims.1), m(dims.2)]
}

fn factors_from_terms(terms: &[FloatTerm]) -> Factors {
    let r = terms.len();
    let col = |f: fn(&FloatTerm) -> &Vec<f64>| {
        let n = f(&terms[0]).len();
        DMatrix::from_fn(n, r, |i, s| f(&terms[s])[i])
    };
    [col(|t| &t.a), col(|t| &t.b), col(|t| &t.c)]
}

fn terms_from_factors(f: &Factors) -> Vec<FloatTerm> {
    (0..f[0].ncols())
        .map(|s| FloatTerm {
            a: f[0].column(s).iter().copied().collect(),
            b: f[1].column(s).iter().copied().collect(),
            c: f[2].column(s).iter().copied().collect(),
        })
        .collect()
}

/// Unfolding along `mode` with columns ordered by the remaining two indices.
fn unfold(t: &FloatTensor, mode: usize) -> DMatrix<f64> {
    let (da, db, dc) = t.dims;
    match mode {
        0 => DMatrix::from_fn(da, db * dc, |i, jk| t.get(i, jk / dc, jk % dc)),
        1 => DMatrix::from_fn(db, da * dc, |j, ik| t.get(ik / dc, j, ik % dc)),
        _ => DMatrix::from_fn(dc, da * db, |k, ij| t.get(ij / db, ij % db, k)),
    }
}

fn khatri_rao(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let r = u.ncols();
    DMatrix::from_fn(u.nrows() * v.nrows(), r, |row, s| u[(row / v.nrows(), s)] * v[(row % v.nrows(), s)])
}

/// Equalizes the three column norms of every term and scales terms down to the cap.
fn balance(f: &mut Factors, cap: Option<f64>) {
    for s in 0..f[0].ncols() {
        let norms: Vec<f64> = f.iter().map(|m| m.column(s).norm()).collect();
        let prod: f64 = norms.iter().product();
        if prod == 0.0 || !prod.is_finite() {
            continue;
        }
        let target = cap.map_or(prod, |c| prod.min(c)).cbrt();
        for (m, n) in f.iter_mut().zip(&norms) {
            let scale = target / n;
            m.column_mut(s).scale_mut(scale);
        }
    }
}

fn model_residual(unf0: &DMatrix<f64>, f: &Factors, tnorm: f64) -> f64 {
    let approx = &f[0] * khatri_rao(&f[1], &f[2]).transpose();
    (unf0 - approx).norm() / tnorm.max(f64::MIN_POSITIVE)
}

const MAX_STEP: f64 = 64.0;

/// Column-by-column least squares for one factor matrix under the term-norm cap. Each
/// column update is exact: the unconstrained optimum projected onto the ball
/// ‖u‖ ≤ cap / ‖k‖, where k is the matching Khatri-Rao column.
fn capped_columns(x: &DMatrix<f64>, kr: &DMatrix<f64>, u: &mut DMatrix<f64>, cap: f64, ridge: f64) {
    const PASSES: usize = 2;
    let mut resid = x - &*u * kr.transpose();
    for _ in 0..PASSES {
        for s in 0..u.ncols() {
            let k = kr.column(s);
            let kk = k.norm_squared();
            if kk == 0.0 {
                continue;
            }
            let old = u.column(s).clone_owned();
            resid += &old * k.transpose();
            let mut new = &resid * k / (kk + ridge);
            let bound = cap / kk.sqrt();
            let n = new.norm();
            if n > bound {
                new *= bound / n;
            }
            resid -= &new * k.transpose();
            u.set_column(s, &new);
        }
    }
}

/// One ALS run from the given factors.
fn run(t: &FloatTensor, cfg: &AlsConfig, mut f: Factors, seed: u64) -> (Factors, RunStats) {
    let unf = [unfold(t, 0), unfold(t, 1), unfold(t, 2)];
    let tnorm = t.norm();
    let r = cfg.rank;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut history = vec![model_residual(&unf[0], &f, tnorm)];
    let mut jitter = 0usize;
    let mut sweeps = 0usize;
    let mut step = 1.0;
    while sweeps < cfg.max_sweeps && *history.last().expect("nonempty") > cfg.tolerance {
        let before = (sweeps > 0).then(|| f.clone());
        for mode in 0..3 {
            let (u, v) = match mode {
                0 => (&f[1], &f[2]),
                1 => (&f[0], &f[2]),
                _ => (&f[0], &f[1]),
            };
            let kr = khatri_rao(u, v);
            let mut gram = (u.transpose() * u).component_mul(&(v.transpose() * v));
            for s in 0..r {
                gram[(s, s)] += cfg.ridge;
            }
            let rhs = (&unf[mode] * &kr).transpose();
            let solved = gram.clone().cholesky().map(|ch| ch.solve(&rhs)).or_else(|| gram.lu().solve(&rhs));
            let within_cap = |sol: &DMatrix<f64>| {
                cfg.cap.is_none_or(|c| (0..r).all(|s| sol.row(s).norm() * kr.column(s).norm() <= c))
            };
            match solved {
                Some(sol) if sol.iter().all(|x| x.is_finite()) && within_cap(&sol) => f[mode] = sol.transpose(),
                Some(sol) if sol.iter().all(|x| x.is_finite()) => {
                    let c = cfg.cap.expect("cap violated");
                    capped_columns(&unf[mode], &kr, &mut f[mode], c, cfg.ridge);
                }
                _ => {
                    jitter += 1;
                    for m in f.iter_mut() {
                        m.iter_mut().for_each(|x| *x += 1e-3 * rng.gen_range(-1.0..1.0));
                    }
                }
            }
        }
        balance(&mut f, cfg.cap);
        sweeps += 1;
        let mut res = model_residual(&unf[0], &f, tnorm);
        // extrapolate along the last sweep's step, kept only when it lowers the residual
        if let Some(prev_f) = &before {
            let mut g: Factors = [0, 1, 2].map(|m| &f[m] + (&f[m] - &prev_f[m]) * step);
            balance(&mut g, cfg.cap);
            let rg = model_residual(&unf[0], &g, tnorm);
            if rg.is_finite() && rg < res {
                f = g;
                res = rg;
                step = (step * 2.0).min(MAX_STEP);
            } else {
                step = 1.0;
            }
        }
        let prev = *history.last().expect("nonempty");
        history.push(res);
        if cfg.cap.is_none() && cfg.ridge == 0.0 && (prev - res).abs() <= 1e-15 * prev.max(1e-300) && res > cfg.tolerance {
            // stalled exactly; further sweeps cannot move
            break;
        }
    }
    let terms = terms_from_factors(&f);
    let stats = RunStats {
        seed,
        residual: *history.last().expect("nonempty"),
        sweeps,
        max_term_norm: terms.iter().map(FloatTerm::norm).fold(0.0, f64::max),
        max_factor_entry: f.iter().flat_map(|m| m.iter()).fold(0.0f64, |acc, x| acc.max(x.abs())),
        jitter_restarts: jitter,
        history,
    };
    (f, stats)
}

fn check_config(t: &FloatTensor, cfg: &AlsConfig) -> Result<(), Error> {
    let (da, db, dc) = t.dims;
    if cfg.rank == 0 || cfg.tolerance <= 0.0 || cfg.ridge < 0.0 || cfg.restarts == 0 {
        return Err(Error::Precondition("rank ≥ 1, restarts ≥ 1, tolerance > 0 and ridge ≥ 0 required".into()));
    }
    if da == 0 || db == 0 || dc == 0 || cfg.rank > (da * db).min(da * dc).min(db * dc) {
        return Err(Error::Precondition(format!("rank {} too large for dims {:?}", cfg.rank, t.dims)));
    }
    Ok(())
}

fn report(cfg: &AlsConfig, runs: &[RunStats]) -> ProbeReport {
    let best = runs
        .iter()
        .min_by(|x, y| x.residual.total_cmp(&y.residual))
        .expect("at least one restart");
    ProbeReport {
        rank: cfg.rank,
        cap: cfg.cap,
        best_residual: best.residual,
        best_seed: best.seed,
        residuals: runs.iter().map(|s| s.residual).collect(),
        sweeps: runs.iter().map(|s| s.sweeps).collect(),
        max_factor_entry: runs.iter().map(|s| s.max_factor_entry).fold(0.0, f64::max),
        max_term_norm: runs.iter().map(|s| s.max_term_norm).fold(0.0, f64::max),
        jitter_restarts: runs.iter().map(|s| s.jitter_restarts).sum(),
    }
}

/// Rank-r CP approximation by ALS from `cfg.restarts` random starts (seeds seed, seed+1,
/// …). Returns the best terms and a report ordered by seed.
pub fn als(t: &FloatTensor, cfg: &AlsConfig) -> Result<(Vec<FloatTerm>, ProbeReport), Error> {
    check_config(t, cfg)?;
    let results: Vec<(Factors, RunStats)> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            run(t, cfg, random_factors(t.dims, cfg.rank, &mut rng), seed)
        })
        .collect();
    let stats: Vec<RunStats> = results.iter().map(|(_, s)| s.clone()).collect();
    let rep = report(cfg, &stats);
    let best = results
        .into_iter()
        .find(|(_, s)| s.seed == rep.best_seed)
        .map(|(f, _)| terms_from_factors(&f))
        .expect("best run present");
    Ok((best, rep))
}

/// A single ALS run started from the given terms.
pub fn als_from(t: &FloatTensor, cfg: &AlsConfig, init: &[FloatTerm]) -> Result<(Vec<FloatTerm>, RunStats), Error> {
    check_config(t, cfg)?;
    if init.len() != cfg.rank {
        return Err(Error::Dimension(format!("{} initial terms for rank {}", init.len(), cfg.rank)));
    }
    let (f, s) = run(t, cfg, factors_from_terms(init), cfg.seed);
    Ok((terms_from_factors(&f), s))
}

/// Runs `als` once per cap, restarting from the same seeds each time.
pub fn border_rank_probe(t: &FloatTensor, cfg: &AlsConfig, caps: &[f64]) -> Result<Vec<ProbeReport>, Error> {
    caps.iter()
        .map(|&c| {
            let cfg = AlsConfig { cap: Some(c), ..cfg.clone() };
            als(t, &cfg).map(|(_, r)| r)
        })
        .collect()
}

/// Least-squares slope of log y against log x over the points with y > 0.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, &y)| y > 0.0).map(|(&x, &y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationSeries {
    pub ts: Vec<f64>,
    pub residuals: Vec<f64>,
    /// None when every residual is zero.
    pub slope: Option<f64>,
}

fn eval_jet(jet: &CurveJet, t: &Q) -> Vec<Q> {
    let mut acc = jet.coefficients.last().expect("nonempty jet").entries().to_vec();
    for c in jet.coefficients.iter().rev().skip(1) {
        for (a, x) in acc.iter_mut().zip(c.entries()) {
            *a = &*a * t + x;
        }
    }
    acc
}

/// Distance from T to span{p₁(t),…,p_r(t)} at each grid value, with the projection
/// computed exactly and only the final norm floated. The curves are evaluated as
/// polynomials from their jets.
pub fn degeneration_residual(curves: &[CurveJet], target: &Tensor3, ts: &[Q]) -> Result<DegenerationSeries, Error> {
    if curves.iter().any(|c| c.dims() != target.dims()) {
        return Err(Error::Dimension("curves and target in different spaces".into()));
    }
    let mut residuals = Vec::with_capacity(ts.len());
    for t in ts {
        let pts: Vec<Vec<Q>> = curves.iter().map(|c| eval_jet(c, t)).collect();
        let basis = independent_subset(&pts);
        let x = target.entries();
        let res = if basis.is_empty() {
            x.to_vec()
        } else {
            let m = RationalMatrix::from_rows(&basis);
            let gram = m.mul(&m.transpose());
            let rhs = m.mul_vec(x);
            let w = gram.inverse().expect("independent rows give an invertible Gram matrix").mul_vec(&rhs);
            let proj = m.transpose().mul_vec(&w);
            x.iter().zip(&proj).map(|(a, b)| a - b).collect()
        };
        let n2: Q = res.iter().map(|v| v * v).sum();
        residuals.push(to_f64(&n2).sqrt());
    }
    let tf: Vec<f64> = ts.iter().map(to_f64).collect();
    let slope = log_log_slope(&tf, &residuals);
    Ok(DegenerationSeries { ts: tf, residuals, slope })
}
