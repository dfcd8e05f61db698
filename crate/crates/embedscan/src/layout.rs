//! Graph layout: embed a fuzzy graph into d dimensions by minimizing the
//! cross entropy between graph affinities v_ij and embedding affinities
//! w_ij = (1 + a * |y_i - y_j|^(2b))^-1.
//!
//! The optimizer is the standard stochastic scheme: each edge receives an
//! attractive update with frequency proportional to its affinity
//! (epochs-per-sample), every positive update is paired with a handful of
//! uniformly sampled repulsive updates, gradient components are clipped,
//! and the learning rate decays linearly to zero. With a fixed seed the
//! whole pass is sequential and bit-reproducible.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::FuzzyGraph;
use crate::matrix::Matrix;

/// Embedding-space affinities are clipped to [EPS_W, 1 - EPS_W] inside the
/// cross entropy so absent and saturated edges stay finite.
pub const EPS_W: f64 = 1e-12;

/// Additive floor on squared distances in repulsive updates.
const REPULSION_DIST_FLOOR: f64 = 1e-3;

/// How to initialize coordinates before optimization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitMethod {
    /// Eigenvectors of the symmetric normalized graph Laplacian.
    #[default]
    Spectral,
    /// Uniform in [-10, 10]^d.
    Random,
}

/// Layout parameters. `a` and `b` default to the standard curve constants;
/// `min_dist` is carried as metadata only and never re-fit into a/b.
#[derive(Clone, Debug)]
pub struct LayoutConfig {
    pub dim: usize,
    pub a: f64,
    pub b: f64,
    /// None picks 200 epochs for up to 10^4 points and 500 beyond.
    pub n_epochs: Option<usize>,
    pub negative_samples: usize,
    pub initial_lr: f64,
    pub grad_clip: f64,
    pub min_dist: f64,
    pub init: InitMethod,
    pub seed: u64,
    /// Sequential update stream; reserved switch for update schemes that
    /// trade reproducibility for speed. This implementation is always
    /// deterministic.
    pub deterministic: bool,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            dim: 2,
            a: 1.929,
            b: 0.7915,
            n_epochs: None,
            negative_samples: 5,
            initial_lr: 1.0,
            grad_clip: 4.0,
            min_dist: 0.1,
            init: InitMethod::Spectral,
            seed: 0,
            deterministic: true,
        }
    }
}

impl LayoutConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidParameter("embedding dim must be >= 1".into()));
        }
        if self.a.is_nan() || self.a <= 0.0 || self.b.is_nan() || self.b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "curve parameters must be positive, got a={}, b={}",
                self.a, self.b
            )));
        }
        if let Some(e) = self.n_epochs {
            if e < 1 {
                return Err(Error::InvalidParameter("n_epochs must be >= 1".into()));
            }
        }
        if self.initial_lr.is_nan() || self.initial_lr <= 0.0 {
            return Err(Error::InvalidParameter("initial_lr must be positive".into()));
        }
        if self.grad_clip.is_nan() || self.grad_clip <= 0.0 {
            return Err(Error::InvalidParameter("grad_clip must be positive".into()));
        }
        Ok(())
    }

    pub fn epochs_for(&self, n_obs: usize) -> usize {
        self.n_epochs
            .unwrap_or(if n_obs <= 10_000 { 200 } else { 500 })
    }
}

/// Final coordinates plus the config that produced them.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// n_obs x dim coordinate matrix.
    pub coords: Matrix,
    pub config: LayoutConfig,
    pub epochs_run: usize,
    /// Cross entropy of the final coordinates against the graph.
    pub loss: f64,
    /// Set when spectral initialization failed to converge and the layout
    /// started from random coordinates instead.
    pub init_fell_back: bool,
}

impl Embedding {
    pub fn n_obs(&self) -> usize {
        self.coords.n_rows()
    }

    /// Write one row per point (`y0,...,y{d-1}[,label]`).
    pub fn write_csv(&self, path: impl AsRef<Path>, labels: Option<&[usize]>) -> Result<()> {
        if let Some(l) = labels {
            if l.len() != self.n_obs() {
                return Err(Error::LengthMismatch {
                    left: l.len(),
                    right: self.n_obs(),
                });
            }
        }
        let mut out = String::new();
        for t in 0..self.coords.n_cols() {
            if t > 0 {
                out.push(',');
            }
            let _ = write!(out, "y{t}");
        }
        if labels.is_some() {
            out.push_str(",label");
        }
        out.push('\n');
        for i in 0..self.n_obs() {
            for (t, v) in self.coords.row(i).iter().enumerate() {
                if t > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            if let Some(l) = labels {
                let _ = write!(out, ",{}", l[i]);
            }
            out.push('\n');
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Embedding-space affinity w = (1 + a * |y_i - y_j|^(2b))^-1 in (0, 1].
pub fn low_dim_similarity(yi: &[f64], yj: &[f64], a: f64, b: f64) -> f64 {
    let d2: f64 = yi
        .iter()
        .zip(yj)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    1.0 / (1.0 + a * d2.powf(b))
}

fn ce_term(v: f64, w: f64) -> f64 {
    let w = w.clamp(EPS_W, 1.0 - EPS_W);
    let mut t = 0.0;
    if v > 0.0 {
        t += v * (v / w).ln();
    }
    if v < 1.0 {
        t += (1.0 - v) * ((1.0 - v) / (1.0 - w)).ln();
    }
    t
}

/// Cross entropy between graph affinities and embedding affinities, summed
/// over ordered pairs (symmetric terms counted twice). Absent edges enter
/// with v = 0.
pub fn cross_entropy(graph: &FuzzyGraph, coords: &Matrix, a: f64, b: f64) -> Result<f64> {
    let n = graph.n_obs();
    if coords.n_rows() != n {
        return Err(Error::LengthMismatch {
            left: coords.n_rows(),
            right: n,
        });
    }
    let mut affinities: HashMap<(usize, usize), f64> = HashMap::with_capacity(graph.n_edges());
    for e in graph.edges() {
        affinities.insert((e.i, e.j), e.v);
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = affinities.get(&(i, j)).copied().unwrap_or(0.0);
            let w = low_dim_similarity(coords.row(i), coords.row(j), a, b);
            total += 2.0 * ce_term(v, w);
        }
    }
    Ok(total)
}

/// Analytic gradient of the single-pair cross-entropy term
/// v*ln(v/w) + (1-v)*ln((1-v)/(1-w)) with respect to y_i and y_j.
/// The two gradients are antisymmetric. At exactly coincident points the
/// repulsive direction is undefined and zero is returned.
pub fn ce_edge_gradient(
    yi: &[f64],
    yj: &[f64],
    v: f64,
    a: f64,
    b: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dim = yi.len();
    let r2: f64 = yi
        .iter()
        .zip(yj)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if r2 == 0.0 {
        return (vec![0.0; dim], vec![0.0; dim]);
    }
    let p = a * r2.powf(b);
    let attract = 2.0 * a * b * v * r2.powf(b - 1.0) / (1.0 + p);
    let repel = 2.0 * b * (1.0 - v) / (r2 * (1.0 + p));
    let coeff = attract - repel;
    let gi: Vec<f64> = yi.iter().zip(yj).map(|(x, y)| coeff * (x - y)).collect();
    let gj: Vec<f64> = gi.iter().map(|g| -g).collect();
    (gi, gj)
}

/// Uniform random coordinates in [-10, 10]^d.
pub fn random_init(n_obs: usize, dim: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x7f4a_7c15));
    let mut coords = Matrix::zeros(n_obs, dim);
    for v in coords.values_mut() {
        *v = rng.random::<f64>() * 20.0 - 10.0;
    }
    coords
}

/// Spectral initialization: per connected component, the d eigenvectors of
/// the symmetric normalized Laplacian with smallest nonzero eigenvalues.
/// Components are shifted apart along the first axis, everything is
/// rescaled to max-abs 10, and a small seeded jitter (sd 1e-4) is added.
/// Returns the coordinates and whether the eigensolver failed and random
/// initialization was used instead.
pub fn spectral_init(graph: &FuzzyGraph, dim: usize, seed: u64) -> (Matrix, bool) {
    let n = graph.n_obs();
    let comps = graph.components();
    let adj = graph.adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9));
    let mut coords = Matrix::zeros(n, dim);

    for comp in &comps {
        let m = comp.len();
        if m < 2 {
            continue;
        }
        let d_eff = dim.min(m - 1);
        match component_eigenvectors(comp, &adj, d_eff, &mut rng) {
            Some(vectors) => {
                for (c, vector) in vectors.iter().enumerate() {
                    for (local, &global) in comp.iter().enumerate() {
                        coords.set(global, c, vector[local]);
                    }
                }
            }
            None => {
                // eigen-solve did not converge; restart the whole layout
                // from random coordinates
                return (random_init(n, dim, seed), true);
            }
        }
    }

    // translate components apart along the first axis; the first component
    // keeps its natural position, each later one starts a full range width
    // past the previous maximum
    let mut boundary = f64::NEG_INFINITY;
    for (ci, comp) in comps.iter().enumerate() {
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for &g in comp {
            lo = lo.min(coords.get(g, 0));
            hi = hi.max(coords.get(g, 0));
        }
        let range = (hi - lo).max(1e-3);
        if ci == 0 {
            boundary = hi;
            continue;
        }
        let shift = boundary + range - lo;
        for &g in comp {
            let v = coords.get(g, 0);
            coords.set(g, 0, v + shift);
        }
        boundary = hi + shift;
    }

    // rescale to max-abs 10 and jitter
    let max_abs = coords.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs > 0.0 {
        let scale = 10.0 / max_abs;
        for v in coords.values_mut() {
            *v *= scale;
        }
    }
    for v in coords.values_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *v += 1e-4 * z;
    }
    (coords, false)
}

/// Leading nontrivial eigenvectors of 2I - L_sym on one component, ordered
/// by ascending Laplacian eigenvalue. Krylov depth matters here: blob-like
/// kNN graphs have a near-continuum of leading eigenvalues that stalls
/// plain power iteration, while Lanczos resolves them in a few dozen
/// matvecs. Falls back to a deeper subspace once before giving up.
fn component_eigenvectors(
    comp: &[usize],
    adj: &[Vec<(usize, f64)>],
    d_eff: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<f64>>> {
    let m = comp.len();
    let mut local_of = HashMap::with_capacity(m);
    for (l, &g) in comp.iter().enumerate() {
        local_of.insert(g, l);
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut deg = vec![0.0; m];
    for (li, &g) in comp.iter().enumerate() {
        for &(h, w) in &adj[g] {
            let lj = local_of[&h];
            deg[li] += w;
            if li < lj {
                edges.push((li, lj, w));
            }
        }
    }
    let dinv_sqrt: Vec<f64> = deg.iter().map(|&d| 1.0 / d.sqrt()).collect();
    let mut u0: Vec<f64> = deg.iter().map(|&d| d.sqrt()).collect();
    normalize(&mut u0)?;

    // y = x + D^{-1/2} A D^{-1/2} x, the operator 2I - L_sym
    let apply = |x: &[f64], y: &mut [f64]| {
        y.copy_from_slice(x);
        for &(i, j, w) in &edges {
            y[i] += w * dinv_sqrt[i] * dinv_sqrt[j] * x[j];
            y[j] += w * dinv_sqrt[i] * dinv_sqrt[j] * x[i];
        }
    };

    for depth in [2 * d_eff + 64, 4 * d_eff + 256] {
        let p = depth.min(m - 1);
        if let Some(found) = lanczos_leading(&apply, m, d_eff, p, &u0, rng) {
            return Some(found);
        }
        if p == m - 1 {
            break;
        }
    }
    None
}

/// Ritz pairs accepted at this explicit residual.
const LANCZOS_TOLERANCE: f64 = 1e-4;

/// Lanczos with full reorthogonalization against the deflated vector and
/// the whole Krylov basis. Degenerate breakdowns (invariant subspaces, e.g.
/// repeated eigenvalues) restart with a fresh random direction and a zero
/// coupling, so the tridiagonal matrix stays valid. Returns the leading
/// `d_eff` Ritz vectors once their explicit residuals pass tolerance.
fn lanczos_leading(
    apply: &dyn Fn(&[f64], &mut [f64]),
    m: usize,
    d_eff: usize,
    p: usize,
    u0: &[f64],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut alphas: Vec<f64> = Vec::with_capacity(p);
    let mut betas: Vec<f64> = Vec::with_capacity(p);

    let mut v0: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    orthogonalize(&mut v0, u0, &[], rng)?;
    basis.push(v0);

    let mut w = vec![0.0; m];
    for j in 0..p {
        apply(&basis[j], &mut w);
        let alpha = dot(&w, &basis[j]);
        alphas.push(alpha);
        if basis.len() == m - 1 && j + 1 == m - 1 {
            break;
        }
        if j + 1 == p {
            break;
        }
        // two-pass full reorthogonalization keeps the basis clean
        for _pass in 0..2 {
            let c = dot(&w, u0);
            for (x, u) in w.iter_mut().zip(u0) {
                *x -= c * u;
            }
            for prev in &basis {
                let c = dot(&w, prev);
                for (x, u) in w.iter_mut().zip(prev) {
                    *x -= c * u;
                }
            }
        }
        let beta = dot(&w, &w).sqrt();
        if beta > 1e-10 {
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        } else {
            // invariant subspace found; continue in a fresh direction
            if basis.len() >= m - 1 {
                break;
            }
            let mut fresh: Vec<f64> =
                (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            orthogonalize(&mut fresh, u0, &basis, rng)?;
            betas.push(0.0);
            basis.push(fresh);
        }
    }

    let steps = alphas.len();
    if steps < d_eff {
        return None;
    }
    let mut tri = vec![vec![0.0; steps]; steps];
    for (i, row) in tri.iter_mut().enumerate() {
        row[i] = alphas[i];
    }
    for (i, &b) in betas.iter().take(steps.saturating_sub(1)).enumerate() {
        tri[i][i + 1] = b;
        tri[i + 1][i] = b;
    }
    let (theta, s) = jacobi_eigen(tri);
    let mut order: Vec<usize> = (0..steps).collect();
    order.sort_by(|&x, &y| theta[y].partial_cmp(&theta[x]).unwrap());

    let mut out = Vec::with_capacity(d_eff);
    for &oc in order.iter().take(d_eff) {
        let mut y = vec![0.0; m];
        for (row, base) in basis.iter().take(steps).enumerate() {
            let coef = s[row][oc];
            for (o, x) in y.iter_mut().zip(base) {
                *o += coef * x;
            }
        }
        // explicit residual of the Ritz pair
        apply(&y, &mut w);
        let res: f64 = w
            .iter()
            .zip(&y)
            .map(|(img, x)| (img - theta[oc] * x) * (img - theta[oc] * x))
            .sum::<f64>()
            .sqrt();
        if std::env::var_os("EMBEDSCAN_SPECTRAL_TRACE").is_some() {
            eprintln!("lanczos m={m} p={p} theta={:.6} residual {res:.3e}", theta[oc]);
        }
        if res > LANCZOS_TOLERANCE {
            return None;
        }
        out.push(y);
    }
    Some(out)
}

/// Cyclic Jacobi eigendecomposition of a small dense symmetric matrix.
/// Returns eigenvalues and the corresponding eigenvector matrix (columns).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let q = a.len();
    let mut v = vec![vec![0.0; q]; q];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..q)
            .flat_map(|p| ((p + 1)..q).map(move |r| (p, r)))
            .map(|(p, r)| a[p][r] * a[p][r])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..q {
            for r in (p + 1)..q {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akr) = (row[p], row[r]);
                    row[p] = c * akp - s * akr;
                    row[r] = s * akp + c * akr;
                }
                let row_p = a[p].clone();
                let row_r = a[r].clone();
                for k in 0..q {
                    a[p][k] = c * row_p[k] - s * row_r[k];
                    a[r][k] = s * row_p[k] + c * row_r[k];
                }
                for row in v.iter_mut() {
                    let (vp, vr) = (row[p], row[r]);
                    row[p] = c * vp - s * vr;
                    row[r] = s * vp + c * vr;
                }
            }
        }
    }
    let values = (0..q).map(|i| a[i][i]).collect();
    (values, v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> Option<()> {
    let norm = dot(v, v).sqrt();
    if norm < 1e-300 {
        return None;
    }
    for x in v {
        *x /= norm;
    }
    Some(())
}

/// Project `v` orthogonal to `u0` and every vector in `prev`, then
/// normalize; re-randomize if it degenerates.
fn orthogonalize(
    v: &mut [f64],
    u0: &[f64],
    prev: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
) -> Option<()> {
    for _attempt in 0..5 {
        for _pass in 0..2 {
            let c = dot(v, u0);
            for (x, u) in v.iter_mut().zip(u0) {
                *x -= c * u;
            }
            for p in prev {
                let c = dot(v, p);
                for (x, u) in v.iter_mut().zip(p) {
                    *x -= c * u;
                }
            }
        }
        let norm = dot(v, v).sqrt();
        if norm > 1e-9 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            return Some(());
        }
        for x in v.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
    }
    None
}

/// Optimize the layout of a fuzzy graph.
///
/// An edge with affinity v is attractively updated every max_v/v epochs;
/// each positive update also applies `negative_samples` repulsive updates
/// from each endpoint against uniformly sampled other points. Gradient
/// components are clipped to +-grad_clip and the learning rate decays
/// linearly from `initial_lr` to 0.
pub fn optimize_layout(graph: &FuzzyGraph, config: &LayoutConfig) -> Result<Embedding> {
    config.validate()?;
    let n = graph.n_obs();
    if n == 0 || graph.n_edges() == 0 {
        return Err(Error::InvalidParameter(
            "cannot lay out an empty graph".into(),
        ));
    }
    if config.dim > n {
        return Err(Error::InvalidParameter(format!(
            "embedding dim {} exceeds the number of observations {n}",
            config.dim
        )));
    }
    let n_epochs = config.epochs_for(n);
    let (mut coords, init_fell_back) = match config.init {
        InitMethod::Spectral => spectral_init(graph, config.dim, config.seed),
        InitMethod::Random => (random_init(n, config.dim, config.seed), false),
    };

    let edges = graph.edges();
    let max_v = graph.max_weight();
    let epochs_per_sample: Vec<f64> = edges.iter().map(|e| max_v / e.v).collect();
    let mut next_due: Vec<f64> = vec![0.0; edges.len()];

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x5851_f42d_4c95_7f2d).wrapping_add(0x14057b7e));
    let dim = config.dim;
    let (a, b, clip) = (config.a, config.b, config.grad_clip);
    let buf = coords.values_mut();

    for epoch in 0..n_epochs {
        let alpha = config.initial_lr * (1.0 - epoch as f64 / n_epochs as f64);
        for (ei, e) in edges.iter().enumerate() {
            if next_due[ei] > epoch as f64 {
                continue;
            }
            next_due[ei] += epochs_per_sample[ei];

            // one visit per direction: attraction moves both endpoints,
            // negatives push only the visiting head
            for &(head, partner) in &[(e.i, e.j), (e.j, e.i)] {
                attractive_update(buf, dim, head, partner, a, b, clip, alpha);
                for _ in 0..config.negative_samples {
                    let other = rng.random_range(0..n);
                    if other == head || other == partner {
                        continue;
                    }
                    repulsive_update(buf, dim, head, other, a, b, clip, alpha);
                }
            }
        }
    }

    let loss = cross_entropy(graph, &coords, a, b)?;
    debug_assert!(coords.values().iter().all(|v| v.is_finite()));
    Ok(Embedding {
        coords,
        config: config.clone(),
        epochs_run: n_epochs,
        loss,
        init_fell_back,
    })
}

#[allow(clippy::too_many_arguments)]
fn attractive_update(
    buf: &mut [f64],
    dim: usize,
    i: usize,
    j: usize,
    a: f64,
    b: f64,
    clip: f64,
    alpha: f64,
) {
    let (oi, oj) = (i * dim, j * dim);
    let mut d2 = 0.0;
    for t in 0..dim {
        let diff = buf[oi + t] - buf[oj + t];
        d2 += diff * diff;
    }
    if d2 <= 0.0 {
        return;
    }
    let coeff = -2.0 * a * b * d2.powf(b - 1.0) / (1.0 + a * d2.powf(b));
    for t in 0..dim {
        let g = (coeff * (buf[oi + t] - buf[oj + t])).clamp(-clip, clip);
        buf[oi + t] += alpha * g;
        buf[oj + t] -= alpha * g;
    }
}

#[allow(clippy::too_many_arguments)]
fn repulsive_update(
    buf: &mut [f64],
    dim: usize,
    i: usize,
    j: usize,
    a: f64,
    b: f64,
    clip: f64,
    alpha: f64,
) {
    let (oi, oj) = (i * dim, j * dim);
    let mut d2 = 0.0;
    for t in 0..dim {
        let diff = buf[oi + t] - buf[oj + t];
        d2 += diff * diff;
    }
    let coeff = 2.0 * b / ((REPULSION_DIST_FLOOR + d2) * (1.0 + a * d2.powf(b)));
    for t in 0..dim {
        let g = (coeff * (buf[oi + t] - buf[oj + t])).clamp(-clip, clip);
        buf[oi + t] += alpha * g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FuzzyGraph;

    fn chain_graph() -> FuzzyGraph {
        FuzzyGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn similarity_closed_forms() {
        assert_eq!(low_dim_similarity(&[1.0, 2.0], &[1.0, 2.0], 1.929, 0.7915), 1.0);
        assert!((low_dim_similarity(&[0.0], &[1.0], 1.0, 1.0) - 0.5).abs() < 1e-12);
        let w = low_dim_similarity(&[0.0], &[1.0], 1.929, 0.7915);
        assert!((w - 1.0 / 2.929).abs() < 1e-9);
    }

    #[test]
    fn cross_entropy_zero_when_affinities_match() {
        // coincident endpoints with v = 1: attractive term vanishes
        let g = FuzzyGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let coords = Matrix::from_rows(vec![vec![0.3, -0.1], vec![0.3, -0.1]]).unwrap();
        let c = cross_entropy(&g, &coords, 1.929, 0.7915).unwrap();
        assert!(c.abs() < 1e-9);
    }

    #[test]
    fn cross_entropy_scalar_term_matches_hand_value() {
        // v = 0.5, w = 0.25: term = 0.5 ln 2 + 0.5 ln(0.5/0.75) per direction
        let want = 0.5 * 2f64.ln() + 0.5 * (0.5f64 / 0.75).ln();
        assert!((ce_term(0.5, 0.25) - want).abs() < 1e-12);
        assert!((want - 0.1438).abs() < 1e-4);
    }

    #[test]
    fn cross_entropy_nonnegative_and_size_checked() {
        let g = chain_graph();
        let coords = Matrix::from_rows(vec![vec![0.0], vec![5.0], vec![-3.0]]).unwrap();
        assert!(cross_entropy(&g, &coords, 1.929, 0.7915).unwrap() >= 0.0);
        let wrong = Matrix::zeros(2, 1);
        assert!(cross_entropy(&g, &wrong, 1.929, 0.7915).is_err());
    }

    #[test]
    fn gradient_zero_at_coincident_attractive_pair() {
        let (gi, gj) = ce_edge_gradient(&[1.0, 1.0], &[1.0, 1.0], 1.0, 1.929, 0.7915);
        assert!(gi.iter().all(|&g| g == 0.0));
        assert!(gj.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn gradient_antisymmetric() {
        let (gi, gj) = ce_edge_gradient(&[0.2, -1.0, 3.0], &[1.5, 0.5, 2.0], 0.4, 1.4, 0.9);
        for (a, b) in gi.iter().zip(&gj) {
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let h = 1e-5;
        for _ in 0..100 {
            let dim = 1 + rng.random_range(0..3);
            let yi: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let yj: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let v = 0.05 + 0.9 * rng.random::<f64>();
            let a = 0.5 + 1.5 * rng.random::<f64>();
            let b = 0.6 + 0.6 * rng.random::<f64>();
            let (gi, _) = ce_edge_gradient(&yi, &yj, v, a, b);
            // independent scalar evaluation of the pair term
            let f = |yi: &[f64]| -> f64 {
                let w = low_dim_similarity(yi, &yj, a, b).clamp(EPS_W, 1.0 - EPS_W);
                v * (v / w).ln() + (1.0 - v) * ((1.0 - v) / (1.0 - w)).ln()
            };
            let mut fd = vec![0.0; dim];
            for t in 0..dim {
                let mut plus = yi.clone();
                let mut minus = yi.clone();
                plus[t] += h;
                minus[t] -= h;
                fd[t] = (f(&plus) - f(&minus)) / (2.0 * h);
            }
            let err: f64 = gi
                .iter()
                .zip(&fd)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            let scale: f64 = fd.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-6);
            assert!(err / scale <= 1e-4, "fd mismatch: {gi:?} vs {fd:?}");
        }
    }

    #[test]
    fn spectral_separates_two_components_along_first_axis() {
        let g = FuzzyGraph::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 0.8), (3, 4, 1.0), (4, 5, 0.9)],
        )
        .unwrap();
        let (coords, fell_back) = spectral_init(&g, 2, 7);
        assert!(!fell_back);
        let max_a = (0..3).map(|i| coords.get(i, 0)).fold(f64::MIN, f64::max);
        let min_b = (3..6).map(|i| coords.get(i, 0)).fold(f64::MAX, f64::min);
        assert!(
            max_a < min_b,
            "blocks overlap on axis 0: {max_a} vs {min_b}"
        );
    }

    #[test]
    fn spectral_complete_graph_coordinates_sum_to_zero() {
        let mut edges = Vec::new();
        for i in 0..5usize {
            for j in (i + 1)..5 {
                edges.push((i, j, 1.0));
            }
        }
        let g = FuzzyGraph::from_edges(5, &edges).unwrap();
        let (coords, fell_back) = spectral_init(&g, 1, 3);
        assert!(!fell_back);
        // single component: no translation, so the eigenvector's
        // orthogonality to the constant vector survives rescaling
        let vals: Vec<f64> = (0..5).map(|i| coords.get(i, 0)).collect();
        let spread: f64 = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let sum: f64 = vals.iter().sum();
        assert!(spread > 1.0);
        assert!(sum.abs() < 1e-2 * spread);
    }

    #[test]
    fn spectral_path_graph_is_monotone() {
        let g = chain_graph();
        let (coords, fell_back) = spectral_init(&g, 1, 11);
        assert!(!fell_back);
        let v: Vec<f64> = (0..3).map(|i| coords.get(i, 0)).collect();
        // dense closed form: the Fiedler vector of the 3-path is (1, 0, -1)
        // up to sign, so the sequence is strictly monotone
        assert!(
            (v[0] < v[1] && v[1] < v[2]) || (v[0] > v[1] && v[1] > v[2]),
            "not monotone: {v:?}"
        );
        let mid = (v[0] + v[2]) / 2.0;
        assert!((v[1] - mid).abs() < 1e-2);
    }

    #[test]
    fn single_edge_pair_ends_up_close() {
        let g = FuzzyGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let cfg = LayoutConfig {
            n_epochs: Some(500),
            init: InitMethod::Random,
            seed: 5,
            ..Default::default()
        };
        let emb = optimize_layout(&g, &cfg).unwrap();
        let d = crate::matrix::euclidean(emb.coords.row(0), emb.coords.row(1));
        assert!(d < 0.1, "pair with v=1 ended {d} apart");
    }

    #[test]
    fn layout_is_reproducible_for_fixed_seed() {
        let g = FuzzyGraph::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (3, 5, 1.0)],
        )
        .unwrap();
        let cfg = LayoutConfig {
            n_epochs: Some(100),
            seed: 21,
            ..Default::default()
        };
        let e1 = optimize_layout(&g, &cfg).unwrap();
        let e2 = optimize_layout(&g, &cfg).unwrap();
        assert_eq!(e1.coords, e2.coords);
        let e3 = optimize_layout(&g, &cfg.clone().with_seed(22)).unwrap();
        assert_ne!(e3.coords, e1.coords);
    }

    #[test]
    fn layout_reduces_cross_entropy_from_random_start() {
        let g = FuzzyGraph::from_edges(
            8,
            &[
                (0, 1, 1.0),
                (1, 2, 0.9),
                (0, 2, 0.8),
                (3, 4, 1.0),
                (4, 5, 0.9),
                (3, 5, 0.8),
                (6, 7, 1.0),
            ],
        )
        .unwrap();
        let cfg = LayoutConfig {
            n_epochs: Some(300),
            init: InitMethod::Random,
            seed: 9,
            ..Default::default()
        };
        let before = cross_entropy(&g, &random_init(8, 2, 9), cfg.a, cfg.b).unwrap();
        let emb = optimize_layout(&g, &cfg).unwrap();
        assert!(emb.loss < before, "loss {} !< {}", emb.loss, before);
        assert!(emb.coords.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn empty_graph_rejected() {
        let g = FuzzyGraph::from_edges(3, &[]).unwrap();
        assert!(optimize_layout(&g, &LayoutConfig::default()).is_err());
    }

    #[test]
    fn cross_entropy_invariant_under_rigid_motion() {
        let g = chain_graph();
        let coords = Matrix::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, -0.5]]).unwrap();
        let c0 = cross_entropy(&g, &coords, 1.929, 0.7915).unwrap();
        let theta: f64 = 0.83;
        let (s, c) = theta.sin_cos();
        let moved = Matrix::from_rows(
            coords
                .iter_rows()
                .map(|r| vec![c * r[0] - s * r[1] + 3.0, s * r[0] + c * r[1] - 7.0])
                .collect(),
        )
        .unwrap();
        let c1 = cross_entropy(&g, &moved, 1.929, 0.7915).unwrap();
        assert!((c0 - c1).abs() < 1e-9);
    }
}
