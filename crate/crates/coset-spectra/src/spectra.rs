//! Dense symmetric eigensolver (Householder tridiagonalization followed by
//! implicit-shift QL), spectrum reports, Ramanujan certification, and
//! multiset comparison against predicted spectra.
//!
//! A cyclic Jacobi solver is kept as a slow reference implementation for
//! cross-validation, and inverse iteration recovers eigenvectors for
//! residual spot checks.

use serde::Serialize;

use crate::cayley::Graph;
use crate::error::{Error, Result};

/// Hard cap on the dense eigensolver input size.
pub const MAX_EIGEN_N: usize = 20_000;

fn check_symmetric(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    let mut scale = 0.0f64;
    for row in a {
        if row.len() != n {
            return Err(Error::NotSymmetric);
        }
        for &x in row {
            scale = scale.max(x.abs());
        }
    }
    let tol = 1e-12 * scale.max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[i][j] - a[j][i]).abs() > tol {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(scale)
}

/// Householder reduction to tridiagonal form, eigenvalues-only variant.
/// On return `d` holds the diagonal and `e[1..]` the subdiagonal.
fn householder_tridiag(a: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i][k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i][i];
    }
}

/// QL iteration with implicit shifts on a tridiagonal matrix.
fn tql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // deflation threshold relative to the matrix scale; orthogonal
    // similarity keeps all entries bounded by the initial norm, so an
    // off-diagonal below eps * scale is an exact-zero split
    let scale = d
        .iter()
        .zip(e.iter())
        .map(|(x, y)| x.abs() + y.abs())
        .fold(0.0f64, f64::max);
    let thresh = f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                if e[m].abs() <= thresh {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 30 {
                return Err(Error::NoConvergence(30 * n));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m as isize - 1;
            let mut underflow = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = f.hypot(g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                let t = (d[iu] - g) * s + 2.0 * c * b;
                p = s * t;
                d[iu + 1] = g + p;
                g = c * t - b;
                i -= 1;
            }
            if underflow && i >= l as isize {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric real matrix, sorted descending.
pub fn sym_eigenvalues(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = a.len();
    if n > MAX_EIGEN_N {
        return Err(Error::InvalidInput(format!(
            "matrix size {n} exceeds {MAX_EIGEN_N}"
        )));
    }
    check_symmetric(a)?;
    let mut work: Vec<Vec<f64>> = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut work, &mut d, &mut e);
    tql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(d)
}

/// Cyclic Jacobi reference solver; slower but independent of the QL path.
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let scale = check_symmetric(a)?;
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() <= 1e-13 * scale.max(1.0) * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(d)
}

fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        b.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            // keep the factorization alive; inverse iteration wants near-singular
            a[col][col] = 1e-300;
        }
        let pivot = a[col][col];
        for r in (col + 1)..n {
            let factor = a[r][col] / pivot;
            if factor != 0.0 {
                for k in col..n {
                    let v = a[col][k];
                    a[r][k] -= factor * v;
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in (r + 1)..n {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    x
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v {
            *x /= norm;
        }
    }
}

/// Inverse iteration: a unit eigenvector for the eigenvalue closest to
/// `lambda`. Used to spot-check solver residuals.
pub fn eigenvector_for(a: &[Vec<f64>], lambda: f64) -> Vec<f64> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    let mut shifted = a.to_vec();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= lambda + 1e-10 * scale;
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * i as f64).collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut w = lu_solve(shifted.clone(), v.clone());
        normalize(&mut w);
        v = w;
    }
    v
}

pub fn residual(a: &[Vec<f64>], v: &[f64], lambda: f64) -> f64 {
    let n = a.len();
    let mut res = 0.0;
    for i in 0..n {
        let mut av = 0.0;
        for j in 0..n {
            av += a[i][j] * v[j];
        }
        res += (av - lambda * v[i]).powi(2);
    }
    res.sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// (value, multiplicity) after clustering at 1e-6 * k.
    pub clustered: Vec<(f64, usize)>,
    /// Eigenvalues equal to +-k.
    pub trivial: Vec<f64>,
    pub max_nontrivial_abs: f64,
    /// 2 sqrt(k-1).
    pub ramanujan_bound: f64,
    /// 2 sqrt(q).
    pub sqrt_q_bound: f64,
}

impl SpectrumReport {
    pub fn new(q: u32, k: usize, mut eigenvalues: Vec<f64>) -> SpectrumReport {
        eigenvalues.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let kf = k as f64;
        let cluster_tol = 1e-6 * kf.max(1.0);
        let mut clustered: Vec<(f64, usize)> = Vec::new();
        for &ev in &eigenvalues {
            match clustered.last_mut() {
                Some((v, m)) if (*v - ev).abs() <= cluster_tol => *m += 1,
                _ => clustered.push((ev, 1)),
            }
        }
        let trivial_tol = 1e-8 * kf.max(1.0);
        let trivial: Vec<f64> = eigenvalues
            .iter()
            .copied()
            .filter(|ev| (ev.abs() - kf).abs() <= trivial_tol)
            .collect();
        let max_nontrivial_abs = eigenvalues
            .iter()
            .copied()
            .filter(|ev| ev.abs() < kf - trivial_tol)
            .fold(0.0f64, |m, ev| m.max(ev.abs()));
        SpectrumReport {
            n: eigenvalues.len(),
            k,
            q,
            eigenvalues,
            clustered,
            trivial,
            max_nontrivial_abs,
            ramanujan_bound: 2.0 * (kf - 1.0).sqrt(),
            sqrt_q_bound: 2.0 * (q as f64).sqrt(),
        }
    }

    pub fn from_graph(g: &Graph) -> Result<SpectrumReport> {
        let eigs = sym_eigenvalues(&g.dense())?;
        Ok(SpectrumReport::new(g.q, g.k, eigs))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CertResult {
    pub ramanujan: bool,
    pub sqrt_q_bound_holds: bool,
}

/// Certify the eigenvalue bounds: every nontrivial eigenvalue (|ev| below
/// k - tol) must fit under the bound plus tol, with tol = 1e-8 k.
pub fn certify(r: &SpectrumReport) -> CertResult {
    let kf = r.k as f64;
    let tol = 1e-8 * kf.max(1.0);
    let nontrivial = || {
        r.eigenvalues
            .iter()
            .copied()
            .filter(|ev| ev.abs() < kf - tol)
    };
    CertResult {
        ramanujan: nontrivial().all(|ev| ev.abs() <= r.ramanujan_bound + tol),
        sqrt_q_bound_holds: nontrivial().all(|ev| ev.abs() <= r.sqrt_q_bound + tol),
    }
}

/// Closed m-walk counts from adjacency lists, m = 0..=4.
fn closed_walks(g: &Graph) -> [f64; 5] {
    let n = g.n;
    let w0 = n as f64;
    let w1 = 0.0;
    let w2 = (n * g.k) as f64;
    // trace(A^3) via common-neighbor counts over edges
    let mut w3 = 0.0;
    for i in 0..n {
        for &j in &g.adj[i] {
            let (mut a, mut b) = (0usize, 0usize);
            let (ai, aj) = (&g.adj[i], &g.adj[j as usize]);
            let mut common = 0.0;
            while a < ai.len() && b < aj.len() {
                match ai[a].cmp(&aj[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        common += 1.0;
                        a += 1;
                        b += 1;
                    }
                }
            }
            w3 += common;
        }
    }
    // trace(A^4) = sum over i of sum_j (A^2)_{ij}^2
    let mut w4 = 0.0;
    let mut counts = vec![0.0f64; n];
    for i in 0..n {
        let mut touched = Vec::new();
        for &j in &g.adj[i] {
            for &l in &g.adj[j as usize] {
                if counts[l as usize] == 0.0 {
                    touched.push(l as usize);
                }
                counts[l as usize] += 1.0;
            }
        }
        for &l in &touched {
            w4 += counts[l] * counts[l];
            counts[l] = 0.0;
        }
    }
    [w0, w1, w2, w3, w4]
}

/// Power sums of the spectrum must reproduce closed-walk counts.
pub fn moment_check(g: &Graph, eigenvalues: &[f64]) -> bool {
    let walks = closed_walks(g);
    let kf = (g.k as f64).max(1.0);
    for (m, &w) in walks.iter().enumerate() {
        let power_sum: f64 = eigenvalues.iter().map(|ev| ev.powi(m as i32)).sum();
        let tol = 1e-6 * g.n as f64 * kf.powi(m as i32);
        if (power_sum - w).abs() > tol {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchReport {
    pub success: bool,
    pub max_distance: f64,
    pub worst_pair: (f64, f64),
}

/// Compare two eigenvalue multisets by sorting and pairing elementwise.
pub fn match_multiset(computed: &[f64], predicted: &[f64], tol: f64) -> Result<MatchReport> {
    if computed.len() != predicted.len() {
        return Err(Error::CardinalityMismatch(computed.len(), predicted.len()));
    }
    let mut a = computed.to_vec();
    let mut b = predicted.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut max_distance = 0.0;
    let mut worst_pair = (f64::NAN, f64::NAN);
    for (&x, &y) in a.iter().zip(&b) {
        let d = (x - y).abs();
        if d >= max_distance {
            max_distance = d;
            worst_pair = (x, y);
        }
    }
    Ok(MatchReport {
        success: max_distance <= tol,
        max_distance,
        worst_pair,
    })
}

/// True when `sub` embeds into `sup` respecting multiplicity, within tol.
pub fn is_sub_multiset(sub: &[f64], sup: &[f64], tol: f64) -> bool {
    let mut a = sub.to_vec();
    let mut b = sup.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut j = 0;
    for &x in &a {
        loop {
            if j >= b.len() {
                return false;
            }
            if (x - b[j]).abs() <= tol {
                j += 1;
                break;
            }
            if b[j] > x + tol {
                j += 1;
            } else {
                return false;
            }
        }
    }
    true
}
