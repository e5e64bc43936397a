//! Explicit Kirillov models for the irreducible representations of
//! PGL2(F_q) of degree greater than one: generator matrices, Bruhat
//! factorization, subgroup-fixed vectors by averaging projection, Whittaker
//! lifts to coset functions, and eigenfunction verification on the graphs.
//!
//! The model space is spanned by the multiplicative characters of F_q^x
//! (all kinds), plus a Dirac vector D0 (Steinberg, principal) and D_inf
//! (principal only). The torus element h_r acts diagonally, u_s acts by a
//! Gauss-sum kernel, and the Weyl element w carries the epsilon factors
//! that distinguish the representations. A Kirillov vector's "value at 1"
//! is the sum of its character coordinates.

use crate::cayley::Graph;
use crate::characters::{AddChar, Chars, Cplx, MultChar, RepKind, TorusChar};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTable};
use crate::pgl2::{self, CosetSpace, PglElement};

/// Row-major complex matrix.
pub type CMat = Vec<Vec<Cplx>>;

pub fn mat_identity(n: usize) -> CMat {
    let mut m = vec![vec![Cplx::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Cplx::new(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![Cplx::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik == Cplx::new(0.0, 0.0) {
                continue;
            }
            for (j, &bkj) in b[k].iter().enumerate() {
                out[i][j] += aik * bkj;
            }
        }
    }
    out
}

pub fn mat_vec(a: &CMat, v: &[Cplx]) -> Vec<Cplx> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&m, &x)| m * x).sum())
        .collect()
}

pub fn mat_max_diff(a: &CMat, b: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

/// Bruhat factorization of a canonical element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruhatForm {
    /// g = u_x h_y (upper triangular).
    Upper { x: Elem, y: Elem },
    /// g = u_x1 h_y w u_x2.
    Generic { x1: Elem, y: Elem, x2: Elem },
}

pub fn bruhat(f: &FieldTable, g: PglElement) -> BruhatForm {
    if g.c == 0 {
        BruhatForm::Upper {
            x: f.div(g.b, g.d).unwrap(),
            y: f.div(g.a, g.d).unwrap(),
        }
    } else {
        let ci = f.inv(g.c).unwrap();
        let (a, b, d) = (f.mul(g.a, ci), f.mul(g.b, ci), f.mul(g.d, ci));
        BruhatForm::Generic {
            x1: a,
            y: f.sub(f.mul(a, d), b),
            x2: d,
        }
    }
}

pub fn recompose(f: &FieldTable, form: BruhatForm) -> PglElement {
    let u = |x: Elem| PglElement {
        a: 1,
        b: x,
        c: 0,
        d: 1,
    };
    let h = |y: Elem| pgl2::canonicalize(f, y, 0, 0, 1).unwrap();
    match form {
        BruhatForm::Upper { x, y } => pgl2::mul(f, u(x), h(y)),
        BruhatForm::Generic { x1, y, x2 } => {
            let w = PglElement::weyl(f);
            pgl2::mul(f, pgl2::mul(f, pgl2::mul(f, u(x1), h(y)), w), u(x2))
        }
    }
}

/// One representation realized on its Kirillov model for a fixed psi.
pub struct RepInstance<'a> {
    pub kind: RepKind,
    pub psi: AddChar,
    chars: &'a Chars<'a>,
    pub dim: usize,
    nchars: usize,
    pub d0: Option<usize>,
    pub dinf: Option<usize>,
    eps: Vec<Cplx>,
    gauss: Vec<Cplx>,
    mu: Option<MultChar>,
    w_matrix: CMat,
}

impl<'a> RepInstance<'a> {
    pub fn new(chars: &'a Chars<'a>, kind: RepKind, psi: AddChar) -> Result<RepInstance<'a>> {
        if psi.a == 0 {
            return Err(Error::TrivialPsi);
        }
        chars.check_rep_kind(kind)?;
        let q = chars.field().q();
        let nchars = (q - 1) as usize;
        let (dim, d0, dinf, mu) = match kind {
            RepKind::Discrete(_) => (nchars, None, None, None),
            RepKind::Steinberg(m) => (nchars + 1, Some(nchars), None, Some(m)),
            RepKind::Principal(m) => (nchars + 2, Some(nchars), Some(nchars + 1), Some(m)),
        };
        let eps: Vec<Cplx> = (0..q - 1)
            .map(|j| chars.epsilon(kind, MultChar { j }, psi))
            .collect::<Result<_>>()?;
        let gauss: Vec<Cplx> = (0..q - 1)
            .map(|j| chars.gauss_sum(MultChar { j }, psi))
            .collect::<Result<_>>()?;
        let mut rep = RepInstance {
            kind,
            psi,
            chars,
            dim,
            nchars,
            d0,
            dinf,
            eps,
            gauss,
            mu,
            w_matrix: Vec::new(),
        };
        rep.w_matrix = rep.build_w();
        Ok(rep)
    }

    pub fn chars(&self) -> &Chars<'a> {
        self.chars
    }

    pub fn epsilon(&self, chi: MultChar) -> Cplx {
        self.eps[(chi.j as usize) % self.nchars]
    }

    fn n(&self) -> u32 {
        self.nchars as u32
    }

    /// pi(h_r): diagonal, alpha(r) on characters, mu(r) on D0 and
    /// mu^{-1}(r) on D_inf.
    pub fn act_h(&self, r: Elem) -> Result<CMat> {
        if r == 0 {
            return Err(Error::ZeroParam);
        }
        let mut m = vec![vec![Cplx::new(0.0, 0.0); self.dim]; self.dim];
        for j in 0..self.nchars {
            m[j][j] = self.chars.eval_mult(MultChar { j: j as u32 }, r)?;
        }
        if let (Some(i0), Some(mu)) = (self.d0, self.mu) {
            m[i0][i0] = self.chars.eval_mult(mu, r)?;
        }
        if let (Some(ii), Some(mu)) = (self.dinf, self.mu) {
            m[ii][ii] = self.chars.eval_mult(self.chars.mult_inv(mu), r)?;
        }
        Ok(m)
    }

    /// pi(u_s): the Gauss-sum kernel on characters, identity on the Diracs.
    pub fn act_u(&self, s: Elem) -> CMat {
        if s == 0 {
            return mat_identity(self.dim);
        }
        let scale = 1.0 / (self.nchars as f64);
        let mut m = vec![vec![Cplx::new(0.0, 0.0); self.dim]; self.dim];
        for b in 0..self.nchars {
            for a in 0..self.nchars {
                // coefficient of beta in pi(u_s) alpha:
                // (q-1)^{-1} (beta alpha^{-1})(s) Gamma(alpha beta^{-1}, psi)
                let diff = MultChar {
                    j: ((b + self.nchars - a) % self.nchars) as u32,
                };
                let val = self.chars.eval_mult(diff, s).unwrap()
                    * self.gauss[(self.nchars - diff.j as usize) % self.nchars];
                m[b][a] = val * scale;
            }
        }
        if let Some(i0) = self.d0 {
            m[i0][i0] = Cplx::new(1.0, 0.0);
        }
        if let Some(ii) = self.dinf {
            m[ii][ii] = Cplx::new(1.0, 0.0);
        }
        m
    }

    fn build_w(&self) -> CMat {
        let qf = self.chars.field().q() as f64;
        let n = self.nchars;
        let mut m = vec![vec![Cplx::new(0.0, 0.0); self.dim]; self.dim];
        for j in 0..n {
            let jinv = (n - j) % n;
            // pi(w) alpha = q^{-1} eps(pi, alpha, psi) alpha^{-1} + e(alpha)
            m[jinv][j] += self.eps[j] / qf;
            match self.kind {
                RepKind::Discrete(_) => {}
                RepKind::Steinberg(mu) => {
                    if (j as u32 + mu.j) % self.n() == 0 {
                        m[self.d0.unwrap()][j] += -(self.eps[j] / qf) * (qf * qf - 1.0);
                    }
                }
                RepKind::Principal(mu) => {
                    if (j as u32 + mu.j) % self.n() == 0 {
                        m[self.d0.unwrap()][j] += -(self.eps[j] / qf) * (qf - 1.0);
                    }
                    if j as u32 % self.n() == mu.j % self.n() {
                        m[self.dinf.unwrap()][j] += -(self.eps[j] / qf) * (qf - 1.0);
                    }
                }
            }
        }
        match self.kind {
            RepKind::Discrete(_) => {}
            RepKind::Steinberg(mu) => {
                // pi(w) D0 = -q^{-1} eps(pi, mu^{-1}, psi)(mu^{-1} + D0)
                let jm_inv = ((self.n() - mu.j % self.n()) % self.n()) as usize;
                let coeff = -self.eps[jm_inv] / qf;
                let i0 = self.d0.unwrap();
                m[jm_inv][i0] += coeff;
                m[i0][i0] += coeff;
            }
            RepKind::Principal(mu) => {
                let jm = (mu.j % self.n()) as usize;
                let jm_inv = ((self.n() - mu.j % self.n()) % self.n()) as usize;
                let i0 = self.d0.unwrap();
                let ii = self.dinf.unwrap();
                // pi(w) D0 = -q^{-1} eps(pi, mu, psi)(mu^{-1} + D_inf)
                let c0 = -self.eps[jm] / qf;
                m[jm_inv][i0] += c0;
                m[ii][i0] += c0;
                // pi(w) D_inf = -q^{-1} eps(pi, mu^{-1}, psi)(mu + D0)
                let ci = -self.eps[jm_inv] / qf;
                m[jm][ii] += ci;
                m[i0][ii] += ci;
            }
        }
        m
    }

    pub fn act_w(&self) -> CMat {
        self.w_matrix.clone()
    }

    /// pi(g) as the product of generator matrices along the Bruhat form.
    pub fn matrix(&self, g: PglElement) -> Result<CMat> {
        let f = self.chars.field();
        match bruhat(f, g) {
            BruhatForm::Upper { x, y } => Ok(mat_mul(&self.act_u(x), &self.act_h(y)?)),
            BruhatForm::Generic { x1, y, x2 } => {
                let m = mat_mul(&self.act_u(x1), &self.act_h(y)?);
                let m = mat_mul(&m, &self.w_matrix);
                Ok(mat_mul(&m, &self.act_u(x2)))
            }
        }
    }

    /// The averaging projector onto the H-fixed subspace.
    pub fn projector(&self, subgroup: &[PglElement]) -> Result<CMat> {
        let mut p = vec![vec![Cplx::new(0.0, 0.0); self.dim]; self.dim];
        for &h in subgroup {
            let m = self.matrix(h)?;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    p[i][j] += m[i][j];
                }
            }
        }
        let scale = 1.0 / subgroup.len() as f64;
        for row in &mut p {
            for x in row {
                *x *= scale;
            }
        }
        let p2 = mat_mul(&p, &p);
        let drift = mat_max_diff(&p2, &p);
        if drift > 1e-10 {
            return Err(Error::Construction(format!(
                "projector not idempotent, drift {drift:e}"
            )));
        }
        Ok(p)
    }

    /// Orthonormal basis of the H-fixed subspace, validated against the
    /// expected dimension.
    pub fn fixed_vectors(
        &self,
        subgroup: &[PglElement],
        expected: usize,
    ) -> Result<Vec<Vec<Cplx>>> {
        let p = self.projector(subgroup)?;
        let mut basis: Vec<Vec<Cplx>> = Vec::new();
        for col in 0..self.dim {
            let mut v: Vec<Cplx> = (0..self.dim).map(|r| p[r][col]).collect();
            for b in &basis {
                let inner: Cplx = b.iter().zip(&v).map(|(&x, &y)| x.conj() * y).sum();
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi -= inner * bi;
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for x in &mut v {
                    *x /= norm;
                }
                basis.push(v);
            }
        }
        if basis.len() != expected {
            return Err(Error::RankMismatch {
                got: basis.len(),
                expected,
            });
        }
        Ok(basis)
    }

    /// Value at 1 of a Kirillov vector: the sum of its character coordinates.
    pub fn value_at_one(&self, v: &[Cplx]) -> Cplx {
        v[..self.nchars].iter().sum()
    }

    /// Lift an H-fixed vector to the function gH -> (pi(g) v)(1) on the
    /// coset space.
    pub fn whittaker_lift(&self, v: &[Cplx], space: &CosetSpace) -> Result<Vec<Cplx>> {
        let vnorm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            return Ok(vec![Cplx::new(0.0, 0.0); space.len()]);
        }
        for &h in &space.subgroup {
            let hv = mat_vec(&self.matrix(h)?, v);
            let drift: f64 = hv
                .iter()
                .zip(v)
                .map(|(&a, &b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if drift > 1e-8 * vnorm {
                return Err(Error::NotFixed);
            }
        }
        let mut out = Vec::with_capacity(space.len());
        for &r in &space.reps {
            out.push(self.value_at_one(&mat_vec(&self.matrix(r)?, v)));
        }
        Ok(out)
    }
}

/// Closed-form torus values of the discrete-series Whittaker function
/// summed over all nontrivial psi. W_Lambda(h_1) = q + 1; for y != 1 the
/// value is -q^{-1} Gamma(Lambda, psi o tr) times the sum over the norm
/// fiber of y of conj(Lambda)(1 + (y+1)/(2z)).
pub fn w_lambda_closed_form(chars: &Chars, lam: TorusChar, y: Elem) -> Result<Cplx> {
    if !chars.torus_is_admissible(lam) {
        return Err(Error::InvalidParam(format!(
            "Lambda^2 = 1 for j = {}",
            lam.j
        )));
    }
    if y == 0 {
        return Err(Error::InvalidParam(
            "torus parameter y must be nonzero".into(),
        ));
    }
    let f = chars.field();
    let ext = chars.ext();
    let q = f.q() as f64;
    let psi = AddChar { a: 1 };
    let big_gamma = chars.gauss_sum_ext(lam, MultChar { j: 0 }, psi)?;
    if y == 1 {
        let s = chars.norm_one_sum(lam)?;
        Ok(-big_gamma * s / q + q)
    } else {
        let lam_bar = chars.torus_conj(lam);
        let half_y1 = f.div(f.add(y, 1), 2)?;
        let mut s = Cplx::new(0.0, 0.0);
        for z in ext.norm_fiber(y) {
            let arg = ext.add(ext.embed(1), ext.mul(ext.embed(half_y1), ext.inv(z)?));
            s += chars.eval_torus(lam_bar, arg)?;
        }
        Ok(-big_gamma * s / q)
    }
}

/// W_Lambda at an arbitrary group element by summing the normalized
/// psi-component lifts: for each nontrivial psi the K-fixed vector is
/// (q+1) P_psi (sum of all character basis vectors), and the component is
/// (q-1)^{-1} (pi(g) v)(1).
pub fn w_lambda_via_lifts(chars: &Chars, lam: TorusChar, g: PglElement) -> Result<Cplx> {
    let f = chars.field();
    let q = f.q();
    let delta = chars.ext().delta();
    let subgroup = pgl2::subgroup_elements(f, delta, pgl2::SubgroupKind::K);
    let mut total = Cplx::new(0.0, 0.0);
    for a in 1..q {
        let rep = RepInstance::new(chars, RepKind::Discrete(lam), AddChar { a })?;
        let p = rep.projector(&subgroup)?;
        let ones = vec![Cplx::new(1.0, 0.0); rep.dim];
        let mut v = mat_vec(&p, &ones);
        for x in &mut v {
            *x *= (q + 1) as f64;
        }
        let gv = mat_vec(&rep.matrix(g)?, &v);
        total += rep.value_at_one(&gv) / (q - 1) as f64;
    }
    Ok(total)
}

/// The discrete-series eigenfunction W_Lambda on G/K as a vertex function.
pub fn k_w_lambda_function(chars: &Chars, lam: TorusChar, space: &CosetSpace) -> Result<Vec<Cplx>> {
    let q = chars.field().q();
    let mut out = vec![Cplx::new(0.0, 0.0); space.len()];
    for a in 1..q {
        let rep = RepInstance::new(chars, RepKind::Discrete(lam), AddChar { a })?;
        let p = rep.projector(&space.subgroup)?;
        let ones = vec![Cplx::new(1.0, 0.0); rep.dim];
        let mut v = mat_vec(&p, &ones);
        for x in &mut v {
            *x *= (q + 1) as f64;
        }
        for (i, &r) in space.reps.iter().enumerate() {
            out[i] += rep.value_at_one(&mat_vec(&rep.matrix(r)?, &v)) / (q - 1) as f64;
        }
    }
    Ok(out)
}

/// The K-family eigenfunction f_mu: on the coset of (y, x; 0, 1) k it takes
/// the value mu(y).
pub fn k_f_mu(chars: &Chars, space: &CosetSpace, mu: MultChar) -> Result<Vec<Cplx>> {
    let f = chars.field();
    let mut out = Vec::with_capacity(space.len());
    for &r in &space.reps {
        let mut val = None;
        for &k in &space.subgroup {
            let b = pgl2::mul(f, r, k);
            if b.c == 0 {
                val = Some(chars.eval_mult(mu, f.div(b.a, b.d)?)?);
                break;
            }
        }
        out.push(val.expect("every K-coset meets the Borel subgroup"));
    }
    Ok(out)
}

/// U-family eigenfunction g_mu: mu(y) on cosets inside AU, zero elsewhere.
pub fn u_g_mu(chars: &Chars, space: &CosetSpace, mu: MultChar) -> Result<Vec<Cplx>> {
    let f = chars.field();
    space
        .reps
        .iter()
        .map(|&r| {
            if r.c == 0 {
                chars.eval_mult(mu, f.div(r.a, r.d)?)
            } else {
                Ok(Cplx::new(0.0, 0.0))
            }
        })
        .collect()
}

/// U-family eigenfunction h_mu: mu(det/c^2) on cosets of AUwU, zero on AU.
pub fn u_h_mu(chars: &Chars, space: &CosetSpace, mu: MultChar) -> Result<Vec<Cplx>> {
    let f = chars.field();
    space
        .reps
        .iter()
        .map(|&r| {
            if r.c != 0 {
                let y = f.div(pgl2::det(f, r), f.mul(r.c, r.c))?;
                chars.eval_mult(mu, y)
            } else {
                Ok(Cplx::new(0.0, 0.0))
            }
        })
        .collect()
}

/// Principal-series U-eigenfunction from the nontrivial-psi sector: the lift
/// of sign*sqrt(q) eps(pi,mu,psi)^{-1} mu(t) D0 - D_inf; eigenvalue
/// sign*sqrt(q).
pub fn u_principal_eigenfunction(
    rep: &RepInstance,
    space: &CosetSpace,
    t: Elem,
    sign: f64,
) -> Result<Vec<Cplx>> {
    let mu = match rep.kind {
        RepKind::Principal(m) => m,
        _ => return Err(Error::InvalidParam("principal series required".into())),
    };
    let chars = rep.chars();
    let mut v = vec![Cplx::new(0.0, 0.0); rep.dim];
    let q = chars.field().q() as f64;
    let coeff = sign * q.sqrt() * chars.eval_mult(mu, t)? / rep.epsilon(mu);
    v[rep.d0.unwrap()] = coeff;
    v[rep.dinf.unwrap()] = Cplx::new(-1.0, 0.0);
    rep.whittaker_lift(&v, space)
}

/// Which of the three (B, A) cells a coset of G/A lies in:
/// 1 = Borel cell (c = 0), 3 = Bw cell (d = 0), 2 = middle cell.
pub fn a_cells(space: &CosetSpace) -> Vec<u8> {
    space
        .reps
        .iter()
        .map(|r| {
            if r.c == 0 {
                1
            } else if r.d == 0 {
                3
            } else {
                2
            }
        })
        .collect()
}

/// A-family eigenfunction f_mu: mu(y) on the coset of (y, x; 0, 1) m A in
/// the middle cell (m the fixed cell representative), zero on the others.
pub fn a_f_mu(chars: &Chars, space: &CosetSpace, mu: MultChar) -> Result<Vec<Cplx>> {
    let f = chars.field();
    let m_inv = pgl2::canonicalize(f, 1, f.neg(1), 1, 0).unwrap();
    let cells = a_cells(space);
    let mut out = Vec::with_capacity(space.len());
    for (i, &r) in space.reps.iter().enumerate() {
        if cells[i] != 2 {
            out.push(Cplx::new(0.0, 0.0));
            continue;
        }
        let mut val = None;
        for &a in &space.subgroup {
            let b = pgl2::mul(f, pgl2::mul(f, r, pgl2::inv(f, a)), m_inv);
            if b.c == 0 {
                val = Some(chars.eval_mult(mu, f.div(b.a, b.d)?)?);
                break;
            }
        }
        out.push(val.expect("middle-cell cosets factor through the cell representative"));
    }
    Ok(out)
}

/// A linear combination of the three cell indicator functions.
pub fn a_cell_combination(space: &CosetSpace, coeffs: [f64; 3]) -> Vec<Cplx> {
    a_cells(space)
        .iter()
        .map(|&c| Cplx::new(coeffs[(c - 1) as usize], 0.0))
        .collect()
}

/// Lift c_w1 * W_1 + c_d0 * W_{D0} to a vertex function on G/A; the D0 part
/// only exists for the Steinberg pi_1.
pub fn a_whittaker_function(
    rep: &RepInstance,
    space: &CosetSpace,
    c_w1: f64,
    c_d0: f64,
) -> Result<Vec<Cplx>> {
    let mut v = vec![Cplx::new(0.0, 0.0); rep.dim];
    v[0] = Cplx::new(c_w1, 0.0); // index 0 is the trivial character chi_0
    if c_d0 != 0.0 {
        match rep.kind {
            RepKind::Steinberg(m) if m.j == 0 => {
                v[rep.d0.unwrap()] = Cplx::new(c_d0, 0.0);
            }
            _ => {
                return Err(Error::InvalidParam(
                    "W_D0 only exists for the Steinberg pi_1".into(),
                ))
            }
        }
    }
    rep.whittaker_lift(&v, space)
}

/// Relative residual ||A f - lambda f|| / ||f|| of a candidate eigenpair.
pub fn verify_eigenpair(g: &Graph, fv: &[Cplx], lambda: f64) -> Result<f64> {
    let norm = fv.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mut res = 0.0;
    for (i, nbrs) in g.adj.iter().enumerate() {
        let mut acc = Cplx::new(0.0, 0.0);
        for &j in nbrs {
            acc += fv[j as usize];
        }
        res += (acc - lambda * fv[i]).norm_sqr();
    }
    Ok(res.sqrt() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtFieldTable;
    use crate::pgl2::SubgroupKind;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Fx {
        f: FieldTable,
        ext: ExtFieldTable,
    }

    impl Fx {
        fn new(p: u32, e: u32) -> Fx {
            let f = FieldTable::build(p, e).unwrap();
            let ext = ExtFieldTable::build(&f, f.find_nonsquare()).unwrap();
            Fx { f, ext }
        }
    }

    fn rep_kinds(ch: &Chars) -> Vec<RepKind> {
        let q = ch.field().q();
        let mut kinds = vec![
            RepKind::Steinberg(MultChar { j: 0 }),
            RepKind::Steinberg(MultChar { j: (q - 1) / 2 }),
        ];
        for j in 1..(q - 1) / 2 {
            kinds.push(RepKind::Principal(MultChar { j }));
        }
        for j in 1..(q + 1) / 2 {
            kinds.push(RepKind::Discrete(TorusChar { j }));
        }
        kinds
    }

    #[test]
    fn bruhat_round_trip() {
        let fx = Fx::new(5, 1);
        assert_eq!(
            bruhat(&fx.f, PglElement::identity()),
            BruhatForm::Upper { x: 0, y: 1 }
        );
        let w = PglElement::weyl(&fx.f);
        assert_eq!(bruhat(&fx.f, w), BruhatForm::Generic { x1: 0, y: 1, x2: 0 });
        for g in pgl2::enumerate_group(&fx.f) {
            assert_eq!(recompose(&fx.f, bruhat(&fx.f, g)), g);
        }
    }

    #[test]
    fn generator_matrices_basics() {
        let fx = Fx::new(5, 1);
        let ch = Chars::new(&fx.f, &fx.ext);
        for kind in rep_kinds(&ch) {
            let rep = RepInstance::new(&ch, kind, AddChar { a: 1 }).unwrap();
            // u_0 is the identity
            assert!(mat_max_diff(&rep.act_u(0), &mat_identity(rep.dim)) < 1e-15);
            // h_r is diagonal with alpha(r) entries
            let m = rep.act_h(2).unwrap();
            for j in 0..(fx.f.q() - 1) as usize {
                let expect = ch.eval_mult(MultChar { j: j as u32 }, 2).unwrap();
                assert!((m[j][j] - expect).norm() < 1e-15);
            }
            // w^2 = identity in PGL2
            let w2 = mat_mul(&rep.act_w(), &rep.act_w());
            assert!(
                mat_max_diff(&w2, &mat_identity(rep.dim)) < 1e-9,
                "w^2 = 1 fails for {kind:?}"
            );
            // pi(identity) = identity
            let id = rep.matrix(PglElement::identity()).unwrap();
            assert!(mat_max_diff(&id, &mat_identity(rep.dim)) < 1e-12);
        }
    }

    #[test]
    fn u_action_is_additive() {
        let fx = Fx::new(7, 1);
        let ch = Chars::new(&fx.f, &fx.ext);
        for kind in rep_kinds(&ch).into_iter().take(3) {
            let rep = RepInstance::new(&ch, kind, AddChar { a: 1 }).unwrap();
            for s1 in 0..3 {
                for s2 in 0..3 {
                    let lhs = mat_mul(&rep.act_u(s1), &rep.act_u(s2));
                    let rhs = rep.act_u(fx.f.add(s1, s2));
                    assert!(mat_max_diff(&lhs, &rhs) < 1e-9, "u_s additivity {kind:?}");
                }
            }
        }
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let fx = Fx::new(p, e);
            let ch = Chars::new(&fx.f, &fx.ext);
            let group = pgl2::enumerate_group(&fx.f);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for kind in rep_kinds(&ch) {
                let rep = RepInstance::new(&ch, kind, AddChar { a: 1 }).unwrap();
                for _ in 0..25 {
                    let g1 = group[rng.random_range(0..group.len())];
                    let g2 = group[rng.random_range(0..group.len())];
                    let lhs = rep.matrix(pgl2::mul(&fx.f, g1, g2)).unwrap();
                    let rhs = mat_mul(&rep.matrix(g1).unwrap(), &rep.matrix(g2).unwrap());
                    assert!(
                        mat_max_diff(&lhs, &rhs) < 1e-9,
                        "homomorphism fails for {kind:?} at q={}",
                        fx.f.q()
                    );
                }
            }
        }
    }

    #[test]
    fn fixed_space_ranks() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let fx = Fx::new(p, e);
            let ch = Chars::new(&fx.f, &fx.ext);
            let d = fx.ext.delta();
            for kind in rep_kinds(&ch) {
                let rep = RepInstance::new(&ch, kind, AddChar { a: 1 }).unwrap();
                for sub in [SubgroupKind::U, SubgroupKind::A, SubgroupKind::K] {
                    let elems = pgl2::subgroup_elements(&fx.f, d, sub);
                    let expected = match (sub, kind) {
                        (SubgroupKind::U, RepKind::Discrete(_)) => 0,
                        (SubgroupKind::U, RepKind::Steinberg(_)) => 1,
                        (SubgroupKind::U, RepKind::Principal(_)) => 2,
                        (SubgroupKind::A, RepKind::Steinberg(m)) if m.j == 0 => 2,
                        (SubgroupKind::A, _) => 1,
                        (SubgroupKind::K, RepKind::Steinberg(m)) if m.j == 0 => 0,
                        (SubgroupKind::K, _) => 1,
                    };
                    let got = rep.fixed_vectors(&elems, expected);
                    assert!(got.is_ok(), "rank mismatch for {kind:?} {sub:?}: {got:?}");
                }
            }
        }
    }

    #[test]
    fn u_fixed_vectors_are_diracs() {
        let fx = Fx::new(5, 1);
        let ch = Chars::new(&fx.f, &fx.ext);
        let u = pgl2::subgroup_elements(&fx.f, fx.ext.delta(), SubgroupKind::U);
        let rep =
            RepInstance::new(&ch, RepKind::Principal(MultChar { j: 1 }), AddChar { a: 1 }).unwrap();
        let basis = rep.fixed_vectors(&u, 2).unwrap();
        // the fixed space is exactly span{D0, Dinf}: character coordinates vanish
        for v in &basis {
            for &x in &v[..(fx.f.q() - 1) as usize] {
                assert!(x.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn w_lambda_identity_value_and_symmetry() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let fx = Fx::new(p, e);
            let ch = Chars::new(&fx.f, &fx.ext);
            let q = fx.f.q() as f64;
            for l in ch.torus_chars().filter(|&l| ch.torus_is_admissible(l)) {
                let at_one = w_lambda_closed_form(&ch, l, 1).unwrap();
                assert!(
                    (at_one - Cplx::new(q + 1.0, 0.0)).norm() < 1e-8,
                    "W(1) = q+1 at q={q} j={}",
                    l.j
                );
                for y in fx.f.units() {
                    let a = w_lambda_closed_form(&ch, l, y).unwrap();
                    let b = w_lambda_closed_form(&ch, l, fx.f.inv(y).unwrap()).unwrap();
                    assert!((a - b).norm() < 1e-8, "torus symmetry");
                }
            }
        }
    }

    #[test]
    fn w_lambda_closed_form_matches_lifts() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let fx = Fx::new(p, e);
            let ch = Chars::new(&fx.f, &fx.ext);
            for l in ch.torus_chars().filter(|&l| ch.torus_is_admissible(l)) {
                for y in fx.f.units() {
                    let closed = w_lambda_closed_form(&ch, l, y).unwrap();
                    let h_y = pgl2::canonicalize(&fx.f, y, 0, 0, 1).unwrap();
                    let lifted = w_lambda_via_lifts(&ch, l, h_y).unwrap();
                    assert!(
                        (closed - lifted).norm() < 1e-8,
                        "q={} j={} y={y}: {closed} vs {lifted}",
                        fx.f.q(),
                        l.j
                    );
                }
            }
        }
    }

    #[test]
    fn zero_vector_lifts_to_zero() {
        let fx = Fx::new(3, 1);
        let ch = Chars::new(&fx.f, &fx.ext);
        let space = CosetSpace::build(&fx.f, fx.ext.delta(), SubgroupKind::K);
        let rep =
            RepInstance::new(&ch, RepKind::Discrete(TorusChar { j: 1 }), AddChar { a: 1 }).unwrap();
        let z = vec![Cplx::new(0.0, 0.0); rep.dim];
        let lift = rep.whittaker_lift(&z, &space).unwrap();
        assert!(lift.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn non_fixed_vector_rejected() {
        let fx = Fx::new(3, 1);
        let ch = Chars::new(&fx.f, &fx.ext);
        let space = CosetSpace::build(&fx.f, fx.ext.delta(), SubgroupKind::K);
        let rep =
            RepInstance::new(&ch, RepKind::Discrete(TorusChar { j: 1 }), AddChar { a: 1 }).unwrap();
        // e_{chi_1} lies in the kernel of the K-projector at q=3
        let mut v = vec![Cplx::new(0.0, 0.0); rep.dim];
        v[1] = Cplx::new(1.0, 0.0);
        assert!(matches!(
            rep.whittaker_lift(&v, &space),
            Err(Error::NotFixed)
        ));
    }

    #[test]
    fn a_cells_have_expected_sizes() {
        let fx = Fx::new(5, 1);
        let space = CosetSpace::build(&fx.f, fx.ext.delta(), SubgroupKind::A);
        let cells = a_cells(&space);
        let q = fx.f.q() as usize;
        let count = |c: u8| cells.iter().filter(|&&x| x == c).count();
        assert_eq!(count(1), q);
        assert_eq!(count(3), q);
        assert_eq!(count(2), q * (q - 1));
    }
}
